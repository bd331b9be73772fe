//! A self-contained bounded-variable primal simplex solver.
//!
//! Scope: the node relaxations of the branch-and-cut solver, i.e. dense
//! problems with a few hundred rows where every structural variable carries
//! finite bounds. Two phases over the same machinery: phase 1 drives the
//! total bound violation of the basic variables to zero, phase 2 optimizes.
//! The engine keeps the basis inverse across bound changes and row
//! additions, so re-solving after branching or cutting is cheap.
//!
//! Pivot rule: largest reduced cost, switching to Bland's rule after a run
//! of degenerate pivots. Tolerances: feasibility 1e-7, optimality 1e-9.

use crate::{Error, Result};

pub const FEASIBILITY_TOL: f64 = 1e-7;
pub const OPTIMALITY_TOL: f64 = 1e-9;
/// A variable is fractional when farther than this from both bounds.
pub const INTEGRALITY_TOL: f64 = 1e-6;

const PIVOT_TOL: f64 = 1e-9;
const DEGENERATE_STEP: f64 = 1e-10;
const BLAND_THRESHOLD: usize = 5_000;
const REFACTOR_EVERY: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowOp {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
struct VarDef {
    lower: f64,
    upper: f64,
    obj: f64,
}

#[derive(Debug, Clone)]
pub struct RowDef {
    pub terms: Vec<(usize, f64)>,
    pub op: RowOp,
    pub rhs: f64,
}

/// A minimization model over variables with finite bounds.
#[derive(Debug, Clone, Default)]
pub struct LPModel {
    vars: Vec<VarDef>,
    rows: Vec<RowDef>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LPStatus {
    Optimal,
    Infeasible,
    /// Numerical failure with a diagnostic message.
    Numerical(String),
}

#[derive(Debug, Clone)]
pub struct LPSolution {
    pub status: LPStatus,
    pub objective: f64,
    /// Values of the structural variables; empty unless optimal.
    pub values: Vec<f64>,
}

impl LPModel {
    pub fn new() -> Self {
        LPModel::default()
    }

    pub fn add_var(&mut self, lower: f64, upper: f64, obj: f64) -> usize {
        assert!(lower.is_finite() && upper.is_finite(), "variables need finite bounds");
        self.vars.push(VarDef { lower, upper, obj });
        self.vars.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn set_var_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.vars[var].lower = lower;
        self.vars[var].upper = upper;
    }

    pub fn var_bounds(&self, var: usize) -> (f64, f64) {
        (self.vars[var].lower, self.vars[var].upper)
    }

    pub fn objective_coeff(&self, var: usize) -> f64 {
        self.vars[var].obj
    }

    pub fn add_row(&mut self, terms: Vec<(usize, f64)>, op: RowOp, rhs: f64) -> Result<usize> {
        if terms.iter().any(|&(v, _)| v >= self.vars.len()) {
            return Err(Error::Invalid("row references an unknown variable".into()));
        }
        self.rows.push(RowDef { terms, op, rhs });
        Ok(self.rows.len() - 1)
    }

    pub fn remove_row(&mut self, row: usize) -> Result<()> {
        if row >= self.rows.len() {
            return Err(Error::Invalid(format!("no row {row}")));
        }
        self.rows.remove(row);
        Ok(())
    }

    pub fn rows(&self) -> &[RowDef] {
        &self.rows
    }

    /// Plain-text dump of the model for debugging.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        out.push_str("min ");
        for (v, def) in self.vars.iter().enumerate() {
            if def.obj != 0.0 {
                out.push_str(&format!("{:+} x{v} ", def.obj));
            }
        }
        out.push('\n');
        for row in &self.rows {
            for &(v, a) in &row.terms {
                out.push_str(&format!("{a:+} x{v} "));
            }
            let op = match row.op {
                RowOp::Le => "<=",
                RowOp::Eq => "=",
                RowOp::Ge => ">=",
            };
            out.push_str(&format!("{op} {}\n", row.rhs));
        }
        for (v, def) in self.vars.iter().enumerate() {
            out.push_str(&format!("{} <= x{v} <= {}\n", def.lower, def.upper));
        }
        out
    }
}

/// Solves a model from a cold start.
pub fn solve_lp(model: &LPModel) -> LPSolution {
    SimplexEngine::from_model(model).solve()
}

/// Persistent simplex state; survives bound changes and row additions.
pub struct SimplexEngine {
    ncols: usize,
    lower: Vec<f64>, // structural then slacks
    upper: Vec<f64>,
    obj: Vec<f64>,
    rows: Vec<Vec<(usize, f64)>>, // normalized structural coefficients
    rhs: Vec<f64>,
    cols: Vec<Vec<(usize, f64)>>, // column-major view of the structural part
    basis: Vec<usize>,
    binv: Vec<Vec<f64>>,
    at_upper: Vec<bool>,
    in_basis: Vec<bool>,
}

enum Phase {
    One,
    Two,
}

impl SimplexEngine {
    pub fn from_model(model: &LPModel) -> Self {
        let ncols = model.vars.len();
        let mut engine = SimplexEngine {
            ncols,
            lower: model.vars.iter().map(|v| v.lower).collect(),
            upper: model.vars.iter().map(|v| v.upper).collect(),
            obj: model.vars.iter().map(|v| v.obj).collect(),
            rows: Vec::new(),
            rhs: Vec::new(),
            cols: vec![Vec::new(); ncols],
            basis: Vec::new(),
            binv: Vec::new(),
            at_upper: vec![false; ncols],
            in_basis: vec![false; ncols],
        };
        for row in &model.rows {
            engine.add_row(&row.terms, row.op, row.rhs);
        }
        engine
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Appends a row; its slack enters the basis, so the inverse only grows
    /// by a bordering row and column.
    pub fn add_row(&mut self, terms: &[(usize, f64)], op: RowOp, rhs: f64) {
        let (terms, rhs): (Vec<(usize, f64)>, f64) = match op {
            RowOp::Ge => (terms.iter().map(|&(v, a)| (v, -a)).collect(), -rhs),
            _ => (terms.to_vec(), rhs),
        };
        let m = self.rows.len();
        let slack_upper = if op == RowOp::Eq { 0.0 } else { f64::INFINITY };
        for &(v, a) in &terms {
            self.cols[v].push((m, a));
        }
        // border the inverse: the new slack is basic in the new row, and the
        // new row of the inverse eliminates the basic structural entries
        let mut new_row = vec![0.0; m + 1];
        new_row[m] = 1.0;
        for k in 0..m {
            self.binv[k].push(0.0);
        }
        for &(v, a) in &terms {
            if v < self.ncols && self.in_basis[v] {
                let r = self.basis.iter().position(|&b| b == v).expect("basic var has a row");
                for k in 0..m {
                    new_row[k] -= a * self.binv[r][k];
                }
            }
        }
        self.binv.push(new_row);
        self.rows.push(terms);
        self.rhs.push(rhs);
        self.lower.push(0.0);
        self.upper.push(slack_upper);
        self.obj.push(0.0);
        self.at_upper.push(false);
        self.in_basis.push(true);
        self.basis.push(self.ncols + m);
    }

    fn ncols_total(&self) -> usize {
        self.ncols + self.rows.len()
    }

    pub fn set_var_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    fn column(&self, var: usize, out: &mut [f64]) {
        out.fill(0.0);
        if var < self.ncols {
            for &(r, a) in &self.cols[var] {
                out[r] = a;
            }
        } else {
            out[var - self.ncols] = 1.0;
        }
    }

    fn nonbasic_value(&self, var: usize) -> f64 {
        if self.at_upper[var] {
            self.upper[var]
        } else {
            self.lower[var]
        }
    }

    /// `x_B = binv (rhs - N x_N)`.
    fn basic_values(&self) -> Vec<f64> {
        let m = self.rows.len();
        let mut t = self.rhs.clone();
        for v in 0..self.ncols {
            if !self.in_basis[v] {
                let xv = self.nonbasic_value(v);
                if xv != 0.0 {
                    for &(r, a) in &self.cols[v] {
                        t[r] -= a * xv;
                    }
                }
            }
        }
        for r in 0..m {
            let slack = self.ncols + r;
            if !self.in_basis[slack] {
                let xs = self.nonbasic_value(slack);
                if xs != 0.0 {
                    t[r] -= xs;
                }
            }
        }
        (0..m).map(|r| dot(&self.binv[r], &t)).collect()
    }

    /// Rebuilds the inverse from the recorded basis by Gauss-Jordan
    /// elimination with partial pivoting.
    fn refactorize(&mut self) -> std::result::Result<(), String> {
        let m = self.rows.len();
        let mut mat = vec![vec![0.0; m]; m];
        let mut col = vec![0.0; m];
        for (k, &v) in self.basis.iter().enumerate() {
            self.column(v, &mut col);
            for r in 0..m {
                mat[r][k] = col[r];
            }
        }
        let mut inv: Vec<Vec<f64>> = (0..m)
            .map(|r| {
                let mut row = vec![0.0; m];
                row[r] = 1.0;
                row
            })
            .collect();
        for c in 0..m {
            let pivot_row = (c..m)
                .max_by(|&a, &b| mat[a][c].abs().total_cmp(&mat[b][c].abs()))
                .expect("nonempty range");
            if mat[pivot_row][c].abs() < 1e-11 {
                return Err("singular basis".into());
            }
            mat.swap(c, pivot_row);
            inv.swap(c, pivot_row);
            let pivot = mat[c][c];
            for k in 0..m {
                mat[c][k] /= pivot;
                inv[c][k] /= pivot;
            }
            for r in 0..m {
                if r != c && mat[r][c] != 0.0 {
                    let factor = mat[r][c];
                    for k in 0..m {
                        mat[r][k] -= factor * mat[c][k];
                        inv[r][k] -= factor * inv[c][k];
                    }
                }
            }
        }
        // inv now maps unit vectors through the row-permuted elimination;
        // columns of B were placed per basis order, so inv is binv directly
        self.binv = inv;
        Ok(())
    }

    fn reset_to_slack_basis(&mut self) {
        let m = self.rows.len();
        self.in_basis = vec![false; self.ncols_total()];
        self.basis = (0..m).map(|r| self.ncols + r).collect();
        for r in 0..m {
            self.in_basis[self.ncols + r] = true;
        }
        self.at_upper = vec![false; self.ncols_total()];
        self.binv = (0..m)
            .map(|r| {
                let mut row = vec![0.0; m];
                row[r] = 1.0;
                row
            })
            .collect();
    }

    pub fn solve(&mut self) -> LPSolution {
        for v in 0..self.ncols {
            if self.lower[v] > self.upper[v] + 1e-12 {
                return LPSolution {
                    status: LPStatus::Infeasible,
                    objective: f64::INFINITY,
                    values: Vec::new(),
                };
            }
        }
        match self.run() {
            Ok(solution) => solution,
            Err(first) => {
                // retry once from scratch
                self.reset_to_slack_basis();
                match self.run() {
                    Ok(solution) => solution,
                    Err(second) => LPSolution {
                        status: LPStatus::Numerical(format!("{first}; retry: {second}")),
                        objective: f64::NAN,
                        values: Vec::new(),
                    },
                }
            }
        }
    }

    fn run(&mut self) -> std::result::Result<LPSolution, String> {
        let m = self.rows.len();
        // nonbasic fixed slacks of equality rows must sit at zero; moved
        // bounds may also strand a nonbasic variable on a stale flag
        for v in 0..self.ncols_total() {
            if !self.in_basis[v] && self.at_upper[v] && !self.upper[v].is_finite() {
                self.at_upper[v] = false;
            }
        }
        let limit = 40 * (m + self.ncols) + 10_000;
        let mut degenerate_run = 0usize;
        let mut iterations = 0usize;
        let mut pivots_since_refactor = 0usize;
        let mut feasibility_repairs = 0usize;
        let mut x_b;

        // the basic values are updated in place by every pivot and refreshed
        // from the inverse periodically and before any phase decision
        let mut stale;
        'phase1: loop {
            x_b = self.basic_values();
            stale = 0;
            loop {
                if pivots_since_refactor >= REFACTOR_EVERY {
                    self.refactorize()?;
                    pivots_since_refactor = 0;
                    x_b = self.basic_values();
                    stale = 0;
                }
                if stale >= 16 {
                    x_b = self.basic_values();
                    stale = 0;
                }
                if self.infeasibility(&x_b) <= FEASIBILITY_TOL {
                    x_b = self.basic_values();
                    stale = 0;
                    if self.infeasibility(&x_b) <= FEASIBILITY_TOL {
                        break;
                    }
                }
                iterations += 1;
                if iterations > limit {
                    return Err("iteration limit in phase 1".into());
                }
                let g = self.phase1_gradient(&x_b);
                let y = self.duals(&g);
                let bland = degenerate_run > BLAND_THRESHOLD;
                let Some((entering, sigma)) = self.price(&y, &Phase::One, bland) else {
                    // the inverse may have drifted; refactorize once before
                    // declaring the problem infeasible
                    if feasibility_repairs < 2 {
                        feasibility_repairs += 1;
                        self.refactorize()?;
                        pivots_since_refactor = 0;
                        let fresh = self.basic_values();
                        if self.infeasibility(&fresh) <= FEASIBILITY_TOL {
                            break;
                        }
                        continue;
                    }
                    return Ok(LPSolution {
                        status: LPStatus::Infeasible,
                        objective: f64::INFINITY,
                        values: Vec::new(),
                    });
                };
                let step = self.pivot_long_step(entering, sigma, &mut x_b)?;
                pivots_since_refactor += 1;
                stale += 1;
                degenerate_run = if step < DEGENERATE_STEP { degenerate_run + 1 } else { 0 };
            }

            // phase 2
            loop {
                if pivots_since_refactor >= REFACTOR_EVERY {
                    self.refactorize()?;
                    pivots_since_refactor = 0;
                    x_b = self.basic_values();
                    stale = 0;
                }
                if stale >= 16 {
                    x_b = self.basic_values();
                    stale = 0;
                }
                if self.infeasibility(&x_b) > FEASIBILITY_TOL * 10.0 {
                    // confirm on fresh values, then rebuild the inverse and
                    // repair via phase 1
                    x_b = self.basic_values();
                    stale = 0;
                    if self.infeasibility(&x_b) > FEASIBILITY_TOL * 10.0 {
                        if feasibility_repairs >= 3 {
                            return Err("lost primal feasibility".into());
                        }
                        feasibility_repairs += 1;
                        self.refactorize()?;
                        pivots_since_refactor = 0;
                        continue 'phase1;
                    }
                }
                iterations += 1;
                if iterations > limit {
                    return Err("iteration limit in phase 2".into());
                }
                let c_b: Vec<f64> = self.basis.iter().map(|&v| self.obj[v]).collect();
                let y = self.duals(&c_b);
                let bland = degenerate_run > BLAND_THRESHOLD;
                let Some((entering, sigma)) = self.price(&y, &Phase::Two, bland) else {
                    break 'phase1; // optimal
                };
                let step = self.pivot(entering, sigma, &mut x_b, &Phase::Two)?;
                pivots_since_refactor += 1;
                stale += 1;
                degenerate_run = if step < DEGENERATE_STEP { degenerate_run + 1 } else { 0 };
            }
        }
        x_b = self.basic_values();

        let mut values = vec![0.0; self.ncols];
        for (v, val) in values.iter_mut().enumerate() {
            *val = if self.in_basis[v] {
                let r = self.basis.iter().position(|&b| b == v).expect("basic");
                x_b[r]
            } else {
                self.nonbasic_value(v)
            };
        }
        // final residual check against the original rows
        for (r, row) in self.rows.iter().enumerate() {
            let lhs: f64 = row.iter().map(|&(v, a)| a * values[v]).sum();
            let slack_var = self.ncols + r;
            let slack = if self.in_basis[slack_var] {
                let k = self.basis.iter().position(|&b| b == slack_var).expect("basic");
                x_b[k]
            } else {
                self.nonbasic_value(slack_var)
            };
            let residual = lhs + slack - self.rhs[r];
            if residual.abs() > FEASIBILITY_TOL * 100.0 {
                return Err(format!("row {r} residual {residual:e}"));
            }
        }
        let objective = values.iter().zip(&self.obj).map(|(x, c)| x * c).sum();
        Ok(LPSolution { status: LPStatus::Optimal, objective, values })
    }

    fn infeasibility(&self, x_b: &[f64]) -> f64 {
        self.basis
            .iter()
            .zip(x_b)
            .map(|(&v, &x)| (self.lower[v] - x).max(0.0) + (x - self.upper[v]).max(0.0))
            .sum()
    }

    fn phase1_gradient(&self, x_b: &[f64]) -> Vec<f64> {
        self.basis
            .iter()
            .zip(x_b)
            .map(|(&v, &x)| {
                if x < self.lower[v] - FEASIBILITY_TOL {
                    -1.0
                } else if x > self.upper[v] + FEASIBILITY_TOL {
                    1.0
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// `y = g' binv` for a cost vector over the basic variables.
    fn duals(&self, g: &[f64]) -> Vec<f64> {
        let m = self.rows.len();
        let mut y = vec![0.0; m];
        for (r, &gr) in g.iter().enumerate() {
            if gr != 0.0 {
                for k in 0..m {
                    y[k] += gr * self.binv[r][k];
                }
            }
        }
        y
    }

    /// Chooses an entering variable and its movement direction (+1 from the
    /// lower bound, -1 from the upper bound).
    fn price(&self, y: &[f64], phase: &Phase, bland: bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64, f64)> = None; // (var, sigma, score)
        for v in 0..self.ncols_total() {
            if self.in_basis[v] || self.lower[v] == self.upper[v] {
                continue;
            }
            let cost = match phase {
                Phase::One => 0.0,
                Phase::Two => self.obj[v],
            };
            let ya = if v < self.ncols {
                self.cols[v].iter().map(|&(r, a)| y[r] * a).sum::<f64>()
            } else {
                y[v - self.ncols]
            };
            let reduced = cost - ya;
            let (improves, sigma) = if self.at_upper[v] {
                (reduced > OPTIMALITY_TOL, -1.0)
            } else {
                (reduced < -OPTIMALITY_TOL, 1.0)
            };
            if improves {
                if bland {
                    return Some((v, sigma));
                }
                let score = reduced.abs();
                if best.as_ref().map_or(true, |&(_, _, s)| score > s) {
                    best = Some((v, sigma, score));
                }
            }
        }
        best.map(|(v, sigma, _)| (v, sigma))
    }

    /// Long-step phase-1 ratio test: walk the breakpoints where the
    /// piecewise-linear infeasibility slope changes, passing every one that
    /// keeps the slope negative, and pivot at the breakpoint where the
    /// slope turns. Passing multiple bound crossings per pivot is what
    /// keeps phase-1 iteration counts near the infeasibility count.
    fn pivot_long_step(
        &mut self,
        entering: usize,
        sigma: f64,
        x_b: &mut [f64],
    ) -> std::result::Result<f64, String> {
        let m = self.rows.len();
        let mut col = vec![0.0; m];
        self.column(entering, &mut col);
        let d: Vec<f64> = (0..m).map(|r| dot(&self.binv[r], &col)).collect();

        // initial slope of the infeasibility sum along the direction
        let mut slope = 0.0;
        for r in 0..m {
            let rate = -sigma * d[r];
            let v = self.basis[r];
            if x_b[r] < self.lower[v] - FEASIBILITY_TOL {
                slope -= rate;
            } else if x_b[r] > self.upper[v] + FEASIBILITY_TOL {
                slope += rate;
            }
        }
        if slope >= 0.0 {
            // pricing and the true direction disagree: numerical drift
            return Err("phase-1 slope not improving".into());
        }

        // breakpoints: (t, row, leaves_at_upper, slope increment)
        let mut events: Vec<(f64, usize, bool, f64)> = Vec::new();
        for r in 0..m {
            let rate = -sigma * d[r];
            if rate.abs() < PIVOT_TOL {
                continue;
            }
            let v = self.basis[r];
            let (l, u, x) = (self.lower[v], self.upper[v], x_b[r]);
            if x < l - FEASIBILITY_TOL {
                if rate > 0.0 {
                    events.push((((l - x) / rate).max(0.0), r, false, rate));
                    if u.is_finite() {
                        events.push((((u - x) / rate).max(0.0), r, true, rate));
                    }
                }
            } else if x > u + FEASIBILITY_TOL {
                if rate < 0.0 {
                    events.push((((u - x) / rate).max(0.0), r, true, -rate));
                    events.push((((l - x) / rate).max(0.0), r, false, -rate));
                }
            } else if rate > 0.0 {
                if u.is_finite() {
                    events.push((((u - x) / rate).max(0.0), r, true, rate));
                }
            } else {
                events.push((((l - x) / rate).max(0.0), r, false, -rate));
            }
        }
        events.sort_by(|a, b| a.0.total_cmp(&b.0));

        let flip = self.upper[entering] - self.lower[entering];
        let mut chosen: Option<(f64, usize, bool)> = None;
        for &(t, row, at_upper, inc) in &events {
            if t > flip {
                break;
            }
            slope += inc;
            chosen = Some((t, row, at_upper));
            if slope >= 0.0 {
                break;
            }
        }
        if slope < 0.0 {
            // every breakpoint within reach keeps the slope negative: the
            // entering variable flips to its other bound
            if !flip.is_finite() {
                return Err("phase-1 direction unblocked".into());
            }
            for r in 0..m {
                x_b[r] -= sigma * d[r] * flip;
            }
            self.at_upper[entering] = !self.at_upper[entering];
            return Ok(flip);
        }
        let (t, row, leaves_at_upper) = chosen.expect("slope turned at a breakpoint");
        for r in 0..m {
            x_b[r] -= sigma * d[r] * t;
        }
        let leaving_var = self.basis[row];
        let entering_value = self.nonbasic_value(entering) + sigma * t;
        self.apply_basis_change(row, entering, &d, x_b, entering_value)?;
        self.in_basis[leaving_var] = false;
        self.at_upper[leaving_var] = leaves_at_upper;
        Ok(t)
    }

    /// Ratio test and basis change; returns the step length.
    fn pivot(
        &mut self,
        entering: usize,
        sigma: f64,
        x_b: &mut [f64],
        phase: &Phase,
    ) -> std::result::Result<f64, String> {
        let m = self.rows.len();
        let mut col = vec![0.0; m];
        self.column(entering, &mut col);
        // d = binv * A_entering; basic values move by -sigma * d * t
        let d: Vec<f64> = (0..m).map(|r| dot(&self.binv[r], &col)).collect();

        let mut best_t = f64::INFINITY;
        let mut best_mag = 0.0f64;
        let mut leaving: Option<(usize, bool)> = None; // (row, leaves_at_upper)
        for r in 0..m {
            let rate = -sigma * d[r];
            if rate.abs() < PIVOT_TOL {
                continue;
            }
            let v = self.basis[r];
            let x = x_b[r];
            // a feasible basic blocks at the bound it moves toward; an
            // infeasible one blocks where it re-enters its box, and never
            // blocks while moving further away (the phase-1 slope already
            // pays for that)
            let (target, leaves_at_upper) = if rate > 0.0 {
                if x < self.lower[v] - FEASIBILITY_TOL {
                    (self.lower[v], false)
                } else if x > self.upper[v] + FEASIBILITY_TOL {
                    continue;
                } else if self.upper[v].is_finite() {
                    (self.upper[v], true)
                } else {
                    continue;
                }
            } else if x > self.upper[v] + FEASIBILITY_TOL {
                (self.upper[v], true)
            } else if x < self.lower[v] - FEASIBILITY_TOL {
                continue;
            } else {
                (self.lower[v], false)
            };
            let t = ((target - x) / rate).max(0.0);
            // ties go to the largest pivot magnitude, for stability
            if t < best_t - 1e-9 {
                best_t = t;
                best_mag = d[r].abs();
                leaving = Some((r, leaves_at_upper));
            } else if t <= best_t + 1e-9 && d[r].abs() > best_mag {
                best_t = best_t.min(t);
                best_mag = d[r].abs();
                leaving = Some((r, leaves_at_upper));
            }
        }

        // the entering variable itself blocks at its opposite bound
        let range = self.upper[entering] - self.lower[entering];
        if range < best_t {
            // bound flip: no basis change
            for r in 0..m {
                x_b[r] -= sigma * d[r] * range;
            }
            self.at_upper[entering] = !self.at_upper[entering];
            return Ok(range);
        }
        let Some((row, leaves_at_upper)) = leaving else {
            return Err(match phase {
                Phase::One => "phase-1 direction unblocked".into(),
                Phase::Two => "unbounded direction in a bounded model".into(),
            });
        };
        let t = best_t;
        for r in 0..m {
            x_b[r] -= sigma * d[r] * t;
        }
        let leaving_var = self.basis[row];
        let entering_value = self.nonbasic_value(entering) + sigma * t;
        self.apply_basis_change(row, entering, &d, x_b, entering_value)?;
        self.in_basis[leaving_var] = false;
        self.at_upper[leaving_var] = leaves_at_upper;
        Ok(t)
    }

    /// Product-form update of the inverse after `entering` replaces the
    /// basic variable of `row`.
    fn apply_basis_change(
        &mut self,
        row: usize,
        entering: usize,
        d: &[f64],
        x_b: &mut [f64],
        entering_value: f64,
    ) -> std::result::Result<(), String> {
        let m = self.rows.len();
        let pivot_val = d[row];
        if pivot_val.abs() < PIVOT_TOL {
            return Err("tiny pivot".into());
        }
        let pivot_row = std::mem::take(&mut self.binv[row]);
        for (r, &dr) in d.iter().enumerate() {
            if r != row && dr != 0.0 {
                let factor = dr / pivot_val;
                for k in 0..m {
                    self.binv[r][k] -= factor * pivot_row[k];
                }
            }
        }
        self.binv[row] = pivot_row;
        for k in 0..m {
            self.binv[row][k] /= pivot_val;
        }
        self.in_basis[entering] = true;
        self.basis[row] = entering;
        x_b[row] = entering_value;
        Ok(())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
