//! The branch-and-cut loop with pluggable symmetry handling.
//!
//! Nodes are cube faces over the assignment cells. Branching follows the
//! first fractional assignment variable in row-major order; node selection
//! is best-bound with depth-first tie-breaking. Symmetry handling runs as
//! propagation at every node: simultaneous fixing, sequential fixing over
//! the shifted-column system, representative pruning, or nothing.

use std::collections::BinaryHeap;
use std::time::Instant;

use crate::face::{check_face, CubeFace, FaceCheck};
use crate::fixing::{orbitopal_fix, FixingOutcome};
use crate::lp::{LPStatus, SimplexEngine, INTEGRALITY_TOL};
use crate::seqfix::{build_system, sequential_fix_family, LinearInequality, SciSystem};
use crate::shape::CellIndex;
use crate::{Error, Result};

use super::clique::{separate_clique, CliqueCut};
use super::instance::{star_weight_order, PartitionInstance};
use super::model::{build_model, ModelLayout};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryMode {
    Off,
    OrbitopalFixing,
    Sci,
    IsoPruning,
}

impl std::str::FromStr for SymmetryMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "off" => Ok(SymmetryMode::Off),
            "of" => Ok(SymmetryMode::OrbitopalFixing),
            "sci" => Ok(SymmetryMode::Sci),
            "isoprune" => Ok(SymmetryMode::IsoPruning),
            other => Err(Error::Invalid(format!("unknown symmetry mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub symmetry: SymmetryMode,
    pub clique_cuts: bool,
    pub node_limit: usize,
    pub time_limit_s: Option<f64>,
    pub seed: u64,
    /// Support-graph inclusion threshold for clique separation.
    pub threshold: f64,
    /// Cuts per separation round and rounds per node.
    pub cuts_per_round: usize,
    pub rounds_per_node: usize,
    /// Starting assignment in original node order (values `1..=q`).
    pub start: Option<Vec<u32>>,
    pub collect_diagnostics: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            symmetry: SymmetryMode::Off,
            clique_cuts: true,
            node_limit: 1_000_000,
            time_limit_s: None,
            seed: 0,
            threshold: 0.5,
            cuts_per_round: 20,
            rounds_per_node: 5,
            start: None,
            collect_diagnostics: false,
        }
    }
}

/// Extra material recorded when `collect_diagnostics` is set.
#[derive(Debug, Clone, Default)]
pub struct SolveDiagnostics {
    /// Node faces after propagation, for nodes that were not pruned.
    pub node_faces: Vec<CubeFace>,
    /// `(parent bound, child bound)` per evaluated node.
    pub bound_pairs: Vec<(f64, f64)>,
    /// Every clique cut added to the relaxation.
    pub cuts: Vec<CliqueCut>,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub instance_label: String,
    /// Best objective found; `None` when no feasible assignment was reached.
    pub optimum: Option<u64>,
    /// Best assignment in original node order.
    pub assignment: Option<Vec<u32>>,
    pub nsub: usize,
    pub cpu_s: f64,
    /// Variables fixed by orbitopal fixing across all nodes.
    pub n_of: usize,
    pub cuts: usize,
    /// Remaining gap in percent; 0 when finished.
    pub gap: f64,
    pub finished: bool,
    pub best_bound: f64,
    pub diagnostics: Option<SolveDiagnostics>,
}

impl SolveReport {
    /// Line-delimited `key=value` rendering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("instance={}\n", self.instance_label));
        match self.optimum {
            Some(v) => out.push_str(&format!("optimum={v}\n")),
            None => out.push_str("optimum=none\n"),
        }
        if let Some(parts) = &self.assignment {
            let list: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
            out.push_str(&format!("assignment={}\n", list.join(",")));
        }
        out.push_str(&format!("nsub={}\n", self.nsub));
        out.push_str(&format!("cpu_s={:.2}\n", self.cpu_s));
        out.push_str(&format!("n_of={}\n", self.n_of));
        out.push_str(&format!("cuts={}\n", self.cuts));
        if self.gap.is_finite() {
            out.push_str(&format!("gap={:.4}\n", self.gap));
        } else {
            out.push_str("gap=inf\n");
        }
        out.push_str(&format!("finished={}\n", self.finished));
        out
    }
}

/// Representative test for isomorphism pruning under full column symmetry:
/// over the contiguous prefix of rows decided by `I1`, newly used columns
/// must appear in first-use order `1, 2, 3, ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoOutcome {
    Prune,
    Representative {
        /// Rows of the decided prefix.
        prefix_rows: u32,
        /// Columns used within the prefix (their maximum, by the growth
        /// property).
        max_col: u32,
    },
}

pub fn isoprune_check(face: &CubeFace) -> IsoOutcome {
    let shape = face.shape();
    let mut max_col = 0u32;
    let mut prefix_rows = 0u32;
    for i in 1..=shape.p() {
        match shape.row_cells(i).find(|&c| face.ones().contains(c)) {
            Some(cell) => {
                if cell.j > max_col + 1 {
                    return IsoOutcome::Prune;
                }
                max_col = max_col.max(cell.j);
                prefix_rows = i;
            }
            None => break,
        }
    }
    IsoOutcome::Representative { prefix_rows, max_col }
}

struct Node {
    bound: f64,
    depth: u32,
    seq: usize,
    face: CubeFace,
    branch_cell: CellIndex,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.seq == other.seq
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // max-heap: prefer the smallest bound, then the deepest, then older
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then(self.depth.cmp(&other.depth))
            .then(other.seq.cmp(&self.seq))
    }
}

struct Search<'a> {
    internal: &'a PartitionInstance,
    config: &'a SolverConfig,
    layout: ModelLayout,
    engine: SimplexEngine,
    sci_system: Option<Vec<LinearInequality>>,
    incumbent: Option<(u64, Vec<u32>)>,
    nsub: usize,
    n_of: usize,
    cuts_added: usize,
    seq: usize,
    diagnostics: Option<SolveDiagnostics>,
}

enum Evaluated {
    Pruned,
    Open(Node),
}

impl Search<'_> {
    fn prune_by_bound(&self, bound: f64) -> bool {
        match &self.incumbent {
            // integer weights: a node cannot improve once its rounded-up
            // bound reaches the incumbent
            Some((value, _)) => (bound - 1e-6).ceil() as u64 >= *value,
            None => false,
        }
    }

    fn propagate(&mut self, face: CubeFace) -> Result<Option<CubeFace>> {
        match self.config.symmetry {
            SymmetryMode::Off => Ok(Some(face)),
            SymmetryMode::OrbitopalFixing => {
                debug_assert_eq!(check_face(&face), FaceCheck::Ok);
                let (outcome, stats) = orbitopal_fix(&face)?;
                match outcome {
                    FixingOutcome::Infeasible => Ok(None),
                    FixingOutcome::Fixed(fixed) => {
                        self.n_of += stats.fixed_zeros + stats.fixed_ones;
                        Ok(Some(fixed))
                    }
                }
            }
            SymmetryMode::Sci => {
                let system = self.sci_system.as_ref().expect("system built for sci mode");
                match sequential_fix_family(system, &face, false)? {
                    FixingOutcome::Infeasible => Ok(None),
                    FixingOutcome::Fixed(fixed) => Ok(Some(fixed)),
                }
            }
            SymmetryMode::IsoPruning => match isoprune_check(&face) {
                IsoOutcome::Prune => Ok(None),
                IsoOutcome::Representative { prefix_rows, max_col } => {
                    let shape = face.shape();
                    let mut fixed = face;
                    let next = prefix_rows + 1;
                    if next <= shape.p() {
                        for j in max_col + 2..=shape.row_len(next) {
                            fixed.fix_zero(CellIndex::new(next, j));
                        }
                    }
                    Ok(Some(fixed))
                }
            },
        }
    }

    fn evaluate(&mut self, face: CubeFace, parent_bound: f64, depth: u32) -> Result<Evaluated> {
        self.nsub += 1;
        let Some(face) = self.propagate(face)? else {
            return Ok(Evaluated::Pruned);
        };
        let shape = self.layout.shape;
        for cell in shape.cells() {
            let var = self.layout.x_var(cell);
            let (lower, upper) = if face.zeros().contains(cell) {
                (0.0, 0.0)
            } else if face.ones().contains(cell) {
                (1.0, 1.0)
            } else {
                (0.0, 1.0)
            };
            self.engine.set_var_bounds(var, lower, upper);
        }
        let mut solution = match self.solve_engine()? {
            Some(s) => s,
            None => return Ok(Evaluated::Pruned),
        };
        if self.config.clique_cuts {
            for _ in 0..self.config.rounds_per_node {
                let y: Vec<f64> =
                    self.layout.y_vars.iter().map(|&v| solution.values[v]).collect();
                let cuts = separate_clique(
                    &y,
                    self.internal,
                    self.config.threshold,
                    self.config.cuts_per_round,
                );
                if cuts.is_empty() {
                    break;
                }
                for cut in &cuts {
                    let terms: Vec<(usize, f64)> = cut_terms(cut, self.internal, &self.layout);
                    self.engine.add_row(&terms, crate::lp::RowOp::Ge, cut.rhs);
                    self.cuts_added += 1;
                    if let Some(diag) = &mut self.diagnostics {
                        diag.cuts.push(cut.clone());
                    }
                }
                solution = match self.solve_engine()? {
                    Some(s) => s,
                    None => return Ok(Evaluated::Pruned),
                };
            }
        }
        let bound = solution.objective;
        if let Some(diag) = &mut self.diagnostics {
            diag.bound_pairs.push((parent_bound, bound));
            diag.node_faces.push(face.clone());
        }
        if self.prune_by_bound(bound) {
            return Ok(Evaluated::Pruned);
        }
        // integral assignment: close the node with an incumbent candidate
        let mut branch_cell = None;
        'rows: for cell in shape.cells() {
            let v = solution.values[self.layout.x_var(cell)];
            if v > INTEGRALITY_TOL && v < 1.0 - INTEGRALITY_TOL {
                branch_cell = Some(cell);
                break 'rows;
            }
        }
        match branch_cell {
            None => {
                let parts: Vec<u32> = (1..=shape.p())
                    .map(|i| {
                        shape
                            .row_cells(i)
                            .find(|&c| solution.values[self.layout.x_var(c)] > 0.5)
                            .expect("row sums force one assignment")
                            .j
                    })
                    .collect();
                let value = self.internal.assignment_cost(&parts);
                if self.incumbent.as_ref().map_or(true, |(best, _)| value < *best) {
                    self.incumbent = Some((value, parts));
                }
                Ok(Evaluated::Pruned)
            }
            Some(cell) => {
                self.seq += 1;
                Ok(Evaluated::Open(Node { bound, depth, seq: self.seq, face, branch_cell: cell }))
            }
        }
    }

    fn solve_engine(&mut self) -> Result<Option<crate::lp::LPSolution>> {
        let solution = self.engine.solve();
        match solution.status {
            LPStatus::Optimal => Ok(Some(solution)),
            LPStatus::Infeasible => Ok(None),
            LPStatus::Numerical(msg) => Err(Error::Invalid(format!("relaxation failed: {msg}"))),
        }
    }
}

fn cut_terms(
    cut: &CliqueCut,
    instance: &PartitionInstance,
    layout: &ModelLayout,
) -> Vec<(usize, f64)> {
    let mut index = std::collections::HashMap::new();
    for (e, &(u, v, _)) in instance.edges().iter().enumerate() {
        index.insert((u, v), e);
    }
    let mut terms = Vec::new();
    for (i, &a) in cut.nodes.iter().enumerate() {
        for &b in &cut.nodes[i + 1..] {
            let key = (a.min(b), a.max(b));
            let e = index[&key];
            terms.push((layout.y_vars[e], 1.0));
        }
    }
    terms
}

/// Greedy start: nodes in the given order, each to the part that adds the
/// least cost (ties to the lowest part index).
fn greedy_assignment(instance: &PartitionInstance) -> Vec<u32> {
    let p = instance.p() as usize;
    let mut parts = vec![0u32; p];
    let mut adj = vec![Vec::new(); p + 1];
    for &(u, v, w) in instance.edges() {
        adj[u as usize].push((v, w));
        adj[v as usize].push((u, w));
    }
    for i in 1..=p {
        let mut best = (u64::MAX, 1u32);
        for j in 1..=instance.q() {
            let added: u64 = adj[i]
                .iter()
                .filter(|&&(k, _)| (k as usize) < i && parts[k as usize - 1] == j)
                .map(|&(_, w)| w)
                .sum();
            if added < best.0 {
                best = (added, j);
            }
        }
        parts[i - 1] = best.1;
    }
    parts
}

/// Exact branch-and-cut solve. Nodes are permuted internally into
/// non-increasing star-weight order; reported assignments use the original
/// labels.
pub fn solve(instance: &PartitionInstance, config: &SolverConfig) -> Result<SolveReport> {
    let start_time = Instant::now();
    let perm = star_weight_order(instance);
    let internal = instance.relabeled(&perm);
    let (model, layout) = build_model(&internal)?;
    let engine = SimplexEngine::from_model(&model);
    let sci_system = match config.symmetry {
        SymmetryMode::Sci => Some(build_system(SciSystem::Shifted, layout.shape)?),
        _ => None,
    };

    let mut search = Search {
        internal: &internal,
        config,
        layout,
        engine,
        sci_system,
        incumbent: None,
        nsub: 0,
        n_of: 0,
        cuts_added: 0,
        seq: 0,
        diagnostics: config.collect_diagnostics.then(SolveDiagnostics::default),
    };

    // primal start: greedy on the star-ordered instance, or the caller's
    let greedy = greedy_assignment(&internal);
    search.incumbent = Some((internal.assignment_cost(&greedy), greedy));
    if let Some(user) = &config.start {
        if user.len() != instance.p() as usize
            || user.iter().any(|&j| j < 1 || j > instance.q())
        {
            return Err(Error::Invalid("start assignment has the wrong shape".into()));
        }
        let as_internal: Vec<u32> =
            perm.iter().map(|&orig| user[orig as usize - 1]).collect();
        let value = internal.assignment_cost(&as_internal);
        if value < search.incumbent.as_ref().expect("greedy set").0 {
            search.incumbent = Some((value, as_internal));
        }
    }

    let shape = search.layout.shape;
    let mut heap: BinaryHeap<Node> = BinaryHeap::new();
    let mut open_bound_floor = f64::NEG_INFINITY;
    let mut limit_hit = false;
    match search.evaluate(CubeFace::empty(shape), f64::NEG_INFINITY, 0)? {
        Evaluated::Open(node) => heap.push(node),
        Evaluated::Pruned => {}
    }
    while let Some(node) = heap.pop() {
        let out_of_time = config
            .time_limit_s
            .map_or(false, |lim| start_time.elapsed().as_secs_f64() >= lim);
        if out_of_time || search.nsub >= config.node_limit {
            limit_hit = true;
            heap.push(node);
            break;
        }
        if search.prune_by_bound(node.bound) {
            continue;
        }
        open_bound_floor = open_bound_floor.max(node.bound);
        let cell = node.branch_cell;
        // zero child
        let mut zero_face = node.face.clone();
        zero_face.fix_zero(cell);
        if zero_face.zeros().row_count(cell.i) < shape.row_len(cell.i) {
            if let Evaluated::Open(child) = search.evaluate(zero_face, node.bound, node.depth + 1)?
            {
                heap.push(child);
            }
        }
        // one child, with the row-complement zeros
        let mut one_face = node.face.clone();
        one_face.fix_one(cell);
        for j in 1..=shape.row_len(cell.i) {
            if j != cell.j {
                one_face.fix_zero(CellIndex::new(cell.i, j));
            }
        }
        if let Evaluated::Open(child) = search.evaluate(one_face, node.bound, node.depth + 1)? {
            heap.push(child);
        }
    }

    let finished = !limit_hit;
    let (optimum, assignment_internal) = match search.incumbent {
        Some((value, parts)) => (Some(value), Some(parts)),
        None => (None, None),
    };
    let best_bound = if finished {
        optimum.map_or(f64::INFINITY, |v| v as f64)
    } else {
        heap.iter()
            .map(|n| n.bound)
            .fold(f64::INFINITY, f64::min)
            .max(open_bound_floor)
    };
    let gap = match optimum {
        None => f64::INFINITY,
        Some(_) if finished => 0.0,
        Some(v) => {
            let v = v as f64;
            if v <= best_bound + 1e-9 {
                0.0
            } else {
                100.0 * (v - best_bound) / v.max(1e-9)
            }
        }
    };
    // assignments back into original node order
    let assignment = assignment_internal.map(|parts| {
        let mut orig = vec![0u32; instance.p() as usize];
        for (idx, &orig_node) in perm.iter().enumerate() {
            orig[orig_node as usize - 1] = parts[idx];
        }
        orig
    });

    Ok(SolveReport {
        instance_label: instance.label().to_string(),
        optimum,
        assignment,
        nsub: search.nsub,
        cpu_s: start_time.elapsed().as_secs_f64(),
        n_of: search.n_of,
        cuts: search.cuts_added,
        gap,
        finished,
        best_bound,
        diagnostics: search.diagnostics,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    A,
    B,
    None,
}

/// Instance-level comparison: finishing beats not finishing, earlier finish
/// wins, smaller gap wins among unfinished runs; differences under 1 second
/// or 0.1 percentage points do not count.
pub fn compare_winners(a: &SolveReport, b: &SolveReport) -> Result<Winner> {
    if a.instance_label != b.instance_label {
        return Err(Error::Invalid(format!(
            "reports compare different instances: {} vs {}",
            a.instance_label, b.instance_label
        )));
    }
    Ok(match (a.finished, b.finished) {
        (true, false) => Winner::A,
        (false, true) => Winner::B,
        (true, true) => {
            if (a.cpu_s - b.cpu_s).abs() < 1.0 {
                Winner::None
            } else if a.cpu_s < b.cpu_s {
                Winner::A
            } else {
                Winner::B
            }
        }
        (false, false) => {
            // two infinite gaps compare as a tie (their difference is NaN)
            if (a.gap - b.gap).abs() < 0.1 || (a.gap.is_infinite() && b.gap.is_infinite()) {
                Winner::None
            } else if a.gap < b.gap {
                Winner::A
            } else {
                Winner::B
            }
        }
    })
}
