//! Single-inequality and sequential fixing.
//!
//! Fixing a single inequality `a'x <= b` at a face is a knapsack argument:
//! a free variable is forced to 0 (resp. 1) when the minimum achievable
//! left-hand side with that variable at 1 (resp. 0) already exceeds `b`.
//! *Sequential fixing* iterates the per-inequality fixings of a system to a
//! fixpoint; the result does not depend on the processing order.
//!
//! The *affine* variant fixes each inequality relative to the affine hull of
//! the one-entry-per-row polytope, i.e. over 0/1 points with exactly one 1
//! per row. Row sums make the per-inequality problem separable: the minimum
//! left-hand side decomposes into per-row minima over the admissible cells,
//! so each test stays linear-time and exact.

use crate::face::{check_face, CubeFace, FaceCheck};
use crate::fixing::FixingOutcome;
use crate::sci::{enumerate_column_inequalities, enumerate_scis, SCInequality};
use crate::shape::{CellIndex, CellSet, OrbitopeShape};
use crate::{Error, Result};

const EPS: f64 = 1e-9;

/// `sum terms <= rhs` over flat 0-based variable indices.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearInequality {
    pub terms: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl LinearInequality {
    pub fn new(terms: Vec<(usize, f64)>, rhs: f64) -> Self {
        LinearInequality { terms, rhs }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarState {
    Free,
    Zero,
    One,
}

/// Outcome of fixing against a single inequality or a whole system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarFixes {
    Infeasible,
    /// `(variable, fixed_to_one)` pairs, not including already-fixed ones.
    Fixes(Vec<(usize, bool)>),
}

/// Fixing of one knapsack relaxation at the face given by `states`.
pub fn knapsack_fix(ineq: &LinearInequality, states: &[VarState]) -> VarFixes {
    let mut min_lhs = 0.0;
    for &(v, a) in &ineq.terms {
        match states[v] {
            VarState::One => min_lhs += a,
            VarState::Free => min_lhs += a.min(0.0),
            VarState::Zero => {}
        }
    }
    if min_lhs > ineq.rhs + EPS {
        return VarFixes::Infeasible;
    }
    let mut fixes = Vec::new();
    for &(v, a) in &ineq.terms {
        if states[v] != VarState::Free {
            continue;
        }
        let base = min_lhs - a.min(0.0);
        if base + a > ineq.rhs + EPS {
            fixes.push((v, false));
        } else if base > ineq.rhs + EPS {
            fixes.push((v, true));
        }
    }
    VarFixes::Fixes(fixes)
}

/// Definitional simultaneous fixing of a small system by 0/1 enumeration.
pub fn simultaneous_fix_enumeration(
    system: &[LinearInequality],
    num_vars: usize,
    states: &[VarState],
) -> Result<VarFixes> {
    if num_vars > 24 {
        return Err(Error::GuardExceeded(format!(
            "0/1 enumeration over {num_vars} variables"
        )));
    }
    let feasible = |point: u32| -> bool {
        for (v, &st) in states.iter().enumerate() {
            let bit = point >> v & 1 == 1;
            if (st == VarState::Zero && bit) || (st == VarState::One && !bit) {
                return false;
            }
        }
        system.iter().all(|ineq| {
            let lhs: f64 =
                ineq.terms.iter().map(|&(v, a)| if point >> v & 1 == 1 { a } else { 0.0 }).sum();
            lhs <= ineq.rhs + EPS
        })
    };
    let mut all_zero = (1u32 << num_vars) - 1;
    let mut all_one = all_zero;
    let mut any = false;
    for point in 0..1u32 << num_vars {
        if feasible(point) {
            any = true;
            all_zero &= !point;
            all_one &= point;
        }
    }
    if !any {
        return Ok(VarFixes::Infeasible);
    }
    let mut fixes = Vec::new();
    for (v, &st) in states.iter().enumerate().take(num_vars) {
        if st == VarState::Free {
            if all_zero >> v & 1 == 1 {
                fixes.push((v, false));
            } else if all_one >> v & 1 == 1 {
                fixes.push((v, true));
            }
        }
    }
    Ok(VarFixes::Fixes(fixes))
}

/// Iterates plain knapsack fixings of a family to a fixpoint.
pub fn sequential_fix_system(
    system: &[LinearInequality],
    states: &mut [VarState],
) -> VarFixes {
    let mut all_fixes = Vec::new();
    loop {
        let mut changed = false;
        for ineq in system {
            match knapsack_fix(ineq, states) {
                VarFixes::Infeasible => return VarFixes::Infeasible,
                VarFixes::Fixes(fixes) => {
                    for (v, one) in fixes {
                        let new = if one { VarState::One } else { VarState::Zero };
                        if states[v] == VarState::Free {
                            states[v] = new;
                            all_fixes.push((v, one));
                            changed = true;
                        } else if states[v] != new {
                            return VarFixes::Infeasible;
                        }
                    }
                }
            }
        }
        if !changed {
            return VarFixes::Fixes(all_fixes);
        }
    }
}

/// Which inequality family a sequential fixing runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SciSystem {
    /// Column inequalities plus non-negativity and row sums.
    ColumnOnly,
    /// All shifted column inequalities plus non-negativity and row sums.
    Shifted,
}

/// Builds the flat-variable inequality family of a system tag: the tagged
/// inequalities, non-negativity for every cell, and both directions of each
/// row-sum equation.
pub fn build_system(tag: SciSystem, shape: OrbitopeShape) -> Result<Vec<LinearInequality>> {
    let scis = match tag {
        SciSystem::ColumnOnly => enumerate_column_inequalities(shape)?,
        SciSystem::Shifted => enumerate_scis(shape)?,
    };
    let mut system = Vec::with_capacity(scis.len() + shape.num_cells() + 2 * shape.p() as usize);
    for sci in &scis {
        system.push(sci_to_inequality(sci, shape));
    }
    for cell in shape.cells() {
        system.push(LinearInequality::new(vec![(shape.cell_offset(cell), -1.0)], 0.0));
    }
    for i in 1..=shape.p() {
        let terms: Vec<(usize, f64)> =
            shape.row_cells(i).map(|c| (shape.cell_offset(c), 1.0)).collect();
        let neg: Vec<(usize, f64)> = terms.iter().map(|&(v, a)| (v, -a)).collect();
        system.push(LinearInequality::new(terms, 1.0));
        system.push(LinearInequality::new(neg, -1.0));
    }
    Ok(system)
}

fn sci_to_inequality(sci: &SCInequality, shape: OrbitopeShape) -> LinearInequality {
    let mut terms: Vec<(usize, f64)> =
        sci.bar_cells().map(|c| (shape.cell_offset(c), 1.0)).collect();
    terms.extend(sci.shifted_column().cells().map(|c| (shape.cell_offset(c), -1.0)));
    LinearInequality::new(terms, 0.0)
}

fn face_to_states(face: &CubeFace) -> Vec<VarState> {
    let shape = face.shape();
    let mut states = vec![VarState::Free; shape.num_cells()];
    for c in face.zeros().iter() {
        states[shape.cell_offset(c)] = VarState::Zero;
    }
    for c in face.ones().iter() {
        states[shape.cell_offset(c)] = VarState::One;
    }
    states
}

fn states_to_outcome(states: &[VarState], shape: OrbitopeShape) -> Result<FixingOutcome> {
    let mut zeros = CellSet::new(shape);
    let mut ones = CellSet::new(shape);
    for (off, &st) in states.iter().enumerate() {
        let cell = shape.cell_at_offset(off);
        match st {
            VarState::Zero => {
                zeros.insert(cell);
            }
            VarState::One => {
                ones.insert(cell);
            }
            VarState::Free => {}
        }
    }
    Ok(FixingOutcome::Fixed(CubeFace::new(zeros, ones)?))
}

/// Sequential fixing of a cell-indexed family at a fixing-ready face.
/// With `affine` set, every per-inequality step is taken relative to the
/// row-sum hull (one-hot rows).
pub fn sequential_fix_family(
    system: &[LinearInequality],
    face: &CubeFace,
    affine: bool,
) -> Result<FixingOutcome> {
    let check = check_face(face);
    if check != FaceCheck::Ok {
        return Err(Error::NotFixingReady(check));
    }
    let shape = face.shape();
    let mut states = face_to_states(face);
    if affine {
        loop {
            let mut changed = false;
            for ineq in system {
                match affine_fix_one(ineq, &states, shape) {
                    VarFixes::Infeasible => return Ok(FixingOutcome::Infeasible),
                    VarFixes::Fixes(fixes) => {
                        for (v, one) in fixes {
                            let new = if one { VarState::One } else { VarState::Zero };
                            if states[v] == VarState::Free {
                                states[v] = new;
                                changed = true;
                            } else if states[v] != new {
                                return Ok(FixingOutcome::Infeasible);
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        states_to_outcome(&states, shape)
    } else {
        match sequential_fix_system(system, &mut states) {
            VarFixes::Infeasible => Ok(FixingOutcome::Infeasible),
            VarFixes::Fixes(_) => states_to_outcome(&states, shape),
        }
    }
}

/// Sequential fixing with the tagged system.
pub fn sequential_fix(
    tag: SciSystem,
    face: &CubeFace,
    affine: bool,
) -> Result<FixingOutcome> {
    let system = build_system(tag, face.shape())?;
    sequential_fix_family(&system, face, affine)
}

/// Exact fixing of one inequality relative to the one-hot-row hull.
///
/// For every row, the admissible cells are the forced one (if any) or the
/// unblocked cells; the minimum left-hand side is the sum of per-row minima
/// of the cell coefficients. A cell is forced to 0 (1) when no admissible
/// completion with the cell at 1 (0) stays within the right-hand side.
pub fn affine_fix_one(
    ineq: &LinearInequality,
    states: &[VarState],
    shape: OrbitopeShape,
) -> VarFixes {
    let mut weight = vec![0.0f64; shape.num_cells()];
    for &(v, a) in &ineq.terms {
        weight[v] += a;
    }
    let p = shape.p();
    // per-row minimum and second minimum over admissible cells
    let mut row_min = vec![f64::INFINITY; p as usize];
    let mut row_admissible = vec![0u32; p as usize];
    for i in 1..=p {
        let one_cell =
            shape.row_cells(i).find(|&c| states[shape.cell_offset(c)] == VarState::One);
        for c in shape.row_cells(i) {
            let off = shape.cell_offset(c);
            let admissible = match one_cell {
                Some(oc) => c == oc,
                None => states[off] != VarState::Zero,
            };
            if admissible {
                row_admissible[i as usize - 1] += 1;
                row_min[i as usize - 1] = row_min[i as usize - 1].min(weight[off]);
            }
        }
        if row_admissible[i as usize - 1] == 0 {
            return VarFixes::Infeasible;
        }
    }
    let base: f64 = row_min.iter().sum();
    if base > ineq.rhs + EPS {
        return VarFixes::Infeasible;
    }
    let mut fixes = Vec::new();
    for i in 1..=p {
        let k = i as usize - 1;
        let one_cell =
            shape.row_cells(i).find(|&c| states[shape.cell_offset(c)] == VarState::One);
        if one_cell.is_some() {
            continue; // the row is decided; nothing left to fix
        }
        // second-smallest admissible weight, for the "cell at 0" test
        let mut admissible: Vec<(CellIndex, f64)> = shape
            .row_cells(i)
            .filter(|&c| states[shape.cell_offset(c)] != VarState::Zero)
            .map(|c| (c, weight[shape.cell_offset(c)]))
            .collect();
        admissible.sort_by(|a, b| a.1.total_cmp(&b.1));
        for &(c, w) in &admissible {
            let off = shape.cell_offset(c);
            if base - row_min[k] + w > ineq.rhs + EPS {
                fixes.push((off, false));
            } else if admissible.len() == 1 {
                // the only admissible cell of the row is constant 1
                fixes.push((off, true));
            } else {
                let best_other =
                    if c == admissible[0].0 { admissible[1].1 } else { admissible[0].1 };
                if base - row_min[k] + best_other > ineq.rhs + EPS {
                    fixes.push((off, true));
                }
            }
        }
    }
    VarFixes::Fixes(fixes)
}

/// The four-variable demonstration polytope separating sequential from
/// simultaneous fixing: facets `-x1 + x2 + x3 - x4 <= 0` and
/// `x1 - x2 + x3 - x4 <= 0` inside the unit cube.
pub fn demo_polytope() -> (Vec<LinearInequality>, usize) {
    let mut system = vec![
        LinearInequality::new(vec![(0, -1.0), (1, 1.0), (2, 1.0), (3, -1.0)], 0.0),
        LinearInequality::new(vec![(0, 1.0), (1, -1.0), (2, 1.0), (3, -1.0)], 0.0),
    ];
    for v in [0, 1, 2] {
        system.push(LinearInequality::new(vec![(v, -1.0)], 0.0)); // x_v >= 0
    }
    for v in [0, 1, 3] {
        system.push(LinearInequality::new(vec![(v, 1.0)], 1.0)); // x_v <= 1
    }
    (system, 4)
}

/// Comparison of sequential and simultaneous fixing on the demonstration
/// polytope at the face fixing `x4 = 0`. All variable lists are 1-based and
/// give the full fixed sets, input fixings included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequentialVsSimultaneous {
    pub sequential_zeros: Vec<usize>,
    pub sequential_ones: Vec<usize>,
    /// Full `(I0*, I1*)`, or `None` when the face contains no feasible point.
    pub simultaneous: Option<(Vec<usize>, Vec<usize>)>,
}

fn collect_states(states: &[VarState]) -> (Vec<usize>, Vec<usize>) {
    let zeros = states
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s == VarState::Zero)
        .map(|(v, _)| v + 1)
        .collect();
    let ones = states
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s == VarState::One)
        .map(|(v, _)| v + 1)
        .collect();
    (zeros, ones)
}

pub fn sequential_vs_simultaneous_demo() -> SequentialVsSimultaneous {
    let (system, n) = demo_polytope();
    let mut states = vec![VarState::Free; n];
    states[3] = VarState::Zero;
    let (sequential_zeros, sequential_ones) = match sequential_fix_system(&system, &mut states) {
        VarFixes::Infeasible => unreachable!("the demo face is feasible"),
        VarFixes::Fixes(_) => collect_states(&states),
    };
    let mut states = vec![VarState::Free; n];
    states[3] = VarState::Zero;
    let simultaneous = match simultaneous_fix_enumeration(&system, n, &states).unwrap() {
        VarFixes::Infeasible => None,
        VarFixes::Fixes(fixes) => {
            for (v, one) in fixes {
                states[v] = if one { VarState::One } else { VarState::Zero };
            }
            Some(collect_states(&states))
        }
    };
    SequentialVsSimultaneous { sequential_zeros, sequential_ones, simultaneous }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::face::CubeFace;
    use crate::fixing::orbitopal_fix;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn knapsack_examples() {
        // a = (3,2,2), b = 4, first variable fixed to one
        let ineq = LinearInequality::new(vec![(0, 3.0), (1, 2.0), (2, 2.0)], 4.0);
        let states = [VarState::One, VarState::Free, VarState::Free];
        assert_eq!(
            knapsack_fix(&ineq, &states),
            VarFixes::Fixes(vec![(1, false), (2, false)])
        );

        // all-nonnegative with slack fixes nothing
        let ineq = LinearInequality::new(vec![(0, 1.0), (1, 1.0)], 3.0);
        assert_eq!(
            knapsack_fix(&ineq, &[VarState::Free, VarState::Free]),
            VarFixes::Fixes(vec![])
        );

        // infeasible outright
        let ineq = LinearInequality::new(vec![(0, 1.0)], -1.0);
        assert_eq!(knapsack_fix(&ineq, &[VarState::Free]), VarFixes::Infeasible);
    }

    #[test]
    fn knapsack_matches_enumeration_on_random_inequalities() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..500 {
            let n = rng.random_range(1..=6);
            let terms: Vec<(usize, f64)> =
                (0..n).map(|v| (v, f64::from(rng.random_range(-4..=4)))).collect();
            let rhs = f64::from(rng.random_range(-4..=6));
            let ineq = LinearInequality::new(terms, rhs);
            let states: Vec<VarState> = (0..n)
                .map(|_| match rng.random_range(0..4) {
                    0 => VarState::Zero,
                    1 => VarState::One,
                    _ => VarState::Free,
                })
                .collect();
            let fast = knapsack_fix(&ineq, &states);
            let slow =
                simultaneous_fix_enumeration(std::slice::from_ref(&ineq), n, &states).unwrap();
            // single-inequality knapsack fixing IS the simultaneous fixing of
            // that one relaxation
            assert_eq!(fast, slow, "ineq {ineq:?} states {states:?}");
        }
    }

    #[test]
    fn sequential_vs_simultaneous_values() {
        let report = sequential_vs_simultaneous_demo();
        assert_eq!(report.sequential_zeros, vec![4], "sequential fixing must find nothing new");
        assert!(report.sequential_ones.is_empty());
        assert_eq!(
            report.simultaneous,
            Some((vec![3, 4], vec![])),
            "simultaneous fixing pins I0* = {{3, 4}}"
        );

        // empty face: both methods fix nothing
        let (system, n) = demo_polytope();
        let mut states = vec![VarState::Free; n];
        assert_eq!(sequential_fix_system(&system, &mut states), VarFixes::Fixes(vec![]));
        let states = vec![VarState::Free; n];
        assert_eq!(
            simultaneous_fix_enumeration(&system, n, &states).unwrap(),
            VarFixes::Fixes(vec![])
        );

        // face (x4 = 0, x3 = 1) is infeasible for the 0/1 points
        let mut states = vec![VarState::Free; n];
        states[3] = VarState::Zero;
        states[2] = VarState::One;
        assert_eq!(
            simultaneous_fix_enumeration(&system, n, &states).unwrap(),
            VarFixes::Infeasible
        );
    }

    fn shape(p: u32, q: u32) -> OrbitopeShape {
        OrbitopeShape::new(p, q).unwrap()
    }

    #[test]
    fn affine_sci_equals_simultaneous_on_random_faces() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let s = shape(5, 3);
        let system = build_system(SciSystem::Shifted, s).unwrap();
        for _ in 0..150 {
            let face = crate::fixing::testutil::random_ready_face(s, &mut rng);
            let seq = sequential_fix_family(&system, &face, true).unwrap();
            let (sim, _) = orbitopal_fix(&face).unwrap();
            assert_eq!(seq, sim, "face {face:?}");
        }
    }

    #[test]
    fn order_independence() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let s = shape(5, 3);
        let system = build_system(SciSystem::Shifted, s).unwrap();
        for _ in 0..10 {
            let face = crate::fixing::testutil::random_ready_face(s, &mut rng);
            for affine in [false, true] {
                let reference = sequential_fix_family(&system, &face, affine).unwrap();
                let mut shuffled = system.clone();
                for _ in 0..100 {
                    shuffled.shuffle(&mut rng);
                    let out = sequential_fix_family(&shuffled, &face, affine).unwrap();
                    assert_eq!(out, reference);
                }
            }
        }
    }

    #[test]
    fn dominance_chain_small_faces() {
        // fixed faces shrink along CI -> {SCI, affine CI} -> affine SCI
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let s = shape(5, 3);
        let ci = build_system(SciSystem::ColumnOnly, s).unwrap();
        let sci = build_system(SciSystem::Shifted, s).unwrap();
        for _ in 0..100 {
            let face = crate::fixing::testutil::random_ready_face(s, &mut rng);
            let f_ci = sequential_fix_family(&ci, &face, false).unwrap();
            let f_sci = sequential_fix_family(&sci, &face, false).unwrap();
            let f_aci = sequential_fix_family(&ci, &face, true).unwrap();
            let f_asci = sequential_fix_family(&sci, &face, true).unwrap();
            assert!(dominates(&f_sci, &f_ci));
            assert!(dominates(&f_aci, &f_ci));
            assert!(dominates(&f_asci, &f_sci));
            assert!(dominates(&f_asci, &f_aci));
        }
    }

    /// `stronger` fixes at least whatever `weaker` fixes.
    fn dominates(stronger: &FixingOutcome, weaker: &FixingOutcome) -> bool {
        match (stronger, weaker) {
            (FixingOutcome::Infeasible, _) => true,
            (FixingOutcome::Fixed(_), FixingOutcome::Infeasible) => false,
            (FixingOutcome::Fixed(s), FixingOutcome::Fixed(w)) => s.is_contained_in(w),
        }
    }

    #[test]
    fn affine_any_inequality_forces_one_hot_logic() {
        // a single trivial inequality already pins decided rows
        let s = shape(3, 3);
        let face = CubeFace::from_cells(s, [(2, 2)], std::iter::empty::<(u32, u32)>()).unwrap();
        let trivial = LinearInequality::new(vec![], 0.0);
        let states = super::face_to_states(&face);
        let fixes = affine_fix_one(&trivial, &states, s);
        // row 1 has a single cell and row 2 a single unblocked cell; both
        // are pinned to 1 by the one-per-row rule alone
        assert_eq!(
            fixes,
            VarFixes::Fixes(vec![
                (s.cell_offset(CellIndex::new(1, 1)), true),
                (s.cell_offset(CellIndex::new(2, 1)), true),
            ])
        );
    }
}
