//! Simultaneous variable fixing over the one-entry-per-row vertex set.
//!
//! Given a fixing-ready face `(I0, I1)`, the simultaneous fixing is the
//! smallest cube face containing every vertex on the face: `I0*` / `I1*`
//! collect the coordinates that are 0 / 1 in *all* such vertices. The
//! structure is captured by three per-row quantities computed from `I0`:
//!
//! * `alpha_i` — the largest column a vertex on the face can use in row `i`
//!   (a recursion that advances by one per row unless blocked by `I0`);
//! * `gamma` — the rows where `alpha` advances (row 1 included);
//! * `mu_i` — the smallest column of row `i` not blocked by `I0`.
//!
//! The face contains no vertex iff `mu_i > alpha_i` for some row. Otherwise
//! `orbitopal_fix` computes the full fixing in time `O(p q)` using a
//! white/red/green flag per cell to share work between the 1-fixing probes
//! of different rows; a flag is never reset, which bounds the total work.

use crate::face::{check_face, CubeFace, FaceCheck};
use crate::shape::{CellIndex, CellSet, OrbitopeShape};
use crate::vertex::{
    enumerate_partitioning_vertices_guarded, VertexMatrix, DEFAULT_ENUMERATION_GUARD,
};
use crate::{Error, Result};

/// Row structure of a face: `alpha`, `mu` and the increase rows `gamma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaProfile {
    alpha: Vec<u32>,
    mu: Vec<u32>,
    in_gamma: Vec<bool>,
}

impl AlphaProfile {
    pub fn alpha(&self, i: u32) -> u32 {
        self.alpha[i as usize - 1]
    }

    pub fn mu(&self, i: u32) -> u32 {
        self.mu[i as usize - 1]
    }

    pub fn in_gamma(&self, i: u32) -> bool {
        self.in_gamma[i as usize - 1]
    }

    /// The rows of `gamma` in increasing order.
    pub fn gamma_rows(&self) -> Vec<u32> {
        (1..=self.alpha.len() as u32).filter(|&i| self.in_gamma(i)).collect()
    }

    /// First row with `mu_i > alpha_i`, if any (the infeasibility witness).
    pub fn infeasible_row(&self) -> Option<u32> {
        (0..self.alpha.len()).find(|&k| self.mu[k] > self.alpha[k]).map(|k| k as u32 + 1)
    }
}

/// Result of a fixing: either the face contains no vertex, or the enlarged
/// face `(I0*, I1*)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixingOutcome {
    Infeasible,
    Fixed(CubeFace),
}

impl FixingOutcome {
    pub fn fixed(&self) -> Option<&CubeFace> {
        match self {
            FixingOutcome::Fixed(f) => Some(f),
            FixingOutcome::Infeasible => None,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, FixingOutcome::Infeasible)
    }
}

/// Work counters for one `orbitopal_fix` call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FixStats {
    /// White-to-colored transitions of the probe flags; bounded by `p * q`.
    pub flag_transitions: usize,
    /// Cells newly added to `I0*` beyond the input `I0`.
    pub fixed_zeros: usize,
    /// Cells newly added to `I1*` beyond the input `I1`.
    pub fixed_ones: usize,
}

/// Computes `alpha`, `mu` and `gamma` for a fixing-ready face.
pub fn compute_profile(face: &CubeFace) -> Result<AlphaProfile> {
    let check = check_face(face);
    if check != FaceCheck::Ok {
        return Err(Error::NotFixingReady(check));
    }
    Ok(profile_unchecked(face.shape(), face.zeros()))
}

fn profile_unchecked(shape: OrbitopeShape, zeros: &CellSet) -> AlphaProfile {
    let p = shape.p() as usize;
    let mut alpha = Vec::with_capacity(p);
    let mut mu = Vec::with_capacity(p);
    let mut in_gamma = Vec::with_capacity(p);
    alpha.push(1u32);
    mu.push(1u32);
    in_gamma.push(true); // row 1 belongs to gamma by convention
    for i in 2..=shape.p() {
        let cap = shape.row_len(i);
        let prev = alpha[i as usize - 2];
        if prev == cap || zeros.contains(CellIndex::new(i, prev + 1)) {
            alpha.push(prev);
            in_gamma.push(false);
        } else {
            alpha.push(prev + 1);
            in_gamma.push(true);
        }
        // P1 guarantees some cell of the row is free
        let m = (1..=cap)
            .find(|&j| !zeros.contains(CellIndex::new(i, j)))
            .expect("P1 guarantees a free cell");
        mu.push(m);
    }
    AlphaProfile { alpha, mu, in_gamma }
}

/// The vertex placing its 1 at `alpha_i` on the increase rows and at `mu_i`
/// elsewhere; lies on the face whenever `mu <= alpha` rowwise.
pub fn x_star(profile: &AlphaProfile, shape: OrbitopeShape) -> Result<VertexMatrix> {
    if let Some(i) = profile.infeasible_row() {
        return Err(Error::Precondition(format!(
            "mu_{i} = {} exceeds alpha_{i} = {}",
            profile.mu(i),
            profile.alpha(i)
        )));
    }
    let cols = (1..=shape.p())
        .map(|i| if profile.in_gamma(i) { profile.alpha(i) } else { profile.mu(i) })
        .collect();
    VertexMatrix::new(shape, cols)
}

/// Cells whose row-complement lies entirely in `zeros`; by the one-per-row
/// rule these are exactly the forced ones of a nonempty fixing.
pub fn derive_ones(zeros: &CellSet) -> CellSet {
    let shape = zeros.shape();
    let mut ones = CellSet::new(shape);
    for i in 1..=shape.p() {
        let cap = shape.row_len(i);
        if zeros.row_count(i) == cap - 1 {
            for j in 1..=cap {
                let cell = CellIndex::new(i, j);
                if !zeros.contains(cell) {
                    ones.insert(cell);
                }
            }
        }
    }
    ones
}

/// Simultaneous fixing in `O(p q)`: equals [`brute_force_fix`] on every
/// fixing-ready face.
pub fn orbitopal_fix(face: &CubeFace) -> Result<(FixingOutcome, FixStats)> {
    let check = check_face(face);
    if check != FaceCheck::Ok {
        return Err(Error::NotFixingReady(check));
    }
    Ok(fix_impl(face, true))
}

/// The unrefined variant running each 1-fixing probe to completion (worst
/// case quadratic in `p`); kept for differential testing.
#[cfg(test)]
pub(crate) fn orbitopal_fix_unrefined(face: &CubeFace) -> Result<(FixingOutcome, FixStats)> {
    let check = check_face(face);
    if check != FaceCheck::Ok {
        return Err(Error::NotFixingReady(check));
    }
    Ok(fix_impl(face, false))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Flag {
    White,
    /// The probe state `(i, beta_i)` eventually fails the `mu > beta` test,
    /// i.e. leads to a 1-fixing.
    Red,
    /// The probe state `(i, beta_i)` runs to row `p` without a hit.
    Green,
}

fn fix_impl(face: &CubeFace, use_flags: bool) -> (FixingOutcome, FixStats) {
    let shape = face.shape();
    let p = shape.p();
    let zeros = face.zeros();
    let mut stats = FixStats::default();

    let profile = profile_unchecked(shape, zeros);
    if profile.infeasible_row().is_some() {
        return (FixingOutcome::Infeasible, stats);
    }

    let mut out_zeros = zeros.clone();
    let mut out_ones = face.ones().clone();

    // First pass: every row is capped at alpha_i, and rows with a single
    // free cell left get their forced one.
    for i in 1..=p {
        let cap = shape.row_len(i);
        for j in profile.alpha(i) + 1..=cap {
            out_zeros.insert(CellIndex::new(i, j));
        }
        if out_zeros.row_count(i) == cap - 1 {
            for j in 1..=cap {
                let cell = CellIndex::new(i, j);
                if !out_zeros.contains(cell) {
                    out_ones.insert(cell);
                }
            }
        }
    }

    // Second pass: for each increase row s whose alpha-cell is still open,
    // probe whether blocking (s, alpha_s) leaves any vertex; if not, the
    // cell is forced to one. The probe recomputes alpha with the extra
    // blocked cell (called beta); flags memoize probe outcomes per cell so
    // each cell is walked at most once across all rows.
    let mut flags = vec![Flag::White; shape.num_cells()];
    let mut path: Vec<CellIndex> = Vec::with_capacity(p as usize);

    'srows: for s in profile.gamma_rows() {
        if s == 1 {
            continue; // alpha_1 is pinned at 1; row 1 was handled above
        }
        let alpha_s = profile.alpha(s);
        if out_ones.contains(CellIndex::new(s, alpha_s)) {
            continue;
        }
        let mut beta = alpha_s - 1;
        path.clear();
        path.push(CellIndex::new(s, beta));
        let mut hit = false;
        for i in s + 1..=p {
            if beta != shape.row_len(i) && !zeros.contains(CellIndex::new(i, beta + 1)) {
                beta += 1;
            }
            let state = CellIndex::new(i, beta);
            if use_flags {
                match flags[shape.cell_offset(state)] {
                    Flag::Green => {
                        for &c in &path {
                            if flags[shape.cell_offset(c)] == Flag::White {
                                flags[shape.cell_offset(c)] = Flag::Green;
                                stats.flag_transitions += 1;
                            }
                        }
                        continue 'srows;
                    }
                    Flag::Red => {
                        hit = true;
                        break;
                    }
                    Flag::White => {}
                }
            }
            if profile.mu(i) > beta {
                hit = true;
                path.push(state);
                break;
            }
            path.push(state);
        }
        let color = if hit { Flag::Red } else { Flag::Green };
        for &c in &path {
            if flags[shape.cell_offset(c)] == Flag::White {
                flags[shape.cell_offset(c)] = color;
                stats.flag_transitions += 1;
            }
        }
        if hit {
            out_ones.insert(CellIndex::new(s, alpha_s));
            for j in 1..=shape.row_len(s) {
                if j != alpha_s {
                    out_zeros.insert(CellIndex::new(s, j));
                }
            }
        }
    }

    stats.fixed_zeros = out_zeros.len() - zeros.len();
    stats.fixed_ones = out_ones.len() - face.ones().len();
    let fixed = CubeFace::new(out_zeros, out_ones).expect("shapes match");
    (FixingOutcome::Fixed(fixed), stats)
}

/// The definitional oracle: enumerates every vertex on the face and collects
/// the componentwise-constant coordinates.
pub fn brute_force_fix(face: &CubeFace) -> Result<FixingOutcome> {
    brute_force_fix_guarded(face, DEFAULT_ENUMERATION_GUARD)
}

pub fn brute_force_fix_guarded(face: &CubeFace, max_p: u32) -> Result<FixingOutcome> {
    let shape = face.shape();
    let vertices = enumerate_partitioning_vertices_guarded(shape, max_p)?;
    let surviving: Vec<&VertexMatrix> =
        vertices.iter().filter(|v| face.admits_columns(v.columns())).collect();
    if surviving.is_empty() {
        return Ok(FixingOutcome::Infeasible);
    }
    let mut zeros = CellSet::new(shape);
    let mut ones = CellSet::new(shape);
    for cell in shape.cells() {
        let mut all_zero = true;
        let mut all_one = true;
        for v in &surviving {
            if v.has_one(cell) {
                all_zero = false;
            } else {
                all_one = false;
            }
            if !all_zero && !all_one {
                break;
            }
        }
        if all_zero {
            zeros.insert(cell);
        } else if all_one {
            ones.insert(cell);
        }
    }
    Ok(FixingOutcome::Fixed(CubeFace::new(zeros, ones)?))
}

/// Test-harness check for the row bound: every vertex on the face has its
/// 1-entry in row `i` at a column `<= alpha_i`.
pub fn alpha_bound_check(face: &CubeFace) -> Result<bool> {
    alpha_bound_check_guarded(face, DEFAULT_ENUMERATION_GUARD)
}

pub fn alpha_bound_check_guarded(face: &CubeFace, max_p: u32) -> Result<bool> {
    let shape = face.shape();
    let profile = compute_profile(face)?;
    let vertices = enumerate_partitioning_vertices_guarded(shape, max_p)?;
    Ok(vertices.iter().filter(|v| face.admits_columns(v.columns())).all(|v| {
        (1..=shape.p()).all(|i| v.column_of_row(i) <= profile.alpha(i))
    }))
}

/// Seeded random fixing-ready faces: independent per-cell zeros trimmed for
/// P1, with the forced ones derived. Shared by tests across modules.
#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_ready_face(s: OrbitopeShape, rng: &mut ChaCha8Rng) -> CubeFace {
        let density = [0.15, 0.3, 0.5][rng.random_range(0..3)];
        let mut zeros = CellSet::new(s);
        for i in 1..=s.p() {
            let cap = s.row_len(i);
            let mut blocked: Vec<u32> =
                (1..=cap).filter(|_| rng.random::<f64>() < density).collect();
            if blocked.len() as u32 == cap {
                blocked.remove(rng.random_range(0..blocked.len()));
            }
            for j in blocked {
                zeros.insert(CellIndex::new(i, j));
            }
        }
        let ones = derive_ones(&zeros);
        let f = CubeFace::new(zeros, ones).unwrap();
        debug_assert_eq!(check_face(&f), FaceCheck::Ok);
        f
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::random_ready_face;
    use super::*;
    use crate::face::complete_face;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn shape(p: u32, q: u32) -> OrbitopeShape {
        OrbitopeShape::new(p, q).unwrap()
    }

    fn face(
        s: OrbitopeShape,
        zeros: impl IntoIterator<Item = (u32, u32)>,
        ones: impl IntoIterator<Item = (u32, u32)>,
    ) -> CubeFace {
        CubeFace::from_cells(s, zeros, ones).unwrap()
    }

    #[test]
    fn profile_examples() {
        // alpha growth capped by blocked cells
        let f = face(shape(5, 4), [(3, 2), (5, 1), (5, 2), (5, 3)], []);
        let p = compute_profile(&f).unwrap();
        assert_eq!((1..=5).map(|i| p.alpha(i)).collect::<Vec<_>>(), vec![1, 2, 3, 4, 4]);
        assert_eq!(p.gamma_rows(), vec![1, 2, 3, 4]);
        assert_eq!((1..=5).map(|i| p.mu(i)).collect::<Vec<_>>(), vec![1, 1, 1, 1, 4]);

        let f = face(shape(4, 3), [], []);
        let p = compute_profile(&f).unwrap();
        assert_eq!((1..=4).map(|i| p.alpha(i)).collect::<Vec<_>>(), vec![1, 2, 3, 3]);
        assert_eq!(p.gamma_rows(), vec![1, 2, 3]);
        assert_eq!((1..=4).map(|i| p.mu(i)).collect::<Vec<_>>(), vec![1, 1, 1, 1]);

        let f = face(shape(3, 3), [(2, 2), (3, 1), (3, 2)], []);
        let p = compute_profile(&f).unwrap();
        assert_eq!((1..=3).map(|i| p.alpha(i)).collect::<Vec<_>>(), vec![1, 1, 1]);
        assert_eq!((1..=3).map(|i| p.mu(i)).collect::<Vec<_>>(), vec![1, 1, 3]);
        assert_eq!(p.infeasible_row(), Some(3));
    }

    #[test]
    fn fix_detects_infeasibility() {
        let f = face(shape(3, 3), [(2, 2), (3, 1), (3, 2)], []);
        let (out, _) = orbitopal_fix(&f).unwrap();
        assert!(out.is_infeasible());
        assert_eq!(brute_force_fix(&f).unwrap(), out);
    }

    #[test]
    fn fix_pins_the_first_column_vertex() {
        let f = face(shape(3, 3), [(2, 2), (3, 2), (3, 3)], []);
        let (out, _) = orbitopal_fix(&f).unwrap();
        let fixed = out.fixed().unwrap();
        let ones: Vec<_> = fixed.ones().iter().map(|c| (c.i, c.j)).collect();
        assert_eq!(ones, vec![(1, 1), (2, 1), (3, 1)]);
        // all remaining cells zero
        assert_eq!(fixed.zeros().len(), shape(3, 3).num_cells() - 3);
        assert_eq!(brute_force_fix(&f).unwrap(), out);
    }

    #[test]
    fn brute_force_examples() {
        // one zero leaves a single vertex at 2x2
        let f = face(shape(2, 2), [(2, 1)], []);
        let out = brute_force_fix(&f).unwrap();
        let fixed = out.fixed().unwrap();
        let ones: Vec<_> = fixed.ones().iter().map(|c| (c.i, c.j)).collect();
        assert_eq!(ones, vec![(1, 1), (2, 2)]);
        let zeros: Vec<_> = fixed.zeros().iter().map(|c| (c.i, c.j)).collect();
        assert_eq!(zeros, vec![(2, 1)]);
        assert_eq!(orbitopal_fix(&f).unwrap().0, out);

        // blocking (2,2) at 3x2 forces the row-2 complement to one
        let f = face(shape(3, 2), [(2, 2)], []);
        let out = brute_force_fix(&f).unwrap();
        assert!(out.fixed().unwrap().ones().contains(CellIndex::new(2, 1)));
        assert_eq!(orbitopal_fix(&f).unwrap().0, out);
    }

    #[test]
    fn empty_face_only_pins_row_one() {
        let f = face(shape(5, 4), [], []);
        let (out, _) = orbitopal_fix(&f).unwrap();
        let fixed = out.fixed().unwrap();
        assert!(fixed.zeros().is_empty());
        let ones: Vec<_> = fixed.ones().iter().map(|c| (c.i, c.j)).collect();
        assert_eq!(ones, vec![(1, 1)]);
        assert_eq!(brute_force_fix(&f).unwrap(), out);
    }

    #[test]
    fn witness_face_fixes_x22() {
        let f = face(shape(5, 4), [(3, 2), (5, 1), (5, 2), (5, 3)], [(1, 1), (5, 4)]);
        let (out, _) = orbitopal_fix(&f).unwrap();
        let fixed = out.fixed().unwrap();
        assert!(fixed.ones().contains(CellIndex::new(2, 2)));
        assert!(fixed.zeros().contains(CellIndex::new(2, 1)));
        assert_eq!(brute_force_fix(&f).unwrap(), out);
    }

    #[test]
    fn x_star_examples() {
        let f = face(shape(4, 3), [], []);
        let p = compute_profile(&f).unwrap();
        assert_eq!(x_star(&p, shape(4, 3)).unwrap().columns(), &[1, 2, 3, 1]);

        let f = face(shape(3, 3), [(2, 2), (3, 2), (3, 3)], []);
        let p = compute_profile(&f).unwrap();
        assert_eq!(x_star(&p, shape(3, 3)).unwrap().columns(), &[1, 1, 1]);

        let f = face(shape(3, 3), [(2, 2), (3, 1), (3, 2)], []);
        let p = compute_profile(&f).unwrap();
        assert!(x_star(&p, shape(3, 3)).is_err());
    }

    #[test]
    fn x_star_lies_on_face() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = shape(6, 4);
        for _ in 0..500 {
            let f = random_ready_face(s, &mut rng);
            let p = compute_profile(&f).unwrap();
            if p.infeasible_row().is_none() {
                let v = x_star(&p, s).unwrap();
                assert!(f.admits_columns(v.columns()));
            }
        }
    }

    #[test]
    fn derive_ones_rules() {
        let s = shape(3, 3);
        assert!(derive_ones(&CellSet::new(s)).iter().all(|c| c == CellIndex::new(1, 1)));
        let zeros =
            CellSet::from_cells(s, [(2, 2), (3, 2), (3, 3)].map(|(i, j)| CellIndex::new(i, j)))
                .unwrap();
        // rows 2 and 3 each keep a single free cell; row 1 is free by default
        let mut expect = CellSet::new(s);
        // after adding the orbitopal zeros this matches brute force; on the
        // raw I0 the rule fires for rows with q(i)-1 zeros only
        expect.insert(CellIndex::new(1, 1));
        expect.insert(CellIndex::new(2, 1));
        expect.insert(CellIndex::new(3, 1));
        // row 2 has one zero of two cells -> fires; row 3 has two of three -> fires
        assert_eq!(derive_ones(&zeros), expect);
    }

    #[test]
    fn alpha_bound_holds_on_small_faces() {
        for (p, q) in [(4, 3), (5, 3)] {
            let s = shape(p, q);
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..200 {
                let f = random_ready_face(s, &mut rng);
                assert!(alpha_bound_check(&f).unwrap());
            }
        }
        // the witness face attains the bound in row 5
        let f = face(shape(5, 4), [(3, 2), (5, 1), (5, 2), (5, 3)], [(1, 1), (5, 4)]);
        assert!(alpha_bound_check(&f).unwrap());
        let profile = compute_profile(&f).unwrap();
        assert_eq!(profile.alpha(5), 4);
    }

    #[test]
    fn oracle_equivalence_random_and_flags_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for (p, q) in [(5, 3), (6, 4), (5, 4)] {
            let s = shape(p, q);
            for _ in 0..400 {
                let f = random_ready_face(s, &mut rng);
                let (fast, stats) = orbitopal_fix(&f).unwrap();
                assert_eq!(brute_force_fix(&f).unwrap(), fast, "face {f:?}");
                let (slow, _) = orbitopal_fix_unrefined(&f).unwrap();
                assert_eq!(slow, fast);
                assert!(stats.flag_transitions <= (p * q) as usize);
            }
        }
    }

    #[test]
    fn idempotent_and_extends_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = shape(6, 4);
        for _ in 0..300 {
            let f = random_ready_face(s, &mut rng);
            let (out, _) = orbitopal_fix(&f).unwrap();
            if let FixingOutcome::Fixed(fixed) = out {
                assert!(f.zeros().is_subset(fixed.zeros()));
                assert!(f.ones().is_subset(fixed.ones()));
                assert!(!fixed.zeros().intersects(fixed.ones()));
                let (again, _) = orbitopal_fix(&fixed).unwrap();
                assert_eq!(again.fixed().unwrap(), &fixed);
            }
        }
    }

    #[test]
    fn monotone_in_the_face() {
        // enlarging the fixed sets shrinks the fixing
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = shape(5, 3);
        for _ in 0..300 {
            let small = random_ready_face(s, &mut rng);
            // enlarge: add one more zero if possible
            let candidates: Vec<CellIndex> = s
                .cells()
                .filter(|&c| {
                    !small.zeros().contains(c)
                        && !small.ones().contains(c)
                        && small.zeros().row_count(c.i) + 1 < s.row_len(c.i)
                })
                .collect();
            if candidates.is_empty() {
                continue;
            }
            let extra = candidates[rng.random_range(0..candidates.len())];
            let mut zeros = small.zeros().clone();
            zeros.insert(extra);
            let ones = derive_ones(&zeros);
            let big = complete_face(&CubeFace::new(zeros, ones).unwrap()).unwrap();
            if check_face(&big) != FaceCheck::Ok {
                continue;
            }
            let (of_small, _) = orbitopal_fix(&small).unwrap();
            let (of_big, _) = orbitopal_fix(&big).unwrap();
            match (of_big, of_small) {
                (FixingOutcome::Infeasible, _) => {}
                (FixingOutcome::Fixed(_), FixingOutcome::Infeasible) => {
                    panic!("smaller face feasible while larger infeasible")
                }
                (FixingOutcome::Fixed(b), FixingOutcome::Fixed(sm)) => {
                    assert!(b.is_contained_in(&sm), "monotonicity broken");
                }
            }
        }
    }

    #[test]
    fn partial_one_fixings_give_the_same_outcome() {
        // dropping 1-fixings whose row-complement zeros stay keeps the face
        // fixing-ready and leaves the surviving vertex set unchanged, so
        // the fixing must not change either
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (p, q) in [(5, 3), (6, 4), (8, 2)] {
            let s = shape(p, q);
            for _ in 0..300 {
                let full = random_ready_face(s, &mut rng);
                let mut ones = CellSet::new(s);
                for c in full.ones().iter() {
                    if rng.random::<f64>() < 0.5 {
                        ones.insert(c);
                    }
                }
                let partial = CubeFace::new(full.zeros().clone(), ones).unwrap();
                assert_eq!(check_face(&partial), FaceCheck::Ok);
                let (a, _) = orbitopal_fix(&partial).unwrap();
                let (b, _) = orbitopal_fix(&full).unwrap();
                assert_eq!(a, b, "partial ones changed the fixing at {full:?}");
                assert_eq!(brute_force_fix(&partial).unwrap(), a);
            }
        }
    }

    #[test]
    fn oracle_equivalence_on_wide_and_narrow_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for (p, q) in [(8, 2), (9, 3), (7, 4), (10, 2)] {
            let s = shape(p, q);
            for _ in 0..300 {
                let f = random_ready_face(s, &mut rng);
                let (fast, stats) = orbitopal_fix(&f).unwrap();
                assert_eq!(brute_force_fix(&f).unwrap(), fast, "face {f:?}");
                assert!(stats.flag_transitions <= (p * q) as usize);
            }
        }
    }

    #[test]
    fn infeasible_iff_mu_exceeds_alpha() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s = shape(6, 4);
        for _ in 0..400 {
            let f = random_ready_face(s, &mut rng);
            let profile = compute_profile(&f).unwrap();
            let oracle = brute_force_fix(&f).unwrap();
            assert_eq!(profile.infeasible_row().is_some(), oracle.is_infeasible());
        }
    }
}
