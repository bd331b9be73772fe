//! Fixing for the at-most-one-entry-per-row case, by reduction: the packing
//! vertex set over a `p x q` shape is the projection of the `(p+1) x (q+1)`
//! partitioning vertex set obtained by dropping the first row and column.
//! A packing face embeds at cell offset `(+1, +1)`, with no fixings in the
//! new row 1; the fixing of the embedded face projects back the same way.
//!
//! Packing matrices use the same reduced index set as partitioning ones:
//! a cell `(i, j)` of the packing shape requires `j <= min(i, q)`.

use crate::face::{check_face, complete_face, CubeFace, FaceCheck};
use crate::fixing::{orbitopal_fix, FixStats, FixingOutcome};
use crate::shape::{CellIndex, CellSet, OrbitopeShape};
use crate::vertex::DEFAULT_ENUMERATION_GUARD;
use crate::{Error, Result};

/// A packing vertex: at most one chosen column per row (`None` = empty row),
/// columns in non-increasing lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingMatrix {
    cols: Vec<Option<u32>>,
}

impl PackingMatrix {
    pub fn columns(&self) -> &[Option<u32>] {
        &self.cols
    }

    pub fn has_one(&self, cell: CellIndex) -> bool {
        self.cols[cell.i as usize - 1] == Some(cell.j)
    }
}

/// Whether per-row choices (with empties) have lexicographically
/// non-increasing columns over the reduced index set.
fn lex_sorted(shape: OrbitopeShape, cols: &[Option<u32>]) -> bool {
    // column j as a bit string, row 1 most significant
    let col_key = |j: u32| -> u128 {
        let mut key = 0u128;
        for (idx, &c) in cols.iter().enumerate() {
            if c == Some(j) {
                key |= 1 << (shape.p() as usize - idx);
            }
        }
        key
    };
    (1..shape.q()).all(|j| col_key(j) >= col_key(j + 1))
}

/// Enumerates all packing vertices of the shape.
pub fn enumerate_packing_vertices(shape: OrbitopeShape) -> Result<Vec<PackingMatrix>> {
    enumerate_packing_vertices_guarded(shape, DEFAULT_ENUMERATION_GUARD)
}

pub fn enumerate_packing_vertices_guarded(
    shape: OrbitopeShape,
    max_p: u32,
) -> Result<Vec<PackingMatrix>> {
    if shape.p() > max_p {
        return Err(Error::GuardExceeded(format!(
            "packing enumeration requires p <= {max_p}, shape has p = {}",
            shape.p()
        )));
    }
    let mut out = Vec::new();
    let mut cols: Vec<Option<u32>> = Vec::with_capacity(shape.p() as usize);
    fn rec(shape: OrbitopeShape, cols: &mut Vec<Option<u32>>, out: &mut Vec<PackingMatrix>) {
        let i = cols.len() as u32 + 1;
        if i > shape.p() {
            if lex_sorted(shape, cols) {
                out.push(PackingMatrix { cols: cols.clone() });
            }
            return;
        }
        for choice in std::iter::once(None).chain((1..=shape.row_len(i)).map(Some)) {
            cols.push(choice);
            rec(shape, cols, out);
            cols.pop();
        }
    }
    rec(shape, &mut cols, &mut out);
    Ok(out)
}

fn admits(face: &CubeFace, m: &PackingMatrix) -> bool {
    for cell in face.zeros().iter() {
        if m.has_one(cell) {
            return false;
        }
    }
    for cell in face.ones().iter() {
        if !m.has_one(cell) {
            return false;
        }
    }
    true
}

/// Embeds the packing face, runs the partitioning fixing on the one-larger
/// shape, and projects the outcome back.
pub fn packing_fix(face: &CubeFace) -> Result<(FixingOutcome, FixStats)> {
    let shape = face.shape();
    if face.zeros().intersects(face.ones()) {
        return Err(Error::NotFixingReady(check_face(face)));
    }
    for i in 1..=shape.p() {
        let one_count = shape.row_cells(i).filter(|&c| face.ones().contains(c)).count();
        if one_count > 1 {
            return Err(Error::NotFixingReady(FaceCheck::ViolatesP2(
                shape.row_cells(i).find(|&c| face.ones().contains(c)).unwrap(),
            )));
        }
    }
    let big_shape = OrbitopeShape::new(shape.p() + 1, shape.q() + 1)?;
    let mut big = CubeFace::empty(big_shape);
    for c in face.zeros().iter() {
        big.fix_zero(CellIndex::new(c.i + 1, c.j + 1));
    }
    for c in face.ones().iter() {
        big.fix_one(CellIndex::new(c.i + 1, c.j + 1));
    }
    // a packing one in row i rules out "row empty", i.e. the column-1 cell;
    // complete_face adds it along with the other row-complement zeros
    let big = complete_face(&big).map_err(|_| Error::Invalid("contradictory fixings".into()))?;
    match check_face(&big) {
        FaceCheck::Ok => {}
        // a fully blocked embedded row cannot happen: column 1 is never fixed
        // to zero by the embedding unless the row carries a one
        check => return Err(Error::NotFixingReady(check)),
    }
    let (outcome, stats) = orbitopal_fix(&big)?;
    let projected = match outcome {
        FixingOutcome::Infeasible => FixingOutcome::Infeasible,
        FixingOutcome::Fixed(fixed) => {
            let mut zeros = CellSet::new(shape);
            let mut ones = CellSet::new(shape);
            for c in fixed.zeros().iter() {
                if c.i > 1 && c.j > 1 {
                    zeros.insert(CellIndex::new(c.i - 1, c.j - 1));
                }
            }
            for c in fixed.ones().iter() {
                if c.i > 1 && c.j > 1 {
                    ones.insert(CellIndex::new(c.i - 1, c.j - 1));
                }
            }
            FixingOutcome::Fixed(CubeFace::new(zeros, ones)?)
        }
    };
    Ok((projected, stats))
}

/// Brute-force reference: enumerates the packing vertices on the face.
pub fn packing_brute_force_fix(face: &CubeFace) -> Result<FixingOutcome> {
    packing_brute_force_fix_guarded(face, DEFAULT_ENUMERATION_GUARD)
}

pub fn packing_brute_force_fix_guarded(face: &CubeFace, max_p: u32) -> Result<FixingOutcome> {
    let shape = face.shape();
    let vertices = enumerate_packing_vertices_guarded(shape, max_p)?;
    let surviving: Vec<&PackingMatrix> = vertices.iter().filter(|m| admits(face, m)).collect();
    if surviving.is_empty() {
        return Ok(FixingOutcome::Infeasible);
    }
    let mut zeros = CellSet::new(shape);
    let mut ones = CellSet::new(shape);
    for cell in shape.cells() {
        let ones_count = surviving.iter().filter(|m| m.has_one(cell)).count();
        if ones_count == 0 {
            zeros.insert(cell);
        } else if ones_count == surviving.len() {
            ones.insert(cell);
        }
    }
    Ok(FixingOutcome::Fixed(CubeFace::new(zeros, ones)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(p: u32, q: u32) -> OrbitopeShape {
        OrbitopeShape::new(p, q).unwrap()
    }

    #[test]
    fn packing_vertex_count_2x2() {
        let verts = enumerate_packing_vertices(shape(2, 2)).unwrap();
        assert_eq!(verts.len(), 5);
    }

    #[test]
    fn empty_face_fixes_nothing() {
        let f = CubeFace::empty(shape(2, 2));
        let (out, _) = packing_fix(&f).unwrap();
        let fixed = out.fixed().unwrap();
        assert!(fixed.zeros().is_empty());
        assert!(fixed.ones().is_empty());
        assert_eq!(packing_brute_force_fix(&f).unwrap(), out);
    }

    #[test]
    fn blocked_first_cell() {
        let s = shape(2, 2);
        let f = CubeFace::from_cells(s, [(1, 1)], std::iter::empty::<(u32, u32)>()).unwrap();
        let (out, _) = packing_fix(&f).unwrap();
        assert_eq!(packing_brute_force_fix(&f).unwrap(), out);
        // row 1 empty forces column 2 of row 2 to stay empty as well
        let fixed = out.fixed().unwrap();
        assert!(fixed.zeros().contains(CellIndex::new(2, 2)));
    }

    #[test]
    fn one_fix_propagates() {
        let s = shape(3, 2);
        let f = CubeFace::from_cells(s, [(2, 2)], std::iter::empty::<(u32, u32)>()).unwrap();
        let (out, _) = packing_fix(&f).unwrap();
        assert_eq!(packing_brute_force_fix(&f).unwrap(), out);
    }

    #[test]
    fn exhaustive_oracle_equivalence_small() {
        // every (I0, I1) combination with at most one 1 per row
        for (p, q) in [(2, 2), (3, 2), (3, 3)] {
            let s = shape(p, q);
            exhaustive_check(s);
        }
    }

    pub(crate) fn exhaustive_check(s: OrbitopeShape) {
        let cells: Vec<CellIndex> = s.cells().collect();
        let n = cells.len();
        // each cell: 0 = free, 1 = zero-fixed, 2 = one-fixed
        let mut state = vec![0u8; n];
        loop {
            let mut ok = true;
            let mut per_row_ones = vec![0u32; s.p() as usize];
            for (k, &c) in cells.iter().enumerate() {
                if state[k] == 2 {
                    per_row_ones[c.i as usize - 1] += 1;
                    if per_row_ones[c.i as usize - 1] > 1 {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                let zeros: Vec<(u32, u32)> = cells
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| state[k] == 1)
                    .map(|(_, c)| (c.i, c.j))
                    .collect();
                let ones: Vec<(u32, u32)> = cells
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| state[k] == 2)
                    .map(|(_, c)| (c.i, c.j))
                    .collect();
                let face = CubeFace::from_cells(s, zeros, ones).unwrap();
                if !face.zeros().intersects(face.ones()) {
                    let (fast, _) = packing_fix(&face).unwrap();
                    let slow = packing_brute_force_fix(&face).unwrap();
                    assert_eq!(fast, slow, "packing mismatch on {face:?}");
                }
            }
            // advance base-3 odometer
            let mut k = 0;
            while k < n {
                if state[k] < 2 {
                    state[k] += 1;
                    break;
                }
                state[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
}
