//! Vertices of the one-entry-per-row polytope: 0/1 matrices with exactly one
//! 1 per row whose columns are in non-increasing lexicographic order. These
//! are exactly the matrices whose per-row column choices form a restricted
//! growth string: `j(1) = 1` and `j(i+1) <= 1 + max_{k<=i} j(k)`.

use crate::shape::{CellIndex, OrbitopeShape};
use crate::{Error, Result};

/// Default bound on `p` for the enumeration oracles.
pub const DEFAULT_ENUMERATION_GUARD: u32 = 10;

/// A vertex, stored as the chosen column per row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexMatrix {
    cols: Vec<u32>,
}

impl VertexMatrix {
    /// Builds a vertex from per-row column choices, validating the growth
    /// string property against the shape.
    pub fn new(shape: OrbitopeShape, cols: Vec<u32>) -> Result<Self> {
        if cols.len() != shape.p() as usize {
            return Err(Error::Invalid(format!(
                "expected {} rows, got {}",
                shape.p(),
                cols.len()
            )));
        }
        let mut max = 0u32;
        for (idx, &j) in cols.iter().enumerate() {
            let i = idx as u32 + 1;
            if j < 1 || j > shape.q_of_row(i)? || j > max + 1 {
                return Err(Error::Invalid(format!("row {i} column {j} breaks the growth order")));
            }
            max = max.max(j);
        }
        Ok(VertexMatrix { cols })
    }

    pub fn column_of_row(&self, i: u32) -> u32 {
        self.cols[i as usize - 1]
    }

    pub fn columns(&self) -> &[u32] {
        &self.cols
    }

    pub fn has_one(&self, cell: CellIndex) -> bool {
        self.cols[cell.i as usize - 1] == cell.j
    }

    /// Dense 0/1 image over the reduced index set, row-major.
    pub fn to_dense(&self, shape: OrbitopeShape) -> Vec<u8> {
        let mut out = vec![0u8; shape.num_cells()];
        for (idx, &j) in self.cols.iter().enumerate() {
            out[shape.cell_offset(CellIndex::new(idx as u32 + 1, j))] = 1;
        }
        out
    }
}

/// Whether a dense 0/1 matrix over the reduced index set (row-major) is a
/// vertex: one 1 per row and growth-string column choices.
pub fn is_vertex(shape: OrbitopeShape, dense: &[u8]) -> bool {
    if dense.len() != shape.num_cells() {
        return false;
    }
    let mut max = 0u32;
    for i in 1..=shape.p() {
        let mut chosen = None;
        for j in 1..=shape.row_len(i) {
            if dense[shape.cell_offset(CellIndex::new(i, j))] != 0 {
                if chosen.is_some() {
                    return false;
                }
                chosen = Some(j);
            }
        }
        match chosen {
            Some(j) if j <= max + 1 => max = max.max(j),
            _ => return false,
        }
    }
    true
}

/// Enumerates all vertices of the shape, each exactly once, using the default
/// guard `p <= 10`.
pub fn enumerate_partitioning_vertices(shape: OrbitopeShape) -> Result<Vec<VertexMatrix>> {
    enumerate_partitioning_vertices_guarded(shape, DEFAULT_ENUMERATION_GUARD)
}

/// Enumeration with an explicit guard on `p`.
pub fn enumerate_partitioning_vertices_guarded(
    shape: OrbitopeShape,
    max_p: u32,
) -> Result<Vec<VertexMatrix>> {
    if shape.p() > max_p {
        return Err(Error::GuardExceeded(format!(
            "vertex enumeration requires p <= {max_p}, shape has p = {}",
            shape.p()
        )));
    }
    let mut out = Vec::new();
    let mut cols = Vec::with_capacity(shape.p() as usize);
    grow(shape, &mut cols, 0, &mut out);
    Ok(out)
}

fn grow(shape: OrbitopeShape, cols: &mut Vec<u32>, max: u32, out: &mut Vec<VertexMatrix>) {
    let i = cols.len() as u32 + 1;
    if i > shape.p() {
        out.push(VertexMatrix { cols: cols.clone() });
        return;
    }
    let hi = (max + 1).min(shape.row_len(i));
    for j in 1..=hi {
        cols.push(j);
        grow(shape, cols, max.max(j), out);
        cols.pop();
    }
}

/// Independent count of restricted growth strings with values bounded by the
/// row capacities, via dynamic programming over (row, current maximum). Used
/// as an oracle for the enumeration.
pub fn count_growth_strings(shape: OrbitopeShape) -> u64 {
    // counts[m] = number of prefixes of the current length whose maximum is m
    let mut counts = vec![0u64; shape.q() as usize + 1];
    counts[1] = 1; // row 1 must choose column 1
    for i in 2..=shape.p() {
        let cap = shape.row_len(i);
        let mut next = vec![0u64; shape.q() as usize + 1];
        for (m, &c) in counts.iter().enumerate().skip(1) {
            if c == 0 {
                continue;
            }
            let m = m as u32;
            // reuse one of the m used columns (those <= cap are available)
            next[m as usize] += c * u64::from(m.min(cap));
            // or open column m+1
            if m < cap {
                next[m as usize + 1] += c;
            }
        }
        counts = next;
    }
    counts.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::OrbitopeShape;

    fn shape(p: u32, q: u32) -> OrbitopeShape {
        OrbitopeShape::new(p, q).unwrap()
    }

    #[test]
    fn growth_string_examples() {
        let s = shape(3, 2);
        for cols in [vec![1, 1, 2], vec![1, 2, 2], vec![1, 1, 1]] {
            let v = VertexMatrix::new(s, cols).unwrap();
            assert!(is_vertex(s, &v.to_dense(s)));
        }
        let s = shape(2, 2);
        assert!(VertexMatrix::new(s, vec![1, 2]).is_ok());
        assert!(VertexMatrix::new(s, vec![2, 1]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_partitioning_vertices(shape(3, 2)).unwrap().len(), 4);
        assert_eq!(enumerate_partitioning_vertices(shape(4, 4)).unwrap().len(), 15); // Bell(4)
        assert_eq!(enumerate_partitioning_vertices(shape(2, 2)).unwrap().len(), 2);
        assert!(enumerate_partitioning_vertices(shape(11, 4)).is_err());
    }

    #[test]
    fn enumeration_matches_growth_string_count() {
        for p in 2..=8 {
            for q in 2..=4.min(p) {
                let s = shape(p, q);
                let verts = enumerate_partitioning_vertices(s).unwrap();
                assert_eq!(verts.len() as u64, count_growth_strings(s), "shape {p}x{q}");
                // each exactly once
                let mut seen = std::collections::HashSet::new();
                for v in &verts {
                    assert!(seen.insert(v.columns().to_vec()));
                    assert!(is_vertex(s, &v.to_dense(s)));
                }
            }
        }
    }

    #[test]
    fn non_vertices_fail_exhaustively() {
        // every one-hot matrix that is not an enumerated vertex fails is_vertex
        for p in 2..=5u32 {
            for q in 2..=p.min(4) {
                let s = shape(p, q);
                let vertex_set: std::collections::HashSet<Vec<u32>> =
                    enumerate_partitioning_vertices(s)
                        .unwrap()
                        .into_iter()
                        .map(|v| v.columns().to_vec())
                        .collect();
                let mut choice = vec![1u32; p as usize];
                loop {
                    let dense = {
                        let mut d = vec![0u8; s.num_cells()];
                        for (idx, &j) in choice.iter().enumerate() {
                            d[s.cell_offset(CellIndex::new(idx as u32 + 1, j))] = 1;
                        }
                        d
                    };
                    assert_eq!(is_vertex(s, &dense), vertex_set.contains(&choice));
                    // advance the odometer over all one-hot choices
                    let mut k = 0;
                    loop {
                        if k == choice.len() {
                            break;
                        }
                        let row = k as u32 + 1;
                        if choice[k] < s.q_of_row(row).unwrap() {
                            choice[k] += 1;
                            break;
                        }
                        choice[k] = 1;
                        k += 1;
                    }
                    if k == choice.len() {
                        break;
                    }
                }
            }
        }
    }

    #[test]
    fn row_one_must_pick_column_one() {
        let s = shape(2, 2);
        // (1,1) unset -> not a vertex regardless of the rest
        let mut dense = vec![0u8; s.num_cells()];
        dense[s.cell_offset(CellIndex::new(2, 1))] = 1;
        assert!(!is_vertex(s, &dense));
    }
}
