//! Cube faces `(I0, I1)`: the 0/1 points with prescribed zeros `I0` and ones
//! `I1`. A face is *fixing-ready* when
//!
//! * P1: every row keeps at least one cell outside `I0`, and
//! * P2: a cell in `I1` has every other cell of its row in `I0`.
//!
//! P1 and P2 together imply `I0` and `I1` are disjoint.

use crate::shape::{CellIndex, CellSet, OrbitopeShape};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeFace {
    zeros: CellSet,
    ones: CellSet,
}

/// Classification returned by [`check_face`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceCheck {
    Ok,
    /// `I0` and `I1` intersect in this cell.
    Overlap(CellIndex),
    /// This row has all of its cells in `I0`.
    ViolatesP1(u32),
    /// This `I1` cell is missing a row-complement zero.
    ViolatesP2(CellIndex),
}

impl CubeFace {
    pub fn empty(shape: OrbitopeShape) -> Self {
        CubeFace { zeros: CellSet::new(shape), ones: CellSet::new(shape) }
    }

    pub fn new(zeros: CellSet, ones: CellSet) -> Result<Self> {
        if zeros.shape() != ones.shape() {
            return Err(Error::Invalid("zero and one sets have different shapes".into()));
        }
        Ok(CubeFace { zeros, ones })
    }

    pub fn from_cells(
        shape: OrbitopeShape,
        zeros: impl IntoIterator<Item = (u32, u32)>,
        ones: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self> {
        let zeros =
            CellSet::from_cells(shape, zeros.into_iter().map(|(i, j)| CellIndex::new(i, j)))?;
        let ones = CellSet::from_cells(shape, ones.into_iter().map(|(i, j)| CellIndex::new(i, j)))?;
        Ok(CubeFace { zeros, ones })
    }

    pub fn shape(&self) -> OrbitopeShape {
        self.zeros.shape()
    }

    pub fn zeros(&self) -> &CellSet {
        &self.zeros
    }

    pub fn ones(&self) -> &CellSet {
        &self.ones
    }

    pub fn fix_zero(&mut self, cell: CellIndex) -> bool {
        self.zeros.insert(cell)
    }

    pub fn fix_one(&mut self, cell: CellIndex) -> bool {
        self.ones.insert(cell)
    }

    /// Componentwise containment: every fixing of `self` is also fixed in
    /// `other`.
    pub fn is_contained_in(&self, other: &CubeFace) -> bool {
        other.zeros.is_subset(&self.zeros) && other.ones.is_subset(&self.ones)
    }

    /// Whether a vertex (given by per-row columns) lies on the face.
    pub fn admits_columns(&self, cols: &[u32]) -> bool {
        for (idx, &j) in cols.iter().enumerate() {
            let i = idx as u32 + 1;
            if self.zeros.contains(CellIndex::new(i, j)) {
                return false;
            }
        }
        for cell in self.ones.iter() {
            if cols[cell.i as usize - 1] != cell.j {
                return false;
            }
        }
        true
    }
}

/// Classifies a face; `Ok` means fixing-ready.
pub fn check_face(face: &CubeFace) -> FaceCheck {
    let shape = face.shape();
    for cell in face.ones().iter() {
        if face.zeros().contains(cell) {
            return FaceCheck::Overlap(cell);
        }
    }
    for i in 1..=shape.p() {
        if face.zeros().row_count(i) >= shape.row_len(i) {
            return FaceCheck::ViolatesP1(i);
        }
    }
    for cell in face.ones().iter() {
        for other in shape.row_cells(cell.i) {
            if other.j != cell.j && !face.zeros().contains(other) {
                return FaceCheck::ViolatesP2(cell);
            }
        }
    }
    FaceCheck::Ok
}

/// Closes a face under P2 by adding the row-complement zeros of every 1-fixed
/// cell. Fails when a cell ends up forced both ways (the face is empty).
/// The result satisfies P2 but may still violate P1; run [`check_face`] to
/// detect that.
pub fn complete_face(face: &CubeFace) -> Result<CubeFace> {
    let shape = face.shape();
    let mut out = face.clone();
    for cell in face.ones().iter() {
        if face.zeros().contains(cell) {
            return Err(Error::EmptyFace { i: cell.i, j: cell.j });
        }
        for other in shape.row_cells(cell.i) {
            if other.j == cell.j {
                continue;
            }
            if face.ones().contains(other) {
                // two ones in one row force each other to zero
                return Err(Error::EmptyFace { i: other.i, j: other.j });
            }
            out.fix_zero(other);
        }
    }
    Ok(out)
}

/// Parses the text record `p q ; zeros: (i,j) ... ; ones: (i,j) ...`.
pub fn parse_face_record(text: &str) -> Result<CubeFace> {
    let parts: Vec<&str> = text.split(';').collect();
    if parts.len() != 3 {
        return Err(Error::Parse("expected `p q ; zeros: ... ; ones: ...`".into()));
    }
    let dims: Vec<&str> = parts[0].split_whitespace().collect();
    if dims.len() != 2 {
        return Err(Error::Parse(format!("expected `p q`, got `{}`", parts[0].trim())));
    }
    let p: u32 = dims[0].parse().map_err(|_| Error::Parse(format!("bad p `{}`", dims[0])))?;
    let q: u32 = dims[1].parse().map_err(|_| Error::Parse(format!("bad q `{}`", dims[1])))?;
    let shape = OrbitopeShape::new(p, q)?;
    let zeros = parse_cell_list(parts[1], "zeros")?;
    let ones = parse_cell_list(parts[2], "ones")?;
    CubeFace::from_cells(shape, zeros, ones)
}

fn parse_cell_list(part: &str, label: &str) -> Result<Vec<(u32, u32)>> {
    let part = part.trim();
    let rest = part
        .strip_prefix(label)
        .and_then(|r| r.trim_start().strip_prefix(':'))
        .ok_or_else(|| Error::Parse(format!("expected `{label}: ...`, got `{part}`")))?;
    let mut cells = Vec::new();
    for token in rest.split_whitespace() {
        let inner = token
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("bad cell `{token}`")))?;
        let (a, b) =
            inner.split_once(',').ok_or_else(|| Error::Parse(format!("bad cell `{token}`")))?;
        let i = a.trim().parse().map_err(|_| Error::Parse(format!("bad cell `{token}`")))?;
        let j = b.trim().parse().map_err(|_| Error::Parse(format!("bad cell `{token}`")))?;
        cells.push((i, j));
    }
    Ok(cells)
}

/// Inverse of [`parse_face_record`].
pub fn format_face_record(face: &CubeFace) -> String {
    let shape = face.shape();
    let mut out = format!("{} {} ; zeros:", shape.p(), shape.q());
    for c in face.zeros().iter() {
        out.push_str(&format!(" ({},{})", c.i, c.j));
    }
    out.push_str(" ; ones:");
    for c in face.ones().iter() {
        out.push_str(&format!(" ({},{})", c.i, c.j));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(p: u32, q: u32) -> OrbitopeShape {
        OrbitopeShape::new(p, q).unwrap()
    }

    #[test]
    fn check_face_classification() {
        let s = shape(3, 3);
        // full row 3 zeroed
        let f =
            CubeFace::from_cells(s, [(3, 1), (3, 2), (3, 3)], std::iter::empty::<(u32, u32)>())
                .unwrap();
        assert_eq!(check_face(&f), FaceCheck::ViolatesP1(3));

        let f = CubeFace::from_cells(s, [(2, 2)], [(2, 1)]).unwrap();
        assert_eq!(check_face(&f), FaceCheck::Ok);

        let f = CubeFace::from_cells(s, std::iter::empty::<(u32, u32)>(), [(2, 1)]).unwrap();
        assert_eq!(check_face(&f), FaceCheck::ViolatesP2(CellIndex::new(2, 1)));

        let f = CubeFace::from_cells(s, [(2, 1)], [(2, 1)]).unwrap();
        assert_eq!(check_face(&f), FaceCheck::Overlap(CellIndex::new(2, 1)));
    }

    #[test]
    fn complete_face_closure() {
        let s = shape(3, 3);
        let f = CubeFace::from_cells(s, std::iter::empty::<(u32, u32)>(), [(3, 2)]).unwrap();
        let done = complete_face(&f).unwrap();
        let zeros: Vec<_> = done.zeros().iter().map(|c| (c.i, c.j)).collect();
        assert_eq!(zeros, vec![(3, 1), (3, 3)]);
        assert_eq!(check_face(&done), FaceCheck::Ok);

        let f = CubeFace::empty(s);
        assert_eq!(complete_face(&f).unwrap(), f);

        let f = CubeFace::from_cells(s, std::iter::empty::<(u32, u32)>(), [(2, 1), (2, 2)])
            .unwrap();
        assert!(matches!(complete_face(&f), Err(Error::EmptyFace { .. })));
    }

    #[test]
    fn record_roundtrip() {
        let s = shape(5, 4);
        let f = CubeFace::from_cells(s, [(3, 2), (5, 1), (5, 2), (5, 3)], [(1, 1), (5, 4)])
            .unwrap();
        let text = format_face_record(&f);
        assert_eq!(text, "5 4 ; zeros: (3,2) (5,1) (5,2) (5,3) ; ones: (1,1) (5,4)");
        assert_eq!(parse_face_record(&text).unwrap(), f);
        // empty lists
        let f = CubeFace::empty(s);
        assert_eq!(parse_face_record(&format_face_record(&f)).unwrap(), f);
        assert!(parse_face_record("5 4 ; zeros: (9,9) ; ones:").is_err());
        assert!(parse_face_record("nonsense").is_err());
    }
}
