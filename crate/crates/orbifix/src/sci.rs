//! Shifted column inequalities.
//!
//! A *shifted column* `S` picks one cell per diagonal `1..=eta` with weakly
//! increasing columns `c_1 <= ... <= c_eta`. Together with an anchor cell
//! `(i, j) = <eta, j>` satisfying `c_eta < j` and the *bar*
//! `B = {(i,j), ..., (i, q(i))}`, it yields the valid inequality
//! `x(B) - x(S) <= 0`. When the shifted column sits entirely in column
//! `j - 1` the inequality is a plain *column inequality*.
//!
//! Separation is exact and runs in one `O(p q)` pass: a dynamic program over
//! diagonal coordinates computes, for every `<eta, j>`, the minimum `x(S)`
//! over shifted columns ending at diagonal `eta` within the first `j`
//! columns; scanning all bars then yields the most violated inequality.

use crate::fixing::AlphaProfile;
use crate::shape::{CellIndex, DiagonalCoord, OrbitopeShape};
use crate::{Error, Result};

/// Default cap on explicit inequality enumeration.
pub const DEFAULT_SCI_CAP: usize = 2_000_000;

/// One cell per diagonal `1..=eta`, columns weakly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShiftedColumn {
    cols: Vec<u32>,
}

impl ShiftedColumn {
    pub fn new(shape: OrbitopeShape, cols: Vec<u32>) -> Result<Self> {
        if cols.is_empty() {
            return Err(Error::Invalid("a shifted column needs at least one entry".into()));
        }
        for (k, &c) in cols.iter().enumerate() {
            let eta = k as u32 + 1;
            shape.diag_to_cell(DiagonalCoord::new(eta, c))?;
            if k > 0 && cols[k - 1] > c {
                return Err(Error::Invalid("shifted column entries must be weakly increasing".into()));
            }
        }
        Ok(ShiftedColumn { cols })
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    /// Column of the entry on diagonal `eta`.
    pub fn column(&self, eta: u32) -> u32 {
        self.cols[eta as usize - 1]
    }

    pub fn cells(&self) -> impl Iterator<Item = CellIndex> + '_ {
        self.cols
            .iter()
            .enumerate()
            .map(|(k, &c)| CellIndex::new(c + k as u32, c))
    }
}

/// `x(B) - x(S) <= 0` with bar `B` the row suffix starting at the anchor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SCInequality {
    shape: OrbitopeShape,
    anchor: CellIndex,
    shifted: ShiftedColumn,
}

impl SCInequality {
    pub fn new(shape: OrbitopeShape, anchor: CellIndex, shifted: ShiftedColumn) -> Result<Self> {
        if !shape.contains(anchor) {
            return Err(Error::CellOutOfShape { i: anchor.i, j: anchor.j, p: shape.p(), q: shape.q() });
        }
        let eta = anchor.i - anchor.j + 1;
        if shifted.len() as u32 != eta {
            return Err(Error::Invalid(format!(
                "shifted column has {} entries but the anchor sits on diagonal {eta}",
                shifted.len()
            )));
        }
        if shifted.column(eta) >= anchor.j {
            return Err(Error::Invalid(
                "the shifted column must end strictly left of the anchor column".into(),
            ));
        }
        Ok(SCInequality { shape, anchor, shifted })
    }

    pub fn shape(&self) -> OrbitopeShape {
        self.shape
    }

    pub fn anchor(&self) -> CellIndex {
        self.anchor
    }

    pub fn shifted_column(&self) -> &ShiftedColumn {
        &self.shifted
    }

    pub fn bar_cells(&self) -> impl Iterator<Item = CellIndex> + '_ {
        let i = self.anchor.i;
        (self.anchor.j..=self.shape.row_len(i)).map(move |j| CellIndex::new(i, j))
    }

    /// A column inequality keeps every entry in the column left of the anchor.
    pub fn is_column_inequality(&self) -> bool {
        self.shifted.cols.iter().all(|&c| c == self.anchor.j - 1)
    }

    /// `x(B) - x(S)`; positive means violated.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let bar: f64 = self.bar_cells().map(|c| x[self.shape.cell_offset(c)]).sum();
        let shifted: f64 = self.shifted.cells().map(|c| x[self.shape.cell_offset(c)]).sum();
        bar - shifted
    }
}

/// The shifted column of a face profile at row `i`: entries `(k, alpha_k + 1)`
/// over the non-increase rows `k <= i`. It lies inside `I0` of the face the
/// profile was computed from. Requires `i >= 2` and `alpha_i < q(i)`.
pub fn build_s_i(profile: &AlphaProfile, i: u32, shape: OrbitopeShape) -> Result<ShiftedColumn> {
    if i < 2 {
        return Err(Error::Precondition("build_s_i needs i >= 2".into()));
    }
    let qi = shape.q_of_row(i)?;
    if profile.alpha(i) >= qi {
        return Err(Error::Precondition(format!(
            "alpha_{i} = {} is not below q({i}) = {qi}",
            profile.alpha(i)
        )));
    }
    let cols: Vec<u32> =
        (1..=i).filter(|&k| !profile.in_gamma(k)).map(|k| profile.alpha(k) + 1).collect();
    ShiftedColumn::new(shape, cols)
}

/// Exact separation: the most violated inequality at `x`, if any exceeds the
/// tolerance.
pub fn separate_sci(x: &[f64], shape: OrbitopeShape, tol: f64) -> Option<(SCInequality, f64)> {
    assert_eq!(x.len(), shape.num_cells(), "point dimension mismatch");
    let p = shape.p() as usize;
    let q = shape.q() as usize;
    let val = |eta: usize, j: usize| -> f64 {
        x[shape.cell_offset(CellIndex::new((j + eta - 1) as u32, j as u32))]
    };
    // best[eta][j]: minimum x(S) over shifted columns on diagonals 1..=eta
    // with all entries in columns <= j; `take[eta][j]` marks whether the
    // optimum places its diagonal-eta entry at column j.
    let mut best = vec![vec![f64::INFINITY; q + 1]; p + 1];
    let mut take = vec![vec![false; q + 1]; p + 1];
    for eta in 1..=p {
        for j in 1..=q {
            let mut b = best[eta][j - 1];
            let mut t = false;
            if j + eta - 1 <= p {
                let here = val(eta, j) + if eta == 1 { 0.0 } else { best[eta - 1][j] };
                if here < b {
                    b = here;
                    t = true;
                }
            }
            best[eta][j] = b;
            take[eta][j] = t;
        }
    }
    let mut winner: Option<(CellIndex, f64)> = None;
    for i in 1..=shape.p() {
        let cap = shape.row_len(i);
        let mut bar = 0.0;
        for j in (2..=cap).rev() {
            bar += x[shape.cell_offset(CellIndex::new(i, j))];
            let eta = (i - j + 1) as usize;
            let s_min = best[eta][j as usize - 1];
            if s_min.is_finite() {
                let violation = bar - s_min;
                if violation > tol && winner.map_or(true, |(_, v)| violation > v) {
                    winner = Some((CellIndex::new(i, j), violation));
                }
            }
        }
    }
    let (anchor, violation) = winner?;
    // reconstruct the argmin shifted column
    let mut cols = vec![0u32; (anchor.i - anchor.j + 1) as usize];
    let mut j = anchor.j as usize - 1;
    for eta in (1..=cols.len()).rev() {
        while !take[eta][j] {
            j -= 1;
        }
        cols[eta - 1] = j as u32;
    }
    let shifted = ShiftedColumn::new(shape, cols).expect("reconstructed column is valid");
    let sci = SCInequality::new(shape, anchor, shifted).expect("reconstructed SCI is valid");
    debug_assert!((sci.evaluate(x) - violation).abs() < 1e-9);
    Some((sci, violation))
}

/// Explicitly enumerates every shifted column inequality of the shape, up to
/// the cap.
pub fn enumerate_scis(shape: OrbitopeShape) -> Result<Vec<SCInequality>> {
    enumerate_scis_capped(shape, DEFAULT_SCI_CAP)
}

pub fn enumerate_scis_capped(shape: OrbitopeShape, cap: usize) -> Result<Vec<SCInequality>> {
    let mut out = Vec::new();
    for i in 1..=shape.p() {
        for j in 2..=shape.row_len(i) {
            let anchor = CellIndex::new(i, j);
            let eta = i - j + 1;
            let mut cols = Vec::with_capacity(eta as usize);
            expand(shape, anchor, eta, 1, j - 1, &mut cols, &mut out, cap)?;
        }
    }
    Ok(out)
}

fn expand(
    shape: OrbitopeShape,
    anchor: CellIndex,
    eta: u32,
    k: u32,
    max_col: u32,
    cols: &mut Vec<u32>,
    out: &mut Vec<SCInequality>,
    cap: usize,
) -> Result<()> {
    if k > eta {
        let shifted = ShiftedColumn::new(shape, cols.clone())?;
        out.push(SCInequality::new(shape, anchor, shifted)?);
        if out.len() > cap {
            return Err(Error::GuardExceeded(format!(
                "more than {cap} shifted column inequalities"
            )));
        }
        return Ok(());
    }
    let lo = cols.last().copied().unwrap_or(1);
    for c in lo..=max_col {
        // the diagonal-k entry (c + k - 1, c) must stay inside the shape
        if c + k - 1 > shape.p() {
            break;
        }
        cols.push(c);
        expand(shape, anchor, eta, k + 1, max_col, cols, out, cap)?;
        cols.pop();
    }
    Ok(())
}

/// The column inequalities only.
pub fn enumerate_column_inequalities(shape: OrbitopeShape) -> Result<Vec<SCInequality>> {
    let mut out = Vec::new();
    for i in 1..=shape.p() {
        for j in 2..=shape.row_len(i) {
            let anchor = CellIndex::new(i, j);
            let eta = i - j + 1;
            // all entries in column j - 1: needs (j - 1) + eta - 1 <= p
            if j - 1 + eta - 1 <= shape.p() {
                let shifted = ShiftedColumn::new(shape, vec![j - 1; eta as usize])?;
                out.push(SCInequality::new(shape, anchor, shifted)?);
            }
        }
    }
    Ok(out)
}
