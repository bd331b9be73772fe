//! The node-relaxation model.
//!
//! Variables: `x_ij` over the reduced index set (cells with `j > i` are
//! dropped outright, the standing symmetry fixing) and one `y_ik` per edge.
//! Rows: one-per-row sums on `x`, and a coupling row
//! `x_ij + x_kj - y_ik <= 1` per edge and column; terms outside the reduced
//! set are simply absent.

use crate::lp::{LPModel, RowOp};
use crate::shape::{CellIndex, OrbitopeShape};
use crate::Result;

use super::instance::PartitionInstance;

/// Variable and row bookkeeping of a built model.
#[derive(Debug, Clone)]
pub struct ModelLayout {
    pub shape: OrbitopeShape,
    /// LP variable per cell offset of the reduced index set.
    pub x_vars: Vec<usize>,
    /// LP variable per edge (instance edge order).
    pub y_vars: Vec<usize>,
}

impl ModelLayout {
    pub fn x_var(&self, cell: CellIndex) -> usize {
        self.x_vars[self.shape.cell_offset(cell)]
    }
}

pub fn build_model(instance: &PartitionInstance) -> Result<(LPModel, ModelLayout)> {
    let shape = OrbitopeShape::new(instance.p(), instance.q())?;
    let mut model = LPModel::new();
    let x_vars: Vec<usize> =
        shape.cells().map(|_| model.add_var(0.0, 1.0, 0.0)).collect();
    let y_vars: Vec<usize> = instance
        .edges()
        .iter()
        .map(|&(_, _, w)| model.add_var(0.0, 1.0, w as f64))
        .collect();
    for i in 1..=shape.p() {
        let terms: Vec<(usize, f64)> = shape
            .row_cells(i)
            .map(|c| (x_vars[shape.cell_offset(c)], 1.0))
            .collect();
        model.add_row(terms, RowOp::Eq, 1.0)?;
    }
    for (e, &(u, v, _)) in instance.edges().iter().enumerate() {
        for j in 1..=instance.q() {
            let mut terms = Vec::with_capacity(3);
            if j <= shape.q_of_row(u)? {
                terms.push((x_vars[shape.cell_offset(CellIndex::new(u, j))], 1.0));
            }
            if j <= shape.q_of_row(v)? {
                terms.push((x_vars[shape.cell_offset(CellIndex::new(v, j))], 1.0));
            }
            terms.push((y_vars[e], -1.0));
            model.add_row(terms, RowOp::Le, 1.0)?;
        }
    }
    Ok((model, ModelLayout { shape, x_vars, y_vars }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_dimensions() {
        // path on 3 nodes, q = 2
        let path =
            PartitionInstance::new(3, 2, vec![(1, 2, 1), (2, 3, 1)], "path".into()).unwrap();
        let (model, layout) = build_model(&path).unwrap();
        assert_eq!(layout.x_vars.len(), 5); // 1 + 2 + 2
        assert_eq!(layout.y_vars.len(), 2);
        assert_eq!(model.num_rows(), 3 + 4); // row sums + m*q couplings
        assert_eq!(model.num_vars(), 7);

        // K3 with q = 3
        let k3 = PartitionInstance::new(3, 3, vec![(1, 2, 1), (1, 3, 1), (2, 3, 1)], "k3".into())
            .unwrap();
        let (model, layout) = build_model(&k3).unwrap();
        assert_eq!(layout.x_vars.len(), 6); // 1 + 2 + 3
        assert_eq!(layout.y_vars.len(), 3);
        assert_eq!(model.num_rows(), 3 + 9);

        // single node rejected by the instance invariant
        assert!(PartitionInstance::new(1, 2, vec![], "one".into()).is_err());
    }
}
