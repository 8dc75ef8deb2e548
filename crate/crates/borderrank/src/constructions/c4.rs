//! Order-4 construction absorbing an order-3 diagonal tensor of size M into
//! an (n1+1, n2+1, n3+1) spider, where M comes from an independence system:
//! disjoint sets J, K1, K2, K3 with coordinate-fixing bijections.
//!
//! The J-group carries the diagonal at ε³; each K_i-group cancels one kind of
//! ε² term against it, using the shared labels transported along the
//! bijections. Sign pattern per group: K1 (+, −), K2 (−, +), K3 (+, −).

use std::collections::BTreeMap;

use super::{embedded_unit_part, BuiltFamily, IndependenceSystem, SlotAssembly};
use crate::limits::{EpsVector, RankOneEpsTensor};
use crate::scalar::{rat, EpsPoly};
use crate::{Error, Result};

pub(super) fn built_family(sys: &IndependenceSystem, n: [usize; 3]) -> Result<BuiltFamily> {
    sys.validate()?;
    if sys.grid() != n {
        return Err(Error::InvalidParameter(format!(
            "system grid {:?} does not match parameters {n:?}",
            sys.grid()
        )));
    }
    let m = sys.size();
    let vdims = [n[0] + 1, n[1] + 1, n[2] + 1];
    let lengths = [vdims[0] + m, vdims[1] + m, vdims[2] + m];
    let unit_part = embedded_unit_part(vdims, lengths, m, 3);
    let mut asm = SlotAssembly::new(vdims, lengths, unit_part);

    // Shared labels: J in sorted order; K-triples inherit the label of their
    // preimage, so paired perturbations meet on equal W-coordinates.
    let label: BTreeMap<[usize; 3], usize> = sys
        .j_set()
        .iter()
        .enumerate()
        .map(|(l, &j)| (j, l))
        .collect();
    let mut k_labels: [BTreeMap<[usize; 3], usize>; 3] = Default::default();
    for i in 0..3 {
        for (j, k) in sys.map(i) {
            k_labels[i].insert(*k, label[j]);
        }
    }

    let eps = EpsPoly::eps();
    let neg_eps = EpsPoly::monomial(1, rat(-1));
    let perturbed = |p: usize, coord: usize, l: usize, sign: &EpsPoly| {
        let mut f = EpsVector::basis(lengths[p], coord);
        f.add_term(vdims[p] + l, sign);
        f
    };

    for (&j, &l) in &label {
        asm.insert(
            j,
            RankOneEpsTensor::new(vec![
                perturbed(0, j[0], l, &eps),
                perturbed(1, j[1], l, &eps),
                perturbed(2, j[2], l, &eps),
            ]),
        );
    }
    for (&k, &l) in &k_labels[0] {
        asm.insert(
            k,
            RankOneEpsTensor::new(vec![
                EpsVector::basis(lengths[0], k[0]),
                perturbed(1, k[1], l, &eps),
                perturbed(2, k[2], l, &neg_eps),
            ]),
        );
    }
    for (&k, &l) in &k_labels[1] {
        asm.insert(
            k,
            RankOneEpsTensor::new(vec![
                perturbed(0, k[0], l, &neg_eps),
                EpsVector::basis(lengths[1], k[1]),
                perturbed(2, k[2], l, &eps),
            ]),
        );
    }
    for (&k, &l) in &k_labels[2] {
        asm.insert(
            k,
            RankOneEpsTensor::new(vec![
                perturbed(0, k[0], l, &eps),
                perturbed(1, k[1], l, &neg_eps),
                EpsVector::basis(lengths[2], k[2]),
            ]),
        );
    }

    asm.complete()
}

/// Witness family of (n1+1)(n2+1)(n3+1) + 1 rank-one elements from a valid
/// independence system, slot order lexicographic with the closing element
/// last.
pub fn build_c4_family(sys: &IndependenceSystem) -> Result<Vec<RankOneEpsTensor>> {
    Ok(built_family(sys, sys.grid())?.elements)
}

#[cfg(test)]
mod tests {
    use super::super::independence_system_even;
    use super::*;
    use crate::tensor::{Shape, SparseTensor};

    #[test]
    fn family_count() {
        let sys = independence_system_even(2, 2, 2).unwrap();
        assert_eq!(build_c4_family(&sys).unwrap().len(), 28);
    }

    #[test]
    fn telescoping_identity_holds() {
        for grid in [[2, 2, 2], [4, 2, 2]] {
            let sys = independence_system_even(grid[0], grid[1], grid[2]).unwrap();
            built_family(&sys, grid).unwrap().check_identity().unwrap();
        }
    }

    #[test]
    fn degree_two_cancels_between_j_and_k_groups() {
        let sys = independence_system_even(2, 2, 2).unwrap();
        let built = built_family(&sys, [2, 2, 2]).unwrap();
        let dims = built.ambient.clone();
        let mut acc = SparseTensor::new(Shape::new(dims.clone()).unwrap());
        for z in &built.elements[..built.elements.len() - 1] {
            acc = acc.add(&z.expand_to_tensor(&dims).unwrap()).unwrap();
        }
        assert!(acc.coefficient_tensor(2).is_zero());
        assert_eq!(acc.coefficient_tensor(3), built.unit_part);
    }

    #[test]
    fn rejects_mismatched_grid() {
        let sys = independence_system_even(2, 2, 2).unwrap();
        assert!(built_family(&sys, [4, 2, 2]).is_err());
    }
}
