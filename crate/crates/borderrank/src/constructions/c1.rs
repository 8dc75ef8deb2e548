//! Order-4 construction absorbing a dangling matrix of size
//! (n1−1)(n2−1)(n3−1)/2 into an (n1+1, n2+1, n3+1) spider, n1 odd.
//!
//! Four explicit groups carry the diagonal at ε³ and cancel ε²; the ε¹
//! residue is then canceled by corrections computed from the accumulated sum
//! (see [`SlotAssembly::complete`]), not transcribed from closed formulas.

use super::{embedded_unit_part, BuiltFamily, SlotAssembly};
use crate::limits::{EpsVector, RankOneEpsTensor};
use crate::scalar::{rat, EpsPoly};
use crate::tensor::pack_index;
use crate::Result;

struct Space {
    m: [usize; 3],
    n: [usize; 3],
    vdims: [usize; 3],
    lengths: [usize; 3],
}

impl Space {
    fn new(n1: usize, n2: usize, n3: usize) -> Self {
        let m = [(n1 - 1) / 2, n2 - 1, n3 - 1];
        let cap = m[0] * m[1] * m[2];
        let vdims = [n1 + 1, n2 + 1, n3 + 1];
        Space {
            m,
            n: [n1, n2, n3],
            vdims,
            lengths: [vdims[0] + cap, vdims[1] + cap, vdims[2] + 1],
        }
    }

    fn matrix_size(&self) -> usize {
        self.m[0] * self.m[1] * self.m[2]
    }

    fn v(&self, p: usize, i: usize) -> EpsVector {
        EpsVector::basis(self.lengths[p], i)
    }

    /// W-coordinate of w^p indexed by the triple (j1, j2, j3), j_p ∈ [1, m_p].
    fn w12(&self, p: usize, j: [usize; 3]) -> usize {
        debug_assert!(p < 2);
        let zero_based = [j[0] - 1, j[1] - 1, j[2] - 1];
        self.vdims[p] + pack_index(&zero_based, &self.m)
    }

    fn w3(&self) -> usize {
        self.vdims[2]
    }
}

pub(super) fn built_family(n1: usize, n2: usize, n3: usize) -> Result<BuiltFamily> {
    let s = Space::new(n1, n2, n3);
    let unit_part = embedded_unit_part(s.vdims, s.lengths, s.matrix_size(), 2);
    let mut asm = SlotAssembly::new(s.vdims, s.lengths, unit_part);

    let eps = EpsPoly::eps();
    let neg_eps = EpsPoly::monomial(1, rat(-1));

    for j1 in 1..=s.m[0] {
        for j2 in 1..=s.m[1] {
            for j3 in 1..=s.m[2] {
                let j = [j1, j2, j3];

                // Diagonal carrier at (j1, j2, j3): all three factors perturbed.
                let mut f0 = s.v(0, j1);
                f0.add_term(s.w12(0, j), &eps);
                let mut f1 = s.v(1, j2);
                f1.add_term(s.w12(1, j), &eps);
                let mut f2 = s.v(2, j3);
                f2.add_term(s.w3(), &eps);
                asm.insert([j1, j2, j3], RankOneEpsTensor::new(vec![f0, f1, f2]));

                // Mirror at (m1 + j1, j2, j3): flipped sign on the second
                // factor kills the ε² terms of the carrier pair.
                let mut f0 = s.v(0, s.m[0] + j1);
                f0.add_term(s.w12(0, j), &eps);
                let mut f1 = s.v(1, j2);
                f1.add_term(s.w12(1, j), &neg_eps);
                let f2 = s.v(2, j3);
                asm.insert([s.m[0] + j1, j2, j3], RankOneEpsTensor::new(vec![f0, f1, f2]));
            }
        }
    }

    // Row absorbers at (n1, k2, 0): the aggregated first-factor perturbation
    // cancels the carrier ε²-terms of the form w ⊗ v ⊗ w.
    for k2 in 1..=s.m[1] {
        let mut f0 = s.v(0, s.n[0]);
        for j1 in 1..=s.m[0] {
            for j3 in 1..=s.m[2] {
                f0.add_term(s.w12(0, [j1, k2, j3]), &eps);
            }
        }
        let f1 = s.v(1, k2);
        let mut f2 = s.v(2, 0);
        f2.add_term(s.w3(), &neg_eps);
        asm.insert([s.n[0], k2, 0], RankOneEpsTensor::new(vec![f0, f1, f2]));
    }

    // Column absorbers at (k1, n2, 0): same for v ⊗ w ⊗ w.
    for k1 in 1..=s.m[0] {
        let f0 = s.v(0, k1);
        let mut f1 = s.v(1, s.n[1]);
        for j2 in 1..=s.m[1] {
            for j3 in 1..=s.m[2] {
                f1.add_term(s.w12(1, [k1, j2, j3]), &eps);
            }
        }
        let mut f2 = s.v(2, 0);
        f2.add_term(s.w3(), &neg_eps);
        asm.insert([k1, s.n[1], 0], RankOneEpsTensor::new(vec![f0, f1, f2]));
    }

    asm.complete()
}

/// Witness family of (n1+1)(n2+1)(n3+1) + 1 rank-one elements, slot order
/// lexicographic with the closing all-ones element last. Parameters must
/// already be canonical: n1 odd, all ≥ 2.
pub fn build_c1_family(n1: usize, n2: usize, n3: usize) -> Result<Vec<RankOneEpsTensor>> {
    let spec = super::Construction::C1 { n1, n2, n3 }.validated()?;
    let super::Construction::C1 { n1, n2, n3 } = spec else {
        unreachable!()
    };
    Ok(built_family(n1, n2, n3)?.elements)
}
