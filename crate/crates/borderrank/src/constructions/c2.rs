//! Order-4 construction absorbing an a×a matrix into a (2, 2, a+2) spider.
//!
//! The witness has 4(a+2)+1 elements: one per V-grid slot plus the closing
//! all-ones product, and telescopes to ε³ times the matrix diagonal. All
//! correction vectors are explicit here; no solving is needed.

use super::{embedded_unit_part, BuiltFamily, SlotAssembly};
use crate::limits::{EpsVector, RankOneEpsTensor};
use crate::scalar::{rat, ratio, EpsPoly, Rational};
use crate::Result;

/// Factor-3 coordinate layout: slot 0 is the extra basis vector preceding the
/// matrix column range, slot 1 is the spectator, slots 1+i carry the diagonal.
fn leg3(i: usize) -> usize {
    i
}

struct Space {
    a: usize,
    lengths: [usize; 3],
}

impl Space {
    fn new(a: usize) -> Self {
        Space {
            a,
            lengths: [2 + a, 2 + a, a + 3],
        }
    }

    fn v(&self, p: usize, i: usize) -> EpsVector {
        EpsVector::basis(self.lengths[p], i)
    }

    fn w12(&self, p: usize, i: usize) -> usize {
        debug_assert!(p < 2 && (1..=self.a).contains(&i));
        2 + (i - 1)
    }

    fn w3(&self) -> usize {
        self.a + 2
    }

    /// v^p_slot ± ε·w^p_i for the first two factors.
    fn v_plus_eps_w(&self, p: usize, slot: usize, i: usize, sign: i64) -> EpsVector {
        let mut f = self.v(p, slot);
        f.add_term(self.w12(p, i), &EpsPoly::monomial(1, rat(sign)));
        f
    }

    /// v^p_slot + c·ε·Σ_j w^p_j.
    fn v_plus_eps_wsum(&self, p: usize, slot: usize, c: Rational) -> EpsVector {
        let mut f = self.v(p, slot);
        for j in 1..=self.a {
            f.add_term(self.w12(p, j), &EpsPoly::monomial(1, c.clone()));
        }
        f
    }
}

pub(super) fn built_family(a: usize) -> Result<BuiltFamily> {
    let s = Space::new(a);
    let vdims = [2, 2, a + 2];
    let unit_part = embedded_unit_part(vdims, s.lengths, a, 2);
    let mut asm = SlotAssembly::new(vdims, s.lengths, unit_part);

    let two_over_a = ratio(2, a as i64);
    let a_over_two = ratio(a as i64, 2);

    for i in 1..=a {
        // Diagonal carriers and their three sign-flipped partners.
        let mut f3 = s.v(2, leg3(1 + i));
        f3.add_term(s.w3(), &EpsPoly::eps());
        asm.insert(
            [0, 0, leg3(1 + i)],
            RankOneEpsTensor::new(vec![
                s.v_plus_eps_w(0, 0, i, 1),
                s.v_plus_eps_w(1, 0, i, 1),
                f3,
            ]),
        );
        asm.insert(
            [0, 1, leg3(1 + i)],
            RankOneEpsTensor::new(vec![
                s.v_plus_eps_w(0, 0, i, 1),
                s.v_plus_eps_w(1, 1, i, -1),
                s.v(2, leg3(1 + i)),
            ]),
        );
        asm.insert(
            [1, 0, leg3(1 + i)],
            RankOneEpsTensor::new(vec![
                s.v_plus_eps_w(0, 1, i, -1),
                s.v(1, 0),
                s.v(2, leg3(1 + i)),
            ]),
        );
        asm.insert(
            [1, 1, leg3(1 + i)],
            RankOneEpsTensor::new(vec![
                s.v_plus_eps_w(0, 1, i, -1),
                s.v(1, 1),
                s.v(2, leg3(1 + i)),
            ]),
        );
    }

    // Aggregated corrections on the two extra leg-3 slots.
    let mut f3 = s.v(2, leg3(0));
    f3.add_term(s.w3(), &EpsPoly::monomial(1, -&a_over_two));
    asm.insert(
        [0, 0, leg3(0)],
        RankOneEpsTensor::new(vec![
            s.v(0, 0),
            s.v_plus_eps_wsum(1, 0, two_over_a.clone()),
            f3,
        ]),
    );
    let mut f3 = s.v(2, leg3(1));
    f3.add_term(s.w3(), &EpsPoly::monomial(1, -&a_over_two));
    asm.insert(
        [0, 0, leg3(1)],
        RankOneEpsTensor::new(vec![
            s.v_plus_eps_wsum(0, 0, two_over_a.clone()),
            s.v(1, 0),
            f3,
        ]),
    );

    asm.insert(
        [0, 1, leg3(0)],
        RankOneEpsTensor::new(vec![
            s.v(0, 0),
            s.v_plus_eps_wsum(1, 1, -&two_over_a),
            s.v(2, leg3(0)),
        ]),
    );
    asm.insert(
        [1, 0, leg3(1)],
        RankOneEpsTensor::new(vec![
            s.v_plus_eps_wsum(0, 1, -&two_over_a),
            s.v(1, 0),
            s.v(2, leg3(1)),
        ]),
    );

    // SlotAssembly fills the remaining four plain slots; the degree-1 residue
    // is zero by construction, so no computed corrections appear.
    asm.complete()
}

/// Witness family: 4(a+2) slot elements in lexicographic slot order followed
/// by the closing all-ones element.
pub fn build_c2_family(a: usize) -> Result<Vec<RankOneEpsTensor>> {
    super::Construction::C2 { a }.validated()?;
    Ok(built_family(a)?.elements)
}
