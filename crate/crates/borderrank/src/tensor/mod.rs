//! Sparse exact tensors of arbitrary order and their structural operations:
//! direct sum, Kronecker product, flattenings, exact matrix rank, and the
//! named families (unit tensors, matrix multiplication, graph tensors).
//!
//! Tensors are immutable values; every operation returns a new tensor. Index
//! pairing in Kronecker products and flattenings is fixed row-major, which is
//! the single canonical choice all equality-up-to-bijection checks rely on.

mod families;
mod matrix;

pub use families::{
    graph_tensor, kron_square_map, mamu, pack_perm_map, triangle, triangle_vs_mamu_maps,
    unit_tensor, w_state, Hypergraph,
};
pub use matrix::{matrix_rank, Matrix};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::scalar::{render_rational, EpsPoly, Rational};
use crate::{Error, Result};

/// Scalar ring a tensor can hold entries in.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    const RING_NAME: &'static str;
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn render(&self) -> String;
}

impl Scalar for Rational {
    const RING_NAME: &'static str = "Q";
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn render(&self) -> String {
        render_rational(self)
    }
}

impl Scalar for EpsPoly {
    const RING_NAME: &'static str = "Q[e]";
    fn zero() -> Self {
        EpsPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

/// Ordered list of factor dimensions, one per tensor factor. All ≥ 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Shape(Vec<usize>);

impl Shape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::ShapeMismatch("shape must have order >= 1".into()));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::ShapeMismatch(format!(
                "zero-dimensional factor in {dims:?}"
            )));
        }
        Ok(Shape(dims))
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self, mode: usize) -> usize {
        self.0[mode]
    }

    /// Dimensions with one factor removed.
    pub fn without(&self, mode: usize) -> Vec<usize> {
        let mut d = self.0.clone();
        d.remove(mode);
        d
    }

    fn contains(&self, index: &[usize]) -> bool {
        index.len() == self.0.len() && index.iter().zip(&self.0).all(|(&i, &d)| i < d)
    }
}

/// Row-major packing of a multi-index.
pub fn pack_index(index: &[usize], dims: &[usize]) -> usize {
    debug_assert_eq!(index.len(), dims.len());
    let mut x = 0;
    for (&i, &d) in index.iter().zip(dims) {
        debug_assert!(i < d);
        x = x * d + i;
    }
    x
}

/// Inverse of [`pack_index`].
pub fn unpack_index(mut x: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = x % d;
        x /= d;
    }
    out
}

/// Iterates all multi-indices of `dims` in row-major (lexicographic) order.
pub fn index_range(dims: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = dims.iter().product();
    (0..total).map(move |x| unpack_index(x, dims))
}

/// Order-k tensor stored as a map from multi-indices to nonzero scalars.
#[derive(Clone, PartialEq, Debug)]
pub struct SparseTensor<S: Scalar> {
    shape: Shape,
    entries: BTreeMap<Vec<usize>, S>,
}

impl<S: Scalar> SparseTensor<S> {
    pub fn new(shape: Shape) -> Self {
        SparseTensor {
            shape,
            entries: BTreeMap::new(),
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.order()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &S)> {
        self.entries.iter()
    }

    pub fn get(&self, index: &[usize]) -> S {
        self.entries.get(index).cloned().unwrap_or_else(S::zero)
    }

    /// Accumulates `value` at `index`, pruning the entry if it cancels.
    pub fn add_entry(&mut self, index: Vec<usize>, value: S) -> Result<()> {
        if !self.shape.contains(&index) {
            return Err(Error::IndexOutOfBounds {
                index,
                dims: self.shape.dims().to_vec(),
            });
        }
        if value.is_zero() {
            return Ok(());
        }
        match self.entries.entry(index) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add_ref(&value);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!(
                "{:?} vs {:?}",
                self.shape.dims(),
                other.shape.dims()
            )));
        }
        let mut out = self.clone();
        for (idx, v) in other.iter() {
            out.add_entry(idx.clone(), v.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale_all(|v| v.neg_ref()))
    }

    fn scale_all(&self, f: impl Fn(&S) -> S) -> Self {
        let mut out = SparseTensor::new(self.shape.clone());
        for (idx, v) in self.iter() {
            let w = f(v);
            if !w.is_zero() {
                out.entries.insert(idx.clone(), w);
            }
        }
        out
    }

    /// Block-diagonal combination: shape is the componentwise sum, entries of
    /// `other` are offset by this tensor's dimensions in every coordinate.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        let dims: Vec<usize> = self
            .shape
            .dims()
            .iter()
            .zip(other.shape.dims())
            .map(|(&a, &b)| a + b)
            .collect();
        let mut out = SparseTensor::new(Shape::new(dims)?);
        for (idx, v) in self.iter() {
            out.entries.insert(idx.clone(), v.clone());
        }
        for (idx, v) in other.iter() {
            let shifted: Vec<usize> = idx
                .iter()
                .zip(self.shape.dims())
                .map(|(&i, &off)| i + off)
                .collect();
            out.entries.insert(shifted, v.clone());
        }
        Ok(out)
    }

    /// Kronecker product: factor-wise grouping with row-major index pairing
    /// `(i, i') -> i * dim_other + i'`. Distinct index pairs map to distinct
    /// indices, so nnz multiplies exactly.
    pub fn kronecker(&self, other: &Self) -> Result<Self> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        let dims: Vec<usize> = self
            .shape
            .dims()
            .iter()
            .zip(other.shape.dims())
            .map(|(&a, &b)| a * b)
            .collect();
        let mut out = SparseTensor::new(Shape::new(dims)?);
        for (ia, va) in self.iter() {
            for (ib, vb) in other.iter() {
                let idx: Vec<usize> = ia
                    .iter()
                    .zip(ib)
                    .zip(other.shape.dims())
                    .map(|((&x, &y), &db)| x * db + y)
                    .collect();
                let v = va.mul_ref(vb);
                if !v.is_zero() {
                    out.entries.insert(idx, v);
                }
            }
        }
        Ok(out)
    }

    /// Entry-by-entry equality after relabeling this tensor's indices through
    /// per-factor bijections. `maps[j][i]` is the image of index `i` of factor
    /// `j`; each map must be a bijection onto the other tensor's factor range.
    pub fn equal_up_to_bijection(&self, other: &Self, maps: &[Vec<usize>]) -> Result<bool> {
        if self.order() != other.order() || maps.len() != self.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        for (j, map) in maps.iter().enumerate() {
            if self.shape.dim(j) != other.shape.dim(j) || map.len() != self.shape.dim(j) {
                return Err(Error::ShapeMismatch(format!(
                    "factor {j}: map length {} for dims {} vs {}",
                    map.len(),
                    self.shape.dim(j),
                    other.shape.dim(j)
                )));
            }
            let mut seen = vec![false; other.shape.dim(j)];
            for &img in map {
                if img >= other.shape.dim(j) || seen[img] {
                    return Err(Error::ShapeMismatch(format!(
                        "factor {j}: map is not a bijection"
                    )));
                }
                seen[img] = true;
            }
        }
        if self.nnz() != other.nnz() {
            return Ok(false);
        }
        for (idx, v) in self.iter() {
            let relabeled: Vec<usize> = idx.iter().enumerate().map(|(j, &i)| maps[j][i]).collect();
            if other.get(&relabeled) != *v {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Renders the dump format: a header line followed by one line per entry.
    pub fn dump(&self) -> String {
        let dims: Vec<String> = self.shape.dims().iter().map(|d| d.to_string()).collect();
        let mut out = format!(
            "order {} / dims {} / scalar-ring {}\n",
            self.order(),
            dims.join(" "),
            S::RING_NAME
        );
        for (idx, v) in self.iter() {
            let coords: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
            out.push_str(&format!("{} : {}\n", coords.join(" "), v.render()));
        }
        out
    }
}

impl SparseTensor<Rational> {
    /// Promotes rational entries to constant ε-polynomials.
    pub fn to_eps(&self) -> SparseTensor<EpsPoly> {
        let mut out = SparseTensor::new(self.shape.clone());
        for (idx, v) in self.iter() {
            out.entries.insert(idx.clone(), EpsPoly::constant(v.clone()));
        }
        out
    }
}

impl SparseTensor<EpsPoly> {
    /// Extracts the coefficient of ε^degree as a rational tensor.
    pub fn coefficient_tensor(&self, degree: usize) -> SparseTensor<Rational> {
        let mut out = SparseTensor::new(self.shape.clone());
        for (idx, p) in self.iter() {
            let c = p.coefficient(degree);
            if !Zero::is_zero(&c) {
                out.entries.insert(idx.clone(), c);
            }
        }
        out
    }

    /// Largest ε-degree appearing in any entry.
    pub fn max_degree(&self) -> usize {
        self.iter()
            .filter_map(|(_, p)| p.degree())
            .max()
            .unwrap_or(0)
    }
}

/// Flattening at `mode`: the matrix whose rows are indexed by the mode
/// coordinate and whose columns are the row-major combination of all other
/// coordinates.
pub fn flattening(t: &SparseTensor<Rational>, mode: usize) -> Result<Matrix> {
    if mode >= t.order() {
        return Err(Error::InvalidParameter(format!(
            "mode {mode} out of range for order {}",
            t.order()
        )));
    }
    let rest = t.shape().without(mode);
    let cols = rest.iter().product();
    let mut m = Matrix::new(t.shape().dim(mode), cols);
    for (idx, v) in t.iter() {
        let mut others = idx.clone();
        others.remove(mode);
        m.set(idx[mode], pack_index(&others, &rest), v.clone());
    }
    Ok(m)
}

/// The rows of the flattening at `mode` as dense vectors; their span is the
/// flattening image.
pub fn flattening_image(t: &SparseTensor<Rational>, mode: usize) -> Result<Vec<Vec<Rational>>> {
    Ok(flattening(t, mode)?.dense_rows())
}

/// A tensor is concise when every flattening has rank equal to that factor's
/// dimension.
pub fn is_concise(t: &SparseTensor<Rational>) -> Result<bool> {
    let modes: Vec<usize> = (0..t.order()).collect();
    let ranks = crate::par::map_slice(&modes, |&m| flattening(t, m).map(|f| f.rank()));
    for (m, r) in ranks.into_iter().enumerate() {
        if r? != t.shape().dim(m) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Maximum flattening rank over all modes; a lower bound for border rank.
pub fn border_rank_lower_bound(t: &SparseTensor<Rational>) -> Result<usize> {
    let modes: Vec<usize> = (0..t.order()).collect();
    let ranks = crate::par::map_slice(&modes, |&m| flattening(t, m).map(|f| f.rank()));
    let mut best = 0;
    for r in ranks {
        best = best.max(r?);
    }
    Ok(best)
}

/// Desk-scale check of the binomial expansion identity at Kronecker square:
/// `(t1 ⊕ t2)^⊠2` equals `(t1⊠t1) ⊕ (t1⊠t2) ⊕ (t2⊠t1) ⊕ (t2⊠t2)` under the
/// explicit block-index bijection.
pub fn binomial_expand_check(
    t1: &SparseTensor<Rational>,
    t2: &SparseTensor<Rational>,
    n: usize,
) -> Result<bool> {
    if n != 2 {
        return Err(Error::InvalidParameter(format!(
            "binomial expansion check only supports power 2, got {n}"
        )));
    }
    if t1.order() != t2.order() {
        return Err(Error::OrderMismatch {
            left: t1.order(),
            right: t2.order(),
        });
    }
    let sum = t1.direct_sum(t2)?;
    let square = sum.kronecker(&sum)?;
    let blocks = t1
        .kronecker(t1)?
        .direct_sum(&t1.kronecker(t2)?)?
        .direct_sum(&t2.kronecker(t1)?)?
        .direct_sum(&t2.kronecker(t2)?)?;

    // Per factor: (x, y) in the squared sum goes to the block holding the
    // (x < a, y < a) pattern, offset by the preceding blocks' dimensions.
    let mut maps = Vec::with_capacity(square.order());
    for j in 0..square.order() {
        let a = t1.shape().dim(j);
        let b = t2.shape().dim(j);
        let d = a + b;
        let mut map = vec![0usize; d * d];
        for x in 0..d {
            for y in 0..d {
                let target = match (x < a, y < a) {
                    (true, true) => x * a + y,
                    (true, false) => a * a + x * b + (y - a),
                    (false, true) => a * a + a * b + (x - a) * a + y,
                    (false, false) => a * a + 2 * a * b + (x - a) * b + (y - a),
                };
                map[x * d + y] = target;
            }
        }
        maps.push(map);
    }
    square.equal_up_to_bijection(&blocks, &maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn unit_tensor_examples() {
        let t = unit_tensor(3, 2);
        assert_eq!(t.shape().dims(), &[2, 2, 2]);
        assert_eq!(t.nnz(), 2);
        assert_eq!(t.get(&[0, 0, 0]), rat(1));
        assert_eq!(t.get(&[1, 1, 1]), rat(1));

        let m = unit_tensor(2, 3);
        assert_eq!(m.shape().dims(), &[3, 3]);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.get(&[i, j]), if i == j { rat(1) } else { rat(0) });
            }
        }

        let s = unit_tensor(4, 1);
        assert_eq!(s.nnz(), 1);
        assert_eq!(s.get(&[0, 0, 0, 0]), rat(1));
    }

    #[test]
    fn mamu_examples() {
        let t = mamu(2, 2, 2);
        assert_eq!(t.shape().dims(), &[4, 4, 4]);
        assert_eq!(t.nnz(), 8);

        let u = mamu(1, 1, 1);
        assert_eq!(u, unit_tensor(3, 1));

        let v = mamu(2, 1, 1);
        assert_eq!(v.shape().dims(), &[2, 1, 2]);
        assert_eq!(v.nnz(), 2);
    }

    #[test]
    fn direct_sum_of_units_is_unit() {
        let sum = unit_tensor(3, 2).direct_sum(&unit_tensor(3, 3)).unwrap();
        assert_eq!(sum, unit_tensor(3, 5));
    }

    #[test]
    fn direct_sum_with_empty_tensor_embeds() {
        let t = w_state();
        let zero = SparseTensor::<Rational>::new(Shape::new(vec![1, 1, 1]).unwrap());
        let sum = t.direct_sum(&zero).unwrap();
        assert_eq!(sum.shape().dims(), &[3, 3, 3]);
        assert_eq!(sum.nnz(), t.nnz());
        for (idx, v) in t.iter() {
            assert_eq!(sum.get(idx), *v);
        }
    }

    #[test]
    fn kronecker_with_rank_one_unit_is_identity() {
        let t = w_state();
        let one = unit_tensor(3, 1);
        assert_eq!(t.kronecker(&one).unwrap(), t);
    }

    #[test]
    fn kronecker_of_units() {
        let t = unit_tensor(2, 2).kronecker(&unit_tensor(2, 3)).unwrap();
        assert_eq!(t, unit_tensor(2, 6));
    }

    #[test]
    fn mamu_square_is_mamu_four() {
        let t = mamu(2, 2, 2);
        let sq = t.kronecker(&t).unwrap();
        let target = mamu(4, 4, 4);
        let maps: Vec<Vec<usize>> = (0..3).map(|_| kron_square_map(&[2, 2])).collect();
        assert!(sq.equal_up_to_bijection(&target, &maps).unwrap());
    }

    #[test]
    fn flattening_ranks() {
        for mode in 0..3 {
            assert_eq!(flattening(&unit_tensor(3, 4), mode).unwrap().rank(), 4);
        }
        assert_eq!(flattening(&mamu(2, 2, 2), 0).unwrap().rank(), 4);
        for mode in 0..3 {
            assert_eq!(flattening(&w_state(), mode).unwrap().rank(), 2);
        }
    }

    #[test]
    fn conciseness() {
        assert!(is_concise(&unit_tensor(3, 2)).unwrap());
        assert!(is_concise(&mamu(2, 2, 2)).unwrap());

        // Padding one factor destroys conciseness.
        let padded = unit_tensor(3, 2)
            .direct_sum(&SparseTensor::<Rational>::new(
                Shape::new(vec![1, 1, 1]).unwrap(),
            ))
            .unwrap();
        assert_eq!(padded.shape().dims(), &[3, 3, 3]);
        assert!(!is_concise(&padded).unwrap());
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(border_rank_lower_bound(&w_state()).unwrap(), 2);
        assert_eq!(border_rank_lower_bound(&unit_tensor(4, 7)).unwrap(), 7);
    }

    #[test]
    fn bijection_checks() {
        let t = w_state();
        let id: Vec<Vec<usize>> = vec![vec![0, 1]; 3];
        assert!(t.equal_up_to_bijection(&t, &id).unwrap());
        assert!(!unit_tensor(3, 2)
            .equal_up_to_bijection(&w_state(), &id)
            .unwrap());
    }

    #[test]
    fn binomial_expansion_trivial_pair() {
        let one = unit_tensor(3, 1);
        assert!(binomial_expand_check(&one, &one, 2).unwrap());
        assert!(binomial_expand_check(&one, &one, 3).is_err());
    }

    #[test]
    fn binomial_expansion_derived_pairs() {
        assert!(binomial_expand_check(&w_state(), &unit_tensor(3, 2), 2).unwrap());
        assert!(binomial_expand_check(&mamu(2, 1, 1), &mamu(1, 1, 2), 2).unwrap());
    }

    #[test]
    fn dump_format() {
        let dump = unit_tensor(3, 2).dump();
        assert_eq!(
            dump,
            "order 3 / dims 2 2 2 / scalar-ring Q\n0 0 0 : 1\n1 1 1 : 1\n"
        );
    }

    #[test]
    fn pack_unpack_roundtrip() {
        let dims = [3, 4, 2];
        for (x, idx) in index_range(&dims).enumerate() {
            assert_eq!(pack_index(&idx, &dims), x);
            assert_eq!(unpack_index(x, &dims), idx);
        }
    }
}
