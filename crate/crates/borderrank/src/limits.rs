//! Limits of spans of ε-vector families in the Grassmannian.
//!
//! A border-rank upper bound witness is a family of rank-one tensors with
//! ε-polynomial entries. This module computes the limit as ε → 0 of their
//! span — by exact valuation-pivoted elimination, never by sampling ε — and
//! checks that a target subspace (a flattening image) is contained in the
//! limit. Containment certifies the upper bound; exactness of the bound, when
//! claimed, comes separately from conciseness.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{EpsPoly, Rational};
use crate::tensor::{flattening_image, Matrix, SparseTensor};
use crate::{Error, Result};

/// Sparse vector with ε-polynomial entries.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsVector {
    len: usize,
    entries: BTreeMap<usize, EpsPoly>,
}

impl EpsVector {
    pub fn new(len: usize) -> Self {
        EpsVector {
            len,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries<I: IntoIterator<Item = (usize, EpsPoly)>>(len: usize, iter: I) -> Self {
        let mut v = EpsVector::new(len);
        for (c, p) in iter {
            v.add_term(c, &p);
        }
        v
    }

    /// Basis vector e_coord.
    pub fn basis(len: usize, coord: usize) -> Self {
        EpsVector::from_entries(len, [(coord, EpsPoly::one())])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, coord: usize) -> EpsPoly {
        self.entries.get(&coord).cloned().unwrap_or_else(EpsPoly::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &EpsPoly)> {
        self.entries.iter().map(|(&c, p)| (c, p))
    }

    pub fn add_term(&mut self, coord: usize, p: &EpsPoly) {
        assert!(coord < self.len, "coordinate {coord} out of range {}", self.len);
        if p.is_zero() {
            return;
        }
        let entry = self.entries.entry(coord).or_insert_with(EpsPoly::zero);
        let sum = &*entry + p;
        if sum.is_zero() {
            self.entries.remove(&coord);
        } else {
            *entry = sum;
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return EpsVector::new(self.len);
        }
        EpsVector {
            len: self.len,
            entries: self.entries.iter().map(|(&k, p)| (k, p.scale(c))).collect(),
        }
    }

    pub fn scale_poly(&self, q: &EpsPoly) -> Self {
        if q.is_zero() {
            return EpsVector::new(self.len);
        }
        EpsVector {
            len: self.len,
            entries: self.entries.iter().map(|(&k, p)| (k, p * q)).collect(),
        }
    }

    /// Minimal valuation over the entries; `None` for the zero vector.
    pub fn valuation(&self) -> Option<usize> {
        self.entries.values().filter_map(EpsPoly::valuation).min()
    }

    pub fn max_degree(&self) -> usize {
        self.entries
            .values()
            .filter_map(EpsPoly::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn shift_down(&self, d: usize) -> Result<Self> {
        let mut out = EpsVector::new(self.len);
        for (&c, p) in &self.entries {
            out.entries.insert(c, p.shift_down(d)?);
        }
        Ok(out)
    }

    /// Coefficient of ε^degree as a dense rational vector.
    pub fn coefficient_vec(&self, degree: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.len];
        for (&c, p) in &self.entries {
            v[c] = p.coefficient(degree);
        }
        v
    }

    pub fn eval(&self, x: &Rational) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.len];
        for (&c, p) in &self.entries {
            v[c] = p.eval(x);
        }
        v
    }
}

/// Linear combination over Q: Σ coeffs[i] · vecs[i].
pub fn lin_comb(vecs: &[EpsVector], coeffs: &[Rational]) -> EpsVector {
    assert_eq!(vecs.len(), coeffs.len());
    let len = vecs.first().map_or(0, EpsVector::len);
    let mut out = EpsVector::new(len);
    for (v, c) in vecs.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (coord, p) in v.iter() {
            out.add_term(coord, &p.scale(c));
        }
    }
    out
}

/// Rank-one tensor whose factor vectors have ε-polynomial entries.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOneEpsTensor {
    factors: Vec<EpsVector>,
}

impl RankOneEpsTensor {
    pub fn new(factors: Vec<EpsVector>) -> Self {
        RankOneEpsTensor { factors }
    }

    pub fn factors(&self) -> &[EpsVector] {
        &self.factors
    }

    /// Entry at a multi-index: the product of factor entries.
    pub fn entry(&self, index: &[usize]) -> EpsPoly {
        let mut p = EpsPoly::one();
        for (f, &i) in self.factors.iter().zip(index) {
            p = &p * &f.get(i);
            if p.is_zero() {
                break;
            }
        }
        p
    }

    /// The tensor evaluated at ε = 0: factor-wise constant parts.
    pub fn at_zero(&self) -> RankOneEpsTensor {
        RankOneEpsTensor::new(
            self.factors
                .iter()
                .map(|f| {
                    EpsVector::from_entries(
                        f.len(),
                        f.iter()
                            .map(|(c, p)| (c, EpsPoly::constant(p.coefficient(0)))),
                    )
                })
                .collect(),
        )
    }

    /// Expands into a sparse tensor over Q[ε].
    pub fn expand_to_tensor(&self, dims: &[usize]) -> Result<SparseTensor<EpsPoly>> {
        check_factor_dims(self, dims)?;
        let shape = crate::tensor::Shape::new(dims.to_vec())?;
        let mut t = SparseTensor::new(shape);
        let mut stack: Vec<(Vec<usize>, EpsPoly)> = vec![(Vec::new(), EpsPoly::one())];
        for f in &self.factors {
            let mut next = Vec::new();
            for (idx, p) in &stack {
                for (c, q) in f.iter() {
                    let prod = p * q;
                    if !prod.is_zero() {
                        let mut idx2 = idx.clone();
                        idx2.push(c);
                        next.push((idx2, prod));
                    }
                }
            }
            stack = next;
        }
        for (idx, p) in stack {
            t.add_entry(idx, p)?;
        }
        Ok(t)
    }
}

fn check_factor_dims(z: &RankOneEpsTensor, dims: &[usize]) -> Result<()> {
    if z.factors.len() != dims.len() {
        return Err(Error::ShapeMismatch(format!(
            "rank-one element has {} factors, ambient has {}",
            z.factors.len(),
            dims.len()
        )));
    }
    for (f, &d) in z.factors.iter().zip(dims) {
        if f.len() != d {
            return Err(Error::ShapeMismatch(format!(
                "factor length {} vs ambient dimension {d}",
                f.len()
            )));
        }
    }
    Ok(())
}

/// Row-major flattened outer product of the factors into the ambient space.
pub fn expand_rank_one(z: &RankOneEpsTensor, dims: &[usize]) -> Result<EpsVector> {
    check_factor_dims(z, dims)?;
    let total: usize = dims.iter().product();
    let mut stack: Vec<(usize, EpsPoly)> = vec![(0, EpsPoly::one())];
    for (f, &d) in z.factors.iter().zip(dims) {
        let mut next = Vec::with_capacity(stack.len() * f.entries.len().max(1));
        for (packed, p) in &stack {
            for (c, q) in f.iter() {
                let prod = p * q;
                if !prod.is_zero() {
                    next.push((packed * d + c, prod));
                }
            }
        }
        stack = next;
    }
    Ok(EpsVector::from_entries(total, stack))
}

/// A family of ε-vectors in a common ambient space.
#[derive(Clone, Debug)]
pub struct SpanFamily {
    ambient_dim: usize,
    vectors: Vec<EpsVector>,
}

impl SpanFamily {
    pub fn new(ambient_dim: usize, vectors: Vec<EpsVector>) -> Result<Self> {
        for v in &vectors {
            if v.len() != ambient_dim {
                return Err(Error::ShapeMismatch(format!(
                    "vector length {} in ambient dimension {ambient_dim}",
                    v.len()
                )));
            }
        }
        Ok(SpanFamily {
            ambient_dim,
            vectors,
        })
    }

    pub fn size(&self) -> usize {
        self.vectors.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vectors(&self) -> &[EpsVector] {
        &self.vectors
    }
}

/// Rank of the family over the rational-function field Q(ε), by fraction-free
/// elimination with polynomial pivots. Rows are kept primitive: each update
/// divides out the rational content and the common power of ε, neither of
/// which changes rank over the field.
pub fn generic_rank(family: &SpanFamily) -> usize {
    let mut rows: Vec<BTreeMap<usize, EpsPoly>> = family
        .vectors
        .iter()
        .filter(|v| !v.is_zero())
        .map(|v| {
            let mut row: BTreeMap<usize, EpsPoly> =
                v.iter().map(|(c, p)| (c, p.clone())).collect();
            strip_row(&mut row);
            row
        })
        .collect();

    let mut rank = 0;
    loop {
        // Pivot of minimal polynomial degree, then lowest column, then first row.
        let mut pivot: Option<(usize, usize, usize)> = None; // (degree, col, row)
        for (i, row) in rows.iter().enumerate() {
            for (&c, p) in row {
                let d = p.degree().expect("stored entries are nonzero");
                if pivot.map_or(true, |(pd, pc, _)| (d, c) < (pd, pc)) {
                    pivot = Some((d, c, i));
                }
            }
        }
        let Some((_, col, at)) = pivot else {
            return rank;
        };
        rank += 1;
        let pivot_row = rows.remove(at);
        let p = pivot_row[&col].clone();
        for row in rows.iter_mut() {
            let Some(q) = row.remove(&col) else { continue };
            let mut updated: BTreeMap<usize, EpsPoly> = BTreeMap::new();
            for (&k, a) in row.iter() {
                updated.insert(k, &p * a);
            }
            for (&k, b) in &pivot_row {
                if k == col {
                    continue;
                }
                let sub = &q * b;
                match updated.entry(k) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        let neg = -&sub;
                        if !neg.is_zero() {
                            e.insert(neg);
                        }
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let diff = &*e.get() - &sub;
                        if diff.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = diff;
                        }
                    }
                }
            }
            *row = updated;
            strip_row(row);
        }
        rows.retain(|r| !r.is_empty());
    }
}

/// Divides a row by its rational content and by the common power of ε.
fn strip_row(row: &mut BTreeMap<usize, EpsPoly>) {
    if row.is_empty() {
        return;
    }
    let val = row.values().filter_map(EpsPoly::valuation).min().unwrap();
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for p in row.values() {
        for (_, c) in p.terms() {
            num_gcd = num_gcd.gcd(&c.numer().abs());
            den_lcm = den_lcm.lcm(c.denom());
        }
    }
    if num_gcd.is_zero() {
        num_gcd = BigInt::one();
    }
    let scale = Rational::new(den_lcm, num_gcd);
    let needs_scale = !scale.is_one();
    if val == 0 && !needs_scale {
        return;
    }
    let rescaled: BTreeMap<usize, EpsPoly> = row
        .iter()
        .map(|(&k, p)| {
            let mut q = p.clone();
            if val > 0 {
                q = q.shift_down(val).expect("valuation bound");
            }
            if needs_scale {
                q = q.scale(&scale);
            }
            (k, q)
        })
        .collect();
    *row = rescaled;
}

/// Advisory fast pre-check: rank of the family evaluated at one deterministic
/// pseudorandom rational derived from `seed`. A full-rank answer here is a
/// strong hint, but only [`generic_rank`] is authoritative.
pub fn generic_rank_estimate(family: &SpanFamily, seed: u64) -> usize {
    let h = splitmix64(seed);
    let num = 1 + (h % 883) as i64;
    let den = 997 + (splitmix64(h) % 883) as i64;
    let x = crate::scalar::ratio(num, den);
    let rows: Vec<Vec<Rational>> = family.vectors.iter().map(|v| v.eval(&x)).collect();
    Matrix::from_dense(rows).rank()
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Reduced-row-echelon accumulator over Q with optional combination tracking.
struct Echelon {
    // (pivot column, row normalized to pivot 1, combination in terms of inserts)
    rows: Vec<(usize, Vec<Rational>, Vec<Rational>)>,
    track: usize,
}

impl Echelon {
    fn new(track: usize) -> Self {
        Echelon {
            rows: Vec::new(),
            track,
        }
    }

    /// Reduces `v` (and its combination vector) against the stored rows.
    fn reduce(&self, v: &mut [Rational], combo: Option<&mut Vec<Rational>>) {
        let mut combo = combo;
        for (pc, row, rcombo) in &self.rows {
            let coeff = v[*pc].clone();
            if coeff.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &coeff * r;
                }
            }
            if let Some(c) = combo.as_deref_mut() {
                for (x, r) in c.iter_mut().zip(rcombo) {
                    if !r.is_zero() {
                        *x -= &coeff * r;
                    }
                }
            }
        }
    }

    /// Inserts vector number `tag`; returns `Err(combination)` when the vector
    /// is dependent, with the combination expressing 0 over all inserted
    /// vectors.
    fn insert(&mut self, mut v: Vec<Rational>, tag: usize) -> std::result::Result<(), Vec<Rational>> {
        let mut combo = vec![Rational::zero(); self.track];
        if self.track > 0 {
            combo[tag] = Rational::one();
        }
        self.reduce(&mut v, if self.track > 0 { Some(&mut combo) } else { None });
        let Some(pc) = v.iter().position(|x| !x.is_zero()) else {
            return Err(combo);
        };
        let inv = v[pc].recip();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for x in combo.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rows.push((pc, v, combo));
        Ok(())
    }

    fn contains(&self, v: &[Rational]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w, None);
        w.iter().all(Rational::is_zero)
    }
}

/// Finds a Q-linear dependency among dense vectors, or `None` when they are
/// independent. The returned combination has its lowest-index nonzero entry at
/// the vector the insertion order reached last... (deterministic either way).
fn find_dependency(vectors: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let mut ech = Echelon::new(vectors.len());
    for (i, v) in vectors.iter().enumerate() {
        if let Err(combo) = ech.insert(v.clone(), i) {
            return Some(combo);
        }
    }
    None
}

/// Basis of the limit as ε → 0 of the span of the family, computed by
/// valuation-pivoted elimination.
///
/// Requires the family to be linearly independent over Q(ε). Each vector is
/// normalized to valuation 0; while the ε = 0 leading vectors are dependent,
/// the dependent combination (which has valuation ≥ 1) replaces the
/// lowest-index vector appearing in it, is renormalized, and the loop
/// repeats. The leading vectors at termination span the limit.
pub fn limit_span(family: &SpanFamily) -> Result<Vec<Vec<Rational>>> {
    let r = family.size();
    if r == 0 {
        return Ok(Vec::new());
    }
    let rank = generic_rank(family);
    if rank < r {
        return Err(Error::DependentFamily { rank, size: r });
    }

    let max_degree = family
        .vectors
        .iter()
        .map(EpsVector::max_degree)
        .max()
        .unwrap_or(0);
    let guard = r * (1 + max_degree);

    let mut work: Vec<EpsVector> = Vec::with_capacity(r);
    for v in &family.vectors {
        let val = v
            .valuation()
            .ok_or(Error::DependentFamily { rank, size: r })?;
        work.push(v.shift_down(val)?);
    }
    let mut leading: Vec<Vec<Rational>> = work.iter().map(|v| v.coefficient_vec(0)).collect();

    let mut replacements = 0usize;
    while let Some(combo) = find_dependency(&leading) {
        replacements += 1;
        if replacements > guard {
            return Err(Error::IterationGuard { limit: guard });
        }
        let target = combo
            .iter()
            .position(|c| !c.is_zero())
            .expect("dependency has a nonzero coefficient");
        let replacement = lin_comb(&work, &combo);
        let val = replacement
            .valuation()
            .ok_or(Error::DependentFamily { rank, size: r })?;
        debug_assert!(val >= 1, "leading parts cancel, so valuation is positive");
        work[target] = replacement.shift_down(val)?;
        leading[target] = work[target].coefficient_vec(0);
    }
    Ok(leading)
}

/// Exact membership of `v` in the span of `basis`.
pub fn membership(v: &[Rational], basis: &[Vec<Rational>]) -> bool {
    let mut ech = Echelon::new(0);
    for b in basis {
        let _ = ech.insert(b.clone(), 0);
    }
    ech.contains(v)
}

/// Outcome of checking a span-limit witness against a flattening image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub family_size: usize,
    pub generic_rank_ok: bool,
    pub contained: bool,
    pub implied_border_rank_upper: usize,
}

/// Checks that every vector of the flattening image of `target` at `mode`
/// lies in the limit span of the rank-one family.
pub fn verify_span_limit_witness(
    target: &SparseTensor<Rational>,
    family: &[RankOneEpsTensor],
    mode: usize,
) -> Result<WitnessReport> {
    let ambient = target.shape().without(mode);
    let expanded: Vec<EpsVector> = family
        .iter()
        .map(|z| expand_rank_one(z, &ambient))
        .collect::<Result<_>>()?;
    let ambient_dim = ambient.iter().product();
    let span = SpanFamily::new(ambient_dim, expanded)?;

    let rank = generic_rank(&span);
    if rank < span.size() {
        return Err(Error::DependentFamily {
            rank,
            size: span.size(),
        });
    }
    let basis = limit_span(&span)?;

    let mut ech = Echelon::new(0);
    for b in &basis {
        let _ = ech.insert(b.clone(), 0);
    }
    let rows = flattening_image(target, mode)?;
    let checks = crate::par::map_slice(&rows, |row| ech.contains(row));
    let contained = checks.into_iter().all(|ok| ok);

    Ok(WitnessReport {
        family_size: family.len(),
        generic_rank_ok: true,
        contained,
        implied_border_rank_upper: family.len(),
    })
}

/// Renders a witness family in the textual exchange format: a header line
/// `ambient-shape d1 ... / mode m / size r`, then one element per line with
/// `;`-separated factors, each factor `coord:poly,coord:poly,...`.
pub fn write_witness(ambient: &[usize], mode: usize, family: &[RankOneEpsTensor]) -> String {
    let dims: Vec<String> = ambient.iter().map(|d| d.to_string()).collect();
    let mut out = format!(
        "ambient-shape {} / mode {} / size {}\n",
        dims.join(" "),
        mode,
        family.len()
    );
    for z in family {
        let factors: Vec<String> = z
            .factors()
            .iter()
            .map(|f| {
                let parts: Vec<String> =
                    f.iter().map(|(c, p)| format!("{c}:{p}")).collect();
                parts.join(",")
            })
            .collect();
        let _ = writeln!(out, "{}", factors.join(";"));
    }
    out
}

/// Parses the witness exchange format; exact inverse of [`write_witness`].
pub fn parse_witness(text: &str) -> Result<(Vec<usize>, usize, Vec<RankOneEpsTensor>)> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty witness".into()))?;
    let fields: Vec<&str> = header.split(" / ").collect();
    if fields.len() != 3 {
        return Err(Error::Parse(format!("bad witness header {header:?}")));
    }
    let dims_part = fields[0]
        .strip_prefix("ambient-shape ")
        .ok_or_else(|| Error::Parse("missing ambient-shape".into()))?;
    let ambient: Vec<usize> = dims_part
        .split_whitespace()
        .map(|d| d.parse().map_err(|_| Error::Parse(format!("bad dim {d:?}"))))
        .collect::<Result<_>>()?;
    let mode: usize = fields[1]
        .strip_prefix("mode ")
        .and_then(|m| m.parse().ok())
        .ok_or_else(|| Error::Parse("bad mode field".into()))?;
    let size: usize = fields[2]
        .strip_prefix("size ")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse("bad size field".into()))?;

    let mut family = Vec::with_capacity(size);
    for line in lines {
        let mut factors = Vec::with_capacity(ambient.len());
        let parts: Vec<&str> = line.split(';').collect();
        if parts.len() != ambient.len() {
            return Err(Error::Parse(format!(
                "element has {} factors, ambient has {}",
                parts.len(),
                ambient.len()
            )));
        }
        for (part, &d) in parts.iter().zip(&ambient) {
            let mut f = EpsVector::new(d);
            if !part.is_empty() {
                for item in part.split(',') {
                    let (coord, poly) = item
                        .split_once(':')
                        .ok_or_else(|| Error::Parse(format!("bad factor entry {item:?}")))?;
                    let c: usize = coord
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad coordinate {coord:?}")))?;
                    if c >= d {
                        return Err(Error::Parse(format!("coordinate {c} out of range {d}")));
                    }
                    f.add_term(c, &poly.parse()?);
                }
            }
            factors.push(f);
        }
        family.push(RankOneEpsTensor::new(factors));
    }
    if family.len() != size {
        return Err(Error::Parse(format!(
            "witness declares size {size} but has {} elements",
            family.len()
        )));
    }
    Ok((ambient, mode, family))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::tensor::w_state;

    fn e(len: usize, coord: usize) -> EpsVector {
        EpsVector::basis(len, coord)
    }

    fn e0_plus_eps_e1() -> EpsVector {
        EpsVector::from_entries(2, [(0, EpsPoly::one()), (1, EpsPoly::eps())])
    }

    fn w_family() -> Vec<RankOneEpsTensor> {
        vec![
            RankOneEpsTensor::new(vec![e(2, 0), e(2, 0)]),
            RankOneEpsTensor::new(vec![e0_plus_eps_e1(), e0_plus_eps_e1()]),
        ]
    }

    #[test]
    fn expand_examples() {
        let z = RankOneEpsTensor::new(vec![e(2, 0), e(2, 0)]);
        let v = expand_rank_one(&z, &[2, 2]).unwrap();
        assert_eq!(v.get(0), EpsPoly::one());
        assert_eq!(v.iter().count(), 1);

        let z = RankOneEpsTensor::new(vec![e0_plus_eps_e1(), e0_plus_eps_e1()]);
        let v = expand_rank_one(&z, &[2, 2]).unwrap();
        assert_eq!(v.get(0), EpsPoly::one());
        assert_eq!(v.get(1), EpsPoly::eps());
        assert_eq!(v.get(2), EpsPoly::eps());
        assert_eq!(v.get(3), EpsPoly::monomial(2, rat(1)));

        let z = RankOneEpsTensor::new(vec![EpsVector::new(2), e(2, 0)]);
        assert!(expand_rank_one(&z, &[2, 2]).unwrap().is_zero());
    }

    #[test]
    fn generic_rank_examples() {
        let f = SpanFamily::new(2, vec![e(2, 0), e0_plus_eps_e1()]).unwrap();
        assert_eq!(generic_rank(&f), 2);
        assert_eq!(generic_rank_estimate(&f, 0), 2);

        let scaled = EpsVector::from_entries(
            2,
            [(0, &EpsPoly::one() + &EpsPoly::eps())],
        );
        let g = SpanFamily::new(2, vec![e(2, 0), scaled]).unwrap();
        assert_eq!(generic_rank(&g), 1);
    }

    #[test]
    fn limit_span_w_state_example() {
        let ambient = [2usize, 2];
        let vectors: Vec<EpsVector> = w_family()
            .iter()
            .map(|z| expand_rank_one(z, &ambient).unwrap())
            .collect();
        let f = SpanFamily::new(4, vectors).unwrap();
        let basis = limit_span(&f).unwrap();
        assert_eq!(basis.len(), 2);
        // e00 and e01 + e10 are in the limit.
        let e00 = vec![rat(1), rat(0), rat(0), rat(0)];
        let cross = vec![rat(0), rat(1), rat(1), rat(0)];
        assert!(membership(&e00, &basis));
        assert!(membership(&cross, &basis));
        // e11 is not.
        let e11 = vec![rat(0), rat(0), rat(0), rat(1)];
        assert!(!membership(&e11, &basis));
    }

    #[test]
    fn limit_span_line_pair() {
        let f = SpanFamily::new(2, vec![e(2, 0), e0_plus_eps_e1()]).unwrap();
        let basis = limit_span(&f).unwrap();
        assert_eq!(basis.len(), 2);
        assert!(membership(&[rat(1), rat(0)], &basis));
        assert!(membership(&[rat(0), rat(1)], &basis));
    }

    #[test]
    fn limit_span_constant_family_is_span() {
        let v1 = EpsVector::from_entries(3, [(0, EpsPoly::one()), (2, EpsPoly::constant(rat(2)))]);
        let v2 = e(3, 1);
        let f = SpanFamily::new(3, vec![v1.clone(), v2]).unwrap();
        let basis = limit_span(&f).unwrap();
        assert!(membership(&v1.coefficient_vec(0), &basis));
        assert!(membership(&[rat(0), rat(1), rat(0)], &basis));
        assert!(!membership(&[rat(1), rat(0), rat(0)], &basis));
    }

    #[test]
    fn limit_span_rejects_dependent_family() {
        let f = SpanFamily::new(2, vec![e(2, 0), e(2, 0)]).unwrap();
        assert!(matches!(
            limit_span(&f),
            Err(Error::DependentFamily { rank: 1, size: 2 })
        ));
    }

    #[test]
    fn membership_examples() {
        let basis = vec![
            vec![rat(1), rat(0), rat(0)],
            vec![rat(0), rat(1), rat(0)],
        ];
        assert!(membership(&[rat(1), rat(0), rat(0)], &basis));
        assert!(!membership(&[rat(0), rat(0), rat(1)], &basis));
        assert!(membership(&[rat(0), rat(0), rat(0)], &[]));
    }

    #[test]
    fn w_state_witness_verifies() {
        let report = verify_span_limit_witness(&w_state(), &w_family(), 2).unwrap();
        assert_eq!(
            report,
            WitnessReport {
                family_size: 2,
                generic_rank_ok: true,
                contained: true,
                implied_border_rank_upper: 2,
            }
        );
    }

    #[test]
    fn undersized_family_not_contained() {
        let family = vec![RankOneEpsTensor::new(vec![e(2, 0), e(2, 0)])];
        let report = verify_span_limit_witness(&w_state(), &family, 2).unwrap();
        assert!(!report.contained);
        assert_eq!(report.family_size, 1);
    }

    #[test]
    fn witness_roundtrip_is_bit_exact() {
        let family = w_family();
        let text = write_witness(&[2, 2], 2, &family);
        let (ambient, mode, parsed) = parse_witness(&text).unwrap();
        assert_eq!(ambient, vec![2, 2]);
        assert_eq!(mode, 2);
        assert_eq!(parsed, family);
        assert_eq!(write_witness(&ambient, mode, &parsed), text);
    }
}
