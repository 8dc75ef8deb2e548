//! Named tensor families: unit tensors, matrix multiplication, the W state,
//! and graph tensors built from weighted hypergraphs.

use super::{pack_index, unpack_index, Shape, SparseTensor};
use crate::scalar::{rat, Rational};
use crate::{Error, Result};

/// Order-k diagonal tensor with r ones: the generalized identity.
pub fn unit_tensor(order: usize, r: usize) -> SparseTensor<Rational> {
    assert!(order >= 1 && r >= 1);
    let mut t = SparseTensor::new(Shape::new(vec![r; order]).unwrap());
    for i in 0..r {
        t.add_entry(vec![i; order], rat(1)).unwrap();
    }
    t
}

/// Matrix multiplication tensor of shape (m1·m2, m2·m3, m3·m1) with entries at
/// ((i1,i2),(i2,i3),(i3,i1)), pairs packed row-major.
pub fn mamu(m1: usize, m2: usize, m3: usize) -> SparseTensor<Rational> {
    assert!(m1 >= 1 && m2 >= 1 && m3 >= 1);
    let mut t = SparseTensor::new(Shape::new(vec![m1 * m2, m2 * m3, m3 * m1]).unwrap());
    for i1 in 0..m1 {
        for i2 in 0..m2 {
            for i3 in 0..m3 {
                t.add_entry(vec![i1 * m2 + i2, i2 * m3 + i3, i3 * m1 + i1], rat(1))
                    .unwrap();
            }
        }
    }
    t
}

/// e001 + e010 + e100 in (C²)³: rank 3, border rank 2.
pub fn w_state() -> SparseTensor<Rational> {
    let mut t = SparseTensor::new(Shape::new(vec![2, 2, 2]).unwrap());
    t.add_entry(vec![0, 0, 1], rat(1)).unwrap();
    t.add_entry(vec![0, 1, 0], rat(1)).unwrap();
    t.add_entry(vec![1, 0, 0], rat(1)).unwrap();
    t
}

/// Weighted hypergraph on vertices 1..=k. Edge order is significant: it fixes
/// the row-major packing of every vertex's local index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    vertex_count: usize,
    edges: Vec<(Vec<usize>, usize)>,
}

impl Hypergraph {
    pub fn new(vertex_count: usize, edges: Vec<(Vec<usize>, usize)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidParameter("hypergraph needs vertices".into()));
        }
        for (verts, weight) in &edges {
            if verts.is_empty() {
                return Err(Error::InvalidParameter("empty hyperedge".into()));
            }
            if verts.iter().any(|&v| v == 0 || v > vertex_count) {
                return Err(Error::InvalidParameter(format!(
                    "edge {verts:?} leaves vertex range 1..={vertex_count}"
                )));
            }
            let mut sorted = verts.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != verts.len() {
                return Err(Error::InvalidParameter(format!(
                    "repeated vertex in edge {verts:?}"
                )));
            }
            if *weight == 0 {
                return Err(Error::InvalidParameter("edge weight must be >= 1".into()));
            }
        }
        Ok(Hypergraph {
            vertex_count,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(Vec<usize>, usize)] {
        &self.edges
    }
}

/// The edge tensor: a diagonal of length `weight` across the vertices of the
/// edge, tensored with basis vectors on the remaining factors.
fn edge_tensor(k: usize, verts: &[usize], weight: usize) -> SparseTensor<Rational> {
    let dims: Vec<usize> = (1..=k)
        .map(|v| if verts.contains(&v) { weight } else { 1 })
        .collect();
    let mut t = SparseTensor::new(Shape::new(dims).unwrap());
    for j in 0..weight {
        let idx: Vec<usize> = (1..=k)
            .map(|v| if verts.contains(&v) { j } else { 0 })
            .collect();
        t.add_entry(idx, rat(1)).unwrap();
    }
    t
}

/// Kronecker product of the edge tensors in listed order. Factor j has
/// dimension equal to the product of the weights of the edges containing j.
pub fn graph_tensor(g: &Hypergraph) -> Result<SparseTensor<Rational>> {
    let k = g.vertex_count();
    let mut acc = unit_tensor(k, 1);
    for (verts, weight) in g.edges() {
        acc = acc.kronecker(&edge_tensor(k, verts, *weight))?;
    }
    Ok(acc)
}

/// Triangle hypergraph whose graph tensor matches `mamu(a, b, c)` through
/// [`triangle_vs_mamu_maps`].
pub fn triangle(a: usize, b: usize, c: usize) -> Hypergraph {
    Hypergraph::new(3, vec![(vec![1, 2], b), (vec![2, 3], c), (vec![3, 1], a)]).unwrap()
}

/// Per-factor bijections sending `graph_tensor(triangle(a, b, c))` onto
/// `mamu(a, b, c)`. Only the first factor needs its pair packing swapped;
/// the edge listing already aligns the other two.
pub fn triangle_vs_mamu_maps(a: usize, b: usize, c: usize) -> Vec<Vec<usize>> {
    vec![
        pack_perm_map(&[b, a], &[1, 0]),
        identity_map(b * c),
        identity_map(c * a),
    ]
}

fn identity_map(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Bijection on row-major packed indices induced by permuting the component
/// order: component `i` of the input moves to position `perm.index_of(i)`...
/// concretely, output components are `(c[perm[0]], c[perm[1]], ...)` packed
/// with dims `(dims[perm[0]], dims[perm[1]], ...)`.
pub fn pack_perm_map(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    let total: usize = dims.iter().product();
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    (0..total)
        .map(|x| {
            let c = unpack_index(x, dims);
            let reordered: Vec<usize> = perm.iter().map(|&p| c[p]).collect();
            pack_index(&reordered, &new_dims)
        })
        .collect()
}

/// Bijection regrouping the Kronecker square of a factor with per-edge dims
/// `dims`: the pair `(x, y)` packed as `x·D + y` (D = ∏ dims) maps to the
/// row-major packing of the componentwise pairs `a_i·dims[i] + b_i` with dims
/// `dims[i]²`.
pub fn kron_square_map(dims: &[usize]) -> Vec<usize> {
    let d: usize = dims.iter().product();
    let sq_dims: Vec<usize> = dims.iter().map(|&n| n * n).collect();
    let mut map = vec![0; d * d];
    for x in 0..d {
        let a = unpack_index(x, dims);
        for y in 0..d {
            let b = unpack_index(y, dims);
            let combined: Vec<usize> = a
                .iter()
                .zip(&b)
                .zip(dims)
                .map(|((&ai, &bi), &n)| ai * n + bi)
                .collect();
            map[x * d + y] = pack_index(&combined, &sq_dims);
        }
    }
    map
}
