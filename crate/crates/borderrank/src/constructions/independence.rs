//! The combinatorial independence systems behind the diagonal-absorbing
//! construction: four disjoint index sets J, K1, K2, K3 of equal size with
//! coordinate-fixing bijections J → K_i, plus a brute-force existence oracle
//! for small grids.

use std::collections::{BTreeMap, BTreeSet};

use crate::{Error, Result};

/// Guard on the brute-force search space.
const SEARCH_CELL_LIMIT: usize = 16;

/// The (J, K1, K2, K3, s1, s2, s3) data over a grid [1..n1]×[1..n2]×[1..n3].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceSystem {
    grid: [usize; 3],
    j_set: Vec<[usize; 3]>,
    k_sets: [Vec<[usize; 3]>; 3],
    maps: [BTreeMap<[usize; 3], [usize; 3]>; 3],
}

impl IndependenceSystem {
    pub fn new(
        grid: [usize; 3],
        j_set: Vec<[usize; 3]>,
        k_sets: [Vec<[usize; 3]>; 3],
        maps: [BTreeMap<[usize; 3], [usize; 3]>; 3],
    ) -> Result<Self> {
        let sys = IndependenceSystem {
            grid,
            j_set,
            k_sets,
            maps,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn grid(&self) -> [usize; 3] {
        self.grid
    }

    pub fn size(&self) -> usize {
        self.j_set.len()
    }

    pub fn j_set(&self) -> &[[usize; 3]] {
        &self.j_set
    }

    pub fn k_set(&self, i: usize) -> &[[usize; 3]] {
        &self.k_sets[i]
    }

    pub fn map(&self, i: usize) -> &BTreeMap<[usize; 3], [usize; 3]> {
        &self.maps[i]
    }

    /// All invariants: sets within the grid, pairwise disjoint, equal sizes,
    /// and each s_i a bijection J → K_i fixing the i-th coordinate.
    pub fn validate(&self) -> Result<()> {
        let in_grid = |t: &[usize; 3]| {
            t.iter()
                .zip(&self.grid)
                .all(|(&c, &n)| c >= 1 && c <= n)
        };
        let mut seen: BTreeSet<[usize; 3]> = BTreeSet::new();
        for set in std::iter::once(&self.j_set).chain(self.k_sets.iter()) {
            for t in set {
                if !in_grid(t) {
                    return Err(Error::InvalidParameter(format!(
                        "triple {t:?} outside grid {:?}",
                        self.grid
                    )));
                }
                if !seen.insert(*t) {
                    return Err(Error::InvalidParameter(format!(
                        "triple {t:?} appears in two sets"
                    )));
                }
            }
        }
        for i in 0..3 {
            if self.k_sets[i].len() != self.j_set.len() {
                return Err(Error::InvalidParameter(format!(
                    "|K{}| = {} but |J| = {}",
                    i + 1,
                    self.k_sets[i].len(),
                    self.j_set.len()
                )));
            }
            let map = &self.maps[i];
            if map.len() != self.j_set.len() {
                return Err(Error::InvalidParameter(format!(
                    "s{} defined on {} triples, |J| = {}",
                    i + 1,
                    map.len(),
                    self.j_set.len()
                )));
            }
            let mut images: BTreeSet<[usize; 3]> = BTreeSet::new();
            let k_set: BTreeSet<[usize; 3]> = self.k_sets[i].iter().copied().collect();
            for (j, k) in map {
                if !self.j_set.contains(j) {
                    return Err(Error::InvalidParameter(format!(
                        "s{} defined at {j:?} which is not in J",
                        i + 1
                    )));
                }
                if j[i] != k[i] {
                    return Err(Error::InvalidParameter(format!(
                        "s{} moves coordinate {}: {j:?} -> {k:?}",
                        i + 1,
                        i + 1
                    )));
                }
                if !k_set.contains(k) || !images.insert(*k) {
                    return Err(Error::InvalidParameter(format!(
                        "s{} image {k:?} invalid or repeated",
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The explicit maximum-size system on an even grid: the eight octants of the
/// grid, with J the two "diagonal" octants, K_i the octant pairs sharing the
/// i-th half-range, and half-length shifts as the bijections. Size n1·n2·n3/4.
pub fn independence_system_even(n1: usize, n2: usize, n3: usize) -> Result<IndependenceSystem> {
    let grid = [n1, n2, n3];
    if grid.iter().any(|&n| n == 0 || n % 2 == 1) {
        return Err(Error::InvalidParameter(format!(
            "even grid required, got {grid:?}"
        )));
    }
    let m = [n1 / 2, n2 / 2, n3 / 2];
    // Octant cell: lo = [1, m], hi = [m+1, n].
    let block = |hi1: bool, hi2: bool, hi3: bool| -> Vec<[usize; 3]> {
        let range = |m_i: usize, hi: bool| {
            if hi {
                (m_i + 1)..=(2 * m_i)
            } else {
                1..=m_i
            }
        };
        let mut out = Vec::with_capacity(m[0] * m[1] * m[2]);
        for a in range(m[0], hi1) {
            for b in range(m[1], hi2) {
                for c in range(m[2], hi3) {
                    out.push([a, b, c]);
                }
            }
        }
        out
    };

    let j_lo = block(false, false, false);
    let j_hi = block(true, true, true);
    let mut j_set = j_lo.clone();
    j_set.extend(&j_hi);
    j_set.sort_unstable();

    // Shift the two free coordinates into the opposite half-range.
    let shift = |t: &[usize; 3], fixed: usize, up: bool| -> [usize; 3] {
        let mut out = *t;
        for (p, slot) in out.iter_mut().enumerate() {
            if p != fixed {
                *slot = if up { *slot + m[p] } else { *slot - m[p] };
            }
        }
        out
    };

    let mut k_sets: [Vec<[usize; 3]>; 3] = Default::default();
    let mut maps: [BTreeMap<[usize; 3], [usize; 3]>; 3] = Default::default();
    for i in 0..3 {
        let mut set = Vec::with_capacity(j_set.len());
        let mut map = BTreeMap::new();
        for j in &j_lo {
            let k = shift(j, i, true);
            set.push(k);
            map.insert(*j, k);
        }
        for j in &j_hi {
            let k = shift(j, i, false);
            set.push(k);
            map.insert(*j, k);
        }
        set.sort_unstable();
        k_sets[i] = set;
        maps[i] = map;
    }

    IndependenceSystem::new(grid, j_set, k_sets, maps)
}

/// Backtracking existence oracle: do disjoint J, K1, K2, K3 of size
/// `target` with coordinate-fixing bijections exist in the grid?
pub fn brute_force_m(n1: usize, n2: usize, n3: usize, target: usize) -> Result<bool> {
    let cells_count = n1 * n2 * n3;
    if cells_count > SEARCH_CELL_LIMIT {
        return Err(Error::SearchGuard {
            cells: cells_count,
            limit: SEARCH_CELL_LIMIT,
        });
    }
    if target == 0 {
        return Ok(true);
    }
    if 4 * target > cells_count {
        return Ok(false);
    }

    let mut cells = Vec::with_capacity(cells_count);
    for a in 1..=n1 {
        for b in 1..=n2 {
            for c in 1..=n3 {
                cells.push([a, b, c]);
            }
        }
    }

    let mut chosen: Vec<[usize; 3]> = Vec::with_capacity(target);
    choose_j(&cells, 0, target, &mut chosen)
}

fn choose_j(
    cells: &[[usize; 3]],
    start: usize,
    remaining: usize,
    chosen: &mut Vec<[usize; 3]>,
) -> Result<bool> {
    if remaining == 0 {
        let mut used: BTreeSet<[usize; 3]> = chosen.iter().copied().collect();
        return Ok(assign_images(cells, chosen, 0, 0, &mut used));
    }
    if cells.len() - start < remaining {
        return Ok(false);
    }
    for pick in start..cells.len() {
        chosen.push(cells[pick]);
        if choose_j(cells, pick + 1, remaining - 1, chosen)? {
            chosen.pop();
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

/// Assigns s_i images one map at a time, one J-element at a time.
fn assign_images(
    cells: &[[usize; 3]],
    j_set: &[[usize; 3]],
    map_idx: usize,
    elem_idx: usize,
    used: &mut BTreeSet<[usize; 3]>,
) -> bool {
    if map_idx == 3 {
        return true;
    }
    if elem_idx == j_set.len() {
        return assign_images(cells, j_set, map_idx + 1, 0, used);
    }
    let j = j_set[elem_idx];
    for cell in cells {
        if cell[map_idx] != j[map_idx] || used.contains(cell) {
            continue;
        }
        used.insert(*cell);
        if assign_images(cells, j_set, map_idx, elem_idx + 1, used) {
            used.remove(cell);
            return true;
        }
        used.remove(cell);
    }
    false
}
