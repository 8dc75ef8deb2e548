//! Exponent upper bounds for extended matrix-multiplication tensors.
//!
//! Floating point lives only here. Each bound compares an entropy-improved
//! estimate against the trivial product bound; the parameter grids reproduce
//! the density-figure data. Logarithms are base 2 throughout.

use std::fmt::Write as _;

use crate::{Error, Result};

/// Binary entropy −p·log₂p − (1−p)·log₂(1−p), with h(0) = h(1) = 0.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "entropy needs p in [0,1], got {p}"
        )));
    }
    Ok(entropy_unchecked(p))
}

fn entropy_unchecked(p: f64) -> f64 {
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * p.log2();
    }
    if p < 1.0 {
        h -= (1.0 - p) * (1.0 - p).log2();
    }
    h
}

/// log₂(r) − h(p): the entropy-improved bound on the exponent of the mixed
/// Kronecker power of two summands with joint border rank r.
pub fn entropy_bound(r: f64, p: f64) -> Result<f64> {
    if r < 1.0 {
        return Err(Error::InvalidParameter(format!("need r >= 1, got {r}")));
    }
    Ok(r.log2() - binary_entropy(p)?)
}

/// Square matrix-multiplication exponent bound from the classic subadditive
/// pair with parameters (n1, n2): minimizes
/// 3·(log₂((n1+1)(n2+1)+1) − h(p)) / (p·log₂((n1+1)(n2+1)) + (1−p)·log₂(n1·n2))
/// over p ∈ (0, 1) by a dense grid followed by ternary refinement.
pub fn schonhage_omega(n1: usize, n2: usize) -> Result<(f64, f64)> {
    if n1 < 2 || n2 < 2 {
        return Err(Error::InvalidParameter(format!(
            "need n1, n2 >= 2, got ({n1}, {n2})"
        )));
    }
    let r = ((n1 + 1) * (n2 + 1) + 1) as f64;
    let big = ((n1 + 1) * (n2 + 1)) as f64;
    let small = (n1 * n2) as f64;
    let f = move |p: f64| -> f64 {
        3.0 * (r.log2() - entropy_unchecked(p)) / (p * big.log2() + (1.0 - p) * small.log2())
    };

    let step = 1e-4;
    let mut best_p = step;
    let mut best_v = f(step);
    let mut i = 2usize;
    loop {
        let p = i as f64 * step;
        if p >= 1.0 {
            break;
        }
        let v = f(p);
        if v < best_v {
            best_v = v;
            best_p = p;
        }
        i += 1;
    }

    let mut lo = (best_p - step).max(step * 0.5);
    let mut hi = (best_p + step).min(1.0 - step * 0.5);
    while hi - lo > 1e-7 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let p_star = 0.5 * (lo + hi);
    Ok((p_star, f(p_star)))
}

/// One evaluated grid cell: named parameters plus the two bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundPoint {
    pub params: Vec<(&'static str, f64)>,
    pub omega_triv: f64,
    pub omega_sch: f64,
    pub delta: f64,
}

impl BoundPoint {
    fn new(params: Vec<(&'static str, f64)>, omega_triv: f64, omega_sch: f64) -> Self {
        BoundPoint {
            params,
            omega_triv,
            omega_sch,
            delta: omega_triv - omega_sch,
        }
    }
}

/// Bounds for the order-4 tensor with triangle weights (2, 2, n3) and a
/// dangling edge n4, at the canonical parameters a = n4 − 2 and
/// p = log(a)/(log n3 + log a).
pub fn ext_mamu_bounds(n3: usize, n4: usize) -> Result<BoundPoint> {
    if n3 < 2 || n4 < 4 {
        return Err(Error::InvalidParameter(format!(
            "ext_mamu needs n3 >= 2 and n4 >= 4, got ({n3}, {n4})"
        )));
    }
    let a = (n4 - 2) as f64;
    let p = a.log2() / ((n3 as f64).log2() + a.log2());
    let omega_sch = (((4 * n4 + 1) as f64).log2() - entropy_unchecked(p)) / p;
    let omega_triv = 2.0 + (n3 as f64).log2() + (n4 as f64).log2();
    Ok(BoundPoint::new(
        vec![
            ("n3", n3 as f64),
            ("n4", n4 as f64),
            ("a", a),
            ("p", p),
        ],
        omega_triv,
        omega_sch,
    ))
}

fn multi_emamu_witness_size(d: usize, n: usize) -> f64 {
    let nf = n as f64;
    nf.powi(d as i32) + 2.0 * nf.powi(d as i32 - 1) + nf * nf * (nf + 1.0).powi(d as i32 - 3) + 1.0
}

/// Bounds for the spider with d legs of weight n and an n^d matrix folded in
/// at mixing parameter p.
pub fn multi_emamu_bounds(d: usize, n: usize, p: f64) -> Result<BoundPoint> {
    if d < 3 || n < 2 {
        return Err(Error::InvalidParameter(format!(
            "multi_emamu needs d >= 3, n >= 2, got ({d}, {n})"
        )));
    }
    if !(0.0 < p && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "multi_emamu needs p in (0,1), got {p}"
        )));
    }
    let omega_sch = (multi_emamu_witness_size(d, n).log2() - entropy_unchecked(p)) / p;
    let omega_triv = d as f64 * (n as f64).log2() * (1.0 + (1.0 - p) / p);
    Ok(BoundPoint::new(
        vec![("d", d as f64), ("n", n as f64), ("p", p)],
        omega_triv,
        omega_sch,
    ))
}

/// Bounds at the self-similar parameter p = d/(d+1), where the folded matrix
/// weight equals n.
pub fn multi_emamu_p_of_d(d: usize, n: usize) -> Result<BoundPoint> {
    let p = d as f64 / (d as f64 + 1.0);
    multi_emamu_bounds(d, n, p)
}

/// Large-n comparison target for the self-similar parameter:
/// (d+1)·log₂(n) − log₂(1 + 1/d).
pub fn multi_emamu_asymptote(d: usize, n: usize) -> f64 {
    (d as f64 + 1.0) * (n as f64).log2() - (1.0 + 1.0 / d as f64).log2()
}

/// Bounds for the diagonal-absorbing construction at even n with the maximal
/// diagonal size n³/4 implied.
pub fn dome_bounds(n: usize, p: f64) -> Result<BoundPoint> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "dome needs even n >= 2, got {n}"
        )));
    }
    if !(0.0 < p && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "dome needs p in (0,1), got {p}"
        )));
    }
    let nf = n as f64;
    let omega_sch = ((nf + 1.0).powi(3) + 1.0).log2() - entropy_unchecked(p);
    let omega_triv =
        3.0 * p * (nf + 1.0).log2() + 3.0 * (1.0 - p) * nf.log2() - 2.0 * (1.0 - p);
    Ok(BoundPoint::new(
        vec![("n", nf), ("p", p)],
        omega_triv,
        omega_sch,
    ))
}

/// Inclusive range with step, enumerated as lo, lo+step, lo+2·step, ...
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RangeSpec {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl RangeSpec {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || hi < lo {
            return Err(Error::InvalidParameter(format!(
                "bad range {lo}..{hi}:{step}"
            )));
        }
        Ok(RangeSpec { lo, hi, step })
    }

    pub fn single(v: f64) -> Self {
        RangeSpec {
            lo: v,
            hi: v,
            step: 1.0,
        }
    }

    /// Parses `lo..hi[:step]`.
    pub fn parse(text: &str) -> Result<Self> {
        let (range, step) = match text.split_once(':') {
            Some((r, s)) => (
                r,
                s.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad step in {text:?}")))?,
            ),
            None => (text, 1.0),
        };
        let (lo, hi) = range
            .split_once("..")
            .ok_or_else(|| Error::Parse(format!("range {text:?} is not lo..hi[:step]")))?;
        let lo = lo
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad lower bound in {text:?}")))?;
        let hi = hi
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad upper bound in {text:?}")))?;
        RangeSpec::new(lo, hi, step)
    }

    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut i = 0usize;
        loop {
            let v = self.lo + i as f64 * self.step;
            if v > self.hi + self.step * 1e-9 {
                break;
            }
            out.push(v);
            i += 1;
        }
        out
    }

    pub fn len(&self) -> usize {
        self.values().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The four grid families behind the density figures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridFamily {
    ExtMamu,
    MultiEmamuFixedD,
    MultiEmamuPOfD,
    Dome,
}

impl GridFamily {
    pub fn name(&self) -> &'static str {
        match self {
            GridFamily::ExtMamu => "ext_mamu",
            GridFamily::MultiEmamuFixedD => "multi_emamu_fixed_d",
            GridFamily::MultiEmamuPOfD => "multi_emamu_p_of_d",
            GridFamily::Dome => "dome",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "ext_mamu" => Ok(GridFamily::ExtMamu),
            "multi_emamu_fixed_d" => Ok(GridFamily::MultiEmamuFixedD),
            "multi_emamu_p_of_d" => Ok(GridFamily::MultiEmamuPOfD),
            "dome" => Ok(GridFamily::Dome),
            other => Err(Error::InvalidParameter(format!(
                "unknown grid family {other:?}"
            ))),
        }
    }

    /// Number of ranges the family takes, in documented order.
    pub fn arity(&self) -> usize {
        match self {
            GridFamily::ExtMamu | GridFamily::MultiEmamuPOfD | GridFamily::Dome => 2,
            GridFamily::MultiEmamuFixedD => 3,
        }
    }
}

/// A grid request: family plus ranges in the family's documented order
/// (ext_mamu: n3, n4; multi_emamu_fixed_d: d, n, p; multi_emamu_p_of_d: n, d;
/// dome: n, p).
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub family: GridFamily,
    pub ranges: Vec<RangeSpec>,
}

impl GridSpec {
    pub fn new(family: GridFamily, ranges: Vec<RangeSpec>) -> Result<Self> {
        if ranges.len() != family.arity() {
            return Err(Error::InvalidParameter(format!(
                "{} takes {} ranges, got {}",
                family.name(),
                family.arity(),
                ranges.len()
            )));
        }
        if ranges.iter().any(RangeSpec::is_empty) {
            return Err(Error::InvalidParameter("empty range".into()));
        }
        Ok(GridSpec { family, ranges })
    }

    /// The published figure grids.
    pub fn figure_defaults(family: GridFamily) -> GridSpec {
        let r = |lo: f64, hi: f64, step: f64| RangeSpec { lo, hi, step };
        match family {
            GridFamily::ExtMamu => GridSpec {
                family,
                ranges: vec![r(2.0, 100.0, 1.0), r(4.0, 100.0, 1.0)],
            },
            GridFamily::MultiEmamuFixedD => GridSpec {
                family,
                ranges: vec![
                    RangeSpec::single(4.0),
                    r(4.0, 100.0, 1.0),
                    r(0.505, 0.995, 0.005),
                ],
            },
            GridFamily::MultiEmamuPOfD => GridSpec {
                family,
                ranges: vec![r(4.0, 100.0, 1.0), r(3.0, 15.0, 1.0)],
            },
            GridFamily::Dome => GridSpec {
                family,
                ranges: vec![r(2.0, 50.0, 2.0), r(0.005, 0.995, 0.005)],
            },
        }
    }

    /// Row-major cell list (last range varies fastest).
    fn cells(&self) -> Vec<Vec<f64>> {
        let mut cells: Vec<Vec<f64>> = vec![Vec::new()];
        for range in &self.ranges {
            let values = range.values();
            let mut next = Vec::with_capacity(cells.len() * values.len());
            for cell in &cells {
                for &v in &values {
                    let mut c = cell.clone();
                    c.push(v);
                    next.push(c);
                }
            }
            cells = next;
        }
        cells
    }
}

/// Evaluates every grid cell in row-major order. Cells are independent pure
/// evaluations; the parallel build fans them out and preserves order.
pub fn generate_grid(spec: &GridSpec) -> Result<Vec<BoundPoint>> {
    let family = spec.family;
    let cells = spec.cells();
    let points = crate::par::map_slice(&cells, |cell| match family {
        GridFamily::ExtMamu => ext_mamu_bounds(cell[0] as usize, cell[1] as usize),
        GridFamily::MultiEmamuFixedD => {
            multi_emamu_bounds(cell[0] as usize, cell[1] as usize, cell[2])
        }
        GridFamily::MultiEmamuPOfD => multi_emamu_p_of_d(cell[1] as usize, cell[0] as usize),
        GridFamily::Dome => dome_bounds(cell[0] as usize, cell[1]),
    });
    points.into_iter().collect()
}

/// 12 significant digits; integral values print as integers.
pub fn format_significant(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e12 {
        format!("{}", x as i64)
    } else {
        format!("{x:.11e}")
    }
}

use format_significant as fmt_value;

/// CSV with header `family,<params...>,omega_triv,omega_sch,delta`.
pub fn to_csv(family: GridFamily, points: &[BoundPoint]) -> String {
    let mut out = String::new();
    let names: Vec<&str> = points
        .first()
        .map(|p| p.params.iter().map(|(n, _)| *n).collect())
        .unwrap_or_default();
    let _ = write!(out, "family");
    for n in &names {
        let _ = write!(out, ",{n}");
    }
    let _ = writeln!(out, ",omega_triv,omega_sch,delta");
    for p in points {
        let _ = write!(out, "{}", family.name());
        for (_, v) in &p.params {
            let _ = write!(out, ",{}", fmt_value(*v));
        }
        let _ = writeln!(
            out,
            ",{},{},{}",
            fmt_value(p.omega_triv),
            fmt_value(p.omega_sch),
            fmt_value(p.delta)
        );
    }
    out
}

/// Plain PPM heatmap for a two-range grid: blue for delta < 0, orange for
/// delta > 0, shading from white toward the base color as |delta| grows.
pub fn to_ppm(spec: &GridSpec, points: &[BoundPoint]) -> Result<String> {
    let varying: Vec<usize> = spec
        .ranges
        .iter()
        .enumerate()
        .filter(|(_, r)| r.len() > 1)
        .map(|(i, _)| i)
        .collect();
    let (rows_idx, cols_idx) = match varying.len() {
        2 => (varying[0], varying[1]),
        _ => {
            return Err(Error::InvalidParameter(
                "heatmap needs exactly two varying ranges".into(),
            ))
        }
    };
    let height = spec.ranges[rows_idx].len();
    let width = spec.ranges[cols_idx].len();
    if width * height != points.len() {
        return Err(Error::InvalidParameter(format!(
            "{}x{} image needs {} points, got {}",
            width,
            height,
            width * height,
            points.len()
        )));
    }

    let max_neg = points
        .iter()
        .map(|p| (-p.delta).max(0.0))
        .fold(0.0, f64::max);
    let max_pos = points.iter().map(|p| p.delta.max(0.0)).fold(0.0, f64::max);

    let mut out = format!("P3\n{width} {height}\n255\n");
    let lerp = |t: f64, base: (u8, u8, u8)| -> (u8, u8, u8) {
        let c = |b: u8| (255.0 * (1.0 - t) + b as f64 * t).round() as u8;
        (c(base.0), c(base.1), c(base.2))
    };
    for row in points.chunks(width) {
        let mut line = String::new();
        for p in row {
            let (r, g, b) = if p.delta < 0.0 && max_neg > 0.0 {
                lerp(-p.delta / max_neg, (0, 0, 255))
            } else if p.delta > 0.0 && max_pos > 0.0 {
                lerp(p.delta / max_pos, (255, 165, 0))
            } else {
                (255, 255, 255)
            };
            if !line.is_empty() {
                line.push(' ');
            }
            let _ = write!(line, "{r} {g} {b}");
        }
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}
