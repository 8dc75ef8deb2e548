//! Exact scalars: arbitrary-precision rationals and polynomials in the
//! degeneration parameter ε.
//!
//! Rationals are [`num_rational::BigRational`]: denominator positive, always
//! reduced, zero stored as 0/1. Polynomials keep a sparse map from degree to
//! coefficient with no zero coefficients stored; nothing is ever truncated
//! implicitly. All values are immutable after construction.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational n/d.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `num/den`, omitting the denominator when it is 1.
pub fn render_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `num` or `num/den`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

/// Univariate polynomial in ε with rational coefficients.
///
/// The zero polynomial has an empty coefficient map.
#[derive(Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct EpsPoly {
    coeffs: BTreeMap<usize, Rational>,
}

impl EpsPoly {
    pub fn zero() -> Self {
        EpsPoly::default()
    }

    pub fn one() -> Self {
        EpsPoly::constant(rat(1))
    }

    /// The monomial ε.
    pub fn eps() -> Self {
        EpsPoly::monomial(1, rat(1))
    }

    pub fn constant(c: Rational) -> Self {
        EpsPoly::monomial(0, c)
    }

    /// c·ε^d.
    pub fn monomial(degree: usize, c: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(degree, c);
        }
        EpsPoly { coeffs }
    }

    pub fn from_coeffs<I: IntoIterator<Item = (usize, Rational)>>(iter: I) -> Self {
        let mut p = EpsPoly::zero();
        for (d, c) in iter {
            p.add_term(d, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.keys().all(|&d| d == 0)
    }

    /// Highest degree with nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    /// Lowest degree with nonzero coefficient (order of vanishing at ε = 0);
    /// `None` encodes +∞ for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.keys().next().copied()
    }

    /// Coefficient of ε^d, zero when absent.
    pub fn coefficient(&self, degree: usize) -> Rational {
        self.coeffs.get(&degree).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(&d, c)| (d, c))
    }

    pub fn add_term(&mut self, degree: usize, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(degree).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&degree);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return EpsPoly::zero();
        }
        EpsPoly {
            coeffs: self.coeffs.iter().map(|(&d, q)| (d, q * c)).collect(),
        }
    }

    /// Multiplication by ε^d.
    pub fn shift_up(&self, d: usize) -> Self {
        EpsPoly {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k + d, c.clone())).collect(),
        }
    }

    /// Exact division by ε^d. Errors when the valuation is smaller than `d`,
    /// which signals a construction bug (a nonzero low-order term).
    pub fn shift_down(&self, d: usize) -> Result<Self> {
        if self.is_zero() {
            return Ok(EpsPoly::zero());
        }
        let val = self.valuation().unwrap();
        if val < d {
            return Err(Error::ShiftBelowValuation {
                valuation: val,
                requested: d,
            });
        }
        Ok(EpsPoly {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k - d, c.clone())).collect(),
        })
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        // Horner over the sparse support.
        let mut acc = Rational::zero();
        let mut last_deg = 0usize;
        for (&d, c) in self.coeffs.iter().rev() {
            if !acc.is_zero() {
                for _ in 0..(last_deg - d) {
                    acc *= x;
                }
            }
            acc += c;
            last_deg = d;
        }
        for _ in 0..last_deg {
            acc *= x;
        }
        acc
    }

    /// Largest absolute numerator/denominator, used only for diagnostics.
    pub fn coeff_magnitude(&self) -> BigInt {
        let mut m = BigInt::zero();
        for c in self.coeffs.values() {
            m = m.max(c.numer().abs()).max(c.denom().abs());
        }
        m
    }
}

impl Add for &EpsPoly {
    type Output = EpsPoly;
    fn add(self, rhs: &EpsPoly) -> EpsPoly {
        let mut out = self.clone();
        for (&d, c) in &rhs.coeffs {
            out.add_term(d, c);
        }
        out
    }
}

impl Sub for &EpsPoly {
    type Output = EpsPoly;
    fn sub(self, rhs: &EpsPoly) -> EpsPoly {
        let mut out = self.clone();
        for (&d, c) in &rhs.coeffs {
            out.add_term(d, &(-c));
        }
        out
    }
}

impl Mul for &EpsPoly {
    type Output = EpsPoly;
    fn mul(self, rhs: &EpsPoly) -> EpsPoly {
        let mut out = EpsPoly::zero();
        for (&da, ca) in &self.coeffs {
            for (&db, cb) in &rhs.coeffs {
                out.add_term(da + db, &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &EpsPoly {
    type Output = EpsPoly;
    fn neg(self) -> EpsPoly {
        EpsPoly {
            coeffs: self.coeffs.iter().map(|(&d, c)| (d, -c)).collect(),
        }
    }
}

impl From<Rational> for EpsPoly {
    fn from(c: Rational) -> Self {
        EpsPoly::constant(c)
    }
}

/// Canonical textual form: terms by ascending degree joined with ` + `,
/// each `c`, `c*e` or `c*e^d` with the rational rendered as `num/den`.
/// The zero polynomial renders as `0`.
impl fmt::Display for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&d, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{}", render_rational(c))?,
                1 => write!(f, "{}*e", render_rational(c))?,
                _ => write!(f, "{}*e^{}", render_rational(c), d)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for EpsPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(EpsPoly::zero());
        }
        let mut p = EpsPoly::zero();
        for term in s.split(" + ") {
            let (coeff, degree) = if let Some((c, d)) = term.split_once("*e^") {
                let deg: usize = d
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in {term:?}")))?;
                (c, deg)
            } else if let Some(c) = term.strip_suffix("*e") {
                (c, 1)
            } else {
                (term, 0)
            };
            let c = parse_rational(coeff)?;
            if c.is_zero() {
                return Err(Error::Parse(format!("zero coefficient in {term:?}")));
            }
            if !p.coefficient(degree).is_zero() {
                return Err(Error::Parse(format!("repeated degree {degree} in {s:?}")));
            }
            p.add_term(degree, &c);
        }
        Ok(p)
    }
}
