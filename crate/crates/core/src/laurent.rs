//! Exact Laurent-polynomial arithmetic in one variable `q` with integer
//! coefficients. This is the coefficient ring for all deformed actions.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// A Laurent polynomial `sum_e c_e q^e` with `c_e : i64`, `e : i64`.
///
/// Zero coefficients are never stored, so structural equality is exact
/// ring equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentScalar {
    terms: BTreeMap<i64, i64>,
}

impl LaurentScalar {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// The single term `coeff * q^exp`.
    pub fn monomial(exp: i64, coeff: i64) -> Self {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    /// `q^exp`.
    pub fn q_power(exp: i64) -> Self {
        Self::monomial(exp, 1)
    }

    /// The constant polynomial `c`.
    pub fn constant(c: i64) -> Self {
        Self::monomial(0, c)
    }

    /// True iff this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff this is the constant polynomial 1.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0) == Some(&1)
    }

    /// The coefficient of `q^exp`.
    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    /// Largest exponent with a nonzero coefficient, if any.
    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Smallest exponent with a nonzero coefficient, if any.
    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Terms as `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn to_pairs(&self) -> Vec<(i64, i64)> {
        self.terms.iter().map(|(&e, &c)| (e, c)).collect()
    }

    /// Build from `(exponent, coefficient)` pairs; repeated exponents add.
    pub fn from_pairs<I: IntoIterator<Item = (i64, i64)>>(pairs: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in pairs {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(exp).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&exp);
        }
    }

    /// Multiply by `coeff * q^exp` in place.
    pub fn shift_scale(&self, exp: i64, coeff: i64) -> Self {
        if coeff == 0 {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&e, &c)| (e + exp, c * coeff))
                .collect(),
        }
    }

    /// The quantum integer `[n] = (q^n - q^-n)/(q - q^-1)`.
    ///
    /// `[0] = 0`, `[n] = q^{n-1} + q^{n-3} + ... + q^{1-n}` for `n > 0`, and
    /// `[-n] = -[n]`.
    pub fn quantum_integer(n: i64) -> Self {
        let sign = if n < 0 { -1 } else { 1 };
        let n_abs = n.abs();
        let mut out = Self::zero();
        let mut e = 1 - n_abs;
        while e < n_abs {
            out.add_term(e, sign);
            e += 2;
        }
        out
    }

    /// The quantum factorial `[m]! = [1][2]...[m]` (with `[0]! = 1`).
    pub fn quantum_factorial(m: u32) -> Self {
        let mut out = Self::one();
        for k in 1..=i64::from(m) {
            out = &out * &Self::quantum_integer(k);
        }
        out
    }

    /// Exact division: returns `self / divisor` iff the division leaves no
    /// remainder over the integers, otherwise `Error::InexactDivision`.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        if divisor.is_zero() {
            return Err(Error::InexactDivision);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        // Any exact quotient is bounded below by the difference of the
        // minimal exponents; descending past it means a remainder is left.
        let low =
            self.min_exp().expect("nonzero dividend") - divisor.min_exp().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot = Self::zero();
        let (&d_exp, &d_coeff) = divisor.terms.iter().next_back().expect("nonzero divisor");
        while let Some((&r_exp, &r_coeff)) = rem.terms.iter().next_back() {
            if r_coeff % d_coeff != 0 {
                return Err(Error::InexactDivision);
            }
            let t_exp = r_exp - d_exp;
            if t_exp < low {
                return Err(Error::InexactDivision);
            }
            let t_coeff = r_coeff / d_coeff;
            quot.add_term(t_exp, t_coeff);
            rem -= &divisor.shift_scale(t_exp, t_coeff);
            if let Some(new_max) = rem.max_exp() {
                if new_max >= r_exp {
                    return Err(Error::InexactDivision);
                }
            }
        }
        Ok(quot)
    }

    /// Evaluate at `q = 1` (the classical specialization).
    pub fn eval_at_one(&self) -> i64 {
        self.terms.values().sum()
    }

    /// True iff the polynomial is the constant `c`.
    pub fn is_constant(&self, c: i64) -> bool {
        if c == 0 {
            self.is_zero()
        } else {
            self.terms.len() == 1 && self.terms.get(&0) == Some(&c)
        }
    }
}

impl Add for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&LaurentScalar> for LaurentScalar {
    fn add_assign(&mut self, rhs: &LaurentScalar) {
        for (&e, &c) in &rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl Sub for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl SubAssign<&LaurentScalar> for LaurentScalar {
    fn sub_assign(&mut self, rhs: &LaurentScalar) {
        for (&e, &c) in &rhs.terms {
            self.add_term(e, -c);
        }
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        LaurentScalar {
            terms: self.terms.iter().map(|(&e, &c)| (e, -c)).collect(),
        }
    }
}

impl Mul for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = LaurentScalar::zero();
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in self.terms.iter().rev() {
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            match e {
                0 => write!(f, "{a}")?,
                1 => {
                    if a == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "{a}*q")?;
                    }
                }
                _ => {
                    if a == 1 {
                        write!(f, "q^{e}")?;
                    } else {
                        write!(f, "{a}*q^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
