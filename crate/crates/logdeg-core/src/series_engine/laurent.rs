//! Truncated Laurent series with exact coefficients.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{GaussianQ, Scalar, Q};
use crate::error::{Error, Result};

/// The formal variable a series is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    Q,
    U,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Q => write!(f, "q"),
            Var::U => write!(f, "u"),
        }
    }
}

/// Σ_{k=min_exp}^{order} c_k x^k + O(x^{order+1}).
///
/// `order` is inclusive: every coefficient with exponent ≤ `order` is known. The
/// stored coefficient list starts at `min_exp` and is trimmed so that its first
/// entry is nonzero; the zero series has no coefficients and `min_exp = order + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<S: Scalar> {
    var: Var,
    min_exp: i64,
    coeffs: Vec<S>,
    order: i64,
}

pub type QSeries = LaurentSeries<Q>;
pub type GSeries = LaurentSeries<GaussianQ>;

impl<S: Scalar> LaurentSeries<S> {
    /// Builds a series from coefficients starting at `min_exp`; entries past
    /// `order` are dropped, missing entries up to `order` are zero.
    pub fn new(var: Var, min_exp: i64, coeffs: Vec<S>, order: i64) -> Self {
        let mut s = LaurentSeries {
            var,
            min_exp,
            coeffs,
            order,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let keep = (self.order - self.min_exp + 1).max(0) as usize;
        self.coeffs.truncate(keep);
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.min_exp = self.order + 1;
            }
            Some(k) => {
                self.coeffs.drain(..k);
                self.min_exp += k as i64;
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
            }
        }
    }

    pub fn zero(var: Var, order: i64) -> Self {
        Self::new(var, order + 1, vec![], order)
    }

    pub fn one(var: Var, order: i64) -> Self {
        Self::monomial(var, 0, S::one(), order)
    }

    pub fn monomial(var: Var, exp: i64, c: S, order: i64) -> Self {
        Self::new(var, exp, vec![c], order)
    }

    /// A polynomial (coefficients from x^0) known through `order`.
    pub fn from_poly(var: Var, coeffs: &[S], order: i64) -> Self {
        Self::new(var, 0, coeffs.to_vec(), order)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// First exponent of the stored window (the valuation for a nonzero series).
    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the leading nonzero term, if any is known.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.min_exp)
        }
    }

    /// Coefficient of x^e, or None if e lies beyond the truncation.
    pub fn get(&self, e: i64) -> Option<S> {
        if e > self.order {
            return None;
        }
        if e < self.min_exp {
            return Some(S::zero());
        }
        Some(
            self.coeffs
                .get((e - self.min_exp) as usize)
                .cloned()
                .unwrap_or_else(S::zero),
        )
    }

    /// Coefficient of x^e; panics past the truncation order.
    pub fn coeff(&self, e: i64) -> S {
        self.get(e)
            .unwrap_or_else(|| panic!("coefficient x^{e} lies beyond truncation order {}", self.order))
    }

    /// Dense coefficient list from `from` through the truncation order.
    pub fn coefficients_from(&self, from: i64) -> Vec<S> {
        (from..=self.order).map(|e| self.coeff(e)).collect()
    }

    /// Lowers the truncation order (never raises it).
    pub fn truncate(&self, order: i64) -> Self {
        Self::new(self.var, self.min_exp, self.coeffs.clone(), order.min(self.order))
    }

    fn check_var(&self, other: &Self) -> Result<()> {
        if self.var != other.var {
            return Err(Error::Invalid(format!(
                "series in different variables ({} vs {})",
                self.var, other.var
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let order = self.order.min(other.order);
        let lo = self.min_exp.min(other.min_exp).min(order + 1);
        let coeffs = (lo..=order)
            .map(|e| self.coeff(e) + other.coeff(e))
            .collect();
        Ok(Self::new(self.var, lo, coeffs, order))
    }

    pub fn neg(&self) -> Self {
        Self::new(
            self.var,
            self.min_exp,
            self.coeffs.iter().map(|c| -c.clone()).collect(),
            self.order,
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &S) -> Self {
        Self::new(
            self.var,
            self.min_exp,
            self.coeffs.iter().map(|c| c.clone() * k.clone()).collect(),
            self.order,
        )
    }

    /// Multiplication by x^k.
    pub fn shift(&self, k: i64) -> Self {
        Self::new(self.var, self.min_exp + k, self.coeffs.clone(), self.order + k)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let order = (self.min_exp + other.order).min(other.min_exp + self.order);
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.var, order));
        }
        let lo = self.min_exp + other.min_exp;
        let len = (order - lo + 1).max(0) as usize;
        let mut out = vec![S::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Ok(Self::new(self.var, lo, out, order))
    }

    /// Multiplicative inverse; the order drops from N to N − 2v for valuation v.
    pub fn inverse(&self) -> Result<Self> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::Computation("inverse of a series with no known nonzero term".into()))?;
        let order = self.order - 2 * v;
        let n = (order + v + 1).max(0) as usize;
        let a0 = self.coeffs[0].clone();
        let mut b: Vec<S> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                b.push(S::one() / a0.clone());
                continue;
            }
            let mut acc = S::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc = acc + self.coeffs[j].clone() * b[k - j].clone();
            }
            b.push(-acc / a0.clone());
        }
        Ok(Self::new(self.var, -v, b, order))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inverse()?)
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        if k == 0 {
            // x^0 = 1 carries the relative precision of the base
            let rel = self.order - self.min_exp;
            return Ok(Self::one(self.var, rel.max(0)));
        }
        let mut result = Self::one(self.var, i64::MAX / 4);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Substitution x ↦ −x.
    pub fn negate_variable(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if (self.min_exp + i as i64).rem_euclid(2) == 1 {
                    -c.clone()
                } else {
                    c.clone()
                }
            })
            .collect();
        Self::new(self.var, self.min_exp, coeffs, self.order)
    }

    pub fn with_var(&self, var: Var) -> Self {
        Self::new(var, self.min_exp, self.coeffs.clone(), self.order)
    }

    /// Coefficient strings in the stored window (from `min_exp`).
    pub fn coefficient_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl LaurentSeries<Q> {
    pub fn to_gaussian(&self) -> GSeries {
        LaurentSeries::new(
            self.var,
            self.min_exp,
            self.coeffs.iter().map(|c| GaussianQ::real(c.clone())).collect(),
            self.order,
        )
    }
}

impl<S: Scalar> fmt::Display for LaurentSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.min_exp + i as i64;
            let cs = c.to_string();
            let mono = match e {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{}", self.var, e),
            };
            let term = if mono.is_empty() {
                format!("({cs})")
            } else if cs == "1" {
                mono
            } else {
                format!("({cs}){mono}")
            };
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{term}")?;
            first = false;
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O({}^{})", self.var, self.order + 1)
    }
}

/// Portable JSON form: coefficients as exact strings from `min_exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRepr {
    pub variable: Var,
    pub min_exponent: i64,
    pub coefficients: Vec<String>,
    pub order: i64,
}

impl<S: Scalar> LaurentSeries<S> {
    pub fn to_repr(&self) -> SeriesRepr {
        SeriesRepr {
            variable: self.var,
            min_exponent: self.min_exp,
            coefficients: self.coefficient_strings(),
            order: self.order,
        }
    }

    pub fn from_repr(r: &SeriesRepr) -> Result<Self> {
        let coeffs = r
            .coefficients
            .iter()
            .map(|s| S::parse_scalar(s))
            .collect::<Result<Vec<S>>>()?;
        if r.order < r.min_exponent - 1 {
            return Err(Error::Invalid(format!(
                "series order {} below min exponent {}",
                r.order, r.min_exponent
            )));
        }
        Ok(Self::new(r.variable, r.min_exponent, coeffs, r.order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf};

    fn s(min: i64, c: &[i64], order: i64) -> QSeries {
        QSeries::new(Var::Q, min, c.iter().map(|&x| q(x)).collect(), order)
    }

    #[test]
    fn normalizes_leading_zeros() {
        let a = s(0, &[0, 0, 1, 2], 5);
        assert_eq!(a.valuation(), Some(2));
        assert_eq!(a.coeff(3), q(2));
        assert_eq!(a.coeff(5), q(0));
        assert!(a.get(6).is_none());
    }

    #[test]
    fn mul_precision() {
        let a = s(1, &[1, 1], 4); // q + q^2 + O(q^5)
        let b = s(0, &[1, -1], 3);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.order(), 4);
        assert_eq!(p.coeff(1), q(1));
        assert_eq!(p.coeff(2), q(0));
        assert_eq!(p.coeff(3), q(-1));
    }

    #[test]
    fn inverse_of_one_minus_q() {
        let a = s(0, &[1, -1], 6);
        let inv = a.inverse().unwrap();
        for e in 0..=6 {
            assert_eq!(inv.coeff(e), q(1));
        }
        let prod = a.mul(&inv).unwrap();
        assert_eq!(prod, QSeries::one(Var::Q, 6));
    }

    #[test]
    fn inverse_with_pole() {
        let a = s(1, &[1, 1], 6); // q(1+q)
        let inv = a.inverse().unwrap();
        assert_eq!(inv.valuation(), Some(-1));
        assert_eq!(inv.order(), 4);
        assert_eq!(inv.coeff(0), q(-1));
    }

    #[test]
    fn negative_power() {
        let a = s(0, &[1, 1], 8);
        let p = a.pow(-2).unwrap();
        // 1/(1+q)^2 = Σ (−1)^k (k+1) q^k
        for k in 0..=8 {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(p.coeff(k), q(sign * (k + 1)));
        }
    }

    #[test]
    fn display_and_repr() {
        let a = QSeries::new(Var::Q, -1, vec![q(1), q(0), qf(3, 2)], 2);
        assert_eq!(a.to_string(), "q^-1 + (3/2)q + O(q^3)");
        let r = a.to_repr();
        assert_eq!(QSeries::from_repr(&r).unwrap(), a);
    }

    #[test]
    fn variable_mismatch() {
        let a = s(0, &[1], 3);
        let b = a.with_var(Var::U);
        assert!(a.add(&b).is_err());
    }
}
