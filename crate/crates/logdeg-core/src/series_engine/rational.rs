//! Polynomials and rational functions in q over Q, Laurent expansion, and Padé
//! reconstruction from truncated series.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::laurent::{QSeries, Var};
use crate::arith::{fmt_q, parse_q, Q};
use crate::error::{Error, Result};
use crate::linalg::nullspace_q;

/// Dense polynomial, coefficient of q^k at index k, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Q>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![] }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// c·q^k
    pub fn monomial(k: usize, c: Q) -> Self {
        let mut v = vec![Q::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; −1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    /// Exponent of the lowest nonzero term.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Q::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Euclidean division: self = quot·d + rem with deg rem < deg d.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(Error::Computation("polynomial division by zero".into()));
        }
        let mut rem = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let lead = d.leading();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Q::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Q::one() / self.leading()))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// The polynomial as a series known through `order`.
    pub fn to_series(&self, order: i64) -> QSeries {
        QSeries::from_poly(Var::Q, &self.coeffs, order)
    }

    fn fmt_in(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", fmt_q(c))?,
                1 => write!(f, "({})q", fmt_q(c))?,
                _ => write!(f, "({})q^{k}", fmt_q(c))?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_in(f)
    }
}

/// numerator / denominator, reduced, with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Invalid("rational function with zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(RationalFunction {
                num,
                den: Polynomial::constant(Q::one()),
            });
        }
        let g = num.gcd(&den);
        let (n, _) = num.divrem(&g)?;
        let (d, _) = den.divrem(&g)?;
        let lc = d.leading();
        Ok(RationalFunction {
            num: n.scale(&(Q::one() / &lc)),
            den: d.monic(),
        })
    }

    pub fn from_coeffs(num: &[Q], den: &[Q]) -> Result<Self> {
        Self::new(Polynomial::new(num.to_vec()), Polynomial::new(den.to_vec()))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    /// Laurent expansion around q = 0 known through `to_order`; only terms with
    /// exponent ≥ `from_order` are kept (lower ones are dropped from the window).
    pub fn expand(&self, from_order: i64, to_order: i64) -> QSeries {
        let vd = self.den.valuation().unwrap_or(0) as i64;
        let vn = self.num.valuation().unwrap_or(0) as i64;
        // inverse of the denominator loses 2·vd of absolute precision
        let work = (to_order + 2 * vd - vn).max(to_order) + vd + 1;
        let num = self.num.to_series(work);
        let den = self.den.to_series(work);
        let full = num
            .div(&den)
            .expect("denominator is a nonzero polynomial")
            .truncate(to_order);
        let lo = from_order.max(full.min_exp());
        QSeries::new(Var::Q, lo, full.coefficients_from(lo), to_order)
    }

    /// Substitution q ↦ −q.
    pub fn negate_variable(&self) -> Self {
        let flip = |p: &Polynomial| {
            Polynomial::new(
                p.coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                    .collect(),
            )
        };
        Self::new(flip(&self.num), flip(&self.den)).expect("nonzero denominator")
    }

    pub fn to_repr(&self) -> RationalRepr {
        RationalRepr {
            numerator: self.num.coeffs.iter().map(fmt_q).collect(),
            denominator: self.den.coeffs.iter().map(fmt_q).collect(),
        }
    }

    pub fn from_repr(r: &RationalRepr) -> Result<Self> {
        let p = |v: &[String]| v.iter().map(|s| parse_q(s)).collect::<Result<Vec<Q>>>();
        Self::from_coeffs(&p(&r.numerator)?, &p(&r.denominator)?)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        self.num.fmt_in(f)?;
        write!(f, ") / (")?;
        self.den.fmt_in(f)?;
        write!(f, ")")
    }
}

/// JSON form: coefficient strings from q^0 upward.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub numerator: Vec<String>,
    pub denominator: Vec<String>,
}

/// Laurent expansion of `f` on the exponent window [from_order, to_order].
pub fn expand_rational(f: &RationalFunction, from_order: i64, to_order: i64) -> QSeries {
    f.expand(from_order, to_order)
}

/// Searches for a rational function with numerator and denominator degree at most
/// `max_degree` whose expansion matches `s` through its truncation order.
///
/// Returns `Ok(None)` when no such function exists; this certifies
/// non-rationality only up to the probed degree.
pub fn pade_reconstruct(s: &QSeries, max_degree: usize) -> Result<Option<RationalFunction>> {
    let v = s.valuation().unwrap_or(0).min(0);
    // work with t = q^{-v} s, a power series known through n
    let n = s.order() - v;
    if n + 1 < 2 * max_degree as i64 + 1 {
        return Err(Error::InsufficientTerms(format!(
            "{} terms known, {} needed for degree {}",
            n + 1,
            2 * max_degree + 1,
            max_degree
        )));
    }
    if s.is_zero() {
        return Ok(Some(RationalFunction::from_coeffs(&[], &[Q::one()])?));
    }
    let t: Vec<Q> = (0..=n).map(|k| s.coeff(k + v)).collect();
    for d in 0..=max_degree {
        // unknown denominator b_0..b_d; the coefficients of q^k, d < k ≤ n, of b·t vanish
        let rows: Vec<Vec<Q>> = ((d as i64 + 1)..=n)
            .map(|k| {
                (0..=d)
                    .map(|j| {
                        let idx = k - j as i64;
                        if idx >= 0 {
                            t[idx as usize].clone()
                        } else {
                            Q::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let null = if rows.is_empty() {
            vec![(0..=d).map(|j| if j == 0 { Q::one() } else { Q::zero() }).collect()]
        } else {
            nullspace_q(&rows, d + 1)
        };
        for b in null {
            let den = Polynomial::new(b);
            if den.is_zero() {
                continue;
            }
            let prod = den.mul(&Polynomial::new(t.clone()));
            let num = Polynomial::new(prod.coeffs.iter().take(d + 1).cloned().collect());
            // reinstate q^v
            let (num, den) = if v >= 0 {
                (num.mul(&Polynomial::monomial(v as usize, Q::one())), den)
            } else {
                (num, den.mul(&Polynomial::monomial((-v) as usize, Q::one())))
            };
            let f = RationalFunction::new(num, den)?;
            if f.num.degree() > max_degree as i64 + v.max(0) || f.den.degree() > max_degree as i64 - v.min(0) {
                continue;
            }
            let e = f.expand(i64::MIN / 4, s.order());
            if (s.min_exp().min(e.min_exp())..=s.order()).all(|k| e.coeff(k) == s.coeff(k)) {
                return Ok(Some(f));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf};

    fn poly(v: &[i64]) -> Polynomial {
        Polynomial::new(v.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn reduces_common_factors() {
        let f = RationalFunction::new(poly(&[1, -1]), poly(&[1, -1])).unwrap();
        assert_eq!(f.numerator(), &poly(&[1]));
        assert_eq!(f.denominator(), &poly(&[1]));
        let g = RationalFunction::new(poly(&[2]), poly(&[2, 4])).unwrap();
        assert_eq!(g.denominator(), &poly(&[1, 2]).monic());
        assert_eq!(g.numerator().coeffs(), &[qf(1, 2)]);
    }

    #[test]
    fn expansion_q_over_1_plus_q_squared() {
        let f = RationalFunction::new(poly(&[0, 1]), poly(&[1, 2, 1])).unwrap();
        let e = expand_rational(&f, 0, 4);
        assert_eq!(e.coefficients_from(0), vec![q(0), q(1), q(-2), q(3), q(-4)]);
    }

    #[test]
    fn expansion_of_pole() {
        let f = RationalFunction::new(poly(&[1]), poly(&[0, 1])).unwrap();
        let e = expand_rational(&f, -3, 3);
        assert_eq!(e.valuation(), Some(-1));
        assert_eq!(e.coeff(-1), q(1));
        assert_eq!(e.coeff(0), q(0));
        assert_eq!(e.coeff(3), q(0));
    }

    #[test]
    fn pade_round_trip() {
        let f = RationalFunction::new(poly(&[0, 1]), poly(&[1, 2, 1])).unwrap();
        let s = expand_rational(&f, 0, 12);
        assert_eq!(pade_reconstruct(&s, 2).unwrap(), Some(f));
    }

    #[test]
    fn pade_constant() {
        let s = QSeries::new(Var::Q, 0, vec![q(5)], 6);
        let f = pade_reconstruct(&s, 1).unwrap().unwrap();
        assert_eq!(f.numerator(), &poly(&[5]));
        assert_eq!(f.denominator(), &poly(&[1]));
    }

    #[test]
    fn pade_needs_terms() {
        let s = QSeries::new(Var::Q, 0, vec![q(1), q(1)], 2);
        assert!(matches!(pade_reconstruct(&s, 3), Err(Error::InsufficientTerms(_))));
    }

    #[test]
    fn pade_laurent_input() {
        let f = RationalFunction::new(poly(&[1, 3]), poly(&[0, 0, 1, -1])).unwrap();
        let s = expand_rational(&f, -5, 10);
        assert_eq!(pade_reconstruct(&s, 3).unwrap(), Some(f));
    }
}
