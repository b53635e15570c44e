//! Comparison of a rational PT series in q with a GW series in u under −q = e^{iu}.

use num_traits::One;
use serde::Serialize;

use super::laurent::{GSeries, QSeries, Var};
use super::rational::RationalFunction;
use crate::arith::{q, GaussianQ, Q};
use crate::error::{Error, Result};

/// Poles of the substituted series deeper than this are rejected.
const MAX_POLE_ORDER: i64 = 64;

/// e^{c·u} through u^order.
pub fn exp_series(c: &GaussianQ, order: i64) -> GSeries {
    let mut coeffs = Vec::new();
    let mut term = GaussianQ::one();
    for n in 0..=order.max(0) {
        if n > 0 {
            term = term * c.clone() / GaussianQ::real(q(n));
        }
        coeffs.push(term.clone());
    }
    GSeries::new(Var::U, 0, coeffs, order)
}

/// Evaluates a polynomial in q at a u-series by Horner's rule.
fn eval_poly(coeffs: &[Q], x: &GSeries, order: i64) -> Result<GSeries> {
    let mut acc = GSeries::zero(Var::U, order);
    for c in coeffs.iter().rev() {
        acc = acc
            .mul(x)?
            .add(&GSeries::monomial(Var::U, 0, GaussianQ::real(c.clone()), order))?;
    }
    Ok(acc.truncate(order))
}

/// f(−e^{iu}) as a Laurent series in u known through `order`.
pub fn substitute_neg_exp_iu(f: &RationalFunction, order: i64) -> Result<GSeries> {
    let mut work = order.max(0) + 4;
    loop {
        let x = exp_series(&GaussianQ::i(), work).neg();
        let num = eval_poly(f.numerator().coeffs(), &x, work)?;
        let den = eval_poly(f.denominator().coeffs(), &x, work)?;
        match den.valuation() {
            Some(v) if v > MAX_POLE_ORDER => {
                return Err(Error::Truncation(format!("pole of order {v} after substitution")))
            }
            Some(_) => {
                let quo = num.div(&den)?;
                if quo.order() >= order {
                    return Ok(quo.truncate(order));
                }
            }
            None if work > 2 * MAX_POLE_ORDER + order => {
                return Err(Error::Truncation(
                    "denominator vanishes to the representable window".into(),
                ))
            }
            None => {}
        }
        work *= 2;
    }
}

/// Outcome of a GW/DT comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareReport {
    pub equal: bool,
    /// Highest u-exponent compared.
    pub order_checked: i64,
    /// (exponent, PT-side coefficient, GW-side coefficient) at the first mismatch.
    pub first_mismatch: Option<(i64, String, String)>,
}

/// Substitutes q = −e^{iu} into `z_pt`, multiplies by e^{−i·d·u/2}, and compares with
/// (−iu)^{d + excess}·z_gw termwise through u^{u_order}.
pub fn gw_dt_compare(
    z_pt: &RationalFunction,
    z_gw: &QSeries,
    d_beta: i64,
    excess: i64,
    u_order: i64,
) -> Result<CompareReport> {
    let gw = z_gw.with_var(Var::U).to_gaussian();
    let k = d_beta + excess;
    // (−iu)^k = (−i)^k u^k
    let minus_i = -GaussianQ::i();
    let mut c = GaussianQ::one();
    for _ in 0..k.unsigned_abs() {
        c = c * minus_i.clone();
    }
    if k < 0 {
        c = GaussianQ::one() / c;
    }
    let rhs = gw.scale(&c).shift(k);
    if rhs.order() < u_order {
        return Err(Error::Truncation(format!(
            "GW series known through u^{} only, u^{} requested",
            rhs.order(),
            u_order
        )));
    }
    let sub = substitute_neg_exp_iu(z_pt, u_order)?;
    let phase = exp_series(&(GaussianQ::i().scale(&(q(-d_beta) / q(2)))), u_order - sub.min_exp().min(0));
    let lhs = sub.mul(&phase)?.truncate(u_order);
    if lhs.order() < u_order {
        return Err(Error::Truncation("PT side lost precision".into()));
    }
    let lo = lhs.min_exp().min(rhs.min_exp());
    for e in lo..=u_order {
        let (a, b) = (lhs.coeff(e), rhs.coeff(e));
        if a != b {
            return Ok(CompareReport {
                equal: false,
                order_checked: u_order,
                first_mismatch: Some((e, a.to_string(), b.to_string())),
            });
        }
    }
    Ok(CompareReport {
        equal: true,
        order_checked: u_order,
        first_mismatch: None,
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qf;

    #[test]
    fn exp_iu_squares_to_exp_2iu() {
        let a = exp_series(&GaussianQ::i(), 8);
        let b = exp_series(&GaussianQ::i().scale(&q(2)), 8);
        assert_eq!(a.mul(&a).unwrap(), b);
    }

    #[test]
    fn trivial_comparison() {
        let one = RationalFunction::from_coeffs(&[q(1)], &[q(1)]).unwrap();
        let gw = QSeries::one(Var::U, 6);
        assert!(gw_dt_compare(&one, &gw, 0, 0, 6).unwrap().equal);
    }

    #[test]
    fn phase_factor() {
        // −q = e^{iu}, so e^{−iu}·(−q) = 1
        let minus_q = RationalFunction::from_coeffs(&[q(0), q(-1)], &[q(1)]).unwrap();
        let gw = QSeries::one(Var::U, 6);
        // (−iu)^{2−2}·1 = 1
        let r = gw_dt_compare(&minus_q, &gw, 2, -2, 6).unwrap();
        assert!(r.equal, "{r:?}");
        let r = gw_dt_compare(&minus_q, &gw.scale(&qf(1, 2)), 2, -2, 6).unwrap();
        assert_eq!(r.first_mismatch.unwrap().0, 0);
    }
}
