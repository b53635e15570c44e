//! The MacMahon function M(q) = ∏_{n≥1} (1 − qⁿ)^{−n} and its powers.

use num_traits::Zero;

use super::laurent::{QSeries, Var};
use crate::arith::{q, Q};
use crate::error::{Error, Result};

/// σ₂(k) = Σ_{d | k} d²
fn sigma2(k: i64) -> i64 {
    (1..=k).filter(|d| k % d == 0).map(|d| d * d).sum()
}

/// exp(Σ_k g_k q^k) to the given order from the values k·g_k (k ≥ 1), using
/// n·f_n = Σ_{k=1}^{n} (k·g_k)·f_{n−k}.
fn exp_from_weighted_log(kg: &[Q], order: usize) -> Vec<Q> {
    let mut f = vec![q(1)];
    for n in 1..=order {
        let mut acc = Q::zero();
        for k in 1..=n {
            acc += &kg[k] * &f[n - k];
        }
        f.push(acc / q(n as i64));
    }
    f
}

/// M(q)^c through q^order, for any integer c.
fn macmahon_pow_q(c: i64, sign: i64, order: i64) -> Result<QSeries> {
    if order < 0 {
        return Err(Error::Invalid(format!("negative order {order}")));
    }
    let n = order as usize;
    // log M(±q)^c = Σ_k c·σ₂(k)·(±1)^k q^k / k
    let kg: Vec<Q> = (0..=n as i64)
        .map(|k| {
            if k == 0 {
                Q::zero()
            } else {
                let s = if sign < 0 && k % 2 == 1 { -1 } else { 1 };
                q(c * sigma2(k) * s)
            }
        })
        .collect();
    Ok(QSeries::new(Var::Q, 0, exp_from_weighted_log(&kg, n), order))
}

/// M(q) through q^order.
pub fn macmahon(order: i64) -> Result<QSeries> {
    macmahon_pow_q(1, 1, order)
}

/// M(−q)^exponent through q^order; negative exponents allowed.
pub fn macmahon_power(exponent: i64, order: i64) -> Result<QSeries> {
    macmahon_pow_q(exponent, -1, order)
}

/// z / z0 at the common truncation.
pub fn normalize_dt(z: &QSeries, z0: &QSeries) -> Result<QSeries> {
    if z0.is_zero() {
        return Err(Error::Computation("normalizing series is zero".into()));
    }
    z.div(z0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_coefficients() {
        let m = macmahon(6).unwrap();
        assert_eq!(
            m.coefficients_from(0),
            [1, 1, 3, 6, 13, 24, 48].iter().map(|&x| q(x)).collect::<Vec<_>>()
        );
        assert_eq!(macmahon(0).unwrap().coefficients_from(0), vec![q(1)]);
    }

    #[test]
    fn matches_product_definition() {
        let order = 8;
        let mut prod = QSeries::one(Var::Q, order);
        for n in 1..=order {
            let mut c = vec![Q::zero(); n as usize + 1];
            c[0] = q(1);
            c[n as usize] = q(-1);
            let factor = QSeries::from_poly(Var::Q, &c, order).pow(-n).unwrap();
            prod = prod.mul(&factor).unwrap();
        }
        assert_eq!(prod, macmahon(order).unwrap());
    }

    #[test]
    fn power_of_negated() {
        let m = macmahon_power(1, 2).unwrap();
        assert_eq!(m.coefficients_from(0), vec![q(1), q(-1), q(3)]);
        let a = macmahon_power(3, 7).unwrap();
        let b = macmahon_power(1, 7).unwrap().pow(3).unwrap();
        assert_eq!(a, b);
        let inv = macmahon_power(-1, 7).unwrap();
        assert_eq!(inv.mul(&macmahon_power(1, 7).unwrap()).unwrap(), QSeries::one(Var::Q, 7));
        assert_eq!(macmahon_power(0, 5).unwrap(), QSeries::one(Var::Q, 5));
    }

    #[test]
    fn normalization() {
        let z0 = macmahon_power(2, 6).unwrap();
        assert_eq!(normalize_dt(&z0, &z0).unwrap(), QSeries::one(Var::Q, 6));
        let z = z0.shift(1).truncate(6);
        let n = normalize_dt(&z, &z0).unwrap();
        assert_eq!(n.coeff(1), q(1));
        assert!(normalize_dt(&z0, &QSeries::zero(Var::Q, 6)).is_err());
    }
}
