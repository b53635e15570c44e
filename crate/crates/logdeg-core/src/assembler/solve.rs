//! Solving F = F^k for a series F = 1 + O(q), coefficient by coefficient.

use num_traits::{One, Zero};

use crate::arith::Q;
use crate::error::{Error, Result};
use crate::series_engine::{QSeries, Var};

/// Parses "F = F^k" (also "F=F²", "F = F**k", "F = F") and returns k.
pub fn parse_power_relation(relation: &str) -> Result<u32> {
    let s: String = relation.chars().filter(|c| !c.is_whitespace()).collect();
    let (lhs, rhs) = s
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("relation '{relation}' has no '='")))?;
    if lhs != "F" {
        return Err(Error::Parse(format!("left side of '{relation}' must be F")));
    }
    let rest = rhs
        .strip_prefix('F')
        .ok_or_else(|| Error::Parse(format!("right side of '{relation}' must be a power of F")))?;
    if rest.is_empty() {
        return Ok(1);
    }
    let sup = |c: char| "⁰¹²³⁴⁵⁶⁷⁸⁹".chars().position(|d| d == c);
    let digits: String = if let Some(r) = rest.strip_prefix('^').or_else(|| rest.strip_prefix("**")) {
        r.to_string()
    } else if rest.chars().all(|c| sup(c).is_some()) {
        rest.chars().map(|c| char::from(b'0' + sup(c).unwrap_or(0) as u8)).collect()
    } else {
        return Err(Error::Parse(format!("cannot read the exponent in '{relation}'")));
    };
    digits
        .parse::<u32>()
        .map_err(|_| Error::Parse(format!("cannot read the exponent in '{relation}'")))
}

/// The solution F = 1 + Σ_{n≥1} f_n q^n of F = F^k through q^order. Writing
/// P_n for the q^n coefficient of (1 + Σ_{m<n} f_m q^m)^k, the q^n coefficient
/// of F^k − F is (k − 1) f_n + P_n, so f_n = −P_n/(k − 1).
pub fn fixed_point_solve(relation: &str, order: i64) -> Result<QSeries> {
    let k = parse_power_relation(relation)?;
    match k {
        0 => return Err(Error::Invalid("F = 1 is not a fixed-point relation".into())),
        1 => {
            return Err(Error::Underdetermined(
                "F = F holds for every series; the coefficients are not determined".into(),
            ))
        }
        _ => {}
    }
    if order < 0 {
        return Ok(QSeries::one(Var::Q, order));
    }
    let mut coeffs = vec![Q::one()];
    for n in 1..=order {
        let partial = QSeries::from_poly(Var::Q, &coeffs, n);
        let p_n = partial.pow(k as i64)?.coeff(n);
        let f_n = -p_n / Q::from_integer((k - 1).into());
        coeffs.push(f_n);
    }
    debug_assert!(coeffs[1..].iter().all(Zero::is_zero));
    Ok(QSeries::from_poly(Var::Q, &coeffs, order))
}
