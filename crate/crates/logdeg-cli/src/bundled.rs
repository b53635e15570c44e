//! Fixtures compiled into the binary, and the bundled GW/DT comparison.

use num_traits::One;

use logdeg_core::arith::factorial;
use logdeg_core::assembler::GluingJob;
use logdeg_core::degeneration_combinatorics::{DegenerationComplex, DegenerationFile};
use logdeg_core::series_engine::{QSeries, RationalFunction, Var};
use logdeg_core::{Q, Z};

use crate::files::{ComparisonFile, PointsFile};
use crate::manifest::{parse_document, Kind};
use crate::CliResult;

/// Every bundled fixture: file name, kind, and contents.
pub const FIXTURES: &[(&str, Kind, &str)] = &[
    ("p2.fan.json", Kind::Fan, include_str!("../fixtures/p2.fan.json")),
    ("p2.degeneration.json", Kind::Degeneration, include_str!("../fixtures/p2.degeneration.json")),
    ("points2.json", Kind::Points, include_str!("../fixtures/points2.json")),
    ("points5.json", Kind::Points, include_str!("../fixtures/points5.json")),
    ("points8.json", Kind::Points, include_str!("../fixtures/points8.json")),
    ("line-series.json", Kind::Series, include_str!("../fixtures/line-series.json")),
    ("trivalent-a.json", Kind::Job, include_str!("../fixtures/trivalent-a.json")),
    ("trivalent-b.json", Kind::Job, include_str!("../fixtures/trivalent-b.json")),
    ("flat-evaluation.json", Kind::Morphism, include_str!("../fixtures/flat-evaluation.json")),
    ("non-flat-evaluation.json", Kind::Morphism, include_str!("../fixtures/non-flat-evaluation.json")),
    ("tropical-line.json", Kind::OneComplex, include_str!("../fixtures/tropical-line.json")),
    ("triangle.degeneration.json", Kind::Degeneration, include_str!("../fixtures/triangle.degeneration.json")),
    ("triangle.record.json", Kind::Record, include_str!("../fixtures/triangle.record.json")),
    ("triangle.vertical.json", Kind::VerticalComplex, include_str!("../fixtures/triangle.vertical.json")),
    ("sine-comparison.json", Kind::Comparison, include_str!("../fixtures/sine-comparison.json")),
];

/// Parses a bundled fixture by file name.
pub fn load<T: serde::de::DeserializeOwned>(name: &str) -> CliResult<T> {
    let (_, kind, text) = FIXTURES
        .iter()
        .find(|(n, _, _)| *n == name)
        .ok_or_else(|| crate::CliError::computation(format!("bundled fixture '{name}' is missing")))?;
    parse_document(text, *kind, name)
}

pub fn p2_degeneration() -> CliResult<DegenerationComplex> {
    let f: DegenerationFile = load("p2.degeneration.json")?;
    Ok(DegenerationComplex::from_file(&f)?)
}

pub fn points(n: usize) -> CliResult<Vec<Vec<Q>>> {
    let f: PointsFile = load(&format!("points{n}.json"))?;
    Ok(f.points)
}

pub fn line_series() -> CliResult<QSeries> {
    let r = load("line-series.json")?;
    Ok(QSeries::from_repr(&r)?)
}

pub fn trivalent_jobs() -> CliResult<(GluingJob, GluingJob)> {
    Ok((load("trivalent-a.json")?, load("trivalent-b.json")?))
}

/// Order through which the bundled comparison runs.
pub const SINE_ORDER: i64 = 10;

/// sin(u/2)/(u/2) = Σ_k (−1)^k u^{2k} / (4^k (2k+1)!) through u^order.
fn half_angle_sinc(order: i64) -> QSeries {
    let coeffs: Vec<Q> = (0..=order.max(0))
        .map(|n| {
            if n % 2 == 1 {
                return Q::from_integer(Z::from(0));
            }
            let k = (n / 2) as u32;
            let sign = if k % 2 == 0 { Z::one() } else { -Z::one() };
            let den = Z::from(4u32).pow(k) * factorial(2 * k as u64 + 1);
            Q::new(sign, den)
        })
        .collect();
    QSeries::from_poly(Var::U, &coeffs, order)
}

/// 1/(2 sin(u/2))² = u^{−2}·(sin(u/2)/(u/2))^{−2}, known through u^order.
pub fn inverse_sine_square(order: i64) -> CliResult<QSeries> {
    let s = half_angle_sinc(order + 2);
    Ok(s.pow(-2)?.shift(-2).truncate(order))
}

/// The comparison of q/(1+q)² with 1/(2 sin(u/2))² through u^order.
pub fn sine_comparison(order: i64) -> CliResult<ComparisonFile> {
    let int = |v: i64| Q::from_integer(Z::from(v));
    let pt = RationalFunction::from_coeffs(&[int(0), int(1)], &[int(1), int(2), int(1)])?;
    Ok(ComparisonFile {
        pt: pt.to_repr(),
        gw: inverse_sine_square(order)?.to_repr(),
        d_beta: 0,
        excess: 0,
        u_order: order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_sine_square_leading_terms() {
        // 1/(4 sin²(u/2)) = u^{−2} + 1/12 + u²/240 + …
        let s = inverse_sine_square(4).unwrap();
        assert_eq!(s.coeff(-2), Q::one());
        assert_eq!(s.coeff(0), Q::new(Z::one(), Z::from(12)));
        assert_eq!(s.coeff(2), Q::new(Z::one(), Z::from(240)));
        assert_eq!(s.coeff(-1), Q::from_integer(Z::from(0)));
    }

    #[test]
    fn every_fixture_parses() {
        for (name, kind, text) in FIXTURES {
            parse_document::<serde_json::Value>(text, *kind, name).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert_eq!(points(5).unwrap().len(), 5);
        assert!(p2_degeneration().is_ok());
        assert!(line_series().is_ok());
        assert!(trivalent_jobs().is_ok());
    }
}
