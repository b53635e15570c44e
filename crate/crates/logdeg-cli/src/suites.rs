//! End-to-end example pipelines. Each asserts its expected outcome; a
//! failure is a computation error carrying a diff.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use logdeg_core::arith::q;
use logdeg_core::assembler::examples::{conic_job, degree_zero_job, perturb_n22};
use logdeg_core::assembler::{assemble, consistency_check, fixed_point_solve};
use logdeg_core::degeneration_combinatorics::fixtures::{sample_vertical, sampling_height, splitting_fixtures, SplittingFixture};
use logdeg_core::degeneration_combinatorics::{cut, enumerate_rigid, glue, same_type, Part, VerticalComplex};
use logdeg_core::series_engine::{QSeries, Var};

use crate::{bundled, CliError, CliResult, Context, ExamplesArgs, Outcome, Suite};

pub const DEFAULT_SAMPLES: usize = 500;
pub const DEFAULT_SEED: u64 = 20_240_917;

/// Draws attempted per sample before the sampler is declared stuck.
const MAX_DRAWS: usize = 1000;

pub(crate) fn run(args: &ExamplesArgs, ctx: &mut Context) -> CliResult<Outcome> {
    match args.name {
        Suite::Degree0 => degree0(),
        Suite::Conics => conics(),
        Suite::Trivalent => trivalent(),
        Suite::Splitting => {
            ctx.seed = Some(args.seed);
            let s = splitting(args.samples, args.seed)?;
            if s.failures.is_empty() {
                Outcome::ok(s.to_json())
            } else {
                Err(CliError::computation(format!("{} cut/glue round trips failed", s.failures.len())).with_detail(s.to_json()))
            }
        }
    }
}

fn coefficient_diff(got: &QSeries, want: &QSeries) -> Value {
    let hi = got.order().min(want.order());
    let lo = got.min_exp().min(want.min_exp()).min(hi + 1);
    let rows: Vec<Value> = (lo..=hi)
        .filter(|&e| got.coeff(e) != want.coeff(e))
        .map(|e| json!({ "exponent": e, "got": got.coeff(e).to_string(), "expected": want.coeff(e).to_string() }))
        .collect();
    json!(rows)
}

fn expect_equal(what: &str, got: &QSeries, want: &QSeries) -> CliResult<()> {
    if got == want {
        return Ok(());
    }
    Err(CliError::computation(format!("{what}: series differ")).with_detail(json!({
        "got": got.to_string(),
        "expected": want.to_string(),
        "diff": coefficient_diff(got, want),
    })))
}

/// F = F² forces F = 1, and the degree-zero job then assembles to F.
fn degree0() -> CliResult<Outcome> {
    let order = 50;
    let f = fixed_point_solve("F = F²", order)?;
    expect_equal("fixed point of F = F²", &f, &QSeries::one(Var::Q, order))?;
    let glued = assemble(&degree_zero_job(&f, order))?;
    expect_equal("degree-zero job", &glued, &f)?;
    Outcome::ok(json!({ "relation": "F = F²", "order": order, "solution": f.to_string(), "glued": glued.to_string() }))
}

/// One rigid line through 2 points, one rigid conic through 5, and the conic
/// job assembling to the fourth power of the line series times q^{−3}.
fn conics() -> CliResult<Outcome> {
    let d = bundled::p2_degeneration()?;
    let lines = enumerate_rigid(&d, &[1, 1, 1], &bundled::points(2)?, true)?;
    let conics = enumerate_rigid(&d, &[2, 2, 2], &bundled::points(5)?, true)?;
    if lines.len() != 1 || conics.len() != 1 {
        return Err(CliError::computation("rigid record counts differ").with_detail(json!({
            "lines": { "got": lines.len(), "expected": 1 },
            "conics": { "got": conics.len(), "expected": 1 },
        })));
    }
    let line = bundled::line_series()?;
    let order = 8;
    let job = conic_job(&conics[0], &line, order)?;
    let glued = assemble(&job)?;
    let edges = job.complexes[0].edges.len() as i64;
    let expected = line.pow(4)?.shift(-edges).truncate(order);
    expect_equal("conic job", &glued, &expected)?;
    Outcome::ok(json!({
        "line_records": lines.len(),
        "conic_records": conics.len(),
        "conic_vertices": conics[0].gamma.vertices.len(),
        "conic_edges": edges,
        "line_series": line.to_string(),
        "glued": glued.to_string(),
    }))
}

/// The two trivalent jobs agree under maximal tangency, and a perturbed
/// (2,2) vertex series is caught at the perturbed order.
fn trivalent() -> CliResult<Outcome> {
    let (a, b) = bundled::trivalent_jobs()?;
    let r = consistency_check(&a, &b)?;
    if !r.consistent {
        return Err(CliError::computation("trivalent jobs disagree").with_detail(json!(r)));
    }
    let mut bumped = a.clone();
    let exponent = 3;
    perturb_n22(&mut bumped, exponent, q(1))?;
    let p = consistency_check(&bumped, &b)?;
    let localized = p.residual.as_ref().map(|x| x.exponent) == Some(exponent);
    if p.consistent || !localized {
        return Err(CliError::computation("perturbation not localized").with_detail(json!({
            "expected_exponent": exponent,
            "report": p,
        })));
    }
    Outcome::ok(json!({ "consistent": r, "perturbed": p }))
}

/// Outcome of the sampled cut/glue round trips.
#[derive(Clone, Debug, Default)]
pub struct SplittingSummary {
    pub seed: u64,
    /// Per fixture: (name, round trips, distinct part sets).
    pub fixtures: Vec<(String, usize, usize)>,
    pub failures: Vec<String>,
}

impl SplittingSummary {
    fn to_json(&self) -> Value {
        let fixtures: Vec<Value> = self
            .fixtures
            .iter()
            .map(|(n, k, distinct)| json!({ "fixture": n, "round_trips": k, "distinct_part_sets": distinct }))
            .collect();
        json!({ "seed": self.seed, "fixtures": fixtures, "failures": self.failures })
    }
}

/// The `i`-th sample for fixture `f`: its own ChaCha stream, so results do
/// not depend on the thread count.
fn draw(fx: &SplittingFixture, seed: u64, f: usize, i: usize) -> Option<VerticalComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((f as u64) << 32) | i as u64);
    let t = sampling_height();
    (0..MAX_DRAWS).find_map(|_| sample_vertical(fx, &mut rng, &t))
}

fn round_trip(fx: &SplittingFixture, g: &VerticalComplex) -> Result<Vec<Part>, String> {
    let d = &fx.degeneration;
    let c = cut(d, &fx.gamma, g).map_err(|e| format!("cut: {e}"))?;
    let back = glue(d, &fx.gamma, &c.parts).map_err(|e| format!("glue: {e}"))?;
    if !same_type(&back, g) {
        return Err("glue(cut(g)) changed the combinatorial type".into());
    }
    let again = cut(d, &fx.gamma, &back).map_err(|e| format!("re-cut: {e}"))?;
    if again.parts != c.parts {
        return Err("cut(glue(parts)) differs from parts".into());
    }
    Ok(c.parts)
}

/// `samples` round trips per splitting fixture, plus injectivity: samples
/// with equal part sets have the same combinatorial type.
pub fn splitting(samples: usize, seed: u64) -> CliResult<SplittingSummary> {
    let mut summary = SplittingSummary { seed, ..Default::default() };
    for (f, fx) in splitting_fixtures().iter().enumerate() {
        let results: Vec<Result<(VerticalComplex, Vec<Part>), String>> = (0..samples)
            .into_par_iter()
            .map(|i| {
                let g = draw(fx, seed, f, i).ok_or_else(|| format!("sample {i}: sampler produced nothing"))?;
                round_trip(fx, &g).map(|p| (g, p)).map_err(|e| format!("sample {i}: {e}"))
            })
            .collect();
        let mut by_parts: BTreeMap<String, Vec<VerticalComplex>> = BTreeMap::new();
        let mut ok = 0;
        for r in results {
            match r {
                Ok((g, parts)) => {
                    ok += 1;
                    let key = serde_json::to_string(&parts).map_err(|e| CliError::computation(e.to_string()))?;
                    by_parts.entry(key).or_default().push(g);
                }
                Err(e) => summary.failures.push(format!("{}: {e}", fx.name)),
            }
        }
        for group in by_parts.values() {
            if group[1..].iter().any(|g| !same_type(g, &group[0])) {
                summary.failures.push(format!("{}: two types cut to the same parts", fx.name));
            }
        }
        summary.fixtures.push((fx.name.to_string(), ok, by_parts.len()));
    }
    Ok(summary)
}
