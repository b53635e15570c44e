//! Acceptance suite: ten end-to-end criteria, each checked against an
//! independent oracle and a runtime budget. Prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.

#[path = "../../logdeg-core/tests/support/lattice_paths.rs"]
mod lattice_paths;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use logdeg_cli::bundled;
use logdeg_cli::files::MorphismFile;
use logdeg_core::arith::{q, zvec};
use logdeg_core::assembler::examples::{conic_job, perturb_n22};
use logdeg_core::assembler::{
    assemble, consistency_check, fixed_point_solve, BoundaryCondition, Gluing, GluingJob, JobComplex, JobEdge,
    TableKey, Theory, VertexTable,
};
use logdeg_core::cone_geometry::{Cone, ConeComplex, ConeMorphism};
use logdeg_core::degeneration_combinatorics::fixtures::{sample_vertical, sampling_height, splitting_fixtures};
use logdeg_core::degeneration_combinatorics::{cut, enumerate_rigid, glue, same_type, total_multiplicity};
use logdeg_core::partition_algebra::{diagonal_decomposition, gamma_inverse_check, PairingTable, Partition};
use logdeg_core::series_engine::{gw_dt_compare, macmahon, QSeries, RationalFunction, Var};
use logdeg_core::tropical_moduli::{check_relative_subdivision, flatten_evaluation, relative_barycentric_subdivide};
use logdeg_core::{Q, Z};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let e = start.elapsed();
    ensure(e <= budget, || format!("took {:.1}s, budget {}s", e.as_secs_f64(), budget.as_secs()))
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

/// Runs the command line in-process and returns (exit code, JSON report).
fn cli(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["logdeg".to_string(), "--json".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (code, text) = logdeg_cli::run(&argv);
    let v = serde_json::from_str(&text).unwrap_or_else(|e| panic!("report is not JSON ({e}):\n{text}"));
    (code, v)
}

// ---------------------------------------------------------------------------

const SPLITTING_SAMPLES: usize = 500;

/// Cut/glue round trips on sampled vertical 1-complexes, and injectivity of
/// the cut across all sampled pairs.
fn splitting_bijection() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let t = sampling_height();
    let mut summary = Vec::new();
    for fx in splitting_fixtures() {
        let d = &fx.degeneration;
        let mut by_parts: BTreeMap<String, Vec<_>> = BTreeMap::new();
        let mut done = 0;
        let mut draws = 0;
        while done < SPLITTING_SAMPLES {
            draws += 1;
            ensure(draws < 100 * SPLITTING_SAMPLES, || format!("{}: sampler stalled", fx.name))?;
            let Some(g) = sample_vertical(&fx, &mut rng, &t) else { continue };
            let c = cut(d, &fx.gamma, &g).map_err(|e| format!("{}: cut failed: {e}", fx.name))?;
            let back = glue(d, &fx.gamma, &c.parts).map_err(|e| format!("{}: glue failed: {e}", fx.name))?;
            ensure(same_type(&back, &g), || format!("{}: glue(cut(g)) changed the type", fx.name))?;
            let again = cut(d, &fx.gamma, &back).map_err(|e| format!("{}: re-cut failed: {e}", fx.name))?;
            ensure(again.parts == c.parts, || format!("{}: cut(glue(parts)) != parts", fx.name))?;
            by_parts.entry(serde_json::to_string(&c.parts).unwrap()).or_default().push(g);
            done += 1;
        }
        for group in by_parts.values() {
            for (i, a) in group.iter().enumerate() {
                for b in &group[i + 1..] {
                    ensure(same_type(a, b), || format!("{}: distinct types share a cut", fx.name))?;
                }
            }
        }
        summary.push(format!("{} {done}", fx.name));
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{} round trips each, 0 failures [{}]", SPLITTING_SAMPLES, summary.join(", ")))
}

/// Plane partitions of n by brute force: stacks of rows, each a partition
/// dominated entrywise by the row above.
fn plane_partitions(n: u32) -> u64 {
    fn rows(remaining: u32, above: &[u32]) -> u64 {
        // count all ways to continue below `above` using exactly `remaining`
        if remaining == 0 {
            return 1;
        }
        let mut total = 0;
        let mut row = Vec::new();
        fn fill(i: usize, left: u32, above: &[u32], row: &mut Vec<u32>, total: &mut u64, remaining: u32) {
            let used = remaining - left;
            if used > 0 {
                *total += rows(left, row);
            }
            if i >= above.len() {
                return;
            }
            let cap = above[i].min(left).min(row.last().copied().unwrap_or(u32::MAX));
            for v in 1..=cap {
                row.push(v);
                fill(i + 1, left - v, above, row, total, remaining);
                row.pop();
            }
        }
        fill(0, remaining, above, &mut row, &mut total, remaining);
        total
    }
    let top: Vec<u32> = vec![n; n as usize];
    rows(n, &top)
}

fn macmahon_coefficients() -> Outcome {
    let start = Instant::now();
    let m = macmahon(10).map_err(|e| e.to_string())?;
    let brute: Vec<u64> = (0..=10).map(plane_partitions).collect();
    for (n, b) in brute.iter().enumerate() {
        ensure(m.coeff(n as i64) == q(*b as i64), || format!("q^{n}: {} vs brute force {b}", m.coeff(n as i64)))?;
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("{brute:?}"))
}

fn degree_zero_fixed_point() -> Outcome {
    let start = Instant::now();
    let f = fixed_point_solve("F = F²", 50).map_err(|e| e.to_string())?;
    ensure(f.order() >= 50, || format!("known only through q^{}", f.order()))?;
    for n in 0..=50 {
        let want = if n == 0 { Q::one() } else { Q::zero() };
        ensure(f.coeff(n) == want, || format!("q^{n} coefficient is {}", f.coeff(n)))?;
    }
    within(start, Duration::from_secs(1))?;
    Ok("F = 1 through q^50".into())
}

fn conic_uniqueness() -> Outcome {
    let start = Instant::now();
    let deg = fixture("p2.degeneration.json");
    let mut out = Vec::new();
    for (degree, pts, what) in [("2,2,2", "points5.json", "conics"), ("1,1,1", "points2.json", "lines")] {
        let (code, r) = cli(&["deg", "rigid", &deg, "--degree", degree, "--points", &fixture(pts), "--balanced"]);
        ensure(code == 0, || format!("{what}: exit {code}: {}", r["error"]))?;
        let n = r["result"]["count"].as_u64().unwrap_or(u64::MAX);
        ensure(n == 1, || format!("{what}: {n} records"))?;
        out.push(format!("{what} 1"));
    }
    within(start, Duration::from_secs(30))?;
    Ok(out.join(", "))
}

fn cubic_count() -> Outcome {
    let start = Instant::now();
    let d = bundled::p2_degeneration().map_err(|e| e.to_string())?;
    let pts = bundled::points(8).map_err(|e| e.to_string())?;
    let records = enumerate_rigid(&d, &[3, 3, 3], &pts, true).map_err(|e| e.to_string())?;
    let total = total_multiplicity(&records);
    let oracle = lattice_paths::lattice_path_count(3);
    ensure(total == oracle, || format!("multiplicities sum to {total}, lattice paths give {oracle}"))?;
    within(start, Duration::from_secs(300))?;
    Ok(format!("{} records, total multiplicity {total} = lattice-path count", records.len()))
}

fn partition_count(n: u32) -> u64 {
    let mut p = vec![0u64; n as usize + 1];
    p[0] = 1;
    for part in 1..=n as usize {
        for m in part..=n as usize {
            p[m] += p[m - part];
        }
    }
    p[n as usize]
}

/// Non-decreasing size vectors (length ≤ 4) with ∏ p(n_i) ≤ bound.
fn size_vectors(bound: u64) -> Vec<Vec<u32>> {
    fn go(min: u32, prod: u64, bound: u64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == 4 {
            return;
        }
        let mut n = min;
        while prod * partition_count(n) <= bound {
            cur.push(n);
            go(n, prod * partition_count(n), bound, cur, out);
            cur.pop();
            n += 1;
        }
    }
    let mut out = Vec::new();
    go(1, 1, bound, &mut Vec::new(), &mut out);
    out
}

fn nakajima_algebra() -> Outcome {
    let start = Instant::now();
    let vectors = size_vectors(50);
    for s in &vectors {
        ensure(gamma_inverse_check(s), || format!("inverse identities fail for {s:?}"))?;
    }
    for must in [vec![4], vec![5], vec![2, 3], vec![2, 2, 2]] {
        ensure(vectors.contains(&must), || format!("{must:?} was not covered"))?;
    }
    let v = diagonal_decomposition(&[2], &[PairingTable::default()]).map_err(|e| e.to_string())?;
    let terms: BTreeMap<String, Q> = v.iter().map(|((l, r), c)| (format!("{}|{}", l.tuple, r.tuple), c.clone())).collect();
    let want: BTreeMap<String, Q> =
        [("(2)|(2)".to_string(), Q::new(Z::from(-1), Z::from(2))), ("(1,1)|(1,1)".to_string(), Q::new(Z::one(), Z::from(2)))]
            .into_iter()
            .collect();
    ensure(terms == want, || format!("diagonal for (2) is {terms:?}"))?;
    within(start, Duration::from_secs(5))?;
    Ok(format!("{} size vectors; diagonal (2) = -1/2 (2)⊗(2) + 1/2 (1,1)⊗(1,1)", vectors.len()))
}

/// Bernoulli numbers B_0..B_n from Σ_{k≤m} C(m+1, k) B_k = 0.
fn bernoulli(n: usize) -> Vec<Q> {
    let mut b: Vec<Q> = vec![Q::one()];
    for m in 1..=n {
        let mut binom = Z::one(); // C(m+1, 0)
        let mut acc = Q::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += Q::from_integer(binom.clone()) * bk;
            binom = binom * Z::from(m + 1 - k) / Z::from(k + 1);
        }
        // binom is now C(m+1, m) = m + 1
        b.push(-acc / Q::from_integer(binom));
    }
    b
}

/// 1/(2 sin(u/2))² = Σ_{n≥0} (−1)^{n+1} (2n−1) B_{2n} u^{2n−2} / (2n)!.
fn inverse_sine_square_oracle(order: i64) -> QSeries {
    let nmax = ((order + 2) / 2) as usize;
    let b = bernoulli(2 * nmax);
    let mut coeffs = vec![Q::zero(); (order + 3) as usize];
    let mut fact = Z::one();
    for n in 0..=nmax {
        if n > 0 {
            fact = fact * Z::from(2 * n - 1) * Z::from(2 * n);
        }
        let sign = if n % 2 == 1 { Q::one() } else { -Q::one() };
        let c = sign * Q::from_integer(Z::from(2 * n as i64 - 1)) * &b[2 * n] / Q::from_integer(fact.clone());
        let idx = 2 * n; // exponent 2n − 2, stored from −2
        if idx < coeffs.len() {
            coeffs[idx] = c;
        }
    }
    QSeries::new(Var::U, -2, coeffs, order)
}

fn gw_dt_variable_change() -> Outcome {
    let start = Instant::now();
    let order = 10;
    let pt = RationalFunction::from_coeffs(&[q(0), q(1)], &[q(1), q(2), q(1)]).map_err(|e| e.to_string())?;
    let gw = inverse_sine_square_oracle(order);
    let r = gw_dt_compare(&pt, &gw, 0, 0, order).map_err(|e| e.to_string())?;
    ensure(r.equal && r.order_checked == order, || format!("{r:?}"))?;
    let bumped = gw.add(&QSeries::monomial(Var::U, 4, Q::new(Z::one(), Z::from(7)), order)).map_err(|e| e.to_string())?;
    let p = gw_dt_compare(&pt, &bumped, 0, 0, order).map_err(|e| e.to_string())?;
    ensure(!p.equal && p.first_mismatch.as_ref().map(|m| m.0) == Some(4), || format!("perturbation missed: {p:?}"))?;
    let (code, rep) = cli(&["series", "gwdt-check"]);
    ensure(code == 0 && rep["result"]["equal"] == true, || format!("bundled comparison: exit {code}"))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("equal through u^{order}; perturbation flagged at u^4"))
}

/// Naive truncated product of coefficient vectors from q^0.
fn convolve(a: &[Q], b: &[Q], len: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); len];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < len {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn degeneration_formula_structure() -> Outcome {
    let start = Instant::now();
    let d = bundled::p2_degeneration().map_err(|e| e.to_string())?;
    let rec = enumerate_rigid(&d, &[2, 2, 2], &bundled::points(5).map_err(|e| e.to_string())?, true)
        .map_err(|e| e.to_string())?
        .remove(0);
    let line = bundled::line_series().map_err(|e| e.to_string())?;
    let order = 8;
    let job = conic_job(&rec, &line, order).map_err(|e| e.to_string())?;
    let edges = job.complexes[0].edges.len();
    ensure(edges == 3 && job.complexes[0].vertices.len() == 4, || "conic graph is not a tree on four vertices".into())?;
    let glued = assemble(&job).map_err(|e| e.to_string())?;
    // q^{−|μ|} with |μ| = 3 (three label-1 edges): coefficient of q^e is the
    // q^{e+3} coefficient of line⁴
    let l: Vec<Q> = (0..=line.order()).map(|e| line.coeff(e)).collect();
    let len = (order + 4) as usize;
    let fourth = convolve(&convolve(&l, &l, len), &convolve(&l, &l, len), len);
    for e in -3..=order {
        let want = &fourth[(e + 3) as usize];
        ensure(&glued.coeff(e) == want, || format!("conic q^{e}: {} vs {want}", glued.coeff(e)))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    for trial in 0..100 {
        let ord = rng.gen_range(2..9i64);
        let poly = |rng: &mut ChaCha8Rng| -> Vec<Q> { (0..=ord + 1).map(|_| q(rng.gen_range(-9..=9))).collect() };
        let (a, b) = (poly(&mut rng), poly(&mut rng));
        let theory = if rng.gen_bool(0.5) { Theory::Dt } else { Theory::Pt };
        let bc = |label: &str| BoundaryCondition { edge: "e".into(), partition: Partition::new(vec![1]).unwrap(), label: label.into() };
        let mut tables = VertexTable::new();
        tables.insert(TableKey::new("x", vec![bc("point")], vec![]), QSeries::from_poly(Var::Q, &a, ord + 1));
        tables.insert(TableKey::new("y", vec![bc("unit")], vec![]), QSeries::from_poly(Var::Q, &b, ord + 1));
        let job = GluingJob {
            theory,
            complexes: vec![JobComplex {
                id: "g".into(),
                vertices: vec!["x".into(), "y".into()],
                edges: vec![JobEdge { id: "e".into(), ends: ["x".into(), "y".into()], label: 1, pairing: None }],
                gluing: Gluing::All,
                record: None,
            }],
            tables,
            insertions: vec![],
            order: ord,
        };
        let out = assemble(&job).map_err(|e| format!("trial {trial}: {e}"))?;
        let prod = convolve(&a, &b, (ord + 2) as usize);
        for e in -1..=ord {
            let want = &prod[(e + 1) as usize];
            ensure(&out.coeff(e) == want, || format!("trial {trial}, q^{e}: {} vs {want}", out.coeff(e)))?;
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok("conic = line⁴·q^-3 through q^8; 100 label-1 collapses".into())
}

fn trivalent_consistency() -> Outcome {
    let start = Instant::now();
    let (a_path, b_path) = (fixture("trivalent-a.json"), fixture("trivalent-b.json"));
    let (code, rep) = cli(&["check", "--jobs", &a_path, &b_path]);
    ensure(code == 0 && rep["result"]["consistent"] == true, || format!("bundled jobs: exit {code}, {}", rep["result"]))?;
    let (mut a, b) = bundled::trivalent_jobs().map_err(|e| e.to_string())?;
    perturb_n22(&mut a, 3, q(1)).map_err(|e| e.to_string())?;
    let r = consistency_check(&a, &b).map_err(|e| e.to_string())?;
    let at = r.residual.as_ref().map(|x| x.exponent);
    ensure(!r.consistent && at == Some(3), || format!("perturbation not localized: {r:?}"))?;
    let tmp = std::env::temp_dir().join(format!("logdeg-acceptance-{}.json", std::process::id()));
    let m = logdeg_cli::Manifest::wrap(logdeg_cli::Kind::Job, &a).map_err(|e| e.to_string())?;
    std::fs::write(&tmp, serde_json::to_string(&m).unwrap()).map_err(|e| e.to_string())?;
    let (code, rep) = cli(&["check", "--jobs", &tmp.display().to_string(), &b_path]);
    let _ = std::fs::remove_file(&tmp);
    ensure(code == 1 && rep["result"]["residual"]["exponent"] == 3, || format!("CLI on perturbed job: exit {code}"))?;
    within(start, Duration::from_secs(5))?;
    Ok(format!("consistent through q^{}; perturbed N22 caught at q^3", r.order))
}

fn random_flat_map(rng: &mut ChaCha8Rng) -> (Cone, Vec<Vec<Z>>, Cone) {
    let n = rng.gen_range(1..=3usize);
    let f: Vec<i64> = loop {
        let f: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        if f.iter().any(|&x| x != 0) {
            break f;
        }
    };
    let k = rng.gen_range(1..=n + 1);
    let mut gens = Vec::new();
    while gens.len() < k {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        if v.iter().zip(&f).map(|(a, b)| a * b).sum::<i64>() > 0 {
            gens.push(zvec(&v));
        }
    }
    let sigma = Cone::from_generators("s", n, &gens).expect("pointed cone");
    (sigma, vec![zvec(&f)], Cone::new("t", 1, vec![zvec(&[1])]))
}

fn flatness_and_subdivision() -> Outcome {
    let start = Instant::now();
    let load = |name: &str| -> Result<ConeMorphism, String> {
        let f: MorphismFile = bundled::load(name).map_err(|e| e.to_string())?;
        f.to_morphism().map_err(|e| e.to_string())
    };
    let flat = load("flat-evaluation.json")?;
    let coupled = load("non-flat-evaluation.json")?;
    ensure(flat.is_combinatorially_flat(), || "the degeneration map is flat".into())?;
    ensure(!coupled.is_combinatorially_flat(), || "the coupled evaluation is not flat".into())?;
    let quadrant = ConeComplex::from_maximal(2, &[vec![zvec(&[1, 0]), zvec(&[0, 1])]]).unwrap();
    ensure(ConeMorphism::identity(&quadrant).is_combinatorially_flat(), || "identity".into())?;
    let diagonal = ConeComplex::from_maximal(2, &[vec![zvec(&[1, 1])]]).unwrap();
    let into = ConeMorphism::new(diagonal, quadrant.clone(), vec![zvec(&[1, 0]), zvec(&[0, 1])]).unwrap();
    ensure(!into.is_combinatorially_flat(), || "diagonal ray into the quadrant".into())?;
    let fl = flatten_evaluation(&coupled).map_err(|e| e.to_string())?;
    ensure(fl.morphism.is_combinatorially_flat(), || "flattening left the map non-flat".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    for trial in 0..200 {
        let (sigma, f, tau) = random_flat_map(&mut rng);
        let sub = relative_barycentric_subdivide(&sigma, &f, &tau).map_err(|e| format!("map {trial} ({:?}, {f:?}): {e}", sigma.rays))?;
        let bad = check_relative_subdivision(&sigma, &f, &tau, &sub);
        ensure(bad.is_empty(), || format!("map {trial}: {bad:?}"))?;
    }
    within(start, Duration::from_secs(30))?;
    Ok("fixtures classified; 200 random flat maps subdivided".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("combinatorial splitting bijection", splitting_bijection),
        ("MacMahon coefficients", macmahon_coefficients),
        ("degree-zero fixed point", degree_zero_fixed_point),
        ("tropical conic uniqueness", conic_uniqueness),
        ("tropical cubic count", cubic_count),
        ("Nakajima coefficient algebra", nakajima_algebra),
        ("GW/DT variable change", gw_dt_variable_change),
        ("degeneration-formula structure", degeneration_formula_structure),
        ("trivalent consistency", trivalent_consistency),
        ("flatness and subdivision", flatness_and_subdivision),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
