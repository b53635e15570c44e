//! One function per subcommand; each returns the structured result.

use std::path::Path;

use serde::Serialize;
use serde_json::json;

use logdeg_core::arith::{fmt_q, parse_q};
use logdeg_core::assembler::{assemble_terms, compare_series, cycle_factors, GluingJob};
use logdeg_core::cone_geometry::{slice, star, ConeComplex, FanFile};
use logdeg_core::degeneration_combinatorics::{
    cut, enumerate_rigid, glue, total_multiplicity, DegenerationComplex, DegenerationFile, Part, RigidComplexRecord,
    VerticalComplex,
};
use logdeg_core::one_complexes::{check_balancing_decorated, retract_decorated, ChowDecoration, OneComplexDocument};
use logdeg_core::partition_algebra::{diagonal_decomposition, gamma_inverse_check, PairingTable};
use logdeg_core::series_engine::{gw_dt_compare, macmahon, macmahon_power, QSeries, RationalFunction};
use logdeg_core::tropical_moduli::{flatten_evaluation, is_rigid, realized_dimension, type_of};

use crate::files::{ComparisonFile, MorphismFile, PointsFile};
use crate::manifest::{Kind, Manifest};
use crate::{
    bundled, suites, AssembleArgs, CheckArgs, CliError, CliResult, Command, Context, DegCmd, FanCmd, ModuliCmd,
    NakCmd, OcCmd, OutArg, Outcome, SeriesCmd,
};

pub(crate) fn dispatch(cmd: &Command, ctx: &mut Context) -> CliResult<Outcome> {
    match cmd {
        Command::Fan(c) => fan(c, ctx),
        Command::Oc(c) => oc(c, ctx),
        Command::Moduli(c) => moduli(c, ctx),
        Command::Deg(c) => deg(c, ctx),
        Command::Nak(c) => nak(c, ctx),
        Command::Series(c) => series(c, ctx),
        Command::Assemble(a) => assemble(a, ctx),
        Command::Check(a) => check(a, ctx),
        Command::Examples(a) => suites::run(a, ctx),
    }
}

/// Wraps `payload` in an envelope, writes it when `--out` is given, and
/// returns the envelope for the report.
fn emit<T: Serialize>(kind: Kind, payload: &T, out: &OutArg) -> CliResult<Manifest> {
    let m = Manifest::wrap(kind, payload)?;
    if let Some(path) = &out.out {
        write_manifest(path, &m)?;
    }
    Ok(m)
}

pub fn write_manifest(path: &Path, m: &Manifest) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(m).map_err(|e| CliError::computation(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::computation(format!("{}: {e}", path.display())))
}

fn read_fan(path: &Path, ctx: &mut Context) -> CliResult<ConeComplex> {
    let f: FanFile = ctx.read(path, Kind::Fan)?;
    Ok(ConeComplex::from_file(&f)?)
}

fn read_degeneration(path: &Path, ctx: &mut Context) -> CliResult<DegenerationComplex> {
    let f: DegenerationFile = ctx.read(path, Kind::Degeneration)?;
    Ok(DegenerationComplex::from_file(&f)?)
}

fn fan(cmd: &FanCmd, ctx: &mut Context) -> CliResult<Outcome> {
    match cmd {
        FanCmd::Validate { file } => {
            let c = read_fan(file, ctx)?;
            let violations = c.validate();
            Outcome::check(
                json!({
                    "valid": violations.is_empty(),
                    "violations": violations,
                    "lattice_rank": c.lattice_rank,
                    "dimension": c.dimension(),
                    "cones": c.cones.len(),
                    "maximal_cones": c.maximal_cones().len(),
                }),
                violations.is_empty(),
            )
        }
        FanCmd::Star { file, cone, out } => {
            let c = read_fan(file, ctx)?;
            let s = star(&c, cone)?;
            let m = emit(Kind::Fan, &s.to_file(), out)?;
            Outcome::ok(json!({
                "cone": cone,
                "lattice_rank": s.lattice_rank,
                "maximal_cones": s.maximal_cones().len(),
                "fan": m,
            }))
        }
        FanCmd::Slice { file, height } => {
            let d = read_degeneration(file, ctx)?;
            let h = parse_q(height)?;
            let p = slice(&d.total, &d.pi, &h)?;
            Outcome::ok(json!({
                "height": fmt_q(&h),
                "vertices": p.vertices.len(),
                "bounded_edges": p.bounded_edges(),
                "unbounded_edges": p.unbounded_edges(),
                "complex": p,
            }))
        }
    }
}

fn read_one_complex(path: &Path, ctx: &mut Context) -> CliResult<(OneComplexDocument, Option<ConeComplex>)> {
    let doc: OneComplexDocument = ctx.read(path, Kind::OneComplex)?;
    let ambient = doc.ambient_complex()?;
    Ok((doc, ambient))
}

fn chow_or_trivial(doc: &OneComplexDocument) -> ChowDecoration {
    doc.chow.clone().unwrap_or_else(|| ChowDecoration::trivial(&doc.complex, 0))
}

fn oc(cmd: &OcCmd, ctx: &mut Context) -> CliResult<Outcome> {
    match cmd {
        OcCmd::Validate { file } => {
            let (doc, _) = read_one_complex(file, ctx)?;
            let violations = doc.validate()?;
            Outcome::check(
                json!({
                    "valid": violations.is_empty(),
                    "violations": violations,
                    "vertices": doc.complex.vertices.len(),
                    "edges": doc.complex.edges.len(),
                    "rays": doc.complex.rays.len(),
                }),
                violations.is_empty(),
            )
        }
        OcCmd::Retract { file, out } => {
            let (doc, ambient) = read_one_complex(file, ctx)?;
            let deco = chow_or_trivial(&doc);
            let (g, d) = retract_decorated(&doc.complex, &deco, ambient.as_ref());
            let removed = doc.complex.vertices.len() - g.vertices.len();
            let retracted = OneComplexDocument {
                ambient: doc.ambient.clone(),
                complex: g,
                chow: Some(d),
                hilbert: None,
            };
            let m = emit(Kind::OneComplex, &retracted, out)?;
            Outcome::ok(json!({ "removed_vertices": removed, "complex": m }))
        }
        OcCmd::Balance { file } => {
            let (doc, ambient) = read_one_complex(file, ctx)?;
            let deco = chow_or_trivial(&doc);
            let bad = check_balancing_decorated(&doc.complex, &deco, ambient.as_ref());
            Outcome::check(json!({ "balanced": bad.is_empty(), "unbalanced_vertices": bad }), bad.is_empty())
        }
    }
}

fn moduli(cmd: &ModuliCmd, ctx: &mut Context) -> CliResult<Outcome> {
    match cmd {
        ModuliCmd::Dim { file } | ModuliCmd::Rigid { file } => {
            let (doc, ambient) = read_one_complex(file, ctx)?;
            let t = type_of(&doc.complex, ambient.as_ref(), &[])?;
            let (variables, rank, dimension) = realized_dimension(&t, ambient.as_ref())?;
            let mut result = json!({
                "variables": variables,
                "equation_rank": rank,
                "dimension": dimension,
            });
            if matches!(cmd, ModuliCmd::Rigid { .. }) {
                result["rigid"] = json!(is_rigid(&t, ambient.as_ref())?);
            }
            Outcome::ok(result)
        }
        ModuliCmd::Flatten { file, out } => {
            let mf: MorphismFile = ctx.read(file, Kind::Morphism)?;
            let m = mf.to_morphism()?;
            let non_flat: Vec<String> = m.non_flat_cones().iter().map(|&i| m.source.cones[i].id.clone()).collect();
            let fl = flatten_evaluation(&m)?;
            let emitted = emit(Kind::Morphism, &MorphismFile::from_morphism(&fl.morphism), out)?;
            Outcome::ok(json!({
                "input_flat": non_flat.is_empty(),
                "input_non_flat_cones": non_flat,
                "flattening": fl.report(),
                "morphism": emitted,
            }))
        }
    }
}

fn deg(cmd: &DegCmd, ctx: &mut Context) -> CliResult<Outcome> {
    match cmd {
        DegCmd::Rigid { file, degree, points, balanced } => {
            let d = read_degeneration(file, ctx)?;
            let pts: PointsFile = ctx.read(points, Kind::Points)?;
            let records = enumerate_rigid(&d, degree, &pts.points, *balanced)?;
            Outcome::ok(json!({
                "degree": degree,
                "points": pts.points.len(),
                "count": records.len(),
                "total_multiplicity": total_multiplicity(&records),
                "records": records,
            }))
        }
        DegCmd::Cut { file, record, complex, out } => {
            let d = read_degeneration(file, ctx)?;
            let gamma: RigidComplexRecord = ctx.read(record, Kind::Record)?;
            let g: VerticalComplex = ctx.read(complex, Kind::VerticalComplex)?;
            let c = cut(&d, &gamma, &g)?;
            let m = emit(Kind::Parts, &c.parts, out)?;
            Outcome::ok(json!({
                "parts": m,
                "evaluations": c.evaluations,
                "on_diagonal": c.evaluations.iter().all(|e| e.on_diagonal()),
            }))
        }
        DegCmd::Glue { file, record, parts, out } => {
            let d = read_degeneration(file, ctx)?;
            let gamma: RigidComplexRecord = ctx.read(record, Kind::Record)?;
            let ps: Vec<Part> = ctx.read(parts, Kind::Parts)?;
            let g = glue(&d, &gamma, &ps)?;
            let m = emit(Kind::VerticalComplex, &g, out)?;
            Outcome::ok(json!({ "complex": m }))
        }
    }
}

fn nak(cmd: &NakCmd, ctx: &mut Context) -> CliResult<Outcome> {
    match cmd {
        NakCmd::Diag { sizes, pairing } => {
            let table = match pairing {
                Some(p) => ctx.read::<PairingTable>(p, Kind::Pairing)?,
                None => PairingTable::default(),
            };
            let v = diagonal_decomposition(sizes, &[table])?;
            let terms: Vec<_> = v
                .iter()
                .map(|((l, r), c)| json!({ "left": l.to_string(), "right": r.to_string(), "coefficient": fmt_q(c) }))
                .collect();
            Outcome::ok(json!({ "sizes": sizes, "terms": terms }))
        }
        NakCmd::Invcheck { sizes } => {
            if sizes.is_empty() || sizes.contains(&0) {
                return Err(CliError::validation("--sizes needs positive entries"));
            }
            let ok = gamma_inverse_check(sizes);
            Outcome::check(json!({ "sizes": sizes, "holds": ok }), ok)
        }
    }
}

fn series(cmd: &SeriesCmd, ctx: &mut Context) -> CliResult<Outcome> {
    match cmd {
        SeriesCmd::Macmahon { order, power, minus_q } => {
            let s = if *minus_q { macmahon_power(*power, *order)? } else { macmahon(*order)?.pow(*power)? };
            let coefficients: Vec<String> = (0..=*order).map(|n| fmt_q(&s.coeff(n))).collect();
            Outcome::ok(json!({ "order": order, "power": power, "variable": if *minus_q { "-q" } else { "q" }, "coefficients": coefficients }))
        }
        SeriesCmd::GwdtCheck { input } => {
            let file = match input {
                Some(p) => ctx.read::<ComparisonFile>(p, Kind::Comparison)?,
                None => bundled::sine_comparison(bundled::SINE_ORDER)?,
            };
            let pt = RationalFunction::from_repr(&file.pt)?;
            let gw = QSeries::from_repr(&file.gw)?;
            let r = gw_dt_compare(&pt, &gw, file.d_beta, file.excess, file.u_order)?;
            let mismatch = r
                .first_mismatch
                .as_ref()
                .map(|(e, a, b)| json!({ "exponent": e, "pt_side": a, "gw_side": b }));
            Outcome::check(
                json!({
                    "pt": pt.to_string(),
                    "equal": r.equal,
                    "order_checked": r.order_checked,
                    "first_mismatch": mismatch,
                }),
                r.equal,
            )
        }
    }
}

fn assemble(a: &AssembleArgs, ctx: &mut Context) -> CliResult<Outcome> {
    let job: GluingJob = ctx.read(&a.job, Kind::Job)?;
    let terms = assemble_terms(&job)?;
    let mut total = QSeries::zero(job.theory.variable(), job.order);
    for t in &terms {
        total = total.add(&t.series)?;
    }
    let mut result = json!({
        "theory": job.theory,
        "order": job.order,
        "term_count": terms.len(),
        "series": total.to_repr(),
        "display": total.to_string(),
    });
    if a.terms {
        result["terms"] = json!(terms.iter().map(|t| t.report()).collect::<Vec<_>>());
    }
    if a.show_cycle_factors {
        result["cycle_factors"] = json!(cycle_factors(&job));
    }
    Outcome::ok(result)
}

fn check(a: &CheckArgs, ctx: &mut Context) -> CliResult<Outcome> {
    let [pa, pb] = a.jobs.as_slice() else {
        return Err(CliError::validation("--jobs takes exactly two files"));
    };
    let ja: GluingJob = ctx.read(pa, Kind::Job)?;
    let jb: GluingJob = ctx.read(pb, Kind::Job)?;
    let (sa, sb) = (logdeg_core::assembler::assemble(&ja)?, logdeg_core::assembler::assemble(&jb)?);
    let r = compare_series(&sa, &sb)?;
    let consistent = r.consistent;
    Outcome::check(
        json!({
            "consistent": consistent,
            "order": r.order,
            "residual": r.residual,
            "left": sa.to_string(),
            "right": sb.to_string(),
        }),
        consistent,
    )
}
