//! The bundled fixtures are exactly what the core constructors produce.
//! Run with `LOGDEG_WRITE_FIXTURES=1` to regenerate the files.

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use logdeg_cli::bundled::FIXTURES;
use logdeg_cli::files::{MorphismFile, PointsFile};
use logdeg_cli::manifest::parse_document;
use logdeg_cli::{Kind, Manifest};
use logdeg_core::arith::{qvec, zvec};
use logdeg_core::assembler::examples::{sample_line_series, trivalent_jobs, TrivalentSeries, TrivalentVariant};
use logdeg_core::cone_geometry::{ConeComplex, ConeMorphism};
use logdeg_core::degeneration_combinatorics::fixtures::{
    generic_points, p2_degeneration, sample_vertical, sampling_height, triangle,
};
use logdeg_core::one_complexes::{one_complex, ChowDecoration, OneComplexDocument};

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn p2_fan() -> ConeComplex {
    let (x, y, w) = (zvec(&[1, 0]), zvec(&[0, 1]), zvec(&[-1, -1]));
    ConeComplex::from_maximal(2, &[vec![x.clone(), y.clone()], vec![y, w.clone()], vec![w, x]]).unwrap()
}

fn quadrant() -> ConeComplex {
    ConeComplex::from_maximal(2, &[vec![zvec(&[1, 0]), zvec(&[0, 1])]]).unwrap()
}

/// Trivalent fixture truncation order.
const TRIVALENT_ORDER: i64 = 10;
/// Line series fixture order.
const LINE_ORDER: i64 = 12;

fn generated() -> Vec<(&'static str, Manifest)> {
    let mut out = Vec::new();
    let mut put = |name: &'static str, m: Manifest| out.push((name, m));
    let d = p2_degeneration();
    put("p2.fan.json", Manifest::wrap(Kind::Fan, &p2_fan().to_file()).unwrap());
    put("p2.degeneration.json", Manifest::wrap(Kind::Degeneration, &d.to_file()).unwrap());
    for (name, n) in [("points2.json", 2), ("points5.json", 5), ("points8.json", 8)] {
        put(name, Manifest::wrap(Kind::Points, &PointsFile { points: generic_points(n) }).unwrap());
    }
    put("line-series.json", Manifest::wrap(Kind::Series, &sample_line_series(LINE_ORDER).unwrap().to_repr()).unwrap());
    let s = TrivalentSeries::synthetic(TRIVALENT_ORDER + 2).unwrap();
    let (a, b) = trivalent_jobs(&s, TrivalentVariant::MaximalTangency, TRIVALENT_ORDER).unwrap();
    put("trivalent-a.json", Manifest::wrap(Kind::Job, &a).unwrap());
    put("trivalent-b.json", Manifest::wrap(Kind::Job, &b).unwrap());
    put("flat-evaluation.json", Manifest::wrap(Kind::Morphism, &MorphismFile::from_morphism(&d.pi)).unwrap());
    // (ℓ, a) ↦ (a, a): three parallel ends whose heights are coupled by a
    // cycle land on the diagonal of a two-dimensional target cone
    let coupled = ConeMorphism::new(quadrant(), quadrant(), vec![zvec(&[0, 1]), zvec(&[0, 1])]).unwrap();
    put("non-flat-evaluation.json", Manifest::wrap(Kind::Morphism, &MorphismFile::from_morphism(&coupled)).unwrap());
    let line = one_complex(2, &[qvec(&[0, 0])], &[], &[(0, zvec(&[1, 0])), (0, zvec(&[0, 1])), (0, zvec(&[-1, -1]))]).unwrap();
    let mut doc = OneComplexDocument::new(line.clone());
    doc.ambient = Some(p2_fan().to_file());
    doc.chow = Some(ChowDecoration::trivial(&line, 0));
    put("tropical-line.json", Manifest::wrap(Kind::OneComplex, &doc).unwrap());
    let fx = triangle();
    put("triangle.degeneration.json", Manifest::wrap(Kind::Degeneration, &fx.degeneration.to_file()).unwrap());
    put("triangle.record.json", Manifest::wrap(Kind::Record, &fx.gamma).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = (0..1000).find_map(|_| sample_vertical(&fx, &mut rng, &sampling_height())).unwrap();
    put("triangle.vertical.json", Manifest::wrap(Kind::VerticalComplex, &g).unwrap());
    let cmp = logdeg_cli::bundled::sine_comparison(logdeg_cli::bundled::SINE_ORDER).unwrap();
    put("sine-comparison.json", Manifest::wrap(Kind::Comparison, &cmp).unwrap());
    out
}

#[test]
fn bundled_fixtures_match_their_constructors() {
    let write = std::env::var_os("LOGDEG_WRITE_FIXTURES").is_some();
    let gen = generated();
    assert_eq!(gen.len(), FIXTURES.len());
    for (name, m) in gen {
        let path = fixture_dir().join(name);
        if write {
            let mut text = serde_json::to_string_pretty(&m).unwrap();
            text.push('\n');
            std::fs::write(&path, text).unwrap();
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let on_disk: Manifest = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(on_disk, m, "{name} is stale; regenerate with LOGDEG_WRITE_FIXTURES=1");
        let (_, kind, embedded) = FIXTURES.iter().find(|(n, _, _)| *n == name).unwrap();
        assert_eq!(*kind, m.kind);
        parse_document::<serde_json::Value>(embedded, *kind, name).unwrap();
    }
}
