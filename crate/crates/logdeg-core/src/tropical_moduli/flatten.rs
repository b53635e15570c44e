//! Relative barycentric subdivision of a flat cone map and flattening of a
//! cone morphism by refining target and source.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{primitive_of_rational, to_q_vec, Q, Z};
use crate::cone_geometry::{cone_from_halfspaces, Cone, ConeComplex, ConeMorphism, Halfspaces};
use crate::error::{Error, Result};
use crate::linalg::{hermite, mat_vec_z, rank_z, ZMat};
use crate::lp::Constraints;

fn single_cone_complex(c: &Cone) -> Result<ConeComplex> {
    ConeComplex::from_maximal(c.ambient_rank, &[c.rays.clone()])
}

/// The ray-index sets of a maximal chain's cones, top face first.
fn maximal_chains(faces: &[Vec<usize>], top: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let facets: Vec<&Vec<usize>> = faces
        .iter()
        .filter(|f| !f.is_empty() && f.len() < top.len() && f.iter().all(|i| top.contains(i)))
        .filter(|f| {
            // maximal proper faces of `top` among the nonempty faces
            !faces.iter().any(|g| {
                g.len() > f.len() && g.len() < top.len() && f.iter().all(|i| g.contains(i)) && g.iter().all(|i| top.contains(i))
            })
        })
        .collect();
    if facets.is_empty() {
        return vec![vec![top.to_vec()]];
    }
    let mut out = Vec::new();
    for f in facets {
        for mut chain in maximal_chains(faces, f) {
            chain.insert(0, top.to_vec());
            out.push(chain);
        }
    }
    out
}

/// The subdivision of σ whose restriction to every fiber of F: σ → τ is the
/// barycentric subdivision of that fiber. Requires F flat with F(σ) = τ.
/// Supported when F is injective on σ (fibers are points) or dim τ ≤ 1; for
/// dim τ = 1 every ray of σ must map to a nonzero point (bounded fibers).
pub fn relative_barycentric_subdivide(sigma: &Cone, linear: &ZMat, tau: &Cone) -> Result<ConeComplex> {
    let source = single_cone_complex(sigma)?;
    let target = single_cone_complex(tau)?;
    let m = ConeMorphism::new(source.clone(), target.clone(), linear.clone())?;
    let top = source.cones.len() - 1;
    if !m.is_combinatorially_flat() || m.assignment[top] != target.cones.len() - 1 {
        return Err(Error::NotFlat(format!("map of cone {} is not flat onto τ", sigma.id)));
    }
    let images: ZMat = sigma.rays.iter().map(|r| mat_vec_z(linear, r)).collect();
    let injective = rank_z(&images, tau.ambient_rank) == sigma.dimension();
    if injective || tau.dimension() == 0 {
        return Ok(source);
    }
    if tau.dimension() > 1 {
        return Err(Error::Unsupported(
            "relative barycentric subdivision over a target cone of dimension ≥ 2 with positive-dimensional fibers".into(),
        ));
    }
    let u = &tau.rays[0];
    let k = u.iter().position(|x| !x.is_zero()).expect("nonzero ray");
    let ell: Vec<Q> = images.iter().map(|img| Q::new(img[k].clone(), u[k].clone())).collect();
    if ell.iter().any(|l| l.is_zero()) {
        return Err(Error::Unsupported(
            "relative barycentric subdivision with unbounded fibers (rays in the kernel)".into(),
        ));
    }
    let n = sigma.ambient_rank;
    let faces: Vec<Vec<usize>> = sigma.face_ray_sets();
    let all: Vec<usize> = (0..sigma.rays.len()).collect();
    let barycenter = |f: &[usize]| -> Vec<Z> {
        let mut p = vec![Q::zero(); n];
        for &i in f {
            for (x, y) in p.iter_mut().zip(&sigma.rays[i]) {
                *x += Q::from_integer(y.clone()) / &ell[i];
            }
        }
        primitive_of_rational(&p).expect("nonzero barycenter")
    };
    let maximal: Vec<Vec<Vec<Z>>> = maximal_chains(&faces, &all)
        .iter()
        .map(|chain| chain.iter().map(|f| barycenter(f)).collect())
        .collect();
    ConeComplex::from_maximal(n, &maximal)
}

/// Checks that `sub` subdivides σ (cones inside σ, maximal cones of full
/// dimension with disjoint interiors, closing up like a pseudomanifold whose
/// boundary lies on ∂σ) and that every cone of `sub` surjects onto a face of τ.
pub fn check_relative_subdivision(sigma: &Cone, linear: &ZMat, tau: &Cone, sub: &ConeComplex) -> Vec<String> {
    let mut out = Vec::new();
    let d = sigma.dimension();
    for c in &sub.cones {
        if c.rays.iter().any(|r| !sigma.contains(&to_q_vec(r))) {
            out.push(format!("cone {} leaves σ", c.id));
        }
    }
    let maxi = sub.maximal_cones();
    for &i in &maxi {
        if sub.cones[i].dimension() != d {
            out.push(format!("maximal cone {} has dimension {}", sub.cones[i].id, sub.cones[i].dimension()));
        }
    }
    for (a, &i) in maxi.iter().enumerate() {
        for &j in &maxi[a + 1..] {
            if relints_meet(&sub.cones[i], &sub.cones[j]) {
                out.push(format!("cones {} and {} overlap", sub.cones[i].id, sub.cones[j].id));
            }
        }
    }
    // pseudomanifold condition on codimension-one faces
    let hs = sigma.halfspaces();
    let mut facet_count: BTreeMap<usize, usize> = BTreeMap::new();
    for &i in &maxi {
        for j in sub.faces(i) {
            if sub.cones[j].dimension() + 1 == d {
                *facet_count.entry(j).or_insert(0) += 1;
            }
        }
    }
    for (&j, &cnt) in &facet_count {
        let on_boundary = hs.inequalities.iter().any(|h| {
            sub.cones[j].rays.iter().all(|r| r.iter().zip(h).map(|(a, b)| a * b).sum::<Z>().is_zero())
        });
        let expected = if on_boundary { 1 } else { 2 };
        if cnt != expected {
            out.push(format!("face {} is shared by {cnt} maximal cones (expected {expected})", sub.cones[j].id));
        }
    }
    if maxi.is_empty() && d > 0 {
        out.push("subdivision has no maximal cones".into());
    }
    match single_cone_complex(tau).and_then(|t| ConeMorphism::new(sub.clone(), t, linear.clone())) {
        Ok(m) => {
            for i in m.non_flat_cones() {
                out.push(format!("cone {} does not surject onto a face of τ", sub.cones[i].id));
            }
        }
        Err(e) => out.push(format!("not a map to τ: {e}")),
    }
    out
}

fn relints_meet(a: &Cone, b: &Cone) -> bool {
    let (ma, mb) = (a.rays.len(), b.rays.len());
    let n = a.ambient_rank;
    let mut c = Constraints::new(ma + mb);
    for k in 0..n {
        let mut row: Vec<Q> = a.rays.iter().map(|r| Q::from_integer(r[k].clone())).collect();
        row.extend(b.rays.iter().map(|r| -Q::from_integer(r[k].clone())));
        c.eq.push((row, Q::zero()));
    }
    for i in 0..ma + mb {
        let mut row = vec![Q::zero(); ma + mb];
        row[i] = Q::one();
        c.gt.push((row, Q::zero()));
    }
    c.is_strictly_feasible()
}

/// Output of [`flatten_evaluation`].
#[derive(Clone, Debug)]
pub struct Flattening {
    /// The refined morphism (source and target possibly subdivided).
    pub morphism: ConeMorphism,
    pub source_subdivided: bool,
    pub target_subdivided: bool,
    /// Target cones whose lattice must be replaced by a sublattice of this index
    /// for the fibers to be reduced (indices > 1 only).
    pub target_lattice_index: BTreeMap<String, Z>,
    /// Whether one sublattice per target cone makes every fiber reduced.
    pub reduced_after_refinement: bool,
}

#[derive(Serialize)]
pub struct FlatteningReport {
    pub flat: bool,
    pub source_subdivided: bool,
    pub target_subdivided: bool,
    pub source_cones: usize,
    pub target_cones: usize,
    pub target_lattice_index: BTreeMap<String, String>,
    pub reduced_after_refinement: bool,
}

impl Flattening {
    pub fn report(&self) -> FlatteningReport {
        FlatteningReport {
            flat: self.morphism.is_combinatorially_flat(),
            source_subdivided: self.source_subdivided,
            target_subdivided: self.target_subdivided,
            source_cones: self.morphism.source.cones.len(),
            target_cones: self.morphism.target.cones.len(),
            target_lattice_index: self.target_lattice_index.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
            reduced_after_refinement: self.reduced_after_refinement,
        }
    }
}

fn canonical_normal(h: &[Z]) -> Vec<Z> {
    match h.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => h.iter().map(|y| -y).collect(),
        _ => h.to_vec(),
    }
}

fn pieces_of(h: &Halfspaces, n: usize, dim: usize, cuts: &[Vec<Z>]) -> Result<Vec<Halfspaces>> {
    let mut pieces = vec![h.clone()];
    for cut in cuts {
        let mut next = Vec::new();
        for p in pieces {
            for sign in [1i64, -1] {
                let mut q = p.clone();
                q.inequalities.push(cut.iter().map(|x| x * Z::from(sign)).collect());
                let rays = cone_from_halfspaces(&q, n)?;
                if Cone::new("", n, rays).dimension() == dim {
                    next.push(q);
                }
            }
        }
        pieces = next;
    }
    Ok(pieces)
}

/// Makes a cone morphism combinatorially flat: the target is subdivided by the
/// hyperplanes spanned by images of source cones, the source by pulling the
/// refined target back, and the target lattices needed for reduced fibers are
/// recorded. An already flat morphism is returned unchanged.
pub fn flatten_evaluation(f: &ConeMorphism) -> Result<Flattening> {
    if f.is_combinatorially_flat() {
        return finish(f.clone(), false, false);
    }
    let (ns, nt) = (f.source.lattice_rank, f.target.lattice_rank);
    let mut cuts: BTreeSet<Vec<Z>> = BTreeSet::new();
    for c in &f.source.cones {
        let img: ZMat = c.rays.iter().map(|r| mat_vec_z(&f.linear, r)).collect();
        if img.iter().all(|v| v.iter().all(|x| x.is_zero())) {
            continue;
        }
        let ic = Cone::from_generators("img", nt, &img)?;
        let hs = ic.halfspaces();
        for h in hs.equations.iter().chain(&hs.inequalities) {
            cuts.insert(canonical_normal(h));
        }
    }
    let cuts: Vec<Vec<Z>> = cuts.into_iter().collect();
    let mut target_pieces: Vec<Halfspaces> = Vec::new();
    let mut target_max: Vec<Vec<Vec<Z>>> = Vec::new();
    for &t in &f.target.maximal_cones() {
        let tc = &f.target.cones[t];
        for p in pieces_of(&tc.halfspaces(), nt, tc.dimension(), &cuts)? {
            target_max.push(cone_from_halfspaces(&p, nt)?);
            target_pieces.push(p);
        }
    }
    let target = ConeComplex::from_maximal(nt, &target_max)?;
    let target_subdivided = target.cones.len() != f.target.cones.len();
    // pull back: σ ∩ F⁻¹(π) for every refined target cone π
    let pull = |h: &[Z]| -> Vec<Z> { (0..ns).map(|j| (0..nt).map(|i| &f.linear[i][j] * &h[i]).sum()).collect() };
    let mut source_max: BTreeSet<Vec<Vec<Z>>> = BTreeSet::new();
    for &s in &f.source.maximal_cones() {
        let sc = &f.source.cones[s];
        let shs = sc.halfspaces();
        for tc in &target.cones {
            let ths = tc.halfspaces();
            let mut q = shs.clone();
            q.equations.extend(ths.equations.iter().map(|h| pull(h)).filter(|v| v.iter().any(|x| !x.is_zero())));
            q.inequalities.extend(ths.inequalities.iter().map(|h| pull(h)).filter(|v| v.iter().any(|x| !x.is_zero())));
            let mut rays = cone_from_halfspaces(&q, ns)?;
            if Cone::new("", ns, rays.clone()).dimension() == sc.dimension() {
                rays.sort();
                source_max.insert(rays);
            }
        }
    }
    let source_max: Vec<Vec<Vec<Z>>> = source_max.into_iter().collect();
    let source = ConeComplex::from_maximal(ns, &source_max)?;
    let source_subdivided = source.maximal_cones().len() != f.source.maximal_cones().len();
    let m = ConeMorphism::new(source, target, f.linear.clone())?;
    if !m.is_combinatorially_flat() {
        return Err(Error::Computation("refinement did not produce a flat morphism".into()));
    }
    finish(m, source_subdivided, target_subdivided)
}

fn finish(m: ConeMorphism, source_subdivided: bool, target_subdivided: bool) -> Result<Flattening> {
    let nt = m.target.lattice_rank;
    let mut index: BTreeMap<String, Z> = BTreeMap::new();
    let mut lattices: BTreeMap<usize, BTreeSet<ZMat>> = BTreeMap::new();
    for i in 0..m.source.cones.len() {
        let t = m.assignment[i];
        if let Some(k) = m.lattice_index(i) {
            let e = index.entry(m.target.cones[t].id.clone()).or_insert_with(Z::one);
            *e = e.lcm(&k);
            let basis: ZMat = m.source.cones[i].lattice_basis().iter().map(|b| mat_vec_z(&m.linear, b)).collect();
            lattices.entry(t).or_default().insert(hermite(&basis, nt));
        }
    }
    index.retain(|_, k| !k.is_one());
    let reduced_after_refinement = lattices.values().all(|s| s.len() <= 1)
        && (0..m.source.cones.len()).all(|i| m.lattice_index(i).is_some());
    Ok(Flattening {
        morphism: m,
        source_subdivided,
        target_subdivided,
        target_lattice_index: index,
        reduced_after_refinement,
    })
}
