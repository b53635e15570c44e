//! Degenerations Σ_Y → R_{≥0} and rigid decorated 1-complexes in their slices.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{dot_z, scale_q, to_q_vec, zq, Q, Z};
use crate::cone_geometry::{slice, star, star_projection, ConeComplex, ConeMorphism, FanFile, PolyhedralComplex};
use crate::error::{Error, Result};
use crate::linalg::{solve_q, to_qmat, ZMat};
use crate::one_complexes::{ChowDecoration, HilbertDecoration, OneComplex};
use crate::tropical_moduli::{realized_dimension, type_of};

/// A cone complex with a map to R_{≥0} given by the last coordinate.
#[derive(Clone, Debug)]
pub struct DegenerationComplex {
    pub total: ConeComplex,
    pub pi: ConeMorphism,
    /// Ray cones not contracted by π, in cone order.
    pub vertical_rays: Vec<usize>,
    /// Ray cones contracted by π, in cone order.
    pub horizontal_rays: Vec<usize>,
    /// The slice at height 1.
    pub slice: PolyhedralComplex,
}

/// File form: a fan whose last coordinate is the map to R_{≥0}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerationFile {
    pub fan: FanFile,
    /// Optional explicit functional (empty = last coordinate); only the last
    /// coordinate is supported.
    #[serde(default, with = "crate::arith::serde_zvec", skip_serializing_if = "Vec::is_empty")]
    pub pi: Vec<Z>,
}

impl DegenerationComplex {
    pub fn new(total: ConeComplex) -> Result<Self> {
        let k = total.lattice_rank;
        if k < 2 {
            return Err(Error::Invalid("a degeneration needs lattice rank at least 2".into()));
        }
        let errs = total.validate();
        if !errs.is_empty() {
            return Err(Error::Invalid(errs.join("; ")));
        }
        let mut functional = vec![Z::zero(); k];
        functional[k - 1] = Z::from(1);
        let pi = ConeMorphism::to_ray(&total, &functional)?;
        let mut vertical_rays = Vec::new();
        let mut horizontal_rays = Vec::new();
        for i in total.ray_cones() {
            if total.cones[i].rays[0][k - 1].is_positive() {
                vertical_rays.push(i);
            } else {
                horizontal_rays.push(i);
            }
        }
        if vertical_rays.is_empty() {
            return Err(Error::Invalid("no ray maps onto R_{≥0}".into()));
        }
        // a cone not contracted by π must surject onto R_{≥0}
        for (i, c) in total.cones.iter().enumerate() {
            let contracted = c.rays.iter().all(|r| r[k - 1].is_zero());
            if !contracted && !pi.cone_surjects(i) {
                return Err(Error::NotFlat(format!("cone {} does not surject onto R_{{≥0}}", c.id)));
            }
        }
        let slice = slice(&total, &pi, &Q::from_integer(Z::from(1)))?;
        Ok(DegenerationComplex {
            total,
            pi,
            vertical_rays,
            horizontal_rays,
            slice,
        })
    }

    pub fn from_file(f: &DegenerationFile) -> Result<Self> {
        let total = ConeComplex::from_file(&f.fan)?;
        if !f.pi.is_empty() {
            let p = &f.pi;
            let k = total.lattice_rank;
            let last = p.len() == k && p.iter().enumerate().all(|(i, x)| *x == Z::from(u8::from(i + 1 == k)));
            if !last {
                return Err(Error::Unsupported(
                    "the map to R_{≥0} must be the last coordinate; change coordinates first".into(),
                ));
            }
        }
        Self::new(total)
    }

    pub fn to_file(&self) -> DegenerationFile {
        DegenerationFile {
            fan: self.total.to_file(),
            pi: vec![],
        }
    }

    pub fn rank(&self) -> usize {
        self.total.lattice_rank
    }

    pub fn height(&self, x: &[Q]) -> Q {
        x[self.rank() - 1].clone()
    }

    pub fn ray(&self, cone: usize) -> &[Z] {
        &self.total.cones[cone].rays[0]
    }

    /// Cone index of the vertical ray with this id.
    pub fn vertical_ray(&self, id: &str) -> Result<usize> {
        let i = self.total.index_of(id)?;
        if !self.vertical_rays.contains(&i) {
            return Err(Error::Invalid(format!("'{id}' is not a vertical ray")));
        }
        Ok(i)
    }

    /// The slice vertex r/π(r) of a vertical ray.
    pub fn slice_vertex(&self, ray_cone: usize) -> Vec<Q> {
        let r = self.ray(ray_cone);
        let h = zq(&r[self.rank() - 1]);
        scale_q(&to_q_vec(r), &(Q::from_integer(Z::from(1)) / h))
    }

    /// The cone spanned by exactly the given rays, if it exists.
    pub fn cone_spanned(&self, rays: &[usize]) -> Option<usize> {
        let want: Vec<&Vec<Z>> = rays.iter().map(|&i| &self.total.cones[i].rays[0]).collect();
        self.total.cones.iter().position(|c| {
            c.rays.len() == want.len() && want.iter().all(|r| c.rays.contains(r))
        })
    }

    /// Projection to the star of a cone and the star complex itself.
    pub fn star_of(&self, cone: usize) -> Result<(ZMat, ConeComplex)> {
        Ok((star_projection(&self.total, cone), star(&self.total, &self.total.cones[cone].id)?))
    }

    /// The unique point x with P·x = y and π(x) = t, for the projection P to
    /// the star of a vertical ray.
    pub fn lift(&self, projection: &ZMat, y: &[Q], t: &Q) -> Result<Vec<Q>> {
        let k = self.rank();
        let mut m = to_qmat(projection);
        let mut unit = vec![Q::zero(); k];
        unit[k - 1] = Q::from_integer(Z::from(1));
        m.push(unit);
        let mut rhs = y.to_vec();
        rhs.push(t.clone());
        solve_q(&m, &rhs, k).ok_or_else(|| Error::Computation("star projection is not transverse to the slice".into()))
    }

    /// Horizontal ray directions with their last coordinate dropped.
    pub fn recession_directions(&self) -> Vec<Vec<Z>> {
        let k = self.rank();
        self.horizontal_rays.iter().map(|&i| self.ray(i)[..k - 1].to_vec()).collect()
    }

    /// π of an integer vector.
    pub fn pi_of(&self, v: &[Z]) -> Z {
        let mut e = vec![Z::zero(); self.rank()];
        e[self.rank() - 1] = Z::from(1);
        dot_z(&e, v)
    }
}

/// Dimension report of the parameter cone of a rigid record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityCertificate {
    pub variables: usize,
    pub equation_rank: usize,
    pub dimension: i64,
}

/// A rigid decorated 1-complex in the height-1 slice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidComplexRecord {
    /// Positions in the ambient lattice coordinates, at height 1.
    pub gamma: OneComplex,
    pub decoration: ChowDecoration,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hilbert: Option<HilbertDecoration>,
    /// For records built on slice vertices: the vertical ray under each vertex.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertex_rays: Vec<String>,
    /// Point conditions the record passes through.
    #[serde(default, with = "crate::arith::serde_qvecs", skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<Q>>,
    pub certificate: RigidityCertificate,
    /// Product of trivalent vertex multiplicities for transverse genus-0 records,
    /// zero otherwise; present for enumerated plane curves.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<u64>,
}

impl RigidComplexRecord {
    /// A record whose vertices sit on vertical rays of the degeneration and whose
    /// edges run along slice edges. The rigidity certificate pins the height of
    /// the first vertex (the only remaining freedom being dilation).
    pub fn on_slice(
        d: &DegenerationComplex,
        vertex_rays: &[&str],
        edges: &[(usize, usize)],
        rays: &[(usize, Vec<Z>)],
    ) -> Result<Self> {
        let k = d.rank();
        let mut g = OneComplex::new(k);
        let mut cones = Vec::with_capacity(vertex_rays.len());
        for id in vertex_rays {
            let c = d.vertical_ray(id)?;
            cones.push(c);
            g.add_vertex(d.slice_vertex(c));
        }
        for &(a, b) in edges {
            if a >= cones.len() || b >= cones.len() {
                return Err(Error::Invalid(format!("edge {a}-{b} names a missing vertex")));
            }
            if d.cone_spanned(&[cones[a], cones[b]]).is_none() {
                return Err(Error::Invalid(format!("edge {a}-{b} is not an edge of the slice")));
            }
            g.add_edge(a, b)?;
        }
        for (v, dir) in rays {
            if *v >= cones.len() {
                return Err(Error::Invalid(format!("ray at missing vertex {v}")));
            }
            let h = d.total.ray_index(dir).filter(|i| d.horizontal_rays.contains(i));
            let ok = h.is_some_and(|h| d.cone_spanned(&[cones[*v], h]).is_some());
            if !ok {
                return Err(Error::Invalid(format!("ray at vertex {v} is not an unbounded slice edge")));
            }
            g.add_ray(*v, dir.clone());
        }
        g.locate_faces(&d.total);
        let errs = g.validate(Some(&d.total));
        if !errs.is_empty() {
            return Err(Error::Invalid(errs.join("; ")));
        }
        let decoration = ChowDecoration::trivial(&g, 0);
        let pin = if g.vertices.is_empty() { vec![] } else { vec![g.vertices[0].position.clone()] };
        let t = type_of(&g, Some(&d.total), &pin)?;
        let (variables, equation_rank, dimension) = realized_dimension(&t, Some(&d.total))?;
        Ok(RigidComplexRecord {
            gamma: g,
            decoration,
            hilbert: None,
            vertex_rays: vertex_rays.iter().map(|s| s.to_string()).collect(),
            points: vec![],
            certificate: RigidityCertificate {
                variables,
                equation_rank,
                dimension,
            },
            multiplicity: None,
        })
    }

    pub fn is_rigid(&self) -> bool {
        self.certificate.dimension == 0
    }

    /// Cone indices of the vertical rays under the vertices.
    pub fn vertex_cones(&self, d: &DegenerationComplex) -> Result<Vec<usize>> {
        if self.vertex_rays.len() != self.gamma.vertices.len() {
            return Err(Error::Invalid("record does not sit on slice vertices".into()));
        }
        self.vertex_rays.iter().map(|id| d.vertical_ray(id)).collect()
    }
}
