//! Deformed realizations of `wp(p, 1)` and of its prism whose surface faces
//! survive the projection to the first four coordinates, with exact
//! certificates, and the pipelines producing surfaces in R^4 and R^3.

mod certify;
mod dual;
mod pipeline;

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, pow, rat, serde_rational, Rational};
use crate::polytope::{make_polygon, vertices_from_bases, Facet, FacetLabel, HPolytope, Sign, Vertex};
use crate::wpcombin::{wp_vertices, FaceVector, WpParams};

pub use certify::{
    check_lower_hull, check_preserved, certify_surface, FaceCertificate, LowerHullCheck, PreservationReport,
};
pub use dual::{build_prism_pipeline, DualPipeline, DualReport};
pub use pipeline::{check_preimages, project_surface, realize_surface, Realization, Target};

/// Number of coordinates kept by the projection.
pub const PROJECTION_DIM: usize = 4;
/// Retries of the certificate, halving `eps` and quadrupling `M`.
pub const MAX_ESCALATIONS: usize = 8;

pub fn default_eps() -> Rational {
    rat(1, 10)
}

pub fn default_m() -> Rational {
    int(64)
}

pub fn default_delta() -> Rational {
    rat(1, 4)
}

/// A face of the deformed polytope: a wedge-product face vector, and for
/// the prism optionally one of the two lids.
pub type PrismFace = (FaceVector, Option<Sign>);

/// The rescaled deformation of `wp(p, 1)` (or of its prism when `delta` is
/// set) in variables `(x_0, x_1, y'_0, ..., y'_{p-1}[, z])`.
#[derive(Clone, Debug, Serialize)]
pub struct DeformedWp {
    pub p: usize,
    #[serde(with = "serde_rational")]
    pub eps: Rational,
    #[serde(rename = "M", with = "serde_rational")]
    pub m: Rational,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub delta: Option<Rational>,
    /// Escalation steps taken before the certificate succeeded.
    pub escalations: usize,
    /// Rows before division by their right-hand sides.
    #[serde(skip)]
    raw: Vec<Vec<Rational>>,
    #[serde(skip)]
    rhs: Vec<Rational>,
    pub system: HPolytope,
    #[serde(skip)]
    faces: Vec<PrismFace>,
    #[serde(skip)]
    vertices: Vec<Vertex>,
    #[serde(skip)]
    index: BTreeMap<PrismFace, usize>,
}

mod opt_rational {
    use serde::Serializer;

    use crate::exact::{to_fraction_string, Rational};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_str(&to_fraction_string(q)),
            None => s.serialize_none(),
        }
    }
}

/// Row index of facet `(i, j)`; `j = 0` carries `-eps`, `j = 1` carries `+eps`.
pub fn pair_row(i: usize, j: usize) -> usize {
    2 * i + j
}

impl DeformedWp {
    /// Builds and certifies one parameter choice, without escalation.
    pub fn certified(p: usize, eps: &Rational, m: &Rational, delta: Option<&Rational>) -> Result<Self> {
        if p < 3 {
            return Err(Error::InvalidArgument(format!("p must be at least 3, got {p}")));
        }
        if !eps.is_positive() {
            return Err(Error::InvalidArgument("eps must be positive".into()));
        }
        if *m < int(2) {
            return Err(Error::InvalidArgument("M must be at least 2".into()));
        }
        if let Some(d) = delta {
            if !d.is_positive() {
                return Err(Error::InvalidArgument("delta must be positive".into()));
            }
        }
        let polygon = make_polygon(p)?;
        let prism = delta.is_some();
        // y'-type columns: y'_0..y'_{p-1}, and z for the prism
        let ny = p + usize::from(prism);
        let dim = 2 + ny;
        let top = if prism { p } else { p - 1 };
        let mut raw = Vec::new();
        let mut rhs = Vec::new();
        let mut labels = Vec::new();
        for i in 0..p {
            let scale = pow(m, (top - i) as u32);
            for j in 0..2 {
                let mut row = vec![Rational::zero(); dim];
                row[0] = &polygon.normal(i)[0] * &scale;
                row[1] = &polygon.normal(i)[1] * &scale;
                row[2 + i] = if j == 0 { -eps.clone() } else { eps.clone() };
                if i == 0 {
                    for c in 1..ny {
                        row[2 + c] = -Rational::one();
                    }
                } else if i + 1 < ny {
                    row[2 + i + 1] = Rational::one();
                }
                raw.push(row);
                rhs.push(scale.clone());
                labels.push(FacetLabel::Pair(i, j));
            }
        }
        if let Some(d) = delta {
            for sign in [Sign::Minus, Sign::Plus] {
                let mut row = vec![Rational::zero(); dim];
                row[dim - 1] = sign.value() * d;
                raw.push(row);
                rhs.push(Rational::one());
                labels.push(FacetLabel::Lid(sign));
            }
        }
        let facets = raw
            .iter()
            .zip(&rhs)
            .zip(&labels)
            .map(|((row, b), &label)| Facet { label, normal: row.iter().map(|x| x / b).collect() })
            .collect();
        let system = HPolytope::new(dim, facets)?;

        let params = WpParams::new(p, 2)?;
        let lids: Vec<Option<Sign>> = if prism { vec![Some(Sign::Minus), Some(Sign::Plus)] } else { vec![None] };
        let mut faces = Vec::new();
        for v in wp_vertices(params) {
            for &lid in &lids {
                faces.push((v.clone(), lid));
            }
        }
        let probe = DeformedWp {
            p,
            eps: eps.clone(),
            m: m.clone(),
            delta: delta.cloned(),
            escalations: 0,
            raw,
            rhs,
            system,
            faces: Vec::new(),
            vertices: Vec::new(),
            index: BTreeMap::new(),
        };
        let bases: Vec<Vec<usize>> = faces.iter().map(|f| probe.face_rows(&f.0, f.1)).collect();
        let vertices = vertices_from_bases(&probe.system, &bases)?;
        check_vertex_graph(dim, &vertices)?;
        let index = faces.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        Ok(DeformedWp { faces, vertices, index, ..probe })
    }

    pub fn dim(&self) -> usize {
        self.system.dim()
    }

    pub fn is_prism(&self) -> bool {
        self.delta.is_some()
    }

    pub fn raw_rows(&self) -> &[Vec<Rational>] {
        &self.raw
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }

    /// Rows tight at a face.
    pub fn face_rows(&self, face: &FaceVector, lid: Option<Sign>) -> Vec<usize> {
        let mut rows: Vec<usize> = face.tight_pairs().into_iter().map(|(i, j)| pair_row(i, j)).collect();
        if let Some(s) = lid {
            rows.push(2 * self.p + usize::from(s == Sign::Plus));
        }
        rows.sort_unstable();
        rows
    }

    /// Certified vertices, each with its combinatorial label.
    pub fn vertices(&self) -> impl Iterator<Item = (&PrismFace, &Vertex)> {
        self.faces.iter().zip(&self.vertices)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_coords(&self, v: &FaceVector, lid: Option<Sign>) -> Option<&[Rational]> {
        let k = *self.index.get(&(v.clone(), lid))?;
        Some(&self.vertices[k].coords)
    }
}

/// Each candidate must have `dim` neighbours, one per dropped facet: then
/// the candidates are closed under the vertex graph and hence complete.
fn check_vertex_graph(dim: usize, vertices: &[Vertex]) -> Result<()> {
    let mut ridges: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for v in vertices {
        if v.tight.len() != dim {
            return Err(Error::Certificate("candidate vertex is not simple".into()));
        }
        for skip in 0..dim {
            let key: Vec<usize> = v.tight.iter().enumerate().filter(|&(t, _)| t != skip).map(|(_, &f)| f).collect();
            *ridges.entry(key).or_default() += 1;
        }
    }
    if let Some((edge, n)) = ridges.iter().find(|(_, &n)| n != 2) {
        return Err(Error::Certificate(format!("edge on facets {edge:?} has {n} candidate endpoints")));
    }
    let distinct: BTreeSet<&Vec<Rational>> = vertices.iter().map(|v| &v.coords).collect();
    if distinct.len() != vertices.len() {
        return Err(Error::Certificate("two candidates coincide".into()));
    }
    Ok(())
}

/// Runs `attempt` with `(eps, M)`, then `(eps/2, 4M)`, ... up to
/// [`MAX_ESCALATIONS`] retries. Returns the first success and the number
/// of escalations used, or the last error.
pub fn escalate<T>(
    eps: &Rational,
    m: &Rational,
    mut attempt: impl FnMut(&Rational, &Rational) -> Result<T>,
) -> Result<(T, usize)> {
    let (mut e, mut mm) = (eps.clone(), m.clone());
    let mut last = None;
    for step in 0..=MAX_ESCALATIONS {
        match attempt(&e, &mm) {
            Ok(t) => return Ok((t, step)),
            Err(err @ Error::InvalidArgument(_)) => return Err(err),
            Err(err) => {
                log::info!("eps = {e}, M = {mm} failed: {err}; escalating");
                last = Some(err);
            }
        }
        e /= int(2);
        // certification needs roughly eps * M >= 4, so M must outgrow 1/eps
        mm *= int(4);
    }
    Err(last.expect("at least one attempt"))
}

/// The deformed `wp(p, 1)` with automatic escalation of `eps` and `M`.
pub fn build_deformed_wp(p: usize, eps: &Rational, m: &Rational) -> Result<DeformedWp> {
    let (mut d, steps) = escalate(eps, m, |e, mm| DeformedWp::certified(p, e, mm, None))?;
    d.escalations = steps;
    Ok(d)
}

/// The deformed prism over `wp(p, 1)` with automatic escalation.
pub fn build_deformed_prism(p: usize, eps: &Rational, m: &Rational, delta: &Rational) -> Result<DeformedWp> {
    let (mut d, steps) = escalate(eps, m, |e, mm| DeformedWp::certified(p, e, mm, Some(delta)))?;
    d.escalations = steps;
    Ok(d)
}
