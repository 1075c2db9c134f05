use serde::Serialize;

use super::{certify_surface, escalate, DeformedWp, PreservationReport, PROJECTION_DIM};
use crate::complex::RealizedComplex;
use crate::error::{Error, Result};
use crate::exact::{affine_rank, Rational};
use crate::surface::{build_surface, SurfaceComplex};
use crate::wpcombin::WpParams;

/// Exact pairwise intersection tests are run up to this many faces; larger
/// complexes only get the test for faces sharing a vertex.
pub const FULL_EMBEDDING_CHECK_FACES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    R4,
    R3,
}

impl Target {
    pub fn dim(self) -> usize {
        match self {
            Target::R4 => 4,
            Target::R3 => 3,
        }
    }

    /// Coordinates kept: `(x_0, x_1, y'_0, y'_1)`, or without `y'_1`, the
    /// lower-hull direction.
    pub fn coords(self, x: &[Rational]) -> Vec<Rational> {
        x[..self.dim()].to_vec()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingCheck {
    /// Every pair of faces was tested.
    Full,
    /// Only pairs of faces sharing a vertex were tested.
    Local,
}

#[derive(Clone, Debug, Serialize)]
pub struct Realization {
    pub deformed: DeformedWp,
    pub report: PreservationReport,
    pub target: Target,
    pub realized: RealizedComplex,
    pub embedding: EmbeddingCheck,
}

/// Orthogonal projection of the certified surface p-gons, with exact
/// verification of every face and of the embedding.
pub fn project_surface(
    d: &DeformedWp,
    s: &SurfaceComplex,
    report: &PreservationReport,
    target: Target,
) -> Result<(RealizedComplex, EmbeddingCheck)> {
    if !report.ok() {
        return Err(Error::Certificate("not every surface p-gon is preserved on the lower hull".into()));
    }
    let coords = s
        .vertices()
        .iter()
        .map(|v| d.vertex_coords(v, None).map(|x| target.coords(x)))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Certificate("surface vertex missing from the realization".into()))?;
    let r = RealizedComplex::new(s.complex(), coords)?;
    r.verify_faces()?;
    let check = if s.pgons().len() <= FULL_EMBEDDING_CHECK_FACES {
        r.verify_embedding()?;
        EmbeddingCheck::Full
    } else {
        r.verify_local_embedding()?;
        EmbeddingCheck::Local
    };
    Ok((r, check))
}

/// The whole pipeline for `Σ_{p,4}`: deform, certify, project, verify.
/// Any failure triggers the escalation of `eps` and `M`.
pub fn realize_surface(p: usize, eps: &Rational, m: &Rational, target: Target) -> Result<Realization> {
    let s = build_surface(WpParams::new(p, 2)?)?;
    let (mut out, steps) = escalate(eps, m, |e, mm| {
        let d = DeformedWp::certified(p, e, mm, None)?;
        let report = certify_surface(&d, &s);
        let (realized, embedding) = project_surface(&d, &s, &report, target)?;
        Ok(Realization { deformed: d, report, target, realized, embedding })
    })?;
    out.deformed.escalations = steps;
    Ok(out)
}

/// For each surface p-gon, the vertices of the polytope whose image lies in
/// the affine hull of the projected p-gon are exactly the p-gon's vertices.
pub fn check_preimages(d: &DeformedWp, s: &SurfaceComplex) -> bool {
    let images: Vec<(usize, Vec<Rational>)> = s
        .vertices()
        .iter()
        .enumerate()
        .filter_map(|(i, v)| d.vertex_coords(v, None).map(|x| (i, x[..PROJECTION_DIM].to_vec())))
        .collect();
    if images.len() != d.num_vertices() {
        return false;
    }
    s.cycles().iter().all(|cycle| {
        let pts: Vec<Vec<Rational>> = cycle.iter().map(|&v| images[v].1.clone()).collect();
        images.iter().all(|(i, x)| {
            let mut with = pts.clone();
            with.push(x.clone());
            let in_plane = affine_rank(&with) == 2;
            in_plane == cycle.contains(i)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::projection::build_deformed_wp;

    #[test]
    fn torus_in_r3() {
        let r = realize_surface(4, &rat(1, 10), &int(64), Target::R3).unwrap();
        assert_eq!(r.realized.coords.len(), 16);
        assert_eq!(r.realized.complex.faces().len(), 16);
        assert_eq!(r.realized.ambient_dim(), 3);
        assert_eq!(r.realized.complex.genus().unwrap(), 1);
        assert_eq!(r.embedding, EmbeddingCheck::Full);
    }

    #[test]
    fn r4_coordinates() {
        let r = realize_surface(4, &rat(1, 10), &int(64), Target::R4).unwrap();
        assert_eq!(r.realized.ambient_dim(), 4);
        assert!(r.report.verify(&r.deformed));
    }

    #[test]
    fn preimages_are_exact() {
        for p in [4, 5] {
            let d = build_deformed_wp(p, &rat(1, 10), &int(64)).unwrap();
            let s = build_surface(WpParams::new(p, 2).unwrap()).unwrap();
            assert!(check_preimages(&d, &s));
        }
    }

    #[test]
    fn stable_under_smaller_eps() {
        for p in [4, 5] {
            let s = build_surface(WpParams::new(p, 2).unwrap()).unwrap();
            let a = build_deformed_wp(p, &rat(1, 10), &int(64)).unwrap();
            let b = build_deformed_wp(p, &rat(9, 100), &int(64)).unwrap();
            let (ra, rb) = (certify_surface(&a, &s), certify_surface(&b, &s));
            for (fa, fb) in ra.faces.iter().zip(&rb.faces) {
                assert_eq!(fa.check.holds(), fb.check.holds());
            }
        }
    }

    #[test]
    fn escalates_when_a_face_is_lost() {
        // combinatorially correct but some p-gon is not on the lower hull
        let s = build_surface(WpParams::new(5, 2).unwrap()).unwrap();
        let d = DeformedWp::certified(5, &int(50), &int(2), None).unwrap();
        assert!(!certify_surface(&d, &s).ok());
        let r = realize_surface(5, &int(50), &int(2), Target::R4).unwrap();
        assert!(r.deformed.escalations > 0);
        assert!(r.report.ok());
    }

    #[test]
    fn eps_zero_is_rejected() {
        assert!(matches!(realize_surface(5, &int(0), &int(64), Target::R3), Err(Error::InvalidArgument(_))));
    }
}
