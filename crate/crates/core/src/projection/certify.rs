use num::One;
use serde::Serialize;

use super::{DeformedWp, PROJECTION_DIM};
use crate::exact::{nonneg_combination, positively_spans, CoordSign, PositiveSpan, Rational, SpanCertificate};
use crate::polytope::Sign;
use crate::surface::SurfaceComplex;
use crate::wpcombin::FaceVector;

fn truncated(rows: &[Vec<Rational>], k: usize) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r[k..].to_vec()).collect()
}

/// Whether the face with these tight normals survives the projection to
/// the first `k` coordinates: the normals cut down to their last `d - k`
/// coordinates must positively span.
pub fn check_preserved(normals: &[Vec<Rational>], k: usize) -> PositiveSpan {
    let d = normals.first().map_or(0, Vec::len);
    if k >= d {
        return PositiveSpan::Spanning(SpanCertificate {
            multipliers: vec![Rational::one(); normals.len()],
            witness: Vec::new(),
        });
    }
    positively_spans(&truncated(normals, k))
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerHullCheck {
    pub preserved: PositiveSpan,
    /// A nonnegative combination of the tight normals vanishing on the
    /// dropped coordinates and negative on coordinate `k - 1`.
    pub normal: Option<SpanCertificate>,
}

impl LowerHullCheck {
    pub fn holds(&self) -> bool {
        self.preserved.spans() && self.normal.is_some()
    }
}

/// Preservation plus a certified outer normal with negative `(k-1)`-th
/// coordinate, placing the projected face on the lower hull.
pub fn check_lower_hull(normals: &[Vec<Rational>], k: usize) -> LowerHullCheck {
    let d = normals.first().map_or(0, Vec::len);
    let preserved = check_preserved(normals, k);
    let pattern: Vec<CoordSign> = (0..d)
        .map(|c| if c >= k { CoordSign::Zero } else if c + 1 == k { CoordSign::Negative } else { CoordSign::Free })
        .collect();
    let normal = if k == 0 || k > d { None } else { nonneg_combination(normals, &pattern) };
    LowerHullCheck { preserved, normal }
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceCertificate {
    pub face: FaceVector,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lid: Option<Sign>,
    pub rows: Vec<usize>,
    pub check: LowerHullCheck,
}

impl FaceCertificate {
    /// Recomputes both certificates against the given rows.
    pub fn verify(&self, d: &DeformedWp) -> bool {
        let normals: Vec<Vec<Rational>> = self.rows.iter().map(|&r| d.raw_rows()[r].clone()).collect();
        let cut = truncated(&normals, PROJECTION_DIM);
        let preserved_ok = self.check.preserved.spans() && self.check.preserved.verify(&cut);
        let normal_ok = self.check.normal.as_ref().is_some_and(|c| {
            let dim = d.dim();
            let pattern: Vec<CoordSign> = (0..dim)
                .map(|c| {
                    if c >= PROJECTION_DIM {
                        CoordSign::Zero
                    } else if c + 1 == PROJECTION_DIM {
                        CoordSign::Negative
                    } else {
                        CoordSign::Free
                    }
                })
                .collect();
            c.verify(&normals) && crate::exact::matches_pattern(&c.witness, &pattern)
        });
        preserved_ok && normal_ok
    }
}

/// Certificates for every surface p-gon (for the prism: every p-gon prism)
/// under the projection to the first four coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct PreservationReport {
    pub faces: Vec<FaceCertificate>,
    pub all_preserved: bool,
    pub all_lower_hull: bool,
}

impl PreservationReport {
    pub fn ok(&self) -> bool {
        self.all_preserved && self.all_lower_hull
    }

    /// Re-verifies every stored certificate from scratch.
    pub fn verify(&self, d: &DeformedWp) -> bool {
        self.faces.iter().all(|f| f.verify(d))
    }
}

pub fn certify_surface(d: &DeformedWp, s: &SurfaceComplex) -> PreservationReport {
    let faces: Vec<FaceCertificate> = s
        .pgons()
        .iter()
        .map(|g| {
            let rows = d.face_rows(g, None);
            let normals: Vec<Vec<Rational>> = rows.iter().map(|&r| d.raw_rows()[r].clone()).collect();
            FaceCertificate { face: g.clone(), lid: None, rows, check: check_lower_hull(&normals, PROJECTION_DIM) }
        })
        .collect();
    let all_preserved = faces.iter().all(|f| f.check.preserved.spans());
    let all_lower_hull = faces.iter().all(|f| f.check.holds());
    PreservationReport { faces, all_preserved, all_lower_hull }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ints, rat};
    use crate::projection::{build_deformed_prism, build_deformed_wp};
    use crate::surface::build_surface;
    use crate::wpcombin::{wp_vertices, WpParams};

    #[test]
    fn trivial_when_nothing_is_dropped() {
        let n = vec![ints(&[1, 0]), ints(&[0, 1])];
        assert!(check_preserved(&n, 2).spans());
        assert!(!check_preserved(&n, 0).spans());
    }

    #[test]
    fn every_pgon_of_p5_for_all_sign_patterns() {
        let d = build_deformed_wp(5, &rat(1, 10), &int(64)).unwrap();
        let s = build_surface(WpParams::new(5, 2).unwrap()).unwrap();
        assert_eq!(s.pgons().len(), 32);
        let report = certify_surface(&d, &s);
        assert!(report.ok());
        assert!(report.verify(&d));
        for f in &report.faces {
            // y'_1 of the witness is negative, later coordinates vanish
            let w = &f.check.normal.as_ref().unwrap().witness;
            assert!(w[3] < int(0));
            assert!(w[4..].iter().all(|x| *x == int(0)));
        }
    }

    #[test]
    fn p4_lower_hull() {
        let d = build_deformed_wp(4, &rat(1, 10), &int(64)).unwrap();
        let s = build_surface(WpParams::new(4, 2).unwrap()).unwrap();
        assert!(certify_surface(&d, &s).ok());
    }

    #[test]
    fn face_without_first_pair_is_not_lower_hull() {
        let d = build_deformed_wp(5, &rat(1, 10), &int(64)).unwrap();
        // (∅, {1}, {1}, {1}, {1}): only +eps rows below the first pair
        let face = FaceVector::from_sets(2, &[vec![], vec![1], vec![1], vec![1], vec![1]]).unwrap();
        let rows = d.face_rows(&face, None);
        let normals: Vec<Vec<Rational>> = rows.iter().map(|&r| d.raw_rows()[r].clone()).collect();
        let check = check_lower_hull(&normals, 4);
        assert!(check.normal.is_none());
        assert!(!check.holds());
    }

    #[test]
    fn most_vertices_are_lost_in_the_plane() {
        let d = build_deformed_wp(4, &rat(1, 10), &int(64)).unwrap();
        let mut kept = 0;
        for v in wp_vertices(WpParams::new(4, 2).unwrap()) {
            let rows = d.face_rows(&v, None);
            let normals: Vec<Vec<Rational>> = rows.iter().map(|&r| d.raw_rows()[r].clone()).collect();
            let verdict = check_preserved(&normals, 2);
            assert!(verdict.verify(&normals.iter().map(|n| n[2..].to_vec()).collect::<Vec<_>>()));
            if verdict.spans() {
                kept += 1;
            }
        }
        assert!(kept <= 4);
    }

    #[test]
    fn prism_faces() {
        let d = build_deformed_prism(4, &rat(1, 10), &int(64), &rat(1, 4)).unwrap();
        let s = build_surface(WpParams::new(4, 2).unwrap()).unwrap();
        let report = certify_surface(&d, &s);
        assert!(report.ok() && report.verify(&d));
    }
}
