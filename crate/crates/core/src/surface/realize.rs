use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SurfaceComplex;
use crate::complex::{PolygonComplex, RealizedComplex};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::polytope::{make_polygon, make_simplex, vertices_from_bases, wedge_product};
use crate::wpcombin::facet_index;

pub const MAX_PROJECTION_ATTEMPTS: usize = 20;

/// Coordinates of the surface's vertices in the canonical `wp(p, q-1)`
/// built from the rational polygon and simplex; every vertex system is
/// solved exactly and checked against all other facets.
pub fn realize_canonical(s: &SurfaceComplex) -> Result<RealizedComplex> {
    let params = s.params();
    let wp = wedge_product(&make_polygon(params.p)?, &make_simplex(params.q - 1)?)?;
    let bases: Vec<Vec<usize>> = s
        .vertices()
        .iter()
        .map(|v| v.tight_pairs().into_iter().map(|(i, j)| facet_index(params.q, i, j)).collect())
        .collect();
    let verts = vertices_from_bases(&wp, &bases)?;
    RealizedComplex::new(s.complex(), verts.into_iter().map(|v| v.coords).collect())
}

/// Maps a realization in `R^N` to `R^5` by a seeded random integer matrix,
/// retrying until faces stay convex and no two faces meet improperly.
/// Realizations already in dimension at most 5 are returned unchanged.
pub fn project_generic_r5(r: &RealizedComplex, seed: u64) -> Result<RealizedComplex> {
    let n = r.ambient_dim();
    if n <= 5 {
        return Ok(r.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..MAX_PROJECTION_ATTEMPTS {
        let rows: Vec<Vec<Rational>> = (0..5)
            .map(|_| (0..n).map(|_| Rational::from_integer(rng.gen_range(-9i64..=9).into())).collect())
            .collect();
        let image = r.map_linear(&rows);
        match image.verify_faces().and_then(|_| image.verify_embedding()) {
            Ok(()) => return Ok(image),
            Err(e) => log::debug!("projection attempt {attempt} rejected: {e}"),
        }
    }
    Err(Error::Certificate(format!("no embedding into R^5 after {MAX_PROJECTION_ATTEMPTS} attempts")))
}

/// Five triangles glued into a strip with a half twist.
pub fn mobius_strip() -> PolygonComplex {
    let faces = vec![vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4], vec![3, 4, 0], vec![4, 0, 1]];
    PolygonComplex::from_faces(5, faces).expect("valid strip")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::build_surface;
    use crate::wpcombin::WpParams;

    fn surface(p: usize, q: usize) -> SurfaceComplex {
        build_surface(WpParams::new(p, q).unwrap()).unwrap()
    }

    #[test]
    fn canonical_realizations_are_embedded() {
        for (p, q) in [(3, 2), (4, 2), (3, 3)] {
            let r = realize_canonical(&surface(p, q)).unwrap();
            assert_eq!(r.ambient_dim(), 2 + p * (q - 1));
            r.verify_faces().unwrap();
            r.verify_embedding().unwrap();
        }
    }

    #[test]
    fn octahedron_stays_in_r5() {
        let r = realize_canonical(&surface(3, 2)).unwrap();
        assert_eq!(project_generic_r5(&r, 1).unwrap(), r);
    }

    #[test]
    fn torus_into_r5() {
        let r = realize_canonical(&surface(4, 2)).unwrap();
        let img = project_generic_r5(&r, 7).unwrap();
        assert_eq!(img.ambient_dim(), 5);
        assert_eq!(img.coords.len(), 16);
        assert_eq!(project_generic_r5(&r, 7).unwrap(), img);
    }

    #[test]
    fn strip_is_not_orientable() {
        assert!(mobius_strip().orientation().is_none());
    }
}
