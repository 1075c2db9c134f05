use std::collections::BTreeMap;

use itertools::Itertools;
use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{HPolytope, VPolytope};
use crate::error::{Error, Result};
use crate::exact::{serde_rational_vec, solve_square, RatMatrix, Rational};

/// Brute-force enumeration is attempted only when there are at most this
/// many facets beyond the dimension (or the dimension is at most 4).
pub const BRUTE_FORCE_EXTRA_FACETS: usize = 8;

/// A vertex together with the indices of all facets it lies on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    #[serde(with = "serde_rational_vec")]
    pub coords: Vec<Rational>,
    pub tight: Vec<usize>,
}

/// All vertices by solving every `d`-subset of facet equations.
///
/// Output is sorted by tight facet set, so it is deterministic.
pub fn vertex_enumerate(p: &HPolytope) -> Result<Vec<Vertex>> {
    let (d, m) = (p.dim(), p.num_facets());
    if !p.is_bounded() {
        return Err(Error::Unbounded);
    }
    if d > 4 && m > d + BRUTE_FORCE_EXTRA_FACETS {
        return Err(Error::EnumerationTooLarge { facets: m, dim: d });
    }
    let normals = p.normals();
    let ones = vec![Rational::from_integer(1.into()); d];
    let mut found: BTreeMap<Vec<Rational>, Vec<usize>> = BTreeMap::new();
    for subset in (0..m).combinations(d) {
        // skip subsets already inside a known vertex's tight set
        if found.values().any(|t| subset.iter().all(|i| t.binary_search(i).is_ok())) {
            continue;
        }
        let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| normals[i].clone()).collect();
        let Some(x) = solve_square(&RatMatrix::from_rows(&rows), &ones) else {
            continue;
        };
        if (0..m).any(|i| p.slack(i, &x).is_negative()) {
            continue;
        }
        let tight = p.tight_facets(&x);
        found.insert(x, tight);
    }
    let mut out: Vec<Vertex> = found.into_iter().map(|(coords, tight)| Vertex { coords, tight }).collect();
    out.sort_by(|a, b| a.tight.cmp(&b.tight));
    Ok(out)
}

/// Solves one `d x d` system per candidate basis and checks that every other
/// inequality holds strictly. Any failure means the candidate list does not
/// describe a simple polytope with these facets.
pub fn vertices_from_bases(p: &HPolytope, bases: &[Vec<usize>]) -> Result<Vec<Vertex>> {
    let d = p.dim();
    let ones = vec![Rational::from_integer(1.into()); d];
    let mut out = Vec::with_capacity(bases.len());
    for basis in bases {
        if basis.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: basis.len() });
        }
        let mut tight = basis.clone();
        tight.sort_unstable();
        let rows: Vec<Vec<Rational>> = tight.iter().map(|&i| p.normal(i).to_vec()).collect();
        let x = solve_square(&RatMatrix::from_rows(&rows), &ones)
            .ok_or_else(|| Error::Singular(format!("facets {tight:?} do not meet in a point")))?;
        for i in 0..p.num_facets() {
            if tight.binary_search(&i).is_err() && !p.slack(i, &x).is_positive() {
                return Err(Error::CandidateInfeasible { basis: tight, facet: i });
            }
        }
        out.push(Vertex { coords: x, tight });
    }
    Ok(out)
}

/// Whether each vertex lies on exactly `dim` facets.
pub fn is_simple(p: &HPolytope, vertices: &[Vertex]) -> bool {
    vertices.iter().all(|v| v.tight.len() == p.dim())
}

impl Vertex {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// The V-representation from enumerated vertices.
pub fn to_vpolytope(dim: usize, vertices: &[Vertex]) -> Result<VPolytope> {
    VPolytope::new(dim, vertices.iter().map(|v| v.coords.clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ints};
    use crate::polytope::{make_polygon, make_simplex, prism, wedge_product, Facet, FacetLabel};

    fn cube() -> HPolytope {
        let facets = (0..3)
            .flat_map(|i| {
                [-1, 1].into_iter().map(move |s| {
                    let mut n = vec![Rational::zero(); 3];
                    n[i] = int(s);
                    Facet { label: FacetLabel::Base(2 * i + usize::from(s > 0)), normal: n }
                })
            })
            .collect();
        HPolytope::new(3, facets).unwrap()
    }

    #[test]
    fn cube_vertices() {
        let v = vertex_enumerate(&cube()).unwrap();
        assert_eq!(v.len(), 8);
        for x in &v {
            assert!(x.coords.iter().all(|c| c.abs() == int(1)));
        }
        assert!(is_simple(&cube(), &v));
        assert!(!v.iter().any(Vertex::is_zero));
    }

    #[test]
    fn wedge_square_interval_has_sixteen() {
        let w = wedge_product(&make_polygon(4).unwrap(), &make_simplex(1).unwrap()).unwrap();
        let v = vertex_enumerate(&w).unwrap();
        assert_eq!(v.len(), 16);
        assert!(is_simple(&w, &v));
    }

    #[test]
    fn square_wedge_square_is_not_simple() {
        let c4 = make_polygon(4).unwrap();
        let w = wedge_product(&c4, &c4).unwrap();
        let v = vertex_enumerate(&w).unwrap();
        assert!(!is_simple(&w, &v));
    }

    #[test]
    fn unbounded_rejected() {
        let half = HPolytope::new(1, vec![Facet { label: FacetLabel::Base(0), normal: ints(&[1]) }]).unwrap();
        assert!(matches!(vertex_enumerate(&half), Err(Error::Unbounded)));
    }

    #[test]
    fn bases_are_checked() {
        let c = prism(&make_polygon(4).unwrap(), &int(1)).unwrap();
        let all = vertex_enumerate(&c).unwrap();
        let bases: Vec<Vec<usize>> = all.iter().map(|v| v.tight.clone()).collect();
        assert_eq!(vertices_from_bases(&c, &bases).unwrap(), all);
        // opposite facets are parallel
        assert!(matches!(vertices_from_bases(&c, &[vec![0, 2, 4]]), Err(Error::Singular(_))));
        // a hexagon basis that misses a cut facet
        let hex = make_polygon(6).unwrap();
        assert!(matches!(
            vertices_from_bases(&hex, &[vec![0, 2]]),
            Err(Error::CandidateInfeasible { .. })
        ));
    }
}
