use std::collections::BTreeMap;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::FaceLattice;
use crate::error::{Error, Result};
use crate::exact::{add, dot, rat, scale, serde_rational_vec, sub, Rational};

/// Central projection of a polytope's boundary into one of its facets.
///
/// `coords` maps each vertex index of the lattice to a point of dimension
/// one less than the polytope, obtained by dropping coordinate `dropped`
/// from the image in the facet hyperplane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchlegelDiagram {
    pub facet: usize,
    #[serde(with = "serde_rational_vec")]
    pub viewpoint: Vec<Rational>,
    pub dropped: usize,
    #[serde(with = "crate::exact::serde_rational_rows")]
    coords_list: Vec<Vec<Rational>>,
    vertex_order: Vec<usize>,
}

impl SchlegelDiagram {
    /// Projected coordinates of vertex `v` of the lattice.
    pub fn coords(&self, v: usize) -> Option<&[Rational]> {
        self.vertex_order.binary_search(&v).ok().map(|k| self.coords_list[k].as_slice())
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertex_order
    }

    pub fn coord_map(&self) -> BTreeMap<usize, Vec<Rational>> {
        self.vertex_order.iter().copied().zip(self.coords_list.iter().cloned()).collect()
    }
}

/// Schlegel diagram through `facet` with an automatically chosen viewpoint
/// just beyond the facet's centroid.
pub fn schlegel(lattice: &FaceLattice, facet: usize) -> Result<SchlegelDiagram> {
    let planes = lattice.facet_planes();
    let plane = planes.get(facet).ok_or_else(|| Error::InvalidArgument(format!("no facet {facet}")))?;
    let pts = lattice.points();
    let verts = lattice.vertex_indices();
    let centroid_of = |idx: &[usize]| -> Vec<Rational> {
        let mut c = vec![Rational::zero(); lattice.dim()];
        for &i in idx {
            c = add(&c, &pts[i]);
        }
        scale(&c, &Rational::from_integer(idx.len().into()).recip())
    };
    let b = centroid_of(&lattice.facets()[facet].vertices);
    let o = centroid_of(&verts);
    let dir = sub(&b, &o);
    // z = b + t (b - o) stays below every other facet hyperplane for t below
    // the smallest positive crossing; take half of it
    let mut t = Rational::one();
    for (g, pl) in planes.iter().enumerate() {
        if g == facet {
            continue;
        }
        let rate = dot(&pl.normal, &dir);
        if rate.is_positive() {
            let limit = (&pl.offset - dot(&pl.normal, &b)) / rate;
            let half = limit * rat(1, 2);
            if half < t {
                t = half;
            }
        }
    }
    let z = add(&b, &scale(&dir, &t));
    debug_assert!(dot(&plane.normal, &z) > plane.offset);
    let z = simplest_viewpoint(lattice, facet, z);
    schlegel_with_viewpoint(lattice, facet, &z)
}

fn valid_viewpoint(lattice: &FaceLattice, facet: usize, z: &[Rational]) -> bool {
    lattice.facet_planes().iter().enumerate().all(|(g, pl)| {
        let v = dot(&pl.normal, z);
        if g == facet {
            v > pl.offset
        } else {
            v < pl.offset
        }
    })
}

/// Rounds `z` to the coarsest dyadic grid that keeps it a valid viewpoint;
/// small coordinates keep the projected points small.
fn simplest_viewpoint(lattice: &FaceLattice, facet: usize, z: Vec<Rational>) -> Vec<Rational> {
    let mut den = Rational::one();
    for _ in 0..64 {
        let rounded: Vec<Rational> = z.iter().map(|x| (x * &den).round() / &den).collect();
        if valid_viewpoint(lattice, facet, &rounded) {
            return rounded;
        }
        den *= Rational::from_integer(2.into());
    }
    z
}

/// Schlegel diagram from an explicit viewpoint, which must lie beyond the
/// chosen facet and beneath every other facet.
pub fn schlegel_with_viewpoint(lattice: &FaceLattice, facet: usize, z: &[Rational]) -> Result<SchlegelDiagram> {
    let planes = lattice.facet_planes();
    let plane = planes.get(facet).ok_or_else(|| Error::InvalidArgument(format!("no facet {facet}")))?;
    if z.len() != lattice.dim() {
        return Err(Error::DimensionMismatch { expected: lattice.dim(), found: z.len() });
    }
    let fz = dot(&plane.normal, z);
    if fz <= plane.offset {
        return Err(Error::InvalidViewpoint);
    }
    for (g, pl) in planes.iter().enumerate() {
        if g != facet && dot(&pl.normal, z) >= pl.offset {
            return Err(Error::InvalidViewpoint);
        }
    }
    let dropped = plane.normal.iter().position(|x| !x.is_zero()).expect("facet normal is nonzero");
    let pts = lattice.points();
    let vertex_order = lattice.vertex_indices();
    let coords_list = vertex_order
        .iter()
        .map(|&v| {
            let x = &pts[v];
            let s = (&fz - &plane.offset) / (&fz - dot(&plane.normal, x));
            let y = add(z, &scale(&sub(x, z), &s));
            y.into_iter().enumerate().filter(|(i, _)| *i != dropped).map(|(_, c)| c).collect()
        })
        .collect();
    Ok(SchlegelDiagram { facet, viewpoint: z.to_vec(), dropped, coords_list, vertex_order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{affine_rank, ints};
    use crate::polytope::{facet_enumerate_4d, VPolytope};

    fn lattice(points: Vec<Vec<Rational>>) -> FaceLattice {
        facet_enumerate_4d(&VPolytope::new(points[0].len(), points).unwrap()).unwrap()
    }

    #[test]
    fn simplex_diagram() {
        let mut pts: Vec<Vec<Rational>> = (0..4)
            .map(|i| (0..4).map(|j| Rational::from_integer(i64::from(i == j).into())).collect())
            .collect();
        pts.push(ints(&[0, 0, 0, 0]));
        let l = lattice(pts);
        for f in 0..5 {
            let s = schlegel(&l, f).unwrap();
            assert_eq!(s.vertices().len(), 5);
            // the fifth vertex lands strictly inside the projected tetrahedron
            let facet = &l.facets()[f].vertices;
            let apex = (0..5).find(|v| !facet.contains(v)).unwrap();
            let tet: Vec<Vec<Rational>> = facet.iter().map(|&v| s.coords(v).unwrap().to_vec()).collect();
            assert_eq!(affine_rank(&tet), 3);
            let inner = VPolytope::new(3, {
                let mut t = tet.clone();
                t.push(s.coords(apex).unwrap().to_vec());
                t
            })
            .unwrap();
            assert!(!inner.in_convex_position());
        }
    }

    #[test]
    fn tesseract_diagram() {
        let pts: Vec<Vec<Rational>> = (0..16usize)
            .map(|m| (0..4).map(|i| Rational::from_integer(if m >> i & 1 == 1 { 1 } else { -1 }.into())).collect())
            .collect();
        let l = lattice(pts);
        let s = schlegel(&l, 0).unwrap();
        assert_eq!(s.vertices().len(), 16);
        // every 2-face stays planar
        for i in 0..l.faces(2).len() {
            let img: Vec<Vec<Rational>> = l.faces(2)[i].vertices.iter().map(|&v| s.coords(v).unwrap().to_vec()).collect();
            assert_eq!(affine_rank(&img), 2);
        }
        // facet vertices stay put, the others form a smaller cube inside
        let facet = &l.facets()[0].vertices;
        let outer: Vec<Vec<Rational>> = facet.iter().map(|&v| s.coords(v).unwrap().to_vec()).collect();
        let all: Vec<Vec<Rational>> = (0..16).map(|v| s.coords(v).unwrap().to_vec()).collect();
        let hull = VPolytope::new(3, all).unwrap();
        assert!(!hull.in_convex_position());
        assert_eq!(VPolytope::new(3, outer).unwrap().len(), 8);
    }

    #[test]
    fn bad_viewpoint() {
        let pts: Vec<Vec<Rational>> = (0..8usize)
            .map(|m| (0..3).map(|i| Rational::from_integer(if m >> i & 1 == 1 { 1 } else { -1 }.into())).collect())
            .collect();
        let l = lattice(pts);
        assert!(matches!(schlegel_with_viewpoint(&l, 0, &ints(&[0, 0, 0])), Err(Error::InvalidViewpoint)));
        assert!(matches!(schlegel_with_viewpoint(&l, 0, &ints(&[9, 9, 9])), Err(Error::InvalidViewpoint)));
    }
}
