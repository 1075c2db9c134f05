//! H- and V-representations, the wedge constructions, vertex enumeration,
//! polarity, low-dimensional face lattices and Schlegel diagrams.

mod construct;
mod hull;
mod schlegel;
mod vertices;

use std::collections::BTreeSet;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{dot, nonnegative_solution, positively_spans, scale, serde_rational_vec, RatMatrix, Rational};

pub use construct::{
    deformed_product, generalized_wedge, make_polygon, make_simplex, prism, product, wedge_product,
};
pub use hull::{facet_enumerate_4d, Face, FaceLattice, FacetPlane};
pub use schlegel::{schlegel, schlegel_with_viewpoint, SchlegelDiagram};
pub use vertices::{is_simple, to_vpolytope, vertex_enumerate, vertices_from_bases, Vertex, BRUTE_FORCE_EXTRA_FACETS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> Rational {
        match self {
            Sign::Plus => Rational::one(),
            Sign::Minus => -Rational::one(),
        }
    }
}

/// Identifies a facet across constructions.
///
/// `Base(i)` is a facet inherited from the first factor, `Pair(i, j)` the
/// wedge-product facet combining facet `i` of the first factor with facet
/// `j` of the second, `Lid` a prism lid, and `Extra(j)` a facet of the
/// second factor of a plain product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FacetLabel {
    Base(usize),
    Pair(usize, usize),
    Lid(Sign),
    Extra(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    pub label: FacetLabel,
    #[serde(with = "serde_rational_vec")]
    pub normal: Vec<Rational>,
}

/// A polytope `{x : a_i . x <= 1}`; the origin is interior by construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHPolytope")]
pub struct HPolytope {
    dim: usize,
    facets: Vec<Facet>,
}

#[derive(Deserialize)]
struct RawHPolytope {
    dim: usize,
    facets: Vec<Facet>,
}

impl TryFrom<RawHPolytope> for HPolytope {
    type Error = Error;

    fn try_from(raw: RawHPolytope) -> Result<Self> {
        HPolytope::new(raw.dim, raw.facets)
    }
}

impl HPolytope {
    /// Validates normal lengths, label uniqueness and that no facet repeats.
    pub fn new(dim: usize, facets: Vec<Facet>) -> Result<Self> {
        for f in &facets {
            if f.normal.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: f.normal.len() });
            }
        }
        let labels: BTreeSet<FacetLabel> = facets.iter().map(|f| f.label).collect();
        if labels.len() != facets.len() {
            return Err(Error::InvalidArgument("facet labels are not unique".into()));
        }
        let normals: BTreeSet<&Vec<Rational>> = facets.iter().map(|f| &f.normal).collect();
        if normals.len() != facets.len() {
            return Err(Error::InvalidArgument("two facets share a normal".into()));
        }
        Ok(Self { dim, facets })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn normal(&self, i: usize) -> &[Rational] {
        &self.facets[i].normal
    }

    pub fn label(&self, i: usize) -> FacetLabel {
        self.facets[i].label
    }

    pub fn index_of(&self, label: FacetLabel) -> Option<usize> {
        self.facets.iter().position(|f| f.label == label)
    }

    pub fn normals(&self) -> Vec<Vec<Rational>> {
        self.facets.iter().map(|f| f.normal.clone()).collect()
    }

    pub fn matrix(&self) -> RatMatrix {
        RatMatrix::from_rows(&self.normals())
    }

    /// `1 - a_i . x`
    pub fn slack(&self, i: usize, x: &[Rational]) -> Rational {
        Rational::one() - dot(&self.facets[i].normal, x)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        (0..self.facets.len()).all(|i| !self.slack(i, x).is_negative())
    }

    pub fn tight_facets(&self, x: &[Rational]) -> Vec<usize> {
        (0..self.facets.len()).filter(|&i| self.slack(i, x).is_zero()).collect()
    }

    pub fn is_bounded(&self) -> bool {
        self.dim > 0 && !self.facets.is_empty() && positively_spans(&self.normals()).spans()
    }

    /// The point set of facet normals, i.e. the polar polytope when every
    /// inequality is facet-defining.
    pub fn polar(&self) -> VPolytope {
        VPolytope { dim: self.dim, vertices: self.normals() }
    }
}

/// Convex hull of finitely many points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VPolytope {
    dim: usize,
    #[serde(with = "crate::exact::serde_rational_rows")]
    vertices: Vec<Vec<Rational>>,
}

impl VPolytope {
    pub fn new(dim: usize, vertices: Vec<Vec<Rational>>) -> Result<Self> {
        for v in &vertices {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
            }
        }
        let distinct: BTreeSet<&Vec<Rational>> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::InvalidArgument("duplicate vertices".into()));
        }
        Ok(Self { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn centroid(&self) -> Vec<Rational> {
        let n = Rational::from_integer(self.vertices.len().into());
        let mut c = vec![Rational::zero(); self.dim];
        for v in &self.vertices {
            for (ci, x) in c.iter_mut().zip(v) {
                *ci += x;
            }
        }
        scale(&c, &n.recip())
    }

    /// Translate so the vertex centroid sits at the origin.
    pub fn centered(&self) -> VPolytope {
        let c = self.centroid();
        let vertices = self.vertices.iter().map(|v| crate::exact::sub(v, &c)).collect();
        VPolytope { dim: self.dim, vertices }
    }

    pub fn has_interior_origin(&self) -> bool {
        !self.vertices.is_empty() && positively_spans(&self.vertices).spans()
    }

    /// `{x : v . x <= 1 for every vertex v}`; vertex `k` becomes `Base(k)`.
    pub fn polar(&self) -> Result<HPolytope> {
        if !self.has_interior_origin() {
            return Err(Error::OriginNotInterior);
        }
        let facets = self
            .vertices
            .iter()
            .enumerate()
            .map(|(k, v)| Facet { label: FacetLabel::Base(k), normal: v.clone() })
            .collect();
        HPolytope::new(self.dim, facets)
    }

    /// Whether no vertex lies in the convex hull of the others.
    pub fn in_convex_position(&self) -> bool {
        (0..self.vertices.len()).all(|k| !self.in_hull_of_others(k))
    }

    fn in_hull_of_others(&self, k: usize) -> bool {
        let others: Vec<&Vec<Rational>> =
            self.vertices.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, v)| v).collect();
        if others.is_empty() {
            return false;
        }
        let mut a = RatMatrix::zeros(self.dim + 1, others.len());
        for (j, v) in others.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                a.set(i, j, x.clone());
            }
            a.set(self.dim, j, Rational::one());
        }
        let mut b = self.vertices[k].clone();
        b.push(Rational::one());
        nonnegative_solution(&a, &b).is_feasible()
    }
}

/// Hyperplane `normal . x = offset` through `members`, oriented so that
/// `reference` lies strictly on the negative side. Normalized so the first
/// nonzero entry has absolute value one.
pub(crate) fn supporting_plane(
    members: &[&Vec<Rational>],
    reference: &[Rational],
) -> Option<(Vec<Rational>, Rational)> {
    let base = members.first()?;
    let diffs: Vec<Vec<Rational>> = members[1..].iter().map(|m| crate::exact::sub(m, base)).collect();
    let dim = base.len();
    let ns = if diffs.is_empty() {
        RatMatrix::zeros(1, dim).nullspace()
    } else {
        RatMatrix::from_rows(&diffs).nullspace()
    };
    if ns.len() != 1 {
        return None;
    }
    let mut normal = normalize_direction(&ns[0]);
    let mut offset = dot(&normal, base);
    let side = dot(&normal, reference) - &offset;
    if side.is_zero() {
        return None;
    }
    if side.is_positive() {
        normal = normal.into_iter().map(|x| -x).collect();
        offset = -offset;
    }
    Some((normal, offset))
}

pub(crate) fn normalize_direction(v: &[Rational]) -> Vec<Rational> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let s = lead.abs().recip();
            scale(v, &s)
        }
        None => v.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ints;

    #[test]
    fn rejects_duplicate_labels_and_normals() {
        let f = |l, n: &[i64]| Facet { label: l, normal: ints(n) };
        assert!(HPolytope::new(1, vec![f(FacetLabel::Base(0), &[1]), f(FacetLabel::Base(0), &[-1])]).is_err());
        assert!(HPolytope::new(1, vec![f(FacetLabel::Base(0), &[1]), f(FacetLabel::Base(1), &[1])]).is_err());
        assert!(HPolytope::new(2, vec![f(FacetLabel::Base(0), &[1])]).is_err());
    }

    #[test]
    fn json_shape() {
        let p = make_simplex(1).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"dim":1,"facets":[{"label":{"base":0},"normal":["-1/1"]},{"label":{"base":1},"normal":["1/1"]}]}"#
        );
        let back: HPolytope = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let bad = r#"{"dim":2,"facets":[{"label":{"base":0},"normal":["1/1"]}]}"#;
        assert!(serde_json::from_str::<HPolytope>(bad).is_err());
    }

    #[test]
    fn convex_position() {
        let sq = VPolytope::new(2, vec![ints(&[1, 0]), ints(&[0, 1]), ints(&[-1, 0]), ints(&[0, -1])]).unwrap();
        assert!(sq.in_convex_position());
        assert!(sq.has_interior_origin());
        let with_center =
            VPolytope::new(2, vec![ints(&[1, 0]), ints(&[0, 1]), ints(&[-1, 0]), ints(&[0, -1]), ints(&[0, 0])])
                .unwrap();
        assert!(!with_center.in_convex_position());
        assert!(VPolytope::new(1, vec![ints(&[1]), ints(&[1])]).is_err());
    }
}
