use std::collections::BTreeSet;

use serde::Serialize;

use super::{certify_surface, escalate, DeformedWp, PreservationReport, PROJECTION_DIM};
use crate::complex::{PolygonComplex, RealizedComplex};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::polytope::{facet_enumerate_4d, schlegel, FaceLattice, SchlegelDiagram, Sign, VPolytope};
use crate::surface::{build_surface, SurfaceComplex};
use crate::wpcombin::WpParams;

/// Which of the three copies of the surface's face poset were found in the
/// projected 4-polytope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PosetCopies {
    /// `Σ × {-}`: every vertex, edge and p-gon at the lower lid.
    pub lower: bool,
    /// `Σ × {+}`.
    pub upper: bool,
    /// `Σ × I`: vertices to edges, edges to squares, p-gons to 3-faces.
    pub prism: bool,
}

impl PosetCopies {
    pub fn all(&self) -> bool {
        self.lower && self.upper && self.prism
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DualReport {
    pub p: usize,
    pub escalations: usize,
    pub faces_preserved: bool,
    /// f-vector of the projected 4-polytope.
    pub projected_f_vector: Vec<usize>,
    pub copies: PosetCopies,
    pub dual_f_vector: Vec<usize>,
    /// Every face of `Σ*` is a 2-face of the dual polytope.
    pub dual_contains_sigma_star: bool,
    /// `Σ*` built from the polytope is isomorphic to the abstract dual.
    pub sigma_star_matches_dual: bool,
    pub sigma_star_f_vector: [usize; 3],
    /// Facet of the dual polytope used for the Schlegel diagram, and how
    /// many vertices of `Σ*` it contains (no facet avoids `Σ*` entirely).
    pub schlegel_facet: usize,
    pub schlegel_facet_sigma_star_vertices: usize,
    pub prism_faces_valid: bool,
    /// Whether the prism complex is also embedded in R^3; informational.
    pub prism_embedded_r3: bool,
    pub sigma_star_faces_valid: bool,
    pub sigma_star_embedded: bool,
}

impl DualReport {
    pub fn ok(&self) -> bool {
        self.faces_preserved
            && self.copies.all()
            && self.dual_contains_sigma_star
            && self.sigma_star_matches_dual
            && self.prism_faces_valid
            && self.sigma_star_faces_valid
            && self.sigma_star_embedded
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DualPipeline {
    pub deformed: DeformedWp,
    pub preservation: PreservationReport,
    /// Squares `e × I` and the p-gons at both lids, projected to R^3.
    pub prism: RealizedComplex,
    /// `Σ*` in R^3, from the Schlegel diagram of the dual polytope.
    pub sigma_star: RealizedComplex,
    pub schlegel: SchlegelDiagram,
    pub report: DualReport,
    #[serde(skip)]
    pub projected: FaceLattice,
    #[serde(skip)]
    pub dual: FaceLattice,
}

/// Index of vertex `(v, lid)` in the prism complex.
fn prism_vertex(n: usize, v: usize, lid: Sign) -> usize {
    if lid == Sign::Minus {
        v
    } else {
        n + v
    }
}

fn prism_complex(s: &SurfaceComplex) -> Result<PolygonComplex> {
    let n = s.vertices().len();
    let mut faces = Vec::new();
    for lid in [Sign::Minus, Sign::Plus] {
        for c in s.cycles() {
            faces.push(c.iter().map(|&v| prism_vertex(n, v, lid)).collect());
        }
    }
    for (a, b) in s.complex().edges() {
        faces.push(vec![
            prism_vertex(n, *a, Sign::Minus),
            prism_vertex(n, *b, Sign::Minus),
            prism_vertex(n, *b, Sign::Plus),
            prism_vertex(n, *a, Sign::Plus),
        ]);
    }
    PolygonComplex::from_faces(2 * n, faces)
}

fn fail(what: &str) -> Error {
    Error::Certificate(format!("dual pipeline: {what}"))
}

/// Deforms the prism over `wp(p, 1)`, certifies every p-gon prism, projects
/// to R^4, locates the surface inside the projected polytope, polarizes and
/// realizes `Σ*` in R^3 through a Schlegel diagram.
pub fn build_prism_pipeline(p: usize, eps: &Rational, m: &Rational, delta: &Rational) -> Result<DualPipeline> {
    let s = build_surface(WpParams::new(p, 2)?)?;
    let (mut out, steps) = escalate(eps, m, |e, mm| run(&s, e, mm, delta))?;
    out.deformed.escalations = steps;
    out.report.escalations = steps;
    Ok(out)
}

fn run(s: &SurfaceComplex, eps: &Rational, m: &Rational, delta: &Rational) -> Result<DualPipeline> {
    let d = DeformedWp::certified(s.params().p, eps, m, Some(delta))?;
    let preservation = certify_surface(&d, s);
    if !preservation.ok() {
        return Err(fail("a p-gon prism is not preserved on the lower hull"));
    }

    // projected points, deduplicated; the surface's prism vertices first
    let n = s.vertices().len();
    let mut points: Vec<Vec<Rational>> = Vec::new();
    let mut seen = std::collections::BTreeMap::new();
    let mut index_of = |x: &[Rational], points: &mut Vec<Vec<Rational>>| -> usize {
        let x = x[..PROJECTION_DIM].to_vec();
        *seen.entry(x.clone()).or_insert_with(|| {
            points.push(x);
            points.len() - 1
        })
    };
    let mut surface_point = vec![0; 2 * n];
    for lid in [Sign::Minus, Sign::Plus] {
        for (v, fv) in s.vertices().iter().enumerate() {
            let x = d.vertex_coords(fv, Some(lid)).ok_or_else(|| fail("surface vertex missing"))?;
            surface_point[prism_vertex(n, v, lid)] = index_of(x, &mut points);
        }
    }
    if BTreeSet::from_iter(surface_point.iter()).len() != 2 * n {
        return Err(fail("two surface vertices share an image"));
    }
    for (_, v) in d.vertices() {
        index_of(&v.coords, &mut points);
    }
    let projected_poly = VPolytope::new(PROJECTION_DIM, points)?.centered();
    let projected = facet_enumerate_4d(&projected_poly)?;

    let at = |v: usize, lid: Sign| surface_point[prism_vertex(n, v, lid)];
    let complex = s.complex();
    let copy_at = |lid: Sign| {
        (0..n).all(|v| projected.find(0, &[at(v, lid)]).is_some())
            && complex.edges().iter().all(|&(a, b)| projected.find(1, &[at(a, lid), at(b, lid)]).is_some())
            && s.cycles().iter().all(|c| {
                let vs: Vec<usize> = c.iter().map(|&v| at(v, lid)).collect();
                projected.find(2, &vs).is_some()
            })
    };
    let both = |vs: &[usize]| -> Vec<usize> {
        vs.iter().flat_map(|&v| [at(v, Sign::Minus), at(v, Sign::Plus)]).collect()
    };
    let pgon_facets: Vec<Option<usize>> = s.cycles().iter().map(|c| projected.find(3, &both(c))).collect();
    let copies = PosetCopies {
        lower: copy_at(Sign::Minus),
        upper: copy_at(Sign::Plus),
        prism: (0..n).all(|v| projected.find(1, &both(&[v])).is_some())
            && complex.edges().iter().all(|&(a, b)| projected.find(2, &both(&[a, b])).is_some())
            && pgon_facets.iter().all(Option::is_some),
    };
    if !copies.all() {
        return Err(fail("surface face poset not found in the projected polytope"));
    }
    let pgon_facets: Vec<usize> = pgon_facets.into_iter().flatten().collect();

    // polar polytope: vertex k is dual to facet k of the projected polytope
    let polar = VPolytope::new(PROJECTION_DIM, projected.polar_points()?)?;
    let dual = facet_enumerate_4d(&polar)?;

    // Σ*: one vertex per p-gon, one face per surface vertex (its link)
    let mut star_faces = Vec::with_capacity(n);
    let mut dual_contains = true;
    for v in 0..n {
        let link = complex.link_cycle(v).ok_or_else(|| fail("surface vertex link is not a cycle"))?;
        let around: BTreeSet<usize> = link.iter().map(|&g| pgon_facets[g]).collect();
        let containing: BTreeSet<usize> =
            projected.faces_containing(3, &both(&[v])).into_iter().collect();
        let as_vec: Vec<usize> = around.iter().copied().collect();
        dual_contains &= around == containing && dual.find(2, &as_vec).is_some();
        star_faces.push(link);
    }
    let star = PolygonComplex::from_faces(s.pgons().len(), star_faces)?;
    let matches_dual = star.isomorphism(&s.dual()?).is_some();
    if !dual_contains || !matches_dual {
        return Err(fail("Σ* is not a subcomplex of the dual 2-skeleton"));
    }

    // Schlegel diagram through the dual facet meeting Σ* least
    let star_points: BTreeSet<usize> = pgon_facets.iter().copied().collect();
    let (facet, touching) = dual
        .facets()
        .iter()
        .enumerate()
        .map(|(k, f)| (k, f.vertices.iter().filter(|v| star_points.contains(v)).count()))
        .min_by_key(|&(k, c)| (c, k))
        .ok_or_else(|| fail("dual polytope has no facets"))?;
    let diagram = schlegel(&dual, facet)?;
    let star_coords = pgon_facets
        .iter()
        .map(|&k| diagram.coords(k).map(<[Rational]>::to_vec))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| fail("Σ* vertex is not a vertex of the dual polytope"))?;
    let sigma_star = RealizedComplex::new(star, star_coords)?;
    sigma_star.verify_faces()?;
    sigma_star.verify_faces()?;
    sigma_star.verify_embedding()?;

    // the prism complex in R^3 by the same coordinate drop as the surface
    let prism_coords: Vec<Vec<Rational>> = (0..2 * n)
        .map(|k| {
            let (v, lid) = if k < n { (k, Sign::Minus) } else { (k - n, Sign::Plus) };
            d.vertex_coords(&s.vertices()[v], Some(lid)).expect("checked above")[..3].to_vec()
        })
        .collect();
    let prism = RealizedComplex::new(prism_complex(s)?, prism_coords)?;
    prism.verify_faces()?;
    let prism_embedded_r3 = prism.verify_local_embedding().is_ok();

    let report = DualReport {
        p: s.params().p,
        escalations: 0,
        faces_preserved: true,
        projected_f_vector: projected.f_vector(),
        copies,
        dual_f_vector: dual.f_vector(),
        dual_contains_sigma_star: true,
        sigma_star_matches_dual: true,
        sigma_star_f_vector: sigma_star.complex.f_vector(),
        schlegel_facet: facet,
        schlegel_facet_sigma_star_vertices: touching,
        prism_faces_valid: true,
        prism_embedded_r3,
        sigma_star_faces_valid: true,
        sigma_star_embedded: true,
    };
    Ok(DualPipeline {
        deformed: d,
        preservation,
        prism,
        sigma_star,
        schlegel: diagram,
        report,
        projected,
        dual,
    })
}
