//! The surface `Σ_{p,2q}`: the p-gons `(~j_0, ..., ~j_{p-1})` of
//! `wp(p, q-1)` with `Σ j_k ≡ 0 or 1 (mod q)`, with their edges and
//! vertices.

mod realize;
mod symmetry;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::PolygonComplex;
use crate::error::{Error, Result};
use crate::wpcombin::{wp_pgons, FaceVector, WpParams};

pub use realize::{mobius_strip, project_generic_r5, realize_canonical, MAX_PROJECTION_ATTEMPTS};
pub use symmetry::{apply_automorphism, base_flag, check_flag_transitive, generator_is_automorphism, Flag, FlagReport, Generator, FLAG_GUARD};

/// Which family of the two a p-gon belongs to, by `Σ j_k mod q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Zero,
    One,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceComplex {
    params: WpParams,
    vertices: Vec<FaceVector>,
    edges: Vec<FaceVector>,
    pgons: Vec<FaceVector>,
    /// Vertex indices of each p-gon in the order `v_0, ..., v_{p-1}`, where
    /// `v_k` has full entries at `k` and `k+1`.
    cycles: Vec<Vec<usize>>,
    #[serde(skip)]
    index: [BTreeMap<FaceVector, usize>; 3],
}

fn pgon_js(g: &FaceVector) -> Vec<usize> {
    (0..g.m()).map(|k| g.co_singleton_index(k).expect("p-gon entries are co-singletons")).collect()
}

impl SurfaceComplex {
    pub fn params(&self) -> WpParams {
        self.params
    }

    pub fn vertices(&self) -> &[FaceVector] {
        &self.vertices
    }

    pub fn edges(&self) -> &[FaceVector] {
        &self.edges
    }

    pub fn pgons(&self) -> &[FaceVector] {
        &self.pgons
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn f_vector(&self) -> [usize; 3] {
        [self.vertices.len(), self.edges.len(), self.pgons.len()]
    }

    /// Index of a face (by its dimension 0, 1 or 2) in this complex.
    pub fn find(&self, dim: usize, f: &FaceVector) -> Option<usize> {
        self.index.get(dim)?.get(f).copied()
    }

    /// Index of the p-gon `(~j_0, ..., ~j_{p-1})`.
    pub fn find_pgon(&self, js: &[usize]) -> Option<usize> {
        let g = crate::wpcombin::pgon(self.params, js).ok()?;
        self.find(2, &g)
    }

    pub fn parity(&self, pgon: usize) -> Parity {
        let s: usize = pgon_js(&self.pgons[pgon]).iter().sum();
        if s % self.params.q == 0 {
            Parity::Zero
        } else {
            Parity::One
        }
    }

    /// The abstract polygon complex with the forward vertex order.
    pub fn complex(&self) -> PolygonComplex {
        PolygonComplex::from_faces(self.vertices.len(), self.cycles.clone()).expect("cycles are valid polygons")
    }

    /// Faces oriented by the explicit rule: forward for parity zero,
    /// backward for parity one.
    pub fn rule_oriented_complex(&self) -> PolygonComplex {
        let faces = (0..self.pgons.len())
            .map(|k| match self.parity(k) {
                Parity::Zero => self.cycles[k].clone(),
                Parity::One => self.cycles[k].iter().rev().copied().collect(),
            })
            .collect();
        PolygonComplex::from_faces(self.vertices.len(), faces).expect("cycles are valid polygons")
    }

    /// Every edge in exactly two p-gons and every vertex link a single cycle
    /// of length `2q`.
    pub fn check_manifold(&self) -> bool {
        let c = self.complex();
        c.is_closed_manifold() && (0..c.num_vertices()).all(|v| c.link_cycle(v).map(|l| l.len()) == Some(2 * self.params.q))
    }

    pub fn check_connected(&self) -> bool {
        self.complex().is_connected()
    }

    pub fn check_orientable(&self) -> OrientationReport {
        let c = self.complex();
        let propagated = c.orientation();
        let rule = self.rule_oriented_complex();
        let mut directed = std::collections::BTreeSet::new();
        let mut rule_consistent = true;
        for f in rule.faces() {
            for i in 0..f.len() {
                if !directed.insert((f[i], f[(i + 1) % f.len()])) {
                    rule_consistent = false;
                }
            }
        }
        OrientationReport { orientable: propagated.is_some(), rule_consistent, flips: propagated }
    }

    /// Genus from the enumerated f-vector; requires a closed connected
    /// orientable manifold.
    pub fn genus(&self) -> Result<i64> {
        self.complex().genus()
    }

    /// The dual complex: one vertex per p-gon and one `2q`-gon per vertex.
    pub fn dual(&self) -> Result<PolygonComplex> {
        self.complex().dual()
    }

    /// A copy with p-gon `k` removed; vertices and edges are kept.
    pub fn without_pgon(&self, k: usize) -> PolygonComplex {
        let faces = self.cycles.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, c)| c.clone()).collect();
        PolygonComplex::from_faces(self.vertices.len(), faces).expect("cycles are valid polygons")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrientationReport {
    /// Orientation propagated along the dual graph succeeded.
    pub orientable: bool,
    /// The parity rule uses every directed edge at most once.
    pub rule_consistent: bool,
    #[serde(skip)]
    pub flips: Option<Vec<bool>>,
}

/// Builds `Σ_{p,2q}`; needs `q >= 2`.
pub fn build_surface(params: WpParams) -> Result<SurfaceComplex> {
    let (p, q) = (params.p, params.q);
    if q < 2 {
        return Err(Error::InvalidArgument("the surface needs q >= 2".into()));
    }
    let pgons: Vec<FaceVector> =
        wp_pgons(params).into_iter().filter(|g| pgon_js(g).iter().sum::<usize>() % q <= 1).collect();
    let full = FaceVector::full(q);
    let mut vertex_index: BTreeMap<FaceVector, usize> = BTreeMap::new();
    let mut edge_index: BTreeMap<FaceVector, usize> = BTreeMap::new();
    let mut cycles = Vec::with_capacity(pgons.len());
    for g in &pgons {
        let mut cycle = Vec::with_capacity(p);
        for k in 0..p {
            let mut e = g.entries().to_vec();
            e[k] = full;
            let edge = FaceVector::new(q, e.clone())?;
            let next = edge_index.len();
            edge_index.entry(edge).or_insert(next);
            e[(k + 1) % p] = full;
            let v = FaceVector::new(q, e)?;
            let next = vertex_index.len();
            cycle.push(*vertex_index.entry(v).or_insert(next));
        }
        cycles.push(cycle);
    }
    // renumber vertices and edges in sorted order for stable output
    let vertices: Vec<FaceVector> = vertex_index.keys().cloned().collect();
    let remap: BTreeMap<usize, usize> = vertex_index.values().enumerate().map(|(new, &old)| (old, new)).collect();
    for c in &mut cycles {
        for v in c.iter_mut() {
            *v = remap[v];
        }
    }
    let edges: Vec<FaceVector> = edge_index.keys().cloned().collect();
    let index = [
        vertices.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect(),
        edges.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect(),
        pgons.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect(),
    ];
    Ok(SurfaceComplex { params, vertices, edges, pgons, cycles, index })
}

/// `(p, pq, 2q) q^{p-2}`
pub fn expected_f_vector(params: WpParams) -> [usize; 3] {
    let (p, q) = (params.p, params.q);
    let s = q.pow(p as u32 - 2);
    [p * s, p * q * s, 2 * q * s]
}

/// `1 + q^{p-2} (pq - p - 2q) / 2`
pub fn expected_genus(params: WpParams) -> i64 {
    let (p, q) = (params.p as i64, params.q as i64);
    1 + q.pow(p as u32 - 2) * (p * q - p - 2 * q) / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wpcombin::{incidence, wp_vertices};

    fn surface(p: usize, q: usize) -> SurfaceComplex {
        build_surface(WpParams::new(p, q).unwrap()).unwrap()
    }

    #[test]
    fn f_vectors() {
        assert_eq!(surface(3, 2).f_vector(), [6, 12, 8]);
        assert_eq!(surface(5, 2).f_vector(), [40, 80, 32]);
        assert_eq!(surface(4, 3).f_vector(), [36, 108, 54]);
        assert!(build_surface(WpParams::new(4, 1).unwrap()).is_err());
    }

    #[test]
    fn contains_every_wp_vertex() {
        for (p, q) in [(3, 3), (4, 3), (5, 2)] {
            let s = surface(p, q);
            let mut all = wp_vertices(s.params());
            all.sort();
            assert_eq!(s.vertices(), &all[..]);
        }
    }

    #[test]
    fn topology() {
        for (p, q, g) in [(3, 2, 0), (4, 2, 1), (5, 2, 5), (4, 3, 10), (3, 3, 1)] {
            let s = surface(p, q);
            assert!(s.check_manifold());
            assert!(s.check_connected());
            let o = s.check_orientable();
            assert!(o.orientable && o.rule_consistent);
            assert_eq!(s.genus().unwrap(), g);
            assert_eq!(expected_genus(s.params()), g);
        }
    }

    #[test]
    fn cycles_follow_incidence() {
        let s = surface(4, 3);
        for (k, g) in s.pgons().iter().enumerate() {
            let c = &s.cycles()[k];
            for v in c {
                assert!(incidence(&s.vertices()[*v], g).unwrap());
            }
        }
    }

    #[test]
    fn each_edge_has_one_pgon_per_parity() {
        let s = surface(5, 3);
        let c = s.complex();
        for faces in c.edge_faces().values() {
            assert_eq!(faces.len(), 2);
            assert_ne!(s.parity(faces[0]), s.parity(faces[1]));
        }
    }

    #[test]
    fn mutilated_is_not_a_manifold() {
        let s = surface(4, 2);
        assert!(!s.without_pgon(0).is_closed_manifold());
    }

    #[test]
    fn duals() {
        let d = surface(3, 2).dual().unwrap();
        assert_eq!(d.f_vector(), [8, 12, 6]);
        let d = surface(5, 2).dual().unwrap();
        assert_eq!(d.f_vector(), [32, 80, 40]);
        assert!(d.faces().iter().all(|f| f.len() == 4));
        let s = surface(4, 2);
        assert!(s.dual().unwrap().dual().unwrap().isomorphism(&s.complex()).is_some());
    }

    #[test]
    fn base_vertex_link_zig_zags() {
        // around (Zq, Zq, ~0, ...) the p-gons alternately raise j_0 or lower j_1
        for q in [2, 3, 4] {
            let s = surface(5, q);
            let full = FaceVector::full(q);
            let mut e = vec![FaceVector::co_singleton(q, 0); 5];
            e[0] = full;
            e[1] = full;
            let v = s.find(0, &FaceVector::new(q, e).unwrap()).unwrap();
            let link = s.complex().link_cycle(v).unwrap();
            assert_eq!(link.len(), 2 * q);
            let js: Vec<(usize, usize)> = link.iter().map(|&g| (pgon_js(&s.pgons()[g])[0], pgon_js(&s.pgons()[g])[1])).collect();
            let start = js.iter().position(|&x| x == (0, 0)).unwrap();
            let n = js.len();
            let step_ok = |dir: isize| {
                (0..n).all(|t| {
                    let a = js[(start as isize + dir * t as isize).rem_euclid(n as isize) as usize];
                    let b = js[(start as isize + dir * (t as isize + 1)).rem_euclid(n as isize) as usize];
                    if t % 2 == 0 {
                        b == ((a.0 + 1) % q, a.1)
                    } else {
                        b == (a.0, (a.1 + q - 1) % q)
                    }
                })
            };
            assert!(step_ok(1) || step_ok(-1), "q = {q}: {js:?}");
        }
    }
}
