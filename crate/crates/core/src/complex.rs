//! Abstract polygonal 2-complexes (faces as cyclic vertex lists) and their
//! realizations with exact coordinates.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{affine_rank, nonnegative_solution, serde_rational_rows, sub, RatMatrix, Rational};

pub type Edge = (usize, usize);

fn edge(a: usize, b: usize) -> Edge {
    (a.min(b), a.max(b))
}

/// A 2-complex whose faces are polygons given as cyclic vertex sequences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonComplex {
    num_vertices: usize,
    faces: Vec<Vec<usize>>,
    #[serde(skip)]
    edges: Vec<Edge>,
}

impl PolygonComplex {
    pub fn from_faces(num_vertices: usize, faces: Vec<Vec<usize>>) -> Result<Self> {
        let mut edges = BTreeSet::new();
        for (k, f) in faces.iter().enumerate() {
            if f.len() < 3 {
                return Err(Error::FaceInvalid { face: k, reason: "fewer than three vertices".into() });
            }
            let distinct: BTreeSet<usize> = f.iter().copied().collect();
            if distinct.len() != f.len() {
                return Err(Error::FaceInvalid { face: k, reason: "repeated vertex".into() });
            }
            if let Some(v) = f.iter().find(|&&v| v >= num_vertices) {
                return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
            }
            for i in 0..f.len() {
                edges.insert(edge(f[i], f[(i + 1) % f.len()]));
            }
        }
        Ok(Self { num_vertices, faces, edges: edges.into_iter().collect() })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn f_vector(&self) -> [usize; 3] {
        [self.num_vertices, self.edges.len(), self.faces.len()]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    fn face_edges(&self, k: usize) -> impl Iterator<Item = Edge> + '_ {
        let f = &self.faces[k];
        (0..f.len()).map(move |i| edge(f[i], f[(i + 1) % f.len()]))
    }

    /// Faces containing each edge.
    pub fn edge_faces(&self) -> BTreeMap<Edge, Vec<usize>> {
        let mut map: BTreeMap<Edge, Vec<usize>> = self.edges.iter().map(|&e| (e, Vec::new())).collect();
        for k in 0..self.faces.len() {
            for e in self.face_edges(k) {
                map.get_mut(&e).unwrap().push(k);
            }
        }
        map
    }

    /// Faces containing each vertex.
    pub fn vertex_faces(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_vertices];
        for (k, f) in self.faces.iter().enumerate() {
            for &v in f {
                out[v].push(k);
            }
        }
        out
    }

    /// Faces around vertex `v` in cyclic order, walking across shared edges,
    /// or `None` if they do not form a single closed cycle.
    pub fn link_cycle(&self, v: usize) -> Option<Vec<usize>> {
        let around = &self.vertex_faces()[v];
        self.link_cycle_in(v, around, &self.edge_faces())
    }

    fn link_cycle_in(&self, v: usize, around: &[usize], edge_faces: &BTreeMap<Edge, Vec<usize>>) -> Option<Vec<usize>> {
        let first = *around.first()?;
        let mut cycle = vec![first];
        // the two edges of a face at v
        let edges_at = |k: usize| -> [Edge; 2] {
            let f = &self.faces[k];
            let i = f.iter().position(|&x| x == v).unwrap();
            let n = f.len();
            [edge(v, f[(i + 1) % n]), edge(v, f[(i + n - 1) % n])]
        };
        let mut current = first;
        let mut via = edges_at(first)[0];
        loop {
            let across = edge_faces.get(&via)?;
            if across.len() != 2 {
                return None;
            }
            let next = if across[0] == current { across[1] } else { across[0] };
            if next == first {
                break;
            }
            if cycle.contains(&next) {
                return None;
            }
            cycle.push(next);
            let [a, b] = edges_at(next);
            via = if a == via { b } else { a };
            current = next;
        }
        (cycle.len() == around.len()).then_some(cycle)
    }

    /// Every edge lies in exactly two faces and the faces around each vertex
    /// form one cycle.
    pub fn is_closed_manifold(&self) -> bool {
        let ef = self.edge_faces();
        if ef.values().any(|fs| fs.len() != 2) {
            return false;
        }
        let vf = self.vertex_faces();
        (0..self.num_vertices).all(|v| self.link_cycle_in(v, &vf[v], &ef).is_some())
    }

    /// Connected through shared edges, with every vertex in some face.
    pub fn is_connected(&self) -> bool {
        if self.faces.is_empty() {
            return self.num_vertices == 0;
        }
        let vf = self.vertex_faces();
        if vf.iter().any(Vec::is_empty) {
            return false;
        }
        let ef = self.edge_faces();
        let mut seen = vec![false; self.faces.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(k) = queue.pop_front() {
            for e in self.face_edges(k) {
                for &g in &ef[&e] {
                    if !seen[g] {
                        seen[g] = true;
                        queue.push_back(g);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// A choice of reversal per face making every interior edge appear in
    /// opposite directions in its two faces; `None` if impossible.
    pub fn orientation(&self) -> Option<Vec<bool>> {
        let ef = self.edge_faces();
        let mut flip: Vec<Option<bool>> = vec![None; self.faces.len()];
        for start in 0..self.faces.len() {
            if flip[start].is_some() {
                continue;
            }
            flip[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(k) = queue.pop_front() {
                let fk = flip[k].unwrap();
                for (a, b) in directed_edges(&self.faces[k]) {
                    for &g in &ef[&edge(a, b)] {
                        if g == k {
                            continue;
                        }
                        // g must traverse a -> b backwards after its flip
                        let same = directed_edges(&self.faces[g]).any(|d| d == (a, b));
                        let want = fk ^ same;
                        match flip[g] {
                            None => {
                                flip[g] = Some(want);
                                queue.push_back(g);
                            }
                            Some(x) if x != want => return None,
                            _ => {}
                        }
                    }
                }
            }
        }
        Some(flip.into_iter().map(|f| f.unwrap()).collect())
    }

    /// Faces with the reversals of [`PolygonComplex::orientation`] applied.
    pub fn oriented(&self) -> Option<PolygonComplex> {
        let flips = self.orientation()?;
        let faces = self
            .faces
            .iter()
            .zip(flips)
            .map(|(f, r)| if r { f.iter().rev().copied().collect() } else { f.clone() })
            .collect();
        Some(PolygonComplex { num_vertices: self.num_vertices, faces, edges: self.edges.clone() })
    }

    /// `1 - chi/2` for a closed connected orientable surface.
    pub fn genus(&self) -> Result<i64> {
        if !self.is_closed_manifold() {
            return Err(Error::NotSurface("not a closed manifold".into()));
        }
        if !self.is_connected() {
            return Err(Error::NotSurface("disconnected".into()));
        }
        if self.orientation().is_none() {
            return Err(Error::NotSurface("non-orientable".into()));
        }
        Ok(1 - self.euler_characteristic() / 2)
    }

    /// The dual complex of a closed manifold: one vertex per face, one face
    /// per vertex listing the surrounding faces in cyclic order.
    pub fn dual(&self) -> Result<PolygonComplex> {
        if !self.is_closed_manifold() {
            return Err(Error::NotSurface("dual needs a closed manifold".into()));
        }
        let ef = self.edge_faces();
        let vf = self.vertex_faces();
        let faces = (0..self.num_vertices).map(|v| self.link_cycle_in(v, &vf[v], &ef).unwrap()).collect();
        PolygonComplex::from_faces(self.faces.len(), faces)
    }

    fn neighbours(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.num_vertices];
        for &(a, b) in &self.edges {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        adj
    }

    fn face_sets(&self) -> BTreeSet<Vec<usize>> {
        self.faces
            .iter()
            .map(|f| {
                let mut s = f.clone();
                s.sort_unstable();
                s
            })
            .collect()
    }

    /// A vertex bijection carrying edges to edges and faces to faces.
    pub fn isomorphism(&self, other: &PolygonComplex) -> Option<Vec<usize>> {
        if self.f_vector() != other.f_vector() {
            return None;
        }
        let (a_adj, b_adj) = (self.neighbours(), other.neighbours());
        let n = self.num_vertices;
        // visit vertices in BFS order so each new vertex has a mapped neighbour
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for &w in &a_adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        let target_faces = other.face_sets();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        let ok = extend(0, &order, &a_adj, &b_adj, &mut map, &mut used, &|map: &[usize]| {
            self.faces.iter().all(|f| {
                let mut img: Vec<usize> = f.iter().map(|&v| map[v]).collect();
                img.sort_unstable();
                target_faces.contains(&img)
            })
        });
        ok.then_some(map)
    }
}

fn directed_edges(f: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..f.len()).map(move |i| (f[i], f[(i + 1) % f.len()]))
}

fn extend(
    depth: usize,
    order: &[usize],
    a_adj: &[BTreeSet<usize>],
    b_adj: &[BTreeSet<usize>],
    map: &mut [usize],
    used: &mut [bool],
    finish: &dyn Fn(&[usize]) -> bool,
) -> bool {
    if depth == order.len() {
        return finish(map);
    }
    let v = order[depth];
    let mapped_nb: Vec<usize> = a_adj[v].iter().copied().filter(|&w| map[w] != usize::MAX).collect();
    let candidates: Vec<usize> = match mapped_nb.first() {
        Some(&w) => b_adj[map[w]].iter().copied().collect(),
        None => (0..map.len()).collect(),
    };
    for c in candidates {
        if used[c] || b_adj[c].len() != a_adj[v].len() {
            continue;
        }
        // adjacency to already-mapped vertices must agree both ways
        let consistent = order[..depth].iter().all(|&u| a_adj[v].contains(&u) == b_adj[c].contains(&map[u]));
        if !consistent {
            continue;
        }
        map[v] = c;
        used[c] = true;
        if extend(depth + 1, order, a_adj, b_adj, map, used, finish) {
            return true;
        }
        map[v] = usize::MAX;
        used[c] = false;
    }
    false
}

/// A polygon complex with exact coordinates for every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizedComplex {
    pub complex: PolygonComplex,
    #[serde(with = "serde_rational_rows")]
    pub coords: Vec<Vec<Rational>>,
}

/// Two coordinates that project the affine hull of `pts` injectively.
fn injective_pair(pts: &[Vec<Rational>]) -> Option<Vec<usize>> {
    let diffs: Vec<Vec<Rational>> = pts[1..].iter().map(|p| sub(p, &pts[0])).collect();
    let pivots = RatMatrix::from_rows(&diffs).rref();
    (pivots.len() == 2).then_some(pivots)
}

fn orient2(a: &[Rational; 2], b: &[Rational; 2], c: &[Rational; 2]) -> Rational {
    (&b[0] - &a[0]) * (&c[1] - &a[1]) - (&b[1] - &a[1]) * (&c[0] - &a[0])
}

impl RealizedComplex {
    pub fn new(complex: PolygonComplex, coords: Vec<Vec<Rational>>) -> Result<Self> {
        if coords.len() != complex.num_vertices() {
            return Err(Error::DimensionMismatch { expected: complex.num_vertices(), found: coords.len() });
        }
        let dim = coords.first().map_or(0, Vec::len);
        if coords.iter().any(|c| c.len() != dim) {
            return Err(Error::InvalidArgument("coordinates of mixed dimension".into()));
        }
        Ok(Self { complex, coords })
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.first().map_or(0, Vec::len)
    }

    fn face_points(&self, k: usize) -> Vec<Vec<Rational>> {
        self.complex.faces[k].iter().map(|&v| self.coords[v].clone()).collect()
    }

    /// Checks one face: planar, and a strictly convex polygon whose boundary
    /// order is the stored cyclic order.
    pub fn verify_face(&self, k: usize) -> Result<()> {
        let pts = self.face_points(k);
        let bad = |reason: &str| Error::FaceInvalid { face: k, reason: reason.into() };
        if affine_rank(&pts) != 2 {
            return Err(bad("vertices are not spanning a plane"));
        }
        let pair = injective_pair(&pts).ok_or_else(|| bad("no planar chart"))?;
        let flat: Vec<[Rational; 2]> = pts.iter().map(|p| [p[pair[0]].clone(), p[pair[1]].clone()]).collect();
        let n = flat.len();
        let mut sign = 0i8;
        for i in 0..n {
            let (a, b) = (&flat[i], &flat[(i + 1) % n]);
            for (t, c) in flat.iter().enumerate() {
                if t == i || t == (i + 1) % n {
                    continue;
                }
                let o = orient2(a, b, c);
                let s = if o.is_positive() { 1 } else if o.is_negative() { -1 } else { 0 };
                if s == 0 {
                    return Err(bad("three vertices are collinear"));
                }
                if sign == 0 {
                    sign = s;
                } else if s != sign {
                    return Err(bad("not convex in the given cyclic order"));
                }
            }
        }
        Ok(())
    }

    pub fn verify_faces(&self) -> Result<()> {
        (0..self.complex.faces.len()).try_for_each(|k| self.verify_face(k))
    }

    /// Whether faces `a` and `b` meet exactly in the convex hull of their
    /// shared vertices, which must be empty, a vertex or a common edge.
    pub fn faces_meet_properly(&self, a: usize, b: usize) -> bool {
        let fa = &self.complex.faces[a];
        let fb = &self.complex.faces[b];
        let shared: BTreeSet<usize> = fa.iter().filter(|v| fb.contains(v)).copied().collect();
        match shared.len() {
            0 | 1 => {}
            2 => {
                let mut it = shared.iter();
                let e = edge(*it.next().unwrap(), *it.next().unwrap());
                let is_edge = |f: &[usize]| directed_edges(f).any(|(x, y)| edge(x, y) == e);
                if !is_edge(fa) || !is_edge(fb) {
                    return false;
                }
            }
            _ => return false,
        }
        if self.boxes_disjoint(a, b) {
            return true;
        }
        if self.ambient_dim() == 3 {
            if let Some(proper) = self.meet_properly_3d(a, b, &shared) {
                return proper;
            }
        }
        self.meet_properly_lp(a, b, &shared)
    }

    /// Exact LP test: no common point puts weight on a vertex of `a` outside
    /// the shared set.
    fn meet_properly_lp(&self, a: usize, b: usize, shared: &BTreeSet<usize>) -> bool {
        let fa = &self.complex.faces[a];
        let fb = &self.complex.faces[b];
        // look for a common point using weight on a vertex of `a` outside the
        // shared set
        let dim = self.ambient_dim();
        let (na, nb) = (fa.len(), fb.len());
        let mut m = RatMatrix::zeros(dim + 2, na + nb + 1);
        let one = Rational::from_integer(1.into());
        for (c, &v) in fa.iter().enumerate() {
            for r in 0..dim {
                m.set(r, c, self.coords[v][r].clone());
            }
            m.set(dim, c, one.clone());
            if !shared.contains(&v) {
                m.set(dim + 1, c, one.clone());
            }
        }
        for (c, &v) in fb.iter().enumerate() {
            for r in 0..dim {
                m.set(r, na + c, -self.coords[v][r].clone());
            }
            m.set(dim, na + c, -one.clone());
        }
        m.set(dim + 1, na + nb, -one.clone());
        let mut rhs = vec![Rational::zero(); dim + 2];
        rhs[dim + 1] = one;
        !nonnegative_solution(&m, &rhs).is_feasible()
    }

    /// Test for two non-coplanar planar convex polygons in R^3: each meets
    /// the other's plane in a segment on the common line, and the overlap of
    /// the two segments must be exactly the hull of the shared vertices.
    /// Returns `None` for coplanar or degenerate input.
    fn meet_properly_3d(&self, a: usize, b: usize, shared: &BTreeSet<usize>) -> Option<bool> {
        let (pa, pb) = (self.face_points(a), self.face_points(b));
        let na = plane_normal(&pa)?;
        let nb = plane_normal(&pb)?;
        let side_b: Vec<Rational> = pb.iter().map(|x| dot3(&na, &sub(x, &pa[0]))).collect();
        let side_a: Vec<Rational> = pa.iter().map(|x| dot3(&nb, &sub(x, &pb[0]))).collect();
        if side_b.iter().all(Zero::is_zero) {
            return None;
        }
        if strictly_one_side(&side_b) || strictly_one_side(&side_a) {
            return Some(true);
        }
        let line = cross3(&na, &nb);
        let k = line.iter().position(|x| !x.is_zero())?;
        let (alo, ahi) = plane_section(&pa, &side_a, k)?;
        let (blo, bhi) = plane_section(&pb, &side_b, k)?;
        let lo = alo.max(blo);
        let hi = ahi.min(bhi);
        let ts: Vec<&Rational> = shared.iter().map(|&v| &self.coords[v][k]).collect();
        Some(match ts.as_slice() {
            [] => lo > hi,
            [t] => lo == hi && lo == **t,
            [t, u] => lo == *(*t).min(*u) && hi == *(*t).max(*u),
            _ => false,
        })
    }

    fn boxes_disjoint(&self, a: usize, b: usize) -> bool {
        let (pa, pb) = (self.face_points(a), self.face_points(b));
        (0..self.ambient_dim()).any(|r| {
            let amax = pa.iter().map(|p| &p[r]).max().unwrap();
            let amin = pa.iter().map(|p| &p[r]).min().unwrap();
            let bmax = pb.iter().map(|p| &p[r]).max().unwrap();
            let bmin = pb.iter().map(|p| &p[r]).min().unwrap();
            amax < bmin || bmax < amin
        })
    }

    /// Exact pairwise test over all faces.
    pub fn verify_embedding(&self) -> Result<()> {
        let n = self.complex.faces.len();
        for a in 0..n {
            for b in a + 1..n {
                if !self.faces_meet_properly(a, b) {
                    return Err(Error::FacesIntersect { a, b });
                }
            }
        }
        Ok(())
    }

    /// Only pairs of faces that share a vertex.
    pub fn verify_local_embedding(&self) -> Result<()> {
        let vf = self.complex.vertex_faces();
        let mut pairs = BTreeSet::new();
        for fs in &vf {
            for (i, &a) in fs.iter().enumerate() {
                for &b in &fs[i + 1..] {
                    pairs.insert((a.min(b), a.max(b)));
                }
            }
        }
        for (a, b) in pairs {
            if !self.faces_meet_properly(a, b) {
                return Err(Error::FacesIntersect { a, b });
            }
        }
        Ok(())
    }

    /// Images of the vertices under a linear map given by its rows.
    pub fn map_linear(&self, rows: &[Vec<Rational>]) -> RealizedComplex {
        let m = RatMatrix::from_rows(rows);
        let coords = self.coords.iter().map(|c| m.mul_vec(c)).collect();
        RealizedComplex { complex: self.complex.clone(), coords }
    }
}

fn cross3(u: &[Rational], v: &[Rational]) -> Vec<Rational> {
    vec![
        &u[1] * &v[2] - &u[2] * &v[1],
        &u[2] * &v[0] - &u[0] * &v[2],
        &u[0] * &v[1] - &u[1] * &v[0],
    ]
}

fn dot3(u: &[Rational], v: &[Rational]) -> Rational {
    u.iter().zip(v).map(|(x, y)| x * y).sum()
}

fn plane_normal(pts: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = cross3(&sub(&pts[1], &pts[0]), &sub(&pts[2], &pts[0]));
    (!n.iter().all(Zero::is_zero)).then_some(n)
}

fn strictly_one_side(side: &[Rational]) -> bool {
    side.iter().all(Signed::is_positive) || side.iter().all(Signed::is_negative)
}

/// Range of coordinate `k` over the intersection of a convex polygon with
/// a plane, given the signed side of each vertex.
fn plane_section(pts: &[Vec<Rational>], side: &[Rational], k: usize) -> Option<(Rational, Rational)> {
    let n = pts.len();
    let mut ts = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        if side[i].is_zero() {
            ts.push(pts[i][k].clone());
        } else if side[i].is_positive() != side[j].is_positive() && !side[j].is_zero() {
            let w = &side[i] / (&side[i] - &side[j]);
            ts.push(&pts[i][k] + w * (&pts[j][k] - &pts[i][k]));
        }
    }
    let lo = ts.iter().min()?.clone();
    let hi = ts.iter().max()?.clone();
    Some((lo, hi))
}
