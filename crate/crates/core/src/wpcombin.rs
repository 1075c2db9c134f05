//! Combinatorics of wedge products: faces as vectors `(H_0, ..., H_{m-1})`
//! of subsets of the second factor's facets, with `j in H_i` meaning the
//! face lies on facet `(i, j)`.

use std::fmt;

use itertools::Itertools;
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};

/// Parameters of `wp(p, q-1)`, the wedge product of a `p`-gon with a
/// `(q-1)`-simplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct WpParams {
    pub p: usize,
    pub q: usize,
}

impl WpParams {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p < 3 {
            return Err(Error::InvalidArgument(format!("p must be at least 3, got {p}")));
        }
        if q == 0 || q > 64 {
            return Err(Error::InvalidArgument(format!("q must be in 1..=64, got {q}")));
        }
        Ok(Self { p, q })
    }

    pub fn dim(&self) -> usize {
        2 + self.p * (self.q - 1)
    }

    pub fn num_facets(&self) -> usize {
        self.p * self.q
    }

    pub fn num_vertices(&self) -> usize {
        self.p * self.q.pow(self.p as u32 - 2)
    }

    pub fn num_pgons(&self) -> usize {
        self.q.pow(self.p as u32)
    }
}

/// A face of a wedge product; entry `i` is a bitmask over `[m']`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceVector {
    mprime: usize,
    entries: Vec<u64>,
}

fn full_mask(mprime: usize) -> u64 {
    if mprime == 64 {
        u64::MAX
    } else {
        (1u64 << mprime) - 1
    }
}

impl FaceVector {
    pub fn new(mprime: usize, entries: Vec<u64>) -> Result<Self> {
        if mprime == 0 || mprime > 64 {
            return Err(Error::InvalidArgument(format!("m' must be in 1..=64, got {mprime}")));
        }
        if entries.iter().any(|&e| e & !full_mask(mprime) != 0) {
            return Err(Error::InvalidArgument("entry is not a subset of [m']".into()));
        }
        Ok(Self { mprime, entries })
    }

    /// From explicit index sets.
    pub fn from_sets(mprime: usize, sets: &[Vec<usize>]) -> Result<Self> {
        let mut entries = Vec::with_capacity(sets.len());
        for s in sets {
            let mut mask = 0u64;
            for &j in s {
                if j >= mprime {
                    return Err(Error::InvalidArgument(format!("index {j} outside [{mprime}]")));
                }
                mask |= 1 << j;
            }
            entries.push(mask);
        }
        Self::new(mprime, entries)
    }

    pub fn m(&self) -> usize {
        self.entries.len()
    }

    pub fn mprime(&self) -> usize {
        self.mprime
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> u64 {
        self.entries[i]
    }

    pub fn entry_set(&self, i: usize) -> Vec<usize> {
        (0..self.mprime).filter(|j| self.entries[i] >> j & 1 == 1).collect()
    }

    pub fn is_full(&self, i: usize) -> bool {
        self.entries[i] == full_mask(self.mprime)
    }

    /// `[m'] \ {j}`
    pub fn co_singleton(mprime: usize, j: usize) -> u64 {
        full_mask(mprime) & !(1u64 << j)
    }

    pub fn full(mprime: usize) -> u64 {
        full_mask(mprime)
    }

    /// The index `j` if entry `i` is the co-singleton of `j`.
    pub fn co_singleton_index(&self, i: usize) -> Option<usize> {
        let missing = full_mask(self.mprime) & !self.entries[i];
        (missing.count_ones() == 1).then(|| missing.trailing_zeros() as usize)
    }

    /// All pairs `(i, j)` with `j in H_i`: the facets containing the face.
    pub fn tight_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.m()).flat_map(|i| self.entry_set(i).into_iter().map(move |j| (i, j))).collect()
    }

    pub fn num_tight(&self) -> usize {
        self.entries.iter().map(|e| e.count_ones() as usize).sum()
    }

    fn same_shape(&self, other: &FaceVector) -> Result<()> {
        if self.mprime != other.mprime || self.m() != other.m() {
            return Err(Error::DimensionMismatch { expected: self.m(), found: other.m() });
        }
        Ok(())
    }
}

/// Whether face `a` is contained in face `b`, i.e. every entry of `b` is a
/// subset of the matching entry of `a`.
pub fn incidence(a: &FaceVector, b: &FaceVector) -> Result<bool> {
    a.same_shape(b)?;
    Ok(a.entries.iter().zip(&b.entries).all(|(x, y)| y & !x == 0))
}

impl fmt::Display for FaceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.m() {
            if i > 0 {
                write!(f, ",")?;
            }
            if self.is_full(i) {
                write!(f, "[{}]", self.mprime)?;
            } else if let Some(j) = self.co_singleton_index(i).filter(|_| self.mprime > 1) {
                write!(f, "~{j}")?;
            } else {
                write!(f, "{{{}}}", self.entry_set(i).iter().join(" "))?;
            }
        }
        write!(f, ")")
    }
}

impl Serialize for FaceVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.m()))?;
        for i in 0..self.m() {
            seq.serialize_element(&self.entry_set(i))?;
        }
        seq.end()
    }
}

/// Vertices of `P ⋀ Q` from the vertex-facet incidences of the factors.
///
/// `p_vertices` and `q_vertices` list, per vertex, the facet indices it
/// lies on. A vector is a vertex when its full entries form a vertex of `P`
/// and every other entry is a vertex of `Q`.
pub fn wedge_product_vertices(
    m: usize,
    p_vertices: &[Vec<usize>],
    mprime: usize,
    q_vertices: &[Vec<usize>],
) -> Result<Vec<FaceVector>> {
    let q_masks: Vec<u64> = q_vertices
        .iter()
        .map(|v| FaceVector::from_sets(mprime, std::slice::from_ref(v)).map(|f| f.entries[0]))
        .collect::<Result<_>>()?;
    let full = full_mask(mprime);
    let mut out = Vec::new();
    for pv in p_vertices {
        if pv.iter().any(|&i| i >= m) {
            return Err(Error::InvalidArgument(format!("facet index outside [{m}]")));
        }
        let free: Vec<usize> = (0..m).filter(|i| !pv.contains(i)).collect();
        for choice in free.iter().map(|_| q_masks.iter().copied()).multi_cartesian_product() {
            let mut entries = vec![full; m];
            for (&i, c) in free.iter().zip(choice) {
                entries[i] = c;
            }
            out.push(FaceVector { mprime, entries });
        }
        if free.is_empty() {
            out.push(FaceVector { mprime, entries: vec![full; m] });
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn co_singleton_vectors(params: WpParams, positions: &[usize]) -> Vec<Vec<u64>> {
    let q = params.q;
    positions
        .iter()
        .map(|_| (0..q).map(move |j| FaceVector::co_singleton(q, j)))
        .multi_cartesian_product()
        .collect()
}

/// Vertices of `wp(p, q-1)`: two cyclically adjacent full entries, all other
/// entries co-singletons. Ordered by the position of the full pair, then
/// lexicographically in the remaining indices.
pub fn wp_vertices(params: WpParams) -> Vec<FaceVector> {
    let (p, q) = (params.p, params.q);
    let mut out = Vec::with_capacity(params.num_vertices());
    for i in 0..p {
        let fulls = [i, (i + 1) % p];
        let rest: Vec<usize> = (0..p).filter(|k| !fulls.contains(k)).collect();
        let choices = if rest.is_empty() { vec![Vec::new()] } else { co_singleton_vectors(params, &rest) };
        for choice in choices {
            let mut entries = vec![full_mask(q); p];
            for (&k, c) in rest.iter().zip(choice) {
                entries[k] = c;
            }
            out.push(FaceVector { mprime: q, entries });
        }
    }
    out
}

/// Edges with one full entry and co-singletons elsewhere.
pub fn wp_edges(params: WpParams) -> Vec<FaceVector> {
    let (p, q) = (params.p, params.q);
    let mut out = Vec::with_capacity(p * q.pow(p as u32 - 1));
    for k in 0..p {
        let rest: Vec<usize> = (0..p).filter(|&i| i != k).collect();
        for choice in co_singleton_vectors(params, &rest) {
            let mut entries = vec![full_mask(q); p];
            for (&i, c) in rest.iter().zip(choice) {
                entries[i] = c;
            }
            out.push(FaceVector { mprime: q, entries });
        }
    }
    out
}

/// The `q^p` p-gon faces `(~j_0, ..., ~j_{p-1})`, lexicographic in `j`.
pub fn wp_pgons(params: WpParams) -> Vec<FaceVector> {
    let all: Vec<usize> = (0..params.p).collect();
    co_singleton_vectors(params, &all).into_iter().map(|entries| FaceVector { mprime: params.q, entries }).collect()
}

/// The p-gon `(~j_0, ..., ~j_{p-1})`.
pub fn pgon(params: WpParams, js: &[usize]) -> Result<FaceVector> {
    if js.len() != params.p || js.iter().any(|&j| j >= params.q) {
        return Err(Error::InvalidArgument(format!("bad p-gon indices {js:?}")));
    }
    Ok(FaceVector { mprime: params.q, entries: js.iter().map(|&j| FaceVector::co_singleton(params.q, j)).collect() })
}

/// Facet index of `(i, j)` in the row order of the wedge-product system.
pub fn facet_index(mprime: usize, i: usize, j: usize) -> usize {
    i * mprime + j
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: usize, q: usize) -> WpParams {
        WpParams::new(p, q).unwrap()
    }

    #[test]
    fn vertex_counts() {
        assert_eq!(wp_vertices(params(3, 2)).len(), 6);
        assert_eq!(wp_vertices(params(5, 2)).len(), 40);
        assert_eq!(wp_vertices(params(4, 3)).len(), 36);
        assert_eq!(wp_vertices(params(4, 1)).len(), 4);
    }

    #[test]
    fn pgon_counts() {
        assert_eq!(wp_pgons(params(3, 2)).len(), 8);
        assert_eq!(wp_pgons(params(5, 2)).len(), 32);
        assert_eq!(wp_pgons(params(4, 3)).len(), 81);
    }

    #[test]
    fn general_vertices_match_special_case() {
        for (p, q) in [(3, 2), (4, 2), (3, 3), (5, 2), (4, 3)] {
            let pv: Vec<Vec<usize>> = (0..p).map(|i| vec![i, (i + 1) % p]).collect();
            let qv: Vec<Vec<usize>> = (0..q).map(|j| (0..q).filter(|&k| k != j).collect()).collect();
            let mut expected = wp_vertices(params(p, q));
            expected.sort();
            assert_eq!(wedge_product_vertices(p, &pv, q, &qv).unwrap(), expected);
        }
    }

    #[test]
    fn interval_wedge_interval() {
        let iv = vec![vec![0], vec![1]];
        let v = wedge_product_vertices(2, &iv, 2, &iv).unwrap();
        assert_eq!(v.len(), 4);
    }

    #[test]
    fn incidences() {
        let pr = params(4, 2);
        let f = |sets: &[&[usize]]| FaceVector::from_sets(2, &sets.iter().map(|s| s.to_vec()).collect::<Vec<_>>()).unwrap();
        let vertex = f(&[&[0, 1], &[0, 1], &[1], &[1]]);
        let edge = f(&[&[0, 1], &[1], &[1], &[1]]);
        assert!(incidence(&vertex, &edge).unwrap());
        assert!(!incidence(&edge, &vertex).unwrap());
        assert!(incidence(&edge, &edge).unwrap());
        let pgons = wp_pgons(pr);
        for a in &pgons {
            for b in &pgons {
                assert_eq!(incidence(a, b).unwrap(), a == b);
            }
        }
        let other = FaceVector::from_sets(3, &[vec![0], vec![1], vec![2], vec![0]]).unwrap();
        assert!(incidence(&vertex, &other).is_err());
    }

    #[test]
    fn pgons_have_p_cycle_of_vertices() {
        for (p, q) in [(3, 2), (4, 2), (5, 2), (3, 3), (4, 3)] {
            let pr = params(p, q);
            let verts = wp_vertices(pr);
            let edges = wp_edges(pr);
            for g in wp_pgons(pr) {
                let vs: Vec<&FaceVector> = verts.iter().filter(|v| incidence(v, &g).unwrap()).collect();
                assert_eq!(vs.len(), p);
                let es: Vec<&FaceVector> = edges.iter().filter(|e| incidence(e, &g).unwrap()).collect();
                assert_eq!(es.len(), p);
                for v in &vs {
                    assert_eq!(es.iter().filter(|e| incidence(v, e).unwrap()).count(), 2);
                }
            }
        }
    }

    #[test]
    fn vertices_lie_on_dim_many_facets() {
        for (p, q) in [(3, 2), (5, 2), (4, 3), (6, 3)] {
            let pr = params(p, q);
            assert!(wp_vertices(pr).iter().all(|v| v.num_tight() == pr.dim()));
        }
    }

    #[test]
    fn json_and_display() {
        let g = pgon(params(3, 2), &[0, 1, 0]).unwrap();
        assert_eq!(serde_json::to_string(&g).unwrap(), "[[1],[0],[1]]");
        assert_eq!(g.to_string(), "(~0,~1,~0)");
        assert!(pgon(params(3, 2), &[0, 2, 0]).is_err());
        assert!(WpParams::new(2, 2).is_err());
    }
}
