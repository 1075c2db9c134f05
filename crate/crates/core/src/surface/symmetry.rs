use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::SurfaceComplex;
use crate::error::{Error, Result};
use crate::wpcombin::{incidence, FaceVector};

/// Flags beyond this count are not enumerated.
pub const FLAG_GUARD: usize = 100_000;

/// The four generating automorphisms, acting entrywise on face vectors
/// (each index map is applied to every element of an entry, so full
/// entries stay full).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Generator {
    /// Reverse the vector.
    F,
    /// `j_0 -> 1 - j_0`, `j_k -> -j_k` otherwise.
    P,
    /// `j_0 -> j_0 + 1`, `j_1 -> j_1 - 1`.
    R,
    /// Cyclic shift to the left.
    S,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::F, Generator::P, Generator::R, Generator::S];
}

fn map_mask(mask: u64, q: usize, f: impl Fn(usize) -> usize) -> u64 {
    (0..q).filter(|j| mask >> j & 1 == 1).fold(0, |acc, j| acc | 1 << (f(j) % q))
}

fn act(g: Generator, f: &FaceVector) -> FaceVector {
    let q = f.mprime();
    let e = f.entries();
    let p = e.len();
    let entries: Vec<u64> = match g {
        Generator::F => e.iter().rev().copied().collect(),
        Generator::S => (0..p).map(|k| e[(k + 1) % p]).collect(),
        Generator::P => e
            .iter()
            .enumerate()
            .map(|(k, &m)| if k == 0 { map_mask(m, q, |j| q + 1 - j) } else { map_mask(m, q, |j| q - j) })
            .collect(),
        Generator::R => e
            .iter()
            .enumerate()
            .map(|(k, &m)| match k {
                0 => map_mask(m, q, |j| j + 1),
                1 => map_mask(m, q, |j| j + q - 1),
                _ => m,
            })
            .collect(),
    };
    FaceVector::new(q, entries).expect("entrywise image stays inside [q]")
}

/// Image of a face of the surface; fails if it is not a face of the same
/// dimension.
pub fn apply_automorphism(s: &SurfaceComplex, g: Generator, f: &FaceVector) -> Result<FaceVector> {
    let dim = (0..3).find(|&d| s.find(d, f).is_some()).ok_or_else(|| Error::NotAFace(f.to_string()))?;
    let img = act(g, f);
    if s.find(dim, &img).is_none() {
        return Err(Error::NotAFace(img.to_string()));
    }
    Ok(img)
}

/// Checks that `g` permutes vertices, edges and p-gons and preserves
/// incidence between them.
pub fn generator_is_automorphism(s: &SurfaceComplex, g: Generator) -> bool {
    let levels = [s.vertices(), s.edges(), s.pgons()];
    let mut images: Vec<Vec<usize>> = Vec::with_capacity(3);
    for (d, faces) in levels.iter().enumerate() {
        let mut img = Vec::with_capacity(faces.len());
        for f in faces.iter() {
            match s.find(d, &act(g, f)) {
                Some(i) => img.push(i),
                None => return false,
            }
        }
        if img.iter().collect::<BTreeSet<_>>().len() != faces.len() {
            return false;
        }
        images.push(img);
    }
    for (lo, hi) in [(0, 1), (1, 2), (0, 2)] {
        for (a, fa) in levels[lo].iter().enumerate() {
            for (b, fb) in levels[hi].iter().enumerate() {
                let before = incidence(fa, fb).unwrap();
                let after = incidence(&levels[lo][images[lo][a]], &levels[hi][images[hi][b]]).unwrap();
                if before != after {
                    return false;
                }
            }
        }
    }
    true
}

/// Incident vertex, edge and p-gon, as indices into the surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Flag {
    pub vertex: usize,
    pub edge: usize,
    pub pgon: usize,
}

/// `(Zq, Zq, ~0, ...) ⊂ (Zq, ~0, ...) ⊂ (~0, ..., ~0)`
pub fn base_flag(s: &SurfaceComplex) -> Flag {
    let (p, q) = (s.params().p, s.params().q);
    let zero = FaceVector::co_singleton(q, 0);
    let full = FaceVector::full(q);
    let mut e = vec![zero; p];
    let pgon = s.find(2, &FaceVector::new(q, e.clone()).unwrap()).unwrap();
    e[0] = full;
    let edge = s.find(1, &FaceVector::new(q, e.clone()).unwrap()).unwrap();
    e[1] = full;
    let vertex = s.find(0, &FaceVector::new(q, e).unwrap()).unwrap();
    Flag { vertex, edge, pgon }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlagReport {
    pub flags: usize,
    pub orbit: usize,
    pub expected: usize,
    pub transitive: bool,
}

fn all_flags(s: &SurfaceComplex) -> BTreeSet<Flag> {
    let mut out = BTreeSet::new();
    for (k, g) in s.pgons().iter().enumerate() {
        let cycle = &s.cycles()[k];
        let p = cycle.len();
        for i in 0..p {
            // the edge between v_{i-1} and v_i has its full entry at i
            let mut e = g.entries().to_vec();
            e[i] = FaceVector::full(g.mprime());
            let edge = s.find(1, &FaceVector::new(g.mprime(), e).unwrap()).unwrap();
            for vertex in [cycle[(i + p - 1) % p], cycle[i]] {
                out.insert(Flag { vertex, edge, pgon: k });
            }
        }
    }
    out
}

/// Enumerates all flags and the orbit of the base flag under the four
/// generators.
pub fn check_flag_transitive(s: &SurfaceComplex) -> Result<FlagReport> {
    let (p, q) = (s.params().p, s.params().q);
    let expected = 4 * p * q.pow(p as u32 - 1);
    if expected > FLAG_GUARD {
        return Err(Error::GuardExceeded(expected));
    }
    let flags = all_flags(s);
    let start = base_flag(s);
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(f) = queue.pop_front() {
        for g in Generator::ALL {
            let img = Flag {
                vertex: s.find(0, &apply_automorphism(s, g, &s.vertices()[f.vertex])?).unwrap(),
                edge: s.find(1, &apply_automorphism(s, g, &s.edges()[f.edge])?).unwrap(),
                pgon: s.find(2, &apply_automorphism(s, g, &s.pgons()[f.pgon])?).unwrap(),
            };
            if !flags.contains(&img) {
                return Err(Error::NotAFace(format!("flag image {img:?} is not a flag")));
            }
            if seen.insert(img) {
                queue.push_back(img);
            }
        }
    }
    Ok(FlagReport { flags: flags.len(), orbit: seen.len(), expected, transitive: seen.len() == flags.len() })
}
