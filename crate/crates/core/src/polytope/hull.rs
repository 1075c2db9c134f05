use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{normalize_direction, supporting_plane, VPolytope};
use crate::error::{Error, Result};
use crate::exact::{affine_rank, dot, serde_rational, serde_rational_vec, sub, RatMatrix, Rational};

/// A face given by the indices of the input points that are its vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub dim: usize,
    pub vertices: Vec<usize>,
}

/// Supporting hyperplane `normal . x <= offset` of a facet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetPlane {
    #[serde(with = "serde_rational_vec")]
    pub normal: Vec<Rational>,
    #[serde(with = "serde_rational")]
    pub offset: Rational,
}

/// All proper nonempty faces of a full-dimensional polytope in dimension at
/// most 4, grouped by dimension.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    points: Vec<Vec<Rational>>,
    levels: Vec<Vec<Face>>,
    planes: Vec<FacetPlane>,
    index: Vec<BTreeMap<Vec<usize>, usize>>,
}

/// Exact gift wrapping, applied recursively to every facet.
pub fn facet_enumerate_4d(v: &VPolytope) -> Result<FaceLattice> {
    let d = v.dim();
    if d == 0 || d > 4 {
        return Err(Error::HullDimension(d));
    }
    let points = v.vertices().to_vec();
    if points.is_empty() || affine_rank(&points) != d {
        return Err(Error::Degenerate(format!("point set does not span R^{d}")));
    }
    let mut wrap = Wrapper { points: &points, memo: BTreeMap::new() };
    let all: Vec<usize> = (0..points.len()).collect();

    // members of every face, level by level from the facets down
    let mut member_levels: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); d];
    member_levels[d - 1] = wrap.facets_of(&all, d)?.into_iter().collect();
    for k in (0..d - 1).rev() {
        let parents: Vec<Vec<usize>> = member_levels[k + 1].iter().cloned().collect();
        for parent in parents {
            for child in wrap.facets_of(&parent, k + 1)? {
                member_levels[k].insert(child);
            }
        }
    }
    let extreme: BTreeSet<usize> = member_levels[0].iter().map(|m| m[0]).collect();

    let centroid = v.centroid();
    let mut levels = Vec::with_capacity(d);
    let mut index = Vec::with_capacity(d);
    let mut planes = Vec::new();
    for (k, members) in member_levels.iter().enumerate() {
        let mut faces: Vec<Face> = members
            .iter()
            .map(|m| Face { dim: k, vertices: m.iter().copied().filter(|i| extreme.contains(i)).collect() })
            .collect();
        faces.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        if k == d - 1 {
            for f in &faces {
                let pts: Vec<&Vec<Rational>> = f.vertices.iter().map(|&i| &points[i]).collect();
                let (normal, offset) = supporting_plane(&pts, &centroid)
                    .ok_or_else(|| Error::Degenerate("facet without a unique hyperplane".into()))?;
                planes.push(FacetPlane { normal, offset });
            }
        }
        index.push(faces.iter().enumerate().map(|(i, f)| (f.vertices.clone(), i)).collect());
        levels.push(faces);
    }
    Ok(FaceLattice { points, levels, planes, index })
}

impl FaceLattice {
    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    /// Indices of the input points that are vertices.
    pub fn vertex_indices(&self) -> Vec<usize> {
        self.levels[0].iter().map(|f| f.vertices[0]).collect()
    }

    pub fn faces(&self, k: usize) -> &[Face] {
        &self.levels[k]
    }

    pub fn facets(&self) -> &[Face] {
        &self.levels[self.dim() - 1]
    }

    /// Facet hyperplanes, aligned with [`FaceLattice::facets`].
    pub fn facet_planes(&self) -> &[FacetPlane] {
        &self.planes
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Index of the `k`-face with exactly these vertices.
    pub fn find(&self, k: usize, vertices: &[usize]) -> Option<usize> {
        let mut key = vertices.to_vec();
        key.sort_unstable();
        self.index.get(k)?.get(&key).copied()
    }

    /// Indices of `k`-faces containing all of `vertices`.
    pub fn faces_containing(&self, k: usize, vertices: &[usize]) -> Vec<usize> {
        self.levels[k]
            .iter()
            .enumerate()
            .filter(|(_, f)| vertices.iter().all(|v| f.vertices.binary_search(v).is_ok()))
            .map(|(i, _)| i)
            .collect()
    }

    /// Vertices of a 2-face in cyclic order along its edges.
    pub fn polygon_cycle(&self, face: usize) -> Vec<usize> {
        let f = &self.levels[2][face];
        let edges: Vec<&Face> = self.levels[1]
            .iter()
            .filter(|e| e.vertices.iter().all(|v| f.vertices.binary_search(v).is_ok()))
            .collect();
        let mut cycle = vec![f.vertices[0]];
        while cycle.len() < f.vertices.len() {
            let last = *cycle.last().unwrap();
            let prev = if cycle.len() > 1 { Some(cycle[cycle.len() - 2]) } else { None };
            let next = edges
                .iter()
                .filter(|e| e.vertices.contains(&last))
                .map(|e| if e.vertices[0] == last { e.vertices[1] } else { e.vertices[0] })
                .find(|&w| Some(w) != prev)
                .expect("2-face boundary is a cycle");
            cycle.push(next);
        }
        cycle
    }

    /// Facet hyperplanes rescaled to `n . x <= 1`, one point per facet; the
    /// vertices of the polar polytope. Requires the origin in the interior.
    pub fn polar_points(&self) -> Result<Vec<Vec<Rational>>> {
        self.planes
            .iter()
            .map(|pl| {
                if !pl.offset.is_positive() {
                    return Err(Error::OriginNotInterior);
                }
                Ok(pl.normal.iter().map(|x| x / &pl.offset).collect())
            })
            .collect()
    }
}

struct Wrapper<'a> {
    points: &'a [Vec<Rational>],
    memo: BTreeMap<Vec<usize>, Vec<Vec<usize>>>,
}

/// Local coordinates on the affine hull of a point set: the pivot columns of
/// the difference matrix give an injective coordinate projection.
fn local_coords(points: &[Vec<Rational>], members: &[usize]) -> Vec<Vec<Rational>> {
    let base = &points[members[0]];
    let diffs: Vec<Vec<Rational>> = members[1..].iter().map(|&i| sub(&points[i], base)).collect();
    let pivots = if diffs.is_empty() { Vec::new() } else { RatMatrix::from_rows(&diffs).rref() };
    members.iter().map(|&i| pivots.iter().map(|&c| points[i][c].clone()).collect()).collect()
}

fn cross(a: &(Rational, Rational), b: &(Rational, Rational)) -> Rational {
    &a.0 * &b.1 - &a.1 * &b.0
}

impl Wrapper<'_> {
    /// Facets of `conv(members)`, which has affine dimension `j`, as sorted
    /// member lists.
    fn facets_of(&mut self, members: &[usize], j: usize) -> Result<Vec<Vec<usize>>> {
        if let Some(hit) = self.memo.get(members) {
            return Ok(hit.clone());
        }
        let result = match j {
            0 => Vec::new(),
            1 => {
                let local = local_coords(self.points, members);
                let lo = (0..members.len()).min_by(|&a, &b| local[a][0].cmp(&local[b][0])).unwrap();
                let hi = (0..members.len()).max_by(|&a, &b| local[a][0].cmp(&local[b][0])).unwrap();
                vec![vec![members[lo]], vec![members[hi]]]
            }
            _ => self.wrap(members, j)?,
        };
        self.memo.insert(members.to_vec(), result.clone());
        Ok(result)
    }

    fn wrap(&mut self, members: &[usize], j: usize) -> Result<Vec<Vec<usize>>> {
        let local = local_coords(self.points, members);
        debug_assert!(local[0].len() == j);
        let on_plane = |f: &[Rational], c: &Rational| -> Vec<usize> {
            (0..members.len()).filter(|&t| dot(f, &local[t]) == *c).collect()
        };

        // initial facet: start from the face maximizing the first coordinate
        // and tilt the hyperplane until it touches a full facet
        let mut f = vec![Rational::zero(); j];
        f[0] = Rational::from_integer(1.into());
        let mut c = local.iter().map(|x| x[0].clone()).max().unwrap();
        let mut face = on_plane(&f, &c);
        while affine_rank(&face.iter().map(|&t| local[t].clone()).collect::<Vec<_>>()) + 1 < j {
            let mut rows: Vec<Vec<Rational>> = face[1..].iter().map(|&t| sub(&local[t], &local[face[0]])).collect();
            rows.push(f.clone());
            let h = RatMatrix::from_rows(&rows).nullspace().remove(0);
            let s0 = local[face[0]].clone();
            let (g, off) = rotate(&local, &f, &c, &h, &s0)?;
            f = g;
            c = off;
            face = on_plane(&f, &c);
        }

        let key = |face: &[usize]| -> Vec<usize> { face.iter().map(|&t| members[t]).collect() };
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue: VecDeque<(Vec<usize>, Vec<Rational>, Rational)> = VecDeque::new();
        seen.insert(key(&face));
        queue.push_back((face, f, c));
        while let Some((face, f, c)) = queue.pop_front() {
            let facet_members = key(&face);
            for ridge in self.facets_of(&facet_members, j - 1)? {
                let ridge_local: Vec<usize> =
                    ridge.iter().map(|g| members.binary_search(g).expect("ridge inside facet")).collect();
                let r0 = local[ridge_local[0]].clone();
                let mut rows: Vec<Vec<Rational>> = ridge_local[1..].iter().map(|&t| sub(&local[t], &r0)).collect();
                rows.push(f.clone());
                let ns = RatMatrix::from_rows(&rows).nullspace();
                if ns.len() != 1 {
                    return Err(Error::Degenerate("ridge does not have codimension two".into()));
                }
                let mut h = ns.into_iter().next().unwrap();
                let outside = face
                    .iter()
                    .find(|t| ridge_local.binary_search(t).is_err())
                    .ok_or_else(|| Error::Degenerate("facet equals its ridge".into()))?;
                if dot(&h, &sub(&local[*outside], &r0)).is_negative() {
                    h = h.into_iter().map(|x| -x).collect();
                }
                let (g, off) = rotate(&local, &f, &c, &h, &r0)?;
                let next = on_plane(&g, &off);
                if seen.insert(key(&next)) {
                    queue.push_back((next, g, off));
                }
            }
        }
        Ok(seen.into_iter().collect())
    }
}

/// Rotates the supporting hyperplane `f . x = c` about the subspace through
/// `s0` orthogonal to `h` until it meets another point. Points currently on
/// the plane must satisfy `h . (x - s0) >= 0`.
fn rotate(
    local: &[Vec<Rational>],
    f: &[Rational],
    c: &Rational,
    h: &[Rational],
    s0: &[Rational],
) -> Result<(Vec<Rational>, Rational)> {
    let hs0 = dot(h, s0);
    let mut best: Option<(Rational, Rational)> = None;
    for x in local {
        let a = dot(f, x) - c;
        if !a.is_negative() {
            continue;
        }
        let w = (a, dot(h, x) - &hs0);
        match &best {
            Some(e) if !cross(e, &w).is_positive() => {}
            _ => best = Some(w),
        }
    }
    let (ea, eb) = best.ok_or_else(|| Error::Degenerate("all points on one hyperplane".into()))?;
    let g: Vec<Rational> = h.iter().zip(f).map(|(hi, fi)| &ea * hi - &eb * fi).collect();
    let off = &ea * &hs0 - &eb * c;
    let lead = g.iter().find(|x| !x.is_zero()).expect("rotated normal is nonzero").abs();
    Ok((normalize_direction(&g), off / lead))
}
