//! Affine support sets of `wp(p, 1)` and the resulting lower bounds on the
//! number of moduli of the projected surfaces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{affine_rank, int, rat, Rational};
use crate::projection::{build_deformed_wp, DeformedWp};
use crate::surface::{build_surface, realize_canonical};
use crate::wpcombin::{incidence, wp_vertices, FaceVector, WpParams};

/// Ambient dimension of the projected surfaces.
pub const SURFACE_DIM: usize = 3;
/// Number of sampled deformed realizations in a full report.
pub const DEFAULT_SAMPLES: usize = 5;
pub const DEFAULT_SEED: u64 = 2024;

const ZERO: u64 = 0b01;
const ONE: u64 = 0b10;
const BOTH: u64 = 0b11;

fn face(entries: Vec<u64>) -> FaceVector {
    FaceVector::new(2, entries).expect("entries are subsets of [2]")
}

/// A set of vertices of `wp(p, 1)`, all distinct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportSet {
    pub p: usize,
    pub members: Vec<FaceVector>,
}

impl SupportSet {
    /// Checks that there are `2p` distinct members, all vertices of `wp(p, 1)`.
    pub fn new(p: usize, members: Vec<FaceVector>) -> Result<Self> {
        let params = WpParams::new(p, 2)?;
        if members.len() != 2 * p {
            return Err(Error::InvalidArgument(format!("expected {} members, got {}", 2 * p, members.len())));
        }
        let distinct: BTreeSet<&FaceVector> = members.iter().collect();
        if distinct.len() != members.len() {
            return Err(Error::InvalidArgument("support set has a repeated member".into()));
        }
        let vertices: BTreeSet<FaceVector> = wp_vertices(params).into_iter().collect();
        if let Some(bad) = members.iter().find(|m| !vertices.contains(m)) {
            return Err(Error::InvalidArgument(format!("{bad} is not a vertex of wp({p}, 1)")));
        }
        Ok(Self { p, members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Indices of the members lying in `g`.
    pub fn members_in(&self, g: &FaceVector) -> Vec<usize> {
        (0..self.members.len()).filter(|&k| incidence(&self.members[k], g).unwrap_or(false)).collect()
    }
}

/// The vertices `v_k = (0..0 [2] [2] 1..1)` with `k` leading zeros,
/// `v_{p-1} = ([2] 0..0 [2])`, and their mirror images `v̄_k` with 0 and 1
/// exchanged.
pub fn standard_support_set(p: usize) -> Result<SupportSet> {
    WpParams::new(p, 2)?;
    let v = |k: usize| -> Vec<u64> {
        if k == p - 1 {
            let mut e = vec![ZERO; p];
            e[0] = BOTH;
            e[p - 1] = BOTH;
            e
        } else {
            (0..p).map(|i| if i < k { ZERO } else if i <= k + 1 { BOTH } else { ONE }).collect()
        }
    };
    let mirror = |e: Vec<u64>| -> Vec<u64> {
        e.into_iter().map(|x| if x == ZERO { ONE } else if x == ONE { ZERO } else { x }).collect()
    };
    let mut members: Vec<FaceVector> = (0..p).map(|k| face(v(k))).collect();
    members.extend((0..p).map(|k| face(mirror(v(k)))));
    SupportSet::new(p, members)
}

/// The facet of `wp(p, 1)` on the single inequality `(i, j)`.
pub fn facet(p: usize, i: usize, j: usize) -> FaceVector {
    let mut e = vec![0; p];
    e[i] = 1 << j;
    face(e)
}

/// The flag `G_0 ⊂ ... ⊂ G_{p+1} = F_0` for the facet `(0, 0)`, with
/// `G_0 = ([2],[2],0..0)`, `G_1 = ([2],0..0)`, `G_2 = (0..0)` and `G_k`
/// ending in `k - 2` empty entries.
pub fn explicit_flag(p: usize) -> Vec<FaceVector> {
    let mut flag = Vec::with_capacity(p + 2);
    let mut g0 = vec![ZERO; p];
    g0[0] = BOTH;
    g0[1] = BOTH;
    flag.push(face(g0));
    let mut g1 = vec![ZERO; p];
    g1[0] = BOTH;
    flag.push(face(g1));
    for k in 2..=p + 1 {
        flag.push(face((0..p).map(|i| if i + (k - 2) < p || k == 2 { ZERO } else { 0 }).collect()));
    }
    flag
}

/// Dimension of a nonempty face of the simple polytope `wp(p, 1)`.
fn face_dim(p: usize, g: &FaceVector) -> usize {
    (p + 2) - g.num_tight()
}

fn is_face(vertices: &[FaceVector], g: &FaceVector) -> bool {
    vertices.iter().any(|v| incidence(v, g).unwrap_or(false))
}

/// Checks a flag `G_0 ⊂ ... ⊂ G_n`: each `G_i` a face of dimension `i`,
/// and each step adds at most one member of `a`. Then in every realization
/// the new member lies off the affine hull of the previous face, so the
/// members in `G_n` are affinely independent.
pub fn check_flag(a: &SupportSet, flag: &[FaceVector]) -> bool {
    let vertices = wp_vertices(WpParams { p: a.p, q: 2 });
    let mut previous = 0;
    for (i, g) in flag.iter().enumerate() {
        if !is_face(&vertices, g) || face_dim(a.p, g) != i {
            return false;
        }
        if i > 0 && !incidence(&flag[i - 1], g).unwrap_or(false) {
            return false;
        }
        let count = a.members_in(g).len();
        if count > previous + 1 {
            return false;
        }
        previous = count;
    }
    true
}

/// Searches a certifying flag ending at `top` by descending one facet at a
/// time.
pub fn find_flag(a: &SupportSet, top: &FaceVector) -> Option<Vec<FaceVector>> {
    let vertices = wp_vertices(WpParams { p: a.p, q: 2 });
    let mut dead = BTreeSet::new();
    descend(a, &vertices, top, &mut dead)
}

fn descend(
    a: &SupportSet,
    vertices: &[FaceVector],
    g: &FaceVector,
    dead: &mut BTreeSet<FaceVector>,
) -> Option<Vec<FaceVector>> {
    let here = a.members_in(g).len();
    if face_dim(a.p, g) == 0 {
        return (here <= 1).then(|| vec![g.clone()]);
    }
    if dead.contains(g) {
        return None;
    }
    for i in 0..a.p {
        for j in 0..2 {
            if g.entry(i) >> j & 1 == 1 {
                continue;
            }
            let mut entries = g.entries().to_vec();
            entries[i] |= 1 << j;
            let child = face(entries);
            if !is_face(vertices, &child) || here > a.members_in(&child).len() + 1 {
                continue;
            }
            if let Some(mut chain) = descend(a, vertices, &child, dead) {
                chain.push(g.clone());
                return Some(chain);
            }
        }
    }
    dead.insert(g.clone());
    None
}

/// Vertex coordinates of one realization of `wp(p, 1)`.
#[derive(Clone, Debug)]
pub struct RealizationSample {
    pub name: String,
    pub coords: BTreeMap<FaceVector, Vec<Rational>>,
}

impl RealizationSample {
    pub fn canonical(p: usize) -> Result<Self> {
        let s = build_surface(WpParams::new(p, 2)?)?;
        let r = realize_canonical(&s)?;
        Ok(Self { name: "canonical".into(), coords: s.vertices().iter().cloned().zip(r.coords).collect() })
    }

    pub fn deformed(d: &DeformedWp) -> Self {
        Self {
            name: format!("deformed eps={} M={}", d.eps, d.m),
            coords: d.vertices().map(|((v, _), x)| (v.clone(), x.coords.clone())).collect(),
        }
    }
}

/// `count` certified deformed realizations with `eps` in {1/10, 1/12, 1/16}
/// and `M` in {64, 128}, chosen reproducibly from `seed`.
pub fn sample_realizations(p: usize, count: usize, seed: u64) -> Result<Vec<RealizationSample>> {
    let mut grid: Vec<(Rational, Rational)> = Vec::new();
    for e in [10, 12, 16] {
        for m in [64, 128] {
            grid.push((rat(1, e), int(m)));
        }
    }
    grid.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    grid.into_iter()
        .cycle()
        .take(count)
        .map(|(e, m)| build_deformed_wp(p, &e, &m).map(|d| RealizationSample::deformed(&d)))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FacetVerdict {
    /// The inequality `(i, j)` defining the facet.
    pub facet: (usize, usize),
    pub members: Vec<usize>,
    /// `|A ∩ F| <= dim F + 1`.
    pub within_bound: bool,
    /// A certifying flag, from `G_0` up to the facet.
    pub flag: Option<Vec<FaceVector>>,
    /// Affine independence of `A ∩ F` in each sampled realization.
    pub numeric: Vec<bool>,
}

impl FacetVerdict {
    pub fn ok(&self) -> bool {
        self.within_bound && self.flag.is_some() && self.numeric.iter().all(|&b| b)
    }
}

/// Runs the combinatorial flag certificate on every facet, and the numeric
/// affine-rank check in every supplied realization.
pub fn verify_support_set(a: &SupportSet, realizations: &[RealizationSample]) -> Result<Vec<FacetVerdict>> {
    let mut out = Vec::with_capacity(2 * a.p);
    for i in 0..a.p {
        for j in 0..2 {
            let f = facet(a.p, i, j);
            let members = a.members_in(&f);
            let within_bound = members.len() <= face_dim(a.p, &f) + 1;
            let flag = if within_bound { find_flag(a, &f) } else { None };
            let numeric = realizations
                .iter()
                .map(|r| {
                    let pts = members
                        .iter()
                        .map(|&k| r.coords.get(&a.members[k]).cloned())
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| Error::InvalidArgument(format!("{} lacks a support vertex", r.name)))?;
                    Ok(pts.is_empty() || affine_rank(&pts) + 1 == pts.len())
                })
                .collect::<Result<Vec<bool>>>()?;
            out.push(FacetVerdict { facet: (i, j), members, within_bound, flag, numeric });
        }
    }
    Ok(out)
}

/// `3 f_0 - 2 f_1 + 3 f_2 - 15` for an f-vector.
pub fn naive_estimate(f: [usize; 3]) -> i64 {
    3 * f[0] as i64 - 2 * f[1] as i64 + 3 * f[2] as i64 - 15
}

/// Closed form `2^(p-2) (12 - p) - 15` of the naive estimate for `Σ_{p,4}`.
pub fn naive_closed_form(p: usize) -> i64 {
    (1i64 << (p - 2)) * (12 - p as i64) - 15
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuliReport {
    pub p: usize,
    pub support: SupportSet,
    /// The flag of the explicit proof certifies the facet `(0, 0)`.
    pub explicit_flag: bool,
    pub facets: Vec<FacetVerdict>,
    pub realizations: Vec<String>,
    pub verdict: String,
    /// `d |A|` for the polytope itself.
    pub polytope_bound: Option<usize>,
    /// `e |A|` for the surface in `R^e`, `e = 3`.
    pub support_bound: Option<usize>,
    pub surface_f_vector: [usize; 3],
    pub naive_estimate: i64,
    pub naive_closed_form: i64,
}

impl ModuliReport {
    pub fn verified(&self) -> bool {
        self.explicit_flag && self.facets.iter().all(FacetVerdict::ok)
    }

    /// Plain-text table, one row per facet.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "p = {}, |A| = {}", self.p, self.support.len());
        let _ = writeln!(s, "{:<8} {:>7} {:>6} {:>8}", "facet", "|A∩F|", "flag", "numeric");
        for f in &self.facets {
            let numeric = format!("{}/{}", f.numeric.iter().filter(|&&b| b).count(), f.numeric.len());
            let flag = if f.flag.is_some() { "ok" } else { "FAIL" };
            let name = format!("({},{})", f.facet.0, f.facet.1);
            let _ = writeln!(s, "{name:<8} {:>7} {flag:>6} {numeric:>8}", f.members.len());
        }
        let show = |b: Option<usize>| b.map_or_else(|| "-".to_string(), |x| x.to_string());
        let _ = writeln!(s, "verdict: {}", self.verdict);
        let _ = writeln!(s, "moduli of wp({}, 1) >= {}", self.p, show(self.polytope_bound));
        let _ = writeln!(s, "moduli of the surface in R^3 >= {}", show(self.support_bound));
        let _ = writeln!(
            s,
            "naive estimate 3f0 - 2f1 + 3f2 - 15 = {} (closed form {})",
            self.naive_estimate, self.naive_closed_form
        );
        s
    }
}

/// Bounds for `Σ_{p,4}` from the standard support set, certified by flags
/// and, when `samples > 0`, checked numerically in the canonical and
/// `samples` deformed realizations.
pub fn moduli_report(p: usize, samples: usize, seed: u64) -> Result<ModuliReport> {
    let support = standard_support_set(p)?;
    let mut realizations = Vec::new();
    if samples > 0 {
        realizations.push(RealizationSample::canonical(p)?);
        realizations.extend(sample_realizations(p, samples, seed)?);
    }
    let facets = verify_support_set(&support, &realizations)?;
    let flag = explicit_flag(p);
    let explicit = flag.last() == Some(&facet(p, 0, 0))
        && check_flag(&support, &flag)
        && flag.iter().enumerate().all(|(i, g)| support.members_in(g).len() == i + 1);
    let f = build_surface(WpParams::new(p, 2)?)?.f_vector();
    let mut report = ModuliReport {
        p,
        support,
        explicit_flag: explicit,
        facets,
        realizations: realizations.into_iter().map(|r| r.name).collect(),
        verdict: String::new(),
        polytope_bound: None,
        support_bound: None,
        surface_f_vector: f,
        naive_estimate: naive_estimate(f),
        naive_closed_form: naive_closed_form(p),
    };
    if report.verified() {
        report.verdict = if samples > 0 {
            "certified via flag argument + sampled realizations".into()
        } else {
            "certified via flag argument".into()
        };
        report.polytope_bound = Some((p + 2) * report.support.len());
        report.support_bound = Some(SURFACE_DIM * report.support.len());
    } else {
        report.verdict = "not verified".into();
    }
    Ok(report)
}

/// Combinatorial bounds only, without numeric samples.
pub fn moduli_bounds(p: usize) -> Result<ModuliReport> {
    moduli_report(p, 0, DEFAULT_SEED)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_members() {
        assert_eq!(standard_support_set(3).unwrap().len(), 6);
        let a4 = standard_support_set(4).unwrap();
        assert_eq!(a4.members[1], FaceVector::from_sets(2, &[vec![0], vec![0, 1], vec![0, 1], vec![1]]).unwrap());
        let a5 = standard_support_set(5).unwrap();
        let vbar4 = FaceVector::from_sets(2, &[vec![0, 1], vec![1], vec![1], vec![1], vec![0, 1]]).unwrap();
        assert_eq!(a5.members[9], vbar4);
    }

    #[test]
    fn explicit_flag_shape() {
        for p in 3..=7 {
            let a = standard_support_set(p).unwrap();
            let flag = explicit_flag(p);
            assert_eq!(flag.len(), p + 2);
            assert_eq!(flag[0], a.members[p]);
            assert_eq!(flag[p + 1], facet(p, 0, 0));
            assert!(check_flag(&a, &flag));
            for (i, g) in flag.iter().enumerate() {
                assert_eq!(a.members_in(g).len(), i + 1);
            }
        }
    }

    #[test]
    fn every_facet_has_a_flag() {
        for p in 3..=6 {
            let a = standard_support_set(p).unwrap();
            let v = verify_support_set(&a, &[]).unwrap();
            assert_eq!(v.len(), 2 * p);
            for f in &v {
                assert_eq!(f.members.len(), p + 2);
                assert!(f.ok(), "facet {:?}", f.facet);
                assert!(check_flag(&a, f.flag.as_ref().unwrap()));
            }
        }
    }

    #[test]
    fn canonical_affine_rank_on_first_facet() {
        let a = standard_support_set(5).unwrap();
        let r = RealizationSample::canonical(5).unwrap();
        let members = a.members_in(&facet(5, 0, 0));
        assert_eq!(members.len(), 7);
        let pts: Vec<Vec<Rational>> = members.iter().map(|&k| r.coords[&a.members[k]].clone()).collect();
        assert_eq!(affine_rank(&pts), 6);
    }

    #[test]
    fn numeric_checks_pass_for_p4() {
        let r = moduli_report(4, DEFAULT_SAMPLES, DEFAULT_SEED).unwrap();
        assert_eq!(r.realizations.len(), 6);
        assert!(r.verified());
        assert_eq!(r.support_bound, Some(24));
        assert_eq!(r.naive_estimate, 17);
        assert!(r.facets.iter().all(|f| f.numeric.len() == 6));
    }

    #[test]
    fn duplicate_member_is_rejected() {
        let mut m = standard_support_set(4).unwrap().members;
        m[1] = m[0].clone();
        assert!(SupportSet::new(4, m).is_err());
    }

    #[test]
    fn quadrilateral_inside_a_facet_fails() {
        let p = 4;
        let vertices = wp_vertices(WpParams::new(p, 2).unwrap());
        // a 2-face with exactly four vertices
        let quad = (0..1u32 << (2 * p))
            .map(|mask| face((0..p).map(|i| u64::from(mask >> (2 * i)) & BOTH).collect()))
            .find(|g| {
                g.num_tight() == p && vertices.iter().filter(|v| incidence(v, g).unwrap()).count() == 4
            })
            .unwrap();
        let mut members: Vec<FaceVector> =
            vertices.iter().filter(|v| incidence(v, &quad).unwrap()).cloned().collect();
        for v in standard_support_set(p).unwrap().members {
            if members.len() < 2 * p && !members.contains(&v) {
                members.push(v);
            }
        }
        let a = SupportSet::new(p, members).unwrap();
        let samples = vec![RealizationSample::canonical(p).unwrap()];
        let verdicts = verify_support_set(&a, &samples).unwrap();
        let containing: Vec<&FacetVerdict> =
            verdicts.iter().filter(|f| incidence(&quad, &facet(p, f.facet.0, f.facet.1)).unwrap()).collect();
        assert!(!containing.is_empty());
        for f in containing {
            assert!(f.flag.is_none());
            assert_eq!(f.numeric, vec![false]);
        }
    }

    #[test]
    fn bounds_and_naive_counts() {
        let r = moduli_bounds(5).unwrap();
        assert_eq!(r.support_bound, Some(30));
        assert_eq!(r.naive_estimate, 41);
        assert_eq!(naive_closed_form(12), -15);
        for p in 3..=10 {
            let f = build_surface(WpParams::new(p, 2).unwrap()).unwrap().f_vector();
            assert_eq!(naive_estimate(f), naive_closed_form(p), "p = {p}");
        }
    }

    #[test]
    fn table_lists_every_facet() {
        let t = moduli_bounds(3).unwrap().table();
        assert_eq!(t.lines().filter(|l| l.starts_with('(')).count(), 6);
        assert!(t.contains(">= 18"));
    }
}
