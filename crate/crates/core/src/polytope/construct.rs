use num::{One, Signed, Zero};

use super::{Facet, FacetLabel, HPolytope, Sign};
use crate::error::{Error, Result};
use crate::exact::{int, rat, round_f64, scale, Rational};

/// Rational point on the unit circle with tangent-half-angle parameter `t`.
fn circle_point(t: &Rational) -> Vec<Rational> {
    let t2 = t * t;
    let den = Rational::one() + &t2;
    vec![(Rational::one() - &t2) / &den, (t + t) / &den]
}

/// A `p`-gon whose facets `Base(0)..Base(p-1)` appear in cyclic order.
///
/// Normals are rational points on the unit circle, except for the square
/// which uses `+-x0 +- x1 <= 1`.
pub fn make_polygon(p: usize) -> Result<HPolytope> {
    if p < 3 {
        return Err(Error::InvalidArgument(format!("polygon needs p >= 3, got {p}")));
    }
    let normals: Vec<Vec<Rational>> = match p {
        3 => [int(0), int(2), int(-2)].iter().map(circle_point).collect(),
        4 => vec![
            vec![int(1), int(1)],
            vec![int(-1), int(1)],
            vec![int(-1), int(-1)],
            vec![int(1), int(-1)],
        ],
        5 => [int(0), rat(1, 2), int(2), int(-2), rat(-1, 2)].iter().map(circle_point).collect(),
        _ => (0..p)
            .map(|k| {
                if 2 * k == p {
                    vec![int(-1), int(0)]
                } else {
                    let half = std::f64::consts::PI * k as f64 / p as f64;
                    circle_point(&round_f64(half.tan(), 4 * p as i64))
                }
            })
            .collect(),
    };
    let facets = normals
        .into_iter()
        .enumerate()
        .map(|(i, normal)| Facet { label: FacetLabel::Base(i), normal })
        .collect();
    HPolytope::new(2, facets)
}

/// An `n`-simplex `{-z_i <= 1, sum z_i <= 1}` with centroid at the origin.
///
/// Facet `Base(i)` for `i < n` is `-z_i <= 1`; `Base(n)` is the sum facet.
pub fn make_simplex(n: usize) -> Result<HPolytope> {
    if n == 0 {
        return Err(Error::InvalidArgument("simplex dimension must be >= 1".into()));
    }
    let mut facets: Vec<Facet> = (0..n)
        .map(|i| {
            let mut normal = vec![Rational::zero(); n];
            normal[i] = -Rational::one();
            Facet { label: FacetLabel::Base(i), normal }
        })
        .collect();
    facets.push(Facet { label: FacetLabel::Base(n), normal: vec![Rational::one(); n] });
    HPolytope::new(n, facets)
}

fn block_row(parts: &[(&[Rational], usize)], width: usize) -> Vec<Rational> {
    let mut row = vec![Rational::zero(); width];
    for (values, offset) in parts {
        for (k, v) in values.iter().enumerate() {
            row[offset + k] = v.clone();
        }
    }
    row
}

/// Generalized wedge of `p` and `q` at facet `f` of `p`.
///
/// Rows `(a_i, 0)` for `i != f` keep their labels; the combined rows
/// `(a_f, b_j)` are labeled `Pair(f, j)`.
pub fn generalized_wedge(p: &HPolytope, f: usize, q: &HPolytope) -> Result<HPolytope> {
    if f >= p.num_facets() {
        return Err(Error::InvalidArgument(format!(
            "facet index {f} out of range for {} facets",
            p.num_facets()
        )));
    }
    let (d, dq) = (p.dim(), q.dim());
    let width = d + dq;
    let mut facets = Vec::with_capacity(p.num_facets() - 1 + q.num_facets());
    for i in (0..p.num_facets()).filter(|&i| i != f) {
        facets.push(Facet { label: p.label(i), normal: block_row(&[(p.normal(i), 0)], width) });
    }
    for j in 0..q.num_facets() {
        facets.push(Facet {
            label: FacetLabel::Pair(f, j),
            normal: block_row(&[(p.normal(f), 0), (q.normal(j), d)], width),
        });
    }
    HPolytope::new(width, facets)
}

/// Wedge product: facet `Pair(i, j)` is `a_i x + b_j y_i <= 1`, with the
/// variables ordered `(x, y_0, ..., y_{m-1})`.
pub fn wedge_product(p: &HPolytope, q: &HPolytope) -> Result<HPolytope> {
    let (d, dq, m) = (p.dim(), q.dim(), p.num_facets());
    let width = d + m * dq;
    let mut facets = Vec::with_capacity(m * q.num_facets());
    for i in 0..m {
        for j in 0..q.num_facets() {
            facets.push(Facet {
                label: FacetLabel::Pair(i, j),
                normal: block_row(&[(p.normal(i), 0), (q.normal(j), d + i * dq)], width),
            });
        }
    }
    HPolytope::new(width, facets)
}

/// Deformed product: all of `p`'s rows, plus `(a_f / (1 + eps), b_j)`.
pub fn deformed_product(p: &HPolytope, q: &HPolytope, f: usize, eps: &Rational) -> Result<HPolytope> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("deformation parameter must be positive".into()));
    }
    deformed_product_unchecked(p, q, f, eps)
}

fn deformed_product_unchecked(
    p: &HPolytope,
    q: &HPolytope,
    f: usize,
    eps: &Rational,
) -> Result<HPolytope> {
    if f >= p.num_facets() {
        return Err(Error::InvalidArgument(format!("facet index {f} out of range")));
    }
    let (d, dq) = (p.dim(), q.dim());
    let width = d + dq;
    let shrunk = scale(p.normal(f), &(Rational::one() + eps).recip());
    let mut facets = Vec::with_capacity(p.num_facets() + q.num_facets());
    for i in 0..p.num_facets() {
        facets.push(Facet { label: p.label(i), normal: block_row(&[(p.normal(i), 0)], width) });
    }
    for j in 0..q.num_facets() {
        facets.push(Facet {
            label: FacetLabel::Pair(f, j),
            normal: block_row(&[(&shrunk, 0), (q.normal(j), d)], width),
        });
    }
    HPolytope::new(width, facets)
}

/// Cartesian product; facets of `q` are relabeled `Extra(..)`.
pub fn product(p: &HPolytope, q: &HPolytope) -> Result<HPolytope> {
    let (d, dq) = (p.dim(), q.dim());
    let width = d + dq;
    let offset = p.facets().iter().filter(|f| matches!(f.label, FacetLabel::Extra(_))).count();
    let mut facets = Vec::with_capacity(p.num_facets() + q.num_facets());
    for i in 0..p.num_facets() {
        facets.push(Facet { label: p.label(i), normal: block_row(&[(p.normal(i), 0)], width) });
    }
    for j in 0..q.num_facets() {
        facets.push(Facet { label: FacetLabel::Extra(offset + j), normal: block_row(&[(q.normal(j), d)], width) });
    }
    HPolytope::new(width, facets)
}

/// `p x {z : +-delta z <= 1}` with lids `Lid(Minus)` and `Lid(Plus)`.
pub fn prism(p: &HPolytope, delta: &Rational) -> Result<HPolytope> {
    if !delta.is_positive() {
        return Err(Error::InvalidArgument("prism height parameter must be positive".into()));
    }
    let width = p.dim() + 1;
    let mut facets: Vec<Facet> = (0..p.num_facets())
        .map(|i| Facet { label: p.label(i), normal: block_row(&[(p.normal(i), 0)], width) })
        .collect();
    for sign in [Sign::Minus, Sign::Plus] {
        let mut normal = vec![Rational::zero(); width];
        normal[width - 1] = sign.value() * delta;
        facets.push(Facet { label: FacetLabel::Lid(sign), normal });
    }
    HPolytope::new(width, facets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ints;
    use crate::polytope::{is_simple, vertex_enumerate};

    fn facet_cycle_ok(p: &HPolytope) -> bool {
        // consecutive facets meet in a vertex, non-consecutive ones do not
        let verts = vertex_enumerate(p).unwrap();
        let n = p.num_facets();
        verts.len() == n
            && (0..n).all(|i| verts.iter().any(|v| v.tight == vec![i.min((i + 1) % n), i.max((i + 1) % n)]))
    }

    #[test]
    fn square() {
        let sq = make_polygon(4).unwrap();
        let verts = vertex_enumerate(&sq).unwrap();
        let coords: Vec<_> = verts.iter().map(|v| v.coords.clone()).collect();
        for c in [ints(&[1, 0]), ints(&[-1, 0]), ints(&[0, 1]), ints(&[0, -1])] {
            assert!(coords.contains(&c));
        }
        assert!(facet_cycle_ok(&sq));
    }

    #[test]
    fn polygons_are_cyclic() {
        for p in 3..=12 {
            let poly = make_polygon(p).unwrap();
            assert_eq!(poly.num_facets(), p);
            assert!(facet_cycle_ok(&poly), "p = {p}");
        }
        assert!(make_polygon(2).is_err());
    }

    #[test]
    fn pentagon_normals() {
        let pent = make_polygon(5).unwrap();
        assert_eq!(pent.normal(0), &ints(&[1, 0])[..]);
        assert_eq!(pent.normal(1), &[rat(3, 5), rat(4, 5)][..]);
        assert_eq!(pent.normal(2), &[rat(-3, 5), rat(4, 5)][..]);
    }

    #[test]
    fn simplices() {
        let s1 = make_simplex(1).unwrap();
        assert_eq!(s1.normals(), vec![ints(&[-1]), ints(&[1])]);
        let s2 = make_simplex(2).unwrap();
        assert_eq!(vertex_enumerate(&s2).unwrap().len(), 3);
        let s3 = make_simplex(3).unwrap();
        let v = vertex_enumerate(&s3).unwrap();
        assert_eq!(v.len(), 4);
        let pts: Vec<_> = v.into_iter().map(|x| x.coords).collect();
        assert!(crate::exact::is_affinely_independent(&pts));
        assert!(make_simplex(0).is_err());
    }

    #[test]
    fn wedge_product_shapes() {
        let i = make_simplex(1).unwrap();
        let w = wedge_product(&i, &i).unwrap();
        assert_eq!((w.dim(), w.num_facets()), (3, 4));
        let w = wedge_product(&make_polygon(5).unwrap(), &i).unwrap();
        assert_eq!((w.dim(), w.num_facets()), (7, 10));
        let w = wedge_product(&make_polygon(4).unwrap(), &make_simplex(2).unwrap()).unwrap();
        assert_eq!((w.dim(), w.num_facets()), (10, 12));
    }

    #[test]
    fn wedge_product_block_structure() {
        let p = make_polygon(3).unwrap();
        let q = make_simplex(2).unwrap();
        let w = wedge_product(&p, &q).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let row = w.normal(w.index_of(FacetLabel::Pair(i, j)).unwrap());
                assert_eq!(&row[..2], p.normal(i));
                for blk in 0..3 {
                    let part = &row[2 + 2 * blk..4 + 2 * blk];
                    if blk == i {
                        assert_eq!(part, q.normal(j));
                    } else {
                        assert!(part.iter().all(Zero::is_zero));
                    }
                }
            }
        }
    }

    #[test]
    fn generalized_wedge_counts() {
        let interval = make_simplex(1).unwrap();
        let w = generalized_wedge(&interval, 1, &interval).unwrap();
        assert_eq!(vertex_enumerate(&w).unwrap().len(), 3);
        let w = generalized_wedge(&make_polygon(4).unwrap(), 0, &interval).unwrap();
        assert_eq!(w.num_facets(), 5);
        assert_eq!(vertex_enumerate(&w).unwrap().len(), 6);
        let w = generalized_wedge(&make_polygon(5).unwrap(), 2, &make_simplex(2).unwrap()).unwrap();
        assert_eq!((w.dim(), w.num_facets()), (4, 7));
        assert_eq!(vertex_enumerate(&w).unwrap().len(), 11);
        assert!(generalized_wedge(&interval, 2, &interval).is_err());
    }

    #[test]
    fn deformed_products() {
        let sq = make_polygon(4).unwrap();
        let i = make_simplex(1).unwrap();
        let big = deformed_product(&sq, &i, 0, &int(1_000_000)).unwrap();
        assert_eq!(big.num_facets(), 6);
        let v = vertex_enumerate(&big).unwrap();
        assert_eq!(v.len(), 8);
        assert!(is_simple(&big, &v));
        let pt = deformed_product(&make_polygon(5).unwrap(), &make_simplex(2).unwrap(), 0, &rat(1, 10)).unwrap();
        assert_eq!((pt.dim(), pt.num_facets()), (4, 8));
        assert!(deformed_product(&sq, &i, 0, &int(0)).is_err());
    }

    #[test]
    fn deformed_product_degenerates_to_wedge() {
        let p = make_polygon(5).unwrap();
        let q = make_simplex(2).unwrap();
        for f in 0..5 {
            let at_zero = deformed_product_unchecked(&p, &q, f, &int(0)).unwrap();
            let gw = generalized_wedge(&p, f, &q).unwrap();
            let kept: Vec<_> = at_zero
                .facets()
                .iter()
                .filter(|fa| fa.label != FacetLabel::Base(f))
                .cloned()
                .collect();
            assert_eq!(kept, gw.facets());
        }
    }

    #[test]
    fn products_and_prisms() {
        let i = make_simplex(1).unwrap();
        let sq = product(&i, &i).unwrap();
        assert_eq!(sq.num_facets(), 4);
        assert_eq!(vertex_enumerate(&sq).unwrap().len(), 4);
        let cube = prism(&make_polygon(4).unwrap(), &int(1)).unwrap();
        assert_eq!(cube.num_facets(), 6);
        assert_eq!(vertex_enumerate(&cube).unwrap().len(), 8);
        let wp = wedge_product(&make_polygon(4).unwrap(), &i).unwrap();
        let pr = prism(&wp, &rat(1, 4)).unwrap();
        assert_eq!((pr.dim(), pr.num_facets()), (7, 10));
        assert!(prism(&wp, &int(0)).is_err());
    }
}
