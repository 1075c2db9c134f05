//! OFF and OBJ writers for surfaces realized in R^3.

use std::fmt::Write as _;

use num::{Signed, Zero};

use crate::complex::{PolygonComplex, RealizedComplex};
use crate::error::{Error, Result};
use crate::exact::{to_decimal, Rational};

/// Default number of significant digits in mesh files.
pub const DEFAULT_PRECISION: usize = 17;

fn det3(a: &[Rational], b: &[Rational], c: &[Rational]) -> Rational {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

/// Six times the signed volume enclosed by the oriented faces.
pub fn signed_volume6(complex: &PolygonComplex, coords: &[Vec<Rational>]) -> Rational {
    let mut total = Rational::zero();
    for f in complex.faces() {
        for k in 1..f.len() - 1 {
            total += det3(&coords[f[0]], &coords[f[k]], &coords[f[k + 1]]);
        }
    }
    total
}

/// A coherent orientation of a closed surface in R^3 with every face
/// oriented counterclockwise seen from outside.
pub fn outward_oriented(r: &RealizedComplex) -> Result<PolygonComplex> {
    if r.ambient_dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: r.ambient_dim() });
    }
    let oriented = r
        .complex
        .oriented()
        .ok_or_else(|| Error::NotSurface("no coherent orientation".into()))?;
    let vol = signed_volume6(&oriented, &r.coords);
    if vol.is_zero() {
        return Err(Error::Degenerate("surface encloses zero volume".into()));
    }
    if vol.is_positive() {
        return Ok(oriented);
    }
    let reversed = oriented.faces().iter().map(|f| f.iter().rev().copied().collect()).collect();
    PolygonComplex::from_faces(oriented.num_vertices(), reversed)
}

fn vertex_line(x: &[Rational], precision: usize) -> String {
    x.iter().map(|c| to_decimal(c, precision)).collect::<Vec<_>>().join(" ")
}

/// OFF text: counts `f0 f2 f1`, decimal vertex lines, outward faces.
pub fn write_off(r: &RealizedComplex, precision: usize) -> Result<String> {
    let c = outward_oriented(r)?;
    let [f0, f1, f2] = c.f_vector();
    let mut s = format!("OFF\n{f0} {f2} {f1}\n");
    for x in &r.coords {
        let _ = writeln!(s, "{}", vertex_line(x, precision));
    }
    for f in c.faces() {
        let idx: Vec<String> = f.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "{} {}", f.len(), idx.join(" "));
    }
    Ok(s)
}

/// OBJ text with 1-based face indices.
pub fn write_obj(r: &RealizedComplex, precision: usize) -> Result<String> {
    let c = outward_oriented(r)?;
    let mut s = String::new();
    for x in &r.coords {
        let _ = writeln!(s, "v {}", vertex_line(x, precision));
    }
    for f in c.faces() {
        let idx: Vec<String> = f.iter().map(|v| (v + 1).to_string()).collect();
        let _ = writeln!(s, "f {}", idx.join(" "));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ints;

    fn cube() -> RealizedComplex {
        let coords: Vec<Vec<Rational>> = (0..8)
            .map(|m| ints(&[(m & 1) as i64, (m >> 1 & 1) as i64, (m >> 2 & 1) as i64]))
            .collect();
        // deliberately mixed orientations
        let faces = vec![
            vec![0, 1, 3, 2],
            vec![4, 5, 7, 6],
            vec![0, 1, 5, 4],
            vec![2, 3, 7, 6],
            vec![0, 2, 6, 4],
            vec![1, 3, 7, 5],
        ];
        RealizedComplex::new(PolygonComplex::from_faces(8, faces).unwrap(), coords).unwrap()
    }

    #[test]
    fn cube_faces_point_outward() {
        let r = cube();
        let c = outward_oriented(&r).unwrap();
        assert_eq!(signed_volume6(&c, &r.coords), ints(&[6])[0]);
        // each face normal points away from the centre
        let centre = [1, 1, 1].map(|x| Rational::new(x.into(), 2.into()));
        for f in c.faces() {
            let p = |k: usize| &r.coords[f[k]];
            let u: Vec<Rational> = (0..3).map(|i| &p(1)[i] - &p(0)[i]).collect();
            let v: Vec<Rational> = (0..3).map(|i| &p(2)[i] - &p(0)[i]).collect();
            let w: Vec<Rational> = (0..3).map(|i| &p(0)[i] - &centre[i]).collect();
            assert!(det3(&u, &v, &w).is_positive());
        }
    }

    #[test]
    fn off_layout() {
        let off = write_off(&cube(), 5).unwrap();
        let lines: Vec<&str> = off.lines().collect();
        assert_eq!(lines[0], "OFF");
        assert_eq!(lines[1], "8 6 12");
        assert_eq!(lines.len(), 2 + 8 + 6);
        assert!(lines[10].starts_with("4 "));
    }

    #[test]
    fn obj_is_one_based() {
        let obj = write_obj(&cube(), 5).unwrap();
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 8);
        assert!(obj.lines().filter(|l| l.starts_with("f ")).all(|l| !l.split(' ').any(|t| t == "0")));
    }

    #[test]
    fn wrong_dimension() {
        let r = RealizedComplex::new(
            PolygonComplex::from_faces(3, vec![vec![0, 1, 2]]).unwrap(),
            vec![ints(&[0, 0]), ints(&[1, 0]), ints(&[0, 1])],
        )
        .unwrap();
        assert!(write_off(&r, 5).is_err());
    }
}
