use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{serde_rational_vec, Rational};

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    #[serde(with = "serde_rational_vec")]
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::from_integer(1.into()));
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            entries.extend(r.iter().cloned());
        }
        Self { rows: rows.len(), cols, entries }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Rational>], height: usize) -> Self {
        let mut m = Self::zeros(height, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), height, "ragged columns");
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).recip();
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in c..self.cols {
                    if self.get(r, j).is_zero() {
                        continue;
                    }
                    let v = self.get(i, j) - &f * self.get(r, j);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::from_integer(1.into());
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.get(r, f).clone();
                }
                v
            })
            .collect()
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[Rational], s: &Rational) -> Vec<Rational> {
    a.iter().map(|x| x * s).collect()
}

pub fn is_zero_vec(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Exact solution of `m x = rhs` for square `m`; `None` when `m` is singular.
pub fn solve_square(m: &RatMatrix, rhs: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(m.rows(), m.cols(), "solve_square needs a square matrix");
    assert_eq!(rhs.len(), m.rows());
    let n = m.rows();
    let mut aug = RatMatrix::zeros(n, n + 1);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n, rhs[i].clone());
    }
    // forward elimination with back substitution; cheaper than full rref
    for c in 0..n {
        let p = (c..n).find(|&i| !aug.get(i, c).is_zero())?;
        aug.swap_rows(c, p);
        let pivot = aug.get(c, c).clone();
        for i in c + 1..n {
            if aug.get(i, c).is_zero() {
                continue;
            }
            let f = aug.get(i, c) / &pivot;
            for j in c..=n {
                if aug.get(c, j).is_zero() {
                    continue;
                }
                let v = aug.get(i, j) - &f * aug.get(c, j);
                aug.set(i, j, v);
            }
        }
    }
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = aug.get(i, n).clone();
        for j in i + 1..n {
            if !aug.get(i, j).is_zero() {
                acc -= aug.get(i, j) * &x[j];
            }
        }
        x[i] = acc / aug.get(i, i);
    }
    Some(x)
}

/// Dimension of the affine hull of `points` (0 for a single point).
pub fn affine_rank(points: &[Vec<Rational>]) -> usize {
    assert!(!points.is_empty(), "affine_rank of an empty point set");
    let base = &points[0];
    let diffs: Vec<Vec<Rational>> = points[1..].iter().map(|p| sub(p, base)).collect();
    if diffs.is_empty() {
        return 0;
    }
    RatMatrix::from_rows(&diffs).rank()
}

pub fn is_affinely_independent(points: &[Vec<Rational>]) -> bool {
    affine_rank(points) + 1 == points.len()
}

/// Sign of a rational as -1, 0 or 1.
pub fn signum(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ints, rat};

    #[test]
    fn solve_identity() {
        let x = solve_square(&RatMatrix::identity(3), &ints(&[1, 2, 3])).unwrap();
        assert_eq!(x, ints(&[1, 2, 3]));
    }

    #[test]
    fn solve_diagonal() {
        let m = RatMatrix::from_rows(&[ints(&[2, 0]), ints(&[0, 2])]);
        assert_eq!(solve_square(&m, &ints(&[1, 1])).unwrap(), vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn solve_singular() {
        let m = RatMatrix::from_rows(&[ints(&[1, 1]), ints(&[1, 1])]);
        assert!(solve_square(&m, &ints(&[1, 2])).is_none());
        assert!(solve_square(&m, &ints(&[1, 1])).is_none());
    }

    #[test]
    fn solve_needs_pivoting() {
        let m = RatMatrix::from_rows(&[ints(&[0, 1]), ints(&[3, 0])]);
        assert_eq!(solve_square(&m, &ints(&[5, 6])).unwrap(), ints(&[2, 5]));
    }

    #[test]
    fn affine_ranks() {
        let tri = vec![ints(&[0, 0]), ints(&[1, 0]), ints(&[0, 1])];
        assert_eq!(affine_rank(&tri), 2);
        assert!(is_affinely_independent(&tri));
        let line = vec![ints(&[0, 0]), ints(&[1, 1]), ints(&[2, 2])];
        assert_eq!(affine_rank(&line), 1);
        assert!(!is_affinely_independent(&line));
        assert_eq!(affine_rank(&[ints(&[4, 4])]), 0);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = RatMatrix::from_rows(&[ints(&[1, 2, 3, 4]), ints(&[2, 4, 6, 9])]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(is_zero_vec(&m.mul_vec(v)));
        }
        assert_eq!(m.rank(), 2);
        assert_eq!(m.transpose().rank(), 2);
        assert_eq!(dot(&ints(&[1, 2]), &[int(3), rat(1, 2)]), int(4));
    }
}
