//! Exact phase-one simplex for feasibility of `A x = b, x >= 0`.
//!
//! Pivoting follows Bland's rule, so the method terminates on degenerate
//! systems. Infeasibility is reported with a Farkas vector `y` satisfying
//! `y A >= 0` and `y b < 0`.

use num::{One, Signed, Zero};

use super::matrix::{dot, RatMatrix};
use super::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    /// A nonnegative solution of `A x = b`.
    Feasible(Vec<Rational>),
    /// Farkas certificate `y` with `y A >= 0` and `y b < 0`.
    Infeasible(Vec<Rational>),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

struct Tableau {
    rows: usize,
    width: usize,
    cells: Vec<Rational>,
    cost: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> &Rational {
        &self.cells[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> &Rational {
        self.at(i, self.width - 1)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let inv = self.at(r, c).recip();
        for j in 0..w {
            if !self.cells[r * w + j].is_zero() {
                self.cells[r * w + j] *= &inv;
            }
        }
        let prow: Vec<Rational> = self.cells[r * w..(r + 1) * w].to_vec();
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.cells[i * w + c].clone();
            if f.is_zero() {
                continue;
            }
            for (j, pv) in prow.iter().enumerate() {
                if !pv.is_zero() {
                    self.cells[i * w + j] -= &f * pv;
                }
            }
        }
        let f = self.cost[c].clone();
        if !f.is_zero() {
            for (j, pv) in prow.iter().enumerate() {
                if !pv.is_zero() {
                    self.cost[j] -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }
}

/// Decides whether `A x = b` has a solution with `x >= 0`.
pub fn nonnegative_solution(a: &RatMatrix, b: &[Rational]) -> Feasibility {
    let m = a.rows();
    let n = a.cols();
    assert_eq!(b.len(), m, "rhs length must match row count");
    if m == 0 {
        return Feasibility::Feasible(vec![Rational::zero(); n]);
    }

    // columns: n structural, m artificial, 1 rhs
    let width = n + m + 1;
    let mut cells = vec![Rational::zero(); m * width];
    let mut flipped = vec![false; m];
    for i in 0..m {
        flipped[i] = b[i].is_negative();
        let s = if flipped[i] { -Rational::one() } else { Rational::one() };
        for j in 0..n {
            let v = a.get(i, j);
            if !v.is_zero() {
                cells[i * width + j] = v * &s;
            }
        }
        cells[i * width + n + i] = Rational::one();
        cells[i * width + width - 1] = &b[i] * &s;
    }
    // reduced costs of the phase-one objective (sum of artificials)
    let mut cost = vec![Rational::zero(); width];
    for i in 0..m {
        for j in 0..n {
            cost[j] -= &cells[i * width + j];
        }
        cost[width - 1] -= &cells[i * width + width - 1];
    }
    let mut t = Tableau { rows: m, width, cells, cost, basis: (n..n + m).collect() };

    loop {
        let Some(enter) = (0..n + m).find(|&j| t.cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            let coef = t.at(i, enter);
            if !coef.is_positive() {
                continue;
            }
            let ratio = t.rhs(i) / coef;
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && t.basis[i] < t.basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // phase one is bounded below by zero, so a leaving row always exists
        let (r, _) = leave.expect("phase-one objective is bounded");
        t.pivot(r, enter);
    }

    let residual = -t.cost[width - 1].clone();
    if residual.is_zero() {
        let mut x = vec![Rational::zero(); n];
        for (i, &bj) in t.basis.iter().enumerate() {
            if bj < n {
                x[bj] = t.rhs(i).clone();
            }
        }
        debug_assert!(is_solution(a, b, &x));
        Feasibility::Feasible(x)
    } else {
        // dual of the optimal phase-one basis: y_i = 1 - reduced cost of artificial i
        let y: Vec<Rational> = (0..m)
            .map(|i| {
                let yi = Rational::one() - &t.cost[n + i];
                let signed = if flipped[i] { -yi } else { yi };
                -signed
            })
            .collect();
        debug_assert!(is_farkas(a, b, &y));
        Feasibility::Infeasible(y)
    }
}

pub fn is_solution(a: &RatMatrix, b: &[Rational], x: &[Rational]) -> bool {
    x.iter().all(|v| !v.is_negative()) && a.mul_vec(x) == b
}

pub fn is_farkas(a: &RatMatrix, b: &[Rational], y: &[Rational]) -> bool {
    let at = a.transpose();
    (0..a.cols()).all(|j| !dot(at.row(j), y).is_negative()) && dot(y, b).is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ints};

    #[test]
    fn simple_feasible() {
        let a = RatMatrix::from_rows(&[ints(&[1, 1, 0]), ints(&[0, 1, 1])]);
        let b = ints(&[2, 3]);
        match nonnegative_solution(&a, &b) {
            Feasibility::Feasible(x) => assert!(is_solution(&a, &b, &x)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_rhs_infeasible() {
        // x1 + x2 = -1 has no nonnegative solution
        let a = RatMatrix::from_rows(&[ints(&[1, 1])]);
        let b = ints(&[-1]);
        match nonnegative_solution(&a, &b) {
            Feasibility::Infeasible(y) => assert!(is_farkas(&a, &b, &y)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale-style degenerate system; Bland's rule must terminate
        let a = RatMatrix::from_rows(&[
            vec![crate::exact::rat(1, 4), int(-8), int(-1), int(9), int(1), int(0), int(0)],
            vec![crate::exact::rat(1, 2), int(-12), crate::exact::rat(-1, 2), int(3), int(0), int(1), int(0)],
            vec![int(0), int(0), int(1), int(0), int(0), int(0), int(1)],
        ]);
        let b = ints(&[0, 0, 1]);
        assert!(nonnegative_solution(&a, &b).is_feasible());
    }

    #[test]
    fn redundant_rows() {
        let a = RatMatrix::from_rows(&[ints(&[1, 2]), ints(&[2, 4])]);
        assert!(nonnegative_solution(&a, &ints(&[3, 6])).is_feasible());
        match nonnegative_solution(&a, &ints(&[3, 7])) {
            Feasibility::Infeasible(y) => assert!(is_farkas(&a, &ints(&[3, 7]), &y)),
            other => panic!("{other:?}"),
        }
    }
}
