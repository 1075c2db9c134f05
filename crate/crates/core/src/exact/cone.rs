//! Positive spanning and sign-constrained nonnegative combinations, both
//! reduced to [`nonnegative_solution`] and returned with exact certificates.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::lp::{nonnegative_solution, Feasibility};
use super::matrix::{dot, is_zero_vec, RatMatrix};
use super::rational::{serde_rational_vec, Rational};

/// Nonnegative multipliers together with the combination they produce.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanCertificate {
    #[serde(with = "serde_rational_vec")]
    pub multipliers: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub witness: Vec<Rational>,
}

impl SpanCertificate {
    fn from_multipliers(vectors: &[Vec<Rational>], multipliers: Vec<Rational>) -> Self {
        let witness = combine(vectors, &multipliers);
        Self { multipliers, witness }
    }

    /// Recomputes the combination and checks nonnegativity.
    pub fn verify(&self, vectors: &[Vec<Rational>]) -> bool {
        self.multipliers.len() == vectors.len()
            && self.multipliers.iter().all(|l| !l.is_negative())
            && (vectors.is_empty() || combine(vectors, &self.multipliers) == self.witness)
    }
}

fn combine(vectors: &[Vec<Rational>], multipliers: &[Rational]) -> Vec<Rational> {
    let n = vectors.first().map_or(0, Vec::len);
    let mut out = vec![Rational::zero(); n];
    for (v, l) in vectors.iter().zip(multipliers) {
        if l.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o += l * x;
        }
    }
    out
}

/// Outcome of [`positively_spans`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PositiveSpan {
    /// Full rank and a strictly positive combination equal to zero.
    Spanning(SpanCertificate),
    /// A nonzero functional `c` with `c . v >= 0` for every input vector.
    Separated {
        #[serde(with = "serde_rational_vec")]
        functional: Vec<Rational>,
    },
}

impl PositiveSpan {
    pub fn spans(&self) -> bool {
        matches!(self, PositiveSpan::Spanning(_))
    }

    pub fn certificate(&self) -> Option<&SpanCertificate> {
        match self {
            PositiveSpan::Spanning(c) => Some(c),
            PositiveSpan::Separated { .. } => None,
        }
    }

    /// Independent re-check of whichever certificate is carried.
    pub fn verify(&self, vectors: &[Vec<Rational>]) -> bool {
        match self {
            PositiveSpan::Spanning(cert) => {
                let n = vectors.first().map_or(0, Vec::len);
                cert.verify(vectors)
                    && cert.multipliers.iter().all(Signed::is_positive)
                    && is_zero_vec(&cert.witness)
                    && RatMatrix::from_rows(vectors).rank() == n
            }
            PositiveSpan::Separated { functional } => {
                !is_zero_vec(functional)
                    && vectors.iter().all(|v| !dot(functional, v).is_negative())
            }
        }
    }
}

/// Whether the vectors positively span their ambient space `R^n`.
///
/// Tests full rank, then feasibility of `sum l_i v_i = 0` with every
/// `l_i >= 1`.
pub fn positively_spans(vectors: &[Vec<Rational>]) -> PositiveSpan {
    assert!(!vectors.is_empty(), "positively_spans needs at least one vector");
    let n = vectors[0].len();
    assert!(n >= 1, "positively_spans needs dimension >= 1");

    let rows = RatMatrix::from_rows(vectors);
    if rows.rank() < n {
        let functional = rows.nullspace().into_iter().next().expect("rank deficient");
        return PositiveSpan::Separated { functional };
    }

    // substitute l = 1 + mu, mu >= 0:  sum mu_i v_i = -sum v_i
    let a = RatMatrix::from_columns(vectors, n);
    let ones = vec![Rational::one(); vectors.len()];
    let b: Vec<Rational> = combine(vectors, &ones).into_iter().map(|x| -x).collect();
    match nonnegative_solution(&a, &b) {
        Feasibility::Feasible(mu) => {
            let lambda = mu.into_iter().map(|m| m + Rational::one()).collect();
            PositiveSpan::Spanning(SpanCertificate::from_multipliers(vectors, lambda))
        }
        Feasibility::Infeasible(y) => PositiveSpan::Separated { functional: y },
    }
}

/// Per-coordinate requirement on the combination `nu` in [`nonneg_combination`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoordSign {
    Zero,
    Negative,
    Free,
}

/// Finds `l >= 0` such that `nu = sum l_i v_i` matches `pattern`.
pub fn nonneg_combination(vectors: &[Vec<Rational>], pattern: &[CoordSign]) -> Option<SpanCertificate> {
    assert!(!vectors.is_empty(), "nonneg_combination needs at least one vector");
    let n = vectors[0].len();
    assert_eq!(pattern.len(), n, "pattern length must equal the dimension");

    let constrained: Vec<usize> = (0..n).filter(|&k| pattern[k] != CoordSign::Free).collect();
    let negatives: Vec<usize> = constrained
        .iter()
        .copied()
        .filter(|&k| pattern[k] == CoordSign::Negative)
        .collect();
    let cols = vectors.len() + negatives.len();
    let mut a = RatMatrix::zeros(constrained.len(), cols);
    let mut b = vec![Rational::zero(); constrained.len()];
    for (r, &k) in constrained.iter().enumerate() {
        for (i, v) in vectors.iter().enumerate() {
            a.set(r, i, v[k].clone());
        }
        if let Some(s) = negatives.iter().position(|&nk| nk == k) {
            // nu_k + s = -1 with s >= 0, i.e. nu_k <= -1
            a.set(r, vectors.len() + s, Rational::one());
            b[r] = -Rational::one();
        }
    }
    match nonnegative_solution(&a, &b) {
        Feasibility::Feasible(x) => {
            let lambda = x[..vectors.len()].to_vec();
            Some(SpanCertificate::from_multipliers(vectors, lambda))
        }
        Feasibility::Infeasible(_) => None,
    }
}

/// Checks that `nu` satisfies `pattern`.
pub fn matches_pattern(nu: &[Rational], pattern: &[CoordSign]) -> bool {
    nu.len() == pattern.len()
        && nu.iter().zip(pattern).all(|(x, p)| match p {
            CoordSign::Zero => x.is_zero(),
            CoordSign::Negative => x.is_negative(),
            CoordSign::Free => true,
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ints;

    #[test]
    fn unit_cross_spans() {
        let v = vec![ints(&[1, 0]), ints(&[-1, 0]), ints(&[0, 1]), ints(&[0, -1])];
        let r = positively_spans(&v);
        assert!(r.spans());
        assert!(r.verify(&v));
    }

    #[test]
    fn orthant_does_not_span() {
        let v = vec![ints(&[1, 0]), ints(&[0, 1])];
        let r = positively_spans(&v);
        assert!(!r.spans());
        assert!(r.verify(&v));
    }

    #[test]
    fn rank_deficient_is_separated() {
        let v = vec![ints(&[1, 0, 0]), ints(&[-1, 0, 0]), ints(&[0, 1, 0]), ints(&[0, -1, 0])];
        let r = positively_spans(&v);
        assert!(!r.spans());
        assert!(r.verify(&v));
    }

    #[test]
    fn nonneg_pattern_feasible() {
        let v = vec![ints(&[-1, 0]), ints(&[1, 0])];
        let c = nonneg_combination(&v, &[CoordSign::Negative, CoordSign::Zero]).unwrap();
        assert!(c.verify(&v));
        assert!(matches_pattern(&c.witness, &[CoordSign::Negative, CoordSign::Zero]));
        assert!(c.multipliers[0].is_positive());
    }

    #[test]
    fn nonneg_pattern_infeasible() {
        let v = vec![ints(&[1, 1]), ints(&[1, -1])];
        assert!(nonneg_combination(&v, &[CoordSign::Negative, CoordSign::Zero]).is_none());
    }
}
