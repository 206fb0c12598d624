use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exact::{RatPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Lemma2Error {
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("need exactly deg P = {degree} points, got {points}")]
    LengthMismatch { degree: usize, points: usize },
    #[error("points must be strictly decreasing (index {0})")]
    DuplicateQ(usize),
    #[error("point {0} is a root of the polynomial")]
    QIsRoot(Rational),
}

/// Integers `ms` and a positive integer `total` with
/// `Σ ms_i / (ζ − q_i) = total` for every root ζ of `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma2Solution {
    pub ms: Vec<BigInt>,
    pub total: BigInt,
}

/// Partial-fraction coefficients of `Π(X − q_i) − P` in the Lagrange-type
/// basis `Q_i = Π_{j≠i}(X − q_j)`, scaled to integers.
///
/// Dividing `Σ θ_i·Q_i(X) = Π(X − q_i) − P(X)` by `Π(X − q_i)` at a root of
/// `P` gives `Σ θ_i / (ζ − q_i) = 1`. The sign of `ms_i` is the sign of
/// `(−1)^i·P(q_i)` (1-based `i`).
pub fn lemma2(p: &RatPoly, qs: &[Rational]) -> Result<Lemma2Solution, Lemma2Error> {
    if !p.is_monic() {
        return Err(Lemma2Error::NotMonic);
    }
    let degree = p.degree().unwrap_or(0);
    if qs.len() != degree {
        return Err(Lemma2Error::LengthMismatch {
            degree,
            points: qs.len(),
        });
    }
    if let Some(i) = (1..qs.len()).find(|&i| qs[i] >= qs[i - 1]) {
        return Err(Lemma2Error::DuplicateQ(i));
    }
    if let Some(q) = qs.iter().find(|q| p.eval(q).is_zero()) {
        return Err(Lemma2Error::QIsRoot(q.clone()));
    }
    let prod = qs.iter().fold(RatPoly::one(), |acc, q| {
        &acc * &RatPoly::new(vec![-q.clone(), Rational::one()])
    });
    let r = &prod - p;
    let thetas: Vec<Rational> = qs
        .iter()
        .enumerate()
        .map(|(i, qi)| {
            let den = qs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(Rational::one(), |acc, (_, qj)| acc * (qi - qj));
            r.eval(qi) / den
        })
        .collect();
    let total = thetas
        .iter()
        .fold(BigInt::one(), |acc, t| acc.lcm(t.denom()));
    let scale = Rational::from_integer(total.clone());
    let ms = thetas.iter().map(|t| (t * &scale).to_integer()).collect();
    Ok(Lemma2Solution { ms, total })
}

/// `Q_i = Π_{j≠i}(X − q_j)`.
pub fn lagrange_basis(qs: &[Rational], i: usize) -> RatPoly {
    qs.iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .fold(RatPoly::one(), |acc, (_, q)| {
            &acc * &RatPoly::new(vec![-q.clone(), Rational::one()])
        })
}
