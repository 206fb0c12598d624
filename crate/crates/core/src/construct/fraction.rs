//! Rational functions of ζ with integer numerator and monic denominator.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{internal, Constructor, Halt};
use crate::exact::{RatPoly, Rational};
use crate::fexpr::NodeId;

fn xn_plus(n: usize, extra: &[usize]) -> RatPoly {
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    c[0] += Rational::one();
    for &i in extra {
        c[i] += Rational::one();
    }
    RatPoly::new(c)
}

fn int_coeff(r: &Rational) -> Result<BigInt, Halt> {
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(internal(
            "fraction numerator must have integer coefficients",
        ))
    }
}

impl Constructor {
    /// `1/ζ^k` for `k ≥ 1`.
    pub fn mono(&mut self, k: usize) -> Result<NodeId, Halt> {
        assert!(k >= 1, "mono needs a positive exponent");
        if self.mono_memo.is_empty() {
            let z = self.zero();
            let first = self.map(z)?;
            self.mono_memo.push(first);
        }
        while self.mono_memo.len() < k {
            let j = self.mono_memo.len();
            // 1/(ζ(1 − 1/(ζ^j + 1))) = 1/ζ + 1/ζ^{j+1}
            let f = self.field_fraction(&RatPoly::one(), &xn_plus(j, &[]))?;
            let m = self.map(f)?;
            let first = self.mono_memo[0];
            let next = self.lincomb(&[(m, BigInt::one()), (first, -BigInt::one())])?;
            self.mono_memo.push(next);
        }
        Ok(self.mono_memo[k - 1])
    }

    /// `ζ^n / Q(ζ)` for monic `Q` of degree `n + 1`.
    fn case1(&mut self, q: &RatPoly) -> Result<NodeId, Halt> {
        let d = q.degree().expect("nonzero denominator");
        let mut terms = Vec::with_capacity(d);
        for k in 1..=d {
            let c = int_coeff(&q.coeff(d - k))?;
            if !c.is_zero() {
                terms.push((self.mono(k)?, -c));
            }
        }
        let inner = self.lincomb(&terms)?;
        self.map(inner)
    }

    /// `P(ζ)/Q(ζ)` for monic `P` of degree `n` with `P(0) = 1` and monic `Q`
    /// of degree `n + 1`.
    fn case2(&mut self, p: &RatPoly, q: &RatPoly) -> Result<NodeId, Halt> {
        let q0 = q.coeff(0);
        let shifted = q - &p.scale(&q0);
        let s = RatPoly::new(shifted.coeffs().iter().skip(1).cloned().collect());
        let r = p - &s;
        let f = self.field_fraction(&r, p)?;
        let first = self.mono(1)?;
        let inner = self.lincomb(&[(f, BigInt::one()), (first, -int_coeff(&q0)?)])?;
        self.map(inner)
    }

    /// A node with value `P(ζ)/Q(ζ)`, where `Q` is monic of degree `n + 1`
    /// and `P` has integer coefficients and degree at most `n`.
    pub fn field_fraction(&mut self, p: &RatPoly, q: &RatPoly) -> Result<NodeId, Halt> {
        let top = std::mem::replace(&mut self.final_request, false);
        if !q.is_monic() || p.degree().unwrap_or(0) >= q.degree().unwrap_or(0) {
            return Err(internal("field_fraction needs monic Q with deg P < deg Q"));
        }
        if p.is_zero() {
            return Ok(self.zero());
        }
        let key = (p.clone(), q.clone());
        if let Some(&id) = self.frac_memo.get(&key) {
            return Ok(id);
        }
        let n = q.degree().unwrap() - 1;
        let pc: Vec<BigInt> = (0..=n)
            .map(|i| int_coeff(&p.coeff(i)))
            .collect::<Result<_, _>>()?;
        let terms = if n == 0 {
            vec![(self.case1(q)?, pc[0].clone())]
        } else {
            let mut terms = Vec::with_capacity(n + 1);
            let c1 = &pc[n] - &pc[0];
            if !c1.is_zero() {
                terms.push((self.case1(q)?, c1));
            }
            let mid: BigInt = pc[1..n].iter().sum();
            let c20 = &pc[0] - &mid;
            if !c20.is_zero() {
                terms.push((self.case2(&xn_plus(n, &[]), q)?, c20));
            }
            for (i, ci) in pc.iter().enumerate().take(n).skip(1) {
                if !ci.is_zero() {
                    terms.push((self.case2(&xn_plus(n, &[i]), q)?, ci.clone()));
                }
            }
            terms
        };
        let id = self.lincomb_inner(&terms, top)?;
        self.frac_memo.insert(key, id);
        Ok(id)
    }

    /// Like [`Self::field_fraction`], but the returned node may itself have value 1.
    pub fn field_fraction_root(&mut self, p: &RatPoly, q: &RatPoly) -> Result<NodeId, Halt> {
        self.final_request = true;
        let r = self.field_fraction(p, q);
        self.final_request = false;
        r
    }
}
