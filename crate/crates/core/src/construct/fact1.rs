//! Realizing a positive integer as the value of an expression.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::lemma2::{lemma2, Lemma2Error};
use super::{internal, ConstructError, Constructor, Halt};
use crate::exact::{
    isolate_real_roots, root_upper_bound, RatPoly, Rational, RootInterval, SturmSequence,
};
use crate::fexpr::NodeId;
use crate::numfield::FieldElem;

/// Intermediate quantities of the positive-integer construction, as text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fact1Trace {
    pub delta: String,
    pub alpha: String,
    pub beta: String,
    pub k: String,
    pub m: String,
    pub alpha_prime: String,
    pub zeta_prime: String,
    pub zeta_prime_minpoly: String,
    pub qs: Vec<String>,
    pub ms: Vec<String>,
    pub n_value: String,
}

fn show(e: &FieldElem) -> String {
    e.to_string()
}

fn lemma2_halt(e: Lemma2Error) -> Halt {
    match e {
        Lemma2Error::QIsRoot(q) => Halt::Factor(RatPoly::new(vec![-q, Rational::one()])),
        other => internal(other.to_string()),
    }
}

/// Splits consecutive intervals apart and lifts the lowest one above 0.
fn separate(ivs: &mut [RootInterval], sturm: &SturmSequence) {
    for i in 0..ivs.len() {
        if i + 1 < ivs.len() {
            while ivs[i + 1].hi >= ivs[i].lo {
                if ivs[i].width() >= ivs[i + 1].width() {
                    ivs[i] = ivs[i].bisect(sturm);
                } else {
                    ivs[i + 1] = ivs[i + 1].bisect(sturm);
                }
            }
        }
    }
    if let Some(last) = ivs.last_mut() {
        while last.lo < Rational::zero() {
            *last = last.bisect(sturm);
        }
    }
}

/// Smallest `j` such that some `i/(Δj + 1)` lies in `(low, high]`; returns `(i, j)`.
fn pick_q(
    low: &Rational,
    high: &Rational,
    delta: &BigInt,
    j_cap: u64,
) -> Result<(BigInt, BigInt), Halt> {
    for j in 0..=j_cap {
        let j = BigInt::from(j);
        let den = delta * &j + 1u32;
        let i = (low * Rational::from_integer(den.clone()))
            .floor()
            .to_integer()
            + 1u32;
        if Rational::new(i.clone(), den) <= *high {
            return Ok((i, j));
        }
    }
    Err(ConstructError::SearchCapExceeded {
        what: "interleaving rational",
        cap: j_cap.to_string(),
    }
    .into())
}

impl Constructor {
    /// Builds a node whose value is a positive integer; needs `deg M₂ ≥ 2`.
    pub fn fact1(&mut self, k_cap: &BigUint, j_cap: u64) -> Result<(NodeId, Fact1Trace), Halt> {
        let ctx = self.store.ctx().clone();
        let d2 = ctx.degree();
        if d2 < 2 {
            return Err(internal(
                "positive-integer search needs a modulus of degree at least 2",
            ));
        }
        let m2 = ctx.modulus().to_rat();

        let ks: Vec<BigUint> = (1..=d2 as u64).rev().map(BigUint::from).collect();
        let mut basics = Vec::with_capacity(d2);
        for k in &ks {
            basics.push(self.basic_element(k)?);
        }
        let qs1: Vec<Rational> = ks
            .iter()
            .map(|k| Rational::from_integer(k.clone().into()))
            .collect();
        let sol = lemma2(&m2, &qs1).map_err(lemma2_halt)?;
        let delta = sol.total.clone();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (b, m) in basics.iter().zip(&sol.ms) {
            if m.is_positive() {
                pos.push((*b, m.magnitude().clone()));
            } else if m.is_negative() {
                neg.push((*b, m.magnitude().clone()));
            }
        }
        let a = self.sum(pos)?;
        let b = self.sum(neg)?;
        let alpha = self.store.value(a).clone();
        if ctx.sub(&alpha, self.store.value(b)) != ctx.from_int(&delta) {
            return Err(internal("first partial-fraction identity failed"));
        }

        let m = root_upper_bound(&m2).ceil().to_integer();
        let bm = self.basic_element(m.magnitude())?;
        let unit = self.store.value(bm).clone();
        let one_minus_alpha = ctx.sub(&ctx.one(), &alpha);
        let mut k = BigUint::one();
        loop {
            let shifted = ctx.sub(&one_minus_alpha, &ctx.scale(&unit, &k.clone().into()));
            if ctx.is_totally_positive(&shifted) {
                break;
            }
            k <<= 1u32;
            if &k > k_cap {
                return Err(ConstructError::SearchCapExceeded {
                    what: "beta multiplier",
                    cap: k_cap.to_string(),
                }
                .into());
            }
        }
        let beta_node = self.sum(vec![(bm, k.clone())])?;
        let a2 = self.sum(vec![(a, BigUint::one()), (beta_node, BigUint::one())])?;
        let b2 = self.sum(vec![(b, BigUint::one()), (beta_node, BigUint::one())])?;
        let alpha2 = self.store.value(a2).clone();
        let zeta2 = ctx.mul(&ctx.zeta(), &ctx.sub(&ctx.one(), &alpha2));

        let p2 = ctx.elem_minpoly(&zeta2);
        let sturm = SturmSequence::new(&p2);
        let mut ivs = isolate_real_roots(&p2);
        if ivs.len() != p2.degree().unwrap_or(0) {
            return Err(internal("shifted element is not totally real"));
        }
        if sturm.count(None, Some(&Rational::zero())) != 0 {
            return Err(internal("shifted element is not totally positive"));
        }
        separate(&mut ivs, &sturm);
        let n = ivs.len();
        let mut params = Vec::with_capacity(n);
        for i in 0..n - 1 {
            params.push(pick_q(&ivs[i + 1].hi, &ivs[i].lo, &delta, j_cap)?);
        }
        params.push((BigInt::zero(), BigInt::zero()));
        let qs: Vec<Rational> = params
            .iter()
            .map(|(i, j)| Rational::new(i.clone(), &delta * j + 1u32))
            .collect();
        for (idx, q) in qs.iter().enumerate() {
            let v = p2.eval(q);
            let want_neg = (idx + 1).is_odd();
            if v.is_zero() || v.is_negative() != want_neg {
                return Err(internal("interleaving sign law failed"));
            }
        }

        let be0 = self.basic_element(&BigUint::zero())?;
        let mut recips = Vec::with_capacity(n);
        for ((i, j), q) in params.iter().zip(&qs) {
            let den = (&delta * j + 1u32).magnitude().clone();
            let wa = (j * (&delta - 1u32) + 1u32).magnitude().clone();
            let s = self.sum(vec![
                (a2, wa),
                (b2, j.magnitude().clone()),
                (be0, i.magnitude().clone()),
            ])?;
            let mp = self.map(s)?;
            let r = self.sum(vec![(mp, den)])?;
            let target = ctx.sub(&zeta2, &ctx.from_rational(q.clone()));
            let ok = ctx
                .inv(&target)
                .map(|t| &t == self.store.value(r))
                .unwrap_or(false);
            if !ok {
                return Err(internal("reciprocal shift has the wrong value"));
            }
            recips.push(r);
        }

        let sol2 = lemma2(&p2, &qs).map_err(lemma2_halt)?;
        if sol2.ms.iter().any(|m| !m.is_positive()) {
            return Err(internal(
                "second partial-fraction coefficients are not positive",
            ));
        }
        let parts = recips
            .iter()
            .zip(&sol2.ms)
            .map(|(r, m)| (*r, m.magnitude().clone()))
            .collect();
        let nf = self.sum(parts)?;
        if self.store.value(nf).as_positive_integer() != Some(sol2.total.clone()) {
            return Err(internal("constructed integer has the wrong value"));
        }
        self.set_integer(nf)?;

        let trace = Fact1Trace {
            delta: delta.to_string(),
            alpha: show(&alpha),
            beta: show(&ctx.scale(&unit, &k.clone().into())),
            k: k.to_string(),
            m: m.to_string(),
            alpha_prime: show(&alpha2),
            zeta_prime: show(&zeta2),
            zeta_prime_minpoly: p2.to_string(),
            qs: qs.iter().map(|q| q.to_string()).collect(),
            ms: sol2.ms.iter().map(|m| m.to_string()).collect(),
            n_value: sol2.total.to_string(),
        };
        Ok((nf, trace))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntPoly;
    use crate::fexpr::ExprStore;
    use crate::numfield::FieldCtx;

    fn golden() -> Constructor {
        let ctx = FieldCtx::with_modulus(
            IntPoly::from_i64s(&[-1, -1, 1]),
            IntPoly::from_i64s(&[1, -3, 1]),
        );
        Constructor::new(ExprStore::new(ctx))
    }

    #[test]
    fn golden_ratio_trace() {
        let mut c = golden();
        let (nf, t) = c.fact1(&(BigUint::one() << 63u32), 1 << 20).unwrap();
        assert_eq!(t.delta, "1");
        assert_eq!(t.m, "4");
        assert_eq!(t.k, "1");
        assert_eq!(t.qs.len(), 2);
        assert_eq!(t.qs[1], "0");
        assert_eq!(
            c.store()
                .value(nf)
                .as_positive_integer()
                .map(|n| n.to_string()),
            Some(t.n_value.clone())
        );
        assert_eq!(c.integer().map(|(id, _)| id), Some(nf));
    }

    #[test]
    fn negation_over_golden_field() {
        let mut c = golden();
        c.fact1(&(BigUint::one() << 63u32), 1 << 20).unwrap();
        let b1 = c.basic_element(&BigUint::one()).unwrap();
        let n = c.negate(b1).unwrap();
        let ctx = c.store().ctx().clone();
        let want = ctx.sub(&ctx.from_int(&BigInt::from(2)), &ctx.zeta());
        assert_eq!(c.store().value(n), &want);
        let back = c.negate(n).unwrap();
        assert_eq!(c.store().value(back), c.store().value(b1));
    }

    #[test]
    fn fractions_over_golden_field() {
        let mut c = golden();
        c.fact1(&(BigUint::one() << 63u32), 1 << 20).unwrap();
        let ctx = c.store().ctx().clone();
        let cases: [(&[i64], &[i64]); 4] = [
            (&[1], &[0, 1]),
            (&[2, -1], &[1, 0, 1]),
            (&[0, 0, 1], &[1, 1, 1, 1]),
            (&[-3, 2], &[0, 0, 1]),
        ];
        for (p, q) in cases {
            let (p, q) = (RatPoly::from_i64s(p), RatPoly::from_i64s(q));
            let want = ctx.mul(
                &ctx.eval_at(&p, &ctx.zeta()),
                &ctx.inv(&ctx.eval_at(&q, &ctx.zeta())).unwrap(),
            );
            match c.field_fraction(&p, &q) {
                Ok(id) => assert_eq!(c.store().value(id), &want),
                Err(Halt::Witness(w)) => assert!(c.store().is_witness(w)),
                Err(h) => panic!("unexpected halt {h:?}"),
            }
        }
    }

    #[test]
    fn q_picking() {
        let r = |a: i64, b: i64| Rational::new(a.into(), b.into());
        assert_eq!(
            pick_q(&r(1, 3), &r(2, 3), &BigInt::one(), 10).unwrap(),
            (1.into(), 1.into())
        );
        assert_eq!(
            pick_q(&r(-1, 2), &r(1, 1), &BigInt::one(), 10).unwrap(),
            (0.into(), 0.into())
        );
        assert_eq!(
            pick_q(&r(3, 10), &r(1, 3), &BigInt::from(2), 10).unwrap(),
            (1.into(), 1.into())
        );
        assert!(pick_q(&r(3, 10), &r(1, 3), &BigInt::from(2), 0).is_err());
    }

    #[test]
    fn separation_is_strict() {
        // (x − 1)(x − 2)(x − 3)
        let p = RatPoly::from_i64s(&[-6, 11, -6, 1]);
        let sturm = SturmSequence::new(&p);
        let mut ivs = isolate_real_roots(&p);
        separate(&mut ivs, &sturm);
        for w in ivs.windows(2) {
            assert!(w[1].hi < w[0].lo);
        }
        assert!(ivs[2].lo >= Rational::zero());
    }
}
