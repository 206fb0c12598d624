//! Building witnesses: expressions in the generators whose value is 1.
//!
//! [`Constructor`] wraps an [`ExprStore`] and stops the moment any created
//! node has value 1, since that node's tree already has λ as an eigenvalue.

mod fact1;
mod fraction;
mod lemma2;
mod synth;

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::exact::RatPoly;
use crate::fexpr::{Dag, ExprStore, Kind, MapError, NodeId};

pub use fact1::Fact1Trace;
pub use lemma2::{lagrange_basis, lemma2, Lemma2Error, Lemma2Solution};
pub use synth::{synthesize, SynthConfig, SynthError, SynthStats, SynthesisResult};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error("search for {what} exceeded its cap of {cap}")]
    SearchCapExceeded { what: &'static str, cap: String },
    #[error("negation needs a positive integer in the store")]
    NoInteger,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Why construction stopped before returning a node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Halt {
    /// This node has value 1.
    Witness(NodeId),
    /// An inversion exposed a factor `g(ζ)` of the modulus.
    Factor(RatPoly),
    Failed(ConstructError),
}

impl From<ConstructError> for Halt {
    fn from(e: ConstructError) -> Self {
        Halt::Failed(e)
    }
}

pub(crate) fn internal(msg: impl Into<String>) -> Halt {
    Halt::Failed(ConstructError::Internal(msg.into()))
}

pub struct Constructor {
    store: ExprStore,
    integer: Option<(NodeId, BigInt)>,
    neg_memo: HashMap<NodeId, NodeId>,
    frac_memo: HashMap<(RatPoly, RatPoly), NodeId>,
    mono_memo: Vec<NodeId>,
    final_request: bool,
}

impl Constructor {
    pub fn new(store: ExprStore) -> Self {
        Constructor {
            store,
            integer: None,
            neg_memo: HashMap::new(),
            frac_memo: HashMap::new(),
            mono_memo: Vec::new(),
            final_request: false,
        }
    }

    pub fn store(&self) -> &ExprStore {
        &self.store
    }

    pub fn into_store(self) -> ExprStore {
        self.store
    }

    /// Registers `nf`, whose value must be a positive integer, for negation.
    pub fn set_integer(&mut self, nf: NodeId) -> Result<(), ConstructError> {
        let n = self
            .store
            .value(nf)
            .as_positive_integer()
            .ok_or(ConstructError::NoInteger)?;
        self.integer = Some((nf, n));
        self.neg_memo.clear();
        Ok(())
    }

    pub fn integer(&self) -> Option<(NodeId, &BigInt)> {
        self.integer.as_ref().map(|(id, n)| (*id, n))
    }

    fn check(&self, id: NodeId, accept_witness: bool) -> Result<NodeId, Halt> {
        if !accept_witness && self.store.is_witness(id) {
            return Err(Halt::Witness(id));
        }
        Ok(id)
    }

    pub fn zero(&mut self) -> NodeId {
        self.store.make_zero()
    }

    pub fn map(&mut self, child: NodeId) -> Result<NodeId, Halt> {
        self.map_inner(child, false)
    }

    fn map_inner(&mut self, child: NodeId, accept: bool) -> Result<NodeId, Halt> {
        match self.store.make_map(child) {
            Ok(id) => self.check(id, accept),
            Err(MapError::EigenvalueFound(c)) => Err(Halt::Witness(c)),
            Err(MapError::ZeroDivisor(g)) => Err(Halt::Factor(g)),
        }
    }

    /// Sum with normalized parts: single-vertex parts are dropped, repeated
    /// children merged and the rest sorted. No parts gives `Zero`, and a lone
    /// part of multiplicity 1 is returned as is.
    pub fn sum(&mut self, parts: Vec<(NodeId, BigUint)>) -> Result<NodeId, Halt> {
        self.sum_inner(parts, false)
    }

    fn sum_inner(&mut self, parts: Vec<(NodeId, BigUint)>, accept: bool) -> Result<NodeId, Halt> {
        let mut merged: Vec<(NodeId, BigUint)> = Vec::with_capacity(parts.len());
        for (c, m) in parts {
            if m.is_zero() || self.store.size(c).is_one() {
                continue;
            }
            match merged.iter_mut().find(|(d, _)| *d == c) {
                Some((_, acc)) => *acc += m,
                None => merged.push((c, m)),
            }
        }
        merged.sort_by_key(|(c, _)| *c);
        match merged.as_slice() {
            [] => Ok(self.zero()),
            [(c, m)] if m.is_one() => self.check(*c, accept),
            _ => {
                let id = self
                    .store
                    .make_sum(merged)
                    .map_err(|e| internal(e.to_string()))?;
                self.check(id, accept)
            }
        }
    }

    /// `Σ c_i·e_i` for integer coefficients; negative terms go through [`Self::negate`].
    pub fn lincomb(&mut self, terms: &[(NodeId, BigInt)]) -> Result<NodeId, Halt> {
        self.lincomb_inner(terms, false)
    }

    fn lincomb_inner(&mut self, terms: &[(NodeId, BigInt)], accept: bool) -> Result<NodeId, Halt> {
        let mut parts = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            let e = if c.is_negative() {
                self.negate(*e)?
            } else {
                *e
            };
            parts.push((e, c.magnitude().clone()));
        }
        self.sum_inner(parts, accept)
    }

    /// `k = 0` gives `1/ζ`; `k ≥ 1` gives `1/(ζ − k)`, a pendant root above
    /// the center of a star with `k` leaves.
    pub fn basic_element(&mut self, k: &BigUint) -> Result<NodeId, Halt> {
        let z = self.zero();
        let leaf = self.map(z)?;
        if k.is_zero() {
            return Ok(leaf);
        }
        let star = self.sum(vec![(leaf, k.clone())])?;
        self.map(star)
    }

    /// A node with value `−value(e)`, using the registered integer `n`.
    pub fn negate(&mut self, e: NodeId) -> Result<NodeId, Halt> {
        if let Some(&r) = self.neg_memo.get(&e) {
            return Ok(r);
        }
        let (nf, n) = self.integer.clone().ok_or(ConstructError::NoInteger)?;
        let r = match self.store.kind(e).clone() {
            Kind::Zero => e,
            Kind::Sum(parts) => {
                let mut np = Vec::with_capacity(parts.len());
                for (c, m) in parts {
                    np.push((self.negate(c)?, m));
                }
                self.sum(np)?
            }
            Kind::Map(a) => {
                let na = self.negate(a)?;
                if n.is_one() {
                    let inner = self.sum(vec![(na, BigUint::one()), (nf, BigUint::from(2u32))])?;
                    self.map(inner)?
                } else {
                    let k = (n - 1u32).magnitude().clone();
                    let inner = self.sum(vec![(na, k.clone()), (nf, BigUint::one())])?;
                    let m = self.map(inner)?;
                    self.sum(vec![(m, k)])?
                }
            }
        };
        let ctx = self.store.ctx();
        if *self.store.value(r) != ctx.neg(self.store.value(e)) {
            return Err(internal("negation produced the wrong value"));
        }
        self.neg_memo.insert(e, r);
        Ok(r)
    }
}

/// Joins witnesses through a new root: each `e_i` hangs below it by an edge,
/// twice. Structural only, so witnesses over different fields can be mixed.
pub fn join(dag: &mut Dag, roots: &[NodeId]) -> NodeId {
    let two = BigUint::from(2u32);
    let parts: Vec<_> = roots.iter().map(|&e| (dag.map(e), two.clone())).collect();
    if parts.is_empty() {
        return dag.zero();
    }
    dag.sum(parts).expect("nonempty parts with multiplicity 2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{IntPoly, Rational};
    use crate::numfield::FieldCtx;
    use proptest::prelude::*;

    fn ctx(m: &[i64], m2: &[i64]) -> FieldCtx {
        FieldCtx::with_modulus(IntPoly::from_i64s(m), IntPoly::from_i64s(m2))
    }

    fn five() -> Constructor {
        Constructor::new(ExprStore::new(ctx(&[-5, 0, 1], &[-5, 1])))
    }

    /// Constructor over ℚ(ζ) = ℚ with ζ = 5, holding `nf` of value 2.
    fn five_with_two() -> (Constructor, NodeId) {
        let mut c = five();
        let z = c.zero();
        let leaf = c.map(z).unwrap();
        let nf = c.sum(vec![(leaf, BigUint::from(10u32))]).unwrap();
        c.set_integer(nf).unwrap();
        (c, nf)
    }

    fn big(k: u32) -> BigUint {
        BigUint::from(k)
    }

    #[test]
    fn basic_elements() {
        let mut c = five();
        let b3 = c.basic_element(&big(3)).unwrap();
        assert_eq!(*c.store().size(b3), big(5));
        assert_eq!(
            c.store().value(b3).as_rational().unwrap(),
            Rational::new((1).into(), (2).into())
        );
        let b0 = c.basic_element(&big(0)).unwrap();
        assert_eq!(
            c.store().value(b0).as_rational().unwrap(),
            Rational::new(1.into(), 5.into())
        );
        let b1 = c.basic_element(&big(1)).unwrap();
        assert_eq!(*c.store().size(b1), big(3));
    }

    #[test]
    fn basic_element_hits_witness() {
        let mut c = Constructor::new(ExprStore::new(ctx(&[-2, 0, 1], &[-2, 1])));
        match c.basic_element(&big(2)) {
            Err(Halt::Witness(id)) => assert_eq!(*c.store().size(id), big(3)),
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn basic_element_hits_factor() {
        // ζ² − 3ζ + 2 = (ζ − 1)(ζ − 2)
        let mut c = Constructor::new(ExprStore::new(ctx(&[2, 0, -3, 0, 1], &[2, -3, 1])));
        assert!(matches!(c.basic_element(&big(1)), Err(Halt::Factor(_))));
    }

    #[test]
    fn negate_leaf_edge() {
        let (mut c, _) = five_with_two();
        let z = c.zero();
        let leaf = c.map(z).unwrap();
        let n = c.negate(leaf).unwrap();
        assert_eq!(
            c.store().value(n).as_rational().unwrap(),
            Rational::new((-1).into(), 5.into())
        );
        assert_eq!(c.negate(z).unwrap(), z);
    }

    #[test]
    fn sum_reaching_one_halts() {
        let mut c = five();
        let z = c.zero();
        let leaf = c.map(z).unwrap();
        let three = c.sum(vec![(leaf, big(3))]).unwrap();
        // value 1/(5·(2/5)) = 1/2, and 2 copies give 1
        let half = c.map(three).unwrap();
        assert!(matches!(c.sum(vec![(half, big(2))]), Err(Halt::Witness(_))));
        let three_leaves = c.store().value(three).clone();
        assert_eq!(
            three_leaves.as_rational().unwrap(),
            Rational::new(3.into(), 5.into())
        );
    }

    #[test]
    fn lincomb_collapses() {
        let (mut c, _) = five_with_two();
        let z = c.zero();
        let leaf = c.map(z).unwrap();
        assert_eq!(c.lincomb(&[(leaf, BigInt::one())]).unwrap(), leaf);
        assert_eq!(c.lincomb(&[(leaf, BigInt::zero())]).unwrap(), z);
        let e = c
            .lincomb(&[(leaf, BigInt::from(3)), (leaf, BigInt::from(-1))])
            .unwrap();
        assert_eq!(
            c.store().value(e).as_rational().unwrap(),
            Rational::new(2.into(), 5.into())
        );
    }

    #[test]
    fn join_sizes() {
        let mut d = Dag::new();
        let z = d.zero();
        let p2 = d.map(z);
        let p3 = d.map(p2);
        let j = join(&mut d, &[p2, p3]);
        assert_eq!(*d.size(j), big(11));
        let single = join(&mut d, &[z]);
        assert_eq!(*d.size(single), big(3));
    }

    /// Random expressions over the generators, as a recipe.
    #[derive(Clone, Debug)]
    enum Recipe {
        Zero,
        Map(Box<Recipe>),
        Sum(Vec<(Recipe, u32)>),
    }

    fn recipe() -> impl Strategy<Value = Recipe> {
        let leaf = Just(Recipe::Zero);
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(|r| Recipe::Map(Box::new(r))),
                prop::collection::vec((inner, 1u32..4), 1..3).prop_map(Recipe::Sum),
            ]
        })
    }

    fn build(c: &mut Constructor, r: &Recipe) -> Result<NodeId, Halt> {
        match r {
            Recipe::Zero => Ok(c.zero()),
            Recipe::Map(a) => {
                let a = build(c, a)?;
                c.map(a)
            }
            Recipe::Sum(parts) => {
                let mut ps = Vec::new();
                for (p, m) in parts {
                    ps.push((build(c, p)?, BigUint::from(*m)));
                }
                c.sum(ps)
            }
        }
    }

    proptest! {
        #[test]
        fn negation_inverts_value(r in recipe()) {
            let (mut c, _) = five_with_two();
            if let Ok(e) = build(&mut c, &r) {
                match c.negate(e) {
                    Ok(n) => {
                        let ctx = c.store().ctx().clone();
                        prop_assert_eq!(ctx.add(c.store().value(n), c.store().value(e)), ctx.zero());
                    }
                    Err(Halt::Witness(w)) => prop_assert!(c.store().is_witness(w)),
                    Err(other) => prop_assert!(false, "unexpected halt {:?}", other),
                }
            }
        }
    }
}
