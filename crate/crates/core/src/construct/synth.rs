//! End-to-end synthesis: input polynomial to verified witness.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{ConstructError, Constructor, Fact1Trace, Halt};
use crate::exact::{IntPoly, RatPoly, Rational};
use crate::fexpr::{ExprStore, NodeId};
use crate::numfield::{validate_input, FieldCtx, ValidationError};
use crate::verify::{verify, Verdict, VerifyConfig};

#[derive(Clone, Debug)]
pub struct SynthConfig {
    pub k_cap: BigUint,
    pub j_cap: u64,
    pub verify: VerifyConfig,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            k_cap: BigUint::one() << 63u32,
            j_cap: 1 << 24,
            verify: VerifyConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthError {
    #[error("invalid input: {0}")]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error("witness failed verification: {0:?}")]
    VerificationFailed(Verdict),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthStats {
    pub dag_nodes: usize,
    pub tree_size: BigUint,
    pub construction_steps: u64,
}

#[derive(Clone, Debug)]
pub struct SynthesisResult {
    pub store: ExprStore,
    pub witness: NodeId,
    pub input: IntPoly,
    /// The factor of the input whose roots are proven eigenvalues.
    pub effective: IntPoly,
    pub d: usize,
    pub d2: usize,
    pub trace: Option<Fact1Trace>,
    pub stats: SynthStats,
    pub verdict: Verdict,
    /// A node of value 1 turned up before the final fraction was assembled.
    pub early_terminated: bool,
}

struct Found {
    store: ExprStore,
    witness: NodeId,
    trace: Option<Fact1Trace>,
    early: bool,
}

enum Attempt {
    Done(Box<Found>),
    Restart(IntPoly),
}

fn done(store: ExprStore, witness: NodeId, trace: Option<Fact1Trace>, early: bool) -> Attempt {
    Attempt::Done(Box::new(Found {
        store,
        witness,
        trace,
        early,
    }))
}

/// `gcd(M, g(X²))` as a monic integer polynomial.
fn split_input(m: &IntPoly, g: &RatPoly) -> Result<IntPoly, ConstructError> {
    let f = m.to_rat().gcd(&g.compose_square());
    let deg = f.degree().unwrap_or(0);
    if deg == 0 || Some(deg) == m.degree() {
        return Err(ConstructError::Internal(format!(
            "factor {g} does not split the input"
        )));
    }
    f.to_int()
        .ok_or_else(|| ConstructError::Internal("input factor is not integral".into()))
}

fn attempt(m: &IntPoly, config: &SynthConfig) -> Result<Attempt, ConstructError> {
    let ctx = FieldCtx::new(m);
    let d2 = ctx.degree();
    let mut store = ExprStore::new(ctx);
    if d2 == 1 {
        // λ² = c, realized by the star with c leaves
        let c = -store.ctx().modulus().coeff(0);
        let z = store.make_zero();
        if c.is_zero() {
            return Ok(done(store, z, None, false));
        }
        let leaf = store.make_map(z).expect("leaf over a nonzero square");
        let star = store
            .make_sum(vec![(leaf, c.magnitude().clone())])
            .expect("positive multiplicity");
        return Ok(done(store, star, None, false));
    }
    let mut c = Constructor::new(store);
    let halt = match c.fact1(&config.k_cap, config.j_cap) {
        Ok((_, trace)) => {
            let q = RatPoly::monomial(Rational::one(), d2);
            let p = &q - &c.store().ctx().modulus().to_rat();
            match c.field_fraction_root(&p, &q) {
                Ok(root) if c.store().is_witness(root) => {
                    return Ok(done(c.into_store(), root, Some(trace), false));
                }
                Ok(_) => {
                    return Err(ConstructError::Internal(
                        "final fraction does not have value 1".into(),
                    ))
                }
                Err(Halt::Witness(w)) => {
                    return Ok(done(c.into_store(), w, Some(trace), true));
                }
                Err(h) => h,
            }
        }
        Err(h) => h,
    };
    match halt {
        Halt::Witness(w) => Ok(done(c.into_store(), w, None, true)),
        Halt::Factor(g) => Ok(Attempt::Restart(split_input(m, &g)?)),
        Halt::Failed(e) => Err(e),
    }
}

/// Builds and verifies a tree having a root of `m` as an adjacency eigenvalue.
pub fn synthesize(m: &RatPoly, config: &SynthConfig) -> Result<SynthesisResult, SynthError> {
    let report = validate_input(m)?;
    let mut effective = report.poly.clone();
    let found = loop {
        match attempt(&effective, config)? {
            Attempt::Done(f) => break f,
            Attempt::Restart(next) => effective = next,
        }
    };
    let Found {
        store,
        witness,
        trace,
        early,
    } = *found;
    let verdict = verify(store.dag(), witness, &effective, &config.verify);
    if !verdict.divisible() {
        return Err(SynthError::VerificationFailed(verdict));
    }
    let stats = SynthStats {
        dag_nodes: store.dag().reachable(witness).len(),
        tree_size: store.size(witness).clone(),
        construction_steps: store.steps(),
    };
    Ok(SynthesisResult {
        store,
        witness,
        input: report.poly,
        effective,
        d: report.d,
        d2: report.d2,
        trace,
        stats,
        verdict,
        early_terminated: early,
    })
}
