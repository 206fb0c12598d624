//! Checks that the input polynomial divides the characteristic polynomial of a
//! witness tree, exactly for small trees and modulo random primes otherwise.
//!
//! The characteristic polynomial `Φ_T = det(A − X·I)` of a rooted tree is
//! carried together with `Φ_{T∖o}` as a pair `(a, b)`. Removing the root
//! vertex `o` splits the tree into its branches, which gives
//!
//! * single vertex: `(−X, 1)`
//! * new root above `c`: `(−(X·a_c + b_c), a_c)`
//! * roots identified: `(a₁b₂ + a₂b₁ + X·b₁b₂, b₁b₂)`, and for `n` copies of
//!   one tree `(n·a·bⁿ⁻¹ + (n−1)·X·bⁿ, bⁿ)`.
//!
//! The `n`-fold law needs only `O(log n)` ring multiplications, so pairs of
//! trees far too large to write down are still computable in a quotient ring.

mod oracle;
mod ring;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::exact::IntPoly;
use crate::fexpr::{Dag, Kind, MaterializedTree, NodeId};

pub use oracle::{charpoly_oracle, OracleTooLarge, ORACLE_MAX_VERTICES};
pub use ring::{is_prime_u64, ExactRing, ModRing, PhiRing};

/// Images of `Φ_T` and `Φ_{T∖o}` in some coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiPair<E> {
    pub a: E,
    pub b: E,
}

/// Exact `Φ_T` of an explicit tree by the bottom-up pair recursion
/// `b = Π a_i`, `a = −(X·Π a_i + Σ_i b_i·Π_{j≠i} a_j)` over the root's children.
pub fn charpoly(t: &MaterializedTree) -> IntPoly {
    charpoly_pair(t).a
}

/// `(Φ_T, Φ_{T∖0})` of an explicit tree rooted at vertex 0.
pub fn charpoly_pair(t: &MaterializedTree) -> PhiPair<IntPoly> {
    let (order, parent) = t.bfs();
    let n = t.n();
    // running Π a_i and Σ b_i Π_{j≠i} a_j over the children seen so far
    let mut prod: Vec<IntPoly> = vec![IntPoly::one(); n];
    let mut cross: Vec<IntPoly> = vec![IntPoly::zero(); n];
    let mut a: Vec<IntPoly> = vec![IntPoly::zero(); n];
    let x = IntPoly::x();
    for &v in order.iter().rev() {
        a[v] = -(&(&x * &prod[v]) + &cross[v]);
        if let Some(p) = parent[v] {
            cross[p] = &(&cross[p] * &a[v]) + &(&prod[v] * &prod[p]);
            prod[p] = &prod[p] * &a[v];
        }
    }
    PhiPair {
        a: a[0].clone(),
        b: prod[0].clone(),
    }
}

/// Evaluates the pair of the tree rooted at `root` in `ring`, memoized over
/// the DAG.
pub fn dag_phi<R: PhiRing>(dag: &Dag, root: NodeId, ring: &R) -> PhiPair<R::Elem> {
    let ids = dag.reachable(root);
    let mut memo: Vec<Option<PhiPair<R::Elem>>> = vec![None; root.index() + 1];
    let x = ring.x();
    let merge = |p: &PhiPair<R::Elem>, q: &PhiPair<R::Elem>| PhiPair {
        a: ring.add(
            &ring.add(&ring.mul(&p.a, &q.b), &ring.mul(&q.a, &p.b)),
            &ring.mul(&x, &ring.mul(&p.b, &q.b)),
        ),
        b: ring.mul(&p.b, &q.b),
    };
    let power = |p: &PhiPair<R::Elem>, n: &BigUint| {
        if n.is_one() {
            return p.clone();
        }
        let n1 = n - 1u32;
        let b_n1 = ring.pow(&p.b, &n1);
        let b_n = ring.mul(&b_n1, &p.b);
        PhiPair {
            a: ring.add(
                &ring.scalar(&ring.mul(&p.a, &b_n1), n),
                &ring.scalar(&ring.mul(&x, &b_n), &n1),
            ),
            b: b_n,
        }
    };
    for id in ids {
        let pair = match dag.kind(id) {
            Kind::Zero => PhiPair {
                a: ring.neg(&x),
                b: ring.one(),
            },
            Kind::Map(c) => {
                let pc = memo[c.index()].as_ref().expect("children first");
                PhiPair {
                    a: ring.neg(&ring.add(&ring.mul(&x, &pc.a), &pc.b)),
                    b: pc.a.clone(),
                }
            }
            Kind::Sum(parts) => {
                let mut it = parts
                    .iter()
                    .map(|(c, m)| power(memo[c.index()].as_ref().expect("children first"), m));
                let first = it.next().expect("sums are nonempty");
                it.fold(first, |acc, p| merge(&acc, &p))
            }
        };
        memo[id.index()] = Some(pair);
    }
    memo[root.index()].take().expect("root evaluated")
}

/// When a witness is small enough for exact arithmetic in ℤ[X]/(M).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactLimits {
    pub max_multiplicity: BigUint,
    pub max_depth: u32,
    /// Coefficient bit-size grows linearly in the vertex count.
    pub max_size: BigUint,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits {
            max_multiplicity: BigUint::from(1u32 << 16),
            max_depth: 64,
            max_size: BigUint::from(1u32 << 20),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub num_primes: usize,
    pub seed: u64,
    pub exact: ExactLimits,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            num_primes: 5,
            seed: 0,
            exact: ExactLimits::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Exact { divisible: bool },
    MonteCarlo { divisible: bool, primes: Vec<u64> },
}

impl Verdict {
    pub fn divisible(&self) -> bool {
        match self {
            Verdict::Exact { divisible } | Verdict::MonteCarlo { divisible, .. } => *divisible,
        }
    }
}

/// `count` distinct 62-bit primes drawn from a ChaCha stream seeded by `seed`.
pub fn sample_primes(count: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<u64> = Vec::with_capacity(count);
    while out.len() < count {
        let cand = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime_u64(cand) && !out.contains(&cand) {
            out.push(cand);
        }
    }
    out
}

/// Does `m` divide `Φ_T` for the tree rooted at `root`?
pub fn verify(dag: &Dag, root: NodeId, m: &IntPoly, config: &VerifyConfig) -> Verdict {
    let exact_ok = *dag.size(root) <= config.exact.max_size
        && dag.depth(root) <= config.exact.max_depth
        && dag.max_multiplicity(root) <= config.exact.max_multiplicity;
    if exact_ok {
        let ring = ExactRing::new(m.clone());
        let pair = dag_phi(dag, root, &ring);
        return Verdict::Exact {
            divisible: ring.is_zero(&pair.a),
        };
    }
    verify_modular(dag, root, m, &sample_primes(config.num_primes, config.seed))
}

/// Monte Carlo check with the given primes; divisible iff every image vanishes.
pub fn verify_modular(dag: &Dag, root: NodeId, m: &IntPoly, primes: &[u64]) -> Verdict {
    let divisible = primes.par_iter().all(|&p| {
        let ring = ModRing::new(m, p);
        ring.is_zero(&dag_phi(dag, root, &ring).a)
    });
    Verdict::MonteCarlo {
        divisible,
        primes: primes.to_vec(),
    }
}

/// Exact divisibility of an explicit tree's characteristic polynomial.
pub fn tree_divisible(t: &MaterializedTree, m: &IntPoly) -> bool {
    m.divides_over_q(&charpoly(t)).expect("nonzero divisor")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn p3(d: &mut Dag) -> NodeId {
        let z = d.zero();
        let m = d.map(z);
        d.sum(vec![(m, 2u32.into())]).unwrap()
    }

    #[test]
    fn charpoly_examples() {
        let one = MaterializedTree::new(1, vec![]).unwrap();
        assert_eq!(charpoly(&one), ip(&[0, -1]));
        let path = MaterializedTree::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(charpoly(&path), ip(&[0, 2, 0, -1]));
        let k13 = MaterializedTree::new(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(charpoly(&k13), ip(&[0, 0, -3, 0, 1]));
        // rooted away from the center: same polynomial
        let k13b = MaterializedTree::new(4, vec![(1, 0), (1, 2), (1, 3)]).unwrap();
        assert_eq!(charpoly(&k13b), ip(&[0, 0, -3, 0, 1]));
    }

    #[test]
    fn merging_two_vertices_is_a_vertex() {
        let mut d = Dag::new();
        let z = d.zero();
        let s = d.sum(vec![(z, 2u32.into())]).unwrap();
        let ring = ExactRing::new(ip(&[0, 0, 0, 0, 0, 1]));
        assert_eq!(dag_phi(&d, s, &ring), dag_phi(&d, z, &ring));
        assert_eq!(dag_phi(&d, z, &ring).a, ip(&[0, -1]));
    }

    #[test]
    fn dag_phi_examples() {
        let mut d = Dag::new();
        let z = d.zero();
        let m = d.map(z);
        let p2 = dag_phi(&d, m, &ExactRing::new(ip(&[-1, 0, 1])));
        assert!(p2.a.is_zero());
        let p2b = dag_phi(&d, m, &ExactRing::new(ip(&[-2, 0, 1])));
        assert_eq!(p2b.a, ip(&[1]));
        let k13 = d.sum(vec![(m, 3u32.into())]).unwrap();
        assert!(dag_phi(&d, k13, &ExactRing::new(ip(&[-3, 0, 1])))
            .a
            .is_zero());
    }

    #[test]
    fn verdicts_for_p3() {
        let mut d = Dag::new();
        let p = p3(&mut d);
        let cfg = VerifyConfig::default();
        assert_eq!(
            verify(&d, p, &ip(&[-2, 0, 1]), &cfg),
            Verdict::Exact { divisible: true }
        );
        assert_eq!(
            verify(&d, p, &ip(&[-3, 0, 1]), &cfg),
            Verdict::Exact { divisible: false }
        );
        let primes = sample_primes(3, 7);
        assert!(verify_modular(&d, p, &ip(&[-2, 0, 1]), &primes).divisible());
        assert!(!verify_modular(&d, p, &ip(&[-3, 0, 1]), &primes).divisible());
    }

    #[test]
    fn primes_are_62_bit_and_reproducible() {
        let a = sample_primes(5, 42);
        assert_eq!(a, sample_primes(5, 42));
        assert_ne!(a, sample_primes(5, 43));
        for p in a {
            assert_eq!(64 - p.leading_zeros(), 62);
            assert!(is_prime_u64(p));
        }
    }

    #[test]
    fn huge_multiplicity_pairs() {
        // star with 2^100 leaves, built two ways
        let mut d = Dag::new();
        let z = d.zero();
        let m = d.map(z);
        let k: BigUint = BigUint::one() << 100u32;
        let s = d.sum(vec![(m, k.clone())]).unwrap();
        let mm = ip(&[-1, -2, 1, 1]);
        let ring = ModRing::new(&mm, sample_primes(1, 1)[0]);
        let direct = dag_phi(&d, s, &ring);
        // same tree as 2^99 copies of the 2-leaf star
        let s2 = d.sum(vec![(m, 2u32.into())]).unwrap();
        let s3 = d.sum(vec![(s2, k >> 1)]).unwrap();
        assert_eq!(dag_phi(&d, s3, &ring), direct);
    }
}
