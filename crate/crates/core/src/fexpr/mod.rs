//! Structure-shared rooted-tree expressions.
//!
//! A rooted tree is built from three generators: the single vertex (`Zero`),
//! attaching a new root above an existing root (`Map`), and identifying the
//! roots of several trees (`Sum`, with multiplicities). [`Dag`] stores the
//! shapes only; [`ExprStore`] additionally caches the value of
//! `f_(T,o)(λ) = 1 + Φ_T(λ) / (λ·Φ_{T∖o}(λ))` for each node.

mod tree;

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::exact::RatPoly;
use crate::numfield::{FieldCtx, FieldElem, FieldError};

pub use tree::{tree_value, ExportError, ExportFormat, MaterializedTree, TooLarge, TreeError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Zero,
    Map(NodeId),
    Sum(Vec<(NodeId, BigUint)>),
}

#[derive(Clone, Debug)]
struct Node {
    kind: Kind,
    size: BigUint,
    depth: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SumError {
    #[error("a sum needs at least one part")]
    Empty,
    #[error("sum multiplicities must be at least 1")]
    ZeroMultiplicity,
}

/// Hash-consed arena of rooted-tree shapes. Children always precede parents,
/// so ids are a topological order.
#[derive(Clone, Debug, Default)]
pub struct Dag {
    nodes: Vec<Node>,
    dedup: HashMap<Kind, NodeId>,
}

impl Dag {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn intern(&mut self, kind: Kind) -> (NodeId, bool) {
        if let Some(&id) = self.dedup.get(&kind) {
            return (id, false);
        }
        let (size, depth) = match &kind {
            Kind::Zero => (BigUint::one(), 0),
            Kind::Map(c) => (self.size(*c) + 1u32, self.depth(*c) + 1),
            Kind::Sum(parts) => {
                let mut size = BigUint::one();
                let mut depth = 0;
                for (c, m) in parts {
                    size += m * (self.size(*c) - 1u32);
                    depth = depth.max(self.depth(*c) + 1);
                }
                (size, depth)
            }
        };
        let id = NodeId(u32::try_from(self.nodes.len()).expect("DAG exceeds u32 nodes"));
        self.nodes.push(Node {
            kind: kind.clone(),
            size,
            depth,
        });
        self.dedup.insert(kind, id);
        (id, true)
    }

    pub fn zero(&mut self) -> NodeId {
        self.intern(Kind::Zero).0
    }

    pub fn map(&mut self, child: NodeId) -> NodeId {
        self.intern(Kind::Map(child)).0
    }

    pub fn sum(&mut self, parts: Vec<(NodeId, BigUint)>) -> Result<NodeId, SumError> {
        check_parts(&parts)?;
        Ok(self.intern(Kind::Sum(parts)).0)
    }

    pub fn kind(&self, id: NodeId) -> &Kind {
        &self.nodes[id.index()].kind
    }

    /// Vertex count of the represented tree.
    pub fn size(&self, id: NodeId) -> &BigUint {
        &self.nodes[id.index()].size
    }

    pub fn depth(&self, id: NodeId) -> u32 {
        self.nodes[id.index()].depth
    }

    fn children(&self, id: NodeId) -> Vec<NodeId> {
        match self.kind(id) {
            Kind::Zero => Vec::new(),
            Kind::Map(c) => vec![*c],
            Kind::Sum(parts) => parts.iter().map(|(c, _)| *c).collect(),
        }
    }

    /// Nodes reachable from `root`, in increasing (topological) order.
    pub fn reachable(&self, root: NodeId) -> Vec<NodeId> {
        let mut seen = vec![false; root.index() + 1];
        let mut stack = vec![root];
        seen[root.index()] = true;
        while let Some(id) = stack.pop() {
            for c in self.children(id) {
                if !seen[c.index()] {
                    seen[c.index()] = true;
                    stack.push(c);
                }
            }
        }
        seen.iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| NodeId(i as u32))
            .collect()
    }

    /// Largest Sum multiplicity among nodes reachable from `root`.
    pub fn max_multiplicity(&self, root: NodeId) -> BigUint {
        self.reachable(root)
            .into_iter()
            .filter_map(|id| match self.kind(id) {
                Kind::Sum(parts) => parts.iter().map(|(_, m)| m.clone()).max(),
                _ => None,
            })
            .max()
            .unwrap_or_else(BigUint::one)
    }

    /// Copies the sub-DAG under `root` of `other` into `self`.
    pub fn import(&mut self, other: &Dag, root: NodeId) -> NodeId {
        let mut remap: HashMap<NodeId, NodeId> = HashMap::new();
        for id in other.reachable(root) {
            let kind = match other.kind(id) {
                Kind::Zero => Kind::Zero,
                Kind::Map(c) => Kind::Map(remap[c]),
                Kind::Sum(parts) => {
                    Kind::Sum(parts.iter().map(|(c, m)| (remap[c], m.clone())).collect())
                }
            };
            remap.insert(id, self.intern(kind).0);
        }
        remap[&root]
    }

    /// Expands `root` into an explicit tree if it has at most `vertex_limit` vertices.
    pub fn materialize(
        &self,
        root: NodeId,
        vertex_limit: u64,
    ) -> Result<MaterializedTree, TooLarge> {
        tree::materialize(self, root, vertex_limit)
    }
}

fn check_parts(parts: &[(NodeId, BigUint)]) -> Result<(), SumError> {
    if parts.is_empty() {
        return Err(SumError::Empty);
    }
    if parts.iter().any(|(_, m)| m.is_zero()) {
        return Err(SumError::ZeroMultiplicity);
    }
    Ok(())
}

/// Outcome of `make_map` other than a new node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapError {
    /// The child already has value 1, so its tree has λ as an eigenvalue.
    EigenvalueFound(NodeId),
    /// Inversion hit a zero divisor: the modulus factors through this polynomial.
    ZeroDivisor(RatPoly),
}

/// Expressions with their cached values in a fixed field context.
#[derive(Clone, Debug)]
pub struct ExprStore {
    ctx: FieldCtx,
    dag: Dag,
    values: Vec<FieldElem>,
    steps: u64,
}

impl ExprStore {
    pub fn new(ctx: FieldCtx) -> Self {
        ExprStore {
            ctx,
            dag: Dag::new(),
            values: Vec::new(),
            steps: 0,
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn into_dag(self) -> Dag {
        self.dag
    }

    /// Number of generator applications so far, including deduplicated ones.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn value(&self, id: NodeId) -> &FieldElem {
        &self.values[id.index()]
    }

    pub fn size(&self, id: NodeId) -> &BigUint {
        self.dag.size(id)
    }

    pub fn kind(&self, id: NodeId) -> &Kind {
        self.dag.kind(id)
    }

    /// True iff the node's value is 1, i.e. its tree has λ as an eigenvalue.
    pub fn is_witness(&self, id: NodeId) -> bool {
        self.value(id).is_one()
    }

    fn record(&mut self, id: NodeId, value: impl FnOnce(&Self) -> FieldElem) {
        if id.index() == self.values.len() {
            let v = value(self);
            self.values.push(v);
        }
    }

    pub fn make_zero(&mut self) -> NodeId {
        self.steps += 1;
        let id = self.dag.zero();
        self.record(id, |s| s.ctx.zero());
        id
    }

    /// New root above `child`: value `1 / (ζ·(1 − value(child)))`.
    pub fn make_map(&mut self, child: NodeId) -> Result<NodeId, MapError> {
        self.steps += 1;
        let c = self.value(child);
        if c.is_one() {
            return Err(MapError::EigenvalueFound(child));
        }
        if let Some(&id) = self.dag.dedup.get(&Kind::Map(child)) {
            return Ok(id);
        }
        let ctx = &self.ctx;
        let denom = ctx.mul(&ctx.zeta(), &ctx.sub(&ctx.one(), c));
        let v = ctx.inv(&denom).map_err(|e| match e {
            FieldError::ZeroDivisor(g) => MapError::ZeroDivisor(g),
            // ζ(1 − c) = 0 with c ≠ 1 forces ζ = 0, i.e. the modulus is divisible by Y.
            FieldError::InvZero => MapError::ZeroDivisor(RatPoly::x()),
        })?;
        let id = self.dag.map(child);
        self.record(id, |_| v);
        Ok(id)
    }

    /// Identifies the roots of `mult` copies of each part: value `Σ mult·value`.
    pub fn make_sum(&mut self, parts: Vec<(NodeId, BigUint)>) -> Result<NodeId, SumError> {
        self.steps += 1;
        let id = self.dag.sum(parts)?;
        self.record(id, |s| {
            let Kind::Sum(parts) = s.dag.kind(id) else {
                unreachable!()
            };
            parts.iter().fold(s.ctx.zero(), |acc, (c, m)| {
                s.ctx
                    .add(&acc, &s.ctx.scale(s.value(*c), &m.clone().into()))
            })
        });
        Ok(id)
    }

    pub fn materialize(
        &self,
        root: NodeId,
        vertex_limit: u64,
    ) -> Result<MaterializedTree, TooLarge> {
        self.dag.materialize(root, vertex_limit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntPoly;

    fn ctx(m2: &[i64]) -> FieldCtx {
        FieldCtx::with_modulus(IntPoly::from_i64s(&[-2, 0, 1]), IntPoly::from_i64s(m2))
    }
    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn zero_is_single_vertex() {
        let mut s = ExprStore::new(ctx(&[-2, 1]));
        let z = s.make_zero();
        assert!(s.value(z).is_zero());
        assert_eq!(*s.size(z), n(1));
        assert!(!s.is_witness(z));
        let t = s.materialize(z, 10).unwrap();
        assert_eq!((t.n(), t.edges().len()), (1, 0));
    }

    #[test]
    fn map_values() {
        let mut s = ExprStore::new(ctx(&[-2, 1]));
        let z = s.make_zero();
        let m = s.make_map(z).unwrap();
        assert_eq!(
            s.value(m).as_rational().unwrap(),
            crate::exact::Rational::new(1.into(), 2.into())
        );
        assert_eq!(*s.size(m), n(2));

        let mut g = ExprStore::new(ctx(&[1, -3, 1]));
        let z = g.make_zero();
        let m = g.make_map(z).unwrap();
        assert_eq!(*g.value(m), g.ctx().elem(RatPoly::from_i64s(&[3, -1])));
    }

    #[test]
    fn map_of_witness_signals_eigenvalue() {
        let mut s = ExprStore::new(ctx(&[-2, 1]));
        let z = s.make_zero();
        let m = s.make_map(z).unwrap();
        let p3 = s.make_sum(vec![(m, n(2))]).unwrap();
        assert!(s.is_witness(p3));
        assert_eq!(*s.size(p3), n(3));
        assert_eq!(s.make_map(p3), Err(MapError::EigenvalueFound(p3)));
    }

    #[test]
    fn sum_sizes() {
        let mut s = ExprStore::new(ctx(&[-5, 1]));
        let z = s.make_zero();
        let a = s.make_map(z).unwrap();
        let b = s.make_map(a).unwrap();
        let five = s.make_sum(vec![(b, n(5))]).unwrap();
        assert_eq!(*s.size(five), n(11));
        let zs = s.make_sum(vec![(z, n(7))]).unwrap();
        assert!(s.value(zs).is_zero());
        assert_eq!(*s.size(zs), n(1));
        assert_eq!(s.make_sum(vec![]), Err(SumError::Empty));
        assert_eq!(s.make_sum(vec![(z, n(0))]), Err(SumError::ZeroMultiplicity));
    }

    #[test]
    fn hash_consing_shares_nodes() {
        let mut s = ExprStore::new(ctx(&[-5, 1]));
        let z = s.make_zero();
        let a = s.make_map(z).unwrap();
        let a2 = s.make_map(z).unwrap();
        assert_eq!(a, a2);
        assert_eq!(s.dag().len(), 2);
        assert_eq!(s.steps(), 3);
    }

    #[test]
    fn huge_sizes_stay_small_in_the_dag() {
        let mut s = ExprStore::new(ctx(&[-5, 1]));
        let z = s.make_zero();
        let mut e = s.make_map(z).unwrap();
        for _ in 0..40 {
            let t = s.make_sum(vec![(e, n(10))]).unwrap();
            e = s.make_map(t).unwrap();
        }
        assert!(s.dag().len() <= 82);
        assert!(s.size(e).bits() > 100);
        let err = s.materialize(e, 1_000_000).unwrap_err();
        assert_eq!(err.size, s.size(e).to_string());
    }

    #[test]
    fn import_preserves_shape() {
        let mut s = ExprStore::new(ctx(&[-5, 1]));
        let z = s.make_zero();
        let a = s.make_map(z).unwrap();
        let b = s.make_sum(vec![(a, n(3))]).unwrap();
        let mut d = Dag::new();
        let z = d.zero();
        d.map(z);
        let b2 = d.import(s.dag(), b);
        assert_eq!(d.size(b2), s.size(b));
        assert_eq!(d.len(), 3);
    }
}
