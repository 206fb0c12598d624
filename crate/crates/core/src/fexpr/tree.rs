use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{Dag, Kind, NodeId};
use crate::numfield::{FieldCtx, FieldElem, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("malformed tree file: {0}")]
    Malformed(String),
    #[error("not a tree: {0}")]
    NotATree(String),
}

/// The expression is too big to expand; `size` is its exact vertex count.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("tree has {size} vertices, above the materialization limit")]
pub struct TooLarge {
    pub size: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExportError {
    #[error("graph6 supports at most 68719476735 vertices")]
    Graph6Overflow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Edges,
    Dot,
    Graph6,
}

/// An explicit tree on vertices `0..n`, rooted at vertex 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaterializedTree {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl MaterializedTree {
    /// Checks that the edges form a spanning tree of `0..n`.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, TreeError> {
        if n == 0 {
            return Err(TreeError::NotATree("no vertices".into()));
        }
        if edges.len() != n - 1 {
            return Err(TreeError::NotATree(format!(
                "{} vertices need {} edges, found {}",
                n,
                n - 1,
                edges.len()
            )));
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(TreeError::Malformed(format!(
                    "edge ({u}, {v}) out of range"
                )));
            }
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                return Err(TreeError::NotATree(format!(
                    "edge ({u}, {v}) closes a cycle"
                )));
            }
            parent[ru] = rv;
        }
        // n − 1 acyclic edges on n vertices are connected.
        Ok(MaterializedTree { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// `(order, parent)`: a BFS order from vertex 0 and each vertex's parent.
    pub fn bfs(&self) -> (Vec<usize>, Vec<Option<usize>>) {
        let adj = self.adjacency();
        let mut parent = vec![None; self.n];
        let mut seen = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        seen[0] = true;
        order.push(0);
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    order.push(v);
                }
            }
        }
        (order, parent)
    }

    /// Reads the edges format: `n` on the first line, then `n − 1` lines `u v`.
    pub fn parse_edges(text: &str) -> Result<Self, TreeError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let n: usize = lines
            .next()
            .ok_or_else(|| TreeError::Malformed("empty input".into()))?
            .parse()
            .map_err(|_| TreeError::Malformed("first line must be the vertex count".into()))?;
        let mut edges = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace();
            let mut endpoint = || -> Result<usize, TreeError> {
                it.next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| TreeError::Malformed(format!("bad edge line {line:?}")))
            };
            let (u, v) = (endpoint()?, endpoint()?);
            if it.next().is_some() {
                return Err(TreeError::Malformed(format!("bad edge line {line:?}")));
            }
            edges.push((u, v));
        }
        Self::new(n, edges)
    }

    pub fn to_edges(&self) -> String {
        let mut s = self.n.to_string();
        for (u, v) in &self.edges {
            write!(s, "\n{u} {v}").unwrap();
        }
        s
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph tree {\n  0 [shape=doublecircle, label=\"0 (root)\"];\n");
        for (u, v) in &self.edges {
            writeln!(s, "  {u} -- {v};").unwrap();
        }
        s.push_str("}\n");
        s
    }

    pub fn to_graph6(&self) -> Result<String, ExportError> {
        let n = self.n as u64;
        let mut out: Vec<u8> = Vec::new();
        if n <= 62 {
            out.push(n as u8 + 63);
        } else if n <= 258_047 {
            out.push(126);
            for k in (0..3).rev() {
                out.push(((n >> (6 * k)) & 63) as u8 + 63);
            }
        } else if n <= 68_719_476_735 {
            out.extend([126, 126]);
            for k in (0..6).rev() {
                out.push(((n >> (6 * k)) & 63) as u8 + 63);
            }
        } else {
            return Err(ExportError::Graph6Overflow);
        }
        // Upper triangle, column by column: bit (i, j) for i < j.
        let adj = self.adjacency();
        let mut bits = Vec::new();
        let mut row = vec![false; self.n];
        for j in 1..self.n {
            for &i in &adj[j] {
                row[i] = true;
            }
            bits.extend((0..j).map(|i| row[i]));
            for &i in &adj[j] {
                row[i] = false;
            }
        }
        for chunk in bits.chunks(6) {
            let mut byte = 0u8;
            for k in 0..6 {
                byte = (byte << 1) | u8::from(chunk.get(k).copied().unwrap_or(false));
            }
            out.push(byte + 63);
        }
        Ok(String::from_utf8(out).expect("graph6 bytes are printable ASCII"))
    }

    pub fn export(&self, format: ExportFormat) -> Result<String, ExportError> {
        match format {
            ExportFormat::Edges => Ok(self.to_edges()),
            ExportFormat::Dot => Ok(self.to_dot()),
            ExportFormat::Graph6 => self.to_graph6(),
        }
    }
}

pub(super) fn materialize(
    dag: &Dag,
    root: NodeId,
    limit: u64,
) -> Result<MaterializedTree, TooLarge> {
    let size = dag.size(root);
    let n = match size.to_u64() {
        Some(n) if n <= limit => n as usize,
        _ => {
            return Err(TooLarge {
                size: size.to_string(),
            })
        }
    };
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut next = 1usize;
    let mut stack = vec![(root, 0usize)];
    let one = BigUint::from(1u32);
    while let Some((id, v)) = stack.pop() {
        match dag.kind(id) {
            Kind::Zero => {}
            Kind::Map(c) => {
                edges.push((v, next));
                stack.push((*c, next));
                next += 1;
            }
            Kind::Sum(parts) => {
                for (c, m) in parts.iter().rev() {
                    if *dag.size(*c) == one {
                        continue;
                    }
                    // bounded by the checked total size
                    let m = m.to_usize().expect("multiplicity below the vertex limit");
                    stack.extend(std::iter::repeat_n((*c, v), m));
                }
            }
        }
    }
    debug_assert_eq!(next, n);
    Ok(MaterializedTree::new(n, edges).expect("expansion of a DAG is a tree"))
}

/// `f_(T,0)(λ)` evaluated bottom-up on an explicit tree:
/// `f(v) = ζ⁻¹·Σ_children 1/(1 − f(c))`, leaves give 0.
pub fn tree_value(ctx: &FieldCtx, tree: &MaterializedTree) -> Result<FieldElem, FieldError> {
    let (order, parent) = tree.bfs();
    let zeta_inv = ctx.inv(&ctx.zeta())?;
    let mut acc: Vec<FieldElem> = vec![ctx.zero(); tree.n()];
    let mut value: Vec<FieldElem> = vec![ctx.zero(); tree.n()];
    for &v in order.iter().rev() {
        value[v] = ctx.mul(&zeta_inv, &acc[v]);
        if let Some(p) = parent[v] {
            let t = ctx.inv(&ctx.sub(&ctx.one(), &value[v]))?;
            acc[p] = ctx.add(&acc[p], &t);
        }
    }
    Ok(value[0].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(k: usize) -> MaterializedTree {
        MaterializedTree::new(k + 1, (1..=k).map(|i| (0, i)).collect()).unwrap()
    }

    #[test]
    fn materialize_shapes() {
        let mut d = Dag::new();
        let z = d.zero();
        let a = d.map(z);
        let p = d.map(a);
        let t = d.materialize(p, 10).unwrap();
        assert_eq!(t.edges(), &[(0, 1), (1, 2)]);
        let s = d.sum(vec![(a, 3u32.into())]).unwrap();
        assert_eq!(d.materialize(s, 10).unwrap(), star(3));
        assert!(d.materialize(s, 3).is_err());
    }

    #[test]
    fn edges_text() {
        let p3 = MaterializedTree::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(p3.to_edges(), "3\n0 1\n1 2");
        assert_eq!(MaterializedTree::new(1, vec![]).unwrap().to_edges(), "1");
        assert_eq!(MaterializedTree::parse_edges("3\n0 1\n1 2").unwrap(), p3);
    }

    #[test]
    fn parse_rejects_bad_files() {
        assert!(matches!(
            MaterializedTree::parse_edges("3\n0 1\n1 0"),
            Err(TreeError::NotATree(_))
        ));
        assert!(matches!(
            MaterializedTree::parse_edges("4\n0 1\n1 2\n2 0"),
            Err(TreeError::NotATree(_))
        ));
        assert!(matches!(
            MaterializedTree::parse_edges("3\n0 1"),
            Err(TreeError::NotATree(_))
        ));
        assert!(matches!(
            MaterializedTree::parse_edges("3\n0 x\n1 2"),
            Err(TreeError::Malformed(_))
        ));
        assert!(matches!(
            MaterializedTree::parse_edges("2\n0 5"),
            Err(TreeError::Malformed(_))
        ));
        assert!(matches!(
            MaterializedTree::parse_edges(""),
            Err(TreeError::Malformed(_))
        ));
    }

    /// Reference encoder working from the dense adjacency matrix.
    fn graph6_reference(n: usize, edges: &[(usize, usize)]) -> String {
        let mut a = vec![vec![0u8; n]; n];
        for &(u, v) in edges {
            a[u][v] = 1;
            a[v][u] = 1;
        }
        let mut bits = String::new();
        for j in 0..n {
            for i in 0..j {
                bits.push(if a[i][j] == 1 { '1' } else { '0' });
            }
        }
        while !bits.len().is_multiple_of(6) {
            bits.push('0');
        }
        let mut s = String::new();
        s.push((n as u8 + 63) as char);
        for k in 0..bits.len() / 6 {
            let v = u8::from_str_radix(&bits[6 * k..6 * k + 6], 2).unwrap();
            s.push((v + 63) as char);
        }
        s
    }

    #[test]
    fn graph6_star() {
        assert_eq!(star(3).to_graph6().unwrap(), "Cs");
        assert_eq!(
            star(3).to_graph6().unwrap(),
            graph6_reference(4, star(3).edges())
        );
        let path: Vec<_> = (0..9).map(|i| (i, i + 1)).collect();
        let t = MaterializedTree::new(10, path.clone()).unwrap();
        assert_eq!(t.to_graph6().unwrap(), graph6_reference(10, &path));
        assert_eq!(
            MaterializedTree::new(1, vec![])
                .unwrap()
                .to_graph6()
                .unwrap(),
            "@"
        );
    }

    #[test]
    fn graph6_long_header() {
        let t = star(99);
        let g = t.to_graph6().unwrap();
        // n = 100 = 0b000000_000001_100100
        assert_eq!(&g.as_bytes()[..4], &[126, 63, 64, 99]);
        assert_eq!(g.len(), 4 + (100 * 99 / 2usize).div_ceil(6));
    }

    #[test]
    fn dot_marks_root() {
        let d = star(2).to_dot();
        assert!(d.starts_with("graph tree {"));
        assert!(d.contains("0 [shape=doublecircle"));
        assert!(d.contains("0 -- 2;"));
    }
}
