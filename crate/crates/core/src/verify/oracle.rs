//! Independent characteristic-polynomial oracle for small trees.

use crate::exact::IntPoly;
use crate::fexpr::MaterializedTree;

pub const ORACLE_MAX_VERTICES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("oracle handles at most {ORACLE_MAX_VERTICES} vertices, got {0}")]
pub struct OracleTooLarge(pub usize);

type Small = Vec<i128>;

fn trim(mut p: Small) -> Small {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn mul(a: &Small, b: &Small) -> Small {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn sub(a: &Small, b: &Small) -> Small {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&0) - b.get(i).unwrap_or(&0))
            .collect(),
    )
}

/// Exact quotient by a divisor with leading coefficient ±1.
fn div_exact(a: &Small, d: &Small) -> Small {
    let dd = d.len() - 1;
    let lead = d[dd];
    debug_assert!(lead == 1 || lead == -1);
    let mut r = a.clone();
    if r.len() <= dd {
        debug_assert!(r.is_empty());
        return Vec::new();
    }
    let mut q = vec![0i128; r.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd] * lead;
        for (j, &dc) in d.iter().enumerate() {
            r[k + j] -= c * dc;
        }
        q[k] = c;
    }
    debug_assert!(r.iter().all(|&v| v == 0), "inexact Bareiss division");
    trim(q)
}

/// `det(A − X·I)` of the adjacency matrix by fraction-free Bareiss elimination
/// over ℤ[X]. The k-th pivot is a leading principal minor of `A − X·I`, with
/// leading coefficient `(−1)^k`, so every division is exact and no pivoting
/// is needed.
pub fn charpoly_oracle(t: &MaterializedTree) -> Result<IntPoly, OracleTooLarge> {
    let n = t.n();
    if n > ORACLE_MAX_VERTICES {
        return Err(OracleTooLarge(n));
    }
    let mut m: Vec<Vec<Small>> = vec![vec![Vec::new(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = vec![0, -1];
    }
    for &(u, v) in t.edges() {
        m[u][v] = vec![1];
        m[v][u] = vec![1];
    }
    let mut prev: Small = vec![1];
    for k in 0..n.saturating_sub(1) {
        for i in k + 1..n {
            for j in k + 1..n {
                let num = sub(&mul(&m[k][k], &m[i][j]), &mul(&m[i][k], &m[k][j]));
                m[i][j] = div_exact(&num, &prev);
            }
        }
        prev = m[k][k].clone();
    }
    let det = &m[n - 1][n - 1];
    Ok(IntPoly::new(det.iter().map(|&c| c.into()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_paths() {
        let p2 = MaterializedTree::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(
            charpoly_oracle(&p2).unwrap(),
            IntPoly::from_i64s(&[-1, 0, 1])
        );
        let p3 = MaterializedTree::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            charpoly_oracle(&p3).unwrap(),
            IntPoly::from_i64s(&[0, 2, 0, -1])
        );
        // K_{1,2} rooted at its center is the same graph as P3
        let k12 = MaterializedTree::new(3, vec![(0, 1), (0, 2)]).unwrap();
        assert_eq!(
            charpoly_oracle(&k12).unwrap(),
            charpoly_oracle(&p3).unwrap()
        );
    }

    #[test]
    fn size_guard() {
        let path = MaterializedTree::new(13, (0..12).map(|i| (i, i + 1)).collect()).unwrap();
        assert_eq!(charpoly_oracle(&path), Err(OracleTooLarge(13)));
    }
}
