use num_bigint::BigInt;

use super::IntPoly;

/// `det(X·I − A)` for a square integer matrix, by Bareiss elimination over ℤ[X].
///
/// The k-th pivot is the leading principal k×k minor of `X·I − A`, a monic
/// polynomial of degree k, so no pivoting is needed and every Bareiss division
/// is by a monic divisor.
pub fn charpoly(a: &[Vec<BigInt>]) -> IntPoly {
    let n = a.len();
    if n == 0 {
        return IntPoly::one();
    }
    let mut m: Vec<Vec<IntPoly>> = (0..n)
        .map(|i| {
            assert_eq!(a[i].len(), n, "matrix must be square");
            (0..n)
                .map(|j| {
                    let entry = IntPoly::constant(-a[i][j].clone());
                    if i == j {
                        &entry + &IntPoly::x()
                    } else {
                        entry
                    }
                })
                .collect()
        })
        .collect();
    let mut prev = IntPoly::one();
    for k in 0..n - 1 {
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                let (q, r) = num.div_rem(&prev).expect("pivots are monic");
                debug_assert!(r.is_zero());
                m[i][j] = q;
            }
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].clone()
}
