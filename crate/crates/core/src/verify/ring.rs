//! Coefficient rings for evaluating characteristic-polynomial pairs.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;

use crate::exact::IntPoly;

pub trait PhiRing {
    type Elem: Clone;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// The image of the polynomial variable `X`.
    fn x(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `n·a` for an arbitrary-precision integer `n`.
    fn scalar(&self, a: &Self::Elem, n: &BigUint) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// `a^n` by square-and-multiply.
    fn pow(&self, a: &Self::Elem, n: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..n.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if n.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }
}

/// ℤ[X]/(M) with exact integer coefficients; `M` monic.
#[derive(Clone, Debug)]
pub struct ExactRing {
    modulus: IntPoly,
}

impl ExactRing {
    pub fn new(modulus: IntPoly) -> Self {
        assert!(modulus.is_monic(), "modulus must be monic");
        ExactRing { modulus }
    }

    pub fn reduce(&self, p: &IntPoly) -> IntPoly {
        p.div_rem(&self.modulus).expect("monic modulus").1
    }
}

impl PhiRing for ExactRing {
    type Elem = IntPoly;

    fn zero(&self) -> IntPoly {
        IntPoly::zero()
    }
    fn one(&self) -> IntPoly {
        self.reduce(&IntPoly::one())
    }
    fn x(&self) -> IntPoly {
        self.reduce(&IntPoly::x())
    }
    fn add(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        a + b
    }
    fn neg(&self, a: &IntPoly) -> IntPoly {
        -a
    }
    fn mul(&self, a: &IntPoly, b: &IntPoly) -> IntPoly {
        self.reduce(&(a * b))
    }
    fn scalar(&self, a: &IntPoly, n: &BigUint) -> IntPoly {
        a.scale(&BigInt::from(n.clone()))
    }
    fn is_zero(&self, a: &IntPoly) -> bool {
        a.is_zero()
    }
}

/// (ℤ/p)[X]/(M mod p) for a word-size prime `p`; elements are dense
/// coefficient vectors of length `deg M`.
#[derive(Clone, Debug)]
pub struct ModRing {
    p: u64,
    /// Low coefficients of the monic modulus, reduced mod p.
    modulus: Vec<u64>,
}

impl ModRing {
    pub fn new(modulus: &IntPoly, p: u64) -> Self {
        assert!(modulus.is_monic(), "modulus must be monic");
        let pb = BigInt::from(p);
        let d = modulus.degree().unwrap_or(0);
        let low = modulus.coeffs()[..d]
            .iter()
            .map(|c| {
                let r = ((c % &pb) + &pb) % &pb;
                r.to_u64().expect("residue fits")
            })
            .collect();
        ModRing { p, modulus: low }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    fn d(&self) -> usize {
        self.modulus.len()
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn addmod(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.p as u128) as u64
    }

    /// Reduces a polynomial with integer coefficients into the ring.
    pub fn reduce_int(&self, f: &IntPoly) -> Vec<u64> {
        let pb = BigInt::from(self.p);
        let coeffs: Vec<u64> = f
            .coeffs()
            .iter()
            .map(|c| (((c % &pb) + &pb) % &pb).to_u64().expect("residue fits"))
            .collect();
        self.reduce_vec(coeffs)
    }

    fn reduce_vec(&self, mut c: Vec<u64>) -> Vec<u64> {
        let d = self.d();
        for k in (d..c.len()).rev() {
            let lead = c[k];
            if lead != 0 {
                // X^d ≡ −Σ m_i X^i
                for i in 0..d {
                    let t = self.mulmod(lead, self.modulus[i]);
                    c[k - d + i] = self.addmod(c[k - d + i], self.p - t);
                }
            }
        }
        c.resize(d, 0);
        c
    }
}

impl PhiRing for ModRing {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.d()]
    }
    fn one(&self) -> Vec<u64> {
        self.reduce_vec(vec![1])
    }
    fn x(&self) -> Vec<u64> {
        self.reduce_vec(vec![0, 1])
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| self.addmod(x, y)).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter()
            .map(|&x| if x == 0 { 0 } else { self.p - x })
            .collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let d = self.d();
        if d == 0 {
            return Vec::new();
        }
        let mut acc = vec![0u128; 2 * d - 1];
        let p = self.p as u128;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] = (acc[i + j] + x as u128 * y as u128) % p;
            }
        }
        self.reduce_vec(acc.into_iter().map(|v| v as u64).collect())
    }
    fn scalar(&self, a: &Vec<u64>, n: &BigUint) -> Vec<u64> {
        let k = (n % self.p).to_u64().expect("residue fits");
        a.iter().map(|&x| self.mulmod(x, k)).collect()
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&x| x == 0)
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}
