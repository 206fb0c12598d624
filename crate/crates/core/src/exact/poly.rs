use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{PolyError, Rational};

/// Coefficient ring for dense polynomials.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn from_i64(v: i64) -> Self;
    fn is_negative(&self) -> bool;
}

impl Coeff for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Coeff for Rational {
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

/// Dense univariate polynomial, constant term first.
///
/// The coefficient vector never ends in a zero; the zero polynomial is the
/// empty vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

pub type IntPoly = Poly<BigInt>;
pub type RatPoly = Poly<Rational>;

impl<T: Coeff> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn x() -> Self {
        Self::monomial(T::one(), 1)
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `X^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// `p(-X)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// `p(X^2)`.
    pub fn compose_square(&self) -> Self {
        let mut coeffs = vec![T::zero(); 2 * self.coeffs.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[2 * i] = c.clone();
        }
        Self::new(coeffs)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Long division given the inverse of the divisor's leading coefficient.
    fn div_rem_with(&self, d: &Self, lead_inv: &T) -> (Self, Self) {
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![T::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone() * lead_inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].clone() - c.clone() * dc.clone();
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub(crate) fn fmt_with_var(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let text = mag.to_string();
            let fractional = text.contains('/');
            match i {
                0 => write!(f, "{text}")?,
                _ => {
                    if !mag.is_one() {
                        if fractional {
                            write!(f, "{text}*")?;
                        } else {
                            write!(f, "{text}")?;
                        }
                    }
                    if i == 1 {
                        write!(f, "{var}")?;
                    } else {
                        write!(f, "{var}^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Renders the polynomial in the given variable name.
    pub fn display_in<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        struct D<'a, T>(&'a Poly<T>, &'a str);
        impl<T: Coeff> fmt::Display for D<'_, T> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_with_var(f, self.1)
            }
        }
        D(self, var)
    }
}

impl<T: Coeff> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with_var(f, "x")
    }
}

impl<T: Coeff> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl<T: Coeff> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Coeff> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Coeff> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Coeff> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl<T: Coeff> $tr for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl<T: Coeff> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        -&self
    }
}

impl IntPoly {
    /// Division by a divisor with unit leading coefficient (±1).
    pub fn div_rem(&self, d: &IntPoly) -> Result<(IntPoly, IntPoly), PolyError> {
        let lead = d.leading().ok_or(PolyError::DivisionByZero)?;
        if !lead.abs().is_one() {
            return Err(PolyError::NotMonic);
        }
        Ok(self.div_rem_with(d, &lead.clone()))
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// Exact divisibility test; requires a divisor with unit leading coefficient.
    pub fn divides(&self, other: &IntPoly) -> Result<bool, PolyError> {
        Ok(other.div_rem(self)?.1.is_zero())
    }

    /// Divisibility over ℚ (any nonzero divisor).
    pub fn divides_over_q(&self, other: &IntPoly) -> Result<bool, PolyError> {
        Ok(other.to_rat().div_rem(&self.to_rat())?.1.is_zero())
    }
}

impl RatPoly {
    pub fn div_rem(&self, d: &RatPoly) -> Result<(RatPoly, RatPoly), PolyError> {
        let lead = d.leading().ok_or(PolyError::DivisionByZero)?;
        Ok(self.div_rem_with(d, &lead.recip()))
    }

    pub fn rem(&self, d: &RatPoly) -> Result<RatPoly, PolyError> {
        Ok(self.div_rem(d)?.1)
    }

    /// Normalizes to leading coefficient 1; the zero polynomial is returned unchanged.
    pub fn monic(&self) -> RatPoly {
        match self.leading() {
            Some(l) if !l.is_one() => self.scale(&l.recip()),
            _ => self.clone(),
        }
    }

    /// Monic gcd by plain Euclid over ℚ.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r.monic();
        }
        a
    }

    /// Returns `(g, s)` with `g = gcd(self, m)` monic and `s·self ≡ g (mod m)`.
    pub fn gcd_cofactor(&self, m: &RatPoly) -> (RatPoly, RatPoly) {
        let (mut r0, mut r1) = (m.clone(), self.clone());
        let (mut s0, mut s1) = (RatPoly::zero(), RatPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            let s = &s0 - &(&q * &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        match r0.leading() {
            Some(l) => {
                let inv = l.recip();
                (r0.scale(&inv), s0.scale(&inv))
            }
            None => (r0, s0),
        }
    }

    /// Exact integer polynomial when every coefficient is integral.
    pub fn to_int(&self) -> Option<IntPoly> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntPoly::new)
    }

    /// Smallest positive integer `D` such that `D·self` has integer coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

/// `p / gcd(p, p')`, made monic: the same distinct roots, each simple.
pub fn squarefree_part(p: &RatPoly) -> RatPoly {
    if p.degree().unwrap_or(0) == 0 {
        return p.monic();
    }
    let g = p.gcd(&p.derivative());
    p.div_rem(&g).expect("gcd is nonzero").0.monic()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }
    fn rp(c: &[i64]) -> RatPoly {
        RatPoly::from_i64s(c)
    }

    #[test]
    fn remainder_is_value_at_one() {
        let (_, r) = ip(&[-2, 0, 1]).div_rem(&ip(&[-1, 1])).unwrap();
        assert_eq!(r, ip(&[-1]));
    }

    #[test]
    fn product_of_golden_factors() {
        assert_eq!(&ip(&[-1, -1, 1]) * &ip(&[-1, 1, 1]), ip(&[1, 0, -3, 0, 1]));
    }

    #[test]
    fn long_division() {
        let (q, r) = ip(&[0, 2, 0, 1]).div_rem(&ip(&[-2, 0, 1])).unwrap();
        assert_eq!(q, ip(&[0, 1]));
        assert_eq!(r, ip(&[0, 4]));
    }

    #[test]
    fn division_errors() {
        assert_eq!(
            ip(&[1, 1]).div_rem(&IntPoly::zero()),
            Err(PolyError::DivisionByZero)
        );
        assert_eq!(ip(&[1, 1]).div_rem(&ip(&[1, 2])), Err(PolyError::NotMonic));
        assert!(rp(&[1, 1]).div_rem(&RatPoly::zero()).is_err());
        assert!(rp(&[1, 1]).div_rem(&rp(&[1, 2])).is_ok());
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&rp(&[4, -4, 1])), rp(&[-2, 1]));
        assert_eq!(squarefree_part(&rp(&[-2, 0, 1])), rp(&[-2, 0, 1]));
        assert_eq!(squarefree_part(&rp(&[0, 0, -1, 1])), rp(&[0, -1, 1]));
    }

    #[test]
    fn cofactor_inverts() {
        let m = rp(&[1, -3, 1]);
        let (g, s) = rp(&[0, 1]).gcd_cofactor(&m);
        assert!(g.is_one_poly());
        assert_eq!(s, rp(&[3, -1]));
    }

    #[test]
    fn display_round_trippable_text() {
        assert_eq!(ip(&[2, -4, 0, 1]).to_string(), "x^3 - 4x + 2");
        assert_eq!(ip(&[0, 0, -1]).to_string(), "-x^2");
        assert_eq!(IntPoly::zero().to_string(), "0");
        let half = RatPoly::new(vec![
            Rational::new(1.into(), 2.into()),
            Rational::from_i64(-3),
        ]);
        assert_eq!(half.display_in("z").to_string(), "-3z + 1/2");
    }

    impl RatPoly {
        fn is_one_poly(&self) -> bool {
            *self == RatPoly::one()
        }
    }
}
