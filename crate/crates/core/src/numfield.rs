//! Arithmetic in ℚ[Y]/(M₂), where M₂ is the minimal polynomial of λ².
//!
//! Elements are coordinate vectors in the power basis of ζ = λ². Working in
//! ℚ(λ²) instead of ℚ(λ) suffices because every tree quantity we track is a
//! rational function of λ².

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact::{matrix_charpoly, squarefree_part, sturm_count, IntPoly, RatPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("inverse of zero")]
    InvZero,
    /// The modulus is reducible; the payload is the nontrivial monic gcd found.
    #[error("zero divisor: modulus has the factor {0}")]
    ZeroDivisor(RatPoly),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("polynomial is constant")]
    Constant,
    #[error("coefficients are not all integers")]
    NonIntegerCoefficients,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("only {real} of {degree} roots are real")]
    NotTotallyReal { real: usize, degree: usize },
}

impl ValidationError {
    pub fn code(&self) -> &'static str {
        match self {
            ValidationError::Constant => "Constant",
            ValidationError::NonIntegerCoefficients => "NonIntegerCoefficients",
            ValidationError::NotMonic => "NotMonic",
            ValidationError::NotSquarefree => "NotSquarefree",
            ValidationError::NotTotallyReal { .. } => "NotTotallyReal",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub poly: IntPoly,
    pub d: usize,
    pub d2: usize,
    pub squared: IntPoly,
}

/// Checks that `m` is a monic, squarefree, totally real integer polynomial.
/// Irreducibility is not checked.
pub fn validate_input(m: &RatPoly) -> Result<ValidationReport, ValidationError> {
    let d = match m.degree() {
        None | Some(0) => return Err(ValidationError::Constant),
        Some(d) => d,
    };
    let poly = m.to_int().ok_or(ValidationError::NonIntegerCoefficients)?;
    if !poly.is_monic() {
        return Err(ValidationError::NotMonic);
    }
    if m.gcd(&m.derivative()).degree() != Some(0) {
        return Err(ValidationError::NotSquarefree);
    }
    let real = sturm_count(m, None, None);
    if real != d {
        return Err(ValidationError::NotTotallyReal { real, degree: d });
    }
    let squared = squared_minpoly(&poly);
    Ok(ValidationReport {
        d2: squared.degree().unwrap_or(0),
        poly,
        d,
        squared,
    })
}

/// The squarefree part of `N`, where `N(X²) = (−1)^{deg M}·M(X)·M(−X)`.
///
/// For irreducible `M` this is the minimal polynomial of λ² for any root λ.
pub fn squared_minpoly(m: &IntPoly) -> IntPoly {
    let d = m.degree().unwrap_or(0);
    let mut prod = m * &m.reflect();
    if d % 2 == 1 {
        prod = -prod;
    }
    let even = IntPoly::new(prod.coeffs().iter().step_by(2).cloned().collect());
    squarefree_part(&even.to_rat())
        .to_int()
        .expect("monic factor of a monic integer polynomial is integral")
}

struct CtxInner {
    m: IntPoly,
    modulus: IntPoly,
    modulus_rat: RatPoly,
}

/// The quotient ring ℚ[Y]/(M₂); cheap to clone.
#[derive(Clone)]
pub struct FieldCtx {
    inner: Arc<CtxInner>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FieldCtx(M = {}, M2 = {})",
            self.inner.m, self.inner.modulus
        )
    }
}

/// Coordinates of an element in the power basis of ζ.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElem(RatPoly);

impl FieldElem {
    pub fn coords(&self) -> &RatPoly {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0 == RatPoly::one()
    }

    /// The element as a rational number, when it lies in ℚ.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.0.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.0.coeff(0)),
            _ => None,
        }
    }

    /// The element as a positive integer, when it is one.
    pub fn as_positive_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer() && r.is_positive())
            .map(|r| r.to_integer())
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.display_in("z"))
    }
}

impl FieldCtx {
    /// Context for λ a root of `m`, with modulus `squared_minpoly(m)`.
    pub fn new(m: &IntPoly) -> Self {
        Self::with_modulus(m.clone(), squared_minpoly(m))
    }

    /// Context with an explicit monic modulus for ζ.
    pub fn with_modulus(m: IntPoly, modulus: IntPoly) -> Self {
        assert!(modulus.is_monic(), "modulus must be monic");
        let modulus_rat = modulus.to_rat();
        FieldCtx {
            inner: Arc::new(CtxInner {
                m,
                modulus,
                modulus_rat,
            }),
        }
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.inner.m
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.inner.modulus
    }

    pub fn degree(&self) -> usize {
        self.inner.modulus.degree().unwrap_or(0)
    }

    pub fn same(&self, other: &FieldCtx) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    fn reduce(&self, p: RatPoly) -> FieldElem {
        if p.degree().is_some_and(|d| d >= self.degree()) {
            FieldElem(p.rem(&self.inner.modulus_rat).expect("monic modulus"))
        } else {
            FieldElem(p)
        }
    }

    /// Reduces an arbitrary polynomial in ζ into the ring.
    pub fn elem(&self, p: RatPoly) -> FieldElem {
        self.reduce(p)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(RatPoly::zero())
    }

    pub fn one(&self) -> FieldElem {
        self.reduce(RatPoly::one())
    }

    pub fn zeta(&self) -> FieldElem {
        self.reduce(RatPoly::x())
    }

    pub fn from_int(&self, n: &BigInt) -> FieldElem {
        self.from_rational(Rational::from_integer(n.clone()))
    }

    pub fn from_rational(&self, r: Rational) -> FieldElem {
        self.reduce(RatPoly::constant(r))
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(&a.0 + &b.0)
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(&a.0 - &b.0)
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        FieldElem(-&a.0)
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.reduce(&a.0 * &b.0)
    }

    pub fn scale(&self, a: &FieldElem, k: &BigInt) -> FieldElem {
        FieldElem(a.0.scale(&Rational::from_integer(k.clone())))
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::InvZero);
        }
        let (g, s) = a.0.gcd_cofactor(&self.inner.modulus_rat);
        if g.degree() != Some(0) {
            return Err(FieldError::ZeroDivisor(g));
        }
        Ok(self.reduce(s))
    }

    /// Evaluates `p` at `e` by Horner's rule in the ring.
    pub fn eval_at(&self, p: &RatPoly, e: &FieldElem) -> FieldElem {
        p.coeffs().iter().rev().fold(self.zero(), |acc, c| {
            self.add(&self.mul(&acc, e), &self.from_rational(c.clone()))
        })
    }

    /// Monic squarefree part of the characteristic polynomial of
    /// multiplication by `e`; the minimal polynomial when M₂ is irreducible.
    pub fn elem_minpoly(&self, e: &FieldElem) -> RatPoly {
        let d = self.degree();
        if d == 0 {
            return RatPoly::x();
        }
        let mut cols = Vec::with_capacity(d);
        let mut col = e.clone();
        let zeta = self.zeta();
        for _ in 0..d {
            cols.push(col.clone());
            col = self.mul(&col, &zeta);
        }
        let den = cols.iter().fold(BigInt::one(), |acc, c| {
            num_integer::Integer::lcm(&acc, &c.0.denominator_lcm())
        });
        let scaled: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        (cols[j].0.coeff(i) * Rational::from_integer(den.clone())).to_integer()
                    })
                    .collect()
            })
            .collect();
        let chi = matrix_charpoly(&scaled);
        // χ_e(X) = den^{-d} χ_{den·A}(den·X)
        let den_r = Rational::from_integer(den);
        let mut pow = Rational::one();
        let mut coeffs = Vec::with_capacity(d + 1);
        for c in chi.coeffs() {
            coeffs.push(Rational::from_integer(c.clone()) * &pow);
            pow *= &den_r;
        }
        let full = RatPoly::new(coeffs);
        squarefree_part(&full)
    }

    /// True iff no conjugate of `e` is negative; zero counts as totally positive.
    pub fn is_totally_positive(&self, e: &FieldElem) -> bool {
        let p = self.elem_minpoly(e);
        let zero = Rational::zero();
        let mut neg = sturm_count(&p, None, Some(&zero));
        if p.eval(&zero).is_zero() {
            neg -= 1;
        }
        neg == 0
    }
}
