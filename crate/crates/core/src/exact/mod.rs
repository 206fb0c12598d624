//! Exact arithmetic: rationals, dense polynomials over ℤ and ℚ, Sturm
//! sequences and real-root isolation.

mod linalg;
mod poly;
mod roots;

pub use linalg::charpoly as matrix_charpoly;
pub use poly::{squarefree_part, Coeff, IntPoly, Poly, RatPoly};
pub use roots::{isolate_real_roots, root_upper_bound, sturm_count, RootInterval, SturmSequence};

/// Reduced arbitrary-precision rational with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("integer division requires a divisor with unit leading coefficient")]
    NotMonic,
}
