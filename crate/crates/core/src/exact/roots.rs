//! Sturm sequences, real-root counting and isolation over ℚ.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{RatPoly, Rational};

/// Cauchy bound `1 + max |c_i / c_deg|`; every real root is strictly below it in
/// absolute value.
pub fn root_upper_bound(p: &RatPoly) -> Rational {
    let Some(lead) = p.leading() else {
        return Rational::one();
    };
    let lead = lead.abs();
    let deg = p.coeffs().len() - 1;
    let max = p.coeffs()[..deg]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(Rational::zero);
    Rational::one() + max
}

fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// A precomputed Sturm chain `p, p', -rem(p, p'), …`.
///
/// Each member is scaled by a positive constant to keep coefficients small;
/// positive scaling does not change sign variations.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<RatPoly>,
}

impl SturmSequence {
    pub fn new(p: &RatPoly) -> Self {
        let normalize = |q: RatPoly| match q.leading() {
            Some(l) => {
                let s = l.abs().recip();
                q.scale(&s)
            }
            None => q,
        };
        let mut chain = vec![normalize(p.clone())];
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(normalize(d));
            loop {
                let n = chain.len();
                let r = chain[n - 2].rem(&chain[n - 1]).expect("nonzero");
                if r.is_zero() {
                    break;
                }
                chain.push(normalize(-r));
            }
        }
        SturmSequence { chain }
    }

    fn variations<I: Iterator<Item = i8>>(signs: I) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Sign variations at `x`; `None` together with `positive` selects ±∞.
    fn variations_at(&self, x: Option<&Rational>, positive: bool) -> usize {
        match x {
            Some(x) => Self::variations(self.chain.iter().map(|q| sign(&q.eval(x)))),
            None => Self::variations(self.chain.iter().map(|q| {
                let l = sign(q.leading().expect("chain members are nonzero"));
                let odd = q.degree().unwrap_or(0) % 2 == 1;
                if !positive && odd {
                    -l
                } else {
                    l
                }
            })),
        }
    }

    /// Number of distinct real roots in `(lo, hi]`; `None` means −∞ / +∞.
    pub fn count(&self, lo: Option<&Rational>, hi: Option<&Rational>) -> usize {
        if let (Some(a), Some(b)) = (lo, hi) {
            if a >= b {
                return 0;
            }
        }
        let va = self.variations_at(lo, false);
        let vb = self.variations_at(hi, true);
        va.saturating_sub(vb)
    }

    pub fn poly(&self) -> &RatPoly {
        &self.chain[0]
    }
}

/// Number of distinct real roots of the squarefree `p` in `(lo, hi]`.
pub fn sturm_count(p: &RatPoly, lo: Option<&Rational>, hi: Option<&Rational>) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    SturmSequence::new(p).count(lo, hi)
}

/// Interval `(lo, hi]` holding exactly one real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    /// Halves the interval, keeping the half that holds the root.
    pub fn bisect(&self, sturm: &SturmSequence) -> RootInterval {
        let mid = self.midpoint();
        if sturm.count(Some(&self.lo), Some(&mid)) == 1 {
            RootInterval {
                lo: self.lo.clone(),
                hi: mid,
            }
        } else {
            RootInterval {
                lo: mid,
                hi: self.hi.clone(),
            }
        }
    }

    pub fn refine_to_width(&self, sturm: &SturmSequence, width: &Rational) -> RootInterval {
        let mut iv = self.clone();
        while iv.width() > *width {
            iv = iv.bisect(sturm);
        }
        iv
    }
}

/// Smallest power of two at least the Cauchy bound, so bisection stays dyadic.
fn dyadic_bound(p: &RatPoly) -> Rational {
    let b = root_upper_bound(p);
    let mut t = Rational::one();
    while t < b {
        t *= Rational::from_integer(BigInt::from(2));
    }
    t
}

/// Isolating intervals for the real roots of the squarefree `p`, ordered by
/// decreasing root. Endpoints are dyadic rationals.
pub fn isolate_real_roots(p: &RatPoly) -> Vec<RootInterval> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sturm = SturmSequence::new(p);
    let b = dyadic_bound(p);
    let mut out = Vec::new();
    // Depth-first on the upper half first gives decreasing order.
    let mut stack = vec![RootInterval {
        lo: -b.clone(),
        hi: b,
    }];
    while let Some(iv) = stack.pop() {
        match sturm.count(Some(&iv.lo), Some(&iv.hi)) {
            0 => {}
            1 => out.push(iv),
            _ => {
                let mid = iv.midpoint();
                stack.push(RootInterval {
                    lo: iv.lo.clone(),
                    hi: mid.clone(),
                });
                stack.push(RootInterval { lo: mid, hi: iv.hi });
            }
        }
    }
    out
}
