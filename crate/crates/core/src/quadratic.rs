//! Real quadratic irrationals `(P + √D) / Q` and their periodic continued
//! fraction expansions.
//!
//! All arithmetic is exact. A value is always stored in canonical form: the
//! coefficient of `√D` is `1/Q`, and `Q` divides `D - P²`. The canonical
//! triple is the one with the smallest `|Q|`, which makes it unique per real
//! number, so structural equality is numeric equality.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The real number `(P + √D) / Q` with `D > 0` not a perfect square.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticIrrational {
    p: BigInt,
    d: BigInt,
    q: BigInt,
}

/// An eventually periodic simple continued fraction
/// `[preperiod; period, period, ...]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    pub preperiod: Vec<BigInt>,
    pub period: Vec<BigInt>,
}

/// Conjugate, trace and norm of a quadratic irrational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjTraceNorm {
    pub conjugate: QuadraticIrrational,
    pub trace: BigRational,
    pub norm: BigRational,
}

pub(crate) fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

/// Validates `(P, D, Q)` and rescales it to the canonical triple.
pub fn canonicalize(p: BigInt, d: BigInt, q: BigInt) -> Result<QuadraticIrrational> {
    if q.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    if !d.is_positive() {
        return Err(Error::NonPositiveRadicand(d));
    }
    if is_perfect_square(&d) {
        return Err(Error::SquareRadicand(d));
    }
    // The value is s + sign(Q)·√r with s = P/Q, r = D/Q². A triple with
    // denominator ±n exists iff n·s and n·(r - s²) are integers (n²·r then
    // follows), so the least admissible n is an lcm of two denominators.
    let s = BigRational::new(p, q.clone());
    let r = BigRational::new(d, &q * &q);
    let gap = &r - &s * &s;
    let n = s.denom().lcm(gap.denom());
    let qn = if q.is_negative() { -n.clone() } else { n.clone() };
    let p_new = (&s * BigRational::from_integer(qn.clone())).to_integer();
    let d_new = (&r * BigRational::from_integer(&n * &n)).to_integer();
    Ok(QuadraticIrrational { p: p_new, d: d_new, q: qn })
}

impl QuadraticIrrational {
    pub fn new(p: impl Into<BigInt>, d: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        canonicalize(p.into(), d.into(), q.into())
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// Rational part `P/Q`.
    pub fn rational_part(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.q.clone())
    }

    /// `⌊(P + √D)/Q⌋`, computed with integer square roots only.
    pub fn floor(&self) -> BigInt {
        let s = self.d.sqrt();
        if self.q.is_positive() {
            (&self.p + &s).div_floor(&self.q)
        } else {
            // -(P + √D) lies strictly between -P-s-1 and -P-s.
            let num = -&self.p - &s - BigInt::one();
            num.div_floor(&-&self.q)
        }
    }

    /// `x + a` for an integer `a`.
    pub fn add_integer(&self, a: &BigInt) -> Self {
        let p = &self.p + a * &self.q;
        // Q | D - P² is preserved by integer shifts of P by multiples of Q.
        QuadraticIrrational { p, d: self.d.clone(), q: self.q.clone() }
    }

    /// `1 / x`.
    pub fn recip(&self) -> Self {
        let q = (&self.d - &self.p * &self.p) / &self.q;
        canonicalize(-self.p.clone(), self.d.clone(), q).expect("reciprocal of an irrational")
    }

    /// Multiplies by a nonzero integer.
    pub fn scale(&self, f: &BigInt) -> Self {
        assert!(!f.is_zero(), "scale by zero");
        // f(P + √D)/Q = (fP + sign(f)√(f²D))/Q
        let p = f * &self.p;
        let d = f * f * &self.d;
        let q = if f.is_negative() { -self.q.clone() } else { self.q.clone() };
        let p = if f.is_negative() { -p } else { p };
        canonicalize(p, d, q).expect("nonzero multiple of an irrational")
    }

    /// Conjugate `(P - √D)/Q`, trace `2P/Q` and norm `(P² - D)/Q²`.
    pub fn conj_trace_norm(&self) -> ConjTraceNorm {
        let conjugate = canonicalize(-self.p.clone(), self.d.clone(), -self.q.clone())
            .expect("conjugate of a canonical irrational");
        let trace = BigRational::new(BigInt::from(2) * &self.p, self.q.clone());
        let norm = BigRational::new(&self.p * &self.p - &self.d, &self.q * &self.q);
        ConjTraceNorm { conjugate, trace, norm }
    }

    /// Primitive integer polynomial `a x² + b x + c` with `a > 0` vanishing at
    /// this value, returned as `(a, b, c)`.
    pub fn min_poly(&self) -> (BigInt, BigInt, BigInt) {
        // Q x² - 2P x + (P² - D)/Q, integral by canonicity.
        let a = self.q.clone();
        let b = BigInt::from(-2) * &self.p;
        let c = (&self.p * &self.p - &self.d) / &self.q;
        let g = a.gcd(&b).gcd(&c);
        let g = if a.is_negative() { -g } else { g };
        (a / &g, b / &g, c / &g)
    }

    /// Exact continued fraction expansion with the minimal period.
    pub fn cf_expand(&self) -> ContinuedFraction {
        let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
        let mut quotients = Vec::new();
        let mut x = self.clone();
        loop {
            let state = (x.p.clone(), x.q.clone());
            if let Some(&start) = seen.get(&state) {
                let period = quotients.split_off(start);
                debug_assert!(is_primitive(&period));
                return ContinuedFraction { preperiod: quotients, period };
            }
            seen.insert(state, quotients.len());
            let a = x.floor();
            // Complete quotient recurrence: P' = aQ - P, Q' = (D - P'²)/Q.
            let p_next = &a * &x.q - &x.p;
            let q_next = (&x.d - &p_next * &p_next) / &x.q;
            quotients.push(a);
            x = QuadraticIrrational { p: p_next, d: x.d, q: q_next };
        }
    }
}

fn is_primitive(word: &[BigInt]) -> bool {
    let n = word.len();
    (1..n).filter(|k| n.is_multiple_of(*k)).all(|k| (0..n).any(|i| word[i] != word[i % k]))
}

impl ContinuedFraction {
    pub fn new(preperiod: Vec<BigInt>, period: Vec<BigInt>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        if let Some(bad) = period.iter().chain(preperiod.iter().skip(1)).find(|a| !a.is_positive()) {
            return Err(Error::InvalidPartialQuotient(bad.clone()));
        }
        Ok(ContinuedFraction { preperiod, period })
    }

    /// Whether the period is not a repetition of a shorter word.
    pub fn is_minimal(&self) -> bool {
        is_primitive(&self.period)
    }

    /// The exact value of the expansion.
    pub fn value(&self) -> Result<QuadraticIrrational> {
        if self.period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        if let Some(bad) = self.period.iter().find(|a| !a.is_positive()) {
            return Err(Error::InvalidPartialQuotient(bad.clone()));
        }
        // Period matrix [[a, b], [c, d]]; the tail y = (a y + b)/(c y + d)
        // solves c y² + (d - a) y - b = 0, and the root above 1 is taken.
        let (mut a, mut b, mut c, mut d) = (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
        for k in &self.period {
            let (na, nb) = (&a * k + &b, a.clone());
            let (nc, nd) = (&c * k + &d, c.clone());
            a = na;
            b = nb;
            c = nc;
            d = nd;
        }
        let diff = &a - &d;
        let disc = &diff * &diff + BigInt::from(4) * &b * &c;
        let mut x = canonicalize(diff, disc, BigInt::from(2) * &c)?;
        for k in self.preperiod.iter().rev() {
            x = x.recip().add_integer(k);
        }
        Ok(x)
    }
}

/// Expansion of `θ`; see [`QuadraticIrrational::cf_expand`].
pub fn cf_expand(theta: &QuadraticIrrational) -> ContinuedFraction {
    theta.cf_expand()
}

/// Inverse of [`cf_expand`].
pub fn cf_value(cf: &ContinuedFraction) -> Result<QuadraticIrrational> {
    cf.value()
}

pub fn conj_trace_norm(theta: &QuadraticIrrational) -> ConjTraceNorm {
    theta.conj_trace_norm()
}

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}+√{})/{}", self.p, self.d, self.q)
    }
}

impl FromStr for QuadraticIrrational {
    type Err = Error;

    /// Parses the token `P,D,Q`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected P,D,Q but got {s:?}")));
        }
        let mut nums = Vec::with_capacity(3);
        for part in parts {
            let n = BigInt::from_str(part).map_err(|_| Error::Parse(format!("not an integer: {part:?}")))?;
            nums.push(n);
        }
        let q = nums.pop().unwrap();
        let d = nums.pop().unwrap();
        let p = nums.pop().unwrap();
        canonicalize(p, d, q)
    }
}
