//! Short Weierstrass curves `y² = x³ + ax + b` over prime fields, point
//! counts, and the per-prime fingerprint `(π(p), tr A^π(p), L_p, Z²/(I - L_p)Z²)`
//! of a quadratic irrational.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intmat::{build_lp, cokernel_group, matrix_a, AbelianGroup, IMat2};
use crate::quadratic::QuadraticIrrational;
use crate::units::pi_index;

/// `y² = x³ + ax + b` over `Q`, with nonzero discriminant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Curve {
    pub a: BigInt,
    pub b: BigInt,
}

impl Curve {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<Self> {
        let c = Curve { a: a.into(), b: b.into() };
        if c.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(c)
    }

    /// `-16(4a³ + 27b²)`.
    pub fn discriminant(&self) -> BigInt {
        let a3 = &self.a * &self.a * &self.a;
        let b2 = &self.b * &self.b;
        BigInt::from(-16) * (BigInt::from(4) * a3 + BigInt::from(27) * b2)
    }

    fn reduce(&self, p: u64) -> (u64, u64) {
        let m = BigInt::from(p);
        let r = |x: &BigInt| x.mod_floor(&m).to_u64().expect("residue below p");
        (r(&self.a), r(&self.b))
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})x + ({})", self.a, self.b)
    }
}

impl FromStr for Curve {
    type Err = Error;

    /// Parses `a,b`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s.split_once(',').ok_or_else(|| Error::Parse(format!("expected a,b but got {s:?}")))?;
        let parse = |x: &str| BigInt::from_str(x.trim()).map_err(|_| Error::Parse(format!("not an integer: {x:?}")));
        Curve::new(parse(a)?, parse(b)?)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `p > 3` and `p ∤ Δ`.
pub fn is_good_prime(curve: &Curve, p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(p > 3 && !curve.discriminant().is_multiple_of(&BigInt::from(p)))
}

fn require_good(curve: &Curve, p: u64) -> Result<()> {
    if is_good_prime(curve, p)? {
        Ok(())
    } else {
        Err(Error::BadPrime { p })
    }
}

fn mul_mod(x: u64, y: u64, p: u64) -> u64 {
    ((x as u128 * y as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Quadratic character of `x` modulo an odd prime `p`, with `χ(0) = 0`.
pub fn legendre(x: u64, p: u64) -> i64 {
    let x = x % p;
    if x == 0 {
        return 0;
    }
    if pow_mod(x, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

fn rhs(x: u64, a: u64, b: u64, p: u64) -> u64 {
    let x3 = mul_mod(mul_mod(x, x, p), x, p);
    (x3 + mul_mod(a, x, p) + b) % p
}

/// `#E(F_p)` by enumerating every pair `(x, y)`, plus the point at infinity.
pub fn count_points_naive(curve: &Curve, p: u64) -> Result<u64> {
    require_good(curve, p)?;
    let (a, b) = curve.reduce(p);
    let mut n = 1u64;
    for x in 0..p {
        let r = rhs(x, a, b, p);
        for y in 0..p {
            if mul_mod(y, y, p) == r {
                n += 1;
            }
        }
    }
    Ok(n)
}

/// Point count and Frobenius trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointCount {
    pub count: u64,
    /// `p + 1 - count`.
    pub a_p: i64,
}

/// `#E(F_p) = p + 1 + Σ_x χ(x³ + ax + b)`.
pub fn count_points(curve: &Curve, p: u64) -> Result<PointCount> {
    require_good(curve, p)?;
    let (a, b) = curve.reduce(p);
    let chi_sum: i64 = (0..p).map(|x| legendre(rhs(x, a, b, p), p)).sum();
    let count = (p as i64 + 1 + chi_sum) as u64;
    let a_p = -chi_sum;
    assert!((a_p as i128).pow(2) <= 4 * p as i128, "Hasse bound violated for p = {p}");
    Ok(PointCount { count, a_p })
}

/// Per-prime data of the `L_p` pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub p: u64,
    pub pi: u64,
    /// `tr(A^π(p))`.
    pub trace: BigInt,
    pub lp: IMat2,
    /// `det(I - L_p)`.
    pub det_iml: BigInt,
    pub group: AbelianGroup,
}

/// Computes `π(p)`, `T_p = tr(A^π(p))`, `L_p` and `Z²/(I - L_p)Z²` for each
/// modulus.
pub fn fingerprint(theta: &QuadraticIrrational, primes: &[u64], cap: u64) -> Result<Vec<Fingerprint>> {
    let a = matrix_a(&theta.cf_expand().period)?;
    primes
        .iter()
        .map(|&p| {
            let pb = BigInt::from(p);
            let pi = pi_index(theta, &pb, cap)?;
            let trace = a.pow(pi as i64)?.trace();
            let lp = build_lp(&trace, &pb);
            let det_iml = IMat2::identity().sub(&lp).det();
            assert_eq!(det_iml, BigInt::from(1) + &pb - &trace, "det(I - L_p) identity");
            let group = cokernel_group(&lp);
            Ok(Fingerprint { p, pi, trace, lp, det_iml, group })
        })
        .collect()
}

/// One compared prime in a [`MatchReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchRow {
    pub fingerprint: Fingerprint,
    pub ec: PointCount,
    /// `|det(I - L_p)| == #E(F_p)`.
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MatchReport {
    pub rows: Vec<MatchRow>,
    pub matching: Vec<u64>,
    pub mismatching: Vec<u64>,
    /// Primes dropped because they are bad for the curve.
    pub skipped: Vec<u64>,
}

/// Compares `|det(I - L_p)|` against `#E(F_p)` over the good primes in
/// `primes`. Reports the outcome without expecting any particular answer.
pub fn match_curve(theta: &QuadraticIrrational, curve: &Curve, primes: &[u64], cap: u64) -> Result<MatchReport> {
    let mut report = MatchReport::default();
    let mut good = Vec::new();
    for &p in primes {
        if is_good_prime(curve, p)? {
            good.push(p);
        } else {
            report.skipped.push(p);
        }
    }
    for fp in fingerprint(theta, &good, cap)? {
        let ec = count_points(curve, fp.p)?;
        let matches = fp.det_iml.abs() == BigInt::from(ec.count);
        if matches {
            report.matching.push(fp.p);
        } else {
            report.mismatching.push(fp.p);
        }
        report.rows.push(MatchRow { fingerprint: fp, ec, matches });
    }
    Ok(report)
}
