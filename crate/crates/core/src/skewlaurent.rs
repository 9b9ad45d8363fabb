//! The skew Laurent ring `R[t, t⁻¹; α]` over `R = Q(i)[u]`, twisted by an
//! affine substitution `α: u ↦ p·u + q`, in two presentations:
//!
//! * normal form `Σ b_k t^k` with `t·b = α(b)·t`, multiplied term by term via
//!   `(a t^m)(b t^n) = a·α^m(b)·t^(m+n)`;
//! * finitely supported functions `k ↦ b_k` on the integers with the twisted
//!   convolution `(f g)(k) = Σ_l f(l)·α^l(g(k - l))`.
//!
//! Both carry the involution fixed by `t* = t⁻¹` and coefficientwise complex
//! conjugation (`u* = u`), which is only well defined when `α` commutes with
//! conjugation.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Element `re + im·i` of `Q(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gauss {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gauss {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gauss { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Gauss::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    pub fn zero() -> Self {
        Gauss::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Gauss::from_ints(1, 0)
    }

    pub fn i() -> Self {
        Gauss::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gauss::new(self.re.clone(), -self.im.clone())
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Some(Gauss::new(&self.re / &n, -&self.im / &n))
    }
}

impl Add for &Gauss {
    type Output = Gauss;
    fn add(self, o: &Gauss) -> Gauss {
        Gauss::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &Gauss {
    type Output = Gauss;
    fn sub(self, o: &Gauss) -> Gauss {
        Gauss::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &Gauss {
    type Output = Gauss;
    fn mul(self, o: &Gauss) -> Gauss {
        Gauss::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Neg for &Gauss {
    type Output = Gauss;
    fn neg(self) -> Gauss {
        Gauss::new(-&self.re, -&self.im)
    }
}

impl fmt::Display for Gauss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) if self.im.is_one() => write!(f, "i"),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({}{}{}i)", self.re, sign, self.im.abs())
            }
        }
    }
}

/// Polynomial in `u` over `Q(i)`, dense, lowest degree first, no trailing
/// zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Coeff(Vec<Gauss>);

impl Coeff {
    pub fn new(mut coeffs: Vec<Gauss>) -> Self {
        while coeffs.last().is_some_and(Gauss::is_zero) {
            coeffs.pop();
        }
        Coeff(coeffs)
    }

    pub fn zero() -> Self {
        Coeff(Vec::new())
    }

    pub fn constant(c: Gauss) -> Self {
        Coeff::new(vec![c])
    }

    pub fn one() -> Self {
        Coeff::constant(Gauss::one())
    }

    /// The indeterminate `u`.
    pub fn u() -> Self {
        Coeff::new(vec![Gauss::zero(), Gauss::one()])
    }

    /// Polynomial with integer real coefficients, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Coeff::new(coeffs.iter().map(|&c| Gauss::from_ints(c, 0)).collect())
    }

    pub fn coeffs(&self) -> &[Gauss] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn conj(&self) -> Self {
        Coeff(self.0.iter().map(Gauss::conj).collect())
    }

    pub fn scale(&self, c: &Gauss) -> Self {
        Coeff::new(self.0.iter().map(|x| x * c).collect())
    }

    /// `self(p·u + q)` by Horner's rule.
    pub fn substitute(&self, p: &Gauss, q: &Gauss) -> Self {
        let lin = Coeff::new(vec![q.clone(), p.clone()]);
        let mut acc = Coeff::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * &lin) + &Coeff::constant(c.clone());
        }
        acc
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, o: &Coeff) -> Coeff {
        let n = self.0.len().max(o.0.len());
        let zero = Gauss::zero();
        Coeff::new((0..n).map(|i| self.0.get(i).unwrap_or(&zero) + o.0.get(i).unwrap_or(&zero)).collect())
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, o: &Coeff) -> Coeff {
        self + &-o
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff(self.0.iter().map(|c| -c).collect())
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, o: &Coeff) -> Coeff {
        if self.is_zero() || o.is_zero() {
            return Coeff::zero();
        }
        let mut out = vec![Gauss::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Coeff::new(out)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = if c.is_real() && c.re.is_negative() { (true, -c) } else { (false, c.clone()) };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let var = match deg {
                0 => String::new(),
                1 => "u".to_string(),
                _ => format!("u^{deg}"),
            };
            if deg > 0 && mag == Gauss::one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag}{var}")?;
            }
        }
        Ok(())
    }
}

/// The substitution `u ↦ p·u + q` with `p ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineAut {
    pub p: Gauss,
    pub q: Gauss,
}

impl AffineAut {
    pub fn new(p: Gauss, q: Gauss) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::SingularAutomorphism);
        }
        Ok(AffineAut { p, q })
    }

    pub fn identity() -> Self {
        AffineAut { p: Gauss::one(), q: Gauss::zero() }
    }

    /// `u ↦ u + 1`.
    pub fn shift() -> Self {
        AffineAut { p: Gauss::one(), q: Gauss::one() }
    }

    /// Applies `self` first, then `other`: `b ↦ other(self(b))`.
    pub fn then(&self, other: &AffineAut) -> AffineAut {
        // b(p1 u + q1) with u replaced by p2 u + q2
        AffineAut { p: &self.p * &other.p, q: &(&self.p * &other.q) + &self.q }
    }

    pub fn inverse(&self) -> AffineAut {
        let pinv = self.p.inv().expect("p != 0");
        AffineAut { q: -&(&self.q * &pinv), p: pinv }
    }

    /// `α^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> AffineAut {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = AffineAut::identity();
        for _ in 0..k.unsigned_abs() {
            acc = acc.then(&base);
        }
        acc
    }

    pub fn apply(&self, b: &Coeff) -> Coeff {
        b.substitute(&self.p, &self.q)
    }

    /// Conjugation commutes with `α` on `u` iff `p` and `q` are real.
    pub fn is_star_coherent(&self) -> bool {
        self.p.conj() == self.p && self.q.conj() == self.q
    }
}

impl fmt::Display for AffineAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u -> {}", Coeff::new(vec![self.q.clone(), self.p.clone()]))
    }
}

pub fn check_star_coherent(alpha: &AffineAut) -> bool {
    alpha.is_star_coherent()
}

/// Finite sum `Σ b_k t^k`, equivalently the function `k ↦ b_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewPoly {
    terms: BTreeMap<i64, Coeff>,
    alpha: AffineAut,
}

impl SkewPoly {
    pub fn zero(alpha: AffineAut) -> Self {
        SkewPoly { terms: BTreeMap::new(), alpha }
    }

    pub fn one(alpha: AffineAut) -> Self {
        SkewPoly::monomial(Coeff::one(), 0, alpha)
    }

    /// `b·t^k`.
    pub fn monomial(b: Coeff, k: i64, alpha: AffineAut) -> Self {
        let mut s = SkewPoly::zero(alpha);
        s.add_term(k, b);
        s
    }

    /// `t^k`.
    pub fn t_pow(k: i64, alpha: AffineAut) -> Self {
        SkewPoly::monomial(Coeff::one(), k, alpha)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Coeff)>, alpha: AffineAut) -> Self {
        let mut s = SkewPoly::zero(alpha);
        for (k, b) in terms {
            s.add_term(k, b);
        }
        s
    }

    fn add_term(&mut self, k: i64, b: Coeff) {
        if b.is_zero() {
            return;
        }
        let sum = match self.terms.get(&k) {
            Some(old) => old + &b,
            None => b,
        };
        if sum.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, sum);
        }
    }

    pub fn alpha(&self) -> &AffineAut {
        &self.alpha
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient `b_k`, i.e. the value at `k` in the convolution picture.
    pub fn coeff(&self, k: i64) -> Coeff {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Coeff)> {
        self.terms.iter().map(|(&k, b)| (k, b))
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    fn same_alpha(&self, o: &SkewPoly) -> Result<()> {
        if self.alpha == o.alpha {
            Ok(())
        } else {
            Err(Error::MismatchedAutomorphism)
        }
    }

    pub fn add(&self, o: &SkewPoly) -> Result<SkewPoly> {
        self.same_alpha(o)?;
        let mut s = self.clone();
        for (k, b) in o.terms() {
            s.add_term(k, b.clone());
        }
        Ok(s)
    }

    pub fn sub(&self, o: &SkewPoly) -> Result<SkewPoly> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> SkewPoly {
        SkewPoly { terms: self.terms.iter().map(|(&k, b)| (k, -b)).collect(), alpha: self.alpha.clone() }
    }

    /// Product in normal form: `(a t^m)(b t^n) = a·α^m(b)·t^(m+n)`.
    pub fn skew_mul(&self, o: &SkewPoly) -> Result<SkewPoly> {
        self.same_alpha(o)?;
        let mut out = SkewPoly::zero(self.alpha.clone());
        for (m, a) in self.terms() {
            let twist = self.alpha.pow(m);
            for (n, b) in o.terms() {
                out.add_term(m + n, a * &twist.apply(b));
            }
        }
        Ok(out)
    }

    /// Involution `(b t^k)* = α^(-k)(conj b)·t^(-k)`.
    pub fn skew_star(&self) -> Result<SkewPoly> {
        if !self.alpha.is_star_coherent() {
            return Err(Error::NotStarCoherent);
        }
        let mut out = SkewPoly::zero(self.alpha.clone());
        for (k, b) in self.terms() {
            // (b t^k)* = (t^k)* b* = t^(-k) b*, then move b* left of t^(-k).
            out.add_term(-k, self.alpha.pow(-k).apply(&b.conj()));
        }
        Ok(out)
    }

    /// Twisted convolution `(f g)(k) = Σ_l f(l)·t^l·g(k - l)·t^(-l)`, where
    /// `t^l·c·t^(-l) = α^l(c)`.
    pub fn conv_mul(&self, g: &SkewPoly) -> Result<SkewPoly> {
        self.same_alpha(g)?;
        let (Some((f_lo, f_hi)), Some((g_lo, g_hi))) = (self.support(), g.support()) else {
            return Ok(SkewPoly::zero(self.alpha.clone()));
        };
        let mut out = SkewPoly::zero(self.alpha.clone());
        for k in (f_lo + g_lo)..=(f_hi + g_hi) {
            let mut acc = Coeff::zero();
            for l in f_lo..=f_hi {
                let (fl, gk) = (self.coeff(l), g.coeff(k - l));
                if fl.is_zero() || gk.is_zero() {
                    continue;
                }
                acc = &acc + &(&fl * &self.alpha.pow(l).apply(&gk));
            }
            out.add_term(k, acc);
        }
        Ok(out)
    }

    /// Convolution involution `f*(k) = α^k(conj f(-k))`.
    pub fn conv_star(&self) -> Result<SkewPoly> {
        if !self.alpha.is_star_coherent() {
            return Err(Error::NotStarCoherent);
        }
        let Some((lo, hi)) = self.support() else {
            return Ok(self.clone());
        };
        let mut out = SkewPoly::zero(self.alpha.clone());
        for k in -hi..=-lo {
            out.add_term(k, self.alpha.pow(k).apply(&self.coeff(-k).conj()));
        }
        Ok(out)
    }
}

impl fmt::Display for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(k, b)| {
                let t = match k {
                    0 => String::new(),
                    1 => "t".to_string(),
                    _ => format!("t^{k}"),
                };
                if k == 0 {
                    b.to_string()
                } else if *b == Coeff::one() {
                    t
                } else if b.coeffs().len() == 1 {
                    format!("{b}{t}")
                } else {
                    format!("({b}){t}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn skew_mul(f: &SkewPoly, g: &SkewPoly) -> Result<SkewPoly> {
    f.skew_mul(g)
}

pub fn skew_star(f: &SkewPoly) -> Result<SkewPoly> {
    f.skew_star()
}

pub fn conv_mul(f: &SkewPoly, g: &SkewPoly) -> Result<SkewPoly> {
    f.conv_mul(g)
}

pub fn conv_star(f: &SkewPoly) -> Result<SkewPoly> {
    f.conv_star()
}

/// `X₁X₂ - X₂X₁ - X₁²` for `X₁ = t` and `X₂ = x2_coeff·t` in the ring
/// twisted by `alpha`.
pub fn example2_residual(alpha: &AffineAut, x2_coeff: &Coeff) -> SkewPoly {
    let x1 = SkewPoly::t_pow(1, alpha.clone());
    let x2 = SkewPoly::monomial(x2_coeff.clone(), 1, alpha.clone());
    let (x1x2, x2x1, x1x1) = (
        x1.skew_mul(&x2).expect("same alpha"),
        x2.skew_mul(&x1).expect("same alpha"),
        x1.skew_mul(&x1).expect("same alpha"),
    );
    x1x2.sub(&x2x1).and_then(|d| d.sub(&x1x1)).expect("same alpha")
}

/// Whether `t` and `u·t` satisfy `x₁x₂ - x₂x₁ - x₁² = 0` under `u ↦ u + 1`.
pub fn verify_example2() -> bool {
    example2_residual(&AffineAut::shift(), &Coeff::u()).is_zero()
}

/// Parses `re,im` where each part is an integer or a fraction `a/b`.
pub fn parse_gauss(s: &str) -> Result<Gauss> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [re, im] = parts.as_slice() else {
        return Err(Error::Parse(format!("expected re,im but got {s:?}")));
    };
    let parse = |x: &str| -> Result<BigRational> {
        let r = match x.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in {x:?}")))?;
                let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in {x:?}")))?;
                if d.is_zero() {
                    return Err(Error::ZeroDenominator);
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(x.parse().map_err(|_| Error::Parse(format!("not a rational: {x:?}")))?),
        };
        Ok(r)
    };
    Ok(Gauss::new(parse(re)?, parse(im)?))
}
