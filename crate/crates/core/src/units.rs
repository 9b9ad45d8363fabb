//! Pseudo-lattices `Z + Zθ`, fundamental units of their multiplier rings and
//! the index `π(p)` of the fundamental unit in the conductor-`p` sub-order.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intmat::{matrix_a, IMat2};
use crate::quadratic::QuadraticIrrational;

/// Default iteration cap for [`pi_index`].
pub const DEFAULT_SEARCH_CAP: u64 = 1_000_000;

/// The number `x + yθ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderElt {
    pub x: BigInt,
    pub y: BigInt,
    pub theta: QuadraticIrrational,
}

/// The pseudo-lattice `Z + (fθ)Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubOrder {
    pub theta: QuadraticIrrational,
    pub conductor: BigInt,
}

impl SubOrder {
    pub fn new(theta: QuadraticIrrational, conductor: impl Into<BigInt>) -> Result<Self> {
        let conductor = conductor.into();
        if conductor < BigInt::one() {
            return Err(Error::InvalidConductor);
        }
        Ok(SubOrder { theta, conductor })
    }

    pub fn maximal(theta: QuadraticIrrational) -> Self {
        SubOrder { theta, conductor: BigInt::one() }
    }

    /// The generator `fθ` of the sub-lattice.
    pub fn generator(&self) -> QuadraticIrrational {
        self.theta.scale(&self.conductor)
    }

    /// Discriminant of the multiplier ring of `Z + (fθ)Z`.
    pub fn discriminant(&self) -> BigInt {
        let (a, b, c) = self.generator().min_poly();
        &b * &b - BigInt::from(4) * a * c
    }

    /// Whether `e` lies in `Z + (fθ)Z`.
    pub fn contains(&self, e: &OrderElt) -> bool {
        e.theta == self.theta && e.y.is_multiple_of(&self.conductor)
    }
}

fn ratio_to_int(r: &BigRational) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

impl OrderElt {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, theta: QuadraticIrrational) -> Self {
        OrderElt { x: x.into(), y: y.into(), theta }
    }

    pub fn one(theta: QuadraticIrrational) -> Self {
        OrderElt::new(1, 0, theta)
    }

    /// Algebraic trace `2x + y·tr(θ)`.
    pub fn trace(&self) -> BigRational {
        let ctn = self.theta.conj_trace_norm();
        BigRational::from_integer(BigInt::from(2) * &self.x) + ctn.trace * BigRational::from_integer(self.y.clone())
    }

    /// Algebraic norm `x² + xy·tr(θ) + y²·N(θ)`.
    pub fn norm(&self) -> BigRational {
        let ctn = self.theta.conj_trace_norm();
        let (x, y) = (BigRational::from_integer(self.x.clone()), BigRational::from_integer(self.y.clone()));
        &x * &x + &x * &y * ctn.trace + &y * &y * ctn.norm
    }

    pub fn is_unit(&self) -> bool {
        self.norm().abs().is_one()
    }

    pub fn mul(&self, o: &OrderElt) -> Result<OrderElt> {
        if self.theta != o.theta {
            return Err(Error::MismatchedTheta);
        }
        // θ² = tr(θ)·θ - N(θ)
        let ctn = self.theta.conj_trace_norm();
        let yy = BigRational::from_integer(&self.y * &o.y);
        let x = BigRational::from_integer(&self.x * &o.x) - &yy * &ctn.norm;
        let y = BigRational::from_integer(&self.x * &o.y + &o.x * &self.y) + &yy * &ctn.trace;
        match (ratio_to_int(&x), ratio_to_int(&y)) {
            (Some(x), Some(y)) => Ok(OrderElt { x, y, theta: self.theta.clone() }),
            _ => Err(Error::NotInOrder(format!("({x}) + ({y})θ"))),
        }
    }

    pub fn pow(&self, e: u64) -> Result<OrderElt> {
        let mut acc = OrderElt::one(self.theta.clone());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for OrderElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}θ", self.x, self.y)
    }
}

pub fn elt_mul(a: &OrderElt, b: &OrderElt) -> Result<OrderElt> {
    a.mul(b)
}

pub fn elt_pow(a: &OrderElt, e: u64) -> Result<OrderElt> {
    a.pow(e)
}

/// Exact square root of a nonnegative rational, if it is a square.
fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&(&sn * &sn) == n && &(&sd * &sd) == d).then(|| BigRational::new(sn, sd))
}

/// Least unit `ε > 1` of the multiplier ring of `Z + (fθ)Z`, written in the
/// basis `{1, θ}`.
///
/// The purely periodic tail `y` of the expansion of `fθ` is fixed by the
/// period matrix `[[a, b], [c, d]]`, and `c·y + d` is the fundamental unit.
/// It is recovered from the matrix trace and determinant alone.
pub fn fundamental_unit(order: &SubOrder) -> Result<OrderElt> {
    let cf = order.generator().cf_expand();
    let m = matrix_a(&cf.period)?;
    let (tr, nm) = (m.trace(), m.det());
    let disc = &tr * &tr - BigInt::from(4) * &nm;
    // ε = (tr + √disc)/2 and √disc = s·√D for a positive rational s.
    let theta = &order.theta;
    let s = rational_sqrt(&BigRational::new(disc, theta.d().clone()))
        .expect("unit discriminant is a square multiple of the radicand");
    // √D = Qθ - P
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let x = (BigRational::from_integer(tr) - &s * BigRational::from_integer(theta.p().clone())) * &half;
    let y = &s * BigRational::from_integer(theta.q().clone()) * &half;
    match (ratio_to_int(&x), ratio_to_int(&y)) {
        (Some(x), Some(y)) => Ok(OrderElt { x, y, theta: theta.clone() }),
        _ => Err(Error::NotInOrder(format!("({x}) + ({y})θ"))),
    }
}

/// Least `k >= 1` with `ε^k ∈ Z + (pθ)Z`, where `ε` is the fundamental unit
/// of the full pseudo-lattice.
pub fn pi_index(theta: &QuadraticIrrational, p: &BigInt, cap: u64) -> Result<u64> {
    if p < &BigInt::from(2) {
        return Err(Error::InvalidModulus(p.clone()));
    }
    let eps = fundamental_unit(&SubOrder::maximal(theta.clone()))?;
    let mut power = eps.clone();
    for k in 1..=cap {
        if power.y.is_multiple_of(p) {
            return Ok(k);
        }
        power = power.mul(&eps)?;
    }
    Err(Error::SearchCapExceeded(cap))
}

/// Integer matrix of multiplication by a unit `e` on the basis `{1, ω}` of
/// the multiplier ring, where `ω = aθ` and `a` leads the primitive minimal
/// polynomial of `θ`. Trace and determinant equal the trace and norm of `e`.
pub fn matrix_of(e: &OrderElt) -> Result<IMat2> {
    let norm = e.norm();
    if !norm.abs().is_one() {
        return Err(Error::NotAUnit(norm.to_string()));
    }
    let (a, b, c) = e.theta.min_poly();
    // ω = aθ satisfies ω² + bω + ac = 0.
    let (yw, rem) = e.y.div_rem(&a);
    if !rem.is_zero() {
        return Err(Error::NotInOrder(e.to_string()));
    }
    let tr_w = -b;
    let nm_w = a * c;
    Ok(IMat2 {
        a: e.x.clone(),
        b: -&yw * nm_w,
        c: yw.clone(),
        d: &e.x + &yw * tr_w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(p: i64, d: i64, q: i64) -> QuadraticIrrational {
        QuadraticIrrational::new(p, d, q).unwrap()
    }

    fn int(r: BigRational) -> BigInt {
        assert!(r.is_integer());
        r.to_integer()
    }

    /// Least unit of the order of discriminant `disc`, as (trace, norm),
    /// from a sweep over `X² - disc·Y² = ±4` with `Y <= limit`.
    fn pell_sweep(disc: &BigInt, limit: u64) -> Option<(BigInt, BigInt)> {
        let four = BigInt::from(4);
        let mut y = BigInt::one();
        while y <= BigInt::from(limit) {
            let t = disc * &y * &y;
            for (rhs, norm) in [(&t - &four, -1), (&t + &four, 1)] {
                if rhs.is_positive() {
                    let x = rhs.sqrt();
                    if x.clone() * &x == rhs {
                        return Some((x, norm.into()));
                    }
                }
            }
            y += 1;
        }
        None
    }

    #[test]
    fn multiplication() {
        let t = qi(0, 2, 1);
        let e = OrderElt::new(1, 1, t.clone());
        assert_eq!(e.mul(&OrderElt::one(t.clone())).unwrap(), e);
        assert_eq!(e.mul(&e).unwrap(), OrderElt::new(3, 2, t.clone()));
        // φ = 1 + θ with θ = (-1+√5)/2; θ² = -θ + 1 so φ² = 2 + θ = φ + 1.
        let g = qi(-1, 5, 2);
        let phi = OrderElt::new(1, 1, g.clone());
        let phi2 = phi.mul(&phi).unwrap();
        assert_eq!(phi2, OrderElt::new(2, 1, g.clone()));
        assert_eq!(phi2.mul(&phi).unwrap(), OrderElt::new(3, 2, g.clone()));
        assert_eq!(phi.mul(&OrderElt::one(t)), Err(Error::MismatchedTheta));
    }

    #[test]
    fn products_leaving_the_lattice_are_rejected() {
        // θ = (1+√3)/3 is not an algebraic integer: θ² is not in Z + Zθ.
        let t = qi(1, 3, 3);
        let th = OrderElt::new(0, 1, t);
        assert!(matches!(th.mul(&th), Err(Error::NotInOrder(_))));
    }

    #[test]
    fn fundamental_units() {
        let t = qi(-1, 2, 1);
        let e = fundamental_unit(&SubOrder::maximal(t.clone())).unwrap();
        assert_eq!(e, OrderElt::new(2, 1, t.clone()));
        let g = qi(-1, 5, 2);
        assert_eq!(fundamental_unit(&SubOrder::maximal(g.clone())).unwrap(), OrderElt::new(1, 1, g));
        // conductor 3: 17 + 12√2 = 29 + 12θ
        let e3 = fundamental_unit(&SubOrder::new(t.clone(), 3).unwrap()).unwrap();
        assert_eq!(e3, OrderElt::new(29, 12, t.clone()));
        assert_eq!(e3, e.pow(4).unwrap());
        assert_eq!(int(e3.trace()), 34.into());
        assert!(SubOrder::new(t, 0).is_err());
    }

    #[test]
    fn fundamental_unit_matches_pell_sweep() {
        let thetas = [qi(-1, 2, 1), qi(-1, 5, 2), qi(-1, 3, 1), qi(0, 7, 1), qi(1, 13, 2), qi(2, 19, 3)];
        let mut checked = 0;
        for t in thetas {
            for f in 1..=7 {
                let order = SubOrder::new(t.clone(), f).unwrap();
                let e = fundamental_unit(&order).unwrap();
                assert!(e.is_unit());
                let Some((tr, nm)) = pell_sweep(&order.discriminant(), 10_000) else { continue };
                assert_eq!((int(e.trace()), int(e.norm())), (tr, nm), "θ={t} f={f}");
                checked += 1;
            }
        }
        assert!(checked >= 38);
    }

    #[test]
    fn pi_examples() {
        let t = qi(-1, 2, 1);
        assert_eq!(pi_index(&t, &2.into(), DEFAULT_SEARCH_CAP).unwrap(), 2);
        assert_eq!(pi_index(&t, &3.into(), DEFAULT_SEARCH_CAP).unwrap(), 4);
        let g = qi(-1, 5, 2);
        assert_eq!(pi_index(&g, &2.into(), DEFAULT_SEARCH_CAP).unwrap(), 3);
        assert_eq!(pi_index(&g, &1.into(), DEFAULT_SEARCH_CAP), Err(Error::InvalidModulus(1.into())));
        assert_eq!(pi_index(&t, &3.into(), 3), Err(Error::SearchCapExceeded(3)));
    }

    #[test]
    fn golden_pi_is_fibonacci_entry_point() {
        // θ-coefficient of φ^k is F_k, so π(m) is the least k with m | F_k.
        let g = qi(-1, 5, 2);
        let mut fib = vec![0u64, 1];
        for i in 2..60 {
            fib.push(fib[i - 1] + fib[i - 2]);
        }
        for m in 2u64..30 {
            let expect = (1..60).find(|&k| fib[k] % m == 0).unwrap() as u64;
            assert_eq!(pi_index(&g, &m.into(), DEFAULT_SEARCH_CAP).unwrap(), expect);
        }
    }

    #[test]
    fn unit_matrices() {
        let t = qi(-1, 2, 1);
        let m = matrix_of(&OrderElt::new(2, 1, t.clone())).unwrap();
        assert_eq!((m.trace(), m.det()), (2.into(), (-1).into()));
        let g = qi(-1, 5, 2);
        let m = matrix_of(&OrderElt::new(1, 1, g)).unwrap();
        assert_eq!((m.trace(), m.det()), (1.into(), (-1).into()));
        let m = matrix_of(&OrderElt::new(29, 12, t.clone())).unwrap();
        assert_eq!((m.trace(), m.det()), (34.into(), 1.into()));
        assert!(matches!(matrix_of(&OrderElt::new(2, 0, t)), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn unit_matrix_for_non_integral_theta() {
        // θ = (1+√3)/3 satisfies 9θ² - 6θ - 2 = 0, so the multiplier ring is Z[9θ].
        let t = qi(1, 3, 3);
        let e = fundamental_unit(&SubOrder::maximal(t.clone())).unwrap();
        let m = matrix_of(&e).unwrap();
        assert_eq!(BigRational::from_integer(m.trace()), e.trace());
        assert_eq!(BigRational::from_integer(m.det()), e.norm());
    }

    #[test]
    fn unit_group_law_and_growth() {
        for t in [qi(-1, 2, 1), qi(-1, 5, 2), qi(-1, 3, 1)] {
            let e = fundamental_unit(&SubOrder::maximal(t)).unwrap();
            let n = e.norm();
            let mut prev = BigInt::zero();
            for k in 1..=20u64 {
                let ek = e.pow(k).unwrap();
                assert_eq!(ek.norm(), num_traits::pow(n.clone(), k as usize));
                // F_1 = F_2 for the golden unit, so growth is strict from k = 3.
                if k >= 3 {
                    assert!(ek.y > prev);
                } else {
                    assert!(ek.y >= prev);
                }
                prev = ek.y;
            }
        }
    }

    #[test]
    fn traces_of_unit_powers_match_period_matrix() {
        for t in [qi(-1, 2, 1), qi(-1, 5, 2), qi(-1, 3, 1), qi(1, 3, 3)] {
            let e = fundamental_unit(&SubOrder::maximal(t.clone())).unwrap();
            let a = matrix_a(&t.cf_expand().period).unwrap();
            for k in 1..=10 {
                let mk = matrix_of(&e.pow(k as u64).unwrap()).unwrap();
                assert_eq!(mk.trace(), a.pow(k).unwrap().trace());
            }
        }
    }
}
