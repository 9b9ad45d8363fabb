//! Exact 2×2 integer matrices: the period matrix `A`, the matrices `L_p`,
//! Smith normal form and the cokernel groups `Z²/(I - L)Z²`.

use std::fmt;
use std::mem;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Row-major `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IMat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl IMat2 {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        IMat2 { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    pub fn identity() -> Self {
        IMat2::new(1, 0, 0, 1)
    }

    pub fn zero() -> Self {
        IMat2::new(0, 0, 0, 0)
    }

    pub fn rows(&self) -> [[&BigInt; 2]; 2] {
        [[&self.a, &self.b], [&self.c, &self.d]]
    }

    pub fn mul(&self, o: &IMat2) -> IMat2 {
        IMat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn sub(&self, o: &IMat2) -> IMat2 {
        IMat2 { a: &self.a - &o.a, b: &self.b - &o.b, c: &self.c - &o.c, d: &self.d - &o.d }
    }

    /// `self^e` by binary exponentiation.
    pub fn pow(&self, e: i64) -> Result<IMat2> {
        if e < 0 {
            return Err(Error::NegativeExponent(e));
        }
        let mut e = e as u64;
        let mut base = self.clone();
        let mut acc = IMat2::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }
}

impl fmt::Display for IMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

pub fn mat_mul(m: &IMat2, n: &IMat2) -> IMat2 {
    m.mul(n)
}

pub fn mat_pow(m: &IMat2, e: i64) -> Result<IMat2> {
    m.pow(e)
}

pub fn mat_trace(m: &IMat2) -> BigInt {
    m.trace()
}

pub fn mat_det(m: &IMat2) -> BigInt {
    m.det()
}

/// Product `(a_1 1; 1 0)(a_2 1; 1 0)...(a_n 1; 1 0)` over a period.
pub fn matrix_a(period: &[BigInt]) -> Result<IMat2> {
    if period.is_empty() {
        return Err(Error::EmptyPeriod);
    }
    let mut acc = IMat2::identity();
    for a in period {
        if !a.is_positive() {
            return Err(Error::InvalidPartialQuotient(a.clone()));
        }
        acc = acc.mul(&IMat2::new(a.clone(), 1, 1, 0));
    }
    Ok(acc)
}

/// `L_p = [[T - p, p], [T - p - 1, p]]` where `T = tr(A^π(p))`.
pub fn build_lp(trace: &BigInt, p: &BigInt) -> IMat2 {
    let top = trace - p;
    let l = IMat2 { a: top.clone(), b: p.clone(), c: top - 1, d: p.clone() };
    debug_assert_eq!(IMat2::identity().sub(&l).det(), BigInt::one() + p - trace);
    l
}

/// Finitely generated abelian group `Z/d1 ⊕ Z/d2` in invariant factor form;
/// a factor of 0 is an infinite cyclic summand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub d1: BigInt,
    pub d2: BigInt,
}

impl AbelianGroup {
    /// Group order, or `None` when the group is infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.d1.is_zero() || self.d2.is_zero() {
            None
        } else {
            Some(&self.d1 * &self.d2)
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.d1.is_one() && self.d2.is_one()
    }

    pub fn factors(&self) -> [&BigInt; 2] {
        [&self.d1, &self.d2]
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors()
            .iter()
            .filter(|d| !d.is_one())
            .map(|d| if d.is_zero() { "Z".to_string() } else { format!("Z/{d}") })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Result of [`smith_normal_form`]: `u * m * v = diag`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub u: IMat2,
    pub diag: IMat2,
    pub v: IMat2,
}

// Row and column operations applied to a working matrix while recording
// them in the accumulated transforms.
struct SnfCalc {
    m: [[BigInt; 2]; 2],
    u: [[BigInt; 2]; 2],
    v: [[BigInt; 2]; 2],
}

impl SnfCalc {
    fn swap_rows(&mut self) {
        self.m.swap(0, 1);
        self.u.swap(0, 1);
    }

    fn swap_cols(&mut self) {
        for r in 0..2 {
            self.m[r].swap(0, 1);
            self.v[r].swap(0, 1);
        }
    }

    /// row[dst] -= k * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, k: &BigInt) {
        for c in 0..2 {
            let t = k * &self.m[src][c];
            self.m[dst][c] -= t;
            let t = k * &self.u[src][c];
            self.u[dst][c] -= t;
        }
    }

    /// col[dst] -= k * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, k: &BigInt) {
        for r in 0..2 {
            let t = k * &self.m[r][src];
            self.m[r][dst] -= t;
            let t = k * &self.v[r][src];
            self.v[r][dst] -= t;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..2 {
            self.m[r][c] = -mem::take(&mut self.m[r][c]);
            self.u[r][c] = -mem::take(&mut self.u[r][c]);
        }
    }

    /// Moves the entry of least nonzero magnitude to (0, 0).
    fn pivot_smallest(&mut self) -> bool {
        let mut best: Option<(usize, usize)> = None;
        for r in 0..2 {
            for c in 0..2 {
                if self.m[r][c].is_zero() {
                    continue;
                }
                match best {
                    Some((br, bc)) if self.m[br][bc].abs() <= self.m[r][c].abs() => {}
                    _ => best = Some((r, c)),
                }
            }
        }
        let Some((r, c)) = best else { return false };
        if r == 1 {
            self.swap_rows();
        }
        if c == 1 {
            self.swap_cols();
        }
        true
    }

    fn run(&mut self) {
        loop {
            if !self.pivot_smallest() {
                return;
            }
            let piv = self.m[0][0].clone();
            let k = self.m[1][0].div_floor(&piv);
            self.row_axpy(1, 0, &k);
            let k = self.m[0][1].div_floor(&piv);
            self.col_axpy(1, 0, &k);
            if !self.m[1][0].is_zero() || !self.m[0][1].is_zero() {
                continue;
            }
            if self.m[1][1].is_multiple_of(&piv) {
                break;
            }
            // Pivot does not divide the other diagonal entry: fold row 1
            // into row 0 and reduce again.
            self.row_axpy(0, 1, &BigInt::from(-1));
        }
        for r in 0..2 {
            if self.m[r][r].is_negative() {
                self.negate_row(r);
            }
        }
    }
}

fn to_mat(m: &[[BigInt; 2]; 2]) -> IMat2 {
    IMat2 { a: m[0][0].clone(), b: m[0][1].clone(), c: m[1][0].clone(), d: m[1][1].clone() }
}

/// Smith normal form with nonnegative invariant factors `d1 | d2`.
pub fn smith_normal_form(m: &IMat2) -> Smith {
    let one = BigInt::one;
    let zero = BigInt::zero;
    let mut calc = SnfCalc {
        m: [[m.a.clone(), m.b.clone()], [m.c.clone(), m.d.clone()]],
        u: [[one(), zero()], [zero(), one()]],
        v: [[one(), zero()], [zero(), one()]],
    };
    calc.run();
    Smith { u: to_mat(&calc.u), diag: to_mat(&calc.m), v: to_mat(&calc.v) }
}

/// `Z² / (I - L) Z²`.
pub fn cokernel_group(l: &IMat2) -> AbelianGroup {
    let snf = smith_normal_form(&IMat2::identity().sub(l));
    AbelianGroup { d1: snf.diag.a, d2: snf.diag.d }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_snf(m: &IMat2) -> Smith {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.diag, "UMV != D for {m}");
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        assert!(s.diag.b.is_zero() && s.diag.c.is_zero());
        assert!(!s.diag.a.is_negative() && !s.diag.d.is_negative());
        if s.diag.a.is_zero() {
            assert!(s.diag.d.is_zero());
        } else {
            assert!(s.diag.d.is_multiple_of(&s.diag.a));
        }
        assert_eq!((&s.diag.a * &s.diag.d).abs(), m.det().abs());
        s
    }

    #[test]
    fn period_matrices() {
        assert_eq!(matrix_a(&ints(&[1])).unwrap(), IMat2::new(1, 1, 1, 0));
        assert_eq!(matrix_a(&ints(&[2])).unwrap(), IMat2::new(2, 1, 1, 0));
        assert_eq!(matrix_a(&ints(&[1, 2])).unwrap(), IMat2::new(3, 1, 2, 1));
        assert_eq!(matrix_a(&[]), Err(Error::EmptyPeriod));
        assert!(matrix_a(&ints(&[1, 0])).is_err());
    }

    #[test]
    fn powers() {
        let m = IMat2::new(2, 1, 1, 0);
        assert_eq!(m.pow(2).unwrap(), IMat2::new(5, 2, 2, 1));
        let m4 = m.pow(4).unwrap();
        assert_eq!(m4, IMat2::new(29, 12, 12, 5));
        assert_eq!(m4.trace(), 34.into());
        assert_eq!(m.pow(0).unwrap(), IMat2::identity());
        assert_eq!(m.pow(-1), Err(Error::NegativeExponent(-1)));
        // Binary exponentiation agrees with repeated multiplication.
        let mut acc = IMat2::identity();
        for e in 0..20 {
            assert_eq!(m.pow(e).unwrap(), acc);
            acc = acc.mul(&m);
        }
    }

    #[test]
    fn lp_matrices() {
        let l = build_lp(&34.into(), &3.into());
        assert_eq!(l, IMat2::new(31, 3, 30, 3));
        assert_eq!(IMat2::identity().sub(&l).det(), (-30).into());
        let l = build_lp(&6.into(), &2.into());
        assert_eq!(l, IMat2::new(4, 2, 3, 2));
        assert_eq!(IMat2::identity().sub(&l).det(), (-3).into());
        for p in 2..20 {
            let l = build_lp(&(p + 1).into(), &p.into());
            assert!(IMat2::identity().sub(&l).det().is_zero());
        }
    }

    #[test]
    fn snf_examples() {
        let s = check_snf(&IMat2::new(-30, -3, -30, -2));
        assert_eq!((s.diag.a, s.diag.d), (1.into(), 30.into()));
        let s = check_snf(&IMat2::identity());
        assert_eq!((s.diag.a, s.diag.d), (1.into(), 1.into()));
        let s = check_snf(&IMat2::new(2, 0, 0, 4));
        assert_eq!((s.diag.a, s.diag.d), (2.into(), 4.into()));
        let s = check_snf(&IMat2::new(2, 0, 0, 3));
        assert_eq!((s.diag.a, s.diag.d), (1.into(), 6.into()));
        let s = check_snf(&IMat2::zero());
        assert_eq!((s.diag.a, s.diag.d), (0.into(), 0.into()));
        let s = check_snf(&IMat2::new(0, 0, 0, -5));
        assert_eq!((s.diag.a, s.diag.d), (5.into(), 0.into()));
        let s = check_snf(&IMat2::new(4, 6, 6, 9));
        assert_eq!((s.diag.a, s.diag.d), (1.into(), 0.into()));
    }

    #[test]
    fn cokernels() {
        let g = cokernel_group(&IMat2::new(4, 2, 3, 2));
        assert_eq!(g, AbelianGroup { d1: 1.into(), d2: 3.into() });
        assert_eq!(g.order(), Some(3.into()));
        let g = cokernel_group(&IMat2::new(2, 2, 1, 2));
        assert!(g.is_trivial());
        assert_eq!(g.order(), Some(1.into()));
        let g = cokernel_group(&IMat2::identity());
        assert_eq!(g, AbelianGroup { d1: 0.into(), d2: 0.into() });
        assert_eq!(g.order(), None);
        assert_eq!(g.to_string(), "Z + Z");
        assert_eq!(cokernel_group(&IMat2::new(31, 3, 30, 3)).to_string(), "Z/30");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn snf_sound(a in -1_000_000i64..=1_000_000, b in -1_000_000i64..=1_000_000,
                         c in -1_000_000i64..=1_000_000, d in -1_000_000i64..=1_000_000) {
                check_snf(&IMat2::new(a, b, c, d));
            }

            #[test]
            fn snf_sound_small(a in -6i64..=6, b in -6i64..=6, c in -6i64..=6, d in -6i64..=6) {
                let s = check_snf(&IMat2::new(a, b, c, d));
                // d1 is the gcd of the entries.
                let g = BigInt::from(a).gcd(&b.into()).gcd(&c.into()).gcd(&d.into());
                prop_assert_eq!(s.diag.a, g);
            }

            #[test]
            fn a_is_rotation_invariant(period in proptest::collection::vec(1i64..=9, 1..=6), shift in 0usize..6) {
                let p = ints(&period);
                let mut rot = p.clone();
                rot.rotate_left(shift % p.len());
                let (m, r) = (matrix_a(&p).unwrap(), matrix_a(&rot).unwrap());
                let sign = if p.len().is_multiple_of(2) { 1 } else { -1 };
                prop_assert_eq!(m.det(), BigInt::from(sign));
                prop_assert_eq!(m.trace(), r.trace());
                prop_assert_eq!(m.det(), r.det());
            }

            #[test]
            fn lp_identity(t in -10_000i64..10_000, p in 2i64..10_000) {
                let l = build_lp(&t.into(), &p.into());
                prop_assert_eq!(IMat2::identity().sub(&l).det(), BigInt::from(1 + p - t));
            }
        }
    }
}
