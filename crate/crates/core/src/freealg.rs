//! Free associative algebra `Q<x₁, x₂>` with word rewriting, used to reduce
//! modulo `x₁x₂ - x₂x₁ - x₁² = 0` and to test whether the involution
//! `x₁* = x₂` preserves a defining relation.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X1,
    X2,
}

impl Letter {
    fn swap(self) -> Letter {
        match self {
            Letter::X1 => Letter::X2,
            Letter::X2 => Letter::X1,
        }
    }
}

/// A word over `{x₁, x₂}`, ordered degree-lexicographically with `x₂ > x₁`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, o: &Word) -> Word {
        Word(self.0.iter().chain(o.0.iter()).copied().collect())
    }

    /// Start positions of every occurrence of `pat`.
    fn occurrences(&self, pat: &Word) -> Vec<usize> {
        if pat.is_empty() || pat.len() > self.len() {
            return Vec::new();
        }
        self.0.windows(pat.len()).enumerate().filter(|(_, w)| *w == pat.0.as_slice()).map(|(i, _)| i).collect()
    }
}

impl Ord for Word {
    fn cmp(&self, o: &Self) -> Ordering {
        self.len().cmp(&o.len()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let run = self.0[i..].iter().take_while(|&&m| m == l).count();
            let name = match l {
                Letter::X1 => "x1",
                Letter::X2 => "x2",
            };
            parts.push(if run == 1 { name.to_string() } else { format!("{name}^{run}") });
            i += run;
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Rational linear combination of words; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, BigRational>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        NCPoly::term(BigRational::one(), Word::empty())
    }

    pub fn x1() -> Self {
        NCPoly::word(&[Letter::X1])
    }

    pub fn x2() -> Self {
        NCPoly::word(&[Letter::X2])
    }

    pub fn word(letters: &[Letter]) -> Self {
        NCPoly::term(BigRational::one(), Word(letters.to_vec()))
    }

    pub fn term(c: BigRational, w: Word) -> Self {
        let mut p = NCPoly::zero();
        p.add_term(w, c);
        p
    }

    fn add_term(&mut self, w: Word, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&w) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(w, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &BigRational)> {
        self.terms.iter()
    }

    /// Largest word in deglex order.
    pub fn leading_word(&self) -> Option<&Word> {
        self.terms.keys().next_back()
    }

    pub fn add(&self, o: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in o.terms() {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in self.terms() {
            out.add_term(w.clone(), c * k);
        }
        out
    }

    pub fn sub(&self, o: &NCPoly) -> NCPoly {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn mul(&self, o: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w1, c1) in self.terms() {
            for (w2, c2) in o.terms() {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    /// Anti-automorphism swapping `x₁ ↔ x₂`: each word is reversed and its
    /// letters swapped.
    pub fn star_image(&self) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in self.terms() {
            out.add_term(Word(w.0.iter().rev().map(|l| l.swap()).collect()), c.clone());
        }
        out
    }
}

impl fmt::Display for NCPoly {
    /// Terms in increasing deglex order, e.g. `x1^2 - x2^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "{w}")?;
            } else if w.is_empty() {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*{w}")?;
            }
        }
        Ok(())
    }
}

pub fn nc_mul(f: &NCPoly, g: &NCPoly) -> NCPoly {
    f.mul(g)
}

pub fn star_image(f: &NCPoly) -> NCPoly {
    f.star_image()
}

/// Which occurrence of a rule's left-hand side is rewritten first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteStrategy {
    Leftmost,
    Rightmost,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: NCPoly,
}

/// Ordered rewrite rules `word → polynomial`, each strictly decreasing in
/// deglex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteSystem {
    rules: Vec<Rule>,
}

impl RewriteSystem {
    /// Builds the system, rejecting rules whose right-hand side does not
    /// lie strictly below the left-hand word.
    pub fn new(rules: Vec<Rule>) -> Result<Self> {
        for r in &rules {
            if r.lhs.is_empty() || r.rhs.leading_word().is_some_and(|w| w >= &r.lhs) {
                return Err(Error::Parse(format!("rule {} -> {} does not decrease", r.lhs, r.rhs)));
            }
        }
        Ok(RewriteSystem { rules })
    }

    /// Orients the relation `rel = 0` at its leading word.
    pub fn from_relation(rel: &NCPoly) -> Result<Self> {
        let lead = rel.leading_word().ok_or_else(|| Error::Parse("zero relation".into()))?.clone();
        let lc = rel.terms.get(&lead).expect("leading term").clone();
        let tail = rel.sub(&NCPoly::term(lc.clone(), lead.clone()));
        let rhs = tail.scale(&-(BigRational::one() / lc));
        RewriteSystem::new(vec![Rule { lhs: lead, rhs }])
    }

    /// `x₂x₁ → x₁x₂ - x₁²`.
    pub fn u_infinity() -> Self {
        RewriteSystem::from_relation(&u_infinity_relation()).expect("valid orientation")
    }

    /// `x₂x₁ → x₁x₂`.
    pub fn commutative() -> Self {
        RewriteSystem::from_relation(&commutator()).expect("valid orientation")
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Overlaps between left-hand sides: pairs `(i, j, k)` where a proper
    /// suffix of length `k` of rule `i` is a prefix of rule `j`, plus
    /// inclusions. An overlap-free system is confluent without completion.
    pub fn overlaps(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (i, a) in self.rules.iter().enumerate() {
            for (j, b) in self.rules.iter().enumerate() {
                let (a, b) = (&a.lhs.0, &b.lhs.0);
                for k in 1..a.len().min(b.len() + 1) {
                    if a[a.len() - k..] == b[..k] {
                        out.push((i, j, k));
                    }
                }
                if i != j && b.len() <= a.len() && a.windows(b.len()).any(|w| w == b.as_slice()) {
                    out.push((i, j, b.len()));
                }
            }
        }
        out
    }

    fn rewrite_once(&self, f: &NCPoly, strategy: RewriteStrategy) -> Option<NCPoly> {
        // The largest reducible word goes first, which keeps the number of
        // steps bounded by the deglex well-order.
        for (w, c) in f.terms().rev() {
            for rule in &self.rules {
                let occ = w.occurrences(&rule.lhs);
                let pos = match strategy {
                    RewriteStrategy::Leftmost => occ.first(),
                    RewriteStrategy::Rightmost => occ.last(),
                };
                if let Some(&pos) = pos {
                    let prefix = NCPoly::word(&w.0[..pos]);
                    let suffix = NCPoly::word(&w.0[pos + rule.lhs.len()..]);
                    let replaced = prefix.mul(&rule.rhs).mul(&suffix).scale(c);
                    let rest = f.sub(&NCPoly::term(c.clone(), w.clone()));
                    return Some(rest.add(&replaced));
                }
            }
        }
        None
    }

    pub fn reduce_with(&self, f: &NCPoly, strategy: RewriteStrategy) -> NCPoly {
        let mut cur = f.clone();
        while let Some(next) = self.rewrite_once(&cur, strategy) {
            cur = next;
        }
        cur
    }

    /// Normal form, rewriting leftmost occurrences.
    pub fn reduce(&self, f: &NCPoly) -> NCPoly {
        self.reduce_with(f, RewriteStrategy::Leftmost)
    }

    pub fn is_normal(&self, f: &NCPoly) -> bool {
        f.terms().all(|(w, _)| self.rules.iter().all(|r| w.occurrences(&r.lhs).is_empty()))
    }
}

pub fn reduce(f: &NCPoly, rs: &RewriteSystem) -> NCPoly {
    rs.reduce(f)
}

/// `x₁x₂ - x₂x₁ - x₁²`.
pub fn u_infinity_relation() -> NCPoly {
    use Letter::*;
    NCPoly::word(&[X1, X2]).sub(&NCPoly::word(&[X2, X1])).sub(&NCPoly::word(&[X1, X1]))
}

/// `x₁x₂ - x₂x₁`.
pub fn commutator() -> NCPoly {
    use Letter::*;
    NCPoly::word(&[X1, X2]).sub(&NCPoly::word(&[X2, X1]))
}

/// Outcome of [`relation_preserved`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preservation {
    pub preserved: bool,
    /// Normal form of the starred relation.
    pub residual: NCPoly,
}

/// Whether the involution maps the relation back into the ideal it
/// generates, i.e. whether `reduce(star(rel))` vanishes.
pub fn relation_preserved(rel: &NCPoly, rs: &RewriteSystem) -> Result<Preservation> {
    if !rs.reduce(rel).is_zero() {
        return Err(Error::NotInIdeal);
    }
    let residual = rs.reduce(&rel.star_image());
    Ok(Preservation { preserved: residual.is_zero(), residual })
}

/// Integer coefficient helper for tests and callers building polynomials.
pub fn int_coeff(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
