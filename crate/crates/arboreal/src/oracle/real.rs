//! Depth-limited check that every iterated preimage of `a` under
//! `f(z) = z^2 - c` stays real, by exploring the binary preimage tree with
//! rigorous enclosures.
//!
//! The children of a node `x` solve `z^2 = c + x`, so they are real exactly
//! when `c + x ≥ 0`. Rational node values are kept exact (a rational node's
//! parent is rational too, so every rational value in the tree is reached
//! exactly), which decides the boundary `c + x = 0` symbolically. Irrational
//! values are enclosed in dyadic intervals; an interval strictly below zero
//! proves a complex child, and an interval straddling zero triggers a restart
//! of the whole search at doubled precision, since the enclosed value is
//! irrational and therefore nonzero. `Undecided` is returned only when the
//! precision cap is reached.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::valuation::Rat;

/// Verdict of the depth-limited tree exploration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RealCheckOutcome {
    /// Every preimage down to the requested depth is real.
    AllRealToDepth,
    /// Some depth-`depth` preimage is provably non-real.
    ComplexAtDepth { depth: u32 },
    /// An enclosure still straddled zero at the precision cap.
    Undecided,
}

/// `mantissa · 2^exponent`; exponents stay ≤ 0 in this module.
#[derive(Clone, Debug)]
struct Dyadic {
    m: BigInt,
    e: i64,
}

impl Dyadic {
    fn sign(&self) -> i8 {
        match self.m.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    fn add(&self, other: &Dyadic) -> Dyadic {
        let e = self.e.min(other.e);
        let m = (&self.m << (self.e - e) as u32) + (&other.m << (other.e - e) as u32);
        Dyadic { m, e }
    }

    fn neg(&self) -> Dyadic {
        Dyadic { m: -&self.m, e: self.e }
    }

    /// Largest dyadic with error below `2^-prec` that is `≤ √self`.
    /// Requires `self ≥ 0`.
    fn sqrt_down(&self, prec: u32) -> Dyadic {
        debug_assert!(self.sign() >= 0);
        let (w, p) = self.sqrt_scaled(prec);
        Dyadic { m: w, e: -p }
    }

    /// Smallest convenient dyadic `≥ √self`. Requires `self ≥ 0`.
    fn sqrt_up(&self, prec: u32) -> Dyadic {
        debug_assert!(self.sign() >= 0);
        let (mut w, p) = self.sqrt_scaled(prec);
        let shifted = &self.m << (self.e + 2 * p) as u32;
        if &w * &w < shifted {
            w += 1;
        }
        Dyadic { m: w, e: -p }
    }

    /// `floor(2^p √value)` with `p ≥ prec` chosen so the radicand is integral.
    fn sqrt_scaled(&self, prec: u32) -> (BigInt, i64) {
        let mut p = i64::from(prec);
        if self.e + 2 * p < 0 {
            p = (-self.e + 1) / 2 + 1;
        }
        let shifted = &self.m << (self.e + 2 * p) as u32;
        (shifted.sqrt(), p)
    }
}

fn dyadic_floor(q: &Rat, prec: u32) -> Dyadic {
    let scaled = q.numer() << prec;
    Dyadic { m: scaled.div_floor(q.denom()), e: -i64::from(prec) }
}

fn dyadic_ceil(q: &Rat, prec: u32) -> Dyadic {
    let scaled = q.numer() << prec;
    Dyadic { m: scaled.div_ceil(q.denom()), e: -i64::from(prec) }
}

/// `√q` when it is rational: both parts of the reduced fraction must be
/// perfect squares. Requires `q ≥ 0`.
fn rat_sqrt(q: &Rat) -> Option<Rat> {
    let rn = q.numer().sqrt();
    if &rn * &rn != *q.numer() {
        return None;
    }
    let rd = q.denom().sqrt();
    if &rd * &rd != *q.denom() {
        return None;
    }
    Some(Rat::new(rn, rd))
}

/// A preimage-tree node value: exact rational, or a dyadic enclosure of an
/// irrational.
enum Node {
    Exact(Rat),
    Box(Dyadic, Dyadic),
}

enum Step {
    AllReal,
    Complex(u32),
    Refine,
}

struct Search<'a> {
    c: &'a Rat,
    c_lo: Dyadic,
    c_hi: Dyadic,
    depth: u32,
    prec: u32,
}

impl Search<'_> {
    fn descend(&self, node: &Node, d: u32) -> Step {
        if d == self.depth {
            return Step::AllReal;
        }
        match node {
            Node::Exact(x) => {
                let s = self.c + x;
                if s.is_negative() {
                    return Step::Complex(d + 1);
                }
                if s.is_zero() {
                    // Both children coincide at 0; one subtree suffices.
                    return self.descend(&Node::Exact(Rat::zero()), d + 1);
                }
                if let Some(r) = rat_sqrt(&s) {
                    // Negative child first: escapes happen at the most
                    // negative value, so this finds minimal witness depths.
                    match self.descend(&Node::Exact(-r.clone()), d + 1) {
                        Step::AllReal => self.descend(&Node::Exact(r), d + 1),
                        other => other,
                    }
                } else {
                    let lo = dyadic_floor(&s, self.prec).sqrt_down(self.prec);
                    let hi = dyadic_ceil(&s, self.prec).sqrt_up(self.prec);
                    self.both_children(lo, hi, d)
                }
            }
            Node::Box(lo, hi) => {
                let s_lo = self.c_lo.add(lo);
                let s_hi = self.c_hi.add(hi);
                if s_hi.sign() < 0 {
                    return Step::Complex(d + 1);
                }
                if s_lo.sign() <= 0 {
                    // The enclosed value is irrational, hence nonzero; a
                    // tighter enclosure will decide the sign.
                    return Step::Refine;
                }
                self.both_children(
                    s_lo.sqrt_down(self.prec),
                    s_hi.sqrt_up(self.prec),
                    d,
                )
            }
        }
    }

    fn both_children(&self, lo: Dyadic, hi: Dyadic, d: u32) -> Step {
        match self.descend(&Node::Box(hi.neg(), lo.neg()), d + 1) {
            Step::AllReal => self.descend(&Node::Box(lo, hi), d + 1),
            other => other,
        }
    }
}

/// Explores the preimage tree of `a` under `z^2 - c` down to `depth`,
/// restarting with doubled working precision (up to `precision` bits) whenever
/// an enclosure is too loose to decide a sign.
pub fn real_all_real_check(
    k: u32,
    c: &Rat,
    a: &Rat,
    depth: u32,
    precision: u32,
) -> Result<RealCheckOutcome> {
    if k != 2 {
        return Err(Error::Precondition(
            "tree exploration is implemented for k = 2 only".into(),
        ));
    }
    if c.is_zero() {
        return Err(Error::Precondition("c = 0 is excluded".into()));
    }
    let cap = precision.max(1);
    let mut prec = 64u32.min(cap);
    loop {
        let search = Search {
            c,
            c_lo: dyadic_floor(c, prec),
            c_hi: dyadic_ceil(c, prec),
            depth,
            prec,
        };
        match search.descend(&Node::Exact(a.clone()), 0) {
            Step::AllReal => return Ok(RealCheckOutcome::AllRealToDepth),
            Step::Complex(d) => return Ok(RealCheckOutcome::ComplexAtDepth { depth: d }),
            Step::Refine => {
                if prec >= cap {
                    return Ok(RealCheckOutcome::Undecided);
                }
                prec = prec.saturating_mul(2).min(cap);
            }
        }
    }
}
