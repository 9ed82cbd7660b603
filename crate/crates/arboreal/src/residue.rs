//! Residue-field orbit analysis for `f(z) = z^l - c`.
//!
//! The tame classification hinges on the forward orbit of `0` under `f` in
//! the residue field: whether `a` ever appears in it, whether `0` is strictly
//! preperiodic, and — when `0` and `a` share a single residue cycle — whether
//! that cycle lifts to an exact cycle over the rationals. The last question
//! reduces to finitely many exact iterations: a residue cycle of length `m`
//! through `0` lifts iff `f^m(0) = 0` exactly, since the fixed point of
//! `f^m` over the `m`-th residue is unique.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::valuation::{is_prime, Rat};

/// `F_q` for `q = p^d`, `d ≤ 4`, in a polynomial basis modulo a monic
/// irreducible found by search. Elements are coefficient vectors of length
/// `d` with entries in `0..p`, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fq {
    p: u64,
    d: u32,
    /// `x^d` rewritten in the basis: coefficients of `1, x, …, x^(d-1)`.
    reduction: Vec<u64>,
}

pub type FqElem = Vec<u64>;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(p)) as u64
}

/// Product of two coefficient vectors modulo `p`, no degree reduction.
fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(ai, bj, p)) % p;
        }
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m` over `F_p`.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let deg_m = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > deg_m {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - deg_m;
        if lead != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let sub = mulmod(lead, mi, p);
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
    }
    if r.is_empty() {
        r.push(0);
    }
    while r.len() > 1 && *r.last().unwrap() == 0 {
        r.pop();
    }
    r
}

fn poly_gcd_degree(a: &[u64], b: &[u64], p: u64) -> usize {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    while !(b.len() == 1 && b[0] == 0) {
        // Make b monic before reducing: scale by the inverse of its lead.
        let lead = *b.last().unwrap();
        let inv = modpow(lead, p - 2, p);
        let monic: Vec<u64> = b.iter().map(|&x| mulmod(x, inv, p)).collect();
        let r = poly_rem(&a, &monic, p);
        a = b;
        b = r;
    }
    a.len() - 1
}

fn modpow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

/// `x^(p^k) mod m` over `F_p`, by `k` rounds of `p`-th powering.
fn frobenius_power(k: u32, m: &[u64], p: u64) -> Vec<u64> {
    let mut t = vec![0, 1]; // the polynomial x
    for _ in 0..k {
        // t^p by square-and-multiply on the exponent p.
        let mut acc = vec![1u64];
        let mut base = t.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_rem(&poly_mul(&acc, &base, p), m, p);
            }
            base = poly_rem(&poly_mul(&base, &base, p), m, p);
            e >>= 1;
        }
        t = acc;
    }
    t
}

fn is_irreducible(m: &[u64], p: u64) -> bool {
    let d = (m.len() - 1) as u32;
    // x^(p^d) ≡ x (mod m) ...
    let mut frob = frobenius_power(d, m, p);
    if frob.len() < 2 {
        frob.resize(2, 0);
    }
    frob[1] = (frob[1] + p - 1) % p;
    while frob.len() > 1 && *frob.last().unwrap() == 0 {
        frob.pop();
    }
    if !(frob.len() == 1 && frob[0] == 0) {
        return false;
    }
    // ... and x^(p^(d/r)) - x coprime to m for every prime r | d.
    for r in [2u32, 3] {
        if d % r == 0 {
            let mut g = frobenius_power(d / r, m, p);
            if g.len() < 2 {
                g.resize(2, 0);
            }
            g[1] = (g[1] + p - 1) % p;
            while g.len() > 1 && *g.last().unwrap() == 0 {
                g.pop();
            }
            if g.len() == 1 && g[0] == 0 {
                return false;
            }
            if poly_gcd_degree(m, &g, p) != 0 {
                return false;
            }
        }
    }
    true
}

impl Fq {
    pub fn new(p: u64, d: u32) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if d == 0 || d > 4 {
            return Err(Error::Precondition(format!(
                "residue field degree {d} outside 1..=4"
            )));
        }
        if d == 1 {
            return Ok(Fq { p, d, reduction: vec![0] });
        }
        // Search monic m = x^d + (lower coefficients); lexicographic by index.
        let total = p.pow(d);
        for idx in 0..total {
            let mut lower = Vec::with_capacity(d as usize);
            let mut rem = idx;
            for _ in 0..d {
                lower.push(rem % p);
                rem /= p;
            }
            let mut m = lower.clone();
            m.push(1);
            if is_irreducible(&m, p) {
                // x^d ≡ -lower in the quotient.
                let reduction = lower.iter().map(|&x| (p - x) % p).collect();
                return Ok(Fq { p, d, reduction });
            }
        }
        Err(Error::NoIrreducibleFound(d as usize, p))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.d)
    }

    pub fn zero(&self) -> FqElem {
        vec![0; self.d as usize]
    }

    pub fn one(&self) -> FqElem {
        let mut e = self.zero();
        e[0] = 1;
        e
    }

    pub fn from_coeffs(&self, coeffs: Vec<u64>) -> Result<FqElem> {
        if coeffs.len() != self.d as usize {
            return Err(Error::Precondition(format!(
                "element needs {} coefficients, got {}",
                self.d,
                coeffs.len()
            )));
        }
        Ok(coeffs.into_iter().map(|x| x % self.p).collect())
    }

    /// Image of a `p`-integral rational in the prime subfield.
    pub fn from_rat(&self, r: &Rat) -> Result<FqElem> {
        let p = BigInt::from(self.p);
        let den = r.denom();
        if (den % &p).is_zero() {
            return Err(Error::NotPIntegral(format!(
                "{} has {} in its denominator",
                r, self.p
            )));
        }
        let num_red = ((r.numer() % &p) + &p) % &p;
        let den_red = ((den % &p) + &p) % &p;
        let n = num_red.to_u64().unwrap();
        let dinv = modpow(den_red.to_u64().unwrap(), self.p - 2, self.p);
        let mut e = self.zero();
        e[0] = mulmod(n, dinv, self.p);
        Ok(e)
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        a.iter().map(|&x| (self.p - x) % self.p).collect()
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let mut prod = poly_mul(a, b, self.p);
        // Fold degrees ≥ d down through x^d = reduction, highest first.
        while prod.len() > self.d as usize {
            let lead = prod.pop().unwrap();
            if lead == 0 {
                continue;
            }
            let shift = prod.len() - self.d as usize;
            for (i, &ri) in self.reduction.iter().enumerate() {
                prod[shift + i] = (prod[shift + i] + mulmod(lead, ri, self.p)) % self.p;
            }
        }
        prod.resize(self.d as usize, 0);
        prod
    }

    pub fn pow(&self, a: &FqElem, mut e: u64) -> FqElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `x^l - c`.
    pub fn eval_f(&self, ell: u32, c: &FqElem, x: &FqElem) -> FqElem {
        self.sub(&self.pow(x, u64::from(ell)), c)
    }

    /// All `q` elements, counting order on coefficients.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q()).map(move |idx| {
            let mut rem = idx;
            let mut e = self.zero();
            for slot in e.iter_mut() {
                *slot = rem % self.p;
                rem /= self.p;
            }
            e
        })
    }
}

/// Forward orbit of `0` in the residue field, with the flags the tame
/// classification reads off it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueReport {
    pub q: u64,
    pub p: u64,
    pub degree: u32,
    /// `0, f(0), f²(0), …` up to the first repeat, as coefficient vectors.
    pub orbit_of_zero: Vec<FqElem>,
    pub tail_length: u32,
    pub cycle_length: u32,
    pub a_in_forward_orbit_of_zero: bool,
    pub zero_strictly_preperiodic: bool,
    pub zero_and_a_in_single_cycle_mod_m: bool,
    /// Filled by `exact_cycle_check`, never by `orbit_analysis`.
    pub exact_single_cycle: Option<bool>,
}

/// Iterates `x ↦ x^l - c` from `0` in `F_q` with full cycle detection.
/// Tame only: `p` must not divide `l`.
pub fn orbit_analysis(ell: u32, fq: &Fq, c_bar: &FqElem, a_bar: &FqElem) -> Result<ResidueReport> {
    if u64::from(ell) % fq.p() == 0 {
        return Err(Error::WildModeInput);
    }
    let mut orbit: Vec<FqElem> = vec![fq.zero()];
    let (tail, cycle) = loop {
        let next = fq.eval_f(ell, c_bar, orbit.last().unwrap());
        match orbit.iter().position(|x| x == &next) {
            Some(j) => break (j as u32, (orbit.len() - j) as u32),
            None => orbit.push(next),
        }
    };
    let a_in = orbit.contains(a_bar);
    Ok(ResidueReport {
        q: fq.q(),
        p: fq.p(),
        degree: fq.degree(),
        tail_length: tail,
        cycle_length: cycle,
        a_in_forward_orbit_of_zero: a_in,
        zero_strictly_preperiodic: tail >= 1,
        zero_and_a_in_single_cycle_mod_m: tail == 0 && a_in,
        orbit_of_zero: orbit,
        exact_single_cycle: None,
    })
}

/// Whether the single residue cycle through `0` and `a` lifts to an exact
/// rational cycle: `f^m(0) = 0` with `m` the residue period, and `a = f^i(0)`
/// for some `i < m`. Requires `c`, `a` `p`-integral and a report whose
/// single-cycle flag is set.
pub fn exact_cycle_check(
    ell: u32,
    c: &Rat,
    a: &Rat,
    p: u64,
    report: &ResidueReport,
) -> Result<bool> {
    for (name, r) in [("c", c), ("a", a)] {
        if (r.denom() % BigInt::from(p)).is_zero() {
            return Err(Error::NotPIntegral(format!("{name} = {r} is not {p}-integral")));
        }
    }
    if !report.zero_and_a_in_single_cycle_mod_m {
        return Err(Error::NotSingleCycleModM(format!(
            "tail {} and a-in-orbit {}",
            report.tail_length, report.a_in_forward_orbit_of_zero
        )));
    }
    let mut x = Rat::zero();
    let mut a_hit = a == &x;
    for _ in 0..report.cycle_length {
        x = iterate_once(ell, c, &x);
        if &x == a {
            a_hit = true;
        }
    }
    // a = f^m(0) = 0 was already counted at i = 0.
    Ok(x.is_zero() && a_hit)
}

fn iterate_once(ell: u32, c: &Rat, x: &Rat) -> Rat {
    let mut acc = Rat::from_integer(1.into());
    for _ in 0..ell {
        acc *= x;
    }
    acc - c
}

/// The four-way tame outcome read from a residue report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TameVerdict {
    /// `a` never appears in the forward orbit of `0`: everything unramified.
    Unramified,
    /// `0` strictly preperiodic and `a` in its orbit: ramification index
    /// divides `l` at every level.
    IndexDividesL,
    /// `0` and `a` in a single exact cycle: unramified again.
    UnramifiedSingleCycle,
    /// Single residue cycle that does not lift exactly: infinitely ramified.
    InfinitelyRamified,
}

/// `exact` overrides the report's stored flag when given; the single-cycle
/// branch requires one of the two to be present.
pub fn tame_verdict(report: &ResidueReport, exact: Option<bool>) -> Result<TameVerdict> {
    if !report.a_in_forward_orbit_of_zero {
        return Ok(TameVerdict::Unramified);
    }
    if report.zero_strictly_preperiodic {
        return Ok(TameVerdict::IndexDividesL);
    }
    match exact.or(report.exact_single_cycle) {
        Some(true) => Ok(TameVerdict::UnramifiedSingleCycle),
        Some(false) => Ok(TameVerdict::InfinitelyRamified),
        None => Err(Error::MissingExactCycleFlag),
    }
}
