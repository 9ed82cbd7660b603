//! Exact valuation arithmetic.
//!
//! Valuations take values in `Q ∪ {∞}` with `∞` absorbing under addition and
//! larger than every finite value. Over a wild ground field (`l = p`) the
//! normalization is `v(p) = 1`; in tame mode `v(l) = 0`, which collapses every
//! threshold below to zero.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

/// `num/den` from machine integers. Panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Canonical wire form `num/den` (denominator always explicit, always positive).
pub fn rat_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `num` or `num/den`; whitespace is not tolerated.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::MalformedRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

/// A valuation value: finite rational or `∞` (the valuation of zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ValExt {
    Finite(Rat),
    Infinity,
}

impl ValExt {
    pub fn finite(r: Rat) -> Self {
        ValExt::Finite(r)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ValExt::Infinity)
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            ValExt::Finite(r) => Some(r),
            ValExt::Infinity => None,
        }
    }

    /// Sum, with `∞` absorbing.
    pub fn add(&self, other: &ValExt) -> ValExt {
        match (self, other) {
            (ValExt::Finite(a), ValExt::Finite(b)) => ValExt::Finite(a + b),
            _ => ValExt::Infinity,
        }
    }

    pub fn add_rat(&self, other: &Rat) -> ValExt {
        match self {
            ValExt::Finite(a) => ValExt::Finite(a + other),
            ValExt::Infinity => ValExt::Infinity,
        }
    }

    /// Division by a positive integer (`∞` fixed).
    pub fn div_int(&self, d: u32) -> ValExt {
        match self {
            ValExt::Finite(a) => ValExt::Finite(a / rat_int(i64::from(d))),
            ValExt::Infinity => ValExt::Infinity,
        }
    }

    /// Compare against a finite rational.
    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        match self {
            ValExt::Finite(a) => a.cmp(r),
            ValExt::Infinity => Ordering::Greater,
        }
    }
}

impl From<Rat> for ValExt {
    fn from(r: Rat) -> Self {
        ValExt::Finite(r)
    }
}

impl PartialOrd for ValExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ValExt {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ValExt::Finite(a), ValExt::Finite(b)) => a.cmp(b),
            (ValExt::Finite(_), ValExt::Infinity) => Ordering::Less,
            (ValExt::Infinity, ValExt::Finite(_)) => Ordering::Greater,
            (ValExt::Infinity, ValExt::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ValExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValExt::Finite(r) => write!(f, "{}", rat_string(r)),
            ValExt::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for ValExt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ValExt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_val_ext(&s).map_err(serde::de::Error::custom)
    }
}

/// Accepts `inf` or anything `parse_rat` accepts.
pub fn parse_val_ext(s: &str) -> Result<ValExt> {
    if s == "inf" {
        Ok(ValExt::Infinity)
    } else {
        parse_rat(s).map(ValExt::Finite)
    }
}

/// Serde adapters serializing `Rat` as the canonical `num/den` string.
pub mod serde_rat {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rat_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rat_opt {
    use super::*;

    pub fn serialize<S: Serializer>(
        r: &Option<Rat>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&rat_string(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rat>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse_rat(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

pub mod serde_rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(
        v: &[Rat],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(rat_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rat>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rat(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Big naturals on the wire as decimal strings (they count subgroup orders
/// and pair multiplicities, which overflow u64 quickly).
pub mod serde_biguint {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        n: &BigUint,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn bigint_val(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a rational, `v(0) = ∞`, normalized by `v(p) = 1`.
pub fn padic_val(q: &Rat, p: u64) -> Result<ValExt> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if q.is_zero() {
        return Ok(ValExt::Infinity);
    }
    let vn = bigint_val(q.numer(), p) as i64;
    let vd = bigint_val(q.denom(), p) as i64;
    Ok(ValExt::Finite(rat_int(vn - vd)))
}

/// Tame (`p ∤ l`, possibly `p = 0`) versus wild (`l = p`) ground behaviour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Tame,
    Wild,
}

/// Discrete-valued ground field data for `f(z) = z^l - c`.
///
/// Only the facts that drive the classification are kept: the degree `l`, the
/// residue characteristic, the ramification index `e` over `Q_p` (wild mode),
/// and whether `K` contains the l-th roots of unity / has finite residue field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundField {
    mode: Mode,
    ell: u32,
    p: u64,
    e: u32,
    pub mu_ell_in_k: bool,
    pub k_finite: bool,
}

impl GroundField {
    /// Tame ground field: `p ∤ l`; `p = 0` means residue characteristic zero.
    pub fn tame(ell: u32, p: u64, mu_ell_in_k: bool, k_finite: bool) -> Result<Self> {
        if ell < 2 {
            return Err(Error::InvalidGroundField(format!("l = {ell} < 2")));
        }
        if p != 0 {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if u64::from(ell) % p == 0 {
                return Err(Error::InvalidGroundField(format!(
                    "tame mode requires p = {p} not dividing l = {ell}"
                )));
            }
        }
        Ok(GroundField { mode: Mode::Tame, ell, p, e: 1, mu_ell_in_k, k_finite })
    }

    /// Wild ground field: `l = p`, `K/Q_p` with ramification index `e`.
    pub fn wild(p: u64, e: u32, mu_ell_in_k: bool, k_finite: bool) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > u64::from(u32::MAX) {
            return Err(Error::InvalidGroundField(format!("p = {p} too large for l")));
        }
        if e == 0 {
            return Err(Error::InvalidGroundField("e = 0".into()));
        }
        Ok(GroundField { mode: Mode::Wild, ell: p as u32, p, e, mu_ell_in_k, k_finite })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_wild(&self) -> bool {
        self.mode == Mode::Wild
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn ell_rat(&self) -> Rat {
        rat_int(i64::from(self.ell))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// `v(l)`: 1 in wild mode, 0 in tame mode.
    pub fn v_ell(&self) -> Rat {
        match self.mode {
            Mode::Wild => Rat::one(),
            Mode::Tame => Rat::zero(),
        }
    }

    /// `v(ζ - 1) = v(l)/(l-1)` for a primitive l-th root of unity `ζ ≠ 1`.
    pub fn v_zeta_minus_one(&self) -> Rat {
        self.v_ell() / rat_int(i64::from(self.ell) - 1)
    }

    /// Threshold `ν_n = -l^(n+1) / ((l^n - 1)(l - 1)) · v(l)`, `n ≥ 1`.
    pub fn nu(&self, n: u32) -> Result<Rat> {
        if n == 0 {
            return Err(Error::InvalidNuIndex);
        }
        if self.mode == Mode::Tame {
            return Ok(Rat::zero());
        }
        let l = BigInt::from(self.ell);
        let ln = l.pow(n);
        let num = -(&ln * &l);
        let den = (&ln - BigInt::one()) * (&l - BigInt::one());
        Ok(Rat::new(num, den))
    }

    /// Limit threshold `ν_∞ = -l/(l-1) · v(l)`.
    pub fn nu_infinity(&self) -> Rat {
        if self.mode == Mode::Tame {
            return Rat::zero();
        }
        let l = BigInt::from(self.ell);
        Rat::new(-l.clone(), l - BigInt::one())
    }
}

/// Index for `nu_threshold`: a finite level `n ≥ 1` or the limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NuIndex {
    Level(u32),
    Infinity,
}

/// `ν_n` or `ν_∞` as an exact rational. `ν_0` is `-∞` by convention and is
/// not representable here; the classifier treats the `n = 1` lower bound as
/// vacuous instead.
pub fn nu_threshold(gf: &GroundField, n: NuIndex) -> Result<Rat> {
    match n {
        NuIndex::Level(n) => gf.nu(n),
        NuIndex::Infinity => Ok(gf.nu_infinity()),
    }
}
