//! Structural verdicts for the preimage tower, decided from valuations.
//!
//! Each public operation is a decision procedure: it reads `(v(c), v(a))`
//! against the threshold ladder `ν_1 < ν_2 < ⋯ < ν_∞`, plus whatever
//! auxiliary hypotheses the caller can certify (roots of unity in the ground
//! field, finite residue field, fixed-point data, residue-orbit reports), and
//! emits a verdict whose every structure tag is backed by an explicit entry
//! in `hypotheses_used`. Nothing here constructs field extensions; the
//! verdicts are claims about Galois and inertia groups up to isomorphism.

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dynamics::{stabilization_level, StabilizationCutoff};
use crate::error::{Error, Result};
use crate::residue::{tame_verdict, ResidueReport, TameVerdict};
use crate::valuation::{serde_rat, serde_rat_opt, GroundField, Rat, ValExt};

/// Valuation regime of `v(c)` relative to the threshold ladder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// Wild, `v(c) < ν_∞`: the tower stabilizes at a finite level.
    BelowNuInfty,
    /// Wild, `v(c) = ν_∞ = -p/(p-1)`: infinite tower, bounded ramification.
    AtNuInfty,
    /// Wild, `ν_∞ < v(c) < 0`: infinitely wildly ramified.
    Between,
    /// Wild, `v(c) ≥ 0`: infinitely wildly ramified.
    NonNegative,
    /// Tame, `v(c) < 0`: the tower stabilizes at level 1.
    TameNegative,
    /// Tame, `v(c) ≥ 0`: decided by the residue-field orbit of 0.
    TameNonNegative,
    /// The archimedean analogue (see `classify_real`).
    Real,
}

/// Ramification verdict for `K_∞/K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ramification {
    Unramified,
    /// Ramification index divides `l`.
    IndexDividesEll,
    FinitelyRamified,
    InfinitelyRamified,
    InfinitelyWildlyRamified,
}

/// Group-structure claims, each tied to the hypotheses recorded alongside it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum GroupTag {
    /// `G(n)` embeds in `(Z/lZ)^n` for every `n`.
    GnElemAbelian,
    /// `G(n)/I(n)` is cyclic of order dividing `l` for every `n`.
    GnModInCyclicOrderDividesEll,
    /// `K_n = K(α_n)` for any single level-`n` preimage `α_n`.
    GeneratedByOnePreimage,
    /// `G(∞) = G(level) = I(∞) = I(level) ≅ (Z/lZ)^level` exactly.
    FullElemAbelian { level: u32 },
    /// `l^(level-r) ≤ #I(level) ≤ #G(level) = #G(∞) ≤ l^level`.
    InertiaSandwich { level: u32, r: u32 },
    /// `v(c) = ν_level`: `I(∞) = I(level) ≤ (Z/lZ)^level`,
    /// `G(∞) = G(level+1) ≤ (Z/lZ)^(level+1)`, and `G(∞)/I(∞) ≤ Z/lZ`.
    BoundaryInertia { level: u32 },
    /// `G(n)/I(n)` is a cyclic `p`-group for every `n`.
    GnModInCyclicPGroup,
    /// `I(n)` is a `p`-group for every `n`.
    InPGroup,
    /// `I(n)` is elementary abelian of order dividing `p^n` for every `n`.
    InElemAbelianOrderDividesPn,
    /// `G(∞)/I(∞) ≅ Z_p`.
    GModIIsZp,
    /// `I(∞)` is an infinite pro-`p` group.
    IInfInfiniteProP,
    /// `I(∞) ≅ (Z/pZ)^∞`.
    IInfElemAbelianInfiniteRank,
    /// `I(∞)` is finite.
    IInfFinite,
    /// `I(∞) = {1}`.
    IInfTrivial,
}

/// Full structural verdict. Serializes to the stable schema
/// `{regime, finite, cutoff, tags[], ramification, shallow_w,
/// degree_exponent, hypotheses[]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeVerdict {
    pub regime: Regime,
    /// `Some(true)`: `[K_∞:K] < ∞`; `Some(false)`: infinite; `None`: not
    /// decided under the supplied hypotheses.
    #[serde(rename = "finite")]
    pub extension_finite: Option<bool>,
    /// Level at which the tower stops growing, when one is certified.
    pub cutoff: Option<StabilizationCutoff>,
    #[serde(rename = "tags")]
    pub group_shape: Vec<GroupTag>,
    pub ramification: Ramification,
    /// Upper-numbering depth `w*` with `G(∞)^w = {1}` for all `w ≥ w*`.
    #[serde(with = "serde_rat_opt")]
    pub shallow_w: Option<Rat>,
    /// Exponent `1 - p^(-r)` in the degree-growth bound `C·B_n^(1-p^(-r))`.
    #[serde(with = "serde_rat_opt")]
    pub degree_exponent: Option<Rat>,
    #[serde(rename = "hypotheses")]
    pub hypotheses_used: Vec<String>,
}

impl RegimeVerdict {
    fn new(regime: Regime, ramification: Ramification) -> Self {
        RegimeVerdict {
            regime,
            extension_finite: None,
            cutoff: None,
            group_shape: Vec::new(),
            ramification,
            shallow_w: None,
            degree_exponent: None,
            hypotheses_used: Vec::new(),
        }
    }

    fn hyp(&mut self, h: &str) {
        if !self.hypotheses_used.iter().any(|x| x == h) {
            self.hypotheses_used.push(h.to_string());
        }
    }

    /// Every tag must arrive with at least one justifying hypothesis.
    fn tag(&mut self, t: GroupTag, hyps: &[&str]) {
        assert!(!hyps.is_empty(), "tag without justification");
        for h in hyps {
            self.hyp(h);
        }
        if !self.group_shape.contains(&t) {
            self.group_shape.push(t);
        }
    }
}

/// Data about a fixed point `b` of `f` (a root of `z^p - z - c`), needed for
/// the inertia verdicts in the `v(c) = ν_∞` regime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointData {
    /// Always `v(c)/p = -1/(p-1)` in the boundary regime.
    #[serde(with = "serde_rat")]
    pub v_b: Rat,
    pub v_a_minus_b: ValExt,
    pub b_in_k: bool,
}

/// Decision procedure for the wild case `l = p`, dispatching on `v(c)`
/// against the ladder `ν_1 < ν_2 < ⋯ < ν_∞ = -p/(p-1)`:
///
/// * `v(c) < ν_∞`: the extension is finite; with `v(a) ≥ v(c)/l` the exact
///   cutoff level is attached, and with `μ_l ⊆ K` the Galois/inertia shape
///   tags applicable to the position of `v(c)` within the ladder.
///   `r` (the largest power with `v(c) ∈ l^r·v(K^×)`) refines the inertia
///   bounds; when omitted it is derived from `e·v(c)`.
/// * `v(c) = ν_∞`: fixed-point data is required, since the ramification
///   verdict is exactly the dichotomy `v(a-b) ≥ 0` (finitely ramified)
///   versus `v(a-b) < 0` (infinitely wildly ramified).
/// * `ν_∞ < v(c) < 0` and `v(c) ≥ 0`: infinitely wildly ramified, with the
///   degree-growth exponent attached in the former regime.
pub fn classify_wild(
    gf: &GroundField,
    vc: &Rat,
    va: &ValExt,
    r: Option<u32>,
    fp: Option<&FixedPointData>,
) -> Result<RegimeVerdict> {
    if !gf.is_wild() {
        return Err(Error::TameModeInput);
    }
    let nu_inf = gf.nu_infinity();
    if *vc < nu_inf {
        classify_wild_below(gf, vc, va, r)
    } else if *vc == nu_inf {
        classify_wild_boundary(gf, vc, va, fp)
    } else if vc.is_negative() {
        classify_wild_between(gf, vc)
    } else {
        let mut v = RegimeVerdict::new(Regime::NonNegative, Ramification::InfinitelyWildlyRamified);
        v.extension_finite = Some(false);
        v.hyp("l = p (wild)");
        v.hyp("v(c) >= 0");
        Ok(v)
    }
}

fn classify_wild_below(
    gf: &GroundField,
    vc: &Rat,
    va: &ValExt,
    r: Option<u32>,
) -> Result<RegimeVerdict> {
    let mut v = RegimeVerdict::new(Regime::BelowNuInfty, Ramification::FinitelyRamified);
    v.extension_finite = Some(true);
    v.hyp("l = p (wild)");
    v.hyp("v(c) < nu_infinity");

    let mu = gf.mu_ell_in_k;
    if mu && va.cmp_rat(vc) == std::cmp::Ordering::Greater {
        let hyps = &["mu_l in K", "v(a) > v(c)", "v(c) < nu_infinity"];
        v.tag(GroupTag::GnElemAbelian, hyps);
        v.tag(GroupTag::GnModInCyclicOrderDividesEll, hyps);
        v.tag(GroupTag::GeneratedByOnePreimage, hyps);
    }

    let vc_over_l = vc / gf.ell_rat();
    match va.cmp_rat(&vc_over_l) {
        std::cmp::Ordering::Less => {}
        at_least => {
            let cut = stabilization_level(vc, va, gf)?;
            v.hyp("v(a) >= v(c)/l");
            v.cutoff = Some(cut);
            if mu && cut.unramified_top {
                v.tag(
                    GroupTag::BoundaryInertia { level: cut.level - 1 },
                    &["mu_l in K", "v(c) = nu_n exactly", "v(a) >= v(c)/l"],
                );
            } else if mu && at_least == std::cmp::Ordering::Greater {
                // Strictly between rungs with the strict hypothesis
                // v(a) > v(c)/l: the inertia-size bounds apply.
                let (r_val, r_hyp) = match r {
                    Some(rv) => (rv, "r supplied: largest with v(c) in l^r v(K^x)"),
                    None => (derive_r(gf, vc)?, "r derived from l-adic valuation of e*v(c)"),
                };
                let hyps = &[
                    "mu_l in K",
                    "nu_(n-1) < v(c) < nu_n",
                    "v(a) > v(c)/l",
                    r_hyp,
                ];
                if r_val == 0 {
                    v.tag(GroupTag::FullElemAbelian { level: cut.level }, hyps);
                } else {
                    v.tag(GroupTag::InertiaSandwich { level: cut.level, r: r_val }, hyps);
                }
            }
        }
    }
    Ok(v)
}

/// Largest `r ≥ 0` with `v(c) ∈ l^r·v(K^×)`, where `v(K^×) = (1/e)·Z`:
/// the `l`-adic valuation of the integer `e·v(c)`.
fn derive_r(gf: &GroundField, vc: &Rat) -> Result<u32> {
    let scaled = vc * Rat::from_integer(gf.e().into());
    if !scaled.denom().is_one() {
        return Err(Error::Precondition(format!(
            "v(c) = {vc} does not lie in v(K^x) = (1/{})Z; pass r explicitly",
            gf.e()
        )));
    }
    let mut n = scaled.numer().magnitude().clone();
    let ell = BigUint::from(gf.ell());
    let mut r = 0u32;
    while !n.is_zero() && (&n % &ell).is_zero() {
        n /= &ell;
        r += 1;
    }
    Ok(r)
}

fn classify_wild_boundary(
    gf: &GroundField,
    vc: &Rat,
    va: &ValExt,
    fp: Option<&FixedPointData>,
) -> Result<RegimeVerdict> {
    let fp = fp.ok_or(Error::MissingFixedPointData)?;
    let expected_v_b = vc / Rat::from_integer(gf.p().into());
    if fp.v_b != expected_v_b {
        return Err(Error::Precondition(format!(
            "fixed point of z^p - z - c has v(b) = v(c)/p = {expected_v_b}, got {}",
            fp.v_b
        )));
    }

    let mut v = RegimeVerdict::new(Regime::AtNuInfty, Ramification::FinitelyRamified);
    v.hyp("l = p (wild)");
    v.hyp("v(c) = nu_infinity = -p/(p-1)");

    if gf.k_finite {
        v.extension_finite = Some(false);
        v.hyp("k finite");
    }

    v.tag(GroupTag::InPGroup, &["v(c) = nu_infinity = -p/(p-1)"]);
    if gf.mu_ell_in_k && gf.k_finite {
        let hyps = &["mu_l in K", "k finite"];
        v.tag(GroupTag::GnModInCyclicPGroup, hyps);
        v.tag(GroupTag::GModIIsZp, hyps);
    }
    let va_above_vc = va.cmp_rat(vc) == std::cmp::Ordering::Greater;
    if va_above_vc {
        v.tag(GroupTag::InElemAbelianOrderDividesPn, &["v(a) > v(c)"]);
    }

    if fp.v_a_minus_b.cmp_rat(&Rat::zero()) == std::cmp::Ordering::Less {
        // `a` lies outside the closed unit disk around the fixed point.
        v.ramification = Ramification::InfinitelyWildlyRamified;
        v.extension_finite = Some(false);
        v.tag(GroupTag::IInfInfiniteProP, &["v(a - b) < 0"]);
        if va_above_vc {
            v.tag(
                GroupTag::IInfElemAbelianInfiniteRank,
                &["v(a - b) < 0", "v(a) > v(c)"],
            );
        }
    } else {
        v.tag(GroupTag::IInfFinite, &["v(a - b) >= 0"]);
        if fp.b_in_k {
            v.ramification = Ramification::Unramified;
            v.tag(GroupTag::IInfTrivial, &["v(a - b) >= 0", "b in K"]);
        }
        if va_above_vc && fp.b_in_k {
            v.shallow_w = Some(shallow_ramification_bound(gf.e(), &fp.v_a_minus_b));
            v.hyp("shallow bound needs v(a) > v(c) and b in K");
        }
    }
    Ok(v)
}

fn classify_wild_between(gf: &GroundField, vc: &Rat) -> Result<RegimeVerdict> {
    let mut v = RegimeVerdict::new(Regime::Between, Ramification::InfinitelyWildlyRamified);
    v.extension_finite = Some(false);
    v.hyp("l = p (wild)");
    v.hyp("nu_infinity < v(c) < 0");
    let r = growth_r(gf, vc)?;
    v.degree_exponent = Some(one_minus_p_to_minus_r(gf.p(), r));
    v.hyp("degree exponent 1 - p^(-r) with r least such that v(c) < -p/((p^r - 1)(p - 1))");
    Ok(v)
}

/// Decision procedure for the tame case `p ∤ l`:
///
/// * `v(c) < 0`: finite extension; cutoff at level 1 when `v(a) ≥ v(c)/l`;
///   Galois-shape tags when `v(a) > v(c)` and `μ_l ⊆ K`.
/// * `v(c) ≥ 0` with `min{v(a), v(c)} ≠ 0` and `v(a) ≠ v(c)`: the preimage
///   valuations have unbounded denominator, so infinitely ramified.
/// * otherwise (`v(a) ≥ 0` forced): the verdict is read off the forward
///   orbit of `0` in the residue field — a residue report is required.
pub fn classify_tame(
    gf: &GroundField,
    vc: &Rat,
    va: &ValExt,
    residue: Option<&ResidueReport>,
) -> Result<RegimeVerdict> {
    if gf.is_wild() {
        return Err(Error::WildModeInput);
    }
    if vc.is_negative() {
        let mut v = RegimeVerdict::new(Regime::TameNegative, Ramification::FinitelyRamified);
        v.extension_finite = Some(true);
        v.hyp("tame (p does not divide l)");
        v.hyp("v(c) < 0");
        if va.cmp_rat(&(vc / gf.ell_rat())) != std::cmp::Ordering::Less {
            v.cutoff = Some(stabilization_level(vc, va, gf)?);
            v.hyp("v(a) >= v(c)/l");
        }
        if gf.mu_ell_in_k && va.cmp_rat(vc) == std::cmp::Ordering::Greater {
            let hyps = &["mu_l in K", "v(a) > v(c)", "v(c) < 0"];
            v.tag(GroupTag::GnElemAbelian, hyps);
            v.tag(GroupTag::GnModInCyclicOrderDividesEll, hyps);
            v.tag(GroupTag::GeneratedByOnePreimage, hyps);
        }
        return Ok(v);
    }

    let min_is_zero = match va.cmp_rat(vc) {
        std::cmp::Ordering::Less => matches!(va, ValExt::Finite(x) if x.is_zero()),
        _ => vc.is_zero(),
    };
    let va_ne_vc = va.cmp_rat(vc) != std::cmp::Ordering::Equal;
    if !min_is_zero && va_ne_vc {
        let mut v =
            RegimeVerdict::new(Regime::TameNonNegative, Ramification::InfinitelyRamified);
        v.extension_finite = Some(false);
        v.hyp("tame (p does not divide l)");
        v.hyp("v(c) >= 0");
        v.hyp("min{v(a), v(c)} != 0 and v(a) != v(c): preimage valuations min/l^n");
        return Ok(v);
    }

    let report = residue.ok_or(Error::MissingResidueReport)?;
    let mut v = RegimeVerdict::new(Regime::TameNonNegative, Ramification::Unramified);
    v.hyp("tame (p does not divide l)");
    v.hyp("v(c) >= 0 and v(a) >= 0");
    match tame_verdict(report, None)? {
        TameVerdict::Unramified => {
            v.ramification = Ramification::Unramified;
            v.hyp("residue orbit: a mod m not in the forward orbit of 0 mod m");
        }
        TameVerdict::IndexDividesL => {
            v.ramification = Ramification::IndexDividesEll;
            v.hyp("residue orbit: 0 mod m strictly preperiodic");
        }
        TameVerdict::UnramifiedSingleCycle => {
            v.ramification = Ramification::Unramified;
            v.hyp("residue orbit: 0 and a in a single cycle mod m");
            v.hyp("exact cycle: 0 and a in a single rational cycle");
        }
        TameVerdict::InfinitelyRamified => {
            v.ramification = Ramification::InfinitelyRamified;
            v.extension_finite = Some(false);
            v.hyp("residue orbit: 0 and a in a single cycle mod m");
            v.hyp("exact cycle fails: the residue cycle does not lift");
        }
    }
    Ok(v)
}

/// Exact degree-growth data for the wild tower when `v(c) < 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeGrowthBound {
    /// The unconditional bound `B_n = (p-1)·∏_{m=1..n} p^(p^m)`.
    #[serde(with = "crate::valuation::serde_biguint")]
    pub trivial_bound: BigUint,
    /// Least `r ≥ 1` with `v(c) < -p/((p^r - 1)(p - 1))`.
    pub r: u32,
    /// `1 - p^(-r)`: the bound improves to `C·B_n^exponent`.
    #[serde(with = "serde_rat")]
    pub exponent: Rat,
    /// Pairs `(m, x)` asserting `[K_(m+r+1) : K_(m+r)] ≤ p^x` with
    /// `x = p^m·(p^r - 1)`, for `1 ≤ m ≤ n - r - 1`.
    #[serde(with = "serde_step_list")]
    pub per_step: Vec<(u32, BigUint)>,
}

/// `(u32, BigUint)` pairs with the big integer as a decimal string.
mod serde_step_list {
    use num_bigint::BigUint;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[(u32, BigUint)], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<(u32, String)> = v.iter().map(|(m, x)| (*m, x.to_string())).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(u32, BigUint)>, D::Error> {
        Vec::<(u32, String)>::deserialize(d)?
            .into_iter()
            .map(|(m, s)| s.parse::<BigUint>().map(|x| (m, x)).map_err(D::Error::custom))
            .collect()
    }
}

/// Least `r ≥ 1` with `v(c) < -p/((p^r - 1)(p - 1))`; exists iff `v(c) < 0`.
fn growth_r(gf: &GroundField, vc: &Rat) -> Result<u32> {
    if !gf.is_wild() {
        return Err(Error::TameModeInput);
    }
    if !vc.is_negative() {
        return Err(Error::NoValidR);
    }
    let p = Rat::from_integer(gf.p().into());
    let p_minus_1 = Rat::from_integer((gf.p() - 1).into());
    let mut p_r = p.clone();
    for r in 1.. {
        let threshold = -&p / ((&p_r - Rat::one()) * &p_minus_1);
        if *vc < threshold {
            return Ok(r);
        }
        p_r *= &p;
    }
    unreachable!("threshold tends to 0 from below, so some r works for v(c) < 0")
}

fn one_minus_p_to_minus_r(p: u64, r: u32) -> Rat {
    Rat::one() - Rat::new(1.into(), BigUint::from(p).pow(r).into())
}

/// Degree-growth bound for `[K_n:K]` in the wild case with `v(c) < 0`:
/// the trivial bound `B_n`, the least exponent-improving `r`, the exponent
/// `1 - p^(-r)`, and the per-step Kummer bounds. The per-step list assumes
/// `v(a) ≥ v(c)`, under which every iterated preimage already has valuation
/// `≥ v(c)` from level 1 on.
pub fn degree_growth_bound(gf: &GroundField, vc: &Rat, n: u32) -> Result<DegreeGrowthBound> {
    let r = growth_r(gf, vc)?;
    let p = BigUint::from(gf.p());
    let mut trivial = &p - BigUint::one();
    for m in 1..=n {
        trivial *= p.pow(gf.p().pow(m).try_into().map_err(|_| {
            Error::Precondition(format!("p^{m} exceeds exponent range for the trivial bound"))
        })?);
    }
    let p_r_minus_1 = p.pow(r) - BigUint::one();
    let mut per_step = Vec::new();
    let mut m = 1u32;
    while m + r + 1 <= n {
        per_step.push((m, p.pow(m) * &p_r_minus_1));
        m += 1;
    }
    Ok(DegreeGrowthBound {
        trivial_bound: trivial,
        r,
        exponent: one_minus_p_to_minus_r(gf.p(), r),
        per_step,
    })
}

/// Whether `1 + ε` is a `p`-th power in `K`, by the Newton polygon of
/// `(1+x)^p - (1+ε)`: guaranteed when `v(ε) > p/(p-1)`, strictly.
pub fn is_one_plus_eps_pth_power(v_eps: &ValExt, gf: &GroundField) -> Result<bool> {
    if !gf.is_wild() {
        return Err(Error::TameModeInput);
    }
    let threshold = Rat::new(gf.p().into(), (gf.p() - 1).into());
    Ok(match v_eps {
        ValExt::Infinity => true,
        ValExt::Finite(v) => *v > threshold,
    })
}

/// Whether the level-`(m+r)` product `∏ (α_(m+r) + c)` over `f^(-r)(α_m)` is
/// a `p`-th power: writing it as `t^p·(1 - (c+α_m)/t^p)` with
/// `v(t) = p^(r-1)·v(c)`, the second factor is close enough to 1 exactly when
/// `v(c + α_m) - p^r·v(c) > p/(p-1)`. The worst case `v(c + α_m) = v(c)`
/// (guaranteed by `v(α_m) ≥ v(c)`) is used.
pub fn kummer_product_reduction(
    vc: &Rat,
    v_alpha_m: &ValExt,
    r: u32,
    gf: &GroundField,
) -> Result<bool> {
    if !gf.is_wild() {
        return Err(Error::TameModeInput);
    }
    if !vc.is_negative() {
        return Err(Error::Precondition("product reduction needs v(c) < 0".into()));
    }
    if v_alpha_m.cmp_rat(vc) == std::cmp::Ordering::Less {
        return Err(Error::Precondition(
            "product reduction needs v(alpha_m) >= v(c)".into(),
        ));
    }
    let v_sum = match v_alpha_m {
        ValExt::Infinity => vc.clone(),
        ValExt::Finite(v) => {
            if v == vc {
                vc.clone()
            } else {
                std::cmp::min(v, vc).clone()
            }
        }
    };
    let p_r = Rat::from_integer(BigUint::from(gf.p()).pow(r).into());
    let threshold = Rat::new(gf.p().into(), (gf.p() - 1).into());
    Ok(v_sum - p_r * vc > threshold)
}

/// Depth `w* = 2e·|v(a-b)|` past which every upper-numbering ramification
/// group `G(∞)^w` is trivial; `0` when `v(a-b) ≥ 0` (then `I(∞) = {1}`
/// already, granted `b ∈ K`).
pub fn shallow_ramification_bound(e: u32, v_a_minus_b: &ValExt) -> Rat {
    match v_a_minus_b {
        ValExt::Infinity => Rat::zero(),
        ValExt::Finite(v) if !v.is_negative() => Rat::zero(),
        ValExt::Finite(v) => Rat::from_integer((2 * e).into()) * -v,
    }
}

/// Verdict for the archimedean analogue: does the full preimage tree of `a`
/// under `z^k - c` stay inside the real numbers?
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RealVerdict {
    /// Every iterated preimage is real: `k = 2`, `c ≥ 2`, `-c ≤ a ≤ c² - c`.
    AllReal,
    /// Some iterated preimage is strictly complex.
    Complex,
}

/// `k > 2` or `c < 2` always force complex preimages; for `k = 2`, `c ≥ 2`
/// the tree stays real exactly when `a ∈ [-c, c² - c]`, endpoints included.
pub fn classify_real(k: u32, c: &Rat, a: &Rat) -> Result<RealVerdict> {
    if c.is_zero() {
        return Err(Error::Precondition("c = 0 is excluded".into()));
    }
    if k < 2 {
        return Err(Error::Precondition("degree k must be at least 2".into()));
    }
    if k > 2 {
        return Ok(RealVerdict::Complex);
    }
    let two = Rat::from_integer(2.into());
    if *c < two {
        return Ok(RealVerdict::Complex);
    }
    let upper = c * c - c;
    if *a >= -c.clone() && *a <= upper {
        Ok(RealVerdict::AllReal)
    } else {
        Ok(RealVerdict::Complex)
    }
}
