//! Break filtrations and Herbrand transforms.
//!
//! A filtration here is an order function, not a group: the right-continuous
//! step function `u ↦ |G_u|` through a finite list of breaks. That is enough
//! to carry the Herbrand transform `φ(u) = ∫₀ᵘ dt/(G₀:G_t)`, its inverse `ψ`,
//! and transport between lower and upper numbering, all in exact rational
//! arithmetic.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::valuation::{parse_rat, rat_string, Rat};

/// Non-increasing step function of subgroup orders in lower numbering.
///
/// An entry `(u, o)` says the order becomes `o` at `u` and stays there until
/// the next break; the function is constant at the last order from the last
/// break on. The first break must sit at `u = 0` (the inertia order), breaks
/// are strictly increasing in `u`, and each order strictly divides the one
/// before it (subgroup chain, no stuttering).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BreakFiltration {
    breaks: Vec<(Rat, BigUint)>,
}

impl BreakFiltration {
    pub fn new(breaks: Vec<(Rat, BigUint)>) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidFiltration(msg.into()));
        if breaks.is_empty() {
            return bad("no breaks");
        }
        if !breaks[0].0.is_zero() {
            return bad("first break must be at u = 0");
        }
        for (u, o) in &breaks {
            if u.is_negative() {
                return bad("negative break position");
            }
            if o.is_zero() {
                return bad("zero order");
            }
        }
        for w in breaks.windows(2) {
            if w[0].0 >= w[1].0 {
                return bad("break positions must strictly increase");
            }
            if w[1].1 >= w[0].1 {
                return bad("orders must strictly decrease");
            }
            if !w[0].1.is_multiple_of(&w[1].1) {
                return bad("each order must divide the previous one");
            }
        }
        Ok(BreakFiltration { breaks })
    }

    /// Single-entry filtration of constant order (trivial: no drop ever).
    pub fn constant(order: BigUint) -> Result<Self> {
        BreakFiltration::new(vec![(Rat::zero(), order)])
    }

    pub fn breaks(&self) -> &[(Rat, BigUint)] {
        &self.breaks
    }

    /// Inertia order `|G₀|`.
    pub fn inertia_order(&self) -> &BigUint {
        &self.breaks[0].1
    }

    /// Order at parameter `u ≥ 0`.
    pub fn order_at(&self, u: &Rat) -> &BigUint {
        assert!(!u.is_negative(), "order_at needs u >= 0");
        let i = self.breaks.partition_point(|(b, _)| b <= u);
        &self.breaks[i - 1].1
    }

    /// Position of the break where the order drops to 1, if it ever does.
    pub fn trivialization_break(&self) -> Option<&Rat> {
        let (u, o) = self.breaks.last().unwrap();
        o.is_one().then_some(u)
    }

    /// `φ` evaluated at every break position, aligned with `self.breaks`.
    fn phi_at_breaks(&self) -> Vec<Rat> {
        let o0 = &self.breaks[0].1;
        let mut acc = Rat::zero();
        let mut out = Vec::with_capacity(self.breaks.len());
        out.push(acc.clone());
        for w in self.breaks.windows(2) {
            let slope = Rat::new(w[0].1.clone().into(), o0.clone().into());
            acc += (&w[1].0 - &w[0].0) * slope;
            out.push(acc.clone());
        }
        out
    }

    /// Herbrand `φ(u) = ∫₀ᵘ dt/(G₀:G_t)`: piecewise linear, concave,
    /// strictly increasing, `φ(0) = 0`. Requires `u ≥ 0`.
    pub fn phi(&self, u: &Rat) -> Rat {
        assert!(!u.is_negative(), "phi needs u >= 0");
        let o0 = &self.breaks[0].1;
        let phis = self.phi_at_breaks();
        let i = self.breaks.partition_point(|(b, _)| b <= u) - 1;
        let slope = Rat::new(self.breaks[i].1.clone().into(), o0.clone().into());
        &phis[i] + (u - &self.breaks[i].0) * slope
    }

    /// Inverse of `φ`: the unique `u ≥ 0` with `φ(u) = w`. Requires `w ≥ 0`.
    pub fn psi(&self, w: &Rat) -> Rat {
        assert!(!w.is_negative(), "psi needs w >= 0");
        let o0 = &self.breaks[0].1;
        let phis = self.phi_at_breaks();
        let i = phis.partition_point(|p| p <= w) - 1;
        let inv_slope = Rat::new(o0.clone().into(), self.breaks[i].1.clone().into());
        &self.breaks[i].0 + (w - &phis[i]) * inv_slope
    }

    /// Transport to upper numbering: a lower break at `u` becomes an upper
    /// break at `φ(u)`, orders unchanged.
    pub fn upper(&self) -> BreakFiltration {
        let phis = self.phi_at_breaks();
        BreakFiltration {
            breaks: phis
                .into_iter()
                .zip(self.breaks.iter().map(|(_, o)| o.clone()))
                .collect(),
        }
    }

    /// Inverse transport: read `self` as an upper-numbering order function and
    /// recover the lower one, using `ψ` built from these same orders.
    pub fn lower_from_upper(&self) -> BreakFiltration {
        let o0 = &self.breaks[0].1;
        let mut breaks = Vec::with_capacity(self.breaks.len());
        let mut u = Rat::zero();
        breaks.push((u.clone(), self.breaks[0].1.clone()));
        for w in self.breaks.windows(2) {
            let inv_slope = Rat::new(o0.clone().into(), w[0].1.clone().into());
            u += (&w[1].0 - &w[0].0) * inv_slope;
            breaks.push((u.clone(), w[1].1.clone()));
        }
        BreakFiltration { breaks }
    }

    /// First witness `u` among `samples` where `φ(u) ≤ u` fails; `None` when
    /// the bound holds everywhere (it always does — this is the checkable form
    /// of upper-vs-lower comparison, `G^u ≤ G_u`).
    pub fn phi_leq_identity_witness(&self, samples: &[Rat]) -> Option<Rat> {
        samples
            .iter()
            .find(|u| &self.phi(u) > *u)
            .cloned()
    }

    pub fn phi_leq_identity_check(&self, samples: &[Rat]) -> bool {
        self.phi_leq_identity_witness(samples).is_none()
    }
}

/// `true` iff `φ_H(u) ≥ φ_G(u)` for all `u ≥ 0`, where `h` plays the
/// sub-filtration. Checked at the union of break positions, which suffices by
/// piecewise linearity (tail slopes are compared through the index condition).
///
/// Requires compatibility: at every `u`, the `h` order divides the `g` order
/// and the index `(H₀:H_u)` is at most `(G₀:G_u)`.
pub fn subgroup_phi_inequality(g: &BreakFiltration, h: &BreakFiltration) -> Result<bool> {
    let mut grid: Vec<Rat> = g
        .breaks
        .iter()
        .chain(h.breaks.iter())
        .map(|(u, _)| u.clone())
        .collect();
    grid.sort();
    grid.dedup();
    for u in &grid {
        let ho = h.order_at(u);
        let go = g.order_at(u);
        if !go.is_multiple_of(ho) {
            return Err(Error::IncompatibleFiltrations(format!(
                "at u = {}: order {} does not divide {}",
                rat_string(u),
                ho,
                go
            )));
        }
        let h_index = h.inertia_order() / ho;
        let g_index = g.inertia_order() / go;
        if h_index > g_index {
            return Err(Error::IncompatibleFiltrations(format!(
                "at u = {}: index {} exceeds {}",
                rat_string(u),
                h_index,
                g_index
            )));
        }
    }
    Ok(grid.iter().all(|u| h.phi(u) >= g.phi(u)))
}

/// Pointwise minimum of two order functions on the merged break grid, runs of
/// equal orders merged. Errors when the mins do not form a divisor chain
/// (never happens for two filtrations of powers of one prime).
pub fn min_combine(a: &BreakFiltration, b: &BreakFiltration) -> Result<BreakFiltration> {
    let mut grid: Vec<Rat> = a
        .breaks
        .iter()
        .chain(b.breaks.iter())
        .map(|(u, _)| u.clone())
        .collect();
    grid.sort();
    grid.dedup();
    let mut breaks: Vec<(Rat, BigUint)> = Vec::new();
    for u in grid {
        let o = a.order_at(&u).min(b.order_at(&u)).clone();
        if breaks.last().map(|(_, prev)| prev != &o).unwrap_or(true) {
            breaks.push((u, o));
        }
    }
    BreakFiltration::new(breaks)
}

impl Serialize for BreakFiltration {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(
            self.breaks
                .iter()
                .map(|(u, o)| (rat_string(u), o.to_string())),
        )
    }
}

impl<'de> Deserialize<'de> for BreakFiltration {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<(String, String)>::deserialize(d)?;
        let mut breaks = Vec::with_capacity(raw.len());
        for (u, o) in raw {
            let u = parse_rat(&u).map_err(D::Error::custom)?;
            let o: BigUint = o.parse().map_err(D::Error::custom)?;
            breaks.push((u, o));
        }
        BreakFiltration::new(breaks).map_err(D::Error::custom)
    }
}
