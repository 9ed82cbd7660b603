//! Brute-force verification of the valuation-dynamics predictions.
//!
//! The predictions (class partitions at threshold `δ`, all-zero differences
//! at the `ν_∞` boundary, branch-pair distances `v(d_n)`) are recomputed here
//! from scratch: expand `f^n(z) - a` exactly, read root valuations off its
//! Newton polygon, build the polynomial of pairwise root differences by
//! resultant, and compare multisets. Nothing in this module reuses the
//! per-step recursion being checked.

mod poly;
mod real;

pub use poly::{
    difference_val_multiset, difference_val_multiset_allowing_repeats, iterate_poly,
    pairwise_difference_poly, root_val_multiset, OracleCaps, RatPoly,
};
pub use real::{real_all_real_check, RealCheckOutcome};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    class_partition_prediction, dn_sequence, val_orbit, ClassPartitionPrediction, OrbitOutcome,
};
use crate::error::{Error, Result};
use crate::newton::ValMultiset;
use crate::valuation::{padic_val, serde_rat_vec, GroundField, Rat, ValExt};

/// Which difference-structure prediction applies to an instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum DiffPrediction {
    /// `v(c) < ν_∞`, `v(a) > v(c)`: cross-class pairs exactly at `δ`,
    /// within-class pairs strictly above.
    ClassPartition(ClassPartitionPrediction),
    /// Wild `v(c) = ν_∞`, `v(a) > v(c)`: every difference has valuation 0.
    AllZero,
    /// One of the branch-distance regimes: the level-`m` difference multiset
    /// contains `v(d_m) = values[m-1]`.
    BranchPair {
        #[serde(with = "serde_rat_vec")]
        values: Vec<Rat>,
    },
}

/// Side-by-side record of predicted and observed valuation structure at one
/// level of the preimage tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub agreement: bool,
    pub level: u32,
    /// Predicted common root valuation at each level `1..=n`; absent when the
    /// regime leaves root valuations undetermined (`v(a) = v(c)`).
    pub predicted_roots: Option<Vec<ValExt>>,
    pub diff_prediction: DiffPrediction,
    /// Observed root valuations of `f^n(z) - a`.
    pub root_vals: ValMultiset,
    /// Observed valuations of all `l^n(l^n - 1)` ordered root differences;
    /// coincident roots contribute `∞` entries.
    pub diff_vals: ValMultiset,
    pub mismatches: Vec<String>,
}

fn oracle_prime(gf: &GroundField) -> Result<u64> {
    if gf.p() == 0 {
        return Err(Error::Precondition(
            "oracle verification needs a concrete residue characteristic".into(),
        ));
    }
    Ok(gf.p())
}

/// Expands `f^m(z) - a` for every `m ≤ n` and checks the applicable
/// root-valuation and difference-valuation predictions against exact
/// Newton-polygon readouts. The regime is chosen from `(v(c), v(a))`:
///
/// * `v(c) < ν_∞`, `v(a) > v(c)`: class partition at `δ`;
/// * wild `v(c) = ν_∞`, `v(a) > v(c)`: all differences zero;
/// * wild branch-distance regimes (`ν_∞ < v(c) < 0` with `v(a) > v(c)`;
///   `v(c) > 0` with `v(a) = 0`; `v(a) = v(c) ≥ 0`): membership of `v(d_m)`.
///
/// Hitting the equality case `v(α) = v(c)` anywhere in the first `n` levels
/// of the valuation orbit (outside the last regime, which never consults
/// root valuations) is genuinely undetermined and reported as an error
/// rather than guessed at.
pub fn verify_predictions(
    gf: &GroundField,
    c: &Rat,
    a: &Rat,
    n: u32,
    caps: &OracleCaps,
) -> Result<OracleReport> {
    if n == 0 {
        return Err(Error::Precondition("verification needs level n >= 1".into()));
    }
    let p = oracle_prime(gf)?;
    let vc = match padic_val(c, p)? {
        ValExt::Finite(v) => v,
        ValExt::Infinity => {
            return Err(Error::Precondition("c = 0 is excluded".into()));
        }
    };
    let va = padic_val(a, p)?;
    let nu_inf = gf.nu_infinity();
    let ell = gf.ell();

    enum RootRule {
        Orbit,
        Skip,
    }

    // The equality case v(α) = v(c), hit anywhere in the first n levels,
    // leaves every deeper valuation undetermined, so no prediction below can
    // be stated. The one exception is v(a) = v(c) ≥ 0 in the wild branch-pair
    // regime, whose difference prediction does not need root valuations.
    let at_vc = va.cmp_rat(&vc) == std::cmp::Ordering::Equal;
    let skip_roots = gf.is_wild() && at_vc && vc >= Rat::zero();
    if !skip_roots {
        let orbit = val_orbit(&va, &vc, gf, n as usize);
        if let OrbitOutcome::IndeterminateFrom { level } = orbit.outcome {
            return Err(Error::IndeterminateRegime(level));
        }
    }

    let (diff_prediction, root_rule) = if vc < nu_inf {
        if va.cmp_rat(&vc) != std::cmp::Ordering::Greater {
            return Err(Error::Precondition(
                "class-partition regime needs v(a) > v(c)".into(),
            ));
        }
        (
            DiffPrediction::ClassPartition(class_partition_prediction(&vc, gf, n)?),
            RootRule::Orbit,
        )
    } else if gf.is_wild() && vc == nu_inf {
        if va.cmp_rat(&vc) != std::cmp::Ordering::Greater {
            return Err(Error::Precondition(
                "boundary regime needs v(a) > v(c)".into(),
            ));
        }
        (DiffPrediction::AllZero, RootRule::Orbit)
    } else if gf.is_wild() {
        if vc < Rat::zero() && va.cmp_rat(&vc) != std::cmp::Ordering::Greater {
            return Err(Error::Precondition(
                "branch-distance regime needs v(a) > v(c)".into(),
            ));
        }
        let values = dn_sequence(&vc, &va, gf, n as usize)?;
        let rule = if skip_roots { RootRule::Skip } else { RootRule::Orbit };
        (DiffPrediction::BranchPair { values }, rule)
    } else {
        return Err(Error::Precondition(
            "no difference prediction applies to tame v(c) >= 0".into(),
        ));
    };

    let mut mismatches = Vec::new();

    let predicted_roots = match root_rule {
        RootRule::Skip => None,
        RootRule::Orbit => {
            let orbit = val_orbit(&va, &vc, gf, n as usize);
            if orbit.levels.len() < n as usize {
                return Err(Error::IndeterminateRegime(orbit.levels.len() + 1));
            }
            Some(orbit.levels)
        }
    };

    let mut level_polys = Vec::with_capacity(n as usize);
    for m in 1..=n {
        level_polys.push(iterate_poly(ell, c, m, a, caps)?);
    }

    if let Some(expected) = &predicted_roots {
        for (m, poly) in level_polys.iter().enumerate() {
            let found = root_val_multiset(poly, p)?;
            let count = u64::from(ell).pow(m as u32 + 1);
            let want: ValMultiset =
                std::iter::once((expected[m].clone(), count)).collect();
            if found != want {
                mismatches.push(format!(
                    "level {} roots: predicted {want}, oracle found {found}",
                    m + 1
                ));
            }
        }
    }

    let top = level_polys.last().unwrap();
    let root_vals = root_val_multiset(top, p)?;
    let diff_vals = difference_val_multiset_allowing_repeats(top, p, caps)?;

    match &diff_prediction {
        DiffPrediction::ClassPartition(cp) => {
            let delta = ValExt::Finite(cp.threshold.clone());
            let at = BigUint::from(diff_vals.get(&delta));
            let above = BigUint::from(diff_vals.count_above(&delta));
            let below = diff_vals.count_below(&delta);
            if at != cp.cross_pairs {
                mismatches.push(format!(
                    "pairs at threshold {}: predicted {}, oracle found {at}",
                    delta, cp.cross_pairs
                ));
            }
            if above != cp.within_pairs {
                mismatches.push(format!(
                    "pairs above threshold {}: predicted {}, oracle found {above}",
                    delta, cp.within_pairs
                ));
            }
            if below != 0 {
                mismatches.push(format!(
                    "{below} difference pairs below threshold {delta}"
                ));
            }
        }
        DiffPrediction::AllZero => {
            let zero = ValExt::Finite(Rat::zero());
            let total = diff_vals.total();
            let at = diff_vals.get(&zero);
            if at != total {
                mismatches.push(format!(
                    "expected all {total} differences at 0, oracle found {diff_vals}"
                ));
            }
        }
        DiffPrediction::BranchPair { values } => {
            // Check membership of v(d_m) at every level, not just the top.
            for (m, poly) in level_polys.iter().enumerate() {
                let ms = if m + 1 == n as usize {
                    diff_vals.clone()
                } else {
                    difference_val_multiset_allowing_repeats(poly, p, caps)?
                };
                let want = ValExt::Finite(values[m].clone());
                if !ms.contains(&want) {
                    mismatches.push(format!(
                        "level {} differences: predicted member {want}, oracle found {ms}",
                        m + 1
                    ));
                }
            }
        }
    }

    debug_assert_eq!(diff_vals.total(), {
        let ln = u64::from(ell).pow(n);
        ln * (ln - 1)
    });

    Ok(OracleReport {
        level: n,
        predicted_roots,
        diff_prediction,
        root_vals,
        diff_vals,
        agreement: mismatches.is_empty(),
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valuation::{rat, rat_int};

    fn q2() -> GroundField {
        GroundField::wild(2, 1, true, true).unwrap()
    }

    #[test]
    fn class_partition_agreement() {
        // v(c) = -3 < nu_inf = -2: 8 cross pairs at -1/2, 4 within above.
        let r = verify_predictions(&q2(), &rat(1, 8), &rat_int(1), 2, &OracleCaps::default())
            .unwrap();
        assert!(r.agreement, "{:?}", r.mismatches);
        assert_eq!(
            r.predicted_roots,
            Some(vec![ValExt::Finite(rat(-3, 2)); 2])
        );
        let delta = ValExt::Finite(rat(-1, 2));
        assert_eq!(r.diff_vals.get(&delta), 8);
        assert_eq!(r.diff_vals.count_above(&delta), 4);
        assert_eq!(r.root_vals.get(&ValExt::Finite(rat(-3, 2))), 4);
    }

    #[test]
    fn boundary_all_zero_agreement() {
        // v(c) = -2 = nu_inf: all 12 level-2 differences at 0.
        let r = verify_predictions(&q2(), &rat(1, 4), &rat_int(1), 2, &OracleCaps::default())
            .unwrap();
        assert!(r.agreement, "{:?}", r.mismatches);
        assert_eq!(r.diff_prediction, DiffPrediction::AllZero);
        assert_eq!(r.diff_vals.get(&ValExt::Finite(rat_int(0))), 12);
    }

    #[test]
    fn branch_pair_agreement() {
        // nu_inf < v(c) = -1 < 0: v(d_m) = (1/2)/2^(m-1) must appear.
        let r = verify_predictions(&q2(), &rat(1, 2), &rat_int(1), 2, &OracleCaps::default())
            .unwrap();
        assert!(r.agreement, "{:?}", r.mismatches);
        assert_eq!(
            r.diff_prediction,
            DiffPrediction::BranchPair { values: vec![rat(1, 2), rat(1, 4)] }
        );

        // v(a) = v(c) = 1 (third regime, inseparable at level 2): membership
        // of v(d_m) = 2/2^(m-1) with no root prediction.
        let r = verify_predictions(&q2(), &rat_int(2), &rat_int(2), 2, &OracleCaps::default())
            .unwrap();
        assert!(r.agreement, "{:?}", r.mismatches);
        assert_eq!(r.predicted_roots, None);
        assert_eq!(
            r.diff_prediction,
            DiffPrediction::BranchPair { values: vec![rat_int(2), rat_int(1)] }
        );
        assert!(r.diff_vals.contains(&ValExt::Infinity));

        // v(c) = 1 > 0, v(a) = 0 (second regime): v(d_1) = 1/(p-1) = 1.
        let r = verify_predictions(&q2(), &rat_int(2), &rat_int(1), 2, &OracleCaps::default())
            .unwrap();
        assert!(r.agreement, "{:?}", r.mismatches);
    }

    #[test]
    fn indeterminate_and_unsupported_inputs() {
        // v(a) = v(c) with v(c) < 0 is genuinely undetermined.
        assert!(matches!(
            verify_predictions(&q2(), &rat(1, 8), &rat(1, 8), 2, &OracleCaps::default()),
            Err(Error::IndeterminateRegime(0))
        ));
        // v(a) = l·v(c) hits the equality case at level 1 of the orbit.
        assert!(matches!(
            verify_predictions(&q2(), &rat(1, 8), &rat(1, 64), 2, &OracleCaps::default()),
            Err(Error::IndeterminateRegime(1))
        ));
        // Tame v(c) >= 0 has no difference prediction here.
        let tame = GroundField::tame(3, 5, true, true).unwrap();
        assert!(verify_predictions(&tame, &rat_int(5), &rat_int(1), 1, &OracleCaps::default())
            .is_err());
        assert!(matches!(
            verify_predictions(&q2(), &rat_int(0), &rat_int(1), 1, &OracleCaps::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn tame_class_partition_agreement() {
        // l = 3 over p = 5, v(c) = -1 < 0 = nu_inf: 6 cross pairs at -1/3.
        let tame = GroundField::tame(3, 5, true, true).unwrap();
        let r = verify_predictions(&tame, &rat(1, 5), &rat_int(1), 1, &OracleCaps::default())
            .unwrap();
        assert!(r.agreement, "{:?}", r.mismatches);
        let delta = ValExt::Finite(rat(-1, 3));
        assert_eq!(r.diff_vals.get(&delta), 6);
    }

    #[test]
    fn report_serializes() {
        let r = verify_predictions(&q2(), &rat(1, 8), &rat_int(1), 1, &OracleCaps::default())
            .unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: OracleReport = serde_json::from_str(&json).unwrap();
        assert_eq!(r, back);
    }
}
