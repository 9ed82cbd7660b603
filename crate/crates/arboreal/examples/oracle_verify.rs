//! Independent verification pipeline: expand `f^n(z) - a` exactly, read root
//! valuations off its Newton polygon and pairwise-difference valuations off a
//! resultant, and compare both against the structural predictions.

use arboreal::oracle::{verify_predictions, OracleCaps};
use arboreal::valuation::{rat, rat_int, GroundField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let caps = OracleCaps::default();
    let gf2 = GroundField::wild(2, 1, true, true)?;

    // Deep regime v(c) = -3 < nu_inf: l classes of l^(n-1) preimages each.
    let report = verify_predictions(&gf2, &rat(1, 8), &rat_int(1), 2, &caps)?;
    println!("v(c) = -3, v(a) = 0, level 2:");
    println!("  {}\n", serde_json::to_string(&report)?);

    // Boundary regime v(c) = nu_inf = -2: all differences at valuation 0.
    let report = verify_predictions(&gf2, &rat(1, 4), &rat_int(1), 2, &caps)?;
    println!("v(c) = -2 (boundary), v(a) = 0, level 2:");
    println!("  agreement: {}, differences: {}\n", report.agreement, report.diff_vals);

    // Wild branch-pair regime v(a) = v(c) = 1: membership of the predicted
    // d_n among the observed difference valuations.
    let report = verify_predictions(&gf2, &rat_int(2), &rat_int(2), 2, &caps)?;
    println!("v(c) = v(a) = 1 (branch pair), level 2:");
    println!("  agreement: {}, differences: {}\n", report.agreement, report.diff_vals);

    // Tame case l = 2 over the 5-adics.
    let gf5 = GroundField::tame(2, 5, true, true)?;
    let report = verify_predictions(&gf5, &rat(1, 5), &rat_int(1), 2, &caps)?;
    println!("tame l = 2 over the 5-adics, v(c) = -1, level 2:");
    println!("  agreement: {}, roots: {}", report.agreement, report.root_vals);
    Ok(())
}
