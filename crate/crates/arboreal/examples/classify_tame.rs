//! Classify tame towers (`l` coprime to the residue characteristic): for
//! integral `c` and `a` the verdict is read off the orbit of `0` under
//! `z^l - c` in the residue field, sharpened by an exact-cycle lift check.

use arboreal::classifier::classify_tame;
use arboreal::residue::{exact_cycle_check, orbit_analysis, Fq};
use arboreal::valuation::{padic_val, rat_int, GroundField, ValExt};

fn classify(c: i64, a: i64, p: u64) -> Result<(), Box<dyn std::error::Error>> {
    let gf = GroundField::tame(2, p, true, true)?;
    let (c, a) = (rat_int(c), rat_int(a));
    let vc = match padic_val(&c, p)? {
        ValExt::Finite(v) => v,
        ValExt::Infinity => return Err("c must be nonzero".into()),
    };
    let va = padic_val(&a, p)?;

    // The residue report: forward orbit of 0 under z^2 - c in F_p.
    let fq = Fq::new(p, 1)?;
    let mut report = orbit_analysis(2, &fq, &fq.from_rat(&c)?, &fq.from_rat(&a)?)?;
    // When 0 and a share a single residue cycle, decide exactness by running
    // the exact rational orbit one cycle around.
    if report.zero_and_a_in_single_cycle_mod_m {
        report.exact_single_cycle = Some(exact_cycle_check(2, &c, &a, p, &report)?);
    }

    let verdict = classify_tame(&gf, &vc, &va, Some(&report))?;
    println!(
        "c = {c}, a = {a} over the {p}-adics: orbit of 0 mod {p} has tail {}, cycle {}",
        report.tail_length, report.cycle_length
    );
    println!("  {}\n", serde_json::to_string(&verdict)?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a never meets the orbit of 0: every level is unramified.
    classify(1, 1, 3)?;
    // 0 strictly preperiodic, a in its orbit: ramification index divides l.
    classify(2, 0, 3)?;
    // 0 and a in a single residue cycle that lifts exactly (0 -> -1 -> 0).
    classify(1, 0, 3)?;
    // Same residue picture, but the exact orbit of 0 under z^2 - 3 escapes:
    // infinitely ramified.
    classify(3, 3, 3)?;
    Ok(())
}
