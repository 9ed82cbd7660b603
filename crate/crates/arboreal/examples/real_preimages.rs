//! The archimedean picture for f(z) = z^2 - c: the closed-form test for when
//! every iterated preimage of `a` stays real, cross-checked by adaptive
//! interval arithmetic on the preimage tree, and drawn as a small map.

use arboreal::classifier::{classify_real, RealVerdict};
use arboreal::oracle::{real_all_real_check, RealCheckOutcome};
use arboreal::valuation::{rat, rat_int};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // The all-real window needs c >= 2 and -c <= a <= c^2 - c.
    println!("map of (c, a), c in [1/2, 4] across, a in [-5, 5] down");
    println!("  # = every preimage real, . = complex preimage somewhere\n");
    for j in (0..21).rev() {
        let a = rat_int(-5) + rat(1, 2) * rat_int(j);
        let mut row = String::new();
        for i in 0..29 {
            let c = rat(1, 2) + rat(1, 8) * rat_int(i);
            row.push(match classify_real(2, &c, &a)? {
                RealVerdict::AllReal => '#',
                RealVerdict::Complex => '.',
            });
        }
        println!("  a = {:>5}  {row}", format!("{a}"));
    }

    // Spot-check the closed form against the depth-limited tree exploration.
    println!("\ninterval-arithmetic cross-checks (depth 12):");
    let cases = [
        (rat_int(3), rat_int(2)),
        (rat_int(3), rat(13, 2)),  // above c^2 - c = 6: escapes
        (rat(5, 2), rat(-5, 2)),   // exactly a = -c: boundary, still real
        (rat(15, 8), rat_int(0)),  // c < 2: always complex somewhere
    ];
    for (c, a) in cases {
        let verdict = classify_real(2, &c, &a)?;
        let check = real_all_real_check(2, &c, &a, 12, 4096)?;
        let agree = matches!(
            (&verdict, &check),
            (RealVerdict::AllReal, RealCheckOutcome::AllRealToDepth)
                | (RealVerdict::Complex, RealCheckOutcome::ComplexAtDepth { .. })
        );
        println!("  c = {c}, a = {a}: {verdict:?} / {check:?} -> agree: {agree}");
    }
    Ok(())
}
