//! Walk the valuation tree of iterated preimages: level-by-level common
//! valuations (`val_orbit`), the recursive q-sequence with its branch
//! switches, and the stabilization cutoff they certify.

use arboreal::dynamics::{q_sequence, stabilization_level, val_orbit};
use arboreal::valuation::{rat_int, rat_string, GroundField, ValExt};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gf = GroundField::wild(2, 1, true, true)?;
    let va = ValExt::Finite(rat_int(0)); // v(a) = 0

    for vc in [-5i64, -4, -3] {
        let vc = rat_int(vc);
        println!("v(c) = {} over the 2-adics, v(a) = 0", rat_string(&vc));

        // Exact common valuation of all level-n preimages.
        let orbit = val_orbit(&va, &vc, &gf, 6);
        let levels: Vec<String> = orbit.levels.iter().map(|v| v.to_string()).collect();
        println!("  preimage valuations by level: {}", levels.join(", "));
        println!("  outcome: {:?}", orbit.outcome);

        // The q-recursion behind the tower structure: contraction steps
        // (shape q/p) until the additive branch takes over.
        let steps = q_sequence(&vc, &va, &gf, 6)?;
        for (m, s) in steps.iter().enumerate() {
            println!(
                "  q_{} = {:>6}  [{:?}{}]",
                m + 1,
                rat_string(&s.q),
                s.branch,
                if s.exact { "" } else { ", lower bound only" }
            );
        }

        // Where the tower K_n stops growing.
        let cut = stabilization_level(&vc, &va, &gf)?;
        println!(
            "  tower stabilizes at level {}{}\n",
            cut.level,
            if cut.unramified_top { " (final step unramified, degree <= p)" } else { "" }
        );
    }
    Ok(())
}
