//! Classify the wild towers `K_n = K(f^{-n}(a))`, `f(z) = z^p - c`, across
//! every `v(c)` regime over the 2-adics, printing the JSON verdicts the
//! library produces: finiteness, stabilization cutoff, Galois-structure tags,
//! ramification, and the hypotheses each conclusion rests on.

use arboreal::classifier::{classify_wild, degree_growth_bound, FixedPointData};
use arboreal::valuation::{rat, rat_int, GroundField, Rat, ValExt};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Base field Q_2 (e = 1), roots of unity present, finite residue field.
    let gf = GroundField::wild(2, 1, true, true)?;

    println!("ground field: 2-adic, e = 1; thresholds nu_1 = -4, nu_2 = -8/3, nu_inf = -2\n");

    let cases: Vec<(&str, Rat, ValExt)> = vec![
        ("deep:   v(c) = -5 < nu_1, v(a) = 0", rat_int(-5), ValExt::Finite(rat_int(0))),
        ("ladder: v(c) = -4 = nu_1, v(a) = 0", rat_int(-4), ValExt::Finite(rat_int(0))),
        ("ladder: v(c) = -8/3 = nu_2, v(a) = -4/3", rat(-8, 3), ValExt::Finite(rat(-4, 3))),
        ("between: nu_inf < v(c) = -3/2 < 0, v(a) = 0", rat(-3, 2), ValExt::Finite(rat_int(0))),
        ("positive: v(c) = 1, v(a) = 0", rat_int(1), ValExt::Finite(rat_int(0))),
        ("branch pair: v(c) = v(a) = 1", rat_int(1), ValExt::Finite(rat_int(1))),
    ];
    for (label, vc, va) in cases {
        let verdict = classify_wild(&gf, &vc, &va, None, None)?;
        println!("{label}\n  {}\n", serde_json::to_string(&verdict)?);
    }

    // On the boundary v(c) = nu_inf the verdict needs data about the fixed
    // point b of f closest to a: here v(a - b) = +inf (a = b in K).
    let fp = FixedPointData {
        v_b: rat_int(-1),
        v_a_minus_b: ValExt::Infinity,
        b_in_k: true,
    };
    let verdict = classify_wild(&gf, &rat_int(-2), &ValExt::Finite(rat_int(-1)), None, Some(&fp))?;
    println!("boundary: v(c) = -2 = nu_inf, a equals a fixed point of f in K");
    println!("  {}\n", serde_json::to_string(&verdict)?);

    // Degree growth in the in-between regime: the unconditional bound B_n
    // shrinks to B_n^(1 - p^-r).
    let bound = degree_growth_bound(&gf, &rat_int(-1), 4)?;
    println!("degree bound for v(c) = -1 up to level 4:");
    println!("  {}", serde_json::to_string(&bound)?);
    Ok(())
}
