//! Break filtrations of higher ramification groups: evaluate the piecewise
//! linear break function and its inverse, transport breaks between lower and
//! upper numbering, and verify the round trip exactly.

use arboreal::ramfilt::BreakFiltration;
use arboreal::valuation::{rat, rat_int, rat_string, Rat};
use num_bigint::BigUint;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // G_0 has order 4; the order drops to 2 at u = 1 and to 1 at u = 3.
    let filt = BreakFiltration::new(vec![
        (rat_int(0), BigUint::from(4u32)),
        (rat_int(1), BigUint::from(2u32)),
        (rat_int(3), BigUint::from(1u32)),
    ])?;

    println!("lower-numbering breaks (position, group order):");
    for (u, o) in filt.breaks() {
        println!("  u = {:>4}: order {o}", rat_string(u));
    }
    println!("inertia order: {}", filt.inertia_order());
    println!(
        "filtration trivial from u = {}",
        filt.trivialization_break().map(rat_string).unwrap_or_else(|| "-".into())
    );

    println!("\nbreak function phi and inverse psi:");
    for u in [rat_int(0), rat(1, 2), rat_int(1), rat_int(2), rat_int(3), rat_int(5)] {
        let w = filt.phi(&u);
        let back = filt.psi(&w);
        assert_eq!(back, u);
        println!(
            "  phi({:>4}) = {:>4}   psi({:>4}) = {:>4}",
            rat_string(&u),
            rat_string(&w),
            rat_string(&w),
            rat_string(&back)
        );
    }

    let upper = filt.upper();
    println!("\nupper-numbering breaks:");
    for (w, o) in upper.breaks() {
        println!("  w = {:>4}: order {o}", rat_string(w));
    }

    // phi never exceeds the identity; sample a witness check.
    let samples: Vec<Rat> = (0..=10).map(rat_int).collect();
    println!(
        "\nphi(u) <= u on all samples: {}",
        filt.phi_leq_identity_check(&samples)
    );
    Ok(())
}
