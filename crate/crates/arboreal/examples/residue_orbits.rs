//! Finite-field orbit analysis behind the tame classification: the forward
//! orbit of 0 under z^l - c in F_q (prime powers included), tail and cycle
//! lengths, and the four-way verdict table.

use arboreal::residue::{exact_cycle_check, orbit_analysis, tame_verdict, Fq, TameVerdict};
use arboreal::valuation::rat_int;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Verdict table over F_5 with l = 2, integral lifts 0..4.
    let f5 = Fq::new(5, 1)?;
    println!("l = 2 over F_5: verdict for each (c mod 5, a mod 5)");
    println!("  (U = unramified, D = index divides l, C = exact single cycle, I = infinitely ramified)\n");
    print!("        ");
    for a in 0..5 {
        print!("a={a}  ");
    }
    println!();
    for c in 0..5i64 {
        print!("  c = {c}  ");
        for a in 0..5i64 {
            let report = orbit_analysis(2, &f5, &f5.from_rat(&rat_int(c))?, &f5.from_rat(&rat_int(a))?)?;
            let exact = if report.zero_and_a_in_single_cycle_mod_m {
                Some(exact_cycle_check(2, &rat_int(c), &rat_int(a), 5, &report)?)
            } else {
                None
            };
            let mark = match tame_verdict(&report, exact)? {
                TameVerdict::Unramified => 'U',
                TameVerdict::IndexDividesL => 'D',
                TameVerdict::UnramifiedSingleCycle => 'C',
                TameVerdict::InfinitelyRamified => 'I',
            };
            print!("  {mark}  ");
        }
        println!();
    }

    // A full orbit report, over the degree-2 extension F_9.
    let f9 = Fq::new(3, 2)?;
    let c = f9.from_coeffs(vec![1, 1])?; // c = 1 + t, t a generator of F_9 over F_3
    let a = f9.zero();
    let report = orbit_analysis(2, &f9, &c, &a)?;
    println!("\norbit of 0 under z^2 - (1 + t) in F_9 (elements as coefficient vectors over F_3):");
    println!("  {:?}", report.orbit_of_zero);
    println!(
        "  tail length {}, cycle length {}, a in forward orbit: {}",
        report.tail_length, report.cycle_length, report.a_in_forward_orbit_of_zero
    );
    println!("  report JSON: {}", serde_json::to_string(&report)?);
    Ok(())
}
