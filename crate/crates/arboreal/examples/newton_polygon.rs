//! Read root valuations off a Newton polygon: build the lower convex hull of
//! the coefficient-valuation points of an exact rational polynomial and turn
//! its segments into a root-valuation multiset.

use arboreal::newton::{lower_hull, root_valuations};
use arboreal::oracle::RatPoly;
use arboreal::valuation::{padic_val, rat, rat_int, rat_string, Rat, ValExt};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // P(z) = z^6 + 3 z^4 + (1/9) z^3 + 27 z + 9 over the 3-adics.
    let poly = RatPoly::new(vec![
        rat_int(9),
        rat_int(27),
        Rat::from_integer(0.into()),
        rat(1, 9),
        rat_int(3),
        Rat::from_integer(0.into()),
        rat_int(1),
    ])?;

    let p = 3u64;
    let points: Vec<(u32, ValExt)> = poly
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| Ok::<_, arboreal::Error>((i as u32, padic_val(c, p)?)))
        .collect::<Result<_, _>>()?;

    println!("coefficient valuations (degree, v):");
    for (i, v) in &points {
        println!("  z^{i}: {v}");
    }

    let hull = lower_hull(&points)?;
    println!("\nlower hull vertices:");
    for (x, y) in &hull.vertices {
        println!("  ({x}, {})", rat_string(y));
    }
    println!("segments (slope, width):");
    for seg in &hull.segments {
        println!("  slope {} over width {}", rat_string(&seg.slope), seg.width);
    }

    let roots = root_valuations(&points)?;
    println!("\nroot valuations: {}", roots.multiset());
    println!(
        "width-1 segments certify roots rational over the ground field, at valuations: {:?}",
        roots.ground_field.iter().map(rat_string).collect::<Vec<_>>()
    );
    Ok(())
}
