//! Automorphisms of the complete rooted l-ary tree: node-labelled
//! permutations, their action on leaf words, the level-sign vector, and an
//! explicit preimage for every target sign vector.

use arboreal::treeauto::{sign_preimage, TreeAut};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A height-3 binary tree automorphism: swap at the root and below leaf 1.
    let aut = TreeAut::identity(2, 3)?
        .with_label(&[], vec![1, 0])?
        .with_label(&[1], vec![1, 0])?;

    println!("labels (node word -> child permutation):");
    for (w, perm) in aut.labels() {
        println!("  {w:?} -> {perm:?}");
    }

    println!("\naction on depth-3 words:");
    for word in [[0u8, 0, 0], [0, 1, 0], [1, 0, 1], [1, 1, 1]] {
        let image = aut.apply_word(&word);
        let back = aut.invert_word(&image);
        assert_eq!(back, word);
        println!("  {word:?} -> {image:?}");
    }

    println!("\nsign vector by level: {:?}", aut.sgn_vector());

    // sgn is multiplicative: the composite's signs are pointwise products.
    let other = TreeAut::identity(2, 3)?.with_label(&[0], vec![1, 0])?;
    let composite = aut.compose(&other)?;
    println!(
        "compose signs: {:?} * {:?} = {:?}",
        aut.sgn_vector(),
        other.sgn_vector(),
        composite.sgn_vector()
    );

    // ... and surjective: build an automorphism for any target sign vector.
    let target = vec![-1i8, 1, -1, -1];
    let preimage = sign_preimage(&target, 2)?;
    println!("\ntarget signs {target:?} realized by labels {:?}", preimage.labels());
    assert_eq!(preimage.sgn_vector(), target);
    Ok(())
}
