//! Mass functions, belief and plausibility, and Dempster's rule.
//!
//! Run with `cargo run --example belief_functions`.

use evidential::cli::{BeliefReport, OutputFormat};
use evidential::{combine_dempster, mass_from_belief, Frame, MassFunction, Result};

fn main() -> Result<()> {
    let t = Frame::new("T", ["a", "b", "c"])?;
    let a = t.subset(["a"])?;
    let ab = t.subset(["a", "b"])?;

    // two simple support functions pointing at different elements
    let for_a = MassFunction::from_assignments(&t, [(a.clone(), 0.5), (t.full(), 0.5)])?;
    let for_b = MassFunction::from_assignments(&t, [(t.subset(["b"])?, 0.5), (t.full(), 0.5)])?;
    println!(
        "Bel({a}) = {:.3}, Pl({a}) = {:.3}",
        for_a.belief(&a)?,
        for_a.plausibility(&a)?
    );
    println!("Bel({ab}) = {:.3}", for_a.belief(&ab)?);

    let joint = combine_dempster(&for_a, &for_b)?;
    println!("\ncombined, discarding conflict {:.3}:", joint.conflict);
    print!(
        "{}",
        BeliefReport::new(joint.mass.clone()).render(OutputFormat::Text)
    );

    // belief and mass carry the same information
    let table = joint.mass.belief_table();
    let back = mass_from_belief(&table)?;
    let drift = t
        .nonempty_subsets()
        .iter()
        .map(|s| (back.mass(s) - joint.mass.mass(s)).abs())
        .fold(0.0, f64::max);
    println!("\nmass recovered from belief, largest drift {drift:.1e}");

    // total ignorance is the identity of the combination
    let vacuous = MassFunction::vacuous(&t);
    println!(
        "vacuous is neutral: {}",
        combine_dempster(&for_a, &vacuous)?.mass == for_a
    );

    // contradictory certainties cannot be combined
    let only_a = MassFunction::from_assignments(&t, [(a, 1.0)])?;
    let only_c = MassFunction::from_assignments(&t, [(t.subset(["c"])?, 1.0)])?;
    if let Err(e) = combine_dempster(&only_a, &only_c) {
        println!("certain a with certain c: {e}");
    }
    Ok(())
}
