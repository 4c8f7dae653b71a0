//! Posterior belief over hypotheses after repeated observations, checked
//! against brute-force enumeration of the joint distribution.
//!
//! Run with `cargo run --example bayesian_posterior`.

use evidential::{
    posterior, posterior_by_enumeration, EvidentialMapping, Frame, MassFunction, Result,
};

fn main() -> Result<()> {
    let h = Frame::new("Disease", ["flu", "cold", "none"])?;
    let e = Frame::new("Test", ["positive", "negative"])?;
    let pos = e.subset(["positive"])?;
    let neg = e.subset(["negative"])?;
    // rows are p(test | disease)
    let cpt = EvidentialMapping::new(
        "cpt",
        &h,
        &e,
        vec![
            vec![(pos.clone(), 0.9), (neg.clone(), 0.1)],
            vec![(pos.clone(), 0.6), (neg.clone(), 0.4)],
            vec![(pos.clone(), 0.05), (neg.clone(), 0.95)],
        ],
    )?;
    let prior = MassFunction::from_assignments(
        &h,
        [
            (h.subset(["flu"])?, 0.1),
            (h.subset(["cold"])?, 0.3),
            (h.subset(["none"])?, 0.6),
        ],
    )?;

    let runs: [&[_]; 3] = [
        &[],
        std::slice::from_ref(&pos),
        &[pos.clone(), pos.clone(), neg],
    ];
    for observed in runs {
        let post = posterior(&prior, &cpt, observed)?;
        let check = posterior_by_enumeration(&prior, &cpt, observed)?;
        let names: Vec<String> = observed.iter().map(ToString::to_string).collect();
        print!("after [{}]:", names.join(", "));
        for i in 0..h.len() {
            let s = h.singleton(i);
            print!(" {s}={:.4}", post.mass(&s));
            assert!((post.mass(&s) - check.mass(&s)).abs() < 1e-12);
        }
        println!();
    }
    Ok(())
}
