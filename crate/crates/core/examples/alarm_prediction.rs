//! Predicting a caller's behaviour from an alarm through a Bayesian mapping,
//! the evidential counterpart of `P(d) = Σ P(d|s) P(s)`.
//!
//! Run with `cargo run --example alarm_prediction`.

use evidential::{propagate_probability, EvidentialMapping, Frame, MassFunction, Result};

fn main() -> Result<()> {
    let s = Frame::new("S", ["on", "off"])?;
    let d = Frame::new("D", ["call", "no_call"])?;
    let call = d.subset(["call"])?;
    let no_call = d.subset(["no_call"])?;
    let link = EvidentialMapping::new(
        "link",
        &s,
        &d,
        vec![
            vec![(call.clone(), 0.7), (no_call.clone(), 0.3)],
            vec![(no_call.clone(), 1.0)],
        ],
    )?;
    println!("link is {}", link.classify());

    let p = MassFunction::from_assignments(
        &s,
        [(s.subset(["on"])?, 0.2686), (s.subset(["off"])?, 0.7314)],
    )?;
    let out = propagate_probability(&link, &p)?;
    println!("m(call)    = {:.5}", out.mass(&call));
    println!("m(no_call) = {:.5}", out.mass(&no_call));
    Ok(())
}
