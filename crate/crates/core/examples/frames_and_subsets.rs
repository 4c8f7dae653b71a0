//! Frames of discernment and the subset algebra over them.
//!
//! Run with `cargo run --example frames_and_subsets`.

use evidential::{Frame, Result};

fn main() -> Result<()> {
    let weather = Frame::new("Weather", ["sun", "cloud", "rain", "snow"])?;
    println!("{weather} has {} elements", weather.len());

    // label order does not matter; subsets print in frame order
    let wet = weather.subset(["snow", "rain"])?;
    let grey = weather.subset(["cloud", "rain"])?;
    println!("wet        = {wet}");
    println!("grey       = {grey}");
    println!("wet | grey = {}", wet.union(&grey)?);
    println!("wet & grey = {}", wet.intersect(&grey)?);
    println!("not wet    = {}", wet.complement());
    println!(
        "wet within wet|grey: {}",
        wet.is_subset_of(&wet.union(&grey)?)?
    );

    // canonical order: by size, then by element order
    let mut all = weather.nonempty_subsets();
    all.truncate(7);
    let shown: Vec<String> = all.iter().map(ToString::to_string).collect();
    println!("first subsets: {}", shown.join(" "));

    // subsets of different frames never mix
    let other = Frame::new("Season", ["summer", "winter"])?;
    match wet.union(&other.full()) {
        Err(e) => println!("mixing frames fails: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
