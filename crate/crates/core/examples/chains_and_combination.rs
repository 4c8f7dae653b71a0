//! Chaining mappings across several frames, and combining two independent
//! mappings between the same frames.
//!
//! Run with `cargo run --example chains_and_combination`.

use evidential::{
    combine_mappings, compose, parse_rules, ruleset_to_mapping, MassFunction, Result,
};

const RULES: &str = "
frame S = { on, off }
frame D = { call, no_call }
frame K = { answered, missed }
map link : S -> D {
  on -> call: 0.7, no_call: 0.3 ;
  off -> no_call: 1 ;
}
map pickup : D -> K {
  call -> answered: 0.6, * : 0.4 ;
  no_call -> missed: 1 ;
}
";

fn main() -> Result<()> {
    let file = parse_rules(RULES)?;
    let link = ruleset_to_mapping(&file.maps[0])?;
    let pickup = ruleset_to_mapping(&file.maps[1])?;
    let s = link.source().clone();

    let chain = compose(link, pickup)?;
    let evidence = MassFunction::from_assignments(&s, [(s.subset(["on"])?, 0.5), (s.full(), 0.5)])?;
    let direct = chain.propagate(&evidence)?;
    let stepwise = chain.propagate_stepwise(&evidence)?;
    println!("through {} links:", chain.links());
    for (set, m) in direct.focal_elements() {
        println!("  {set}: {m:.4} (link by link {:.4})", stepwise.mass(set));
    }

    // two experts state the same rule with different strengths
    let one = parse_rules(
        "frame E = { e }\nframe H = { h, !h }\nmap R : E -> H { e -> h: 0.9, * : 0.1 ; }",
    )?;
    let two = parse_rules(
        "frame E = { e }\nframe H = { h, !h }\nmap R : E -> H { e -> h: 0.8, * : 0.2 ; }",
    )?;
    let joint = combine_mappings(
        &ruleset_to_mapping(one.single_map()?)?,
        &ruleset_to_mapping(two.single_map()?)?,
    )?;
    let row: Vec<String> = joint
        .mapping
        .image(0)
        .iter()
        .map(|(s, m)| format!("{s}={m:.2}"))
        .collect();
    println!(
        "\ncombined rule for e: {} (conflict {})",
        row.join(" "),
        joint.conflicts[0]
    );
    Ok(())
}
