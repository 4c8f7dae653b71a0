//! Turning a lone heuristic rule into a complete rule set and a mapping.
//!
//! Run with `cargo run --example rule_completion`.

use evidential::rules::render_ruleset;
use evidential::{complete_ruleset, parse_rules, ruleset_to_mapping, Result};

fn main() -> Result<()> {
    // neither the antecedent nor the conclusion forms a frame, and the
    // strength leaves 0.1 unassigned
    let file = parse_rules("rule alarm_rings -> fire: 0.9 ;\n")?;
    let rs = file.single_map()?;
    println!("incomplete because:");
    for reason in rs.completeness().reasons() {
        println!("  {reason}");
    }

    let (done, source, target) = complete_ruleset(rs)?;
    println!("\nsynthesized frames: {source} and {target}");
    print!("{}", render_ruleset(&done));

    let g = ruleset_to_mapping(&done)?;
    println!("\nmapping kind: {}", g.classify());
    for (i, e) in g.source().elements().iter().enumerate() {
        let image: Vec<String> = g
            .image(i)
            .iter()
            .map(|(s, m)| format!("({s}, {m})"))
            .collect();
        println!("  {e} -> {}", image.join(" "));
    }

    // completing a complete set changes nothing
    let (again, _, _) = complete_ruleset(&done)?;
    println!("idempotent: {}", again == done);
    Ok(())
}
