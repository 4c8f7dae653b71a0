//! The basic matrix of a mapping, rows of its complete matrix, and
//! propagating a general mass function through it.
//!
//! Run with `cargo run --example complete_matrix`.

use evidential::cli::{BeliefReport, OutputFormat};
use evidential::{
    parse_rules, propagate_mass, ruleset_to_mapping, MassFunction, Propagator, Result,
};

const RULES: &str = "
frame E = { e1, e2, e3 }
frame H = { a1, a2, a3, a4, a5 }
map R : E -> H {
  e1 -> {a1,a2}: 0.7, {a3,a4}: 0.3 ;
  e2 -> {a2,a3}: 0.8, * : 0.2 ;
  e3 -> {a4,a5}: 0.9, * : 0.1 ;
}
";

fn main() -> Result<()> {
    let file = parse_rules(RULES)?;
    let g = ruleset_to_mapping(file.single_map()?)?;
    let bm = g.basic_matrix();

    let titles: Vec<String> = bm.columns().iter().map(ToString::to_string).collect();
    println!("basic matrix columns: {}", titles.join(" "));
    for (e, row) in g.source().elements().iter().zip(bm.rows()) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.1}")).collect();
        println!("  {{{e}}}  {}", cells.join("  "));
    }

    // a row for a set of evidence elements averages the member rows; columns
    // some member never reaches are diverted to the union of their images
    let e = g.source();
    for title in [e.subset(["e1", "e2"])?, e.subset(["e2", "e3"])?] {
        let row = g.cem_row(&title)?;
        let cells: Vec<String> = row
            .entries
            .iter()
            .map(|(s, m)| format!("{s}={m:.3}"))
            .collect();
        println!(
            "row {title}: {} (diverted {:.3})",
            cells.join(" "),
            row.diverted
        );
    }

    let evidence = MassFunction::from_assignments(e, [(e.subset(["e1"])?, 0.6), (e.full(), 0.4)])?;
    let out = propagate_mass(&g, &evidence)?;
    println!();
    print!("{}", BeliefReport::new(out).render(OutputFormat::Text));

    println!("\nfull complete matrix:");
    print!("{}", Propagator::from(g).export_cem()?);
    Ok(())
}
