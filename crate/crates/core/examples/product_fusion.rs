//! Evidence on two separate frames fused on their product and propagated
//! through a mapping whose source is the product.
//!
//! Run with `cargo run --example product_fusion`.

use evidential::cli::{BeliefReport, OutputFormat};
use evidential::{
    fuse_marginals, parse_rules, propagate_mass, ruleset_to_mapping, MassFunction, ProductFrame,
    Result,
};

const RULES: &str = "
frame Smoke = { smoke, clear }
frame Heat = { hot, normal }
frame Sensors = Smoke * Heat
frame Fire = { fire, no_fire }
map detect : Sensors -> Fire {
  (smoke,hot) -> fire: 0.95, * : 0.05 ;
  (smoke,normal) -> fire: 0.4, * : 0.6 ;
  (clear,hot) -> fire: 0.3, * : 0.7 ;
  (clear,normal) -> no_fire: 0.9, * : 0.1 ;
}
";

fn main() -> Result<()> {
    let file = parse_rules(RULES)?;
    let g = ruleset_to_mapping(file.single_map()?)?;
    let pf = ProductFrame::from_frame(g.source()).expect("declared as a product");
    let smoke = &pf.components()[0];
    let heat = &pf.components()[1];

    let m_smoke = MassFunction::from_assignments(
        smoke,
        [(smoke.subset(["smoke"])?, 0.7), (smoke.full(), 0.3)],
    )?;
    let m_heat =
        MassFunction::from_assignments(heat, [(heat.subset(["hot"])?, 0.5), (heat.full(), 0.5)])?;

    let joint = fuse_marginals(&[m_smoke, m_heat], &pf)?;
    println!("joint evidence on {}:", pf.frame().name());
    for (s, m) in joint.focal_elements() {
        println!("  {s}: {m:.3}");
    }
    println!();
    print!(
        "{}",
        BeliefReport::new(propagate_mass(&g, &joint)?).render(OutputFormat::Text)
    );
    Ok(())
}
