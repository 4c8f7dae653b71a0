//! Driving the command-line interface in process, as the `evidential`
//! binary does.
//!
//! Run with `cargo run --example command_line`.

use evidential::cli::run_args;

fn main() -> std::io::Result<()> {
    let dir = tempfile::tempdir()?;
    let rules = dir.path().join("smoke.rules");
    let evidence = dir.path().join("ring.ev");
    std::fs::write(&rules, "rule alarm_rings -> fire: 0.9 ;\n")?;
    std::fs::write(
        &evidence,
        "evidence on E { {alarm_rings}: 0.8 ; * : 0.2 ; }\n",
    )?;

    for args in [
        vec!["check".into(), rules.display().to_string()],
        vec!["complete".into(), rules.display().to_string()],
        vec![
            "--format".into(),
            "tsv".into(),
            "propagate".into(),
            "--map".into(),
            rules.display().to_string(),
            "--evidence".into(),
            evidence.display().to_string(),
        ],
    ] {
        let out = run_args(std::iter::once("evidential".to_string()).chain(args.clone()));
        println!("$ evidential {}", args.join(" "));
        print!("{}{}", out.stdout, out.stderr);
        println!("[exit {}]\n", out.code);
    }
    Ok(())
}
