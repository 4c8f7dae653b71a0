use std::fmt::Write as _;

use crate::frames::Subset;
use crate::mass::MassFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    /// Aligned columns with diagnostics underneath.
    #[default]
    Text,
    /// `SET<TAB>MASS<TAB>BEL<TAB>PL` rows; diagnostics follow as `#` lines.
    Tsv,
}

/// Conflict discarded by one Dempster step and by all steps so far.
#[derive(Debug, Clone, PartialEq)]
pub struct ConflictStep {
    pub label: String,
    pub conflict: f64,
    /// `1 - Π (1 - conflict_k)` over this and earlier steps.
    pub cumulative: f64,
}

/// A mass function with belief and plausibility of every focal element,
/// plus how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefReport {
    pub mass: MassFunction,
    pub conflicts: Vec<ConflictStep>,
    /// Inputs and mappings applied, in order.
    pub trail: Vec<String>,
    /// Intermediate mass functions shown on request.
    pub intermediate: Vec<(String, MassFunction)>,
    pub notes: Vec<String>,
}

impl BeliefReport {
    pub fn new(mass: MassFunction) -> Self {
        BeliefReport {
            mass,
            conflicts: Vec::new(),
            trail: Vec::new(),
            intermediate: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Records one combination step and its running conflict.
    pub fn push_conflict(&mut self, label: impl Into<String>, conflict: f64) {
        let kept = self
            .conflicts
            .last()
            .map_or(1.0, |c: &ConflictStep| 1.0 - c.cumulative);
        self.conflicts.push(ConflictStep {
            label: label.into(),
            conflict,
            cumulative: 1.0 - kept * (1.0 - conflict),
        });
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.text(),
            OutputFormat::Tsv => self.tsv(),
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        for (title, m) in &self.intermediate {
            writeln!(out, "{title}").unwrap();
            text_table(m, &mut out);
            out.push('\n');
        }
        writeln!(out, "mass on {}", self.mass.frame().name()).unwrap();
        text_table(&self.mass, &mut out);
        for c in &self.conflicts {
            writeln!(
                out,
                "conflict {}: {:.9} (cumulative {:.9})",
                c.label, c.conflict, c.cumulative
            )
            .unwrap();
        }
        for n in &self.notes {
            writeln!(out, "{n}").unwrap();
        }
        if !self.trail.is_empty() {
            out.push_str("trail:\n");
            for t in &self.trail {
                writeln!(out, "  {t}").unwrap();
            }
        }
        out
    }

    fn tsv(&self) -> String {
        let mut out = String::from("SET\tMASS\tBEL\tPL\n");
        for (s, m, bel, pl) in rows(&self.mass) {
            writeln!(out, "{s}\t{m:.9}\t{bel:.9}\t{pl:.9}").unwrap();
        }
        for c in &self.conflicts {
            writeln!(
                out,
                "# conflict\t{}\t{:.9}\t{:.9}",
                c.label, c.conflict, c.cumulative
            )
            .unwrap();
        }
        for (title, m) in &self.intermediate {
            for (s, v, _, _) in rows(m) {
                writeln!(out, "# {title}\t{s}\t{v:.9}").unwrap();
            }
        }
        for n in &self.notes {
            writeln!(out, "# {n}").unwrap();
        }
        for t in &self.trail {
            writeln!(out, "# trail\t{t}").unwrap();
        }
        out
    }
}

fn rows(m: &MassFunction) -> Vec<(&Subset, f64, f64, f64)> {
    m.focal_elements()
        .map(|(s, v)| {
            let bel = m.belief(s).expect("focal element of the same frame");
            let pl = m.plausibility(s).expect("focal element of the same frame");
            (s, v, bel, pl)
        })
        .collect()
}

fn text_table(m: &MassFunction, out: &mut String) {
    let rows = rows(m);
    let names: Vec<String> = rows.iter().map(|(s, ..)| s.to_string()).collect();
    let width = names.iter().map(String::len).max().unwrap_or(0).max(3);
    writeln!(
        out,
        "{:<width$}  {:>11}  {:>11}  {:>11}",
        "set", "mass", "bel", "pl"
    )
    .unwrap();
    for (name, (_, v, bel, pl)) in names.iter().zip(&rows) {
        writeln!(out, "{name:<width$}  {v:>11.9}  {bel:>11.9}  {pl:>11.9}").unwrap();
    }
    writeln!(out, "total {:.9}", m.total()).unwrap();
}
