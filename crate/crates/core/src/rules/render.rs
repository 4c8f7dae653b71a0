//! Canonical DSL text.
//!
//! Rendering then parsing gives back an equal rule set. Undeclared frames
//! are not written out, so an incomplete rule set stays incomplete.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::{EvidenceDeclaration, RuleFile, RuleSet, Target, TermTarget};
use crate::frames::{Frame, Subset};
use crate::mass::MassFunction;

/// At most nine decimals, trailing zeros trimmed: `0.7`, `1`, `0.123456789`.
pub fn format_strength(v: f64) -> String {
    let s = format!("{v:.9}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn braced(labels: &[&str]) -> String {
    format!("{{{}}}", labels.join(","))
}

/// Singletons bare, larger sets braced.
fn compact(s: &Subset) -> String {
    let labels = s.labels();
    match labels[..] {
        [only] => only.to_string(),
        _ => braced(&labels),
    }
}

fn frame_decls(frame: &Frame, emitted: &mut HashSet<String>, out: &mut String) {
    if !emitted.insert(frame.name().to_string()) {
        return;
    }
    if frame.is_product() {
        for c in frame.components() {
            frame_decls(c, emitted, out);
        }
        let parts: Vec<&str> = frame.components().iter().map(Frame::name).collect();
        writeln!(out, "frame {} = {}", frame.name(), parts.join(" * ")).expect("write to String");
    } else {
        writeln!(
            out,
            "frame {} = {{ {} }}",
            frame.name(),
            frame.elements().join(", ")
        )
        .expect("write to String");
    }
}

fn map_block(rs: &RuleSet, out: &mut String) {
    writeln!(
        out,
        "map {} : {} -> {} {{",
        rs.name(),
        rs.source().name(),
        rs.target().name()
    )
    .expect("write to String");
    for rule in rs.rules() {
        let terms: Vec<String> = rule
            .conclusions
            .iter()
            .map(|c| match &c.target {
                Target::Whole => format!("* : {}", format_strength(c.strength)),
                Target::Set(s) => format!("{}: {}", compact(s), format_strength(c.strength)),
            })
            .collect();
        writeln!(
            out,
            "  {} -> {} ;",
            compact(&rule.antecedent),
            terms.join(", ")
        )
        .expect("write to String");
    }
    out.push_str("}\n");
}

fn declared_frames(rs: &RuleSet, emitted: &mut HashSet<String>, out: &mut String) {
    if rs.is_source_declared() {
        frame_decls(rs.source(), emitted, out);
    }
    if rs.is_target_declared() {
        frame_decls(rs.target(), emitted, out);
    }
}

/// A rule set with the declarations of its declared frames.
pub fn render_ruleset(rs: &RuleSet) -> String {
    let mut out = String::new();
    declared_frames(rs, &mut HashSet::new(), &mut out);
    if !out.is_empty() {
        out.push('\n');
    }
    map_block(rs, &mut out);
    out
}

/// `evidence on E { {e1}: 0.6 ; * : 0.4 ; }`
pub fn render_evidence(ev: &EvidenceDeclaration) -> String {
    let terms: Vec<String> = ev
        .assignments
        .iter()
        .map(|(t, m)| match t {
            TermTarget::Whole => format!("* : {} ;", format_strength(*m)),
            TermTarget::Labels(ls) => {
                let ls: Vec<&str> = ls.iter().map(String::as_str).collect();
                format!("{}: {} ;", braced(&ls), format_strength(*m))
            }
        })
        .collect();
    format!("evidence on {} {{ {} }}\n", ev.frame_name, terms.join(" "))
}

/// A mass function as an evidence block.
pub fn render_mass(m: &MassFunction) -> String {
    render_evidence(&EvidenceDeclaration::from_mass(m))
}

/// Frames first (file declarations, then any other declared frame a rule
/// set uses), then rule sets, then evidence blocks.
pub fn render_file(file: &RuleFile) -> String {
    let mut out = String::new();
    let mut emitted = HashSet::new();
    for f in &file.frames {
        frame_decls(f, &mut emitted, &mut out);
    }
    for rs in &file.maps {
        declared_frames(rs, &mut emitted, &mut out);
    }
    for rs in &file.maps {
        if !out.is_empty() {
            out.push('\n');
        }
        map_block(rs, &mut out);
    }
    if !file.evidence.is_empty() && !out.is_empty() {
        out.push('\n');
    }
    for ev in &file.evidence {
        out.push_str(&render_evidence(ev));
    }
    out
}
