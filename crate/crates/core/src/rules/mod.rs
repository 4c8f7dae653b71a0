//! Heuristic rule sets: parsing, completeness, completion and conversion to
//! evidential mappings.
//!
//! A rule `e -> {h1,h2}: 0.7, * : 0.3 ;` commits mass 0.7 to `{h1,h2}` and
//! 0.3 to the whole conclusion frame when `e` holds. A rule set is complete
//! when both its antecedents and its conclusions range over declared frames
//! and every rule's strengths sum to one. [`complete_ruleset`] fixes the
//! three defects: it adds a complement element (and a vacuous rule for it)
//! to an undeclared antecedent set, adds a complement element to an
//! undeclared conclusion set, and pads short rules with mass on `*`.

mod dsl;
mod render;

use std::collections::HashSet;
use std::fmt;

use indexmap::IndexMap;

use crate::error::{Error, Location, Result};
use crate::frames::{Frame, Subset};
use crate::mapping::EvidentialMapping;
use crate::mass::{MassFunction, MASS_TOLERANCE};
use crate::product::ProductFrame;
use dsl::{FrameBody, Item, Label, MapAst, RuleAst, TargetAst, TermAst};

pub use dsl::MAX_FRACTION_DIGITS;
pub use render::{format_strength, render_evidence, render_file, render_mass, render_ruleset};

/// Name given to rules written outside any `map` block.
pub const IMPLICIT_MAP: &str = "R";

/// Rounds to the nine decimal places the DSL can express.
pub fn round9(v: f64) -> f64 {
    (v * 1e9).round() / 1e9
}

/// What a conclusion commits mass to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    /// The whole conclusion frame, written `*`.
    Whole,
    Set(Subset),
}

impl Target {
    pub fn resolve(&self, frame: &Frame) -> Subset {
        match self {
            Target::Whole => frame.full(),
            Target::Set(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Conclusion {
    pub target: Target,
    pub strength: f64,
}

/// `antecedent -> H_1 (r_1), …, H_k (r_k)`.
#[derive(Debug, Clone)]
pub struct HeuristicRule {
    pub antecedent: Subset,
    pub conclusions: Vec<Conclusion>,
    /// Where the rule was written; `None` for synthesized rules.
    pub location: Option<Location>,
}

impl HeuristicRule {
    pub fn total_strength(&self) -> f64 {
        self.conclusions.iter().map(|c| c.strength).sum()
    }
}

impl PartialEq for HeuristicRule {
    fn eq(&self, other: &Self) -> bool {
        self.antecedent == other.antecedent && self.conclusions == other.conclusions
    }
}

/// Rules from one antecedent frame to one conclusion frame.
///
/// A frame is *declared* when the rule file names it with a `frame`
/// statement; otherwise it was collected from the labels the rules use and
/// is not known to be exhaustive.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleSet {
    name: String,
    source: Frame,
    target: Frame,
    source_declared: bool,
    target_declared: bool,
    rules: Vec<HeuristicRule>,
}

impl RuleSet {
    pub(crate) fn from_parts(
        name: String,
        source: Frame,
        target: Frame,
        declared: (bool, bool),
        rules: Vec<HeuristicRule>,
    ) -> Self {
        RuleSet {
            name,
            source,
            target,
            source_declared: declared.0,
            target_declared: declared.1,
            rules,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Frame {
        &self.source
    }

    pub fn target(&self) -> &Frame {
        &self.target
    }

    pub fn is_source_declared(&self) -> bool {
        self.source_declared
    }

    pub fn is_target_declared(&self) -> bool {
        self.target_declared
    }

    /// Rules in file order.
    pub fn rules(&self) -> &[HeuristicRule] {
        &self.rules
    }

    pub fn rule_for(&self, antecedent: &Subset) -> Option<&HeuristicRule> {
        self.rules.iter().find(|r| &r.antecedent == antecedent)
    }

    pub fn completeness(&self) -> CompletenessReport {
        classify_completeness(self)
    }

    pub fn is_complete(&self) -> bool {
        self.completeness().is_complete()
    }
}

/// The three independent ways a rule set can be incomplete.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletenessReport {
    pub antecedents_not_a_frame: bool,
    pub conclusions_not_a_frame: bool,
    /// Rules whose strengths sum below one, with that sum.
    pub deficient_rules: Vec<(String, f64)>,
}

impl CompletenessReport {
    pub fn is_complete(&self) -> bool {
        !self.antecedents_not_a_frame
            && !self.conclusions_not_a_frame
            && self.deficient_rules.is_empty()
    }

    /// One human-readable line per defect, tagged (a), (b) or (c).
    pub fn reasons(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.antecedents_not_a_frame {
            out.push("(a) the antecedents do not form a declared frame".to_string());
        }
        if self.conclusions_not_a_frame {
            out.push("(b) the conclusions do not form a declared frame".to_string());
        }
        for (rule, total) in &self.deficient_rules {
            out.push(format!(
                "(c) strengths of rule `{rule}` sum to {} < 1",
                format_strength(*total)
            ));
        }
        out
    }
}

pub fn classify_completeness(rs: &RuleSet) -> CompletenessReport {
    CompletenessReport {
        antecedents_not_a_frame: !rs.source_declared,
        conclusions_not_a_frame: !rs.target_declared,
        deficient_rules: rs
            .rules
            .iter()
            .filter_map(|r| {
                let total = r.total_strength();
                (total < 1.0 - MASS_TOLERANCE).then(|| (antecedent_text(&r.antecedent), total))
            })
            .collect(),
    }
}

fn antecedent_text(s: &Subset) -> String {
    if s.is_singleton() {
        s.labels()[0].to_string()
    } else {
        s.to_string()
    }
}

/// Label for the element standing for "none of the listed ones".
fn complement_label(frame: &Frame) -> String {
    let mut label = if frame.len() == 1 {
        format!("!{}", frame.elements()[0])
    } else {
        format!("!{}", frame.name())
    };
    while frame.contains(&label) {
        label.push('_');
    }
    label
}

fn extend_frame(frame: &Frame) -> Result<Frame> {
    let mut elements = frame.elements().to_vec();
    elements.push(complement_label(frame));
    Frame::new(frame.name(), elements)
}

/// Returns a complete rule set together with its antecedent and conclusion
/// frames. Complete inputs come back unchanged.
///
/// Every antecedent element left without a rule, the synthesized complement
/// included, gets the vacuous rule `e -> * : 1`. Fails only if a synthesized
/// complement element would push a frame past the size limit.
pub fn complete_ruleset(rs: &RuleSet) -> Result<(RuleSet, Frame, Frame)> {
    if rs.is_complete() {
        return Ok((rs.clone(), rs.source.clone(), rs.target.clone()));
    }
    let source = if rs.source_declared {
        rs.source.clone()
    } else {
        extend_frame(&rs.source)?
    };
    let target = if rs.target_declared {
        rs.target.clone()
    } else {
        extend_frame(&rs.target)?
    };

    let mut rules = Vec::with_capacity(rs.rules.len() + 1);
    for rule in &rs.rules {
        let mut conclusions = rule
            .conclusions
            .iter()
            .map(|c| {
                Ok(Conclusion {
                    target: match &c.target {
                        Target::Whole => Target::Whole,
                        Target::Set(s) => Target::Set(s.relabel(&target)?),
                    },
                    strength: c.strength,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let total = rule.total_strength();
        if total < 1.0 - MASS_TOLERANCE {
            let pad = round9(1.0 - total);
            match conclusions.iter_mut().find(|c| c.target == Target::Whole) {
                Some(whole) => whole.strength = round9(whole.strength + pad),
                None => conclusions.push(Conclusion {
                    target: Target::Whole,
                    strength: pad,
                }),
            }
        }
        rules.push(HeuristicRule {
            antecedent: rule.antecedent.relabel(&source)?,
            conclusions,
            location: rule.location,
        });
    }
    for i in 0..source.len() {
        let element = source.singleton(i);
        if rules.iter().all(|r| r.antecedent != element) {
            rules.push(HeuristicRule {
                antecedent: element,
                conclusions: vec![Conclusion {
                    target: Target::Whole,
                    strength: 1.0,
                }],
                location: None,
            });
        }
    }
    let completed = RuleSet::from_parts(
        rs.name.clone(),
        source.clone(),
        target.clone(),
        (true, true),
        rules,
    );
    Ok((completed, source, target))
}

/// The evidential mapping a complete rule set describes.
///
/// Every antecedent element needs a rule. Rules on multi-element
/// antecedents become explicit rows of the complete matrix and must respect
/// the average bounds of the rows they replace.
pub fn ruleset_to_mapping(rs: &RuleSet) -> Result<EvidentialMapping> {
    if !rs.is_complete() {
        return Err(Error::IncompleteRuleSet(rs.name.clone()));
    }
    let entries = |rule: &HeuristicRule| -> Vec<(Subset, f64)> {
        rule.conclusions
            .iter()
            .map(|c| (c.target.resolve(&rs.target), c.strength))
            .collect()
    };
    let mut images = Vec::with_capacity(rs.source.len());
    for (i, element) in rs.source.elements().iter().enumerate() {
        let rule = rs
            .rule_for(&rs.source.singleton(i))
            .ok_or_else(|| Error::MissingRule {
                frame: rs.source.name().to_string(),
                element: element.clone(),
            })?;
        images.push(entries(rule));
    }
    let mut g = EvidentialMapping::new(rs.name.clone(), &rs.source, &rs.target, images)?;
    for rule in rs.rules.iter().filter(|r| r.antecedent.len() > 1) {
        g = g.with_override(rule.antecedent.clone(), entries(rule))?;
    }
    Ok(g)
}

/// Largest-remainder rounding of masses summing to one onto the nine-digit
/// grid, so the rounded strengths still sum to exactly one. Entries that
/// round to zero are dropped.
fn round_masses(pairs: &[(Subset, f64)]) -> Vec<(Subset, f64)> {
    const SCALE: f64 = 1e9;
    let mut units: Vec<i64> = pairs
        .iter()
        .map(|(_, m)| (m * SCALE).floor() as i64)
        .collect();
    let fracs: Vec<f64> = pairs
        .iter()
        .zip(&units)
        .map(|((_, m), &u)| m * SCALE - u as f64)
        .collect();
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.sort_by(|&a, &b| fracs[b].total_cmp(&fracs[a]).then(a.cmp(&b)));
    let mut deficit = 1_000_000_000 - units.iter().sum::<i64>();
    let mut k = 0;
    while deficit > 0 {
        units[order[k % order.len()]] += 1;
        deficit -= 1;
        k += 1;
    }
    k = 0;
    while deficit < 0 && k < 4 * order.len() {
        let j = order[order.len() - 1 - k % order.len()];
        if units[j] > 0 {
            units[j] -= 1;
            deficit += 1;
        }
        k += 1;
    }
    pairs
        .iter()
        .zip(units)
        .filter(|(_, u)| *u > 0)
        .map(|((s, _), u)| (s.clone(), u as f64 / SCALE))
        .collect()
}

/// Rule set describing an existing mapping, one rule per source element
/// plus one per explicit multi-element row. Strengths are rounded to nine
/// decimals.
pub fn mapping_to_ruleset(g: &EvidentialMapping) -> RuleSet {
    let conclusions = |pairs: &[(Subset, f64)]| -> Vec<Conclusion> {
        round_masses(pairs)
            .into_iter()
            .map(|(s, m)| Conclusion {
                target: if s.is_full() {
                    Target::Whole
                } else {
                    Target::Set(s)
                },
                strength: m,
            })
            .collect()
    };
    let mut rules: Vec<HeuristicRule> = (0..g.source().len())
        .map(|i| HeuristicRule {
            antecedent: g.source().singleton(i),
            conclusions: conclusions(g.image(i)),
            location: None,
        })
        .collect();
    rules.extend(g.overrides().map(|row| HeuristicRule {
        antecedent: row.title.clone(),
        conclusions: conclusions(&row.entries),
        location: None,
    }));
    RuleSet::from_parts(
        g.name().to_string(),
        g.source().clone(),
        g.target().clone(),
        (true, true),
        rules,
    )
}

/// Builds `E -> H (c_H), ¬H (c_not), * (rest) ; ¬E -> * (1)` over
/// `E = {E, !E}` and `H = {H, !H}`, dropping zero terms.
fn two_by_two(e_label: &str, h_label: &str, c_h: f64, c_not: f64, rest: f64) -> Result<RuleSet> {
    let not_e = format!("!{e_label}");
    let not_h = format!("!{h_label}");
    let source = Frame::new("E", [e_label, not_e.as_str()])?;
    let target = Frame::new("H", [h_label, not_h.as_str()])?;
    let conclusions = [
        (Target::Set(target.singleton(0)), c_h),
        (Target::Set(target.singleton(1)), c_not),
        (Target::Whole, rest),
    ]
    .into_iter()
    .map(|(target, s)| Conclusion {
        target,
        strength: round9(s),
    })
    .filter(|c| c.strength > 0.0)
    .collect();
    let rules = vec![
        HeuristicRule {
            antecedent: source.singleton(0),
            conclusions,
            location: None,
        },
        HeuristicRule {
            antecedent: source.singleton(1),
            conclusions: vec![Conclusion {
                target: Target::Whole,
                strength: 1.0,
            }],
            location: None,
        },
    ];
    Ok(RuleSet::from_parts(
        IMPLICIT_MAP.into(),
        source,
        target,
        (true, true),
        rules,
    ))
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidConversion(format!(
            "{name} = {v} is outside [0, 1]"
        )))
    }
}

/// `E -> H with c` and `E -> ¬H with d`: belief `c` for `H`, `d` against it.
pub fn from_ginsberg(e_label: &str, h_label: &str, c: f64, d: f64) -> Result<RuleSet> {
    check_unit("c", c)?;
    check_unit("d", d)?;
    if c + d > 1.0 + MASS_TOLERANCE {
        return Err(Error::InvalidConversion(format!(
            "c + d = {} exceeds 1",
            c + d
        )));
    }
    two_by_two(e_label, h_label, c, d, 1.0 - c - d)
}

/// `E -> H with [c, d]`: belief `c` and plausibility `d` for `H`.
pub fn from_hau_kashyap(e_label: &str, h_label: &str, c: f64, d: f64) -> Result<RuleSet> {
    check_unit("c", c)?;
    check_unit("d", d)?;
    if c > d {
        return Err(Error::InvalidConversion(format!("c = {c} exceeds d = {d}")));
    }
    two_by_two(e_label, h_label, c, 1.0 - d, d - c)
}

/// Target of an evidence term, kept unresolved until a frame is chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermTarget {
    Whole,
    Labels(Vec<String>),
}

/// `evidence on E { {e1}: 0.6 ; * : 0.4 ; }`
///
/// Equality ignores source locations.
#[derive(Debug, Clone)]
pub struct EvidenceDeclaration {
    pub frame_name: String,
    pub assignments: Vec<(TermTarget, f64)>,
    locations: Vec<Location>,
}

impl PartialEq for EvidenceDeclaration {
    fn eq(&self, other: &Self) -> bool {
        self.frame_name == other.frame_name && self.assignments == other.assignments
    }
}

impl EvidenceDeclaration {
    pub fn new(frame_name: impl Into<String>, assignments: Vec<(TermTarget, f64)>) -> Self {
        let locations = vec![Location { line: 0, column: 0 }; assignments.len()];
        EvidenceDeclaration {
            frame_name: frame_name.into(),
            assignments,
            locations,
        }
    }

    /// Declaration listing every focal element of `m`.
    pub fn from_mass(m: &MassFunction) -> Self {
        let assignments = m
            .focal_elements()
            .map(|(s, v)| {
                let target = if s.is_full() {
                    TermTarget::Whole
                } else {
                    TermTarget::Labels(s.labels().into_iter().map(String::from).collect())
                };
                (target, v)
            })
            .collect();
        Self::new(m.frame().name(), assignments)
    }

    /// Resolves the declaration on `frame`, which must carry the declared
    /// name. With `normalize`, a total within `[0.9, 1.1]` is rescaled to one;
    /// otherwise the total must already be one.
    pub fn to_mass(&self, frame: &Frame, normalize: bool) -> Result<MassFunction> {
        if frame.name() != self.frame_name {
            return Err(Error::FrameMismatch {
                expected: frame.name().to_string(),
                found: self.frame_name.clone(),
            });
        }
        let mut pairs = Vec::with_capacity(self.assignments.len());
        for ((target, mass), at) in self.assignments.iter().zip(&self.locations) {
            let subset = match target {
                TermTarget::Whole => frame.full(),
                TermTarget::Labels(labels) => {
                    for l in labels {
                        if !frame.contains(l) {
                            return Err(Error::UnknownLabelAt {
                                location: *at,
                                frame: frame.name().to_string(),
                                label: l.clone(),
                            });
                        }
                    }
                    frame.subset(labels)?
                }
            };
            pairs.push((subset, *mass));
        }
        if normalize {
            let total: f64 = pairs.iter().map(|(_, m)| m).sum();
            if !(0.9..=1.1).contains(&total) {
                return Err(Error::NotNormalized { total });
            }
            for (_, m) in &mut pairs {
                *m /= total;
            }
        }
        MassFunction::from_assignments(frame, pairs)
    }
}

/// Everything one DSL file declares.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleFile {
    /// Frames named by `frame` statements, in file order.
    pub frames: Vec<Frame>,
    pub maps: Vec<RuleSet>,
    pub evidence: Vec<EvidenceDeclaration>,
}

impl RuleFile {
    pub fn frame(&self, name: &str) -> Option<&Frame> {
        self.frames.iter().find(|f| f.name() == name)
    }

    /// The only rule set in the file.
    pub fn single_map(&self) -> Result<&RuleSet> {
        match &self.maps[..] {
            [only] => Ok(only),
            maps => Err(Error::Semantic {
                location: Location { line: 1, column: 1 },
                message: format!("expected exactly one rule set, found {}", maps.len()),
            }),
        }
    }
}

/// Parses a DSL file: frame declarations, rule sets and evidence blocks.
///
/// Rules outside a `map` block form one rule set named [`IMPLICIT_MAP`]. Its
/// antecedent (conclusion) frame is the single declared frame containing
/// every antecedent (conclusion) label, or an undeclared frame built from
/// those labels when no declared frame does.
pub fn parse_rules(text: &str) -> Result<RuleFile> {
    let items = dsl::parse_items(text)?;
    let mut frames: IndexMap<String, Frame> = IndexMap::new();
    for item in &items {
        if let Item::Frame(decl) = item {
            let name = &decl.name;
            if frames.contains_key(&name.name) {
                return Err(semantic(
                    name.at,
                    format!("frame `{}` declared twice", name.name),
                ));
            }
            let frame = match &decl.body {
                FrameBody::Labels(labels) => {
                    Frame::new(name.name.clone(), labels.iter().map(|l| l.name.clone()))
                        .map_err(|e| semantic(name.at, e.to_string()))?
                }
                FrameBody::Product(parts) => {
                    let components = parts
                        .iter()
                        .map(|p| {
                            frames.get(&p.name).cloned().ok_or_else(|| {
                                semantic(
                                    p.at,
                                    format!("frame `{}` is not declared before use", p.name),
                                )
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    ProductFrame::named(name.name.clone(), &components)
                        .map_err(|e| semantic(name.at, e.to_string()))?
                        .frame()
                        .clone()
                }
            };
            frames.insert(name.name.clone(), frame);
        }
    }

    let mut maps = Vec::new();
    let mut evidence = Vec::new();
    let mut loose: Vec<&RuleAst> = Vec::new();
    for item in &items {
        match item {
            Item::Frame(_) => {}
            Item::Map(m) => maps.push(build_map(m, &frames)?),
            Item::Rule(r) => loose.push(r),
            Item::Evidence(e) => evidence.push(build_evidence(&e.frame, &e.terms)),
        }
    }
    if !loose.is_empty() {
        let mut name = IMPLICIT_MAP.to_string();
        while maps.iter().any(|m: &RuleSet| m.name == name) {
            name.push('_');
        }
        maps.push(build_implicit(name, &loose, &frames)?);
    }
    let names: HashSet<&str> = maps.iter().map(|m| m.name.as_str()).collect();
    if names.len() != maps.len() {
        return Err(semantic(
            Location { line: 1, column: 1 },
            "two rule sets share a name",
        ));
    }
    Ok(RuleFile {
        frames: frames.into_values().collect(),
        maps,
        evidence,
    })
}

fn semantic(location: Location, message: impl Into<String>) -> Error {
    Error::Semantic {
        location,
        message: message.into(),
    }
}

fn build_evidence(frame: &Label, terms: &[TermAst]) -> EvidenceDeclaration {
    let assignments = terms
        .iter()
        .map(|t| {
            let target = match &t.target {
                TargetAst::Whole => TermTarget::Whole,
                TargetAst::Labels(ls) => {
                    TermTarget::Labels(ls.iter().map(|l| l.name.clone()).collect())
                }
            };
            (target, t.value)
        })
        .collect();
    EvidenceDeclaration {
        frame_name: frame.name.clone(),
        assignments,
        locations: terms.iter().map(|t| t.at).collect(),
    }
}

fn antecedent_labels<'a>(rules: impl IntoIterator<Item = &'a RuleAst>) -> Vec<&'a Label> {
    rules
        .into_iter()
        .flat_map(|r| r.antecedent.iter())
        .collect()
}

fn conclusion_labels<'a>(rules: impl IntoIterator<Item = &'a RuleAst>) -> Vec<&'a Label> {
    rules
        .into_iter()
        .flat_map(|r| r.terms.iter())
        .flat_map(|t| match &t.target {
            TargetAst::Whole => &[][..],
            TargetAst::Labels(ls) => &ls[..],
        })
        .collect()
}

/// Frame made of the given labels in first-occurrence order.
fn collected_frame(name: &str, labels: &[&Label], at: Location) -> Result<Frame> {
    let mut seen: Vec<String> = Vec::new();
    for l in labels {
        if !seen.contains(&l.name) {
            seen.push(l.name.clone());
        }
    }
    if seen.is_empty() {
        return Err(semantic(
            at,
            format!("frame `{name}` is not declared and no rule names any of its elements"),
        ));
    }
    Frame::new(name, seen).map_err(|e| semantic(at, e.to_string()))
}

fn build_map(m: &MapAst, frames: &IndexMap<String, Frame>) -> Result<RuleSet> {
    let (source, source_declared) = match frames.get(&m.source.name) {
        Some(f) => (f.clone(), true),
        None => (
            collected_frame(&m.source.name, &antecedent_labels(&m.rules), m.source.at)?,
            false,
        ),
    };
    let (target, target_declared) = match frames.get(&m.target.name) {
        Some(f) => (f.clone(), true),
        None => (
            collected_frame(&m.target.name, &conclusion_labels(&m.rules), m.target.at)?,
            false,
        ),
    };
    build_ruleset(
        m.name.name.clone(),
        source,
        target,
        (source_declared, target_declared),
        m.rules.iter(),
    )
}

fn unique_name(base: &str, frames: &IndexMap<String, Frame>) -> String {
    let mut name = base.to_string();
    while frames.contains_key(&name) {
        name.push('_');
    }
    name
}

/// The single declared frame containing every label, if any; more than one
/// candidate is an error.
fn declared_home(
    labels: &[&Label],
    frames: &IndexMap<String, Frame>,
    exclude: Option<&Frame>,
    at: Location,
) -> Result<Option<Frame>> {
    let candidates: Vec<&Frame> = frames
        .values()
        .filter(|f| Some(*f) != exclude)
        .filter(|f| labels.iter().all(|l| f.contains(&l.name)))
        .collect();
    match candidates[..] {
        [] => Ok(None),
        [only] => Ok(Some(only.clone())),
        _ => Err(semantic(
            at,
            format!(
                "labels fit more than one declared frame ({}); use a `map` block",
                candidates
                    .iter()
                    .map(|f| f.name())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        )),
    }
}

fn build_implicit(
    name: String,
    rules: &[&RuleAst],
    frames: &IndexMap<String, Frame>,
) -> Result<RuleSet> {
    let at = rules[0].at;
    let ante = antecedent_labels(rules.iter().copied());
    let (source, source_declared) = match declared_home(&ante, frames, None, at)? {
        Some(f) => (f, true),
        None => (
            collected_frame(&unique_name("E", frames), &ante, at)?,
            false,
        ),
    };
    let concl = conclusion_labels(rules.iter().copied());
    let home = if concl.is_empty() && frames.is_empty() {
        None
    } else {
        declared_home(&concl, frames, source_declared.then_some(&source), at)?
    };
    let (target, target_declared) = match home {
        Some(f) => (f, true),
        None => (
            collected_frame(&unique_name("H", frames), &concl, at)?,
            false,
        ),
    };
    build_ruleset(
        name,
        source,
        target,
        (source_declared, target_declared),
        rules.iter().copied(),
    )
}

fn resolve_labels(frame: &Frame, labels: &[Label]) -> Result<Subset> {
    for l in labels {
        if !frame.contains(&l.name) {
            return Err(Error::UnknownLabelAt {
                location: l.at,
                frame: frame.name().to_string(),
                label: l.name.clone(),
            });
        }
    }
    frame.subset(labels.iter().map(|l| l.name.as_str()))
}

fn build_ruleset<'a>(
    name: String,
    source: Frame,
    target: Frame,
    declared: (bool, bool),
    asts: impl Iterator<Item = &'a RuleAst>,
) -> Result<RuleSet> {
    let mut rules: Vec<HeuristicRule> = Vec::new();
    for ast in asts {
        let rule = build_rule(ast, &source, &target, declared.1)?;
        if rules.iter().any(|r| r.antecedent == rule.antecedent) {
            return Err(Error::DuplicateAntecedent {
                location: ast.at,
                antecedent: antecedent_text(&rule.antecedent),
            });
        }
        rules.push(rule);
    }
    Ok(RuleSet::from_parts(name, source, target, declared, rules))
}

fn build_rule(
    ast: &RuleAst,
    source: &Frame,
    target: &Frame,
    target_declared: bool,
) -> Result<HeuristicRule> {
    let antecedent = resolve_labels(source, &ast.antecedent)?;
    let mut conclusions: Vec<Conclusion> = Vec::with_capacity(ast.terms.len());
    for term in &ast.terms {
        if !(term.value > 0.0 && term.value <= 1.0) {
            return Err(Error::StrengthOutOfRange {
                location: term.at,
                value: term.value,
            });
        }
        let t = match &term.target {
            TargetAst::Whole => Target::Whole,
            TargetAst::Labels(labels) => {
                let s = resolve_labels(target, labels)?;
                // on an undeclared frame the listed labels need not be exhaustive
                if s.is_full() && target_declared {
                    Target::Whole
                } else {
                    Target::Set(s)
                }
            }
        };
        if conclusions.iter().any(|c| c.target == t) {
            return Err(Error::DuplicateConclusion {
                location: term.at,
                target: match &t {
                    Target::Whole => "*".to_string(),
                    Target::Set(s) => s.to_string(),
                },
            });
        }
        conclusions.push(Conclusion {
            target: t,
            strength: term.value,
        });
    }
    let rule = HeuristicRule {
        antecedent,
        conclusions,
        location: Some(ast.at),
    };
    let total = rule.total_strength();
    if total > 1.0 + MASS_TOLERANCE {
        return Err(Error::StrengthSumExceeded {
            location: ast.at,
            antecedent: antecedent_text(&rule.antecedent),
            total,
        });
    }
    Ok(rule)
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_ruleset(self))
    }
}

#[cfg(test)]
mod tests;
