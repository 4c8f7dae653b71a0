//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, I/O or parse failure, 2 incomplete rule
//! set (`check` only), 3 inference failure (total conflict or impossible
//! observations). Rule files are completed automatically unless `--strict`
//! is given.

mod report;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::frames::Frame;
use crate::mapping::{
    combine_mappings, posterior, posterior_by_enumeration, EvidentialMapping, Propagator,
    MAX_EXPORT_FRAME,
};
use crate::mass::{combine_dempster, MassFunction};
use crate::product::{fuse_marginals, propagate_joint, ProductFrame};
use crate::rules::{
    complete_ruleset, mapping_to_ruleset, parse_rules, render_file, render_ruleset,
    ruleset_to_mapping, EvidenceDeclaration, RuleFile,
};

pub use report::{BeliefReport, ConflictStep, OutputFormat};

#[derive(Debug, Parser)]
#[command(
    name = "evidential",
    version,
    about = "Propagate Dempster-Shafer beliefs through heuristic rule sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: GlobalOptions,
}

#[derive(Debug, Args)]
pub struct GlobalOptions {
    /// Report layout.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,
    /// Fail on incomplete rule files instead of completing them.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Rescale evidence whose masses sum to anything in [0.9, 1.1].
    #[arg(long, global = true)]
    pub normalize: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report whether each rule set in a file is complete.
    Check { rules: PathBuf },
    /// Write the completed rule file in canonical form.
    Complete {
        rules: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Propagate evidence through a mapping or a chain of mappings.
    Propagate {
        #[arg(long)]
        map: PathBuf,
        /// Further mappings applied in order after `--map`.
        #[arg(long, num_args = 1..)]
        chain: Vec<PathBuf>,
        #[arg(long)]
        evidence: PathBuf,
        /// Append the complete matrix when the source frame has at most N elements.
        #[arg(long, value_name = "N")]
        export_cem: Option<usize>,
    },
    /// Combine pieces of evidence on one frame with Dempster's rule.
    CombineEvidence {
        #[arg(long)]
        frame: String,
        #[arg(long, num_args = 2.., required = true)]
        evidence: Vec<PathBuf>,
    },
    /// Combine two mappings between the same frames.
    CombineMaps {
        #[arg(long, num_args = 2, required = true)]
        map: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Posterior over hypotheses after observing elements of the evidence frame.
    Posterior {
        #[arg(long)]
        prior: PathBuf,
        #[arg(long)]
        map: PathBuf,
        /// Observed elements, comma separated; repeats count twice.
        #[arg(long, value_delimiter = ',')]
        observe: Vec<String>,
        /// Cross-check against brute-force enumeration of the joint distribution.
        #[arg(long)]
        verify: bool,
    },
    /// Fuse evidence on component frames and propagate it from their product.
    Fuse {
        #[arg(long, num_args = 1.., required = true)]
        components: Vec<PathBuf>,
        #[arg(long)]
        map: PathBuf,
        /// Also show the fused mass on the product frame.
        #[arg(long)]
        trace: bool,
    },
}

/// What a command printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TotalConflict | Error::RowConflict { .. } | Error::ImpossibleObservations => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let mut session = Session {
        options: &cli.options,
        out: String::new(),
        err: String::new(),
        code: 0,
    };
    let result = match &cli.command {
        Command::Check { rules } => session.check(rules),
        Command::Complete { rules, out } => session.complete(rules, out.as_deref()),
        Command::Propagate {
            map,
            chain,
            evidence,
            export_cem,
        } => session.propagate(map, chain, evidence, *export_cem),
        Command::CombineEvidence { frame, evidence } => session.combine_evidence(frame, evidence),
        Command::CombineMaps { map, out } => session.combine_maps(&map[0], &map[1], out.as_deref()),
        Command::Posterior {
            prior,
            map,
            observe,
            verify,
        } => session.posterior(prior, map, observe, *verify),
        Command::Fuse {
            components,
            map,
            trace,
        } => session.fuse(components, map, *trace),
    };
    if let Err(f) = result {
        writeln!(session.err, "error: {}", f.message).unwrap();
        session.code = f.code;
    }
    Outcome {
        code: session.code,
        stdout: session.out,
        stderr: session.err,
    }
}

struct Session<'a> {
    options: &'a GlobalOptions,
    out: String,
    err: String,
    code: i32,
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CmdResult {
    std::fs::write(path, text)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn parse_file(path: &Path) -> std::result::Result<RuleFile, Failure> {
    let text = read(path)?;
    parse_rules(&text).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}:{}", path.display(), f.message);
        f
    })
}

impl Session<'_> {
    fn notice(&mut self, text: impl AsRef<str>) {
        writeln!(self.err, "notice: {}", text.as_ref()).unwrap();
    }

    /// The single rule set of a file as a mapping, completed unless strict.
    fn load_map(
        &mut self,
        path: &Path,
    ) -> std::result::Result<(EvidentialMapping, RuleFile), Failure> {
        let file = parse_file(path)?;
        let rs = file.single_map()?.clone();
        let report = rs.completeness();
        let rs = if report.is_complete() {
            rs
        } else if self.options.strict {
            let reasons = report.reasons().join("; ");
            return Err(Failure::usage(format!(
                "{}: rule set `{}` is incomplete: {reasons}",
                path.display(),
                rs.name()
            )));
        } else {
            self.notice(format!(
                "{}: completed rule set `{}` ({})",
                path.display(),
                rs.name(),
                report.reasons().join("; ")
            ));
            complete_ruleset(&rs)?.0
        };
        Ok((ruleset_to_mapping(&rs)?, file))
    }

    /// The single evidence block of a file, resolved on `frame`.
    fn load_evidence(
        &self,
        path: &Path,
        frame: &Frame,
    ) -> std::result::Result<MassFunction, Failure> {
        let file = parse_file(path)?;
        let ev = match &file.evidence[..] {
            [only] => only,
            other => {
                return Err(Failure::usage(format!(
                    "{}: expected one evidence block, found {}",
                    path.display(),
                    other.len()
                )))
            }
        };
        Ok(ev.to_mass(frame, self.options.normalize)?)
    }

    fn check(&mut self, path: &Path) -> CmdResult {
        let file = parse_file(path)?;
        if file.maps.is_empty() {
            return Err(Failure::usage(format!("{}: no rule set", path.display())));
        }
        let mut all = true;
        for rs in &file.maps {
            let report = rs.completeness();
            if report.is_complete() {
                writeln!(self.out, "{}: complete", rs.name()).unwrap();
            } else {
                all = false;
                writeln!(self.out, "{}: incomplete", rs.name()).unwrap();
                for r in report.reasons() {
                    writeln!(self.out, "  {r}").unwrap();
                }
            }
        }
        if !all {
            self.code = 2;
        }
        Ok(())
    }

    fn complete(&mut self, path: &Path, out: Option<&Path>) -> CmdResult {
        let mut file = parse_file(path)?;
        for rs in &mut file.maps {
            if !rs.is_complete() {
                self.notice(format!("completed rule set `{}`", rs.name()));
                *rs = complete_ruleset(rs)?.0;
            }
        }
        let text = render_file(&file);
        match out {
            Some(p) => write(p, &text),
            None => {
                self.out.push_str(&text);
                Ok(())
            }
        }
    }

    fn propagate(
        &mut self,
        map: &Path,
        chain: &[PathBuf],
        evidence: &Path,
        export_cem: Option<usize>,
    ) -> CmdResult {
        if let Some(n) = export_cem {
            if n > MAX_EXPORT_FRAME {
                return Err(Failure::usage(format!(
                    "--export-cem accepts at most {MAX_EXPORT_FRAME}, got {n}"
                )));
            }
        }
        let (first, _) = self.load_map(map)?;
        let mut trail = vec![format!(
            "map {}: {} -> {}",
            first.name(),
            first.source().name(),
            first.target().name()
        )];
        let mut propagator = Propagator::from(first);
        for path in chain {
            let (g, _) = self.load_map(path)?;
            trail.push(format!(
                "map {}: {} -> {}",
                g.name(),
                g.source().name(),
                g.target().name()
            ));
            propagator = propagator.then(g)?;
        }
        let m = self.load_evidence(evidence, propagator.source())?;
        trail.insert(
            0,
            format!(
                "evidence on {} from {}",
                m.frame().name(),
                evidence.display()
            ),
        );
        let mut report = BeliefReport::new(propagator.propagate(&m)?);
        report.trail = trail;
        self.out.push_str(&report.render(self.options.format));

        if let Some(n) = export_cem {
            let size = propagator.source().len();
            if size <= n {
                self.out.push_str("# CEM\n");
                self.out.push_str(&propagator.export_cem()?);
            } else {
                self.notice(format!(
                    "complete matrix not exported: source frame has {size} elements, limit {n}"
                ));
            }
        }
        Ok(())
    }

    fn combine_evidence(&mut self, frame_name: &str, paths: &[PathBuf]) -> CmdResult {
        let files = paths
            .iter()
            .map(|p| Ok((p, parse_file(p)?)))
            .collect::<std::result::Result<Vec<_>, Failure>>()?;
        let mut frame: Option<Frame> = None;
        for (_, f) in &files {
            if let Some(decl) = f.frame(frame_name) {
                match &frame {
                    Some(existing) => existing.ensure_same(decl)?,
                    None => frame = Some(decl.clone()),
                }
            }
        }
        let frame = frame.ok_or_else(|| {
            Failure::usage(format!("no evidence file declares frame `{frame_name}`"))
        })?;
        let mut pieces: Vec<(String, &EvidenceDeclaration)> = Vec::new();
        for (p, f) in &files {
            for ev in f.evidence.iter().filter(|e| e.frame_name == frame_name) {
                pieces.push((p.display().to_string(), ev));
            }
        }
        if pieces.len() < 2 {
            return Err(Failure::usage(format!(
                "need at least two pieces of evidence on `{frame_name}`, found {}",
                pieces.len()
            )));
        }
        let mut trail = Vec::new();
        let mut acc: Option<MassFunction> = None;
        let mut steps = Vec::new();
        for (source, ev) in &pieces {
            let m = ev.to_mass(&frame, self.options.normalize)?;
            trail.push(format!("evidence on {frame_name} from {source}"));
            acc = Some(match acc {
                None => m,
                Some(prev) => {
                    let c = combine_dempster(&prev, &m)?;
                    steps.push((format!("with {source}"), c.conflict));
                    c.mass
                }
            });
        }
        let mut report = BeliefReport::new(acc.expect("at least two pieces"));
        for (label, k) in steps {
            report.push_conflict(label, k);
        }
        report.trail = trail;
        self.out.push_str(&report.render(self.options.format));
        Ok(())
    }

    fn combine_maps(&mut self, a: &Path, b: &Path, out: Option<&Path>) -> CmdResult {
        let (g1, _) = self.load_map(a)?;
        let (g2, _) = self.load_map(b)?;
        let joint = combine_mappings(&g1, &g2)?;
        let text = render_ruleset(&mapping_to_ruleset(&joint.mapping));
        let mut diagnostics = String::new();
        for (element, k) in g1.source().elements().iter().zip(&joint.conflicts) {
            writeln!(diagnostics, "row {element}: discarded conflict {k:.9}").unwrap();
        }
        for (element, k) in joint.high_conflict_rows() {
            writeln!(
                diagnostics,
                "warning: row {element} discarded conflict {k:.9}, more than half its mass"
            )
            .unwrap();
        }
        match out {
            Some(p) => {
                write(p, &text)?;
                self.out.push_str(&diagnostics);
            }
            None => {
                self.out.push_str(&text);
                self.err.push_str(&diagnostics);
            }
        }
        Ok(())
    }

    fn posterior(
        &mut self,
        prior: &Path,
        map: &Path,
        observe: &[String],
        verify: bool,
    ) -> CmdResult {
        let (g, _) = self.load_map(map)?;
        let p = self.load_evidence(prior, g.source())?;
        let observed = observe
            .iter()
            .map(|l| g.target().singleton_of(l.trim()))
            .collect::<crate::error::Result<Vec<_>>>()?;
        let post = posterior(&p, &g, &observed)?;
        let mut report = BeliefReport::new(post.clone());
        report.trail = vec![
            format!("prior on {} from {}", g.source().name(), prior.display()),
            format!(
                "map {}: {} -> {}",
                g.name(),
                g.source().name(),
                g.target().name()
            ),
            format!(
                "observed: {}",
                if observe.is_empty() {
                    "nothing".to_string()
                } else {
                    observe.join(", ")
                }
            ),
        ];
        if verify {
            let oracle = posterior_by_enumeration(&p, &g, &observed)?;
            let deviation = (0..g.source().len())
                .map(|i| {
                    let h = g.source().singleton(i);
                    (post.mass(&h) - oracle.mass(&h)).abs()
                })
                .fold(0.0, f64::max);
            report.notes.push(format!(
                "verify: max deviation from joint enumeration {deviation:.3e}"
            ));
        }
        self.out.push_str(&report.render(self.options.format));
        Ok(())
    }

    fn fuse(&mut self, components: &[PathBuf], map: &Path, trace: bool) -> CmdResult {
        let (g, _) = self.load_map(map)?;
        let pf = ProductFrame::from_frame(g.source()).ok_or_else(|| {
            Failure::usage(format!(
                "source frame `{}` of the map is not a product",
                g.source().name()
            ))
        })?;
        let mut masses: Vec<Option<(MassFunction, String)>> = vec![None; pf.components().len()];
        for path in components {
            let file = parse_file(path)?;
            for ev in &file.evidence {
                let Some(k) = pf
                    .components()
                    .iter()
                    .position(|c| c.name() == ev.frame_name)
                else {
                    return Err(Failure::usage(format!(
                        "{}: `{}` is not a component of `{}`",
                        path.display(),
                        ev.frame_name,
                        pf.frame().name()
                    )));
                };
                if masses[k].is_some() {
                    return Err(Failure::usage(format!(
                        "{}: second piece of evidence on `{}`",
                        path.display(),
                        ev.frame_name
                    )));
                }
                let m = ev.to_mass(&pf.components()[k], self.options.normalize)?;
                masses[k] = Some((m, path.display().to_string()));
            }
        }
        let mut trail = Vec::new();
        let mut marginals = Vec::new();
        for (slot, c) in masses.into_iter().zip(pf.components()) {
            let (m, source) = slot.ok_or_else(|| {
                Failure::usage(format!("no evidence given for component `{}`", c.name()))
            })?;
            trail.push(format!("evidence on {} from {source}", c.name()));
            marginals.push(m);
        }
        trail.push(format!(
            "map {}: {} -> {}",
            g.name(),
            g.source().name(),
            g.target().name()
        ));
        let mut report = BeliefReport::new(propagate_joint(&marginals, &pf, &g)?);
        if trace {
            report.intermediate.push((
                format!("joint mass on {}", pf.frame().name()),
                fuse_marginals(&marginals, &pf)?,
            ));
        }
        report.trail = trail;
        self.out.push_str(&report.render(self.options.format));
        Ok(())
    }
}
