//! Evidential mappings: uncertain heuristic rules as Dempster-Shafer
//! structures.
//!
//! A rule `e -> H (r)` says that when `e` holds, belief `r` goes to the set
//! of hypotheses `H`. A complete set of such rules is an
//! [`EvidentialMapping`] from an evidence frame to a hypothesis frame, and
//! any mass function on the evidence frame can be pushed through it.
//!
//! ```
//! use evidential::{parse_rules, ruleset_to_mapping, propagate_mass, MassFunction};
//!
//! let file = parse_rules(
//!     "frame E = { e1, e2 }
//!      frame H = { h1, h2, h3 }
//!      map R : E -> H {
//!        e1 -> {h1,h2}: 0.8, * : 0.2 ;
//!        e2 -> h3: 1 ;
//!      }",
//! )?;
//! let rules = file.single_map()?;
//! let g = ruleset_to_mapping(rules)?;
//! let e = rules.source();
//! let m = MassFunction::from_assignments(e, [(e.singleton(0), 0.5), (e.full(), 0.5)])?;
//! let out = propagate_mass(&g, &m)?;
//! assert!((out.mass(&g.target().subset(["h1", "h2"])?) - 0.4).abs() < 1e-12);
//! # Ok::<(), evidential::Error>(())
//! ```

pub mod cli;
pub mod error;
pub mod frames;
pub mod mapping;
pub mod mass;
pub mod product;
pub mod rules;

pub use error::{Error, Location, Result};
pub use frames::{Frame, Subset, MAX_FRAME_SIZE};
pub use mapping::{
    basic_matrix, classify_mapping, combine_mappings, compose, posterior, posterior_by_enumeration,
    propagate_mass, propagate_probability, BasicMatrix, CemRow, CombinedMapping, EvidentialMapping,
    MappingKind, Propagator,
};
pub use mass::{combine_dempster, mass_from_belief, BeliefTable, Combination, MassFunction};
pub use product::{extension_mapping, fuse_marginals, propagate_joint, ProductFrame};
pub use rules::{
    classify_completeness, complete_ruleset, from_ginsberg, from_hau_kashyap, mapping_to_ruleset,
    parse_rules, ruleset_to_mapping, CompletenessReport, EvidenceDeclaration, HeuristicRule,
    RuleFile, RuleSet,
};
