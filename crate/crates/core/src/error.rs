use thiserror::Error;

/// Source position inside a DSL file, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Location {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("frame `{0}` has no elements")]
    EmptyFrame(String),
    #[error("frame `{frame}` declares label `{label}` twice")]
    DuplicateLabel { frame: String, label: String },
    #[error("frame `{frame}` has {size} elements, the limit is {max}")]
    FrameTooLarge {
        frame: String,
        size: usize,
        max: usize,
    },
    #[error("`{label}` is not an element of frame `{frame}`")]
    UnknownLabel { frame: String, label: String },
    #[error("frame mismatch: expected `{expected}`, found `{found}`")]
    FrameMismatch { expected: String, found: String },

    #[error("the empty set cannot carry mass")]
    EmptyFocalElement,
    #[error("mass {0} is outside (0, 1]")]
    MassOutOfRange(f64),
    #[error("masses sum to {total}, expected 1")]
    NotNormalized { total: f64 },
    #[error("table is not a belief function: m({subset}) = {mass}")]
    NotBeliefFunction { subset: String, mass: f64 },
    #[error("belief table for frame `{frame}` has {found} entries, expected {expected}")]
    BeliefTableSize {
        frame: String,
        expected: usize,
        found: usize,
    },
    #[error("total conflict: the combination is undefined")]
    TotalConflict,
    #[error("total conflict in the image of `{element}`")]
    RowConflict { element: String },
    #[error("mass function on `{0}` is not Bayesian")]
    NotBayesian(String),
    #[error("evidential mapping `{0}` is not Bayesian")]
    MappingNotBayesian(String),
    #[error("observations are impossible under every hypothesis")]
    ImpossibleObservations,
    #[error("invalid observation: {0}")]
    InvalidObservation(String),

    #[error("{location}: {message}")]
    Syntax { location: Location, message: String },
    #[error("{location}: strength {value} is outside (0, 1]")]
    StrengthOutOfRange { location: Location, value: f64 },
    #[error("{location}: strengths of rule `{antecedent}` sum to {total} > 1")]
    StrengthSumExceeded {
        location: Location,
        antecedent: String,
        total: f64,
    },
    #[error("{location}: second rule for antecedent `{antecedent}`")]
    DuplicateAntecedent {
        location: Location,
        antecedent: String,
    },
    #[error("{location}: conclusion `{target}` appears twice in one rule")]
    DuplicateConclusion { location: Location, target: String },
    #[error("{location}: `{label}` is not an element of frame `{frame}`")]
    UnknownLabelAt {
        location: Location,
        frame: String,
        label: String,
    },
    #[error("{location}: {message}")]
    Semantic { location: Location, message: String },

    #[error("rule set `{0}` is incomplete")]
    IncompleteRuleSet(String),
    #[error("no rule for element `{element}` of frame `{frame}`")]
    MissingRule { frame: String, element: String },
    #[error("invalid evidential mapping: {0}")]
    InvalidMapping(String),
    #[error("row {row}: entry {column} = {value} violates the average bound [{min}, {max}]")]
    AverageBound {
        row: String,
        column: String,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("row {row}: column {column} is not available to this row")]
    UnknownColumn { row: String, column: String },

    #[error("invalid rule conversion: {0}")]
    InvalidConversion(String),

    #[error("a product frame needs at least two components")]
    TooFewComponents,
    #[error("component frame `{0}` appears twice in the product")]
    DuplicateComponent(String),
    #[error("`{frame}` is not a component of product `{product}`")]
    NotAComponent { frame: String, product: String },
    #[error("expected {expected} component masses, got {found}")]
    ComponentCount { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
