//! Evidential mappings between two frames and everything that propagates
//! belief through them.
//!
//! An [`EvidentialMapping`] sends each element `e_i` of a source frame to a
//! list of `(subset of target, mass)` pairs summing to one. Its
//! [`BasicMatrix`] lists those masses against the distinct target subsets
//! that occur. Rows for non-singleton source subsets are derived on demand
//! ([`BasicMatrix::cem_row`]): a column keeps the average of the member rows
//! when every member row is nonzero there, otherwise the average is moved to
//! the union of the member rows' images.

mod bayes;
mod combine;
mod matrix;
mod propagate;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::frames::{Frame, Subset};
use crate::mass::MASS_TOLERANCE;

pub use bayes::{posterior, posterior_by_enumeration};
pub use combine::{combine_mappings, CombinedMapping, HIGH_CONFLICT};
pub use matrix::{BasicMatrix, CemRow};
pub use propagate::{compose, propagate_mass, propagate_probability, Propagator, MAX_EXPORT_FRAME};

/// Which of the two special cases a mapping falls into. Both can hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MappingKind {
    /// Every basic-matrix entry is 0 or 1.
    pub multivalued: bool,
    /// Every basic-matrix column is a singleton of the target.
    pub bayesian: bool,
}

impl MappingKind {
    pub fn is_general(&self) -> bool {
        !self.multivalued && !self.bayesian
    }
}

impl fmt::Display for MappingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.multivalued, self.bayesian) {
            (true, true) => f.write_str("multivalued+bayesian"),
            (true, false) => f.write_str("multivalued"),
            (false, true) => f.write_str("bayesian"),
            (false, false) => f.write_str("general"),
        }
    }
}

/// A mapping `Γ*` from a source frame to subset-mass pairs on a target frame.
pub struct EvidentialMapping {
    name: String,
    source: Frame,
    target: Frame,
    images: Vec<Vec<(Subset, f64)>>,
    overrides: BTreeMap<Subset, CemRow>,
    matrix: BasicMatrix,
    cache: RwLock<HashMap<u32, Arc<CemRow>>>,
}

impl EvidentialMapping {
    /// `images[i]` is the image of the `i`-th source element.
    pub fn new(
        name: impl Into<String>,
        source: &Frame,
        target: &Frame,
        images: Vec<Vec<(Subset, f64)>>,
    ) -> Result<Self> {
        let name = name.into();
        if images.len() != source.len() {
            return Err(Error::InvalidMapping(format!(
                "`{name}` has {} images for {} source elements",
                images.len(),
                source.len()
            )));
        }
        for (i, image) in images.iter().enumerate() {
            let element = &source.elements()[i];
            validate_image(target, image).map_err(|why| {
                Error::InvalidMapping(format!("image of `{element}` in `{name}`: {why}"))
            })?;
        }
        let matrix = BasicMatrix::build(source, target, &images);
        Ok(EvidentialMapping {
            name,
            source: source.clone(),
            target: target.clone(),
            images,
            overrides: BTreeMap::new(),
            matrix,
            cache: RwLock::new(HashMap::new()),
        })
    }

    /// Each source element maps to its own singleton with mass 1.
    pub fn identity(frame: &Frame) -> Self {
        let images = (0..frame.len())
            .map(|i| vec![(frame.singleton(i), 1.0)])
            .collect();
        Self::new(format!("id_{}", frame.name()), frame, frame, images)
            .expect("identity images are valid")
    }

    /// Every source element maps to the whole target with mass 1.
    pub fn vacuous(name: impl Into<String>, source: &Frame, target: &Frame) -> Self {
        let images = (0..source.len())
            .map(|_| vec![(target.full(), 1.0)])
            .collect();
        Self::new(name, source, target, images).expect("vacuous images are valid")
    }

    /// Replaces the derived row for a non-singleton source subset with
    /// explicit values. Each entry on an ordinary column must lie between the
    /// smallest and largest member-row entry of that column; mass may also go
    /// to the union column the derived row would divert to.
    pub fn with_override(mut self, title: Subset, entries: Vec<(Subset, f64)>) -> Result<Self> {
        self.source.ensure_same(title.frame())?;
        if title.len() < 2 {
            return Err(Error::InvalidMapping(format!(
                "override row {title} must name at least two source elements"
            )));
        }
        validate_image(&self.target, &entries)
            .map_err(|why| Error::InvalidMapping(format!("override row {title}: {why}")))?;
        let derived = self.matrix.cem_row(&title)?;
        let union = derived.union_column.clone();
        for (column, value) in &entries {
            if Some(column) == union.as_ref() {
                continue;
            }
            let Some(j) = self.matrix.column_index(column) else {
                return Err(Error::UnknownColumn {
                    row: title.to_string(),
                    column: column.to_string(),
                });
            };
            let members = title.indices().map(|i| self.matrix.entry(i, j));
            let (min, max) = members.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
            if *value < min - MASS_TOLERANCE || *value > max + MASS_TOLERANCE {
                return Err(Error::AverageBound {
                    row: title.to_string(),
                    column: column.to_string(),
                    value: *value,
                    min,
                    max,
                });
            }
        }
        let row = CemRow {
            title: title.clone(),
            entries,
            union_column: None,
            diverted: 0.0,
        };
        self.overrides.insert(title, row);
        self.cache.get_mut().expect("cache lock poisoned").clear();
        Ok(self)
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

    pub fn image(&self, index: usize) -> &[(Subset, f64)] {
        &self.images[index]
    }

    pub fn images(&self) -> &[Vec<(Subset, f64)>] {
        &self.images
    }

    /// Explicit rows for non-singleton source subsets.
    pub fn overrides(&self) -> impl Iterator<Item = &CemRow> {
        self.overrides.values()
    }

    pub fn has_overrides(&self) -> bool {
        !self.overrides.is_empty()
    }

    /// `Θ_i`, the union of the image subsets of element `index`.
    pub fn row_union(&self, index: usize) -> &Subset {
        self.matrix.row_union(index)
    }

    pub fn basic_matrix(&self) -> &BasicMatrix {
        &self.matrix
    }

    /// Complete-matrix row for `title`, honoring overrides. Rows are cached.
    pub fn cem_row(&self, title: &Subset) -> Result<Arc<CemRow>> {
        self.source.ensure_same(title.frame())?;
        if let Some(row) = self
            .cache
            .read()
            .expect("cache lock poisoned")
            .get(&title.mask())
        {
            return Ok(Arc::clone(row));
        }
        let row = match self.overrides.get(title) {
            Some(row) => row.clone(),
            None => self.matrix.cem_row(title)?,
        };
        let row = Arc::new(row);
        // a racing writer stored an identical value; keep whichever landed first
        let mut cache = self.cache.write().expect("cache lock poisoned");
        Ok(Arc::clone(cache.entry(title.mask()).or_insert(row)))
    }

    pub fn classify(&self) -> MappingKind {
        MappingKind {
            multivalued: self.matrix.is_zero_one(),
            bayesian: self.matrix.columns().iter().all(Subset::is_singleton),
        }
    }
}

/// Free-function form of [`EvidentialMapping::classify`].
pub fn classify_mapping(g: &EvidentialMapping) -> MappingKind {
    g.classify()
}

/// Free-function form of [`EvidentialMapping::basic_matrix`].
pub fn basic_matrix(g: &EvidentialMapping) -> &BasicMatrix {
    g.basic_matrix()
}

fn validate_image(target: &Frame, image: &[(Subset, f64)]) -> std::result::Result<(), String> {
    if image.is_empty() {
        return Err("no subset-mass pairs".into());
    }
    let mut total = 0.0;
    for (n, (subset, mass)) in image.iter().enumerate() {
        if subset.frame() != target {
            return Err(format!(
                "{subset} belongs to frame `{}`, not `{}`",
                subset.frame().name(),
                target.name()
            ));
        }
        if subset.is_empty() {
            return Err("empty conclusion subset".into());
        }
        if mass.is_nan() || *mass <= 0.0 {
            return Err(format!("mass {mass} on {subset} is not positive"));
        }
        if image[..n].iter().any(|(s, _)| s == subset) {
            return Err(format!("{subset} listed twice"));
        }
        total += mass;
    }
    if (total - 1.0).abs() > MASS_TOLERANCE {
        return Err(format!("masses sum to {total}, expected 1"));
    }
    Ok(())
}

impl Clone for EvidentialMapping {
    fn clone(&self) -> Self {
        let cache = self.cache.read().expect("cache lock poisoned").clone();
        EvidentialMapping {
            name: self.name.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
            images: self.images.clone(),
            overrides: self.overrides.clone(),
            matrix: self.matrix.clone(),
            cache: RwLock::new(cache),
        }
    }
}

impl PartialEq for EvidentialMapping {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.source == other.source
            && self.target == other.target
            && self.images == other.images
            && self.overrides == other.overrides
    }
}

impl fmt::Debug for EvidentialMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EvidentialMapping")
            .field("name", &self.name)
            .field("source", &self.source.name())
            .field("target", &self.target.name())
            .field("images", &self.images)
            .field("overrides", &self.overrides.len())
            .finish()
    }
}
