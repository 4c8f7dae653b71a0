use super::EvidentialMapping;
use crate::error::{Error, Result};
use crate::mass::dempster_pairs;

/// Discarded conflict above this level is reported as suspicious.
pub const HIGH_CONFLICT: f64 = 0.5;

/// Joint mapping of two independent mappings, with the conflict discarded
/// from each row.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedMapping {
    pub mapping: EvidentialMapping,
    /// `conflicts[i]` belongs to source element `i`.
    pub conflicts: Vec<f64>,
}

impl CombinedMapping {
    /// Source elements whose row discarded more than [`HIGH_CONFLICT`].
    pub fn high_conflict_rows(&self) -> impl Iterator<Item = (&str, f64)> + '_ {
        self.mapping
            .source()
            .elements()
            .iter()
            .zip(&self.conflicts)
            .filter(|(_, &k)| k > HIGH_CONFLICT)
            .map(|(e, &k)| (e.as_str(), k))
    }
}

/// Row-wise Dempster combination of two mappings over the same frames.
///
/// The image of `e_i` is the combination of the two images of `e_i` as mass
/// functions on the target; empty intersections are normalized away. The
/// result keeps the first mapping's name.
pub fn combine_mappings(g: &EvidentialMapping, h: &EvidentialMapping) -> Result<CombinedMapping> {
    g.source().ensure_same(h.source())?;
    g.target().ensure_same(h.target())?;
    if g.has_overrides() || h.has_overrides() {
        return Err(Error::InvalidMapping(
            "mappings with explicit subset rows cannot be combined".into(),
        ));
    }
    let mut images = Vec::with_capacity(g.source().len());
    let mut conflicts = Vec::with_capacity(g.source().len());
    for (i, element) in g.source().elements().iter().enumerate() {
        let (pairs, conflict) = dempster_pairs(g.image(i), h.image(i)).map_err(|e| match e {
            Error::TotalConflict => Error::RowConflict {
                element: element.clone(),
            },
            other => other,
        })?;
        images.push(pairs);
        conflicts.push(conflict);
    }
    let mapping = EvidentialMapping::new(g.name(), g.source(), g.target(), images)?;
    Ok(CombinedMapping { mapping, conflicts })
}
