//! Mass functions, belief functions and Dempster's rule.
//!
//! Masses are `f64`. Normalization is checked against [`MASS_TOLERANCE`];
//! a combination whose normalizing denominator falls to
//! [`CONFLICT_EPSILON`] or below is reported as total conflict.

use std::collections::BTreeMap;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::frames::{Frame, Subset};

/// Tolerance on `Σ m = 1`.
pub const MASS_TOLERANCE: f64 = 1e-9;
/// Smallest `1 - conflict` accepted by Dempster's rule.
pub const CONFLICT_EPSILON: f64 = 1e-12;
/// Möbius inversion leaves float residue on non-focal sets; anything at or
/// below this is treated as zero.
const MOBIUS_ZERO: f64 = 1e-12;

/// A normalized basic probability assignment on one frame.
///
/// Focal elements are nonempty and carry strictly positive mass; they are
/// kept in canonical subset order.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    frame: Frame,
    focal: BTreeMap<Subset, f64>,
}

impl MassFunction {
    /// Validated construction from explicit `(subset, mass)` pairs.
    ///
    /// Repeated subsets are merged by summation. The total must already be 1;
    /// nothing is rescaled.
    pub fn from_assignments(
        frame: &Frame,
        pairs: impl IntoIterator<Item = (Subset, f64)>,
    ) -> Result<Self> {
        let mut focal: BTreeMap<Subset, f64> = BTreeMap::new();
        for (subset, mass) in pairs {
            frame.ensure_same(subset.frame())?;
            if subset.is_empty() {
                return Err(Error::EmptyFocalElement);
            }
            if !(mass > 0.0 && mass <= 1.0) {
                return Err(Error::MassOutOfRange(mass));
            }
            *focal.entry(subset).or_insert(0.0) += mass;
        }
        Self::checked(frame, focal)
    }

    /// Construction from computed masses: non-positive entries are dropped,
    /// the total is still checked.
    pub(crate) fn from_accumulated(
        frame: &Frame,
        pairs: impl IntoIterator<Item = (Subset, f64)>,
    ) -> Result<Self> {
        let mut focal: BTreeMap<Subset, f64> = BTreeMap::new();
        for (subset, mass) in pairs {
            frame.ensure_same(subset.frame())?;
            if mass <= 0.0 {
                continue;
            }
            if subset.is_empty() {
                return Err(Error::EmptyFocalElement);
            }
            *focal.entry(subset).or_insert(0.0) += mass;
        }
        Self::checked(frame, focal)
    }

    fn checked(frame: &Frame, mut focal: BTreeMap<Subset, f64>) -> Result<Self> {
        let total: f64 = focal.values().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::NotNormalized { total });
        }
        focal.values_mut().for_each(|m| *m = m.min(1.0));
        Ok(MassFunction {
            frame: frame.clone(),
            focal,
        })
    }

    /// Total ignorance: `m(Θ) = 1`.
    pub fn vacuous(frame: &Frame) -> Self {
        let mut focal = BTreeMap::new();
        focal.insert(frame.full(), 1.0);
        MassFunction {
            frame: frame.clone(),
            focal,
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Focal elements with their masses, canonical order.
    pub fn focal_elements(&self) -> impl Iterator<Item = (&Subset, f64)> + '_ {
        self.focal.iter().map(|(s, &m)| (s, m))
    }

    pub fn len(&self) -> usize {
        self.focal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.focal.is_empty()
    }

    /// `m(a)`, zero for non-focal sets.
    pub fn mass(&self, a: &Subset) -> f64 {
        self.focal.get(a).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.focal.values().sum()
    }

    /// `Bel(b) = Σ_{A ⊆ b} m(A)`.
    pub fn belief(&self, b: &Subset) -> Result<f64> {
        self.frame.ensure_same(b.frame())?;
        Ok(self
            .focal
            .iter()
            .filter(|(a, _)| a.mask() & !b.mask() == 0)
            .map(|(_, m)| m)
            .sum())
    }

    /// `Pl(b) = 1 - Bel(¬b)`.
    pub fn plausibility(&self, b: &Subset) -> Result<f64> {
        self.frame.ensure_same(b.frame())?;
        Ok(1.0 - self.belief(&b.complement())?)
    }

    /// True when every focal element is a singleton.
    pub fn is_bayesian(&self) -> bool {
        self.focal.keys().all(Subset::is_singleton)
    }

    /// Dense belief table over every subset of the frame.
    pub fn belief_table(&self) -> BeliefTable {
        let n = self.frame.len();
        let mut values = vec![0.0; 1 << n];
        for (s, &m) in &self.focal {
            values[s.mask() as usize] += m;
        }
        for bit in 0..n {
            let b = 1usize << bit;
            for mask in 0..values.len() {
                if mask & b != 0 {
                    values[mask] += values[mask ^ b];
                }
            }
        }
        BeliefTable {
            frame: self.frame.clone(),
            values,
        }
    }

    /// Dempster's rule; see [`combine_dempster`].
    pub fn combine(&self, other: &MassFunction) -> Result<Combination> {
        combine_dempster(self, other)
    }
}

/// Result of Dempster combination, with the conflict that was normalized away.
#[derive(Debug, Clone, PartialEq)]
pub struct Combination {
    pub mass: MassFunction,
    pub conflict: f64,
}

/// `m(C) = Σ_{A∩B=C} m1(A)m2(B) / (1 - Σ_{A∩B=∅} m1(A)m2(B))`.
pub fn combine_dempster(m1: &MassFunction, m2: &MassFunction) -> Result<Combination> {
    m1.frame.ensure_same(&m2.frame)?;
    let a: Vec<(Subset, f64)> = m1.focal.iter().map(|(s, &m)| (s.clone(), m)).collect();
    let b: Vec<(Subset, f64)> = m2.focal.iter().map(|(s, &m)| (s.clone(), m)).collect();
    let (pairs, conflict) = dempster_pairs(&a, &b)?;
    Ok(Combination {
        mass: MassFunction::from_accumulated(&m1.frame, pairs)?,
        conflict,
    })
}

/// Dempster's rule over raw `(subset, mass)` lists on a shared frame.
///
/// Output keeps first-occurrence order of the intersections, scanning `a`
/// in the outer loop.
pub(crate) fn dempster_pairs(
    a: &[(Subset, f64)],
    b: &[(Subset, f64)],
) -> Result<(Vec<(Subset, f64)>, f64)> {
    let mut acc: IndexMap<Subset, f64> = IndexMap::new();
    let mut conflict = 0.0;
    for (sa, ma) in a {
        for (sb, mb) in b {
            let c = sa.intersect(sb)?;
            let product = ma * mb;
            if c.is_empty() {
                conflict += product;
            } else {
                *acc.entry(c).or_insert(0.0) += product;
            }
        }
    }
    let denominator = 1.0 - conflict;
    if denominator <= CONFLICT_EPSILON {
        return Err(Error::TotalConflict);
    }
    // rounding can push a lone survivor just past 1
    let pairs = acc
        .into_iter()
        .map(|(s, m)| (s, (m / denominator).min(1.0)))
        .collect();
    Ok((pairs, conflict))
}

/// Belief values for every subset of a frame, indexed by membership mask.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefTable {
    frame: Frame,
    values: Vec<f64>,
}

impl BeliefTable {
    /// `values[mask]` is `Bel` of the subset with that mask; `values[0]` is
    /// ignored and treated as `Bel(∅) = 0`.
    pub fn from_values(frame: &Frame, mut values: Vec<f64>) -> Result<Self> {
        let expected = 1usize << frame.len();
        if values.len() != expected {
            return Err(Error::BeliefTableSize {
                frame: frame.name().to_string(),
                expected,
                found: values.len(),
            });
        }
        values[0] = 0.0;
        Ok(BeliefTable {
            frame: frame.clone(),
            values,
        })
    }

    pub fn from_fn(frame: &Frame, mut bel: impl FnMut(&Subset) -> f64) -> Self {
        let values = (0..=frame.full_mask())
            .map(|m| {
                if m == 0 {
                    0.0
                } else {
                    bel(&Subset::from_mask(frame, m))
                }
            })
            .collect();
        BeliefTable {
            frame: frame.clone(),
            values,
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn get(&self, b: &Subset) -> Result<f64> {
        self.frame.ensure_same(b.frame())?;
        Ok(self.values[b.mask() as usize])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Möbius inversion `m(A) = Σ_{B⊆A} (-1)^{|A-B|} Bel(B)`.
///
/// Fails when some recovered mass is below `-MASS_TOLERANCE`, i.e. the table
/// is not superadditive, or when `Bel(Θ) ≠ 1`.
pub fn mass_from_belief(bel: &BeliefTable) -> Result<MassFunction> {
    let frame = &bel.frame;
    let mut m = bel.values.clone();
    for bit in 0..frame.len() {
        let b = 1usize << bit;
        for mask in 0..m.len() {
            if mask & b != 0 {
                m[mask] -= m[mask ^ b];
            }
        }
    }
    let mut pairs = Vec::new();
    for (mask, &v) in m.iter().enumerate().skip(1) {
        let subset = Subset::from_mask(frame, mask as u32);
        if v < -MASS_TOLERANCE {
            return Err(Error::NotBeliefFunction {
                subset: subset.to_string(),
                mass: v,
            });
        }
        if v > MOBIUS_ZERO {
            pairs.push((subset, v));
        }
    }
    MassFunction::from_accumulated(frame, pairs)
}
