//! Frames of discernment and subsets over them.
//!
//! A [`Frame`] is an ordered, named set of mutually exclusive labels. A
//! [`Subset`] is a membership mask tied to one frame; binary operations on
//! subsets of different frames fail instead of silently mixing them.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest frame the crate will enumerate subsets of.
pub const MAX_FRAME_SIZE: usize = 20;

#[derive(Debug)]
struct FrameInner {
    name: String,
    elements: Vec<String>,
    index: HashMap<String, usize>,
    components: Vec<Frame>,
}

/// An ordered, named frame of discernment. Cheap to clone.
#[derive(Debug, Clone)]
pub struct Frame(Arc<FrameInner>);

impl Frame {
    pub fn new<S, I>(name: impl Into<String>, labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::build(
            name.into(),
            labels.into_iter().map(Into::into).collect(),
            Vec::new(),
        )
    }

    pub(crate) fn build(
        name: String,
        elements: Vec<String>,
        components: Vec<Frame>,
    ) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptyFrame(name));
        }
        if elements.len() > MAX_FRAME_SIZE {
            return Err(Error::FrameTooLarge {
                frame: name,
                size: elements.len(),
                max: MAX_FRAME_SIZE,
            });
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (i, label) in elements.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel {
                    frame: name,
                    label: label.clone(),
                });
            }
        }
        Ok(Frame(Arc::new(FrameInner {
            name,
            elements,
            index,
            components,
        })))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn elements(&self) -> &[String] {
        &self.0.elements
    }

    pub fn len(&self) -> usize {
        self.0.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.0.index.get(label).copied()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.0.index.contains_key(label)
    }

    /// Component frames when this frame is a Cartesian product, empty otherwise.
    pub fn components(&self) -> &[Frame] {
        &self.0.components
    }

    pub fn is_product(&self) -> bool {
        !self.0.components.is_empty()
    }

    /// Mask with every element set.
    pub fn full_mask(&self) -> u32 {
        if self.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.len()) - 1
        }
    }

    /// Builds a subset from labels; repeated labels collapse.
    pub fn subset<S: AsRef<str>>(&self, labels: impl IntoIterator<Item = S>) -> Result<Subset> {
        let mut mask = 0u32;
        for label in labels {
            let label = label.as_ref();
            let i = self.index_of(label).ok_or_else(|| Error::UnknownLabel {
                frame: self.name().to_string(),
                label: label.to_string(),
            })?;
            mask |= 1 << i;
        }
        Ok(Subset::from_mask(self, mask))
    }

    pub fn singleton(&self, index: usize) -> Subset {
        assert!(index < self.len(), "element index out of range");
        Subset::from_mask(self, 1 << index)
    }

    pub fn singleton_of(&self, label: &str) -> Result<Subset> {
        self.subset([label])
    }

    pub fn full(&self) -> Subset {
        Subset::from_mask(self, self.full_mask())
    }

    pub fn empty(&self) -> Subset {
        Subset::from_mask(self, 0)
    }

    /// All nonempty subsets in canonical order.
    pub fn nonempty_subsets(&self) -> Vec<Subset> {
        let mut out: Vec<Subset> = (1..=self.full_mask())
            .map(|m| Subset::from_mask(self, m))
            .collect();
        out.sort();
        out
    }

    pub(crate) fn same_as(&self, other: &Frame) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self == other
    }

    pub(crate) fn ensure_same(&self, other: &Frame) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::FrameMismatch {
                expected: self.name().to_string(),
                found: other.name().to_string(),
            })
        }
    }
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.name == other.0.name && self.0.elements == other.0.elements)
    }
}

impl Eq for Frame {}

impl Hash for Frame {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.name.hash(state);
        self.0.elements.hash(state);
    }
}

impl PartialOrd for Frame {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frame {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0
            .name
            .cmp(&other.0.name)
            .then_with(|| self.0.elements.cmp(&other.0.elements))
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A subset of one frame's elements.
///
/// Ordering is canonical: smaller sets first, equal-size sets by their
/// element sequence in frame order.
#[derive(Debug, Clone)]
pub struct Subset {
    frame: Frame,
    mask: u32,
}

impl Subset {
    pub fn from_mask(frame: &Frame, mask: u32) -> Self {
        debug_assert_eq!(mask & !frame.full_mask(), 0, "mask outside frame");
        Subset {
            frame: frame.clone(),
            mask,
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_full(&self) -> bool {
        self.mask == self.frame.full_mask()
    }

    pub fn is_singleton(&self) -> bool {
        self.mask.count_ones() == 1
    }

    pub fn contains_index(&self, index: usize) -> bool {
        index < 32 && self.mask & (1 << index) != 0
    }

    /// Element indices in frame order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        let mut rest = self.mask;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    pub fn labels(&self) -> Vec<&str> {
        self.indices()
            .map(|i| self.frame.elements()[i].as_str())
            .collect()
    }

    pub fn complement(&self) -> Subset {
        Subset::from_mask(&self.frame, !self.mask & self.frame.full_mask())
    }

    pub fn union(&self, other: &Subset) -> Result<Subset> {
        self.frame.ensure_same(&other.frame)?;
        Ok(Subset::from_mask(&self.frame, self.mask | other.mask))
    }

    pub fn intersect(&self, other: &Subset) -> Result<Subset> {
        self.frame.ensure_same(&other.frame)?;
        Ok(Subset::from_mask(&self.frame, self.mask & other.mask))
    }

    pub fn is_subset_of(&self, other: &Subset) -> Result<bool> {
        self.frame.ensure_same(&other.frame)?;
        Ok(self.mask & !other.mask == 0)
    }

    /// Re-expresses this subset over `frame`, matching elements by label.
    pub fn relabel(&self, frame: &Frame) -> Result<Subset> {
        frame.subset(self.labels())
    }
}

/// Canonical comparison of two masks over the same frame.
pub(crate) fn canonical_mask_cmp(a: u32, b: u32) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    match a.count_ones().cmp(&b.count_ones()) {
        Ordering::Equal => {
            // the set owning the lowest differing element comes first
            let low = (a ^ b).trailing_zeros();
            if a & (1 << low) != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        other => other,
    }
}

impl PartialEq for Subset {
    fn eq(&self, other: &Self) -> bool {
        self.mask == other.mask && self.frame == other.frame
    }
}

impl Eq for Subset {}

impl Hash for Subset {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.frame.hash(state);
        self.mask.hash(state);
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.frame
            .cmp(&other.frame)
            .then_with(|| canonical_mask_cmp(self.mask, other.mask))
    }
}

/// Renders as `{a,b}` in frame element order.
impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, label) in self.labels().into_iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            f.write_str(label)?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example_h() -> Frame {
        Frame::new("H", ["a1", "a2", "a3", "a4", "a5"]).unwrap()
    }

    #[test]
    fn make_frame_examples() {
        let e = Frame::new("E", ["e1", "e2", "e3"]).unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!(example_h().len(), 5);
        let s = Frame::new("S", ["x"]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.full(), s.singleton(0));
    }

    #[test]
    fn make_frame_errors() {
        assert!(matches!(
            Frame::new("E", ["a", "b", "a"]),
            Err(Error::DuplicateLabel { .. })
        ));
        assert!(matches!(
            Frame::new("E", Vec::<String>::new()),
            Err(Error::EmptyFrame(_))
        ));
        let labels: Vec<String> = (0..21).map(|i| format!("x{i}")).collect();
        assert!(matches!(
            Frame::new("Big", labels),
            Err(Error::FrameTooLarge { size: 21, .. })
        ));
        let labels: Vec<String> = (0..20).map(|i| format!("x{i}")).collect();
        assert_eq!(Frame::new("Edge", labels).unwrap().len(), 20);
    }

    #[test]
    fn subset_examples() {
        let h = example_h();
        let s = h.subset(["a1", "a2"]).unwrap();
        assert_eq!(s.to_string(), "{a1,a2}");
        assert!(h.subset(h.elements()).unwrap().is_full());
        assert!(h.subset(Vec::<&str>::new()).unwrap().is_empty());
        assert_eq!(h.subset(["a2", "a1", "a2"]).unwrap(), s);
        assert!(matches!(h.subset(["zz"]), Err(Error::UnknownLabel { .. })));
    }

    #[test]
    fn set_algebra_examples() {
        let e = Frame::new("E", ["e1", "e2", "e3"]).unwrap();
        let h = example_h();
        assert_eq!(
            e.subset(["e1"]).unwrap().complement(),
            e.subset(["e2", "e3"]).unwrap()
        );
        let a = h.subset(["a1", "a2"]).unwrap();
        let b = h.subset(["a2", "a3"]).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), h.subset(["a2"]).unwrap());
        let c = h.subset(["a3", "a4"]).unwrap();
        assert_eq!(
            a.union(&c).unwrap(),
            h.subset(["a1", "a2", "a3", "a4"]).unwrap()
        );
        assert!(a.intersect(&b).unwrap().is_subset_of(&a).unwrap());
        assert!(matches!(
            a.union(&e.full()),
            Err(Error::FrameMismatch { .. })
        ));
        assert!(e.full().is_subset_of(&a).is_err());
    }

    #[test]
    fn canonical_order_is_size_then_element_order() {
        let h = example_h();
        let mut v = [
            h.full(),
            h.subset(["a4", "a5"]).unwrap(),
            h.subset(["a2"]).unwrap(),
            h.subset(["a1", "a2"]).unwrap(),
            h.subset(["a1", "a3"]).unwrap(),
        ];
        v.sort();
        let rendered: Vec<String> = v.iter().map(ToString::to_string).collect();
        assert_eq!(
            rendered,
            ["{a2}", "{a1,a2}", "{a1,a3}", "{a4,a5}", "{a1,a2,a3,a4,a5}"]
        );
    }

    #[test]
    fn de_morgan_exhaustive_small_frames() {
        for n in 1..=5 {
            let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let f = Frame::new("F", labels).unwrap();
            for a in 0..=f.full_mask() {
                let s = Subset::from_mask(&f, a);
                assert_eq!(s.complement().complement(), s);
                for b in 0..=f.full_mask() {
                    let t = Subset::from_mask(&f, b);
                    let lhs = s.union(&t).unwrap().complement();
                    let rhs = s.complement().intersect(&t.complement()).unwrap();
                    assert_eq!(lhs, rhs);
                    let lhs = s.intersect(&t).unwrap().complement();
                    let rhs = s.complement().union(&t.complement()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn union_intersect_laws(n in 1usize..=20, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
            let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let f = Frame::new("F", labels).unwrap();
            let full = f.full_mask();
            let (s, t, u) = (
                Subset::from_mask(&f, a & full),
                Subset::from_mask(&f, b & full),
                Subset::from_mask(&f, c & full),
            );
            prop_assert_eq!(s.union(&t).unwrap(), t.union(&s).unwrap());
            prop_assert_eq!(s.intersect(&t).unwrap(), t.intersect(&s).unwrap());
            prop_assert_eq!(s.union(&s).unwrap(), s.clone());
            prop_assert_eq!(s.intersect(&s).unwrap(), s.clone());
            prop_assert_eq!(
                s.union(&t).unwrap().union(&u).unwrap(),
                s.union(&t.union(&u).unwrap()).unwrap()
            );
            prop_assert_eq!(
                s.intersect(&t).unwrap().intersect(&u).unwrap(),
                s.intersect(&t.intersect(&u).unwrap()).unwrap()
            );
            prop_assert_eq!(
                s.union(&t).unwrap().complement(),
                s.complement().intersect(&t.complement()).unwrap()
            );
        }

        #[test]
        fn permuted_labels_compare_equal(mask in 0u32..32, seed in any::<u64>()) {
            let f = Frame::new("F", ["p", "q", "r", "s", "t"]).unwrap();
            let s = Subset::from_mask(&f, mask);
            let mut labels: Vec<&str> = s.labels();
            // deterministic shuffle
            let len = labels.len();
            if len > 1 {
                let mut x = seed;
                for i in (1..len).rev() {
                    x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    labels.swap(i, (x >> 33) as usize % (i + 1));
                }
            }
            prop_assert_eq!(f.subset(labels).unwrap(), s);
        }
    }
}
