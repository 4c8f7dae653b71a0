//! Cartesian-product source frames.
//!
//! Evidence arrives separately on each component frame `A, B, …`. Each
//! marginal is lifted to the product through an extension mapping that sends
//! `a_i` to its cylinder `{a_i} × B × …`, the lifted masses are combined with
//! Dempster's rule, and the joint mass is then propagated through a mapping
//! whose source is the product.

use std::fmt;

use crate::error::{Error, Result};
use crate::frames::{Frame, Subset, MAX_FRAME_SIZE};
use crate::mapping::{propagate_mass, EvidentialMapping};
use crate::mass::{combine_dempster, MassFunction};

/// A frame whose elements are the tuples of its component frames.
///
/// Tuples are labelled `(a1,b2)` and ordered lexicographically, the last
/// component varying fastest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductFrame {
    frame: Frame,
}

impl ProductFrame {
    /// Product named after its components, e.g. `A*B`.
    pub fn new(components: &[Frame]) -> Result<Self> {
        let name = components
            .iter()
            .map(Frame::name)
            .collect::<Vec<_>>()
            .join("*");
        Self::named(name, components)
    }

    pub fn named(name: impl Into<String>, components: &[Frame]) -> Result<Self> {
        let name = name.into();
        if components.len() < 2 {
            return Err(Error::TooFewComponents);
        }
        for (k, c) in components.iter().enumerate() {
            if components[..k].contains(c) {
                return Err(Error::DuplicateComponent(c.name().to_string()));
            }
        }
        let size = components
            .iter()
            .try_fold(1usize, |acc, c| acc.checked_mul(c.len()))
            .unwrap_or(usize::MAX);
        if size > MAX_FRAME_SIZE {
            return Err(Error::FrameTooLarge {
                frame: name,
                size,
                max: MAX_FRAME_SIZE,
            });
        }
        let mut labels = vec![Vec::<&str>::new()];
        for c in components {
            labels = labels
                .into_iter()
                .flat_map(|prefix| {
                    c.elements().iter().map(move |e| {
                        let mut t = prefix.clone();
                        t.push(e.as_str());
                        t
                    })
                })
                .collect();
        }
        let elements = labels
            .into_iter()
            .map(|t| format!("({})", t.join(",")))
            .collect();
        let frame = Frame::build(name, elements, components.to_vec())?;
        Ok(ProductFrame { frame })
    }

    /// Recovers the product view of a frame declared as a product.
    pub fn from_frame(frame: &Frame) -> Option<Self> {
        frame.is_product().then(|| ProductFrame {
            frame: frame.clone(),
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn components(&self) -> &[Frame] {
        self.frame.components()
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Position of a component frame, or an error if it is not one.
    pub fn component_index(&self, comp: &Frame) -> Result<usize> {
        self.components()
            .iter()
            .position(|c| c == comp)
            .ok_or_else(|| Error::NotAComponent {
                frame: comp.name().to_string(),
                product: self.frame.name().to_string(),
            })
    }

    /// Element index of the tuple with the given component indices.
    pub fn tuple_index(&self, coordinates: &[usize]) -> usize {
        debug_assert_eq!(coordinates.len(), self.components().len());
        self.components()
            .iter()
            .zip(coordinates)
            .fold(0, |acc, (c, &i)| acc * c.len() + i)
    }

    /// Component indices of the tuple at `index`.
    pub fn coordinates(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.components().len()];
        for (slot, c) in out.iter_mut().zip(self.components()).rev() {
            *slot = index % c.len();
            index /= c.len();
        }
        out
    }

    /// `{a_i} × (other components)` for element `element` of component `k`.
    pub fn cylinder(&self, k: usize, element: usize) -> Subset {
        let mask = (0..self.len())
            .filter(|&t| self.coordinates(t)[k] == element)
            .fold(0u32, |acc, t| acc | (1 << t));
        Subset::from_mask(&self.frame, mask)
    }
}

impl fmt::Display for ProductFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.frame, f)
    }
}

/// Multivalued mapping sending each element of `comp` to its cylinder set.
pub fn extension_mapping(comp: &Frame, pf: &ProductFrame) -> Result<EvidentialMapping> {
    let k = pf.component_index(comp)?;
    let images = (0..comp.len())
        .map(|i| vec![(pf.cylinder(k, i), 1.0)])
        .collect();
    EvidentialMapping::new(format!("ext_{}", comp.name()), comp, pf.frame(), images)
}

/// Lifts each marginal to the product and combines them.
///
/// `masses[k]` must live on component `k`. Cylinders over different
/// components always intersect, so the combination discards no conflict.
pub fn fuse_marginals(masses: &[MassFunction], pf: &ProductFrame) -> Result<MassFunction> {
    let components = pf.components();
    if masses.len() != components.len() {
        return Err(Error::ComponentCount {
            expected: components.len(),
            found: masses.len(),
        });
    }
    let mut lifted = masses.iter().zip(components).map(|(m, c)| {
        c.ensure_same(m.frame())?;
        propagate_mass(&extension_mapping(c, pf)?, m)
    });
    let first = lifted.next().expect("at least two components")?;
    lifted.try_fold(first, |acc, next| Ok(combine_dempster(&acc, &next?)?.mass))
}

/// `propagate_mass(g, fuse_marginals(masses, pf))`.
pub fn propagate_joint(
    masses: &[MassFunction],
    pf: &ProductFrame,
    g: &EvidentialMapping,
) -> Result<MassFunction> {
    pf.frame().ensure_same(g.source())?;
    propagate_mass(g, &fuse_marginals(masses, pf)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab() -> (Frame, Frame) {
        (
            Frame::new("A", ["a1", "a2"]).unwrap(),
            Frame::new("B", ["b1", "b2"]).unwrap(),
        )
    }

    #[test]
    fn tuple_naming_and_order() {
        let (a, _) = ab();
        let b = Frame::new("B", ["b1", "b2", "b3"]).unwrap();
        let pf = ProductFrame::new(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(pf.frame().name(), "A*B");
        assert_eq!(
            pf.frame().elements(),
            ["(a1,b1)", "(a1,b2)", "(a1,b3)", "(a2,b1)", "(a2,b2)", "(a2,b3)"]
        );
        assert_eq!(pf.tuple_index(&[1, 2]), 5);
        assert_eq!(pf.coordinates(4), vec![1, 1]);
        assert_eq!(pf.components(), &[a, b]);
    }

    #[test]
    fn construction_errors() {
        let (a, b) = ab();
        assert_eq!(
            ProductFrame::new(std::slice::from_ref(&a)),
            Err(Error::TooFewComponents)
        );
        assert_eq!(
            ProductFrame::new(&[a.clone(), a.clone()]),
            Err(Error::DuplicateComponent("A".into()))
        );
        let big = Frame::new("C", ["c1", "c2", "c3", "c4", "c5", "c6"]).unwrap();
        assert!(matches!(
            ProductFrame::new(&[a, b, big]),
            Err(Error::FrameTooLarge { size: 24, .. })
        ));
    }

    #[test]
    fn extension_sends_elements_to_cylinders() {
        let (a, b) = ab();
        let pf = ProductFrame::new(&[a.clone(), b.clone()]).unwrap();
        let g = extension_mapping(&a, &pf).unwrap();
        assert_eq!(
            g.image(0),
            &[(pf.frame().subset(["(a1,b1)", "(a1,b2)"]).unwrap(), 1.0)]
        );
        let kind = g.classify();
        assert!(kind.multivalued && !kind.bayesian);
        let gb = extension_mapping(&b, &pf).unwrap();
        assert_eq!(
            gb.image(1),
            &[(pf.frame().subset(["(a1,b2)", "(a2,b2)"]).unwrap(), 1.0)]
        );
        let out = propagate_mass(&g, &MassFunction::vacuous(&a)).unwrap();
        assert_eq!(out, MassFunction::vacuous(pf.frame()));
        let other = Frame::new("C", ["c"]).unwrap();
        assert!(matches!(
            extension_mapping(&other, &pf),
            Err(Error::NotAComponent { .. })
        ));
    }

    #[test]
    fn fusing_one_nontrivial_marginal() {
        let (a, b) = ab();
        let pf = ProductFrame::new(&[a.clone(), b.clone()]).unwrap();
        let ma =
            MassFunction::from_assignments(&a, [(a.singleton(0), 0.6), (a.full(), 0.4)]).unwrap();
        let fused = fuse_marginals(&[ma, MassFunction::vacuous(&b)], &pf).unwrap();
        assert_eq!(fused.len(), 2);
        assert!((fused.mass(&pf.cylinder(0, 0)) - 0.6).abs() < 1e-15);
        assert!((fused.mass(&pf.frame().full()) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn fusing_vacuous_marginals() {
        let (a, b) = ab();
        let pf = ProductFrame::new(&[a.clone(), b.clone()]).unwrap();
        let fused =
            fuse_marginals(&[MassFunction::vacuous(&a), MassFunction::vacuous(&b)], &pf).unwrap();
        assert_eq!(fused, MassFunction::vacuous(pf.frame()));
        assert!(matches!(
            fuse_marginals(&[MassFunction::vacuous(&a)], &pf),
            Err(Error::ComponentCount {
                expected: 2,
                found: 1
            })
        ));
    }

    fn bayesian(frame: &Frame, weights: &[f64]) -> MassFunction {
        let total: f64 = weights.iter().sum();
        MassFunction::from_assignments(
            frame,
            weights
                .iter()
                .enumerate()
                .map(|(i, w)| (frame.singleton(i), w / total)),
        )
        .unwrap()
    }

    proptest! {
        #[test]
        fn bayesian_marginals_fuse_to_the_product(
            wa in prop::collection::vec(0.01f64..1.0, 2..=3),
            wb in prop::collection::vec(0.01f64..1.0, 2..=4),
        ) {
            let a = Frame::new("A", (0..wa.len()).map(|i| format!("a{i}"))).unwrap();
            let b = Frame::new("B", (0..wb.len()).map(|i| format!("b{i}"))).unwrap();
            let pa = bayesian(&a, &wa);
            let pb = bayesian(&b, &wb);
            let pf = ProductFrame::new(&[a.clone(), b.clone()]).unwrap();
            let fused = fuse_marginals(&[pa.clone(), pb.clone()], &pf).unwrap();
            prop_assert!(fused.is_bayesian());
            for i in 0..a.len() {
                for j in 0..b.len() {
                    let t = pf.frame().singleton(pf.tuple_index(&[i, j]));
                    let expected = pa.mass(&a.singleton(i)) * pb.mass(&b.singleton(j));
                    prop_assert_eq!(fused.mass(&t), expected);
                }
            }

            // permuting components relabels tuples and nothing else
            let swapped = ProductFrame::new(&[b.clone(), a.clone()]).unwrap();
            let fused2 = fuse_marginals(&[pb, pa], &swapped).unwrap();
            for (s, m) in fused.focal_elements() {
                let mask = s.indices().fold(0u32, |acc, t| {
                    let c = pf.coordinates(t);
                    acc | (1 << swapped.tuple_index(&[c[1], c[0]]))
                });
                let m2 = fused2.mass(&Subset::from_mask(swapped.frame(), mask));
                prop_assert!((m - m2).abs() < 1e-12);
            }
        }
    }
}
