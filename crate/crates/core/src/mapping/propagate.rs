use std::fmt::Write as _;
use std::sync::Arc;

use indexmap::IndexMap;

use super::EvidentialMapping;
use crate::error::{Error, Result};
use crate::frames::{Frame, Subset};
use crate::mass::MassFunction;

/// Largest source frame whose full complete matrix may be exported.
pub const MAX_EXPORT_FRAME: usize = 10;

/// `m(H_k) = Σ_i P(e_i) · m_ik` for a probability distribution on the source.
pub fn propagate_probability(g: &EvidentialMapping, p: &MassFunction) -> Result<MassFunction> {
    g.source().ensure_same(p.frame())?;
    if !p.is_bayesian() {
        return Err(Error::NotBayesian(p.frame().name().to_string()));
    }
    let bm = g.basic_matrix();
    let mut acc = vec![0.0; bm.columns().len()];
    let mut touched = vec![false; bm.columns().len()];
    for i in 0..g.source().len() {
        let pi = p.mass(&g.source().singleton(i));
        if pi == 0.0 {
            continue;
        }
        for (k, &mik) in bm.rows()[i].iter().enumerate() {
            if mik != 0.0 {
                acc[k] += pi * mik;
                touched[k] = true;
            }
        }
    }
    let pairs = bm
        .columns()
        .iter()
        .cloned()
        .zip(acc)
        .zip(touched)
        .filter(|(_, t)| *t)
        .map(|(pair, _)| pair);
    MassFunction::from_accumulated(g.target(), pairs)
}

/// Propagates any mass function on the source: each focal element `E`
/// contributes `m(E)` times the complete-matrix row titled `E`.
pub fn propagate_mass(g: &EvidentialMapping, m: &MassFunction) -> Result<MassFunction> {
    g.source().ensure_same(m.frame())?;
    let mut acc: IndexMap<Subset, f64> = IndexMap::new();
    for (focal, weight) in m.focal_elements() {
        let row = g.cem_row(focal)?;
        for (column, value) in &row.entries {
            *acc.entry(column.clone()).or_insert(0.0) += weight * value;
        }
    }
    MassFunction::from_accumulated(g.target(), acc)
}

/// A mapping, or a chain of mappings whose complete matrices multiply.
#[derive(Debug, Clone)]
pub enum Propagator {
    Mapping(Arc<EvidentialMapping>),
    /// First link, then second; `first.target() == second.source()`.
    Chain(Arc<Propagator>, Arc<Propagator>),
}

impl From<EvidentialMapping> for Propagator {
    fn from(g: EvidentialMapping) -> Self {
        Propagator::Mapping(Arc::new(g))
    }
}

impl From<Arc<EvidentialMapping>> for Propagator {
    fn from(g: Arc<EvidentialMapping>) -> Self {
        Propagator::Mapping(g)
    }
}

/// Chains two propagators; frames must line up.
pub fn compose(first: impl Into<Propagator>, second: impl Into<Propagator>) -> Result<Propagator> {
    first.into().then(second)
}

impl Propagator {
    pub fn source(&self) -> &Frame {
        match self {
            Propagator::Mapping(g) => g.source(),
            Propagator::Chain(first, _) => first.source(),
        }
    }

    pub fn target(&self) -> &Frame {
        match self {
            Propagator::Mapping(g) => g.target(),
            Propagator::Chain(_, second) => second.target(),
        }
    }

    pub fn then(self, next: impl Into<Propagator>) -> Result<Propagator> {
        let next = next.into();
        self.target().ensure_same(next.source())?;
        Ok(Propagator::Chain(Arc::new(self), Arc::new(next)))
    }

    /// Number of mappings in the chain.
    pub fn links(&self) -> usize {
        match self {
            Propagator::Mapping(_) => 1,
            Propagator::Chain(a, b) => a.links() + b.links(),
        }
    }

    /// Row of the (product) complete matrix for a nonempty source subset.
    ///
    /// For a chain, each entry `(A, v)` of the first row is expanded through
    /// the second link's row titled `A`.
    pub fn row(&self, title: &Subset) -> Result<Vec<(Subset, f64)>> {
        match self {
            Propagator::Mapping(g) => Ok(g.cem_row(title)?.entries.clone()),
            Propagator::Chain(first, second) => {
                let mut acc: IndexMap<Subset, f64> = IndexMap::new();
                for (column, value) in first.row(title)? {
                    for (next, w) in second.row(&column)? {
                        *acc.entry(next).or_insert(0.0) += value * w;
                    }
                }
                Ok(acc.into_iter().filter(|(_, m)| *m != 0.0).collect())
            }
        }
    }

    /// `Σ_E m(E) · row(E)`; for a chain this uses the multiplied rows rather
    /// than propagating link by link.
    pub fn propagate(&self, m: &MassFunction) -> Result<MassFunction> {
        match self {
            Propagator::Mapping(g) => propagate_mass(g, m),
            Propagator::Chain(..) => {
                self.source().ensure_same(m.frame())?;
                let mut acc: IndexMap<Subset, f64> = IndexMap::new();
                for (focal, weight) in m.focal_elements() {
                    for (column, value) in self.row(focal)? {
                        *acc.entry(column).or_insert(0.0) += weight * value;
                    }
                }
                MassFunction::from_accumulated(self.target(), acc)
            }
        }
    }

    /// Propagates through each link in turn.
    pub fn propagate_stepwise(&self, m: &MassFunction) -> Result<MassFunction> {
        match self {
            Propagator::Mapping(g) => propagate_mass(g, m),
            Propagator::Chain(first, second) => {
                second.propagate_stepwise(&first.propagate_stepwise(m)?)
            }
        }
    }

    /// Every row of the complete matrix, one line each:
    /// `ROWTITLE<TAB>COLTITLE=MASS;COLTITLE=MASS...` with 9-decimal masses.
    pub fn export_cem(&self) -> Result<String> {
        let n = self.source().len();
        if n > MAX_EXPORT_FRAME {
            return Err(Error::FrameTooLarge {
                frame: self.source().name().to_string(),
                size: n,
                max: MAX_EXPORT_FRAME,
            });
        }
        let mut out = String::new();
        for title in self.source().nonempty_subsets() {
            let cells: Vec<String> = self
                .row(&title)?
                .iter()
                .map(|(c, m)| format!("{c}={m:.9}"))
                .collect();
            writeln!(out, "{title}\t{}", cells.join(";")).expect("writing to a String");
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::{alarm_call, five_hypotheses};
    use super::*;

    #[test]
    fn alarm_prediction() {
        let g = alarm_call();
        let s = g.source().clone();
        let p = MassFunction::from_assignments(
            &s,
            [(s.singleton(0), 0.2686), (s.singleton(1), 0.7314)],
        )
        .unwrap();
        let m = propagate_probability(&g, &p).unwrap();
        let d = g.target();
        // 0.2686·0.7 = 0.18802 and 0.2686·0.3 + 0.7314 = 0.81198
        assert!((m.mass(&d.singleton(0)) - 0.18802).abs() < 1e-12);
        assert!((m.mass(&d.singleton(1)) - 0.81198).abs() < 1e-12);
        assert!((m.mass(&d.singleton(0)) - 0.188).abs() < 1e-3);
        assert_eq!(propagate_mass(&g, &p).unwrap(), m);
    }

    #[test]
    fn unit_probability_selects_a_row() {
        let g = five_hypotheses();
        let e = g.source().clone();
        let p = MassFunction::from_assignments(&e, [(e.singleton(0), 1.0)]).unwrap();
        let m = propagate_probability(&g, &p).unwrap();
        let expected =
            MassFunction::from_assignments(g.target(), g.image(0).iter().cloned()).unwrap();
        assert_eq!(m, expected);
    }

    #[test]
    fn uniform_probability_over_five_hypotheses() {
        let g = five_hypotheses();
        let e = g.source().clone();
        let h = g.target().clone();
        let third = 1.0 / 3.0;
        let p =
            MassFunction::from_accumulated(&e, (0..3).map(|i| (e.singleton(i), third))).unwrap();
        let m = propagate_probability(&g, &p).unwrap();
        let s = |l: &[&str]| h.subset(l).unwrap();
        let expected = [
            (s(&["a1", "a2"]), 0.7 / 3.0),
            (s(&["a2", "a3"]), 0.8 / 3.0),
            (s(&["a3", "a4"]), 0.1),
            (s(&["a4", "a5"]), 0.3),
            (h.full(), 0.1),
        ];
        for (subset, v) in expected {
            assert!((m.mass(&subset) - v).abs() < 1e-12, "{subset}");
        }
        assert_eq!(m.len(), 5);
    }

    #[test]
    fn rejects_non_bayesian_input() {
        let g = five_hypotheses();
        let v = MassFunction::vacuous(g.source());
        assert!(matches!(
            propagate_probability(&g, &v),
            Err(Error::NotBayesian(_))
        ));
    }

    #[test]
    fn vacuous_evidence_stays_vacuous() {
        let g = five_hypotheses();
        let out = propagate_mass(&g, &MassFunction::vacuous(g.source())).unwrap();
        assert_eq!(out, MassFunction::vacuous(g.target()));
    }

    #[test]
    fn simple_support_on_e1() {
        // 0.6·row{e1} + 0.4·row{Θ_E}, the latter being all mass on Θ_H
        let g = five_hypotheses();
        let e = g.source().clone();
        let h = g.target().clone();
        let m =
            MassFunction::from_assignments(&e, [(e.singleton(0), 0.6), (e.full(), 0.4)]).unwrap();
        let out = propagate_mass(&g, &m).unwrap();
        assert!((out.mass(&h.subset(["a1", "a2"]).unwrap()) - 0.42).abs() < 1e-12);
        assert!((out.mass(&h.subset(["a3", "a4"]).unwrap()) - 0.18).abs() < 1e-12);
        assert!((out.mass(&h.full()) - 0.4).abs() < 1e-12);
        assert_eq!(out.len(), 3);
    }

    #[test]
    fn identity_link_is_neutral() {
        let g = five_hypotheses();
        let chain = compose(g.clone(), EvidentialMapping::identity(g.target())).unwrap();
        let e = g.source().clone();
        for title in e.nonempty_subsets() {
            let expected = g.cem_row(&title).unwrap().entries.clone();
            assert_eq!(chain.row(&title).unwrap(), expected);
        }
        let m =
            MassFunction::from_assignments(&e, [(e.singleton(1), 0.3), (e.full(), 0.7)]).unwrap();
        assert_eq!(
            chain.propagate(&m).unwrap(),
            propagate_mass(&g, &m).unwrap()
        );
    }

    #[test]
    fn compose_checks_frames() {
        let g = five_hypotheses();
        assert!(matches!(
            compose(g.clone(), g),
            Err(Error::FrameMismatch { .. })
        ));
    }

    #[test]
    fn bayesian_chain_matches_stepwise() {
        let pre = {
            let x = Frame::new("X", ["x1", "x2"]).unwrap();
            let s = alarm_call().source().clone();
            EvidentialMapping::new(
                "pre",
                &x,
                &s,
                vec![
                    vec![(s.singleton(0), 0.9), (s.singleton(1), 0.1)],
                    vec![(s.singleton(0), 0.2), (s.singleton(1), 0.8)],
                ],
            )
            .unwrap()
        };
        let x = pre.source().clone();
        let chain = compose(pre.clone(), alarm_call()).unwrap();
        let p =
            MassFunction::from_assignments(&x, [(x.singleton(0), 0.35), (x.singleton(1), 0.65)])
                .unwrap();
        let direct = chain.propagate(&p).unwrap();
        let stepwise = propagate_mass(&alarm_call(), &propagate_mass(&pre, &p).unwrap()).unwrap();
        for s in chain.target().nonempty_subsets() {
            assert!((direct.mass(&s) - stepwise.mass(&s)).abs() < 1e-12);
        }
        assert_eq!(chain.links(), 2);
    }

    #[test]
    fn export_format() {
        let g = five_hypotheses();
        let text = Propagator::from(g).export_cem().unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[0], "{e1}\t{a1,a2}=0.700000000;{a3,a4}=0.300000000");
        assert_eq!(lines[3], "{e1,e2}\t{a1,a2,a3,a4,a5}=1.000000000");
    }
}
