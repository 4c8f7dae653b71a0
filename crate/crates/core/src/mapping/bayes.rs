use super::EvidentialMapping;
use crate::error::{Error, Result};
use crate::frames::Subset;
use crate::mass::MassFunction;

fn check_inputs(prior: &MassFunction, g: &EvidentialMapping, observed: &[Subset]) -> Result<()> {
    g.source().ensure_same(prior.frame())?;
    if !prior.is_bayesian() {
        return Err(Error::NotBayesian(prior.frame().name().to_string()));
    }
    if !g.classify().bayesian {
        return Err(Error::MappingNotBayesian(g.name().to_string()));
    }
    for e in observed {
        g.target().ensure_same(e.frame())?;
        if !e.is_singleton() {
            return Err(Error::InvalidObservation(format!(
                "{e} is not a single element of `{}`",
                g.target().name()
            )));
        }
    }
    Ok(())
}

/// `p(e | h_i)`: the mass the image of `h_i` puts on `{e}`.
fn likelihood(g: &EvidentialMapping, i: usize, e: &Subset) -> f64 {
    g.image(i)
        .iter()
        .find(|(s, _)| s == e)
        .map_or(0.0, |(_, m)| *m)
}

/// `Bel(h_i) = α · p(h_i) · Π_k p(e^k | h_i)` for a Bayesian mapping read as
/// the conditional table `p(e | h)`.
///
/// `observed` lists singleton subsets of the mapping's target, one per
/// observation; repeats are independent observations.
pub fn posterior(
    prior: &MassFunction,
    g: &EvidentialMapping,
    observed: &[Subset],
) -> Result<MassFunction> {
    check_inputs(prior, g, observed)?;
    let h = g.source();
    let weights: Vec<f64> = (0..h.len())
        .map(|i| {
            let p = prior.mass(&h.singleton(i));
            observed.iter().fold(p, |acc, e| acc * likelihood(g, i, e))
        })
        .collect();
    let total: f64 = weights.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::ImpossibleObservations);
    }
    MassFunction::from_accumulated(
        h,
        weights
            .into_iter()
            .enumerate()
            .map(|(i, w)| (h.singleton(i), w / total)),
    )
}

/// The same posterior by brute force: enumerate every joint outcome
/// `(h, e^1, …, e^N)`, keep those consistent with the observations and
/// condition on their total probability.
///
/// Cost is `|H| · |E|^N`; meant for cross-checking small instances.
pub fn posterior_by_enumeration(
    prior: &MassFunction,
    g: &EvidentialMapping,
    observed: &[Subset],
) -> Result<MassFunction> {
    check_inputs(prior, g, observed)?;
    let h = g.source();
    let e = g.target();
    let n = observed.len();
    let wanted: Vec<usize> = observed
        .iter()
        .map(|s| s.indices().next().expect("singleton"))
        .collect();

    let mut consistent = vec![0.0; h.len()];
    let mut evidence = 0.0;
    let mut outcome = vec![0usize; n];
    for (i, slot) in consistent.iter_mut().enumerate() {
        let p_h = prior.mass(&h.singleton(i));
        outcome.iter_mut().for_each(|o| *o = 0);
        loop {
            let joint = outcome
                .iter()
                .fold(p_h, |acc, &o| acc * likelihood(g, i, &e.singleton(o)));
            if outcome == wanted {
                *slot += joint;
                evidence += joint;
            }
            // odometer over E^N
            let mut k = 0;
            while k < n {
                outcome[k] += 1;
                if outcome[k] < e.len() {
                    break;
                }
                outcome[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    if evidence.is_nan() || evidence <= 0.0 {
        return Err(Error::ImpossibleObservations);
    }
    MassFunction::from_accumulated(
        h,
        consistent
            .into_iter()
            .enumerate()
            .map(|(i, w)| (h.singleton(i), w / evidence)),
    )
}
