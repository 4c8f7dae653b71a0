//! Random instance generators and brute-force oracles shared by the
//! integration targets. Nothing here calls into the library's inference code.

#![allow(dead_code)]

use evidential::{EvidentialMapping, Frame, MassFunction, Subset};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn frame(name: &str, prefix: &str, n: usize) -> Frame {
    Frame::new(name, (0..n).map(|i| format!("{prefix}{i}"))).unwrap()
}

/// `k` positive weights summing to 1, the last taking the remainder.
pub fn weights(rng: &mut Rng8, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut w: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let head: f64 = w[..k - 1].iter().sum();
    w[k - 1] = 1.0 - head;
    w
}

/// `k` distinct nonempty subsets of `f`.
pub fn distinct_subsets(rng: &mut Rng8, f: &Frame, k: usize) -> Vec<Subset> {
    let full = f.full_mask();
    let mut masks: Vec<u32> = Vec::with_capacity(k);
    while masks.len() < k {
        let m = rng.gen_range(1..=full);
        if !masks.contains(&m) {
            masks.push(m);
        }
    }
    masks.into_iter().map(|m| Subset::from_mask(f, m)).collect()
}

pub fn random_mass(rng: &mut Rng8, f: &Frame) -> MassFunction {
    let max = (f.full_mask() as usize).min(4);
    let k = rng.gen_range(1..=max);
    let sets = distinct_subsets(rng, f, k);
    MassFunction::from_assignments(f, sets.into_iter().zip(weights(rng, k))).unwrap()
}

pub fn random_bayesian_mass(rng: &mut Rng8, f: &Frame) -> MassFunction {
    let w = weights(rng, f.len());
    MassFunction::from_assignments(f, (0..f.len()).map(|i| (f.singleton(i), w[i]))).unwrap()
}

/// A general mapping: each row has one to three focal subsets.
pub fn random_mapping(rng: &mut Rng8, name: &str, src: &Frame, dst: &Frame) -> EvidentialMapping {
    let max = (dst.full_mask() as usize).min(3);
    let images = (0..src.len())
        .map(|_| {
            let k = rng.gen_range(1..=max);
            let sets = distinct_subsets(rng, dst, k);
            sets.into_iter().zip(weights(rng, k)).collect()
        })
        .collect();
    EvidentialMapping::new(name, src, dst, images).unwrap()
}

/// Rows are probability distributions over target singletons; some
/// entries are zero.
pub fn random_bayesian_mapping(
    rng: &mut Rng8,
    name: &str,
    src: &Frame,
    dst: &Frame,
) -> EvidentialMapping {
    let images = (0..src.len())
        .map(|_| {
            let mut idx: Vec<usize> = (0..dst.len()).collect();
            idx.shuffle(rng);
            let k = rng.gen_range(1..=dst.len());
            idx.truncate(k);
            idx.sort_unstable();
            idx.into_iter()
                .map(|j| dst.singleton(j))
                .zip(weights(rng, k))
                .collect()
        })
        .collect();
    EvidentialMapping::new(name, src, dst, images).unwrap()
}

/// Each element maps to one subset with mass 1.
pub fn random_multivalued(
    rng: &mut Rng8,
    name: &str,
    src: &Frame,
    dst: &Frame,
) -> EvidentialMapping {
    let images = (0..src.len())
        .map(|_| vec![(distinct_subsets(rng, dst, 1).remove(0), 1.0)])
        .collect();
    EvidentialMapping::new(name, src, dst, images).unwrap()
}

/// Largest absolute difference of two mass functions over all subsets.
pub fn max_diff(a: &MassFunction, b: &MassFunction) -> f64 {
    let f = a.frame();
    (1..=f.full_mask())
        .map(|m| {
            let s = Subset::from_mask(f, m);
            (a.mass(&s) - b.mass(&s.relabel(b.frame()).unwrap())).abs()
        })
        .fold(0.0, f64::max)
}

/// `p(e | h_i)` read straight from the image list.
pub fn likelihood(g: &EvidentialMapping, i: usize, j: usize) -> f64 {
    let e = g.target().singleton(j);
    g.image(i)
        .iter()
        .filter(|(s, _)| *s == e)
        .map(|(_, m)| m)
        .sum()
}

/// Posterior over `h` by summing the full joint `p(h) Π p(e^k | h)` over
/// every outcome sequence and keeping the ones equal to `observed`.
/// `None` when the observations have probability zero.
pub fn joint_enumeration_posterior(
    prior: &[f64],
    g: &EvidentialMapping,
    observed: &[usize],
) -> Option<Vec<f64>> {
    fn walk(
        g: &EvidentialMapping,
        h: usize,
        depth: usize,
        p: f64,
        seq: &mut Vec<usize>,
        observed: &[usize],
        hit: &mut f64,
    ) {
        if depth == observed.len() {
            if seq.as_slice() == observed {
                *hit += p;
            }
            return;
        }
        for j in 0..g.target().len() {
            seq.push(j);
            walk(g, h, depth + 1, p * likelihood(g, h, j), seq, observed, hit);
            seq.pop();
        }
    }
    let joint: Vec<f64> = prior
        .iter()
        .enumerate()
        .map(|(h, &p)| {
            let mut hit = 0.0;
            walk(g, h, 0, p, &mut Vec::new(), observed, &mut hit);
            hit
        })
        .collect();
    let z: f64 = joint.iter().sum();
    (z > 0.0).then(|| joint.iter().map(|x| x / z).collect())
}
