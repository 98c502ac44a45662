//! Helpers shared by the property suites.
#![allow(dead_code)]

use gpt_compat::sampling::rng;
use gpt_compat::{Gpt, MeasurementFamily, PolyCone};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// The polyhedral models exercised by the property suites.
pub fn polyhedral_models() -> Vec<Gpt> {
    vec![
        Gpt::make_classical(2).unwrap(),
        Gpt::make_classical(3).unwrap(),
        Gpt::make_hypercube(2).unwrap(),
        Gpt::make_hypercube(3).unwrap(),
        Gpt::make_crosspolytope(2).unwrap(),
        Gpt::make_crosspolytope(3).unwrap(),
    ]
}

/// Centrally symmetric polyhedral models.
pub fn cs_models() -> Vec<Gpt> {
    vec![
        Gpt::make_hypercube(2).unwrap(),
        Gpt::make_hypercube(3).unwrap(),
        Gpt::make_crosspolytope(2).unwrap(),
        Gpt::make_crosspolytope(3).unwrap(),
    ]
}

pub fn model(index: usize) -> Gpt {
    let ms = polyhedral_models();
    ms[index % ms.len()].clone()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    rng(seed)
}

/// A polygonal cone over a random convex `k`-gon in the plane `x₀ = 1`,
/// with its inequalities computed from consecutive vertex pairs.
pub fn random_polygon_cone(r: &mut ChaCha8Rng, k: usize) -> PolyCone {
    let mut angles: Vec<f64> = (0..k).map(|i| (i as f64 + r.gen_range(0.1..0.9)) * std::f64::consts::TAU / k as f64).collect();
    angles.sort_by(f64::total_cmp);
    let gens: Vec<Vec<f64>> = angles.iter().map(|a| vec![1.0, a.cos(), a.sin()]).collect();
    let facets: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let (a, b) = (&gens[i], &gens[(i + 1) % k]);
            // a × b is orthogonal to both and points inward for a counter-clockwise order
            vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
        })
        .collect();
    PolyCone::new(3, gens, facets, 1e-9).expect("polygon cone is proper")
}

/// A random vector with entries in `[-scale, scale]`.
pub fn random_vec(r: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| r.gen_range(-scale..=scale)).collect()
}

/// Smallest facet value of `x`, relative to its size: distance-like margin
/// used to skip points too close to a boundary for a tolerance-free answer.
pub fn facet_margin(facets: &[Vec<f64>], x: &[f64]) -> f64 {
    let scale = 1.0 + x.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    facets.iter().map(|h| h.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()).fold(f64::INFINITY, f64::min) / scale
}

/// A dichotomic family with the given first effects.
pub fn dichotomic(gpt: &Gpt, effects: &[Vec<f64>]) -> MeasurementFamily {
    MeasurementFamily::dichotomic(effects, gpt.unit()).unwrap()
}

/// Property-test configuration without on-disk failure persistence.
pub fn config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config { cases, failure_persistence: None, ..Default::default() }
}

/// The family with every effect but the last snapped to multiples of 2⁻¹⁰
/// and the last set to the unit minus the others, so the effects sum to the
/// unit exactly in binary floating point.
pub fn dyadic_family(gpt: &Gpt, fam: &MeasurementFamily) -> MeasurementFamily {
    let snap = |x: f64| (x * 1024.0).round() / 1024.0;
    let ms = fam
        .measurements()
        .iter()
        .map(|m| {
            let k = m.outcomes();
            let mut effects: Vec<Vec<f64>> = m.effects()[..k - 1].iter().map(|f| f.iter().map(|&x| snap(x)).collect()).collect();
            let last = (0..gpt.dim()).map(|c| gpt.unit()[c] - effects.iter().map(|f| f[c]).sum::<f64>()).collect();
            effects.push(last);
            gpt_compat::Measurement::new(effects).unwrap()
        })
        .collect();
    MeasurementFamily::new(ms).unwrap()
}
