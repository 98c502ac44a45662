//! Seeded random generation of states, effects, measurement families and
//! jewel points, used by the adversarial searches and the test suites.
//!
//! All generators take an explicit [`ChaCha8Rng`], so a fixed seed fixes
//! every randomized search.

use crate::cones::PolyCone;
use crate::error::{Error, Result};
use crate::gpt::{Gpt, Measurement, MeasurementFamily};
use crate::linalg::{dot, norm_2};
use crate::lp::SolveOptions;
use crate::polysimplex::OutcomeSpace;
use crate::spectra::SpectraPoint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

/// A deterministic generator from a seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box–Muller; one variate per call keeps the stream simple
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// A uniformly random direction in `R^n`.
pub fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| gaussian(rng)).collect();
        let r = norm_2(&v);
        if r > 1e-12 {
            return v.into_iter().map(|x| x / r).collect();
        }
    }
}

/// A point of the Euclidean unit ball in `R^n`, uniform in direction and radius.
pub fn random_in_ball(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let r: f64 = rng.gen();
    random_direction(rng, n).into_iter().map(|x| r * x).collect()
}

/// Random nonnegative weights summing to one (flat Dirichlet), with the
/// given probability of a single nonzero weight.
fn random_weights(rng: &mut ChaCha8Rng, n: usize, sparse_prob: f64) -> Vec<f64> {
    if rng.gen_bool(sparse_prob) {
        let mut w = vec![0.0; n];
        w[rng.gen_range(0..n)] = 1.0;
        return w;
    }
    let w: Vec<f64> = (0..n).map(|_| -rng.gen_range(f64::EPSILON..1.0f64).ln()).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// A random normalized state (`1(x) = 1`).
pub fn random_state(gpt: &Gpt, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    match gpt.cone() {
        Ok(cone) => {
            let gens = cone.generators();
            let w = random_weights(rng, gens.len(), 0.1);
            let mut x = vec![0.0; gpt.dim()];
            for (wr, g) in w.iter().zip(gens) {
                let u = dot(gpt.unit(), g);
                for (xi, gi) in x.iter_mut().zip(g) {
                    *xi += wr * gi / u;
                }
            }
            Ok(x)
        }
        Err(_) => {
            let mut x = vec![1.0];
            x.extend(random_in_ball(rng, gpt.n()));
            Ok(x)
        }
    }
}

/// A random element of `A⁺`: a positive combination of effect-cone
/// generators, concentrated on a single generator with probability `sparse_prob`.
pub fn random_positive_effect(gpt: &Gpt, rng: &mut ChaCha8Rng, sparse_prob: f64) -> Result<Vec<f64>> {
    match gpt.effect_cone_generators() {
        Ok(gens) => {
            let w = random_weights(rng, gens.len(), sparse_prob);
            let mut a = vec![0.0; gpt.dim()];
            for (wr, h) in w.iter().zip(gens) {
                for (ai, hi) in a.iter_mut().zip(h) {
                    *ai += wr * hi;
                }
            }
            Ok(a)
        }
        Err(_) => {
            // ball: (1, ā) with ‖ā‖₂ <= 1
            let mut a = vec![1.0];
            let dir = random_direction(rng, gpt.n());
            let r = if rng.gen_bool(sparse_prob) { 1.0 } else { rng.gen::<f64>() };
            a.extend(dir.into_iter().map(|x| r * x));
            Ok(a)
        }
    }
}

/// A random `k`-outcome measurement: `fⱼ = c·uⱼ + (1 − c·U)/k` with
/// `uⱼ ∈ A⁺`, `U = Σuⱼ` and `c = 1/‖U‖_A`, so that `c·U <= 1`.
pub fn random_measurement(gpt: &Gpt, k: usize, rng: &mut ChaCha8Rng) -> Result<Measurement> {
    if k < 2 {
        return Err(Error::InvalidArgument("measurements need k >= 2 outcomes".into()));
    }
    let sparse = 0.5;
    let us: Vec<Vec<f64>> = (0..k).map(|_| random_positive_effect(gpt, rng, sparse)).collect::<Result<_>>()?;
    let mut total = vec![0.0; gpt.dim()];
    for u in &us {
        for (t, x) in total.iter_mut().zip(u) {
            *t += x;
        }
    }
    let norm = gpt.order_unit_norm(&total, &SolveOptions::default())?;
    let c = if norm > 0.0 { 1.0 / norm } else { 0.0 };
    let unit = gpt.unit();
    let rest: Vec<f64> = unit.iter().zip(&total).map(|(u, t)| (u - c * t) / k as f64).collect();
    let mut effects: Vec<Vec<f64>> =
        us.iter().map(|u| u.iter().zip(&rest).map(|(x, r)| c * x + r).collect()).collect();
    // make the sum exact in the last effect so validation is not at the mercy of rounding
    let partial: Vec<f64> = (0..gpt.dim()).map(|i| effects[..k - 1].iter().map(|f| f[i]).sum()).collect();
    effects[k - 1] = unit.iter().zip(&partial).map(|(u, p)| u - p).collect();
    Measurement::new(effects)
}

/// A random family with outcome vector `k`, optionally mixed with a random
/// amount of white noise `s ∈ [s_min, 1]` to produce a mix of compatible and
/// incompatible families.
pub fn random_family(gpt: &Gpt, k: &[usize], s_min: f64, rng: &mut ChaCha8Rng) -> Result<MeasurementFamily> {
    let ms = k.iter().map(|&ki| random_measurement(gpt, ki, rng)).collect::<Result<Vec<_>>>()?;
    let fam = MeasurementFamily::new(ms)?;
    if s_min >= 1.0 {
        return Ok(fam);
    }
    let s: Vec<f64> = (0..k.len()).map(|_| rng.gen_range(s_min..=1.0)).collect();
    fam.with_noise(&s)
}

/// `g` random effects `fᵢ` (first effects of a dichotomic family).
pub fn random_effects(gpt: &Gpt, g: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<f64>>> {
    (0..g).map(|_| Ok(random_measurement(gpt, 2, rng)?.effects()[0].clone())).collect()
}

/// A random point of the `(k; L, L⁺)`-jewel: `z₀` a random interior point of
/// `L⁺`, the `z_j^{(i)}` a random direction scaled by a uniform fraction of the
/// largest feasible step.
pub fn random_jewel_point(space: &OutcomeSpace, cone: &PolyCone, rng: &mut ChaCha8Rng) -> Result<SpectraPoint> {
    let facets = cone.require_facets("jewel sampling")?;
    let l = cone.dim();
    let gens = cone.generators();
    let w = random_weights(rng, gens.len(), 0.0);
    let mut z0 = vec![0.0; l];
    for (wr, g) in w.iter().zip(gens) {
        for (zi, gi) in z0.iter_mut().zip(g) {
            *zi += wr * gi;
        }
    }
    let z: Vec<Vec<Vec<f64>>> = space
        .k()
        .iter()
        .map(|&ki| (0..ki - 1).map(|_| random_direction(rng, l)).collect())
        .collect();
    let dir = SpectraPoint { z0: vec![0.0; l], z };
    let mut t_max = f64::INFINITY;
    for t in 0..space.n_outcomes() {
        let kappa = space.outcome_tuple(t);
        let d = dir.evaluate_at(space, &kappa);
        for h in facets {
            let hd = dot(h, &d);
            if hd < 0.0 {
                t_max = t_max.min(dot(h, &z0) / -hd);
            }
        }
    }
    let t = if t_max.is_finite() { rng.gen::<f64>() * t_max } else { rng.gen::<f64>() };
    Ok(SpectraPoint { z0, z: dir.z.into_iter().map(|zi| zi.into_iter().map(|v| v.into_iter().map(|x| t * x).collect()).collect()).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysimplex::build_outcome_space;

    #[test]
    fn measurements_are_valid() {
        let mut r = rng(7);
        for gpt in [Gpt::make_classical(3).unwrap(), Gpt::make_hypercube(2).unwrap(), Gpt::make_crosspolytope(2).unwrap()] {
            for k in 2..=4 {
                for _ in 0..20 {
                    let m = random_measurement(&gpt, k, &mut r).unwrap();
                    assert!(gpt.validate_measurement(&m, &SolveOptions::default()), "{}", gpt.name());
                }
            }
        }
    }

    #[test]
    fn states_are_normalised() {
        let mut r = rng(1);
        let hc = Gpt::make_hypercube(3).unwrap();
        for _ in 0..20 {
            let x = random_state(&hc, &mut r).unwrap();
            assert!((dot(hc.unit(), &x) - 1.0).abs() < 1e-12);
            assert!(hc.state_cone_member(&x, 1e-12).unwrap());
        }
    }

    #[test]
    fn jewel_points_are_members() {
        let mut r = rng(3);
        let hc = Gpt::make_hypercube(2).unwrap();
        let space = build_outcome_space(&[3, 2]).unwrap();
        for _ in 0..20 {
            let z = random_jewel_point(&space, hc.cone().unwrap(), &mut r).unwrap();
            assert!(crate::spectra::jewel_member(&space, hc.cone().unwrap(), &z, 1e-9).unwrap());
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let hc = Gpt::make_hypercube(2).unwrap();
        let a = random_family(&hc, &[2, 3], 0.3, &mut rng(11)).unwrap();
        let b = random_family(&hc, &[2, 3], 0.3, &mut rng(11)).unwrap();
        assert_eq!(a, b);
    }
}
