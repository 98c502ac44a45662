//! Property suite for incompatibility witnesses.

mod common;

use approx::abs_diff_eq;
use common::{cs_models, model, random_vec, seeded};
use gpt_compat::sampling::random_family;
use gpt_compat::tensor_norms::rho_dual;
use gpt_compat::witness::{blind_region_member, pi_prime_member, sample_witnesses, witness_gauge, WitnessSampler};
use gpt_compat::{evaluate, is_witness, rho_norm, EffectTensor, SolveOptions, TensorElement};
use proptest::prelude::*;
use rand::Rng;

fn opts() -> SolveOptions {
    SolveOptions::default()
}

proptest! {
    #![proptest_config(common::config(32))]

    /// Witnesses are the dual unit ball of ρ: the dual optimum is a witness
    /// attaining ρ, and no sampled witness exceeds it.
    #[test]
    fn witnesses_are_dual_to_rho(seed in any::<u64>(), mi in 0usize..6, g in 1usize..4) {
        let gpt = model(mi);
        let fam = random_family(&gpt, &vec![2; g], 0.5, &mut seeded(seed)).unwrap();
        let blocks = EffectTensor::from_family_unchecked(&gpt, &fam).unwrap().dichotomic_blocks().unwrap();
        let z = TensorElement::new(blocks.clone());
        let rho = rho_norm(&gpt, &z, &opts()).unwrap();
        let (value, _, y) = rho_dual(&gpt, &z, &opts()).unwrap();
        prop_assert!(abs_diff_eq!(value, rho, epsilon = 1e-7 * (1.0 + rho)));
        prop_assert!(abs_diff_eq!(evaluate(&y, &blocks).unwrap(), rho, epsilon = 1e-7 * (1.0 + rho)));
        prop_assert!(witness_gauge(&gpt, &y, &opts()).unwrap() <= 1.0 + 1e-7);
        let ws = sample_witnesses(&gpt, g, &WitnessSampler { seed, samples: 50 }, &opts()).unwrap();
        for w in ws {
            prop_assert!(is_witness(&gpt, &w.z, &SolveOptions::with_tol(1e-8)).unwrap().is_some());
            prop_assert!(evaluate(&w.z, &blocks).unwrap() <= rho + 1e-8);
        }
    }

    /// On centrally symmetric models the witness gauge of a tuple with
    /// vanishing unit components is `max_ε ‖Σ εᵢ z̄ᵢ‖`.
    #[test]
    fn cs_gauge_is_sign_enumeration(seed in any::<u64>(), mi in 0usize..4, g in 1usize..4) {
        let gpt = &cs_models()[mi];
        let tag = gpt.cs_norm().unwrap();
        let mut r = seeded(seed);
        let z: Vec<Vec<f64>> = (0..g)
            .map(|_| {
                let mut v = random_vec(&mut r, gpt.dim(), 1.0);
                v[0] = 0.0;
                v
            })
            .collect();
        let mut enumerated: f64 = 0.0;
        for mask in 0..1u32 << g {
            let mut d = vec![0.0; gpt.n()];
            for (i, zi) in z.iter().enumerate() {
                let e = if mask >> i & 1 == 1 { -1.0 } else { 1.0 };
                for (dc, zc) in d.iter_mut().zip(&zi[1..]) {
                    *dc += e * zc;
                }
            }
            enumerated = enumerated.max(tag.eval(&d));
        }
        let gauge = witness_gauge(gpt, &z, &opts()).unwrap();
        prop_assert!(abs_diff_eq!(gauge, enumerated, epsilon = 1e-8 * (1.0 + enumerated)), "{} vs {}", gauge, enumerated);
    }

    /// The blind region computed through witnesses of centred tuples equals
    /// the blind region from compatibility regions.
    #[test]
    fn pi_prime_equals_pi(seed in any::<u64>(), mi in 0usize..4, g in 1usize..4) {
        let gpt = &cs_models()[mi];
        let mut r = seeded(seed);
        // random points hit the boundary with probability zero
        let s: Vec<f64> = (0..g).map(|_| r.gen_range(0.0..=1.0) * if r.gen_bool(0.5) { 1.0 } else { 0.6 }).collect();
        let exact = blind_region_member(gpt, &s, None, &opts()).unwrap();
        prop_assert_eq!(exact.exact, Some(exact.member));
        prop_assert_eq!(pi_prime_member(gpt, &s, &opts()).unwrap(), exact.member);
    }
}
