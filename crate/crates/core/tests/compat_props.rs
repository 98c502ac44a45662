//! Property suite for compatibility decisions, regions and degrees.

mod common;

use common::{dyadic_family, model, seeded};
use gpt_compat::compat::{is_compatible_via_projection, marginal_error};
use gpt_compat::sampling::random_family;
use gpt_compat::{
    build_outcome_space, gamma_of_family, is_compatible, is_compatible_via_extension, jewel_inclusion, region_membership, rho_norm,
    EffectTensor, Measurement, MeasurementFamily, SolveOptions, TensorElement,
};
use proptest::prelude::*;
use rand::Rng;

fn opts() -> SolveOptions {
    SolveOptions::default()
}

fn small_k() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..4, 1..4)
}

proptest! {
    #![proptest_config(common::config(48))]

    /// The joint-measurement, extension, projection and jewel routes agree.
    #[test]
    fn decision_routes_agree(seed in any::<u64>(), mi in 0usize..6, k in small_k(), s_min in 0.2f64..=1.0) {
        let gpt = model(mi);
        let fam = random_family(&gpt, &k, s_min, &mut seeded(seed)).unwrap();
        let a = is_compatible(&gpt, &fam, &opts()).unwrap().compatible;
        prop_assert_eq!(is_compatible_via_extension(&gpt, &fam, &opts()).unwrap().compatible, a);
        prop_assert_eq!(is_compatible_via_projection(&gpt, &fam, &opts()).unwrap().compatible, a);
        prop_assert_eq!(jewel_inclusion(&gpt, &fam, None, &opts()).unwrap(), a);
    }

    /// A returned joint measurement consists of effects and reproduces the
    /// family as its marginals; exact arithmetic reaches the same answer with
    /// zero marginal error.
    #[test]
    fn joint_marginals_are_exact(seed in any::<u64>(), mi in 0usize..6, k in prop::collection::vec(2usize..4, 1..3)) {
        let gpt = model(mi);
        let fam = dyadic_family(&gpt, &random_family(&gpt, &k, 0.3, &mut seeded(seed)).unwrap());
        prop_assume!(gpt.validate_family(&fam, &SolveOptions::exact()));
        let space = build_outcome_space(&fam.k()).unwrap();
        let float = is_compatible(&gpt, &fam, &opts()).unwrap();
        let exact = is_compatible(&gpt, &fam, &SolveOptions::exact()).unwrap();
        prop_assert_eq!(float.compatible, exact.compatible);
        for (res, tol) in [(float, 1e-9), (exact, 1e-12)] {
            if let Some(joint) = &res.joint {
                prop_assert_eq!(joint.len(), space.n_outcomes());
                for h in joint {
                    prop_assert!(gpt.effect_cone_member(h, 1e-9).unwrap());
                }
                prop_assert!(marginal_error(&gpt, &fam, &space, joint) <= tol);
            }
            if let Some(cert) = &res.certificate {
                prop_assert!(cert.chi_value < 0.0);
            }
        }
    }

    /// Regions are lower sets: shrinking a member point keeps it a member.
    #[test]
    fn region_is_monotone(seed in any::<u64>(), mi in 0usize..6, k in small_k()) {
        let gpt = model(mi);
        let mut r = seeded(seed);
        let fam = random_family(&gpt, &k, 1.0, &mut r).unwrap();
        let s: Vec<f64> = k.iter().map(|_| r.gen_range(0.0..=1.0)).collect();
        let smaller: Vec<f64> = s.iter().map(|x| x * r.gen_range(0.0..=1.0)).collect();
        if region_membership(&gpt, &fam, &s, &opts()).unwrap() {
            prop_assert!(region_membership(&gpt, &fam, &smaller, &opts()).unwrap());
        }
        prop_assert!(region_membership(&gpt, &fam, &vec![0.0; k.len()], &opts()).unwrap());
    }

    /// Adding a measurement can only lower the compatibility degree.
    #[test]
    fn degree_decreases_with_more_measurements(seed in any::<u64>(), mi in 0usize..6, k in prop::collection::vec(2usize..4, 2..4)) {
        let gpt = model(mi);
        let fam = random_family(&gpt, &k, 1.0, &mut seeded(seed)).unwrap();
        let sub = MeasurementFamily::new(fam.measurements()[..k.len() - 1].to_vec()).unwrap();
        let full = gamma_of_family(&gpt, &fam, 1e-8, &opts()).unwrap();
        let part = gamma_of_family(&gpt, &sub, 1e-8, &opts()).unwrap();
        prop_assert!(full <= part + 1e-7, "{} > {}", full, part);
    }

    /// Merging two outcomes of a compatible family keeps it compatible.
    #[test]
    fn coarse_graining_preserves_compatibility(seed in any::<u64>(), mi in 0usize..6) {
        let gpt = model(mi);
        let fam = random_family(&gpt, &[3, 3], 0.3, &mut seeded(seed)).unwrap();
        prop_assume!(is_compatible(&gpt, &fam, &opts()).unwrap().compatible);
        let merged: Vec<Measurement> = fam
            .measurements()
            .iter()
            .map(|m| {
                let e = m.effects();
                let joined: Vec<f64> = e[1].iter().zip(&e[2]).map(|(a, b)| a + b).collect();
                Measurement::new(vec![e[0].clone(), joined]).unwrap()
            })
            .collect();
        prop_assert!(is_compatible(&gpt, &MeasurementFamily::new(merged).unwrap(), &opts()).unwrap().compatible);
    }

    /// For dichotomic families the degree is the reciprocal of the ρ-norm,
    /// capped at one.
    #[test]
    fn degree_is_reciprocal_rho(seed in any::<u64>(), mi in 0usize..6, g in 1usize..4) {
        let gpt = model(mi);
        let fam = random_family(&gpt, &vec![2; g], 1.0, &mut seeded(seed)).unwrap();
        let blocks = EffectTensor::from_family_unchecked(&gpt, &fam).unwrap().dichotomic_blocks().unwrap();
        let rho = rho_norm(&gpt, &TensorElement::new(blocks), &opts()).unwrap();
        let gamma = gamma_of_family(&gpt, &fam, 1e-10, &opts()).unwrap();
        prop_assert!((gamma - (1.0 / rho).min(1.0)).abs() <= 1e-6, "gamma {} rho {}", gamma, rho);
    }
}
