//! Property suite for models, norms, effects and measurements.

mod common;

use approx::{abs_diff_eq, relative_eq};
use common::{cs_models, model, polyhedral_models, random_vec, seeded};
use gpt_compat::gpt::add_noise;
use gpt_compat::linalg::dot;
use gpt_compat::sampling::{random_measurement, random_state};
use gpt_compat::{Gpt, SolveOptions};
use proptest::prelude::*;

fn opts() -> SolveOptions {
    SolveOptions::default()
}

proptest! {
    #![proptest_config(common::config(64))]

    /// The base norm by its primal and dual programs, and the pairing
    /// inequality `|a(x)| <= ‖a‖_A ‖x‖_V`.
    #[test]
    fn norm_duality(seed in any::<u64>(), mi in 0usize..6) {
        let gpt = model(mi);
        let mut r = seeded(seed);
        let x = random_vec(&mut r, gpt.dim(), 1.0);
        let a = random_vec(&mut r, gpt.dim(), 1.0);
        let primal = gpt.base_norm_lp(&x, &opts()).unwrap();
        let dual = gpt.base_norm_dual_lp(&x, &opts()).unwrap();
        prop_assert!(relative_eq!(primal, dual, epsilon = 1e-9, max_relative = 1e-8), "{} vs {}", primal, dual);
        let ou = gpt.order_unit_norm(&a, &opts()).unwrap();
        prop_assert!(dot(&a, &x).abs() <= ou * primal * (1.0 + 1e-9) + 1e-12);
    }

    /// Closed-form norms of centrally symmetric models match the programs.
    #[test]
    fn cs_closed_forms_match_programs(seed in any::<u64>(), mi in 0usize..4) {
        let gpt = &cs_models()[mi];
        let mut r = seeded(seed);
        let x = random_vec(&mut r, gpt.dim(), 2.0);
        prop_assert!(relative_eq!(gpt.base_norm(&x, &opts()).unwrap(), gpt.base_norm_lp(&x, &opts()).unwrap(), epsilon = 1e-9, max_relative = 1e-8));
        prop_assert!(relative_eq!(gpt.order_unit_norm(&x, &opts()).unwrap(), gpt.order_unit_norm_lp(&x, &opts()).unwrap(), epsilon = 1e-9, max_relative = 1e-8));
    }

    /// Normalized states have base norm one.
    #[test]
    fn states_have_unit_base_norm(seed in any::<u64>(), mi in 0usize..6) {
        let gpt = model(mi);
        let mut r = seeded(seed);
        let w = random_state(&gpt, &mut r).unwrap();
        prop_assert!(abs_diff_eq!(dot(gpt.unit(), &w), 1.0, epsilon = 1e-12));
        prop_assert!(abs_diff_eq!(gpt.base_norm(&w, &opts()).unwrap(), 1.0, epsilon = 1e-9));
    }

    /// `0 <= f <= 1` in the dual order exactly when `0 <= f(v) <= 1(v)` on
    /// every extreme ray `v` of the state cone.
    #[test]
    fn effect_positivity_characterization(seed in any::<u64>(), mi in 0usize..6) {
        let gpt = model(mi);
        let mut r = seeded(seed);
        let mut f = random_vec(&mut r, gpt.dim(), 0.7);
        f[0] += 0.5;
        let gens = gpt.cone().unwrap().generators();
        let margin = gens
            .iter()
            .map(|v| {
                let (fv, uv) = (dot(&f, v), dot(gpt.unit(), v));
                fv.min(uv - fv)
            })
            .fold(f64::INFINITY, f64::min);
        prop_assume!(margin.abs() > 1e-7);
        prop_assert_eq!(gpt.validate_effect(&f, 1e-9), margin > 0.0);
    }

    /// White-noise mixing keeps measurements valid and interpolates between
    /// the measurement (s = 1) and the trivial one (s = 0).
    #[test]
    fn add_noise_preserves_validity(seed in any::<u64>(), mi in 0usize..6, k in 2usize..5, s in 0.0f64..=1.0) {
        let gpt = model(mi);
        let mut r = seeded(seed);
        let m = random_measurement(&gpt, k, &mut r).unwrap();
        prop_assert!(gpt.validate_measurement(&m, &opts()));
        let noisy = add_noise(&m, s).unwrap();
        prop_assert!(gpt.validate_measurement(&noisy, &opts()));
        let same = add_noise(&m, 1.0).unwrap();
        let trivial = add_noise(&m, 0.0).unwrap();
        for j in 0..k {
            for c in 0..gpt.dim() {
                prop_assert!(abs_diff_eq!(same.effects()[j][c], m.effects()[j][c], epsilon = 1e-15));
                prop_assert!(abs_diff_eq!(trivial.effects()[j][c], gpt.unit()[c] / k as f64, epsilon = 1e-12));
            }
        }
    }
}

#[test]
fn models_roundtrip_through_json() {
    for gpt in polyhedral_models() {
        let back = Gpt::from_json(gpt.to_json(), 1e-9).unwrap();
        assert_eq!(back.dim(), gpt.dim());
        assert_eq!(back.unit(), gpt.unit());
        assert_eq!(back.cone().unwrap().generators(), gpt.cone().unwrap().generators());
    }
}
