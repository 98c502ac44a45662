//! Property suite for the crossnorms, the ρ-norm and the closed forms.

mod common;

use approx::abs_diff_eq;
use common::{cs_models, dichotomic, model, random_vec, seeded};
use gpt_compat::compat::ModelRegion;
use gpt_compat::sampling::random_family;
use gpt_compat::tensor_norms::{
    gamma_crosspolytope, h_function, injective_norm_linf, one_summing, projective_norm_linf, region_ball, region_hypercube,
    rho_dual, rho_primal, XNorm,
};
use gpt_compat::{is_compatible, rho_norm, EffectTensor, Gpt, SolveOptions, TensorElement};
use proptest::prelude::*;
use rand::Rng;

fn opts() -> SolveOptions {
    SolveOptions::default()
}

fn blocks_of(gpt: &Gpt, fam: &gpt_compat::MeasurementFamily) -> TensorElement {
    TensorElement::new(EffectTensor::from_family_unchecked(gpt, fam).unwrap().dichotomic_blocks().unwrap())
}

/// `E|ε₁ + … + ε_g| / g` by enumerating sign vectors.
fn f_by_enumeration(g: usize) -> f64 {
    let total: i64 = (0..1u64 << g).map(|m| (2 * m.count_ones() as i64 - g as i64).abs()).sum();
    total as f64 / (g as f64 * (1u64 << g) as f64)
}

/// `E|u₁|` for `u` uniform on the sphere of `R^n`, by Simpson quadrature of
/// `(1/(n−1)) / ∫₀^{π/2} cos^{n−2}θ dθ`.
fn h_by_quadrature(n: usize) -> f64 {
    let steps = 20_000;
    let hstep = std::f64::consts::FRAC_PI_2 / steps as f64;
    let f = |t: f64| t.cos().powi(n as i32 - 2);
    let mut s = f(0.0) + f(std::f64::consts::FRAC_PI_2);
    for i in 1..steps {
        s += f(i as f64 * hstep) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    (1.0 / (n as f64 - 1.0)) / (s * hstep / 3.0)
}

proptest! {
    #![proptest_config(common::config(48))]

    /// `ε <= ρ <= π` on `ℓ∞^g ⊗ A`, and the two ρ programs agree.
    #[test]
    fn rho_is_sandwiched(seed in any::<u64>(), mi in 0usize..6, g in 1usize..4) {
        let gpt = model(mi);
        let mut r = seeded(seed);
        let z = TensorElement::new((0..g).map(|_| random_vec(&mut r, gpt.dim(), 1.0)).collect());
        let eps = injective_norm_linf(&z, XNorm::OrderUnit(&gpt), &opts()).unwrap();
        let pi = projective_norm_linf(&z, XNorm::OrderUnit(&gpt), &opts()).unwrap();
        prop_assert!(pi.exact);
        let (primal, _) = rho_primal(&gpt, &z, &opts()).unwrap();
        let (dual, _, _) = rho_dual(&gpt, &z, &opts()).unwrap();
        prop_assert!((primal - dual).abs() <= 1e-7 * (1.0 + primal));
        prop_assert!(eps <= primal + 1e-8, "eps {} > rho {}", eps, primal);
        prop_assert!(primal <= pi.value + 1e-8, "rho {} > pi {}", primal, pi.value);
    }

    /// Each block is an effect exactly when the injective norm is at most one.
    #[test]
    fn effects_are_the_injective_ball(seed in any::<u64>(), mi in 0usize..6, g in 1usize..4, spread in 0.2f64..1.2) {
        let gpt = model(mi);
        let mut r = seeded(seed);
        let effects: Vec<Vec<f64>> = (0..g)
            .map(|_| {
                let mut f = random_vec(&mut r, gpt.dim(), spread / 2.0);
                f[0] += 0.5 * gpt.unit()[0];
                f.iter().zip(gpt.unit()).enumerate().map(|(c, (x, u))| if c == 0 { *x } else { x + 0.5 * u }).collect()
            })
            .collect();
        let z = blocks_of(&gpt, &dichotomic(&gpt, &effects));
        let eps = injective_norm_linf(&z, XNorm::OrderUnit(&gpt), &opts()).unwrap();
        prop_assume!((eps - 1.0).abs() > 1e-7);
        let all_effects = effects.iter().all(|f| gpt.validate_effect(f, 1e-9));
        prop_assert_eq!(eps <= 1.0, all_effects);
    }

    /// A family is compatible exactly when its ρ-norm is at most one.
    #[test]
    fn compatible_is_the_rho_ball(seed in any::<u64>(), mi in 0usize..6, g in 1usize..4) {
        let gpt = model(mi);
        let fam = random_family(&gpt, &vec![2; g], 0.5, &mut seeded(seed)).unwrap();
        let rho = rho_norm(&gpt, &blocks_of(&gpt, &fam), &opts()).unwrap();
        prop_assume!((rho - 1.0).abs() > 1e-6);
        prop_assert_eq!(rho <= 1.0, is_compatible(&gpt, &fam, &opts()).unwrap().compatible);
    }

    /// On centrally symmetric models, unbiased families have ρ equal to the
    /// projective norm of their centred parts in `ℓ∞^g ⊗ Ā`.
    #[test]
    fn cs_unbiased_reduction(seed in any::<u64>(), mi in 0usize..4, g in 1usize..4) {
        let gpt = &cs_models()[mi];
        let tag = gpt.cs_norm().unwrap();
        let mut r = seeded(seed);
        let effects: Vec<Vec<f64>> = (0..g)
            .map(|_| {
                let mut a = random_vec(&mut r, gpt.n(), 1.0);
                let norm = tag.dual().eval(&a);
                let scale = r.gen_range(0.1..=1.0) / norm;
                a.iter_mut().for_each(|x| *x *= scale);
                let mut f = vec![0.5];
                f.extend(a.iter().map(|x| 0.5 * x));
                f
            })
            .collect();
        let fam = dichotomic(gpt, &effects);
        let t = EffectTensor::from_family_unchecked(gpt, &fam).unwrap();
        let split = t.cs_split.clone().unwrap();
        prop_assert!(split.y.iter().all(|y| y.abs() < 1e-15));
        let rho = rho_norm(gpt, &blocks_of(gpt, &fam), &opts()).unwrap();
        let reduced = projective_norm_linf(&TensorElement::new(split.xi_bar), XNorm::Tag(tag.dual()), &opts()).unwrap();
        prop_assert!(abs_diff_eq!(rho, reduced.value, epsilon = 1e-8), "rho {} vs reduced {}", rho, reduced.value);
    }

    /// The hypercube region closed form matches the vertex-tuple programs
    /// off the boundary.
    #[test]
    fn hypercube_region_matches_programs(seed in any::<u64>(), n in 2usize..4, g in 1usize..4) {
        let gpt = Gpt::make_hypercube(n).unwrap();
        let region = ModelRegion::new(&gpt, g).unwrap();
        let mut r = seeded(seed);
        let s: Vec<f64> = (0..g).map(|_| r.gen_range(0.0..=1.0)).collect();
        let mut sorted = s.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let top: f64 = sorted.iter().take(g.min(n)).sum();
        prop_assume!((top - 1.0).abs() > 1e-7);
        prop_assert_eq!(region.contains(&s, &opts()).unwrap(), region_hypercube(g, n, &s).unwrap());
    }

    /// The quarter circle is exact for `g <= n` and a lower set.
    #[test]
    fn ball_region_quarter_circle(s in prop::collection::vec(0.0f64..=1.0, 1..6), n in 1usize..6, shrink in 0.0f64..=1.0) {
        let res = region_ball(s.len(), n, &s).unwrap();
        prop_assert_eq!(res.exact, s.len() <= n);
        prop_assert_eq!(res.member, s.iter().map(|x| x * x).sum::<f64>() <= 1.0 + 1e-12);
        if res.member {
            let smaller: Vec<f64> = s.iter().map(|x| x * shrink).collect();
            prop_assert!(region_ball(s.len(), n, &smaller).unwrap().member);
        }
    }

    /// Closed forms against independent oracles: `f(g)` by sign enumeration,
    /// `h(n)` by quadrature, and `π₁(ℓ₂ⁿ) = 1/h(n)`.
    #[test]
    fn closed_forms_match_oracles(g in 1usize..=20, n in 2usize..=40) {
        prop_assert!((gamma_crosspolytope(g) - f_by_enumeration(g)).abs() <= 1e-15);
        prop_assert!((h_function(n) - h_by_quadrature(n)).abs() <= 1e-9);
        prop_assert!((one_summing("l2", n).unwrap() * h_function(n) - 1.0).abs() <= 1e-12);
        prop_assert_eq!(one_summing("linf", n).unwrap(), n as f64);
    }
}

#[test]
fn f_is_monotone_and_pairs_share_mean_deviation() {
    // E|S_{2m}| = E|S_{2m−1}| for sign sums, i.e. 2m·f(2m) = (2m − 1)·f(2m − 1)
    let f: Vec<f64> = (1..=200).map(gamma_crosspolytope).collect();
    for w in f.windows(2) {
        assert!(w[1] <= w[0] * (1.0 + 1e-12));
    }
    for m in 1..100usize {
        let even = 2.0 * m as f64 * gamma_crosspolytope(2 * m);
        let odd = (2 * m - 1) as f64 * gamma_crosspolytope(2 * m - 1);
        assert!((even - odd).abs() <= 1e-10 * odd, "m = {m}: {even} vs {odd}");
    }
}
