//! Generalized spectrahedra: the GPT jewel and diamond, the sets `D_f`, their
//! inclusion, and the minimal / maximal spectrahedra `D_min`, `D_max`.
//!
//! A point of the `(k; L, L⁺)`-jewel is a tuple `(z₀, z_j^{(i)})` in `L` with
//! `z_κ := z₀ + Σᵢⱼ w_j^{(i)}(κ) z_j^{(i)} ∈ L⁺` for every outcome tuple `κ`.
//! For `k = (2, …, 2)` this is the diamond `z₀ + Σ εᵢ zᵢ ∈ L⁺ ∀ε`.
//!
//! Inclusion of the jewel in `D_f` (with `L = V`) is decided exactly: it is
//! equivalent to the nonnegativity of the evaluation
//! `⟨χ, 1⊗z₀ + Σ p_j^{(i)} ⊗ z_j^{(i)}⟩ = 1(z₀) + Σ p_j^{(i)}(z_j^{(i)})` on the
//! jewel, which is one LP whose dual is the positive-extension program.

use crate::cones::{dual_cone, max_tensor_member, min_tensor_member, PolyCone};
use crate::error::{check_dim, Error, Result};
use crate::gpt::{Gpt, MeasurementFamily};
use crate::linalg::dot;
use crate::lp::{lp_minimize, LpOutcome, LpProblem, Relation, SolveOptions};
use crate::polysimplex::{build_outcome_space, EffectTensor, OutcomeSpace};
use crate::sampling;
use serde::{Deserialize, Serialize};

/// A tuple `(z₀, z_j^{(i)})` of vectors in `L`, `j < kᵢ − 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectraPoint {
    /// `z₀`.
    pub z0: Vec<f64>,
    /// `z[i][j] = z_j^{(i)}`.
    pub z: Vec<Vec<Vec<f64>>>,
}

impl SpectraPoint {
    /// The point `(z₀, 0, …, 0)`.
    pub fn at_base(space: &OutcomeSpace, z0: Vec<f64>) -> Self {
        let l = z0.len();
        SpectraPoint { z: space.k().iter().map(|&ki| vec![vec![0.0; l]; ki - 1]).collect(), z0 }
    }

    /// A dichotomic point `(z₀, z₁, …, z_g)`.
    pub fn dichotomic(z0: Vec<f64>, z: Vec<Vec<f64>>) -> Self {
        SpectraPoint { z0, z: z.into_iter().map(|zi| vec![zi]).collect() }
    }

    /// Dimension of `L`.
    pub fn dim(&self) -> usize {
        self.z0.len()
    }

    /// Errors unless the shape matches `(k, L)`.
    pub fn check_shape(&self, space: &OutcomeSpace, l: usize) -> Result<()> {
        check_dim(l, self.z0.len())?;
        check_dim(space.g(), self.z.len())?;
        for (zi, &ki) in self.z.iter().zip(space.k()) {
            check_dim(ki - 1, zi.len())?;
            for zij in zi {
                check_dim(l, zij.len())?;
            }
        }
        Ok(())
    }

    /// `z_κ = z₀ + Σ w_j^{(i)}(κ) z_j^{(i)}`.
    pub fn evaluate_at(&self, space: &OutcomeSpace, kappa: &[usize]) -> Vec<f64> {
        let mut v = self.z0.clone();
        for (i, zi) in self.z.iter().enumerate() {
            for (j, zij) in zi.iter().enumerate() {
                let c = space.w_coeff(i, j, kappa[i]);
                for (x, y) in v.iter_mut().zip(zij) {
                    *x += c * y;
                }
            }
        }
        v
    }

    /// The average of all `z_κ`, which equals `z₀` because every
    /// `w_j^{(i)}` sums to zero over the outcome tuples.
    pub fn barycenter(&self, space: &OutcomeSpace) -> Vec<f64> {
        let n = space.n_outcomes();
        let mut acc = vec![0.0; self.dim()];
        for t in 0..n {
            let zk = self.evaluate_at(space, &space.outcome_tuple(t));
            for (a, x) in acc.iter_mut().zip(zk) {
                *a += x / n as f64;
            }
        }
        acc
    }

    /// `(1(z₀) + Σ p_j^{(i)}(z_j^{(i)}))` against an effect tensor, i.e. the
    /// pairing of `χ` with the image of this point.
    pub fn chi_value(&self, t: &EffectTensor) -> f64 {
        let mut v = dot(&t.p0, &self.z0);
        for (pi, zi) in t.p.iter().zip(&self.z) {
            for (pij, zij) in pi.iter().zip(zi) {
                v += dot(pij, zij);
            }
        }
        v
    }
}

/// Membership in the `(k; L, L⁺)`-jewel.
pub fn jewel_member(space: &OutcomeSpace, cone: &PolyCone, z: &SpectraPoint, tol: f64) -> Result<bool> {
    z.check_shape(space, cone.dim())?;
    for t in 0..space.n_outcomes() {
        if !cone.member(&z.evaluate_at(space, &space.outcome_tuple(t)), tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The image `1⊗z₀ + Σ p_j^{(i)} ⊗ z_j^{(i)} ∈ A ⊗ L`, `A` index slowest.
pub fn df_image(t: &EffectTensor, z: &SpectraPoint) -> Vec<f64> {
    let m = t.p0.len();
    let l = z.dim();
    let mut out = vec![0.0; m * l];
    let mut add = |a: &[f64], v: &[f64]| {
        for (r, ar) in a.iter().enumerate() {
            if *ar == 0.0 {
                continue;
            }
            for (c, vc) in v.iter().enumerate() {
                out[r * l + c] += ar * vc;
            }
        }
    };
    add(&t.p0, &z.z0);
    for (pi, zi) in t.p.iter().zip(&z.z) {
        for (pij, zij) in pi.iter().zip(zi) {
            add(pij, zij);
        }
    }
    out
}

/// Membership of `z` in `D_f(k; L, L⁺)`: the image lies in `A⁺ ⊗_min L⁺`,
/// decided by LP over products of generators.
pub fn df_member(gpt: &Gpt, family: &MeasurementFamily, z: &SpectraPoint, l_cone: &PolyCone, opts: &SolveOptions) -> Result<bool> {
    let t = EffectTensor::from_family_unchecked(gpt, family)?;
    let space = build_outcome_space(&family.k())?;
    z.check_shape(&space, l_cone.dim())?;
    let a_plus = dual_cone(gpt.cone()?)?;
    min_tensor_member(&a_plus, l_cone, &df_image(&t, z), opts)
}

/// Settings of the optional sampling pre-pass of [`jewel_inclusion`].
#[derive(Clone, Debug, PartialEq)]
pub struct JewelSampler {
    /// Seed of the sampler.
    pub seed: u64,
    /// Number of random jewel points tried before the exact program.
    pub samples: usize,
}

/// Detailed outcome of [`jewel_inclusion_detailed`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InclusionResult {
    /// Whether the jewel is contained in `D_f`.
    pub included: bool,
    /// Minimum of `1(z₀) + Σ p(z)` over jewel points with `1(z₀) = 1`
    /// (absent when the sampler refuted inclusion first).
    pub min_value: Option<f64>,
    /// A jewel point outside `D_f`, when inclusion fails.
    pub violating: Option<SpectraPoint>,
    /// Whether the sampling pre-pass found the violating point.
    pub refuted_by_sampling: bool,
}

/// Decides `D_jewel(k; V, V⁺) ⊆ D_f(k; V, V⁺)`, which holds exactly when
/// the family is compatible.
pub fn jewel_inclusion(gpt: &Gpt, family: &MeasurementFamily, sampler: Option<&JewelSampler>, opts: &SolveOptions) -> Result<bool> {
    Ok(jewel_inclusion_detailed(gpt, family, sampler, opts)?.included)
}

/// [`jewel_inclusion`] with the minimum value and a violating point.
pub fn jewel_inclusion_detailed(
    gpt: &Gpt,
    family: &MeasurementFamily,
    sampler: Option<&JewelSampler>,
    opts: &SolveOptions,
) -> Result<InclusionResult> {
    gpt.require_valid_family(family, opts)?;
    let t = EffectTensor::from_family_unchecked(gpt, family)?;
    let space = build_outcome_space(&family.k())?;
    let cone = gpt.cone()?;
    if let Some(s) = sampler {
        let a_plus = dual_cone(cone)?;
        let mut rng = sampling::rng(s.seed);
        for _ in 0..s.samples {
            let z = sampling::random_jewel_point(&space, cone, &mut rng)?;
            if !min_tensor_member(&a_plus, cone, &df_image(&t, &z), opts)? {
                return Ok(InclusionResult { included: false, min_value: None, violating: Some(z), refuted_by_sampling: true });
            }
        }
    }
    let (value, z) = chi_minimum(gpt, &space, &t, opts)?;
    let scale = 1.0 + t.p.iter().flatten().map(|p| crate::linalg::norm_inf(p)).fold(0.0, f64::max);
    let included = value >= -opts.tol.max(1e-9) * scale;
    Ok(InclusionResult { included, min_value: Some(value), violating: (!included).then_some(z), refuted_by_sampling: false })
}

/// Minimises `1(z₀) + Σ p_j^{(i)}(z_j^{(i)})` over jewel points with `1(z₀) = 1`.
/// The feasible set is bounded (the only jewel point with `1(z₀) = 0` is 0).
pub fn chi_minimum(gpt: &Gpt, space: &OutcomeSpace, t: &EffectTensor, opts: &SolveOptions) -> Result<(f64, SpectraPoint)> {
    let facets = gpt.effect_cone_generators()?;
    let m = gpt.dim();
    let d = space.dim_e();
    let mut p = LpProblem::new();
    let base = p.add_vars(d * m, true);
    // variable block a (basis index) holds z₀ for a = 0 and z_j^{(i)} otherwise
    let var = |a: usize, c: usize| base + a * m + c;
    for s in 0..space.n_outcomes() {
        let kappa = space.outcome_tuple(s);
        let coef: Vec<f64> = (0..d).map(|a| space.w_value(a, &kappa)).collect();
        for h in facets {
            let mut row = Vec::new();
            for (a, &ca) in coef.iter().enumerate() {
                if ca == 0.0 {
                    continue;
                }
                for (c, &hc) in h.iter().enumerate() {
                    if hc != 0.0 {
                        row.push((var(a, c), ca * hc));
                    }
                }
            }
            p.add_row(row, Relation::Ge, 0.0);
        }
    }
    p.add_row(gpt.unit().iter().enumerate().filter(|(_, &u)| u != 0.0).map(|(c, &u)| (var(0, c), u)).collect(), Relation::Eq, 1.0);
    let mut obj: Vec<(usize, f64)> = t.p0.iter().enumerate().map(|(c, &v)| (var(0, c), v)).collect();
    for (i, pi) in t.p.iter().enumerate() {
        for (j, pij) in pi.iter().enumerate() {
            let a = space.w_index(i, j);
            obj.extend(pij.iter().enumerate().map(|(c, &v)| (var(a, c), v)));
        }
    }
    p.set_objective(obj);
    match lp_minimize(&p, opts)? {
        LpOutcome::Optimal { x, value } => {
            let block = |a: usize| x[var(a, 0)..var(a, 0) + m].to_vec();
            let z = space
                .k()
                .iter()
                .enumerate()
                .map(|(i, &ki)| (0..ki - 1).map(|j| block(space.w_index(i, j))).collect())
                .collect();
            Ok((value, SpectraPoint { z0: block(0), z }))
        }
        other => Err(Error::NumericalFailure(format!("jewel evaluation program did not reach an optimum: {other:?}"))),
    }
}

/// Level-1 inclusion `D_jewel(k; R, R₊) ⊆ D_f(k; R, R₊)`, decided for an
/// arbitrary (not necessarily valid) tuple of covectors; it holds exactly when
/// the tuples form measurements.
pub fn level1_inclusion(gpt: &Gpt, t: &EffectTensor, opts: &SolveOptions) -> Result<bool> {
    let space = build_outcome_space(&t.k)?;
    let gens = gpt.cone()?.generators();
    let d = space.dim_e();
    for v in gens {
        // minimise u(v)·z₀ + Σ p(v) z over scalar jewel points with z₀ = 1
        let mut p = LpProblem::new();
        let base = p.add_vars(d, true);
        for s in 0..space.n_outcomes() {
            let kappa = space.outcome_tuple(s);
            let row = (0..d).map(|a| (base + a, space.w_value(a, &kappa))).filter(|(_, c)| *c != 0.0).collect();
            p.add_row(row, Relation::Ge, 0.0);
        }
        p.add_row(vec![(base, 1.0)], Relation::Eq, 1.0);
        let mut obj = vec![(base, dot(&t.p0, v))];
        for (i, pi) in t.p.iter().enumerate() {
            for (j, pij) in pi.iter().enumerate() {
                obj.push((base + space.w_index(i, j), dot(pij, v)));
            }
        }
        p.set_objective(obj);
        match lp_minimize(&p, opts)? {
            LpOutcome::Optimal { value, .. } => {
                if value < -opts.tol.max(1e-9) * (1.0 + crate::linalg::norm_inf(v)) {
                    return Ok(false);
                }
            }
            other => return Err(Error::NumericalFailure(format!("level-1 program did not reach an optimum: {other:?}"))),
        }
    }
    Ok(true)
}

/// The cone `{(x₀, x) : ‖x‖₁ <= x₀}` in `R^{1+g}`, whose maximal
/// spectrahedron is the diamond.
pub fn diamond_cone(g: usize) -> Result<PolyCone> {
    Ok(Gpt::make_crosspolytope(g)?.cone()?.clone())
}

fn stack(c: &PolyCone, l: &PolyCone, v: &[Vec<f64>]) -> Result<Vec<f64>> {
    check_dim(c.dim(), v.len())?;
    let mut y = Vec::with_capacity(c.dim() * l.dim());
    for vi in v {
        check_dim(l.dim(), vi.len())?;
        y.extend_from_slice(vi);
    }
    Ok(y)
}

/// `(v₁, …, v_g) ∈ D_min(C; L, L⁺) ≅ C ⊗_min L⁺`.
pub fn dmin_member(c: &PolyCone, l: &PolyCone, v: &[Vec<f64>], opts: &SolveOptions) -> Result<bool> {
    let y = stack(c, l, v)?;
    min_tensor_member(c, l, &y, opts)
}

/// `(v₁, …, v_g) ∈ D_max(C; L, L⁺) ≅ C ⊗_max L⁺`: `Σ hᵢ vᵢ ∈ L⁺` for every
/// generator `h` of `C*`.
pub fn dmax_member(c: &PolyCone, l: &PolyCone, v: &[Vec<f64>], tol: f64) -> Result<bool> {
    let y = stack(c, l, v)?;
    max_tensor_member(c, l, &y, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpt::Measurement;

    fn hc2_pair(s: f64) -> (Gpt, MeasurementFamily) {
        let hc = Gpt::make_hypercube(2).unwrap();
        let f1 = vec![0.5, 0.5 * s, 0.0];
        let f2 = vec![0.5, 0.0, 0.5 * s];
        let fam = MeasurementFamily::dichotomic(&[f1, f2], hc.unit()).unwrap();
        (hc, fam)
    }

    #[test]
    fn base_points_are_members() {
        let hc = Gpt::make_hypercube(2).unwrap();
        let space = build_outcome_space(&[2, 3]).unwrap();
        let z = SpectraPoint::at_base(&space, vec![1.0, 0.2, -0.3]);
        assert!(jewel_member(&space, hc.cone().unwrap(), &z, 1e-12).unwrap());
    }

    #[test]
    fn zero_base_forces_zero() {
        let hc = Gpt::make_hypercube(2).unwrap();
        let space = build_outcome_space(&[2, 2]).unwrap();
        let z = SpectraPoint::dichotomic(vec![0.0; 3], vec![vec![0.0, 0.1, 0.0], vec![0.0; 3]]);
        assert!(!jewel_member(&space, hc.cone().unwrap(), &z, 1e-12).unwrap());
    }

    #[test]
    fn barycenter_is_z0() {
        let hc = Gpt::make_hypercube(2).unwrap();
        let space = build_outcome_space(&[3, 2]).unwrap();
        let mut r = sampling::rng(5);
        let z = sampling::random_jewel_point(&space, hc.cone().unwrap(), &mut r).unwrap();
        let b = z.barycenter(&space);
        for (x, y) in b.iter().zip(&z.z0) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn sharp_pair_inclusion_fails_and_noisy_pair_holds() {
        let opts = SolveOptions::default();
        let (hc, fam) = hc2_pair(1.0);
        let res = jewel_inclusion_detailed(&hc, &fam, None, &opts).unwrap();
        assert!(!res.included);
        let z = res.violating.unwrap();
        let space = build_outcome_space(&[2, 2]).unwrap();
        assert!(jewel_member(&space, hc.cone().unwrap(), &z, 1e-9).unwrap());
        assert!(!df_member(&hc, &fam, &z, hc.cone().unwrap(), &opts).unwrap());
        let (hc, fam) = hc2_pair(0.5);
        assert!(jewel_inclusion(&hc, &fam, None, &opts).unwrap());
    }

    #[test]
    fn sampler_prepass_refutes_sharp_pair() {
        let (hc, fam) = hc2_pair(1.0);
        let s = JewelSampler { seed: 1, samples: 500 };
        let res = jewel_inclusion_detailed(&hc, &fam, Some(&s), &SolveOptions::default()).unwrap();
        assert!(!res.included);
    }

    #[test]
    fn trivial_family_df_reduces_to_base() {
        let hc = Gpt::make_hypercube(2).unwrap();
        let triv = Measurement::dichotomic(&hc.scaled_unit(0.5), hc.unit()).unwrap();
        let fam = MeasurementFamily::new(vec![triv]).unwrap();
        let z = SpectraPoint::dichotomic(vec![1.0, 0.5, 0.5], vec![vec![0.3, -0.2, 0.1]]);
        assert!(df_member(&hc, &fam, &z, hc.cone().unwrap(), &SolveOptions::default()).unwrap());
    }

    #[test]
    fn diamond_is_dmax_of_l1_cone() {
        let hc = Gpt::make_hypercube(2).unwrap();
        let cone = hc.cone().unwrap();
        let space = build_outcome_space(&[2, 2]).unwrap();
        let c = diamond_cone(2).unwrap();
        let mut r = sampling::rng(9);
        for _ in 0..50 {
            let z0 = crate::sampling::random_state(&hc, &mut r).unwrap();
            let z1 = crate::sampling::random_in_ball(&mut r, 3);
            let z2 = crate::sampling::random_in_ball(&mut r, 3);
            let p = SpectraPoint::dichotomic(z0.clone(), vec![z1.clone(), z2.clone()]);
            let a = jewel_member(&space, cone, &p, 1e-12).unwrap();
            let b = dmax_member(&c, cone, &[z0, z1, z2], 1e-12).unwrap();
            assert_eq!(a, b);
        }
    }
}
