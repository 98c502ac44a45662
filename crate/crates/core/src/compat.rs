//! Compatibility decisions and compatibility measures.
//!
//! * [`is_compatible`] — joint-measurement feasibility: outcome-tuple effects
//!   `h_κ ∈ A⁺` whose marginals are the given effects.
//! * [`is_compatible_via_extension`] — a positive extension of
//!   `Φ^{(f)}: E_k → A` to `R^{k₁⋯k_g}`, i.e. `h_κ = Φ̃(e_κ) ∈ A⁺` with
//!   `Σ_κ w_a(κ) h_κ = Φ^{(f)}(w_a)` for every basis vector `w_a`.
//! * [`is_compatible_via_projection`] — `φ^{(f)} ∈ (J_k ⊗ id)(R^{k}_+ ⊗ A⁺)`.
//! * [`gamma_of_family`], [`region_membership`], [`ModelRegion`],
//!   [`gamma_model`] — the compatibility region and degree.
//!
//! In every program `h_κ = Σ_r λ_{κ,r} a_r` with `λ >= 0` and `a_r` the
//! generators of `A⁺`.

use crate::error::{check_dim, Error, Result};
use crate::gpt::{FamilyJson, Gpt, Measurement, MeasurementFamily, ModelKind, NormTag};
use crate::linalg::{dot, norm_2, norm_inf, solve};
use crate::lp::{lp_feasible, LpCertificate, LpProblem, Relation, SolveOptions};
use crate::polysimplex::{build_outcome_space, EffectTensor, OutcomeSpace};
use crate::sampling;
use crate::spectra::SpectraPoint;
use crate::tensor_norms::{gamma_crosspolytope, one_summing_l2, rho_norm, TensorElement};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default number of bisection steps (resolution `2⁻⁴⁰ ≈ 1e-12`).
pub const BISECTION_STEPS: usize = 40;

/// Cap on the number of constraint subsets tried by [`effect_vertices`].
pub const VERTEX_SUBSET_CAP: usize = 2_000_000;

/// Result of a compatibility decision.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompatResult {
    /// Whether the family is compatible.
    pub compatible: bool,
    /// Joint effects `h_κ`, indexed by the linearised outcome tuple.
    pub joint: Option<Vec<Vec<f64>>>,
    /// Infeasibility certificate when incompatible.
    pub certificate: Option<IncompatibilityCertificate>,
}

/// Farkas certificate of an infeasible joint-measurement program and the
/// jewel point it encodes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IncompatibilityCertificate {
    /// Row multipliers of the joint-measurement program.
    pub farkas: Vec<f64>,
    /// Jewel point `(z₀, z)` with `1(z₀) = 1` and
    /// `1(z₀) + Σ p_j^{(i)}(z_j^{(i)}) < 0`: it lies outside `D_f`.
    pub jewel: SpectraPoint,
    /// `1(z₀) + Σ p_j^{(i)}(z_j^{(i)})` at the jewel point.
    pub chi_value: f64,
}

/// Builds the joint-measurement program. Rows: `Σ_κ h_κ = 1` (one row per
/// coordinate), then `Σ_{κᵢ = j} h_κ = f_j^{(i)}` for `j < kᵢ − 1` in
/// `w`-basis order; the last outcome's marginal follows from the others.
pub fn joint_lp(gpt: &Gpt, family: &MeasurementFamily, space: &OutcomeSpace) -> Result<LpProblem> {
    let gens = gpt.effect_cone_generators()?;
    let m = gpt.dim();
    let r_count = gens.len();
    let n = space.n_outcomes();
    let mut p = LpProblem::new();
    p.add_vars(n * r_count, false);
    let unit = gpt.unit();
    // row (a, c): a = 0 for the unit, a = w_index(i, j) otherwise
    let mut rows: Vec<Vec<Vec<(usize, f64)>>> = vec![vec![Vec::new(); m]; space.dim_e()];
    for t in 0..n {
        let kappa = space.outcome_tuple(t);
        let mut targets = vec![0usize];
        for (i, &c) in kappa.iter().enumerate() {
            if c + 1 < space.k()[i] {
                targets.push(space.w_index(i, c));
            }
        }
        for (r, h) in gens.iter().enumerate() {
            for (c, &hc) in h.iter().enumerate() {
                if hc == 0.0 {
                    continue;
                }
                for &a in &targets {
                    rows[a][c].push((t * r_count + r, hc));
                }
            }
        }
    }
    for (a, block) in rows.into_iter().enumerate() {
        let rhs: &[f64] = match space.label(a) {
            None => unit,
            Some((i, j)) => &family.measurements()[i].effects()[j],
        };
        for (c, row) in block.into_iter().enumerate() {
            p.add_row(row, Relation::Eq, rhs[c]);
        }
    }
    Ok(p)
}

fn joint_from_solution(gpt: &Gpt, n: usize, x: &[f64]) -> Result<Vec<Vec<f64>>> {
    let gens = gpt.effect_cone_generators()?;
    let r_count = gens.len();
    Ok((0..n)
        .map(|t| {
            let mut h = vec![0.0; gpt.dim()];
            for (r, g) in gens.iter().enumerate() {
                let l = x[t * r_count + r];
                if l != 0.0 {
                    for (hc, gc) in h.iter_mut().zip(g) {
                        *hc += l * gc;
                    }
                }
            }
            h
        })
        .collect())
}

/// Largest deviation between the marginals of `joint` and the family (and
/// between `Σ_κ h_κ` and the unit).
pub fn marginal_error(gpt: &Gpt, family: &MeasurementFamily, space: &OutcomeSpace, joint: &[Vec<f64>]) -> f64 {
    let m = gpt.dim();
    let mut err: f64 = 0.0;
    let mut total = vec![0.0; m];
    for h in joint {
        for (t, x) in total.iter_mut().zip(h) {
            *t += x;
        }
    }
    err = err.max(total.iter().zip(gpt.unit()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    for (i, meas) in family.measurements().iter().enumerate() {
        for (j, f) in meas.effects().iter().enumerate() {
            let mut acc = vec![0.0; m];
            for (t, h) in joint.iter().enumerate() {
                if space.outcome_tuple(t)[i] == j {
                    for (a, x) in acc.iter_mut().zip(h) {
                        *a += x;
                    }
                }
            }
            err = err.max(acc.iter().zip(f).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        }
    }
    err
}

/// Jewel point encoded by a Farkas certificate of [`joint_lp`]: with row
/// blocks `y₀` (unit) and `y_j^{(i)}`, `z₀ = −(y₀ + Σ y_j^{(i)}/kᵢ)` and
/// `z_j^{(i)} = −½ y_j^{(i)}`, normalised to `1(z₀) = 1`.
pub fn jewel_point_from_farkas(gpt: &Gpt, space: &OutcomeSpace, farkas: &[f64]) -> Result<SpectraPoint> {
    let m = gpt.dim();
    check_dim(space.dim_e() * m, farkas.len())?;
    let block = |a: usize| &farkas[a * m..(a + 1) * m];
    let mut z0: Vec<f64> = block(0).iter().map(|v| -v).collect();
    let mut z = Vec::with_capacity(space.g());
    for (i, &ki) in space.k().iter().enumerate() {
        let mut zi = Vec::with_capacity(ki - 1);
        for j in 0..ki - 1 {
            let y = block(space.w_index(i, j));
            for (a, b) in z0.iter_mut().zip(y) {
                *a -= b / ki as f64;
            }
            zi.push(y.iter().map(|v| -0.5 * v).collect::<Vec<f64>>());
        }
        z.push(zi);
    }
    let u0 = dot(gpt.unit(), &z0);
    if u0.is_nan() || u0 <= 0.0 {
        return Err(Error::NumericalFailure("certificate has vanishing normalisation 1(z₀)".into()));
    }
    let z0 = z0.into_iter().map(|v| v / u0).collect();
    let z = z.into_iter().map(|zi| zi.into_iter().map(|v| v.into_iter().map(|x| x / u0).collect()).collect()).collect();
    Ok(SpectraPoint { z0, z })
}

/// Decides compatibility by joint-measurement feasibility. On success the
/// joint measurement is returned; otherwise the Farkas certificate and the
/// jewel point it encodes.
pub fn is_compatible(gpt: &Gpt, family: &MeasurementFamily, opts: &SolveOptions) -> Result<CompatResult> {
    gpt.require_valid_family(family, opts)?;
    let space = build_outcome_space(&family.k())?;
    let p = joint_lp(gpt, family, &space)?;
    match lp_feasible(&p, opts)? {
        LpCertificate::Feasible { x } => {
            let joint = joint_from_solution(gpt, space.n_outcomes(), &x)?;
            let err = marginal_error(gpt, family, &space, &joint);
            if err > 1e-8 {
                return Err(Error::NumericalFailure(format!("joint measurement misses its marginals by {err:e}")));
            }
            Ok(CompatResult { compatible: true, joint: Some(joint), certificate: None })
        }
        LpCertificate::Infeasible { farkas } => {
            let jewel = jewel_point_from_farkas(gpt, &space, &farkas)?;
            let t = EffectTensor::from_family_unchecked(gpt, family)?;
            let chi_value = jewel.chi_value(&t);
            Ok(CompatResult {
                compatible: false,
                joint: None,
                certificate: Some(IncompatibilityCertificate { farkas, jewel, chi_value }),
            })
        }
    }
}

fn extension_lp(gpt: &Gpt, space: &OutcomeSpace, coeff: impl Fn(usize, usize) -> f64, targets: &[Vec<f64>]) -> Result<LpProblem> {
    // rows: for each target index q and coordinate c, Σ_κ coeff(q, κ) h_κ[c] = targets[q][c]
    let gens = gpt.effect_cone_generators()?;
    let m = gpt.dim();
    let r_count = gens.len();
    let n = space.n_outcomes();
    let mut p = LpProblem::new();
    p.add_vars(n * r_count, false);
    for (q, target) in targets.iter().enumerate() {
        let cq: Vec<f64> = (0..n).map(|t| coeff(q, t)).collect();
        for c in 0..m {
            let mut row = Vec::new();
            for (t, &w) in cq.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                for (r, h) in gens.iter().enumerate() {
                    if h[c] != 0.0 {
                        row.push((t * r_count + r, w * h[c]));
                    }
                }
            }
            p.add_row(row, Relation::Eq, target[c]);
        }
    }
    Ok(p)
}

fn finish_extension(gpt: &Gpt, family: &MeasurementFamily, space: &OutcomeSpace, cert: LpCertificate) -> Result<CompatResult> {
    match cert {
        LpCertificate::Feasible { x } => {
            let joint = joint_from_solution(gpt, space.n_outcomes(), &x)?;
            let err = marginal_error(gpt, family, space, &joint);
            if err > 1e-8 {
                return Err(Error::NumericalFailure(format!("extension misses the marginals by {err:e}")));
            }
            Ok(CompatResult { compatible: true, joint: Some(joint), certificate: None })
        }
        LpCertificate::Infeasible { .. } => Ok(CompatResult { compatible: false, joint: None, certificate: None }),
    }
}

/// Decides compatibility by the existence of a positive extension of `Φ^{(f)}`.
pub fn is_compatible_via_extension(gpt: &Gpt, family: &MeasurementFamily, opts: &SolveOptions) -> Result<CompatResult> {
    gpt.require_valid_family(family, opts)?;
    let space = build_outcome_space(&family.k())?;
    let t = EffectTensor::from_family_unchecked(gpt, family)?;
    let phi = crate::polysimplex::phi_map_of(&t)?;
    let targets: Vec<Vec<f64>> = (0..space.dim_e()).map(|a| phi.column(a)).collect();
    let tuples: Vec<Vec<usize>> = (0..space.n_outcomes()).map(|s| space.outcome_tuple(s)).collect();
    let p = extension_lp(gpt, &space, |a, s| space.w_value(a, &tuples[s]), &targets)?;
    finish_extension(gpt, family, &space, lp_feasible(&p, opts)?)
}

/// Decides `φ^{(f)} ∈ (J_k ⊗ id)(R^{k}_+ ⊗ A⁺)` using the dense projection
/// (outcome count at most 4096).
pub fn is_compatible_via_projection(gpt: &Gpt, family: &MeasurementFamily, opts: &SolveOptions) -> Result<CompatResult> {
    gpt.require_valid_family(family, opts)?;
    let space = build_outcome_space(&family.k())?;
    let t = EffectTensor::from_family_unchecked(gpt, family)?;
    let full = t.to_full(&space)?;
    let m = gpt.dim();
    let j = space.j_matrix()?;
    let targets: Vec<Vec<f64>> = (0..space.n_outcomes()).map(|s| full[s * m..(s + 1) * m].to_vec()).collect();
    let p = extension_lp(gpt, &space, |s, k| j[s][k], &targets)?;
    finish_extension(gpt, family, &space, lp_feasible(&p, opts)?)
}

/// `s ∈ Γ(f)`: the family with per-measurement noise `sᵢ` is compatible.
pub fn region_membership(gpt: &Gpt, family: &MeasurementFamily, s: &[f64], opts: &SolveOptions) -> Result<bool> {
    check_dim(family.g(), s.len())?;
    if let Some(bad) = s.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::InvalidArgument(format!("noise parameter {bad} outside [0, 1]")));
    }
    Ok(is_compatible(gpt, &family.with_noise(s)?, opts)?.compatible)
}

/// `γ(f) = max{s : (s, …, s) ∈ Γ(f)}` by bisection to resolution
/// `bisect_tol` (at most [`BISECTION_STEPS`] halvings). Returns the largest
/// value certified compatible.
pub fn gamma_of_family(gpt: &Gpt, family: &MeasurementFamily, bisect_tol: f64, opts: &SolveOptions) -> Result<f64> {
    gpt.require_valid_family(family, opts)?;
    if is_compatible(gpt, family, opts)?.compatible {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut steps = 0;
    while hi - lo > bisect_tol && steps < BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if is_compatible(gpt, &family.with_uniform_noise(mid)?, opts)?.compatible {
            lo = mid;
        } else {
            hi = mid;
        }
        steps += 1;
    }
    Ok(lo)
}

/// `γ(f) = min(1, 1/‖φ̄^{(f)}‖_ρ)` for a dichotomic family (one LP pair
/// instead of a bisection).
pub fn gamma_of_dichotomic_family(gpt: &Gpt, family: &MeasurementFamily, opts: &SolveOptions) -> Result<f64> {
    gpt.require_valid_family(family, opts)?;
    let t = EffectTensor::from_family_unchecked(gpt, family)?;
    let rho = rho_norm(gpt, &TensorElement::new(t.dichotomic_blocks()?), opts)?;
    Ok(if rho <= 1.0 { 1.0 } else { 1.0 / rho })
}

/// Vertices of the effect polytope `{f : 0 <= f(v) <= 1(v) ∀ generators v of V⁺}`,
/// by brute force over square subsystems of the constraints.
pub fn effect_vertices(gpt: &Gpt, tol: f64) -> Result<Vec<Vec<f64>>> {
    let gens = gpt.cone()?.generators();
    let d = gpt.dim();
    // constraint q: row = gens[q / 2], rhs = 0 (even) or 1(v) (odd)
    let rows: Vec<(&Vec<f64>, f64)> = gens.iter().flat_map(|g| [(g, 0.0), (g, dot(gpt.unit(), g))]).collect();
    let total = binomial(rows.len(), d);
    if total > VERTEX_SUBSET_CAP {
        return Err(Error::LimitExceeded { what: "effect-vertex subsets", value: total, limit: VERTEX_SUBSET_CAP });
    }
    let mut verts: Vec<Vec<f64>> = Vec::new();
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        // skip subsets using both bounds of one generator
        if !idx.windows(2).any(|w| w[0] / 2 == w[1] / 2) {
            let a: Vec<Vec<f64>> = idx.iter().map(|&q| rows[q].0.clone()).collect();
            let b: Vec<f64> = idx.iter().map(|&q| rows[q].1).collect();
            if let Some(f) = solve(&a, &b) {
                let ok = gens.iter().all(|g| {
                    let v = dot(&f, g);
                    v >= -tol && v <= dot(gpt.unit(), g) + tol
                });
                if ok && !verts.iter().any(|v: &Vec<f64>| v.iter().zip(&f).all(|(x, y)| (x - y).abs() <= 1e-9)) {
                    verts.push(f.into_iter().map(|x| if x.abs() < 1e-15 { 0.0 } else { x }).collect());
                }
            }
        }
        // next combination
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(verts);
            }
            i -= 1;
            if idx[i] < rows.len() - d + i {
                idx[i] += 1;
                for j in i + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// Nontrivial vertices of the effect polytope (all but `0` and `1`).
pub fn nontrivial_effect_vertices(gpt: &Gpt, tol: f64) -> Result<Vec<Vec<f64>>> {
    let unit = gpt.unit().to_vec();
    Ok(effect_vertices(gpt, tol)?
        .into_iter()
        .filter(|f| norm_inf(f) > 1e-9 && f.iter().zip(&unit).any(|(x, u)| (x - u).abs() > 1e-9))
        .collect())
}

/// The model region `Γ(g; V, V⁺)` for dichotomic measurements. Compatibility
/// at fixed noise is convex in each effect separately, so `s ∈ Γ` exactly
/// when every ordered tuple of nontrivial vertex effects is compatible at `s`.
#[derive(Clone, Debug)]
pub struct ModelRegion {
    gpt: Gpt,
    g: usize,
    vertices: Vec<Vec<f64>>,
}

impl ModelRegion {
    /// Enumerates the effect vertices of a polyhedral model.
    pub fn new(gpt: &Gpt, g: usize) -> Result<Self> {
        if g == 0 {
            return Err(Error::InvalidArgument("g must be positive".into()));
        }
        let vertices = nontrivial_effect_vertices(gpt, 1e-9)?;
        Ok(ModelRegion { gpt: gpt.clone(), g, vertices })
    }

    /// The nontrivial vertex effects.
    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// Number of vertex tuples checked per point.
    pub fn tuple_count(&self) -> usize {
        self.vertices.len().saturating_pow(self.g as u32)
    }

    fn tuple(&self, mut t: usize) -> Vec<Vec<f64>> {
        let v = self.vertices.len();
        let mut out = vec![Vec::new(); self.g];
        for i in (0..self.g).rev() {
            out[i] = self.vertices[t % v].clone();
            t /= v;
        }
        out
    }

    /// `s ∈ Γ(g; V, V⁺)`.
    pub fn contains(&self, s: &[f64], opts: &SolveOptions) -> Result<bool> {
        check_dim(self.g, s.len())?;
        if let Some(bad) = s.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::InvalidArgument(format!("noise parameter {bad} outside [0, 1]")));
        }
        if self.vertices.is_empty() {
            return Ok(true);
        }
        let bad = (0..self.tuple_count()).into_par_iter().find_map_any(|t| {
            let fam = match MeasurementFamily::dichotomic(&self.tuple(t), self.gpt.unit()) {
                Ok(f) => f,
                Err(e) => return Some(Err(e)),
            };
            match region_membership(&self.gpt, &fam, s, opts) {
                Ok(true) => None,
                Ok(false) => Some(Ok(())),
                Err(e) => Some(Err(e)),
            }
        });
        match bad {
            None => Ok(true),
            Some(Ok(())) => Ok(false),
            Some(Err(e)) => Err(e),
        }
    }
}

/// Lifts a point of the dichotomic inclusion set to `k` outcomes:
/// `sᵢ ↦ sᵢ / (kᵢ − 1)²`. Accepts either `g` values or `Σ(kᵢ − 1)` values
/// (one per dichotomic copy; each block contributes its minimum).
pub fn symmetrization_lift(s: &[f64], k: &[usize]) -> Result<Vec<f64>> {
    if k.iter().any(|&ki| ki < 2) {
        return Err(Error::InvalidArgument("every measurement needs k >= 2 outcomes".into()));
    }
    let blocks: usize = k.iter().map(|ki| ki - 1).sum();
    let per: Vec<f64> = if s.len() == k.len() {
        s.to_vec()
    } else if s.len() == blocks {
        let mut out = Vec::with_capacity(k.len());
        let mut off = 0;
        for &ki in k {
            out.push(s[off..off + ki - 1].iter().copied().fold(f64::INFINITY, f64::min));
            off += ki - 1;
        }
        out
    } else {
        return Err(Error::DimensionMismatch { expected: k.len(), found: s.len() });
    };
    Ok(per.iter().zip(k).map(|(si, &ki)| si / ((ki - 1) * (ki - 1)) as f64).collect())
}

/// `γ(f)` for two unbiased dichotomic effects `fᵢ = ½(1 + (0, aᵢ))` on a
/// ball model: `min(1, 2/(‖a+b‖₂ + ‖a−b‖₂))`.
pub fn euclidean_pair_gamma(gpt: &Gpt, a: &[f64], b: &[f64]) -> Result<f64> {
    if gpt.kind() != ModelKind::Ball {
        return Err(Error::WrongModel { required: "ball", found: gpt.name() });
    }
    check_dim(gpt.n(), a.len())?;
    check_dim(gpt.n(), b.len())?;
    if norm_2(a) > 1.0 + 1e-12 || norm_2(b) > 1.0 + 1e-12 {
        return Err(Error::InvalidMeasurement("Bloch vectors must have norm at most 1".into()));
    }
    let plus: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
    let minus: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let rho = 0.5 * (norm_2(&plus) + norm_2(&minus));
    Ok(if rho <= 1.0 { 1.0 } else { 1.0 / rho })
}

/// Search settings for [`gamma_model`].
#[derive(Clone, Debug, PartialEq)]
pub struct GammaSearch {
    /// Number of family evaluations in the adversarial search.
    pub budget: usize,
    /// Seed of the random restarts.
    pub seed: u64,
    /// Bisection resolution for non-dichotomic families.
    pub bisect_tol: f64,
}

impl Default for GammaSearch {
    fn default() -> Self {
        GammaSearch { budget: 2000, seed: 0, bisect_tol: 1e-9 }
    }
}

/// An interval `[lower, upper]` containing `γ(k; V, V⁺)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaInterval {
    /// Lower bound (closed form).
    pub lower: f64,
    /// Upper bound (closed form or adversarial search).
    pub upper: f64,
    /// Where the lower bound comes from.
    pub lower_source: String,
    /// Where the upper bound comes from.
    pub upper_source: String,
    /// Families evaluated by the search.
    pub evaluations: usize,
    /// The family attaining the search minimum, if the search improved the bound.
    pub best_family: Option<FamilyJson>,
}

impl GammaInterval {
    /// Whether both ends agree within `tol`.
    pub fn is_tight(&self, tol: f64) -> bool {
        self.upper - self.lower <= tol
    }
}

struct Bound {
    value: f64,
    source: String,
}

fn better_lower(cur: &mut Bound, value: f64, source: &str) {
    if value > cur.value {
        *cur = Bound { value, source: source.to_string() };
    }
}

fn better_upper(cur: &mut Bound, value: f64, source: &str) {
    if value < cur.value {
        *cur = Bound { value, source: source.to_string() };
    }
}

/// Closed-form bounds on the dichotomic degree `γ(g; V, V⁺)`.
fn dichotomic_bounds(gpt: &Gpt, g: usize) -> (Bound, Bound) {
    let gf = g as f64;
    let mut lo = Bound { value: 1.0 / gf, source: "1/g".into() };
    let mut hi = Bound { value: 1.0, source: "trivial".into() };
    if g == 1 {
        return (Bound { value: 1.0, source: "single measurement".into() }, hi);
    }
    better_lower(&mut lo, 1.0 / g.min(gpt.dim()) as f64, "1/min(g, dim V)");
    match (gpt.kind(), gpt.cs_norm()) {
        (ModelKind::Classical, _) => {
            lo = Bound { value: 1.0, source: "simplicial cone".into() };
        }
        (_, Some(norm)) => {
            let n = gpt.n();
            let m = g.min(n) as f64;
            better_lower(&mut lo, 1.0 / m, "1/min(g, n)");
            if n >= 2 {
                better_upper(&mut hi, std::f64::consts::FRAC_1_SQRT_2, "reference bound 1/sqrt(2)");
            }
            if n >= g {
                better_upper(&mut hi, (2.0 / gf).sqrt(), "reference bound sqrt(2/g)");
            }
            match norm {
                NormTag::Linf => {
                    // the matching upper bound is left to the search
                    lo = Bound { value: 1.0 / m, source: "1/min(g, n) (hypercube)".into() };
                }
                NormTag::L1 => {
                    better_lower(&mut lo, gamma_crosspolytope(g), "f(g)");
                    better_lower(&mut lo, gamma_crosspolytope(n), "f(n) = 1/pi1(l1^n)");
                }
                NormTag::L2 => {
                    if g <= n {
                        lo = Bound { value: 1.0 / gf.sqrt(), source: "QC_g (g <= n)".into() };
                        hi = Bound { value: 1.0 / gf.sqrt(), source: "QC_g (g <= n)".into() };
                    } else {
                        better_lower(&mut lo, 1.0 / gf.sqrt(), "QC_g");
                        better_lower(&mut lo, 1.0 / one_summing_l2(n), "h(n) = 1/pi1(l2^n)");
                        better_upper(&mut hi, 1.0 / (n as f64).sqrt(), "reference bound 1/sqrt(n)");
                    }
                }
            }
        }
        _ => {}
    }
    (lo, hi)
}

/// An interval for the compatibility degree `γ(k; V, V⁺)`: the lower end is
/// the best applicable closed form, the upper end the minimum of `γ(f)` over
/// an adversarial search (vertex effects first, then seeded random
/// families), further capped by closed-form upper bounds. Ball models get
/// closed-form bounds only.
pub fn gamma_model(gpt: &Gpt, k: &[usize], search: &GammaSearch, opts: &SolveOptions) -> Result<GammaInterval> {
    if k.is_empty() || k.iter().any(|&ki| ki < 2) {
        return Err(Error::InvalidArgument("outcome vector needs g >= 1 entries, each >= 2".into()));
    }
    let g = k.len();
    let dichotomic = k.iter().all(|&ki| ki == 2);
    let (lo, mut hi) = if dichotomic {
        dichotomic_bounds(gpt, g)
    } else {
        // Γ(k) ⊆ Γ(2, …, 2); Σsᵢ <= 1 is always inside; lift the dichotomic
        // bound for Σ(kᵢ − 1) measurements
        let (_, hi2) = dichotomic_bounds(gpt, g);
        let kbar: usize = k.iter().map(|ki| ki - 1).sum();
        let (lo_bar, _) = dichotomic_bounds(gpt, kbar);
        let worst = k.iter().map(|ki| ((ki - 1) * (ki - 1)) as f64).fold(1.0, f64::max);
        let mut lo = Bound { value: 1.0 / g as f64, source: "1/g".into() };
        better_lower(&mut lo, lo_bar.value / worst, &format!("lifted {} (symmetrization)", lo_bar.source));
        if gpt.kind() == ModelKind::Classical {
            lo = Bound { value: 1.0, source: "simplicial cone".into() };
        }
        (lo, Bound { value: hi2.value, source: format!("{} (dichotomic)", hi2.source) })
    };
    let mut evaluations = 0;
    let mut best_family = None;
    if gpt.is_polyhedral() && lo.value < hi.value - 1e-12 && search.budget > 0 {
        let mut record = |gamma: f64, fam: &MeasurementFamily, source: &str| {
            if gamma < hi.value {
                hi = Bound { value: gamma, source: source.to_string() };
                best_family = Some(fam.to_json());
            }
        };
        let verts = nontrivial_effect_vertices(gpt, 1e-9)?;
        // vertex multisets i₁ <= i₂ <= … (γ is symmetric under permutations)
        let mut candidates: Vec<MeasurementFamily> = Vec::new();
        if !verts.is_empty() {
            let mut idx = vec![0usize; g];
            'outer: loop {
                if candidates.len() >= search.budget {
                    break;
                }
                candidates.push(vertex_family(gpt, &verts, &idx, k)?);
                let mut i = g;
                loop {
                    if i == 0 {
                        break 'outer;
                    }
                    i -= 1;
                    if idx[i] + 1 < verts.len() {
                        idx[i] += 1;
                        for j in i + 1..g {
                            idx[j] = idx[i];
                        }
                        break;
                    }
                }
            }
        }
        let n_vertex = candidates.len();
        let mut rng = sampling::rng(search.seed);
        while candidates.len() < search.budget {
            candidates.push(sampling::random_family(gpt, k, 1.0, &mut rng)?);
        }
        let gammas: Vec<Result<f64>> = candidates
            .par_iter()
            .map(|fam| {
                if dichotomic {
                    gamma_of_dichotomic_family(gpt, fam, opts)
                } else {
                    gamma_of_family(gpt, fam, search.bisect_tol, opts)
                }
            })
            .collect();
        for (t, (gm, fam)) in gammas.into_iter().zip(&candidates).enumerate() {
            let gm = gm?;
            evaluations += 1;
            record(gm, fam, if t < n_vertex { "search (vertex effects)" } else { "search (random families)" });
        }
        if hi.value < lo.value && hi.value >= lo.value - 1e-7 {
            // rounding at the boundary
            hi.value = lo.value;
        } else if hi.value < lo.value {
            // a numerically certified family below a proven lower bound means
            // the two computations disagree; report rather than hide it
            return Err(Error::NumericalFailure(format!(
                "search found gamma {} below the closed-form lower bound {}",
                hi.value, lo.value
            )));
        }
    }
    Ok(GammaInterval {
        lower: lo.value,
        upper: hi.value,
        lower_source: lo.source,
        upper_source: hi.source,
        evaluations,
        best_family,
    })
}

fn vertex_family(gpt: &Gpt, verts: &[Vec<f64>], idx: &[usize], k: &[usize]) -> Result<MeasurementFamily> {
    let unit = gpt.unit();
    let ms = idx
        .iter()
        .zip(k)
        .map(|(&v, &ki)| {
            let f = &verts[v];
            let mut effects = vec![f.clone(), unit.iter().zip(f).map(|(u, x)| u - x).collect()];
            effects.resize(ki, vec![0.0; unit.len()]);
            Measurement::new(effects)
        })
        .collect::<Result<Vec<_>>>()?;
    MeasurementFamily::new(ms)
}
