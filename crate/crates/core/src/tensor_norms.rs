//! Tensor crossnorms and closed-form compatibility constants.
//!
//! A [`TensorElement`] `z = Σᵢ eᵢ ⊗ zᵢ` is stored as its blocks `zᵢ ∈ X`.
//! On `ℓ₁^g ⊗ X` the injective norm is `max_ε ‖Σ εᵢ zᵢ‖` and the projective
//! norm `Σ‖zᵢ‖`; on `ℓ∞^g ⊗ X` the injective norm is `maxᵢ ‖zᵢ‖` and the
//! projective norm is a linear program over products of extreme points.
//!
//! The ρ-norm of a dichotomic effect tensor `φ̄ = Σ čᵢ ⊗ pᵢ` is
//! `inf{λ : h_ε ∈ A⁺, Σ_ε h_ε = λ·1, Σ_ε εᵢ h_ε = pᵢ}` (primal) and
//! `sup{Σ pᵢ(yᵢ) : 1(y₀) <= 1, y₀ + Σ εᵢ yᵢ ∈ V⁺ ∀ε}` (dual). Both are solved
//! and required to agree.

use crate::error::{check_dim, Error, Result};
use crate::gpt::{sign_vectors, Gpt, NormTag, MAX_SIGN_DIMENSION};
use crate::linalg::{dot, norm_2};
use crate::lp::{lp_minimize, LpOutcome, LpProblem, Relation, SolveOptions};
use crate::sampling;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Largest `g` for the `2^g` sign enumeration of the injective norm.
pub const MAX_INJECTIVE_G: usize = 24;

/// Allowed gap between the primal and dual ρ-norm programs.
pub const RHO_DUALITY_GAP: f64 = 1e-7;

/// Tolerance of the closed-form region tests.
pub const REGION_TOL: f64 = 1e-12;

/// `z = Σᵢ eᵢ ⊗ zᵢ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorElement {
    /// The blocks `zᵢ`.
    pub blocks: Vec<Vec<f64>>,
}

impl TensorElement {
    /// Wraps nonempty blocks of equal length.
    pub fn new(blocks: Vec<Vec<f64>>) -> Self {
        TensorElement { blocks }
    }

    /// Number of blocks `g`.
    pub fn g(&self) -> usize {
        self.blocks.len()
    }

    fn check(&self, dim: usize) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::InvalidArgument("tensor needs at least one block".into()));
        }
        for b in &self.blocks {
            check_dim(dim, b.len())?;
        }
        Ok(())
    }

    fn dim(&self) -> usize {
        self.blocks.first().map_or(0, Vec::len)
    }
}

/// The norm on the second factor `X`.
#[derive(Clone, Copy, Debug)]
pub enum XNorm<'a> {
    /// `ℓ₁`, `ℓ₂` or `ℓ∞` on `R^n`.
    Tag(NormTag),
    /// The base norm of a model on `V`.
    Base(&'a Gpt),
    /// The order-unit norm of a model on `A`.
    OrderUnit(&'a Gpt),
}

/// Unit ball of a polytope norm, as a symmetric point list.
enum BallRep {
    /// `‖a‖ = min{Σ cᵥ : a = Σ cᵥ v, c >= 0}`.
    Vertices(Vec<Vec<f64>>),
    /// `‖a‖ = max_h h·a`.
    Support(Vec<Vec<f64>>),
}

impl XNorm<'_> {
    /// Evaluates `‖x‖_X`.
    pub fn eval(&self, x: &[f64], opts: &SolveOptions) -> Result<f64> {
        match self {
            XNorm::Tag(t) => Ok(t.eval(x)),
            XNorm::Base(g) => g.base_norm(x, opts),
            XNorm::OrderUnit(g) => g.order_unit_norm(x, opts),
        }
    }

    fn ball(&self, dim: usize) -> Option<BallRep> {
        match self {
            XNorm::Tag(NormTag::L1) => NormTag::L1.ball_vertices(dim).map(BallRep::Vertices),
            XNorm::Tag(NormTag::Linf) => NormTag::L1.ball_vertices(dim).map(BallRep::Support),
            XNorm::Tag(NormTag::L2) => None,
            XNorm::Base(g) => {
                let cone = g.cone().ok()?;
                let mut v = Vec::new();
                for x in cone.generators() {
                    let u = dot(g.unit(), x);
                    v.push(x.iter().map(|c| c / u).collect());
                    v.push(x.iter().map(|c| -c / u).collect());
                }
                Some(BallRep::Vertices(v))
            }
            XNorm::OrderUnit(g) => {
                let cone = g.cone().ok()?;
                let mut v = Vec::new();
                for x in cone.generators() {
                    let u = dot(g.unit(), x);
                    v.push(x.iter().map(|c| c / u).collect());
                    v.push(x.iter().map(|c| -c / u).collect());
                }
                Some(BallRep::Support(v))
            }
        }
    }
}

/// A norm value that may only be an upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormValue {
    /// The computed value.
    pub value: f64,
    /// False when `value` is only an upper bound.
    pub exact: bool,
}

/// `‖z‖_{ℓ₁^g ⊗_ε X} = max_ε ‖Σ εᵢ zᵢ‖_X` (`g <= 24`).
pub fn injective_norm_l1(z: &TensorElement, x: XNorm<'_>, opts: &SolveOptions) -> Result<f64> {
    let g = z.g();
    if g > MAX_INJECTIVE_G {
        return Err(Error::LimitExceeded { what: "injective-norm sign enumeration g", value: g, limit: MAX_INJECTIVE_G });
    }
    z.check(z.dim())?;
    let d = z.dim();
    let mut best: f64 = 0.0;
    // ε and −ε give the same norm: fix ε₁ = +1
    for t in 0..1usize << (g - 1) {
        let mut v = z.blocks[0].clone();
        for i in 1..g {
            let s = if (t >> (i - 1)) & 1 == 0 { 1.0 } else { -1.0 };
            for c in 0..d {
                v[c] += s * z.blocks[i][c];
            }
        }
        best = best.max(x.eval(&v, opts)?);
    }
    Ok(best)
}

/// `‖z‖_{ℓ₁^g ⊗_π X} = Σ ‖zᵢ‖_X`.
pub fn projective_norm_l1(z: &TensorElement, x: XNorm<'_>, opts: &SolveOptions) -> Result<f64> {
    z.check(z.dim())?;
    z.blocks.iter().map(|b| x.eval(b, opts)).sum()
}

/// `‖z‖_{ℓ∞^g ⊗_ε X} = maxᵢ ‖zᵢ‖_X`.
pub fn injective_norm_linf(z: &TensorElement, x: XNorm<'_>, opts: &SolveOptions) -> Result<f64> {
    z.check(z.dim())?;
    z.blocks.iter().try_fold(0.0_f64, |m, b| Ok(m.max(x.eval(b, opts)?)))
}

/// `‖z‖_{ℓ∞^g ⊗_π X}`. Polytope norms: LP over `ε ⊗ v` with sign vectors `ε`
/// and extreme points `v` (exact). Euclidean `X`: closed form for `g <= 2`
/// (`½(‖z₁+z₂‖ + ‖z₁−z₂‖)`), otherwise the same LP over a fixed inscribed
/// polytope, which is an upper bound.
pub fn projective_norm_linf(z: &TensorElement, x: XNorm<'_>, opts: &SolveOptions) -> Result<NormValue> {
    let d = z.dim();
    z.check(d)?;
    let g = z.g();
    if g == 1 {
        return Ok(NormValue { value: x.eval(&z.blocks[0], opts)?, exact: true });
    }
    if g > MAX_SIGN_DIMENSION {
        return Err(Error::LimitExceeded { what: "projective-norm sign enumeration g", value: g, limit: MAX_SIGN_DIMENSION });
    }
    let ball = x.ball(d);
    if ball.is_none() && g == 2 {
        let plus: Vec<f64> = z.blocks[0].iter().zip(&z.blocks[1]).map(|(a, b)| a + b).collect();
        let minus: Vec<f64> = z.blocks[0].iter().zip(&z.blocks[1]).map(|(a, b)| a - b).collect();
        return Ok(NormValue { value: 0.5 * (x.eval(&plus, opts)? + x.eval(&minus, opts)?), exact: true });
    }
    let (ball, exact) = match ball {
        Some(b) => (b, true),
        None => (BallRep::Vertices(inscribed_sphere_points(d)), false),
    };
    let signs: Vec<Vec<f64>> = sign_vectors(g).into_iter().filter(|e| e[0] > 0.0).collect();
    let mut p = LpProblem::new();
    let mut eq_rows: Vec<Vec<Vec<(usize, f64)>>> = vec![vec![Vec::new(); d]; g];
    let mut obj = Vec::new();
    match &ball {
        BallRep::Vertices(verts) => {
            for e in &signs {
                for v in verts {
                    let c = p.add_var(false);
                    obj.push((c, 1.0));
                    for (i, &ei) in e.iter().enumerate() {
                        for (k, &vk) in v.iter().enumerate() {
                            if vk != 0.0 {
                                eq_rows[i][k].push((c, ei * vk));
                            }
                        }
                    }
                }
            }
        }
        BallRep::Support(hs) => {
            for e in &signs {
                let a = p.add_vars(d, true);
                let t = p.add_var(false);
                obj.push((t, 1.0));
                for h in hs {
                    let mut row: Vec<(usize, f64)> =
                        h.iter().enumerate().filter(|(_, &v)| v != 0.0).map(|(k, &v)| (a + k, v)).collect();
                    row.push((t, -1.0));
                    p.add_row(row, Relation::Le, 0.0);
                }
                for (i, &ei) in e.iter().enumerate() {
                    for k in 0..d {
                        eq_rows[i][k].push((a + k, ei));
                    }
                }
            }
        }
    }
    for (i, rows) in eq_rows.into_iter().enumerate() {
        for (k, row) in rows.into_iter().enumerate() {
            p.add_row(row, Relation::Eq, z.blocks[i][k]);
        }
    }
    p.set_objective(obj);
    match lp_minimize(&p, opts)? {
        LpOutcome::Optimal { value, .. } => Ok(NormValue { value, exact }),
        other => Err(Error::NumericalFailure(format!("projective-norm LP did not reach an optimum: {other:?}"))),
    }
}

/// Deterministic points on the unit sphere of `R^d` (axes, diagonals of
/// coordinate planes, and seeded random directions), closed under negation.
fn inscribed_sphere_points(d: usize) -> Vec<Vec<f64>> {
    let mut pts = Vec::new();
    for i in 0..d {
        let mut e = vec![0.0; d];
        e[i] = 1.0;
        pts.push(e);
        for j in i + 1..d {
            for s in [1.0, -1.0] {
                let mut e = vec![0.0; d];
                e[i] = std::f64::consts::FRAC_1_SQRT_2;
                e[j] = s * std::f64::consts::FRAC_1_SQRT_2;
                pts.push(e);
            }
        }
    }
    let mut rng = sampling::rng(0x5eed_0b11);
    for _ in 0..32 * d {
        pts.push(sampling::random_direction(&mut rng, d));
    }
    let neg: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|x| -x).collect()).collect();
    pts.extend(neg);
    pts
}

/// Solution of both ρ-norm programs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RhoSolution {
    /// Common value (the primal optimum).
    pub value: f64,
    /// Primal optimum `λ`.
    pub primal: f64,
    /// Dual optimum `Σ pᵢ(yᵢ)`.
    pub dual: f64,
    /// Dual optimiser `y₀`.
    pub y0: Vec<f64>,
    /// Dual optimiser `yᵢ`.
    pub y: Vec<Vec<f64>>,
    /// Primal optimiser `h_ε`, in [`sign_vectors`] order.
    pub h: Vec<Vec<f64>>,
}

/// `‖φ̄‖_ρ` for blocks `pᵢ ∈ A` (polyhedral models). Errors with a
/// numerical failure if the two programs disagree by more than `1e-7`.
pub fn rho_norm(gpt: &Gpt, phi_bar: &TensorElement, opts: &SolveOptions) -> Result<f64> {
    Ok(rho_norm_detailed(gpt, phi_bar, opts)?.value)
}

/// [`rho_norm`] with both optimisers.
pub fn rho_norm_detailed(gpt: &Gpt, phi_bar: &TensorElement, opts: &SolveOptions) -> Result<RhoSolution> {
    let (primal, h) = rho_primal(gpt, phi_bar, opts)?;
    let (dual, y0, y) = rho_dual(gpt, phi_bar, opts)?;
    if (primal - dual).abs() > RHO_DUALITY_GAP * (1.0 + primal.abs()) {
        return Err(Error::NumericalFailure(format!("rho-norm programs disagree: primal {primal}, dual {dual}")));
    }
    Ok(RhoSolution { value: primal, primal, dual, y0, y, h })
}

/// The primal ρ-norm program; returns the value and the `h_ε`.
pub fn rho_primal(gpt: &Gpt, phi_bar: &TensorElement, opts: &SolveOptions) -> Result<(f64, Vec<Vec<f64>>)> {
    let gens = gpt.effect_cone_generators()?;
    let m = gpt.dim();
    phi_bar.check(m)?;
    let g = phi_bar.g();
    if g > MAX_SIGN_DIMENSION {
        return Err(Error::LimitExceeded { what: "rho-norm sign enumeration g", value: g, limit: MAX_SIGN_DIMENSION });
    }
    let signs = sign_vectors(g);
    let r = gens.len();
    let mut p = LpProblem::new();
    let lambda = p.add_var(false);
    let mu = p.add_vars(signs.len() * r, false);
    for c in 0..m {
        let mut row = vec![(lambda, -gpt.unit()[c])];
        for s in 0..signs.len() {
            for (q, a) in gens.iter().enumerate() {
                if a[c] != 0.0 {
                    row.push((mu + s * r + q, a[c]));
                }
            }
        }
        p.add_row(row, Relation::Eq, 0.0);
    }
    for i in 0..g {
        for c in 0..m {
            let mut row = Vec::new();
            for (s, e) in signs.iter().enumerate() {
                for (q, a) in gens.iter().enumerate() {
                    if a[c] != 0.0 {
                        row.push((mu + s * r + q, e[i] * a[c]));
                    }
                }
            }
            p.add_row(row, Relation::Eq, phi_bar.blocks[i][c]);
        }
    }
    p.set_objective(vec![(lambda, 1.0)]);
    match lp_minimize(&p, opts)? {
        LpOutcome::Optimal { x, value } => {
            let h = (0..signs.len())
                .map(|s| {
                    let mut v = vec![0.0; m];
                    for (q, a) in gens.iter().enumerate() {
                        let l = x[mu + s * r + q];
                        for (vc, ac) in v.iter_mut().zip(a) {
                            *vc += l * ac;
                        }
                    }
                    v
                })
                .collect();
            Ok((value, h))
        }
        other => Err(Error::NumericalFailure(format!("primal rho-norm program did not reach an optimum: {other:?}"))),
    }
}

/// The dual ρ-norm program; returns the value and `(y₀, yᵢ)`.
pub fn rho_dual(gpt: &Gpt, phi_bar: &TensorElement, opts: &SolveOptions) -> Result<(f64, Vec<f64>, Vec<Vec<f64>>)> {
    let facets = gpt.effect_cone_generators()?;
    let m = gpt.dim();
    phi_bar.check(m)?;
    let g = phi_bar.g();
    if g > MAX_SIGN_DIMENSION {
        return Err(Error::LimitExceeded { what: "rho-norm sign enumeration g", value: g, limit: MAX_SIGN_DIMENSION });
    }
    let mut p = LpProblem::new();
    let y0 = p.add_vars(m, true);
    let ys = p.add_vars(g * m, true);
    p.add_row(gpt.unit().iter().enumerate().filter(|(_, &u)| u != 0.0).map(|(c, &u)| (y0 + c, u)).collect(), Relation::Le, 1.0);
    for e in sign_vectors(g) {
        for a in facets {
            let mut row = Vec::new();
            for (c, &ac) in a.iter().enumerate() {
                if ac == 0.0 {
                    continue;
                }
                row.push((y0 + c, ac));
                for (i, &ei) in e.iter().enumerate() {
                    row.push((ys + i * m + c, ei * ac));
                }
            }
            p.add_row(row, Relation::Ge, 0.0);
        }
    }
    let mut obj = Vec::new();
    for (i, b) in phi_bar.blocks.iter().enumerate() {
        for (c, &v) in b.iter().enumerate() {
            if v != 0.0 {
                obj.push((ys + i * m + c, -v));
            }
        }
    }
    p.set_objective(obj);
    match lp_minimize(&p, opts)? {
        LpOutcome::Optimal { x, value } => {
            let y = (0..g).map(|i| x[ys + i * m..ys + (i + 1) * m].to_vec()).collect();
            Ok((-value, x[y0..y0 + m].to_vec(), y))
        }
        other => Err(Error::NumericalFailure(format!("dual rho-norm program did not reach an optimum: {other:?}"))),
    }
}

/// `s ∈ Γ(g; ℓ∞ⁿ)`: the sum of the `min(g, n)` largest entries is at most 1.
pub fn region_hypercube(g: usize, n: usize, s: &[f64]) -> Result<bool> {
    check_dim(g, s.len())?;
    let mut v = s.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    Ok(v.iter().take(g.min(n)).sum::<f64>() <= 1.0 + REGION_TOL)
}

/// Membership in the quarter circle `QC_g = {Σ sᵢ² <= 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallRegion {
    /// `Σ sᵢ² <= 1`.
    pub member: bool,
    /// `QC_g` equals `Γ(g; ℓ₂ⁿ)` for `g <= n`; otherwise it is only an inner
    /// bound and a negative answer is inconclusive.
    pub exact: bool,
}

/// `s ∈ QC_g`, flagged exact when `g <= n`.
pub fn region_ball(g: usize, n: usize, s: &[f64]) -> Result<BallRegion> {
    check_dim(g, s.len())?;
    let sq: f64 = s.iter().map(|x| x * x).sum();
    Ok(BallRegion { member: sq <= 1.0 + REGION_TOL, exact: g <= n })
}

/// `f(g) = (⌊g/2⌋+1)·C(g, ⌊g/2⌋+1) / (g·2^{g−1})`, the compatibility degree
/// of `g` dichotomic measurements on the cross-polytope for `n >= 2^{g−1}`
/// and a lower bound for every `n`.
pub fn gamma_crosspolytope(g: usize) -> f64 {
    if g <= 1 {
        return 1.0;
    }
    let m = g / 2 + 1;
    if g <= 60 {
        let mut c: u128 = 1;
        for i in 0..m {
            c = c * (g - i) as u128 / (i + 1) as u128;
        }
        let num = m as u128 * c;
        let den = g as u128 * (1u128 << (g - 1));
        // reduce before converting so small cases are exact
        let gcd = gcd(num, den);
        (num / gcd) as f64 / (den / gcd) as f64
    } else {
        let ln = (m as f64).ln() + statrs::function::factorial::ln_binomial(g as u64, m as u64)
            - (g as f64).ln()
            - (g - 1) as f64 * std::f64::consts::LN_2;
        ln.exp()
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `π₁(ℓ∞ⁿ) = n`.
pub fn one_summing_linf(n: usize) -> f64 {
    n as f64
}

/// `π₁(ℓ₁ⁿ) = 1/f(n)`.
pub fn one_summing_l1(n: usize) -> f64 {
    1.0 / gamma_crosspolytope(n)
}

/// `π₁(ℓ₂ⁿ) = √π Γ((n+1)/2) / Γ(n/2)`.
pub fn one_summing_l2(n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if n <= 10_000 {
        // P(1) = 1, P(2) = π/2, P(n+2) = P(n)(n+1)/n
        let mut p = if n % 2 == 1 { 1.0 } else { std::f64::consts::FRAC_PI_2 };
        let mut k = if n % 2 == 1 { 1 } else { 2 };
        while k < n {
            p *= (k + 1) as f64 / k as f64;
            k += 2;
        }
        p
    } else {
        use statrs::function::gamma::ln_gamma;
        (0.5 * std::f64::consts::PI.ln() + ln_gamma((n as f64 + 1.0) / 2.0) - ln_gamma(n as f64 / 2.0)).exp()
    }
}

/// `h(n) = Γ(n/2) / (√π Γ((n+1)/2)) = 1/π₁(ℓ₂ⁿ)`.
pub fn h_function(n: usize) -> f64 {
    1.0 / one_summing_l2(n)
}

/// Multiplier in the bound `π₁(S₁,sa^d) <= c·d`.
pub const S1_CONSTANT: f64 = 7.79;

/// The 1-summing constant (or bound) for a space tag: `l1`, `l2`, `linf`
/// (also `l∞`), or `S1_selfadjoint_bound`.
pub fn one_summing(tag: &str, n: usize) -> Result<f64> {
    match tag {
        "l1" => Ok(one_summing_l1(n)),
        "l2" => Ok(one_summing_l2(n)),
        "linf" | "l∞" => Ok(one_summing_linf(n)),
        "S1_selfadjoint_bound" => Ok(S1_CONSTANT * n as f64),
        other => Err(Error::UnknownTag(other.to_string())),
    }
}

/// Interval for `ρ(ℓ₁^g, X) = max_z ‖z‖_π / ‖z‖_ε`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RatioInterval {
    /// Best ratio found.
    pub lower: f64,
    /// `min(g, n)`.
    pub upper: f64,
    /// Blocks of the best tensor found.
    pub best: Vec<Vec<f64>>,
    /// Ratio evaluations spent.
    pub evaluations: usize,
}

fn ratio(z: &[Vec<f64>], norm: NormTag) -> f64 {
    let te = TensorElement::new(z.to_vec());
    let opts = SolveOptions::default();
    let pi = projective_norm_l1(&te, XNorm::Tag(norm), &opts).unwrap_or(0.0);
    let eps = injective_norm_l1(&te, XNorm::Tag(norm), &opts).unwrap_or(0.0);
    if eps > 0.0 {
        pi / eps
    } else {
        0.0
    }
}

/// Estimates `ρ(ℓ₁^g, X)` for `X = (Rⁿ, norm)`: the lower end is the best
/// ratio among structured candidates (the diagonal tensor and, for `ℓ₁`, the
/// sign-matrix tensor) and seeded random tuples of extreme points improved by
/// coordinate search; the upper end is `min(g, n)`.
pub fn rho_ratio_estimate(norm: NormTag, n: usize, g: usize, budget: usize, seed: u64) -> Result<RatioInterval> {
    if g == 0 || n == 0 {
        return Err(Error::InvalidArgument("g and n must be positive".into()));
    }
    if g > MAX_INJECTIVE_G {
        return Err(Error::LimitExceeded { what: "ratio search g", value: g, limit: MAX_INJECTIVE_G });
    }
    let mut evals = 0;
    let mut best_val = 0.0;
    let mut best = Vec::new();
    let mut consider = |z: Vec<Vec<f64>>, evals: &mut usize| {
        *evals += 1;
        let r = ratio(&z, norm);
        if r > best_val {
            best_val = r;
            best = z;
        }
    };
    // diagonal: zᵢ = eᵢ for i < min(g, n)
    let diag: Vec<Vec<f64>> = (0..g)
        .map(|i| {
            let mut e = vec![0.0; n];
            if i < n {
                e[i] = 1.0;
            }
            e
        })
        .collect();
    consider(diag, &mut evals);
    if norm == NormTag::L1 && (2..=20).contains(&g) {
        // z_{i,ε} = εᵢ over sign vectors with ε₁ = +1, truncated to n columns
        let signs: Vec<Vec<f64>> = sign_vectors(g).into_iter().filter(|e| e[0] > 0.0).take(n).collect();
        let z: Vec<Vec<f64>> = (0..g)
            .map(|i| {
                let mut row: Vec<f64> = signs.iter().map(|e| e[i]).collect();
                row.resize(n, 0.0);
                row
            })
            .collect();
        consider(z, &mut evals);
    }
    let mut rng = sampling::rng(seed);
    let pool: Vec<Vec<f64>> = match norm.ball_vertices(n) {
        Some(v) if v.len() <= 4096 => v,
        _ => (0..64 * n).map(|_| sampling::random_direction(&mut rng, n)).collect(),
    };
    while evals < budget {
        let mut z: Vec<Vec<f64>> = (0..g).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
        let mut cur = ratio(&z, norm);
        evals += 1;
        // coordinate search over the pool
        let mut improved = true;
        while improved && evals < budget {
            improved = false;
            for i in 0..g {
                for cand in pool.iter().take(64) {
                    if evals >= budget {
                        break;
                    }
                    let old = std::mem::replace(&mut z[i], cand.clone());
                    let r = ratio(&z, norm);
                    evals += 1;
                    if r > cur + 1e-12 {
                        cur = r;
                        improved = true;
                    } else {
                        z[i] = old;
                    }
                }
            }
        }
        consider(z, &mut evals);
    }
    Ok(RatioInterval { lower: best_val, upper: g.min(n) as f64, best, evaluations: evals })
}

/// Largest `t` with `t·z` a Euclidean-ball point of norm at most one; used
/// by tests of the ball region.
pub fn l2_norm(z: &[f64]) -> f64 {
    norm_2(z)
}
