//! GPT triples `(V, V⁺, 1)`: standard models, base and order-unit norms,
//! effects and measurements.
//!
//! Coordinates: for the centrally symmetric models (hypercube, cross-polytope,
//! ball) a vector is `x = (x₀, x̄)` and the order unit is `1 = (1, 0, …, 0)`,
//! so `x ∈ V⁺ ⟺ ‖x̄‖_V̄ ≤ x₀`. For the classical model `CM_d` the cone is the
//! orthant and the unit is `(1, …, 1)`. Effects are covectors in the dual
//! basis of the same coordinates.

use crate::cones::{PolyCone, PolyConeJson};
use crate::error::{check_dim, Error, Result};
use crate::json;
use crate::linalg::{dot, norm_1, norm_2, norm_inf};
use crate::lp::{lp_minimize, LpOutcome, LpProblem, Relation, SolveOptions};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest `n` for which the `2ⁿ` sign-vector rays/facets of the hypercube
/// and cross-polytope cones are materialised.
pub const MAX_SIGN_DIMENSION: usize = 16;

/// Norm of the base space `V̄` of a centrally symmetric model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormTag {
    /// `ℓ₁ⁿ`
    #[serde(rename = "l1")]
    L1,
    /// `ℓ₂ⁿ`
    #[serde(rename = "l2")]
    L2,
    /// `ℓ∞ⁿ`
    #[serde(rename = "linf")]
    Linf,
}

impl NormTag {
    /// Evaluates the norm.
    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            NormTag::L1 => norm_1(x),
            NormTag::L2 => norm_2(x),
            NormTag::Linf => norm_inf(x),
        }
    }

    /// The dual norm.
    pub fn dual(self) -> NormTag {
        match self {
            NormTag::L1 => NormTag::Linf,
            NormTag::L2 => NormTag::L2,
            NormTag::Linf => NormTag::L1,
        }
    }

    /// Vertices of the unit ball in `R^n` (`None` for `ℓ₂`).
    pub fn ball_vertices(self, n: usize) -> Option<Vec<Vec<f64>>> {
        match self {
            NormTag::L1 => Some(
                (0..n)
                    .flat_map(|i| {
                        [1.0, -1.0].map(|s| {
                            let mut e = vec![0.0; n];
                            e[i] = s;
                            e
                        })
                    })
                    .collect(),
            ),
            NormTag::Linf => Some(sign_vectors(n)),
            NormTag::L2 => None,
        }
    }
}

impl fmt::Display for NormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormTag::L1 => "l1",
            NormTag::L2 => "l2",
            NormTag::Linf => "linf",
        })
    }
}

/// All `2ⁿ` sign vectors, first coordinate slowest, `+1` before `-1`.
pub fn sign_vectors(n: usize) -> Vec<Vec<f64>> {
    (0..1usize << n)
        .map(|t| (0..n).map(|i| if (t >> (n - 1 - i)) & 1 == 0 { 1.0 } else { -1.0 }).collect())
        .collect()
}

/// Which constructor produced a model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// `CM_d`: the probability simplex.
    Classical,
    /// `HC_n`: the hypercube (unit ball of `ℓ∞ⁿ`).
    Hypercube,
    /// The cross-polytope (unit ball of `ℓ₁ⁿ`).
    Crosspolytope,
    /// The Euclidean ball (unit ball of `ℓ₂ⁿ`); non-polyhedral.
    Ball,
    /// A user-supplied polyhedral cone and order unit.
    Custom,
}

/// A GPT `(V, V⁺, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gpt {
    kind: ModelKind,
    n: usize,
    dim: usize,
    cone: Option<PolyCone>,
    unit: Vec<f64>,
    cs_norm: Option<NormTag>,
}

/// On-disk model description.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelJson {
    /// Model family.
    pub model: ModelKind,
    /// Size parameter (`d` for classical, `n` otherwise; optional for custom).
    #[serde(default)]
    pub n: Option<usize>,
    /// Cone, for custom models.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone: Option<PolyConeJson>,
    /// Order unit, for custom models (defaults to the sum of the cone's inequalities).
    #[serde(default, serialize_with = "json::ser_opt_vec", skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<f64>>,
}

impl Gpt {
    /// `CM_d = (R^d, R^d_+, 1_d)`.
    pub fn make_classical(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("classical model needs d >= 1".into()));
        }
        Ok(Gpt {
            kind: ModelKind::Classical,
            n: d,
            dim: d,
            cone: Some(PolyCone::nonneg_orthant(d)?),
            unit: vec![1.0; d],
            cs_norm: None,
        })
    }

    /// `HC_n`: cone `x₀ >= max|xᵢ|` with `2ⁿ` rays `(1, ±1, …, ±1)` and `2n`
    /// facets `(1, ±eᵢ)`.
    pub fn make_hypercube(n: usize) -> Result<Self> {
        check_sign_dimension(n)?;
        let gens = sign_vectors(n).into_iter().map(|e| lift(1.0, &e)).collect();
        let facets = signed_units(n).into_iter().map(|e| lift(1.0, &e)).collect();
        Ok(Self::cs(ModelKind::Hypercube, n, Some(PolyCone::trusted(n + 1, gens, Some(facets))), NormTag::Linf))
    }

    /// The cross-polytope model: cone `x₀ >= ‖x̄‖₁` with `2n` rays
    /// `(1, ±eᵢ)` and `2ⁿ` facets `(1, ±1, …, ±1)`.
    pub fn make_crosspolytope(n: usize) -> Result<Self> {
        check_sign_dimension(n)?;
        let gens = signed_units(n).into_iter().map(|e| lift(1.0, &e)).collect();
        let facets = sign_vectors(n).into_iter().map(|e| lift(1.0, &e)).collect();
        Ok(Self::cs(ModelKind::Crosspolytope, n, Some(PolyCone::trusted(n + 1, gens, Some(facets))), NormTag::L1))
    }

    /// The Euclidean-ball model (`n = 3` is the qubit Bloch ball). It carries
    /// no polyhedral cone; LP-based operations reject it.
    pub fn make_ball(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("ball model needs n >= 1".into()));
        }
        Ok(Self::cs(ModelKind::Ball, n, None, NormTag::L2))
    }

    /// A custom polyhedral model. The cone must carry its inequality
    /// description (the effect cone is generated by it) and `unit` must be
    /// strictly positive on every generator.
    pub fn make_custom(cone: PolyCone, unit: Vec<f64>) -> Result<Self> {
        check_dim(cone.dim(), unit.len())?;
        cone.require_facets("a custom model")?;
        for (r, g) in cone.generators().iter().enumerate() {
            if dot(&unit, g) <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "order unit is not strictly positive on generator {r}"
                )));
            }
        }
        Ok(Gpt { kind: ModelKind::Custom, n: cone.dim(), dim: cone.dim(), cone: Some(cone), unit, cs_norm: None })
    }

    fn cs(kind: ModelKind, n: usize, cone: Option<PolyCone>, norm: NormTag) -> Self {
        let mut unit = vec![0.0; n + 1];
        unit[0] = 1.0;
        Gpt { kind, n, dim: n + 1, cone, unit, cs_norm: Some(norm) }
    }

    /// Builds a model from its JSON description.
    pub fn from_json(j: ModelJson, tol: f64) -> Result<Self> {
        let need_n = || j.n.ok_or_else(|| Error::InvalidArgument("model needs field `n`".into()));
        match j.model {
            ModelKind::Classical => Self::make_classical(need_n()?),
            ModelKind::Hypercube => Self::make_hypercube(need_n()?),
            ModelKind::Crosspolytope => Self::make_crosspolytope(need_n()?),
            ModelKind::Ball => Self::make_ball(need_n()?),
            ModelKind::Custom => {
                let cj = j.cone.ok_or_else(|| Error::InvalidArgument("custom model needs field `cone`".into()))?;
                let cone = PolyCone::from_json(cj, tol)?;
                let unit = match j.unit {
                    Some(u) => u,
                    None => {
                        let fs = cone.require_facets("a custom model")?;
                        (0..cone.dim()).map(|i| fs.iter().map(|h| h[i]).sum()).collect()
                    }
                };
                Self::make_custom(cone, unit)
            }
        }
    }

    /// JSON description of this model.
    pub fn to_json(&self) -> ModelJson {
        match self.kind {
            ModelKind::Custom => ModelJson {
                model: ModelKind::Custom,
                n: None,
                cone: self.cone.as_ref().map(|c| c.to_json()),
                unit: Some(self.unit.clone()),
            },
            k => ModelJson { model: k, n: Some(self.n), cone: None, unit: None },
        }
    }

    /// Short human-readable name, e.g. `hypercube(n=2)`.
    pub fn name(&self) -> String {
        match self.kind {
            ModelKind::Classical => format!("classical(d={})", self.n),
            ModelKind::Hypercube => format!("hypercube(n={})", self.n),
            ModelKind::Crosspolytope => format!("crosspolytope(n={})", self.n),
            ModelKind::Ball => format!("ball(n={})", self.n),
            ModelKind::Custom => format!("custom(dim={})", self.dim),
        }
    }

    /// Model family.
    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    /// Size parameter passed to the constructor.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `dim V`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The order unit `1 ∈ A`.
    pub fn unit(&self) -> &[f64] {
        &self.unit
    }

    /// Norm tag of `V̄` for centrally symmetric models.
    pub fn cs_norm(&self) -> Option<NormTag> {
        self.cs_norm
    }

    /// Whether the state cone is polyhedral.
    pub fn is_polyhedral(&self) -> bool {
        self.cone.is_some()
    }

    /// The state cone, or a non-polyhedral error.
    pub fn cone(&self) -> Result<&PolyCone> {
        self.cone.as_ref().ok_or_else(|| Error::NonPolyhedral(self.name()))
    }

    /// Generators of the effect cone `A⁺ = (V⁺)*`, i.e. the inequalities of `V⁺`.
    pub fn effect_cone_generators(&self) -> Result<&[Vec<f64>]> {
        self.cone()?.require_facets("the effect cone")
    }

    /// `x ∈ V⁺` up to `tol`.
    pub fn state_cone_member(&self, x: &[f64], tol: f64) -> Result<bool> {
        check_dim(self.dim, x.len())?;
        match (&self.cone, self.cs_norm) {
            (Some(c), _) => c.member(x, tol),
            (None, Some(norm)) => Ok(norm.eval(&x[1..]) <= x[0] + tol * (1.0 + x[0].abs())),
            (None, None) => unreachable!("every model has a cone or a norm"),
        }
    }

    /// `a ∈ A⁺` up to `tol`.
    pub fn effect_cone_member(&self, a: &[f64], tol: f64) -> Result<bool> {
        check_dim(self.dim, a.len())?;
        match (&self.cone, self.cs_norm) {
            (Some(c), _) => {
                let scale = 1.0 + norm_inf(a);
                Ok(c.generators().iter().all(|g| dot(a, g) >= -tol * scale))
            }
            (None, Some(norm)) => Ok(norm.dual().eval(&a[1..]) <= a[0] + tol * (1.0 + a[0].abs())),
            (None, None) => unreachable!("every model has a cone or a norm"),
        }
    }

    /// Base norm `inf{1(y) + 1(z) : x = y − z, y, z ∈ V⁺}`; closed form
    /// `max(|x₀|, ‖x̄‖_V̄)` for centrally symmetric models, LP otherwise.
    pub fn base_norm(&self, x: &[f64], opts: &SolveOptions) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        match self.cs_norm {
            Some(norm) => Ok(x[0].abs().max(norm.eval(&x[1..]))),
            None => self.base_norm_lp(x, opts),
        }
    }

    /// Base norm by LP over the generators (polyhedral models only).
    pub fn base_norm_lp(&self, x: &[f64], opts: &SolveOptions) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        let cone = self.cone()?;
        let gens = cone.generators();
        let mut p = LpProblem::new();
        let y0 = p.add_vars(gens.len(), false);
        let z0 = p.add_vars(gens.len(), false);
        for i in 0..self.dim {
            let mut row = Vec::new();
            for (r, g) in gens.iter().enumerate() {
                if g[i] != 0.0 {
                    row.push((y0 + r, g[i]));
                    row.push((z0 + r, -g[i]));
                }
            }
            p.add_row(row, Relation::Eq, x[i]);
        }
        let mut obj = Vec::new();
        for (r, g) in gens.iter().enumerate() {
            let u = dot(&self.unit, g);
            obj.push((y0 + r, u));
            obj.push((z0 + r, u));
        }
        p.set_objective(obj);
        optimum(&p, opts, "base norm")
    }

    /// Base norm as the dual program `sup{α(x) : ‖α‖_A <= 1}` (polyhedral only).
    pub fn base_norm_dual_lp(&self, x: &[f64], opts: &SolveOptions) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        let cone = self.cone()?;
        let mut p = LpProblem::new();
        let a0 = p.add_vars(self.dim, true);
        for g in cone.generators() {
            let row: Vec<(usize, f64)> = g.iter().enumerate().map(|(i, &v)| (a0 + i, v)).collect();
            let u = dot(&self.unit, g);
            p.add_row(row.clone(), Relation::Le, u);
            p.add_row(row, Relation::Ge, -u);
        }
        p.set_objective(x.iter().enumerate().map(|(i, &v)| (a0 + i, -v)).collect());
        Ok(-optimum(&p, opts, "dual base norm")?)
    }

    /// Order-unit norm `inf{t : −t·1 <= a <= t·1}`; closed form
    /// `|a₀| + ‖ā‖_Ā` for centrally symmetric models, LP otherwise.
    pub fn order_unit_norm(&self, a: &[f64], opts: &SolveOptions) -> Result<f64> {
        check_dim(self.dim, a.len())?;
        match self.cs_norm {
            Some(norm) => Ok(a[0].abs() + norm.dual().eval(&a[1..])),
            None => self.order_unit_norm_lp(a, opts),
        }
    }

    /// Order-unit norm by LP (polyhedral models only).
    pub fn order_unit_norm_lp(&self, a: &[f64], opts: &SolveOptions) -> Result<f64> {
        check_dim(self.dim, a.len())?;
        let cone = self.cone()?;
        let mut p = LpProblem::new();
        let t = p.add_var(false);
        for g in cone.generators() {
            let u = dot(&self.unit, g);
            let ag = dot(a, g);
            p.add_row(vec![(t, u)], Relation::Ge, ag);
            p.add_row(vec![(t, u)], Relation::Ge, -ag);
        }
        p.set_objective(vec![(t, 1.0)]);
        optimum(&p, opts, "order-unit norm")
    }

    /// `f ∈ A⁺` and `1 − f ∈ A⁺`.
    pub fn validate_effect(&self, f: &[f64], tol: f64) -> bool {
        if f.len() != self.dim {
            return false;
        }
        let comp: Vec<f64> = self.unit.iter().zip(f).map(|(u, x)| u - x).collect();
        self.effect_cone_member(f, tol).unwrap_or(false) && self.effect_cone_member(&comp, tol).unwrap_or(false)
    }

    /// Every effect lies in `A⁺` and the effects sum to the unit — within
    /// `opts.tol` in float mode, exactly in rational mode.
    pub fn validate_measurement(&self, m: &Measurement, opts: &SolveOptions) -> bool {
        if m.effects.iter().any(|f| f.len() != self.dim) {
            return false;
        }
        let tol = if opts.exact { 0.0 } else { opts.tol };
        if !m.effects.iter().all(|f| self.effect_cone_member(f, tol).unwrap_or(false)) {
            return false;
        }
        if opts.exact {
            (0..self.dim).all(|i| {
                let s = m.effects.iter().fold(BigRational::zero(), |acc, f| {
                    acc + BigRational::from_float(f[i]).expect("finite effect entry")
                });
                s == BigRational::from_float(self.unit[i]).expect("finite unit entry")
            })
        } else {
            let sum = m.sum();
            sum.iter().zip(&self.unit).all(|(s, u)| (s - u).abs() <= opts.tol)
        }
    }

    /// Validates every measurement of a family.
    pub fn validate_family(&self, fam: &MeasurementFamily, opts: &SolveOptions) -> bool {
        fam.measurements.iter().all(|m| self.validate_measurement(m, opts))
    }

    /// Errors unless the family is valid on this model.
    pub fn require_valid_family(&self, fam: &MeasurementFamily, opts: &SolveOptions) -> Result<()> {
        for (i, m) in fam.measurements.iter().enumerate() {
            for f in &m.effects {
                check_dim(self.dim, f.len())?;
            }
            if !self.validate_measurement(m, opts) {
                return Err(Error::InvalidMeasurement(format!("measurement {i} is not valid on {}", self.name())));
            }
        }
        Ok(())
    }

    /// The trivial effect `t·1`.
    pub fn scaled_unit(&self, t: f64) -> Vec<f64> {
        self.unit.iter().map(|u| t * u).collect()
    }
}

fn optimum(p: &LpProblem, opts: &SolveOptions, what: &str) -> Result<f64> {
    match lp_minimize(p, opts)? {
        LpOutcome::Optimal { value, .. } => Ok(value),
        other => Err(Error::NumericalFailure(format!("{what} LP did not reach an optimum: {other:?}"))),
    }
}

fn check_sign_dimension(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("model needs n >= 1".into()));
    }
    if n > MAX_SIGN_DIMENSION {
        return Err(Error::LimitExceeded { what: "sign-vector dimension", value: n, limit: MAX_SIGN_DIMENSION });
    }
    Ok(())
}

fn lift(x0: f64, rest: &[f64]) -> Vec<f64> {
    let mut v = Vec::with_capacity(rest.len() + 1);
    v.push(x0);
    v.extend_from_slice(rest);
    v
}

fn signed_units(n: usize) -> Vec<Vec<f64>> {
    NormTag::L1.ball_vertices(n).expect("ℓ₁ ball is a polytope")
}

/// A measurement: `k >= 2` effects summing to the order unit.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    effects: Vec<Vec<f64>>,
}

impl Measurement {
    /// Wraps a list of effect covectors (at least two, equal lengths).
    pub fn new(effects: Vec<Vec<f64>>) -> Result<Self> {
        if effects.len() < 2 {
            return Err(Error::InvalidArgument("a measurement needs at least 2 outcomes".into()));
        }
        let d = effects[0].len();
        for f in &effects {
            check_dim(d, f.len())?;
        }
        Ok(Measurement { effects })
    }

    /// The dichotomic measurement `(f, 1 − f)`.
    pub fn dichotomic(f: &[f64], unit: &[f64]) -> Result<Self> {
        check_dim(unit.len(), f.len())?;
        Self::new(vec![f.to_vec(), unit.iter().zip(f).map(|(u, x)| u - x).collect()])
    }

    /// Number of outcomes `k`.
    pub fn outcomes(&self) -> usize {
        self.effects.len()
    }

    /// The effects.
    pub fn effects(&self) -> &[Vec<f64>] {
        &self.effects
    }

    /// Sum of all effects (the order unit for a valid measurement).
    pub fn sum(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.effects[0].len()];
        for f in &self.effects {
            for (a, b) in s.iter_mut().zip(f) {
                *a += b;
            }
        }
        s
    }
}

/// White-noise mixing `fⱼ ↦ s·fⱼ + (1 − s)/k · 1`, with the unit recovered
/// as the sum of the effects.
pub fn add_noise(m: &Measurement, s: f64) -> Result<Measurement> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidArgument(format!("noise parameter {s} outside [0, 1]")));
    }
    let unit = m.sum();
    let k = m.outcomes() as f64;
    let effects = m
        .effects
        .iter()
        .map(|f| f.iter().zip(&unit).map(|(x, u)| s * x + (1.0 - s) / k * u).collect())
        .collect();
    Ok(Measurement { effects })
}

/// A tuple of measurements on the same model.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementFamily {
    measurements: Vec<Measurement>,
}

/// On-disk family `{"k": [...], "effects": [[[...]]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyJson {
    /// Outcome counts.
    pub k: Vec<usize>,
    /// `effects[i][j]` is effect `j` of measurement `i`.
    #[serde(serialize_with = "json::ser_tensor3")]
    pub effects: Vec<Vec<Vec<f64>>>,
}

impl MeasurementFamily {
    /// Wraps a nonempty list of measurements of equal dimension.
    pub fn new(measurements: Vec<Measurement>) -> Result<Self> {
        if measurements.is_empty() {
            return Err(Error::InvalidArgument("a family needs at least one measurement".into()));
        }
        let d = measurements[0].effects[0].len();
        for m in &measurements {
            check_dim(d, m.effects[0].len())?;
        }
        Ok(MeasurementFamily { measurements })
    }

    /// Family of dichotomic measurements `(fᵢ, 1 − fᵢ)`.
    pub fn dichotomic(effects: &[Vec<f64>], unit: &[f64]) -> Result<Self> {
        Self::new(effects.iter().map(|f| Measurement::dichotomic(f, unit)).collect::<Result<_>>()?)
    }

    /// The measurements.
    pub fn measurements(&self) -> &[Measurement] {
        &self.measurements
    }

    /// Number of measurements `g`.
    pub fn g(&self) -> usize {
        self.measurements.len()
    }

    /// Outcome vector `k`.
    pub fn k(&self) -> Vec<usize> {
        self.measurements.iter().map(|m| m.outcomes()).collect()
    }

    /// Dimension of the effect space.
    pub fn dim(&self) -> usize {
        self.measurements[0].effects[0].len()
    }

    /// Whether every measurement has two outcomes.
    pub fn is_dichotomic(&self) -> bool {
        self.measurements.iter().all(|m| m.outcomes() == 2)
    }

    /// First effects `fᵢ` of a dichotomic family.
    pub fn first_effects(&self) -> Vec<Vec<f64>> {
        self.measurements.iter().map(|m| m.effects[0].clone()).collect()
    }

    /// Applies per-measurement noise `sᵢ`.
    pub fn with_noise(&self, s: &[f64]) -> Result<Self> {
        check_dim(self.g(), s.len())?;
        let ms = self.measurements.iter().zip(s).map(|(m, &si)| add_noise(m, si)).collect::<Result<_>>()?;
        Ok(MeasurementFamily { measurements: ms })
    }

    /// Applies the same noise `s` to every measurement.
    pub fn with_uniform_noise(&self, s: f64) -> Result<Self> {
        self.with_noise(&vec![s; self.g()])
    }

    /// Parses a family file.
    pub fn from_json(j: FamilyJson) -> Result<Self> {
        check_dim(j.k.len(), j.effects.len())?;
        let mut ms = Vec::with_capacity(j.k.len());
        for (ki, effs) in j.k.iter().zip(j.effects) {
            check_dim(*ki, effs.len())?;
            ms.push(Measurement::new(effs)?);
        }
        Self::new(ms)
    }

    /// Serialisable form.
    pub fn to_json(&self) -> FamilyJson {
        FamilyJson { k: self.k(), effects: self.measurements.iter().map(|m| m.effects.clone()).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_sizes() {
        let hc = Gpt::make_hypercube(3).unwrap();
        let c = hc.cone().unwrap();
        assert_eq!(c.generators().len(), 8);
        assert_eq!(c.facets().unwrap().len(), 6);
        let cp = Gpt::make_crosspolytope(3).unwrap();
        let c = cp.cone().unwrap();
        assert_eq!(c.generators().len(), 6);
        assert_eq!(c.facets().unwrap().len(), 8);
        assert!(matches!(Gpt::make_hypercube(0), Err(Error::InvalidArgument(_))));
        assert!(matches!(Gpt::make_classical(0), Err(Error::InvalidArgument(_))));
        assert!(matches!(Gpt::make_ball(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn hypercube_two_generators() {
        let hc = Gpt::make_hypercube(2).unwrap();
        let mut g = hc.cone().unwrap().generators().to_vec();
        g.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(
            g,
            vec![vec![1.0, -1.0, -1.0], vec![1.0, -1.0, 1.0], vec![1.0, 1.0, -1.0], vec![1.0, 1.0, 1.0]]
        );
    }

    #[test]
    fn crosspolytope_two_generators() {
        let cp = Gpt::make_crosspolytope(2).unwrap();
        let mut g = cp.cone().unwrap().generators().to_vec();
        g.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(
            g,
            vec![vec![1.0, -1.0, 0.0], vec![1.0, 0.0, -1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]]
        );
    }

    #[test]
    fn standard_cones_validate() {
        for m in [
            Gpt::make_classical(3).unwrap(),
            Gpt::make_hypercube(2).unwrap(),
            Gpt::make_hypercube(3).unwrap(),
            Gpt::make_crosspolytope(2).unwrap(),
            Gpt::make_crosspolytope(4).unwrap(),
        ] {
            let c = m.cone().unwrap();
            c.validate(1e-9).unwrap();
            c.cross_check(32, 7, 1e-9).unwrap();
        }
    }

    #[test]
    fn ball_is_non_polyhedral() {
        let b = Gpt::make_ball(3).unwrap();
        assert!(matches!(b.cone(), Err(Error::NonPolyhedral(_))));
        assert!(matches!(b.base_norm_lp(&[1.0, 0.0, 0.0, 0.0], &SolveOptions::default()), Err(Error::NonPolyhedral(_))));
    }

    #[test]
    fn classical_norms() {
        let cm = Gpt::make_classical(3).unwrap();
        let o = SolveOptions::default();
        let x = [0.5, -2.0, 1.0];
        assert!((cm.base_norm(&x, &o).unwrap() - 3.5).abs() < 1e-9);
        assert!((cm.order_unit_norm(&x, &o).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn hypercube_norms() {
        let hc = Gpt::make_hypercube(2).unwrap();
        let o = SolveOptions::default();
        let x = [0.5, -2.0, 1.0];
        assert_eq!(hc.base_norm(&x, &o).unwrap(), 2.0);
        assert!((hc.base_norm_lp(&x, &o).unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(hc.order_unit_norm(&x, &o).unwrap(), 3.5);
        assert!((hc.order_unit_norm_lp(&x, &o).unwrap() - 3.5).abs() < 1e-9);
    }

    #[test]
    fn states_have_base_norm_equal_to_unit_value() {
        let hc = Gpt::make_hypercube(2).unwrap();
        let x = [2.0, 1.0, -1.5];
        let o = SolveOptions::default();
        assert!((hc.base_norm_lp(&x, &o).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn effect_validation() {
        let hc = Gpt::make_hypercube(2).unwrap();
        assert!(hc.validate_effect(&hc.scaled_unit(0.5), 1e-9));
        assert!(!hc.validate_effect(&hc.scaled_unit(2.0), 1e-9));
        // (α, f̄) valid iff ‖f̄‖₁ <= min(α, 1 − α)
        assert!(hc.validate_effect(&[0.3, 0.2, -0.1], 1e-9));
        assert!(!hc.validate_effect(&[0.3, 0.2, -0.11], 1e-9));
        assert!(!hc.validate_effect(&[0.8, 0.2, 0.05], 1e-9));
    }

    #[test]
    fn noise_endpoints() {
        let hc = Gpt::make_hypercube(2).unwrap();
        let m = Measurement::dichotomic(&[0.5, 0.5, 0.0], hc.unit()).unwrap();
        assert_eq!(add_noise(&m, 1.0).unwrap(), m);
        let t = add_noise(&m, 0.0).unwrap();
        assert_eq!(t.effects()[0], vec![0.5, 0.0, 0.0]);
        assert!(add_noise(&m, 1.5).is_err());
        assert!(add_noise(&m, -0.1).is_err());
    }

    #[test]
    fn exact_sum_check() {
        let cm = Gpt::make_classical(2).unwrap();
        let m = Measurement::new(vec![vec![0.1, 0.2], vec![0.2, 0.8], vec![0.7, 0.0]]).unwrap();
        // 0.1 + 0.2 + 0.7 is not exactly 1 in binary floating point
        assert!(cm.validate_measurement(&m, &SolveOptions::default()));
        assert!(!cm.validate_measurement(&m, &SolveOptions::exact()));
        let m = Measurement::new(vec![vec![0.25, 0.5], vec![0.75, 0.5]]).unwrap();
        assert!(cm.validate_measurement(&m, &SolveOptions::exact()));
    }

    #[test]
    fn model_json_roundtrip() {
        let s = r#"{"model": "hypercube", "n": 2}"#;
        let j: ModelJson = serde_json::from_str(s).unwrap();
        let m = Gpt::from_json(j, 1e-9).unwrap();
        assert_eq!(m, Gpt::make_hypercube(2).unwrap());
        let custom = Gpt::make_custom(Gpt::make_hypercube(2).unwrap().cone().unwrap().clone(), vec![1.0, 0.0, 0.0]).unwrap();
        let text = serde_json::to_string(&custom.to_json()).unwrap();
        let back = Gpt::from_json(serde_json::from_str(&text).unwrap(), 1e-9).unwrap();
        assert_eq!(back, custom);
    }

    #[test]
    fn custom_unit_must_be_interior() {
        let cone = PolyCone::nonneg_orthant(2).unwrap();
        assert!(Gpt::make_custom(cone, vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn family_json_roundtrip() {
        let s = r#"{"k": [2, 2], "effects": [[[0.5, 0.5, 0], [0.5, -0.5, 0]], [[0.5, 0, 0.5], [0.5, 0, -0.5]]]}"#;
        let fam = MeasurementFamily::from_json(serde_json::from_str(s).unwrap()).unwrap();
        assert_eq!(fam.k(), vec![2, 2]);
        let text = serde_json::to_string(&fam.to_json()).unwrap();
        let back = MeasurementFamily::from_json(serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, fam);
        let bad = r#"{"k": [3], "effects": [[[1, 0, 0], [0, 0, 0]]]}"#;
        assert!(MeasurementFamily::from_json(serde_json::from_str(bad).unwrap()).is_err());
    }
}
