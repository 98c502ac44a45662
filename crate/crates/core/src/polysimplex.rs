//! The outcome space `E_k ⊆ R^{k₁⋯k_g}` of a family of measurements.
//!
//! `E_k` is the span of functions of the outcome tuple `κ` that depend on a
//! single coordinate. It has the basis `w = {1_k, w_j^{(i)}}` with
//! `w_j^{(i)}(κ) = −2/kᵢ + 2δ_{κᵢ,j}` for `j < kᵢ − 1` (0-based), and the dual
//! basis `w* = {1_k / Πk, w_j^{(*i)}}` with
//! `w_j^{(*i)} = (kᵢ/Πk) · 1⊗…⊗½(e_j − e_{kᵢ−1})⊗…⊗1`.
//!
//! Outcome tuples are linearised row-major with the first measurement slowest.
//! For `k = (2, …, 2)` this makes `w_0^{(i)} = (1,1)^{⊗(i−1)} ⊗ (1,−1) ⊗ (1,1)^{⊗(g−i)}`.

use crate::cones::MapTensor;
use crate::error::{check_dim, Error, Result};
use crate::gpt::{Gpt, MeasurementFamily};
use crate::linalg::inverse;
use crate::lp::SolveOptions;
use crate::scalar::{rational, Scalar};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Default cap on `k₁⋯k_g`.
pub const OUTCOME_CAP: usize = 1 << 16;

/// Largest outcome count for which [`OutcomeSpace::j_matrix`] materialises `J`.
pub const J_MATRIX_CAP: usize = 1 << 12;

/// `E_k` together with its bases and the orthogonal projection `J_k`.
#[derive(Clone, Debug)]
pub struct OutcomeSpace {
    k: Vec<usize>,
    n_outcomes: usize,
    /// Basis labels: `None` for `1_k`, `Some((i, j))` for `w_j^{(i)}`.
    labels: Vec<Option<(usize, usize)>>,
    /// `(WᵀW)⁻¹`, computed exactly and rounded.
    gram_inv: Vec<Vec<f64>>,
    gram_inv_exact: Vec<Vec<BigRational>>,
}

/// Builds `E_k` and verifies its invariants: biorthogonality of `w` and
/// `w*`, and that `J` fixes both bases.
pub fn build_outcome_space(k: &[usize]) -> Result<OutcomeSpace> {
    build_outcome_space_capped(k, OUTCOME_CAP)
}

/// [`build_outcome_space`] with an explicit cap on `k₁⋯k_g`.
pub fn build_outcome_space_capped(k: &[usize], cap: usize) -> Result<OutcomeSpace> {
    if k.is_empty() {
        return Err(Error::InvalidArgument("outcome vector must be nonempty".into()));
    }
    if let Some(&bad) = k.iter().find(|&&ki| ki < 2) {
        return Err(Error::InvalidArgument(format!("every measurement needs k >= 2 outcomes, got {bad}")));
    }
    let mut n: usize = 1;
    for &ki in k {
        n = n.checked_mul(ki).filter(|&v| v <= cap).ok_or(Error::LimitExceeded {
            what: "outcome tuples k₁⋯k_g",
            value: k.iter().fold(1usize, |a, &b| a.saturating_mul(b)),
            limit: cap,
        })?;
    }
    let mut labels = vec![None];
    for (i, &ki) in k.iter().enumerate() {
        for j in 0..ki - 1 {
            labels.push(Some((i, j)));
        }
    }
    // Gram matrix in closed form: w-functions of different measurements are
    // orthogonal (each has zero mean), and within measurement i
    // ⟨w_j, w_l⟩ = (N/kᵢ)(4δ_jl − 4/kᵢ).
    let d = labels.len();
    let nn = n as i64;
    let mut gram = vec![vec![BigRational::zero(); d]; d];
    gram[0][0] = rational(nn, 1);
    for a in 1..d {
        for b in 1..d {
            let (ia, ja) = labels[a].expect("non-unit label");
            let (ib, jb) = labels[b].expect("non-unit label");
            if ia != ib {
                continue;
            }
            let ki = k[ia] as i64;
            let delta = if ja == jb { 1 } else { 0 };
            // (N/k)(4δ − 4/k) = N(4δk − 4)/k²
            gram[a][b] = rational(nn * (4 * delta * ki - 4), ki * ki);
        }
    }
    let gram_inv_exact = inverse(&gram).ok_or_else(|| Error::NumericalFailure("singular Gram matrix".into()))?;
    let gram_inv = gram_inv_exact.iter().map(|r| r.iter().map(Scalar::to_f64).collect()).collect();
    let space = OutcomeSpace { k: k.to_vec(), n_outcomes: n, labels, gram_inv, gram_inv_exact };
    space.verify()?;
    Ok(space)
}

impl OutcomeSpace {
    /// Outcome vector `k`.
    pub fn k(&self) -> &[usize] {
        &self.k
    }

    /// Number of measurements `g`.
    pub fn g(&self) -> usize {
        self.k.len()
    }

    /// `k₁⋯k_g`.
    pub fn n_outcomes(&self) -> usize {
        self.n_outcomes
    }

    /// `dim E_k = 1 − g + Σkᵢ`.
    pub fn dim_e(&self) -> usize {
        self.labels.len()
    }

    /// Label of basis vector `a`: `None` for `1_k`, `Some((i, j))` for `w_j^{(i)}`.
    pub fn label(&self, a: usize) -> Option<(usize, usize)> {
        self.labels[a]
    }

    /// Basis index of `w_j^{(i)}`.
    pub fn w_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + 1 < self.k[i]);
        1 + self.k[..i].iter().map(|ki| ki - 1).sum::<usize>() + j
    }

    /// Outcome tuple of a linear index.
    pub fn outcome_tuple(&self, mut idx: usize) -> Vec<usize> {
        let mut t = vec![0; self.g()];
        for i in (0..self.g()).rev() {
            t[i] = idx % self.k[i];
            idx /= self.k[i];
        }
        t
    }

    /// Linear index of an outcome tuple.
    pub fn outcome_index(&self, kappa: &[usize]) -> usize {
        kappa.iter().zip(&self.k).fold(0, |acc, (&c, &ki)| acc * ki + c)
    }

    /// `w_j^{(i)}` evaluated at an outcome with `κᵢ = c`.
    pub fn w_coeff(&self, i: usize, j: usize, c: usize) -> f64 {
        let ki = self.k[i] as f64;
        -2.0 / ki + if c == j { 2.0 } else { 0.0 }
    }

    /// Basis vector `a` evaluated at outcome tuple `kappa`.
    pub fn w_value(&self, a: usize, kappa: &[usize]) -> f64 {
        match self.labels[a] {
            None => 1.0,
            Some((i, j)) => self.w_coeff(i, j, kappa[i]),
        }
    }

    /// Dual basis vector `a` evaluated at outcome tuple `kappa`.
    pub fn w_dual_value(&self, a: usize, kappa: &[usize]) -> f64 {
        let n = self.n_outcomes as f64;
        match self.labels[a] {
            None => 1.0 / n,
            Some((i, j)) => {
                let ki = self.k[i];
                let c = kappa[i];
                let s = if c == j {
                    0.5
                } else if c == ki - 1 {
                    -0.5
                } else {
                    0.0
                };
                ki as f64 / n * s
            }
        }
    }

    /// The `w` basis as `dim_e` vectors in `R^{k₁⋯k_g}`.
    pub fn w_basis(&self) -> Vec<Vec<f64>> {
        self.tabulate(|a, kappa| self.w_value(a, kappa))
    }

    /// The dual basis `w*` as `dim_e` vectors in `R^{k₁⋯k_g}`.
    pub fn w_dual(&self) -> Vec<Vec<f64>> {
        self.tabulate(|a, kappa| self.w_dual_value(a, kappa))
    }

    fn tabulate(&self, f: impl Fn(usize, &[usize]) -> f64) -> Vec<Vec<f64>> {
        let tuples: Vec<Vec<usize>> = (0..self.n_outcomes).map(|t| self.outcome_tuple(t)).collect();
        (0..self.dim_e()).map(|a| tuples.iter().map(|kappa| f(a, kappa)).collect()).collect()
    }

    /// Coordinates of `x ∈ R^{k₁⋯k_g}` projected onto `E_k`, in the `w` basis:
    /// `(WᵀW)⁻¹ Wᵀ x`.
    pub fn w_coordinates(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.n_outcomes, x.len())?;
        let mut wtx = vec![0.0; self.dim_e()];
        for (t, &xt) in x.iter().enumerate() {
            if xt == 0.0 {
                continue;
            }
            let kappa = self.outcome_tuple(t);
            for (a, v) in wtx.iter_mut().enumerate() {
                *v += self.w_value(a, &kappa) * xt;
            }
        }
        Ok(crate::linalg::mat_vec(&self.gram_inv, &wtx))
    }

    /// Vector in `R^{k₁⋯k_g}` with the given `w`-coordinates.
    pub fn from_w_coordinates(&self, c: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim_e(), c.len())?;
        Ok((0..self.n_outcomes)
            .map(|t| {
                let kappa = self.outcome_tuple(t);
                c.iter().enumerate().map(|(a, ca)| ca * self.w_value(a, &kappa)).sum()
            })
            .collect())
    }

    /// Orthogonal projection `J_k x = W (WᵀW)⁻¹ Wᵀ x`.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        let c = self.w_coordinates(x)?;
        self.from_w_coordinates(&c)
    }

    /// `J_k` as a dense matrix (only for `k₁⋯k_g <= 4096`).
    pub fn j_matrix(&self) -> Result<Vec<Vec<f64>>> {
        if self.n_outcomes > J_MATRIX_CAP {
            return Err(Error::LimitExceeded { what: "dense J_k", value: self.n_outcomes, limit: J_MATRIX_CAP });
        }
        let w = self.w_basis();
        let d = self.dim_e();
        let n = self.n_outcomes;
        // J = W G⁻¹ Wᵀ with W stored as rows w_a
        let mut gw = vec![vec![0.0; n]; d];
        for a in 0..d {
            for b in 0..d {
                let g = self.gram_inv[a][b];
                if g == 0.0 {
                    continue;
                }
                for t in 0..n {
                    gw[a][t] += g * w[b][t];
                }
            }
        }
        let mut j = vec![vec![0.0; n]; n];
        for s in 0..n {
            for t in 0..n {
                j[s][t] = (0..d).map(|a| w[a][s] * gw[a][t]).sum();
            }
        }
        Ok(j)
    }

    /// `J_k` in exact rational arithmetic (only for `k₁⋯k_g <= 4096`).
    pub fn j_matrix_exact(&self) -> Result<Vec<Vec<BigRational>>> {
        if self.n_outcomes > J_MATRIX_CAP {
            return Err(Error::LimitExceeded { what: "dense J_k", value: self.n_outcomes, limit: J_MATRIX_CAP });
        }
        let d = self.dim_e();
        let n = self.n_outcomes;
        let tuples: Vec<Vec<usize>> = (0..n).map(|t| self.outcome_tuple(t)).collect();
        let w_exact = |a: usize, kappa: &[usize]| -> BigRational {
            match self.labels[a] {
                None => rational(1, 1),
                Some((i, j)) => {
                    let ki = self.k[i] as i64;
                    rational(-2, ki) + if kappa[i] == j { rational(2, 1) } else { rational(0, 1) }
                }
            }
        };
        let w: Vec<Vec<BigRational>> =
            (0..d).map(|a| tuples.iter().map(|kappa| w_exact(a, kappa)).collect()).collect();
        let mut j = vec![vec![BigRational::zero(); n]; n];
        for s in 0..n {
            for t in 0..n {
                let mut acc = BigRational::zero();
                for a in 0..d {
                    if w[a][s].is_zero() {
                        continue;
                    }
                    for b in 0..d {
                        let g = &self.gram_inv_exact[a][b];
                        if g.is_zero() {
                            continue;
                        }
                        acc += w[a][s].clone() * g.clone() * w[b][t].clone();
                    }
                }
                j[s][t] = acc;
            }
        }
        Ok(j)
    }

    /// Marginal distributions of a distribution (or any vector) on outcome tuples.
    pub fn marginals(&self, p: &[f64]) -> Result<Vec<Vec<f64>>> {
        check_dim(self.n_outcomes, p.len())?;
        let mut m: Vec<Vec<f64>> = self.k.iter().map(|&ki| vec![0.0; ki]).collect();
        for (t, &pt) in p.iter().enumerate() {
            let kappa = self.outcome_tuple(t);
            for (i, &c) in kappa.iter().enumerate() {
                m[i][c] += pt;
            }
        }
        Ok(m)
    }

    /// `w`-coordinates of `η_j^{(i)} = 1⊗…⊗e_j⊗…⊗1` (the indicator of `κᵢ = j`).
    pub fn eta_coordinates(&self, i: usize, j: usize) -> Vec<f64> {
        let mut c = vec![0.0; self.dim_e()];
        let ki = self.k[i];
        c[0] = 1.0 / ki as f64;
        if j + 1 < ki {
            c[self.w_index(i, j)] = 0.5;
        } else {
            for l in 0..ki - 1 {
                c[self.w_index(i, l)] = -0.5;
            }
        }
        c
    }

    fn verify(&self) -> Result<()> {
        // Cheap checks that scale to the outcome cap: biorthogonality is
        // checked over all tuples; J fixing the bases is checked on w and w*.
        let d = self.dim_e();
        let n = self.n_outcomes;
        let tuples: Vec<Vec<usize>> = (0..n).map(|t| self.outcome_tuple(t)).collect();
        for a in 0..d {
            for b in 0..d {
                let ip: f64 = tuples.iter().map(|kp| self.w_dual_value(a, kp) * self.w_value(b, kp)).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                if (ip - target).abs() > 1e-9 {
                    return Err(Error::NumericalFailure(format!("dual basis check failed at ({a},{b}): {ip}")));
                }
            }
        }
        if n <= 4096 {
            for basis in [self.w_basis(), self.w_dual()] {
                for v in &basis {
                    let pv = self.project(v)?;
                    let err = pv.iter().zip(v).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                    if err > 1e-9 {
                        return Err(Error::NumericalFailure(format!("J does not fix the basis: {err:e}")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Split of a dichotomic effect tensor on a centrally symmetric model into
/// the bias part `y_f = (2αᵢ − 1)ᵢ` and the centred part `ξ̄ = (2f̄ᵢ)ᵢ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsSplit {
    /// `y_f`.
    pub y: Vec<f64>,
    /// Blocks `2f̄ᵢ ∈ Ā`.
    pub xi_bar: Vec<Vec<f64>>,
}

/// The effect tensor `φ^{(f)} = (1/Πk) 1_k ⊗ p₀ + Σ w_j^{(*i)} ⊗ p_j^{(i)}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectTensor {
    /// Outcome vector.
    pub k: Vec<usize>,
    /// Coefficient of `1_k / Πk` (the order unit).
    pub p0: Vec<f64>,
    /// `p[i][j] = 2f_j^{(i)} − (2/kᵢ)·1` for `j < kᵢ − 1`.
    pub p: Vec<Vec<Vec<f64>>>,
    /// Present for dichotomic families on centrally symmetric models.
    pub cs_split: Option<CsSplit>,
}

impl EffectTensor {
    /// Builds the tensor without validating the family.
    pub fn from_family_unchecked(gpt: &Gpt, family: &MeasurementFamily) -> Result<Self> {
        check_dim(gpt.dim(), family.dim())?;
        let unit = gpt.unit();
        let p = family
            .measurements()
            .iter()
            .map(|m| {
                let ki = m.outcomes() as f64;
                m.effects()[..m.outcomes() - 1]
                    .iter()
                    .map(|f| f.iter().zip(unit).map(|(x, u)| 2.0 * x - 2.0 / ki * u).collect())
                    .collect()
            })
            .collect();
        let cs_split = match (gpt.cs_norm(), family.is_dichotomic()) {
            (Some(_), true) => {
                let fs = family.first_effects();
                Some(CsSplit {
                    y: fs.iter().map(|f| 2.0 * f[0] - 1.0).collect(),
                    xi_bar: fs.iter().map(|f| f[1..].iter().map(|x| 2.0 * x).collect()).collect(),
                })
            }
            _ => None,
        };
        Ok(EffectTensor { k: family.k(), p0: unit.to_vec(), p, cs_split })
    }

    /// Reduced dichotomic tensor `φ̄ = Σ čᵢ ⊗ (2fᵢ − 1)` as its blocks.
    pub fn dichotomic_blocks(&self) -> Result<Vec<Vec<f64>>> {
        if self.k.iter().any(|&ki| ki != 2) {
            return Err(Error::InvalidArgument("reduced tensor needs a dichotomic family".into()));
        }
        Ok(self.p.iter().map(|pi| pi[0].clone()).collect())
    }

    /// Coefficients in `R^{k₁⋯k_g} ⊗ A`, outcome index slowest.
    pub fn to_full(&self, space: &OutcomeSpace) -> Result<Vec<f64>> {
        if space.k() != self.k.as_slice() {
            return Err(Error::InvalidArgument("outcome space does not match the tensor".into()));
        }
        let m = self.p0.len();
        let mut out = vec![0.0; space.n_outcomes() * m];
        for t in 0..space.n_outcomes() {
            let kappa = space.outcome_tuple(t);
            let row = &mut out[t * m..(t + 1) * m];
            let c0 = space.w_dual_value(0, &kappa);
            for (r, p) in row.iter_mut().zip(&self.p0) {
                *r += c0 * p;
            }
            for (i, pi) in self.p.iter().enumerate() {
                for (j, pij) in pi.iter().enumerate() {
                    let c = space.w_dual_value(space.w_index(i, j), &kappa);
                    if c == 0.0 {
                        continue;
                    }
                    for (r, p) in row.iter_mut().zip(pij) {
                        *r += c * p;
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `φ^{(f)}` for a validated family.
pub fn effect_tensor(gpt: &Gpt, family: &MeasurementFamily) -> Result<EffectTensor> {
    gpt.require_valid_family(family, &SolveOptions::default())?;
    EffectTensor::from_family_unchecked(gpt, family)
}

/// `φ^{(f)}` for the dichotomic family `(fᵢ, 1 − fᵢ)`, including the
/// centrally symmetric split when applicable.
pub fn effect_tensor_dichotomic(gpt: &Gpt, effects: &[Vec<f64>]) -> Result<EffectTensor> {
    let fam = MeasurementFamily::dichotomic(effects, gpt.unit())?;
    effect_tensor(gpt, &fam)
}

/// The unital map `Φ^{(f)}: E_k → A` in the `w` basis:
/// `1_k ↦ 1`, `w_j^{(i)} ↦ 2f_j^{(i)} − (2/kᵢ)·1`.
pub fn phi_map(gpt: &Gpt, family: &MeasurementFamily) -> Result<MapTensor> {
    let t = effect_tensor(gpt, family)?;
    phi_map_of(&t)
}

/// [`phi_map`] from an already built tensor.
pub fn phi_map_of(t: &EffectTensor) -> Result<MapTensor> {
    let mut cols = vec![t.p0.clone()];
    for pi in &t.p {
        cols.extend(pi.iter().cloned());
    }
    MapTensor::from_columns(t.p0.len(), &cols)
}

/// Applies the outcome relabelling that flips measurement `i` (for every
/// `i` with `flips[i]`) to a full tensor of a dichotomic family.
pub fn relabel_dichotomic(space: &OutcomeSpace, full: &[f64], flips: &[bool]) -> Result<Vec<f64>> {
    check_dim(space.g(), flips.len())?;
    if space.k().iter().any(|&ki| ki != 2) {
        return Err(Error::InvalidArgument("relabelling by signs needs a dichotomic family".into()));
    }
    let n = space.n_outcomes();
    let m = full.len() / n;
    let mut out = vec![0.0; full.len()];
    for t in 0..n {
        let mut kappa = space.outcome_tuple(t);
        for (c, &fl) in kappa.iter_mut().zip(flips) {
            if fl {
                *c = 1 - *c;
            }
        }
        let s = space.outcome_index(&kappa);
        out[s * m..(s + 1) * m].copy_from_slice(&full[t * m..(t + 1) * m]);
    }
    Ok(out)
}

/// `φ ∈ (E_k⁺)* ⊗_max A⁺` with `E_k⁺` generated by the indicators
/// `η_j^{(i)}`: pairs the full tensor with every `η ⊗ v` for generators `v`
/// of `V⁺` (polyhedral models).
pub fn in_max_cone(gpt: &Gpt, space: &OutcomeSpace, full: &[f64], tol: f64) -> Result<bool> {
    let m = gpt.dim();
    check_dim(space.n_outcomes() * m, full.len())?;
    let gens = gpt.cone()?.generators();
    for i in 0..space.g() {
        for j in 0..space.k()[i] {
            // contract with η_j^{(i)}
            let mut a = vec![0.0; m];
            for t in 0..space.n_outcomes() {
                if space.outcome_tuple(t)[i] == j {
                    for (x, y) in a.iter_mut().zip(&full[t * m..(t + 1) * m]) {
                        *x += y;
                    }
                }
            }
            if gens.iter().any(|v| crate::linalg::dot(&a, v) < -tol) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
