//! Polyhedral cones: membership, duality, minimal and maximal tensor
//! products, the canonical evaluation tensor and linear maps as tensors.
//!
//! A [`PolyCone`] is stored by its generators (V-representation) and, when
//! known, its supporting inequalities (H-representation). Cones produced by
//! [`min_tensor`] carry generators only; membership for them is decided by an
//! LP over the generators.

use crate::error::{check_dim, Error, Result};
use crate::json;
use crate::linalg::{dot, kron, rank};
use crate::lp::{lp_feasible, LpCertificate, LpProblem, Relation, SolveOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Default cap on the number of generators of a minimal tensor product.
pub const MIN_TENSOR_GENERATOR_CAP: usize = 1 << 16;

/// A closed convex polyhedral cone in `R^dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyCone {
    dim: usize,
    generators: Vec<Vec<f64>>,
    facets: Option<Vec<Vec<f64>>>,
}

/// On-disk form `{"dim": n, "generators": [[...]], "facets": [[...]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyConeJson {
    /// Ambient dimension.
    pub dim: usize,
    /// Generators (extreme rays).
    #[serde(serialize_with = "json::ser_mat")]
    pub generators: Vec<Vec<f64>>,
    /// Supporting inequalities; omitted for cones given by generators only.
    #[serde(default, serialize_with = "json::ser_opt_mat", skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<Vec<f64>>>,
}

impl PolyCone {
    /// Builds a cone from both representations and validates it.
    ///
    /// Checks: consistent dimensions; the cone is neither `{0}` nor the whole
    /// space; generators span the space; the facet normals span the dual
    /// (pointedness); every generator satisfies every inequality; and a
    /// sampled cross-check that points satisfying the inequalities are
    /// nonnegative combinations of the generators.
    pub fn new(dim: usize, generators: Vec<Vec<f64>>, facets: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        let cone = Self::checked(dim, generators, Some(facets), tol)?;
        cone.cross_check(48, 0x5eed, tol)?;
        Ok(cone)
    }

    /// Builds a cone from generators only; membership is then decided by LP.
    pub fn from_generators(dim: usize, generators: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        Self::checked(dim, generators, None, tol)
    }

    /// Constructs a cone whose data are correct by construction (used by the
    /// standard models). Validation is still available via [`PolyCone::validate`].
    pub(crate) fn trusted(dim: usize, generators: Vec<Vec<f64>>, facets: Option<Vec<Vec<f64>>>) -> Self {
        PolyCone { dim, generators, facets }
    }

    fn checked(dim: usize, generators: Vec<Vec<f64>>, facets: Option<Vec<Vec<f64>>>, tol: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DegenerateCone("ambient dimension 0".into()));
        }
        for g in &generators {
            check_dim(dim, g.len())?;
        }
        if let Some(fs) = &facets {
            for h in fs {
                check_dim(dim, h.len())?;
            }
        }
        let cone = PolyCone { dim, generators, facets };
        cone.validate(tol)?;
        Ok(cone)
    }

    /// Structural validation (see [`PolyCone::new`]); no sampling.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let nonzero = self.generators.iter().any(|g| g.iter().any(|&x| x != 0.0));
        if !nonzero {
            return Err(Error::DegenerateCone("the zero cone {0}".into()));
        }
        if let Some(fs) = &self.facets {
            if fs.is_empty() || fs.iter().all(|h| h.iter().all(|&x| x == 0.0)) {
                return Err(Error::DegenerateCone("no inequalities: the whole space".into()));
            }
            for (gi, g) in self.generators.iter().enumerate() {
                for (hi, h) in fs.iter().enumerate() {
                    let scale = 1.0 + crate::linalg::norm_inf(g) * crate::linalg::norm_inf(h);
                    if dot(h, g) < -tol * scale {
                        return Err(Error::NotProper(format!(
                            "generator {gi} violates inequality {hi} by {:.3e}",
                            -dot(h, g)
                        )));
                    }
                }
            }
            if rank(fs, 1e-10) < self.dim {
                return Err(Error::NotProper("cone contains a line (inequalities do not span)".into()));
            }
        } else if !self.is_pointed_by_lp(tol)? {
            if self.is_whole_space(tol)? {
                return Err(Error::DegenerateCone("generators span the whole space".into()));
            }
            return Err(Error::NotProper("cone contains a line".into()));
        }
        if rank(&self.generators, 1e-10) < self.dim {
            return Err(Error::NotProper("generators do not span the ambient space".into()));
        }
        Ok(())
    }

    /// A cone is pointed iff some functional is strictly positive on every
    /// nonzero generator.
    fn is_pointed_by_lp(&self, tol: f64) -> Result<bool> {
        let mut p = LpProblem::new();
        let h0 = p.add_vars(self.dim, true);
        for g in &self.generators {
            if g.iter().all(|&x| x == 0.0) {
                continue;
            }
            p.add_row(g.iter().enumerate().map(|(i, &v)| (h0 + i, v)).collect(), Relation::Ge, 1.0);
        }
        Ok(lp_feasible(&p, &SolveOptions::with_tol(tol))?.is_feasible())
    }

    fn is_whole_space(&self, tol: f64) -> Result<bool> {
        for i in 0..self.dim {
            for s in [1.0, -1.0] {
                let mut e = vec![0.0; self.dim];
                e[i] = s;
                if !self.member_by_generators(&e, &SolveOptions::with_tol(tol))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Sampled cross-check that the H- and V-descriptions define the same cone:
    /// random points near the boundary that satisfy the inequalities must be
    /// nonnegative combinations of the generators, and random combinations of
    /// the generators must satisfy the inequalities.
    pub fn cross_check(&self, samples: usize, seed: u64, tol: f64) -> Result<()> {
        let Some(fs) = &self.facets else { return Ok(()) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let center: Vec<f64> = (0..self.dim)
            .map(|i| self.generators.iter().map(|g| g[i]).sum::<f64>() / self.generators.len() as f64)
            .collect();
        let radius = crate::linalg::norm_2(&center).max(1.0);
        let opts = SolveOptions::with_tol(tol);
        for _ in 0..samples {
            // generator side
            let w: Vec<f64> = self.generators.iter().map(|_| rng.gen::<f64>()).collect();
            let x: Vec<f64> = (0..self.dim)
                .map(|i| self.generators.iter().zip(&w).map(|(g, wi)| wi * g[i]).sum())
                .collect();
            let scale = 1.0 + crate::linalg::norm_inf(&x);
            if fs.iter().any(|h| dot(h, &x) < -tol * scale * (1.0 + crate::linalg::norm_inf(h))) {
                return Err(Error::NotProper("a generator combination violates an inequality".into()));
            }
            // inequality side: push a random direction out to the boundary
            let d: Vec<f64> = (0..self.dim).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
            let mut t_max = f64::INFINITY;
            for h in fs {
                let hd = dot(h, &d);
                if hd < 0.0 {
                    t_max = t_max.min(dot(h, &center) / -hd);
                }
            }
            if !t_max.is_finite() {
                t_max = radius;
            }
            let t = t_max * rng.gen_range(0.5..1.0);
            let y: Vec<f64> = center.iter().zip(&d).map(|(c, di)| c + t * di).collect();
            if !self.member_by_generators(&y, &opts)? {
                return Err(Error::NotProper(
                    "a point satisfying the inequalities is not generated (missing generators)".into(),
                ));
            }
        }
        Ok(())
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Generators (extreme rays).
    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    /// Supporting inequalities, if known.
    pub fn facets(&self) -> Option<&[Vec<f64>]> {
        self.facets.as_deref()
    }

    /// Supporting inequalities or an error naming the operation that needed them.
    pub fn require_facets(&self, op: &str) -> Result<&[Vec<f64>]> {
        self.facets().ok_or_else(|| {
            Error::InvalidArgument(format!("{op} needs the inequality description of the cone"))
        })
    }

    /// The nonnegative orthant `R^d_+` (self-dual, simplicial).
    pub fn nonneg_orthant(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::DegenerateCone("ambient dimension 0".into()));
        }
        let e: Vec<Vec<f64>> = (0..d).map(|i| crate::linalg::unit_vector(d, i)).collect();
        Ok(Self::trusted(d, e.clone(), Some(e)))
    }

    /// Membership test with tolerance `tol` (see [`member`]).
    pub fn member(&self, x: &[f64], tol: f64) -> Result<bool> {
        member(self, x, tol)
    }

    /// Decides whether `x` is a nonnegative combination of the generators.
    pub fn member_by_generators(&self, x: &[f64], opts: &SolveOptions) -> Result<bool> {
        Ok(generator_decomposition(self, x, opts)?.is_feasible())
    }

    /// Serialisable form.
    pub fn to_json(&self) -> PolyConeJson {
        PolyConeJson { dim: self.dim, generators: self.generators.clone(), facets: self.facets.clone() }
    }

    /// Parses and validates a serialised cone.
    pub fn from_json(j: PolyConeJson, tol: f64) -> Result<Self> {
        match j.facets {
            Some(f) => Self::new(j.dim, j.generators, f, tol),
            None => Self::from_generators(j.dim, j.generators, tol),
        }
    }
}

/// `x ∈ cone`: every inequality holds up to `-tol` (relative to the size of
/// `x`); for cones without inequalities, decided by an LP over the generators.
pub fn member(cone: &PolyCone, x: &[f64], tol: f64) -> Result<bool> {
    check_dim(cone.dim, x.len())?;
    match &cone.facets {
        Some(fs) => {
            let scale = 1.0 + crate::linalg::norm_inf(x);
            Ok(fs.iter().all(|h| dot(h, x) >= -tol * scale))
        }
        None => cone.member_by_generators(x, &SolveOptions::with_tol(tol)),
    }
}

/// LP for `x = Σ λ_r g_r, λ >= 0`. A feasible certificate carries the
/// coefficients `λ`; an infeasible one carries a separating functional.
pub fn generator_decomposition(cone: &PolyCone, x: &[f64], opts: &SolveOptions) -> Result<LpCertificate> {
    check_dim(cone.dim, x.len())?;
    let mut p = LpProblem::new();
    let l0 = p.add_vars(cone.generators.len(), false);
    for i in 0..cone.dim {
        let row = cone
            .generators
            .iter()
            .enumerate()
            .filter(|(_, g)| g[i] != 0.0)
            .map(|(r, g)| (l0 + r, g[i]))
            .collect();
        p.add_row(row, Relation::Eq, x[i]);
    }
    lp_feasible(&p, opts)
}

/// The dual cone `{f : f(x) >= 0 ∀x ∈ cone}`: generators and inequalities swap.
pub fn dual_cone(cone: &PolyCone) -> Result<PolyCone> {
    let fs = cone.require_facets("dual_cone")?;
    Ok(PolyCone { dim: cone.dim, generators: fs.to_vec(), facets: Some(cone.generators.clone()) })
}

/// Minimal tensor product: generated by all Kronecker products of generators
/// (first factor slowest). Inequalities are left implicit.
pub fn min_tensor(c1: &PolyCone, c2: &PolyCone) -> Result<PolyCone> {
    min_tensor_capped(c1, c2, MIN_TENSOR_GENERATOR_CAP)
}

/// [`min_tensor`] with an explicit cap on the generator count.
pub fn min_tensor_capped(c1: &PolyCone, c2: &PolyCone, cap: usize) -> Result<PolyCone> {
    let count = c1.generators.len() * c2.generators.len();
    if count > cap {
        return Err(Error::LimitExceeded { what: "min-tensor generators", value: count, limit: cap });
    }
    let mut gens = Vec::with_capacity(count);
    for a in &c1.generators {
        for b in &c2.generators {
            gens.push(kron(a, b));
        }
    }
    Ok(PolyCone { dim: c1.dim * c2.dim, generators: gens, facets: None })
}

/// Maximal tensor product membership: `⟨y, a*⊗b*⟩ >= -tol` for every pair of
/// dual-cone generators (the inequalities of the two factors).
pub fn max_tensor_member(c1: &PolyCone, c2: &PolyCone, y: &[f64], tol: f64) -> Result<bool> {
    check_dim(c1.dim * c2.dim, y.len())?;
    let f1 = c1.require_facets("max_tensor_member")?;
    let f2 = c2.require_facets("max_tensor_member")?;
    let scale = 1.0 + crate::linalg::norm_inf(y);
    for a in f1 {
        // contract the first factor: u_j = Σ_i a_i y_{ij}
        let mut u = vec![0.0; c2.dim];
        for (i, ai) in a.iter().enumerate() {
            if *ai == 0.0 {
                continue;
            }
            for (j, uj) in u.iter_mut().enumerate() {
                *uj += ai * y[i * c2.dim + j];
            }
        }
        if f2.iter().any(|b| dot(b, &u) < -tol * scale) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Minimal tensor membership by LP over products of generators.
pub fn min_tensor_member(c1: &PolyCone, c2: &PolyCone, y: &[f64], opts: &SolveOptions) -> Result<bool> {
    let t = min_tensor(c1, c2)?;
    t.member_by_generators(y, opts)
}

/// The canonical tensor `χ_L = Σ e_i ⊗ e_i*` of a space of dimension `dim`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalTensor {
    /// Dimension of `L`.
    pub dim: usize,
}

impl CanonicalTensor {
    /// `χ` for a space of dimension `dim`.
    pub fn new(dim: usize) -> Self {
        CanonicalTensor { dim }
    }

    /// Coefficient array (`dim × dim` identity, first factor slowest).
    pub fn coeffs(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim * self.dim];
        for i in 0..self.dim {
            c[i * self.dim + i] = 1.0;
        }
        c
    }

    /// `⟨χ, v ⊗ α⟩`, which equals `α(v)`.
    pub fn pair(&self, v: &[f64], alpha: &[f64]) -> f64 {
        let c = self.coeffs();
        dot(&c, &kron(v, alpha))
    }
}

/// A linear map `Φ: W → U` in fixed bases, also viewed as the tensor
/// `φ^Φ ∈ W* ⊗ U` via `⟨φ^Φ, w ⊗ v⟩ = ⟨Φ(w), v⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapTensor {
    /// `dim W`.
    pub domain_dim: usize,
    /// `dim U`.
    pub codomain_dim: usize,
    /// `codomain_dim × domain_dim` matrix; column `a` is `Φ(e_a)`.
    pub matrix: Vec<Vec<f64>>,
}

impl MapTensor {
    /// Builds a map from the images of the domain basis vectors.
    pub fn from_columns(codomain_dim: usize, columns: &[Vec<f64>]) -> Result<Self> {
        for c in columns {
            check_dim(codomain_dim, c.len())?;
        }
        let matrix = (0..codomain_dim).map(|b| columns.iter().map(|c| c[b]).collect()).collect();
        Ok(MapTensor { domain_dim: columns.len(), codomain_dim, matrix })
    }

    /// `Φ(w)`.
    pub fn apply(&self, w: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.domain_dim, w.len())?;
        Ok(crate::linalg::mat_vec(&self.matrix, w))
    }

    /// `Φ*(v)`: the transpose action.
    pub fn adjoint(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.codomain_dim, v.len())?;
        Ok((0..self.domain_dim).map(|a| (0..self.codomain_dim).map(|b| self.matrix[b][a] * v[b]).sum()).collect())
    }

    /// Image of domain basis vector `a`.
    pub fn column(&self, a: usize) -> Vec<f64> {
        self.matrix.iter().map(|r| r[a]).collect()
    }

    /// Coefficients of `φ^Φ`, domain index slowest.
    pub fn tensor(&self) -> Vec<f64> {
        let mut t = Vec::with_capacity(self.domain_dim * self.codomain_dim);
        for a in 0..self.domain_dim {
            for b in 0..self.codomain_dim {
                t.push(self.matrix[b][a]);
            }
        }
        t
    }

    /// Inverse of [`MapTensor::tensor`].
    pub fn from_tensor(domain_dim: usize, codomain_dim: usize, t: &[f64]) -> Result<Self> {
        check_dim(domain_dim * codomain_dim, t.len())?;
        let matrix = (0..codomain_dim)
            .map(|b| (0..domain_dim).map(|a| t[a * codomain_dim + b]).collect())
            .collect();
        Ok(MapTensor { domain_dim, codomain_dim, matrix })
    }

    /// `(Φ* ⊗ id)(χ_U)` computed term by term from `χ_U = Σ_b e_b ⊗ e_b*`.
    pub fn chi_pullback(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.domain_dim * self.codomain_dim];
        for b in 0..self.codomain_dim {
            let eb = crate::linalg::unit_vector(self.codomain_dim, b);
            let left = self.adjoint(&eb).expect("dimension is consistent");
            for (k, v) in kron(&left, &eb).into_iter().enumerate() {
                out[k] += v;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_cone() -> PolyCone {
        // C_2 = {x0 >= max(|x1|, |x2|)}
        let gens = vec![
            vec![1.0, 1.0, 1.0],
            vec![1.0, 1.0, -1.0],
            vec![1.0, -1.0, 1.0],
            vec![1.0, -1.0, -1.0],
        ];
        let facets = vec![vec![1.0, 1.0, 0.0], vec![1.0, -1.0, 0.0], vec![1.0, 0.0, 1.0], vec![1.0, 0.0, -1.0]];
        PolyCone::new(3, gens, facets, 1e-9).unwrap()
    }

    #[test]
    fn orthant_membership() {
        let c = PolyCone::nonneg_orthant(2).unwrap();
        assert!(member(&c, &[1.0, 2.0], 1e-9).unwrap());
        assert!(!member(&c, &[1.0, -0.1], 1e-9).unwrap());
    }

    #[test]
    fn square_cone_boundary_and_outside() {
        let c = square_cone();
        assert!(member(&c, &[1.0, 1.0, 1.0], 1e-9).unwrap());
        assert!(!member(&c, &[1.0, 1.5, 0.0], 1e-9).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_error() {
        let c = square_cone();
        assert!(matches!(member(&c, &[1.0], 1e-9), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn degenerate_cones_rejected() {
        assert!(matches!(
            PolyCone::from_generators(2, vec![vec![0.0, 0.0]], 1e-9),
            Err(Error::DegenerateCone(_))
        ));
        let whole = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]];
        assert!(matches!(PolyCone::from_generators(2, whole, 1e-9), Err(Error::DegenerateCone(_))));
        let half_plane = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]];
        assert!(matches!(PolyCone::from_generators(2, half_plane, 1e-9), Err(Error::NotProper(_))));
        let ray = vec![vec![1.0, 0.0]];
        assert!(matches!(PolyCone::from_generators(2, ray, 1e-9), Err(Error::NotProper(_))));
    }

    #[test]
    fn missing_generator_detected_by_cross_check() {
        let gens = vec![vec![1.0, 1.0, 1.0], vec![1.0, 1.0, -1.0], vec![1.0, -1.0, 1.0]];
        let facets = vec![vec![1.0, 1.0, 0.0], vec![1.0, -1.0, 0.0], vec![1.0, 0.0, 1.0], vec![1.0, 0.0, -1.0]];
        assert!(PolyCone::new(3, gens, facets, 1e-9).is_err());
    }

    #[test]
    fn orthant_is_self_dual() {
        let c = PolyCone::nonneg_orthant(3).unwrap();
        let d = dual_cone(&c).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn bipolar() {
        let c = square_cone();
        assert_eq!(dual_cone(&dual_cone(&c).unwrap()).unwrap(), c);
    }

    #[test]
    fn simplicial_min_tensor_is_orthant() {
        let c = PolyCone::nonneg_orthant(2).unwrap();
        let t = min_tensor(&c, &c).unwrap();
        let mut gens = t.generators().to_vec();
        gens.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut expected: Vec<Vec<f64>> = (0..4).map(|i| crate::linalg::unit_vector(4, i)).collect();
        expected.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert_eq!(gens, expected);
    }

    #[test]
    fn min_tensor_cap() {
        let c = square_cone();
        assert!(matches!(min_tensor_capped(&c, &c, 15), Err(Error::LimitExceeded { .. })));
    }

    #[test]
    fn chi_in_max_of_cone_and_dual() {
        let c = square_cone();
        let d = dual_cone(&c).unwrap();
        let chi = CanonicalTensor::new(3).coeffs();
        assert!(max_tensor_member(&c, &d, &chi, 1e-9).unwrap());
    }

    #[test]
    fn chi_pairing_is_evaluation() {
        let chi = CanonicalTensor::new(3);
        assert_eq!(chi.pair(&[1.0, 2.0, 3.0], &[0.5, -1.0, 2.0]), 0.5 - 2.0 + 6.0);
    }

    #[test]
    fn json_roundtrip() {
        let c = square_cone();
        let s = serde_json::to_string(&c.to_json()).unwrap();
        assert!(s.contains("1.0000000000000000e0"));
        let back: PolyConeJson = serde_json::from_str(&s).unwrap();
        assert_eq!(PolyCone::from_json(back, 1e-9).unwrap(), c);
    }

    #[test]
    fn map_tensor_matches_chi_pullback() {
        let m = MapTensor::from_columns(2, &[vec![1.0, 2.0], vec![3.0, -1.0], vec![0.0, 5.0]]).unwrap();
        assert_eq!(m.tensor(), m.chi_pullback());
        let back = MapTensor::from_tensor(3, 2, &m.tensor()).unwrap();
        assert_eq!(back, m);
        // ⟨φ, w⊗v⟩ = ⟨Φ(w), v⟩
        let w = [1.0, -2.0, 0.5];
        let v = [0.3, 0.7];
        let lhs = dot(&m.tensor(), &kron(&w, &v));
        let rhs = dot(&m.apply(&w).unwrap(), &v);
        assert!((lhs - rhs).abs() < 1e-12);
    }
}
