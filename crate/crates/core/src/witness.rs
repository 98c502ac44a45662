//! Incompatibility witnesses.
//!
//! A witness is a tuple `z = (z₁, …, z_g)` in `V` for which some normalized
//! `z₀` makes every `z₀ + Σ εᵢ zᵢ` lie in `V⁺`; the set of witnesses is the
//! unit ball of the norm dual to ρ. For effects `fᵢ` with `pᵢ = 2fᵢ − 1`,
//! `⟨z, φ̄⟩ = Σ pᵢ(zᵢ) <= 1` whenever the effects are compatible, so a value
//! above one certifies incompatibility. A witness is strict when
//! `Σ ‖zᵢ‖_V > 1`; the blind region `Π` is the set of `s` with
//! `Σ sᵢ ‖zᵢ‖_V <= 1` for every witness, and it coincides with the
//! compatibility region.

use crate::compat::{IncompatibilityCertificate, ModelRegion, VERTEX_SUBSET_CAP};
use crate::error::{check_dim, Error, Result};
use crate::gpt::{sign_vectors, Gpt, ModelKind};
use crate::linalg::dot;
use crate::lp::{lp_feasible, lp_minimize, LpCertificate, LpOutcome, LpProblem, Relation, SolveOptions};
use crate::sampling;
use crate::tensor_norms::{region_ball, region_hypercube};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Largest `g` for the `2^g` sign constraints of the witness programs.
pub const MAX_WITNESS_G: usize = 20;

/// A candidate witness `z`, optionally with the certifying `z₀`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Normalized `z₀` with `z₀ + Σ εᵢ zᵢ ∈ V⁺` for all signs, when known.
    pub z0: Option<Vec<f64>>,
    /// The blocks `zᵢ ∈ V`.
    pub z: Vec<Vec<f64>>,
}

/// Serialized witness: `{"z0": [...], "z": [[...]], "strict": bool, "pi_norm": x}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessJson {
    /// Certifying `z₀` (empty when unknown).
    pub z0: Vec<f64>,
    /// The blocks.
    pub z: Vec<Vec<f64>>,
    /// Whether `Σ ‖zᵢ‖_V > 1`.
    pub strict: bool,
    /// `Σ ‖zᵢ‖_V`.
    pub pi_norm: f64,
}

impl Witness {
    /// A witness without a known `z₀`.
    pub fn new(z: Vec<Vec<f64>>) -> Self {
        Witness { z0: None, z }
    }

    /// Number of blocks.
    pub fn g(&self) -> usize {
        self.z.len()
    }

    /// `Σ ‖zᵢ‖_V`.
    pub fn pi_norm(&self, gpt: &Gpt, opts: &SolveOptions) -> Result<f64> {
        self.z.iter().map(|zi| gpt.base_norm(zi, opts)).sum()
    }

    /// The JSON form, with strictness and π-norm evaluated on `gpt`.
    pub fn to_json(&self, gpt: &Gpt, opts: &SolveOptions) -> Result<WitnessJson> {
        let pi_norm = self.pi_norm(gpt, opts)?;
        Ok(WitnessJson {
            z0: self.z0.clone().unwrap_or_default(),
            z: self.z.clone(),
            strict: pi_norm > 1.0 + opts.tol,
            pi_norm,
        })
    }
}

fn check_blocks(gpt: &Gpt, z: &[Vec<f64>]) -> Result<()> {
    if z.is_empty() {
        return Err(Error::InvalidArgument("a witness needs at least one block".into()));
    }
    if z.len() > MAX_WITNESS_G {
        return Err(Error::LimitExceeded { what: "witness sign enumeration g", value: z.len(), limit: MAX_WITNESS_G });
    }
    for zi in z {
        check_dim(gpt.dim(), zi.len())?;
    }
    Ok(())
}

/// Sign-combined rows `a·(z₀ + Σ εᵢ zᵢ) >= 0` over every facet `a` of `V⁺`:
/// returns, per row, `a` and `a·Σ εᵢ zᵢ`.
fn sign_rows<'a>(facets: &'a [Vec<f64>], z: &[Vec<f64>]) -> Vec<(&'a [f64], f64)> {
    let mut rows = Vec::new();
    for e in sign_vectors(z.len()) {
        let mut d = vec![0.0; z[0].len()];
        for (ei, zi) in e.iter().zip(z) {
            for (dc, zc) in d.iter_mut().zip(zi) {
                *dc += ei * zc;
            }
        }
        for a in facets {
            rows.push((a.as_slice(), dot(a, &d)));
        }
    }
    rows
}

/// Searches for `z₀` with `1(z₀) = 1` and `z₀ + Σ εᵢ zᵢ ∈ V⁺` for every sign
/// vector (polyhedral models, `g <= 20`).
pub fn is_witness(gpt: &Gpt, z: &[Vec<f64>], opts: &SolveOptions) -> Result<Option<Vec<f64>>> {
    let facets = gpt.effect_cone_generators()?;
    check_blocks(gpt, z)?;
    let m = gpt.dim();
    let mut p = LpProblem::new();
    let z0 = p.add_vars(m, true);
    p.add_row(gpt.unit().iter().enumerate().map(|(c, &u)| (z0 + c, u)).collect(), Relation::Eq, 1.0);
    for (a, ad) in sign_rows(facets, z) {
        p.add_row(a.iter().enumerate().filter(|(_, &v)| v != 0.0).map(|(c, &v)| (z0 + c, v)).collect(), Relation::Ge, -ad);
    }
    match lp_feasible(&p, opts)? {
        LpCertificate::Feasible { x } => Ok(Some(x[z0..z0 + m].to_vec())),
        LpCertificate::Infeasible { .. } => Ok(None),
    }
}

/// Largest `t` such that `t·z` is a witness, with the certifying `z₀`
/// (`None` for `z = 0`, where every `t` works).
pub fn max_witness_scale(gpt: &Gpt, z: &[Vec<f64>], opts: &SolveOptions) -> Result<Option<(f64, Vec<f64>)>> {
    let facets = gpt.effect_cone_generators()?;
    check_blocks(gpt, z)?;
    let m = gpt.dim();
    let mut p = LpProblem::new();
    let z0 = p.add_vars(m, true);
    let t = p.add_var(false);
    p.add_row(gpt.unit().iter().enumerate().map(|(c, &u)| (z0 + c, u)).collect(), Relation::Eq, 1.0);
    for (a, ad) in sign_rows(facets, z) {
        let mut row: Vec<(usize, f64)> = a.iter().enumerate().filter(|(_, &v)| v != 0.0).map(|(c, &v)| (z0 + c, v)).collect();
        if ad != 0.0 {
            row.push((t, ad));
        }
        p.add_row(row, Relation::Ge, 0.0);
    }
    p.set_objective(vec![(t, -1.0)]);
    match lp_minimize(&p, opts)? {
        LpOutcome::Optimal { x, .. } => Ok(Some((x[t], x[z0..z0 + m].to_vec()))),
        LpOutcome::Unbounded { .. } => Ok(None),
        LpOutcome::Infeasible { .. } => Err(Error::NumericalFailure("witness scaling program reported infeasible".into())),
    }
}

/// The witness gauge `‖z‖_{ρ*} = 1 / max{t : t·z is a witness}`.
pub fn witness_gauge(gpt: &Gpt, z: &[Vec<f64>], opts: &SolveOptions) -> Result<f64> {
    Ok(match max_witness_scale(gpt, z, opts)? {
        Some((t, _)) if t > 0.0 => 1.0 / t,
        Some(_) => f64::INFINITY,
        None => 0.0,
    })
}

/// `Σ ‖zᵢ‖_V > 1 + tol` for a witness; errors with [`Error::NotAWitness`]
/// when no certifying `z₀` exists.
pub fn is_strict(gpt: &Gpt, z: &[Vec<f64>], opts: &SolveOptions) -> Result<bool> {
    if is_witness(gpt, z, opts)?.is_none() {
        return Err(Error::NotAWitness);
    }
    let pi: f64 = z.iter().map(|zi| gpt.base_norm(zi, opts)).sum::<Result<f64>>()?;
    Ok(pi > 1.0 + opts.tol)
}

/// `⟨z, φ̄⟩ = Σ pᵢ(zᵢ)` for blocks `pᵢ = 2fᵢ − 1`.
pub fn evaluate(z: &[Vec<f64>], blocks: &[Vec<f64>]) -> Result<f64> {
    check_dim(blocks.len(), z.len())?;
    let mut s = 0.0;
    for (zi, pi) in z.iter().zip(blocks) {
        check_dim(pi.len(), zi.len())?;
        s += dot(zi, pi);
    }
    Ok(s)
}

/// The witness encoded by the certificate of an incompatible dichotomic
/// family: `zᵢ = −z^{(i)}` for the jewel point `(z₀, z^{(i)})`. It evaluates
/// to `1 − χ > 1` on that family.
pub fn witness_from_certificate(cert: &IncompatibilityCertificate) -> Result<Witness> {
    if cert.jewel.z.iter().any(|zi| zi.len() != 1) {
        return Err(Error::InvalidArgument("witness extraction needs a dichotomic certificate".into()));
    }
    Ok(Witness {
        z0: Some(cert.jewel.z0.clone()),
        z: cert.jewel.z.iter().map(|zi| zi[0].iter().map(|x| -x).collect()).collect(),
    })
}

/// Seeded witness sampling parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessSampler {
    /// Seed of the random stream.
    pub seed: u64,
    /// Number of sampled witnesses.
    pub samples: usize,
}

impl Default for WitnessSampler {
    fn default() -> Self {
        WitnessSampler { seed: 0, samples: 1000 }
    }
}

/// Candidate directions in `V`: for centrally symmetric models the
/// `(0, v̄)` with `v̄` an extreme point of the ball of `V̄` or of its dual;
/// otherwise the normalized generators of `V⁺`; plus random directions.
fn direction_pool(gpt: &Gpt, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let m = gpt.dim();
    let mut pool: Vec<Vec<f64>> = Vec::new();
    if let Some(tag) = gpt.cs_norm() {
        for t in [tag, tag.dual()] {
            if let Some(vs) = t.ball_vertices(gpt.n()) {
                if vs.len() <= 4096 {
                    pool.extend(vs.into_iter().map(|v| std::iter::once(0.0).chain(v).collect()));
                }
            }
        }
    } else if let Ok(cone) = gpt.cone() {
        for g in cone.generators() {
            let u = dot(gpt.unit(), g);
            pool.push(g.iter().map(|x| x / u).collect());
        }
    }
    for _ in 0..(4 * m).max(8) {
        pool.push(sampling::random_direction(rng, m));
    }
    pool
}

/// Scales blocks `z` onto the boundary of the witness set. For centrally
/// symmetric models restricted blocks `(0, z̄ᵢ)` are scaled in closed form
/// (`z₀` the unit-normalized origin of the base), otherwise via the scaling
/// program.
fn scale_to_boundary(gpt: &Gpt, z: Vec<Vec<f64>>, opts: &SolveOptions) -> Result<Option<Witness>> {
    if let Some(tag) = gpt.cs_norm() {
        if z.iter().all(|zi| zi[0] == 0.0) {
            let mut worst: f64 = 0.0;
            for e in sign_vectors(z.len()) {
                let mut d = vec![0.0; gpt.n()];
                for (ei, zi) in e.iter().zip(&z) {
                    for (dc, zc) in d.iter_mut().zip(&zi[1..]) {
                        *dc += ei * zc;
                    }
                }
                worst = worst.max(tag.eval(&d));
            }
            if worst <= 0.0 {
                return Ok(None);
            }
            let mut z0 = vec![0.0; gpt.dim()];
            z0[0] = 1.0;
            return Ok(Some(Witness { z0: Some(z0), z: z.into_iter().map(|zi| zi.into_iter().map(|x| x / worst).collect()).collect() }));
        }
    }
    Ok(max_witness_scale(gpt, &z, opts)?.map(|(t, z0)| Witness {
        z0: Some(z0),
        z: z.into_iter().map(|zi| zi.into_iter().map(|x| t * x).collect()).collect(),
    }))
}

/// Samples witnesses on the boundary of the witness set: the first is the
/// coordinate tuple, the rest draw each block from a pool of extreme and
/// random directions.
pub fn sample_witnesses(gpt: &Gpt, g: usize, sampler: &WitnessSampler, opts: &SolveOptions) -> Result<Vec<Witness>> {
    if g == 0 || g > MAX_WITNESS_G {
        return Err(Error::LimitExceeded { what: "witness sign enumeration g", value: g, limit: MAX_WITNESS_G });
    }
    let mut rng = sampling::rng(sampler.seed);
    let pool = direction_pool(gpt, &mut rng);
    let m = gpt.dim();
    let mut out = Vec::with_capacity(sampler.samples);
    // coordinate tuple: zᵢ along the (i+1)-th coordinate of V
    let coord: Vec<Vec<f64>> = (0..g)
        .map(|i| {
            let mut e = vec![0.0; m];
            e[1 + i % (m - 1).max(1)] = 1.0;
            e
        })
        .collect();
    let mut candidates = vec![coord];
    while out.len() < sampler.samples {
        let z = match candidates.pop() {
            Some(z) => z,
            None => (0..g).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect(),
        };
        if let Some(w) = scale_to_boundary(gpt, z, opts)? {
            out.push(w);
        } else if out.is_empty() && sampler.samples > 0 && pool.is_empty() {
            break;
        }
    }
    Ok(out)
}

/// Outcome of the blind-region test.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlindRegionResult {
    /// Exact answer when available, otherwise the sampled answer.
    pub member: bool,
    /// Answer through the compatibility region (exact).
    pub exact: Option<bool>,
    /// Answer of the sampled witness test (a `false` is a certificate).
    pub sampled: Option<bool>,
    /// Number of witnesses sampled.
    pub samples: usize,
    /// A witness with `Σ sᵢ ‖zᵢ‖_V > 1`, if one was found.
    pub violating: Option<Witness>,
}

/// `s ∈ Π(g; V, V⁺)`. The exact route uses the compatibility region (closed
/// forms for hypercubes, balls with `g <= n` and classical models, vertex
/// enumeration for other polyhedral models within
/// [`VERTEX_SUBSET_CAP`] tuples); the sampling route tests
/// `Σ sᵢ ‖zᵢ‖_V <= 1` over sampled witnesses. Both are reported.
pub fn blind_region_member(gpt: &Gpt, s: &[f64], sampler: Option<&WitnessSampler>, opts: &SolveOptions) -> Result<BlindRegionResult> {
    let g = s.len();
    if g == 0 {
        return Err(Error::InvalidArgument("s must be nonempty".into()));
    }
    if let Some(bad) = s.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::InvalidArgument(format!("noise parameter {bad} outside [0, 1]")));
    }
    let exact = match gpt.kind() {
        ModelKind::Classical => Some(true),
        ModelKind::Hypercube => Some(region_hypercube(g, gpt.n(), s)?),
        ModelKind::Ball => {
            let r = region_ball(g, gpt.n(), s)?;
            if r.exact || r.member {
                Some(r.member)
            } else {
                None
            }
        }
        _ => {
            let region = ModelRegion::new(gpt, g)?;
            if region.tuple_count() <= VERTEX_SUBSET_CAP {
                Some(region.contains(s, opts)?)
            } else {
                None
            }
        }
    };
    let (sampled, samples, violating) = match sampler {
        Some(sm) if g <= MAX_WITNESS_G => {
            let ws = sample_witnesses(gpt, g, sm, opts)?;
            let mut violating = None;
            for w in &ws {
                let mut v = 0.0;
                for (si, zi) in s.iter().zip(&w.z) {
                    v += si * gpt.base_norm(zi, opts)?;
                }
                if v > 1.0 + opts.tol {
                    violating = Some(w.clone());
                    break;
                }
            }
            (Some(violating.is_none()), ws.len(), violating)
        }
        _ => (None, 0, None),
    };
    let member = match (exact, sampled) {
        (Some(e), _) => e,
        (None, Some(sm)) => sm,
        (None, None) => {
            return Err(Error::LimitExceeded { what: "blind region without sampler: vertex tuples", value: usize::MAX, limit: VERTEX_SUBSET_CAP })
        }
    };
    Ok(BlindRegionResult { member, exact, sampled, samples, violating })
}

/// `s ∈ Π′` for a centrally symmetric polytope model: `Σ sᵢ ‖z̄ᵢ‖ <= ‖z̄‖_ε`
/// for all `z̄` in `ℓ₁^g ⊗ V̄`, where `‖z̄‖_ε = max_ε ‖Σ εᵢ z̄ᵢ‖`. Decided by
/// one program per tuple of dual-ball vertices (up to sign).
pub fn pi_prime_member(gpt: &Gpt, s: &[f64], opts: &SolveOptions) -> Result<bool> {
    let tag = gpt.cs_norm().ok_or_else(|| Error::WrongModel { required: "centrally symmetric", found: gpt.name() })?;
    let n = gpt.n();
    let g = s.len();
    if g == 0 || g > MAX_WITNESS_G {
        return Err(Error::LimitExceeded { what: "witness sign enumeration g", value: g, limit: MAX_WITNESS_G });
    }
    let dual_all = tag.dual().ball_vertices(n).ok_or_else(|| Error::NonPolyhedral(gpt.name()))?;
    // ‖x‖ = max_h h·x over vertices h of the dual ball; signs of αᵢ are
    // irrelevant because flipping z̄ᵢ preserves the constraint set
    let half: Vec<&Vec<f64>> = dual_all.iter().filter(|a| a.iter().find(|x| **x != 0.0).is_some_and(|x| *x > 0.0)).collect();
    let tuples = half.len().checked_pow(g as u32).filter(|&t| t <= VERTEX_SUBSET_CAP).ok_or(Error::LimitExceeded {
        what: "dual-vertex tuples",
        value: usize::MAX,
        limit: VERTEX_SUBSET_CAP,
    })?;
    let signs = sign_vectors(g);
    for t in 0..tuples {
        let mut idx = t;
        let mut p = LpProblem::new();
        let zs = p.add_vars(g * n, true);
        let mut obj = Vec::new();
        for i in 0..g {
            let a = half[idx % half.len()];
            idx /= half.len();
            for c in 0..n {
                if a[c] != 0.0 && s[i] != 0.0 {
                    obj.push((zs + i * n + c, -s[i] * a[c]));
                }
            }
        }
        for e in &signs {
            for h in &dual_all {
                let mut row = Vec::new();
                for (i, ei) in e.iter().enumerate() {
                    for c in 0..n {
                        if h[c] != 0.0 {
                            row.push((zs + i * n + c, ei * h[c]));
                        }
                    }
                }
                p.add_row(row, Relation::Le, 1.0);
            }
        }
        p.set_objective(obj);
        match lp_minimize(&p, opts)? {
            LpOutcome::Optimal { value, .. } => {
                if -value > 1.0 + opts.tol.max(1e-9) {
                    return Ok(false);
                }
            }
            other => return Err(Error::NumericalFailure(format!("blind-region program did not reach an optimum: {other:?}"))),
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compat::is_compatible;
    use crate::gpt::MeasurementFamily;
    use crate::polysimplex::effect_tensor;

    fn sharp_pair() -> (Gpt, MeasurementFamily) {
        let hc = Gpt::make_hypercube(2).unwrap();
        let fam = MeasurementFamily::dichotomic(&[vec![0.5, 0.5, 0.0], vec![0.5, 0.0, 0.5]], hc.unit()).unwrap();
        (hc, fam)
    }

    #[test]
    fn zero_is_a_witness_and_not_strict() {
        let hc = Gpt::make_hypercube(2).unwrap();
        let z = vec![vec![0.0; 3]; 2];
        let opts = SolveOptions::default();
        let z0 = is_witness(&hc, &z, &opts).unwrap().unwrap();
        assert!((dot(hc.unit(), &z0) - 1.0).abs() < 1e-9);
        assert!(!is_strict(&hc, &z, &opts).unwrap());
    }

    #[test]
    fn non_witness_rejected() {
        let hc = Gpt::make_hypercube(2).unwrap();
        let z = vec![vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 2.0]];
        assert!(matches!(is_strict(&hc, &z, &SolveOptions::default()), Err(Error::NotAWitness)));
    }

    #[test]
    fn certificate_witness_detects_sharp_pair() {
        let (hc, fam) = sharp_pair();
        let opts = SolveOptions::default();
        let res = is_compatible(&hc, &fam, &opts).unwrap();
        let w = witness_from_certificate(res.certificate.as_ref().unwrap()).unwrap();
        assert!(is_witness(&hc, &w.z, &opts).unwrap().is_some());
        assert!(is_strict(&hc, &w.z, &opts).unwrap());
        let blocks = effect_tensor(&hc, &fam).unwrap().dichotomic_blocks().unwrap();
        assert!(evaluate(&w.z, &blocks).unwrap() > 1.0 + 1e-6);
    }

    #[test]
    fn evaluate_trivial_effects_is_zero() {
        let z = vec![vec![0.3, -0.2, 0.1]];
        assert_eq!(evaluate(&z, &[vec![0.0; 3]]).unwrap(), 0.0);
        assert!(matches!(evaluate(&z, &[vec![0.0; 2]]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn blind_region_hypercube() {
        let hc = Gpt::make_hypercube(2).unwrap();
        let opts = SolveOptions::default();
        let sm = WitnessSampler { seed: 1, samples: 50 };
        let r = blind_region_member(&hc, &[0.0, 0.0], Some(&sm), &opts).unwrap();
        assert!(r.member && r.sampled == Some(true));
        let r = blind_region_member(&hc, &[0.5, 0.5], Some(&sm), &opts).unwrap();
        assert!(r.member && r.exact == Some(true) && r.sampled == Some(true));
        let r = blind_region_member(&hc, &[0.6, 0.6], Some(&sm), &opts).unwrap();
        assert!(!r.member && r.sampled == Some(false) && r.violating.is_some());
    }

    #[test]
    fn pi_prime_matches_hypercube_region() {
        let hc = Gpt::make_hypercube(2).unwrap();
        let opts = SolveOptions::default();
        assert!(pi_prime_member(&hc, &[0.5, 0.5], &opts).unwrap());
        assert!(!pi_prime_member(&hc, &[0.55, 0.5], &opts).unwrap());
        assert!(pi_prime_member(&hc, &[1.0, 0.0], &opts).unwrap());
    }

    #[test]
    fn gauge_of_restricted_witness_is_injective_norm() {
        let hc = Gpt::make_hypercube(2).unwrap();
        let z = vec![vec![0.0, 0.7, 0.1], vec![0.0, -0.2, 0.4]];
        let gauge = witness_gauge(&hc, &z, &SolveOptions::default()).unwrap();
        // max over signs of ‖z̄₁ ± z̄₂‖∞ = max(0.9, 0.5) ... = 0.9
        assert!((gauge - 0.9).abs() < 1e-9);
    }
}
