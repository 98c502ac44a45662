//! Subcommand implementations. Each returns a JSON report and an exit code.

use crate::Common;
use gpt_compat::compat::{
    gamma_of_dichotomic_family, is_compatible_via_projection, GammaSearch, ModelRegion,
};
use gpt_compat::gpt::{FamilyJson, ModelJson};
use gpt_compat::tensor_norms::{
    gamma_crosspolytope, h_function, one_summing, region_ball, rho_norm_detailed,
};
use gpt_compat::witness::{
    blind_region_member, sample_witnesses, witness_from_certificate, WitnessSampler,
};
use gpt_compat::{
    euclidean_pair_gamma, evaluate, gamma_model, gamma_of_family, is_compatible, is_compatible_via_extension,
    is_witness, jewel_inclusion, region_membership, EffectTensor, Error, Gpt, MeasurementFamily, ModelKind,
    SolveOptions, TensorElement,
};
use serde_json::{json, Value};
use std::fmt;
use std::io::Read;

/// A failed command with its exit code.
#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    fn numerical(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into() }
    }

    /// Process exit code.
    pub fn code(&self) -> u8 {
        self.code
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            CliError::numerical(e.to_string())
        } else {
            CliError::input(e.to_string())
        }
    }
}

/// A report and the exit code to finish with.
pub struct Outcome {
    pub report: Value,
    pub code: u8,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, code: 0 }
    }
}

type CliResult = Result<Outcome, CliError>;

/// Decision procedure for `compat`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Route {
    /// Joint-measurement feasibility.
    Joint,
    /// Positive extension of the effect map.
    Extension,
    /// Positive extension through the explicit projection onto the span.
    Projection,
    /// Generalized-spectrahedron inclusion.
    Jewel,
    /// All routes, cross-checked.
    All,
}

/// Curve tabulated by `curve`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Curve {
    /// `f(g)`, the cross-polytope degree.
    F,
    /// `h(n) = 1/π₁(ℓ₂ⁿ)`.
    H,
}

fn read_source(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::input(format!("reading stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::input(format!("reading {path}: {e}")))
    }
}

fn builtin_model(spec: &str) -> Option<Result<Gpt, CliError>> {
    let (kind, n) = spec.split_once(':')?;
    let n: usize = match n.parse() {
        Ok(n) => n,
        Err(_) => return Some(Err(CliError::input(format!("bad model size in `{spec}`")))),
    };
    let m = match kind {
        "classical" => Gpt::make_classical(n),
        "hypercube" => Gpt::make_hypercube(n),
        "crosspolytope" => Gpt::make_crosspolytope(n),
        "ball" => Gpt::make_ball(n),
        _ => return None,
    };
    Some(m.map_err(CliError::from))
}

fn load_model(c: &Common) -> Result<Gpt, CliError> {
    let spec = c.model.as_deref().ok_or_else(|| CliError::input("--model is required"))?;
    if let Some(m) = builtin_model(spec) {
        return m;
    }
    let j: ModelJson = serde_json::from_str(&read_source(spec)?).map_err(|e| CliError::input(format!("model: {e}")))?;
    Ok(Gpt::from_json(j, c.tol)?)
}

fn load_family(c: &Common) -> Result<Option<MeasurementFamily>, CliError> {
    let Some(path) = c.measurements.as_deref() else { return Ok(None) };
    let j: FamilyJson =
        serde_json::from_str(&read_source(path)?).map_err(|e| CliError::input(format!("measurements: {e}")))?;
    Ok(Some(MeasurementFamily::from_json(j)?))
}

fn require_family(c: &Common) -> Result<MeasurementFamily, CliError> {
    load_family(c)?.ok_or_else(|| CliError::input("--measurements is required"))
}

fn opts(c: &Common) -> SolveOptions {
    SolveOptions { tol: c.tol, exact: c.exact, max_pivots: c.max_pivots }
}

fn to_value<T: serde::Serialize>(x: &T) -> Result<Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::numerical(format!("serialising report: {e}")))
}

/// `validate`: model summary and family validity (exit 2 if invalid).
pub fn validate(c: &Common) -> CliResult {
    let gpt = load_model(c)?;
    let mut report = json!({
        "model": gpt.name(),
        "dim": gpt.dim(),
        "polyhedral": gpt.is_polyhedral(),
    });
    if let Ok(cone) = gpt.cone() {
        report["generators"] = json!(cone.generators().len());
        report["facets"] = json!(cone.facets().map(<[Vec<f64>]>::len));
    }
    let mut code = 0;
    if let Some(fam) = load_family(c)? {
        let valid = gpt.validate_family(&fam, &opts(c));
        report["family"] = json!({"g": fam.g(), "k": fam.k(), "valid": valid});
        if !valid {
            code = 2;
        }
    }
    Ok(Outcome { report, code })
}

/// `compat`: decides compatibility; with `--route all` every route is run
/// and disagreement is a numerical failure.
pub fn compat(c: &Common, route: Route) -> CliResult {
    let gpt = load_model(c)?;
    let fam = require_family(c)?;
    let o = opts(c);
    let mut routes = serde_json::Map::new();
    let mut primary = None;
    if matches!(route, Route::Joint | Route::All) {
        let r = is_compatible(&gpt, &fam, &o)?;
        routes.insert("joint".into(), json!(r.compatible));
        primary = Some(r);
    }
    if matches!(route, Route::Extension | Route::All) {
        let r = is_compatible_via_extension(&gpt, &fam, &o)?;
        routes.insert("extension".into(), json!(r.compatible));
        primary.get_or_insert(r);
    }
    if route == Route::Projection {
        let r = is_compatible_via_projection(&gpt, &fam, &o)?;
        routes.insert("projection".into(), json!(r.compatible));
        primary.get_or_insert(r);
    }
    if matches!(route, Route::Jewel | Route::All) {
        routes.insert("jewel".into(), json!(jewel_inclusion(&gpt, &fam, None, &o)?));
    }
    let answers: Vec<bool> = routes.values().filter_map(Value::as_bool).collect();
    if answers.windows(2).any(|w| w[0] != w[1]) {
        return Err(CliError::numerical(format!("decision routes disagree: {}", Value::Object(routes))));
    }
    let compatible = answers[0];
    let mut report = json!({ "compatible": compatible, "routes": Value::Object(routes) });
    if let Some(r) = primary {
        if let Some(joint) = &r.joint {
            report["joint"] = json!(joint);
        }
        if let Some(cert) = &r.certificate {
            let mut cj = json!({
                "chi_value": cert.chi_value,
                "jewel": {"z0": cert.jewel.z0, "z": cert.jewel.z},
            });
            if fam.is_dichotomic() {
                let w = witness_from_certificate(cert)?;
                cj["witness"] = to_value(&w.to_json(&gpt, &o)?)?;
            }
            report["certificate"] = cj;
        }
    }
    Ok(Outcome::ok(report))
}

/// `gamma`: degree of a family (bisection, plus the ρ route for dichotomic
/// families), or an interval for a model with `--k`.
pub fn gamma(c: &Common, k: Option<&[usize]>) -> CliResult {
    let gpt = load_model(c)?;
    let o = opts(c);
    if let Some(k) = k {
        let search = GammaSearch { budget: c.budget, seed: c.seed, bisect_tol: c.bisect_tol };
        let iv = gamma_model(&gpt, k, &search, &o)?;
        let mut report = to_value(&iv)?;
        report["model"] = json!(gpt.name());
        report["k"] = json!(k);
        return Ok(Outcome::ok(report));
    }
    let fam = require_family(c)?;
    if gpt.kind() == ModelKind::Ball {
        // two unbiased effects fᵢ = ½(1 + (0, aᵢ))
        let fs = fam.first_effects();
        let unbiased = fam.is_dichotomic() && fs.len() == 2 && fs.iter().all(|f| (f[0] - 0.5).abs() <= c.tol);
        if !unbiased {
            return Err(CliError::input("ball models support two unbiased dichotomic effects only"));
        }
        let a: Vec<f64> = fs[0][1..].iter().map(|x| 2.0 * x).collect();
        let b: Vec<f64> = fs[1][1..].iter().map(|x| 2.0 * x).collect();
        let g = euclidean_pair_gamma(&gpt, &a, &b)?;
        return Ok(Outcome::ok(json!({"gamma": g, "method": "pair formula"})));
    }
    let g = gamma_of_family(&gpt, &fam, c.bisect_tol, &o)?;
    let mut report = json!({"gamma": g, "method": "bisection", "bisect_tol": c.bisect_tol});
    if fam.is_dichotomic() {
        let gr = gamma_of_dichotomic_family(&gpt, &fam, &o)?;
        if (gr - g).abs() > c.bisect_tol.max(1e-7) * 2.0 {
            return Err(CliError::numerical(format!("bisection {g} and rho-norm {gr} disagree")));
        }
        report["gamma_rho"] = json!(gr);
    }
    Ok(Outcome::ok(report))
}

fn grid_points(g: usize, steps: usize) -> Vec<Vec<f64>> {
    let mut pts = vec![Vec::new()];
    for _ in 0..g {
        pts = pts
            .into_iter()
            .flat_map(|p: Vec<f64>| {
                (0..=steps).map(move |i| {
                    let mut q = p.clone();
                    q.push(i as f64 / steps as f64);
                    q
                })
            })
            .collect();
    }
    pts
}

/// `region`: membership of `--s` (or a `--grid`) in the region of a family,
/// or of the model when no family is given.
pub fn region(c: &Common, s: Option<&[f64]>, grid: Option<usize>, g: Option<usize>) -> CliResult {
    let gpt = load_model(c)?;
    let fam = load_family(c)?;
    let o = opts(c);
    let g = match (&fam, s, g) {
        (Some(f), _, _) => f.g(),
        (None, Some(s), _) => s.len(),
        (None, None, Some(g)) => g,
        _ => return Err(CliError::input("region needs --measurements, --s or --g")),
    };
    let points = match (s, grid) {
        (Some(s), None) => vec![s.to_vec()],
        (None, Some(steps)) if steps > 0 => grid_points(g, steps),
        _ => return Err(CliError::input("give exactly one of --s and --grid (with at least one step)")),
    };
    let sampler = WitnessSampler { seed: c.seed, samples: c.budget };
    let region = match (&fam, gpt.kind()) {
        (None, ModelKind::Custom) => Some(ModelRegion::new(&gpt, g)?),
        _ => None,
    };
    let mut rows = Vec::with_capacity(points.len());
    for p in &points {
        let row = match &fam {
            Some(f) => json!({"s": p, "member": region_membership(&gpt, f, p, &o)?}),
            None => match &region {
                Some(r) => json!({"s": p, "member": r.contains(p, &o)?, "route": "vertex tuples"}),
                None => {
                    let samp = if points.len() == 1 { Some(&sampler) } else { None };
                    let r = blind_region_member(&gpt, p, samp, &o)?;
                    json!({"s": p, "member": r.member, "exact_route": r.exact, "sampled_route": r.sampled})
                }
            },
        };
        rows.push(row);
    }
    if rows.len() == 1 && grid.is_none() {
        let mut report = json!({"model": gpt.name()});
        if let (Some(Value::Object(row)), Value::Object(out)) = (rows.pop(), &mut report) {
            out.extend(row);
        }
        return Ok(Outcome::ok(report));
    }
    Ok(Outcome::ok(json!({"model": gpt.name(), "g": g, "rows": rows})))
}

/// `rho`: both ρ-norm programs for a dichotomic family.
pub fn rho(c: &Common) -> CliResult {
    let gpt = load_model(c)?;
    let fam = require_family(c)?;
    let o = opts(c);
    gpt.require_valid_family(&fam, &o)?;
    let t = EffectTensor::from_family_unchecked(&gpt, &fam)?;
    let sol = rho_norm_detailed(&gpt, &TensorElement::new(t.dichotomic_blocks()?), &o)?;
    let gamma = if sol.value <= 1.0 { 1.0 } else { 1.0 / sol.value };
    Ok(Outcome::ok(json!({
        "rho": sol.value,
        "primal": sol.primal,
        "dual": sol.dual,
        "gamma": gamma,
        "y0": sol.y0,
        "y": sol.y,
    })))
}

/// `witness`: the certificate witness of an incompatible dichotomic family,
/// or the largest value of sampled witnesses on a compatible one.
pub fn witness(c: &Common, samples: usize) -> CliResult {
    let gpt = load_model(c)?;
    let fam = require_family(c)?;
    let o = opts(c);
    if !fam.is_dichotomic() {
        return Err(CliError::input("witnesses are defined for dichotomic families"));
    }
    let blocks = EffectTensor::from_family_unchecked(&gpt, &fam)?.dichotomic_blocks()?;
    let r = is_compatible(&gpt, &fam, &o)?;
    match &r.certificate {
        Some(cert) => {
            let w = witness_from_certificate(cert)?;
            let value = evaluate(&w.z, &blocks)?;
            let certified = is_witness(&gpt, &w.z, &o)?.is_some();
            Ok(Outcome::ok(json!({
                "compatible": false,
                "witness": to_value(&w.to_json(&gpt, &o)?)?,
                "value": value,
                "is_witness": certified,
            })))
        }
        None => {
            let ws = sample_witnesses(&gpt, fam.g(), &WitnessSampler { seed: c.seed, samples }, &o)?;
            let mut max = f64::NEG_INFINITY;
            for w in &ws {
                max = max.max(evaluate(&w.z, &blocks)?);
            }
            Ok(Outcome::ok(json!({
                "compatible": true,
                "samples": ws.len(),
                "max_value": max,
                "bound_respected": max <= 1.0 + 1e-8,
            })))
        }
    }
}

struct Row {
    name: String,
    computed: f64,
    reference: f64,
    tol: Option<f64>,
    note: &'static str,
}

impl Row {
    fn checked(name: &str, computed: f64, reference: f64, tol: f64) -> Self {
        Row { name: name.into(), computed, reference, tol: Some(tol), note: "" }
    }

    fn reference(name: &str, reference: f64) -> Self {
        Row { name: name.into(), computed: reference, reference, tol: None, note: "reference, not recomputed" }
    }

    fn status(&self) -> &'static str {
        match self.tol {
            None => "REF",
            Some(t) if (self.computed - self.reference).abs() <= t => "PASS",
            Some(_) => "FAIL",
        }
    }
}

fn sharp_pair(gpt: &Gpt) -> Result<MeasurementFamily, CliError> {
    let mut e1 = vec![0.5; 1];
    e1.extend(vec![0.0; gpt.n()]);
    let mut e2 = e1.clone();
    e1[1] = 0.5;
    e2[2] = 0.5;
    Ok(MeasurementFamily::dichotomic(&[e1, e2], gpt.unit())?)
}

fn degree_upper(gpt: &Gpt, g: usize, c: &Common, o: &SolveOptions) -> Result<f64, CliError> {
    let search = GammaSearch { budget: c.budget, seed: c.seed, bisect_tol: c.bisect_tol };
    Ok(gamma_model(gpt, &vec![2; g], &search, o)?.upper)
}

/// `reproduce`: recomputes the closed-form constants of the theory with the
/// LP machinery and compares; exit 1 on any mismatch.
pub fn reproduce(c: &Common) -> CliResult {
    let o = opts(c);
    let b = |x: bool| if x { 1.0 } else { 0.0 };
    let hc2 = Gpt::make_hypercube(2)?;
    let cp2 = Gpt::make_crosspolytope(2)?;
    let cp4 = Gpt::make_crosspolytope(4)?;
    let ball3 = Gpt::make_ball(3)?;
    let region3 = ModelRegion::new(&hc2, 3)?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let linf_err = (1..=10).map(|n| one_summing("linf", n).map(|v| (v - n as f64).abs())).try_fold(0.0_f64, |m, v| v.map(|v| m.max(v)))?;
    let rows = vec![
        Row::checked("gamma(f), hypercube n=2 sharp pair (bisection)", gamma_of_family(&hc2, &sharp_pair(&hc2)?, c.bisect_tol, &o)?, 0.5, 1e-6),
        Row::checked("gamma(3, hypercube n=2)", degree_upper(&hc2, 3, c, &o)?, 0.5, 1e-6),
        Row::checked("hypercube diagonal (1/2,1/2,1/2) in region(3; hypercube n=2)", b(region3.contains(&[0.5; 3], &o)?), 1.0, 0.0),
        Row::checked("hypercube diagonal (0.51,0.51,0.51) in region(3; hypercube n=2)", b(region3.contains(&[0.51; 3], &o)?), 0.0, 0.0),
        Row::checked("gamma(e1,e2), ball n=3 (pair formula)", euclidean_pair_gamma(&ball3, &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0])?, r, 1e-12),
        Row::checked("QC_2 boundary (1/sqrt2,1/sqrt2) in region_ball(2; n=3)", b(region_ball(2, 3, &[r, r])?.member), 1.0, 0.0),
        Row::checked("QC_3 boundary (1/sqrt3,...) in region_ball(3; n=3)", b(region_ball(3, 3, &[1.0 / 3f64.sqrt(); 3])?.member), 1.0, 0.0),
        Row::checked("f(2)", gamma_crosspolytope(2), 0.5, 1e-15),
        Row::checked("f(3)", gamma_crosspolytope(3), 0.5, 1e-15),
        Row::checked("f(4)", gamma_crosspolytope(4), 0.375, 1e-15),
        Row::checked("f(5)", gamma_crosspolytope(5), 0.375, 1e-15),
        Row::checked("f(6)", gamma_crosspolytope(6), 0.3125, 1e-15),
        Row::checked("gamma(2, crosspolytope n=2) (search)", degree_upper(&cp2, 2, c, &o)?, gamma_crosspolytope(2), 1e-6),
        Row::checked("gamma(3, crosspolytope n=4) (search)", degree_upper(&cp4, 3, c, &o)?, gamma_crosspolytope(3), 1e-4),
        Row::checked("pi1(l2,3)", one_summing("l2", 3)?, 2.0, 1e-12),
        Row::checked("pi1(l2,2)", one_summing("l2", 2)?, std::f64::consts::FRAC_PI_2, 1e-12),
        Row::checked("pi1(l1,2)", one_summing("l1", 2)?, 2.0, 1e-12),
        Row::checked("max |pi1(linf,n) - n|, n <= 10", linf_err, 0.0, 0.0),
        Row::checked("h(3)", h_function(3), 0.5, 1e-12),
        Row::reference("gamma(g, qubit) lower, g >= 4", 0.5),
        Row::reference("gamma(g, qubit) upper, g >= 4", 1.0 / 3f64.sqrt()),
    ];
    let failed = rows.iter().any(|r| r.status() == "FAIL");
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "name": r.name,
                "computed": r.computed,
                "reference": r.reference,
                "tolerance": r.tol,
                "status": r.status(),
                "note": r.note,
            })
        })
        .collect();
    Ok(Outcome { report: json!({ "rows": rows }), code: if failed { 1 } else { 0 } })
}

/// `curve`: `f(g)` or `h(n)` for `1..=max`, for external plotting.
pub fn curve(which: Curve, max: usize) -> CliResult {
    let rows: Vec<Value> = (1..=max)
        .map(|x| match which {
            Curve::F => json!({"g": x, "f": gamma_crosspolytope(x)}),
            Curve::H => json!({"n": x, "h": h_function(x)}),
        })
        .collect();
    Ok(Outcome::ok(json!({ "rows": rows })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_status() {
        assert_eq!(Row::checked("a", 0.5, 0.5, 0.0).status(), "PASS");
        assert_eq!(Row::checked("a", 0.5 + 2e-6, 0.5, 1e-6).status(), "FAIL");
        assert_eq!(Row::reference("a", 0.5).status(), "REF");
    }

    #[test]
    fn grid_has_all_points() {
        let pts = grid_points(3, 2);
        assert_eq!(pts.len(), 27);
        assert_eq!(pts[5], vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn builtin_specs() {
        assert!(builtin_model("hypercube:2").unwrap().is_ok());
        assert!(builtin_model("hypercube:x").unwrap().is_err());
        assert!(builtin_model("models/a.json").is_none());
    }
}
