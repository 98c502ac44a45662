//! Measurement compatibility in general probabilistic theories.
//!
//! The crate models finite-dimensional GPTs `(V, V⁺, 1)` with polyhedral or
//! centrally symmetric cones and decides whether a family of measurements is
//! compatible, i.e. has a joint measurement. Three equivalent decision
//! procedures are provided — joint-measurement feasibility, positive map
//! extension, and generalized-spectrahedron inclusion — together with
//! compatibility regions and degrees, tensor crossnorms, closed-form
//! reference values and incompatibility witnesses extracted from Farkas
//! certificates.
//!
//! Module overview:
//!
//! * [`cones`] — polyhedral cones, duality, min/max tensor products.
//! * [`lp`] — two-phase simplex with Farkas certificates (float or exact).
//! * [`gpt`] — models, norms, effects and measurements.
//! * [`polysimplex`] — the outcome space `E_k`, its bases and projection.
//! * [`compat`] — compatibility decisions, regions and degrees.
//! * [`spectra`] — jewel/diamond membership and inclusion.
//! * [`tensor_norms`] — injective, projective and ρ crossnorms; closed forms.
//! * [`witness`] — incompatibility witnesses.
//! * [`sampling`] — seeded random models objects for searches and tests.

#![allow(clippy::needless_range_loop)]

pub mod compat;
pub mod cones;
pub mod error;
pub mod gpt;
pub mod json;
pub mod linalg;
pub mod lp;
pub mod polysimplex;
pub mod sampling;
pub mod scalar;
pub mod spectra;
pub mod tensor_norms;
pub mod witness;

pub use compat::{
    euclidean_pair_gamma, gamma_model, gamma_of_family, is_compatible, is_compatible_via_extension,
    region_membership, symmetrization_lift, CompatResult, GammaInterval,
};
pub use cones::{dual_cone, max_tensor_member, member, min_tensor, CanonicalTensor, MapTensor, PolyCone};
pub use error::{Error, Result};
pub use gpt::{Gpt, Measurement, MeasurementFamily, ModelKind, NormTag};
pub use lp::{lp_feasible, lp_minimize, LpCertificate, LpOutcome, LpProblem, Relation, SolveOptions};
pub use polysimplex::{build_outcome_space, EffectTensor, OutcomeSpace};
pub use spectra::{df_member, jewel_inclusion, jewel_member, SpectraPoint};
pub use tensor_norms::{injective_norm_l1, projective_norm_l1, rho_norm, TensorElement};
pub use witness::{evaluate, is_strict, is_witness, Witness};
