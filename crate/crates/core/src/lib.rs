//! Hartigan–Wong and Lloyd local search for k-means.
//!
//! The algorithms are generic over [`Scalar`], implemented for `f64`, `f32`
//! and the exact [`Rational`]. Exact mode accepts a move iff its gain is
//! strictly positive; float mode requires the gain to exceed
//! `1e-12 * max(1, Φ)`.
//!
//! [`lower_bound`] builds the family of line instances on which a fixed
//! sequence of improving single-point moves has exponential length and
//! replays it in exact arithmetic. [`smoothed`] perturbs inputs with
//! Gaussian noise and measures iteration counts.

pub mod error;
pub mod geometry;
pub mod io;
pub mod lower_bound;
pub mod scalar;
pub mod search;
pub mod smoothed;

pub use error::{Error, Result};
pub use geometry::{
    center_of_ids, center_of_mass, cluster_potential, gain_with_centers, join_cost, merge_delta,
    move_gain, potential, set_move_gain, set_potential, Clustering, PointSet,
};
pub use lower_bound::{
    appendix_inequalities, build_instance, scripted_sequence, verify_sequence, GadgetInstance,
    GadgetState, VerificationReport,
};
pub use scalar::{ratio, rational, Rational, Scalar};
pub use search::{
    default_max_iters, hw_run, hw_step, init_clustering, is_hw_local_opt, is_lloyd_local_opt,
    lloyd_run, InitStrategy, Move, PivotRule, ScriptedMove, Termination, Trace,
};

pub type ExactPoints = PointSet<Rational>;
pub type FloatPoints = PointSet<f64>;
pub type Float32Points = PointSet<f32>;
pub type ExactClustering = Clustering<Rational>;
pub type FloatClustering = Clustering<f64>;
pub type Float32Clustering = Clustering<f32>;
pub type ExactTrace = Trace<Rational>;
pub type FloatTrace = Trace<f64>;
