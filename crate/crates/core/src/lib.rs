//! Jensen gaps of differentiable convex functions, their converse bounds,
//! and certificates for weighted means, Shannon entropy and Rényi entropy.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`convex`] | registry of convex functions, analytic and numeric gradients |
//! | [`engine`] | Jensen gap and the chain of upper bounds |
//! | [`closed_bounds`] | closed-form scalar bounds on `[m, M]` |
//! | [`means`] | arithmetic/geometric/harmonic means and their certificates |
//! | [`info`] | entropies, informational energy and their certificates |
//! | [`harness`] | seeded random verification suite with replayable failures |
//! | [`cli`] | the `jensen` command-line front end |

// `!(x > 0.0)` is deliberate: it rejects NaN along with the wrong sign.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// reference constants keep the digits they were computed with
#![allow(clippy::excessive_precision)]

pub mod certificate;
pub mod cli;
pub mod closed_bounds;
pub mod convex;
pub mod engine;
pub mod error;
pub mod harness;
pub mod info;
pub mod means;
pub mod numeric;

pub use certificate::Certificate;
pub use closed_bounds::Endpoints;
pub use convex::{ConvexFunction, FunctionSpec};
pub use engine::{BoundChainReport, BoxBounds, CoordinateBounds, GradientBounds, WeightedSample};
pub use error::{Error, Result};
pub use info::{DiscreteDistribution, RenyiOrder};
pub use means::PositiveSample;
pub use numeric::Tolerance;
