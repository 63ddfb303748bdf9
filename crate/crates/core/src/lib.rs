//! Sparse first-order solvers for generalized linear programs (GLP)
//! posed as bilinear saddle-point problems.
//!
//! The crate provides:
//!
//! - CSR sparse kernels with row-block partitioning and per-block operator
//!   norms ([`sparse`], [`partition`]);
//! - the GLP problem model with separable proximal regularizers, Lagrangian
//!   gap evaluation and the composite LP residual metric ([`problem`]);
//! - a coordinate primal-dual solver built on dual averaging with implicit
//!   variance reduction, in a dense-bookkeeping variant ([`clvr_dense`]) and
//!   a lazy-update variant whose per-iteration cost is proportional to the
//!   nonzeros of the sampled row block ([`clvr_lazy`]);
//! - an adaptive restart controller that converts the sublinear ergodic rate
//!   into empirically linear convergence on standard-form LPs ([`restart`]);
//! - a deterministic primal-dual hybrid gradient baseline ([`pdhg`]);
//! - compilers from distributionally robust optimization problems
//!   (Wasserstein and f-divergence/CVaR ambiguity sets, hinge loss) into
//!   standard-form LPs ([`dro`]);
//! - LibSVM ingestion and a plain-text problem format ([`io`]).
//!
//! All numeric code is generic over the scalar type through the [`Real`]
//! trait; `f64` aliases for the main types live at the crate root.

pub mod clvr_dense;
pub mod clvr_lazy;
pub mod dro;
mod error;
pub mod io;
pub mod metrics;
pub mod partition;
pub mod pdhg;
pub mod problem;
pub mod restart;
pub mod sampler;
pub mod schedule;
pub mod sparse;

pub use error::{Error, Result};

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Scalar type the solvers are generic over: `f32` or `f64` (any IEEE float
/// implementing the num-traits surface below).
pub trait Real:
    Float + NumAssign + FromPrimitive + ToPrimitive + Sum<Self> + Display + LowerExp + Debug + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float
        + NumAssign
        + FromPrimitive
        + ToPrimitive
        + Sum<Self>
        + Display
        + LowerExp
        + Debug
        + Send
        + Sync
        + 'static
{
}

/// Convert an `f64` constant into the working scalar type.
pub(crate) fn cast<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("constant not representable in scalar type")
}

/// Double-precision aliases for the main types.
pub type SparseMatrixF64 = sparse::SparseMatrix<f64>;
pub type BlockPartitionF64 = partition::BlockPartition<f64>;
pub type GlpInstanceF64 = problem::GlpInstance<f64>;
pub type SaddlePointF64 = problem::SaddlePoint<f64>;
pub type DatasetF64 = dro::Dataset<f64>;
pub type MetricsRecordF64 = metrics::MetricsRecord<f64>;
