//! Moment sequences of spidernets and free Meixner laws.
//!
//! Truncated power series, eventually-constant Jacobi continued fractions,
//! the sequence transforms that act on them (binomial, INVERT, MINVERT,
//! reversion, Hankel), model constructors, an explicit-graph walk counter
//! and a floating-point spectral reconstruction.
//!
//! All algebra is generic over [`scalar::Scalar`]; the aliases below fix the
//! exact rational instantiation that most callers want.

pub mod fixtures;
pub mod graph;
pub mod jfraction;
pub mod models;
pub mod pipeline;
pub mod scalar;
pub mod series;
pub mod spectral;
pub mod transforms;

pub use jfraction::{extract, JFractionCoefficients, JFractionError, JFractionSpec};
pub use models::{gab_spec, MeixnerParams, ModelError, SpidernetParams};
pub use pipeline::{parse_pipeline, PipelineError, PipelineOutput, TransformPipeline};
pub use scalar::{format_rational, parse_rational, Scalar};
pub use series::{SeriesError, TruncatedSeries};

/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
/// Exact truncated power series.
pub type Series = TruncatedSeries<Rational>;
/// Exact J-fraction spec.
pub type JFraction = JFractionSpec<Rational>;
/// Floating-point J-fraction spec, as consumed by [`spectral`].
pub type JFractionF64 = JFractionSpec<f64>;
