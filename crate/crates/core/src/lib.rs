//! Exact analysis of the trade-off between accuracy and equal opportunity
//! for finite discrete data sources with a binary protected attribute.
//!
//! A source is a finite list of `(x, a)` outcomes with masses `p` and
//! positive-label rates `q`; a (soft) predictor is a vector `F` in the box
//! `0 ⊑ F ⊑ P`. The crate computes, exactly up to floating-point rounding:
//!
//! - the metrics `err(F)` and the opportunity-difference `d(F)`
//!   ([`metrics`]), plus the accuracy thresholds τ (best constant) and τ*
//!   (whether anything can beat the constants);
//! - the full feasible region of `(err, d)` pairs as a convex polygon — a
//!   zonotope — with deterministic witness predictors at every vertex
//!   ([`region`]), and the exponential brute-force oracle it is tested
//!   against;
//! - the most accurate predictor under exact or ε-relaxed equal
//!   opportunity, and the verdict on whether equal opportunity is
//!   compatible with non-trivial accuracy ([`fairopt`]);
//! - seeded generators of certified impossibility instances, and the
//!   four-mass sufficiency test with its constructive fair predictor
//!   ([`construct`]);
//! - an exact rational-arithmetic twin for small instances ([`exact`]).
//!
//! The `parallel` feature (on by default) parallelizes the exponential
//! oracles with rayon; `*_seq` variants are always available.

pub mod construct;
pub mod distribution;
pub mod error;
pub mod exact;
pub mod fairopt;
pub mod metrics;
pub mod numeric;
pub mod region;

pub use distribution::{DataSource, PredictorVec, SourceRow};
pub use error::{Error, Result};
pub use fairopt::{Certificate, Verdict};
pub use metrics::MetricPoint;
pub use region::RegionPolygon;
