//! Scalar evaluation quantities: error, opportunity-difference, Bayes
//! predictors and the two trivial-accuracy thresholds τ and τ*.
//!
//! All reductions use compensated summation so that the algebraic
//! identities asserted in the test suite hold to 1e-12 regardless of row
//! count or ordering.

use crate::distribution::{DataSource, PredictorVec};
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use serde::{Deserialize, Serialize};

/// A point of the (error, opportunity-difference) plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricPoint {
    pub error: f64,
    pub opp_diff: f64,
}

/// Tie-breaking rule for rows at `q = ½` when thresholding.
///
/// Both choices maximize accuracy; they differ in which constant region
/// the half-rate rows join.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tie {
    /// Predict 1 only when `q > ½`.
    Strict,
    /// Predict 1 when `q ≥ ½`.
    Inclusive,
}

/// The per-group positive-label masses `d_a = ⟨P, Q^(a)⟩ = P(Y=1, A=a)`.
///
/// Opportunity-difference is defined only when both are positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupDenominators {
    pub d0: f64,
    pub d1: f64,
}

impl GroupDenominators {
    pub fn compute(source: &DataSource) -> Result<Self> {
        let mut s0 = CompensatedSum::new();
        let mut s1 = CompensatedSum::new();
        for ((&p, &q), &a) in source.p().iter().zip(source.q()).zip(source.a()) {
            if a == 0 {
                s0.add(p * q);
            } else {
                s1.add(p * q);
            }
        }
        let (d0, d1) = (s0.value(), s1.value());
        if d0 <= 0.0 {
            return Err(Error::UndefinedEO { group: 0 });
        }
        if d1 <= 0.0 {
            return Err(Error::UndefinedEO { group: 1 });
        }
        Ok(Self { d0, d1 })
    }

    /// Weight vector of the opportunity-difference functional:
    /// `d(F) = ⟨F, w⟩` with `w_i = Q^(1)_i/d1 − Q^(0)_i/d0`.
    pub fn weights(&self, source: &DataSource) -> Vec<f64> {
        source
            .q()
            .iter()
            .zip(source.a())
            .map(|(&q, &a)| if a == 1 { q / self.d1 } else { -q / self.d0 })
            .collect()
    }
}

fn check_len(source: &DataSource, f: &PredictorVec) {
    assert_eq!(
        source.len(),
        f.f().len(),
        "predictor was built for a different source"
    );
}

/// `err(F) = ⟨P,Q⟩ + ⟨F, 1−2Q⟩ = P(Ŷ ≠ Y)`.
pub fn error(source: &DataSource, f: &PredictorVec) -> f64 {
    check_len(source, f);
    let mut s = CompensatedSum::new();
    for ((&p, &q), &fi) in source.p().iter().zip(source.q()).zip(f.f()) {
        s.add(p * q);
        s.add(fi * (1.0 - 2.0 * q));
    }
    s.value()
}

/// `d(F) = ⟨F,Q^(1)⟩/⟨P,Q^(1)⟩ − ⟨F,Q^(0)⟩/⟨P,Q^(0)⟩`, the signed
/// difference of group true-positive rates.
pub fn opp_diff(source: &DataSource, f: &PredictorVec) -> Result<f64> {
    check_len(source, f);
    let denoms = GroupDenominators::compute(source)?;
    let mut n0 = CompensatedSum::new();
    let mut n1 = CompensatedSum::new();
    for ((&q, &a), &fi) in source.q().iter().zip(source.a()).zip(f.f()) {
        if a == 0 {
            n0.add(fi * q);
        } else {
            n1.add(fi * q);
        }
    }
    Ok(n1.value() / denoms.d1 - n0.value() / denoms.d0)
}

/// Both metrics of a predictor as one point.
pub fn metric_point(source: &DataSource, f: &PredictorVec) -> Result<MetricPoint> {
    Ok(MetricPoint {
        error: error(source, f),
        opp_diff: opp_diff(source, f)?,
    })
}

/// The accuracy-maximal threshold predictor `1[q > ½]` (or `≥` under
/// [`Tie::Inclusive`]).
pub fn bayes(source: &DataSource, tie: Tie) -> PredictorVec {
    let bits: Vec<bool> = source
        .q()
        .iter()
        .map(|&q| match tie {
            Tie::Strict => q > 0.5,
            Tie::Inclusive => q >= 0.5,
        })
        .collect();
    PredictorVec::from_bits(source, &bits).expect("bit vector is index-aligned")
}

/// Closed form for the best achievable accuracy: `½ + Σ_i p_i·|q_i − ½|`.
pub fn bayes_accuracy(source: &DataSource) -> f64 {
    let mut s = CompensatedSum::new();
    for (&p, &q) in source.p().iter().zip(source.q()) {
        s.add(p * (q - 0.5).abs());
    }
    0.5 + s.value()
}

/// Trivial accuracy `τ = max{P(Y=0), P(Y=1)}`: the best constant
/// classifier. Also checked against the closed form `½ + |E[Y] − ½|`.
pub fn trivial_accuracy(source: &DataSource) -> f64 {
    let mut y1 = CompensatedSum::new();
    let mut y0 = CompensatedSum::new();
    for (&p, &q) in source.p().iter().zip(source.q()) {
        y1.add(p * q);
        y0.add(p * (1.0 - q));
    }
    let tau = y1.value().max(y0.value());
    debug_assert!(
        (tau - (0.5 + (y1.value() - 0.5).abs())).abs() <= 1e-12 || y1.value() < 0.5,
        "the two trivial-accuracy formulas disagree"
    );
    tau
}

/// `τ* = max{P(Q ≥ ½), P(Q ≤ ½)}`. Non-trivial predictors exist iff
/// `τ* < 1`; for deterministic sources `τ* = τ` exactly.
pub fn tau_star(source: &DataSource) -> f64 {
    let mut ge = CompensatedSum::new();
    let mut le = CompensatedSum::new();
    for (&p, &q) in source.p().iter().zip(source.q()) {
        if q >= 0.5 {
            ge.add(p);
        }
        if q <= 0.5 {
            le.add(p);
        }
    }
    let ts = ge.value().max(le.value());
    debug_assert!(
        !source.is_deterministic() || (ts - trivial_accuracy(source)).abs() <= 1e-12,
        "determinism identity τ* = τ violated"
    );
    ts
}
