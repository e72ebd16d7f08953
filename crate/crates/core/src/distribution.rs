//! Finite discrete data sources and soft predictors in vectorial form.
//!
//! A source is a list of outcome rows `(x, a)` with probability mass `p`
//! and positive-label rate `q = P(Y=1 | X=x, A=a)`. Row order is preserved
//! at load time and is the canonical index order for every vector quantity
//! in the crate.

use crate::error::{Error, Result};
use crate::numeric;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// Tolerance for accepting and renormalizing an input mass vector.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// One outcome of the feature pair `(x, a)` together with its mass and
/// conditional positive-label rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceRow {
    #[serde(rename = "x")]
    pub x_label: String,
    pub a: u8,
    pub p: f64,
    pub q: f64,
}

impl SourceRow {
    pub fn new(x_label: impl Into<String>, a: u8, p: f64, q: f64) -> Self {
        Self {
            x_label: x_label.into(),
            a,
            p,
            q,
        }
    }
}

/// On-disk document shape: `{"rows":[{"x":..,"a":..,"p":..,"q":..},..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RowsDoc {
    pub rows: Vec<SourceRow>,
}

/// A zero-mass row removed during lenient loading.
#[derive(Debug, Clone, PartialEq)]
pub struct DroppedRow {
    pub x_label: String,
    pub a: u8,
}

/// A validated finite discrete data source.
///
/// Invariants established at construction: every mass is positive, every
/// rate lies in `[0, 1]`, `(x, a)` identifiers are pairwise distinct and
/// the masses sum to one (renormalized when within [`MASS_TOLERANCE`]).
#[derive(Debug, Clone, PartialEq)]
pub struct DataSource {
    rows: Vec<SourceRow>,
    // Cached columns, index-aligned with `rows`.
    p: Vec<f64>,
    q: Vec<f64>,
    a: Vec<u8>,
}

impl DataSource {
    /// Strict construction: rejects zero-mass rows.
    pub fn new(rows: Vec<SourceRow>) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if row.p.is_nan() || row.p <= 0.0 {
                return Err(Error::NonPositiveMass {
                    row: i,
                    mass: row.p,
                });
            }
        }
        Self::finish(rows, true)
    }

    /// Lenient construction: drops rows with exactly zero mass and reports
    /// them; negative masses are still rejected.
    pub fn new_dropping_zero_mass(rows: Vec<SourceRow>) -> Result<(Self, Vec<DroppedRow>)> {
        let mut kept = Vec::with_capacity(rows.len());
        let mut dropped = Vec::new();
        for (i, row) in rows.into_iter().enumerate() {
            if row.p == 0.0 {
                dropped.push(DroppedRow {
                    x_label: row.x_label,
                    a: row.a,
                });
            } else if row.p > 0.0 {
                kept.push(row);
            } else {
                return Err(Error::NonPositiveMass {
                    row: i,
                    mass: row.p,
                });
            }
        }
        Ok((Self::finish(kept, true)?, dropped))
    }

    /// Construction that keeps the given masses verbatim, without the
    /// sum-to-one gate. Used for embedded instances whose reference masses
    /// carry rounding from decimal printing.
    pub(crate) fn new_unnormalized(rows: Vec<SourceRow>) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if row.p.is_nan() || row.p <= 0.0 {
                return Err(Error::NonPositiveMass {
                    row: i,
                    mass: row.p,
                });
            }
        }
        Self::finish(rows, false)
    }

    fn finish(mut rows: Vec<SourceRow>, normalize: bool) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        for (i, row) in rows.iter().enumerate() {
            if !row.q.is_finite() || row.q < 0.0 || row.q > 1.0 {
                return Err(Error::OutOfRangeQ { row: i, q: row.q });
            }
            if !row.p.is_finite() {
                return Err(Error::NonPositiveMass {
                    row: i,
                    mass: row.p,
                });
            }
        }
        let mut seen = HashSet::new();
        for row in &rows {
            if !seen.insert((row.x_label.clone(), row.a)) {
                return Err(Error::DuplicateRow {
                    x_label: row.x_label.clone(),
                    a: row.a,
                });
            }
        }
        if normalize {
            let sum = numeric::sum(rows.iter().map(|r| r.p));
            if (sum - 1.0).abs() > MASS_TOLERANCE {
                return Err(Error::MassNotNormalized { sum });
            }
            if sum != 1.0 {
                for row in &mut rows {
                    row.p /= sum;
                }
            }
        }
        let p = rows.iter().map(|r| r.p).collect();
        let q = rows.iter().map(|r| r.q).collect();
        let a = rows.iter().map(|r| r.a).collect();
        Ok(Self { rows, p, q, a })
    }

    /// Empirical source from raw labelled samples `(x, a, y)`.
    ///
    /// Groups by `(x, a)` in first-appearance order; `p` is the group
    /// frequency and `q` the group mean of `y`. No smoothing is applied.
    pub fn from_samples<S, I>(records: I) -> Result<Self>
    where
        S: Into<String>,
        I: IntoIterator<Item = (S, u8, u8)>,
    {
        let mut order: Vec<(String, u8)> = Vec::new();
        let mut counts: Vec<(u64, u64)> = Vec::new(); // (total, positives)
        let mut index: std::collections::HashMap<(String, u8), usize> =
            std::collections::HashMap::new();
        let mut total = 0u64;
        for (i, (x, a, y)) in records.into_iter().enumerate() {
            let x = x.into();
            if a > 1 {
                return Err(Error::BadLabel {
                    index: i,
                    field: "a",
                    value: a.to_string(),
                });
            }
            if y > 1 {
                return Err(Error::BadLabel {
                    index: i,
                    field: "y",
                    value: y.to_string(),
                });
            }
            let key = (x, a);
            let slot = *index.entry(key.clone()).or_insert_with(|| {
                order.push(key);
                counts.push((0, 0));
                counts.len() - 1
            });
            counts[slot].0 += 1;
            counts[slot].1 += u64::from(y);
            total += 1;
        }
        if total == 0 {
            return Err(Error::EmptyInput);
        }
        let rows = order
            .into_iter()
            .zip(counts)
            .map(|((x_label, a), (n, pos))| SourceRow {
                x_label,
                a,
                p: n as f64 / total as f64,
                q: pos as f64 / n as f64,
            })
            .collect();
        Self::new(rows)
    }

    /// Three-region layout: rows `R1, R2` in group 0 and `R3` in group 1,
    /// with constant rate on each region.
    pub fn three_region(p: [f64; 3], q: [f64; 3]) -> Result<Self> {
        for (j, &v) in p.iter().enumerate() {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::BadSimplexVector {
                    reason: format!("P[{}] = {} is not in (0,1)", j + 1, v),
                });
            }
        }
        let sum = numeric::sum(p.iter().copied());
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::BadSimplexVector {
                reason: format!("P sums to {sum}"),
            });
        }
        for (j, &v) in q.iter().enumerate() {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::BadSimplexVector {
                    reason: format!("Q[{}] = {} is not in (0,1)", j + 1, v),
                });
            }
        }
        let groups = [0u8, 0, 1];
        let rows = (0..3)
            .map(|j| SourceRow::new(format!("R{}", j + 1), groups[j], p[j], q[j]))
            .collect();
        Self::new(rows)
    }

    /// Randomized source for property sweeps: masses bounded away from
    /// zero, rates in `(0.01, 0.99)`, and at least one row per group so
    /// that opportunity-difference is defined.
    pub fn random<R: Rng>(rng: &mut R, n: usize) -> Self {
        assert!(n >= 2, "need at least one row per group");
        let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let rows = (0..n)
            .map(|i| {
                let a = match i {
                    0 => 0,
                    1 => 1,
                    _ => rng.gen_range(0..2) as u8,
                };
                SourceRow::new(format!("x{i}"), a, raw[i] / total, rng.gen_range(0.01..0.99))
            })
            .collect();
        Self::new(rows).expect("randomized source is valid by construction")
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[SourceRow] {
        &self.rows
    }

    /// Mass vector `P`.
    pub fn p(&self) -> &[f64] {
        &self.p
    }

    /// Rate vector `Q`.
    pub fn q(&self) -> &[f64] {
        &self.q
    }

    /// Group vector `A`.
    pub fn a(&self) -> &[u8] {
        &self.a
    }

    /// True when every rate is exactly 0 or 1.
    pub fn is_deterministic(&self) -> bool {
        self.q.iter().all(|&q| q == 0.0 || q == 1.0)
    }

    pub fn to_doc(&self) -> RowsDoc {
        RowsDoc {
            rows: self.rows.clone(),
        }
    }

    pub fn from_doc(doc: RowsDoc) -> Result<Self> {
        Self::new(doc.rows)
    }
}

/// A soft predictor in vectorial form: `f[i] = P(Ŷ=1, X=x_i, A=a_i)`,
/// componentwise inside the box `0 ≤ f[i] ≤ p[i]`. The pointwise predictor
/// is `q̂(x_i, a_i) = f[i] / p[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictorVec {
    f: Vec<f64>,
}

impl PredictorVec {
    pub fn new(source: &DataSource, f: Vec<f64>) -> Result<Self> {
        if f.len() != source.len() {
            return Err(Error::DimensionMismatch {
                expected: source.len(),
                got: f.len(),
            });
        }
        for (i, (&v, &bound)) in f.iter().zip(source.p()).enumerate() {
            if !v.is_finite() || v < 0.0 || v > bound {
                return Err(Error::PredictorOutOfBounds {
                    row: i,
                    value: v,
                    bound,
                });
            }
        }
        Ok(Self { f })
    }

    /// The constant-0 classifier, `F = 0`.
    pub fn zeros(source: &DataSource) -> Self {
        Self {
            f: vec![0.0; source.len()],
        }
    }

    /// The constant-1 classifier, `F = P`.
    pub fn ones(source: &DataSource) -> Self {
        Self {
            f: source.p().to_vec(),
        }
    }

    /// Build from pointwise values `q̂` via `f[i] = p[i]·q̂[i]`.
    pub fn from_pointwise(source: &DataSource, qhat: &[f64]) -> Result<Self> {
        if qhat.len() != source.len() {
            return Err(Error::DimensionMismatch {
                expected: source.len(),
                got: qhat.len(),
            });
        }
        for (i, &v) in qhat.iter().enumerate() {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::PredictorOutOfBounds {
                    row: i,
                    value: v,
                    bound: 1.0,
                });
            }
        }
        Ok(Self {
            f: qhat
                .iter()
                .zip(source.p())
                .map(|(&qh, &p)| (qh * p).min(p))
                .collect(),
        })
    }

    /// Deterministic predictor from a bit per row: `f[i] = bit·p[i]`.
    pub fn from_bits(source: &DataSource, bits: &[bool]) -> Result<Self> {
        if bits.len() != source.len() {
            return Err(Error::DimensionMismatch {
                expected: source.len(),
                got: bits.len(),
            });
        }
        Ok(Self {
            f: bits
                .iter()
                .zip(source.p())
                .map(|(&b, &p)| if b { p } else { 0.0 })
                .collect(),
        })
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    /// Pointwise values `q̂[i] = f[i] / p[i]`.
    pub fn pointwise(&self, source: &DataSource) -> Vec<f64> {
        self.f.iter().zip(source.p()).map(|(&f, &p)| f / p).collect()
    }

    /// The reflected predictor `P − F`.
    pub fn complement(&self, source: &DataSource) -> Self {
        Self {
            f: self
                .f
                .iter()
                .zip(source.p())
                .map(|(&f, &p)| p - f)
                .collect(),
        }
    }

    /// True when every coordinate sits at a box bound.
    pub fn is_deterministic(&self, source: &DataSource) -> bool {
        self.f
            .iter()
            .zip(source.p())
            .all(|(&f, &p)| f == 0.0 || f == p)
    }
}
