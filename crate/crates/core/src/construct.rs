//! Constructive results: the seeded generator of three-region
//! impossibility instances (with its five checkable constraints), the
//! four-mass sufficiency condition with its constructive EO predictor,
//! and the embedded reference instances.

use crate::distribution::{DataSource, PredictorVec};
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A three-region instance: regions `R1, R2` form group 0 and `R3` is
/// group 1, with masses `p` and rates `q`.
///
/// Instances produced by [`algorithm1`] satisfy constraints C1–C5, which
/// together force every equal-opportunity predictor down to trivial
/// accuracy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneInstance {
    pub p: [f64; 3],
    pub q: [f64; 3],
    pub seed: u64,
}

impl PlaneInstance {
    /// The five constraints, individually:
    /// C1 `p, q ∈ (0,1)^3`; C2 `⟨P, 2Q−1⟩ > 0`; C3 `q1 < ½ < q2, q3`;
    /// C4 `q3 + q1 ≥ 1`; C5 `p1·q1 + p2·q2 < p3·q1`.
    pub fn constraints(&self) -> [bool; 5] {
        let [p1, p2, p3] = self.p;
        let [q1, q2, q3] = self.q;
        let c1 = self.p.iter().chain(&self.q).all(|&v| v > 0.0 && v < 1.0);
        let c2 = p1 * (2.0 * q1 - 1.0) + p2 * (2.0 * q2 - 1.0) + p3 * (2.0 * q3 - 1.0) > 0.0;
        let c3 = q1 < 0.5 && q2 > 0.5 && q3 > 0.5;
        let c4 = q3 + q1 >= 1.0;
        let c5 = p1 * q1 + p2 * q2 < p3 * q1;
        [c1, c2, c3, c4, c5]
    }

    pub fn satisfies_constraints(&self) -> bool {
        self.constraints().iter().all(|&c| c)
    }
}

/// Uniform draw from the open interval `(lo, hi)`: endpoint hits from the
/// underlying half-open sampler are rejected, since the constraints need
/// strict membership.
fn open_interval<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    loop {
        let v = rng.gen_range(lo..hi);
        if v > lo && v < hi {
            return v;
        }
    }
}

/// Seeded generator of impossibility instances.
///
/// Draws `q1 ∈ (0,½)`, `q2 ∈ (½,1)`, `q3 ∈ (1−q1, 1)`, `p3 ∈ (½,1)`, then
/// picks the group-0 positive mass `c = p1·q1 + p2·q2` inside
/// `(a, b) = (max{(1−p3)q1, ½−p3q3}, min{(1−p3)q2, p3·q1})` and solves for
/// `p2, p1`. The interval is provably non-empty and the result satisfies
/// C1–C5 for every seed; both facts are asserted.
pub fn algorithm1(seed: u64) -> PlaneInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q1 = open_interval(&mut rng, 0.0, 0.5);
    let q2 = open_interval(&mut rng, 0.5, 1.0);
    let q3 = open_interval(&mut rng, 1.0 - q1, 1.0);
    let p3 = open_interval(&mut rng, 0.5, 1.0);
    let a = ((1.0 - p3) * q1).max(0.5 - p3 * q3);
    let b = ((1.0 - p3) * q2).min(p3 * q1);
    assert!(a < b, "seed {seed}: empty interval ({a}, {b})");
    let c = open_interval(&mut rng, a, b);
    let p2 = (c - (1.0 - p3) * q1) / (q2 - q1);
    let p1 = 1.0 - p3 - p2;
    let instance = PlaneInstance {
        p: [p1, p2, p3],
        q: [q1, q2, q3],
        seed,
    };
    assert!(
        instance.satisfies_constraints(),
        "seed {seed}: generated instance violates its constraints: {instance:?}"
    );
    instance
}

/// Materialize an instance as a three-row data source (rejecting instances
/// that do not satisfy C1–C5).
pub fn impossibility_source(instance: &PlaneInstance) -> Result<DataSource> {
    let names = ["C1", "C2", "C3", "C4", "C5"];
    for (ok, name) in instance.constraints().into_iter().zip(names) {
        if !ok {
            return Err(Error::ConstraintViolation { name });
        }
    }
    DataSource::three_region(instance.p, instance.q)
}

/// The four masses `P(Q > ½, A=a)` and `P(Q < ½, A=a)`; compatibility of
/// EO with non-trivial accuracy is guaranteed when all four are positive.
/// Rows at exactly `q = ½` count toward neither side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SufficiencyReport {
    /// `P(Q > ½, A=a)` indexed by group.
    pub mass_above: [f64; 2],
    /// `P(Q < ½, A=a)` indexed by group.
    pub mass_below: [f64; 2],
    pub holds: bool,
}

pub fn check_sufficiency(source: &DataSource) -> SufficiencyReport {
    let mut above = [CompensatedSum::new(), CompensatedSum::new()];
    let mut below = [CompensatedSum::new(), CompensatedSum::new()];
    for ((&p, &q), &a) in source.p().iter().zip(source.q()).zip(source.a()) {
        if q > 0.5 {
            above[a as usize].add(p);
        } else if q < 0.5 {
            below[a as usize].add(p);
        }
    }
    let mass_above = [above[0].value(), above[1].value()];
    let mass_below = [below[0].value(), below[1].value()];
    let holds = mass_above.iter().chain(&mass_below).all(|&m| m > 0.0);
    SufficiencyReport {
        mass_above,
        mass_below,
        holds,
    }
}

/// Constructive equal-opportunity predictor with above-trivial accuracy,
/// defined whenever [`check_sufficiency`] holds.
///
/// When the constant-0 classifier is at least as good as constant-1, the
/// predictor is 0 on `{q ≤ ½}` and a per-group constant on `{q > ½}`; the
/// constants are chosen so the group true-positive rates match, scaled by
/// the larger rate so both lie in `(0, 1]`. Otherwise the mirrored form is
/// used: 1 on `{q ≥ ½}` and per-group constants below, solved through
/// `1 − q̂`, with the degenerate zero-rate groups (all mass below ½ at
/// `q = 0`) pinned to the canonical constants 1 and ½.
pub fn sufficiency_predictor(source: &DataSource) -> Result<PredictorVec> {
    let report = check_sufficiency(source);
    for a in 0..2 {
        if report.mass_above[a] <= 0.0 {
            return Err(Error::SufficiencyNotMet {
                reason: format!("group {a} has no mass with q > 1/2"),
            });
        }
        if report.mass_below[a] <= 0.0 {
            return Err(Error::SufficiencyNotMet {
                reason: format!("group {a} has no mass with q < 1/2"),
            });
        }
    }

    let mass: f64 = crate::numeric::sum(source.p().iter().copied());
    let err_zero = crate::numeric::dot(source.p(), source.q());
    let err_one = mass - err_zero;

    // Masked positive-label masses per group: strictly above ½, strictly
    // below ½, and total (the EO denominator).
    let mut above = [CompensatedSum::new(), CompensatedSum::new()];
    let mut below = [CompensatedSum::new(), CompensatedSum::new()];
    let mut total = [CompensatedSum::new(), CompensatedSum::new()];
    for ((&p, &q), &a) in source.p().iter().zip(source.q()).zip(source.a()) {
        let g = a as usize;
        total[g].add(p * q);
        if q > 0.5 {
            above[g].add(p * q);
        } else if q < 0.5 {
            below[g].add(p * q);
        }
    }
    let d = [total[0].value(), total[1].value()];
    if d[0] <= 0.0 {
        return Err(Error::UndefinedEO { group: 0 });
    }
    if d[1] <= 0.0 {
        return Err(Error::UndefinedEO { group: 1 });
    }

    let f: Vec<f64> = if err_zero <= err_one {
        // Predict 0 below, per-group constants q̂_a above; the rates
        // c_a = E[Q·1(Q>½)|..]/E[Q|..] are positive, so cross-scaling by
        // the larger one equalizes TPRs with constants in (0, 1].
        let c = [above[0].value() / d[0], above[1].value() / d[1]];
        let cmax = c[0].max(c[1]);
        let qhat = [c[1] / cmax, c[0] / cmax];
        source
            .p()
            .iter()
            .zip(source.q())
            .zip(source.a())
            .map(|((&p, &q), &a)| if q > 0.5 { p * qhat[a as usize] } else { 0.0 })
            .collect()
    } else {
        // Predict 1 above (inclusive), per-group constants below. In
        // terms of r_a = 1 − q̂_a the EO condition is r_0·g_0 = r_1·g_1
        // with g_a = E[Q·1(Q<½)|..]/E[Q|..]; a vanishing g_a (all its
        // below-½ mass at q = 0) forces the other group's constant to 1
        // and leaves this group's free — pinned at ½.
        let g = [below[0].value() / d[0], below[1].value() / d[1]];
        let qhat = match (g[0] > 0.0, g[1] > 0.0) {
            (true, true) => {
                let gmax = g[0].max(g[1]);
                [1.0 - g[1] / gmax, 1.0 - g[0] / gmax]
            }
            (true, false) => [1.0, 0.5],
            (false, true) => [0.5, 1.0],
            (false, false) => [0.5, 0.5],
        };
        source
            .p()
            .iter()
            .zip(source.q())
            .zip(source.a())
            .map(|((&p, &q), &a)| if q >= 0.5 { p } else { p * qhat[a as usize] })
            .collect()
    };
    PredictorVec::new(source, f)
}

/// The reference instances used throughout the tests and CLI goldens.
pub mod fixtures {
    use super::*;
    use crate::distribution::SourceRow;
    use crate::exact;
    use std::collections::BTreeMap;

    /// Four-outcome instance with masses `[3/8, 2/8, 1/8, 2/8]` and rates
    /// `[9/20, 15/20, 15/20, 16/20]`: non-trivial accuracy and EO are
    /// separately achievable but not jointly. Stored as exact rationals
    /// and converted on demand.
    pub fn cloud() -> DataSource {
        let (p, q, a) = exact::cloud().to_f64();
        let labels = ["0", "0", "1", "1"];
        let rows = labels
            .iter()
            .zip(a)
            .zip(p.iter().zip(&q))
            .map(|((&x, a), (&p, &q))| SourceRow::new(x, a, p, q))
            .collect();
        DataSource::new(rows).expect("embedded instance is valid")
    }

    /// Four-outcome instance whose region has full dimension and whose
    /// Bayes classifier violates EO; EO and non-trivial accuracy are
    /// nevertheless compatible here.
    pub fn non_example() -> DataSource {
        let p = [0.267, 0.344, 0.141, 0.248];
        let q = [0.893, 0.896, 0.126, 0.207];
        let a = [0u8, 1, 0, 1];
        let rows = (0..4)
            .map(|i| SourceRow::new(format!("x{}", i + 1), a[i], p[i], q[i]))
            .collect();
        DataSource::new(rows).expect("embedded instance is valid")
    }

    /// Three-region impossibility instance with reference masses
    /// `[0.131, 0.096, 0.772]` and rates `[0.274, 0.858, 0.891]`.
    ///
    /// The masses are kept verbatim even though they sum to 0.999 — they
    /// are three-decimal roundings of an exact instance — so scalar
    /// results on this fixture carry that rounding (e.g. the minimal EO
    /// error is `⟨P,1⟩ − ⟨P,Q⟩ = 0.192886`, not `1 − ⟨P,Q⟩`).
    pub fn ex_plane() -> DataSource {
        let p = [0.131, 0.096, 0.772];
        let q = [0.274, 0.858, 0.891];
        let a = [0u8, 0, 1];
        let rows = (0..3)
            .map(|i| SourceRow::new(format!("R{}", i + 1), a[i], p[i], q[i]))
            .collect();
        DataSource::new_unnormalized(rows).expect("embedded instance is valid")
    }

    /// All embedded instances, keyed by name.
    pub fn all() -> BTreeMap<&'static str, DataSource> {
        BTreeMap::from([
            ("cloud", cloud()),
            ("non-example", non_example()),
            ("ex-plane", ex_plane()),
        ])
    }
}
