//! Optimization and decision procedures: the most accurate predictor under
//! (possibly relaxed) equal opportunity, the non-trivial-accuracy
//! existence test, and the combined compatibility verdict.

use crate::distribution::{DataSource, PredictorVec};
use crate::error::{Error, Result};
use crate::metrics::{self, GroupDenominators, Tie};
use crate::numeric::CompensatedSum;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maximum row count accepted by the exhaustive LP oracle.
pub const ORACLE_MAX_ROWS: usize = 12;

/// Why compatibility holds or fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    /// An EO predictor strictly more accurate than every constant exists.
    NontrivialEOWitness,
    /// Non-trivial predictors exist, but none of them satisfies EO.
    AllEOTrivial,
    /// No predictor at all beats the constants (τ* = 1).
    NoNontrivialExists,
}

/// The combined accuracy/EO compatibility report for a source.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub trivial_accuracy: f64,
    pub tau_star: f64,
    pub bayes_accuracy: f64,
    /// Minimum error over exact-EO predictors.
    pub min_eo_error: f64,
    /// True iff some EO predictor strictly beats both constant classifiers.
    pub compatible: bool,
    /// The optimal EO predictor when `compatible`.
    pub witness: Option<PredictorVec>,
    pub certificate: Certificate,
}

/// Most accurate predictor subject to `|opp_diff| ≤ eps`.
///
/// Minimizes `⟨F, 1−2Q⟩` over the box `0 ⊑ F ⊑ P` intersected with the
/// slab `|⟨F,w⟩| ≤ eps`. The unconstrained box minimum is the Bayes
/// predictor; when it violates the slab, each boundary `⟨F,w⟩ = ±eps` is
/// solved exactly by a Lagrangian breakpoint sweep with at most one
/// fractional coordinate. Among optima the canonical representative has
/// the smallest total mass `⟨F,1⟩`.
pub fn min_error_eo(source: &DataSource, eps: f64) -> Result<(PredictorVec, f64)> {
    assert!(
        (0.0..=2.0).contains(&eps),
        "eps must lie in [0, 2], got {eps}"
    );
    let denoms = GroupDenominators::compute(source)?;
    let w = denoms.weights(source);
    let c: Vec<f64> = source.q().iter().map(|&q| 1.0 - 2.0 * q).collect();

    let mut candidates: Vec<PredictorVec> = Vec::with_capacity(4);
    let bayes = metrics::bayes(source, Tie::Strict);
    let d_bayes = metrics::opp_diff(source, &bayes)?;
    if d_bayes.abs() <= eps {
        candidates.push(bayes);
    } else {
        // |opp_diff| never exceeds 1, so targets are clamped there.
        for t in [eps.min(1.0), (-eps).max(-1.0)] {
            candidates.push(equality_solve(source, &w, &c, t));
        }
    }
    candidates.push(PredictorVec::zeros(source));
    candidates.push(PredictorVec::ones(source));

    let best = candidates
        .into_iter()
        .filter(|f| {
            metrics::opp_diff(source, f)
                .map(|d| d.abs() <= eps + 1e-9)
                .unwrap_or(false)
        })
        .map(|f| {
            let e = metrics::error(source, &f);
            let mass: f64 = f.f().iter().sum();
            (e, mass, f)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)))
        .expect("constant classifiers always satisfy the constraint");
    Ok((best.2, best.0))
}

/// Exact minimizer of `⟨F,c⟩` over the box slice `⟨F,w⟩ = t`, `|t| < 1`.
///
/// For a multiplier λ the box minimizer of `⟨F, c + λw⟩` is
/// `f_i = p_i·1[c_i + λw_i < 0]`, and its constraint value is
/// non-increasing in λ, from `+1` (λ → −∞) to `−1` (λ → +∞). Sweeping the
/// breakpoints `λ_i = −c_i/w_i` in ascending order (ties by row index)
/// finds the crossing; the row at the crossing takes the fractional value
/// that meets `t` exactly.
fn equality_solve(source: &DataSource, w: &[f64], c: &[f64], t: f64) -> PredictorVec {
    let n = source.len();
    let p = source.p();
    let mut on = vec![false; n];
    let mut frac: Option<(usize, f64)> = None;
    let mut cur = CompensatedSum::new();
    for i in 0..n {
        if w[i] > 0.0 {
            on[i] = true;
            cur.add(p[i] * w[i]);
        } else if w[i] == 0.0 && c[i] < 0.0 {
            on[i] = true;
        }
    }

    let mut bps: Vec<(f64, usize)> = (0..n)
        .filter(|&i| w[i] != 0.0)
        .map(|i| (-c[i] / w[i], i))
        .collect();
    bps.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    debug_assert!(cur.value() > t, "targets are clamped inside (−1, 1)");
    for (_, i) in bps {
        let step = -p[i] * w[i].abs();
        let next = cur.value() + step;
        if next >= t {
            on[i] = !on[i];
            cur.add(step);
            if next == t {
                break;
            }
        } else {
            let need = cur.value() - t;
            let fi = if w[i] > 0.0 {
                p[i] - need / w[i]
            } else {
                need / -w[i]
            };
            // Snap to the box bound when the division lands within a few ulps
            // of it, so optima that lie at a vertex are reported exactly
            // there (e.g. a constant classifier comes back bit-equal to P).
            let fi = if fi >= p[i] * (1.0 - 1e-12) {
                p[i]
            } else if fi <= p[i] * 1e-12 {
                0.0
            } else {
                fi
            };
            on[i] = false;
            frac = Some((i, fi));
            break;
        }
    }

    let mut f: Vec<f64> = (0..n).map(|i| if on[i] { p[i] } else { 0.0 }).collect();
    if let Some((i, fi)) = frac {
        f[i] = fi;
    }
    PredictorVec::new(source, f).expect("sweep keeps every coordinate inside the box")
}

/// Exhaustive oracle for [`min_error_eo`] at `eps = 0`: the optimum of a
/// linear functional over box ∩ hyperplane has at most one coordinate off
/// its bounds, so trying every fractional coordinate against every bound
/// pattern of the rest is exhaustive. Exponential; guarded at
/// [`ORACLE_MAX_ROWS`] rows.
pub fn oracle_min_error_eo(source: &DataSource) -> Result<f64> {
    let setup = oracle_setup(source)?;
    #[cfg(feature = "parallel")]
    {
        let n = source.len();
        let best = (0..=n)
            .into_par_iter()
            .map(|i| oracle_slice(source, &setup, i))
            .reduce(|| f64::INFINITY, f64::min);
        Ok(best)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let n = source.len();
        let best = (0..=n)
            .map(|i| oracle_slice(source, &setup, i))
            .fold(f64::INFINITY, f64::min);
        Ok(best)
    }
}

/// Sequential variant of [`oracle_min_error_eo`], kept unconditionally for
/// benchmarking.
pub fn oracle_min_error_eo_seq(source: &DataSource) -> Result<f64> {
    let setup = oracle_setup(source)?;
    let n = source.len();
    Ok((0..=n)
        .map(|i| oracle_slice(source, &setup, i))
        .fold(f64::INFINITY, f64::min))
}

struct OracleSetup {
    w: Vec<f64>,
    offset: f64,
    c: Vec<f64>,
}

fn oracle_setup(source: &DataSource) -> Result<OracleSetup> {
    let n = source.len();
    if n > ORACLE_MAX_ROWS {
        return Err(Error::TooLarge {
            n,
            max: ORACLE_MAX_ROWS,
        });
    }
    let denoms = GroupDenominators::compute(source)?;
    Ok(OracleSetup {
        w: denoms.weights(source),
        offset: crate::numeric::dot(source.p(), source.q()),
        c: source.q().iter().map(|&q| 1.0 - 2.0 * q).collect(),
    })
}

/// Slice `i < n`: candidates whose fractional coordinate is row `i`.
/// Slice `i = n`: all-bound candidates with constraint value ≈ 0.
fn oracle_slice(source: &DataSource, s: &OracleSetup, i: usize) -> f64 {
    let n = source.len();
    let p = source.p();
    let mut best = f64::INFINITY;
    if i == n {
        for mask in 0u32..1 << n {
            let mut d = CompensatedSum::new();
            let mut e = CompensatedSum::new();
            e.add(s.offset);
            for (j, &pj) in p.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    d.add(pj * s.w[j]);
                    e.add(pj * s.c[j]);
                }
            }
            if d.value().abs() <= 1e-12 {
                best = best.min(e.value());
            }
        }
        return best;
    }
    if s.w[i] == 0.0 {
        return best;
    }
    for mask in 0u32..1 << (n - 1) {
        let mut d = CompensatedSum::new();
        let mut e = CompensatedSum::new();
        e.add(s.offset);
        let mut bit = 0;
        for (j, &pj) in p.iter().enumerate() {
            if j == i {
                continue;
            }
            if mask >> bit & 1 == 1 {
                d.add(pj * s.w[j]);
                e.add(pj * s.c[j]);
            }
            bit += 1;
        }
        let fi = -d.value() / s.w[i];
        // Corners land within rounding of a bound; admit and clamp them.
        if fi >= -1e-12 * p[i] && fi <= p[i] * (1.0 + 1e-12) {
            e.add(fi.clamp(0.0, p[i]) * s.c[i]);
            best = best.min(e.value());
        }
    }
    best
}

/// Non-trivial predictors exist iff `τ* < 1`.
pub fn nontrivial_exists(source: &DataSource) -> bool {
    let ts = metrics::tau_star(source);
    let by_tau_star = ts < 1.0 - 1e-12;
    #[cfg(debug_assertions)]
    {
        let margin = metrics::bayes_accuracy(source) - metrics::trivial_accuracy(source);
        debug_assert!(
            by_tau_star == (margin > 1e-12)
                || margin.abs() <= 1e-11
                || (ts - 1.0).abs() <= 1e-11,
            "τ* and Bayes-margin tests disagree away from the boundary"
        );
    }
    by_tau_star
}

/// Full compatibility report: can equal opportunity and non-trivial
/// accuracy hold simultaneously?
pub fn compatibility_verdict(source: &DataSource) -> Result<Verdict> {
    let (opt, min_eo_error) = min_error_eo(source, 0.0)?;
    let trivial_error = metrics::error(source, &PredictorVec::zeros(source))
        .min(metrics::error(source, &PredictorVec::ones(source)));
    let compatible = min_eo_error < trivial_error - 1e-12;
    let nontrivial = nontrivial_exists(source);
    let certificate = if compatible {
        Certificate::NontrivialEOWitness
    } else if nontrivial {
        Certificate::AllEOTrivial
    } else {
        Certificate::NoNontrivialExists
    };
    Ok(Verdict {
        trivial_accuracy: metrics::trivial_accuracy(source),
        tau_star: metrics::tau_star(source),
        bayes_accuracy: metrics::bayes_accuracy(source),
        min_eo_error,
        compatible,
        witness: compatible.then_some(opt),
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::fixtures;
    use crate::distribution::SourceRow;
    use crate::region;

    const TOL: f64 = 1e-12;

    #[test]
    fn cloud_eo_optimum_is_the_constant_one_classifier() {
        let source = fixtures::cloud();
        let (f, e) = min_error_eo(&source, 0.0).unwrap();
        assert!((e - 0.35).abs() < TOL);
        assert_eq!(f.f(), source.p(), "optimum should be F = P exactly");
        assert!((oracle_min_error_eo_seq(&source).unwrap() - 0.35).abs() < TOL);
        assert!((oracle_min_error_eo(&source).unwrap() - 0.35).abs() < TOL);
    }

    #[test]
    fn cloud_unconstrained_optimum_is_bayes() {
        let source = fixtures::cloud();
        let (f, e) = min_error_eo(&source, 2.0).unwrap();
        assert!((e - 0.3125).abs() < TOL);
        assert_eq!(f.f(), metrics::bayes(&source, Tie::Strict).f());
    }

    #[test]
    fn cloud_relaxation_interpolates() {
        let source = fixtures::cloud();
        let (f, e) = min_error_eo(&source, 0.01).unwrap();
        assert!(e > 0.3125 + 1e-6 && e < 0.35 - 1e-6, "error {e}");
        assert!(metrics::opp_diff(&source, &f).unwrap().abs() <= 0.01 + 1e-9);
    }

    #[test]
    fn relaxation_is_monotone() {
        let source = fixtures::cloud();
        let mut prev = f64::INFINITY;
        for eps in [0.0, 0.05, 0.1, 0.2, 0.4, 0.642, 0.65, 1.0, 2.0] {
            let (_, e) = min_error_eo(&source, eps).unwrap();
            assert!(e <= prev + TOL, "eps={eps}: {e} > {prev}");
            prev = e;
        }
    }

    #[test]
    fn non_example_is_compatible() {
        let source = fixtures::non_example();
        let v = compatibility_verdict(&source).unwrap();
        assert!(v.compatible);
        assert_eq!(v.certificate, Certificate::NontrivialEOWitness);
        assert!((v.min_eo_error - 0.15000528187902173).abs() < 1e-12);
        assert!((v.trivial_accuracy - 0.615757).abs() < TOL);
        let w = v.witness.expect("compatible verdicts carry a witness");
        assert!(metrics::opp_diff(&source, &w).unwrap().abs() < 1e-9);
        assert!((metrics::error(&source, &w) - v.min_eo_error).abs() < TOL);
        assert!((oracle_min_error_eo_seq(&source).unwrap() - v.min_eo_error).abs() < 1e-9);
    }

    #[test]
    fn cloud_is_incompatible_but_not_trivially_so() {
        let source = fixtures::cloud();
        let v = compatibility_verdict(&source).unwrap();
        assert!(!v.compatible);
        assert_eq!(v.certificate, Certificate::AllEOTrivial);
        assert!(v.witness.is_none());
        assert!((v.min_eo_error - 0.35).abs() < TOL);
        assert!(nontrivial_exists(&source));
        assert!((v.bayes_accuracy - 0.6875).abs() < TOL);
        assert!((v.tau_star - 0.625).abs() < TOL);
    }

    #[test]
    fn ex_plane_is_incompatible_at_the_trivial_error() {
        let source = fixtures::ex_plane();
        let v = compatibility_verdict(&source).unwrap();
        assert!(!v.compatible);
        assert!((v.min_eo_error - 0.192886).abs() < TOL);
        assert!((v.tau_star - 0.868).abs() < TOL);
        assert!(nontrivial_exists(&source));
    }

    #[test]
    fn geometry_and_optimization_agree_on_the_eo_segment() {
        for source in [fixtures::cloud(), fixtures::non_example()] {
            let z = region::zonotope_region(&source).unwrap();
            let (lo, hi) = region::eo_slice(&z);
            let (_, e) = min_error_eo(&source, 0.0).unwrap();
            assert!((lo - e).abs() < 1e-9);
            assert!((hi - (1.0 - e)).abs() < 1e-9);
        }
    }

    #[test]
    fn all_high_rate_source_has_only_trivial_predictors() {
        let source = DataSource::new(vec![
            SourceRow::new("u", 0, 0.5, 0.9),
            SourceRow::new("v", 1, 0.5, 0.6),
        ])
        .unwrap();
        assert!(!nontrivial_exists(&source));
        let v = compatibility_verdict(&source).unwrap();
        assert_eq!(v.certificate, Certificate::NoNontrivialExists);
        assert!(v.tau_star >= 1.0 - 1e-12);
        assert!(!v.compatible);
    }

    #[test]
    fn deterministic_source_with_imbalance_has_nontrivial_predictors() {
        let source = DataSource::new(vec![
            SourceRow::new("u", 0, 0.4, 1.0),
            SourceRow::new("v", 1, 0.3, 1.0),
            SourceRow::new("w", 1, 0.3, 0.0),
        ])
        .unwrap();
        assert!(nontrivial_exists(&source));
        // Bayes satisfies EO here (TPR 1 in both groups), so the optimum
        // is unconstrained.
        let (f, e) = min_error_eo(&source, 0.0).unwrap();
        assert_eq!(f.f(), metrics::bayes(&source, Tie::Strict).f());
        assert!((e - (1.0 - metrics::bayes_accuracy(&source))).abs() < TOL);
        assert!((oracle_min_error_eo_seq(&source).unwrap() - e).abs() < 1e-9);
    }

    #[test]
    fn undefined_eo_is_reported() {
        let source = DataSource::new(vec![SourceRow::new("u", 0, 1.0, 0.5)]).unwrap();
        assert!(matches!(
            min_error_eo(&source, 0.0),
            Err(Error::UndefinedEO { .. })
        ));
        assert!(matches!(
            compatibility_verdict(&source),
            Err(Error::UndefinedEO { .. })
        ));
    }

    #[test]
    fn oracle_guard_rejects_large_sources() {
        let rows: Vec<SourceRow> = (0..13)
            .map(|i| SourceRow::new(format!("x{i}"), (i % 2) as u8, 1.0 / 13.0, 0.4))
            .collect();
        let source = DataSource::new(rows).unwrap();
        assert!(matches!(
            oracle_min_error_eo_seq(&source),
            Err(Error::TooLarge { n: 13, max: 12 })
        ));
    }

    #[test]
    #[should_panic(expected = "eps must lie in [0, 2]")]
    fn negative_eps_is_rejected() {
        let source = fixtures::cloud();
        let _ = min_error_eo(&source, -0.5);
    }
}
