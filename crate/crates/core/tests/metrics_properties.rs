//! Identity and statistical checks for the scalar metrics: vector-symmetry,
//! affinity, Bayes optimality, closed forms, and agreement with a
//! Monte-Carlo simulation of the generative process.

use eo_region::construct::fixtures;
use eo_region::distribution::{DataSource, PredictorVec};
use eo_region::metrics::{self, Tie};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-12;

fn random_predictor<R: Rng>(rng: &mut R, source: &DataSource) -> PredictorVec {
    let f = source.p().iter().map(|&p| rng.gen_range(0.0..=p)).collect();
    PredictorVec::new(source, f).unwrap()
}

#[test]
fn complement_symmetry_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let n = rng.gen_range(2..=12);
        let source = DataSource::random(&mut rng, n);
        let f = random_predictor(&mut rng, &source);
        let g = f.complement(&source);
        let (ef, eg) = (metrics::error(&source, &f), metrics::error(&source, &g));
        assert!((ef + eg - 1.0).abs() <= TOL, "err(P−F) ≠ 1 − err(F)");
        let (df, dg) = (
            metrics::opp_diff(&source, &f).unwrap(),
            metrics::opp_diff(&source, &g).unwrap(),
        );
        assert!((df + dg).abs() <= TOL, "d(P−F) ≠ −d(F)");
    }
}

#[test]
fn metrics_are_affine_in_the_predictor() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..500 {
        let n = rng.gen_range(2..=10);
        let source = DataSource::random(&mut rng, n);
        let f = random_predictor(&mut rng, &source);
        let g = random_predictor(&mut rng, &source);
        let mid = PredictorVec::new(
            &source,
            f.f().iter().zip(g.f()).map(|(a, b)| 0.5 * (a + b)).collect(),
        )
        .unwrap();
        let em = metrics::error(&source, &mid);
        let avg = 0.5 * (metrics::error(&source, &f) + metrics::error(&source, &g));
        assert!((em - avg).abs() <= 1e-11, "error not affine: {em} vs {avg}");
        let dm = metrics::opp_diff(&source, &mid).unwrap();
        let davg = 0.5
            * (metrics::opp_diff(&source, &f).unwrap()
                + metrics::opp_diff(&source, &g).unwrap());
        assert!((dm - davg).abs() <= 1e-11, "opp_diff not affine");
    }
}

#[test]
fn bayes_is_optimal_among_random_predictors() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let n = rng.gen_range(2..=10);
        let source = DataSource::random(&mut rng, n);
        let bayes_err = metrics::error(&source, &metrics::bayes(&source, Tie::Strict));
        assert!((bayes_err - (1.0 - metrics::bayes_accuracy(&source))).abs() <= TOL);
        for _ in 0..100 {
            let f = random_predictor(&mut rng, &source);
            assert!(
                metrics::error(&source, &f) + TOL >= bayes_err,
                "a predictor beats Bayes"
            );
        }
    }
}

#[test]
fn constant_classifier_closed_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..1000 {
        let n = rng.gen_range(2..=12);
        let source = DataSource::random(&mut rng, n);
        let tau = metrics::trivial_accuracy(&source);
        let err_zero = metrics::error(&source, &PredictorVec::zeros(&source));
        let err_one = metrics::error(&source, &PredictorVec::ones(&source));
        let best = 1.0 - err_zero.min(err_one);
        assert!((tau - best).abs() <= TOL, "τ ≠ 1 − min constant error");
        // Alternative closed form: ½ + |⟨P,Q⟩ − ½|.
        let label_mass = 1.0 - err_zero;
        let alt = 0.5 + (label_mass - 0.5).abs();
        assert!((tau - alt).abs() <= TOL);
        // Ordering: constants are predictors, so τ ≤ Bayes accuracy.
        let bayes = metrics::bayes_accuracy(&source);
        assert!(tau <= bayes + TOL);
    }
}

#[test]
fn tie_breaking_changes_nothing_on_half_rate_rows() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..300 {
        let n = rng.gen_range(2..=10);
        let mut source = DataSource::random(&mut rng, n);
        // Force a few rows to sit exactly at q = ½.
        let rows: Vec<_> = source
            .rows()
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let q = if i % 3 == 0 { 0.5 } else { r.q };
                eo_region::SourceRow::new(r.x_label.clone(), r.a, r.p, q)
            })
            .collect();
        source = DataSource::new(rows).unwrap();
        let strict = metrics::error(&source, &metrics::bayes(&source, Tie::Strict));
        let inclusive = metrics::error(&source, &metrics::bayes(&source, Tie::Inclusive));
        assert!(
            (strict - inclusive).abs() <= TOL,
            "q=½ rows changed the Bayes error: {strict} vs {inclusive}"
        );
    }
}

/// Draw `n` samples of (row, Y, Ŷ) from the generative model and compare
/// empirical error and opportunity-difference with the exact metrics.
fn simulate(
    source: &DataSource,
    f: &PredictorVec,
    n: usize,
    seed: u64,
) -> (f64, f64, f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let qhat = f.pointwise(source);
    let mut wrong = 0u64;
    // Per group: positives and predicted-positive positives.
    let mut pos = [0u64; 2];
    let mut tp = [0u64; 2];
    for _ in 0..n {
        let mut u = rng.gen_range(0.0..1.0);
        let mut row = source.len() - 1;
        for (i, &p) in source.p().iter().enumerate() {
            if u < p {
                row = i;
                break;
            }
            u -= p;
        }
        let y = rng.gen_bool(source.q()[row]);
        let yhat = rng.gen_bool(qhat[row]);
        if y != yhat {
            wrong += 1;
        }
        if y {
            let a = source.a()[row] as usize;
            pos[a] += 1;
            if yhat {
                tp[a] += 1;
            }
        }
    }
    let err = wrong as f64 / n as f64;
    let t0 = tp[0] as f64 / pos[0] as f64;
    let t1 = tp[1] as f64 / pos[1] as f64;
    // Standard errors: binomial for err, delta method for the TPR gap.
    let se_err = (err * (1.0 - err) / n as f64).sqrt();
    let se_d = (t0 * (1.0 - t0) / pos[0] as f64 + t1 * (1.0 - t1) / pos[1] as f64).sqrt();
    (err, t1 - t0, se_err, se_d)
}

#[test]
fn monte_carlo_simulation_agrees_with_exact_metrics() {
    let n = 1_000_000;
    let cloud = fixtures::cloud();
    // The soft predictor Q̂ = Q exercises fractional masses.
    let soft = PredictorVec::from_pointwise(&cloud, cloud.q()).unwrap();
    let cases = [
        (cloud.clone(), metrics::bayes(&cloud, Tie::Strict)),
        (cloud.clone(), soft),
        (fixtures::non_example(), {
            let s = fixtures::non_example();
            PredictorVec::ones(&s)
        }),
    ];
    for (k, (source, f)) in cases.iter().enumerate() {
        let exact = metrics::metric_point(source, f).unwrap();
        let (err, d, se_err, se_d) = simulate(source, f, n, 0x5117 + k as u64);
        assert!(
            (err - exact.error).abs() <= 3.0 * se_err.max(1e-9),
            "case {k}: empirical error {err} vs exact {} (3σ = {})",
            exact.error,
            3.0 * se_err
        );
        assert!(
            (d - exact.opp_diff).abs() <= 3.0 * se_d.max(1e-9),
            "case {k}: empirical opp-diff {d} vs exact {} (3σ = {})",
            exact.opp_diff,
            3.0 * se_d
        );
    }
}

#[test]
fn from_samples_recovers_the_cloud_distribution() {
    let cloud = fixtures::cloud();
    let mut rng = ChaCha8Rng::seed_from_u64(0xEC0);
    let n = 1_000_000;
    let mut records = Vec::with_capacity(n);
    for _ in 0..n {
        let mut u = rng.gen_range(0.0..1.0);
        let mut row = cloud.len() - 1;
        for (i, &p) in cloud.p().iter().enumerate() {
            if u < p {
                row = i;
                break;
            }
            u -= p;
        }
        let r = &cloud.rows()[row];
        let y = u8::from(rng.gen_bool(r.q));
        records.push((format!("{}|{}", r.x_label, r.a), r.a, y));
    }
    let est = DataSource::from_samples(records).unwrap();
    assert_eq!(est.len(), cloud.len());
    for r in est.rows() {
        let orig = cloud
            .rows()
            .iter()
            .find(|o| format!("{}|{}", o.x_label, o.a) == r.x_label && o.a == r.a)
            .expect("estimated row matches an original row");
        assert!((r.p - orig.p).abs() <= 0.01, "mass off: {} vs {}", r.p, orig.p);
        assert!((r.q - orig.q).abs() <= 0.01, "rate off: {} vs {}", r.q, orig.q);
    }
}

#[test]
fn from_samples_exactly_recovers_enumerated_support() {
    // Weighted full enumeration of a deterministic source's support:
    // 3 copies of (u,0,y=1), 1 copy of (v,0,y=0), 4 copies of (w,1,y=1).
    let mut records = vec![];
    records.extend(std::iter::repeat_n(("u", 0u8, 1u8), 3));
    records.push(("v", 0, 0));
    records.extend(std::iter::repeat_n(("w", 1u8, 1u8), 4));
    let source = DataSource::from_samples(records).unwrap();
    assert_eq!(source.p(), &[3.0 / 8.0, 1.0 / 8.0, 4.0 / 8.0]);
    assert_eq!(source.q(), &[1.0, 0.0, 1.0]);
    assert!(source.is_deterministic());
}
