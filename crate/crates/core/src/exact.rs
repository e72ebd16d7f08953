//! Exact rational-arithmetic twin of the metrics and the EO optimum, for
//! small sources whose masses and rates are ratios of small integers.
//!
//! This is the reference arithmetic the float pipeline is tested against:
//! no rounding, no tolerances. Sizes are limited (enumeration is
//! exponential), which is fine for the embedded instances.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Rational = Ratio<i128>;

/// Convenience constructor for `n/d`.
pub fn ratio(n: i128, d: i128) -> Rational {
    Ratio::new(n, d)
}

/// A data source with exact rational masses and rates.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSource {
    p: Vec<Rational>,
    q: Vec<Rational>,
    a: Vec<u8>,
}

impl RationalSource {
    /// `p` entries must be positive, `q` entries in `[0,1]`, `a` in `{0,1}`.
    /// The mass sum is not forced to one so that unnormalized instances can
    /// be evaluated too.
    pub fn new(p: Vec<Rational>, q: Vec<Rational>, a: Vec<u8>) -> Self {
        assert_eq!(p.len(), q.len());
        assert_eq!(p.len(), a.len());
        assert!(p.iter().all(|v| v.is_positive()));
        assert!(q
            .iter()
            .all(|v| !v.is_negative() && *v <= Rational::one()));
        assert!(a.iter().all(|&v| v <= 1));
        Self { p, q, a }
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn p(&self) -> &[Rational] {
        &self.p
    }

    pub fn q(&self) -> &[Rational] {
        &self.q
    }

    pub fn a(&self) -> &[u8] {
        &self.a
    }

    pub fn mass(&self) -> Rational {
        self.p.iter().sum()
    }

    fn half() -> Rational {
        ratio(1, 2)
    }

    /// `⟨P,Q⟩ = P(Y=1)`.
    pub fn label_mass(&self) -> Rational {
        self.p.iter().zip(&self.q).map(|(p, q)| p * q).sum()
    }

    /// `τ = max{P(Y=0), P(Y=1)}`.
    pub fn trivial_accuracy(&self) -> Rational {
        let y1 = self.label_mass();
        let y0 = self.mass() - y1;
        y0.max(y1)
    }

    /// `τ* = max{P(Q≥½), P(Q≤½)}`.
    pub fn tau_star(&self) -> Rational {
        let half = Self::half();
        let ge: Rational = self
            .p
            .iter()
            .zip(&self.q)
            .filter(|(_, q)| **q >= half)
            .map(|(p, _)| *p)
            .sum();
        let le: Rational = self
            .p
            .iter()
            .zip(&self.q)
            .filter(|(_, q)| **q <= half)
            .map(|(p, _)| *p)
            .sum();
        ge.max(le)
    }

    /// `acc(Bayes) = ½ + Σ p_i·|q_i − ½|`.
    pub fn bayes_accuracy(&self) -> Rational {
        let half = Self::half();
        half + self
            .p
            .iter()
            .zip(&self.q)
            .map(|(p, q)| p * (q - half).abs())
            .sum::<Rational>()
    }

    /// Strict-threshold Bayes predictor `f_i = p_i·1[q_i > ½]`.
    pub fn bayes(&self) -> Vec<Rational> {
        let half = Self::half();
        self.p
            .iter()
            .zip(&self.q)
            .map(|(p, q)| if *q > half { *p } else { Rational::zero() })
            .collect()
    }

    /// `err(F) = ⟨P,Q⟩ + ⟨F, 1−2Q⟩`.
    pub fn error(&self, f: &[Rational]) -> Rational {
        assert_eq!(f.len(), self.len());
        self.label_mass()
            + f.iter()
                .zip(&self.q)
                .map(|(fi, q)| fi * (Rational::one() - q - q))
                .sum::<Rational>()
    }

    fn denominators(&self) -> (Rational, Rational) {
        let mut d = [Rational::zero(), Rational::zero()];
        for ((p, q), &a) in self.p.iter().zip(&self.q).zip(&self.a) {
            d[a as usize] += p * q;
        }
        assert!(
            d[0].is_positive() && d[1].is_positive(),
            "opportunity-difference undefined: a group has no positive-label mass"
        );
        (d[0], d[1])
    }

    /// `d(F) = ⟨F,Q^(1)⟩/d1 − ⟨F,Q^(0)⟩/d0`.
    pub fn opp_diff(&self, f: &[Rational]) -> Rational {
        assert_eq!(f.len(), self.len());
        let (d0, d1) = self.denominators();
        let mut num = [Rational::zero(), Rational::zero()];
        for ((fi, q), &a) in f.iter().zip(&self.q).zip(&self.a) {
            num[a as usize] += fi * q;
        }
        num[1] / d1 - num[0] / d0
    }

    /// Exact minimum of `err(F)` over `{0 ⊑ F ⊑ P, d(F) = 0}`.
    ///
    /// A minimizer of a linear functional over the box intersected with
    /// one hyperplane has at most one coordinate strictly between its
    /// bounds, so enumerating every choice of fractional coordinate and
    /// every bound pattern on the rest is exhaustive.
    pub fn min_error_eo(&self) -> Rational {
        let n = self.len();
        assert!(n <= 16, "exhaustive enumeration limited to 16 rows");
        let (d0, d1) = self.denominators();
        let w: Vec<Rational> = self
            .q
            .iter()
            .zip(&self.a)
            .map(|(q, &a)| if a == 1 { q / d1 } else { -q / d0 })
            .collect();

        let mut best: Option<Rational> = None;
        let mut consider = |f: &[Rational]| {
            let e = self.error(f);
            if best.is_none_or(|b| e < b) {
                best = Some(e);
            }
        };

        // All-bound candidates.
        for mask in 0u32..(1 << n) {
            let f: Vec<Rational> = (0..n)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        self.p[i]
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            if f.iter().zip(&w).map(|(fi, wi)| fi * wi).sum::<Rational>() == Rational::zero() {
                consider(&f);
            }
        }
        // One fractional coordinate solved from the constraint.
        for i in 0..n {
            if w[i] == Rational::zero() {
                continue;
            }
            for mask in 0u32..(1 << (n - 1)) {
                let mut f = vec![Rational::zero(); n];
                let mut bit = 0;
                for (j, fj) in f.iter_mut().enumerate() {
                    if j == i {
                        continue;
                    }
                    if mask >> bit & 1 == 1 {
                        *fj = self.p[j];
                    }
                    bit += 1;
                }
                let rest: Rational = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| f[j] * w[j])
                    .sum();
                let fi = -rest / w[i];
                if !fi.is_negative() && fi <= self.p[i] {
                    f[i] = fi;
                    consider(&f);
                }
            }
        }
        best.expect("constant classifiers are always feasible")
    }

    /// Non-trivial predictors exist iff `τ* < 1` (for unit-mass sources).
    pub fn nontrivial_exists(&self) -> bool {
        self.tau_star() < self.mass()
    }

    /// Row-wise conversion to floats (nearest rounding).
    pub fn to_f64(&self) -> (Vec<f64>, Vec<f64>, Vec<u8>) {
        let conv = |r: &Rational| *r.numer() as f64 / *r.denom() as f64;
        (
            self.p.iter().map(conv).collect(),
            self.q.iter().map(conv).collect(),
            self.a.clone(),
        )
    }
}

/// The four-row instance with masses `[3/8, 2/8, 1/8, 2/8]`, rates
/// `[9/20, 15/20, 15/20, 16/20]` and groups `[0, 1, 0, 1]`.
pub fn cloud() -> RationalSource {
    RationalSource::new(
        vec![ratio(3, 8), ratio(2, 8), ratio(1, 8), ratio(2, 8)],
        vec![ratio(9, 20), ratio(15, 20), ratio(15, 20), ratio(16, 20)],
        vec![0, 1, 0, 1],
    )
}
