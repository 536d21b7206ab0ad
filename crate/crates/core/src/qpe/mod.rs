//! Measurement statistics of the m-qubit pointer register of quantum phase
//! estimation with `U = exp(2πi A)`, so the measured phase is the eigenvalue.

mod circuit;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use circuit::{inverse_qft, statevector_qpe, QpeInput, MAX_CIRCUIT_DIM, MAX_CIRCUIT_QUBITS};

/// Largest pointer register accepted.
pub const MAX_POINTER_QUBITS: u32 = 40;
/// Largest register for which a full distribution is materialized.
pub const MAX_DENSE_POINTER_QUBITS: u32 = 24;

/// Outcome model of the pointer register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QpeMode {
    /// Binary truncation: `k = floor(2^m λ)`.
    Floor,
    /// Nearest grid point, halves rounded up.
    Nearest,
    /// Standard phase-estimation law with leakage tails.
    #[default]
    FullDistribution,
}

impl QpeMode {
    pub fn as_str(self) -> &'static str {
        match self {
            QpeMode::Floor => "floor",
            QpeMode::Nearest => "nearest",
            QpeMode::FullDistribution => "full",
        }
    }
}

impl fmt::Display for QpeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QpeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "floor" => Ok(QpeMode::Floor),
            "nearest" => Ok(QpeMode::Nearest),
            "full" | "full_distribution" => Ok(QpeMode::FullDistribution),
            other => Err(Error::InvalidConfig(format!("unknown QPE mode '{other}'"))),
        }
    }
}

/// Pointer-register size and outcome model. The evolution time is fixed at 2π.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QpeConfig {
    m: u32,
    mode: QpeMode,
}

impl QpeConfig {
    pub fn new(m: u32, mode: QpeMode) -> Result<Self> {
        if m == 0 || m > MAX_POINTER_QUBITS {
            return Err(Error::InvalidConfig(format!("pointer qubits must be in 1..={MAX_POINTER_QUBITS}, got {m}")));
        }
        Ok(Self { m, mode })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn mode(&self) -> QpeMode {
        self.mode
    }

    /// Evolution time `t` of `U(t) = exp(i t A)`.
    pub fn time(&self) -> f64 {
        std::f64::consts::TAU
    }

    /// Number of pointer states, `2^m`.
    pub fn grid(&self) -> u64 {
        1u64 << self.m
    }

    /// Grid spacing `2^-m`.
    pub fn resolution<T: Real>(&self) -> T {
        T::exp2i(-(self.m as i32))
    }
}

/// Probability law of the pointer outcome `k` for one eigenvalue.
///
/// Stored sparsely as `(k, P(k))` pairs sorted by `k`; absent outcomes have
/// probability zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeDistribution<T> {
    m: u32,
    support: Vec<(u64, T)>,
}

impl<T: Real> OutcomeDistribution<T> {
    pub fn point_mass(m: u32, k: u64) -> Self {
        Self { m, support: vec![(k, T::one())] }
    }

    /// Dense probabilities indexed by `k`.
    pub fn from_dense(m: u32, probabilities: Vec<T>) -> Self {
        let support = probabilities.into_iter().enumerate().map(|(k, p)| (k as u64, p)).collect();
        Self { m, support }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn support(&self) -> &[(u64, T)] {
        &self.support
    }

    pub fn prob(&self, k: u64) -> T {
        self.support.binary_search_by_key(&k, |&(kk, _)| kk).map(|i| self.support[i].1).unwrap_or_else(|_| T::zero())
    }

    pub fn total(&self) -> T {
        self.support.iter().map(|&(_, p)| p).sum()
    }

    /// All `2^m` probabilities; only sensible for small `m`.
    pub fn to_dense(&self) -> Vec<T> {
        let mut out = vec![T::zero(); 1usize << self.m];
        for &(k, p) in &self.support {
            out[k as usize] = p;
        }
        out
    }

    /// Total-variation distance `½ Σ |P(k) − Q(k)|`.
    pub fn total_variation(&self, other: &Self) -> T {
        assert_eq!(self.m, other.m, "distributions over different registers");
        let (a, b) = (&self.support, &other.support);
        let (mut i, mut j) = (0, 0);
        let mut acc = T::zero();
        while i < a.len() || j < b.len() {
            let ka = a.get(i).map_or(u64::MAX, |x| x.0);
            let kb = b.get(j).map_or(u64::MAX, |x| x.0);
            if ka == kb {
                acc = acc + (a[i].1 - b[j].1).abs();
                i += 1;
                j += 1;
            } else if ka < kb {
                acc = acc + a[i].1.abs();
                i += 1;
            } else {
                acc = acc + b[j].1.abs();
                j += 1;
            }
        }
        acc / T::lit(2.0)
    }
}

fn check_lambda<T: Real>(lambda: T) -> Result<()> {
    if lambda > T::zero() && lambda <= T::lit(0.5) {
        Ok(())
    } else {
        Err(Error::Domain(format!("eigenvalue {lambda} outside (0, 1/2]")))
    }
}

/// `2^m λ` split into integer and fractional parts; both exact.
fn grid_position<T: Real>(lambda: T, m: u32) -> (u64, T) {
    let scaled = lambda * T::exp2i(m as i32);
    let base = scaled.floor();
    (base.to_u64().expect("grid index fits u64"), scaled - base)
}

/// Law of the pointer outcome for eigenvalue `lambda`.
pub fn outcome_distribution<T: Real>(lambda: T, config: &QpeConfig) -> Result<OutcomeDistribution<T>> {
    check_lambda(lambda)?;
    let m = config.m();
    let (base, frac) = grid_position(lambda, m);
    if frac == T::zero() {
        return Ok(OutcomeDistribution::point_mass(m, base));
    }
    match config.mode() {
        QpeMode::Floor => Ok(OutcomeDistribution::point_mass(m, base)),
        QpeMode::Nearest => {
            let k = if frac >= T::lit(0.5) { base + 1 } else { base };
            Ok(OutcomeDistribution::point_mass(m, k))
        }
        QpeMode::FullDistribution => {
            if m > MAX_DENSE_POINTER_QUBITS {
                return Err(Error::TooLarge(format!(
                    "full distribution over 2^{m} outcomes (cap 2^{MAX_DENSE_POINTER_QUBITS})"
                )));
            }
            // P(k) = sin²(2^m π δ) / (4^m sin²(π δ)) with δ = λ − k/2^m.
            // 2^m δ = frac − (k − base), so the numerator is sin²(π frac).
            let pi = T::PI();
            let grid = T::exp2i(m as i32);
            let numerator = (pi * frac).sin().powi(2);
            let probs = (0..config.grid())
                .map(|k| {
                    let offset = T::from_u64(k).unwrap() - T::from_u64(base).unwrap();
                    let s = (pi * (frac - offset) / grid).sin();
                    numerator / (grid * grid * s * s)
                })
                .collect();
            Ok(OutcomeDistribution::from_dense(m, probs))
        }
    }
}

/// Draws one pointer outcome; returns `(k, k / 2^m)`.
///
/// The full law is sampled bit by bit from least significant upward using
/// its exact conditional factorisation, so no `2^m` table is built.
pub fn sample_outcome<T, R>(lambda: T, config: &QpeConfig, rng: &mut R) -> Result<(u64, T)>
where
    T: Real,
    R: Rng + ?Sized,
{
    check_lambda(lambda)?;
    let m = config.m();
    let (base, frac) = grid_position(lambda, m);
    let k = if frac == T::zero() {
        base
    } else {
        match config.mode() {
            QpeMode::Floor => base,
            QpeMode::Nearest => {
                if frac >= T::lit(0.5) {
                    base + 1
                } else {
                    base
                }
            }
            QpeMode::FullDistribution => {
                // P(k_r = b | k_0..k_{r-1}) = cos²(π(2^{m-1-r} λ − (low + b 2^r) / 2^{r+1})).
                let pi = T::PI();
                let mut k = 0u64;
                for r in 0..m {
                    let shifted = lambda * T::exp2i((m - 1 - r) as i32);
                    let theta = shifted - shifted.floor();
                    let low = T::from_u64(k).unwrap() / T::exp2i(r as i32 + 1);
                    let p0 = (pi * (theta - low)).cos().powi(2);
                    let u = T::lit(rng.random::<f64>());
                    if u >= p0 {
                        k |= 1 << r;
                    }
                }
                k
            }
        }
    };
    Ok((k, T::from_u64(k).unwrap() * config.resolution::<T>()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(m: u32, mode: QpeMode) -> QpeConfig {
        QpeConfig::new(m, mode).unwrap()
    }

    #[test]
    fn dyadic_eigenvalue_is_exact_in_every_mode() {
        for mode in [QpeMode::Floor, QpeMode::Nearest, QpeMode::FullDistribution] {
            let d = outcome_distribution(0.25f64, &cfg(2, mode)).unwrap();
            assert_eq!(d.support(), &[(1, 1.0)]);
        }
    }

    #[test]
    fn three_eighths_with_two_qubits() {
        let d = outcome_distribution(0.375f64, &cfg(2, QpeMode::FullDistribution)).unwrap();
        // Independent closed form: P(k) = cos²(πδ) cos²(2πδ), δ = 3/8 − k/4.
        for k in 0..4u64 {
            let delta = 0.375 - k as f64 / 4.0;
            let pi = std::f64::consts::PI;
            let expect = (pi * delta).cos().powi(2) * (2.0 * pi * delta).cos().powi(2);
            assert!((d.prob(k) - expect).abs() < 1e-15);
        }
        assert!((d.prob(1) - 0.4268).abs() < 1e-4);
        assert!((d.prob(0) - 0.0732).abs() < 1e-4);
        assert_eq!(d.prob(1), d.prob(2));
        assert_eq!(outcome_distribution(0.375f64, &cfg(2, QpeMode::Floor)).unwrap().support(), &[(1, 1.0)]);
        assert_eq!(outcome_distribution(0.375f64, &cfg(2, QpeMode::Nearest)).unwrap().support(), &[(2, 1.0)]);
    }

    #[test]
    fn domain_errors() {
        let c = cfg(3, QpeMode::Floor);
        for bad in [0.0, -0.1, 0.51, f64::NAN] {
            assert_eq!(outcome_distribution(bad, &c).unwrap_err().kind(), "DomainError");
        }
        assert!(QpeConfig::new(0, QpeMode::Floor).is_err());
        assert!(QpeConfig::new(41, QpeMode::Floor).is_err());
        assert_eq!(outcome_distribution(0.3f64, &cfg(30, QpeMode::FullDistribution)).unwrap_err().kind(), "TooLarge");
    }

    #[test]
    fn deterministic_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(sample_outcome(0.5f64, &cfg(1, QpeMode::FullDistribution), &mut rng).unwrap(), (1, 0.5));
        assert_eq!(sample_outcome(0.3f64, &cfg(8, QpeMode::Floor), &mut rng).unwrap(), (76, 0.296875));
        assert_eq!(sample_outcome(0.3f64, &cfg(8, QpeMode::Nearest), &mut rng).unwrap(), (77, 0.30078125));
    }

    #[test]
    fn nearest_rounds_half_up() {
        let d = outcome_distribution(0.125f64, &cfg(2, QpeMode::Nearest)).unwrap();
        assert_eq!(d.support(), &[(1, 1.0)]);
    }

    #[test]
    fn generic_over_f32() {
        let d = outcome_distribution(0.375f32, &cfg(2, QpeMode::FullDistribution)).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-5);
        assert!((d.prob(1) - 0.4268).abs() < 1e-4);
    }

    #[test]
    fn total_variation_of_disjoint_point_masses() {
        let a = OutcomeDistribution::<f64>::point_mass(3, 1);
        let b = OutcomeDistribution::<f64>::point_mass(3, 5);
        assert_eq!(a.total_variation(&b), 1.0);
        assert_eq!(a.total_variation(&a), 0.0);
    }

    #[test]
    fn full_mode_frequencies_match_law() {
        let c = cfg(4, QpeMode::FullDistribution);
        let law = outcome_distribution(0.3f64, &c).unwrap().to_dense();
        let draws = 1_000_000usize;
        let mut counts = [0usize; 16];
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..draws {
            counts[sample_outcome(0.3f64, &c, &mut rng).unwrap().0 as usize] += 1;
        }
        for (k, &p) in law.iter().enumerate() {
            let se = (p * (1.0 - p) / draws as f64).sqrt();
            let freq = counts[k] as f64 / draws as f64;
            assert!((freq - p).abs() <= 3.0 * se + 1e-12, "bin {k}: {freq} vs {p}");
        }
    }
}
