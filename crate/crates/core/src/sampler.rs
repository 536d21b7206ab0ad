//! Uniform spectral sampling composed with the pointer-register model.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::SpectrumInfo;
use crate::qpe::{sample_outcome, QpeConfig, QpeMode};
use crate::rng;

/// One sampling outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleRecord {
    /// Index of the sampled eigenvalue. Retained for verification only.
    pub eigen_index: usize,
    pub outcome: u64,
    /// `outcome / 2^m_used`, exact.
    pub lambda_tilde: f64,
    pub m_used: u32,
}

impl SampleRecord {
    pub fn new(eigen_index: usize, outcome: u64, m_used: u32) -> Self {
        let lambda_tilde = outcome as f64 / (1u64 << m_used) as f64;
        Self { eigen_index, outcome, lambda_tilde, m_used }
    }
}

/// Ordered sample string with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleString {
    pub records: Vec<SampleRecord>,
    pub n: usize,
    pub seed: u64,
    pub mode: QpeMode,
}

impl SampleString {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn lambda_tildes(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.lambda_tilde)
    }

    /// Line-delimited `j,k,m,mode` audit dump.
    pub fn to_dump(&self) -> String {
        let mut out = String::with_capacity(self.records.len() * 16);
        for r in &self.records {
            let _ = writeln!(out, "{},{},{},{}", r.eigen_index, r.outcome, r.m_used, self.mode);
        }
        out
    }

    /// Parses a dump produced by [`to_dump`](Self::to_dump).
    pub fn from_dump(text: &str, n: usize, seed: u64) -> Result<Self> {
        let mut records = Vec::new();
        let mut mode = None;
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let bad = |msg: &str| Error::Parse { line: i + 1, msg: msg.to_string() };
            let f: Vec<&str> = line.trim().split(',').collect();
            if f.len() != 4 {
                return Err(bad("expected j,k,m,mode"));
            }
            let j: usize = f[0].parse().map_err(|_| bad("bad j"))?;
            let k: u64 = f[1].parse().map_err(|_| bad("bad k"))?;
            let m: u32 = f[2].parse().map_err(|_| bad("bad m"))?;
            let md: QpeMode = f[3].parse().map_err(|_| bad("bad mode"))?;
            if m == 0 || m > crate::qpe::MAX_POINTER_QUBITS || k >= 1u64 << m || j >= n {
                return Err(bad("record out of range"));
            }
            if *mode.get_or_insert(md) != md {
                return Err(bad("mixed modes"));
            }
            records.push(SampleRecord::new(j, k, m));
        }
        Ok(Self { records, n, seed, mode: mode.unwrap_or_default() })
    }
}

/// Draws a uniform eigen index, then a pointer outcome for that eigenvalue.
pub fn draw_sample<R: Rng + ?Sized>(spectrum: &SpectrumInfo, config: &QpeConfig, rng: &mut R) -> Result<SampleRecord> {
    let j = rng.random_range(0..spectrum.dim());
    let (k, _) = sample_outcome(spectrum.eigenvalues[j], config, rng)?;
    Ok(SampleRecord::new(j, k, config.m()))
}

/// Records `start..start + count`, record `ℓ` drawn from stream `ℓ` of `seed`.
pub fn draw_records(
    spectrum: &SpectrumInfo,
    config: &QpeConfig,
    seed: u64,
    start: usize,
    count: usize,
) -> Result<Vec<SampleRecord>> {
    (start..start + count)
        .into_par_iter()
        .map(|l| draw_sample(spectrum, config, &mut rng::stream(seed, l as u64)))
        .collect()
}

/// `N` records; reproducible and independent of thread scheduling.
pub fn draw_batch(spectrum: &SpectrumInfo, config: &QpeConfig, n_samples: usize, seed: u64) -> Result<SampleString> {
    if n_samples == 0 {
        return Err(Error::InvalidN(0));
    }
    Ok(SampleString {
        records: draw_records(spectrum, config, seed, 0, n_samples)?,
        n: spectrum.dim(),
        seed,
        mode: config.mode(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(v: &[f64]) -> SpectrumInfo {
        SpectrumInfo::from_eigenvalues(v.to_vec()).unwrap()
    }

    #[test]
    fn single_dyadic_eigenvalue() {
        let s = draw_batch(&spec(&[0.5]), &QpeConfig::new(3, QpeMode::FullDistribution).unwrap(), 50, 1).unwrap();
        assert!(s.records.iter().all(|r| *r == SampleRecord::new(0, 4, 3)));
        assert!(s.lambda_tildes().all(|l| l == 0.5));
    }

    #[test]
    fn floor_mode_is_deterministic_per_eigenvalue() {
        let s = draw_batch(&spec(&[0.3]), &QpeConfig::new(8, QpeMode::Floor).unwrap(), 20, 9).unwrap();
        assert!(s.lambda_tildes().all(|l| l == 0.296875));
    }

    #[test]
    fn zero_samples_is_error() {
        let err = draw_batch(&spec(&[0.5]), &QpeConfig::new(3, QpeMode::Floor).unwrap(), 0, 1).unwrap_err();
        assert_eq!(err.kind(), "InvalidN");
    }

    #[test]
    fn same_inputs_same_string() {
        let sp = spec(&[0.1, 0.2, 0.45]);
        let c = QpeConfig::new(6, QpeMode::FullDistribution).unwrap();
        assert_eq!(draw_batch(&sp, &c, 500, 3).unwrap(), draw_batch(&sp, &c, 500, 3).unwrap());
        assert_ne!(draw_batch(&sp, &c, 500, 3).unwrap(), draw_batch(&sp, &c, 500, 4).unwrap());
    }

    #[test]
    fn prefix_property() {
        let sp = spec(&[0.1, 0.2, 0.45]);
        let c = QpeConfig::new(6, QpeMode::FullDistribution).unwrap();
        let full = draw_batch(&sp, &c, 300, 3).unwrap();
        let tail = draw_records(&sp, &c, 3, 100, 200).unwrap();
        assert_eq!(&full.records[100..], &tail[..]);
    }

    #[test]
    fn eigen_index_frequencies() {
        let s = draw_batch(&spec(&[0.25, 0.5]), &QpeConfig::new(4, QpeMode::FullDistribution).unwrap(), 100_000, 11)
            .unwrap();
        let ones = s.records.iter().filter(|r| r.eigen_index == 1).count() as f64 / 1e5;
        assert!((ones - 0.5).abs() <= 0.01);
    }

    #[test]
    fn floor_batch_mean() {
        // diag(1/2, 1/8) is dyadic at m = 10, so E[λ̃] = 5/16 exactly; σ of the mean is 0.1875/100.
        let s = draw_batch(&spec(&[0.5, 0.125]), &QpeConfig::new(10, QpeMode::Floor).unwrap(), 10_000, 5).unwrap();
        let mean = s.lambda_tildes().sum::<f64>() / 1e4;
        let expect = (0.5 + 0.125) / 2.0;
        assert!((mean - expect).abs() <= 3.0 * 0.1875 / 100.0 + 2f64.powi(-10));
    }

    #[test]
    fn dump_round_trip() {
        let s = draw_batch(&spec(&[0.1, 0.3]), &QpeConfig::new(5, QpeMode::Nearest).unwrap(), 40, 2).unwrap();
        let back = SampleString::from_dump(&s.to_dump(), 2, 2).unwrap();
        assert_eq!(back, s);
        assert!(SampleString::from_dump("0,40,5,nearest\n", 2, 2).is_err());
        assert!(SampleString::from_dump("0,1,5,floor\n1,1,5,full\n", 2, 2).is_err());
    }
}
