//! Gate-level statevector simulation of phase estimation on tiny instances.
//!
//! Layout: amplitude index `sys * 2^m + ptr`, pointer qubit `q` has weight `2^q`.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::OutcomeDistribution;
use crate::error::{Error, Result};
use crate::matrix::{dense_eigen, ScaledMatrix};

pub const MAX_CIRCUIT_DIM: usize = 8;
pub const MAX_CIRCUIT_QUBITS: u32 = 6;

/// System-register input of the circuit.
#[derive(Debug, Clone)]
pub enum QpeInput {
    /// Eigenvector `j` (eigenvalues sorted ascending).
    EigenIndex(usize),
    /// Arbitrary normalized state in the computational basis.
    State(Vec<Complex64>),
}

struct Register {
    amps: Vec<Complex64>,
    m: u32,
    dim: usize,
}

impl Register {
    fn ptr_len(&self) -> usize {
        1 << self.m
    }

    fn hadamard(&mut self, q: u32) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                self.amps[i | bit] = (a - b) * FRAC_1_SQRT_2;
            }
        }
    }

    fn controlled_phase(&mut self, control: u32, target: u32, angle: f64) {
        let mask = (1usize << control) | (1usize << target);
        let phase = Complex64::from_polar(1.0, angle);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *a *= phase;
            }
        }
    }

    fn swap(&mut self, q1: u32, q2: u32) {
        let (b1, b2) = (1usize << q1, 1usize << q2);
        for i in 0..self.amps.len() {
            if i & b1 != 0 && i & b2 == 0 {
                self.amps.swap(i, (i & !b1) | b2);
            }
        }
    }

    /// Applies `u` to the system register on branches where pointer qubit `q` is 1.
    fn controlled_system_unitary(&mut self, q: u32, u: &DMatrix<Complex64>) {
        let p = self.ptr_len();
        for ptr in (0..p).filter(|ptr| ptr & (1 << q) != 0) {
            let v = DVector::from_fn(self.dim, |s, _| self.amps[s * p + ptr]);
            let w = u * v;
            for s in 0..self.dim {
                self.amps[s * p + ptr] = w[s];
            }
        }
    }

    fn inverse_qft(&mut self) {
        let m = self.m;
        for q in 0..m / 2 {
            self.swap(q, m - 1 - q);
        }
        for target in 0..m {
            for control in (0..target).rev() {
                let angle = -TAU / f64::from(1u32 << (target - control + 1));
                self.controlled_phase(control, target, angle);
            }
            self.hadamard(target);
        }
    }

    fn pointer_distribution(&self) -> Vec<f64> {
        let p = self.ptr_len();
        let mut probs = vec![0.0; p];
        for (i, a) in self.amps.iter().enumerate() {
            probs[i % p] += a.norm_sqr();
        }
        probs
    }
}

/// Applies the gate-level inverse QFT to a pointer-only state of `2^m` amplitudes.
pub fn inverse_qft(state: &[Complex64]) -> Vec<Complex64> {
    let m = state.len().trailing_zeros();
    assert_eq!(state.len(), 1 << m, "state length must be a power of two");
    let mut reg = Register { amps: state.to_vec(), m, dim: 1 };
    reg.inverse_qft();
    reg.amps
}

/// Runs the phase-estimation circuit: prepare `|ψ⟩|0…0⟩`, Hadamard every
/// pointer qubit, apply controlled `U = exp(2πi A)` `2^q` times on pointer
/// qubit `q`, inverse QFT, and return the exact pointer distribution.
pub fn statevector_qpe(a: &ScaledMatrix, input: &QpeInput, m: u32) -> Result<OutcomeDistribution<f64>> {
    let n = a.dim();
    if n > MAX_CIRCUIT_DIM || m > MAX_CIRCUIT_QUBITS {
        return Err(Error::TooLarge(format!(
            "circuit oracle limited to n <= {MAX_CIRCUIT_DIM}, m <= {MAX_CIRCUIT_QUBITS}"
        )));
    }
    if m == 0 {
        return Err(Error::InvalidConfig("pointer register needs at least one qubit".into()));
    }
    let eig = dense_eigen(&a.matrix, MAX_CIRCUIT_DIM)?;
    let psi: Vec<Complex64> = match input {
        QpeInput::EigenIndex(j) => {
            if *j >= n {
                return Err(Error::NotEigenIndex { index: *j, dim: n });
            }
            eig.eigenvectors.column(*j).iter().copied().collect()
        }
        QpeInput::State(v) => {
            if v.len() != n {
                return Err(Error::Dimension(format!("state of length {} for n = {n}", v.len())));
            }
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(Error::Domain(format!("input state has norm {norm}")));
            }
            v.clone()
        }
    };

    // U(2π) = V diag(exp(2πi λ)) V†
    let phases = DMatrix::from_diagonal(&DVector::from_iterator(
        n,
        eig.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, TAU * l)),
    ));
    let u = &eig.eigenvectors * phases * eig.eigenvectors.adjoint();

    let p = 1usize << m;
    let mut reg = Register { amps: vec![Complex64::default(); n * p], m, dim: n };
    for (s, &amp) in psi.iter().enumerate() {
        reg.amps[s * p] = amp;
    }
    for q in 0..m {
        reg.hadamard(q);
    }
    for q in 0..m {
        for _ in 0..(1u32 << q) {
            reg.controlled_system_unitary(q, &u);
        }
    }
    reg.inverse_qft();
    Ok(OutcomeDistribution::from_dense(m, reg.pointer_distribution()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{rescale, SparseHermitianMatrix, SpectralBounds};

    fn scaled_diag(values: &[f64]) -> ScaledMatrix {
        let a = SparseHermitianMatrix::diagonal(values).unwrap();
        rescale(&a, SpectralBounds { lambda_max: Some(0.5), lambda_min: None }).unwrap()
    }

    #[test]
    fn inverse_qft_matches_dft_matrix() {
        let m = 3u32;
        let n = 1usize << m;
        let state: Vec<Complex64> =
            (0..n).map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos())).collect();
        let out = inverse_qft(&state);
        for (k, o) in out.iter().enumerate() {
            let expect: Complex64 = (0..n)
                .map(|y| state[y] * Complex64::from_polar(1.0, -TAU * (k * y) as f64 / n as f64))
                .sum::<Complex64>()
                / (n as f64).sqrt();
            assert!((o - expect).norm() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn dyadic_eigenvalue_gives_point_mass() {
        let a = scaled_diag(&[0.25, 0.5]);
        let d = statevector_qpe(&a, &QpeInput::EigenIndex(0), 2).unwrap();
        assert!((d.prob(1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn superposed_input_mixes_branches() {
        let a = scaled_diag(&[0.25, 0.5]);
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let d = statevector_qpe(&a, &QpeInput::State(vec![h, h]), 2).unwrap();
        assert!((d.prob(1) - 0.5).abs() < 1e-12);
        assert!((d.prob(2) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let a = scaled_diag(&[0.25, 0.5]);
        assert_eq!(statevector_qpe(&a, &QpeInput::EigenIndex(2), 2).unwrap_err().kind(), "NotEigenIndex");
        assert_eq!(statevector_qpe(&a, &QpeInput::EigenIndex(0), 7).unwrap_err().kind(), "TooLarge");
        let big = scaled_diag(&[0.5; 9]);
        assert_eq!(statevector_qpe(&big, &QpeInput::EigenIndex(0), 2).unwrap_err().kind(), "TooLarge");
        let bad = QpeInput::State(vec![Complex64::new(1.0, 0.0); 2]);
        assert_eq!(statevector_qpe(&a, &bad, 2).unwrap_err().kind(), "DomainError");
    }
}
