//! Gate and query counts of the phase-estimation pipeline under the
//! unit-constant convention.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Printed with every report.
pub const CONVENTION: &str = "unit constants: each O(.) evaluated with constant 1, log-log divisor \
retained; L = ln(tau/eta); register sizes use log2; query cost #_A defaults to log2(n); \
missing ||A||_m defaults to 1/(2*pi) so tau = s^2";

/// `τ = 2π s² ‖A‖_m`.
pub fn tau<T: Real>(s: usize, a_max: T) -> T {
    T::TAU() * T::from_count(s * s) * a_max
}

/// Cost of one controlled `U(2π)` by sparse Hamiltonian simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HamSimCost<T> {
    pub queries: T,
    pub two_qubit_gates: T,
    /// `queries + two_qubit_gates`
    pub t_u: T,
}

/// With `L = ln(τ/η)`: queries `τ L / ln L`, two-qubit gates `τ log₂(n) L² / ln L`.
pub fn hamsim_cost<T: Real>(tau: T, eta: T, n: usize) -> Result<HamSimCost<T>> {
    if !(eta > T::zero()) || !(tau > eta) || n < 2 {
        return Err(Error::Domain(format!("need 0 < eta < tau and n >= 2 (tau = {tau}, eta = {eta}, n = {n})")));
    }
    let l = (tau / eta).ln();
    let ll = l.ln();
    if !(ll > T::zero()) {
        return Err(Error::Regime(format!("tau/eta = {} <= e makes ln ln(tau/eta) <= 0", tau / eta)));
    }
    let queries = tau * l / ll;
    let two_qubit_gates = tau * T::from_count(n).log2() * l * l / ll;
    Ok(HamSimCost { queries, two_qubit_gates, t_u: queries + two_qubit_gates })
}

/// `2^m · cost_U + m log₂ m`.
pub fn qpe_run_cost<T: Real>(m: u32, cost_u: T) -> T {
    let mm = T::from_u32(m).unwrap();
    let qft = if m > 1 { mm * mm.log2() } else { T::zero() };
    T::exp2i(m as i32) * cost_u + qft
}

/// Oracle-model time `N 2^m s² log₂(n) ln²(s²/η)`.
pub fn t_lgd<T: Real>(n_samples: usize, m: u32, s: usize, n: usize, eta: T) -> T {
    let s2 = T::from_count(s * s);
    T::from_count(n_samples) * T::exp2i(m as i32) * s2 * T::from_count(n).log2() * (s2 / eta).ln().powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostInputs<T> {
    pub n: usize,
    pub s: usize,
    pub m: u32,
    pub n_samples: usize,
    pub eta: T,
    /// Entry bound `‖A‖_m`.
    pub a_max: Option<T>,
    /// `#_A`, cost of one oracle query.
    pub query_cost: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResourceReport<T> {
    pub tau: T,
    pub queries: T,
    pub two_qubit_gates: T,
    pub t_u: T,
    /// `#_U = queries · #_A + two_qubit_gates`
    pub unitary_cost: T,
    pub query_cost: T,
    /// Per-run phase-estimation cost with `T_U` per controlled unitary.
    pub n_qpe_cost: T,
    /// `N · n_qpe_cost`
    pub total_steps: T,
    pub t_lgd: T,
    pub inputs: CostInputs<T>,
    pub convention: &'static str,
}

/// Full resource accounting for `N` runs with an `m`-qubit pointer.
pub fn total_cost<T: Real>(inputs: &CostInputs<T>) -> Result<ResourceReport<T>> {
    if inputs.s == 0 || inputs.m == 0 || inputs.n_samples == 0 {
        return Err(Error::Domain("s, m and N must be positive".into()));
    }
    let a_max = inputs.a_max.unwrap_or_else(|| T::one() / T::TAU());
    if !(a_max > T::zero()) {
        return Err(Error::Domain(format!("entry bound must be positive, got {a_max}")));
    }
    let query_cost = inputs.query_cost.unwrap_or_else(|| T::from_count(inputs.n).log2());
    let tau = tau(inputs.s, a_max);
    let ham = hamsim_cost(tau, inputs.eta, inputs.n)?;
    let n_qpe_cost = qpe_run_cost(inputs.m, ham.t_u);
    Ok(ResourceReport {
        tau,
        queries: ham.queries,
        two_qubit_gates: ham.two_qubit_gates,
        t_u: ham.t_u,
        unitary_cost: ham.queries * query_cost + ham.two_qubit_gates,
        query_cost,
        n_qpe_cost,
        total_steps: T::from_count(inputs.n_samples) * n_qpe_cost,
        t_lgd: t_lgd(inputs.n_samples, inputs.m, inputs.s, inputs.n, inputs.eta),
        inputs: *inputs,
        convention: CONVENTION,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    #[test]
    fn tau_examples() {
        assert!((tau(3, 0.5) - 9.0 * PI).abs() < 1e-12);
        assert!((tau(1, 1.0 / (2.0 * PI)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hamsim_at_e_squared() {
        let eta = 0.3;
        let t = E * E * eta;
        let c = hamsim_cost(t, eta, 4).unwrap();
        assert!((c.queries - 2.0 * t / 2f64.ln()).abs() < 1e-12);
        assert_eq!(c.t_u, c.queries + c.two_qubit_gates);
    }

    #[test]
    fn hamsim_regime_and_domain() {
        assert_eq!(hamsim_cost(2.0, 1.0, 4).unwrap_err().kind(), "RegimeError");
        assert_eq!(hamsim_cost(1.0, 2.0, 4).unwrap_err().kind(), "DomainError");
        assert_eq!(hamsim_cost(10.0, 0.1, 1).unwrap_err().kind(), "DomainError");
    }

    #[test]
    fn gates_scale_with_log_n() {
        let a = hamsim_cost(28.274f64, 0.1, 16).unwrap();
        let b = hamsim_cost(28.274f64, 0.1, 32).unwrap();
        assert!((b.two_qubit_gates / a.two_qubit_gates - 5.0 / 4.0).abs() < 1e-14);
        assert_eq!(a.queries, b.queries);
    }

    #[test]
    fn direct_evaluation() {
        // Independent evaluation of the formulas at τ = 28.274, η = 0.1, n = 16.
        let c = hamsim_cost(28.274f64, 0.1, 16).unwrap();
        let l = 282.74f64.ln();
        let ll = l.ln();
        assert!((c.queries - 28.274 * l / ll).abs() < 1e-9);
        assert!((c.two_qubit_gates - 28.274 * 4.0 * l * l / ll).abs() < 1e-9);
        assert!((c.queries - 92.21391).abs() < 1e-4);
        assert!((c.two_qubit_gates - 2082.01596).abs() < 1e-4);
    }

    #[test]
    fn qpe_run_cost_examples() {
        assert_eq!(qpe_run_cost(1, 1.0), 2.0);
        assert_eq!(qpe_run_cost(4, 0.0), 8.0);
        assert!((qpe_run_cost(10, 100.0f64) - (102400.0 + 10.0 * 10f64.log2())).abs() < 1e-9);
        assert!((qpe_run_cost(10, 100.0f64) - 102433.22).abs() < 0.01);
    }

    #[test]
    fn t_lgd_example() {
        let t = t_lgd(100, 6, 2, 16, 0.1f64);
        assert!((t - 102400.0 * 40f64.ln().powi(2)).abs() < 1e-6);
        assert!((t - 1.394e6).abs() < 1e3);
    }

    #[test]
    fn steps_are_n_times_run_cost() {
        let r =
            total_cost(&CostInputs { n: 16, s: 2, m: 6, n_samples: 100, eta: 0.1f64, a_max: None, query_cost: None })
                .unwrap();
        assert_eq!(r.total_steps, 100.0 * r.n_qpe_cost);
        assert!((r.tau - 4.0).abs() < 1e-12);
        assert_eq!(r.query_cost, 4.0);
        assert_eq!(r.unitary_cost, r.queries * 4.0 + r.two_qubit_gates);
    }
}
