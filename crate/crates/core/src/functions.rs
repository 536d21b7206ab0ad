//! Built-in spectral functions `f` with derivative bounds.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "param", rename_all = "snake_case")]
pub enum SpectralFunction<T> {
    /// `log x`
    Log,
    /// `exp(-β x)`
    ExpNegBeta(T),
    /// `-x log x`, with the value 0 at `x = 0`.
    NegXLogX,
    /// `x`
    Identity,
    /// `x^p`
    Power(T),
}

impl<T: Real> SpectralFunction<T> {
    pub fn eval(&self, x: T) -> Result<T> {
        let fail = |msg: &str| Error::Eval { x: x.to_f64().unwrap_or(f64::NAN), msg: msg.into() };
        if !(x >= T::zero()) || !x.is_finite() {
            return Err(fail("argument must be finite and nonnegative"));
        }
        let y = match *self {
            SpectralFunction::Log => {
                if x == T::zero() {
                    return Err(fail("log of zero"));
                }
                x.ln()
            }
            SpectralFunction::ExpNegBeta(beta) => (-beta * x).exp(),
            SpectralFunction::NegXLogX => {
                if x == T::zero() {
                    T::zero()
                } else {
                    -x * x.ln()
                }
            }
            SpectralFunction::Identity => x,
            SpectralFunction::Power(p) => x.powf(p),
        };
        if y.is_finite() {
            Ok(y)
        } else {
            Err(fail("non-finite value"))
        }
    }

    pub fn derivative(&self, x: T) -> T {
        match *self {
            SpectralFunction::Log => x.recip(),
            SpectralFunction::ExpNegBeta(beta) => -beta * (-beta * x).exp(),
            SpectralFunction::NegXLogX => -x.ln() - T::one(),
            SpectralFunction::Identity => T::one(),
            SpectralFunction::Power(p) => {
                if p == T::zero() {
                    T::zero()
                } else {
                    p * x.powf(p - T::one())
                }
            }
        }
    }

    /// `max |f'(x)|` over `[lo, hi]`. Every built-in derivative is monotone,
    /// so the maximum sits at an endpoint.
    pub fn max_abs_derivative(&self, lo: T, hi: T) -> Result<T> {
        let unbounded =
            || Error::UnboundedDerivative { lo: lo.to_f64().unwrap_or(f64::NAN), hi: hi.to_f64().unwrap_or(f64::NAN) };
        if !(lo >= T::zero()) || !(hi >= lo) || !hi.is_finite() {
            return Err(Error::Domain(format!("bad range [{lo}, {hi}]")));
        }
        let singular_at_zero = match *self {
            SpectralFunction::Log | SpectralFunction::NegXLogX => true,
            SpectralFunction::Power(p) => p < T::one() && p != T::zero(),
            _ => false,
        };
        if lo == T::zero() && singular_at_zero {
            return Err(unbounded());
        }
        let d = self.derivative(lo).abs().max(self.derivative(hi).abs());
        if d.is_finite() {
            Ok(d)
        } else {
            Err(unbounded())
        }
    }

    /// Casts the parameter to another scalar type.
    pub fn cast<U: Real>(&self) -> SpectralFunction<U> {
        let c = |v: T| U::lit(v.to_f64().unwrap());
        match *self {
            SpectralFunction::Log => SpectralFunction::Log,
            SpectralFunction::ExpNegBeta(b) => SpectralFunction::ExpNegBeta(c(b)),
            SpectralFunction::NegXLogX => SpectralFunction::NegXLogX,
            SpectralFunction::Identity => SpectralFunction::Identity,
            SpectralFunction::Power(p) => SpectralFunction::Power(c(p)),
        }
    }
}

impl<T: Real> fmt::Display for SpectralFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralFunction::Log => f.write_str("logdet"),
            SpectralFunction::ExpNegBeta(b) => write!(f, "partition:{b}"),
            SpectralFunction::NegXLogX => f.write_str("entropy"),
            SpectralFunction::Identity => f.write_str("trace"),
            SpectralFunction::Power(p) => write!(f, "power:{p}"),
        }
    }
}

/// Parses the CLI spelling: `logdet`, `partition:β`, `entropy`, `trace`, `power:p`.
impl<T: Real> FromStr for SpectralFunction<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let param = |v: &str| -> Result<T> {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(T::lit)
                .ok_or_else(|| Error::InvalidConfig(format!("bad function parameter '{v}'")))
        };
        match s.split_once(':') {
            None if s == "logdet" || s == "log" => Ok(SpectralFunction::Log),
            None if s == "entropy" => Ok(SpectralFunction::NegXLogX),
            None if s == "trace" => Ok(SpectralFunction::Identity),
            Some(("partition", b)) => Ok(SpectralFunction::ExpNegBeta(param(b)?)),
            Some(("power", p)) => Ok(SpectralFunction::Power(param(p)?)),
            _ => Err(Error::InvalidConfig(format!("unknown function '{s}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F = SpectralFunction<f64>;

    #[test]
    fn derivative_bounds() {
        assert_eq!(F::Identity.max_abs_derivative(0.0, 0.5).unwrap(), 1.0);
        assert_eq!(F::ExpNegBeta(3.0).max_abs_derivative(0.0, 0.5).unwrap(), 3.0);
        assert_eq!(F::Log.max_abs_derivative(1.0 / 20.0, 0.5).unwrap(), 20.0);
        assert_eq!(F::Log.max_abs_derivative(0.0, 0.5).unwrap_err().kind(), "UnboundedDerivative");
        assert_eq!(F::NegXLogX.max_abs_derivative(0.0, 0.5).unwrap_err().kind(), "UnboundedDerivative");
        assert_eq!(F::Power(0.5).max_abs_derivative(0.0, 0.5).unwrap_err().kind(), "UnboundedDerivative");
        assert_eq!(F::Power(2.0).max_abs_derivative(0.0, 0.5).unwrap(), 1.0);
        let e = 0.25f64;
        let d = F::NegXLogX.max_abs_derivative(e, 0.5).unwrap();
        assert!((d - (-(e.ln()) - 1.0).abs().max((-(0.5f64.ln()) - 1.0).abs())).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let fs = [F::Log, F::ExpNegBeta(1.7), F::NegXLogX, F::Identity, F::Power(2.5), F::Power(-0.5)];
        for f in fs {
            for &x in &[0.05, 0.2, 0.45] {
                let h = 1e-6;
                let fd = (f.eval(x + h).unwrap() - f.eval(x - h).unwrap()) / (2.0 * h);
                assert!((fd - f.derivative(x)).abs() < 1e-6 * (1.0 + fd.abs()), "{f} at {x}");
            }
        }
    }

    #[test]
    fn evaluation_edge_cases() {
        assert_eq!(F::Log.eval(0.0).unwrap_err().kind(), "EvalError");
        assert_eq!(F::NegXLogX.eval(0.0).unwrap(), 0.0);
        assert_eq!(F::Power(-1.0).eval(0.0).unwrap_err().kind(), "EvalError");
        assert_eq!(F::Identity.eval(-1.0).unwrap_err().kind(), "EvalError");
    }

    #[test]
    fn parse_and_display() {
        for s in ["logdet", "entropy", "trace", "partition:2", "power:0.5"] {
            let f: F = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert!("partition:x".parse::<F>().is_err());
        assert!("cosh".parse::<F>().is_err());
    }
}
