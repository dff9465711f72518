//! The explicit lower bound on the principal eigenvalue.
//!
//! Given the dimension `n`, a Ricci lower bound `Ric >= -(n-1) K`, the drift
//! cap `C`, the diameter `d` and a Lipschitz constant `C4` of the normalized
//! eigenfunction, the bound is
//!
//! ```text
//! d_q = (1/4) / C4
//! A   = 1/(2(n-1)) - 1/(4(n-1)^2)
//! B   = 2 C d^8 + C d^5 + 8 d^4
//! D   = (4(n-1) - 1)(2 + 1/(n-1)) 2d + 2 C d^7 + ((n-1) K + lambda) d^4
//!       + 2/(n-1) C^2 d^6 + 2 (n-1)(1 + K rho) d^4
//! CC  = (B + 2 sqrt(D)) / (3 A d_q^2)
//! c   = 8 (n-1)(d^3 + d^2) / (3 d_q^2)
//! delta = min(1, 1 / (4 c^2 (e^{d CC + d} - 1)))
//! ```
//!
//! `lambda` and `rho` inside `D` are replaced by the caps `lambda_cap`
//! (default 1, since the bound is capped at 1 anyway) and `rho_cap`
//! (default `d`).

use serde::Serialize;

use crate::error::{invalid, Result};

/// Above this exponent `e^x - 1` is handled in log space.
const LOG_DOMAIN_EXPONENT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundInputs {
    pub n: u32,
    #[serde(rename = "K")]
    pub ricci_k: f64,
    #[serde(rename = "C")]
    pub drift_cap: f64,
    pub d: f64,
    #[serde(rename = "C4")]
    pub lipschitz: f64,
    pub lambda_cap: f64,
    pub rho_cap: f64,
}

impl BoundInputs {
    /// Inputs with the default caps `lambda_cap = 1`, `rho_cap = d`.
    pub fn new(n: u32, ricci_k: f64, drift_cap: f64, d: f64, lipschitz: f64) -> Self {
        Self {
            n,
            ricci_k,
            drift_cap,
            d,
            lipschitz,
            lambda_cap: 1.0,
            rho_cap: d,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return invalid(format!("dimension n = {} must be at least 2", self.n));
        }
        let finite = [
            self.ricci_k,
            self.drift_cap,
            self.d,
            self.lipschitz,
            self.lambda_cap,
            self.rho_cap,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return invalid("bound inputs must be finite");
        }
        if self.ricci_k < 0.0 || self.drift_cap < 0.0 || self.lambda_cap < 0.0 || self.rho_cap < 0.0
        {
            return invalid("K, C, lambda_cap and rho_cap must be nonnegative");
        }
        if self.d <= 0.0 || self.lipschitz <= 0.0 {
            return invalid("diameter d and Lipschitz constant C4 must be positive");
        }
        Ok(())
    }
}

/// Every intermediate constant of the bound, with the inputs echoed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundBreakdown {
    #[serde(flatten)]
    pub inputs: BoundInputs,
    pub d_quarter: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "D")]
    pub d_const: f64,
    #[serde(rename = "script_C")]
    pub script_c: f64,
    pub c: f64,
    /// The bound itself. May underflow to 0 when `log_domain` is set; then
    /// `log_delta` is authoritative.
    pub delta: f64,
    /// Natural log of the bound, always finite.
    pub log_delta: f64,
    pub log_domain: bool,
}

pub fn constant_a(n: u32) -> Result<f64> {
    if n < 2 {
        return invalid(format!("dimension n = {n} must be at least 2"));
    }
    let k = f64::from(n - 1);
    Ok(1.0 / (2.0 * k) - 1.0 / (4.0 * k * k))
}

pub fn constant_b(drift_cap: f64, d: f64) -> f64 {
    2.0 * drift_cap * d.powi(8) + drift_cap * d.powi(5) + 8.0 * d.powi(4)
}

pub fn constant_d(
    n: u32,
    ricci_k: f64,
    drift_cap: f64,
    d: f64,
    lambda_cap: f64,
    rho_cap: f64,
) -> Result<f64> {
    if n < 2 {
        return invalid(format!("dimension n = {n} must be at least 2"));
    }
    let k = f64::from(n - 1);
    Ok((4.0 * k - 1.0) * (2.0 + 1.0 / k) * 2.0 * d
        + 2.0 * drift_cap * d.powi(7)
        + (k * ricci_k + lambda_cap) * d.powi(4)
        + 2.0 / k * drift_cap * drift_cap * d.powi(6)
        + 2.0 * k * (1.0 + ricci_k * rho_cap) * d.powi(4))
}

/// `d_{1/4} = (1/4) / C4`.
pub fn d_quarter(lipschitz: f64) -> f64 {
    0.25 / lipschitz
}

/// `(script_C, c)`.
pub fn constant_c_and_script_c(inputs: &BoundInputs) -> Result<(f64, f64)> {
    inputs.validate()?;
    let dq2 = d_quarter(inputs.lipschitz).powi(2);
    let a = constant_a(inputs.n)?;
    let b = constant_b(inputs.drift_cap, inputs.d);
    let dd = constant_d(
        inputs.n,
        inputs.ricci_k,
        inputs.drift_cap,
        inputs.d,
        inputs.lambda_cap,
        inputs.rho_cap,
    )?;
    let script_c = (b + 2.0 * dd.sqrt()) / (3.0 * a * dq2);
    let k = f64::from(inputs.n - 1);
    let c = 8.0 * k * (inputs.d.powi(3) + inputs.d.powi(2)) / (3.0 * dq2);
    Ok((script_c, c))
}

/// The full constant chain and the bound `delta`.
pub fn lower_bound_delta(inputs: &BoundInputs) -> Result<BoundBreakdown> {
    inputs.validate()?;
    let (script_c, c) = constant_c_and_script_c(inputs)?;
    let exponent = inputs.d * script_c + inputs.d;
    let log_domain = exponent > LOG_DOMAIN_EXPONENT;
    // ln(e^x - 1) = x + ln(1 - e^{-x})
    let log_expm1 = if log_domain {
        exponent + (-(-exponent).exp_m1()).ln()
    } else {
        exponent.exp_m1().ln()
    };
    let log_delta = (-(4.0 * c * c).ln() - log_expm1).min(0.0);
    let delta = if log_domain {
        log_delta.exp()
    } else {
        (1.0 / (4.0 * c * c) / exponent.exp_m1()).min(1.0)
    };
    Ok(BoundBreakdown {
        inputs: *inputs,
        d_quarter: d_quarter(inputs.lipschitz),
        a: constant_a(inputs.n)?,
        b: constant_b(inputs.drift_cap, inputs.d),
        d_const: constant_d(
            inputs.n,
            inputs.ricci_k,
            inputs.drift_cap,
            inputs.d,
            inputs.lambda_cap,
            inputs.rho_cap,
        )?,
        script_c,
        c,
        delta,
        log_delta,
        log_domain: log_domain || delta == 0.0,
    })
}

/// Upper bound on every nonnegative `x` with
/// `x^4 - a1 x^3 - a2 x^2 - a3 <= 0`: `a1 + sqrt(a2 + sqrt(a3))`.
pub fn quartic_root_bound(a1: f64, a2: f64, a3: f64) -> Result<f64> {
    if !(a1 > 0.0 && a2 > 0.0 && a3 > 0.0) {
        return invalid(format!(
            "quartic coefficients ({a1}, {a2}, {a3}) must be positive"
        ));
    }
    Ok(a1 + (a2 + a3.sqrt()).sqrt())
}

/// The looser closed form `a1 + (2 a2)^{1/2} + (4 a3)^{1/4}`.
pub fn relaxed_quartic_bound(a1: f64, a2: f64, a3: f64) -> Result<f64> {
    if !(a1 > 0.0 && a2 > 0.0 && a3 > 0.0) {
        return invalid(format!(
            "quartic coefficients ({a1}, {a2}, {a3}) must be positive"
        ));
    }
    Ok(a1 + (2.0 * a2).sqrt() + (4.0 * a3).powf(0.25))
}
