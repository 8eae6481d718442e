//! Closed-form values of the fugacity, density, contraction, mixing-time and
//! disagreement bounds.

use std::collections::BTreeMap;
use std::f64::consts::E;

use crate::error::{invalid, Error, Result};
use crate::geometry::sphere_radius;

/// A bound value with the inputs that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundResult {
    pub value: f64,
    pub formula_id: &'static str,
    pub inputs: BTreeMap<&'static str, f64>,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda >= 0.0 {
        Ok(())
    } else {
        Err(invalid("lambda", "must be finite and non-negative"))
    }
}

fn check_unit_open(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("{name} must lie in (0,1)")))
    }
}

fn pow2(d: usize) -> f64 {
    2f64.powi(d as i32)
}

/// `c = lambda 2^d / (2 + lambda 2^d)`.
pub fn vigoda_c(lambda: f64, d: usize) -> Result<f64> {
    check_lambda(lambda)?;
    let t = lambda * pow2(d);
    Ok(t / (2.0 + t))
}

/// Fugacity implied by the contraction slack `gamma`: `(1 - gamma) 2^{1-d}`.
pub fn lambda_for_gamma(gamma: f64, d: usize) -> Result<f64> {
    check_unit_open("gamma", gamma)?;
    Ok((1.0 - gamma) * 2.0 / pow2(d))
}

/// `ceil(4n (ln(2^{d+2} n) + ln(1/eps)) / gamma)` steps.
pub fn mixing_time_bound(n: f64, d: usize, gamma: f64, eps: f64) -> Result<u64> {
    if !(n.is_finite() && n > 0.0) {
        return Err(invalid("n", "volume must be positive"));
    }
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    check_unit_open("gamma", gamma)?;
    check_unit_open("epsilon", eps)?;
    let t = 4.0 * n * ((pow2(d + 2) * n).ln() + (1.0 / eps).ln()) / gamma;
    Ok(t.ceil() as u64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FugacityBounds {
    /// `2^{1-d}`.
    pub lambda_bound: f64,
    /// `e^{-1} 2^{-d}`.
    pub cluster_expansion_bound: f64,
}

pub fn fugacity_bounds(d: usize) -> Result<FugacityBounds> {
    if d < 2 {
        return Err(invalid("d", "dimension must be at least 2"));
    }
    Ok(FugacityBounds {
        lambda_bound: 2.0 / pow2(d),
        cluster_expansion_bound: 1.0 / (E * pow2(d)),
    })
}

/// `lambda / (1 + 2^d lambda)`.
pub fn density_bound_easy(lambda: f64, d: usize) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(lambda / (1.0 + pow2(d) * lambda))
}

/// Finite-volume form: `(|Lambda_Int| / |Lambda|) lambda / (1 + 2^d lambda)`.
pub fn density_bound_easy_finite(lambda: f64, d: usize, interior_fraction: f64) -> Result<f64> {
    Ok(interior_fraction * density_bound_easy(lambda, d)?)
}

const CROSSING_TOLERANCE: f64 = 1e-12;

/// `inf_z max(lambda e^{-z}, z 2^{-d} e^{-2 lambda 3^{d/2}})`, attained where
/// the decreasing and increasing branches cross, found by bisection.
pub fn density_bound_crossing(lambda: f64, d: usize) -> Result<f64> {
    density_bound_crossing_bracketed(lambda, d, 0.0, None)
}

/// The crossing bound with a caller-chosen bracket `[lo, hi]` (`hi` grown by
/// doubling when absent or too small).
pub fn density_bound_crossing_bracketed(lambda: f64, d: usize, lo: f64, hi: Option<f64>) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(invalid("lambda", "must be finite and positive"));
    }
    if d < 2 {
        return Err(invalid("d", "dimension must be at least 2"));
    }
    // Work with the slope k = 2^{-d} e^{-2 lambda 3^{d/2}} in log form so
    // large d does not underflow.
    let ln_k = -(d as f64) * std::f64::consts::LN_2 - 2.0 * lambda * 3f64.powf(d as f64 / 2.0);
    let gap = |z: f64| lambda.ln() - z - (z.ln() + ln_k);
    let mut a = lo.max(0.0);
    let mut b = hi.unwrap_or(1.0).max(a + f64::MIN_POSITIVE);
    let mut grow = 0;
    while gap(b) > 0.0 {
        b *= 2.0;
        grow += 1;
        if grow > 2000 {
            return Err(invalid("lambda", "bisection bracket diverged"));
        }
    }
    if a > 0.0 && gap(a) < 0.0 {
        a = 0.0;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if gap(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
        if b - a <= CROSSING_TOLERANCE * b {
            break;
        }
    }
    let z = 0.5 * (a + b);
    if (b - a) > CROSSING_TOLERANCE * z {
        return Err(invalid("lambda", "bisection did not converge"));
    }
    Ok(lambda * (-z).exp())
}

/// Principal branch of the Lambert W function, by Halley iteration.
pub fn lambert_w(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(invalid("x", "must be non-negative"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut w = if x < 1.0 {
        x * (1.0 - x + 1.5 * x * x).max(0.5)
    } else {
        let l = x.ln();
        let ll = l.max(1e-300).ln().max(0.0);
        (l - ll).max(0.5)
    };
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 1e-15 * w.abs().max(1e-300) {
            break;
        }
    }
    Ok(w)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContractionRate {
    pub lambda: f64,
    /// `2^d (2c - 1) / (n (1 + lambda))`.
    pub per_step_drift: f64,
    /// `exp(-gamma / (4n))`.
    pub per_step_factor: f64,
}

pub fn contraction_rate_bound(n: f64, d: usize, gamma: f64) -> Result<ContractionRate> {
    if !(n.is_finite() && n > 0.0) {
        return Err(invalid("n", "volume must be positive"));
    }
    let lambda = lambda_for_gamma(gamma, d)?;
    let drift = -gamma * pow2(d) / ((2.0 - gamma) * (1.0 + lambda) * n);
    Ok(ContractionRate {
        lambda,
        per_step_drift: drift,
        per_step_factor: (-gamma / (4.0 * n)).exp(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DisagreementBound {
    /// `|B| exp(-s / (4r))`.
    pub bound: f64,
    /// `s / (e^2 r 4^{d+1})`.
    pub eta_max: f64,
    pub eta_ok: bool,
}

pub fn disagreement_bound(b_volume: f64, s: f64, d: usize, eta: f64) -> Result<DisagreementBound> {
    if !(s.is_finite() && s > 0.0) {
        return Err(invalid("s", "separation must be positive"));
    }
    let r = sphere_radius(d)?;
    let eta_max = s / (E * E * r * 4f64.powi(d as i32 + 1));
    Ok(DisagreementBound {
        bound: b_volume * (-s / (4.0 * r)).exp(),
        eta_max,
        eta_ok: eta > 0.0 && eta <= eta_max,
    })
}

/// Reference constants for two dimensions, echoed in the `bounds` output.
pub const D2_REFERENCE_CONSTANTS: [f64; 5] = [0.1277, 0.1367, 0.28175, 0.21027, 0.2344];
