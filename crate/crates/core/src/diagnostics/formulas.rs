//! Closed-form quantities: `β(t)`, the two radius predictors `λ(t)`, `p_γ`
//! and `K_t`.

use super::DiagnosticsError;

fn check_unit_time(t: f64) -> Result<(), DiagnosticsError> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(DiagnosticsError::Domain(format!("t must lie in (0, 1), got {t}")))
    }
}

/// `β(t) = min{ |ln η|, ½(γ-½)|ln t| }`, where `η = η^γ_{t^{-1/2}}(t)` is
/// supplied by the caller. `η = 0` selects the second branch.
pub fn beta(t: f64, gamma: f64, eta_value: f64) -> Result<f64, DiagnosticsError> {
    check_unit_time(t)?;
    if !(eta_value >= 0.0) {
        return Err(DiagnosticsError::Domain(format!(
            "tail value must be nonnegative, got {eta_value}"
        )));
    }
    let cap = 0.5 * (gamma - 0.5) * t.ln().abs();
    if eta_value == 0.0 {
        return Ok(cap);
    }
    Ok(eta_value.ln().abs().min(cap))
}

/// `λ(t) = √((2γ-1)(|ln t| + ln|ln t|) + 3β)` for `t ∈ (0, 1/e)`, `γ > ½`.
pub fn lambda_subcritical(t: f64, gamma: f64, beta_value: f64) -> Result<f64, DiagnosticsError> {
    if !(t > 0.0 && t < (-1.0f64).exp()) {
        return Err(DiagnosticsError::Domain(format!(
            "t must lie in (0, 1/e), got {t}"
        )));
    }
    if !(gamma > 0.5) {
        return Err(DiagnosticsError::Domain(format!(
            "subcritical predictor needs gamma > 1/2, got {gamma}"
        )));
    }
    if !(beta_value >= 0.0) {
        return Err(DiagnosticsError::Domain(format!(
            "beta must be nonnegative, got {beta_value}"
        )));
    }
    let l = t.ln().abs();
    Ok(((2.0 * gamma - 1.0) * (l + l.ln()) + 3.0 * beta_value).sqrt())
}

/// `λ(t) = √(3 min{ |ln ζ|, |ln t| })` with `ζ = ζ^{1/2}_{t^{-1/4}}(t)`;
/// `|ln 0|` counts as `+∞`, so `ζ = 0` gives `√(3|ln t|)`. The formula is
/// evaluated literally for `ζ ≥ 1`.
pub fn lambda_critical(t: f64, zeta_value: f64) -> Result<f64, DiagnosticsError> {
    check_unit_time(t)?;
    if !(zeta_value >= 0.0) {
        return Err(DiagnosticsError::Domain(format!(
            "tail value must be nonnegative, got {zeta_value}"
        )));
    }
    let lt = t.ln().abs();
    let m = if zeta_value == 0.0 {
        lt
    } else {
        zeta_value.ln().abs().min(lt)
    };
    Ok((3.0 * m).sqrt())
}

/// Time-integrability exponent: `4` for `γ > 1`, `8/(3-2γ)` for `γ ∈ [½, 1]`.
pub fn p_gamma(gamma: f64) -> Result<f64, DiagnosticsError> {
    if !(gamma >= 0.5) || !gamma.is_finite() {
        return Err(DiagnosticsError::Domain(format!(
            "p_gamma needs gamma >= 1/2, got {gamma}"
        )));
    }
    Ok(if gamma > 1.0 {
        4.0
    } else {
        8.0 / (3.0 - 2.0 * gamma)
    })
}

/// `K_t = 3β/(2γ-1)`, so that `λ(t)² = (2γ-1)(|ln t| + ln|ln t| + K_t)`.
pub fn k_t(beta_value: f64, gamma: f64) -> Result<f64, DiagnosticsError> {
    if !(gamma > 0.5) {
        return Err(DiagnosticsError::Domain(format!(
            "K_t needs gamma > 1/2, got {gamma}"
        )));
    }
    Ok(3.0 * beta_value / (2.0 * gamma - 1.0))
}
