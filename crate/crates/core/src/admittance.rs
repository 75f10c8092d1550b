//! Adaptive admittance controller in discrete position-control form.
//!
//! The robot is position controlled; the controller turns the normal force
//! error into a corrected command along the approach coordinate. A virtual
//! mass-damper is driven by `f_d - f_e`, and an adaptive compensation term
//! `phi` accumulates the previous cycle's error:
//!
//! ```text
//! phi(t)   = phi(t-T) + sigma * (f_e(t-T) - f_d(t-T)) / b
//! xdd_c(t) = xdd_e(t) + (1/m) * [ (f_d - f_e) - b * (xd_c(t-1) - xd_e(t)) - phi(t) ]
//! xd_c(t)  = xd_c(t-1) + xdd_c(t) * T
//! x_c(t)   = x_c(t-1)  + xd_c(t)  * T
//! ```
//!
//! `phi` enters the acceleration unscaled by `b`; the update already divides
//! by `b`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdmittanceError {
    #[error("non-finite controller input: {0}")]
    NonFiniteInput(&'static str),
    #[error("invalid admittance parameter: {0}")]
    InvalidParams(String),
}

/// Virtual dynamics of the controller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AdmittanceParams {
    /// Virtual mass, kg.
    pub m: f64,
    /// Virtual damping, N·s/m.
    pub b: f64,
    /// Adaptation gain; zero disables compensation.
    pub sigma: f64,
    /// Control period, s.
    #[serde(rename = "period_s")]
    pub period: f64,
}

impl Default for AdmittanceParams {
    fn default() -> Self {
        Self {
            m: 1.0,
            b: 150.0,
            sigma: 0.05,
            period: 0.002,
        }
    }
}

impl AdmittanceParams {
    pub fn check(&self) -> Result<(), String> {
        let pos = |v: f64| v.is_finite() && v > 0.0;
        if !pos(self.m) {
            return Err("m > 0".into());
        }
        if !pos(self.b) {
            return Err("b > 0".into());
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err("sigma ≥ 0".into());
        }
        if !pos(self.period) {
            return Err("period_s > 0".into());
        }
        Ok(())
    }
}

/// Evolving commanded kinematics on the approach coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AdmittanceState {
    pub x_c: f64,
    pub xd_c: f64,
    pub xdd_c: f64,
    /// Adaptive compensation term.
    pub phi: f64,
    /// `f_e - f_d` of the previous control cycle.
    pub f_err_prev: f64,
}

impl AdmittanceState {
    /// State resting on the reference with no accumulated compensation.
    pub fn on_reference(r: &ReferenceKinematics) -> Self {
        Self {
            x_c: r.x_e,
            xd_c: r.xd_e,
            xdd_c: r.xdd_e,
            phi: 0.0,
            f_err_prev: 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.x_c, self.xd_c, self.xdd_c, self.phi, self.f_err_prev]
            .iter()
            .all(|v| v.is_finite())
    }
}

/// Uncorrected reference trajectory sample on the approach coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ReferenceKinematics {
    pub x_e: f64,
    pub xd_e: f64,
    pub xdd_e: f64,
}

impl ReferenceKinematics {
    pub fn fixed(x_e: f64) -> Self {
        Self {
            x_e,
            xd_e: 0.0,
            xdd_e: 0.0,
        }
    }

    fn is_finite(&self) -> bool {
        self.x_e.is_finite() && self.xd_e.is_finite() && self.xdd_e.is_finite()
    }
}

/// One compensation update from the previous cycle's force error.
#[inline]
pub fn update_compensation(
    phi_prev: f64,
    f_e_prev: f64,
    f_d_prev: f64,
    params: &AdmittanceParams,
) -> f64 {
    phi_prev + params.sigma * (f_e_prev - f_d_prev) / params.b
}

/// Advances the controller by one control period.
pub fn step(
    state: &AdmittanceState,
    reference: &ReferenceKinematics,
    f_d: f64,
    f_e: f64,
    params: &AdmittanceParams,
) -> Result<AdmittanceState, AdmittanceError> {
    if !state.is_finite() {
        return Err(AdmittanceError::NonFiniteInput("state"));
    }
    if !reference.is_finite() {
        return Err(AdmittanceError::NonFiniteInput("reference"));
    }
    if !f_d.is_finite() {
        return Err(AdmittanceError::NonFiniteInput("f_d"));
    }
    if !f_e.is_finite() {
        return Err(AdmittanceError::NonFiniteInput("f_e"));
    }

    let phi = update_compensation(state.phi, state.f_err_prev, 0.0, params);
    let delta_f = f_d - f_e;
    let xdd_c =
        reference.xdd_e + (delta_f - params.b * (state.xd_c - reference.xd_e) - phi) / params.m;
    let xd_c = state.xd_c + xdd_c * params.period;
    let x_c = state.x_c + xd_c * params.period;

    let next = AdmittanceState {
        x_c,
        xd_c,
        xdd_c,
        phi,
        f_err_prev: f_e - f_d,
    };
    if !next.is_finite() {
        return Err(AdmittanceError::NonFiniteInput("state overflow"));
    }
    Ok(next)
}

/// Stateful wrapper for callers that drive the controller tick by tick.
#[derive(Debug, Clone)]
pub struct AdmittanceController {
    pub params: AdmittanceParams,
    pub state: AdmittanceState,
}

impl AdmittanceController {
    pub fn new(params: AdmittanceParams, state: AdmittanceState) -> Self {
        Self { params, state }
    }

    pub fn update(
        &mut self,
        reference: &ReferenceKinematics,
        f_d: f64,
        f_e: f64,
    ) -> Result<&AdmittanceState, AdmittanceError> {
        self.state = step(&self.state, reference, f_d, f_e, &self.params)?;
        Ok(&self.state)
    }
}
