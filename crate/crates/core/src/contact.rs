//! Unilateral nonlinear skin contact: a power-law spring in parallel with a
//! linear damper, clamped so the surface can push but never pull.

use serde::{Deserialize, Serialize};

/// Soft-tissue contact environment.
///
/// `k` is in N/m^n, `c` in N·s/m, `z_surface` is the undeformed surface
/// height in world z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SkinModel {
    pub k: f64,
    pub n: f64,
    pub c: f64,
    pub z_surface: f64,
}

impl Default for SkinModel {
    fn default() -> Self {
        Self {
            k: 8000.0,
            n: 1.5,
            c: 50.0,
            z_surface: 0.0,
        }
    }
}

impl SkinModel {
    /// Returns the first broken invariant as `"key constraint"`.
    pub fn check(&self) -> Result<(), String> {
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err("k > 0".into());
        }
        if !(self.n.is_finite() && (1.0..=3.0).contains(&self.n)) {
            return Err("1 ≤ n ≤ 3".into());
        }
        if !(self.c.is_finite() && self.c >= 0.0) {
            return Err("c ≥ 0".into());
        }
        if !self.z_surface.is_finite() {
            return Err("z_surface finite".into());
        }
        Ok(())
    }

    /// Normal force for penetration `s` (m) and penetration rate `s_dot` (m/s).
    #[inline]
    pub fn force(&self, s: f64, s_dot: f64) -> f64 {
        contact_force(self, s, s_dot)
    }

    /// Static penetration that produces force `f` (no damping contribution).
    pub fn static_penetration(&self, f: f64) -> f64 {
        if f <= 0.0 {
            0.0
        } else {
            (f / self.k).powf(1.0 / self.n)
        }
    }
}

/// `max(0, k·s^n + c·s_dot)` while in contact, zero otherwise.
#[inline]
pub fn contact_force(model: &SkinModel, s: f64, s_dot: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let spring = model.k * s.powf(model.n);
    (spring + model.c * s_dot).max(0.0)
}
