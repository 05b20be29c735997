//! The stroboscopic (period-2π/p4) map of the forced flow.

use super::field::{ForcedField, State, Variant};
use super::ode::{integrate, Tolerance};
use crate::error::{domain, Result};
use crate::params::Params;

/// Time-T flow map sampled at t ≡ phase (mod T). Immutable; every call
/// integrates from scratch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StroboscopicMap {
    field: ForcedField,
    pub tol: Tolerance,
    phase: f64,
}

impl StroboscopicMap {
    pub fn new(params: Params, variant: Variant, tol: Tolerance) -> Result<Self> {
        if !(params.p4 > 0.0 && params.p4.is_finite()) {
            return Err(domain(format!("stroboscopic map needs p4 > 0, got {}", params.p4)));
        }
        if ![params.eps, params.p1, params.p2, params.p3].iter().all(|v| v.is_finite()) {
            return Err(domain("non-finite parameters"));
        }
        Ok(Self { field: ForcedField::new(params, variant), tol, phase: 0.0 })
    }

    /// Same map sampled at another phase of the forcing.
    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn field(&self) -> &ForcedField {
        &self.field
    }

    pub fn params(&self) -> &Params {
        &self.field.params
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn period(&self) -> f64 {
        self.field.params.period()
    }

    pub fn apply(&self, s: State) -> Result<State> {
        let f = |t: f64, y: &State| self.field.rhs(t, y);
        integrate(&f, self.phase, s, self.phase + self.period(), self.tol)
    }

    /// P⁻¹ by backward integration.
    pub fn inverse(&self, s: State) -> Result<State> {
        let f = |t: f64, y: &State| self.field.rhs(t, y);
        integrate(&f, self.phase + self.period(), s, self.phase, self.tol)
    }

    /// s, P(s), …, Pⁿ(s) (or the inverse map when `backward`).
    pub fn iterate(&self, s: State, n: usize, backward: bool) -> Result<Vec<State>> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(s);
        let mut z = s;
        for _ in 0..n {
            z = if backward { self.inverse(z)? } else { self.apply(z)? };
            out.push(z);
        }
        Ok(out)
    }

    /// P(s) and DP(s) (row-major) from the variational equations.
    pub fn jacobian(&self, s: State) -> Result<(State, [[f64; 2]; 2])> {
        let f = |t: f64, y: &[f64; 6]| self.field.variational(t, y);
        let y0 = [s[0], s[1], 1.0, 0.0, 0.0, 1.0];
        let y = integrate(&f, self.phase, y0, self.phase + self.period(), self.tol)?;
        Ok(([y[0], y[1]], [[y[2], y[4]], [y[3], y[5]]]))
    }
}
