use super::{invalid, ModelError};
use crate::constants::PhysConstants;

/// Noncommutativity parameters of the Seiberg–Witten map in two dimensions.
///
/// `theta` (position noncommutativity) only enters the constraint check; the
/// ring observables depend on `alpha` and `theta_tilde` alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwParams {
    alpha: f64,
    theta: f64,
    theta_tilde: f64,
}

impl SwParams {
    pub fn new(alpha: f64, theta: f64, theta_tilde: f64) -> Result<Self, ModelError> {
        if !(alpha.is_finite() && alpha > 0.0 && alpha <= 1.0) {
            return Err(invalid("alpha", format!("must lie in (0, 1], got {alpha}")));
        }
        if !(theta.is_finite() && theta >= 0.0) {
            return Err(invalid(
                "theta",
                format!("must be finite and >= 0, got {theta}"),
            ));
        }
        if !(theta_tilde.is_finite() && theta_tilde >= 0.0) {
            return Err(invalid(
                "theta_tilde",
                format!("must be finite and >= 0, got {theta_tilde}"),
            ));
        }
        Ok(Self {
            alpha,
            theta,
            theta_tilde,
        })
    }

    /// Commutative phase space: α = 1, θ = θ̃ = 0.
    pub fn commutative() -> Self {
        Self {
            alpha: 1.0,
            theta: 0.0,
            theta_tilde: 0.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn theta_tilde(&self) -> f64 {
        self.theta_tilde
    }

    /// Diagonal entry of the deformed `[x_i, p_j]` matrix, α² + θθ̃/(2α²ħ²).
    pub fn delta_diagonal(&self, consts: &PhysConstants) -> f64 {
        let a2 = self.alpha * self.alpha;
        let hbar = consts.hbar();
        a2 + self.theta * self.theta_tilde / (2.0 * a2 * hbar * hbar)
    }
}

/// True iff the Seiberg–Witten constraint α² + θθ̃/(2α²ħ²) = 1 holds to `tol`.
pub fn check_sw_constraint(sw: &SwParams, consts: &PhysConstants, tol: f64) -> bool {
    debug_assert!(tol > 0.0);
    (sw.delta_diagonal(consts) - 1.0).abs() <= tol
}

/// Magnitude of the effective magnetic field B_z = θ̃/(eα²ħ), in tesla.
///
/// The charge is taken as a positive magnitude; the field points along +z
/// for θ̃ > 0 in that convention.
pub fn effective_field(sw: &SwParams, consts: &PhysConstants) -> f64 {
    sw.theta_tilde / (consts.e_charge() * sw.alpha * sw.alpha * consts.hbar())
}

/// Effective symmetric-gauge vector potential (A_x, A_y) at (x, y), in T·m.
///
/// A = (B/2)(y, −x), so that ∂_x A_y − ∂_y A_x = −B in the magnitude
/// convention for the charge.
pub fn effective_vector_potential(
    sw: &SwParams,
    consts: &PhysConstants,
    x: f64,
    y: f64,
) -> (f64, f64) {
    let half_b = 0.5 * effective_field(sw, consts);
    (half_b * y, -half_b * x)
}
