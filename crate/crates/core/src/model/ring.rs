use super::params::{effective_field, SwParams};
use super::{invalid, ModelError};
use crate::constants::PhysConstants;

/// Electron-number parity; selects the branch of every closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(n_electrons: u64) -> Self {
        if n_electrons % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Parity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "odd" => Ok(Parity::Odd),
            "even" => Ok(Parity::Even),
            other => Err(format!("unknown parity `{other}`")),
        }
    }
}

/// The two numbers that fix every reduced-unit observable: N and f_nc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedRing {
    n_electrons: u64,
    f_nc: f64,
}

impl ReducedRing {
    pub fn new(n_electrons: u64, f_nc: f64) -> Result<Self, ModelError> {
        if n_electrons == 0 {
            return Err(invalid("n_electrons", "must be positive"));
        }
        if !(f_nc.is_finite() && f_nc >= 0.0) {
            return Err(invalid(
                "f_nc",
                format!("must be finite and >= 0, got {f_nc}"),
            ));
        }
        Ok(Self { n_electrons, f_nc })
    }

    pub fn n_electrons(&self) -> u64 {
        self.n_electrons
    }

    pub fn n(&self) -> f64 {
        self.n_electrons as f64
    }

    pub fn f_nc(&self) -> f64 {
        self.f_nc
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.n_electrons)
    }
}

/// A physical ring: radius, electron count, bare mass and noncommutativity,
/// plus the scales derived from them.
///
/// Derived quantities are computed once in [`RingSystem::new`] and cannot be
/// set independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingSystem {
    radius: f64,
    n_electrons: u64,
    mass: f64,
    sw: SwParams,
    consts: PhysConstants,
    m_star: f64,
    epsilon0: f64,
    j0: f64,
    f_nc: f64,
    b_eff: f64,
    phi_nc: f64,
}

impl RingSystem {
    pub fn new(
        radius: f64,
        n_electrons: u64,
        mass: f64,
        sw: SwParams,
        consts: PhysConstants,
    ) -> Result<Self, ModelError> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(invalid("radius", format!("must be positive, got {radius}")));
        }
        if n_electrons == 0 {
            return Err(invalid("n_electrons", "must be positive"));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(invalid("mass", format!("must be positive, got {mass}")));
        }
        let hbar = consts.hbar();
        let alpha = sw.alpha();
        let m_star = mass / alpha;
        let epsilon0 = hbar * hbar / (2.0 * m_star * radius * radius);
        let j0 = consts.e_charge() * epsilon0 / consts.h_planck();
        let f_nc = radius * radius * sw.theta_tilde() / (hbar * hbar * alpha * alpha);
        Ok(Self {
            radius,
            n_electrons,
            mass,
            sw,
            consts,
            m_star,
            epsilon0,
            j0,
            f_nc,
            b_eff: effective_field(&sw, &consts),
            phi_nc: f_nc * consts.flux_quantum(),
        })
    }

    /// Ring of bare electrons with CODATA constants.
    pub fn electron_ring(radius: f64, n_electrons: u64, sw: SwParams) -> Result<Self, ModelError> {
        let consts = PhysConstants::codata2018();
        Self::new(radius, n_electrons, consts.m_electron(), sw, consts)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn n_electrons(&self) -> u64 {
        self.n_electrons
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn sw(&self) -> &SwParams {
        &self.sw
    }

    pub fn consts(&self) -> &PhysConstants {
        &self.consts
    }

    /// m* = m/α.
    pub fn m_star(&self) -> f64 {
        self.m_star
    }

    /// ε₀ = ħ²/(2m*R²), joules.
    pub fn epsilon0(&self) -> f64 {
        self.epsilon0
    }

    /// J₀ = (e/h)ε₀, amperes.
    pub fn j0(&self) -> f64 {
        self.j0
    }

    /// f_nc = R²θ̃/(ħ²α²).
    pub fn f_nc(&self) -> f64 {
        self.f_nc
    }

    /// φ_nc = f_nc·φ₀, webers.
    pub fn phi_nc(&self) -> f64 {
        self.phi_nc
    }

    /// Effective field θ̃/(eα²ħ), tesla.
    pub fn b_eff(&self) -> f64 {
        self.b_eff
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.n_electrons)
    }

    pub fn reduced(&self) -> ReducedRing {
        ReducedRing {
            n_electrons: self.n_electrons,
            f_nc: self.f_nc,
        }
    }

    pub fn energy_to_si(&self, reduced: f64) -> f64 {
        reduced * self.epsilon0
    }

    pub fn current_to_si(&self, reduced: f64) -> f64 {
        reduced * self.j0
    }

    pub fn current_from_si(&self, amperes: f64) -> f64 {
        amperes / self.j0
    }

    pub fn flux_to_si(&self, reduced: f64) -> f64 {
        reduced * self.consts.flux_quantum()
    }

    pub fn flux_from_si(&self, webers: f64) -> f64 {
        webers / self.consts.flux_quantum()
    }
}

/// θ̃ that produces a given `f_nc` for a ring of radius `radius`:
/// θ̃ = f_nc·ħ²α²/R².
pub fn theta_tilde_for_flux(f_nc: f64, radius: f64, alpha: f64, consts: &PhysConstants) -> f64 {
    let hbar = consts.hbar();
    f_nc * hbar * hbar * alpha * alpha / (radius * radius)
}

/// Effective noncommutative flux of the ring, `(f_nc, φ_nc)` with φ_nc in Wb.
pub fn noncommutative_flux(ring: &RingSystem) -> (f64, f64) {
    (ring.f_nc(), ring.phi_nc())
}
