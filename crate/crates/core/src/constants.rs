//! Physical constants (CODATA 2018 exact/recommended values).

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge magnitude, C.
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Planck constant, J·s.
pub const H_PLANCK: f64 = 6.626_070_15e-34;
/// Electron rest mass, kg.
pub const M_ELECTRON: f64 = 9.109_383_701_5e-31;

/// The set of constants used to convert between SI and reduced units.
///
/// The electron charge is stored as a positive magnitude. Signs of currents
/// and signatures are carried by the closed forms in [`crate::model`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysConstants {
    hbar: f64,
    e_charge: f64,
    h_planck: f64,
    m_electron: f64,
    flux_quantum: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("physical constant `{name}` must be finite and strictly positive, got {value}")]
pub struct InvalidConstant {
    pub name: &'static str,
    pub value: f64,
}

impl PhysConstants {
    pub fn new(
        hbar: f64,
        e_charge: f64,
        h_planck: f64,
        m_electron: f64,
    ) -> Result<Self, InvalidConstant> {
        for (name, value) in [
            ("hbar", hbar),
            ("e_charge", e_charge),
            ("h_planck", h_planck),
            ("m_electron", m_electron),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(InvalidConstant { name, value });
            }
        }
        Ok(Self {
            hbar,
            e_charge,
            h_planck,
            m_electron,
            flux_quantum: h_planck / e_charge,
        })
    }

    pub fn codata2018() -> Self {
        Self::new(HBAR, E_CHARGE, H_PLANCK, M_ELECTRON).expect("CODATA values are positive")
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn e_charge(&self) -> f64 {
        self.e_charge
    }

    pub fn h_planck(&self) -> f64 {
        self.h_planck
    }

    pub fn m_electron(&self) -> f64 {
        self.m_electron
    }

    /// φ₀ = h/e in webers.
    pub fn flux_quantum(&self) -> f64 {
        self.flux_quantum
    }
}

impl Default for PhysConstants {
    fn default() -> Self {
        Self::codata2018()
    }
}
