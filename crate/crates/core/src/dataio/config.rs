use std::collections::BTreeSet;
use std::path::Path;
use std::str::FromStr;

use super::format::format_float;
use super::{read_file, write_file, DataIoError};
use crate::constants::PhysConstants;
use crate::model::{RingSystem, SwParams};
use crate::pipeline::{DetectionSettings, FluxGrid, SweepSpec, Thresholds};

/// Unit system used for trace files written by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Units {
    #[default]
    Reduced,
    Si,
}

impl Units {
    pub fn as_str(self) -> &'static str {
        match self {
            Units::Reduced => "reduced",
            Units::Si => "si",
        }
    }
}

impl FromStr for Units {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reduced" => Ok(Units::Reduced),
            "si" => Ok(Units::Si),
            other => Err(format!(
                "unknown unit system `{other}` (expected reduced|si)"
            )),
        }
    }
}

/// Complete parameter set for one run, read from a `key = value` file.
///
/// Keys absent from the file keep their defaults. Serialization writes every
/// key in a fixed order, so `parse(to_config_string(c)) == c` and the text
/// form is a fixed point after one round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub radius_m: f64,
    pub n_electrons: u64,
    pub alpha: f64,
    pub theta: f64,
    pub theta_tilde: f64,
    pub mass_kg: f64,
    pub f_min: f64,
    pub f_max: f64,
    pub n_points: usize,
    pub grid: FluxGrid,
    /// Current noise in J₀.
    pub noise_sigma: f64,
    pub seed: u64,
    pub smoothing_window: usize,
    pub fit_window: (f64, f64),
    pub exponent_tol: f64,
    pub amplitude_floor_mult: f64,
    pub sign_consistency_min: f64,
    pub units: Units,
    pub consts: PhysConstants,
}

impl Default for RunConfig {
    fn default() -> Self {
        let consts = PhysConstants::codata2018();
        let sweep = SweepSpec::standard();
        let thr = Thresholds::default();
        Self {
            radius_m: 1e-6,
            n_electrons: 10001,
            alpha: 1.0,
            theta: 0.0,
            theta_tilde: 1.76e-61,
            mass_kg: consts.m_electron(),
            f_min: sweep.f_min,
            f_max: sweep.f_max,
            n_points: sweep.n_points,
            grid: sweep.grid,
            noise_sigma: 0.0,
            seed: 42,
            smoothing_window: 1,
            fit_window: (1e-3, 1e-1),
            exponent_tol: thr.exponent_tol,
            amplitude_floor_mult: thr.amplitude_floor_mult,
            sign_consistency_min: thr.min_sign_consistency,
            units: Units::Reduced,
            consts,
        }
    }
}

const KEYS: [&str; 22] = [
    "radius_m",
    "n_electrons",
    "alpha",
    "theta",
    "theta_tilde",
    "mass_kg",
    "f_min",
    "f_max",
    "n_points",
    "grid",
    "noise_sigma",
    "seed",
    "smoothing_window",
    "fit_window",
    "exponent_tol",
    "amplitude_floor_mult",
    "sign_consistency_min",
    "units",
    "hbar",
    "e_charge",
    "h_planck",
    "m_electron",
];

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, DataIoError>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| DataIoError::Parse {
        line,
        message: format!("`{key}`: cannot parse `{value}`: {e}"),
    })
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, DataIoError> {
        let mut cfg = RunConfig::default();
        let (mut hbar, mut e_charge, mut h_planck, mut m_electron) = (
            cfg.consts.hbar(),
            cfg.consts.e_charge(),
            cfg.consts.h_planck(),
            cfg.consts.m_electron(),
        );
        let mut seen = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(DataIoError::Parse {
                    line,
                    message: format!("expected `key = value`, got `{content}`"),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(DataIoError::Parse {
                    line,
                    message: format!("unknown key `{key}`"),
                });
            }
            if !seen.insert(key.to_string()) {
                return Err(DataIoError::Parse {
                    line,
                    message: format!("duplicate key `{key}`"),
                });
            }
            match key {
                "radius_m" => cfg.radius_m = parse_value(line, key, value)?,
                "n_electrons" => cfg.n_electrons = parse_value(line, key, value)?,
                "alpha" => cfg.alpha = parse_value(line, key, value)?,
                "theta" => cfg.theta = parse_value(line, key, value)?,
                "theta_tilde" => cfg.theta_tilde = parse_value(line, key, value)?,
                "mass_kg" => cfg.mass_kg = parse_value(line, key, value)?,
                "f_min" => cfg.f_min = parse_value(line, key, value)?,
                "f_max" => cfg.f_max = parse_value(line, key, value)?,
                "n_points" => cfg.n_points = parse_value(line, key, value)?,
                "grid" => cfg.grid = parse_value(line, key, value)?,
                "noise_sigma" => cfg.noise_sigma = parse_value(line, key, value)?,
                "seed" => cfg.seed = parse_value(line, key, value)?,
                "smoothing_window" => cfg.smoothing_window = parse_value(line, key, value)?,
                "fit_window" => {
                    let Some((lo, hi)) = value.split_once(',') else {
                        return Err(DataIoError::Parse {
                            line,
                            message: format!("`fit_window` expects `lo, hi`, got `{value}`"),
                        });
                    };
                    cfg.fit_window = (
                        parse_value(line, key, lo.trim())?,
                        parse_value(line, key, hi.trim())?,
                    );
                }
                "exponent_tol" => cfg.exponent_tol = parse_value(line, key, value)?,
                "amplitude_floor_mult" => cfg.amplitude_floor_mult = parse_value(line, key, value)?,
                "sign_consistency_min" => cfg.sign_consistency_min = parse_value(line, key, value)?,
                "units" => cfg.units = parse_value(line, key, value)?,
                "hbar" => hbar = parse_value(line, key, value)?,
                "e_charge" => e_charge = parse_value(line, key, value)?,
                "h_planck" => h_planck = parse_value(line, key, value)?,
                "m_electron" => m_electron = parse_value(line, key, value)?,
                _ => {}
            }
        }
        cfg.consts = PhysConstants::new(hbar, e_charge, h_planck, m_electron)
            .map_err(|e| DataIoError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, DataIoError> {
        Self::parse(&read_file(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), DataIoError> {
        write_file(path, &self.to_config_string())
    }

    /// Canonical text form: every key, fixed order, shortest round-trip floats.
    pub fn to_config_string(&self) -> String {
        let f = format_float;
        let c = &self.consts;
        let rows: [(&str, String); 22] = [
            ("radius_m", f(self.radius_m)),
            ("n_electrons", self.n_electrons.to_string()),
            ("alpha", f(self.alpha)),
            ("theta", f(self.theta)),
            ("theta_tilde", f(self.theta_tilde)),
            ("mass_kg", f(self.mass_kg)),
            ("f_min", f(self.f_min)),
            ("f_max", f(self.f_max)),
            ("n_points", self.n_points.to_string()),
            ("grid", self.grid.as_str().to_string()),
            ("noise_sigma", f(self.noise_sigma)),
            ("seed", self.seed.to_string()),
            ("smoothing_window", self.smoothing_window.to_string()),
            (
                "fit_window",
                format!("{}, {}", f(self.fit_window.0), f(self.fit_window.1)),
            ),
            ("exponent_tol", f(self.exponent_tol)),
            ("amplitude_floor_mult", f(self.amplitude_floor_mult)),
            ("sign_consistency_min", f(self.sign_consistency_min)),
            ("units", self.units.as_str().to_string()),
            ("hbar", f(c.hbar())),
            ("e_charge", f(c.e_charge())),
            ("h_planck", f(c.h_planck())),
            ("m_electron", f(c.m_electron())),
        ];
        let mut out = String::from("# ncring run configuration\n");
        for (k, v) in rows {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        }
        out
    }

    pub fn validate(&self) -> Result<(), DataIoError> {
        let positive = [
            ("radius_m", self.radius_m),
            ("mass_kg", self.mass_kg),
            ("f_min", self.f_min),
            ("f_max", self.f_max),
            ("exponent_tol", self.exponent_tol),
            ("amplitude_floor_mult", self.amplitude_floor_mult),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(DataIoError::Config(format!(
                    "`{name}` must be positive, got {v}"
                )));
            }
        }
        let non_negative = [
            ("theta", self.theta),
            ("theta_tilde", self.theta_tilde),
            ("noise_sigma", self.noise_sigma),
        ];
        for (name, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return Err(DataIoError::Config(format!(
                    "`{name}` must be non-negative, got {v}"
                )));
            }
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(DataIoError::Config(format!(
                "`alpha` must lie in (0, 1], got {}",
                self.alpha
            )));
        }
        if !(0.0..=1.0).contains(&self.sign_consistency_min) {
            return Err(DataIoError::Config(format!(
                "`sign_consistency_min` must lie in [0, 1], got {}",
                self.sign_consistency_min
            )));
        }
        if self.n_electrons == 0 {
            return Err(DataIoError::Config("`n_electrons` must be positive".into()));
        }
        if self.f_min >= self.f_max {
            return Err(DataIoError::Config(format!(
                "`f_min` ({}) must be below `f_max` ({})",
                self.f_min, self.f_max
            )));
        }
        let (lo, hi) = self.fit_window;
        if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
            return Err(DataIoError::Config(format!(
                "`fit_window` must satisfy 0 < lo < hi, got {lo}, {hi}"
            )));
        }
        if self.smoothing_window == 0 || self.smoothing_window.is_multiple_of(2) {
            return Err(DataIoError::Config(format!(
                "`smoothing_window` must be odd, got {}",
                self.smoothing_window
            )));
        }
        Ok(())
    }

    pub fn sw_params(&self) -> Result<SwParams, DataIoError> {
        SwParams::new(self.alpha, self.theta, self.theta_tilde)
            .map_err(|e| DataIoError::Config(e.to_string()))
    }

    pub fn ring(&self) -> Result<RingSystem, DataIoError> {
        RingSystem::new(
            self.radius_m,
            self.n_electrons,
            self.mass_kg,
            self.sw_params()?,
            self.consts,
        )
        .map_err(|e| DataIoError::Config(e.to_string()))
    }

    pub fn sweep(&self) -> SweepSpec {
        SweepSpec {
            f_min: self.f_min,
            f_max: self.f_max,
            n_points: self.n_points,
            grid: self.grid,
            noise_sigma: self.noise_sigma,
            seed: self.seed,
        }
    }

    pub fn thresholds(&self) -> Thresholds {
        Thresholds {
            exponent_tol: self.exponent_tol,
            amplitude_floor_mult: self.amplitude_floor_mult,
            min_sign_consistency: self.sign_consistency_min,
        }
    }

    /// Blind detection settings: the electron number is left to the data.
    pub fn detection_settings(&self) -> DetectionSettings {
        DetectionSettings {
            smoothing_window: self.smoothing_window,
            fit_window: self.fit_window,
            thresholds: self.thresholds(),
            n_electrons_hint: None,
            radius: self.radius_m,
            alpha: self.alpha,
            consts: self.consts,
        }
    }
}
