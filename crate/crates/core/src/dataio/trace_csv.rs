use std::path::Path;

use super::config::Units;
use super::format::format_float;
use super::{read_file, write_file, DataIoError};
use crate::constants::PhysConstants;
use crate::model::{RingSystem, SwParams};
use crate::pipeline::{CurrentTrace, TraceMeta, TraceSource};

const REDUCED_HEADER: &str = "f,J";
const SI_HEADER: &str = "phi_wb,J_A";

/// Serialize a trace. Reduced output round-trips bit-exactly; SI output is
/// exact up to the rounding of one multiplication per value.
///
/// `scales` supplies φ₀ and J₀ for SI output and falls back to the trace's
/// own ring hint.
pub fn render_trace_csv(
    trace: &CurrentTrace,
    units: Units,
    scales: Option<&RingSystem>,
) -> Result<String, DataIoError> {
    let meta = trace.meta();
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        out.push_str("# ");
        out.push_str(k);
        out.push_str(": ");
        out.push_str(&v);
        out.push('\n');
    };
    kv("source", meta.source.as_str().to_string());
    if let Some(seed) = meta.seed {
        kv("seed", seed.to_string());
    }
    kv("noise_sigma", format_float(meta.noise_sigma));
    if let Some(ring) = &meta.ring_hint {
        let c = ring.consts();
        kv("radius_m", format_float(ring.radius()));
        kv("n_electrons", ring.n_electrons().to_string());
        kv("mass_kg", format_float(ring.mass()));
        kv("alpha", format_float(ring.sw().alpha()));
        kv("theta", format_float(ring.sw().theta()));
        kv("theta_tilde", format_float(ring.sw().theta_tilde()));
        kv("hbar", format_float(c.hbar()));
        kv("e_charge", format_float(c.e_charge()));
        kv("h_planck", format_float(c.h_planck()));
        kv("m_electron", format_float(c.m_electron()));
    }
    match units {
        Units::Reduced => {
            out.push_str(REDUCED_HEADER);
            out.push('\n');
            for &(f, j) in trace.points() {
                push_row(&mut out, f, j);
            }
        }
        Units::Si => {
            let ring = scales.or(meta.ring_hint.as_ref()).ok_or_else(|| {
                DataIoError::UnitMismatch("SI output needs ring scales (φ₀, J₀)".into())
            })?;
            out.push_str(SI_HEADER);
            out.push('\n');
            for &(f, j) in trace.points() {
                push_row(&mut out, ring.flux_to_si(f), ring.current_to_si(j));
            }
        }
    }
    Ok(out)
}

fn push_row(out: &mut String, a: f64, b: f64) {
    out.push_str(&format_float(a));
    out.push(',');
    out.push_str(&format_float(b));
    out.push('\n');
}

pub fn write_trace_csv(
    trace: &CurrentTrace,
    path: &Path,
    units: Units,
    scales: Option<&RingSystem>,
) -> Result<(), DataIoError> {
    write_file(path, &render_trace_csv(trace, units, scales)?)
}

pub fn read_trace_csv(
    path: &Path,
    scales: Option<&RingSystem>,
) -> Result<CurrentTrace, DataIoError> {
    parse_trace_csv(&read_file(path)?, scales)
}

#[derive(Default)]
struct HintFields {
    radius: Option<f64>,
    n_electrons: Option<u64>,
    mass: Option<f64>,
    alpha: Option<f64>,
    theta: Option<f64>,
    theta_tilde: Option<f64>,
    hbar: Option<f64>,
    e_charge: Option<f64>,
    h_planck: Option<f64>,
    m_electron: Option<f64>,
}

impl HintFields {
    /// A ring hint is formed only when radius, electron number and θ̃ are all
    /// present; everything else falls back to defaults.
    fn build(&self) -> Option<RingSystem> {
        let (radius, n, theta_tilde) = (self.radius?, self.n_electrons?, self.theta_tilde?);
        let codata = PhysConstants::codata2018();
        let consts = PhysConstants::new(
            self.hbar.unwrap_or(codata.hbar()),
            self.e_charge.unwrap_or(codata.e_charge()),
            self.h_planck.unwrap_or(codata.h_planck()),
            self.m_electron.unwrap_or(codata.m_electron()),
        )
        .ok()?;
        let sw = SwParams::new(
            self.alpha.unwrap_or(1.0),
            self.theta.unwrap_or(0.0),
            theta_tilde,
        )
        .ok()?;
        RingSystem::new(
            radius,
            n,
            self.mass.unwrap_or(consts.m_electron()),
            sw,
            consts,
        )
        .ok()
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, what: &str, s: &str) -> Result<T, DataIoError>
where
    T::Err: std::fmt::Display,
{
    s.trim().parse::<T>().map_err(|e| DataIoError::Parse {
        line,
        message: format!("{what}: cannot parse `{}`: {e}", s.trim()),
    })
}

/// Parse trace CSV text. SI files are converted with `scales` if given,
/// otherwise with the ring described in the file's metadata.
pub fn parse_trace_csv(
    text: &str,
    scales: Option<&RingSystem>,
) -> Result<CurrentTrace, DataIoError> {
    let mut meta = TraceMeta::default();
    let mut hint = HintFields::default();
    let mut header: Option<Units> = None;
    let mut raw_points: Vec<(usize, f64, f64)> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.split('\n').enumerate() {
        let line = idx + 1;
        let content = raw.strip_suffix('\r').unwrap_or(raw).trim();
        if content.is_empty() {
            continue;
        }
        last_line = line;
        if let Some(comment) = content.strip_prefix('#') {
            let Some((key, value)) = comment.split_once(':') else {
                continue;
            };
            let value = value.trim();
            match key.trim() {
                "source" => {
                    meta.source = value
                        .parse::<TraceSource>()
                        .map_err(|message| DataIoError::Parse { line, message })?
                }
                "seed" => meta.seed = Some(parse_num(line, "seed", value)?),
                "noise_sigma" => meta.noise_sigma = parse_num(line, "noise_sigma", value)?,
                "radius_m" => hint.radius = Some(parse_num(line, "radius_m", value)?),
                "n_electrons" => hint.n_electrons = Some(parse_num(line, "n_electrons", value)?),
                "mass_kg" => hint.mass = Some(parse_num(line, "mass_kg", value)?),
                "alpha" => hint.alpha = Some(parse_num(line, "alpha", value)?),
                "theta" => hint.theta = Some(parse_num(line, "theta", value)?),
                "theta_tilde" => hint.theta_tilde = Some(parse_num(line, "theta_tilde", value)?),
                "hbar" => hint.hbar = Some(parse_num(line, "hbar", value)?),
                "e_charge" => hint.e_charge = Some(parse_num(line, "e_charge", value)?),
                "h_planck" => hint.h_planck = Some(parse_num(line, "h_planck", value)?),
                "m_electron" => hint.m_electron = Some(parse_num(line, "m_electron", value)?),
                _ => {}
            }
            continue;
        }
        let fields: Vec<&str> = content.split(',').map(str::trim).collect();
        if header.is_none() {
            header =
                Some(match fields.as_slice() {
                    ["f", "J"] => Units::Reduced,
                    ["phi_wb", "J_A"] => Units::Si,
                    ["f", "J_A"] | ["phi_wb", "J"] => {
                        return Err(DataIoError::UnitMismatch(format!(
                            "line {line}: header `{content}` mixes reduced and SI columns"
                        )))
                    }
                    _ => return Err(DataIoError::Parse {
                        line,
                        message: format!(
                            "expected header `{REDUCED_HEADER}` or `{SI_HEADER}`, got `{content}`"
                        ),
                    }),
                });
            continue;
        }
        let [a, b] = fields.as_slice() else {
            return Err(DataIoError::Parse {
                line,
                message: format!("expected 2 columns, got {}", fields.len()),
            });
        };
        let x: f64 = parse_num(line, "flux", a)?;
        let y: f64 = parse_num(line, "current", b)?;
        if let Some(&(_, prev, _)) = raw_points.last() {
            if !(x > prev) {
                return Err(DataIoError::NonMonotonicFlux { line });
            }
        }
        raw_points.push((line, x, y));
    }

    let Some(units) = header else {
        return Err(DataIoError::Parse {
            line: last_line.max(1),
            message: "missing header".into(),
        });
    };
    meta.ring_hint = hint.build();
    let points = match units {
        Units::Reduced => raw_points.iter().map(|&(_, f, j)| (f, j)).collect(),
        Units::Si => {
            let ring = scales.or(meta.ring_hint.as_ref()).ok_or_else(|| {
                DataIoError::UnitMismatch(
                    "SI trace needs ring scales (φ₀, J₀) from the configuration".into(),
                )
            })?;
            raw_points
                .iter()
                .map(|&(_, phi, amps)| (ring.flux_from_si(phi), ring.current_from_si(amps)))
                .collect()
        }
    };
    Ok(CurrentTrace::new(points, meta)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{synthesize_trace, SweepSpec};
    use proptest::prelude::*;

    fn odd3_text() -> String {
        let mut s = String::from("f,J\n");
        for i in 1..=8 {
            let f = i as f64 / 10.0;
            s.push_str(&format!(
                "{},{}\n",
                format_float(f),
                format_float(-(6 * i) as f64 / 10.0)
            ));
        }
        s
    }

    #[test]
    fn reads_reduced_trace() {
        let t = parse_trace_csv(&odd3_text(), None).unwrap();
        assert_eq!(t.len(), 8);
        assert_eq!(t.points()[0], (0.1, -0.6));
        assert_eq!(t.points()[1], (0.2, -1.2));
        assert_eq!(t.meta().source, TraceSource::Ingested);
    }

    #[test]
    fn si_flux_is_divided_by_flux_quantum() {
        let ring = RingSystem::electron_ring(1e-6, 3, SwParams::commutative()).unwrap();
        let mut s = String::from("phi_wb,J_A\n");
        for i in 1..=8 {
            let phi = 4.13567e-16 * i as f64;
            s.push_str(&format!(
                "{phi:e},{:e}\n",
                ring.current_to_si(-0.6 * i as f64)
            ));
        }
        let t = parse_trace_csv(&s, Some(&ring)).unwrap();
        let phi0 = 6.62607015e-34 / 1.602176634e-19;
        assert!((t.points()[0].0 - 4.13567e-16 / phi0).abs() < 1e-15);
        assert!((t.points()[0].0 - 0.1).abs() < 1e-6);
        assert!((t.points()[0].1 + 0.6).abs() < 1e-12);
        assert!(matches!(
            parse_trace_csv(&s, None),
            Err(DataIoError::UnitMismatch(_))
        ));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            parse_trace_csv("", None),
            Err(DataIoError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_trace_csv("# only: comments\n", None),
            Err(DataIoError::Parse { .. })
        ));
        assert!(matches!(
            parse_trace_csv("x,y\n0.1,1\n", None),
            Err(DataIoError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_trace_csv("f,J_A\n0.1,1\n", None),
            Err(DataIoError::UnitMismatch(_))
        ));
        let bad_number = odd3_text().replace("0.3,", "0,3,");
        assert!(matches!(
            parse_trace_csv(&bad_number, None),
            Err(DataIoError::Parse { line: 4, .. })
        ));
        let swapped = odd3_text().replace("0.3,", "0.15,");
        assert!(matches!(
            parse_trace_csv(&swapped, None),
            Err(DataIoError::NonMonotonicFlux { line: 4 })
        ));
        let decimal_comma = "f,J\n0,1;-0,6\n";
        assert!(parse_trace_csv(decimal_comma, None).is_err());
    }

    #[test]
    fn metadata_round_trips() {
        let ring =
            RingSystem::electron_ring(1e-6, 3, SwParams::new(1.0, 0.0, 1.76e-61).unwrap()).unwrap();
        let spec = SweepSpec {
            noise_sigma: 0.03,
            seed: 42,
            ..SweepSpec::standard()
        };
        let trace = synthesize_trace(&ring, &spec).unwrap();
        let text = render_trace_csv(&trace, Units::Reduced, None).unwrap();
        assert!(text.starts_with("# source: synthetic\n# seed: 42\n# noise_sigma: 0.03\n"));
        let back = parse_trace_csv(&text, None).unwrap();
        assert_eq!(back, trace);
    }

    #[test]
    fn si_round_trip_is_close() {
        let ring = RingSystem::electron_ring(1e-6, 4, SwParams::commutative()).unwrap();
        let trace = synthesize_trace(&ring, &SweepSpec::standard()).unwrap();
        let text = render_trace_csv(&trace, Units::Si, None).unwrap();
        let back = parse_trace_csv(&text, None).unwrap();
        for (a, b) in trace.points().iter().zip(back.points()) {
            assert!((a.0 - b.0).abs() <= 4.0 * f64::EPSILON * a.0);
            assert!((a.1 - b.1).abs() <= 4.0 * f64::EPSILON * a.1.abs());
        }
    }

    proptest! {
        #[test]
        fn reduced_round_trip_is_exact(
            start in 1e-12f64..1.0,
            steps in prop::collection::vec((1e-9f64..1.0, -1e6f64..1e6), 8..64),
        ) {
            let mut f = start;
            let mut pts = Vec::new();
            for (df, j) in steps {
                pts.push((f, j));
                f += df;
            }
            let trace = CurrentTrace::new(pts, TraceMeta::default()).unwrap();
            let text = render_trace_csv(&trace, Units::Reduced, None).unwrap();
            let back = parse_trace_csv(&text, None).unwrap();
            prop_assert_eq!(back, trace);
        }
    }
}
