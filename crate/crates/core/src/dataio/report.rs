use std::collections::BTreeMap;
use std::path::Path;

use super::config::RunConfig;
use super::format::format_sci4;
use super::{write_file, DataIoError};
use crate::pipeline::{PowerLawFit, Verdict};

const MISSING: &str = "n/a";

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| MISSING.to_string(), format_sci4)
}

fn push_fit(map: &mut BTreeMap<String, String>, name: &str, fit: Option<&PowerLawFit>) {
    let fields: [(&str, Option<String>); 6] = [
        ("amplitude", fit.map(|f| format_sci4(f.amplitude))),
        ("exponent", fit.map(|f| format_sci4(f.exponent))),
        ("r_squared", fit.map(|f| format_sci4(f.r_squared))),
        ("points", fit.map(|f| f.n_points_used.to_string())),
        ("floor", fit.map(|f| format_sci4(f.residual_floor))),
        (
            "sign_consistency",
            fit.map(|f| format_sci4(f.sign_consistency)),
        ),
    ];
    for (k, v) in fields {
        map.insert(
            format!("{name}.{k}"),
            v.unwrap_or_else(|| MISSING.to_string()),
        );
    }
}

/// Plain-text report, one `key: value` line per entry, keys in byte order.
pub fn render_report(verdict: &Verdict, config: &RunConfig) -> String {
    let mut map = BTreeMap::new();
    let mut put = |k: &str, v: String| {
        map.insert(k.to_string(), v);
    };
    put("verdict", verdict.kind.as_str().to_string());
    put("n_electrons", verdict.estimated_n.to_string());
    put("parity", verdict.estimated_parity.as_str().to_string());
    put("f_nc_hat", opt(verdict.estimated_f_nc));
    put("f_nc_cross_check", opt(verdict.f_nc_cross_check));
    put("theta_tilde_hat", opt(verdict.estimated_theta_tilde));
    put("exponent_tol", format_sci4(verdict.thresholds.exponent_tol));
    put(
        "amplitude_floor_mult",
        format_sci4(verdict.thresholds.amplitude_floor_mult),
    );
    put(
        "sign_consistency_min",
        format_sci4(verdict.thresholds.min_sign_consistency),
    );
    put(
        "fit_window",
        format!(
            "{}, {}",
            format_sci4(config.fit_window.0),
            format_sci4(config.fit_window.1)
        ),
    );
    put("smoothing_window", config.smoothing_window.to_string());
    put("radius_m", format_sci4(config.radius_m));
    put("alpha", format_sci4(config.alpha));
    for (i, d) in verdict.diagnostics.iter().enumerate() {
        put(
            &format!("diagnostic.{:02}", i + 1),
            d.replace(['\n', '\r'], " "),
        );
    }
    push_fit(&mut map, "lambda", verdict.lambda_fit.as_ref());
    push_fit(&mut map, "sigma", verdict.sigma_fit.as_ref());

    let mut out = String::new();
    for (k, v) in &map {
        out.push_str(k);
        out.push_str(": ");
        out.push_str(v);
        out.push('\n');
    }
    out
}

pub fn write_results_report(
    verdict: &Verdict,
    config: &RunConfig,
    path: &Path,
) -> Result<(), DataIoError> {
    write_file(path, &render_report(verdict, config))
}
