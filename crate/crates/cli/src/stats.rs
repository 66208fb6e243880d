//! Plain-text report for a single coherent state.

use std::fmt::Write as _;

use nlcs_core::coherent::coherent;
use nlcs_core::statistics::{phi_grid, squeeze_deformed, squeeze_nondeformed, stats_report};
use nlcs_core::{Complex64, Flavor, SurfaceSpec};

use crate::error::CliError;
use crate::table::format_float;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatsRequest {
    pub flavor: Flavor,
    pub n_max: usize,
    pub lambda: f64,
    pub mu: Complex64,
    pub phi_points: usize,
}

pub fn stats_text(req: &StatsRequest) -> Result<String, CliError> {
    if req.phi_points < 2 {
        return Err(CliError::Config("phi grid needs at least 2 points".into()));
    }
    let spec = SurfaceSpec::new(req.lambda, req.n_max)?;
    let state = coherent(req.mu, &spec, req.flavor);
    let r = stats_report(&state);
    let grid = phi_grid(req.phi_points);
    let plain = squeeze_nondeformed(&state, &grid);
    let deformed = squeeze_deformed(&state, &grid);

    let mut out = String::new();
    let mut line = |k: &str, v: String| writeln!(out, "{k:<18} {v}").expect("String write");
    line("flavor", req.flavor.to_string());
    line("n_max", req.n_max.to_string());
    line("lambda", format_float(req.lambda));
    line("mu", format!("{} + {}i", format_float(req.mu.re), format_float(req.mu.im)));
    line("mean_n", format_float(r.mean_n));
    line("variance_n", format_float(r.variance_n));
    line("mandel", r.mandel_m.map_or_else(|| "undefined".to_string(), format_float));
    line("top_level_weight", format_float(r.top_level_weight));
    line("min_s1_plain", format_float(plain.min_s1()));
    line("min_s2_plain", format_float(plain.min_s2()));
    line("min_s1_deformed", format_float(deformed.min_s1()));
    line("min_s2_deformed", format_float(deformed.min_s2()));
    writeln!(out, "n,p_n").expect("String write");
    for (n, p) in r.pn.iter().enumerate() {
        writeln!(out, "{n},{}", format_float(*p)).expect("String write");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_has_undefined_mandel() {
        let req =
            StatsRequest { flavor: Flavor::Sphere, n_max: 4, lambda: 0.3, mu: Complex64::new(0.0, 0.0), phi_points: 9 };
        let text = stats_text(&req).unwrap();
        assert!(text.contains("mandel             undefined"));
        assert!(text.contains("0,1.0000000000000000e0"));
    }
}
