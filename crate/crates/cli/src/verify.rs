//! Invariant suite behind `nlcs verify`.

use std::fmt;
use std::io::Write;

use nlcs_core::algebra::{energy_flat, energy_sphere, g_deform, h_residual_table, phi_flat, structure, HResidual};
use nlcs_core::coherent::{coherent, coherent_flat, coherent_sphere, fidelity, verify_identity_flat, QuadratureSpec};
use nlcs_core::fock::{ladder_from_structure, number_operator, quadratures};
use nlcs_core::statistics::{
    mandel, mean_photon, phi_grid, photon_variance, squeeze_deformed, squeeze_nondeformed, FlatClosedForm,
};
use nlcs_core::{Complex64, Flavor, OperatorLabel, OperatorMatrix, SurfaceSpec};

use crate::error::CliError;

/// Default tolerances, one per invariant family. `--tol` replaces all of them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub ladder_shift: f64,
    pub commutator: f64,
    pub hermiticity: f64,
    pub degeneration: f64,
    pub flat_fidelity: f64,
    pub normalization: f64,
    pub beta_moment: f64,
    pub identity: f64,
    pub closed_form: f64,
    pub vacuum: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            ladder_shift: 1e-12,
            commutator: 1e-10,
            hermiticity: 1e-12,
            degeneration: 1e-6,
            flat_fidelity: 1e-12,
            normalization: 1e-12,
            beta_moment: 1e-6,
            identity: 1e-6,
            closed_form: 1e-10,
            vacuum: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Self {
            ladder_shift: tol,
            commutator: tol,
            hermiticity: tol,
            degeneration: tol,
            flat_fidelity: tol,
            normalization: tol,
            beta_moment: tol,
            identity: tol,
            closed_form: tol,
            vacuum: tol,
        }
    }
}

impl fmt::Display for Tolerances {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = [
            ("ladder_shift", self.ladder_shift),
            ("commutator", self.commutator),
            ("hermiticity", self.hermiticity),
            ("degeneration", self.degeneration),
            ("flat_fidelity", self.flat_fidelity),
            ("normalization", self.normalization),
            ("beta_moment", self.beta_moment),
            ("identity", self.identity),
            ("closed_form", self.closed_form),
            ("vacuum", self.vacuum),
        ];
        for (name, tol) in rows {
            writeln!(f, "  {name:<14} {tol:.1e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub tol: Option<f64>,
    pub n_max_max: usize,
    pub lambdas: Vec<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { tol: None, n_max_max: 20, lambdas: vec![0.0, 0.1, 1.0] }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Config(format!("tolerance must be positive, got {t}")));
            }
        }
        if let Some(l) = self.lambdas.iter().find(|l| !(l.is_finite() && **l >= 0.0)) {
            return Err(CliError::Config(format!("curvature must be finite and non-negative, got {l}")));
        }
        Ok(())
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol.map_or_else(Tolerances::default, Tolerances::uniform)
    }
}

/// The sphere deformation under test. The suite builds the ladder from
/// `Phi = n (N + 1 - n) g(n)^2` and compares it with the library's algebra,
/// so a wrong `g` shows up as a named breach.
#[derive(Debug, Clone, Copy)]
pub struct AlgebraModel {
    pub name: &'static str,
    pub g: fn(&SurfaceSpec, usize) -> f64,
}

fn library_g(spec: &SurfaceSpec, n: usize) -> f64 {
    g_deform(spec, n).expect("n <= N + 1")
}

fn corrupted_g(spec: &SurfaceSpec, n: usize) -> f64 {
    library_g(spec, n) * (1.0 + 1e-3 * n as f64)
}

impl AlgebraModel {
    pub fn library() -> Self {
        Self { name: "library", g: library_g }
    }

    /// Deliberately wrong `g`, for exercising the failure path.
    pub fn corrupted() -> Self {
        Self { name: "corrupted", g: corrupted_g }
    }

    pub fn phi(&self, spec: &SurfaceSpec, n: usize) -> f64 {
        let g = (self.g)(spec, n);
        phi_flat(spec.n_max(), n).expect("n <= N + 1").value() * g * g
    }

    fn ladder(&self, spec: &SurfaceSpec, flavor: Flavor) -> (OperatorMatrix, OperatorMatrix) {
        match flavor {
            Flavor::Flat => ladder_from_structure(spec, flavor, |n| phi_flat(spec.n_max(), n).unwrap().value()),
            Flavor::Sphere => ladder_from_structure(spec, flavor, |n| self.phi(spec, n)),
        }
    }
}

/// Outcome of one invariant family: the worst deviation seen and where.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub worst: f64,
    pub tol: f64,
    pub at: String,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.worst < self.tol
    }
}

struct Tracker {
    name: &'static str,
    tol: f64,
    worst: f64,
    at: String,
}

impl Tracker {
    fn new(name: &'static str, tol: f64) -> Self {
        Self { name, tol, worst: 0.0, at: String::new() }
    }

    fn record(&mut self, value: f64, at: impl FnOnce() -> String) {
        // NaN is always the worst possible outcome
        if value.is_nan() || value > self.worst || (self.at.is_empty() && value >= self.worst) {
            self.worst = if value.is_nan() { f64::INFINITY } else { value };
            self.at = at();
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult { name: self.name, worst: self.worst, tol: self.tol, at: self.at }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HTable {
    pub lambda: f64,
    pub n_max: usize,
    pub rows: Vec<HResidual>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub model: &'static str,
    pub tolerances: Tolerances,
    pub checks: Vec<CheckResult>,
    pub h_tables: Vec<HTable>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algebra model: {}", self.model)?;
        writeln!(f, "tolerances:")?;
        write!(f, "{}", self.tolerances)?;
        writeln!(f, "checks:")?;
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "  {status} {:<22} worst {:.3e} (tol {:.1e}) at {}", c.name, c.worst, c.tol, c.at)?;
        }
        writeln!(f, "h residuals (informational, never fatal):")?;
        for t in &self.h_tables {
            writeln!(f, "  lambda = {}, N = {}", t.lambda, t.n_max)?;
            writeln!(f, "    {:>3} {:>6} {:>24} {:>24} {:>12}", "n", "j0", "Phi(n)-Phi(n+1)", "2 j0 h", "residual")?;
            for r in &t.rows {
                writeln!(
                    f,
                    "    {:>3} {:>6.1} {:>24.16e} {:>24.16e} {:>12.3e}",
                    r.n, r.j0, r.exact, r.from_h, r.residual
                )?;
            }
        }
        let failed: Vec<&str> = self.failures().map(|c| c.name).collect();
        if failed.is_empty() {
            writeln!(f, "result: PASS")
        } else {
            writeln!(f, "result: FAIL ({})", failed.join(", "))
        }
    }
}

const MU_SAMPLES: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 10.0];
const FLAT_LIMIT_LAMBDA: f64 = 1e-8;
const IDENTITY_MAX_N: usize = 10;

fn specs(cfg: &VerifyConfig) -> Result<Vec<SurfaceSpec>, CliError> {
    let mut out = Vec::new();
    for &lambda in &cfg.lambdas {
        for n in 0..=cfg.n_max_max {
            out.push(SurfaceSpec::new(lambda, n)?);
        }
    }
    Ok(out)
}

fn label(spec: &SurfaceSpec, flavor: Flavor) -> String {
    format!("{flavor} N={} lambda={}", spec.n_max(), spec.lambda())
}

fn check_algebra(cfg: &VerifyConfig, model: &AlgebraModel, tol: &Tolerances) -> Result<Vec<CheckResult>, CliError> {
    let mut shift = Tracker::new("ladder shift [n, A^dag]", tol.ladder_shift);
    let mut comm = Tracker::new("commutator [A, A^dag]", tol.commutator);
    let mut su2 = Tracker::new("su(2) [J0, J+-]", tol.ladder_shift);
    let mut herm = Tracker::new("quadrature hermiticity", tol.hermiticity);
    for spec in specs(cfg)? {
        let number = number_operator(&spec);
        for flavor in [Flavor::Flat, Flavor::Sphere] {
            let at = || label(&spec, flavor);
            let (lower, raise) = model.ladder(&spec, flavor);
            let r1 = number.commutator(&raise)?.max_abs_diff(&raise)?;
            let r2 = number.commutator(&lower)?.max_abs_diff(&lower.scale((-1.0).into()))?;
            shift.record(r1.max(r2), at);

            let target = OperatorMatrix::from_diagonal(spec, OperatorLabel::Derived, |n| {
                structure(&spec, flavor, n + 1).unwrap().value() - structure(&spec, flavor, n).unwrap().value()
            });
            comm.record(lower.commutator(&raise)?.max_abs_diff(&target)?, at);

            let half = spec.n_max() as f64 / 2.0;
            let j0 = OperatorMatrix::from_diagonal(spec, OperatorLabel::JZero, |n| n as f64 - half);
            let p = j0.commutator(&raise)?.max_abs_diff(&raise)?;
            let m = j0.commutator(&lower)?.max_abs_diff(&lower.scale((-1.0).into()))?;
            su2.record(p.max(m), at);

            for phi in [0.0, 0.7, 2.0] {
                let (x1, x2) = quadratures(&lower, phi);
                let d1 = x1.max_abs_diff(&x1.dagger())?;
                let d2 = x2.max_abs_diff(&x2.dagger())?;
                herm.record(d1.max(d2), at);
            }
        }
    }
    Ok(vec![shift.finish(), comm.finish(), su2.finish(), herm.finish()])
}

fn check_flat_limit(cfg: &VerifyConfig, model: &AlgebraModel, tol: &Tolerances) -> Result<Vec<CheckResult>, CliError> {
    let mut g = Tracker::new("flat limit of g", tol.degeneration);
    let mut energy = Tracker::new("flat limit of energy", tol.degeneration);
    let mut fid = Tracker::new("flat limit of states", tol.flat_fidelity);
    for n_max in 0..=cfg.n_max_max {
        let spec = SurfaceSpec::new(FLAT_LIMIT_LAMBDA, n_max)?;
        let at = || format!("N={n_max} lambda={FLAT_LIMIT_LAMBDA:e}");
        for n in 0..=n_max + 1 {
            g.record(((model.g)(&spec, n) - 1.0).abs(), at);
        }
        let ef = energy_flat(n_max);
        energy.record((energy_sphere(n_max, FLAT_LIMIT_LAMBDA)? - ef).abs() / ef, at);
        for mu in MU_SAMPLES {
            let mu = Complex64::new(mu, 0.0);
            let infidelity = 1.0 - fidelity(&coherent_sphere(mu, &spec), &coherent_flat(mu, n_max))?;
            fid.record(infidelity.abs(), || format!("N={n_max} mu={}", mu.re));
        }
    }
    Ok(vec![g.finish(), energy.finish(), fid.finish()])
}

fn check_states(cfg: &VerifyConfig, tol: &Tolerances) -> Result<Vec<CheckResult>, CliError> {
    let mut norm = Tracker::new("normalization", tol.normalization);
    let mut closed = Tracker::new("flat binomial moments", tol.closed_form);
    let mut vacuum = Tracker::new("vacuum squeezing", tol.vacuum);
    let grid = phi_grid(73);
    for spec in specs(cfg)? {
        for flavor in [Flavor::Flat, Flavor::Sphere] {
            for mu in MU_SAMPLES {
                let st = coherent(Complex64::new(mu, 0.0), &spec, flavor);
                norm.record((st.vector().norm_sqr() - 1.0).abs(), || format!("{} mu={mu}", label(&spec, flavor)));
            }
            // a single level has no room for a^dag |0>, so the plain baseline is -1 there
            if spec.n_max() == 0 {
                continue;
            }
            let vac = coherent(Complex64::new(0.0, 0.0), &spec, flavor);
            for curve in [squeeze_nondeformed(&vac, &grid), squeeze_deformed(&vac, &grid)] {
                let worst = curve.s1.iter().chain(&curve.s2).fold(0.0f64, |w, s| w.max(s.abs()));
                vacuum.record(worst, || label(&spec, flavor));
            }
        }
    }
    for n_max in 1..=cfg.n_max_max {
        for mu in MU_SAMPLES {
            let m = Complex64::new(mu, 0.0);
            let st = coherent_flat(m, n_max);
            let cf = FlatClosedForm::new(m, n_max);
            let dev = (mean_photon(&st) - cf.mean)
                .abs()
                .max((photon_variance(&st) - cf.variance).abs())
                .max((mandel(&st)? - cf.mandel).abs());
            closed.record(dev, || format!("N={n_max} mu={mu}"));
        }
    }
    Ok(vec![norm.finish(), closed.finish(), vacuum.finish()])
}

fn check_identity(cfg: &VerifyConfig, tol: &Tolerances) -> Result<Vec<CheckResult>, CliError> {
    let mut moment = Tracker::new("Beta moment identity", tol.beta_moment);
    let mut identity = Tracker::new("resolution of identity", tol.identity);
    let quad = QuadratureSpec::default();
    for n_max in 0..=cfg.n_max_max.min(IDENTITY_MAX_N) {
        let res = verify_identity_flat(n_max, &quad)?;
        for m in &res.moments {
            moment.record(m.relative_error, || format!("N={n_max} n={}", m.n));
        }
        identity.record(res.residual, || format!("N={n_max}"));
    }
    Ok(vec![moment.finish(), identity.finish()])
}

fn h_tables() -> Result<Vec<HTable>, CliError> {
    let mut out = Vec::new();
    for lambda in [0.0, 0.1] {
        for n_max in [2, 10] {
            out.push(HTable { lambda, n_max, rows: h_residual_table(&SurfaceSpec::new(lambda, n_max)?) });
        }
    }
    Ok(out)
}

/// Runs every invariant family against `model` without printing.
pub fn verify_report(cfg: &VerifyConfig, model: &AlgebraModel) -> Result<VerifyReport, CliError> {
    cfg.validate()?;
    let tolerances = cfg.tolerances();
    let mut checks = check_algebra(cfg, model, &tolerances)?;
    checks.extend(check_flat_limit(cfg, model, &tolerances)?);
    checks.extend(check_states(cfg, &tolerances)?);
    checks.extend(check_identity(cfg, &tolerances)?);
    Ok(VerifyReport { model: model.name, tolerances, checks, h_tables: h_tables()? })
}

/// Runs the suite and writes the human-readable report to `out`.
pub fn run_verify(cfg: &VerifyConfig, model: &AlgebraModel, out: &mut impl Write) -> Result<VerifyReport, CliError> {
    let report = verify_report(cfg, model)?;
    write!(out, "{report}")?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig { tol: None, n_max_max: 6, lambdas: vec![0.0, 0.1, 1.0] }
    }

    #[test]
    fn library_model_passes() {
        let r = verify_report(&small(), &AlgebraModel::library()).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn corrupted_g_is_named() {
        let r = verify_report(&small(), &AlgebraModel::corrupted()).unwrap();
        assert!(!r.passed());
        let failed: Vec<_> = r.failures().map(|c| c.name).collect();
        assert!(failed.contains(&"commutator [A, A^dag]"), "{failed:?}");
        assert!(r.to_string().contains("result: FAIL"));
    }

    #[test]
    fn h_table_is_reported_but_not_checked() {
        let r = verify_report(&small(), &AlgebraModel::library()).unwrap();
        assert_eq!(r.h_tables.len(), 4);
        let hot = r.h_tables.iter().find(|t| t.lambda == 0.1 && t.n_max == 10).unwrap();
        assert!(hot.rows.iter().any(|row| row.residual > 1e-3));
        for t in r.h_tables.iter().filter(|t| t.lambda == 0.0) {
            assert!(t.rows.iter().all(|row| row.residual < 1e-12));
        }
    }

    #[test]
    fn tolerance_override_is_uniform() {
        let cfg = VerifyConfig { tol: Some(1e-3), ..small() };
        assert_eq!(cfg.tolerances(), Tolerances::uniform(1e-3));
        assert!(VerifyConfig { tol: Some(-1.0), ..small() }.validate().is_err());
        let text = verify_report(&cfg, &AlgebraModel::library()).unwrap().to_string();
        assert!(text.contains("commutator     1.0e-3"));
    }
}
