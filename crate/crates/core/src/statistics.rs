//! Photon-number statistics and quadrature squeezing of coherent states.
//!
//! Every moment goes through [`crate::fock::expectation`] on the operator
//! matrices; closed forms are only used as cross-checks.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::{structure, Flavor, SurfaceSpec};
use crate::coherent::CoherentState;
use crate::error::{Error, Result};
use crate::fock::{build_boson_ladder, build_ladder, expectation, number_operator, FockVector, OperatorMatrix};
use crate::quad::CompensatedSum;

/// Default number of phase samples over `[0, 2 pi]`, endpoints included.
pub const DEFAULT_PHI_POINTS: usize = 721;

/// `points` equally spaced phases from 0 to `2 pi` inclusive.
pub fn phi_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points).map(|k| 2.0 * PI * k as f64 / (points - 1) as f64).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsReport {
    pub spec: SurfaceSpec,
    pub mu: Complex64,
    pub flavor: Flavor,
    /// `P(n)` for `n = 0..=N`.
    pub pn: Vec<f64>,
    pub mean_n: f64,
    pub variance_n: f64,
    /// `None` for the vacuum, where the Mandel parameter is undefined.
    pub mandel_m: Option<f64>,
    /// `P(N)`: weight on the level where the truncated `a^dag` vanishes.
    pub top_level_weight: f64,
}

pub fn photon_distribution(state: &CoherentState) -> Vec<f64> {
    state.vector().probabilities()
}

fn real_expectation(v: &FockVector, m: &OperatorMatrix) -> f64 {
    expectation(v, m).expect("operator built for this state").re
}

pub fn mean_photon(state: &CoherentState) -> f64 {
    real_expectation(state.vector(), &number_operator(state.spec()))
}

pub fn photon_variance(state: &CoherentState) -> f64 {
    let n = number_operator(state.spec());
    let n2 = n.compose(&n).expect("same dimension");
    let mean = real_expectation(state.vector(), &n);
    (real_expectation(state.vector(), &n2) - mean * mean).max(0.0)
}

/// `((Delta n)^2 - <n>) / <n>`; negative means sub-Poissonian.
pub fn mandel(state: &CoherentState) -> Result<f64> {
    let mean = mean_photon(state);
    if mean <= 0.0 {
        return Err(Error::UndefinedMandel);
    }
    Ok((photon_variance(state) - mean) / mean)
}

pub fn stats_report(state: &CoherentState) -> StatsReport {
    let pn = photon_distribution(state);
    let top_level_weight = *pn.last().expect("dimension >= 1");
    StatsReport {
        spec: *state.spec(),
        mu: state.mu(),
        flavor: state.flavor(),
        mean_n: mean_photon(state),
        variance_n: photon_variance(state),
        mandel_m: mandel(state).ok(),
        top_level_weight,
        pn,
    }
}

/// Binomial moments of the flat state, `p = |mu|^2 / (1 + |mu|^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatClosedForm {
    pub p: f64,
    pub mean: f64,
    pub variance: f64,
    pub mandel: f64,
}

impl FlatClosedForm {
    pub fn new(mu: Complex64, n_max: usize) -> Self {
        let x = mu.norm_sqr();
        let p = x / (1.0 + x);
        let n = n_max as f64;
        Self { p, mean: n * p, variance: n * p * (1.0 - p), mandel: -p }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqueezeKind {
    /// Quadratures of the truncated boson `a`.
    Nondeformed,
    /// Quadratures of the deformed `A`.
    Deformed,
}

/// Squeezing indices `S1(phi)`, `S2(phi)` over a phase grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SqueezeCurve {
    pub kind: SqueezeKind,
    pub phi_grid: Vec<f64>,
    pub s1: Vec<f64>,
    pub s2: Vec<f64>,
}

impl SqueezeCurve {
    pub fn min_s1(&self) -> f64 {
        self.s1.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn min_s2(&self) -> f64 {
        self.s2.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// `<L>, <L^2>, <L^dag L>, <L L^dag>` for a lowering operator `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderMoments {
    pub lower: Complex64,
    pub lower_sq: Complex64,
    pub raise_lower: f64,
    pub lower_raise: f64,
}

impl LadderMoments {
    pub fn new(v: &FockVector, lower: &OperatorMatrix) -> Result<Self> {
        let raise = lower.dagger();
        Ok(Self {
            lower: expectation(v, lower)?,
            lower_sq: expectation(v, &lower.compose(lower)?)?,
            raise_lower: expectation(v, &raise.compose(lower)?)?.re,
            lower_raise: expectation(v, &lower.compose(&raise)?)?.re,
        })
    }

    /// `((Delta X1)^2, (Delta X2)^2)` at phase `phi`.
    pub fn variances(&self, phi: f64) -> (f64, f64) {
        let e = Complex64::from_polar(1.0, phi);
        let sym = 0.25 * (self.raise_lower + self.lower_raise);
        let cross = 0.5 * (e * e * self.lower_sq).re;
        let shifted = e * self.lower;
        let var1 = sym + cross - shifted.re * shifted.re;
        let var2 = sym - cross - shifted.im * shifted.im;
        (var1, var2)
    }
}

/// `<(n+1) f^2(n+1)> - <n f^2(n)> = sum_n P(n) (Phi(n+1) - Phi(n))`, with
/// `Phi(N+1) = 0`.
pub fn deformed_commutator_mean(state: &CoherentState) -> f64 {
    let spec = state.spec();
    let flavor = state.flavor();
    state
        .vector()
        .probabilities()
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let up = structure(spec, flavor, n + 1).expect("n + 1 <= N + 1").value();
            let here = structure(spec, flavor, n).expect("n <= N").value();
            p * (up - here)
        })
        .collect::<CompensatedSum>()
        .value()
}

/// `S_ia(phi) = 4 (Delta X_ia)^2 - 1` with the truncated boson operators.
pub fn squeeze_nondeformed(state: &CoherentState, phi_grid: &[f64]) -> SqueezeCurve {
    let (a, _) = build_boson_ladder(state.spec());
    let m = LadderMoments::new(state.vector(), &a).expect("operator built for this state");
    let (s1, s2) = phi_grid
        .iter()
        .map(|&phi| {
            let (v1, v2) = m.variances(phi);
            (4.0 * v1 - 1.0, 4.0 * v2 - 1.0)
        })
        .unzip();
    SqueezeCurve { kind: SqueezeKind::Nondeformed, phi_grid: phi_grid.to_vec(), s1, s2 }
}

/// `S_iA(phi) = 4 (Delta X_iA)^2 - <(n+1) f^2(n+1)> + <n f^2(n)>` with the
/// deformed operators of the state's flavor.
pub fn squeeze_deformed(state: &CoherentState, phi_grid: &[f64]) -> SqueezeCurve {
    let (lower, _) = build_ladder(state.spec(), state.flavor());
    let m = LadderMoments::new(state.vector(), &lower).expect("operator built for this state");
    let baseline = deformed_commutator_mean(state);
    let (s1, s2) = phi_grid
        .iter()
        .map(|&phi| {
            let (v1, v2) = m.variances(phi);
            (4.0 * v1 - baseline, 4.0 * v2 - baseline)
        })
        .unzip();
    SqueezeCurve { kind: SqueezeKind::Deformed, phi_grid: phi_grid.to_vec(), s1, s2 }
}
