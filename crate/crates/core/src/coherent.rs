//! Finite-dimensional nonlinear coherent states for the flat and sphere
//! oscillators, deformed binomial coefficients and the resolution of the
//! identity.
//!
//! Amplitudes are assembled from log-magnitudes plus a phase, so large
//! `N` or `|mu|` never overflow before normalization.

use std::f64::consts::PI;

use ndarray::Array1;
use num_complex::Complex64;

use crate::algebra::{g_deform, g_small_lambda, Flavor, SurfaceSpec};
use crate::error::{Error, Result};
use crate::fock::{FockVector, OperatorLabel, OperatorMatrix};
use crate::quad::{adaptive_simpson, CompensatedSum, Integral};

/// `ln C(N, n)`.
pub fn ln_binomial(n_max: usize, n: usize) -> f64 {
    assert!(n <= n_max, "binomial index {n} exceeds {n_max}");
    let k = n.min(n_max - n);
    (1..=k).map(|i| ((n_max - k + i) as f64 / i as f64).ln()).sum()
}

/// `C(N, n)` as a float; exact while it fits in the mantissa.
pub fn binomial(n_max: usize, n: usize) -> f64 {
    assert!(n <= n_max, "binomial index {n} exceeds {n_max}");
    let k = n.min(n_max - n);
    let mut acc = 1.0f64;
    for i in 1..=k {
        acc = acc * (n_max - k + i) as f64 / i as f64;
    }
    acc.round()
}

/// `[g(lambda, n)]! = g(lambda, 1) ... g(lambda, n)`, empty product 1.
pub fn g_factorial(spec: &SurfaceSpec, n: usize) -> Result<f64> {
    if n > spec.n_max() {
        return Err(Error::LevelOutOfRange { n, max: spec.n_max() });
    }
    (1..=n).try_fold(1.0, |acc, k| Ok(acc * g_deform(spec, k)?))
}

pub fn ln_g_factorial(spec: &SurfaceSpec, n: usize) -> Result<f64> {
    if n > spec.n_max() {
        return Err(Error::LevelOutOfRange { n, max: spec.n_max() });
    }
    (1..=n).try_fold(0.0, |acc, k| Ok(acc + g_deform(spec, k)?.ln()))
}

/// Deformed binomial coefficient `C(N, n) ([g(lambda, n)]!)^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformedBinomial {
    pub n_max: usize,
    pub n: usize,
    pub value: f64,
}

impl DeformedBinomial {
    pub fn new(spec: &SurfaceSpec, n: usize) -> Result<Self> {
        let gf = g_factorial(spec, n)?;
        Ok(Self { n_max: spec.n_max(), n, value: binomial(spec.n_max(), n) * gf * gf })
    }
}

/// `(1 + x)_lambda^N = sum_n C(N, n)_lambda x^n`.
pub fn deformed_binomial_expansion(spec: &SurfaceSpec, x: f64) -> f64 {
    (0..=spec.n_max())
        .map(|n| DeformedBinomial::new(spec, n).expect("n <= N").value * x.powi(n as i32))
        .collect::<CompensatedSum>()
        .value()
}

/// A normalized coherent state together with the data that defines it.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentState {
    vector: FockVector,
    mu: Complex64,
    flavor: Flavor,
}

impl CoherentState {
    pub fn vector(&self) -> &FockVector {
        &self.vector
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn spec(&self) -> &SurfaceSpec {
        self.vector.spec()
    }

    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.vector.amplitudes()[n]
    }
}

/// Unnormalized log-magnitudes `ln(sqrt(C(N,n)) [g]! |mu|^n)`.
fn log_weights(mu: Complex64, spec: &SurfaceSpec, flavor: Flavor) -> Vec<f64> {
    let ln_mu = mu.norm().ln();
    let mut ln_gf = 0.0;
    (0..=spec.n_max())
        .map(|n| {
            if flavor == Flavor::Sphere && n > 0 {
                ln_gf += g_deform(spec, n).expect("n <= N").ln();
            }
            0.5 * ln_binomial(spec.n_max(), n) + ln_gf + n as f64 * ln_mu
        })
        .collect()
}

fn assemble(mu: Complex64, spec: SurfaceSpec, flavor: Flavor, ln_mag: &[f64], ln_norm: f64) -> CoherentState {
    let phase = mu.arg();
    let amplitudes: Array1<Complex64> =
        ln_mag.iter().enumerate().map(|(n, &l)| Complex64::from_polar((l - ln_norm).exp(), n as f64 * phase)).collect();
    let vector = FockVector::new(amplitudes, spec).expect("length N + 1");
    CoherentState { vector, mu, flavor }
}

fn vacuum_state(mu: Complex64, spec: SurfaceSpec, flavor: Flavor) -> CoherentState {
    CoherentState { vector: FockVector::vacuum(spec), mu, flavor }
}

/// Flat coherent state `(1 + |mu|^2)^{-N/2} sum_n sqrt(C(N,n)) mu^n |n>`.
pub fn coherent_flat(mu: Complex64, n_max: usize) -> CoherentState {
    let spec = SurfaceSpec::flat(n_max);
    if mu.norm() == 0.0 {
        return vacuum_state(mu, spec, Flavor::Flat);
    }
    let ln_mag = log_weights(mu, &spec, Flavor::Flat);
    let ln_norm = 0.5 * n_max as f64 * mu.norm_sqr().ln_1p();
    assemble(mu, spec, Flavor::Flat, &ln_mag, ln_norm)
}

/// Sphere coherent state `C sum_n sqrt(C(N,n)) [g(lambda,n)]! mu^n |n>`,
/// with `C` fixed by normalization.
pub fn coherent_sphere(mu: Complex64, spec: &SurfaceSpec) -> CoherentState {
    if mu.norm() == 0.0 {
        return vacuum_state(mu, *spec, Flavor::Sphere);
    }
    let ln_mag = log_weights(mu, spec, Flavor::Sphere);
    let peak = ln_mag.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let total: CompensatedSum = ln_mag.iter().map(|&l| (2.0 * (l - peak)).exp()).collect();
    let ln_norm = peak + 0.5 * total.value().ln();
    assemble(mu, *spec, Flavor::Sphere, &ln_mag, ln_norm)
}

/// Coherent state of either flavor; `Flat` ignores the curvature.
pub fn coherent(mu: Complex64, spec: &SurfaceSpec, flavor: Flavor) -> CoherentState {
    match flavor {
        Flavor::Flat => coherent_flat(mu, spec.n_max()),
        Flavor::Sphere => coherent_sphere(mu, spec),
    }
}

/// Flat-space parameter that approximates the sphere state at small
/// curvature, `mu (1 + (lambda/2)(N + 1))`.
pub fn replacement_mu(mu: Complex64, spec: &SurfaceSpec) -> Complex64 {
    mu * g_small_lambda(spec)
}

/// `|<s1|s2>|^2`.
pub fn fidelity(s1: &CoherentState, s2: &CoherentState) -> Result<f64> {
    Ok(s1.vector.inner(&s2.vector)?.norm_sqr().min(1.0))
}

/// Radial integration settings for the resolution of identity, in the
/// variable `x = |mu|^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Upper limit of `x`; `f64::INFINITY` integrates the whole half line.
    pub cutoff: f64,
    /// Absolute tolerance per radial moment.
    pub tolerance: f64,
    /// Integrand evaluation budget per moment.
    pub max_evaluations: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { cutoff: f64::INFINITY, tolerance: 1e-12, max_evaluations: 10_000 }
    }
}

/// Exact value of `int_0^inf x^n (1 + x)^{-(N+2)} dx = B(n+1, N+1-n)`.
pub fn beta_moment_exact(n_max: usize, n: usize) -> f64 {
    1.0 / ((n_max + 1) as f64 * binomial(n_max, n))
}

/// `int_0^cutoff x^n (1 + x)^{-(N+2)} dx`, integrated in `t = x / (1 + x)`,
/// where the integrand becomes `t^n (1 - t)^{N-n}` on `[0, cutoff/(1+cutoff)]`.
pub fn radial_moment(n_max: usize, n: usize, quad: &QuadratureSpec) -> Result<Integral> {
    if n > n_max {
        return Err(Error::LevelOutOfRange { n, max: n_max });
    }
    if quad.cutoff.is_nan() || quad.cutoff <= 0.0 {
        return Err(Error::InvalidQuadrature("cutoff must be positive"));
    }
    let upper = if quad.cutoff.is_infinite() { 1.0 } else { quad.cutoff / (1.0 + quad.cutoff) };
    let (p, q) = (n as i32, (n_max - n) as i32);
    let integrand = move |t: f64| t.powi(p) * (1.0 - t).powi(q);
    adaptive_simpson(&integrand, 0.0, upper, quad.tolerance, quad.max_evaluations)
}

/// Per-level data of the flat identity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentCheck {
    pub n: usize,
    pub numeric: f64,
    pub exact: f64,
    pub relative_error: f64,
}

/// Outcome of integrating `(N+1)/pi (1+|mu|^2)^{-2} |mu><mu|` over the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResolution {
    pub moments: Vec<MomentCheck>,
    pub operator: OperatorMatrix,
    /// Max-norm distance of `operator` from the identity.
    pub residual: f64,
}

/// Numerically resolves the identity with flat coherent states and the
/// measure `(N+1)/pi (1+|mu|^2)^{-2}`. The angular integral is done
/// analytically, which removes every off-diagonal term and leaves one
/// radial moment per level.
pub fn verify_identity_flat(n_max: usize, quad: &QuadratureSpec) -> Result<IdentityResolution> {
    let spec = SurfaceSpec::flat(n_max);
    let mut moments = Vec::with_capacity(spec.dim());
    for n in 0..=n_max {
        let numeric = radial_moment(n_max, n, quad)?.value;
        let exact = beta_moment_exact(n_max, n);
        moments.push(MomentCheck { n, numeric, exact, relative_error: ((numeric - exact) / exact).abs() });
    }
    // (N+1)/pi * pi (angular) * C(N, n) * moment
    let m = (n_max + 1) as f64;
    let diag: Vec<f64> = moments.iter().map(|c| m * binomial(n_max, c.n) * c.numeric).collect();
    let operator = OperatorMatrix::from_diagonal(spec, OperatorLabel::Derived, |n| diag[n]);
    let residual = operator.max_abs_diff(&OperatorMatrix::identity(spec))?;
    Ok(IdentityResolution { moments, operator, residual })
}

/// What any sphere measure would need to reproduce, level by level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereMomentRow {
    pub n: usize,
    pub binomial: f64,
    /// `C(N, n)_lambda`, also the coefficient of `x^n` in `(1 + x)_lambda^N`.
    pub deformed_binomial: f64,
    /// Required deformed moment `1 / (pi C(N, n)_lambda)`.
    pub target_moment: f64,
    /// Flat counterpart `1 / (pi C(N, n))`.
    pub flat_target: f64,
}

/// Tabulates the moments a sphere measure must produce. Nothing is
/// integrated: no concrete sphere measure is known.
pub fn sphere_moment_report(spec: &SurfaceSpec) -> Vec<SphereMomentRow> {
    (0..=spec.n_max())
        .map(|n| {
            let binomial = binomial(spec.n_max(), n);
            let deformed_binomial = DeformedBinomial::new(spec, n).expect("n <= N").value;
            SphereMomentRow {
                n,
                binomial,
                deformed_binomial,
                target_moment: 1.0 / (PI * deformed_binomial),
                flat_target: 1.0 / (PI * binomial),
            }
        })
        .collect()
}
