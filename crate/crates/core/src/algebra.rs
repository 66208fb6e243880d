//! Scalar spectra, structure functions and deformation functions.
//!
//! For a fixed level `N` the flat oscillator has structure function
//! `n (N + 1 - n)`; on a sphere of curvature `lambda` it picks up the
//! factor `g(lambda, n)^2`. The integration constant of the underlying
//! construction (`-N/2` flat, `N/2` sphere) is absorbed into the spectra
//! below and not stored.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Physical configuration: curvature and the top occupation number `N`.
///
/// The Fock space has dimension `N + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSpec {
    lambda: f64,
    level_n_max: usize,
}

impl SurfaceSpec {
    pub fn new(lambda: f64, level_n_max: usize) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidCurvature(lambda));
        }
        Ok(Self { lambda, level_n_max })
    }

    /// Zero curvature.
    pub fn flat(level_n_max: usize) -> Self {
        Self { lambda: 0.0, level_n_max }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn n_max(&self) -> usize {
        self.level_n_max
    }

    pub fn dim(&self) -> usize {
        self.level_n_max + 1
    }

    /// Same level, zero curvature.
    pub fn flattened(&self) -> Self {
        Self::flat(self.level_n_max)
    }

    /// Radius of the sphere, `1/sqrt(lambda)`; infinite when flat.
    pub fn radius(&self) -> f64 {
        1.0 / self.lambda.sqrt()
    }

    fn check_level(&self, n: usize) -> Result<()> {
        check_level(self.level_n_max, n)
    }
}

fn check_level(n_max: usize, n: usize) -> Result<()> {
    if n > n_max + 1 {
        Err(Error::LevelOutOfRange { n, max: n_max + 1 })
    } else {
        Ok(())
    }
}

/// Which oscillator a ladder operator or coherent state belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Flat,
    Sphere,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Flat => "flat",
            Flavor::Sphere => "sphere",
        })
    }
}

impl FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "flat" => Ok(Flavor::Flat),
            "sphere" => Ok(Flavor::Sphere),
            other => Err(format!("unknown flavor '{other}' (expected flat or sphere)")),
        }
    }
}

/// Value of a structure function `Phi(E_N, n)`; non-negative on `0..=N+1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct StructureValue(f64);

impl StructureValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<StructureValue> for f64 {
    fn from(v: StructureValue) -> f64 {
        v.0
    }
}

/// `sqrt(1 + lambda^2/4)`, shared by the sphere spectrum and `g`.
fn curvature_root(lambda: f64) -> f64 {
    (1.0 + lambda * lambda / 4.0).sqrt()
}

/// Flat energy level `E_N = N + 1`.
pub fn energy_flat(n_max: usize) -> f64 {
    (n_max + 1) as f64
}

/// Sphere energy level `sqrt(1 + lambda^2/4) (N + 1) + (lambda/2) (N + 1)^2`.
pub fn energy_sphere(n_max: usize, lambda: f64) -> Result<f64> {
    let spec = SurfaceSpec::new(lambda, n_max)?;
    let m = (spec.level_n_max + 1) as f64;
    Ok(curvature_root(lambda) * m + 0.5 * lambda * m * m)
}

pub fn phi_flat(n_max: usize, n: usize) -> Result<StructureValue> {
    check_level(n_max, n)?;
    Ok(StructureValue((n * (n_max + 1 - n)) as f64))
}

/// Deformation function `g(lambda, n)` relating the sphere ladder operators
/// to the flat ones. Exactly 1 when `lambda == 0`.
pub fn g_deform(spec: &SurfaceSpec, n: usize) -> Result<f64> {
    spec.check_level(n)?;
    let lambda = spec.lambda;
    let root = curvature_root(lambda);
    let upper = lambda * (spec.level_n_max + 1 - n) as f64 + root;
    let lower = lambda * n as f64 + root;
    Ok((upper * lower).sqrt())
}

/// `Phi_s = Phi_f g^2`.
pub fn phi_sphere(spec: &SurfaceSpec, n: usize) -> Result<StructureValue> {
    let flat = phi_flat(spec.level_n_max, n)?.0;
    let g = g_deform(spec, n)?;
    Ok(StructureValue(flat * g * g))
}

/// Structure function of the given flavor. `Flat` ignores the curvature.
pub fn structure(spec: &SurfaceSpec, flavor: Flavor, n: usize) -> Result<StructureValue> {
    match flavor {
        Flavor::Flat => phi_flat(spec.level_n_max, n),
        Flavor::Sphere => phi_sphere(spec, n),
    }
}

pub fn f_flat(n_max: usize, n: usize) -> Result<f64> {
    check_level(n_max, n)?;
    Ok(((n_max + 1 - n) as f64).sqrt())
}

pub fn f_sphere(spec: &SurfaceSpec, n: usize) -> Result<f64> {
    Ok(f_flat(spec.level_n_max, n)? * g_deform(spec, n)?)
}

/// Deformation of the su(2) commutator, `[J+, J-] = 2 J0 h(lambda, N, J0)`,
/// with the curvature factor written as `(1 + lambda/4)^(1/2)`.
///
/// `j0` must lie on the grid `-N/2, -N/2 + 1, ..., N/2`.
pub fn h_su2(spec: &SurfaceSpec, j0: f64) -> Result<f64> {
    let n_max = spec.level_n_max;
    let shifted = j0 + n_max as f64 / 2.0;
    if !(shifted >= 0.0 && shifted <= n_max as f64 && shifted.fract() == 0.0) {
        return Err(Error::OffGridJ0 { j0, n_max });
    }
    let lambda = spec.lambda;
    let nf = n_max as f64;
    Ok(1.0 + lambda * (1.0 + lambda / 4.0).sqrt() * (nf + 1.0)
        - lambda * lambda * (2.0 * j0 * j0 - nf * (nf / 2.0 + 1.0) - 0.25))
}

/// One row of the `h` consistency report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HResidual {
    pub n: usize,
    pub j0: f64,
    /// `Phi_s(n) - Phi_s(n+1)`, the diagonal of `[J+, J-]`.
    pub exact: f64,
    /// `2 j0 h(lambda, N, j0)`.
    pub from_h: f64,
    pub residual: f64,
}

/// Compares `2 j0 h(j0)` with the exact structure-function difference on
/// every level `n = 0..=N`.
pub fn h_residual_table(spec: &SurfaceSpec) -> Vec<HResidual> {
    let n_max = spec.level_n_max;
    (0..=n_max)
        .map(|n| {
            let j0 = n as f64 - n_max as f64 / 2.0;
            // both indices are within 0..=N+1 and j0 is on the grid
            let exact = phi_sphere(spec, n).unwrap().0 - phi_sphere(spec, n + 1).unwrap().0;
            let from_h = 2.0 * j0 * h_su2(spec, j0).unwrap();
            HResidual { n, j0, exact, from_h, residual: (exact - from_h).abs() }
        })
        .collect()
}

/// Leading small-curvature form of `g`, `1 + (lambda/2)(N + 1)`.
pub fn g_small_lambda(spec: &SurfaceSpec) -> f64 {
    1.0 + 0.5 * spec.lambda * (spec.level_n_max + 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec(lambda: f64, n: usize) -> SurfaceSpec {
        SurfaceSpec::new(lambda, n).unwrap()
    }

    #[test]
    fn rejects_negative_or_nan_curvature() {
        assert_eq!(SurfaceSpec::new(-0.1, 3), Err(Error::InvalidCurvature(-0.1)));
        assert!(SurfaceSpec::new(f64::NAN, 3).is_err());
        assert!(energy_sphere(2, -1.0).is_err());
    }

    #[test]
    fn flat_energies() {
        assert_eq!(energy_flat(0), 1.0);
        assert_eq!(energy_flat(10), 11.0);
        assert_eq!(energy_flat(0), energy_sphere(0, 0.0).unwrap());
    }

    #[test]
    fn sphere_energy_substitution() {
        assert_relative_eq!(energy_sphere(1, 2.0).unwrap(), 2.0 * 2f64.sqrt() + 4.0, max_relative = 1e-15);
        assert_relative_eq!(energy_sphere(1, 2.0).unwrap(), 6.82842712, epsilon = 1e-8);
        for n in 0..20 {
            assert_eq!(energy_sphere(n, 0.0).unwrap(), energy_flat(n));
        }
    }

    #[test]
    fn phi_flat_values_and_range() {
        assert_eq!(phi_flat(3, 0).unwrap().value(), 0.0);
        assert_eq!(phi_flat(3, 2).unwrap().value(), 4.0);
        assert_eq!(phi_flat(3, 4).unwrap().value(), 0.0);
        assert_eq!(phi_flat(3, 5), Err(Error::LevelOutOfRange { n: 5, max: 4 }));
    }

    #[test]
    fn phi_flat_positive_inside() {
        for n_max in 0..=100 {
            assert_eq!(phi_flat(n_max, 0).unwrap().value(), 0.0);
            assert_eq!(phi_flat(n_max, n_max + 1).unwrap().value(), 0.0);
            for n in 1..=n_max {
                assert!(phi_flat(n_max, n).unwrap().value() > 0.0);
            }
        }
    }

    #[test]
    fn g_values() {
        for n in 0..=6 {
            assert_eq!(g_deform(&spec(0.0, 5), n).unwrap(), 1.0);
        }
        assert_relative_eq!(g_deform(&spec(2.0, 1), 1).unwrap(), 2.0 + 2f64.sqrt(), max_relative = 1e-15);
        // 1 + (lambda/2)(N+1) = 1.055; the lambda^2 correction is largest at the edges
        let s = spec(0.01, 10);
        for n in 2..=9 {
            assert!((g_deform(&s, n).unwrap() - 1.055).abs() < 1e-3);
        }
        for n in 0..=11 {
            assert!((g_deform(&s, n).unwrap() - 1.055).abs() < 0.01 * 0.01 * 121.0 / 8.0 + 1e-12);
        }
        assert!(g_deform(&s, 12).is_err());
    }

    #[test]
    fn g_is_symmetric_about_half_level() {
        for &lambda in &[0.0, 0.05, 0.1, 1.0, 10.0] {
            for n_max in [0usize, 1, 4, 17, 40] {
                let s = spec(lambda, n_max);
                for n in 0..=n_max + 1 {
                    let a = g_deform(&s, n).unwrap();
                    let b = g_deform(&s, n_max + 1 - n).unwrap();
                    assert!((a - b).abs() <= 1e-12 * a);
                }
            }
        }
    }

    #[test]
    fn phi_sphere_matches_printed_product() {
        // four-factor product evaluated term by term
        let printed = |lambda: f64, n_max: usize, n: usize| {
            let root = (1.0 + lambda * lambda / 4.0).sqrt();
            let (nf, m) = (n as f64, (n_max + 1) as f64);
            nf * (m - nf) * (lambda * (m - nf) + root) * (lambda * nf + root)
        };
        assert_relative_eq!(phi_sphere(&spec(1.0, 2), 1).unwrap().value(), 13.20820393249937, max_relative = 1e-14);
        for &lambda in &[0.0, 0.05, 0.1, 1.0, 10.0] {
            for n_max in [0usize, 2, 9, 30] {
                let s = spec(lambda, n_max);
                for n in 0..=n_max + 1 {
                    let ours = phi_sphere(&s, n).unwrap().value();
                    let want = printed(lambda, n_max, n);
                    assert!((ours - want).abs() <= 4.0 * f64::EPSILON * want.max(1.0));
                    if lambda == 0.0 {
                        assert_eq!(ours, phi_flat(n_max, n).unwrap().value());
                    }
                }
                assert_eq!(phi_sphere(&s, 0).unwrap().value(), 0.0);
            }
        }
    }

    #[test]
    fn deformation_functions() {
        assert_relative_eq!(f_flat(5, 0).unwrap(), 6f64.sqrt());
        assert_eq!(f_flat(5, 6).unwrap(), 0.0);
        for n_max in 0..=50 {
            for n in 0..=n_max + 1 {
                let f = f_flat(n_max, n).unwrap();
                let lhs = n as f64 * f * f;
                assert!((lhs - phi_flat(n_max, n).unwrap().value()).abs() < 1e-9);
            }
        }
        let s = spec(0.0, 7);
        for n in 0..=8 {
            assert_eq!(f_sphere(&s, n).unwrap(), f_flat(7, n).unwrap());
        }
        assert_eq!(f_sphere(&spec(0.3, 7), 8).unwrap(), 0.0);
    }

    #[test]
    fn h_values() {
        for j in -2..=2 {
            assert_eq!(h_su2(&spec(0.0, 4), j as f64).unwrap(), 1.0);
        }
        // 1 + 0.1 sqrt(1.025) 3 - 0.01 (0 - 4 - 0.25)
        let want = 1.0 + 0.3 * 1.025f64.sqrt() + 0.0425;
        assert_relative_eq!(h_su2(&spec(0.1, 2), 0.0).unwrap(), want, max_relative = 1e-15);
        assert_relative_eq!(want, 1.3462268509697488, max_relative = 1e-15);
    }

    #[test]
    fn h_rejects_off_grid() {
        let s = spec(0.1, 3);
        assert!(h_su2(&s, 0.0).is_err());
        assert!(h_su2(&s, 0.5).is_ok());
        assert!(h_su2(&s, 2.5).is_err());
        assert!(h_su2(&s, -1.5).is_ok());
    }

    #[test]
    fn h_residual_vanishes_in_flat_limit() {
        for n_max in [2usize, 10, 25] {
            for row in h_residual_table(&SurfaceSpec::flat(n_max)) {
                assert!(row.residual < 1e-12, "{row:?}");
            }
        }
        // j0 = 0 makes both sides zero regardless of curvature
        let rows = h_residual_table(&spec(0.1, 10));
        assert!(rows[5].residual < 1e-12);
        assert!(rows.iter().any(|r| r.residual > 1e-6));
    }

    #[test]
    fn flavor_round_trips_through_strings() {
        for f in [Flavor::Flat, Flavor::Sphere] {
            assert_eq!(f.to_string().parse::<Flavor>().unwrap(), f);
        }
        assert!("hyperbolic".parse::<Flavor>().is_err());
    }
}
