use nlcs_core::algebra::{
    energy_flat, energy_sphere, f_flat, f_sphere, g_deform, g_small_lambda, h_su2, phi_flat, phi_sphere, structure,
};
use nlcs_core::fock::{build_ladder, number_operator, OperatorMatrix};
use nlcs_core::{Flavor, OperatorLabel, SurfaceSpec};
use proptest::prelude::*;

/// Minimal double-double arithmetic, used only as an extended-precision oracle.
#[derive(Clone, Copy, Debug)]
struct Dd(f64, f64);

impl Dd {
    fn from(x: f64) -> Self {
        Dd(x, 0.0)
    }

    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = Self::two_sum(self.0, o.0);
        let e = e + self.1 + o.1;
        let (hi, lo) = Self::two_sum(s, e);
        Dd(hi, lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p) + self.0 * o.1 + self.1 * o.0;
        let (hi, lo) = Self::two_sum(p, e);
        Dd(hi, lo)
    }

    fn div_f64(self, d: f64) -> Dd {
        let q = self.0 / d;
        let r = self.add(Dd::from(q).mul(Dd::from(-d)));
        let (hi, lo) = Self::two_sum(q, r.0 / d);
        Dd(hi, lo)
    }

    fn sqrt(self) -> Dd {
        // one Newton step from the double estimate: y + (x - y^2) / 2y
        let y = self.0.sqrt();
        let r = self.add(Dd::from(y).mul(Dd::from(-y)));
        let (hi, lo) = Self::two_sum(y, r.0 / (2.0 * y));
        Dd(hi, lo)
    }
}

fn energy_sphere_dd(n_max: usize, lambda: f64) -> Dd {
    let l = Dd::from(lambda);
    let m = Dd::from((n_max + 1) as f64);
    let root = Dd::from(1.0).add(l.mul(l).div_f64(4.0)).sqrt();
    root.mul(m).add(l.mul(m).mul(m).div_f64(2.0))
}

#[test]
fn sphere_energy_against_extended_precision() {
    let oracle = energy_sphere_dd(3, 0.1);
    let got = energy_sphere(3, 0.1).unwrap();
    assert!((got - oracle.0).abs() <= 2.0 * f64::EPSILON * oracle.0, "{got} vs {oracle:?}");
    // frozen: sqrt(1.0025) * 4 + 0.05 * 16
    assert!((got - 4.804996878900157).abs() < 1e-14);
    for n in [0usize, 5, 40] {
        for &lambda in &[0.0, 0.05, 1.0, 10.0] {
            let o = energy_sphere_dd(n, lambda);
            assert!((energy_sphere(n, lambda).unwrap() - o.0).abs() <= 4.0 * f64::EPSILON * o.0);
        }
    }
}

#[test]
fn flat_limit_degenerations() {
    let lambda = 1e-8;
    for n_max in 0..=30 {
        let s = SurfaceSpec::new(lambda, n_max).unwrap();
        // E_s - E_f = (lambda/2)(N+1)^2 + O(lambda^2 N), so it only drops below 1e-6 for N <= 13
        let m = (n_max + 1) as f64;
        let gap = energy_sphere(n_max, lambda).unwrap() - energy_flat(n_max);
        assert!((gap - 0.5 * lambda * m * m).abs() < 1e-12);
        if n_max <= 13 {
            assert!(gap < 1e-6);
        }
        for n in 0..=n_max + 1 {
            assert!((g_deform(&s, n).unwrap() - 1.0).abs() < 1e-6);
            assert!((f_sphere(&s, n).unwrap() - f_flat(n_max, n).unwrap()).abs() < 1e-6);
        }
        for n in 0..=n_max {
            let j0 = n as f64 - n_max as f64 / 2.0;
            assert!((h_su2(&s, j0).unwrap() - 1.0).abs() < 1e-6);
        }
    }
}

#[test]
fn small_lambda_expansion_of_g() {
    // |g - (1 + (lambda/2)(N+1))| / lambda^2 stays bounded as lambda shrinks
    let n_max = 10;
    let fitted = |lambda: f64| {
        let s = SurfaceSpec::new(lambda, n_max).unwrap();
        (0..=n_max + 1)
            .map(|n| (g_deform(&s, n).unwrap() - g_small_lambda(&s)).abs() / (lambda * lambda))
            .fold(0.0, f64::max)
    };
    let coarse = fitted(1e-2);
    let fine = fitted(1e-3);
    println!("fitted C: {coarse:.4} (lambda=1e-2), {fine:.4} (lambda=1e-3)");
    assert!(coarse < 20.0 && fine < 20.0);
    assert!((coarse / fine - 1.0).abs() < 0.2);
}

fn max_structure(spec: &SurfaceSpec, flavor: Flavor) -> f64 {
    (0..=spec.n_max() + 1).map(|k| structure(spec, flavor, k).unwrap().value()).fold(1.0, f64::max)
}

fn closure_residuals(spec: &SurfaceSpec, flavor: Flavor) -> (f64, f64, f64) {
    let (a, adag) = build_ladder(spec, flavor);
    let n = number_operator(spec);
    let raise = n.commutator(&adag).unwrap().max_abs_diff(&adag).unwrap();
    let lower = n.commutator(&a).unwrap().max_abs_diff(&a.scale((-1.0).into())).unwrap();
    let target = OperatorMatrix::from_diagonal(*spec, OperatorLabel::Derived, |k| {
        structure(spec, flavor, k + 1).unwrap().value() - structure(spec, flavor, k).unwrap().value()
    });
    let comm = a.commutator(&adag).unwrap().max_abs_diff(&target).unwrap();
    (raise, lower, comm)
}

#[test]
fn algebra_closes_on_the_grid() {
    for flavor in [Flavor::Flat, Flavor::Sphere] {
        for &lambda in &[0.0, 0.05, 0.1, 1.0] {
            for n_max in 0..=50 {
                let s = SurfaceSpec::new(lambda, n_max).unwrap();
                let (raise, lower, comm) = closure_residuals(&s, flavor);
                assert!(raise < 1e-12 && lower < 1e-12, "N={n_max} lambda={lambda}");
                // sqrt(Phi)^2 rounds at the ulp of Phi, which reaches ~5e5 at lambda = 1
                let bound = 4.0 * f64::EPSILON * max_structure(&s, flavor);
                assert!(comm <= bound, "N={n_max} lambda={lambda} comm={comm} bound={bound}");
            }
        }
    }
}

proptest! {
    #[test]
    fn deformation_squares_give_structure(lambda in 0.0f64..5.0, n_max in 0usize..60, frac in 0.0f64..=1.0) {
        let s = SurfaceSpec::new(lambda, n_max).unwrap();
        let n = ((n_max + 1) as f64 * frac).round() as usize;
        let f = f_sphere(&s, n).unwrap();
        let phi = phi_sphere(&s, n).unwrap().value();
        prop_assert!((n as f64 * f * f - phi).abs() <= 1e-12 * phi.max(1.0));
        let ff = f_flat(n_max, n).unwrap();
        prop_assert!((n as f64 * ff * ff - phi_flat(n_max, n).unwrap().value()).abs() < 1e-9);
    }

    #[test]
    fn structure_vanishes_at_the_edges(lambda in 0.0f64..10.0, n_max in 0usize..100) {
        let s = SurfaceSpec::new(lambda, n_max).unwrap();
        prop_assert_eq!(phi_sphere(&s, 0).unwrap().value(), 0.0);
        prop_assert_eq!(phi_sphere(&s, n_max + 1).unwrap().value(), 0.0);
        for n in 1..=n_max {
            prop_assert!(phi_sphere(&s, n).unwrap().value() > 0.0);
        }
    }

    #[test]
    fn g_symmetric(lambda in 0.0f64..10.0, n_max in 0usize..80, frac in 0.0f64..=1.0) {
        let s = SurfaceSpec::new(lambda, n_max).unwrap();
        let n = ((n_max + 1) as f64 * frac).round() as usize;
        let a = g_deform(&s, n).unwrap();
        let b = g_deform(&s, n_max + 1 - n).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }
}
