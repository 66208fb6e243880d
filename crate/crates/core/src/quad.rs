//! Compensated summation and adaptive Simpson integration.

use crate::error::{Error, Result};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct Simpson<'a, F> {
    f: &'a F,
    evaluations: usize,
    max_evaluations: usize,
    total: CompensatedSum,
    error: CompensatedSum,
    exhausted: bool,
}

impl<F: Fn(f64) -> f64> Simpson<'_, F> {
    fn eval(&mut self, x: f64) -> f64 {
        self.evaluations += 1;
        (self.f)(x)
    }

    // Interval [a, b] with endpoint and midpoint values and its Simpson estimate.
    #[allow(clippy::too_many_arguments)]
    fn refine(&mut self, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let flm = self.eval(lm);
        let frm = self.eval(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        let converged = delta.abs() <= 15.0 * tol;
        if converged || depth == 0 || self.evaluations + 2 > self.max_evaluations {
            if !converged {
                self.exhausted = true;
            }
            self.total.add(left + right + delta / 15.0);
            self.error.add(delta.abs() / 15.0);
            return;
        }
        self.refine(a, m, fa, flm, fm, left, tol / 2.0, depth - 1);
        self.refine(m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
    }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Fails with [`Error::QuadratureNotConverged`] when the evaluation budget
/// or the recursion depth runs out before every panel meets its share of
/// the tolerance.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_evaluations: usize,
) -> Result<Integral> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidQuadrature("tolerance must be positive"));
    }
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::InvalidQuadrature("integration bounds must be finite and ordered"));
    }
    if max_evaluations < 5 {
        return Err(Error::InvalidQuadrature("need at least 5 evaluations"));
    }
    let mut s = Simpson {
        f,
        evaluations: 0,
        max_evaluations,
        total: CompensatedSum::new(),
        error: CompensatedSum::new(),
        exhausted: false,
    };
    let fa = s.eval(a);
    let fb = s.eval(b);
    let m = 0.5 * (a + b);
    let fm = s.eval(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    s.refine(a, b, fa, fm, fb, whole, tol, 50);
    let out = Integral { value: s.total.value(), error_estimate: s.error.value(), evaluations: s.evaluations };
    if s.exhausted && out.error_estimate > tol {
        return Err(Error::QuadratureNotConverged { estimate: out.error_estimate, evaluations: out.evaluations });
    }
    Ok(out)
}
