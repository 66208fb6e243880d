//! Dense operator matrices on the truncated Fock space `{|0>, ..., |N>}`.
//!
//! Deformed ladder operators use the convention `A|n> = sqrt(Phi(n)) |n-1>`,
//! i.e. `A = a f(n)` with `f` real and non-negative. The plain boson
//! operators are truncated: `a^dag |N> = 0`, so `a a^dag` is wrong in its
//! last diagonal entry.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use num_complex::Complex64;

use crate::algebra::{structure, Flavor, SurfaceSpec};
use crate::error::{Error, Result};
use crate::quad::CompensatedSum;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Complex amplitudes over `|0>, ..., |N>`, indexed by occupation number.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amplitudes: Array1<Complex64>,
    spec: SurfaceSpec,
}

impl FockVector {
    pub fn new(amplitudes: Array1<Complex64>, spec: SurfaceSpec) -> Result<Self> {
        if amplitudes.len() != spec.dim() {
            return Err(Error::DimensionMismatch { expected: spec.dim(), found: amplitudes.len() });
        }
        Ok(Self { amplitudes, spec })
    }

    /// Number state `|n>`.
    pub fn basis(spec: SurfaceSpec, n: usize) -> Result<Self> {
        if n > spec.n_max() {
            return Err(Error::LevelOutOfRange { n, max: spec.n_max() });
        }
        let mut amplitudes = Array1::from_elem(spec.dim(), ZERO);
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes, spec })
    }

    pub fn vacuum(spec: SurfaceSpec) -> Self {
        Self::basis(spec, 0).expect("vacuum is always in range")
    }

    pub fn spec(&self) -> &SurfaceSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> ArrayView1<'_, Complex64> {
        self.amplitudes.view()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Returns the vector scaled to unit norm. The zero vector is returned unchanged.
    pub fn normalized(&self) -> Self {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return self.clone();
        }
        Self { amplitudes: self.amplitudes.mapv(|c| c / norm), spec: self.spec }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &FockVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amplitudes.iter().zip(other.amplitudes.iter()).map(|(a, b)| a.conj() * b).sum())
    }

    /// Occupation probabilities `|c_n|^2`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn max_abs_diff(&self, other: &FockVector) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amplitudes.iter().zip(other.amplitudes.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }
}

/// Identity of an operator matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorLabel {
    /// Deformed `A`.
    Lowering(Flavor),
    /// Deformed `A^dag`.
    Raising(Flavor),
    /// Truncated boson `a`.
    Annihilation,
    /// Truncated boson `a^dag`.
    Creation,
    Number,
    JPlus,
    JMinus,
    JZero,
    QuadratureX1,
    QuadratureX2,
    Identity,
    /// Products, commutators and other combinations.
    Derived,
}

impl OperatorLabel {
    pub fn is_hermitian(self) -> bool {
        matches!(
            self,
            OperatorLabel::Number
                | OperatorLabel::JZero
                | OperatorLabel::QuadratureX1
                | OperatorLabel::QuadratureX2
                | OperatorLabel::Identity
        )
    }
}

/// Dense `(N+1) x (N+1)` complex matrix tagged with its operator identity.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: Array2<Complex64>,
    spec: SurfaceSpec,
    label: OperatorLabel,
}

impl OperatorMatrix {
    pub fn new(entries: Array2<Complex64>, spec: SurfaceSpec, label: OperatorLabel) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != spec.dim() || cols != spec.dim() {
            return Err(Error::DimensionMismatch { expected: spec.dim(), found: rows.max(cols) });
        }
        Ok(Self { entries, spec, label })
    }

    fn zeros(spec: SurfaceSpec, label: OperatorLabel) -> Self {
        Self { entries: Array2::from_elem((spec.dim(), spec.dim()), ZERO), spec, label }
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(spec: SurfaceSpec, label: OperatorLabel, diag: impl Fn(usize) -> f64) -> Self {
        let mut m = Self::zeros(spec, label);
        for n in 0..spec.dim() {
            m.entries[(n, n)] = Complex64::new(diag(n), 0.0);
        }
        m
    }

    pub fn identity(spec: SurfaceSpec) -> Self {
        Self::from_diagonal(spec, OperatorLabel::Identity, |_| 1.0)
    }

    pub fn entries(&self) -> ArrayView2<'_, Complex64> {
        self.entries.view()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn spec(&self) -> &SurfaceSpec {
        &self.spec
    }

    pub fn label(&self) -> OperatorLabel {
        self.label
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn with_label(mut self, label: OperatorLabel) -> Self {
        self.label = label;
        self
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        self.entries.diag().to_vec()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let label = match self.label {
            OperatorLabel::Lowering(f) => OperatorLabel::Raising(f),
            OperatorLabel::Raising(f) => OperatorLabel::Lowering(f),
            OperatorLabel::Annihilation => OperatorLabel::Creation,
            OperatorLabel::Creation => OperatorLabel::Annihilation,
            OperatorLabel::JPlus => OperatorLabel::JMinus,
            OperatorLabel::JMinus => OperatorLabel::JPlus,
            other => other,
        };
        Self { entries: self.entries.t().mapv(|c| c.conj()), spec: self.spec, label }
    }

    fn check_dim(&self, other: &OperatorMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &OperatorMatrix) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self { entries: self.entries.dot(&other.entries), spec: self.spec, label: OperatorLabel::Derived })
    }

    /// `[self, other] = self other - other self`.
    ///
    /// Both products are formed from exact (FMA) partial products and summed
    /// with compensation, so the cancellation between `AB` and `BA` costs
    /// about one rounding of the result instead of one per large term.
    pub fn commutator(&self, other: &OperatorMatrix) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim();
        let (a, b) = (&self.entries, &other.entries);
        let entries = Array2::from_shape_fn((n, n), |(i, j)| {
            let mut re = CompensatedSum::new();
            let mut im = CompensatedSum::new();
            for k in 0..n {
                accumulate_product(&mut re, &mut im, a[(i, k)], b[(k, j)], 1.0);
                accumulate_product(&mut re, &mut im, b[(i, k)], a[(k, j)], -1.0);
            }
            Complex64::new(re.value(), im.value())
        });
        Ok(Self { entries, spec: self.spec, label: OperatorLabel::Derived })
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: Complex64, other: &OperatorMatrix, beta: Complex64) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            entries: self.entries.mapv(|c| alpha * c) + other.entries.mapv(|c| beta * c),
            spec: self.spec,
            label: OperatorLabel::Derived,
        })
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        Self { entries: self.entries.mapv(|c| alpha * c), spec: self.spec, label: OperatorLabel::Derived }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self.entries.iter().zip(other.entries.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| (self.entries[(i, j)] - self.entries[(j, i)].conj()).norm() <= tol))
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.dim() });
        }
        Ok(FockVector { amplitudes: self.entries.dot(&v.amplitudes), spec: v.spec })
    }
}

/// `x * y` split into a rounded product and its exact rounding error.
fn two_prod(x: f64, y: f64) -> (f64, f64) {
    let p = x * y;
    (p, x.mul_add(y, -p))
}

fn accumulate_product(re: &mut CompensatedSum, im: &mut CompensatedSum, x: Complex64, y: Complex64, sign: f64) {
    if x == ZERO || y == ZERO {
        return;
    }
    let add = |acc: &mut CompensatedSum, u: f64, v: f64, s: f64| {
        let (p, e) = two_prod(u, v);
        acc.add(s * p);
        acc.add(s * e);
    };
    add(re, x.re, y.re, sign);
    add(re, x.im, y.im, -sign);
    add(im, x.re, y.im, sign);
    add(im, x.im, y.re, sign);
}

/// Deformed ladder pair `(A, A^dag)` with `A[n-1, n] = sqrt(Phi(n))`.
pub fn build_ladder(spec: &SurfaceSpec, flavor: Flavor) -> (OperatorMatrix, OperatorMatrix) {
    ladder_from_structure(spec, flavor, |n| structure(spec, flavor, n).expect("n <= N").value())
}

/// Ladder pair for an arbitrary non-negative structure function `phi(n)`,
/// evaluated for `n = 1..=N`.
pub fn ladder_from_structure(
    spec: &SurfaceSpec,
    flavor: Flavor,
    phi: impl Fn(usize) -> f64,
) -> (OperatorMatrix, OperatorMatrix) {
    let mut lower = OperatorMatrix::zeros(*spec, OperatorLabel::Lowering(flavor));
    for n in 1..=spec.n_max() {
        lower.entries[(n - 1, n)] = Complex64::new(phi(n).sqrt(), 0.0);
    }
    let raise = lower.dagger();
    (lower, raise)
}

/// Truncated boson pair `(a, a^dag)` with `a[n-1, n] = sqrt(n)`.
pub fn build_boson_ladder(spec: &SurfaceSpec) -> (OperatorMatrix, OperatorMatrix) {
    let mut a = OperatorMatrix::zeros(*spec, OperatorLabel::Annihilation);
    for n in 1..=spec.n_max() {
        a.entries[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    let adag = a.dagger();
    (a, adag)
}

pub fn number_operator(spec: &SurfaceSpec) -> OperatorMatrix {
    OperatorMatrix::from_diagonal(*spec, OperatorLabel::Number, |n| n as f64)
}

/// su(2) generators `(J+, J-, J0) = (A^dag, A, n - N/2)`.
pub fn build_su2(spec: &SurfaceSpec, flavor: Flavor) -> (OperatorMatrix, OperatorMatrix, OperatorMatrix) {
    let (lower, raise) = build_ladder(spec, flavor);
    let half = spec.n_max() as f64 / 2.0;
    let j0 = OperatorMatrix::from_diagonal(*spec, OperatorLabel::JZero, |n| n as f64 - half);
    (raise.with_label(OperatorLabel::JPlus), lower.with_label(OperatorLabel::JMinus), j0)
}

/// Quadrature pair built from a lowering operator `L` at phase `phi`:
/// `X1 = (L e^{i phi} + L^dag e^{-i phi}) / 2`,
/// `X2 = (L e^{i phi} - L^dag e^{-i phi}) / 2i`.
pub fn quadratures(lower: &OperatorMatrix, phi: f64) -> (OperatorMatrix, OperatorMatrix) {
    let raise = lower.dagger();
    let e = Complex64::from_polar(1.0, phi);
    let x1 = lower.combine(0.5 * e, &raise, 0.5 * e.conj()).expect("same dimension");
    let half_over_i = Complex64::new(0.0, -0.5);
    let x2 = lower.combine(half_over_i * e, &raise, -half_over_i * e.conj()).expect("same dimension");
    (x1.with_label(OperatorLabel::QuadratureX1), x2.with_label(OperatorLabel::QuadratureX2))
}

/// `<psi|M|psi>`.
pub fn expectation(state: &FockVector, m: &OperatorMatrix) -> Result<Complex64> {
    let mpsi = m.apply(state)?;
    state.inner(&mpsi)
}

/// Above this level the structure factorial is accumulated in log space.
pub const LOG_FACTORIAL_THRESHOLD: usize = 150;

/// Natural log of `[Phi(n)]! = Phi(n) Phi(n-1) ... Phi(1)`, with `[Phi(0)]! = 1`.
pub fn ln_structure_factorial(spec: &SurfaceSpec, flavor: Flavor, n: usize) -> Result<f64> {
    if n > spec.n_max() {
        return Err(Error::LevelOutOfRange { n, max: spec.n_max() });
    }
    let mut acc = 0.0;
    for k in 1..=n {
        acc += structure(spec, flavor, k)?.value().ln();
    }
    Ok(acc)
}

/// `[Phi(n)]!`: exact running product up to [`LOG_FACTORIAL_THRESHOLD`],
/// exponentiated log sum beyond.
pub fn structure_factorial(spec: &SurfaceSpec, flavor: Flavor, n: usize) -> Result<f64> {
    if n > LOG_FACTORIAL_THRESHOLD {
        return Ok(ln_structure_factorial(spec, flavor, n)?.exp());
    }
    if n > spec.n_max() {
        return Err(Error::LevelOutOfRange { n, max: spec.n_max() });
    }
    let mut acc = 1.0;
    for k in 1..=n {
        acc *= structure(spec, flavor, k)?.value();
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::phi_sphere;

    fn spec(lambda: f64, n: usize) -> SurfaceSpec {
        SurfaceSpec::new(lambda, n).unwrap()
    }

    #[test]
    fn flat_ladder_two_level() {
        let (a, adag) = build_ladder(&SurfaceSpec::flat(1), Flavor::Flat);
        assert_eq!(a.get(0, 1), Complex64::new(1.0, 0.0));
        assert_eq!(a.get(1, 0), ZERO);
        assert_eq!(a.get(0, 0), ZERO);
        assert_eq!(adag.get(1, 0), Complex64::new(1.0, 0.0));
        assert_eq!(adag.label(), OperatorLabel::Raising(Flavor::Flat));
    }

    #[test]
    fn ladder_kills_edges() {
        for flavor in [Flavor::Flat, Flavor::Sphere] {
            let s = spec(0.4, 6);
            let (a, adag) = build_ladder(&s, flavor);
            assert_eq!(a.apply(&FockVector::vacuum(s)).unwrap().norm_sqr(), 0.0);
            let top = FockVector::basis(s, 6).unwrap();
            assert_eq!(adag.apply(&top).unwrap().norm_sqr(), 0.0);
        }
    }

    #[test]
    fn sphere_ladder_entries() {
        let s = spec(1.0, 2);
        let (a, _) = build_ladder(&s, Flavor::Sphere);
        for n in 1..=2 {
            let want = phi_sphere(&s, n).unwrap().value().sqrt();
            assert!((a.get(n - 1, n).re - want).abs() < 1e-14);
        }
    }

    #[test]
    fn boson_truncation() {
        let s = SurfaceSpec::flat(1);
        let (a, adag) = build_boson_ladder(&s);
        assert_eq!(a.get(0, 1).re, 1.0);
        let s = SurfaceSpec::flat(7);
        let (a, adag2) = build_boson_ladder(&s);
        let n = adag2.compose(&a).unwrap();
        assert!(n.max_abs_diff(&number_operator(&s)).unwrap() < 1e-14);
        let aad = a.compose(&adag2).unwrap();
        assert_eq!(aad.get(7, 7), ZERO);
        assert!((aad.get(6, 6).re - 7.0).abs() < 1e-14);
        let _ = adag;
    }

    #[test]
    fn su2_relations() {
        for n_max in 0..=50 {
            let s = SurfaceSpec::flat(n_max);
            let (jp, jm, j0) = build_su2(&s, Flavor::Flat);
            let c = jp.commutator(&jm).unwrap();
            assert!(c.max_abs_diff(&j0.scale(2.0.into())).unwrap() < 1e-12);
            let c = j0.commutator(&jp).unwrap();
            assert!(c.max_abs_diff(&jp).unwrap() < 1e-12);
            let c = j0.commutator(&jm).unwrap();
            assert!(c.max_abs_diff(&jm.scale((-1.0).into())).unwrap() < 1e-12);
        }
    }

    #[test]
    fn sphere_su2_diagonal() {
        let s = spec(0.3, 9);
        let (jp, jm, _) = build_su2(&s, Flavor::Sphere);
        let c = jp.commutator(&jm).unwrap();
        for n in 0..=9 {
            let want = phi_sphere(&s, n).unwrap().value() - phi_sphere(&s, n + 1).unwrap().value();
            assert!((c.get(n, n).re - want).abs() < 1e-10 * want.abs().max(1.0));
        }
    }

    #[test]
    fn expectation_of_number_states() {
        let s = SurfaceSpec::flat(5);
        let n = number_operator(&s);
        assert_eq!(expectation(&FockVector::vacuum(s), &n).unwrap(), ZERO);
        for k in 0..=5 {
            let v = FockVector::basis(s, k).unwrap();
            assert_eq!(expectation(&v, &n).unwrap().re, k as f64);
        }
        let other = number_operator(&SurfaceSpec::flat(4));
        assert!(matches!(expectation(&FockVector::vacuum(s), &other), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn quadratures_are_hermitian() {
        let s = spec(0.1, 8);
        let (a, _) = build_ladder(&s, Flavor::Sphere);
        for &phi in &[0.0, 0.3, 1.7, 4.0] {
            let (x1, x2) = quadratures(&a, phi);
            assert!(x1.is_hermitian(1e-12));
            assert!(x2.is_hermitian(1e-12));
            assert!(x1.label().is_hermitian());
        }
        assert!(number_operator(&s).is_hermitian(1e-12));
    }

    #[test]
    fn raising_reproduces_number_states() {
        for flavor in [Flavor::Flat, Flavor::Sphere] {
            let s = spec(0.1, 20);
            let (_, adag) = build_ladder(&s, flavor);
            let mut v = FockVector::vacuum(s);
            for n in 1..=20 {
                v = adag.apply(&v).unwrap();
                let norm = structure_factorial(&s, flavor, n).unwrap().sqrt();
                let scaled = FockVector::new(v.amplitudes().mapv(|c| c / norm), s).unwrap();
                let target = FockVector::basis(s, n).unwrap();
                assert!(scaled.max_abs_diff(&target).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn log_factorial_agrees_with_product() {
        let s = spec(0.05, 60);
        for n in [0usize, 1, 30, 60] {
            let direct = structure_factorial(&s, Flavor::Sphere, n).unwrap();
            let via_log = ln_structure_factorial(&s, Flavor::Sphere, n).unwrap().exp();
            assert!((direct - via_log).abs() <= 1e-10 * direct);
        }
        // flat: [Phi(n)]! = n! N! / (N-n)!
        let big = SurfaceSpec::flat(200);
        let ln_fact = |m: usize| (1..=m).map(|k| (k as f64).ln()).sum::<f64>();
        let want = ln_fact(160) + ln_fact(200) - ln_fact(40);
        let got = ln_structure_factorial(&big, Flavor::Flat, 160).unwrap();
        assert!((got - want).abs() < 1e-9 * want);
        assert_eq!(structure_factorial(&big, Flavor::Flat, 160).unwrap(), got.exp());
    }

    #[test]
    fn flat_limit_matrices_coincide() {
        let s = SurfaceSpec::flat(12);
        let (af, _) = build_ladder(&s, Flavor::Flat);
        let (asph, _) = build_ladder(&s, Flavor::Sphere);
        assert_eq!(af.max_abs_diff(&asph).unwrap(), 0.0);
    }
}
