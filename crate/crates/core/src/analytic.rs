//! Analytic polynomials on the unit disk, the orthonormal monomial basis and
//! the Bergman reproducing kernel.
//!
//! All inner products use the normalized area measure `dV = π⁻¹ dx dy`, so
//! `‖z^k‖² = 1/(k+1)` and `e_k(z) = √(k+1) z^k` is an orthonormal basis.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::falling_factorial;

/// A point of the complex plane.
pub type ComplexPoint = Complex64;

/// Points with `|z| >= 1 - KERNEL_MARGIN` are rejected by kernel evaluations.
pub const KERNEL_MARGIN: f64 = 1e-9;

/// Symbol supports must satisfy `|ζ| <= 1 - SUPPORT_MARGIN`.
pub const SUPPORT_MARGIN: f64 = 1e-6;

pub(crate) fn check_in_disk(z: ComplexPoint, margin: f64) -> Result<()> {
    let modulus = z.norm();
    if !modulus.is_finite() || modulus >= 1.0 - margin {
        return Err(Error::OutsideDisk {
            re: z.re,
            im: z.im,
            modulus,
        });
    }
    Ok(())
}

/// `e_k(z) = √(k+1) z^k`.
pub fn eval_basis(k: usize, z: ComplexPoint) -> Complex64 {
    z.powu(k as u32) * ((k + 1) as f64).sqrt()
}

/// Bergman kernel `k_z(w) = (1 - z̄ w)^{-2}`.
///
/// Satisfies `kernel(z, w) == kernel(w, z).conj()` bit for bit.
pub fn kernel(z: ComplexPoint, w: ComplexPoint) -> Result<Complex64> {
    check_in_disk(z, KERNEL_MARGIN)?;
    check_in_disk(w, KERNEL_MARGIN)?;
    let v = Complex64::new(1.0, 0.0) - z.conj() * w;
    Ok((v * v).inv())
}

/// `‖k_z − Σ_{k<n} conj(e_k(z)) e_k‖`, the norm of the kernel tail.
pub fn kernel_tail_norm(z: ComplexPoint, n: usize) -> Result<f64> {
    check_in_disk(z, KERNEL_MARGIN)?;
    let x = z.norm_sqr();
    let n = n as f64;
    Ok((x.powf(n) * ((n + 1.0) - n * x) / ((1.0 - x) * (1.0 - x))).sqrt())
}

/// Orthogonal projection of the kernel `k_z` onto `span{e_0, .., e_{n-1}}`.
pub fn truncated_kernel(z: ComplexPoint, n: usize) -> Result<AnalyticPoly> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "truncated kernel needs at least one term".into(),
        ));
    }
    check_in_disk(z, KERNEL_MARGIN)?;
    let zc = z.conj();
    let mut power = Complex64::new(1.0, 0.0);
    let mut coeffs = Vec::with_capacity(n);
    for k in 0..n {
        coeffs.push(power * (k + 1) as f64);
        power *= zc;
    }
    Ok(AnalyticPoly::new(coeffs))
}

/// A polynomial `Σ c_k z^k`, stored by its Taylor coefficients.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AnalyticPoly {
    coeffs: Vec<Complex64>,
}

impl AnalyticPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// The monomial `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    /// The orthonormal basis element `e_k = √(k+1) z^k`.
    pub fn basis(k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(((k + 1) as f64).sqrt(), 0.0);
        Self { coeffs }
    }

    /// Builds `Σ a_k e_k` from coordinates in the orthonormal basis.
    pub fn from_basis_coords(coords: &[Complex64]) -> Self {
        Self {
            coeffs: coords
                .iter()
                .enumerate()
                .map(|(k, a)| a * ((k + 1) as f64).sqrt())
                .collect(),
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Number of stored coefficients (one more than the nominal degree).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the highest nonzero coefficient, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Coordinate `a_k = c_k / √(k+1)` in the orthonormal basis.
    pub fn basis_coord(&self, k: usize) -> Complex64 {
        self.coeff(k) / ((k + 1) as f64).sqrt()
    }

    pub fn basis_coords(&self) -> Vec<Complex64> {
        (0..self.coeffs.len()).map(|k| self.basis_coord(k)).collect()
    }

    /// Coordinates padded or cut to exactly `n` entries.
    pub fn basis_coords_padded(&self, n: usize) -> Vec<Complex64> {
        (0..n).map(|k| self.basis_coord(k)).collect()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: ComplexPoint) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// `f^{(order)}`, exact on coefficients: `(z^k)^{(m)} = k!/(k-m)! z^{k-m}`.
    pub fn derivative(&self, order: usize) -> Self {
        if order == 0 {
            return self.clone();
        }
        if order >= self.coeffs.len() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs[order..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * falling_factorial((i + order) as i64, order))
                .collect(),
        }
    }

    /// `f^{(order)}(z)` without materializing the derivative.
    pub fn eval_derivative(&self, order: usize, z: ComplexPoint) -> Complex64 {
        if order == 0 {
            return self.eval(z);
        }
        self.coeffs
            .iter()
            .enumerate()
            .skip(order)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, c)| {
                acc * z + c * falling_factorial(k as i64, order)
            })
    }

    /// `⟨f, g⟩ = Σ c_k(f) conj(c_k(g)) / (k+1)`.
    pub fn inner_product(&self, other: &Self) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .enumerate()
            .map(|(k, (a, b))| a * b.conj() / (k + 1) as f64)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm_sqr() / (k + 1) as f64)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Truncation to degree `< n`, i.e. the projection onto `span{e_0..e_{n-1}}`.
    pub fn truncate(&self, n: usize) -> Self {
        Self {
            coeffs: self.coeffs.iter().take(n).copied().collect(),
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self {
            coeffs: (0..len).map(|k| op(self.coeff(k), other.coeff(k))).collect(),
        }
    }
}

impl Add for &AnalyticPoly {
    type Output = AnalyticPoly;
    fn add(self, rhs: Self) -> AnalyticPoly {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &AnalyticPoly {
    type Output = AnalyticPoly;
    fn sub(self, rhs: Self) -> AnalyticPoly {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &AnalyticPoly {
    type Output = AnalyticPoly;
    fn neg(self) -> AnalyticPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<Complex64> for &AnalyticPoly {
    type Output = AnalyticPoly;
    fn mul(self, rhs: Complex64) -> AnalyticPoly {
        self.scale(rhs)
    }
}

impl From<Vec<Complex64>> for AnalyticPoly {
    fn from(coeffs: Vec<Complex64>) -> Self {
        Self::new(coeffs)
    }
}
