//! Truncated operators: `N × N` matrices of `⟨T e_j, e_l⟩`, their norms,
//! singular values and basis compressions.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::analytic::{truncated_kernel, AnalyticPoly, ComplexPoint};
use crate::error::{Error, Result};

pub const POWER_ITERATION_CAP: usize = 10_000;
pub const DEFAULT_NORM_SEED: u64 = 0x5eed;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Compression of an operator to `span{e_0, .., e_{N-1}}`.
///
/// Entry `(l, j)` is `⟨T e_j, e_l⟩`, so column `j` holds the coordinates of `T e_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    entries: Array2<Complex64>,
}

impl TruncatedOperator {
    pub fn new(entries: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols {
            return Err(Error::DimensionMismatch { left: rows, right: cols });
        }
        if rows == 0 {
            return Err(Error::InvalidArgument("operator dimension must be at least 1".into()));
        }
        if let Some(((l, j), _)) = entries
            .indexed_iter()
            .find(|(_, v)| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::NonFinite(format!("operator entry ({l}, {j})")));
        }
        Ok(Self { entries })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(Array2::zeros((dim, dim)))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(Array2::eye(dim))
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Result<Self> {
        Self::new(Array2::from_diag(&Array1::from(diag.to_vec())))
    }

    /// Builds the matrix from `entry(l, j)`.
    pub fn from_fn(dim: usize, mut entry: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        Self::new(Array2::from_shape_fn((dim, dim), |(l, j)| entry(l, j)))
    }

    /// `P_{p,q} f = ⟨f, e_p⟩ e_q`: a single 1 at row `q`, column `p`.
    pub fn basis_rank_one(dim: usize, p: usize, q: usize) -> Result<Self> {
        if p >= dim || q >= dim {
            return Err(Error::InvalidArgument(format!(
                "rank-one indices ({p}, {q}) outside dimension {dim}"
            )));
        }
        let mut m = Array2::zeros((dim, dim));
        m[(q, p)] = ONE;
        Self::new(m)
    }

    /// `P_{u,v} f = ⟨f, u⟩ v`, truncated to `dim`.
    pub fn rank_one(dim: usize, u: &AnalyticPoly, v: &AnalyticPoly) -> Result<Self> {
        let a = u.basis_coords_padded(dim);
        let b = v.basis_coords_padded(dim);
        Self::from_fn(dim, |l, j| b[l] * a[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> Array2<Complex64> {
        self.entries
    }

    pub fn entry(&self, l: usize, j: usize) -> Complex64 {
        self.entries[(l, j)]
    }

    /// Applies the matrix to orthonormal-basis coordinates, padding or cutting to `dim`.
    pub fn apply_coords(&self, coords: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        let x: Array1<Complex64> = (0..n).map(|k| coords.get(k).copied().unwrap_or(ZERO)).collect();
        self.entries.dot(&x).to_vec()
    }

    /// `T f` for a polynomial of degree `< dim`.
    pub fn apply(&self, f: &AnalyticPoly) -> Result<AnalyticPoly> {
        if let Some(d) = f.degree() {
            if d >= self.dim() {
                return Err(Error::InvalidArgument(format!(
                    "polynomial degree {d} does not fit operator dimension {}",
                    self.dim()
                )));
            }
        }
        Ok(AnalyticPoly::from_basis_coords(&self.apply_coords(&f.basis_coords())))
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.t().mapv(|v| v.conj()),
        }
    }

    /// `self ∘ other` as a matrix product.
    ///
    /// The product of two compressions only approximates the compression of the
    /// product of the underlying operators.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            entries: self.entries.dot(&other.entries),
        })
    }

    /// `α·T + β·S`.
    pub fn add(t: &Self, s: &Self, alpha: Complex64, beta: Complex64) -> Result<Self> {
        t.check_same_dim(s)?;
        Ok(Self {
            entries: &t.entries * alpha + &s.entries * beta,
        })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            entries: &self.entries * s,
        }
    }

    /// `Π_m T Π_m` embedded in the original dimension.
    pub fn compress(&self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("compression size must be positive".into()));
        }
        if m > self.dim() {
            return Err(Error::InvalidArgument(format!(
                "compression size {m} exceeds dimension {}",
                self.dim()
            )));
        }
        let mut entries = self.entries.clone();
        entries
            .indexed_iter_mut()
            .filter(|((l, j), _)| *l >= m || *j >= m)
            .for_each(|(_, v)| *v = ZERO);
        Ok(Self { entries })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self
            .entries
            .iter()
            .zip(other.entries.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).norm())))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value by power iteration on `T*T` from a seeded start vector.
    pub fn op_norm(&self, tol: f64) -> Result<f64> {
        self.op_norm_with(tol, DEFAULT_NORM_SEED, POWER_ITERATION_CAP)
    }

    pub fn op_norm_with(&self, tol: f64, seed: u64, max_iter: usize) -> Result<f64> {
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
        }
        if self.entries.iter().all(|v| *v == ZERO) {
            return Ok(0.0);
        }
        let n = self.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v: Array1<Complex64> = (0..n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            })
            .collect();
        normalize(&mut v);
        let adj = self.entries.t().mapv(|x| x.conj());
        let mut lambda = 0.0f64;
        let mut change = f64::INFINITY;
        for _ in 0..max_iter {
            let tv = self.entries.dot(&v);
            let next = tv.iter().map(|x| x.norm_sqr()).sum::<f64>();
            let mut w = adj.dot(&tv);
            if normalize(&mut w) == 0.0 {
                // start vector landed in the kernel; nudge deterministically
                w = Array1::from_elem(n, Complex64::new(1.0 / (n as f64).sqrt(), 0.0));
            }
            change = (next - lambda).abs() / next.max(f64::MIN_POSITIVE);
            lambda = next;
            v = w;
            if change <= tol {
                return Ok(lambda.sqrt());
            }
        }
        Err(Error::NoConvergence {
            iterations: max_iter,
            last_change: change,
        })
    }

    /// The `count` largest singular values, in decreasing order.
    pub fn singular_values(&self, count: usize) -> Result<Vec<f64>> {
        if count > self.dim() {
            return Err(Error::InvalidArgument(format!(
                "requested {count} singular values of a {}-dimensional operator",
                self.dim()
            )));
        }
        let mut sv = jacobi_singular_values(&self.entries)?;
        sv.truncate(count);
        Ok(sv)
    }

    pub fn to_json(&self) -> OperatorJson {
        OperatorJson {
            dim: self.dim(),
            entries: self.entries.iter().copied().collect(),
        }
    }

    pub fn from_json(doc: &OperatorJson) -> Result<Self> {
        if doc.entries.len() != doc.dim * doc.dim {
            return Err(Error::DimensionMismatch {
                left: doc.entries.len(),
                right: doc.dim * doc.dim,
            });
        }
        let entries = Array2::from_shape_vec((doc.dim, doc.dim), doc.entries.clone())
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Self::new(entries)
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}

/// Row-major JSON layout of a truncated operator, complex entries as `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub dim: usize,
    pub entries: Vec<Complex64>,
}

fn normalize(v: &mut Array1<Complex64>) -> f64 {
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.mapv_inplace(|x| x / norm);
    }
    norm
}

/// One-sided complex Jacobi (Hestenes): orthogonalize columns by plane rotations,
/// then read singular values off the column norms.
fn jacobi_singular_values(a: &Array2<Complex64>) -> Result<Vec<f64>> {
    const MAX_SWEEPS: usize = 80;
    let mut cols: Vec<Vec<Complex64>> = a.columns().into_iter().map(|c| c.to_vec()).collect();
    let n = cols.len();
    // columns below this norm are rounding noise and are left alone
    let floor = {
        let frob: f64 = cols.iter().flatten().map(|x| x.norm_sqr()).sum();
        f64::EPSILON * f64::EPSILON * frob
    };
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let alpha: f64 = cols[i].iter().map(|x| x.norm_sqr()).sum();
                let beta: f64 = cols[j].iter().map(|x| x.norm_sqr()).sum();
                let gamma: Complex64 = cols[i].iter().zip(&cols[j]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || alpha <= floor || beta <= floor || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(j);
                for (x, y) in left[i].iter_mut().zip(right[0].iter_mut()) {
                    let yp = *y * phase.conj();
                    let xi = *x;
                    *x = xi * c - yp * s;
                    *y = xi * s + yp * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            iterations: MAX_SWEEPS,
            last_change: f64::NAN,
        });
    }
    let mut sv: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

/// `(Π_m T Π_m f)(z)` for each `m` of the schedule, each value read off by
/// pairing with the truncated kernel at `z`.
pub fn weak_convergence_check(
    t: &TruncatedOperator,
    f: &AnalyticPoly,
    z: ComplexPoint,
    schedule: &[usize],
) -> Result<Vec<Complex64>> {
    let kz = truncated_kernel(z, t.dim())?;
    schedule
        .iter()
        .map(|&m| {
            let g = t.compress(m)?.apply(f)?;
            Ok(g.inner_product(&kz))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constructor_checks() {
        assert!(TruncatedOperator::new(Array2::zeros((2, 3))).is_err());
        assert!(TruncatedOperator::new(Array2::zeros((0, 0))).is_err());
        let mut m = Array2::zeros((2, 2));
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert!(TruncatedOperator::new(m).is_err());
    }

    #[test]
    fn diagonal_norm_and_svd() {
        let d = TruncatedOperator::from_diagonal(&[c(0.5, 0.0), c(0.0, -2.0), c(1.0, 1.0)]).unwrap();
        assert!((d.op_norm(1e-14).unwrap() - 2.0).abs() < 1e-12);
        let sv = d.singular_values(3).unwrap();
        assert!((sv[0] - 2.0).abs() < 1e-14);
        assert!((sv[1] - 2f64.sqrt()).abs() < 1e-14);
        assert!((sv[2] - 0.5).abs() < 1e-14);
        assert!(d.singular_values(4).is_err());
    }

    #[test]
    fn zero_operator_norm() {
        assert_eq!(TruncatedOperator::zeros(5).unwrap().op_norm(1e-10).unwrap(), 0.0);
        assert!(TruncatedOperator::zeros(5).unwrap().op_norm(0.0).is_err());
    }

    #[test]
    fn rank_one_basis_algebra() {
        let p12 = TruncatedOperator::basis_rank_one(4, 1, 2).unwrap();
        assert_eq!(p12.entry(2, 1), ONE);
        assert!((p12.op_norm(1e-14).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(p12.adjoint(), TruncatedOperator::basis_rank_one(4, 2, 1).unwrap());
        // P_{1,2} then P_{2,3}: e_1 -> e_2 -> e_3
        let p23 = TruncatedOperator::basis_rank_one(4, 2, 3).unwrap();
        let prod = p23.compose(&p12).unwrap();
        assert_eq!(prod, TruncatedOperator::basis_rank_one(4, 1, 3).unwrap());
        let z = TruncatedOperator::zeros(4).unwrap();
        assert_eq!(TruncatedOperator::add(&p12, &z, ONE, ZERO).unwrap(), p12);
        assert!(p12.compose(&TruncatedOperator::zeros(3).unwrap()).is_err());
    }

    #[test]
    fn rank_one_polynomial_singular_values() {
        let u = AnalyticPoly::from_basis_coords(&[c(1.0, 0.0), c(0.0, 2.0)]);
        let v = AnalyticPoly::from_basis_coords(&[c(0.5, 0.0), c(0.0, 0.0), c(-1.0, 1.0)]);
        let p = TruncatedOperator::rank_one(6, &u, &v).unwrap();
        let sv = p.singular_values(3).unwrap();
        assert!((sv[0] - u.norm() * v.norm()).abs() < 1e-12);
        assert!(sv[1] < 1e-12 && sv[2] < 1e-12);
    }

    #[test]
    fn compress_cases() {
        let d: Vec<Complex64> = (0..8).map(|n| c(0.5f64.powi(n), 0.0)).collect();
        let t = TruncatedOperator::from_diagonal(&d).unwrap();
        assert_eq!(t.compress(8).unwrap(), t);
        assert!(t.compress(0).is_err() && t.compress(9).is_err());
        let diff = TruncatedOperator::add(&t, &t.compress(3).unwrap(), ONE, -ONE).unwrap();
        assert!((diff.op_norm(1e-14).unwrap() - 0.125).abs() < 1e-12);
    }

    #[test]
    fn json_roundtrip() {
        let t = TruncatedOperator::from_fn(3, |l, j| c(l as f64, j as f64 * 0.5)).unwrap();
        let doc = t.to_json();
        assert_eq!(doc.entries[1], c(0.0, 0.5));
        let text = serde_json::to_string(&doc).unwrap();
        let back: OperatorJson = serde_json::from_str(&text).unwrap();
        assert_eq!(TruncatedOperator::from_json(&back).unwrap(), t);
        let bad = OperatorJson { dim: 2, entries: vec![ZERO; 3] };
        assert!(TruncatedOperator::from_json(&bad).is_err());
    }

    #[test]
    fn weak_convergence_identity() {
        let id = TruncatedOperator::identity(10).unwrap();
        let f = AnalyticPoly::basis(2);
        let z = c(0.5, 0.0);
        let vals = weak_convergence_check(&id, &f, z, &[1, 2, 3, 5, 10]).unwrap();
        assert_eq!(vals[0], ZERO);
        for v in &vals[2..] {
            assert!((v - c(3f64.sqrt() * 0.25, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn apply_rejects_large_degree() {
        let id = TruncatedOperator::identity(2).unwrap();
        assert!(id.apply(&AnalyticPoly::monomial(2)).is_err());
    }
}
