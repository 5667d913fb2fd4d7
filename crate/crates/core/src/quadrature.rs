//! Gauss–Legendre rules and tensor quadrature over the unit disk and circles.
//!
//! The disk rule uses the substitution `t = r²`, under which the normalized
//! area measure becomes `(2π)⁻¹ dt dθ`. Gauss–Legendre in `t` is paired with a
//! uniform trapezoid rule in `θ`, so the rule is exact for `t^a e^{imθ}` with
//! `a <= 2 n_r - 1` and `|m| < n_θ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::analytic::ComplexPoint;
use crate::error::{Error, Result};

pub const DEFAULT_RADIAL_NODES: usize = 64;
pub const DEFAULT_ANGULAR_NODES: usize = 256;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "Gauss-Legendre rule needs at least one node".into(),
            ));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[n - 1 - i] = x;
            nodes[i] = -x;
            weights[n - 1 - i] = w;
            weights[i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// Composite rule over `[a, b]` split at the interior points of `breaks`.
    pub fn composite(&self, a: f64, b: f64, breaks: &[f64]) -> Vec<(f64, f64)> {
        let mut cuts: Vec<f64> = breaks
            .iter()
            .copied()
            .filter(|x| x.is_finite() && *x > a && *x < b)
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut out = Vec::with_capacity((cuts.len() + 1) * self.len());
        let mut lo = a;
        for hi in cuts.into_iter().chain(std::iter::once(b)) {
            out.extend(self.mapped(lo, hi));
            lo = hi;
        }
        out
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let j = j as f64;
        let p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Tensor rule on the disk: Gauss–Legendre in `t = r²` times a uniform
/// angular grid. Radial weights sum to one, and each angular node carries
/// weight `1/n_θ`, so the whole rule integrates against `π⁻¹ dx dy`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    n_r: usize,
    /// `(t, weight)` pairs on `[0, 1]`.
    radial: Vec<(f64, f64)>,
    angular: Vec<Complex64>,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::new(DEFAULT_RADIAL_NODES, DEFAULT_ANGULAR_NODES).expect("default rule is valid")
    }
}

impl QuadratureRule {
    pub fn new(n_r: usize, n_theta: usize) -> Result<Self> {
        if n_theta == 0 {
            return Err(Error::InvalidArgument("angular node count must be positive".into()));
        }
        let gl = GaussLegendre::new(n_r)?;
        Ok(Self {
            n_r,
            radial: gl.mapped(0.0, 1.0).collect(),
            angular: unit_roots(n_theta),
        })
    }

    pub fn radial_nodes(&self) -> usize {
        self.n_r
    }

    pub fn angular_nodes(&self) -> usize {
        self.angular.len()
    }

    /// `(t, weight)` pairs of the radial factor (`t = r²`).
    pub fn radial(&self) -> &[(f64, f64)] {
        &self.radial
    }

    /// `e^{iθ_j}`, `θ_j = 2πj/n_θ`.
    pub fn angular(&self) -> &[Complex64] {
        &self.angular
    }

    /// Same rule with the radial factor split at the given radii (in `r`),
    /// each piece carrying `n_r` Gauss–Legendre nodes.
    pub fn split_at_radii(&self, radii: &[f64]) -> Self {
        if radii.iter().all(|r| *r <= 0.0 || *r >= 1.0) {
            return self.clone();
        }
        let gl = GaussLegendre::new(self.n_r).expect("n_r validated at construction");
        let breaks: Vec<f64> = radii.iter().map(|r| r * r).collect();
        Self {
            n_r: self.n_r,
            radial: gl.composite(0.0, 1.0, &breaks),
            angular: self.angular.clone(),
        }
    }

    /// Nodes of the full tensor rule with their weights, radial-major.
    pub fn nodes(&self) -> impl Iterator<Item = (ComplexPoint, f64)> + '_ {
        let wa = 1.0 / self.angular.len() as f64;
        self.radial.iter().flat_map(move |&(t, w)| {
            let r = t.sqrt();
            self.angular.iter().map(move |u| (u * r, w * wa))
        })
    }

    pub fn total_weight(&self) -> f64 {
        self.nodes().map(|(_, w)| w).sum()
    }
}

pub(crate) fn unit_roots(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))
        .collect()
}

/// Approximates `π⁻¹ ∫∫_𝔻 integrand dx dy`.
pub fn disk_quadrature(
    integrand: impl Fn(ComplexPoint) -> Complex64,
    rule: &QuadratureRule,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (z, w) in rule.nodes() {
        let v = integrand(z);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite(format!("integrand at node {z}")));
        }
        acc += v * w;
    }
    Ok(acc)
}

/// Approximates `(2π)⁻¹ ∫_0^{2π} integrand(r e^{iθ}) dθ` with `n_theta` uniform nodes.
pub fn circle_quadrature(
    radius: f64,
    n_theta: usize,
    integrand: impl Fn(ComplexPoint) -> Complex64,
) -> Result<Complex64> {
    if n_theta == 0 {
        return Err(Error::InvalidArgument("angular node count must be positive".into()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for u in unit_roots(n_theta) {
        let v = integrand(u * radius);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite(format!("integrand at {}", u * radius)));
        }
        acc += v;
    }
    Ok(acc / n_theta as f64)
}
