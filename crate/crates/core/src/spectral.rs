//! Spectral sequences and functions of radial, vertical and angular operators,
//! and oscillation profiles measuring how slowly they oscillate.

use serde::{Deserialize, Serialize};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::quadrature::GaussLegendre;
use crate::special::beta_family;

const MIN_RADIAL_NODES: usize = 64;
const PANEL_NODES: usize = 24;
const GRADED_PANELS: i32 = 24;
/// The exponential kernels are cut at `u = 40`; `e^{-40}` is below double rounding.
pub const EXP_TRUNCATION: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralKind {
    Radial,
    Vertical,
    Angular,
}

impl SpectralKind {
    /// The metric in which slow oscillation is measured.
    pub fn metric(self, x: f64) -> f64 {
        match self {
            SpectralKind::Radial => (x + 1.0).ln(),
            SpectralKind::Vertical => x.ln(),
            SpectralKind::Angular => x.asinh(),
        }
    }
}

/// Samples `(x_i, γ(x_i))`; for the radial kind `x_i = n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub kind: SpectralKind,
    pub grid: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl SpectralData {
    pub fn radial(values: Vec<Complex64>) -> Self {
        Self {
            kind: SpectralKind::Radial,
            grid: (0..values.len()).map(|n| n as f64).collect(),
            values,
        }
    }

    pub fn radial_real(values: &[f64]) -> Self {
        Self::radial(values.iter().map(|v| Complex64::new(*v, 0.0)).collect())
    }

    /// `γ_a(0..n)` for a radial profile.
    pub fn from_radial_profile(a: &Profile, n: usize) -> Result<Self> {
        Ok(Self::radial_real(&radial_gamma_sequence(a, n)?))
    }

    pub fn from_vertical_profile(a: &Profile, xs: &[f64]) -> Result<Self> {
        let values = xs
            .iter()
            .map(|&x| vertical_gamma(a, x).map(|v| Complex64::new(v, 0.0)))
            .collect::<Result<_>>()?;
        Ok(Self {
            kind: SpectralKind::Vertical,
            grid: xs.to_vec(),
            values,
        })
    }

    pub fn from_angular_profile(a: &Profile, xs: &[f64]) -> Result<Self> {
        let values = xs
            .iter()
            .map(|&x| angular_gamma(a, x).map(|v| Complex64::new(v, 0.0)))
            .collect::<Result<_>>()?;
        Ok(Self {
            kind: SpectralKind::Angular,
            grid: xs.to_vec(),
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.norm()))
    }
}

fn check_finite(v: f64, what: impl FnOnce() -> String) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what()))
    }
}

fn radial_rule(a: &Profile, max_n: usize) -> Vec<(f64, f64)> {
    let gl = GaussLegendre::new(MIN_RADIAL_NODES.max(max_n / 2 + 40)).expect("positive node count");
    let breaks: Vec<f64> = a.breakpoints().into_iter().map(|r| r * r).collect();
    gl.composite(0.0, 1.0, &breaks)
}

fn radial_gamma_on(a: &Profile, nodes: &[(f64, f64)], n: usize) -> Result<f64> {
    let mut acc = 0.0;
    for &(t, w) in nodes {
        let r = t.sqrt();
        let v = check_finite(a.eval(r), || format!("radial profile at r = {r}"))?;
        acc += w * v * t.powi(n as i32);
    }
    Ok((n + 1) as f64 * acc)
}

/// `γ_a(n) = (n+1) ∫₀¹ a(√t) t^n dt`.
pub fn radial_gamma(a: &Profile, n: usize) -> Result<f64> {
    radial_gamma_on(a, &radial_rule(a, n), n)
}

/// `γ_a(0), .., γ_a(len-1)` on one shared rule.
pub fn radial_gamma_sequence(a: &Profile, len: usize) -> Result<Vec<f64>> {
    let nodes = radial_rule(a, len.saturating_sub(1));
    (0..len).map(|n| radial_gamma_on(a, &nodes, n)).collect()
}

/// `γ_{a_n}(k)` for `a_n(r) = (n+3)(1-r²)^{n+2}`, equal to `(n+3)!(k+1)!/(n+k+3)!`.
pub fn approx_family_gamma(n: usize, k: usize) -> f64 {
    beta_family(n, k)
}

/// Panels on `[0, upper]` refined geometrically toward 0 and split at `breaks`.
fn graded_nodes(upper: f64, breaks: &[f64]) -> Vec<(f64, f64)> {
    let gl = GaussLegendre::new(PANEL_NODES).expect("positive node count");
    let mut cuts: Vec<f64> = (1..=GRADED_PANELS).map(|k| upper * 2f64.powi(-k)).collect();
    cuts.extend_from_slice(breaks);
    gl.composite(0.0, upper, &cuts)
}

/// `γ_a(x) = 2x ∫₀^∞ a(t) e^{-2tx} dt`, `x > 0`, via `u = 2tx` on `[0, 40]`.
pub fn vertical_gamma(a: &Profile, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidArgument(format!("vertical spectral function needs x > 0, got {x}")));
    }
    let breaks: Vec<f64> = a.breakpoints().into_iter().filter(|t| *t > 0.0).map(|t| 2.0 * t * x).collect();
    let mut acc = 0.0;
    for (u, w) in graded_nodes(EXP_TRUNCATION, &breaks) {
        let t = u / (2.0 * x);
        let v = check_finite(a.eval(t), || format!("vertical profile at t = {t}"))?;
        acc += w * v * (-u).exp();
    }
    Ok(acc)
}

/// `γ_a(x) = 2x/(1-e^{-2πx}) ∫₀^π a(θ) e^{-2xθ} dθ`, with the limit `π⁻¹∫a` at `x = 0`.
///
/// The kernel is rewritten as `2|x| e^{-2|x| d}/(1-e^{-2π|x|})` with `d = θ`
/// for `x > 0` and `d = π - θ` for `x < 0`, then integrated in `u = 2|x| d`.
pub fn angular_gamma(a: &Profile, x: f64) -> Result<f64> {
    use std::f64::consts::PI;
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!("angular spectral function needs finite x, got {x}")));
    }
    let breaks: Vec<f64> = a.breakpoints().into_iter().filter(|t| *t > 0.0 && *t < PI).collect();
    if x == 0.0 {
        let gl = GaussLegendre::new(MIN_RADIAL_NODES).expect("positive node count");
        let mut acc = 0.0;
        for (th, w) in gl.composite(0.0, PI, &breaks) {
            acc += w * check_finite(a.eval(th), || format!("angular profile at θ = {th}"))?;
        }
        return Ok(acc / PI);
    }
    let s = 2.0 * x.abs();
    let to_theta = |u: f64| if x > 0.0 { u / s } else { PI - u / s };
    let upper = (PI * s).min(EXP_TRUNCATION);
    let ubreaks: Vec<f64> = breaks
        .iter()
        .map(|th| if x > 0.0 { th * s } else { (PI - th) * s })
        .collect();
    let mut acc = 0.0;
    for (u, w) in graded_nodes(upper, &ubreaks) {
        let th = to_theta(u);
        let v = check_finite(a.eval(th), || format!("angular profile at θ = {th}"))?;
        acc += w * v * (-u).exp();
    }
    Ok(acc / -(-PI * s).exp_m1())
}

/// `ω(δ) = max |γ(x) - γ(y)|` over grid pairs at metric distance `<= δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationProfile {
    pub kind: SpectralKind,
    pub deltas: Vec<f64>,
    pub omegas: Vec<f64>,
    /// Smallest metric distance between distinct grid points; `ω(δ) = 0` below it.
    pub resolution: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OscillationVerdict {
    /// `ω` at the finest admissible `δ` is within the tolerance.
    SlowlyOscillating,
    /// `ω` stays above the tolerance and does not fall below half its coarsest value.
    NotSlowlyOscillating,
    Inconclusive,
}

impl OscillationProfile {
    /// `ω` at the smallest listed `δ` that admits at least one pair.
    pub fn finest_admissible(&self) -> Option<(f64, f64)> {
        self.deltas
            .iter()
            .zip(&self.omegas)
            .filter(|(d, _)| **d >= self.resolution)
            .min_by(|a, b| a.0.total_cmp(b.0))
            .map(|(d, w)| (*d, *w))
    }

    pub fn verdict(&self, tol: f64) -> OscillationVerdict {
        let Some((_, finest)) = self.finest_admissible() else {
            return OscillationVerdict::Inconclusive;
        };
        let coarsest = self.omegas.iter().fold(0.0f64, |m, w| m.max(*w));
        if finest <= tol {
            OscillationVerdict::SlowlyOscillating
        } else if finest >= 0.5 * coarsest {
            OscillationVerdict::NotSlowlyOscillating
        } else {
            OscillationVerdict::Inconclusive
        }
    }
}

pub fn oscillation_profile(gamma: &SpectralData, deltas: &[f64]) -> Result<OscillationProfile> {
    if gamma.is_empty() {
        return Err(Error::InvalidArgument("oscillation profile of empty data".into()));
    }
    if gamma.grid.len() != gamma.values.len() {
        return Err(Error::DimensionMismatch {
            left: gamma.grid.len(),
            right: gamma.values.len(),
        });
    }
    if let Some(d) = deltas.iter().find(|d| !(**d > 0.0)) {
        return Err(Error::InvalidArgument(format!("δ values must be positive, got {d}")));
    }
    let metric: Vec<f64> = gamma.grid.iter().map(|x| gamma.kind.metric(*x)).collect();
    if metric.iter().any(|m| !m.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "grid point outside the domain of the {:?} metric",
            gamma.kind
        )));
    }
    let n = metric.len();
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push(((metric[i] - metric[j]).abs(), (gamma.values[i] - gamma.values[j]).norm()));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let resolution = pairs
        .iter()
        .find(|(d, _)| *d > 0.0)
        .map(|(d, _)| *d)
        .unwrap_or(f64::INFINITY);
    let mut running = Vec::with_capacity(pairs.len());
    let mut best = 0.0f64;
    for (_, diff) in &pairs {
        best = best.max(*diff);
        running.push(best);
    }
    let omegas = deltas
        .iter()
        .map(|d| {
            let count = pairs.partition_point(|(dist, _)| *dist <= *d);
            if count == 0 {
                0.0
            } else {
                running[count - 1]
            }
        })
        .collect();
    Ok(OscillationProfile {
        kind: gamma.kind,
        deltas: deltas.to_vec(),
        omegas,
        resolution,
    })
}

/// Distance of a sequence from the reflection `J`: `sup |(-1)^n - γ(n)|`,
/// the largest consecutive gap `d`, and the lower bound `1 - d/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JSeparation {
    pub sup: f64,
    pub argsup: usize,
    pub max_gap: f64,
    pub bound: f64,
}

pub fn j_separation(gamma: &[Complex64]) -> Result<JSeparation> {
    if gamma.is_empty() {
        return Err(Error::InvalidArgument("empty sequence".into()));
    }
    let mut sup = -1.0;
    let mut argsup = 0;
    for (n, g) in gamma.iter().enumerate() {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let d = (Complex64::new(sign, 0.0) - g).norm();
        if d > sup {
            sup = d;
            argsup = n;
        }
    }
    let max_gap = gamma.windows(2).fold(0.0f64, |m, w| m.max((w[1] - w[0]).norm()));
    Ok(JSeparation {
        sup,
        argsup,
        max_gap,
        bound: 1.0 - max_gap / 2.0,
    })
}
