//! Bounded real profiles: the functions `a(r)`, `a(t)` and `a(θ)` behind radial,
//! vertical and angular symbols.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// A bounded real function of one variable, sampled at quadrature nodes.
///
/// Profiles report their jump/kink locations so integrators can split there.
#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    Constant {
        value: f64,
    },
    /// Characteristic function of `[lo, hi)`.
    Indicator {
        #[serde(default)]
        lo: f64,
        hi: f64,
    },
    /// `(n+3)(1-r²)^{n+2}`, the radial family approximating the projection onto constants.
    ApproxFamily {
        n: usize,
    },
    /// `scale · e^{-rate·t}`.
    Exponential {
        rate: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    /// `Σ c_i t^i`.
    Polynomial {
        coeffs: Vec<f64>,
    },
    /// `values[i]` on `[breaks[i-1], breaks[i])`, with `values.len() == breaks.len() + 1`.
    PiecewiseConstant {
        breaks: Vec<f64>,
        values: Vec<f64>,
    },
    /// Linear interpolation through `(knots[i], values[i])`, constant outside.
    PiecewiseLinear {
        knots: Vec<f64>,
        values: Vec<f64>,
    },
    #[serde(skip)]
    Custom(CustomProfile),
}

fn one() -> f64 {
    1.0
}

/// A user-supplied callable with optional breakpoints.
#[derive(Clone)]
pub struct CustomProfile {
    func: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    breaks: Vec<f64>,
}

impl CustomProfile {
    pub fn new(func: impl Fn(f64) -> f64 + Send + Sync + 'static, breaks: Vec<f64>) -> Self {
        Self {
            func: Arc::new(func),
            breaks,
        }
    }
}

impl fmt::Debug for CustomProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomProfile")
            .field("breaks", &self.breaks)
            .finish_non_exhaustive()
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Custom(c) => c.fmt(f),
            other => write!(f, "{}", serde_json::to_string(other).unwrap_or_default()),
        }
    }
}

impl Profile {
    pub fn custom(func: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Profile::Custom(CustomProfile::new(func, Vec::new()))
    }

    pub fn custom_with_breaks(func: impl Fn(f64) -> f64 + Send + Sync + 'static, breaks: Vec<f64>) -> Self {
        Profile::Custom(CustomProfile::new(func, breaks))
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Profile::Constant { value } => *value,
            Profile::Indicator { lo, hi } => {
                if t >= *lo && t < *hi {
                    1.0
                } else {
                    0.0
                }
            }
            Profile::ApproxFamily { n } => {
                let u = 1.0 - t * t;
                (*n as f64 + 3.0) * u.powi(*n as i32 + 2)
            }
            Profile::Exponential { rate, scale } => scale * (-rate * t).exp(),
            Profile::Polynomial { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c),
            Profile::PiecewiseConstant { breaks, values } => {
                let idx = breaks.partition_point(|b| *b <= t);
                values.get(idx).copied().unwrap_or(0.0)
            }
            Profile::PiecewiseLinear { knots, values } => interpolate(knots, values, t),
            Profile::Custom(c) => (c.func)(t),
        }
    }

    /// Locations where the profile may jump or lose smoothness.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Profile::Indicator { lo, hi } => vec![*lo, *hi],
            Profile::PiecewiseConstant { breaks, .. } => breaks.clone(),
            Profile::PiecewiseLinear { knots, .. } => knots.clone(),
            Profile::Custom(c) => c.breaks.clone(),
            _ => Vec::new(),
        }
    }

    /// Largest point of the support when it is known to be bounded.
    pub fn support_end(&self) -> Option<f64> {
        match self {
            Profile::Constant { value } if *value == 0.0 => Some(0.0),
            Profile::Indicator { lo, hi } if hi > lo => Some(*hi),
            Profile::Indicator { .. } => Some(0.0),
            Profile::PiecewiseConstant { breaks, values } => {
                if values.last().copied().unwrap_or(0.0) != 0.0 {
                    return None;
                }
                let last_nonzero = values.iter().rposition(|v| *v != 0.0)?;
                breaks.get(last_nonzero).copied()
            }
            Profile::PiecewiseLinear { knots, values } => {
                if values.last().copied().unwrap_or(0.0) != 0.0 {
                    return None;
                }
                let last_nonzero = values.iter().rposition(|v| *v != 0.0)?;
                knots.get(last_nonzero + 1).copied()
            }
            _ => None,
        }
    }

    /// Estimate of `sup |a|` over `[lo, hi]`, exact for the piecewise kinds.
    pub fn sup_abs(&self, lo: f64, hi: f64) -> f64 {
        match self {
            Profile::Constant { value } => value.abs(),
            Profile::Indicator { lo: a, hi: b } => {
                if *b > lo.max(*a) && *a < hi {
                    1.0
                } else {
                    0.0
                }
            }
            Profile::PiecewiseConstant { values, .. } | Profile::PiecewiseLinear { values, .. } => {
                values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
            }
            _ => {
                let samples = 2048;
                let mut pts: Vec<f64> = (0..=samples)
                    .map(|i| lo + (hi - lo) * i as f64 / samples as f64)
                    .collect();
                pts.extend(self.breakpoints());
                pts.into_iter()
                    .filter(|t| *t >= lo && *t <= hi)
                    .fold(0.0f64, |m, t| m.max(self.eval(t).abs()))
            }
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match self {
            Profile::Constant { value } if !value.is_finite() => Err("constant profile is not finite".into()),
            Profile::Indicator { lo, hi } if !(lo.is_finite() && hi.is_finite()) => {
                Err("indicator bounds must be finite".into())
            }
            Profile::Exponential { rate, scale } if !(rate.is_finite() && scale.is_finite()) || *rate < 0.0 => {
                Err("exponential profile needs finite scale and nonnegative rate".into())
            }
            Profile::Polynomial { coeffs } if !finite(coeffs) => Err("polynomial coefficients must be finite".into()),
            Profile::PiecewiseConstant { breaks, values } => {
                if values.len() != breaks.len() + 1 {
                    return Err(format!(
                        "piecewise constant profile needs {} values for {} breaks, got {}",
                        breaks.len() + 1,
                        breaks.len(),
                        values.len()
                    ));
                }
                if !finite(breaks) || !finite(values) || breaks.windows(2).any(|w| w[0] >= w[1]) {
                    return Err("breaks must be finite and strictly increasing".into());
                }
                Ok(())
            }
            Profile::PiecewiseLinear { knots, values } => {
                if knots.is_empty() || knots.len() != values.len() {
                    return Err("piecewise linear profile needs matching nonempty knots and values".into());
                }
                if !finite(knots) || !finite(values) || knots.windows(2).any(|w| w[0] >= w[1]) {
                    return Err("knots must be finite and strictly increasing".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

fn interpolate(knots: &[f64], values: &[f64], t: f64) -> f64 {
    if knots.is_empty() {
        return 0.0;
    }
    if t <= knots[0] {
        return values[0];
    }
    let idx = knots.partition_point(|k| *k <= t);
    if idx >= knots.len() {
        return values[values.len() - 1];
    }
    let (x0, x1) = (knots[idx - 1], knots[idx]);
    let (y0, y1) = (values[idx - 1], values[idx]);
    y0 + (y1 - y0) * (t - x0) / (x1 - x0)
}
