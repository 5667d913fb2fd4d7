//! Euclidean and Bergman-metric disks inside the unit disk.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{check_in_disk, ComplexPoint, KERNEL_MARGIN};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EuclideanDisk {
    pub center: ComplexPoint,
    pub radius: f64,
}

impl EuclideanDisk {
    pub fn new(center: ComplexPoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("disk radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius })
    }

    /// Open-disk membership.
    pub fn contains(&self, w: ComplexPoint) -> bool {
        (w - self.center).norm() < self.radius
    }

    /// Whether the closure lies in the open unit disk.
    pub fn inside_unit_disk(&self) -> bool {
        self.center.norm() + self.radius < 1.0
    }

    /// The window `𝔻(z, (1-|z|)/2)` used by the Carleson quantities.
    pub fn carleson_window(z: ComplexPoint) -> Self {
        Self {
            center: z,
            radius: 0.5 * (1.0 - z.norm()),
        }
    }
}

/// The Bergman-metric disk `B(ζ, r)`, which is the Euclidean disk with
/// center `(1-s²)ζ/(1-s²|ζ|²)` and radius `(1-|ζ|²)s/(1-s²|ζ|²)`, `s = tanh r`.
pub fn bergman_disk(zeta: ComplexPoint, r: f64) -> Result<EuclideanDisk> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("Bergman radius must be positive, got {r}")));
    }
    check_in_disk(zeta, KERNEL_MARGIN)?;
    let s = r.tanh();
    let a2 = zeta.norm_sqr();
    let denom = 1.0 - s * s * a2;
    EuclideanDisk::new(zeta * ((1.0 - s * s) / denom), (1.0 - a2) * s / denom)
}

/// Empirical bounds `κ₁ <= radius/(1-|ζ|) <= κ₂` over a sweep of `|ζ|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InclusionConstants {
    pub r: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub max_modulus: f64,
}

/// Sweeps `|ζ|` over `samples` equispaced values in `[0, max_modulus]`.
///
/// Bergman disks are rotation covariant, so the sweep runs along the real axis.
pub fn inclusion_constants(r: f64, max_modulus: f64, samples: usize) -> Result<InclusionConstants> {
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let mut kappa1 = f64::INFINITY;
    let mut kappa2 = 0.0f64;
    for i in 0..samples {
        let a = max_modulus * i as f64 / (samples - 1) as f64;
        let disk = bergman_disk(Complex64::new(a, 0.0), r)?;
        let ratio = disk.radius / (1.0 - a);
        kappa1 = kappa1.min(ratio);
        kappa2 = kappa2.max(ratio);
    }
    Ok(InclusionConstants {
        r,
        kappa1,
        kappa2,
        max_modulus,
    })
}
