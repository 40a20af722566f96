//! Uniform linear array geometry: steering vectors, direction matrices,
//! electrical angles and beamwidth conventions.
//!
//! Angles are radians internally; degree conversions live at the I/O surface.
//! The phase convention is `exp(+j * omega * i)` for sensor index `i`, with
//! `omega = 2*pi*(d/lambda)*sin(alpha)` and `alpha` measured from broadside.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Default beamwidth constant: beamwidth in degrees is `128 / N`.
pub const DEFAULT_BEAMWIDTH_CONSTANT: f64 = 128.0;

/// A uniform linear array of omni-directional sensors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    num_sensors: usize,
    spacing_ratio: f64,
}

impl ArrayGeometry {
    /// Half-wavelength spacing, the usual operating point.
    pub fn half_wavelength(num_sensors: usize) -> Result<Self> {
        Self::new(num_sensors, 0.5)
    }

    /// `spacing_ratio` is d/lambda. Steering math needs `num_sensors >= 2`;
    /// the resolution-threshold formulas additionally require at least 3
    /// sensors and enforce that themselves.
    pub fn new(num_sensors: usize, spacing_ratio: f64) -> Result<Self> {
        if num_sensors < 2 {
            return Err(Error::InvalidParameter(format!(
                "num_sensors must be >= 2, got {num_sensors}"
            )));
        }
        if !(spacing_ratio > 0.0) || !spacing_ratio.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "spacing_ratio must be positive and finite, got {spacing_ratio}"
            )));
        }
        Ok(Self {
            num_sensors,
            spacing_ratio,
        })
    }

    pub fn num_sensors(&self) -> usize {
        self.num_sensors
    }

    pub fn spacing_ratio(&self) -> f64 {
        self.spacing_ratio
    }
}

/// Per-sensor phase increment `omega = 2*pi*(d/lambda)*sin(alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectricalAngle {
    omega: f64,
}

impl ElectricalAngle {
    pub fn from_physical(geom: &ArrayGeometry, alpha_rad: f64) -> Self {
        Self {
            omega: 2.0 * PI * geom.spacing_ratio() * alpha_rad.sin(),
        }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

/// Steering vector for a plane wave from `alpha_rad` (broadside = 0).
///
/// Element `i` is `exp(j * 2*pi*(d/lambda) * i * sin(alpha))`; element 0 is
/// always `1 + 0j` and the squared norm is exactly `N`.
pub fn steering_vector(geom: &ArrayGeometry, alpha_rad: f64) -> DVector<Complex64> {
    let omega = ElectricalAngle::from_physical(geom, alpha_rad).omega();
    DVector::from_fn(geom.num_sensors(), |i, _| {
        Complex64::from_polar(1.0, omega * i as f64)
    })
}

/// N x M matrix whose column m is the steering vector of `alphas_rad[m]`.
pub fn direction_matrix(geom: &ArrayGeometry, alphas_rad: &[f64]) -> Result<DMatrix<Complex64>> {
    if alphas_rad.is_empty() {
        return Err(Error::NoSources);
    }
    let n = geom.num_sensors();
    let mut mat = DMatrix::zeros(n, alphas_rad.len());
    for (m, &alpha) in alphas_rad.iter().enumerate() {
        mat.set_column(m, &steering_vector(geom, alpha));
    }
    Ok(mat)
}

/// Array beamwidth in degrees under the default `128 / N` convention.
pub fn beamwidth_deg(geom: &ArrayGeometry) -> f64 {
    beamwidth_deg_with_constant(geom, DEFAULT_BEAMWIDTH_CONSTANT)
}

/// Beamwidth in degrees with a caller-supplied constant.
pub fn beamwidth_deg_with_constant(geom: &ArrayGeometry, constant: f64) -> f64 {
    constant / geom.num_sensors() as f64
}

/// Normalized angular separation `Delta = N * |omega1 - omega2| / (2*sqrt(3))`,
/// the quantity all resolution-threshold formulas are expressed in.
pub fn delta_separation(geom: &ArrayGeometry, alpha1_rad: f64, alpha2_rad: f64) -> Result<f64> {
    let w1 = ElectricalAngle::from_physical(geom, alpha1_rad).omega();
    let w2 = ElectricalAngle::from_physical(geom, alpha2_rad).omega();
    let delta = geom.num_sensors() as f64 * (w1 - w2).abs() / (2.0 * 3.0_f64.sqrt());
    if delta == 0.0 {
        return Err(Error::ZeroSeparation);
    }
    Ok(delta)
}

pub fn deg_to_rad(deg: f64) -> f64 {
    deg * PI / 180.0
}

pub fn rad_to_deg(rad: f64) -> f64 {
    rad * 180.0 / PI
}
