//! Sector prefiltering: the N x n weighting matrix built from a DPSS bank
//! steered to a sector center, snapshot reduction, and the array
//! beamforming gain.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::array::{steering_vector, ArrayGeometry};
use crate::dpss::DpssBank;
use crate::error::{Error, Result};

/// The N x n prefilter for one angular sector.
///
/// Column k is the k-th prolate sequence, phase-ramped toward the sector
/// center and scaled by the per-column unit-modulus factor (1 for even k,
/// -j for odd k). Columns stay orthonormal because every factor applied to
/// the real orthonormal sequences has unit modulus.
#[derive(Debug, Clone)]
pub struct WeightingMatrix {
    matrix: DMatrix<Complex64>,
    sector_center_rad: f64,
    order: usize,
    half_bandwidth: f64,
    count: usize,
}

impl WeightingMatrix {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn sector_center_rad(&self) -> f64 {
        self.sector_center_rad
    }

    /// (N, B, n) of the bank this matrix was built from.
    pub fn bank_params(&self) -> (usize, f64, usize) {
        (self.order, self.half_bandwidth, self.count)
    }

    pub fn num_sensors(&self) -> usize {
        self.order
    }

    pub fn subspace_dim(&self) -> usize {
        self.count
    }
}

/// Build the weighting matrix `w[l][k] = nu_k * v_l^(k) * exp(j*2*pi*(d/lambda)*l*sin(theta0))`.
pub fn build_weighting(
    geom: &ArrayGeometry,
    bank: &DpssBank,
    sector_center_rad: f64,
) -> Result<WeightingMatrix> {
    if bank.order() != geom.num_sensors() {
        return Err(Error::DimensionMismatch(format!(
            "bank order {} does not match sensor count {}",
            bank.order(),
            geom.num_sensors()
        )));
    }
    let n = geom.num_sensors();
    let count = bank.count();
    let omega0 = 2.0 * PI * geom.spacing_ratio() * sector_center_rad.sin();
    let mut matrix = DMatrix::zeros(n, count);
    for k in 0..count {
        let nu = if k % 2 == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, -1.0)
        };
        for l in 0..n {
            matrix[(l, k)] =
                nu * bank.sequences()[(l, k)] * Complex64::from_polar(1.0, omega0 * l as f64);
        }
    }
    Ok(WeightingMatrix {
        matrix,
        sector_center_rad,
        order: n,
        half_bandwidth: bank.half_bandwidth(),
        count,
    })
}

/// Reduce snapshots to the sector subspace: `Y = W^H X` (one column per snapshot).
pub fn prefilter(w: &WeightingMatrix, snapshots: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    if snapshots.nrows() != w.num_sensors() {
        return Err(Error::DimensionMismatch(format!(
            "snapshot rows {} do not match sensor count {}",
            snapshots.nrows(),
            w.num_sensors()
        )));
    }
    Ok(w.matrix.adjoint() * snapshots)
}

/// Beamspace manifold vector `W^H a(alpha)`.
pub fn beamspace_steering(
    w: &WeightingMatrix,
    geom: &ArrayGeometry,
    alpha_rad: f64,
) -> DVector<Complex64> {
    w.matrix.adjoint() * steering_vector(geom, alpha_rad)
}

/// Array beamforming gain at `alpha`: the fraction of steering-vector energy
/// the prefilter keeps, `||W^H a||^2 / N`, linear and in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGain {
    pub linear: f64,
    pub db: f64,
}

pub fn array_gain(w: &WeightingMatrix, geom: &ArrayGeometry, alpha_rad: f64) -> ArrayGain {
    let b = beamspace_steering(w, geom, alpha_rad);
    let linear = b.norm_squared() / geom.num_sensors() as f64;
    ArrayGain {
        linear,
        db: 10.0 * linear.log10(),
    }
}
