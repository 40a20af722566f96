//! Closed-form performance theory for two equal-power uncorrelated sources:
//! manifold cosine and its small-separation expansion, theoretical
//! eigenvalues, eigenvector projection approximations, expected null
//! spectrum and its variance, and the SNR resolution thresholds with and
//! without sector prefiltering.
//!
//! All formulas are expressed in the normalized separation
//! `Delta = N*|omega1 - omega2| / (2*sqrt(3))` and the (prefiltered) array
//! SNR `zeta = A_g * N * P / sigma^2`.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::array::{steering_vector, ArrayGeometry};
use crate::error::{Error, Result};
use crate::music::EigenDecomposition;

/// Above this separation the quartic expansions degrade noticeably and
/// threshold predictions should be treated as indicative only.
pub const EXPANSION_VALIDITY_LIMIT: f64 = 1.0;

/// Operating point of a two-equal-power-source resolution experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSourceModel {
    /// Sensors in the array (N).
    pub num_sensors: usize,
    /// Dimension the null spectrum lives in: n after prefiltering, N without.
    pub subspace_dim: usize,
    /// Snapshots (K).
    pub num_snapshots: usize,
    /// Normalized separation (Delta).
    pub delta: f64,
    /// Linear array gain of the prefilter at the operating direction (1 without).
    pub array_gain: f64,
    /// Array SNR `N*P/sigma^2`, linear.
    pub asnr: f64,
}

impl TwoSourceModel {
    pub fn new(
        num_sensors: usize,
        subspace_dim: usize,
        num_snapshots: usize,
        delta: f64,
        array_gain: f64,
        asnr: f64,
    ) -> Result<Self> {
        if subspace_dim < 3 {
            return Err(Error::InvalidParameter(format!(
                "formula undefined: subspace dimension must be >= 3, got {subspace_dim}"
            )));
        }
        if subspace_dim > num_sensors {
            return Err(Error::InvalidParameter(format!(
                "subspace dimension {subspace_dim} exceeds sensor count {num_sensors}"
            )));
        }
        if !(delta > 0.0) {
            return Err(Error::ZeroSeparation);
        }
        if !(array_gain > 0.0 && array_gain <= 1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "array gain must lie in (0, 1], got {array_gain}"
            )));
        }
        if num_snapshots == 0 {
            return Err(Error::InvalidParameter("num_snapshots must be >= 1".into()));
        }
        if !(asnr > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "asnr must be positive, got {asnr}"
            )));
        }
        Ok(Self {
            num_sensors,
            subspace_dim,
            num_snapshots,
            delta,
            array_gain,
            asnr,
        })
    }

    /// Prefiltered array SNR `zeta = A_g * asnr`.
    pub fn zeta(&self) -> f64 {
        self.array_gain * self.asnr
    }

    /// True when the quartic expansions behind the threshold formulas hold.
    pub fn expansion_valid(&self) -> bool {
        self.delta <= EXPANSION_VALIDITY_LIMIT
    }
}

/// Exact normalized inner product of two steering vectors,
/// `Phi = a(alpha1)^H a(alpha2) / N`. Returns 1 for coincident angles
/// (the limit value).
pub fn manifold_cosine(geom: &ArrayGeometry, alpha1_rad: f64, alpha2_rad: f64) -> Complex64 {
    let a1 = steering_vector(geom, alpha1_rad);
    let a2 = steering_vector(geom, alpha2_rad);
    a1.dotc(&a2) / Complex64::new(geom.num_sensors() as f64, 0.0)
}

/// Quartic small-separation expansion of `|Phi|`:
/// `1 - Delta^2/2 + (9/120) Delta^4`. Truncates the expansion of
/// `sinc(sqrt(3) * Delta)`, so the truncation error is O(Delta^6).
pub fn manifold_cosine_expansion(delta: f64) -> f64 {
    1.0 - delta * delta / 2.0 + (9.0 / 120.0) * delta.powi(4)
}

/// Signal-space eigenvalues of the two-source covariance:
/// `0.5*(P1~+P2~)*N*[1 +- sqrt(1 - 4*P1~*P2~*(1-|Phi|^2)/(P1~+P2~)^2)] + sigma^2`,
/// with `Pi~ = A_g * Pi`.
pub fn theoretical_eigenvalues(
    model: &TwoSourceModel,
    power1: f64,
    power2: f64,
    phi_mag: f64,
    noise_power: f64,
) -> (f64, f64) {
    let p1 = model.array_gain * power1;
    let p2 = model.array_gain * power2;
    let total = p1 + p2;
    if total == 0.0 {
        return (noise_power, noise_power);
    }
    let n = model.num_sensors as f64;
    let disc = (1.0 - 4.0 * p1 * p2 * (1.0 - phi_mag * phi_mag) / (total * total)).max(0.0);
    let root = disc.sqrt();
    let l1 = 0.5 * total * n * (1.0 + root) + noise_power;
    let l2 = 0.5 * total * n * (1.0 - root) + noise_power;
    (l1, l2)
}

/// The four quartic projection approximations, clamped to [0, 1]:
/// squared projections of the unit manifold vector onto the two signal
/// eigenvectors, at a source angle and at the midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionApprox {
    /// `|a^H e1|^2` at a source angle: `1 - Delta^2/4 + (3/80) Delta^4`.
    pub source_onto_first: f64,
    /// `|a^H e2|^2` at a source angle: `Delta^2/4 - (3/80) Delta^4`.
    pub source_onto_second: f64,
    /// `|a^H e1|^2` at the midpoint: `1 - Delta^4/80`.
    pub midpoint_onto_first: f64,
    /// `|a^H e2|^2` at the midpoint: 0.
    pub midpoint_onto_second: f64,
}

/// Valid for small separations; documented for `Delta <~ 0.5`.
pub fn projection_approximations(delta: f64) -> ProjectionApprox {
    let d2 = delta * delta;
    let d4 = d2 * d2;
    ProjectionApprox {
        source_onto_first: (1.0 - d2 / 4.0 + 3.0 / 80.0 * d4).clamp(0.0, 1.0),
        source_onto_second: (d2 / 4.0 - 3.0 / 80.0 * d4).clamp(0.0, 1.0),
        midpoint_onto_first: (1.0 - d4 / 80.0).clamp(0.0, 1.0),
        midpoint_onto_second: 0.0,
    }
}

fn eig_two_source_context(
    eig: &EigenDecomposition,
    num_sources: usize,
) -> Result<(usize, f64)> {
    let dim = eig.dim();
    if num_sources >= dim {
        return Err(Error::NoNoiseSubspace(format!(
            "{num_sources} sources in dimension {dim}"
        )));
    }
    let sigma2 = eig.noise_power_estimate(num_sources)?;
    Ok((dim, sigma2))
}

/// Expected estimated null spectrum from the eigenpair perturbation sum:
/// `D + (1/K) * sum_{i<=M} sum_{j!=i} [l_i l_j / (l_i - l_j)^2] * (|u^H e_i|^2 - |u^H e_j|^2)`.
///
/// Errors when a summed pair of eigenvalues is degenerate relative to the
/// spectrum scale (the perturbation expansion breaks down there).
pub fn expected_null_general(
    eig: &EigenDecomposition,
    manifold: &DVector<Complex64>,
    num_sources: usize,
    num_snapshots: usize,
) -> Result<f64> {
    let dim = eig.dim();
    if num_sources >= dim {
        return Err(Error::NoNoiseSubspace(format!(
            "{num_sources} sources in dimension {dim}"
        )));
    }
    if num_snapshots == 0 {
        return Err(Error::InvalidParameter("num_snapshots must be >= 1".into()));
    }
    let norm = manifold.norm();
    if norm == 0.0 {
        return Err(Error::EmptyInput("zero manifold vector".into()));
    }
    let unit = manifold / Complex64::new(norm, 0.0);
    let lambdas = eig.eigenvalues();
    let scale = lambdas[0].abs().max(f64::MIN_POSITIVE);
    let projections: Vec<f64> = (0..dim)
        .map(|i| eig.eigenvectors().column(i).dotc(&unit).norm_sqr())
        .collect();
    let d0: f64 = 1.0 - projections[..num_sources].iter().sum::<f64>();
    let mut bias = 0.0;
    for (i, &li) in lambdas.iter().enumerate().take(num_sources) {
        for (j, &lj) in lambdas.iter().enumerate() {
            if j == i {
                continue;
            }
            let gap = li - lj;
            if gap.abs() <= 1e-9 * scale {
                return Err(Error::DegenerateSpectrum(li, lj));
            }
            bias += li * lj / (gap * gap) * (projections[i] - projections[j]);
        }
    }
    Ok(d0.clamp(0.0, 1.0) + bias / num_snapshots as f64)
}

/// Variance of the estimated null spectrum over the two signal eigenpairs:
/// `(2*(m-2)/K) * sum_{i=1,2} [l_i s^2/(l_i - s^2)^2] * P_i (1 - P_i)`
/// with `P_i = |u^H e_i|^2` and `s^2` the noise eigenvalue level.
pub fn variance_null_general(
    eig: &EigenDecomposition,
    manifold: &DVector<Complex64>,
    num_snapshots: usize,
) -> Result<f64> {
    let num_sources = 2;
    let (dim, sigma2) = eig_two_source_context(eig, num_sources)?;
    if dim < 3 {
        return Err(Error::InvalidParameter(
            "formula undefined: variance needs dimension >= 3".into(),
        ));
    }
    if num_snapshots == 0 {
        return Err(Error::InvalidParameter("num_snapshots must be >= 1".into()));
    }
    let norm = manifold.norm();
    if norm == 0.0 {
        return Err(Error::EmptyInput("zero manifold vector".into()));
    }
    let unit = manifold / Complex64::new(norm, 0.0);
    let lambdas = eig.eigenvalues();
    let scale = lambdas[0].abs().max(f64::MIN_POSITIVE);
    let mut sum = 0.0;
    for (i, &lambda) in lambdas.iter().enumerate().take(num_sources) {
        let gap = lambda - sigma2;
        if gap.abs() <= 1e-9 * scale {
            return Err(Error::DegenerateSpectrum(lambda, sigma2));
        }
        let p = eig.eigenvectors().column(i).dotc(&unit).norm_sqr();
        sum += lambda * sigma2 / (gap * gap) * (p - p * p);
    }
    Ok(2.0 * (dim as f64 - 2.0) / num_snapshots as f64 * sum)
}

/// Same variance from the closed-form model (expansion `|Phi|`, quartic
/// projections, theoretical eigenvalues), dimensionless in `zeta`.
pub fn variance_null_model(model: &TwoSourceModel) -> f64 {
    let zeta = model.zeta();
    let phi = manifold_cosine_expansion(model.delta);
    let proj = projection_approximations(model.delta);
    let m = model.subspace_dim as f64 - 2.0;
    let k = model.num_snapshots as f64;
    // Signal eigenvalues over sigma^2: l_i' = zeta*(1 +- phi), l_i = l_i' + 1.
    let mut sum = 0.0;
    for (lp, p) in [
        (zeta * (1.0 + phi), proj.source_onto_first),
        (zeta * (1.0 - phi), proj.source_onto_second),
    ] {
        sum += (lp + 1.0) / (lp * lp) * (p - p * p);
    }
    2.0 * m / k * sum
}

/// Expected estimated null spectrum at the source angles for equal powers:
/// `((n-2)/K) * [1/(2*zeta) + 1/(zeta^2 * Delta^2)]`.
pub fn expected_null_at_sources(model: &TwoSourceModel) -> f64 {
    let zeta = model.zeta();
    let m = model.subspace_dim as f64 - 2.0;
    let k = model.num_snapshots as f64;
    m / k * (1.0 / (2.0 * zeta) + 1.0 / (zeta * zeta * model.delta * model.delta))
}

/// Expected estimated null spectrum at the midpoint:
/// `Delta^4/80 + ((n-2)/K) * [(4+Delta^2)/(8*zeta) + (2*Delta^2+Delta^4)/(8*zeta^2*Delta^2)]`.
pub fn expected_null_at_midpoint(model: &TwoSourceModel) -> f64 {
    let zeta = model.zeta();
    let m = model.subspace_dim as f64 - 2.0;
    let k = model.num_snapshots as f64;
    let d2 = model.delta * model.delta;
    let d4 = d2 * d2;
    midpoint_bias_floor(model.delta)
        + m / k * ((4.0 + d2) / (8.0 * zeta) + (2.0 * d2 + d4) / (8.0 * zeta * zeta * d2))
}

/// The K-independent part of the midpoint expectation, `Delta^4 / 80`:
/// the resolution dip the threshold construction equates the source-level
/// bias against.
pub fn midpoint_bias_floor(delta: f64) -> f64 {
    delta.powi(4) / 80.0
}

/// Element-space resolution threshold (ASNR, linear):
/// `tau = (1/K) * 20*(N-2)*Delta^-4 * [1 + sqrt(1 + K*Delta^2/(5*(N-2)))]`.
pub fn threshold_element(num_sensors: usize, num_snapshots: usize, delta: f64) -> Result<f64> {
    threshold_beamspace(num_sensors, num_snapshots, delta, 1.0)
}

/// Prefiltered resolution threshold (ASNR, linear):
/// `tau_n = (1/(A_g*K)) * 20*(n-2)*Delta^-4 * [1 + sqrt(1 + K*Delta^2/(5*(n-2)))]`.
pub fn threshold_beamspace(
    subspace_dim: usize,
    num_snapshots: usize,
    delta: f64,
    array_gain: f64,
) -> Result<f64> {
    if subspace_dim < 3 {
        return Err(Error::InvalidParameter(format!(
            "formula undefined: subspace dimension must be >= 3, got {subspace_dim}"
        )));
    }
    if num_snapshots == 0 {
        return Err(Error::InvalidParameter("num_snapshots must be >= 1".into()));
    }
    if !(delta > 0.0) {
        return Err(Error::ZeroSeparation);
    }
    if !(array_gain > 0.0 && array_gain <= 1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "array gain must lie in (0, 1], got {array_gain}"
        )));
    }
    let m = subspace_dim as f64 - 2.0;
    let k = num_snapshots as f64;
    let bracket = 1.0 + (1.0 + k * delta * delta / (5.0 * m)).sqrt();
    Ok(20.0 * m / (array_gain * k * delta.powi(4)) * bracket)
}

pub fn db_from_linear(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn linear_from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
