//! Synthetic snapshots of uncorrelated narrowband plane waves in white
//! circular complex Gaussian noise, plus exact and sample covariances.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::array::{direction_matrix, ArrayGeometry};
use crate::error::{Error, Result};

/// Which space a covariance or decomposition lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Element,
    Beamspace,
}

/// A two-source (or more, for spectra) simulation setup.
///
/// Internally everything is linear power and radians. The reporting unit for
/// thresholds is the array SNR `N*P/sigma^2`; per-element SNR `P/sigma^2` is
/// also exposed.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    geometry: ArrayGeometry,
    source_angles_rad: Vec<f64>,
    source_power: f64,
    noise_power: f64,
    num_snapshots: usize,
    seed: u64,
}

impl Scenario {
    pub fn new(
        geometry: ArrayGeometry,
        source_angles_rad: Vec<f64>,
        source_power: f64,
        noise_power: f64,
        num_snapshots: usize,
        seed: u64,
    ) -> Result<Self> {
        if source_angles_rad.is_empty() {
            return Err(Error::NoSources);
        }
        if source_angles_rad
            .iter()
            .any(|a| !a.is_finite() || a.abs() >= std::f64::consts::FRAC_PI_2)
        {
            return Err(Error::InvalidParameter(
                "source angles must lie strictly inside (-90, 90) degrees".into(),
            ));
        }
        if !(source_power >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "source_power must be >= 0, got {source_power}"
            )));
        }
        if !(noise_power > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "noise_power must be > 0, got {noise_power}"
            )));
        }
        if num_snapshots == 0 {
            return Err(Error::InvalidParameter("num_snapshots must be >= 1".into()));
        }
        Ok(Self {
            geometry,
            source_angles_rad,
            source_power,
            noise_power,
            num_snapshots,
            seed,
        })
    }

    /// Per-source power from an array-SNR operating point `asnr = N*P/sigma^2`.
    pub fn from_asnr_db(
        geometry: ArrayGeometry,
        source_angles_rad: Vec<f64>,
        asnr_db: f64,
        noise_power: f64,
        num_snapshots: usize,
        seed: u64,
    ) -> Result<Self> {
        let asnr = 10f64.powf(asnr_db / 10.0);
        let power = asnr * noise_power / geometry.num_sensors() as f64;
        Self::new(
            geometry,
            source_angles_rad,
            power,
            noise_power,
            num_snapshots,
            seed,
        )
    }

    pub fn geometry(&self) -> &ArrayGeometry {
        &self.geometry
    }

    pub fn source_angles_rad(&self) -> &[f64] {
        &self.source_angles_rad
    }

    pub fn source_power(&self) -> f64 {
        self.source_power
    }

    pub fn noise_power(&self) -> f64 {
        self.noise_power
    }

    pub fn num_snapshots(&self) -> usize {
        self.num_snapshots
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Array SNR `N*P/sigma^2`, linear.
    pub fn asnr_linear(&self) -> f64 {
        self.geometry.num_sensors() as f64 * self.source_power / self.noise_power
    }

    pub fn asnr_db(&self) -> f64 {
        10.0 * self.asnr_linear().log10()
    }

    /// Per-element SNR `P/sigma^2`, linear.
    pub fn element_snr_linear(&self) -> f64 {
        self.source_power / self.noise_power
    }
}

/// A covariance matrix together with how it was obtained.
#[derive(Debug, Clone)]
pub struct CovarianceEstimate {
    matrix: DMatrix<Complex64>,
    /// `None` for exact (model) covariances.
    num_snapshots: Option<usize>,
    space: Space,
}

impl CovarianceEstimate {
    /// Wrap a matrix, enforcing Hermitian symmetry to 1e-12 (relative).
    pub fn new(
        matrix: DMatrix<Complex64>,
        num_snapshots: Option<usize>,
        space: Space,
    ) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "covariance must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let scale = matrix.norm().max(f64::MIN_POSITIVE);
        let asym = (&matrix - matrix.adjoint()).norm() / scale;
        if asym > 1e-12 {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self {
            matrix,
            num_snapshots,
            space,
        })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn num_snapshots(&self) -> Option<usize> {
        self.num_snapshots
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// Same covariance rescaled by a positive factor.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            matrix: &self.matrix * Complex64::new(factor, 0.0),
            num_snapshots: self.num_snapshots,
            space: self.space,
        }
    }
}

fn complex_gaussian<R: Rng>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// Source amplitude statistics for snapshot generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignalModel {
    /// Circular complex Gaussian amplitudes (the analysis model).
    #[default]
    Gaussian,
    /// Constant-modulus amplitudes `sqrt(P) * exp(j*phi)`, phase uniform.
    ConstantModulus,
}

/// Draw `K` snapshots `x_k = A s_k + n_k`.
///
/// Sources and noise are i.i.d. circular complex Gaussians (each component:
/// two real normals of variance half the power). Bit-identical for identical
/// scenarios including the seed. Draw order per snapshot: source amplitudes,
/// then sensor noise.
pub fn generate_snapshots(scenario: &Scenario) -> DMatrix<Complex64> {
    generate_snapshots_with(scenario, SignalModel::Gaussian)
}

/// Snapshot generation with an explicit source-amplitude model.
pub fn generate_snapshots_with(scenario: &Scenario, model: SignalModel) -> DMatrix<Complex64> {
    let n = scenario.geometry.num_sensors();
    let k = scenario.num_snapshots;
    let a = direction_matrix(&scenario.geometry, &scenario.source_angles_rad)
        .expect("scenario guarantees at least one source");
    let m = scenario.source_angles_rad.len();
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
    let mut snapshots = DMatrix::zeros(n, k);
    let mut amplitudes = DVector::zeros(m);
    for col in 0..k {
        for s in 0..m {
            amplitudes[s] = match model {
                SignalModel::Gaussian => complex_gaussian(&mut rng, scenario.source_power),
                SignalModel::ConstantModulus => Complex64::from_polar(
                    scenario.source_power.sqrt(),
                    rng.random::<f64>() * 2.0 * std::f64::consts::PI,
                ),
            };
        }
        let mut x = &a * &amplitudes;
        for i in 0..n {
            x[i] += complex_gaussian(&mut rng, scenario.noise_power);
        }
        snapshots.set_column(col, &x);
    }
    snapshots
}

/// Exact model covariance `R = P * A A^H + sigma^2 I` (element space).
pub fn true_covariance(scenario: &Scenario) -> CovarianceEstimate {
    let n = scenario.geometry.num_sensors();
    let a = direction_matrix(&scenario.geometry, &scenario.source_angles_rad)
        .expect("scenario guarantees at least one source");
    let mut r = &a * a.adjoint() * Complex64::new(scenario.source_power, 0.0);
    for i in 0..n {
        r[(i, i)] += scenario.noise_power;
    }
    // Exact by construction; symmetrize away rounding from the outer product.
    let herm = (&r + r.adjoint()) * Complex64::new(0.5, 0.0);
    CovarianceEstimate::new(herm, None, Space::Element).expect("hermitian by construction")
}

/// Sample covariance `(1/K) sum x_k x_k^H` of the given snapshot columns.
pub fn sample_covariance(
    snapshots: &DMatrix<Complex64>,
    space: Space,
) -> Result<CovarianceEstimate> {
    if snapshots.ncols() == 0 {
        return Err(Error::EmptyInput("no snapshots".into()));
    }
    let k = snapshots.ncols() as f64;
    let r = snapshots * snapshots.adjoint() / Complex64::new(k, 0.0);
    let herm = (&r + r.adjoint()) * Complex64::new(0.5, 0.0);
    CovarianceEstimate::new(herm, Some(snapshots.ncols()), space)
}

/// Stateless per-trial seed derivation (splitmix64 over base and index), so
/// Monte Carlo trials are order-independent and parallelizable.
pub fn derive_seed(base_seed: u64, trial_index: u64) -> u64 {
    let mut z = base_seed
        .wrapping_add(0x9e3779b97f4a7c15)
        .wrapping_add(trial_index.wrapping_mul(0xbf58476d1ce4e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}
