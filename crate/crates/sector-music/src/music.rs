//! MUSIC: Hermitian eigendecomposition of covariance estimates, null
//! spectrum and spectrum over angle grids (element space and beamspace),
//! peak extraction, and the two-source resolution decision.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::array::{beamwidth_deg, steering_vector, ArrayGeometry};
use crate::beamspace::{beamspace_steering, WeightingMatrix};
use crate::error::{Error, Result};
use crate::signal::{CovarianceEstimate, Space};

/// Spectrum values are clamped to this floor before inversion.
pub const SPECTRUM_FLOOR: f64 = 1e-15;

/// Eigenpairs of a covariance estimate, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
    space: Space,
}

impl EigenDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Column i pairs with eigenvalue i.
    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Mean of the trailing (noise) eigenvalues below index `num_sources`.
    pub fn noise_power_estimate(&self, num_sources: usize) -> Result<f64> {
        if num_sources >= self.dim() {
            return Err(Error::NoNoiseSubspace(format!(
                "{num_sources} sources leave no noise eigenvalues in dimension {}",
                self.dim()
            )));
        }
        let tail = &self.eigenvalues[num_sources..];
        Ok(tail.iter().sum::<f64>() / tail.len() as f64)
    }
}

/// Eigendecomposition with descending eigenvalues and verified quality
/// (orthonormal columns to 1e-10, residual below 1e-9 of the spectral norm).
pub fn eig_hermitian(cov: &CovarianceEstimate) -> Result<EigenDecomposition> {
    let dim = cov.dim();
    let matrix = cov.matrix();
    let sym = nalgebra::SymmetricEigen::new(matrix.clone());

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| {
        sym.eigenvalues[j]
            .partial_cmp(&sym.eigenvalues[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut eigenvalues = Vec::with_capacity(dim);
    let mut eigenvectors = DMatrix::zeros(dim, dim);
    for (k, &src) in order.iter().enumerate() {
        let l = sym.eigenvalues[src];
        if !l.is_finite() {
            return Err(Error::Eigensolver(format!(
                "non-finite eigenvalue at position {k}"
            )));
        }
        eigenvalues.push(l);
        eigenvectors.set_column(k, &sym.eigenvectors.column(src));
    }

    // Quality gates; matrices here are small, so the checks are cheap.
    let scale = eigenvalues
        .iter()
        .fold(0.0f64, |acc, &l| acc.max(l.abs()))
        .max(f64::MIN_POSITIVE);
    let gram = eigenvectors.adjoint() * &eigenvectors;
    let eye = DMatrix::<Complex64>::identity(dim, dim);
    let ortho = (&gram - &eye).norm();
    if ortho > 1e-10 * dim as f64 {
        return Err(Error::Eigensolver(format!(
            "eigenvector orthonormality defect {ortho:.3e}"
        )));
    }
    for (k, &lambda) in eigenvalues.iter().enumerate() {
        let v = eigenvectors.column(k);
        let resid = (matrix * v - v * Complex64::new(lambda, 0.0)).norm();
        if resid > 1e-9 * scale {
            return Err(Error::Eigensolver(format!(
                "eigenpair {k} residual {resid:.3e} exceeds 1e-9 * {scale:.3e}"
            )));
        }
    }

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
        space: cov.space(),
    })
}

/// `1 - sum_{i<M} |e_i^H u|^2` for the unit-normalized manifold vector `u`.
///
/// A zero manifold vector (steering direction fully blocked by the
/// prefilter) carries no signal content and yields 1.
pub fn null_from_manifold(
    eig: &EigenDecomposition,
    manifold: &DVector<Complex64>,
    num_sources: usize,
) -> Result<f64> {
    if num_sources >= eig.dim() {
        return Err(Error::NoNoiseSubspace(format!(
            "{num_sources} sources in dimension {}",
            eig.dim()
        )));
    }
    if manifold.len() != eig.dim() {
        return Err(Error::DimensionMismatch(format!(
            "manifold length {} vs decomposition dimension {}",
            manifold.len(),
            eig.dim()
        )));
    }
    let norm = manifold.norm();
    if norm == 0.0 {
        return Ok(1.0);
    }
    let mut projected = 0.0;
    for i in 0..num_sources {
        let c = eig.eigenvectors.column(i).dotc(manifold) / norm;
        projected += c.norm_sqr();
    }
    Ok((1.0 - projected).clamp(0.0, 1.0))
}

/// Element-space null spectrum at one angle.
pub fn null_spectrum_element(
    eig: &EigenDecomposition,
    geom: &ArrayGeometry,
    alpha_rad: f64,
    num_sources: usize,
) -> Result<f64> {
    null_from_manifold(eig, &steering_vector(geom, alpha_rad), num_sources)
}

/// Beamspace null spectrum at one angle (manifold `W^H a(alpha)`).
pub fn null_spectrum_beamspace(
    eig: &EigenDecomposition,
    w: &WeightingMatrix,
    geom: &ArrayGeometry,
    alpha_rad: f64,
    num_sources: usize,
) -> Result<f64> {
    null_from_manifold(eig, &beamspace_steering(w, geom, alpha_rad), num_sources)
}

/// Which manifold the spectrum is evaluated on.
#[derive(Debug, Clone, Copy)]
pub enum ManifoldContext<'a> {
    Element(&'a ArrayGeometry),
    Beamspace(&'a WeightingMatrix, &'a ArrayGeometry),
}

impl ManifoldContext<'_> {
    pub fn space(&self) -> Space {
        match self {
            ManifoldContext::Element(_) => Space::Element,
            ManifoldContext::Beamspace(_, _) => Space::Beamspace,
        }
    }

    fn vector(&self, alpha_rad: f64) -> DVector<Complex64> {
        match self {
            ManifoldContext::Element(geom) => steering_vector(geom, alpha_rad),
            ManifoldContext::Beamspace(w, geom) => beamspace_steering(w, geom, alpha_rad),
        }
    }
}

/// An inclusive angle grid in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start_deg: f64,
    pub stop_deg: f64,
    pub step_deg: f64,
}

impl GridSpec {
    pub fn new(start_deg: f64, stop_deg: f64, step_deg: f64) -> Result<Self> {
        if !(step_deg > 0.0) || !(stop_deg > start_deg) {
            return Err(Error::InvalidParameter(format!(
                "grid needs stop > start and step > 0, got [{start_deg}, {stop_deg}] step {step_deg}"
            )));
        }
        Ok(Self {
            start_deg,
            stop_deg,
            step_deg,
        })
    }

    /// Default threshold-experiment grid: the midpoint of the two DOAs plus
    /// and minus `half_span_beamwidths` beamwidths, step beamwidth/200.
    pub fn around_midpoint(
        geom: &ArrayGeometry,
        alpha1_deg: f64,
        alpha2_deg: f64,
        half_span_beamwidths: f64,
    ) -> Result<Self> {
        let bw = beamwidth_deg(geom);
        let mid = 0.5 * (alpha1_deg + alpha2_deg);
        Self::new(
            mid - half_span_beamwidths * bw,
            mid + half_span_beamwidths * bw,
            bw / 200.0,
        )
    }

    pub fn angles_deg(&self) -> Vec<f64> {
        let count = ((self.stop_deg - self.start_deg) / self.step_deg + 1.0 + 1e-9) as usize;
        (0..count)
            .map(|i| self.start_deg + i as f64 * self.step_deg)
            .collect()
    }
}

/// Precomputed unit manifold vectors over a grid. This is the reusable part
/// of spectrum evaluation: building it once amortizes the steering math
/// across Monte Carlo trials.
#[derive(Debug, Clone)]
pub struct ManifoldGrid {
    angles_deg: Vec<f64>,
    /// dim x G, unit columns (zero where the manifold vanishes).
    vectors: DMatrix<Complex64>,
    space: Space,
}

impl ManifoldGrid {
    pub fn build(context: &ManifoldContext<'_>, grid: &GridSpec) -> Result<Self> {
        let angles_deg = grid.angles_deg();
        if angles_deg.is_empty() {
            return Err(Error::EmptyInput("empty angle grid".into()));
        }
        let first = context.vector(angles_deg[0].to_radians());
        let mut vectors = DMatrix::zeros(first.len(), angles_deg.len());
        for (g, a) in angles_deg.iter().enumerate() {
            let mut v = context.vector(a.to_radians());
            let n = v.norm();
            if n > 0.0 {
                v /= Complex64::new(n, 0.0);
            }
            vectors.set_column(g, &v);
        }
        Ok(Self {
            angles_deg,
            vectors,
            space: context.space(),
        })
    }

    pub fn angles_deg(&self) -> &[f64] {
        &self.angles_deg
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// Null-spectrum values over the grid for one decomposition.
    pub fn null_spectrum(&self, eig: &EigenDecomposition, num_sources: usize) -> Result<Vec<f64>> {
        if num_sources >= eig.dim() {
            return Err(Error::NoNoiseSubspace(format!(
                "{num_sources} sources in dimension {}",
                eig.dim()
            )));
        }
        if self.vectors.nrows() != eig.dim() {
            return Err(Error::DimensionMismatch(format!(
                "grid manifold dimension {} vs decomposition dimension {}",
                self.vectors.nrows(),
                eig.dim()
            )));
        }
        let signal = eig.eigenvectors.columns(0, num_sources);
        let proj = signal.adjoint() * &self.vectors; // num_sources x G
        Ok((0..self.angles_deg.len())
            .map(|g| {
                let captured: f64 = proj.column(g).iter().map(|c| c.norm_sqr()).sum();
                (1.0 - captured).clamp(0.0, 1.0)
            })
            .collect())
    }
}

/// Null spectrum and spectrum sampled over an angle grid.
#[derive(Debug, Clone)]
pub struct SpectrumGrid {
    pub angles_deg: Vec<f64>,
    pub null_values: Vec<f64>,
    pub spectrum_values: Vec<f64>,
    pub space: Space,
}

/// Evaluate `D` and `P = 1/max(D, floor)` over a grid.
pub fn evaluate_grid(
    eig: &EigenDecomposition,
    context: &ManifoldContext<'_>,
    grid: &GridSpec,
    num_sources: usize,
) -> Result<SpectrumGrid> {
    let manifold = ManifoldGrid::build(context, grid)?;
    let null_values = manifold.null_spectrum(eig, num_sources)?;
    let spectrum_values = null_values
        .iter()
        .map(|d| 1.0 / d.max(SPECTRUM_FLOOR))
        .collect();
    Ok(SpectrumGrid {
        angles_deg: manifold.angles_deg.clone(),
        null_values,
        spectrum_values,
        space: manifold.space,
    })
}

/// A strict interior local maximum of the spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub angle_deg: f64,
    pub height: f64,
}

/// Interior local maxima of `spectrum_values`, tallest first. A plateau
/// counts once and reports its leftmost sample.
pub fn find_peaks(grid: &SpectrumGrid) -> Vec<Peak> {
    find_peaks_in(&grid.angles_deg, &grid.spectrum_values)
}

pub(crate) fn find_peaks_in(angles_deg: &[f64], values: &[f64]) -> Vec<Peak> {
    let n = values.len();
    let mut peaks = Vec::new();
    if n < 3 {
        return peaks;
    }
    let mut i = 1;
    while i < n - 1 {
        if values[i] > values[i - 1] {
            // Walk across any plateau starting at i.
            let mut j = i;
            while j + 1 < n && values[j + 1] == values[i] {
                j += 1;
            }
            if j < n - 1 && values[j + 1] < values[i] {
                peaks.push(Peak {
                    angle_deg: angles_deg[i],
                    height: values[i],
                });
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks.sort_by(|a, b| {
        b.height
            .partial_cmp(&a.height)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    peaks
}

/// Two-source resolution decision: at least two peaks inside the closed
/// window of one beamwidth centered on the midpoint of the hypothesized DOAs.
pub fn resolved(peaks: &[Peak], alpha1_deg: f64, alpha2_deg: f64, geom: &ArrayGeometry) -> bool {
    resolved_with_beamwidth(peaks, alpha1_deg, alpha2_deg, beamwidth_deg(geom))
}

pub fn resolved_with_beamwidth(
    peaks: &[Peak],
    alpha1_deg: f64,
    alpha2_deg: f64,
    beamwidth_deg: f64,
) -> bool {
    let mid = 0.5 * (alpha1_deg + alpha2_deg);
    let half = beamwidth_deg / 2.0;
    let inside = peaks
        .iter()
        .filter(|p| p.angle_deg >= mid - half && p.angle_deg <= mid + half)
        .count();
    inside >= 2
}
