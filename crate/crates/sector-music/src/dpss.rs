//! Discrete prolate spheroidal sequences.
//!
//! The k-th sequence of order N and half-bandwidth B is the k-th eigenvector
//! of the N x N sinc concentration kernel, taken in decreasing eigenvalue
//! order. Its eigenvalue is the fraction of the sequence's energy inside the
//! spatial band (-B, B).

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// A bank of the first `n` prolate sequences of order `N`.
#[derive(Debug, Clone)]
pub struct DpssBank {
    order: usize,
    half_bandwidth: f64,
    /// N x n, column k is the k-th sequence (unit norm, sign-fixed).
    sequences: DMatrix<f64>,
    /// Concentration eigenvalues, strictly decreasing, each in (0, 1).
    concentrations: Vec<f64>,
}

impl DpssBank {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn half_bandwidth(&self) -> f64 {
        self.half_bandwidth
    }

    pub fn count(&self) -> usize {
        self.concentrations.len()
    }

    pub fn sequences(&self) -> &DMatrix<f64> {
        &self.sequences
    }

    pub fn sequence(&self, k: usize) -> DVector<f64> {
        self.sequences.column(k).into_owned()
    }

    pub fn concentrations(&self) -> &[f64] {
        &self.concentrations
    }
}

fn check_half_bandwidth(half_bandwidth: f64) -> Result<()> {
    if !(half_bandwidth > 0.0 && half_bandwidth < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "half_bandwidth must lie in (0, 0.5), got {half_bandwidth}"
        )));
    }
    Ok(())
}

/// Sinc concentration kernel: `C[m][n] = sin(2*pi*B*(m-n)) / (pi*(m-n))`,
/// with diagonal `2B`. Symmetric positive definite, trace `2*B*N`.
pub fn sinc_kernel(order: usize, half_bandwidth: f64) -> Result<DMatrix<f64>> {
    check_half_bandwidth(half_bandwidth)?;
    if order == 0 {
        return Err(Error::InvalidParameter("order must be >= 1".into()));
    }
    Ok(DMatrix::from_fn(order, order, |m, n| {
        if m == n {
            2.0 * half_bandwidth
        } else {
            let d = m as f64 - n as f64;
            (2.0 * std::f64::consts::PI * half_bandwidth * d).sin() / (std::f64::consts::PI * d)
        }
    }))
}

/// Compute the first `count` prolate sequences by dense symmetric
/// eigendecomposition of the sinc kernel.
///
/// Columns are sign-fixed so the first element of magnitude above
/// `1e-12 * max|v|` is positive, making the bank deterministic.
pub fn compute_bank(order: usize, half_bandwidth: f64, count: usize) -> Result<DpssBank> {
    if count == 0 || count > order {
        return Err(Error::InvalidParameter(format!(
            "sequence count must satisfy 1 <= count <= order, got {count} for order {order}"
        )));
    }
    let kernel = sinc_kernel(order, half_bandwidth)?;
    let eig = SymmetricEigen::new(kernel.clone());

    let mut idx: Vec<usize> = (0..order).collect();
    idx.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut sequences = DMatrix::zeros(order, count);
    let mut concentrations = Vec::with_capacity(count);
    for (k, &src) in idx.iter().take(count).enumerate() {
        let lambda = eig.eigenvalues[src];
        if !lambda.is_finite() {
            return Err(Error::Eigensolver(format!(
                "non-finite concentration eigenvalue at index {k}"
            )));
        }
        let mut v = eig.eigenvectors.column(src).into_owned();
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::Eigensolver(format!(
                "zero eigenvector at index {k}"
            )));
        }
        v /= norm;
        let max_abs = v.amax();
        if let Some(first) = v.iter().find(|x| x.abs() > 1e-12 * max_abs) {
            if *first < 0.0 {
                v = -v;
            }
        }
        sequences.set_column(k, &v);
        concentrations.push(lambda);
    }

    Ok(DpssBank {
        order,
        half_bandwidth,
        sequences,
        concentrations,
    })
}

/// Fraction of a sequence's energy inside (-B, B): the Rayleigh quotient
/// `(y' C y) / (y' y)` of the sinc kernel.
pub fn fractional_energy(y: &DVector<f64>, half_bandwidth: f64) -> Result<f64> {
    check_half_bandwidth(half_bandwidth)?;
    let norm_sq = y.norm_squared();
    if norm_sq == 0.0 {
        return Err(Error::EmptyInput("zero vector has no band energy".into()));
    }
    let kernel = sinc_kernel(y.len(), half_bandwidth)?;
    Ok(y.dot(&(&kernel * y)) / norm_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kernel_diagonal_and_offdiagonal_values() {
        let b = 0.0781;
        let c = sinc_kernel(8, b).unwrap();
        for i in 0..8 {
            assert_relative_eq!(c[(i, i)], 2.0 * b, epsilon = 1e-15);
        }
        // Scalar oracle for C[0][1].
        let oracle = (2.0 * std::f64::consts::PI * b).sin() / std::f64::consts::PI;
        assert_relative_eq!(c[(0, 1)], oracle, epsilon = 1e-15);
        assert_relative_eq!(oracle, 0.150006, epsilon = 1e-6);
        assert_eq!(c.transpose(), c);
    }

    #[test]
    fn kernel_trace_identity() {
        let c = sinc_kernel(16, 0.0781).unwrap();
        assert_relative_eq!(c.trace(), 2.0 * 0.0781 * 16.0, epsilon = 1e-12);
    }

    #[test]
    fn kernel_rejects_bad_bandwidth() {
        assert!(sinc_kernel(8, 0.0).is_err());
        assert!(sinc_kernel(8, 0.5).is_err());
        assert!(sinc_kernel(8, -0.1).is_err());
        assert!(sinc_kernel(8, 0.7).is_err());
    }

    #[test]
    fn kernel_eigenvalues_in_unit_interval() {
        // Trailing eigenvalues decay below machine epsilon, so full-order
        // banks are checked against (0,1) only up to rounding at zero.
        for n in [4usize, 8, 16] {
            let bank = compute_bank(n, 0.0781, n).unwrap();
            for &l in bank.concentrations() {
                assert!(l > -1e-12 && l < 1.0, "concentration {l} out of range");
            }
            let leading = (2.0 * 0.0781 * n as f64).floor() as usize;
            for &l in &bank.concentrations()[..=leading] {
                assert!(l > 0.0 && l < 1.0, "leading concentration {l} out of (0,1)");
            }
        }
    }

    #[test]
    fn order_one_bank() {
        let bank = compute_bank(1, 0.1, 1).unwrap();
        assert_relative_eq!(bank.sequence(0)[0].abs(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(bank.concentrations()[0], 0.2, epsilon = 1e-12);
    }

    #[test]
    fn bank_orthonormality_and_residual() {
        for (n, count) in [(8usize, 3usize), (16, 3), (12, 12)] {
            let b = 0.0781;
            let bank = compute_bank(n, b, count).unwrap();
            let v = bank.sequences();
            let gram = v.transpose() * v;
            for i in 0..count {
                for j in 0..count {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (gram[(i, j)] - expect).abs() < 1e-10,
                        "gram[{i}][{j}] = {}",
                        gram[(i, j)]
                    );
                }
            }
            let kernel = sinc_kernel(n, b).unwrap();
            let norm = bank.concentrations()[0].abs().max(1.0_f64.min(2.0 * b * n as f64));
            for k in 0..count {
                let vk = bank.sequence(k);
                let resid = (&kernel * &vk - bank.concentrations()[k] * &vk).norm();
                assert!(resid <= 1e-9 * norm, "residual {resid} at k={k}");
            }
        }
    }

    #[test]
    fn concentrations_strictly_decreasing() {
        let bank = compute_bank(16, 0.0781, 6).unwrap();
        for w in bank.concentrations().windows(2) {
            assert!(w[0] > w[1], "not strictly decreasing: {w:?}");
        }
    }

    #[test]
    fn eight_sensor_bank_concentration_profile() {
        // 2BN ~ 1.25, so only the first sequence is strongly concentrated.
        let bank = compute_bank(8, 0.0781, 3).unwrap();
        let l = bank.concentrations();
        assert!(l[0] > 0.85, "lambda0 = {}", l[0]);
        assert!(l[2] < 0.15, "lambda2 = {}", l[2]);
    }

    #[test]
    fn sixteen_sensor_bank_concentration_profile() {
        // 2BN ~ 2.5: the first two sequences fit the band, the third sits
        // at the transition edge.
        let bank = compute_bank(16, 0.0781, 3).unwrap();
        let l = bank.concentrations();
        assert!(l[0] > 0.99, "lambda0 = {}", l[0]);
        assert!(l[1] > 0.9, "lambda1 = {}", l[1]);
        assert!(l[2] > 0.4, "lambda2 = {}", l[2]);
    }

    #[test]
    fn rayleigh_quotient_consistency() {
        let b = 0.0781;
        let bank = compute_bank(8, b, 3).unwrap();
        for k in 0..3 {
            let e = fractional_energy(&bank.sequence(k), b).unwrap();
            assert_relative_eq!(e, bank.concentrations()[k], epsilon = 1e-10);
        }
    }

    #[test]
    fn fractional_energy_maximized_by_first_sequence() {
        let b = 0.0781;
        let bank = compute_bank(8, b, 1).unwrap();
        let lambda0 = bank.concentrations()[0];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let y = DVector::from_fn(8, |_, _| rng.random::<f64>() - 0.5);
            if y.norm() < 1e-9 {
                continue;
            }
            let e = fractional_energy(&y, b).unwrap();
            assert!(e > 0.0 && e < 1.0);
            assert!(e <= lambda0 + 1e-12, "random energy {e} beats lambda0 {lambda0}");
        }
    }

    #[test]
    fn fractional_energy_rejects_zero_vector() {
        let y = DVector::zeros(8);
        assert!(fractional_energy(&y, 0.1).is_err());
    }

    #[test]
    fn concentration_grows_with_order() {
        let mut last = 0.0;
        for n in [8usize, 16, 32, 64] {
            let bank = compute_bank(n, 0.0781, 1).unwrap();
            let l0 = bank.concentrations()[0];
            assert!(l0 > last, "lambda0 not increasing at N={n}: {l0} <= {last}");
            last = l0;
        }
    }

    #[test]
    fn sign_change_counts_follow_sequence_index() {
        // Classical Sturm property of the kernel's eigenvectors.
        for n in [6usize, 9, 12] {
            let bank = compute_bank(n, 0.12, n).unwrap();
            for k in 0..n {
                let v = bank.sequence(k);
                let threshold = 1e-9 * v.amax();
                let signs: Vec<f64> = v.iter().copied().filter(|x| x.abs() > threshold).collect();
                let changes = signs
                    .windows(2)
                    .filter(|w| w[0].signum() != w[1].signum())
                    .count();
                assert_eq!(changes, k, "N={n}, k={k}");
            }
        }
    }

    #[test]
    fn sign_convention_first_significant_element_positive() {
        let bank = compute_bank(12, 0.0781, 12).unwrap();
        for k in 0..12 {
            let v = bank.sequence(k);
            let first = v
                .iter()
                .find(|x| x.abs() > 1e-12 * v.amax())
                .copied()
                .unwrap();
            assert!(first > 0.0, "column {k} starts negative");
        }
    }

    #[test]
    fn bank_count_validation() {
        assert!(compute_bank(8, 0.0781, 0).is_err());
        assert!(compute_bank(8, 0.0781, 9).is_err());
    }
}
