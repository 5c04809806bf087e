//! Gibbs states `exp(-βH)/Z` (k_B = 1).

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigendecompose, ComplexMatrix, SpectralDecomposition};

#[derive(Debug, Clone)]
pub struct ThermalState {
    pub density: ComplexMatrix,
    pub beta: f64,
    pub partition_z: f64,
    /// `ln Z`, finite even when `partition_z` over- or underflows.
    pub log_partition: f64,
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidBeta(beta))
    }
}

/// Boltzmann weights `e^{-β(E_n - E_min)}` normalised to one, plus `ln Z`.
pub fn boltzmann_weights(energies: &[f64], beta: f64) -> (Vec<f64>, f64) {
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let raw: Vec<f64> = energies.iter().map(|&e| (-beta * (e - e_min)).exp()).collect();
    let sum: f64 = raw.iter().sum();
    let log_z = -beta * e_min + sum.ln();
    (raw.into_iter().map(|w| w / sum).collect(), log_z)
}

/// Thermal state of an already diagonalised Hamiltonian.
pub fn gibbs_from_spectrum(sd: &SpectralDecomposition, beta: f64) -> Result<ThermalState> {
    check_beta(beta)?;
    let (weights, log_z) = boltzmann_weights(&sd.eigenvalues, beta);
    let n = sd.dim();
    let v = &sd.eigenvectors;
    let mut density = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            density[(i, j)] = (0..n).map(|k| v[(i, k)] * weights[k] * v[(j, k)].conj()).sum();
        }
    }
    Ok(ThermalState { density, beta, partition_z: log_z.exp(), log_partition: log_z })
}

pub fn gibbs_state(h: &ComplexMatrix, beta: f64) -> Result<ThermalState> {
    check_beta(beta)?;
    gibbs_from_spectrum(&hermitian_eigendecompose(h)?, beta)
}

/// Thermal energy `Tr[ρ_β H]` from the spectrum alone.
pub fn thermal_energy(energies: &[f64], beta: f64) -> f64 {
    let (weights, _) = boltzmann_weights(energies, beta);
    weights.iter().zip(energies).map(|(w, e)| w * e).sum()
}

/// Populations `⟨ψ_n|ρ|ψ_n⟩` of the basis vectors in `sd`.
pub fn occupation_probabilities(ts: &ThermalState, sd: &SpectralDecomposition) -> Result<Vec<f64>> {
    populations(&ts.density, sd)
}

pub(crate) fn populations(rho: &ComplexMatrix, sd: &SpectralDecomposition) -> Result<Vec<f64>> {
    if rho.rows() != sd.dim() || !rho.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} against basis of dimension {}",
            rho.rows(),
            sd.dim()
        )));
    }
    Ok((0..sd.dim())
        .map(|k| rho.expectation(&sd.vector(k)).clamp(0.0, 1.0))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::{FieldPoint, WorkingMedium};
    use crate::spin::SpinValue;

    fn half_pair(j: f64) -> WorkingMedium {
        WorkingMedium::new(SpinValue::HALF, SpinValue::HALF, j).unwrap()
    }

    #[test]
    fn zero_hamiltonian_is_maximally_mixed() {
        let ts = gibbs_state(&ComplexMatrix::zeros(4, 4), 1.0).unwrap();
        assert!(ts.density.max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25)) < 1e-15);
        assert!((ts.partition_z - 4.0).abs() < 1e-12);
        let sd = hermitian_eigendecompose(&ComplexMatrix::zeros(4, 4)).unwrap();
        let p = occupation_probabilities(&ts, &sd).unwrap();
        assert!(p.iter().all(|x| (x - 0.25).abs() < 1e-15));
    }

    #[test]
    fn uncoupled_zero_field_pair() {
        let h = half_pair(0.0).build_hamiltonian(FieldPoint(0.0));
        let ts = gibbs_state(&h, 1.0).unwrap();
        assert!(ts.density.max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25)) < 1e-15);
    }

    #[test]
    fn boltzmann_populations_match_direct_weights() {
        let (j, b) = (0.5, 3.0);
        let m = half_pair(j);
        let sd = m.spectrum(FieldPoint(b)).unwrap();
        let ts = gibbs_from_spectrum(&sd, 1.0).unwrap();
        let p = occupation_probabilities(&ts, &sd).unwrap();
        // oracle: direct exponential sum over the closed-form levels, ascending
        let levels = [2.0 * j - 2.0 * b, -6.0 * j, 2.0 * j, 2.0 * j + 2.0 * b];
        let z: f64 = levels.iter().map(|e| (-e).exp()).sum();
        for (got, e) in p.iter().zip(levels) {
            assert!((got - (-e).exp() / z).abs() < 1e-12);
        }
        // table level E_1 = -6J sits second in ascending order once B > 4J
        assert!((p[1] - 3f64.exp() / z).abs() < 1e-12);
        assert!((ts.partition_z - z).abs() < 1e-12 * z);
        let total: f64 = p.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn low_temperature_limit() {
        let m = half_pair(0.4);
        let sd = m.spectrum(FieldPoint(1.0)).unwrap();
        let ts = gibbs_from_spectrum(&sd, 200.0).unwrap();
        let p = occupation_probabilities(&ts, &sd).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn state_invariants_and_monotonic_populations() {
        let m = WorkingMedium::new(SpinValue::ONE, SpinValue::THREE_HALVES, 0.3).unwrap();
        let h = m.build_hamiltonian(FieldPoint(1.7));
        let sd = hermitian_eigendecompose(&h).unwrap();
        let ts = gibbs_from_spectrum(&sd, 0.8).unwrap();
        assert!(ts.density.hermitian_deviation() < 1e-12);
        assert!((ts.density.trace().re - 1.0).abs() < 1e-12);
        assert!(ts.density.commutator(&h).max_abs() < 1e-10);
        let rho_sd = hermitian_eigendecompose(&ts.density).unwrap();
        assert!(rho_sd.eigenvalues[0] > -1e-12);
        let p = occupation_probabilities(&ts, &sd).unwrap();
        for k in 1..p.len() {
            if sd.eigenvalues[k] - sd.eigenvalues[k - 1] > 1e-9 {
                assert!(p[k - 1] > p[k]);
            }
        }
    }

    #[test]
    fn energy_increases_with_temperature() {
        let sd = half_pair(0.6).spectrum(FieldPoint(2.0)).unwrap();
        let mut last = f64::NEG_INFINITY;
        for t in [0.05, 0.2, 0.5, 1.0, 2.0, 10.0] {
            let u = thermal_energy(&sd.eigenvalues, 1.0 / t);
            assert!(u >= last);
            last = u;
        }
    }

    #[test]
    fn large_energies_do_not_overflow() {
        let sd = hermitian_eigendecompose(&ComplexMatrix::from_diagonal(&[-2000.0, -1990.0])).unwrap();
        let ts = gibbs_from_spectrum(&sd, 1.0).unwrap();
        assert!(ts.density.as_slice().iter().all(|z| z.re.is_finite()));
        assert!((ts.log_partition - (2000.0 + (1.0 + (-10f64).exp()).ln())).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_beta() {
        let h = ComplexMatrix::zeros(2, 2);
        for beta in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(gibbs_state(&h, beta), Err(Error::InvalidBeta(_))));
        }
    }
}
