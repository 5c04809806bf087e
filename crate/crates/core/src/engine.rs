//! The four-stroke measurement-driven cycle at one parameter point.
//!
//! Strokes: thermal state `ρ₀` at `B1`, field ramp `B1 → B2` with the state
//! frozen (work `W1`), non-selective measurement at `B2` (energy `QM`), ramp
//! `B2 → B1` (work `W2`) and re-thermalisation to `ρ₀` (heat `QT`). All
//! energetics are traces, so they do not depend on how degenerate eigenspaces
//! are resolved.

use crate::error::{Error, Result};
use crate::linalg::{
    fix_phase, hermitian_eigendecompose, trace_product, ComplexMatrix, SpectralDecomposition,
};
use crate::measurement::{MeasurementScheme, TransitionMatrix};
use crate::medium::{FieldPoint, WorkingMedium};
use crate::thermal::{boltzmann_weights, check_beta, gibbs_from_spectrum, populations};

/// `QM` at or below this value leaves the efficiency undefined.
pub const EFFICIENCY_THRESHOLD: f64 = 1e-12;

/// One parameter point of the engine.
#[derive(Debug, Clone)]
pub struct CyclePoint {
    pub medium: WorkingMedium,
    pub b1: FieldPoint,
    pub b2: FieldPoint,
    pub beta: f64,
    pub scheme: MeasurementScheme,
}

impl CyclePoint {
    pub fn new(
        medium: WorkingMedium,
        b1: f64,
        b2: f64,
        beta: f64,
        scheme: MeasurementScheme,
    ) -> Result<Self> {
        let b1 = FieldPoint::new(b1)?;
        let b2 = FieldPoint::new(b2)?;
        check_beta(beta)?;
        if scheme.dim() != medium.dimension() {
            return Err(Error::DimensionMismatch(format!(
                "scheme acts on dimension {} but the medium has dimension {}",
                scheme.dim(),
                medium.dimension()
            )));
        }
        Ok(Self { medium, b1, b2, beta, scheme })
    }

    fn validate(&self) -> Result<()> {
        check_beta(self.beta)?;
        FieldPoint::new(self.b1.0)?;
        FieldPoint::new(self.b2.0)?;
        if self.scheme.dim() != self.medium.dimension() {
            return Err(Error::DimensionMismatch(format!(
                "scheme acts on dimension {} but the medium has dimension {}",
                self.scheme.dim(),
                self.medium.dimension()
            )));
        }
        Ok(())
    }
}

/// Efficiency `η = W_t / Q_M`, or a flag when `Q_M` is too small to divide by.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Efficiency {
    Defined(f64),
    Undefined,
}

impl Efficiency {
    pub fn value(self) -> Option<f64> {
        match self {
            Efficiency::Defined(v) => Some(v),
            Efficiency::Undefined => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CycleResult {
    pub w1: f64,
    pub w2: f64,
    /// Extracted work `-(w1 + w2)`.
    pub wt: f64,
    pub qm: f64,
    pub qt: f64,
    pub eta: Efficiency,
    /// Transitions between eigenstates of the common eigenbasis.
    pub transition: TransitionMatrix,
    /// Populations of the common eigenbasis after the measurement.
    pub post_probs: Vec<f64>,
}

impl CycleResult {
    pub fn efficiency(&self) -> Result<f64> {
        self.eta.value().ok_or(Error::EfficiencyUndefined { qm: self.qm })
    }

    /// `|W1 + W2 + QM + QT|`.
    pub fn first_law_residual(&self) -> f64 {
        (self.w1 + self.w2 + self.qm + self.qt).abs()
    }
}

/// Operators shared by the cycle and the analysis routines.
pub(crate) struct CycleStates {
    pub h1: ComplexMatrix,
    pub h2: ComplexMatrix,
    pub rho0: ComplexMatrix,
    pub rho_m: ComplexMatrix,
}

pub(crate) fn cycle_states(p: &CyclePoint) -> Result<CycleStates> {
    p.validate()?;
    let h1 = p.medium.build_hamiltonian(p.b1);
    let h2 = p.medium.build_hamiltonian(p.b2);
    let rho0 = gibbs_from_spectrum(&hermitian_eigendecompose(&h1)?, p.beta)?.density;
    let rho_m = p.scheme.apply_nonselective(&rho0)?;
    Ok(CycleStates { h1, h2, rho0, rho_m })
}

fn real_trace(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    Ok(trace_product(a, b)?.re)
}

pub fn run_cycle(p: &CyclePoint) -> Result<CycleResult> {
    let CycleStates { h1, h2, rho0, rho_m } = cycle_states(p)?;
    let w1 = real_trace(&rho0, &(&h2 - &h1))?;
    let qm = real_trace(&(&rho_m - &rho0), &h2)?;
    let w2 = real_trace(&rho_m, &(&h1 - &h2))?;
    let qt = real_trace(&(&rho0 - &rho_m), &h1)?;
    let wt = -(w1 + w2);
    let eta = if qm > EFFICIENCY_THRESHOLD { Efficiency::Defined(wt / qm) } else { Efficiency::Undefined };
    let basis = common_eigenbasis(p)?;
    let transition = p.scheme.transition_matrix(&basis.decomposition)?;
    let post_probs = populations(&rho_m, &basis.decomposition)?;
    Ok(CycleResult { w1, w2, wt, qm, qt, eta, transition, post_probs })
}

/// Orthonormal basis diagonalising both `H(B1)` and `H(B2)`.
#[derive(Debug, Clone)]
pub struct CommonEigenbasis {
    /// Eigenvalues are the energies at `B2`, ascending; ties are ordered by
    /// their energy at `B1`.
    pub decomposition: SpectralDecomposition,
    /// Energies at `B1` of the same basis vectors.
    pub initial_energies: Vec<f64>,
}

impl CommonEigenbasis {
    pub fn final_energies(&self) -> &[f64] {
        &self.decomposition.eigenvalues
    }
}

/// Diagonalises `H(B2)`, then resolves each degenerate cluster with `H(B1)`.
pub fn common_eigenbasis(p: &CyclePoint) -> Result<CommonEigenbasis> {
    let h1 = p.medium.build_hamiltonian(p.b1);
    let h2 = p.medium.build_hamiltonian(p.b2);
    if h1.commutator(&h2).max_abs() > 1e-10 * (1.0 + h1.max_abs() * h2.max_abs()) {
        return Err(Error::InvalidInput("Hamiltonians at B1 and B2 do not commute".into()));
    }
    let sd = hermitian_eigendecompose(&h2)?;
    let n = sd.dim();
    let tol = 1e-9 * (1.0 + h2.max_abs());
    let mut vectors = sd.eigenvectors.clone();
    for range in sd.clusters(tol) {
        if range.len() < 2 {
            continue;
        }
        let k = range.len();
        // H(B1) restricted to the cluster
        let mut block = ComplexMatrix::zeros(k, k);
        for (a, ca) in range.clone().enumerate() {
            let hv = h1.matvec(&sd.eigenvectors.column(ca));
            for (b, cb) in range.clone().enumerate() {
                let u = sd.eigenvectors.column(cb);
                block[(b, a)] = u.iter().zip(&hv).map(|(x, y)| x.conj() * y).sum();
            }
        }
        let inner = hermitian_eigendecompose(&block)?;
        for (a, target) in range.clone().enumerate() {
            let mut col = vec![num_complex::Complex64::new(0.0, 0.0); n];
            for (b, src) in range.clone().enumerate() {
                let coef = inner.eigenvectors[(b, a)];
                for (i, c) in col.iter_mut().enumerate() {
                    *c += sd.eigenvectors[(i, src)] * coef;
                }
            }
            fix_phase(&mut col);
            vectors.set_column(target, &col);
        }
    }
    let mut final_energies = Vec::with_capacity(n);
    let mut initial_energies = Vec::with_capacity(n);
    for k in 0..n {
        let v = vectors.column(k);
        final_energies.push(h2.expectation(&v));
        initial_energies.push(h1.expectation(&v));
    }
    Ok(CommonEigenbasis {
        decomposition: SpectralDecomposition { eigenvalues: final_energies, eigenvectors: vectors },
        initial_energies,
    })
}

/// Pairwise contributions to the net work `W = W1 + W2`.
#[derive(Debug, Clone)]
pub struct WorkDecomposition {
    pub dim: usize,
    /// Row-major `W_mn`.
    pub terms: Vec<f64>,
    /// Row-major `E_m(B1) - E_n(B1)`.
    pub delta_i: Vec<f64>,
    /// Row-major `E_m(B2) - E_n(B2)`.
    pub delta_f: Vec<f64>,
}

impl WorkDecomposition {
    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.terms[m * self.dim + n]
    }

    pub fn total(&self) -> f64 {
        self.terms.iter().sum()
    }
}

struct EigenbasisData {
    e_initial: Vec<f64>,
    e_final: Vec<f64>,
    probs: Vec<f64>,
    transition: TransitionMatrix,
}

fn eigenbasis_data(p: &CyclePoint) -> Result<EigenbasisData> {
    p.validate()?;
    if !p.scheme.is_unital() {
        return Err(Error::InvalidInput(
            "eigenbasis energetics need a unital scheme (symmetric transition matrix)".into(),
        ));
    }
    let basis = common_eigenbasis(p)?;
    let (probs, _) = boltzmann_weights(&basis.initial_energies, p.beta);
    let transition = p.scheme.transition_matrix(&basis.decomposition)?;
    Ok(EigenbasisData {
        e_final: basis.decomposition.eigenvalues.clone(),
        e_initial: basis.initial_energies,
        probs,
        transition,
    })
}

/// `W_mn = ½(Δf_mn − Δi_mn) T_mn (P_m − P_n)` with `P` the thermal populations at `B1`.
pub fn work_decomposition(p: &CyclePoint) -> Result<WorkDecomposition> {
    let d = eigenbasis_data(p)?;
    let n = d.e_final.len();
    let mut terms = vec![0.0; n * n];
    let mut delta_i = vec![0.0; n * n];
    let mut delta_f = vec![0.0; n * n];
    for m in 0..n {
        for k in 0..n {
            let idx = m * n + k;
            delta_i[idx] = d.e_initial[m] - d.e_initial[k];
            delta_f[idx] = d.e_final[m] - d.e_final[k];
            terms[idx] = 0.5
                * (delta_f[idx] - delta_i[idx])
                * d.transition.get(m, k)
                * (d.probs[m] - d.probs[k]);
        }
    }
    Ok(WorkDecomposition { dim: n, terms, delta_i, delta_f })
}

/// Eigenbasis double sums for `(QM, QT, W)`, where `W = W1 + W2 = -W_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetrizedEnergetics {
    pub qm_sym: f64,
    pub qt_sym: f64,
    pub w_sym: f64,
}

pub fn symmetrized_energetics(p: &CyclePoint) -> Result<SymmetrizedEnergetics> {
    let d = eigenbasis_data(p)?;
    let n = d.e_final.len();
    let (mut qm, mut qt, mut w) = (0.0, 0.0, 0.0);
    for m in 0..n {
        for k in 0..n {
            let t = d.transition.get(m, k);
            let dp = d.probs[m] - d.probs[k];
            qm += 0.5 * (d.e_final[k] - d.e_final[m]) * t * dp;
            qt -= 0.5 * (d.e_initial[k] - d.e_initial[m]) * t * dp;
            let dd = (d.e_final[m] - d.e_final[k]) - (d.e_initial[m] - d.e_initial[k]);
            w += 0.5 * dd * t * dp;
        }
    }
    Ok(SymmetrizedEnergetics { qm_sym: qm, qt_sym: qt, w_sym: w })
}
