//! Measurement schemes, the non-selective measurement channel and transition
//! matrices between Hamiltonian eigenstates.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, SpectralDecomposition};
use crate::medium::WorkingMedium;
use crate::spin::{eigenprojectors_of, spin_operators, Direction, SpinValue};

const COMPLETENESS_TOL: f64 = 1e-10;

/// What is measured on one side of the pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SideMeasurement {
    X,
    Y,
    Z,
    Angles(Direction),
    /// Qubit SIC-POVM; only valid on a spin-1/2 factor.
    Sic,
}

impl SideMeasurement {
    /// Axis for projective measurements; `None` for the SIC-POVM.
    pub fn direction(self) -> Option<Direction> {
        match self {
            SideMeasurement::X => Some(Direction::X),
            SideMeasurement::Y => Some(Direction::Y),
            SideMeasurement::Z => Some(Direction::Z),
            SideMeasurement::Angles(d) => Some(d),
            SideMeasurement::Sic => None,
        }
    }

    pub fn is_projective(self) -> bool {
        !matches!(self, SideMeasurement::Sic)
    }
}

impl fmt::Display for SideMeasurement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideMeasurement::X => f.write_str("x"),
            SideMeasurement::Y => f.write_str("y"),
            SideMeasurement::Z => f.write_str("z"),
            SideMeasurement::Sic => f.write_str("sic"),
            SideMeasurement::Angles(d) => write!(f, "theta={},phi={}", d.theta, d.phi),
        }
    }
}

impl FromStr for SideMeasurement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "x" => return Ok(SideMeasurement::X),
            "y" => return Ok(SideMeasurement::Y),
            "z" => return Ok(SideMeasurement::Z),
            "sic" => return Ok(SideMeasurement::Sic),
            _ => {}
        }
        let bad = || {
            Error::InvalidInput(format!(
                "measurement `{s}`: expected x, y, z, sic or theta=<float>,phi=<float>"
            ))
        };
        let (mut theta, mut phi) = (None, None);
        for part in t.split(',') {
            let (key, value) = part.split_once('=').ok_or_else(bad)?;
            let value: f64 = value.trim().parse().map_err(|_| bad())?;
            match key.trim() {
                "theta" => theta = Some(value),
                "phi" => phi = Some(value),
                _ => return Err(bad()),
            }
        }
        match (theta, phi) {
            (Some(theta), Some(phi)) => Ok(SideMeasurement::Angles(Direction::new(theta, phi)?)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SchemeLabel {
    Local { a: SideMeasurement, b: SideMeasurement },
    Identity,
    Custom(String),
}

impl fmt::Display for SchemeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeLabel::Local { a, b } => write!(f, "{a}|{b}"),
            SchemeLabel::Identity => f.write_str("identity"),
            SchemeLabel::Custom(s) => f.write_str(s),
        }
    }
}

/// A complete set of measurement operators `{M_k}` with `Σ M_k† M_k = I`.
#[derive(Debug, Clone)]
pub struct MeasurementScheme {
    operators: Vec<ComplexMatrix>,
    label: SchemeLabel,
}

impl MeasurementScheme {
    pub fn new(operators: Vec<ComplexMatrix>, label: SchemeLabel) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::InvalidInput("measurement scheme needs at least one operator".into()))?;
        let n = first.rows();
        if operators.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::DimensionMismatch("measurement operators differ in shape".into()));
        }
        let mut sum = ComplexMatrix::zeros(n, n);
        for m in &operators {
            sum = &sum + &(&m.adjoint() * m);
        }
        let deviation = sum.max_abs_diff(&ComplexMatrix::identity(n));
        if !(deviation <= COMPLETENESS_TOL) {
            return Err(Error::IncompleteScheme { deviation });
        }
        Ok(Self { operators, label })
    }

    /// The trivial scheme `{I}`.
    pub fn identity(dim: usize) -> Self {
        Self { operators: vec![ComplexMatrix::identity(dim)], label: SchemeLabel::Identity }
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn label(&self) -> &SchemeLabel {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.operators[0].rows()
    }

    fn check_dim(&self, m: &ComplexMatrix, what: &str) -> Result<()> {
        if !m.is_square() || m.rows() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{what} is {}x{} but the scheme acts on dimension {}",
                m.rows(),
                m.cols(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Post-measurement state `Σ_k M_k ρ M_k†` with outcomes discarded.
    pub fn apply_nonselective(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dim(rho, "state")?;
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidInput(format!("state trace is {tr}, expected 1")));
        }
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for m in &self.operators {
            out = &out + &(&(m * rho) * &m.adjoint());
        }
        Ok(out)
    }

    /// Dual map `Σ_k M_k† h M_k`, so that `Tr[apply(ρ) h] = Tr[ρ dual(h)]`.
    pub fn heisenberg_dual(&self, h: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dim(h, "operator")?;
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for m in &self.operators {
            out = &out + &(&(&m.adjoint() * h) * m);
        }
        Ok(out)
    }

    /// `T_{m,n} = Σ_k |⟨ψ_m|M_k|ψ_n⟩|²` in the eigenbasis `basis`.
    pub fn transition_matrix(&self, basis: &SpectralDecomposition) -> Result<TransitionMatrix> {
        let n = basis.dim();
        if n != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "basis of dimension {n} for a scheme on dimension {}",
                self.dim()
            )));
        }
        let v = &basis.eigenvectors;
        let vh = v.adjoint();
        let mut entries = vec![0.0; n * n];
        for m in &self.operators {
            let rotated = &(&vh * m) * v;
            for (e, z) in entries.iter_mut().zip(rotated.as_slice()) {
                *e += z.norm_sqr();
            }
        }
        Ok(TransitionMatrix { dim: n, entries, basis: basis.clone() })
    }

    /// `Σ_k M_k M_k† = I`: the channel preserves the maximally mixed state.
    pub fn is_unital(&self) -> bool {
        let n = self.dim();
        let mut sum = ComplexMatrix::zeros(n, n);
        for m in &self.operators {
            sum = &sum + &(m * &m.adjoint());
        }
        sum.max_abs_diff(&ComplexMatrix::identity(n)) <= COMPLETENESS_TOL
    }
}

/// Doubly stochastic matrix of eigenstate-to-eigenstate transition
/// probabilities induced by a measurement.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    dim: usize,
    entries: Vec<f64>,
    pub basis: SpectralDecomposition,
}

impl TransitionMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.entries[m * self.dim + n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.entries.chunks(self.dim).map(|r| r.iter().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.dim).map(|n| (0..self.dim).map(|m| self.get(m, n)).sum()).collect()
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for m in 0..self.dim {
            for n in m + 1..self.dim {
                dev = dev.max((self.get(m, n) - self.get(n, m)).abs());
            }
        }
        dev
    }

    /// Largest deviation of any row or column sum from one.
    pub fn stochasticity_error(&self) -> f64 {
        self.row_sums()
            .into_iter()
            .chain(self.column_sums())
            .map(|s| (s - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_entry(&self) -> f64 {
        self.entries.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Projectors of `n·S` for a spin factor, highest eigenvalue first.
fn side_projectors(s: SpinValue, dir: Direction) -> Result<Vec<ComplexMatrix>> {
    let op = spin_operators(s).along(dir);
    Ok(eigenprojectors_of(&op)?.into_iter().rev().map(|(_, p)| p).collect())
}

fn side_operators(s: SpinValue, side: SideMeasurement) -> Result<Vec<ComplexMatrix>> {
    match side.direction() {
        Some(dir) => side_projectors(s, dir),
        None if s == SpinValue::HALF => Ok(qubit_sic_scheme().operators),
        None => Err(Error::InvalidInput(format!("SIC-POVM requires a spin-1/2 factor, got spin {s}"))),
    }
}

/// Products `P_i^A ⊗ P_j^B` of spin-component eigenprojectors along `dir_a`
/// and `dir_b`, ordered with the A index outermost.
pub fn local_projective_scheme(
    m: &WorkingMedium,
    dir_a: Direction,
    dir_b: Direction,
) -> Result<MeasurementScheme> {
    local_scheme(m, SideMeasurement::Angles(dir_a), SideMeasurement::Angles(dir_b))
}

/// Local product scheme from per-side descriptors (projective or SIC).
pub fn local_scheme(
    m: &WorkingMedium,
    a: SideMeasurement,
    b: SideMeasurement,
) -> Result<MeasurementScheme> {
    let ops_a = side_operators(m.spin_a(), a)?;
    let ops_b = side_operators(m.spin_b(), b)?;
    let operators = ops_a
        .iter()
        .flat_map(|pa| ops_b.iter().map(move |pb| kron(pa, pb)))
        .collect();
    MeasurementScheme::new(operators, SchemeLabel::Local { a, b })
}

/// Qubit SIC-POVM: effects `G_k = ½|φ_k⟩⟨φ_k|` with tetrahedral Bloch
/// vectors and operators `M_k = √G_k = |φ_k⟩⟨φ_k| / √2`.
pub fn qubit_sic_scheme() -> MeasurementScheme {
    let operators = sic_bloch_vectors()
        .iter()
        .map(|n| {
            // |φ⟩⟨φ| = (I + n·σ)/2
            let mut p = ComplexMatrix::zeros(2, 2);
            p[(0, 0)] = Complex64::new(0.5 * (1.0 + n[2]), 0.0);
            p[(1, 1)] = Complex64::new(0.5 * (1.0 - n[2]), 0.0);
            p[(0, 1)] = Complex64::new(0.5 * n[0], -0.5 * n[1]);
            p[(1, 0)] = Complex64::new(0.5 * n[0], 0.5 * n[1]);
            p.scale_real(std::f64::consts::FRAC_1_SQRT_2)
        })
        .collect();
    MeasurementScheme { operators, label: SchemeLabel::Custom("sic".into()) }
}

pub(crate) fn sic_bloch_vectors() -> [[f64; 3]; 4] {
    let r = 2.0 * std::f64::consts::SQRT_2 / 3.0;
    let mut out = [[0.0, 0.0, 1.0]; 4];
    for (k, v) in out.iter_mut().enumerate().skip(1) {
        let angle = 2.0 * std::f64::consts::PI * (k - 1) as f64 / 3.0;
        *v = [r * angle.cos(), r * angle.sin(), -1.0 / 3.0];
    }
    out
}
