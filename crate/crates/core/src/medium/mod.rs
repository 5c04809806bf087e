//! Two-spin Heisenberg working medium `H = 8J S_A·S_B + 2B (S_A^z + S_B^z)`.

mod tables;

pub use tables::{tabulated_levels, validate_against_table, TableLevel, TableReport};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigendecompose, kron, ComplexMatrix, SpectralDecomposition, Subsystem};
use crate::spin::{spin_operators, SpinOperators, SpinValue};

/// External magnetic field value.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct FieldPoint(pub f64);

impl FieldPoint {
    pub fn new(b: f64) -> Result<Self> {
        if !b.is_finite() {
            return Err(Error::InvalidInput(format!("field must be finite, got {b}")));
        }
        Ok(Self(b))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkingMedium {
    spin_a: SpinValue,
    spin_b: SpinValue,
    coupling_j: f64,
    ops_a: SpinOperators,
    ops_b: SpinOperators,
}

impl WorkingMedium {
    /// `coupling_j < 0` (ferromagnetic) is accepted.
    pub fn new(spin_a: SpinValue, spin_b: SpinValue, coupling_j: f64) -> Result<Self> {
        if !coupling_j.is_finite() {
            return Err(Error::InvalidInput(format!("coupling J must be finite, got {coupling_j}")));
        }
        Ok(Self {
            spin_a,
            spin_b,
            coupling_j,
            ops_a: spin_operators(spin_a),
            ops_b: spin_operators(spin_b),
        })
    }

    pub fn spin_a(&self) -> SpinValue {
        self.spin_a
    }

    pub fn spin_b(&self) -> SpinValue {
        self.spin_b
    }

    pub fn coupling_j(&self) -> f64 {
        self.coupling_j
    }

    pub fn dim_a(&self) -> usize {
        self.spin_a.dimension()
    }

    pub fn dim_b(&self) -> usize {
        self.spin_b.dimension()
    }

    pub fn dimension(&self) -> usize {
        self.dim_a() * self.dim_b()
    }

    pub fn is_symmetric(&self) -> bool {
        self.spin_a == self.spin_b
    }

    pub fn local_operators(&self, side: Subsystem) -> &SpinOperators {
        match side {
            Subsystem::A => &self.ops_a,
            Subsystem::B => &self.ops_b,
        }
    }

    /// `S_A·S_B` on the joint space.
    pub fn exchange_operator(&self) -> ComplexMatrix {
        let (a, b) = (&self.ops_a, &self.ops_b);
        let xx = kron(&a.sx, &b.sx);
        let yy = kron(&a.sy, &b.sy);
        let zz = kron(&a.sz, &b.sz);
        &(&xx + &yy) + &zz
    }

    /// `S_A^z ⊗ I + I ⊗ S_B^z`.
    pub fn total_sz(&self) -> ComplexMatrix {
        let left = kron(&self.ops_a.sz, &ComplexMatrix::identity(self.dim_b()));
        let right = kron(&ComplexMatrix::identity(self.dim_a()), &self.ops_b.sz);
        &left + &right
    }

    pub fn build_hamiltonian(&self, b: FieldPoint) -> ComplexMatrix {
        let exchange = self.exchange_operator().scale_real(8.0 * self.coupling_j);
        let zeeman = self.total_sz().scale_real(2.0 * b.0);
        &exchange + &zeeman
    }

    pub fn spectrum(&self, b: FieldPoint) -> Result<SpectralDecomposition> {
        hermitian_eigendecompose(&self.build_hamiltonian(b))
    }

    /// Zeeman-only local Hamiltonian `2B S_i^z` acting on one factor.
    pub fn local_hamiltonian(&self, side: Subsystem, b: FieldPoint) -> ComplexMatrix {
        self.local_operators(side).sz.scale(Complex64::new(2.0 * b.0, 0.0))
    }
}
