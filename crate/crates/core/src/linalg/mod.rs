//! Dense complex linear algebra for the small operators used throughout the
//! engine: matrix arithmetic, tensor products, trace pairings, partial traces
//! and a Hermitian Jacobi eigensolver.

mod eigen;
mod matrix;

pub use eigen::{cluster_sorted_values, hermitian_eigendecompose, SpectralDecomposition};
pub(crate) use eigen::fix_phase;
pub use matrix::ComplexMatrix;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// One factor of a bipartite Hilbert space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (p, q) = (b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(a.rows() * p, a.cols() * q);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a[(i, j)];
            if aij.re == 0.0 && aij.im == 0.0 {
                continue;
            }
            for k in 0..p {
                for l in 0..q {
                    out[(i * p + k, j * q + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// `Tr[a b]` as `sum_ij a_ij b_ji`, without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "trace_product of {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let n = a.rows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    Ok(acc)
}

/// Reduced operator on `keep` of an operator on `C^dim_a ⊗ C^dim_b`.
pub fn partial_trace(
    a: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    let n = dim_a * dim_b;
    if !a.is_square() || a.rows() != n || n == 0 {
        return Err(Error::DimensionMismatch(format!(
            "partial_trace of {}x{} with factors {dim_a}x{dim_b}",
            a.rows(),
            a.cols()
        )));
    }
    let out = match keep {
        Subsystem::A => {
            let mut r = ComplexMatrix::zeros(dim_a, dim_a);
            for i in 0..dim_a {
                for j in 0..dim_a {
                    r[(i, j)] = (0..dim_b).map(|k| a[(i * dim_b + k, j * dim_b + k)]).sum();
                }
            }
            r
        }
        Subsystem::B => {
            let mut r = ComplexMatrix::zeros(dim_b, dim_b);
            for k in 0..dim_b {
                for l in 0..dim_b {
                    r[(k, l)] = (0..dim_a).map(|i| a[(i * dim_b + k, i * dim_b + l)]).sum();
                }
            }
            r
        }
    };
    Ok(out)
}
