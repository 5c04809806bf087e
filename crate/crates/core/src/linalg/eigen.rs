use std::cmp::Ordering;
use std::ops::Range;

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const OFF_DIAGONAL_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;
const PHASE_THRESHOLD: f64 = 1e-8;
/// Relative gap below which two eigenvalues count as exactly degenerate.
const EXACT_DEGENERACY: f64 = 1e-12;
const LEX_TOL: f64 = 1e-12;

/// Eigenvalues in ascending order with matching unit eigenvectors stored as
/// columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    pub fn projector(&self, k: usize) -> ComplexMatrix {
        let v = self.vector(k);
        ComplexMatrix::outer(&v, &v)
    }

    /// `V diag(f(λ)) V†`.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n).map(|k| v[(i, k)] * weights[k] * v[(j, k)].conj()).sum();
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_eigenvalues(|l| l)
    }

    /// Index ranges of eigenvalues that agree within `tol` of their neighbour.
    pub fn clusters(&self, tol: f64) -> Vec<Range<usize>> {
        cluster_sorted_values(&self.eigenvalues, tol)
    }
}

/// Index ranges of consecutive sorted values whose neighbours differ by at most `tol`.
pub fn cluster_sorted_values(values: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || (values[i] - values[i - 1]).abs() > tol {
            if i > start {
                out.push(start..i);
            }
            start = i;
        }
    }
    out
}

/// Cyclic complex Jacobi diagonalisation of a Hermitian matrix.
///
/// The result is deterministic: each eigenvector has its first component of
/// modulus above 1e-8 real and positive, and exactly degenerate eigenvectors
/// are ordered lexicographically (descending real then imaginary parts).
pub fn hermitian_eigendecompose(a: &ComplexMatrix) -> Result<SpectralDecomposition> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition of non-square {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let scale = a.max_abs().max(1.0);
    let deviation = a.hermitian_deviation();
    if deviation > HERMITIAN_TOL * scale {
        return Err(Error::NonHermitian { deviation });
    }

    let n = a.rows();
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = 0.5 * (a[(i, j)] + a[(j, i)].conj());
        }
    }
    let norm = m.frobenius_norm();
    let mut v = ComplexMatrix::identity(n);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&m);
        if off <= OFF_DIAGONAL_TOL * norm {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q, norm);
            }
        }
        sweeps += 1;
    }

    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|k| {
            let mut col = v.column(k);
            fix_phase(&mut col);
            (m[(k, k)].re, col)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));

    let values: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    for range in cluster_sorted_values(&values, EXACT_DEGENERACY * norm.max(1.0)) {
        if range.len() < 2 {
            continue;
        }
        let mean = values[range.clone()].iter().sum::<f64>() / range.len() as f64;
        let block = &mut pairs[range];
        block.sort_by(|x, y| lex_descending(&x.1, &y.1));
        for pair in block.iter_mut() {
            pair.0 = mean;
        }
    }

    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (k, (_, col)) in pairs.iter().enumerate() {
        eigenvectors.set_column(k, col);
    }
    Ok(SpectralDecomposition {
        eigenvalues: pairs.into_iter().map(|p| p.0).collect(),
        eigenvectors,
    })
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilate `m[p][q]` with the unitary W (W_pp = W_qq = c, W_pq = s e^{iφ},
/// W_qp = -s e^{-iφ}), updating `m <- W† m W` and `v <- v W`.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, norm: f64) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag <= f64::EPSILON * 1e-3 * norm || mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let w_pq = phase * s;
    let w_qp = -phase.conj() * s;

    let n = m.rows();
    // m <- m W
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * c + mkq * w_qp;
        m[(k, q)] = mkp * w_pq + mkq * c;
    }
    // m <- W† m
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = mpk * c + mqk * w_qp.conj();
        m[(q, k)] = mpk * w_pq.conj() + mqk * c;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * w_qp;
        v[(k, q)] = vkp * w_pq + vkq * c;
    }
}

pub(crate) fn fix_phase(col: &mut [Complex64]) {
    if let Some(lead) = col.iter().find(|z| z.norm() > PHASE_THRESHOLD) {
        let rot = lead.conj() / lead.norm();
        for z in col.iter_mut() {
            *z *= rot;
        }
    }
}

fn lex_descending(x: &[Complex64], y: &[Complex64]) -> Ordering {
    for (a, b) in x.iter().zip(y) {
        if (a.re - b.re).abs() > LEX_TOL {
            return b.re.total_cmp(&a.re);
        }
        if (a.im - b.im).abs() > LEX_TOL {
            return b.im.total_cmp(&a.im);
        }
    }
    Ordering::Equal
}
