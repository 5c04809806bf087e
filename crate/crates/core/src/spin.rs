//! Spin-s irreducible representations and eigenprojectors of spin components.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigendecompose, ComplexMatrix};

/// Eigenvalues closer than this share one projector.
pub const DEGENERACY_GROUPING: f64 = 1e-9;

/// A spin quantum number stored as `2s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SpinValue {
    twice_s: u32,
}

impl SpinValue {
    pub const HALF: SpinValue = SpinValue { twice_s: 1 };
    pub const ONE: SpinValue = SpinValue { twice_s: 2 };
    pub const THREE_HALVES: SpinValue = SpinValue { twice_s: 3 };

    pub fn new(twice_s: u32) -> Result<Self> {
        if twice_s == 0 {
            return Err(Error::InvalidSpin("spin must be at least 1/2".into()));
        }
        Ok(Self { twice_s })
    }

    pub fn twice_s(self) -> u32 {
        self.twice_s
    }

    pub fn s(self) -> f64 {
        f64::from(self.twice_s) / 2.0
    }

    pub fn dimension(self) -> usize {
        self.twice_s as usize + 1
    }

    /// Magnetic quantum numbers `s, s-1, ..., -s` in basis order.
    pub fn magnetic_numbers(self) -> impl Iterator<Item = f64> {
        let s = self.s();
        (0..self.dimension()).map(move |k| s - k as f64)
    }
}

impl fmt::Display for SpinValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_s % 2 == 0 {
            write!(f, "{}", self.twice_s / 2)
        } else {
            write!(f, "{}/2", self.twice_s)
        }
    }
}

impl FromStr for SpinValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::InvalidSpin(format!("`{s}` (expected e.g. 1/2, 1, 3/2)"));
        let twice = match t.split_once('/') {
            Some((num, "2")) => num.trim().parse::<u32>().map_err(|_| bad())?,
            Some(_) => return Err(bad()),
            None => t.parse::<u32>().map_err(|_| bad())?.checked_mul(2).ok_or_else(bad)?,
        };
        Self::new(twice)
    }
}

impl TryFrom<String> for SpinValue {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SpinValue> for String {
    fn from(s: SpinValue) -> String {
        s.to_string()
    }
}

/// Polar/azimuthal angles (radians) of a measurement axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub theta: f64,
    pub phi: f64,
}

impl Direction {
    pub const X: Direction = Direction { theta: std::f64::consts::FRAC_PI_2, phi: 0.0 };
    pub const Y: Direction = Direction {
        theta: std::f64::consts::FRAC_PI_2,
        phi: std::f64::consts::FRAC_PI_2,
    };
    pub const Z: Direction = Direction { theta: 0.0, phi: 0.0 };

    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidInput("measurement angles must be finite".into()));
        }
        Ok(Self { theta, phi })
    }

    /// Cartesian unit vector.
    pub fn unit_vector(self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperators {
    pub sx: ComplexMatrix,
    pub sy: ComplexMatrix,
    pub sz: ComplexMatrix,
}

/// Standard representation with `sz = diag(s, ..., -s)` built from the
/// ladder operators.
pub fn spin_operators(s: SpinValue) -> SpinOperators {
    let d = s.dimension();
    let sv = s.s();
    let m: Vec<f64> = s.magnetic_numbers().collect();
    let sz = ComplexMatrix::from_diagonal(&m);
    // S+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>; |m+1> sits one index above |m>
    let mut sp = ComplexMatrix::zeros(d, d);
    for k in 1..d {
        let amp = (sv * (sv + 1.0) - m[k] * (m[k] + 1.0)).sqrt();
        sp[(k - 1, k)] = Complex64::new(amp, 0.0);
    }
    let sm = sp.adjoint();
    let sx = (&sp + &sm).scale_real(0.5);
    let sy = (&sp - &sm).scale(Complex64::new(0.0, -0.5));
    SpinOperators { sx, sy, sz }
}

impl SpinOperators {
    /// `n·S` for the axis `dir`.
    pub fn along(&self, dir: Direction) -> ComplexMatrix {
        let [nx, ny, nz] = dir.unit_vector();
        let xy = &self.sx.scale_real(nx) + &self.sy.scale_real(ny);
        &xy + &self.sz.scale_real(nz)
    }
}

pub fn spin_direction_operator(s: SpinValue, theta: f64, phi: f64) -> Result<ComplexMatrix> {
    let dir = Direction::new(theta, phi)?;
    Ok(spin_operators(s).along(dir))
}

/// Spectral projectors of a Hermitian operator, ascending in eigenvalue, with
/// eigenvalues within [`DEGENERACY_GROUPING`] merged into one projector.
pub fn eigenprojectors_of(a: &ComplexMatrix) -> Result<Vec<(f64, ComplexMatrix)>> {
    let sd = hermitian_eigendecompose(a)?;
    let n = sd.dim();
    Ok(sd
        .clusters(DEGENERACY_GROUPING)
        .into_iter()
        .map(|range| {
            let value = sd.eigenvalues[range.clone()].iter().sum::<f64>() / range.len() as f64;
            let mut proj = ComplexMatrix::zeros(n, n);
            for k in range {
                proj = &proj + &sd.projector(k);
            }
            (value, proj)
        })
        .collect())
}
