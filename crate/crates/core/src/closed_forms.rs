//! Analytic expressions for the spin-1/2, spin-1/2 ⊗ spin-1 and spin-1 pairs
//! at `k_B T = 1`, used as independent scalar oracles for the numerical cycle.
//!
//! Every expression is a ratio of sums of exponentials. Both sums are divided
//! by the largest exponential present before evaluation, so large fields do
//! not overflow.

use std::fmt;
use std::str::FromStr;

use crate::engine::{run_cycle, CyclePoint};
use crate::error::{Error, Result};
use crate::measurement::{local_scheme, SideMeasurement};
use crate::medium::WorkingMedium;
use crate::spin::SpinValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosedFormId {
    W1Hh,
    QmXzHh,
    QmXyHh,
    W2XzHh,
    QtXzHh,
    WtXzHh,
    EtaXzHh,
    EtaXyHh,
    EtaXxHh,
    AdvantageFactorHh,
    WtH1,
    Wt11,
    ThresholdH1,
}

impl ClosedFormId {
    pub const ALL: [ClosedFormId; 13] = [
        ClosedFormId::W1Hh,
        ClosedFormId::QmXzHh,
        ClosedFormId::QmXyHh,
        ClosedFormId::W2XzHh,
        ClosedFormId::QtXzHh,
        ClosedFormId::WtXzHh,
        ClosedFormId::EtaXzHh,
        ClosedFormId::EtaXyHh,
        ClosedFormId::EtaXxHh,
        ClosedFormId::AdvantageFactorHh,
        ClosedFormId::WtH1,
        ClosedFormId::Wt11,
        ClosedFormId::ThresholdH1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClosedFormId::W1Hh => "w1_hh",
            ClosedFormId::QmXzHh => "qm_xz_hh",
            ClosedFormId::QmXyHh => "qm_xy_hh",
            ClosedFormId::W2XzHh => "w2_xz_hh",
            ClosedFormId::QtXzHh => "qt_xz_hh",
            ClosedFormId::WtXzHh => "wt_xz_hh",
            ClosedFormId::EtaXzHh => "eta_xz_hh",
            ClosedFormId::EtaXyHh => "eta_xy_hh",
            ClosedFormId::EtaXxHh => "eta_xx_hh",
            ClosedFormId::AdvantageFactorHh => "advantage_factor_hh",
            ClosedFormId::WtH1 => "wt_h1",
            ClosedFormId::Wt11 => "wt_11",
            ClosedFormId::ThresholdH1 => "threshold_h1",
        }
    }

    /// Stable index into [`ClosedFormId::ALL`].
    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&id| id == self).expect("listed in ALL")
    }
}

impl fmt::Display for ClosedFormId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClosedFormId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s.trim())
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

/// A finite sum `Σ c_k e^{x_k}`.
#[derive(Debug, Clone, Default)]
struct ExpSum(Vec<(f64, f64)>);

impl ExpSum {
    fn new(terms: &[(f64, f64)]) -> Self {
        Self(terms.to_vec())
    }

    fn scaled(mut self, factor: f64) -> Self {
        for t in &mut self.0 {
            t.0 *= factor;
        }
        self
    }

    fn plus(mut self, other: ExpSum) -> Self {
        self.0.extend(other.0);
        self
    }

    fn times(&self, other: &ExpSum) -> Self {
        Self(
            self.0
                .iter()
                .flat_map(|&(c1, x1)| other.0.iter().map(move |&(c2, x2)| (c1 * c2, x1 + x2)))
                .collect(),
        )
    }

    fn max_exponent(&self) -> f64 {
        self.0.iter().filter(|t| t.0 != 0.0).map(|t| t.1).fold(f64::NEG_INFINITY, f64::max)
    }

    fn eval_shifted(&self, shift: f64) -> f64 {
        self.0.iter().map(|&(c, x)| c * (x - shift).exp()).sum()
    }
}

/// `num / den`, both scaled by the largest exponential present.
fn ratio(num: &ExpSum, den: &ExpSum) -> f64 {
    let shift = num.max_exponent().max(den.max_exponent());
    let shift = if shift.is_finite() { shift } else { 0.0 };
    num.eval_shifted(shift) / den.eval_shifted(shift)
}

/// Evaluates `id` at coupling `j` and fields `b1`, `b2` (`k_B T = 1`).
pub fn evaluate(id: ClosedFormId, j: f64, b1: f64, b2: f64) -> Result<f64> {
    if !(j.is_finite() && b1.is_finite() && b2.is_finite()) {
        return Err(Error::InvalidInput(format!("{id}: arguments must be finite")));
    }
    let (b, c) = (b1, b2);
    // 1 + e^{2B1} + e^{4B1} + e^{2B1+8J}
    let d = ExpSum::new(&[(1.0, 0.0), (1.0, 2.0 * b), (1.0, 4.0 * b), (1.0, 2.0 * b + 8.0 * j)]);
    // 1 + e^{2B1} + e^{4B1} - 3 e^{2B1+8J}
    let k = ExpSum::new(&[(1.0, 0.0), (1.0, 2.0 * b), (1.0, 4.0 * b), (-3.0, 2.0 * b + 8.0 * j)]);
    // -1 + e^{4B1}
    let e4 = ExpSum::new(&[(-1.0, 0.0), (1.0, 4.0 * b)]);
    let value = match id {
        ClosedFormId::W1Hh => ratio(&e4.clone().scaled(2.0 * (b - c)), &d),
        ClosedFormId::QmXzHh => ratio(&e4.clone().scaled(c).plus(k.scaled(-2.0 * j)), &d),
        ClosedFormId::QmXyHh => ratio(&e4.clone().scaled(2.0 * c).plus(k.scaled(-2.0 * j)), &d),
        ClosedFormId::W2XzHh | ClosedFormId::WtXzHh => ratio(&e4.clone().scaled(c - b), &d),
        ClosedFormId::QtXzHh => {
            let num = e4.clone().scaled(-b).plus(
                ExpSum::new(&[(1.0, 0.0), (1.0, 2.0 * b), (1.0, 4.0 * b)]).scaled(8.0 * j),
            );
            -6.0 * j + ratio(&num, &d)
        }
        ClosedFormId::EtaXzHh => ratio(&e4.clone().scaled(c - b), &e4.clone().scaled(c).plus(k.scaled(-2.0 * j))),
        ClosedFormId::EtaXyHh => ratio(&e4.clone().scaled(c - b), &e4.clone().scaled(c).plus(k.scaled(-j))),
        ClosedFormId::EtaXxHh => {
            let den = e4.clone().scaled(-c).plus(
                ExpSum::new(&[(1.0, 0.0), (1.0, 4.0 * b), (-2.0, 2.0 * b + 8.0 * j)]).scaled(j),
            );
            ratio(&e4.clone().scaled(b - c), &den)
        }
        ClosedFormId::AdvantageFactorHh => {
            if c == 0.0 {
                return Err(Error::InvalidInput(format!("{id}: B2 must be nonzero")));
            }
            ratio(&e4, &e4.clone().plus(k.scaled(-2.0 * j / c)))
        }
        ClosedFormId::WtH1 => {
            let num = ExpSum::new(&[(-1.0, 0.0), (1.0, 2.0 * b)]).times(&ExpSum::new(&[
                (3.0, 0.0),
                (4.0, 2.0 * b),
                (3.0, 4.0 * b),
                (-1.0, 2.0 * b + 12.0 * j),
            ]));
            let den = ExpSum::new(&[(1.0, 0.0), (1.0, 2.0 * b)])
                .times(&ExpSum::new(&[(1.0, 0.0), (1.0, 4.0 * b), (1.0, 2.0 * b + 12.0 * j)]))
                .scaled(3.0);
            ratio(&num.scaled(c - b), &den)
        }
        ClosedFormId::Wt11 => {
            let num = e4.times(&ExpSum::new(&[
                (2.0, 0.0),
                (1.0, 2.0 * b),
                (2.0, 4.0 * b),
                (1.0, 2.0 * b + 16.0 * j),
            ]));
            let den = ExpSum::new(&[
                (1.0, 0.0),
                (1.0, 2.0 * b),
                (1.0, 4.0 * b),
                (1.0, 6.0 * b),
                (1.0, 8.0 * b),
                (1.0, 4.0 * b + 24.0 * j),
                (1.0, 2.0 * b + 16.0 * j),
                (1.0, 4.0 * b + 16.0 * j),
                (1.0, 6.0 * b + 16.0 * j),
            ]);
            ratio(&num.scaled(c - b), &den)
        }
        ClosedFormId::ThresholdH1 => negative_work_threshold_h1(b1),
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidInput(format!("{id} is singular at J={j}, B1={b1}, B2={b2}")))
    }
}

/// [`evaluate`] with the identifier given by name.
pub fn evaluate_named(name: &str, j: f64, b1: f64, b2: f64) -> Result<f64> {
    evaluate(name.parse()?, j, b1, b2)
}

/// Coupling `J*` below which the coupled spin-1/2 engine with `x ⊗ z`
/// measurement beats the uncoupled efficiency `1 − B1/B2`:
/// `J* = ln[(e^{−2B1} + e^{2B1} + 1)/3] / 8`.
pub fn advantage_cutoff(b1: f64) -> f64 {
    let a = (2.0 * b1).abs();
    // ln(e^{a} + e^{-a} + 1) without overflow
    let log_sum = a + (1.0 + (-a).exp() + (-2.0 * a).exp()).ln();
    (log_sum - 3f64.ln()) / 8.0
}

/// Coupling at which the extracted work of the spin-1/2 ⊗ spin-1 engine
/// with `x ⊗ z` measurement changes sign: `J* = ln(4 + 3e^{2B1}) / 12`.
pub fn negative_work_threshold_h1(b1: f64) -> f64 {
    if b1 > 0.0 {
        (3f64.ln() + 2.0 * b1 + (4.0 / 3.0 * (-2.0 * b1).exp()).ln_1p()) / 12.0
    } else {
        (4.0 + 3.0 * (2.0 * b1).exp()).ln() / 12.0
    }
}

/// Engine configuration that a closed form describes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Counterpart {
    pub spin_a: SpinValue,
    pub spin_b: SpinValue,
    pub meas_a: SideMeasurement,
    pub meas_b: SideMeasurement,
    pub quantity: CycleQuantity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleQuantity {
    W1,
    W2,
    Wt,
    Qm,
    Qt,
    Eta,
    /// `η / (1 − B1/B2)`.
    EtaOverUncoupled,
}

impl ClosedFormId {
    /// The cycle configuration and output this expression predicts, if it is
    /// a single cycle quantity.
    pub fn counterpart(self) -> Option<Counterpart> {
        use CycleQuantity as Q;
        use SideMeasurement::{X, Y, Z};
        let half = SpinValue::HALF;
        let hh = |mb, quantity| Counterpart { spin_a: half, spin_b: half, meas_a: X, meas_b: mb, quantity };
        Some(match self {
            ClosedFormId::W1Hh => hh(Z, Q::W1),
            ClosedFormId::QmXzHh => hh(Z, Q::Qm),
            ClosedFormId::QmXyHh => hh(Y, Q::Qm),
            ClosedFormId::W2XzHh => hh(Z, Q::W2),
            ClosedFormId::QtXzHh => hh(Z, Q::Qt),
            ClosedFormId::WtXzHh => hh(Z, Q::Wt),
            ClosedFormId::EtaXzHh => hh(Z, Q::Eta),
            ClosedFormId::EtaXyHh => hh(Y, Q::Eta),
            ClosedFormId::EtaXxHh => hh(X, Q::Eta),
            ClosedFormId::AdvantageFactorHh => hh(Z, Q::EtaOverUncoupled),
            ClosedFormId::WtH1 => Counterpart { spin_b: SpinValue::ONE, ..hh(Z, Q::Wt) },
            ClosedFormId::Wt11 => {
                Counterpart { spin_a: SpinValue::ONE, spin_b: SpinValue::ONE, ..hh(Z, Q::Wt) }
            }
            ClosedFormId::ThresholdH1 => return None,
        })
    }

    /// Whether a disagreement with the numerical cycle blocks validation.
    pub fn is_advisory(self) -> bool {
        self == ClosedFormId::EtaXyHh
    }
}

/// The numerical value that `id` predicts, computed by [`run_cycle`] at `β = 1`.
pub fn numerical_counterpart(id: ClosedFormId, j: f64, b1: f64, b2: f64) -> Result<f64> {
    let c = id
        .counterpart()
        .ok_or_else(|| Error::InvalidInput(format!("{id} has no single cycle counterpart")))?;
    let medium = WorkingMedium::new(c.spin_a, c.spin_b, j)?;
    let scheme = local_scheme(&medium, c.meas_a, c.meas_b)?;
    let r = run_cycle(&CyclePoint::new(medium, b1, b2, 1.0, scheme)?)?;
    Ok(match c.quantity {
        CycleQuantity::W1 => r.w1,
        CycleQuantity::W2 => r.w2,
        CycleQuantity::Wt => r.wt,
        CycleQuantity::Qm => r.qm,
        CycleQuantity::Qt => r.qt,
        CycleQuantity::Eta => r.efficiency()?,
        CycleQuantity::EtaOverUncoupled => {
            let base = 1.0 - b1 / b2;
            if base == 0.0 {
                return Err(Error::InvalidInput("B1 = B2 leaves the uncoupled efficiency at zero".into()));
            }
            r.efficiency()? / base
        }
    })
}

/// `|closed − numerical| / max(1, |closed|)`.
pub fn relative_gap(closed: f64, numerical: f64) -> f64 {
    (closed - numerical).abs() / closed.abs().max(1.0)
}
