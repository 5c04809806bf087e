//! Subsystem-local works, the effective cold temperature associated with the
//! measurement energy, and the refrigerator coefficient of performance.

use crate::engine::{cycle_states, run_cycle, CyclePoint, CycleResult};
use crate::error::Result;
use crate::linalg::{hermitian_eigendecompose, partial_trace, trace_product, ComplexMatrix, Subsystem};
use crate::thermal::thermal_energy;

/// Lower end of the temperature bracket searched for `T2`.
pub const T2_BRACKET_FLOOR: f64 = 1e-9;
const T2_MAX_ITERATIONS: usize = 200;
const QM_NEGLIGIBLE: f64 = 1e-15;
const COP_THRESHOLD: f64 = 1e-12;

/// Local heats and works of each factor under the Zeeman-only local
/// Hamiltonian `2B S_i^z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalWorkResult {
    pub q_a1: f64,
    pub q_a2: f64,
    pub q_b1: f64,
    pub q_b2: f64,
    pub w_a: f64,
    pub w_b: f64,
    pub w_total_local: f64,
    /// Extracted work `W_t` of the full cycle, for comparison.
    pub w_global: f64,
}

pub fn local_works(p: &CyclePoint) -> Result<LocalWorkResult> {
    let states = cycle_states(p)?;
    let (da, db) = (p.medium.dim_a(), p.medium.dim_b());
    let side = |s: Subsystem| -> Result<(f64, f64)> {
        let rho_int = partial_trace(&states.rho0, da, db, s)?;
        let rho_m = partial_trace(&states.rho_m, da, db, s)?;
        let h_fin = p.medium.local_hamiltonian(s, p.b2);
        let h_int = p.medium.local_hamiltonian(s, p.b1);
        let q1 = trace_product(&(&rho_m - &rho_int), &h_fin)?.re;
        let q2 = trace_product(&(&rho_int - &rho_m), &h_int)?.re;
        Ok((q1, q2))
    };
    let (q_a1, q_a2) = side(Subsystem::A)?;
    let (q_b1, q_b2) = side(Subsystem::B)?;
    let w_a = -(q_a1 + q_a2);
    let w_b = -(q_b1 + q_b2);
    let w_global = -(trace_product(&states.rho0, &(&states.h2 - &states.h1))?.re
        + trace_product(&states.rho_m, &(&states.h1 - &states.h2))?.re);
    Ok(LocalWorkResult { q_a1, q_a2, q_b1, q_b2, w_a, w_b, w_total_local: w_a + w_b, w_global })
}

/// Refrigerator reading of a cycle point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefrigeratorResult {
    /// Effective cold temperature, `None` when no bracketed root exists.
    pub t2: Option<f64>,
    /// `|U(T) − U(T2) − Q_M|` at the returned `T2`.
    pub residual: Option<f64>,
    /// `Q_M / (−W_t)` when the cycle consumes work.
    pub cop: Option<f64>,
}

/// Solves `U(T) − U(T2) = qm` for `T2 ∈ [1e-9, T]`, where `U` is the thermal
/// energy of the spectrum `energies`. Returns `(T2, residual)`.
pub fn solve_effective_temperature(energies: &[f64], t: f64, qm: f64) -> Option<(f64, f64)> {
    let u = |temp: f64| thermal_energy(energies, 1.0 / temp);
    if qm.abs() < QM_NEGLIGIBLE {
        return Some((t, qm.abs()));
    }
    if qm < 0.0 {
        return None;
    }
    let target = u(t) - qm;
    let f = |temp: f64| u(temp) - target;
    let (mut lo, mut hi) = (T2_BRACKET_FLOOR, t);
    if f(lo) > 0.0 {
        return None;
    }
    for _ in 0..T2_MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (flo, fhi) = (f(lo).abs(), f(hi).abs());
    Some(if flo <= fhi { (lo, flo) } else { (hi, fhi) })
}

pub fn effective_cold_temperature(p: &CyclePoint) -> Result<RefrigeratorResult> {
    let r = run_cycle(p)?;
    let energies = hermitian_eigendecompose(&p.medium.build_hamiltonian(p.b2))?.eigenvalues;
    let found = solve_effective_temperature(&energies, 1.0 / p.beta, r.qm);
    Ok(RefrigeratorResult {
        t2: found.map(|f| f.0),
        residual: found.map(|f| f.1),
        cop: coefficient_of_performance(&r),
    })
}

/// `Q_M / (−W_t)` when `W_t < −1e-12`, otherwise `None`.
pub fn coefficient_of_performance(r: &CycleResult) -> Option<f64> {
    cop_from(r.qm, r.wt)
}

pub fn cop_from(qm: f64, wt: f64) -> Option<f64> {
    (wt < -COP_THRESHOLD).then(|| qm / -wt)
}

/// Thermal energy of `h` at temperature `t`.
pub fn thermal_energy_of(h: &ComplexMatrix, t: f64) -> Result<f64> {
    Ok(thermal_energy(&hermitian_eigendecompose(h)?.eigenvalues, 1.0 / t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::{local_scheme, MeasurementScheme, SideMeasurement};
    use crate::medium::WorkingMedium;
    use crate::spin::SpinValue;
    use SideMeasurement::{X, Z};

    fn point(a: u32, b: u32, j: f64, b1: f64, b2: f64) -> CyclePoint {
        let m = WorkingMedium::new(SpinValue::new(a).unwrap(), SpinValue::new(b).unwrap(), j).unwrap();
        let s = local_scheme(&m, X, Z).unwrap();
        CyclePoint::new(m, b1, b2, 1.0, s).unwrap()
    }

    #[test]
    fn identity_scheme_has_no_local_work() {
        let m = WorkingMedium::new(SpinValue::HALF, SpinValue::ONE, 0.4).unwrap();
        let p = CyclePoint::new(m, 3.0, 4.0, 1.0, MeasurementScheme::identity(6)).unwrap();
        let l = local_works(&p).unwrap();
        for v in [l.q_a1, l.q_a2, l.q_b1, l.q_b2, l.w_a, l.w_b, l.w_global] {
            assert!(v.abs() < 1e-14);
        }
        let r = effective_cold_temperature(&p).unwrap();
        assert_eq!(r.t2, Some(1.0));
        assert_eq!(r.cop, None);
    }

    #[test]
    fn local_works_sum_to_minus_global_work() {
        // the exchange term is field independent, so the Zeeman parts carry
        // all of W1 + W2 and the local works add up to -W_t
        for (a, b) in [(1, 1), (1, 2), (2, 2), (3, 3)] {
            for k in 0..=10 {
                let l = local_works(&point(a, b, 0.1 * k as f64, 3.0, 4.0)).unwrap();
                assert_eq!(l.w_a, -(l.q_a1 + l.q_a2));
                assert_eq!(l.w_b, -(l.q_b1 + l.q_b2));
                assert!((l.w_total_local + l.w_global).abs() < 1e-10);
                // z on B leaves the diagonal of the reduced state of B alone
                assert!(l.w_b.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn half_half_local_sum_is_negative_and_rises() {
        let sums: Vec<f64> =
            [0.0, 0.3, 0.6, 1.0].iter().map(|&j| local_works(&point(1, 1, j, 3.0, 4.0)).unwrap().w_total_local).collect();
        assert!(sums.iter().all(|&w| w < 0.0));
        assert!(sums.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn t2_substitutes_back() {
        let p = point(1, 2, 0.05, 0.2, 0.3);
        let r = effective_cold_temperature(&p).unwrap();
        let t2 = r.t2.unwrap();
        assert!(t2 > 0.0 && t2 < 1.0);
        let qm = run_cycle(&p).unwrap().qm;
        let h2 = p.medium.build_hamiltonian(p.b2);
        let residual = thermal_energy_of(&h2, 1.0).unwrap() - thermal_energy_of(&h2, t2).unwrap() - qm;
        assert!(residual.abs() < 1e-9);
        assert!(r.residual.unwrap() < 1e-9);
    }

    #[test]
    fn t2_not_found_when_measurement_energy_exceeds_thermal_excess() {
        let p = point(1, 2, 0.8, 3.0, 4.0);
        let qm = run_cycle(&p).unwrap().qm;
        let h2 = p.medium.build_hamiltonian(p.b2);
        let ground = hermitian_eigendecompose(&h2).unwrap().eigenvalues[0];
        assert!(qm > thermal_energy_of(&h2, 1.0).unwrap() - ground);
        let r = effective_cold_temperature(&p).unwrap();
        assert_eq!(r.t2, None);
        assert!(r.cop.unwrap() > 0.0);
    }

    #[test]
    fn t2_unbracketable() {
        let energies = [-1.0, 0.0, 1.0];
        let u = thermal_energy(&energies, 1.0);
        assert!(solve_effective_temperature(&energies, 1.0, u + 1.0 + 0.5).is_none());
        assert!(solve_effective_temperature(&energies, 1.0, 10.0).is_none());
        assert!(solve_effective_temperature(&energies, 1.0, u + 0.99).is_some());
    }

    #[test]
    fn cop_definition() {
        assert_eq!(cop_from(2.0, -1.0), Some(2.0));
        assert_eq!(cop_from(2.0, 0.5), None);
        assert_eq!(cop_from(2.0, 0.0), None);
    }

    #[test]
    fn cop_beyond_threshold() {
        let r = run_cycle(&point(1, 2, 0.7, 3.0, 4.0)).unwrap();
        assert!(r.wt < 0.0);
        let cop = coefficient_of_performance(&r).unwrap();
        assert!(cop.is_finite() && cop > 0.0);
    }
}
