//! One output row: a cycle point, its energetics and any requested analysis.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::analysis::{coefficient_of_performance, local_works, solve_effective_temperature};
use crate::engine::{run_cycle, work_decomposition, CyclePoint, Efficiency};
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigendecompose;
use crate::measurement::{local_scheme, SideMeasurement};
use crate::medium::WorkingMedium;
use crate::spin::SpinValue;

pub const CSV_HEADER: [&str; 23] = [
    "spin_a", "spin_b", "j", "b1", "b2", "kbt", "meas_a", "meas_b", "theta_a", "phi_a", "theta_b",
    "phi_b", "w1", "w2", "wt", "qm", "qt", "eta", "w_local_a", "w_local_b", "t2_effective", "cop",
    "status",
];

/// Optional analyses attached to each record.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputFlags {
    pub local_works: bool,
    pub t2: bool,
    pub cop: bool,
    pub decomposition: bool,
}

/// Inputs of one row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSpec {
    pub spin_a: SpinValue,
    pub spin_b: SpinValue,
    pub j: f64,
    pub b1: f64,
    pub b2: f64,
    pub kbt: f64,
    pub meas_a: SideMeasurement,
    pub meas_b: SideMeasurement,
}

impl PointSpec {
    pub fn cycle_point(&self) -> Result<CyclePoint> {
        if !(self.kbt > 0.0 && self.kbt.is_finite()) {
            return Err(Error::InvalidInput(format!("kbt must be positive and finite, got {}", self.kbt)));
        }
        let medium = WorkingMedium::new(self.spin_a, self.spin_b, self.j)?;
        let scheme = local_scheme(&medium, self.meas_a, self.meas_b)?;
        CyclePoint::new(medium, self.b1, self.b2, 1.0 / self.kbt, scheme)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    /// `W_mn` rows in the common eigenbasis.
    pub terms: Vec<Vec<f64>>,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub spin_a: String,
    pub spin_b: String,
    pub j: f64,
    pub b1: f64,
    pub b2: f64,
    pub kbt: f64,
    pub meas_a: String,
    pub meas_b: String,
    pub theta_a: Option<f64>,
    pub phi_a: Option<f64>,
    pub theta_b: Option<f64>,
    pub phi_b: Option<f64>,
    pub w1: Option<f64>,
    pub w2: Option<f64>,
    pub wt: Option<f64>,
    pub qm: Option<f64>,
    pub qt: Option<f64>,
    pub eta: Option<f64>,
    pub w_local_a: Option<f64>,
    pub w_local_b: Option<f64>,
    pub t2_effective: Option<f64>,
    pub cop: Option<f64>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transition: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub post_probs: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Decomposition>,
}

impl SweepRecord {
    fn inputs_only(pt: &PointSpec) -> Self {
        let da = pt.meas_a.direction();
        let db = pt.meas_b.direction();
        Self {
            spin_a: pt.spin_a.to_string(),
            spin_b: pt.spin_b.to_string(),
            j: pt.j,
            b1: pt.b1,
            b2: pt.b2,
            kbt: pt.kbt,
            meas_a: pt.meas_a.to_string(),
            meas_b: pt.meas_b.to_string(),
            theta_a: da.map(|d| d.theta),
            phi_a: da.map(|d| d.phi),
            theta_b: db.map(|d| d.theta),
            phi_b: db.map(|d| d.phi),
            w1: None,
            w2: None,
            wt: None,
            qm: None,
            qt: None,
            eta: None,
            w_local_a: None,
            w_local_b: None,
            t2_effective: None,
            cop: None,
            status: String::new(),
            transition: None,
            post_probs: None,
            decomposition: None,
        }
    }

    /// Float fields of the CSV row in schema order, after the two spin labels.
    fn csv_fields(&self) -> Vec<String> {
        let mut out = vec![self.spin_a.clone(), self.spin_b.clone()];
        out.extend([self.j, self.b1, self.b2, self.kbt].map(fmt_float));
        out.push(self.meas_a.clone());
        out.push(self.meas_b.clone());
        out.extend(
            [
                self.theta_a,
                self.phi_a,
                self.theta_b,
                self.phi_b,
                self.w1,
                self.w2,
                self.wt,
                self.qm,
                self.qt,
                self.eta,
                self.w_local_a,
                self.w_local_b,
                self.t2_effective,
                self.cop,
            ]
            .map(|v| v.map(fmt_float).unwrap_or_default()),
        );
        out.push(self.status.clone());
        out
    }
}

/// Scientific notation with 15 significant digits; negative zero prints as zero.
pub fn fmt_float(v: f64) -> String {
    format!("{:.14e}", v + 0.0)
}

/// Runs the cycle (and any requested analyses) for `pt`. Computation
/// errors are recorded in the status field rather than returned.
pub fn compute_record(pt: &PointSpec, flags: OutputFlags) -> SweepRecord {
    let mut rec = SweepRecord::inputs_only(pt);
    if let Err(e) = fill_record(&mut rec, pt, flags) {
        rec.status = format!("error: {e}");
    }
    rec
}

/// Like [`compute_record`], but propagates the first computation error.
pub fn try_compute_record(pt: &PointSpec, flags: OutputFlags) -> Result<SweepRecord> {
    let mut rec = SweepRecord::inputs_only(pt);
    fill_record(&mut rec, pt, flags)?;
    Ok(rec)
}

fn fill_record(rec: &mut SweepRecord, pt: &PointSpec, flags: OutputFlags) -> Result<()> {
    let p = pt.cycle_point()?;
    let r = run_cycle(&p)?;
    let mut status = Vec::new();
    rec.w1 = Some(r.w1 + 0.0);
    rec.w2 = Some(r.w2 + 0.0);
    rec.wt = Some(r.wt + 0.0);
    rec.qm = Some(r.qm + 0.0);
    rec.qt = Some(r.qt + 0.0);
    match r.eta {
        Efficiency::Defined(v) => rec.eta = Some(v + 0.0),
        Efficiency::Undefined => status.push("eta_undefined"),
    }
    rec.transition = Some(r.transition.rows());
    rec.post_probs = Some(r.post_probs.clone());
    if flags.local_works {
        let l = local_works(&p)?;
        rec.w_local_a = Some(l.w_a + 0.0);
        rec.w_local_b = Some(l.w_b + 0.0);
    }
    if flags.t2 {
        let energies = hermitian_eigendecompose(&p.medium.build_hamiltonian(p.b2))?.eigenvalues;
        match solve_effective_temperature(&energies, pt.kbt, r.qm) {
            Some((t2, _)) => rec.t2_effective = Some(t2),
            None => status.push("t2_not_found"),
        }
    }
    if flags.cop {
        match coefficient_of_performance(&r) {
            Some(c) => rec.cop = Some(c),
            None => status.push("cop_not_applicable"),
        }
    }
    if flags.decomposition {
        match work_decomposition(&p) {
            Ok(d) => {
                rec.decomposition = Some(Decomposition {
                    terms: d.terms.chunks(d.dim).map(<[f64]>::to_vec).collect(),
                    total: d.total(),
                })
            }
            Err(_) => status.push("decomposition_unavailable"),
        }
    }
    rec.status = if status.is_empty() { "ok".into() } else { status.join(";") };
    Ok(())
}

/// Writes the header and one row per record, LF terminated.
pub fn write_csv<W: Write>(out: W, records: &[SweepRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| Error::InvalidInput(format!("writing CSV: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        w.write_record(r.csv_fields()).map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidInput(format!("writing CSV: {e}")))?;
    Ok(())
}

/// A single record as a JSON object, or several as a JSON array.
pub fn write_json<W: Write>(mut out: W, records: &[SweepRecord], single: bool) -> Result<()> {
    let io = |e: serde_json::Error| Error::InvalidInput(format!("writing JSON: {e}"));
    if single && records.len() == 1 {
        serde_json::to_writer_pretty(&mut out, &records[0]).map_err(io)?;
    } else {
        serde_json::to_writer_pretty(&mut out, records).map_err(io)?;
    }
    writeln!(out).map_err(|e| Error::InvalidInput(format!("writing JSON: {e}")))?;
    Ok(())
}
