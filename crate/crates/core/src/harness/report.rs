//! Report emission in JSON, CSV and plain text. Output bytes depend only on
//! the payload.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use super::{SurveyResult, Theorem2Result, TheoremRow};
use crate::error::{Error, Result};
use crate::stabilizer::StabilizerReport;

pub const ROWS_CSV_HEADER: &str = "dims,expected_orbit_dim,witness_orbit_dim,witness_stab_dim,center_only,sv_gap,pass,candidate_failed,reason";
pub const SURVEY_CSV_HEADER: &str = "dims,samples,seed,rank,orbit_dim,count,generic_fraction,max_observed";
pub const THM2_CSV_HEADER: &str = "dims,expected_orbit_dim,witness_orbit_dim,witness_stab_dim,center_only,sv_gap,candidate_failed,survey_samples,survey_seed,survey_max_observed,survey_generic_fraction,pass";
pub const STABILIZER_CSV_HEADER: &str = "dims,orbit_dim,stabilizer_dim,sv_gap,center_only,classification,residual_max";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" | "txt" => Ok(Format::Text),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Payload<'a> {
    Rows(&'a [TheoremRow]),
    Survey(&'a SurveyResult),
    Theorem2(&'a Theorem2Result),
    Stabilizer(&'a StabilizerReport),
}

pub fn emit_report(payload: Payload<'_>, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => json(payload),
        Format::Csv => csv_bytes(payload),
        Format::Text => Ok(text(payload).into_bytes()),
    }
}

fn json(payload: Payload<'_>) -> Result<Vec<u8>> {
    fn pretty<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
        let mut out = serde_json::to_vec_pretty(value)?;
        out.push(b'\n');
        Ok(out)
    }
    match payload {
        Payload::Rows(rows) => pretty(rows),
        Payload::Survey(s) => pretty(s),
        Payload::Theorem2(t) => pretty(t),
        Payload::Stabilizer(r) => pretty(r),
    }
}

fn csv_bytes(payload: Payload<'_>) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    match payload {
        Payload::Rows(rows) => {
            w.write_record(ROWS_CSV_HEADER.split(','))?;
            for r in rows {
                w.write_record([
                    r.dims.to_string(),
                    r.expected_orbit_dim.to_string(),
                    r.witness_orbit_dim.to_string(),
                    r.witness_stab_dim.to_string(),
                    r.center_only.to_string(),
                    r.sv_gap.to_string(),
                    r.pass.to_string(),
                    r.candidate_failed.to_string(),
                    r.reason.clone(),
                ])?;
            }
        }
        Payload::Survey(s) => {
            w.write_record(SURVEY_CSV_HEADER.split(','))?;
            for (dim, count) in &s.orbit_dim_histogram {
                w.write_record([
                    s.dims.to_string(),
                    s.samples.to_string(),
                    s.seed.to_string(),
                    s.rank.to_string(),
                    dim.to_string(),
                    count.to_string(),
                    s.generic_fraction.to_string(),
                    s.max_observed.to_string(),
                ])?;
            }
        }
        Payload::Theorem2(t) => {
            w.write_record(THM2_CSV_HEADER.split(','))?;
            let r = &t.row;
            w.write_record([
                r.dims.to_string(),
                r.expected_orbit_dim.to_string(),
                r.witness_orbit_dim.to_string(),
                r.witness_stab_dim.to_string(),
                r.center_only.to_string(),
                r.sv_gap.to_string(),
                r.candidate_failed.to_string(),
                t.survey.samples.to_string(),
                t.survey.seed.to_string(),
                t.survey.max_observed.to_string(),
                t.survey.generic_fraction.to_string(),
                t.pass.to_string(),
            ])?;
        }
        Payload::Stabilizer(r) => {
            w.write_record(STABILIZER_CSV_HEADER.split(','))?;
            w.write_record([
                r.dims.to_string(),
                r.orbit_dim.to_string(),
                r.stabilizer_dim.to_string(),
                r.sv_gap.to_string(),
                r.center_only.to_string(),
                r.classification.name().to_string(),
                r.residual_max.to_string(),
            ])?;
        }
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn fmt_gap(g: f64) -> String {
    if g.is_infinite() {
        "inf".to_string()
    } else {
        format!("{g:.3e}")
    }
}

fn text(payload: Payload<'_>) -> String {
    let mut out = String::new();
    match payload {
        Payload::Rows(rows) => {
            rows_table(&mut out, rows);
        }
        Payload::Survey(s) => survey_text(&mut out, s),
        Payload::Theorem2(t) => {
            let verdict = if t.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "theorem check for {}: {verdict}", t.row.dims);
            let _ = writeln!(out, "witness candidate:");
            rows_table(&mut out, std::slice::from_ref(&t.row));
            let _ = writeln!(out);
            survey_text(&mut out, &t.survey);
        }
        Payload::Stabilizer(r) => {
            let _ = writeln!(out, "dims            {}", r.dims);
            let _ = writeln!(out, "orbit_dim       {}", r.orbit_dim);
            let _ = writeln!(out, "stabilizer_dim  {}", r.stabilizer_dim);
            let _ = writeln!(out, "sv_gap          {}", fmt_gap(r.sv_gap));
            let _ = writeln!(out, "center_only     {}", r.center_only);
            let _ = writeln!(out, "classification  {}", r.classification.name());
            let _ = writeln!(out, "residual_max    {:.3e}", r.residual_max);
        }
    }
    out
}

fn rows_table(out: &mut String, rows: &[TheoremRow]) {
    let _ = writeln!(
        out,
        "{:<10} {:>8} {:>8} {:>5} {:>7} {:>10} {:>5}  note",
        "dims", "expected", "orbit", "stab", "center", "sv_gap", "pass"
    );
    for r in rows {
        let note = if r.candidate_failed {
            format!("candidate failed: {}", r.reason)
        } else {
            r.reason.clone()
        };
        let _ = writeln!(
            out,
            "{:<10} {:>8} {:>8} {:>5} {:>7} {:>10} {:>5}  {}",
            r.dims.to_string(),
            r.expected_orbit_dim,
            r.witness_orbit_dim,
            r.witness_stab_dim,
            r.center_only,
            fmt_gap(r.sv_gap),
            r.pass,
            note
        );
    }
}

fn survey_text(out: &mut String, s: &SurveyResult) {
    let _ = writeln!(
        out,
        "survey dims={} samples={} seed={} rank={}",
        s.dims, s.samples, s.seed, s.rank
    );
    let _ = writeln!(out, "{:>9} {:>7}", "orbit_dim", "count");
    for (dim, count) in &s.orbit_dim_histogram {
        let _ = writeln!(out, "{dim:>9} {count:>7}");
    }
    let _ = writeln!(
        out,
        "generic_fraction={} max_observed={} (bound {}) gap_warnings={} min_sv_gap={}",
        s.generic_fraction,
        s.max_observed,
        s.dims.max_orbit_dim(),
        s.gap_warnings,
        fmt_gap(s.min_sv_gap)
    );
    for a in &s.anomalies {
        let _ = writeln!(
            out,
            "  anomaly: sample {} seed {} orbit_dim {} sv_gap {} residual {:.3e}",
            a.index,
            a.seed,
            a.orbit_dim,
            fmt_gap(a.sv_gap),
            a.residual_max
        );
    }
}
