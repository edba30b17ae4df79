//! Theorem sweeps and random-state surveys.
//!
//! Samples and sweep rows are independent, so they are mapped in parallel
//! when the `parallel` feature is enabled and [`Execution::Parallel`] is
//! requested. Results are collected in index order, which makes the output
//! identical under both execution modes.

mod report;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, TolerancePolicy};
use crate::stabilizer::{stabilize, StabilizerReport};
use crate::states::{build_witness, build_witness_multipartite, random_density, to_state, PartyDims};

pub use report::{emit_report, Format, Payload, ROWS_CSV_HEADER, STABILIZER_CSV_HEADER, SURVEY_CSV_HEADER, THM2_CSV_HEADER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    #[default]
    Parallel,
}

fn map_indexed<T, F>(n: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

/// Seed of sample `index` in a survey with master seed `master`: the
/// `(index + 1)`-th output of a SplitMix64 generator started at `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One row of a theorem check on a witness state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremRow {
    pub dims: PartyDims,
    pub expected_orbit_dim: usize,
    pub witness_orbit_dim: usize,
    pub witness_stab_dim: usize,
    pub center_only: bool,
    pub sv_gap: f64,
    pub gap_warning: bool,
    pub residual_max: f64,
    pub pass: bool,
    /// Multipartite candidate did not meet its contract; the row is then
    /// excluded from pass/fail accounting.
    pub candidate_failed: bool,
    /// Semicolon-separated reasons for `pass = false`; empty otherwise.
    pub reason: String,
}

fn theorem_row(report: &StabilizerReport) -> TheoremRow {
    let dims = &report.dims;
    let expected = dims.max_orbit_dim();
    let mut reasons = Vec::new();
    if report.orbit_dim != expected {
        reasons.push(format!("orbit dimension {} != {expected}", report.orbit_dim));
    }
    if report.stabilizer_dim != dims.parties() {
        reasons.push(format!(
            "stabilizer dimension {} != {}",
            report.stabilizer_dim,
            dims.parties()
        ));
    }
    if !report.center_only {
        reasons.push("stabilizer is not the center".to_string());
    }
    if report.gap_warning {
        reasons.push(format!("ambiguous singular-value gap {}", report.sv_gap));
    }
    if !report.certified() {
        reasons.push(format!("kernel certificate residual {}", report.residual_max));
    }
    TheoremRow {
        dims: dims.clone(),
        expected_orbit_dim: expected,
        witness_orbit_dim: report.orbit_dim,
        witness_stab_dim: report.stabilizer_dim,
        center_only: report.center_only,
        sv_gap: report.sv_gap,
        gap_warning: report.gap_warning,
        residual_max: report.residual_max,
        pass: reasons.is_empty(),
        candidate_failed: false,
        reason: reasons.join("; "),
    }
}

fn witness_row(w: &ComplexMatrix, dims: &PartyDims, tol: &TolerancePolicy) -> Result<TheoremRow> {
    let rho = to_state(w, dims)?;
    Ok(theorem_row(&stabilize(rho.matrix(), dims, tol)?))
}

/// Checks the bipartite witness for every `2 <= m <= n <= n_max` with
/// `m <= m_max`, ordered by `m` then `n`.
pub fn verify_theorem1(
    m_max: usize,
    n_max: usize,
    tol: &TolerancePolicy,
    exec: Execution,
) -> Result<Vec<TheoremRow>> {
    if !(2 <= m_max && m_max <= n_max) {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= m_max <= n_max, got m_max={m_max}, n_max={n_max}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (2..=m_max)
        .flat_map(|m| (m..=n_max).map(move |n| (m, n)))
        .collect();
    map_indexed(pairs.len(), exec, |i| {
        let (m, n) = pairs[i];
        let dims = PartyDims::bipartite(m, n)?;
        witness_row(&build_witness(m, n)?, &dims, tol)
    })
    .into_iter()
    .collect()
}

/// Per-sample record kept when a survey sample needs a closer look.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleDiagnostic {
    pub index: usize,
    pub seed: u64,
    pub orbit_dim: usize,
    pub sv_gap: f64,
    pub residual_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurveyResult {
    pub dims: PartyDims,
    pub samples: usize,
    pub seed: u64,
    pub rank: usize,
    pub orbit_dim_histogram: BTreeMap<usize, usize>,
    pub generic_fraction: f64,
    pub max_observed: usize,
    pub gap_warnings: usize,
    pub min_sv_gap: f64,
    /// Samples above the theoretical maximum. Must stay zero.
    pub bound_violations: usize,
    /// Samples that hit a gap warning, a bound violation, a failed kernel
    /// certificate or (for full-rank surveys) a non-generic orbit.
    pub anomalies: Vec<SampleDiagnostic>,
}

/// Orbit dimensions of `samples` random states of the given rank. Sample `i`
/// uses seed [`derive_seed`]`(seed, i)`.
pub fn survey(
    dims: &PartyDims,
    samples: usize,
    seed: u64,
    rank: usize,
    tol: &TolerancePolicy,
    exec: Execution,
) -> Result<SurveyResult> {
    if samples == 0 {
        return Err(Error::InvalidArgument("a survey needs at least one sample".into()));
    }
    let total = dims.total();
    if !(1..=total).contains(&rank) {
        return Err(Error::InvalidArgument(format!(
            "rank must lie in 1..={total}, got {rank}"
        )));
    }
    let reports: Vec<(u64, StabilizerReport)> = map_indexed(samples, exec, |i| {
        let s = derive_seed(seed, i as u64);
        let rho = random_density(dims, rank, s)?;
        Ok((s, stabilize(rho.matrix(), dims, tol)?))
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let max_dim = dims.max_orbit_dim();
    let mut histogram = BTreeMap::new();
    let mut gap_warnings = 0;
    let mut bound_violations = 0;
    let mut min_sv_gap = f64::INFINITY;
    let mut anomalies = Vec::new();
    for (index, (s, r)) in reports.iter().enumerate() {
        *histogram.entry(r.orbit_dim).or_insert(0) += 1;
        gap_warnings += usize::from(r.gap_warning);
        bound_violations += usize::from(r.orbit_dim > max_dim);
        min_sv_gap = min_sv_gap.min(r.sv_gap);
        let missed_generic = rank == total && r.orbit_dim != max_dim;
        if r.gap_warning || r.orbit_dim > max_dim || !r.certified() || missed_generic {
            anomalies.push(SampleDiagnostic {
                index,
                seed: *s,
                orbit_dim: r.orbit_dim,
                sv_gap: r.sv_gap,
                residual_max: r.residual_max,
            });
        }
    }
    let generic = histogram.get(&max_dim).copied().unwrap_or(0);
    let max_observed = histogram.keys().next_back().copied().unwrap_or(0);

    Ok(SurveyResult {
        dims: dims.clone(),
        samples,
        seed,
        rank,
        orbit_dim_histogram: histogram,
        generic_fraction: generic as f64 / samples as f64,
        max_observed,
        gap_warnings,
        min_sv_gap,
        bound_violations,
        anomalies,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem2Result {
    /// The multipartite witness candidate.
    pub row: TheoremRow,
    pub survey: SurveyResult,
    /// `max_observed` reached `Σ d_i² - k` with no bound violation.
    pub pass: bool,
}

/// Multipartite check: the witness candidate plus a full-rank survey. The
/// verdict rests on the survey; a failing candidate is reported only.
pub fn verify_theorem2(
    dims: &PartyDims,
    samples: usize,
    seed: u64,
    tol: &TolerancePolicy,
    exec: Execution,
) -> Result<Theorem2Result> {
    if dims.parties() < 2 {
        return Err(Error::InvalidDims(format!(
            "need at least two parties, got {dims}"
        )));
    }
    let expected = dims.max_orbit_dim();
    let mut row = match build_witness_multipartite(dims) {
        Ok(w) => witness_row(&w, dims, tol)?,
        Err(e) => TheoremRow {
            dims: dims.clone(),
            expected_orbit_dim: expected,
            witness_orbit_dim: 0,
            witness_stab_dim: 0,
            center_only: false,
            sv_gap: f64::NAN,
            gap_warning: false,
            residual_max: f64::NAN,
            pass: false,
            candidate_failed: true,
            reason: format!("candidate unavailable: {e}"),
        },
    };
    if !row.pass {
        row.candidate_failed = true;
    }
    let survey = survey(dims, samples, seed, dims.total(), tol, exec)?;
    let pass = survey.max_observed == expected && survey.bound_violations == 0;
    Ok(Theorem2Result { row, survey, pass })
}
