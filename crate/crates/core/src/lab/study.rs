use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::section::{default_margin, finite_section_inverse, interior_envelope};
use super::testmatrix::{make_test_matrix, TestMatrixSpec};
use crate::algebra::CdMatrix;
use crate::envelope::Envelope;
use crate::error::{Error, Result};
use crate::group::{Group, GroupKind};
use crate::scalar::Real;
use crate::weight::{grs_diagnostic, GrsDiagnostic, Weight};

#[derive(Debug, Clone)]
pub struct StudyOptions {
    pub radii: Vec<usize>,
    /// Defaults to `ceil(n / 4)` per radius.
    pub margin: Option<usize>,
    pub weight: Option<Weight>,
    /// Radii processed concurrently. Results do not depend on it.
    pub jobs: usize,
}

impl StudyOptions {
    pub fn new(radii: &[usize]) -> Self {
        StudyOptions {
            radii: radii.to_vec(),
            margin: None,
            weight: None,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RadiusSummary {
    pub radius: usize,
    pub margin: usize,
    pub interior_radius: usize,
    pub section_size: usize,
    pub norm_1: f64,
    pub norm_inf: f64,
    pub inverse_norm_1: f64,
    pub inverse_norm_inf: f64,
    pub cond_1: f64,
    pub cond_inf: f64,
    /// Largest entry of `A A^-1 - I` on interior rows.
    pub residual: f64,
    pub envelope_l1: f64,
    pub envelope_weighted: Option<f64>,
    pub sphere_sums: Vec<f64>,
    pub tail_sums: Vec<f64>,
    pub weighted_tail_sums: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct StudyVerdict {
    pub consistent: bool,
    /// Last envelope change at most half the previous one.
    pub stabilizing: bool,
    /// Outer half of the support carries at most half of the tail mass.
    pub tails_concentrated: bool,
    pub weighted_stabilizing: Option<bool>,
    pub weighted_tails_concentrated: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StudyReport {
    pub group: String,
    pub weight: Option<String>,
    pub radii: Vec<RadiusSummary>,
    /// Interior radius shared by all sections, used for the envelope changes.
    pub common_interior: usize,
    /// `max_z |b_(i+1)(z) - b_i(z)|` on the common interior.
    pub deltas: Vec<f64>,
    pub weighted_deltas: Option<Vec<f64>>,
    /// `t_(M/2) / t_0` for the largest radius.
    pub tail_ratio: f64,
    pub weighted_tail_ratio: Option<f64>,
    pub verdict: Option<StudyVerdict>,
    pub notes: Vec<String>,
}

/// Report together with the interior envelope of each radius.
#[derive(Debug, Clone)]
pub struct Study<T> {
    pub report: StudyReport,
    pub envelopes: Vec<Envelope<T>>,
}

fn tails(sphere: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; sphere.len()];
    let mut acc = 0.0;
    for m in (0..sphere.len()).rev() {
        out[m] = acc;
        acc += sphere[m];
    }
    out
}

fn tail_ratio(t: &[f64]) -> f64 {
    match t.first() {
        Some(&t0) if t0 > 0.0 => t[(t.len() - 1) / 2] / t0,
        _ => 0.0,
    }
}

fn stabilizing(deltas: &[f64], scale: f64) -> bool {
    match deltas {
        [.., prev, last] => *last <= 0.5 * prev || *last <= 1e-12 * scale.max(1.0),
        _ => false,
    }
}

struct PerRadius<T> {
    summary: RadiusSummary,
    own: Envelope<T>,
    common: Envelope<T>,
}

fn one_radius<T: Real>(
    a: &CdMatrix<T>,
    n: usize,
    margin: Option<usize>,
    common: usize,
    weight: Option<&Weight>,
) -> Result<PerRadius<T>> {
    let g = a.group();
    let ball = g.ball(n)?;
    let s = finite_section_inverse(a, &ball, margin)?;
    let common_env = interior_envelope(&s.inverse, common)?;
    let own = s.envelope;
    let sphere: Vec<f64> = own.sphere_sums().iter().map(|x| x.as_f64()).collect();
    let (envelope_weighted, weighted_tail_sums) = match weight {
        Some(w) => {
            let ws: Vec<f64> = own.weighted_sphere_sums(w)?.iter().map(|x| x.as_f64()).collect();
            (Some(own.weighted_norm(w)?.as_f64()), Some(tails(&ws)))
        }
        None => (None, None),
    };
    let (n1, ni) = (s.section.norm_1().as_f64(), s.section.norm_inf().as_f64());
    let (m1, mi) = (s.inverse.norm_1().as_f64(), s.inverse.norm_inf().as_f64());
    Ok(PerRadius {
        summary: RadiusSummary {
            radius: n,
            margin: s.margin,
            interior_radius: s.interior_radius,
            section_size: ball.len(),
            norm_1: n1,
            norm_inf: ni,
            inverse_norm_1: m1,
            inverse_norm_inf: mi,
            cond_1: n1 * m1,
            cond_inf: ni * mi,
            residual: s.residual,
            envelope_l1: own.l1_norm().as_f64(),
            envelope_weighted,
            tail_sums: tails(&sphere),
            sphere_sums: sphere,
            weighted_tail_sums,
        },
        own,
        common: common_env,
    })
}

/// Runs finite-section inversions of `a` at increasing radii and compares the
/// interior envelopes of the inverses.
///
/// `a` must be known on columns up to the largest radius. A verdict needs at
/// least three radii and a group of polynomial growth.
pub fn study_matrix<T: Real>(a: &CdMatrix<T>, opts: &StudyOptions) -> Result<Study<T>> {
    let g = a.group().clone();
    if opts.radii.is_empty() {
        return Err(Error::InsufficientData("no radii given".into()));
    }
    if opts.radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Usage("radii must be strictly increasing".into()));
    }
    if let Some(w) = &opts.weight {
        w.check_group(&g)?;
    }
    let margin_of = |n: usize| opts.margin.unwrap_or_else(|| default_margin(n));
    let common = opts
        .radii
        .iter()
        .map(|&n| n.saturating_sub(margin_of(n)))
        .min()
        .unwrap();
    let run = || -> Result<Vec<PerRadius<T>>> {
        opts.radii
            .par_iter()
            .map(|&n| one_radius(a, n, opts.margin, common, opts.weight.as_ref()))
            .collect()
    };
    let per = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::Usage(format!("thread pool: {e}")))?
        .install(run)?;

    let deltas: Vec<f64> = per
        .windows(2)
        .map(|w| w[1].common.max_abs_diff(&w[0].common).as_f64())
        .collect();
    let weighted_deltas = match &opts.weight {
        Some(w) => Some(
            per.windows(2)
                .map(|p| p[1].common.weighted_max_abs_diff(&p[0].common, w).map(|d| d.as_f64()))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let last = &per.last().unwrap().summary;
    let scale = per.last().unwrap().own.sup().as_f64();
    let tr = tail_ratio(&last.tail_sums);
    let wtr = last.weighted_tail_sums.as_deref().map(tail_ratio);
    let mut notes = Vec::new();
    let verdict = if !g.kind().has_polynomial_growth() {
        notes.push(format!("{} has exponential growth; no verdict is issued", g.kind()));
        None
    } else if opts.radii.len() < 3 {
        notes.push("a verdict needs at least three radii".into());
        None
    } else {
        let stab = stabilizing(&deltas, scale);
        let conc = tr <= 0.5;
        let wstab = weighted_deltas.as_deref().map(|d| stabilizing(d, scale));
        let wconc = wtr.map(|r| r <= 0.5);
        Some(StudyVerdict {
            consistent: stab && conc && wstab.unwrap_or(true) && wconc.unwrap_or(true),
            stabilizing: stab,
            tails_concentrated: conc,
            weighted_stabilizing: wstab,
            weighted_tails_concentrated: wconc,
        })
    };
    let (summaries, envelopes) = per.into_iter().map(|p| (p.summary, p.own)).unzip();
    Ok(Study {
        report: StudyReport {
            group: g.kind().to_string(),
            weight: opts.weight.map(|w| w.to_string()),
            radii: summaries,
            common_interior: common,
            deltas,
            weighted_deltas,
            tail_ratio: tr,
            weighted_tail_ratio: wtr,
            verdict,
            notes,
        },
        envelopes,
    })
}

/// Builds the test matrix for `spec` and runs [`study_matrix`] on it.
pub fn envelope_convergence_study<T: Real>(
    group: &Arc<Group>,
    spec: &TestMatrixSpec,
    seed: u64,
    opts: &StudyOptions,
) -> Result<Study<T>> {
    group.require_hypotheses()?;
    let n = *opts
        .radii
        .iter()
        .max()
        .ok_or_else(|| Error::InsufficientData("no radii given".into()))?;
    let a = make_test_matrix(group, spec, seed, n)?;
    study_matrix(&a, opts)
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightedReport {
    pub study: StudyReport,
    pub grs: Vec<GrsDiagnostic>,
    /// Weighted CD norm of the inverse envelope at the largest radius.
    pub weighted_norm: f64,
    /// Weighted verdict; `false` flags the inverse as outside the weighted algebra.
    pub member: Option<bool>,
}

/// Envelope study under a weight, with the GRS diagnostic of the weight along
/// each generator.
pub fn weighted_inverse_check<T: Real>(
    a: &CdMatrix<T>,
    weight: &Weight,
    opts: &StudyOptions,
) -> Result<(WeightedReport, Vec<Envelope<T>>)> {
    let g = a.group();
    let mut o = opts.clone();
    o.weight = Some(*weight);
    let study = study_matrix(a, &o)?;
    let n = match g.kind() {
        GroupKind::Lattice(_) => 1000,
        _ => 200,
    };
    let mut grs = Vec::new();
    for u in g.generators() {
        if u.coords().iter().all(|&c| c >= 0) {
            grs.push(grs_diagnostic(weight, g, &u, n)?);
        }
    }
    let member = study.report.verdict.map(|v| {
        v.weighted_stabilizing.unwrap_or(false) && v.weighted_tails_concentrated.unwrap_or(false)
    });
    let weighted_norm = study.report.radii.last().and_then(|r| r.envelope_weighted).unwrap_or(f64::NAN);
    Ok((
        WeightedReport {
            study: study.report,
            grs,
            weighted_norm,
            member,
        },
        study.envelopes,
    ))
}
