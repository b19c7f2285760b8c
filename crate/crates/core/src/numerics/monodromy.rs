//! Analytic continuation around closed loops.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::instance::{Evaluator, NumericInstance};
use super::integrate::{integrate_with, IntegrationOptions, StepStats, TraceRecord};
use super::path::ComplexPath;
use super::real::{from_c64, to_c64, Real};
use super::NumericError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// No branching detected along this loop.
    SingleValued,
    Branching,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SingularityKind {
    Pole,
    SuspectedBranch,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DetectedSingularity {
    pub t: Complex64,
    pub kind: SingularityKind,
    /// Estimated pole order, from the logarithmic derivative.
    pub order: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonodromyReport {
    #[serde(rename = "loop")]
    pub loop_path: ComplexPath,
    pub tol: f64,
    pub start_state: [Complex64; 2],
    pub end_state: [Complex64; 2],
    /// `end - start`.
    pub jump: [Complex64; 2],
    pub discrepancy: [f64; 2],
    /// `tol * (1 + |start|)`; branching is declared above ten times this.
    pub threshold: f64,
    pub verdict: Verdict,
    /// Singularities estimated to lie inside the loop.
    pub singularities_detected: Vec<DetectedSingularity>,
    /// Poles detected near the path but outside the loop.
    pub singularities_outside: usize,
    pub chart_switches: usize,
    pub step_stats: StepStats,
    /// Accepted steps, in the chart they were taken in.
    #[serde(skip)]
    pub trace: Vec<TraceRecord>,
}

impl MonodromyReport {
    pub fn max_discrepancy(&self) -> f64 {
        self.discrepancy[0].max(self.discrepancy[1])
    }
}

pub fn classify_discrepancy(d: f64, threshold: f64) -> Verdict {
    if d <= threshold {
        Verdict::SingleValued
    } else if d > 10.0 * threshold {
        Verdict::Branching
    } else {
        Verdict::Inconclusive
    }
}

fn max_abs(v: &[Complex64; 2]) -> f64 {
    v[0].norm().max(v[1].norm())
}

/// Integrates around the circle `|t - center| = radius`, entered radially
/// from `base_t`, and compares the end state with `init`.
pub fn monodromy_test<R: Real>(
    inst: &NumericInstance,
    base_t: Complex64,
    init: [Complex64; 2],
    center: Complex64,
    radius: f64,
    tol: f64,
) -> Result<MonodromyReport, NumericError> {
    let path = ComplexPath::loop_around(base_t, center, radius)?;
    monodromy_along::<R>(inst, &path, init, tol)
}

/// Monodromy along an arbitrary closed path.
pub fn monodromy_along<R: Real>(
    inst: &NumericInstance,
    path: &ComplexPath,
    init: [Complex64; 2],
    tol: f64,
) -> Result<MonodromyReport, NumericError> {
    if (path.end() - path.start()).norm() > 1e-12 * (1.0 + path.start().norm()) {
        return Err(NumericError::InvalidPath("loop is not closed".into()));
    }
    let ev: Evaluator<R> = Evaluator::new(inst);
    let start = [from_c64::<R>(init[0]), from_c64::<R>(init[1])];
    let tr = integrate_with(&ev, start, path, &IntegrationOptions::new(tol))?;
    let end = tr.end_state.ok_or(NumericError::NonFiniteState { t: path.end() })?;
    let jump_r = [end[0] - start[0], end[1] - start[1]];
    let jump = [to_c64(jump_r[0]), to_c64(jump_r[1])];
    let end_state = [to_c64(end[0]), to_c64(end[1])];
    let discrepancy = [jump[0].norm(), jump[1].norm()];
    let threshold = tol * (1.0 + max_abs(&init));
    let verdict = classify_discrepancy(discrepancy[0].max(discrepancy[1]), threshold);
    let ev64: Evaluator<f64> = Evaluator::new(inst);
    let mut inside = Vec::new();
    let mut outside = 0;
    for pole in detect_poles(&ev64, &tr.trace) {
        if path.winding_number(pole.t).abs() > 0.5 {
            inside.push(pole);
        } else {
            outside += 1;
        }
    }
    Ok(MonodromyReport {
        loop_path: path.clone(),
        tol,
        start_state: init,
        end_state,
        jump,
        discrepancy,
        threshold,
        verdict,
        singularities_detected: inside,
        singularities_outside: outside,
        chart_switches: tr.switches.len(),
        step_stats: tr.stats,
        trace: tr.trace,
    })
}

/// Poles near the path: local maxima of a state component along the trace
/// where the logarithmic derivative `L = y'/y` fits a pole. The fit is
/// biased by the regular part of the solution, so the order is only
/// required to be near an integer. Near a pole of
/// order `p` at `t0`, `1/L = -(t - t0)/p`, so each pair of samples gives an
/// estimate; the two pairs around the maximum must agree.
fn detect_poles(ev: &Evaluator<f64>, trace: &[TraceRecord]) -> Vec<DetectedSingularity> {
    let pts: Vec<Option<Sample>> = trace.iter().map(|r| original_point(ev, r)).collect();
    let mut out: Vec<DetectedSingularity> = Vec::new();
    for comp in 0..2 {
        let m = |k: usize| pts[k].as_ref().map_or(f64::INFINITY, |p| p.1[comp].norm());
        for k in 1..pts.len().saturating_sub(1) {
            let Some(pk) = &pts[k] else { continue };
            if !(m(k) >= m(k - 1) && m(k) >= m(k + 1)) {
                continue;
            }
            let (Some(pa), Some(pb)) = (&pts[k - 1], &pts[k + 1]) else { continue };
            let (Some(e1), Some(e2)) = (fit(pk, pa, comp), fit(pk, pb, comp)) else { continue };
            let dist = (pk.0 - e1.0).norm();
            let order = e1.1.round();
            let agree = (e1.0 - e2.0).norm() < 0.15 * dist
                && (e1.1 - e2.1).abs() < 0.15
                && order >= 1.0
                && (e1.1 - order).abs() < 0.3;
            if !agree {
                continue;
            }
            let t = (e1.0 + e2.0) / 2.0;
            if out.iter().any(|d| (d.t - t).norm() < 0.05 * dist.max(1e-12)) {
                continue;
            }
            out.push(DetectedSingularity { t, kind: SingularityKind::Pole, order: Some(0.5 * (e1.1 + e2.1)) });
        }
    }
    out
}

/// Poles detected near the recorded path of a trajectory.
pub fn poles_near_path(inst: &NumericInstance, trace: &[TraceRecord]) -> Vec<DetectedSingularity> {
    detect_poles(&Evaluator::new(inst), trace)
}

/// `(t, state, field)` in the original coordinates.
type Sample = (Complex64, [Complex64; 2], [Complex64; 2]);

fn original_point(ev: &Evaluator<f64>, r: &TraceRecord) -> Option<Sample> {
    let jets = ev.jet_values(r.t);
    let v = ev.transition(r.chart, 0, &r.state, r.t, &jets)?;
    let f = ev.field(0, &v, r.t, &jets)?;
    (v.iter().chain(&f).all(|z| z.is_finite())).then_some((r.t, v, f))
}

/// Pole position and order from two samples of one component.
fn fit(a: &Sample, b: &Sample, comp: usize) -> Option<(Complex64, f64)> {
    let (l1, l2) = (a.2[comp] / a.1[comp], b.2[comp] / b.1[comp]);
    let denom = l1.inv() - l2.inv();
    if denom.norm().is_nan() || denom.norm() == 0.0 {
        return None;
    }
    let p = -(a.0 - b.0) / denom;
    let t0 = a.0 + p / l1;
    (t0.is_finite() && p.im.abs() < 0.15).then_some((t0, p.re))
}

/// A loop to test: base point, center, radius and initial state at the base.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LoopSpec {
    pub base: Complex64,
    pub center: Complex64,
    pub radius: f64,
    pub init: [Complex64; 2],
}

/// Independent loops in parallel; results in input order.
pub fn monodromy_batch<R: Real>(
    inst: &NumericInstance,
    loops: &[LoopSpec],
    tol: f64,
) -> Vec<Result<MonodromyReport, NumericError>> {
    loops.par_iter().map(|l| monodromy_test::<R>(inst, l.base, l.init, l.center, l.radius, tol)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadiusBracket {
    pub inner: f64,
    pub outer: f64,
    pub kind: SingularityKind,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Outcome {
    Verdict(Verdict, usize),
    Collapse,
}

fn outcome<R: Real>(inst: &NumericInstance, l: &LoopSpec, r: f64, tol: f64) -> Result<Outcome, NumericError> {
    match monodromy_test::<R>(inst, l.base, l.init, l.center, r, tol) {
        Ok(rep) => Ok(Outcome::Verdict(rep.verdict, rep.singularities_detected.len())),
        Err(NumericError::StepCollapse { .. }) => Ok(Outcome::Collapse),
        Err(e) => Err(e),
    }
}

/// Bisects the loop radius between `inner` and `outer` to bracket where
/// continuation around the circle changes: a new pole inside, a branch
/// (changed verdict) or a step collapse. `None` if both ends agree.
pub fn bracket_singularity<R: Real>(
    inst: &NumericInstance,
    l: &LoopSpec,
    mut inner: f64,
    mut outer: f64,
    tol: f64,
    iterations: usize,
) -> Result<Option<RadiusBracket>, NumericError> {
    let lo = outcome::<R>(inst, l, inner, tol)?;
    let hi = outcome::<R>(inst, l, outer, tol)?;
    if lo == hi {
        return Ok(None);
    }
    let mut hi_out = hi;
    for _ in 0..iterations {
        let mid = 0.5 * (inner + outer);
        let m = outcome::<R>(inst, l, mid, tol)?;
        if m == lo {
            inner = mid;
        } else {
            outer = mid;
            hi_out = m;
        }
    }
    let kind = match (lo, hi_out) {
        (_, Outcome::Collapse) | (Outcome::Collapse, _) => SingularityKind::SuspectedBranch,
        (Outcome::Verdict(a, _), Outcome::Verdict(b, _)) if a != b => SingularityKind::SuspectedBranch,
        _ => SingularityKind::Pole,
    };
    Ok(Some(RadiusBracket { inner, outer, kind }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::System;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// `y' = y^2 + a` with `a = 1`: `y = tan(t + c)`, poles at `pi/2 + k pi - c`.
    fn tangent() -> NumericInstance {
        let s = System::parse(&[("y", "y^2+a"), ("z", "-z^2")]).unwrap();
        NumericInstance::with_bindings(s, &[("a", "1")]).unwrap()
    }

    #[test]
    fn loop_around_a_pole_is_single_valued_and_finds_it() {
        let inst = tangent();
        let p = std::f64::consts::FRAC_PI_2;
        let rep = monodromy_test::<f64>(&inst, c(0.0, 0.0), [c(0.0, 0.0), c(1.0, 0.0)], c(p, 0.0), 1e-3, 1e-10)
            .unwrap();
        assert_eq!(rep.verdict, Verdict::SingleValued, "{:?}", rep.discrepancy);
        assert_eq!(rep.singularities_detected.len(), 1);
        let s = rep.singularities_detected[0];
        assert!((s.t - c(p, 0.0)).norm() < 1e-6, "{:?}", s.t);
        assert!((s.order.unwrap() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn square_root_branches() {
        // y = sqrt(t), z = 1/t: y' = z*y/2 with z' = -z^2.
        let s = System::parse(&[("y", "1/2*y*z"), ("z", "-z^2")]).unwrap();
        let inst = NumericInstance::new(s, Default::default()).unwrap();
        let rep = monodromy_test::<f64>(&inst, c(1.0, 0.0), [c(1.0, 0.0), c(1.0, 0.0)], c(0.0, 0.0), 0.5, 1e-10)
            .unwrap();
        assert_eq!(rep.verdict, Verdict::Branching);
        assert!((rep.jump[0] - c(-2.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn verdict_thresholds() {
        assert_eq!(classify_discrepancy(1e-11, 1e-10), Verdict::SingleValued);
        assert_eq!(classify_discrepancy(5e-10, 1e-10), Verdict::Inconclusive);
        assert_eq!(classify_discrepancy(2e-9, 1e-10), Verdict::Branching);
    }

    #[test]
    fn bracketing_finds_the_pole_radius() {
        let inst = tangent();
        let p = std::f64::consts::FRAC_PI_2;
        // Loops around 1.0 + 0i reach the pole at pi/2 once the radius passes ~0.5708.
        let l = LoopSpec { base: c(0.0, 0.0), center: c(1.0, 0.0), radius: 0.3, init: [c(0.0, 0.0), c(1.0, 0.0)] };
        let b = bracket_singularity::<f64>(&inst, &l, 0.3, 0.9, 1e-10, 12).unwrap().unwrap();
        assert_eq!(b.kind, SingularityKind::Pole);
        assert!(b.inner <= p - 1.0 && p - 1.0 <= b.outer + 1e-3, "{b:?}");
    }
}
