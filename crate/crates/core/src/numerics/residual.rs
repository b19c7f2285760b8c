//! Residuals evaluated along numerically integrated trajectories.

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use super::instance::{CompiledFrac, Evaluator, JetTable, NumericInstance};
use super::integrate::{integrate_with, IntegrationOptions, TraceRecord};
use super::path::ComplexPath;
use super::real::{cabs, from_c64, to_c64, Real, C};
use super::NumericError;
use crate::algebra::{Frac, Rules, Var};
use crate::charts::System;
use crate::pipelines::{EquivalenceMap, Reduction, ScalarOde};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max_residual: f64,
    pub samples: usize,
    /// Sample points skipped because a map denominator was below tolerance
    /// or the state was not finite in the original chart.
    pub skipped: usize,
    /// Distance between the transported end state and the independently
    /// integrated target trajectory, when one was computed.
    pub endpoint_deviation: Option<f64>,
}

/// Expressions in the source state variables, evaluated at trace points.
struct Probe<R> {
    jets: JetTable,
    exprs: Vec<CompiledFrac<R>>,
}

impl<R: Real> Probe<R> {
    fn new(inst: &NumericInstance, vars: &[Var], fs: &[Frac]) -> Result<Probe<R>, NumericError> {
        for f in fs {
            inst.check_coefficient(f, vars)?;
        }
        let mut jets = JetTable::default();
        let exprs = fs.iter().map(|f| CompiledFrac::compile(f, vars, &mut jets)).collect();
        Ok(Probe { jets, exprs })
    }

    /// Values, or `None` if some denominator is below `eps` in modulus.
    fn eval(&self, inst: &NumericInstance, state: &[C<R>], t: C<R>, eps: f64) -> Option<Vec<C<R>>> {
        let jets = self.jets.values(inst, t);
        self.exprs
            .iter()
            .map(|e| {
                if cabs(e.eval_den(state, t, &jets)).to_f64() < eps {
                    None
                } else {
                    e.eval(state, t, &jets)
                }
            })
            .collect()
    }
}

/// Time and state in the original chart.
type OriginalPoint<R> = (C<R>, [C<R>; 2]);

fn original_states<R: Real>(ev: &Evaluator<R>, trace: &[TraceRecord]) -> Vec<Option<OriginalPoint<R>>> {
    trace
        .iter()
        .map(|r| {
            let t: C<R> = from_c64(r.t);
            let s = [from_c64(r.state[0]), from_c64(r.state[1])];
            let jets = ev.jet_values(t);
            ev.transition(r.chart, 0, &s, t, &jets)
                .filter(|v| v.iter().all(|z| super::real::cfinite(*z)))
                .map(|v| (t, v))
        })
        .collect()
}

/// Checks that the bindings satisfy the rewrite rules at sample times.
pub fn check_rules(inst: &NumericInstance, rules: &Rules, times: &[Complex64], tol: f64) -> Result<(), NumericError> {
    for r in rules.iter() {
        let diff = &Frac::var(r.jet) - &r.rhs;
        for t in times {
            let v: Complex64 = inst.eval_coefficient(&diff, *t)?;
            let scale = 1.0 + inst.eval_coefficient::<f64>(&Frac::var(r.jet), *t)?.norm();
            if v.norm() > tol * scale {
                return Err(NumericError::ConditionsViolated {
                    condition: format!("{} = {}", r.jet, r.rhs),
                    residual: v.norm(),
                });
            }
        }
    }
    Ok(())
}

fn sample_times(path: &ComplexPath) -> Vec<Complex64> {
    path.segments.iter().flat_map(|s| (0..=4).map(move |k| s.point::<f64>(k as f64 / 4.0))).collect()
}

/// Transports the source trajectory through `map.chart` and evaluates, at
/// every accepted step, the difference between the derivative of the
/// transported point along the source field and the target field there.
/// Also integrates the target from the transported initial state and
/// reports the endpoint deviation.
pub fn equivalence_residual<R: Real>(
    inst: &NumericInstance,
    map: &EquivalenceMap,
    init: [Complex64; 2],
    path: &ComplexPath,
    tol: f64,
) -> Result<ResidualReport, NumericError> {
    if inst.system.vars != map.source.vars {
        return Err(NumericError::SystemMismatch(format!(
            "instance variables {:?} differ from map source {:?}",
            inst.system.vars, map.source.vars
        )));
    }
    for (a, b) in inst.system.rhs.iter().zip(&map.source.rhs) {
        if a != b {
            return Err(NumericError::SystemMismatch(format!("{a} differs from {b}")));
        }
    }
    check_rules(inst, &map.rules, &sample_times(path), 1e-9)?;
    let vars = inst.system.vars.clone();
    let mut exprs: Vec<Frac> = map.chart.forward.clone();
    exprs.extend(map.chart.forward.iter().map(|f| inst.system.lie_derivative(f)));
    exprs.extend(map.target.rhs.iter().map(|f| map.chart.push_forward(f)));
    let probe: Probe<R> = Probe::new(inst, &vars, &exprs)?;

    let ev: Evaluator<R> = Evaluator::new(inst);
    let start = [from_c64::<R>(init[0]), from_c64::<R>(init[1])];
    let tr = integrate_with(&ev, start, path, &IntegrationOptions::new(tol))?;
    let mut report = ResidualReport { max_residual: 0.0, samples: 0, skipped: 0, endpoint_deviation: None };
    for point in original_states(&ev, &tr.trace) {
        let Some((t, v)) = point else {
            report.skipped += 1;
            continue;
        };
        let Some(vals) = probe.eval(inst, &v, t, tol) else {
            report.skipped += 1;
            continue;
        };
        report.samples += 1;
        for i in 0..2 {
            let r = cabs(vals[2 + i] - vals[4 + i]).to_f64();
            report.max_residual = report.max_residual.max(r);
        }
    }
    if report.samples == 0 {
        return Err(NumericError::MapSingular);
    }

    let target_inst = NumericInstance::new(map.target.clone(), inst.bindings.clone())?;
    let jets0 = probe.jets.values(inst, start_t::<R>(path));
    let fw0: Vec<C<R>> = probe.exprs[..2].iter().filter_map(|e| e.eval(&start, start_t::<R>(path), &jets0)).collect();
    if let (2, Some(end)) = (fw0.len(), tr.end_state) {
        let tev: Evaluator<R> = Evaluator::new(&target_inst);
        let ttr = integrate_with(&tev, [fw0[0], fw0[1]], path, &IntegrationOptions { record_trace: false, ..IntegrationOptions::new(tol) })?;
        let end_t: C<R> = from_c64(path.end());
        if let (Some(tend), Some(moved)) = (ttr.end_state, probe.eval(inst, &end, end_t, tol)) {
            let d = cabs(tend[0] - moved[0]).to_f64().max(cabs(tend[1] - moved[1]).to_f64());
            report.endpoint_deviation = Some(d);
        }
    }
    Ok(report)
}

fn start_t<R: Real>(path: &ComplexPath) -> C<R> {
    from_c64(path.start())
}

/// `phi, phi', ..., phi^(order)` along the unreduced system.
fn lie_jets(s: &System, phi: &Frac, order: u32) -> Vec<Frac> {
    let mut out = vec![phi.clone()];
    for _ in 0..order {
        let next = s.lie_derivative(out.last().expect("nonempty"));
        out.push(next);
    }
    out
}

/// Residual of the scalar equation of a reduction, with `u = phi(y, z)`
/// and its derivatives computed along the trajectory.
pub fn reduction_residual<R: Real>(
    inst: &NumericInstance,
    red: &Reduction,
    init: [Complex64; 2],
    path: &ComplexPath,
    tol: f64,
) -> Result<ResidualReport, NumericError> {
    check_rules(inst, &red.rules, &sample_times(path), 1e-9)?;
    let jets = lie_jets(&inst.system, &red.phi, red.ode.order);
    let vars = inst.system.vars.clone();
    let probe: Probe<R> = Probe::new(inst, &vars, &jets)?;
    let uvars: Vec<Var> = (0..=red.ode.order).map(|k| ScalarOde::unknown().with_order(k)).collect();
    inst.check_coefficient(&red.ode.residual, &uvars)?;
    let mut table = JetTable::default();
    let ode: CompiledFrac<R> = CompiledFrac::compile(&red.ode.residual, &uvars, &mut table);

    let ev: Evaluator<R> = Evaluator::new(inst);
    let start = [from_c64::<R>(init[0]), from_c64::<R>(init[1])];
    let tr = integrate_with(&ev, start, path, &IntegrationOptions::new(tol))?;
    let mut report = ResidualReport { max_residual: 0.0, samples: 0, skipped: 0, endpoint_deviation: None };
    for point in original_states(&ev, &tr.trace) {
        let Some((t, v)) = point else {
            report.skipped += 1;
            continue;
        };
        let Some(u) = probe.eval(inst, &v, t, tol) else {
            report.skipped += 1;
            continue;
        };
        let params = table.values(inst, t);
        match ode.eval(&u, t, &params) {
            Some(r) => {
                report.samples += 1;
                report.max_residual = report.max_residual.max(cabs(r).to_f64());
            }
            None => report.skipped += 1,
        }
    }
    if report.samples == 0 {
        return Err(NumericError::MapSingular);
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DriftReport {
    pub initial_value: Complex64,
    pub max_drift: f64,
    pub samples: usize,
}

/// Largest change of `h(y, z, t)` along the trajectory.
pub fn first_integral_drift<R: Real>(
    inst: &NumericInstance,
    h: &Frac,
    init: [Complex64; 2],
    path: &ComplexPath,
    tol: f64,
) -> Result<DriftReport, NumericError> {
    let vars = inst.system.vars.clone();
    let probe: Probe<R> = Probe::new(inst, &vars, std::slice::from_ref(h))?;
    let ev: Evaluator<R> = Evaluator::new(inst);
    let start = [from_c64::<R>(init[0]), from_c64::<R>(init[1])];
    let tr = integrate_with(&ev, start, path, &IntegrationOptions::new(tol))?;
    let mut h0: Option<C<R>> = None;
    let mut drift = 0.0f64;
    let mut samples = 0;
    for (t, v) in original_states(&ev, &tr.trace).into_iter().flatten() {
        let Some(val) = probe.eval(inst, &v, t, 0.0) else { continue };
        samples += 1;
        let base = *h0.get_or_insert(val[0]);
        drift = drift.max(cabs(val[0] - base).to_f64());
    }
    let initial_value = to_c64(h0.unwrap_or_else(C::zero));
    Ok(DriftReport { initial_value, max_drift: drift, samples })
}
