//! Dormand-Prince 5(4) along complex paths with PI step control and chart
//! switching at large state values.

use std::io::{self, Write};

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use super::instance::{Evaluator, NumericInstance};
use super::path::{ComplexPath, Segment};
use super::real::{cabs, cfinite, from_c64, to_c64, Real, C};
use super::NumericError;

pub const SWITCH_OUT: f64 = 1e6;
pub const SWITCH_BACK: f64 = 1e2;
pub const MIN_TOL: f64 = 1e-13;
pub const MAX_TOL: f64 = 1e-6;
/// Steps shorter than this fraction of the path length count as a collapse.
pub const COLLAPSE: f64 = 1e-14;
const EPUL_FLOOR: f64 = 1e-3;
const CHART_FLOOR: f64 = 1e-20;

#[derive(Clone, Copy, Debug)]
pub struct IntegrationOptions {
    pub tol: f64,
    pub max_steps: usize,
    pub record_trace: bool,
}

impl IntegrationOptions {
    pub fn new(tol: f64) -> IntegrationOptions {
        IntegrationOptions { tol, max_steps: 2_000_000, record_trace: true }
    }
}

/// One accepted step: state in the coordinates of `chart`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceRecord {
    pub t: Complex64,
    pub state: [Complex64; 2],
    pub chart: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChartSwitch {
    pub t: Complex64,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
    pub min_step: f64,
    pub max_step: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory<R> {
    /// End state in the original coordinates, if finite there.
    pub end_state: Option<[C<R>; 2]>,
    pub end_chart: usize,
    pub end_chart_state: [C<R>; 2],
    pub trace: Vec<TraceRecord>,
    pub switches: Vec<ChartSwitch>,
    pub stats: StepStats,
}

impl<R: Real> Trajectory<R> {
    pub fn end_state_c64(&self) -> Option<[Complex64; 2]> {
        self.end_state.map(|s| [to_c64(s[0]), to_c64(s[1])])
    }
}

/// Writes one line per record: `t_re t_im v1_re v1_im v2_re v2_im chart`.
pub fn write_trace<W: Write>(out: &mut W, trace: &[TraceRecord]) -> io::Result<()> {
    for r in trace {
        writeln!(
            out,
            "{:.17e} {:.17e} {:.17e} {:.17e} {:.17e} {:.17e} {}",
            r.t.re, r.t.im, r.state[0].re, r.state[0].im, r.state[1].re, r.state[1].im, r.chart
        )?;
    }
    Ok(())
}

/// Parses the output of [`write_trace`].
pub fn read_trace(text: &str) -> Result<Vec<TraceRecord>, NumericError> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| {
            let f: Vec<&str> = l.split_whitespace().collect();
            let bad = || NumericError::InvalidTrace(i + 1);
            if f.len() != 7 {
                return Err(bad());
            }
            let x: Vec<f64> = f[..6].iter().map(|s| s.parse::<f64>().map_err(|_| bad())).collect::<Result<_, _>>()?;
            let chart = f[6].parse().map_err(|_| bad())?;
            Ok(TraceRecord {
                t: Complex64::new(x[0], x[1]),
                state: [Complex64::new(x[2], x[3]), Complex64::new(x[4], x[5])],
                chart,
            })
        })
        .collect()
}

const A: [&[(f64, f64)]; 6] = [
    &[(1.0, 5.0)],
    &[(3.0, 40.0), (9.0, 40.0)],
    &[(44.0, 45.0), (-56.0, 15.0), (32.0, 9.0)],
    &[(19372.0, 6561.0), (-25360.0, 2187.0), (64448.0, 6561.0), (-212.0, 729.0)],
    &[(9017.0, 3168.0), (-355.0, 33.0), (46732.0, 5247.0), (49.0, 176.0), (-5103.0, 18656.0)],
    &[(35.0, 384.0), (0.0, 1.0), (500.0, 1113.0), (125.0, 192.0), (-2187.0, 6784.0), (11.0, 84.0)],
];
const NODES: [(f64, f64); 6] = [(1.0, 5.0), (3.0, 10.0), (4.0, 5.0), (8.0, 9.0), (1.0, 1.0), (1.0, 1.0)];
const ERR: [(f64, f64); 7] = [
    (71.0, 57600.0),
    (0.0, 1.0),
    (-71.0, 16695.0),
    (71.0, 1920.0),
    (-17253.0, 339200.0),
    (22.0, 525.0),
    (-1.0, 40.0),
];

struct Tableau<R> {
    a: Vec<Vec<R>>,
    c: Vec<R>,
    e: Vec<R>,
}

impl<R: Real> Tableau<R> {
    fn new() -> Tableau<R> {
        let q = |&(n, d): &(f64, f64)| R::from_f64(n) / R::from_f64(d);
        Tableau {
            a: A.iter().map(|row| row.iter().map(q).collect()).collect(),
            c: NODES.iter().map(q).collect(),
            e: ERR.iter().map(q).collect(),
        }
    }
}

struct Stepper<'a, R> {
    ev: &'a Evaluator<R>,
    tab: Tableau<R>,
    evaluations: usize,
}

type State<R> = [C<R>; 2];

impl<R: Real> Stepper<'_, R> {
    /// `dV/ds` on a segment: the field times `dt/ds`.
    fn rhs(&mut self, seg: &Segment, chart: usize, s: R, v: &State<R>) -> Option<State<R>> {
        self.evaluations += 1;
        let t = seg.point(s);
        let jets = self.ev.jet_values(t);
        let f = self.ev.field(chart, v, t, &jets)?;
        let vel = seg.velocity(s);
        let out = [f[0] * vel, f[1] * vel];
        (cfinite(out[0]) && cfinite(out[1])).then_some(out)
    }

    /// One trial step; returns the new state, its derivative and the
    /// error estimate vector.
    fn step(
        &mut self,
        seg: &Segment,
        chart: usize,
        s: R,
        h: R,
        v: &State<R>,
        k1: &State<R>,
    ) -> Option<(State<R>, State<R>, State<R>)> {
        let mut ks: Vec<State<R>> = vec![*k1];
        for stage in 0..6 {
            let mut y = *v;
            for (j, a) in self.tab.a[stage].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for i in 0..2 {
                    y[i] = y[i] + ks[j][i] * (*a * h);
                }
            }
            let k = self.rhs(seg, chart, s + self.tab.c[stage] * h, &y)?;
            if stage == 5 {
                // The last stage is evaluated at the new point.
                let mut err = [C::zero(); 2];
                ks.push(k);
                for (j, e) in self.tab.e.iter().enumerate() {
                    for i in 0..2 {
                        err[i] = err[i] + ks[j][i] * (*e * h);
                    }
                }
                return Some((y, k, err));
            }
            ks.push(k);
        }
        unreachable!()
    }
}

fn max_abs<R: Real>(v: &State<R>) -> f64 {
    cabs(v[0]).to_f64().max(cabs(v[1]).to_f64())
}

fn finite_state<R: Real>(v: &State<R>) -> bool {
    cfinite(v[0]) && cfinite(v[1])
}

/// Integrates from `init` (original coordinates) along `path`.
pub fn integrate_path<R: Real>(
    inst: &NumericInstance,
    init: [C<R>; 2],
    path: &ComplexPath,
    opts: &IntegrationOptions,
) -> Result<Trajectory<R>, NumericError> {
    let ev = Evaluator::new(inst);
    integrate_with(&ev, init, path, opts)
}

/// [`integrate_path`] at double precision with `Complex64` states.
pub fn integrate_path_f64(
    inst: &NumericInstance,
    init: [Complex64; 2],
    path: &ComplexPath,
    tol: f64,
) -> Result<Trajectory<f64>, NumericError> {
    integrate_path(inst, init, path, &IntegrationOptions::new(tol))
}

pub(crate) fn integrate_with<R: Real>(
    ev: &Evaluator<R>,
    init: [C<R>; 2],
    path: &ComplexPath,
    opts: &IntegrationOptions,
) -> Result<Trajectory<R>, NumericError> {
    let tol = opts.tol;
    if !(MIN_TOL..=MAX_TOL).contains(&tol) {
        return Err(NumericError::ToleranceOutOfRange(tol));
    }
    if !finite_state(&init) {
        return Err(NumericError::NonFiniteState { t: path.start() });
    }
    let total = path.length();
    let mut st = Stepper { ev, tab: Tableau::new(), evaluations: 0 };
    let mut chart = 0usize;
    let mut v = init;
    let mut trace = Vec::new();
    let mut switches = Vec::new();
    let mut stats = StepStats { min_step: f64::INFINITY, ..Default::default() };
    let record = |trace: &mut Vec<TraceRecord>, t: C<R>, v: &State<R>, chart: usize| {
        if opts.record_trace {
            trace.push(TraceRecord { t: to_c64(t), state: [to_c64(v[0]), to_c64(v[1])], chart });
        }
    };
    record(&mut trace, from_c64(path.start()), &v, chart);
    let one = R::one();
    let mut h_next: Option<f64> = None;
    for seg in &path.segments {
        let seg_len = seg.length();
        let min_h = COLLAPSE * total / seg_len;
        let mut s = R::zero();
        let mut err_prev = 1e-4f64;
        let mut k1 = match st.rhs(seg, chart, s, &v) {
            Some(k) => k,
            None => return Err(NumericError::NonFiniteState { t: seg.start() }),
        };
        // Step sizes carry over between segments in units of length.
        let mut h = match h_next {
            Some(hl) => (hl / seg_len).min(1.0),
            None => {
                let rate = max_abs(&k1) / (1.0 + max_abs(&v));
                (0.1 * tol.powf(0.2) / rate.max(1e-300)).min(0.1)
            }
        };
        let mut rejected_last = false;
        loop {
            let remaining = (one - s).to_f64();
            if remaining <= 0.0 {
                break;
            }
            let last = h >= remaining;
            let hr = if last { one - s } else { R::from_f64(h) };
            if stats.accepted + stats.rejected >= opts.max_steps {
                return Err(NumericError::StepBudgetExhausted { t: to_c64(seg.point(s)) });
            }
            let trial = st.step(seg, chart, s, hr, &v, &k1);
            // Error per unit length: the local bound shrinks with the share
            // of the path the step covers, keeping the accumulated error
            // near `tol`.
            let share = (hr.to_f64() * seg_len / total).max(EPUL_FLOOR);
            let (accept, err_norm) = match &trial {
                Some((y, _, e)) if finite_state(y) => {
                    let mut acc = 0.0;
                    // Mixed absolute/relative scale in the original chart;
                    // other charts put small components next to singular
                    // terms such as w^3/s, so they are controlled relatively.
                    let floor = if chart == 0 { 1.0 } else { CHART_FLOOR * (1.0 + max_abs(&v).max(max_abs(y))) };
                    for i in 0..2 {
                        let sc = tol * share * (floor + cabs(v[i]).to_f64().max(cabs(y[i]).to_f64()));
                        acc += (cabs(e[i]).to_f64() / sc).powi(2);
                    }
                    let en = (acc / 2.0).sqrt();
                    (en <= 1.0, en)
                }
                _ => (false, f64::INFINITY),
            };
            if !accept {
                stats.rejected += 1;
                let fac = if err_norm.is_finite() { (0.9 * err_norm.powf(-0.2)).clamp(0.2, 0.9) } else { 0.25 };
                h = hr.to_f64() * fac;
                rejected_last = true;
                if h < min_h {
                    return Err(NumericError::StepCollapse { t: to_c64(seg.point(s)) });
                }
                continue;
            }
            let (y, k7, _) = trial.expect("accepted step");
            let hd = hr.to_f64();
            stats.accepted += 1;
            stats.min_step = stats.min_step.min(hd * seg_len);
            stats.max_step = stats.max_step.max(hd * seg_len);
            s = if last { one } else { s + hr };
            v = y;
            k1 = k7;
            let en = err_norm.max(1e-10);
            let mut fac = 0.9 * en.powf(-0.17) * err_prev.powf(0.04);
            fac = fac.clamp(0.2, 10.0);
            if rejected_last {
                fac = fac.min(1.0);
            }
            rejected_last = false;
            err_prev = en;
            if !last {
                h = hd * fac;
                h_next = Some(h * seg_len);
            } else {
                h_next = Some((hd * fac).max(hd) * seg_len);
            }
            let t = seg.point(s);
            if let Some(to) = choose_chart(ev, chart, &v, t) {
                let jets = ev.jet_values(t);
                let w = ev.transition(chart, to, &v, t, &jets).expect("chosen chart is reachable");
                switches.push(ChartSwitch { t: to_c64(t), from: chart, to });
                chart = to;
                v = w;
                k1 = st.rhs(seg, chart, s, &v).ok_or(NumericError::NonFiniteState { t: to_c64(t) })?;
                err_prev = 1e-4;
            }
            record(&mut trace, t, &v, chart);
        }
    }
    let end_t: C<R> = from_c64(path.end());
    let jets = ev.jet_values(end_t);
    let end_state = ev.transition(chart, 0, &v, end_t, &jets).filter(finite_state);
    stats.evaluations = st.evaluations;
    Ok(Trajectory { end_state, end_chart: chart, end_chart_state: v, trace, switches, stats })
}

/// The chart to move to after a step, if any.
fn choose_chart<R: Real>(ev: &Evaluator<R>, chart: usize, v: &State<R>, t: C<R>) -> Option<usize> {
    let here = max_abs(v);
    let jets = ev.jet_values(t);
    if chart != 0 {
        if let Some(w) = ev.transition(chart, 0, v, t, &jets).filter(finite_state) {
            if max_abs(&w) < SWITCH_BACK {
                return Some(0);
            }
        }
    }
    if here <= SWITCH_OUT {
        return None;
    }
    let mut best: Option<(usize, f64)> = None;
    for k in 0..ev.num_charts() {
        if k == chart {
            continue;
        }
        let Some(w) = ev.transition(chart, k, v, t, &jets).filter(finite_state) else { continue };
        // Avoid charts whose field is singular at this point.
        if ev.field(k, &w, t, &jets).filter(finite_state).is_none() {
            continue;
        }
        let m = max_abs(&w);
        if m < here && best.is_none_or(|(_, b)| m < b) {
            best = Some((k, m));
        }
    }
    best.map(|(k, _)| k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::System;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn riccati() -> NumericInstance {
        // y' = y^2 + 1 has solutions tan(t + c); z' = -z^2 has 1/(t + c).
        let s = System::parse(&[("y", "y^2+a"), ("z", "-z^2")]).unwrap();
        NumericInstance::with_bindings(s, &[("a", "1")]).unwrap()
    }

    #[test]
    fn matches_closed_form_on_a_line() {
        let inst = riccati();
        let path = ComplexPath::line(c(0.0, 0.0), c(1.0, 0.5)).unwrap();
        let tr = integrate_path_f64(&inst, [c(0.0, 0.0), c(1.0, 0.0)], &path, 1e-12).unwrap();
        let end = tr.end_state_c64().unwrap();
        let t = c(1.0, 0.5);
        assert!((end[0] - t.tan()).norm() < 1e-10, "{:?}", end[0] - t.tan());
        assert!((end[1] - 1.0 / (t + 1.0)).norm() < 1e-10);
    }

    #[test]
    fn crossing_a_pole_switches_charts_and_continues() {
        // tan has a pole at pi/2; the path passes 1e-7 above it.
        let inst = riccati();
        let p = std::f64::consts::FRAC_PI_2;
        let path = ComplexPath::polyline(&[c(0.0, 0.0), c(p, 1e-7), c(3.0, 0.0)]).unwrap();
        let tr = integrate_path_f64(&inst, [c(0.0, 0.0), c(1.0, 0.0)], &path, 1e-11).unwrap();
        assert!(!tr.switches.is_empty());
        assert_eq!(tr.end_chart, 0);
        let end = tr.end_state_c64().unwrap();
        assert!((end[0] - c(3.0f64.tan(), 0.0)).norm() < 1e-7, "{:?}", end[0]);
    }

    #[test]
    fn trace_round_trips_through_text() {
        let inst = riccati();
        let path = ComplexPath::line(c(0.0, 0.0), c(0.5, 0.0)).unwrap();
        let tr = integrate_path_f64(&inst, [c(0.1, 0.0), c(1.0, 0.0)], &path, 1e-8).unwrap();
        let mut buf = Vec::new();
        write_trace(&mut buf, &tr.trace).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), tr.stats.accepted + 1);
        assert_eq!(read_trace(&text).unwrap(), tr.trace);
    }

    #[test]
    fn tolerance_and_initial_state_are_checked() {
        let inst = riccati();
        let path = ComplexPath::line(c(0.0, 0.0), c(0.5, 0.0)).unwrap();
        let init = [c(0.1, 0.0), c(1.0, 0.0)];
        assert_eq!(
            integrate_path_f64(&inst, init, &path, 1e-3).unwrap_err(),
            NumericError::ToleranceOutOfRange(1e-3)
        );
        assert!(matches!(
            integrate_path_f64(&inst, [c(f64::NAN, 0.0), c(1.0, 0.0)], &path, 1e-8),
            Err(NumericError::NonFiniteState { .. })
        ));
    }

    #[test]
    fn extended_precision_agrees_with_double() {
        use crate::numerics::real::{from_c64, Dd};
        let inst = riccati();
        let path = ComplexPath::line(c(0.0, 0.0), c(1.0, 0.5)).unwrap();
        let init: [C<Dd>; 2] = [from_c64(c(0.0, 0.0)), from_c64(c(1.0, 0.0))];
        let tr = integrate_path(&inst, init, &path, &IntegrationOptions::new(1e-13)).unwrap();
        let end = tr.end_state_c64().unwrap();
        assert!((end[0] - c(1.0, 0.5).tan()).norm() < 1e-11);
    }
}
