//! Piecewise-smooth paths in the complex `t`-plane.

use num_complex::Complex64;
use serde::Serialize;

use super::real::{cis, from_c64, Real, C};
use super::NumericError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Segment {
    Line { from: Complex64, to: Complex64 },
    /// Points `center + radius * e^{i(start_angle + s * sweep)}`, `s` in `[0, 1]`.
    Arc { center: Complex64, radius: f64, start_angle: f64, sweep: f64 },
}

impl Segment {
    pub fn length(&self) -> f64 {
        match self {
            Segment::Line { from, to } => (to - from).norm(),
            Segment::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point::<f64>(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.point::<f64>(1.0)
    }

    /// Position at the fraction `s` of the segment.
    pub fn point<R: Real>(&self, s: R) -> C<R> {
        match *self {
            Segment::Line { from, to } => {
                let a: C<R> = from_c64(from);
                let b: C<R> = from_c64(to);
                a + (b - a) * s
            }
            Segment::Arc { center, radius, start_angle, sweep } => {
                let th = R::from_f64(start_angle) + R::from_f64(sweep) * s;
                from_c64::<R>(center) + cis(th) * R::from_f64(radius)
            }
        }
    }

    /// `dt/ds` at the fraction `s`.
    pub fn velocity<R: Real>(&self, s: R) -> C<R> {
        match *self {
            Segment::Line { from, to } => from_c64(to - from),
            Segment::Arc { radius, start_angle, sweep, .. } => {
                let th = R::from_f64(start_angle) + R::from_f64(sweep) * s;
                cis(th) * C::new(R::zero(), R::from_f64(radius * sweep))
            }
        }
    }
}

/// A continuous chain of segments.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexPath {
    pub segments: Vec<Segment>,
}

impl ComplexPath {
    pub fn new(segments: Vec<Segment>) -> Result<ComplexPath, NumericError> {
        if segments.is_empty() {
            return Err(NumericError::InvalidPath("empty path".into()));
        }
        for s in &segments {
            let l = s.length();
            if !l.is_finite() || l == 0.0 {
                return Err(NumericError::InvalidPath(format!("degenerate segment {s:?}")));
            }
        }
        for w in segments.windows(2) {
            let gap = (w[0].end() - w[1].start()).norm();
            if gap > 1e-12 * (1.0 + w[0].end().norm()) {
                return Err(NumericError::InvalidPath(format!("gap of {gap:e} between segments")));
            }
        }
        Ok(ComplexPath { segments })
    }

    pub fn line(from: Complex64, to: Complex64) -> Result<ComplexPath, NumericError> {
        ComplexPath::new(vec![Segment::Line { from, to }])
    }

    /// Straight segments through the given points.
    pub fn polyline(points: &[Complex64]) -> Result<ComplexPath, NumericError> {
        ComplexPath::new(points.windows(2).map(|w| Segment::Line { from: w[0], to: w[1] }).collect())
    }

    /// A counterclockwise circle around `center` through the point of the
    /// circle nearest to `base`, reached from and returning to `base` along
    /// the same radial segment.
    pub fn loop_around(base: Complex64, center: Complex64, radius: f64) -> Result<ComplexPath, NumericError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(NumericError::InvalidPath(format!("radius {radius}")));
        }
        let d = base - center;
        if d.norm() == 0.0 {
            return Err(NumericError::InvalidPath("base point at the loop center".into()));
        }
        let angle = d.arg();
        let on_circle = center + Complex64::from_polar(radius, angle);
        let circle = Segment::Arc { center, radius, start_angle: angle, sweep: std::f64::consts::TAU };
        let mut segs = Vec::new();
        let radial = (d.norm() - radius).abs() > 1e-14 * (1.0 + radius);
        if radial {
            segs.push(Segment::Line { from: base, to: on_circle });
        }
        segs.push(circle);
        if radial {
            segs.push(Segment::Line { from: on_circle, to: base });
        }
        ComplexPath::new(segs)
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    pub fn start(&self) -> Complex64 {
        self.segments[0].start()
    }

    pub fn end(&self) -> Complex64 {
        self.segments[self.segments.len() - 1].end()
    }

    /// Winding number of the path around `p`, for closed paths avoiding it.
    pub fn winding_number(&self, p: Complex64) -> f64 {
        let mut total = 0.0;
        for s in &self.segments {
            let n = 256;
            let mut prev = s.start() - p;
            for k in 1..=n {
                let cur = s.point::<f64>(k as f64 / n as f64) - p;
                total += (cur / prev).arg();
                prev = cur;
            }
        }
        total / std::f64::consts::TAU
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn loop_from_outside_base_is_closed_and_winds_once() {
        let p = ComplexPath::loop_around(c(1.0, 0.0), c(0.0, 0.0), 0.5).unwrap();
        assert_eq!(p.segments.len(), 3);
        assert!((p.end() - p.start()).norm() < 1e-15);
        assert!((p.length() - (1.0 + std::f64::consts::PI)).abs() < 1e-12);
        assert!((p.winding_number(c(0.1, 0.1)) - 1.0).abs() < 1e-9);
        assert!(p.winding_number(c(2.0, 0.0)).abs() < 1e-9);
    }

    #[test]
    fn velocity_matches_finite_differences() {
        let s = Segment::Arc { center: c(0.5, -1.0), radius: 2.0, start_angle: 0.3, sweep: -4.0 };
        let h = 1e-6;
        let fd = (s.point::<f64>(0.4 + h) - s.point::<f64>(0.4 - h)) / (2.0 * h);
        assert!((fd - s.velocity::<f64>(0.4)).norm() < 1e-6);
    }

    #[test]
    fn gaps_and_degenerate_segments_are_rejected() {
        assert!(ComplexPath::polyline(&[c(0.0, 0.0), c(1.0, 0.0)]).is_ok());
        let gap = vec![Segment::Line { from: c(0.0, 0.0), to: c(1.0, 0.0) }, Segment::Line { from: c(2.0, 0.0), to: c(3.0, 0.0) }];
        assert!(ComplexPath::new(gap).is_err());
        assert!(ComplexPath::line(c(1.0, 1.0), c(1.0, 1.0)).is_err());
        assert!(ComplexPath::loop_around(c(0.0, 0.0), c(0.0, 0.0), 1.0).is_err());
    }
}
