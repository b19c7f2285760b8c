//! Systems with every coefficient symbol bound to a polynomial in `t`, plus
//! the compiled evaluators the integrator runs on.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use super::real::{from_gauss, Real, C};
use super::NumericError;
use crate::algebra::expr::{parse_expr, ExprRing};
use crate::algebra::rat::GaussRat;
use crate::algebra::{AlgebraError, Frac, MPoly, Rat, Var};
use crate::charts::{apply_chart, RationalChart, System};

/// Univariate polynomial in `t` with Gaussian-rational coefficients,
/// lowest degree first.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct GaussPoly(Vec<GaussRat>);

impl GaussPoly {
    pub fn new(mut coeffs: Vec<GaussRat>) -> GaussPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        GaussPoly(coeffs)
    }

    pub fn zero() -> GaussPoly {
        GaussPoly(Vec::new())
    }

    pub fn constant(c: GaussRat) -> GaussPoly {
        GaussPoly::new(vec![c])
    }

    pub fn t() -> GaussPoly {
        GaussPoly::new(vec![GaussRat::default(), GaussRat::real(Rat::one())])
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn derivative(&self) -> GaussPoly {
        GaussPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| {
                    let k = Rat::from_integer((k as i64).into());
                    GaussRat::new(&c.re * &k, &c.im * &k)
                })
                .collect(),
        )
    }

    pub fn derivative_n(&self, k: u32) -> GaussPoly {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn eval<R: Real>(&self, t: C<R>) -> C<R> {
        self.0.iter().rev().fold(C::zero(), |acc, c| acc * t + from_gauss(c))
    }

    /// Parses an expression in `t` with rational coefficients and the
    /// imaginary unit `i`.
    pub fn parse(src: &str) -> Result<GaussPoly, AlgebraError> {
        parse_expr(src)?.eval(1, &mut |name, order, col| {
            if name == "t" && order == 0 {
                Ok(GaussPoly::t())
            } else {
                Err(AlgebraError::Parse { line: 1, col, msg: format!("`{name}` is not the time variable t") })
            }
        })
    }
}

impl ExprRing for GaussPoly {
    fn from_rat(r: Rat) -> Self {
        GaussPoly::constant(GaussRat::real(r))
    }
    fn imag() -> Option<Self> {
        Some(GaussPoly::constant(GaussRat::i()))
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let z = GaussRat::default();
        GaussPoly::new((0..n).map(|k| self.0.get(k).unwrap_or(&z) + o.0.get(k).unwrap_or(&z)).collect())
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return GaussPoly::zero();
        }
        let mut out = vec![GaussRat::default(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        GaussPoly::new(out)
    }
    fn neg(&self) -> Self {
        GaussPoly(self.0.iter().map(|c| -c).collect())
    }
    fn as_nonzero_rat(&self) -> Option<Rat> {
        match self.0.as_slice() {
            [c] if c.im.is_zero() => Some(c.re.clone()),
            _ => None,
        }
    }
    fn scale(&self, r: &Rat) -> Self {
        GaussPoly::new(self.0.iter().map(|c| GaussRat::new(&c.re * r, &c.im * r)).collect())
    }
}

impl fmt::Display for GaussPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GaussPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A chart of the instance: coordinates and the field written in them.
#[derive(Clone, Debug)]
pub struct InstanceChart {
    pub chart: RationalChart,
    pub system: System,
}

/// A planar system whose coefficient symbols are bound to polynomials in
/// `t`. Jets of a symbol evaluate to derivatives of its binding. Chart 0 is
/// the original coordinates.
#[derive(Clone, Debug)]
pub struct NumericInstance {
    pub system: System,
    pub bindings: BTreeMap<String, GaussPoly>,
    pub charts: Vec<InstanceChart>,
}

fn chart_vars() -> Vec<Var> {
    vec![Var::new("u#"), Var::new("v#")]
}

impl NumericInstance {
    /// Binds every symbol and adds the two reciprocal charts
    /// `(1/y, z/y)` and `(y/z, 1/z)`.
    pub fn new(system: System, bindings: BTreeMap<String, GaussPoly>) -> Result<NumericInstance, NumericError> {
        if system.dim() != 2 {
            return Err(NumericError::NotPlanar(system.dim()));
        }
        let [y, z] = [system.var(0), system.var(1)];
        let identity = InstanceChart { chart: RationalChart::identity(&system.vars), system: system.clone() };
        let mut inst = NumericInstance { system, bindings, charts: vec![identity] };
        inst.check_bound(&inst.system.clone())?;
        let (u, v) = (Frac::var(Var::new("u#")), Frac::var(Var::new("v#")));
        let (fy, fz) = (Frac::var(y), Frac::var(z));
        let recip = |a: &Frac, b: &Frac| b.checked_div(a).expect("nonzero");
        let one = Frac::one();
        inst.add_chart(RationalChart::new(
            "reciprocal in y",
            vec![y, z],
            chart_vars(),
            vec![recip(&fy, &one), recip(&fy, &fz)],
            vec![recip(&u, &one), recip(&u, &v)],
        )?)?;
        inst.add_chart(RationalChart::new(
            "reciprocal in z",
            vec![y, z],
            chart_vars(),
            vec![recip(&fz, &fy), recip(&fz, &one)],
            vec![recip(&v, &u), recip(&v, &one)],
        )?)?;
        Ok(inst)
    }

    /// Parses bindings given as `(symbol, polynomial in t)` text pairs.
    pub fn with_bindings(system: System, bindings: &[(&str, &str)]) -> Result<NumericInstance, NumericError> {
        let mut map = BTreeMap::new();
        for (s, p) in bindings {
            map.insert(s.to_string(), GaussPoly::parse(p)?);
        }
        NumericInstance::new(system, map)
    }

    /// Adds the three product charts `(1/y, z)`, `(y, 1/z)`, `(1/y, 1/z)`.
    pub fn with_product_charts(mut self) -> Result<NumericInstance, NumericError> {
        let [y, z] = [self.system.var(0), self.system.var(1)];
        let (u, v) = (Frac::var(Var::new("u#")), Frac::var(Var::new("v#")));
        let inv = |f: &Frac| f.inv().expect("nonzero");
        let (fy, fz) = (Frac::var(y), Frac::var(z));
        let specs = [
            ("product chart at y = infinity", [inv(&fy), fz.clone()], [inv(&u), v.clone()]),
            ("product chart at z = infinity", [fy.clone(), inv(&fz)], [u.clone(), inv(&v)]),
            ("product chart at both infinities", [inv(&fy), inv(&fz)], [inv(&u), inv(&v)]),
        ];
        for (name, fw, bw) in specs {
            self.add_chart(RationalChart::new(name, vec![y, z], chart_vars(), fw.to_vec(), bw.to_vec())?)?;
        }
        Ok(self)
    }

    /// Adds a chart whose old variables are the system's state variables.
    pub fn add_chart(&mut self, chart: RationalChart) -> Result<(), NumericError> {
        let system = apply_chart(&self.system, &chart)?;
        self.check_bound(&system)?;
        for f in chart.forward.iter().chain(&chart.inverse) {
            self.check_frac(f, &[&chart.old, &chart.new])?;
        }
        self.charts.push(InstanceChart { chart, system });
        Ok(())
    }

    fn check_bound(&self, s: &System) -> Result<(), NumericError> {
        s.rhs.iter().try_for_each(|f| self.check_frac(f, &[&s.vars, &s.constants]))
    }

    fn check_frac(&self, f: &Frac, exclude: &[&[Var]]) -> Result<(), NumericError> {
        for v in f.vars() {
            if v.is_time() || exclude.iter().any(|e| e.contains(&v)) {
                continue;
            }
            if !self.bindings.contains_key(v.name()) {
                return Err(NumericError::UnboundSymbol(v.name().to_string()));
            }
        }
        Ok(())
    }

    /// Fails on a symbol of `f` that is neither bound nor in `vars`.
    pub fn check_coefficient(&self, f: &Frac, vars: &[Var]) -> Result<(), NumericError> {
        self.check_frac(f, &[vars])
    }

    pub fn binding(&self, v: Var) -> Option<GaussPoly> {
        self.bindings.get(v.name()).map(|p| p.derivative_n(v.order()))
    }

    /// Value of a coefficient expression at `t`.
    pub fn eval_coefficient<R: Real>(&self, f: &Frac, t: C<R>) -> Result<C<R>, NumericError> {
        self.check_frac(f, &[])?;
        let mut jets = JetTable::default();
        let e = CompiledFrac::<R>::compile(f, &[], &mut jets);
        let vals = jets.values(self, t);
        e.eval(&[], t, &vals).ok_or(NumericError::ZeroDenominator)
    }
}

/// Jet slots shared by all compiled expressions of one evaluator.
#[derive(Clone, Default, Debug)]
pub(crate) struct JetTable {
    jets: Vec<Var>,
}

impl JetTable {
    fn slot(&mut self, v: Var) -> usize {
        if let Some(i) = self.jets.iter().position(|w| *w == v) {
            return i;
        }
        self.jets.push(v);
        self.jets.len() - 1
    }

    pub(crate) fn values<R: Real>(&self, inst: &NumericInstance, t: C<R>) -> Vec<C<R>> {
        self.jets.iter().map(|v| inst.binding(*v).map(|p| p.eval(t)).unwrap_or_else(C::zero)).collect()
    }

    pub(crate) fn polys(&self, inst: &NumericInstance) -> Vec<GaussPoly> {
        self.jets.iter().map(|v| inst.binding(*v).unwrap_or_default()).collect()
    }
}

#[derive(Clone, Copy, Debug)]
enum Slot {
    State(usize),
    Time,
    Jet(usize),
}

#[derive(Clone, Debug)]
pub(crate) struct CompiledPoly<R> {
    terms: Vec<(R, Vec<(Slot, u32)>)>,
}

impl<R: Real> CompiledPoly<R> {
    fn compile(p: &MPoly, state: &[Var], jets: &mut JetTable) -> CompiledPoly<R> {
        let terms = p
            .terms()
            .map(|(m, c)| {
                let factors = m
                    .factors()
                    .iter()
                    .map(|(v, e)| {
                        let slot = if let Some(i) = state.iter().position(|w| w == v) {
                            Slot::State(i)
                        } else if v.is_time() {
                            Slot::Time
                        } else {
                            Slot::Jet(jets.slot(*v))
                        };
                        (slot, *e)
                    })
                    .collect();
                (R::from_rat(c), factors)
            })
            .collect();
        CompiledPoly { terms }
    }

    fn eval(&self, state: &[C<R>], t: C<R>, jets: &[C<R>]) -> C<R> {
        let mut acc = C::zero();
        for (c, factors) in &self.terms {
            let mut term = C::new(*c, R::zero());
            for (slot, e) in factors {
                let base = match slot {
                    Slot::State(i) => state[*i],
                    Slot::Time => t,
                    Slot::Jet(i) => jets[*i],
                };
                for _ in 0..*e {
                    term = term * base;
                }
            }
            acc = acc + term;
        }
        acc
    }
}

#[derive(Clone, Debug)]
pub(crate) struct CompiledFrac<R> {
    num: CompiledPoly<R>,
    den: CompiledPoly<R>,
    den_is_one: bool,
}

impl<R: Real> CompiledFrac<R> {
    pub(crate) fn compile(f: &Frac, state: &[Var], jets: &mut JetTable) -> CompiledFrac<R> {
        CompiledFrac {
            num: CompiledPoly::compile(f.numer(), state, jets),
            den: CompiledPoly::compile(f.denom(), state, jets),
            den_is_one: f.denom().is_one(),
        }
    }

    /// `None` on an exactly vanishing denominator.
    pub(crate) fn eval(&self, state: &[C<R>], t: C<R>, jets: &[C<R>]) -> Option<C<R>> {
        let n = self.num.eval(state, t, jets);
        if self.den_is_one {
            return Some(n);
        }
        let d = self.den.eval(state, t, jets);
        (!d.is_zero()).then(|| n / d)
    }

    pub(crate) fn eval_den(&self, state: &[C<R>], t: C<R>, jets: &[C<R>]) -> C<R> {
        if self.den_is_one {
            C::one()
        } else {
            self.den.eval(state, t, jets)
        }
    }
}

/// Everything the integrator evaluates, compiled for one scalar type:
/// the field in each chart and the transition maps between charts.
#[derive(Clone, Debug)]
pub(crate) struct Evaluator<R> {
    jet_polys: Vec<Vec<C<R>>>,
    pub(crate) fields: Vec<[CompiledFrac<R>; 2]>,
    /// `transitions[j][k]`: chart-k coordinates from chart-j coordinates.
    transitions: Vec<Vec<Option<[CompiledFrac<R>; 2]>>>,
}

impl<R: Real> Evaluator<R> {
    pub(crate) fn new(inst: &NumericInstance) -> Evaluator<R> {
        let mut jets = JetTable::default();
        let fields = inst
            .charts
            .iter()
            .map(|c| {
                let vars = &c.system.vars;
                [
                    CompiledFrac::compile(&c.system.rhs[0], vars, &mut jets),
                    CompiledFrac::compile(&c.system.rhs[1], vars, &mut jets),
                ]
            })
            .collect();
        let mut transitions = Vec::new();
        for cj in &inst.charts {
            let mut row = Vec::new();
            for ck in &inst.charts {
                let maps: Vec<Frac> = ck.chart.forward.iter().map(|f| cj.chart.pull_back(f)).collect();
                row.push(Some([
                    CompiledFrac::compile(&maps[0], &cj.chart.new, &mut jets),
                    CompiledFrac::compile(&maps[1], &cj.chart.new, &mut jets),
                ]));
            }
            transitions.push(row);
        }
        let jet_polys = jets
            .polys(inst)
            .iter()
            .map(|p| p.coeffs().iter().map(from_gauss).collect())
            .collect();
        Evaluator { jet_polys, fields, transitions }
    }

    pub(crate) fn jet_values(&self, t: C<R>) -> Vec<C<R>> {
        self.jet_polys.iter().map(|cs| cs.iter().rev().fold(C::zero(), |acc, c| acc * t + *c)).collect()
    }

    pub(crate) fn field(&self, chart: usize, state: &[C<R>; 2], t: C<R>, jets: &[C<R>]) -> Option<[C<R>; 2]> {
        let f = &self.fields[chart];
        Some([f[0].eval(state, t, jets)?, f[1].eval(state, t, jets)?])
    }

    pub(crate) fn transition(
        &self,
        from: usize,
        to: usize,
        state: &[C<R>; 2],
        t: C<R>,
        jets: &[C<R>],
    ) -> Option<[C<R>; 2]> {
        if from == to {
            return Some(*state);
        }
        let m = self.transitions[from][to].as_ref()?;
        Some([m[0].eval(state, t, jets)?, m[1].eval(state, t, jets)?])
    }

    pub(crate) fn num_charts(&self) -> usize {
        self.fields.len()
    }
}

/// Base symbols appearing in `f` other than the excluded variables.
pub fn free_symbols(f: &Frac, exclude: &[Var]) -> BTreeSet<String> {
    f.vars()
        .into_iter()
        .filter(|v| !v.is_time() && !exclude.contains(v))
        .map(|v| v.name().to_string())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn sys(y: &str, z: &str) -> System {
        System::parse(&[("y", y), ("z", z)]).unwrap()
    }

    #[test]
    fn bindings_parse_with_imaginary_unit() {
        let p = GaussPoly::parse("(1+2*i)*t^2 - 3/2").unwrap();
        let v: Complex64 = p.eval(Complex64::new(1.0, 0.0));
        assert!((v - Complex64::new(-0.5, 2.0)).norm() < 1e-15);
        assert_eq!(p.derivative().derivative().degree(), Some(0));
        assert!(GaussPoly::parse("a*t").is_err());
    }

    #[test]
    fn jets_evaluate_to_derivatives_of_bindings() {
        let inst = NumericInstance::with_bindings(sys("z", "y*z+a"), &[("a", "t^3")]).unwrap();
        let f = crate::charts::parse_frac("a''").unwrap();
        let v: Complex64 = inst.eval_coefficient(&f, Complex64::new(2.0, 0.0)).unwrap();
        assert!((v - Complex64::new(12.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn unbound_symbol_is_a_construction_error() {
        let err = NumericInstance::with_bindings(sys("z", "y*z+a+b"), &[("a", "t")]).unwrap_err();
        assert_eq!(err, NumericError::UnboundSymbol("b".into()));
    }

    #[test]
    fn transitions_invert_each_other() {
        let inst = NumericInstance::with_bindings(sys("y^2+a", "-z^2"), &[("a", "t")])
            .unwrap()
            .with_product_charts()
            .unwrap();
        let ev: Evaluator<f64> = Evaluator::new(&inst);
        let t = Complex64::new(0.3, 0.1);
        let jets = ev.jet_values(t);
        let p = [Complex64::new(1.5, -0.5), Complex64::new(-2.0, 0.25)];
        for k in 1..ev.num_charts() {
            let q = ev.transition(0, k, &p, t, &jets).unwrap();
            let back = ev.transition(k, 0, &q, t, &jets).unwrap();
            assert!((back[0] - p[0]).norm() + (back[1] - p[1]).norm() < 1e-13, "chart {k}");
        }
    }
}
