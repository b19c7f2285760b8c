//! Running condition scripts and transporting the conditions to a given
//! system of the family.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use super::family::Family;
use super::scripts::{family_script, ChartSpec, Script, Step, SufficiencyBasis};
use super::{leading_jet, PipelineError};
use crate::algebra::diff::{normalize_condition, same_condition, substitute_frac_params, Rule, Rules};
use crate::algebra::expr::parse_poly;
use crate::algebra::{Frac, MPoly, Var};
use crate::charts::canonical::necessary_condition_with;
use crate::charts::statepoly::StatePoly;
use crate::charts::{apply_chart, extract_canonical, RationalChart, System};

fn as_display<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn as_display_list<S: Serializer>(v: &[MPoly], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| p.to_string()))
}

fn as_display_opt<S: Serializer>(v: &Option<Var>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionStep {
    /// Chart and point, symmetry, or other source of the condition.
    pub source: String,
    #[serde(serialize_with = "as_display")]
    pub condition: MPoly,
    /// Jet eliminated by the condition in later steps.
    #[serde(serialize_with = "as_display_opt")]
    pub solved_for: Option<Var>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    FreeOfMovableCriticalPointsGivenConditions,
    Undetermined,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub family: Family,
    /// Conditions on the working normal form, in derivation order.
    pub steps: Vec<ConditionStep>,
    /// Conditions transported to the analysed system that do not vanish.
    #[serde(serialize_with = "as_display_list")]
    pub final_conditions: Vec<MPoly>,
    pub verdict: Verdict,
    pub sufficiency: SufficiencyBasis,
    pub note: String,
    #[serde(skip)]
    pub template: System,
    #[serde(skip)]
    pub rules: Rules,
}

impl ConditionReport {
    pub fn conditions(&self) -> Vec<MPoly> {
        self.steps.iter().map(|s| s.condition.clone()).collect()
    }

    /// Rules from the first `k` conditions.
    pub fn rules_before(&self, k: usize) -> Rules {
        let mut rules = Rules::new();
        for s in &self.steps[..k] {
            if let Some(j) = s.solved_for {
                rules.push(Rule::solve(&s.condition, j).expect("solved when recorded"));
            }
        }
        rules
    }
}

fn template_system(script: &Script) -> Result<System, PipelineError> {
    Ok(System::parse(&[("y", &script.template[0]), ("z", &script.template[1])])?)
}

fn chart_of(spec: &ChartSpec, old: &[&str; 2]) -> Result<RationalChart, PipelineError> {
    let new = [spec.new[0].as_str(), spec.new[1].as_str()];
    let fw = [spec.forward[0].as_str(), spec.forward[1].as_str()];
    let inv = [spec.inverse[0].as_str(), spec.inverse[1].as_str()];
    Ok(RationalChart::parse(&spec.name(), old, &new, &fw, &inv)?)
}

fn solve_rule(cond: &MPoly, solve_for: Option<&str>) -> Result<Option<Rule>, PipelineError> {
    let jet = match solve_for {
        Some(name) => cond.vars().into_iter().find(|v| v.to_string() == name),
        None => None,
    }
    .or_else(|| leading_jet(cond));
    match jet {
        Some(j) => Ok(Some(Rule::solve(cond, j)?)),
        None => Ok(None),
    }
}

fn parse_action(action: &[(String, String)]) -> Result<BTreeMap<Var, Frac>, PipelineError> {
    action
        .iter()
        .map(|(k, v)| Ok((Var::new(k), super::conditions::parse_any(v)?)))
        .collect()
}

pub(crate) fn parse_any(src: &str) -> Result<Frac, PipelineError> {
    Ok(crate::charts::parse_frac(src)?)
}

struct Runner {
    template: System,
    rules: Rules,
    steps: Vec<ConditionStep>,
}

impl Runner {
    fn push(&mut self, source: String, cond: MPoly, solve_for: Option<&str>) -> Result<(), PipelineError> {
        let cond = normalize_condition(&cond);
        if cond.is_zero() || self.rules.annihilates(&cond) {
            return Ok(());
        }
        let rule = solve_rule(&cond, solve_for)?;
        let solved_for = rule.as_ref().map(|r| r.jet);
        if let Some(r) = rule {
            self.rules.push(r);
        }
        self.steps.push(ConditionStep { source, condition: cond, solved_for });
        Ok(())
    }

    fn point(&mut self, chart: &ChartSpec, at: &[String; 2], index: u32, solve_for: Option<&str>) -> Result<(), PipelineError> {
        let c = chart_of(chart, &["y", "z"])?;
        let t = apply_chart(&self.template.reduce(&self.rules), &c)?;
        let at = [super::conditions::parse_any(&at[0])?, super::conditions::parse_any(&at[1])?];
        let source = format!("{} at ({}, {})", chart.name(), at[0], at[1]);
        let ce = extract_canonical(&t, &at)?;
        if ce.n != index {
            return Err(PipelineError::UnexpectedIndex { expected: index, found: ce.n, source_name: source });
        }
        let cond = necessary_condition_with(&ce, &self.rules)?;
        self.push(source, cond, solve_for)
    }

    fn symmetry(&mut self, state: &ChartSpec, action: &[(String, String)], solve_for: Option<&str>) -> Result<(), PipelineError> {
        let action = parse_action(action)?;
        check_symmetry(&self.template, state, &action, &self.rules)?;
        let source = format!("symmetry (y, z) -> ({}, {})", state.forward[0], state.forward[1]);
        let images: Vec<MPoly> = self
            .steps
            .iter()
            .map(|s| {
                let img = substitute_frac_params(&Frac::from_poly(s.condition.clone()), &action);
                self.rules.reduce(&img).numer().clone()
            })
            .collect();
        for img in images {
            if img.is_zero() || self.steps.iter().any(|s| same_condition(&s.condition, &img)) {
                continue;
            }
            self.push(source.clone(), img, solve_for)?;
        }
        Ok(())
    }
}

/// Transports the form through the state map and compares with the form at
/// the acted-on parameters, modulo `rules`.
pub fn check_symmetry(template: &System, state: &ChartSpec, action: &BTreeMap<Var, Frac>, rules: &Rules) -> Result<(), PipelineError> {
    let c = chart_of(state, &["y", "z"])?;
    let moved = apply_chart(&template.reduce(rules), &c)?;
    let rename: BTreeMap<Var, Frac> = moved.vars.iter().zip(&template.vars).map(|(n, o)| (*n, Frac::var(*o))).collect();
    let image = template.substitute_params(action);
    for (k, (m, i)) in moved.rhs.iter().zip(&image.rhs).enumerate() {
        let diff = rules.reduce(&(m.substitute(&rename) - i.clone()));
        if !diff.is_zero() {
            return Err(PipelineError::NotASymmetry(format!("equation {} differs by {diff}", k + 1)));
        }
    }
    Ok(())
}

/// Runs a script on its working normal form.
pub fn run_script(family: Family, script: &Script) -> Result<ConditionReport, PipelineError> {
    let template = template_system(script)?;
    let mut r = Runner { template: template.clone(), rules: Rules::new(), steps: Vec::new() };
    for step in &script.steps {
        match step {
            Step::Point { chart, at, index, solve_for } => r.point(chart, at, *index, solve_for.as_deref())?,
            Step::Symmetry { state, action, solve_for } => r.symmetry(state, action, solve_for.as_deref())?,
            Step::Direct { source, condition, solve_for } => {
                let c = r.rules.reduce_poly(&parse_poly(condition)?).numer().clone();
                r.push(source.clone(), c, solve_for.as_deref())?
            }
        }
    }
    let verdict = match script.sufficiency {
        SufficiencyBasis::Open => Verdict::Undetermined,
        _ => Verdict::FreeOfMovableCriticalPointsGivenConditions,
    };
    Ok(ConditionReport {
        family,
        final_conditions: r.steps.iter().map(|s| s.condition.clone()).collect(),
        steps: r.steps,
        verdict,
        sufficiency: script.sufficiency.clone(),
        note: script.note.clone(),
        template,
        rules: r.rules,
    })
}

/// Adds the images of the report's conditions under a symmetry of the
/// working form.
pub fn apply_symmetry(report: &ConditionReport, state: &ChartSpec, action: &[(String, String)]) -> Result<ConditionReport, PipelineError> {
    let mut r = Runner { template: report.template.clone(), rules: report.rules.clone(), steps: report.steps.clone() };
    r.symmetry(state, action, None)?;
    let mut out = report.clone();
    out.final_conditions = r.steps.iter().map(|s| s.condition.clone()).collect();
    out.steps = r.steps;
    out.rules = r.rules;
    Ok(out)
}

/// Values of the template's coefficient symbols making it equal to `s`.
pub fn fit_template(template: &System, s: &System) -> Result<BTreeMap<Var, Frac>, PipelineError> {
    let mismatch = |m: String| PipelineError::ShapeMismatch(m);
    if s.dim() != 2 {
        return Err(mismatch("expected two equations".into()));
    }
    let (ty, tz) = (template.var(0), template.var(1));
    let (sy, sz) = (s.var(0), s.var(1));
    let mut binding: BTreeMap<Var, Frac> = BTreeMap::new();
    for k in 0..2 {
        let (tp, _) = StatePoly::expand(&template.rhs[k], ty, tz, 0).filter(|(_, e)| *e).ok_or_else(|| mismatch("template".into()))?;
        let (sp, exact) = StatePoly::expand(&s.rhs[k], sy, sz, 0).ok_or_else(|| mismatch("pole in the state variables".into()))?;
        if !exact {
            return Err(mismatch("not polynomial in the state variables".into()));
        }
        for (key, _) in sp.terms() {
            if tp.coeff(key.0, key.1).is_zero() {
                return Err(mismatch(format!("unexpected monomial y^{} z^{} in equation {}", key.0, key.1, k + 1)));
            }
        }
        for (key, tc) in tp.terms() {
            let sc = sp.coeff(key.0, key.1);
            if tc.is_constant() {
                if *tc != sc {
                    return Err(mismatch(format!("coefficient of y^{} z^{} in equation {} must be {tc}", key.0, key.1, k + 1)));
                }
                continue;
            }
            let p = tc.as_poly().ok_or_else(|| mismatch("template".into()))?;
            let (m, c) = match (p.num_terms(), p.terms().next()) {
                (1, Some((m, c))) if m.degree() == 1 => (m, c),
                _ => return Err(mismatch("template coefficient is not a scaled symbol".into())),
            };
            let sym = m.factors()[0].0;
            let val = sc.scale(&c.recip());
            match binding.get(&sym) {
                Some(prev) if *prev != val => {
                    return Err(mismatch(format!("inconsistent values {prev} and {val} for {sym}")));
                }
                _ => {
                    binding.insert(sym, val);
                }
            }
        }
    }
    Ok(binding)
}

/// Conditions of the family transported to `s`, reduced modulo the
/// assumptions; `final_conditions` keeps those that do not vanish.
pub fn derive_family_conditions(family: Family, s: &System, assumptions: &Rules) -> Result<ConditionReport, PipelineError> {
    let script = family_script(family);
    let mut report = run_script(family, &script)?;
    let binding = fit_template(&report.template, s)?;
    let mut finals: Vec<MPoly> = Vec::new();
    for step in &report.steps {
        let img = substitute_frac_params(&Frac::from_poly(step.condition.clone()), &binding);
        let img = normalize_condition(assumptions.reduce(&img).numer());
        if !img.is_zero() && !finals.iter().any(|f| same_condition(f, &img)) {
            finals.push(img);
        }
    }
    report.final_conditions = finals;
    Ok(report)
}

/// The condition at the index-`n` point of `VIII(n)` with `A = 0`.
pub fn viii_condition(n: u32) -> Result<MPoly, PipelineError> {
    let r = run_script(Family::VIII(n), &family_script(Family::VIII(n)))?;
    Ok(r.steps.last().map(|s| s.condition.clone()).unwrap_or_else(MPoly::zero))
}

