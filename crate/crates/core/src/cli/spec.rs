//! Line-oriented system spec files.
//!
//! ```text
//! [system]
//! vars: y, z
//! dy = z
//! dz = y*z + a
//! [coefficients]
//! a: symbol
//! p: poly 3*t + 1
//! n: 3
//! [instance]
//! a = 1/2 + i
//! [family]
//! VII
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::CliError;
use crate::algebra::expr::{parse_expr_at, Expr};
use crate::algebra::{AlgebraError, Frac, MPoly, Rat, Var};
use crate::charts::System;
use crate::numerics::{GaussPoly, NumericInstance};
use crate::pipelines::Family;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficient {
    /// A differential indeterminate.
    Symbol,
    /// Bound to a polynomial in `t`.
    Poly(GaussPoly),
    /// A concrete integer parameter, substituted into the equations.
    Integer(i64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemSpec {
    pub system: System,
    /// Declaration order is kept.
    pub coefficients: Vec<(String, Coefficient)>,
    /// Values from the `[instance]` section.
    pub instance: BTreeMap<String, GaussPoly>,
    pub family: Option<Family>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    System,
    Coefficients,
    Instance,
    Family,
}

fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse { line, col, msg: msg.into() }
}

fn from_algebra(e: AlgebraError, line: usize) -> CliError {
    match e {
        AlgebraError::Parse { line: l, col, msg } => parse_err(if l == 0 { line } else { l }, col, msg),
        other => parse_err(line, 1, other.to_string()),
    }
}

/// Column (1-based) of the first non-blank character after byte `from`.
fn col_after(raw: &str, from: usize) -> usize {
    let rest = &raw[from..];
    from + (rest.len() - rest.trim_start().len()) + 1
}

struct Equation {
    var: String,
    expr: Expr,
    line: usize,
}

pub fn parse_system_spec(text: &str) -> Result<SystemSpec, CliError> {
    let mut section = Section::None;
    let mut vars: Option<Vec<String>> = None;
    let mut equations: Vec<Equation> = Vec::new();
    let mut coefficients: Vec<(String, Coefficient)> = Vec::new();
    let mut instance_lines: Vec<(String, String, usize, usize)> = Vec::new();
    let mut family = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('[') {
            section = match trimmed {
                "[system]" => Section::System,
                "[coefficients]" => Section::Coefficients,
                "[instance]" => Section::Instance,
                "[family]" => Section::Family,
                _ => return Err(parse_err(line, col_after(raw, 0), format!("unknown section {trimmed}"))),
            };
            continue;
        }
        match section {
            Section::None => return Err(parse_err(line, col_after(raw, 0), "content before the first section")),
            Section::System => {
                if let Some(rest) = trimmed.strip_prefix("vars:") {
                    let vs: Vec<String> = rest.split(',').map(|s| s.trim().to_string()).collect();
                    if vs.len() != 2 || vs.iter().any(|v| !is_ident(v)) {
                        return Err(parse_err(line, col_after(raw, 0), "expected two variable names"));
                    }
                    vars = Some(vs);
                    continue;
                }
                let eq = content.find('=').ok_or_else(|| parse_err(line, col_after(raw, 0), "expected `dv = expression`"))?;
                let lhs = content[..eq].trim();
                let var = lhs
                    .strip_prefix('d')
                    .filter(|v| is_ident(v))
                    .or_else(|| lhs.strip_suffix('\'').filter(|v| is_ident(v)))
                    .ok_or_else(|| parse_err(line, col_after(raw, 0), format!("bad left-hand side `{lhs}`")))?;
                let expr = parse_expr_at(&content[eq + 1..], line, eq + 1).map_err(|e| from_algebra(e, line))?;
                equations.push(Equation { var: var.to_string(), expr, line });
            }
            Section::Coefficients => {
                let colon = content.find(':').ok_or_else(|| parse_err(line, col_after(raw, 0), "expected `name: kind`"))?;
                let name = content[..colon].trim();
                if !is_ident(name) {
                    return Err(parse_err(line, col_after(raw, 0), format!("bad coefficient name `{name}`")));
                }
                let body = content[colon + 1..].trim();
                let body_col = col_after(content, colon + 1);
                let coef = if body == "symbol" {
                    Coefficient::Symbol
                } else if let Some(p) = body.strip_prefix("poly") {
                    let start = content.find("poly").expect("prefix") + 4;
                    Coefficient::Poly(parse_gauss(p, line, start)?)
                } else {
                    let e = parse_expr_at(body, line, body_col - 1).map_err(|e| from_algebra(e, line))?;
                    match e.numeric() {
                        Some(r) if r.is_integer() => Coefficient::Integer(
                            crate::algebra::rat::rat_to_i64(&r)
                                .ok_or_else(|| parse_err(line, body_col, "integer out of range"))?,
                        ),
                        _ => return Err(CliError::NonIntegerFamilyParameter { name: name.to_string(), line }),
                    }
                };
                if coefficients.iter().any(|(n, _)| n == name) {
                    return Err(parse_err(line, col_after(raw, 0), format!("`{name}` declared twice")));
                }
                coefficients.push((name.to_string(), coef));
            }
            Section::Instance => {
                let eq = content.find('=').ok_or_else(|| parse_err(line, col_after(raw, 0), "expected `name = value`"))?;
                let name = content[..eq].trim().to_string();
                instance_lines.push((name, content[eq + 1..].to_string(), line, eq + 1));
            }
            Section::Family => {
                let label = trimmed.strip_prefix("label:").map(str::trim).unwrap_or(trimmed);
                family = Some(
                    label
                        .parse::<Family>()
                        .map_err(|e| parse_err(line, col_after(raw, 0), e.to_string()))?,
                );
            }
        }
    }

    let vars = vars.unwrap_or_else(|| equations.iter().map(|e| e.var.clone()).collect());
    if equations.len() != 2 || vars.len() != 2 {
        return Err(parse_err(text.lines().count().max(1), 1, "expected exactly two equations"));
    }
    for (name, _) in &coefficients {
        if vars.contains(name) {
            return Err(parse_err(1, 1, format!("`{name}` is both a variable and a coefficient")));
        }
    }
    let mut rhs = Vec::new();
    for v in &vars {
        let eq = equations
            .iter()
            .find(|e| &e.var == v)
            .ok_or_else(|| parse_err(1, 1, format!("no equation for `{v}`")))?;
        rhs.push(Frac::from_poly(eval_equation(eq, &vars, &coefficients)?));
    }
    let system = System::new(vars.iter().map(|v| Var::new(v)).collect(), rhs);

    let mut instance = BTreeMap::new();
    for (name, src, line, col) in instance_lines {
        if !coefficients.iter().any(|(n, _)| *n == name) {
            return Err(CliError::UndeclaredSymbol { name, line, col: 1 });
        }
        instance.insert(name, parse_gauss(&src, line, col)?);
    }
    Ok(SystemSpec { system, coefficients, instance, family })
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_gauss(src: &str, line: usize, col0: usize) -> Result<GaussPoly, CliError> {
    let e = parse_expr_at(src, line, col0).map_err(|e| from_algebra(e, line))?;
    e.eval(line, &mut |name, order, col| {
        if name == "t" && order == 0 {
            Ok(GaussPoly::t())
        } else {
            Err(AlgebraError::Parse { line, col, msg: format!("`{name}` in a value: only t is allowed") })
        }
    })
    .map_err(|e| from_algebra(e, line))
}

/// Family index; it must be a concrete integer wherever it is used.
const FAMILY_PARAMETER: &str = "n";

fn eval_equation(eq: &Equation, vars: &[String], coefficients: &[(String, Coefficient)]) -> Result<MPoly, CliError> {
    let mut undeclared: Option<(String, usize)> = None;
    let mut non_integer = false;
    let res = eq.expr.eval(eq.line, &mut |name, order, col| {
        if vars.iter().any(|v| v == name) {
            if order > 0 {
                return Err(AlgebraError::Parse { line: eq.line, col, msg: format!("derivative of state variable `{name}`") });
            }
            return Ok(MPoly::var(Var::new(name)));
        }
        if name == "t" {
            return Ok(match order {
                0 => MPoly::var(Var::time()),
                1 => MPoly::one(),
                _ => MPoly::zero(),
            });
        }
        match coefficients.iter().find(|(n, _)| n == name) {
            Some((_, Coefficient::Integer(k))) => {
                if order > 0 {
                    Ok(MPoly::zero())
                } else {
                    Ok(MPoly::constant(Rat::from_integer((*k).into())))
                }
            }
            Some(_) if name == FAMILY_PARAMETER => {
                non_integer = true;
                Err(AlgebraError::UndeclaredSymbol(name.to_string()))
            }
            Some(_) => Ok(MPoly::var(Var::jet(name, order))),
            None => {
                undeclared = Some((name.to_string(), col));
                Err(AlgebraError::UndeclaredSymbol(name.to_string()))
            }
        }
    });
    match res {
        Ok(p) => Ok(p),
        Err(AlgebraError::UndeclaredSymbol(_)) if non_integer => {
            Err(CliError::NonIntegerFamilyParameter { name: FAMILY_PARAMETER.into(), line: eq.line })
        }
        Err(AlgebraError::UndeclaredSymbol(_)) => {
            let (name, col) = undeclared.expect("recorded");
            Err(CliError::UndeclaredSymbol { name, line: eq.line, col })
        }
        Err(e) => Err(from_algebra(e, eq.line)),
    }
}

impl SystemSpec {
    /// Bindings from `poly` coefficients, overridden by `[instance]` values.
    pub fn bindings(&self) -> BTreeMap<String, GaussPoly> {
        let mut out: BTreeMap<String, GaussPoly> = self
            .coefficients
            .iter()
            .filter_map(|(n, c)| match c {
                Coefficient::Poly(p) => Some((n.clone(), p.clone())),
                _ => None,
            })
            .collect();
        out.extend(self.instance.iter().map(|(k, v)| (k.clone(), v.clone())));
        out
    }

    /// Whether every symbolic coefficient has a value.
    pub fn is_numeric(&self) -> bool {
        let b = self.bindings();
        self.coefficients
            .iter()
            .all(|(n, c)| !matches!(c, Coefficient::Symbol) || b.contains_key(n))
    }

    pub fn numeric_instance(&self) -> Result<NumericInstance, CliError> {
        Ok(NumericInstance::new(self.system.clone(), self.bindings())?)
    }

    /// Spec text that parses back to the same system and declarations.
    pub fn to_spec_text(&self) -> String {
        let mut out = String::from("[system]\n");
        let _ = writeln!(out, "vars: {}, {}", self.system.var(0), self.system.var(1));
        for (v, r) in self.system.vars.iter().zip(&self.system.rhs) {
            let _ = writeln!(out, "d{v} = {r}");
        }
        out.push_str("[coefficients]\n");
        for (n, c) in &self.coefficients {
            let _ = match c {
                Coefficient::Symbol => writeln!(out, "{n}: symbol"),
                Coefficient::Poly(p) => writeln!(out, "{n}: poly {}", gauss_text(p)),
                Coefficient::Integer(k) => writeln!(out, "{n}: {k}"),
            };
        }
        if !self.instance.is_empty() {
            out.push_str("[instance]\n");
            for (n, p) in &self.instance {
                let _ = writeln!(out, "{n} = {}", gauss_text(p));
            }
        }
        if let Some(f) = self.family {
            let _ = writeln!(out, "[family]\n{f}");
        }
        out
    }
}

fn gauss_text(p: &GaussPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let terms: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let coef = format!("({c})");
            match k {
                0 => coef,
                1 => format!("{coef}*t"),
                _ => format!("{coef}*t^{k}"),
            }
        })
        .collect();
    terms.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipelines::table1_entry;

    #[test]
    fn row_vii_matches_the_catalog() {
        let spec = parse_system_spec("[system]\ndy = z\ndz = y*z + a\n[coefficients]\na: symbol\n").unwrap();
        assert_eq!(spec.system, table1_entry(Family::VII).system().unwrap());
        assert!(!spec.is_numeric());
    }

    #[test]
    fn division_by_a_symbol_is_a_parse_error() {
        let err = parse_system_spec("[system]\ndy = z\ndz = y*z + a/b\n[coefficients]\na: symbol\nb: symbol\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn poly_binding_makes_an_instance() {
        let text = "[system]\ndy = -y^2\ndz = y*z + p*y\n[coefficients]\np: poly 3*t + 1\n[family]\nIX.B0(2)\n";
        let spec = parse_system_spec(text).unwrap();
        assert_eq!(spec.system, table1_entry(Family::IXB0(2)).system().unwrap());
        assert!(spec.is_numeric());
        assert_eq!(spec.family, Some(Family::IXB0(2)));
        let inst = spec.numeric_instance().unwrap();
        assert_eq!(inst.binding(Var::jet("p", 1)), Some(GaussPoly::parse("3").unwrap()));
    }

    #[test]
    fn undeclared_symbols_report_their_position() {
        let err = parse_system_spec("[system]\ndy = z\ndz = y*z + c\n").unwrap_err();
        assert_eq!(err, CliError::UndeclaredSymbol { name: "c".into(), line: 3, col: 12 });
    }

    #[test]
    fn integer_parameters_substitute_and_must_be_integers() {
        let text = "[system]\ndy = y*(y-(n+2)*z) + a\ndz = -z*(n*y+z) + b\n[coefficients]\na: symbol\nb: symbol\nn: 3\n";
        let spec = parse_system_spec(text).unwrap();
        assert_eq!(spec.system, table1_entry(Family::VIII(3)).system().unwrap());
        let bad = text.replace("n: 3", "n: 3/2");
        assert!(matches!(parse_system_spec(&bad), Err(CliError::NonIntegerFamilyParameter { .. })));
        let sym = text.replace("n: 3", "n: symbol");
        assert!(matches!(parse_system_spec(&sym), Err(CliError::NonIntegerFamilyParameter { line: 2, .. })));
    }

    #[test]
    fn printing_round_trips() {
        let text = "[system]\ndy = -y^2 + z - 1/2*f\ndz = 2*y*z + H\n[coefficients]\nf: symbol\nH: poly (1+2*i)*t^2 - 3\n[instance]\nf = 1/3\n";
        let spec = parse_system_spec(text).unwrap();
        let again = parse_system_spec(&spec.to_spec_text()).unwrap();
        assert_eq!(again, spec);
    }
}
