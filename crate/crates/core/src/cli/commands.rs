//! Command implementations on parsed spec text.

use num_complex::Complex64;
use serde_json::{json, Value};

use super::args::Command;
use super::spec::{parse_system_spec, Coefficient, SystemSpec};
use super::{CliError, Precision, Report, EXIT_INCONCLUSIVE, EXIT_SHAPE};
use crate::algebra::diff::Rules;
use crate::algebra::expr::{parse_expr, parse_poly};
use crate::algebra::{AlgebraError, MPoly};
use crate::charts::dominant::dominant_part;
use crate::charts::parse_frac;
use crate::numerics::{
    equivalence_residual, monodromy_test, write_trace, ComplexPath, Dd, GaussPoly, MonodromyReport,
    ResidualReport, Verdict,
};
use crate::pipelines::{
    derive_family_conditions, equivalence_map, table1, table2, Family, FirstIntegral, PipelineError,
};
use crate::quadclass::table2::{match_table2, Classification};

pub fn run_command(cmd: &Command, text: &str, precision: Precision) -> Result<Report, CliError> {
    match cmd {
        Command::Classify { .. } => classify(&parse_system_spec(text)?),
        Command::Conditions { family, .. } => conditions(&parse_system_spec(text)?, family.as_deref()),
        Command::Catalog { table, n_ix, n_viii } => catalog(*table, *n_ix, *n_viii),
        Command::IntegralCheck { h, assume, .. } => integral_check(&parse_system_spec(text)?, h, assume),
        Command::Monodromy { center, radius, base, init, tol, trace, .. } => {
            let spec = parse_system_spec(text)?;
            let (report, warnings) =
                monodromy(&spec, parse_complex(center)?, *radius, parse_complex(base)?, parse_pair(init)?, *tol, precision)?;
            if let Some(path) = trace {
                let mut buf = Vec::new();
                write_trace(&mut buf, &report.trace).map_err(|e| CliError::Io(e.to_string()))?;
                std::fs::write(path, buf).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            }
            let mut out = Report::new("monodromy", text, json!(report));
            out.result["precision"] = json!(precision);
            out.warnings = warnings;
            if report.verdict == Verdict::Inconclusive {
                out.exit_code = EXIT_INCONCLUSIVE;
            }
            Ok(out)
        }
        Command::Equivalence { family, init, path, tol, .. } => {
            let spec = parse_system_spec(text)?;
            equivalence(&spec, family.as_deref(), parse_pair(init)?, parse_pair(path)?, *tol, precision)
        }
    }
}

/// A complex constant: a decimal number, or an exact expression in `i`.
pub fn parse_complex(src: &str) -> Result<Complex64, CliError> {
    let s = src.trim();
    if let Ok(x) = s.parse::<f64>() {
        return Ok(Complex64::new(x, 0.0));
    }
    let e = parse_expr(s).map_err(|e| from_arg(e, src))?;
    let g: GaussPoly = e
        .eval(1, &mut |name, _, col| {
            Err(AlgebraError::Parse { line: 1, col, msg: format!("`{name}` in a numeric argument") })
        })
        .map_err(|e| from_arg(e, src))?;
    Ok(g.eval::<f64>(Complex64::new(0.0, 0.0)))
}

fn from_arg(e: AlgebraError, src: &str) -> CliError {
    CliError::Usage(format!("bad numeric argument `{src}`: {e}"))
}

/// Two comma-separated complex constants.
pub fn parse_pair(src: &str) -> Result<[Complex64; 2], CliError> {
    let parts: Vec<&str> = src.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!("expected two comma-separated values, got `{src}`")));
    }
    Ok([parse_complex(parts[0])?, parse_complex(parts[1])?])
}

fn quad_classification(spec: &SystemSpec) -> Result<(Classification, String), CliError> {
    let dp = dominant_part(&spec.system, [1, 1])?;
    let q = dp.to_quad_pair().ok_or_else(|| {
        PipelineError::ShapeMismatch(format!("dominant part {} is not a quadratic pair", dp.system))
    })?;
    Ok((match_table2(&q), q.to_string()))
}

fn classify(spec: &SystemSpec) -> Result<Report, CliError> {
    let (class, quad) = quad_classification(spec)?;
    let mut result = json!({
        "label": class.bureau.to_string(),
        "n": class.bureau.n,
        "quadratic_part": quad,
        "indices": class.profile.column(),
    });
    let detail = serde_json::to_value(&class).expect("classification serializes");
    if let (Value::Object(r), Value::Object(d)) = (&mut result, detail) {
        for (k, v) in d {
            if k != "warnings" {
                r.insert(k, v);
            }
        }
    }
    let mut report = Report::new("classify", "", result);
    report.warnings = class.warnings.clone();
    Ok(report)
}

/// Resolves a family label. Labels of parametric families without `(n)` take
/// `n` from the spec's integer parameter, else from the classification.
pub fn resolve_family(label: Option<&str>, spec: &SystemSpec) -> Result<Family, CliError> {
    let label = match (label, spec.family) {
        (Some(l), _) => l.trim().to_string(),
        (None, Some(f)) => return Ok(f),
        (None, None) => return Err(CliError::Usage("no family given: use --family or a [family] section".into())),
    };
    if let Ok(f) = label.parse::<Family>() {
        return Ok(f);
    }
    if !matches!(label.as_str(), "VIII" | "IX" | "IX.A0" | "IX.B0" | "IX.B") {
        return Err(PipelineError::UnknownFamily(label).into());
    }
    let from_spec = spec.coefficients.iter().find_map(|(name, c)| match c {
        Coefficient::Integer(k) if name == "n" => Some(*k),
        _ => None,
    });
    let n = match from_spec {
        Some(n) => n,
        None => quad_classification(spec)?
            .0
            .bureau
            .n
            .ok_or_else(|| PipelineError::ShapeMismatch(format!("quadratic part is not of type {label}")))?,
    };
    format!("{label}({n})").parse::<Family>().map_err(CliError::from)
}

fn conditions(spec: &SystemSpec, family: Option<&str>) -> Result<Report, CliError> {
    let family = resolve_family(family, spec)?;
    let report = derive_family_conditions(family, &spec.system, &Rules::new())?;
    let mut result = serde_json::to_value(&report).expect("condition report serializes");
    result["conditions"] = json!(report.conditions().iter().map(|c| c.to_string()).collect::<Vec<_>>());
    Ok(Report::new("conditions", "", result))
}

fn catalog(table: Option<u8>, n_ix: i64, n_viii: i64) -> Result<Report, CliError> {
    let t1 = || json!(table1());
    let t2 = || json!(table2(n_ix, n_viii));
    let result = match table {
        Some(1) => json!({ "table1": t1() }),
        Some(2) => json!({ "table2": t2() }),
        _ => json!({ "table1": t1(), "table2": t2() }),
    };
    Ok(Report::new("catalog", "", result))
}

fn integral_check(spec: &SystemSpec, h: &str, assume: &[String]) -> Result<Report, CliError> {
    let hf = parse_frac(h)?;
    let assumptions = assume
        .iter()
        .map(|c| parse_poly(c).map_err(|e| CliError::Pipeline(e.into())))
        .collect::<Result<Vec<MPoly>, CliError>>()?;
    let integral = FirstIntegral::new(hf, assumptions);
    let residual = integral.residual(&spec.system)?;
    let result = json!({
        "integral": integral,
        "residual": residual.to_string(),
        "holds": residual.is_zero(),
    });
    Ok(Report::new("integral-check", "", result))
}

fn monodromy(
    spec: &SystemSpec,
    center: Complex64,
    radius: f64,
    base: Complex64,
    init: [Complex64; 2],
    tol: f64,
    precision: Precision,
) -> Result<(MonodromyReport, Vec<String>), CliError> {
    let inst = spec.numeric_instance()?;
    let report = match precision {
        Precision::Double => monodromy_test::<f64>(&inst, base, init, center, radius, tol)?,
        Precision::Extended => monodromy_test::<Dd>(&inst, base, init, center, radius, tol)?,
    };
    let mut warnings = Vec::new();
    if report.verdict == Verdict::SingleValued {
        warnings.push("no branching detected along this loop; other loops and initial values are not covered".into());
    }
    if report.verdict == Verdict::Inconclusive {
        warnings.push("discrepancy between tolerance and ten times tolerance; retry with a smaller tol or PQL_PRECISION=extended".into());
    }
    Ok((report, warnings))
}

fn equivalence(
    spec: &SystemSpec,
    family: Option<&str>,
    init: [Complex64; 2],
    ends: [Complex64; 2],
    tol: f64,
    precision: Precision,
) -> Result<Report, CliError> {
    let family = resolve_family(family, spec)?;
    let map = equivalence_map(family)?;
    if !spec.system.equivalent_mod(&map.source, &map.rules) {
        return Err(PipelineError::ShapeMismatch(format!(
            "system {} is not the normal form {} of {family}",
            spec.system, map.source
        ))
        .into());
    }
    let check = map.verify()?;
    let mut warnings = Vec::new();
    let numeric: Option<ResidualReport> = if spec.is_numeric() {
        let inst = spec.numeric_instance()?;
        let path = ComplexPath::line(ends[0], ends[1])?;
        let r = match precision {
            Precision::Double => equivalence_residual::<f64>(&inst, &map, init, &path, tol),
            Precision::Extended => equivalence_residual::<Dd>(&inst, &map, init, &path, tol),
        };
        Some(r?)
    } else {
        warnings.push("coefficients are symbolic; numeric residual skipped".into());
        None
    };
    let holds = check.holds();
    let mut report = Report::new(
        "equivalence",
        "",
        json!({ "family": family, "symbolic": check, "holds": holds, "numeric": numeric }),
    );
    report.warnings = warnings;
    if !holds {
        report.exit_code = EXIT_SHAPE;
    }
    Ok(report)
}
