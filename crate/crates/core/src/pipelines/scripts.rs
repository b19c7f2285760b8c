//! Condition-derivation scripts: ordered chart/point/symmetry steps per
//! family, kept as serializable data.

use serde::{Deserialize, Serialize};

use super::family::Family;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub new: [String; 2],
    pub forward: [String; 2],
    pub inverse: [String; 2],
}

impl ChartSpec {
    pub fn new(new: [&str; 2], forward: [&str; 2], inverse: [&str; 2]) -> ChartSpec {
        ChartSpec { new: new.map(String::from), forward: forward.map(String::from), inverse: inverse.map(String::from) }
    }

    pub fn name(&self) -> String {
        format!("{}={}, {}={}", self.new[0], self.forward[0], self.new[1], self.forward[1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    /// Canonical equation at `at` in the chart, of the expected index.
    Point { chart: ChartSpec, at: [String; 2], index: u32, solve_for: Option<String> },
    /// Images of the conditions found so far under a symmetry of the form.
    Symmetry { state: ChartSpec, action: Vec<(String, String)>, solve_for: Option<String> },
    /// A condition stated directly, with its source.
    Direct { source: String, condition: String, solve_for: Option<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SufficiencyBasis {
    /// Reduction to an equation known to be free of movable critical points.
    Reduction,
    /// Birational resolution of the poles.
    Geometric,
    /// The listed conditions are not known to be sufficient.
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Script {
    /// Right-hand sides of `y'` and `z'` in the working normal form.
    pub template: [String; 2],
    pub steps: Vec<Step>,
    pub sufficiency: SufficiencyBasis,
    pub note: String,
}

fn point(chart: &ChartSpec, at: [&str; 2], index: u32, solve_for: Option<&str>) -> Step {
    Step::Point { chart: chart.clone(), at: at.map(String::from), index, solve_for: solve_for.map(String::from) }
}

fn symmetry(forward: [&str; 2], inverse: [&str; 2], action: &[(&str, &str)], solve_for: Option<&str>) -> Step {
    Step::Symmetry {
        state: ChartSpec::new(["Y", "Z"], forward, inverse),
        action: action.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        solve_for: solve_for.map(String::from),
    }
}

fn script(y: &str, z: &str, steps: Vec<Step>, sufficiency: SufficiencyBasis, note: &str) -> Script {
    Script { template: [y.to_string(), z.to_string()], steps, sufficiency, note: note.to_string() }
}

/// `u = 1/y, v = z/y`.
fn projective() -> ChartSpec {
    ChartSpec::new(["u", "v"], ["1/y", "z/y"], ["1/u", "v/u"])
}

/// `u = s/y` keeping `z`.
fn keep_z(s: &str) -> ChartSpec {
    ChartSpec::new(["u", "z"], [&format!("{s}/y"), "z"], [&format!("{s}/u"), "z"])
}

/// `u = 1/z` keeping `y` (renamed `v`).
fn keep_y() -> ChartSpec {
    ChartSpec::new(["u", "v"], ["1/z", "y"], ["v", "1/u"])
}

/// `u = 1/y, v = z/y^2`.
fn weighted() -> ChartSpec {
    ChartSpec::new(["u", "v"], ["1/y", "z/y^2"], ["1/u", "v/u^2"])
}

pub fn family_script(family: Family) -> Script {
    use Family::*;
    use SufficiencyBasis::*;
    match family {
        I => script("-y^2+B*z", "-y*z", vec![], Reduction, "linear fractional flow; (1/z)'' = B"),
        II => script(
            "y*(y-2*z)+A*y+a",
            "-z^2+C*y",
            vec![point(&projective(), ["0", "0"], 1, Some("C")), point(&projective(), ["0", "1"], 1, Some("A"))],
            Reduction,
            "u = y - z solves u' = u^2 + a",
        ),
        III => script("y^2", "2*y*z+C*y", vec![], Reduction, "linear equation in z after solving for y"),
        IV => script("-y^2+B*z", "C*y", vec![point(&projective(), ["0", "0"], 1, Some("C"))], Reduction, "Riccati equation in y"),
        V0 => script("0", "6*y^2", vec![], Reduction, "linear"),
        V => script(
            "z",
            "6*y^2+f",
            vec![Step::Direct { source: "second-order equation y'' = 6y^2 + f".into(), condition: "f''".into(), solve_for: Some("f''".into()) }],
            Reduction,
            "first Painleve equation or elliptic functions",
        ),
        VI => script(
            "B*z+a",
            "z*(z+y)+b",
            vec![point(&ChartSpec::new(["u", "v"], ["-1/z", "y/z"], ["-v/u", "-1/u"]), ["0", "0"], 1, Some("B"))],
            Reduction,
            "z solves a Riccati equation",
        ),
        VII0 => script("0", "y*z+a", vec![], Reduction, "linear"),
        VII => script(
            "z+a",
            "y*z+b",
            vec![point(&ChartSpec::new(["u", "v"], ["-1/y", "z/y^2-1/2"], ["-1/u", "(v+1/2)/u^2"]), ["0", "0"], 2, Some("a"))],
            Reduction,
            "y' = y^2/2 + integral of b",
        ),
        VIII(n) => {
            let shifted = ChartSpec::new(["u", "v"], ["1/y", "z/y-1"], ["1/u", "(v+1)/u"]);
            let jet = format!("b{}", "'".repeat(n as usize - 1));
            script(
                &format!("y*(y-{}*z)+A*y+a", n + 2),
                &format!("-z*({n}*y+z)+b"),
                vec![point(&shifted, ["0", "0"], 1, Some("A")), point(&keep_z("-1"), ["0", "0"], n, Some(&jet))],
                Geometric,
                "elementary transformations remove all poles",
            )
        }
        IXA0(n) => script("-y^2", &format!("-{}*y*z+C*y", n + 1), vec![], Reduction, "closed-form solution has no logarithm for negative index"),
        IXA3 => script(
            "-y^2+z",
            "-4*y*z+D*z+b",
            vec![point(&ChartSpec::new(["u", "v"], ["1/y", "z/y^2+1"], ["1/u", "(v-1)/u^2"]), ["0", "0"], 1, Some("D"))],
            Reduction,
            "y = w'/(2w) linearizes to w''' = 2bw",
        ),
        IXB0(n) => {
            let jet = format!("C{}", "'".repeat(n as usize - 1));
            script(
                "-y^2",
                &format!("{}*y*z+C*y", n - 1),
                vec![Step::Direct { source: "closed-form solution".into(), condition: jet.clone(), solve_for: Some(jet) }],
                Reduction,
                "z = (t-t0)^(n-1) * integral of C(s)/(s-t0)^n",
            )
        }
        IXB(n) => {
            let v1 = format!("{}/2", n + 1);
            let steps = match n {
                2 => vec![point(&weighted(), ["0", "0"], 3, Some("b")), point(&weighted(), ["0", &v1], 6, Some("a''''"))],
                3 => vec![point(&weighted(), ["0", "0"], 4, None), point(&weighted(), ["0", &v1], 4, None)],
                5 => vec![point(&weighted(), ["0", &v1], 3, Some("b")), point(&weighted(), ["0", "0"], 6, Some("a''''"))],
                _ => vec![],
            };
            let note = match n {
                2 => "u = z/6 + a/12 solves u'' = 6u^2 + f",
                3 => "y solves y'' = 2y^3 + fy + g",
                _ => "birational to w'' = 6w^2 + q'' - 6q^2",
            };
            script("-y^2+z+a", &format!("{}*y*z+b", n - 1), steps, Reduction, note)
        }
        XI => script(
            "y*(y-z)+q*y+a",
            "z*(z-y)-q*z+b",
            vec![point(&keep_z("-1"), ["0", "0"], 1, Some("b")), symmetry(["z", "y"], ["Z", "Y"], &[("q", "-q"), ("a", "b"), ("b", "a")], Some("a"))],
            Reduction,
            "y' = y^2 + qy + K",
        ),
        XII => script(
            "y*(2*z+y)+2*f*y-a",
            "-z*(2*y+z)-2*f*z+b",
            vec![
                point(&keep_z("-1"), ["0", "0"], 2, Some("b'")),
                symmetry(["-z", "-y"], ["-Z", "-Y"], &[("f", "-f"), ("a", "b"), ("b", "a")], Some("a'")),
                symmetry(["-y", "z+y+2*f"], ["-Y", "Z+Y-2*f"], &[("f", "-f"), ("a", "-a"), ("b", "2*f'-a+b")], Some("f''")),
            ],
            Reduction,
            "y solves the fourth Painleve equation with alpha = a/2 - b - f', beta = a",
        ),
        XIII => script(
            "1/2*y*(2*z-y)+2*p*y+a",
            "1/2*z*(3*y-2*z)-4*p*z+b",
            vec![
                point(&keep_y(), ["0", "0"], 1, Some("a")),
                point(&keep_z("2"), ["0", "0"], 3, Some("b''")),
                symmetry(["-y", "z-y+4*p"], ["-Y", "Z-Y-4*p"], &[("p", "-p"), ("b", "b+4*p'")], None),
            ],
            Reduction,
            "u = y/2 - p solves u'' = 2u^3 + fu + g",
        ),
        XIV => script(
            "y*(2*z-y)+3*p*y+a",
            "z*(y-z)-2*p*z+b",
            vec![
                point(&projective(), ["0", "0"], 2, Some("b")),
                point(&keep_y(), ["0", "0"], 2, Some("a'")),
                point(&projective(), ["0", "2/3"], 6, None),
            ],
            Reduction,
            "u = z + p solves u'' = -uu' + u^3 - 12qu + 12q'",
        ),
    }
}
