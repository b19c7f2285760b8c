//! Acceptance suite: one line per criterion with its runtime budget.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see
//! the report lines.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pql::algebra::diff::{same_condition, Rules};
use pql::algebra::univariate::RatFun1;
use pql::algebra::{rat, Frac, MPoly, Rat, Var};
use pql::charts::{elementary_chain, extract_canonical, necessary_condition, parse_frac, System};
use pql::numerics::{equivalence_residual, monodromy_test, ComplexPath, NumericInstance, Verdict};
use pql::pipelines::{
    equivalence_map, family_script, painleve_one_condition, run_script, table1_entry, verify_first_integral, Family,
    FirstIntegral,
};
use pql::quadclass::table2::table2_rows;
use pql::quadclass::{
    briot_bouquet_check, dual_ratio, orbit_indices, representative, solve_index_diophantine, weighted_ratio_equation,
    Index, IndexTriple, Label, Univalence,
};
use pql::algebra::surd::Surd;

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn poly(s: &str) -> MPoly {
    parse_frac(s).unwrap().numer().clone()
}

fn sorted_indices(label: Label, n: Option<i64>) -> Vec<Index> {
    orbit_indices(&representative(label, n).expect("representative")).summary()
}

fn finite(ks: &[i64]) -> Vec<Index> {
    let mut v: Vec<Index> = ks.iter().map(|&k| Index::Finite(k)).collect();
    v.sort();
    v
}

/// Representatives' index column, including the parametric rows.
fn table2_reproduction() -> Outcome {
    let fixed = [
        (Label::I, None, "---"),
        (Label::V, None, "---"),
        (Label::VII, None, "inf"),
        (Label::VI, None, "1,inf,inf"),
        (Label::XI, None, "2,2,inf"),
        (Label::XII, None, "3,3,3"),
        (Label::XIII, None, "2,4,4"),
        (Label::XIV, None, "2,3,6"),
    ];
    for (label, n, want) in fixed {
        let got = orbit_indices(&representative(label, n).unwrap()).column();
        ensure(got == want, || format!("{label:?}: {got} != {want}"))?;
    }
    let rows = table2_rows();
    ensure(rows.len() == 10, || format!("{} rows", rows.len()))?;
    for n in [-10i64, -5, -3, -2, 2, 3, 4, 5, 10] {
        let got = sorted_indices(Label::IX, Some(n));
        ensure(got == finite(&[n]), || format!("IX({n}): {got:?}"))?;
    }
    for n in 1..=6i64 {
        let got = sorted_indices(Label::VIII, Some(n));
        ensure(got == finite(&[1, n + 1, -n - 1]), || format!("VIII({n}): {got:?}"))?;
    }
    let ii = sorted_indices(Label::II, None);
    ensure(ii == finite(&[1, 1, -1]), || format!("II: {ii:?}"))
}

fn diophantine_census() -> Outcome {
    use Index::{Finite as F, Infinite as Inf};
    let got = solve_index_diophantine();
    let want = [
        IndexTriple::OneOppositePair,
        IndexTriple::Fixed([F(1), Inf, Inf]),
        IndexTriple::Fixed([F(2), F(2), Inf]),
        IndexTriple::Fixed([F(3), F(3), F(3)]),
        IndexTriple::Fixed([F(2), F(4), F(4)]),
        IndexTriple::Fixed([F(2), F(3), F(6)]),
    ];
    ensure(got.len() == want.len() && want.iter().all(|w| got.contains(w)), || {
        format!("{:?}", got.iter().map(|t| t.to_string()).collect::<Vec<_>>())
    })
}

/// `k` with residue `1/k - 1`.
fn index_from(residue: &Surd) -> Option<Rat> {
    let r = residue.as_rational()?;
    let shifted = r + Rat::from_integer(1.into());
    (!shifted.is_zero()).then(|| shifted.recip())
}

fn weighted_briot_bouquet() -> Outcome {
    let up = |cs: &[i64]| pql::algebra::univariate::UniPoly::new(cs.iter().map(|&x| rat(x)).collect());
    let mut admissible = Vec::new();
    for n in -10i64..=10 {
        if (-1..=1).contains(&n) {
            continue;
        }
        let f = weighted_ratio_equation(n);
        // F(v) = (n - 3 v) / (v (2 v - n - 1))
        let closed = RatFun1::new("v", up(&[n, -3]), up(&[0, -n - 1, 2]));
        ensure(f == closed, || format!("n = {n}: {f:?}"))?;
        if n == -3 {
            // the pole at (n+1)/2 cancels; this is the separate IX.A(3) case
            ensure(f == RatFun1::new("v", up(&[-3]), up(&[0, 2])), || format!("n = -3: {f:?}"))?;
            continue;
        }
        let v1 = Surd::rational(Rat::new((n + 1).into(), 2.into()));
        let want = Rat::new((n - 1).into(), (2 * (n + 1)).into()) - rat(1);
        let got = f.residue_at(&v1);
        ensure(got == Surd::rational(want.clone()), || format!("n = {n}: residue {got} != {want}"))?;
        if briot_bouquet_check(&f, &dual_ratio(&f, "w")) == Univalence::Univalent {
            admissible.push(n);
        }
    }
    ensure(admissible == [2, 3, 5], || format!("admissible {admissible:?}"))?;
    for (n, row) in [(2i64, [3, 6, 2]), (3, [4, 4, 2]), (5, [6, 3, 2])] {
        let f = weighted_ratio_equation(n);
        let dual = dual_ratio(&f, "w");
        let at = |g: &RatFun1, p: Surd| index_from(&g.residue_at(&p));
        let got = [
            at(&f, Surd::zero()),
            at(&f, Surd::rational(Rat::new((n + 1).into(), 2.into()))),
            at(&dual, Surd::zero()),
        ];
        let want: Vec<Option<Rat>> = row.iter().map(|&k| Some(rat(k))).collect();
        ensure(got.to_vec() == want, || format!("n = {n}: {got:?}"))?;
    }
    Ok(())
}

/// `u' = 1 + a u^2 + (n+2) u z`, `u z' = n z + b u - u z^2` at the origin.
fn viii_condition(n: i64) -> MPoly {
    let u = format!("1 + a*u^2 + {}*u*z", n + 2);
    let z = format!("({n}*z + b*u - u*z^2)/u");
    let s = System::new(vec![Var::new("u"), Var::new("z")], vec![parse_frac(&u).unwrap(), parse_frac(&z).unwrap()]);
    let ce = extract_canonical(&s, &[Frac::zero(), Frac::zero()]).unwrap();
    necessary_condition(&ce).unwrap()
}

fn malmquist_conditions() -> Outcome {
    let want = ["b", "b'", "b''+a*b-3*b^2", "b'''+4*(a-4*b)*b'+2*b*a'"];
    for (i, w) in want.iter().enumerate() {
        let got = viii_condition(i as i64 + 1);
        ensure(same_condition(&got, &poly(w)), || format!("n = {}: {got}", i + 1))?;
    }
    let c5 = viii_condition(5);
    let top = c5.vars().into_iter().filter(|v| v.name() == "b").map(|v| v.order()).max();
    ensure(top == Some(4), || format!("n = 5: order {top:?} in {c5}"))?;
    let zero: BTreeMap<Var, Frac> =
        c5.vars().into_iter().filter(|v| v.name() == "b").map(|v| (v, Frac::zero())).collect();
    ensure(Frac::from_poly(c5.clone()).substitute(&zero).is_zero(), || format!("n = 5 at b = 0: {c5}"))
}

fn script_conditions(label: &str) -> (Vec<MPoly>, Rules) {
    let fam: Family = label.parse().unwrap();
    let r = run_script(fam, &family_script(fam)).unwrap();
    let n = r.steps.len();
    (r.conditions(), r.rules_before(n.saturating_sub(1)))
}

fn family_golden_conditions() -> Outcome {
    let plain: [(&str, &[&str]); 8] = [
        ("II", &["C", "A"]),
        ("IV", &["C"]),
        ("VI", &["B"]),
        ("VII", &["a"]),
        ("IX(-3)", &["D"]),
        ("XI", &["b", "a"]),
        ("XII", &["b'", "a'", "f''"]),
        ("IX.B(3)", &["b'", "a''"]),
    ];
    for (label, want) in plain {
        let (got, _) = script_conditions(label);
        ensure(got.len() == want.len(), || format!("{label}: {got:?}"))?;
        for (g, w) in got.iter().zip(want) {
            ensure(same_condition(g, &poly(w)), || format!("{label}: {g} != {w}"))?;
        }
    }
    // XIII: a, then f''+2g' and f''-2g' with f = 2p'-2p^2+b, g = -p''+2pp'+bp
    let (got, _) = script_conditions("XIII");
    ensure(got.len() == 3 && same_condition(&got[0], &poly("a")), || format!("XIII: {got:?}"))?;
    let f = parse_frac("2*p'-2*p^2+b").unwrap();
    let g = parse_frac("-p''+2*p*p'+b*p").unwrap();
    let fpp = pql::algebra::diff::derive_n(&f, 2);
    let gp = pql::algebra::diff::derive(&g);
    let two = rat(2);
    ensure(same_condition(&got[1], (&fpp + &gp.scale(&two)).numer()), || format!("XIII second: {}", got[1]))?;
    let mut rules = Rules::new();
    rules.push(pql::algebra::Rule::vanish(Var::new("a")));
    rules.push(pql::algebra::Rule::solve(&got[1], Var::jet("b", 2)).map_err(|e| e.to_string())?);
    let minus = rules.reduce(&(&fpp - &gp.scale(&two)));
    ensure(same_condition(&got[2], minus.numer()), || format!("XIII third: {}", got[2]))?;
    rules.push(pql::algebra::Rule::solve(&got[2], Var::jet("p", 3)).map_err(|e| e.to_string())?);
    ensure(rules.reduce(&fpp).is_zero() && rules.reduce(&gp).is_zero(), || "XIII: f'' and g' not implied".into())?;
    // XIV: b, a'-pa, (q''-6q^2)'' with q = (p'+p^2-a)/12
    let (got, rules) = script_conditions("XIV");
    ensure(got.len() == 3, || format!("XIV: {got:?}"))?;
    ensure(same_condition(&got[0], &poly("b")) && same_condition(&got[1], &poly("a'-p*a")), || {
        format!("XIV: {} {}", got[0], got[1])
    })?;
    let q = parse_frac("(p'+p^2-a)/12").unwrap();
    let p1 = rules.reduce_poly(&painleve_one_condition(&q));
    ensure(same_condition(&got[2], p1.numer()), || format!("XIV third: {}", got[2]))?;
    // IX.B(2): b, f'' with f = a/12 ; IX.B(5): b+3a', (q''-6q^2)'' with q = a/3
    let (got, _) = script_conditions("IX.B(2)");
    ensure(same_condition(&got[0], &poly("b")), || format!("IX.B(2) first: {}", got[0]))?;
    let p1 = painleve_one_condition(&parse_frac("a/12").unwrap());
    ensure(same_condition(&got[1], &p1), || format!("IX.B(2) second: {}", got[1]))?;
    let (got, rules) = script_conditions("IX.B(5)");
    ensure(same_condition(&got[0], &poly("b+3*a'")), || format!("IX.B(5) first: {}", got[0]))?;
    let p1 = rules.reduce_poly(&painleve_one_condition(&parse_frac("a/3").unwrap()));
    ensure(same_condition(&got[1], p1.numer()), || format!("IX.B(5) second: {}", got[1]))
}

type Equations = &'static [(&'static str, &'static str)];

fn first_integrals() -> Outcome {
    let cases: [(Equations, &str, &[&str]); 3] = [
        (&[("y", "z"), ("z", "6*y^2+f")], "4*y^3+2*f*y-z^2", &["f'"]),
        (&[("y", "-y^2+z+a"), ("z", "2*y*z+b")], "2*y^2*z-z^2+2*b*y-2*a*z-a^2", &["a'", "b'"]),
        (
            &[("y", "y*(2*z+y)+2*f*y-a"), ("z", "-z*(2*y+z)-2*f*z+b")],
            "y^2*z+y*z^2+2*f*y*z-b*y-a*z-a*f",
            &["f'", "a'", "b'"],
        ),
    ];
    for (sys, h, constants) in cases {
        let s = System::parse(sys).unwrap();
        let fi = FirstIntegral::new(parse_frac(h).unwrap(), constants.iter().map(|c| poly(c)).collect());
        ensure(verify_first_integral(&s, &fi), || format!("{h}: residual {:?}", fi.residual(&s).map(|r| r.to_string())))?;
    }
    Ok(())
}

/// Expected target parameters by name.
type Parameters = Vec<(&'static str, Frac)>;

fn equivalence_maps() -> Outcome {
    let q = |src: &str| {
        let q = parse_frac(src).unwrap();
        pql::algebra::diff::derive_n(&q, 2) - &q * &q * Frac::from_int(6)
    };
    let targets: [(Family, &str, Parameters); 6] = [
        (Family::IXB(2), "6u^2", vec![("F", q("q"))]),
        (Family::IXB(5), "6u^2", vec![("F", q("q"))]),
        (Family::XIV, "6u^2", vec![("F", q("(p'+p^2-r)/12"))]),
        (Family::XIII, "2u^3", vec![("F", parse_frac("f").unwrap()), ("G", parse_frac("2*p^3+f*p-p''").unwrap())]),
        (Family::IXB(3), "2u^3", vec![("F", parse_frac("f").unwrap()), ("G", parse_frac("H-f'/2").unwrap())]),
        (
            Family::XII,
            "3/2 u^3",
            vec![("F", parse_frac("f").unwrap()), ("G", parse_frac("H/2-K-f'").unwrap()), ("B", parse_frac("H").unwrap())],
        ),
    ];
    for (fam, shape, params) in targets {
        let m = equivalence_map(fam).map_err(|e| format!("{fam}: {e}"))?;
        let check = m.verify().map_err(|e| format!("{fam}: {e}"))?;
        ensure(check.holds(), || format!("{fam}: residuals {:?}", check.field_residuals))?;
        ensure(m.ode.name.contains(shape), || format!("{fam}: target {}", m.ode.name))?;
        for (name, want) in params {
            let got = m.ode.params.iter().find(|(n, _)| n == name).map(|(_, v)| parse_frac(v).unwrap());
            let same = got.as_ref().is_some_and(|g| m.rules.reduce(&(g - &want)).is_zero());
            ensure(same, || format!("{fam}: parameter {name} = {got:?}, expected {want}"))?;
        }
    }
    Ok(())
}

fn elementary_chain_polynomial() -> Outcome {
    for n in 1..=8u32 {
        let s = elementary_chain(n, &Frac::zero()).map_err(|e| format!("n = {n}: {e}"))?;
        let u = parse_frac("-1 - a*u^2").unwrap();
        let sp = parse_frac(&format!("{n}*a*s*u - {}*u^{n}*s^2", n + 1)).unwrap();
        ensure(s.rhs[0] == u && s.rhs[1] == sp, || format!("n = {n}: {s}"))?;
    }
    Ok(())
}

fn ixb0_instance(c_of_t: &str) -> NumericInstance {
    NumericInstance::with_bindings(table1_entry(Family::IXB0(2)).system().unwrap(), &[("p", c_of_t)]).unwrap()
}

fn monodromy_oracle() -> Outcome {
    let tol = 1e-10;
    let (base, init) = (c(1.0, 0.0), [c(1.0, 0.0), c(0.0, 0.0)]);
    let rep = monodromy_test::<f64>(&ixb0_instance("t"), base, init, c(0.0, 0.0), 0.5, tol).map_err(|e| e.to_string())?;
    let want = c(0.0, 2.0 * std::f64::consts::PI);
    let rel = (rep.jump[1] - want).norm() / want.norm();
    ensure(rel < 1e-6, || format!("jump {} (relative error {rel:e})", rep.jump[1]))?;
    let rep = monodromy_test::<f64>(&ixb0_instance("1"), base, init, c(0.0, 0.0), 0.5, tol).map_err(|e| e.to_string())?;
    ensure(rep.max_discrepancy() < 1e-8, || format!("compliant discrepancy {:e}", rep.max_discrepancy()))
}

fn riccati_loops() -> Outcome {
    let sys = System::parse(&[("y", "y*(y-2*z)+A*y+a"), ("z", "-z^2+C*y")]).unwrap();
    let inst = NumericInstance::with_bindings(sys, &[("A", "0"), ("C", "0"), ("a", "t")]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 20 {
        let center = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let radius = rng.gen_range(0.2..1.5);
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let base = center + Complex64::from_polar(radius, theta);
        let init = [c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))];
        let rep = monodromy_test::<f64>(&inst, base, init, center, radius, 1e-10).map_err(|e| e.to_string())?;
        if rep.singularities_detected.iter().any(|s| (s.t - center).norm() < 1e-3 * radius) {
            continue;
        }
        worst = worst.max(rep.max_discrepancy());
        ensure(rep.max_discrepancy() < 1e-8, || {
            format!("loop {done} center {center} radius {radius}: {:e} ({:?})", rep.max_discrepancy(), rep.verdict)
        })?;
        ensure(rep.verdict != Verdict::Branching, || format!("loop {done} declared branching"))?;
        done += 1;
    }
    ensure(worst < 1e-8, || format!("worst {worst:e}"))
}

fn numeric_equivalence_residual() -> Outcome {
    let map = equivalence_map(Family::IXB(5)).unwrap();
    let q0: BTreeMap<Var, Frac> = map.target.rhs[1].vars().into_iter().filter(|v| v.name() == "q").map(|v| (v, Frac::zero())).collect();
    let accel = map.target.rhs[1].substitute(&q0);
    ensure(accel == parse_frac("6*w^2").unwrap(), || format!("target w'' = {accel}"))?;
    let inst = NumericInstance::with_bindings(map.source.clone(), &[("q", "0")]).unwrap();
    let path = ComplexPath::line(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
    let rep = equivalence_residual::<f64>(&inst, &map, [c(0.1, 0.0), c(0.2, 0.0)], &path, 1e-10).map_err(|e| e.to_string())?;
    ensure(rep.max_residual < 1e-8 && rep.samples > 0, || format!("{rep:?}"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

#[test]
fn acceptance_criteria() {
    let s = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "representative index column", budget: s(1), run: table2_reproduction },
        Criterion { id: 2, name: "index triple census", budget: s(1), run: diophantine_census },
        Criterion { id: 3, name: "weighted residue test", budget: s(1), run: weighted_briot_bouquet },
        Criterion { id: 4, name: "VIII conditions n = 1..5", budget: s(5), run: malmquist_conditions },
        Criterion { id: 5, name: "per-family conditions", budget: s(10), run: family_golden_conditions },
        Criterion { id: 6, name: "first integrals", budget: s(1), run: first_integrals },
        Criterion { id: 7, name: "equivalence maps", budget: s(5), run: equivalence_maps },
        Criterion { id: 8, name: "elementary chain n = 1..8", budget: s(1), run: elementary_chain_polynomial },
        Criterion { id: 9, name: "logarithmic monodromy oracle", budget: s(10), run: monodromy_oracle },
        Criterion { id: 10, name: "Riccati loops single-valued", budget: s(30), run: riccati_loops },
        Criterion { id: 11, name: "equivalence residual along unit path", budget: s(10), run: numeric_equivalence_residual },
    ];
    let mut failed = Vec::new();
    for cr in &criteria {
        let start = Instant::now();
        let outcome = (cr.run)();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|_| {
            ensure(elapsed < cr.budget, || format!("took {elapsed:?}, budget {:?}", cr.budget))
        });
        match &outcome {
            Ok(()) => println!("criterion {:>2} PASS {} ({:.3} s)", cr.id, cr.name, elapsed.as_secs_f64()),
            Err(e) => {
                println!("criterion {:>2} FAIL {} ({:.3} s): {e}", cr.id, cr.name, elapsed.as_secs_f64());
                failed.push(cr.id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
