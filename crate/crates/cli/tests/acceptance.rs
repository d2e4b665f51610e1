//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specfact_cli::*;
use specfact_core::*;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn q() -> FieldRef {
    FieldDescriptor::rational()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

/// A rational in the open disk with `|a| <= 4/5`.
fn disk_point(rng: &mut ChaCha8Rng) -> FieldElement {
    let d = rng.gen_range(2..=9i64);
    let bound = 4 * d / 5;
    q().from_ratio(rng.gen_range(-bound..=bound), d)
}

/// `n/d` with `|n/d| <= 10`; nonzero when asked.
fn coeff(rng: &mut ChaCha8Rng, nonzero: bool) -> FieldElement {
    loop {
        let d = rng.gen_range(1..=4i64);
        let n = rng.gen_range(-10 * d..=10 * d);
        if n != 0 || !nonzero {
            return q().from_ratio(n, d);
        }
    }
}

fn c1_worked_two_by_two() -> Outcome {
    let problem = load(&fixture("ex81.json")).map_err(|e| format!("{e:#}"))?;
    let (report, t) = timed(|| {
        run(
            &problem,
            Task::Spectral,
            &RunOptions::from_problem(&problem),
        )
    });
    let report = report.map_err(|e| format!("{e:#}"))?;
    let scope = problem.scope();
    let el = |s: &str| parse_element(s, &scope).unwrap();
    let c = el("c");
    ensure!(c.pow(2) == el("1/10"), "c^2 != 1/10");
    let rf = |s: &str| parse_ratfn(s, &scope).unwrap();
    let s_plus = RatMatrix::new(
        &problem.field,
        vec![
            vec![rf("7+3z"), rf("-1+z")],
            vec![rf("24+16z"), rf("-2+2z")],
        ],
    )
    .unwrap()
    .scale(&c);
    ensure!(report.matrix("S+") == Some(&s_plus), "S+ differs");
    let u = RatMatrix::new(
        &problem.field,
        vec![
            vec![rf("(7+3z)/(a z+b)"), rf("(-1+z)/(a z+b)")],
            vec![rf("(-1+z)/(a+b z)"), rf("(3+7z)/(a+b z)")],
        ],
    )
    .unwrap()
    .scale(&c);
    ensure!(report.matrix("U") == Some(&u), "U differs");
    ensure!(
        report
            .certificate
            .checks
            .iter()
            .any(|k| k.name == "S = S+·S+~" && k.passed),
        "verification against S missing or failed"
    );
    ensure!(
        report.passed(),
        "certificate failed: {:?}",
        report.certificate.failures().collect::<Vec<_>>()
    );

    let phi = load(&fixture("ex81_phi.json")).map_err(|e| format!("{e:#}"))?;
    let (res, t2) = timed(|| run(&phi, Task::FactorF, &RunOptions::default()));
    let res = res.map_err(|e| format!("{e:#}"))?;
    let Some(report::Value::Named(sol)) = res.item("solutions") else {
        return Err("no solutions".into());
    };
    let first: Vec<&FieldElement> = sol
        .iter()
        .filter(|(n, _)| n.ends_with("[1]"))
        .map(|(_, x)| x)
        .collect();
    let want: Vec<FieldElement> = ["(35-7*s1)/20", "(-11+5*s1)/4", "(5-s1)/20", "(-3+s1)/4"]
        .iter()
        .map(|s| el(s))
        .collect();
    ensure!(
        first == want.iter().collect::<Vec<_>>(),
        "first-column system solutions differ: {first:?}"
    );
    ensure!(res.matrix("U") == Some(&u), "U from the φ row differs");
    ensure!(res.passed(), "φ-row certificate failed");
    ensure!(
        t < Duration::from_secs(1) && t2 < Duration::from_secs(1),
        "too slow: {t:?}, {t2:?}"
    );
    Ok(format!(
        "U, S+, C1..C21 exact; verified against S; {:.0} ms",
        (t + t2).as_secs_f64() * 1e3
    ))
}

fn c2_worked_completion() -> Outcome {
    let problem = load(&fixture("ex82.json")).map_err(|e| format!("{e:#}"))?;
    let (report, t) = timed(|| run(&problem, Task::Complete, &RunOptions::default()));
    let report = report.map_err(|e| format!("{e:#}"))?;
    let scope = problem.scope();
    let rf = |s: &str| parse_ratfn(s, &scope).unwrap();
    let Some(report::Value::Row(phis)) = report.item("phi") else {
        return Err("no φ row".into());
    };
    ensure!(
        *phis == vec![rf("11/(2(6z+5))"), rf("-11/(6(6z+5))")],
        "φ differs: {phis:?}"
    );
    let w: Vec<Vec<FieldElement>> = [[30, -45, -10], [45, 26, 18], [10, 18, -51]]
        .iter()
        .map(|r| r.iter().map(|&x| q().from_ratio(x, 55)).collect())
        .collect();
    ensure!(
        report.matrix("W") == Some(&RatMatrix::from_constants(&q(), &w).unwrap()),
        "W differs"
    );
    ensure!(
        report.matrix("V^T") == problem.expect.v_t.as_ref(),
        "V^T differs"
    );
    ensure!(report.passed(), "certificate failed");
    ensure!(t < Duration::from_secs(1), "too slow: {t:?}");
    Ok(format!("φ, W, V^T exact; {:.0} ms", t.as_secs_f64() * 1e3))
}

fn random_phi_row(rng: &mut ChaCha8Rng) -> PhiRow {
    let f = q();
    let m = rng.gen_range(2..=4usize);
    let count = rng.gen_range(1..=3usize);
    let mut poles: Vec<FieldElement> = Vec::new();
    while poles.len() < count {
        let a = disk_point(rng);
        if !poles.contains(&a) {
            poles.push(a);
        }
    }
    let orders: Vec<usize> = poles.iter().map(|_| rng.gen_range(1..=3)).collect();
    let mut phis: Vec<Vec<PoleTerm>> = vec![Vec::new(); m - 1];
    for (k, a) in poles.iter().enumerate() {
        // one function carries the full order, the rest at most that
        let carrier = rng.gen_range(0..m - 1);
        for (i, terms) in phis.iter_mut().enumerate() {
            let n = if i == carrier {
                orders[k]
            } else {
                rng.gen_range(0..=orders[k])
            };
            if n == 0 {
                continue;
            }
            let mut cs: Vec<FieldElement> = (1..n).map(|_| coeff(rng, false)).collect();
            cs.push(coeff(rng, true));
            terms.push(PoleTerm {
                pole: a.clone(),
                coeffs: cs,
            });
        }
    }
    let phis = phis
        .into_iter()
        .map(|t| PartialFraction::from_terms(Poly::zero(&f), t).unwrap())
        .collect();
    PhiRow::new(&f, m, phis).unwrap()
}

fn c3_paraunitary_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let start = Instant::now();
    let mut unknowns = 0;
    for case in 0..50 {
        let row = random_phi_row(&mut rng);
        let res = construct_paraunitary(&row).map_err(|e| format!("case {case}: {e}"))?;
        ensure!(
            res.certificate.passed(),
            "case {case}: {:?}",
            res.certificate.failures().collect::<Vec<_>>()
        );
        let u = &res.u;
        let m = u.nrows();
        ensure!(
            u.mul(&u.tilde()).unwrap().is_identity(),
            "case {case}: U·Ũ != I"
        );
        ensure!(
            u.tilde().mul(u).unwrap().is_identity(),
            "case {case}: Gram functions not constant"
        );
        ensure!(u.det().unwrap().is_one(), "case {case}: det U != 1");
        let at_one = u.eval(&q().one()).unwrap();
        let id = RatMatrix::identity(&q(), m).eval(&q().one()).unwrap();
        ensure!(at_one == id, "case {case}: U(1) != I");
        let fu = row.f_matrix().mul(u).unwrap();
        for e in fu.rows().iter().flatten() {
            for p in &res.layout.merged_poles {
                let pp = e.principal_part(&p.location, p.order).unwrap();
                ensure!(
                    pp.iter().all(FieldElement::is_zero),
                    "case {case}: FU has a pole at {}",
                    p.location
                );
            }
        }
        unknowns = unknowns.max(res.layout.m0);
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(120), "too slow: {t:?}");
    Ok(format!(
        "50 rows, up to {unknowns} unknowns per column; {:.1} s",
        t.as_secs_f64()
    ))
}

fn c4_triangular_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let f = q();
    let start = Instant::now();
    for case in 0..20 {
        let mut rows = vec![vec![RationalFn::zero(&f); 3]; 3];
        for (i, row) in rows.iter_mut().enumerate() {
            let deg = rng.gen_range(0..=2usize);
            let rest: Vec<i64> = (0..deg).map(|_| rng.gen_range(-10..=10)).collect();
            let lead = rest.iter().map(|c| c.abs()).sum::<i64>() + rng.gen_range(1..=5);
            let mut cs = vec![f.from_int(lead)];
            cs.extend(rest.iter().map(|&c| f.from_int(c)));
            row[i] = RationalFn::from_poly(Poly::new(&f, cs));
        }
        let mut declared: Vec<Vec<PoleSpec>> = vec![Vec::new(); 3];
        for (i, row) in rows.iter_mut().enumerate().skip(1) {
            for slot in row.iter_mut().take(i) {
                let a = disk_point(&mut rng);
                let num: Vec<FieldElement> = (0..rng.gen_range(1..=2))
                    .map(|_| coeff(&mut rng, false))
                    .collect();
                let num = Poly::new(&f, num);
                if num.is_zero() || num.eval(&a).is_zero() {
                    continue;
                }
                *slot = RationalFn::new(num, Poly::linear_root(&a)).unwrap();
                if !declared[i].iter().any(|p| p.location == a) {
                    declared[i].push(PoleSpec::new(a, 1).unwrap());
                }
            }
        }
        let m = RatMatrix::new(&f, rows).unwrap();
        let tf =
            TriangularFactor::new(m.clone(), declared).map_err(|e| format!("case {case}: {e}"))?;
        let res = factorize(&tf, false).map_err(|e| format!("case {case}: {e}"))?;
        let s = &res.s_plus;
        ensure!(res.certificate.passed(), "case {case}: certificate failed");
        ensure!(
            s.mul(&s.tilde()).unwrap() == m.mul(&m.tilde()).unwrap(),
            "case {case}: S+·S+~ != M·M~"
        );
        ensure!(
            s.det().unwrap() == m.det().unwrap(),
            "case {case}: det S+ != det M"
        );
    }
    Ok(format!(
        "20 factors of size 3; {:.1} s",
        start.elapsed().as_secs_f64()
    ))
}

fn c5_transfer_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let f = q();
    for case in 0..100 {
        let a = disk_point(&mut rng);
        let b = disk_point(&mut rng);
        let rows = rng.gen_range(1..=5usize);
        let n = rng.gen_range(1..=5usize);
        let mut cs: Vec<FieldElement> = (1..n).map(|_| coeff(&mut rng, false)).collect();
        cs.push(coeff(&mut rng, true));
        let t = transfer_matrix(&a, &b, rows, n).map_err(|e| format!("case {case}: {e}"))?;
        let conj: Vec<FieldElement> = cs.iter().map(FieldElement::conj).collect();
        let got = apply_transfer(&t, &conj).map_err(|e| format!("case {case}: {e}"))?;
        let pf = PartialFraction {
            entire: Poly::zero(&f),
            terms: vec![PoleTerm {
                pole: b,
                coeffs: cs,
            }],
        };
        let oracle = pf_to_ratfn(&pf).tilde().taylor_coeffs(&a, rows).unwrap();
        ensure!(got == oracle, "case {case}: {got:?} vs {oracle:?}");
    }
    Ok("100 cases agree with series division".into())
}

fn c6_bezout() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let f = q();
    let one = Poly::one(&f);
    let mut solved = 0;
    let mut max_deg = 0;
    while solved < 30 {
        let m = rng.gen_range(2..=3usize);
        let polys: Vec<Poly> = (0..m)
            .map(|_| {
                let deg = rng.gen_range(1..=3usize);
                let mut cs: Vec<FieldElement> = (0..deg).map(|_| coeff(&mut rng, false)).collect();
                cs.push(coeff(&mut rng, true));
                Poly::new(&f, cs)
            })
            .collect();
        let g = polys
            .iter()
            .skip(1)
            .fold(polys[0].clone(), |acc, p| acc.gcd(p));
        if !g.is_constant() {
            continue;
        }
        let cap = polys.iter().filter_map(Poly::degree).sum::<usize>();
        let sol = solve_bezout(&polys, &one, cap).map_err(|e| format!("family {solved}: {e}"))?;
        let sum = sol
            .h
            .iter()
            .zip(&polys)
            .fold(Poly::zero(&f), |acc, (h, p)| acc.add(&h.mul(p)));
        ensure!(sum == one, "family {solved}: Σ h·p = {sum}");
        max_deg = max_deg.max(sol.degree);
        solved += 1;
    }
    let problem = load(&fixture("ex82.json")).map_err(|e| format!("{e:#}"))?;
    let Payload::Complete(p) = &problem.payload else {
        return Err("fixture is not a completion".into());
    };
    let row = UnitRow::plain(&f, p.row.clone()).unwrap();
    let cap = default_max_degree(&row).unwrap();
    let sol = solve_corona(&row, cap).map_err(|e| format!("worked row: {e}"))?;
    let sum = sol
        .h
        .iter()
        .enumerate()
        .fold(RationalFn::zero(&f), |acc, (i, h)| {
            acc.add(&RationalFn::from_poly(h.clone()).mul(&row.v(i)))
        });
    ensure!(sum.is_one(), "worked row: Σ h·v = {sum}");
    Ok(format!(
        "30 random families (multiplier degree <= {max_deg}) and the worked row (degree {})",
        sol.degree
    ))
}

fn specfact(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_specfact"))
        .args(args)
        .output()
        .expect("binary runs");
    let mut text = String::from_utf8_lossy(&out.stdout).into_owned();
    text.push_str(&String::from_utf8_lossy(&out.stderr));
    (out.status.code().unwrap_or(-1), text)
}

fn c7_negative_cases() -> Outcome {
    for name in ["ex81_tampered.json", "ex82_tampered.json"] {
        let (code, out) = specfact(&["verify", fixture(name).to_str().unwrap()]);
        ensure!(code == 1, "{name}: exit {code}");
        ensure!(
            out.lines()
                .any(|l| l.contains("[FAIL]") && l.contains("entry [2,2]")),
            "{name}: no entry-level diff"
        );
    }
    // perturb one coefficient of W in the completion fixture
    let text = std::fs::read_to_string(fixture("ex82.json")).unwrap();
    let bad = text.replacen("\"26/55\"", "\"27/55\"", 1);
    ensure!(bad != text, "perturbation did not apply");
    let problem = parse_problem(&bad).map_err(|e| e.to_string())?;
    let report =
        run(&problem, Task::Verify, &RunOptions::default()).map_err(|e| format!("{e:#}"))?;
    let failed: Vec<_> = report.certificate.failures().collect();
    ensure!(
        failed.len() == 1 && failed[0].detail.contains("entry [2,2]"),
        "perturbed W not pinpointed: {failed:?}"
    );

    let scope = Scope::new(&q());
    let entries: Vec<RationalFn> = ["(3z+3)/(5z+6)", "(4z+5)/(5z+6)", "(z+2)/(6z+5)"]
        .iter()
        .map(|s| parse_ratfn(s, &scope).unwrap())
        .collect();
    let row = UnitRow::plain(&q(), entries).unwrap();
    ensure!(!verify_unit_row(&row), "non-unit row accepted");
    ensure!(
        matches!(complete(&row, None), Err(Error::NotUnitNorm(_))),
        "completion did not reject the non-unit row"
    );

    for at in ["2", "-1", "4/5+3/5*i"] {
        let field = if at.contains('i') { "Q(i)" } else { "Q" };
        let text = format!(
            r#"{{"field": "{field}", "task": "factor-f",
 "factor_f": {{"phis": ["1/(z-({at}))"], "poles": [{{"at": "{at}", "order": 1}}]}}}}"#
        );
        match parse_problem(&text) {
            Err(InputError::Semantic { path, message, .. })
                if path == "factor_f.poles[0]" && message.contains("disk") => {}
            other => return Err(format!("pole {at} not rejected at parse time: {other:?}")),
        }
    }
    Ok("tampered fixtures and a perturbed W give entry diffs; non-unit row and outside poles rejected".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("worked 2x2 spectral factorization", c1_worked_two_by_two),
        ("worked 3x3 paraunitary completion", c2_worked_completion),
        ("random paraunitary constructions", c3_paraunitary_property),
        ("random triangular factorizations", c4_triangular_property),
        (
            "transfer matrix against series division",
            c5_transfer_oracle,
        ),
        ("Bezout multipliers", c6_bezout),
        ("negative cases", c7_negative_cases),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {}: FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
