//! Acceptance gate: every criterion is checked with exact equality and
//! reported on its own line. Runs without the libtest harness so the lines
//! are always printed.

use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use degenpoly::cli;
use degenpoly::combinat::{NumberTable, TableKind, Tables};
use degenpoly::exact::{factorial, GaussianRational, Rational};
use degenpoly::families::{kernel_b, kernel_e, Families, FamilyId, FamilyKind};
use degenpoly::poly::{MultiPoly, Symbol};
use degenpoly::series::Series;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_degenpoly"))
}

fn run_bin(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(p: i64, d: i64) -> MultiPoly {
    MultiPoly::rational(Rational::new(p, d).unwrap())
}

/// 1. `verify --theorem all --max-n 12` exits 0 with every theorem passing.
fn full_identity_suite() -> Check {
    let start = Instant::now();
    let out = run_bin(&["verify", "--theorem", "all", "--max-n", "12"]);
    let elapsed = start.elapsed();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let summaries: Vec<&str> = stdout.lines().filter(|l| l.starts_with("# ")).collect();
    let failing: Vec<&&str> = summaries
        .iter()
        .filter(|l| !l.starts_with("# PASS"))
        .collect();
    ensure(out.status.code() == Some(0), || {
        format!("exit {:?}; failing: {failing:?}", out.status.code())
    })?;
    ensure(summaries.len() == 25 && failing.is_empty(), || {
        format!("{} summaries, failing {failing:?}", summaries.len())
    })?;
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "25 theorems, n <= 12, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

/// 2. Low-order values.
fn golden_values() -> Check {
    let fams = Families::new();
    let x = MultiPoly::x();
    let lam = MultiPoly::lambda();
    let number = |kind: FamilyKind, n: usize| {
        fams.poly(&FamilyId::new(kind).with_exponent(MultiPoly::zero()), n)
            .unwrap()
    };
    let tables = Tables::new();
    let cases: Vec<(&str, MultiPoly, MultiPoly)> = vec![
        (
            "B_2(x)",
            fams.poly_of(FamilyKind::B2Classical, 2),
            &x.pow(2) - &q(1, 12),
        ),
        (
            "E_2(x)",
            fams.poly_of(FamilyKind::E2Classical, 2),
            &x.pow(2) - &q(1, 4),
        ),
        (
            "B_1,lambda",
            number(FamilyKind::B2Degen, 1),
            &lam * &q(1, 2),
        ),
        (
            "E_1,lambda",
            number(FamilyKind::E2Degen, 1),
            MultiPoly::zero(),
        ),
        (
            "beta_1,lambda",
            number(FamilyKind::CarlitzBeta, 1),
            &(&lam - &MultiPoly::one()) * &q(1, 2),
        ),
        (
            "b_0",
            MultiPoly::rational(tables.bernoulli2nd(0)),
            MultiPoly::one(),
        ),
        ("b_1", MultiPoly::rational(tables.bernoulli2nd(1)), q(1, 2)),
        ("b_2", MultiPoly::rational(tables.bernoulli2nd(2)), q(-1, 6)),
        (
            "B^(c)_1,lambda",
            fams.poly_of(FamilyKind::CosB, 1),
            &x + &(&lam * &q(1, 2)),
        ),
        (
            "B^(s)_1,lambda",
            fams.poly_of(FamilyKind::SinB, 1),
            MultiPoly::y(),
        ),
        (
            "B^(s)_0,lambda",
            fams.poly_of(FamilyKind::SinB, 0),
            MultiPoly::zero(),
        ),
    ];
    for (name, got, want) in &cases {
        ensure(got == want, || format!("{name}: got {got}, want {want}"))?;
    }
    Ok(format!("{} values", cases.len()))
}

/// 3. Stirling inverse relation, generating functions vs recurrences, central
///    factorial parity, and the λ → 0 limit of the degenerate central numbers.
fn combinatorial_cross_checks() -> Check {
    const N: usize = 10;
    let tables = Tables::new();
    for n in 0..=N {
        for m in 0..=N {
            let sum = (0..=N).fold(Rational::zero(), |acc, k| {
                acc + tables.stirling1(n, k) * tables.stirling2(k, m)
            });
            let delta = if n == m {
                Rational::one()
            } else {
                Rational::zero()
            };
            ensure(sum == delta, || format!("S1*S2 at ({n},{m}) = {sum}"))?;
        }
    }
    let order = N;
    let log1p = Series::t(order)
        .add(&Series::one(order))
        .unwrap()
        .log()
        .unwrap();
    let expm1 = Series::t(order)
        .exp()
        .unwrap()
        .sub(&Series::one(order))
        .unwrap();
    for k in 0..=N {
        let inv_kf = factorial(k).recip().unwrap();
        let g1 = log1p.pow_int(k as u32).scale_rational(&inv_kf);
        let g2 = expm1.pow_int(k as u32).scale_rational(&inv_kf);
        for n in 0..=N {
            let s1 = g1.egf_coeff(n).unwrap();
            let s2 = g2.egf_coeff(n).unwrap();
            ensure(s1 == MultiPoly::rational(tables.stirling1(n, k)), || {
                format!("S1({n},{k}) gf {s1}")
            })?;
            ensure(s2 == MultiPoly::rational(tables.stirling2(n, k)), || {
                format!("S2({n},{k}) gf {s2}")
            })?;
        }
    }
    for n in 0..=N {
        for k in 0..=N {
            if (n + k) % 2 == 1 {
                ensure(tables.central_t(n, k).is_zero(), || {
                    format!("T({n},{k}) nonzero")
                })?;
            }
            let limit = tables
                .degen_central_t(n, k, false)
                .substitute(Symbol::Lambda, &MultiPoly::zero());
            ensure(limit == MultiPoly::rational(tables.central_t(n, k)), || {
                format!("T_lambda({n},{k}) limit {limit}")
            })?;
        }
    }
    let snapshot: NumberTable = tables.table(TableKind::Stirling1, N);
    ensure(snapshot.max_n() == N, || "table snapshot size".into())?;
    Ok(format!("n <= {N}"))
}

/// 4. Series algebra at order 12.
fn series_round_trips() -> Check {
    const ORDER: usize = 12;
    let one = Series::one(ORDER);
    for (name, k) in [
        ("B", kernel_b(ORDER).unwrap()),
        ("E", kernel_e(ORDER).unwrap()),
    ] {
        ensure(k.mul(&k.invert().unwrap()).unwrap() == one, || {
            format!("kernel {name} inverse")
        })?;
        ensure(k.log().unwrap().exp().unwrap() == k, || {
            format!("exp(log kernel {name})")
        })?;
        let g = k.sub(&one).unwrap();
        ensure(g.exp().unwrap().log().unwrap() == g, || {
            format!("log(exp(kernel {name} - 1))")
        })?;
    }
    let k = kernel_b(ORDER).unwrap();
    let symbolic = k.pow_symbolic().unwrap();
    for m in -2i64..=3 {
        let at_m = symbolic.substitute(Symbol::Alpha, &MultiPoly::rational(Rational::from(m)));
        let direct = if m >= 0 {
            k.pow_int(m as u32)
        } else {
            k.invert().unwrap().pow_int(m.unsigned_abs() as u32)
        };
        ensure(at_m == direct, || format!("symbolic power at alpha = {m}"))?;
    }
    Ok(format!("order {ORDER}"))
}

/// 5. Cosine families even in y, sine families odd, all real.
fn parity_and_realness() -> Check {
    let fams = Families::new();
    let neg_y = -MultiPoly::y();
    for kind in [
        FamilyKind::CosB,
        FamilyKind::SinB,
        FamilyKind::CosE,
        FamilyKind::SinE,
    ] {
        let odd = matches!(kind, FamilyKind::SinB | FamilyKind::SinE);
        for n in 0..=12 {
            let p = fams.poly_of(kind, n);
            let reflected = p.substitute(Symbol::Y, &neg_y);
            let expected = if odd { -p.clone() } else { p.clone() };
            ensure(reflected == expected, || format!("{kind} n = {n} parity"))?;
            ensure(p.is_real(), || format!("{kind} n = {n} has imaginary part"))?;
        }
    }
    Ok("CosB SinB CosE SinE, n <= 12".into())
}

/// 6. Any single perturbed first-kind Stirling entry read by the cosine split
///    check makes `verify --theorem T2_2c` exit 1 with a nonzero diff.
fn mutation_sensitivity() -> Check {
    let mut tried = 0;
    for k in 0..=12usize {
        for j in (0..=k).step_by(2) {
            let entry = format!("stirling1:{k}:{j}:1");
            let mut out = Vec::new();
            let mut err = Vec::new();
            let args = [
                "degenpoly",
                "verify",
                "--theorem",
                "T2_2c",
                "--max-n",
                "12",
                "--perturb",
                entry.as_str(),
            ];
            let code = cli::run(args, &mut out, &mut err);
            let text = String::from_utf8(out).unwrap();
            ensure(code == 1, || format!("{entry}: exit {code}"))?;
            let first = text.lines().next().unwrap_or_default();
            let v: serde_json::Value = serde_json::from_str(first).map_err(|e| e.to_string())?;
            let failures = v["failures"].as_array().cloned().unwrap_or_default();
            ensure(
                !failures.is_empty()
                    && failures
                        .iter()
                        .all(|f| f["diff"].as_array().is_some_and(|d| !d.is_empty())),
                || format!("{entry}: no nonzero diff"),
            )?;
            tried += 1;
        }
    }
    let out = run_bin(&[
        "verify",
        "--theorem",
        "T2_2c",
        "--max-n",
        "12",
        "--perturb",
        "stirling1:7:4:-1/3",
    ]);
    ensure(out.status.code() == Some(1), || {
        "binary did not exit 1 under perturbation".into()
    })?;
    Ok(format!("{tried} entries perturbed, all detected"))
}

fn strip_elapsed(s: &str) -> String {
    s.lines()
        .map(|l| match l.find("\"elapsed_ms\":") {
            Some(i) => {
                let rest = &l[i..];
                let end = rest.find('}').unwrap_or(rest.len());
                format!("{}{}", &l[..i], &rest[end..])
            }
            None => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// 7. Byte-identical repeated output and JSON round trip of `expand`.
fn determinism_and_round_trip() -> Check {
    let invocations: Vec<Vec<&str>> = vec![
        vec![
            "expand",
            "--family",
            "CosB_alpha",
            "--n",
            "5",
            "--format",
            "json",
        ],
        vec![
            "expand",
            "--family",
            "E2_degen_complex",
            "--n",
            "6",
            "--format",
            "csv",
        ],
        vec![
            "expand", "--family", "SinB", "--n", "7", "--format", "latex",
        ],
        vec!["table", "--kind", "stirling1", "--max-n", "9"],
        vec!["verify", "--theorem", "all", "--max-n", "4", "--jobs", "4"],
    ];
    for args in &invocations {
        let a = run_bin(args);
        let b = run_bin(args);
        ensure(a.status.success() && b.status.success(), || {
            format!("{args:?} failed")
        })?;
        let (sa, sb) = (
            String::from_utf8_lossy(&a.stdout),
            String::from_utf8_lossy(&b.stdout),
        );
        let same = if args[0] == "verify" {
            strip_elapsed(&sa) == strip_elapsed(&sb)
        } else {
            a.stdout == b.stdout
        };
        ensure(same, || format!("{args:?} differs between runs"))?;
    }
    let fams = Families::new();
    let cases: [(&str, &str, FamilyId); 3] = [
        (
            "B2_degen_complex",
            "8",
            FamilyId::new(FamilyKind::B2DegenComplex),
        ),
        ("B_alpha", "6", FamilyId::new(FamilyKind::BAlpha)),
        ("SinE", "9", FamilyId::new(FamilyKind::SinE)),
    ];
    for (family, n, id) in cases {
        let out = run_bin(&["expand", "--family", family, "--n", n, "--format", "json"]);
        let parsed: MultiPoly =
            serde_json::from_slice(&out.stdout).map_err(|e| format!("{family}: {e}"))?;
        let expected = fams.poly(&id, n.parse().unwrap()).unwrap();
        ensure(parsed == expected, || {
            format!("{family} round trip mismatch")
        })?;
    }
    let complex = run_bin(&[
        "expand",
        "--family",
        "B2_degen",
        "--n",
        "3",
        "--exponent",
        "x-iy",
        "--format",
        "json",
    ]);
    let parsed: MultiPoly = serde_json::from_slice(&complex.stdout).map_err(|e| e.to_string())?;
    let w = &MultiPoly::x() - &MultiPoly::y().scale(&GaussianRational::i());
    ensure(
        parsed
            == fams
                .poly_of(FamilyKind::B2Degen, 3)
                .substitute(Symbol::X, &w),
        || "x-iy exponent".into(),
    )?;
    Ok(format!("{} invocations repeated", invocations.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("full identity suite", full_identity_suite),
        ("golden low-order values", golden_values),
        ("combinatorial cross-checks", combinatorial_cross_checks),
        ("series round trips", series_round_trips),
        ("parity and realness", parity_and_realness),
        ("mutation sensitivity", mutation_sensitivity),
        (
            "CLI determinism and JSON round trip",
            determinism_and_round_trip,
        ),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} [PASS] {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} [FAIL] {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
