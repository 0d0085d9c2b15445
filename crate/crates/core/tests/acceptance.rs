//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use supercong::catalog::{
    check, list_checks, oracle_check, CheckId, Perturbation, DEFAULT_ORACLE_BOUND,
};
use supercong::engine::{
    primes_in, run_identity_suites, scan, sweep, write_report, ReportFormat, ScanConfig,
    SweepConfig, SweepSummary,
};
use supercong::sequences::{LucasFamily, LucasParams};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn workers() -> usize {
    std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .max(8)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn theorem_suite() -> Outcome {
    let ids: Vec<CheckId> = CheckId::ALL
        .iter()
        .copied()
        .filter(|id| !id.is_parametric())
        .collect();
    let results = sweep(
        &SweepConfig::new(3, 4999)
            .with_checks(&ids)
            .with_jobs(workers()),
    )
    .map_err(|e| e.to_string())?;
    let bad: Vec<String> = results
        .iter()
        .filter(|r| r.applicable && (r.pass != Some(true) || r.lhs != Some(0)))
        .map(|r| format!("{} p={} lhs={:?}", r.id, r.prime, r.lhs))
        .collect();
    ensure(bad.is_empty(), || {
        format!(
            "{} failures, first {:?}",
            bad.len(),
            &bad[..bad.len().min(5)]
        )
    })?;
    for id in &ids {
        let n = results
            .iter()
            .filter(|r| r.id == *id && r.applicable)
            .count();
        ensure(n > 0, || format!("{id} never applicable"))?;
    }
    let s = SweepSummary::of(&results);
    Ok(format!(
        "{} checks, {} applicable evaluations, all lhs = 0",
        ids.len(),
        s.applicable
    ))
}

fn parametric_suite() -> Outcome {
    let cfg = SweepConfig::new(3, 499)
        .with_checks(&[CheckId::Thm2V, CheckId::Thm2U])
        .with_jobs(workers());
    let results = sweep(&cfg).map_err(|e| e.to_string())?;
    let s = SweepSummary::of(&results);
    ensure(s.failed == 0, || format!("{} failures", s.failed))?;
    let skipped = results.iter().filter(|r| !r.applicable).count();
    let wrongly_skipped = results.iter().filter(|r| !r.applicable).any(|r| {
        let d = r.params.expect("parametric").discriminant();
        r.id == CheckId::Thm2V || d % (r.prime * r.prime) as i64 != 0
    });
    ensure(!wrongly_skipped, || {
        "a skipped pair is not a p² | a²-4b pair".into()
    })?;
    Ok(format!(
        "{} passed, {} skipped for p² | a²-4b",
        s.passed, skipped
    ))
}

fn oracle_equivalence() -> Outcome {
    let grid: Vec<LucasParams> = (-3..=3)
        .flat_map(|a| (-3..=3).map(move |b| LucasParams::new(a, b)))
        .collect();
    let mut compared = 0;
    for p in primes_in(3, DEFAULT_ORACLE_BOUND) {
        for d in list_checks() {
            let points: Vec<Option<LucasParams>> = if d.parametric {
                grid.iter().copied().map(Some).collect()
            } else {
                vec![None]
            };
            for params in points {
                let fast = check(d.id, p, params).map_err(|e| e.to_string())?;
                if !fast.applicable {
                    continue;
                }
                let exact = oracle_check(d.id, p, params).map_err(|e| e.to_string())?;
                ensure(fast.lhs == exact.lhs, || {
                    format!(
                        "{} p={p} {params:?}: fast {:?} oracle {:?}",
                        d.id, fast.lhs, exact.lhs
                    )
                })?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} applicable evaluations agree"))
}

fn identity_suite() -> Outcome {
    let lines = run_identity_suites(60, 30);
    let mut summary = Vec::new();
    for l in &lines {
        ensure(l.cases > 0, || format!("{} ran no cases", l.suite))?;
        ensure(l.passed(), || {
            format!("{}: {:?}", l.suite, &l.failures[..l.failures.len().min(5)])
        })?;
        summary.push(format!("{} {}", l.suite, l.cases));
    }
    Ok(summary.join(", "))
}

fn negative_control() -> Outcome {
    let mut notes = Vec::new();
    for (pert, id) in [
        (Perturbation::Thm1iiiDenominator7, CheckId::Thm1Iii),
        (Perturbation::MorleyExponent, CheckId::Morley),
    ] {
        let cfg = SweepConfig {
            perturbation: Some(pert),
            ..SweepConfig::new(3, 99).with_checks(&[id])
        };
        let results = sweep(&cfg).map_err(|e| e.to_string())?;
        let s = SweepSummary::of(&results);
        ensure(s.failed > 0 && s.exit_code() == 1, || {
            format!("{id}: perturbed sweep did not fail")
        })?;
        notes.push(format!("{id} {} failures", s.failed));
    }
    for flag in ["thm1_iii_denominator_7", "morley_exponent"] {
        let status = Command::new(env!("CARGO_BIN_EXE_supercong"))
            .args([
                "verify",
                "--to",
                "99",
                "--jobs",
                "2",
                "--out",
                "/dev/null",
                "--perturb",
                flag,
            ])
            .output()
            .map_err(|e| e.to_string())?
            .status;
        ensure(status.code() == Some(1), || {
            format!("--perturb {flag} exited with {status}")
        })?;
    }
    Ok(format!("{}; CLI exit code 1", notes.join(", ")))
}

fn determinism() -> Outcome {
    let render = |jobs: usize| -> Result<Vec<u8>, String> {
        let results =
            sweep(&SweepConfig::new(3, 999).with_jobs(jobs)).map_err(|e| e.to_string())?;
        let mut buf = Vec::new();
        write_report(&results, ReportFormat::Jsonl, &mut buf, false).map_err(|e| e.to_string())?;
        Ok(buf)
    };
    let one = render(1)?;
    for jobs in [4, 8] {
        ensure(render(jobs)? == one, || {
            format!("jobs={jobs} report differs from jobs=1")
        })?;
    }
    let cli = |jobs: &str| {
        Command::new(env!("CARGO_BIN_EXE_supercong"))
            .args(["verify", "--to", "999", "--jobs", jobs])
            .output()
            .map(|o| o.stdout)
            .map_err(|e| e.to_string())
    };
    ensure(cli("1")? == one && cli("8")? == one, || {
        "CLI report differs from library report".into()
    })?;
    Ok(format!("{} identical bytes for jobs 1, 4, 8", one.len()))
}

fn scanner_rediscovery() -> Outcome {
    let cfg = ScanConfig {
        families: vec![LucasFamily::U, LucasFamily::V],
        a_range: (-5, 5),
        b_range: (-5, 5),
        denoms: vec![-16, -8, -4, 4, 8, 16],
        prime_hi: 999,
        min_primes: 8,
        jobs: workers(),
    };
    let findings = scan(&cfg).map_err(|e| e.to_string())?;
    let targets = [
        (LucasParams::new(-1, 1), 16, (1, 12), CheckId::Thm1Ii),
        (LucasParams::new(-3, 3), 16, (1, 6), CheckId::Thm1nIi),
    ];
    for (params, denom, class, id) in targets {
        let hit = findings.iter().find(|f| {
            f.family == LucasFamily::U
                && f.params == params
                && f.denom.abs() == denom
                && f.residue_class == class
        });
        let hit = hit.ok_or_else(|| format!("U{params}/{denom}^k not found in class {class:?}"))?;
        ensure(hit.known_match == Some(id) && hit.all_passed, || {
            format!("U{params} labelled {:?}", hit.known_match)
        })?;
    }
    let known = findings.iter().filter(|f| f.known_match.is_some()).count();
    Ok(format!(
        "{} findings, {known} known, both targets labelled",
        findings.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("theorem suite, p < 5000", theorem_suite),
        ("parametric suite, |a|,|b| <= 5, p < 500", parametric_suite),
        ("fast path equals exact oracle, p <= 97", oracle_equivalence),
        ("identity suites", identity_suite),
        ("negative control", negative_control),
        ("determinism across worker counts", determinism),
        ("scanner rediscovery", scanner_rediscovery),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
