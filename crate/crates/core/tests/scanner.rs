use supercong::catalog::{oracle_scan_sum, CheckId};
use supercong::engine::{scan, ScanConfig};
use supercong::sequences::{LucasFamily, LucasParams};

fn config(prime_hi: u64) -> ScanConfig {
    ScanConfig {
        jobs: 4,
        ..ScanConfig::new(prime_hi)
    }
}

#[test]
fn findings_reverify_under_the_oracle() {
    let findings = scan(&config(400)).unwrap();
    assert!(!findings.is_empty());
    for f in &findings {
        assert!(f.primes_tested() >= 8 && f.all_passed);
        for &p in f.primes.iter().take(3) {
            let lhs = oracle_scan_sum(f.family, f.params, f.denom, p).unwrap();
            assert_eq!(
                lhs,
                Some(0),
                "{}{} / {}^k at p={p}",
                f.family,
                f.params,
                f.denom
            );
        }
    }
}

#[test]
fn known_points_are_labelled_and_classes_are_disjoint() {
    let findings = scan(&config(600)).unwrap();
    let label = |fam, a, b, m| {
        findings
            .iter()
            .find(|f| f.family == fam && f.params == LucasParams::new(a, b) && f.denom == m)
            .and_then(|f| f.known_match)
    };
    assert_eq!(label(LucasFamily::U, -1, 1, 16), Some(CheckId::Thm1Ii));
    assert_eq!(label(LucasFamily::U, 3, 3, -16), Some(CheckId::Thm1nIi));
    assert_eq!(label(LucasFamily::V, -1, 1, 16), Some(CheckId::Thm1nIii));
    for f in &findings {
        let overlapping = findings.iter().filter(|g| {
            g.family == f.family
                && g.params == f.params
                && g.denom == f.denom
                && g.fine_classes.iter().any(|c| f.fine_classes.contains(c))
        });
        assert_eq!(overlapping.count(), 1);
    }
}

#[test]
fn raising_the_threshold_never_adds_findings() {
    let loose = scan(&ScanConfig {
        min_primes: 5,
        ..config(300)
    })
    .unwrap();
    let strict = scan(&ScanConfig {
        min_primes: 20,
        ..config(300)
    })
    .unwrap();
    assert!(strict.len() <= loose.len());
    assert!(strict.iter().all(|f| f.primes_tested() >= 20));
}

#[test]
fn job_count_does_not_change_findings() {
    let one = scan(&ScanConfig {
        jobs: 1,
        ..config(300)
    })
    .unwrap();
    let many = scan(&ScanConfig {
        jobs: 8,
        ..config(300)
    })
    .unwrap();
    assert_eq!(one, many);
}
