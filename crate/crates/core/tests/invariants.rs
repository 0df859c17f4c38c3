//! Cross-module invariants checked against independent oracles.

use std::collections::{BTreeSet, HashSet};

use permbin::arith::{divisors, gcd, inv_mod, prime_powers_in, primes_up_to};
use permbin::binomial::{self, class_representative, Binomial};
use permbin::bounds;
use permbin::ff::FiniteField;
use permbin::hermite::{self, CertificateKind, CertificateValidator, WitnessCertificate};
use permbin::heuristic;
use permbin::scan::{self, ClassSummary};

fn naive(f: &FiniteField, m: u64, n: u64, a: u64) -> bool {
    let b = Binomial::new(f, m, n, f.element(a).unwrap()).unwrap();
    binomial::is_permutation_naive(f, &b).unwrap()
}

/// Corollary table from evaluating every `x^m + a x^n` with `m - n < 2(p - 1)`.
#[test]
fn corollary_table_matches_brute_force() {
    let p_max = 37;
    let classes = scan::prime_classes(p_max).unwrap();
    let g_values: Vec<u64> = (1..p_max).collect();
    let table = scan::corollary_table_from(&classes, &g_values);
    for p in primes_up_to(p_max).into_iter().filter(|&p| p > 2) {
        let f = FiniteField::new(p, 1).unwrap();
        let mut found = BTreeSet::new();
        for n in 1..p {
            for d in 1..2 * (p - 1) {
                let g = gcd(d, p - 1);
                if found.contains(&g) {
                    continue;
                }
                if (1..p).any(|a| naive(&f, n + d, n, a)) {
                    found.insert(g);
                }
            }
        }
        for &g in &g_values {
            assert_eq!(table[&g].contains(&p), found.contains(&g), "p={p} g={g}");
        }
    }
    // the small-gcd rows contain only the smallest primes
    assert_eq!(table[&2], BTreeSet::from([3]));
    assert_eq!(table[&3], BTreeSet::from([7]));
    assert_eq!(table[&4], BTreeSet::from([5]));
    assert!(naive(&FiniteField::new(7, 1).unwrap(), 4, 1, 3));
}

#[test]
fn permuting_classes_include_p31_g6() {
    let sweep = scan::verify_intro1(31).unwrap();
    assert!(sweep.violations.is_empty());
    assert!(sweep.permuting_pairs.contains(&(31, 6)));
}

#[test]
fn conjecture_sweep_flags_small_c() {
    let sweep = scan::verify_conjecture(100, 2.0).unwrap();
    assert!(sweep.violations.is_empty());
    let sweep = scan::verify_conjecture(100, 0.2).unwrap();
    assert!(sweep.violations.iter().any(|c| c.p == 11 && c.k == 5));
    assert_eq!(sweep.exit_code(), 1);
}

/// Canonical class of `x^m + a x^n` over F_p, or `None` when obstructed.
fn class_of(p: u64, m: u64, n: u64) -> Option<(u64, u64)> {
    let order = p - 1;
    let d = m - n;
    let k = gcd(d, order);
    if gcd(gcd(m, n), order) > 1 {
        return None;
    }
    let r = order / k;
    let j = inv_mod((d / k) % r, r).expect("d / k is a unit mod r");
    let c = (n % r) * j % r;
    class_representative(c, k, r).map(|rep| (k, rep))
}

#[test]
fn class_of_matches_canonicalize() {
    for p in [7u64, 13, 31, 61] {
        for m in 2..2 * p {
            for n in 1..m {
                let want = match binomial::canonicalize(p, m, n).unwrap() {
                    binomial::Reduction::Canonical(c) => Some((c.k, c.n)),
                    binomial::Reduction::Obstructed(_) => None,
                };
                assert_eq!(class_of(p, m, n), want, "p={p} m={m} n={n}");
            }
        }
    }
}

/// Every permuting `x^m + a x^n`, `0 < n < m < p <= 10^4`, satisfies the three
/// degree and gcd inequalities. Pairs where an inequality could fail are
/// enumerated directly; the rest satisfy it by size alone.
#[test]
fn permuting_binomials_satisfy_inequalities() {
    let classes = scan::prime_classes(10_000).unwrap();
    let permuting: HashSet<(u64, u64, u64)> = classes
        .iter()
        .filter(|c| c.permutes())
        .map(|c| (c.p, c.k, c.n))
        .collect();
    for c in classes.iter().filter(|c| c.permutes()) {
        assert!(bounds::intro1_inequality(c.p, c.n + c.k, c.n), "{c:?}");
    }
    let mut hard = 0u64;
    for p in primes_up_to(10_000).into_iter().filter(|&p| p > 2) {
        for m in 2..p {
            if (m - 1) >= p - 1 {
                break;
            }
            let nr_possible = !bounds::nr_inequality(p, m, 1, p);
            for n in 1..m {
                let wt_possible = (m - 1) * n < p - 1;
                if !wt_possible && !nr_possible {
                    break;
                }
                hard += 1;
                let permutes =
                    class_of(p, m, n).is_some_and(|(k, cn)| permuting.contains(&(p, k, cn)));
                if permutes {
                    assert!(bounds::wt_inequality(p, m, n), "wt p={p} m={m} n={n}");
                    assert!(bounds::nr_inequality(p, m, n, p), "nr p={p} m={m} n={n}");
                }
            }
        }
    }
    assert!(hard > 1_000_000);
}

#[test]
fn certificates_sound_for_every_a() {
    for p in primes_up_to(200).into_iter().filter(|&p| p >= 5) {
        let f = FiniteField::new(p, 1).unwrap();
        let all: Vec<_> = f.elements().collect();
        let mut v = CertificateValidator::new(&f);
        for k in divisors(p - 1) {
            let r = (p - 1) / k;
            for n in (1..=r).filter(|&n| gcd(n, k) == 1) {
                if bounds::below_intro1_bound(p, k) {
                    let c = hermite::intro1_certificate(p, n, k).unwrap();
                    v.validate(&c, &all).unwrap();
                }
                if let Some(l) = hermite::search_unique_divisible(p, n, k) {
                    let c = WitnessCertificate {
                        kind: CertificateKind::UniqueHermiteTerm { exponent: l },
                        p,
                        m: None,
                        n,
                        k,
                    };
                    v.validate(&c, &all).unwrap();
                }
            }
        }
        for m in 2..p {
            for n in (1..m).filter(|&n| gcd(m, n) == 1) {
                if let Ok(c) = hermite::wt_certificate(p, m, n) {
                    v.validate(&c, &all).unwrap();
                }
            }
        }
    }
}

/// Hermite's criterion read both ways on the binomials the search finds.
#[test]
fn permuting_binomials_pass_hermite() {
    for p in primes_up_to(31).into_iter().filter(|&p| p >= 3) {
        let f = FiniteField::new(p, 1).unwrap();
        for m in 2..p {
            for n in 1..m {
                for a in 1..p {
                    if !naive(&f, m, n, a) {
                        continue;
                    }
                    for l in 1..p - 1 {
                        let deg = hermite::reduced_power_degree(p, m, n, a, l);
                        assert!(
                            deg.is_none_or(|d| d < (p - 1) as usize),
                            "p={p} m={m} n={n} a={a} l={l}"
                        );
                    }
                    let roots = (0..p)
                        .filter(|&x| {
                            let fx = f
                                .add(
                                    f.pow(f.from_int(x as i64), m as i64).unwrap(),
                                    f.mul(
                                        f.from_int(a as i64),
                                        f.pow(f.from_int(x as i64), n as i64).unwrap(),
                                    )
                                    .unwrap(),
                                )
                                .unwrap();
                            fx.is_zero()
                        })
                        .count();
                    assert_eq!(roots, 1);
                }
            }
        }
    }
}

#[test]
fn universal_set_meets_hat_t_lower() {
    for q in prime_powers_in(3, 500) {
        let f = FiniteField::of_order(q).unwrap();
        for r in divisors(q - 1).into_iter().filter(|&r| r <= 3) {
            let size = scan::universal_a_search(&f, r).unwrap().len() as f64;
            let lower = bounds::t_bounds(q, r).unwrap().hat_t_lower;
            assert!(size >= lower, "q={q} r={r}: {size} < {lower}");
        }
    }
}

#[test]
fn scan_records_are_complete_and_match_count_t() {
    for q in prime_powers_in(2, 64) {
        let f = FiniteField::of_order(q).unwrap();
        let recs = scan::scan_field_in(&f).unwrap();
        assert_eq!(recs.len() as u64, scan::expected_record_count(q));
        let keys: HashSet<(u64, u64, String)> =
            recs.iter().map(|r| (r.k, r.n, r.a.clone())).collect();
        assert_eq!(keys.len(), recs.len(), "duplicate records for q={q}");
        for r in &recs {
            assert_eq!((q - 1) % r.k, 0);
            assert_eq!(gcd(r.n, r.k), 1);
        }
        for m in 2..q {
            for n in 1..m {
                let zero = u64::from(gcd(m, q - 1) == 1);
                let t = match class_of_field(q, m, n) {
                    None => zero,
                    Some((k, cn, r)) => {
                        zero + r * recs
                            .iter()
                            .filter(|x| x.k == k && x.n == cn && x.permutes)
                            .count() as u64
                    }
                };
                assert_eq!(binomial::count_t(&f, m, n).unwrap(), t, "q={q} m={m} n={n}");
            }
        }
    }
}

fn class_of_field(q: u64, m: u64, n: u64) -> Option<(u64, u64, u64)> {
    match binomial::canonicalize(q, m, n).unwrap() {
        binomial::Reduction::Canonical(c) => Some((c.k, c.n, c.r)),
        binomial::Reduction::Obstructed(_) => None,
    }
}

#[test]
fn class_summaries_give_t_class() {
    let f = FiniteField::of_order(49).unwrap();
    let classes: Vec<ClassSummary> = scan::field_classes(&f).unwrap();
    for c in classes {
        let t = binomial::count_t(&f, c.n + c.k, c.n).unwrap();
        let zero = u64::from(gcd(c.n + c.k, 48) == 1);
        assert_eq!(t, zero + c.t_class(), "{c:?}");
    }
}

#[test]
fn heuristic_majorant_and_monotone_total() {
    let reports: Vec<_> = (3..=37).map(|r| heuristic::E_bound(r).unwrap()).collect();
    let last = reports.last().unwrap();
    for (&r, &f) in &last.f_values {
        assert!(
            heuristic::weight(r) * f as f64 <= heuristic::tail_summand_bound(r).unwrap(),
            "r={r}"
        );
    }
    for w in reports.windows(2) {
        assert!(
            w[1].total_bound <= w[0].total_bound * (1.0 + 1e-9),
            "R={}",
            w[1].r
        );
    }
}
