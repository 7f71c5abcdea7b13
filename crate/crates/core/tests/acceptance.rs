//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any fails. Each criterion pairs the library computation
//! with an independent oracle written here from scratch.

use std::sync::Arc;
use std::time::{Duration, Instant};

use tamedef::coeffring::FiniteField;
use tamedef::cohomology::{h_dims, GModule};
use tamedef::ledger::{golden_scenarios, parse_scenario, ScenarioBody};
use tamedef::coeffring::parse;
use tamedef::defclass::{failure_probe, stabilization_check};
use tamedef::matrep::{Mode, SearchConfig, Variant};
use tamedef::verify::{self, Check};

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_checks(checks: &[Check]) -> Outcome {
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
    Outcome {
        passed: failed.is_empty(),
        detail: match failed.first() {
            Some(c) => format!("{}: {}", c.id, c.detail),
            None => checks.iter().map(|c| c.detail.as_str()).collect::<Vec<_>>().join(" | "),
        },
    }
}

fn and(a: Outcome, oracle: Result<(), String>) -> Outcome {
    match oracle {
        Ok(()) => a,
        Err(e) => Outcome { passed: false, detail: format!("oracle: {}", e) },
    }
}

// ---- plain-integer helpers for oracles over Z/n ----

type M = [i64; 4];

fn md(a: i64, n: i64) -> i64 {
    a.rem_euclid(n)
}

fn mul(a: &M, b: &M, n: i64) -> M {
    [
        md(a[0] * b[0] + a[1] * b[2], n),
        md(a[0] * b[1] + a[1] * b[3], n),
        md(a[2] * b[0] + a[3] * b[2], n),
        md(a[2] * b[1] + a[3] * b[3], n),
    ]
}

fn inv_unit(a: i64, n: i64) -> i64 {
    (1..n).find(|x| md(a * x, n) == 1).expect("unit")
}

fn inv(a: &M, n: i64) -> M {
    let d = inv_unit(md(a[0] * a[3] - a[1] * a[2], n), n);
    [md(a[3] * d, n), md(-a[1] * d, n), md(-a[2] * d, n), md(a[0] * d, n)]
}

fn pow(a: &M, e: u64, n: i64) -> M {
    (0..e).fold([1, 0, 0, 1], |acc, _| mul(&acc, a, n))
}

fn reduce(a: &M, n: i64) -> M {
    [md(a[0], n), md(a[1], n), md(a[2], n), md(a[3], n)]
}

// ---- criterion 1 ----

/// Number of vectors fixed by both generators, by exhaustion.
fn fixed_count(m: &GModule) -> usize {
    let k = m.field();
    let els: Vec<_> = k.ring().elements().collect();
    let dim = m.dim();
    let mut count = 0;
    let mut idx = vec![0usize; dim];
    loop {
        let x: Vec<_> = idx.iter().map(|&i| els[i].clone()).collect();
        if m.sigma().apply(k, &x) == x && m.tau().apply(k, &x) == x {
            count += 1;
        }
        let mut i = 0;
        while i < dim {
            idx[i] += 1;
            if idx[i] < els.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == dim {
            return count;
        }
    }
}

/// `h^0` by counting fixed vectors, `h^2` by counting fixed vectors of the
/// dual module, `h^1` from Euler characteristic zero at a place away from p.
fn cohomology_oracle(p: u64, v: u64) -> Result<(), String> {
    let k = FiniteField::new(p, 1, None).unwrap();
    for (trace_zero, want) in [(false, (4, 8, 4)), (true, (3, 6, 3))] {
        let m = GModule::trivial_adjoint(&k, v, trace_zero).unwrap();
        let log = |n: usize| (n as f64).log(p as f64).round() as usize;
        let h0 = log(fixed_count(&m));
        let h2 = log(fixed_count(&m.dual().unwrap()));
        let got = (h0, h0 + h2, h2);
        if got != want {
            return Err(format!("(p, v) = ({p}, {v}): oracle {got:?}, expected {want:?}"));
        }
    }
    Ok(())
}

fn criterion_1() -> (Outcome, Vec<Duration>) {
    let mut times = Vec::new();
    let mut checks = Vec::new();
    let mut oracle = Ok(());
    for (p, v) in [(5, 11), (3, 13)] {
        let t = Instant::now();
        let k = FiniteField::new(p, 1, None).unwrap();
        let ad = h_dims(&Arc::new(GModule::trivial_adjoint(&k, v, false).unwrap()), false);
        let ad0 = h_dims(&Arc::new(GModule::trivial_adjoint(&k, v, true).unwrap()), false);
        times.push(t.elapsed());
        checks.push(Check {
            id: format!("p={p} v={v}"),
            criterion: 1,
            passed: ad == Ok((4, 8, 4)) && ad0 == Ok((3, 6, 3)),
            detail: format!("Ad {:?}, Ad0 {:?}", ad, ad0),
        });
        oracle = oracle.and(cohomology_oracle(p, v));
    }
    (and(from_checks(&checks), oracle), times)
}

// ---- criterion 2 ----

fn ledger_oracle() -> Result<(), String> {
    let want = [
        ("selmer_difference.toml", 1),
        ("selmer_difference_aux.toml", 1),
        ("balanced_ad0.toml", 0),
        ("dual_selmer_vanishing.toml", 1),
    ];
    for (name, d) in want {
        let text = golden_scenarios().into_iter().find(|(n, _)| *n == name).ok_or(name)?.1;
        let ScenarioBody::Wiles { scenario, .. } = parse_scenario(text).map_err(|e| e.to_string())?.body else {
            return Err(format!("{name} is not a Wiles scenario"));
        };
        let mut sum = scenario.h0_global - scenario.h0_global_dual;
        for p in &scenario.places {
            sum += p.dim_l - p.h0;
        }
        if sum != d {
            return Err(format!("{name}: hand sum {sum}, expected {d}"));
        }
    }
    // tangent dimensions at p: (dim N~_p, h0(Ad)) and h1(U~) = h0 + 0 + 3
    for (h0_u, dim_n, h0_ad, h1_ut) in [(1, 4, 2, 5), (0, 3, 1, 4)] {
        let h1_u = 2 + h0_u;
        if 1 + h1_u != dim_n || 2 + h0_ad != dim_n || h0_ad + 3 != h1_ut {
            return Err("tangent identities".into());
        }
    }
    Ok(())
}

// ---- criterion 3 ----

/// Same statements with class membership decided by exhaustive conjugator
/// search as well as by normal form, on rings small enough to enumerate.
fn stabilization_oracle(cfg: &SearchConfig) -> Result<(), String> {
    let r3 = Arc::new(parse("witt(5,1,3); vars; rel").map_err(|e| e.to_string())?);
    let r2 = Arc::new(parse("witt(5,1,2); vars; rel").map_err(|e| e.to_string())?);
    for variant in [Variant::Nr, Variant::Ram] {
        let rep = stabilization_check(&r3, 2, variant, 11, Mode::Both, cfg).map_err(|e| e.to_string())?;
        if rep.cases.is_empty() || !rep.all_preserved() {
            return Err(format!("{variant} over Z/125 not preserved under search"));
        }
        let bad = failure_probe(&r2, variant, 11, Mode::Both, cfg).map_err(|e| e.to_string())?;
        if bad.is_empty() {
            return Err(format!("{variant} over Z/25: search finds no violation"));
        }
    }
    Ok(())
}

// ---- criterion 4 ----

/// The identities with plain integers mod `5^(k+1)`.
fn identity_oracle() -> Result<(), String> {
    let (p, v) = (5i64, 11i64);
    let nu = (v - 1) / p;
    let mut n = 0;
    for (k, rs) in [(2u32, [5i64, 10, 15, 55, 120]), (3, [25, 50, 75, 100, 125])] {
        let q = p.pow(k + 1);
        let u = (1..q).find(|x| md(x * x * v, q) == 1 && md(*x, p) == 1).ok_or("no u")?;
        for r in rs {
            let s = md(r * inv_unit(md(nu, q), q), q);
            let a: M = [1, 0, s, 1];
            let ai = inv(&a, q);
            for x in [0i64, 25, 50, 125, 250, 500] {
                let tw: M = reduce(&[u * v, u * x, u * p * r, u], q);
                let target: M = reduce(&[u * v, u * x, 0, u], q);
                if mul(&mul(&ai, &tw, q), &a, q) != target {
                    return Err(format!("sigma identity k={k} r={r} x={x}"));
                }
                for y in [0i64, 5, 10, 25, 30, 50, 125, 135] {
                    let tau: M = reduce(&[1, y, 0, 1], q);
                    if md(y, p * p) == 0 {
                        if mul(&mul(&ai, &tau, q), &a, q) != tau {
                            return Err(format!("tau identity k={k} r={r} y={y}"));
                        }
                    } else {
                        let c = md(s * y, q);
                        let want: M = reduce(&[1 - c, y, 0, 1 + c], q);
                        if mul(&mul(&a, &tau, q), &ai, q) != want {
                            return Err(format!("ram display k={k} r={r} y={y}"));
                        }
                    }
                    n += 1;
                }
            }
        }
    }
    if n < 100 {
        return Err(format!("only {n} triples"));
    }
    Ok(())
}

// ---- criterion 5 ----

/// Every one of the `3^8` entrywise lifts of the base from Z/9 to Z/27
/// satisfies the relation, matching `|H^1(G_v, Ad) (x) J| = 3^8` with no
/// coboundaries for the trivial residual action.
fn fiber_oracle() -> Result<(), String> {
    let (q, v) = (27i64, 13u64);
    let u = (1..9).find(|x| md(x * x * 13, 9) == 1 && md(*x, 3) == 1).ok_or("no u")?;
    let s0: M = [md(u * 13, 9), 0, 0, u];
    let t0: M = [1, 3, 0, 1];
    let mut count = 0;
    for i in 0..3i64.pow(8) {
        let d: Vec<i64> = (0..8).map(|j| 9 * ((i / 3i64.pow(j)) % 3)).collect();
        let s: M = reduce(&[s0[0] + d[0], s0[1] + d[1], s0[2] + d[2], s0[3] + d[3]], q);
        let t: M = reduce(&[t0[0] + d[4], t0[1] + d[5], t0[2] + d[6], t0[3] + d[7]], q);
        if mul(&mul(&s, &t, q), &inv(&s, q), q) == pow(&t, v, q) {
            count += 1;
        }
    }
    if count != 6561 {
        return Err(format!("{count} lifts satisfy the relation"));
    }
    Ok(())
}

fn main() {
    let cfg = SearchConfig::default();
    let mut all_ok = true;
    let mut report = |n: u8, name: &str, o: Outcome, elapsed: Duration, limit: Duration| {
        let in_time = elapsed <= limit;
        let ok = o.passed && in_time;
        all_ok &= ok;
        println!(
            "criterion {n} ({name}): {} [{:.2}s, limit {}s]{}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs(),
            if ok { String::new() } else if !in_time { " too slow".into() } else { format!(" {}", o.detail) }
        );
    };

    let (o, each) = criterion_1();
    let slowest = each.into_iter().max().unwrap_or_default();
    report(1, "trivial-prime cohomology table", o, slowest, Duration::from_secs(1));

    let t = Instant::now();
    let o = from_checks(&verify::check_ledger(None));
    let e = t.elapsed();
    report(2, "Selmer ledger golden files", and(o, ledger_oracle()), e, Duration::from_secs(1));

    let t = Instant::now();
    let o = from_checks(&verify::check_stabilization(&cfg));
    let e = t.elapsed();
    report(3, "stabilization for k >= 2, failure at k = 1", and(o, stabilization_oracle(&cfg)), e, Duration::from_secs(30));

    let t = Instant::now();
    let o = from_checks(&[verify::check_conjugation_identities()]);
    let e = t.elapsed();
    report(4, "conjugation identities", and(o, identity_oracle()), e, Duration::from_secs(5));

    let t = Instant::now();
    let o = from_checks(&[verify::check_fiber(&cfg)]);
    let e = t.elapsed();
    report(5, "fiber torsor over Z/27", and(o, fiber_oracle()), e, Duration::from_secs(120));

    let t = Instant::now();
    let o = from_checks(&[
        verify::check_hull_step(),
        verify::check_cocycle_recovery(50),
        verify::check_determinants(50),
    ]);
    report(6, "hull step, twist recovery, weights", o, t.elapsed(), Duration::from_secs(10));

    let t = Instant::now();
    let o = from_checks(&[verify::check_oracle_equivalence(200, &cfg)]);
    report(7, "normal form vs exhaustive search", o, t.elapsed(), Duration::from_secs(600));

    let t = Instant::now();
    let s = verify::scope_boundary();
    let o = Outcome { passed: s.passed && s.criterion == 8 && !s.detail.is_empty(), detail: s.detail };
    report(8, "scope boundary documented", o, t.elapsed(), Duration::from_secs(1));

    if !all_ok {
        std::process::exit(1);
    }
}
