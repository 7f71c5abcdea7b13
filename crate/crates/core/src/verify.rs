//! The full verification suite behind `verify-all` and the acceptance tests.
//!
//! Every check returns a [`Check`]; errors inside a check are reported as a
//! failure of that check rather than aborting the run. Reports carry no
//! timings so that repeated runs produce identical output.

use std::path::Path;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coeffring::{filtration_nk, parse, CoefficientRing, Elem, Monomial, SubmoduleIdeal};
use crate::cohomology::{h_dims, Cocycle, GModule};
use crate::defclass::{
    cocycle_difference, conjugation_identity_check, exp_twist_sum, failure_probe, fiber_enumerate,
    hull_step_check, stabilization_check, weight_point, weights_congruent, TwistDatum,
};
use crate::error::{Error, Result};
use crate::ledger::{golden_scenarios, parse_scenario, run_scenario};
use crate::linalg::FqMatrix;
use crate::matrep::{
    in_deform_class, Conjugator, DeformClassSpec, Mat2, Mode, SearchConfig, TameRep, Variant,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    /// Stable identifier of the claim.
    pub id: String,
    /// Acceptance criterion the check belongs to.
    pub criterion: u8,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(id: impl Into<String>, criterion: u8, passed: bool, detail: impl Into<String>) -> Self {
        Check { id: id.into(), criterion, passed, detail: detail.into() }
    }

    fn from_result(id: &str, criterion: u8, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Check::new(id, criterion, passed, detail),
            Err(e) => Check::new(id, criterion, false, format!("error: {}", e)),
        }
    }
}

/// What the suite deliberately leaves out.
pub const SCOPE_BOUNDARY: &str = "Global existence statements (choice of auxiliary trivial primes, \
global Galois cohomology, class-group input, modularity of the lift) are not computed. They are \
covered only through their local and arithmetic consequences: the Selmer ledger, the hull-step \
substitution identities and the weight congruences checked above.";

fn ring(desc: &str) -> Result<Arc<CoefficientRing>> {
    Ok(Arc::new(parse(desc)?))
}

/// `(h^0, h^1, h^2)` of `Ad` and `Ad^0` at trivial primes.
pub fn check_trivial_prime_table(p: u64, v: u64) -> Check {
    let r = (|| -> Result<(bool, String)> {
        let k = crate::coeffring::FiniteField::new(p, 1, None)?;
        let ad = h_dims(&Arc::new(GModule::trivial_adjoint(&k, v, false)?), false)?;
        let ad0 = h_dims(&Arc::new(GModule::trivial_adjoint(&k, v, true)?), false)?;
        Ok((
            ad == (4, 8, 4) && ad0 == (3, 6, 3),
            format!("Ad {:?}, Ad0 {:?}", ad, ad0),
        ))
    })();
    Check::from_result(&format!("trivial-prime-table p={} v={}", p, v), 1, r)
}

/// Scenario files from `dir`, or the shipped ones.
pub fn check_ledger(dir: Option<&Path>) -> Vec<Check> {
    let files: Result<Vec<(String, String)>> = match dir {
        None => Ok(golden_scenarios()
            .into_iter()
            .map(|(n, t)| (n.to_string(), t.to_string()))
            .collect()),
        Some(d) => (|| {
            let mut out = Vec::new();
            let entries = std::fs::read_dir(d).map_err(|e| Error::Parse(format!("{}: {}", d.display(), e)))?;
            for e in entries {
                let path = e.map_err(|e| Error::Parse(e.to_string()))?.path();
                if path.extension().is_some_and(|x| x == "toml") {
                    let text = std::fs::read_to_string(&path).map_err(|e| Error::Parse(e.to_string()))?;
                    out.push((path.file_name().unwrap().to_string_lossy().into_owned(), text));
                }
            }
            out.sort();
            Ok(out)
        })(),
    };
    let files = match files {
        Ok(f) => f,
        Err(e) => return vec![Check::new("ledger", 2, false, e.to_string())],
    };
    if files.is_empty() {
        return vec![Check::new("ledger", 2, false, "no scenario files")];
    }
    files
        .iter()
        .map(|(name, text)| {
            let id = format!("ledger {}", name);
            match parse_scenario(text).and_then(|s| run_scenario(&s)) {
                Ok(o) => Check::new(id, 2, o.passed, format!("{}: {}", o.claim, o.details.join("; "))),
                Err(e) => Check::new(id, 2, false, format!("error: {}", e)),
            }
        })
        .collect()
}

pub const STABILIZATION_RINGS: [&str; 2] = ["witt(5,1,4); vars; rel", "witt(5,1,3); vars U; rel U^3"];

pub fn check_stabilization(cfg: &SearchConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for desc in STABILIZATION_RINGS {
        for k in [2, 3] {
            for variant in [Variant::Nr, Variant::Ram] {
                let r = (|| -> Result<(bool, String)> {
                    let rep = stabilization_check(&ring(desc)?, k, variant, 11, Mode::NormalForm, cfg)?;
                    let bad = rep.violations().count();
                    Ok((
                        !rep.cases.is_empty() && rep.all_preserved(),
                        format!("{} twists, {} violations over {}", rep.cases.len(), bad, rep.ring),
                    ))
                })();
                out.push(Check::from_result(&format!("stabilization {} k={} [{}]", variant, k, desc), 3, r));
            }
        }
    }
    let r = (|| -> Result<(bool, String)> {
        let r = ring("witt(5,1,2); vars; rel")?;
        let mut found = Vec::new();
        let mut total = 0;
        for variant in [Variant::Nr, Variant::Ram] {
            let bad = failure_probe(&r, variant, 11, Mode::NormalForm, cfg)?;
            total += bad.len();
            found.push(format!("{}: {} violations", variant, bad.len()));
            if let Some(c) = bad.first() {
                found.push(format!("e.g. twist by {} with scalar {}", c.cocycle, c.scalar));
            }
        }
        Ok((total > 0, found.join("; ")))
    })();
    out.push(Check::from_result("stabilization fails at k=1 over O/p^2", 3, r));
    out
}

pub fn check_conjugation_identities() -> Check {
    let r = (|| -> Result<(bool, String)> {
        let r = ring("witt(5,1,4); vars; rel")?;
        let (mut n, mut ram, mut bad) = (0, 0, Vec::new());
        for (k, rs) in [(2u32, [5i64, 10, 15, 55, 120]), (3, [25, 50, 75, 100, 125])] {
            for rv in rs {
                for x in [0i64, 25, 50, 125, 250, 500] {
                    for y in [0i64, 5, 10, 25, 30, 50, 125, 135] {
                        let c = conjugation_identity_check(&r, k, &r.from_int(rv), &r.from_int(x), &r.from_int(y), 11, 1)?;
                        n += 1;
                        ram += c.tau_ram.is_some() as usize;
                        if !c.holds() {
                            bad.push(format!("(k={}, r={}, x={}, y={})", k, rv, x, y));
                        }
                    }
                }
            }
        }
        Ok((
            bad.is_empty() && n >= 100,
            format!("{} triples ({} ramified), failures: {}", n, ram, if bad.is_empty() { "none".into() } else { bad.join(" ") }),
        ))
    })();
    Check::from_result("conjugation identities over Z/5^4", 4, r)
}

pub fn check_fiber(cfg: &SearchConfig) -> Check {
    let r = (|| -> Result<(bool, String)> {
        let r = ring("witt(3,1,3); vars; rel")?;
        let j = SubmoduleIdeal::generated_by(r.clone(), &[Monomial::new(2, vec![])])?;
        let q = Arc::new(j.quotient_ring()?);
        let spec = DeformClassSpec::plain(Variant::D, 13);
        let base = spec.normal_form(&q, &q.zero(), &q.from_int(3), None)?;
        let rep = fiber_enumerate(&r, &j, &spec, &base, cfg)?;
        Ok((
            !rep.is_empty() && rep.simply_transitive,
            format!(
                "{} lifts, {} in class, |H1 (x) J| = {}, {} classes, simply transitive: {}; \
                 coarser equivalence: {} classes, free: {}",
                rep.lifts,
                rep.class_members,
                rep.group_order,
                rep.classes,
                rep.simply_transitive,
                rep.coarse_classes,
                rep.coarse_free
            ),
        ))
    })();
    Check::from_result("fiber over Z/27 -> Z/9 is an H1 (x) J torsor", 5, r)
}

pub fn check_hull_step() -> Check {
    let r = (|| -> Result<(bool, String)> {
        let src = ring("witt(5,1,4); vars U; rel U^4")?;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut n = 0;
        for k in [3u32, 4] {
            let tgt = Arc::new(filtration_nk(&src, k)?.quotient_ring()?);
            let m: Vec<Elem> = tgt.elements().filter(|x| tgt.in_maximal_ideal(x)).collect();
            let nk1 = filtration_nk(&tgt, k - 1)?;
            let hs: Vec<Elem> = m.iter().filter(|h| nk1.contains(&tgt.mul(&tgt.p_elem(), h))).cloned().collect();
            for _ in 0..25 {
                let g = m.choose(&mut rng).unwrap();
                let h = hs.choose(&mut rng).unwrap();
                let rep = hull_step_check(&src, &tgt, k, g, h)?;
                if !rep.agree() {
                    return Ok((false, format!("k={}: G={} H={} disagree", k, tgt.fmt_elem(g), tgt.fmt_elem(h))));
                }
                n += 1;
            }
        }
        Ok((true, format!("{} substitution pairs agree on the basis of n_3", n)))
    })();
    Check::from_result("hull-step substitutions agree on n_3", 6, r)
}

fn random_elem(rng: &mut ChaCha8Rng, xs: &[Elem]) -> Elem {
    xs.choose(rng).expect("nonempty").clone()
}

fn random_fq(rng: &mut ChaCha8Rng, r: &CoefficientRing, trace_zero: bool) -> FqMatrix {
    let k = r.residue_field();
    let el: Vec<_> = k.elements().collect();
    let mut data: Vec<_> = (0..4).map(|_| el.choose(rng).unwrap().clone()).collect();
    if trace_zero {
        data[3] = k.neg(&data[0]);
    }
    FqMatrix { rows: 2, cols: 2, data }
}

/// A random member of `D_v` over `r`, conjugated by a random `A ≡ Id`.
fn random_member(rng: &mut ChaCha8Rng, r: &Arc<CoefficientRing>, v: u64) -> Result<TameRep> {
    let all: Vec<Elem> = r.elements().collect();
    let m: Vec<Elem> = all.iter().filter(|x| r.in_maximal_ideal(x)).cloned().collect();
    let n2 = filtration_nk(r, 2)?;
    let xs: Vec<Elem> = all.iter().filter(|x| n2.contains(x)).cloned().collect();
    let base = DeformClassSpec::plain(Variant::D, v).normal_form(r, &random_elem(rng, &xs), &random_elem(rng, &m), None)?;
    let one = r.one();
    let a = Mat2::new(
        r.add(&one, &random_elem(rng, &m)),
        random_elem(rng, &m),
        random_elem(rng, &m),
        r.add(&one, &random_elem(rng, &m)),
    );
    base.conjugate(&a)
}

const TWIST_SETUPS: [(&str, u32, u32, u64); 4] = [
    ("witt(5,1,3); vars; rel", 2, 0, 11),
    ("witt(3,1,2); vars U; rel U^2", 1, 1, 7),
    ("witt(3,2,2); vars; rel", 1, 0, 13),
    ("witt(5,1,3); vars U; rel U^2, p*U", 2, 0, 11),
];

fn twist_setup(i: usize) -> Result<(Arc<CoefficientRing>, SubmoduleIdeal, u64)> {
    let (desc, a, b, v) = TWIST_SETUPS[i % TWIST_SETUPS.len()];
    let r = ring(desc)?;
    let vars = if r.vars().is_empty() { vec![] } else { vec![b] };
    let j = SubmoduleIdeal::generated_by(r.clone(), &[Monomial::new(a, vars)])?;
    Ok((r, j, v))
}

/// Injects random `Ad`-twists along a nearly small ideal and recovers them.
pub fn check_cocycle_recovery(cases: usize) -> Check {
    let r = (|| -> Result<(bool, String)> {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for i in 0..cases {
            let (r, j, v) = twist_setup(i)?;
            let mu = random_member(&mut rng, &r, v)?;
            let module = Arc::new(GModule::trivial_adjoint(&r.residue_field(), v, false)?);
            let mut injected = Vec::new();
            for mono in j.monomial_basis() {
                let c = Cocycle::from_matrices(module.clone(), &random_fq(&mut rng, &r, false), &random_fq(&mut rng, &r, false))?;
                if c != Cocycle::zero(module.clone()) {
                    injected.push(TwistDatum { cocycle: c, scalar: r.monomial(&mono) });
                }
            }
            let sigma = exp_twist_sum(&mu, &injected)?;
            let recovered = cocycle_difference(&sigma, &mu, &j)?;
            if recovered != injected || exp_twist_sum(&mu, &recovered)? != sigma {
                return Ok((false, format!("case {} over {}: recovered twist differs", i, crate::coeffring::print(&r))));
            }
        }
        Ok((true, format!("{} randomized cases recovered exactly", cases)))
    })();
    Check::from_result("cocycle difference recovers injected twists", 6, r)
}

/// Trace-zero twists keep `det`, so weights stay congruent across a family.
pub fn check_determinants(cases: usize) -> Check {
    let r = (|| -> Result<(bool, String)> {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..cases {
            let (r, j, v) = twist_setup(i)?;
            let mu = random_member(&mut rng, &r, v)?;
            let module = Arc::new(GModule::trivial_adjoint(&r.residue_field(), v, true)?);
            let mut terms = Vec::new();
            for mono in j.monomial_basis() {
                let c = Cocycle::from_matrices(module.clone(), &random_fq(&mut rng, &r, true), &random_fq(&mut rng, &r, true))?;
                terms.push(TwistDatum { cocycle: c, scalar: r.monomial(&mono) });
            }
            let tw = exp_twist_sum(&mu, &terms)?;
            for (a, b) in [(mu.sigma(), tw.sigma()), (mu.tau(), tw.tau())] {
                let (da, db) = (a.det(&r), b.det(&r));
                if da != db || !weights_congruent(&r, &weight_point(&r, &da)?, &weight_point(&r, &db)?)? {
                    return Ok((false, format!("case {}: determinant changed", i)));
                }
            }
        }
        Ok((true, format!("{} trace-zero twists keep determinants", cases)))
    })();
    Check::from_result("trace-zero twists preserve determinant and weight", 6, r)
}

/// Rings with at most `3^10` elements on which search is affordable, with a
/// trivial prime for each.
pub const ORACLE_RINGS: [(&str, u64); 7] = [
    ("witt(3,1,3); vars; rel", 13),
    ("witt(3,1,4); vars; rel", 13),
    ("witt(3,1,5); vars; rel", 7),
    ("witt(3,1,2); vars U; rel U^2", 13),
    ("witt(3,1,2); vars U; rel U^2, p*U", 7),
    ("witt(3,2,2); vars; rel", 13),
    ("witt(5,1,3); vars; rel", 11),
];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OracleTally {
    pub cases: usize,
    pub members: usize,
    pub disagreements: Vec<String>,
}

/// Random representations tested against random classes by both methods.
pub fn oracle_equivalence(cases: usize, cfg: &SearchConfig) -> Result<OracleTally> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut tally = OracleTally::default();
    let variants = [Variant::D, Variant::Ram, Variant::Nr, Variant::Tilde];
    for i in 0..cases {
        let (desc, v) = ORACLE_RINGS[i % ORACLE_RINGS.len()];
        let r = ring(desc)?;
        let p = r.p() as i64;
        let all: Vec<Elem> = r.elements().collect();
        let m: Vec<Elem> = all.iter().filter(|x| r.in_maximal_ideal(x)).cloned().collect();
        let n2 = filtration_nk(&r, 2)?;
        let n2s: Vec<Elem> = m.iter().filter(|x| n2.contains(x)).cloned().collect();
        let kappa = 1 + p * rng.gen_range(0..3);

        let variant = *variants.choose(&mut rng).unwrap();
        let conj = match variant {
            Variant::Nr if rng.gen_bool(0.5) => Conjugator::LowerUnipotent,
            Variant::Ram if rng.gen_bool(0.5) => Conjugator::Swap,
            _ => Conjugator::Identity,
        };
        let spec = DeformClassSpec::new(variant, v, kappa, conj)?;

        let gen_variant = if rng.gen_bool(0.6) { variant } else { *variants.choose(&mut rng).unwrap() };
        let gen = DeformClassSpec::new(gen_variant, v, kappa, Conjugator::Identity)?;
        let x = if rng.gen_bool(0.7) { random_elem(&mut rng, &n2s) } else { random_elem(&mut rng, &m) };
        let y = random_elem(&mut rng, &m);
        let z = r.add(&r.one(), &random_elem(&mut rng, &m));
        let mut rep = gen.normal_form(&r, &x, &y, (gen_variant == Variant::Tilde).then_some(&z))?;
        if rng.gen_bool(0.5) {
            rep = rep.conjugate(&conj.matrix(&r))?;
        }
        let one = r.one();
        let a = Mat2::new(
            r.add(&one, &random_elem(&mut rng, &m)),
            random_elem(&mut rng, &m),
            random_elem(&mut rng, &m),
            r.add(&one, &random_elem(&mut rng, &m)),
        );
        let rep = rep.conjugate(&a)?;
        let nf = in_deform_class(&rep, &spec, Mode::NormalForm, cfg)?;
        let se = in_deform_class(&rep, &spec, Mode::Search, cfg)?;
        tally.cases += 1;
        tally.members += nf.holds as usize;
        if nf.holds != se.holds {
            tally.disagreements.push(format!(
                "case {} over {}: class {} (kappa {}), normal form {}, search {}",
                i, desc, variant, kappa, nf.holds, se.holds
            ));
        }
    }
    Ok(tally)
}

pub fn check_oracle_equivalence(cases: usize, cfg: &SearchConfig) -> Check {
    let r = oracle_equivalence(cases, cfg).map(|t| {
        let ok = t.disagreements.is_empty() && t.members > 0 && t.members < t.cases;
        (
            ok,
            format!(
                "{} cases, {} members, {} disagreements{}",
                t.cases,
                t.members,
                t.disagreements.len(),
                t.disagreements.first().map(|d| format!(": {}", d)).unwrap_or_default()
            ),
        )
    });
    Check::from_result("normal form agrees with exhaustive search", 7, r)
}

pub fn scope_boundary() -> Check {
    Check::new("scope boundary", 8, true, SCOPE_BOUNDARY)
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub scenario_dir: Option<std::path::PathBuf>,
    pub shards: usize,
    /// Criteria to run; empty means all.
    pub criteria: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn verify_all(opts: &VerifyOptions) -> VerifyReport {
    let cfg = SearchConfig { shards: opts.shards.max(1), ..SearchConfig::default() };
    let on = |c: u8| opts.criteria.is_empty() || opts.criteria.contains(&c);
    let mut checks = Vec::new();
    if on(1) {
        checks.push(check_trivial_prime_table(5, 11));
        checks.push(check_trivial_prime_table(3, 13));
    }
    if on(2) {
        checks.extend(check_ledger(opts.scenario_dir.as_deref()));
    }
    if on(3) {
        checks.extend(check_stabilization(&cfg));
    }
    if on(4) {
        checks.push(check_conjugation_identities());
    }
    if on(5) {
        checks.push(check_fiber(&cfg));
    }
    if on(6) {
        checks.push(check_hull_step());
        checks.push(check_cocycle_recovery(50));
        checks.push(check_determinants(50));
    }
    if on(7) {
        checks.push(check_oracle_equivalence(200, &cfg));
    }
    if on(8) {
        checks.push(scope_boundary());
    }
    VerifyReport { checks }
}
