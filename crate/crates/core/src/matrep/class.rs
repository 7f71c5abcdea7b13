use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffring::{
    filtration_nk, in_category_c, maximal_ideal_power, CoefficientRing, Elem, Monomial,
    SubmoduleIdeal,
};
use crate::error::{Error, Result};

use super::layered::solve_contracting;
use super::mat2::Mat2;
use super::tame::{check_trivial_prime, TameRep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    D,
    Ram,
    Nr,
    Tilde,
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "d" | "D" => Ok(Variant::D),
            "ram" => Ok(Variant::Ram),
            "nr" => Ok(Variant::Nr),
            "tilde" => Ok(Variant::Tilde),
            _ => Err(Error::Parse(format!("unknown variant {:?}", s))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::D => "d",
            Variant::Ram => "ram",
            Variant::Nr => "nr",
            Variant::Tilde => "tilde",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conjugator {
    Identity,
    /// `[[1,0],[1,1]]`
    LowerUnipotent,
    /// `[[0,1],[1,0]]`
    Swap,
}

impl Conjugator {
    pub fn matrix(&self, r: &CoefficientRing) -> Mat2 {
        match self {
            Conjugator::Identity => Mat2::identity(r),
            Conjugator::LowerUnipotent => Mat2::lower_unipotent(r),
            Conjugator::Swap => Mat2::swap(r),
        }
    }
}

/// One of the local deformation classes at a trivial prime, optionally
/// transported by a fixed change of basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformClassSpec {
    pub variant: Variant,
    pub v: u64,
    /// `kappa(sigma_v)` as an integer, `≡ 1 mod p`.
    pub kappa_sigma: i64,
    pub conjugator: Conjugator,
}

impl DeformClassSpec {
    pub fn new(variant: Variant, v: u64, kappa_sigma: i64, conjugator: Conjugator) -> Result<Self> {
        match (variant, conjugator) {
            (Variant::Nr, Conjugator::Swap) | (Variant::Ram, Conjugator::LowerUnipotent) => {
                return Err(Error::Precondition(format!(
                    "conjugator {:?} does not belong to the {} class",
                    conjugator, variant
                )))
            }
            _ => {}
        }
        Ok(DeformClassSpec { variant, v, kappa_sigma, conjugator })
    }

    /// The untransported class `D_v`, `D_v^ram`, `D_v^nr` or its twist.
    pub fn plain(variant: Variant, v: u64) -> Self {
        DeformClassSpec { variant, v, kappa_sigma: 1, conjugator: Conjugator::Identity }
    }

    /// `C_v`: the nr class conjugated by `[[1,0],[1,1]]`, the ram class by
    /// `[[0,1],[1,0]]`.
    pub fn transported(variant: Variant, v: u64) -> Result<Self> {
        let c = match variant {
            Variant::Nr => Conjugator::LowerUnipotent,
            Variant::Ram => Conjugator::Swap,
            _ => {
                return Err(Error::Precondition(
                    "only the ram and nr classes have a fixed basis change".into(),
                ))
            }
        };
        DeformClassSpec::new(variant, v, 1, c)
    }

    fn validate(&self, r: &CoefficientRing) -> Result<()> {
        check_trivial_prime(self.v, r.p())?;
        if self.kappa_sigma.rem_euclid(r.p() as i64) != 1 {
            return Err(Error::Precondition("kappa(sigma_v) must be 1 mod p".into()));
        }
        if !(in_category_c(r) || r.vars().is_empty()) {
            return Err(Error::NotInCategory);
        }
        Ok(())
    }

    /// `u = sqrt(kappa(sigma_v) v^-1)` with canonical residue, as an element of `R`.
    pub fn u(&self, r: &CoefficientRing) -> Result<Elem> {
        let b = r.base();
        let w = b.mul(&b.from_int(self.kappa_sigma), &b.inv(&b.from_int(self.v as i64))?);
        Ok(r.from_witt(&b.sqrt(&w)?))
    }

    /// `u [[v, x],[0, 1]]` and `[[1, y],[0, 1]]`, or `z [[v, x],[0, 1]]` for
    /// the twisted class.
    pub fn normal_form(&self, r: &Arc<CoefficientRing>, x: &Elem, y: &Elem, z: Option<&Elem>) -> Result<TameRep> {
        check_trivial_prime(self.v, r.p())?;
        let scale = match (self.variant, z) {
            (Variant::Tilde, Some(z)) => z.clone(),
            _ => self.u(r)?,
        };
        let sigma = Mat2::new(r.from_int(self.v as i64), x.clone(), r.zero(), r.one()).scale(r, &scale);
        let tau = Mat2::new(r.one(), y.clone(), r.zero(), r.one());
        TameRep::new(r.clone(), self.v, sigma, tau)
    }

    /// Normal form transported by the basis conjugator: `C N C^-1`.
    pub fn transported_normal_form(
        &self,
        r: &Arc<CoefficientRing>,
        x: &Elem,
        y: &Elem,
        z: Option<&Elem>,
    ) -> Result<TameRep> {
        self.normal_form(r, x, y, z)?.conjugate(&self.conjugator.matrix(r))
    }

    /// Whether `y` is an admissible upper-right entry of the tau image.
    pub fn y_admissible(&self, r: &Arc<CoefficientRing>, y: &Elem) -> bool {
        y_in_class(r, self.variant, y)
    }

    /// Whether `x` is an admissible upper-right entry of the normalised sigma.
    pub fn x_admissible(&self, r: &Arc<CoefficientRing>, x: &Elem) -> bool {
        filtration_nk(r, 2).expect("k = 2").contains(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Search,
    NormalForm,
    Both,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "search" => Ok(Mode::Search),
            "normal-form" | "normal_form" => Ok(Mode::NormalForm),
            "both" => Ok(Mode::Both),
            _ => Err(Error::Parse(format!("unknown mode {:?}", s))),
        }
    }
}

/// Limits for exhaustive conjugator search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximal number of conjugators `[[1,b],[c,d]]` to enumerate.
    pub bound: u128,
    /// Number of shards the conjugator space is split into.
    pub shards: usize,
}

pub const DEFAULT_SEARCH_BOUND: u128 = 2_000_000;

impl Default for SearchConfig {
    fn default() -> Self {
        let bound = std::env::var("TAMEDEF_SEARCH_BOUND")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(DEFAULT_SEARCH_BOUND);
        SearchConfig { bound, shards: 1 }
    }
}

/// Outcome of a membership or equivalence test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    /// Conjugator `A ≡ Id mod m_R` realising the statement.
    pub witness: Option<Mat2>,
    /// For membership: the `(x, y)` of the normal form reached.
    pub normal_form: Option<(Elem, Elem)>,
}

impl Verdict {
    fn no() -> Self {
        Verdict { holds: false, witness: None, normal_form: None }
    }
}

fn m_elements(r: &Arc<CoefficientRing>) -> Vec<Elem> {
    maximal_ideal_power(r, 1).elements().collect()
}

/// Enumerates `[[1,b],[c,1+d]]` with `b, c, d ∈ m` and returns the first
/// (in a fixed order) satisfying `accept`. Shards are scanned in parallel and
/// merged by index, so the answer does not depend on the shard count.
fn search_conjugators<F>(r: &Arc<CoefficientRing>, cfg: &SearchConfig, accept: F) -> Result<Option<Mat2>>
where
    F: Fn(&Mat2, &Mat2) -> bool + Sync,
{
    let m = m_elements(r);
    let size = (m.len() as u128).pow(3);
    if size > cfg.bound {
        return Err(Error::SearchBound { size, bound: cfg.bound });
    }
    let n = m.len();
    let shards = cfg.shards.max(1);
    let one = r.one();
    let found: Vec<Option<(usize, Mat2)>> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let lo = n * s / shards;
            let hi = n * (s + 1) / shards;
            (lo..hi).into_par_iter().find_map_first(|ci| {
                for (bi, b) in m.iter().enumerate() {
                    for (di, d) in m.iter().enumerate() {
                        let a = Mat2::new(one.clone(), b.clone(), m[ci].clone(), r.add(&one, d));
                        let ai = a.inv(r).expect("residually identity");
                        if accept(&a, &ai) {
                            return Some(((ci * n + bi) * n + di, a));
                        }
                    }
                }
                None
            })
        })
        .collect();
    Ok(found.into_iter().flatten().min_by_key(|(i, _)| *i).map(|(_, a)| a))
}

/// Strict equivalence of two representations over the same ring.
pub fn strictly_equivalent(rep1: &TameRep, rep2: &TameRep, mode: Mode, cfg: &SearchConfig) -> Result<Verdict> {
    if rep1.ring() != rep2.ring() || rep1.v() != rep2.v() {
        return Err(Error::Mismatch("representations over different rings or primes".into()));
    }
    let r = rep1.ring();
    let by_search = || -> Result<Verdict> {
        let w = search_conjugators(r, cfg, |a, ai| {
            rep1.sigma().conj(r, a, ai) == *rep2.sigma() && rep1.tau().conj(r, a, ai) == *rep2.tau()
        })?;
        Ok(Verdict { holds: w.is_some(), witness: w, normal_form: None })
    };
    let by_layers = || -> Result<Verdict> {
        // A rho1 - rho2 A is contracting in A = Id + (0, b; c, d)
        let sol = solve_contracting(r, 3, |w| {
            let a = Mat2::new(r.one(), w[0].clone(), w[1].clone(), r.add(&r.one(), &w[2]));
            let mut out = Vec::with_capacity(8);
            for (x, y) in [(rep1.sigma(), rep2.sigma()), (rep1.tau(), rep2.tau())] {
                let d = a.mul(r, x).sub(r, &y.mul(r, &a));
                out.extend(d.0);
            }
            out
        });
        Ok(match sol {
            Some(w) => {
                let a = Mat2::new(r.one(), w[0].clone(), w[1].clone(), r.add(&r.one(), &w[2]));
                debug_assert_eq!(rep1.conjugate(&a).as_ref().ok(), Some(rep2));
                Verdict { holds: true, witness: Some(a), normal_form: None }
            }
            None => Verdict::no(),
        })
    };
    run_modes(mode, by_search, by_layers)
}

fn run_modes(
    mode: Mode,
    search: impl FnOnce() -> Result<Verdict>,
    normal: impl FnOnce() -> Result<Verdict>,
) -> Result<Verdict> {
    match mode {
        Mode::Search => search(),
        Mode::NormalForm => normal(),
        Mode::Both => {
            let a = normal()?;
            let b = search()?;
            if a.holds != b.holds {
                return Err(Error::Mismatch(format!(
                    "normal form says {}, search says {}",
                    a.holds, b.holds
                )));
            }
            Ok(a)
        }
    }
}

/// Class membership up to strict equivalence.
pub fn in_deform_class(rep: &TameRep, spec: &DeformClassSpec, mode: Mode, cfg: &SearchConfig) -> Result<Verdict> {
    let r = rep.ring();
    if spec.v != rep.v() {
        return Err(Error::Mismatch("class and representation use different primes".into()));
    }
    spec.validate(r)?;
    let c = spec.conjugator.matrix(r);
    let ci = c.inv(r)?;
    // rho' = C^-1 rho C; rho is in C D C^-1 iff rho' is in D
    let s = rep.sigma().conj(r, &ci, &c);
    let t = rep.tau().conj(r, &ci, &c);
    let u = spec.u(r)?;
    let v = r.from_int(spec.v as i64);
    let n2 = filtration_nk(r, 2)?;

    let is_normal = |s2: &Mat2, t2: &Mat2| -> bool {
        let z = r.zero();
        let one = r.one();
        if s2.0[2] != z || t2.0[2] != z || t2.0[0] != one || t2.0[3] != one {
            return false;
        }
        let diag_ok = match spec.variant {
            Variant::Tilde => s2.0[0] == r.mul(&v, &s2.0[3]),
            _ => s2.0[3] == u && s2.0[0] == r.mul(&u, &v),
        };
        diag_ok && n2.contains(&s2.0[1]) && spec.y_admissible(r, &t2.0[1])
    };

    let search = || -> Result<Verdict> {
        let w = search_conjugators(r, cfg, |a, ai| is_normal(&s.conj(r, a, ai), &t.conj(r, a, ai)))?;
        Ok(match w {
            Some(a) => {
                let s2 = s.conj(r, &a, &a.inv(r).unwrap());
                let t2 = t.conj(r, &a, &a.inv(r).unwrap());
                let scale = if spec.variant == Variant::Tilde { s2.0[3].clone() } else { u.clone() };
                let x = r.mul(&s2.0[1], &r.inv(&scale).unwrap());
                Verdict {
                    holds: true,
                    witness: Some(c.mul(r, &a).mul(r, &ci)),
                    normal_form: Some((x, t2.0[1].clone())),
                }
            }
            None => Verdict::no(),
        })
    };
    let normal = || -> Result<Verdict> { membership_by_normal_form(r, spec, &s, &t, &u, &v, &n2, &c, &ci, &is_normal) };
    run_modes(mode, search, normal)
}

#[allow(clippy::too_many_arguments)]
fn membership_by_normal_form(
    r: &Arc<CoefficientRing>,
    spec: &DeformClassSpec,
    s: &Mat2,
    t: &Mat2,
    u: &Elem,
    v: &Elem,
    n2: &SubmoduleIdeal,
    c: &Mat2,
    ci: &Mat2,
    is_normal: &dyn Fn(&Mat2, &Mat2) -> bool,
) -> Result<Verdict> {
    // Every A ≡ Id factors as P L_w with P upper triangular and
    // L_w = [[1,0],[w,1]]. Conjugation by P fixes the (1,2) entries up to a
    // unit and moves x by multiples of b(v-1); conjugation by L_w fixes the
    // (1,2) entries exactly. So the class conditions on x and y are read off
    // directly and the rest is a contracting system in w.
    if !n2.contains(s.get(0, 1)) || !spec.y_admissible(r, t.get(0, 1)) {
        return Ok(Verdict::no());
    }
    let one = r.one();
    let lower_left = |m: &Mat2, w: &Elem| {
        let d = r.sub(m.get(0, 0), m.get(1, 1));
        r.sub(
            &r.add(m.get(1, 0), &r.mul(w, &d)),
            &r.mul(&r.mul(w, w), m.get(0, 1)),
        )
    };
    let sol = solve_contracting(r, 1, |w| {
        let w = &w[0];
        let s11 = r.sub(s.get(0, 0), &r.mul(w, s.get(0, 1)));
        let s22 = r.add(s.get(1, 1), &r.mul(w, s.get(0, 1)));
        let t11 = r.sub(t.get(0, 0), &r.mul(w, t.get(0, 1)));
        let t22 = r.add(t.get(1, 1), &r.mul(w, t.get(0, 1)));
        let mut out = vec![
            lower_left(s, w),
            lower_left(t, w),
            r.sub(&t11, &one),
            r.sub(&t22, &one),
        ];
        match spec.variant {
            Variant::Tilde => out.push(r.sub(&s11, &r.mul(v, &s22))),
            _ => {
                out.push(r.sub(&s22, u));
                out.push(r.sub(&s11, &r.mul(u, v)));
            }
        }
        out
    });
    let Some(w) = sol else {
        return Ok(Verdict::no());
    };
    let l = Mat2::new(one.clone(), r.zero(), w[0].clone(), one.clone());
    let li = l.inv(r)?;
    let s1 = s.conj(r, &l, &li);
    // clear x with P = [[1,b],[0,1]]: new x-entry is s12 - b (s11 - s22)
    let mu = r.div_p(s1.get(0, 1)).expect("x-entry lies in n_2");
    let nu = r.from_int(((spec.v - 1) / r.p()) as i64);
    let z = s1.get(1, 1).clone();
    let b = r.mul(&mu, &r.inv(&r.mul(&z, &nu))?);
    let pm = Mat2::new(one.clone(), b, r.zero(), one.clone());
    let a = pm.mul(r, &l);
    let ai = a.inv(r)?;
    let s2 = s.conj(r, &a, &ai);
    let t2 = t.conj(r, &a, &ai);
    if !is_normal(&s2, &t2) {
        return Err(Error::Precondition(
            "normal-form witness failed verification".into(),
        ));
    }
    let scale = if spec.variant == Variant::Tilde { s2.0[3].clone() } else { u.clone() };
    let x = r.mul(&s2.0[1], &r.inv(&scale)?);
    Ok(Verdict {
        holds: true,
        witness: Some(c.mul(r, &a).mul(r, ci)),
        normal_form: Some((x, t2.0[1].clone())),
    })
}

/// Monomials of `pR \ n_2` and `n_2` used to build sample `y` values.
pub fn sample_y_values(r: &Arc<CoefficientRing>, variant: Variant) -> Vec<Elem> {
    let s = r.vars().len();
    let mut out = vec![];
    let p = Monomial::new(1, vec![0; s]);
    let p2 = Monomial::new(2, vec![0; s]);
    match variant {
        Variant::Ram => {
            out.push(r.monomial(&p));
            out.push(r.add(&r.monomial(&p), &r.monomial(&p2)));
            out.push(r.scale_int(&r.monomial(&p), 2));
        }
        _ => {
            out.push(r.zero());
            out.push(r.monomial(&p2));
            for i in 0..s {
                let mut a = vec![0; s];
                a[i] = 1;
                out.push(r.monomial(&Monomial::new(1, a)));
            }
        }
    }
    out.retain(|y| y_in_class(r, variant, y));
    out.dedup();
    out
}

/// `y ∈ m` for the plain and twisted classes, `y ∈ pR \ n_2` for ram,
/// `y ∈ n_2` for nr. On `O/p^N`, `n_2 = p^2 R`.
pub fn y_in_class(r: &Arc<CoefficientRing>, variant: Variant, y: &Elem) -> bool {
    let n2 = filtration_nk(r, 2).expect("k = 2");
    let pr = filtration_nk(r, 1).expect("k = 1");
    match variant {
        Variant::D | Variant::Tilde => r.in_maximal_ideal(y),
        Variant::Ram => pr.contains(y) && !n2.contains(y),
        Variant::Nr => n2.contains(y),
    }
}
