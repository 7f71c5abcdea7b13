use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::galois::{FiniteField, GaloisRing, GrElem};
use crate::error::{Error, Result};

/// A monomial `p^a U^alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub p: u32,
    pub vars: Vec<u32>,
}

impl Monomial {
    pub fn new(p: u32, vars: Vec<u32>) -> Self {
        Monomial { p, vars }
    }

    pub fn degree(&self) -> u32 {
        self.p + self.vars.iter().sum::<u32>()
    }

    /// `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.p <= other.p && self.vars.iter().zip(&other.vars).all(|(a, b)| a <= b)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        let push = |parts: &mut Vec<String>, name: &str, e: u32| match e {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{}^{}", name, e)),
        };
        push(&mut parts, "p", self.p);
        for (n, &e) in names.iter().zip(&self.vars) {
            push(&mut parts, n, e);
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Element of a [`CoefficientRing`]: one Witt coefficient per standard
/// variable monomial, flattened, each reduced modulo `p^e(alpha)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Elem(pub(crate) Vec<u64>);

impl Elem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

/// Finite-length local `O`-algebra `O[[U_1..U_s]]/I` with `I` a monomial
/// ideal in `p, U_1..U_s`.
///
/// As an `O`-module the ring is `⊕_alpha (O/p^e(alpha)) U^alpha` over the
/// variable monomials with `e(alpha) >= 1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoefficientRing {
    base: GaloisRing,
    vars: Vec<String>,
    relations: Vec<Monomial>,
    monomials: Vec<Vec<u32>>,
    exps: Vec<u32>,
    #[serde(skip)]
    index: HashMap<Vec<u32>, usize>,
    #[serde(skip)]
    mul_table: Vec<Option<usize>>,
}

impl PartialEq for CoefficientRing {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && self.vars == other.vars
            && self.monomials == other.monomials
            && self.exps == other.exps
    }
}

impl Eq for CoefficientRing {}

impl CoefficientRing {
    /// `relations` are monomials in `p` and the variables; the base truncation
    /// `p^N` is always added.
    pub fn new(base: GaloisRing, vars: Vec<String>, relations: Vec<Monomial>) -> Result<Self> {
        let s = vars.len();
        for (i, v) in vars.iter().enumerate() {
            let ok = !v.is_empty()
                && v != "p"
                && v != "t"
                && v.chars().next().unwrap().is_ascii_alphabetic()
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok || vars[..i].contains(v) {
                return Err(Error::BadVariable(v.clone()));
            }
        }
        for r in &relations {
            if r.vars.len() != s {
                return Err(Error::Mismatch("relation arity".into()));
            }
        }
        let mut rels = relations;
        rels.push(Monomial::new(base.level(), vec![0; s]));
        let rels = minimize(rels);

        let mut bounds = Vec::with_capacity(s);
        for (i, name) in vars.iter().enumerate() {
            let b = rels
                .iter()
                .filter(|r| r.p == 0 && r.vars.iter().enumerate().all(|(j, &e)| j == i || e == 0))
                .map(|r| r.vars[i])
                .min()
                .ok_or_else(|| Error::InfiniteLength(name.clone()))?;
            bounds.push(b);
        }

        let mut monomials = Vec::new();
        let mut exps = Vec::new();
        for alpha in box_iter(&bounds) {
            let e = exponent_bound(&rels, &alpha, base.level());
            if e >= 1 {
                monomials.push(alpha);
                exps.push(e);
            }
        }
        if monomials.is_empty() {
            return Err(Error::ZeroRing);
        }
        let mut ring = CoefficientRing {
            base,
            vars,
            relations: rels,
            monomials,
            exps,
            index: HashMap::new(),
            mul_table: Vec::new(),
        };
        ring.build_tables();
        Ok(ring)
    }

    /// `O/p^N` with no variables.
    pub fn witt(field: &FiniteField, level: u32) -> Result<Self> {
        CoefficientRing::new(GaloisRing::new(field, level)?, vec![], vec![])
    }

    fn build_tables(&mut self) {
        self.index = self
            .monomials
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        let n = self.monomials.len();
        let mut table = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                let sum: Vec<u32> = self.monomials[i]
                    .iter()
                    .zip(&self.monomials[j])
                    .map(|(a, b)| a + b)
                    .collect();
                table[i * n + j] = self.index.get(&sum).copied();
            }
        }
        self.mul_table = table;
    }

    /// Restores lookup tables after deserialisation.
    pub fn rebuild(mut self) -> Self {
        self.build_tables();
        self
    }

    pub fn base(&self) -> &GaloisRing {
        &self.base
    }

    pub fn residue_field(&self) -> FiniteField {
        self.base.residue_field()
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Minimal monomial generators of the defining ideal, `p^N` included.
    pub fn relations(&self) -> &[Monomial] {
        &self.relations
    }

    /// Standard variable monomials `alpha` with `U^alpha != 0`.
    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }

    /// `e(alpha)`: the component at `U^alpha` is `O/p^e(alpha)`.
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn monomial_index(&self, alpha: &[u32]) -> Option<usize> {
        self.index.get(alpha).copied()
    }

    fn f(&self) -> usize {
        self.base.degree()
    }

    fn block_modulus(&self, i: usize) -> u64 {
        self.p().pow(self.exps[i])
    }

    /// Length of `R` as an `O`-module, i.e. `dim_Fq` of the associated graded.
    pub fn length(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// `|R|` as a big integer.
    pub fn order(&self) -> u128 {
        (self.base.p() as u128).pow(self.length() * self.f() as u32)
    }

    /// Standard monomial basis `p^a U^alpha` with `a < e(alpha)`.
    pub fn basis(&self) -> Vec<Monomial> {
        let mut out = Vec::new();
        for (alpha, &e) in self.monomials.iter().zip(&self.exps) {
            for a in 0..e {
                out.push(Monomial::new(a, alpha.clone()));
            }
        }
        out.sort_by_key(|m| (m.degree(), m.clone()));
        out
    }

    fn block<'a>(&self, x: &'a Elem, i: usize) -> &'a [u64] {
        let f = self.f();
        &x.0[i * f..(i + 1) * f]
    }

    fn reduce_in_place(&self, data: &mut [u64]) {
        let f = self.f();
        for i in 0..self.monomials.len() {
            let m = self.block_modulus(i);
            for c in &mut data[i * f..(i + 1) * f] {
                *c %= m;
            }
        }
    }

    pub fn zero(&self) -> Elem {
        Elem(vec![0; self.monomials.len() * self.f()])
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Elem {
        self.from_witt(&self.base.from_int(n))
    }

    /// Image of a Witt vector under the structure map `O -> R`.
    pub fn from_witt(&self, w: &[u64]) -> Elem {
        let mut e = self.zero();
        let f = self.f();
        e.0[..f].copy_from_slice(&w[..f]);
        self.reduce_in_place(&mut e.0);
        e
    }

    /// Lift of a residue-field element via digits in `0..p`.
    pub fn from_residue(&self, x: &[u64]) -> Elem {
        self.from_witt(x)
    }

    /// `c * p^a * U^alpha` for a Witt coefficient `c`.
    pub fn term(&self, c: &[u64], m: &Monomial) -> Elem {
        let mut e = self.zero();
        if let Some(i) = self.monomial_index(&m.vars) {
            let scaled = self.base.mul(c, &self.base.pow(&self.base.from_int(self.p() as i64), m.p as u64));
            let f = self.f();
            e.0[i * f..(i + 1) * f].copy_from_slice(&scaled);
            self.reduce_in_place(&mut e.0);
        }
        e
    }

    pub fn monomial(&self, m: &Monomial) -> Elem {
        self.term(&self.base.one(), m)
    }

    pub fn var(&self, i: usize) -> Elem {
        let mut alpha = vec![0; self.vars.len()];
        alpha[i] = 1;
        self.monomial(&Monomial::new(0, alpha))
    }

    pub fn p_elem(&self) -> Elem {
        self.from_int(self.p() as i64)
    }

    /// Builds an element from raw coefficients (reduced on the way in).
    pub fn elem_from_coeffs(&self, coeffs: Vec<u64>) -> Result<Elem> {
        if coeffs.len() != self.monomials.len() * self.f() {
            return Err(Error::Mismatch("coefficient vector length".into()));
        }
        let mut e = Elem(coeffs);
        self.reduce_in_place(&mut e.0);
        Ok(e)
    }

    /// Witt coefficient of `U^alpha`.
    pub fn coefficient(&self, x: &Elem, alpha: &[u32]) -> GrElem {
        match self.monomial_index(alpha) {
            Some(i) => self.block(x, i).to_vec(),
            None => self.base.zero(),
        }
    }

    pub fn is_zero(&self, x: &Elem) -> bool {
        x.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        let mut out = a.0.clone();
        let f = self.f();
        for i in 0..self.monomials.len() {
            let m = self.block_modulus(i);
            for k in i * f..(i + 1) * f {
                out[k] = (out[k] + b.0[k]) % m;
            }
        }
        Elem(out)
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        let mut out = a.0.clone();
        let f = self.f();
        for i in 0..self.monomials.len() {
            let m = self.block_modulus(i);
            for c in &mut out[i * f..(i + 1) * f] {
                *c = (m - *c) % m;
            }
        }
        Elem(out)
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let n = self.monomials.len();
        let f = self.f();
        let mut out = vec![0u64; n * f];
        for i in 0..n {
            let x = self.block(a, i);
            if x.iter().all(|&c| c == 0) {
                continue;
            }
            for j in 0..n {
                let Some(k) = self.mul_table[i * n + j] else {
                    continue;
                };
                let y = self.block(b, j);
                if y.iter().all(|&c| c == 0) {
                    continue;
                }
                let prod = self.base.mul(x, y);
                let m = self.base.characteristic();
                for (t, c) in prod.into_iter().enumerate() {
                    out[k * f + t] = (out[k * f + t] + c) % m;
                }
            }
        }
        self.reduce_in_place(&mut out);
        Elem(out)
    }

    pub fn scale_int(&self, a: &Elem, n: i64) -> Elem {
        self.mul(a, &self.from_int(n))
    }

    pub fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Image in the residue field `R/m_R = F_q`.
    pub fn residue(&self, x: &Elem) -> GrElem {
        // alpha = 0 is always the first standard monomial
        self.base.residue(self.block(x, 0))
    }

    pub fn is_unit(&self, x: &Elem) -> bool {
        !self.base.is_zero(&self.residue(x))
    }

    pub fn in_maximal_ideal(&self, x: &Elem) -> bool {
        !self.is_unit(x)
    }

    pub fn inv(&self, x: &Elem) -> Result<Elem> {
        if !self.is_unit(x) {
            return Err(Error::NotUnit);
        }
        let field = self.residue_field();
        let r = field.inv(&self.residue(x))?;
        let mut y = self.from_residue(&r);
        let two = self.from_int(2);
        for _ in 0..128 {
            let xy = self.mul(x, &y);
            if xy == self.one() {
                return Ok(y);
            }
            y = self.mul(&y, &self.sub(&two, &xy));
        }
        unreachable!("Newton iteration converges in a finite local ring")
    }

    /// Coefficientwise division by p of an element of `pR`; `None` if the
    /// element is not divisible. Any preimage is returned.
    pub fn div_p(&self, x: &Elem) -> Option<Elem> {
        let p = self.p();
        if x.0.iter().any(|c| c % p != 0) {
            return None;
        }
        Some(Elem(x.0.iter().map(|c| c / p).collect()))
    }

    pub fn fmt_elem(&self, x: &Elem) -> String {
        let mut parts = Vec::new();
        for (i, alpha) in self.monomials.iter().enumerate() {
            let c = self.block(x, i);
            if c.iter().all(|&v| v == 0) {
                continue;
            }
            let coeff = if self.f() == 1 {
                c[0].to_string()
            } else {
                format!(
                    "[{}]",
                    c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
                )
            };
            let mono = Monomial::new(0, alpha.clone()).display_with(&self.vars);
            if mono == "1" {
                parts.push(coeff);
            } else if coeff == "1" {
                parts.push(mono);
            } else {
                parts.push(format!("{}*{}", coeff, mono));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// All elements whose block `i` has valuation at least `thresholds[i]`,
    /// enumerated in a fixed mixed-radix order.
    pub(crate) fn enumerate_with_thresholds(&self, lower: &[u32]) -> impl Iterator<Item = Elem> + '_ {
        self.enumerate_between(lower.to_vec(), self.exps.clone())
    }

    /// Coset representatives: block `i` runs over multiples of
    /// `p^lower[i]` below `p^upper[i]`.
    pub(crate) fn enumerate_between(&self, lower: Vec<u32>, upper: Vec<u32>) -> impl Iterator<Item = Elem> + '_ {
        let f = self.f();
        let p = self.p();
        let mut radices = Vec::new();
        let mut steps = Vec::new();
        for i in 0..self.monomials.len() {
            let lo = lower[i].min(self.exps[i]);
            let hi = upper[i].min(self.exps[i]).max(lo);
            for _ in 0..f {
                radices.push(p.pow(hi - lo));
                steps.push(p.pow(lo));
            }
        }
        let total: u128 = radices.iter().map(|&r| r as u128).product();
        (0..total).map(move |mut n| {
            let mut data = vec![0u64; radices.len()];
            for k in (0..radices.len()).rev() {
                let r = radices[k] as u128;
                data[k] = (n % r) as u64 * steps[k];
                n /= r;
            }
            Elem(data)
        })
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.enumerate_with_thresholds(&vec![0; self.monomials.len()])
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::presentation::print(self))
    }
}

fn minimize(mut rels: Vec<Monomial>) -> Vec<Monomial> {
    rels.sort_by_key(relation_key);
    rels.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for r in rels {
        if !out.iter().any(|g| g.divides(&r)) {
            out.push(r);
        }
    }
    out.sort_by_key(relation_key);
    out
}

/// Degree first, then earlier variables first.
fn relation_key(m: &Monomial) -> (u32, std::cmp::Reverse<Vec<u32>>, u32) {
    (m.degree(), std::cmp::Reverse(m.vars.clone()), m.p)
}

fn exponent_bound(rels: &[Monomial], alpha: &[u32], level: u32) -> u32 {
    rels.iter()
        .filter(|r| r.vars.iter().zip(alpha).all(|(b, a)| b <= a))
        .map(|r| r.p)
        .min()
        .unwrap_or(level)
        .min(level)
}

/// Exponent vectors in `prod [0, bounds_i)`, ordered by total degree then
/// lexicographically, so `alpha = 0` comes first.
fn box_iter(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..b).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out.sort_by_key(|a| (a.iter().sum::<u32>(), a.clone()));
    out
}
