//! Truncated unramified Witt vectors `W(F_q)/p^N` realised as the Galois ring
//! `(Z/p^N)[t]/(g)`, where `g` is a monic lift of an irreducible polynomial
//! over `F_p`. Level 1 gives the finite field itself.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients of `t^0 .. t^(f-1)`, each reduced modulo `p^level`.
pub type GrElem = Vec<u64>;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// p-adic valuation of a nonzero integer, `None` for zero.
pub(crate) fn valuation(mut n: u64, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Some(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaloisRing {
    p: u64,
    level: u32,
    /// Monic modulus, ascending coefficients in `0..p`, length `f + 1`.
    modulus: Vec<u64>,
    order: u64,
}

impl GaloisRing {
    /// Builds `W(F_q)/p^level` on top of a validated field.
    pub fn new(field: &FiniteField, level: u32) -> Result<Self> {
        if level == 0 {
            return Err(Error::ZeroLevel);
        }
        let p = field.p();
        let order = (p as u128).checked_pow(level).filter(|&o| o < (1u128 << 32));
        let order = order.ok_or(Error::TooLarge(p, level))? as u64;
        Ok(GaloisRing {
            p,
            level,
            modulus: field.ring().modulus.clone(),
            order,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// `p^level`, the characteristic.
    pub fn characteristic(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Residue field of this ring.
    pub fn residue_field(&self) -> FiniteField {
        FiniteField(GaloisRing {
            p: self.p,
            level: 1,
            modulus: self.modulus.clone(),
            order: self.p,
        })
    }

    /// Same unramified extension at another truncation level.
    pub fn with_level(&self, level: u32) -> Result<Self> {
        GaloisRing::new(&self.residue_field(), level)
    }

    pub fn zero(&self) -> GrElem {
        vec![0; self.degree()]
    }

    pub fn one(&self) -> GrElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> GrElem {
        let mut e = self.zero();
        e[0] = n.rem_euclid(self.order as i64) as u64;
        e
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> GrElem {
        let mut e = self.zero();
        for (i, c) in coeffs.iter().enumerate().take(self.degree()) {
            e[i] = c % self.order;
        }
        e
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> GrElem {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.order).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> GrElem {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + self.order - y) % self.order)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> GrElem {
        a.iter().map(|x| (self.order - x) % self.order).collect()
    }

    pub fn scale_int(&self, a: &[u64], n: i64) -> GrElem {
        let n = n.rem_euclid(self.order as i64) as u64;
        a.iter().map(|&x| mul_mod(x, n, self.order)).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> GrElem {
        let f = self.degree();
        let m = self.order;
        if f == 1 {
            return vec![mul_mod(a[0], b[0], m)];
        }
        let mut prod = vec![0u64; 2 * f - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(x, y, m)) % m;
            }
        }
        for d in (f..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..f {
                let sub = mul_mod(c, self.modulus[i], m);
                let k = d - f + i;
                prod[k] = (prod[k] + m - sub) % m;
            }
        }
        prod.truncate(f);
        prod
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> GrElem {
        let mut base = a.to_vec();
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

    /// Reduction modulo p, as an element of the residue field.
    pub fn residue(&self, a: &[u64]) -> GrElem {
        a.iter().map(|x| x % self.p).collect()
    }

    /// Minimum p-adic valuation of the coefficients; `level` for zero.
    pub fn valuation(&self, a: &[u64]) -> u32 {
        a.iter()
            .filter_map(|&c| valuation(c, self.p))
            .min()
            .unwrap_or(self.level)
    }

    pub fn is_unit(&self, a: &[u64]) -> bool {
        self.valuation(a) == 0
    }

    pub fn inv(&self, a: &[u64]) -> Result<GrElem> {
        if !self.is_unit(a) {
            return Err(Error::NotUnit);
        }
        let field = self.residue_field();
        let r = field.inv(&self.residue(a))?;
        // Newton iteration y <- y(2 - ay) doubles the precision each step.
        let mut y = self.from_coeffs(&r);
        let two = self.from_int(2);
        loop {
            let ay = self.mul(a, &y);
            if ay == self.one() {
                return Ok(y);
            }
            y = self.mul(&y, &self.sub(&two, &ay));
        }
    }

    /// Coefficientwise division by p of an element with positive valuation.
    /// The result is only determined modulo p^(level-1).
    pub fn div_p(&self, a: &[u64]) -> GrElem {
        debug_assert!(a.iter().all(|c| c % self.p == 0));
        a.iter().map(|c| c / self.p).collect()
    }

    /// Canonical square root of a unit: the root whose residue is
    /// lexicographically smallest (coefficient of `t^0` compared first), lifted
    /// by Newton iteration. The lift of a simple root is unique.
    pub fn sqrt(&self, u: &[u64]) -> Result<GrElem> {
        if !self.is_unit(u) {
            return Err(Error::NotUnit);
        }
        let field = self.residue_field();
        let target = self.residue(u);
        let root = field
            .elements()
            .find(|r| field.mul(r, r) == target)
            .ok_or_else(|| Error::NonResidue(format!("{:?}", u)))?;
        let mut r = self.from_coeffs(&root);
        let half = self.inv(&self.from_int(2))?;
        loop {
            let sq = self.mul(&r, &r);
            if sq == self.from_coeffs(u) {
                return Ok(r);
            }
            // r <- (r + u/r) / 2
            let q = self.mul(u, &self.inv(&r)?);
            r = self.mul(&self.add(&r, &q), &half);
        }
    }

    /// Enumerates every element, coefficient vectors in lexicographic order
    /// with `t^0` most significant.
    pub fn elements(&self) -> impl Iterator<Item = GrElem> + '_ {
        let f = self.degree();
        let total = (self.order as u128).pow(f as u32);
        (0..total).map(move |mut n| {
            let mut e = vec![0u64; f];
            for i in (0..f).rev() {
                e[i] = (n % self.order as u128) as u64;
                n /= self.order as u128;
            }
            e
        })
    }
}

/// The finite field `F_q`, `q = p^f`, with `p` odd.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteField(GaloisRing);

impl FiniteField {
    /// Validates `p` and the modulus. Without a modulus, `f = 1` uses `t`
    /// and `f > 1` uses the lexicographically smallest monic irreducible.
    pub fn new(p: u64, f: usize, modulus: Option<&[u64]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if f == 0 {
            return Err(Error::BadModulus {
                expected: 0,
                got: vec![],
            });
        }
        let modulus = match modulus {
            Some(m) => {
                let m: Vec<u64> = m.iter().map(|c| c % p).collect();
                if m.len() != f + 1 || m[f] != 1 {
                    return Err(Error::BadModulus {
                        expected: f,
                        got: m,
                    });
                }
                if !poly_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus(p));
                }
                m
            }
            None if f == 1 => vec![0, 1],
            None => smallest_irreducible(p, f),
        };
        Ok(FiniteField(GaloisRing {
            p,
            level: 1,
            modulus,
            order: p,
        }))
    }

    pub fn ring(&self) -> &GaloisRing {
        &self.0
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.degree()
    }

    pub fn size(&self) -> u64 {
        self.p().pow(self.degree() as u32)
    }

    pub fn zero(&self) -> GrElem {
        self.0.zero()
    }

    pub fn one(&self) -> GrElem {
        self.0.one()
    }

    pub fn from_int(&self, n: i64) -> GrElem {
        self.0.from_int(n)
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        self.0.is_zero(a)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> GrElem {
        self.0.add(a, b)
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> GrElem {
        self.0.sub(a, b)
    }

    pub fn neg(&self, a: &[u64]) -> GrElem {
        self.0.neg(a)
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> GrElem {
        self.0.mul(a, b)
    }

    pub fn inv(&self, a: &[u64]) -> Result<GrElem> {
        if self.is_zero(a) {
            return Err(Error::NotUnit);
        }
        Ok(self.0.pow(a, self.size() - 2))
    }

    pub fn elements(&self) -> impl Iterator<Item = GrElem> + '_ {
        self.0.elements()
    }
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    // b monic
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mul_mod(c, bc, p)) % p;
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

/// Trial division by every monic polynomial of degree at most `deg/2`.
fn poly_irreducible(m: &[u64], p: u64) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for n in 0..count {
            let mut div = vec![0u64; d + 1];
            let mut k = n;
            for c in div.iter_mut().take(d) {
                *c = k % p;
                k /= p;
            }
            div[d] = 1;
            if poly_rem(m, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u64, f: usize) -> Vec<u64> {
    let count = p.pow(f as u32);
    for n in 0..count {
        let mut m = vec![0u64; f + 1];
        // compare t^0 first: most significant digit is the constant term
        let mut k = n;
        for i in (0..f).rev() {
            m[i] = k % p;
            k /= p;
        }
        m[f] = 1;
        if poly_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_and_quadratic_extension() {
        let f5 = FiniteField::new(5, 1, None).unwrap();
        assert_eq!(f5.size(), 5);
        let f9 = FiniteField::new(3, 2, Some(&[1, 0, 1])).unwrap();
        let i = vec![0, 1];
        assert_eq!(f9.mul(&i, &i), f9.from_int(-1));
        assert_eq!(FiniteField::new(4, 1, None), Err(Error::NotPrime(4)));
        assert_eq!(FiniteField::new(2, 1, None), Err(Error::EvenCharacteristic));
        // t^2 + 1 = (t + 2)(t + 3) over F_5
        assert_eq!(
            FiniteField::new(5, 2, Some(&[1, 0, 1])),
            Err(Error::ReducibleModulus(5))
        );
    }

    #[test]
    fn field_axioms_f25() {
        let f = FiniteField::new(5, 2, None).unwrap();
        let all: Vec<_> = f.elements().collect();
        assert_eq!(all.len(), 25);
        for a in &all {
            if !f.is_zero(a) {
                assert_eq!(f.mul(a, &f.inv(a).unwrap()), f.one());
            }
            for b in all.iter().step_by(3) {
                assert_eq!(f.mul(a, b), f.mul(b, a));
            }
        }
    }

    #[test]
    fn galois_ring_inverse_and_reduction() {
        let f = FiniteField::new(3, 2, Some(&[1, 0, 1])).unwrap();
        let r = GaloisRing::new(&f, 3).unwrap();
        assert_eq!(r.characteristic(), 27);
        let a = r.from_coeffs(&[4, 7]);
        let ai = r.inv(&a).unwrap();
        assert_eq!(r.mul(&a, &ai), r.one());
        assert_eq!(r.residue(&r.mul(&a, &ai)), f.one());
        assert!(r.inv(&r.from_coeffs(&[3, 6])).is_err());
    }

    #[test]
    fn canonical_square_roots() {
        let f = FiniteField::new(5, 1, None).unwrap();
        let r = GaloisRing::new(&f, 3).unwrap();
        assert_eq!(r.sqrt(&r.one()).unwrap(), r.one());
        assert_eq!(r.sqrt(&r.from_int(4)).unwrap(), r.from_int(2));
        // brute force: roots of 6 mod 125 congruent to 1 mod 5
        let brute: Vec<u64> = (0..125u64).filter(|x| x * x % 125 == 6 && x % 5 == 1).collect();
        assert_eq!(brute, vec![16]);
        assert_eq!(r.sqrt(&r.from_int(6)).unwrap(), vec![16]);
        assert!(matches!(r.sqrt(&r.from_int(2)), Err(Error::NonResidue(_))));
        assert_eq!(r.sqrt(&r.from_int(5)), Err(Error::NotUnit));
    }
}
