use std::sync::Arc;

use super::ring::{CoefficientRing, Elem, Monomial};
use crate::error::{Error, Result};

/// A monomial sub-`O`-module of a [`CoefficientRing`].
///
/// Stored as one threshold `c(alpha)` per standard monomial: the submodule is
/// `⊕ p^c(alpha) (O/p^e(alpha)) U^alpha`. Every ideal the library works with
/// (`m_R^k`, `n_k`, monomial `J`) has this shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmoduleIdeal {
    ring: Arc<CoefficientRing>,
    thresholds: Vec<u32>,
}

impl SubmoduleIdeal {
    pub fn from_thresholds(ring: Arc<CoefficientRing>, thresholds: Vec<u32>) -> Result<Self> {
        if thresholds.len() != ring.monomials().len() {
            return Err(Error::Mismatch("threshold vector length".into()));
        }
        let thresholds = thresholds
            .iter()
            .zip(ring.exponents())
            .map(|(&c, &e)| c.min(e))
            .collect();
        let ideal = SubmoduleIdeal { ring, thresholds };
        ideal.check_ideal()?;
        Ok(ideal)
    }

    /// Ideal generated by monomials `p^a U^alpha`.
    pub fn generated_by(ring: Arc<CoefficientRing>, gens: &[Monomial]) -> Result<Self> {
        let thresholds = ring
            .monomials()
            .iter()
            .zip(ring.exponents())
            .map(|(alpha, &e)| {
                gens.iter()
                    .filter(|g| g.vars.iter().zip(alpha).all(|(b, a)| b <= a))
                    .map(|g| g.p)
                    .min()
                    .unwrap_or(e)
                    .min(e)
            })
            .collect();
        Ok(SubmoduleIdeal { ring, thresholds })
    }

    pub fn zero(ring: Arc<CoefficientRing>) -> Self {
        let thresholds = ring.exponents().to_vec();
        SubmoduleIdeal { ring, thresholds }
    }

    pub fn whole(ring: Arc<CoefficientRing>) -> Self {
        let thresholds = vec![0; ring.monomials().len()];
        SubmoduleIdeal { ring, thresholds }
    }

    fn check_ideal(&self) -> Result<()> {
        let r = &self.ring;
        for (i, alpha) in r.monomials().iter().enumerate() {
            let c = self.thresholds[i];
            if c >= r.exponents()[i] {
                continue;
            }
            for v in 0..alpha.len() {
                let mut beta = alpha.clone();
                beta[v] += 1;
                if let Some(j) = r.monomial_index(&beta) {
                    if self.thresholds[j] > c && r.exponents()[j] > c {
                        return Err(Error::NotAnIdeal(format!(
                            "{} * {} escapes",
                            r.vars()[v],
                            Monomial::new(c, alpha.clone()).display_with(r.vars())
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Arc<CoefficientRing> {
        &self.ring
    }

    pub fn thresholds(&self) -> &[u32] {
        &self.thresholds
    }

    pub fn is_zero(&self) -> bool {
        self.thresholds.as_slice() == self.ring.exponents()
    }

    pub fn contains(&self, x: &Elem) -> bool {
        let p = self.ring.p();
        let f = self.ring.base().degree();
        self.thresholds.iter().enumerate().all(|(i, &c)| {
            let m = p.pow(c);
            x.coeffs()[i * f..(i + 1) * f].iter().all(|v| v % m == 0)
        })
    }

    pub fn is_subset_of(&self, other: &SubmoduleIdeal) -> bool {
        self.thresholds.iter().zip(&other.thresholds).all(|(a, b)| a >= b)
    }

    pub fn intersect(&self, other: &SubmoduleIdeal) -> SubmoduleIdeal {
        let thresholds = self
            .thresholds
            .iter()
            .zip(&other.thresholds)
            .map(|(a, b)| *a.max(b))
            .collect();
        SubmoduleIdeal { ring: self.ring.clone(), thresholds }
    }

    pub fn sum(&self, other: &SubmoduleIdeal) -> SubmoduleIdeal {
        let thresholds = self
            .thresholds
            .iter()
            .zip(&other.thresholds)
            .map(|(a, b)| *a.min(b))
            .collect();
        SubmoduleIdeal { ring: self.ring.clone(), thresholds }
    }

    /// Product ideal `I * J`.
    pub fn product(&self, other: &SubmoduleIdeal) -> SubmoduleIdeal {
        let gens: Vec<Monomial> = self
            .generators()
            .iter()
            .flat_map(|a| {
                other.generators().into_iter().map(move |b| {
                    Monomial::new(
                        a.p + b.p,
                        a.vars.iter().zip(&b.vars).map(|(x, y)| x + y).collect(),
                    )
                })
            })
            .collect();
        SubmoduleIdeal::generated_by(self.ring.clone(), &gens).expect("product of ideals")
    }

    /// Monomials `p^c(alpha) U^alpha` for the nonzero components.
    pub fn generators(&self) -> Vec<Monomial> {
        self.ring
            .monomials()
            .iter()
            .zip(self.ring.exponents())
            .zip(&self.thresholds)
            .filter(|((_, e), c)| c < e)
            .map(|((alpha, _), &c)| Monomial::new(c, alpha.clone()))
            .collect()
    }

    /// Standard monomials `p^a U^alpha` spanning the ideal over `W(F_q)`.
    pub fn monomial_basis(&self) -> Vec<Monomial> {
        let mut out = Vec::new();
        for ((alpha, &e), &c) in self
            .ring
            .monomials()
            .iter()
            .zip(self.ring.exponents())
            .zip(&self.thresholds)
        {
            for a in c..e {
                out.push(Monomial::new(a, alpha.clone()));
            }
        }
        out.sort_by_key(|m| (m.degree(), m.clone()));
        out
    }

    /// `F_p`-basis of the ideal as ring elements: `t^j p^a U^alpha`.
    pub fn fp_basis(&self) -> Vec<Elem> {
        let f = self.ring.base().degree();
        let mut out = Vec::new();
        for m in self.monomial_basis() {
            for j in 0..f {
                let mut c = vec![0u64; f];
                c[j] = 1;
                out.push(self.ring.term(&c, &m));
            }
        }
        out
    }

    /// Dimension over `F_p`.
    pub fn dim_fp(&self) -> usize {
        self.monomial_basis().len() * self.ring.base().degree()
    }

    /// Length over `O`, i.e. `dim_Fq` of the associated graded.
    pub fn length(&self) -> usize {
        self.monomial_basis().len()
    }

    /// `m_R * J = 0`.
    pub fn is_nearly_small(&self) -> bool {
        let r = &self.ring;
        for (i, alpha) in r.monomials().iter().enumerate() {
            let c = self.thresholds[i];
            let e = r.exponents()[i];
            if c >= e {
                continue;
            }
            if c + 1 < e {
                return false;
            }
            for v in 0..alpha.len() {
                let mut beta = alpha.clone();
                beta[v] += 1;
                if let Some(j) = r.monomial_index(&beta) {
                    if r.exponents()[j] > c {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Coset representatives of `self / sub` in a fixed order.
    pub fn coset_reps<'a>(&'a self, sub: &'a SubmoduleIdeal) -> impl Iterator<Item = Elem> + 'a {
        self.ring
            .enumerate_between(self.thresholds.clone(), sub.thresholds.clone())
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.ring.enumerate_with_thresholds(&self.thresholds)
    }

    /// Number of elements, as a power of p.
    pub fn order_log_p(&self) -> u32 {
        self.dim_fp() as u32
    }

    /// `R/I` as a new coefficient ring with the same variables.
    pub fn quotient_ring(&self) -> Result<CoefficientRing> {
        let r = &self.ring;
        let mut rels: Vec<Monomial> = r
            .relations()
            .iter()
            .filter(|m| !m.vars.is_empty() || m.p < r.base().level())
            .cloned()
            .collect();
        rels.extend(self.generators());
        CoefficientRing::new(r.base().clone(), r.vars().to_vec(), rels)
    }
}

/// `m_R^k`; `k = 0` gives `R`.
pub fn maximal_ideal_power(ring: &Arc<CoefficientRing>, k: u32) -> SubmoduleIdeal {
    let thresholds = ring
        .monomials()
        .iter()
        .zip(ring.exponents())
        .map(|(alpha, &e)| k.saturating_sub(alpha.iter().sum()).min(e))
        .collect();
    SubmoduleIdeal { ring: ring.clone(), thresholds }
}

/// `n_k = pR ∩ m_R^k` for `k >= 1`.
pub fn filtration_nk(ring: &Arc<CoefficientRing>, k: u32) -> Result<SubmoduleIdeal> {
    if k < 1 {
        return Err(Error::FiltrationIndex);
    }
    let pr = SubmoduleIdeal::generated_by(ring.clone(), &[Monomial::new(1, vec![0; ring.vars().len()])])?;
    Ok(pr.intersect(&maximal_ideal_power(ring, k)))
}

/// Monomial representatives of an `F_q`-basis of `n_k / n_{k+1}`.
pub fn graded_piece(ring: &Arc<CoefficientRing>, k: u32) -> Result<Vec<Monomial>> {
    let hi = filtration_nk(ring, k)?;
    let lo = filtration_nk(ring, k + 1)?;
    let mut out = Vec::new();
    for ((alpha, &e), (&c0, &c1)) in ring
        .monomials()
        .iter()
        .zip(ring.exponents())
        .zip(hi.thresholds().iter().zip(lo.thresholds()))
    {
        for a in c0..c1.min(e) {
            out.push(Monomial::new(a, alpha.clone()));
        }
    }
    out.sort_by_key(|m| (std::cmp::Reverse(m.p), m.vars.clone()));
    Ok(out)
}

/// `p ∉ m_R^2`.
pub fn in_category_c(ring: &CoefficientRing) -> bool {
    ring.exponents()[0] >= 2
}

/// `m_R * J = 0`, checking first that `J` belongs to `R`.
pub fn is_nearly_small(ring: &Arc<CoefficientRing>, j: &SubmoduleIdeal) -> Result<bool> {
    if j.ring() != ring {
        return Err(Error::Mismatch("ideal belongs to another ring".into()));
    }
    j.check_ideal()?;
    Ok(j.is_nearly_small())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{FiniteField, GaloisRing};

    fn ring(level: u32, rels: &[(u32, u32)]) -> Arc<CoefficientRing> {
        let base = GaloisRing::new(&FiniteField::new(5, 1, None).unwrap(), level).unwrap();
        let rels = rels.iter().map(|&(a, b)| Monomial::new(a, vec![b])).collect();
        Arc::new(CoefficientRing::new(base, vec!["U".into()], rels).unwrap())
    }

    fn m(p: u32, u: u32) -> Monomial {
        Monomial::new(p, vec![u])
    }

    #[test]
    fn graded_pieces_of_one_variable_ring() {
        let r = ring(3, &[(0, 3)]);
        assert_eq!(graded_piece(&r, 1).unwrap(), vec![m(1, 0)]);
        assert_eq!(graded_piece(&r, 2).unwrap(), vec![m(2, 0), m(1, 1)]);
        let r4 = ring(4, &[(0, 4)]);
        assert_eq!(graded_piece(&r4, 2).unwrap(), vec![m(2, 0), m(1, 1)]);
    }

    #[test]
    fn n1_is_pr() {
        let r = ring(3, &[(0, 3)]);
        let n1 = filtration_nk(&r, 1).unwrap();
        assert_eq!(n1.generators(), vec![m(1, 0), m(1, 1), m(1, 2)]);
        assert!(filtration_nk(&r, 0).is_err());
    }

    #[test]
    fn nearly_small_examples() {
        let f5 = FiniteField::new(5, 1, None).unwrap();
        let o3 = Arc::new(CoefficientRing::witt(&f5, 3).unwrap());
        let z = vec![];
        let p2 = SubmoduleIdeal::generated_by(o3.clone(), &[Monomial::new(2, z.clone())]).unwrap();
        let p1 = SubmoduleIdeal::generated_by(o3.clone(), &[Monomial::new(1, z)]).unwrap();
        assert!(is_nearly_small(&o3, &p2).unwrap());
        assert!(!is_nearly_small(&o3, &p1).unwrap());

        // O[[U]]/(p^3, pU^2, U^3): n_2 holds p^2 and U*p^2 != 0, n_3 = (p^2 U)
        let r = ring(3, &[(1, 2), (0, 3)]);
        assert!(!is_nearly_small(&r, &filtration_nk(&r, 2).unwrap()).unwrap());
        assert!(is_nearly_small(&r, &filtration_nk(&r, 3).unwrap()).unwrap());
    }

    #[test]
    fn non_ideal_thresholds_rejected() {
        let r = ring(3, &[(0, 3)]);
        // contains U but not U^2
        assert!(SubmoduleIdeal::from_thresholds(r.clone(), vec![3, 0, 3]).is_err());
        assert!(SubmoduleIdeal::from_thresholds(r, vec![3, 0, 0]).is_ok());
    }

    #[test]
    fn category_c_membership() {
        let f5 = FiniteField::new(5, 1, None).unwrap();
        assert!(in_category_c(&CoefficientRing::witt(&f5, 3).unwrap()));
        assert!(!in_category_c(&ring(1, &[(0, 2)])));
    }

    #[test]
    fn quotient_by_n2() {
        let r = ring(3, &[(0, 3)]);
        let q = filtration_nk(&r, 2).unwrap().quotient_ring().unwrap();
        assert_eq!(q.exponents(), &[2, 1, 1]);
    }
}
