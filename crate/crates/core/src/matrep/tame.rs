use std::sync::Arc;

use crate::coeffring::{is_prime, CoefficientRing, RingHom, SubmoduleIdeal};
use crate::error::{Error, Result};

use super::mat2::Mat2;

/// `v` prime, `v ≡ 1 mod p`, `v ≢ 1 mod p^2`.
pub fn is_trivial_prime(v: u64, p: u64) -> bool {
    is_prime(v) && v % p == 1 && v % (p * p) != 1
}

pub fn check_trivial_prime(v: u64, p: u64) -> Result<()> {
    if is_trivial_prime(v, p) {
        Ok(())
    } else {
        Err(Error::NotTrivialPrime(v, p))
    }
}

/// Images of `sigma_v` and `tau_v` in `GL_2(R)` satisfying
/// `sigma tau sigma^-1 = tau^v`, residually trivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TameRep {
    ring: Arc<CoefficientRing>,
    v: u64,
    sigma: Mat2,
    tau: Mat2,
}

impl TameRep {
    pub fn new(ring: Arc<CoefficientRing>, v: u64, sigma: Mat2, tau: Mat2) -> Result<Self> {
        check_trivial_prime(v, ring.p())?;
        if !sigma.is_invertible(&ring) || !tau.is_invertible(&ring) {
            return Err(Error::NotInvertible);
        }
        let rep = TameRep { ring, v, sigma, tau };
        if !rep.relation_holds() {
            return Err(Error::RelationViolated);
        }
        let r = &rep.ring;
        if !rep.sigma.is_residually_identity(r) || !rep.tau.is_residually_identity(r) {
            return Err(Error::NotResiduallyTrivial);
        }
        Ok(rep)
    }

    pub fn trivial(ring: Arc<CoefficientRing>, v: u64) -> Result<Self> {
        let id = Mat2::identity(&ring);
        TameRep::new(ring, v, id.clone(), id)
    }

    pub fn relation_holds(&self) -> bool {
        let r = &self.ring;
        let Ok(si) = self.sigma.inv(r) else {
            return false;
        };
        self.tau.conj(r, &self.sigma, &si) == self.tau.pow(r, self.v)
    }

    pub fn ring(&self) -> &Arc<CoefficientRing> {
        &self.ring
    }

    pub fn v(&self) -> u64 {
        self.v
    }

    pub fn sigma(&self) -> &Mat2 {
        &self.sigma
    }

    pub fn tau(&self) -> &Mat2 {
        &self.tau
    }

    /// `A rho A^-1` generatorwise.
    pub fn conjugate(&self, a: &Mat2) -> Result<TameRep> {
        let r = &self.ring;
        let ai = a.inv(r)?;
        TameRep::new(
            r.clone(),
            self.v,
            self.sigma.conj(r, a, &ai),
            self.tau.conj(r, a, &ai),
        )
    }

    /// Entrywise image under a ring map.
    pub fn map(&self, hom: &RingHom) -> Result<TameRep> {
        if hom.source() != &self.ring {
            return Err(Error::Mismatch("map does not start at the representation ring".into()));
        }
        TameRep::new(
            hom.target().clone(),
            self.v,
            self.sigma.map(|x| hom.apply(x)),
            self.tau.map(|x| hom.apply(x)),
        )
    }

    /// Reduction modulo a proper ideal.
    pub fn reduce(&self, j: &SubmoduleIdeal) -> Result<TameRep> {
        let (_, hom) = RingHom::projection(j)?;
        self.map(&hom)
    }

    pub fn fmt_text(&self) -> String {
        format!(
            "{}\nsigma = {}\ntau = {}",
            crate::coeffring::print(&self.ring),
            self.sigma.fmt_with(&self.ring),
            self.tau.fmt_with(&self.ring)
        )
    }
}
