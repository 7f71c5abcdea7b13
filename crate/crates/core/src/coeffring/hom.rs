use std::sync::Arc;

use super::ideal::SubmoduleIdeal;
use super::ring::{CoefficientRing, Elem, Monomial};
use crate::error::{Error, Result};

/// `O`-algebra map determined by the images of the variables.
#[derive(Clone, Debug)]
pub struct RingHom {
    source: Arc<CoefficientRing>,
    target: Arc<CoefficientRing>,
    images: Vec<Elem>,
    /// Image of each standard monomial `U^alpha` of the source.
    monomial_images: Vec<Elem>,
}

impl RingHom {
    pub fn new(
        source: Arc<CoefficientRing>,
        target: Arc<CoefficientRing>,
        images: Vec<Elem>,
    ) -> Result<Self> {
        let (bs, bt) = (source.base(), target.base());
        if bs.p() != bt.p() || bs.modulus().len() != bt.modulus().len() {
            return Err(Error::Mismatch("source and target have different residue fields".into()));
        }
        let p = bs.p();
        let same_modulus = bs
            .modulus()
            .iter()
            .zip(bt.modulus())
            .all(|(a, b)| a % p == b % p);
        if !same_modulus {
            return Err(Error::Mismatch("residue field moduli differ".into()));
        }
        if images.len() != source.vars().len() {
            return Err(Error::Mismatch("one image per variable required".into()));
        }
        if images.iter().any(|x| target.is_unit(x)) {
            return Err(Error::ImageNotInMaximalIdeal);
        }
        let eval = |m: &Monomial| -> Elem {
            let mut acc = target.pow(&target.p_elem(), m.p as u64);
            for (img, &e) in images.iter().zip(&m.vars) {
                acc = target.mul(&acc, &target.pow(img, e as u64));
            }
            acc
        };
        for rel in source.relations() {
            if !target.is_zero(&eval(rel)) {
                return Err(Error::IllDefinedHom(rel.display_with(source.vars())));
            }
        }
        let monomial_images = source
            .monomials()
            .iter()
            .map(|alpha| eval(&Monomial::new(0, alpha.clone())))
            .collect();
        Ok(RingHom { source, target, images, monomial_images })
    }

    pub fn identity(ring: Arc<CoefficientRing>) -> Self {
        let images = (0..ring.vars().len()).map(|i| ring.var(i)).collect();
        RingHom::new(ring.clone(), ring, images).expect("identity is well defined")
    }

    /// Reduction `R -> R/I`.
    pub fn projection(ideal: &SubmoduleIdeal) -> Result<(Arc<CoefficientRing>, Self)> {
        let source = ideal.ring().clone();
        let target = Arc::new(ideal.quotient_ring()?);
        let images = (0..target.vars().len()).map(|i| target.var(i)).collect();
        let hom = RingHom::new(source, target.clone(), images)?;
        Ok((target, hom))
    }

    pub fn source(&self) -> &Arc<CoefficientRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CoefficientRing> {
        &self.target
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    pub fn apply(&self, x: &Elem) -> Elem {
        let t = &self.target;
        let f = self.source.base().degree();
        let mut acc = t.zero();
        for (i, img) in self.monomial_images.iter().enumerate() {
            let c = &x.coeffs()[i * f..(i + 1) * f];
            if c.iter().all(|&v| v == 0) {
                continue;
            }
            let c = t.from_witt(c);
            acc = t.add(&acc, &t.mul(&c, img));
        }
        acc
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &RingHom) -> Result<RingHom> {
        if other.source != self.target {
            return Err(Error::Mismatch("composition of incompatible maps".into()));
        }
        let images = self.images.iter().map(|x| other.apply(x)).collect();
        RingHom::new(self.source.clone(), other.target.clone(), images)
    }
}
