use std::sync::Arc;

use serde::Serialize;

use crate::coeffring::{filtration_nk, CoefficientRing, Elem, RingHom};
use crate::error::{Error, Result};

/// `det - 1` as a point of the weight space; `det` must be a unit.
pub fn weight_point(r: &CoefficientRing, det: &Elem) -> Result<Elem> {
    if !r.is_unit(det) {
        return Err(Error::NotUnit);
    }
    Ok(r.sub(det, &r.one()))
}

/// Weights agree modulo `n_2`.
pub fn weights_congruent(r: &Arc<CoefficientRing>, w1: &Elem, w2: &Elem) -> Result<bool> {
    Ok(filtration_nk(r, 2)?.contains(&r.sub(w1, w2)))
}

#[derive(Clone, Debug, Serialize)]
pub struct HullStepReport {
    pub k: u32,
    /// `(monomial, image under U -> G, image under U -> G + H)`.
    pub values: Vec<(String, String, String)>,
}

impl HullStepReport {
    pub fn agree(&self) -> bool {
        self.values.iter().all(|(_, a, b)| a == b)
    }
}

/// Compares `U -> G` and `U -> G + H` on the standard monomials of
/// `n_3` of a one-variable source, given `pH ∈ n_{k-1}` of a target killed
/// by `m n_{k-1}`.
pub fn hull_step_check(
    source: &Arc<CoefficientRing>,
    target: &Arc<CoefficientRing>,
    k: u32,
    g: &Elem,
    h: &Elem,
) -> Result<HullStepReport> {
    if source.vars().len() != 1 {
        return Err(Error::Precondition("the source must have a single variable".into()));
    }
    if k < 2 {
        return Err(Error::FiltrationIndex);
    }
    let ph = target.mul(&target.p_elem(), h);
    if !filtration_nk(target, k - 1)?.contains(&ph) {
        return Err(Error::NotInIdeal("pH must lie in n_(k-1)".into()));
    }
    let f1 = RingHom::new(source.clone(), target.clone(), vec![g.clone()])?;
    let f2 = RingHom::new(source.clone(), target.clone(), vec![target.add(g, h)])?;
    let values = filtration_nk(source, 3)?
        .monomial_basis()
        .into_iter()
        .map(|m| {
            let x = source.monomial(&m);
            (
                m.display_with(source.vars()),
                target.fmt_elem(&f1.apply(&x)),
                target.fmt_elem(&f2.apply(&x)),
            )
        })
        .collect();
    Ok(HullStepReport { k, values })
}
