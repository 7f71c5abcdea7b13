use std::sync::Arc;

use crate::coeffring::{CoefficientRing, Elem, Monomial, SubmoduleIdeal};
use crate::cohomology::{Cocycle, GModule, ModuleKind};
use crate::error::{Error, Result};
use crate::linalg::FqMatrix;
use crate::matrep::{Mat2, TameRep};

/// A pure tensor `X ⊗ r` with `X` a matrix-valued cocycle over `F_q` and
/// `r` killed by the maximal ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistDatum {
    pub cocycle: Cocycle,
    pub scalar: Elem,
}

/// `m_R * r = 0`.
pub fn annihilated_by_maximal_ideal(r: &CoefficientRing, x: &Elem) -> bool {
    let mut gens = vec![r.p_elem()];
    gens.extend((0..r.vars().len()).map(|i| r.var(i)));
    gens.iter().all(|g| r.is_zero(&r.mul(g, x)))
}

/// Lift of an `F_q` matrix to `R` through the digits of its entries.
pub fn lift_matrix(r: &CoefficientRing, m: &FqMatrix) -> Mat2 {
    Mat2(std::array::from_fn(|i| r.from_residue(&m.data[i])))
}

fn check_cocycle(c: &Cocycle) -> Result<()> {
    if c.module().kind() == ModuleKind::Generic || !c.module().is_trivial() {
        return Err(Error::Precondition(
            "twisting needs a matrix-valued cocycle for the trivial residual action".into(),
        ));
    }
    Ok(())
}

/// `g -> (Id + X(g) r) rho(g)`, summed over several tensors.
pub fn exp_twist_sum(rep: &TameRep, terms: &[TwistDatum]) -> Result<TameRep> {
    let r = rep.ring();
    let mut ds = Mat2::zero(r);
    let mut dt = Mat2::zero(r);
    for t in terms {
        check_cocycle(&t.cocycle)?;
        if !annihilated_by_maximal_ideal(r, &t.scalar) {
            return Err(Error::NotNearlySmall);
        }
        ds = ds.add(r, &lift_matrix(r, &t.cocycle.sigma_matrix()?).scale(r, &t.scalar));
        dt = dt.add(r, &lift_matrix(r, &t.cocycle.tau_matrix()?).scale(r, &t.scalar));
    }
    let id = Mat2::identity(r);
    let sigma = id.add(r, &ds).mul(r, rep.sigma());
    let tau = id.add(r, &dt).mul(r, rep.tau());
    TameRep::new(r.clone(), rep.v(), sigma, tau)
}

pub fn exp_twist(rep: &TameRep, t: &TwistDatum) -> Result<TameRep> {
    exp_twist_sum(rep, std::slice::from_ref(t))
}

/// Decomposes `gamma(g) = sigma_k(g) mu_k(g)^-1 - Id` into cocycles over
/// `Ad` tensored with the monomial basis of the nearly small ideal `j`.
pub fn cocycle_difference(sigma_k: &TameRep, mu_k: &TameRep, j: &SubmoduleIdeal) -> Result<Vec<TwistDatum>> {
    let r = sigma_k.ring();
    if mu_k.ring() != r || j.ring() != r || sigma_k.v() != mu_k.v() {
        return Err(Error::Mismatch("representations and ideal must share a ring".into()));
    }
    if !j.is_nearly_small() {
        return Err(Error::NotNearlySmall);
    }
    let id = Mat2::identity(r);
    let gamma = |a: &Mat2, b: &Mat2| -> Result<Mat2> { Ok(a.mul(r, &b.inv(r)?).sub(r, &id)) };
    let gs = gamma(sigma_k.sigma(), mu_k.sigma())?;
    let gt = gamma(sigma_k.tau(), mu_k.tau())?;
    if !gs.entries_in(j) || !gt.entries_in(j) {
        return Err(Error::NotInIdeal("representations differ outside J".into()));
    }
    let k = r.residue_field();
    let module = Arc::new(GModule::trivial_adjoint(&k, sigma_k.v(), false)?);
    let mut out = Vec::new();
    for mono in j.monomial_basis() {
        let coord = |m: &Mat2| FqMatrix {
            rows: 2,
            cols: 2,
            data: m.0.iter().map(|x| graded_coordinate(r, x, &mono)).collect(),
        };
        let (cs, ct) = (coord(&gs), coord(&gt));
        if cs.data.iter().chain(&ct.data).all(|x| k.is_zero(x)) {
            continue;
        }
        let cocycle = Cocycle::from_matrices(module.clone(), &cs, &ct)?;
        out.push(TwistDatum { cocycle, scalar: r.monomial(&mono) });
    }
    Ok(out)
}

/// `F_q`-coordinate of `x` along `p^a U^alpha` where `a = e(alpha) - 1`.
fn graded_coordinate(r: &CoefficientRing, x: &Elem, mono: &Monomial) -> Vec<u64> {
    let p = r.p();
    r.coefficient(x, &mono.vars)
        .iter()
        .map(|c| (c / p.pow(mono.p)) % p)
        .collect()
}
