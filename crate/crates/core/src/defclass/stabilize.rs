use std::sync::Arc;

use serde::Serialize;

use crate::coeffring::{filtration_nk, graded_piece, CoefficientRing, Elem, Monomial, RingHom};
use crate::cohomology::{n_space, ram_scalar};
use crate::error::{Error, Result};
use crate::matrep::{in_deform_class, DeformClassSpec, Mat2, Mode, SearchConfig, Variant};

use super::twist::{exp_twist, TwistDatum};

/// One twist `exp(X ⊗ j) rho` of a class member over `R/n_{k+1}`.
#[derive(Clone, Debug, Serialize)]
pub struct StabilizationCase {
    pub x: String,
    pub y: String,
    pub cocycle: String,
    pub scalar: String,
    pub member_before: bool,
    pub member_after: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizationReport {
    pub ring: String,
    pub k: u32,
    pub variant: Variant,
    pub cases: Vec<StabilizationCase>,
}

impl StabilizationReport {
    pub fn all_preserved(&self) -> bool {
        self.cases.iter().all(|c| c.member_before && c.member_after)
    }

    pub fn violations(&self) -> impl Iterator<Item = &StabilizationCase> {
        self.cases.iter().filter(|c| c.member_before && !c.member_after)
    }
}

/// `R/n_{k+1}` and the projection onto it.
pub fn truncation(r: &Arc<CoefficientRing>, k: u32) -> Result<(Arc<CoefficientRing>, RingHom)> {
    RingHom::projection(&filtration_nk(r, k + 1)?)
}

/// Sample `x ∈ n_2`: zero, `p^2` and the `p U_i`.
fn sample_x_values(r: &Arc<CoefficientRing>) -> Vec<Elem> {
    let s = r.vars().len();
    let mut out = vec![r.zero(), r.monomial(&Monomial::new(2, vec![0; s]))];
    for i in 0..s {
        let mut a = vec![0; s];
        a[i] = 1;
        out.push(r.monomial(&Monomial::new(1, a)));
    }
    let n2 = filtration_nk(r, 2).expect("k = 2");
    out.retain(|x| n2.contains(x));
    out.dedup();
    out
}

/// Twists every sampled member of `C_v(R/n_{k+1})` by `N_v ⊗ (n_k/n_{k+1})`
/// and decides membership of the result.
pub fn stabilization_check(
    r: &Arc<CoefficientRing>,
    k: u32,
    variant: Variant,
    v: u64,
    mode: Mode,
    cfg: &SearchConfig,
) -> Result<StabilizationReport> {
    if !matches!(variant, Variant::Nr | Variant::Ram) {
        return Err(Error::Precondition("stabilization concerns the nr and ram classes".into()));
    }
    let spec = DeformClassSpec::transported(variant, v)?;
    let (rk, proj) = truncation(r, k)?;
    let kf = r.residue_field();
    let pieces: Vec<Elem> = graded_piece(r, k)?
        .iter()
        .map(|m| proj.apply(&r.monomial(m)))
        .filter(|e| !rk.is_zero(e))
        .collect();
    let mut cases = Vec::new();
    for x in sample_x_values(&rk) {
        for y in crate::matrep::sample_y_values(&rk, variant) {
            let rho = spec.transported_normal_form(&rk, &x, &y, None)?;
            let before = in_deform_class(&rho, &spec, mode, cfg)?.holds;
            let cr = match variant {
                Variant::Ram => ram_scalar(&rk, &y, v)?,
                _ => kf.zero(),
            };
            let nv = n_space(&kf, v, variant, &cr)?;
            for x_coc in nv.basis() {
                for j in &pieces {
                    let t = TwistDatum { cocycle: x_coc.clone(), scalar: j.clone() };
                    let twisted = exp_twist(&rho, &t)?;
                    let verdict = in_deform_class(&twisted, &spec, mode, cfg)?;
                    cases.push(StabilizationCase {
                        x: rk.fmt_elem(&x),
                        y: rk.fmt_elem(&y),
                        cocycle: x_coc.to_string(),
                        scalar: rk.fmt_elem(j),
                        member_before: before,
                        member_after: verdict.holds,
                        witness: verdict.witness.map(|w| w.fmt_with(&rk)),
                    });
                }
            }
        }
    }
    Ok(StabilizationReport { ring: crate::coeffring::print(&rk), k, variant, cases })
}

/// The same computation at `k = 1`, where the argument breaks down. Any
/// violation found is reported; an empty list means the probe saw none.
pub fn failure_probe(r: &Arc<CoefficientRing>, variant: Variant, v: u64, mode: Mode, cfg: &SearchConfig) -> Result<Vec<StabilizationCase>> {
    let rep = stabilization_check(r, 1, variant, v, mode, cfg)?;
    Ok(rep.violations().cloned().collect())
}

/// Outcome of checking the explicit conjugation identities behind
/// stabilization over `R/n_{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    /// `A^-1 u[[v,x],[pr,1]] A = u[[v,x],[0,1]]`.
    pub sigma: bool,
    /// `A^-1 [[1,y],[0,1]] A = [[1,y],[0,1]]`, when `y ∈ n_2`.
    pub tau_unchanged: Option<bool>,
    /// `A tau A^-1 = [[1 - pry/(v-1), y],[0, 1 + pry/(v-1)]] = (Id + pr g^ram) tau`,
    /// when `y ∈ pR \ n_2`.
    pub tau_ram: Option<bool>,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.sigma && self.tau_unchanged != Some(false) && self.tau_ram != Some(false)
    }
}

/// Checks the identities with `A = Id + r [[0,0],[p/(v-1),0]]` for
/// `pr ∈ n_k`, `x ∈ n_2` and `y ∈ pR`.
pub fn conjugation_identity_check(
    r: &Arc<CoefficientRing>,
    k: u32,
    rr: &Elem,
    x: &Elem,
    y: &Elem,
    v: u64,
    kappa: i64,
) -> Result<IdentityCheck> {
    if k < 2 {
        return Err(Error::FiltrationIndex);
    }
    let pr = r.mul(&r.p_elem(), rr);
    if !filtration_nk(r, k)?.contains(&pr) {
        return Err(Error::NotInIdeal("pr must lie in n_k".into()));
    }
    if !filtration_nk(r, 2)?.contains(x) {
        return Err(Error::NotInIdeal("x must lie in n_2".into()));
    }
    if !filtration_nk(r, 1)?.contains(y) {
        return Err(Error::NotInIdeal("y must lie in pR".into()));
    }
    let spec = DeformClassSpec::new(Variant::D, v, kappa, crate::matrep::Conjugator::Identity)?;
    let n2_full = filtration_nk(r, 2)?;
    let y_in_n2 = n2_full.contains(y);
    let c_ram = if y_in_n2 { None } else { Some(ram_scalar(r, y, v)?) };
    let (rk, proj) = truncation(r, k)?;
    let (pr, x, y, rr) = (proj.apply(&pr), proj.apply(x), proj.apply(y), proj.apply(rr));
    let u = spec.u(&rk)?;
    let nu = rk.from_int(((v - 1) / rk.p()) as i64);
    let s = rk.mul(&rr, &rk.inv(&nu)?);
    let one = rk.one();
    let a = Mat2::new(one.clone(), rk.zero(), s.clone(), one.clone());
    let ai = a.inv(&rk)?;
    let vv = rk.from_int(v as i64);

    let twisted = Mat2::new(vv.clone(), x.clone(), pr.clone(), one.clone()).scale(&rk, &u);
    let target = Mat2::new(vv, x, rk.zero(), one.clone()).scale(&rk, &u);
    let sigma = twisted.conj(&rk, &ai, &a) == target;

    let tau = Mat2::new(one.clone(), y.clone(), rk.zero(), one.clone());
    let tau_unchanged = y_in_n2.then(|| tau.conj(&rk, &ai, &a) == tau);
    let tau_ram = match c_ram {
        None => None,
        Some(c) => {
            let sy = rk.mul(&s, &y);
            let display = Mat2::new(rk.sub(&one, &sy), y.clone(), rk.zero(), rk.add(&one, &sy));
            let conj = tau.conj(&rk, &a, &ai);
            let c = rk.from_residue(&c);
            let g = Mat2::new(rk.neg(&c), rk.zero(), rk.zero(), c);
            let via_cocycle = Mat2::identity(&rk).add(&rk, &g.scale(&rk, &pr)).mul(&rk, &tau);
            Some(conj == display && display == via_cocycle)
        }
    };
    Ok(IdentityCheck { sigma, tau_unchanged, tau_ram })
}
