use std::sync::Arc;

use crate::coeffring::{filtration_nk, CoefficientRing, Elem, FiniteField, GrElem};
use crate::error::{Error, Result};
use crate::linalg::FqMatrix;
use crate::matrep::{check_trivial_prime, Conjugator, Variant};

use super::cocycle::{Cocycle, CocycleSpace, SpaceLabel};
use super::module::GModule;

/// `f_1, f_2, g^nr, g^ram` on `Ad^0` with trivial action.
#[derive(Clone, Debug)]
pub struct StandardCocycles {
    pub f1: Cocycle,
    pub f2: Cocycle,
    pub g_nr: Cocycle,
    pub g_ram: Cocycle,
}

/// The scalar `y/(v-1) mod p = (y/p) ((v-1)/p)^-1` for `y ∈ pR`.
pub fn ram_scalar(ring: &Arc<CoefficientRing>, y: &Elem, v: u64) -> Result<GrElem> {
    check_trivial_prime(v, ring.p())?;
    if !filtration_nk(ring, 1)?.contains(y) {
        return Err(Error::NotInIdeal("y must be divisible by p".into()));
    }
    let k = ring.residue_field();
    let y1 = ring.div_p(y).expect("y ∈ pR");
    let nu = k.from_int(((v - 1) / ring.p()) as i64);
    Ok(k.mul(&ring.residue(&y1), &k.inv(&nu)?))
}

fn mat(k: &FiniteField, m: [i64; 4]) -> FqMatrix {
    FqMatrix::from_ints(k, 2, 2, &m)
}

/// `c` is the `g^ram` scalar from [`ram_scalar`].
pub fn standard_cocycles(k: &FiniteField, v: u64, c: &[u64]) -> Result<StandardCocycles> {
    check_trivial_prime(v, k.p())?;
    let m = Arc::new(GModule::trivial_adjoint(k, v, true)?);
    let zero = mat(k, [0, 0, 0, 0]);
    let e12 = mat(k, [0, 1, 0, 0]);
    let e21 = mat(k, [0, 0, 1, 0]);
    let ram_tau = FqMatrix { rows: 2, cols: 2, data: vec![k.neg(c), k.zero(), k.zero(), c.to_vec()] };
    Ok(StandardCocycles {
        f1: Cocycle::from_matrices(m.clone(), &e12, &zero)?,
        f2: Cocycle::from_matrices(m.clone(), &zero, &e12)?,
        g_nr: Cocycle::from_matrices(m.clone(), &e21, &zero)?,
        g_ram: Cocycle::from_matrices(m, &e21, &ram_tau)?,
    })
}

/// `Q_v = <f1, f2>`.
pub fn q_space(std: &StandardCocycles) -> Result<CocycleSpace> {
    CocycleSpace::new(SpaceLabel::Q, std.f1.module().clone(), vec![std.f1.clone(), std.f2.clone()])
}

/// `P_v^nr = <f1, f2, g^nr>` or `P_v^ram = <f1, f2, g^ram>`.
pub fn p_space(std: &StandardCocycles, variant: Variant) -> Result<CocycleSpace> {
    let (label, g) = match variant {
        Variant::Nr => (SpaceLabel::PNr, &std.g_nr),
        Variant::Ram => (SpaceLabel::PRam, &std.g_ram),
        _ => return Err(Error::Precondition("P_v is defined for the nr and ram classes".into())),
    };
    CocycleSpace::new(label, std.f1.module().clone(), vec![std.f1.clone(), std.f2.clone(), g.clone()])
}

/// Conjugates every basis value by the class's basis change: `Q_v -> M_v`,
/// `P_v -> N_v`.
pub fn twisted_space(space: &CocycleSpace, conjugator: Conjugator) -> Result<CocycleSpace> {
    let k = space.module().field();
    let c = match conjugator {
        Conjugator::Identity => mat(k, [1, 0, 0, 1]),
        Conjugator::LowerUnipotent => mat(k, [1, 0, 1, 1]),
        Conjugator::Swap => mat(k, [0, 1, 1, 0]),
    };
    let label = match space.label {
        SpaceLabel::Q => SpaceLabel::M,
        SpaceLabel::PNr | SpaceLabel::PRam => SpaceLabel::N,
        ref other => SpaceLabel::Custom(format!("C.{}", other)),
    };
    let basis = space
        .basis()
        .iter()
        .map(|x| x.conjugate_values(&c))
        .collect::<Result<Vec<_>>>()?;
    CocycleSpace::new(label, space.module().clone(), basis)
}

/// `N_v` for the given class: `P_v^nr` conjugated by `[[1,0],[1,1]]` or
/// `P_v^ram` conjugated by `[[0,1],[1,0]]`.
pub fn n_space(k: &FiniteField, v: u64, variant: Variant, c: &[u64]) -> Result<CocycleSpace> {
    let std = standard_cocycles(k, v, c)?;
    let conj = match variant {
        Variant::Nr => Conjugator::LowerUnipotent,
        Variant::Ram => Conjugator::Swap,
        _ => return Err(Error::Precondition("N_v is defined for the nr and ram classes".into())),
    };
    twisted_space(&p_space(&std, variant)?, conj)
}

/// `M_v` for the given class.
pub fn m_space(k: &FiniteField, v: u64, variant: Variant) -> Result<CocycleSpace> {
    let std = standard_cocycles(k, v, &k.zero())?;
    let conj = match variant {
        Variant::Nr => Conjugator::LowerUnipotent,
        Variant::Ram => Conjugator::Swap,
        _ => return Err(Error::Precondition("M_v is defined for the nr and ram classes".into())),
    };
    twisted_space(&q_space(&std)?, conj)
}
