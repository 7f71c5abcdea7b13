use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::coeffring::{maximal_ideal_power, CoefficientRing, Elem, Monomial, SubmoduleIdeal};
use crate::cohomology::{h1_representatives, GModule};
use crate::error::{Error, Result};
use crate::matrep::{in_deform_class, DeformClassSpec, Mat2, Mode, SearchConfig, TameRep};

use super::twist::{exp_twist_sum, TwistDatum};

/// Lifts of a class member over `R/J` to `R`, compared with the action of
/// `H^1(G_v, Ad) ⊗ J`.
#[derive(Clone, Debug, Serialize)]
pub struct FiberReport {
    /// Homomorphisms over `R` reducing to the base.
    pub lifts: usize,
    /// Lifts that lie in the class again.
    pub class_members: usize,
    pub h1_dim: usize,
    /// `dim_Fq J`.
    pub j_length: usize,
    /// `|H^1 ⊗ J|`.
    pub group_order: u128,
    /// Lifts modulo conjugation by `Id + M_2(J)`.
    pub classes: usize,
    /// The twisting action on `classes` is free and transitive.
    pub simply_transitive: bool,
    /// Conjugators `[[1,b],[c,1+d]]` over `R` fixing the base modulo `J`.
    pub stabilizer_size: usize,
    /// Lifts modulo conjugation by that stabilizer.
    pub coarse_classes: usize,
    /// Whether the action on `coarse_classes` is still free.
    pub coarse_free: bool,
}

impl FiberReport {
    pub fn is_empty(&self) -> bool {
        self.lifts == 0
    }
}

type Key = ([Elem; 4], [Elem; 4]);

fn key(s: &Mat2, t: &Mat2) -> Key {
    (s.0.clone(), t.0.clone())
}

/// Coefficientwise lift from `R/J` to `R`; both rings share variables.
fn lift_elem(r: &CoefficientRing, q: &CoefficientRing, x: &Elem) -> Elem {
    let mut out = r.zero();
    for alpha in q.monomials() {
        let c = q.coefficient(x, alpha);
        out = r.add(&out, &r.term(&c, &Monomial::new(0, alpha.clone())));
    }
    out
}

/// Enumerates all lifts of `base` from `R/J` to `R` for a nearly small `J`.
pub fn fiber_enumerate(
    r: &Arc<CoefficientRing>,
    j: &SubmoduleIdeal,
    spec: &DeformClassSpec,
    base: &TameRep,
    cfg: &SearchConfig,
) -> Result<FiberReport> {
    if j.ring() != r {
        return Err(Error::Mismatch("ideal does not belong to the ring".into()));
    }
    if !j.is_nearly_small() {
        return Err(Error::NotNearlySmall);
    }
    let q = base.ring();
    if **q != j.quotient_ring()? {
        return Err(Error::Mismatch("base must live over R/J".into()));
    }
    if !in_deform_class(base, spec, Mode::NormalForm, cfg)?.holds {
        return Err(Error::NotInClass);
    }
    let jel: Vec<Elem> = j.elements().collect();
    let candidates = (jel.len() as u128).pow(8);
    if candidates > cfg.bound {
        return Err(Error::SearchBound { size: candidates, bound: cfg.bound });
    }
    let v = base.v();
    let lift_mat = |m: &Mat2| m.map(|x| lift_elem(r, q, x));
    let (s0, t0) = (lift_mat(base.sigma()), lift_mat(base.tau()));

    let offsets: Vec<Mat2> = (0..jel.len().pow(4))
        .map(|mut i| {
            Mat2(std::array::from_fn(|_| {
                let e = jel[i % jel.len()].clone();
                i /= jel.len();
                e
            }))
        })
        .collect();
    let t0_ref = &t0;
    let lifts: Vec<TameRep> = offsets
        .par_iter()
        .flat_map_iter(|ds| {
            let s = s0.add(r, ds);
            offsets.iter().filter_map(move |dt| {
                TameRep::new(r.clone(), v, s.clone(), t0_ref.add(r, dt)).ok()
            })
        })
        .collect();
    let class_members = lifts
        .par_iter()
        .filter(|rho| {
            in_deform_class(rho, spec, Mode::NormalForm, cfg)
                .map(|x| x.holds)
                .unwrap_or(false)
        })
        .count();

    // Id + M_2(J)
    let kernel: Vec<Mat2> = offsets.iter().map(|d| Mat2::identity(r).add(r, d)).collect();
    let classes_of = |group: &[Mat2]| -> HashMap<Key, usize> {
        let pairs: Vec<(Mat2, Mat2)> = group.iter().map(|a| (a.clone(), a.inv(r).unwrap())).collect();
        let canon: Vec<(Key, Key)> = lifts
            .par_iter()
            .map(|rho| {
                let m = pairs
                    .iter()
                    .map(|(a, ai)| key(&rho.sigma().conj(r, a, ai), &rho.tau().conj(r, a, ai)))
                    .min()
                    .expect("group contains the identity");
                (key(rho.sigma(), rho.tau()), m)
            })
            .collect();
        let mut ids: HashMap<Key, usize> = HashMap::new();
        let mut out = HashMap::new();
        for (k, m) in canon {
            let n = ids.len();
            let id = *ids.entry(m).or_insert(n);
            out.insert(k, id);
        }
        out
    };
    let fine = classes_of(&kernel);
    let n_fine = fine.values().collect::<HashSet<_>>().len();

    let one = r.one();
    let m1: Vec<Elem> = maximal_ideal_power(r, 1).elements().collect();
    let mut stabilizer = Vec::new();
    for b in &m1 {
        for c in &m1 {
            for d in &m1 {
                let a = Mat2::new(one.clone(), b.clone(), c.clone(), r.add(&one, d));
                let ai = a.inv(r)?;
                let fixes = |m: &Mat2| m.conj(r, &a, &ai).sub(r, m).entries_in(j);
                if fixes(&s0) && fixes(&t0) {
                    stabilizer.push(a);
                }
            }
        }
    }
    let coarse = classes_of(&stabilizer);
    let n_coarse = coarse.values().collect::<HashSet<_>>().len();

    let kf = r.residue_field();
    let module = Arc::new(GModule::trivial_adjoint(&kf, v, false)?);
    let h1 = h1_representatives(&module);
    let basis = j.monomial_basis();
    let q_order = kf.size() as u128;
    let gens = h1.len() * basis.len();
    let group_order = q_order.pow(gens as u32);

    let (simply_transitive, coarse_free) = if lifts.is_empty() {
        (false, false)
    } else {
        let field_elems: Vec<Vec<u64>> = kf.elements().collect();
        let reference = &lifts[0];
        let images: Vec<Key> = (0..group_order as usize)
            .into_par_iter()
            .map(|mut idx| {
                let mut terms = Vec::with_capacity(gens);
                for x in &h1 {
                    for m in &basis {
                        let a = &field_elems[idx % field_elems.len()];
                        idx /= field_elems.len();
                        terms.push(TwistDatum { cocycle: x.scale(a), scalar: r.monomial(m) });
                    }
                }
                let t = exp_twist_sum(reference, &terms).expect("twist of a lift is a lift");
                key(t.sigma(), t.tau())
            })
            .collect();
        let hit = |table: &HashMap<Key, usize>, n: usize| -> (bool, bool) {
            let ids: Option<Vec<usize>> = images.iter().map(|k| table.get(k).copied()).collect();
            match ids {
                None => (false, false),
                Some(ids) => {
                    let distinct = ids.iter().collect::<HashSet<_>>().len();
                    (distinct == ids.len(), distinct == n)
                }
            }
        };
        let (free, onto) = hit(&fine, n_fine);
        let (cfree, _) = hit(&coarse, n_coarse);
        (free && onto, cfree)
    };

    Ok(FiberReport {
        lifts: lifts.len(),
        class_members,
        h1_dim: h1.len(),
        j_length: basis.len(),
        group_order,
        classes: n_fine,
        simply_transitive,
        stabilizer_size: stabilizer.len(),
        coarse_classes: n_coarse,
        coarse_free,
    })
}
