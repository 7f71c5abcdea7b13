use std::fmt;
use std::sync::Arc;

use crate::coeffring::{FiniteField, GrElem};
use crate::error::{Error, Result};
use crate::linalg::{span_rank, FqMatrix};

use super::module::GModule;

/// Fox derivatives of `sigma tau sigma^-1 tau^-v`: the relator evaluates to
/// `D_sigma X(sigma) + D_tau X(tau)` for any assignment `X`.
pub fn relator_matrices(m: &GModule) -> (FqMatrix, FqMatrix) {
    let k = m.field();
    let n = m.dim();
    let id = FqMatrix::identity(k, n);
    let s = m.sigma();
    let t = m.tau();
    let si = s.inverse(k).expect("module action is invertible");
    let sts = s.mul(k, t).mul(k, &si);
    let d_sigma = id.sub(k, &sts);
    // X(tau^-v) = -tau^-v (1 + tau + ... + tau^(v-1)) X(tau)
    let tv_inv = t.pow(k, m.v()).inverse(k).expect("invertible");
    let d_tau = s.sub(k, &sts.mul(k, &tv_inv).mul(k, &t.geometric_sum(k, m.v())));
    (d_sigma, d_tau)
}

/// A 1-cocycle, determined by its values on `sigma` and `tau`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    module: Arc<GModule>,
    sigma: Vec<GrElem>,
    tau: Vec<GrElem>,
}

impl Cocycle {
    pub fn new(module: Arc<GModule>, sigma: Vec<GrElem>, tau: Vec<GrElem>) -> Result<Self> {
        if sigma.len() != module.dim() || tau.len() != module.dim() {
            return Err(Error::Mismatch("cocycle values have the wrong dimension".into()));
        }
        let c = Cocycle { module, sigma, tau };
        if !c.relator_vanishes() {
            return Err(Error::NotCocycle);
        }
        Ok(c)
    }

    /// Values given as 2x2 matrices, for adjoint modules.
    pub fn from_matrices(module: Arc<GModule>, sigma: &FqMatrix, tau: &FqMatrix) -> Result<Self> {
        let s = module.from_matrix(sigma)?;
        let t = module.from_matrix(tau)?;
        Cocycle::new(module, s, t)
    }

    pub fn zero(module: Arc<GModule>) -> Self {
        let z = vec![module.field().zero(); module.dim()];
        Cocycle { module, sigma: z.clone(), tau: z }
    }

    /// `g -> (g - 1) x`.
    pub fn coboundary(module: Arc<GModule>, x: &[GrElem]) -> Self {
        let k = module.field().clone();
        let id = FqMatrix::identity(&k, module.dim());
        let s = module.sigma().sub(&k, &id).apply(&k, x);
        let t = module.tau().sub(&k, &id).apply(&k, x);
        Cocycle { module, sigma: s, tau: t }
    }

    pub fn relator_vanishes(&self) -> bool {
        let k = self.module.field();
        let (ds, dt) = relator_matrices(&self.module);
        let a = ds.apply(k, &self.sigma);
        let b = dt.apply(k, &self.tau);
        a.iter().zip(&b).all(|(x, y)| k.is_zero(&k.add(x, y)))
    }

    pub fn module(&self) -> &Arc<GModule> {
        &self.module
    }

    pub fn sigma(&self) -> &[GrElem] {
        &self.sigma
    }

    pub fn tau(&self) -> &[GrElem] {
        &self.tau
    }

    pub fn sigma_matrix(&self) -> Result<FqMatrix> {
        self.module.to_matrix(&self.sigma)
    }

    pub fn tau_matrix(&self) -> Result<FqMatrix> {
        self.module.to_matrix(&self.tau)
    }

    /// `(X(sigma), X(tau))` concatenated.
    pub fn as_vector(&self) -> Vec<GrElem> {
        let mut v = self.sigma.clone();
        v.extend(self.tau.iter().cloned());
        v
    }

    pub fn add(&self, o: &Cocycle) -> Cocycle {
        let k = self.module.field();
        Cocycle {
            module: self.module.clone(),
            sigma: self.sigma.iter().zip(&o.sigma).map(|(a, b)| k.add(a, b)).collect(),
            tau: self.tau.iter().zip(&o.tau).map(|(a, b)| k.add(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &[u64]) -> Cocycle {
        let k = self.module.field();
        Cocycle {
            module: self.module.clone(),
            sigma: self.sigma.iter().map(|a| k.mul(a, c)).collect(),
            tau: self.tau.iter().map(|a| k.mul(a, c)).collect(),
        }
    }

    /// Entrywise `C X C^-1` on a matrix-valued cocycle with trivial action.
    pub fn conjugate_values(&self, c: &FqMatrix) -> Result<Cocycle> {
        let k = self.module.field();
        let ci = c.inverse(k)?;
        let s = c.mul(k, &self.sigma_matrix()?).mul(k, &ci);
        let t = c.mul(k, &self.tau_matrix()?).mul(k, &ci);
        Cocycle::from_matrices(self.module.clone(), &s, &t)
    }
}

impl fmt::Display for Cocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[GrElem]| {
            v.iter()
                .map(|c| {
                    if c.len() == 1 {
                        c[0].to_string()
                    } else {
                        format!("{:?}", c)
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "sigma: [{}] tau: [{}]", show(&self.sigma), show(&self.tau))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceLabel {
    Z1,
    B1,
    Q,
    PNr,
    PRam,
    M,
    N,
    Custom(String),
}

impl fmt::Display for SpaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceLabel::Z1 => f.write_str("Z1"),
            SpaceLabel::B1 => f.write_str("B1"),
            SpaceLabel::Q => f.write_str("Q_v"),
            SpaceLabel::PNr => f.write_str("P_v^nr"),
            SpaceLabel::PRam => f.write_str("P_v^ram"),
            SpaceLabel::M => f.write_str("M_v"),
            SpaceLabel::N => f.write_str("N_v"),
            SpaceLabel::Custom(s) => f.write_str(s),
        }
    }
}

/// A linearly independent family of cocycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleSpace {
    pub label: SpaceLabel,
    module: Arc<GModule>,
    basis: Vec<Cocycle>,
}

impl CocycleSpace {
    pub fn new(label: SpaceLabel, module: Arc<GModule>, basis: Vec<Cocycle>) -> Result<Self> {
        let k = module.field();
        if basis.iter().any(|c| c.module != module || !c.relator_vanishes()) {
            return Err(Error::NotCocycle);
        }
        let vecs: Vec<_> = basis.iter().map(Cocycle::as_vector).collect();
        if span_rank(k, &vecs) != basis.len() {
            return Err(Error::Dependent);
        }
        Ok(CocycleSpace { label, module, basis })
    }

    pub fn basis(&self) -> &[Cocycle] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn module(&self) -> &Arc<GModule> {
        &self.module
    }
}

/// `Z^1`: kernel of `[D_sigma | D_tau]`.
pub fn cocycle_space(m: &Arc<GModule>) -> CocycleSpace {
    let k = m.field();
    let n = m.dim();
    let (ds, dt) = relator_matrices(m);
    let basis = ds
        .hstack(&dt)
        .kernel(k)
        .into_iter()
        .map(|v| Cocycle { module: m.clone(), sigma: v[..n].to_vec(), tau: v[n..].to_vec() })
        .collect();
    CocycleSpace { label: SpaceLabel::Z1, module: m.clone(), basis }
}

/// `B^1`: image of `x -> ((A_sigma - 1) x, (A_tau - 1) x)`.
pub fn coboundary_space(m: &Arc<GModule>) -> CocycleSpace {
    let k = m.field();
    let mut basis: Vec<Cocycle> = Vec::new();
    let mut vecs: Vec<Vec<GrElem>> = Vec::new();
    for i in 0..m.dim() {
        let mut e = vec![k.zero(); m.dim()];
        e[i] = k.one();
        let c = Cocycle::coboundary(m.clone(), &e);
        vecs.push(c.as_vector());
        if span_rank(k, &vecs) > basis.len() {
            basis.push(c);
        } else {
            vecs.pop();
        }
    }
    CocycleSpace { label: SpaceLabel::B1, module: m.clone(), basis }
}

/// Cocycles completing a basis of `B^1` to one of `Z^1`; they represent a
/// basis of `H^1`.
pub fn h1_representatives(m: &Arc<GModule>) -> Vec<Cocycle> {
    let k = m.field();
    let mut vecs: Vec<Vec<GrElem>> = coboundary_space(m).basis.iter().map(Cocycle::as_vector).collect();
    let mut out = Vec::new();
    for c in cocycle_space(m).basis {
        vecs.push(c.as_vector());
        if span_rank(k, &vecs) == vecs.len() {
            out.push(c);
        } else {
            vecs.pop();
        }
    }
    out
}

/// `(h^0, h^1, h^2)` for the tame local group at a trivial prime; `h^2` is
/// `h^0(M^*)` by local duality.
pub fn h_dims(m: &Arc<GModule>, at_p: bool) -> Result<(usize, usize, usize)> {
    if at_p {
        return Err(Error::AtP);
    }
    let h0 = m.h0();
    let h1 = cocycle_space(m).dim() - coboundary_space(m).dim();
    let h2 = m.dual()?.h0();
    if h0 + h2 != h1 {
        return Err(Error::Euler(h0, h1, h2));
    }
    Ok((h0, h1, h2))
}

/// Helper for callers that only have a field and dimension.
pub fn trivial_h_dims(k: &FiniteField, dim: usize, v: u64) -> Result<(usize, usize, usize)> {
    h_dims(&Arc::new(GModule::trivial(k, dim, v)?), false)
}
