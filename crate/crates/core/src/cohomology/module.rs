use serde::{Deserialize, Serialize};

use crate::coeffring::{FiniteField, GrElem};
use crate::error::{Error, Result};
use crate::linalg::FqMatrix;

/// How module vectors correspond to 2x2 matrices, if at all.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModuleKind {
    /// Basis `E11, E12, E21, E22`.
    Adjoint,
    /// Basis `H = E11 - E22, E12, E21`.
    TraceZero,
    Generic,
}

/// A finite `F_q[G]`-module for `G = <sigma, tau | sigma tau sigma^-1 = tau^v>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    field: FiniteField,
    sigma: FqMatrix,
    tau: FqMatrix,
    v: u64,
    kind: ModuleKind,
}

impl GModule {
    pub fn new(field: FiniteField, sigma: FqMatrix, tau: FqMatrix, v: u64) -> Result<Self> {
        GModule::with_kind(field, sigma, tau, v, ModuleKind::Generic)
    }

    fn with_kind(field: FiniteField, sigma: FqMatrix, tau: FqMatrix, v: u64, kind: ModuleKind) -> Result<Self> {
        let n = sigma.rows;
        if sigma.cols != n || tau.rows != n || tau.cols != n || n == 0 {
            return Err(Error::Mismatch("action matrices must be square of equal size".into()));
        }
        let si = sigma.inverse(&field)?;
        tau.inverse(&field)?;
        let lhs = sigma.mul(&field, &tau).mul(&field, &si);
        if lhs != tau.pow(&field, v) {
            return Err(Error::ModuleRelation);
        }
        Ok(GModule { field, sigma, tau, v, kind })
    }

    pub fn trivial(field: &FiniteField, dim: usize, v: u64) -> Result<Self> {
        let id = FqMatrix::identity(field, dim);
        GModule::new(field.clone(), id.clone(), id, v)
    }

    /// `Ad` or `Ad^0` of a residual representation given by the 2x2 images
    /// of `sigma` and `tau`, with the conjugation action.
    pub fn adjoint(field: &FiniteField, rho_sigma: &FqMatrix, rho_tau: &FqMatrix, v: u64, trace_zero: bool) -> Result<Self> {
        let kind = if trace_zero { ModuleKind::TraceZero } else { ModuleKind::Adjoint };
        let action = |g: &FqMatrix| -> Result<FqMatrix> {
            let gi = g.inverse(field)?;
            let dim = if trace_zero { 3 } else { 4 };
            let mut cols = Vec::with_capacity(dim);
            for i in 0..dim {
                let mut e = vec![field.zero(); dim];
                e[i] = field.one();
                let x = vec_to_matrix(field, kind, &e);
                let y = g.mul(field, &x).mul(field, &gi);
                cols.push(matrix_to_vec(field, kind, &y)?);
            }
            Ok(FqMatrix::from_rows(cols).transpose())
        };
        GModule::with_kind(field.clone(), action(rho_sigma)?, action(rho_tau)?, v, kind)
    }

    /// `Ad` or `Ad^0` of the trivial residual representation.
    pub fn trivial_adjoint(field: &FiniteField, v: u64, trace_zero: bool) -> Result<Self> {
        let id = FqMatrix::identity(field, 2);
        GModule::adjoint(field, &id, &id, v, trace_zero)
    }

    /// `M^* = Hom(M, mu_p)`: `g` acts by `chi(g) (A_g^-1)^T` with `chi` the
    /// mod-p cyclotomic character (`chi(sigma) = v`, `chi(tau) = 1`).
    pub fn dual(&self) -> Result<GModule> {
        let k = &self.field;
        let chi = k.from_int(self.v as i64);
        let s = self.sigma.inverse(k)?.transpose().scale(k, &chi);
        let t = self.tau.inverse(k)?.transpose();
        GModule::new(k.clone(), s, t, self.v)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.sigma.rows
    }

    pub fn sigma(&self) -> &FqMatrix {
        &self.sigma
    }

    pub fn tau(&self) -> &FqMatrix {
        &self.tau
    }

    pub fn v(&self) -> u64 {
        self.v
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    pub fn is_trivial(&self) -> bool {
        let id = FqMatrix::identity(&self.field, self.dim());
        self.sigma == id && self.tau == id
    }

    /// Module vector as a 2x2 matrix (row major), for adjoint kinds.
    pub fn to_matrix(&self, x: &[GrElem]) -> Result<FqMatrix> {
        if self.kind == ModuleKind::Generic {
            return Err(Error::Mismatch("module has no matrix realisation".into()));
        }
        Ok(vec_to_matrix(&self.field, self.kind, x))
    }

    pub fn from_matrix(&self, m: &FqMatrix) -> Result<Vec<GrElem>> {
        matrix_to_vec(&self.field, self.kind, m)
    }

    /// `dim M^G`.
    pub fn h0(&self) -> usize {
        let k = &self.field;
        let id = FqMatrix::identity(k, self.dim());
        let stacked = self.sigma.sub(k, &id).vstack(&self.tau.sub(k, &id));
        self.dim() - stacked.rank(k)
    }
}

fn vec_to_matrix(k: &FiniteField, kind: ModuleKind, x: &[GrElem]) -> FqMatrix {
    let data = match kind {
        ModuleKind::Adjoint => x.to_vec(),
        ModuleKind::TraceZero => vec![x[0].clone(), x[1].clone(), x[2].clone(), k.neg(&x[0])],
        ModuleKind::Generic => panic!("generic module has no matrix form"),
    };
    FqMatrix { rows: 2, cols: 2, data }
}

fn matrix_to_vec(k: &FiniteField, kind: ModuleKind, m: &FqMatrix) -> Result<Vec<GrElem>> {
    match kind {
        ModuleKind::Adjoint => Ok(m.data.clone()),
        ModuleKind::TraceZero => {
            if !k.is_zero(&k.add(&m.data[0], &m.data[3])) {
                return Err(Error::Mismatch("matrix is not trace zero".into()));
            }
            Ok(vec![m.data[0].clone(), m.data[1].clone(), m.data[2].clone()])
        }
        ModuleKind::Generic => Err(Error::Mismatch("module has no matrix realisation".into())),
    }
}
