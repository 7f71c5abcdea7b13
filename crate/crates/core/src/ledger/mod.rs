//! Dimension bookkeeping for Selmer and dual Selmer groups: Wiles' formula
//! over per-place records, tangent dimensions at `p` from the local case, and
//! a cross-check of trivial-prime cohomology against the module computations.
//!
//! Scenarios are TOML files. A `wiles` scenario has global `h0_global`,
//! `h0_global_dual` and one `[[place]]` table per place with `dim_L` and
//! `h0`; a `tangent` scenario names the local case at `p`; a
//! `trivial-prime` scenario names `(p, v, f)` for the cross-check.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coeffring::{is_prime, FiniteField};
use crate::cohomology::{h_dims, GModule};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModuleLabel {
    Ad,
    Ad0,
}

impl ModuleLabel {
    pub fn dim(self) -> i64 {
        match self {
            ModuleLabel::Ad => 4,
            ModuleLabel::Ad0 => 3,
        }
    }

    /// `h^0(G_R, M)` for an odd residual representation: diagonal matrices.
    pub fn h0_infinity(self) -> i64 {
        match self {
            ModuleLabel::Ad => 2,
            ModuleLabel::Ad0 => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlaceRole {
    P,
    Infinity,
    /// A prime where the residual representation is trivial.
    Trivial,
    Other,
}

/// Shape of the residual representation restricted to the decomposition
/// group at `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalCase {
    /// Sum of two characters.
    Split,
    Indecomposable,
}

impl FromStr for LocalCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "split" => Ok(LocalCase::Split),
            "indecomposable" => Ok(LocalCase::Indecomposable),
            _ => Err(Error::UnknownCase(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceRecord {
    pub label: String,
    #[serde(rename = "dim_L")]
    pub dim_l: i64,
    pub h0: i64,
    #[serde(default)]
    pub role: Option<PlaceRole>,
    #[serde(default)]
    pub case: Option<LocalCase>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelmerScenario {
    pub module: ModuleLabel,
    pub h0_global: i64,
    pub h0_global_dual: i64,
    #[serde(rename = "place", default)]
    pub places: Vec<PlaceRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WilesReport {
    pub difference: i64,
    /// `dim L_v - h^0(G_v, M)` per place, in file order.
    pub contributions: Vec<(String, i64)>,
}

fn is_infinity(p: &PlaceRecord) -> bool {
    p.role == Some(PlaceRole::Infinity) || matches!(p.label.as_str(), "inf" | "infinity" | "∞")
}

impl SelmerScenario {
    /// Checks record shapes and every local value that is determined by the
    /// role of the place.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Ledger(m));
        if self.h0_global < 0 || self.h0_global_dual < 0 {
            return bad("global h0 values must be nonnegative".into());
        }
        let inf: Vec<_> = self.places.iter().filter(|p| is_infinity(p)).collect();
        match inf.as_slice() {
            [] => return bad("missing infinite place".into()),
            [p] if p.dim_l != 0 => return bad("dim L at infinity must be 0".into()),
            [p] if p.h0 != self.module.h0_infinity() => {
                return bad(format!("h0 at infinity is {} for an odd representation", self.module.h0_infinity()))
            }
            [_] => {}
            _ => return bad("more than one infinite place".into()),
        }
        for p in &self.places {
            if p.dim_l < 0 || p.h0 < 0 {
                return bad(format!("place {}: dimensions must be nonnegative", p.label));
            }
            match (p.role, p.case) {
                (Some(PlaceRole::Trivial), _) if p.h0 != self.module.dim() => {
                    return bad(format!("place {}: h0 at a trivial prime is {}", p.label, self.module.dim()))
                }
                (Some(PlaceRole::P), Some(case)) => {
                    let t = tangent_dim_p(case);
                    let (h0, dim) = match self.module {
                        ModuleLabel::Ad => (t.h0_ad, t.dim_n_tilde),
                        ModuleLabel::Ad0 => (t.h0_ad0, t.h0_ad0 + 1),
                    };
                    if (p.h0, p.dim_l) != (h0, dim) {
                        return bad(format!(
                            "place {}: the {:?} case has (dim L, h0) = ({}, {})",
                            p.label, case, dim, h0
                        ));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// `h^0(M) - h^0(M^*) + sum_v (dim L_v - h^0(G_v, M))`.
pub fn wiles_difference(s: &SelmerScenario) -> Result<WilesReport> {
    s.validate()?;
    let contributions: Vec<(String, i64)> = s.places.iter().map(|p| (p.label.clone(), p.dim_l - p.h0)).collect();
    let difference = s.h0_global - s.h0_global_dual + contributions.iter().map(|c| c.1).sum::<i64>();
    Ok(WilesReport { difference, contributions })
}

/// Local dimensions at `p` for the ordinary problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TangentDims {
    pub h0_u: i64,
    pub h1_u: i64,
    pub h0_ad0: i64,
    pub h0_ad: i64,
    pub dim_n_tilde: i64,
    pub h0_u_tilde: i64,
    pub h1_u_tilde: i64,
}

/// `h^1(U) = 2 + h^0(U)`, `dim Ñ_p = 1 + h^1(U)`, and
/// `h^1(Ũ) = h^0(Ũ) + h^2(Ũ) + dim Ũ` with `h^2(Ũ) = 0`, `dim Ũ = 3`.
pub fn tangent_dim_p(case: LocalCase) -> TangentDims {
    let h0_u = match case {
        LocalCase::Split => 1,
        LocalCase::Indecomposable => 0,
    };
    let h1_u = 2 + h0_u;
    let h0_ad0 = h0_u;
    let h0_ad = h0_ad0 + 1;
    let h0_u_tilde = h0_ad;
    TangentDims {
        h0_u,
        h1_u,
        h0_ad0,
        h0_ad,
        dim_n_tilde: 1 + h1_u,
        h0_u_tilde,
        h1_u_tilde: euler_h1_at_p(h0_u_tilde, 0, 3).expect("nonnegative"),
    }
}

/// The case determined by `h^0(G_p, Ad^0)`.
pub fn tangent_dim_p_from_h0(h0_ad0: i64) -> Result<TangentDims> {
    match h0_ad0 {
        1 => Ok(tangent_dim_p(LocalCase::Split)),
        0 => Ok(tangent_dim_p(LocalCase::Indecomposable)),
        n => Err(Error::UnknownCase(format!("h0(G_p, Ad0) = {}", n))),
    }
}

/// Euler characteristic at `p`: `h^1 = h^0 + h^2 + dim M`.
pub fn euler_h1_at_p(h0: i64, h2: i64, dim: i64) -> Result<i64> {
    if h0 < 0 || h2 < 0 || dim < 0 {
        return Err(Error::Ledger("dimensions must be nonnegative".into()));
    }
    Ok(h0 + h2 + dim)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheckRow {
    pub p: u64,
    pub v: u64,
    pub f: usize,
    pub ad: (usize, usize, usize),
    pub ad0: (usize, usize, usize),
}

/// The trivial-prime table `(4,8,4)` for `Ad` and `(3,6,3)` for `Ad^0`.
pub const TRIVIAL_PRIME_AD: (usize, usize, usize) = (4, 8, 4);
pub const TRIVIAL_PRIME_AD0: (usize, usize, usize) = (3, 6, 3);

/// Recomputes the trivial-prime table from the cohomology modules.
pub fn fact32_crosscheck(configs: &[(u64, u64, usize)]) -> Result<Vec<CrossCheckRow>> {
    let mut rows = Vec::new();
    for &(p, v, f) in configs {
        if !is_prime(v) {
            return Err(Error::NotTrivialPrime(v, p));
        }
        let k = FiniteField::new(p, f, None)?;
        let ad = h_dims(&std::sync::Arc::new(GModule::trivial_adjoint(&k, v, false)?), false)?;
        let ad0 = h_dims(&std::sync::Arc::new(GModule::trivial_adjoint(&k, v, true)?), false)?;
        if ad != TRIVIAL_PRIME_AD || ad0 != TRIVIAL_PRIME_AD0 {
            return Err(Error::Mismatch(format!(
                "(p, v) = ({}, {}): computed {:?} and {:?}",
                p, v, ad, ad0
            )));
        }
        rows.push(CrossCheckRow { p, v, f, ad, ad0 });
    }
    Ok(rows)
}

/// Conditions on the character at `p` that the local computations assume;
/// they are asserted by the scenario author, not derived.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterFlags {
    pub not_cyclotomic: bool,
    pub not_inverse_cyclotomic: bool,
    pub nontrivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentExpect {
    pub h1_u: Option<i64>,
    pub dim_n_tilde: Option<i64>,
    pub h0_ad: Option<i64>,
    pub h1_u_tilde: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivialPrimeConfig {
    pub p: u64,
    pub v: u64,
    #[serde(default = "one")]
    pub f: usize,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScenarioBody {
    Wiles {
        #[serde(flatten)]
        scenario: SelmerScenario,
        expect_difference: i64,
        /// With a known dual Selmer dimension, the Selmer dimension follows.
        #[serde(default)]
        dual_selmer_dim: Option<i64>,
        #[serde(default)]
        expect_selmer_dim: Option<i64>,
    },
    Tangent {
        case: LocalCase,
        character: CharacterFlags,
        expect: TangentExpect,
    },
    TrivialPrime {
        config: Vec<TrivialPrimeConfig>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    /// Short description of the dimension statement being checked.
    pub claim: String,
    #[serde(flatten)]
    pub body: ScenarioBody,
}

impl fmt::Display for ModuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModuleLabel::Ad => "Ad",
            ModuleLabel::Ad0 => "Ad0",
        })
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioOutcome {
    pub claim: String,
    pub passed: bool,
    pub details: Vec<String>,
}

/// Evaluates a scenario against its stated expectations. Malformed data is an
/// error; a wrong value is a failed outcome.
pub fn run_scenario(s: &Scenario) -> Result<ScenarioOutcome> {
    let mut details = Vec::new();
    let passed = match &s.body {
        ScenarioBody::Wiles { scenario, expect_difference, dual_selmer_dim, expect_selmer_dim } => {
            let rep = wiles_difference(scenario)?;
            details.push(format!(
                "{}: h0 = {}, h0 dual = {}",
                scenario.module, scenario.h0_global, scenario.h0_global_dual
            ));
            for (label, c) in &rep.contributions {
                details.push(format!("{}: {:+}", label, c));
            }
            details.push(format!("difference = {} (expected {})", rep.difference, expect_difference));
            let mut ok = rep.difference == *expect_difference;
            if let Some(d) = dual_selmer_dim {
                let selmer = rep.difference + d;
                details.push(format!("selmer dimension = {} given dual dimension {}", selmer, d));
                ok &= expect_selmer_dim.map_or(true, |e| e == selmer);
            }
            ok
        }
        ScenarioBody::Tangent { case, character, expect } => {
            if !(character.not_cyclotomic && character.not_inverse_cyclotomic && character.nontrivial) {
                return Err(Error::Precondition(
                    "the character at p must avoid 1 and the cyclotomic character and its inverse".into(),
                ));
            }
            let t = tangent_dim_p(*case);
            details.push(format!(
                "h1(U) = {}, dim N~_p = {}, h0(Ad) = {}, h0(Ad0) = {}, h1(U~) = {}",
                t.h1_u, t.dim_n_tilde, t.h0_ad, t.h0_ad0, t.h1_u_tilde
            ));
            let identities = t.dim_n_tilde == 1 + t.h1_u
                && t.dim_n_tilde == 3 + t.h0_ad0
                && t.dim_n_tilde == 2 + t.h0_ad;
            details.push(format!("dim N~_p = 1 + h1(U) = 3 + h0(Ad0) = 2 + h0(Ad): {}", identities));
            let check = |e: Option<i64>, got: i64| e.map_or(true, |e| e == got);
            identities
                && check(expect.h1_u, t.h1_u)
                && check(expect.dim_n_tilde, t.dim_n_tilde)
                && check(expect.h0_ad, t.h0_ad)
                && check(expect.h1_u_tilde, t.h1_u_tilde)
        }
        ScenarioBody::TrivialPrime { config } => {
            let cfgs: Vec<_> = config.iter().map(|c| (c.p, c.v, c.f)).collect();
            match fact32_crosscheck(&cfgs) {
                Ok(rows) => {
                    for r in rows {
                        details.push(format!("(p, v, f) = ({}, {}, {}): Ad {:?}, Ad0 {:?}", r.p, r.v, r.f, r.ad, r.ad0));
                    }
                    true
                }
                Err(Error::Mismatch(m)) => {
                    details.push(m);
                    false
                }
                Err(e) => return Err(e),
            }
        }
    };
    Ok(ScenarioOutcome { claim: s.claim.clone(), passed, details })
}

/// The scenario files shipped with the crate, by file name.
pub fn golden_scenarios() -> Vec<(&'static str, &'static str)> {
    vec![
        ("selmer_difference.toml", include_str!("../../../../scenarios/selmer_difference.toml")),
        ("selmer_difference_aux.toml", include_str!("../../../../scenarios/selmer_difference_aux.toml")),
        ("balanced_ad0.toml", include_str!("../../../../scenarios/balanced_ad0.toml")),
        ("dual_selmer_vanishing.toml", include_str!("../../../../scenarios/dual_selmer_vanishing.toml")),
        ("tangent_split.toml", include_str!("../../../../scenarios/tangent_split.toml")),
        ("tangent_indecomposable.toml", include_str!("../../../../scenarios/tangent_indecomposable.toml")),
        ("trivial_prime_table.toml", include_str!("../../../../scenarios/trivial_prime_table.toml")),
    ]
}
