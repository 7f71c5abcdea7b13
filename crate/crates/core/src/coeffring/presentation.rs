//! Text form of ring presentations and ring elements.
//!
//! ```text
//! presentation := item (';' item)*
//! item         := 'base' '=' witt | witt
//!               | 'vars' ['='] list
//!               | 'rel' ['='] list
//!               | 'modulus' ['='] '[' int (',' int)* ']'
//! witt         := 'witt' '(' p ',' f ',' N ')'
//! list         := '[' entries ']' | entries      (comma separated)
//! relation     := monomial | 'p' '-' monomial    (the latter is experimental)
//! monomial     := factor ('*' factor)*   with factor := name ['^' int] | '1'
//! ```
//!
//! The modulus lists coefficients from the constant term up and must be
//! monic. Printing always produces the bracketed `key = value` form.

use super::galois::{FiniteField, GaloisRing};
use super::ideal::in_category_c;
use super::ring::{CoefficientRing, Elem, Monomial};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Raw {
    p: u64,
    f: usize,
    level: u32,
    modulus: Option<Vec<u64>>,
    vars: Vec<String>,
    rels: Vec<RawRel>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum RawRel {
    Monomial(Monomial),
    /// `p - U^beta`
    Binomial(Vec<u32>),
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_int<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| perr(format!("expected integer, found {:?}", s.trim())))
}

fn split_list(s: &str) -> Vec<String> {
    let s = s.trim();
    let s = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')).unwrap_or(s);
    s.split(',')
        .map(|t| t.trim().to_string())
        .filter(|t| !t.is_empty())
        .collect()
}

fn parse_witt(s: &str) -> Result<(u64, usize, u32)> {
    let inner = s
        .trim()
        .strip_prefix("witt")
        .map(str::trim)
        .and_then(|t| t.strip_prefix('('))
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| perr(format!("expected witt(p, f, N), found {:?}", s.trim())))?;
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 3 {
        return Err(perr("witt takes three arguments"));
    }
    Ok((parse_int(parts[0])?, parse_int(parts[1])?, parse_int(parts[2])?))
}

fn parse_monomial(s: &str, vars: &[String]) -> Result<Monomial> {
    let mut m = Monomial::new(0, vec![0; vars.len()]);
    for factor in s.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(perr(format!("empty factor in {:?}", s)));
        }
        if factor == "1" {
            continue;
        }
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => (n.trim(), parse_int::<u32>(e)?),
            None => (factor, 1),
        };
        if name == "p" {
            m.p += exp;
        } else if let Some(i) = vars.iter().position(|v| v == name) {
            m.vars[i] += exp;
        } else {
            return Err(perr(format!("unknown variable {:?}", name)));
        }
    }
    Ok(m)
}

fn parse_raw(text: &str) -> Result<Raw> {
    let mut base = None;
    let mut modulus = None;
    let mut vars: Option<Vec<String>> = None;
    let mut rel_text: Option<String> = None;
    for item in text.split(';') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        if item.starts_with("witt") {
            base = Some(parse_witt(item)?);
            continue;
        }
        let (key, value) = match item.split_once(|c: char| c == '=' || c.is_whitespace()) {
            Some((k, v)) => (k.trim(), v.trim().trim_start_matches('=').trim()),
            None if item == "vars" || item == "rel" => (item, ""),
            None => return Err(perr(format!("cannot read {:?}", item))),
        };
        match key {
            "base" => base = Some(parse_witt(value)?),
            "vars" => vars = Some(split_list(value)),
            "rel" => rel_text = Some(value.to_string()),
            "modulus" => {
                modulus = Some(
                    split_list(value)
                        .iter()
                        .map(|c| parse_int(c))
                        .collect::<Result<Vec<u64>>>()?,
                )
            }
            other => return Err(perr(format!("unknown key {:?}", other))),
        }
    }
    let (p, f, level) = base.ok_or_else(|| perr("missing base = witt(p, f, N)"))?;
    let vars = vars.unwrap_or_default();
    let mut rels = Vec::new();
    for r in split_list(rel_text.as_deref().unwrap_or("")) {
        if let Some((lhs, rhs)) = r.split_once('-') {
            if lhs.trim() != "p" {
                return Err(perr(format!("only relations p - U^beta are supported, found {:?}", r)));
            }
            let m = parse_monomial(rhs, &vars)?;
            if m.p != 0 {
                return Err(perr(format!("right side of {:?} must be a variable monomial", r)));
            }
            rels.push(RawRel::Binomial(m.vars));
        } else {
            rels.push(RawRel::Monomial(parse_monomial(&r, &vars)?));
        }
    }
    Ok(Raw { p, f, level, modulus, vars, rels })
}

fn build_base(raw: &Raw) -> Result<GaloisRing> {
    let field = FiniteField::new(raw.p, raw.f, raw.modulus.as_deref())?;
    GaloisRing::new(&field, raw.level)
}

/// Parses a monomial presentation.
pub fn parse(text: &str) -> Result<CoefficientRing> {
    let raw = parse_raw(text)?;
    let mut rels = Vec::new();
    for r in &raw.rels {
        match r {
            RawRel::Monomial(m) => rels.push(m.clone()),
            RawRel::Binomial(_) => {
                return Err(perr(
                    "binomial relation p - U^beta only supported by parse_experimental",
                ))
            }
        }
    }
    CoefficientRing::new(build_base(&raw)?, raw.vars, rels)
}

/// Canonical text form; `parse(print(R)) == R`.
pub fn print(ring: &CoefficientRing) -> String {
    let base = ring.base();
    let mut out = format!(
        "base = witt({}, {}, {}); vars = [{}]; rel = [{}]",
        base.p(),
        base.degree(),
        base.level(),
        ring.vars().join(", "),
        ring.relations()
            .iter()
            .map(|m| m.display_with(ring.vars()))
            .collect::<Vec<_>>()
            .join(", ")
    );
    if base.degree() > 1 {
        out.push_str(&format!(
            "; modulus = [{}]",
            base.modulus().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
        ));
    }
    out
}

/// A presentation that may contain one relation `p - U^beta`.
#[derive(Clone, Debug)]
pub enum ExperimentalPresentation {
    Monomial(CoefficientRing),
    /// `p = U^beta` with `|beta| >= 2`; only category membership is answered.
    Binomial { beta: Vec<u32>, vars: Vec<String> },
}

impl ExperimentalPresentation {
    /// `p ∉ m_R^2` after rewriting the binomial relation.
    pub fn in_category_c(&self) -> bool {
        match self {
            ExperimentalPresentation::Monomial(r) => in_category_c(r),
            // p = U^beta lies in m^2 once |beta| >= 2
            ExperimentalPresentation::Binomial { .. } => false,
        }
    }
}

/// Like [`parse`], but accepts a single relation `p - U^beta`.
///
/// With `|beta| = 1` the variable is eliminated (replaced by `p`) and the
/// result is again a monomial presentation; with `|beta| >= 2` only
/// [`ExperimentalPresentation::in_category_c`] is available.
pub fn parse_experimental(text: &str) -> Result<ExperimentalPresentation> {
    let raw = parse_raw(text)?;
    let binomials: Vec<&Vec<u32>> = raw
        .rels
        .iter()
        .filter_map(|r| match r {
            RawRel::Binomial(b) => Some(b),
            _ => None,
        })
        .collect();
    match binomials.as_slice() {
        [] => Ok(ExperimentalPresentation::Monomial(parse(text)?)),
        [beta] => {
            let deg: u32 = beta.iter().sum();
            match deg {
                0 => Err(Error::ZeroRing),
                1 => {
                    let i = beta.iter().position(|&e| e == 1).unwrap();
                    let vars: Vec<String> = raw
                        .vars
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, v)| v.clone())
                        .collect();
                    let rels = raw
                        .rels
                        .iter()
                        .filter_map(|r| match r {
                            RawRel::Monomial(m) => {
                                let mut v = m.vars.clone();
                                let extra = v.remove(i);
                                Some(Monomial::new(m.p + extra, v))
                            }
                            RawRel::Binomial(_) => None,
                        })
                        .collect();
                    Ok(ExperimentalPresentation::Monomial(CoefficientRing::new(
                        build_base(&raw)?,
                        vars,
                        rels,
                    )?))
                }
                _ => Ok(ExperimentalPresentation::Binomial {
                    beta: (*beta).clone(),
                    vars: raw.vars,
                }),
            }
        }
        _ => Err(perr("at most one binomial relation is supported")),
    }
}

/// Parses `7 + 3*U - p*U^2 + [1,2]*U`; bracketed coefficients are Witt
/// vectors in the `t`-basis.
pub fn parse_elem(ring: &CoefficientRing, text: &str) -> Result<Elem> {
    let mut acc = ring.zero();
    let normalized = text.replace('-', "+-");
    for term in normalized.split('+') {
        let mut term = term.trim();
        if term.is_empty() {
            continue;
        }
        let negate = term.starts_with('-');
        if negate {
            term = term[1..].trim();
        }
        let (coeff, rest) = if term.starts_with('[') {
            let end = term.find(']').ok_or_else(|| perr("unclosed bracket"))?;
            let c = split_list(&term[..=end])
                .iter()
                .map(|c| parse_int::<i64>(c))
                .collect::<Result<Vec<_>>>()?;
            if c.len() != ring.base().degree() {
                return Err(perr("coefficient length must equal the residue degree"));
            }
            let m = ring.base().characteristic() as i64;
            let c: Vec<u64> = c.iter().map(|x| x.rem_euclid(m) as u64).collect();
            (c, term[end + 1..].trim().trim_start_matches('*').to_string())
        } else {
            let (head, tail) = term.split_once('*').unwrap_or((term, ""));
            match head.trim().parse::<i64>() {
                Ok(n) => (ring.base().from_int(n), tail.to_string()),
                Err(_) => (ring.base().one(), term.to_string()),
            }
        };
        let mono = if rest.trim().is_empty() {
            Monomial::new(0, vec![0; ring.vars().len()])
        } else {
            parse_monomial(&rest, ring.vars())?
        };
        let mut t = ring.term(&coeff, &mono);
        if negate {
            t = ring.neg(&t);
        }
        acc = ring.add(&acc, &t);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_canonical_text() {
        for s in [
            "base = witt(5, 1, 3); vars = []; rel = [p^3]",
            "base = witt(5, 1, 4); vars = [U]; rel = [U^3, p^4]",
            "base = witt(3, 1, 3); vars = [U1, U2]; rel = [U1^2, U2^2, p^3]",
            "base = witt(3, 2, 2); vars = [U]; rel = [U^2, p*U, p^2]; modulus = [1, 0, 1]",
        ] {
            let r = parse(s).unwrap();
            assert_eq!(print(&r), s);
            assert_eq!(parse(&print(&r)).unwrap(), r);
        }
    }

    #[test]
    fn short_form_accepted() {
        let a = parse("witt(5,1,3); vars U; rel p^3,U^3").unwrap();
        let b = parse("base = witt(5, 1, 3); vars = [U]; rel = [p^3, U^3]").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn element_text() {
        let r = parse("base = witt(5, 1, 3); vars = [U]; rel = [U^3]").unwrap();
        let x = parse_elem(&r, "7 + 3*U - p*U^2").unwrap();
        assert_eq!(r.fmt_elem(&x), "7 + 3*U + 120*U^2");
        assert_eq!(parse_elem(&r, &r.fmt_elem(&x)).unwrap(), x);
    }

    #[test]
    fn binomial_relation_category() {
        let e = parse_experimental("base = witt(5, 1, 3); vars = [U]; rel = [p - U^2, U^4]").unwrap();
        assert!(!e.in_category_c());
        let e = parse_experimental("base = witt(5, 1, 3); vars = [U]; rel = [p - U, U^2]").unwrap();
        assert!(e.in_category_c());
        assert!(parse("base = witt(5, 1, 3); vars = [U]; rel = [p - U^2, U^4]").is_err());
    }

    #[test]
    fn dual_numbers_excluded() {
        let r = parse("base = witt(5, 1, 1); vars = [U]; rel = [U^2]").unwrap();
        assert!(!in_category_c(&r));
    }
}
