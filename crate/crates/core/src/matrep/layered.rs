//! Depth-first Hensel search for solutions in `m_R^n` of contracting systems.
//!
//! A system `F: m^n -> R^l` is contracting when changing an unknown by an
//! element of `m^j` changes every value by an element of `m^(j+1)`. Then
//! `F(w) mod m^(j+1)` only depends on `w mod m^j`, and solutions can be built
//! one graded layer `m^j / m^(j+1)` at a time.

use std::sync::Arc;

use crate::coeffring::{maximal_ideal_power, CoefficientRing, Elem, SubmoduleIdeal};

pub(crate) fn solve_contracting<F>(ring: &Arc<CoefficientRing>, unknowns: usize, f: F) -> Option<Vec<Elem>>
where
    F: Fn(&[Elem]) -> Vec<Elem>,
{
    let mut layers: Vec<SubmoduleIdeal> = vec![maximal_ideal_power(ring, 0)];
    loop {
        let k = layers.len() as u32;
        let next = maximal_ideal_power(ring, k);
        let done = next.is_zero();
        layers.push(next);
        if done {
            break;
        }
    }
    let start = vec![ring.zero(); unknowns];
    search(ring, &layers, 1, start, &f)
}

fn search<F>(
    ring: &Arc<CoefficientRing>,
    layers: &[SubmoduleIdeal],
    j: usize,
    w: Vec<Elem>,
    f: &F,
) -> Option<Vec<Elem>>
where
    F: Fn(&[Elem]) -> Vec<Elem>,
{
    // w is fixed modulo m^j; the values are then fixed modulo m^(j+1)
    let target = &layers[(j + 1).min(layers.len() - 1)];
    if !f(&w).iter().all(|x| target.contains(x)) {
        return None;
    }
    if j + 1 >= layers.len() - 1 {
        return Some(w);
    }
    let reps: Vec<Elem> = layers[j].coset_reps(&layers[j + 1]).collect();
    let n = w.len();
    let mut idx = vec![0usize; n];
    loop {
        let cand: Vec<Elem> = (0..n).map(|i| ring.add(&w[i], &reps[idx[i]])).collect();
        if let Some(sol) = search(ring, layers, j + 1, cand, f) {
            return Some(sol);
        }
        let mut i = 0;
        loop {
            if i == n {
                return None;
            }
            idx[i] += 1;
            if idx[i] < reps.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}
