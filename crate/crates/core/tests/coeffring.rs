use std::sync::Arc;

use proptest::prelude::*;

use tamedef::coeffring::{
    filtration_nk, hensel_sqrt, maximal_ideal_power, parse, CoefficientRing, Elem, FiniteField, GaloisRing, Monomial,
    RingHom, SubmoduleIdeal,
};
use tamedef::matrep::{DeformClassSpec, Variant};

/// `O[[U_1..U_s]]/(p^n, U_i^e_i, extra)` over `O = W(F_p)`.
fn ring_strategy() -> impl Strategy<Value = Arc<CoefficientRing>> {
    (
        prop_oneof![Just(3u64), Just(5)],
        2u32..5,
        proptest::collection::vec(1u32..4, 0..3),
        any::<bool>(),
    )
        .prop_map(|(p, n, exps, mixed)| {
            let vars: Vec<String> = (0..exps.len()).map(|i| format!("U{i}")).collect();
            let mut rels: Vec<String> = vars.iter().zip(&exps).map(|(v, e)| format!("{v}^{e}")).collect();
            if mixed && !vars.is_empty() {
                rels.push(format!("p*{}", vars[0]));
            }
            let text = format!("witt({p},1,{n}); vars {}; rel {}", vars.join(","), rels.join(","));
            Arc::new(parse(&text).unwrap())
        })
}

fn elem(r: &CoefficientRing, seed: &[u64]) -> Elem {
    let len = r.zero().coeffs().len();
    r.elem_from_coeffs((0..len).map(|i| seed[i % seed.len()].wrapping_mul(i as u64 + 1)).collect())
        .unwrap()
}

fn seeds() -> impl Strategy<Value = Vec<u64>> {
    proptest::collection::vec(0u64..1000, 1..8)
}

proptest! {
    #[test]
    fn ring_axioms(r in ring_strategy(), a in seeds(), b in seeds(), c in seeds()) {
        let (a, b, c) = (elem(&r, &a), elem(&r, &b), elem(&r, &c));
        prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
        prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
        prop_assert_eq!(r.add(&a, &r.neg(&a)), r.zero());
        prop_assert_eq!(r.mul(&a, &r.one()), a.clone());
        if r.is_unit(&a) {
            prop_assert_eq!(r.mul(&a, &r.inv(&a).unwrap()), r.one());
        } else {
            prop_assert!(r.in_maximal_ideal(&a));
        }
    }

    #[test]
    fn filtration_inclusions(r in ring_strategy()) {
        let pr = SubmoduleIdeal::generated_by(r.clone(), &[Monomial::new(1, vec![0; r.vars().len()])]).unwrap();
        prop_assert_eq!(&filtration_nk(&r, 1).unwrap(), &pr);
        let gens: Vec<Elem> = std::iter::once(r.p_elem()).chain((0..r.vars().len()).map(|i| r.var(i))).collect();
        for k in 1..=r.length() + 1 {
            let nk = filtration_nk(&r, k).unwrap();
            let next = filtration_nk(&r, k + 1).unwrap();
            prop_assert!(next.is_subset_of(&nk));
            prop_assert!(nk.is_subset_of(&maximal_ideal_power(&r, k)));
            // m * n_k ⊆ n_{k+1}, which includes p * n_k
            for x in nk.fp_basis() {
                for g in &gens {
                    prop_assert!(next.contains(&r.mul(g, &x)));
                }
            }
        }
    }

    #[test]
    fn sqrt_at_every_level(p in prop_oneof![Just(3u64), Just(5), Just(7)], f in 1usize..3, w in seeds()) {
        let k = FiniteField::new(p, f, None).unwrap();
        for level in 1..=6 {
            let o = GaloisRing::new(&k, level).unwrap();
            let x = o.from_coeffs(&w.iter().take(f).map(|c| c + 1).collect::<Vec<_>>());
            prop_assume!(o.is_unit(&x));
            let u = o.mul(&x, &x);
            let s = hensel_sqrt(&o, &u).unwrap();
            prop_assert_eq!(o.mul(&s, &s), u.clone());
            // the canonical root is one of +-x
            prop_assert!(s == x || s == o.neg(&x));
        }
    }

    /// Substitutions are ring maps, so the image of `g * s` is
    /// `phi(g) * phi(s)` and ideals map into the ideal of the images.
    #[test]
    fn substitution_is_multiplicative(
        r in ring_strategy(),
        img in seeds(),
        a in seeds(),
        b in seeds(),
    ) {
        prop_assume!(!r.vars().is_empty());
        let images: Vec<Elem> = (0..r.vars().len())
            .map(|i| {
                let x = elem(&r, &img.iter().map(|c| c + i as u64).collect::<Vec<_>>());
                r.mul(&x, &r.var(i))
            })
            .collect();
        let Ok(phi) = RingHom::new(r.clone(), r.clone(), images) else { return Ok(()) };
        let (a, b) = (elem(&r, &a), elem(&r, &b));
        prop_assert_eq!(phi.apply(&r.mul(&a, &b)), r.mul(&phi.apply(&a), &phi.apply(&b)));
        prop_assert_eq!(phi.apply(&r.add(&a, &b)), r.add(&phi.apply(&a), &phi.apply(&b)));
        prop_assert_eq!(phi.apply(&r.one()), r.one());
    }

    /// Reduction maps class normal forms to class normal forms and keeps
    /// the tame relation.
    #[test]
    fn reduction_preserves_relation(level in 2u32..5, x in 0i64..200, y in 0i64..200) {
        let r = Arc::new(parse(&format!("witt(5,1,{level}); vars U; rel U^2")).unwrap());
        let spec = DeformClassSpec::plain(Variant::D, 11);
        let x = r.mul(&r.from_int(x), &r.from_int(25));
        let y = r.mul(&r.from_int(y), &r.var(0));
        let rep = spec.normal_form(&r, &x, &y, None).unwrap();
        let j = filtration_nk(&r, 2).unwrap();
        let (_, proj) = RingHom::projection(&j).unwrap();
        let image = rep.map(&proj).unwrap();
        prop_assert!(image.relation_holds());
        prop_assert_eq!(rep.reduce(&j).unwrap(), image);
    }
}

/// Schoolbook multiplication in `Z/p^n[U]/(U^e)`.
fn naive_mul(a: &[i64], b: &[i64], q: i64) -> Vec<i64> {
    let mut out = vec![0; a.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < a.len() {
                out[i + j] = (out[i + j] + x * y).rem_euclid(q);
            }
        }
    }
    out
}

#[test]
fn multiplication_matches_schoolbook() {
    let r = parse("witt(3,1,4); vars U; rel U^4").unwrap();
    let q = 81;
    let to_elem = |v: &[i64]| {
        (0..4u32).fold(r.zero(), |acc, i| {
            r.add(&acc, &r.mul(&r.from_int(v[i as usize]), &r.monomial(&Monomial::new(0, vec![i]))))
        })
    };
    let from_elem = |e: &Elem| -> Vec<i64> { (0..4u32).map(|i| r.coefficient(e, &[i])[0] as i64).collect() };
    let mut state = 7i64;
    for _ in 0..200 {
        let mut next = || {
            state = (state * 1103515245 + 12345).rem_euclid(1 << 31);
            state % q
        };
        let a: Vec<i64> = (0..4).map(|_| next()).collect();
        let b: Vec<i64> = (0..4).map(|_| next()).collect();
        assert_eq!(from_elem(&r.mul(&to_elem(&a), &to_elem(&b))), naive_mul(&a, &b, q));
    }
}

#[test]
fn graded_piece_dimensions() {
    let r = Arc::new(parse("witt(5,1,3); vars U; rel p^3,U^3").unwrap());
    let dims: Vec<usize> = (1..=4).map(|k| tamedef::coeffring::graded_piece(&r, k).unwrap().len()).collect();
    assert_eq!(dims, vec![1, 2, 2, 1]);
}
