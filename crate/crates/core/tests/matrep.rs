use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tamedef::coeffring::{maximal_ideal_power, parse, parse_elem, CoefficientRing, Elem};
use tamedef::matrep::{
    in_deform_class, strictly_equivalent, Conjugator, DeformClassSpec, Mat2, Mode, SearchConfig,
    TameRep, Variant,
};

fn ring(text: &str) -> Arc<CoefficientRing> {
    Arc::new(parse(text).unwrap())
}

fn cfg() -> SearchConfig {
    SearchConfig { bound: 5_000_000, shards: 1 }
}

fn random_in_m(r: &CoefficientRing, rng: &mut ChaCha8Rng) -> Elem {
    let m: Vec<Elem> = maximal_ideal_power(&Arc::new(r.clone()), 1).elements().collect();
    m[rng.gen_range(0..m.len())].clone()
}

fn random_conjugator(r: &CoefficientRing, rng: &mut ChaCha8Rng) -> Mat2 {
    let one = r.one();
    Mat2::new(
        r.add(&one, &random_in_m(r, rng)),
        random_in_m(r, rng),
        random_in_m(r, rng),
        r.add(&one, &random_in_m(r, rng)),
    )
}

#[test]
fn reflexive_with_identity_witness() {
    let r = ring("witt(5,1,2); vars; rel");
    let spec = DeformClassSpec::plain(Variant::D, 11);
    let rep = spec.normal_form(&r, &r.zero(), &r.from_int(5), None).unwrap();
    for mode in [Mode::Search, Mode::NormalForm] {
        let v = strictly_equivalent(&rep, &rep, mode, &cfg()).unwrap();
        assert!(v.holds);
        assert_eq!(v.witness.unwrap(), Mat2::identity(&r));
    }
}

#[test]
fn conjugates_are_equivalent() {
    let r = ring("witt(3,1,3); vars; rel");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let spec = DeformClassSpec::plain(Variant::D, 13);
    let rep = spec.normal_form(&r, &r.from_int(9), &r.from_int(3), None).unwrap();
    for _ in 0..10 {
        let a = random_conjugator(&r, &mut rng);
        let other = rep.conjugate(&a).unwrap();
        let v = strictly_equivalent(&rep, &other, Mode::Both, &cfg()).unwrap();
        assert!(v.holds);
        assert_eq!(rep.conjugate(&v.witness.unwrap()).unwrap(), other);
    }
}

#[test]
fn lower_left_p_cannot_be_cleared_mod_p2() {
    let r = ring("witt(5,1,2); vars; rel");
    let spec = DeformClassSpec::plain(Variant::D, 11);
    let u = spec.u(&r).unwrap();
    let nf = spec.normal_form(&r, &r.zero(), &r.zero(), None).unwrap();
    let sigma = Mat2::from_ints(&r, [11, 0, 5, 1]).scale(&r, &u);
    let bad = TameRep::new(r.clone(), 11, sigma, Mat2::identity(&r)).unwrap();
    let v = strictly_equivalent(&bad, &nf, Mode::Both, &cfg()).unwrap();
    assert!(!v.holds);
    assert!(!in_deform_class(&bad, &spec, Mode::Both, &cfg()).unwrap().holds);
}

#[test]
fn class_examples_mod_p3() {
    let r = ring("witt(5,1,3); vars; rel");
    let d = DeformClassSpec::plain(Variant::D, 11);
    let rep = d.normal_form(&r, &r.zero(), &r.from_int(5), None).unwrap();
    let member = |variant, rep: &TameRep| {
        in_deform_class(rep, &DeformClassSpec::plain(variant, 11), Mode::Both, &cfg())
            .unwrap()
            .holds
    };
    assert!(member(Variant::D, &rep));
    assert!(member(Variant::Ram, &rep));
    assert!(!member(Variant::Nr, &rep));

    let rep = d.normal_form(&r, &r.from_int(5), &r.from_int(25), None).unwrap();
    for variant in [Variant::D, Variant::Ram, Variant::Nr, Variant::Tilde] {
        assert!(!member(variant, &rep), "{variant}");
    }

    let z = r.from_int(6);
    let tilde = DeformClassSpec::plain(Variant::Tilde, 11);
    let rep = tilde.normal_form(&r, &r.zero(), &r.from_int(25), Some(&z)).unwrap();
    assert!(member(Variant::Tilde, &rep));
    assert!(!member(Variant::D, &rep));
}

#[test]
fn determinant_of_normal_form_is_kappa() {
    let r = ring("witt(5,1,4); vars; rel");
    for kappa in [1i64, 6, 11, 26] {
        let spec = DeformClassSpec::new(Variant::D, 11, kappa, Conjugator::Identity).unwrap();
        let rep = spec.normal_form(&r, &r.zero(), &r.zero(), None).unwrap();
        assert_eq!(rep.sigma().det(&r), r.from_int(kappa));
    }
}

#[test]
fn forbidden_conjugator_pairings() {
    assert!(DeformClassSpec::new(Variant::Nr, 11, 1, Conjugator::Swap).is_err());
    assert!(DeformClassSpec::new(Variant::Ram, 11, 1, Conjugator::LowerUnipotent).is_err());
    assert!(DeformClassSpec::new(Variant::Nr, 11, 1, Conjugator::LowerUnipotent).is_ok());
}

#[test]
fn transported_class_contains_transported_normal_form() {
    let r = ring("witt(5,1,3); vars; rel");
    for (variant, y) in [(Variant::Nr, 25), (Variant::Ram, 5)] {
        let spec = DeformClassSpec::transported(variant, 11).unwrap();
        let rep = spec
            .transported_normal_form(&r, &r.from_int(25), &r.from_int(y), None)
            .unwrap();
        let v = in_deform_class(&rep, &spec, Mode::Both, &cfg()).unwrap();
        assert!(v.holds);
        let plain = in_deform_class(&rep, &DeformClassSpec::plain(variant, 11), Mode::Both, &cfg());
        assert!(!plain.unwrap().holds);
    }
}

#[test]
fn equivalence_is_transitive_via_composed_witness() {
    let r = ring("witt(3,1,2); vars U; rel U^2");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let spec = DeformClassSpec::plain(Variant::D, 13);
    let y = parse_elem(&r, "3 + U").unwrap();
    let rep = spec.normal_form(&r, &r.zero(), &y, None).unwrap();
    let a = random_conjugator(&r, &mut rng);
    let b = random_conjugator(&r, &mut rng);
    let r1 = rep.conjugate(&a).unwrap();
    let r2 = r1.conjugate(&b).unwrap();
    let w1 = strictly_equivalent(&rep, &r1, Mode::NormalForm, &cfg()).unwrap().witness.unwrap();
    let w2 = strictly_equivalent(&r1, &r2, Mode::NormalForm, &cfg()).unwrap().witness.unwrap();
    let w = w2.mul(&r, &w1);
    assert_eq!(rep.conjugate(&w).unwrap(), r2);
    let back = strictly_equivalent(&r2, &rep, Mode::NormalForm, &cfg()).unwrap();
    assert!(back.holds);
}

#[test]
fn search_bound_is_enforced() {
    let r = ring("witt(5,1,3); vars; rel");
    let rep = TameRep::trivial(r, 11).unwrap();
    let tiny = SearchConfig { bound: 10, shards: 1 };
    assert!(strictly_equivalent(&rep, &rep, Mode::Search, &tiny).is_err());
    assert!(strictly_equivalent(&rep, &rep, Mode::NormalForm, &tiny).is_ok());
}

#[test]
fn shard_count_does_not_change_witness() {
    let r = ring("witt(3,1,3); vars; rel");
    let spec = DeformClassSpec::plain(Variant::D, 13);
    let rep = spec.normal_form(&r, &r.zero(), &r.from_int(3), None).unwrap();
    let other = rep.conjugate(&Mat2::from_ints(&r, [1, 3, 6, 4])).unwrap();
    let one = strictly_equivalent(&rep, &other, Mode::Search, &SearchConfig { bound: 1 << 20, shards: 1 }).unwrap();
    let four = strictly_equivalent(&rep, &other, Mode::Search, &SearchConfig { bound: 1 << 20, shards: 4 }).unwrap();
    assert_eq!(one, four);
}
