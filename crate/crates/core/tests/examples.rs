//! Worked instances: small algebras whose tables are computed by hand or read off the definitions.

mod common;

use arrowlab::formula::{self, Formula};
use arrowlab::modified::{modification, sierpinski};
use arrowlab::morph::{self, compose, identity, AdjointSearch};
use arrowlab::nuclei;
use arrowlab::pca::{self, downset_arrow_algebra, downset_pca, per_arrow_algebra, Pca};
use arrowlab::tripos::{self, FinMap};
use arrowlab::{fixtures, ArrowAlgebra, Elem, Lattice, Law};
use common::{tuples, Naive};

fn frame(lat: Lattice) -> ArrowAlgebra {
    ArrowAlgebra::frame(lat).unwrap()
}

fn chain3() -> ArrowAlgebra {
    frame(Lattice::chain(3))
}

#[test]
fn frames_have_top_separator_and_pass() {
    for (name, a) in fixtures::frames() {
        assert_eq!(a.separator(), vec![a.top()], "{name}");
        assert!(a.verify(&name).passed(), "{name}");
        assert!(a.join_compatible().is_yes(), "{name}");
        assert!(a.is_modifiable(), "{name}");
    }
}

#[test]
fn application_and_abstraction_inequalities() {
    for (name, a) in fixtures::algebras() {
        for x in a.elements() {
            for y in a.elements() {
                if a.in_sep(x) && a.in_sep(y) {
                    assert!(a.in_sep(a.apply(x, y)), "{name}");
                }
                for z in a.elements() {
                    assert!(a.leq(a.apply(a.imp(x, a.imp(y, z)), x), a.imp(y, z)), "{name}");
                }
            }
            let f = |v: Elem| a.imp(v, x);
            let g = |v: Elem| a.imp(v, a.top());
            for v in a.elements() {
                assert!(a.leq(a.apply(a.abstraction(f), v), a.partial(f(v))), "{name}");
            }
            assert!(a.leq(a.abstraction(f), a.abstraction(g)), "{name}");
        }
        let shift = a.meet_all(a.elements().map(|x| a.imp(a.partial(x), x)));
        assert!(a.in_sep(shift), "{name}");
    }
}

#[test]
fn formula_checker_on_small_shapes() {
    let k = Formula::parse("p -> q -> p").unwrap();
    assert!(formula::taut_check(&k));
    for (name, a) in fixtures::algebras() {
        assert!(a.in_sep(formula::intuitionistic_instance(&a, &k)), "{name}");
    }
    let weak = Formula::parse("(p -> q) -> p").unwrap();
    assert!(!formula::taut_check(&weak));
    let m = formula::countermodel(&weak).unwrap();
    assert!(m.refutes(&weak));
    let peirce = Formula::parse("((p -> q) -> p) -> p").unwrap();
    let m = formula::countermodel(&peirce).unwrap();
    assert!(m.refutes(&peirce));
    assert!(m.worlds() >= 2, "a single world is classical");
}

#[test]
fn lambda_on_the_three_chain() {
    let a = chain3();
    let v = arrowlab::lambda::interpret(&a, &arrowlab::lambda::Term::parse(r"\x. \y. x").unwrap(), &Default::default()).unwrap();
    assert_eq!(v, a.top());
    let nv = Naive::of(&a);
    assert_eq!(v, nv.abstraction(|x| nv.abstraction(|_| x)));
}

#[test]
fn one_point_pca_and_its_algebras() {
    let p = Pca::trivial();
    assert_eq!(p.pap().app(0, 0), Some(0));
    let (dp, ds) = downset_pca(&p).unwrap();
    assert_eq!(dp.size(), 2);
    let empty = ds.lookup(0);
    let full = ds.lookup(1);
    assert_eq!(dp.pap().app(full, full), Some(full));
    assert_eq!(dp.pap().app(empty, full), Some(empty));
    assert!(dp.in_filter(full) && !dp.in_filter(empty));

    let d = downset_arrow_algebra(&p).unwrap();
    let c = d.combinators();
    assert_eq!(c.k, full);
    assert!(d.in_sep(c.a));
    assert_eq!(c.a, Naive::of(&d).a());
    assert_eq!(d.imp(full, empty), empty);
    assert_eq!(d.imp(empty, empty), full);
    let two = frame(Lattice::chain(2));
    let iso = arrowlab::gen::isomorphism(&d, &two).unwrap();
    assert_eq!(iso, vec![0, 1]);
    let per = per_arrow_algebra(&p).unwrap();
    assert_eq!(per.size(), 2);
    assert!(per.is_valid() && per.is_modifiable());
}

#[test]
fn two_element_tables_without_combinators() {
    let pap = pca::Pap::from_fn(arrowlab::Poset::discrete(vec!["0".into(), "1".into()]).unwrap(), |a, b| Some(if a == b { 0 } else { 1 })).unwrap();
    let filter = vec![true, true];
    let candidates: Vec<(Elem, Elem)> = tuples(2, 2).map(|t| (t[0], t[1])).collect();
    assert_eq!(candidates.len(), 4);
    assert!(candidates.iter().all(|&(k, s)| !(pap.is_k(k) && pap.is_s(s))));
    assert_eq!(pca::find_ks(&pap, &filter), None);
}

#[test]
fn bounded_first_model_is_not_a_verified_pca() {
    let pap = pca::bounded_k1(6, 40).unwrap();
    assert_eq!(pca::run_program(0, 5, 10), Some(5));
    assert_eq!(pca::run_program(4, 1, 10), None);
    let filter = vec![true; pap.size()];
    assert!(pca::find_ks(&pap, &filter).is_none());
    assert!(Pca::search(pap, filter).is_err());
}

#[test]
fn characteristic_map_of_the_separator() {
    for (name, a) in fixtures::algebras() {
        let (two, chi) = morph::chi(&a);
        for x in a.elements() {
            assert_eq!(chi[x] == two.top(), a.in_sep(x), "{name}");
        }
        assert!(morph::check_implicative(&a, &two, &chi, &name).unwrap().passed(), "{name}");
        let id = identity(&a);
        assert!(a.leq(a.combinators().i, morph::realizer(&a, &a, &id)), "{name}");
    }
}

#[test]
fn monotonized_nucleus_is_still_a_nucleus() {
    for (name, a) in fixtures::algebras() {
        for c in a.elements() {
            for (label, j) in nuclei::example_nuclei(&a, c) {
                let m = morph::monotonize(&a, &a, &j);
                let expected: Vec<Elem> = a.elements().map(|x| a.meet_all(a.elements().filter(|&y| a.leq(x, y)).map(|y| a.partial(j[y])))).collect();
                assert_eq!(m, expected);
                assert!(nuclei::is_nucleus(&a, &m), "{name} {label}");
                assert!(morph::morphism_equiv(&a, &m, &j), "{name} {label}");
            }
        }
    }
}

#[test]
fn map_to_the_one_point_algebra() {
    let one = frame(Lattice::chain(1));
    for (name, a) in fixtures::algebras() {
        let f = vec![0; a.size()];
        let h = vec![a.top()];
        let equivalence = morph::is_adjoint_pair(&a, &one, &f, &h) && morph::classify(&a, &one, &f, &h).equivalence();
        assert_eq!(equivalence, a.is_trivial(), "{name}");
    }
}

#[test]
fn frame_maps_density_and_regularity() {
    let two = frame(Lattice::chain(2));
    for (name, b) in fixtures::frames() {
        let f = vec![b.top(), b.top()];
        assert!(morph::is_implicative(&two, &b, &f), "{name}");
        assert_eq!(morph::preserves_finite_meets(&two, &b, &f) && morph::preserves_joins(&two, &b, &f), b.size() == 1, "{name}");
    }
    for (name, a, b, f, h) in fixtures::frame_pairs(5) {
        assert!(morph::is_adjoint_pair(&a, &b, &f, &h), "{name}");
        assert!(morph::is_regular(&a, &b, &f).is_yes(), "{name}");
    }
    let d = frame(Lattice::diamond());
    let mut seen = 0;
    for f in tuples(4, 4) {
        if morph::preserves_finite_meets(&d, &d, &f) && morph::is_monotone(&d, &d, &f) && !morph::preserves_joins(&d, &d, &f) {
            assert!(morph::is_implicative(&d, &d, &f), "{f:?}");
            assert_eq!(morph::find_right_adjoint(&d, &d, &f, morph::ADJOINT_SEARCH_CAP), AdjointSearch::NotFound, "{f:?}");
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn double_negation_on_the_three_chain() {
    let a = chain3();
    let (label, j) = nuclei::example_nuclei(&a, 0)[1].clone();
    assert_eq!(label, "(a -> 0) -> 0");
    assert_eq!(j, vec![0, 2, 2]);
    assert!(nuclei::check_nucleus(&a, &j, "dn").unwrap().passed());
    let q = nuclei::quotient(&a, &j).unwrap();
    assert_eq!(q.separator(), vec![1, 2]);
    let (_, surj, adj) = nuclei::quotient_surjection(&a, &j).unwrap();
    let c = morph::classify(&a, &q, &surj, &adj);
    assert!(c.surjection && !c.injection);

    let two = frame(Lattice::chain(2));
    let collapse = vec![0, 1, 1];
    let h = morph::frame_right_adjoint(&a, &two, &collapse);
    assert_eq!(h, vec![0, 2]);
    assert_eq!(nuclei::nucleus_from_adjoint(&a, &two, &collapse, &h).unwrap(), j);
    let rep = nuclei::check_factorization(&a, &two, &collapse, &h, "collapse").unwrap();
    assert!(rep.passed(), "{}", rep.to_text(false));
    assert!(rep.get(Law::FactorEquivalence).is_some());
}

#[test]
fn shift_quotient_is_an_equivalence() {
    for (name, a) in fixtures::algebras() {
        let j = nuclei::partial_nucleus(&a);
        let (q, surj, adj) = nuclei::quotient_surjection(&a, &j).unwrap();
        assert!(morph::classify(&a, &q, &surj, &adj).equivalence(), "{name}");
        assert!(nuclei::closure_roundtrip(&a, &j, &name).unwrap().passed(), "{name}");
        let (members, rep) = tripos::subtripos_qj(&a, &j, 1, &name).unwrap();
        assert!(rep.passed());
        assert_eq!(members.len(), a.size(), "{name}");
    }
}

#[test]
fn non_idempotent_inflation_fails_the_backward_direction() {
    let a = chain3();
    let j = vec![1, 2, 2];
    assert!(nuclei::monotone_inflations(&a).unwrap().contains(&j));
    let rep = nuclei::closure_roundtrip(&a, &j, "j").unwrap();
    let back = rep.get(Law::ClosureBackward).unwrap();
    assert!(!back.is_pass());
    assert_eq!(back.counterexample, vec!["0".to_string()]);
    assert_eq!(compose(&j, &j)[0], 2);
}

#[test]
fn frame_quantifiers_are_joins_and_meets() {
    for (name, a) in fixtures::frames().into_iter().filter(|(_, a)| a.size() <= 4) {
        for f in FinMap::all(2, 2).into_iter().chain(FinMap::all(3, 2)) {
            for alpha in tuples(a.size(), f.table.len()) {
                let ex = tripos::exists_along(&a, &f, &alpha).unwrap();
                let all = tripos::forall_along(&a, &f, &alpha).unwrap();
                for y in 0..f.dst {
                    assert_eq!(ex[y], a.join_all(f.fiber(y).map(|x| alpha[x])), "{name}");
                    assert_eq!(all[y], a.meet_all(f.fiber(y).map(|x| alpha[x])), "{name}");
                }
            }
        }
    }
}

#[test]
fn tripos_slices_on_small_fixtures() {
    let a = chain3();
    assert!(tripos::check_slice(&a, 3, 2, "chain3").passed());
    let d = downset_arrow_algebra(&Pca::trivial()).unwrap();
    for sq in tripos::PullbackSquare::all(2, 3) {
        assert!(tripos::check_beck_chevalley(&d, &sq, "d").passed(), "{}", sq.label());
    }
    for (name, a) in fixtures::algebras().into_iter().filter(|(_, a)| a.size() <= 4) {
        assert!(tripos::generic_element_check(&a, 3, &name).passed(), "{name}");
    }
}

#[test]
fn induced_transformations_of_nuclei() {
    for (name, a) in fixtures::algebras().into_iter().filter(|(_, a)| a.size() <= 4) {
        for c in a.elements() {
            for (_, j) in nuclei::example_nuclei(&a, c) {
                let t = tripos::induced_transformation(&j);
                for phi in tripos::predicate_grid(&a, 2) {
                    let jp = t(&phi);
                    assert!(tripos::entails(&a, &phi, &jp), "{name}");
                    assert!(tripos::equivalent(&a, &t(&jp), &jp), "{name}");
                }
                assert_eq!(tripos::recover_morphism(&a, |p| Some(t(p))).unwrap(), j);
            }
        }
    }
}

#[test]
fn sierpinski_algebra_of_the_two_element_frame() {
    let two = frame(Lattice::chain(2));
    let s = sierpinski(&two).unwrap();
    assert_eq!(s.alg.names(), ["(0,0)", "(0,1)", "(1,1)"]);
    assert_eq!(s.alg.separator(), vec![2]);
    let c3 = chain3();
    for x in 0..3 {
        for y in 0..3 {
            assert_eq!(s.alg.imp(x, y), c3.imp(x, y));
        }
    }
    assert_eq!(s.closed_nucleus(), vec![1, 1, 2]);
    assert_eq!(s.open_nucleus()[0], 0);
    let sum = |x, y| s.alg.sum(x, y);
    assert_eq!((0..3).map(|x| sum(x, s.bottom_top())).collect::<Vec<_>>(), vec![1, 1, 2]);

    let m = modification(&two).unwrap();
    let q = nuclei::quotient(&s.alg, &s.closed_nucleus()).unwrap();
    assert_eq!(m.alg, q);
    let (members, _) = tripos::subtripos_qj(&s.alg, &s.closed_nucleus(), 1, "c").unwrap();
    assert_eq!(members, vec![vec![1], vec![2]]);
}

#[test]
fn closed_nucleus_predicates_are_read_off_second_components() {
    for (name, base) in fixtures::algebras().into_iter().filter(|(_, a)| a.size() <= 5 && a.is_binary_implicative() && a.is_modifiable()) {
        let s = sierpinski(&base).unwrap();
        let c = s.closed_nucleus();
        let (members, _) = tripos::subtripos_qj(&s.alg, &c, 1, &name).unwrap();
        let expected: Vec<Vec<Elem>> = s.alg.elements().filter(|&x| base.in_sep(base.partial(s.pair(x).1))).map(|x| vec![x]).collect();
        assert_eq!(members, expected, "{name}");
        assert!(nuclei::closure_roundtrip(&s.alg, &c, &name).unwrap().passed(), "{name}");
        let p1 = s.pi1();
        assert!(base.leq(base.combinators().i, morph::realizer(&s.alg, &base, &p1)), "{name}");
    }
}

#[test]
fn non_distributing_implication_is_not_modifiable() {
    let lat = Lattice::diamond();
    let base = frame(lat.clone());
    assert!(base.binary_implicative_violation().is_none());
    let mut found = 0;
    for seed in 0..200 {
        let st = arrowlab::gen::random_structure(&lat, &mut common::rng(seed));
        for sep in arrowlab::gen::valid_separators(&st) {
            let alg = ArrowAlgebra::new(st.clone(), sep).unwrap();
            if let Some((x, y, z)) = alg.binary_implicative_violation() {
                assert_ne!(alg.imp(x, alg.meet(y, z)), alg.meet(alg.imp(x, y), alg.imp(x, z)));
                assert!(!alg.is_modifiable());
                assert!(sierpinski(&alg).is_err());
                found += 1;
            }
        }
    }
    assert!(found > 0);
}
