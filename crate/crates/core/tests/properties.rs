mod common;

use arrowlab::fixtures;
use arrowlab::gen::random_structure;
use arrowlab::lambda::{self, Term};
use arrowlab::lattice::mask_members;
use arrowlab::modified::{sierpinski, Sierpinski};
use arrowlab::morph::{self, compose, identity, AdjointSearch};
use arrowlab::nuclei;
use arrowlab::pca::{self, downset_arrow_algebra, downset_pca, Downsets, Pca};
use arrowlab::tripos::{self, FinMap};
use arrowlab::{ArrowAlgebra, ArrowStructure, Elem, Lattice};
use common::{random_alg, rng, tuples};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn arb_alg() -> impl Strategy<Value = ArrowAlgebra> {
    (0usize..6, any::<u64>()).prop_map(|(pick, seed)| random_alg(4, pick, seed))
}

fn arb_frame() -> impl Strategy<Value = ArrowAlgebra> {
    (0usize..7).prop_map(|i| fixtures::frames().swap_remove(i).1)
}

fn sep_elem(alg: &ArrowAlgebra, i: usize) -> Elem {
    let s = alg.separator();
    s[i % s.len()]
}

/// A random element equivalent to `x` under entailment both ways.
fn equivalent_to(alg: &ArrowAlgebra, x: Elem, pick: usize) -> Elem {
    let class: Vec<Elem> = alg.elements().filter(|&y| alg.equivalent(x, y)).collect();
    class[pick % class.len()]
}

fn modifiable_alg() -> impl Strategy<Value = ArrowAlgebra> {
    arb_alg().prop_filter("modifiable", |a| a.is_binary_implicative() && a.is_modifiable())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn variance_is_enforced_at_construction(n in 1usize..4, table in proptest::collection::vec(0usize..4, 16)) {
        let lat = Lattice::chain(n);
        let imp: Vec<Elem> = table.iter().take(n * n).map(|&x| x % n).collect();
        let variant = (0..n).all(|a| (0..n).all(|b| (0..n).all(|a2| (0..n).all(|b2| {
            !(a2 <= a && b <= b2) || imp[a * n + b] <= imp[a2 * n + b2]
        }))));
        prop_assert_eq!(ArrowStructure::new(lat, imp).is_ok(), variant);
    }

    #[test]
    fn generated_algebras_are_valid(alg in arb_alg()) {
        prop_assert!(alg.verify("random").passed());
        let c = alg.combinators();
        prop_assert!(alg.in_sep(c.i) && alg.in_sep(c.b));
    }

    #[test]
    fn indexed_modus_ponens(alg in arb_alg(), fam in proptest::collection::vec((0usize..64, 0usize..64, 0usize..64), 1..5)) {
        let n = alg.size();
        let fam: Vec<(Elem, Elem, Elem)> = fam.iter().map(|&(x, y, z)| (x % n, y % n, z % n)).collect();
        let hyp = alg.meet_all(fam.iter().map(|&(x, y, z)| alg.imp(x, alg.imp(y, z))));
        let xs = alg.meet_all(fam.iter().map(|&(x, _, _)| x));
        if alg.in_sep(hyp) && alg.in_sep(xs) {
            prop_assert!(alg.in_sep(alg.meet_all(fam.iter().map(|&(_, y, z)| alg.imp(y, z)))));
        }
    }

    #[test]
    fn entailment_is_a_heyting_preorder(alg in arb_alg()) {
        let els: Vec<Elem> = alg.elements().collect();
        let top = alg.top();
        for &a in &els {
            prop_assert!(alg.entails(a, a));
            prop_assert_eq!(alg.in_sep(a), alg.entails(top, a));
            for &b in &els {
                if alg.leq(a, b) { prop_assert!(alg.entails(a, b)); }
                let p = alg.product(a, b);
                let s = alg.sum(a, b);
                prop_assert!(alg.entails(p, a) && alg.entails(p, b));
                prop_assert!(alg.entails(a, s) && alg.entails(b, s));
                for &c in &els {
                    if alg.entails(a, b) && alg.entails(b, c) { prop_assert!(alg.entails(a, c)); }
                    prop_assert_eq!(alg.entails(c, a) && alg.entails(c, b), alg.entails(c, p));
                    prop_assert_eq!(alg.entails(a, c) && alg.entails(b, c), alg.entails(s, c));
                    prop_assert_eq!(alg.entails(alg.product(c, a), b), alg.entails(c, alg.imp(a, b)));
                }
            }
        }
    }

    #[test]
    fn frame_entailment_is_the_order(alg in arb_frame()) {
        for a in alg.elements() {
            prop_assert_eq!(alg.partial(a), a);
            for b in alg.elements() {
                prop_assert_eq!(alg.entails(a, b), alg.leq(a, b));
            }
        }
    }

    #[test]
    fn alpha_equivalent_terms_agree(alg in arb_alg(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let consts: Vec<String> = alg.names().to_vec();
        let t = lambda::random_term(&mut r, 8, &consts).close();
        let mut fresh = 0;
        let renamed = t.rename_bound(&mut fresh);
        let env = BTreeMap::new();
        prop_assert_eq!(lambda::interpret(&alg, &t, &env).unwrap(), lambda::interpret(&alg, &renamed, &env).unwrap());
    }

    #[test]
    fn two_evaluators_agree(alg in arb_alg(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let consts: Vec<String> = alg.names().to_vec();
        let t = lambda::random_term(&mut r, 6, &consts);
        let env: BTreeMap<String, Elem> = t.free_vars().into_iter().enumerate().map(|(i, x)| (x, (i * 7 + seed as usize) % alg.size())).collect();
        prop_assert_eq!(lambda::interpret(&alg, &t, &env).unwrap(), lambda::interpret_named(&alg, &t, &env).unwrap());
    }

    #[test]
    fn application_interprets_apply(alg in arb_alg(), x in 0usize..16, y in 0usize..16) {
        let (x, y) = (x % alg.size(), y % alg.size());
        let t = Term::app(Term::var("m"), Term::var("n"));
        let env = BTreeMap::from([("m".to_string(), x), ("n".to_string(), y)]);
        prop_assert_eq!(lambda::interpret(&alg, &t, &env).unwrap(), alg.apply(x, y));
    }

    #[test]
    fn separator_closure_of_terms(alg in arb_alg(), seed in any::<u64>(), picks in proptest::collection::vec(0usize..64, 4)) {
        let mut r = rng(seed);
        let consts: Vec<String> = alg.separator().iter().map(|&s| alg.name(s).to_string()).collect();
        let t = lambda::random_term(&mut r, 8, &consts);
        let env: BTreeMap<String, Elem> = t.free_vars().into_iter().zip(&picks).map(|(x, &p)| (x, sep_elem(&alg, p))).collect();
        prop_assert!(lambda::check_separator_closure(&alg, "p", &t, &env).unwrap().is_pass());
    }

    #[test]
    fn implicative_maps_stay_implicative_under_equivalence(a in arb_alg(), b in arb_alg(), code in any::<u64>(), picks in proptest::collection::vec(0usize..16, 5)) {
        let f: Vec<Elem> = (0..a.size()).map(|i| (code as usize >> (3 * i)) % b.size()).collect();
        prop_assume!(morph::is_implicative(&a, &b, &f));
        let g: Vec<Elem> = f.iter().zip(&picks).map(|(&y, &p)| equivalent_to(&b, y, p)).collect();
        prop_assert!(morph::is_implicative(&a, &b, &g));
        prop_assert!(morph::morphism_equiv(&b, &f, &g));
        prop_assert!(morph::check_cartesian(&a, &b, &f, "f").is_pass());
        prop_assert!(morph::morphism_equiv(&b, &morph::monotonize(&a, &b, &f), &f));
    }

    #[test]
    fn found_adjoints_are_unique_up_to_equivalence(a in arb_alg(), b in arb_alg(), code in any::<u64>()) {
        prop_assume!(a.size() <= 3 && b.size() <= 3);
        let f: Vec<Elem> = (0..a.size()).map(|i| (code as usize >> (3 * i)) % b.size()).collect();
        prop_assume!(morph::is_implicative(&a, &b, &f));
        if let AdjointSearch::Found(h) = morph::find_right_adjoint(&a, &b, &f, morph::ADJOINT_SEARCH_CAP) {
            for h2 in tuples(a.size(), b.size()).filter(|h2| morph::is_adjoint_pair(&a, &b, &f, h2)) {
                prop_assert!(morph::morphism_equiv(&a, &h, &h2));
            }
        }
    }

    #[test]
    fn quotient_entailment_is_shifted(alg in arb_alg(), c in 0usize..16, which in 0usize..3) {
        let c = c % alg.size();
        let (_, j) = nuclei::example_nuclei(&alg, c)[which].clone();
        prop_assert!(nuclei::is_nucleus(&alg, &j));
        let q = nuclei::quotient(&alg, &j).unwrap();
        prop_assert!(q.is_valid());
        for a in alg.elements() {
            if alg.in_sep(a) { prop_assert!(q.in_sep(a)); }
            for b in alg.elements() {
                prop_assert_eq!(q.entails(a, b), alg.entails(a, j[b]));
            }
        }
    }

    #[test]
    fn predicate_order_is_pointwise_heyting(alg in arb_alg(), n in 0usize..3, seed in any::<u64>()) {
        let grid = tripos::predicate_grid(&alg, n);
        let pick = |k: u64| &grid[(seed.rotate_left(k as u32) as usize) % grid.len()];
        let (phi, psi, chi) = (pick(0), pick(13), pick(29));
        if tripos::entails(&alg, phi, psi) {
            prop_assert!(phi.iter().zip(psi).all(|(&x, &y)| alg.entails(x, y)));
        }
        prop_assert!(tripos::entails(&alg, phi, phi));
        let prod = tripos::product(&alg, phi, psi);
        prop_assert!(tripos::entails(&alg, &prod, phi) && tripos::entails(&alg, &prod, psi));
        prop_assert_eq!(
            tripos::entails(&alg, &tripos::product(&alg, chi, phi), psi),
            tripos::entails(&alg, chi, &tripos::implication(&alg, phi, psi))
        );
        prop_assert!(tripos::entails(&alg, phi, &tripos::sum(&alg, phi, psi)));
    }

    #[test]
    fn frame_predicates_are_pointwise(alg in arb_frame(), n in 0usize..3, seed in any::<u64>()) {
        let grid = tripos::predicate_grid(&alg, n);
        let phi = &grid[seed as usize % grid.len()];
        let psi = &grid[(seed >> 20) as usize % grid.len()];
        prop_assert_eq!(tripos::entails(&alg, phi, psi), phi.iter().zip(psi).all(|(&x, &y)| alg.leq(x, y)));
    }

    #[test]
    fn reindexing_is_functorial(alg in arb_alg(), f in proptest::collection::vec(0usize..3, 0..4), g in proptest::collection::vec(0usize..3, 3), beta in proptest::collection::vec(0usize..16, 3)) {
        let f = FinMap::new(3, f).unwrap();
        let g = FinMap::new(3, g).unwrap();
        let beta: Vec<Elem> = beta.iter().map(|&b| b % alg.size()).collect();
        let gf = g.after(&f).unwrap();
        prop_assert_eq!(tripos::reindex(&gf, &beta), tripos::reindex(&f, &tripos::reindex(&g, &beta)));
        let alpha = tripos::reindex(&f, &beta);
        let lhs = tripos::exists_along(&alg, &gf, &alpha).unwrap();
        let rhs = tripos::exists_along(&alg, &g, &tripos::exists_along(&alg, &f, &alpha).unwrap()).unwrap();
        prop_assert!(tripos::equivalent(&alg, &lhs, &rhs));
        let lhs = tripos::forall_along(&alg, &gf, &alpha).unwrap();
        let rhs = tripos::forall_along(&alg, &g, &tripos::forall_along(&alg, &f, &alpha).unwrap()).unwrap();
        prop_assert!(tripos::equivalent(&alg, &lhs, &rhs));
    }

    #[test]
    fn subtripos_order_agrees_with_quotient(alg in arb_alg(), c in 0usize..16, n in 0usize..3) {
        let j = nuclei::example_nuclei(&alg, c % alg.size())[0].1.clone();
        let q = nuclei::quotient(&alg, &j).unwrap();
        let grid = tripos::predicate_grid(&alg, n);
        for phi in grid.iter().take(12) {
            for psi in grid.iter().rev().take(12) {
                let jpsi: Vec<Elem> = psi.iter().map(|&x| j[x]).collect();
                prop_assert_eq!(tripos::entails(&q, phi, psi), tripos::entails(&alg, phi, &jpsi));
            }
        }
    }

    #[test]
    fn sierpinski_second_components(base in modifiable_alg()) {
        let s: Sierpinski = sierpinski(&base).unwrap();
        let al = &s.alg;
        for x in al.elements() {
            for y in al.elements() {
                let (_, x1) = s.pair(x);
                let (_, y1) = s.pair(y);
                prop_assert_eq!(s.pair(al.sum(x, y)).1, base.sum(x1, y1));
                if al.entails(x, y) { prop_assert!(base.entails(x1, y1)); }
            }
        }
        let o = s.open_nucleus();
        let dp = compose(&s.delta(), &s.pi1());
        prop_assert!(morph::morphism_equiv(al, &o, &dp));
    }
}

/// Kleisli composite of maps into downsets.
fn kleisli(f: &[u64], g: &[u64]) -> Vec<u64> {
    f.iter().map(|&m| mask_members(m).fold(0u64, |acc, b| acc | g[b])).collect()
}

fn downset_maps(a: &Pca, b: &Pca) -> Vec<Vec<u64>> {
    let db = Downsets::of(b.poset()).unwrap();
    tuples(db.masks.len(), a.size()).map(|t| t.iter().map(|&i| db.masks[i]).collect()).collect()
}

#[test]
fn tilde_is_functorial() {
    let pcas = fixtures::pcas();
    let mut composites = 0;
    for (_, a) in &pcas {
        for (_, b) in &pcas {
            for (_, c) in &pcas {
                let dc = downset_arrow_algebra(c).unwrap();
                let fs: Vec<Vec<u64>> = downset_maps(a, b).into_iter().filter(|f| pca::check_partial_morphism(a, b, f, "f").unwrap().passed()).collect();
                let gs: Vec<Vec<u64>> = downset_maps(b, c).into_iter().filter(|g| pca::check_partial_morphism(b, c, g, "g").unwrap().passed()).collect();
                for f in &fs {
                    for g in &gs {
                        let whole = pca::tilde(a, c, &kleisli(f, g)).unwrap();
                        let parts = compose(&pca::tilde(b, c, g).unwrap(), &pca::tilde(a, b, f).unwrap());
                        assert!(morph::morphism_equiv(&dc, &whole, &parts));
                        composites += 1;
                    }
                }
            }
        }
    }
    assert!(composites > 10, "{composites}");
}

#[test]
fn implicative_maps_of_downset_algebras_are_pca_morphisms() {
    let pcas = fixtures::pcas();
    let mut seen = 0;
    for (_, a) in &pcas {
        for (_, b) in &pcas {
            let (da_pca, _) = downset_pca(a).unwrap();
            let (db_pca, _) = downset_pca(b).unwrap();
            let (da, db) = (downset_arrow_algebra(a).unwrap(), downset_arrow_algebra(b).unwrap());
            assert_eq!(da.names(), da_pca.elements().map(|x| da_pca.name(x).to_string()).collect::<Vec<_>>());
            for f in tuples(db.size(), da.size()).filter(|f| morph::is_implicative(&da, &db, f)) {
                assert!(pca::pca_morphism_check(&da_pca, &db_pca, &f, "f").unwrap().passed(), "{f:?}");
                seen += 1;
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn identity_and_nuclei_are_implicative() {
    for (name, a) in fixtures::algebras() {
        assert!(morph::is_implicative(&a, &a, &identity(&a)), "{name}");
        assert!(morph::is_implicative(&a, &a, &nuclei::partial_nucleus(&a)), "{name}");
        for c in a.elements() {
            for (label, j) in nuclei::example_nuclei(&a, c) {
                assert!(morph::is_implicative(&a, &a, &j), "{name} {label}");
            }
        }
    }
}

#[test]
fn random_structures_with_every_separator_are_checked() {
    let lat = Lattice::diamond();
    for seed in 0..20 {
        let st = random_structure(&lat, &mut rng(seed));
        for sep in arrowlab::gen::valid_separators(&st) {
            assert!(ArrowAlgebra::new(st.clone(), sep).unwrap().is_valid());
        }
    }
}
