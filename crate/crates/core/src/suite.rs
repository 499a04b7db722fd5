//! Law families run over the shipped corpus and seeded random instances.

use crate::algebra::ArrowAlgebra;
use crate::fixtures;
use crate::gen;
use crate::lambda::random_closure_sweep;
use crate::lattice::{Elem, Lattice};
use crate::logic;
use crate::modified::{check_lift, check_modified_lift, check_pseudofunctor, modification, sierpinski, Modified};
use crate::morph::{self, find_right_adjoint, find_right_adjoint_oracle, is_regular, regular_oracle, uniform_condition_oracle, ADJOINT_SEARCH_CAP};
use crate::nuclei::{check_factorization, check_nucleus, check_quotient, check_quotient_surjection, closure_roundtrip, example_nuclei, partial_nucleus};
use crate::pca::{bracket_templates, check_bracket, check_derived, downset_arrow_algebra, enumerate_pcas, Pca};
use crate::report::{Finding, Law, Status, VerificationReport};
use crate::tripos;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random λ-terms per algebra.
    pub lambda_terms: usize,
    pub term_size: usize,
    /// Largest index set in tripos checks.
    pub max_index: usize,
    /// Largest base of the pullback squares.
    pub max_w: usize,
    /// Random algebras per small lattice.
    pub random_algebras: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, lambda_terms: 200, term_size: 8, max_index: 3, max_w: 2, random_algebras: 2 }
    }
}

impl SuiteConfig {
    /// Applies a `key=value` cap override.
    pub fn set_cap(&mut self, spec: &str) -> crate::Result<()> {
        let (k, v) = spec.split_once('=').ok_or_else(|| crate::Error::Input(format!("cap `{spec}` is not key=value")))?;
        let v: usize = v.trim().parse().map_err(|_| crate::Error::Input(format!("cap value `{v}` is not a number")))?;
        match k.trim() {
            "lambda-terms" => self.lambda_terms = v,
            "term-size" => self.term_size = v,
            "max-index" => self.max_index = v,
            "max-w" => self.max_w = v,
            "random" => self.random_algebras = v,
            other => return Err(crate::Error::Input(format!("unknown cap `{other}`"))),
        }
        Ok(())
    }

    fn rng(&self, salt: &str) -> ChaCha8Rng {
        let h = salt.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
        ChaCha8Rng::seed_from_u64(self.seed ^ h)
    }
}

/// Seeded random algebras on every lattice with at most `max` elements.
pub fn random_algebras(cfg: &SuiteConfig, max: usize) -> Vec<(String, ArrowAlgebra)> {
    let mut rng = cfg.rng("random-algebras");
    let mut out = Vec::new();
    for (li, lat) in gen::small_lattices(max).iter().enumerate() {
        for k in 0..cfg.random_algebras {
            out.push((format!("random-{li}.{k}"), gen::random_algebra(lat, &mut rng)));
        }
    }
    out
}

fn corpus(cfg: &SuiteConfig) -> Vec<(String, ArrowAlgebra)> {
    let mut out = fixtures::algebras();
    out.extend(random_algebras(cfg, 4));
    out
}

fn collapse(subject: &str, rep: VerificationReport, law: Law) -> Finding {
    match rep.first_failure() {
        None if rep.status() == Status::Pass => Finding::pass(subject, law),
        None => rep.findings.into_iter().find(|f| f.status == Status::Inconclusive).expect("inconclusive finding"),
        Some(f) => Finding::fail(subject, law).counterexample(f.counterexample.clone()).note(format!("{}: {}", f.law, f.note)),
    }
}

/// Separator laws, frame collapse and the logical operations on every frame.
pub fn frames_family(_cfg: &SuiteConfig) -> VerificationReport {
    let reps: Vec<VerificationReport> = fixtures::frames()
        .into_par_iter()
        .map(|(name, a)| {
            let mut r = a.verify(&name);
            r.push(logic::check_frame_collapse(&a, &name));
            r.extend(logic::check_all(&a, &name));
            r
        })
        .collect();
    reps.into_iter().collect()
}

/// Fast algorithms against brute-force oracles on carriers of at most 3 elements.
pub fn oracle_family(cfg: &SuiteConfig) -> VerificationReport {
    let mut pool: Vec<(String, ArrowAlgebra)> = fixtures::frames().into_iter().filter(|(_, a)| a.size() <= 3).collect();
    let mut rng = cfg.rng("oracles");
    for (li, lat) in gen::small_lattices(3).iter().enumerate() {
        for k in 0..cfg.random_algebras.max(1) * 2 {
            pool.push((format!("random-{li}.{k}"), gen::random_algebra(lat, &mut rng)));
            let st = gen::random_structure(lat, &mut rng);
            pool.push((format!("structure-{li}.{k}"), ArrowAlgebra::new(st.clone(), vec![true; st.size()]).expect("full separator")));
        }
    }
    let mut r = VerificationReport::new();
    let a_bad = pool.iter().find(|(_, a)| a.combinators().a != a.structure().combinator_a_oracle());
    r.push(match a_bad {
        None => Finding::pass("oracle.combinator-a", Law::OracleAgreement).witness([format!("{} structures", pool.len())]),
        Some((n, _)) => Finding::fail("oracle.combinator-a", Law::OracleAgreement).counterexample([n.clone()]),
    });
    let pairs: Vec<(usize, usize)> = (0..pool.len()).flat_map(|i| (0..pool.len()).map(move |j| (i, j))).collect();
    // per pair: first disagreement for (uniform, adjoint, regular), plus the instance count
    let results: Vec<([Option<String>; 3], usize)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (na, a) = &pool[i];
            let (nb, b) = &pool[j];
            let mut bad: [Option<String>; 3] = [None, None, None];
            let maps = morph_tables(a.size(), b.size());
            for f in &maps {
                let label = || format!("{na}->{nb} {:?}", f);
                let rep = morph::check_implicative(a, b, f, "").expect("valid table");
                if bad[0].is_none() && rep.law_passed(Law::ImplUniform) != uniform_condition_oracle(a, b, f) {
                    bad[0] = Some(label());
                }
                if bad[1].is_none() && find_right_adjoint(a, b, f, ADJOINT_SEARCH_CAP).found().is_some() != find_right_adjoint_oracle(a, b, f).is_some() {
                    bad[1] = Some(label());
                }
                if bad[2].is_none() && is_regular(a, b, f).is_yes() != regular_oracle(a, b, f, 3) {
                    bad[2] = Some(label());
                }
            }
            (bad, maps.len())
        })
        .collect();
    let instances: usize = results.iter().map(|r| r.1).sum();
    for (k, subject) in ["oracle.uniform", "oracle.adjoint", "oracle.regular"].iter().enumerate() {
        r.push(match results.iter().find_map(|(b, _)| b[k].clone()) {
            None => Finding::pass(*subject, Law::OracleAgreement).witness([format!("{instances} maps")]),
            Some(c) => Finding::fail(*subject, Law::OracleAgreement).counterexample([c]),
        });
    }
    r
}

fn morph_tables(n: usize, m: usize) -> Vec<Vec<Elem>> {
    (0..m.pow(n as u32)).map(|c| Lattice::decode_tuple(c, m, n)).collect()
}

/// Random closed-up λ-terms with separator-valued environments land in the separator.
pub fn lambda_family(cfg: &SuiteConfig) -> VerificationReport {
    let reps: Vec<Finding> = corpus(cfg)
        .into_par_iter()
        .map(|(name, a)| {
            let mut rng = cfg.rng(&format!("lambda/{name}"));
            let (count, bad) = random_closure_sweep(&a, &name, &mut rng, cfg.lambda_terms, cfg.term_size);
            bad.unwrap_or_else(|| Finding::pass(name.as_str(), Law::LambdaClosure).witness([format!("{count} terms")]))
        })
        .collect();
    reps.into_iter().collect()
}

fn pca_laws(name: &str, p: &Pca) -> VerificationReport {
    let mut r = p.verify(name);
    for (vars, t) in bracket_templates(p) {
        r.extend(check_bracket(p, name, &vars, &t));
    }
    r.extend(check_derived(p, name));
    r
}

/// PCA laws on the fixtures and on every PCA of at most three elements; downset algebras.
pub fn pca_family(_cfg: &SuiteConfig) -> VerificationReport {
    let mut r = VerificationReport::new();
    for (name, p) in fixtures::pcas() {
        r.extend(pca_laws(&name, &p));
        let subject = format!("downsets({name})");
        match downset_arrow_algebra(&p) {
            Ok(d) => {
                r.extend(d.verify(&subject));
                r.push(match d.join_compatible() {
                    crate::Decision::Yes => Finding::pass(subject.as_str(), Law::JoinCompat),
                    crate::Decision::No((xs, a)) => {
                        let mut w = d.names_of(&xs);
                        w.push(d.name(a).to_string());
                        Finding::fail(subject.as_str(), Law::JoinCompat).counterexample(w)
                    }
                    crate::Decision::Inconclusive(why) => Finding::inconclusive(subject.as_str(), Law::JoinCompat, why),
                });
            }
            Err(e) => r.push(Finding::fail(subject.as_str(), Law::SepUpward).note(e.to_string())),
        }
    }
    let d1 = downset_arrow_algebra(&Pca::trivial()).expect("one point");
    let two = ArrowAlgebra::frame(Lattice::chain(2)).expect("chain");
    let iso = gen::isomorphism(&d1, &two);
    r.push(Finding::from_bool("downsets(pca-1)", Law::PcaDownsetIso, iso.is_some()));

    let all = enumerate_pcas(3);
    let reps: Vec<VerificationReport> = all.par_iter().enumerate().map(|(i, p)| pca_laws(&format!("pca#{i}"), p)).collect();
    let mut by_law: std::collections::BTreeMap<Law, Vec<Finding>> = Default::default();
    for rep in reps {
        for f in rep.findings {
            by_law.entry(f.law).or_default().push(f);
        }
    }
    for (law, fs) in by_law {
        r.push(VerificationReport::summarize("pcas(<=3)", law, fs).note(format!("{} PCAs", all.len())));
    }
    r
}

/// Quantifier adjunctions, Beck-Chevalley, generic elements, subtriposes and induced maps.
pub fn tripos_family(cfg: &SuiteConfig) -> VerificationReport {
    let small: Vec<(String, ArrowAlgebra)> = corpus(cfg).into_iter().filter(|(_, a)| a.size() <= 4).collect();
    let reps: Vec<VerificationReport> = small
        .into_par_iter()
        .map(|(name, a)| {
            let mut r = tripos::check_slice(&a, cfg.max_index, cfg.max_w, &name);
            for n in 0..=2 {
                if a.size().pow(n as u32) <= 16 {
                    r.extend(tripos::check_power(&a, n, &name).expect("under cap"));
                }
            }
            let mut nucs = vec![morph::identity(&a), partial_nucleus(&a)];
            nucs.extend(a.elements().flat_map(|c| example_nuclei(&a, c).into_iter().map(|(_, j)| j)));
            let sub: Vec<Finding> = nucs
                .iter()
                .flat_map(|j| (0..=2).map(move |n| (j, n)))
                .map(|(j, n)| tripos::subtripos_qj(&a, j, n, &name).expect("small index").1.findings.remove(0))
                .collect();
            r.push(VerificationReport::summarize(&name, Law::Subtripos, sub));
            r
        })
        .collect();
    let mut r: VerificationReport = reps.into_iter().collect();
    let pairs: Vec<VerificationReport> =
        fixtures::frame_pairs(4).into_par_iter().map(|(name, a, b, f, _)| tripos::check_induced(&a, &b, &f, 2, &name).expect("valid table")).collect();
    for law in [Law::InducedMonotone, Law::InducedCartesian, Law::InducedRecover] {
        r.push(VerificationReport::summarize("frame-homomorphisms", law, pairs.iter().filter_map(|p| p.get(law).cloned()).collect()));
    }
    r
}

/// Nucleus families, quotients, closure round trips and factorizations.
pub fn nuclei_family(cfg: &SuiteConfig) -> VerificationReport {
    let reps: Vec<VerificationReport> = corpus(cfg)
        .into_par_iter()
        .map(|(name, a)| {
            let mut r = VerificationReport::new();
            let mut per_law: std::collections::BTreeMap<Law, Vec<Finding>> = Default::default();
            for c in a.elements() {
                for (label, j) in example_nuclei(&a, c) {
                    let subject = format!("{name} [{label}]");
                    let mut rep = check_nucleus(&a, &j, &subject).expect("valid table");
                    rep.extend(check_quotient(&a, &j, &subject).expect("valid table"));
                    rep.push(collapse(&subject, check_quotient_surjection(&a, &j, &subject).expect("valid table"), Law::QuotientSurjection));
                    rep.extend(closure_roundtrip(&a, &j, &subject).expect("valid table"));
                    for f in rep.findings {
                        per_law.entry(f.law).or_default().push(f);
                    }
                }
            }
            for (law, fs) in per_law {
                r.push(VerificationReport::summarize(&name, law, fs));
            }
            r
        })
        .collect();
    let mut r: VerificationReport = reps.into_iter().collect();
    let fz: Vec<VerificationReport> =
        fixtures::frame_pairs(4).into_par_iter().map(|(name, a, b, f, h)| check_factorization(&a, &b, &f, &h, &name).expect("valid tables")).collect();
    for law in [Law::NucleusFromAdjoint, Law::FactorSurjection, Law::FactorInjection, Law::FactorComposite, Law::FactorEquivalence] {
        r.push(VerificationReport::summarize("frame-homomorphisms", law, fz.iter().filter_map(|p| p.get(law).cloned()).collect()));
    }
    r
}

/// The Sierpinski construction and the modification on every modifiable algebra, plus lifts
/// of frame homomorphisms.
pub fn modified_family(cfg: &SuiteConfig) -> VerificationReport {
    let modifiable: Vec<(String, ArrowAlgebra)> = corpus(cfg).into_iter().filter(|(_, a)| a.is_modifiable()).collect();
    let reps: Vec<VerificationReport> = modifiable
        .into_par_iter()
        .map(|(name, a)| {
            let subject = format!("sierpinski({name})");
            let s = sierpinski(&a).expect("modifiable");
            let mut r = s.verify(&subject);
            r.extend(s.check_pi1_delta(&subject).expect("valid tables"));
            r.extend(s.check_nuclei(&subject).expect("valid tables"));
            let m = modification(&a).expect("modifiable");
            let id = morph::identity(&a);
            r.extend(check_modified_lift(&m, &m, &id, Some(&id), &format!("modified({name})")).expect("identity"));
            let n = if m.alg.size() <= 10 { 2 } else { 1 };
            r.extend(m.modified_predicates(n, &format!("modified({name})")).expect("small index").1);
            r
        })
        .collect();
    let mut r: VerificationReport = reps.into_iter().collect();

    let two = ArrowAlgebra::frame(Lattice::chain(2)).expect("chain");
    let s2 = sierpinski(&two).expect("frame");
    let want: Vec<Elem> = [(0, 1), (0, 1), (1, 1)].iter().map(|&(x, y)| s2.elem(x, y).expect("pair")).collect();
    let c_ok = s2.closed_nucleus() == want && s2.open_nucleus()[s2.elem(0, 0).expect("pair")] == s2.elem(0, 0).expect("pair");
    r.push(Finding::from_bool("sierpinski(chain-2) tables", Law::ClosedNucleus, c_ok));

    let pairs = fixtures::frame_pairs(4);
    let frames: Vec<(String, ArrowAlgebra)> = fixtures::frames().into_iter().filter(|(_, a)| a.size() <= 4).collect();
    let mods: Vec<Modified> = frames.iter().map(|(_, a)| modification(a).expect("frame")).collect();
    let index = |a: &ArrowAlgebra| frames.iter().position(|(_, x)| x.lattice() == a.lattice()).expect("frame fixture");
    let lifts: Vec<VerificationReport> = pairs
        .par_iter()
        .map(|(name, a, b, f, h)| {
            let (ma, mb) = (&mods[index(a)], &mods[index(b)]);
            let mut rep = check_lift(&ma.sierp, &mb.sierp, f, Some(h), name).expect("implicative");
            rep.extend(check_modified_lift(ma, mb, f, Some(h), name).expect("implicative"));
            for (_, _, c, g, _) in pairs.iter().filter(|p| p.1.lattice() == b.lattice()) {
                let mc = &mods[index(c)];
                rep.extend(check_pseudofunctor(ma, mb, mc, f, g, name).expect("implicative"));
            }
            rep
        })
        .collect();
    let laws = [
        Law::LiftImplicative,
        Law::LiftAdjoint,
        Law::LiftCommutes,
        Law::ModImplicative,
        Law::ModPseudofunctor,
        Law::ModAdjoint,
        Law::ModSquare,
        Law::ModClosedLift,
        Law::ModPullback,
    ];
    for law in laws {
        let fs: Vec<Finding> = lifts.iter().flat_map(|p| p.findings.iter().filter(|f| f.law == law).cloned()).collect();
        r.push(VerificationReport::summarize("frame-homomorphisms", law, fs));
    }
    r
}

pub const FAMILIES: [&str; 7] = ["frames", "oracles", "lambda", "pcas", "tripos", "nuclei", "modified"];

pub fn run_family(name: &str, cfg: &SuiteConfig) -> Option<VerificationReport> {
    Some(match name {
        "frames" => frames_family(cfg),
        "oracles" => oracle_family(cfg),
        "lambda" => lambda_family(cfg),
        "pcas" => pca_family(cfg),
        "tripos" => tripos_family(cfg),
        "nuclei" => nuclei_family(cfg),
        "modified" => modified_family(cfg),
        _ => return None,
    })
}

/// Every family, in canonical order.
pub fn run_suite(cfg: &SuiteConfig) -> VerificationReport {
    let reps: Vec<VerificationReport> = FAMILIES.par_iter().map(|f| run_family(f, cfg).expect("known family")).collect();
    let mut r: VerificationReport = reps.into_iter().collect();
    r.canonicalize();
    r
}
