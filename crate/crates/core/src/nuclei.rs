//! Nuclei, quotient algebras and the factorization of adjoint pairs.

use crate::algebra::{ArrowAlgebra, ArrowStructure};
use crate::error::{Error, Result};
use crate::lattice::Elem;
use crate::morph::{self, check_cartesian, classify, compose, identity, is_implicative, monotonize, morphism_equiv, morphism_leq};
use crate::report::{Finding, Law, VerificationReport};

fn check_table(alg: &ArrowAlgebra, j: &[Elem]) -> Result<()> {
    morph::validate(alg, alg, j)
}

pub fn check_nucleus(alg: &ArrowAlgebra, j: &[Elem], subject: &str) -> Result<VerificationReport> {
    check_table(alg, j)?;
    let mut r = VerificationReport::new();
    let e = || alg.elements();
    let mono = e().flat_map(|a| e().map(move |b| (a, b))).find(|&(a, b)| alg.leq(a, b) && !alg.leq(j[a], j[b]));
    r.push(match mono {
        None => Finding::pass(subject, Law::NucMonotone),
        Some((a, b)) => Finding::fail(subject, Law::NucMonotone).counterexample(alg.names_of(&[a, b])),
    });
    let laws: [(Law, Elem); 5] = [
        (Law::NucInflationary, alg.meet_all(e().map(|a| alg.imp(a, j[a])))),
        (Law::NucClosure, alg.meet_all(e().flat_map(|a| e().map(move |b| (a, b))).map(|(a, b)| alg.imp2(alg.imp(a, j[b]), j[a], j[b])))),
        (Law::NucIdempotent, alg.meet_all(e().map(|a| alg.imp(j[j[a]], j[a])))),
        (Law::NucFunctorial, alg.meet_all(e().flat_map(|a| e().map(move |b| (a, b))).map(|(a, b)| alg.imp2(alg.imp(a, b), j[a], j[b])))),
        (Law::NucInternal, alg.meet_all(e().flat_map(|a| e().map(move |b| (a, b))).map(|(a, b)| alg.imp2(j[alg.imp(a, b)], j[a], j[b])))),
    ];
    for (law, m) in laws {
        r.push(if alg.in_sep(m) { Finding::pass(subject, law).witness([alg.name(m)]) } else { Finding::fail(subject, law).counterexample([alg.name(m)]) });
    }
    Ok(r)
}

/// Only the defining clauses: monotone, inflationary and the closure law.
pub fn is_nucleus(alg: &ArrowAlgebra, j: &[Elem]) -> bool {
    check_nucleus(alg, j, "").map(|r| [Law::NucMonotone, Law::NucInflationary, Law::NucClosure].iter().all(|&l| r.law_passed(l))).unwrap_or(false)
}

/// The three standard nuclei parametrized by c: c -> a, (a -> c) -> c and (a -> c) -> a.
pub fn example_nuclei(alg: &ArrowAlgebra, c: Elem) -> [(String, Vec<Elem>); 3] {
    let name = alg.name(c);
    [
        (format!("{name} -> a"), alg.elements().map(|a| alg.imp(c, a)).collect()),
        (format!("(a -> {name}) -> {name}"), alg.elements().map(|a| alg.imp(alg.imp(a, c), c)).collect()),
        (format!("(a -> {name}) -> a"), alg.elements().map(|a| alg.imp(alg.imp(a, c), a)).collect()),
    ]
}

pub fn partial_nucleus(alg: &ArrowAlgebra) -> Vec<Elem> {
    alg.elements().map(|a| alg.partial(a)).collect()
}

/// Same carrier, implication a -> j b and separator {a | j a in S}.
pub fn quotient(alg: &ArrowAlgebra, j: &[Elem]) -> Result<ArrowAlgebra> {
    check_table(alg, j)?;
    let st = ArrowStructure::from_fn(alg.lattice().clone(), |a, b| alg.imp(a, j[b]))?;
    let sep = alg.elements().map(|a| alg.in_sep(j[a])).collect();
    ArrowAlgebra::new(st, sep)
}

pub fn check_quotient(alg: &ArrowAlgebra, j: &[Elem], subject: &str) -> Result<VerificationReport> {
    let q = quotient(alg, j)?;
    let mut r = VerificationReport::new();
    let v = q.verify(subject);
    r.push(match v.first_failure() {
        None => Finding::pass(subject, Law::QuotientAlgebra),
        Some(f) => Finding::fail(subject, Law::QuotientAlgebra).counterexample(f.counterexample.clone()).note(f.law.id()),
    });
    r.push(match alg.elements().find(|&a| alg.in_sep(a) && !q.in_sep(a)) {
        None => Finding::pass(subject, Law::QuotientSeparator).witness(alg.names_of(&q.separator())),
        Some(a) => Finding::fail(subject, Law::QuotientSeparator).counterexample([alg.name(a)]),
    });
    let ent = alg.elements().flat_map(|a| alg.elements().map(move |b| (a, b))).find(|&(a, b)| q.entails(a, b) != alg.entails(a, j[b]));
    r.push(match ent {
        None => Finding::pass(subject, Law::QuotientEntailment),
        Some((a, b)) => Finding::fail(subject, Law::QuotientEntailment).counterexample(alg.names_of(&[a, b])),
    });
    if alg.join_compatible().is_yes() {
        r.push(Finding::from_bool(subject, Law::JoinCompat, q.join_compatible().is_yes()).note("quotient of a join-compatible algebra"));
    }
    Ok(r)
}

/// The pair (id: A -> A_j, j: A_j -> A).
pub fn quotient_surjection(alg: &ArrowAlgebra, j: &[Elem]) -> Result<(ArrowAlgebra, Vec<Elem>, Vec<Elem>)> {
    let q = quotient(alg, j)?;
    Ok((q, identity(alg), j.to_vec()))
}

pub fn check_quotient_surjection(alg: &ArrowAlgebra, j: &[Elem], subject: &str) -> Result<VerificationReport> {
    let (q, f, h) = quotient_surjection(alg, j)?;
    let mut r = morph::check_adjoint_pair(alg, &q, &f, &h, subject)?;
    let c = classify(alg, &q, &f, &h);
    r.push(Finding::from_bool(subject, Law::QuotientSurjection, r.passed() && c.surjection).note(c.label()));
    Ok(r)
}

/// The nucleus h f on A after monotonizing both maps.
pub fn nucleus_from_adjoint(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem], h: &[Elem]) -> Result<Vec<Elem>> {
    morph::validate(a, b, f)?;
    morph::validate(b, a, h)?;
    let mf = monotonize(a, b, f);
    let mh = monotonize(b, a, h);
    Ok(compose(&mh, &mf))
}

#[derive(Debug, Clone)]
pub struct Factorization {
    pub nucleus: Vec<Elem>,
    pub quotient: ArrowAlgebra,
    /// id: A -> A_j with right adjoint j.
    pub surjection: (Vec<Elem>, Vec<Elem>),
    /// f: A_j -> B with right adjoint h.
    pub injection: (Vec<Elem>, Vec<Elem>),
}

pub fn factorize(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem], h: &[Elem]) -> Result<Factorization> {
    let j = nucleus_from_adjoint(a, b, f, h)?;
    let quotient = quotient(a, &j)?;
    let mf = monotonize(a, b, f);
    let mh = monotonize(b, a, h);
    Ok(Factorization { surjection: (identity(a), j.clone()), injection: (mf, mh), nucleus: j, quotient })
}

pub fn check_factorization(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem], h: &[Elem], subject: &str) -> Result<VerificationReport> {
    let fz = factorize(a, b, f, h)?;
    let q = &fz.quotient;
    let mut r = VerificationReport::new();
    r.push(match check_nucleus(a, &fz.nucleus, subject)?.first_failure() {
        None => Finding::pass(subject, Law::NucleusFromAdjoint),
        Some(x) => Finding::fail(subject, Law::NucleusFromAdjoint).note(x.law.id()),
    });
    let (sf, sh) = &fz.surjection;
    let s_ok = morph::check_adjoint_pair(a, q, sf, sh, subject)?.passed() && classify(a, q, sf, sh).surjection;
    r.push(Finding::from_bool(subject, Law::FactorSurjection, s_ok));
    let (mf, mh) = &fz.injection;
    let inj = morph::check_adjoint_pair(q, b, mf, mh, subject)?;
    let c = classify(q, b, mf, mh);
    r.push(Finding::from_bool(subject, Law::FactorInjection, inj.passed() && c.injection).note(c.label()));
    r.push(Finding::from_bool(subject, Law::FactorComposite, morphism_equiv(b, &compose(mf, sf), f)));
    let original = classify(a, b, f, h);
    r.push(Finding::from_bool(subject, Law::FactorEquivalence, c.equivalence() == original.surjection).note(format!(
        "middle map {}, original pair {}",
        c.label(),
        original.label()
    )));
    Ok(r)
}

/// A nucleus is an inflationary idempotent cartesian endomorphism, and conversely after monotonizing.
pub fn closure_roundtrip(alg: &ArrowAlgebra, j: &[Elem], subject: &str) -> Result<VerificationReport> {
    check_table(alg, j)?;
    let mut r = VerificationReport::new();
    let id = identity(alg);
    let jj = compose(j, j);
    let implicative = is_implicative(alg, alg, j);
    let inflationary = morphism_leq(alg, &id, j);
    let idempotent = morphism_equiv(alg, &jj, j);
    let nucleus = is_nucleus(alg, j);

    let forward = if nucleus {
        let cart = check_cartesian(alg, alg, j, subject).is_pass();
        Finding::from_bool(subject, Law::ClosureForward, implicative && cart && inflationary && idempotent)
            .note(format!("implicative={implicative} cartesian={cart} inflationary={inflationary} idempotent={idempotent}"))
    } else {
        Finding::fail(subject, Law::ClosureForward).note("not a nucleus")
    };
    r.push(forward);

    let backward = if !implicative {
        Finding::fail(subject, Law::ClosureBackward).note("not implicative")
    } else if !inflationary {
        let w = alg.elements().find(|&a| !alg.entails(a, j[a]));
        Finding::fail(subject, Law::ClosureBackward).counterexample(w.map(|a| alg.name(a).to_string())).note("not inflationary")
    } else if !idempotent {
        let w = alg.elements().find(|&a| !alg.equivalent(jj[a], j[a]));
        Finding::fail(subject, Law::ClosureBackward).counterexample(w.map(|a| alg.name(a).to_string())).note("j j does not entail j")
    } else {
        let m = monotonize(alg, alg, j);
        Finding::from_bool(subject, Law::ClosureBackward, is_nucleus(alg, &m))
    };
    r.push(backward);
    Ok(r)
}

/// Monotone inflationary maps on a carrier, in table order; used to find non-idempotent examples.
pub fn monotone_inflations(alg: &ArrowAlgebra) -> Result<Vec<Vec<Elem>>> {
    let n = alg.size();
    if n > 6 {
        return Err(Error::Cap("table search is limited to 6 elements".into()));
    }
    let total = n.pow(n as u32);
    Ok((0..total)
        .map(|code| (0..n).map(|i| code / n.pow(i as u32) % n).collect::<Vec<Elem>>())
        .filter(|t| alg.elements().all(|a| alg.leq(a, t[a]) && alg.elements().all(|b| !alg.leq(a, b) || alg.leq(t[a], t[b]))))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;

    fn c3() -> ArrowAlgebra {
        ArrowAlgebra::frame(Lattice::chain(3)).unwrap()
    }

    #[test]
    fn double_negation_on_three_chain() {
        let a = c3();
        let j: Vec<Elem> = a.elements().map(|x| a.imp(a.imp(x, 0), 0)).collect();
        assert_eq!(j, vec![0, 2, 2]);
        assert!(check_nucleus(&a, &j, "dn").unwrap().passed());
        let q = quotient(&a, &j).unwrap();
        assert_eq!(q.separator(), vec![1, 2]);
        let (q, f, h) = quotient_surjection(&a, &j).unwrap();
        let c = classify(&a, &q, &f, &h);
        assert!(c.surjection && !c.injection);
    }

    #[test]
    fn partial_quotient_is_equivalence() {
        let a = c3();
        let j = partial_nucleus(&a);
        let (q, f, h) = quotient_surjection(&a, &j).unwrap();
        assert!(classify(&a, &q, &f, &h).equivalence());
    }

    #[test]
    fn non_idempotent_inflation_fails_roundtrip() {
        let a = c3();
        let j = monotone_inflations(&a).unwrap().into_iter().find(|t| compose(t, t) != *t).unwrap();
        assert_eq!(j, vec![1, 2, 2]);
        let r = closure_roundtrip(&a, &j, "j").unwrap();
        let back = r.get(Law::ClosureBackward).unwrap();
        assert!(!back.is_pass());
        assert_eq!(back.counterexample, vec!["0".to_string()]);
    }
}
