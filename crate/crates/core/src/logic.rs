//! Law checks for application, abstraction and the logical order.

use crate::algebra::ArrowAlgebra;
use crate::lattice::Elem;
use crate::report::{Finding, Law, VerificationReport};

fn probe_functions(alg: &ArrowAlgebra) -> Vec<(String, Vec<Elem>)> {
    let mut out = Vec::new();
    out.push(("id".to_string(), alg.elements().collect()));
    out.push(("partial".to_string(), alg.elements().map(|x| alg.partial(x)).collect()));
    for c in alg.elements() {
        let name = alg.name(c);
        out.push((format!("const {name}"), alg.elements().map(|_| c).collect()));
        out.push((format!("{name} -> x"), alg.elements().map(|x| alg.imp(c, x)).collect()));
        out.push((format!("x -> {name}"), alg.elements().map(|x| alg.imp(x, c)).collect()));
        out.push((format!("{name} x"), alg.elements().map(|x| alg.apply(c, x)).collect()));
        out.push((format!("x ^ {name}"), alg.elements().map(|x| alg.meet(x, c)).collect()));
    }
    out
}

pub fn check_application(alg: &ArrowAlgebra, subject: &str) -> VerificationReport {
    let mut r = VerificationReport::new();
    let e = || alg.elements();

    let mono = e().flat_map(|a| e().map(move |b| (a, b))).find_map(|(a, a2)| {
        if !alg.leq(a, a2) {
            return None;
        }
        e().flat_map(|b| e().map(move |b2| (b, b2)))
            .find(|&(b, b2)| alg.leq(b, b2) && !alg.leq(alg.apply(a, b), alg.apply(a2, b2)))
            .map(|(b, b2)| vec![a, a2, b, b2])
    });
    r.push(match mono {
        None => Finding::pass(subject, Law::ApplyMonotone),
        Some(w) => Finding::fail(subject, Law::ApplyMonotone).counterexample(alg.names_of(&w)),
    });

    let beta = e().flat_map(|a| e().flat_map(move |b| e().map(move |c| (a, b, c)))).find(|&(a, b, c)| !alg.leq(alg.apply(alg.imp2(a, b, c), a), alg.imp(b, c)));
    r.push(match beta {
        None => Finding::pass(subject, Law::ApplyBeta),
        Some((a, b, c)) => Finding::fail(subject, Law::ApplyBeta).counterexample(alg.names_of(&[a, b, c])),
    });

    let sep = alg.separator();
    let closed = sep.iter().flat_map(|&a| sep.iter().map(move |&b| (a, b))).find(|&(a, b)| !alg.in_sep(alg.apply(a, b)));
    r.push(match closed {
        None => Finding::pass(subject, Law::ApplySeparator),
        Some((a, b)) => Finding::fail(subject, Law::ApplySeparator).counterexample(alg.names_of(&[a, b])),
    });
    r
}

pub fn check_abstraction(alg: &ArrowAlgebra, subject: &str) -> VerificationReport {
    let mut r = VerificationReport::new();
    let fns = probe_functions(alg);
    let lam: Vec<Elem> = fns.iter().map(|(_, f)| alg.abstraction(|x| f[x])).collect();

    let mut mono = None;
    'outer: for (i, (_, f)) in fns.iter().enumerate() {
        for (j, (_, g)) in fns.iter().enumerate() {
            if alg.elements().all(|x| alg.leq(f[x], g[x])) && !alg.leq(lam[i], lam[j]) {
                mono = Some((fns[i].0.clone(), fns[j].0.clone()));
                break 'outer;
            }
        }
    }
    r.push(match mono {
        None => Finding::pass(subject, Law::AbstractMonotone).note(format!("{} probe functions", fns.len())),
        Some((f, g)) => Finding::fail(subject, Law::AbstractMonotone).counterexample([f, g]),
    });

    let beta =
        fns.iter().zip(&lam).find_map(|((name, f), &l)| alg.elements().find(|&a| !alg.leq(alg.apply(l, a), alg.partial(f[a]))).map(|a| (name.clone(), a)));
    r.push(match beta {
        None => Finding::pass(subject, Law::AbstractBeta),
        Some((name, a)) => Finding::fail(subject, Law::AbstractBeta).counterexample([name, alg.name(a).to_string()]),
    });
    r
}

pub fn check_logic(alg: &ArrowAlgebra, subject: &str) -> VerificationReport {
    let mut r = VerificationReport::new();
    let e = || alg.elements();

    let refl = e().find(|&a| !alg.entails(a, a));
    let trans =
        e().flat_map(|a| e().flat_map(move |b| e().map(move |c| (a, b, c)))).find(|&(a, b, c)| alg.entails(a, b) && alg.entails(b, c) && !alg.entails(a, c));
    let top = e().find(|&a| alg.in_sep(a) != alg.entails(alg.top(), a));
    let order_bad: Option<Vec<Elem>> = refl.map(|a| vec![a]).or(trans.map(|(a, b, c)| vec![a, b, c])).or(top.map(|a| vec![a]));
    r.push(match order_bad {
        None => Finding::pass(subject, Law::LogicOrder),
        Some(w) => Finding::fail(subject, Law::LogicOrder).counterexample(alg.names_of(&w)),
    });
    r.push(match e().find(|&a| !alg.equivalent(a, alg.partial(a))) {
        None if alg.partial_shift_holds() => Finding::pass(subject, Law::PartialShift),
        None => Finding::fail(subject, Law::PartialShift).note("uniform law fails"),
        Some(a) => Finding::fail(subject, Law::PartialShift).counterexample([alg.name(a)]),
    });

    let mut prod_bad = None;
    let mut sum_bad = None;
    for a in e() {
        for b in e() {
            let p = alg.product(a, b);
            if !(alg.entails(p, a) && alg.entails(p, b)) || e().any(|c| alg.entails(c, a) && alg.entails(c, b) && !alg.entails(c, p)) {
                prod_bad.get_or_insert(vec![a, b]);
            }
            let s = alg.sum(a, b);
            if !(alg.entails(a, s) && alg.entails(b, s)) || e().any(|c| alg.entails(a, c) && alg.entails(b, c) && !alg.entails(s, c)) {
                sum_bad.get_or_insert(vec![a, b]);
            }
        }
    }
    r.push(match prod_bad {
        None => Finding::pass(subject, Law::LogicProduct),
        Some(w) => Finding::fail(subject, Law::LogicProduct).counterexample(alg.names_of(&w)),
    });
    r.push(match sum_bad {
        None => Finding::pass(subject, Law::LogicSum),
        Some(w) => Finding::fail(subject, Law::LogicSum).counterexample(alg.names_of(&w)),
    });
    let top_ok = alg.in_sep(alg.top()) && e().all(|a| alg.entails(a, alg.top()));
    r.push(Finding::from_bool(subject, Law::LogicTop, top_ok));
    r
}

/// On a frame with separator {top} the structure collapses to the Heyting operations.
pub fn check_frame_collapse(alg: &ArrowAlgebra, subject: &str) -> Finding {
    let c = alg.combinators();
    let t = alg.top();
    if [c.k, c.s, c.a, c.i, c.b].iter().any(|&x| x != t) {
        return Finding::fail(subject, Law::FrameCollapse).note("combinator below top");
    }
    for a in alg.elements() {
        if alg.partial(a) != a {
            return Finding::fail(subject, Law::FrameCollapse).counterexample([alg.name(a)]).note("partial is not the identity");
        }
        for b in alg.elements() {
            let m = alg.meet(a, b);
            let checks = [
                (alg.apply(a, b) == m, "application"),
                (alg.product(a, b) == m, "product"),
                (alg.sum(a, b) == alg.join(a, b), "sum"),
                (alg.entails(a, b) == alg.leq(a, b), "entailment"),
            ];
            if let Some((_, what)) = checks.iter().find(|(ok, _)| !ok) {
                return Finding::fail(subject, Law::FrameCollapse).counterexample(alg.names_of(&[a, b])).note(*what);
            }
        }
    }
    Finding::pass(subject, Law::FrameCollapse)
}

pub fn check_all(alg: &ArrowAlgebra, subject: &str) -> VerificationReport {
    let mut r = check_application(alg, subject);
    r.extend(check_abstraction(alg, subject));
    r.extend(check_logic(alg, subject));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;

    #[test]
    fn frames_collapse() {
        for lat in [Lattice::chain(1), Lattice::chain(4), Lattice::diamond(), Lattice::boolean(3)] {
            let alg = ArrowAlgebra::frame(lat).unwrap();
            assert!(check_frame_collapse(&alg, "f").is_pass());
            assert!(check_all(&alg, "f").passed());
        }
    }
}
