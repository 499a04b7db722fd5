//! Implicative morphisms between arrow algebras, their order, adjoints and regularity.

use crate::algebra::{ArrowAlgebra, Decision, SUBSET_CAP};
use crate::error::{Error, Result};
use crate::lattice::{mask_members, subsets, Elem, Lattice};
use crate::report::{Finding, Law, VerificationReport};

pub const ADJOINT_SEARCH_CAP: usize = 200_000;

pub fn validate(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem]) -> Result<()> {
    if f.len() != a.size() {
        return Err(Error::CarrierMismatch(format!("table has {} entries but the source has {} elements", f.len(), a.size())));
    }
    if let Some(&x) = f.iter().find(|&&x| x >= b.size()) {
        return Err(Error::CarrierMismatch(format!("value {x} is outside the target carrier")));
    }
    Ok(())
}

pub fn identity(a: &ArrowAlgebra) -> Vec<Elem> {
    a.elements().collect()
}

/// g after f.
pub fn compose(g: &[Elem], f: &[Elem]) -> Vec<Elem> {
    f.iter().map(|&x| g[x]).collect()
}

/// The meet over a, a' of f(a -> a') -> f(a) -> f(a').
pub fn realizer(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem]) -> Elem {
    b.meet_all(a.elements().flat_map(|x| a.elements().map(move |y| (x, y))).map(|(x, y)| b.imp2(f[a.imp(x, y)], f[x], f[y])))
}

/// Meet of f(a) -> f(a') over the pairs with s <= a -> a'.
fn uniform_meet(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem], s: Elem) -> Elem {
    b.meet_all(a.elements().flat_map(|x| a.elements().map(move |y| (x, y))).filter(|&(x, y)| a.leq(s, a.imp(x, y))).map(|(x, y)| b.imp(f[x], f[y])))
}

pub fn check_implicative(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem], subject: &str) -> Result<VerificationReport> {
    validate(a, b, f)?;
    let mut r = VerificationReport::new();
    r.push(match a.elements().find(|&x| a.in_sep(x) && !b.in_sep(f[x])) {
        None => Finding::pass(subject, Law::ImplSeparator),
        Some(x) => Finding::fail(subject, Law::ImplSeparator).counterexample([a.name(x)]),
    });
    let cert = realizer(a, b, f);
    r.push(if b.in_sep(cert) {
        Finding::pass(subject, Law::ImplRealizer).witness([b.name(cert)])
    } else {
        Finding::fail(subject, Law::ImplRealizer).counterexample([b.name(cert)])
    });
    r.push(match a.elements().find(|&s| a.in_sep(s) && !b.in_sep(uniform_meet(a, b, f, s))) {
        None => Finding::pass(subject, Law::ImplUniform),
        Some(s) => Finding::fail(subject, Law::ImplUniform).counterexample([a.name(s)]),
    });
    Ok(r)
}

pub fn is_implicative(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem]) -> bool {
    check_implicative(a, b, f, "").map(|r| r.passed()).unwrap_or(false)
}

/// The uniform condition checked over every set X of pairs (carriers of at most 3 elements).
pub fn uniform_condition_oracle(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem]) -> bool {
    let n = a.size();
    assert!(n <= 3, "oracle is limited to carriers of at most 3 elements");
    subsets(n * n).all(|mask| {
        let pairs: Vec<(Elem, Elem)> = mask_members(mask).map(|p| (p / n, p % n)).collect();
        let hyp = a.meet_all(pairs.iter().map(|&(x, y)| a.imp(x, y)));
        !a.in_sep(hyp) || b.in_sep(b.meet_all(pairs.iter().map(|&(x, y)| b.imp(f[x], f[y]))))
    })
}

/// f entails g in the target: the meet of f(a) -> g(a) lies in the separator.
pub fn morphism_leq(b: &ArrowAlgebra, f: &[Elem], g: &[Elem]) -> bool {
    b.in_sep(b.meet_all(f.iter().zip(g).map(|(&x, &y)| b.imp(x, y))))
}

pub fn morphism_equiv(b: &ArrowAlgebra, f: &[Elem], g: &[Elem]) -> bool {
    morphism_leq(b, f, g) && morphism_leq(b, g, f)
}

/// The monotone replacement a |-> meet over a <= a' of partial f(a').
pub fn monotonize(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem]) -> Vec<Elem> {
    a.elements().map(|x| b.meet_all(a.elements().filter(|&y| a.leq(x, y)).map(|y| b.partial(f[y])))).collect()
}

pub fn is_monotone(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem]) -> bool {
    a.elements().all(|x| a.elements().all(|y| !a.leq(x, y) || b.leq(f[x], f[y])))
}

/// The two-element frame and the characteristic map of the separator.
pub fn chi(a: &ArrowAlgebra) -> (ArrowAlgebra, Vec<Elem>) {
    let two = ArrowAlgebra::frame(Lattice::chain(2)).expect("two-element frame");
    let table = a.elements().map(|x| if a.in_sep(x) { 1 } else { 0 }).collect();
    (two, table)
}

/// Laws of an adjunction with f: A -> B on the left and h: B -> A on the right.
pub fn check_adjoint_pair(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem], h: &[Elem], subject: &str) -> Result<VerificationReport> {
    let mut r = check_implicative(a, b, f, subject)?;
    validate(b, a, h)?;
    let hr = check_implicative(b, a, h, subject)?;
    r.push(match hr.first_failure() {
        None => Finding::pass(subject, Law::AdjRight),
        Some(f) => Finding::fail(subject, Law::AdjRight).counterexample(f.counterexample.clone()).note(f.law.id()),
    });
    let fh = compose(f, h);
    let hf = compose(h, f);
    r.push(Finding::from_bool(subject, Law::AdjCounit, morphism_leq(b, &fh, &identity(b))));
    r.push(Finding::from_bool(subject, Law::AdjUnit, morphism_leq(a, &identity(a), &hf)));
    Ok(r)
}

pub fn is_adjoint_pair(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem], h: &[Elem]) -> bool {
    is_implicative(b, a, h) && morphism_leq(b, &compose(f, h), &identity(b)) && morphism_leq(a, &identity(a), &compose(h, f))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdjointSearch {
    Found(Vec<Elem>),
    NotFound,
    Inconclusive(String),
}

impl AdjointSearch {
    pub fn found(&self) -> Option<&[Elem]> {
        match self {
            AdjointSearch::Found(h) => Some(h),
            _ => None,
        }
    }
}

/// Searches for a right adjoint of f among the maximal classes of {a | f(a) entails b}.
pub fn find_right_adjoint(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem], cap: usize) -> AdjointSearch {
    let mut classes: Vec<Vec<Elem>> = Vec::with_capacity(b.size());
    for y in b.elements() {
        let lower: Vec<Elem> = a.elements().filter(|&x| b.entails(f[x], y)).collect();
        let top: Vec<Elem> = lower.iter().copied().filter(|&m| lower.iter().all(|&x| a.entails(x, m))).collect();
        if top.is_empty() {
            return AdjointSearch::NotFound;
        }
        classes.push(top);
    }
    let total = classes.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()).filter(|&t| t <= cap));
    if total.is_none() {
        return AdjointSearch::Inconclusive(format!("candidate space exceeds {cap}"));
    }
    let mut digits = vec![0usize; classes.len()];
    loop {
        let h: Vec<Elem> = digits.iter().zip(&classes).map(|(&d, c)| c[d]).collect();
        if is_adjoint_pair(a, b, f, &h) {
            return AdjointSearch::Found(h);
        }
        let mut i = 0;
        loop {
            if i == digits.len() {
                return AdjointSearch::NotFound;
            }
            digits[i] += 1;
            if digits[i] < classes[i].len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Every table B -> A, tried in order.
pub fn find_right_adjoint_oracle(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem]) -> Option<Vec<Elem>> {
    let (n, m) = (a.size(), b.size());
    let total = n.checked_pow(m as u32).expect("oracle space fits");
    (0..total).map(|code| (0..m).map(|i| code / n.pow(i as u32) % n).collect::<Vec<_>>()).find(|h| is_adjoint_pair(a, b, f, h))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub surjection: bool,
    pub injection: bool,
}

impl Classification {
    pub fn equivalence(&self) -> bool {
        self.surjection && self.injection
    }

    pub fn label(&self) -> &'static str {
        match (self.surjection, self.injection) {
            (true, true) => "equivalence",
            (true, false) => "surjection",
            (false, true) => "injection",
            (false, false) => "neither",
        }
    }
}

pub fn classify(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem], h: &[Elem]) -> Classification {
    Classification { surjection: morphism_equiv(b, &compose(f, h), &identity(b)), injection: morphism_equiv(a, &compose(h, f), &identity(a)) }
}

/// Preservation of logical conjunction: the meet of (fa x fb) -> f(a x b) is in the target separator.
pub fn check_cartesian(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem], subject: &str) -> Finding {
    let m = b.meet_all(a.elements().flat_map(|x| a.elements().map(move |y| (x, y))).map(|(x, y)| b.imp(b.product(f[x], f[y]), f[a.product(x, y)])));
    let top_ok = b.in_sep(f[a.top()]);
    if b.in_sep(m) && top_ok {
        Finding::pass(subject, Law::Cartesian).witness([b.name(m)])
    } else {
        Finding::fail(subject, Law::Cartesian).counterexample([b.name(m)])
    }
}

fn regularity_meet(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem]) -> Elem {
    b.meet_all(subsets(a.size()).map(|mask| {
        let ts: Vec<Elem> = mask_members(mask).collect();
        let image: Vec<Elem> = ts.iter().map(|&t| f[t]).collect();
        b.imp(f[a.exists_of(&ts)], b.exists_of(&image))
    }))
}

/// f commutes with the existential quantifiers up to entailment.
pub fn is_regular(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem]) -> Decision<Elem> {
    if a.size() > SUBSET_CAP {
        return Decision::Inconclusive(format!("source carrier exceeds subset cap {SUBSET_CAP}"));
    }
    let m = regularity_meet(a, b, f);
    if b.in_sep(m) {
        Decision::Yes
    } else {
        Decision::No(m)
    }
}

/// Regularity through joins, for join-compatible source and target.
pub fn is_regular_join_form(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem]) -> Decision<Elem> {
    if a.size() > SUBSET_CAP {
        return Decision::Inconclusive(format!("source carrier exceeds subset cap {SUBSET_CAP}"));
    }
    let m = b.meet_all(subsets(a.size()).map(|mask| {
        let ts: Vec<Elem> = mask_members(mask).collect();
        b.imp(f[a.join_all(ts.iter().copied())], b.join_all(ts.iter().map(|&t| f[t])))
    }));
    if b.in_sep(m) {
        Decision::Yes
    } else {
        Decision::No(m)
    }
}

/// Every index map X -> Y with |X|, |Y| <= `max` and every predicate on X.
pub fn regular_oracle(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem], max: usize) -> bool {
    let n = a.size();
    for xs in 0..=max {
        for ys in 0..=max {
            let maps = ys.pow(xs as u32);
            for code in 0..maps {
                let g: Vec<usize> = (0..xs).map(|i| code / ys.pow(i as u32) % ys).collect();
                for acode in 0..n.pow(xs as u32) {
                    let alpha: Vec<Elem> = (0..xs).map(|i| acode / n.pow(i as u32) % n).collect();
                    let m = b.meet_all((0..ys).map(|y| {
                        let fiber: Vec<Elem> = (0..xs).filter(|&x| g[x] == y).map(|x| alpha[x]).collect();
                        let image: Vec<Elem> = fiber.iter().map(|&t| f[t]).collect();
                        b.imp(f[a.exists_of(&fiber)], b.exists_of(&image))
                    }));
                    if !b.in_sep(m) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn check_regular(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem], subject: &str) -> VerificationReport {
    let mut r = VerificationReport::new();
    r.push(match is_regular(a, b, f) {
        Decision::Yes => Finding::pass(subject, Law::Regular),
        Decision::No(m) => Finding::fail(subject, Law::Regular).counterexample([b.name(m)]),
        Decision::Inconclusive(why) => Finding::inconclusive(subject, Law::Regular, why),
    });
    if a.join_compatible().is_yes() && b.join_compatible().is_yes() {
        let single = is_regular(a, b, f).is_yes();
        let joins = is_regular_join_form(a, b, f).is_yes();
        r.push(Finding::from_bool(subject, Law::RegularJoinForm, single == joins).note(format!("join form {}", if joins { "holds" } else { "fails" })));
    }
    r
}

/// f_*(x) = join of the y with f(y) <= x.
pub fn frame_right_adjoint(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem]) -> Vec<Elem> {
    b.elements().map(|x| a.join_all(a.elements().filter(|&y| b.leq(f[y], x)))).collect()
}

pub fn preserves_finite_meets(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem]) -> bool {
    f[a.top()] == b.top() && a.elements().all(|x| a.elements().all(|y| f[a.meet(x, y)] == b.meet(f[x], f[y])))
}

pub fn preserves_joins(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem]) -> bool {
    f[a.bottom()] == b.bottom() && a.elements().all(|x| a.elements().all(|y| f[a.join(x, y)] == b.join(f[x], f[y])))
}

/// All maps preserving finite meets and finite joins, by table enumeration.
pub fn frame_homomorphisms(a: &ArrowAlgebra, b: &ArrowAlgebra) -> Result<Vec<Vec<Elem>>> {
    let (n, m) = (a.size(), b.size());
    let total =
        m.checked_pow(n as u32).filter(|&t| t <= ADJOINT_SEARCH_CAP).ok_or_else(|| Error::Cap(format!("{m}^{n} tables exceed {ADJOINT_SEARCH_CAP}")))?;
    Ok((0..total).map(|c| Lattice::decode_tuple(c, m, n)).filter(|f| preserves_finite_meets(a, b, f) && preserves_joins(a, b, f)).collect())
}

/// Between frames: implicative iff monotone and finite-meet preserving; dense iff a frame homomorphism.
pub fn frame_characterizations(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem], subject: &str) -> Result<VerificationReport> {
    validate(a, b, f)?;
    if !a.is_frame() || !b.is_frame() {
        return Err(Error::Input("frame characterizations need frames with separator {top}".into()));
    }
    let mut r = VerificationReport::new();
    let implicative = is_implicative(a, b, f);
    let meets = is_monotone(a, b, f) && preserves_finite_meets(a, b, f);
    r.push(Finding::from_bool(subject, Law::FrameImplicative, implicative == meets).note(format!("implicative={implicative} meets={meets}")));
    let dense = implicative && find_right_adjoint(a, b, f, ADJOINT_SEARCH_CAP).found().is_some();
    let hom = meets && preserves_joins(a, b, f);
    r.push(Finding::from_bool(subject, Law::FrameDense, dense == hom).note(format!("dense={dense} homomorphism={hom}")));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(n: usize) -> ArrowAlgebra {
        ArrowAlgebra::frame(Lattice::chain(n)).unwrap()
    }

    #[test]
    fn identity_is_implicative_and_self_adjoint() {
        let a = frame(3);
        let id = identity(&a);
        assert!(check_implicative(&a, &a, &id, "id").unwrap().passed());
        assert_eq!(find_right_adjoint(&a, &a, &id, ADJOINT_SEARCH_CAP), AdjointSearch::Found(id.clone()));
        assert!(classify(&a, &a, &id, &id).equivalence());
    }

    #[test]
    fn chi_is_implicative() {
        let a = frame(3);
        let (two, t) = chi(&a);
        assert!(is_implicative(&a, &two, &t));
    }

    #[test]
    fn collapse_has_inclusion_as_adjoint() {
        let (a, b) = (frame(3), frame(2));
        let f = vec![0, 1, 1];
        let h = find_right_adjoint(&a, &b, &f, ADJOINT_SEARCH_CAP);
        assert_eq!(h, AdjointSearch::Found(vec![0, 2]));
        assert_eq!(h.found().unwrap(), frame_right_adjoint(&a, &b, &f).as_slice());
        let c = classify(&a, &b, &f, h.found().unwrap());
        assert!(c.surjection && !c.injection);
    }

    #[test]
    fn wrong_carrier_is_rejected() {
        let (a, b) = (frame(3), frame(2));
        assert!(check_implicative(&a, &b, &[0, 1], "x").is_err());
        assert!(check_implicative(&a, &b, &[0, 1, 2], "x").is_err());
    }
}
