//! Finite-index slices of the arrow tripos.

use crate::algebra::{ArrowAlgebra, ArrowStructure};
use crate::error::{Error, Result};
use crate::lattice::{Elem, Lattice};
use crate::morph;
use crate::report::{Finding, Law, VerificationReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Predicate spaces up to this many tables are enumerated in full.
pub const EXHAUSTIVE_CAP: usize = 4096;
/// Power algebras are materialized only up to this carrier size.
pub const POWER_CAP: usize = 729;
const GRID_SAMPLES: usize = 32;
const GRID_SEED: u64 = 0x7219;

pub type Predicate = Vec<Elem>;

/// A total function between finite index sets `0..src` and `0..dst`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinMap {
    pub src: usize,
    pub dst: usize,
    pub table: Vec<usize>,
}

impl FinMap {
    pub fn new(dst: usize, table: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = table.iter().find(|&&y| y >= dst) {
            return Err(Error::Shape(format!("index map value {bad} outside 0..{dst}")));
        }
        Ok(FinMap { src: table.len(), dst, table })
    }

    pub fn identity(n: usize) -> Self {
        FinMap { src: n, dst: n, table: (0..n).collect() }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn fiber(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.src).filter(move |&x| self.table[x] == y)
    }

    /// `self` after `first`.
    pub fn after(&self, first: &FinMap) -> Result<FinMap> {
        if first.dst != self.src {
            return Err(Error::CarrierMismatch(format!("composite of maps into {} and out of {}", first.dst, self.src)));
        }
        Ok(FinMap { src: first.src, dst: self.dst, table: first.table.iter().map(|&x| self.table[x]).collect() })
    }

    /// Every map `0..src -> 0..dst`.
    pub fn all(src: usize, dst: usize) -> Vec<FinMap> {
        let total = dst.pow(src as u32);
        (0..total).map(|c| FinMap { src, dst, table: Lattice::decode_tuple(c, dst.max(1), src) }).collect()
    }

    pub fn to_string_table(&self) -> String {
        format!("[{}]", self.table.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
    }
}

fn check_pred(alg: &ArrowAlgebra, phi: &[Elem], n: usize) -> Result<()> {
    if phi.len() != n {
        return Err(Error::Shape(format!("predicate over {} indices, expected {n}", phi.len())));
    }
    if let Some(&bad) = phi.iter().find(|&&a| a >= alg.size()) {
        return Err(Error::Shape(format!("predicate value {bad} out of range")));
    }
    Ok(())
}

/// Meet over the index of phi(i) -> psi(i).
pub fn uniform_imp(alg: &ArrowAlgebra, phi: &[Elem], psi: &[Elem]) -> Elem {
    alg.meet_all(phi.iter().zip(psi).map(|(&a, &b)| alg.imp(a, b)))
}

pub fn entails(alg: &ArrowAlgebra, phi: &[Elem], psi: &[Elem]) -> bool {
    debug_assert_eq!(phi.len(), psi.len());
    alg.in_sep(uniform_imp(alg, phi, psi))
}

pub fn equivalent(alg: &ArrowAlgebra, phi: &[Elem], psi: &[Elem]) -> bool {
    entails(alg, phi, psi) && entails(alg, psi, phi)
}

pub fn top(alg: &ArrowAlgebra, n: usize) -> Predicate {
    vec![alg.top(); n]
}

pub fn bottom(alg: &ArrowAlgebra, n: usize) -> Predicate {
    vec![alg.bottom(); n]
}

pub fn product(alg: &ArrowAlgebra, phi: &[Elem], psi: &[Elem]) -> Predicate {
    phi.iter().zip(psi).map(|(&a, &b)| alg.product(a, b)).collect()
}

pub fn sum(alg: &ArrowAlgebra, phi: &[Elem], psi: &[Elem]) -> Predicate {
    phi.iter().zip(psi).map(|(&a, &b)| alg.sum(a, b)).collect()
}

pub fn implication(alg: &ArrowAlgebra, phi: &[Elem], psi: &[Elem]) -> Predicate {
    phi.iter().zip(psi).map(|(&a, &b)| alg.imp(a, b)).collect()
}

/// Pointwise structure on A^n with the uniform separator.
pub fn power_algebra(alg: &ArrowAlgebra, n: usize) -> Result<ArrowAlgebra> {
    let base = alg.size();
    let total = base.checked_pow(n as u32).filter(|&t| t <= POWER_CAP).ok_or(Error::Cap(format!("power algebra of size {base}^{n} exceeds {POWER_CAP}")))?;
    let lat = alg.lattice().power(n);
    let tuples: Vec<Vec<Elem>> = (0..total).map(|c| Lattice::decode_tuple(c, base, n)).collect();
    let st = ArrowStructure::from_fn(lat, |x, y| Lattice::encode_tuple(&implication(alg, &tuples[x], &tuples[y]), base))?;
    let sep = tuples.iter().map(|t| alg.in_sep(alg.meet_all(t.iter().copied()))).collect();
    ArrowAlgebra::new(st, sep)
}

/// Substitution: beta after f.
pub fn reindex(f: &FinMap, beta: &[Elem]) -> Predicate {
    f.table.iter().map(|&x| beta[x]).collect()
}

pub fn exists_along(alg: &ArrowAlgebra, f: &FinMap, alpha: &[Elem]) -> Result<Predicate> {
    check_pred(alg, alpha, f.src)?;
    Ok((0..f.dst).map(|y| alg.exists_of(&f.fiber(y).map(|x| alpha[x]).collect::<Vec<_>>())).collect())
}

pub fn forall_along(alg: &ArrowAlgebra, f: &FinMap, alpha: &[Elem]) -> Result<Predicate> {
    check_pred(alg, alpha, f.src)?;
    Ok((0..f.dst).map(|y| alg.forall_of(&f.fiber(y).map(|x| alpha[x]).collect::<Vec<_>>())).collect())
}

/// Fiberwise join.
pub fn exists_join(alg: &ArrowAlgebra, f: &FinMap, alpha: &[Elem]) -> Result<Predicate> {
    check_pred(alg, alpha, f.src)?;
    Ok((0..f.dst).map(|y| alg.join_all(f.fiber(y).map(|x| alpha[x]))).collect())
}

pub fn is_exhaustive(alg: &ArrowAlgebra, n: usize) -> bool {
    alg.size().checked_pow(n as u32).is_some_and(|t| t <= EXHAUSTIVE_CAP)
}

/// Predicates over `0..n`: every table when the space is small enough, otherwise
/// constants, two-valued indicators and seeded random tables.
pub fn predicate_grid(alg: &ArrowAlgebra, n: usize) -> Vec<Predicate> {
    let m = alg.size();
    if is_exhaustive(alg, n) {
        return (0..m.pow(n as u32)).map(|c| Lattice::decode_tuple(c, m, n)).collect();
    }
    let mut out: Vec<Predicate> = alg.elements().map(|a| vec![a; n]).collect();
    for a in alg.elements() {
        for b in alg.elements() {
            if a != b {
                for i in 0..n {
                    let mut p = vec![b; n];
                    p[i] = a;
                    out.push(p);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(GRID_SEED ^ (n as u64) << 8 ^ m as u64);
    for _ in 0..GRID_SAMPLES {
        out.push((0..n).map(|_| rng.gen_range(0..m)).collect());
    }
    out.sort();
    out.dedup();
    out
}

fn names(alg: &ArrowAlgebra, phi: &[Elem]) -> String {
    format!("({})", phi.iter().map(|&a| alg.name(a)).collect::<Vec<_>>().join(","))
}

/// Both quantifier adjunctions along f, over the predicate grids of its domain and codomain.
pub fn check_adjointness(alg: &ArrowAlgebra, f: &FinMap, subject: &str) -> VerificationReport {
    let xs = predicate_grid(alg, f.src);
    let ys = predicate_grid(alg, f.dst);
    let exhaustive = is_exhaustive(alg, f.src) && is_exhaustive(alg, f.dst);
    let ex: Vec<Predicate> = xs.iter().map(|a| exists_along(alg, f, a).expect("grid predicate")).collect();
    let fa: Vec<Predicate> = xs.iter().map(|a| forall_along(alg, f, a).expect("grid predicate")).collect();
    let pulled: Vec<Predicate> = ys.iter().map(|b| reindex(f, b)).collect();
    let mut exists_bad = None;
    let mut forall_bad = None;
    'outer: for (i, alpha) in xs.iter().enumerate() {
        for (j, beta) in ys.iter().enumerate() {
            if exists_bad.is_none() && entails(alg, &ex[i], beta) != entails(alg, alpha, &pulled[j]) {
                exists_bad = Some((i, j));
            }
            if forall_bad.is_none() && entails(alg, &pulled[j], alpha) != entails(alg, beta, &fa[i]) {
                forall_bad = Some((i, j));
            }
            if exists_bad.is_some() && forall_bad.is_some() {
                break 'outer;
            }
        }
    }
    let mut r = VerificationReport::new();
    let map = f.to_string_table();
    for (law, bad) in [(Law::TriposExists, exists_bad), (Law::TriposForall, forall_bad)] {
        let mut finding = match bad {
            None => Finding::pass(subject, law).witness([map.clone()]),
            Some((i, j)) => Finding::fail(subject, law).counterexample([map.clone(), names(alg, &xs[i]), names(alg, &ys[j])]),
        };
        if !exhaustive {
            finding = finding.note(format!("grid of {} x {} predicates", xs.len(), ys.len()));
        }
        r.push(finding);
    }
    r
}

/// The fiber product of `h: Y -> W` and `k: Z -> W`, with X listed as pairs (z, y)
/// in lexicographic order; `f: X -> Z` and `g: X -> Y` are the projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackSquare {
    pub h: FinMap,
    pub k: FinMap,
    pub pairs: Vec<(usize, usize)>,
    pub f: FinMap,
    pub g: FinMap,
}

impl PullbackSquare {
    pub fn new(h: FinMap, k: FinMap) -> Result<Self> {
        if h.dst != k.dst {
            return Err(Error::CarrierMismatch(format!("cospan over {} and {}", h.dst, k.dst)));
        }
        let pairs: Vec<(usize, usize)> = (0..k.src).flat_map(|z| (0..h.src).map(move |y| (z, y))).filter(|&(z, y)| k.apply(z) == h.apply(y)).collect();
        let f = FinMap { src: pairs.len(), dst: k.src, table: pairs.iter().map(|p| p.0).collect() };
        let g = FinMap { src: pairs.len(), dst: h.src, table: pairs.iter().map(|p| p.1).collect() };
        Ok(PullbackSquare { h, k, pairs, f, g })
    }

    pub fn label(&self) -> String {
        format!("h={} k={}", self.h.to_string_table(), self.k.to_string_table())
    }

    /// All squares over `|W| <= max_w` with `|Y|, |Z| <= max_side`.
    pub fn all(max_w: usize, max_side: usize) -> Vec<PullbackSquare> {
        let mut out = Vec::new();
        for w in 0..=max_w {
            for ny in 0..=max_side {
                for nz in 0..=max_side {
                    for h in FinMap::all(ny, w) {
                        for k in FinMap::all(nz, w) {
                            out.push(PullbackSquare::new(h.clone(), k).expect("same codomain"));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Beck-Chevalley in both quantifier forms, for both orientations of the square.
pub fn check_beck_chevalley(alg: &ArrowAlgebra, sq: &PullbackSquare, subject: &str) -> VerificationReport {
    let mut forall_bad: Option<Vec<String>> = None;
    let mut exists_bad: Option<Vec<String>> = None;
    // (base map, opposite map, projection onto the base map's domain, projection onto the opposite domain)
    let sides = [(&sq.h, &sq.k, &sq.g, &sq.f), (&sq.k, &sq.h, &sq.f, &sq.g)];
    for (base, opp, proj_base, proj_opp) in sides {
        for beta in predicate_grid(alg, base.src) {
            let pulled = reindex(proj_base, &beta);
            let lhs_all = reindex(opp, &forall_along(alg, base, &beta).expect("grid predicate"));
            let rhs_all = forall_along(alg, proj_opp, &pulled).expect("grid predicate");
            if forall_bad.is_none() && !equivalent(alg, &lhs_all, &rhs_all) {
                forall_bad = Some(vec![sq.label(), names(alg, &beta)]);
            }
            let lhs_ex = reindex(opp, &exists_along(alg, base, &beta).expect("grid predicate"));
            let rhs_ex = exists_along(alg, proj_opp, &pulled).expect("grid predicate");
            if exists_bad.is_none() && !equivalent(alg, &lhs_ex, &rhs_ex) {
                exists_bad = Some(vec![sq.label(), names(alg, &beta)]);
            }
        }
    }
    let mut r = VerificationReport::new();
    for (law, bad) in [(Law::TriposBcForall, forall_bad), (Law::TriposBcExists, exists_bad)] {
        r.push(match bad {
            None => Finding::pass(subject, law).witness([sq.label()]),
            Some(c) => Finding::fail(subject, law).counterexample(c),
        });
    }
    r
}

/// On join-compatible algebras the fiberwise join agrees with the existential up to equivalence.
pub fn check_exists_join(alg: &ArrowAlgebra, f: &FinMap, subject: &str) -> Finding {
    match alg.join_compatible() {
        crate::Decision::Yes => {}
        crate::Decision::No(_) => return Finding::inconclusive(subject, Law::TriposExistsJoin, "algebra is not join-compatible"),
        crate::Decision::Inconclusive(why) => return Finding::inconclusive(subject, Law::TriposExistsJoin, why),
    }
    for alpha in predicate_grid(alg, f.src) {
        let a = exists_along(alg, f, &alpha).expect("grid predicate");
        let b = exists_join(alg, f, &alpha).expect("grid predicate");
        if !equivalent(alg, &a, &b) {
            return Finding::fail(subject, Law::TriposExistsJoin).counterexample([f.to_string_table(), names(alg, &alpha)]);
        }
    }
    Finding::pass(subject, Law::TriposExistsJoin).witness([f.to_string_table()])
}

/// The identity predicate on the carrier reindexed along phi gives back phi.
pub fn generic_element_check(alg: &ArrowAlgebra, max_index: usize, subject: &str) -> VerificationReport {
    let generic: Predicate = alg.elements().collect();
    let mut bad = None;
    for n in 0..=max_index {
        for phi in predicate_grid(alg, n) {
            let classifier = FinMap { src: n, dst: alg.size(), table: phi.clone() };
            if reindex(&classifier, &generic) != phi {
                bad = Some(names(alg, &phi));
            }
        }
    }
    let mut r = VerificationReport::new();
    r.push(match bad {
        None => Finding::pass(subject, Law::TriposGeneric),
        Some(c) => Finding::fail(subject, Law::TriposGeneric).counterexample([c]),
    });
    r
}

/// Postcomposition with a morphism table.
pub fn induced_transformation(f: &[Elem]) -> impl Fn(&[Elem]) -> Predicate + '_ {
    move |phi| phi.iter().map(|&a| f[a]).collect()
}

/// Evaluates a predicate-level transformation at the identity predicate on the carrier.
pub fn recover_morphism(a: &ArrowAlgebra, phi: impl Fn(&[Elem]) -> Option<Predicate>) -> Result<Vec<Elem>> {
    let id: Predicate = a.elements().collect();
    let out = phi(&id).ok_or_else(|| Error::Input("transformation undefined at the carrier index".into()))?;
    if out.len() != a.size() {
        return Err(Error::Shape(format!("transformation returned {} values, expected {}", out.len(), a.size())));
    }
    Ok(out)
}

/// Monotonicity and cartesianness of postcomposition with f over indices up to `max_index`,
/// plus the round trip through `recover_morphism`.
pub fn check_induced(a: &ArrowAlgebra, b: &ArrowAlgebra, f: &[Elem], max_index: usize, subject: &str) -> Result<VerificationReport> {
    morph::validate(a, b, f)?;
    let t = induced_transformation(f);
    let mut mono_bad = None;
    let mut cart_bad = None;
    for n in 0..=max_index {
        let grid = predicate_grid(a, n);
        let top_ok = equivalent(b, &t(&top(a, n)), &top(b, n));
        if !top_ok && cart_bad.is_none() {
            cart_bad = Some(vec![format!("top over {n}")]);
        }
        for phi in &grid {
            for psi in &grid {
                if mono_bad.is_none() && entails(a, phi, psi) && !entails(b, &t(phi), &t(psi)) {
                    mono_bad = Some(vec![names(a, phi), names(a, psi)]);
                }
                if cart_bad.is_none() && !equivalent(b, &t(&product(a, phi, psi)), &product(b, &t(phi), &t(psi))) {
                    cart_bad = Some(vec![names(a, phi), names(a, psi)]);
                }
            }
        }
    }
    let mut r = VerificationReport::new();
    for (law, bad) in [(Law::InducedMonotone, mono_bad), (Law::InducedCartesian, cart_bad)] {
        r.push(match bad {
            None => Finding::pass(subject, law),
            Some(c) => Finding::fail(subject, law).counterexample(c),
        });
    }
    let back = recover_morphism(a, |p| Some(t(p)))?;
    r.push(Finding::from_bool(subject, Law::InducedRecover, back == f));
    Ok(r)
}

/// The predicates alpha over `0..n` with j alpha entailing alpha, together with checks that
/// the inclusion and j-postcomposition are mutually inverse up to equivalence and that the
/// quotient order over the index is alpha entails j beta.
pub fn subtripos_qj(alg: &ArrowAlgebra, j: &[Elem], n: usize, subject: &str) -> Result<(Vec<Predicate>, VerificationReport)> {
    morph::validate(alg, alg, j)?;
    if !is_exhaustive(alg, n) {
        return Err(Error::Cap(format!("{}^{n} predicates exceed {EXHAUSTIVE_CAP}", alg.size())));
    }
    let q = crate::nuclei::quotient(alg, j)?;
    let jt = induced_transformation(j);
    let all = predicate_grid(alg, n);
    let members: Vec<Predicate> = all.iter().filter(|p| entails(alg, &jt(p), p)).cloned().collect();
    let mut bad: Option<Vec<String>> = None;
    for phi in &all {
        let jp = jt(phi);
        // j then inclusion is the identity in the quotient order
        if !equivalent(&q, &jp, phi) {
            bad.get_or_insert_with(|| vec!["quotient round trip".into(), names(alg, phi)]);
        }
        if !entails(alg, &jt(&jp), &jp) {
            bad.get_or_insert_with(|| vec!["j image outside".into(), names(alg, phi)]);
        }
        for psi in &all {
            if entails(&q, phi, psi) != entails(alg, phi, &jt(psi)) {
                bad.get_or_insert_with(|| vec!["order agreement".into(), names(alg, phi), names(alg, psi)]);
            }
        }
    }
    for m in &members {
        if !equivalent(alg, &jt(m), m) {
            bad.get_or_insert_with(|| vec!["inclusion round trip".into(), names(alg, m)]);
        }
    }
    let mut r = VerificationReport::new();
    r.push(match bad {
        None => Finding::pass(subject, Law::Subtripos).witness([format!("{} of {} predicates over {n}", members.len(), all.len())]),
        Some(c) => Finding::fail(subject, Law::Subtripos).counterexample(c),
    });
    Ok((members, r))
}

/// Runs the slice checks over every map between indices of size at most `max_index`.
pub fn check_slice(alg: &ArrowAlgebra, max_index: usize, max_w: usize, subject: &str) -> VerificationReport {
    let mut r = VerificationReport::new();
    let mut adj = Vec::new();
    let mut join = Vec::new();
    let compatible = alg.join_compatible().is_yes();
    for src in 0..=max_index {
        for dst in 0..=max_index {
            for f in FinMap::all(src, dst) {
                adj.push(check_adjointness(alg, &f, subject));
                if compatible {
                    join.push(check_exists_join(alg, &f, subject));
                }
            }
        }
    }
    for law in [Law::TriposExists, Law::TriposForall] {
        r.push(VerificationReport::summarize(subject, law, adj.iter().filter_map(|rep| rep.get(law).cloned()).collect()));
    }
    if compatible {
        r.push(VerificationReport::summarize(subject, Law::TriposExistsJoin, join));
    }
    let bc: Vec<VerificationReport> = PullbackSquare::all(max_w, max_index.min(3)).iter().map(|sq| check_beck_chevalley(alg, sq, subject)).collect();
    for law in [Law::TriposBcForall, Law::TriposBcExists] {
        r.push(VerificationReport::summarize(subject, law, bc.iter().filter_map(|rep| rep.get(law).cloned()).collect()));
    }
    r.extend(generic_element_check(alg, max_index, subject));
    r
}

/// The power algebra passes the separator laws and its entailment is the uniform one.
pub fn check_power(alg: &ArrowAlgebra, n: usize, subject: &str) -> Result<VerificationReport> {
    let p = power_algebra(alg, n)?;
    let mut r = VerificationReport::new();
    let ok = p.is_valid();
    let base = alg.size();
    let agree = p.elements().all(|x| {
        let tx = Lattice::decode_tuple(x, base, n);
        p.elements().all(|y| p.entails(x, y) == entails(alg, &tx, &Lattice::decode_tuple(y, base, n)))
    });
    r.push(if ok && agree {
        Finding::pass(subject, Law::TriposPower).witness([format!("{} elements", p.size())])
    } else {
        Finding::fail(subject, Law::TriposPower).note(if ok { "entailment differs from the uniform form" } else { "power algebra fails the separator laws" })
    });
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> ArrowAlgebra {
        ArrowAlgebra::frame(Lattice::chain(3)).unwrap()
    }

    #[test]
    fn frame_quantifiers_are_fiberwise() {
        let a = chain3();
        let f = FinMap::new(2, vec![0, 0, 1]).unwrap();
        let alpha = vec![1, 2, 0];
        assert_eq!(exists_along(&a, &f, &alpha).unwrap(), vec![2, 0]);
        assert_eq!(forall_along(&a, &f, &alpha).unwrap(), vec![1, 0]);
    }

    #[test]
    fn empty_index_power_is_trivial() {
        let p = power_algebra(&chain3(), 0).unwrap();
        assert_eq!(p.size(), 1);
        assert!(p.is_valid());
    }

    #[test]
    fn pullback_is_fiber_product() {
        let sq = PullbackSquare::new(FinMap::new(2, vec![0, 1, 1]).unwrap(), FinMap::new(2, vec![1, 0]).unwrap()).unwrap();
        assert_eq!(sq.pairs, vec![(0, 1), (0, 2), (1, 0)]);
    }

    #[test]
    fn chain_slice_passes() {
        let r = check_slice(&chain3(), 2, 2, "3-chain");
        assert!(r.passed(), "{}", r.to_text(false));
    }
}
