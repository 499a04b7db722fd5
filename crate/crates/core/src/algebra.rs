//! Arrow structures, separators and the derived logic of an arrow algebra.

use crate::error::{Error, Result};
use crate::lattice::{mask_members, subsets, Elem, Lattice};
use crate::report::{Finding, Law, VerificationReport};
use std::ops::Deref;
use std::sync::OnceLock;

pub const SUBSET_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Combinators {
    pub k: Elem,
    pub s: Elem,
    pub a: Elem,
    pub i: Elem,
    pub b: Elem,
}

/// Answer of a bounded decision procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision<W> {
    Yes,
    No(W),
    Inconclusive(String),
}

impl<W> Decision<W> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes)
    }
}

/// A complete lattice with an implication, antitone on the left and monotone on the right.
#[derive(Debug, Clone)]
pub struct ArrowStructure {
    lat: Lattice,
    imp: Vec<Elem>,
    comb: OnceLock<Combinators>,
    app: OnceLock<Vec<Elem>>,
}

impl PartialEq for ArrowStructure {
    fn eq(&self, other: &Self) -> bool {
        self.lat == other.lat && self.imp == other.imp
    }
}

impl Eq for ArrowStructure {}

impl Deref for ArrowStructure {
    type Target = Lattice;
    fn deref(&self) -> &Lattice {
        &self.lat
    }
}

impl ArrowStructure {
    pub fn new(lat: Lattice, imp: Vec<Elem>) -> Result<Self> {
        let n = lat.size();
        if imp.len() != n * n {
            return Err(Error::Shape(format!("implication table has {} entries, expected {}", imp.len(), n * n)));
        }
        if let Some(&bad) = imp.iter().find(|&&x| x >= n) {
            return Err(Error::Shape(format!("implication value {bad} out of range")));
        }
        let st = ArrowStructure { lat, imp, comb: OnceLock::new(), app: OnceLock::new() };
        if let Some(msg) = st.variance_violation() {
            return Err(Error::Variance(msg));
        }
        Ok(st)
    }

    pub fn from_fn(lat: Lattice, f: impl Fn(Elem, Elem) -> Elem) -> Result<Self> {
        let n = lat.size();
        let mut imp = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                imp.push(f(a, b));
            }
        }
        Self::new(lat, imp)
    }

    /// Heyting implication; fails when the lattice is not distributive.
    pub fn heyting(lat: Lattice) -> Result<Self> {
        let n = lat.size();
        let mut imp = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let h = lat.join_all((0..n).filter(|&c| lat.leq(lat.meet(c, a), b)));
                if !lat.leq(lat.meet(h, a), b) {
                    return Err(Error::NotAFrame(format!("no relative pseudocomplement for {} and {}", lat.name(a), lat.name(b))));
                }
                imp[a * n + b] = h;
            }
        }
        Self::new(lat, imp)
    }

    fn variance_violation(&self) -> Option<String> {
        for (lo, hi) in self.lat.covers() {
            for x in self.lat.elements() {
                if !self.lat.leq(self.imp(hi, x), self.imp(lo, x)) {
                    return Some(format!("{}->{} not below {}->{}", self.name(hi), self.name(x), self.name(lo), self.name(x)));
                }
                if !self.lat.leq(self.imp(x, lo), self.imp(x, hi)) {
                    return Some(format!("{}->{} not below {}->{}", self.name(x), self.name(lo), self.name(x), self.name(hi)));
                }
            }
        }
        None
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lat
    }

    pub fn imp_table(&self) -> &[Elem] {
        &self.imp
    }

    #[inline]
    pub fn imp(&self, a: Elem, b: Elem) -> Elem {
        self.imp[a * self.lat.size() + b]
    }

    /// a -> b -> c, associating to the right.
    #[inline]
    pub fn imp2(&self, a: Elem, b: Elem, c: Elem) -> Elem {
        self.imp(a, self.imp(b, c))
    }

    /// The shift a |-> top -> a.
    #[inline]
    pub fn partial(&self, a: Elem) -> Elem {
        self.imp(self.top(), a)
    }

    pub fn combinators(&self) -> Combinators {
        *self.comb.get_or_init(|| Combinators { k: self.compute_k(), s: self.compute_s(), a: self.compute_a(), i: self.compute_i(), b: self.compute_b() })
    }

    fn compute_k(&self) -> Elem {
        let e = self.elements();
        self.meet_all(e.clone().flat_map(|a| e.clone().map(move |b| (a, b))).map(|(a, b)| self.imp2(a, b, a)))
    }

    fn compute_s(&self) -> Elem {
        let mut acc = self.top();
        for a in self.elements() {
            for b in self.elements() {
                let ab = self.imp(a, b);
                for c in self.elements() {
                    let t = self.imp2(self.imp2(a, b, c), ab, self.imp(a, c));
                    acc = self.meet(acc, t);
                }
            }
        }
        acc
    }

    fn compute_i(&self) -> Elem {
        self.meet_all(self.elements().map(|a| self.imp(a, a)))
    }

    fn compute_b(&self) -> Elem {
        let mut acc = self.top();
        for a in self.elements() {
            for b in self.elements() {
                for c in self.elements() {
                    acc = self.meet(acc, self.imp2(self.imp(b, c), self.imp(a, b), self.imp(a, c)));
                }
            }
        }
        acc
    }

    /// Pairs (meet of a->b->c, meet of b->c) over all families of pairs (b, c).
    pub fn family_pairs(&self, a: Elem) -> Vec<(Elem, Elem)> {
        let n = self.size();
        let mut gens: Vec<(Elem, Elem)> = Vec::new();
        let mut seen_gen = vec![false; n * n];
        for b in 0..n {
            for c in 0..n {
                let g = (self.imp2(a, b, c), self.imp(b, c));
                if !seen_gen[g.0 * n + g.1] {
                    seen_gen[g.0 * n + g.1] = true;
                    gens.push(g);
                }
            }
        }
        let start = (self.top(), self.top());
        let mut seen = vec![false; n * n];
        seen[start.0 * n + start.1] = true;
        let mut reached = vec![start];
        let mut idx = 0;
        while idx < reached.len() {
            let (u, v) = reached[idx];
            idx += 1;
            for &(g, h) in &gens {
                let p = (self.meet(u, g), self.meet(v, h));
                if !seen[p.0 * n + p.1] {
                    seen[p.0 * n + p.1] = true;
                    reached.push(p);
                }
            }
        }
        reached
    }

    fn compute_a(&self) -> Elem {
        let mut acc = self.top();
        for a in self.elements() {
            for (u, v) in self.family_pairs(a) {
                acc = self.meet(acc, self.imp2(u, a, v));
            }
        }
        acc
    }

    /// The a combinator as a meet over every set X of pairs (b, c); carriers of at most 3 elements.
    pub fn combinator_a_oracle(&self) -> Elem {
        let n = self.size();
        assert!(n <= 3, "oracle is limited to carriers of at most 3 elements");
        let mut acc = self.top();
        for a in self.elements() {
            for mask in subsets(n * n) {
                let pairs: Vec<(Elem, Elem)> = mask_members(mask).map(|p| (p / n, p % n)).collect();
                let u = self.meet_all(pairs.iter().map(|&(b, c)| self.imp2(a, b, c)));
                let v = self.meet_all(pairs.iter().map(|&(b, c)| self.imp(b, c)));
                acc = self.meet(acc, self.imp2(u, a, v));
            }
        }
        acc
    }

    /// Application `a b`, read from a cached table.
    pub fn apply(&self, a: Elem, b: Elem) -> Elem {
        let n = self.size();
        let table = self.app.get_or_init(|| {
            let mut t = vec![0; n * n];
            for x in 0..n {
                for y in 0..n {
                    t[x * n + y] = self.apply_direct(x, y);
                }
            }
            t
        });
        table[a * n + b]
    }

    /// Application computed from its defining meet.
    pub fn apply_direct(&self, a: Elem, b: Elem) -> Elem {
        let mut acc = self.top();
        for c in self.elements() {
            for d in self.elements() {
                let cd = self.imp(c, d);
                if self.leq(a, self.imp(b, cd)) {
                    acc = self.meet(acc, cd);
                }
            }
        }
        acc
    }

    /// Abstraction of a function on the carrier.
    pub fn abstraction(&self, f: impl Fn(Elem) -> Elem) -> Elem {
        self.meet_all(self.elements().map(|x| self.imp(x, self.partial(f(x)))))
    }
}

/// An arrow structure with a chosen separator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowAlgebra {
    st: ArrowStructure,
    sep: Vec<bool>,
}

impl Deref for ArrowAlgebra {
    type Target = ArrowStructure;
    fn deref(&self) -> &ArrowStructure {
        &self.st
    }
}

impl ArrowAlgebra {
    /// Pairs a structure with a separator; the separator laws are checked by [`ArrowAlgebra::verify`].
    pub fn new(st: ArrowStructure, sep: Vec<bool>) -> Result<Self> {
        if sep.len() != st.size() {
            return Err(Error::Shape(format!("separator mask has {} entries, expected {}", sep.len(), st.size())));
        }
        Ok(ArrowAlgebra { st, sep })
    }

    pub fn with_separator(st: ArrowStructure, members: &[Elem]) -> Result<Self> {
        let mut sep = vec![false; st.size()];
        for &m in members {
            if m >= sep.len() {
                return Err(Error::Shape("separator member out of range".into()));
            }
            sep[m] = true;
        }
        Self::new(st, sep)
    }

    /// A frame viewed as an arrow algebra: Heyting implication and separator {top}.
    pub fn frame(lat: Lattice) -> Result<Self> {
        let st = ArrowStructure::heyting(lat)?;
        let top = st.top();
        Self::with_separator(st, &[top])
    }

    pub fn structure(&self) -> &ArrowStructure {
        &self.st
    }

    pub fn separator_mask(&self) -> &[bool] {
        &self.sep
    }

    pub fn separator(&self) -> Vec<Elem> {
        self.elements().filter(|&a| self.sep[a]).collect()
    }

    #[inline]
    pub fn in_sep(&self, a: Elem) -> bool {
        self.sep[a]
    }

    /// The logical order: a entails b when a -> b is in the separator.
    #[inline]
    pub fn entails(&self, a: Elem, b: Elem) -> bool {
        self.sep[self.imp(a, b)]
    }

    pub fn equivalent(&self, a: Elem, b: Elem) -> bool {
        self.entails(a, b) && self.entails(b, a)
    }

    /// Logical conjunction.
    pub fn product(&self, a: Elem, b: Elem) -> Elem {
        let (pa, pb) = (self.partial(a), self.partial(b));
        self.meet_all(self.elements().map(|z| self.imp(z, self.partial(self.apply(self.apply(z, pa), pb)))))
    }

    /// Logical disjunction.
    pub fn sum(&self, a: Elem, b: Elem) -> Elem {
        self.meet_all(self.elements().map(|c| {
            let pc = self.partial(c);
            self.imp2(self.imp(a, pc), self.imp(b, pc), pc)
        }))
    }

    pub fn is_trivial(&self) -> bool {
        self.sep[self.bottom()]
    }

    /// Separator {top} and the Heyting implication of the underlying lattice.
    pub fn is_frame(&self) -> bool {
        self.separator() == vec![self.top()] && ArrowStructure::heyting(self.lattice().clone()).is_ok_and(|h| h.imp_table() == self.imp_table())
    }

    pub fn is_binary_implicative(&self) -> bool {
        self.binary_implicative_violation().is_none()
    }

    /// A triple (a, b, c) with a -> (b meet c) different from (a -> b) meet (a -> c).
    pub fn binary_implicative_violation(&self) -> Option<(Elem, Elem, Elem)> {
        let e = || self.elements();
        e().flat_map(|a| e().flat_map(move |b| e().map(move |c| (a, b, c))))
            .find(|&(a, b, c)| self.imp(a, self.meet(b, c)) != self.meet(self.imp(a, b), self.imp(a, c)))
    }

    pub fn is_modifiable(&self) -> bool {
        self.is_binary_implicative() && self.elements().all(|a| self.imp(self.bottom(), a) == self.top())
    }

    /// The meet of (top -> a) -> a over all a lies in the separator.
    pub fn partial_shift_holds(&self) -> bool {
        self.in_sep(self.meet_all(self.elements().map(|a| self.imp(self.partial(a), a))))
    }

    /// (join B) -> a equals the meet of b -> a over b in B, for all subsets B.
    pub fn join_compatible(&self) -> Decision<(Vec<Elem>, Elem)> {
        let n = self.size();
        if n > SUBSET_CAP {
            return Decision::Inconclusive(format!("carrier of size {n} exceeds subset cap {SUBSET_CAP}"));
        }
        for mask in subsets(n) {
            let members: Vec<Elem> = mask_members(mask).collect();
            let j = self.join_all(members.iter().copied());
            for a in self.elements() {
                let rhs = self.meet_all(members.iter().map(|&b| self.imp(b, a)));
                if self.imp(j, a) != rhs {
                    return Decision::No((members, a));
                }
            }
        }
        Decision::Yes
    }

    /// Existential value of a family: meet over a of (meet of t -> partial a) -> partial partial a.
    pub fn exists_of(&self, ts: &[Elem]) -> Elem {
        self.meet_all(self.elements().map(|a| {
            let pa = self.partial(a);
            let hyp = self.meet_all(ts.iter().map(|&t| self.imp(t, pa)));
            self.imp(hyp, self.partial(pa))
        }))
    }

    /// Universal value of a family: meet of the shifted members.
    pub fn forall_of(&self, ts: &[Elem]) -> Elem {
        self.meet_all(ts.iter().map(|&t| self.partial(t)))
    }

    pub fn names_of(&self, xs: &[Elem]) -> Vec<String> {
        xs.iter().map(|&x| self.name(x).to_string()).collect()
    }

    /// Checks the separator laws.
    pub fn verify(&self, subject: &str) -> VerificationReport {
        let mut r = VerificationReport::new();
        r.push(Finding::pass(subject, Law::StructureOrder));
        r.push(Finding::pass(subject, Law::StructureVariance));

        let upward = self.elements().flat_map(|a| self.elements().map(move |b| (a, b))).find(|&(a, b)| self.leq(a, b) && self.sep[a] && !self.sep[b]);
        r.push(match upward {
            None => Finding::pass(subject, Law::SepUpward),
            Some((a, b)) => Finding::fail(subject, Law::SepUpward).counterexample(self.names_of(&[a, b])),
        });

        let mp = self.elements().flat_map(|a| self.elements().map(move |b| (a, b))).find(|&(a, b)| self.sep[self.imp(a, b)] && self.sep[a] && !self.sep[b]);
        r.push(match mp {
            None => Finding::pass(subject, Law::SepModusPonens),
            Some((a, b)) => Finding::fail(subject, Law::SepModusPonens).counterexample(self.names_of(&[a, b])),
        });

        let c = self.combinators();
        for (law, v) in [(Law::SepK, c.k), (Law::SepS, c.s), (Law::SepA, c.a), (Law::SepI, c.i), (Law::SepB, c.b)] {
            let f = if self.sep[v] { Finding::pass(subject, law).witness([self.name(v)]) } else { Finding::fail(subject, law).counterexample([self.name(v)]) };
            r.push(f);
        }
        r
    }

    pub fn is_valid(&self) -> bool {
        self.verify("").passed()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two() -> ArrowAlgebra {
        ArrowAlgebra::frame(Lattice::chain(2)).unwrap()
    }

    #[test]
    fn heyting_on_three_chain() {
        let a = ArrowAlgebra::frame(Lattice::chain(3)).unwrap();
        assert_eq!(a.imp(2, 1), 1);
        assert_eq!(a.imp(1, 0), 0);
        assert_eq!(a.imp(0, 1), 2);
        assert!(a.verify("c3").passed());
    }

    #[test]
    fn frame_combinators_are_top() {
        let a = two();
        let c = a.combinators();
        assert_eq!([c.k, c.s, c.a, c.i, c.b], [1; 5]);
    }

    #[test]
    fn variance_is_enforced() {
        let lat = Lattice::chain(2);
        let err = ArrowStructure::new(lat, vec![0, 1, 1, 1]).unwrap_err();
        assert!(matches!(err, Error::Variance(_)));
    }

    #[test]
    fn non_distributive_lattice_is_not_a_frame() {
        let names: Vec<String> = ["0", "a", "b", "c", "1"].iter().map(|s| s.to_string()).collect();
        let lat = Lattice::from_pairs(names, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)], true).unwrap();
        assert!(matches!(ArrowAlgebra::frame(lat), Err(Error::NotAFrame(_))));
    }

    #[test]
    fn missing_separator_members_are_reported() {
        let st = ArrowStructure::heyting(Lattice::chain(3)).unwrap();
        let alg = ArrowAlgebra::with_separator(st, &[1]).unwrap();
        let r = alg.verify("bad");
        assert_eq!(r.first_failure().unwrap().law, Law::SepUpward);
    }

    #[test]
    fn trivial_algebra_is_trivial() {
        let st = ArrowStructure::heyting(Lattice::chain(2)).unwrap();
        let alg = ArrowAlgebra::with_separator(st, &[0, 1]).unwrap();
        assert!(alg.verify("t").passed());
        assert!(alg.is_trivial());
    }

    #[test]
    fn a_fixpoint_matches_subset_oracle() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for lat in crate::gen::small_lattices(3) {
            for _ in 0..20 {
                let st = crate::gen::random_structure(&lat, &mut rng);
                assert_eq!(st.combinators().a, st.combinator_a_oracle());
            }
        }
    }
}
