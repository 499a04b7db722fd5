//! The Sierpinski construction, its open and closed nuclei and the modification.

use crate::algebra::{ArrowAlgebra, ArrowStructure};
use crate::error::{Error, Result};
use crate::lattice::{Elem, Lattice};
use crate::morph::{self, classify, compose, identity, is_adjoint_pair, is_implicative, monotonize, morphism_equiv, morphism_leq, Classification};
use crate::nuclei::{check_nucleus, quotient};
use crate::report::{Finding, Law, VerificationReport};
use crate::tripos;

/// Pairs x0 <= x1 of base elements with the twisted implication.
#[derive(Debug, Clone)]
pub struct Sierpinski {
    pub base: ArrowAlgebra,
    pub alg: ArrowAlgebra,
    pairs: Vec<(Elem, Elem)>,
    lookup: Vec<Option<Elem>>,
}

impl Sierpinski {
    pub fn new(base: &ArrowAlgebra) -> Result<Self> {
        if !base.is_binary_implicative() {
            return Err(Error::Precondition("base algebra is not binary implicative".into()));
        }
        let n = base.size();
        let pairs: Vec<(Elem, Elem)> = base.elements().flat_map(|x| base.elements().filter(move |&y| base.leq(x, y)).map(move |y| (x, y))).collect();
        let mut lookup = vec![None; n * n];
        for (i, &(x, y)) in pairs.iter().enumerate() {
            lookup[x * n + y] = Some(i);
        }
        let names: Vec<String> = pairs.iter().map(|&(x, y)| format!("({},{})", base.name(x), base.name(y))).collect();
        let lat = Lattice::from_fn(names, |i, j| base.leq(pairs[i].0, pairs[j].0) && base.leq(pairs[i].1, pairs[j].1))?;
        let st = ArrowStructure::from_fn(lat, |i, j| {
            let ((x0, x1), (y0, y1)) = (pairs[i], pairs[j]);
            let second = base.imp(x1, y1);
            lookup[base.meet(base.imp(x0, y0), second) * n + second].expect("meet lies below its argument")
        })?;
        let sep = pairs.iter().map(|&(x0, _)| base.in_sep(x0)).collect();
        let alg = ArrowAlgebra::new(st, sep)?;
        Ok(Sierpinski { base: base.clone(), alg, pairs, lookup })
    }

    pub fn pair(&self, x: Elem) -> (Elem, Elem) {
        self.pairs[x]
    }

    pub fn elem(&self, x0: Elem, x1: Elem) -> Option<Elem> {
        self.lookup.get(x0 * self.base.size() + x1).copied().flatten()
    }

    /// The element (bottom, top).
    pub fn bottom_top(&self) -> Elem {
        self.elem(self.base.bottom(), self.base.top()).expect("bottom below top")
    }

    pub fn pi1(&self) -> Vec<Elem> {
        self.pairs.iter().map(|p| p.1).collect()
    }

    pub fn pi0(&self) -> Vec<Elem> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn delta(&self) -> Vec<Elem> {
        self.base.elements().map(|a| self.elem(a, a).expect("diagonal")).collect()
    }

    /// o(x) = (bottom, top) -> x.
    pub fn open_nucleus(&self) -> Vec<Elem> {
        let bt = self.bottom_top();
        self.alg.elements().map(|x| self.alg.imp(bt, x)).collect()
    }

    /// c(x) = x + (bottom, top).
    pub fn closed_nucleus(&self) -> Vec<Elem> {
        let bt = self.bottom_top();
        self.alg.elements().map(|x| self.alg.sum(x, bt)).collect()
    }

    pub fn verify(&self, subject: &str) -> VerificationReport {
        let mut r = VerificationReport::new();
        let inner = self.alg.verify(subject);
        r.push(match inner.first_failure() {
            None => Finding::pass(subject, Law::SierpAlgebra).witness([format!("{} elements", self.alg.size())]),
            Some(f) => Finding::fail(subject, Law::SierpAlgebra).counterexample(f.counterexample.clone()).note(f.law.id()),
        });
        r.push(Finding::from_bool(subject, Law::SierpBinary, self.alg.is_binary_implicative()));
        let joins = self
            .alg
            .elements()
            .flat_map(|x| self.alg.elements().map(move |y| (x, y)))
            .find(|&(x, y)| self.pair(self.alg.sum(x, y)).1 != self.base.sum(self.pair(x).1, self.pair(y).1));
        r.push(match joins {
            None => Finding::pass(subject, Law::SierpJoins),
            Some((x, y)) => Finding::fail(subject, Law::SierpJoins).counterexample(self.alg.names_of(&[x, y])),
        });
        r
    }

    /// The projection and diagonal: both implicative, i below the projection's certificate,
    /// and the pair classifies as a surjection.
    pub fn check_pi1_delta(&self, subject: &str) -> Result<VerificationReport> {
        let (p, d) = (self.pi1(), self.delta());
        let mut r = VerificationReport::new();
        let pair = morph::check_adjoint_pair(&self.alg, &self.base, &p, &d, subject)?;
        let cert = morph::realizer(&self.alg, &self.base, &p);
        let i = self.base.combinators().i;
        let c = classify(&self.alg, &self.base, &p, &d);
        let ok = pair.passed() && self.base.leq(i, cert) && c.surjection;
        r.push(Finding::from_bool(subject, Law::SierpProjection, ok).witness([self.base.name(cert)]).note(c.label()));
        Ok(r)
    }

    /// Both nuclei pass the nucleus laws; on modifiable bases o is equivalent to delta after pi1.
    pub fn check_nuclei(&self, subject: &str) -> Result<VerificationReport> {
        let mut r = VerificationReport::new();
        for (law, j) in [(Law::OpenNucleus, self.open_nucleus()), (Law::ClosedNucleus, self.closed_nucleus())] {
            let rep = check_nucleus(&self.alg, &j, subject)?;
            r.push(match rep.first_failure() {
                None => Finding::pass(subject, law).witness([table_names(&self.alg, &j)]),
                Some(f) => Finding::fail(subject, law).counterexample(f.counterexample.clone()).note(f.law.id()),
            });
        }
        r.push(if self.base.is_modifiable() {
            let dp = compose(&self.delta(), &self.pi1());
            Finding::from_bool(subject, Law::OpenIsProjection, morphism_equiv(&self.alg, &self.open_nucleus(), &dp))
        } else {
            Finding::inconclusive(subject, Law::OpenIsProjection, "base is not modifiable")
        });
        Ok(r)
    }

    /// The lift of f: monotonize, then apply componentwise.
    pub fn lift(&self, target: &Sierpinski, f: &[Elem]) -> Result<Vec<Elem>> {
        morph::validate(&self.base, &target.base, f)?;
        if !is_implicative(&self.base, &target.base, f) {
            return Err(Error::Precondition("map is not implicative".into()));
        }
        Ok(self.lift_unchecked(target, f))
    }

    fn lift_unchecked(&self, target: &Sierpinski, f: &[Elem]) -> Vec<Elem> {
        let m = monotonize(&self.base, &target.base, f);
        self.pairs.iter().map(|&(x0, x1)| target.elem(m[x0], m[x1]).expect("monotone image of a pair")).collect()
    }

    /// Whether the first projection with the diagonal happens to form an adjoint pair, and how it classifies.
    pub fn pi0_inclusion(&self) -> Option<Classification> {
        let (p, d) = (self.pi0(), self.delta());
        if is_implicative(&self.alg, &self.base, &p) && is_adjoint_pair(&self.alg, &self.base, &p, &d) {
            Some(classify(&self.alg, &self.base, &p, &d))
        } else {
            None
        }
    }
}

fn table_names(alg: &ArrowAlgebra, t: &[Elem]) -> String {
    t.iter().enumerate().map(|(x, &y)| format!("{}>{}", alg.name(x), alg.name(y))).collect::<Vec<_>>().join(" ")
}

pub fn sierpinski(base: &ArrowAlgebra) -> Result<Sierpinski> {
    Sierpinski::new(base)
}

/// Lift checks for f with optional right adjoint h: the lift is implicative, lifts adjoints,
/// and commutes with the diagonal and the second projection up to equivalence.
pub fn check_lift(a: &Sierpinski, b: &Sierpinski, f: &[Elem], h: Option<&[Elem]>, subject: &str) -> Result<VerificationReport> {
    let fl = a.lift(b, f)?;
    let mut r = VerificationReport::new();
    r.push(Finding::from_bool(subject, Law::LiftImplicative, is_implicative(&a.alg, &b.alg, &fl)));
    if let Some(h) = h {
        if is_adjoint_pair(&a.base, &b.base, f, h) {
            let hl = b.lift(a, h)?;
            r.push(Finding::from_bool(subject, Law::LiftAdjoint, is_adjoint_pair(&a.alg, &b.alg, &fl, &hl)));
        } else {
            r.push(Finding::inconclusive(subject, Law::LiftAdjoint, "supplied map is not a right adjoint"));
        }
    }
    let delta_square = morphism_equiv(&b.alg, &compose(&fl, &a.delta()), &compose(&b.delta(), f));
    let pi_square = morphism_equiv(&b.base, &compose(&b.pi1(), &fl), &compose(f, &a.pi1()));
    r.push(
        Finding::from_bool(subject, Law::LiftCommutes, delta_square && pi_square).note(format!("delta square {delta_square}, projection square {pi_square}")),
    );
    Ok(r)
}

/// The quotient of the Sierpinski algebra by its closed nucleus, on the same carrier.
#[derive(Debug, Clone)]
pub struct Modified {
    pub sierp: Sierpinski,
    pub c: Vec<Elem>,
    pub alg: ArrowAlgebra,
}

impl Modified {
    pub fn new(base: &ArrowAlgebra) -> Result<Self> {
        if !base.is_modifiable() {
            return Err(Error::Precondition("base algebra is not modifiable".into()));
        }
        let sierp = Sierpinski::new(base)?;
        let c = sierp.closed_nucleus();
        let alg = quotient(&sierp.alg, &c)?;
        Ok(Modified { sierp, c, alg })
    }

    /// f^m = f^-> after c.
    pub fn lift(&self, target: &Modified, f: &[Elem]) -> Result<Vec<Elem>> {
        Ok(compose(&self.sierp.lift(&target.sierp, f)?, &self.c))
    }

    /// The family {alpha over 0..n in the Sierpinski power | top entails every second component uniformly},
    /// compared with the closed subtripos at the same index.
    pub fn modified_predicates(&self, n: usize, subject: &str) -> Result<(Vec<tripos::Predicate>, VerificationReport)> {
        let s = &self.sierp;
        let base = &s.base;
        let (q, mut r) = tripos::subtripos_qj(&s.alg, &self.c, n, subject)?;
        let members: Vec<tripos::Predicate> = tripos::predicate_grid(&s.alg, n)
            .into_iter()
            .filter(|alpha| base.in_sep(base.meet_all(alpha.iter().map(|&x| base.partial(s.pair(x).1)))))
            .collect();
        let top = tripos::top(&s.alg, n);
        let top_in = members.contains(&top);
        let same = members == q;
        r.push(Finding::from_bool(subject, Law::ModPredicates, top_in && same).witness([format!("{} predicates over {n}", members.len())]).note(if same {
            "matches the closed subtripos".to_string()
        } else {
            format!("closed subtripos has {} predicates", q.len())
        }));
        Ok((members, r))
    }
}

pub fn modification(base: &ArrowAlgebra) -> Result<Modified> {
    Modified::new(base)
}

/// c f^-> c entails f^-> c in the target Sierpinski algebra.
pub fn lemma_914_check(a: &Modified, b: &Modified, f: &[Elem], subject: &str) -> Result<VerificationReport> {
    let fc = compose(&a.sierp.lift(&b.sierp, f)?, &a.c);
    let cfc = compose(&b.c, &fc);
    let mut r = VerificationReport::new();
    r.push(Finding::from_bool(subject, Law::ModClosedLift, morphism_leq(&b.sierp.alg, &cfc, &fc)));
    Ok(r)
}

/// f^->(bottom, top) is equivalent to (bottom, top).
pub fn pullback_condition(a: &Sierpinski, b: &Sierpinski, f: &[Elem], subject: &str) -> Result<VerificationReport> {
    let fl = a.lift(b, f)?;
    let image = fl[a.bottom_top()];
    let bt = b.bottom_top();
    let mut r = VerificationReport::new();
    r.push(Finding::from_bool(subject, Law::ModPullback, b.alg.equivalent(image, bt)).witness([b.alg.name(image)]));
    Ok(r)
}

/// Checks for f: A -> B with optional right adjoint h: the modified lift is implicative,
/// id^m is equivalent to the identity, adjoints lift, and c h^m is equivalent to h^-> c.
pub fn check_modified_lift(a: &Modified, b: &Modified, f: &[Elem], h: Option<&[Elem]>, subject: &str) -> Result<VerificationReport> {
    let fm = a.lift(b, f)?;
    let mut r = VerificationReport::new();
    r.push(Finding::from_bool(subject, Law::ModImplicative, is_implicative(&a.alg, &b.alg, &fm)));
    let ida = a.lift(a, &identity(&a.sierp.base))?;
    let idb = b.lift(b, &identity(&b.sierp.base))?;
    let id_ok = morphism_equiv(&a.alg, &ida, &identity(&a.alg)) && morphism_equiv(&b.alg, &idb, &identity(&b.alg)) && morphism_equiv(&a.alg, &ida, &a.c);
    r.push(Finding::from_bool(subject, Law::ModPseudofunctor, id_ok).note("identity"));
    if let Some(h) = h {
        if is_adjoint_pair(&a.sierp.base, &b.sierp.base, f, h) {
            let hm = b.lift(a, h)?;
            r.push(Finding::from_bool(subject, Law::ModAdjoint, is_adjoint_pair(&a.alg, &b.alg, &fm, &hm)));
            let hl = b.sierp.lift(&a.sierp, h)?;
            let square = morphism_equiv(&a.sierp.alg, &compose(&a.c, &hm), &compose(&hl, &b.c));
            r.push(Finding::from_bool(subject, Law::ModSquare, square));
        } else {
            r.push(Finding::inconclusive(subject, Law::ModAdjoint, "supplied map is not a right adjoint"));
        }
    }
    r.extend(lemma_914_check(a, b, f, subject)?);
    r.extend(pullback_condition(&a.sierp, &b.sierp, f, subject)?);
    Ok(r)
}

/// Composition laws for a composable pair f: A -> B, g: B -> C, at both the Sierpinski and modified level.
pub fn check_pseudofunctor(a: &Modified, b: &Modified, c: &Modified, f: &[Elem], g: &[Elem], subject: &str) -> Result<VerificationReport> {
    let gf = compose(g, f);
    let arrow = morphism_equiv(&c.sierp.alg, &a.sierp.lift(&c.sierp, &gf)?, &compose(&b.sierp.lift(&c.sierp, g)?, &a.sierp.lift(&b.sierp, f)?));
    let arrow_id = morphism_equiv(&a.sierp.alg, &a.sierp.lift(&a.sierp, &identity(&a.sierp.base))?, &identity(&a.sierp.alg));
    let modified = morphism_equiv(&c.alg, &a.lift(c, &gf)?, &compose(&b.lift(c, g)?, &a.lift(b, f)?));
    let mut r = VerificationReport::new();
    r.push(Finding::from_bool(subject, Law::LiftImplicative, is_implicative(&a.sierp.alg, &c.sierp.alg, &a.sierp.lift(&c.sierp, &gf)?)));
    r.push(
        Finding::from_bool(subject, Law::ModPseudofunctor, arrow && arrow_id && modified)
            .note(format!("arrow composite {arrow}, arrow identity {arrow_id}, modified composite {modified}")),
    );
    Ok(r)
}


#[cfg(test)]
mod sweep {
    use super::*;
    use crate::gen;
    use crate::morph::{frame_homomorphisms, frame_right_adjoint};
    use crate::pca::{downset_arrow_algebra, Pca};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn full_checks(base: &ArrowAlgebra) {
        let s = sierpinski(base).unwrap();
        let v = s.verify("s");
        assert!(v.passed(), "{}", v.to_text(false));
        assert!(s.check_pi1_delta("s").unwrap().passed());
        let n = s.check_nuclei("s").unwrap();
        assert!(n.passed(), "{}", n.to_text(false));
        let m = modification(base).unwrap();
        let idc = check_modified_lift(&m, &m, &identity(base), Some(&identity(base)), "id").unwrap();
        assert!(idc.passed(), "{}", idc.to_text(false));
        if m.sierp.alg.size() <= 9 {
            let (_, r) = m.modified_predicates(2, "m").unwrap();
            assert!(r.passed(), "{}", r.to_text(false));
        }
    }

    #[test]
    fn frames_and_downsets() {
        let mut bases: Vec<ArrowAlgebra> = (1..=4).map(|n| ArrowAlgebra::frame(Lattice::chain(n)).unwrap()).collect();
        bases.push(ArrowAlgebra::frame(Lattice::diamond()).unwrap());
        bases.push(ArrowAlgebra::frame(Lattice::boolean(3)).unwrap());
        bases.push(downset_arrow_algebra(&Pca::trivial()).unwrap());
        for b in &bases {
            assert!(b.is_modifiable());
            full_checks(b);
        }
    }

    #[test]
    fn random_modifiable() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seen = 0;
        for lat in gen::small_lattices(4) {
            for _ in 0..20 {
                let a = gen::random_algebra(&lat, &mut rng);
                if a.is_modifiable() {
                    seen += 1;
                    full_checks(&a);
                }
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn frame_homomorphism_pairs() {
        let frames: Vec<ArrowAlgebra> = vec![
            ArrowAlgebra::frame(Lattice::chain(2)).unwrap(),
            ArrowAlgebra::frame(Lattice::chain(3)).unwrap(),
            ArrowAlgebra::frame(Lattice::diamond()).unwrap(),
        ];
        let mods: Vec<Modified> = frames.iter().map(|f| modification(f).unwrap()).collect();
        for (i, a) in frames.iter().enumerate() {
            for (j, b) in frames.iter().enumerate() {
                for f in frame_homomorphisms(a, b).unwrap() {
                    let h = frame_right_adjoint(a, b, &f);
                    let r = check_lift(&mods[i].sierp, &mods[j].sierp, &f, Some(&h), "f").unwrap();
                    assert!(r.passed(), "{}", r.to_text(false));
                    let r = check_modified_lift(&mods[i], &mods[j], &f, Some(&h), "f").unwrap();
                    assert!(r.passed(), "{} {:?}", r.to_text(false), f);
                    for (k, c) in frames.iter().enumerate() {
                        for g in frame_homomorphisms(b, c).unwrap() {
                            let r = check_pseudofunctor(&mods[i], &mods[j], &mods[k], &f, &g, "gf").unwrap();
                            assert!(r.passed(), "{}", r.to_text(false));
                        }
                    }
                }
            }
        }
    }
}
