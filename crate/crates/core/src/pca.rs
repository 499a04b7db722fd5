//! Finite ordered partial combinatory algebras, bracket abstraction, and the downset and
//! PER arrow algebras they induce.

use crate::algebra::{ArrowAlgebra, ArrowStructure};
use crate::error::{Error, Result};
use crate::lattice::{mask_members, subsets, Elem, Lattice, Poset};
use crate::report::{Finding, Law, VerificationReport};
use std::collections::HashMap;
use std::fmt;

pub const DOWNSET_CAP: usize = 4096;

/// A finite partial applicative poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pap {
    poset: Poset,
    app: Vec<Option<Elem>>,
}

impl Pap {
    pub fn new(poset: Poset, app: Vec<Option<Elem>>) -> Result<Self> {
        let n = poset.size();
        if app.len() != n * n {
            return Err(Error::Shape(format!("application table has {} entries, expected {}", app.len(), n * n)));
        }
        if app.iter().flatten().any(|&v| v >= n) {
            return Err(Error::Shape("application value out of range".into()));
        }
        Ok(Pap { poset, app })
    }

    pub fn from_fn(poset: Poset, f: impl Fn(Elem, Elem) -> Option<Elem>) -> Result<Self> {
        let n = poset.size();
        let app = (0..n * n).map(|i| f(i / n, i % n)).collect();
        Self::new(poset, app)
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        self.poset.elements()
    }

    pub fn name(&self, a: Elem) -> &str {
        self.poset.name(a)
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.poset.leq(a, b)
    }

    #[inline]
    pub fn app(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.app[a * self.size() + b]
    }

    pub fn app2(&self, a: Elem, b: Elem, c: Elem) -> Option<Elem> {
        self.app(a, b).and_then(|ab| self.app(ab, c))
    }

    pub fn table(&self) -> &[Option<Elem>] {
        &self.app
    }

    /// First violation of: a <= a', b <= b', a'b' defined implies ab defined and ab <= a'b'.
    pub fn monotonicity_violation(&self) -> Option<[Elem; 4]> {
        for a in self.elements() {
            for a2 in self.elements() {
                if !self.leq(a, a2) {
                    continue;
                }
                for b in self.elements() {
                    for b2 in self.elements() {
                        if !self.leq(b, b2) {
                            continue;
                        }
                        if let Some(v2) = self.app(a2, b2) {
                            match self.app(a, b) {
                                Some(v) if self.leq(v, v2) => {}
                                _ => return Some([a, a2, b, b2]),
                            }
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_filter(&self, filter: &[bool]) -> bool {
        self.filter_violation(filter).is_none()
    }

    fn filter_violation(&self, filter: &[bool]) -> Option<(Law, Vec<Elem>)> {
        for a in self.elements() {
            for b in self.elements() {
                if filter[a] && self.leq(a, b) && !filter[b] {
                    return Some((Law::FilterUpward, vec![a, b]));
                }
                if filter[a] && filter[b] {
                    if let Some(v) = self.app(a, b) {
                        if !filter[v] {
                            return Some((Law::FilterApplication, vec![a, b]));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_k(&self, k: Elem) -> bool {
        self.elements().all(|a| self.elements().all(|b| matches!(self.app2(k, a, b), Some(v) if self.leq(v, a))))
    }

    pub fn s_defined(&self, s: Elem) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.app2(s, a, b).is_some()))
    }

    pub fn s_reduces(&self, s: Elem) -> bool {
        self.s_reduction_violation(s).is_none()
    }

    fn s_reduction_violation(&self, s: Elem) -> Option<[Elem; 3]> {
        for a in self.elements() {
            for b in self.elements() {
                for c in self.elements() {
                    let rhs = match (self.app(a, c), self.app(b, c)) {
                        (Some(ac), Some(bc)) => self.app(ac, bc),
                        _ => None,
                    };
                    if let Some(r) = rhs {
                        let lhs = self.app2(s, a, b).and_then(|sab| self.app(sab, c));
                        if !matches!(lhs, Some(l) if self.leq(l, r)) {
                            return Some([a, b, c]);
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_s(&self, s: Elem) -> bool {
        self.s_defined(s) && self.s_reduces(s)
    }
}

/// Filter elements k and s making the structure a PCA, chosen in carrier order.
pub fn find_ks(pap: &Pap, filter: &[bool]) -> Option<(Elem, Elem)> {
    if pap.monotonicity_violation().is_some() || !pap.is_filter(filter) {
        return None;
    }
    let k = pap.elements().find(|&k| filter[k] && pap.is_k(k))?;
    let s = pap.elements().find(|&s| filter[s] && pap.is_s(s))?;
    Some((k, s))
}

/// A finite ordered PCA with a filter of designated elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pca {
    pap: Pap,
    filter: Vec<bool>,
    k: Elem,
    s: Elem,
}

impl std::ops::Deref for Pca {
    type Target = Pap;
    fn deref(&self) -> &Pap {
        &self.pap
    }
}

impl Pca {
    /// Assembles a PCA; the axioms are checked by [`Pca::verify`].
    pub fn new(pap: Pap, filter: Vec<bool>, k: Elem, s: Elem) -> Result<Self> {
        if filter.len() != pap.size() || k >= pap.size() || s >= pap.size() {
            return Err(Error::Shape("filter or combinator out of range".into()));
        }
        Ok(Pca { pap, filter, k, s })
    }

    /// Assembles a PCA with combinators found by search.
    pub fn search(pap: Pap, filter: Vec<bool>) -> Result<Self> {
        let (k, s) = find_ks(&pap, &filter).ok_or_else(|| Error::Input("no combinators k and s in the filter".into()))?;
        Self::new(pap, filter, k, s)
    }

    /// The one-element PCA with total application.
    pub fn trivial() -> Self {
        let poset = Poset::discrete(vec!["*".into()]).expect("one point");
        let pap = Pap::new(poset, vec![Some(0)]).expect("table");
        Pca::new(pap, vec![true], 0, 0).expect("shape")
    }

    pub fn pap(&self) -> &Pap {
        &self.pap
    }

    pub fn k(&self) -> Elem {
        self.k
    }

    pub fn s(&self) -> Elem {
        self.s
    }

    pub fn filter(&self) -> &[bool] {
        &self.filter
    }

    pub fn in_filter(&self, a: Elem) -> bool {
        self.filter[a]
    }

    pub fn verify(&self, subject: &str) -> VerificationReport {
        let mut r = VerificationReport::new();
        let names = |xs: &[Elem]| xs.iter().map(|&x| self.name(x).to_string()).collect::<Vec<_>>();
        r.push(match self.monotonicity_violation() {
            None => Finding::pass(subject, Law::PapMonotone),
            Some(w) => Finding::fail(subject, Law::PapMonotone).counterexample(names(&w)),
        });
        let fv = self.filter_violation(&self.filter);
        for law in [Law::FilterUpward, Law::FilterApplication] {
            r.push(match &fv {
                Some((l, w)) if *l == law => Finding::fail(subject, law).counterexample(names(w)),
                _ => Finding::pass(subject, law),
            });
        }
        let k_ok = self.filter[self.k] && self.is_k(self.k);
        r.push(Finding::from_bool(subject, Law::PcaK, k_ok).witness([self.name(self.k)]));
        let s_def = self.filter[self.s] && self.s_defined(self.s);
        r.push(Finding::from_bool(subject, Law::PcaSDefined, s_def).witness([self.name(self.s)]));
        r.push(match self.s_reduction_violation(self.s) {
            None => Finding::pass(subject, Law::PcaSReduction).witness([self.name(self.s)]),
            Some(w) => Finding::fail(subject, Law::PcaSReduction).counterexample(names(&w)),
        });
        r
    }
}

/// Applicative terms over a PCA.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PTerm {
    Var(String),
    Const(Elem),
    App(Box<PTerm>, Box<PTerm>),
}

impl PTerm {
    pub fn var(x: &str) -> PTerm {
        PTerm::Var(x.to_string())
    }

    pub fn app(m: PTerm, n: PTerm) -> PTerm {
        PTerm::App(Box::new(m), Box::new(n))
    }

    /// Left-nested application of a head to arguments.
    pub fn apps(head: PTerm, args: impl IntoIterator<Item = PTerm>) -> PTerm {
        args.into_iter().fold(head, PTerm::app)
    }

    fn consts(&self, out: &mut Vec<Elem>) {
        match self {
            PTerm::Var(_) => {}
            PTerm::Const(c) => out.push(*c),
            PTerm::App(m, n) => {
                m.consts(out);
                n.consts(out);
            }
        }
    }
}

impl fmt::Display for PTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PTerm::Var(x) => f.write_str(x),
            PTerm::Const(c) => write!(f, "#{c}"),
            PTerm::App(m, n) => {
                if matches!(**n, PTerm::App(..)) {
                    write!(f, "{m} ({n})")
                } else {
                    write!(f, "{m} {n}")
                }
            }
        }
    }
}

/// Evaluates a term; `None` means undefined.
pub fn eval_term(pap: &Pap, t: &PTerm, env: &HashMap<String, Elem>) -> Result<Option<Elem>> {
    Ok(match t {
        PTerm::Var(x) => Some(*env.get(x).ok_or_else(|| Error::Input(format!("unbound variable `{x}`")))?),
        PTerm::Const(c) => Some(*c),
        PTerm::App(m, n) => match (eval_term(pap, m, env)?, eval_term(pap, n, env)?) {
            (Some(a), Some(b)) => pap.app(a, b),
            _ => None,
        },
    })
}

/// e is below e' in the Kleene sense: if e' is defined, so is e, and e <= e'.
pub fn kleene_leq(pap: &Pap, e: Option<Elem>, e2: Option<Elem>) -> bool {
    match e2 {
        None => true,
        Some(v2) => matches!(e, Some(v) if pap.leq(v, v2)),
    }
}

/// Abstraction of one variable that never shortcuts applications, so the result is always defined.
fn abstract_var(pca: &Pca, x: &str, t: PTerm) -> PTerm {
    let k = PTerm::Const(pca.k);
    let s = PTerm::Const(pca.s);
    match t {
        PTerm::Var(ref y) if y == x => PTerm::apps(s, [k.clone(), k]),
        PTerm::Var(_) | PTerm::Const(_) => PTerm::app(k, t),
        PTerm::App(m, n) => PTerm::apps(s, [abstract_var(pca, x, *m), abstract_var(pca, x, *n)]),
    }
}

/// The combinator term for λ* over `vars` (non-empty) of `t`.
pub fn bracket_term(pca: &Pca, vars: &[&str], t: &PTerm) -> Result<PTerm> {
    if vars.is_empty() {
        return Err(Error::Input("bracket abstraction needs at least one variable".into()));
    }
    let out = vars.iter().rev().fold(t.clone(), |acc, x| abstract_var(pca, x, acc));
    if let Some(x) = free_vars(&out).into_iter().next() {
        return Err(Error::Input(format!("variable `{x}` is not abstracted")));
    }
    Ok(out)
}

fn free_vars(t: &PTerm) -> Vec<String> {
    match t {
        PTerm::Var(x) => vec![x.clone()],
        PTerm::Const(_) => vec![],
        PTerm::App(m, n) => {
            let mut v = free_vars(m);
            v.extend(free_vars(n));
            v
        }
    }
}

/// The element λ*vars.t.
pub fn bracket(pca: &Pca, vars: &[&str], t: &PTerm) -> Result<Elem> {
    let term = bracket_term(pca, vars, t)?;
    eval_term(pca, &term, &HashMap::new())?.ok_or_else(|| Error::Input("bracket abstraction is undefined".into()))
}

/// Exhaustively checks definedness, the Kleene reduction inequality and the filter property.
pub fn check_bracket(pca: &Pca, subject: &str, vars: &[&str], t: &PTerm) -> VerificationReport {
    let mut r = VerificationReport::new();
    let label = format!("\\{}. {t}", vars.join(" "));
    let e = match bracket(pca, vars, t) {
        Ok(e) => e,
        Err(err) => {
            r.push(Finding::fail(subject, Law::BracketDefined).counterexample([label]).note(err.to_string()));
            return r;
        }
    };
    let (params, last) = vars.split_at(vars.len() - 1);
    let n = pca.size();
    let mut undefined = None;
    let mut kleene = None;
    let count = n.pow(params.len() as u32);
    for code in 0..count {
        let args: Vec<Elem> = (0..params.len()).map(|i| code / n.pow(i as u32) % n).collect();
        let mut cur = Some(e);
        for &a in &args {
            cur = cur.and_then(|c| pca.app(c, a));
        }
        let Some(partial) = cur else {
            undefined.get_or_insert(args.clone());
            continue;
        };
        for b in pca.elements() {
            let mut env: HashMap<String, Elem> = params.iter().map(|s| s.to_string()).zip(args.iter().copied()).collect();
            env.insert(last[0].to_string(), b);
            let rhs = eval_term(pca, t, &env).unwrap_or(None);
            if !kleene_leq(pca, pca.app(partial, b), rhs) {
                let mut w = args.clone();
                w.push(b);
                kleene.get_or_insert(w);
            }
        }
    }
    let names = |xs: &[Elem]| xs.iter().map(|&x| pca.name(x).to_string()).collect::<Vec<_>>();
    r.push(match undefined {
        None => Finding::pass(subject, Law::BracketDefined).witness([label.clone(), pca.name(e).to_string()]),
        Some(w) => Finding::fail(subject, Law::BracketDefined).counterexample(names(&w)).note(label.clone()),
    });
    r.push(match kleene {
        None => Finding::pass(subject, Law::BracketKleene).witness([label.clone()]),
        Some(w) => Finding::fail(subject, Law::BracketKleene).counterexample(names(&w)).note(label.clone()),
    });
    let mut cs = Vec::new();
    t.consts(&mut cs);
    if cs.iter().all(|&c| pca.in_filter(c)) {
        r.push(Finding::from_bool(subject, Law::BracketFilter, pca.in_filter(e)).witness([label]));
    }
    r
}

/// Derived combinators i, k̄, pairing and projections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Derived {
    pub i: Elem,
    pub kbar: Elem,
    pub pair: Elem,
    pub p0: Elem,
    pub p1: Elem,
}

pub fn derived(pca: &Pca) -> Result<Derived> {
    let x = || PTerm::var("x");
    let i = bracket(pca, &["x"], &x())?;
    let kbar = pca.app(pca.k, i).ok_or_else(|| Error::Input("k i is undefined".into()))?;
    let pair = bracket(pca, &["x", "y", "z"], &PTerm::apps(PTerm::var("z"), [x(), PTerm::var("y")]))?;
    let p0 = bracket(pca, &["x"], &PTerm::app(x(), PTerm::Const(pca.k)))?;
    let p1 = bracket(pca, &["x"], &PTerm::app(x(), PTerm::Const(kbar)))?;
    Ok(Derived { i, kbar, pair, p0, p1 })
}

pub fn check_derived(pca: &Pca, subject: &str) -> VerificationReport {
    let mut r = VerificationReport::new();
    let d = match derived(pca) {
        Ok(d) => d,
        Err(e) => {
            r.push(Finding::fail(subject, Law::PcaIdentity).note(e.to_string()));
            return r;
        }
    };
    let below = |v: Option<Elem>, bound: Elem| matches!(v, Some(x) if pca.leq(x, bound));
    let e = || pca.elements();
    let i_bad = e().find(|&a| !below(pca.app(d.i, a), a));
    r.push(match i_bad {
        None => Finding::pass(subject, Law::PcaIdentity).witness([pca.name(d.i)]),
        Some(a) => Finding::fail(subject, Law::PcaIdentity).counterexample([pca.name(a)]),
    });
    let kbar_bad = e().flat_map(|a| e().map(move |b| (a, b))).find(|&(a, b)| !below(pca.app2(d.kbar, a, b), b));
    r.push(match kbar_bad {
        None => Finding::pass(subject, Law::PcaKbar).witness([pca.name(d.kbar)]),
        Some((a, b)) => Finding::fail(subject, Law::PcaKbar).counterexample([pca.name(a), pca.name(b)]),
    });
    let pair_bad = e().flat_map(|a| e().map(move |b| (a, b))).find(|&(a, b)| {
        let p = pca.app2(d.pair, a, b);
        let first = p.and_then(|p| pca.app(d.p0, p));
        let second = p.and_then(|p| pca.app(d.p1, p));
        !(below(first, a) && below(second, b))
    });
    r.push(match pair_bad {
        None => Finding::pass(subject, Law::PcaPairing).witness([pca.name(d.pair), pca.name(d.p0), pca.name(d.p1)]),
        Some((a, b)) => Finding::fail(subject, Law::PcaPairing).counterexample([pca.name(a), pca.name(b)]),
    });
    let in_filter = [d.i, d.kbar, d.pair, d.p0, d.p1].iter().all(|&c| pca.in_filter(c));
    if !in_filter {
        r.push(Finding::fail(subject, Law::BracketFilter).note("derived combinator outside the filter"));
    }
    r
}

/// Test terms for bracket abstraction.
pub fn bracket_templates(pca: &Pca) -> Vec<(Vec<&'static str>, PTerm)> {
    let v = PTerm::var;
    vec![
        (vec!["x"], v("x")),
        (vec!["x", "y"], v("x")),
        (vec!["x", "y"], v("y")),
        (vec!["x", "y"], PTerm::app(v("y"), v("x"))),
        (vec!["x", "y", "z"], PTerm::apps(v("x"), [v("z"), PTerm::app(v("y"), v("z"))])),
        (vec!["x", "y"], PTerm::apps(PTerm::Const(pca.k()), [v("x"), v("y")])),
        (vec!["x"], PTerm::apps(PTerm::Const(pca.s()), [v("x"), PTerm::Const(pca.k())])),
    ]
}

/// A PCA's downsets, with a lookup from mask to carrier index.
#[derive(Debug, Clone)]
pub struct Downsets {
    pub masks: Vec<u64>,
    pub index: HashMap<u64, Elem>,
}

impl Downsets {
    pub fn of(poset: &Poset) -> Result<Self> {
        let masks = poset.downsets(DOWNSET_CAP)?;
        let index = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Ok(Downsets { masks, index })
    }

    pub fn lookup(&self, mask: u64) -> Elem {
        self.index[&mask]
    }

    /// The principal downset of `a`.
    pub fn principal(&self, poset: &Poset, a: Elem) -> Elem {
        self.lookup(poset.down_closure(1 << a))
    }

    fn names(&self, poset: &Poset) -> Vec<String> {
        self.masks.iter().map(|&m| poset.set_name(m)).collect()
    }

    fn lattice(&self, poset: &Poset) -> Result<Lattice> {
        let m = &self.masks;
        Lattice::from_fn(self.names(poset), |a, b| m[a] & !m[b] == 0)
    }
}

/// Set-wise application of an element to a downset; `None` when some application is undefined.
pub fn apply_to_set(pap: &Pap, a: Elem, set: u64) -> Option<u64> {
    let mut out = 0u64;
    for y in mask_members(set) {
        out |= 1 << pap.app(a, y)?;
    }
    Some(pap.poset().down_closure(out))
}

/// Application of downsets.
pub fn apply_sets(pap: &Pap, s: u64, t: u64) -> Option<u64> {
    let mut out = 0u64;
    for x in mask_members(s) {
        out |= apply_to_set(pap, x, t)?;
    }
    Some(out)
}

fn meets_filter(pca: &Pca, set: u64) -> bool {
    mask_members(set).any(|a| pca.in_filter(a))
}

/// The PCA of downsets, ordered by inclusion.
pub fn downset_pca(pca: &Pca) -> Result<(Pca, Downsets)> {
    let ds = Downsets::of(pca.poset())?;
    let poset = Poset::from_fn(ds.names(pca.poset()), |a, b| ds.masks[a] & !ds.masks[b] == 0)?;
    let pap = Pap::from_fn(poset, |a, b| apply_sets(pca, ds.masks[a], ds.masks[b]).map(|m| ds.lookup(m)))?;
    let filter = ds.masks.iter().map(|&m| meets_filter(pca, m)).collect();
    let k = ds.principal(pca.poset(), pca.k);
    let s = ds.principal(pca.poset(), pca.s);
    Ok((Pca::new(pap, filter, k, s)?, ds))
}

/// The arrow algebra of downsets with realizability implication.
pub fn downset_arrow_algebra(pca: &Pca) -> Result<ArrowAlgebra> {
    let ds = Downsets::of(pca.poset())?;
    let lat = ds.lattice(pca.poset())?;
    let st = ArrowStructure::from_fn(lat, |a, b| {
        let (sa, sb) = (ds.masks[a], ds.masks[b]);
        let raw = pca.elements().filter(|&x| matches!(apply_to_set(pca, x, sa), Some(m) if m & !sb == 0)).fold(0u64, |acc, x| acc | 1 << x);
        ds.lookup(raw)
    })?;
    let sep = ds.masks.iter().map(|&m| meets_filter(pca, m)).collect();
    ArrowAlgebra::new(st, sep)
}

/// Partial equivalence relations on a PCA, as bit masks over pairs.
#[derive(Debug, Clone)]
pub struct PerCarrier {
    pub n: usize,
    pub rels: Vec<u64>,
    pub index: HashMap<u64, Elem>,
}

impl PerCarrier {
    pub fn of(pap: &Pap) -> Result<Self> {
        let n = pap.size();
        if n * n > 20 {
            return Err(Error::Cap(format!("PER enumeration over {n} elements exceeds the cap")));
        }
        let bit = |a: usize, b: usize| 1u64 << (a * n + b);
        let mut rels = Vec::new();
        for mask in subsets(n * n) {
            let has = |a: usize, b: usize| mask & bit(a, b) != 0;
            let pairs: Vec<(usize, usize)> = mask_members(mask).map(|p| (p / n, p % n)).collect();
            let down = pairs.iter().all(|&(a, b)| (0..n).all(|c| (0..n).all(|d| !(pap.leq(c, a) && pap.leq(d, b)) || has(c, d))));
            let sym = pairs.iter().all(|&(a, b)| has(b, a));
            let trans = pairs.iter().all(|&(a, b)| (0..n).all(|c| !has(b, c) || has(a, c)));
            if down && sym && trans {
                rels.push(mask);
            }
        }
        rels.sort_by_key(|&m| (m.count_ones(), m));
        let index = rels.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Ok(PerCarrier { n, rels, index })
    }

    pub fn name(&self, pap: &Pap, mask: u64) -> String {
        let pairs: Vec<String> = mask_members(mask).map(|p| format!("{}~{}", pap.name(p / self.n), pap.name(p % self.n))).collect();
        format!("{{{}}}", pairs.join(","))
    }

    /// The largest relation of the carrier inside `raw`, when it is unique.
    pub fn reflect(&self, raw: u64) -> Option<u64> {
        if self.index.contains_key(&raw) {
            return Some(raw);
        }
        let inside: Vec<u64> = self.rels.iter().copied().filter(|&r| r & !raw == 0).collect();
        let maximal: Vec<u64> = inside.iter().copied().filter(|&r| !inside.iter().any(|&q| q != r && r & !q == 0)).collect();
        (maximal.len() == 1).then(|| maximal[0])
    }
}

/// Raw realizability implication of relations, before reflection into PERs.
pub fn per_raw_implication(pap: &Pap, n: usize, r: u64, s: u64) -> u64 {
    let mut out = 0u64;
    for a in 0..n {
        for a2 in 0..n {
            let ok = mask_members(r).all(|p| {
                let (b, b2) = (p / n, p % n);
                matches!((pap.app(a, b), pap.app(a2, b2)), (Some(x), Some(y)) if s >> (x * n + y) & 1 == 1)
            });
            if ok {
                out |= 1 << (a * n + a2);
            }
        }
    }
    out
}

/// The arrow algebra of PERs on a PCA.
pub fn per_arrow_algebra(pca: &Pca) -> Result<ArrowAlgebra> {
    let carrier = PerCarrier::of(pca)?;
    let n = carrier.n;
    let rels = &carrier.rels;
    let names = rels.iter().map(|&m| carrier.name(pca, m)).collect();
    let lat = Lattice::from_fn(names, |a, b| rels[a] & !rels[b] == 0)?;
    let mut imp = Vec::with_capacity(rels.len() * rels.len());
    for &r in rels {
        for &s in rels {
            let raw = per_raw_implication(pca, n, r, s);
            let refl = carrier.reflect(raw).ok_or_else(|| Error::Input("implication has no largest PER below it".into()))?;
            imp.push(carrier.index[&refl]);
        }
    }
    let st = ArrowStructure::new(lat, imp)?;
    let sep = rels.iter().map(|&m| mask_members(m).any(|p| pca.in_filter(p / n) && pca.in_filter(p % n))).collect();
    ArrowAlgebra::new(st, sep)
}

/// Maps a -> principal downset of a.
pub fn delta_unit(pca: &Pca) -> Result<Vec<Elem>> {
    let ds = Downsets::of(pca.poset())?;
    Ok(pca.elements().map(|a| ds.principal(pca.poset(), a)).collect())
}

/// Extends a map into downsets of B to downsets of A by unions.
pub fn tilde(a: &Pca, b: &Pca, f: &[u64]) -> Result<Vec<Elem>> {
    if f.len() != a.size() {
        return Err(Error::CarrierMismatch("table length differs from the source carrier".into()));
    }
    let da = Downsets::of(a.poset())?;
    let db = Downsets::of(b.poset())?;
    da.masks
        .iter()
        .map(|&alpha| {
            let u = mask_members(alpha).fold(0u64, |acc, x| acc | f[x]);
            db.index.get(&u).copied().ok_or_else(|| Error::Input("image is not a downset".into()))
        })
        .collect()
}

/// Union of downsets of downsets, as a table from D(D(A)) to D(A).
pub fn union_mult(pca: &Pca) -> Result<Vec<Elem>> {
    let (dp, da) = downset_pca(pca)?;
    let dda = Downsets::of(dp.poset())?;
    Ok(dda.masks.iter().map(|&m| da.lookup(mask_members(m).fold(0u64, |acc, i| acc | da.masks[i]))).collect())
}

/// Checks the morphism laws for a map between PCAs, searching realizers exhaustively.
pub fn pca_morphism_check(a: &Pca, b: &Pca, f: &[Elem], subject: &str) -> Result<VerificationReport> {
    if f.len() != a.size() || f.iter().any(|&x| x >= b.size()) {
        return Err(Error::CarrierMismatch("morphism table does not fit the carriers".into()));
    }
    let mut r = VerificationReport::new();
    let bad = a.elements().find(|&x| a.in_filter(x) && !b.in_filter(f[x]));
    r.push(match bad {
        None => Finding::pass(subject, Law::PcaMorphFilter),
        Some(x) => Finding::fail(subject, Law::PcaMorphFilter).counterexample([a.name(x)]),
    });
    let t = b.elements().find(|&t| {
        b.in_filter(t)
            && a.elements().all(|x| {
                a.elements().all(|y| match a.app(x, y) {
                    None => true,
                    Some(xy) => matches!(b.app2(t, f[x], f[y]), Some(v) if b.leq(v, f[xy])),
                })
            })
    });
    r.push(match t {
        Some(t) => Finding::pass(subject, Law::PcaMorphApplication).witness([b.name(t)]),
        None => Finding::fail(subject, Law::PcaMorphApplication).note("no realizer in the filter"),
    });
    let u = b
        .elements()
        .find(|&u| b.in_filter(u) && a.elements().all(|x| a.elements().all(|y| !a.leq(x, y) || matches!(b.app(u, f[x]), Some(v) if b.leq(v, f[y])))));
    r.push(match u {
        Some(u) => Finding::pass(subject, Law::PcaMorphOrder).witness([b.name(u)]),
        None => Finding::fail(subject, Law::PcaMorphOrder).note("no realizer in the filter"),
    });
    Ok(r)
}

/// Computational density of a map A -> D(B): returns the first working m among the candidates.
pub fn pca_density_check(a: &Pca, b: &Pca, f: &[u64], m_candidates: Option<&[Elem]>, subject: &str) -> Finding {
    let all: Vec<Elem> = b.elements().filter(|&m| b.in_filter(m)).collect();
    let cands = m_candidates.map(|c| c.to_vec()).unwrap_or(all);
    let dense_with = |m: Elem| {
        b.in_filter(m)
            && b.elements().filter(|&s| b.in_filter(s)).all(|s| {
                a.elements().filter(|&r| a.in_filter(r)).any(|r| {
                    a.elements().all(|x| match apply_to_set(b, s, f[x]) {
                        None => true,
                        Some(sfx) => match a.app(r, x) {
                            None => false,
                            Some(rx) => matches!(apply_to_set(b, m, f[rx]), Some(v) if v & !sfx == 0),
                        },
                    })
                })
            })
    };
    match cands.into_iter().find(|&m| dense_with(m)) {
        Some(m) => Finding::pass(subject, Law::PcaMorphDense).witness([b.name(m)]),
        None => Finding::fail(subject, Law::PcaMorphDense).note("no density witness among the candidates"),
    }
}

/// The right adjoint D(B) -> D(A) induced by a density witness m.
pub fn density_adjoint(a: &Pca, b: &Pca, f: &[u64], m: Elem) -> Result<Vec<Elem>> {
    let da = Downsets::of(a.poset())?;
    let db = Downsets::of(b.poset())?;
    Ok(db
        .masks
        .iter()
        .map(|&beta| {
            let raw = a.elements().filter(|&x| matches!(apply_to_set(b, m, f[x]), Some(v) if v & !beta == 0)).fold(0u64, |acc, x| acc | 1 << x);
            da.lookup(a.poset().down_closure(raw))
        })
        .collect())
}

/// Partial orders on up to three points, one per isomorphism class.
pub fn small_posets(max: usize) -> Vec<Poset> {
    let names = |n: usize| (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
    let mut out = Vec::new();
    let shapes: [(usize, &[(Elem, Elem)]); 8] =
        [(1, &[]), (2, &[]), (2, &[(0, 1)]), (3, &[]), (3, &[(0, 1)]), (3, &[(0, 1), (1, 2), (0, 2)]), (3, &[(0, 1), (0, 2)]), (3, &[(0, 2), (1, 2)])];
    for (n, rel) in shapes {
        if n <= max {
            out.push(Poset::from_fn(names(n), |a, b| a == b || rel.contains(&(a, b))).expect("partial order"));
        }
    }
    out
}

/// Every PCA with at most `max` elements whose combinators are found by `find_ks`,
/// over all application tables, small posets and filters.
pub fn enumerate_pcas(max: usize) -> Vec<Pca> {
    let mut out = Vec::new();
    for poset in small_posets(max) {
        let n = poset.size();
        let filters: Vec<Vec<bool>> = subsets(n)
            .filter(|&m| m != 0)
            .map(|m| (0..n).map(|i| m >> i & 1 == 1).collect::<Vec<bool>>())
            .filter(|f: &Vec<bool>| (0..n).all(|a| (0..n).all(|b| !(f[a] && poset.leq(a, b)) || f[b])))
            .collect();
        let cells = n * n;
        let total = (n + 1).pow(cells as u32);
        for code in 0..total {
            let app: Vec<Option<Elem>> = (0..cells).map(|i| code / (n + 1).pow(i as u32) % (n + 1)).map(|v| v.checked_sub(1)).collect();
            let pap = match Pap::new(poset.clone(), app) {
                Ok(p) => p,
                Err(_) => continue,
            };
            if pap.monotonicity_violation().is_some() {
                continue;
            }
            for f in &filters {
                if let Some((k, s)) = find_ks(&pap, f) {
                    out.push(Pca::new(pap.clone(), f.clone(), k, s).expect("found combinators"));
                }
            }
        }
    }
    out
}

/// Checks a map A -> D(B), given as downset masks: it is a PCA morphism into the downset PCA,
/// its union extension is implicative, and when it is dense the induced map is a right adjoint
/// of that extension.
pub fn check_partial_morphism(a: &Pca, b: &Pca, f: &[u64], subject: &str) -> Result<VerificationReport> {
    if f.len() != a.size() {
        return Err(Error::CarrierMismatch("table length differs from the source carrier".into()));
    }
    let (db_pca, db) = downset_pca(b)?;
    let idx: Vec<Elem> = f
        .iter()
        .map(|m| db.index.get(m).copied().ok_or_else(|| Error::Input(format!("value {} is not a downset", b.poset().set_name(*m)))))
        .collect::<Result<_>>()?;
    let mut r = pca_morphism_check(a, &db_pca, &idx, subject)?;
    let da_alg = downset_arrow_algebra(a)?;
    let db_alg = downset_arrow_algebra(b)?;
    let t = tilde(a, b, f)?;
    let imp = crate::morph::check_implicative(&da_alg, &db_alg, &t, subject)?;
    r.push(match imp.first_failure() {
        None => Finding::pass(subject, Law::ImplRealizer).note("union extension"),
        Some(x) => Finding::fail(subject, x.law).counterexample(x.counterexample.clone()).note("union extension"),
    });
    let dense = pca_density_check(a, b, f, None, subject);
    if dense.is_pass() {
        let m = b.elements().find(|&m| dense.witness.iter().any(|w| w == b.name(m))).expect("witness names an element");
        let h = density_adjoint(a, b, f, m)?;
        let ok = crate::morph::is_adjoint_pair(&da_alg, &db_alg, &t, &h);
        let searched = crate::morph::find_right_adjoint(&da_alg, &db_alg, &t, crate::morph::ADJOINT_SEARCH_CAP).found().is_some();
        r.push(Finding::from_bool(subject, Law::PcaDenseAdjoint, ok && searched).note(format!("induced adjoint {ok}, search {searched}")));
    }
    r.push(dense);
    Ok(r)
}

/// A register-machine indexing truncated at `n_max` and a step budget.
///
/// Program e is read as base-5 digits, least significant first: 0 halt, 1 increment,
/// 2 saturating decrement, 3 skip the next instruction when zero, 4 jump to the start.
pub fn bounded_k1(n_max: usize, step_budget: usize) -> Result<Pap> {
    let names = (0..=n_max).map(|i| i.to_string()).collect();
    let poset = Poset::discrete(names)?;
    Pap::from_fn(poset, |e, x| run_program(e, x, step_budget).filter(|&v| v <= n_max))
}

pub fn run_program(e: usize, input: usize, budget: usize) -> Option<usize> {
    let mut prog = Vec::new();
    let mut code = e;
    while code > 0 {
        prog.push(code % 5);
        code /= 5;
    }
    let mut reg = input;
    let mut pc = 0;
    for _ in 0..budget {
        match prog.get(pc) {
            None | Some(0) => return Some(reg),
            Some(1) => {
                reg += 1;
                pc += 1;
            }
            Some(2) => {
                reg = reg.saturating_sub(1);
                pc += 1;
            }
            Some(3) => pc += if reg == 0 { 2 } else { 1 },
            _ => pc = 0,
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::isomorphism;

    #[test]
    fn trivial_pca_is_a_pca() {
        let p = Pca::trivial();
        assert!(p.verify("one").passed());
        assert!(check_derived(&p, "one").passed());
    }

    #[test]
    fn trivial_downset_algebra_is_two_element_frame() {
        let alg = downset_arrow_algebra(&Pca::trivial()).unwrap();
        let two = ArrowAlgebra::frame(Lattice::chain(2)).unwrap();
        assert!(isomorphism(&alg, &two).is_some());
        assert!(alg.verify("d1").passed());
    }

    #[test]
    fn discrete_constant_table_has_no_k() {
        let poset = Poset::discrete(vec!["0".into(), "1".into()]).unwrap();
        let pap = Pap::from_fn(poset, |_, _| Some(0)).unwrap();
        let mut hits = 0;
        for k in 0..2 {
            for s in 0..2 {
                if pap.is_k(k) && pap.is_s(s) {
                    hits += 1;
                }
            }
        }
        assert_eq!(hits, 0);
        assert_eq!(find_ks(&pap, &[true, true]), None);
    }

    #[test]
    fn k1_demo() {
        assert_eq!(run_program(0, 5, 10), Some(5));
        assert_eq!(run_program(1, 5, 10), Some(6));
        assert_eq!(run_program(4, 5, 100), None);
        let pap = bounded_k1(6, 50).unwrap();
        assert_eq!(pap.app(0, 5), Some(5));
        assert_eq!(pap.app(1, 6), None);
    }
}

#[cfg(test)]
mod enumeration {
    use super::*;

    #[test]
    fn small_pca_census() {
        let all = enumerate_pcas(3);
        let by_size = |n: usize| all.iter().filter(|p| p.size() == n).count();
        assert_eq!(by_size(1), 1);
        assert!(by_size(2) > 0 && by_size(3) > 0);
        for p in &all {
            assert!(p.verify("p").passed());
        }
    }
}
