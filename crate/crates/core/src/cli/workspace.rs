//! Named objects loaded from definition files or derived from each other.

use super::defs::{Def, Order};
use crate::algebra::{ArrowAlgebra, ArrowStructure};
use crate::error::{Error, Result};
use crate::lambda::{self, Term};
use crate::lattice::{Elem, Lattice, Poset};
use crate::modified::{self, Modified, Sierpinski};
use crate::morph::{self, AdjointSearch};
use crate::nuclei;
use crate::pca::{self, Pap, Pca};
use crate::report::{Finding, Law, VerificationReport};
use crate::suite::SuiteConfig;
use crate::{logic, tripos};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub enum Provenance {
    Defined,
    Downsets(String),
    Pers(String),
    Sierpinski(String, Box<Sierpinski>),
    Modified(String, Box<Modified>),
    Quotient(String, Vec<Elem>),
    Power(String, usize),
}

#[derive(Debug, Clone)]
pub enum Object {
    Algebra(ArrowAlgebra, Provenance),
    Pca(Pca),
    Morphism { from: String, to: String, table: Vec<Elem> },
    Nucleus { on: String, table: Vec<Elem> },
    PcaMorphism { from: String, to: String, values: Vec<u64> },
    Term(Term),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Algebra(..) => "algebra",
            Object::Pca(_) => "pca",
            Object::Morphism { .. } => "morphism",
            Object::Nucleus { .. } => "nucleus",
            Object::PcaMorphism { .. } => "pca-morphism",
            Object::Term(_) => "term",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub objects: BTreeMap<String, Object>,
}

fn index_all(names: &[String], items: &[String]) -> Result<Vec<Elem>> {
    items.iter().map(|s| names.iter().position(|n| n == s).ok_or_else(|| Error::UnknownElement(s.clone()))).collect()
}

fn order_pairs(names: &[String], order: &Order) -> Result<(Vec<(Elem, Elem)>, bool)> {
    let (pairs, hasse) = match order {
        Order::Hasse { hasse } => (hasse, true),
        Order::Pairs(p) => (p, false),
    };
    let idx = |s: &String| names.iter().position(|n| n == s).ok_or_else(|| Error::UnknownElement(s.clone()));
    Ok((pairs.iter().map(|(a, b)| Ok((idx(a)?, idx(b)?))).collect::<Result<_>>()?, hasse))
}

fn lattice(names: &[String], order: &Order) -> Result<Lattice> {
    let (pairs, hasse) = order_pairs(names, order)?;
    Lattice::from_pairs(names.to_vec(), &pairs, hasse)
}

fn total_table(src: &[String], dst: &[String], table: &BTreeMap<String, String>) -> Result<Vec<Elem>> {
    if let Some(extra) = table.keys().find(|k| !src.contains(k)) {
        return Err(Error::UnknownElement(extra.clone()));
    }
    src.iter()
        .map(|x| {
            let y = table.get(x).ok_or_else(|| Error::Input(format!("table has no entry for `{x}`")))?;
            dst.iter().position(|n| n == y).ok_or_else(|| Error::UnknownElement(y.clone()))
        })
        .collect()
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, obj: Object) -> Result<()> {
        if self.objects.contains_key(name) {
            return Err(Error::Input(format!("duplicate object name `{name}`")));
        }
        self.objects.insert(name.to_string(), obj);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&Object> {
        self.objects.get(name).ok_or_else(|| Error::Input(format!("no object named `{name}`")))
    }

    pub fn algebra(&self, name: &str) -> Result<&ArrowAlgebra> {
        match self.get(name)? {
            Object::Algebra(a, _) => Ok(a),
            other => Err(Error::Input(format!("`{name}` has kind {}, expected algebra", other.kind()))),
        }
    }

    pub fn pca(&self, name: &str) -> Result<&Pca> {
        match self.get(name)? {
            Object::Pca(p) => Ok(p),
            other => Err(Error::Input(format!("`{name}` has kind {}, expected pca", other.kind()))),
        }
    }

    fn morphism(&self, name: &str) -> Result<(&str, &str, &[Elem])> {
        match self.get(name)? {
            Object::Morphism { from, to, table } => Ok((from, to, table)),
            other => Err(Error::Input(format!("`{name}` has kind {}, expected morphism", other.kind()))),
        }
    }

    /// Adds the definitions, resolving references among them and against what is already loaded.
    pub fn load_defs(&mut self, defs: Vec<(String, Def)>) -> Result<()> {
        let mut names: Vec<&String> = defs.iter().map(|(n, _)| n).collect();
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Input(format!("duplicate object name `{}`", w[0])));
        }
        let mut defs = defs;
        defs.sort_by_key(|(_, d)| d.rank());
        for (name, def) in defs {
            let obj = self.build(def).map_err(|e| Error::Input(format!("`{name}`: {e}")))?;
            self.insert(&name, obj)?;
        }
        Ok(())
    }

    fn build(&self, def: Def) -> Result<Object> {
        Ok(match def {
            Def::ArrowAlgebra { elements, leq, imp, separator, .. } => {
                let lat = lattice(&elements, &leq)?;
                let n = elements.len();
                if imp.len() != n || imp.iter().any(|row| row.len() != n) {
                    return Err(Error::Shape(format!("implication must be a {n} x {n} table")));
                }
                let flat: Vec<String> = imp.into_iter().flatten().collect();
                let st = ArrowStructure::new(lat, index_all(&elements, &flat)?)?;
                Object::Algebra(ArrowAlgebra::with_separator(st, &index_all(&elements, &separator)?)?, Provenance::Defined)
            }
            Def::Frame { elements, leq, .. } => Object::Algebra(ArrowAlgebra::frame(lattice(&elements, &leq)?)?, Provenance::Defined),
            Def::Pca { elements, leq, app, filter, k, s, .. } => {
                let (pairs, hasse) = order_pairs(&elements, &leq)?;
                let poset = Poset::from_pairs(elements.clone(), &pairs, hasse)?;
                let n = elements.len();
                if app.len() != n || app.iter().any(|row| row.len() != n) {
                    return Err(Error::Shape(format!("application must be a {n} x {n} table")));
                }
                let cells = app
                    .iter()
                    .flatten()
                    .map(|c| if c == "-" { Ok(None) } else { index_all(&elements, std::slice::from_ref(c)).map(|v| Some(v[0])) })
                    .collect::<Result<Vec<_>>>()?;
                let pap = Pap::new(poset, cells)?;
                let mut mask = vec![false; n];
                for f in index_all(&elements, &filter)? {
                    mask[f] = true;
                }
                match (k, s) {
                    (Some(k), Some(s)) => {
                        let ks = index_all(&elements, &[k, s])?;
                        Object::Pca(Pca::new(pap, mask, ks[0], ks[1])?)
                    }
                    (None, None) => Object::Pca(Pca::search(pap, mask)?),
                    _ => return Err(Error::Input("give both k and s, or neither".into())),
                }
            }
            Def::Morphism { from, to, table, .. } => {
                let (a, b) = (self.algebra(&from)?, self.algebra(&to)?);
                let t = total_table(a.names(), b.names(), &table)?;
                Object::Morphism { from, to, table: t }
            }
            Def::Nucleus { on, table, .. } => {
                let a = self.algebra(&on)?;
                let t = total_table(a.names(), a.names(), &table)?;
                Object::Nucleus { on, table: t }
            }
            Def::PcaMorphism { from, to, values, .. } => {
                let (a, b) = (self.pca(&from)?, self.pca(&to)?);
                let an: Vec<String> = a.elements().map(|x| a.name(x).to_string()).collect();
                let bn: Vec<String> = b.elements().map(|x| b.name(x).to_string()).collect();
                if let Some(extra) = values.keys().find(|k| !an.contains(k)) {
                    return Err(Error::UnknownElement(extra.clone()));
                }
                let mut masks = Vec::new();
                for x in &an {
                    let set = values.get(x).ok_or_else(|| Error::Input(format!("no value for `{x}`")))?;
                    let m = index_all(&bn, set)?.into_iter().fold(0u64, |acc, i| acc | 1 << i);
                    if !b.poset().is_down_closed(m) {
                        return Err(Error::Input(format!("value of `{x}` is not a downset")));
                    }
                    masks.push(m);
                }
                Object::PcaMorphism { from, to, values: masks }
            }
            Def::Term { term, .. } => Object::Term(Term::parse(&term)?),
        })
    }

    /// Registers the result of a construction under `name`.
    pub fn derive(&mut self, construction: &str, args: &[String], name: &str) -> Result<Vec<String>> {
        let arg = |i: usize| args.get(i).map(String::as_str).ok_or_else(|| Error::Input(format!("`{construction}` needs {} argument(s)", i + 1)));
        let mut added = Vec::new();
        let mut put = |ws: &mut Workspace, n: String, o: Object| -> Result<()> {
            ws.insert(&n, o)?;
            added.push(n);
            Ok(())
        };
        match construction {
            "downset" => {
                let p = arg(0)?;
                let a = pca::downset_arrow_algebra(self.pca(p)?)?;
                put(self, name.into(), Object::Algebra(a, Provenance::Downsets(p.into())))?;
            }
            "per" => {
                let p = arg(0)?;
                let a = pca::per_arrow_algebra(self.pca(p)?)?;
                put(self, name.into(), Object::Algebra(a, Provenance::Pers(p.into())))?;
            }
            "sierpinski" => {
                let b = arg(0)?;
                let s = modified::sierpinski(self.algebra(b)?)?;
                put(self, name.into(), Object::Algebra(s.alg.clone(), Provenance::Sierpinski(b.into(), Box::new(s))))?;
            }
            "modify" => {
                let b = arg(0)?;
                let m = modified::modification(self.algebra(b)?)?;
                put(self, name.into(), Object::Algebra(m.alg.clone(), Provenance::Modified(b.into(), Box::new(m))))?;
            }
            "quotient" => {
                let j = arg(0)?;
                let (on, table) = match self.get(j)? {
                    Object::Nucleus { on, table } => (on.clone(), table.clone()),
                    other => return Err(Error::Input(format!("`{j}` has kind {}, expected nucleus", other.kind()))),
                };
                let q = nuclei::quotient(self.algebra(&on)?, &table)?;
                put(self, name.into(), Object::Algebra(q, Provenance::Quotient(on, table)))?;
            }
            "power" => {
                let b = arg(0)?;
                let n: usize = arg(1)?.parse().map_err(|_| Error::Input("power exponent must be a number".into()))?;
                let p = tripos::power_algebra(self.algebra(b)?, n)?;
                put(self, name.into(), Object::Algebra(p, Provenance::Power(b.into(), n)))?;
            }
            "monotonize" => {
                let (from, to, f) = self.morphism(arg(0)?)?;
                let m = morph::monotonize(self.algebra(from)?, self.algebra(to)?, f);
                let (from, to) = (from.to_string(), to.to_string());
                put(self, name.into(), Object::Morphism { from, to, table: m })?;
            }
            "lift-arrow" | "lift-modified" => {
                let (from, to, f) = self.morphism(arg(0)?)?;
                let modified = construction == "lift-modified";
                let (sa, ta) = (self.lifted(from, modified)?, self.lifted(to, modified)?);
                let table = match (&self.get(&sa)?, &self.get(&ta)?) {
                    (Object::Algebra(_, Provenance::Sierpinski(_, s)), Object::Algebra(_, Provenance::Sierpinski(_, t))) => s.lift(t, f)?,
                    (Object::Algebra(_, Provenance::Modified(_, s)), Object::Algebra(_, Provenance::Modified(_, t))) => s.lift(t, f)?,
                    _ => unreachable!("lifted() returns matching provenance"),
                };
                put(self, name.into(), Object::Morphism { from: sa, to: ta, table })?;
            }
            "adjoint" => {
                let (from, to, f) = self.morphism(arg(0)?)?;
                let h = match morph::find_right_adjoint(self.algebra(from)?, self.algebra(to)?, f, morph::ADJOINT_SEARCH_CAP) {
                    AdjointSearch::Found(h) => h,
                    AdjointSearch::NotFound => return Err(Error::Precondition(format!("`{}` has no right adjoint", arg(0)?))),
                    AdjointSearch::Inconclusive(why) => return Err(Error::Cap(why)),
                };
                let (from, to) = (from.to_string(), to.to_string());
                put(self, name.into(), Object::Morphism { from: to, to: from, table: h })?;
            }
            "factorize" => {
                let (from, to, f) = self.morphism(arg(0)?)?;
                let (hf, ht, h) = self.morphism(arg(1)?)?;
                if hf != to || ht != from {
                    return Err(Error::Input("the second morphism must go back from the target to the source".into()));
                }
                let fz = nuclei::factorize(self.algebra(from)?, self.algebra(to)?, f, h)?;
                let (from, to) = (from.to_string(), to.to_string());
                put(self, name.into(), Object::Algebra(fz.quotient.clone(), Provenance::Quotient(from.clone(), fz.nucleus.clone())))?;
                put(self, format!("{name}.nucleus"), Object::Nucleus { on: from.clone(), table: fz.nucleus.clone() })?;
                put(self, format!("{name}.surjection"), Object::Morphism { from: from.clone(), to: name.into(), table: fz.surjection.0 })?;
                put(self, format!("{name}.surjection-adjoint"), Object::Morphism { from: name.into(), to: from, table: fz.surjection.1 })?;
                put(self, format!("{name}.injection"), Object::Morphism { from: name.into(), to: to.clone(), table: fz.injection.0 })?;
                put(self, format!("{name}.injection-adjoint"), Object::Morphism { from: to, to: name.into(), table: fz.injection.1 })?;
            }
            "tilde" => {
                let pm = arg(0)?;
                let (from, to, values) = match self.get(pm)? {
                    Object::PcaMorphism { from, to, values } => (from.clone(), to.clone(), values.clone()),
                    other => return Err(Error::Input(format!("`{pm}` has kind {}, expected pca-morphism", other.kind()))),
                };
                let t = pca::tilde(self.pca(&from)?, self.pca(&to)?, &values)?;
                let (da, db) = (self.downsets_of(&from)?, self.downsets_of(&to)?);
                put(self, name.into(), Object::Morphism { from: da, to: db, table: t })?;
            }
            other => return Err(Error::Input(format!("unknown construction `{other}`"))),
        }
        Ok(added)
    }

    /// The first algebra, by name, built as the Sierpinski algebra (or modification) of `base`.
    fn lifted(&self, base: &str, modified: bool) -> Result<String> {
        self.objects
            .iter()
            .find(|(_, o)| match o {
                Object::Algebra(_, Provenance::Sierpinski(b, _)) => !modified && b == base,
                Object::Algebra(_, Provenance::Modified(b, _)) => modified && b == base,
                _ => false,
            })
            .map(|(n, _)| n.clone())
            .ok_or_else(|| Error::Input(format!("derive {} {base} first", if modified { "modify" } else { "sierpinski" })))
    }

    fn downsets_of(&self, p: &str) -> Result<String> {
        self.objects
            .iter()
            .find(|(_, o)| matches!(o, Object::Algebra(_, Provenance::Downsets(q)) if q == p))
            .map(|(n, _)| n.clone())
            .ok_or_else(|| Error::Input(format!("derive downset {p} first")))
    }

    /// Runs the families selected by `filter` on one object.
    pub fn check(&self, subject: &str, filter: &LawFilter, cfg: &SuiteConfig) -> Result<VerificationReport> {
        let obj = self.get(subject)?;
        let mut r = VerificationReport::new();
        let s = subject;
        match obj {
            Object::Algebra(a, prov) => {
                if filter.wants(&["structure", "separator", "apply", "abstract", "logic"], true) {
                    r.extend(a.verify(s));
                    r.extend(logic::check_all(a, s));
                }
                if a.is_frame() && filter.wants(&["frame.collapse"], true) {
                    r.push(logic::check_frame_collapse(a, s));
                }
                if filter.wants(&["algebra.join-compatible"], matches!(prov, Provenance::Downsets(_))) {
                    r.push(join_finding(a, s));
                }
                if filter.wants(&["lambda"], true) {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x1a3b);
                    let (count, bad) = lambda::random_closure_sweep(a, s, &mut rng, cfg.lambda_terms, cfg.term_size);
                    r.push(bad.unwrap_or_else(|| Finding::pass(s, Law::LambdaClosure).witness([format!("{count} terms")])));
                }
                if filter.wants(&["tripos"], true) {
                    let max = if a.size() <= 4 { cfg.max_index } else { cfg.max_index.min(2) };
                    r.extend(tripos::check_slice(a, max, cfg.max_w, s));
                    for n in 0..=2 {
                        if a.size().pow(n as u32) <= 16 {
                            r.extend(tripos::check_power(a, n, s)?);
                        }
                    }
                }
                match prov {
                    Provenance::Sierpinski(_, sp) => {
                        if filter.wants(&["sierpinski.algebra", "sierpinski.binary-implicative", "sierpinski.joins", "sierpinski.projection-surjection"], true)
                        {
                            r.extend(sp.verify(s));
                            r.extend(sp.check_pi1_delta(s)?);
                        }
                        if filter.wants(&["sierpinski.open-nucleus", "sierpinski.closed-nucleus", "sierpinski.open-is-projection"], true) {
                            r.extend(sp.check_nuclei(s)?);
                        }
                    }
                    Provenance::Modified(base, m) => {
                        if filter.wants(&["modified"], true) {
                            let id = morph::identity(self.algebra(base)?);
                            r.extend(modified::check_modified_lift(m, m, &id, Some(&id), s)?);
                            let n = if m.alg.size() <= 10 { 2 } else { 1 };
                            r.extend(m.modified_predicates(n, s)?.1);
                        }
                    }
                    Provenance::Quotient(on, j) if filter.wants(&["quotient"], true) => {
                        let base = self.algebra(on)?;
                        r.extend(nuclei::check_quotient(base, j, s)?);
                        r.extend(nuclei::check_quotient_surjection(base, j, s)?);
                    }
                    _ => {}
                }
                if filter.wants(&["nucleus", "closure"], true) && !matches!(prov, Provenance::Sierpinski(..)) {
                    r.extend(nucleus_families(a, s)?);
                }
            }
            Object::Pca(p) => {
                if filter.wants(&["pap", "filter", "pca", "bracket"], true) {
                    r.extend(p.verify(s));
                    for (vars, t) in pca::bracket_templates(p) {
                        r.extend(pca::check_bracket(p, s, &vars, &t));
                    }
                    r.extend(pca::check_derived(p, s));
                }
                if filter.wants(&["structure", "separator", "algebra.join-compatible"], true) {
                    let d = pca::downset_arrow_algebra(p)?;
                    let ds = format!("{s} downsets");
                    r.extend(d.verify(&ds));
                    r.push(join_finding(&d, &ds));
                }
            }
            Object::Morphism { from, to, table } => {
                let (a, b) = (self.algebra(from)?, self.algebra(to)?);
                if filter.wants(&["implicative"], true) {
                    r.extend(morph::check_implicative(a, b, table, s)?);
                }
                if filter.wants(&["morphism"], true) {
                    r.push(morph::check_cartesian(a, b, table, s));
                    r.extend(morph::check_regular(a, b, table, s));
                }
                if a.is_frame() && b.is_frame() && filter.wants(&["frame.implicative-iff-meets", "frame.dense-iff-homomorphism"], true) {
                    r.extend(morph::frame_characterizations(a, b, table, s)?);
                }
                if morph::is_implicative(a, b, table) && filter.wants(&["tripos.induced-monotone", "tripos.induced-cartesian", "tripos.induced-recover"], true)
                {
                    r.extend(tripos::check_induced(a, b, table, 2, s)?);
                }
                if filter.wants(&["adjoint"], false) {
                    match morph::find_right_adjoint(a, b, table, morph::ADJOINT_SEARCH_CAP) {
                        AdjointSearch::Found(h) => {
                            let c = morph::classify(a, b, table, &h);
                            r.push(Finding::pass(s, Law::AdjExists).witness(a.names_of(&h)).note(c.label()));
                            r.extend(morph::check_adjoint_pair(a, b, table, &h, s)?);
                        }
                        AdjointSearch::NotFound => r.push(Finding::fail(s, Law::AdjExists).note("no right adjoint")),
                        AdjointSearch::Inconclusive(why) => r.push(Finding::inconclusive(s, Law::AdjExists, why)),
                    }
                }
            }
            Object::Nucleus { on, table } => {
                let a = self.algebra(on)?;
                if filter.wants(&["nucleus", "quotient", "closure"], true) {
                    r.extend(nuclei::check_nucleus(a, table, s)?);
                    r.extend(nuclei::check_quotient(a, table, s)?);
                    r.extend(nuclei::check_quotient_surjection(a, table, s)?);
                    r.extend(nuclei::closure_roundtrip(a, table, s)?);
                }
                if filter.wants(&["tripos.subtripos"], true) {
                    for n in 0..=2 {
                        if tripos::is_exhaustive(a, n) {
                            r.extend(tripos::subtripos_qj(a, table, n, &format!("{s} over {n}"))?.1);
                        }
                    }
                }
            }
            Object::PcaMorphism { from, to, values } => {
                if filter.wants(&["pca-morphism", "implicative"], true) {
                    r.extend(pca::check_partial_morphism(self.pca(from)?, self.pca(to)?, values, s)?);
                }
            }
            Object::Term(_) => return Err(Error::Input(format!("`{s}` is a term; evaluate it with `lambda eval <algebra> {s}`"))),
        }
        r.findings.retain(|f| filter.matches(f.law));
        Ok(r)
    }

    /// Evaluates a term, given inline or by name, with constants and environment drawn from the algebra.
    pub fn eval(&self, algebra: &str, term: &str, env: &[String]) -> Result<(Elem, Term)> {
        let a = self.algebra(algebra)?;
        let t = match self.objects.get(term) {
            Some(Object::Term(t)) => t.clone(),
            _ => Term::parse(term)?,
        };
        let mut bindings = BTreeMap::new();
        for e in env {
            let (x, v) = e.split_once('=').ok_or_else(|| Error::Input(format!("binding `{e}` is not x=element")))?;
            bindings.insert(x.trim().to_string(), a.index_of(v.trim())?);
        }
        if let Some(x) = t.free_vars().into_iter().find(|x| !bindings.contains_key(x)) {
            return Err(Error::Input(format!("free variable `{x}` has no binding")));
        }
        Ok((lambda::interpret(a, &t, &bindings)?, t))
    }
}

fn join_finding(a: &ArrowAlgebra, s: &str) -> Finding {
    match a.join_compatible() {
        crate::Decision::Yes => Finding::pass(s, Law::JoinCompat),
        crate::Decision::No((xs, x)) => {
            let mut w = a.names_of(&xs);
            w.push(a.name(x).to_string());
            Finding::fail(s, Law::JoinCompat).counterexample(w)
        }
        crate::Decision::Inconclusive(why) => Finding::inconclusive(s, Law::JoinCompat, why),
    }
}

/// The three parametrized nuclei for every parameter, plus the shift, summarized per law.
fn nucleus_families(a: &ArrowAlgebra, s: &str) -> Result<VerificationReport> {
    let mut per_law: BTreeMap<Law, Vec<Finding>> = BTreeMap::new();
    let mut nucs = vec![("partial".to_string(), nuclei::partial_nucleus(a))];
    for c in a.elements() {
        nucs.extend(nuclei::example_nuclei(a, c));
    }
    for (label, j) in nucs {
        let subject = format!("{s} [{label}]");
        let mut rep = nuclei::check_nucleus(a, &j, &subject)?;
        rep.extend(nuclei::check_quotient(a, &j, &subject)?);
        rep.extend(nuclei::closure_roundtrip(a, &j, &subject)?);
        for f in rep.findings {
            per_law.entry(f.law).or_default().push(f);
        }
    }
    Ok(per_law.into_iter().map(|(law, fs)| VerificationReport::summarize(s, law, fs)).collect())
}

/// Which laws a `check` should report: everything, or those named by id, id prefix or group.
#[derive(Debug, Clone, Default)]
pub struct LawFilter {
    patterns: Option<Vec<String>>,
}

const GROUPS: &[(&str, &[&str])] = &[
    (
        "nuclei",
        &["nucleus", "quotient", "closure", "sierpinski.open-nucleus", "sierpinski.closed-nucleus", "sierpinski.open-is-projection", "tripos.subtripos"],
    ),
    ("algebra", &["structure", "separator", "algebra", "apply", "abstract", "logic"]),
    ("morphism", &["implicative", "morphism", "frame.implicative-iff-meets", "frame.dense-iff-homomorphism"]),
    ("modified", &["modified", "lift", "sierpinski"]),
];

fn pattern_matches(pat: &str, id: &str) -> bool {
    id == pat || id.strip_prefix(pat).is_some_and(|rest| rest.starts_with('.') || rest.starts_with('-'))
}

impl LawFilter {
    pub fn all() -> Self {
        LawFilter { patterns: None }
    }

    pub fn parse(tokens: &[String]) -> Result<Self> {
        let mut patterns = Vec::new();
        for tok in tokens.iter().flat_map(|t| t.split(',')).map(str::trim).filter(|t| !t.is_empty()) {
            let expanded: Vec<String> = match GROUPS.iter().find(|(g, _)| *g == tok) {
                Some((_, ps)) => ps.iter().map(|p| p.to_string()).collect(),
                None => vec![tok.to_string()],
            };
            if !expanded.iter().any(|p| Law::ALL.iter().any(|l| pattern_matches(p, l.id()))) {
                return Err(Error::Input(format!("unknown law `{tok}`")));
            }
            patterns.extend(expanded);
        }
        Ok(LawFilter { patterns: Some(patterns) })
    }

    pub fn matches(&self, law: Law) -> bool {
        match &self.patterns {
            None => true,
            Some(ps) => ps.iter().any(|p| pattern_matches(p, law.id())),
        }
    }

    /// Whether a family producing laws under `family` should run; `default` decides for an unfiltered check.
    pub fn wants(&self, family: &[&str], default: bool) -> bool {
        match &self.patterns {
            None => default,
            Some(_) => Law::ALL.iter().any(|&l| self.matches(l) && family.iter().any(|f| pattern_matches(f, l.id()))),
        }
    }
}
