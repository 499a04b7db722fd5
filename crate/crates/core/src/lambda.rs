//! Untyped λ-terms, their parser and printer, and their interpretation in an arrow algebra.

use crate::algebra::ArrowAlgebra;
use crate::error::{Error, Result};
use crate::lattice::Elem;
use crate::report::{Finding, Law};
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(String),
    App(Box<Term>, Box<Term>),
    Abs(String, Box<Term>),
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(x.to_string())
    }

    pub fn constant(c: &str) -> Term {
        Term::Const(c.to_string())
    }

    pub fn app(m: Term, n: Term) -> Term {
        Term::App(Box::new(m), Box::new(n))
    }

    pub fn abs(x: &str, body: Term) -> Term {
        Term::Abs(x.to_string(), Box::new(body))
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::App(m, n) => 1 + m.size() + n.size(),
            Term::Abs(_, b) => 1 + b.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            Term::Var(x) => BTreeSet::from([x.clone()]),
            Term::Const(_) => BTreeSet::new(),
            Term::App(m, n) => {
                let mut s = m.free_vars();
                s.extend(n.free_vars());
                s
            }
            Term::Abs(x, b) => {
                let mut s = b.free_vars();
                s.remove(x);
                s
            }
        }
    }

    /// Wraps the term in abstractions over its free variables, in sorted order.
    pub fn close(self) -> Term {
        let fv: Vec<String> = self.free_vars().into_iter().collect();
        fv.iter().rev().fold(self, |t, x| Term::abs(x, t))
    }

    pub fn parse(src: &str) -> Result<Term> {
        let toks = lex(src)?;
        let mut p = Parser { toks, pos: 0 };
        let t = p.term()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("unexpected {:?}", p.toks[p.pos])));
        }
        Ok(t)
    }

    /// Renames every binder to a fresh name; the result is α-equivalent.
    pub fn rename_bound(&self, fresh: &mut usize) -> Term {
        self.rename_with(&HashMap::new(), fresh)
    }

    fn rename_with(&self, map: &HashMap<String, String>, fresh: &mut usize) -> Term {
        match self {
            Term::Var(x) => Term::Var(map.get(x).cloned().unwrap_or_else(|| x.clone())),
            Term::Const(c) => Term::Const(c.clone()),
            Term::App(m, n) => Term::app(m.rename_with(map, fresh), n.rename_with(map, fresh)),
            Term::Abs(x, b) => {
                let y = format!("v{}", *fresh);
                *fresh += 1;
                let mut inner = map.clone();
                inner.insert(x.clone(), y.clone());
                Term::Abs(y, Box::new(b.rename_with(&inner, fresh)))
            }
        }
    }
}

fn simple_const(c: &str) -> bool {
    !c.is_empty() && c.chars().all(|ch| ch.is_alphanumeric() || "_'*+-{},".contains(ch))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::Const(c) if simple_const(c) => write!(f, "#{c}"),
            Term::Const(c) => write!(f, "#\"{c}\""),
            Term::Abs(x, b) => write!(f, "\\{x}. {b}"),
            Term::App(m, n) => {
                if matches!(**m, Term::Abs(..)) {
                    write!(f, "({m})")?;
                } else {
                    write!(f, "{m}")?;
                }
                if matches!(**n, Term::App(..) | Term::Abs(..)) {
                    write!(f, " ({n})")
                } else {
                    write!(f, " {n}")
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Lambda,
    Dot,
    LParen,
    RParen,
    Ident(String),
    Const(String),
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            _ if c.is_whitespace() => i += 1,
            '\\' | 'λ' => {
                out.push(Tok::Lambda);
                i += 1;
            }
            '.' => {
                out.push(Tok::Dot);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '#' => {
                i += 1;
                if chars.get(i) == Some(&'"') {
                    let start = i + 1;
                    let end = (start..chars.len()).find(|&j| chars[j] == '"').ok_or_else(|| Error::Parse("unterminated constant".into()))?;
                    out.push(Tok::Const(chars[start..end].iter().collect()));
                    i = end + 1;
                } else {
                    let start = i;
                    while i < chars.len() && !chars[i].is_whitespace() && !"()\\.λ#\"".contains(chars[i]) {
                        i += 1;
                    }
                    if start == i {
                        return Err(Error::Parse("empty constant".into()));
                    }
                    out.push(Tok::Const(chars[start..i].iter().collect()));
                }
            }
            _ if ident_char(c) => {
                let start = i;
                while i < chars.len() && ident_char(chars[i]) {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            _ => return Err(Error::Parse(format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn term(&mut self) -> Result<Term> {
        if self.peek() == Some(&Tok::Lambda) {
            return self.abs();
        }
        let mut t = self.atom()?;
        loop {
            match self.peek() {
                Some(Tok::Lambda) => {
                    let a = self.abs()?;
                    return Ok(Term::app(t, a));
                }
                Some(Tok::Ident(_)) | Some(Tok::Const(_)) | Some(Tok::LParen) => {
                    let a = self.atom()?;
                    t = Term::app(t, a);
                }
                _ => return Ok(t),
            }
        }
    }

    fn abs(&mut self) -> Result<Term> {
        self.pos += 1;
        let mut binders = Vec::new();
        while let Some(Tok::Ident(x)) = self.peek() {
            binders.push(x.clone());
            self.pos += 1;
        }
        if binders.is_empty() {
            return Err(Error::Parse("abstraction without binder".into()));
        }
        if self.peek() != Some(&Tok::Dot) {
            return Err(Error::Parse("expected `.` after binders".into()));
        }
        self.pos += 1;
        let body = self.term()?;
        Ok(binders.iter().rev().fold(body, |b, x| Term::abs(x, b)))
    }

    fn atom(&mut self) -> Result<Term> {
        match self.peek().cloned() {
            Some(Tok::Ident(x)) => {
                self.pos += 1;
                Ok(Term::Var(x))
            }
            Some(Tok::Const(c)) => {
                self.pos += 1;
                Ok(Term::Const(c))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(Error::Parse("expected `)`".into()));
                }
                self.pos += 1;
                Ok(t)
            }
            Some(t) => Err(Error::Parse(format!("unexpected {t:?}"))),
            None => Err(Error::Parse("unexpected end of term".into())),
        }
    }
}

/// Nameless form; free variables become the outermost binders.
#[derive(Debug, Clone)]
enum Db {
    Var(usize),
    Const(Elem),
    App(usize, usize),
    Abs(usize, Vec<usize>),
}

struct Compiled {
    nodes: Vec<Db>,
    root: usize,
}

fn compile(alg: &ArrowAlgebra, t: &Term, scope: &mut Vec<String>, nodes: &mut Vec<Db>) -> Result<(usize, BTreeSet<usize>)> {
    let (node, fv) = match t {
        Term::Var(x) => {
            let pos = scope.iter().rposition(|y| y == x).ok_or_else(|| Error::Input(format!("unbound variable `{x}`")))?;
            let idx = scope.len() - 1 - pos;
            (Db::Var(idx), BTreeSet::from([idx]))
        }
        Term::Const(c) => (Db::Const(alg.index_of(c)?), BTreeSet::new()),
        Term::App(m, n) => {
            let (a, fa) = compile(alg, m, scope, nodes)?;
            let (b, fb) = compile(alg, n, scope, nodes)?;
            (Db::App(a, b), fa.union(&fb).copied().collect())
        }
        Term::Abs(x, b) => {
            scope.push(x.clone());
            let (body, fb) = compile(alg, b, scope, nodes)?;
            scope.pop();
            let fv: BTreeSet<usize> = fb.into_iter().filter(|&i| i > 0).map(|i| i - 1).collect();
            (Db::Abs(body, fv.iter().copied().collect()), fv)
        }
    };
    nodes.push(node);
    Ok((nodes.len() - 1, fv))
}

struct Evaluator<'a> {
    alg: &'a ArrowAlgebra,
    nodes: &'a [Db],
    memo: HashMap<(usize, Vec<Elem>), Elem>,
}

impl Evaluator<'_> {
    fn eval(&mut self, id: usize, stack: &mut Vec<Elem>) -> Elem {
        match &self.nodes[id] {
            Db::Var(i) => stack[stack.len() - 1 - i],
            Db::Const(c) => *c,
            Db::App(m, n) => {
                let (m, n) = (*m, *n);
                let a = self.eval(m, stack);
                let b = self.eval(n, stack);
                self.alg.apply(a, b)
            }
            Db::Abs(body, fv) => {
                let body = *body;
                let key = (id, fv.iter().map(|&i| stack[stack.len() - 1 - i]).collect::<Vec<_>>());
                if let Some(&v) = self.memo.get(&key) {
                    return v;
                }
                let mut acc = self.alg.top();
                for x in self.alg.elements() {
                    stack.push(x);
                    let v = self.eval(body, stack);
                    stack.pop();
                    acc = self.alg.meet(acc, self.alg.imp(x, self.alg.partial(v)));
                }
                self.memo.insert(key, acc);
                acc
            }
        }
    }
}

fn compile_closed(alg: &ArrowAlgebra, t: &Term, env: &BTreeMap<String, Elem>) -> Result<(Compiled, Vec<Elem>)> {
    let fv = t.free_vars();
    let mut scope = Vec::new();
    let mut stack = Vec::new();
    for x in &fv {
        let v = *env.get(x).ok_or_else(|| Error::Input(format!("free variable `{x}` has no value")))?;
        if v >= alg.size() {
            return Err(Error::Input(format!("value for `{x}` out of range")));
        }
        scope.push(x.clone());
        stack.push(v);
    }
    let mut nodes = Vec::new();
    let (root, _) = compile(alg, t, &mut scope, &mut nodes)?;
    Ok((Compiled { nodes, root }, stack))
}

/// Interpretation of a term with its free variables valued by `env`.
pub fn interpret(alg: &ArrowAlgebra, t: &Term, env: &BTreeMap<String, Elem>) -> Result<Elem> {
    let (c, mut stack) = compile_closed(alg, t, env)?;
    let mut ev = Evaluator { alg, nodes: &c.nodes, memo: HashMap::new() };
    Ok(ev.eval(c.root, &mut stack))
}

/// Interpretation by direct recursion over named environments, without caches.
pub fn interpret_named(alg: &ArrowAlgebra, t: &Term, env: &BTreeMap<String, Elem>) -> Result<Elem> {
    match t {
        Term::Var(x) => env.get(x).copied().ok_or_else(|| Error::Input(format!("unbound variable `{x}`"))),
        Term::Const(c) => alg.index_of(c),
        Term::App(m, n) => {
            let a = interpret_named(alg, m, env)?;
            let b = interpret_named(alg, n, env)?;
            Ok(alg.apply_direct(a, b))
        }
        Term::Abs(x, body) => {
            let mut acc = alg.top();
            for v in alg.elements() {
                let mut inner = env.clone();
                inner.insert(x.clone(), v);
                let r = interpret_named(alg, body, &inner)?;
                acc = alg.meet(acc, alg.imp(v, alg.imp(alg.top(), r)));
            }
            Ok(acc)
        }
    }
}

pub const VAR_POOL: [&str; 4] = ["x", "y", "z", "w"];

/// A random term with at most `max_size` nodes; constants are drawn from `consts`.
pub fn random_term<R: Rng>(rng: &mut R, max_size: usize, consts: &[String]) -> Term {
    let size = rng.gen_range(1..=max_size.max(1));
    gen_term(rng, size, consts)
}

fn gen_term<R: Rng>(rng: &mut R, size: usize, consts: &[String]) -> Term {
    if size <= 1 {
        if !consts.is_empty() && rng.gen_bool(0.2) {
            return Term::Const(consts[rng.gen_range(0..consts.len())].clone());
        }
        return Term::var(VAR_POOL[rng.gen_range(0..VAR_POOL.len())]);
    }
    if size == 2 || rng.gen_bool(0.4) {
        let x = VAR_POOL[rng.gen_range(0..VAR_POOL.len())];
        Term::abs(x, gen_term(rng, size - 1, consts))
    } else {
        let left = rng.gen_range(1..size - 1);
        Term::app(gen_term(rng, left, consts), gen_term(rng, size - 1 - left, consts))
    }
}

/// The interpretation of a term under a separator-valued environment lies in the separator.
pub fn check_separator_closure(alg: &ArrowAlgebra, subject: &str, t: &Term, env: &BTreeMap<String, Elem>) -> Result<Finding> {
    for (x, &v) in env {
        if t.free_vars().contains(x) && !alg.in_sep(v) {
            return Err(Error::Input(format!("environment value for `{x}` is outside the separator")));
        }
    }
    if let Some(c) = consts_of(t).into_iter().find(|c| alg.index_of(c).map(|e| !alg.in_sep(e)).unwrap_or(true)) {
        return Err(Error::Input(format!("constant `{c}` is not a separator element")));
    }
    let v = interpret(alg, t, env)?;
    Ok(if alg.in_sep(v) {
        Finding::pass(subject, Law::LambdaClosure).witness([t.to_string(), alg.name(v).to_string()])
    } else {
        Finding::fail(subject, Law::LambdaClosure).counterexample([t.to_string(), alg.name(v).to_string()])
    })
}

fn consts_of(t: &Term) -> BTreeSet<String> {
    match t {
        Term::Var(_) => BTreeSet::new(),
        Term::Const(c) => BTreeSet::from([c.clone()]),
        Term::App(m, n) => consts_of(m).union(&consts_of(n)).cloned().collect(),
        Term::Abs(_, b) => consts_of(b),
    }
}

/// Runs `count` random terms with random separator-valued environments.
pub fn random_closure_sweep<R: Rng>(alg: &ArrowAlgebra, subject: &str, rng: &mut R, count: usize, max_size: usize) -> (usize, Option<Finding>) {
    let sep = alg.separator();
    let consts: Vec<String> = sep.iter().map(|&s| alg.name(s).to_string()).collect();
    for done in 0..count {
        let t = random_term(rng, max_size, &consts);
        let env: BTreeMap<String, Elem> = t.free_vars().into_iter().map(|x| (x, sep[rng.gen_range(0..sep.len())])).collect();
        let t = if rng.gen_bool(0.5) { t } else { t.close() };
        match check_separator_closure(alg, subject, &t, &env) {
            Ok(f) if f.is_pass() => {}
            Ok(f) => return (done, Some(f)),
            Err(e) => return (done, Some(Finding::fail(subject, Law::LambdaClosure).note(e.to_string()))),
        }
    }
    (count, None)
}
