//! Implicational propositional formulas, a contraction-free prover with Kripke countermodels,
//! and evaluation of formulas inside an arrow algebra.

use crate::algebra::ArrowAlgebra;
use crate::error::{Error, Result};
use crate::lattice::Elem;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Imp(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(s: &str) -> Self {
        Formula::Atom(s.to_string())
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::Imp(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn parse(src: &str) -> Result<Formula> {
        let toks = tokenize(src)?;
        let mut pos = 0;
        let f = parse_imp(&toks, &mut pos)?;
        if pos != toks.len() {
            return Err(Error::Parse(format!("unexpected token `{}`", toks[pos])));
        }
        Ok(f)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(p) => f.write_str(p),
            Formula::Imp(a, b) => {
                if matches!(**a, Formula::Imp(..)) {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<String>> {
    let mut toks = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '(' || c == ')' {
            toks.push(c.to_string());
            i += 1;
        } else if c == '→' {
            toks.push("->".into());
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            toks.push("->".into());
            i += 2;
        } else if c.is_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            toks.push(chars[start..i].iter().collect());
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(toks)
}

fn parse_imp(toks: &[String], pos: &mut usize) -> Result<Formula> {
    let lhs = parse_atom(toks, pos)?;
    if toks.get(*pos).map(String::as_str) == Some("->") {
        *pos += 1;
        let rhs = parse_imp(toks, pos)?;
        Ok(Formula::imp(lhs, rhs))
    } else {
        Ok(lhs)
    }
}

fn parse_atom(toks: &[String], pos: &mut usize) -> Result<Formula> {
    match toks.get(*pos).map(String::as_str) {
        Some("(") => {
            *pos += 1;
            let f = parse_imp(toks, pos)?;
            if toks.get(*pos).map(String::as_str) != Some(")") {
                return Err(Error::Parse("expected `)`".into()));
            }
            *pos += 1;
            Ok(f)
        }
        Some(t) if t != ")" && t != "->" => {
            *pos += 1;
            Ok(Formula::Atom(t.to_string()))
        }
        Some(t) => Err(Error::Parse(format!("unexpected token `{t}`"))),
        None => Err(Error::Parse("unexpected end of formula".into())),
    }
}

/// A finite rooted Kripke model; world 0 is the root and `succ` lists immediate successors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    pub atoms: Vec<BTreeSet<String>>,
    pub succ: Vec<Vec<usize>>,
}

impl KripkeModel {
    fn single(atoms: BTreeSet<String>) -> Self {
        KripkeModel { atoms: vec![atoms], succ: vec![Vec::new()] }
    }

    pub fn worlds(&self) -> usize {
        self.atoms.len()
    }

    /// All worlds reachable from `w`, including `w`.
    pub fn above(&self, w: usize) -> Vec<usize> {
        let mut out = vec![w];
        let mut i = 0;
        while i < out.len() {
            for &v in &self.succ[out[i]] {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
            i += 1;
        }
        out
    }

    pub fn is_persistent(&self) -> bool {
        (0..self.worlds()).all(|w| self.succ[w].iter().all(|&v| self.atoms[w].is_subset(&self.atoms[v])))
    }

    pub fn forces(&self, w: usize, f: &Formula) -> bool {
        match f {
            Formula::Atom(p) => self.atoms[w].contains(p),
            Formula::Imp(a, b) => self.above(w).into_iter().all(|v| !self.forces(v, a) || self.forces(v, b)),
        }
    }

    /// The model refutes `f` at its root.
    pub fn refutes(&self, f: &Formula) -> bool {
        self.is_persistent() && !self.forces(0, f)
    }

    fn graft(roots_atoms: BTreeSet<String>, children: Vec<KripkeModel>) -> KripkeModel {
        let mut m = KripkeModel::single(roots_atoms);
        for child in children {
            let offset = m.worlds();
            m.succ[0].push(offset);
            for (atoms, succ) in child.atoms.into_iter().zip(child.succ) {
                m.atoms.push(atoms);
                m.succ.push(succ.into_iter().map(|v| v + offset).collect());
            }
        }
        m
    }
}

/// Decides the sequent `ctx |- goal`, returning a countermodel forcing `ctx` but not `goal` on failure.
pub fn prove(ctx: &[Formula], goal: &Formula) -> std::result::Result<(), KripkeModel> {
    let mut ctx: Vec<Formula> = ctx.to_vec();
    let mut goal = goal.clone();
    while let Formula::Imp(a, b) = goal {
        ctx.push(*a);
        goal = *b;
    }
    let g = match &goal {
        Formula::Atom(p) => p.clone(),
        Formula::Imp(..) => unreachable!(),
    };
    saturate(&mut ctx);
    let atoms: BTreeSet<String> = ctx
        .iter()
        .filter_map(|f| match f {
            Formula::Atom(p) => Some(p.clone()),
            _ => None,
        })
        .collect();
    if atoms.contains(&g) {
        return Ok(());
    }
    let mut left_models = Vec::new();
    for (idx, f) in ctx.iter().enumerate() {
        let Formula::Imp(cd, b) = f else { continue };
        let Formula::Imp(c, d) = &**cd else { continue };
        let mut rest: Vec<Formula> = ctx.iter().enumerate().filter(|&(j, _)| j != idx).map(|(_, f)| f.clone()).collect();
        let mut right = rest.clone();
        right.push((**b).clone());
        prove(&right, &goal)?;
        rest.push(Formula::Imp(d.clone(), b.clone()));
        match prove(&rest, &Formula::Imp(c.clone(), d.clone())) {
            Ok(()) => return Ok(()),
            Err(m) => left_models.push(m),
        }
    }
    Err(KripkeModel::graft(atoms, left_models))
}

fn saturate(ctx: &mut Vec<Formula>) {
    loop {
        let atoms: BTreeSet<&str> = ctx
            .iter()
            .filter_map(|f| match f {
                Formula::Atom(p) => Some(p.as_str()),
                _ => None,
            })
            .collect();
        let hit = ctx.iter().position(|f| matches!(f, Formula::Imp(a, _) if matches!(&**a, Formula::Atom(p) if atoms.contains(p.as_str()))));
        match hit {
            Some(i) => {
                let Formula::Imp(_, b) = ctx.remove(i) else { unreachable!() };
                if !ctx.contains(&b) {
                    ctx.push(*b);
                }
            }
            None => break,
        }
    }
    let mut seen = BTreeSet::new();
    ctx.retain(|f| seen.insert(f.clone()));
}

pub fn taut_check(f: &Formula) -> bool {
    prove(&[], f).is_ok()
}

/// A countermodel for a non-theorem.
pub fn countermodel(f: &Formula) -> Option<KripkeModel> {
    prove(&[], f).err()
}

/// Value of a formula under an assignment of atoms to elements.
pub fn evaluate(alg: &ArrowAlgebra, f: &Formula, env: &BTreeMap<String, Elem>) -> Result<Elem> {
    match f {
        Formula::Atom(p) => env.get(p).copied().ok_or_else(|| Error::Input(format!("unassigned atom `{p}`"))),
        Formula::Imp(a, b) => Ok(alg.imp(evaluate(alg, a, env)?, evaluate(alg, b, env)?)),
    }
}

/// Meet of the formula's values over all assignments.
pub fn intuitionistic_instance(alg: &ArrowAlgebra, f: &Formula) -> Elem {
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    let n = alg.size();
    let mut acc = alg.top();
    let mut digits = vec![0usize; atoms.len()];
    loop {
        let env: BTreeMap<String, Elem> = atoms.iter().cloned().zip(digits.iter().copied()).collect();
        acc = alg.meet(acc, evaluate(alg, f, &env).expect("all atoms assigned"));
        let mut i = 0;
        loop {
            if i == digits.len() {
                return acc;
            }
            digits[i] += 1;
            if digits[i] < n {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;

    fn p(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn parses_right_associative() {
        assert_eq!(p("a -> b -> c"), p("a -> (b -> c)"));
        assert_ne!(p("(a -> b) -> c"), p("a -> b -> c"));
        assert_eq!(p("(a → b) → c").to_string(), "(a -> b) -> c");
    }

    #[test]
    fn classic_theorems() {
        for s in ["p -> p", "p -> q -> p", "(p -> q -> r) -> (p -> q) -> p -> r", "((p -> q) -> p) -> (p -> q) -> q", "((((p -> q) -> p) -> p) -> q) -> q"] {
            assert!(taut_check(&p(s)), "{s}");
        }
    }

    #[test]
    fn peirce_needs_two_worlds() {
        let f = p("((p -> q) -> p) -> p");
        let m = countermodel(&f).unwrap();
        assert!(m.refutes(&f));
        assert_eq!(m.worlds(), 2);
    }

    #[test]
    fn weak_peirce_fragment_is_refuted() {
        let f = p("(p -> q) -> p");
        let m = countermodel(&f).unwrap();
        assert!(m.refutes(&f));
    }

    #[test]
    fn tautology_instance_in_separator() {
        let alg = ArrowAlgebra::frame(Lattice::chain(3)).unwrap();
        let v = intuitionistic_instance(&alg, &p("(p -> q -> r) -> (p -> q) -> p -> r"));
        assert!(alg.in_sep(v));
        let v = intuitionistic_instance(&alg, &p("((p -> q) -> p) -> p"));
        assert!(!alg.in_sep(v));
    }
}
