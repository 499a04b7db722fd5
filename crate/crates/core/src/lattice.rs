//! Finite complete lattices given by an explicit order.

use crate::error::{Error, Result};
use std::collections::HashMap;

pub type Elem = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    names: Vec<String>,
    index: HashMap<String, Elem>,
    leq: Vec<bool>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    top: Elem,
    bottom: Elem,
}

impl Lattice {
    /// Builds a lattice from a full order matrix (`leq[a * n + b]` means a <= b).
    pub fn from_matrix(names: Vec<String>, leq: Vec<bool>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::EmptyCarrier);
        }
        if leq.len() != n * n {
            return Err(Error::Shape(format!("order matrix has {} entries, expected {}", leq.len(), n * n)));
        }
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        let le = |a: usize, b: usize| leq[a * n + b];
        if let Some(a) = (0..n).find(|&a| !le(a, a)) {
            return Err(Error::NotReflexive(names[a].clone()));
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && le(a, b) && le(b, a) {
                    return Err(Error::NotAntisymmetric(names[a].clone(), names[b].clone()));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !le(a, b) {
                    continue;
                }
                for c in 0..n {
                    if le(b, c) && !le(a, c) {
                        return Err(Error::NotTransitive(names[a].clone(), names[b].clone(), names[c].clone()));
                    }
                }
            }
        }
        let top = (0..n).find(|&t| (0..n).all(|a| le(a, t))).ok_or(Error::MissingTop)?;
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&c| le(c, a) && le(c, b)).collect();
                let glb = lower.iter().copied().find(|&g| lower.iter().all(|&c| le(c, g)));
                match glb {
                    Some(g) => meet[a * n + b] = g,
                    None => return Err(Error::MissingMeet(names[a].clone(), names[b].clone())),
                }
            }
        }
        let mut bottom = top;
        for a in 0..n {
            bottom = meet[bottom * n + a];
        }
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let mut j = top;
                for c in 0..n {
                    if le(a, c) && le(b, c) {
                        j = meet[j * n + c];
                    }
                }
                join[a * n + b] = j;
            }
        }
        Ok(Lattice { names, index, leq, meet, join, top, bottom })
    }

    /// Builds a lattice from order pairs; with `hasse` the reflexive-transitive closure is taken.
    pub fn from_pairs(names: Vec<String>, pairs: &[(Elem, Elem)], hasse: bool) -> Result<Self> {
        let n = names.len();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            leq[a * n + a] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::Shape("order pair out of range".into()));
            }
            leq[a * n + b] = true;
        }
        if hasse {
            for k in 0..n {
                for i in 0..n {
                    if leq[i * n + k] {
                        for j in 0..n {
                            if leq[k * n + j] {
                                leq[i * n + j] = true;
                            }
                        }
                    }
                }
            }
        }
        Self::from_matrix(names, leq)
    }

    pub fn from_fn(names: Vec<String>, le: impl Fn(Elem, Elem) -> bool) -> Result<Self> {
        let n = names.len();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = le(a, b);
            }
        }
        Self::from_matrix(names, leq)
    }

    /// The chain 0 < 1 < ... < n-1.
    pub fn chain(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        Self::from_fn(names, |a, b| a <= b).expect("chain is a lattice")
    }

    /// The Boolean algebra of subsets of a k-element set, elements named by bit strings.
    pub fn boolean(k: usize) -> Self {
        let n = 1usize << k;
        let names = (0..n).map(|m| if k == 0 { "e".to_string() } else { (0..k).rev().map(|i| if m >> i & 1 == 1 { '1' } else { '0' }).collect() }).collect();
        Self::from_fn(names, |a, b| a & !b == 0).expect("boolean algebra is a lattice")
    }

    /// The four-element diamond 0 < a, b < 1.
    pub fn diamond() -> Self {
        let names = ["0", "a", "b", "1"].iter().map(|s| s.to_string()).collect();
        Self::from_pairs(names, &[(0, 1), (0, 2), (1, 3), (2, 3)], true).expect("diamond is a lattice")
    }

    /// Tuple code of the i-th power, digit `i` read as `code / base^i % base`.
    pub fn decode_tuple(code: usize, base: usize, len: usize) -> Vec<Elem> {
        (0..len).map(|i| code / base.pow(i as u32) % base).collect()
    }

    pub fn encode_tuple(t: &[Elem], base: usize) -> usize {
        t.iter().rev().fold(0, |acc, &x| acc * base + x)
    }

    /// The pointwise-ordered power `self^len`; tuples are named `(a,b,..)`.
    pub fn power(&self, len: usize) -> Lattice {
        let n = self.size();
        let total = n.pow(len as u32);
        let tuples: Vec<Vec<Elem>> = (0..total).map(|c| Self::decode_tuple(c, n, len)).collect();
        let names: Vec<String> = tuples.iter().map(|t| format!("({})", t.iter().map(|&x| self.name(x)).collect::<Vec<_>>().join(","))).collect();
        let index = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut leq = vec![false; total * total];
        let mut meet = vec![0; total * total];
        let mut join = vec![0; total * total];
        for a in 0..total {
            for b in 0..total {
                let (ta, tb) = (&tuples[a], &tuples[b]);
                leq[a * total + b] = ta.iter().zip(tb).all(|(&x, &y)| self.leq(x, y));
                let m: Vec<Elem> = ta.iter().zip(tb).map(|(&x, &y)| self.meet(x, y)).collect();
                let j: Vec<Elem> = ta.iter().zip(tb).map(|(&x, &y)| self.join(x, y)).collect();
                meet[a * total + b] = Self::encode_tuple(&m, n);
                join[a * total + b] = Self::encode_tuple(&j, n);
            }
        }
        let top = Self::encode_tuple(&vec![self.top; len], n);
        let bottom = Self::encode_tuple(&vec![self.bottom; len], n);
        Lattice { names, index, leq, meet, join, top, bottom }
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Result<Elem> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a * self.names.len() + b]
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.names.len() + b]
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.names.len() + b]
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn meet_all(&self, it: impl IntoIterator<Item = Elem>) -> Elem {
        it.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn join_all(&self, it: impl IntoIterator<Item = Elem>) -> Elem {
        it.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn order_matrix(&self) -> &[bool] {
        &self.leq
    }

    /// Pairs (a, b) with a < b and nothing strictly between.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let n = self.size();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq(a, b) && !(0..n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_distributive(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.elements().all(|c| self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c)))))
    }

    /// Elements listed in a linear extension of the order.
    pub fn linear_extension(&self) -> Vec<Elem> {
        let mut v: Vec<Elem> = self.elements().collect();
        v.sort_by_key(|&a| self.elements().filter(|&b| self.leq(b, a)).count());
        v
    }
}

/// A finite partial order without lattice requirements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    index: HashMap<String, Elem>,
    leq: Vec<bool>,
}

impl Poset {
    pub fn from_matrix(names: Vec<String>, leq: Vec<bool>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::EmptyCarrier);
        }
        if leq.len() != n * n {
            return Err(Error::Shape("order matrix has the wrong size".into()));
        }
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        let le = |a: usize, b: usize| leq[a * n + b];
        for a in 0..n {
            if !le(a, a) {
                return Err(Error::NotReflexive(names[a].clone()));
            }
            for b in 0..n {
                if a != b && le(a, b) && le(b, a) {
                    return Err(Error::NotAntisymmetric(names[a].clone(), names[b].clone()));
                }
                for c in 0..n {
                    if le(a, b) && le(b, c) && !le(a, c) {
                        return Err(Error::NotTransitive(names[a].clone(), names[b].clone(), names[c].clone()));
                    }
                }
            }
        }
        Ok(Poset { names, index, leq })
    }

    pub fn from_pairs(names: Vec<String>, pairs: &[(Elem, Elem)], hasse: bool) -> Result<Self> {
        let n = names.len();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            leq[a * n + a] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::Shape("order pair out of range".into()));
            }
            leq[a * n + b] = true;
        }
        if hasse {
            for k in 0..n {
                for i in 0..n {
                    if leq[i * n + k] {
                        for j in 0..n {
                            if leq[k * n + j] {
                                leq[i * n + j] = true;
                            }
                        }
                    }
                }
            }
        }
        Self::from_matrix(names, leq)
    }

    pub fn discrete(names: Vec<String>) -> Result<Self> {
        Self::from_pairs(names, &[], false)
    }

    pub fn from_fn(names: Vec<String>, le: impl Fn(Elem, Elem) -> bool) -> Result<Self> {
        let n = names.len();
        let leq = (0..n * n).map(|i| le(i / n, i % n)).collect();
        Self::from_matrix(names, leq)
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Result<Elem> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a * self.names.len() + b]
    }

    /// Smallest downward-closed superset of `mask`.
    pub fn down_closure(&self, mask: u64) -> u64 {
        let mut out = 0u64;
        for b in self.elements() {
            if mask_members(mask).any(|a| self.leq(b, a)) {
                out |= 1 << b;
            }
        }
        out
    }

    pub fn is_down_closed(&self, mask: u64) -> bool {
        self.down_closure(mask) == mask
    }

    /// All downsets, ordered by size and then by mask.
    pub fn downsets(&self, cap: usize) -> Result<Vec<u64>> {
        let n = self.size();
        if n >= 32 {
            return Err(Error::Cap(format!("carrier of size {n} is too large for downset enumeration")));
        }
        let mut out = Vec::new();
        for mask in subsets(n) {
            if self.is_down_closed(mask) {
                out.push(mask);
                if out.len() > cap {
                    return Err(Error::Cap(format!("more than {cap} downsets")));
                }
            }
        }
        out.sort_by_key(|&m| (m.count_ones(), m));
        Ok(out)
    }

    pub fn set_name(&self, mask: u64) -> String {
        let members: Vec<&str> = mask_members(mask).map(|a| self.name(a)).collect();
        format!("{{{}}}", members.join(","))
    }
}

/// Iterates the subsets of `0..n` as bit masks (n <= 63).
pub fn subsets(n: usize) -> impl Iterator<Item = u64> {
    assert!(n < 64, "subset enumeration needs fewer than 64 elements");
    0..(1u64 << n)
}

pub fn mask_members(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_meets_and_joins() {
        let c = Lattice::chain(4);
        assert_eq!(c.meet(1, 3), 1);
        assert_eq!(c.join(1, 3), 3);
        assert_eq!(c.top(), 3);
        assert_eq!(c.bottom(), 0);
    }

    #[test]
    fn boolean_has_complements() {
        let b = Lattice::boolean(3);
        assert_eq!(b.size(), 8);
        for a in b.elements() {
            let comp = 7 - a;
            assert_eq!(b.meet(a, comp), b.bottom());
            assert_eq!(b.join(a, comp), b.top());
        }
        assert!(b.is_distributive());
    }

    #[test]
    fn rejects_missing_meets() {
        let names: Vec<String> = ["a", "b", "t"].iter().map(|s| s.to_string()).collect();
        let err = Lattice::from_pairs(names, &[(0, 2), (1, 2)], true).unwrap_err();
        assert!(matches!(err, Error::MissingMeet(_, _)));
    }

    #[test]
    fn rejects_cycles() {
        let names: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let err = Lattice::from_pairs(names, &[(0, 1), (1, 0)], true).unwrap_err();
        assert!(matches!(err, Error::NotAntisymmetric(_, _)));
    }

    #[test]
    fn diamond_covers() {
        let d = Lattice::diamond();
        assert_eq!(d.covers().len(), 4);
        assert!(d.is_distributive());
    }
}
