#![allow(dead_code)]

use arrowlab::gen::{random_algebra, small_lattices};
use arrowlab::lambda::Term;
use arrowlab::{ArrowAlgebra, Elem, Lattice};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// A second model of an arrow algebra built only from its order, implication table and separator,
/// with every derived operation computed from the defining meets by brute force.
pub struct Naive {
    pub n: usize,
    le: Vec<bool>,
    imp: Vec<Elem>,
    pub sep: Vec<bool>,
}

impl Naive {
    pub fn of(a: &ArrowAlgebra) -> Self {
        let n = a.size();
        Naive {
            n,
            le: (0..n * n).map(|i| a.leq(i / n, i % n)).collect(),
            imp: (0..n * n).map(|i| a.imp(i / n, i % n)).collect(),
            sep: (0..n).map(|x| a.in_sep(x)).collect(),
        }
    }

    pub fn le(&self, x: Elem, y: Elem) -> bool {
        self.le[x * self.n + y]
    }

    pub fn imp(&self, x: Elem, y: Elem) -> Elem {
        self.imp[x * self.n + y]
    }

    pub fn top(&self) -> Elem {
        (0..self.n).find(|&t| (0..self.n).all(|x| self.le(x, t))).unwrap()
    }

    /// The greatest lower bound, found as the lower bound above every other lower bound.
    pub fn glb(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        let xs: Vec<Elem> = xs.into_iter().collect();
        let lower: Vec<Elem> = (0..self.n).filter(|&l| xs.iter().all(|&x| self.le(l, x))).collect();
        *lower.iter().find(|&&g| lower.iter().all(|&l| self.le(l, g))).expect("complete lattice")
    }

    pub fn lub(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        let xs: Vec<Elem> = xs.into_iter().collect();
        let upper: Vec<Elem> = (0..self.n).filter(|&u| xs.iter().all(|&x| self.le(x, u))).collect();
        *upper.iter().find(|&&g| upper.iter().all(|&u| self.le(g, u))).expect("complete lattice")
    }

    pub fn entails(&self, x: Elem, y: Elem) -> bool {
        self.sep[self.imp(x, y)]
    }

    pub fn partial(&self, x: Elem) -> Elem {
        self.imp(self.top(), x)
    }

    pub fn k(&self) -> Elem {
        let n = self.n;
        self.glb((0..n * n).map(|i| self.imp(i / n, self.imp(i % n, i / n))))
    }

    pub fn s(&self) -> Elem {
        let n = self.n;
        self.glb((0..n * n * n).map(|i| {
            let (a, b, c) = (i / (n * n), i / n % n, i % n);
            self.imp(self.imp(a, self.imp(b, c)), self.imp(self.imp(a, b), self.imp(a, c)))
        }))
    }

    /// The third combinator over every set of (b, c) pairs; only for tiny carriers.
    pub fn a(&self) -> Elem {
        let n = self.n;
        assert!(n <= 3);
        let mut all = Vec::new();
        for a in 0..n {
            for mask in 0u64..1 << (n * n) {
                let pairs: Vec<(Elem, Elem)> = (0..n * n).filter(|p| mask >> p & 1 == 1).map(|p| (p / n, p % n)).collect();
                let hyp = self.glb(pairs.iter().map(|&(b, c)| self.imp(a, self.imp(b, c))));
                let con = self.glb(pairs.iter().map(|&(b, c)| self.imp(b, c)));
                all.push(self.imp(hyp, self.imp(a, con)));
            }
        }
        self.glb(all)
    }

    pub fn i(&self) -> Elem {
        self.glb((0..self.n).map(|a| self.imp(a, a)))
    }

    pub fn b(&self) -> Elem {
        let n = self.n;
        self.glb((0..n * n * n).map(|i| {
            let (a, b, c) = (i / (n * n), i / n % n, i % n);
            self.imp(self.imp(b, c), self.imp(self.imp(a, b), self.imp(a, c)))
        }))
    }

    pub fn apply(&self, a: Elem, b: Elem) -> Elem {
        let n = self.n;
        self.glb((0..n * n).filter(|&i| self.le(a, self.imp(b, self.imp(i / n, i % n)))).map(|i| self.imp(i / n, i % n)))
    }

    pub fn abstraction(&self, f: impl Fn(Elem) -> Elem) -> Elem {
        self.glb((0..self.n).map(|x| self.imp(x, self.partial(f(x)))))
    }

    pub fn product(&self, a: Elem, b: Elem) -> Elem {
        let (pa, pb) = (self.partial(a), self.partial(b));
        self.glb((0..self.n).map(|z| self.imp(z, self.partial(self.apply(self.apply(z, pa), pb)))))
    }

    pub fn sum(&self, a: Elem, b: Elem) -> Elem {
        self.glb((0..self.n).map(|c| {
            let dc = self.partial(c);
            self.imp(self.imp(a, dc), self.imp(self.imp(b, dc), dc))
        }))
    }

    /// Direct recursive interpretation with a named environment and element names for constants.
    pub fn interpret(&self, alg: &ArrowAlgebra, t: &Term, env: &BTreeMap<String, Elem>) -> Elem {
        match t {
            Term::Var(x) => env[x],
            Term::Const(c) => alg.index_of(c).unwrap(),
            Term::App(m, n) => self.apply(self.interpret(alg, m, env), self.interpret(alg, n, env)),
            Term::Abs(x, body) => self.abstraction(|v| {
                let mut inner = env.clone();
                inner.insert(x.clone(), v);
                self.interpret(alg, body, &inner)
            }),
        }
    }

    pub fn morphism_leq(&self, f: &[Elem], g: &[Elem]) -> bool {
        self.sep[self.glb(f.iter().zip(g).map(|(&x, &y)| self.imp(x, y)))]
    }
}

/// Heyting implication of a finite distributive lattice: the largest c with c meet a below b.
pub fn heyting(lat: &Lattice, a: Elem, b: Elem) -> Elem {
    let cands: Vec<Elem> = lat.elements().filter(|&c| lat.leq(lat.meet(c, a), b)).collect();
    *cands.iter().find(|&&c| cands.iter().all(|&d| lat.leq(d, c))).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A seeded random algebra on one of the lattices with at most `max` elements.
pub fn random_alg(max: usize, pick: usize, seed: u64) -> ArrowAlgebra {
    let lats = small_lattices(max);
    random_algebra(&lats[pick % lats.len()], &mut rng(seed))
}

/// Tuples of length `len` over `0..base`, in counting order.
pub fn tuples(base: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..base.pow(len as u32)).map(move |code| (0..len).map(|i| code / base.pow(i as u32) % base).collect())
}
