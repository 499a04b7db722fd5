//! The shipped corpus of algebras, PCAs and morphisms.

use crate::algebra::ArrowAlgebra;
use crate::lattice::{Elem, Lattice};
use crate::modified::sierpinski;
use crate::morph::{frame_homomorphisms, frame_right_adjoint};
use crate::pca::{downset_arrow_algebra, enumerate_pcas, per_arrow_algebra, Pca};

pub fn frames() -> Vec<(String, ArrowAlgebra)> {
    let mut out: Vec<(String, ArrowAlgebra)> = (1..=5).map(|n| (format!("chain-{n}"), ArrowAlgebra::frame(Lattice::chain(n)).expect("chain"))).collect();
    out.push(("diamond".into(), ArrowAlgebra::frame(Lattice::diamond()).expect("diamond")));
    out.push(("boolean-8".into(), ArrowAlgebra::frame(Lattice::boolean(3)).expect("boolean")));
    out
}

/// The one-point PCA followed by every two-element PCA found by table search.
pub fn pcas() -> Vec<(String, Pca)> {
    let mut out = vec![("pca-1".to_string(), Pca::trivial())];
    let two = enumerate_pcas(2).into_iter().filter(|p| p.size() == 2);
    out.extend(two.enumerate().map(|(i, p)| (format!("pca-2.{i}"), p)));
    out
}

/// Frames, then algebras built from PCAs and the Sierpinski algebra of the two-element frame.
pub fn algebras() -> Vec<(String, ArrowAlgebra)> {
    let mut out = frames();
    for (name, p) in pcas() {
        out.push((format!("downsets({name})"), downset_arrow_algebra(&p).expect("small downset algebra")));
    }
    out.push(("pers(pca-1)".into(), per_arrow_algebra(&Pca::trivial()).expect("one-point PERs")));
    let two = ArrowAlgebra::frame(Lattice::chain(2)).expect("chain");
    out.push(("sierpinski(chain-2)".into(), sierpinski(&two).expect("frame base").alg));
    out
}

/// A labelled map between two algebras together with a right adjoint.
pub type MapPair = (String, ArrowAlgebra, ArrowAlgebra, Vec<Elem>, Vec<Elem>);

/// Frame homomorphisms between the small frames, each with its right adjoint.
pub fn frame_pairs(max: usize) -> Vec<MapPair> {
    let small: Vec<(String, ArrowAlgebra)> = frames().into_iter().filter(|(_, a)| a.size() <= max).collect();
    let mut out = Vec::new();
    for (na, a) in &small {
        for (nb, b) in &small {
            for (i, f) in frame_homomorphisms(a, b).expect("small frames").into_iter().enumerate() {
                let h = frame_right_adjoint(a, b, &f);
                out.push((format!("{na}->{nb}#{i}"), a.clone(), b.clone(), f, h));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_valid() {
        for (name, a) in algebras() {
            assert!(a.is_valid(), "{name}");
        }
        assert!(pcas().len() > 1);
    }
}
