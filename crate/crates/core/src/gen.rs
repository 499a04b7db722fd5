//! Random and enumerated finite instances.

use crate::algebra::{ArrowAlgebra, ArrowStructure};
use crate::lattice::{mask_members, subsets, Elem, Lattice};
use rand::Rng;

/// A random implication on `lat` satisfying the variance law.
pub fn random_structure<R: Rng>(lat: &Lattice, rng: &mut R) -> ArrowStructure {
    let n = lat.size();
    let ext = lat.linear_extension();
    let mut pos = vec![0usize; n];
    for (i, &e) in ext.iter().enumerate() {
        pos[e] = i;
    }
    let mut pairs: Vec<(Elem, Elem)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    pairs.sort_by_key(|&(a, b)| (pos[b] as isize - pos[a] as isize, a, b));
    let mut imp: Vec<Option<Elem>> = vec![None; n * n];
    for (a, b) in pairs {
        let mut lb = lat.bottom();
        for a2 in 0..n {
            for b2 in 0..n {
                if lat.leq(a, a2) && lat.leq(b2, b) {
                    if let Some(v) = imp[a2 * n + b2] {
                        lb = lat.join(lb, v);
                    }
                }
            }
        }
        let above: Vec<Elem> = (0..n).filter(|&x| lat.leq(lb, x)).collect();
        imp[a * n + b] = Some(above[rng.gen_range(0..above.len())]);
    }
    ArrowStructure::new(lat.clone(), imp.into_iter().map(|x| x.unwrap()).collect()).expect("generated implication respects variance")
}

pub fn upsets(lat: &Lattice) -> Vec<Vec<bool>> {
    let n = lat.size();
    subsets(n)
        .filter_map(|mask| {
            let set: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            let up = mask_members(mask).all(|a| (0..n).all(|b| !lat.leq(a, b) || set[b]));
            up.then_some(set)
        })
        .collect()
}

/// All upward-closed subsets making `st` an arrow algebra.
pub fn valid_separators(st: &ArrowStructure) -> Vec<Vec<bool>> {
    st.combinators();
    upsets(st.lattice()).into_iter().filter(|sep| ArrowAlgebra::new(st.clone(), sep.clone()).map(|a| a.is_valid()).unwrap_or(false)).collect()
}

/// A random arrow algebra over `lat`, preferring non-trivial separators.
pub fn random_algebra<R: Rng>(lat: &Lattice, rng: &mut R) -> ArrowAlgebra {
    let st = random_structure(lat, rng);
    let seps = valid_separators(&st);
    let bottom = lat.bottom();
    let nontrivial: Vec<&Vec<bool>> = seps.iter().filter(|s| !s[bottom]).collect();
    let sep = if !nontrivial.is_empty() && rng.gen_bool(0.8) {
        nontrivial[rng.gen_range(0..nontrivial.len())].clone()
    } else {
        seps[rng.gen_range(0..seps.len())].clone()
    };
    ArrowAlgebra::new(st, sep).expect("separator has carrier size")
}

/// Small lattices: chains up to `max` and the diamond when it fits.
pub fn small_lattices(max: usize) -> Vec<Lattice> {
    let mut out: Vec<Lattice> = (1..=max).map(Lattice::chain).collect();
    if max >= 4 {
        out.push(Lattice::diamond());
    }
    out
}

/// An order-, implication- and separator-preserving bijection from `a` to `b`.
pub fn isomorphism(a: &ArrowAlgebra, b: &ArrowAlgebra) -> Option<Vec<Elem>> {
    let n = a.size();
    if n != b.size() || n > 9 {
        return None;
    }
    let mut perm: Vec<Elem> = (0..n).collect();
    loop {
        let ok = (0..n).all(|x| a.in_sep(x) == b.in_sep(perm[x]))
            && (0..n).all(|x| (0..n).all(|y| a.leq(x, y) == b.leq(perm[x], perm[y]) && perm[a.imp(x, y)] == b.imp(perm[x], perm[y])));
        if ok {
            return Some(perm);
        }
        if !next_permutation(&mut perm) {
            return None;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_algebras_verify() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for lat in small_lattices(4) {
            for _ in 0..5 {
                let alg = random_algebra(&lat, &mut rng);
                assert!(alg.is_valid());
            }
        }
    }

    #[test]
    fn full_set_is_always_a_separator() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let st = random_structure(&Lattice::chain(3), &mut rng);
        assert!(valid_separators(&st).iter().any(|s| s.iter().all(|&x| x)));
    }

    #[test]
    fn frame_is_isomorphic_to_itself_relabelled() {
        let a = ArrowAlgebra::frame(Lattice::chain(3)).unwrap();
        assert_eq!(isomorphism(&a, &a), Some(vec![0, 1, 2]));
    }
}
