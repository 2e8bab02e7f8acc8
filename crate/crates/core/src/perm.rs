//! Injections and permutations of skeletal finite sets `{0, ..., n-1}`.
//!
//! Composition is written diagrammatically: `compose(f, g)` applies `f`
//! first, so `compose(f, g)(i) = g(f(i))`.

use std::fmt;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// An injective map `{0..source} -> {0..target}`, stored as its image sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Injection {
    target: usize,
    images: Vec<usize>,
}

/// A bijection of `{0..n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Injection {
    pub fn new(target: usize, images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; target];
        for &x in &images {
            if x >= target || seen[x] {
                return Err(Error::Domain(format!(
                    "{images:?} is not an injection into {target}"
                )));
            }
            seen[x] = true;
        }
        Ok(Injection { target, images })
    }

    pub fn identity(n: usize) -> Self {
        Injection {
            target: n,
            images: (0..n).collect(),
        }
    }

    pub fn source(&self) -> usize {
        self.images.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_bijection(&self) -> bool {
        self.source() == self.target
    }

    pub fn to_permutation(&self) -> Option<Permutation> {
        self.is_bijection().then(|| Permutation {
            images: self.images.clone(),
        })
    }

    /// Uniformly random injection `n -> m`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Result<Self> {
        if n > m {
            return Err(Error::Domain(format!("no injection {n} -> {m}")));
        }
        let mut all: Vec<usize> = (0..m).collect();
        all.shuffle(rng);
        all.truncate(n);
        Ok(Injection {
            target: m,
            images: all,
        })
    }

    /// Every injection `n -> m`, in lexicographic order of image sequences.
    pub fn all(n: usize, m: usize) -> Vec<Injection> {
        if n > m {
            return Vec::new();
        }
        (0..m)
            .permutations(n)
            .map(|images| Injection { target: m, images })
            .collect()
    }
}

impl fmt::Display for Injection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:{}->{}", self.images, self.source(), self.target)
    }
}

/// `g ∘ f`, defined when `target(f) = source(g)`.
pub fn compose(f: &Injection, g: &Injection) -> Result<Injection> {
    if f.target != g.source() {
        return Err(Error::Compose {
            left: f.source(),
            mid: f.target,
            mid2: g.source(),
            right: g.target,
        });
    }
    Ok(Injection {
        target: g.target,
        images: f.images.iter().map(|&i| g.images[i]).collect(),
    })
}

/// Block sum: `f` on the first `p` points, `g` shifted by `target(f)` on the rest.
pub fn box_product(f: &Injection, g: &Injection) -> Injection {
    let q = f.target;
    let images = f
        .images
        .iter()
        .copied()
        .chain(g.images.iter().map(|&x| x + q))
        .collect();
    Injection {
        target: q + g.target,
        images,
    }
}

/// `rho(n, m)(i) = (m - n) + i`, the inclusion of `n` as the last block of `m`.
pub fn rho(n: usize, m: usize) -> Result<Injection> {
    if n > m {
        return Err(Error::Domain(format!("rho({n}, {m}) needs n <= m")));
    }
    Ok(Injection {
        target: m,
        images: (m - n..m).collect(),
    })
}

/// Canonical `α' ∈ Σ_m` with `α' ∘ ρ = α`: the last `n` points follow `α`
/// and the first `m - n` go increasingly onto the complement of its image.
pub fn complete(alpha: &Injection) -> Permutation {
    let m = alpha.target;
    let mut used = vec![false; m];
    for &x in &alpha.images {
        used[x] = true;
    }
    let images = (0..m)
        .filter(|&x| !used[x])
        .chain(alpha.images.iter().copied())
        .collect();
    Permutation { images }
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        Injection::new(n, images).map(|inj| Permutation { images: inj.images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// The adjacent transposition `s_i` exchanging `i` and `i + 1` in `Σ_n`.
    pub fn transposition(n: usize, i: usize) -> Self {
        assert!(i + 1 < n, "s_{i} is not in Σ_{n}");
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, i + 1);
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn as_injection(&self) -> Injection {
        Injection {
            target: self.len(),
            images: self.images.clone(),
        }
    }

    /// Apply `self` first, then `g`. Panics if the sizes differ.
    pub fn then(&self, g: &Permutation) -> Permutation {
        assert_eq!(
            self.len(),
            g.len(),
            "composing permutations of different size"
        );
        Permutation {
            images: self.images.iter().map(|&i| g.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    pub fn inversions(&self) -> usize {
        let v = &self.images;
        (0..v.len())
            .flat_map(|i| (i + 1..v.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| v[i] > v[j])
            .count()
    }

    /// `(-1)^{inversions}`.
    pub fn sign(&self) -> i64 {
        if self.inversions().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn boxed(&self, other: &Permutation) -> Permutation {
        box_product(&self.as_injection(), &other.as_injection())
            .to_permutation()
            .expect("box of bijections is a bijection")
    }

    /// A first descent `i` with `self(i) > self(i + 1)`, if any.
    pub fn first_descent(&self) -> Option<usize> {
        self.images.windows(2).position(|w| w[0] > w[1])
    }

    /// Adjacent transpositions `[i_1, ..., i_k]` with
    /// `self = s_{i_1} ∘ ... ∘ s_{i_k}` (functional order) and `k` minimal,
    /// so `self_* = (s_{i_1})_* ... (s_{i_k})_*`.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut current = self.clone();
        let mut word = Vec::new();
        // current = current' ∘ s_i, with current' having one fewer inversion.
        while let Some(i) = current.first_descent() {
            word.push(i);
            current.images.swap(i, i + 1);
        }
        word.reverse();
        word
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Permutation {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        Permutation { images }
    }

    /// All of `Σ_n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        (0..n)
            .permutations(n)
            .map(|images| Permutation { images })
            .collect()
    }

    /// Whether `self` is increasing on each consecutive block of the given sizes.
    pub fn is_shuffle_of(&self, blocks: &[usize]) -> bool {
        let mut start = 0;
        for &b in blocks {
            if !self.images[start..start + b]
                .windows(2)
                .all(|w| w[0] < w[1])
            {
                return false;
            }
            start += b;
        }
        start == self.len()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

/// `τ^{m,n} ∈ Σ_{m+n}`: `i < m ↦ i + n`, `i ≥ m ↦ i - m`.
pub fn twist(m: usize, n: usize) -> Permutation {
    let images = (0..m + n)
        .map(|i| if i < m { i + n } else { i - m })
        .collect();
    Permutation { images }
}

/// All `(n, m)`-shuffles in lexicographic order of image sequences.
pub fn shuffles(n: usize, m: usize) -> Vec<Permutation> {
    multi_shuffles(&[n, m])
}

/// Permutations increasing on each consecutive block, lexicographically ordered.
pub fn multi_shuffles(blocks: &[usize]) -> Vec<Permutation> {
    let total: usize = blocks.iter().sum();
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(total);
    let free: Vec<usize> = (0..total).collect();
    fill_blocks(blocks, &free, &mut images, &mut out);
    out
}

fn fill_blocks(
    blocks: &[usize],
    free: &[usize],
    images: &mut Vec<usize>,
    out: &mut Vec<Permutation>,
) {
    match blocks.split_first() {
        None => out.push(Permutation {
            images: images.clone(),
        }),
        Some((&b, rest)) => {
            for chosen in free.iter().copied().combinations(b) {
                let remaining: Vec<usize> = free
                    .iter()
                    .copied()
                    .filter(|x| !chosen.contains(x))
                    .collect();
                let len = images.len();
                images.extend_from_slice(&chosen);
                fill_blocks(rest, &remaining, images, out);
                images.truncate(len);
            }
        }
    }
}

/// The unique factorization `θ = sh ∘ (α □ β)` with `sh` an `(n, m)`-shuffle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShuffleFactors {
    pub shuffle: Permutation,
    pub left: Permutation,
    pub right: Permutation,
}

pub fn shuffle_decompose(theta: &Permutation, n: usize, m: usize) -> Result<ShuffleFactors> {
    if theta.len() != n + m {
        return Err(Error::Dimension(format!(
            "permutation of {} points split as {n} + {m}",
            theta.len()
        )));
    }
    let (left_sh, left) = sort_block(&theta.images[..n]);
    let (right_sh, right) = sort_block(&theta.images[n..]);
    let mut images = left_sh;
    images.extend(right_sh);
    Ok(ShuffleFactors {
        shuffle: Permutation { images },
        left,
        right,
    })
}

// The sorted values of a block, and the permutation sending each position to
// the rank of its value.
fn sort_block(block: &[usize]) -> (Vec<usize>, Permutation) {
    let mut sorted = block.to_vec();
    sorted.sort_unstable();
    let ranks = block
        .iter()
        .map(|x| sorted.binary_search(x).expect("value present"))
        .collect();
    (sorted, Permutation { images: ranks })
}

/// Binomial coefficient for small arguments.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inj(target: usize, images: &[usize]) -> Injection {
        Injection::new(target, images.to_vec()).unwrap()
    }

    fn perm(images: &[usize]) -> Permutation {
        Permutation::new(images.to_vec()).unwrap()
    }

    // Independent oracle: sign by counting cycles of even length.
    fn sign_by_cycles(p: &Permutation) -> i64 {
        let n = p.len();
        let mut seen = vec![false; n];
        let mut s = 1;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = p.apply(x);
                len += 1;
            }
            if len % 2 == 0 {
                s = -s;
            }
        }
        s
    }

    #[test]
    fn compose_examples() {
        let f = inj(2, &[1]);
        let g = inj(3, &[0, 2]);
        assert_eq!(compose(&f, &g).unwrap(), inj(3, &[2]));
        assert_eq!(compose(&Injection::identity(2), &g).unwrap(), g);
        let t = twist(1, 1).as_injection();
        assert_eq!(compose(&t, &t).unwrap(), Injection::identity(2));
        assert!(matches!(compose(&g, &f), Err(Error::Compose { .. })));
    }

    #[test]
    fn sign_examples() {
        assert_eq!(Permutation::identity(4).sign(), 1);
        assert_eq!(twist(1, 1).sign(), -1);
        assert_eq!(perm(&[1, 2, 0]).inversions(), 2);
        assert_eq!(perm(&[1, 2, 0]).sign(), 1);
    }

    #[test]
    fn sign_matches_cycle_oracle() {
        for n in 0..=5 {
            for p in Permutation::all(n) {
                assert_eq!(p.sign(), sign_by_cycles(&p), "{p}");
            }
        }
    }

    #[test]
    fn box_examples() {
        let swap = twist(1, 1).as_injection();
        assert_eq!(
            box_product(&swap, &Injection::identity(1)),
            inj(3, &[1, 0, 2])
        );
        assert_eq!(
            box_product(&Injection::identity(2), &Injection::identity(3)),
            Injection::identity(5)
        );
        assert_eq!(box_product(&inj(2, &[1]), &inj(1, &[0])), inj(3, &[1, 2]));
    }

    #[test]
    fn twist_examples() {
        assert_eq!(twist(1, 1).images(), &[1, 0]);
        assert_eq!(twist(0, 3), Permutation::identity(3));
        let t = twist(2, 3);
        assert_eq!(t.images(), &[3, 4, 0, 1, 2]);
        assert_eq!(t.inversions(), 6);
        assert_eq!(t.sign(), 1);
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(2, 5).unwrap().images(), &[3, 4]);
        assert_eq!(rho(3, 3).unwrap(), Injection::identity(3));
        let r = rho(0, 3).unwrap();
        assert_eq!(r.source(), 0);
        assert_eq!(r.target(), 3);
        assert!(matches!(rho(4, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn complete_examples() {
        let a = inj(3, &[1]);
        let c = complete(&a);
        assert_eq!(c.images(), &[0, 2, 1]);
        assert_eq!(c.sign(), -1);
        assert_eq!(compose(&rho(1, 3).unwrap(), &c.as_injection()).unwrap(), a);
        assert_eq!(complete(&rho(2, 5).unwrap()), Permutation::identity(5));
        let b = perm(&[2, 0, 1]);
        assert_eq!(complete(&b.as_injection()), b);
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(shuffles(1, 1), vec![perm(&[0, 1]), perm(&[1, 0])]);
        assert_eq!(shuffles(3, 0), vec![Permutation::identity(3)]);
        assert_eq!(shuffles(2, 2).len(), 6);
        for (n, m) in [(0, 0), (1, 3), (2, 3), (3, 3)] {
            assert_eq!(shuffles(n, m).len(), binomial(n + m, n));
        }
        // exhaustive filter oracle
        for n in 0..=3 {
            for m in 0..=3 {
                let filtered: Vec<_> = Permutation::all(n + m)
                    .into_iter()
                    .filter(|p| p.is_shuffle_of(&[n, m]))
                    .collect();
                assert_eq!(shuffles(n, m), filtered);
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let f = shuffle_decompose(&Permutation::identity(4), 1, 3).unwrap();
        assert!(f.shuffle.is_identity() && f.left.is_identity() && f.right.is_identity());

        let f = shuffle_decompose(&perm(&[1, 2, 0]), 1, 2).unwrap();
        assert_eq!(f.shuffle, perm(&[1, 0, 2]));
        assert_eq!(f.left, Permutation::identity(1));
        assert_eq!(f.right, perm(&[1, 0]));

        let f = shuffle_decompose(&twist(2, 3), 2, 3).unwrap();
        assert_eq!(f.shuffle, twist(2, 3));
        assert!(f.left.is_identity() && f.right.is_identity());
    }

    #[test]
    fn decompose_matches_exhaustive_search() {
        for total in 0..=5 {
            for n in 0..=total {
                let m = total - n;
                for theta in Permutation::all(total) {
                    // oracle: search Σ_n × Σ_m × shuffles for θ = sh ∘ (α □ β)
                    let mut found = Vec::new();
                    for sh in shuffles(n, m) {
                        for a in Permutation::all(n) {
                            for b in Permutation::all(m) {
                                if a.boxed(&b).then(&sh) == theta {
                                    found.push((sh.clone(), a.clone(), b));
                                }
                            }
                        }
                    }
                    assert_eq!(found.len(), 1);
                    let f = shuffle_decompose(&theta, n, m).unwrap();
                    assert_eq!((f.shuffle, f.left, f.right), found.pop().unwrap());
                }
            }
        }
    }

    #[test]
    fn reduced_word_rebuilds_permutation() {
        for n in 0..=5 {
            for p in Permutation::all(n) {
                let word = p.reduced_word();
                assert_eq!(word.len(), p.inversions());
                // s_{i_1} ∘ ... ∘ s_{i_k}: apply the last letter first
                let rebuilt = word.iter().rev().fold(Permutation::identity(n), |acc, &i| {
                    acc.then(&Permutation::transposition(n, i))
                });
                assert_eq!(rebuilt, p);
            }
        }
    }

    #[test]
    fn multi_shuffle_counts() {
        assert_eq!(multi_shuffles(&[1, 1, 1]).len(), 6);
        assert_eq!(multi_shuffles(&[2, 1, 2]).len(), 30);
        for p in multi_shuffles(&[1, 2, 1]) {
            assert!(p.is_shuffle_of(&[1, 2, 1]));
        }
    }
}
