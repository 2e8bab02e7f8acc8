//! Symmetric sequences of non-negatively graded complexes and their Day
//! convolution.
//!
//! The `Σ_n`-action at level `n` is stored on the adjacent transpositions
//! and applied along reduced words. Day convolution elements are kept in
//! shuffle normal form `sh_*(a ⊗ b)`, which makes each `(A ⊗ B)_p` a free
//! module with an explicit basis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::chain::{koszul, ChainComplex, ChainElement, GradedMap, Label};
use crate::error::{Error, Result};
use crate::exactlin::{add, mul, Int, IntMatrix};
use crate::perm::{self, shuffle_decompose, Permutation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqLevel {
    pub complex: ChainComplex,
    /// `transpositions[i]` is the action of `s_i`, degree-preserving.
    pub transpositions: Vec<GradedMap>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymSeq {
    levels: Vec<SeqLevel>,
}

impl SymSeq {
    /// Validates connectivity, shapes, the chain-map property, and the
    /// Coxeter relations of `Σ_n` at every level.
    pub fn new(levels: Vec<SeqLevel>) -> Result<Self> {
        let seq = SymSeq { levels };
        seq.validate()?;
        Ok(seq)
    }

    pub(crate) fn new_unchecked(levels: Vec<SeqLevel>) -> Self {
        SymSeq { levels }
    }

    fn validate(&self) -> Result<()> {
        for (n, lvl) in self.levels.iter().enumerate() {
            let c = &lvl.complex;
            if !c.is_connective() {
                return Err(Error::Invalid(format!("level {n} has negative degrees")));
            }
            if lvl.transpositions.len() != n.saturating_sub(1) {
                return Err(Error::Invalid(format!(
                    "level {n} has {} transpositions, expected {}",
                    lvl.transpositions.len(),
                    n.saturating_sub(1)
                )));
            }
            for (i, s) in lvl.transpositions.iter().enumerate() {
                if s.shift != 0 {
                    return Err(Error::Invalid(format!("s_{i} at level {n} shifts degree")));
                }
                s.check_shapes(c, c)?;
                if let Some(d) = s.chain_map_defect(c, c, 1)? {
                    return Err(Error::Invalid(format!(
                        "s_{i} at level {n} is not a chain map at degree {d}"
                    )));
                }
            }
            for deg in c.degrees() {
                let r = c.rank(deg);
                if r == 0 {
                    continue;
                }
                let s: Vec<IntMatrix> = lvl
                    .transpositions
                    .iter()
                    .map(|t| t.block(deg, c, c))
                    .collect();
                let id = IntMatrix::identity(r);
                for i in 0..s.len() {
                    if s[i].mul(&s[i])? != id {
                        return Err(Error::Invalid(format!(
                            "s_{i} at level {n}, degree {deg} is not an involution"
                        )));
                    }
                    if i + 1 < s.len() {
                        let lhs = s[i].mul(&s[i + 1])?.mul(&s[i])?;
                        let rhs = s[i + 1].mul(&s[i])?.mul(&s[i + 1])?;
                        if lhs != rhs {
                            return Err(Error::Invalid(format!(
                                "braid relation for s_{i} fails at level {n}, degree {deg}"
                            )));
                        }
                    }
                    for j in i + 2..s.len() {
                        if s[i].mul(&s[j])? != s[j].mul(&s[i])? {
                            return Err(Error::Invalid(format!(
                                "s_{i} and s_{j} do not commute at level {n}, degree {deg}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn max_level(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, n: usize) -> &ChainComplex {
        &self.levels[n].complex
    }

    pub fn levels(&self) -> &[SeqLevel] {
        &self.levels
    }

    pub fn transposition(&self, n: usize, i: usize) -> &GradedMap {
        &self.levels[n].transpositions[i]
    }

    fn check_element(&self, n: usize, x: &ChainElement) -> Result<()> {
        if n > self.max_level() || self.levels.is_empty() {
            return Err(Error::LevelBound {
                requested: n,
                bound: self.max_level(),
            });
        }
        if x.coeffs.len() != self.level(n).rank(x.degree) {
            return Err(Error::Domain(format!(
                "element with {} coefficients at level {n}, degree {} (rank {})",
                x.coeffs.len(),
                x.degree,
                self.level(n).rank(x.degree)
            )));
        }
        Ok(())
    }

    /// `σ_*(x)` for `σ ∈ Σ_n`.
    pub fn act(&self, n: usize, sigma: &Permutation, x: &ChainElement) -> Result<ChainElement> {
        if sigma.len() != n {
            return Err(Error::Domain(format!(
                "permutation of {} points acting at level {n}",
                sigma.len()
            )));
        }
        self.check_element(n, x)?;
        let c = self.level(n);
        let mut y = x.clone();
        for &i in sigma.reduced_word().iter().rev() {
            y = self.levels[n].transpositions[i].apply(&y, c)?;
        }
        Ok(y)
    }

    /// Sequence with the given complexes and every transposition acting by `sign`.
    pub fn with_scalar_action(complexes: Vec<ChainComplex>, sign: Int) -> Result<Self> {
        let levels = complexes
            .into_iter()
            .enumerate()
            .map(|(n, c)| SeqLevel {
                transpositions: (0..n.saturating_sub(1))
                    .map(|_| GradedMap::scalar(&c, sign))
                    .collect(),
                complex: c,
            })
            .collect();
        SymSeq::new(levels)
    }

    /// The complex `C` placed at level `m` with trivial action, zero at every
    /// other level up to `max_level`.
    pub fn concentrated(m: usize, c: &ChainComplex, max_level: usize) -> Result<Self> {
        let complexes = (0..=max_level.max(m))
            .map(|n| {
                if n == m {
                    c.clone()
                } else {
                    ChainComplex::zero()
                }
            })
            .collect();
        SymSeq::with_scalar_action(complexes, 1)
    }

    /// Rank 1 in degree 0 at level 1, the regular representation of `Σ_2`
    /// at level 2, zero at level 0.
    pub fn regular_sigma2() -> Self {
        let level1 = ChainComplex::free(0, &[1], "u");
        let level2 = ChainComplex::new(
            0,
            vec![vec![Label::atom("id"), Label::atom("swap")]],
            vec![IntMatrix::zero(0, 2)],
        )
        .expect("free complex");
        let mut s0 = GradedMap::new(0);
        s0.blocks.insert(
            0,
            IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).expect("2x2"),
        );
        SymSeq::new(vec![
            SeqLevel {
                complex: ChainComplex::zero(),
                transpositions: vec![],
            },
            SeqLevel {
                complex: level1,
                transpositions: vec![],
            },
            SeqLevel {
                complex: level2,
                transpositions: vec![s0],
            },
        ])
        .expect("regular representation is a valid action")
    }
}

/// `Z[*]` up to level `max_level`: `Z[n]` at level `n`, transpositions by `-1`.
pub fn zstar_seq(max_level: usize) -> SymSeq {
    let complexes = (0..=max_level)
        .map(|n| crate::chain::sphere(n as i64))
        .collect();
    SymSeq::with_scalar_action(complexes, -1).expect("Z[*] is a valid symmetric sequence")
}

/// `sh_*(a ⊗ b)` with `a` a basis element of `A_{left_level}` and `b` of
/// `B_{right_level}`, `sh` an `(left_level, right_level)`-shuffle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DayGenerator {
    pub left_level: usize,
    pub left_degree: i64,
    pub left_index: usize,
    pub right_level: usize,
    pub right_degree: i64,
    pub right_index: usize,
    pub shuffle: Permutation,
}

impl DayGenerator {
    pub fn level(&self) -> usize {
        self.left_level + self.right_level
    }

    pub fn degree(&self) -> i64 {
        self.left_degree + self.right_degree
    }
}

impl fmt::Display for DayGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}_*(a[{},{}]#{} ⊗ b[{},{}]#{})",
            self.shuffle,
            self.left_level,
            self.left_degree,
            self.left_index,
            self.right_level,
            self.right_degree,
            self.right_index
        )
    }
}

/// A coefficient-reduced combination of Day generators of one bidegree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DayElement {
    pub level: usize,
    pub degree: i64,
    terms: BTreeMap<DayGenerator, Int>,
}

impl DayElement {
    pub fn zero(level: usize, degree: i64) -> Self {
        DayElement {
            level,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn generator(g: DayGenerator) -> Self {
        let mut x = DayElement::zero(g.level(), g.degree());
        x.terms.insert(g, 1);
        x
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DayGenerator, Int)> {
        self.terms.iter().map(|(g, &c)| (g, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, g: DayGenerator, c: Int) -> Result<()> {
        if g.level() != self.level || g.degree() != self.degree {
            return Err(Error::Domain(format!(
                "generator of bidegree ({}, {}) added to element of bidegree ({}, {})",
                g.level(),
                g.degree(),
                self.level,
                self.degree
            )));
        }
        if c == 0 {
            return Ok(());
        }
        let entry = self.terms.entry(g).or_insert(0);
        *entry = add(*entry, c)?;
        if *entry == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
        Ok(())
    }

    pub fn add(&self, other: &DayElement) -> Result<DayElement> {
        let mut out = self.clone();
        for (g, c) in other.terms() {
            out.add_term(g.clone(), c)?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: Int) -> Result<DayElement> {
        let mut out = DayElement::zero(self.level, self.degree);
        for (g, c) in self.terms() {
            out.add_term(g.clone(), mul(c, k)?)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DayElement) -> Result<DayElement> {
        self.add(&other.scale(-1)?)
    }
}

impl fmt::Display for DayElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (g, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}·{g}")?;
        }
        Ok(())
    }
}

/// Normal form of `coeff · θ_*(x ⊗ y)` for `x ∈ A_n`, `y ∈ B_m`, `θ ∈ Σ_{n+m}`:
/// writes `θ = sh ∘ (α □ β)` and expands `coeff · sh_*(α_*x ⊗ β_*y)`.
#[allow(clippy::too_many_arguments)]
pub fn day_normalize(
    a: &SymSeq,
    b: &SymSeq,
    theta: &Permutation,
    n: usize,
    x: &ChainElement,
    m: usize,
    y: &ChainElement,
    coeff: Int,
) -> Result<DayElement> {
    let f = shuffle_decompose(theta, n, m)?;
    let ax = a.act(n, &f.left, x)?;
    let by = b.act(m, &f.right, y)?;
    let mut out = DayElement::zero(n + m, x.degree + y.degree);
    if coeff == 0 {
        return Ok(out);
    }
    for (i, ci) in ax.terms() {
        for (j, cj) in by.terms() {
            let g = DayGenerator {
                left_level: n,
                left_degree: x.degree,
                left_index: i,
                right_level: m,
                right_degree: y.degree,
                right_index: j,
                shuffle: f.shuffle.clone(),
            };
            out.add_term(g, mul(mul(coeff, ci)?, cj)?)?;
        }
    }
    Ok(out)
}

fn basis_of(seq: &SymSeq, n: usize, deg: i64, idx: usize) -> ChainElement {
    seq.level(n).basis_element(deg, idx)
}

/// `τ^{A,B}(θ_*(a⊗b)) = (-1)^{ij} (θ ∘ τ^{m,n})_*(b ⊗ a)`.
pub fn day_twist(a: &SymSeq, b: &SymSeq, x: &DayElement) -> Result<DayElement> {
    let mut out = DayElement::zero(x.level, x.degree);
    for (g, c) in x.terms() {
        let (n, m) = (g.left_level, g.right_level);
        let theta = perm::twist(m, n).then(&g.shuffle);
        let sign = koszul(g.left_degree * g.right_degree);
        let y = day_normalize(
            b,
            a,
            &theta,
            m,
            &basis_of(b, m, g.right_degree, g.right_index),
            n,
            &basis_of(a, n, g.left_degree, g.left_index),
            mul(sign, c)?,
        )?;
        out = out.add(&y)?;
    }
    Ok(out)
}

/// The rejected twist `θ_*(a⊗b) ↦ (-1)^{ij} θ_*(b⊗a)`, evaluated on a raw
/// representative (it does not descend to normal forms).
#[allow(clippy::too_many_arguments)]
pub fn naive_twist(
    a: &SymSeq,
    b: &SymSeq,
    theta: &Permutation,
    n: usize,
    x: &ChainElement,
    m: usize,
    y: &ChainElement,
) -> Result<DayElement> {
    let _ = a;
    let sign = koszul(x.degree * y.degree);
    day_normalize(b, a, theta, m, y, n, x, sign)
}

/// The `F`-action `γ_*(θ_*(a⊗b)) = (γ∘θ)_*(a⊗b)`.
pub fn day_act(a: &SymSeq, b: &SymSeq, gamma: &Permutation, x: &DayElement) -> Result<DayElement> {
    if gamma.len() != x.level {
        return Err(Error::Domain(format!(
            "permutation of {} points acting at level {}",
            gamma.len(),
            x.level
        )));
    }
    let mut out = DayElement::zero(x.level, x.degree);
    for (g, c) in x.terms() {
        let theta = g.shuffle.then(gamma);
        let y = day_normalize(
            a,
            b,
            &theta,
            g.left_level,
            &basis_of(a, g.left_level, g.left_degree, g.left_index),
            g.right_level,
            &basis_of(b, g.right_level, g.right_degree, g.right_index),
            c,
        )?;
        out = out.add(&y)?;
    }
    Ok(out)
}

/// `f ⊗ g` on Day elements, for levelwise maps `f: A -> A'`, `g: B -> B'`
/// that commute with the symmetric group actions.
pub fn day_map<F, G>(a: &SymSeq, b: &SymSeq, x: &DayElement, f: F, g: G) -> Result<DayElement>
where
    F: Fn(usize, &ChainElement) -> Result<ChainElement>,
    G: Fn(usize, &ChainElement) -> Result<ChainElement>,
{
    let mut out: Option<DayElement> = None;
    for (gen, c) in x.terms() {
        let fx = f(
            gen.left_level,
            &basis_of(a, gen.left_level, gen.left_degree, gen.left_index),
        )?;
        let gy = g(
            gen.right_level,
            &basis_of(b, gen.right_level, gen.right_degree, gen.right_index),
        )?;
        let degree = fx.degree + gy.degree;
        let acc = out.get_or_insert_with(|| DayElement::zero(x.level, degree));
        for (i, ci) in fx.terms() {
            for (j, cj) in gy.terms() {
                acc.add_term(
                    DayGenerator {
                        left_level: gen.left_level,
                        left_degree: fx.degree,
                        left_index: i,
                        right_level: gen.right_level,
                        right_degree: gy.degree,
                        right_index: j,
                        shuffle: gen.shuffle.clone(),
                    },
                    mul(mul(c, ci)?, cj)?,
                )?;
            }
        }
    }
    Ok(out.unwrap_or_else(|| DayElement::zero(x.level, x.degree)))
}

/// `μ(θ_*(e_n ⊗ e_m)) = sgn(θ) e_{n+m}`.
pub fn mu(theta: &Permutation, n: usize, m: usize) -> Result<ChainElement> {
    if theta.len() != n + m {
        return Err(Error::Dimension(format!(
            "μ at levels ({n}, {m}) with a permutation of {} points",
            theta.len()
        )));
    }
    Ok(ChainElement {
        degree: (n + m) as i64,
        coeffs: vec![theta.sign()],
    })
}

/// `μ` applied to a Day element of `Z[*] ⊗ Z[*]`, as the coefficient of `e_{n+m}`.
pub fn mu_day(x: &DayElement) -> Result<Int> {
    x.terms().try_fold(0, |acc, (g, c)| {
        let e = mu(&g.shuffle, g.left_level, g.right_level)?;
        add(acc, mul(c, e.coeffs[0])?)
    })
}

/// The normal-form basis of `(A ⊗ B)_p` in one chain degree, ordered by
/// left level, left degree, shuffle, left index, right index.
#[derive(Clone, Debug, Default)]
pub struct DayBasis {
    gens: Vec<DayGenerator>,
    index: HashMap<DayGenerator, usize>,
}

impl DayBasis {
    pub fn new(a: &SymSeq, b: &SymSeq, p: usize, deg: i64) -> Self {
        let mut gens = Vec::new();
        for n in 0..=p {
            let m = p - n;
            if n > a.max_level()
                || m > b.max_level()
                || a.level_count() == 0
                || b.level_count() == 0
            {
                continue;
            }
            let (an, bm) = (a.level(n), b.level(m));
            for i in an.degrees() {
                let j = deg - i;
                let (ri, rj) = (an.rank(i), bm.rank(j));
                if ri == 0 || rj == 0 {
                    continue;
                }
                for sh in perm::shuffles(n, m) {
                    for x in 0..ri {
                        for y in 0..rj {
                            gens.push(DayGenerator {
                                left_level: n,
                                left_degree: i,
                                left_index: x,
                                right_level: m,
                                right_degree: j,
                                right_index: y,
                                shuffle: sh.clone(),
                            });
                        }
                    }
                }
            }
        }
        let index = gens
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, g)| (g, i))
            .collect();
        DayBasis { gens, index }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[DayGenerator] {
        &self.gens
    }

    pub fn index_of(&self, g: &DayGenerator) -> Option<usize> {
        self.index.get(g).copied()
    }
}

/// `A ⊗ B` materialized as a symmetric sequence up to a level bound, with
/// the normal-form basis recorded per bidegree.
#[derive(Clone, Debug)]
pub struct DayProduct {
    left: Arc<SymSeq>,
    right: Arc<SymSeq>,
    seq: Arc<SymSeq>,
    bases: Vec<BTreeMap<i64, DayBasis>>,
}

impl DayProduct {
    pub fn new(left: Arc<SymSeq>, right: Arc<SymSeq>, max_level: usize) -> Result<Self> {
        let bound = max_level.min(left.max_level()).min(right.max_level());
        let mut bases = Vec::new();
        let mut levels = Vec::new();
        for p in 0..=bound {
            let (lo, hi) = degree_window(&left, &right, p);
            let mut per_degree = BTreeMap::new();
            for deg in lo..=hi {
                per_degree.insert(deg, DayBasis::new(&left, &right, p, deg));
            }
            let complex = day_complex(&left, &right, lo, hi, &per_degree)?;
            let mut transpositions = Vec::new();
            for k in 0..p.saturating_sub(1) {
                let s = Permutation::transposition(p, k);
                let mut map = GradedMap::new(0);
                for (&deg, basis) in &per_degree {
                    let mut m = IntMatrix::zero(basis.len(), basis.len());
                    for (col, g) in basis.generators().iter().enumerate() {
                        let y = day_normalize(
                            &left,
                            &right,
                            &g.shuffle.then(&s),
                            g.left_level,
                            &basis_of(&left, g.left_level, g.left_degree, g.left_index),
                            g.right_level,
                            &basis_of(&right, g.right_level, g.right_degree, g.right_index),
                            1,
                        )?;
                        for (h, c) in y.terms() {
                            m.set(basis.index_of(h).expect("normal form in basis"), col, c);
                        }
                    }
                    map.blocks.insert(deg, m);
                }
                transpositions.push(map);
            }
            levels.push(SeqLevel {
                complex,
                transpositions,
            });
            bases.push(per_degree);
        }
        Ok(DayProduct {
            left,
            right,
            seq: Arc::new(SymSeq::new_unchecked(levels)),
            bases,
        })
    }

    pub fn left(&self) -> &Arc<SymSeq> {
        &self.left
    }

    pub fn right(&self) -> &Arc<SymSeq> {
        &self.right
    }

    pub fn seq(&self) -> &Arc<SymSeq> {
        &self.seq
    }

    pub fn max_level(&self) -> usize {
        self.seq.max_level()
    }

    pub fn basis(&self, p: usize, deg: i64) -> Option<&DayBasis> {
        self.bases.get(p)?.get(&deg)
    }

    /// Coordinates of a Day element in the level-`p` basis.
    pub fn to_chain(&self, x: &DayElement) -> Result<ChainElement> {
        let rank = self.basis(x.level, x.degree).map_or(0, DayBasis::len);
        let mut out = ChainElement::zero(x.degree, rank);
        for (g, c) in x.terms() {
            let i = self
                .basis(x.level, x.degree)
                .and_then(|b| b.index_of(g))
                .ok_or_else(|| Error::Domain(format!("{g} is not a basis generator")))?;
            out.coeffs[i] = add(out.coeffs[i], c)?;
        }
        Ok(out)
    }

    pub fn from_chain(&self, p: usize, x: &ChainElement) -> Result<DayElement> {
        let mut out = DayElement::zero(p, x.degree);
        if let Some(b) = self.basis(p, x.degree) {
            for (i, c) in x.terms() {
                out.add_term(b.generators()[i].clone(), c)?;
            }
        }
        Ok(out)
    }

    pub fn basis_generator(&self, p: usize, deg: i64, i: usize) -> DayElement {
        DayElement::generator(self.bases[p][&deg].generators()[i].clone())
    }

    pub fn normalize(
        &self,
        theta: &Permutation,
        n: usize,
        x: &ChainElement,
        m: usize,
        y: &ChainElement,
        coeff: Int,
    ) -> Result<DayElement> {
        day_normalize(&self.left, &self.right, theta, n, x, m, y, coeff)
    }
}

fn degree_window(a: &SymSeq, b: &SymSeq, p: usize) -> (i64, i64) {
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    for n in 0..=p {
        let m = p - n;
        if n > a.max_level() || m > b.max_level() {
            continue;
        }
        let (x, y) = (a.level(n).trimmed(), b.level(m).trimmed());
        if x.is_empty() || y.is_empty() {
            continue;
        }
        lo = lo.min(x.lo() + y.lo());
        hi = hi.max(x.hi() + y.hi());
    }
    if lo > hi {
        (0, -1)
    } else {
        (lo, hi)
    }
}

fn day_complex(
    a: &SymSeq,
    b: &SymSeq,
    lo: i64,
    hi: i64,
    bases: &BTreeMap<i64, DayBasis>,
) -> Result<ChainComplex> {
    let mut labels = Vec::new();
    let mut diffs = Vec::new();
    for deg in lo..=hi {
        let basis = &bases[&deg];
        labels.push(
            basis
                .generators()
                .iter()
                .map(|g| {
                    Label::pair(
                        &Label::atom(g.shuffle.to_string()),
                        &Label::pair(
                            &a.level(g.left_level).labels(g.left_degree)[g.left_index],
                            &b.level(g.right_level).labels(g.right_degree)[g.right_index],
                        ),
                    )
                })
                .collect(),
        );
        let below = if deg == lo {
            None
        } else {
            bases.get(&(deg - 1))
        };
        let mut d = IntMatrix::zero(below.map_or(0, DayBasis::len), basis.len());
        if let Some(below) = below {
            for (col, g) in basis.generators().iter().enumerate() {
                let (n, m) = (g.left_level, g.right_level);
                let x = basis_of(a, n, g.left_degree, g.left_index);
                let y = basis_of(b, m, g.right_degree, g.right_index);
                let dx = a.level(n).apply_d(&x)?;
                let dy = b.level(m).apply_d(&y)?;
                let sign = koszul(g.left_degree);
                for (i, c) in dx.terms() {
                    let h = DayGenerator {
                        left_degree: g.left_degree - 1,
                        left_index: i,
                        ..g.clone()
                    };
                    let r = below.index_of(&h).expect("boundary in basis");
                    d.set(r, col, add(d.get(r, col), c)?);
                }
                for (j, c) in dy.terms() {
                    let h = DayGenerator {
                        right_degree: g.right_degree - 1,
                        right_index: j,
                        ..g.clone()
                    };
                    let r = below.index_of(&h).expect("boundary in basis");
                    d.set(r, col, add(d.get(r, col), mul(sign, c)?)?);
                }
            }
        }
        diffs.push(d);
    }
    ChainComplex::new(lo, labels, diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::twist;

    fn e(n: usize) -> ChainElement {
        ChainElement::basis(n as i64, 1, 0)
    }

    #[test]
    fn act_identity_and_sign() {
        let z = zstar_seq(4);
        for n in 0..=4 {
            assert_eq!(z.act(n, &Permutation::identity(n), &e(n)).unwrap(), e(n));
            for s in Permutation::all(n) {
                assert_eq!(z.act(n, &s, &e(n)).unwrap(), e(n).scale(s.sign()));
            }
        }
    }

    #[test]
    fn act_is_a_left_action() {
        let r = SymSeq::regular_sigma2();
        let x = ChainElement {
            degree: 0,
            coeffs: vec![2, -1],
        };
        for s in Permutation::all(2) {
            for t in Permutation::all(2) {
                // (s∘t)_* = s_* t_*
                let st = t.then(&s);
                let lhs = r.act(2, &st, &x).unwrap();
                let rhs = r.act(2, &s, &r.act(2, &t, &x).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn act_rejects_mismatch() {
        let z = zstar_seq(3);
        assert!(matches!(
            z.act(2, &Permutation::identity(3), &e(2)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            z.act(2, &Permutation::identity(2), &ChainElement::zero(2, 3)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn zstar_levels() {
        let z = zstar_seq(3);
        assert_eq!(z.level(0).rank(0), 1);
        assert_eq!(z.level(3).rank(3), 1);
        assert_eq!(z.level(3).trimmed().degrees(), 3..=3);
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu(&Permutation::identity(5), 2, 3).unwrap(), e(5));
        assert_eq!(mu(&twist(1, 1), 1, 1).unwrap(), e(2).scale(-1));
    }

    #[test]
    fn normalize_over_zstar_uses_block_signs() {
        let z = zstar_seq(4);
        for theta in Permutation::all(4) {
            let f = shuffle_decompose(&theta, 2, 2).unwrap();
            let x = day_normalize(&z, &z, &theta, 2, &e(2), 2, &e(2), 1).unwrap();
            assert_eq!(x.terms().count(), 1);
            let (g, c) = x.terms().next().unwrap();
            assert_eq!(g.shuffle, f.shuffle);
            assert_eq!(c, f.left.sign() * f.right.sign());
        }
    }

    #[test]
    fn twist_of_degree_one_generator() {
        let z = zstar_seq(2);
        let x = day_normalize(&z, &z, &Permutation::identity(2), 1, &e(1), 1, &e(1), 1).unwrap();
        let t = day_twist(&z, &z, &x).unwrap();
        let expected = day_normalize(&z, &z, &twist(1, 1), 1, &e(1), 1, &e(1), -1).unwrap();
        assert_eq!(t, expected);
        let (g, c) = t.terms().next().unwrap();
        assert_eq!((g.shuffle.clone(), c), (twist(1, 1), -1));
    }

    #[test]
    fn twist_degree_zero_has_no_sign() {
        let r = SymSeq::regular_sigma2();
        let u = ChainElement::basis(0, 1, 0);
        let x = day_normalize(&r, &r, &Permutation::identity(2), 1, &u, 1, &u, 1).unwrap();
        let t = day_twist(&r, &r, &x).unwrap();
        assert_eq!(t.terms().next().unwrap().1, 1);
        assert_eq!(day_twist(&r, &r, &t).unwrap(), x);
    }

    #[test]
    fn day_product_of_zstar_has_binomial_ranks() {
        let z = Arc::new(zstar_seq(4));
        let d = DayProduct::new(z.clone(), z, 4).unwrap();
        for p in 0..=4 {
            assert_eq!(d.seq().level(p).rank(p as i64), 1 << p);
        }
    }
}
