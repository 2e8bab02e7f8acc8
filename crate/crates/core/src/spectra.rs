//! Symmetric spectra: symmetric sequences with suspension maps
//! `σ: Z[k] ⊗ A_n -> A_{k+n}`, stored as `σ₁` and iterated.
//!
//! Products over `Z[*]` are handled as presented modules: the Day product of
//! the underlying sequences (a free module in each bidegree) together with a
//! relation lattice per bidegree.

use std::fmt;
use std::sync::Arc;

use crate::cache::OnceMap;
use crate::chain::{koszul, sphere, ChainComplex, ChainElement, GradedMap};
use crate::error::{Error, Result};
use crate::exactlin::{add, Int, IntMatrix, Lattice};
use crate::perm::{multi_shuffles, shuffles, twist, Permutation};
use crate::symseq::{day_twist, zstar_seq, DayElement, DayGenerator, DayProduct, SeqLevel, SymSeq};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationFailure {
    pub property: &'static str,
    pub witness: String,
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.property, self.witness)
    }
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    name: String,
    seq: Arc<SymSeq>,
    /// `sigma[n]` maps `A_n` to `A_{n+1}`, raising degree by one.
    sigma: Vec<GradedMap>,
}

impl Spectrum {
    /// Checks shapes and runs [`Spectrum::validate`].
    pub fn new(name: impl Into<String>, seq: Arc<SymSeq>, sigma: Vec<GradedMap>) -> Result<Self> {
        let s = Spectrum::unvalidated(name, seq, sigma)?;
        s.validate()
            .map_err(|f| Error::Invalid(format!("{}: {f}", s.name)))?;
        Ok(s)
    }

    /// Checks shapes only. The structure identities are left to `validate`.
    pub fn unvalidated(
        name: impl Into<String>,
        seq: Arc<SymSeq>,
        sigma: Vec<GradedMap>,
    ) -> Result<Self> {
        let name = name.into();
        if seq.level_count() == 0 {
            return Err(Error::Invalid(format!("{name} has no levels")));
        }
        if sigma.len() != seq.max_level() {
            return Err(Error::Invalid(format!(
                "{name} has {} suspension maps for {} levels",
                sigma.len(),
                seq.level_count()
            )));
        }
        for (n, s) in sigma.iter().enumerate() {
            if s.shift != 1 {
                return Err(Error::Invalid(format!(
                    "σ₁ at level {n} must raise degree by 1"
                )));
            }
            s.check_shapes(seq.level(n), seq.level(n + 1))?;
        }
        Ok(Spectrum { name, seq, sigma })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn seq(&self) -> &Arc<SymSeq> {
        &self.seq
    }

    pub fn max_level(&self) -> usize {
        self.seq.max_level()
    }

    pub fn level(&self, n: usize) -> &ChainComplex {
        self.seq.level(n)
    }

    pub fn sigma1(&self, n: usize) -> &GradedMap {
        &self.sigma[n]
    }

    pub fn act(&self, n: usize, p: &Permutation, x: &ChainElement) -> Result<ChainElement> {
        self.seq.act(n, p, x)
    }

    /// `σ(e_k ⊗ x)` for `x ∈ A_n`, landing in `A_{n+k}`.
    pub fn sigma(&self, k: usize, n: usize, x: &ChainElement) -> Result<ChainElement> {
        if n + k > self.max_level() {
            return Err(Error::LevelBound {
                requested: n + k,
                bound: self.max_level(),
            });
        }
        if x.coeffs.len() != self.level(n).rank(x.degree) {
            return Err(Error::Domain(format!(
                "element with {} coefficients at level {n}, degree {}",
                x.coeffs.len(),
                x.degree
            )));
        }
        let mut y = x.clone();
        for l in n..n + k {
            y = self.sigma[l].apply(&y, self.level(l + 1))?;
        }
        Ok(y)
    }

    /// Chain-map property of `σ₁`, unit, associativity, and
    /// `(α□β)_* σ(e_k⊗a) = sgn(α) σ(e_k⊗β_*a)` for `k ≤ 3`, `α ∈ Σ_k` and
    /// `β` running over generators of `Σ_n`.
    pub fn validate(&self) -> std::result::Result<(), ValidationFailure> {
        let fail =
            |property: &'static str, witness: String| ValidationFailure { property, witness };
        let arith = |e: Error| fail("arithmetic", e.to_string());
        let n_max = self.max_level();
        for n in 0..n_max {
            if let Some(d) = self.sigma[n]
                .chain_map_defect(self.level(n), self.level(n + 1), -1)
                .map_err(arith)?
            {
                return Err(fail(
                    "σ₁ chain map",
                    format!("d σ₁ ≠ -σ₁ d out of level {n}, degree {d}"),
                ));
            }
        }
        for n in 0..=n_max {
            let c = self.level(n);
            for deg in c.degrees() {
                for idx in 0..c.rank(deg) {
                    let x = c.basis_element(deg, idx);
                    if self.sigma(0, n, &x).map_err(arith)? != x {
                        return Err(fail("unit", format!("level {n}, basis {deg}#{idx}")));
                    }
                    for total in 2..=3usize.min(n_max - n) {
                        let whole = self.sigma(total, n, &x).map_err(arith)?;
                        for j in 1..total {
                            let step = self.sigma(j, n, &x).map_err(arith)?;
                            let split = self.sigma(total - j, n + j, &step).map_err(arith)?;
                            if split != whole {
                                return Err(fail(
                                    "associativity",
                                    format!(
                                        "σ(e_{}⊗σ(e_{j}⊗a)) ≠ σ(e_{total}⊗a), level {n}, basis {deg}#{idx}",
                                        total - j
                                    ),
                                ));
                            }
                        }
                    }
                    for k in 1..=3usize.min(n_max - n) {
                        let sx = self.sigma(k, n, &x).map_err(arith)?;
                        let mut betas = vec![Permutation::identity(n)];
                        betas.extend(
                            (0..n.saturating_sub(1)).map(|t| Permutation::transposition(n, t)),
                        );
                        for beta in &betas {
                            let bx = self.act(n, beta, &x).map_err(arith)?;
                            let rhs_base = self.sigma(k, n, &bx).map_err(arith)?;
                            for alpha in Permutation::all(k) {
                                let lhs =
                                    self.act(n + k, &alpha.boxed(beta), &sx).map_err(arith)?;
                                let rhs = rhs_base.scale(alpha.sign());
                                if lhs != rhs {
                                    return Err(fail(
                                        "equivariance",
                                        format!(
                                            "(α□β)_*σ(e_{k}⊗a) = {lhs} but sgn(α)σ(e_{k}⊗β_*a) = {rhs}; \
                                             level {n}, α = {alpha}, β = {beta}, basis {deg}#{idx}"
                                        ),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Levelwise direct sum, with `self`'s basis first in every degree.
    pub fn direct_sum(&self, other: &Spectrum) -> Result<Spectrum> {
        let n_max = self.max_level().min(other.max_level());
        let mut levels = Vec::new();
        for n in 0..=n_max {
            let (a, b) = (self.level(n), other.level(n));
            let c = a.direct_sum(b)?;
            let transpositions = (0..n.saturating_sub(1))
                .map(|t| {
                    block_diag(
                        self.seq.transposition(n, t),
                        other.seq.transposition(n, t),
                        (a, b),
                        (a, b),
                        &c,
                    )
                })
                .collect();
            levels.push(SeqLevel {
                complex: c,
                transpositions,
            });
        }
        let seq = Arc::new(SymSeq::new(levels)?);
        let sigma = (0..n_max)
            .map(|n| {
                block_diag(
                    &self.sigma[n],
                    &other.sigma[n],
                    (self.level(n), other.level(n)),
                    (self.level(n + 1), other.level(n + 1)),
                    seq.level(n),
                )
            })
            .collect();
        Spectrum::new(format!("{} ⊕ {}", self.name, other.name), seq, sigma)
    }

    /// The summand inclusions into `self ⊕ other`.
    pub fn sum_inclusions(&self, other: &Spectrum) -> (SpectrumMap, SpectrumMap) {
        let n_max = self.max_level().min(other.max_level());
        let mut left = Vec::new();
        let mut right = Vec::new();
        for n in 0..=n_max {
            let (a, b) = (self.level(n), other.level(n));
            let mut f = GradedMap::new(0);
            let mut g = GradedMap::new(0);
            for deg in a.degrees().chain(b.degrees()) {
                let (ra, rb) = (a.rank(deg), b.rank(deg));
                let mut m = IntMatrix::zero(ra + rb, ra);
                for i in 0..ra {
                    m.set(i, i, 1);
                }
                f.blocks.insert(deg, m);
                let mut m = IntMatrix::zero(ra + rb, rb);
                for i in 0..rb {
                    m.set(ra + i, i, 1);
                }
                g.blocks.insert(deg, m);
            }
            left.push(f);
            right.push(g);
        }
        (SpectrumMap { levels: left }, SpectrumMap { levels: right })
    }
}

// [[f, 0], [0, g]] on the direct sums of sources and of targets.
fn block_diag(
    f: &GradedMap,
    g: &GradedMap,
    source: (&ChainComplex, &ChainComplex),
    target: (&ChainComplex, &ChainComplex),
    sum_source: &ChainComplex,
) -> GradedMap {
    let mut out = GradedMap::new(f.shift);
    for deg in sum_source.degrees() {
        let a = f.block(deg, source.0, target.0);
        let b = g.block(deg, source.1, target.1);
        let mut m = IntMatrix::zero(a.rows() + b.rows(), a.cols() + b.cols());
        for r in 0..a.rows() {
            for c in 0..a.cols() {
                m.set(r, c, a.get(r, c));
            }
        }
        for r in 0..b.rows() {
            for c in 0..b.cols() {
                m.set(a.rows() + r, a.cols() + c, b.get(r, c));
            }
        }
        out.blocks.insert(deg, m);
    }
    out
}

/// A levelwise map of spectra, degree-preserving.
#[derive(Clone, Debug)]
pub struct SpectrumMap {
    pub levels: Vec<GradedMap>,
}

impl SpectrumMap {
    pub fn identity(a: &Spectrum) -> Self {
        SpectrumMap {
            levels: (0..=a.max_level())
                .map(|n| GradedMap::identity(a.level(n)))
                .collect(),
        }
    }

    pub fn scalar(a: &Spectrum, k: Int) -> Self {
        SpectrumMap {
            levels: (0..=a.max_level())
                .map(|n| GradedMap::scalar(a.level(n), k))
                .collect(),
        }
    }

    pub fn apply(&self, target: &Spectrum, n: usize, x: &ChainElement) -> Result<ChainElement> {
        let f = self.levels.get(n).ok_or(Error::LevelBound {
            requested: n,
            bound: self.levels.len().saturating_sub(1),
        })?;
        f.apply(x, target.level(n))
    }

    /// First failure of: chain map, `Σ_n`-equivariance, compatibility with `σ₁`.
    pub fn defect(&self, source: &Spectrum, target: &Spectrum) -> Result<Option<String>> {
        let n_max = source
            .max_level()
            .min(target.max_level())
            .min(self.levels.len() - 1);
        for n in 0..=n_max {
            let (a, b) = (source.level(n), target.level(n));
            if let Some(d) = self.levels[n].chain_map_defect(a, b, 1)? {
                return Ok(Some(format!("not a chain map at level {n}, degree {d}")));
            }
            for deg in a.degrees() {
                for idx in 0..a.rank(deg) {
                    let x = a.basis_element(deg, idx);
                    let fx = self.apply(target, n, &x)?;
                    for t in 0..n.saturating_sub(1) {
                        let s = Permutation::transposition(n, t);
                        let lhs = self.apply(target, n, &source.act(n, &s, &x)?)?;
                        if lhs != target.act(n, &s, &fx)? {
                            return Ok(Some(format!("not equivariant for s_{t} at level {n}")));
                        }
                    }
                    if n < n_max {
                        let lhs = self.apply(target, n + 1, &source.sigma(1, n, &x)?)?;
                        if lhs != target.sigma(1, n, &fx)? {
                            return Ok(Some(format!("does not commute with σ₁ at level {n}")));
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}

/// `Z[*]` as a module over itself: `σ₁(e_1 ⊗ e_n) = e_{n+1}`.
pub fn zstar(max_level: usize) -> Spectrum {
    let seq = Arc::new(zstar_seq(max_level));
    let sigma = (0..max_level)
        .map(|n| {
            let mut m = GradedMap::new(1);
            m.blocks.insert(n as i64, IntMatrix::identity(1));
            m
        })
        .collect();
    Spectrum::new("Z[*]", seq, sigma).expect("Z[*] is a spectrum")
}

/// `σ` on `A ⊗ B` through the left factor:
/// `σ(e_1 ⊗ sh_*(a⊗b)) = (1□sh)_*(σ(e_1⊗a) ⊗ b)`.
fn day_sigma(left: &Spectrum, product: &DayProduct) -> Result<Vec<GradedMap>> {
    let seq = product.seq();
    let right = product.right();
    let mut out = Vec::new();
    for p in 0..product.max_level() {
        let mut map = GradedMap::new(1);
        for deg in seq.level(p).degrees() {
            let Some(basis) = product.basis(p, deg) else {
                continue;
            };
            let mut m = IntMatrix::zero(seq.level(p + 1).rank(deg + 1), basis.len());
            for (col, g) in basis.generators().iter().enumerate() {
                let a = left
                    .level(g.left_level)
                    .basis_element(g.left_degree, g.left_index);
                let sa = left.sigma(1, g.left_level, &a)?;
                let b = right
                    .level(g.right_level)
                    .basis_element(g.right_degree, g.right_index);
                let theta = Permutation::identity(1).boxed(&g.shuffle);
                let y = product.normalize(&theta, g.left_level + 1, &sa, g.right_level, &b, 1)?;
                for (i, c) in product.to_chain(&y)?.terms() {
                    m.set(i, col, c);
                }
            }
            map.blocks.insert(deg, m);
        }
        out.push(map);
    }
    Ok(out)
}

/// The spectrum `A ⊗ B` for a spectrum `A` and a symmetric sequence `B`,
/// with `σ` acting on the left factor.
pub fn day_spectrum(
    name: impl Into<String>,
    left: &Spectrum,
    right: Arc<SymSeq>,
    max_level: usize,
) -> Result<(Spectrum, DayProduct)> {
    let product = DayProduct::new(left.seq().clone(), right, max_level)?;
    let sigma = day_sigma(left, &product)?;
    let spectrum = Spectrum::unvalidated(name, product.seq().clone(), sigma)?;
    Ok((spectrum, product))
}

/// The module freely generated by `C` at level `m`: `Z[*] ⊗ G_m C` where
/// `G_m C` is `C` at level `m` with trivial action.
pub fn free_spectrum(m: usize, c: &ChainComplex, max_level: usize) -> Result<Spectrum> {
    if !c.is_connective() {
        return Err(Error::Domain(
            "generating complex has negative degrees".into(),
        ));
    }
    let gen = Arc::new(SymSeq::concentrated(m, c, max_level)?);
    let (s, _) = day_spectrum(format!("F_{m}"), &zstar(max_level), gen, max_level)?;
    s.validate().map_err(|f| Error::Invalid(f.to_string()))?;
    Ok(s)
}

/// A spectrum together with the relations it is presented by: none for a
/// plain spectrum, the mixing relations plus the factors' own relations for
/// a product over `Z[*]`.
pub struct Presented {
    name: String,
    base: Arc<Spectrum>,
    kind: Kind,
    relations: OnceMap<(usize, i64), Result<Arc<Lattice>>>,
    coinvariants: OnceMap<(usize, i64), Result<Arc<Lattice>>>,
    materialized: OnceMap<usize, Result<Arc<crate::dfunctor::DComplex>>>,
}

enum Kind {
    Free,
    Bar {
        left: Arc<Presented>,
        right: Arc<Presented>,
        day: Arc<DayProduct>,
    },
}

impl fmt::Debug for Presented {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presented({})", self.name)
    }
}

impl Presented {
    pub fn free(base: Arc<Spectrum>) -> Arc<Self> {
        Arc::new(Presented {
            name: base.name().to_string(),
            base,
            kind: Kind::Free,
            relations: OnceMap::new(),
            coinvariants: OnceMap::new(),
            materialized: OnceMap::new(),
        })
    }

    /// `left ⊗̄ right` up to `max_level`.
    pub fn bar(
        left: &Arc<Presented>,
        right: &Arc<Presented>,
        max_level: usize,
    ) -> Result<Arc<Self>> {
        let name = format!("({} ⊗̄ {})", left.name, right.name);
        let (base, day) = day_spectrum(
            name.clone(),
            &left.base,
            right.base.seq().clone(),
            max_level,
        )?;
        Ok(Arc::new(Presented {
            name,
            base: Arc::new(base),
            kind: Kind::Bar {
                left: left.clone(),
                right: right.clone(),
                day: Arc::new(day),
            },
            relations: OnceMap::new(),
            coinvariants: OnceMap::new(),
            materialized: OnceMap::new(),
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &Arc<Spectrum> {
        &self.base
    }

    pub fn max_level(&self) -> usize {
        self.base.max_level()
    }

    pub fn is_product(&self) -> bool {
        matches!(self.kind, Kind::Bar { .. })
    }

    pub fn factors(&self) -> Option<(&Arc<Presented>, &Arc<Presented>)> {
        match &self.kind {
            Kind::Free => None,
            Kind::Bar { left, right, .. } => Some((left, right)),
        }
    }

    pub fn day(&self) -> Option<&Arc<DayProduct>> {
        match &self.kind {
            Kind::Free => None,
            Kind::Bar { day, .. } => Some(day),
        }
    }

    fn product(&self) -> Result<(&Arc<Presented>, &Arc<Presented>, &Arc<DayProduct>)> {
        match &self.kind {
            Kind::Free => Err(Error::Domain(format!("{} is not a product", self.name))),
            Kind::Bar { left, right, day } => Ok((left, right, day)),
        }
    }

    fn rank(&self, p: usize, deg: i64) -> usize {
        if p > self.max_level() {
            0
        } else {
            self.base.level(p).rank(deg)
        }
    }

    pub(crate) fn materialized_cache(
        &self,
    ) -> &OnceMap<usize, Result<Arc<crate::dfunctor::DComplex>>> {
        &self.materialized
    }

    /// Generating columns of the relation submodule of `(A ⊗ B)_p` in chain
    /// degree `deg`: mixing relations over `(n, m, q)` 3-block shuffles with
    /// `m ≥ 1`, and the factors' relations pushed along shuffles.
    pub fn relation_matrix(&self, p: usize, deg: i64) -> Result<IntMatrix> {
        let cols = self.relation_columns(p, deg, false)?;
        IntMatrix::from_columns(self.rank(p, deg), &cols)
    }

    /// As [`Presented::relation_matrix`] but with the mixing permutation
    /// running over all of `Σ_p`.
    pub fn relation_matrix_full(&self, p: usize, deg: i64) -> Result<IntMatrix> {
        let cols = self.relation_columns(p, deg, true)?;
        IntMatrix::from_columns(self.rank(p, deg), &cols)
    }

    fn relation_columns(&self, p: usize, deg: i64, full: bool) -> Result<Vec<Vec<Int>>> {
        let Kind::Bar { left, right, day } = &self.kind else {
            return Ok(Vec::new());
        };
        if p > self.max_level() {
            return Err(Error::LevelBound {
                requested: p,
                bound: self.max_level(),
            });
        }
        let (a, b) = (&left.base, &right.base);
        let mut cols = Vec::new();
        let mut push = |x: &DayElement| -> Result<()> {
            if !x.is_zero() {
                cols.push(day.to_chain(x)?.coeffs);
            }
            Ok(())
        };
        for q in 0..=p {
            for m in 1..=p - q {
                let n = p - q - m;
                let phis = if full {
                    Permutation::all(p)
                } else {
                    multi_shuffles(&[n, m, q])
                };
                let (an, bq) = (a.level(n), b.level(q));
                for i in an.degrees() {
                    let k = deg - m as i64 - i;
                    for x in 0..an.rank(i) {
                        for y in 0..bq.rank(k) {
                            let ax = an.basis_element(i, x);
                            let by = bq.basis_element(k, y);
                            for phi in &phis {
                                let (lhs, rhs) =
                                    mixing_relation(a, b, day, phi, n, m, q, &ax, &by)?;
                                push(&lhs.sub(&rhs)?)?;
                            }
                        }
                    }
                }
            }
        }
        for n in 0..=p {
            let m = p - n;
            let (an, bm) = (a.level(n), b.level(m));
            for i in an.degrees() {
                let j = deg - i;
                if an.rank(i) == 0 || bm.rank(j) == 0 {
                    continue;
                }
                let left_rel = left.relation_lattice(n, i)?;
                let right_rel = right.relation_lattice(m, j)?;
                for sh in shuffles(n, m) {
                    let gen = |x: usize, y: usize| DayGenerator {
                        left_level: n,
                        left_degree: i,
                        left_index: x,
                        right_level: m,
                        right_degree: j,
                        right_index: y,
                        shuffle: sh.clone(),
                    };
                    for r in left_rel.basis_matrix().columns() {
                        for y in 0..bm.rank(j) {
                            let mut e = DayElement::zero(p, deg);
                            for (x, &c) in r.iter().enumerate() {
                                e.add_term(gen(x, y), c)?;
                            }
                            push(&e)?;
                        }
                    }
                    for r in right_rel.basis_matrix().columns() {
                        for x in 0..an.rank(i) {
                            let mut e = DayElement::zero(p, deg);
                            for (y, &c) in r.iter().enumerate() {
                                e.add_term(gen(x, y), c)?;
                            }
                            push(&e)?;
                        }
                    }
                }
            }
        }
        Ok(cols)
    }

    /// The relation submodule at `(p, deg)`, cached.
    pub fn relation_lattice(&self, p: usize, deg: i64) -> Result<Arc<Lattice>> {
        self.relations.get_or_init((p, deg), || {
            let mut lat = Lattice::new(self.rank(p, deg));
            if self.is_product() {
                for c in self.relation_columns(p, deg, false)? {
                    lat.insert(c)?;
                }
            }
            Ok(Arc::new(lat))
        })
    }

    /// Relations plus the sign relations `s_t v + v`, at `(L, deg)`; the
    /// quotient is the sign-coinvariant module that feeds `D`.
    pub fn coinvariant_lattice(&self, level: usize, deg: i64) -> Result<Arc<Lattice>> {
        self.coinvariants.get_or_init((level, deg), || {
            let rel = self.relation_lattice(level, deg)?;
            let mut lat = (*rel).clone();
            let c = self.base.level(level);
            for t in 0..level.saturating_sub(1) {
                let s = self.base.seq().transposition(level, t).block(deg, c, c);
                for v in 0..c.rank(deg) {
                    let mut col = s.column(v);
                    col[v] = add(col[v], 1)?;
                    lat.insert(col)?;
                }
            }
            Ok(Arc::new(lat))
        })
    }

    /// Equality in `A ⊗̄ B`: the difference lies in the relation lattice.
    pub fn bar_equal(&self, x: &DayElement, y: &DayElement) -> Result<bool> {
        let (_, _, day) = self.product()?;
        if x.level != y.level || x.degree != y.degree {
            return Err(Error::Domain(format!(
                "comparing bidegrees ({}, {}) and ({}, {})",
                x.level, x.degree, y.level, y.degree
            )));
        }
        let diff = day.to_chain(&x.sub(y)?)?;
        self.relation_lattice(x.level, x.degree)?
            .contains(&diff.coeffs)
    }

    /// The twist `A ⊗̄ B -> B ⊗̄ A` on a representative.
    pub fn bar_twist(&self, x: &DayElement) -> Result<DayElement> {
        let (left, right, _) = self.product()?;
        day_twist(left.base.seq(), right.base.seq(), x)
    }
}

/// Both sides of the mixing relation
/// `φ_*(a ⊗ σ(e_m⊗b)) = (-1)^{im} (φ∘(τ^{m,n}□1_q))_*(σ(e_m⊗a) ⊗ b)`
/// for `a ∈ A_{n,i}`, `b ∈ B_q`, `φ ∈ Σ_{n+m+q}`.
#[allow(clippy::too_many_arguments)]
pub fn mixing_relation(
    a: &Spectrum,
    b: &Spectrum,
    day: &DayProduct,
    phi: &Permutation,
    n: usize,
    m: usize,
    q: usize,
    x: &ChainElement,
    y: &ChainElement,
) -> Result<(DayElement, DayElement)> {
    if phi.len() != n + m + q {
        return Err(Error::Domain(format!(
            "mixing permutation on {} points for levels ({n}, {m}, {q})",
            phi.len()
        )));
    }
    let sy = b.sigma(m, q, y)?;
    let lhs = day.normalize(phi, n, x, m + q, &sy, 1)?;
    let sx = a.sigma(m, n, x)?;
    let theta = twist(m, n).boxed(&Permutation::identity(q)).then(phi);
    let rhs = day.normalize(&theta, m + n, &sx, q, y, koszul(x.degree * m as i64))?;
    Ok((lhs, rhs))
}

/// `Z[*]` at levels `≤ max_level` viewed through [`free_spectrum`]; used to
/// cross-check the induced-module construction.
pub fn free_unit(max_level: usize) -> Result<Spectrum> {
    free_spectrum(0, &sphere(0), max_level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::binomial;

    #[test]
    fn zstar_validates_and_suspends() {
        let z = zstar(4);
        let e1 = ChainElement::basis(1, 1, 0);
        assert_eq!(z.sigma(0, 1, &e1).unwrap(), e1);
        assert_eq!(z.sigma(3, 1, &e1).unwrap(), ChainElement::basis(4, 1, 0));
        assert!(matches!(
            z.sigma(4, 1, &e1),
            Err(Error::LevelBound {
                requested: 5,
                bound: 4
            })
        ));
    }

    #[test]
    fn free_spectrum_ranks() {
        let c = sphere(1);
        let f = free_spectrum(2, &c, 5).unwrap();
        assert_eq!(f.level(0).trimmed().degrees().count(), 0);
        assert_eq!(f.level(2).rank(1), 1);
        for n in 2..=5 {
            assert_eq!(f.level(n).rank(n as i64 - 1), binomial(n, 2));
        }
        let u = free_unit(4).unwrap();
        for n in 0..=4 {
            assert_eq!(u.level(n).rank(n as i64), 1);
        }
    }

    #[test]
    fn sign_corrupted_sigma_is_caught() {
        let f = free_spectrum(1, &sphere(0), 4).unwrap();
        let mut sigma: Vec<GradedMap> = (0..4).map(|n| f.sigma1(n).clone()).collect();
        let block = sigma[2].blocks.get_mut(&1).unwrap();
        for r in 0..block.rows() {
            block.set(r, 0, -block.get(r, 0));
        }
        let bad = Spectrum::unvalidated("bad", f.seq().clone(), sigma).unwrap();
        let err = bad.validate().unwrap_err();
        assert_eq!(err.property, "equivariance");
    }

    #[test]
    fn bar_quotient_of_zstar_has_rank_one() {
        let z = Presented::free(Arc::new(zstar(4)));
        let zz = Presented::bar(&z, &z, 4).unwrap();
        for p in 0..=4 {
            let lat = zz.relation_lattice(p, p as i64).unwrap();
            assert_eq!(lat.dim() - lat.rank(), 1, "p = {p}");
        }
        assert_eq!(zz.relation_matrix(0, 0).unwrap().cols(), 0);
    }

    #[test]
    fn mixing_instance_sign() {
        let z = Arc::new(zstar(3));
        let zp = Presented::free(z.clone());
        let zz = Presented::bar(&zp, &zp, 3).unwrap();
        let day = zz.day().unwrap();
        let e1 = ChainElement::basis(1, 1, 0);
        let e0 = ChainElement::basis(0, 1, 0);
        let (lhs, rhs) =
            mixing_relation(&z, &z, day, &Permutation::identity(2), 1, 1, 0, &e1, &e0).unwrap();
        // (-1)^{im} with i = m = 1, and τ^{1,1} acts by its sign on the left factor
        let (g, c) = rhs.terms().next().unwrap();
        assert_eq!(g.shuffle, Permutation::identity(2));
        assert_eq!(c, 1);
        assert!(zz.bar_equal(&lhs, &rhs).unwrap());
        assert!(zz.bar_equal(&lhs, &lhs).unwrap());
    }

    #[test]
    fn shuffle_relations_generate_all() {
        let z = Presented::free(Arc::new(zstar(3)));
        let zz = Presented::bar(&z, &z, 3).unwrap();
        for p in 0..=3 {
            let deg = p as i64;
            let a = Lattice::from_columns(&zz.relation_matrix(p, deg).unwrap()).unwrap();
            let b = Lattice::from_columns(&zz.relation_matrix_full(p, deg).unwrap()).unwrap();
            for c in b.basis_matrix().columns() {
                assert!(a.contains(&c).unwrap());
            }
            assert_eq!(a.rank(), b.rank());
        }
    }
}
