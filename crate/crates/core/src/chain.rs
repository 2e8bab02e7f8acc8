//! Bounded, degreewise finitely generated free chain complexes over the
//! integers, with the Koszul sign rule on tensor products.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{add, in_lattice, kernel_basis, Int, IntMatrix};

/// `(-1)^e` for a possibly negative exponent.
pub fn koszul(e: i64) -> Int {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Atom(String),
    Pair(Box<Label>, Box<Label>),
    Combo(Vec<(Int, Label)>),
}

impl Label {
    pub fn atom(s: impl Into<String>) -> Self {
        Label::Atom(s.into())
    }

    pub fn pair(a: &Label, b: &Label) -> Self {
        Label::Pair(Box::new(a.clone()), Box::new(b.clone()))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Atom(s) => write!(f, "{s}"),
            Label::Pair(a, b) => write!(f, "({a}⊗{b})"),
            Label::Combo(terms) => {
                write!(f, "[")?;
                for (i, (c, l)) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{c}·{l}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// An element of a single degree, as a coefficient vector over that degree's basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainElement {
    pub degree: i64,
    pub coeffs: Vec<Int>,
}

impl ChainElement {
    pub fn zero(degree: i64, rank: usize) -> Self {
        ChainElement {
            degree,
            coeffs: vec![0; rank],
        }
    }

    pub fn basis(degree: i64, rank: usize, i: usize) -> Self {
        let mut e = Self::zero(degree, rank);
        e.coeffs[i] = 1;
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, c: Int) -> Self {
        ChainElement {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &ChainElement) -> Result<ChainElement> {
        if self.degree != other.degree || self.coeffs.len() != other.coeffs.len() {
            return Err(Error::Dimension(format!(
                "adding elements of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| add(a, b))
            .collect::<Result<_>>()?;
        Ok(ChainElement {
            degree: self.degree,
            coeffs,
        })
    }

    pub fn sub(&self, other: &ChainElement) -> Result<ChainElement> {
        self.add(&other.scale(-1))
    }

    /// Nonzero `(index, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (usize, Int)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c))
    }
}

impl fmt::Display for ChainElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg {}: {:?}", self.degree, self.coeffs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    lo: i64,
    labels: Vec<Vec<Label>>,
    // diffs[k]: degree lo+k -> lo+k-1, shape rank(lo+k-1) x rank(lo+k)
    diffs: Vec<IntMatrix>,
}

impl ChainComplex {
    /// Builds a complex supported in `[lo, lo + labels.len())`. `diffs[k]` is
    /// the differential out of degree `lo + k`; `d∘d = 0` is checked.
    pub fn new(lo: i64, labels: Vec<Vec<Label>>, diffs: Vec<IntMatrix>) -> Result<Self> {
        if diffs.len() != labels.len() {
            return Err(Error::Dimension(format!(
                "{} degrees but {} differentials",
                labels.len(),
                diffs.len()
            )));
        }
        let c = ChainComplex { lo, labels, diffs };
        for n in c.degrees() {
            let d = c.d(n);
            if d.rows() != c.rank(n - 1) || d.cols() != c.rank(n) {
                return Err(Error::Dimension(format!(
                    "differential out of degree {n} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    c.rank(n - 1),
                    c.rank(n)
                )));
            }
        }
        for n in c.degrees() {
            if n > c.lo && !c.d(n - 1).mul(c.d(n))?.is_zero() {
                return Err(Error::Invalid(format!("d∘d ≠ 0 out of degree {n}")));
            }
        }
        Ok(c)
    }

    pub fn zero() -> Self {
        ChainComplex {
            lo: 0,
            labels: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// Complex with the given ranks and zero differential, labels `prefix_deg_i`.
    pub fn free(lo: i64, ranks: &[usize], prefix: &str) -> Self {
        let labels: Vec<Vec<Label>> = ranks
            .iter()
            .enumerate()
            .map(|(k, &r)| {
                (0..r)
                    .map(|i| Label::atom(format!("{prefix}{}_{i}", lo + k as i64)))
                    .collect()
            })
            .collect();
        let mut diffs = Vec::new();
        for k in 0..ranks.len() {
            let below = if k == 0 { 0 } else { ranks[k - 1] };
            diffs.push(IntMatrix::zero(below, ranks[k]));
        }
        ChainComplex { lo, labels, diffs }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Top of the support window; `lo - 1` when empty.
    pub fn hi(&self) -> i64 {
        self.lo + self.labels.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.iter().all(Vec::is_empty)
    }

    pub fn rank(&self, n: i64) -> usize {
        self.slot(n).map_or(0, |k| self.labels[k].len())
    }

    pub fn labels(&self, n: i64) -> &[Label] {
        self.slot(n).map_or(&[], |k| &self.labels[k])
    }

    fn slot(&self, n: i64) -> Option<usize> {
        (n >= self.lo && n <= self.hi()).then(|| (n - self.lo) as usize)
    }

    /// The differential out of degree `n`. Panics outside the window; use
    /// [`ChainComplex::d_owned`] when `n` may be outside.
    pub fn d(&self, n: i64) -> &IntMatrix {
        &self.diffs[self.slot(n).expect("degree inside the window")]
    }

    pub fn d_owned(&self, n: i64) -> IntMatrix {
        match self.slot(n) {
            Some(k) => self.diffs[k].clone(),
            None => IntMatrix::zero(self.rank(n - 1), self.rank(n)),
        }
    }

    /// Whether every nonzero degree is `≥ 0`.
    pub fn is_connective(&self) -> bool {
        self.degrees().all(|n| n >= 0 || self.rank(n) == 0)
    }

    pub fn apply_d(&self, x: &ChainElement) -> Result<ChainElement> {
        let below = self.rank(x.degree - 1);
        match self.slot(x.degree) {
            Some(k) if below > 0 => Ok(ChainElement {
                degree: x.degree - 1,
                coeffs: self.diffs[k].mul_vec(&x.coeffs)?,
            }),
            _ => Ok(ChainElement::zero(x.degree - 1, below)),
        }
    }

    pub fn basis_element(&self, n: i64, i: usize) -> ChainElement {
        ChainElement::basis(n, self.rank(n), i)
    }

    pub fn zero_element(&self, n: i64) -> ChainElement {
        ChainElement::zero(n, self.rank(n))
    }

    /// Same complex with empty degrees trimmed from both ends of the window.
    pub fn trimmed(&self) -> ChainComplex {
        let nonzero: Vec<i64> = self.degrees().filter(|&n| self.rank(n) > 0).collect();
        let (Some(&lo), Some(&hi)) = (nonzero.first(), nonzero.last()) else {
            return ChainComplex::zero();
        };
        self.restricted(lo, hi)
    }

    /// Restriction to the window `[lo, hi]` (degrees outside become zero).
    pub fn restricted(&self, lo: i64, hi: i64) -> ChainComplex {
        let labels: Vec<Vec<Label>> = (lo..=hi).map(|n| self.labels(n).to_vec()).collect();
        let diffs = (lo..=hi)
            .map(|n| {
                if n == lo {
                    IntMatrix::zero(0, self.rank(n))
                } else {
                    self.d_owned(n)
                }
            })
            .collect();
        ChainComplex { lo, labels, diffs }
    }

    pub fn direct_sum(&self, other: &ChainComplex) -> Result<ChainComplex> {
        if self.is_empty() {
            return Ok(other.clone());
        }
        if other.is_empty() {
            return Ok(self.clone());
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let mut labels = Vec::new();
        let mut diffs = Vec::new();
        for n in lo..=hi {
            let mut l = self.labels(n).to_vec();
            l.extend_from_slice(other.labels(n));
            labels.push(l);
            let (a, b) = (self.d_owned(n), other.d_owned(n));
            let rows = if n == lo { 0 } else { a.rows() + b.rows() };
            let mut d = IntMatrix::zero(rows, a.cols() + b.cols());
            if n > lo {
                for r in 0..a.rows() {
                    for c in 0..a.cols() {
                        d.set(r, c, a.get(r, c));
                    }
                }
                for r in 0..b.rows() {
                    for c in 0..b.cols() {
                        d.set(a.rows() + r, a.cols() + c, b.get(r, c));
                    }
                }
            }
            diffs.push(d);
        }
        ChainComplex::new(lo, labels, diffs)
    }

    pub fn load_json(path: &Path) -> Result<ChainComplex> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
        ComplexFile::from_json(&text)?.to_complex()
    }
}

/// `Z[n]`: one generator `e_n` in degree `n`, zero differential.
pub fn sphere(n: i64) -> ChainComplex {
    ChainComplex {
        lo: n,
        labels: vec![vec![Label::atom(format!("e{n}"))]],
        diffs: vec![IntMatrix::zero(0, 1)],
    }
}

/// Index bookkeeping for the basis of `X ⊗ Y`: in degree `t` the basis is all
/// pairs `(a, b)` with `|a| + |b| = t`, ordered by `|a|`, then `a`, then `b`.
#[derive(Clone, Debug)]
pub struct TensorLayout {
    left_ranks: BTreeMap<i64, usize>,
    right_ranks: BTreeMap<i64, usize>,
}

impl TensorLayout {
    pub fn new(x: &ChainComplex, y: &ChainComplex) -> Self {
        let ranks = |c: &ChainComplex| {
            c.degrees()
                .filter(|&n| c.rank(n) > 0)
                .map(|n| (n, c.rank(n)))
                .collect()
        };
        TensorLayout {
            left_ranks: ranks(x),
            right_ranks: ranks(y),
        }
    }

    /// `(left degree, offset of its block)` for each block of degree `t`.
    fn blocks(&self, t: i64) -> Vec<(i64, usize, usize, usize)> {
        let mut out = Vec::new();
        let mut offset = 0;
        for (&i, &ri) in &self.left_ranks {
            if let Some(&rj) = self.right_ranks.get(&(t - i)) {
                out.push((i, offset, ri, rj));
                offset += ri * rj;
            }
        }
        out
    }

    pub fn rank(&self, t: i64) -> usize {
        self.blocks(t).iter().map(|&(_, _, ri, rj)| ri * rj).sum()
    }

    pub fn index(&self, i: i64, a: usize, j: i64, b: usize) -> usize {
        let t = i + j;
        let (_, off, _, rj) = self
            .blocks(t)
            .into_iter()
            .find(|&(d, ..)| d == i)
            .expect("degree pair present in the tensor product");
        off + a * rj + b
    }

    /// Inverse of [`TensorLayout::index`].
    pub fn split(&self, t: i64, idx: usize) -> (i64, usize, i64, usize) {
        for (i, off, ri, rj) in self.blocks(t) {
            if idx < off + ri * rj {
                let k = idx - off;
                return (i, k / rj, t - i, k % rj);
            }
        }
        panic!("index {idx} out of range in degree {t}");
    }

    pub fn window(&self) -> Option<(i64, i64)> {
        let (l0, l1) = (
            self.left_ranks.keys().next()?,
            self.left_ranks.keys().last()?,
        );
        let (r0, r1) = (
            self.right_ranks.keys().next()?,
            self.right_ranks.keys().last()?,
        );
        Some((l0 + r0, l1 + r1))
    }
}

/// `X ⊗ Y` with `d(a⊗b) = da⊗b + (-1)^{|a|} a⊗db`.
pub fn tensor(x: &ChainComplex, y: &ChainComplex) -> ChainComplex {
    let layout = TensorLayout::new(x, y);
    let Some((lo, hi)) = layout.window() else {
        return ChainComplex::zero();
    };
    let mut labels = Vec::new();
    let mut diffs = Vec::new();
    for t in lo..=hi {
        let rank = layout.rank(t);
        labels.push(
            (0..rank)
                .map(|idx| {
                    let (i, a, j, b) = layout.split(t, idx);
                    Label::pair(&x.labels(i)[a], &y.labels(j)[b])
                })
                .collect(),
        );
        let below = if t == lo { 0 } else { layout.rank(t - 1) };
        let mut d = IntMatrix::zero(below, rank);
        if t > lo {
            for idx in 0..rank {
                let (i, a, j, b) = layout.split(t, idx);
                if x.rank(i - 1) > 0 {
                    let dx = x.d(i);
                    for r in 0..dx.rows() {
                        let c = dx.get(r, a);
                        if c != 0 {
                            d.set(layout.index(i - 1, r, j, b), idx, c);
                        }
                    }
                }
                if y.rank(j - 1) > 0 {
                    let dy = y.d(j);
                    let s = koszul(i);
                    for r in 0..dy.rows() {
                        let c = dy.get(r, b);
                        if c != 0 {
                            let row = layout.index(i, a, j - 1, r);
                            d.set(row, idx, d.get(row, idx) + s * c);
                        }
                    }
                }
            }
        }
        diffs.push(d);
    }
    ChainComplex { lo, labels, diffs }
}

/// A degreewise family of matrices from one complex to another, raising
/// degree by `shift`. Missing blocks are zero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedMap {
    pub shift: i64,
    pub blocks: BTreeMap<i64, IntMatrix>,
}

impl GradedMap {
    pub fn new(shift: i64) -> Self {
        GradedMap {
            shift,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let mut m = GradedMap::new(0);
        for n in c.degrees() {
            m.blocks.insert(n, IntMatrix::identity(c.rank(n)));
        }
        m
    }

    pub fn scalar(c: &ChainComplex, k: Int) -> Self {
        let mut m = GradedMap::new(0);
        for n in c.degrees() {
            m.blocks.insert(n, IntMatrix::scalar(c.rank(n), k));
        }
        m
    }

    /// The matrix out of source degree `n`, or a zero matrix of the right shape.
    pub fn block(&self, n: i64, source: &ChainComplex, target: &ChainComplex) -> IntMatrix {
        self.blocks
            .get(&n)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zero(target.rank(n + self.shift), source.rank(n)))
    }

    pub fn apply(&self, x: &ChainElement, target: &ChainComplex) -> Result<ChainElement> {
        let degree = x.degree + self.shift;
        match self.blocks.get(&x.degree) {
            Some(m) if m.cols() == x.coeffs.len() => Ok(ChainElement {
                degree,
                coeffs: m.mul_vec(&x.coeffs)?,
            }),
            Some(m) => Err(Error::Dimension(format!(
                "map block has {} columns, element has {} coefficients",
                m.cols(),
                x.coeffs.len()
            ))),
            None => Ok(ChainElement::zero(degree, target.rank(degree))),
        }
    }

    /// Shapes agree with source and target in every degree of the source window.
    pub fn check_shapes(&self, source: &ChainComplex, target: &ChainComplex) -> Result<()> {
        for (&n, m) in &self.blocks {
            if m.cols() != source.rank(n) || m.rows() != target.rank(n + self.shift) {
                return Err(Error::Dimension(format!(
                    "map block at degree {n} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.rank(n + self.shift),
                    source.rank(n)
                )));
            }
        }
        Ok(())
    }

    /// First degree where `d_target ∘ F = sign · F ∘ d_source` fails.
    pub fn chain_map_defect(
        &self,
        source: &ChainComplex,
        target: &ChainComplex,
        sign: Int,
    ) -> Result<Option<i64>> {
        for n in source.degrees() {
            let f_n = self.block(n, source, target);
            let lhs = target.d_owned(n + self.shift).mul(&f_n)?;
            let f_below = self.block(n - 1, source, target);
            let rhs = f_below.mul(&source.d_owned(n))?;
            let rhs = if sign == 1 { rhs } else { rhs.neg() };
            if lhs != rhs {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    /// `self` followed by `next`.
    pub fn then(
        &self,
        next: &GradedMap,
        source: &ChainComplex,
        mid: &ChainComplex,
        target: &ChainComplex,
    ) -> Result<GradedMap> {
        let mut out = GradedMap::new(self.shift + next.shift);
        for n in source.degrees() {
            let a = self.block(n, source, mid);
            let b = next.block(n + self.shift, mid, target);
            out.blocks.insert(n, b.mul(&a)?);
        }
        Ok(out)
    }
}

/// `τ(a ⊗ b) = (-1)^{|a||b|} b ⊗ a` as a map `X ⊗ Y -> Y ⊗ X`.
pub fn twist_chain(x: &ChainComplex, y: &ChainComplex) -> GradedMap {
    let src = TensorLayout::new(x, y);
    let tgt = TensorLayout::new(y, x);
    let mut map = GradedMap::new(0);
    if let Some((lo, hi)) = src.window() {
        for t in lo..=hi {
            let rank = src.rank(t);
            let mut m = IntMatrix::zero(tgt.rank(t), rank);
            for idx in 0..rank {
                let (i, a, j, b) = src.split(t, idx);
                m.set(tgt.index(j, b, i, a), idx, koszul(i * j));
            }
            map.blocks.insert(t, m);
        }
    }
    map
}

/// `τ≥ C` together with the inclusion of its degree-0 part into `C_0`.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub complex: ChainComplex,
    /// `rank C_0 × rank (τ≥C)_0`; columns are a basis of `ker(d: C_0 -> C_{-1})`.
    pub inclusion: IntMatrix,
}

pub fn truncate(c: &ChainComplex) -> ChainComplex {
    truncate_with_inclusion(c)
        .expect("truncation of a valid complex")
        .complex
}

pub fn truncate_with_inclusion(c: &ChainComplex) -> Result<Truncation> {
    let d0 = c.d_owned(0);
    let d0 = if c.rank(-1) == 0 {
        IntMatrix::zero(0, c.rank(0))
    } else {
        d0
    };
    let kernel = kernel_basis(&d0)?;
    let hi = c.hi().max(0);
    let mut labels = Vec::new();
    let mut diffs = Vec::new();
    let k0 = kernel.cols();
    // Degree 0.
    if kernel == IntMatrix::identity(c.rank(0)) {
        labels.push(c.labels(0).to_vec());
    } else {
        labels.push(
            (0..k0)
                .map(|t| {
                    Label::Combo(
                        kernel
                            .column(t)
                            .into_iter()
                            .enumerate()
                            .filter(|&(_, x)| x != 0)
                            .map(|(i, x)| (x, c.labels(0)[i].clone()))
                            .collect(),
                    )
                })
                .collect(),
        );
    }
    diffs.push(IntMatrix::zero(0, k0));
    for n in 1..=hi {
        labels.push(c.labels(n).to_vec());
        if n == 1 {
            // d_1 lands in the kernel; rewrite it in kernel coordinates.
            let d1 = c.d_owned(1);
            let mut m = IntMatrix::zero(k0, c.rank(1));
            for col in 0..d1.cols() {
                let x = in_lattice(&kernel, &d1.column(col))?
                    .ok_or_else(|| Error::Invalid("image of d_1 is not in ker d_0".into()))?;
                for (r, v) in x.into_iter().enumerate() {
                    m.set(r, col, v);
                }
            }
            diffs.push(m);
        } else {
            diffs.push(c.d_owned(n));
        }
    }
    let complex = ChainComplex {
        lo: 0,
        labels,
        diffs,
    };
    Ok(Truncation {
        complex,
        inclusion: kernel,
    })
}

/// Interchange format for chain complexes.
///
/// ```json
/// {
///   "degrees": [
///     {"degree": -1, "labels": ["y"]},
///     {"degree": 0, "rank": 1}
///   ],
///   "differentials": [
///     {"degree": 0, "matrix": [[2]]}
///   ]
/// }
/// ```
///
/// Each degree gives either `labels` or `rank` (labels are then generated).
/// `differentials[k].matrix` is the differential out of `degree`, with
/// `rank(degree - 1)` rows and `rank(degree)` columns; omitted ones are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub degrees: Vec<DegreeEntry>,
    #[serde(default)]
    pub differentials: Vec<DifferentialEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeEntry {
    pub degree: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialEntry {
    pub degree: i64,
    pub matrix: Vec<Vec<Int>>,
}

impl ComplexFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Usage(format!("bad complex file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_complex(c: &ChainComplex) -> Self {
        let degrees = c
            .degrees()
            .map(|n| DegreeEntry {
                degree: n,
                rank: None,
                labels: Some(c.labels(n).iter().map(ToString::to_string).collect()),
            })
            .collect();
        let differentials = c
            .degrees()
            .filter(|&n| c.rank(n - 1) > 0 && c.rank(n) > 0 && !c.d(n).is_zero())
            .map(|n| DifferentialEntry {
                degree: n,
                matrix: c.d(n).to_rows(),
            })
            .collect();
        ComplexFile {
            degrees,
            differentials,
        }
    }

    pub fn to_complex(&self) -> Result<ChainComplex> {
        if self.degrees.is_empty() {
            return Ok(ChainComplex::zero());
        }
        let mut ranks: BTreeMap<i64, Vec<Label>> = BTreeMap::new();
        for e in &self.degrees {
            let labels: Vec<Label> = match (&e.labels, e.rank) {
                (Some(l), r) => {
                    if r.is_some_and(|r| r != l.len()) {
                        return Err(Error::Usage(format!(
                            "degree {}: rank disagrees with labels",
                            e.degree
                        )));
                    }
                    l.iter().map(Label::atom).collect()
                }
                (None, Some(r)) => (0..r)
                    .map(|i| Label::atom(format!("g{}_{i}", e.degree)))
                    .collect(),
                (None, None) => {
                    return Err(Error::Usage(format!(
                        "degree {} needs labels or rank",
                        e.degree
                    )))
                }
            };
            if ranks.insert(e.degree, labels).is_some() {
                return Err(Error::Usage(format!("degree {} listed twice", e.degree)));
            }
        }
        let lo = *ranks.keys().next().expect("nonempty");
        let hi = *ranks.keys().last().expect("nonempty");
        let rank = |n: i64| ranks.get(&n).map_or(0, Vec::len);
        let mut given: BTreeMap<i64, IntMatrix> = BTreeMap::new();
        for d in &self.differentials {
            let rows = rank(d.degree - 1);
            let cols = rank(d.degree);
            let m = if d.matrix.is_empty() {
                IntMatrix::zero(0, 0)
            } else {
                IntMatrix::from_rows(&d.matrix)?
            };
            if m.rows() * m.cols() == 0 && rows * cols == 0 {
                continue;
            }
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::Usage(format!(
                    "differential out of degree {} must be {rows}x{cols}",
                    d.degree
                )));
            }
            given.insert(d.degree, m);
        }
        let labels: Vec<Vec<Label>> = (lo..=hi)
            .map(|n| ranks.get(&n).cloned().unwrap_or_default())
            .collect();
        let diffs = (lo..=hi)
            .map(|n| {
                let rows = if n == lo { 0 } else { rank(n - 1) };
                given
                    .remove(&n)
                    .unwrap_or_else(|| IntMatrix::zero(rows, rank(n)))
            })
            .collect();
        if let Some((&n, _)) = given.iter().next() {
            return Err(Error::Usage(format!(
                "differential at degree {n} outside the window"
            )));
        }
        ChainComplex::new(lo, labels, diffs)
    }
}

/// `Z --(·k)--> Z` in degrees `top` and `top - 1`.
pub fn multiplication_complex(top: i64, k: Int) -> ChainComplex {
    ChainComplex::new(
        top - 1,
        vec![vec![Label::atom("y")], vec![Label::atom("x")]],
        vec![
            IntMatrix::zero(0, 1),
            IntMatrix::from_rows(&[vec![k]]).expect("1x1"),
        ],
    )
    .expect("two-term complex")
}

/// Random complex with ranks `≤ max_rank` in `[lo, hi]`, built as a direct sum
/// of spheres and two-term pieces `Z -(·k)-> Z`, then conjugated by a random
/// unimodular change of basis in each degree so the differentials are dense.
pub fn random_complex<R: rand::Rng + ?Sized>(
    rng: &mut R,
    lo: i64,
    hi: i64,
    max_rank: usize,
) -> ChainComplex {
    let mut c = ChainComplex::zero();
    let pieces = rng.gen_range(1..=max_rank.max(1) + 1);
    for _ in 0..pieces {
        let piece = if hi > lo && rng.gen_bool(0.5) {
            let top = rng.gen_range(lo + 1..=hi);
            multiplication_complex(top, rng.gen_range(-3..=3))
        } else {
            sphere(rng.gen_range(lo..=hi))
        };
        let next = c.direct_sum(&piece).expect("sum of valid complexes");
        if next.degrees().any(|n| next.rank(n) > max_rank) {
            continue;
        }
        c = next;
    }
    // Change of basis P_n in each degree: d'_n = P_{n-1} d_n P_n^{-1}.
    let mut p = BTreeMap::new();
    let mut p_inv = BTreeMap::new();
    for n in c.degrees() {
        let (a, b) = random_unimodular(rng, c.rank(n));
        p.insert(n, a);
        p_inv.insert(n, b);
    }
    let diffs = c
        .degrees()
        .map(|n| {
            if n == c.lo() {
                c.d_owned(n)
            } else {
                p[&(n - 1)]
                    .mul(c.d(n))
                    .and_then(|m| m.mul(&p_inv[&n]))
                    .expect("small entries")
            }
        })
        .collect();
    let labels = c.degrees().map(|n| c.labels(n).to_vec()).collect();
    ChainComplex::new(c.lo(), labels, diffs).expect("conjugate of a complex is a complex")
}

// A product of a few elementary matrices, with its inverse.
fn random_unimodular<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> (IntMatrix, IntMatrix) {
    let mut a = IntMatrix::identity(n);
    let mut b = IntMatrix::identity(n);
    if n < 2 {
        return (a, b);
    }
    for _ in 0..n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let k: Int = if rng.gen_bool(0.5) { 1 } else { -1 };
        // E = I + k e_ij, E^{-1} = I - k e_ij
        let mut e = IntMatrix::identity(n);
        e.set(i, j, k);
        let mut e_inv = IntMatrix::identity(n);
        e_inv.set(i, j, -k);
        a = e.mul(&a).expect("small");
        b = b.mul(&e_inv).expect("small");
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_examples() {
        let s = sphere(0);
        assert_eq!(s.rank(0), 1);
        let s = sphere(-3);
        assert_eq!(s.rank(-3), 1);
        assert_eq!(s.rank(-2), 0);
        let e = s.basis_element(-3, 0);
        assert!(s.apply_d(&e).unwrap().is_zero());
    }

    #[test]
    fn tensor_of_spheres() {
        let t = tensor(&sphere(2), &sphere(-5));
        assert_eq!(t.trimmed().degrees(), -3..=-3);
        assert_eq!(t.rank(-3), 1);
    }

    #[test]
    fn koszul_sign_in_tensor_differential() {
        // e_1 ⊗ x with dx = y
        let c = multiplication_complex(0, 1);
        let t = tensor(&sphere(1), &c);
        let layout = TensorLayout::new(&sphere(1), &c);
        let x = ChainElement::basis(1, t.rank(1), layout.index(1, 0, 0, 0));
        let dx = t.apply_d(&x).unwrap();
        let mut expected = ChainElement::zero(0, t.rank(0));
        expected.coeffs[layout.index(1, 0, -1, 0)] = -1;
        assert_eq!(dx, expected);
    }

    #[test]
    fn twist_signs() {
        let s1 = sphere(1);
        let tw = twist_chain(&s1, &s1);
        assert_eq!(tw.blocks[&2], IntMatrix::from_rows(&[vec![-1]]).unwrap());
        let s0 = sphere(0);
        let tw = twist_chain(&s0, &s0);
        assert_eq!(tw.blocks[&0], IntMatrix::identity(1));
    }

    #[test]
    fn truncate_examples() {
        assert!(truncate(&sphere(-1)).is_empty());
        let t = truncate(&sphere(0));
        assert_eq!(t.trimmed(), sphere(0));
        let c = multiplication_complex(0, 2);
        assert!(truncate(&c).is_empty());
    }

    #[test]
    fn apply_d_examples() {
        let c = multiplication_complex(0, 2);
        let x = c.basis_element(0, 0);
        let dx = c.apply_d(&x).unwrap();
        assert_eq!(
            dx,
            ChainElement {
                degree: -1,
                coeffs: vec![2]
            }
        );
        assert!(c.apply_d(&dx).unwrap().is_zero());
        // outside the window: zero element
        assert!(c.apply_d(&ChainElement::zero(7, 0)).unwrap().is_zero());
    }

    #[test]
    fn rejects_non_complex() {
        let r = ChainComplex::new(
            0,
            vec![
                vec![Label::atom("a")],
                vec![Label::atom("b")],
                vec![Label::atom("c")],
            ],
            vec![
                IntMatrix::zero(0, 1),
                IntMatrix::from_rows(&[vec![1]]).unwrap(),
                IntMatrix::from_rows(&[vec![1]]).unwrap(),
            ],
        );
        assert!(matches!(r, Err(Error::Invalid(_))));
    }

    #[test]
    fn interchange_round_trip() {
        let text = r#"{
            "degrees": [{"degree": -1, "labels": ["y"]}, {"degree": 0, "rank": 1}],
            "differentials": [{"degree": 0, "matrix": [[2]]}]
        }"#;
        let c = ComplexFile::from_json(text).unwrap().to_complex().unwrap();
        assert_eq!(c.degrees(), -1..=0);
        assert_eq!(c.d(0), &IntMatrix::from_rows(&[vec![2]]).unwrap());
        let again = ComplexFile::from_json(&ComplexFile::from_complex(&c).to_json())
            .unwrap()
            .to_complex()
            .unwrap();
        assert_eq!(again.d(0), c.d(0));
        assert!(ComplexFile::from_json(r#"{"degrees": [], "extra": 1}"#).is_err());
        let bad = r#"{"degrees": [{"degree": 0, "rank": 1}], "differentials": [{"degree": 0, "matrix": [[1, 2]]}]}"#;
        assert!(ComplexFile::from_json(bad).unwrap().to_complex().is_err());
    }
}
