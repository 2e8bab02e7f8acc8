//! The colimit functor `D` from spectra to chain complexes, its right
//! adjoint `R`, and the structure maps `φ`, `χ`, `ψ`, `η`, `ε`.
//!
//! An element `a ∈ A_{n,k}` gives a class `ξ(a)` in `D(A)_{k-n}`, subject to
//! `ξ(β_*a) = sgn(β) ξ(a)` and `ξ(σ(e_k⊗a)) = ξ(a)`. Classes are compared by
//! pushing them to a common level with `σ` and testing membership in the
//! sign-coinvariant lattice there, which only ever certifies equality.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::chain::{
    koszul, sphere, tensor, truncate_with_inclusion, twist_chain, ChainComplex, ChainElement,
    GradedMap, Label, TensorLayout,
};
use crate::error::{Error, Result};
use crate::exactlin::{add, in_lattice, is_unimodular, mul, FreeQuotient, Int, IntMatrix, Lattice};
use crate::perm::{complete, compose, rho, Injection, Permutation};
use crate::spectra::{Presented, Spectrum, SpectrumMap};
use crate::symseq::{DayElement, DayGenerator, SymSeq};

/// A class `(level, basis index)`; the chain degree is `level + D-degree`.
pub type ClassKey = (usize, usize);

/// A combination of classes `ξ(e)` in one `D`-degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DElement {
    pub degree: i64,
    terms: BTreeMap<ClassKey, Int>,
}

impl DElement {
    pub fn zero(degree: i64) -> Self {
        DElement {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// `ξ(a)` for `a ∈ A_n`.
    pub fn xi(n: usize, a: &ChainElement) -> Self {
        let mut out = DElement::zero(a.degree - n as i64);
        for (i, c) in a.terms() {
            out.terms.insert((n, i), c);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (ClassKey, Int)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_level(&self) -> Option<usize> {
        self.terms.keys().map(|k| k.0).max()
    }

    fn add_term(&mut self, key: ClassKey, c: Int) -> Result<()> {
        let v = add(self.terms.get(&key).copied().unwrap_or(0), c)?;
        if v == 0 {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, v);
        }
        Ok(())
    }

    pub fn add(&self, other: &DElement) -> Result<DElement> {
        if self.degree != other.degree {
            return Err(Error::Domain(format!(
                "adding D-degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k, c)?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: Int) -> Result<DElement> {
        let mut out = DElement::zero(self.degree);
        for (key, c) in self.terms() {
            out.add_term(key, mul(c, k)?)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DElement) -> Result<DElement> {
        self.add(&other.scale(-1)?)
    }
}

impl fmt::Display for DElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 in D-degree {}", self.degree);
        }
        for (i, ((n, idx), c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}·ξ(L{n}#{idx})")?;
        }
        write!(f, " in D-degree {}", self.degree)
    }
}

/// Outcome of comparing two classes up to a stabilization bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DEquality {
    EqualAtLevel(usize),
    /// No level up to the bound certifies equality. This is not a proof
    /// that the classes differ in the colimit.
    NotEqualUpTo(usize),
}

impl DEquality {
    pub fn is_equal(self) -> bool {
        matches!(self, DEquality::EqualAtLevel(_))
    }
}

impl fmt::Display for DEquality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DEquality::EqualAtLevel(l) => write!(f, "equal at level {l}"),
            DEquality::NotEqualUpTo(l) => write!(
                f,
                "not shown equal up to level {l} (not a proof of inequality)"
            ),
        }
    }
}

/// `d ξ(a) = (-1)^n ξ(da)`.
pub fn d_on_d(a: &Presented, x: &DElement) -> Result<DElement> {
    let mut out = DElement::zero(x.degree - 1);
    for ((n, idx), c) in x.terms() {
        let c_n = a.base().level(n);
        let e = c_n.basis_element(n as i64 + x.degree, idx);
        let de = c_n.apply_d(&e)?;
        let s = mul(koszul(n as i64), c)?;
        for (i, v) in de.terms() {
            out.add_term((n, i), mul(s, v)?)?;
        }
    }
    Ok(out)
}

/// Sum of `σ_{L-n}` of every class of `x`, as a vector of `A_{L, L+deg}`.
pub fn push_to_level(a: &Spectrum, x: &DElement, level: usize) -> Result<ChainElement> {
    let t = level as i64 + x.degree;
    let mut out = a.level(level.min(a.max_level())).zero_element(t);
    if level > a.max_level() {
        return Err(Error::LevelBound {
            requested: level,
            bound: a.max_level(),
        });
    }
    for ((n, idx), c) in x.terms() {
        if n > level {
            return Err(Error::Domain(format!(
                "class at level {n} pushed down to {level}"
            )));
        }
        let e = a.level(n).basis_element(n as i64 + x.degree, idx);
        let s = a.sigma(level - n, n, &e)?;
        out = out.add(&s.scale(c))?;
    }
    Ok(out)
}

/// Equality in `D(A)`, certified at the first level `≤ n_stab` where the
/// difference lies in the sign-coinvariant lattice.
pub fn d_equal(a: &Presented, x: &DElement, y: &DElement, n_stab: usize) -> Result<DEquality> {
    if x.degree != y.degree {
        return Err(Error::Domain(format!(
            "comparing D-degrees {} and {}",
            x.degree, y.degree
        )));
    }
    if n_stab > a.max_level() {
        return Err(Error::LevelBound {
            requested: n_stab,
            bound: a.max_level(),
        });
    }
    let diff = x.sub(y)?;
    let start = x.max_level().max(y.max_level()).unwrap_or(0);
    if diff.is_zero() {
        return Ok(DEquality::EqualAtLevel(start));
    }
    for level in start..=n_stab {
        let v = push_to_level(a.base(), &diff, level)?;
        let t = level as i64 + diff.degree;
        if a.coinvariant_lattice(level, t)?.contains(&v.coeffs)? {
            return Ok(DEquality::EqualAtLevel(level));
        }
    }
    Ok(DEquality::NotEqualUpTo(n_stab))
}

/// `D` applied to a levelwise map: `ξ(a) ↦ ξ(f(a))`.
pub fn d_apply<F>(source: &Spectrum, x: &DElement, f: F) -> Result<DElement>
where
    F: Fn(usize, &ChainElement) -> Result<ChainElement>,
{
    let mut out: Option<DElement> = None;
    for ((n, idx), c) in x.terms() {
        let e = source.level(n).basis_element(n as i64 + x.degree, idx);
        let y = f(n, &e)?;
        let acc = out.get_or_insert_with(|| DElement::zero(y.degree - n as i64));
        for (i, v) in y.terms() {
            acc.add_term((n, i), mul(c, v)?)?;
        }
    }
    Ok(out.unwrap_or_else(|| DElement::zero(x.degree)))
}

/// `α_*(e_{-n} ⊗ a) = sgn(α') e_{-m} ⊗ α'_* σ(e_{m-n} ⊗ a)` for an injection
/// `α: n -> m`, with `α'` the canonical completion unless one is supplied.
/// Elements of `Z[-n] ⊗ A_n` are written by their `A_n` component.
pub fn cal_d_push(
    a: &Spectrum,
    alpha: &Injection,
    x: &ChainElement,
    completion: Option<&Permutation>,
) -> Result<ChainElement> {
    let (n, m) = (alpha.source(), alpha.target());
    if m > a.max_level() {
        return Err(Error::LevelBound {
            requested: m,
            bound: a.max_level(),
        });
    }
    let full = match completion {
        Some(p) => {
            if p.len() != m || compose(&rho(n, m)?, &p.as_injection())? != *alpha {
                return Err(Error::Completion);
            }
            p.clone()
        }
        None => complete(alpha),
    };
    let s = a.sigma(m - n, n, x)?;
    Ok(a.act(m, &full, &s)?.scale(full.sign()))
}

/// `d(e_{-n} ⊗ a) = (-1)^n e_{-n} ⊗ da` on `Z[-n] ⊗ A_n`.
pub fn cal_d_differential(a: &Spectrum, n: usize, x: &ChainElement) -> Result<ChainElement> {
    Ok(a.level(n).apply_d(x)?.scale(koszul(n as i64)))
}

/// `D(A)` at a stabilization bound: one free quotient per `D`-degree.
#[derive(Clone, Debug)]
pub struct DComplex {
    pub complex: ChainComplex,
    pub stab: usize,
    quotients: BTreeMap<i64, FreeQuotient>,
}

impl DComplex {
    /// Coordinates of a class in the materialized complex.
    pub fn class_of(&self, a: &Spectrum, x: &DElement) -> Result<ChainElement> {
        let rank = self.complex.rank(x.degree);
        let Some(q) = self.quotients.get(&x.degree) else {
            return Ok(ChainElement::zero(x.degree, rank));
        };
        let v = push_to_level(a, x, self.stab)?;
        Ok(ChainElement {
            degree: x.degree,
            coeffs: q.projection.mul_vec(&v.coeffs)?,
        })
    }

    /// A representative at the stabilization level.
    pub fn lift(&self, v: &ChainElement) -> Result<DElement> {
        let Some(q) = self.quotients.get(&v.degree) else {
            return Ok(DElement::zero(v.degree));
        };
        let w = q.lift.mul_vec(&v.coeffs)?;
        Ok(DElement::xi(
            self.stab,
            &ChainElement {
                degree: self.stab as i64 + v.degree,
                coeffs: w,
            },
        ))
    }
}

fn quotient_at(a: &Presented, level: usize, j: i64) -> Result<Option<FreeQuotient>> {
    let lat = a.coinvariant_lattice(level, level as i64 + j)?;
    FreeQuotient::new(&lat)
}

fn d_window(a: &Spectrum, level: usize) -> Option<(i64, i64)> {
    let c = a.level(level).trimmed();
    if c.is_empty() {
        None
    } else {
        Some((c.lo() - level as i64, c.hi() - level as i64))
    }
}

/// `D(A)` as a complex of free modules at level `n_stab`, with differential
/// induced by `(-1)^{n_stab} d`. Fails if the quotient at `n_stab - 1` does
/// not map isomorphically under `σ`, or if a quotient has torsion.
pub fn materialize_d(a: &Presented, n_stab: usize) -> Result<Arc<DComplex>> {
    a.materialized_cache()
        .get_or_init(n_stab, || materialize_uncached(a, n_stab).map(Arc::new))
}

fn materialize_uncached(a: &Presented, n_stab: usize) -> Result<DComplex> {
    let spec = a.base();
    if n_stab > spec.max_level() {
        return Err(Error::LevelBound {
            requested: n_stab,
            bound: spec.max_level(),
        });
    }
    let mut windows: Vec<(i64, i64)> = d_window(spec, n_stab).into_iter().collect();
    if n_stab > 0 {
        windows.extend(d_window(spec, n_stab - 1));
    }
    let Some(lo) = windows.iter().map(|w| w.0).min() else {
        return Ok(DComplex {
            complex: ChainComplex::zero(),
            stab: n_stab,
            quotients: BTreeMap::new(),
        });
    };
    let hi = windows.iter().map(|w| w.1).max().unwrap_or(lo);
    let mut quotients = BTreeMap::new();
    for j in lo..=hi {
        let q = quotient_at(a, n_stab, j)?.ok_or(Error::Torsion(j))?;
        if n_stab > 0 {
            let prev = quotient_at(a, n_stab - 1, j)?.ok_or(Error::NotStabilized(n_stab))?;
            if prev.rank() != q.rank() {
                return Err(Error::NotStabilized(n_stab));
            }
            let src = spec.level(n_stab - 1);
            let tgt = spec.level(n_stab);
            let t = n_stab as i64 - 1 + j;
            let s = spec.sigma1(n_stab - 1).block(t, src, tgt);
            let m = q.projection.mul(&s)?.mul(&prev.lift)?;
            if !is_unimodular(&m)? {
                return Err(Error::NotStabilized(n_stab));
            }
        }
        quotients.insert(j, q);
    }
    let c = spec.level(n_stab);
    let sign = koszul(n_stab as i64);
    let mut labels = Vec::new();
    let mut diffs = Vec::new();
    for j in lo..=hi {
        let q = &quotients[&j];
        labels.push(
            (0..q.rank())
                .map(|t| Label::atom(format!("ξ{j}#{t}")))
                .collect(),
        );
        if j == lo {
            diffs.push(IntMatrix::zero(0, q.rank()));
            continue;
        }
        let below = &quotients[&(j - 1)];
        let t = n_stab as i64 + j;
        let d = c.d_owned(t);
        let d = if d.rows() == 0 {
            IntMatrix::zero(c.rank(t - 1), c.rank(t))
        } else {
            d
        };
        let m = below.projection.mul(&d)?.mul(&q.lift)?;
        diffs.push(if sign == 1 { m } else { m.neg() });
    }
    Ok(DComplex {
        complex: ChainComplex::new(lo, labels, diffs)?,
        stab: n_stab,
        quotients,
    })
}

/// `R(C)`: level `n` is `τ≥(Z[n] ⊗ C)`, transpositions act by `-1`, and
/// `σ(e_k ⊗ (e_n ⊗ c)) = e_{n+k} ⊗ c`.
#[derive(Clone, Debug)]
pub struct RSpectrum {
    complex: ChainComplex,
    spectrum: Arc<Spectrum>,
    /// Per level, the inclusion of `(RC)_{n,0}` into `C_{-n}`.
    inclusions: Vec<IntMatrix>,
}

impl RSpectrum {
    pub fn new(name: &str, c: &ChainComplex, max_level: usize) -> Result<Self> {
        let mut levels = Vec::new();
        let mut inclusions = Vec::new();
        for n in 0..=max_level {
            let t = truncate_with_inclusion(&tensor(&sphere(n as i64), c))?;
            levels.push(t.complex);
            inclusions.push(t.inclusion);
        }
        let seq = Arc::new(SymSeq::with_scalar_action(levels, -1)?);
        let mut sigma = Vec::new();
        for n in 0..max_level {
            let (src, tgt) = (seq.level(n), seq.level(n + 1));
            let mut map = GradedMap::new(1);
            for t in src.degrees() {
                if src.rank(t) == 0 {
                    continue;
                }
                let m = if t == 0 {
                    inclusions[n].clone()
                } else {
                    IntMatrix::identity(src.rank(t))
                };
                debug_assert_eq!(m.rows(), tgt.rank(t + 1));
                map.blocks.insert(t, m);
            }
            sigma.push(map);
        }
        let spectrum = Spectrum::new(format!("R({name})"), seq, sigma)?;
        Ok(RSpectrum {
            complex: c.clone(),
            spectrum: Arc::new(spectrum),
            inclusions,
        })
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn spectrum(&self) -> &Arc<Spectrum> {
        &self.spectrum
    }

    pub fn max_level(&self) -> usize {
        self.spectrum.max_level()
    }

    /// `e_n ⊗ c` as an element of `(RC)_n`.
    pub fn embed(&self, n: usize, c: &ChainElement) -> Result<ChainElement> {
        let t = n as i64 + c.degree;
        if n > self.max_level() {
            return Err(Error::LevelBound {
                requested: n,
                bound: self.max_level(),
            });
        }
        if c.coeffs.len() != self.complex.rank(c.degree) {
            return Err(Error::Domain(format!(
                "element of rank {} in degree {}",
                c.coeffs.len(),
                c.degree
            )));
        }
        if t < 0 && c.is_zero() {
            return Ok(ChainElement {
                degree: t,
                coeffs: Vec::new(),
            });
        }
        if t < 0 {
            return Err(Error::Domain(format!(
                "e_{n} ⊗ c lands in negative degree {t}"
            )));
        }
        if t > 0 {
            return Ok(ChainElement {
                degree: t,
                coeffs: c.coeffs.clone(),
            });
        }
        let coords = in_lattice(&self.inclusions[n], &c.coeffs)?
            .ok_or_else(|| Error::Domain(format!("e_{n} ⊗ c in degree 0 needs dc = 0")))?;
        Ok(ChainElement {
            degree: 0,
            coeffs: coords,
        })
    }

    /// The `C` component of an element of `(RC)_n`.
    pub fn restrict(&self, n: usize, x: &ChainElement) -> Result<ChainElement> {
        let coeffs = if x.degree == 0 {
            self.inclusions[n].mul_vec(&x.coeffs)?
        } else {
            x.coeffs.clone()
        };
        Ok(ChainElement {
            degree: x.degree - n as i64,
            coeffs,
        })
    }

    /// `R(h)` for a chain map `h: C -> C'`.
    pub fn map(&self, target: &RSpectrum, h: &GradedMap) -> Result<SpectrumMap> {
        let n_max = self.max_level().min(target.max_level());
        let mut levels = Vec::new();
        for n in 0..=n_max {
            let src = self.spectrum.level(n);
            let mut f = GradedMap::new(0);
            for t in src.degrees() {
                let mut m = IntMatrix::zero(target.spectrum.level(n).rank(t), src.rank(t));
                for idx in 0..src.rank(t) {
                    let c = self.restrict(n, &src.basis_element(t, idx))?;
                    let hc = h.apply(&c, &target.complex)?;
                    for (r, v) in target.embed(n, &hc)?.terms() {
                        m.set(r, idx, v);
                    }
                }
                f.blocks.insert(t, m);
            }
            levels.push(f);
        }
        Ok(SpectrumMap { levels })
    }
}

/// `ε(ξ(e_n ⊗ c)) = c`.
pub fn epsilon(rc: &RSpectrum, x: &DElement) -> Result<ChainElement> {
    let mut out = rc.complex.zero_element(x.degree);
    for ((n, idx), c) in x.terms() {
        let e = rc.spectrum.level(n).basis_element(n as i64 + x.degree, idx);
        out = out.add(&rc.restrict(n, &e)?.scale(c))?;
    }
    Ok(out)
}

/// `η(a) = e_n ⊗ ξ(a)` in `R(D(A))_n`, through the materialized `D(A)`.
pub fn eta(
    a: &Presented,
    dc: &DComplex,
    rd: &RSpectrum,
    n: usize,
    x: &ChainElement,
) -> Result<ChainElement> {
    let v = dc.class_of(a.base(), &DElement::xi(n, x))?;
    rd.embed(n, &v)
}

fn day_generator(a: &Presented, p: usize, deg: i64, idx: usize) -> Result<DayGenerator> {
    let day = a
        .day()
        .ok_or_else(|| Error::Domain(format!("{} is not a product", a.name())))?;
    day.basis(p, deg)
        .and_then(|b| b.generators().get(idx))
        .cloned()
        .ok_or_else(|| Error::Domain(format!("no generator {idx} at ({p}, {deg})")))
}

/// `φ(ξ(a) ⊗ ξ(a')) = (-1)^{n'n + n'i} ξ(ι_*(a ⊗ a'))`, bilinearly; `ab`
/// is the product `A ⊗̄ A'`.
pub fn phi(ab: &Presented, x: &DElement, y: &DElement) -> Result<DElement> {
    let (left, right) = ab
        .factors()
        .ok_or_else(|| Error::Domain(format!("{} is not a product", ab.name())))?;
    let day = ab.day().expect("product");
    let mut out = DElement::zero(x.degree + y.degree);
    for ((n, ia), ca) in x.terms() {
        for ((n2, ib), cb) in y.terms() {
            let p = n + n2;
            if p > ab.max_level() {
                return Err(Error::LevelBound {
                    requested: p,
                    bound: ab.max_level(),
                });
            }
            let i = n as i64 + x.degree;
            let i2 = n2 as i64 + y.degree;
            debug_assert!(
                ia < left.base().level(n).rank(i) && ib < right.base().level(n2).rank(i2)
            );
            let g = DayGenerator {
                left_level: n,
                left_degree: i,
                left_index: ia,
                right_level: n2,
                right_degree: i2,
                right_index: ib,
                shuffle: Permutation::identity(p),
            };
            let idx = day
                .basis(p, i + i2)
                .and_then(|b| b.index_of(&g))
                .ok_or_else(|| Error::Domain(format!("{g} outside the product basis")))?;
            let sign = koszul(n2 as i64 * n as i64 + n2 as i64 * i);
            out.add_term((p, idx), mul(mul(sign, ca)?, cb)?)?;
        }
    }
    Ok(out)
}

/// An element of `D(A) ⊗ D(B)`: classes paired, graded by total degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DTensor {
    pub degree: i64,
    /// `(left D-degree, left class, right class)`.
    terms: BTreeMap<(i64, ClassKey, ClassKey), Int>,
}

impl DTensor {
    pub fn zero(degree: i64) -> Self {
        DTensor {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn pure(x: &DElement, y: &DElement) -> Result<Self> {
        let mut out = DTensor::zero(x.degree + y.degree);
        for (kx, cx) in x.terms() {
            for (ky, cy) in y.terms() {
                out.add_term((x.degree, kx, ky), mul(cx, cy)?)?;
            }
        }
        Ok(out)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, ClassKey, ClassKey), Int)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: (i64, ClassKey, ClassKey), c: Int) -> Result<()> {
        let v = add(self.terms.get(&key).copied().unwrap_or(0), c)?;
        if v == 0 {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, v);
        }
        Ok(())
    }

    pub fn add(&self, other: &DTensor) -> Result<DTensor> {
        if self.degree != other.degree {
            return Err(Error::Domain("adding tensors of different degree".into()));
        }
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k, c)?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: Int) -> Result<DTensor> {
        let mut out = DTensor::zero(self.degree);
        for (key, c) in self.terms() {
            out.add_term(key, mul(c, k)?)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DTensor) -> Result<DTensor> {
        self.add(&other.scale(-1)?)
    }

    /// `x ⊗ y ↦ (-1)^{|x||y|} y ⊗ x`.
    pub fn twist(&self) -> Result<DTensor> {
        let mut out = DTensor::zero(self.degree);
        for ((j, kx, ky), c) in self.terms() {
            let j2 = self.degree - j;
            out.add_term((j2, ky, kx), mul(koszul(j * j2), c)?)?;
        }
        Ok(out)
    }

    /// The left and right factors of one term, as single classes.
    pub fn split_terms(&self) -> Vec<(DElement, DElement, Int)> {
        self.terms()
            .map(|((j, kx, ky), c)| {
                let mut x = DElement::zero(j);
                x.terms.insert(kx, 1);
                let mut y = DElement::zero(self.degree - j);
                y.terms.insert(ky, 1);
                (x, y, c)
            })
            .collect()
    }
}

impl fmt::Display for DTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((_, (n, a), (m, b)), c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}·ξ(L{n}#{a})⊗ξ(L{m}#{b})")?;
        }
        Ok(())
    }
}

/// `d(x ⊗ y) = dx ⊗ y + (-1)^{|x|} x ⊗ dy`.
pub fn d_on_tensor(a: &Presented, b: &Presented, t: &DTensor) -> Result<DTensor> {
    let mut out = DTensor::zero(t.degree - 1);
    for (x, y, c) in t.split_terms() {
        let dx = d_on_d(a, &x)?;
        let dy = d_on_d(b, &y)?;
        if !dx.is_zero() {
            out = out.add(&DTensor::pure(&dx, &y)?.scale(c)?)?;
        }
        if !dy.is_zero() {
            out = out.add(&DTensor::pure(&x, &dy)?.scale(mul(c, koszul(x.degree))?)?)?;
        }
    }
    Ok(out)
}

/// Equality in `D(A) ⊗ D(B)`, bidegree by bidegree, using the lattice
/// `Λ_A ⊗ Z^b + Z^a ⊗ Λ_B` at a common level.
pub fn dtensor_equal(
    a: &Presented,
    b: &Presented,
    x: &DTensor,
    y: &DTensor,
    n_stab: usize,
) -> Result<DEquality> {
    if x.degree != y.degree {
        return Err(Error::Domain(
            "comparing tensors of different degree".into(),
        ));
    }
    let diff = x.sub(y)?;
    let start = x
        .terms()
        .chain(y.terms())
        .map(|((_, kx, ky), _)| kx.0.max(ky.0))
        .max()
        .unwrap_or(0);
    if diff.is_zero() {
        return Ok(DEquality::EqualAtLevel(start));
    }
    let mut groups: BTreeMap<i64, Vec<(DElement, DElement, Int)>> = BTreeMap::new();
    for (x, y, c) in diff.split_terms() {
        groups.entry(x.degree).or_default().push((x, y, c));
    }
    'levels: for level in start..=n_stab {
        for (&j, terms) in &groups {
            let j2 = diff.degree - j;
            let (ta, tb) = (level as i64 + j, level as i64 + j2);
            let (ra, rb) = (
                a.base().level(level).rank(ta),
                b.base().level(level).rank(tb),
            );
            let mut v = vec![0; ra * rb];
            for (x, y, c) in terms {
                let px = push_to_level(a.base(), x, level)?;
                let py = push_to_level(b.base(), y, level)?;
                for (i, u) in px.terms() {
                    for (k, w) in py.terms() {
                        v[i * rb + k] = add(v[i * rb + k], mul(mul(u, w)?, *c)?)?;
                    }
                }
            }
            if v.iter().all(|&c| c == 0) {
                continue;
            }
            let la = a.coinvariant_lattice(level, ta)?;
            let lb = b.coinvariant_lattice(level, tb)?;
            let mut lat = Lattice::new(ra * rb);
            for r in la.basis_matrix().columns() {
                for k in 0..rb {
                    let mut col = vec![0; ra * rb];
                    for (i, &u) in r.iter().enumerate() {
                        col[i * rb + k] = u;
                    }
                    lat.insert(col)?;
                }
            }
            for r in lb.basis_matrix().columns() {
                for i in 0..ra {
                    let mut col = vec![0; ra * rb];
                    for (k, &u) in r.iter().enumerate() {
                        col[i * rb + k] = u;
                    }
                    lat.insert(col)?;
                }
            }
            if !lat.contains(&v)? {
                continue 'levels;
            }
        }
        return Ok(DEquality::EqualAtLevel(level));
    }
    Ok(DEquality::NotEqualUpTo(n_stab))
}

/// `χ(ξ(α_*(a⊗a'))) = (-1)^{n'i + n'n} sgn(α) ξ(a) ⊗ ξ(a')` on normal forms.
pub fn chi(ab: &Presented, x: &DElement) -> Result<DTensor> {
    let mut out = DTensor::zero(x.degree);
    for ((p, idx), c) in x.terms() {
        let g = day_generator(ab, p, p as i64 + x.degree, idx)?;
        let (n, n2) = (g.left_level as i64, g.right_level as i64);
        let sign = koszul(n2 * g.left_degree + n2 * n) * g.shuffle.sign();
        let j = g.left_degree - n;
        out.add_term(
            (
                j,
                (g.left_level, g.left_index),
                (g.right_level, g.right_index),
            ),
            mul(sign, c)?,
        )?;
    }
    Ok(out)
}

/// `D(τ)`: the twist applied classwise, from `D(A ⊗̄ B)` to `D(B ⊗̄ A)`.
pub fn d_twist(ab: &Presented, ba: &Presented, x: &DElement) -> Result<DElement> {
    let day = ab
        .day()
        .ok_or_else(|| Error::Domain("not a product".into()))?;
    let day_ba = ba
        .day()
        .ok_or_else(|| Error::Domain("not a product".into()))?;
    d_apply(ab.base(), x, |p, e| {
        let t = ab.bar_twist(&day.from_chain(p, e)?)?;
        day_ba.to_chain(&t)
    })
}

/// Left unitor `Z[*] ⊗̄ A -> A`: `sh_*(e_n ⊗ a) ↦ sh_* σ(e_n ⊗ a)`.
pub fn left_unitor(za: &Presented, x: &DayElement) -> Result<ChainElement> {
    let (_, a) = za
        .factors()
        .ok_or_else(|| Error::Domain("not a product".into()))?;
    let a = a.base();
    let mut out = a.level(x.level).zero_element(x.degree);
    for (g, c) in x.terms() {
        let e = a
            .level(g.right_level)
            .basis_element(g.right_degree, g.right_index);
        let s = a.sigma(g.left_level, g.right_level, &e)?;
        out = out.add(&a.act(x.level, &g.shuffle, &s)?.scale(c))?;
    }
    Ok(out)
}

/// Right unitor `A ⊗̄ Z[*] -> A`: `sh_*(a ⊗ e_m) ↦ (-1)^{im} (sh∘τ^{m,n})_* σ(e_m ⊗ a)`.
pub fn right_unitor(az: &Presented, x: &DayElement) -> Result<ChainElement> {
    let (a, _) = az
        .factors()
        .ok_or_else(|| Error::Domain("not a product".into()))?;
    let a = a.base();
    let mut out = a.level(x.level).zero_element(x.degree);
    for (g, c) in x.terms() {
        let e = a
            .level(g.left_level)
            .basis_element(g.left_degree, g.left_index);
        let s = a.sigma(g.right_level, g.left_level, &e)?;
        let theta = crate::perm::twist(g.right_level, g.left_level).then(&g.shuffle);
        let sign = koszul(g.left_degree * g.right_level as i64);
        out = out.add(&a.act(x.level, &theta, &s)?.scale(mul(sign, c)?))?;
    }
    Ok(out)
}

/// `ψ: RC ⊗̄ RC' -> R(C ⊗ C')` together with the spectra it connects.
#[derive(Debug)]
pub struct RPair {
    pub left: Arc<RSpectrum>,
    pub right: Arc<RSpectrum>,
    pub target: Arc<RSpectrum>,
    pub product: Arc<Presented>,
    layout: TensorLayout,
}

impl RPair {
    pub fn new(left: Arc<RSpectrum>, right: Arc<RSpectrum>, max_level: usize) -> Result<Self> {
        let c = tensor(left.complex(), right.complex());
        let name = format!(
            "{}⊗{}",
            left.spectrum().name().trim_start_matches("R("),
            right.spectrum().name().trim_start_matches("R(")
        );
        let target = Arc::new(RSpectrum::new(&name, &c, max_level)?);
        let product = Presented::bar(
            &Presented::free(left.spectrum().clone()),
            &Presented::free(right.spectrum().clone()),
            max_level,
        )?;
        let layout = TensorLayout::new(left.complex(), right.complex());
        Ok(RPair {
            left,
            right,
            target,
            product,
            layout,
        })
    }

    /// `c ⊗ c'` in `C ⊗ C'`.
    pub fn tensor_elements(&self, c: &ChainElement, c2: &ChainElement) -> Result<ChainElement> {
        let t = c.degree + c2.degree;
        let mut out = self.target.complex().zero_element(t);
        for (a, u) in c.terms() {
            for (b, w) in c2.terms() {
                let idx = self.layout.index(c.degree, a, c2.degree, b);
                out.coeffs[idx] = add(out.coeffs[idx], mul(u, w)?)?;
            }
        }
        Ok(out)
    }

    /// `ψ(α_*((e_p⊗c) ⊗ (e_{p'}⊗c'))) = (-1)^{p'k} sgn(α) e_{p+p'} ⊗ c ⊗ c'`.
    pub fn psi(&self, x: &DayElement) -> Result<ChainElement> {
        let k_total = x.degree - x.level as i64;
        let mut acc = self.target.complex().zero_element(k_total);
        for (g, coeff) in x.terms() {
            let e = self
                .left
                .spectrum()
                .level(g.left_level)
                .basis_element(g.left_degree, g.left_index);
            let e2 = self
                .right
                .spectrum()
                .level(g.right_level)
                .basis_element(g.right_degree, g.right_index);
            let c = self.left.restrict(g.left_level, &e)?;
            let c2 = self.right.restrict(g.right_level, &e2)?;
            let sign = koszul(g.right_level as i64 * c.degree) * g.shuffle.sign();
            let cc = self.tensor_elements(&c, &c2)?;
            acc = acc.add(&cc.scale(mul(sign, coeff)?))?;
        }
        self.target.embed(x.level, &acc)
    }

    /// `R(τ): R(C ⊗ C') -> R(C' ⊗ C)` on an element of level `n`.
    pub fn r_twist(&self, other: &RPair, n: usize, x: &ChainElement) -> Result<ChainElement> {
        let c = self.target.restrict(n, x)?;
        let t = twist_chain(self.left.complex(), self.right.complex());
        let y = t.apply(&c, other.target.complex())?;
        other.target.embed(n, &y)
    }

    /// Splits an element of `C ⊗ C'` into `(degree, index)` pairs.
    pub fn split(&self, x: &ChainElement) -> Vec<((i64, usize), (i64, usize), Int)> {
        x.terms()
            .map(|(idx, c)| {
                let (i, a, j, b) = self.layout.split(x.degree, idx);
                ((i, a), (j, b), c)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::multiplication_complex;
    use crate::perm::twist;
    use crate::spectra::{free_spectrum, zstar};

    fn z(n: usize) -> Arc<Presented> {
        Presented::free(Arc::new(zstar(n)))
    }

    #[test]
    fn xi_of_suspension_is_equal() {
        let zp = z(5);
        let x = DElement::xi(1, &ChainElement::basis(1, 1, 0));
        let y = DElement::xi(3, &ChainElement::basis(3, 1, 0));
        assert_eq!(d_equal(&zp, &x, &y, 5).unwrap(), DEquality::EqualAtLevel(3));
        assert_eq!(d_equal(&zp, &x, &x, 5).unwrap(), DEquality::EqualAtLevel(1));
    }

    #[test]
    fn distinct_generators_are_not_identified() {
        let c = sphere(0).direct_sum(&sphere(0)).unwrap();
        let f = Presented::free(Arc::new(free_spectrum(0, &c, 4).unwrap()));
        let x = DElement::xi(0, &ChainElement::basis(0, 2, 0));
        let y = DElement::xi(0, &ChainElement::basis(0, 2, 1));
        assert_eq!(d_equal(&f, &x, &y, 4).unwrap(), DEquality::NotEqualUpTo(4));
    }

    #[test]
    fn materialize_zstar_is_sphere() {
        let dc = materialize_d(&z(5), 5).unwrap();
        let ranks: Vec<usize> = dc.complex.degrees().map(|t| dc.complex.rank(t)).collect();
        assert_eq!(ranks.iter().sum::<usize>(), 1);
        assert_eq!(dc.complex.rank(0), 1);
    }

    #[test]
    fn materialize_r_recovers_c() {
        let c = multiplication_complex(0, 2);
        let r = RSpectrum::new("C", &c, 5).unwrap();
        let rp = Presented::free(r.spectrum().clone());
        let dc = materialize_d(&rp, 5).unwrap();
        assert_eq!(dc.complex.rank(0), 1);
        assert_eq!(dc.complex.rank(-1), 1);
        assert_eq!(dc.complex.d(0).get(0, 0).abs(), 2);
        assert_eq!(r.spectrum().level(0).trimmed().degrees().count(), 0);
    }

    #[test]
    fn torsion_is_reported() {
        let f = Presented::free(Arc::new(free_spectrum(2, &sphere(1), 5).unwrap()));
        assert_eq!(materialize_d(&f, 5).unwrap_err(), Error::Torsion(-1));
    }

    #[test]
    fn rho_push_has_coefficient_one() {
        let zs = zstar(4);
        let e1 = ChainElement::basis(1, 1, 0);
        let out = cal_d_push(&zs, &rho(1, 3).unwrap(), &e1, None).unwrap();
        assert_eq!(out, zs.sigma(2, 1, &e1).unwrap());
    }

    #[test]
    fn completion_checked() {
        let zs = zstar(3);
        let e1 = ChainElement::basis(1, 1, 0);
        let alpha = rho(1, 2).unwrap();
        assert_eq!(
            cal_d_push(&zs, &alpha, &e1, Some(&twist(1, 1))),
            Err(Error::Completion)
        );
    }

    #[test]
    fn phi_signs() {
        let zp = z(4);
        let zz = Presented::bar(&zp, &zp, 4).unwrap();
        let e1 = DElement::xi(1, &ChainElement::basis(1, 1, 0));
        let out = phi(&zz, &e1, &e1).unwrap();
        assert_eq!(out.terms().next().unwrap().1, 1);
        let back = chi(&zz, &out).unwrap();
        assert_eq!(back, DTensor::pure(&e1, &e1).unwrap());
    }

    #[test]
    fn psi_sign_example() {
        let r = Arc::new(RSpectrum::new("S0", &sphere(0), 3).unwrap());
        let r2 = Arc::new(RSpectrum::new("S1", &sphere(1), 3).unwrap());
        let pair = RPair::new(r2, r, 3).unwrap();
        let day = pair.product.day().unwrap();
        // k = 1, p' = 1: sign -1
        let x = ChainElement::basis(2, 1, 0);
        let y = ChainElement::basis(1, 1, 0);
        let g = day
            .normalize(&Permutation::identity(2), 1, &x, 1, &y, 1)
            .unwrap();
        let out = pair.psi(&g).unwrap();
        assert_eq!(out.coeffs, vec![-1]);
    }
}
