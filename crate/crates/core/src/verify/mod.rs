//! Suite registry and check execution.
//!
//! Every check draws from its own ChaCha stream seeded by the run seed and
//! the check's name, so suites can run in any order or in parallel and still
//! produce identical reports.

mod suites;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cache::OnceMap;
use crate::chain::{multiplication_complex, sphere, ChainComplex, ChainElement};
use crate::dfunctor::{materialize_d, DComplex, RPair, RSpectrum};
use crate::error::{Error, Result};
use crate::spectra::{free_spectrum, zstar, Presented, Spectrum};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub max_level: usize,
    pub stab_bound: usize,
    pub fail_fast: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            trials: 300,
            max_level: 4,
            stab_bound: 5,
            fail_fast: false,
        }
    }
}

impl SuiteConfig {
    /// Level at which corpus spectra and their products are built.
    pub fn construction_bound(&self) -> usize {
        self.stab_bound.max(self.max_level)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    ExpectedDiscrepancy,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::ExpectedDiscrepancy => "expected-discrepancy",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub check: String,
    pub trials: usize,
    pub failures: usize,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckReport {
    pub fn is_failure(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

/// A named member of the test corpus.
#[derive(Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub spectrum: Arc<Presented>,
    /// Set for `R(C)` members.
    pub r: Option<Arc<RSpectrum>>,
}

impl CorpusEntry {
    pub fn base(&self) -> &Arc<Spectrum> {
        self.spectrum.base()
    }
}

/// The fixed corpus: `Z[*]`, `R(S0)`, `R(S2)`, `R(Z -2-> Z)`, `F_1(S0)`,
/// `F_2(S1)`, `Z[*] ⊕ R(S2)`, then `R(C)` for each extra complex.
pub fn corpus(max_level: usize, extra: &[(String, ChainComplex)]) -> Result<Vec<CorpusEntry>> {
    let free = |s: Spectrum| Presented::free(Arc::new(s));
    let mut out = vec![CorpusEntry {
        name: "Z[*]".into(),
        spectrum: free(zstar(max_level)),
        r: None,
    }];
    let mut complexes = vec![
        ("S0".to_string(), sphere(0)),
        ("S2".to_string(), sphere(2)),
        ("Z/2".to_string(), multiplication_complex(0, 2)),
    ];
    let fixed = complexes.len();
    complexes.extend(extra.iter().cloned());
    let mut rs = Vec::new();
    for (name, c) in &complexes {
        let r = Arc::new(RSpectrum::new(name, c, max_level)?);
        rs.push(r.clone());
        out.push(CorpusEntry {
            name: format!("R({name})"),
            spectrum: Presented::free(r.spectrum().clone()),
            r: Some(r),
        });
    }
    out.push(CorpusEntry {
        name: "F1(S0)".into(),
        spectrum: free(free_spectrum(1, &sphere(0), max_level)?.renamed("F1(S0)")),
        r: None,
    });
    out.push(CorpusEntry {
        name: "F2(S1)".into(),
        spectrum: free(free_spectrum(2, &sphere(1), max_level)?.renamed("F2(S1)")),
        r: None,
    });
    let sum = zstar(max_level)
        .direct_sum(rs[1].spectrum())?
        .renamed("Z[*]+R(S2)");
    out.push(CorpusEntry {
        name: "Z[*]+R(S2)".into(),
        spectrum: free(sum),
        r: None,
    });
    // keep the extra R(C) members last
    let extras: Vec<CorpusEntry> = out.drain(1 + fixed..1 + complexes.len()).collect();
    out.extend(extras);
    Ok(out)
}

/// Shared state for a run: configuration, corpus, and cached products.
type Materialized = (Arc<DComplex>, Arc<RSpectrum>);

pub struct Context {
    pub cfg: SuiteConfig,
    pub corpus: Vec<CorpusEntry>,
    bars: OnceMap<(usize, usize), Result<Arc<Presented>>>,
    triples: OnceMap<(usize, usize, usize, bool), Result<Arc<Presented>>>,
    pairs: OnceMap<(usize, usize), Result<Arc<RPair>>>,
    materialized: OnceMap<usize, Result<Materialized>>,
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Context")
            .field("cfg", &self.cfg)
            .field(
                "corpus",
                &self.corpus.iter().map(|e| &e.name).collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl Context {
    pub fn new(cfg: SuiteConfig, extra: &[(String, ChainComplex)]) -> Result<Self> {
        if cfg.stab_bound < cfg.max_level {
            return Err(Error::Usage(format!(
                "stabilization bound {} is below the maximum level {}",
                cfg.stab_bound, cfg.max_level
            )));
        }
        let corpus = corpus(cfg.construction_bound(), extra)?;
        Ok(Context {
            cfg,
            corpus,
            bars: OnceMap::new(),
            triples: OnceMap::new(),
            pairs: OnceMap::new(),
            materialized: OnceMap::new(),
        })
    }

    pub fn bound(&self) -> usize {
        self.cfg.construction_bound()
    }

    /// `A_i ⊗̄ A_j`.
    pub fn bar(&self, i: usize, j: usize) -> Result<Arc<Presented>> {
        self.bars.get_or_init((i, j), || {
            Presented::bar(
                &self.corpus[i].spectrum,
                &self.corpus[j].spectrum,
                self.bound(),
            )
        })
    }

    /// `(A_i ⊗̄ A_j) ⊗̄ A_k` if `left_nested`, else `A_i ⊗̄ (A_j ⊗̄ A_k)`.
    pub fn triple(
        &self,
        i: usize,
        j: usize,
        k: usize,
        left_nested: bool,
    ) -> Result<Arc<Presented>> {
        self.triples.get_or_init((i, j, k, left_nested), || {
            if left_nested {
                Presented::bar(&self.bar(i, j)?, &self.corpus[k].spectrum, self.bound())
            } else {
                Presented::bar(&self.corpus[i].spectrum, &self.bar(j, k)?, self.bound())
            }
        })
    }

    /// Indices of `R(C)` members.
    pub fn r_members(&self) -> Vec<usize> {
        (0..self.corpus.len())
            .filter(|&i| self.corpus[i].r.is_some())
            .collect()
    }

    /// `ψ` data for two `R(C)` members.
    pub fn rpair(&self, i: usize, j: usize) -> Result<Arc<RPair>> {
        self.pairs.get_or_init((i, j), || {
            let (a, b) = (&self.corpus[i].r, &self.corpus[j].r);
            match (a, b) {
                (Some(a), Some(b)) => Ok(Arc::new(RPair::new(a.clone(), b.clone(), self.bound())?)),
                _ => Err(Error::Domain("ψ needs two R(C) members".into())),
            }
        })
    }

    /// `D(A_i)` at the stabilization bound, with `R(D(A_i))`.
    pub fn materialized(&self, i: usize) -> Result<Materialized> {
        self.materialized.get_or_init(i, || {
            let dc = materialize_d(&self.corpus[i].spectrum, self.cfg.stab_bound)?;
            let rd = RSpectrum::new(
                &format!("D({})", self.corpus[i].name),
                &dc.complex,
                self.bound(),
            )?;
            Ok((dc, Arc::new(rd)))
        })
    }

    /// Independent stream for one check.
    pub fn rng(&self, suite: &str, check: &str) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(
            self.cfg
                .seed
                .wrapping_add(fnv1a(&format!("{suite}/{check}"))),
        )
    }
}

fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Per-check accumulator: counts trials, keeps the first witness.
pub(crate) struct Tally {
    suite: &'static str,
    check: &'static str,
    trials: usize,
    failures: usize,
    witness: Option<String>,
    fail_fast: bool,
}

impl Tally {
    pub(crate) fn new(ctx: &Context, suite: &'static str, check: &'static str) -> Self {
        Tally {
            suite,
            check,
            trials: 0,
            failures: 0,
            witness: None,
            fail_fast: ctx.cfg.fail_fast,
        }
    }

    pub(crate) fn stopped(&self) -> bool {
        self.fail_fast && self.failures > 0
    }

    /// `Ok(None)` is a pass, `Ok(Some(w))` a failure with witness `w`.
    pub(crate) fn record(&mut self, outcome: Result<Option<String>>) {
        if self.stopped() {
            return;
        }
        self.trials += 1;
        let witness = match outcome {
            Ok(None) => return,
            Ok(Some(w)) => w,
            Err(e) => format!("error: {e}"),
        };
        self.failures += 1;
        if self.witness.is_none() {
            self.witness = Some(witness);
        }
    }

    pub(crate) fn report(self) -> CheckReport {
        CheckReport {
            suite: self.suite.into(),
            check: self.check.into(),
            trials: self.trials,
            failures: self.failures,
            verdict: if self.failures == 0 {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            witness: self.witness,
        }
    }
}

pub(crate) fn expect_eq<T: PartialEq + fmt::Display>(
    what: &str,
    lhs: &T,
    rhs: &T,
) -> Option<String> {
    (lhs != rhs).then(|| format!("{what}: {lhs} vs {rhs}"))
}

/// Coefficient in `[-3, 3]`.
pub(crate) fn coefficient<R: Rng + ?Sized>(rng: &mut R) -> i64 {
    rng.gen_range(-3..=3)
}

/// Nonzero random element of `A_{n,t}`; the caller ensures the rank is positive.
pub(crate) fn random_element<R: Rng + ?Sized>(
    rng: &mut R,
    c: &ChainComplex,
    t: i64,
) -> ChainElement {
    let rank = c.rank(t);
    let mut coeffs: Vec<i64> = (0..rank).map(|_| coefficient(rng)).collect();
    if coeffs.iter().all(|&x| x == 0) {
        let i = rng.gen_range(0..rank);
        coeffs[i] = if rng.gen_bool(0.5) { 1 } else { -1 };
    }
    ChainElement { degree: t, coeffs }
}

/// `(level, degree)` cells with positive rank, levels `≤ max_level`,
/// degrees `≤ max_deg`.
pub(crate) fn cells(a: &Spectrum, max_level: usize, max_deg: i64) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    for n in 0..=max_level.min(a.max_level()) {
        let c = a.level(n);
        for t in c.degrees() {
            if t <= max_deg && c.rank(t) > 0 {
                out.push((n, t));
            }
        }
    }
    out
}

/// Every basis element in [`cells`].
pub(crate) fn generators(
    a: &Spectrum,
    max_level: usize,
    max_deg: i64,
) -> Vec<(usize, ChainElement)> {
    let mut out = Vec::new();
    for (n, t) in cells(a, max_level, max_deg) {
        let c = a.level(n);
        for i in 0..c.rank(t) {
            out.push((n, c.basis_element(t, i)));
        }
    }
    out
}

type SuiteFn = fn(&Context) -> Vec<CheckReport>;

const REGISTRY: &[(&str, SuiteFn)] = &[
    ("adjunction-triangles", suites::adjunction_triangles),
    ("bar-quotient", suites::bar_quotient),
    ("bar-twist", suites::bar_twist),
    ("chain-laws", suites::chain_laws),
    ("chi-cocommutativity", suites::chi_cocommutativity),
    ("chi-composite", suites::chi_composite),
    ("chi-inverse", suites::chi_inverse),
    ("d-chain-map", suites::d_chain_map),
    ("d-functoriality", suites::d_functoriality),
    ("d-well-defined", suites::d_well_defined),
    ("day-normalize", suites::day_normalize),
    ("day-twist", suites::day_twist),
    ("day-twist-naive", suites::day_twist_naive),
    ("lattice-oracle", suites::lattice_oracle),
    ("monoid", suites::monoid),
    ("perm-laws", suites::perm_laws),
    ("phi-associativity", suites::phi_associativity),
    ("phi-chain-map", suites::phi_chain_map),
    ("phi-unit", suites::phi_unit),
    ("phi-well-defined", suites::phi_well_defined),
    ("psi-associativity", suites::psi_associativity),
    ("psi-coequalizer", suites::psi_coequalizer),
    ("psi-commutativity", suites::psi_commutativity),
    ("rho-sign", suites::rho_sign),
    ("spectrum-validation", suites::spectrum_validation),
    ("symmetric-square", suites::symmetric_square),
];

pub fn suite_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|(n, _)| *n).collect()
}

fn lookup(name: &str) -> Result<SuiteFn> {
    REGISTRY
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, f)| *f)
        .ok_or_else(|| Error::Usage(format!("unknown suite `{name}` (see list-suites)")))
}

/// Runs one suite on the default corpus.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let f = lookup(name)?;
    let ctx = Context::new(cfg.clone(), &[])?;
    let mut out = f(&ctx);
    out.sort_by(|a, b| (&a.suite, &a.check).cmp(&(&b.suite, &b.check)));
    Ok(out)
}

/// Runs the named suites (all when empty) and merges the reports by suite
/// then check name. With `fail_fast`, suites run in order and stop after
/// the first one that fails.
pub fn run_suites(names: &[String], ctx: &Context) -> Result<Vec<CheckReport>> {
    let selected: BTreeSet<&str> = if names.is_empty() {
        REGISTRY.iter().map(|(n, _)| *n).collect()
    } else {
        names.iter().map(|s| s.as_str()).collect()
    };
    let fns = selected
        .iter()
        .map(|n| lookup(n))
        .collect::<Result<Vec<_>>>()?;
    let mut out: Vec<CheckReport> = if ctx.cfg.fail_fast {
        let mut acc = Vec::new();
        for f in fns {
            let r = f(ctx);
            let failed = r.iter().any(CheckReport::is_failure);
            acc.extend(r);
            if failed {
                break;
            }
        }
        acc
    } else {
        fns.par_iter().flat_map(|f| f(ctx)).collect()
    };
    out.sort_by(|a, b| (&a.suite, &a.check).cmp(&(&b.suite, &b.check)));
    Ok(out)
}

pub fn render_text(reports: &[CheckReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let mark = match r.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::ExpectedDiscrepancy => "NOTE",
        };
        s.push_str(&format!(
            "{mark} {}/{} trials={} failures={} verdict={}\n",
            r.suite, r.check, r.trials, r.failures, r.verdict
        ));
        if let Some(w) = &r.witness {
            s.push_str(&format!("     witness: {w}\n"));
        }
    }
    s
}

pub fn render_json(reports: &[CheckReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}
