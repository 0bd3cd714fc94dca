//! Exact weights of single codewords and exhaustive weight spectra of
//! `RM_p(r, m)`.

mod code;
mod enumerate;
mod rational;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use code::{monomials, CodeParams};
pub use rational::PExactRational;

use crate::budget::Budget;
use crate::error::{GrmError, Result};
use crate::field_poly::{monomial_table, tabulate, EvaluationTable, Polynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnumerationMode {
    /// Every coefficient vector; counts are exact multiplicities.
    Full,
    /// Representatives modulo weight-preserving symmetries; only the weight
    /// set is meaningful.
    SymmetryReduced,
}

impl EnumerationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EnumerationMode::Full => "full",
            EnumerationMode::SymmetryReduced => "symmetry-reduced",
        }
    }
}

/// Number of codewords of each weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSpectrum {
    pub params: CodeParams,
    pub counts: BTreeMap<u64, BigUint>,
    pub mode: EnumerationMode,
    /// Number of blocks the enumeration was split into.
    pub partitions: usize,
    pub tool_version: String,
}

impl WeightSpectrum {
    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    pub fn expected_total(&self) -> BigUint {
        BigUint::from(self.params.p()).pow(self.params.dim() as u32)
    }

    /// Checks the invariants of a full spectrum: the counts sum to `p^dim`
    /// and only the zero codeword has weight 0.
    pub fn validate(&self) -> Result<()> {
        if self.mode != EnumerationMode::Full {
            return Ok(());
        }
        let total = self.total();
        if total != self.expected_total() {
            return Err(GrmError::LostPartition {
                expected: self.expected_total().to_string(),
                got: total.to_string(),
            });
        }
        if self.counts.get(&0) != Some(&BigUint::one()) {
            return Err(GrmError::Internal(
                "weight 0 must be attained only by the zero codeword".into(),
            ));
        }
        Ok(())
    }

    pub fn count(&self, weight: u64) -> BigUint {
        self.counts.get(&weight).cloned().unwrap_or_default()
    }

    /// Weights with nonzero count, ascending.
    pub fn weights(&self) -> impl Iterator<Item = u64> + '_ {
        self.counts
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(&w, _)| w)
    }

    pub fn min_nonzero_weight(&self) -> Option<u64> {
        self.weights().find(|&w| w > 0)
    }
}

/// Exact weight of one codeword: `(count, count / p^m)`.
pub fn weight(f: &Polynomial, budget: &Budget) -> Result<(u64, PExactRational)> {
    let t = tabulate(f, budget)?;
    let w = t.weight();
    Ok((w, PExactRational::new(f.p(), w, f.m() as u32)))
}

fn to_spectrum(
    params: CodeParams,
    parts: Vec<Vec<u64>>,
    mode: EnumerationMode,
) -> Vec<WeightSpectrum> {
    parts
        .into_iter()
        .map(|c| WeightSpectrum {
            params,
            counts: c
                .into_iter()
                .enumerate()
                .filter(|(_, k)| *k > 0)
                .map(|(w, k)| (w as u64, BigUint::from(k)))
                .collect(),
            mode,
            partitions: 1,
            tool_version: crate::TOOL_VERSION.to_string(),
        })
        .collect()
}

fn basis_tables(params: &CodeParams) -> Vec<EvaluationTable> {
    params
        .monomials()
        .iter()
        .map(|e| monomial_table(params.field, e))
        .collect()
}

/// Full weight spectrum of `RM_p(r, m)`. The coefficient vector runs in
/// reflected Gray order over the graded-lex monomial basis; the result is the
/// same for every `workers` value.
pub fn enumerate_spectrum(
    params: CodeParams,
    budget: &Budget,
    workers: usize,
) -> Result<WeightSpectrum> {
    let tables = basis_tables(&params);
    let (parts, _) = enumerate::span_counts(params.field, params.m, &tables, workers, budget)?;
    merge_spectra(&to_spectrum(params, parts, EnumerationMode::Full))
}

/// Spectrum of the span of an arbitrary basis of `RM_p(r, m)`, e.g. the
/// monomial basis precomposed with an affine map. Counts are over coefficient
/// vectors, so a basis of the whole code reproduces `enumerate_spectrum`.
pub fn span_spectrum(
    params: CodeParams,
    basis: &[Polynomial],
    budget: &Budget,
    workers: usize,
) -> Result<WeightSpectrum> {
    let mut tables = Vec::with_capacity(basis.len());
    for g in basis {
        if g.params() != params.field || g.m() != params.m {
            return Err(GrmError::ParamsMismatch("basis polynomial outside the code".into()));
        }
        if !g.total_degree().at_most(params.r) {
            return Err(GrmError::ParamsMismatch(format!(
                "basis polynomial {g} has degree above {}",
                params.r
            )));
        }
        tables.push(tabulate(g, budget)?);
    }
    if tables.len() != params.dim() {
        return Err(GrmError::DimensionMismatch {
            expected: params.dim(),
            got: tables.len(),
        });
    }
    let (parts, _) = enumerate::span_counts(params.field, params.m, &tables, workers, budget)?;
    merge_spectra(&to_spectrum(params, parts, EnumerationMode::Full))
}

/// Weight set of `RM_p(r, m)` from a walk over symmetry representatives.
/// Counts in the result are representative counts, not multiplicities.
pub fn enumerate_reduced(
    params: CodeParams,
    budget: &Budget,
    workers: usize,
) -> Result<WeightSpectrum> {
    let tables = basis_tables(&params);
    let (parts, n) = enumerate::reduced_counts(params.field, params.m, &tables, workers, budget)?;
    let parts = to_spectrum(params, parts, EnumerationMode::SymmetryReduced);
    let mut counts: BTreeMap<u64, BigUint> = BTreeMap::new();
    for part in parts {
        for (w, c) in part.counts {
            *counts.entry(w).or_default() += c;
        }
    }
    Ok(WeightSpectrum {
        params,
        counts,
        mode: EnumerationMode::SymmetryReduced,
        partitions: n,
        tool_version: crate::TOOL_VERSION.to_string(),
    })
}

/// Sorted, duplicate-free relative weights attained in `spectrum`.
pub fn weight_set(spectrum: &WeightSpectrum) -> Vec<PExactRational> {
    let p = spectrum.params.p();
    let m = spectrum.params.m as u32;
    spectrum
        .weights()
        .map(|w| PExactRational::new(p, w, m))
        .collect()
}

/// Pointwise sum of partial spectra over disjoint parts of the code. A full
/// merge must total `p^dim`.
pub fn merge_spectra(parts: &[WeightSpectrum]) -> Result<WeightSpectrum> {
    let first = parts
        .first()
        .ok_or_else(|| GrmError::InvalidArgument("no spectra to merge".into()))?;
    let mut counts: BTreeMap<u64, BigUint> = BTreeMap::new();
    for part in parts {
        if part.params != first.params || part.mode != first.mode {
            return Err(GrmError::ParamsMismatch(
                "merged spectra must share (p, r, m) and mode".into(),
            ));
        }
        for (w, c) in &part.counts {
            *counts.entry(*w).or_default() += c;
        }
    }
    let merged = WeightSpectrum {
        params: first.params,
        counts,
        mode: first.mode,
        partitions: parts.iter().map(|s| s.partitions).sum(),
        tool_version: first.tool_version.clone(),
    };
    if merged.mode == EnumerationMode::Full {
        let total = merged.total();
        let expected = merged.expected_total();
        if total != expected {
            return Err(GrmError::LostPartition {
                expected: expected.to_string(),
                got: total.to_string(),
            });
        }
    }
    Ok(merged)
}

/// Serialized spectrum: the cache file and `spectrum` command document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumDocument {
    pub p: u32,
    pub r: u32,
    pub m: usize,
    pub dim: usize,
    pub mode: EnumerationMode,
    pub counts: Vec<(u64, String)>,
    pub tool_version: String,
}

impl From<&WeightSpectrum> for SpectrumDocument {
    fn from(s: &WeightSpectrum) -> Self {
        SpectrumDocument {
            p: u32::from(s.params.p()),
            r: s.params.r,
            m: s.params.m,
            dim: s.params.dim(),
            mode: s.mode,
            counts: s
                .counts
                .iter()
                .map(|(&w, c)| (w, c.to_string()))
                .collect(),
            tool_version: s.tool_version.clone(),
        }
    }
}

impl TryFrom<SpectrumDocument> for WeightSpectrum {
    type Error = GrmError;
    fn try_from(d: SpectrumDocument) -> Result<Self> {
        let params = CodeParams::new(d.p, d.r, d.m)?;
        if params.dim() != d.dim {
            return Err(GrmError::DimensionMismatch {
                expected: params.dim(),
                got: d.dim,
            });
        }
        let mut counts = BTreeMap::new();
        for (w, c) in d.counts {
            let c: BigUint = c
                .parse()
                .map_err(|_| GrmError::InvalidArgument(format!("bad count {c:?}")))?;
            counts.insert(w, c);
        }
        let s = WeightSpectrum {
            params,
            counts,
            mode: d.mode,
            partitions: 1,
            tool_version: d.tool_version,
        };
        s.validate()?;
        Ok(s)
    }
}
