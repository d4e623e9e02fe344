//! Unit-norm codebooks induced from QCSS families, maximum inner-product
//! scans, the Welch and Levenshtein lower bounds, and scaling diagnostics.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::characters::RootTable;
use crate::correlation::{delta_opt, QcssFamily, DEFAULT_MULTIPLY_ADD_BUDGET};

/// Default cap on U*V entries when materializing an induced codebook.
pub const DEFAULT_CODEBOOK_ENTRY_CAP: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodebookError {
    #[error("codebook would hold {entries} entries, above the cap {cap}")]
    BudgetExceeded { entries: u128, cap: u64 },
    #[error("pair scan needs {estimated} multiply-adds, above the budget {budget}")]
    ScanBudgetExceeded { estimated: u128, budget: u64 },
    #[error("need at least two vectors")]
    TooFewVectors,
    #[error("vector {index} has norm {norm}, not 1")]
    NotUnitNorm { index: usize, norm: f64 },
    #[error("vector index {index} out of range (U = {size})")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("invalid parameters")]
    InvalidParams,
    #[error("vector count and dimension do not match the data length")]
    ShapeMismatch,
}

/// Where a codebook came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    /// Flattened cyclic shifts of a family's matrices.
    Induced,
    External,
}

/// U unit-norm complex vectors of dimension V, stored flat.
#[derive(Debug, Clone)]
pub struct Codebook {
    dim: usize,
    data: Vec<Complex64>,
    provenance: Provenance,
}

impl Codebook {
    /// Validates that every vector has unit norm (within 1e-9).
    pub fn new(
        dim: usize,
        data: Vec<Complex64>,
        provenance: Provenance,
    ) -> Result<Codebook, CodebookError> {
        if dim == 0 || data.is_empty() || !data.len().is_multiple_of(dim) {
            return Err(CodebookError::ShapeMismatch);
        }
        let cb = Codebook {
            dim,
            data,
            provenance,
        };
        for i in 0..cb.num_vectors() {
            let norm = cb.vector(i).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(CodebookError::NotUnitNorm { index: i, norm });
            }
        }
        Ok(cb)
    }

    pub fn num_vectors(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn vector(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }
}

/// Budgets for codebook materialization and pair scans.
#[derive(Debug, Clone, Copy)]
pub struct CodebookOptions {
    /// Cap on U*V when materializing (default 1e8 entries).
    pub max_entries: u64,
    /// Cap on the U^2*V multiply-adds of a pair scan (default 1e10).
    pub max_multiply_adds: u64,
}

impl Default for CodebookOptions {
    fn default() -> Self {
        CodebookOptions {
            max_entries: DEFAULT_CODEBOOK_ENTRY_CAP,
            max_multiply_adds: DEFAULT_MULTIPLY_ADD_BUDGET,
        }
    }
}

/// The induced codebook of a family: U = M*N vectors of dimension V = K*N.
///
/// Vector (m, tau), at flat index m*N + tau, is the matrix's flattened
/// read-out rotated left by tau and scaled by 1/sqrt(KN) — the same shift
/// convention as [`matrix_corr`](crate::correlation::matrix_corr), so
/// inner products reproduce the matrix correlations exactly:
/// <c_{m1,t1}, c_{m2,t2}> = R(m1, m2, (t2 - t1) mod KN) / (KN).
pub fn induce_codebook(
    family: &QcssFamily,
    options: &CodebookOptions,
) -> Result<Codebook, CodebookError> {
    let m = family.set_size();
    let k = family.flock_size();
    let n = family.length();
    let len = k * n;
    let entries = (m as u128) * (n as u128) * (len as u128);
    if entries > options.max_entries as u128 {
        return Err(CodebookError::BudgetExceeded {
            entries,
            cap: options.max_entries,
        });
    }
    let scale = 1.0 / (len as f64).sqrt();
    let table = RootTable::new(family.alphabet());
    let mut data = Vec::with_capacity(entries as usize);
    for mi in 0..m {
        let flat = family.matrix(mi).flat();
        for tau in 0..n {
            for j in 0..len {
                data.push(table.get(flat[(j + tau) % len]) * scale);
            }
        }
    }
    Codebook::new(len, data, Provenance::Induced)
}

/// Max |<c_i, c_j>| over distinct pairs, by exhaustive scan of the
/// conjugate-symmetric half (i < j).
pub fn i_max(cb: &Codebook, options: &CodebookOptions) -> Result<f64, CodebookError> {
    let u = cb.num_vectors();
    if u < 2 {
        return Err(CodebookError::TooFewVectors);
    }
    let estimated = (u as u128) * (u as u128) * (cb.dim as u128);
    if estimated > options.max_multiply_adds as u128 {
        return Err(CodebookError::ScanBudgetExceeded {
            estimated,
            budget: options.max_multiply_adds,
        });
    }
    let best_sq = (0..u - 1)
        .into_par_iter()
        .map(|i| {
            let a = cb.vector(i);
            let mut best = 0.0f64;
            for j in i + 1..u {
                let b = cb.vector(j);
                let mut acc = Complex64::new(0.0, 0.0);
                for (x, y) in a.iter().zip(b) {
                    acc += x * y.conj();
                }
                best = best.max(acc.norm_sqr());
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    Ok(best_sq.sqrt())
}

/// Max inner product over distinct pairs drawn from a subset of the vectors.
fn i_max_subset(cb: &Codebook, subset: &[usize]) -> f64 {
    let mut best = 0.0f64;
    for (pos, &i) in subset.iter().enumerate() {
        let a = cb.vector(i);
        for &j in &subset[pos + 1..] {
            let b = cb.vector(j);
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, y) in a.iter().zip(b) {
                acc += x * y.conj();
            }
            best = best.max(acc.norm_sqr());
        }
    }
    best.sqrt()
}

/// The Welch bound sqrt((U - V) / ((U - 1) V)) for U >= V >= 1, U >= 2.
pub fn welch_bound(u: u64, v: u64) -> Result<f64, CodebookError> {
    if v < 1 || u < v || u < 2 {
        return Err(CodebookError::InvalidParams);
    }
    let (u, v) = (u as f64, v as f64);
    Ok(((u - v) / ((u - 1.0) * v)).sqrt())
}

/// The sharper dense-regime lower bounds; each value is present exactly when
/// its density precondition holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevenshteinBounds {
    /// sqrt((3U - V^2 - 2V) / ((V+2)(U-V))), for real codebooks with
    /// U > V(V+1)/2.
    pub real_flavor: Option<f64>,
    /// sqrt((2U - V^2 - V) / ((V+1)(U-V))), for U > V^2.
    pub complex_flavor: Option<f64>,
    /// sqrt((3(V+1) + sqrt((5V+1)(V+1))) / (2(V+1)(V+2))), at U = V^3 exactly.
    pub cubic: Option<f64>,
}

/// Evaluate the Levenshtein bounds at (U, V); requires U > V.
pub fn levenshtein_bounds(u: u64, v: u64) -> Result<LevenshteinBounds, CodebookError> {
    if v < 1 || u <= v {
        return Err(CodebookError::InvalidParams);
    }
    let (uf, vf) = (u as f64, v as f64);
    let real_flavor = if 2 * u > v * (v + 1) {
        Some(((3.0 * uf - vf * vf - 2.0 * vf) / ((vf + 2.0) * (uf - vf))).sqrt())
    } else {
        None
    };
    let complex_flavor = if u > v * v {
        Some(((2.0 * uf - vf * vf - vf) / ((vf + 1.0) * (uf - vf))).sqrt())
    } else {
        None
    };
    let cubic = if u == v * v * v {
        Some(
            ((3.0 * (vf + 1.0) + ((5.0 * vf + 1.0) * (vf + 1.0)).sqrt())
                / (2.0 * (vf + 1.0) * (vf + 2.0)))
                .sqrt(),
        )
    } else {
        None
    };
    Ok(LevenshteinBounds {
        real_flavor,
        complex_flavor,
        cubic,
    })
}

/// True iff i_max over the full codebook is at least i_max over the subset
/// (up to 1e-9): dropping vectors can only shrink the maximum.
pub fn monotonicity_check(
    cb: &Codebook,
    subset: &[usize],
    options: &CodebookOptions,
) -> Result<bool, CodebookError> {
    let u = cb.num_vectors();
    if let Some(&bad) = subset.iter().find(|&&i| i >= u) {
        return Err(CodebookError::IndexOutOfRange {
            index: bad,
            size: u,
        });
    }
    let mut distinct: Vec<usize> = subset.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(CodebookError::TooFewVectors);
    }
    let full = i_max(cb, options)?;
    let sub = i_max_subset(cb, &distinct);
    Ok(full >= sub - 1e-9)
}

/// Density/scaling regime of a family, classified by the set size M against
/// the attainable growth laws: below K^2 N is sub-quadratic, up to K^2 N + K
/// is quadratic, up to K^3 N^2 + 2 K^2 N + K is cubic, and beyond is
/// super-cubic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    SubQuadratic,
    Quadratic,
    Cubic,
    SuperCubic,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::SubQuadratic => "sub-quadratic",
            Regime::Quadratic => "quadratic",
            Regime::Cubic => "cubic",
            Regime::SuperCubic => "super-cubic",
        };
        write!(f, "{s}")
    }
}

/// Scaling / bound diagnostics for an (M, K, N) family with a known or
/// measured delta_max.
///
/// The ratios compare M against the leading terms K^2 N and K^3 N^2; the
/// asymptotic slack in the scaling laws is not testable at finite size, so
/// the report never turns them into pass/fail verdicts.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    #[serde(rename = "M")]
    pub set_size: u64,
    #[serde(rename = "K")]
    pub flock_size: u64,
    #[serde(rename = "N")]
    pub length: u64,
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<u64>,
    pub delta_max: f64,
    pub delta_opt: Option<f64>,
    /// None when delta_opt vanishes (M = K), where the ratio is undefined.
    pub rho: Option<f64>,
    #[serde(rename = "U")]
    pub num_vectors: u64,
    #[serde(rename = "V")]
    pub dim: u64,
    /// delta_max / (KN), the induced-codebook maximum inner product.
    pub i_max: f64,
    pub welch: f64,
    pub levenshtein: LevenshteinBounds,
    /// M / (K^2 N).
    pub ratio_quadratic: f64,
    /// M / (K^3 N^2).
    pub ratio_cubic: f64,
    /// The rho threshold below which quadratic growth is forced: sqrt(2).
    pub threshold_quadratic: f64,
    /// The rho threshold below which cubic growth is forced: (1+sqrt(5))/2.
    pub threshold_cubic: f64,
    pub regime: Regime,
    pub note: &'static str,
}

const SCALING_NOTE: &str = "diagnostic only: scaling ratios are reported against \
the leading terms; the asymptotic slack makes pass/fail undefined at finite size";

/// Build the diagnostic report for an (M, K, N, delta_max) family.
pub fn scaling_report(
    set_size: u64,
    flock_size: u64,
    length: u64,
    delta_max: f64,
) -> Result<BoundReport, CodebookError> {
    if flock_size < 1 || set_size < flock_size || length < 1 {
        return Err(CodebookError::InvalidParams);
    }
    let u = set_size * length;
    let v = flock_size * length;
    if u < 2 {
        return Err(CodebookError::InvalidParams);
    }
    let opt = delta_opt(set_size, flock_size, length).ok();
    let rho = match opt {
        Some(o) if o > 0.0 => Some(delta_max / o),
        _ => None,
    };
    let kkn = (flock_size as u128) * (flock_size as u128) * (length as u128);
    let kkknn = kkn * (flock_size as u128) * (length as u128);
    let m = set_size as u128;
    let regime = if m < kkn {
        Regime::SubQuadratic
    } else if m <= kkn + flock_size as u128 {
        Regime::Quadratic
    } else if m <= kkknn + 2 * kkn + flock_size as u128 {
        Regime::Cubic
    } else {
        Regime::SuperCubic
    };
    let levenshtein = if u > v {
        levenshtein_bounds(u, v)?
    } else {
        LevenshteinBounds {
            real_flavor: None,
            complex_flavor: None,
            cubic: None,
        }
    };
    Ok(BoundReport {
        set_size,
        flock_size,
        length,
        alphabet: None,
        delta_max,
        delta_opt: opt,
        rho,
        num_vectors: u,
        dim: v,
        i_max: delta_max / v as f64,
        welch: welch_bound(u, v)?,
        levenshtein,
        ratio_quadratic: set_size as f64 / kkn as f64,
        ratio_cubic: set_size as f64 / kkknn as f64,
        threshold_quadratic: std::f64::consts::SQRT_2,
        threshold_cubic: (1.0 + 5.0f64.sqrt()) / 2.0,
        regime,
        note: SCALING_NOTE,
    })
}

impl BoundReport {
    pub fn with_alphabet(mut self, alphabet: u64) -> BoundReport {
        self.alphabet = Some(alphabet);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn csv_header() -> &'static str {
        "M,K,N,A,delta_max,delta_opt,rho,U,V,i_max,welch,lev_complex,lev_cubic,\
         ratio_quadratic,ratio_cubic,regime"
    }

    pub fn csv_row(&self) -> String {
        fn opt(v: Option<f64>) -> String {
            v.map(|x| x.to_string()).unwrap_or_default()
        }
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.set_size,
            self.flock_size,
            self.length,
            self.alphabet.map(|a| a.to_string()).unwrap_or_default(),
            self.delta_max,
            opt(self.delta_opt),
            opt(self.rho),
            self.num_vectors,
            self.dim,
            self.i_max,
            self.welch,
            opt(self.levenshtein.complex_flavor),
            opt(self.levenshtein.cubic),
            self.ratio_quadratic,
            self.ratio_cubic,
            self.regime,
        )
    }
}
