//! The QCSS data model and exhaustive periodic-correlation scans: delta_a,
//! delta_c, delta_max, the lower bound delta_opt, and the tightness factor.
//!
//! Shift convention: a K x N matrix is read out row-major into a single
//! length-KN symbol sequence, and the shift `tau` rotates that flattened
//! sequence (row k continues into row k+1, and the last row wraps to the
//! first). This is the convention under which the construction families
//! attain their correlation bounds; the per-row mod-N shift of
//! [`periodic_corr`] does not compose into it. Profiles scan tau in [0, N).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::characters::RootTable;

/// Default budget for exhaustive scans, in multiply-adds.
pub const DEFAULT_MULTIPLY_ADD_BUDGET: u64 = 10_000_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CorrelationError {
    #[error("rows have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("matrices have mismatched shape or alphabet")]
    ShapeMismatch,
    #[error("shift {tau} out of range (must be below {max})")]
    ShiftOutOfRange { tau: usize, max: usize },
    #[error("exponent {exponent} not below the alphabet modulus {alphabet}")]
    ExponentOutOfRange { exponent: u64, alphabet: u64 },
    #[error("matrix has {got} entries, expected {expected}")]
    WrongEntryCount { expected: usize, got: usize },
    #[error("family members must share one shape and alphabet")]
    MixedFamily,
    #[error("family must contain at least one matrix")]
    EmptyFamily,
    #[error("estimated work {estimated} multiply-adds exceeds the budget {budget}")]
    BudgetExceeded { estimated: u128, budget: u64 },
    #[error("invalid parameters: need M >= K >= 1, N >= 1, M*N > 1")]
    InvalidParams,
    #[error("delta_opt is zero at M = K; the tightness ratio is undefined")]
    DegenerateOptimum,
}

/// One QCSS member: K rows of N unit-root exponents sharing one alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceMatrix {
    rows: usize,
    cols: usize,
    alphabet: u64,
    exponents: Vec<u64>,
    label: String,
}

impl SequenceMatrix {
    /// `exponents` is row-major with every value below `alphabet`; `label`
    /// identifies the construction index that produced the matrix.
    pub fn new(
        rows: usize,
        cols: usize,
        alphabet: u64,
        exponents: Vec<u64>,
        label: impl Into<String>,
    ) -> Result<SequenceMatrix, CorrelationError> {
        if exponents.len() != rows * cols {
            return Err(CorrelationError::WrongEntryCount {
                expected: rows * cols,
                got: exponents.len(),
            });
        }
        if let Some(&e) = exponents.iter().find(|&&e| e >= alphabet) {
            return Err(CorrelationError::ExponentOutOfRange {
                exponent: e,
                alphabet,
            });
        }
        Ok(SequenceMatrix {
            rows,
            cols,
            alphabet,
            exponents,
            label: label.into(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn alphabet(&self) -> u64 {
        self.alphabet
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn row(&self, k: usize) -> &[u64] {
        &self.exponents[k * self.cols..(k + 1) * self.cols]
    }

    pub fn entry(&self, k: usize, t: usize) -> u64 {
        self.exponents[k * self.cols + t]
    }

    /// The flattened row-major read-out that the shift convention acts on.
    pub fn flat(&self) -> &[u64] {
        &self.exponents
    }

    /// The file-format body: K lines of N space-separated decimal exponents.
    pub fn body_text(&self) -> String {
        let mut out = String::new();
        for k in 0..self.rows {
            let line: Vec<String> = self.row(k).iter().map(|e| e.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// A family of M same-shape matrices.
#[derive(Debug, Clone)]
pub struct QcssFamily {
    matrices: Vec<SequenceMatrix>,
}

impl QcssFamily {
    pub fn new(matrices: Vec<SequenceMatrix>) -> Result<QcssFamily, CorrelationError> {
        let first = matrices.first().ok_or(CorrelationError::EmptyFamily)?;
        let (k, n, a) = (first.rows, first.cols, first.alphabet);
        if matrices
            .iter()
            .any(|m| m.rows != k || m.cols != n || m.alphabet != a)
        {
            return Err(CorrelationError::MixedFamily);
        }
        Ok(QcssFamily { matrices })
    }

    pub fn set_size(&self) -> usize {
        self.matrices.len()
    }

    pub fn flock_size(&self) -> usize {
        self.matrices[0].rows
    }

    pub fn length(&self) -> usize {
        self.matrices[0].cols
    }

    pub fn alphabet(&self) -> u64 {
        self.matrices[0].alphabet
    }

    pub fn matrix(&self, m: usize) -> &SequenceMatrix {
        &self.matrices[m]
    }

    pub fn matrices(&self) -> &[SequenceMatrix] {
        &self.matrices
    }
}

/// Periodic correlation of two symbol rows sharing `alphabet`:
/// sum over t of a(t) * conj(b((t + tau) mod N)).
pub fn periodic_corr(
    a: &[u64],
    b: &[u64],
    alphabet: u64,
    tau: usize,
) -> Result<Complex64, CorrelationError> {
    if a.len() != b.len() {
        return Err(CorrelationError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n = a.len();
    if tau >= n {
        return Err(CorrelationError::ShiftOutOfRange { tau, max: n });
    }
    let table = RootTable::new(alphabet);
    let mut acc = Complex64::new(0.0, 0.0);
    for t in 0..n {
        let d = a[t] + alphabet - b[(t + tau) % n];
        acc += table.get(d);
    }
    Ok(acc)
}

/// Periodic correlation of two matrices at shift `tau` in [0, K*N): the
/// correlation of the flattened read-outs, sum over j of
/// s1(j) * conj(s2((j + tau) mod KN)).
pub fn matrix_corr(
    s1: &SequenceMatrix,
    s2: &SequenceMatrix,
    tau: usize,
) -> Result<Complex64, CorrelationError> {
    if s1.rows != s2.rows || s1.cols != s2.cols || s1.alphabet != s2.alphabet {
        return Err(CorrelationError::ShapeMismatch);
    }
    let len = s1.exponents.len();
    if tau >= len {
        return Err(CorrelationError::ShiftOutOfRange { tau, max: len });
    }
    Ok(periodic_corr(&s1.exponents, &s2.exponents, s1.alphabet, tau)
        .expect("flattened lengths match"))
}

/// Options for [`correlation_profile`].
#[derive(Debug, Clone, Copy)]
pub struct ProfileOptions {
    /// Cap on the estimated M*M*N*K*N multiply-adds before scanning.
    pub max_multiply_adds: u64,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            max_multiply_adds: DEFAULT_MULTIPLY_ADD_BUDGET,
        }
    }
}

/// Exhaustive correlation maxima of a family.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CorrelationProfile {
    #[serde(rename = "M")]
    pub set_size: usize,
    #[serde(rename = "K")]
    pub flock_size: usize,
    #[serde(rename = "N")]
    pub length: usize,
    #[serde(rename = "A")]
    pub alphabet: u64,
    /// Max |R(S, S, tau)| over 0 < tau < N.
    pub delta_a: f64,
    /// Max |R(S1, S2, tau)| over ordered pairs m1 != m2, 0 <= tau < N;
    /// reported as 0 with `delta_c_defined = false` when M = 1.
    pub delta_c: f64,
    pub delta_c_defined: bool,
    pub delta_max: f64,
    /// None when the parameters fall outside the bound's domain (M < K).
    pub delta_opt: Option<f64>,
    /// delta_max / delta_opt; None when delta_opt is 0 or undefined.
    pub rho: Option<f64>,
    /// Lexicographically smallest (m1, m2, tau) attaining delta_max.
    pub argmax: [usize; 3],
}

/// Per-worker reduction state: best squared magnitude plus the
/// lexicographically smallest tuple attaining it.
#[derive(Clone, Copy)]
struct Best {
    norm_sq: f64,
    tuple: [usize; 3],
}

impl Best {
    const NONE: Best = Best {
        norm_sq: -1.0,
        tuple: [usize::MAX; 3],
    };

    fn consider(&mut self, norm_sq: f64, tuple: [usize; 3]) {
        if norm_sq > self.norm_sq || (norm_sq == self.norm_sq && tuple < self.tuple) {
            self.norm_sq = norm_sq;
            self.tuple = tuple;
        }
    }

    fn merge(mut self, other: Best) -> Best {
        self.consider(other.norm_sq, other.tuple);
        self
    }
}

/// Exhaustively scan all auto (0 < tau < N) and cross (m1 != m2, 0 <= tau < N)
/// correlations of the family.
///
/// Deterministic: every per-tuple sum accumulates in fixed index order, and
/// the reduction is a pure max with lexicographic tie-break, so the result is
/// identical regardless of how pairs are distributed across workers.
pub fn correlation_profile(
    family: &QcssFamily,
    options: &ProfileOptions,
) -> Result<CorrelationProfile, CorrelationError> {
    let m = family.set_size();
    let k = family.flock_size();
    let n = family.length();
    let len = k * n;
    let alphabet = family.alphabet();

    let estimated = (m as u128) * (m as u128) * (n as u128) * (len as u128);
    if estimated > options.max_multiply_adds as u128 {
        return Err(CorrelationError::BudgetExceeded {
            estimated,
            budget: options.max_multiply_adds,
        });
    }

    // Doubled root table: for exponents x, y < A the index x + A - y lies in
    // (0, 2A), so no reduction is needed in the inner loop.
    let table = RootTable::new(alphabet);
    let doubled_table: Vec<Complex64> = (0..2 * alphabet).map(|e| table.get(e)).collect();
    // Doubled flat sequences remove the (j + tau) % len wrap.
    let doubled: Vec<Vec<u64>> = family
        .matrices()
        .iter()
        .map(|s| {
            let mut v = Vec::with_capacity(2 * len);
            v.extend_from_slice(s.flat());
            v.extend_from_slice(s.flat());
            v
        })
        .collect();

    let scan_pair = |m1: usize, m2: usize, auto: bool, best: &mut Best| {
        let a = family.matrix(m1).flat();
        let b = &doubled[m2];
        let tau_start = if auto { 1 } else { 0 };
        for tau in tau_start..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (&x, &y) in a.iter().zip(&b[tau..tau + len]) {
                acc += doubled_table[(x + alphabet - y) as usize];
            }
            best.consider(acc.norm_sqr(), [m1, m2, tau]);
        }
    };

    // One task per m1; each scans its full row of the ordered-pair grid.
    let (auto_best, cross_best) = (0..m)
        .into_par_iter()
        .map(|m1| {
            let mut auto = Best::NONE;
            let mut cross = Best::NONE;
            for m2 in 0..m {
                if m1 == m2 {
                    scan_pair(m1, m2, true, &mut auto);
                } else {
                    scan_pair(m1, m2, false, &mut cross);
                }
            }
            (auto, cross)
        })
        .reduce(
            || (Best::NONE, Best::NONE),
            |(a1, c1), (a2, c2)| (a1.merge(a2), c1.merge(c2)),
        );

    let delta_a = if auto_best.norm_sq >= 0.0 {
        auto_best.norm_sq.sqrt()
    } else {
        0.0
    };
    let delta_c_defined = m > 1;
    let delta_c = if cross_best.norm_sq >= 0.0 {
        cross_best.norm_sq.sqrt()
    } else {
        0.0
    };

    let mut overall = Best::NONE;
    if auto_best.norm_sq >= 0.0 {
        overall.consider(auto_best.norm_sq, auto_best.tuple);
    }
    if cross_best.norm_sq >= 0.0 {
        overall.consider(cross_best.norm_sq, cross_best.tuple);
    }
    let (delta_max, argmax) = if overall.norm_sq >= 0.0 {
        (overall.norm_sq.sqrt(), overall.tuple)
    } else {
        (0.0, [0, 0, 0])
    };

    let delta_opt = delta_opt(m as u64, k as u64, n as u64).ok();
    let rho = match delta_opt {
        Some(d) if d > 0.0 => Some(delta_max / d),
        _ => None,
    };

    Ok(CorrelationProfile {
        set_size: m,
        flock_size: k,
        length: n,
        alphabet,
        delta_a,
        delta_c,
        delta_c_defined,
        delta_max,
        delta_opt,
        rho,
        argmax,
    })
}

/// The fundamental lower bound KN * sqrt((M/K - 1) / (MN - 1)) on delta_max.
pub fn delta_opt(m: u64, k: u64, n: u64) -> Result<f64, CorrelationError> {
    if k < 1 || m < k || n < 1 || m * n <= 1 {
        return Err(CorrelationError::InvalidParams);
    }
    let (m, k, n) = (m as f64, k as f64, n as f64);
    Ok(k * n * ((m / k - 1.0) / (m * n - 1.0)).sqrt())
}

/// The tightness factor rho = delta_max / delta_opt.
pub fn tightness_rho(delta_max: f64, m: u64, k: u64, n: u64) -> Result<f64, CorrelationError> {
    let opt = delta_opt(m, k, n)?;
    if opt == 0.0 {
        return Err(CorrelationError::DegenerateOptimum);
    }
    Ok(delta_max / opt)
}
