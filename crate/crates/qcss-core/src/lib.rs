//! Quasi-complementary sequence sets (QCSSs) over finite fields.
//!
//! A QCSS is a set of M matrices, each K rows of N unit-magnitude symbols,
//! whose periodic auto- and cross-correlation sums all stay small. This crate
//! builds the four character-based families that attain the quadratic
//! (M = K^2 N + K) and cubic (M = K^3 N^2 + 2 K^2 N + K) growth laws,
//! verifies their correlation bounds by exhaustive scan, and checks the
//! geometry of the induced unit-norm codebooks against the Welch and
//! Levenshtein bounds.
//!
//! Modules:
//!
//! - [`field`]: exact F_{p^m} arithmetic with log/antilog tables and trace
//! - [`characters`]: additive and multiplicative characters, exponent algebra
//! - [`correlation`]: sequence matrices, exhaustive delta scans, delta_opt, rho
//! - [`constructions`]: the four family generators and their charsum route
//! - [`codebook`]: induced codebooks, i_max, Welch/Levenshtein, scaling reports
//! - [`charsum`]: brute-force character sums and the square-root-bound audit
//! - [`textfmt`]: the compact element/polynomial text syntax
//!
//! Build the 18-member quadratic family over F_9, scan it exhaustively, and
//! check the bound and the induced-codebook identity:
//!
//! ```
//! use std::sync::Arc;
//! use qcss_core::{
//!     correlation_profile, i_max, induce_codebook, CodebookOptions, Construction,
//!     FieldSpec, ProfileOptions,
//! };
//!
//! let field = Arc::new(FieldSpec::new(3, 2)?);
//! let family = Construction::quadratic(field, 2)?.build_family(100)?;
//! let profile = correlation_profile(&family, &ProfileOptions::default())?;
//! assert_eq!(profile.set_size, 18);
//! assert!(profile.delta_max <= 4.0 + 1e-6);
//!
//! let codebook = induce_codebook(&family, &CodebookOptions::default())?;
//! let observed = i_max(&codebook, &CodebookOptions::default())?;
//! assert!((observed * 8.0 - profile.delta_max).abs() < 1e-6);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod characters;
pub mod charsum;
pub mod codebook;
pub mod constructions;
pub mod correlation;
pub mod field;
pub mod textfmt;

pub use characters::{
    combine_exponents, AdditiveCharacter, CharacterError, MultiplicativeCharacter, RootTable,
    UnitRootExponent, ZeroConvention,
};
pub use charsum::{
    additive_charsum, gauss_sum, mixed_charsum, weil_audit, CharsumError, PolynomialOverField,
    WeilAuditReport,
};
pub use codebook::{
    i_max, induce_codebook, levenshtein_bounds, monotonicity_check, scaling_report, welch_bound,
    BoundReport, Codebook, CodebookError, CodebookOptions, LevenshteinBounds, Provenance, Regime,
};
pub use constructions::{
    parse_matrix_file, AdditiveParams, AdditiveVariant, Construction, ConstructionError,
    ExpectedParameters, MatrixFileHeader, MatrixIndex, MixedParams, MixedVariant,
};
pub use correlation::{
    correlation_profile, delta_opt, matrix_corr, periodic_corr, tightness_rho, CorrelationError,
    CorrelationProfile, ProfileOptions, QcssFamily, SequenceMatrix, DEFAULT_MULTIPLY_ADD_BUDGET,
};
pub use field::{divisors, FieldBuilder, FieldDescription, FieldElement, FieldError, FieldSpec};
