//! Generators for the four QCSS families over F_{p^{2n}}: additive-character
//! families with cubic or quadratic phase, and mixed additive/multiplicative
//! families with or without the free additive twist.
//!
//! All families are indexed lazily; a family is only materialized on request
//! and under an explicit cap, because the cubic family reaches set sizes in
//! the tens of millions at desk-scale parameters.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::characters::{
    combine_exponents, AdditiveCharacter, CharacterError, MultiplicativeCharacter, RootTable,
    UnitRootExponent, ZeroConvention,
};
use crate::correlation::{CorrelationError, QcssFamily, SequenceMatrix};
use crate::field::{FieldElement, FieldSpec};
use crate::textfmt::{format_element, parse_element, ParseError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("the field degree must be even (the constructions live in F_{{p^2n}})")]
    OddExtensionDegree,
    #[error("Q = {q_divisor} must divide {group} with 1 < Q < {group}")]
    InvalidDivisor { q_divisor: u64, group: u64 },
    #[error("characteristic {p} is below the required minimum {required}")]
    CharacteristicTooSmall { p: u64, required: u64 },
    #[error("the additive character multiplier must be nonzero")]
    TrivialCharacter,
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("index has the wrong form for this construction: {0}")]
    BadIndex(String),
    #[error(transparent)]
    IndexParse(#[from] ParseError),
    #[error("family has {set_size} members, above the materialization cap {cap}")]
    FamilyTooLarge { set_size: u64, cap: u64 },
    #[error("shift {tau} out of range (must be below {max})")]
    ShiftOutOfRange { tau: usize, max: usize },
    #[error(transparent)]
    Matrix(#[from] CorrelationError),
    #[error("malformed matrix file: {0}")]
    BadMatrixFile(String),
}

/// Additive-phase family flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdditiveVariant {
    /// Cubic phase, free alpha and beta: set size q^2 * Q.
    Cubic,
    /// Quadratic phase (alpha pinned to 0), free beta: set size q * Q.
    Quadratic,
}

/// Mixed-character family flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixedVariant {
    /// Free additive twist lambda: set size (Delta-1) * Q * q, alphabet Delta*p.
    Full,
    /// lambda pinned to 0: set size (Delta-1) * Q, alphabet Delta.
    LambdaZero,
}

/// Parameters of an additive-character family.
#[derive(Debug, Clone)]
pub struct AdditiveParams {
    field: Arc<FieldSpec>,
    variant: AdditiveVariant,
    subgroup_order: u64,
    chi: AdditiveCharacter,
}

/// Parameters of a mixed-character family. The multiplicative character is
/// carried with the value-1-at-zero extension used by the entry formula.
#[derive(Debug, Clone)]
pub struct MixedParams {
    field: Arc<FieldSpec>,
    variant: MixedVariant,
    subgroup_order: u64,
    psi: MultiplicativeCharacter,
    chi: AdditiveCharacter,
}

fn validate_common(
    field: &Arc<FieldSpec>,
    subgroup_order: u64,
    multiplier: FieldElement,
) -> Result<(), ConstructionError> {
    if !field.degree().is_multiple_of(2) {
        return Err(ConstructionError::OddExtensionDegree);
    }
    let group = field.order() - 1;
    if subgroup_order <= 1 || subgroup_order >= group || !group.is_multiple_of(subgroup_order) {
        return Err(ConstructionError::InvalidDivisor {
            q_divisor: subgroup_order,
            group,
        });
    }
    if multiplier == FieldElement::ZERO {
        return Err(ConstructionError::TrivialCharacter);
    }
    Ok(())
}

impl AdditiveParams {
    pub fn new(
        field: Arc<FieldSpec>,
        variant: AdditiveVariant,
        subgroup_order: u64,
    ) -> Result<AdditiveParams, ConstructionError> {
        AdditiveParams::with_multiplier(field, variant, subgroup_order, FieldElement::ONE)
    }

    pub fn with_multiplier(
        field: Arc<FieldSpec>,
        variant: AdditiveVariant,
        subgroup_order: u64,
        multiplier: FieldElement,
    ) -> Result<AdditiveParams, ConstructionError> {
        validate_common(&field, subgroup_order, multiplier)?;
        let required = match variant {
            AdditiveVariant::Cubic => 5,
            AdditiveVariant::Quadratic => 3,
        };
        if field.p() < required {
            return Err(ConstructionError::CharacteristicTooSmall {
                p: field.p(),
                required,
            });
        }
        let chi = AdditiveCharacter::new(field.clone(), multiplier);
        Ok(AdditiveParams {
            field,
            variant,
            subgroup_order,
            chi,
        })
    }
}

impl MixedParams {
    pub fn new(
        field: Arc<FieldSpec>,
        variant: MixedVariant,
        subgroup_order: u64,
        character_order: u64,
    ) -> Result<MixedParams, ConstructionError> {
        MixedParams::with_multiplier(
            field,
            variant,
            subgroup_order,
            character_order,
            FieldElement::ONE,
        )
    }

    pub fn with_multiplier(
        field: Arc<FieldSpec>,
        variant: MixedVariant,
        subgroup_order: u64,
        character_order: u64,
        multiplier: FieldElement,
    ) -> Result<MixedParams, ConstructionError> {
        validate_common(&field, subgroup_order, multiplier)?;
        let psi = MultiplicativeCharacter::new(field.clone(), character_order, ZeroConvention::One)?;
        let chi = AdditiveCharacter::new(field.clone(), multiplier);
        Ok(MixedParams {
            field,
            variant,
            subgroup_order,
            psi,
            chi,
        })
    }
}

/// The index of one family member.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixIndex {
    /// Additive families: (alpha, beta, eta) with eta in the order-Q subgroup.
    Additive {
        alpha: FieldElement,
        beta: FieldElement,
        eta: FieldElement,
    },
    /// Mixed families: (r, eta, lambda) with 1 <= r < Delta.
    Mixed {
        power: u64,
        eta: FieldElement,
        lambda: FieldElement,
    },
}

/// Parameter summary of a family: counts, the proven correlation bound, and
/// the symbol alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExpectedParameters {
    #[serde(rename = "M")]
    pub set_size: u64,
    #[serde(rename = "K")]
    pub flock_size: u64,
    #[serde(rename = "N")]
    pub length: u64,
    pub delta_bound: u64,
    pub alphabet: u64,
}

/// One of the four family generators, with a uniform interface.
#[derive(Debug, Clone)]
pub enum Construction {
    Additive(AdditiveParams),
    Mixed(MixedParams),
}

impl Construction {
    pub fn cubic(
        field: Arc<FieldSpec>,
        subgroup_order: u64,
    ) -> Result<Construction, ConstructionError> {
        Ok(Construction::Additive(AdditiveParams::new(
            field,
            AdditiveVariant::Cubic,
            subgroup_order,
        )?))
    }

    pub fn quadratic(
        field: Arc<FieldSpec>,
        subgroup_order: u64,
    ) -> Result<Construction, ConstructionError> {
        Ok(Construction::Additive(AdditiveParams::new(
            field,
            AdditiveVariant::Quadratic,
            subgroup_order,
        )?))
    }

    pub fn mixed_full(
        field: Arc<FieldSpec>,
        subgroup_order: u64,
        character_order: u64,
    ) -> Result<Construction, ConstructionError> {
        Ok(Construction::Mixed(MixedParams::new(
            field,
            MixedVariant::Full,
            subgroup_order,
            character_order,
        )?))
    }

    pub fn mixed_lambda_zero(
        field: Arc<FieldSpec>,
        subgroup_order: u64,
        character_order: u64,
    ) -> Result<Construction, ConstructionError> {
        Ok(Construction::Mixed(MixedParams::new(
            field,
            MixedVariant::LambdaZero,
            subgroup_order,
            character_order,
        )?))
    }

    /// Replace the additive-character multiplier (default 1).
    pub fn set_multiplier(self, multiplier: FieldElement) -> Result<Construction, ConstructionError> {
        match self {
            Construction::Additive(p) => Ok(Construction::Additive(
                AdditiveParams::with_multiplier(p.field, p.variant, p.subgroup_order, multiplier)?,
            )),
            Construction::Mixed(p) => Ok(Construction::Mixed(MixedParams::with_multiplier(
                p.field,
                p.variant,
                p.subgroup_order,
                p.psi.order(),
                multiplier,
            )?)),
        }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        match self {
            Construction::Additive(p) => &p.field,
            Construction::Mixed(p) => &p.field,
        }
    }

    pub fn chi_multiplier(&self) -> FieldElement {
        match self {
            Construction::Additive(p) => p.chi.multiplier(),
            Construction::Mixed(p) => p.chi.multiplier(),
        }
    }

    /// Q, the flock count and order of the indexing subgroup.
    pub fn subgroup_order(&self) -> u64 {
        match self {
            Construction::Additive(p) => p.subgroup_order,
            Construction::Mixed(p) => p.subgroup_order,
        }
    }

    /// Delta, for the mixed families.
    pub fn character_order(&self) -> Option<u64> {
        match self {
            Construction::Additive(_) => None,
            Construction::Mixed(p) => Some(p.psi.order()),
        }
    }

    /// n with the field being F_{p^{2n}}.
    pub fn half_degree(&self) -> u32 {
        self.field().degree() / 2
    }

    /// Short name: cubic, quadratic, mixed, or mixed0.
    pub fn name(&self) -> &'static str {
        match self {
            Construction::Additive(p) => match p.variant {
                AdditiveVariant::Cubic => "cubic",
                AdditiveVariant::Quadratic => "quadratic",
            },
            Construction::Mixed(p) => match p.variant {
                MixedVariant::Full => "mixed",
                MixedVariant::LambdaZero => "mixed0",
            },
        }
    }

    /// (M, K, N, delta bound, alphabet) for these parameters.
    pub fn expected_parameters(&self) -> ExpectedParameters {
        let q = self.field().order();
        let qd = self.subgroup_order();
        let n_len = (q - 1) / qd;
        let p = self.field().p();
        let pn = p.pow(self.half_degree());
        match self {
            Construction::Additive(params) => match params.variant {
                AdditiveVariant::Cubic => ExpectedParameters {
                    set_size: q * q * qd,
                    flock_size: qd,
                    length: n_len,
                    delta_bound: 2 * pn + 1,
                    alphabet: p,
                },
                AdditiveVariant::Quadratic => ExpectedParameters {
                    set_size: q * qd,
                    flock_size: qd,
                    length: n_len,
                    delta_bound: pn + 1,
                    alphabet: p,
                },
            },
            Construction::Mixed(params) => {
                let delta = params.psi.order();
                match params.variant {
                    MixedVariant::Full => ExpectedParameters {
                        set_size: (delta - 1) * qd * q,
                        flock_size: qd,
                        length: n_len,
                        delta_bound: 2 * pn + 3,
                        alphabet: delta * p,
                    },
                    MixedVariant::LambdaZero => ExpectedParameters {
                        set_size: (delta - 1) * qd,
                        flock_size: qd,
                        length: n_len,
                        delta_bound: pn + 3,
                        alphabet: delta,
                    },
                }
            }
        }
    }

    /// The j-th member of the order-Q subgroup, g^{j (q-1)/Q}.
    pub fn subgroup_element(&self, j: u64) -> FieldElement {
        let q1 = self.field().order() - 1;
        self.field().generator_pow(j % self.subgroup_order() * (q1 / self.subgroup_order()))
    }

    fn eta_in_subgroup(&self, eta: FieldElement) -> bool {
        let field = self.field();
        match field.discrete_log(eta) {
            Ok(k) => k % ((field.order() - 1) / self.subgroup_order()) == 0,
            Err(_) => false,
        }
    }

    /// Deterministic enumeration of all M indices: additive families order by
    /// (alpha code, beta code, eta = g^{jN} by j); mixed families by
    /// (r, eta by j, lambda code).
    pub fn enumerate_indices(&self) -> Box<dyn Iterator<Item = MatrixIndex> + '_> {
        let q = self.field().order();
        let qd = self.subgroup_order();
        match self {
            Construction::Additive(params) => {
                let alphas: Box<dyn Iterator<Item = u64>> = match params.variant {
                    AdditiveVariant::Cubic => Box::new(0..q),
                    AdditiveVariant::Quadratic => Box::new(std::iter::once(0)),
                };
                Box::new(alphas.flat_map(move |a| {
                    (0..q).flat_map(move |b| {
                        (0..qd).map(move |j| MatrixIndex::Additive {
                            alpha: FieldElement(a),
                            beta: FieldElement(b),
                            eta: self.subgroup_element(j),
                        })
                    })
                }))
            }
            Construction::Mixed(params) => {
                let delta = params.psi.order();
                let lambdas_per = match params.variant {
                    MixedVariant::Full => q,
                    MixedVariant::LambdaZero => 1,
                };
                Box::new((1..delta).flat_map(move |r| {
                    (0..qd).flat_map(move |j| {
                        (0..lambdas_per).map(move |l| MatrixIndex::Mixed {
                            power: r,
                            eta: self.subgroup_element(j),
                            lambda: FieldElement(l),
                        })
                    })
                }))
            }
        }
    }

    pub fn validate_index(&self, idx: &MatrixIndex) -> Result<(), ConstructionError> {
        let q = self.field().order();
        match (self, idx) {
            (Construction::Additive(params), MatrixIndex::Additive { alpha, beta, eta }) => {
                if alpha.code() >= q || beta.code() >= q || eta.code() >= q {
                    return Err(ConstructionError::IndexOutOfRange(
                        "element code outside the field".into(),
                    ));
                }
                if params.variant == AdditiveVariant::Quadratic && *alpha != FieldElement::ZERO {
                    return Err(ConstructionError::IndexOutOfRange(
                        "alpha must be 0 for the quadratic family".into(),
                    ));
                }
                if !self.eta_in_subgroup(*eta) {
                    return Err(ConstructionError::IndexOutOfRange(format!(
                        "eta = {} is not in the order-{} subgroup",
                        format_element(self.field(), *eta),
                        self.subgroup_order()
                    )));
                }
                Ok(())
            }
            (Construction::Mixed(params), MatrixIndex::Mixed { power, eta, lambda }) => {
                let delta = params.psi.order();
                if *power == 0 || *power >= delta {
                    return Err(ConstructionError::IndexOutOfRange(format!(
                        "power r = {power} must satisfy 1 <= r <= {}",
                        delta - 1
                    )));
                }
                if eta.code() >= q || lambda.code() >= q {
                    return Err(ConstructionError::IndexOutOfRange(
                        "element code outside the field".into(),
                    ));
                }
                if params.variant == MixedVariant::LambdaZero && *lambda != FieldElement::ZERO {
                    return Err(ConstructionError::IndexOutOfRange(
                        "lambda must be 0 for this family".into(),
                    ));
                }
                if !self.eta_in_subgroup(*eta) {
                    return Err(ConstructionError::IndexOutOfRange(format!(
                        "eta = {} is not in the order-{} subgroup",
                        format_element(self.field(), *eta),
                        self.subgroup_order()
                    )));
                }
                Ok(())
            }
            _ => Err(ConstructionError::BadIndex(
                "index kind does not match the construction".into(),
            )),
        }
    }

    /// Canonical comma-separated index string (additive `alpha,beta,eta`,
    /// mixed `r,eta,lambda`) with elements in alpha-form.
    pub fn index_string(&self, idx: &MatrixIndex) -> String {
        let f = self.field();
        match idx {
            MatrixIndex::Additive { alpha, beta, eta } => format!(
                "{},{},{}",
                format_element(f, *alpha),
                format_element(f, *beta),
                format_element(f, *eta)
            ),
            MatrixIndex::Mixed { power, eta, lambda } => format!(
                "{},{},{}",
                power,
                format_element(f, *eta),
                format_element(f, *lambda)
            ),
        }
    }

    /// Parse an index string; `;` is accepted as a separator alias of `,`.
    pub fn parse_index(&self, s: &str) -> Result<MatrixIndex, ConstructionError> {
        let normalized = s.replace(';', ",");
        let parts: Vec<&str> = normalized.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(ConstructionError::BadIndex(format!(
                "expected three comma-separated components, got `{s}`"
            )));
        }
        let f = self.field();
        let idx = match self {
            Construction::Additive(_) => MatrixIndex::Additive {
                alpha: parse_element(parts[0], f)?,
                beta: parse_element(parts[1], f)?,
                eta: parse_element(parts[2], f)?,
            },
            Construction::Mixed(_) => MatrixIndex::Mixed {
                power: parts[0]
                    .parse::<u64>()
                    .map_err(|_| ConstructionError::BadIndex(format!("bad power `{}`", parts[0])))?,
                eta: parse_element(parts[1], f)?,
                lambda: parse_element(parts[2], f)?,
            },
        };
        self.validate_index(&idx)?;
        Ok(idx)
    }

    /// Materialize one member. Entries are exact unit-root exponents; the
    /// exponent of g is looked up by antilog, never by repeated multiplication.
    pub fn build_matrix(&self, idx: &MatrixIndex) -> Result<SequenceMatrix, ConstructionError> {
        self.validate_index(idx)?;
        let field = self.field();
        let q1 = field.order() - 1;
        let k_rows = self.subgroup_order() as usize;
        let n_cols = (q1 / self.subgroup_order()) as usize;
        let label = self.index_string(idx);
        let mut exponents = Vec::with_capacity((q1) as usize);
        match (self, idx) {
            (Construction::Additive(params), MatrixIndex::Additive { alpha, beta, eta }) => {
                for y in 0..q1 {
                    let g3 = field.generator_pow(3 * y);
                    let g2 = field.generator_pow(2 * y);
                    let g1 = field.generator_pow(y);
                    let arg = field.add(
                        field.add(field.mul(*alpha, g3), field.mul(*beta, g2)),
                        field.mul(*eta, g1),
                    );
                    exponents.push(params.chi.raw_exponent(arg));
                }
                Ok(SequenceMatrix::new(
                    k_rows,
                    n_cols,
                    field.p(),
                    exponents,
                    label,
                )?)
            }
            (Construction::Mixed(params), MatrixIndex::Mixed { power, eta, lambda }) => {
                let delta = params.psi.order();
                for y in 0..q1 {
                    let gy = field.generator_pow(y);
                    let u = field.add(gy, *eta);
                    let pe = params
                        .psi
                        .exponent_pow(u, *power)
                        .expect("value-1-at-zero extension never vanishes");
                    match params.variant {
                        MixedVariant::LambdaZero => exponents.push(pe.exponent()),
                        MixedVariant::Full => {
                            let ce = UnitRootExponent::new(
                                params.chi.raw_exponent(field.mul(*lambda, gy)),
                                field.p(),
                            );
                            let combined = combine_exponents(pe, ce)?;
                            exponents.push(combined.exponent());
                        }
                    }
                }
                let alphabet = match params.variant {
                    MixedVariant::LambdaZero => delta,
                    MixedVariant::Full => delta * field.p(),
                };
                Ok(SequenceMatrix::new(k_rows, n_cols, alphabet, exponents, label)?)
            }
            _ => Err(ConstructionError::BadIndex(
                "index kind does not match the construction".into(),
            )),
        }
    }

    /// Materialize the whole family in enumeration order.
    pub fn build_family(&self, cap: u64) -> Result<QcssFamily, ConstructionError> {
        let set_size = self.expected_parameters().set_size;
        if set_size > cap {
            return Err(ConstructionError::FamilyTooLarge { set_size, cap });
        }
        let matrices: Result<Vec<_>, _> = self
            .enumerate_indices()
            .map(|idx| self.build_matrix(&idx))
            .collect();
        Ok(QcssFamily::new(matrices?)?)
    }

    /// The reduced character-sum form of the correlation at shift `tau`,
    /// evaluated directly over the field. This is an independent code path
    /// from [`matrix_corr`](crate::correlation::matrix_corr) and must agree
    /// with it on every index pair and shift.
    pub fn correlation_via_charsum(
        &self,
        idx1: &MatrixIndex,
        idx2: &MatrixIndex,
        tau: usize,
    ) -> Result<Complex64, ConstructionError> {
        self.validate_index(idx1)?;
        self.validate_index(idx2)?;
        let field = self.field();
        let q1 = field.order() - 1;
        let n_len = (q1 / self.subgroup_order()) as usize;
        if tau >= n_len {
            return Err(ConstructionError::ShiftOutOfRange { tau, max: n_len });
        }
        match (self, idx1, idx2) {
            (
                Construction::Additive(params),
                MatrixIndex::Additive {
                    alpha: a1,
                    beta: b1,
                    eta: e1,
                },
                MatrixIndex::Additive {
                    alpha: a2,
                    beta: b2,
                    eta: e2,
                },
            ) => {
                // sum over z in F* of chi(c3 z^3 + c2 z^2 + c1 z) with
                // c3 = a1 - a2 g^{3 tau}, c2 = b1 - b2 g^{2 tau}, c1 = e1 - e2 g^tau
                let tau = tau as u64;
                let c3 = field.sub(*a1, field.mul(*a2, field.generator_pow(3 * tau)));
                let c2 = field.sub(*b1, field.mul(*b2, field.generator_pow(2 * tau)));
                let c1 = field.sub(*e1, field.mul(*e2, field.generator_pow(tau)));
                let table = RootTable::new(field.p());
                let mut acc = Complex64::new(0.0, 0.0);
                for z in field.nonzero_elements() {
                    let z2 = field.mul(z, z);
                    let z3 = field.mul(z2, z);
                    let arg = field.add(
                        field.add(field.mul(c3, z3), field.mul(c2, z2)),
                        field.mul(c1, z),
                    );
                    acc += table.get(params.chi.raw_exponent(arg));
                }
                Ok(acc)
            }
            (
                Construction::Mixed(params),
                MatrixIndex::Mixed {
                    power: r1,
                    eta: e1,
                    lambda: l1,
                },
                MatrixIndex::Mixed {
                    power: r2,
                    eta: e2,
                    lambda: l2,
                },
            ) => {
                // sum over z in F* of
                //   psi1^{r1}(z + e1) * psi1^{Delta - r2}(g^tau z + e2) * chi((l1 - l2 g^tau) z)
                // The two psi1 factors are evaluated separately: psi1 is 1 at 0,
                // so folding them into one psi1 of the product would change the
                // value at the isolated zeros of either factor.
                let delta = params.psi.order();
                let gt = field.generator_pow(tau as u64);
                let c = field.sub(*l1, field.mul(*l2, gt));
                let table = RootTable::new(delta * field.p());
                let mut acc = Complex64::new(0.0, 0.0);
                for z in field.nonzero_elements() {
                    let u1 = field.add(z, *e1);
                    let u2 = field.add(field.mul(gt, z), *e2);
                    let p1 = params.psi.exponent_pow(u1, *r1).expect("psi1 never vanishes");
                    let p2 = params
                        .psi
                        .exponent_pow(u2, delta - *r2)
                        .expect("psi1 never vanishes");
                    let ce = UnitRootExponent::new(params.chi.raw_exponent(field.mul(c, z)), field.p());
                    let combined = combine_exponents(p1.times(p2)?, ce)?;
                    acc += table.value(combined);
                }
                Ok(acc)
            }
            _ => Err(ConstructionError::BadIndex(
                "index kind does not match the construction".into(),
            )),
        }
    }

    /// Full matrix-file text: a `# qcss v1 ...` header line followed by the
    /// bit-exact exponent body.
    pub fn matrix_file_text(&self, matrix: &SequenceMatrix) -> String {
        let mut header = format!(
            "# qcss v1 construction={} p={} n={} Q={}",
            self.name(),
            self.field().p(),
            self.half_degree(),
            self.subgroup_order()
        );
        if let Some(delta) = self.character_order() {
            header.push_str(&format!(" Delta={delta}"));
        }
        header.push_str(&format!(" A={} index={}", matrix.alphabet(), matrix.label()));
        format!("{header}\n{}", matrix.body_text())
    }
}

/// Header fields of a parsed matrix file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFileHeader {
    pub construction: String,
    pub p: u64,
    pub n: u32,
    pub subgroup_order: u64,
    pub character_order: Option<u64>,
    pub alphabet: u64,
    pub index: String,
}

/// Parse a matrix file produced by [`Construction::matrix_file_text`].
pub fn parse_matrix_file(text: &str) -> Result<(MatrixFileHeader, SequenceMatrix), ConstructionError> {
    let mut lines = text.lines();
    let header_line = lines
        .next()
        .ok_or_else(|| ConstructionError::BadMatrixFile("empty file".into()))?;
    let rest = header_line
        .strip_prefix("# qcss v1 ")
        .ok_or_else(|| ConstructionError::BadMatrixFile("missing `# qcss v1` header".into()))?;
    let mut fields = std::collections::HashMap::new();
    for token in rest.split_whitespace() {
        let (k, v) = token
            .split_once('=')
            .ok_or_else(|| ConstructionError::BadMatrixFile(format!("bad header token `{token}`")))?;
        fields.insert(k.to_string(), v.to_string());
    }
    let get = |k: &str| {
        fields
            .get(k)
            .cloned()
            .ok_or_else(|| ConstructionError::BadMatrixFile(format!("missing header field `{k}`")))
    };
    let parse_u64 = |s: String| {
        s.parse::<u64>()
            .map_err(|_| ConstructionError::BadMatrixFile(format!("bad number `{s}`")))
    };
    let header = MatrixFileHeader {
        construction: get("construction")?,
        p: parse_u64(get("p")?)?,
        n: parse_u64(get("n")?)? as u32,
        subgroup_order: parse_u64(get("Q")?)?,
        character_order: match fields.get("Delta") {
            Some(s) => Some(parse_u64(s.clone())?),
            None => None,
        },
        alphabet: parse_u64(get("A")?)?,
        index: get("index")?,
    };
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let row: Result<Vec<u64>, _> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| ConstructionError::BadMatrixFile(format!("bad exponent `{t}`")))
            })
            .collect();
        rows.push(row?);
    }
    let k = rows.len();
    let n = rows.first().map(Vec::len).unwrap_or(0);
    if k == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(ConstructionError::BadMatrixFile("ragged or empty body".into()));
    }
    let exponents = rows.concat();
    let matrix = SequenceMatrix::new(k, n, header.alphabet, exponents, header.index.clone())?;
    Ok((header, matrix))
}
