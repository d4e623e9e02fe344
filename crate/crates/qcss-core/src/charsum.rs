//! Brute-force character sums over whole fields, and a randomized audit of
//! the square-root cancellation bounds they obey.
//!
//! Everything here is an independent oracle: sums are evaluated term by term
//! over the full field, in a fixed order (nonzero elements in antilog order,
//! then 0 last), with no algebraic shortcuts.

use std::sync::Arc;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use thiserror::Error;

use crate::characters::{AdditiveCharacter, MultiplicativeCharacter, RootTable, ZeroConvention};
use crate::field::{divisors, FieldElement, FieldSpec};
use crate::textfmt::format_element;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CharsumError {
    #[error("power {power} out of range 1..={max}")]
    PowerOutOfRange { power: u64, max: u64 },
    #[error("the additive character must be non-trivial here")]
    TrivialCharacter,
    #[error("inputs belong to different fields")]
    FieldMismatch,
    #[error("audit trial count must be at least 1")]
    NoTrials,
    #[error("character sum exceeded its bound: |sum| = {magnitude}, bound = {bound}, at {polynomial}")]
    BoundViolated {
        magnitude: f64,
        bound: f64,
        polynomial: String,
    },
}

/// A polynomial with coefficients in F_{p^m}, constant-first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialOverField {
    field: Arc<FieldSpec>,
    coeffs: Vec<FieldElement>,
}

impl PolynomialOverField {
    /// Trailing zero coefficients are trimmed; the zero polynomial has an
    /// empty coefficient list and no degree.
    pub fn new(field: Arc<FieldSpec>, mut coeffs: Vec<FieldElement>) -> PolynomialOverField {
        while coeffs.last() == Some(&FieldElement::ZERO) {
            coeffs.pop();
        }
        PolynomialOverField { field, coeffs }
    }

    /// Convenience: coefficients given as integer codes.
    pub fn from_codes(field: Arc<FieldSpec>, codes: &[u64]) -> PolynomialOverField {
        let coeffs = codes.iter().map(|&c| FieldElement(c)).collect();
        PolynomialOverField::new(field, coeffs)
    }

    pub fn zero(field: Arc<FieldSpec>) -> PolynomialOverField {
        PolynomialOverField::new(field, Vec::new())
    }

    /// The monomial z.
    pub fn identity(field: Arc<FieldSpec>) -> PolynomialOverField {
        PolynomialOverField::from_codes(field, &[0, 1])
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> PolynomialOverField {
        let f = &self.field;
        let p = f.p();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| {
                let scale = FieldElement(i as u64 % p);
                f.mul(scale, c)
            })
            .collect();
        PolynomialOverField::new(f.clone(), coeffs)
    }

    pub fn mul(&self, other: &PolynomialOverField) -> PolynomialOverField {
        let f = &self.field;
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return PolynomialOverField::zero(f.clone());
        }
        let mut coeffs = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        PolynomialOverField::new(f.clone(), coeffs)
    }

    pub fn pow(&self, e: u32) -> PolynomialOverField {
        let one = PolynomialOverField::from_codes(self.field.clone(), &[1]);
        let mut acc = one;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// True iff the polynomial is nonzero and has no repeated roots in the
    /// algebraic closure (gcd with its derivative is constant). A squarefree
    /// polynomial of degree d has exactly d distinct roots, and for d >= 1 it
    /// is never a proper power up to constants.
    pub fn is_squarefree(&self) -> bool {
        let d = match self.degree() {
            None => return false,
            Some(d) => d,
        };
        if d == 0 {
            return true;
        }
        let g = poly_gcd(self.clone(), self.derivative());
        g.degree() == Some(0)
    }

    /// Render with variable z, highest power first; extension coefficients
    /// are parenthesized alpha-form.
    pub fn display(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == FieldElement::ZERO {
                continue;
            }
            let cs = format_element(&self.field, c);
            let coeff = if cs.contains('+') { format!("({cs})") } else { cs };
            let part = match i {
                0 => coeff,
                1 if coeff == "1" => "z".to_string(),
                1 => format!("{coeff}z"),
                _ if coeff == "1" => format!("z{i}"),
                _ => format!("{coeff}z{i}"),
            };
            parts.push(part);
        }
        parts.join("+")
    }
}

fn poly_gcd(mut a: PolynomialOverField, mut b: PolynomialOverField) -> PolynomialOverField {
    let field = a.field.clone();
    loop {
        let db = match b.degree() {
            None => return a,
            Some(d) => d,
        };
        let da = match a.degree() {
            None => return b,
            Some(d) => d,
        };
        if da < db {
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        // a -= lead(a)/lead(b) * z^{da-db} * b
        let factor = field
            .mul(a.coeffs[da], field.inv(b.coeffs[db]).expect("nonzero lead"));
        let mut coeffs = a.coeffs.clone();
        for i in 0..=db {
            let sub = field.mul(factor, b.coeffs[i]);
            coeffs[da - db + i] = field.sub(coeffs[da - db + i], sub);
        }
        a = PolynomialOverField::new(field.clone(), coeffs);
        if a.degree() >= Some(da) {
            // leading term must have cancelled
            unreachable!("gcd reduction failed to reduce the degree");
        }
    }
}

/// Sum over all z in F_q of chi(h(z)), by full iteration.
/// A trivial chi (multiplier 0) is allowed and simply gives q.
pub fn additive_charsum(chi: &AdditiveCharacter, h: &PolynomialOverField) -> Complex64 {
    let field = chi.field();
    debug_assert!(Arc::ptr_eq(field, h.field()) || field.description() == h.field().description());
    let table = RootTable::new(field.p());
    let mut acc = Complex64::new(0.0, 0.0);
    for z in field.nonzero_elements() {
        acc += table.get(chi.raw_exponent(h.eval(z)));
    }
    acc + table.get(chi.raw_exponent(h.eval(FieldElement::ZERO)))
}

/// Sum over all z in F_q of psi^r(f(z)) * chi(h(z)); terms with f(z) = 0
/// contribute whatever the character's zero convention dictates (0 under the
/// vanishing convention used by the square-root bounds).
pub fn mixed_charsum(
    psi: &MultiplicativeCharacter,
    power: u64,
    f: &PolynomialOverField,
    chi: &AdditiveCharacter,
    h: &PolynomialOverField,
) -> Result<Complex64, CharsumError> {
    if power == 0 || power >= psi.order() {
        return Err(CharsumError::PowerOutOfRange {
            power,
            max: psi.order() - 1,
        });
    }
    let field = psi.field();
    if field.description() != chi.field().description()
        || field.description() != f.field().description()
        || field.description() != h.field().description()
    {
        return Err(CharsumError::FieldMismatch);
    }
    let mul_table = RootTable::new(psi.order());
    let add_table = RootTable::new(field.p());
    let term = |z: FieldElement| -> Complex64 {
        match psi.exponent_pow(f.eval(z), power) {
            None => Complex64::new(0.0, 0.0),
            Some(pe) => mul_table.value(pe) * add_table.get(chi.raw_exponent(h.eval(z))),
        }
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for z in field.nonzero_elements() {
        acc += term(z);
    }
    Ok(acc + term(FieldElement::ZERO))
}

/// The Gauss sum: sum over y in F_q^* of psi(y) * chi(y).
/// Requires a non-trivial chi; |result| = sqrt(q) classically.
pub fn gauss_sum(
    psi: &MultiplicativeCharacter,
    chi: &AdditiveCharacter,
) -> Result<Complex64, CharsumError> {
    if chi.is_trivial() {
        return Err(CharsumError::TrivialCharacter);
    }
    if psi.field().description() != chi.field().description() {
        return Err(CharsumError::FieldMismatch);
    }
    let field = psi.field();
    let mul_table = RootTable::new(psi.order());
    let add_table = RootTable::new(field.p());
    let mut acc = Complex64::new(0.0, 0.0);
    for y in field.nonzero_elements() {
        if let Some(pe) = psi.exponent_pow(y, 1) {
            acc += mul_table.value(pe) * add_table.get(chi.raw_exponent(y));
        }
    }
    Ok(acc)
}

/// Outcome of a randomized square-root-bound audit.
#[derive(Debug, Clone, Serialize)]
pub struct WeilAuditReport {
    /// Field description string, e.g. `F_625 = F_5[x]/(x4+x3+2x2+2)`.
    pub field: String,
    pub trials: u64,
    /// Max observed |sum| / bound over all trials with a positive bound.
    pub max_ratio: f64,
    /// The trial attaining `max_ratio`.
    pub attaining_polynomial: String,
}

/// Run `trials` random character-sum trials against their bounds.
///
/// Even trials draw a random polynomial h of degree d coprime to q and check
/// |sum chi(h(z))| <= (d-1) sqrt(q); odd trials draw a random squarefree f
/// (so it is not a power of anything, and its distinct-root count equals its
/// degree), a random character order, and a random h, and check
/// |sum psi^r(f(z)) chi(h(z))| <= (deg h + deg f - 1) sqrt(q).
///
/// Returns an error if any trial exceeds its bound by more than 1e-6.
pub fn weil_audit(
    field: &Arc<FieldSpec>,
    trials: u64,
    seed: u64,
) -> Result<WeilAuditReport, CharsumError> {
    if trials == 0 {
        return Err(CharsumError::NoTrials);
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let q = field.order();
    let sqrt_q = (q as f64).sqrt();
    let orders: Vec<u64> = divisors(q - 1).into_iter().filter(|&d| d > 1).collect();

    let random_poly = |rng: &mut StdRng, degree: usize| -> PolynomialOverField {
        let mut codes: Vec<u64> = (0..degree).map(|_| rng.random_range(0..q)).collect();
        codes.push(rng.random_range(1..q)); // leading coefficient nonzero
        PolynomialOverField::from_codes(field.clone(), &codes)
    };
    let random_multiplier =
        |rng: &mut StdRng| -> FieldElement { FieldElement(rng.random_range(1..q)) };

    let mut max_ratio = 0.0f64;
    let mut attaining = String::from("none");
    let mut record = |magnitude: f64,
                      bound: f64,
                      description: String|
     -> Result<(), CharsumError> {
        if bound == 0.0 {
            // degenerate bound: the sum itself must vanish
            if magnitude > 1e-6 {
                return Err(CharsumError::BoundViolated {
                    magnitude,
                    bound,
                    polynomial: description,
                });
            }
            return Ok(());
        }
        if magnitude > bound + 1e-6 {
            return Err(CharsumError::BoundViolated {
                magnitude,
                bound,
                polynomial: description,
            });
        }
        let ratio = magnitude / bound;
        if ratio > max_ratio {
            max_ratio = ratio;
            attaining = description;
        }
        Ok(())
    };

    for trial in 0..trials {
        if trial % 2 == 0 {
            // additive kind: degree in 1..=5 with p not dividing d
            let d = loop {
                let d = rng.random_range(1..=5usize);
                if !(d as u64).is_multiple_of(field.p()) {
                    break d;
                }
            };
            let h = random_poly(&mut rng, d);
            let chi = AdditiveCharacter::new(field.clone(), random_multiplier(&mut rng));
            let sum = additive_charsum(&chi, &h);
            let bound = (d as f64 - 1.0) * sqrt_q;
            record(
                sum.norm(),
                bound,
                format!(
                    "additive a={} h={}",
                    format_element(field, chi.multiplier()),
                    h.display()
                ),
            )?;
        } else {
            // mixed kind: squarefree f, any h
            let f = loop {
                let deg = rng.random_range(1..=4usize);
                let f = random_poly(&mut rng, deg);
                if f.is_squarefree() {
                    break f;
                }
            };
            let order = orders[rng.random_range(0..orders.len())];
            let r = rng.random_range(1..order.max(2));
            let psi = MultiplicativeCharacter::new(field.clone(), order, ZeroConvention::Zero)
                .expect("order divides q-1");
            let h_deg = rng.random_range(0..=3usize);
            let h = random_poly(&mut rng, h_deg);
            let chi = AdditiveCharacter::new(field.clone(), random_multiplier(&mut rng));
            let sum = mixed_charsum(&psi, r, &f, &chi, &h)?;
            let m = f.degree().unwrap() as f64;
            let bound = (h_deg as f64 + m - 1.0) * sqrt_q;
            record(
                sum.norm(),
                bound,
                format!(
                    "mixed order={order} r={r} f={} a={} h={}",
                    f.display(),
                    format_element(field, chi.multiplier()),
                    h.display()
                ),
            )?;
        }
    }

    Ok(WeilAuditReport {
        field: format!(
            "F_{} = F_{}[x]/({})",
            q,
            field.p(),
            crate::textfmt::format_modulus(field.p(), field.modulus())
        ),
        trials,
        max_ratio,
        attaining_polynomial: attaining,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Arc<FieldSpec> {
        Arc::new(FieldSpec::new(3, 2).unwrap())
    }

    #[test]
    fn zero_polynomial_gives_full_mass() {
        let f = f9();
        let chi = AdditiveCharacter::canonical(f.clone());
        let h = PolynomialOverField::zero(f);
        let s = additive_charsum(&chi, &h);
        assert!((s - 9.0).norm() < 1e-9);
    }

    #[test]
    fn linear_polynomial_cancels() {
        let f = f9();
        let chi = AdditiveCharacter::canonical(f.clone());
        for c in 1..9 {
            let h = PolynomialOverField::from_codes(f.clone(), &[0, c]);
            let s = additive_charsum(&chi, &h);
            assert!(s.norm() < 1e-9, "c={c} -> {s}");
        }
    }

    #[test]
    fn trivial_character_is_allowed_and_flagged() {
        let f = f9();
        let chi = AdditiveCharacter::new(f.clone(), FieldElement::ZERO);
        assert!(chi.is_trivial());
        let h = PolynomialOverField::identity(f);
        assert!((additive_charsum(&chi, &h) - 9.0).norm() < 1e-9);
    }

    #[test]
    fn mixed_power_range_checked() {
        let f = f9();
        let psi = MultiplicativeCharacter::new(f.clone(), 8, ZeroConvention::Zero).unwrap();
        let chi = AdditiveCharacter::canonical(f.clone());
        let h = PolynomialOverField::identity(f.clone());
        let poly = PolynomialOverField::identity(f);
        assert!(matches!(
            mixed_charsum(&psi, 0, &poly, &chi, &h),
            Err(CharsumError::PowerOutOfRange { .. })
        ));
        assert!(matches!(
            mixed_charsum(&psi, 8, &poly, &chi, &h),
            Err(CharsumError::PowerOutOfRange { .. })
        ));
        assert!(mixed_charsum(&psi, 3, &poly, &chi, &h).is_ok());
    }

    #[test]
    fn squarefree_detection() {
        let f = f9();
        // (z+1)(z-1) = z^2 - 1: squarefree
        let sf = PolynomialOverField::from_codes(f.clone(), &[2, 0, 1]);
        assert!(sf.is_squarefree());
        // (z+1)^2 = z^2 + 2z + 1: not squarefree
        let sq = PolynomialOverField::from_codes(f.clone(), &[1, 2, 1]);
        assert!(!sq.is_squarefree());
        // z^3 over char 3: derivative 0
        let zp = PolynomialOverField::from_codes(f.clone(), &[0, 0, 0, 1]);
        assert!(!zp.is_squarefree());
        assert!(!PolynomialOverField::zero(f).is_squarefree());
    }

    #[test]
    fn derivative_in_characteristic_p() {
        let f = f9();
        // d/dz (z^3 + 2z^2 + z + 1) = 0*z^2 + 4z + 1 = z + 1 over F_3... careful:
        // 3z^2 -> 0, 2*2z -> 4z = z, so z + 1.
        let poly = PolynomialOverField::from_codes(f.clone(), &[1, 1, 2, 1]);
        let d = poly.derivative();
        assert_eq!(d.coeffs(), &[FieldElement::ONE, FieldElement::ONE]);
    }

    #[test]
    fn affine_substitution_preserves_magnitude() {
        // |sum chi(h(uz+v))| = |sum chi(h(z))| for u != 0: the substitution
        // permutes the summation set.
        let f = Arc::new(FieldSpec::new(5, 2).unwrap());
        let chi = AdditiveCharacter::canonical(f.clone());
        let h = PolynomialOverField::from_codes(f.clone(), &[3, 1, 0, 1]); // z^3 + z + 3
        let base = additive_charsum(&chi, &h).norm();
        for (u, v) in [(2u64, 7u64), (9, 0), (24, 3)] {
            // h(uz + v) expanded by evaluating pointwise
            let (u, v) = (FieldElement(u), FieldElement(v));
            let mut acc = Complex64::new(0.0, 0.0);
            let table = RootTable::new(f.p());
            for z in f.elements() {
                let arg = h.eval(f.add(f.mul(u, z), v));
                acc += table.get(chi.raw_exponent(arg));
            }
            assert!((acc.norm() - base).abs() < 1e-9);
        }
    }

    #[test]
    fn gauss_sums_have_magnitude_sqrt_q() {
        let mut combos = 0;
        for (p, m) in [(3u64, 2u32), (5, 2), (7, 2), (3, 4), (11, 2), (13, 2)] {
            let field = Arc::new(FieldSpec::new(p, m).unwrap());
            let q = field.order();
            let chi = AdditiveCharacter::canonical(field.clone());
            for order in crate::field::divisors(q - 1) {
                if order <= 1 || combos >= 20 {
                    continue;
                }
                let psi =
                    MultiplicativeCharacter::new(field.clone(), order, ZeroConvention::Zero)
                        .unwrap();
                let g = gauss_sum(&psi, &chi).unwrap();
                assert!(
                    (g.norm() - (q as f64).sqrt()).abs() < 1e-6,
                    "q={q} order={order}: |G| = {}",
                    g.norm()
                );
                combos += 1;
            }
        }
        assert!(combos >= 20);
    }

    #[test]
    fn gauss_sum_rejects_trivial_chi() {
        let f = f9();
        let psi = MultiplicativeCharacter::new(f.clone(), 8, ZeroConvention::Zero).unwrap();
        let trivial = AdditiveCharacter::new(f, FieldElement::ZERO);
        assert!(matches!(
            gauss_sum(&psi, &trivial),
            Err(CharsumError::TrivialCharacter)
        ));
    }

    #[test]
    fn polynomial_mul_and_pow() {
        let f = f9();
        // (z+1)(z-1) = z^2 - 1
        let a = PolynomialOverField::from_codes(f.clone(), &[1, 1]);
        let b = PolynomialOverField::from_codes(f.clone(), &[2, 1]);
        assert_eq!(a.mul(&b), PolynomialOverField::from_codes(f.clone(), &[2, 0, 1]));
        // (z+1)^3 = z^3 + 1 in characteristic 3
        assert_eq!(a.pow(3), PolynomialOverField::from_codes(f, &[1, 0, 0, 1]));
    }

    #[test]
    fn audit_runs_clean_on_small_field() {
        let f = f9();
        let report = weil_audit(&f, 200, 42).unwrap();
        assert_eq!(report.trials, 200);
        assert!(report.max_ratio <= 1.0 + 1e-9, "ratio {}", report.max_ratio);
        assert!(report.field.starts_with("F_9"));
        let json = serde_json::to_string(&report).unwrap();
        for key in ["field", "trials", "max_ratio", "attaining_polynomial"] {
            assert!(json.contains(key));
        }
    }

    #[test]
    fn audit_requires_trials() {
        assert!(matches!(
            weil_audit(&f9(), 0, 1),
            Err(CharsumError::NoTrials)
        ));
    }
}
