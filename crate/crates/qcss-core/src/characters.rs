//! Additive and multiplicative characters of F_{p^m}, and exact unit-root
//! symbol algebra.
//!
//! Character values are carried as integer exponents of a fixed root of
//! unity for as long as possible; conversion to complex numbers happens only
//! when sums are accumulated. This keeps file output and golden-matrix
//! comparison bit-exact.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::field::{gcd, FieldElement, FieldSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharacterError {
    #[error("order {order} does not divide the group order {group} (or is trivial)")]
    InvalidOrder { order: u64, group: u64 },
    #[error("moduli {left} and {right} are not coprime")]
    NotCoprime { left: u64, right: u64 },
    #[error("cannot combine exponents with moduli {left} and {right}")]
    ModulusMismatch { left: u64, right: u64 },
}

/// The exponent e of a root of unity exp(2*pi*i*e/A), with 0 <= e < A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnitRootExponent {
    exponent: u64,
    modulus: u64,
}

impl UnitRootExponent {
    /// The exponent is reduced into [0, A).
    pub fn new(exponent: u64, modulus: u64) -> UnitRootExponent {
        assert!(modulus >= 1, "alphabet modulus must be positive");
        UnitRootExponent {
            exponent: exponent % modulus,
            modulus,
        }
    }

    pub fn exponent(self) -> u64 {
        self.exponent
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    /// The denoted complex value exp(2*pi*i*e/A); |result| = 1 to machine
    /// precision. Hot loops should use a [`RootTable`] instead.
    pub fn to_complex(self) -> Complex64 {
        Complex64::cis(TAU * self.exponent as f64 / self.modulus as f64)
    }

    /// Complex conjugate (exponent negation).
    pub fn conj(self) -> UnitRootExponent {
        UnitRootExponent::new(self.modulus - self.exponent, self.modulus)
    }

    /// Product of two roots with the same modulus (exponents add).
    pub fn times(self, other: UnitRootExponent) -> Result<UnitRootExponent, CharacterError> {
        if self.modulus != other.modulus {
            return Err(CharacterError::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        Ok(UnitRootExponent::new(
            self.exponent + other.exponent,
            self.modulus,
        ))
    }

    /// r-th power (exponent scaling).
    pub fn pow(self, r: u64) -> UnitRootExponent {
        UnitRootExponent::new(
            (self.exponent as u128 * r as u128 % self.modulus as u128) as u64,
            self.modulus,
        )
    }
}

/// Combine a root mod A with a root mod B (A, B coprime) into the denoted
/// product, a root mod A*B: zeta_A = zeta_{AB}^B and zeta_B = zeta_{AB}^A.
pub fn combine_exponents(
    a: UnitRootExponent,
    b: UnitRootExponent,
) -> Result<UnitRootExponent, CharacterError> {
    let (ma, mb) = (a.modulus(), b.modulus());
    if gcd(ma, mb) != 1 {
        return Err(CharacterError::NotCoprime { left: ma, right: mb });
    }
    let m = ma * mb;
    let e = (a.exponent() as u128 * mb as u128 + b.exponent() as u128 * ma as u128)
        % m as u128;
    Ok(UnitRootExponent::new(e as u64, m))
}

/// Precomputed table of the A-th roots of unity.
#[derive(Debug, Clone)]
pub struct RootTable {
    modulus: u64,
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(modulus: u64) -> RootTable {
        assert!(modulus >= 1);
        let roots = (0..modulus)
            .map(|e| Complex64::cis(TAU * e as f64 / modulus as f64))
            .collect();
        RootTable { modulus, roots }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn get(&self, exponent: u64) -> Complex64 {
        self.roots[(exponent % self.modulus) as usize]
    }

    #[inline]
    pub fn value(&self, u: UnitRootExponent) -> Complex64 {
        debug_assert_eq!(u.modulus(), self.modulus);
        self.roots[u.exponent() as usize]
    }
}

/// The additive character x -> zeta_p^{Tr(a*x)}.
///
/// The exponent table Tr(a*x) for every x is precomputed at construction,
/// so evaluation in generation loops is a single lookup.
#[derive(Debug, Clone)]
pub struct AdditiveCharacter {
    field: Arc<FieldSpec>,
    multiplier: FieldElement,
    exponents: Vec<u64>,
}

impl AdditiveCharacter {
    pub fn new(field: Arc<FieldSpec>, multiplier: FieldElement) -> AdditiveCharacter {
        let exponents = field
            .elements()
            .map(|x| field.trace(field.mul(multiplier, x)))
            .collect();
        AdditiveCharacter {
            field,
            multiplier,
            exponents,
        }
    }

    /// The canonical character with multiplier 1.
    pub fn canonical(field: Arc<FieldSpec>) -> AdditiveCharacter {
        let one = FieldElement::ONE;
        AdditiveCharacter::new(field, one)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn multiplier(&self) -> FieldElement {
        self.multiplier
    }

    /// The trivial character (a = 0) maps everything to exponent 0.
    pub fn is_trivial(&self) -> bool {
        self.multiplier == FieldElement::ZERO
    }

    /// Exponent of zeta_p: Tr(a*x) mod p.
    pub fn exponent(&self, x: FieldElement) -> UnitRootExponent {
        UnitRootExponent::new(self.exponents[x.code() as usize], self.field.p())
    }

    /// Raw exponent lookup for hot loops.
    #[inline]
    pub fn raw_exponent(&self, x: FieldElement) -> u64 {
        self.exponents[x.code() as usize]
    }
}

/// Value convention at 0 for a multiplicative character.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroConvention {
    /// psi(0) = 0 (the convention in the character-sum bounds).
    Zero,
    /// psi(0) = 1 (the extension used by the mixed constructions).
    One,
}

/// A multiplicative character of order `order` dividing q-1:
/// psi(g^k) = zeta_order^k, extended to 0 by the chosen convention.
#[derive(Debug, Clone)]
pub struct MultiplicativeCharacter {
    field: Arc<FieldSpec>,
    order: u64,
    convention: ZeroConvention,
}

impl MultiplicativeCharacter {
    pub fn new(
        field: Arc<FieldSpec>,
        order: u64,
        convention: ZeroConvention,
    ) -> Result<MultiplicativeCharacter, CharacterError> {
        let group = field.order() - 1;
        if order <= 1 || !group.is_multiple_of(order) {
            return Err(CharacterError::InvalidOrder { order, group });
        }
        Ok(MultiplicativeCharacter {
            field,
            order,
            convention,
        })
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn convention(&self) -> ZeroConvention {
        self.convention
    }

    /// Exponent of zeta_order, or `None` when psi(x) is the complex value 0
    /// (x = 0 under the `Zero` convention).
    pub fn exponent(&self, x: FieldElement) -> Option<UnitRootExponent> {
        self.exponent_pow(x, 1)
    }

    /// Exponent of psi^r(x); `None` means the complex value 0.
    pub fn exponent_pow(&self, x: FieldElement, r: u64) -> Option<UnitRootExponent> {
        if x == FieldElement::ZERO {
            return match self.convention {
                ZeroConvention::Zero => None,
                ZeroConvention::One => Some(UnitRootExponent::new(0, self.order)),
            };
        }
        let k = self
            .field
            .discrete_log(x)
            .expect("nonzero element has a discrete log");
        let e = (k % self.order) as u128 * (r % self.order) as u128 % self.order as u128;
        Some(UnitRootExponent::new(e as u64, self.order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Arc<FieldSpec> {
        Arc::new(FieldSpec::new(3, 2).unwrap())
    }

    #[test]
    fn additive_basics() {
        let f = f9();
        let chi = AdditiveCharacter::canonical(f.clone());
        assert_eq!(chi.exponent(FieldElement::ZERO).exponent(), 0);
        assert_eq!(chi.exponent(FieldElement::ONE).exponent(), 2); // Tr(1) = 2
        let trivial = AdditiveCharacter::new(f.clone(), FieldElement::ZERO);
        assert!(trivial.is_trivial());
        assert!(f.elements().all(|x| trivial.exponent(x).exponent() == 0));
    }

    #[test]
    fn additive_is_homomorphism() {
        let f = Arc::new(FieldSpec::new(5, 2).unwrap());
        let a = f.element(7).unwrap();
        let chi = AdditiveCharacter::new(f.clone(), a);
        for x in f.elements() {
            for y in f.elements() {
                let lhs = chi.exponent(f.add(x, y)).exponent();
                let rhs = (chi.exponent(x).exponent() + chi.exponent(y).exponent()) % f.p();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn additive_orthogonality() {
        let f = f9();
        for a in f.elements() {
            let chi = AdditiveCharacter::new(f.clone(), a);
            let sum: Complex64 = f.elements().map(|x| chi.exponent(x).to_complex()).sum();
            let expected = if a == FieldElement::ZERO { 9.0 } else { 0.0 };
            assert!((sum - expected).norm() < 1e-9, "a={a:?} sum={sum}");
        }
    }

    #[test]
    fn published_trace_facts_over_f81() {
        // F_81 with x^4 + x + 2: Tr(alpha^2) = 0 and chi_{alpha^2}(1) has
        // exponent 0; Tr(alpha^4) = 1, so evaluating that character at
        // alpha^2 gives exponent 1.
        let f = Arc::new(
            FieldSpec::builder(3, 4)
                .poly(vec![2, 1, 0, 0, 1])
                .build()
                .unwrap(),
        );
        let alpha = f.alpha().unwrap();
        let alpha2 = f.mul(alpha, alpha);
        assert_eq!(f.trace(alpha2), 0);
        let chi = AdditiveCharacter::new(f.clone(), alpha2);
        assert_eq!(chi.exponent(FieldElement::ONE).exponent(), 0);
        assert_eq!(chi.exponent(alpha2).exponent(), 1); // Tr(alpha^4) = 1
    }

    #[test]
    fn multiplicative_order_and_image() {
        let f = Arc::new(FieldSpec::new(3, 4).unwrap());
        let psi = MultiplicativeCharacter::new(f.clone(), 10, ZeroConvention::Zero).unwrap();
        // psi(g^13) = zeta_10^3
        let x = f.generator_pow(13);
        assert_eq!(psi.exponent(x).unwrap().exponent(), 3);
        // image hits each 10th root (q-1)/10 = 8 times
        let mut counts = [0u32; 10];
        for x in f.nonzero_elements() {
            counts[psi.exponent(x).unwrap().exponent() as usize] += 1;
        }
        assert!(counts.iter().all(|&c| c == 8));
        // psi(0) conventions
        assert!(psi.exponent(FieldElement::ZERO).is_none());
        let psi1 = MultiplicativeCharacter::new(f, 10, ZeroConvention::One).unwrap();
        assert_eq!(psi1.exponent(FieldElement::ZERO).unwrap().exponent(), 0);
    }

    #[test]
    fn multiplicative_rejects_bad_order() {
        let f = f9();
        assert!(MultiplicativeCharacter::new(f.clone(), 1, ZeroConvention::Zero).is_err());
        assert!(MultiplicativeCharacter::new(f.clone(), 3, ZeroConvention::Zero).is_err());
        assert!(MultiplicativeCharacter::new(f, 8, ZeroConvention::Zero).is_ok());
    }

    #[test]
    fn multiplicative_is_homomorphism_on_units() {
        let f = Arc::new(FieldSpec::new(5, 2).unwrap());
        let psi = MultiplicativeCharacter::new(f.clone(), 8, ZeroConvention::Zero).unwrap();
        for x in f.nonzero_elements() {
            for y in f.nonzero_elements() {
                let lhs = psi.exponent(f.mul(x, y)).unwrap();
                let rhs = psi
                    .exponent(x)
                    .unwrap()
                    .times(psi.exponent(y).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn unit_root_values() {
        assert!((UnitRootExponent::new(0, 7).to_complex() - 1.0).norm() < 1e-12);
        assert!((UnitRootExponent::new(2, 4).to_complex() + 1.0).norm() < 1e-12);
        let z3 = UnitRootExponent::new(1, 3).to_complex();
        assert!((z3 - Complex64::new(-0.5, 3f64.sqrt() / 2.0)).norm() < 1e-12);
    }

    #[test]
    fn combine_exponent_rules() {
        let a = UnitRootExponent::new(0, 10);
        let b = UnitRootExponent::new(0, 3);
        assert_eq!(combine_exponents(a, b).unwrap().exponent(), 0);

        let a = UnitRootExponent::new(1, 10);
        let b = UnitRootExponent::new(0, 3);
        let c = combine_exponents(a, b).unwrap();
        assert_eq!((c.exponent(), c.modulus()), (3, 30));

        let a = UnitRootExponent::new(2, 8);
        let b = UnitRootExponent::new(3, 5);
        let c = combine_exponents(a, b).unwrap();
        assert_eq!((c.exponent(), c.modulus()), (34, 40));

        let bad = combine_exponents(UnitRootExponent::new(1, 6), UnitRootExponent::new(1, 3));
        assert!(matches!(bad, Err(CharacterError::NotCoprime { .. })));
    }

    #[test]
    fn combine_denotes_the_complex_product() {
        for (ea, ma, eb, mb) in [(1, 10, 2, 3), (7, 8, 4, 5), (0, 4, 2, 9), (3, 7, 1, 2)] {
            let a = UnitRootExponent::new(ea, ma);
            let b = UnitRootExponent::new(eb, mb);
            let c = combine_exponents(a, b).unwrap();
            let err = (c.to_complex() - a.to_complex() * b.to_complex()).norm();
            assert!(err < 1e-12, "({ea},{ma}) x ({eb},{mb}): err {err}");
        }
    }

    #[test]
    fn root_table_matches_direct() {
        let t = RootTable::new(12);
        for e in 0..12 {
            let u = UnitRootExponent::new(e, 12);
            assert_eq!(t.value(u), u.to_complex());
        }
    }
}
