//! Exact arithmetic in F_{p^m}: construction and validation of the field,
//! discrete log / antilog tables, and the trace map down to F_p.
//!
//! Elements are carried as integer codes `sum coeffs[i] * p^i` in `[0, q)`,
//! which is also the canonical ordering used for every "smallest" selection
//! (default modulus polynomial, default generator, tie-breaks).

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on q = p^m. Every field used by the constructions at desk
/// scale has q <= 625; the cap guards against accidental huge table builds.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("q = p^m = {q} exceeds the field cap {cap}")]
    FieldTooLarge { q: u64, cap: u64 },
    #[error("modulus polynomial must be monic of degree m with coefficients in [0, p)")]
    BadPolynomial,
    #[error("modulus polynomial is reducible over F_p")]
    ReduciblePolynomial,
    #[error("element {0} does not have multiplicative order q-1")]
    NotPrimitive(u64),
    #[error("element code {code} is out of range for a field of order {q}")]
    NotInField { code: u64, q: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("discrete logarithm of zero")]
    LogOfZero,
}

/// An element of F_{p^m}, stored as its integer code.
///
/// Codes are only meaningful relative to the [`FieldSpec`] that produced
/// them; all arithmetic goes through the spec.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(pub u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn code(self) -> u64 {
        self.0
    }
}

/// Serializable description of a field: enough to rebuild it exactly.
///
/// `poly` is constant-first (coefficient i multiplies x^i) and monic;
/// `generator` is the integer code of the primitive element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescription {
    pub p: u64,
    pub m: u32,
    pub poly: Vec<u64>,
    pub generator: u64,
}

/// A fully validated finite field F_{p^m} with precomputed log/antilog tables.
///
/// Immutable after construction; safe to share read-only across threads.
/// Equality compares (p, m, poly, generator); the tables are determined by
/// those.
#[derive(Debug, PartialEq, Eq)]
pub struct FieldSpec {
    p: u64,
    m: u32,
    q: u64,
    poly: Vec<u64>,
    generator: u64,
    /// log[code] = k with g^k = element; log[0] is a sentinel (never read).
    log: Vec<u64>,
    /// antilog[k] = code of g^k, k in [0, q-1).
    antilog: Vec<u64>,
}

/// Builder for [`FieldSpec`] with optional modulus, generator and cap.
pub struct FieldBuilder {
    p: u64,
    m: u32,
    poly: Option<Vec<u64>>,
    generator: Option<u64>,
    cap: u64,
}

impl FieldBuilder {
    pub fn new(p: u64, m: u32) -> Self {
        FieldBuilder {
            p,
            m,
            poly: None,
            generator: None,
            cap: DEFAULT_FIELD_CAP,
        }
    }

    /// Supply the modulus polynomial, constant-first, monic of degree m.
    pub fn poly(mut self, coeffs: Vec<u64>) -> Self {
        self.poly = Some(coeffs);
        self
    }

    /// Supply the primitive element by integer code.
    pub fn generator(mut self, code: u64) -> Self {
        self.generator = Some(code);
        self
    }

    /// Override the size cap (default 2^20).
    pub fn cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn build(self) -> Result<FieldSpec, FieldError> {
        FieldSpec::build(self.p, self.m, self.poly, self.generator, self.cap)
    }
}

impl FieldSpec {
    /// Build F_{p^m} with the default (smallest-code) modulus and generator.
    pub fn new(p: u64, m: u32) -> Result<FieldSpec, FieldError> {
        FieldBuilder::new(p, m).build()
    }

    pub fn builder(p: u64, m: u32) -> FieldBuilder {
        FieldBuilder::new(p, m)
    }

    fn build(
        p: u64,
        m: u32,
        poly: Option<Vec<u64>>,
        generator: Option<u64>,
        cap: u64,
    ) -> Result<FieldSpec, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let mut q: u64 = 1;
        for _ in 0..m {
            q = q
                .checked_mul(p)
                .ok_or(FieldError::FieldTooLarge { q: u64::MAX, cap })?;
            if q > cap {
                return Err(FieldError::FieldTooLarge { q, cap });
            }
        }

        let poly = match poly {
            Some(c) => {
                if c.len() != m as usize + 1
                    || c[m as usize] != 1
                    || c.iter().any(|&x| x >= p)
                {
                    return Err(FieldError::BadPolynomial);
                }
                if !poly_is_irreducible(&c, p) {
                    return Err(FieldError::ReduciblePolynomial);
                }
                c
            }
            None => smallest_irreducible(p, m),
        };

        let mut spec = FieldSpec {
            p,
            m,
            q,
            poly,
            generator: 0,
            log: Vec::new(),
            antilog: Vec::new(),
        };

        let factors = prime_factors(q - 1);
        let generator = match generator {
            Some(g) => {
                if g == 0 || g >= q {
                    return Err(FieldError::NotInField { code: g, q });
                }
                if !spec.has_full_order(g, &factors) {
                    return Err(FieldError::NotPrimitive(g));
                }
                g
            }
            None => (1..q)
                .find(|&g| spec.has_full_order(g, &factors))
                .expect("every finite field has a primitive element"),
        };
        spec.generator = generator;

        // Populate the tables by repeated multiplication by g.
        spec.antilog = vec![0; (q - 1) as usize];
        spec.log = vec![u64::MAX; q as usize];
        let mut x = 1u64;
        for k in 0..(q - 1) {
            spec.antilog[k as usize] = x;
            debug_assert_eq!(spec.log[x as usize], u64::MAX, "generator order too small");
            spec.log[x as usize] = k;
            x = spec.mul_poly(x, generator);
        }
        debug_assert_eq!(x, 1);
        Ok(spec)
    }

    /// True iff `g` has multiplicative order exactly q-1.
    fn has_full_order(&self, g: u64, factors_of_group: &[u64]) -> bool {
        let n = self.q - 1;
        if self.pow_poly(g, n) != 1 {
            return false;
        }
        factors_of_group.iter().all(|&r| self.pow_poly(g, n / r) != 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// The modulus polynomial, constant-first.
    pub fn modulus(&self) -> &[u64] {
        &self.poly
    }

    pub fn generator(&self) -> FieldElement {
        FieldElement(self.generator)
    }

    /// The residue class of x (only defined for m >= 2; for m = 1 the code
    /// p would fall outside the field).
    pub fn alpha(&self) -> Option<FieldElement> {
        if self.m >= 2 {
            Some(FieldElement(self.p))
        } else {
            None
        }
    }

    pub fn description(&self) -> FieldDescription {
        FieldDescription {
            p: self.p,
            m: self.m,
            poly: self.poly.clone(),
            generator: self.generator,
        }
    }

    pub fn from_description(d: &FieldDescription) -> Result<FieldSpec, FieldError> {
        FieldBuilder::new(d.p, d.m)
            .poly(d.poly.clone())
            .generator(d.generator)
            .build()
    }

    /// Validate an integer code into an element.
    pub fn element(&self, code: u64) -> Result<FieldElement, FieldError> {
        if code < self.q {
            Ok(FieldElement(code))
        } else {
            Err(FieldError::NotInField { code, q: self.q })
        }
    }

    /// Element from base-p coefficients, constant-first (short vectors are
    /// zero-padded; coefficients are reduced mod p).
    pub fn element_from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement, FieldError> {
        if coeffs.len() > self.m as usize {
            // allow longer only if the tail is zero
            if coeffs[self.m as usize..].iter().any(|&c| c % self.p != 0) {
                return Err(FieldError::BadPolynomial);
            }
        }
        let mut code = 0u64;
        for &c in coeffs.iter().take(self.m as usize).rev() {
            code = code * self.p + c % self.p;
        }
        Ok(FieldElement(code))
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u64> {
        let mut c = x.0;
        (0..self.m)
            .map(|_| {
                let d = c % self.p;
                c /= self.p;
                d
            })
            .collect()
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.0 < self.q && b.0 < self.q);
        let (mut a, mut b, mut out, mut scale) = (a.0, b.0, 0u64, 1u64);
        for _ in 0..self.m {
            out += (a % self.p + b % self.p) % self.p * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let (mut a, mut out, mut scale) = (a.0, 0u64, 1u64);
        for _ in 0..self.m {
            out += (self.p - a % self.p) % self.p * scale;
            a /= self.p;
            scale *= self.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let k = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElement(self.antilog[(k % (self.q - 1)) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let k = self.log[a.0 as usize];
        Ok(FieldElement(
            self.antilog[((self.q - 1 - k) % (self.q - 1)) as usize],
        ))
    }

    /// x^e for any integer exponent; the exponent is reduced mod q-1 for a
    /// nonzero base. 0^0 = 1, 0^positive = 0, 0^negative is division by zero.
    pub fn pow(&self, a: FieldElement, e: i64) -> Result<FieldElement, FieldError> {
        if a.0 == 0 {
            return match e {
                0 => Ok(FieldElement::ONE),
                e if e > 0 => Ok(FieldElement::ZERO),
                _ => Err(FieldError::DivisionByZero),
            };
        }
        let n = (self.q - 1) as i128;
        let k = (self.log[a.0 as usize] as i128 * e as i128).rem_euclid(n) as u64;
        Ok(FieldElement(self.antilog[k as usize]))
    }

    /// g^k by table lookup, k reduced mod q-1.
    pub fn generator_pow(&self, k: u64) -> FieldElement {
        FieldElement(self.antilog[(k % (self.q - 1)) as usize])
    }

    /// Like [`generator_pow`](Self::generator_pow) but with an i128 exponent.
    pub fn generator_pow_signed(&self, k: i128) -> FieldElement {
        let n = (self.q - 1) as i128;
        FieldElement(self.antilog[k.rem_euclid(n) as usize])
    }

    pub fn discrete_log(&self, x: FieldElement) -> Result<u64, FieldError> {
        if x.0 == 0 {
            return Err(FieldError::LogOfZero);
        }
        debug_assert!(x.0 < self.q);
        Ok(self.log[x.0 as usize])
    }

    /// Tr(x) = x + x^p + ... + x^{p^{m-1}}, a residue in [0, p).
    pub fn trace(&self, x: FieldElement) -> u64 {
        let mut acc = FieldElement::ZERO;
        let mut t = x;
        for _ in 0..self.m {
            acc = self.add(acc, t);
            t = self.frobenius(t);
        }
        debug_assert!(acc.0 < self.p, "trace landed outside the prime subfield");
        acc.0
    }

    /// Frobenius endomorphism x -> x^p.
    pub fn frobenius(&self, x: FieldElement) -> FieldElement {
        if x.0 == 0 {
            return x;
        }
        let k = (self.log[x.0 as usize] as u128 * self.p as u128) % (self.q - 1) as u128;
        FieldElement(self.antilog[k as usize])
    }

    /// Iterator over all elements in code order (0 first).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement)
    }

    /// Iterator over the nonzero elements in antilog order (g^0, g^1, ...).
    /// This is the fixed iteration order used by the character-sum evaluators.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        self.antilog.iter().map(|&c| FieldElement(c))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, x: FieldElement) -> Result<u64, FieldError> {
        let k = self.discrete_log(x)?;
        Ok((self.q - 1) / gcd(k, self.q - 1))
    }

    // ---- bootstrap arithmetic (polynomial representation, no tables) ----

    fn mul_poly(&self, a: u64, b: u64) -> u64 {
        let m = self.m as usize;
        let p = self.p;
        let mut ac = vec![0u64; m];
        let mut bc = vec![0u64; m];
        let (mut ta, mut tb) = (a, b);
        for i in 0..m {
            ac[i] = ta % p;
            bc[i] = tb % p;
            ta /= p;
            tb /= p;
        }
        let mut prod = vec![0u64; 2 * m - 1];
        for i in 0..m {
            if ac[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + ac[i] * bc[j]) % p;
            }
        }
        // reduce: x^m = -(poly[0] + ... + poly[m-1] x^{m-1})
        for d in (m..prod.len()).rev() {
            let c = prod[d];
            if c != 0 {
                prod[d] = 0;
                for i in 0..m {
                    let sub = c * self.poly[i] % p;
                    prod[d - m + i] = (prod[d - m + i] + p - sub) % p;
                }
            }
        }
        let mut code = 0u64;
        for i in (0..m).rev() {
            code = code * p + prod[i];
        }
        code
    }

    fn pow_poly(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut fs = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            fs.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        fs.push(n);
    }
    fs
}

/// Divisors of n in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            ds.push(d);
            if d != n / d {
                ds.push(n / d);
            }
        }
        d += 1;
    }
    ds.sort_unstable();
    ds
}

// ---- polynomial arithmetic over F_p for irreducibility testing ----

fn poly_deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn polmod_mul(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let m = f.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for d in (m..prod.len()).rev() {
        let c = prod[d];
        if c != 0 {
            prod[d] = 0;
            for i in 0..m {
                let sub = c * f[i] % p;
                prod[d - m + i] = (prod[d - m + i] + p - sub) % p;
            }
        }
    }
    prod.truncate(m);
    prod.resize(m, 0);
    prod
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^{p-2} mod p
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    loop {
        let db = match poly_deg(&b) {
            None => return a,
            Some(d) => d,
        };
        let da = match poly_deg(&a) {
            None => return b,
            Some(d) => d,
        };
        if da < db {
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        let factor = a[da] * mod_inverse(b[db], p) % p;
        for i in 0..=db {
            let sub = factor * b[i] % p;
            a[da - db + i] = (a[da - db + i] + p - sub) % p;
        }
    }
}

/// Irreducibility over F_p.
///
/// Degrees <= 3 use a root search, degree 4 additionally trial-divides by
/// the monic irreducible quadratics; higher degrees use the standard
/// gcd(x^{p^{m/t}} - x, f) criterion.
pub(crate) fn poly_is_irreducible(f: &[u64], p: u64) -> bool {
    let m = match poly_deg(f) {
        Some(d) => d,
        None => return false,
    };
    debug_assert_eq!(m, f.len() - 1, "expect no leading zeros");
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let eval = |f: &[u64], x: u64| -> u64 {
        f.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p)
    };
    if m <= 4 {
        if (0..p).any(|x| eval(f, x) == 0) {
            return false;
        }
        if m <= 3 {
            return true;
        }
        // degree 4, no linear factors: check quadratic divisors
        for c0 in 0..p {
            for c1 in 0..p {
                let quad = [c0, c1, 1];
                if (0..p).any(|x| eval(&quad, x) == 0) {
                    continue; // reducible quadratic, covered by root search
                }
                if poly_deg(&poly_divrem(f, &quad, p)) .is_none() {
                    return false;
                }
            }
        }
        return true;
    }
    // Rabin's test: x^{p^m} == x (mod f) and gcd(x^{p^{m/t}} - x, f) = 1
    // for every prime t | m.
    let x_poly = |upto: usize| {
        let mut v = vec![0u64; upto];
        if upto > 1 {
            v[1] = 1;
        }
        v
    };
    let frob_pow = |k: u32| -> Vec<u64> {
        // x^{p^k} mod f by repeated p-th powering
        let mut r = x_poly(m);
        for _ in 0..k {
            let mut acc = {
                let mut one = vec![0u64; m];
                one[0] = 1;
                one
            };
            let mut base = r.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = polmod_mul(&acc, &base, f, p);
                }
                base = polmod_mul(&base, &base, f, p);
                e >>= 1;
            }
            r = acc;
        }
        r
    };
    let xm = frob_pow(m as u32);
    if xm != x_poly(m) {
        return false;
    }
    for t in prime_factors(m as u64) {
        let mut diff = frob_pow((m as u64 / t) as u32);
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(f.to_vec(), diff, p);
        if poly_deg(&g).unwrap_or(0) > 0 {
            return false;
        }
    }
    true
}

/// Remainder of f divided by d (monic), over F_p.
fn poly_divrem(f: &[u64], d: &[u64], p: u64) -> Vec<u64> {
    let dd = poly_deg(d).expect("nonzero divisor");
    debug_assert_eq!(d[dd], 1, "monic divisor");
    let mut r = f.to_vec();
    while let Some(dr) = poly_deg(&r) {
        if dr < dd {
            break;
        }
        let c = r[dr];
        r[dr] = 0;
        for i in 0..dd {
            let sub = c * d[i] % p;
            r[dr - dd + i] = (r[dr - dd + i] + p - sub) % p;
        }
    }
    r
}

/// The monic irreducible polynomial of degree m whose low-coefficient
/// integer code is smallest.
fn smallest_irreducible(p: u64, m: u32) -> Vec<u64> {
    let m = m as usize;
    if m == 1 {
        return vec![0, 1]; // x itself
    }
    let mut low = vec![0u64; m];
    loop {
        let mut f = low.clone();
        f.push(1);
        if poly_is_irreducible(&f, p) {
            return f;
        }
        // increment the base-p counter
        for d in low.iter_mut() {
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
        debug_assert!(
            low.iter().any(|&c| c != 0),
            "searched all degree-{m} polynomials without finding an irreducible one"
        );
    }
}
