//! Exact arithmetic in GF(q) and GF(q²) for q = p^e.
//!
//! The field GF(q²) is realized as the single extension GF(p)[x]/(m(x)) of
//! degree 2e, with the subfield GF(q) recognized as the fixed field of the
//! conjugation x ↦ x^q. Elements are encoded as integers in [0, p^{2e})
//! whose base-p digits are the polynomial coefficients (c₀ least
//! significant), which makes them directly usable as dense array indices.

use crate::error::{Error, Result};

/// Largest field order for which full add/mul/inv/conj tables are built.
/// Above this, operations fall back to polynomial arithmetic per call.
const TABLE_LIMIT: u64 = 256;

/// Default ceiling on the field order p^{2e}.
pub const DEFAULT_ORDER_LIMIT: u64 = 1 << 16;

/// An element of GF(q²), identified by its integer encoding.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// The base-p integer encoding of the element.
    pub fn encoding(self) -> u64 {
        u64::from(self.0)
    }

    /// The encoding as a dense array index.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// GF(q²) with q = p^e: modulus selection, arithmetic, and the
/// conjugation/norm/trace maps down to GF(q).
///
/// Immutable after construction; all operations are pure.
#[derive(Debug, Clone)]
pub struct Field {
    p: u64,
    e: u32,
    q: u64,
    order: u64,
    /// Coefficients c₀..c_{2e−1} of the monic modulus (leading 1 implicit).
    modulus: Vec<u64>,
    add: Vec<u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    conj: Vec<u32>,
}

impl Field {
    /// Builds GF(p^{2e}) with the default order ceiling.
    pub fn new(p: u64, e: u32) -> Result<Field> {
        Field::with_order_limit(p, e, DEFAULT_ORDER_LIMIT)
    }

    /// Builds GF(p^{2e}), rejecting fields larger than `limit`.
    ///
    /// The modulus is the irreducible monic polynomial of degree 2e whose
    /// coefficient vector has the smallest integer encoding, so rebuilding
    /// the field always yields bit-identical element indices.
    pub fn with_order_limit(p: u64, e: u32, limit: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        assert!(e >= 1, "extension degree must be positive");
        let degree = 2 * e as usize;
        let order = checked_pow(p, degree as u32).filter(|&o| o <= limit).ok_or({
            Error::FieldTooLarge {
                order: checked_pow(p, degree as u32).unwrap_or(u64::MAX),
                limit,
            }
        })?;
        let q = pow(p, e);

        let modulus = smallest_irreducible(p, degree);
        let mut field = Field {
            p,
            e,
            q,
            order,
            modulus,
            add: Vec::new(),
            mul: Vec::new(),
            inv: Vec::new(),
            conj: Vec::new(),
        };
        if order <= TABLE_LIMIT {
            field.build_tables();
        }
        Ok(field)
    }

    fn build_tables(&mut self) {
        let n = self.order as usize;
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        for a in 0..n as u64 {
            for b in 0..n as u64 {
                add[(a as usize) * n + b as usize] = self.poly_add(a, b) as u32;
                mul[(a as usize) * n + b as usize] = self.poly_mul(a, b) as u32;
            }
        }
        let mut inv = vec![0u32; n];
        for a in 1..n as u64 {
            inv[a as usize] = self.poly_pow(a, self.order - 2) as u32;
        }
        let mut conj = vec![0u32; n];
        for a in 0..n as u64 {
            conj[a as usize] = self.poly_pow(a, self.q) as u32;
        }
        self.add = add;
        self.mul = mul;
        self.inv = inv;
        self.conj = conj;
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// e, so that q = p^e.
    pub fn subfield_degree(&self) -> u32 {
        self.e
    }

    /// The subfield order q = p^e.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// The full field order q² = p^{2e}.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Coefficients c₀..c_{2e−1} of the monic modulus.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The element with the given encoding, checked against the field order.
    pub fn element(&self, enc: u64) -> Result<FieldElement> {
        if enc < self.order {
            Ok(FieldElement(enc as u32))
        } else {
            Err(Error::EncodingOutOfRange {
                enc,
                order: self.order,
            })
        }
    }

    /// All field elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order as u32).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.add.is_empty() {
            FieldElement(self.poly_add(a.encoding(), b.encoding()) as u32)
        } else {
            FieldElement(self.add[a.index() * self.order as usize + b.index()])
        }
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.poly_neg(a.encoding()) as u32)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.mul.is_empty() {
            FieldElement(self.poly_mul(a.encoding(), b.encoding()) as u32)
        } else {
            FieldElement(self.mul[a.index() * self.order as usize + b.index()])
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.inv.is_empty() {
            Ok(FieldElement(self.poly_pow(a.encoding(), self.order - 2) as u32))
        } else {
            Ok(FieldElement(self.inv[a.index()]))
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^k by repeated squaring.
    pub fn pow(&self, a: FieldElement, mut k: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// The conjugation a ↦ a^q, an involutory automorphism fixing GF(q).
    pub fn conj(&self, a: FieldElement) -> FieldElement {
        if self.conj.is_empty() {
            self.pow(a, self.q)
        } else {
            FieldElement(self.conj[a.index()])
        }
    }

    /// The norm a ↦ a^{q+1} = a·conj(a), with values in GF(q).
    pub fn norm(&self, a: FieldElement) -> FieldElement {
        self.mul(a, self.conj(a))
    }

    /// The trace a ↦ a + conj(a), with values in GF(q).
    pub fn trace(&self, a: FieldElement) -> FieldElement {
        self.add(a, self.conj(a))
    }

    /// Whether a lies in the subfield GF(q), i.e. a^q = a.
    pub fn in_subfield(&self, a: FieldElement) -> bool {
        self.conj(a) == a
    }

    // ---- polynomial arithmetic on integer encodings ----

    fn degree2e(&self) -> usize {
        2 * self.e as usize
    }

    fn poly_add(&self, a: u64, b: u64) -> u64 {
        digits_combine(a, b, self.p, self.degree2e(), |x, y, p| (x + y) % p)
    }

    fn poly_neg(&self, a: u64) -> u64 {
        digits_combine(a, 0, self.p, self.degree2e(), |x, _, p| (p - x) % p)
    }

    fn poly_mul(&self, a: u64, b: u64) -> u64 {
        let d = self.degree2e();
        let mut prod = [0u64; 32];
        let mut da = decode(a, self.p, d);
        let db = decode(b, self.p, d);
        for (i, &x) in da.iter().take(d).enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().take(d).enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // reduce modulo the monic modulus: x^d = -(c_{d-1} x^{d-1} + ... + c_0)
        for k in (d..2 * d - 1).rev() {
            let lead = prod[k];
            if lead == 0 {
                continue;
            }
            prod[k] = 0;
            for (c, &m) in self.modulus.iter().enumerate() {
                let cell = &mut prod[k - d + c];
                *cell = (*cell + (self.p - m % self.p) % self.p * lead) % self.p;
            }
        }
        da[..d].copy_from_slice(&prod[..d]);
        encode(&da[..d], self.p)
    }

    fn poly_pow(&self, a: u64, mut k: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.poly_mul(acc, base);
            }
            base = self.poly_mul(base, base);
            k >>= 1;
        }
        acc
    }
}

fn encode(digits: &[u64], p: u64) -> u64 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn decode(mut enc: u64, p: u64, len: usize) -> [u64; 32] {
    let mut out = [0u64; 32];
    for slot in out.iter_mut().take(len) {
        *slot = enc % p;
        enc /= p;
    }
    out
}

fn digits_combine(a: u64, b: u64, p: u64, len: usize, f: impl Fn(u64, u64, u64) -> u64) -> u64 {
    let da = decode(a, p, len);
    let db = decode(b, p, len);
    let mut out = [0u64; 32];
    for i in 0..len {
        out[i] = f(da[i], db[i], p);
    }
    encode(&out[..len], p)
}

fn pow(base: u64, exp: u32) -> u64 {
    base.pow(exp)
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits q into (p, e) with p prime and q = p^e.
pub fn factor_prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            return if rest == 1 {
                Ok((p, e))
            } else {
                Err(Error::NotPrimePower(q))
            };
        }
        p += 1;
    }
    Ok((q, 1))
}

/// The monic irreducible of the given degree over GF(p) whose coefficient
/// vector (c₀,…) has the smallest integer encoding.
fn smallest_irreducible(p: u64, degree: usize) -> Vec<u64> {
    let count = pow(p, degree as u32);
    for enc in 0..count {
        let coeffs = decode(enc, p, degree);
        if is_irreducible(&coeffs[..degree], p) {
            return coeffs[..degree].to_vec();
        }
    }
    unreachable!("irreducible polynomials exist in every degree over GF(p)")
}

/// Exhaustive factor search: a monic f of degree d is irreducible iff no
/// monic polynomial of degree 1..=d/2 divides it.
fn is_irreducible(low_coeffs: &[u64], p: u64) -> bool {
    let d = low_coeffs.len();
    let mut f = low_coeffs.to_vec();
    f.push(1);
    for k in 1..=d / 2 {
        for enc in 0..pow(p, k as u32) {
            let digits = decode(enc, p, k);
            let mut g = digits[..k].to_vec();
            g.push(1);
            if poly_rem_is_zero(&f, &g, p) {
                return false;
            }
        }
    }
    true
}

/// Whether monic g divides monic f over GF(p).
fn poly_rem_is_zero(f: &[u64], g: &[u64], p: u64) -> bool {
    let mut rem = f.to_vec();
    let dg = g.len() - 1;
    while rem.len() > dg {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let shift = rem.len() - 1 - dg;
            for (i, &gc) in g.iter().enumerate() {
                let cell = &mut rem[shift + i];
                *cell = (*cell + (p - gc % p) % p * lead) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Multiplication oracle independent of the field's table path:
    /// schoolbook product of coefficient vectors reduced by long division.
    fn oracle_mul(a: u64, b: u64, p: u64, modulus: &[u64]) -> u64 {
        let d = modulus.len();
        let da: Vec<u64> = (0..d).map(|i| a / p.pow(i as u32) % p).collect();
        let db: Vec<u64> = (0..d).map(|i| b / p.pow(i as u32) % p).collect();
        let mut prod = vec![0u64; 2 * d];
        for i in 0..d {
            for j in 0..d {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        let mut full_mod = modulus.to_vec();
        full_mod.push(1);
        for k in (d..2 * d).rev() {
            let lead = prod[k];
            if lead == 0 {
                continue;
            }
            for (i, &mc) in full_mod.iter().enumerate() {
                prod[k - d + i] = (prod[k - d + i] + (p - mc % p) * lead) % p;
            }
        }
        prod[..d]
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * p + c)
    }

    #[test]
    fn modulus_gf9_is_x2_plus_1() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(f.modulus(), &[1, 0]);
        assert_eq!(f.q(), 3);
        assert_eq!(f.order(), 9);
    }

    #[test]
    fn modulus_gf16_is_x4_plus_x_plus_1() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 0]);
        assert_eq!(f.q(), 4);
        assert_eq!(f.order(), 16);
    }

    #[test]
    fn non_prime_p_is_rejected() {
        assert!(matches!(Field::new(4, 1), Err(Error::NotPrime(4))));
    }

    #[test]
    fn order_limit_is_enforced() {
        assert!(matches!(
            Field::with_order_limit(3, 2, 80),
            Err(Error::FieldTooLarge { .. })
        ));
    }

    #[test]
    fn modulus_selection_is_deterministic() {
        for (p, e) in [(3, 1), (2, 2), (5, 1), (2, 1)] {
            let a = Field::new(p, e).unwrap();
            let b = Field::new(p, e).unwrap();
            assert_eq!(a.modulus(), b.modulus());
        }
    }

    #[test]
    fn gf9_products_match_spec_values() {
        let f = Field::new(3, 1).unwrap();
        let alpha = f.element(3).unwrap();
        assert_eq!(f.mul(alpha, alpha).encoding(), 2); // α² = 2
        let one_plus_alpha = f.element(4).unwrap();
        assert_eq!(f.mul(one_plus_alpha, one_plus_alpha).encoding(), 6); // (1+α)² = 2α
    }

    #[test]
    fn multiplication_matches_polynomial_oracle() {
        for (p, e) in [(3u64, 1u32), (2, 2), (5, 1)] {
            let f = Field::new(p, e).unwrap();
            for a in 0..f.order() {
                for b in 0..f.order() {
                    let got = f
                        .mul(f.element(a).unwrap(), f.element(b).unwrap())
                        .encoding();
                    assert_eq!(got, oracle_mul(a, b, p, f.modulus()), "{a}*{b} in p={p},e={e}");
                }
            }
        }
    }

    #[test]
    fn field_axioms_hold_exhaustively() {
        for (p, e) in [(3u64, 1u32), (2, 2)] {
            let f = Field::new(p, e).unwrap();
            let elems: Vec<_> = f.elements().collect();
            for &a in &elems {
                assert_eq!(f.add(a, f.zero()), a);
                assert_eq!(f.mul(a, f.one()), a);
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                for &b in &elems {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &elems {
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                        assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let f = Field::new(3, 1).unwrap();
        assert!(matches!(
            f.div(f.one(), f.zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn conjugation_examples_gf9() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(f.conj(f.element(3).unwrap()).encoding(), 6); // α³ = 2α
        assert_eq!(f.conj(f.element(2).unwrap()).encoding(), 2); // subfield fixed
    }

    #[test]
    fn conjugation_is_an_involutory_automorphism() {
        for (p, e) in [(3u64, 1u32), (2, 2)] {
            let f = Field::new(p, e).unwrap();
            for a in f.elements() {
                assert_eq!(f.conj(f.conj(a)), a);
                for b in f.elements() {
                    assert_eq!(f.conj(f.add(a, b)), f.add(f.conj(a), f.conj(b)));
                    assert_eq!(f.conj(f.mul(a, b)), f.mul(f.conj(a), f.conj(b)));
                }
            }
        }
    }

    #[test]
    fn norm_examples_gf9() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(f.norm(f.element(3).unwrap()).encoding(), 1); // N(α) = 1
        assert_eq!(f.norm(f.element(4).unwrap()).encoding(), 2); // N(1+α) = 2
        assert_eq!(f.norm(f.zero()), f.zero());
    }

    #[test]
    fn norm_is_multiplicative_and_fibers_have_size_q_plus_1() {
        for (p, e) in [(3u64, 1u32), (2, 2)] {
            let f = Field::new(p, e).unwrap();
            for a in f.elements() {
                assert!(f.in_subfield(f.norm(a)));
                for b in f.elements() {
                    assert_eq!(f.norm(f.mul(a, b)), f.mul(f.norm(a), f.norm(b)));
                }
            }
            let mut fiber = vec![0u64; f.order() as usize];
            for a in f.elements() {
                fiber[f.norm(a).index()] += 1;
            }
            for target in f.elements() {
                if target.is_zero() {
                    assert_eq!(fiber[target.index()], 1);
                } else if f.in_subfield(target) {
                    assert_eq!(fiber[target.index()], f.q() + 1);
                } else {
                    assert_eq!(fiber[target.index()], 0);
                }
            }
        }
    }

    #[test]
    fn trace_examples_and_subfield_closure() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(f.trace(f.element(3).unwrap()), f.zero()); // T(α) = 0
        assert_eq!(f.trace(f.one()).encoding(), 2); // T(1) = 2
        for a in f.elements() {
            assert!(f.in_subfield(f.trace(a)));
        }
    }

    #[test]
    fn subfield_has_exactly_q_elements() {
        for (p, e) in [(3u64, 1u32), (2, 2), (5, 1)] {
            let f = Field::new(p, e).unwrap();
            let count = f.elements().filter(|&a| f.in_subfield(a)).count() as u64;
            assert_eq!(count, f.q());
        }
        let f = Field::new(3, 1).unwrap();
        assert!(f.in_subfield(f.element(2).unwrap()));
        assert!(!f.in_subfield(f.element(3).unwrap()));
    }

    #[test]
    fn prime_power_factoring() {
        assert_eq!(factor_prime_power(3).unwrap(), (3, 1));
        assert_eq!(factor_prime_power(4).unwrap(), (2, 2));
        assert_eq!(factor_prime_power(27).unwrap(), (3, 3));
        assert!(factor_prime_power(6).is_err());
        assert!(factor_prime_power(1).is_err());
        assert!(factor_prime_power(12).is_err());
    }

    #[test]
    fn large_field_uses_polynomial_fallback() {
        // GF(17²) = 289 > TABLE_LIMIT exercises the table-free path.
        let f = Field::new(17, 1).unwrap();
        assert_eq!(f.order(), 289);
        let a = f.element(20).unwrap();
        let b = f.element(200).unwrap();
        assert_eq!(f.mul(a, b).encoding(), oracle_mul(20, 200, 17, f.modulus()));
        assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        assert_eq!(f.conj(f.conj(b)), b);
        assert!(f.in_subfield(f.norm(b)));
    }
}
