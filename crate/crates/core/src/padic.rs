//! Fixed-modulus arithmetic in `Z_p / p^N` and in unramified extensions
//! `W(F_q) / p^N = (Z/p^N)[x] / (h)` with `h` monic and irreducible mod `p`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest modulus `p^N` accepted; products of two residues must fit in `u128`.
const MAX_MODULUS: u64 = 1 << 62;

#[derive(Debug, PartialEq, Eq, Hash)]
struct RingData {
    p: u64,
    prec: u32,
    modulus: u64,
    /// Monic modulus polynomial, low degree first, leading 1 included.
    h: Vec<u64>,
    /// `h` as supplied, so that other precisions use the same lift.
    h_src: Vec<i64>,
}

/// `W(F_q) / p^N`; cheap to clone.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicRing(Arc<RingData>);

/// The p-adic valuation of an element known modulo `p^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    /// Every coefficient vanishes modulo `p^N`: the element is zero to
    /// working precision, which is inconclusive.
    AtLeast(u32),
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    pub fn is_unit(self) -> bool {
        self == Valuation::Finite(0)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(n) => write!(f, ">= {n}"),
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Reduce a signed integer into `[0, m)`.
pub(crate) fn reduce_i128(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

// Dense polynomials over F_p, used only to certify irreducibility of `h`.
fn fp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = fp_trim(a.to_vec());
    let b = fp_trim(b.to_vec());
    let lead_inv = powmod(*b.last().expect("nonzero divisor"), p - 2, p);
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = mulmod(*r.last().unwrap(), lead_inv, p);
        for (i, &bi) in b.iter().enumerate() {
            r[i + shift] = (r[i + shift] + p - mulmod(c, bi, p)) % p;
        }
        r = fp_trim(r);
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mulmod(x, y, p)) % p;
        }
    }
    fp_rem(&prod, m, p)
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (fp_trim(a.to_vec()), fp_trim(b.to_vec()));
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin-style test: `h` of degree `f` is irreducible over F_p iff
/// `gcd(h, x^{p^i} - x) = 1` for all `i <= f/2`.
pub(crate) fn fp_is_irreducible(h: &[u64], p: u64) -> bool {
    let h = fp_trim(h.iter().map(|c| c % p).collect());
    let deg = h.len().saturating_sub(1);
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut frob = x.clone();
    for _ in 0..deg / 2 {
        // frob <- frob^p mod h
        let mut acc = vec![1u64];
        let mut base = frob.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_mulmod(&acc, &base, &h, p);
            }
            base = fp_mulmod(&base, &base, &h, p);
            e >>= 1;
        }
        frob = acc;
        let mut diff = frob.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = fp_gcd(&h, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

impl PadicRing {
    /// `Z_p / p^prec`.
    pub fn new(p: u64, prec: u32) -> Result<Self> {
        Self::unramified(p, prec, &[0, 1])
    }

    /// `(Z/p^prec)[x]/(h)` for `h` monic (low degree first) and irreducible mod `p`.
    pub fn unramified(p: u64, prec: u32, h: &[i64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if prec == 0 {
            return Err(Error::invalid("precision must be at least 1"));
        }
        let mut modulus: u64 = 1;
        for _ in 0..prec {
            modulus = modulus
                .checked_mul(p)
                .filter(|&m| m <= MAX_MODULUS)
                .ok_or_else(|| {
                    Error::invalid(format!("{p}^{prec} exceeds the supported modulus"))
                })?;
        }
        if h.len() < 2 || *h.last().unwrap() != 1 {
            return Err(Error::invalid(
                "extension polynomial must be monic of degree >= 1",
            ));
        }
        let h_src = h.to_vec();
        let h: Vec<u64> = h.iter().map(|&c| reduce_i128(c as i128, modulus)).collect();
        if !fp_is_irreducible(&h, p) {
            return Err(Error::invalid("extension polynomial is reducible mod p"));
        }
        Ok(PadicRing(Arc::new(RingData {
            p,
            prec,
            modulus,
            h,
            h_src,
        })))
    }

    /// Same prime and extension at a different precision.
    pub fn with_precision(&self, prec: u32) -> Result<Self> {
        Self::unramified(self.0.p, prec, &self.0.h_src)
    }

    /// The residue field `F_q` realised as the same extension at precision 1.
    pub fn residue_field(&self) -> PadicRing {
        self.with_precision(1).expect("precision 1 is always valid")
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn precision(&self) -> u32 {
        self.0.prec
    }

    pub fn modulus(&self) -> u64 {
        self.0.modulus
    }

    /// Residue degree `f`.
    pub fn degree(&self) -> usize {
        self.0.h.len() - 1
    }

    /// Size of the residue field, `p^f`.
    pub fn residue_size(&self) -> u64 {
        self.0.p.pow(self.degree() as u32)
    }

    pub fn extension_poly(&self) -> &[u64] {
        &self.0.h
    }

    pub fn zero(&self) -> PadicElement {
        PadicElement {
            ring: self.clone(),
            coeffs: vec![0; self.degree()],
        }
    }

    pub fn one(&self) -> PadicElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i128) -> PadicElement {
        let mut e = self.zero();
        e.coeffs[0] = reduce_i128(n, self.0.modulus);
        e
    }

    /// Element with the given coefficients in the power basis of `x`; extra
    /// entries are rejected, missing ones are zero.
    pub fn from_coeffs(&self, coeffs: &[i128]) -> Result<PadicElement> {
        if coeffs.len() > self.degree() {
            return Err(Error::invalid(
                "too many coefficients for the extension degree",
            ));
        }
        let mut e = self.zero();
        for (slot, &c) in e.coeffs.iter_mut().zip(coeffs) {
            *slot = reduce_i128(c, self.0.modulus);
        }
        Ok(e)
    }

    /// The generator `x` of the extension (equals `-h(0)` when `f = 1`).
    pub fn generator(&self) -> PadicElement {
        if self.degree() == 1 {
            let c = self.0.h[0];
            return self.from_int(-(c as i128));
        }
        let mut e = self.zero();
        e.coeffs[1] = 1;
        e
    }

    /// Unique `(q-1)`-th root of unity congruent to `a` modulo `p`, as the fixed
    /// point of `x -> x^q`.
    pub fn teichmuller(&self, a: &PadicElement) -> Result<PadicElement> {
        self.check(a)?;
        if a.valuation() != Valuation::Finite(0) {
            return Err(Error::NonUnitResidue(a.to_string()));
        }
        let q = self.residue_size();
        let mut x = a.clone();
        for _ in 0..=self.0.prec {
            let next = x.pow(q);
            if next == x {
                return Ok(x);
            }
            x = next;
        }
        debug_assert_eq!(x.pow(q), x);
        Ok(x)
    }

    pub fn teichmuller_int(&self, a: i64) -> Result<PadicElement> {
        self.teichmuller(&self.from_int(a as i128))
    }

    fn check(&self, x: &PadicElement) -> Result<()> {
        if &x.ring == self {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }
}

impl fmt::Display for PadicRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 1 {
            write!(f, "Z_{}/{}^{}", self.0.p, self.0.p, self.0.prec)
        } else {
            write!(
                f,
                "W(F_{}^{})/{}^{}",
                self.0.p,
                self.degree(),
                self.0.p,
                self.0.prec
            )
        }
    }
}

/// Element of a [`PadicRing`]; coefficients are always reduced into `[0, p^N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicElement {
    ring: PadicRing,
    coeffs: Vec<u64>,
}

impl PadicElement {
    pub fn ring(&self) -> &PadicRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Integer representative when the ring is `Z_p/p^N`.
    pub fn as_u64(&self) -> u64 {
        self.coeffs[0]
    }

    /// Symmetric integer representative in `(-p^N/2, p^N/2]` of the first coefficient.
    pub fn as_signed(&self) -> i128 {
        let m = self.ring.modulus() as i128;
        let c = self.coeffs[0] as i128;
        if c > m / 2 {
            c - m
        } else {
            c
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 % self.ring.modulus() && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Minimum of the coefficient valuations; `AtLeast(N)` for zero.
    pub fn valuation(&self) -> Valuation {
        let p = self.ring.p();
        let n = self.ring.precision();
        let mut best = n;
        for &c in &self.coeffs {
            if c == 0 {
                continue;
            }
            let mut v = 0;
            let mut c = c;
            while c % p == 0 {
                c /= p;
                v += 1;
            }
            best = best.min(v);
        }
        if best == n {
            Valuation::AtLeast(n)
        } else {
            Valuation::Finite(best)
        }
    }

    pub fn is_unit(&self) -> bool {
        self.valuation().is_unit()
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.ring, other.ring);
        let m = self.ring.modulus();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| ((a as u128 + b as u128) % m as u128) as u64)
            .collect();
        PadicElement {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        let m = self.ring.modulus();
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| if a == 0 { 0 } else { m - a })
            .collect();
        PadicElement {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.ring, other.ring);
        let m = self.ring.modulus();
        let f = self.ring.degree();
        if f == 1 {
            return PadicElement {
                ring: self.ring.clone(),
                coeffs: vec![mulmod(self.coeffs[0], other.coeffs[0], m)],
            };
        }
        let mut prod = vec![0u64; 2 * f - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u128 + a as u128 * b as u128) % m as u128) as u64;
            }
        }
        let h = &self.ring.0.h;
        for k in (f..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &hi) in h[..f].iter().enumerate() {
                let t = mulmod(c, hi, m);
                prod[k - f + i] = (prod[k - f + i] + m - t) % m;
            }
        }
        prod.truncate(f);
        PadicElement {
            ring: self.ring.clone(),
            coeffs: prod,
        }
    }

    pub fn scale(&self, n: i128) -> Self {
        self.mul(&self.ring.from_int(n))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Newton–Hensel lifting of `x^{q-2}`, which is
    /// already an inverse modulo `p`.
    pub fn invert(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NonUnit);
        }
        let q = self.ring.residue_size();
        let mut y = self.pow(q - 2);
        let two = self.ring.from_int(2);
        let mut correct = 1u32;
        while correct < self.ring.precision() {
            y = y.mul(&two.sub(&self.mul(&y)));
            correct *= 2;
        }
        debug_assert!(self.mul(&y).is_one());
        Ok(y)
    }

    /// Exact quotient by `p^v`; the result is meaningful modulo `p^{N-v}`.
    /// Caller guarantees `p^v` divides every coefficient.
    pub fn div_p_pow(&self, v: u32) -> Self {
        let d = self.ring.p().pow(v);
        PadicElement {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|&c| c / d).collect(),
        }
    }

    pub fn mul_p_pow(&self, v: u32) -> Self {
        self.scale(self.ring.p().pow(v) as i128)
    }

    /// `(v, u)` with `self = p^v u` and `u` a unit. `None` when zero to precision.
    pub fn split_unit(&self) -> Option<(u32, Self)> {
        let v = self.valuation().finite()?;
        Some((v, self.div_p_pow(v)))
    }

    /// Image in the residue field `F_q`.
    pub fn residue(&self) -> PadicElement {
        let field = self.ring.residue_field();
        let p = self.ring.p();
        PadicElement {
            coeffs: self.coeffs.iter().map(|&c| c % p).collect(),
            ring: field,
        }
    }

    /// Lift a residue-field element into `ring` by taking representatives in `[0, p)`.
    pub fn lift_to(&self, ring: &PadicRing) -> Self {
        PadicElement {
            ring: ring.clone(),
            coeffs: self.coeffs.clone(),
        }
    }

    /// Exact equality modulo `p^k` (k at most the precision).
    pub fn eq_mod_p_pow(&self, other: &Self, k: u32) -> bool {
        let m = self.ring.p().pow(k.min(self.ring.precision()));
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| a % m == b % m)
    }
}

impl PadicElement {
    /// Sign and magnitude for display: integers above `p^N / 2` print as
    /// negatives. Extension elements are never negated.
    pub fn signed_parts(&self) -> (bool, String) {
        if self.coeffs.len() == 1 {
            let m = self.ring.modulus();
            let c = self.coeffs[0];
            if c > m / 2 {
                return (true, (m - c).to_string());
            }
        }
        (false, self.to_string())
    }
}

impl fmt::Display for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn teichmuller_examples() {
        let r4 = PadicRing::new(5, 4).unwrap();
        assert!(r4.teichmuller_int(1).unwrap().is_one());
        assert_eq!(r4.teichmuller_int(4).unwrap().as_u64(), 624);
        let r2 = PadicRing::new(5, 2).unwrap();
        assert_eq!(r2.teichmuller_int(2).unwrap().as_u64(), 7);
        assert!(matches!(
            r4.teichmuller_int(10),
            Err(Error::NonUnitResidue(_))
        ));
    }

    #[test]
    fn valuation_examples() {
        let r = PadicRing::new(5, 4).unwrap();
        assert_eq!(r.from_int(0).valuation(), Valuation::AtLeast(4));
        assert_eq!(r.from_int(50).valuation(), Valuation::Finite(2));
        assert_eq!(r.from_int(625).valuation(), Valuation::AtLeast(4));
        // x^2 - 2 is irreducible mod 5
        let w = PadicRing::unramified(5, 4, &[-2, 0, 1]).unwrap();
        let x = w.from_coeffs(&[5, 25]).unwrap();
        assert_eq!(x.valuation(), Valuation::Finite(1));
    }

    #[test]
    fn invert_examples() {
        let r = PadicRing::new(5, 4).unwrap();
        assert!(r.one().invert().unwrap().is_one());
        assert_eq!(r.from_int(2).invert().unwrap().as_u64(), 313);
        assert_eq!(r.from_int(5).invert(), Err(Error::NonUnit));
    }

    #[test]
    fn rejects_bad_rings() {
        assert!(PadicRing::new(6, 3).is_err());
        assert!(PadicRing::new(5, 0).is_err());
        assert!(PadicRing::new(5, 40).is_err());
        // x^2 - 1 = (x-1)(x+1)
        assert!(PadicRing::unramified(5, 3, &[-1, 0, 1]).is_err());
        assert!(PadicRing::unramified(5, 3, &[2, 0, 2]).is_err());
    }

    #[test]
    fn extension_teichmuller_has_order_q_minus_one() {
        let w = PadicRing::unramified(5, 6, &[-2, 0, 1]).unwrap();
        let a = w.from_coeffs(&[1, 1]).unwrap();
        let t = w.teichmuller(&a).unwrap();
        assert!(t.pow(24).is_one());
        assert_eq!(t.residue(), a.residue());
    }

    #[test]
    fn irreducibility_certificate() {
        assert!(
            fp_is_irreducible(&[2, 1, 0, 1], 5) == !(0..5u64).any(|x| (x * x * x + x + 2) % 5 == 0)
        );
        assert!(!fp_is_irreducible(&[2, 0, 0, 0, 1], 3)); // x^4+2 = (x^2+x+2)(x^2+2x+2) over F_3
        assert!(fp_is_irreducible(&[1, 1, 1], 2));
    }

    fn ext_ring() -> PadicRing {
        PadicRing::unramified(7, 5, &[-3, 0, 1]).unwrap() // 3 is a non-residue mod 7
    }

    proptest! {
        #[test]
        fn teichmuller_is_root_of_unity(a in 1u64..5) {
            let r = PadicRing::new(5, 8).unwrap();
            let t = r.teichmuller_int(a as i64).unwrap();
            prop_assert!(t.pow(4).is_one());
            prop_assert_eq!(t.as_u64() % 5, a);
        }

        #[test]
        fn teichmuller_multiplicative(a in 1i64..7, b in 1i64..7, c in 0i128..7, d in 0i128..7) {
            let r = PadicRing::new(7, 9).unwrap();
            let ta = r.teichmuller_int(a).unwrap();
            let tb = r.teichmuller_int(b).unwrap();
            prop_assert_eq!(ta.mul(&tb), r.teichmuller_int(a * b % 7).unwrap());
            let w = ext_ring();
            prop_assume!(c != 0 || d != 0);
            let x = w.from_coeffs(&[c, d]).unwrap();
            let y = w.from_coeffs(&[d, c + 1]).unwrap();
            prop_assume!(y.is_unit());
            let lhs = w.teichmuller(&x.mul(&y)).unwrap();
            prop_assert_eq!(lhs, w.teichmuller(&x).unwrap().mul(&w.teichmuller(&y).unwrap()));
        }

        #[test]
        fn invert_is_involution(c in 0i128..2401, d in 0i128..2401) {
            let w = ext_ring();
            let x = w.from_coeffs(&[c, d]).unwrap();
            prop_assume!(x.is_unit());
            let y = x.invert().unwrap();
            prop_assert!(x.mul(&y).is_one());
            prop_assert_eq!(y.invert().unwrap(), x);
        }

        #[test]
        fn valuation_is_additive(a in 1i128..100_000, b in 1i128..100_000, s in 0u32..3, t in 0u32..3) {
            let w = ext_ring();
            let x = w.from_coeffs(&[a, b]).unwrap().mul_p_pow(s);
            let y = w.from_coeffs(&[b, a]).unwrap().mul_p_pow(t);
            if let (Valuation::Finite(vx), Valuation::Finite(vy)) = (x.valuation(), y.valuation()) {
                if vx + vy < w.precision() {
                    prop_assert_eq!(x.mul(&y).valuation(), Valuation::Finite(vx + vy));
                }
            }
        }
    }
}
