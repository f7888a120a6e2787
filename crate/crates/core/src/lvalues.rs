//! Dirichlet characters with values in `Z[ζ_M]`, generalized Bernoulli
//! numbers `B_{1,χ}`, and `p`-adic L-values at `s = 0` tested for
//! divisibility at a fixed prime above `p`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::padic::{is_prime, PadicElement, PadicRing, Valuation};

fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            let mut e = 0;
            while n.is_multiple_of(q) {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn mult_order(a: u64, m: u64) -> u64 {
    let mut x = a % m;
    let mut k = 1;
    while x != 1 % m {
        x = (x as u128 * a as u128 % m as u128) as u64;
        k += 1;
    }
    k
}

/// Cyclotomic polynomial `Φ_m`, low degree first.
pub fn cyclotomic(m: u64) -> Vec<i64> {
    let mut poly = vec![0i64; m as usize + 1];
    poly[0] = -1;
    poly[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            poly = exact_div(&poly, &cyclotomic(d));
        }
    }
    poly
}

fn exact_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db];
        q[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// `Z[ζ_M]` with the power basis `1, ζ, .., ζ^{φ(M)-1}`.
#[derive(Debug, PartialEq, Eq)]
pub struct CycloField {
    level: u64,
    /// `powers[e]` is `ζ^e` in the power basis, for `0 <= e < M`.
    powers: Vec<Vec<i128>>,
}

impl CycloField {
    pub fn new(level: u64) -> Arc<Self> {
        assert!(level >= 1);
        let phi = cyclotomic(level);
        let n = phi.len() - 1;
        let mut powers = Vec::with_capacity(level as usize);
        let mut cur = vec![0i128; n];
        cur[0] = 1;
        for _ in 0..level {
            powers.push(cur.clone());
            // multiply by ζ and reduce with Φ monic
            let top = cur[n - 1];
            let mut next = vec![0i128; n];
            next[1..n].copy_from_slice(&cur[..n - 1]);
            for (k, c) in next.iter_mut().enumerate() {
                *c -= top * phi[k] as i128;
            }
            cur = next;
        }
        Arc::new(CycloField { level, powers })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.powers[0].len()
    }
}

/// `numerator / denominator` with `numerator` in `Z[ζ_M]`, kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloElement {
    field: Arc<CycloField>,
    num: Vec<i128>,
    den: i128,
}

impl CycloElement {
    pub fn zero(field: &Arc<CycloField>) -> Self {
        CycloElement {
            field: field.clone(),
            num: vec![0; field.degree()],
            den: 1,
        }
    }

    pub fn rational(field: &Arc<CycloField>, n: i128, d: i128) -> Self {
        let mut x = Self::zero(field);
        x.num[0] = n;
        x.den = d;
        x.normalize()
    }

    pub fn root_of_unity(field: &Arc<CycloField>, e: u64) -> Self {
        CycloElement {
            field: field.clone(),
            num: field.powers[(e % field.level) as usize].clone(),
            den: 1,
        }
    }

    fn normalize(mut self) -> Self {
        assert!(self.den != 0, "zero denominator");
        if self.den < 0 {
            self.den = -self.den;
            self.num.iter_mut().for_each(|c| *c = -*c);
        }
        let g = self.num.iter().fold(self.den, |g, c| g.gcd(c));
        if g > 1 {
            self.den /= g;
            self.num.iter_mut().for_each(|c| *c /= g);
        }
        self
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn numerator(&self) -> &[i128] {
        &self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| *c == 0)
    }

    pub fn as_rational(&self) -> Option<(i128, i128)> {
        self.num[1..]
            .iter()
            .all(|c| *c == 0)
            .then_some((self.num[0], self.den))
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * other.den + b * self.den)
            .collect();
        CycloElement {
            field: self.field.clone(),
            num,
            den: self.den * other.den,
        }
        .normalize()
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: i128) -> Self {
        CycloElement {
            field: self.field.clone(),
            num: self.num.iter().map(|x| x * c).collect(),
            den: self.den,
        }
        .normalize()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut num = vec![0i128; self.field.degree()];
        for (i, a) in self.num.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if *b == 0 {
                    continue;
                }
                for (k, c) in self.field.powers[(i + j) % self.field.level as usize]
                    .iter()
                    .enumerate()
                {
                    num[k] += a * b * c;
                }
            }
        }
        CycloElement {
            field: self.field.clone(),
            num,
            den: self.den * other.den,
        }
        .normalize()
    }

    /// The automorphism `ζ -> ζ^k`, for `k` prime to the level.
    pub fn galois(&self, k: u64) -> Self {
        assert_eq!(gcd(k, self.field.level), 1);
        let mut out = Self::zero(&self.field);
        for (i, a) in self.num.iter().enumerate() {
            let img = &self.field.powers[(i as u64 * k % self.field.level) as usize];
            for (o, c) in out.num.iter_mut().zip(img) {
                *o += a * c;
            }
        }
        out.den = self.den;
        out.normalize()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "level": self.field.level,
            "numerator": self.num.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "denominator": self.den.to_string(),
            "text": self.to_string(),
        })
    }
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((n, d)) = self.as_rational() {
            return if d == 1 {
                write!(f, "{n}")
            } else {
                write!(f, "{n}/{d}")
            };
        }
        let mut body = String::new();
        for (i, c) in self.num.iter().enumerate().filter(|(_, c)| **c != 0) {
            let mag = c.abs();
            let mono = match i {
                0 => mag.to_string(),
                1 if mag == 1 => "z".to_string(),
                1 => format!("{mag}*z"),
                _ if mag == 1 => format!("z^{i}"),
                _ => format!("{mag}*z^{i}"),
            };
            let neg = *c < 0;
            body.push_str(match (body.is_empty(), neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            });
            body.push_str(&mono);
        }
        if self.den == 1 {
            f.write_str(&body)
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}

/// Standard generators of `(Z/n)^×`: one per odd prime power, and `-1, 5`
/// for `2^e`; each lifted by CRT to be `1` at the other prime powers.
fn unit_generators(n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for (q, e) in factor(n) {
        let qe = q.pow(e);
        let local: Vec<(u64, u64)> = if q == 2 {
            match e {
                1 => vec![],
                2 => vec![(3, 2)],
                _ => vec![(qe - 1, 2), (5, qe / 4)],
            }
        } else {
            let phi = qe / q * (q - 1);
            let g = (2..qe)
                .find(|&g| g % q != 0 && mult_order(g, qe) == phi)
                .expect("primitive root");
            vec![(g, phi)]
        };
        let rest = n / qe;
        for (g, o) in local {
            // x = g mod qe, 1 mod rest
            let lifted = (0..rest.max(1))
                .map(|t| g + qe * t)
                .find(|x| x % rest.max(1) == 1 % rest.max(1))
                .expect("CRT");
            out.push((lifted % n.max(1), o));
        }
    }
    out
}

/// A Dirichlet character modulo `n` with values in `μ_M`, stored as exponents.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    modulus: u64,
    level: u64,
    generators: Vec<(u64, u64)>,
    images: Vec<u64>,
    table: Arc<Vec<u32>>,
}

const NOT_UNIT: u32 = u32::MAX;

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.level == other.level && self.images == other.images
    }
}

impl Eq for DirichletCharacter {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderConstraint {
    Exact(u64),
    Dividing(u64),
}

impl DirichletCharacter {
    /// Character sending the standard generators to `ζ_M^{images[i]}`.
    pub fn from_images(modulus: u64, level: u64, images: &[u64]) -> Result<Self> {
        if modulus == 0 || level == 0 {
            return Err(Error::invalid("modulus and level must be positive"));
        }
        let generators = unit_generators(modulus);
        if images.len() != generators.len() {
            return Err(Error::invalid(format!(
                "modulus {modulus} needs {} generator images",
                generators.len()
            )));
        }
        for (im, (_, o)) in images.iter().zip(&generators) {
            if !((im % level) * o).is_multiple_of(level) {
                return Err(Error::invalid(
                    "generator image order does not divide the generator order",
                ));
            }
        }
        let images: Vec<u64> = images.iter().map(|i| i % level).collect();
        let mut table = vec![NOT_UNIT; modulus as usize];
        let mut frontier = vec![(1 % modulus, 0u64)];
        for ((g, o), im) in generators.iter().zip(&images) {
            let mut next = Vec::with_capacity(frontier.len() * *o as usize);
            for &(x, e) in &frontier {
                let mut y = x;
                let mut f = e;
                for _ in 0..*o {
                    next.push((y, f));
                    y = (y as u128 * *g as u128 % modulus as u128) as u64;
                    f = (f + im) % level;
                }
            }
            frontier = next;
        }
        for (x, e) in frontier {
            table[x as usize] = e as u32;
        }
        Ok(DirichletCharacter {
            modulus,
            level,
            generators,
            images,
            table: Arc::new(table),
        })
    }

    /// Character defined by a value function on units mod `n`, read off the generators.
    fn from_fn(modulus: u64, level: u64, f: impl Fn(u64) -> u64) -> Self {
        let images: Vec<u64> = unit_generators(modulus)
            .iter()
            .map(|(g, _)| f(*g) % level)
            .collect();
        Self::from_images(modulus, level, &images).expect("values of a character")
    }

    pub fn trivial(modulus: u64) -> Self {
        Self::from_fn(modulus, 1, |_| 0)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn generators(&self) -> Vec<u64> {
        self.generators.iter().map(|g| g.0).collect()
    }

    pub fn images(&self) -> &[u64] {
        &self.images
    }

    /// Exponent of `χ(a)`, or `None` when `gcd(a, n) > 1`.
    pub fn value(&self, a: i64) -> Option<u64> {
        let r = a.rem_euclid(self.modulus as i64) as usize;
        match self.table[r] {
            NOT_UNIT => None,
            e => Some(e as u64),
        }
    }

    pub fn order(&self) -> u64 {
        let g = self.images.iter().fold(self.level, |g, &i| gcd(g, i));
        self.level / g
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_odd(&self) -> bool {
        self.value(-1).expect("-1 is a unit") != 0
    }

    pub fn with_level(&self, level: u64) -> Result<Self> {
        if !level.is_multiple_of(self.level) {
            return Err(Error::invalid(format!(
                "level {level} is not a multiple of {}",
                self.level
            )));
        }
        let k = level / self.level;
        let images: Vec<u64> = self.images.iter().map(|i| i * k).collect();
        Self::from_images(self.modulus, level, &images)
    }

    fn trivial_on_kernel(&self, d: u64) -> bool {
        let mut a = 1 % d.max(1);
        while a < self.modulus {
            if a != 0 && self.table[a as usize] != 0 && self.table[a as usize] != NOT_UNIT {
                return false;
            }
            a += d;
        }
        true
    }

    pub fn conductor(&self) -> u64 {
        let mut d = self.modulus;
        for (q, _) in factor(self.modulus) {
            while d.is_multiple_of(q) && self.trivial_on_kernel(d / q) {
                d /= q;
            }
        }
        d
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// The primitive character inducing this one.
    pub fn primitive(&self) -> Self {
        let f = self.conductor();
        if f == self.modulus {
            return self.clone();
        }
        Self::from_fn(f, self.level, |a| {
            let b = (0..self.modulus)
                .map(|t| a + f * t)
                .find(|b| gcd(*b, self.modulus) == 1)
                .expect("lift");
            self.value(b as i64).expect("unit")
        })
    }

    pub fn pow(&self, k: i64) -> Self {
        let level = self.level as i64;
        let images: Vec<u64> = self
            .images
            .iter()
            .map(|&i| (i as i64 * k).rem_euclid(level) as u64)
            .collect();
        Self::from_images(self.modulus, self.level, &images).expect("power")
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    /// Product on the lcm of moduli and levels.
    pub fn mul(&self, other: &Self) -> Self {
        let n = lcm(self.modulus, other.modulus);
        let m = lcm(self.level, other.level);
        let (k1, k2) = (m / self.level, m / other.level);
        Self::from_fn(n, m, |a| {
            let x = self.value(a as i64).expect("unit");
            let y = other.value(a as i64).expect("unit");
            x * k1 + y * k2
        })
    }

    /// Sum of all values, which vanishes for nontrivial characters.
    pub fn value_sum(&self) -> CycloElement {
        let field = CycloField::new(self.level);
        let mut counts = vec![0i128; self.level as usize];
        for &e in self.table.iter() {
            if e != NOT_UNIT {
                counts[e as usize] += 1;
            }
        }
        let mut out = CycloElement::zero(&field);
        for (e, c) in counts.iter().enumerate() {
            if *c != 0 {
                out = out.add(&CycloElement::root_of_unity(&field, e as u64).scale(*c));
            }
        }
        out
    }

    pub fn label(&self) -> String {
        format!("{}:{:?}", self.modulus, self.images)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "modulus": self.modulus,
            "level": self.level,
            "order": self.order(),
            "conductor": self.conductor(),
            "generators": self.generators(),
            "generator_images": self.images,
            "parity": if self.is_odd() { "odd" } else { "even" },
        })
    }
}

/// All characters mod `modulus` with values in `μ_m` meeting the order
/// constraint, in lexicographic order of generator images.
pub fn enumerate_characters(
    modulus: u64,
    constraint: OrderConstraint,
) -> Result<Vec<DirichletCharacter>> {
    if modulus == 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    let level = match constraint {
        OrderConstraint::Exact(m) | OrderConstraint::Dividing(m) => m,
    };
    if level == 0 {
        return Err(Error::invalid("order must be positive"));
    }
    let gens = unit_generators(modulus);
    let choices: Vec<Vec<u64>> = gens
        .iter()
        .map(|(_, o)| {
            let k = gcd(*o, level);
            (0..k).map(|j| j * (level / k)).collect()
        })
        .collect();
    let mut combos: Vec<Vec<u64>> = vec![vec![]];
    for c in &choices {
        combos = combos
            .into_iter()
            .flat_map(|prefix| {
                c.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(*x);
                    v
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for images in combos {
        let ch = DirichletCharacter::from_images(modulus, level, &images)?;
        let keep = match constraint {
            OrderConstraint::Exact(m) => ch.order() == m,
            OrderConstraint::Dividing(_) => true,
        };
        if keep {
            out.push(ch);
        }
    }
    Ok(out)
}

/// `B_{1,χ} = (1/f) Σ_{a=1}^{f} χ(a) a` for the primitive character `χ` of conductor `f`.
pub fn bernoulli1(chi: &DirichletCharacter) -> Result<CycloElement> {
    if chi.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    let prim = chi.primitive();
    let f = prim.modulus();
    let field = CycloField::new(prim.level());
    let mut num = vec![0i128; field.degree()];
    for a in 1..=f {
        if let Some(e) = prim.value(a as i64) {
            for (o, c) in num.iter_mut().zip(&field.powers[e as usize]) {
                *o += a as i128 * c;
            }
        }
    }
    Ok(CycloElement {
        field,
        num,
        den: f as i128,
    }
    .normalize())
}

/// Kronecker symbol `(d / n)` for a fundamental discriminant `d`.
pub fn kronecker(d: i64, n: i64) -> Result<i8> {
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    Ok(kronecker_raw(d, n))
}

pub fn is_fundamental(d: i64) -> bool {
    let squarefree = |m: i64| factor(m.unsigned_abs()).iter().all(|(_, e)| *e == 1);
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

fn kronecker_raw(d: i64, n: i64) -> i8 {
    if n == 0 {
        return if d.abs() == 1 { 1 } else { 0 };
    }
    let mut sign = 1i8;
    if n < 0 && d < 0 {
        sign = -1;
    }
    for (q, e) in factor(n.unsigned_abs()) {
        let s: i8 = if q == 2 {
            match d.rem_euclid(8) {
                1 | 7 => 1,
                3 | 5 => -1,
                _ => 0,
            }
        } else {
            let r = d.rem_euclid(q as i64) as u64;
            if r == 0 {
                0
            } else if pow_mod(r, (q - 1) / 2, q) == 1 {
                1
            } else {
                -1
            }
        };
        if e % 2 == 1 {
            sign *= s;
        } else if s == 0 {
            sign = 0;
        }
    }
    sign
}

/// The quadratic character `(d / ·)` of conductor `|d|`.
pub fn quadratic_character(d: i64) -> Result<DirichletCharacter> {
    if !is_fundamental(d) {
        return Err(Error::NotFundamental(d));
    }
    let n = d.unsigned_abs();
    Ok(DirichletCharacter::from_fn(n, 2, |a| {
        if kronecker_raw(d, a as i64) == 1 {
            0
        } else {
            1
        }
    }))
}

/// The prime of `Z[ζ_M]` above `p` cut out by `ζ -> z`, for a fixed
/// `z in F_q` of exact order `M`, together with its completion `W(F_q)`.
#[derive(Clone, Debug)]
pub struct PrimeOverP {
    p: u64,
    level: u64,
    field_poly: Vec<u64>,
    root: Vec<u64>,
    lift: PadicElement,
}

fn first_irreducible(p: u64, k: usize) -> Vec<i64> {
    if k == 1 {
        return vec![0, 1];
    }
    let count = p.pow(k as u32);
    for idx in 0..count {
        let mut h = Vec::with_capacity(k + 1);
        let mut x = idx;
        for _ in 0..k {
            h.push((x % p) as i64);
            x /= p;
        }
        h.push(1);
        if PadicRing::unramified(p, 1, &h).is_ok() {
            return h;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

fn precision_for(p: u64) -> u32 {
    let mut n = 0;
    let mut m: u128 = 1;
    while n < 12 && m * (p as u128) <= 1u128 << 62 {
        m *= p as u128;
        n += 1;
    }
    n
}

impl PrimeOverP {
    /// The default prime: `F_q` is defined by the first irreducible monic
    /// polynomial in lexicographic coefficient order, and `z` is the first
    /// element of exact order `M` in that order.
    pub fn new(p: u64, level: u64) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not an odd prime")));
        }
        if level == 0 || level.is_multiple_of(p) {
            return Err(Error::invalid(format!(
                "level {level} must be prime to {p}"
            )));
        }
        let k = mult_order(p % level.max(1), level.max(1)).max(1) as usize;
        let h = first_irreducible(p, k);
        let res = PadicRing::unramified(p, 1, &h)?;
        let q = res.residue_size();
        let primes: Vec<u64> = factor(level).iter().map(|f| f.0).collect();
        for idx in 1..q {
            let mut coeffs = Vec::with_capacity(k);
            let mut x = idx;
            for _ in 0..k {
                coeffs.push((x % p) as i128);
                x /= p;
            }
            let z = res.from_coeffs(&coeffs)?;
            if z.pow(level).is_one() && primes.iter().all(|l| !z.pow(level / l).is_one()) {
                return Self::with_root(p, level, &h, &coeffs);
            }
        }
        unreachable!("F_q^× is cyclic of order divisible by the level")
    }

    /// The prime `ζ -> z` for an explicit root `z` (coefficients over `F_p[x]/(h)`).
    pub fn with_root(p: u64, level: u64, h: &[i64], root: &[i128]) -> Result<Self> {
        let res = PadicRing::unramified(p, 1, h)?;
        let z = res.from_coeffs(root)?;
        if !z.pow(level).is_one() || factor(level).iter().any(|(l, _)| z.pow(level / l).is_one()) {
            return Err(Error::invalid(format!(
                "root does not have exact order {level}"
            )));
        }
        let ring = PadicRing::unramified(p, precision_for(p), h)?;
        let lift = ring.teichmuller(&ring.from_coeffs(root)?)?;
        Ok(PrimeOverP {
            p,
            level,
            field_poly: ring.extension_poly().iter().map(|c| c % p).collect(),
            root: z.coeffs().to_vec(),
            lift,
        })
    }

    /// The prime `ζ -> z^k`.
    pub fn conjugate(&self, k: u64) -> Result<Self> {
        if gcd(k, self.level) != 1 {
            return Err(Error::invalid("exponent must be prime to the level"));
        }
        let res = self.lift.ring().residue_field();
        let z = res
            .from_coeffs(&self.root.iter().map(|&c| c as i128).collect::<Vec<_>>())?
            .pow(k);
        let h: Vec<i64> = self.field_poly.iter().map(|&c| c as i64).collect();
        let root: Vec<i128> = z.coeffs().iter().map(|&c| c as i128).collect();
        Self::with_root(self.p, self.level, &h, &root)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// Teichmüller character `ω̃` mod `p`, with `z^{e(a)} = a` in `F_q`.
    pub fn teichmuller_character(&self) -> DirichletCharacter {
        let res = self.lift.ring().residue_field();
        let z = res
            .from_coeffs(&self.root.iter().map(|&c| c as i128).collect::<Vec<_>>())
            .expect("root");
        let mut dlog = vec![0u64; self.p as usize];
        let mut x = res.one();
        for e in 0..self.level {
            if res.degree() == 1 || x.coeffs()[1..].iter().all(|c| *c == 0) {
                dlog[x.coeffs()[0] as usize] = e;
            }
            x = x.mul(&z);
        }
        DirichletCharacter::from_fn(self.p, self.level, |a| dlog[a as usize])
    }

    fn image(&self, x: &CycloElement) -> PadicElement {
        let ring = self.lift.ring();
        let mut acc = ring.zero();
        let mut zpow = ring.one();
        let k = self.level / x.field.level;
        let step = self.lift.pow(k);
        for c in &x.num {
            acc = acc.add(&zpow.mul(&ring.from_int(*c)));
            zpow = zpow.mul(&step);
        }
        acc
    }

    /// `v_𝔭(x)`, or `None` for `x = 0`. Elements of a level dividing `M`
    /// embed via `ζ_{level} = ζ_M^{M/level}`.
    pub fn valuation(&self, x: &CycloElement) -> Result<Option<i64>> {
        if !self.level.is_multiple_of(x.field.level) {
            return Err(Error::invalid(
                "element level does not divide the prime's level",
            ));
        }
        if x.is_zero() {
            return Ok(None);
        }
        let mut den = x.den;
        let mut vden = 0i64;
        while den % self.p as i128 == 0 {
            den /= self.p as i128;
            vden += 1;
        }
        match self.image(x).valuation() {
            Valuation::Finite(v) => Ok(Some(v as i64 - vden)),
            Valuation::AtLeast(n) if (n as i64) - vden >= 1 => Ok(Some(n as i64 - vden)),
            Valuation::AtLeast(_) => Err(Error::precision("valuation at the prime above p")),
        }
    }

    /// `x in 𝔭` (for `𝔭`-integral `x`): valuation at least one.
    pub fn divides(&self, x: &CycloElement) -> Result<bool> {
        Ok(self.valuation(x)?.is_none_or(|v| v >= 1))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "level": self.level,
            "residue_field_poly": self.field_poly,
            "root": self.root,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpValue {
    /// `-(1 - θ(p)) B_{1,θ}`.
    pub value: CycloElement,
    pub bernoulli: CycloElement,
    /// Exponent of `θ(p)`, absent when `p` divides the conductor.
    pub theta_at_p: Option<u64>,
    pub exceptional: bool,
    pub divisible: bool,
    pub bernoulli_divisible: bool,
}

impl LpValue {
    pub fn to_json(&self) -> Value {
        json!({
            "value": self.value.to_json(),
            "bernoulli": self.bernoulli.to_json(),
            "theta_at_p": self.theta_at_p,
            "exceptional": self.exceptional,
            "divisible": self.divisible,
            "bernoulli_divisible": self.bernoulli_divisible,
        })
    }
}

/// `L_p(θω̃, 0) = -(1 - θ(p)) B_{1,θ}` for odd `θ`, with divisibility measured at `prime`.
pub fn lp_at_zero(theta: &DirichletCharacter, prime: &PrimeOverP) -> Result<LpValue> {
    if theta.is_trivial() || !theta.is_odd() {
        return Err(Error::EvenCharacter);
    }
    let theta = theta.primitive().with_level(prime.level())?;
    let b = bernoulli1(&theta)?;
    let field = b.field.clone();
    let theta_at_p = theta.value(prime.p() as i64);
    let euler = match theta_at_p {
        Some(e) => {
            CycloElement::rational(&field, 1, 1).sub(&CycloElement::root_of_unity(&field, e))
        }
        None => CycloElement::rational(&field, 1, 1),
    };
    let value = euler.mul(&b).neg();
    Ok(LpValue {
        divisible: prime.divides(&value)?,
        bernoulli_divisible: prime.divides(&b)?,
        exceptional: theta_at_p == Some(0),
        theta_at_p,
        bernoulli: b,
        value,
    })
}

/// Kubota–Leopoldt value `L_p(χ, 0)` for even `χ`: the interpolation at
/// `s = 0` goes through `χω̃^{-1}`.
pub fn kubota_leopoldt_at_zero(chi: &DirichletCharacter, prime: &PrimeOverP) -> Result<LpValue> {
    if chi.is_odd() {
        return Err(Error::invalid(
            "the Kubota-Leopoldt function vanishes identically on odd characters",
        ));
    }
    let omega = prime.teichmuller_character();
    lp_at_zero(&chi.with_level(prime.level())?.mul(&omega.inverse()), prime)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchRow {
    pub psi: DirichletCharacter,
    pub kappa_disc: i64,
    /// `p | B_{1,ψ̃^{-1}}` and `p | B_{1,ω̃^{-1}ψ̃κ}`.
    pub divisible: [bool; 2],
    /// `ψ̃^{-1}(p) = 1` and `ω̃ψ̃^{-1}κ(p) = 1`.
    pub exceptional: [bool; 2],
}

impl SearchRow {
    pub fn both_divisible(&self) -> bool {
        self.divisible[0] && self.divisible[1]
    }

    pub fn to_json(&self) -> Value {
        json!({
            "conductor": self.psi.conductor(),
            "order": self.psi.order(),
            "generators": self.psi.generators(),
            "generator_images": self.psi.images(),
            "kappa_disc": self.kappa_disc,
            "divisible": self.divisible,
            "exceptional": self.exceptional,
            "both_divisible": self.both_divisible(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub prime: PrimeOverP,
    pub rows: Vec<SearchRow>,
}

impl SearchReport {
    pub fn hits(&self) -> impl Iterator<Item = &SearchRow> {
        self.rows.iter().filter(|r| r.both_divisible())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "prime": self.prime.to_json(),
            "rows": self.rows.iter().map(SearchRow::to_json).collect::<Vec<_>>(),
            "hits": self.hits().count(),
        })
    }
}

pub const DEFAULT_KAPPA_DISCS: &[i64] = &[-3, -4, -7, -8, -11, -15, -19, -20];

pub fn search_level(p: u64, order: u64) -> u64 {
    lcm(lcm(p - 1, order), 2)
}

/// Odd primitive characters of exact conductor and order.
pub fn odd_primitive_characters(conductor: u64, order: u64) -> Result<Vec<DirichletCharacter>> {
    Ok(
        enumerate_characters(conductor, OrderConstraint::Exact(order))?
            .into_iter()
            .filter(|c| c.is_primitive() && c.is_odd())
            .collect(),
    )
}

/// For each odd primitive `ψ̃` of the given conductor and order and each
/// imaginary quadratic `κ`, test `B_{1,ψ̃^{-1}}` and `B_{1,ω̃^{-1}ψ̃κ}` at the
/// default prime above `p`.
pub fn divisibility_search(
    p: u64,
    conductor: u64,
    order: u64,
    kappa_discs: &[i64],
) -> Result<SearchReport> {
    if p == 2 || !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not an odd prime")));
    }
    let prime = PrimeOverP::new(p, search_level(p, order))?;
    let psis = odd_primitive_characters(conductor, order)?;
    divisibility_search_at(&prime, &psis, kappa_discs)
}

pub fn divisibility_search_at(
    prime: &PrimeOverP,
    psis: &[DirichletCharacter],
    kappa_discs: &[i64],
) -> Result<SearchReport> {
    let mut kappas = Vec::new();
    for &d in kappa_discs {
        if d >= 0 {
            return Err(Error::invalid(format!(
                "{d} is not an imaginary quadratic discriminant"
            )));
        }
        kappas.push((d, quadratic_character(d)?));
    }
    let omega = prime.teichmuller_character();
    let level = prime.level();
    let cells: Vec<(usize, usize)> = (0..psis.len())
        .flat_map(|i| (0..kappas.len()).map(move |j| (i, j)))
        .collect();
    let mut rows = cells
        .par_iter()
        .map(|&(i, j)| -> Result<SearchRow> {
            let psi = psis[i].with_level(level)?;
            let (d, kappa) = &kappas[j];
            let first = lp_at_zero(&psi.inverse(), prime)?;
            let twisted = omega.inverse().mul(&psi).mul(kappa);
            let second = lp_at_zero(&twisted, prime)?;
            let partner = omega.mul(&psi.inverse()).mul(kappa).primitive();
            Ok(SearchRow {
                psi: psis[i].clone(),
                kappa_disc: *d,
                divisible: [first.bernoulli_divisible, second.bernoulli_divisible],
                exceptional: [
                    first.exceptional,
                    partner.value(prime.p() as i64) == Some(0),
                ],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| (a.psi.images(), a.kappa_disc).cmp(&(b.psi.images(), b.kappa_disc)));
    Ok(SearchReport {
        prime: prime.clone(),
        rows,
    })
}

/// Classical Bernoulli numbers `B_0..=B_n` from `Σ_{j<=m} C(m+1, j) B_j = 0`.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=n {
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// Even `k` in `[2, p-3]` with `p` dividing the numerator of `B_k`.
pub fn irregular_indices(p: u64) -> Vec<u64> {
    let b = bernoulli_numbers(p as usize);
    (2..p.saturating_sub(2))
        .step_by(2)
        .filter(|&k| (b[k as usize].numer() % BigInt::from(p)).is_zero())
        .collect()
}

/// `r mod p` for a `p`-integral rational.
pub fn rational_mod_p(r: &BigRational, p: u64) -> Option<u64> {
    let pp = BigInt::from(p);
    let den = r.denom().mod_floor(&pp);
    if den.is_zero() {
        return None;
    }
    let num = r.numer().mod_floor(&pp).to_u64()?;
    let den = den.to_u64()?;
    Some(num * pow_mod(den, p - 2, p) % p)
}

/// Residue of a `𝔭`-integral element in `Z_p` when its image is rational mod `p`.
pub fn residue_mod_p(x: &CycloElement, prime: &PrimeOverP) -> Result<Option<u64>> {
    let v = prime.valuation(x)?;
    if v.is_some_and(|v| v < 0) {
        return Ok(None);
    }
    let mut den = x.den;
    let p = prime.p() as i128;
    let mut vden = 0u32;
    while den % p == 0 {
        den /= p;
        vden += 1;
    }
    let img = prime.image(x).div_p_pow(vden);
    let inv = img.ring().from_int(den).invert()?;
    let r = img.mul(&inv).residue();
    if r.coeffs()[1..].iter().any(|c| *c != 0) {
        return Ok(None);
    }
    Ok(Some(r.coeffs()[0]))
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "chi mod {} -> zeta_{}^{:?}",
            self.modulus, self.level, self.images
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic(36).len(), 13);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(
            enumerate_characters(5, OrderConstraint::Dividing(4))
                .unwrap()
                .len(),
            4
        );
        let q4 = enumerate_characters(4, OrderConstraint::Exact(2)).unwrap();
        assert_eq!(q4.len(), 1);
        assert_eq!(q4[0].value(3), Some(1));
        // the dual group is isomorphic to the group: count elements of order 6 directly
        let brute = (1..28u64)
            .filter(|a| gcd(*a, 28) == 1 && mult_order(*a, 28) == 6)
            .count();
        assert_eq!(
            enumerate_characters(28, OrderConstraint::Exact(6))
                .unwrap()
                .len(),
            brute
        );
        assert_eq!(brute, 6);
    }

    #[test]
    fn characters_are_homomorphisms() {
        for n in [28u64, 37, 40, 555] {
            for chi in enumerate_characters(n, OrderConstraint::Dividing(12))
                .unwrap()
                .iter()
                .take(20)
            {
                for a in 1..n as i64 {
                    for b in [3i64, 7, 11] {
                        match (chi.value(a), chi.value(b), chi.value(a * b)) {
                            (Some(x), Some(y), Some(z)) => assert_eq!((x + y) % 12, z),
                            (_, _, None) => {
                                assert!(chi.value(a).is_none() || chi.value(b).is_none())
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn conductor_examples() {
        let k = quadratic_character(-4).unwrap();
        assert_eq!(k.conductor(), 4);
        let lifted = k.mul(&DirichletCharacter::trivial(3));
        assert_eq!(lifted.modulus(), 12);
        assert_eq!(lifted.conductor(), 4);
        assert_eq!(lifted.primitive(), k);
        let prims = odd_primitive_characters(28, 6).unwrap();
        assert!(!prims.is_empty());
        assert!(prims.iter().all(|c| c.conductor() == 28 && c.is_odd()));
    }

    #[test]
    fn bernoulli_examples() {
        let b = bernoulli1(&quadratic_character(-4).unwrap()).unwrap();
        assert_eq!(b.as_rational(), Some((-1, 2)));
        let b = bernoulli1(&quadratic_character(-3).unwrap()).unwrap();
        assert_eq!(b.as_rational(), Some((-1, 3)));
        // class number formula: B_{1,χ_d} = -2 h / w
        assert_eq!(
            bernoulli1(&quadratic_character(-23).unwrap())
                .unwrap()
                .as_rational(),
            Some((-3, 1))
        );
        assert_eq!(
            bernoulli1(&DirichletCharacter::trivial(5)),
            Err(Error::TrivialCharacter)
        );
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-4, 3), Ok(-1));
        assert_eq!(kronecker(-4, 5), Ok(1));
        assert_eq!(kronecker(-4, 2), Ok(0));
        assert_eq!(kronecker(-12, 5), Err(Error::NotFundamental(-12)));
        assert_eq!(kronecker(5, 0), Ok(0));
        // quadratic reciprocity oracle for odd primes against d = -q*
        assert_eq!(kronecker(-7, 2), Ok(1));
        assert_eq!(kronecker(-7, 11), Ok(1));
    }

    #[test]
    fn irregularity_of_37() {
        let prime = PrimeOverP::new(37, 36).unwrap();
        let omega = prime.teichmuller_character();
        assert_eq!(omega.order(), 36);
        for a in 1..37i64 {
            // ω̃(a) reduces to a at the chosen prime
            let x = CycloElement::root_of_unity(&CycloField::new(36), omega.value(a).unwrap());
            assert_eq!(residue_mod_p(&x, &prime).unwrap(), Some(a as u64));
        }
        let hits: Vec<i64> = (1..36)
            .step_by(2)
            .filter(|&k| prime.divides(&bernoulli1(&omega.pow(k)).unwrap()).unwrap())
            .collect();
        assert_eq!(hits, vec![31]);
        assert_eq!(irregular_indices(37), vec![32]);
        let kappa = quadratic_character(-4).unwrap();
        let even = omega.pow(5).mul(&kappa);
        assert!(bernoulli1(&even).unwrap().is_zero());
        let kl = kubota_leopoldt_at_zero(&even, &prime).unwrap();
        assert!(!kl.divisible);
        assert_eq!(lp_at_zero(&even, &prime), Err(Error::EvenCharacter));
    }

    #[test]
    fn congruence_with_classical_bernoulli() {
        let b = bernoulli_numbers(40);
        assert_eq!(b[1], BigRational::new((-1).into(), 2.into()));
        assert_eq!(b[12], BigRational::new((-691).into(), 2730.into()));
        for p in [5u64, 7, 11, 13, 37] {
            let prime = PrimeOverP::new(p, p - 1).unwrap();
            let omega = prime.teichmuller_character();
            for k in (1..p - 2).step_by(2) {
                let lhs =
                    residue_mod_p(&bernoulli1(&omega.pow(k as i64)).unwrap(), &prime).unwrap();
                let rhs = rational_mod_p(
                    &(b[k as usize + 1].clone() / BigRational::from_integer((k + 1).into())),
                    p,
                );
                assert_eq!(lhs, rhs, "p = {p}, k = {k}");
            }
        }
    }

    #[test]
    fn exceptional_zero_vanishes() {
        // θ = (-4/·) at p = 5: θ(5) = 1
        let prime = PrimeOverP::new(5, 4).unwrap();
        let r = lp_at_zero(&quadratic_character(-4).unwrap(), &prime).unwrap();
        assert!(r.exceptional && r.divisible && r.value.is_zero());
        assert!(!r.bernoulli_divisible);
        let r = lp_at_zero(&quadratic_character(-3).unwrap(), &prime).unwrap();
        assert_eq!(r.theta_at_p, Some(2));
        assert!(!r.exceptional);
    }

    #[test]
    fn search_galois_equivariance() {
        let prime = PrimeOverP::new(5, search_level(5, 6)).unwrap();
        let psis = odd_primitive_characters(28, 6).unwrap();
        let base = divisibility_search_at(&prime, &psis, DEFAULT_KAPPA_DISCS).unwrap();
        for k in [5u64, 7, 11] {
            let conj: Vec<DirichletCharacter> = psis.iter().map(|c| c.pow(k as i64)).collect();
            let moved =
                divisibility_search_at(&prime.conjugate(k).unwrap(), &psis, DEFAULT_KAPPA_DISCS)
                    .unwrap();
            let direct = divisibility_search_at(&prime, &conj, DEFAULT_KAPPA_DISCS).unwrap();
            for r in &direct.rows {
                let src = r.psi.pow(inv_mod(k, 6) as i64);
                let m = moved
                    .rows
                    .iter()
                    .find(|x| x.psi == src && x.kappa_disc == r.kappa_disc)
                    .unwrap();
                assert_eq!((m.divisible, m.exceptional), (r.divisible, r.exceptional));
            }
        }
        assert_eq!(base.rows.len(), psis.len() * DEFAULT_KAPPA_DISCS.len());
    }

    fn inv_mod(k: u64, m: u64) -> u64 {
        (1..m).find(|x| x * k % m == 1).unwrap()
    }

    fn arb_char() -> impl Strategy<Value = DirichletCharacter> {
        (
            prop::sample::select(vec![5u64, 7, 12, 13, 15, 16, 21, 28, 39]),
            any::<prop::sample::Index>(),
        )
            .prop_map(|(n, i)| {
                let all = enumerate_characters(n, OrderConstraint::Dividing(12)).unwrap();
                all[i.index(all.len())].clone()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn orthogonality(chi in arb_char()) {
            let s = chi.value_sum();
            prop_assert_eq!(s.is_zero(), !chi.is_trivial());
        }

        #[test]
        fn galois_equivariance(chi in arb_char(), k in prop::sample::select(vec![1u64, 5, 7, 11])) {
            prop_assume!(!chi.is_trivial());
            let b = bernoulli1(&chi).unwrap();
            prop_assert_eq!(bernoulli1(&chi.pow(k as i64)).unwrap(), b.galois(k));
        }

        #[test]
        fn even_characters_vanish(chi in arb_char()) {
            prop_assume!(!chi.is_trivial() && !chi.is_odd());
            prop_assert!(bernoulli1(&chi).unwrap().is_zero());
        }
    }
}
