//! Truncated power series `O[[t1, .., tr]] / (p^N, total degree D)` and the
//! univariate polynomial machinery behind Weierstrass preparation.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg;
use crate::padic::{PadicElement, PadicRing, Valuation};

pub const MAX_VARS: usize = 3;

/// Exponent tuple; entries past the ring's variable count are zero.
pub type Exponent = [u32; MAX_VARS];

fn total_degree(e: &Exponent) -> u32 {
    e.iter().sum()
}

// ---------------------------------------------------------------------------
// Univariate polynomials
// ---------------------------------------------------------------------------

/// Dense univariate polynomial over a [`PadicRing`], low degree first.
/// Trailing zeros are kept only until [`UniPoly::trim`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    ring: PadicRing,
    coeffs: Vec<PadicElement>,
}

impl UniPoly {
    pub fn new(ring: &PadicRing, coeffs: Vec<PadicElement>) -> Self {
        let mut p = UniPoly {
            ring: ring.clone(),
            coeffs,
        };
        p.trim();
        p
    }

    pub fn from_ints(ring: &PadicRing, coeffs: &[i128]) -> Self {
        Self::new(ring, coeffs.iter().map(|&c| ring.from_int(c)).collect())
    }

    pub fn zero(ring: &PadicRing) -> Self {
        Self::new(ring, Vec::new())
    }

    pub fn constant(c: PadicElement) -> Self {
        let ring = c.ring().clone();
        Self::new(&ring, vec![c])
    }

    /// `t^k`.
    pub fn monomial(ring: &PadicRing, k: usize) -> Self {
        let mut coeffs = vec![ring.zero(); k + 1];
        coeffs[k] = ring.one();
        Self::new(ring, coeffs)
    }

    pub fn ring(&self) -> &PadicRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[PadicElement] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> PadicElement {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Monic with every lower coefficient divisible by `p`.
    pub fn is_distinguished(&self) -> bool {
        self.is_monic()
            && self.coeffs[..self.coeffs.len() - 1]
                .iter()
                .all(|c| !c.valuation().is_unit())
    }

    /// Eisenstein: distinguished with constant term of valuation exactly one.
    pub fn is_eisenstein(&self) -> bool {
        self.is_distinguished()
            && self.degree() >= Some(1)
            && self.coeffs[0].valuation() == Valuation::Finite(1)
    }

    /// Irreducibility certificate available without factoring: degree one,
    /// or Eisenstein. Anything else is an unchecked precondition.
    pub fn is_certified_irreducible(&self) -> bool {
        self.degree() == Some(1) || self.is_eisenstein()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k).add(&other.coeff(k))).collect();
        Self::new(&self.ring, coeffs)
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.ring, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        let mut coeffs = vec![self.ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Self::new(&self.ring, coeffs)
    }

    pub fn scale(&self, c: &PadicElement) -> Self {
        Self::new(&self.ring, self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    /// Division with remainder by a monic polynomial; exact, no precision loss.
    pub fn divrem_monic(&self, divisor: &Self) -> (Self, Self) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let d = divisor.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Self::zero(&self.ring), self.clone());
        }
        let mut quot = vec![self.ring.zero(); rem.len() - d];
        for k in (d..rem.len()).rev() {
            let c = rem[k].clone();
            if c.is_zero() {
                continue;
            }
            quot[k - d] = c.clone();
            for (i, di) in divisor.coeffs.iter().enumerate() {
                rem[k - d + i] = rem[k - d + i].sub(&c.mul(di));
            }
        }
        rem.truncate(d);
        (Self::new(&self.ring, quot), Self::new(&self.ring, rem))
    }

    pub fn rem_monic(&self, divisor: &Self) -> Self {
        self.divrem_monic(divisor).1
    }

    pub fn mulmod(&self, other: &Self, modulus: &Self) -> Self {
        self.mul(other).rem_monic(modulus)
    }

    pub fn powmod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut acc = Self::constant(self.ring.one()).rem_monic(modulus);
        let mut base = self.rem_monic(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, modulus);
            }
            base = base.mulmod(&base, modulus);
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: &PadicElement) -> PadicElement {
        let mut acc = self.ring.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Minimum coefficient valuation.
    pub fn valuation(&self) -> Valuation {
        let n = self.ring.precision();
        self.coeffs
            .iter()
            .filter_map(|c| c.valuation().finite())
            .min()
            .map_or(Valuation::AtLeast(n), Valuation::Finite)
    }

    /// Every coefficient vanishes modulo `p^k`.
    pub fn is_zero_mod_p_pow(&self, k: u32) -> bool {
        self.coeffs.iter().all(|c| match c.valuation() {
            Valuation::Finite(v) => v >= k,
            Valuation::AtLeast(_) => true,
        })
    }

    /// Inverse modulo a distinguished polynomial `m`, for `self` with unit
    /// constant term (which makes it a unit in the local ring `W[t]/(m)`).
    pub fn inverse_mod(&self, m: &Self) -> Result<Self> {
        let a = self.rem_monic(m);
        let lam = m.degree().unwrap_or(0);
        if lam == 0 {
            return Ok(Self::zero(&self.ring));
        }
        if !a.coeff(0).is_unit() {
            return Err(Error::NonUnit);
        }
        // Residue inverse modulo (p, t^lam) by power-series inversion.
        let c0_inv = a.coeff(0).invert()?;
        let mut inv = vec![c0_inv.clone()];
        for k in 1..lam {
            let mut s = self.ring.zero();
            for j in 1..=k {
                s = s.add(&a.coeff(j).mul(&inv[k - j]));
            }
            inv.push(s.mul(&c0_inv).neg());
        }
        let mut y = Self::new(&self.ring, inv);
        // Newton: y <- y (2 - a y); each step doubles the p-adic accuracy.
        let two = Self::constant(self.ring.from_int(2));
        let mut steps = 0;
        loop {
            let e = a.mulmod(&y, m);
            let one = Self::constant(self.ring.one());
            if e.sub(&one).is_zero() {
                return Ok(y);
            }
            y = y.mulmod(&two.sub(&e), m);
            steps += 1;
            if steps > 2 * (self.ring.precision() + 2) {
                return Err(Error::precision(
                    "inverse modulo distinguished polynomial did not converge",
                ));
            }
        }
    }

    /// Canonical text: descending degree, coefficients in `[0, p^N)`.
    pub fn canonical_string(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            parts.push(signed_term(c, mono));
        }
        join_terms(parts)
    }
}

fn signed_term(c: &PadicElement, mono: String) -> (bool, String) {
    let (neg, mag) = c.signed_parts();
    let body = if mono.is_empty() {
        mag
    } else if mag == "1" {
        mono
    } else {
        format!("{mag}*{mono}")
    };
    (neg, body)
}

fn join_terms(parts: Vec<(bool, String)>) -> String {
    let mut out = String::new();
    for (i, (neg, body)) in parts.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

/// Determinant of the Sylvester matrix of `f` (declared degree `len-1`) and
/// `g` (declared degree `len-1`), modulo `p^N`.
pub fn resultant(f: &UniPoly, g: &UniPoly) -> PadicElement {
    let ring = f.ring().clone();
    let m = f.coeffs.len().saturating_sub(1);
    let n = g.coeffs.len().saturating_sub(1);
    if f.is_zero() || g.is_zero() {
        return ring.zero();
    }
    if m == 0 {
        return f.coeff(0).pow(n as u64);
    }
    if n == 0 {
        return g.coeff(0).pow(m as u64);
    }
    let size = m + n;
    let mut mat = vec![vec![ring.zero(); size]; size];
    // Rows 0..n: shifts of f; rows n..n+m: shifts of g. Highest degree first.
    for i in 0..n {
        for (k, c) in f.coeffs.iter().enumerate() {
            mat[i][i + m - k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in g.coeffs.iter().enumerate() {
            mat[n + i][i + n - k] = c.clone();
        }
    }
    linalg::determinant(&ring, &mat)
}

// ---------------------------------------------------------------------------
// Truncated series
// ---------------------------------------------------------------------------

#[derive(Debug, PartialEq, Eq, Hash)]
struct SeriesRingData {
    base: PadicRing,
    vars: usize,
    trunc: u32,
}

/// `O[[t1..tr]] / (p^N, deg >= D)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeriesRing(Arc<SeriesRingData>);

impl SeriesRing {
    pub fn new(base: &PadicRing, vars: usize, trunc: u32) -> Result<Self> {
        if vars == 0 || vars > MAX_VARS {
            return Err(Error::invalid(format!(
                "number of variables must be 1..={MAX_VARS}"
            )));
        }
        if trunc == 0 {
            return Err(Error::invalid("truncation degree must be at least 1"));
        }
        Ok(SeriesRing(Arc::new(SeriesRingData {
            base: base.clone(),
            vars,
            trunc,
        })))
    }

    pub fn base(&self) -> &PadicRing {
        &self.0.base
    }

    pub fn vars(&self) -> usize {
        self.0.vars
    }

    pub fn trunc(&self) -> u32 {
        self.0.trunc
    }

    pub fn zero(&self) -> TruncatedSeries {
        TruncatedSeries {
            ring: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(&self, c: PadicElement) -> TruncatedSeries {
        let mut s = self.zero();
        s.set([0; MAX_VARS], c);
        s
    }

    pub fn from_int(&self, n: i128) -> TruncatedSeries {
        self.constant(self.base().from_int(n))
    }

    pub fn one(&self) -> TruncatedSeries {
        self.from_int(1)
    }

    /// The variable `t_{i+1}`.
    pub fn var(&self, i: usize) -> Result<TruncatedSeries> {
        if i >= self.vars() {
            return Err(Error::invalid(format!(
                "variable t{} not in a ring with {} variables",
                i + 1,
                self.vars()
            )));
        }
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        let mut s = self.zero();
        s.set(e, self.base().one());
        Ok(s)
    }

    /// Univariate polynomial as a series in `t1` (terms of degree `>= D` dropped).
    pub fn from_poly(&self, p: &UniPoly) -> TruncatedSeries {
        let mut s = self.zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            s.set([k as u32, 0, 0], c.clone());
        }
        s
    }

    fn check(&self, other: &SeriesRing) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }
}

/// Element of a [`SeriesRing`]: only nonzero coefficients below the
/// truncation degree are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    ring: SeriesRing,
    terms: BTreeMap<Exponent, PadicElement>,
}

/// `f = p^mu * distinguished * unit` (univariate).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassData {
    pub mu: u32,
    pub distinguished: UniPoly,
    pub unit: TruncatedSeries,
}

impl WeierstrassData {
    pub fn lambda(&self) -> usize {
        self.distinguished.degree().unwrap_or(0)
    }
}

/// A height-one prime of `O[[t]]` given by a generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HeightOnePrime {
    /// `(p)`.
    P,
    /// A monic distinguished polynomial, assumed irreducible.
    Distinguished(UniPoly),
}

impl HeightOnePrime {
    pub fn distinguished(poly: UniPoly) -> Result<Self> {
        if !poly.is_distinguished() || poly.degree() == Some(0) {
            return Err(Error::invalid(format!(
                "{} is not a distinguished polynomial of positive degree",
                poly.canonical_string("t")
            )));
        }
        Ok(HeightOnePrime::Distinguished(poly))
    }

    /// Canonical label: `P` for `(p)`, otherwise the reduced generator.
    pub fn label(&self) -> String {
        self.label_in("t")
    }

    pub fn label_in(&self, var: &str) -> String {
        match self {
            HeightOnePrime::P => "P".into(),
            HeightOnePrime::Distinguished(g) => g.canonical_string(var),
        }
    }
}

impl TruncatedSeries {
    pub fn ring(&self) -> &SeriesRing {
        &self.ring
    }

    pub fn base(&self) -> &PadicRing {
        self.ring.base()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &PadicElement)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &Exponent) -> PadicElement {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(|| self.base().zero())
    }

    /// Coefficient of `t^k` in a univariate series.
    pub fn coeff_t(&self, k: u32) -> PadicElement {
        self.coeff(&[k, 0, 0])
    }

    pub fn constant_term(&self) -> PadicElement {
        self.coeff(&[0; MAX_VARS])
    }

    fn set(&mut self, e: Exponent, c: PadicElement) {
        if total_degree(&e) >= self.ring.trunc() || c.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, c);
        }
    }

    fn add_term(&mut self, e: Exponent, c: &PadicElement) {
        if total_degree(&e) >= self.ring.trunc() {
            return;
        }
        let sum = self.coeff(&e).add(c);
        self.set(e, sum);
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ring.check(&other.ring)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.ring.zero();
        for (e, c) in &self.terms {
            out.set(*e, c.neg());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Cauchy product truncated below total degree `D`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.ring.check(&other.ring)?;
        let d = self.ring.trunc();
        let mut out = self.ring.zero();
        for (ea, a) in &self.terms {
            let da = total_degree(ea);
            for (eb, b) in &other.terms {
                if da + total_degree(eb) >= d {
                    continue;
                }
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(e, &a.mul(b));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &PadicElement) -> Self {
        let mut out = self.ring.zero();
        for (e, x) in &self.terms {
            out.set(*e, x.mul(c));
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// Inverse of a series with unit constant term, via the geometric series
    /// in the non-constant part (which is nilpotent modulo truncation).
    pub fn inverse(&self) -> Result<Self> {
        let c = self.constant_term();
        let c_inv = c.invert()?;
        let mut m = self.scale(&c_inv);
        m.set([0; MAX_VARS], self.base().zero());
        let neg_m = m.neg();
        let mut acc = self.ring.one();
        let mut term = self.ring.one();
        for _ in 1..self.ring.trunc() {
            term = term.mul(&neg_m)?;
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc.scale(&c_inv))
    }

    /// Minimum coefficient valuation.
    pub fn valuation(&self) -> Valuation {
        let n = self.base().precision();
        self.terms
            .values()
            .filter_map(|c| c.valuation().finite())
            .min()
            .map_or(Valuation::AtLeast(n), Valuation::Finite)
    }

    /// Substitute `t_i -> images[i]`. Each image must lie in the maximal
    /// ideal `(p, t1, .., tr)` of the target ring so that the composite is a
    /// well-defined truncated series.
    pub fn substitute(&self, images: &[TruncatedSeries]) -> Result<TruncatedSeries> {
        if images.len() != self.ring.vars() {
            return Err(Error::invalid("substitution needs one image per variable"));
        }
        let target = images[0].ring.clone();
        for img in images {
            target.check(&img.ring)?;
            if img.constant_term().is_unit() {
                return Err(Error::invalid(
                    "substituted series must have non-unit constant term",
                ));
            }
        }
        let d = self.ring.trunc() as usize;
        let powers: Vec<Vec<TruncatedSeries>> = images
            .iter()
            .map(|img| {
                let mut v = vec![target.one()];
                for k in 1..d {
                    let next = v[k - 1].mul(img).expect("same ring");
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = target.zero();
        for (e, c) in &self.terms {
            let mut term = target.constant(c.clone());
            for (i, &k) in e.iter().enumerate().take(images.len()) {
                if k > 0 {
                    term = term.mul(&powers[i][k as usize])?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// The involution `t_i -> (1 + t_i)^{-1} - 1` induced by inversion on the
    /// group `Z_p^r`.
    pub fn iota(&self) -> Result<TruncatedSeries> {
        if self.ring.vars() > 2 {
            return Err(Error::invalid(
                "iota is supported for at most two variables",
            ));
        }
        let mut images = Vec::new();
        for i in 0..self.ring.vars() {
            let t = self.ring.var(i)?;
            let inv = self.ring.one().add(&t)?.inverse()?;
            images.push(inv.sub(&self.ring.one())?);
        }
        self.substitute(&images)
    }

    fn require_univariate(&self) -> Result<()> {
        if self.ring.vars() == 1 {
            Ok(())
        } else {
            Err(Error::invalid("operation requires a univariate series"))
        }
    }

    /// The series as a polynomial in `t` (degree `< D`).
    pub fn to_poly(&self) -> Result<UniPoly> {
        self.require_univariate()?;
        let d = self.ring.trunc() as usize;
        let coeffs = (0..d).map(|k| self.coeff_t(k as u32)).collect();
        Ok(UniPoly::new(self.base(), coeffs))
    }

    /// Weierstrass preparation `f = p^mu * P * u` with `P` distinguished of
    /// degree `lambda` (the least index of a unit coefficient of `f / p^mu`)
    /// and `u` a unit.
    pub fn weierstrass_prepare(&self) -> Result<WeierstrassData> {
        self.require_univariate()?;
        let mu = match self.valuation() {
            Valuation::Finite(v) => v,
            Valuation::AtLeast(n) => {
                return Err(Error::precision(format!(
                    "series vanishes modulo (p^{n}, t^{})",
                    self.ring.trunc()
                )))
            }
        };
        let g = self.to_poly()?;
        let g = UniPoly::new(
            self.base(),
            g.coeffs().iter().map(|c| c.div_p_pow(mu)).collect(),
        );
        let lambda = g.coeffs().iter().position(|c| c.is_unit()).ok_or_else(|| {
            Error::TruncationTooSmall("no unit coefficient below the truncation degree".into())
        })?;
        let (p_poly, q_poly) = weierstrass_factor(&g, lambda)?;
        let unit = self.ring.from_poly(&q_poly);
        Ok(WeierstrassData {
            mu,
            distinguished: p_poly,
            unit,
        })
    }

    /// Multiplicity of a height-one prime in `f` (the length of the
    /// localisation of `O[[t]]/(f)` at that prime).
    pub fn divides(&self, prime: &HeightOnePrime) -> Result<u32> {
        let w = self.weierstrass_prepare()?;
        match prime {
            HeightOnePrime::P => Ok(w.mu),
            HeightOnePrime::Distinguished(pi) => {
                if pi.ring() != self.base() {
                    return Err(Error::RingMismatch);
                }
                let certified = self.base().precision() - w.mu;
                let deg_pi = pi.degree().unwrap_or(0);
                let mut current = w.distinguished;
                let mut k = 0;
                while current.degree().unwrap_or(0) >= deg_pi && deg_pi > 0 {
                    let (q, r) = current.divrem_monic(pi);
                    if !r.is_zero_mod_p_pow(certified) {
                        break;
                    }
                    current = q;
                    k += 1;
                }
                Ok(k)
            }
        }
    }

    /// Canonical text using variables `t` (univariate) or `t1, t2, t3`.
    pub fn canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let names: Vec<String> = if self.ring.vars() == 1 {
            vec!["t".into()]
        } else {
            (1..=self.ring.vars()).map(|i| format!("t{i}")).collect()
        };
        let mut entries: Vec<(&Exponent, &PadicElement)> = self.terms.iter().collect();
        entries.sort_by(|a, b| total_degree(b.0).cmp(&total_degree(a.0)).then(b.0.cmp(a.0)));
        let parts: Vec<(bool, String)> = entries
            .into_iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .zip(&names)
                    .filter(|(k, _)| **k > 0)
                    .map(|(k, n)| {
                        if *k == 1 {
                            n.clone()
                        } else {
                            format!("{n}^{k}")
                        }
                    })
                    .collect();
                signed_term(c, mono.join("*"))
            })
            .collect();
        join_terms(parts)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

/// Factor a polynomial `g` whose first unit coefficient sits at index
/// `lambda` as `g = P * Q` with `P` monic distinguished of degree `lambda`.
/// Newton iteration on `P`: with `g = P q + r`, replace `P` by
/// `P + r q^{-1} mod P`; the correction doubles in valuation each step and
/// the loop stops once the remainder vanishes modulo `p^N`.
fn weierstrass_factor(g: &UniPoly, lambda: usize) -> Result<(UniPoly, UniPoly)> {
    let ring = g.ring().clone();
    if lambda == 0 {
        return Ok((UniPoly::constant(ring.one()), g.clone()));
    }
    let mut p_poly = UniPoly::monomial(&ring, lambda);
    let max_steps = 2 * (ring.precision() as usize + 2);
    for _ in 0..max_steps {
        let (q, r) = g.divrem_monic(&p_poly);
        if r.is_zero() {
            debug_assert!(p_poly.is_distinguished());
            return Ok((p_poly, q));
        }
        let q_inv = q.inverse_mod(&p_poly)?;
        let delta = r.mulmod(&q_inv, &p_poly);
        p_poly = p_poly.add(&delta);
    }
    Err(Error::precision("Weierstrass iteration did not converge"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_series;
    use proptest::prelude::*;

    fn ring(p: u64, n: u32, d: u32) -> SeriesRing {
        SeriesRing::new(&PadicRing::new(p, n).unwrap(), 1, d).unwrap()
    }

    fn s(r: &SeriesRing, text: &str) -> TruncatedSeries {
        parse_series(r, text).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let r = ring(5, 6, 8);
        let f = s(&r, "3 + t^2 + 5*t^5");
        assert_eq!(r.one().mul(&f).unwrap(), f);
        let t = r.var(0).unwrap();
        assert_eq!(t.mul(&t).unwrap(), s(&r, "t^2"));
        // geometric series oracle: sum_{k<D} (-t)^k
        let mut geo = r.zero();
        for k in 0..8 {
            geo = geo.add(&s(&r, &format!("(-1)^{k} * t^{k}"))).unwrap();
        }
        assert_eq!(s(&r, "1 + t").mul(&geo).unwrap(), r.one());
        assert_eq!(s(&r, "1 + t").inverse().unwrap(), geo);
    }

    #[test]
    fn ring_mismatch() {
        let a = ring(5, 6, 8).one();
        let b = ring(5, 6, 9).one();
        assert_eq!(a.mul(&b), Err(Error::RingMismatch));
    }

    #[test]
    fn weierstrass_examples() {
        let r = ring(5, 6, 12);
        let w = s(&r, "5*t").weierstrass_prepare().unwrap();
        assert_eq!((w.mu, w.lambda()), (1, 1));
        assert_eq!(w.distinguished, UniPoly::from_ints(r.base(), &[0, 1]));
        assert_eq!(w.unit, r.one());

        let w = s(&r, "t^2 + 5").weierstrass_prepare().unwrap();
        assert_eq!(w.mu, 0);
        assert_eq!(w.distinguished, UniPoly::from_ints(r.base(), &[5, 0, 1]));
        assert_eq!(w.unit, r.one());

        // binomial oracle: (1+t)^5 - 1 = t^5 + 5t^4 + 10t^3 + 10t^2 + 5t
        let w = s(&r, "(1+t)^5 - 1").weierstrass_prepare().unwrap();
        assert_eq!(w.mu, 0);
        assert_eq!(
            w.distinguished,
            UniPoly::from_ints(r.base(), &[0, 5, 10, 10, 5, 1])
        );
        assert_eq!(w.unit, r.one());
    }

    #[test]
    fn weierstrass_errors() {
        let r = ring(5, 3, 6);
        assert!(matches!(
            r.zero().weierstrass_prepare(),
            Err(Error::PrecisionExhausted(_))
        ));
        assert!(matches!(
            s(&r, "125*t").weierstrass_prepare(),
            Err(Error::PrecisionExhausted(_))
        ));
        assert!(s(&r, "5 + 5*t^3 + 25*t^5").weierstrass_prepare().is_ok());
        assert_eq!(
            s(&r, "25 + 5*t^5").weierstrass_prepare().unwrap().lambda(),
            5
        );
    }

    #[test]
    fn weierstrass_nontrivial_unit() {
        let r = ring(7, 8, 16);
        let f = s(&r, "(t^2 + 7*t + 14) * (3 + t + 4*t^3) * 49");
        let w = f.weierstrass_prepare().unwrap();
        assert_eq!(w.mu, 2);
        assert_eq!(w.distinguished, UniPoly::from_ints(r.base(), &[14, 7, 1]));
        let rebuilt = r
            .from_poly(&w.distinguished)
            .mul(&w.unit)
            .unwrap()
            .scale(&r.base().from_int(49));
        assert_eq!(rebuilt, f);
    }

    #[test]
    fn iota_examples() {
        let r = ring(5, 6, 7);
        let c = s(&r, "17");
        assert_eq!(c.iota().unwrap(), c);
        let t = r.var(0).unwrap();
        assert_eq!(t.iota().unwrap(), s(&r, "-t + t^2 - t^3 + t^4 - t^5 + t^6"));
        assert_eq!(t.iota().unwrap().iota().unwrap(), t);
    }

    #[test]
    fn resultant_examples() {
        let b = PadicRing::new(5, 6).unwrap();
        let f = UniPoly::from_ints(&b, &[-5, 1]);
        let g = UniPoly::from_ints(&b, &[-30, 1]);
        assert_eq!(resultant(&f, &g).as_signed().abs(), 25);
        let t = UniPoly::from_ints(&b, &[0, 1]);
        let h = UniPoly::from_ints(&b, &[7, 3, 0, 2]);
        assert_eq!(resultant(&t, &h), b.from_int(7));
        // g(5) = 6^5 - 1 = 7775
        let tower = UniPoly::from_ints(&b, &[0, 5, 10, 10, 5, 1]);
        let res = resultant(&f, &tower);
        assert_eq!(res, b.from_int(7775));
        assert_eq!(res.valuation(), Valuation::Finite(2));
    }

    #[test]
    fn divides_examples() {
        let r = ring(5, 8, 16);
        assert_eq!(s(&r, "5*t").divides(&HeightOnePrime::P).unwrap(), 1);
        let pi = HeightOnePrime::distinguished(UniPoly::from_ints(r.base(), &[5, 0, 1])).unwrap();
        assert_eq!(s(&r, "(t^2+5)^2 * (1+t)").divides(&pi).unwrap(), 2);
        let t = HeightOnePrime::distinguished(UniPoly::from_ints(r.base(), &[0, 1])).unwrap();
        assert_eq!(s(&r, "t^2 + 5").divides(&t).unwrap(), 0);
        assert!(HeightOnePrime::distinguished(UniPoly::from_ints(r.base(), &[1, 1])).is_err());
    }

    #[test]
    fn canonical_labels() {
        let b = PadicRing::new(5, 3).unwrap();
        assert_eq!(HeightOnePrime::P.label(), "P");
        let pi = UniPoly::from_ints(&b, &[-5, 0, 1]);
        assert_eq!(HeightOnePrime::Distinguished(pi).label(), "t^2 - 5");
    }

    fn arb_series(r: SeriesRing) -> impl Strategy<Value = TruncatedSeries> {
        let d = r.trunc() as usize;
        proptest::collection::vec(-200i128..200, d).prop_map(move |cs| {
            let mut out = r.zero();
            for (k, c) in cs.into_iter().enumerate() {
                out.set([k as u32, 0, 0], r.base().from_int(c));
            }
            out
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn iota_is_an_involution(f in arb_series(ring(5, 6, 10))) {
            prop_assert_eq!(f.iota().unwrap().iota().unwrap(), f);
        }

        #[test]
        fn iota_is_an_involution_bivariate(cs in proptest::collection::vec(-50i128..50, 10)) {
            let r = SeriesRing::new(&PadicRing::new(7, 5).unwrap(), 2, 5).unwrap();
            let mut f = r.zero();
            let mut k = 0;
            for a in 0..4u32 {
                for b in 0..(4 - a) {
                    f.set([a, b, 0], r.base().from_int(cs[k]));
                    k += 1;
                }
            }
            prop_assert_eq!(f.iota().unwrap().iota().unwrap(), f);
        }

        #[test]
        fn preparation_reconstructs(f in arb_series(ring(5, 8, 12))) {
            if let Ok(w) = f.weierstrass_prepare() {
                let r = f.ring();
                let rebuilt = r.from_poly(&w.distinguished).mul(&w.unit).unwrap()
                    .scale(&r.base().from_int(5i128.pow(w.mu)));
                prop_assert_eq!(rebuilt, f.clone());
                prop_assert!(w.distinguished.is_distinguished());
                prop_assert!(w.unit.constant_term().is_unit());
                let g = f.to_poly().unwrap();
                let lam = g.coeffs().iter().position(|c| c.valuation() == Valuation::Finite(w.mu)).unwrap();
                prop_assert_eq!(w.lambda(), lam);
            }
        }

        #[test]
        fn resultant_is_multiplicative(a in proptest::collection::vec(-100i128..100, 3),
                                       b in proptest::collection::vec(-100i128..100, 3),
                                       c in proptest::collection::vec(-100i128..100, 2)) {
            let base = PadicRing::new(5, 9).unwrap();
            let mut fa = a.clone();
            fa.push(1);
            let f = UniPoly::from_ints(&base, &fa);
            let g = UniPoly::from_ints(&base, &b);
            let h = UniPoly::from_ints(&base, &c);
            prop_assume!(g.degree() == Some(2) && h.degree() == Some(1));
            prop_assert_eq!(resultant(&f, &g.mul(&h)), resultant(&f, &g).mul(&resultant(&f, &h)));
        }

        #[test]
        fn divides_is_additive(e1 in 0u32..3, e2 in 0u32..3, c in 1i128..5) {
            let r = ring(5, 10, 20);
            let pi = UniPoly::from_ints(r.base(), &[5 * c, 0, 1]);
            let prime = HeightOnePrime::distinguished(pi.clone()).unwrap();
            let other = r.from_poly(&UniPoly::from_ints(r.base(), &[5, 1]));
            let f = r.from_poly(&pi).pow(e1 as u64).mul(&other).unwrap();
            let g = r.from_poly(&pi).pow(e2 as u64).mul(&s(&r, "2 + t")).unwrap();
            let fg = f.mul(&g).unwrap();
            prop_assert_eq!(fg.divides(&prime).unwrap(), f.divides(&prime).unwrap() + g.divides(&prime).unwrap());
            prop_assert_eq!(f.divides(&prime).unwrap(), e1);
        }
    }
}
