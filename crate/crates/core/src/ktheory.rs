//! Steinberg symbols over the fraction field of `O[[t]]`, tame symbols at
//! height-one primes, the maps `ν_η` and `ν_2`, and characteristic symbols.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::cycles::{self, Cycle, PrimeLabel, CLOSED_POINT};
use crate::error::{Error, Result};
use crate::padic::PadicElement;
use crate::parse::{eval_series, SymbolExpr};
use crate::powerseries::{HeightOnePrime, SeriesRing, TruncatedSeries, UniPoly};

/// `num / den` in the fraction field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frac {
    pub num: TruncatedSeries,
    pub den: TruncatedSeries,
}

impl Frac {
    pub fn new(num: TruncatedSeries, den: TruncatedSeries) -> Result<Self> {
        if num.ring() != den.ring() {
            return Err(Error::RingMismatch);
        }
        if num.is_zero() || den.is_zero() {
            return Err(Error::invalid("symbol entries must be nonzero"));
        }
        Ok(Frac { num, den })
    }

    pub fn series(x: TruncatedSeries) -> Result<Self> {
        let one = x.ring().one();
        Self::new(x, one)
    }

    fn ring(&self) -> &SeriesRing {
        self.num.ring()
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == self.den.ring().one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// `{f, g}^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub f: Frac,
    pub g: Frac,
    pub exponent: i64,
}

/// Formal product of Steinberg symbols; never normalized.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolProduct {
    factors: Vec<Symbol>,
}

impl SymbolProduct {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(f: Frac, g: Frac, exponent: i64) -> Result<Self> {
        let mut s = Self::new();
        s.push(f, g, exponent)?;
        Ok(s)
    }

    /// `{f, g}^exponent` for two series.
    pub fn of_series(f: &TruncatedSeries, g: &TruncatedSeries, exponent: i64) -> Result<Self> {
        Self::single(Frac::series(f.clone())?, Frac::series(g.clone())?, exponent)
    }

    pub fn push(&mut self, f: Frac, g: Frac, exponent: i64) -> Result<()> {
        if f.ring() != g.ring() || self.factors.first().is_some_and(|s| s.f.ring() != f.ring()) {
            return Err(Error::RingMismatch);
        }
        if exponent != 0 {
            self.factors.push(Symbol { f, g, exponent });
        }
        Ok(())
    }

    pub fn factors(&self) -> &[Symbol] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.factors.extend(other.factors.iter().cloned());
        out
    }

    pub fn inverse(&self) -> Self {
        SymbolProduct {
            factors: self
                .factors
                .iter()
                .map(|s| Symbol {
                    f: s.f.clone(),
                    g: s.g.clone(),
                    exponent: -s.exponent,
                })
                .collect(),
        }
    }

    /// Build from parsed text in the given ring.
    pub fn from_parsed(ring: &SeriesRing, parsed: &[SymbolExpr]) -> Result<Self> {
        let frac = |fe: &crate::parse::FracExpr| -> Result<Frac> {
            let num = eval_series(ring, &fe.num)?;
            let den = match &fe.den {
                Some(d) => eval_series(ring, d)?,
                None => ring.one(),
            };
            Frac::new(num, den)
        };
        let mut out = Self::new();
        for s in parsed {
            out.push(frac(&s.f)?, frac(&s.g)?, s.exponent)?;
        }
        Ok(out)
    }
}

impl fmt::Display for SymbolProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|s| {
                if s.exponent == 1 {
                    format!("{{{} ; {}}}", s.f, s.g)
                } else {
                    format!("{{{} ; {}}}^{}", s.f, s.g, s.exponent)
                }
            })
            .collect();
        f.write_str(&parts.join(" * "))
    }
}

/// The discrete valuation ring `O[[t]]_(π)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DvrDescriptor {
    ring: SeriesRing,
    prime: HeightOnePrime,
}

impl DvrDescriptor {
    pub fn new(ring: &SeriesRing, prime: HeightOnePrime) -> Result<Self> {
        if ring.vars() != 1 {
            return Err(Error::invalid(
                "tame symbols are supported over one variable",
            ));
        }
        if let HeightOnePrime::Distinguished(pi) = &prime {
            if pi.ring() != ring.base() {
                return Err(Error::RingMismatch);
            }
        }
        Ok(DvrDescriptor {
            ring: ring.clone(),
            prime,
        })
    }

    pub fn prime(&self) -> &HeightOnePrime {
        &self.prime
    }

    pub fn ring(&self) -> &SeriesRing {
        &self.ring
    }
}

/// Element of `F_q((t))` known to a finite `t`-adic precision:
/// `t^order * (unit[0] + unit[1] t + ..)` with `unit[0] != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    pub order: i64,
    pub unit: Vec<PadicElement>,
}

impl Laurent {
    fn mul(&self, other: &Self) -> Self {
        let n = self.unit.len().min(other.unit.len());
        let zero = self.unit[0].ring().zero();
        let mut unit = vec![zero; n];
        for (i, a) in self.unit.iter().take(n).enumerate() {
            for (j, b) in other.unit.iter().take(n - i).enumerate() {
                unit[i + j] = unit[i + j].add(&a.mul(b));
            }
        }
        Laurent {
            order: self.order + other.order,
            unit,
        }
    }

    fn inverse(&self) -> Self {
        let n = self.unit.len();
        let c0 = self.unit[0]
            .invert()
            .expect("leading coefficient is nonzero");
        let mut inv = vec![c0.clone()];
        for k in 1..n {
            let mut s = c0.ring().zero();
            for j in 1..=k {
                s = s.add(&self.unit[j].mul(&inv[k - j]));
            }
            inv.push(s.mul(&c0).neg());
        }
        Laurent {
            order: -self.order,
            unit: inv,
        }
    }

    fn neg(&self) -> Self {
        Laurent {
            order: self.order,
            unit: self.unit.iter().map(|c| c.neg()).collect(),
        }
    }

    /// Number of known unit coefficients.
    pub fn precision(&self) -> usize {
        self.unit.len()
    }
}

/// A value of the tame symbol in `k(η1)^×`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidueValue {
    /// At `(p)`: `k = F_q((t))`.
    Laurent(Laurent),
    /// At a distinguished `π`: `num / den` in `Frac(O[t]/(π))`.
    Quotient {
        modulus: UniPoly,
        num: UniPoly,
        den: UniPoly,
    },
}

impl ResidueValue {
    fn one(dvr: &DvrDescriptor) -> Self {
        match &dvr.prime {
            HeightOnePrime::P => {
                let k = dvr.ring.base().residue_field();
                ResidueValue::Laurent(Laurent {
                    order: 0,
                    unit: std::iter::once(k.one())
                        .chain(std::iter::repeat(k.zero()))
                        .take(dvr.ring.trunc() as usize)
                        .collect(),
                })
            }
            HeightOnePrime::Distinguished(pi) => ResidueValue::Quotient {
                modulus: pi.clone(),
                num: UniPoly::constant(pi.ring().one()),
                den: UniPoly::constant(pi.ring().one()),
            },
        }
    }

    fn normalize(self) -> Self {
        match self {
            ResidueValue::Quotient { modulus, num, den } => {
                if den.coeff(0).is_unit() {
                    let inv = den.inverse_mod(&modulus).expect("unit in a local ring");
                    let one = UniPoly::constant(modulus.ring().one());
                    ResidueValue::Quotient {
                        num: num.mulmod(&inv, &modulus),
                        den: one,
                        modulus,
                    }
                } else {
                    ResidueValue::Quotient { modulus, num, den }
                }
            }
            other => other,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (ResidueValue::Laurent(a), ResidueValue::Laurent(b)) => {
                Ok(ResidueValue::Laurent(a.mul(b)))
            }
            (
                ResidueValue::Quotient { modulus, num, den },
                ResidueValue::Quotient {
                    modulus: m2,
                    num: n2,
                    den: d2,
                },
            ) if modulus == m2 => Ok(ResidueValue::Quotient {
                modulus: modulus.clone(),
                num: num.mulmod(n2, modulus),
                den: den.mulmod(d2, modulus),
            }
            .normalize()),
            _ => Err(Error::RingMismatch),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            ResidueValue::Laurent(a) => ResidueValue::Laurent(a.inverse()),
            ResidueValue::Quotient { modulus, num, den } => ResidueValue::Quotient {
                modulus: modulus.clone(),
                num: den.clone(),
                den: num.clone(),
            }
            .normalize(),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            ResidueValue::Laurent(a) => ResidueValue::Laurent(a.neg()),
            ResidueValue::Quotient { modulus, num, den } => ResidueValue::Quotient {
                modulus: modulus.clone(),
                num: num.neg(),
                den: den.clone(),
            },
        }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc: Option<Self> = None;
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(&sq)?,
                });
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(match acc {
            Some(a) => a,
            None => match self {
                ResidueValue::Laurent(a) => {
                    let k = a.unit[0].ring().clone();
                    ResidueValue::Laurent(Laurent {
                        order: 0,
                        unit: std::iter::once(k.one())
                            .chain(std::iter::repeat(k.zero()))
                            .take(a.unit.len())
                            .collect(),
                    })
                }
                ResidueValue::Quotient { modulus, .. } => ResidueValue::Quotient {
                    modulus: modulus.clone(),
                    num: UniPoly::constant(modulus.ring().one()),
                    den: UniPoly::constant(modulus.ring().one()),
                },
            },
        })
    }

    /// `ord` at the closed point `(p, t)` of `O[[t]]/(π)`: the `t`-adic order
    /// at `(p)`, and `length(O[t]/(π, num)) - length(O[t]/(π, den))` otherwise.
    pub fn ord(&self) -> Result<i64> {
        match self {
            ResidueValue::Laurent(a) => Ok(a.order),
            ResidueValue::Quotient { modulus, num, den } => {
                let n = cycles::quotient_length(modulus, num)?;
                let d = cycles::quotient_length(modulus, den)?;
                Ok(n as i64 - d as i64)
            }
        }
    }

    /// Equality to the known precision: same order and matching unit
    /// coefficients at `(p)`, equal cross products modulo `(π, p^N)` otherwise.
    pub fn agrees_with(&self, other: &Self) -> bool {
        match (self, other) {
            (ResidueValue::Laurent(a), ResidueValue::Laurent(b)) => {
                a.order == b.order && a.unit.iter().zip(&b.unit).all(|(x, y)| x == y)
            }
            (
                ResidueValue::Quotient { modulus, num, den },
                ResidueValue::Quotient {
                    modulus: m2,
                    num: n2,
                    den: d2,
                },
            ) => modulus == m2 && num.mulmod(d2, modulus) == n2.mulmod(den, modulus),
            _ => false,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            ResidueValue::Laurent(a) => {
                a.order == 0 && a.unit[0].is_one() && a.unit[1..].iter().all(|c| c.is_zero())
            }
            ResidueValue::Quotient { num, den, modulus } => {
                num.sub(den).rem_monic(modulus).is_zero()
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ResidueValue::Laurent(a) => {
                let unit: Vec<Value> = a
                    .unit
                    .iter()
                    .map(|c| {
                        if c.coeffs().len() == 1 {
                            json!(c.coeffs()[0])
                        } else {
                            json!(c.coeffs())
                        }
                    })
                    .collect();
                json!({"kind": "laurent", "order": a.order, "unit": unit, "t_precision": a.unit.len()})
            }
            ResidueValue::Quotient { modulus, num, den } => json!({
                "kind": "quotient",
                "modulus": modulus.canonical_string("t"),
                "num": num.canonical_string("t"),
                "den": den.canonical_string("t"),
            }),
        }
    }
}

/// Valuation at `π` and the residue of `x / π^v`.
fn unit_residue(x: &TruncatedSeries, dvr: &DvrDescriptor) -> Result<(i64, ResidueValue)> {
    if x.ring() != &dvr.ring {
        return Err(Error::RingMismatch);
    }
    let w = x.weierstrass_prepare()?;
    match &dvr.prime {
        HeightOnePrime::P => {
            let k = x.base().residue_field();
            let d = dvr.ring.trunc() as usize;
            let coeffs: Vec<PadicElement> = (0..d)
                .map(|i| x.coeff_t(i as u32).div_p_pow(w.mu).residue().lift_to(&k))
                .collect();
            let lam = w.lambda();
            Ok((
                w.mu as i64,
                ResidueValue::Laurent(Laurent {
                    order: lam as i64,
                    unit: coeffs[lam..].to_vec(),
                }),
            ))
        }
        HeightOnePrime::Distinguished(pi) => {
            let v = x.divides(&dvr.prime)?;
            let mut q = w.distinguished.clone();
            for _ in 0..v {
                q = q.divrem_monic(pi).0;
            }
            let scale = x.base().from_int(1).mul_p_pow(w.mu);
            let residue = q.mulmod(&w.unit.to_poly()?, pi).scale(&scale).rem_monic(pi);
            if residue.is_zero() {
                return Err(Error::precision("residue vanishes modulo (π, p^N)"));
            }
            Ok((
                v as i64,
                ResidueValue::Quotient {
                    modulus: pi.clone(),
                    num: residue,
                    den: UniPoly::constant(pi.ring().one()),
                }
                .normalize(),
            ))
        }
    }
}

fn frac_residue(x: &Frac, dvr: &DvrDescriptor) -> Result<(i64, ResidueValue)> {
    let (a, ra) = unit_residue(&x.num, dvr)?;
    let (b, rb) = unit_residue(&x.den, dvr)?;
    Ok((a - b, ra.mul(&rb.inverse())?))
}

/// `∂_2` at `π`: the product of `((-1)^{ab} f^b / g^a mod π)^e` over factors,
/// with `a = v(f)`, `b = v(g)`.
pub fn tame(s: &SymbolProduct, dvr: &DvrDescriptor) -> Result<ResidueValue> {
    let mut acc = ResidueValue::one(dvr);
    for sym in s.factors() {
        let (a, rf) = frac_residue(&sym.f, dvr)?;
        let (b, rg) = frac_residue(&sym.g, dvr)?;
        let mut val = rf.pow(b)?.mul(&rg.pow(-a)?)?;
        if (a * b) % 2 != 0 {
            val = val.neg();
        }
        acc = acc.mul(&val.pow(sym.exponent)?)?;
    }
    Ok(acc)
}

/// `ν` along the chain `(0) ⊂ (π) ⊂ η2`: `ord_{η2}(∂_2(s))`.
pub fn nu_chain(s: &SymbolProduct, dvr: &DvrDescriptor, eta2: &PrimeLabel) -> Result<i64> {
    if !eta2.is_closed_point() {
        return Err(Error::ChainNotNested(format!(
            "{} is not a height-two prime containing {}",
            eta2,
            dvr.prime.label()
        )));
    }
    if s.is_empty() {
        return Ok(0);
    }
    tame(s, dvr)?.ord()
}

/// Finitely supported family of symbols indexed by height-one primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedProductElement {
    ring: SeriesRing,
    components: BTreeMap<String, (HeightOnePrime, SymbolProduct)>,
}

impl RestrictedProductElement {
    pub fn new(ring: &SeriesRing) -> Self {
        RestrictedProductElement {
            ring: ring.clone(),
            components: BTreeMap::new(),
        }
    }

    /// Multiply the component at `prime` by `s`.
    pub fn insert(&mut self, prime: HeightOnePrime, s: SymbolProduct) {
        let entry = self
            .components
            .entry(prime.label())
            .or_insert_with(|| (prime, SymbolProduct::new()));
        entry.1 = entry.1.mul(&s);
    }

    /// `s` placed at every listed prime.
    pub fn diagonal(ring: &SeriesRing, s: &SymbolProduct, primes: &[HeightOnePrime]) -> Self {
        let mut out = Self::new(ring);
        for p in primes {
            if !out.components.contains_key(&p.label()) {
                out.insert(p.clone(), s.clone());
            }
        }
        out
    }

    pub fn components(&self) -> impl Iterator<Item = (&HeightOnePrime, &SymbolProduct)> {
        self.components.values().map(|(p, s)| (p, s))
    }

    pub fn ring(&self) -> &SeriesRing {
        &self.ring
    }

    pub fn to_json(&self) -> Value {
        let comps: Vec<Value> = self
            .components
            .iter()
            .map(|(label, (_, s))| json!({"prime": label, "symbols": s.to_string()}))
            .collect();
        json!({ "components": comps })
    }
}

/// `ν_2`: sum over components and listed height-two primes of `ν_chain`.
pub fn nu2(a: &RestrictedProductElement, primes2: &[PrimeLabel]) -> Result<Cycle> {
    let mut out = Cycle::zero(2);
    for y in primes2 {
        let mut total = 0;
        for (prime, s) in a.components() {
            let dvr = DvrDescriptor::new(&a.ring, prime.clone())?;
            total += nu_chain(s, &dvr, y)?;
        }
        out.add_term(y, total);
    }
    Ok(out)
}

/// The height-one prime generated by a prime element `f` (`p` times a unit,
/// or a distinguished polynomial times a unit).
pub fn prime_of(f: &TruncatedSeries) -> Result<HeightOnePrime> {
    let w = f.weierstrass_prepare()?;
    match (w.mu, w.lambda()) {
        (1, 0) => Ok(HeightOnePrime::P),
        (0, l) if l > 0 => HeightOnePrime::distinguished(w.distinguished),
        _ => Err(Error::NotPrime(f.canonical_string())),
    }
}

/// `{f1, f2}^{-1}` at `(f1)`, trivial elsewhere.
pub fn char_symbol(f1: &TruncatedSeries, f2: &TruncatedSeries) -> Result<RestrictedProductElement> {
    if f1.ring() != f2.ring() {
        return Err(Error::RingMismatch);
    }
    let p1 = prime_of(f1)?;
    let p2 = prime_of(f2)?;
    if p1 == p2 {
        return Err(Error::UnitRatio);
    }
    let mut out = RestrictedProductElement::new(f1.ring());
    out.insert(p1, SymbolProduct::of_series(f1, f2, -1)?);
    Ok(out)
}

/// `{f1, f2}^{-1}` at `(p)` when `p | f1` and at the full distinguished part
/// of `f1`; for prime `f1` this is [`char_symbol`]. Lengths are additive, so
/// this computes `c2(O[[t]]/(f1, f2))` without factoring `f1`.
pub fn char_symbol_factored(
    f1: &TruncatedSeries,
    f2: &TruncatedSeries,
) -> Result<RestrictedProductElement> {
    if f1.ring() != f2.ring() {
        return Err(Error::RingMismatch);
    }
    let w = f1.weierstrass_prepare()?;
    let s = SymbolProduct::of_series(f1, f2, -1)?;
    let mut out = RestrictedProductElement::new(f1.ring());
    if w.mu > 0 {
        out.insert(HeightOnePrime::P, s.clone());
    }
    if w.lambda() > 0 {
        out.insert(HeightOnePrime::Distinguished(w.distinguished), s);
    }
    Ok(out)
}

/// Both characteristic symbols against the second Chern class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prop29Report {
    pub lhs: Cycle,
    pub rhs: Cycle,
    pub symmetric: Cycle,
    /// `ν_2` of the diagonal `{f1, f2}^{-1}` over the support of `f1 f2`.
    pub diagonal: Cycle,
    pub equal: bool,
}

impl Prop29Report {
    pub fn to_json(&self) -> Value {
        json!({
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "symmetric": self.symmetric.to_json(),
            "diagonal": self.diagonal.to_json(),
            "equal": self.equal,
        })
    }
}

pub fn verify_prop29(
    f1: &TruncatedSeries,
    f2: &TruncatedSeries,
    primes2: &[PrimeLabel],
) -> Result<Prop29Report> {
    let a = char_symbol(f1, f2)?;
    let a_sym = char_symbol(f2, f1)?;
    let lhs = nu2(&a, primes2)?;
    let symmetric = nu2(&a_sym, primes2)?;
    let len = cycles::c2_quotient(f1, f2)?;
    let mut rhs = Cycle::zero(2);
    for y in primes2 {
        if y.is_closed_point() {
            rhs.add_term(y, len as i64);
        }
    }
    let support = [prime_of(f1)?, prime_of(f2)?];
    let diag = RestrictedProductElement::diagonal(
        f1.ring(),
        &SymbolProduct::of_series(f1, f2, -1)?,
        &support,
    );
    let diagonal = nu2(&diag, primes2)?;
    let equal = lhs == rhs && symmetric == rhs && diagonal.is_zero();
    Ok(Prop29Report {
        lhs,
        rhs,
        symmetric,
        diagonal,
        equal,
    })
}

fn check_support(x: &TruncatedSeries, primes: &[HeightOnePrime]) -> Result<()> {
    let w = x.weierstrass_prepare()?;
    if w.mu > 0 && !primes.contains(&HeightOnePrime::P) {
        return Err(Error::SupportIncomplete(format!("p divides {x}")));
    }
    let mut covered = 0;
    for prime in primes {
        if let HeightOnePrime::Distinguished(pi) = prime {
            covered += x.divides(prime)? as usize * pi.degree().unwrap_or(0);
        }
    }
    if covered != w.lambda() {
        return Err(Error::SupportIncomplete(format!(
            "listed primes account for degree {covered} of the distinguished part of degree {} of {x}",
            w.lambda()
        )));
    }
    Ok(())
}

fn dedup(primes: &[HeightOnePrime]) -> Vec<HeightOnePrime> {
    let mut seen = BTreeMap::new();
    for p in primes {
        seen.entry(p.label()).or_insert_with(|| p.clone());
    }
    seen.into_values().collect()
}

/// `ν_2` of the diagonal image of `{f, g}` over `primes1`.
pub fn reciprocity_cycle(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    primes1: &[HeightOnePrime],
) -> Result<Cycle> {
    let primes = dedup(primes1);
    check_support(f, &primes)?;
    check_support(g, &primes)?;
    let s = SymbolProduct::of_series(f, g, 1)?;
    let diag = RestrictedProductElement::diagonal(f.ring(), &s, &primes);
    nu2(&diag, &[PrimeLabel::closed_point()])
}

/// The composite of the two boundary maps vanishes on `{f, g}`.
pub fn reciprocity_check(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    primes1: &[HeightOnePrime],
) -> Result<bool> {
    Ok(reciprocity_cycle(f, g, primes1)?.mult(CLOSED_POINT) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicRing;
    use crate::parse::{parse_poly, parse_series};

    fn ring() -> SeriesRing {
        SeriesRing::new(&PadicRing::new(5, 8).unwrap(), 1, 16).unwrap()
    }

    fn s(r: &SeriesRing, x: &str) -> TruncatedSeries {
        parse_series(r, x).unwrap()
    }

    fn dist(r: &SeriesRing, x: &str) -> HeightOnePrime {
        HeightOnePrime::distinguished(parse_poly(r.base(), x).unwrap()).unwrap()
    }

    fn quotient(r: &SeriesRing, modulus: &str, num: i128, den: i128) -> ResidueValue {
        let b = r.base();
        ResidueValue::Quotient {
            modulus: parse_poly(b, modulus).unwrap(),
            num: UniPoly::from_ints(b, &[num]),
            den: UniPoly::from_ints(b, &[den]),
        }
    }

    #[test]
    fn tame_examples() {
        let r = ring();
        let at_t = DvrDescriptor::new(&r, dist(&r, "t")).unwrap();
        let units = SymbolProduct::of_series(&s(&r, "2 + t"), &s(&r, "3 + t^2"), 1).unwrap();
        assert!(tame(&units, &at_t).unwrap().is_one());
        let v = tame(
            &SymbolProduct::of_series(&s(&r, "t"), &s(&r, "5"), 1).unwrap(),
            &at_t,
        )
        .unwrap();
        assert_eq!(v, quotient(&r, "t", 1, 5));
        let v = tame(
            &SymbolProduct::of_series(&s(&r, "t"), &s(&r, "t"), 1).unwrap(),
            &at_t,
        )
        .unwrap();
        assert_eq!(v, quotient(&r, "t", -1, 1));
    }

    #[test]
    fn nu_chain_examples() {
        let r = ring();
        let y = PrimeLabel::closed_point();
        let at_t = DvrDescriptor::new(&r, dist(&r, "t")).unwrap();
        let sym = SymbolProduct::of_series(&s(&r, "t"), &s(&r, "5"), 1).unwrap();
        assert_eq!(nu_chain(&sym, &at_t, &y).unwrap(), -1);
        let units = SymbolProduct::of_series(&s(&r, "2 + t"), &s(&r, "3"), 1).unwrap();
        assert_eq!(nu_chain(&units, &at_t, &y).unwrap(), 0);
        let at = DvrDescriptor::new(&r, dist(&r, "t - 5")).unwrap();
        let sym = SymbolProduct::of_series(&s(&r, "t - 5"), &s(&r, "(1+t)^5 - 1"), 1).unwrap();
        let v = tame(&sym, &at).unwrap();
        // g(5) = 6^5 - 1 = 7775 = 5^2 * 311, inverted
        let m = 5i128.pow(8);
        let ResidueValue::Quotient { num, den, .. } = &v else {
            panic!()
        };
        assert!(num.coeff(0).is_one() && den.coeff(0) == r.base().from_int(7775 % m));
        assert_eq!(nu_chain(&sym, &at, &y).unwrap(), -2);
        assert_eq!(nu_chain(&sym.inverse(), &at, &y).unwrap(), 2);
        let bad = PrimeLabel::height_one(&HeightOnePrime::P);
        assert!(matches!(
            nu_chain(&sym, &at, &bad),
            Err(Error::ChainNotNested(_))
        ));
    }

    #[test]
    fn nu2_examples() {
        let r = ring();
        let y = [PrimeLabel::closed_point()];
        assert!(nu2(&RestrictedProductElement::new(&r), &y)
            .unwrap()
            .is_zero());
        let mut a = RestrictedProductElement::new(&r);
        a.insert(
            dist(&r, "t"),
            SymbolProduct::of_series(&s(&r, "t"), &s(&r, "5"), -1).unwrap(),
        );
        assert_eq!(nu2(&a, &y).unwrap().mult(CLOSED_POINT), 1);
        let a = char_symbol(&s(&r, "t^2 + 5"), &s(&r, "5")).unwrap();
        assert_eq!(nu2(&a, &y).unwrap().mult(CLOSED_POINT), 2);
    }

    #[test]
    fn char_symbol_examples() {
        let r = ring();
        let a = char_symbol(&s(&r, "t"), &s(&r, "5")).unwrap();
        let comps: Vec<_> = a.components().collect();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].0.label(), "t");
        assert_eq!(comps[0].1.to_string(), "{t ; 5}^-1");
        let a = char_symbol(&s(&r, "5"), &s(&r, "t")).unwrap();
        let comps: Vec<_> = a.components().collect();
        assert_eq!(comps[0].0, &HeightOnePrime::P);
        assert_eq!(comps[0].1.to_string(), "{5 ; t}^-1");
        assert_eq!(char_symbol(&s(&r, "t"), &s(&r, "t")), Err(Error::UnitRatio));
        assert_eq!(
            char_symbol(&s(&r, "t"), &s(&r, "t*(2+t)")),
            Err(Error::UnitRatio)
        );
        assert!(matches!(
            char_symbol(&s(&r, "25"), &s(&r, "t")),
            Err(Error::NotPrime(_))
        ));
    }

    #[test]
    fn prop29_examples() {
        let r = ring();
        let y = [PrimeLabel::closed_point()];
        for (f1, f2, len) in [("t", "5", 1), ("t - 5", "t - 30", 2), ("t^2 + 5", "5", 2)] {
            let rep = verify_prop29(&s(&r, f1), &s(&r, f2), &y).unwrap();
            assert!(rep.equal, "{f1} {f2}: {rep:?}");
            assert_eq!(rep.lhs.mult(CLOSED_POINT), len);
        }
    }

    #[test]
    fn reciprocity_examples() {
        let r = ring();
        let p = HeightOnePrime::P;
        assert!(reciprocity_check(&s(&r, "2 + t"), &s(&r, "3"), std::slice::from_ref(&p)).unwrap());
        assert!(reciprocity_check(&s(&r, "t"), &s(&r, "5"), &[dist(&r, "t"), p.clone()]).unwrap());
        let primes = [dist(&r, "t - 5"), dist(&r, "t - 30"), p.clone()];
        assert!(reciprocity_check(&s(&r, "t - 5"), &s(&r, "t - 30"), &primes).unwrap());
        assert!(matches!(
            reciprocity_check(&s(&r, "t"), &s(&r, "5"), &[dist(&r, "t")]),
            Err(Error::SupportIncomplete(_))
        ));
        assert!(matches!(
            reciprocity_check(&s(&r, "t*(t-5)"), &s(&r, "5"), &[dist(&r, "t"), p]),
            Err(Error::SupportIncomplete(_))
        ));
    }

    #[test]
    fn symbol_algebra_at_p() {
        let r = ring();
        let at_p = DvrDescriptor::new(&r, HeightOnePrime::P).unwrap();
        let f = s(&r, "5*(t + 2)");
        let g = s(&r, "25*t^2 + 5*t^3");
        let fg = tame(&SymbolProduct::of_series(&f, &g, 1).unwrap(), &at_p).unwrap();
        let gf = tame(&SymbolProduct::of_series(&g, &f, 1).unwrap(), &at_p).unwrap();
        assert!(fg.mul(&gf).unwrap().is_one());
        // (-1)^{1*1} f' / g' with f' = t + 2, g' = 5t^2 + t^3 = t^3 mod 5
        let ResidueValue::Laurent(l) = &fg else {
            panic!()
        };
        assert_eq!(l.order, -3);
        assert_eq!(fg.ord().unwrap(), -3);
    }
}
