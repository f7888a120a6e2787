//! Cycle groups, localized first and second Chern classes, and the growth
//! formula for `|Λ/(f, ω_n)|`.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ktheory;
use crate::linalg::{self, Matrix};
use crate::padic::{PadicRing, Valuation};
use crate::powerseries::{
    resultant, HeightOnePrime, SeriesRing, TruncatedSeries, UniPoly, MAX_VARS,
};

/// Canonical label of the maximal ideal `(p, t)` of `O[[t]]`.
pub const CLOSED_POINT: &str = "(p, t)";

/// A prime of `O[[t]]` or `O[[t1, t2]]` of codimension one or two, stored
/// through its canonical generator strings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeLabel {
    codim: u8,
    generators: Vec<String>,
}

impl PrimeLabel {
    pub fn height_one(prime: &HeightOnePrime) -> Self {
        PrimeLabel {
            codim: 1,
            generators: vec![prime.label()],
        }
    }

    /// `(p, t)`, the only height-two prime of `O[[t]]`.
    pub fn closed_point() -> Self {
        PrimeLabel {
            codim: 2,
            generators: vec!["p".into(), "t".into()],
        }
    }

    /// `(t2 - phi(t1), pi(t1))` in `O[[t1, t2]]`.
    pub fn graph(graph_generator: &TruncatedSeries, prime: &HeightOnePrime) -> Self {
        let second = match prime {
            HeightOnePrime::P => "p".to_string(),
            other => other.label_in("t1"),
        };
        PrimeLabel {
            codim: 2,
            generators: vec![graph_generator.canonical_string(), second],
        }
    }

    pub fn codim(&self) -> u8 {
        self.codim
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn is_closed_point(&self) -> bool {
        *self == Self::closed_point()
    }

    pub fn canonical(&self) -> String {
        if self.codim == 1 {
            self.generators[0].clone()
        } else {
            format!("({})", self.generators.join(", "))
        }
    }
}

impl fmt::Display for PrimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// Finitely supported integer combination of primes of one codimension.
/// Entries are keyed by canonical label, so iteration order is the output
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    codim: u8,
    entries: BTreeMap<String, i64>,
}

impl Cycle {
    pub fn zero(codim: u8) -> Self {
        Cycle {
            codim,
            entries: BTreeMap::new(),
        }
    }

    pub fn codim(&self) -> u8 {
        self.codim
    }

    pub fn entries(&self) -> &BTreeMap<String, i64> {
        &self.entries
    }

    pub fn mult(&self, label: &str) -> i64 {
        self.entries.get(label).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_term(&mut self, label: &PrimeLabel, mult: i64) {
        debug_assert_eq!(label.codim(), self.codim);
        let key = label.canonical();
        let m = self.entries.get(&key).copied().unwrap_or(0) + mult;
        if m == 0 {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, m);
        }
    }

    pub fn add(&self, other: &Cycle) -> Cycle {
        let mut out = self.clone();
        for (k, m) in &other.entries {
            let v = out.entries.get(k).copied().unwrap_or(0) + m;
            if v == 0 {
                out.entries.remove(k);
            } else {
                out.entries.insert(k.clone(), v);
            }
        }
        out
    }

    pub fn neg(&self) -> Cycle {
        Cycle {
            codim: self.codim,
            entries: self.entries.iter().map(|(k, m)| (k.clone(), -m)).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|(k, m)| json!({"prime": k, "mult": m}))
            .collect();
        json!({"codim": self.codim, "entries": entries})
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(k, m)| format!("{m}*({k})"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Relation matrix over `Z/p^N`; rows are relations, columns generators.
#[derive(Clone, Debug)]
pub struct FinModulePresentation {
    rows: Matrix,
    cols: usize,
}

impl FinModulePresentation {
    pub fn new(rows: Matrix, cols: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid(
                "relation rows must all have one entry per generator",
            ));
        }
        Ok(FinModulePresentation { rows, cols })
    }

    pub fn from_ints(ring: &PadicRing, rows: &[Vec<i128>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| ring.from_int(x)).collect())
                .collect(),
            cols,
        )
    }

    /// `k` with `|coker| = p^k`.
    pub fn snf_order(&self) -> Result<u32> {
        Ok(linalg::smith_valuations(&self.rows, self.cols)?
            .iter()
            .sum())
    }
}

/// Matrix of multiplication by `g` on `O[t]/(m)` in the basis `1, t, ..`.
pub fn multiplication_matrix(g: &UniPoly, m: &UniPoly) -> Matrix {
    let lam = m.degree().unwrap_or(0);
    let ring = m.ring();
    let mut row = g.rem_monic(m);
    let t = UniPoly::monomial(ring, 1);
    let mut out = Vec::with_capacity(lam);
    for _ in 0..lam {
        out.push((0..lam).map(|k| row.coeff(k)).collect());
        row = row.mulmod(&t, m);
    }
    out
}

/// Length of `O[t]/(m, g)` for monic `m`, by Smith normal form.
pub fn quotient_length(m: &UniPoly, g: &UniPoly) -> Result<u32> {
    let lam = m.degree().unwrap_or(0);
    if lam == 0 {
        return Ok(0);
    }
    FinModulePresentation::new(multiplication_matrix(g, m), lam)?.snf_order()
}

/// `c1(O[[t]]/(f))` over the supplied height-one primes.
pub fn c1(f: &TruncatedSeries, primes: &[HeightOnePrime]) -> Result<Cycle> {
    let mut out = Cycle::zero(1);
    for prime in primes {
        let m = f.divides(prime)?;
        out.add_term(&PrimeLabel::height_one(prime), m as i64);
    }
    Ok(out)
}

/// The three independent computations of `length O[[t]]/(f1, f2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct C2Routes {
    pub snf: u32,
    pub resultant: u32,
    pub symbol: i64,
}

/// Picks the generator with `mu = 0`, returning its distinguished part and
/// the other generator as a polynomial.
fn split_pair(f1: &TruncatedSeries, f2: &TruncatedSeries) -> Result<(UniPoly, UniPoly)> {
    if f1.ring() != f2.ring() {
        return Err(Error::RingMismatch);
    }
    let w1 = f1.weierstrass_prepare()?;
    let w2 = f2.weierstrass_prepare()?;
    if w1.mu == 0 {
        Ok((w1.distinguished, f2.to_poly()?))
    } else if w2.mu == 0 {
        Ok((w2.distinguished, f1.to_poly()?))
    } else {
        Err(Error::NotHeightTwo("p divides both generators".into()))
    }
}

pub fn c2_routes(f1: &TruncatedSeries, f2: &TruncatedSeries) -> Result<C2Routes> {
    let (pk, other) = split_pair(f1, f2)?;
    let reduced = other.rem_monic(&pk);
    let res = if pk.degree() == Some(0) {
        Valuation::Finite(0)
    } else {
        resultant(&pk, &reduced).valuation()
    };
    let snf = match quotient_length(&pk, &reduced) {
        Ok(k) => k,
        Err(Error::PrecisionExhausted(msg)) => {
            return Err(if res.finite().is_none() {
                Error::NotHeightTwo(format!(
                    "quotient is not finite at working precision ({msg})"
                ))
            } else {
                Error::PrecisionExhausted(msg)
            })
        }
        Err(e) => return Err(e),
    };
    let resultant = res.finite().ok_or_else(|| {
        Error::precision("resultant vanishes modulo p^N while the Smith form is finite")
    })?;
    let element = ktheory::char_symbol_factored(f1, f2)?;
    let symbol = ktheory::nu2(&element, &[PrimeLabel::closed_point()])?.mult(CLOSED_POINT);
    Ok(C2Routes {
        snf,
        resultant,
        symbol,
    })
}

/// `length O[[t]]/(f1, f2)` once the three routes agree.
pub fn c2_quotient(f1: &TruncatedSeries, f2: &TruncatedSeries) -> Result<u32> {
    let r = c2_routes(f1, f2)?;
    if r.snf != r.resultant || r.snf as i64 != r.symbol {
        return Err(Error::RouteDisagreement(format!(
            "smith {} resultant {} symbol {}",
            r.snf, r.resultant, r.symbol
        )));
    }
    Ok(r.snf)
}

/// `c2(O[[t]]/(f1, f2))` as a cycle supported at the closed point.
pub fn c2_cycle(f1: &TruncatedSeries, f2: &TruncatedSeries) -> Result<Cycle> {
    let mut out = Cycle::zero(2);
    out.add_term(&PrimeLabel::closed_point(), c2_quotient(f1, f2)? as i64);
    Ok(out)
}

/// For `f1 = t2 - phi(t1)` returns `phi` as a univariate series in `t1`.
pub fn graph_form(f1: &TruncatedSeries) -> Result<TruncatedSeries> {
    let ring = f1.ring();
    if ring.vars() != 2 {
        return Err(Error::invalid("graph form needs two variables"));
    }
    let t2: [u32; MAX_VARS] = [0, 1, 0];
    let mut sign = None;
    let uni = SeriesRing::new(ring.base(), 1, ring.trunc())?;
    let mut phi = uni.zero();
    for (e, c) in f1.terms() {
        if *e == t2 {
            sign = Some(c.clone());
        } else if e[1] > 0 {
            return Err(Error::NotGraphForm);
        } else {
            let mut mono = uni.constant(c.clone());
            for _ in 0..e[0] {
                mono = mono.mul(&uni.var(0)?)?;
            }
            phi = phi.sub(&mono)?;
        }
    }
    let sign = sign.ok_or(Error::NotGraphForm)?;
    let one = ring.base().one();
    if sign == one.neg() {
        phi = phi.neg();
    } else if sign != one {
        return Err(Error::NotGraphForm);
    }
    if phi.constant_term().is_unit() {
        return Err(Error::NotGraphForm);
    }
    Ok(phi)
}

/// `c2(O[[t1, t2]]/(t2 - phi(t1), f2))` over graph primes `(t2 - phi, pi)`
/// for the supplied height-one primes `pi` of `O[[t1]]`.
pub fn c2_graph(
    phi: &TruncatedSeries,
    f2: &TruncatedSeries,
    primes: &[HeightOnePrime],
) -> Result<Cycle> {
    let ring2 = f2.ring();
    if ring2.vars() != 2 || phi.ring().vars() != 1 || phi.base() != f2.base() {
        return Err(Error::RingMismatch);
    }
    let ring1 = phi.ring();
    let t1 = ring1.var(0)?;
    let pulled = f2.substitute(&[t1, phi.clone()])?;
    // t2 - phi(t1) in the two-variable ring, for labelling.
    let mut generator = ring2.var(1)?;
    for (e, c) in phi.terms() {
        let mut mono = ring2.constant(c.clone());
        for _ in 0..e[0] {
            mono = mono.mul(&ring2.var(0)?)?;
        }
        generator = generator.sub(&mono)?;
    }
    if pulled.is_zero() {
        return Err(Error::NotHeightTwo("f2 vanishes on the graph".into()));
    }
    let mut out = Cycle::zero(2);
    for prime in primes {
        let m = pulled.divides(prime)?;
        out.add_term(&PrimeLabel::graph(&generator, prime), m as i64);
    }
    Ok(out)
}

/// `Φ_{p^k}(1 + t)` reduced modulo `m` (with `Φ_1(1 + t) = t`).
fn tower_factor_mod(m: &UniPoly, p: u64, k: u32) -> UniPoly {
    let ring = m.ring();
    let t = UniPoly::monomial(ring, 1);
    if k == 0 {
        return t.rem_monic(m);
    }
    let one = UniPoly::constant(ring.one());
    let mut y = one.add(&t).rem_monic(m);
    for _ in 1..k {
        y = y.powmod(p, m);
    }
    // Φ_{p^k}(x) = Σ_{j<p} x^{j p^{k-1}}
    let mut acc = UniPoly::zero(ring);
    let mut power = one.rem_monic(m);
    for _ in 0..p {
        acc = acc.add(&power);
        power = power.mulmod(&y, m);
    }
    acc
}

/// Exponents `e_n` with `p^{e_n} = |Λ/(f, ω_n)|` for `n = 0..=n_max`, where
/// `ω_n = (1 + t)^{p^n} - 1`, through the factorization of `ω_n` into
/// `t · Π_{k≤n} Φ_{p^k}(1 + t)`.
pub fn growth_orders(f: &TruncatedSeries, n_max: u32) -> Result<Vec<u64>> {
    let w = f.weierstrass_prepare()?;
    let p = f.base().p();
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut acc: u64 = 0;
    for n in 0..=n_max {
        if w.lambda() > 0 {
            let nu = tower_factor_mod(&w.distinguished, p, n);
            let v = resultant(&w.distinguished, &nu).valuation();
            acc += v.finite().ok_or(Error::NotCoprime(n))? as u64;
        }
        let pn = p
            .checked_pow(n)
            .and_then(|x| x.checked_mul(w.mu as u64))
            .ok_or_else(|| Error::invalid("p^n overflows"))?;
        out.push(pn + acc);
    }
    Ok(out)
}

/// The same exponents by Smith normal form of multiplication by `f` on
/// `Z_p[t]/(ω_n)`; only practical for small `p^n`.
pub fn growth_orders_dense(f: &TruncatedSeries, n_max: u32) -> Result<Vec<u64>> {
    let ring = f.base();
    let p = ring.p();
    let g = f.to_poly()?;
    let mut out = Vec::new();
    for n in 0..=n_max {
        let deg = p
            .checked_pow(n)
            .filter(|&d| d <= 400)
            .ok_or_else(|| Error::invalid("ω_n too large for the dense path"))?;
        let omega = UniPoly::from_ints(ring, &[0, 1]).add(&UniPoly::constant(ring.one()));
        let mut omega_n = UniPoly::constant(ring.one());
        for _ in 0..deg {
            omega_n = omega_n.mul(&omega);
        }
        let omega_n = omega_n.sub(&UniPoly::constant(ring.one()));
        match quotient_length(&omega_n, &g) {
            Ok(k) => out.push(k as u64),
            Err(Error::PrecisionExhausted(_)) => return Err(Error::NotCoprime(n)),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Invariants of an exact fit `e_n = μ p^n + λ n + ν` for all `n >= n0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrowthFit {
    pub mu: i64,
    pub lambda: i64,
    pub nu: i64,
    pub n0: usize,
}

/// Exact differencing fit with the least `n0` leaving a tail of at least
/// three terms.
pub fn fit_growth(e: &[u64], p: u64) -> Result<GrowthFit> {
    if e.len() < 4 {
        return Err(Error::invalid("growth fit needs at least four terms"));
    }
    let e: Vec<i128> = e.iter().map(|&x| x as i128).collect();
    let p = p as i128;
    'start: for n0 in 0..=e.len() - 3 {
        let Some(pn0) = p.checked_pow(n0 as u32) else {
            break;
        };
        let dd = e[n0 + 2] - 2 * e[n0 + 1] + e[n0];
        let scale = pn0 * (p - 1) * (p - 1);
        if dd < 0 || dd % scale != 0 {
            continue;
        }
        let mu = dd / scale;
        let lambda = e[n0 + 1] - e[n0] - mu * pn0 * (p - 1);
        let nu = e[n0] - mu * pn0 - lambda * n0 as i128;
        for (n, &en) in e.iter().enumerate().skip(n0) {
            let Some(pn) = p.checked_pow(n as u32) else {
                continue 'start;
            };
            if mu * pn + lambda * n as i128 + nu != en {
                continue 'start;
            }
        }
        return Ok(GrowthFit {
            mu: mu as i64,
            lambda: lambda as i64,
            nu: nu as i64,
            n0,
        });
    }
    Err(Error::NoStableFit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_poly, parse_series};

    fn ring(p: u64, n: u32, d: u32) -> SeriesRing {
        SeriesRing::new(&PadicRing::new(p, n).unwrap(), 1, d).unwrap()
    }

    fn prime(r: &SeriesRing, text: &str) -> HeightOnePrime {
        if text == "P" {
            return HeightOnePrime::P;
        }
        HeightOnePrime::distinguished(parse_poly(r.base(), text).unwrap()).unwrap()
    }

    #[test]
    fn snf_order_examples() {
        let b = PadicRing::new(5, 4).unwrap();
        let m = FinModulePresentation::from_ints(&b, &[vec![5, 0], vec![0, 25]]).unwrap();
        assert_eq!(m.snf_order().unwrap(), 3);
        let m = FinModulePresentation::from_ints(&b, &[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(m.snf_order().unwrap(), 0);
        let m = FinModulePresentation::from_ints(&b, &[vec![5, 0], vec![0, 0]]).unwrap();
        assert!(matches!(m.snf_order(), Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn c1_examples() {
        let r = ring(5, 8, 16);
        let primes = [prime(&r, "P"), prime(&r, "t^2 + 5"), prime(&r, "t")];
        let c = c1(&parse_series(&r, "5*(t^2+5)").unwrap(), &primes).unwrap();
        assert_eq!(c.mult("P"), 1);
        assert_eq!(c.mult("t^2 + 5"), 1);
        assert_eq!(c.entries().len(), 2);
        assert!(c1(&parse_series(&r, "3 + t").unwrap(), &primes)
            .unwrap()
            .is_zero());
        let c = c1(&parse_series(&r, "t^3").unwrap(), &primes).unwrap();
        assert_eq!(
            c.to_json(),
            json!({"codim": 1, "entries": [{"prime": "t", "mult": 3}]})
        );
    }

    #[test]
    fn c2_examples() {
        let r = ring(5, 8, 16);
        let s = |x: &str| parse_series(&r, x).unwrap();
        assert_eq!(c2_quotient(&s("t"), &s("5")).unwrap(), 1);
        assert_eq!(c2_quotient(&s("t^2 + 5"), &s("5")).unwrap(), 2);
        assert_eq!(c2_quotient(&s("t - 5"), &s("t - 30")).unwrap(), 2);
        assert_eq!(c2_quotient(&s("5"), &s("t^2 + 5")).unwrap(), 2);
        assert!(matches!(
            c2_quotient(&s("5"), &s("25*t")),
            Err(Error::NotHeightTwo(_))
        ));
        assert!(matches!(
            c2_quotient(&s("t^2+5"), &s("(t^2+5)*(1+t)")),
            Err(Error::NotHeightTwo(_))
        ));
        let c = c2_cycle(&s("t"), &s("5")).unwrap();
        assert_eq!(
            c.to_json(),
            json!({"codim": 2, "entries": [{"prime": "(p, t)", "mult": 1}]})
        );
    }

    #[test]
    fn c2_graph_examples() {
        let b = PadicRing::new(5, 8).unwrap();
        let r1 = SeriesRing::new(&b, 1, 12).unwrap();
        let r2 = SeriesRing::new(&b, 2, 12).unwrap();
        let primes = [prime(&r1, "P"), prime(&r1, "t"), prime(&r1, "t + 5")];

        let f1 = parse_series(&r2, "t2 - t1").unwrap();
        let phi = graph_form(&f1).unwrap();
        let c = c2_graph(&phi, &parse_series(&r2, "t2 + 5").unwrap(), &primes).unwrap();
        assert_eq!(c.entries().len(), 1);
        assert_eq!(c.mult("(-t1 + t2, t1 + 5)"), 1);

        let phi = graph_form(&parse_series(&r2, "t2 - t1^2").unwrap()).unwrap();
        let c = c2_graph(&phi, &parse_series(&r2, "t2").unwrap(), &primes).unwrap();
        assert_eq!(c.mult("(-t1^2 + t2, t1)"), 2);

        // phi = 0 reproduces c1 of f2(t1, 0)
        let phi = graph_form(&parse_series(&r2, "t2").unwrap()).unwrap();
        let f2 = parse_series(&r2, "5*t1^2*(t1 + 5) + t2*(1 + t1)").unwrap();
        let c = c2_graph(&phi, &f2, &primes).unwrap();
        let direct = c1(&parse_series(&r1, "5*t^2*(t + 5)").unwrap(), &primes).unwrap();
        let mults: Vec<i64> = c.entries().values().copied().collect();
        let direct_mults: Vec<i64> = direct.entries().values().copied().collect();
        assert_eq!(c.entries().len(), direct.entries().len());
        assert_eq!(mults.iter().sum::<i64>(), direct_mults.iter().sum::<i64>());
        assert_eq!(c.mult("(t2, p)"), 1);
        assert_eq!(c.mult("(t2, t1)"), 2);

        assert_eq!(
            graph_form(&parse_series(&r2, "t2^2 - t1").unwrap()),
            Err(Error::NotGraphForm)
        );
        assert_eq!(
            graph_form(&parse_series(&r2, "2*t2 - t1").unwrap()),
            Err(Error::NotGraphForm)
        );
        assert_eq!(
            graph_form(&parse_series(&r2, "t2 - 1").unwrap()),
            Err(Error::NotGraphForm)
        );
    }

    #[test]
    fn growth_examples() {
        let r = ring(5, 10, 16);
        let s = |x: &str| parse_series(&r, x).unwrap();
        // v_5(6^{5^n} - 1) = n + 1
        assert_eq!(growth_orders(&s("t - 5"), 3).unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(growth_orders(&s("2 + t"), 3).unwrap(), vec![0, 0, 0, 0]);
        assert_eq!(growth_orders(&s("5"), 3).unwrap(), vec![1, 5, 25, 125]);
        assert_eq!(growth_orders(&s("t"), 2), Err(Error::NotCoprime(0)));
        assert_eq!(
            growth_orders(&s("t^4 + 5*t^3 + 10*t^2 + 10*t + 5"), 2),
            Err(Error::NotCoprime(1))
        );
    }

    #[test]
    fn growth_dense_cross_check() {
        let r = ring(5, 12, 16);
        for text in [
            "t - 5",
            "2 + t",
            "5",
            "t^2 + 5*t + 10",
            "25*(t^3 - 5)",
            "(t - 10)*(t^2 + 5)",
        ] {
            let f = parse_series(&r, text).unwrap();
            assert_eq!(
                growth_orders(&f, 2).unwrap(),
                growth_orders_dense(&f, 2).unwrap(),
                "{text}"
            );
        }
    }

    #[test]
    fn fit_examples() {
        let fit = fit_growth(&[1, 2, 3, 4], 5).unwrap();
        assert_eq!((fit.mu, fit.lambda, fit.nu, fit.n0), (0, 1, 1, 0));
        let fit = fit_growth(&[0, 0, 0, 0], 5).unwrap();
        assert_eq!((fit.mu, fit.lambda, fit.nu, fit.n0), (0, 0, 0, 0));
        let fit = fit_growth(&[1, 5, 25, 125], 5).unwrap();
        assert_eq!((fit.mu, fit.lambda, fit.nu, fit.n0), (1, 0, 0, 0));
        // unstable head
        let fit = fit_growth(&[7, 3, 5, 7, 9], 5).unwrap();
        assert_eq!((fit.mu, fit.lambda, fit.nu, fit.n0), (0, 2, 1, 1));
        assert_eq!(fit_growth(&[0, 1, 3, 4], 5), Err(Error::NoStableFit));
        assert!(fit_growth(&[0, 1, 2], 5).is_err());
    }
}
