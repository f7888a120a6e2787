//! The bundled acceptance suite: eight criteria, each run on seeded random
//! instances and reported as pass/fail with a short detail line.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cycles::PrimeLabel;
use crate::cycles::{c1, c2_routes, fit_growth, growth_orders, CLOSED_POINT};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, MonomialOrder, PolyFp};
use crate::homalg::{biduality_check, ext_dims};
use crate::ktheory::{reciprocity_cycle, tame, verify_prop29, DvrDescriptor, SymbolProduct};
use crate::lvalues::{
    bernoulli1, bernoulli_numbers, divisibility_search, irregular_indices, kubota_leopoldt_at_zero,
    quadratic_character, rational_mod_p, residue_mod_p, PrimeOverP, DEFAULT_KAPPA_DISCS,
};
use crate::padic::PadicRing;
use crate::powerseries::{HeightOnePrime, SeriesRing, TruncatedSeries, UniPoly};

pub const DEFAULT_SEED: u64 = 0x1c_2024;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {} [{}] {}: {} ({} ms)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.millis
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
        })
    }
}

type Check = fn(&mut ChaCha8Rng) -> Result<(bool, String)>;

pub const CRITERIA: &[(u8, &str, Check)] = &[
    (1, "irregularity of 37", irregularity),
    (2, "divisibility searches at p = 5", searches),
    (3, "three-way length agreement", three_way),
    (4, "symmetric characteristic symbol", symmetry),
    (5, "reciprocity of diagonal symbols", reciprocity),
    (6, "growth formula recovers mu and lambda", growth),
    (7, "Koszul Ext concentration and biduality", koszul),
    (8, "symbol algebra properties", symbol_algebra),
];

pub fn run_one(id: u8, seed: u64) -> Option<CriterionResult> {
    let (id, name, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(*id as u64));
    let start = Instant::now();
    let (passed, detail) = match check(&mut rng) {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Some(CriterionResult {
        id: *id,
        name,
        passed,
        detail,
        millis: start.elapsed().as_millis(),
    })
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    CRITERIA.iter().filter_map(|c| run_one(c.0, seed)).collect()
}

fn irregularity(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let prime = PrimeOverP::new(37, 36)?;
    let omega = prime.teichmuller_character();
    let b31 = bernoulli1(&omega.pow(31))?;
    let hit = prime.divides(&b31)?;
    let kappa = quadratic_character(-4)?;
    let kl = kubota_leopoldt_at_zero(&omega.pow(5).mul(&kappa), &prime)?;
    let oracle = irregular_indices(37) == vec![32];
    let b = bernoulli_numbers(32);
    let congruent = residue_mod_p(&b31, &prime)?
        == rational_mod_p(
            &(b[32].clone() / num_rational::BigRational::from_integer(32.into())),
            37,
        );
    Ok((
        hit && !kl.divisible && oracle && congruent,
        format!(
            "37 | B_1(w^31): {hit}; 37 | L_p(w^5 k, 0): {}; irregular indices {:?}; congruence {congruent}",
            kl.divisible,
            irregular_indices(37)
        ),
    ))
}

fn searches(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let a = divisibility_search(5, 28, 6, DEFAULT_KAPPA_DISCS)?;
    let b = divisibility_search(5, 555, 4, DEFAULT_KAPPA_DISCS)?;
    let exceptional = a
        .hits()
        .filter(|r| r.exceptional.iter().any(|x| *x))
        .count();
    let plain = b
        .hits()
        .filter(|r| !r.exceptional.iter().any(|x| *x))
        .count();
    Ok((
        exceptional > 0 && plain > 0,
        format!(
            "conductor 28: {} cells, {} hits, {exceptional} with an exceptional zero; conductor 555: {} cells, {} hits, {plain} without",
            a.rows.len(),
            a.hits().count(),
            b.rows.len(),
            b.hits().count()
        ),
    ))
}

fn rand_mod(rng: &mut ChaCha8Rng, m: u64) -> i128 {
    rng.gen_range(0..m) as i128
}

/// Eisenstein polynomial of degree `d`: irreducible over `Z_p`.
fn rand_eisenstein(base: &PadicRing, rng: &mut ChaCha8Rng, d: usize) -> UniPoly {
    let p = base.p() as i128;
    let m = base.modulus() / base.p();
    let mut coeffs: Vec<i128> = (0..d).map(|_| p * rand_mod(rng, m)).collect();
    coeffs[0] = p * (rng.gen_range(1..p) + p * rand_mod(rng, m / base.p()));
    coeffs.push(1);
    UniPoly::from_ints(base, &coeffs)
}

fn rand_unit(ring: &SeriesRing, rng: &mut ChaCha8Rng, deg: usize) -> TruncatedSeries {
    let base = ring.base();
    let p = base.p() as i128;
    let mut coeffs: Vec<i128> = (0..=deg).map(|_| rand_mod(rng, base.modulus())).collect();
    coeffs[0] = rng.gen_range(1..p) + p * rand_mod(rng, base.modulus() / base.p());
    ring.from_poly(&UniPoly::from_ints(base, &coeffs))
}

/// A random prime element: `p` or an Eisenstein polynomial, times a unit.
struct PrimeElement {
    prime: HeightOnePrime,
    series: TruncatedSeries,
}

fn rand_prime(ring: &SeriesRing, rng: &mut ChaCha8Rng, allow_p: bool) -> PrimeElement {
    let u = rand_unit(ring, rng, 2);
    if allow_p && rng.gen_bool(0.25) {
        let series = u.scale(&ring.base().from_int(ring.base().p() as i128));
        return PrimeElement {
            prime: HeightOnePrime::P,
            series,
        };
    }
    let d = rng.gen_range(1..=4);
    let pi = rand_eisenstein(ring.base(), rng, d);
    PrimeElement {
        series: ring.from_poly(&pi).mul(&u).expect("same ring"),
        prime: HeightOnePrime::Distinguished(pi),
    }
}

fn series_ring(p: u64) -> Result<SeriesRing> {
    SeriesRing::new(&PadicRing::new(p, 12)?, 1, 24)
}

/// Random height-two pairs of distinct prime elements, skipping pairs whose
/// length is not determined at the working precision.
fn height_two_pairs(
    rng: &mut ChaCha8Rng,
    count: usize,
) -> Result<(Vec<(TruncatedSeries, TruncatedSeries)>, usize)> {
    let mut out = Vec::new();
    let mut skipped = 0;
    for p in [5u64, 7] {
        let ring = series_ring(p)?;
        while out.len() < count / 2 * if p == 5 { 1 } else { 2 } {
            let a = rand_prime(&ring, rng, true);
            let b = rand_prime(&ring, rng, true);
            if a.prime == b.prime {
                continue;
            }
            match c2_routes(&a.series, &b.series) {
                Err(Error::PrecisionExhausted(_)) | Err(Error::NotHeightTwo(_)) => skipped += 1,
                _ => out.push((a.series, b.series)),
            }
        }
    }
    Ok((out, skipped))
}

fn three_way(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let (pairs, skipped) = height_two_pairs(rng, 100)?;
    let mut bad = Vec::new();
    let mut total = 0u64;
    for (f1, f2) in &pairs {
        let r = c2_routes(f1, f2)?;
        total += r.snf as u64;
        if r.snf != r.resultant || r.snf as i64 != r.symbol {
            bad.push(format!("({f1}, {f2}): {r:?}"));
        }
    }
    Ok((
        bad.is_empty() && pairs.len() == 100,
        format!(
            "{} pairs, {} disagreements, total length {total}, {skipped} pairs redrawn{}",
            pairs.len(),
            bad.len(),
            bad.first()
                .map(|b| format!("; first: {b}"))
                .unwrap_or_default()
        ),
    ))
}

fn symmetry(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let (pairs, _) = height_two_pairs(rng, 100)?;
    let mut bad = 0;
    for (f1, f2) in &pairs {
        let r = verify_prop29(f1, f2, &[PrimeLabel::closed_point()])?;
        if r.lhs != r.symmetric || !r.diagonal.is_zero() {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("{} pairs, {bad} asymmetric", pairs.len())))
}

fn rand_product(
    ring: &SeriesRing,
    rng: &mut ChaCha8Rng,
    primes: &[PrimeElement],
) -> TruncatedSeries {
    let mut f = rand_unit(ring, rng, 1);
    for _ in 0..rng.gen_range(1..=3) {
        let k = rng.gen_range(0..primes.len());
        f = f.mul(&primes[k].series).expect("same ring");
    }
    f
}

fn reciprocity(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    let mut count = 0;
    for p in [5u64, 7] {
        let ring = series_ring(p)?;
        for _ in 0..25 {
            let mut pool = vec![PrimeElement {
                prime: HeightOnePrime::P,
                series: ring.from_int(p as i128),
            }];
            while pool.len() < 4 {
                let e = rand_prime(&ring, rng, false);
                if !pool.iter().any(|q| q.prime == e.prime) {
                    pool.push(e);
                }
            }
            let f = rand_product(&ring, rng, &pool);
            let g = rand_product(&ring, rng, &pool);
            let support: Vec<HeightOnePrime> = pool.iter().map(|q| q.prime.clone()).collect();
            let cycle = reciprocity_cycle(&f, &g, &support)?;
            count += 1;
            if !cycle.is_zero() {
                bad.push(format!("{{{f} ; {g}}} -> {}", cycle.mult(CLOSED_POINT)));
            }
        }
    }
    Ok((
        bad.is_empty(),
        format!(
            "{count} symbols, {} nonzero{}",
            bad.len(),
            bad.first()
                .map(|b| format!("; first: {b}"))
                .unwrap_or_default()
        ),
    ))
}

fn growth(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    let mut redrawn = 0;
    let mut done = 0;
    while done < 20 {
        let p = if done < 10 { 5 } else { 7 };
        let ring = series_ring(p)?;
        let mu = rng.gen_range(0..=2u32);
        let mut f = rand_unit(&ring, rng, 2).scale(&ring.base().from_int((p as i128).pow(mu)));
        for _ in 0..rng.gen_range(0..=2) {
            f = f.mul(&rand_prime(&ring, rng, false).series)?;
        }
        let w = f.weierstrass_prepare()?;
        let e = match growth_orders(&f, 4) {
            Ok(e) => e,
            Err(Error::NotCoprime(_)) => {
                redrawn += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        done += 1;
        match fit_growth(&e, p) {
            Ok(fit) if fit.mu == w.mu as i64 && fit.lambda == w.lambda() as i64 => {}
            other => bad.push(format!(
                "e = {e:?}, mu {} lambda {}: {other:?}",
                w.mu,
                w.lambda()
            )),
        }
    }
    Ok((
        bad.is_empty(),
        format!(
            "20 series, {} mismatches, {redrawn} redrawn{}",
            bad.len(),
            bad.first()
                .map(|b| format!("; first: {b}"))
                .unwrap_or_default()
        ),
    ))
}

fn koszul(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    let mut dims = Vec::new();
    while dims.len() < 10 {
        let p = if dims.len() < 5 { 5 } else { 7 };
        let a = rng.gen_range(1..=4u32);
        let b = rng.gen_range(1..=4u32);
        let mut f1 = PolyFp::monomial(p, 2, 1, [a, 0, 0]);
        let mut f2 = PolyFp::monomial(p, 2, 1, [0, b, 0]);
        for _ in 0..2 {
            let e = [rng.gen_range(0..a), rng.gen_range(0..=b), 0];
            f1 = f1.add(&PolyFp::monomial(p, 2, rng.gen_range(0..p as i64), e));
            let e = [rng.gen_range(0..=a), rng.gen_range(0..b), 0];
            f2 = f2.add(&PolyFp::monomial(p, 2, rng.gen_range(0..p as i64), e));
        }
        let seq = [f1, f2];
        let qd = buchberger(&seq, MonomialOrder::Grevlex)?.quotient_dim();
        match qd.finite() {
            Some(d) if (1..=12).contains(&d) => {}
            _ => continue,
        }
        let r = ext_dims(&seq)?;
        let bi = biduality_check(&seq)?;
        dims.push(r.quotient_dim);
        if !(r.concentrated() && bi) {
            bad.push(format!(
                "({}, {}): {:?} biduality {bi}",
                seq[0], seq[1], r.dims
            ));
        }
    }
    Ok((
        bad.is_empty(),
        format!(
            "10 sequences with quotient dims {dims:?}, {} failures{}",
            bad.len(),
            bad.first()
                .map(|b| format!("; first: {b}"))
                .unwrap_or_default()
        ),
    ))
}

/// Small random element for symbol identities: `p^a * unit * π^b`.
fn rand_symbol_entry(
    ring: &SeriesRing,
    rng: &mut ChaCha8Rng,
    pi: &TruncatedSeries,
) -> TruncatedSeries {
    let a = rng.gen_range(0..=2u32);
    let mut f =
        rand_unit(ring, rng, 2).scale(&ring.base().from_int((ring.base().p() as i128).pow(a)));
    for _ in 0..rng.gen_range(0..=2) {
        f = f.mul(pi).expect("same ring");
    }
    f
}

fn symbol_algebra(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    const N: usize = 50;
    let mut failures: Vec<String> = Vec::new();
    let mut counts = [0usize; 6];
    let ring = series_ring(5)?;
    for i in 0..N {
        let pe = rand_prime(&ring, rng, true);
        let pi_series = match &pe.prime {
            HeightOnePrime::P => ring.from_int(5),
            HeightOnePrime::Distinguished(g) => ring.from_poly(g),
        };
        let dvr = DvrDescriptor::new(&ring, pe.prime.clone())?;
        let f1 = rand_symbol_entry(&ring, rng, &pi_series);
        let f2 = rand_symbol_entry(&ring, rng, &pi_series);
        let g = rand_symbol_entry(&ring, rng, &pi_series);

        // bilinearity in the first slot
        let lhs = tame(&SymbolProduct::of_series(&f1.mul(&f2)?, &g, 1)?, &dvr)?;
        let rhs = tame(&SymbolProduct::of_series(&f1, &g, 1)?, &dvr)?
            .mul(&tame(&SymbolProduct::of_series(&f2, &g, 1)?, &dvr)?)?;
        counts[0] += 1;
        if !lhs.agrees_with(&rhs) {
            failures.push(format!("bilinearity #{i}"));
        }

        // antisymmetry
        let ab = tame(&SymbolProduct::of_series(&f1, &g, 1)?, &dvr)?;
        let ba = tame(&SymbolProduct::of_series(&g, &f1, 1)?, &dvr)?;
        counts[1] += 1;
        if !ab.mul(&ba)?.is_one() {
            failures.push(format!("antisymmetry #{i}"));
        }

        // Steinberg relation {f, 1 - f} = 1
        let one_minus = ring.one().sub(&f1)?;
        if !one_minus.is_zero() {
            counts[2] += 1;
            if !tame(&SymbolProduct::of_series(&f1, &one_minus, 1)?, &dvr)?.is_one() {
                failures.push(format!("steinberg #{i}"));
            }
        }

        // ι is an involution
        counts[4] += 1;
        if f1.iota()?.iota()? != f1 {
            failures.push(format!("iota #{i}"));
        }

        // c1 is additive
        let mut primes = vec![HeightOnePrime::P, pe.prime.clone()];
        primes.dedup();
        counts[5] += 1;
        if c1(&f1.mul(&g)?, &primes)? != c1(&f1, &primes)?.add(&c1(&g, &primes)?) {
            failures.push(format!("c1 additivity #{i}"));
        }
    }

    // Teichmüller multiplicativity in W(F_25)
    let w = PadicRing::unramified(5, 10, &[2, 0, 1])?;
    for i in 0..N {
        let mut x = || {
            let k = rng.gen_range(1..25i128);
            w.from_coeffs(&[k % 5, k / 5])
        };
        let (a, b) = (x()?, x()?);
        counts[3] += 1;
        let lhs = w.teichmuller(&a.mul(&b))?;
        let rhs = w.teichmuller(&a)?.mul(&w.teichmuller(&b)?);
        if lhs != rhs {
            failures.push(format!("teichmuller #{i}"));
        }
    }
    let enough = counts.iter().all(|&c| c >= N - 1);
    Ok((
        failures.is_empty() && enough,
        format!(
            "instances bilinear {}, antisymmetric {}, steinberg {}, teichmuller {}, iota {}, c1 {}; {} failures{}",
            counts[0],
            counts[1],
            counts[2],
            counts[3],
            counts[4],
            counts[5],
            failures.len(),
            failures.first().map(|b| format!(": {b}")).unwrap_or_default()
        ),
    ))
}
