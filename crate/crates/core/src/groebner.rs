//! Buchberger's algorithm over `F_p` in at most three variables, for ideals
//! and for submodules of free modules, with normal forms, standard-monomial
//! counts and Schreyer syzygies.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::padic::is_prime;
use crate::parse::{parse_expr_in, Expr, POLY_VARS};

pub const MAX_VARS: usize = 3;
pub type Exp = [u32; MAX_VARS];

fn deg(e: &Exp) -> u32 {
    e.iter().sum()
}

fn divides(a: &Exp, b: &Exp) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &Exp, b: &Exp) -> Exp {
    [a[0].max(b[0]), a[1].max(b[1]), a[2].max(b[2])]
}

fn quo(a: &Exp, b: &Exp) -> Exp {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut acc = 1;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic with `x > y > z`.
    #[default]
    Grevlex,
    /// Lexicographic with `x > y > z`.
    Lex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &Exp, b: &Exp) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Grevlex => deg(a).cmp(&deg(b)).then_with(|| {
                for i in (0..MAX_VARS).rev() {
                    if a[i] != b[i] {
                        return b[i].cmp(&a[i]);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

/// How module terms `x^a e_i` are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum ModuleOrder {
    /// Position over term, `e_0 > e_1 > ..`.
    #[default]
    Pot,
    /// Term over position.
    Top,
}

/// Polynomial over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyFp {
    p: u64,
    nvars: usize,
    terms: BTreeMap<Exp, u64>,
}

impl PolyFp {
    pub fn zero(p: u64, nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS);
        PolyFp {
            p,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(p: u64, nvars: usize, c: i64) -> Self {
        Self::monomial(p, nvars, c, [0; MAX_VARS])
    }

    pub fn monomial(p: u64, nvars: usize, c: i64, e: Exp) -> Self {
        let mut out = Self::zero(p, nvars);
        out.add_term(e, c.rem_euclid(p as i64) as u64);
        out
    }

    pub fn var(p: u64, nvars: usize, i: usize) -> Self {
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        Self::monomial(p, nvars, 1, e)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exp, u64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &Exp) -> u64 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    fn add_term(&mut self, e: Exp, c: u64) {
        let v = (self.coeff(&e) + c % self.p) % self.p;
        if v == 0 {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, *c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(self.p - 1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> Self {
        let mut out = Self::zero(self.p, self.nvars);
        for (e, x) in &self.terms {
            out.add_term(*e, mul_mod(*x, c, self.p));
        }
        out
    }

    /// `c x^e * self`.
    pub fn mul_term(&self, c: u64, e: &Exp) -> Self {
        let mut out = Self::zero(self.p, self.nvars);
        for (f, x) in &self.terms {
            out.add_term(
                [f[0] + e[0], f[1] + e[1], f[2] + e[2]],
                mul_mod(*x, c, self.p),
            );
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.p, self.nvars);
        for (e, c) in &other.terms {
            out = out.add(&self.mul_term(*c, e));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.p, self.nvars, 1);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn leading(&self, order: MonomialOrder) -> Option<(Exp, u64)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
            .map(|(e, c)| (*e, *c))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(deg).max().unwrap_or(0)
    }

    pub fn from_expr(p: u64, nvars: usize, e: &Expr) -> Result<Self> {
        Ok(match e {
            Expr::Int(n) => {
                let r = n % num_bigint::BigInt::from(p);
                let r: i64 = num_traits::ToPrimitive::to_i64(&r).expect("reduced");
                Self::constant(p, nvars, r)
            }
            Expr::Var(i) if *i < nvars => Self::var(p, nvars, *i),
            Expr::Var(i) => {
                return Err(Error::invalid(format!(
                    "variable {} outside a ring with {nvars} variables",
                    i + 1
                )))
            }
            Expr::Neg(a) => Self::from_expr(p, nvars, a)?.neg(),
            Expr::Add(a, b) => Self::from_expr(p, nvars, a)?.add(&Self::from_expr(p, nvars, b)?),
            Expr::Sub(a, b) => Self::from_expr(p, nvars, a)?.sub(&Self::from_expr(p, nvars, b)?),
            Expr::Mul(a, b) => Self::from_expr(p, nvars, a)?.mul(&Self::from_expr(p, nvars, b)?),
            Expr::Pow(a, k) => Self::from_expr(p, nvars, a)?.pow(*k),
        })
    }

    /// Parse text in the variables `x, y, z`.
    pub fn parse(p: u64, nvars: usize, text: &str) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if nvars == 0 || nvars > MAX_VARS {
            return Err(Error::invalid("number of variables must be 1..=3"));
        }
        Self::from_expr(p, nvars, &parse_expr_in(text, POLY_VARS)?)
    }
}

impl fmt::Display for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let names = ["x", "y", "z"];
        let mut terms: Vec<(&Exp, &u64)> = self.terms.iter().collect();
        terms.sort_by(|a, b| MonomialOrder::Grevlex.cmp(b.0, a.0));
        let parts: Vec<String> = terms
            .into_iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .zip(names)
                    .filter(|(k, _)| **k > 0)
                    .map(|(k, n)| {
                        if *k == 1 {
                            n.to_string()
                        } else {
                            format!("{n}^{k}")
                        }
                    })
                    .collect();
                match (mono.is_empty(), *c) {
                    (true, c) => c.to_string(),
                    (false, 1) => mono.join("*"),
                    (false, c) => format!("{c}*{}", mono.join("*")),
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Element of a free module `P^rank`.
pub type ModVec = Vec<PolyFp>;

/// Shared coefficient data for module computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    pub p: u64,
    pub nvars: usize,
}

impl Ring {
    pub fn new(p: u64, nvars: usize) -> Result<Self> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::invalid(format!("{p} is not a supported prime")));
        }
        if nvars == 0 || nvars > MAX_VARS {
            return Err(Error::invalid("number of variables must be 1..=3"));
        }
        Ok(Ring { p, nvars })
    }

    pub fn zero(&self) -> PolyFp {
        PolyFp::zero(self.p, self.nvars)
    }

    pub fn one(&self) -> PolyFp {
        PolyFp::constant(self.p, self.nvars, 1)
    }

    pub fn zero_vec(&self, rank: usize) -> ModVec {
        vec![self.zero(); rank]
    }

    pub fn unit_vec(&self, rank: usize, i: usize) -> ModVec {
        let mut v = self.zero_vec(rank);
        v[i] = self.one();
        v
    }
}

fn vec_is_zero(v: &[PolyFp]) -> bool {
    v.iter().all(|x| x.is_zero())
}

fn vec_add(a: &[PolyFp], b: &[PolyFp]) -> ModVec {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn vec_sub(a: &[PolyFp], b: &[PolyFp]) -> ModVec {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

fn vec_mul_term(v: &[PolyFp], c: u64, e: &Exp) -> ModVec {
    v.iter().map(|x| x.mul_term(c, e)).collect()
}

/// `Σ coeffs[i] * vecs[i]`.
pub fn combine(ring: &Ring, rank: usize, coeffs: &[PolyFp], vecs: &[ModVec]) -> ModVec {
    let mut out = ring.zero_vec(rank);
    for (c, v) in coeffs.iter().zip(vecs) {
        for (o, x) in out.iter_mut().zip(v) {
            *o = o.add(&c.mul(x));
        }
    }
    out
}

/// Leading term `(position, monomial, coefficient)`.
type Lead = (usize, Exp, u64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct TermOrder {
    pub mono: MonomialOrder,
    pub module: ModuleOrder,
}

impl TermOrder {
    fn cmp(&self, a: (usize, &Exp), b: (usize, &Exp)) -> Ordering {
        // smaller position index ranks higher
        let pos = b.0.cmp(&a.0);
        let mono = self.mono.cmp(a.1, b.1);
        match self.module {
            ModuleOrder::Pot => pos.then(mono),
            ModuleOrder::Top => mono.then(pos),
        }
    }

    fn lead(&self, v: &[PolyFp]) -> Option<Lead> {
        let mut best: Option<Lead> = None;
        for (i, x) in v.iter().enumerate() {
            if let Some((e, c)) = x.leading(self.mono) {
                if best.is_none_or(|b| self.cmp((i, &e), (b.0, &b.1)) == Ordering::Greater) {
                    best = Some((i, e, c));
                }
            }
        }
        best
    }
}

/// Reduced Gröbner basis of a submodule of `P^rank` (an ideal when `rank = 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GBasis {
    ring: Ring,
    rank: usize,
    order: TermOrder,
    gens: Vec<ModVec>,
    leads: Vec<Lead>,
}

/// Dimension of `P^rank / M` over `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientDim {
    Finite(u64),
    Infinite,
}

impl QuotientDim {
    pub fn finite(self) -> Option<u64> {
        match self {
            QuotientDim::Finite(n) => Some(n),
            QuotientDim::Infinite => None,
        }
    }
}

impl fmt::Display for QuotientDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientDim::Finite(n) => write!(f, "{n}"),
            QuotientDim::Infinite => f.write_str("infinite"),
        }
    }
}

struct Reducer<'a> {
    order: TermOrder,
    basis: &'a [ModVec],
    leads: &'a [Lead],
    p: u64,
}

impl Reducer<'_> {
    fn divisor(&self, pos: usize, e: &Exp) -> Option<usize> {
        self.leads
            .iter()
            .position(|(i, le, _)| *i == pos && divides(le, e))
    }

    /// Full normal form; `quotients[k]` collects the multiplier of basis `k`.
    fn reduce(&self, f: &[PolyFp], ring: &Ring, mut quotients: Option<&mut Vec<PolyFp>>) -> ModVec {
        let mut rest = f.to_vec();
        let mut rem = ring.zero_vec(f.len());
        while let Some((pos, e, c)) = self.order.lead(&rest) {
            if let Some(k) = self.divisor(pos, &e) {
                let (_, le, lc) = self.leads[k];
                let factor = mul_mod(c, inv_mod(lc, self.p), self.p);
                let shift = quo(&e, &le);
                rest = vec_sub(&rest, &vec_mul_term(&self.basis[k], factor, &shift));
                if let Some(q) = quotients.as_deref_mut() {
                    q[k].add_term(shift, factor);
                }
            } else {
                rem[pos].add_term(e, c);
                rest[pos].terms.remove(&e);
            }
        }
        rem
    }
}

fn s_vector(
    order: TermOrder,
    a: &[PolyFp],
    la: &Lead,
    b: &[PolyFp],
    lb: &Lead,
    p: u64,
) -> (ModVec, Exp, Exp, u64, u64) {
    let l = lcm(&la.1, &lb.1);
    let ma = quo(&l, &la.1);
    let mb = quo(&l, &lb.1);
    let ca = inv_mod(la.2, p);
    let cb = inv_mod(lb.2, p);
    let _ = order;
    (
        vec_sub(&vec_mul_term(a, ca, &ma), &vec_mul_term(b, cb, &mb)),
        ma,
        mb,
        ca,
        cb,
    )
}

/// Buchberger's algorithm with the normal selection strategy on sugar
/// degree; ties break on pair indices, so results depend only on the input
/// order. Returns the reduced basis.
pub fn buchberger_module(ring: &Ring, rank: usize, gens: &[ModVec], order: TermOrder) -> GBasis {
    let p = ring.p;
    let mut basis: Vec<ModVec> = Vec::new();
    let mut leads: Vec<Lead> = Vec::new();
    let mut sugar: Vec<u32> = Vec::new();
    let mut pairs: Vec<(u32, u32, usize, usize)> = Vec::new();

    let add = |v: ModVec,
               s: u32,
               basis: &mut Vec<ModVec>,
               leads: &mut Vec<Lead>,
               sugar: &mut Vec<u32>,
               pairs: &mut Vec<(u32, u32, usize, usize)>| {
        let l = order.lead(&v).expect("nonzero");
        let k = basis.len();
        for (i, li) in leads.iter().enumerate() {
            if li.0 != l.0 {
                continue;
            }
            if rank == 1 && li.1.iter().zip(&l.1).all(|(a, b)| *a == 0 || *b == 0) {
                continue;
            }
            let m = lcm(&li.1, &l.1);
            let s_pair = (sugar[i] + deg(&m) - deg(&li.1)).max(s + deg(&m) - deg(&l.1));
            pairs.push((s_pair, deg(&m), i, k));
        }
        basis.push(v);
        leads.push(l);
        sugar.push(s);
    };

    for g in gens {
        if vec_is_zero(g) {
            continue;
        }
        let s = g.iter().map(|x| x.total_degree()).max().unwrap_or(0);
        let r = Reducer {
            order,
            basis: &basis,
            leads: &leads,
            p,
        }
        .reduce(g, ring, None);
        if !vec_is_zero(&r) {
            add(r, s, &mut basis, &mut leads, &mut sugar, &mut pairs);
        }
    }
    while !pairs.is_empty() {
        let idx = (0..pairs.len()).min_by_key(|&k| pairs[k]).unwrap();
        let (s, _, i, j) = pairs.swap_remove(idx);
        let (sv, ..) = s_vector(order, &basis[i], &leads[i], &basis[j], &leads[j], p);
        let r = Reducer {
            order,
            basis: &basis,
            leads: &leads,
            p,
        }
        .reduce(&sv, ring, None);
        if !vec_is_zero(&r) {
            add(r, s, &mut basis, &mut leads, &mut sugar, &mut pairs);
        }
    }

    // Minimal basis: drop elements whose lead is divisible by another lead.
    let mut keep: Vec<usize> = Vec::new();
    for i in 0..basis.len() {
        let redundant = (0..basis.len()).any(|j| {
            j != i
                && leads[j].0 == leads[i].0
                && divides(&leads[j].1, &leads[i].1)
                && (leads[j].1 != leads[i].1 || j < i)
        });
        if !redundant {
            keep.push(i);
        }
    }
    let mut gens: Vec<ModVec> = keep
        .iter()
        .map(|&i| {
            let inv = inv_mod(leads[i].2, p);
            basis[i].iter().map(|x| x.scale(inv)).collect()
        })
        .collect();
    // Interreduce tails.
    for k in 0..gens.len() {
        let others: Vec<ModVec> = gens
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, g)| g.clone())
            .collect();
        let other_leads: Vec<Lead> = others.iter().map(|g| order.lead(g).unwrap()).collect();
        let l = order.lead(&gens[k]).unwrap();
        let mut head = ring.zero_vec(rank);
        head[l.0] = PolyFp::monomial(p, ring.nvars, 1, l.1);
        let tail = vec_sub(&gens[k], &head);
        let red = Reducer {
            order,
            basis: &others,
            leads: &other_leads,
            p,
        }
        .reduce(&tail, ring, None);
        gens[k] = vec_add(&head, &red);
    }
    gens.sort_by(|a, b| {
        let la = order.lead(a).unwrap();
        let lb = order.lead(b).unwrap();
        order.cmp((lb.0, &lb.1), (la.0, &la.1))
    });
    let leads = gens.iter().map(|g| order.lead(g).unwrap()).collect();
    GBasis {
        ring: *ring,
        rank,
        order,
        gens,
        leads,
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(gens: &[PolyFp], order: MonomialOrder) -> Result<GBasis> {
    let first = gens
        .first()
        .ok_or_else(|| Error::invalid("empty generator list"))?;
    let ring = Ring::new(first.p, first.nvars)?;
    if gens.iter().any(|g| g.p != ring.p || g.nvars != ring.nvars) {
        return Err(Error::RingMismatch);
    }
    let vecs: Vec<ModVec> = gens.iter().map(|g| vec![g.clone()]).collect();
    Ok(buchberger_module(
        &ring,
        1,
        &vecs,
        TermOrder {
            mono: order,
            module: ModuleOrder::Pot,
        },
    ))
}

impl GBasis {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn gens(&self) -> &[ModVec] {
        &self.gens
    }

    /// Generators of an ideal basis.
    pub fn polys(&self) -> Vec<PolyFp> {
        self.gens.iter().map(|g| g[0].clone()).collect()
    }

    fn reducer(&self) -> Reducer<'_> {
        Reducer {
            order: self.order,
            basis: &self.gens,
            leads: &self.leads,
            p: self.ring.p,
        }
    }

    pub fn normal_form_vec(&self, v: &[PolyFp]) -> ModVec {
        self.reducer().reduce(v, &self.ring, None)
    }

    pub fn normal_form(&self, f: &PolyFp) -> PolyFp {
        self.normal_form_vec(std::slice::from_ref(f)).remove(0)
    }

    pub fn contains_vec(&self, v: &[PolyFp]) -> bool {
        vec_is_zero(&self.normal_form_vec(v))
    }

    pub fn contains(&self, f: &PolyFp) -> bool {
        self.normal_form(f).is_zero()
    }

    /// The basis contains a unit in every position: the submodule is everything.
    pub fn is_whole(&self) -> bool {
        (0..self.rank).all(|i| {
            self.leads
                .iter()
                .any(|(pos, e, _)| *pos == i && deg(e) == 0)
        })
    }

    /// Standard monomials per position, or `None` when some staircase is unbounded.
    pub fn standard_monomials(&self) -> Option<Vec<(usize, Exp)>> {
        let n = self.ring.nvars;
        let mut out = Vec::new();
        for pos in 0..self.rank {
            let leads: Vec<&Exp> = self
                .leads
                .iter()
                .filter(|l| l.0 == pos)
                .map(|l| &l.1)
                .collect();
            let mut bound = [1u32; MAX_VARS];
            for (i, b) in bound.iter_mut().enumerate().take(n) {
                *b = leads
                    .iter()
                    .filter(|e| (0..n).all(|j| j == i || e[j] == 0))
                    .map(|e| e[i])
                    .min()?;
            }
            for a in 0..bound[0] {
                for b in 0..bound[1] {
                    for c in 0..bound[2] {
                        let e = [a, b, c];
                        if !leads.iter().any(|l| divides(l, &e)) {
                            out.push((pos, e));
                        }
                    }
                }
            }
        }
        Some(out)
    }

    pub fn quotient_dim(&self) -> QuotientDim {
        match self.standard_monomials() {
            Some(v) => QuotientDim::Finite(v.len() as u64),
            None => QuotientDim::Infinite,
        }
    }

    /// Schreyer generators of the syzygies among the basis elements: one per
    /// pair with leads in the same position, from the standard representation
    /// of its S-vector.
    pub fn syzygies(&self) -> Vec<ModVec> {
        let k = self.gens.len();
        let p = self.ring.p;
        let mut out = Vec::new();
        for j in 0..k {
            for i in 0..j {
                let (li, lj) = (&self.leads[i], &self.leads[j]);
                if li.0 != lj.0 {
                    continue;
                }
                let (sv, mi, mj, ci, cj) =
                    s_vector(self.order, &self.gens[i], li, &self.gens[j], lj, p);
                let mut q = vec![self.ring.zero(); k];
                let rem = self.reducer().reduce(&sv, &self.ring, Some(&mut q));
                debug_assert!(vec_is_zero(&rem));
                let mut syz: ModVec = q.iter().map(|x| x.neg()).collect();
                syz[i] = syz[i].add(&PolyFp::monomial(p, self.ring.nvars, ci as i64, mi));
                syz[j] = syz[j].sub(&PolyFp::monomial(p, self.ring.nvars, cj as i64, mj));
                out.push(syz);
            }
        }
        out
    }
}

/// Generators of `{r in P^m : Σ r_j v_j = 0}` for `v_j in P^rank`, read off a
/// position-over-term basis of the graph module `{(v_j, e_j)}`.
pub fn kernel(ring: &Ring, rank: usize, vecs: &[ModVec], mono: MonomialOrder) -> Vec<ModVec> {
    let m = vecs.len();
    let graph: Vec<ModVec> = vecs
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let mut w = v.clone();
            w.extend(ring.unit_vec(m, j));
            w
        })
        .collect();
    let gb = buchberger_module(
        ring,
        rank + m,
        &graph,
        TermOrder {
            mono,
            module: ModuleOrder::Pot,
        },
    );
    gb.gens
        .iter()
        .filter(|g| vec_is_zero(&g[..rank]))
        .map(|g| g[rank..].to_vec())
        .collect()
}
