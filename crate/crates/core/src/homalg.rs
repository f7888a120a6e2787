//! Koszul complexes and Ext groups of finite-length quotients of polynomial
//! rings over `F_p`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groebner::{
    buchberger, buchberger_module, kernel, GBasis, ModVec, ModuleOrder, MonomialOrder, PolyFp,
    QuotientDim, Ring, TermOrder,
};

const ORDER: TermOrder = TermOrder {
    mono: MonomialOrder::Grevlex,
    module: ModuleOrder::Pot,
};

/// Subsets of `0..d` of size `k` in lexicographic order.
fn subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << d) {
        if mask.count_ones() as usize == k {
            out.push((0..d).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
        }
    }
    out.sort();
    out
}

/// A map `P^src -> P^dst` stored as the images of the basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeMap {
    pub src: usize,
    pub dst: usize,
    pub columns: Vec<ModVec>,
}

impl FreeMap {
    pub fn transpose(&self, ring: &Ring) -> FreeMap {
        let columns = (0..self.dst)
            .map(|i| (0..self.src).map(|j| self.columns[j][i].clone()).collect())
            .collect::<Vec<ModVec>>();
        let _ = ring;
        FreeMap {
            src: self.dst,
            dst: self.src,
            columns,
        }
    }

    pub fn apply(&self, ring: &Ring, v: &[PolyFp]) -> ModVec {
        crate::groebner::combine(ring, self.dst, v, &self.columns)
    }

    pub fn compose_is_zero(&self, after: &FreeMap, ring: &Ring) -> bool {
        self.columns
            .iter()
            .all(|c| after.apply(ring, c).iter().all(|x| x.is_zero()))
    }
}

#[derive(Clone, Debug)]
pub struct KoszulComplex {
    ring: Ring,
    seq: Vec<PolyFp>,
    /// `differentials[k - 1]` is `d_k : K_k -> K_{k-1}`.
    differentials: Vec<FreeMap>,
}

impl KoszulComplex {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn sequence(&self) -> &[PolyFp] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn differential(&self, k: usize) -> &FreeMap {
        &self.differentials[k - 1]
    }

    /// Differentials of `Hom(K, P)`: `delta[k] : K_k^* -> K_{k+1}^*`.
    pub fn dual(&self) -> Vec<FreeMap> {
        self.differentials
            .iter()
            .map(|m| m.transpose(&self.ring))
            .collect()
    }
}

pub fn koszul(f: &[PolyFp]) -> Result<KoszulComplex> {
    let first = f.first().ok_or_else(|| Error::invalid("empty sequence"))?;
    let d = f.len();
    if d > 3 {
        return Err(Error::invalid(
            "sequences of length at most 3 are supported",
        ));
    }
    let ring = Ring::new(first.p(), first.nvars())?;
    if f.iter().any(|g| g.p() != ring.p || g.nvars() != ring.nvars) {
        return Err(Error::RingMismatch);
    }
    if f.iter().any(|g| g.is_zero()) {
        return Err(Error::invalid("sequence entries must be nonzero"));
    }
    let mut differentials = Vec::new();
    for k in 1..=d {
        let src = subsets(d, k);
        let dst = subsets(d, k - 1);
        let columns = src
            .iter()
            .map(|s| {
                let mut col = ring.zero_vec(dst.len());
                for (pos, &j) in s.iter().enumerate() {
                    let rest: Vec<usize> = s.iter().copied().filter(|&i| i != j).collect();
                    let row = dst.iter().position(|t| *t == rest).expect("face");
                    let term = if pos % 2 == 0 {
                        f[j].clone()
                    } else {
                        f[j].neg()
                    };
                    col[row] = col[row].add(&term);
                }
                col
            })
            .collect();
        differentials.push(FreeMap {
            src: src.len(),
            dst: dst.len(),
            columns,
        });
    }
    for k in 1..d {
        assert!(
            differentials[k].compose_is_zero(&differentials[k - 1], &ring),
            "Koszul differentials do not compose to zero"
        );
    }
    Ok(KoszulComplex {
        ring,
        seq: f.to_vec(),
        differentials,
    })
}

/// Finitely presented module `P^rank / relations`.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub ring: Ring,
    pub rank: usize,
    pub relations: GBasis,
}

impl Presentation {
    pub fn dim(&self) -> QuotientDim {
        if self.rank == 0 {
            QuotientDim::Finite(0)
        } else {
            self.relations.quotient_dim()
        }
    }

    fn submodule(&self, extra: &[ModVec]) -> GBasis {
        let mut gens: Vec<ModVec> = self.relations.gens().to_vec();
        gens.extend(extra.iter().cloned());
        buchberger_module(&self.ring, self.rank, &gens, ORDER)
    }

    /// Size of a generating set obtained by discarding generators that lie in
    /// the span of the others.
    pub fn pruned_generators(&self) -> usize {
        let mut live: Vec<usize> = (0..self.rank).collect();
        let mut i = 0;
        while i < live.len() {
            let others: Vec<ModVec> = live
                .iter()
                .filter(|&&j| j != live[i])
                .map(|&j| self.ring.unit_vec(self.rank, j))
                .collect();
            if self
                .submodule(&others)
                .contains_vec(&self.ring.unit_vec(self.rank, live[i]))
            {
                live.remove(i);
            } else {
                i += 1;
            }
        }
        live.len()
    }

    /// `{a : a P^rank ⊆ relations}`, as a reduced ideal basis.
    pub fn annihilator(&self) -> Result<GBasis> {
        let r = self.rank;
        if r == 0 {
            return buchberger(&[self.ring.one()], ORDER.mono);
        }
        let big = r * r;
        let mut vecs = Vec::new();
        let mut diag = self.ring.zero_vec(big);
        for j in 0..r {
            diag[j * r + j] = self.ring.one();
        }
        vecs.push(diag);
        for j in 0..r {
            for g in self.relations.gens() {
                let mut v = self.ring.zero_vec(big);
                v[j * r..(j + 1) * r].clone_from_slice(g);
                vecs.push(v);
            }
        }
        let ann: Vec<PolyFp> = kernel(&self.ring, big, &vecs, ORDER.mono)
            .into_iter()
            .map(|k| k[0].clone())
            .filter(|a| !a.is_zero())
            .collect();
        if ann.is_empty() {
            return buchberger(&[self.ring.zero()], ORDER.mono);
        }
        buchberger(&ann, ORDER.mono)
    }
}

/// `ker(outgoing) / im(incoming)` at a term `P^a` of a complex. `incoming`
/// holds vectors of `P^a`; `outgoing` is a map out of `P^a` (or `None` at the
/// end of the complex).
pub fn cohomology(
    ring: &Ring,
    a: usize,
    incoming: &[ModVec],
    outgoing: Option<&FreeMap>,
) -> Presentation {
    let cycles: Vec<ModVec> = match outgoing {
        Some(m) if a > 0 => kernel(ring, m.dst, &m.columns, ORDER.mono),
        _ => (0..a).map(|j| ring.unit_vec(a, j)).collect(),
    };
    let r = cycles.len();
    let mut all = cycles;
    all.extend(incoming.iter().cloned());
    let relations: Vec<ModVec> = if r == 0 {
        Vec::new()
    } else {
        kernel(ring, a, &all, ORDER.mono)
            .into_iter()
            .map(|k| k[..r].to_vec())
            .collect()
    };
    Presentation {
        ring: *ring,
        rank: r,
        relations: buchberger_module(ring, r, &relations, ORDER),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtReport {
    pub dims: Vec<u64>,
    pub quotient_dim: u64,
    pub cyclic: bool,
    pub annihilator_match: bool,
}

impl ExtReport {
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, d)| if i % 2 == 0 { *d as i64 } else { -(*d as i64) })
            .sum()
    }

    pub fn concentrated(&self) -> bool {
        let d = self.dims.len() - 1;
        self.dims[..d].iter().all(|x| *x == 0) && self.dims[d] == self.quotient_dim
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dims": self.dims,
            "quotient_dim": self.quotient_dim,
            "cyclic": self.cyclic,
            "annihilator_match": self.annihilator_match,
        })
    }
}

fn finite_quotient(f: &[PolyFp]) -> Result<(GBasis, u64)> {
    let gb = buchberger(f, ORDER.mono)?;
    match gb.quotient_dim() {
        QuotientDim::Finite(n) => Ok((gb, n)),
        QuotientDim::Infinite => Err(Error::NotFinite),
    }
}

fn ext_modules(k: &KoszulComplex) -> Vec<Presentation> {
    let ring = k.ring;
    let d = k.len();
    let dual = k.dual();
    (0..=d)
        .map(|i| {
            let a = subsets(d, i).len();
            let incoming: &[ModVec] = if i == 0 { &[] } else { &dual[i - 1].columns };
            cohomology(&ring, a, incoming, dual.get(i))
        })
        .collect()
}

fn same_ideal(a: &GBasis, b: &GBasis) -> bool {
    a.polys() == b.polys()
}

/// Dimensions of `Ext^i(P/(f), P)` from the dual Koszul complex.
pub fn ext_dims(f: &[PolyFp]) -> Result<ExtReport> {
    let k = koszul(f)?;
    let (ideal, qd) = finite_quotient(f)?;
    let modules = ext_modules(&k);
    let mut dims = Vec::with_capacity(modules.len());
    for m in &modules {
        dims.push(m.dim().finite().ok_or(Error::NotFinite)?);
    }
    let top = modules.last().expect("d >= 1");
    Ok(ExtReport {
        dims,
        quotient_dim: qd,
        cyclic: top.pruned_generators() <= 1,
        annihilator_match: same_ideal(&top.annihilator()?, &ideal),
    })
}

/// Free resolution `F_len -> .. -> F_0` of a presented module, as the maps
/// `F_k -> F_{k-1}` for `k = 1..=len`.
pub fn resolve(m: &Presentation, len: usize) -> Vec<FreeMap> {
    let ring = m.ring;
    let mut maps = Vec::new();
    let mut gens: Vec<ModVec> = m.relations.gens().to_vec();
    let mut dst = m.rank;
    for _ in 0..len {
        let src = gens.len();
        maps.push(FreeMap {
            src,
            dst,
            columns: gens.clone(),
        });
        gens = if src == 0 {
            Vec::new()
        } else {
            let syz = kernel(&ring, dst, &gens, ORDER.mono);
            buchberger_module(&ring, src, &syz, ORDER).gens().to_vec()
        };
        dst = src;
    }
    maps
}

/// `Ext^i(M, P)` from a free resolution of `M`.
pub fn ext_of(m: &Presentation, i: usize) -> Presentation {
    let maps = resolve(m, i + 1);
    let ring = m.ring;
    let a = if i == 0 { m.rank } else { maps[i - 1].src };
    let incoming = if i == 0 {
        Vec::new()
    } else {
        maps[i - 1].transpose(&ring).columns
    };
    let outgoing = maps[i].transpose(&ring);
    cohomology(&ring, a, &incoming, Some(&outgoing))
}

/// Compare `Ext^d(Ext^d(P/(f), P), P)` with `P/(f)` by dimension and
/// annihilator, for `d` the number of variables.
pub fn biduality_check(f: &[PolyFp]) -> Result<bool> {
    let k = koszul(f)?;
    let (ideal, qd) = finite_quotient(f)?;
    let d = k.ring.nvars;
    if f.len() != d {
        return Err(Error::invalid(
            "sequence length must equal the number of variables",
        ));
    }
    let top = ext_modules(&k).pop().expect("d >= 1");
    let twice = ext_of(&top, d);
    let dim = twice.dim().finite().ok_or(Error::NotFinite)?;
    Ok(dim == qd && same_ideal(&twice.annihilator()?, &ideal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(p: u64, n: usize, s: &[&str]) -> Vec<PolyFp> {
        s.iter().map(|x| PolyFp::parse(p, n, x).unwrap()).collect()
    }

    #[test]
    fn koszul_shapes() {
        let k = koszul(&seq(5, 1, &["x"])).unwrap();
        assert_eq!(k.differential(1).columns, vec![seq(5, 1, &["x"])]);
        let k = koszul(&seq(5, 2, &["x", "y"])).unwrap();
        assert_eq!(k.differential(2).columns, vec![seq(5, 2, &["-y", "x"])]);
        assert_eq!(
            k.differential(1).columns,
            vec![seq(5, 2, &["x"]), seq(5, 2, &["y"])]
        );
        let k = koszul(&seq(5, 2, &["x^2", "y^3"])).unwrap();
        assert_eq!(k.differential(2).columns, vec![seq(5, 2, &["-y^3", "x^2"])]);
        let k = koszul(&seq(7, 3, &["x", "y^2", "z+x"])).unwrap();
        assert_eq!(k.differential(2).src, 3);
        assert!(k
            .differential(3)
            .compose_is_zero(k.differential(2), k.ring()));
    }

    #[test]
    fn ext_examples() {
        let r = ext_dims(&seq(5, 2, &["x", "y"])).unwrap();
        assert_eq!(r.dims, vec![0, 0, 1]);
        assert!(r.cyclic && r.annihilator_match);
        let r = ext_dims(&seq(5, 2, &["x^2", "y^3"])).unwrap();
        assert_eq!(r.dims, vec![0, 0, 6]);
        assert!(r.cyclic && r.annihilator_match);
        assert_eq!(r.euler_characteristic(), 6);
        let r = ext_dims(&seq(5, 1, &["x"])).unwrap();
        assert_eq!(r.dims, vec![0, 1]);
        assert_eq!(r.euler_characteristic(), -1);
        assert_eq!(ext_dims(&seq(5, 2, &["x", "x"])), Err(Error::NotFinite));
    }

    #[test]
    fn ext_in_three_variables() {
        let r = ext_dims(&seq(7, 3, &["x^2", "y + x", "z^2 - y"])).unwrap();
        assert_eq!(r.dims, vec![0, 0, 0, 4]);
        assert!(r.cyclic && r.annihilator_match);
    }

    #[test]
    fn biduality_examples() {
        assert!(biduality_check(&seq(5, 2, &["x", "y"])).unwrap());
        assert!(biduality_check(&seq(5, 2, &["x^2", "y^3"])).unwrap());
        assert!(biduality_check(&seq(5, 2, &["y - x^2", "x^3"])).unwrap());
        assert_eq!(
            biduality_check(&seq(5, 2, &["x", "x"])),
            Err(Error::NotFinite)
        );
    }

    #[test]
    fn annihilator_of_a_non_cyclic_module() {
        // (x, y)^{⊕2} presented inside P^2
        let ring = Ring::new(5, 2).unwrap();
        let x = PolyFp::parse(5, 2, "x").unwrap();
        let y = PolyFp::parse(5, 2, "y").unwrap();
        let z = ring.zero();
        let rel = vec![
            vec![x.clone(), z.clone()],
            vec![y.clone(), z.clone()],
            vec![z.clone(), x.clone()],
            vec![z, y.clone()],
        ];
        let m = Presentation {
            ring,
            rank: 2,
            relations: buchberger_module(&ring, 2, &rel, ORDER),
        };
        assert_eq!(m.pruned_generators(), 2);
        assert_eq!(m.dim(), QuotientDim::Finite(2));
        assert_eq!(m.annihilator().unwrap().polys(), vec![x, y]);
    }

    fn arb_regular(p: u64) -> impl Strategy<Value = Vec<PolyFp>> {
        // x^a + (terms in y), y^b + c*x: a triangular shape with finite quotient
        (
            1u32..4,
            1u32..4,
            0i64..(p as i64),
            0i64..(p as i64),
            0u32..3,
        )
            .prop_map(move |(a, b, c, e, k)| {
                let f1 =
                    PolyFp::monomial(p, 2, 1, [a, 0, 0]).add(&PolyFp::monomial(p, 2, e, [0, k, 0]));
                let f2 =
                    PolyFp::monomial(p, 2, 1, [0, b, 0]).add(&PolyFp::monomial(p, 2, c, [1, 0, 0]));
                vec![f1, f2]
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10))]

        #[test]
        fn ext_concentrates(f in arb_regular(5)) {
            let r = ext_dims(&f).unwrap();
            prop_assert!(r.concentrated(), "{:?}", r);
            prop_assert_eq!(r.euler_characteristic(), r.quotient_dim as i64);
            prop_assert!(r.cyclic && r.annihilator_match);
        }
    }
}
