//! Matrices over `W / p^N`. The ring is local with principal maximal ideal
//! `(p)`, so elimination always pivots on an entry of least valuation and
//! every other entry of the active block is an exact multiple of the pivot.

use crate::error::{Error, Result};
use crate::padic::{PadicElement, PadicRing, Valuation};

pub type Matrix = Vec<Vec<PadicElement>>;

fn least_valuation(m: &Matrix, from: usize) -> Option<(usize, usize, u32)> {
    let mut best: Option<(usize, usize, u32)> = None;
    for (i, row) in m.iter().enumerate().skip(from) {
        for (j, x) in row.iter().enumerate().skip(from) {
            if let Valuation::Finite(v) = x.valuation() {
                if best.is_none_or(|b| v < b.2) {
                    best = Some((i, j, v));
                    if v == 0 {
                        return best;
                    }
                }
            }
        }
    }
    best
}

/// `q` with `q * pivot = x`, where `pivot = p^v u` and `p^v | x`.
fn quotient(x: &PadicElement, v: u32, unit_inv: &PadicElement) -> PadicElement {
    x.div_p_pow(v).mul(unit_inv)
}

/// Determinant modulo `p^N`, exact: row operations only add integer multiples
/// of one row to another.
pub fn determinant(ring: &PadicRing, m: &Matrix) -> PadicElement {
    let n = m.len();
    debug_assert!(m.iter().all(|r| r.len() == n));
    let mut a = m.clone();
    let mut det = ring.one();
    for k in 0..n {
        // Pivot in column k only, so the remaining rows keep their meaning.
        let mut best: Option<(usize, u32)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            if let Valuation::Finite(v) = row[k].valuation() {
                if best.is_none_or(|b| v < b.1) {
                    best = Some((i, v));
                }
            }
        }
        let Some((i, v)) = best else {
            return ring.zero();
        };
        if i != k {
            a.swap(i, k);
            det = det.neg();
        }
        let pivot = a[k][k].clone();
        let unit_inv = pivot.div_p_pow(v).invert().expect("unit part");
        for r in k + 1..n {
            if a[r][k].is_zero() {
                continue;
            }
            let q = quotient(&a[r][k], v, &unit_inv);
            for c in k..n {
                let t = q.mul(&a[k][c]);
                a[r][c] = a[r][c].sub(&t);
            }
        }
        det = det.mul(&pivot);
    }
    det
}

/// Valuations of the elementary divisors of `m` (rows are relations, columns
/// generators). Errors unless every column receives a pivot of finite
/// valuation, i.e. unless the cokernel is certified finite.
pub fn smith_valuations(m: &Matrix, cols: usize) -> Result<Vec<u32>> {
    let rows = m.len();
    debug_assert!(m.iter().all(|r| r.len() == cols));
    let mut a = m.clone();
    let mut divisors = Vec::with_capacity(cols);
    for k in 0..cols.min(rows) {
        let Some((i, j, v)) = least_valuation(&a, k) else {
            break;
        };
        a.swap(i, k);
        for row in a.iter_mut() {
            row.swap(j, k);
        }
        let unit_inv = a[k][k].div_p_pow(v).invert().expect("unit part");
        for r in k + 1..rows {
            if a[r][k].is_zero() {
                continue;
            }
            let q = quotient(&a[r][k], v, &unit_inv);
            for c in k..cols {
                let t = q.mul(&a[k][c]);
                a[r][c] = a[r][c].sub(&t);
            }
        }
        for c in k + 1..cols {
            if a[k][c].is_zero() {
                continue;
            }
            let q = quotient(&a[k][c], v, &unit_inv);
            for row in a.iter_mut().skip(k) {
                let t = q.mul(&row[k]);
                row[c] = row[c].sub(&t);
            }
        }
        divisors.push(v);
    }
    if divisors.len() < cols {
        return Err(Error::precision(format!(
            "{} of {} elementary divisors vanish modulo p^{}",
            cols - divisors.len(),
            cols,
            m.first()
                .map_or(0, |r| r.first().map_or(0, |x| x.ring().precision()))
        )));
    }
    Ok(divisors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(ring: &PadicRing, rows: &[&[i128]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| ring.from_int(x)).collect())
            .collect()
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let r = PadicRing::new(5, 6).unwrap();
        let m = mat(&r, &[&[5, 3, 1], &[25, 2, 7], &[10, 4, 50]]);
        // cofactor expansion by hand: 5(100-28) - 3(1250-70) + 1(100-20) = -3100
        assert_eq!(determinant(&r, &m), r.from_int(-3100));
        let singular = mat(&r, &[&[5, 10], &[1, 2]]);
        assert!(determinant(&r, &singular).is_zero());
    }

    #[test]
    fn smith_valuations_examples() {
        let r = PadicRing::new(5, 4).unwrap();
        let d = smith_valuations(&mat(&r, &[&[5, 0], &[0, 25]]), 2).unwrap();
        assert_eq!(d.iter().sum::<u32>(), 3);
        let d = smith_valuations(&mat(&r, &[&[1, 2], &[3, 4]]), 2).unwrap();
        assert_eq!(d.iter().sum::<u32>(), 0);
        assert!(matches!(
            smith_valuations(&mat(&r, &[&[5, 0], &[0, 0]]), 2),
            Err(Error::PrecisionExhausted(_))
        ));
        // more relations than generators
        let d = smith_valuations(&mat(&r, &[&[25, 5], &[5, 0], &[0, 125]]), 2).unwrap();
        assert_eq!(d.iter().sum::<u32>(), 2);
    }
}
