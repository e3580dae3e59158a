//! Big-integer combinatorics: binomials, factorials, Stirling numbers of the
//! second kind, and the q-analogues used by the orthogonal group formulas.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// `C(n, k)` for a possibly huge `n` and a small `k`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// The row `C(n, 0), …, C(n, min(n, cap))`.
pub fn binomial_row(n: u64, cap: usize) -> Vec<BigUint> {
    let top = (n.min(cap as u64)) as usize;
    let mut row = Vec::with_capacity(top + 1);
    let mut acc = BigUint::one();
    row.push(acc.clone());
    for i in 0..top as u64 {
        acc *= n - i;
        acc /= i + 1;
        row.push(acc.clone());
    }
    row
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Triangle of Stirling numbers of the second kind `S(h, t)` for
/// `0 <= t <= h <= h_max`, built from `S(h,t) = t·S(h−1,t) + S(h−1,t−1)`.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    rows: Vec<Vec<BigUint>>,
}

impl StirlingTable {
    pub fn new(h_max: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(h_max + 1);
        rows.push(vec![BigUint::one()]);
        for h in 1..=h_max {
            let prev = &rows[h - 1];
            let mut row = vec![BigUint::zero(); h + 1];
            for t in 1..=h {
                let mut v = if t < h { &prev[t] * t } else { BigUint::zero() };
                v += &prev[t - 1];
                row[t] = v;
            }
            rows.push(row);
        }
        StirlingTable { rows }
    }

    pub fn h_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, h: usize, t: usize) -> BigUint {
        match self.rows.get(h) {
            Some(row) => row.get(t).cloned().unwrap_or_default(),
            None => stirling2(h as u64, t as u64),
        }
    }
}

/// A single `S(h, t)`.
pub fn stirling2(h: u64, t: u64) -> BigUint {
    if t > h {
        return BigUint::zero();
    }
    let table = StirlingTable::new(h as usize);
    table.get(h as usize, t as usize)
}

/// `base^exp` over the integers.
pub fn pow_big(base: u64, exp: u64) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

pub fn pow_signed(base: &BigInt, exp: u64) -> BigInt {
    num_traits::pow(base.clone(), exp as usize)
}

/// Gaussian binomial `[n r]_q = Π_{j<r} (q^{n−j} − 1)/(q^{r−j} − 1)`.
pub fn q_binomial(n: u64, r: u64, q: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for j in 0..r {
        num *= pow_big(q, n - j) - 1u32;
        den *= pow_big(q, r - j) - 1u32;
    }
    num / den
}

/// `|GL(n, q)| = q^{C(n,2)} Π_{j=1}^{n} (q^j − 1)`.
pub fn gl_order(n: u64, q: u64) -> BigUint {
    let mut acc = pow_big(q, n * n.saturating_sub(1) / 2);
    for j in 1..=n {
        acc *= pow_big(q, j) - 1u32;
    }
    acc
}

/// Number of nonsingular symmetric `r × r` matrices over GF(q), q even.
pub fn nonsingular_symmetric_count(r: u64, q: u64) -> BigUint {
    if r == 0 {
        return BigUint::one();
    }
    let (lead, top) = if r.is_multiple_of(2) {
        (r * (r + 2) / 4, r / 2)
    } else {
        ((r * r - 1) / 4, r.div_ceil(2))
    };
    let mut acc = pow_big(q, lead);
    for j in 1..=top {
        acc *= pow_big(q, 2 * j - 1) - 1u32;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stirling_alternating(h: u64, t: u64) -> BigUint {
        // t!·S(h,t) = Σ_j (−1)^{t−j} C(t,j) j^h
        let mut acc = BigInt::zero();
        for j in 0..=t {
            let term = BigInt::from(binomial(t, j)) * BigInt::from(pow_big(j, h));
            if (t - j).is_multiple_of(2) {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let f = BigInt::from(factorial(t));
        assert!((&acc % &f).is_zero());
        (acc / f).to_biguint().unwrap()
    }

    #[test]
    fn stirling_matches_alternating_sum() {
        let table = StirlingTable::new(20);
        for h in 0..=20u64 {
            for t in 0..=h {
                assert_eq!(table.get(h as usize, t as usize), stirling_alternating(h, t));
            }
        }
        assert_eq!(stirling2(4, 2), BigUint::from(7u32));
        assert_eq!(stirling2(5, 0), BigUint::zero());
        assert_eq!(stirling2(7, 7), BigUint::one());
        assert_eq!(stirling2(3, 5), BigUint::zero());
    }

    #[test]
    fn binomial_row_agrees() {
        let row = binomial_row(40, 10);
        for (k, v) in row.iter().enumerate() {
            assert_eq!(*v, binomial(40, k as u64));
        }
        assert_eq!(binomial_row(3, 10).len(), 4);
        assert_eq!(binomial(5, 7), BigUint::zero());
    }

    #[test]
    fn q_binomial_ratio_identity() {
        // g_n / (g_{n−r} g_r) = q^{r(n−r)} [n r]_q
        for q in [2u64, 4, 8] {
            for n in 0..=5u64 {
                for r in 0..=n {
                    let lhs = gl_order(n, q);
                    let rhs = gl_order(n - r, q)
                        * gl_order(r, q)
                        * pow_big(q, r * (n - r))
                        * q_binomial(n, r, q);
                    assert_eq!(lhs, rhs, "q={q} n={n} r={r}");
                }
            }
        }
        assert_eq!(q_binomial(4, 2, 2), BigUint::from(35u32));
    }

    #[test]
    fn gl_order_small() {
        assert_eq!(gl_order(2, 4), BigUint::from(180u32));
        assert_eq!(gl_order(3, 2), BigUint::from(168u32));
        assert_eq!(gl_order(0, 7), BigUint::one());
    }
}
