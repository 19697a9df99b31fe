//! Independent oracles. Nothing here calls into the elimination code of the
//! library.
#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng;

/// Invariant factors (> 1) and free rank of `Z^cols / rowspace(m)` by
/// textbook Smith elimination on a dense copy.
pub fn snf_oracle(m: &[Vec<i64>], cols: usize) -> (Vec<BigInt>, usize) {
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let rows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for r in a.iter_mut() {
            r.swap(t, bj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for j in t..cols {
                        let s = &q * &a[t][j];
                        a[i][j] -= s;
                    }
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for i in t..rows {
                        let s = &q * &a[i][t];
                        a[i][j] -= s;
                    }
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest remainder in row/column t to the pivot
                let mut best = (t, t);
                for i in t..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.1 == t {
                    a.swap(t, best.0);
                } else {
                    for r in a.iter_mut() {
                        r.swap(t, best.1);
                    }
                }
                continue;
            }
            // divisibility: fold a offending row into row t
            let p = a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let s = a[i][j].clone();
                        a[t][j] += s;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    let free = cols - diag.len();
    let factors = diag.into_iter().filter(|d| *d > BigInt::from(1)).collect();
    (factors, free)
}

pub fn random_matrix<R: Rng>(rng: &mut R, max_dim: usize, bound: i64) -> (Vec<Vec<i64>>, usize) {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    let m = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    (m, cols)
}

/// Squares of `F_p^x` by enumeration.
pub fn squares_mod(p: u64) -> Vec<u64> {
    let mut s: Vec<u64> = (1..p).map(|x| x * x % p).collect();
    s.sort_unstable();
    s.dedup();
    s
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Prime powers `2 <= q <= max`.
pub fn prime_powers(max: u64) -> Vec<u64> {
    (2..=max)
        .filter(|&q| {
            let p = (2..=q).find(|d| q % d == 0).unwrap();
            let mut r = q;
            while r % p == 0 {
                r /= p;
            }
            r == 1
        })
        .collect()
}

/// `|B(F_q)|` from the finite-field lemma.
pub fn bloch_order(q: u64) -> u64 {
    if q % 2 == 1 {
        q.div_ceil(2)
    } else {
        q + 1
    }
}

/// Order of `c_F` over a prime field: 1 when `p = 3` or `p = 1 mod 3`, else 3.
pub fn c_order_prime(p: u64) -> u64 {
    if p == 3 || p % 3 == 1 {
        1
    } else {
        3
    }
}

/// Smallest `k >= 1` with `k v` in the lattice, by trying multiples up to `limit`.
pub fn order_by_search(member: impl Fn(&[BigInt]) -> bool, v: &[BigInt], limit: u64) -> Option<u64> {
    (1..=limit).find(|&k| {
        let w: Vec<BigInt> = v.iter().map(|x| x * BigInt::from(k)).collect();
        member(&w)
    })
}
