#![allow(dead_code)]

use modlin_core::{BigInt, IntMatrix};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn bigs(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| big(x)).collect()
}

pub fn to_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_i64(rows)
}

/// Every `x` in `Z_n^l` with `A x ≡ b (mod n)`, in lexicographic order.
pub fn brute_solutions(a: &[Vec<i64>], b: &[i64], n: i64) -> Vec<Vec<i64>> {
    let l = a[0].len();
    let mut out = Vec::new();
    let mut x = vec![0i64; l];
    loop {
        let ok = a.iter().zip(b).all(|(row, bi)| {
            let s: i64 = row.iter().zip(&x).map(|(r, xi)| r * xi).sum();
            (s - bi).rem_euclid(n) == 0
        });
        if ok {
            out.push(x.clone());
        }
        let mut i = l;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            x[i] += 1;
            if x[i] < n {
                break;
            }
            x[i] = 0;
        }
    }
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Determinant by cofactor expansion.
pub fn det_i128(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| *v).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det_i128(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut with: Vec<Vec<usize>> = subsets(n - 1, k - 1);
    for s in &mut with {
        s.push(n - 1);
    }
    with.extend(subsets(n - 1, k));
    with
}

/// gcd of all `j x j` minors of `a`.
pub fn minors_gcd(a: &[Vec<i64>], j: usize) -> i128 {
    let (k, l) = (a.len(), a[0].len());
    let mut g: i128 = 0;
    for rows in subsets(k, j) {
        for cols in subsets(l, j) {
            let m: Vec<Vec<i128>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| a[r][c] as i128).collect())
                .collect();
            g = g.gcd(&det_i128(&m));
        }
    }
    g
}

/// Independent extended Euclid: `(g, x, y)` with `a x + b y = g >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::from(1), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::from(1));
    while !r1.is_zero() {
        let q = r0.div_floor(&r1);
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn factor_small(n: i64) -> Vec<(i64, u64)> {
    let mut out = Vec::new();
    let mut rest = n;
    let mut p = 2;
    while rest > 1 {
        let mut r = 0;
        while rest % p == 0 {
            rest /= p;
            r += 1;
        }
        if r > 0 {
            out.push((p, r));
        }
        p += 1;
    }
    out
}

pub fn factorization(n: i64) -> modlin_core::PrimePowerFactorization {
    let f = factor_small(n).into_iter().map(|(p, r)| (big(p), r)).collect();
    modlin_core::PrimePowerFactorization::new(f, &big(n)).unwrap()
}

pub fn is_prime_small(n: i64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// `k x l` matrices, `1 <= k, l <= max`, entries in `lo..=hi`.
pub fn matrix_strategy(max: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max).prop_flat_map(move |(k, l)| prop::collection::vec(prop::collection::vec(lo..=hi, l), k))
}
