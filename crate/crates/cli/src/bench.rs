//! Operation-count comparison of p-adic and Euclidean Bezout, plus a check
//! that the CRT driver's output does not depend on the worker count.

use std::fmt::Write as _;

use modlin_core::arith::pow;
use modlin_core::bezout::{bezout_single_padic, euclid_bezout};
use modlin_core::crt::{factorize_fallback, solve_mod_n_constrained, default_factor_bound};
use modlin_core::{BigInt, IntMatrix};
use num_bigint::RandBigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const DEFAULT_SIZES: [u64; 6] = [64, 128, 256, 512, 1024, 2048];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub bits: u64,
    pub r: u64,
    /// Mean single-digit multiply-adds, carries and inversions per call.
    pub padic_ops: u64,
    /// Mean long-integer operations per call: each remainder step is one
    /// division and two multiply-subtracts.
    pub euclid_ops: u64,
    pub inversions_mod_p: u64,
    pub padic_divisions: u64,
    pub euclid_divisions: u64,
}

/// Smallest `r` with `p^r >= 2^bits`.
fn exponent_for(p: &BigInt, bits: u64) -> u64 {
    let target = BigInt::one() << bits;
    let mut r = 1;
    while pow(p, r) < target {
        r += 1;
    }
    r
}

pub fn measure(p: &BigInt, sizes: &[u64], samples: u64, seed: u64) -> Vec<BenchRow> {
    let mut rng = StdRng::seed_from_u64(seed);
    sizes
        .iter()
        .map(|&bits| {
            let r = exponent_for(p, bits);
            let pr = pow(p, r);
            let mut row = BenchRow {
                bits,
                r,
                padic_ops: 0,
                euclid_ops: 0,
                inversions_mod_p: 0,
                padic_divisions: 0,
                euclid_divisions: 0,
            };
            for _ in 0..samples {
                let a = loop {
                    let a = rng.gen_bigint_range(&BigInt::one(), &pr);
                    if !(&a % p).is_zero() {
                        break a;
                    }
                };
                let c = bezout_single_padic(&a, p, r).expect("a is a unit");
                let e = euclid_bezout(&a, &pr);
                debug_assert_eq!(c.x, e.x.mod_floor(&pr));
                row.padic_ops += c.ops.digit_mults + c.ops.carries + c.ops.inversions;
                row.inversions_mod_p += c.ops.inversions;
                row.padic_divisions += c.ops.general_divisions;
                row.euclid_ops += 3 * e.divisions;
                row.euclid_divisions += e.divisions;
            }
            row.padic_ops /= samples;
            row.euclid_ops /= samples;
            row.inversions_mod_p /= samples;
            row.padic_divisions /= samples;
            row.euclid_divisions /= samples;
            row
        })
        .collect()
}

pub fn table(p: &BigInt, rows: &[BenchRow]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:>6} {:>4} {:>6} {:>10} {:>10} {:>16} {:>15} {:>16}",
        "bits", "p", "r", "padic_ops", "euclid_ops", "inversions_mod_p", "padic_divisions", "euclid_divisions"
    )
    .unwrap();
    for row in rows {
        writeln!(
            out,
            "{:>6} {:>4} {:>6} {:>10} {:>10} {:>16} {:>15} {:>16}",
            row.bits, p, row.r, row.padic_ops, row.euclid_ops, row.inversions_mod_p, row.padic_divisions, row.euclid_divisions
        )
        .unwrap();
    }
    out
}

/// Solves one seeded constrained instance with 1 and with `jobs` workers and
/// compares the full results.
pub fn jobs_identical(seed: u64, jobs: usize) -> bool {
    let mut rng = StdRng::seed_from_u64(seed ^ 0x5eed);
    let n = BigInt::from(2u64.pow(5) * 3u64.pow(3) * 5 * 7 * 11 * 13 * 17 * 19 * 23);
    let factors = factorize_fallback(&n, &default_factor_bound()).expect("small modulus");
    let (k, l) = (3, 4);
    let rows: Vec<Vec<BigInt>> = (0..k)
        .map(|_| (0..l).map(|_| rng.gen_bigint_range(&BigInt::zero(), &n)).collect())
        .collect();
    let a = IntMatrix::from_rows(rows, l).expect("rectangular");
    let x: Vec<BigInt> = (0..l).map(|_| rng.gen_bigint_range(&BigInt::zero(), &n)).collect();
    let b = a.mul_vec(&x).expect("dimensions match");
    let w: Vec<BigInt> = (0..l).map(|_| BigInt::from(rng.gen_range(0..100))).collect();
    let one = solve_mod_n_constrained(&a, &b, &w, &n, &factors, 1);
    let many = solve_mod_n_constrained(&a, &b, &w, &n, &factors, jobs);
    one == many
}
