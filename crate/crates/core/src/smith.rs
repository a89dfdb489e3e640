//! Smith normal form with unimodular certificates.
//!
//! [`smith_form`] works for any integer matrix. [`smith_form_prime_power`]
//! handles the augmented matrix `[A, -p^r I]` without any general gcd: pivots
//! are chosen by `p`-valuation, rows are cleared with [`bezout_multi`], and
//! columns with exact division by the pivot (a power of `p`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{pow, valuation_capped};
use crate::bezout::{bezout_multi, OpCounts};
use crate::matrix::IntMatrix;

/// `P * A * Q = S` with `P`, `Q` unimodular and `S` in Smith form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub p: IntMatrix,
    pub q: IntMatrix,
    pub s: IntMatrix,
    pub rank: usize,
    /// `f_1 | f_2 | ... | f_rank`, all positive.
    pub invariant_factors: Vec<BigInt>,
}

impl SmithDecomposition {
    /// Re-checks every certificate property against `a` by exact arithmetic.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let Ok(pa) = self.p.mul(a) else { return false };
        let Ok(paq) = pa.mul(&self.q) else { return false };
        if paq != self.s || !self.s.is_diagonal() {
            return false;
        }
        if !self.p.is_unimodular() || !self.q.is_unimodular() {
            return false;
        }
        let diag_len = self.s.rows().min(self.s.cols());
        let diag_ok = (0..diag_len).all(|i| {
            let v = &self.s[(i, i)];
            if i < self.rank {
                *v == self.invariant_factors[i]
            } else {
                v.is_zero()
            }
        });
        diag_ok
            && self.invariant_factors.len() == self.rank
            && self.invariant_factors.iter().all(Signed::is_positive)
            && self
                .invariant_factors
                .windows(2)
                .all(|w| (&w[1] % &w[0]).is_zero())
    }

    /// `d_j = f_1 ... f_j` for `j = 1..=rank`; `d_j` is the gcd of all
    /// `j x j` minors.
    pub fn determinantal_divisors(&self) -> Vec<BigInt> {
        let mut acc = BigInt::one();
        self.invariant_factors
            .iter()
            .map(|f| {
                acc *= f;
                acc.clone()
            })
            .collect()
    }
}

/// `[A, -n I]`.
pub fn augmented(a: &IntMatrix, n: &BigInt) -> IntMatrix {
    a.hconcat(&IntMatrix::scalar(a.rows(), &-n))
        .expect("scalar block has A's row count")
}

/// Minimal-|entry| nonzero in the trailing submatrix, ties by lowest (row, col).
fn min_abs_pivot(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let v = &s[(i, j)];
            if v.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if s[(bi, bj)].abs() <= v.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Smith normal form of an arbitrary integer matrix.
pub fn smith_form(a: &IntMatrix) -> SmithDecomposition {
    let (k, m) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut p = IntMatrix::identity(k);
    let mut q = IntMatrix::identity(m);
    let mut t = 0;
    while t < k.min(m) {
        let Some((pi, pj)) = min_abs_pivot(&s, t) else { break };
        s.swap_rows(t, pi);
        p.swap_rows(t, pi);
        s.swap_cols(t, pj);
        q.swap_cols(t, pj);
        loop {
            let pivot = s[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..k {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let c = -s[(i, t)].div_floor(&pivot);
                s.add_row_multiple(i, t, &c);
                p.add_row_multiple(i, t, &c);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..m {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let c = -s[(t, j)].div_floor(&pivot);
                s.add_col_multiple(j, t, &c);
                q.add_col_multiple(j, t, &c);
                clean &= s[(t, j)].is_zero();
            }
            if clean {
                // Pivot must divide the rest; otherwise fold the offending
                // row into row t and reduce again.
                let offending = (t + 1..k)
                    .find(|&i| (t + 1..m).any(|j| !(&s[(i, j)] % &pivot).is_zero()));
                match offending {
                    None => break,
                    Some(i) => {
                        s.add_row_multiple(t, i, &BigInt::one());
                        p.add_row_multiple(t, i, &BigInt::one());
                    }
                }
            }
            let (pi, pj) = min_abs_pivot(&s, t).expect("pivot row is nonzero");
            s.swap_rows(t, pi);
            p.swap_rows(t, pi);
            s.swap_cols(t, pj);
            q.swap_cols(t, pj);
        }
        if s[(t, t)].is_negative() {
            s.negate_col(t);
            q.negate_col(t);
        }
        t += 1;
    }
    let invariant_factors = (0..t).map(|i| s[(i, i)].clone()).collect();
    SmithDecomposition {
        p,
        q,
        s,
        rank: t,
        invariant_factors,
    }
}

/// Smith form of `[A, -n I]`; the rank is always `k` for `n != 0`.
pub fn smith_form_augmented(a: &IntMatrix, n: &BigInt) -> SmithDecomposition {
    let d = smith_form(&augmented(a, n));
    debug_assert_eq!(d.rank, a.rows());
    d
}

/// Smith form of `[A, -p^r I]` together with the operation tallies of the
/// Bezout reductions it performed.
#[derive(Debug, Clone)]
pub struct PrimePowerSmith {
    pub decomposition: SmithDecomposition,
    /// `f_i = p^exponents[i]`, nondecreasing.
    pub exponents: Vec<u64>,
    pub ops: OpCounts,
}

/// Smith form of `[A, -p^r I]` using valuations and prime-power Bezout
/// reductions only.
///
/// Invariant kept between steps: for each unfinished row `i` there is a
/// column `blk[i]` equal to `-p^r e_i`. Those columns let entries of the
/// unfinished rows be reduced into `[0, p^r)`, and they supply the `p^r`
/// element for the row reduction `[row_t, p^r] Q = [p^g, 0, ..., 0]`.
pub fn smith_form_prime_power(a: &IntMatrix, p: &BigInt, r: u64) -> PrimePowerSmith {
    assert!(r >= 1, "exponent must be positive");
    let (k, l) = (a.rows(), a.cols());
    let width = l + k;
    let pr = pow(p, r);
    let mut m = augmented(a, &pr);
    let mut left = IntMatrix::identity(k);
    let mut right = IntMatrix::identity(width);
    let mut blk: Vec<usize> = (l..width).collect();
    let mut used = vec![false; width];
    let mut pivots: Vec<usize> = Vec::with_capacity(k);
    let mut exponents: Vec<u64> = Vec::with_capacity(k);
    let mut ops = OpCounts::default();

    for t in 0..k {
        let free: Vec<usize> = (0..width)
            .filter(|&j| !used[j] && !blk[t..].contains(&j))
            .collect();

        for i in t..k {
            for &j in &free {
                let c = m[(i, j)].div_floor(&pr);
                if !c.is_zero() {
                    m.add_col_multiple(j, blk[i], &c);
                    right.add_col_multiple(j, blk[i], &c);
                }
            }
        }

        let mut best: Option<(usize, u64)> = None;
        for i in t..k {
            for &j in &free {
                let v = valuation_capped(&m[(i, j)], p, r);
                if v < r && best.is_none_or(|(_, bv)| v < bv) {
                    best = Some((i, v));
                }
            }
        }
        if let Some((i, _)) = best {
            m.swap_rows(t, i);
            left.swap_rows(t, i);
            blk.swap(t, i);
        }

        let own = blk[t];
        m.negate_col(own);
        right.negate_col(own);
        let (pivot, g) = if free.is_empty() {
            (own, pr.clone())
        } else {
            let entries: Vec<BigInt> = free.iter().map(|&j| m[(t, j)].clone()).collect();
            let red = bezout_multi(&entries, p, r);
            ops += red.ops;
            let mut cols = free.clone();
            cols.push(own);
            m.transform_cols(&cols, &red.q);
            right.transform_cols(&cols, &red.q);
            (cols[0], red.g)
        };
        exponents.push(valuation_capped(&g, p, r));

        for i in t + 1..k {
            if m[(i, pivot)].is_zero() {
                continue;
            }
            let (c, rem) = m[(i, pivot)].div_rem(&g);
            debug_assert!(rem.is_zero(), "pivot has minimal valuation");
            let c = -c;
            m.add_row_multiple(i, t, &c);
            left.add_row_multiple(i, t, &c);
        }
        used[pivot] = true;
        pivots.push(pivot);
    }

    let mut perm = pivots.clone();
    perm.extend((0..width).filter(|j| !used[*j]));
    m.permute_cols(&perm);
    right.permute_cols(&perm);

    repair_divisibility(&mut m, &mut left, &mut right, &mut exponents);

    let invariant_factors = (0..k).map(|i| m[(i, i)].clone()).collect();
    PrimePowerSmith {
        decomposition: SmithDecomposition {
            p: left,
            q: right,
            s: m,
            rank: k,
            invariant_factors,
        },
        exponents,
        ops,
    }
}

/// Orders a diagonal of prime powers by exponent (simultaneous row and
/// column swaps), which is exactly the divisibility chain for such entries.
fn repair_divisibility(s: &mut IntMatrix, left: &mut IntMatrix, right: &mut IntMatrix, exps: &mut [u64]) {
    let n = exps.len();
    while let Some(i) = (0..n.saturating_sub(1)).find(|&i| exps[i] > exps[i + 1]) {
        s.swap_rows(i, i + 1);
        left.swap_rows(i, i + 1);
        s.swap_cols(i, i + 1);
        right.swap_cols(i, i + 1);
        exps.swap(i, i + 1);
    }
}
