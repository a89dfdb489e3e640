//! Bezout identities against a prime-power modulus, solved digit by digit.
//!
//! For `a` coprime to `p`, the inverse of `a` modulo `p^d` is built one base-`p`
//! digit at a time: the lowest digit needs the single inversion of `a_0`
//! modulo `p`, and every later digit is a multiply-accumulate modulo `p` plus a
//! carry (the quotient by `p`). The upper half of the same convolution yields
//! the digits of the cofactor `y`. No division by anything other than the digit
//! base is performed, which is the contrast with the Euclidean algorithm that
//! [`euclid_bezout`] provides (with its own division counter).
//!
//! The same lifting runs unchanged in base `q = p^d` for the byte-wise variant
//! ([`bezout_byte`]).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::pow;
use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BezoutError {
    #[error("{a} is not coprime to {p}")]
    NotCoprime { a: BigInt, p: BigInt },
    #[error("zero has no Bezout certificate against a power of {0}")]
    Zero(BigInt),
    #[error("{a} vanishes modulo {modulus}")]
    Degenerate { a: BigInt, modulus: BigInt },
    #[error("digit length must be positive")]
    EmptyPrecision,
}

/// Operation tallies for one certificate computation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    /// Inversions modulo the digit base.
    pub inversions: u64,
    /// Digit products reduced modulo the digit base.
    pub digit_mults: u64,
    /// Quotient-by-base carries, including digit extraction.
    pub carries: u64,
    /// Divisions whose divisor is neither the digit base nor a power of it.
    pub general_divisions: u64,
}

impl std::ops::AddAssign for OpCounts {
    fn add_assign(&mut self, o: OpCounts) {
        self.inversions += o.inversions;
        self.digit_mults += o.digit_mults;
        self.carries += o.carries;
        self.general_divisions += o.general_divisions;
    }
}

/// `a * x + modulus * y = g`, exact over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BezoutCertificate {
    pub a: BigInt,
    pub modulus: BigInt,
    pub x: BigInt,
    /// Final cofactor; `a * x + modulus * y = g` with no reduction.
    pub y: BigInt,
    pub g: BigInt,
    /// Cofactor as produced by the digit iteration, in `[0, modulus / g)`.
    pub y_residue: BigInt,
    /// Integer `t` with `y = y_residue - t`.
    pub correction: BigInt,
    pub ops: OpCounts,
}

impl BezoutCertificate {
    pub fn holds(&self) -> bool {
        &self.a * &self.x + &self.modulus * &self.y == self.g
    }
}

/// Arithmetic needed by the digit lifting; implemented for `u128` (digit
/// bases below 2^32) and for `BigInt`.
trait Word: Integer + Clone {
    fn from_big(v: &BigInt) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Word for u128 {
    fn from_big(v: &BigInt) -> Self {
        v.to_u128().expect("digit fits in a machine word")
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Word for BigInt {
    fn from_big(v: &BigInt) -> Self {
        v.clone()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Inverse of a unit digit modulo `base`; coefficients are kept reduced so
/// the same code works for unsigned words.
fn invert_digit<T: Word>(a: &T, base: &T) -> Option<T> {
    let (mut r0, mut r1) = (base.clone(), a.mod_floor(base));
    let (mut s0, mut s1) = (T::zero(), T::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let qs = (q * s1.clone()).mod_floor(base);
        let next = (s0 + base.clone() - qs).mod_floor(base);
        s0 = std::mem::replace(&mut s1, next);
    }
    r0.is_one().then_some(s0)
}

struct Lifted {
    x: BigInt,
    y: BigInt,
    /// Carry out of the top digit: `a * x + base^d * y = 1 + base^(2d) * carry`.
    carry: BigInt,
    ops: OpCounts,
}

/// Digit recurrence for `a * x + base^d * y ≡ 1`, with `a_0` a unit.
///
/// Low half, for `k = 0..d`: `t_k = [t_{k-1}] + Σ_{i≤k} a_i x_{k-i}` must be
/// `1` (k = 0) or `0` modulo `base`; only `x_k` is unknown and it is solved with
/// the precomputed inverse of `a_0`. High half, for `j = 0..d`: the remaining
/// convolution terms plus the carry fix `y_j` so that every digit above `d`
/// vanishes as well.
fn lift<T: Word>(a: &[T], base: &T, mut ops: OpCounts) -> Option<Lifted> {
    let d = a.len();
    let inv = invert_digit(&a[0], base)?;
    ops.inversions += 1;

    let mut x: Vec<T> = Vec::with_capacity(d);
    let mut carry = T::zero();
    for k in 0..d {
        let mut s = carry;
        for i in 1..=k {
            s = s + a[i].clone() * x[k - i].clone();
        }
        ops.digit_mults += k as u64;
        let target = if k == 0 { T::one() } else { T::zero() };
        let rhs = (target + base.clone() - s.mod_floor(base)).mod_floor(base);
        let xk = (rhs * inv.clone()).mod_floor(base);
        s = s + a[0].clone() * xk.clone();
        ops.digit_mults += 2;
        let (q, r) = s.div_rem(base);
        debug_assert!(r == if k == 0 { T::one() } else { T::zero() });
        ops.carries += 1;
        carry = q;
        x.push(xk);
    }

    let mut y: Vec<T> = Vec::with_capacity(d);
    for j in 0..d {
        let mut s = carry;
        for i in j + 1..d {
            s = s + a[i].clone() * x[d + j - i].clone();
        }
        ops.digit_mults += (d - j - 1) as u64;
        let yj = (base.clone() - s.mod_floor(base)).mod_floor(base);
        s = s + yj.clone();
        let (q, _) = s.div_rem(base);
        ops.carries += 1;
        carry = q;
        y.push(yj);
    }

    let base_big = base.to_big();
    let horner = |digits: &[T]| {
        digits
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, v| acc * &base_big + v.to_big())
    };
    Some(Lifted {
        x: horner(&x),
        y: horner(&y),
        carry: carry.to_big(),
        ops,
    })
}

/// Splits `a` into `d` base-`base` digits (floor semantics) and the integer
/// quotient left above them.
fn split_digits(a: &BigInt, base: &BigInt, d: usize, ops: &mut OpCounts) -> (Vec<BigInt>, BigInt) {
    let mut rest = a.clone();
    let mut digits = Vec::with_capacity(d);
    for _ in 0..d {
        let (q, r) = rest.div_mod_floor(base);
        digits.push(r);
        rest = q;
        ops.carries += 1;
    }
    (digits, rest)
}

/// Runs the digit lifting for `a` against `base^d` and assembles an exact
/// certificate for the original (unreduced) `a`.
fn lift_certificate(a: &BigInt, base: &BigInt, d: usize) -> Option<BezoutCertificate> {
    let mut ops = OpCounts::default();
    let (digits, high) = split_digits(a, base, d, &mut ops);
    let lifted = if base.bits() <= 32 {
        let words: Vec<u128> = digits.iter().map(u128::from_big).collect();
        lift(&words, &u128::from_big(base), ops)?
    } else {
        lift(&digits, base, ops)?
    };
    let modulus = pow(base, d as u64);
    // a = a_low + modulus * high; the lifting certified a_low.
    let correction = &modulus * &lifted.carry + &high * &lifted.x;
    let y = &lifted.y - &correction;
    Some(BezoutCertificate {
        a: a.clone(),
        modulus,
        x: lifted.x,
        y,
        g: BigInt::one(),
        y_residue: lifted.y,
        correction,
        ops: lifted.ops,
    })
}

/// Solves `a x + p^d y = 1` for `a` coprime to `p` by digit lifting.
///
/// Exactly one inversion modulo `p` is performed; `x` lands in `[0, p^d)`.
pub fn bezout_single_padic(a: &BigInt, p: &BigInt, d: u64) -> Result<BezoutCertificate, BezoutError> {
    if d == 0 {
        return Err(BezoutError::EmptyPrecision);
    }
    lift_certificate(a, p, d as usize).ok_or_else(|| BezoutError::NotCoprime {
        a: a.clone(),
        p: p.clone(),
    })
}

/// `(min(v_p(a), cap), a / p^that)`, with zero mapped to `(cap, 0)`.
fn strip(a: &BigInt, p: &BigInt, cap: u64, ops: &mut OpCounts) -> (u64, BigInt) {
    if a.is_zero() {
        return (cap, BigInt::zero());
    }
    let mut v = 0;
    let mut rest = a.clone();
    while v < cap {
        let (q, r) = rest.div_rem(p);
        ops.carries += 1;
        if !r.is_zero() {
            break;
        }
        rest = q;
        v += 1;
    }
    (v, rest)
}

/// Certificate for `gcd(a, p^r) = p^g`, found by stripping the power of `p`
/// from `a` and lifting the unit part. Accepts `r = 0`.
fn prime_power_certificate(a: &BigInt, p: &BigInt, r: u64) -> (BezoutCertificate, BigInt, u64) {
    let mut ops = OpCounts::default();
    let (v, unit) = strip(a, p, r, &mut ops);
    let modulus = pow(p, r);
    let g = pow(p, v);
    let d = r - v;
    let cert = if d == 0 {
        // p^r | a: a * 0 + p^r * 1 = p^r.
        BezoutCertificate {
            a: a.clone(),
            modulus,
            x: BigInt::zero(),
            y: BigInt::one(),
            g,
            y_residue: BigInt::one(),
            correction: BigInt::zero(),
            ops,
        }
    } else {
        let mut inner = lift_certificate(&unit, p, d as usize).expect("unit part is coprime to p");
        inner.ops += ops;
        BezoutCertificate {
            a: a.clone(),
            modulus,
            x: inner.x,
            y: inner.y,
            g,
            y_residue: inner.y_residue,
            correction: inner.correction,
            ops: inner.ops,
        }
    };
    debug_assert!(cert.holds());
    (cert, unit, d)
}

/// `a x + p^r y = p^min(v_p(a), r)` for arbitrary `a`.
pub fn bezout_single(a: &BigInt, p: &BigInt, r: u64) -> BezoutCertificate {
    prime_power_certificate(a, p, r).0
}

/// 2x2 unimodular `Q` with `[a, p^r] Q = [g, 0]`, `g = gcd(a, p^r)`.
///
/// With `a = p^v u` and `u x + p^(r-v) y = 1`, `Q = [[x, -p^(r-v)], [y, u]]`.
pub fn unimodular_pair(a: &BigInt, p: &BigInt, r: u64) -> IntMatrix {
    unimodular_pair_with_ops(a, p, r).0
}

fn unimodular_pair_with_ops(a: &BigInt, p: &BigInt, r: u64) -> (IntMatrix, BigInt, u64, OpCounts) {
    let (cert, unit, d) = prime_power_certificate(a, p, r);
    let mut q = IntMatrix::zeros(2, 2);
    q[(0, 0)] = cert.x.clone();
    q[(0, 1)] = -pow(p, d);
    q[(1, 0)] = cert.y.clone();
    q[(1, 1)] = unit;
    (q, cert.g, r - d, cert.ops)
}

/// Column reducer for `[a_1, ..., a_N, p^r]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodularColumnReducer {
    /// `(N+1) x (N+1)`, `|det| = 1`, `[a, p^r] Q = [g, 0, ..., 0]`.
    pub q: IntMatrix,
    pub g: BigInt,
    /// `g = p^exponent`.
    pub exponent: u64,
    pub ops: OpCounts,
}

impl UnimodularColumnReducer {
    /// `(x_1..x_N, y)` from the first column.
    pub fn coefficients(&self) -> Vec<BigInt> {
        self.q.col(0)
    }
}

/// Multi-element reduction, folding pairs from the right: the running gcd
/// `p^t` (initially `p^r`) is combined with `a_i` by a 2x2 reducer, so every
/// intermediate gcd stays a pure power of `p`. Exact zeros are skipped.
pub fn bezout_multi(a: &[BigInt], p: &BigInt, r: u64) -> UnimodularColumnReducer {
    let n = a.len();
    let mut q = IntMatrix::identity(n + 1);
    let mut ops = OpCounts::default();
    let mut exp = r;
    let mut pos = n;
    for i in (0..n).rev() {
        if a[i].is_zero() {
            continue;
        }
        let (pair, _, g_exp, pair_ops) = unimodular_pair_with_ops(&a[i], p, exp);
        ops += pair_ops;
        q.transform_cols(&[i, pos], &pair);
        exp = g_exp;
        pos = i;
    }
    if pos != 0 {
        q.swap_cols(0, pos);
    }
    UnimodularColumnReducer {
        q,
        g: pow(p, exp),
        exponent: exp,
        ops,
    }
}

/// Result of the byte-wise variant: a certificate for `a' x' + q^s y' = 1`
/// where `a = p^stripped * a'` and `q = p^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ByteBezout {
    pub cert: BezoutCertificate,
    pub q: BigInt,
    pub s: u64,
    pub stripped: u64,
}

/// Byte-wise Bezout: strips `p^g` from `a` (`g = m d + t`, `t < d`) and lifts
/// the unit part in base `q = p^d` over `s` digits, where `s = r - m` when
/// `t = 0` and `s = r - m - 1` otherwise. All inner arithmetic is modulo `q`
/// with quotient-by-`q` carries.
pub fn bezout_byte(a: &BigInt, p: &BigInt, d: u64, r: u64) -> Result<ByteBezout, BezoutError> {
    if d == 0 || r == 0 {
        return Err(BezoutError::EmptyPrecision);
    }
    if a.is_zero() {
        return Err(BezoutError::Zero(p.clone()));
    }
    let mut ops = OpCounts::default();
    let (g, unit) = strip(a, p, d * r, &mut ops);
    let q = pow(p, d);
    if g >= d * r {
        return Err(BezoutError::Degenerate {
            a: a.clone(),
            modulus: pow(&q, r),
        });
    }
    if (&unit % p).is_zero() {
        return Err(BezoutError::NotCoprime { a: unit, p: p.clone() });
    }
    let (m, t) = (g / d, g % d);
    let s = r - m - u64::from(t > 0);
    let mut cert = if s == 0 {
        BezoutCertificate {
            a: unit.clone(),
            modulus: BigInt::one(),
            x: BigInt::zero(),
            y: BigInt::one(),
            g: BigInt::one(),
            y_residue: BigInt::one(),
            correction: BigInt::zero(),
            ops: OpCounts::default(),
        }
    } else {
        lift_certificate(&unit, &q, s as usize).ok_or_else(|| BezoutError::NotCoprime {
            a: unit.clone(),
            p: p.clone(),
        })?
    };
    cert.ops += ops;
    Ok(ByteBezout {
        cert,
        q,
        s,
        stripped: g,
    })
}

/// Extended Euclid with a division counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EuclidCertificate {
    pub x: BigInt,
    pub y: BigInt,
    /// Non-negative gcd.
    pub g: BigInt,
    /// One per remainder step.
    pub divisions: u64,
}

/// `a x + b y = gcd(a, b)` by the classical remainder sequence.
pub fn euclid_bezout(a: &BigInt, b: &BigInt) -> EuclidCertificate {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    let mut divisions = 0;
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        divisions += 1;
        r0 = std::mem::replace(&mut r1, r);
        let s = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s);
        let t = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t);
    }
    if r0.is_negative() {
        r0 = -r0;
        s0 = -s0;
        t0 = -t0;
    }
    EuclidCertificate {
        x: s0,
        y: t0,
        g: r0,
        divisions,
    }
}

/// Inverse of `a` modulo `m` in `[0, m)`, if it exists.
pub fn inverse_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = euclid_bezout(&a.mod_floor(m), m);
    e.g.is_one().then(|| e.x.mod_floor(m))
}

/// Inverse of a unit modulo `p^r` through the digit lifting.
pub fn inverse_mod_prime_power(a: &BigInt, p: &BigInt, r: u64) -> Option<BigInt> {
    if r == 0 {
        return Some(BigInt::zero());
    }
    bezout_single_padic(a, p, r).ok().map(|c| c.x)
}
