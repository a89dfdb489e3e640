//! Scalar arithmetic: valuations, base-`p` digit vectors, CRT recombination and
//! prime-power factorizations.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

pub use num_bigint::BigInt;

use crate::bezout;

/// Miller-Rabin rounds used by [`is_probable_prime`]. The witnesses are the
/// first twenty primes, which makes the test exact below 3.3 * 10^24.
pub const PRIMALITY_ROUNDS: usize = 20;

const WITNESSES: [u32; PRIMALITY_ROUNDS] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("valuation of zero is infinite")]
    InfiniteValuation,
    #[error("moduli {m_i} (index {i}) and {m_j} (index {j}) are not coprime")]
    NonCoprimeModuli {
        i: usize,
        j: usize,
        m_i: BigInt,
        m_j: BigInt,
    },
    #[error("modulus must be at least 1, got {0}")]
    BadModulus(BigInt),
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("prime {0} listed more than once")]
    RepeatedPrime(BigInt),
    #[error("exponent must be positive (prime {0})")]
    ZeroExponent(BigInt),
    #[error("factors multiply to {product}, expected {expected}")]
    ProductMismatch { product: BigInt, expected: BigInt },
    #[error("cannot parse integer {0:?}")]
    Parse(String),
}

/// Reduces `a` into `[0, m)`.
pub fn mod_floor(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// `base^exp` for a small exponent.
pub fn pow(base: &BigInt, exp: u64) -> BigInt {
    Pow::pow(base, exp)
}

pub fn parse_bigint(s: &str) -> Result<BigInt, ArithError> {
    BigInt::from_str(s.trim()).map_err(|_| ArithError::Parse(s.to_string()))
}

/// Largest `k` with `p^k | a`.
pub fn valuation(a: &BigInt, p: &BigInt) -> Result<u64, ArithError> {
    if a.is_zero() {
        return Err(ArithError::InfiniteValuation);
    }
    let mut k = 0;
    let mut rest = a.clone();
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return Ok(k);
        }
        rest = q;
        k += 1;
    }
}

/// Valuation with zero mapped to `cap`, and every result clamped to `cap`.
pub fn valuation_capped(a: &BigInt, p: &BigInt, cap: u64) -> u64 {
    if a.is_zero() {
        return cap;
    }
    let mut k = 0;
    let mut rest = a.clone();
    while k < cap {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            break;
        }
        rest = q;
        k += 1;
    }
    k
}

/// Little-endian digit expansion of a residue modulo `base^len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicDigits {
    base: BigInt,
    digits: Vec<BigInt>,
}

impl PAdicDigits {
    /// Digits of `a mod base^len`, least significant first. Negative `a` is
    /// reduced into `[0, base^len)` before expansion.
    pub fn new(a: &BigInt, base: &BigInt, len: usize) -> Self {
        assert!(*base >= BigInt::from(2), "digit base must be at least 2");
        assert!(len >= 1, "digit length must be positive");
        let modulus = pow(base, len as u64);
        let mut rest = a.mod_floor(&modulus);
        let mut digits = Vec::with_capacity(len);
        for _ in 0..len {
            let (q, r) = rest.div_rem(base);
            digits.push(r);
            rest = q;
        }
        PAdicDigits {
            base: base.clone(),
            digits,
        }
    }

    pub fn base(&self) -> &BigInt {
        &self.base
    }

    pub fn digits(&self) -> &[BigInt] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Horner evaluation of the digit vector.
    pub fn value(&self) -> BigInt {
        self.digits
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, d| acc * &self.base + d)
    }
}

/// Shorthand for [`PAdicDigits::new`].
pub fn to_digits(a: &BigInt, base: &BigInt, len: usize) -> PAdicDigits {
    PAdicDigits::new(a, base, len)
}

/// Combines `x ≡ x_i (mod m_i)` for pairwise-coprime `m_i` into the unique
/// residue in `[0, Π m_i)`.
pub fn crt_pair(residues: &[(BigInt, BigInt)]) -> Result<BigInt, ArithError> {
    for (i, (_, m)) in residues.iter().enumerate() {
        if !m.is_positive() {
            return Err(ArithError::BadModulus(m.clone()));
        }
        for (j, (_, m2)) in residues.iter().enumerate().skip(i + 1) {
            if !m.gcd(m2).is_one() {
                return Err(ArithError::NonCoprimeModuli {
                    i,
                    j,
                    m_i: m.clone(),
                    m_j: m2.clone(),
                });
            }
        }
    }
    let n: BigInt = residues.iter().map(|(_, m)| m).product();
    let mut acc = BigInt::zero();
    for (x, m) in residues {
        let cofactor = &n / m;
        let inv = bezout::inverse_mod(&cofactor, m).expect("coprimality checked above");
        acc += x.mod_floor(m) * &cofactor * inv;
    }
    Ok(acc.mod_floor(&n))
}

fn pow_mod(base: &BigInt, exp: &BigInt, m: &BigInt) -> BigInt {
    base.modpow(exp, m)
}

/// Miller-Rabin with the fixed witness set [`WITNESSES`].
pub fn is_probable_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for &w in WITNESSES.iter() {
        let w = BigInt::from(w);
        if *n == w {
            return true;
        }
        if (n % &w).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let mut d = n_minus_1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for &w in WITNESSES.iter() {
        let mut x = pow_mod(&BigInt::from(w), &d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimePower {
    pub p: BigInt,
    pub r: u64,
}

impl PrimePower {
    pub fn modulus(&self) -> BigInt {
        pow(&self.p, self.r)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.r)
    }
}

/// `n = Π p^r` over distinct probable primes, kept sorted by ascending `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePowerFactorization {
    factors: Vec<PrimePower>,
}

impl PrimePowerFactorization {
    /// Validates `factors` against the declared modulus `n`.
    pub fn new(factors: Vec<(BigInt, u64)>, n: &BigInt) -> Result<Self, ArithError> {
        let mut out: Vec<PrimePower> = Vec::with_capacity(factors.len());
        for (p, r) in factors {
            if r == 0 {
                return Err(ArithError::ZeroExponent(p));
            }
            if !is_probable_prime(&p) {
                return Err(ArithError::NotPrime(p));
            }
            if out.iter().any(|f| f.p == p) {
                return Err(ArithError::RepeatedPrime(p));
            }
            out.push(PrimePower { p, r });
        }
        out.sort();
        let product: BigInt = out.iter().map(PrimePower::modulus).product();
        if product != *n {
            return Err(ArithError::ProductMismatch {
                product,
                expected: n.clone(),
            });
        }
        Ok(PrimePowerFactorization { factors: out })
    }

    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|f| &f.p)
    }

    pub fn modulus(&self) -> BigInt {
        self.factors.iter().map(PrimePower::modulus).product()
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> BigInt {
        self.primes().product()
    }
}

impl fmt::Display for PrimePowerFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Number of base-2 digits of `|a|`, zero for zero.
pub fn bit_length(a: &BigInt) -> u64 {
    a.bits()
}

/// Converts to `u128` when the value fits.
pub fn to_u128(a: &BigInt) -> Option<u128> {
    a.to_u128()
}
