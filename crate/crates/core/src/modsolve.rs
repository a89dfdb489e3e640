//! Solvers built on Smith decompositions.
//!
//! A modular system `A x ≡ b (mod n)` is the integral system
//! `[A, -nI] [x; y] = b`. With `P [A, -nI] Q = [S, 0]` and `x0 = S^-1 P b`,
//! every solution is `x = Q0 x0 + Q1 x1 (mod n)` where `Q0`, `Q1` are the top
//! `l` rows of `Q` split after column `k`, and `x1` ranges over `Z^l`.
//!
//! For the constraint `gcd(<w, x>, n) = 1`, write `Q^T [w; 0] = [w0; w1]`;
//! then `<w, x> = <w0, x0> + <w1, x1>` and the constraint can be met one prime
//! at a time: where `<w0, x0>` is already a unit mod `p`, take `x1 ≡ 0`;
//! otherwise some coordinate of `w1` must be nonzero mod `p` and `x1 ≡ e_i`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{crt_pair, pow, ArithError, PrimePowerFactorization};
use crate::matrix::{dot, IntMatrix};
use crate::smith::{smith_form, smith_form_augmented, smith_form_prime_power, SmithDecomposition};

/// Why a system has no (constrained) solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Infeasible {
    /// Integral systems only: component `index` (1-based) of `P b` beyond
    /// the rank is nonzero.
    NonzeroTail { index: usize, value: BigInt },
    /// `f_index` does not divide the matching component of `P b`.
    Divisibility {
        index: usize,
        factor: BigInt,
        value: BigInt,
    },
    /// Every solution has `<w, x> ≡ 0` modulo this prime.
    Constraint { prime: BigInt },
    /// The subproblem modulo `prime^exponent` failed.
    Residue {
        prime: BigInt,
        exponent: u64,
        cause: Box<Infeasible>,
    },
}

impl fmt::Display for Infeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infeasible::NonzeroTail { index, value } => {
                write!(f, "transformed right-hand side component {index} is {value}, expected 0")
            }
            Infeasible::Divisibility { factor, value, .. } => {
                write!(f, "invariant factor {factor} does not divide {value}")
            }
            Infeasible::Constraint { prime } => {
                write!(f, "linear functional vanishes modulo {prime} on every solution")
            }
            Infeasible::Residue { prime, exponent, cause } => {
                write!(f, "modulo {prime}^{exponent}: {cause}")
            }
        }
    }
}

impl Infeasible {
    /// The prime named by a constraint or residue failure.
    pub fn prime(&self) -> Option<&BigInt> {
        match self {
            Infeasible::Constraint { prime } | Infeasible::Residue { prime, .. } => Some(prime),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("no solution: {0}")]
    NoSolution(Infeasible),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("modulus must be at least 2, got {0}")]
    Modulus(BigInt),
    #[error(transparent)]
    Factorization(#[from] ArithError),
}

impl SolveError {
    pub fn infeasible(&self) -> Option<&Infeasible> {
        match self {
            SolveError::NoSolution(cause) => Some(cause),
            _ => None,
        }
    }
}

fn check_dims(a: &IntMatrix, b: &[BigInt], w: Option<&[BigInt]>) -> Result<(), SolveError> {
    if b.len() != a.rows() {
        return Err(SolveError::Dimension(format!(
            "A has {} rows but b has {} entries",
            a.rows(),
            b.len()
        )));
    }
    if let Some(w) = w {
        if w.len() != a.cols() {
            return Err(SolveError::Dimension(format!(
                "A has {} columns but w has {} entries",
                a.cols(),
                w.len()
            )));
        }
    }
    Ok(())
}

fn check_modulus(n: &BigInt) -> Result<(), SolveError> {
    if *n < BigInt::from(2) {
        return Err(SolveError::Modulus(n.clone()));
    }
    Ok(())
}

fn reduce_vec(v: &[BigInt], n: &BigInt) -> Vec<BigInt> {
    v.iter().map(|x| x.mod_floor(n)).collect()
}

/// Integral solution set `particular + span(kernel)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralSolution {
    pub particular: Vec<BigInt>,
    /// Basis of the integer kernel of `A` (the last `l - rank` columns of `Q`).
    pub kernel: Vec<Vec<BigInt>>,
}

/// Solves `A x = b` over the integers.
pub fn solve_integral(a: &IntMatrix, b: &[BigInt]) -> Result<IntegralSolution, SolveError> {
    check_dims(a, b, None)?;
    let d = smith_form(a);
    let bt = d.p.mul_vec(b).expect("P is k x k");
    for (i, v) in bt.iter().enumerate().skip(d.rank) {
        if !v.is_zero() {
            return Err(SolveError::NoSolution(Infeasible::NonzeroTail {
                index: i + 1,
                value: v.clone(),
            }));
        }
    }
    let mut xt = vec![BigInt::zero(); a.cols()];
    for (i, f) in d.invariant_factors.iter().enumerate() {
        let (q, r) = bt[i].div_rem(f);
        if !r.is_zero() {
            return Err(SolveError::NoSolution(Infeasible::Divisibility {
                index: i + 1,
                factor: f.clone(),
                value: bt[i].clone(),
            }));
        }
        xt[i] = q;
    }
    let particular = d.q.mul_vec(&xt).expect("Q is l x l");
    let kernel = (d.rank..a.cols()).map(|j| d.q.col(j)).collect();
    Ok(IntegralSolution { particular, kernel })
}

/// All solutions of `A x ≡ b (mod modulus)`:
/// `x = particular + free_block * x1 (mod modulus)` for `x1` in `Z^l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionDescription {
    pub modulus: BigInt,
    /// `Q0 x0 mod modulus`, length `l`.
    pub particular: Vec<BigInt>,
    /// `Q1 mod modulus`, `l x l`.
    pub free_block: IntMatrix,
    /// `S^-1 P b`, length `k`.
    pub x0: Vec<BigInt>,
    /// Decomposition of `[A, -modulus I]` the description was built from.
    pub decomposition: SmithDecomposition,
}

impl SolutionDescription {
    /// `particular + free_block * x1 (mod modulus)`.
    pub fn solution_for(&self, x1: &[BigInt]) -> Vec<BigInt> {
        let shift = self.free_block.mul_vec(x1).expect("x1 has length l");
        self.particular
            .iter()
            .zip(shift)
            .map(|(p, s)| (p + s).mod_floor(&self.modulus))
            .collect()
    }

    /// True when the solution is unique modulo `modulus`.
    pub fn is_unique(&self) -> bool {
        self.free_block.is_zero()
    }
}

/// Builds the solution description for `A x ≡ b (mod n)` from a Smith
/// decomposition of `[A, -n I]` (either the general or the prime-power one).
pub fn describe(
    a: &IntMatrix,
    b: &[BigInt],
    n: &BigInt,
    decomposition: SmithDecomposition,
) -> Result<SolutionDescription, SolveError> {
    let (k, l) = (a.rows(), a.cols());
    let bt = decomposition.p.mul_vec(b).expect("P is k x k");
    let mut x0 = Vec::with_capacity(k);
    for (i, f) in decomposition.invariant_factors.iter().enumerate() {
        let (q, r) = bt[i].div_rem(f);
        if !r.is_zero() {
            return Err(SolveError::NoSolution(Infeasible::Divisibility {
                index: i + 1,
                factor: f.clone(),
                value: bt[i].clone(),
            }));
        }
        x0.push(q);
    }
    let q = &decomposition.q;
    let q0 = q.submatrix(0..l, 0..k);
    let particular = reduce_vec(&q0.mul_vec(&x0).expect("Q0 is l x k"), n);
    let free_block = q.submatrix(0..l, k..k + l).reduce_mod(n);
    Ok(SolutionDescription {
        modulus: n.clone(),
        particular,
        free_block,
        x0,
        decomposition,
    })
}

/// Solves `A x ≡ b (mod n)` through the Smith form of `[A, -n I]`.
pub fn solve_modular(a: &IntMatrix, b: &[BigInt], n: &BigInt) -> Result<SolutionDescription, SolveError> {
    check_modulus(n)?;
    check_dims(a, b, None)?;
    let a = a.reduce_mod(n);
    let b = reduce_vec(b, n);
    let d = smith_form_augmented(&a, n);
    describe(&a, &b, n, d)
}

/// Solves `A x ≡ b (mod p^r)` through the prime-power Smith reduction.
pub fn solve_modular_prime_power(
    a: &IntMatrix,
    b: &[BigInt],
    p: &BigInt,
    r: u64,
) -> Result<SolutionDescription, SolveError> {
    check_dims(a, b, None)?;
    let n = pow(p, r);
    check_modulus(&n)?;
    let a = a.reduce_mod(&n);
    let b = reduce_vec(b, &n);
    let d = smith_form_prime_power(&a, p, r).decomposition;
    describe(&a, &b, &n, d)
}

/// Largest `j` such that the gcd of all `j x j` minors of `A` is coprime to
/// `n`, read off the determinantal divisors `f_1 ... f_j`.
pub fn unimodular_rank(a: &IntMatrix, n: &BigInt) -> usize {
    smith_form(a)
        .determinantal_divisors()
        .iter()
        .take_while(|d| d.gcd(n).is_one())
        .count()
}

/// Outcome of the uniqueness test; `unique` and `rank_condition` always agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniquenessReport {
    /// `Q1 ≡ 0 (mod n)`.
    pub unique: bool,
    /// `l <= k` and `unimodular_rank(A, n) = l`.
    pub rank_condition: bool,
}

pub fn is_unique(a: &IntMatrix, b: &[BigInt], n: &BigInt) -> Result<UniquenessReport, SolveError> {
    let desc = solve_modular(a, b, n)?;
    let (k, l) = (a.rows(), a.cols());
    let report = UniquenessReport {
        unique: desc.is_unique(),
        rank_condition: l <= k && unimodular_rank(&a.reduce_mod(n), n) == l,
    };
    debug_assert_eq!(report.unique, report.rank_condition);
    Ok(report)
}

/// `[w0; w1] = Q^T [w; 0]`; `w0` pairs with `x0` (length `k`), `w1` with `x1`
/// (length `l`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintData {
    pub w0: Vec<BigInt>,
    pub w1: Vec<BigInt>,
}

pub fn constraint_split(w: &[BigInt], decomposition: &SmithDecomposition) -> Result<ConstraintData, SolveError> {
    let q = &decomposition.q;
    let k = decomposition.s.rows();
    if q.rows() != w.len() + k {
        return Err(SolveError::Dimension(format!(
            "w has {} entries but Q is {}x{} for {} rows",
            w.len(),
            q.rows(),
            q.cols(),
            k
        )));
    }
    let wt: Vec<BigInt> = (0..q.cols())
        .map(|j| (0..w.len()).map(|i| &q[(i, j)] * &w[i]).sum())
        .collect();
    let (w0, w1) = wt.split_at(k);
    Ok(ConstraintData {
        w0: w0.to_vec(),
        w1: w1.to_vec(),
    })
}

/// Picks `x1` prime by prime and returns the constrained solution.
/// `w` must already be reduced modulo `desc.modulus`.
pub fn constrained_solution<'a>(
    desc: &SolutionDescription,
    w: &[BigInt],
    primes: impl Iterator<Item = &'a BigInt>,
) -> Result<Vec<BigInt>, SolveError> {
    let split = constraint_split(w, &desc.decomposition)?;
    let c = dot(&split.w0, &desc.x0);
    let l = split.w1.len();
    // per coordinate: (residue, prime) pairs for the CRT
    let mut residues: Vec<Vec<(BigInt, BigInt)>> = vec![Vec::new(); l];
    for p in primes {
        let pick = if (&c % p).is_zero() {
            let i = split
                .w1
                .iter()
                .position(|v| !(v % p).is_zero())
                .ok_or_else(|| SolveError::NoSolution(Infeasible::Constraint { prime: p.clone() }))?;
            Some(i)
        } else {
            None
        };
        for (j, res) in residues.iter_mut().enumerate() {
            let v = if pick == Some(j) { BigInt::one() } else { BigInt::zero() };
            res.push((v, p.clone()));
        }
    }
    let x1: Vec<BigInt> = residues
        .iter()
        .map(|r| crt_pair(r).expect("distinct primes are coprime"))
        .collect();
    Ok(desc.solution_for(&x1))
}

/// `A x ≡ b (mod n)` with `gcd(<w, x>, n) = 1`, solved directly modulo `n`.
pub fn solve_constrained(
    a: &IntMatrix,
    b: &[BigInt],
    w: &[BigInt],
    n: &BigInt,
    factors: &PrimePowerFactorization,
) -> Result<Vec<BigInt>, SolveError> {
    check_dims(a, b, Some(w))?;
    if factors.modulus() != *n {
        return Err(SolveError::Factorization(ArithError::ProductMismatch {
            product: factors.modulus(),
            expected: n.clone(),
        }));
    }
    let desc = solve_modular(a, b, n)?;
    let w = reduce_vec(w, n);
    let x = constrained_solution(&desc, &w, factors.primes())?;
    debug_assert!(verify_solution(a, b, Some(&w), n, &x));
    Ok(x)
}

/// `A x ≡ b (mod p^r)` with `<w, x> ≢ 0 (mod p)`, via `[A, -p^r I]`.
pub fn solve_prime_power_constrained(
    a: &IntMatrix,
    b: &[BigInt],
    w: &[BigInt],
    p: &BigInt,
    r: u64,
) -> Result<Vec<BigInt>, SolveError> {
    check_dims(a, b, Some(w))?;
    let desc = solve_modular_prime_power(a, b, p, r)?;
    let w = reduce_vec(w, &desc.modulus);
    let x = constrained_solution(&desc, &w, std::iter::once(p))?;
    debug_assert!(verify_solution(a, b, Some(&w), &desc.modulus, &x));
    Ok(x)
}

/// Independent check: `A x ≡ b (mod n)` and, when `w` is given,
/// `gcd(<w, x>, n) = 1`.
pub fn verify_solution(a: &IntMatrix, b: &[BigInt], w: Option<&[BigInt]>, n: &BigInt, x: &[BigInt]) -> bool {
    if x.len() != a.cols() || b.len() != a.rows() {
        return false;
    }
    let ax = a.mul_vec(x).expect("dimensions checked");
    let system_ok = ax.iter().zip(b).all(|(l, r)| (l - r).mod_floor(n).is_zero());
    let constraint_ok = w.is_none_or(|w| w.len() == x.len() && dot(w, x).gcd(n).is_one());
    system_ok && constraint_ok
}
