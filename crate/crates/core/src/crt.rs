//! Solving modulo `n = p_1^r_1 ... p_m^r_m` one prime power at a time.
//!
//! Each residue problem is independent and deterministic, so workers may run
//! them in any order; recombination always folds in ascending prime order.

use std::thread;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{is_probable_prime, pow, ArithError, PrimePowerFactorization};
use crate::bezout::{inverse_mod_prime_power, OpCounts};
use crate::matrix::{dot, IntMatrix};
use crate::modsolve::{constrained_solution, describe, Infeasible, SolveError};
use crate::smith::{smith_form_prime_power, SmithDecomposition};

/// Largest modulus the fallback factorizer will attempt.
pub fn default_factor_bound() -> BigInt {
    BigInt::one() << 64
}

/// Solution of one residue problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSolution {
    pub p: BigInt,
    pub r: u64,
    pub modulus: BigInt,
    pub x: Vec<BigInt>,
    /// `<w, x> ≢ 0 (mod p)`; `None` without a constraint.
    pub constraint_ok: Option<bool>,
    pub ops: OpCounts,
    /// Certificate for `[A, -p^r I]`.
    pub decomposition: SmithDecomposition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtSolution {
    pub modulus: BigInt,
    pub x: Vec<BigInt>,
    /// In ascending prime order.
    pub residues: Vec<ResidueSolution>,
}

/// Solves `A x ≡ b (mod p^r)`; with `w`, also enforces `<w, x> ≢ 0 (mod p)`.
pub fn solve_mod_pr(
    a: &IntMatrix,
    b: &[BigInt],
    w: Option<&[BigInt]>,
    p: &BigInt,
    r: u64,
) -> Result<ResidueSolution, SolveError> {
    let n = pow(p, r);
    let a = a.reduce_mod(&n);
    let b: Vec<BigInt> = b.iter().map(|v| v.mod_floor(&n)).collect();
    if b.len() != a.rows() || w.is_some_and(|w| w.len() != a.cols()) {
        return Err(SolveError::Dimension(format!(
            "A is {}x{} but b has {} entries",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let reduction = smith_form_prime_power(&a, p, r);
    let ops = reduction.ops;
    let wrap = |e: SolveError| match e {
        SolveError::NoSolution(cause) => SolveError::NoSolution(Infeasible::Residue {
            prime: p.clone(),
            exponent: r,
            cause: Box::new(cause),
        }),
        other => other,
    };
    let desc = describe(&a, &b, &n, reduction.decomposition).map_err(wrap)?;
    let w: Option<Vec<BigInt>> = w.map(|w| w.iter().map(|v| v.mod_floor(&n)).collect());
    let x = match &w {
        Some(w) => constrained_solution(&desc, w, std::iter::once(p)).map_err(wrap)?,
        None => desc.particular.clone(),
    };
    let constraint_ok = w.map(|w| !(dot(&w, &x) % p).is_zero());
    Ok(ResidueSolution {
        p: p.clone(),
        r,
        modulus: n,
        x,
        constraint_ok,
        ops,
        decomposition: desc.decomposition,
    })
}

/// CRT basis: `P_j = n / p_j^r_j` and `Q_j = P_j^-1 mod p_j^r_j`.
pub fn crt_basis(factors: &PrimePowerFactorization) -> Vec<(BigInt, BigInt)> {
    let n = factors.modulus();
    factors
        .factors()
        .iter()
        .map(|f| {
            let pj = &n / f.modulus();
            let qj = inverse_mod_prime_power(&pj, &f.p, f.r).expect("cofactor is coprime to p");
            (pj, qj)
        })
        .collect()
}

/// `x = sum_j x(j) P_j Q_j (mod n)`, folded in the given (ascending) order.
pub fn recombine(factors: &PrimePowerFactorization, residues: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = factors.modulus();
    let l = residues.first().map_or(0, Vec::len);
    let mut x = vec![BigInt::zero(); l];
    for ((pj, qj), xj) in crt_basis(factors).iter().zip(residues) {
        let e = pj * qj;
        for (acc, v) in x.iter_mut().zip(xj) {
            *acc = (&*acc + v * &e).mod_floor(&n);
        }
    }
    x
}

/// Runs `f` on every item with at most `jobs` threads; results keep item order.
fn run_parallel<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(&f).collect();
    }
    let f = &f;
    let mut tagged: Vec<(usize, R)> = thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                scope.spawn(move || {
                    items
                        .iter()
                        .enumerate()
                        .skip(w)
                        .step_by(jobs)
                        .map(|(i, item)| (i, f(item)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("residue worker panicked"))
            .collect()
    });
    tagged.sort_by_key(|(i, _)| *i);
    tagged.into_iter().map(|(_, r)| r).collect()
}

fn solve_all(
    a: &IntMatrix,
    b: &[BigInt],
    w: Option<&[BigInt]>,
    n: &BigInt,
    factors: &PrimePowerFactorization,
    jobs: usize,
) -> Result<CrtSolution, SolveError> {
    if factors.modulus() != *n {
        return Err(SolveError::Factorization(ArithError::ProductMismatch {
            product: factors.modulus(),
            expected: n.clone(),
        }));
    }
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
    let results = run_parallel(factors.factors(), jobs, |f| solve_mod_pr(a, b, w, &f.p, f.r));
    // first failure in ascending prime order
    let residues = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let parts: Vec<Vec<BigInt>> = residues.iter().map(|r| r.x.clone()).collect();
    let x = recombine(factors, &parts);
    Ok(CrtSolution {
        modulus: n.clone(),
        x,
        residues,
    })
}

/// Solves `A x ≡ b (mod n)` by CRT over the prime-power factors of `n`.
pub fn solve_mod_n(
    a: &IntMatrix,
    b: &[BigInt],
    n: &BigInt,
    factors: &PrimePowerFactorization,
    jobs: usize,
) -> Result<CrtSolution, SolveError> {
    solve_all(a, b, None, n, factors, jobs)
}

/// Solves `A x ≡ b (mod n)` with `gcd(<w, x>, n) = 1` by CRT.
pub fn solve_mod_n_constrained(
    a: &IntMatrix,
    b: &[BigInt],
    w: &[BigInt],
    n: &BigInt,
    factors: &PrimePowerFactorization,
    jobs: usize,
) -> Result<CrtSolution, SolveError> {
    solve_all(a, b, Some(w), n, factors, jobs)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FactorError {
    #[error("factorization required: {n} exceeds the fallback bound {bound}; supply --factors")]
    AboveBound { n: BigInt, bound: BigInt },
    #[error("cannot factor {0}: modulus must be at least 2")]
    TooSmall(BigInt),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Factors `n <= bound` by trial division and Pollard's rho.
pub fn factorize_fallback(n: &BigInt, bound: &BigInt) -> Result<PrimePowerFactorization, FactorError> {
    if *n < BigInt::from(2) {
        return Err(FactorError::TooSmall(n.clone()));
    }
    if n > bound {
        return Err(FactorError::AboveBound {
            n: n.clone(),
            bound: bound.clone(),
        });
    }
    let mut primes = Vec::new();
    let mut rest = n.clone();
    let mut d = BigInt::from(2);
    while &d * &d <= rest && d < BigInt::from(1000) {
        while (&rest % &d).is_zero() {
            rest /= &d;
            primes.push(d.clone());
        }
        d += 1;
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            primes.push(m);
            continue;
        }
        let f = pollard_rho(&m);
        stack.push(&m / &f);
        stack.push(f);
    }
    primes.sort();
    let mut grouped: Vec<(BigInt, u64)> = Vec::new();
    for p in primes {
        match grouped.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => grouped.push((p, 1)),
        }
    }
    Ok(PrimePowerFactorization::new(grouped, n)?)
}

/// A nontrivial factor of the composite `m`.
fn pollard_rho(m: &BigInt) -> BigInt {
    if m.is_even() {
        return BigInt::from(2);
    }
    let mut c = BigInt::one();
    loop {
        let step = |v: &BigInt| (v * v + &c) % m;
        let (mut x, mut y) = (BigInt::from(2), BigInt::from(2));
        let mut g = BigInt::one();
        while g.is_one() {
            x = step(&x);
            y = step(&step(&y));
            g = (&x - &y).gcd(m);
        }
        if &g != m {
            return g;
        }
        c += 1;
    }
}
