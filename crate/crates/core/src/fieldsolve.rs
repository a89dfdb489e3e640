//! `A x = b` with `<w, x> != 0` over a field: exact rationals or `F_p`.
//!
//! Elimination is exact with first-nonzero pivoting; there are no tolerances.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::is_probable_prime;
use crate::bezout::inverse_mod;
use crate::matrix::IntMatrix;

/// Field operations on an element carrier.
#[allow(clippy::wrong_self_convention)]
pub trait Field {
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, v: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` only for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
}

/// The rationals, carried as reduced fractions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
}

/// `F_p`, carried as residues in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeField {
    p: BigInt,
}

impl PrimeField {
    pub fn new(p: &BigInt) -> Result<Self, FieldError> {
        if !is_probable_prime(p) {
            return Err(FieldError::NotPrime(p.clone()));
        }
        Ok(PrimeField { p: p.clone() })
    }

    pub fn characteristic(&self) -> &BigInt {
        &self.p
    }
}

impl Field for PrimeField {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_int(&self, v: &BigInt) -> BigInt {
        v.mod_floor(&self.p)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a + b).mod_floor(&self.p)
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a - b).mod_floor(&self.p)
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b).mod_floor(&self.p)
    }
    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        inverse_mod(a, &self.p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("field characteristic {0} is not prime")]
    NotPrime(BigInt),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("inconsistent system")]
    Inconsistent,
    #[error("functional vanishes on all solutions")]
    FunctionalVanishes,
    #[error("uniqueness check needs a trivial kernel, found dimension {0}")]
    NontrivialKernel(usize),
}

/// Dense row-major matrix over `F`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMatrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> FieldMatrix<E> {
    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Result<Self, FieldError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(FieldError::Dimension(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    cols
                )));
            }
            data.extend(row);
        }
        Ok(FieldMatrix { rows: n, cols, data })
    }

    pub fn from_int<F: Field<Elem = E>>(field: &F, m: &IntMatrix) -> Self {
        FieldMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data: m.entries().map(|v| field.from_int(v)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Appends columns on the right.
    fn with_column(&self, col: &[E]) -> Self {
        let mut rows: Vec<Vec<E>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        for (row, v) in rows.iter_mut().zip(col) {
            row.push(v.clone());
        }
        FieldMatrix::from_rows(rows, self.cols + 1).expect("one entry per row")
    }

    /// Appends a row at the bottom.
    fn with_row(&self, row: &[E]) -> Self {
        let mut data = self.data.clone();
        data.extend_from_slice(row);
        FieldMatrix {
            rows: self.rows + 1,
            cols: self.cols,
            data,
        }
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, field: &F, v: &[E]) -> Vec<E> {
        (0..self.rows).map(|i| dot(field, self.row(i), v)).collect()
    }
}

pub fn dot<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    a.iter()
        .zip(b)
        .fold(field.zero(), |acc, (x, y)| field.add(&acc, &field.mul(x, y)))
}

/// Reduced row echelon form and its pivot columns.
pub fn rref<F: Field>(field: &F, m: &FieldMatrix<F::Elem>) -> (FieldMatrix<F::Elem>, Vec<usize>) {
    let mut m = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(i) = (r..m.rows).find(|&i| !field.is_zero(m.get(i, c))) else {
            continue;
        };
        m.swap_rows(r, i);
        let inv = field.inv(m.get(r, c)).expect("pivot is nonzero");
        for j in c..m.cols {
            let v = field.mul(m.get(r, j), &inv);
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r || field.is_zero(m.get(i, c)) {
                continue;
            }
            let factor = m.get(i, c).clone();
            for j in c..m.cols {
                let v = field.sub(m.get(i, j), &field.mul(&factor, m.get(r, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank<F: Field>(field: &F, m: &FieldMatrix<F::Elem>) -> usize {
    rref(field, m).1.len()
}

/// One basis vector per free column of the echelon form.
pub fn kernel_basis<F: Field>(field: &F, m: &FieldMatrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let (e, pivots) = rref(field, m);
    (0..m.cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![field.zero(); m.cols];
            v[free] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.sub(&field.zero(), e.get(r, free));
            }
            v
        })
        .collect()
}

/// Some `x` with `A x = b`, or `None` when the system is inconsistent.
pub fn particular_solution<F: Field>(
    field: &F,
    a: &FieldMatrix<F::Elem>,
    b: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    let (e, pivots) = rref(field, &a.with_column(b));
    if pivots.last() == Some(&a.cols) {
        return None;
    }
    let mut x = vec![field.zero(); a.cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = e.get(r, a.cols).clone();
    }
    Some(x)
}

fn check_dims<E>(a: &FieldMatrix<E>, b: &[E], w: &[E]) -> Result<(), FieldError> {
    if b.len() != a.rows || w.len() != a.cols {
        return Err(FieldError::Dimension(format!(
            "A is {}x{}, b has {} entries, w has {}",
            a.rows,
            a.cols,
            b.len(),
            w.len()
        )));
    }
    Ok(())
}

/// `x` with `A x = b` and `<w, x> != 0`: try a particular solution, then shift
/// it by the first kernel vector on which `w` is nonzero.
pub fn solve_field_constrained<F: Field>(
    field: &F,
    a: &FieldMatrix<F::Elem>,
    b: &[F::Elem],
    w: &[F::Elem],
) -> Result<Vec<F::Elem>, FieldError> {
    check_dims(a, b, w)?;
    let x0 = particular_solution(field, a, b).ok_or(FieldError::Inconsistent)?;
    let x = if !field.is_zero(&dot(field, w, &x0)) {
        x0
    } else {
        let v = kernel_basis(field, a)
            .into_iter()
            .find(|v| !field.is_zero(&dot(field, w, v)))
            .ok_or(FieldError::FunctionalVanishes)?;
        x0.iter().zip(&v).map(|(p, q)| field.add(p, q)).collect()
    };
    debug_assert!(a.mul_vec(field, &x) == b);
    debug_assert!(!field.is_zero(&dot(field, w, &x)));
    Ok(x)
}

/// `dim rowspan A < dim rowspan [A; w^T]`, i.e. `w` is not in the row space.
pub fn functional_independent<F: Field>(field: &F, a: &FieldMatrix<F::Elem>, w: &[F::Elem]) -> bool {
    rank(field, a) < rank(field, &a.with_row(w))
}

/// For a consistent system with `ker A = 0`: `rank [A; w^T] < rank [[A, b], [w^T, 0]]`,
/// which holds exactly when the unique solution has `<w, x> != 0`.
pub fn unique_case_check<F: Field>(
    field: &F,
    a: &FieldMatrix<F::Elem>,
    b: &[F::Elem],
    w: &[F::Elem],
) -> Result<bool, FieldError> {
    check_dims(a, b, w)?;
    let kernel = a.cols - rank(field, a);
    if kernel != 0 {
        return Err(FieldError::NontrivialKernel(kernel));
    }
    if particular_solution(field, a, b).is_none() {
        return Err(FieldError::Inconsistent);
    }
    let stacked = a.with_row(w);
    let mut rhs = b.to_vec();
    rhs.push(field.zero());
    let flag = rank(field, &stacked) < rank(field, &stacked.with_column(&rhs));
    debug_assert_eq!(flag, solve_field_constrained(field, a, b, w).is_ok());
    Ok(flag)
}
