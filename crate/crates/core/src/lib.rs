//! Linear systems over `Z/nZ` with Smith normal forms, p-adic Bezout
//! certificates and CRT recombination.

pub mod arith;
pub mod bezout;
pub mod crt;
pub mod fieldsolve;
pub mod matrix;
pub mod modsolve;
pub mod smith;

pub use arith::{BigInt, PrimePower, PrimePowerFactorization};
pub use bezout::{BezoutCertificate, OpCounts};
pub use crt::{CrtSolution, ResidueSolution};
pub use fieldsolve::{Field, FieldMatrix, PrimeField, Rationals};
pub use matrix::IntMatrix;
pub use modsolve::{Infeasible, SolutionDescription, SolveError};
pub use smith::SmithDecomposition;
