//! Explicit circulant Butson families and the reduction of quadratic rows to
//! the Fourier matrix.

use serde::Serialize;
use thiserror::Error;

use crate::arith::{gcd, is_prime};
use crate::circulant::ExponentRow;
use crate::obstructions::{fit_quadratic, PlanarFunction};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("invalid Backelin parameters: m={m} must divide n={n} and be at least 1")]
    InvalidParams { n: usize, m: usize },
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("leading coefficient must be nonzero mod {p}")]
    ZeroLeading { p: usize },
    #[error("row must have n = l = p prime (got n={n}, l={l})")]
    NotPrimeSquare { n: usize, l: usize },
    #[error("first row is not a quadratic polynomial")]
    NotQuadratic,
    #[error("reduction did not reach the Fourier matrix")]
    ReductionMismatch,
}

/// `u(j) = a j² + b j + c` over `Z/pZ`, `a ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadraticCoeffs {
    p: usize,
    a: usize,
    b: usize,
    c: usize,
}

impl QuadraticCoeffs {
    pub fn new(p: usize, a: usize, b: usize, c: usize) -> Result<Self, ConstructionError> {
        if !is_prime(p as u64) {
            return Err(ConstructionError::NotPrime(p));
        }
        if a.is_multiple_of(p) {
            return Err(ConstructionError::ZeroLeading { p });
        }
        Ok(Self {
            p,
            a: a % p,
            b: b % p,
            c: c % p,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn eval(&self, j: usize) -> usize {
        let p = self.p;
        let j = j % p;
        (self.a * j % p * j + self.b * j + self.c) % p
    }
}

/// `m | n`; `c = m(n − 1) mod 2` decides whether the half-step `ρ = e^{πi/mn}`
/// survives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BackelinParams {
    n: usize,
    m: usize,
    c: usize,
}

impl BackelinParams {
    pub fn new(n: usize, m: usize) -> Result<Self, ConstructionError> {
        if m == 0 || n == 0 || !n.is_multiple_of(m) {
            return Err(ConstructionError::InvalidParams { n, m });
        }
        Ok(Self {
            n,
            m,
            c: m * (n - 1) % 2,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn parity(&self) -> usize {
        self.c
    }

    /// Matrix order `mn`.
    pub fn order(&self) -> usize {
        self.m * self.n
    }
}

/// Fourier matrix in circulant form. Odd `n`: `z_k = ω^k` over `l = n`.
/// Even `n`: `z_k = ρ^{2k+1}` with `ρ = e^{πi/n}`, over `l = 2n`.
pub fn fourier_circulant(n: usize) -> Result<ExponentRow, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::OrderTooSmall(n));
    }
    // ξ_k = z_1 ⋯ z_k, so e[k] is a partial sum of the root exponents.
    let (l, e): (usize, Vec<usize>) = if n % 2 == 1 {
        (n, (0..n).map(|k| k * (k + 1) / 2 % n).collect())
    } else {
        (2 * n, (0..n).map(|k| k * (k + 2) % (2 * n)).collect())
    };
    Ok(ExponentRow::new(l, e).expect("exponents reduced"))
}

/// Backelin's circulant of order `mn`, from the cyclic root
/// `ρ^c (1,…,1, w,…,w, …, w^{n−1},…,w^{n−1})` (each value repeated `m` times).
///
/// Built over `l = 2mn` and then reduced to the smallest modulus that still
/// carries the exponents.
pub fn backelin_circulant(params: BackelinParams) -> ExponentRow {
    let (n, m, c) = (params.n, params.m, params.c);
    let order = m * n;
    let big_l = 2 * order;
    // ρ = ω_{2mn}, w = ω_{2mn}^{2m}; root index k = m·i + a.
    let z = |k: usize| (c + 2 * m * (k / m)) % big_l;
    let mut e = Vec::with_capacity(order);
    let mut acc = 0;
    e.push(0);
    for k in 1..order {
        acc = (acc + z(k)) % big_l;
        e.push(acc);
    }
    let g = e.iter().fold(big_l as u64, |g, &v| gcd(g, v as u64)) as usize;
    ExponentRow::new(big_l / g, e.into_iter().map(|v| v / g).collect()).expect("exponents reduced")
}

/// `w^{−(mij + ib + ja)}` at row `m·i + a`, column `m·j + b`, as exponents of
/// `w = e^{2πi/n}`.
pub fn backelin_matrix(params: BackelinParams) -> Vec<Vec<usize>> {
    let (n, m) = (params.n, params.m);
    let order = n * m;
    (0..order)
        .map(|r| {
            let (i, a) = (r / m, r % m);
            (0..order)
                .map(|s| {
                    let (j, b) = (s / m, s % m);
                    (n - (m * i * j + i * b + j * a) % n) % n
                })
                .collect()
        })
        .collect()
}

/// `e[j] = a j² + b j + c` over `n = l = p`.
pub fn quadratic_row(coeffs: QuadraticCoeffs) -> ExponentRow {
    let p = coeffs.p;
    ExponentRow::new(p, (0..p).map(|j| coeffs.eval(j)).collect()).expect("exponents reduced")
}

/// The matrices produced by each step of the reduction to `(ij mod p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FourierReduction {
    pub coeffs: QuadraticCoeffs,
    /// `m_{ij} = e[j − i]`.
    pub initial: Vec<Vec<usize>>,
    /// Each column minus its first entry.
    pub column_dephased: Vec<Vec<usize>>,
    /// Each row minus its first entry: `−2a·ij`.
    pub row_dephased: Vec<Vec<usize>>,
    /// Row `i` is moved to row `−2a·i`.
    pub row_permutation: Vec<usize>,
    /// Equal to `(ij mod p)`.
    pub fourier: Vec<Vec<usize>>,
}

pub fn reduce_to_fourier(row: &ExponentRow) -> Result<FourierReduction, ConstructionError> {
    let (n, l) = (row.n(), row.l());
    if n != l || !is_prime(n as u64) {
        return Err(ConstructionError::NotPrimeSquare { n, l });
    }
    let p = n;
    let u = PlanarFunction::new(p, row.exponents().to_vec())
        .map_err(|_| ConstructionError::NotQuadratic)?;
    let coeffs = fit_quadratic(&u).map_err(|_| ConstructionError::NotQuadratic)?;

    let initial: Vec<Vec<usize>> = (0..p)
        .map(|i| (0..p).map(|j| row.entry(i, j)).collect())
        .collect();
    let column_dephased: Vec<Vec<usize>> = (0..p)
        .map(|i| {
            (0..p)
                .map(|j| (initial[i][j] + p - initial[0][j]) % p)
                .collect()
        })
        .collect();
    let row_dephased: Vec<Vec<usize>> = column_dephased
        .iter()
        .map(|r| r.iter().map(|&v| (v + p - r[0]) % p).collect())
        .collect();
    let two_a = 2 * coeffs.a() % p;
    let row_permutation: Vec<usize> = (0..p).map(|i| (p - two_a * i % p) % p).collect();
    let mut fourier = vec![Vec::new(); p];
    for (i, r) in row_dephased.iter().enumerate() {
        fourier[row_permutation[i]] = r.clone();
    }
    let expected = (0..p).all(|i| (0..p).all(|j| fourier[i][j] == i * j % p));
    if !expected {
        return Err(ConstructionError::ReductionMismatch);
    }
    Ok(FourierReduction {
        coeffs,
        initial,
        column_dephased,
        row_dephased,
        row_permutation,
        fourier,
    })
}
