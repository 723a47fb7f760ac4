//! Exact arithmetic with integer combinations of `l`-th roots of unity.
//!
//! A sum `Σ c_t ω^t` with `ω = e^{2πi/l}` is zero exactly when the integer
//! polynomial `Σ c_t x^t` is divisible by the cyclotomic polynomial `Φ_l`.
//! Everything here works with 64-bit integers and panics on overflow; the
//! coefficient magnitudes that occur for `n ≤ 16`, `l ≤ 64` are tiny.

use std::ops::{Add, AddAssign, Mul};

use num_complex::Complex64;
use thiserror::Error;

use crate::arith::{divisors, is_prime, totient};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CyclotomicError {
    #[error("root order must be at least 1")]
    ZeroOrder,
    #[error("expected {expected} coefficients, got {got}")]
    Length { expected: usize, got: usize },
    #[error("p={p}, q={q} must be distinct primes")]
    NotPrimePair { p: usize, q: usize },
    #[error("expected {expected} values for p+q, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("value {value} is outside Z/{modulus}Z")]
    OutOfRange { value: usize, modulus: usize },
    #[error("the sum of roots of unity does not vanish")]
    NotVanishing,
    #[error("vanishing sum admits no (P, Q, R, r) decomposition")]
    NoDecomposition,
}

/// `Σ coeffs[t] ω^t` with `ω = e^{2πi/l}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycPoly {
    l: usize,
    coeffs: Vec<i64>,
}

impl CycPoly {
    pub fn new(l: usize, coeffs: Vec<i64>) -> Result<Self, CyclotomicError> {
        if l == 0 {
            return Err(CyclotomicError::ZeroOrder);
        }
        if coeffs.len() != l {
            return Err(CyclotomicError::Length {
                expected: l,
                got: coeffs.len(),
            });
        }
        Ok(Self { l, coeffs })
    }

    pub fn zero(l: usize) -> Self {
        assert!(l >= 1, "root order must be at least 1");
        Self {
            l,
            coeffs: vec![0; l],
        }
    }

    /// The single root `ω^t`.
    pub fn monomial(l: usize, t: usize) -> Self {
        let mut p = Self::zero(l);
        p.coeffs[t % l] = 1;
        p
    }

    /// Multiplicity vector of a list of exponents (each reduced mod `l`).
    pub fn from_exponents<I: IntoIterator<Item = usize>>(l: usize, exps: I) -> Self {
        let mut p = Self::zero(l);
        for t in exps {
            p.coeffs[t % l] += 1;
        }
        p
    }

    pub fn order(&self) -> usize {
        self.l
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Complex conjugate: `ω^t ↦ ω^{-t}`.
    pub fn conj(&self) -> Self {
        let l = self.l;
        let mut out = Self::zero(l);
        for (t, &c) in self.coeffs.iter().enumerate() {
            out.coeffs[(l - t) % l] += c;
        }
        out
    }

    pub fn eval(&self) -> Complex64 {
        let l = self.l as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(t, &c)| {
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t as f64 / l) * c as f64
            })
            .sum()
    }

    pub fn is_zero_sum(&self) -> bool {
        is_zero_sum(self)
    }
}

impl AddAssign<&CycPoly> for CycPoly {
    fn add_assign(&mut self, rhs: &CycPoly) {
        assert_eq!(self.l, rhs.l, "mismatched root orders");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a = a.checked_add(*b).expect("coefficient overflow");
        }
    }
}

impl Add for &CycPoly {
    type Output = CycPoly;
    fn add(self, rhs: &CycPoly) -> CycPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

/// Cyclic convolution, indices mod `l`.
impl Mul for &CycPoly {
    type Output = CycPoly;
    fn mul(self, rhs: &CycPoly) -> CycPoly {
        assert_eq!(self.l, rhs.l, "mismatched root orders");
        let l = self.l;
        let mut out = CycPoly::zero(l);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                let prod = a.checked_mul(b).expect("coefficient overflow");
                let slot = &mut out.coeffs[(i + j) % l];
                *slot = slot.checked_add(prod).expect("coefficient overflow");
            }
        }
        out
    }
}

/// Monic `Φ_l`, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicPolynomial {
    l: usize,
    coeffs: Vec<i64>,
}

impl CyclotomicPolynomial {
    pub fn index(&self) -> usize {
        self.l
    }

    /// Ascending coefficients; the last one is the leading `1`.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Divides `num` by the monic `den` in place, returning the quotient; `num`
/// keeps the remainder in its low `deg(den)` slots.
fn divide_monic(num: &mut [i64], den: &[i64]) -> Vec<i64> {
    let k = den.len() - 1;
    debug_assert_eq!(den[k], 1);
    if num.len() <= k {
        return Vec::new();
    }
    let mut quot = vec![0i64; num.len() - k];
    for i in (k..num.len()).rev() {
        let q = num[i];
        if q == 0 {
            continue;
        }
        quot[i - k] = q;
        for (j, &d) in den.iter().enumerate() {
            let slot = &mut num[i - k + j];
            *slot = slot
                .checked_sub(q.checked_mul(d).expect("coefficient overflow"))
                .expect("coefficient overflow");
        }
    }
    quot
}

/// Remainder of `poly` (ascending coefficients) modulo the monic `modulus`.
pub fn poly_rem(poly: &[i64], modulus: &[i64]) -> Vec<i64> {
    let k = modulus.len() - 1;
    let mut work = poly.to_vec();
    if work.len() < k {
        work.resize(k, 0);
    }
    divide_monic(&mut work, modulus);
    work.truncate(k);
    work
}

/// `Φ_l`, obtained from `x^l − 1` by exact division by `Φ_d` for every proper
/// divisor `d` of `l`.
pub fn cyclotomic_polynomial(l: usize) -> CyclotomicPolynomial {
    assert!(l >= 1, "cyclotomic index must be at least 1");
    let divs = divisors(l as u64);
    let mut table: Vec<(usize, Vec<i64>)> = Vec::with_capacity(divs.len());
    for &d in &divs {
        let d = d as usize;
        let mut num = vec![0i64; d + 1];
        num[0] = -1;
        num[d] = 1;
        for (e, phi_e) in &table {
            if !d.is_multiple_of(*e) {
                continue;
            }
            let q = divide_monic(&mut num, phi_e);
            let k = phi_e.len() - 1;
            assert!(
                num[..k].iter().all(|&c| c == 0),
                "inexact division by Φ_{e}"
            );
            num = q;
        }
        table.push((d, num));
    }
    let (_, coeffs) = table.pop().expect("l has at least one divisor");
    debug_assert_eq!(coeffs.len() as u64 - 1, totient(l as u64));
    CyclotomicPolynomial { l, coeffs }
}

/// Exact test that `Σ coeffs[t] ω^t = 0`.
pub fn is_zero_sum(s: &CycPoly) -> bool {
    let phi = cyclotomic_polynomial(s.l);
    poly_rem(&s.coeffs, &phi.coeffs).iter().all(|&c| c == 0)
}

/// Precomputed reduction data for repeated zero tests at a fixed order `l`.
///
/// Each power `ω^t` is stored as its remainder modulo `Φ_l`, a vector of
/// length `φ(l)`. Since `Z[x]/Φ_l ≅ Z[ω]`, two sums are equal iff their reduced
/// vectors are equal.
#[derive(Debug, Clone)]
pub struct ReducedBasis {
    l: usize,
    phi: CyclotomicPolynomial,
    basis: Vec<Vec<i64>>,
}

impl ReducedBasis {
    pub fn new(l: usize) -> Self {
        let phi = cyclotomic_polynomial(l);
        let basis = (0..l)
            .map(|t| {
                let mut mono = vec![0i64; t + 1];
                mono[t] = 1;
                poly_rem(&mono, &phi.coeffs)
            })
            .collect();
        Self { l, phi, basis }
    }

    pub fn order(&self) -> usize {
        self.l
    }

    /// `φ(l)`, the length of reduced vectors.
    pub fn dim(&self) -> usize {
        self.phi.degree()
    }

    pub fn phi(&self) -> &CyclotomicPolynomial {
        &self.phi
    }

    /// Reduced vector of `ω^t`.
    pub fn power(&self, t: usize) -> &[i64] {
        &self.basis[t % self.l]
    }

    pub fn reduce(&self, s: &CycPoly) -> Vec<i64> {
        assert_eq!(s.l, self.l, "mismatched root orders");
        let mut out = vec![0i64; self.dim()];
        for (t, &c) in s.coeffs.iter().enumerate() {
            if c != 0 {
                for (o, &b) in out.iter_mut().zip(&self.basis[t]) {
                    *o += c * b;
                }
            }
        }
        out
    }

    pub fn is_zero(&self, s: &CycPoly) -> bool {
        self.reduce(s).iter().all(|&c| c == 0)
    }
}

/// The `(P, Q, R, r)` structure of a vanishing sum of `p + q` roots of order
/// `pq`: the values on `P` run through the coset `r + q·Z/pqZ` minus `r`, the
/// values on `Q` through `r + p·Z/pqZ` minus `r`, and both indices of `R`
/// carry `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingDecomposition {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub p_indices: Vec<usize>,
    pub q_indices: Vec<usize>,
    pub r_indices: [usize; 2],
}

impl VanishingDecomposition {
    /// `P ∪ R`, the indices whose values lie in the full `p`-cycle through `r`.
    pub fn p_plus(&self) -> Vec<usize> {
        let mut v = self.p_indices.clone();
        v.extend_from_slice(&self.r_indices);
        v.sort_unstable();
        v
    }

    /// `Q ∪ R`.
    pub fn q_plus(&self) -> Vec<usize> {
        let mut v = self.q_indices.clone();
        v.extend_from_slice(&self.r_indices);
        v.sort_unstable();
        v
    }

    /// Rebuilds the value vector (indexed like the input) from the partition.
    pub fn reconstruct(&self) -> Vec<usize> {
        let m = self.p * self.q;
        let mut out = vec![usize::MAX; self.p + self.q];
        for &i in &self.r_indices {
            out[i] = self.r;
        }
        // P and Q are stored in increasing cycle order: k = 1, 2, ...
        for (k, &i) in self.p_indices.iter().enumerate() {
            out[i] = (self.r + self.q * (k + 1)) % m;
        }
        for (k, &i) in self.q_indices.iter().enumerate() {
            out[i] = (self.r + self.p * (k + 1)) % m;
        }
        out
    }
}

/// Splits a vanishing sum of `p + q` roots of unity of order `pq` into a
/// `p`-cycle and a `q`-cycle sharing the doubled value `r`.
///
/// `p_indices[k-1]` holds the index whose value is `r + q·k`, and
/// `q_indices[k-1]` the index whose value is `r + p·k`.
pub fn decompose_vanishing_sum(
    values: &[usize],
    p: usize,
    q: usize,
) -> Result<VanishingDecomposition, CyclotomicError> {
    if p == q || !is_prime(p as u64) || !is_prime(q as u64) {
        return Err(CyclotomicError::NotPrimePair { p, q });
    }
    if values.len() != p + q {
        return Err(CyclotomicError::WrongArity {
            expected: p + q,
            got: values.len(),
        });
    }
    let m = p * q;
    if let Some(&value) = values.iter().find(|&&v| v >= m) {
        return Err(CyclotomicError::OutOfRange { value, modulus: m });
    }
    if !is_zero_sum(&CycPoly::from_exponents(m, values.iter().copied())) {
        return Err(CyclotomicError::NotVanishing);
    }

    let mut positions: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (i, &v) in values.iter().enumerate() {
        positions[v].push(i);
    }
    let single = |v: usize| -> Option<usize> {
        match positions[v].as_slice() {
            [i] => Some(*i),
            _ => None,
        }
    };

    let mut found: Option<VanishingDecomposition> = None;
    for (r, at) in positions.iter().enumerate() {
        let r_indices = match at.as_slice() {
            [a, b] => [*a, *b],
            _ => continue,
        };
        let p_indices: Option<Vec<usize>> = (1..p).map(|k| single((r + q * k) % m)).collect();
        let q_indices: Option<Vec<usize>> = (1..q).map(|k| single((r + p * k) % m)).collect();
        if let (Some(p_indices), Some(q_indices)) = (p_indices, q_indices) {
            // p·Z/pqZ ∩ q·Z/pqZ = {0}, so a second r would reuse a value.
            assert!(found.is_none(), "vanishing-sum decomposition is not unique");
            found = Some(VanishingDecomposition {
                p,
                q,
                r,
                p_indices,
                q_indices,
                r_indices,
            });
        }
    }
    found.ok_or(CyclotomicError::NoDecomposition)
}
