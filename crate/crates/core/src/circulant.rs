//! Circulant Butson matrices encoded by the exponents of their first row.
//!
//! Convention: `H_{ij} = ω^{e[(j − i) mod n]}` with `ω = e^{2πi/l}`.

use std::collections::HashSet;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{CycPoly, ReducedBasis};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RowError {
    #[error("row must have at least one entry")]
    Empty,
    #[error("root order must be at least 1")]
    ZeroOrder,
    #[error("exponent {value} at position {index} is not in Z/{l}Z")]
    OutOfRange {
        index: usize,
        value: usize,
        l: usize,
    },
    #[error("cyclic root entry {index} is not unimodular")]
    NotUnimodular { index: usize },
}

/// First-row exponents of a circulant matrix over the `l`-th roots of unity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExponentRow {
    l: usize,
    e: Vec<usize>,
}

impl ExponentRow {
    pub fn new(l: usize, e: Vec<usize>) -> Result<Self, RowError> {
        if e.is_empty() {
            return Err(RowError::Empty);
        }
        if l == 0 {
            return Err(RowError::ZeroOrder);
        }
        if let Some((index, &value)) = e.iter().enumerate().find(|(_, &v)| v >= l) {
            return Err(RowError::OutOfRange { index, value, l });
        }
        Ok(Self { l, e })
    }

    /// Reduces every entry mod `l` first.
    pub fn from_residues(l: usize, e: impl IntoIterator<Item = i64>) -> Result<Self, RowError> {
        if l == 0 {
            return Err(RowError::ZeroOrder);
        }
        Self::new(
            l,
            e.into_iter()
                .map(|v| v.rem_euclid(l as i64) as usize)
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.e.len()
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn exponents(&self) -> &[usize] {
        &self.e
    }

    pub fn into_exponents(self) -> Vec<usize> {
        self.e
    }

    /// `H_{ij}` as an exponent.
    pub fn entry(&self, i: usize, j: usize) -> usize {
        let n = self.n();
        self.e[(j + n - i % n) % n]
    }

    pub fn rotate(&self, s: usize) -> Self {
        let n = self.n();
        Self {
            l: self.l,
            e: (0..n).map(|k| self.e[(k + s) % n]).collect(),
        }
    }

    /// Multiplies every entry by `ω^c`.
    pub fn shift(&self, c: usize) -> Self {
        Self {
            l: self.l,
            e: self.e.iter().map(|&v| (v + c) % self.l).collect(),
        }
    }

    /// `e[k] ↦ e[−k]`, i.e. the transpose.
    pub fn reverse(&self) -> Self {
        let n = self.n();
        Self {
            l: self.l,
            e: (0..n).map(|k| self.e[(n - k) % n]).collect(),
        }
    }

    /// The same row over the `(m·l)`-th roots of unity.
    pub fn lift(&self, m: usize) -> Self {
        Self {
            l: self.l * m,
            e: self.e.iter().map(|&v| v * m).collect(),
        }
    }

    pub fn complex_row(&self) -> Vec<Complex64> {
        let l = self.l as f64;
        self.e
            .iter()
            .map(|&v| Complex64::from_polar(1.0, 2.0 * PI * v as f64 / l))
            .collect()
    }

    pub fn complex_matrix(&self) -> DMatrix<Complex64> {
        let n = self.n();
        let row = self.complex_row();
        DMatrix::from_fn(n, n, |i, j| row[(j + n - i) % n])
    }
}

/// Multiplicities of `e[k+d] − e[k]` over `k`: the lag-`d` periodic
/// autocorrelation of the first row.
pub fn lag_sum(row: &ExponentRow, d: usize) -> CycPoly {
    let (n, l) = (row.n(), row.l());
    let e = row.exponents();
    CycPoly::from_exponents(l, (0..n).map(|k| (e[(k + d) % n] + l - e[k]) % l))
}

/// Hadamard test with the reduction data for `l` kept around.
#[derive(Debug, Clone)]
pub struct HadamardTester {
    basis: ReducedBasis,
}

impl HadamardTester {
    pub fn new(l: usize) -> Self {
        Self {
            basis: ReducedBasis::new(l),
        }
    }

    pub fn order(&self) -> usize {
        self.basis.order()
    }

    /// `e` must already be reduced mod `l`. Lags `d` and `n − d` are conjugate,
    /// so only `d ≤ n/2` is tested.
    pub fn check(&self, e: &[usize]) -> bool {
        let n = e.len();
        let l = self.basis.order();
        let mut acc = vec![0i64; self.basis.dim()];
        for d in 1..=n / 2 {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..n {
                let t = (e[(k + d) % n] + l - e[k]) % l;
                for (a, &b) in acc.iter_mut().zip(self.basis.power(t)) {
                    *a += b;
                }
            }
            if acc.iter().any(|&a| a != 0) {
                return false;
            }
        }
        true
    }
}

/// Exact test: every nonzero-lag autocorrelation of the first row vanishes.
pub fn is_hadamard(row: &ExponentRow) -> bool {
    HadamardTester::new(row.l()).check(row.exponents())
}

/// `max |(H H*)_{ij} − n δ_{ij}|` in floating point.
pub fn gram_residual(row: &ExponentRow) -> f64 {
    let h = row.complex_matrix();
    let n = row.n();
    let gram = &h * h.adjoint();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { n as f64 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// The vector `z` with `z_i = ξ_i / ξ_{i−1}`.
#[derive(Debug, Clone, PartialEq)]
pub enum CyclicRoot {
    Exact { l: usize, z: Vec<usize> },
    Numeric { z: Vec<Complex64> },
}

const UNIMODULAR_TOL: f64 = 1e-12;
const NUMERIC_ROOT_TOL: f64 = 1e-9;

impl CyclicRoot {
    pub fn exact(l: usize, z: Vec<usize>) -> Result<Self, RowError> {
        // Same validation as a row.
        let row = ExponentRow::new(l, z)?;
        Ok(Self::Exact {
            l,
            z: row.into_exponents(),
        })
    }

    pub fn numeric(z: Vec<Complex64>) -> Result<Self, RowError> {
        if z.is_empty() {
            return Err(RowError::Empty);
        }
        if let Some(index) = z
            .iter()
            .position(|v| (v.norm() - 1.0).abs() > UNIMODULAR_TOL)
        {
            return Err(RowError::NotUnimodular { index });
        }
        Ok(Self::Numeric { z })
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Exact { z, .. } => z.len(),
            Self::Numeric { z } => z.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_numeric(&self) -> Vec<Complex64> {
        match self {
            Self::Exact { l, z } => ExponentRow::new(*l, z.clone())
                .expect("validated on construction")
                .complex_row(),
            Self::Numeric { z } => z.clone(),
        }
    }
}

pub fn row_to_cyclic_root(row: &ExponentRow) -> CyclicRoot {
    let (n, l) = (row.n(), row.l());
    let e = row.exponents();
    CyclicRoot::Exact {
        l,
        z: (0..n)
            .map(|i| (e[i] + l - e[(i + n - 1) % n]) % l)
            .collect(),
    }
}

/// Partial products with `ξ_0 = 1`: `ξ_k = z_1 ⋯ z_k`. `z_0` is ignored, so the
/// result encodes a circulant matrix only when the full product is 1.
pub fn cyclic_root_to_row(l: usize, z: &[usize]) -> Result<ExponentRow, RowError> {
    if z.is_empty() {
        return Err(RowError::Empty);
    }
    let mut e = Vec::with_capacity(z.len());
    let mut acc = 0usize;
    e.push(0);
    for &zi in &z[1..] {
        acc = (acc + zi) % l.max(1);
        e.push(acc);
    }
    ExponentRow::new(l, e)
}

/// Which of the defining conditions of a cyclic root hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CyclicRootCheck {
    /// The `n − 1` cyclic elementary sums all vanish.
    pub vanishing: bool,
    /// `z_0 z_1 ⋯ z_{n−1} = 1`.
    pub product_one: bool,
}

impl CyclicRootCheck {
    pub fn holds(&self) -> bool {
        self.vanishing && self.product_one
    }
}

pub fn check_cyclic_root(z: &CyclicRoot) -> CyclicRootCheck {
    let n = z.len();
    match z {
        CyclicRoot::Exact { l, z } => {
            let l = *l;
            let basis = ReducedBasis::new(l);
            let vanishing = (1..n).all(|m| {
                let s = CycPoly::from_exponents(
                    l,
                    (0..n).map(|i| (0..m).map(|r| z[(i + r) % n]).sum::<usize>()),
                );
                basis.is_zero(&s)
            });
            let product_one = z.iter().sum::<usize>() % l == 0;
            CyclicRootCheck {
                vanishing,
                product_one,
            }
        }
        CyclicRoot::Numeric { z } => {
            let vanishing = (1..n).all(|m| {
                let s: Complex64 = (0..n)
                    .map(|i| (0..m).map(|r| z[(i + r) % n]).product::<Complex64>())
                    .sum();
                s.norm() < NUMERIC_ROOT_TOL
            });
            let prod: Complex64 = z.iter().product();
            CyclicRootCheck {
                vanishing,
                product_one: (prod - Complex64::new(1.0, 0.0)).norm() < NUMERIC_ROOT_TOL,
            }
        }
    }
}

pub fn verify_cyclic_root(z: &CyclicRoot) -> bool {
    check_cyclic_root(z).holds()
}

/// Dephased exponent matrix, computed from the cyclic root by
/// `H_{ij} = (z_{n−i+1} ⋯ z_n) / (z_{j−i+1} ⋯ z_j)`.
pub fn dephase(row: &ExponentRow) -> Vec<Vec<usize>> {
    let (n, l) = (row.n() as i64, row.l() as i64);
    let z = match row_to_cyclic_root(row) {
        CyclicRoot::Exact { z, .. } => z,
        CyclicRoot::Numeric { .. } => unreachable!("rows give exact roots"),
    };
    // Σ z_t for t = a+1 ..= b, indices mod n.
    let run = |a: i64, b: i64| -> i64 {
        (a + 1..=b)
            .map(|t| z[t.rem_euclid(n) as usize] as i64)
            .sum()
    };
    (0..n)
        .map(|i| {
            let num = run(n - i, n);
            (0..n)
                .map(|j| (num - run(j - i, j)).rem_euclid(l) as usize)
                .collect()
        })
        .collect()
}

/// `H = H*`, i.e. `e[−k] ≡ −e[k]`.
pub fn is_hermitian(row: &ExponentRow) -> bool {
    let (n, l) = (row.n(), row.l());
    let e = row.exponents();
    (0..n).all(|k| (e[(n - k) % n] + e[k]).is_multiple_of(l))
}

/// Symmetries used to identify circulant matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquivalenceGroup {
    /// Cyclic rotation of the first row and multiplication by a constant.
    #[default]
    RotateAndConstant,
    /// As above, plus transposition (`e[k] ↦ e[−k]`).
    RotateConstantAndReversal,
}

impl EquivalenceGroup {
    fn includes_reversal(self) -> bool {
        matches!(self, Self::RotateConstantAndReversal)
    }
}

/// Lexicographically least row in the orbit of `e`. The constant is always
/// chosen to zero the leading entry, which is where the minimum lives.
pub fn canonical_form(e: &[usize], l: usize, group: EquivalenceGroup) -> Vec<usize> {
    let n = e.len();
    let mut best: Option<Vec<usize>> = None;
    let mut cand = vec![0usize; n];
    let mut consider = |src: &dyn Fn(usize) -> usize| {
        for s in 0..n {
            let base = src(s);
            for (k, c) in cand.iter_mut().enumerate() {
                *c = (src((s + k) % n) + l - base) % l;
            }
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand.clone());
            }
        }
    };
    consider(&|k| e[k]);
    if group.includes_reversal() {
        consider(&|k| e[(n - k) % n]);
    }
    best.expect("row is nonempty")
}

/// Orbit representative together with the orbit size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalClass {
    pub representative: ExponentRow,
    pub orbit_size: usize,
}

pub fn canonicalize(row: &ExponentRow) -> CanonicalClass {
    canonicalize_with(row, EquivalenceGroup::RotateAndConstant)
}

pub fn canonicalize_with(row: &ExponentRow, group: EquivalenceGroup) -> CanonicalClass {
    let (n, l) = (row.n(), row.l());
    let mut orbit = HashSet::new();
    let mut bases = vec![row.clone()];
    if group.includes_reversal() {
        bases.push(row.reverse());
    }
    for b in &bases {
        for s in 0..n {
            let r = b.rotate(s);
            for c in 0..l {
                orbit.insert(r.shift(c).into_exponents());
            }
        }
    }
    let representative = ExponentRow::new(l, canonical_form(row.exponents(), l, group))
        .expect("canonical form stays in range");
    debug_assert!(orbit.contains(representative.exponents()));
    CanonicalClass {
        representative,
        orbit_size: orbit.len(),
    }
}
