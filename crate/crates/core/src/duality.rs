//! The Fourier duality `x ↦ Fx` on first rows and the partition sums
//! `f_π`, `g_π` that it exchanges.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::circulant::ExponentRow;

/// Tolerance for the unimodular, Hermitian and reality predicates.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Largest partition ground set supported by the `f_π`, `g_π` evaluators.
pub const MAX_PARTITION_SIZE: usize = 5;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DualityError {
    #[error("row must have at least one entry")]
    Empty,
    #[error("partition size {0} outside 1..=5")]
    PartitionSize(usize),
}

/// A complex first row. Duals generally leave the roots of unity.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexRow {
    values: Vec<Complex64>,
    tolerance: f64,
}

impl ComplexRow {
    pub fn new(values: Vec<Complex64>) -> Result<Self, DualityError> {
        if values.is_empty() {
            return Err(DualityError::Empty);
        }
        Ok(Self {
            values,
            tolerance: MEMBERSHIP_TOL,
        })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn from_exponents(row: &ExponentRow) -> Self {
        Self::new(row.complex_row()).expect("rows are nonempty")
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn is_unimodular(&self) -> bool {
        self.values
            .iter()
            .all(|v| (v.norm() - 1.0).abs() < self.tolerance)
    }

    /// `conj(y_{−k}) = y_k` for all `k`.
    pub fn is_hermitian_symmetric(&self) -> bool {
        let n = self.n();
        (0..n).all(|k| (self.values[(n - k) % n].conj() - self.values[k]).norm() < self.tolerance)
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im.abs() < self.tolerance)
    }
}

fn fourier_apply(x: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = x.len();
    let scale = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|j| {
            let s: Complex64 = x
                .iter()
                .enumerate()
                .map(|(k, &v)| {
                    let angle = sign * 2.0 * PI * ((j * k) % n) as f64 / n as f64;
                    v * Complex64::from_polar(1.0, angle)
                })
                .sum();
            s * scale
        })
        .collect()
}

/// `y = Fx` with `F_{jk} = e^{2πijk/n}/√n`.
pub fn dual(x: &ComplexRow) -> ComplexRow {
    ComplexRow {
        values: fourier_apply(&x.values, 1.0),
        tolerance: x.tolerance,
    }
}

/// `x = F* y`.
pub fn inverse_dual(y: &ComplexRow) -> ComplexRow {
    ComplexRow {
        values: fourier_apply(&y.values, -1.0),
        tolerance: y.tolerance,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualReport {
    pub dual: ComplexRow,
    /// Holds exactly when the input row is Hadamard.
    pub unimodular: bool,
    pub hermitian: bool,
}

pub fn dual_matrix(row: &ExponentRow) -> DualReport {
    let y = dual(&ComplexRow::from_exponents(row));
    DualReport {
        unimodular: y.is_unimodular(),
        hermitian: y.is_hermitian_symmetric(),
        dual: y,
    }
}

/// A set partition of `{0, …, p−1}` (printed 1-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    p: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// From a restricted growth string: `a[0] = 0`, `a[i] ≤ 1 + max(a[..i])`.
    pub fn from_rgs(rgs: &[usize]) -> Option<Self> {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &b) in rgs.iter().enumerate() {
            match b.cmp(&blocks.len()) {
                std::cmp::Ordering::Less => blocks[b].push(i),
                std::cmp::Ordering::Equal => blocks.push(vec![i]),
                std::cmp::Ordering::Greater => return None,
            }
        }
        Some(Self {
            p: rgs.len(),
            blocks,
        })
    }

    /// Every partition of a `p`-set, in restricted-growth-string order.
    pub fn all(p: usize) -> Result<Vec<Self>, DualityError> {
        if p == 0 || p > MAX_PARTITION_SIZE {
            return Err(DualityError::PartitionSize(p));
        }
        let mut out = Vec::new();
        let mut rgs = vec![0usize; p];
        fn rec(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<SetPartition>) {
            if i == rgs.len() {
                out.push(SetPartition::from_rgs(rgs).expect("valid growth string"));
                return;
            }
            for b in 0..=max + 1 {
                rgs[i] = b;
                rec(i + 1, max.max(b), rgs, out);
            }
        }
        rec(1, 0, &mut rgs, &mut out);
        Ok(out)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// `|π|`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block notation with 1-based elements, e.g. `{1,3}{2}`.
    pub fn label(&self) -> String {
        self.blocks
            .iter()
            .map(|b| {
                let inner: Vec<String> = b.iter().map(|i| (i + 1).to_string()).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect()
    }
}

/// `Σ x_{i_1} ⋯ x_{i_p}` over multi-indices constant on each block.
pub fn f_pi(x: &ComplexRow, pi: &SetPartition) -> Complex64 {
    let n = x.n();
    let k = pi.len();
    let sizes: Vec<i32> = pi.blocks.iter().map(|b| b.len() as i32).collect();
    let mut idx = vec![0usize; k];
    let mut total = Complex64::new(0.0, 0.0);
    loop {
        total += idx
            .iter()
            .zip(&sizes)
            .map(|(&i, &s)| x.values[i].powi(s))
            .product::<Complex64>();
        if !advance(&mut idx, n) {
            return total;
        }
    }
}

/// `Σ x_{i_1} ⋯ x_{i_p}` over multi-indices whose sum over each block is
/// `0 mod n`.
pub fn g_pi(x: &ComplexRow, pi: &SetPartition) -> Complex64 {
    let n = x.n();
    // Blocks constrain disjoint index sets, so the sum factors over blocks.
    pi.blocks
        .iter()
        .map(|b| {
            let free = b.len() - 1;
            let mut idx = vec![0usize; free];
            let mut s = Complex64::new(0.0, 0.0);
            loop {
                let partial: usize = idx.iter().sum::<usize>() % n;
                let last = (n - partial) % n;
                s += idx.iter().map(|&i| x.values[i]).product::<Complex64>() * x.values[last];
                if !advance(&mut idx, n) {
                    return s;
                }
            }
        })
        .product()
}

/// Odometer increment over `(Z/nZ)^k`; false once it wraps.
fn advance(idx: &mut [usize], n: usize) -> bool {
    for v in idx.iter_mut() {
        *v += 1;
        if *v < n {
            return true;
        }
        *v = 0;
    }
    false
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionVerdict {
    pub partition: String,
    pub f_real: bool,
    pub g_real: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Membership {
    pub p: usize,
    pub member: bool,
    pub partitions: Vec<PartitionVerdict>,
}

/// For each `p`, whether every `f_π(x)` and `g_π(x)` with `π ∈ P(p)` is real.
/// Meaningful for Hadamard rows.
pub fn x_set_membership(row: &ExponentRow, ps: &[usize]) -> Result<Vec<Membership>, DualityError> {
    let x = ComplexRow::from_exponents(row);
    ps.iter()
        .map(|&p| {
            let partitions: Vec<PartitionVerdict> = SetPartition::all(p)?
                .iter()
                .map(|pi| PartitionVerdict {
                    partition: pi.label(),
                    f_real: f_pi(&x, pi).im.abs() < MEMBERSHIP_TOL,
                    g_real: g_pi(&x, pi).im.abs() < MEMBERSHIP_TOL,
                })
                .collect();
            Ok(Membership {
                p,
                member: partitions.iter().all(|v| v.f_real && v.g_real),
                partitions,
            })
        })
        .collect()
}
