//! Known nonexistence results for Butson cells and the structural tests
//! behind them.

use serde::Serialize;
use thiserror::Error;

use crate::arith::{binomial, is_prime, mod_inverse, prime_factors, prime_power};
use crate::circulant::{ExponentRow, HadamardTester};
use crate::constructions::QuadraticCoeffs;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ObstructionError {
    #[error("cell needs n >= 2 and l >= 2 (got n={n}, l={l})")]
    InvalidCell { n: usize, l: usize },
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("function table has {got} values, expected {p}")]
    Length { p: usize, got: usize },
    #[error("value {value} is not in Z/{p}Z")]
    OutOfRange { p: usize, value: usize },
    #[error("quadratic fitting needs an odd prime")]
    EvenPrime,
    #[error("not a polynomial of degree 2")]
    NotQuadratic,
    #[error("subset must be nonempty and lie in Z/{n}Z")]
    BadSubset { n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Reason {
    LamLeung,
    Sylvester,
    SylvesterPrime,
    SylvesterDoublePrime,
    Haagerup5,
    PQTheorem,
}

impl Reason {
    /// Symbol used in the existence table.
    pub fn symbol(self) -> &'static str {
        match self {
            Self::LamLeung => "x",
            Self::Sylvester => "x_s",
            Self::SylvesterPrime | Self::SylvesterDoublePrime | Self::PQTheorem => "x_pq",
            Self::Haagerup5 => "x_h",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstructionStatus {
    Obstructed(Reason),
    NoKnownObstruction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObstructionVerdict {
    pub n: usize,
    pub l: usize,
    pub status: ObstructionStatus,
}

impl ObstructionVerdict {
    pub fn is_obstructed(&self) -> bool {
        matches!(self.status, ObstructionStatus::Obstructed(_))
    }

    pub fn reason(&self) -> Option<Reason> {
        match self.status {
            ObstructionStatus::Obstructed(r) => Some(r),
            ObstructionStatus::NoKnownObstruction => None,
        }
    }
}

/// Whether `n` is a nonnegative integer combination of `parts`.
fn representable(n: usize, parts: &[usize]) -> bool {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for k in 1..=n {
        reach[k] = parts.iter().any(|&p| p <= k && reach[k - p]);
    }
    reach[n]
}

/// `l = 2 p^b` with `b ≥ 1`.
fn is_twice_power_of(l: usize, p: usize) -> bool {
    l.is_multiple_of(2) && matches!(prime_power((l / 2) as u64), Some((q, _)) if q as usize == p)
}

/// `l = 2^a p^b` with `b ≥ 1` and some prime `p > q`.
fn is_power_of_two_times_larger_prime_power(l: usize, q: usize) -> bool {
    let mut odd = l;
    while odd.is_multiple_of(2) {
        odd /= 2;
    }
    matches!(prime_power(odd as u64), Some((p, _)) if p as usize > q)
}

pub fn check_obstructions(n: usize, l: usize) -> Result<ObstructionVerdict, ObstructionError> {
    if n < 2 || l < 2 {
        return Err(ObstructionError::InvalidCell { n, l });
    }
    let prime = |v: usize| is_prime(v as u64);
    let factors: Vec<usize> = prime_factors(l as u64)
        .into_iter()
        .map(|p| p as usize)
        .collect();

    let reason = if !representable(n, &factors) {
        Some(Reason::LamLeung)
    } else if l == 2 && n != 2 && !n.is_multiple_of(4) {
        Some(Reason::Sylvester)
    } else if n >= 5 && prime(n - 2) && is_twice_power_of(l, n - 2) {
        Some(Reason::SylvesterPrime)
    } else if n.is_multiple_of(2)
        && n / 2 >= 3
        && prime(n / 2)
        && is_power_of_two_times_larger_prime_power(l, n / 2)
    {
        Some(Reason::SylvesterDoublePrime)
    } else if n == 5 && !l.is_multiple_of(5) {
        Some(Reason::Haagerup5)
    } else if factors.len() == 2
        && factors[0] >= 5
        && factors[0] * factors[1] == l
        && factors[0] + factors[1] == n
    {
        Some(Reason::PQTheorem)
    } else {
        None
    };
    Ok(ObstructionVerdict {
        n,
        l,
        status: reason.map_or(
            ObstructionStatus::NoKnownObstruction,
            ObstructionStatus::Obstructed,
        ),
    })
}

/// A function `Z/pZ → Z/pZ` given by its value table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarFunction {
    p: usize,
    u: Vec<usize>,
}

impl PlanarFunction {
    pub fn new(p: usize, u: Vec<usize>) -> Result<Self, ObstructionError> {
        if !is_prime(p as u64) {
            return Err(ObstructionError::NotPrime(p));
        }
        if u.len() != p {
            return Err(ObstructionError::Length { p, got: u.len() });
        }
        if let Some(&value) = u.iter().find(|&&v| v >= p) {
            return Err(ObstructionError::OutOfRange { p, value });
        }
        Ok(Self { p, u })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn values(&self) -> &[usize] {
        &self.u
    }
}

/// Every difference map `k ↦ u(k+s) − u(k)`, `s ≠ 0`, is a bijection.
pub fn is_planar(u: &PlanarFunction) -> bool {
    let p = u.p;
    let mut seen = vec![false; p];
    (1..p).all(|s| {
        seen.iter_mut().for_each(|v| *v = false);
        (0..p).all(|k| {
            let d = (u.u[(k + s) % p] + p - u.u[k]) % p;
            !std::mem::replace(&mut seen[d], true)
        })
    })
}

/// Interpolates through `j = 0, 1, 2` and checks the remaining points.
pub fn fit_quadratic(u: &PlanarFunction) -> Result<QuadraticCoeffs, ObstructionError> {
    let p = u.p;
    if p == 2 {
        return Err(ObstructionError::EvenPrime);
    }
    let inv2 = mod_inverse(2, p as u64).expect("p odd") as usize;
    let (u0, u1, u2) = (u.u[0], u.u[1], u.u[2 % p]);
    let a = inv2 * ((u2 + 2 * p - 2 * u1 + u0) % p) % p;
    let b = (u1 + 2 * p - u0 - a) % p;
    let c = u0;
    let q = QuadraticCoeffs::new(p, a, b, c).map_err(|_| ObstructionError::NotQuadratic)?;
    if (0..p).all(|j| q.eval(j) == u.u[j]) {
        Ok(q)
    } else {
        Err(ObstructionError::NotQuadratic)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanarAudit {
    pub p: usize,
    pub functions: u64,
    pub planar_count: u64,
    pub quadratic_count: u64,
    pub hadamard_count: u64,
    /// `p²(p − 1)`.
    pub expected_count: u64,
    /// Every planar function fits a quadratic.
    pub all_quadratic: bool,
    pub planar_iff_quadratic: bool,
    pub planar_iff_hadamard: bool,
}

impl PlanarAudit {
    pub fn holds(&self) -> bool {
        self.all_quadratic
            && self.planar_iff_quadratic
            && self.planar_iff_hadamard
            && self.planar_count == self.expected_count
    }
}

/// Runs over all `p^p` functions on `Z/pZ`.
pub fn planar_theorem_audit(p: usize) -> Result<PlanarAudit, ObstructionError> {
    if !is_prime(p as u64) {
        return Err(ObstructionError::NotPrime(p));
    }
    if p == 2 {
        return Err(ObstructionError::EvenPrime);
    }
    let tester = HadamardTester::new(p);
    let mut u = PlanarFunction { p, u: vec![0; p] };
    let mut audit = PlanarAudit {
        p,
        functions: 0,
        planar_count: 0,
        quadratic_count: 0,
        hadamard_count: 0,
        expected_count: (p * p * (p - 1)) as u64,
        all_quadratic: true,
        planar_iff_quadratic: true,
        planar_iff_hadamard: true,
    };
    loop {
        let planar = is_planar(&u);
        let quadratic = fit_quadratic(&u).is_ok();
        let hadamard = tester.check(&u.u);
        audit.functions += 1;
        audit.planar_count += planar as u64;
        audit.quadratic_count += quadratic as u64;
        audit.hadamard_count += hadamard as u64;
        audit.all_quadratic &= !planar || quadratic;
        audit.planar_iff_quadratic &= planar == quadratic;
        audit.planar_iff_hadamard &= planar == hadamard;

        let mut i = 0;
        while i < p {
            u.u[i] += 1;
            if u.u[i] < p {
                break;
            }
            u.u[i] = 0;
            i += 1;
        }
        if i == p {
            return Ok(audit);
        }
    }
}

/// Both readings of the shift-intersection bound for a subset `A ⊆ Z/nZ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionReport {
    pub n: usize,
    /// `#A`.
    pub a: usize,
    /// `min_y #(A ∩ (y + A))` over all `y`.
    pub b_all_shifts: usize,
    /// The same minimum over `y ≠ 0` (equal to `a` when `n = 1`).
    pub b_nonzero_shifts: usize,
    /// `a ≥ b √n` with `b` over all shifts.
    pub literal_holds: bool,
    /// `a ≥ b √n` with `b` over nonzero shifts.
    pub literal_holds_nonzero: bool,
    /// `a² ≥ n b`, which follows from `Σ_y #(A ∩ (y + A)) = a²`.
    pub squared_holds: bool,
}

impl IntersectionReport {
    /// The literal inequality under both readings.
    pub fn bound_holds(&self) -> bool {
        self.literal_holds && self.literal_holds_nonzero
    }
}

pub fn intersection_bound_check(
    n: usize,
    set: &[usize],
) -> Result<IntersectionReport, ObstructionError> {
    if n == 0 || set.is_empty() || set.iter().any(|&v| v >= n) {
        return Err(ObstructionError::BadSubset { n });
    }
    let mut member = vec![false; n];
    for &v in set {
        member[v] = true;
    }
    let a = member.iter().filter(|&&m| m).count();
    let meet = |y: usize| {
        (0..n)
            .filter(|&k| member[k] && member[(k + n - y) % n])
            .count()
    };
    let b_all_shifts = (0..n).map(meet).min().expect("n >= 1");
    let b_nonzero_shifts = (1..n).map(meet).min().unwrap_or(a);
    // a ≥ b√n ⟺ a² ≥ b² n, kept in integers.
    let literal = |b: usize| a * a >= b * b * n;
    Ok(IntersectionReport {
        n,
        a,
        b_all_shifts,
        b_nonzero_shifts,
        literal_holds: literal(b_all_shifts),
        literal_holds_nonzero: literal(b_nonzero_shifts),
        squared_holds: a * a >= n * b_all_shifts,
    })
}

/// `binomial(2p − 2, p − 1)`.
pub fn haagerup_count_bound(p: usize) -> Result<u128, ObstructionError> {
    if !is_prime(p as u64) {
        return Err(ObstructionError::NotPrime(p));
    }
    Ok(binomial(2 * p as u64 - 2, p as u64 - 1))
}

pub const DETERMINANT_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeterminantCheck {
    pub det_abs_sq: f64,
    pub expected: f64,
    pub relative_error: f64,
    pub holds: bool,
}

/// `|det H|² = nⁿ`, checked numerically.
pub fn verify_determinant_identity(row: &ExponentRow) -> DeterminantCheck {
    let n = row.n();
    let det = row.complex_matrix().determinant();
    let det_abs_sq = det.norm_sqr();
    let expected = (n as f64).powi(n as i32);
    let relative_error = (det_abs_sq - expected).abs() / expected;
    DeterminantCheck {
        det_abs_sq,
        expected,
        relative_error,
        holds: relative_error < DETERMINANT_REL_TOL,
    }
}
