//! Brute-force oracles that share no code with the library.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::f64::consts::PI;

/// Tolerance on `|lag sum|` for the floating-point Hadamard test.
pub const ORACLE_LAG_TOL: f64 = 1e-6;

/// All cells with `l^{n−1} ≤ volume`, `2 ≤ l ≤ l_max`.
pub fn cells_within(volume: u64, l_max: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for l in 2..=l_max {
        let mut n = 2;
        while (l as u64).pow(n as u32 - 1) <= volume {
            out.push((n, l));
            n += 1;
        }
    }
    out
}

/// Minimum of `rotate(e, s) + c` over every `s`, `c`.
pub fn naive_canonical(e: &[usize], l: usize) -> Vec<usize> {
    let n = e.len();
    let mut best: Option<Vec<usize>> = None;
    for s in 0..n {
        for c in 0..l {
            let cand: Vec<usize> = (0..n).map(|k| (e[(k + s) % n] + c) % l).collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap()
}

/// Enumerates all `l^n` rows, keeps the ones whose lag sums vanish in floating
/// point, and returns the distinct canonical forms.
pub fn naive_classes(n: usize, l: usize) -> BTreeSet<Vec<usize>> {
    let cos: Vec<f64> = (0..l)
        .map(|t| (2.0 * PI * t as f64 / l as f64).cos())
        .collect();
    let sin: Vec<f64> = (0..l)
        .map(|t| (2.0 * PI * t as f64 / l as f64).sin())
        .collect();
    let mut out = BTreeSet::new();
    let mut e = vec![0usize; n];
    loop {
        let ok = (1..n).all(|d| {
            let (mut re, mut im) = (0.0, 0.0);
            for k in 0..n {
                let t = (e[(k + d) % n] + l - e[k]) % l;
                re += cos[t];
                im += sin[t];
            }
            re.hypot(im) < ORACLE_LAG_TOL
        });
        if ok {
            out.insert(naive_canonical(&e, l));
        }
        let mut i = 0;
        while i < n {
            e[i] += 1;
            if e[i] < l {
                break;
            }
            e[i] = 0;
            i += 1;
        }
        if i == n {
            return out;
        }
    }
}

/// Planar functions on `Z/pZ`, counted by checking each difference map with a
/// sorted copy.
pub fn naive_planar_count(p: usize) -> u64 {
    let mut u = vec![0usize; p];
    let mut count = 0;
    loop {
        let planar = (1..p).all(|s| {
            let mut d: Vec<usize> = (0..p).map(|k| (u[(k + s) % p] + p - u[k]) % p).collect();
            d.sort_unstable();
            d.iter().enumerate().all(|(i, &v)| i == v)
        });
        count += planar as u64;
        let mut i = 0;
        while i < p {
            u[i] += 1;
            if u[i] < p {
                break;
            }
            u[i] = 0;
            i += 1;
        }
        if i == p {
            return count;
        }
    }
}

/// Every nondecreasing sequence of `len` values in `0..m`.
pub fn multisets(m: usize, len: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, len: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in from..m {
            cur.push(v);
            rec(m, len, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, len, 0, &mut Vec::new(), &mut out);
    out
}

/// Float test that `Σ e^{2πi v/m}` vanishes.
pub fn float_vanishes(values: &[usize], m: usize) -> bool {
    let (re, im) = values.iter().fold((0.0, 0.0), |(a, b), &v| {
        let t = 2.0 * PI * v as f64 / m as f64;
        (a + t.cos(), b + t.sin())
    });
    re.hypot(im) < 1e-9
}

/// The values `r` for which some choice of index sets `R` (two indices of
/// value `r`), `P` (`p − 1` indices) and `Q` (the rest) has `P` covering the
/// coset `r + q·Z/pqZ` minus `r` and `Q` covering `r + p·Z/pqZ` minus `r`.
/// Searches index subsets directly.
pub fn brute_force_partitions(values: &[usize], p: usize, q: usize) -> Vec<usize> {
    let m = p * q;
    let len = values.len();
    let mut found = BTreeSet::new();
    for a in 0..len {
        for b in a + 1..len {
            if values[a] != values[b] {
                continue;
            }
            let r = values[a];
            let rest: Vec<usize> = (0..len).filter(|&i| i != a && i != b).collect();
            let want_p: BTreeSet<usize> = (1..p).map(|k| (r + q * k) % m).collect();
            let want_q: BTreeSet<usize> = (1..q).map(|k| (r + p * k) % m).collect();
            for mask in 0u32..(1 << rest.len()) {
                if mask.count_ones() as usize != p - 1 {
                    continue;
                }
                let mut pv = Vec::new();
                let mut qv = Vec::new();
                for (j, &i) in rest.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        pv.push(values[i]);
                    } else {
                        qv.push(values[i]);
                    }
                }
                let ps: BTreeSet<usize> = pv.iter().copied().collect();
                let qs: BTreeSet<usize> = qv.iter().copied().collect();
                if ps.len() == p - 1 && qs.len() == q - 1 && ps == want_p && qs == want_q {
                    found.insert(r);
                }
            }
        }
    }
    found.into_iter().collect()
}
