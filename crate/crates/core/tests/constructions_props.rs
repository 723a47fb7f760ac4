use circbut::arith::divisors;
use circbut::circulant::{check_cyclic_root, dephase, is_hadamard, row_to_cyclic_root};
use circbut::constructions::{
    backelin_circulant, fourier_circulant, quadratic_row, reduce_to_fourier, BackelinParams,
    QuadraticCoeffs,
};

#[test]
fn fourier_rows_are_hadamard_cyclic_roots() {
    for n in 2..=12 {
        let row = fourier_circulant(n).unwrap();
        assert!(is_hadamard(&row), "n={n}");
        assert!(
            check_cyclic_root(&row_to_cyclic_root(&row)).holds(),
            "n={n}"
        );
    }
}

#[test]
fn odd_fourier_dephases_to_negated_products() {
    for n in (3..=11).step_by(2) {
        let mut got: Vec<Vec<usize>> = dephase(&fourier_circulant(n).unwrap());
        let mut want: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).map(|j| (n * n - i * j) % n).collect())
            .collect();
        got.sort();
        want.sort();
        assert_eq!(got, want, "n={n}");
    }
}

#[test]
fn backelin_rows_are_hadamard() {
    for n in 1..=12u64 {
        for m in divisors(n) {
            if m * n > 12 {
                continue;
            }
            let row = backelin_circulant(BackelinParams::new(n as usize, m as usize).unwrap());
            assert_eq!(row.n() as u64, m * n);
            assert!(is_hadamard(&row), "n={n} m={m}");
        }
    }
}

#[test]
fn quadratic_rows_are_hadamard_and_reduce_to_fourier() {
    for p in [3usize, 5, 7, 11, 13] {
        for a in 1..p {
            for b in 0..p {
                for c in 0..p {
                    let row = quadratic_row(QuadraticCoeffs::new(p, a, b, c).unwrap());
                    assert!(is_hadamard(&row), "p={p} ({a},{b},{c})");
                    let red = reduce_to_fourier(&row).unwrap();
                    for (i, r) in red.fourier.iter().enumerate() {
                        for (j, &v) in r.iter().enumerate() {
                            assert_eq!(v, i * j % p);
                        }
                    }
                }
            }
        }
    }
}
