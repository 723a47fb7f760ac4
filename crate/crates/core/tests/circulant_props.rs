use circbut::circulant::{
    canonical_form, canonicalize, canonicalize_with, check_cyclic_root, cyclic_root_to_row,
    dephase, gram_residual, is_hadamard, row_to_cyclic_root, CyclicRoot, EquivalenceGroup,
    ExponentRow,
};
use circbut::rowtext::{self, RowFile};
use proptest::prelude::*;

const GRAM_TOL: f64 = 1e-8;

fn all_rows(n: usize, l: usize) -> impl Iterator<Item = ExponentRow> {
    (0..l.pow(n as u32)).map(move |mut code| {
        let e: Vec<usize> = (0..n)
            .map(|_| {
                let v = code % l;
                code /= l;
                v
            })
            .collect();
        ExponentRow::new(l, e).unwrap()
    })
}

#[test]
fn exact_test_matches_gram_oracle_exhaustively() {
    for n in 1..=5 {
        for l in 1..=6 {
            for row in all_rows(n, l) {
                let float = gram_residual(&row) < GRAM_TOL;
                assert_eq!(is_hadamard(&row), float, "{row:?}");
            }
        }
    }
}

fn row_strategy() -> impl Strategy<Value = ExponentRow> {
    (1usize..=8, 1usize..=12).prop_flat_map(|(n, l)| {
        prop::collection::vec(0..l, n).prop_map(move |e| ExponentRow::new(l, e).unwrap())
    })
}

proptest! {
    #[test]
    fn hadamard_is_constant_on_orbits(row in row_strategy(), s in 0usize..8, c in 0usize..12) {
        let moved = row.rotate(s % row.n()).shift(c % row.l());
        prop_assert_eq!(is_hadamard(&row), is_hadamard(&moved));
        prop_assert_eq!(canonicalize(&row).representative, canonicalize(&moved).representative);
    }

    #[test]
    fn canonical_class_invariants(row in row_strategy()) {
        let class = canonicalize(&row);
        let rep = class.representative.exponents().to_vec();
        prop_assert_eq!((row.n() * row.l()) % class.orbit_size, 0);
        // Lexicographic minimum over all n·l transforms.
        for s in 0..row.n() {
            for c in 0..row.l() {
                prop_assert!(rep <= row.rotate(s).shift(c).into_exponents());
            }
        }
        let coarse = canonicalize_with(&row, EquivalenceGroup::RotateConstantAndReversal);
        prop_assert!(coarse.representative.exponents() <= &rep[..]);
        prop_assert_eq!(
            canonical_form(row.reverse().exponents(), row.l(), EquivalenceGroup::RotateConstantAndReversal),
            coarse.representative.into_exponents()
        );
    }

    #[test]
    fn cyclic_root_round_trip(row in row_strategy()) {
        let gauged = row.shift(row.l() - row.exponents()[0]);
        let CyclicRoot::Exact { l, z } = row_to_cyclic_root(&gauged) else { unreachable!() };
        prop_assert_eq!(cyclic_root_to_row(l, &z).unwrap(), gauged);
    }

    #[test]
    fn cyclic_root_tracks_hadamard(row in row_strategy()) {
        let check = check_cyclic_root(&row_to_cyclic_root(&row));
        // The differences of a row always multiply to 1.
        prop_assert!(check.product_one);
        prop_assert_eq!(check.vanishing, is_hadamard(&row));
    }

    #[test]
    fn dephased_borders_vanish(row in row_strategy()) {
        let d = dephase(&row);
        prop_assert!(d[0].iter().all(|&v| v == 0));
        prop_assert!(d.iter().all(|r| r[0] == 0));
    }

    #[test]
    fn row_text_round_trip(rows in prop::collection::vec(prop::collection::vec(0usize..7, 5), 1..4)) {
        let rows: Vec<ExponentRow> = rows.into_iter().map(|e| ExponentRow::new(7, e).unwrap()).collect();
        let text = rowtext::format_exponent_rows(5, 7, &rows);
        let parsed = rowtext::parse(&text).unwrap();
        prop_assert_eq!(&parsed, &RowFile::Exponent { n: 5, l: 7, rows });
        prop_assert_eq!(rowtext::format(&parsed), text);
    }

    #[test]
    fn complex_text_round_trip(v in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..6)) {
        let row: Vec<_> = v.iter().map(|&(a, b)| num_complex::Complex64::new(a, b)).collect();
        let text = rowtext::format_complex_rows(row.len(), std::slice::from_ref(&row));
        prop_assert_eq!(rowtext::parse(&text).unwrap(), RowFile::Complex { n: row.len(), rows: vec![row] });
    }
}
