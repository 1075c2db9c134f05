//! Property tests of the public API against independent checks.

use proptest::prelude::*;

use wedge_core::exact::{
    int, is_farkas, is_solution, nonneg_combination, nonnegative_solution, positively_spans, solve_square, CoordSign,
    Feasibility, RatMatrix, Rational,
};
use wedge_core::polytope::{make_polygon, vertex_enumerate, vertices_from_bases};
use wedge_core::surface::build_surface;
use wedge_core::wpcombin::{incidence, wp_pgons, wp_vertices, WpParams};

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(prop::collection::vec((-4i64..=4).prop_map(int), cols), rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solve_square_inverts_multiplication(rows in matrix(3, 3), x in prop::collection::vec(-5i64..=5, 3)) {
        let m = RatMatrix::from_rows(&rows);
        let x: Vec<Rational> = x.into_iter().map(int).collect();
        let b = m.mul_vec(&x);
        match solve_square(&m, &b) {
            Some(y) => prop_assert_eq!(y, x),
            None => prop_assert!(m.rank() < 3),
        }
    }

    #[test]
    fn feasibility_is_always_certified(rows in matrix(3, 4), b in prop::collection::vec(-4i64..=4, 3)) {
        let a = RatMatrix::from_rows(&rows);
        let b: Vec<Rational> = b.into_iter().map(int).collect();
        match nonnegative_solution(&a, &b) {
            Feasibility::Feasible(x) => prop_assert!(is_solution(&a, &b, &x)),
            Feasibility::Infeasible(y) => prop_assert!(is_farkas(&a, &b, &y)),
        }
    }

    #[test]
    fn positive_span_verdicts_verify(vectors in matrix(4, 2)) {
        let verdict = positively_spans(&vectors);
        prop_assert!(verdict.verify(&vectors));
        // a positively spanning set spans linearly too
        if verdict.spans() {
            prop_assert_eq!(RatMatrix::from_rows(&vectors).rank(), 2);
        }
    }

    #[test]
    fn sign_pattern_witness_matches(vectors in matrix(4, 3)) {
        let pattern = [CoordSign::Free, CoordSign::Negative, CoordSign::Zero];
        if let Some(c) = nonneg_combination(&vectors, &pattern) {
            prop_assert!(c.verify(&vectors));
            prop_assert!(c.witness[1] < int(0));
            prop_assert_eq!(&c.witness[2], &int(0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn polygon_bases_roundtrip(p in 3usize..=9) {
        let poly = make_polygon(p).unwrap();
        let all = vertex_enumerate(&poly).unwrap();
        prop_assert_eq!(all.len(), p);
        let bases: Vec<Vec<usize>> = all.iter().map(|v| v.tight.clone()).collect();
        prop_assert_eq!(vertices_from_bases(&poly, &bases).unwrap(), all);
    }

    #[test]
    fn every_vertex_meets_q_squared_pgons(p in 3usize..=6, q in 2usize..=3) {
        let params = WpParams::new(p, q).unwrap();
        let pgons = wp_pgons(params);
        for v in wp_vertices(params) {
            let deg = pgons.iter().filter(|g| incidence(&v, g).unwrap()).count();
            // double counting: q^p p-gons with p vertices over p q^(p-2) vertices
            prop_assert_eq!(deg, q * q);
        }
    }

    #[test]
    fn surface_euler_characteristic_is_even(p in 3usize..=6, q in 2usize..=4) {
        let s = build_surface(WpParams::new(p, q).unwrap()).unwrap();
        let f = s.f_vector();
        let chi = f[0] as i64 - f[1] as i64 + f[2] as i64;
        prop_assert_eq!(chi % 2, 0);
        prop_assert!(chi <= 2);
    }
}
