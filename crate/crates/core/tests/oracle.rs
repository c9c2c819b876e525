mod common;

use common::*;
use proptest::prelude::*;
use tmdim::conformality::{dim_spline_cofactor, dim_w_hbc};
use tmdim::oracle::{
    dim_oracle, dim_oracle_hbc, dim_oracle_w, dim_oracle_with, shared_segments, OracleOptions, Parameterization,
    Samples, Space,
};
use tmdim::{r, Axis, Error, Rational, TMesh};

fn grid(cells: i64, scale: i64) -> Vec<Rational> {
    (0..=cells).map(|i| r(i * (i + scale), scale)).collect()
}

/// Univariate spline count on `k` intervals, degree `m`, smoothness `alpha`.
fn univariate(k: usize, m: usize, alpha: usize) -> usize {
    m + 1 + (k - 1) * (m - alpha)
}

#[test]
fn single_cell_is_one_polynomial() {
    let mesh = TMesh::tensor(&grid(1, 2), &grid(1, 3)).unwrap();
    for (m, n) in [(1, 1), (2, 3), (3, 2), (4, 4)] {
        let space = Space { m, n, alpha: 0, beta: 0 };
        assert_eq!(dim_oracle(&mesh, space).unwrap(), (m + 1) * (n + 1));
        // Vanishing to order one on all four sides leaves x(1-x)y(1-y) times
        // a polynomial of bi-degree (m-2, n-2).
        assert_eq!(dim_oracle_hbc(&mesh, space).unwrap(), (m - 1) * (n - 1));
    }
}

#[test]
fn tensor_grids_are_products_of_univariate_counts() {
    for (k, l) in [(2usize, 3usize), (3, 1), (4, 4)] {
        let mesh = TMesh::tensor(&grid(k as i64, 2), &grid(l as i64, 5)).unwrap();
        for (m, n, alpha, beta) in [(2, 2, 1, 1), (3, 3, 2, 2), (3, 2, 1, 0), (2, 3, 0, 2)] {
            let want = univariate(k, m, alpha) * univariate(l, n, beta);
            let got = dim_oracle(&mesh, Space { m, n, alpha, beta }).unwrap();
            assert_eq!(got, want, "{k}x{l} cells, S({m},{n},{alpha},{beta})");
        }
        assert_eq!(dim_oracle(&mesh, Space::degree(2)).unwrap(), (k + 2) * (l + 2));
    }
}

#[test]
fn parameterizations_and_samples_agree() {
    for (name, mesh) in all_fixture_meshes() {
        if mesh.cells().len() > 60 {
            continue;
        }
        for hbc in [false, true] {
            let mut seen = Vec::new();
            for parameterization in [Parameterization::Unit, Parameterization::Centered] {
                for samples in [Samples::Even, Samples::Odd] {
                    let opts = OracleOptions { parameterization, samples, ..OracleOptions::default() };
                    seen.push(dim_oracle_with(&mesh, Space::degree(2), hbc, opts).unwrap());
                }
            }
            assert!(seen.windows(2).all(|w| w[0] == w[1]), "{name} hbc={hbc}: {seen:?}");
        }
    }
}

#[test]
fn oracle_matches_conformality_on_fixtures() {
    for (name, mesh) in all_fixture_meshes() {
        for d in [1, 2] {
            assert_eq!(dim_oracle(&mesh, Space::degree(d)).unwrap(), dim_spline_cofactor(&mesh, d).unwrap(), "{name}");
            assert_eq!(dim_oracle_hbc(&mesh, Space::degree(d)).unwrap(), dim_w_hbc(&mesh, d).unwrap(), "{name}");
        }
    }
}

#[test]
fn conformality_space_by_plain_elimination() {
    for (name, mesh) in all_fixture_meshes() {
        let set = all_ledges(&mesh);
        assert_eq!(dim_oracle_w(&set, 2).unwrap(), dim_w_hbc(&mesh, 2).unwrap(), "{name}");
    }
}

#[test]
fn rejects_unsupported_smoothness() {
    let mesh = tmesh("tensor4x4");
    let err = dim_oracle(&mesh, Space { m: 2, n: 2, alpha: 2, beta: 1 }).unwrap_err();
    assert!(matches!(err, Error::UnsupportedSmoothness(_)));
}

#[test]
fn refuses_oversized_systems() {
    let mesh = tmesh("tensor4x4");
    let opts = OracleOptions { max_unknowns: 100, ..OracleOptions::default() };
    let err = dim_oracle_with(&mesh, Space::degree(2), false, opts).unwrap_err();
    assert_eq!(err, Error::TooLarge { unknowns: 16 * 9, limit: 100 });
}

#[test]
fn shared_segments_cover_every_edge() {
    for (name, mesh) in all_fixture_meshes() {
        for axis in [Axis::Horizontal, Axis::Vertical] {
            let segs = shared_segments(&mesh, axis);
            let total: Rational = segs.iter().fold(Rational::ZERO, |acc, s| acc + (s.hi - s.lo));
            let edges: Rational = mesh
                .edges()
                .iter()
                .filter(|e| e.axis == axis)
                .fold(Rational::ZERO, |acc, e| {
                    let (a, b) = (mesh.vertex(e.a), mesh.vertex(e.b));
                    acc + (b.x - a.x).abs() + (b.y - a.y).abs()
                });
            assert_eq!(total, edges, "{name} {axis:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lower_smoothness_never_shrinks_the_space(seed in any::<u64>()) {
        let mesh = small_mesh(seed, tmdim::hierarchy::Division::TwoByTwo).flatten();
        let full = dim_oracle(&mesh, Space::degree(2)).unwrap();
        let lower = dim_oracle(&mesh, Space { m: 2, n: 2, alpha: 0, beta: 1 }).unwrap();
        prop_assert!(lower >= full);
        prop_assert_eq!(full, dim_spline_cofactor(&mesh, 2).unwrap());
    }
}
