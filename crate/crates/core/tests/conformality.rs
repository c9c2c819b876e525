mod common;

use common::*;
use num_traits::Zero;
use proptest::prelude::*;
use tmdim::conformality::{
    conformality_matrix, dim_spline_cofactor, dim_w, dim_w_hbc, find_reasonable_order, is_reasonable_order,
    ledge_system, propagate_order1, Line, LineSet,
};
use tmdim::formulas::{level_line_set, refined_line_set};
use tmdim::hierarchy::{Division, HMesh, Levels};
use tmdim::oracle::{dim_oracle, dim_oracle_w, Space};
use tmdim::{r, Axis, Error, LEdgeKind, Rational, Rect, Segment, TMesh};

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_int(x)).collect()
}

/// A horizontal line with fresh vertex ids starting at `first`.
fn line(id: usize, first: usize, xs: &[i64]) -> Line {
    Line {
        id,
        level: 1,
        axis: Axis::Horizontal,
        coord: Rational::ZERO,
        vertices: xs.iter().enumerate().map(|(i, &x)| (first + i, Rational::from_int(x))).collect(),
    }
}

#[test]
fn single_ledge_system_rows() {
    let rows = ledge_system(&ints(&[0, 1, 2, 3]), 2).unwrap();
    let as_ints: Vec<Vec<i64>> = rows
        .iter()
        .map(|row| row.iter().map(|q| q.to_integer().try_into().unwrap()).collect())
        .collect();
    assert_eq!(as_ints, [[1, 1, 1, 1], [0, 1, 2, 3], [0, 1, 4, 9]]);
}

#[test]
fn duplicate_coordinates_are_rejected() {
    assert_eq!(ledge_system(&ints(&[0, 1, 1]), 1), Err(Error::DuplicateCoordinate(Rational::ONE)));
}

#[test]
fn trivial_and_order_one_ledges() {
    for d in 1..=4 {
        let xs: Vec<i64> = (0..=d as i64).map(|i| i * i + 1).collect();
        let trivial = LineSet::new(vec![line(0, 0, &xs)]);
        assert_eq!(dim_w(&trivial, d).unwrap(), 0);
        assert_eq!(conformality_matrix(&trivial, d).unwrap().rank(), d + 1);
        let mut more = xs.clone();
        more.push(100);
        assert_eq!(dim_w(&LineSet::new(vec![line(0, 0, &more)]), d).unwrap(), 1);
    }
}

#[test]
fn disjoint_ledges_add_up() {
    let a = line(0, 0, &[0, 1, 3, 4, 7, 9]);
    let b = line(1, 10, &[2, 5, 6, 8, 11]);
    let both = LineSet::new(vec![a.clone(), b.clone()]);
    let m = conformality_matrix(&both, 2).unwrap();
    // Block diagonal: each row touches the columns of one l-edge only.
    for (row, &(l, _)) in m.rows.iter().zip(&m.row_labels) {
        for (c, q) in row.iter().enumerate() {
            let owner = if m.columns[c] < 10 { 0 } else { 1 };
            assert!(q.is_zero() || owner == l);
        }
    }
    let sum = dim_w(&LineSet::new(vec![a]), 2).unwrap() + dim_w(&LineSet::new(vec![b]), 2).unwrap();
    assert_eq!(dim_w(&both, 2).unwrap(), sum);
    assert_eq!(sum, 3 + 2);
}

#[test]
fn decomposition_mesh_matrix_columns() {
    let mesh = tmesh("dim");
    let set = LineSet::of_kinds(&mesh, &[LEdgeKind::TLedge]);
    assert_eq!(set.len(), 3);
    let m = conformality_matrix(&set, 2).unwrap();
    assert_eq!(m.columns.len(), 9);
    assert_eq!(m.rows.len(), 9);
}

#[test]
fn decomposition_into_semi_cross_mesh_and_t_ledges() {
    let mesh = tmesh("dim");
    let i = Rational::from_int;
    let rest = TMesh::from_segments(
        Rect::new(i(0), i(0), i(5), i(5)),
        &[
            Segment::horizontal(i(1), i(0), i(5)),
            Segment::horizontal(i(2), i(0), i(4)),
            Segment::horizontal(i(4), i(0), i(5)),
            Segment::vertical(i(1), i(0), i(5)),
            Segment::vertical(i(4), i(0), i(5)),
        ],
    )
    .unwrap();
    assert_eq!(rest.census().t_ledges, 0);
    let t_ledges = LineSet::of_kinds(&mesh, &[LEdgeKind::TLedge]);
    for d in 1..=3 {
        let whole = dim_oracle(&mesh, Space::degree(d)).unwrap();
        let parts = dim_w(&t_ledges, d).unwrap() + dim_oracle(&rest, Space::degree(d)).unwrap();
        assert_eq!(whole, parts, "d={d}");
        assert_eq!(dim_spline_cofactor(&mesh, d).unwrap(), whole, "d={d}");
    }
}

#[test]
fn order_one_propagation_uniform_spacing() {
    let g = propagate_order1(&ints(&[0, 1, 2, 3]), 2, 0, Rational::ONE).unwrap();
    assert_eq!(g, ints(&[1, -3, 3, -1]));
    let zero = propagate_order1(&ints(&[0, 1, 2, 3]), 2, 2, Rational::ZERO).unwrap();
    assert!(zero.iter().all(Rational::is_zero));
    assert!(matches!(propagate_order1(&ints(&[0, 1, 2]), 2, 0, Rational::ONE), Err(Error::InvalidArgument(_))));
    assert!(matches!(
        propagate_order1(&ints(&[0, 1, 1, 3]), 2, 0, Rational::ONE),
        Err(Error::DegenerateDistances(_))
    ));
}

#[test]
fn neighbor_block_component_has_one_dimensional_space() {
    let lines: Vec<Rational> = ints(&[0, 1, 2, 3, 4]);
    let h = HMesh::new(Division::TwoByTwo, lines.clone(), lines).unwrap().refine(0, &[5, 6, 9, 10]).unwrap();
    let flat = h.flatten();
    let levels = Levels::new(&flat).unwrap();
    assert_eq!(dim_w(&level_line_set(&levels, 1).unwrap(), 3).unwrap(), 1);
}

#[test]
fn level_decomposition_failure_example() {
    let flat = hmesh("nolevel").flatten();
    let levels = Levels::new(&flat).unwrap();
    assert_eq!(dim_w(&level_line_set(&levels, 1).unwrap(), 3).unwrap(), 0);
    assert_eq!(dim_w(&level_line_set(&levels, 2).unwrap(), 3).unwrap(), 6);
    let joint = refined_line_set(&levels);
    assert_eq!(dim_w(&joint, 3).unwrap(), 5);
    assert_eq!(dim_oracle_w(&joint, 3).unwrap(), 5);
}

/// Whether some order of the lines has every line bringing `d + 1` unseen
/// vertices, by dynamic programming over the subsets already placed.
fn reasonable_order_exists(set: &LineSet, d: usize) -> bool {
    let n = set.lines.len();
    assert!(n <= 16);
    let mut reachable = vec![false; 1 << n];
    reachable[0] = true;
    for mask in 0..1usize << n {
        if !reachable[mask] {
            continue;
        }
        let seen: std::collections::HashSet<usize> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .flat_map(|i| set.lines[i].vertices.iter().map(|v| v.0))
            .collect();
        for i in (0..n).filter(|i| mask >> i & 1 == 0) {
            if set.lines[i].vertices.iter().filter(|v| !seen.contains(&v.0)).count() > d {
                reachable[mask | 1 << i] = true;
            }
        }
    }
    reachable[(1 << n) - 1]
}

#[test]
fn no_reasonable_order_for_the_failure_example() {
    let flat = hmesh("nolevel").flatten();
    let levels = Levels::new(&flat).unwrap();
    let set = refined_line_set(&levels);
    assert!(!reasonable_order_exists(&set, 3));
    assert_eq!(find_reasonable_order(&set, 3), None);
}

#[test]
fn disjoint_long_ledges_have_an_order() {
    let set = LineSet::new(vec![line(0, 0, &[0, 1, 2]), line(1, 5, &[0, 2, 5, 6])]);
    let order = find_reasonable_order(&set, 2).unwrap();
    assert!(is_reasonable_order(&set, &order, 2));
    assert_eq!(dim_w(&set, 2).unwrap(), set.vertex_ids().len() - 3 * set.len());
}

#[test]
fn tensor_grids() {
    for (k, l) in [(1i64, 1i64), (2, 3), (4, 2), (5, 5)] {
        let xs: Vec<Rational> = (0..=k).map(|i| r(i * (i + 1), 2)).collect();
        let ys: Vec<Rational> = (0..=l).map(|j| r(3 * j, 4)).collect();
        let mesh = TMesh::tensor(&xs, &ys).unwrap();
        let (k, l) = (k as usize, l as usize);
        assert_eq!(dim_spline_cofactor(&mesh, 2).unwrap(), (k + 2) * (l + 2));
        let lines = (k + 1, l + 1);
        let hbc = |d: usize| (lines.0.saturating_sub(d + 1)) * (lines.1.saturating_sub(d + 1));
        assert_eq!(dim_w_hbc(&mesh, 2).unwrap(), hbc(2));
        assert_eq!(dim_w_hbc(&mesh, 3).unwrap(), hbc(3));
    }
}

#[test]
fn worked_examples_by_cofactor_count() {
    assert_eq!(dim_spline_cofactor(&hmesh("examplefordim1").flatten(), 3).unwrap(), 49);
    assert_eq!(dim_spline_cofactor(&hmesh("examplefordim").flatten(), 3).unwrap(), 58);
}

#[test]
fn csv_dump_layout() {
    let set = LineSet::new(vec![line(4, 0, &[0, 1, 2])]);
    let csv = conformality_matrix(&set, 1).unwrap().to_csv();
    assert_eq!(csv, "row,v0,v1,v2\nl4^0,1,1,1\nl4^1,0,1,2\n");
    let half = Line { vertices: vec![(0, r(1, 2)), (1, r(3, 1))], ..line(0, 0, &[]) };
    let csv = conformality_matrix(&LineSet::new(vec![half]), 1).unwrap().to_csv();
    assert!(csv.contains("l0^1,1/2,3"));
}

#[test]
fn matrix_rank_matches_rational_elimination() {
    for (name, mesh) in all_fixture_meshes() {
        let set = all_ledges(&mesh);
        for d in 1..=3 {
            let m = conformality_matrix(&set, d).unwrap();
            assert_eq!(m.dim_kernel(), dim_oracle_w(&set, d).unwrap(), "{name} d={d}");
            assert_eq!(m.dim_kernel(), dim_w(&set, d).unwrap(), "{name} d={d}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn propagated_vector_solves_the_system(
        d in 1usize..=5,
        start in -6i64..=6,
        pivot in 0usize..7,
        gaps in prop::collection::vec((1i64..=8, 1i64..=5), 6),
        (gn, gd) in (-9i64..=9, 1i64..=9),
    ) {
        let coords = coords_from_gaps(start, &gaps[..=d]);
        let gamma = r(gn, gd);
        let v = propagate_order1(&coords, d, pivot % (d + 2), gamma).unwrap();
        let sys = ledge_system(&coords, d).unwrap();
        for row in sys {
            let dot = row.iter().zip(&v).fold(num_rational::BigRational::zero(), |acc, (a, g)| acc + a * g.to_big());
            prop_assert!(dot.is_zero());
        }
        if !gamma.is_zero() {
            let first = v[0].to_big();
            prop_assert!(v.iter().all(|g| !g.is_zero()));
            // Signs alternate along the l-edge.
            for (i, g) in v.iter().enumerate() {
                let same = (g.to_big() / &first) > num_rational::BigRational::zero();
                prop_assert_eq!(same, i % 2 == 0);
            }
        }
    }

    #[test]
    fn reasonable_order_agrees_with_exhaustive_search(seed in any::<u64>(), d in 1usize..=3) {
        let h = small_mesh(seed, Division::TwoByTwo);
        let flat = h.flatten();
        let levels = Levels::new(&flat).unwrap();
        for i in 1..=levels.lev() {
            let set = level_line_set(&levels, i).unwrap();
            if set.len() > 14 {
                continue;
            }
            let found = find_reasonable_order(&set, d);
            prop_assert_eq!(found.is_some(), reasonable_order_exists(&set, d));
            if let Some(order) = found {
                prop_assert!(is_reasonable_order(&set, &order, d));
                let v = set.vertex_ids().len();
                prop_assert_eq!(dim_w(&set, d).unwrap(), v - (d + 1) * set.len());
            }
        }
    }
}
