mod common;

use common::*;
use proptest::prelude::*;
use tmdim::conformality::{dim_spline_cofactor, dim_w_hbc};
use tmdim::formulas::{
    default_step, dim_formula, dim_level_decomposition, dim_s2, dim_s2_hbc, dim_s3, dim_s3_3x3, dim_s3_3x3_hbc,
    dim_s3_hbc, dim_via_extension, dim_w_levels_union, extend_mesh, extend_mesh_with_step,
};
use tmdim::hierarchy::{Division, HMesh, Levels};
use tmdim::oracle::{dim_oracle, dim_oracle_hbc, Space};
use tmdim::{r, Axis, Error, Rational, TMesh};

fn lines(n: i64) -> Vec<Rational> {
    (0..=n).map(|i| r(i * i + 2 * i, 3)).collect()
}

fn tensor_h(division: Division, k: i64, l: i64) -> HMesh {
    HMesh::new(division, lines(k), lines(l)).unwrap()
}

#[test]
fn tensor_closed_forms() {
    for k in 1..=5i64 {
        for l in 1..=5i64 {
            let (ku, lu) = (k as usize, l as usize);
            let h = tensor_h(Division::TwoByTwo, k, l);
            assert_eq!(dim_s2(&h).unwrap().value, (ku + 2) * (lu + 2));
            assert_eq!(dim_s3(&h).unwrap().value, (ku + 3) * (lu + 3));
            assert_eq!(dim_s3_3x3(&tensor_h(Division::ThreeByThree, k, l)).unwrap().value, (ku + 3) * (lu + 3));
            // Lines per axis are cells + 1.
            if k >= 2 && l >= 2 {
                assert_eq!(dim_s2_hbc(&h).unwrap().value, (ku - 2) * (lu - 2));
            }
            if k >= 3 && l >= 3 {
                assert_eq!(dim_s3_hbc(&h).unwrap().value, (ku - 3) * (lu - 3));
            }
        }
    }
}

#[test]
fn single_cell_values() {
    let h = tensor_h(Division::TwoByTwo, 1, 1);
    assert_eq!(dim_s2(&h).unwrap().value, 9);
    assert_eq!(dim_s3(&h).unwrap().value, 16);
    assert_eq!(dim_via_extension(&h.flatten(), Space::degree(2)).unwrap(), 9);
}

#[test]
fn coarse_grids_are_rejected() {
    let h = tensor_h(Division::TwoByTwo, 1, 4);
    assert!(matches!(dim_s2_hbc(&h), Err(Error::PreconditionTooCoarse { needed: 3, .. })));
    let h = tensor_h(Division::TwoByTwo, 2, 4);
    assert!(matches!(dim_s3_hbc(&h), Err(Error::PreconditionTooCoarse { needed: 4, .. })));
}

#[test]
fn wrong_division_is_rejected() {
    let h = tensor_h(Division::ThreeByThree, 4, 4);
    assert!(matches!(dim_s2(&h), Err(Error::UnsupportedDivision(_))));
    assert!(matches!(dim_s3_hbc(&h), Err(Error::UnsupportedDivision(_))));
    let h = tensor_h(Division::TwoByTwo, 4, 4);
    assert!(matches!(dim_s3_3x3(&h), Err(Error::UnsupportedDivision(_))));
    assert!(matches!(dim_formula(&h, 4, false), Err(Error::RegimeNotCovered(_))));
}

#[test]
fn worked_example_two_by_two() {
    let f = dim_s3(&hmesh("examplefordim1")).unwrap();
    assert_eq!((f.v_b, f.v_plus, f.e), (16, 20, 12));
    assert_eq!(f.deltas.d4, 1);
    assert_eq!(f.value, 3 * 16 + 20 - 2 * 12 + 4 + 1);
    assert_eq!(f.value, 49);
    assert_eq!(dim_via_extension(&hmesh("examplefordim1").flatten(), Space::degree(3)).unwrap(), 49);
}

#[test]
fn worked_example_three_by_three() {
    let f = dim_s3_3x3(&hmesh("examplefordim")).unwrap();
    assert_eq!((f.v_b, f.v_plus, f.e), (20, 29, 18));
    assert_eq!((f.deltas.d1, f.deltas.d2, f.deltas.d3, f.deltas.d4), (0, 0, 1, 0));
    assert_eq!(f.value, 58);
}

#[test]
fn isolated_cells_add_their_correction() {
    let base = tensor_h(Division::TwoByTwo, 5, 5);
    let one = base.refine(0, &[12]).unwrap();
    let (a, b) = (dim_s2_hbc(&base).unwrap(), dim_s2_hbc(&one).unwrap());
    assert_eq!(b.deltas.d1, 1);
    assert_eq!(b.value, dim_w_hbc(&one.flatten(), 2).unwrap());
    assert_eq!(a.value, dim_w_hbc(&base.flatten(), 2).unwrap());

    let block = base.refine(0, &[6, 7, 11, 12]).unwrap();
    let f = dim_s3_hbc(&block).unwrap();
    assert_eq!(f.deltas.d4, 1);
    assert_eq!(f.value, dim_w_hbc(&block.flatten(), 3).unwrap());

    let three = tensor_h(Division::ThreeByThree, 5, 5).refine(0, &[12]).unwrap();
    let f = dim_s3_3x3_hbc(&three).unwrap();
    assert_eq!(f.deltas.d1, 1);
    assert_eq!(f.value, dim_w_hbc(&three.flatten(), 3).unwrap());
}

#[test]
fn n_condition_is_enforced() {
    assert!(matches!(dim_s3(&hmesh("nolevel")), Err(Error::NConditionViolated { .. })));
    assert!(matches!(dim_s3_hbc(&hmesh("HTmesh")), Err(Error::NConditionViolated { .. })));
}

#[test]
fn fixtures_three_ways() {
    let cases: [(&str, usize, bool); 10] = [
        ("exa-dim", 2, false),
        ("exa-dim", 2, true),
        ("exa-dim", 3, true),
        ("exam1", 2, false),
        ("HTmesh", 2, false),
        ("examplefordim1", 3, true),
        ("cvr", 3, false),
        ("cvrlevel", 3, true),
        ("three-by-three", 3, false),
        ("examplefordim", 3, true),
    ];
    for (name, d, hbc) in cases {
        let h = hmesh(name);
        let flat = h.flatten();
        let f = dim_formula(&h, d, hbc).unwrap().value;
        let (cofactor, oracle) = if hbc {
            (dim_w_hbc(&flat, d).unwrap(), dim_oracle_hbc(&flat, Space::degree(d)).unwrap())
        } else {
            (dim_spline_cofactor(&flat, d).unwrap(), dim_oracle(&flat, Space::degree(d)).unwrap())
        };
        assert_eq!((f, cofactor), (oracle, oracle), "{name} d={d} hbc={hbc}");
    }
}

#[test]
fn extension_of_tensor_grid() {
    let mesh = TMesh::tensor(&lines(3), &lines(2)).unwrap();
    let ext = extend_mesh(&mesh, 2, 3).unwrap();
    let (xs, ys) = ext.result.grid_lines();
    assert_eq!((xs.len(), ys.len()), (4 + 2 * 2, 3 + 2 * 3));
    assert_eq!(ext.result.census().t_ledges + ext.result.census().rays, 0);
    let step = default_step(&mesh, 2, 3);
    let dom = ext.result.domain();
    assert_eq!(dom.x0, mesh.domain().x0 - step * Rational::from_int(2));
    assert_eq!(dom.y1, mesh.domain().y1 + step * Rational::from_int(3));
}

#[test]
fn extension_of_mesh_with_rays() {
    let mesh = tmesh("extend");
    let ext = extend_mesh(&mesh, 2, 2).unwrap();
    let (xs, ys) = ext.result.grid_lines();
    let (bx, by) = mesh.grid_lines();
    assert_eq!((xs.len(), ys.len()), (bx.len() + 4, by.len() + 4));
    // Rays stay rays, now reaching the new boundary.
    assert_eq!(ext.result.census().rays, mesh.census().rays);
    let (base, outer) = (mesh.domain(), ext.result.domain());
    for l in mesh.ledges().iter().filter(|l| l.is_interior()) {
        let (b, o) = match l.axis {
            Axis::Horizontal => ((base.x0, base.x1), (outer.x0, outer.x1)),
            Axis::Vertical => ((base.y0, base.y1), (outer.y0, outer.y1)),
        };
        let want_lo = if l.lo == b.0 { o.0 } else { l.lo };
        let want_hi = if l.hi == b.1 { o.1 } else { l.hi };
        let found = ext.result.ledges().iter().any(|e| {
            e.axis == l.axis && e.coord == l.coord && e.lo == want_lo && e.hi == want_hi
        });
        assert!(found, "{l:?} not prolonged");
    }
}

#[test]
fn extension_census_gain() {
    for name in ["exa-dim", "HTmesh", "exam1", "examplefordim1", "nolevel", "cvr"] {
        let flat = hmesh(name).flatten();
        let c = flat.census();
        for (d, extra_v, extra_e) in [(2usize, 8usize, 8usize), (3, 24, 12)] {
            let e = extend_mesh(&flat, d, d).unwrap().result.census();
            assert_eq!(e.v_plus, d * c.v_b + c.v_plus + extra_v, "{name} d={d}");
            assert_eq!(e.e, c.e + extra_e, "{name} d={d}");
        }
    }
}

#[test]
fn unequal_degree_extension_matches_oracle() {
    for name in ["extend", "ledge-kinds"] {
        let mesh = tmesh(name);
        for space in [Space { m: 2, n: 3, alpha: 1, beta: 2 }, Space { m: 3, n: 1, alpha: 2, beta: 0 }] {
            let via = dim_via_extension(&mesh, space).unwrap();
            assert_eq!(via, dim_oracle(&mesh, space).unwrap(), "{name} {space:?}");
            let step = default_step(&mesh, space.m, space.n) * r(1, 2);
            let other = extend_mesh_with_step(&mesh, space.m, space.n, step).unwrap();
            assert_eq!(dim_oracle_hbc(&other.result, space).unwrap(), via, "{name} {space:?}");
        }
    }
    let low = Space { m: 2, n: 2, alpha: 0, beta: 1 };
    assert!(matches!(dim_via_extension(&tmesh("extend"), low), Err(Error::UnsupportedSmoothness(_))));
}

#[test]
fn level_decomposition_sums() {
    for (name, d) in [("exa-dim", 2), ("exam1", 2), ("HTmesh", 2), ("examplefordim1", 3), ("cvrlevel", 3)] {
        let h = hmesh(name);
        let flat = h.flatten();
        let per_level = dim_level_decomposition(&h, d).unwrap();
        assert_eq!(per_level.len(), h.lev());
        let (xs, ys) = h.level0();
        let base = TMesh::tensor(xs, ys).unwrap();
        let sum: usize = per_level.iter().map(|p| p.1).sum();
        assert_eq!(dim_w_hbc(&base, d).unwrap() + sum, dim_w_hbc(&flat, d).unwrap(), "{name}");
        assert_eq!(dim_w_levels_union(&h, d).unwrap(), sum, "{name}");
    }
    assert!(dim_level_decomposition(&tensor_h(Division::TwoByTwo, 4, 4), 2).unwrap().is_empty());
}

#[test]
fn level_decomposition_failure_is_reported() {
    let h = hmesh("nolevel");
    assert!(matches!(dim_level_decomposition(&h, 3), Err(Error::RegimeNotCovered(_))));
    let flat = h.flatten();
    let levels = Levels::new(&flat).unwrap();
    let per_level: usize = tmdim::formulas::level_dims(&levels, 3).unwrap().iter().map(|p| p.1).sum();
    assert!(dim_w_levels_union(&h, 3).unwrap() < per_level);
}

#[test]
fn formulas_ignore_uniform_scaling() {
    for name in ["exa-dim", "examplefordim", "cvrlevel"] {
        let h = hmesh(name);
        let (xs, ys) = h.level0();
        let scale = |v: &[Rational]| v.iter().map(|&x| x * r(7, 3) + r(1, 2)).collect::<Vec<_>>();
        let mut moved = HMesh::new(h.division(), scale(xs), scale(ys)).unwrap();
        for k in 0..h.lev() {
            let ids: Vec<usize> = h
                .level_cells(k)
                .iter()
                .enumerate()
                .filter(|(_, c)| h.divided_cells(k).contains(c))
                .map(|(i, _)| i)
                .collect();
            moved = moved.refine(k, &ids).unwrap();
        }
        for hbc in [false, true] {
            let d = 3;
            assert_eq!(
                dim_formula(&h, d, hbc).map(|f| f.value),
                dim_formula(&moved, d, hbc).map(|f| f.value),
                "{name}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn degree_two_formulas_match_conformality(seed in any::<u64>()) {
        let h = small_mesh(seed, Division::TwoByTwo);
        let flat = h.flatten();
        prop_assert_eq!(dim_s2(&h).unwrap().value, dim_spline_cofactor(&flat, 2).unwrap());
        if let Ok(f) = dim_s2_hbc(&h) {
            prop_assert_eq!(f.value, dim_w_hbc(&flat, 2).unwrap());
        }
        let per_level: usize = dim_level_decomposition(&h, 2).unwrap().iter().map(|p| p.1).sum();
        let (xs, ys) = h.level0();
        let base = TMesh::tensor(xs, ys).unwrap();
        prop_assert_eq!(dim_w_hbc(&base, 2).unwrap() + per_level, dim_w_hbc(&flat, 2).unwrap());
    }
}
