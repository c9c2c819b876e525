//! Helpers shared by the integration test targets.

#![allow(dead_code)]

use std::collections::HashSet;
use std::path::PathBuf;

use tmdim::conformality::{dim_spline_cofactor, dim_w, dim_w_hbc, propagate_order1, residual, LineSet};
use tmdim::fuzz::{generate, FuzzConfig};
use tmdim::hierarchy::{Division, HMesh};
use tmdim::oracle::{dim_oracle, dim_oracle_hbc, Space};
use tmdim::{LEdgeKind, Rational, TMesh};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn hmesh(name: &str) -> HMesh {
    HMesh::from_json(&read_fixture(&format!("{name}.hmesh.json"))).expect("valid hierarchical fixture")
}

pub fn tmesh(name: &str) -> TMesh {
    TMesh::from_json(&read_fixture(&format!("{name}.json"))).expect("valid mesh fixture")
}

/// Flat meshes for every fixture that tiles its domain.
pub fn all_fixture_meshes() -> Vec<(&'static str, TMesh)> {
    let mut out: Vec<(&'static str, TMesh)> = [
        "exa-dim",
        "HTmesh",
        "three-by-three",
        "exam1",
        "examplefordim1",
        "examplefordim",
        "nolevel",
        "cvr",
        "cvrlevel",
    ]
    .into_iter()
    .map(|n| (n, hmesh(n).flatten()))
    .collect();
    for n in ["extend", "ledge-kinds", "tensor4x4", "dim"] {
        out.push((n, tmesh(n)));
    }
    out
}

/// Small hierarchical meshes for randomized properties.
pub fn small_mesh(seed: u64, division: Division) -> HMesh {
    let cfg = FuzzConfig {
        seed,
        count: 1,
        division,
        max_level: 2,
        max_level0: 4,
        n_ge_2: false,
        random_lines: true,
    };
    generate(&cfg, 0)
}

pub fn all_ledges(mesh: &TMesh) -> LineSet {
    LineSet::of_kinds(
        mesh,
        &[LEdgeKind::Boundary, LEdgeKind::CrossCut, LEdgeKind::Ray, LEdgeKind::TLedge],
    )
}

/// Splits the l-edges of `mesh` by `mask` into `L` and the rest, the rest
/// keeping only vertices off `L`. Returns `(all, rest, L)`.
pub fn split_by_mask(mesh: &TMesh, mask: u64) -> (LineSet, LineSet, LineSet) {
    let ids: Vec<usize> = mesh.ledges().iter().map(|l| l.id).collect();
    let (chosen, rest): (Vec<usize>, Vec<usize>) = ids.iter().partition(|&&id| mask >> (id % 64) & 1 == 1);
    let on_l: HashSet<usize> = chosen
        .iter()
        .flat_map(|&id| mesh.ledges()[id].vertices.iter().copied())
        .collect();
    let keep: HashSet<usize> = (0..mesh.vertices().len()).filter(|v| !on_l.contains(v)).collect();
    (
        LineSet::from_mesh(mesh, &ids, None),
        LineSet::from_mesh(mesh, &rest, Some(&keep)),
        LineSet::from_mesh(mesh, &chosen, None),
    )
}

/// `dim W[all] <= dim W[rest] + dim W[L]`.
pub fn check_subadditivity(seed: u64, mask: u64, d: usize) -> Result<(), String> {
    let mesh = small_mesh(seed, Division::TwoByTwo).flatten();
    let (all, rest, l) = split_by_mask(&mesh, mask);
    let (a, r, w) = (dim(&all, d)?, dim(&rest, d)?, dim(&l, d)?);
    if a <= r + w {
        Ok(())
    } else {
        Err(format!("seed {seed} mask {mask:#x} d {d}: {a} > {r} + {w}"))
    }
}

/// `dim W[all] >= dim W[rest]`.
pub fn check_lowbound(seed: u64, mask: u64, d: usize) -> Result<(), String> {
    let mesh = small_mesh(seed, Division::TwoByTwo).flatten();
    let (all, rest, _) = split_by_mask(&mesh, mask);
    let (a, r) = (dim(&all, d)?, dim(&rest, d)?);
    if a >= r {
        Ok(())
    } else {
        Err(format!("seed {seed} mask {mask:#x} d {d}: {a} < {r}"))
    }
}

fn dim(set: &LineSet, d: usize) -> Result<usize, String> {
    dim_w(set, d).map_err(|e| e.to_string())
}

/// Strictly increasing coordinates from positive rational gaps.
pub fn coords_from_gaps(start: i64, gaps: &[(i64, i64)]) -> Vec<Rational> {
    let mut at = Rational::from_int(start);
    let mut out = vec![at];
    for &(p, q) in gaps {
        at = at + Rational::new(p, q);
        out.push(at);
    }
    out
}

/// The propagated vector solves the l-edge system exactly and has no zero
/// entry.
pub fn check_propagation(coords: &[Rational], d: usize, pivot: usize, gamma: Rational) -> Result<(), String> {
    let v = propagate_order1(coords, d, pivot, gamma).map_err(|e| e.to_string())?;
    if v[pivot] != gamma {
        return Err(format!("pivot entry {} != {gamma}", v[pivot]));
    }
    if v.iter().any(|g| g.is_zero()) {
        return Err(format!("zero entry in {v:?}"));
    }
    let res = residual(coords, d, &v).map_err(|e| e.to_string())?;
    if res.iter().all(num_traits::Zero::is_zero) {
        Ok(())
    } else {
        Err(format!("nonzero residual {res:?} for {coords:?}"))
    }
}

/// Every dimension of a mesh and of its image under `(x, y) -> (a x + b, c y + e)`
/// agree.
pub fn check_affine_invariance(seed: u64, a: Rational, b: Rational, c: Rational, e: Rational) -> Result<(), String> {
    let mesh = small_mesh(seed, Division::TwoByTwo).flatten();
    let moved = mesh.affine(a, b, c, e).map_err(|e| e.to_string())?;
    let dims = |m: &TMesh| -> Result<Vec<usize>, String> {
        let s = |r: tmdim::Result<usize>| r.map_err(|e| e.to_string());
        Ok(vec![
            s(dim_spline_cofactor(m, 2))?,
            s(dim_spline_cofactor(m, 3))?,
            s(dim_w_hbc(m, 2))?,
            s(dim_w_hbc(m, 3))?,
            s(dim_oracle(m, Space::degree(2)))?,
            s(dim_oracle_hbc(m, Space::degree(2)))?,
        ])
    };
    let (before, after) = (dims(&mesh)?, dims(&moved)?);
    if before == after {
        Ok(())
    } else {
        Err(format!("seed {seed}: {before:?} became {after:?}"))
    }
}
