//! Extended meshes and closed-form dimension formulas.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::conformality::{dim_w, dim_w_hbc, LineSet};
use crate::error::{Error, Result};
use crate::hierarchy::{Deltas, Division, HMesh, Levels};
use crate::mesh::{Axis, Segment, TMesh};
use crate::oracle::{dim_oracle_hbc, Space};
use crate::rational::Rational;

/// A mesh padded outside its domain so that boundary conditions become
/// homogeneous ones on the larger mesh.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedMesh {
    pub base: TMesh,
    pub m: usize,
    pub n: usize,
    pub step: Rational,
    pub result: TMesh,
}

/// Default spacing of the boundary copies: the shortest cell side divided by
/// `max(m, n) + 1`.
pub fn default_step(mesh: &TMesh, m: usize, n: usize) -> Rational {
    let shortest = mesh
        .cells()
        .iter()
        .map(|c| c.rect.width().min(c.rect.height()))
        .min()
        .expect("a mesh has cells");
    shortest / Rational::from_int((m.max(n) + 1) as i64)
}

pub fn extend_mesh(mesh: &TMesh, m: usize, n: usize) -> Result<ExtendedMesh> {
    extend_mesh_with_step(mesh, m, n, default_step(mesh, m, n))
}

/// Copies the vertical boundary lines `m` times and the horizontal ones `n`
/// times at spacing `step` outside the domain, and prolongs every l-edge that
/// touches the boundary to the new outer boundary. The outermost copies form
/// the new boundary. Levels are kept; copies get level 0.
pub fn extend_mesh_with_step(mesh: &TMesh, m: usize, n: usize, step: Rational) -> Result<ExtendedMesh> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("extension needs m, n >= 1".into()));
    }
    if !step.is_positive() {
        return Err(Error::InvalidArgument("extension step must be positive".into()));
    }
    let d = mesh.domain();
    let mx = Rational::from_int(m as i64) * step;
    let ny = Rational::from_int(n as i64) * step;
    let (ex0, ex1) = (d.x0 - mx, d.x1 + mx);
    let (ey0, ey1) = (d.y0 - ny, d.y1 + ny);
    let outer = crate::mesh::Rect::new(ex0, ey0, ex1, ey1);
    let leveled = mesh.ledges().iter().all(|l| l.level.is_some());

    let mut segs: Vec<(Segment, usize)> = Vec::new();
    for l in mesh.ledges() {
        let level = l.level.unwrap_or(0);
        let (lo_min, hi_max, b_lo, b_hi) = match l.axis {
            Axis::Horizontal => (ex0, ex1, d.x0, d.x1),
            Axis::Vertical => (ey0, ey1, d.y0, d.y1),
        };
        let lo = if l.lo == b_lo { lo_min } else { l.lo };
        let hi = if l.hi == b_hi { hi_max } else { l.hi };
        segs.push((Segment::new(l.axis, l.coord, lo, hi), level));
    }
    for k in 1..m {
        let off = Rational::from_int(k as i64) * step;
        segs.push((Segment::vertical(d.x0 - off, ey0, ey1), 0));
        segs.push((Segment::vertical(d.x1 + off, ey0, ey1), 0));
    }
    for k in 1..n {
        let off = Rational::from_int(k as i64) * step;
        segs.push((Segment::horizontal(d.y0 - off, ex0, ex1), 0));
        segs.push((Segment::horizontal(d.y1 + off, ex0, ex1), 0));
    }
    let result = if leveled {
        TMesh::from_leveled_segments(outer, &segs)?
    } else {
        let plain: Vec<Segment> = segs.iter().map(|s| s.0).collect();
        TMesh::from_segments(outer, &plain)?
    };
    Ok(ExtendedMesh {
        base: mesh.clone(),
        m,
        n,
        step,
        result,
    })
}

/// `dim S(m, n, m-1, n-1)` over the mesh through the extended mesh: the
/// conformality rank when `m = n`, the boundary-condition oracle otherwise.
pub fn dim_via_extension(mesh: &TMesh, space: Space) -> Result<usize> {
    if space.alpha + 1 != space.m || space.beta + 1 != space.n {
        return Err(Error::UnsupportedSmoothness(
            "extension applies to maximal smoothness only".into(),
        ));
    }
    let ext = extend_mesh(mesh, space.m, space.n)?;
    match space.uniform_degree() {
        Some(d) => dim_w_hbc(&ext.result, d),
        None => dim_oracle_hbc(&ext.result, space),
    }
}

fn require_division(h: &HMesh, div: Division) -> Result<()> {
    if h.division() != div {
        return Err(Error::UnsupportedDivision(format!(
            "formula needs {div} division, mesh uses {}",
            h.division()
        )));
    }
    Ok(())
}

fn require_lines(h: &HMesh, needed: usize) -> Result<()> {
    let (xs, ys) = h.level0();
    if xs.len() < needed || ys.len() < needed {
        return Err(Error::PreconditionTooCoarse {
            needed,
            found_x: xs.len(),
            found_y: ys.len(),
        });
    }
    Ok(())
}

fn require_n_ge_2(levels: &Levels) -> Result<()> {
    let bad = levels.n_violations()?;
    if !bad.is_empty() {
        return Err(Error::NConditionViolated { count: bad.len() });
    }
    Ok(())
}

fn to_usize(v: i64) -> Result<usize> {
    usize::try_from(v).map_err(|_| Error::RegimeNotCovered(format!("formula evaluates to {v}")))
}

/// Counts and special components that enter a formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaValue {
    pub value: usize,
    pub v_plus: usize,
    pub v_b: usize,
    pub e: usize,
    pub deltas: Deltas,
}

fn extended_deltas(h: &HMesh, d: usize) -> Result<Deltas> {
    let flat = h.flatten();
    let ext = extend_mesh(&flat, d, d)?;
    Levels::new(&ext.result)?.deltas(h.division(), d)
}

/// `V⁺ - E + δ₁ + 1` for the degree-2 space with homogeneous boundary
/// conditions.
pub fn dim_s2_hbc(h: &HMesh) -> Result<FormulaValue> {
    require_division(h, Division::TwoByTwo)?;
    require_lines(h, 3)?;
    let flat = h.flatten();
    let c = flat.census();
    let deltas = Levels::new(&flat)?.deltas(Division::TwoByTwo, 2)?;
    let value = to_usize(c.v_plus as i64 - c.e as i64 + deltas.d1 as i64 + 1)?;
    Ok(FormulaValue {
        value,
        v_plus: c.v_plus,
        v_b: c.v_b,
        e: c.e,
        deltas,
    })
}

/// `2V^b + V⁺ - E + δ₁ + 1`, with δ₁ counted on the extended mesh.
pub fn dim_s2(h: &HMesh) -> Result<FormulaValue> {
    require_division(h, Division::TwoByTwo)?;
    let c = h.flatten().census();
    let deltas = extended_deltas(h, 2)?;
    let value = to_usize(2 * c.v_b as i64 + c.v_plus as i64 - c.e as i64 + deltas.d1 as i64 + 1)?;
    Ok(FormulaValue {
        value,
        v_plus: c.v_plus,
        v_b: c.v_b,
        e: c.e,
        deltas,
    })
}

/// `V⁺ - 2E + 4 + δ₄` for degree 3 with homogeneous boundary conditions,
/// valid when every refined l-edge crosses at least two coarser cells.
pub fn dim_s3_hbc(h: &HMesh) -> Result<FormulaValue> {
    require_division(h, Division::TwoByTwo)?;
    require_lines(h, 4)?;
    let flat = h.flatten();
    let levels = Levels::new(&flat)?;
    require_n_ge_2(&levels)?;
    let c = flat.census();
    let deltas = levels.deltas(Division::TwoByTwo, 3)?;
    let value = to_usize(c.v_plus as i64 - 2 * c.e as i64 + 4 + deltas.d4 as i64)?;
    Ok(FormulaValue {
        value,
        v_plus: c.v_plus,
        v_b: c.v_b,
        e: c.e,
        deltas,
    })
}

/// `3V^b + V⁺ - 2E + 4 + δ₄`, δ₄ counted on the extended mesh.
pub fn dim_s3(h: &HMesh) -> Result<FormulaValue> {
    require_division(h, Division::TwoByTwo)?;
    let flat = h.flatten();
    require_n_ge_2(&Levels::new(&flat)?)?;
    let c = flat.census();
    let deltas = extended_deltas(h, 3)?;
    let value = to_usize(3 * c.v_b as i64 + c.v_plus as i64 - 2 * c.e as i64 + 4 + deltas.d4 as i64)?;
    Ok(FormulaValue {
        value,
        v_plus: c.v_plus,
        v_b: c.v_b,
        e: c.e,
        deltas,
    })
}

fn weighted_3x3(d: &Deltas) -> i64 {
    (4 * d.d1 + 2 * d.d2 + d.d3 + d.d4) as i64
}

/// `V⁺ - 2E + 4 + 4δ₁ + 2δ₂ + δ₃ + δ₄` for 3×3 division with homogeneous
/// boundary conditions; δ₁..δ₄ count case 3, 2.a, 2.b and 2.c components.
pub fn dim_s3_3x3_hbc(h: &HMesh) -> Result<FormulaValue> {
    require_division(h, Division::ThreeByThree)?;
    require_lines(h, 4)?;
    let flat = h.flatten();
    let c = flat.census();
    let deltas = Levels::new(&flat)?.deltas(Division::ThreeByThree, 3)?;
    let value = to_usize(c.v_plus as i64 - 2 * c.e as i64 + 4 + weighted_3x3(&deltas))?;
    Ok(FormulaValue {
        value,
        v_plus: c.v_plus,
        v_b: c.v_b,
        e: c.e,
        deltas,
    })
}

/// `3V^b + V⁺ - 2E + 4 + 4δ₁ + 2δ₂ + δ₃ + δ₄`, counted on the extended mesh.
pub fn dim_s3_3x3(h: &HMesh) -> Result<FormulaValue> {
    require_division(h, Division::ThreeByThree)?;
    let c = h.flatten().census();
    let deltas = extended_deltas(h, 3)?;
    let value = to_usize(3 * c.v_b as i64 + c.v_plus as i64 - 2 * c.e as i64 + 4 + weighted_3x3(&deltas))?;
    Ok(FormulaValue {
        value,
        v_plus: c.v_plus,
        v_b: c.v_b,
        e: c.e,
        deltas,
    })
}

/// Picks the closed form matching the mesh's division and the degree.
pub fn dim_formula(h: &HMesh, d: usize, hbc: bool) -> Result<FormulaValue> {
    match (h.division(), d, hbc) {
        (Division::TwoByTwo, 2, true) => dim_s2_hbc(h),
        (Division::TwoByTwo, 2, false) => dim_s2(h),
        (Division::TwoByTwo, 3, true) => dim_s3_hbc(h),
        (Division::TwoByTwo, 3, false) => dim_s3(h),
        (Division::ThreeByThree, 3, true) => dim_s3_3x3_hbc(h),
        (Division::ThreeByThree, 3, false) => dim_s3_3x3(h),
        (div, d, _) => Err(Error::RegimeNotCovered(format!(
            "no closed form for degree {d} with {div} division"
        ))),
    }
}

/// `dim W[T_i]` for each level, the level set keeping only level-i vertices.
pub fn dim_level_decomposition(h: &HMesh, d: usize) -> Result<Vec<(usize, usize)>> {
    let flat = h.flatten();
    let levels = Levels::new(&flat)?;
    match (h.division(), d) {
        (Division::TwoByTwo, 2) | (Division::ThreeByThree, 3) => {}
        (Division::TwoByTwo, 3) => {
            let bad = levels.n_violations()?;
            if !bad.is_empty() {
                return Err(Error::RegimeNotCovered(format!(
                    "degree 3 with 2x2 division needs N(t) >= 2; {} l-edge(s) cross a single cell",
                    bad.len()
                )));
            }
        }
        (div, d) => {
            return Err(Error::RegimeNotCovered(format!(
                "level decomposition not established for degree {d} with {div} division"
            )))
        }
    }
    level_dims(&levels, d)
}

/// Per-level `dim W[T_i]` without any regime check.
pub fn level_dims(levels: &Levels, d: usize) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for i in 1..=levels.lev() {
        out.push((i, dim_w(&level_line_set(levels, i)?, d)?));
    }
    Ok(out)
}

/// `T_i`: level-i l-edges restricted to level-i vertices.
pub fn level_line_set(levels: &Levels, i: usize) -> Result<LineSet> {
    let set = levels.level_set(i)?;
    let keep: HashSet<usize> = set.vertices.iter().copied().collect();
    Ok(LineSet::from_mesh(levels.mesh(), &set.ledges, Some(&keep)))
}

/// All l-edges of level at least 1 with every vertex on them.
pub fn refined_line_set(levels: &Levels) -> LineSet {
    let ids: Vec<usize> = levels
        .mesh()
        .ledges()
        .iter()
        .filter(|l| l.is_interior() && l.level.unwrap_or(0) >= 1)
        .map(|l| l.id)
        .collect();
    LineSet::from_mesh(levels.mesh(), &ids, None)
}

/// `dim W[T]` where `T` is the union of the refined level sets, each l-edge
/// keeping every vertex on it. Compared with the per-level sum this exposes
/// meshes where the level decomposition fails.
pub fn dim_w_levels_union(h: &HMesh, d: usize) -> Result<usize> {
    let flat = h.flatten();
    let levels = Levels::new(&flat)?;
    dim_w(&refined_line_set(&levels), d)
}
