//! Conformality systems of vertex cofactors.
//!
//! Along an l-edge with vertices at free coordinates `x_1 < … < x_r`, the
//! cofactors `γ_i` of a spline of degree `d` satisfy `Σ γ_i x_i^k = 0` for
//! `k = 0..d`. Stacking these systems over a set of l-edges gives the
//! conformality matrix; its kernel is the conformality space `W`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{integer_row, rank_bareiss};
use crate::mesh::{Axis, LEdgeKind, TMesh, UnionFind};
use crate::rational::Rational;

/// One l-edge seen as a list of vertices on a line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Line {
    pub id: usize,
    pub level: usize,
    pub axis: Axis,
    pub coord: Rational,
    /// `(vertex id, free-axis coordinate)`, ordered along the line.
    pub vertices: Vec<(usize, Rational)>,
}

impl Line {
    pub fn coords(&self) -> Vec<Rational> {
        self.vertices.iter().map(|v| v.1).collect()
    }
}

/// A set of l-edges sharing one vertex numbering.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LineSet {
    pub lines: Vec<Line>,
}

impl LineSet {
    pub fn new(lines: Vec<Line>) -> Self {
        LineSet { lines }
    }

    /// The given l-edges of the mesh, keeping only vertices accepted by
    /// `keep` (all vertices when `None`).
    pub fn from_mesh(mesh: &TMesh, ledges: &[usize], keep: Option<&HashSet<usize>>) -> LineSet {
        let lines = ledges
            .iter()
            .map(|&id| {
                let l = &mesh.ledges()[id];
                Line {
                    id,
                    level: l.level.unwrap_or(0),
                    axis: l.axis,
                    coord: l.coord,
                    vertices: l
                        .vertices
                        .iter()
                        .filter(|v| keep.is_none_or(|k| k.contains(v)))
                        .map(|&v| (v, mesh.free_coord(v, l.axis)))
                        .collect(),
                }
            })
            .collect();
        LineSet { lines }
    }

    /// All l-edges of the mesh with a kind in `kinds`, full vertex lists.
    pub fn of_kinds(mesh: &TMesh, kinds: &[LEdgeKind]) -> LineSet {
        let ids: Vec<usize> = mesh
            .ledges()
            .iter()
            .filter(|l| kinds.contains(&l.kind))
            .map(|l| l.id)
            .collect();
        LineSet::from_mesh(mesh, &ids, None)
    }

    /// Sorted distinct vertex ids on the lines.
    pub fn vertex_ids(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .lines
            .iter()
            .flat_map(|l| l.vertices.iter().map(|v| v.0))
            .collect();
        set.into_iter().collect()
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn union(&self, other: &LineSet) -> LineSet {
        let mut lines = self.lines.clone();
        lines.extend(other.lines.iter().cloned());
        LineSet { lines }
    }

    /// Splits into groups of lines connected through shared vertices.
    pub fn blocks(&self) -> Vec<LineSet> {
        let mut uf = UnionFind::new(self.lines.len());
        let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, l) in self.lines.iter().enumerate() {
            for &(v, _) in &l.vertices {
                if let Some(&j) = owner.get(&v) {
                    uf.union(i, j);
                } else {
                    owner.insert(v, i);
                }
            }
        }
        uf.groups()
            .into_iter()
            .map(|g| LineSet {
                lines: g.into_iter().map(|i| self.lines[i].clone()).collect(),
            })
            .collect()
    }
}

/// The `(d+1) × r` system of one l-edge: row `k` holds `x_i^k`.
pub fn ledge_system(coords: &[Rational], d: usize) -> Result<Vec<Vec<BigRational>>> {
    check_distinct(coords)?;
    let xs: Vec<BigRational> = coords.iter().map(|c| c.to_big()).collect();
    let mut rows = Vec::with_capacity(d + 1);
    let mut current: Vec<BigRational> = vec![BigRational::one(); xs.len()];
    for _ in 0..=d {
        rows.push(current.clone());
        current = current.iter().zip(&xs).map(|(a, x)| a * x).collect();
    }
    Ok(rows)
}

fn check_distinct(coords: &[Rational]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for c in coords {
        if !seen.insert(*c) {
            return Err(Error::DuplicateCoordinate(*c));
        }
    }
    Ok(())
}

/// Stacked per-l-edge systems over a common vertex numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformalityMatrix {
    pub degree: usize,
    /// Column `c` belongs to vertex `columns[c]`.
    pub columns: Vec<usize>,
    /// Row `r` is power `row_labels[r].1` of l-edge `row_labels[r].0`.
    pub row_labels: Vec<(usize, usize)>,
    pub rows: Vec<Vec<BigRational>>,
}

impl ConformalityMatrix {
    pub fn rank(&self) -> usize {
        let ints: Vec<Vec<BigInt>> = self.rows.iter().map(|r| integer_row(r)).collect();
        rank_bareiss(&ints)
    }

    pub fn dim_kernel(&self) -> usize {
        self.columns.len() - self.rank()
    }

    /// CSV with a header naming vertex columns and one labelled row per power.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row");
        for v in &self.columns {
            let _ = write!(out, ",v{v}");
        }
        out.push('\n');
        for ((l, k), row) in self.row_labels.iter().zip(&self.rows) {
            let _ = write!(out, "l{l}^{k}");
            for q in row {
                if q.denom().is_one() {
                    let _ = write!(out, ",{}", q.numer());
                } else {
                    let _ = write!(out, ",{}/{}", q.numer(), q.denom());
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Conformality matrix in raw coordinates. Row blocks follow (level, id);
/// columns follow vertex id.
pub fn conformality_matrix(set: &LineSet, d: usize) -> Result<ConformalityMatrix> {
    let columns = set.vertex_ids();
    let index: BTreeMap<usize, usize> = columns.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut order: Vec<&Line> = set.lines.iter().collect();
    order.sort_by_key(|l| (l.level, l.id));
    let mut rows = Vec::new();
    let mut row_labels = Vec::new();
    for line in order {
        let block = ledge_system(&line.coords(), d)?;
        for (k, vals) in block.into_iter().enumerate() {
            let mut row = vec![BigRational::zero(); columns.len()];
            for (&(v, _), val) in line.vertices.iter().zip(vals) {
                row[index[&v]] = val;
            }
            rows.push(row);
            row_labels.push((line.id, k));
        }
    }
    Ok(ConformalityMatrix {
        degree: d,
        columns,
        row_labels,
        rows,
    })
}

/// Integer powers of the coordinates after the affine change
/// `x -> (x - x_first) / g` that makes them coprime integers. The row space
/// equals that of the raw system.
fn normalized_block(coords: &[Rational], d: usize) -> Vec<Vec<BigInt>> {
    let base = coords[0];
    let shifted: Vec<Rational> = coords.iter().map(|&c| c - base).collect();
    let mut lcm = BigInt::one();
    for s in &shifted {
        lcm = lcm.lcm(&BigInt::from(s.denom()));
    }
    let mut ints: Vec<BigInt> = shifted
        .iter()
        .map(|s| BigInt::from(s.numer()) * (&lcm / BigInt::from(s.denom())))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in &mut ints {
            *v /= &g;
        }
    }
    let mut rows = Vec::with_capacity(d + 1);
    let mut current = vec![BigInt::one(); ints.len()];
    for _ in 0..=d {
        rows.push(current.clone());
        current = current.iter().zip(&ints).map(|(a, x)| a * x).collect();
    }
    rows
}

/// `dim W[L]`, computed block by block with fraction-free elimination.
pub fn dim_w(set: &LineSet, d: usize) -> Result<usize> {
    let mut total = 0;
    for block in set.blocks() {
        total += dim_w_block(&block, d)?;
    }
    Ok(total)
}

/// Rank of the conformality matrix of the set.
pub fn rank_w(set: &LineSet, d: usize) -> Result<usize> {
    let mut total = 0;
    for block in set.blocks() {
        let cols = block.vertex_ids().len();
        total += cols - dim_w_block(&block, d)?;
    }
    Ok(total)
}

fn dim_w_block(set: &LineSet, d: usize) -> Result<usize> {
    let columns = set.vertex_ids();
    let index: BTreeMap<usize, usize> = columns.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for line in &set.lines {
        let coords = line.coords();
        check_distinct(&coords)?;
        if coords.is_empty() {
            continue;
        }
        // Only min(d+1, r) rows of a Vandermonde block can be independent.
        for vals in normalized_block(&coords, d).into_iter().take(coords.len()) {
            let mut row = vec![BigInt::zero(); columns.len()];
            for (&(v, _), val) in line.vertices.iter().zip(vals) {
                row[index[&v]] = val;
            }
            rows.push(row);
        }
    }
    Ok(columns.len() - rank_bareiss(&rows))
}

/// Nullspace vector of an l-edge with exactly `d + 2` vertices, scaled so
/// that entry `pivot` equals `gamma`.
pub fn propagate_order1(coords: &[Rational], d: usize, pivot: usize, gamma: Rational) -> Result<Vec<Rational>> {
    if coords.len() != d + 2 {
        return Err(Error::InvalidArgument(format!(
            "an order-one l-edge of degree {d} has {} vertices, got {}",
            d + 2,
            coords.len()
        )));
    }
    if pivot >= coords.len() {
        return Err(Error::InvalidArgument(format!("pivot {pivot} out of range")));
    }
    let weight = |j: usize| -> Result<Rational> {
        let mut prod = Rational::ONE;
        for (l, &c) in coords.iter().enumerate() {
            if l != j {
                let diff = coords[j] - c;
                if diff.is_zero() {
                    return Err(Error::DegenerateDistances(format!(
                        "vertices {j} and {l} coincide at {c}"
                    )));
                }
                prod = prod * diff;
            }
        }
        Ok(prod)
    };
    let wp = weight(pivot)?;
    let mut out = Vec::with_capacity(coords.len());
    for j in 0..coords.len() {
        out.push(gamma * wp / weight(j)?);
    }
    Ok(out)
}

/// Exact residual of a cofactor assignment against one l-edge system.
pub fn residual(coords: &[Rational], d: usize, gamma: &[Rational]) -> Result<Vec<BigRational>> {
    let sys = ledge_system(coords, d)?;
    Ok(sys
        .iter()
        .map(|row| {
            row.iter()
                .zip(gamma)
                .fold(BigRational::zero(), |acc, (a, g)| acc + a * g.to_big())
        })
        .collect())
}

/// An order in which every l-edge brings at least `d + 1` vertices not seen
/// on earlier ones, or `None` when no such order exists.
///
/// Works backwards: an l-edge can go last when `d + 1` of its vertices lie on
/// no other remaining l-edge. Removing l-edges never takes such vertices
/// away, so peeling greedily finds an order whenever one exists.
pub fn find_reasonable_order(set: &LineSet, d: usize) -> Option<Vec<usize>> {
    let n = set.lines.len();
    let mut remaining: Vec<bool> = vec![true; n];
    let mut multiplicity: BTreeMap<usize, usize> = BTreeMap::new();
    for l in &set.lines {
        for &(v, _) in &l.vertices {
            *multiplicity.entry(v).or_default() += 1;
        }
    }
    let mut peeled = Vec::with_capacity(n);
    while peeled.len() < n {
        let next = (0..n).find(|&i| {
            remaining[i]
                && set.lines[i]
                    .vertices
                    .iter()
                    .filter(|(v, _)| multiplicity[v] == 1)
                    .count()
                    >= d + 1
        })?;
        remaining[next] = false;
        for &(v, _) in &set.lines[next].vertices {
            *multiplicity.get_mut(&v).unwrap() -= 1;
        }
        peeled.push(set.lines[next].id);
    }
    peeled.reverse();
    Some(peeled)
}

/// Checks the defining property of a reasonable order directly.
pub fn is_reasonable_order(set: &LineSet, order: &[usize], d: usize) -> bool {
    let mut seen: HashSet<usize> = HashSet::new();
    for id in order {
        let Some(line) = set.lines.iter().find(|l| l.id == *id) else {
            return false;
        };
        let fresh = line.vertices.iter().filter(|(v, _)| !seen.contains(v)).count();
        if fresh < d + 1 {
            return false;
        }
        seen.extend(line.vertices.iter().map(|v| v.0));
    }
    order.len() == set.lines.len()
}

/// Dimension of the degree-`d` spline space over the mesh from the cofactor
/// count `(d+1)² + n_c (d+1) + n_v - rank M`, with `M` built from the T
/// l-edges.
pub fn dim_spline_cofactor(mesh: &TMesh, d: usize) -> Result<usize> {
    let census = mesh.census();
    let set = LineSet::of_kinds(mesh, &[LEdgeKind::TLedge]);
    let rank = rank_w(&set, d)?;
    let total = (d + 1) * (d + 1) + census.n_c * (d + 1) + census.n_v;
    Ok(total - rank)
}

/// Dimension of the space with homogeneous boundary conditions, as the
/// conformality space of every l-edge over every vertex.
pub fn dim_w_hbc(mesh: &TMesh, d: usize) -> Result<usize> {
    let set = LineSet::of_kinds(
        mesh,
        &[
            LEdgeKind::Boundary,
            LEdgeKind::CrossCut,
            LEdgeKind::Ray,
            LEdgeKind::TLedge,
        ],
    );
    dim_w(&set, d)
}
