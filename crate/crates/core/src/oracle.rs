//! Brute-force spline space dimension.
//!
//! Every cell carries its own polynomial of bi-degree `(m, n)` written in a
//! local monomial basis. Smoothness across each shared segment is imposed by
//! matching derivative traces at enough sample points to pin down a
//! polynomial of the trace's degree. The dimension is the number of unknowns
//! minus the exact rank of the constraint system.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::conformality::{conformality_matrix, LineSet};
use crate::error::{Error, Result};
use crate::linalg::{integer_row, rank_rational_gauss, SparseEchelon, SparseRow};
use crate::mesh::{Axis, Rect, TMesh};
use crate::rational::Rational;

/// Bi-degree and smoothness orders of a spline space `S(m, n, α, β)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Space {
    pub m: usize,
    pub n: usize,
    pub alpha: usize,
    pub beta: usize,
}

impl Space {
    /// `S(d, d, d-1, d-1)`.
    pub fn degree(d: usize) -> Space {
        assert!(d >= 1, "degree must be positive");
        Space {
            m: d,
            n: d,
            alpha: d - 1,
            beta: d - 1,
        }
    }

    /// The common degree when `m = n` and the smoothness is maximal.
    pub fn uniform_degree(&self) -> Option<usize> {
        (self.m == self.n && self.alpha + 1 == self.m && self.beta + 1 == self.n).then_some(self.m)
    }
}

/// Where each cell's local coordinates live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parameterization {
    /// The cell maps to `[0, 1]²`.
    #[default]
    Unit,
    /// The cell maps to `[-1, 1]²`.
    Centered,
}

/// Which interior points of a segment are used to compare traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Samples {
    /// `a + (b - a) j / (k + 1)` for `j = 1..k`.
    #[default]
    Even,
    /// `a + (b - a) (2j - 1) / (2k + 2)` for `j = 1..k`, disjoint from `Even`.
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    pub parameterization: Parameterization,
    pub samples: Samples,
    /// Refuse systems with more unknowns than this.
    pub max_unknowns: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            parameterization: Parameterization::Unit,
            samples: Samples::Even,
            max_unknowns: 12_000,
        }
    }
}

/// `dim S(m, n, α, β)` over the mesh.
pub fn dim_oracle(mesh: &TMesh, space: Space) -> Result<usize> {
    dim_oracle_with(mesh, space, false, OracleOptions::default())
}

/// Dimension of the subspace whose elements extend by zero outside the domain
/// with the same smoothness.
pub fn dim_oracle_hbc(mesh: &TMesh, space: Space) -> Result<usize> {
    dim_oracle_with(mesh, space, true, OracleOptions::default())
}

pub fn dim_oracle_with(mesh: &TMesh, space: Space, hbc: bool, opts: OracleOptions) -> Result<usize> {
    if space.alpha >= space.m || space.beta >= space.n {
        return Err(Error::UnsupportedSmoothness(format!(
            "need alpha < m and beta < n, got S({}, {}, {}, {})",
            space.m, space.n, space.alpha, space.beta
        )));
    }
    let per_cell = (space.m + 1) * (space.n + 1);
    let unknowns = per_cell * mesh.cells().len();
    if unknowns > opts.max_unknowns {
        return Err(Error::TooLarge {
            unknowns,
            limit: opts.max_unknowns,
        });
    }
    let system = GlobalSystem::new(mesh, space, opts);
    let mut ech = SparseEchelon::new();
    for seg in shared_segments(mesh, Axis::Vertical)
        .into_iter()
        .chain(shared_segments(mesh, Axis::Horizontal))
    {
        if !hbc && (seg.first.is_none() || seg.second.is_none()) {
            continue;
        }
        for row in system.rows(&seg) {
            ech.add_row(row);
        }
    }
    Ok(unknowns - ech.rank())
}

/// `dim W` of a line set from the raw-coordinate conformality matrix and
/// plain rational Gaussian elimination, sharing no code path with the
/// normalized block elimination used elsewhere.
pub fn dim_oracle_w(set: &LineSet, d: usize) -> Result<usize> {
    let matrix = conformality_matrix(set, d)?;
    Ok(matrix.columns.len() - rank_rational_gauss(&matrix.rows))
}

/// A maximal piece of a grid line along which the same two cells meet. For a
/// vertical line `first` is the cell on the left and `second` the one on the
/// right; for a horizontal line `first` is below and `second` above. `None`
/// marks the outside of the domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharedSegment {
    pub axis: Axis,
    pub coord: Rational,
    pub lo: Rational,
    pub hi: Rational,
    pub first: Option<usize>,
    pub second: Option<usize>,
}

/// All shared segments on lines of the given orientation, including the
/// pieces of the domain boundary (one side `None`).
pub fn shared_segments(mesh: &TMesh, axis: Axis) -> Vec<SharedSegment> {
    // line coordinate -> list of (lo, hi, cell, is_first_side)
    let mut lines: BTreeMap<Rational, Vec<(Rational, Rational, usize, bool)>> = BTreeMap::new();
    for c in mesh.cells() {
        let r = c.rect;
        match axis {
            Axis::Vertical => {
                lines.entry(r.x1).or_default().push((r.y0, r.y1, c.id, true));
                lines.entry(r.x0).or_default().push((r.y0, r.y1, c.id, false));
            }
            Axis::Horizontal => {
                lines.entry(r.y1).or_default().push((r.x0, r.x1, c.id, true));
                lines.entry(r.y0).or_default().push((r.x0, r.x1, c.id, false));
            }
        }
    }
    let mut out = Vec::new();
    for (coord, spans) in lines {
        let mut breaks: Vec<Rational> = spans.iter().flat_map(|s| [s.0, s.1]).collect();
        breaks.sort();
        breaks.dedup();
        let mut current: Option<SharedSegment> = None;
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let owner = |first: bool| {
                spans
                    .iter()
                    .find(|s| s.3 == first && s.0 <= a && b <= s.1)
                    .map(|s| s.2)
            };
            let (f, s) = (owner(true), owner(false));
            if f.is_none() && s.is_none() {
                if let Some(seg) = current.take() {
                    out.push(seg);
                }
                continue;
            }
            match &mut current {
                Some(seg) if seg.first == f && seg.second == s && seg.hi == a => seg.hi = b,
                _ => {
                    if let Some(seg) = current.take() {
                        out.push(seg);
                    }
                    current = Some(SharedSegment {
                        axis,
                        coord,
                        lo: a,
                        hi: b,
                        first: f,
                        second: s,
                    });
                }
            }
        }
        if let Some(seg) = current.take() {
            out.push(seg);
        }
    }
    out
}

struct GlobalSystem<'a> {
    mesh: &'a TMesh,
    space: Space,
    opts: OracleOptions,
}

impl<'a> GlobalSystem<'a> {
    fn new(mesh: &'a TMesh, space: Space, opts: OracleOptions) -> Self {
        GlobalSystem { mesh, space, opts }
    }

    fn column(&self, cell: usize, i: usize, j: usize) -> usize {
        cell * (self.space.m + 1) * (self.space.n + 1) + i * (self.space.n + 1) + j
    }

    /// Local coordinate of a global one, and the derivative factor of the map.
    fn local(&self, lo: Rational, hi: Rational, t: Rational) -> (BigRational, BigRational) {
        let w = (hi - lo).to_big();
        match self.opts.parameterization {
            Parameterization::Unit => ((t - lo).to_big() / &w, w.recip()),
            Parameterization::Centered => {
                let two = BigRational::from_integer(2.into());
                (((t + t) - lo - hi).to_big() / &w, two / w)
            }
        }
    }

    fn sample_points(&self, lo: Rational, hi: Rational, count: usize) -> Vec<Rational> {
        let k = count as i64;
        (1..=k)
            .map(|j| {
                let t = match self.opts.samples {
                    Samples::Even => Rational::new(j, k + 1),
                    Samples::Odd => Rational::new(2 * j - 1, 2 * k + 2),
                };
                lo + (hi - lo) * t
            })
            .collect()
    }

    /// Coefficients of the `order`-th normal derivative trace of `cell` at a
    /// point of the segment, as a sparse rational row.
    fn trace(
        &self,
        cell: usize,
        axis: Axis,
        coord: Rational,
        along: Rational,
        order: usize,
        sign: i64,
        out: &mut Vec<(usize, BigRational)>,
    ) {
        let r: Rect = self.mesh.cells()[cell].rect;
        let (m, n) = (self.space.m, self.space.n);
        // For a vertical line the normal direction is x (exponent i), the
        // trace runs along y (exponent j); swapped for a horizontal line.
        let ((u, du), (v, _)) = match axis {
            Axis::Vertical => (self.local(r.x0, r.x1, coord), self.local(r.y0, r.y1, along)),
            Axis::Horizontal => (self.local(r.y0, r.y1, coord), self.local(r.x0, r.x1, along)),
        };
        let (normal_deg, tangent_deg) = match axis {
            Axis::Vertical => (m, n),
            Axis::Horizontal => (n, m),
        };
        let scale = pow(&du, order) * BigRational::from_integer(sign.into());
        let mut vpow = Vec::with_capacity(tangent_deg + 1);
        let mut acc = BigRational::one();
        for _ in 0..=tangent_deg {
            vpow.push(acc.clone());
            acc = &acc * &v;
        }
        for p in order..=normal_deg {
            let falling: i64 = ((p - order + 1)..=p).map(|t| t as i64).product();
            let base = &scale * pow(&u, p - order) * BigRational::from_integer(falling.into());
            if base.is_zero() {
                continue;
            }
            for (q, vq) in vpow.iter().enumerate() {
                let val = &base * vq;
                if val.is_zero() {
                    continue;
                }
                let col = match axis {
                    Axis::Vertical => self.column(cell, p, q),
                    Axis::Horizontal => self.column(cell, q, p),
                };
                out.push((col, val));
            }
        }
    }

    fn rows(&self, seg: &SharedSegment) -> Vec<SparseRow> {
        let (orders, tangent_deg) = match seg.axis {
            Axis::Vertical => (self.space.alpha, self.space.n),
            Axis::Horizontal => (self.space.beta, self.space.m),
        };
        let mut rows = Vec::new();
        for along in self.sample_points(seg.lo, seg.hi, tangent_deg + 1) {
            for order in 0..=orders {
                let mut entries: Vec<(usize, BigRational)> = Vec::new();
                if let Some(c) = seg.first {
                    self.trace(c, seg.axis, seg.coord, along, order, 1, &mut entries);
                }
                if let Some(c) = seg.second {
                    self.trace(c, seg.axis, seg.coord, along, order, -1, &mut entries);
                }
                rows.push(to_integer_sparse(entries));
            }
        }
        rows
    }
}

fn pow(b: &BigRational, e: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc = &acc * b;
    }
    acc
}

fn to_integer_sparse(mut entries: Vec<(usize, BigRational)>) -> SparseRow {
    entries.sort_by_key(|e| e.0);
    let values: Vec<BigRational> = entries.iter().map(|e| e.1.clone()).collect();
    let ints: Vec<BigInt> = integer_row(&values);
    entries
        .into_iter()
        .zip(ints)
        .filter(|(_, v)| !v.is_zero())
        .map(|((c, _), v)| (c, v))
        .collect()
}
