//! Regular T-meshes with exact coordinates.
//!
//! A [`TMesh`] is always built from geometry (a list of cells, or a list of
//! line segments) and re-derives every incidence relation itself: vertices,
//! edges, their classification and the maximal line segments (l-edges).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Horizontal,
    Vertical,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::Horizontal => 0,
            Axis::Vertical => 1,
        }
    }

    pub fn other(self) -> Axis {
        match self {
            Axis::Horizontal => Axis::Vertical,
            Axis::Vertical => Axis::Horizontal,
        }
    }
}

/// Axis-aligned closed rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rect {
    pub x0: Rational,
    pub y0: Rational,
    pub x1: Rational,
    pub y1: Rational,
}

impl Rect {
    pub fn new(x0: Rational, y0: Rational, x1: Rational, y1: Rational) -> Self {
        Rect { x0, y0, x1, y1 }
    }

    pub fn width(&self) -> Rational {
        self.x1 - self.x0
    }

    pub fn height(&self) -> Rational {
        self.y1 - self.y0
    }

    pub fn area(&self) -> Rational {
        self.width() * self.height()
    }

    pub fn interiors_intersect(&self, o: &Rect) -> bool {
        self.x0 < o.x1 && o.x0 < self.x1 && self.y0 < o.y1 && o.y0 < self.y1
    }

    pub fn contains_rect(&self, o: &Rect) -> bool {
        self.x0 <= o.x0 && o.x1 <= self.x1 && self.y0 <= o.y0 && o.y1 <= self.y1
    }

    pub fn on_boundary(&self, x: Rational, y: Rational) -> bool {
        let in_x = self.x0 <= x && x <= self.x1;
        let in_y = self.y0 <= y && y <= self.y1;
        (in_x && (y == self.y0 || y == self.y1)) || (in_y && (x == self.x0 || x == self.x1))
    }

    pub fn corners(&self) -> [(Rational, Rational); 4] {
        [
            (self.x0, self.y0),
            (self.x1, self.y0),
            (self.x0, self.y1),
            (self.x1, self.y1),
        ]
    }

    /// Does the open segment cross the open rectangle?
    pub fn crossed_by(&self, seg: &Segment) -> bool {
        match seg.axis {
            Axis::Horizontal => {
                self.y0 < seg.coord && seg.coord < self.y1 && seg.lo < self.x1 && self.x0 < seg.hi
            }
            Axis::Vertical => {
                self.x0 < seg.coord && seg.coord < self.x1 && seg.lo < self.y1 && self.y0 < seg.hi
            }
        }
    }

    pub fn to_array(&self) -> [Rational; 4] {
        [self.x0, self.y0, self.x1, self.y1]
    }

    pub fn from_array(a: [Rational; 4]) -> Self {
        Rect::new(a[0], a[1], a[2], a[3])
    }

    pub fn map(&self, f: impl Fn(Rational, Rational) -> (Rational, Rational)) -> Rect {
        let (a, b) = f(self.x0, self.y0);
        let (c, d) = f(self.x1, self.y1);
        Rect::new(a.min(c), b.min(d), a.max(c), b.max(d))
    }
}

/// A closed axis-aligned segment on the line `coord` (y for horizontal, x for
/// vertical) spanning `[lo, hi]` along the free axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub axis: Axis,
    pub coord: Rational,
    pub lo: Rational,
    pub hi: Rational,
}

impl Segment {
    pub fn new(axis: Axis, coord: Rational, lo: Rational, hi: Rational) -> Self {
        Segment {
            axis,
            coord,
            lo: lo.min(hi),
            hi: lo.max(hi),
        }
    }

    pub fn horizontal(y: Rational, x0: Rational, x1: Rational) -> Self {
        Segment::new(Axis::Horizontal, y, x0, x1)
    }

    pub fn vertical(x: Rational, y0: Rational, y1: Rational) -> Self {
        Segment::new(Axis::Vertical, x, y0, y1)
    }

    pub fn contains_point(&self, x: Rational, y: Rational) -> bool {
        match self.axis {
            Axis::Horizontal => y == self.coord && self.lo <= x && x <= self.hi,
            Axis::Vertical => x == self.coord && self.lo <= y && y <= self.hi,
        }
    }

    /// Closed-segment intersection; touching at an endpoint counts.
    pub fn intersects(&self, o: &Segment) -> bool {
        if self.axis == o.axis {
            self.coord == o.coord && self.lo <= o.hi && o.lo <= self.hi
        } else {
            o.lo <= self.coord && self.coord <= o.hi && self.lo <= o.coord && o.coord <= self.hi
        }
    }

    /// Positive-length overlap with a collinear segment.
    pub fn overlaps(&self, o: &Segment) -> bool {
        self.axis == o.axis && self.coord == o.coord && self.lo < o.hi && o.lo < self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub x: Rational,
    pub y: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: usize,
    pub a: usize,
    pub b: usize,
    pub axis: Axis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub id: usize,
    pub rect: Rect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VertexClass {
    Boundary,
    InteriorTJunction,
    InteriorCrossing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LEdgeKind {
    Boundary,
    CrossCut,
    Ray,
    TLedge,
}

/// A maximal straight run of mesh edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LEdge {
    pub id: usize,
    pub axis: Axis,
    pub coord: Rational,
    pub lo: Rational,
    pub hi: Rational,
    /// Vertex ids ordered along the free axis, endpoint to endpoint.
    pub vertices: Vec<usize>,
    pub kind: LEdgeKind,
    pub level: Option<usize>,
}

impl LEdge {
    pub fn segment(&self) -> Segment {
        Segment::new(self.axis, self.coord, self.lo, self.hi)
    }

    pub fn is_interior(&self) -> bool {
        self.kind != LEdgeKind::Boundary
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Census {
    /// Total vertex count.
    pub v: usize,
    /// Interior crossing vertices.
    pub v_plus: usize,
    /// Boundary vertices.
    pub v_b: usize,
    /// Interior l-edges.
    pub e: usize,
    pub n_c: usize,
    pub n_v: usize,
    pub t_junctions: usize,
    pub boundary_ledges: usize,
    pub cross_cuts: usize,
    pub rays: usize,
    pub t_ledges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TMesh {
    domain: Rect,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    cells: Vec<Cell>,
    classes: Vec<VertexClass>,
    ledges: Vec<LEdge>,
    vertex_ledges: Vec<[Option<usize>; 2]>,
    lookup: HashMap<(Rational, Rational), usize>,
}

/// Disjoint union of closed intervals, kept sorted and merged.
#[derive(Debug, Default, Clone)]
pub(crate) struct IntervalUnion {
    spans: Vec<(Rational, Rational)>,
}

impl IntervalUnion {
    pub(crate) fn from_spans(mut spans: Vec<(Rational, Rational)>) -> Self {
        spans.sort();
        let mut merged: Vec<(Rational, Rational)> = Vec::new();
        for (a, b) in spans {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        IntervalUnion { spans: merged }
    }

    pub(crate) fn covers(&self, a: Rational, b: Rational) -> bool {
        let idx = self.spans.partition_point(|s| s.0 <= a);
        idx > 0 && self.spans[idx - 1].1 >= b
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Groups of indices, each sorted, ordered by their smallest member.
    pub(crate) fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = self.find(i);
            by_root.entry(r).or_default().push(i);
        }
        by_root.into_values().collect()
    }
}

impl TMesh {
    /// Tensor-product mesh from sorted grid lines.
    pub fn tensor(xs: &[Rational], ys: &[Rational]) -> Result<TMesh> {
        let xs = strictly_increasing(xs, "x grid lines")?;
        let ys = strictly_increasing(ys, "y grid lines")?;
        let mut cells = Vec::new();
        for wy in ys.windows(2) {
            for wx in xs.windows(2) {
                cells.push(Rect::new(wx[0], wy[0], wx[1], wy[1]));
            }
        }
        let domain = Rect::new(xs[0], ys[0], *xs.last().unwrap(), *ys.last().unwrap());
        TMesh::from_cells(domain, cells)
    }

    /// Builds and validates a mesh from its cells.
    pub fn from_cells(domain: Rect, cells: Vec<Rect>) -> Result<TMesh> {
        Self::build(domain, cells, &[], false)
    }

    /// Builds the mesh whose edges are exactly the given segments together
    /// with the domain boundary. Segments must end on other segments.
    pub fn from_segments(domain: Rect, segments: &[Segment]) -> Result<TMesh> {
        let leveled: Vec<(Segment, usize)> = segments.iter().map(|s| (*s, 0)).collect();
        Self::segments_to_mesh(domain, &leveled, false)
    }

    /// Like [`TMesh::from_segments`], additionally tagging every l-edge with
    /// the smallest level among the input segments lying on it. Boundary
    /// l-edges get level 0.
    pub fn from_leveled_segments(domain: Rect, segments: &[(Segment, usize)]) -> Result<TMesh> {
        Self::segments_to_mesh(domain, segments, true)
    }

    fn segments_to_mesh(
        domain: Rect,
        segments: &[(Segment, usize)],
        with_levels: bool,
    ) -> Result<TMesh> {
        if domain.width() <= Rational::ZERO || domain.height() <= Rational::ZERO {
            return Err(Error::Degenerate("domain has zero area".into()));
        }
        for (s, _) in segments {
            let inside = match s.axis {
                Axis::Horizontal => {
                    domain.y0 <= s.coord && s.coord <= domain.y1 && domain.x0 <= s.lo && s.hi <= domain.x1
                }
                Axis::Vertical => {
                    domain.x0 <= s.coord && s.coord <= domain.x1 && domain.y0 <= s.lo && s.hi <= domain.y1
                }
            };
            if !inside {
                return Err(Error::NotRegular(format!("segment {s:?} leaves the domain")));
            }
            if s.lo == s.hi {
                return Err(Error::Degenerate(format!("segment {s:?} has zero length")));
            }
        }
        let mut all: Vec<Segment> = segments.iter().map(|(s, _)| *s).collect();
        all.push(Segment::horizontal(domain.y0, domain.x0, domain.x1));
        all.push(Segment::horizontal(domain.y1, domain.x0, domain.x1));
        all.push(Segment::vertical(domain.x0, domain.y0, domain.y1));
        all.push(Segment::vertical(domain.x1, domain.y0, domain.y1));

        let mut xs: BTreeSet<Rational> = BTreeSet::new();
        let mut ys: BTreeSet<Rational> = BTreeSet::new();
        let mut h_lines: BTreeMap<Rational, Vec<(Rational, Rational)>> = BTreeMap::new();
        let mut v_lines: BTreeMap<Rational, Vec<(Rational, Rational)>> = BTreeMap::new();
        for s in &all {
            match s.axis {
                Axis::Horizontal => {
                    ys.insert(s.coord);
                    xs.insert(s.lo);
                    xs.insert(s.hi);
                    h_lines.entry(s.coord).or_default().push((s.lo, s.hi));
                }
                Axis::Vertical => {
                    xs.insert(s.coord);
                    ys.insert(s.lo);
                    ys.insert(s.hi);
                    v_lines.entry(s.coord).or_default().push((s.lo, s.hi));
                }
            }
        }
        let xs: Vec<Rational> = xs.into_iter().collect();
        let ys: Vec<Rational> = ys.into_iter().collect();
        let h_cover: BTreeMap<Rational, IntervalUnion> = h_lines
            .into_iter()
            .map(|(k, v)| (k, IntervalUnion::from_spans(v)))
            .collect();
        let v_cover: BTreeMap<Rational, IntervalUnion> = v_lines
            .into_iter()
            .map(|(k, v)| (k, IntervalUnion::from_spans(v)))
            .collect();
        let covered = |map: &BTreeMap<Rational, IntervalUnion>, c: Rational, a: Rational, b: Rational| {
            map.get(&c).is_some_and(|u| u.covers(a, b))
        };

        let nx = xs.len() - 1;
        let ny = ys.len() - 1;
        let idx = |i: usize, j: usize| j * nx + i;
        let mut uf = UnionFind::new(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                if i + 1 < nx && !covered(&v_cover, xs[i + 1], ys[j], ys[j + 1]) {
                    uf.union(idx(i, j), idx(i + 1, j));
                }
                if j + 1 < ny && !covered(&h_cover, ys[j + 1], xs[i], xs[i + 1]) {
                    uf.union(idx(i, j), idx(i, j + 1));
                }
            }
        }
        let mut cells = Vec::new();
        for group in uf.groups() {
            let mut area = Rational::ZERO;
            let (mut x0, mut y0) = (xs[nx], ys[ny]);
            let (mut x1, mut y1) = (xs[0], ys[0]);
            for k in &group {
                let (i, j) = (k % nx, k / nx);
                area = area + (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
                x0 = x0.min(xs[i]);
                y0 = y0.min(ys[j]);
                x1 = x1.max(xs[i + 1]);
                y1 = y1.max(ys[j + 1]);
            }
            let rect = Rect::new(x0, y0, x1, y1);
            if rect.area() != area {
                return Err(Error::NotRegular(format!(
                    "segments enclose a non-rectangular face with bounding box {:?}",
                    rect.to_array()
                )));
            }
            cells.push(rect);
        }
        Self::build(domain, cells, segments, with_levels)
    }

    fn build(
        domain: Rect,
        cells: Vec<Rect>,
        leveled: &[(Segment, usize)],
        with_levels: bool,
    ) -> Result<TMesh> {
        if domain.width() <= Rational::ZERO || domain.height() <= Rational::ZERO {
            return Err(Error::Degenerate("domain has zero area".into()));
        }
        if cells.is_empty() {
            return Err(Error::NotRegular("no cells".into()));
        }
        let mut total = Rational::ZERO;
        for c in &cells {
            if c.width() <= Rational::ZERO || c.height() <= Rational::ZERO {
                return Err(Error::Degenerate(format!("cell {:?} has zero area", c.to_array())));
            }
            if !domain.contains_rect(c) {
                return Err(Error::NotRegular(format!(
                    "cell {:?} lies outside the domain",
                    c.to_array()
                )));
            }
            total = total + c.area();
        }
        let mut sorted = cells;
        sorted.sort_by(|a, b| (a.y0, a.x0, a.y1, a.x1).cmp(&(b.y0, b.x0, b.y1, b.x1)));
        check_overlaps(&sorted)?;
        if total != domain.area() {
            return Err(Error::NotRegular(format!(
                "cells cover area {total}, domain area is {}",
                domain.area()
            )));
        }
        let cells: Vec<Cell> = sorted
            .into_iter()
            .enumerate()
            .map(|(id, rect)| Cell { id, rect })
            .collect();

        let mut points: BTreeSet<(Rational, Rational)> = BTreeSet::new();
        for c in &cells {
            for (x, y) in c.rect.corners() {
                points.insert((y, x));
            }
        }
        let vertices: Vec<Vertex> = points
            .into_iter()
            .enumerate()
            .map(|(id, (y, x))| Vertex { id, x, y })
            .collect();
        let lookup: HashMap<(Rational, Rational), usize> =
            vertices.iter().map(|v| ((v.x, v.y), v.id)).collect();

        // Cell sides per grid line, used to decide which gaps between
        // consecutive collinear vertices are real edges.
        let mut h_sides: BTreeMap<Rational, Vec<(Rational, Rational)>> = BTreeMap::new();
        let mut v_sides: BTreeMap<Rational, Vec<(Rational, Rational)>> = BTreeMap::new();
        for c in &cells {
            let r = c.rect;
            h_sides.entry(r.y0).or_default().push((r.x0, r.x1));
            h_sides.entry(r.y1).or_default().push((r.x0, r.x1));
            v_sides.entry(r.x0).or_default().push((r.y0, r.y1));
            v_sides.entry(r.x1).or_default().push((r.y0, r.y1));
        }
        let mut h_points: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
        let mut v_points: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
        for v in &vertices {
            h_points.entry(v.y).or_default().push(v.id);
            v_points.entry(v.x).or_default().push(v.id);
        }
        for ids in v_points.values_mut() {
            ids.sort_by_key(|&id| vertices[id].y);
        }

        let mut edges: Vec<Edge> = Vec::new();
        // runs[axis] = list of (coord, chains of vertex ids)
        let mut chains: Vec<(Axis, Rational, Vec<usize>)> = Vec::new();
        for (axis, points_map, sides_map) in [
            (Axis::Horizontal, &h_points, &h_sides),
            (Axis::Vertical, &v_points, &v_sides),
        ] {
            for (&coord, ids) in points_map.iter() {
                let Some(sides) = sides_map.get(&coord) else {
                    continue;
                };
                let cover = IntervalUnion::from_spans(sides.clone());
                let free = |id: usize| match axis {
                    Axis::Horizontal => vertices[id].x,
                    Axis::Vertical => vertices[id].y,
                };
                let mut current: Vec<usize> = Vec::new();
                for w in ids.windows(2) {
                    let (a, b) = (w[0], w[1]);
                    if cover.covers(free(a), free(b)) {
                        edges.push(Edge {
                            id: edges.len(),
                            a,
                            b,
                            axis,
                        });
                        if current.last() != Some(&a) {
                            if current.len() >= 2 {
                                chains.push((axis, coord, std::mem::take(&mut current)));
                            }
                            current = vec![a];
                        }
                        current.push(b);
                    }
                }
                if current.len() >= 2 {
                    chains.push((axis, coord, current));
                }
            }
        }

        let mut valence = vec![0usize; vertices.len()];
        for e in &edges {
            valence[e.a] += 1;
            valence[e.b] += 1;
        }
        let mut classes = Vec::with_capacity(vertices.len());
        for v in &vertices {
            let on_boundary = domain.on_boundary(v.x, v.y);
            let class = if on_boundary {
                VertexClass::Boundary
            } else {
                match valence[v.id] {
                    4 => VertexClass::InteriorCrossing,
                    3 => VertexClass::InteriorTJunction,
                    k => {
                        return Err(Error::NotRegular(format!(
                            "interior vertex ({}, {}) has valence {k}",
                            v.x, v.y
                        )))
                    }
                }
            };
            classes.push(class);
        }

        let is_domain_line = |axis: Axis, coord: Rational| match axis {
            Axis::Horizontal => coord == domain.y0 || coord == domain.y1,
            Axis::Vertical => coord == domain.x0 || coord == domain.x1,
        };
        let mut ledges: Vec<LEdge> = Vec::with_capacity(chains.len());
        for (axis, coord, verts) in chains {
            let first = *verts.first().unwrap();
            let last = *verts.last().unwrap();
            let (lo, hi) = match axis {
                Axis::Horizontal => (vertices[first].x, vertices[last].x),
                Axis::Vertical => (vertices[first].y, vertices[last].y),
            };
            let kind = if is_domain_line(axis, coord) {
                LEdgeKind::Boundary
            } else {
                let ends_on_boundary = [first, last]
                    .iter()
                    .filter(|&&v| classes[v] == VertexClass::Boundary)
                    .count();
                match ends_on_boundary {
                    2 => LEdgeKind::CrossCut,
                    1 => LEdgeKind::Ray,
                    _ => LEdgeKind::TLedge,
                }
            };
            let seg = Segment::new(axis, coord, lo, hi);
            let level = if !with_levels {
                None
            } else if kind == LEdgeKind::Boundary {
                Some(0)
            } else {
                leveled
                    .iter()
                    .filter(|(s, _)| s.overlaps(&seg))
                    .map(|(_, l)| *l)
                    .min()
            };
            ledges.push(LEdge {
                id: ledges.len(),
                axis,
                coord,
                lo,
                hi,
                vertices: verts,
                kind,
                level,
            });
        }
        let mut vertex_ledges = vec![[None, None]; vertices.len()];
        for l in &ledges {
            for &v in &l.vertices {
                vertex_ledges[v][l.axis.index()] = Some(l.id);
            }
        }

        for (s, _) in leveled {
            let on_mesh = ledges
                .iter()
                .any(|l| l.axis == s.axis && l.coord == s.coord && l.lo <= s.lo && s.hi <= l.hi);
            if !on_mesh {
                return Err(Error::Dangling(format!(
                    "segment on {:?} line {} over [{}, {}] does not end on other segments",
                    s.axis, s.coord, s.lo, s.hi
                )));
            }
        }

        Ok(TMesh {
            domain,
            vertices,
            edges,
            cells,
            classes,
            ledges,
            vertex_ledges,
            lookup,
        })
    }

    pub fn domain(&self) -> Rect {
        self.domain
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn ledges(&self) -> &[LEdge] {
        &self.ledges
    }

    pub fn vertex(&self, id: usize) -> &Vertex {
        &self.vertices[id]
    }

    pub fn vertex_at(&self, x: Rational, y: Rational) -> Option<usize> {
        self.lookup.get(&(x, y)).copied()
    }

    pub fn class(&self, v: usize) -> VertexClass {
        self.classes[v]
    }

    /// Per-vertex classification, indexed by vertex id.
    pub fn classify_vertices(&self) -> &[VertexClass] {
        &self.classes
    }

    /// The l-edge through `v` along `axis`, if any.
    pub fn ledge_through(&self, v: usize, axis: Axis) -> Option<usize> {
        self.vertex_ledges[v][axis.index()]
    }

    /// Free-axis coordinate of a vertex along an l-edge direction.
    pub fn free_coord(&self, v: usize, axis: Axis) -> Rational {
        match axis {
            Axis::Horizontal => self.vertices[v].x,
            Axis::Vertical => self.vertices[v].y,
        }
    }

    pub fn census(&self) -> Census {
        let mut c = Census {
            v: self.vertices.len(),
            ..Census::default()
        };
        for class in &self.classes {
            match class {
                VertexClass::Boundary => c.v_b += 1,
                VertexClass::InteriorTJunction => c.t_junctions += 1,
                VertexClass::InteriorCrossing => c.v_plus += 1,
            }
        }
        c.n_v = c.v_plus + c.t_junctions;
        for l in &self.ledges {
            match l.kind {
                LEdgeKind::Boundary => c.boundary_ledges += 1,
                LEdgeKind::CrossCut => c.cross_cuts += 1,
                LEdgeKind::Ray => c.rays += 1,
                LEdgeKind::TLedge => c.t_ledges += 1,
            }
        }
        c.n_c = c.cross_cuts;
        c.e = c.cross_cuts + c.rays + c.t_ledges;
        c
    }

    /// Vertex ids sorted by x then y; handy for lattice-style tests.
    pub fn grid_lines(&self) -> (Vec<Rational>, Vec<Rational>) {
        let xs: BTreeSet<Rational> = self.vertices.iter().map(|v| v.x).collect();
        let ys: BTreeSet<Rational> = self.vertices.iter().map(|v| v.y).collect();
        (xs.into_iter().collect(), ys.into_iter().collect())
    }

    /// Interior segments (all non-boundary l-edges), with their levels.
    pub fn interior_segments(&self) -> Vec<(Segment, usize)> {
        self.ledges
            .iter()
            .filter(|l| l.is_interior())
            .map(|l| (l.segment(), l.level.unwrap_or(0)))
            .collect()
    }

    /// Applies `x -> a*x + b`, `y -> c*y + d` with `a, c > 0`.
    pub fn affine(&self, a: Rational, b: Rational, c: Rational, d: Rational) -> Result<TMesh> {
        if !a.is_positive() || !c.is_positive() {
            return Err(Error::InvalidArgument("scale factors must be positive".into()));
        }
        let f = |x: Rational, y: Rational| (a * x + b, c * y + d);
        let domain = self.domain.map(f);
        let segs: Vec<(Segment, usize)> = self
            .ledges
            .iter()
            .filter(|l| l.is_interior())
            .map(|l| {
                let s = match l.axis {
                    Axis::Horizontal => Segment::horizontal(c * l.coord + d, a * l.lo + b, a * l.hi + b),
                    Axis::Vertical => Segment::vertical(a * l.coord + b, c * l.lo + d, c * l.hi + d),
                };
                (s, l.level.unwrap_or(0))
            })
            .collect();
        let with_levels = self.ledges.iter().all(|l| l.level.is_some());
        TMesh::segments_to_mesh(domain, &segs, with_levels)
    }

    pub fn to_file(&self) -> MeshFile {
        MeshFile {
            domain: self.domain.to_array(),
            cells: self.cells.iter().map(|c| c.rect.to_array()).collect(),
        }
    }

    pub fn from_file(file: &MeshFile) -> Result<TMesh> {
        TMesh::from_cells(
            Rect::from_array(file.domain),
            file.cells.iter().map(|c| Rect::from_array(*c)).collect(),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("mesh serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<TMesh> {
        let file: MeshFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        TMesh::from_file(&file)
    }
}

fn strictly_increasing(v: &[Rational], what: &str) -> Result<Vec<Rational>> {
    if v.len() < 2 {
        return Err(Error::Degenerate(format!("{what}: need at least two lines")));
    }
    for w in v.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Degenerate(format!(
                "{what}: not strictly increasing at {} then {}",
                w[0], w[1]
            )));
        }
    }
    Ok(v.to_vec())
}

/// Cells must be sorted by `y0`. Sweeps upward, only comparing cells whose
/// y-ranges can still meet.
fn check_overlaps(cells: &[Rect]) -> Result<()> {
    for (i, a) in cells.iter().enumerate() {
        for b in &cells[i + 1..] {
            if b.y0 >= a.y1 {
                break;
            }
            if a.interiors_intersect(b) {
                return Err(Error::Overlap(format!(
                    "{:?} and {:?}",
                    a.to_array(),
                    b.to_array()
                )));
            }
        }
    }
    Ok(())
}

/// On-disk mesh description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshFile {
    pub domain: [Rational; 4],
    pub cells: Vec<[Rational; 4]>,
}
