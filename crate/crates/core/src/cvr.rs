//! Crossing-vertex-relationship graphs.
//!
//! The graph keeps the crossing vertices of a T-mesh. Along every mesh l-edge
//! its crossing vertices, taken in order, are joined into one graph l-edge;
//! T-junctions in between disappear and the edges around them merge.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::conformality::{dim_w, dim_w_hbc, Line, LineSet};
use crate::error::{Error, Result};
use crate::hierarchy::{HMesh, Levels};
use crate::mesh::{Axis, TMesh, UnionFind, VertexClass};
use crate::rational::Rational;

/// The six vertex types of a graph built from crossing vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexType {
    /// Boundary, end of one l-edge and inside the other.
    #[serde(rename = "1")]
    One,
    /// Boundary, end of both l-edges.
    #[serde(rename = "2")]
    Two,
    /// Boundary, inside both l-edges.
    #[serde(rename = "3")]
    Three,
    /// Interior T-junction.
    #[serde(rename = "T")]
    T,
    /// Interior crossing.
    #[serde(rename = "+")]
    Plus,
    /// Interior corner, end of both l-edges.
    #[serde(rename = "L")]
    L,
}

impl VertexType {
    pub fn label(self) -> &'static str {
        match self {
            VertexType::One => "1",
            VertexType::Two => "2",
            VertexType::Three => "3",
            VertexType::T => "T",
            VertexType::Plus => "+",
            VertexType::L => "L",
        }
    }

    fn from_roles(boundary: bool, endpoint_roles: usize) -> VertexType {
        match (boundary, endpoint_roles) {
            (true, 0) => VertexType::Three,
            (true, 1) => VertexType::One,
            (true, _) => VertexType::Two,
            (false, 0) => VertexType::Plus,
            (false, 1) => VertexType::T,
            (false, _) => VertexType::L,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvrVertex {
    /// Id of the crossing vertex in the source mesh.
    pub mesh_vertex: usize,
    pub x: Rational,
    pub y: Rational,
    pub boundary: bool,
    pub kind: VertexType,
}

/// A graph l-edge, derived from one mesh l-edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvrLine {
    /// Id of the source l-edge in the mesh.
    pub source: usize,
    pub level: usize,
    pub axis: Axis,
    pub coord: Rational,
    /// Graph vertex indices, ordered along the line.
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvrGraph {
    pub vertices: Vec<CvrVertex>,
    /// Lines holding at least two vertices.
    pub lines: Vec<CvrLine>,
    /// Pairs of graph vertex indices joined by a graph edge.
    pub edges: Vec<(usize, usize)>,
    pub connected: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeCensus {
    pub one: usize,
    pub two: usize,
    pub three: usize,
    pub t: usize,
    pub plus: usize,
    pub l: usize,
}

impl TypeCensus {
    pub fn total(&self) -> usize {
        self.one + self.two + self.three + self.t + self.plus + self.l
    }
}

/// Builds the graph of crossing vertices of the mesh.
pub fn build_cvr(mesh: &TMesh) -> CvrGraph {
    let classes = mesh.classify_vertices();
    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut vertices = Vec::new();
    for v in mesh.vertices() {
        if classes[v.id] == VertexClass::InteriorCrossing {
            index.insert(v.id, vertices.len());
            vertices.push(CvrVertex {
                mesh_vertex: v.id,
                x: v.x,
                y: v.y,
                boundary: false,
                kind: VertexType::Plus,
            });
        }
    }

    let mut lines = Vec::new();
    let mut edges = Vec::new();
    // For every graph vertex, the line through it along each axis.
    let mut through: Vec<[Option<usize>; 2]> = vec![[None, None]; vertices.len()];
    for l in mesh.ledges() {
        let chain: Vec<usize> = l.vertices.iter().filter_map(|v| index.get(v).copied()).collect();
        for &g in &chain {
            through[g][l.axis.index()] = (chain.len() >= 2).then_some(lines.len());
        }
        if chain.len() < 2 {
            continue;
        }
        edges.extend(chain.windows(2).map(|w| (w[0], w[1])));
        lines.push(CvrLine {
            source: l.id,
            level: l.level.unwrap_or(0),
            axis: l.axis,
            coord: l.coord,
            vertices: chain,
        });
    }

    let boundary = outer_vertices(&vertices, &lines);
    for (g, v) in vertices.iter_mut().enumerate() {
        let roles = through[g]
            .iter()
            .map(|line| match line {
                None => 1,
                Some(id) => {
                    let vs = &lines[*id].vertices;
                    usize::from(vs[0] == g || vs[vs.len() - 1] == g)
                }
            })
            .sum();
        v.boundary = boundary[g];
        v.kind = VertexType::from_roles(boundary[g], roles);
    }

    let mut uf = UnionFind::new(vertices.len());
    for &(a, b) in &edges {
        uf.union(a, b);
    }
    let connected = uf.groups().len() <= 1;
    CvrGraph {
        vertices,
        lines,
        edges,
        connected,
    }
}

/// Marks the vertices that touch the unbounded face of the graph. The plane
/// is cut by the distinct vertex coordinates into slabs; a flood fill from a
/// padding slab moves between neighbours unless a graph edge separates them.
fn outer_vertices(vertices: &[CvrVertex], lines: &[CvrLine]) -> Vec<bool> {
    if vertices.is_empty() {
        return Vec::new();
    }
    let mut xs: Vec<Rational> = vertices.iter().map(|v| v.x).collect();
    let mut ys: Vec<Rational> = vertices.iter().map(|v| v.y).collect();
    xs.sort();
    xs.dedup();
    ys.sort();
    ys.dedup();
    let xi = |x: Rational| xs.binary_search(&x).unwrap();
    let yi = |y: Rational| ys.binary_search(&y).unwrap();
    let (nx, ny) = (xs.len(), ys.len());
    // Slab (i, j) lies between xs[i-1] and xs[i] (padding when out of range).
    // blocked_v[i][j]: the vertical line xs[i] is drawn between ys[j-1], ys[j].
    let mut blocked_v = vec![vec![false; ny + 1]; nx];
    let mut blocked_h = vec![vec![false; nx + 1]; ny];
    for line in lines {
        let first = &vertices[line.vertices[0]];
        let last = &vertices[*line.vertices.last().unwrap()];
        match line.axis {
            Axis::Vertical => {
                let i = xi(line.coord);
                for j in yi(first.y) + 1..=yi(last.y) {
                    blocked_v[i][j] = true;
                }
            }
            Axis::Horizontal => {
                let j = yi(line.coord);
                for i in xi(first.x) + 1..=xi(last.x) {
                    blocked_h[j][i] = true;
                }
            }
        }
    }
    let mut outside = vec![vec![false; ny + 1]; nx + 1];
    let mut stack = vec![(0usize, 0usize)];
    outside[0][0] = true;
    while let Some((i, j)) = stack.pop() {
        let mut visit = |a: usize, b: usize, stack: &mut Vec<(usize, usize)>| {
            if !outside[a][b] {
                outside[a][b] = true;
                stack.push((a, b));
            }
        };
        if i > 0 && !blocked_v[i - 1][j] {
            visit(i - 1, j, &mut stack);
        }
        if i < nx && !blocked_v[i][j] {
            visit(i + 1, j, &mut stack);
        }
        if j > 0 && !blocked_h[j - 1][i] {
            visit(i, j - 1, &mut stack);
        }
        if j < ny && !blocked_h[j][i] {
            visit(i, j + 1, &mut stack);
        }
    }
    vertices
        .iter()
        .map(|v| {
            let (i, j) = (xi(v.x), yi(v.y));
            outside[i][j] || outside[i + 1][j] || outside[i][j + 1] || outside[i + 1][j + 1]
        })
        .collect()
}

impl CvrGraph {
    pub fn census(&self) -> TypeCensus {
        let mut c = TypeCensus::default();
        for v in &self.vertices {
            match v.kind {
                VertexType::One => c.one += 1,
                VertexType::Two => c.two += 1,
                VertexType::Three => c.three += 1,
                VertexType::T => c.t += 1,
                VertexType::Plus => c.plus += 1,
                VertexType::L => c.l += 1,
            }
        }
        c
    }

    /// All graph l-edges as a line set over mesh vertex ids.
    pub fn line_set(&self) -> LineSet {
        LineSet::new(self.lines.iter().map(|l| self.to_line(l, |_| true)).collect())
    }

    fn to_line(&self, l: &CvrLine, keep: impl Fn(&CvrVertex) -> bool) -> Line {
        Line {
            id: l.source,
            level: l.level,
            axis: l.axis,
            coord: l.coord,
            vertices: l
                .vertices
                .iter()
                .map(|&g| &self.vertices[g])
                .filter(|v| keep(v))
                .map(|v| {
                    let free = match l.axis {
                        Axis::Horizontal => v.x,
                        Axis::Vertical => v.y,
                    };
                    (v.mesh_vertex, free)
                })
                .collect(),
        }
    }

    /// `G_i`: the graph l-edges of level `i`, keeping only vertices whose level
    /// in the source mesh is `i`.
    pub fn level_set(&self, levels: &Levels, i: usize) -> LineSet {
        LineSet::new(
            self.lines
                .iter()
                .filter(|l| l.level == i)
                .map(|l| self.to_line(l, |v| levels.vertex_level(v.mesh_vertex) == i))
                .collect(),
        )
    }

    /// `G_i°`: the graph l-edges of level `i` with every vertex on them.
    pub fn level_set_all(&self, i: usize) -> LineSet {
        LineSet::new(
            self.lines
                .iter()
                .filter(|l| l.level == i)
                .map(|l| self.to_line(l, |_| true))
                .collect(),
        )
    }

    /// Dimension of the degree-1 space with homogeneous boundary conditions
    /// over the graph.
    pub fn dim_s1_hbc(&self) -> Result<usize> {
        dim_w(&self.line_set(), 1)
    }

    pub fn to_file(&self, domain: [Rational; 4]) -> CvrFile {
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (p, q) = (&self.vertices[a], &self.vertices[b]);
                [p.x, p.y, q.x, q.y]
            })
            .collect();
        let vertices = self
            .vertices
            .iter()
            .map(|v| CvrFileVertex {
                x: v.x,
                y: v.y,
                kind: v.kind,
            })
            .collect();
        CvrFile {
            domain,
            edges,
            vertices,
        }
    }
}

/// Serialized graph: the mesh file layout with cells replaced by edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvrFile {
    pub domain: [Rational; 4],
    /// `[x0, y0, x1, y1]` per edge.
    pub edges: Vec<[Rational; 4]>,
    pub vertices: Vec<CvrFileVertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvrFileVertex {
    pub x: Rational,
    pub y: Rational,
    #[serde(rename = "type")]
    pub kind: VertexType,
}

/// `V² = V³ + 4`, the turning count of a walk around the outer boundary.
pub fn check_boundary_identity(graph: &CvrGraph) -> Result<bool> {
    if !graph.connected {
        return Err(Error::Disconnected {
            components: component_count(graph),
        });
    }
    let c = graph.census();
    Ok(c.two == c.three + 4)
}

fn component_count(graph: &CvrGraph) -> usize {
    let mut uf = UnionFind::new(graph.vertices.len());
    for &(a, b) in &graph.edges {
        uf.union(a, b);
    }
    uf.groups().len()
}

/// `2E = V¹ + 2V² + V^T + 2V^L`, counting each l-edge by its two ends.
pub fn handshake_holds(graph: &CvrGraph, interior_ledges: usize) -> bool {
    let c = graph.census();
    2 * interior_ledges == c.one + 2 * c.two + c.t + 2 * c.l
}

/// `V⁺ - V^L + δ₄` over the graph.
pub fn cvr_dim_formula(graph: &CvrGraph, delta4: usize) -> i64 {
    let c = graph.census();
    c.plus as i64 - c.l as i64 + delta4 as i64
}

/// Both sides of the identity between the degree-3 space over the mesh and
/// the degree-1 space over its graph, homogeneous boundary conditions on
/// both.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvrEquivalence {
    pub mesh_dim: usize,
    pub graph_dim: usize,
    pub formula: i64,
    pub census: TypeCensus,
    pub boundary_identity: bool,
}

impl CvrEquivalence {
    pub fn holds(&self) -> bool {
        self.mesh_dim == self.graph_dim && self.formula == self.mesh_dim as i64 && self.boundary_identity
    }
}

/// Requires every refined l-edge to cross at least two coarser cells.
pub fn check_cvr_equivalence(h: &HMesh) -> Result<CvrEquivalence> {
    let mesh = h.flatten();
    let levels = Levels::new(&mesh)?;
    let violations = levels.n_violations()?;
    if !violations.is_empty() {
        return Err(Error::NConditionViolated {
            count: violations.len(),
        });
    }
    let graph = build_cvr(&mesh);
    let delta4 = levels.deltas(h.division(), 3)?.d4;
    Ok(CvrEquivalence {
        mesh_dim: dim_w_hbc(&mesh, 3)?,
        graph_dim: graph.dim_s1_hbc()?,
        formula: cvr_dim_formula(&graph, delta4),
        census: graph.census(),
        boundary_identity: check_boundary_identity(&graph)?,
    })
}

/// For each graph l-edge, how many vertices of its own level it has fewer
/// than its source l-edge. Finer l-edges ending on a line add T-junctions of
/// a higher level, which the level sets leave out, so those are not counted.
pub fn vertex_loss(levels: &Levels, graph: &CvrGraph) -> BTreeMap<usize, usize> {
    let mesh = levels.mesh();
    graph
        .lines
        .iter()
        .map(|l| {
            let own = |v: usize| levels.vertex_level(v) == l.level;
            let source = mesh.ledges()[l.source].vertices.iter().filter(|&&v| own(v)).count();
            let kept = l
                .vertices
                .iter()
                .filter(|&&g| own(graph.vertices[g].mesh_vertex))
                .count();
            (l.source, source - kept)
        })
        .collect()
}

/// Mesh vertex ids of the graph, for cross-checks against the census.
pub fn crossing_ids(graph: &CvrGraph) -> HashSet<usize> {
    graph.vertices.iter().map(|v| v.mesh_vertex).collect()
}
