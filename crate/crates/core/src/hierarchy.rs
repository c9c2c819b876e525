//! Hierarchical T-meshes and their level structure.
//!
//! [`HMesh`] records a level-0 tensor grid and, per level, which cells were
//! split into `p × p` equal subcells. Everything about levels is computed on a
//! leveled [`TMesh`] (one whose l-edges carry a level), so the same code serves
//! the flattened hierarchical mesh and its extension.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{Axis, LEdge, Rect, Segment, TMesh, UnionFind};
use crate::rational::Rational;

/// Uniform cell division factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Division {
    #[serde(rename = "2x2")]
    TwoByTwo,
    #[serde(rename = "3x3")]
    ThreeByThree,
}

impl Division {
    pub fn factor(self) -> usize {
        match self {
            Division::TwoByTwo => 2,
            Division::ThreeByThree => 3,
        }
    }
}

impl fmt::Display for Division {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.factor();
        write!(f, "{k}x{k}")
    }
}

impl FromStr for Division {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "2x2" | "2" => Ok(Division::TwoByTwo),
            "3x3" | "3" => Ok(Division::ThreeByThree),
            other => Err(Error::UnsupportedDivision(other.to_string())),
        }
    }
}

/// A hierarchical T-mesh.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HMesh {
    division: Division,
    xs: Vec<Rational>,
    ys: Vec<Rational>,
    /// `divided[k]` holds the level-k cells that were split.
    divided: Vec<BTreeSet<CellKey>>,
}

/// Rectangles ordered row-major: by bottom edge, then left edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct CellKey(Rect);

impl Ord for CellKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a = &self.0;
        let b = &other.0;
        (a.y0, a.x0, a.y1, a.x1).cmp(&(b.y0, b.x0, b.y1, b.x1))
    }
}

impl PartialOrd for CellKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// On-disk hierarchical mesh description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HMeshFile {
    pub division: Division,
    pub level0: GridLines,
    /// `refinements[k]` lists indices of level-k cells to divide, cells being
    /// numbered row-major within their level.
    #[serde(default)]
    pub refinements: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridLines {
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
}

impl HMesh {
    pub fn new(division: Division, xs: Vec<Rational>, ys: Vec<Rational>) -> Result<HMesh> {
        // Validates the grid lines.
        TMesh::tensor(&xs, &ys)?;
        Ok(HMesh {
            division,
            xs,
            ys,
            divided: Vec::new(),
        })
    }

    pub fn division(&self) -> Division {
        self.division
    }

    pub fn level0(&self) -> (&[Rational], &[Rational]) {
        (&self.xs, &self.ys)
    }

    /// Highest level that has cells.
    pub fn lev(&self) -> usize {
        self.divided.iter().rposition(|s| !s.is_empty()).map_or(0, |k| k + 1)
    }

    pub fn domain(&self) -> Rect {
        Rect::new(
            self.xs[0],
            self.ys[0],
            *self.xs.last().unwrap(),
            *self.ys.last().unwrap(),
        )
    }

    fn split(&self, r: &Rect) -> Vec<Rect> {
        let p = self.division.factor() as i64;
        let w = r.width() / Rational::from_int(p);
        let h = r.height() / Rational::from_int(p);
        let mut out = Vec::new();
        for j in 0..p {
            for i in 0..p {
                let x0 = r.x0 + w * Rational::from_int(i);
                let y0 = r.y0 + h * Rational::from_int(j);
                out.push(Rect::new(x0, y0, x0 + w, y0 + h));
            }
        }
        out
    }

    /// All cells created at level `k`, divided or not, in row-major order.
    pub fn level_cells(&self, k: usize) -> Vec<Rect> {
        let mut set: BTreeSet<CellKey> = BTreeSet::new();
        if k == 0 {
            for wy in self.ys.windows(2) {
                for wx in self.xs.windows(2) {
                    set.insert(CellKey(Rect::new(wx[0], wy[0], wx[1], wy[1])));
                }
            }
        } else if let Some(parents) = self.divided.get(k - 1) {
            for p in parents {
                for c in self.split(&p.0) {
                    set.insert(CellKey(c));
                }
            }
        }
        set.into_iter().map(|c| c.0).collect()
    }

    /// The level-k cells that have been divided.
    pub fn divided_cells(&self, k: usize) -> Vec<Rect> {
        self.divided
            .get(k)
            .map(|s| s.iter().map(|c| c.0).collect())
            .unwrap_or_default()
    }

    /// Divides the given level-k cells (row-major indices within level k).
    pub fn refine(&self, level: usize, cell_ids: &[usize]) -> Result<HMesh> {
        if cell_ids.is_empty() {
            return Ok(self.clone());
        }
        if level > self.lev() {
            return Err(Error::LevelOutOfRange {
                level,
                max: self.lev(),
            });
        }
        let cells = self.level_cells(level);
        let mut out = self.clone();
        while out.divided.len() <= level {
            out.divided.push(BTreeSet::new());
        }
        for &index in cell_ids {
            let rect = *cells.get(index).ok_or(Error::NoSuchCell { level, index })?;
            if !out.divided[level].insert(CellKey(rect)) {
                return Err(Error::AlreadyDivided { level, index });
            }
        }
        Ok(out)
    }

    /// Divides the level-k cell containing the point, if any.
    pub fn refine_at(&self, level: usize, x: Rational, y: Rational) -> Result<HMesh> {
        let cells = self.level_cells(level);
        let index = cells
            .iter()
            .position(|c| c.x0 <= x && x < c.x1 && c.y0 <= y && y < c.y1)
            .ok_or(Error::NoSuchCell { level, index: usize::MAX })?;
        self.refine(level, &[index])
    }

    /// Segments of the flattened mesh tagged with the level they were created at.
    pub fn leveled_segments(&self) -> Vec<(Segment, usize)> {
        let (x0, y0) = (self.xs[0], self.ys[0]);
        let (x1, y1) = (*self.xs.last().unwrap(), *self.ys.last().unwrap());
        let mut segs = Vec::new();
        for &x in &self.xs[1..self.xs.len() - 1] {
            segs.push((Segment::vertical(x, y0, y1), 0));
        }
        for &y in &self.ys[1..self.ys.len() - 1] {
            segs.push((Segment::horizontal(y, x0, x1), 0));
        }
        let p = self.division.factor() as i64;
        for (k, cells) in self.divided.iter().enumerate() {
            for c in cells {
                let r = c.0;
                for i in 1..p {
                    let t = Rational::new(i, p);
                    let x = r.x0 + r.width() * t;
                    let y = r.y0 + r.height() * t;
                    segs.push((Segment::vertical(x, r.y0, r.y1), k + 1));
                    segs.push((Segment::horizontal(y, r.x0, r.x1), k + 1));
                }
            }
        }
        segs
    }

    /// The flattened T-mesh, with every l-edge tagged by its level.
    pub fn flatten(&self) -> TMesh {
        TMesh::from_leveled_segments(self.domain(), &self.leveled_segments())
            .expect("hierarchical refinement always yields a regular mesh")
    }

    pub fn to_file(&self) -> HMeshFile {
        let mut refinements = Vec::new();
        for k in 0..self.lev() {
            let cells = self.level_cells(k);
            let set = &self.divided[k];
            refinements.push(
                cells
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| set.contains(&CellKey(**c)))
                    .map(|(i, _)| i)
                    .collect(),
            );
        }
        HMeshFile {
            division: self.division,
            level0: GridLines {
                x: self.xs.clone(),
                y: self.ys.clone(),
            },
            refinements,
        }
    }

    pub fn from_file(file: &HMeshFile) -> Result<HMesh> {
        let mut h = HMesh::new(file.division, file.level0.x.clone(), file.level0.y.clone())?;
        for (k, ids) in file.refinements.iter().enumerate() {
            h = h.refine(k, ids)?;
        }
        Ok(h)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<HMesh> {
        let file: HMeshFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        HMesh::from_file(&file)
    }
}

/// A level set: the level-i l-edges together with either only the level-i
/// vertices on them (`vertices`) or every vertex on them (`all_vertices`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSet {
    pub level: usize,
    pub ledges: Vec<usize>,
    pub vertices: Vec<usize>,
    pub all_vertices: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentClass {
    GenericReasonableOrder,
    SingleCell,
    TwoByTwoNeighbor,
    Case2a,
    Case2b,
    Case2c,
    Case2d,
    Case2e,
    Case3,
}

/// A connected component of a level set with everything needed to classify it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub level: usize,
    pub ledges: Vec<usize>,
    /// N(t) for each l-edge, parallel to `ledges`.
    pub crossings: Vec<usize>,
    /// Cells of the level below that the component crosses, row-major.
    pub parents: Vec<[Rational; 4]>,
}

/// Aggregated special-component counts. Their meaning depends on the regime:
/// with 2×2 division `d1` counts single-cell components (degree 2) and `d4`
/// counts 2×2-neighbor components (degree 3); with 3×3 division `d1..d4` count
/// case 3, case 2.a, case 2.b and case 2.c components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Deltas {
    pub d1: usize,
    pub d2: usize,
    pub d3: usize,
    pub d4: usize,
}

/// Level structure of a leveled mesh. Holds the coarser meshes `T^k`.
pub struct Levels<'a> {
    mesh: &'a TMesh,
    coarse: Vec<TMesh>,
    lev: usize,
}

impl<'a> Levels<'a> {
    pub fn new(mesh: &'a TMesh) -> Result<Levels<'a>> {
        if mesh.ledges().iter().any(|l| l.level.is_none()) {
            return Err(Error::InvalidArgument("mesh carries no level information".into()));
        }
        let lev = mesh.ledges().iter().filter_map(|l| l.level).max().unwrap_or(0);
        let mut coarse = Vec::with_capacity(lev);
        for k in 0..lev {
            let segs: Vec<(Segment, usize)> = mesh
                .ledges()
                .iter()
                .filter(|l| l.is_interior() && l.level.unwrap() <= k)
                .map(|l| (l.segment(), l.level.unwrap()))
                .collect();
            coarse.push(TMesh::from_leveled_segments(mesh.domain(), &segs)?);
        }
        Ok(Levels { mesh, coarse, lev })
    }

    pub fn mesh(&self) -> &TMesh {
        self.mesh
    }

    pub fn lev(&self) -> usize {
        self.lev
    }

    /// The mesh made of all l-edges of level at most `k`.
    pub fn coarse(&self, k: usize) -> &TMesh {
        if k >= self.lev {
            self.mesh
        } else {
            &self.coarse[k]
        }
    }

    pub fn ledge_level(&self, l: usize) -> usize {
        self.mesh.ledges()[l].level.unwrap_or(0)
    }

    /// Highest level among the l-edges through the vertex.
    pub fn vertex_level(&self, v: usize) -> usize {
        [Axis::Horizontal, Axis::Vertical]
            .iter()
            .filter_map(|&a| self.mesh.ledge_through(v, a))
            .map(|l| self.ledge_level(l))
            .max()
            .unwrap_or(0)
    }

    pub fn ledges_of_level(&self, i: usize) -> Vec<usize> {
        self.mesh
            .ledges()
            .iter()
            .filter(|l| l.is_interior() && l.level == Some(i))
            .map(|l| l.id)
            .collect()
    }

    pub fn level_set(&self, i: usize) -> Result<LevelSet> {
        if i == 0 || i > self.lev.max(1) {
            return Err(Error::LevelOutOfRange {
                level: i,
                max: self.lev,
            });
        }
        let ledges = self.ledges_of_level(i);
        let mut all: BTreeSet<usize> = BTreeSet::new();
        for &l in &ledges {
            all.extend(self.mesh.ledges()[l].vertices.iter().copied());
        }
        let vertices = all.iter().copied().filter(|&v| self.vertex_level(v) == i).collect();
        Ok(LevelSet {
            level: i,
            ledges,
            vertices,
            all_vertices: all.into_iter().collect(),
        })
    }

    /// Cells of `T^{j-1}` crossed by the level-j l-edge.
    pub fn crossed_cells(&self, l: usize) -> Result<Vec<Rect>> {
        let ledge = &self.mesh.ledges()[l];
        let j = ledge.level.unwrap_or(0);
        if j == 0 || !ledge.is_interior() {
            return Err(Error::WrongLevel { found: j });
        }
        let seg = ledge.segment();
        Ok(self
            .coarse(j - 1)
            .cells()
            .iter()
            .filter(|c| c.rect.crossed_by(&seg))
            .map(|c| c.rect)
            .collect())
    }

    /// N(l): how many cells of the next coarser mesh the l-edge crosses.
    pub fn crossing_count(&self, l: usize) -> Result<usize> {
        Ok(self.crossed_cells(l)?.len())
    }

    /// Components of the level-i l-edges under closed-segment intersection.
    pub fn components(&self, i: usize) -> Result<Vec<Component>> {
        let ledges = self.ledges_of_level(i);
        let segs: Vec<Segment> = ledges.iter().map(|&l| self.mesh.ledges()[l].segment()).collect();
        let mut uf = UnionFind::new(ledges.len());
        for a in 0..segs.len() {
            for b in a + 1..segs.len() {
                if segs[a].intersects(&segs[b]) {
                    uf.union(a, b);
                }
            }
        }
        let mut out = Vec::new();
        for group in uf.groups() {
            let ids: Vec<usize> = group.iter().map(|&g| ledges[g]).collect();
            let mut crossings = Vec::with_capacity(ids.len());
            let mut parents: BTreeSet<(Rational, Rational, Rational, Rational)> = BTreeSet::new();
            for &l in &ids {
                let cells = self.crossed_cells(l)?;
                crossings.push(cells.len());
                for c in cells {
                    parents.insert((c.y0, c.x0, c.y1, c.x1));
                }
            }
            out.push(Component {
                level: i,
                ledges: ids,
                crossings,
                parents: parents
                    .into_iter()
                    .map(|(y0, x0, y1, x1)| [x0, y0, x1, y1])
                    .collect(),
            });
        }
        Ok(out)
    }

    pub fn all_components(&self) -> Result<Vec<Component>> {
        let mut out = Vec::new();
        for i in 1..=self.lev {
            out.extend(self.components(i)?);
        }
        Ok(out)
    }

    /// Every l-edge of level at least 1 crosses two or more coarser cells.
    pub fn check_n_ge_2(&self) -> Result<bool> {
        Ok(self.n_violations()?.is_empty())
    }

    /// Level-≥1 l-edges with N(t) = 1.
    pub fn n_violations(&self) -> Result<Vec<usize>> {
        let mut bad = Vec::new();
        for l in self.mesh.ledges() {
            if l.is_interior() && l.level.unwrap_or(0) >= 1 && self.crossing_count(l.id)? < 2 {
                bad.push(l.id);
            }
        }
        Ok(bad)
    }

    /// Sums the special-component counts over all levels.
    pub fn deltas(&self, division: Division, degree: usize) -> Result<Deltas> {
        let mut d = Deltas::default();
        for c in self.all_components()? {
            match classify_component(&c, division, degree)? {
                ComponentClass::SingleCell if division == Division::TwoByTwo && degree == 2 => {
                    d.d1 += 1
                }
                ComponentClass::TwoByTwoNeighbor => d.d4 += 1,
                ComponentClass::Case3 => d.d1 += 1,
                ComponentClass::Case2a => d.d2 += 1,
                ComponentClass::Case2b => d.d3 += 1,
                ComponentClass::Case2c => d.d4 += 1,
                _ => {}
            }
        }
        Ok(d)
    }
}

fn rects(parents: &[[Rational; 4]]) -> Vec<Rect> {
    parents.iter().map(|p| Rect::from_array(*p)).collect()
}

/// Four rectangles tiling a rectangle around a common interior corner.
pub fn is_two_by_two_block(cells: &[Rect]) -> bool {
    if cells.len() != 4 {
        return false;
    }
    let x0 = cells.iter().map(|c| c.x0).min().unwrap();
    let y0 = cells.iter().map(|c| c.y0).min().unwrap();
    let x1 = cells.iter().map(|c| c.x1).max().unwrap();
    let y1 = cells.iter().map(|c| c.y1).max().unwrap();
    let bbox = Rect::new(x0, y0, x1, y1);
    let area = cells.iter().fold(Rational::ZERO, |a, c| a + c.area());
    if area != bbox.area() {
        return false;
    }
    let mut common: Option<HashSet<(Rational, Rational)>> = None;
    for c in cells {
        let corners: HashSet<(Rational, Rational)> = c.corners().into_iter().collect();
        common = Some(match common {
            None => corners,
            Some(prev) => prev.intersection(&corners).copied().collect(),
        });
    }
    common.is_some_and(|s| {
        s.iter()
            .any(|&(x, y)| x0 < x && x < x1 && y0 < y && y < y1)
    })
}

/// Places a component in the special-shape taxonomy used by the formulas.
pub fn classify_component(c: &Component, division: Division, degree: usize) -> Result<ComponentClass> {
    let parents = rects(&c.parents);
    match (division, degree) {
        (Division::TwoByTwo, 2) => Ok(if parents.len() == 1 {
            ComponentClass::SingleCell
        } else {
            ComponentClass::GenericReasonableOrder
        }),
        (Division::TwoByTwo, 3) => Ok(if is_two_by_two_block(&parents) {
            ComponentClass::TwoByTwoNeighbor
        } else if parents.len() == 1 {
            ComponentClass::SingleCell
        } else {
            ComponentClass::GenericReasonableOrder
        }),
        (Division::ThreeByThree, 3) => {
            let many = c.crossings.iter().filter(|&&n| n >= 3).count();
            let two = c.crossings.iter().filter(|&&n| n == 2).count();
            if many > 0 {
                return Ok(ComponentClass::GenericReasonableOrder);
            }
            if two == 0 {
                return Ok(if parents.len() == 1 {
                    ComponentClass::Case3
                } else {
                    ComponentClass::GenericReasonableOrder
                });
            }
            Ok(match parents.len() {
                2 => ComponentClass::Case2a,
                3 => ComponentClass::Case2b,
                4 if is_two_by_two_block(&parents) => ComponentClass::Case2c,
                4 => ComponentClass::Case2d,
                _ => ComponentClass::Case2e,
            })
        }
        (div, d) => Err(Error::UnsupportedDivision(format!("{div} with degree {d}"))),
    }
}

/// L-edge vertex list restricted to a vertex set.
pub fn restrict(ledge: &LEdge, keep: &HashSet<usize>) -> Vec<usize> {
    ledge.vertices.iter().copied().filter(|v| keep.contains(v)).collect()
}
