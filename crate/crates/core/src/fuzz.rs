//! Seeded random hierarchical meshes.
//!
//! Refinements are drawn from small cell patterns (single cells, pairs,
//! L-triples, 2×2 blocks, staggered 4-cell chains, random walks) so that every
//! component class shows up regularly.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::hierarchy::{Division, HMesh, Levels};
use crate::mesh::Rect;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub count: usize,
    pub division: Division,
    /// Number of refinement rounds, at most.
    pub max_level: usize,
    /// Cells per axis of the level-0 grid, at most (at least 3).
    pub max_level0: usize,
    /// Only emit meshes whose refined l-edges each cross at least two
    /// coarser cells.
    pub n_ge_2: bool,
    /// Draw uneven rational spacings for the level-0 grid.
    pub random_lines: bool,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 1,
            count: 50,
            division: Division::TwoByTwo,
            max_level: 3,
            max_level0: 6,
            n_ge_2: false,
            random_lines: true,
        }
    }
}

/// Cell shapes as offsets `(dx, dy)` in cells from an anchor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    Single,
    Pair,
    Triple,
    Block,
    Staggered,
    Walk,
}

impl Pattern {
    const ALL: [Pattern; 6] = [
        Pattern::Single,
        Pattern::Pair,
        Pattern::Triple,
        Pattern::Block,
        Pattern::Staggered,
        Pattern::Walk,
    ];

    fn offsets(self, rng: &mut ChaCha8Rng) -> Vec<(i64, i64)> {
        let flip = |v: Vec<(i64, i64)>, rng: &mut ChaCha8Rng| -> Vec<(i64, i64)> {
            let (sx, sy, swap) = (rng.gen_bool(0.5), rng.gen_bool(0.5), rng.gen_bool(0.5));
            v.into_iter()
                .map(|(x, y)| {
                    let (x, y) = if swap { (y, x) } else { (x, y) };
                    (if sx { -x } else { x }, if sy { -y } else { y })
                })
                .collect()
        };
        match self {
            Pattern::Single => vec![(0, 0)],
            Pattern::Pair => flip(vec![(0, 0), (1, 0)], rng),
            Pattern::Triple => flip(vec![(0, 0), (1, 0), (0, 1)], rng),
            Pattern::Block => vec![(0, 0), (1, 0), (0, 1), (1, 1)],
            Pattern::Staggered => flip(vec![(0, 0), (1, 0), (1, 1), (2, 1)], rng),
            Pattern::Walk => {
                let len = rng.gen_range(5..=7);
                let mut cells = vec![(0i64, 0i64)];
                while cells.len() < len {
                    let &(x, y) = cells.choose(rng).unwrap();
                    let (dx, dy) = *[(1, 0), (-1, 0), (0, 1), (0, -1)].choose(rng).unwrap();
                    if !cells.contains(&(x + dx, y + dy)) {
                        cells.push((x + dx, y + dy));
                    }
                }
                cells
            }
        }
    }
}

fn rng_for(config: &FuzzConfig, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    rng
}

fn level0_lines(rng: &mut ChaCha8Rng, cells: usize, random: bool) -> Vec<Rational> {
    let mut out = vec![Rational::ZERO];
    let mut at = Rational::ZERO;
    for _ in 0..cells {
        let gap = if random {
            Rational::new(rng.gen_range(1..=4), *[1, 2, 3].choose(rng).unwrap())
        } else {
            Rational::ONE
        };
        at = at + gap;
        out.push(at);
    }
    out
}

/// Level-k cells indexed by integer position in the level-k lattice.
struct Lattice {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
    cells: Vec<Rect>,
}

impl Lattice {
    fn new(cells: Vec<Rect>) -> Lattice {
        let mut xs: Vec<Rational> = cells.iter().map(|c| c.x0).collect();
        let mut ys: Vec<Rational> = cells.iter().map(|c| c.y0).collect();
        xs.sort();
        xs.dedup();
        ys.sort();
        ys.dedup();
        Lattice { xs, ys, cells }
    }

    fn pos(&self, c: &Rect) -> (i64, i64) {
        (
            self.xs.binary_search(&c.x0).unwrap() as i64,
            self.ys.binary_search(&c.y0).unwrap() as i64,
        )
    }

    /// The cell whose lower-left corner sits at lattice position `p`.
    fn at(&self, p: (i64, i64)) -> Option<usize> {
        if p.0 < 0 || p.1 < 0 {
            return None;
        }
        let (x, y) = (*self.xs.get(p.0 as usize)?, *self.ys.get(p.1 as usize)?);
        self.cells.iter().position(|c| c.x0 == x && c.y0 == y)
    }

    fn neighbours(&self, a: usize, b: usize) -> bool {
        let (p, q) = (&self.cells[a], &self.cells[b]);
        let horiz = (p.x1 == q.x0 || q.x1 == p.x0) && p.y0 == q.y0 && p.y1 == q.y1;
        let vert = (p.y1 == q.y0 || q.y1 == p.y0) && p.x0 == q.x0 && p.x1 == q.x1;
        horiz || vert
    }
}

/// Places `pattern` at a random anchor among the level-`k` cells. Cells that
/// fall outside the refined region, or do not connect to the anchor through
/// the pattern, are dropped.
fn place(rng: &mut ChaCha8Rng, lattice: &Lattice, pattern: Pattern) -> Vec<usize> {
    let anchor = rng.gen_range(0..lattice.cells.len());
    let origin = lattice.pos(&lattice.cells[anchor]);
    let mut chosen = vec![anchor];
    let offsets = pattern.offsets(rng);
    // Grow from the anchor so the placed cells stay edge-connected.
    let mut pending: Vec<usize> = offsets
        .iter()
        .filter_map(|&(dx, dy)| lattice.at((origin.0 + dx, origin.1 + dy)))
        .filter(|&c| c != anchor)
        .collect();
    let mut progress = true;
    while progress {
        progress = false;
        pending.retain(|&c| {
            if chosen.iter().any(|&d| lattice.neighbours(c, d)) {
                chosen.push(c);
                progress = true;
                false
            } else {
                true
            }
        });
    }
    chosen
}

/// The `index`-th mesh of the batch described by `config`.
pub fn generate(config: &FuzzConfig, index: usize) -> HMesh {
    let mut rng = rng_for(config, index);
    for _ in 0..64 {
        let h = attempt(config, &mut rng, index);
        if !config.n_ge_2 || satisfies_n_ge_2(&h) {
            return h;
        }
    }
    // Fall back to a mesh of 2×2 blocks only, which always qualifies.
    let mut cfg = *config;
    cfg.n_ge_2 = true;
    blocks_only(&cfg, &mut rng)
}

pub fn generate_batch(config: &FuzzConfig) -> Vec<HMesh> {
    (0..config.count).map(|i| generate(config, i)).collect()
}

fn satisfies_n_ge_2(h: &HMesh) -> bool {
    let mesh = h.flatten();
    Levels::new(&mesh)
        .and_then(|l| l.check_n_ge_2())
        .unwrap_or(false)
}

fn base(config: &FuzzConfig, rng: &mut ChaCha8Rng) -> HMesh {
    let max0 = config.max_level0.max(3);
    let nx = rng.gen_range(3..=max0);
    let ny = rng.gen_range(3..=max0);
    let xs = level0_lines(rng, nx, config.random_lines);
    let ys = level0_lines(rng, ny, config.random_lines);
    HMesh::new(config.division, xs, ys).expect("increasing grid lines")
}

fn attempt(config: &FuzzConfig, rng: &mut ChaCha8Rng, index: usize) -> HMesh {
    let mut h = base(config, rng);
    let levels = rng.gen_range(1..=config.max_level.max(1));
    for k in 0..levels {
        let lattice = Lattice::new(h.level_cells(k));
        if lattice.cells.is_empty() {
            break;
        }
        let rounds = rng.gen_range(1..=2);
        let mut picked: Vec<usize> = Vec::new();
        for round in 0..rounds {
            let pattern = if config.n_ge_2 {
                Pattern::Block
            } else if round == 0 {
                // Cycle the leading pattern so every shape appears in a batch.
                Pattern::ALL[(index + k) % Pattern::ALL.len()]
            } else {
                *Pattern::ALL.choose(rng).unwrap()
            };
            let cells = if config.n_ge_2 {
                full_block(rng, &lattice)
            } else {
                place(rng, &lattice, pattern)
            };
            for c in cells {
                if !picked.contains(&c) {
                    picked.push(c);
                }
            }
        }
        picked.sort();
        h = h.refine(k, &picked).expect("indices come from the level's cells");
    }
    h
}

/// A complete 2×2 block of level cells. The children of any divided cell
/// form one, so the search always succeeds.
fn full_block(rng: &mut ChaCha8Rng, lattice: &Lattice) -> Vec<usize> {
    loop {
        let cells = place(rng, lattice, Pattern::Block);
        if cells.len() == 4 {
            return cells;
        }
    }
}

fn blocks_only(config: &FuzzConfig, rng: &mut ChaCha8Rng) -> HMesh {
    let h = base(config, rng);
    let mut picked = full_block(rng, &Lattice::new(h.level_cells(0)));
    picked.sort();
    h.refine(0, &picked).expect("indices come from the level's cells")
}
