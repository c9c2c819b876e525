//! Browser bindings for the demo page: a hierarchical mesh that refines on
//! click, a dimension report and the crossing-vertex graph.

use serde::Serialize;
use serde_json::json;
use tmdim::cvr::{build_cvr, check_boundary_identity, check_cvr_equivalence};
use tmdim::hierarchy::{Division, HMesh};
use tmdim::oracle::OracleOptions;
use tmdim::report::{parse_methods, parse_space, run_methods, Input, RunOptions};
use tmdim::{Rational, Rect};
use wasm_bindgen::prelude::*;

/// Unknown count above which the demo skips the oracle.
const DEMO_ORACLE_LIMIT: usize = 6000;

fn js_err(e: tmdim::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

#[derive(Serialize)]
struct Leaf {
    level: usize,
    index: usize,
    rect: [f64; 4],
}

#[derive(Serialize)]
struct Line {
    level: usize,
    from: [f64; 2],
    to: [f64; 2],
}

fn floats(r: &Rect) -> [f64; 4] {
    [r.x0.to_f64(), r.y0.to_f64(), r.x1.to_f64(), r.y1.to_f64()]
}

#[wasm_bindgen]
pub struct Demo {
    mesh: HMesh,
}

#[wasm_bindgen]
impl Demo {
    /// A uniform `nx` by `ny` level-0 grid on `[0, nx] x [0, ny]`.
    #[wasm_bindgen(constructor)]
    pub fn new(division: &str, nx: u32, ny: u32) -> Result<Demo, JsValue> {
        let division: Division = division.parse().map_err(js_err)?;
        let lines = |n: u32| (0..=n as i64).map(Rational::from_int).collect::<Vec<_>>();
        let mesh = HMesh::new(division, lines(nx), lines(ny)).map_err(js_err)?;
        Ok(Demo { mesh })
    }

    #[wasm_bindgen(js_name = fromJson)]
    pub fn from_json(text: &str) -> Result<Demo, JsValue> {
        Ok(Demo { mesh: HMesh::from_json(text).map_err(js_err)? })
    }

    #[wasm_bindgen(js_name = toJson)]
    pub fn to_json(&self) -> String {
        self.mesh.to_json()
    }

    pub fn levels(&self) -> usize {
        self.mesh.lev()
    }

    /// Undivided cells as `{level, index, rect}`, where `index` addresses
    /// the cell within its level for [`Demo::refine`].
    pub fn leaves(&self) -> String {
        let mut out = Vec::new();
        for level in 0..=self.mesh.lev() {
            let divided = self.mesh.divided_cells(level);
            for (index, cell) in self.mesh.level_cells(level).iter().enumerate() {
                if !divided.contains(cell) {
                    out.push(Leaf { level, index, rect: floats(cell) });
                }
            }
        }
        serde_json::to_string(&out).expect("leaves serialize")
    }

    /// Mesh segments with the level that introduced them.
    pub fn lines(&self) -> String {
        let out: Vec<Line> = self
            .mesh
            .leveled_segments()
            .into_iter()
            .map(|(s, level)| {
                let (c, lo, hi) = (s.coord.to_f64(), s.lo.to_f64(), s.hi.to_f64());
                let (from, to) = match s.axis {
                    tmdim::Axis::Horizontal => ([lo, c], [hi, c]),
                    tmdim::Axis::Vertical => ([c, lo], [c, hi]),
                };
                Line { level, from, to }
            })
            .collect();
        serde_json::to_string(&out).expect("lines serialize")
    }

    pub fn refine(&mut self, level: usize, index: usize) -> Result<(), JsValue> {
        self.mesh = self.mesh.refine(level, &[index]).map_err(js_err)?;
        Ok(())
    }

    /// Dimension report as JSON. `space` is `d` or `m,n,alpha,beta`;
    /// `methods` is a comma-separated subset of formula, cofactor, oracle.
    pub fn report(&self, space: &str, methods: &str, hbc: bool) -> Result<String, JsValue> {
        let space = parse_space(space).map_err(js_err)?;
        let methods = parse_methods(methods).map_err(js_err)?;
        let opts = RunOptions {
            hbc,
            oracle: OracleOptions { max_unknowns: DEMO_ORACLE_LIMIT, ..OracleOptions::default() },
        };
        let report = run_methods(&Input::Hierarchical(self.mesh.clone()), space, &methods, opts);
        Ok(serde_json::to_string(&json!({ "report": report, "text": report.to_text() })).expect("report serializes"))
    }

    /// The crossing-vertex graph with its type census and identity checks.
    pub fn cvr(&self) -> String {
        let flat = self.mesh.flatten();
        let graph = build_cvr(&flat);
        let as_text = |e: tmdim::Error| e.to_string();
        let value = json!({
            "graph": graph.to_file(flat.domain().to_array()),
            "floats": graph.vertices.iter().map(|v| [v.x.to_f64(), v.y.to_f64()]).collect::<Vec<_>>(),
            "edges": graph.edges,
            "census": graph.census(),
            "connected": graph.connected,
            "boundaryIdentity": check_boundary_identity(&graph).map_err(as_text),
            "equality": check_cvr_equivalence(&self.mesh).map(|e| json!({ "holds": e.holds(), "detail": e })).map_err(as_text),
        });
        serde_json::to_string(&value).expect("graph serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refining_a_leaf_replaces_it_by_four() {
        let mut demo = Demo::new("2x2", 4, 4).unwrap();
        let before: Vec<serde_json::Value> = serde_json::from_str(&demo.leaves()).unwrap();
        assert_eq!(before.len(), 16);
        demo.refine(0, 5).unwrap();
        let after: Vec<serde_json::Value> = serde_json::from_str(&demo.leaves()).unwrap();
        assert_eq!(after.len(), 19);
        assert_eq!(demo.levels(), 1);
        assert!(demo.lines().contains("\"level\":1"));
    }

    #[test]
    fn report_and_graph_are_json() {
        let mut demo = Demo::new("2x2", 5, 5).unwrap();
        for index in [6, 7, 11, 12] {
            demo.refine(0, index).unwrap();
        }
        let report: serde_json::Value = serde_json::from_str(&demo.report("3", "formula,cofactor,oracle", false).unwrap()).unwrap();
        assert_eq!(report["report"]["agreement"], true);
        let cvr: serde_json::Value = serde_json::from_str(&demo.cvr()).unwrap();
        assert_eq!(cvr["connected"], true);
        assert_eq!(cvr["equality"]["Ok"]["holds"], true);
    }

    #[test]
    fn round_trips_through_json() {
        let mut demo = Demo::new("3x3", 3, 3).unwrap();
        demo.refine(0, 4).unwrap();
        let again = Demo::from_json(&demo.to_json()).unwrap();
        assert_eq!(again.leaves(), demo.leaves());
    }
}
