//! Running several dimension methods on one input and comparing them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::conformality::{dim_spline_cofactor, dim_w_hbc};
use crate::error::{Error, Result};
use crate::formulas::dim_formula;
use crate::hierarchy::{Deltas, Division, HMesh};
use crate::mesh::{Census, TMesh};
use crate::oracle::{dim_oracle_with, OracleOptions, Space};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Formula,
    Cofactor,
    Oracle,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Formula, Method::Cofactor, Method::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Method::Formula => "formula",
            Method::Cofactor => "cofactor",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}")))
    }
}

/// Parses `formula,cofactor,oracle` style lists.
pub fn parse_methods(s: &str) -> Result<Vec<Method>> {
    let mut out: Vec<Method> = s.split(',').map(str::parse).collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Parses `d` or `m,n,a,b`.
pub fn parse_space(s: &str) -> Result<Space> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidArgument(format!("bad space {s:?}: {e}")))?;
    match parts[..] {
        [d] if d >= 1 => Ok(Space::degree(d)),
        [m, n, alpha, beta] => Ok(Space { m, n, alpha, beta }),
        _ => Err(Error::InvalidArgument(format!(
            "space must be `d` (d >= 1) or `m,n,alpha,beta`, got {s:?}"
        ))),
    }
}

/// Result of one method.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Outcome {
    Value(usize),
    /// The method does not cover this input; the reason is kept.
    NotApplicable(String),
    /// The method should have applied but failed.
    Error(String),
}

impl Outcome {
    pub fn value(&self) -> Option<usize> {
        match self {
            Outcome::Value(v) => Some(*v),
            _ => None,
        }
    }

    fn from_result(r: Result<usize>) -> Outcome {
        match r {
            Ok(v) => Outcome::Value(v),
            Err(
                e @ (Error::RegimeNotCovered(_)
                | Error::NConditionViolated { .. }
                | Error::UnsupportedSmoothness(_)
                | Error::UnsupportedDivision(_)
                | Error::PreconditionTooCoarse { .. }
                | Error::TooLarge { .. }),
            ) => Outcome::NotApplicable(e.to_string()),
            Err(e) => Outcome::Error(e.to_string()),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Value(v) => write!(f, "{v}"),
            Outcome::NotApplicable(why) => write!(f, "n/a: {why}"),
            Outcome::Error(why) => write!(f, "error: {why}"),
        }
    }
}

/// A mesh given either flat or with its refinement history.
#[derive(Debug, Clone)]
pub enum Input {
    Flat(TMesh),
    Hierarchical(HMesh),
}

impl Input {
    pub fn mesh(&self) -> TMesh {
        match self {
            Input::Flat(m) => m.clone(),
            Input::Hierarchical(h) => h.flatten(),
        }
    }

    /// Accepts either the flat mesh format or the hierarchical one.
    pub fn from_json(s: &str) -> Result<Input> {
        let value: serde_json::Value =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if value.get("division").is_some() || value.get("level0").is_some() {
            Ok(Input::Hierarchical(HMesh::from_json(s)?))
        } else {
            Ok(Input::Flat(TMesh::from_json(s)?))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DimReport {
    pub space: Space,
    pub hbc: bool,
    pub division: Option<Division>,
    pub census: Census,
    /// Present when the closed-form formula ran.
    pub deltas: Option<Deltas>,
    pub by_method: BTreeMap<Method, Outcome>,
    /// All methods that produced a value produced the same one.
    pub agreement: bool,
}

impl DimReport {
    pub fn values(&self) -> Vec<usize> {
        self.by_method.values().filter_map(Outcome::value).collect()
    }

    /// The common value when every method that ran agrees.
    pub fn agreed_value(&self) -> Option<usize> {
        let v = self.values();
        (self.agreement && !v.is_empty()).then(|| v[0])
    }

    pub fn to_text(&self) -> String {
        let s = &self.space;
        let mut out = format!(
            "space S({}, {}, {}, {}){}",
            s.m,
            s.n,
            s.alpha,
            s.beta,
            if self.hbc { " with homogeneous boundary" } else { "" }
        );
        if let Some(d) = self.division {
            out += &format!(", {d} division");
        }
        let c = &self.census;
        out += &format!(
            "\ncensus: V={} V+={} Vb={} E={} cross-cuts={} rays={} T-l-edges={}",
            c.v, c.v_plus, c.v_b, c.e, c.n_c, c.rays, c.t_ledges
        );
        if let Some(d) = self.deltas {
            out += &format!("\ndeltas: {} {} {} {}", d.d1, d.d2, d.d3, d.d4);
        }
        for (m, o) in &self.by_method {
            out += &format!("\n{m:>9}: {o}");
        }
        out += &format!("\nagreement: {}\n", self.agreement);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub hbc: bool,
    pub oracle: OracleOptions,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            hbc: false,
            oracle: OracleOptions::default(),
        }
    }
}

/// Runs the requested methods and compares their values.
pub fn run_methods(input: &Input, space: Space, methods: &[Method], opts: RunOptions) -> DimReport {
    let mesh = input.mesh();
    let mut by_method = BTreeMap::new();
    let mut deltas = None;
    let degree = space.uniform_degree();
    for &method in methods {
        let outcome = match method {
            Method::Formula => match (input, degree) {
                (Input::Flat(_), _) => Outcome::NotApplicable(
                    "closed forms need the refinement history of a hierarchical mesh".into(),
                ),
                (Input::Hierarchical(_), None) => Outcome::NotApplicable(
                    "closed forms cover only S(d, d, d-1, d-1)".into(),
                ),
                (Input::Hierarchical(h), Some(d)) => match dim_formula(h, d, opts.hbc) {
                    Ok(f) => {
                        deltas = Some(f.deltas);
                        Outcome::Value(f.value)
                    }
                    Err(e) => Outcome::from_result(Err(e)),
                },
            },
            Method::Cofactor => match degree {
                None => Outcome::NotApplicable(
                    "the cofactor count covers only S(d, d, d-1, d-1)".into(),
                ),
                Some(d) if opts.hbc => Outcome::from_result(dim_w_hbc(&mesh, d)),
                Some(d) => Outcome::from_result(dim_spline_cofactor(&mesh, d)),
            },
            Method::Oracle => Outcome::from_result(dim_oracle_with(&mesh, space, opts.hbc, opts.oracle)),
        };
        by_method.insert(method, outcome);
    }
    let values: Vec<usize> = by_method.values().filter_map(Outcome::value).collect();
    let agreement = values.windows(2).all(|w| w[0] == w[1]);
    DimReport {
        space,
        hbc: opts.hbc,
        division: match input {
            Input::Hierarchical(h) => Some(h.division()),
            Input::Flat(_) => None,
        },
        census: mesh.census(),
        deltas,
        by_method,
        agreement,
    }
}
