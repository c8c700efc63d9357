//! Plain-text problem files.
//!
//! ```text
//! # perfect matching on six vertices, edge 0-1 required
//! degrees: 1 1 1 1 1 1
//! require: 0 1
//! ```
//!
//! Bipartite files use `left-degrees:` and `right-degrees:` instead; in
//! `require:`/`forbid:` lines the first vertex is on the left.

use std::fmt;

use thiserror::Error;

use crate::model::{
    BipartiteGraph, BipartiteInstance, DegreeSequence, Edge, GenericInstance, LabelledGraph,
    ModelError, Part, ProblemInstance,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Generic,
    Bipartite,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Generic => "generic",
            Mode::Bipartite => "bipartite",
        }
    }
}

/// A parse or validation failure; `line` is 1-based, 0 for whole-file problems.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProblemFile {
    pub degrees: Option<Vec<u64>>,
    pub left: Option<Vec<u64>>,
    pub right: Option<Vec<u64>>,
    /// Edges with the line they came from.
    pub require: Vec<(Edge, usize)>,
    pub forbid: Vec<(Edge, usize)>,
}

fn numbers(line: usize, body: &str) -> Result<Vec<u64>, ParseError> {
    body.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| err(line, format!("`{t}` is not a nonnegative integer")))
        })
        .collect()
}

fn edge(line: usize, body: &str) -> Result<Edge, ParseError> {
    match numbers(line, body)?.as_slice() {
        &[u, v] => Ok((u as usize, v as usize)),
        other => Err(err(
            line,
            format!("an edge needs exactly two vertices, found {}", other.len()),
        )),
    }
}

fn set_once(
    slot: &mut Option<Vec<u64>>,
    line: usize,
    key: &str,
    v: Vec<u64>,
) -> Result<(), ParseError> {
    if slot.replace(v).is_some() {
        return Err(err(line, format!("`{key}` given twice")));
    }
    Ok(())
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    let mut p = ProblemFile::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, body) = content.split_once(':').ok_or_else(|| {
            err(
                line,
                format!("expected `directive: values`, found `{content}`"),
            )
        })?;
        let key = key.trim();
        match key {
            "degrees" => set_once(&mut p.degrees, line, key, numbers(line, body)?)?,
            "left-degrees" => set_once(&mut p.left, line, key, numbers(line, body)?)?,
            "right-degrees" => set_once(&mut p.right, line, key, numbers(line, body)?)?,
            "require" => p.require.push((edge(line, body)?, line)),
            "forbid" => p.forbid.push((edge(line, body)?, line)),
            _ => return Err(err(line, format!("unknown directive `{key}`"))),
        }
    }
    p.mode()?;
    Ok(p)
}

impl ProblemFile {
    /// Generic when `degrees:` is present, bipartite when both side directives are.
    pub fn mode(&self) -> Result<Mode, ParseError> {
        match (&self.degrees, &self.left, &self.right) {
            (Some(_), None, None) => Ok(Mode::Generic),
            (None, Some(_), Some(_)) => Ok(Mode::Bipartite),
            (None, None, None) => Err(err(0, "no degree directive")),
            (Some(_), _, _) => Err(err(
                0,
                "`degrees:` cannot be combined with `left-degrees:`/`right-degrees:`",
            )),
            _ => Err(err(
                0,
                "bipartite files need both `left-degrees:` and `right-degrees:`",
            )),
        }
    }

    pub fn check_mode(&self, wanted: Option<Mode>) -> Result<Mode, ParseError> {
        let found = self.mode()?;
        match wanted {
            Some(w) if w != found => Err(err(
                0,
                format!(
                    "file describes a {} instance, not {}",
                    found.name(),
                    w.name()
                ),
            )),
            _ => Ok(found),
        }
    }

    pub fn require_edges(&self) -> Vec<Edge> {
        self.require.iter().map(|e| e.0).collect()
    }

    pub fn forbid_edges(&self) -> Vec<Edge> {
        self.forbid.iter().map(|e| e.0).collect()
    }

    fn sizes(&self) -> (usize, usize) {
        match self.mode() {
            Ok(Mode::Generic) => (self.degrees.as_ref().map_or(0, Vec::len), 0),
            _ => (
                self.left.as_ref().map_or(0, Vec::len),
                self.right.as_ref().map_or(0, Vec::len),
            ),
        }
    }

    /// Checks every listed edge against the vertex ranges, reporting the offending line.
    fn check_edges(&self, edges: &[(Edge, usize)]) -> Result<(), ParseError> {
        let bipartite = self.mode()? == Mode::Bipartite;
        let (a, b) = self.sizes();
        let mut seen = std::collections::BTreeSet::new();
        for &((u, v), line) in edges {
            let ok = if bipartite {
                u < a && v < b
            } else {
                u < a && v < a
            };
            if !ok {
                return Err(err(line, format!("edge {u} {v} is out of range")));
            }
            if !bipartite && u == v {
                return Err(err(line, format!("self-loop at vertex {u}")));
            }
            let k = if bipartite {
                (u, v)
            } else {
                (u.min(v), u.max(v))
            };
            if !seen.insert(k) {
                return Err(err(line, format!("edge {u} {v} listed twice")));
            }
        }
        Ok(())
    }

    /// Validated graphs: `(degrees, require, forbid)` for generic files.
    pub fn generic_parts(
        &self,
    ) -> Result<(DegreeSequence, LabelledGraph, LabelledGraph), ParseError> {
        if self.mode()? != Mode::Generic {
            return Err(err(0, "not a generic problem"));
        }
        self.check_edges(&self.require)?;
        self.check_edges(&self.forbid)?;
        let d = DegreeSequence::generic(self.degrees.clone().unwrap_or_default());
        let n = d.len();
        let g = |e: &[(Edge, usize)]| {
            LabelledGraph::new(n, e.iter().map(|x| x.0)).map_err(|m| err(0, m.to_string()))
        };
        Ok((d, g(&self.require)?, g(&self.forbid)?))
    }

    pub fn bipartite_parts(
        &self,
    ) -> Result<
        (
            DegreeSequence,
            DegreeSequence,
            BipartiteGraph,
            BipartiteGraph,
        ),
        ParseError,
    > {
        if self.mode()? != Mode::Bipartite {
            return Err(err(0, "not a bipartite problem"));
        }
        self.check_edges(&self.require)?;
        self.check_edges(&self.forbid)?;
        let s = DegreeSequence::new(self.left.clone().unwrap_or_default(), Part::Left);
        let t = DegreeSequence::new(self.right.clone().unwrap_or_default(), Part::Right);
        let (a, b) = (s.len(), t.len());
        let g = |e: &[(Edge, usize)]| {
            BipartiteGraph::new(a, b, e.iter().map(|x| x.0)).map_err(|m| err(0, m.to_string()))
        };
        Ok((s, t, g(&self.require)?, g(&self.forbid)?))
    }

    /// The instance with `require:` edges required and `forbid:` edges forbidden.
    pub fn instance(&self) -> Result<ProblemInstance, ParseError> {
        let model = |m: ModelError| err(0, m.to_string());
        match self.mode()? {
            Mode::Generic => {
                let (d, r, f) = self.generic_parts()?;
                Ok(ProblemInstance::Generic(
                    GenericInstance::new(d, r, f).map_err(model)?,
                ))
            }
            Mode::Bipartite => {
                let (s, t, r, f) = self.bipartite_parts()?;
                Ok(ProblemInstance::Bipartite(
                    BipartiteInstance::new(s, t, r, f).map_err(model)?,
                ))
            }
        }
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for ProblemFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(d) = &self.degrees {
            writeln!(f, "degrees: {}", join(d))?;
        }
        if let Some(d) = &self.left {
            writeln!(f, "left-degrees: {}", join(d))?;
        }
        if let Some(d) = &self.right {
            writeln!(f, "right-degrees: {}", join(d))?;
        }
        for ((u, v), _) in &self.require {
            writeln!(f, "require: {u} {v}")?;
        }
        for ((u, v), _) in &self.forbid {
            writeln!(f, "forbid: {u} {v}")?;
        }
        Ok(())
    }
}
