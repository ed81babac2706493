//! Plain-text edge lists.
//!
//! ```text
//! #zealots correct=0,4 incorrect=7
//! 0 1
//! 1 2
//! ```
//!
//! One `u v` pair per line with nonnegative integer ids. The optional
//! `#zealots` header lists the nodes pinned to the correct and the incorrect
//! state; any other line starting with `#` is a comment. Node ids are dense:
//! every id up to the largest one mentioned is a node.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeList {
    pub edges: Vec<(usize, usize)>,
    pub correct: Vec<usize>,
    pub incorrect: Vec<usize>,
}

impl EdgeList {
    /// Number of nodes implied by the largest id mentioned.
    pub fn node_count(&self) -> usize {
        self.edges
            .iter()
            .flat_map(|&(u, v)| [u, v])
            .chain(self.correct.iter().copied())
            .chain(self.incorrect.iter().copied())
            .max()
            .map_or(0, |m| m + 1)
    }

    pub fn n_free(&self) -> usize {
        let mut pinned: Vec<usize> = self.correct.iter().chain(&self.incorrect).copied().collect();
        pinned.sort_unstable();
        pinned.dedup();
        self.node_count() - pinned.len()
    }

    /// A cycle over `len` nodes with the given pinned ids.
    pub fn ring(len: usize, correct: Vec<usize>, incorrect: Vec<usize>) -> Self {
        let edges = (0..len).map(|i| (i, (i + 1) % len)).collect();
        EdgeList {
            edges,
            correct,
            incorrect,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut list = EdgeList::default();
        let mut seen_header = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("#zealots") {
                if seen_header {
                    return Err(parse_err(line_no, "duplicate #zealots header"));
                }
                seen_header = true;
                parse_header(rest, line_no, &mut list)?;
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (Some(u), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(parse_err(line_no, format!("expected \"u v\", got {line:?}")));
            };
            list.edges.push((parse_id(u, line_no)?, parse_id(v, line_no)?));
        }
        Ok(list)
    }
}

impl FromStr for EdgeList {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EdgeList::parse(s)
    }
}

impl std::fmt::Display for EdgeList {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |ids: &[usize]| {
            let mut s = String::new();
            for (i, id) in ids.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{id}");
            }
            s
        };
        writeln!(
            f,
            "#zealots correct={} incorrect={}",
            join(&self.correct),
            join(&self.incorrect)
        )?;
        for (u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_id(s: &str, line: usize) -> Result<usize> {
    s.parse().map_err(|_| parse_err(line, format!("invalid node id {s:?}")))
}

fn parse_header(rest: &str, line: usize, list: &mut EdgeList) -> Result<()> {
    for field in rest.split_whitespace() {
        let (key, ids) = field
            .split_once('=')
            .ok_or_else(|| parse_err(line, format!("expected key=ids, got {field:?}")))?;
        let ids = ids
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|s| parse_id(s, line))
            .collect::<Result<Vec<_>>>()?;
        match key {
            "correct" => list.correct = ids,
            "incorrect" => list.incorrect = ids,
            other => return Err(parse_err(line, format!("unknown header key {other:?}"))),
        }
    }
    Ok(())
}
