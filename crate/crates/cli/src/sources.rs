//! Input resolution: files on disk or `kind:args` builtins for graphs and
//! relations.

use std::fs;
use std::path::Path;

use growthlab::graph::half_graph;
use growthlab::witness::fixtures;
use growthlab::{ClassSpec, FinRelation, Graph, GroupExpr};

use crate::CliError;

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn expression(text: Option<&str>, file: Option<&Path>) -> Result<GroupExpr, CliError> {
    let src = match (text, file) {
        (Some(t), None) => t.to_string(),
        (None, Some(p)) => read(p)?,
        _ => return Err(CliError::Input("give exactly one of --expr or an expression file".into())),
    };
    Ok(GroupExpr::parse(src.trim())?)
}

fn numbers(args: &[&str], src: &str) -> Result<Vec<usize>, CliError> {
    args.iter()
        .map(|a| a.parse().map_err(|_| CliError::Input(format!("bad number {a:?} in {src:?}"))))
        .collect()
}

/// `half:t`, `empty:n`, `complete:n`, `path:k`, `biclique:s:t`, or a graph
/// file.
pub fn graph(src: &str) -> Result<Graph, CliError> {
    let mut parts = src.split(':');
    let kind = parts.next().unwrap_or_default();
    let args: Vec<&str> = parts.collect();
    let builtin = match (kind, args.len()) {
        ("half", 1) => Some(half_graph(numbers(&args, src)?[0])),
        ("empty", 1) => Some(Graph::empty(numbers(&args, src)?[0])),
        ("complete", 1) => Some(Graph::complete(numbers(&args, src)?[0])),
        ("path", 1) => Some(Graph::path(numbers(&args, src)?[0])),
        ("biclique", 2) => {
            let n = numbers(&args, src)?;
            Some(Graph::biclique(n[0], n[1]))
        }
        _ => None,
    };
    match builtin {
        Some(g) => Ok(g),
        None => Ok(Graph::parse(&read(Path::new(src))?)?),
    }
}

pub fn class(
    file: Option<&Path>,
    generators: &[String],
    forbidden: &[String],
) -> Result<ClassSpec, CliError> {
    match (file, generators.is_empty(), forbidden.is_empty()) {
        (Some(p), true, true) => Ok(ClassSpec::parse(&read(p)?)?),
        (None, false, true) => Ok(ClassSpec::generators(generators.iter().map(|s| graph(s)).collect::<Result<_, _>>()?)),
        (None, true, false) => Ok(ClassSpec::forbidden(forbidden.iter().map(|s| graph(s)).collect::<Result<_, _>>()?)),
        _ => Err(CliError::Input(
            "give exactly one of --class, --generators or --forbidden".into(),
        )),
    }
}

/// `e1e2:m0`, `less:a`, `pairing:a`, `pair-parity`, `half:t`, `empty:a:r`,
/// `full:a:r`, or a relation file.
pub fn relation(src: &str) -> Result<FinRelation, CliError> {
    let mut parts = src.split(':');
    let kind = parts.next().unwrap_or_default();
    let args: Vec<&str> = parts.collect();
    let nums = || -> Result<Vec<u32>, CliError> {
        Ok(numbers(&args, src)?.into_iter().map(|v| v as u32).collect())
    };
    let rel = match (kind, args.len()) {
        ("e1e2", 1) => fixtures::e1e2(nums()?[0])?,
        ("less", 1) => fixtures::less_than(nums()?[0])?,
        ("pairing", 1) => fixtures::pairing(nums()?[0])?,
        ("pair-parity", 0) => fixtures::pair_parity()?,
        ("half", 1) => fixtures::half_graph_relation(nums()?[0])?,
        ("empty", 2) => {
            let n = nums()?;
            fixtures::empty(n[0], n[1])?
        }
        ("full", 2) => {
            let n = nums()?;
            fixtures::full(n[0], n[1])?
        }
        _ => FinRelation::parse(&read(Path::new(src))?)?,
    };
    Ok(rel)
}
