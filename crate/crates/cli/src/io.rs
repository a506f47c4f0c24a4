//! Instance files: graphs as edge lists or JSON, walls as path families.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use flatwall_core::graph::{Graph, VertexId, VertexSet};
use flatwall_core::wall::{build_elementary_wall, Mesh, Wall};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(u32, VertexId, VertexId)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallJson {
    pub horizontal: Vec<Vec<VertexId>>,
    pub vertical: Vec<Vec<VertexId>>,
    /// Omitted pegs default to the degree-two outer-cycle vertices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pegs: Option<Vec<VertexId>>,
}

impl GraphJson {
    pub fn of(g: &Graph) -> Self {
        GraphJson {
            vertices: g.vertices().collect(),
            edges: g.edges().collect(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        let mut g = Graph::new();
        for &v in &self.vertices {
            g.add_vertex(v);
        }
        for (k, &(id, u, v)) in self.edges.iter().enumerate() {
            g.insert_edge(id, u, v)
                .map_err(|e| anyhow!("edges[{k}]: {e}"))?;
        }
        Ok(g)
    }
}

impl WallJson {
    pub fn of(w: &Wall) -> Self {
        WallJson {
            horizontal: w.mesh.horizontal.clone(),
            vertical: w.mesh.vertical.clone(),
            pegs: Some(w.pegs.iter().copied().collect()),
        }
    }

    pub fn to_wall(&self, g: &Graph) -> Result<Wall> {
        let mesh = Mesh {
            horizontal: self.horizontal.clone(),
            vertical: self.vertical.clone(),
        };
        let w = match &self.pegs {
            None => Wall::from_mesh(g, mesh)?,
            Some(p) => {
                let w = Wall {
                    mesh,
                    pegs: p.iter().copied().collect::<VertexSet>(),
                };
                w.check(g)?;
                w
            }
        };
        Ok(w)
    }
}

/// Parses a graph. Text starting with `{` is JSON; anything else is an edge
/// list with one `u v` pair per line, `#` starting a comment.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        let gj: GraphJson = serde_json::from_str(text).context("graph JSON")?;
        return gj.to_graph();
    }
    let mut g = Graph::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let id = |k: usize| -> Result<VertexId> {
            fields[k].parse().map_err(|_| {
                anyhow!(
                    "line {}, field {}: `{}` is not a vertex id",
                    no + 1,
                    k + 1,
                    fields[k]
                )
            })
        };
        match fields.len() {
            1 => {
                g.add_vertex(id(0)?);
            }
            2 => {
                let (u, v) = (id(0)?, id(1)?);
                g.add_edge(u, v);
            }
            n => bail!("line {}: expected `u v`, found {n} fields", no + 1),
        }
    }
    Ok(g)
}

pub fn parse_wall(text: &str, g: &Graph) -> Result<Wall> {
    let wj: WallJson = serde_json::from_str(text).context("wall JSON")?;
    wj.to_wall(g).context("wall rejected")
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Where the wall of an instance comes from.
#[derive(Clone, Debug)]
pub enum WallSource<'a> {
    None,
    File(&'a Path),
    /// The elementary wall of this size, identified as `build_elementary_wall` does.
    Generated(usize),
}

/// Loads a graph and an optional wall. A generated wall without a graph
/// file stands for the bare elementary wall.
pub fn load_instance(graph: Option<&Path>, wall: WallSource) -> Result<(Graph, Option<Wall>)> {
    let g = match graph {
        Some(p) => parse_graph(&read(p)?).with_context(|| format!("in {}", p.display()))?,
        None => match wall {
            WallSource::Generated(r) => build_elementary_wall(r)?.0,
            _ => bail!("no graph given"),
        },
    };
    let w = match wall {
        WallSource::None => None,
        WallSource::File(p) => {
            Some(parse_wall(&read(p)?, &g).with_context(|| format!("in {}", p.display()))?)
        }
        WallSource::Generated(r) => {
            let (_, w) = build_elementary_wall(r)?;
            w.check(&g)
                .context("generated wall is not a wall of the graph")?;
            Some(w)
        }
    };
    Ok((g, w))
}

pub fn graph_json(g: &Graph) -> String {
    serde_json::to_string(&GraphJson::of(g)).expect("graph serializes")
}

pub fn wall_json(w: &Wall) -> String {
    serde_json::to_string(&WallJson::of(w)).expect("wall serializes")
}
