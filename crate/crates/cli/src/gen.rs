//! Seeded instance generators for `flatwall gen`.

use anyhow::Result;
use clap::ValueEnum;
use flatwall_core::flatwall::fit_layout;
use flatwall_core::graph::{Graph, VertexId, VertexSet};
use flatwall_core::instances::{plant_brick_crosses, rng};
use flatwall_core::wall::{build_elementary_wall, place_subwalls, Wall};
use flatwall_core::{Config, Profile};
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// The bare elementary wall.
    Pure,
    /// A crossing pair of chords in every candidate subwall.
    Cross,
    /// A hub and chords packed into one small region of the wall.
    Cluster,
    /// Apices joined to every wall vertex.
    Apex,
}

pub struct Spec {
    pub family: Family,
    pub size: usize,
    pub t: usize,
    pub r: usize,
    pub seed: u64,
    /// Apex count for [`Family::Apex`].
    pub apices: usize,
}

pub fn generate(s: &Spec) -> Result<(Graph, Wall)> {
    let (mut g, w) = build_elementary_wall(s.size)?;
    match s.family {
        Family::Pure => {}
        Family::Cross => {
            let cfg = Config::new(s.t, s.r, Profile::Relaxed)?;
            let (layout, count) = fit_layout(&cfg, s.size);
            let strip = place_subwalls(&g, &w, &layout, &VertexSet::new(), count)?;
            plant_brick_crosses(&mut g, &strip.subwalls);
        }
        Family::Cluster => {
            let mut r = rng(s.seed);
            let rows = 4.min(s.size - 2);
            let span = 8.min(s.size);
            let i0 = r.gen_range(1..=s.size - 1 - rows);
            let j0 = r.gen_range(1..=w.mesh.horizontal[i0].len() - span - 1);
            let pick = |r: &mut dyn rand::RngCore| -> VertexId {
                let i = r.gen_range(i0..i0 + rows);
                let p = &w.mesh.horizontal[i];
                p[r.gen_range(j0..(j0 + span).min(p.len()))]
            };
            let hub = g.fresh_vertex();
            for _ in 0..12 {
                let v = pick(&mut r);
                g.add_edge(hub, v);
            }
            for _ in 0..10 {
                let (u, v) = (pick(&mut r), pick(&mut r));
                if u != v {
                    g.add_edge(u, v);
                }
            }
        }
        Family::Apex => {
            let all: Vec<VertexId> = w.vertex_set().into_iter().collect();
            for _ in 0..s.apices {
                let a = g.fresh_vertex();
                for &v in &all {
                    g.add_edge(a, v);
                }
            }
        }
    }
    Ok((g, w))
}
