//! Seeded generators for planted test instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, VertexId};
use crate::wall::{build_grid, Mesh, Wall};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A `rows × cols` grid mesh with `extra` new vertices hung off it and
/// `chords` extra edges. New vertices attach to one to three random
/// vertices (mesh or earlier new ones); chords join random vertex pairs.
pub fn mesh_with_noise(
    seed: u64,
    rows: usize,
    cols: usize,
    extra: usize,
    chords: usize,
) -> (Graph, Mesh) {
    let mut r = rng(seed);
    let (mut g, m) = build_grid(rows, cols);
    for _ in 0..extra {
        let v = g.fresh_vertex();
        let pool: Vec<VertexId> = g.vertices().collect();
        let deg = r.gen_range(1..=3);
        for &u in pool.choose_multiple(&mut r, deg) {
            g.add_edge(v, u);
        }
    }
    let pool: Vec<VertexId> = g.vertices().collect();
    for _ in 0..chords {
        let u = *pool.choose(&mut r).unwrap();
        let v = *pool.choose(&mut r).unwrap();
        if u != v {
            g.add_edge(u, v);
        }
    }
    (g, m)
}

/// Adds a path of `len` new edges between `u` and `v` and returns it.
pub fn add_path(g: &mut Graph, u: VertexId, v: VertexId, len: usize) -> Vec<VertexId> {
    let mut path = vec![u];
    let mut prev = u;
    for _ in 1..len {
        let w = g.fresh_vertex();
        g.add_edge(prev, w);
        path.push(w);
        prev = w;
    }
    g.add_edge(prev, v);
    path.push(v);
    path
}

/// Random vertex of a grid mesh by coordinate.
pub fn grid_vertex(m: &Mesh, x: usize, y: usize) -> VertexId {
    m.horizontal[x - 1][y - 1]
}

/// Uniform coordinate in `1..=n`.
pub fn coord(r: &mut impl Rng, n: usize) -> usize {
    r.gen_range(1..=n)
}

/// Two crossing chords inside the middle brick of each wall: the corner
/// cycle of every such wall then carries a cross.
pub fn plant_brick_crosses(g: &mut Graph, walls: &[Wall]) {
    for w in walls {
        let bricks = w.mesh.bricks();
        let b = &bricks[bricks.len() / 2];
        g.add_edge(b[0], b[2]);
        g.add_edge(b[1], b[4]);
    }
}
