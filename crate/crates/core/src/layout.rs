//! Force-directed layout: spring attraction along edges, pairwise
//! repulsion, linear cooling, positions clamped to the frame.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::MentionGraph;

pub const DEFAULT_ITERATIONS: usize = 500;

#[derive(Debug, Error)]
pub enum LayoutError {
    #[error("graph is empty")]
    EmptyGraph,
    #[error("invalid layout parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub positions: BTreeMap<String, (f64, f64)>,
    pub width: f64,
    pub height: f64,
}

/// Per-run diagnostics: worst per-iteration magnitude of the summed
/// repulsive forces, which pairwise antisymmetry keeps near zero.
#[derive(Debug, Clone, Default)]
pub struct LayoutTrace {
    pub max_repulsion_residual: f64,
}

/// Fruchterman–Reingold layout with k = sqrt(area / |V|), repulsion k²/d
/// over all pairs and attraction d²/k along edges (unweighted). The
/// temperature cools linearly from 0.1·min(width, height) to zero.
/// Deterministic for a fixed `(graph, seed)`.
pub fn layout_graph(
    g: &MentionGraph,
    width: f64,
    height: f64,
    iterations: usize,
    seed: u64,
) -> Result<Layout, LayoutError> {
    layout_graph_traced(g, width, height, iterations, seed).map(|(l, _)| l)
}

pub fn layout_graph_traced(
    g: &MentionGraph,
    width: f64,
    height: f64,
    iterations: usize,
    seed: u64,
) -> Result<(Layout, LayoutTrace), LayoutError> {
    if g.is_empty() {
        return Err(LayoutError::EmptyGraph);
    }
    if !(width > 0.0 && height > 0.0) || iterations == 0 {
        return Err(LayoutError::InvalidParams(
            "width, height and iterations must be positive".into(),
        ));
    }
    let handles: Vec<String> = g.vertices().map(|(h, _)| h.to_string()).collect();
    let n = handles.len();
    let mut trace = LayoutTrace::default();

    if n == 1 {
        let mut positions = BTreeMap::new();
        positions.insert(handles[0].clone(), (width / 2.0, height / 2.0));
        return Ok((
            Layout {
                positions,
                width,
                height,
            },
            trace,
        ));
    }

    let index: BTreeMap<&str, usize> = handles
        .iter()
        .enumerate()
        .map(|(i, h)| (h.as_str(), i))
        .collect();
    let edges: Vec<(usize, usize)> = g.edges().map(|(a, b, _)| (index[a], index[b])).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.gen_range(0.0..width), rng.gen_range(0.0..height)))
        .collect();

    let k = (width * height / n as f64).sqrt();
    let t0 = 0.1 * width.min(height);
    const EPS: f64 = 1e-9;

    for iter in 0..iterations {
        let t = t0 * (1.0 - iter as f64 / iterations as f64);
        let mut disp = vec![(0.0f64, 0.0f64); n];
        let mut rep = vec![(0.0f64, 0.0f64); n];

        // repulsion, applied antisymmetrically per pair
        for i in 0..n {
            for j in (i + 1)..n {
                let dx = pos[i].0 - pos[j].0;
                let dy = pos[i].1 - pos[j].1;
                let d = (dx * dx + dy * dy).sqrt().max(EPS);
                let f = k * k / d;
                let (fx, fy) = (dx / d * f, dy / d * f);
                rep[i].0 += fx;
                rep[i].1 += fy;
                rep[j].0 -= fx;
                rep[j].1 -= fy;
            }
        }
        // pairwise antisymmetry keeps the net repulsive force near zero
        let rep_sum = rep
            .iter()
            .fold((0.0, 0.0), |(sx, sy), (x, y)| (sx + x, sy + y));
        let residual = (rep_sum.0 * rep_sum.0 + rep_sum.1 * rep_sum.1).sqrt();
        trace.max_repulsion_residual = trace.max_repulsion_residual.max(residual);
        for i in 0..n {
            disp[i].0 += rep[i].0;
            disp[i].1 += rep[i].1;
        }

        // attraction along edges
        for &(i, j) in &edges {
            let dx = pos[i].0 - pos[j].0;
            let dy = pos[i].1 - pos[j].1;
            let d = (dx * dx + dy * dy).sqrt().max(EPS);
            let f = d * d / k;
            let (fx, fy) = (dx / d * f, dy / d * f);
            disp[i].0 -= fx;
            disp[i].1 -= fy;
            disp[j].0 += fx;
            disp[j].1 += fy;
        }

        // displace, limited by temperature, clamped to the frame
        for i in 0..n {
            let (dx, dy) = disp[i];
            let len = (dx * dx + dy * dy).sqrt().max(EPS);
            let step = len.min(t);
            pos[i].0 = (pos[i].0 + dx / len * step).clamp(0.0, width);
            pos[i].1 = (pos[i].1 + dy / len * step).clamp(0.0, height);
        }
    }

    let positions = handles.into_iter().zip(pos).collect();
    Ok((
        Layout {
            positions,
            width,
            height,
        },
        trace,
    ))
}
