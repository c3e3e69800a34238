use std::collections::{HashMap, VecDeque};

use super::{EdgeId, SnakeGraph, VertexId, CCW_PAIR, CW_PAIR};
use crate::error::{Error, Result};

/// A set of snake-graph edges, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PerfectMatching {
    edges: Vec<EdgeId>,
}

impl PerfectMatching {
    pub fn from_edges(edges: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut edges: Vec<EdgeId> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        PerfectMatching { edges }
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn symmetric_difference(&self, other: &PerfectMatching) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self
            .edges
            .iter()
            .filter(|e| !other.contains(**e))
            .chain(other.edges.iter().filter(|e| !self.contains(**e)))
            .copied()
            .collect();
        out.sort_unstable();
        out
    }
}

/// Every vertex is covered by exactly one of the given edges.
pub fn is_perfect_matching(g: &SnakeGraph, edges: &[EdgeId]) -> bool {
    let mut seen = vec![0u8; g.vertex_count()];
    for &e in edges {
        if e >= g.edges().len() {
            return false;
        }
        for v in g.edge(e).ends {
            seen[v] += 1;
        }
    }
    seen.iter().all(|&c| c == 1)
}

fn boundary_pair_matching(g: &SnakeGraph, pair: [usize; 2]) -> PerfectMatching {
    if g.d() == 0 {
        return PerfectMatching::from_edges([0]);
    }
    let mut edges = Vec::new();
    for tile in g.tiles() {
        for slot in pair {
            let e = tile.edges[slot];
            if g.is_boundary_edge(e) {
                edges.push(e);
            }
        }
    }
    PerfectMatching::from_edges(edges)
}

/// P_-: boundary edges lying in the clockwise pair of their tile.
pub fn minimal_matching(g: &SnakeGraph) -> PerfectMatching {
    boundary_pair_matching(g, CW_PAIR)
}

/// P_+: boundary edges lying in the counterclockwise pair of their tile.
pub fn maximal_matching(g: &SnakeGraph) -> PerfectMatching {
    boundary_pair_matching(g, CCW_PAIR)
}

impl SnakeGraph {
    fn edges_in(&self, p: &PerfectMatching, j: usize) -> Vec<usize> {
        (0..4).filter(|&s| p.contains(self.tile(j).edges[s])).collect()
    }

    pub fn can_twist(&self, p: &PerfectMatching, j: usize) -> bool {
        j < self.d() && self.edges_in(p, j).len() == 2
    }

    /// Whether the matching holds the counterclockwise pair of tile j
    /// (`Some(false)` for the clockwise pair, `None` if not twistable).
    pub fn twist_pair(&self, p: &PerfectMatching, j: usize) -> Option<bool> {
        if j >= self.d() {
            return None;
        }
        match self.edges_in(p, j).as_slice() {
            [1, 3] => Some(true),
            [0, 2] => Some(false),
            _ => None,
        }
    }

    /// Replaces the two matching edges of tile j by the other two.
    pub fn twist(&self, p: &PerfectMatching, j: usize) -> Result<PerfectMatching> {
        if !self.can_twist(p, j) {
            return Err(Error::Precondition(format!("matching cannot twist on tile {}", j + 1)));
        }
        let tile = self.tile(j).edges;
        let kept = p.edges.iter().copied().filter(|e| !tile.contains(e));
        let added = tile.iter().copied().filter(|&e| !p.contains(e));
        Ok(PerfectMatching::from_edges(kept.chain(added)))
    }
}

struct Layer {
    /// For each incoming frontier state: (chosen edges, outgoing state).
    transitions: Vec<Vec<(Vec<EdgeId>, usize)>>,
}

fn edge_ends(g: &SnakeGraph, e: EdgeId) -> [VertexId; 2] {
    g.edge(e).ends
}

fn layers(g: &SnakeGraph) -> Vec<Layer> {
    let d = g.d();
    let glue = g.gluing_edges();
    let mut out = Vec::with_capacity(d);
    for j in 0..d {
        let tile = g.tile(j);
        let incoming: Vec<VertexId> = if j > 0 { edge_ends(g, glue[j - 1]).to_vec() } else { Vec::new() };
        let outgoing: Vec<VertexId> = if j + 1 < d { edge_ends(g, glue[j]).to_vec() } else { Vec::new() };
        let owned: Vec<EdgeId> = tile
            .edges
            .iter()
            .copied()
            .filter(|&e| j == 0 || e != glue[j - 1])
            .collect();
        let mut verts: Vec<VertexId> = tile.edges.iter().flat_map(|&e| edge_ends(g, e)).collect();
        verts.sort_unstable();
        verts.dedup();
        let mut transitions = Vec::with_capacity(1 << incoming.len());
        for state in 0..(1usize << incoming.len()) {
            let mut options = Vec::new();
            'subset: for mask in 0..(1usize << owned.len()) {
                let mut covered: Vec<VertexId> = incoming
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| state >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                let mut chosen = Vec::new();
                for (i, &e) in owned.iter().enumerate() {
                    if mask >> i & 1 == 0 {
                        continue;
                    }
                    for v in edge_ends(g, e) {
                        if covered.contains(&v) {
                            continue 'subset;
                        }
                        covered.push(v);
                    }
                    chosen.push(e);
                }
                if verts.iter().any(|v| !outgoing.contains(v) && !covered.contains(v)) {
                    continue;
                }
                let next = outgoing
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| covered.contains(v))
                    .fold(0, |acc, (i, _)| acc | 1 << i);
                options.push((chosen, next));
            }
            transitions.push(options);
        }
        out.push(Layer { transitions });
    }
    out
}

/// Exact, duplicate-free enumeration by a transfer scheme along the tiles.
/// The frontier state records which endpoints of the current gluing edge
/// are already covered.
pub fn enumerate_matchings(g: &SnakeGraph) -> Vec<PerfectMatching> {
    if g.d() == 0 {
        return vec![PerfectMatching::from_edges([0])];
    }
    let layers = layers(g);
    let d = layers.len();
    // feasible[j][s]: state s before tile j can be completed
    let mut feasible: Vec<Vec<bool>> = vec![Vec::new(); d + 1];
    feasible[d] = vec![true];
    for j in (0..d).rev() {
        feasible[j] = layers[j]
            .transitions
            .iter()
            .map(|opts| opts.iter().any(|(_, next)| feasible[j + 1].get(*next).copied().unwrap_or(false)))
            .collect();
    }
    let mut out = Vec::new();
    let mut chosen: Vec<EdgeId> = Vec::new();
    fn go(
        j: usize,
        state: usize,
        layers: &[Layer],
        feasible: &[Vec<bool>],
        chosen: &mut Vec<EdgeId>,
        out: &mut Vec<PerfectMatching>,
    ) {
        if j == layers.len() {
            out.push(PerfectMatching::from_edges(chosen.iter().copied()));
            return;
        }
        for (edges, next) in &layers[j].transitions[state] {
            if !feasible[j + 1].get(*next).copied().unwrap_or(false) {
                continue;
            }
            let mark = chosen.len();
            chosen.extend_from_slice(edges);
            go(j + 1, *next, layers, feasible, chosen, out);
            chosen.truncate(mark);
        }
    }
    if feasible[0][0] {
        go(0, 0, &layers, &feasible, &mut chosen, &mut out);
    }
    out
}

/// Number of perfect matchings, without listing them.
pub fn count_matchings(g: &SnakeGraph) -> u128 {
    if g.d() == 0 {
        return 1;
    }
    let mut counts: Vec<u128> = vec![1];
    for layer in layers(g) {
        let width = layer
            .transitions
            .iter()
            .flatten()
            .map(|(_, next)| next + 1)
            .max()
            .unwrap_or(1);
        let mut next_counts = vec![0u128; width];
        for (state, opts) in layer.transitions.iter().enumerate() {
            let c = counts.get(state).copied().unwrap_or(0);
            if c == 0 {
                continue;
            }
            for (_, next) in opts {
                next_counts[*next] += c;
            }
        }
        counts = next_counts;
    }
    counts.first().copied().unwrap_or(0)
}

/// Matchings as nodes, single twists as edges.
#[derive(Debug, Clone)]
pub struct TwistGraph {
    pub matchings: Vec<PerfectMatching>,
    /// (from, to, tile) with from < to.
    pub edges: Vec<(usize, usize, usize)>,
    index: HashMap<PerfectMatching, usize>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl TwistGraph {
    pub fn index_of(&self, p: &PerfectMatching) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// (tile, neighbour) pairs of a node.
    pub fn neighbours(&self, i: usize) -> &[(usize, usize)] {
        &self.adjacency[i]
    }

    pub fn is_connected(&self) -> bool {
        if self.matchings.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.matchings.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(i) = queue.pop_front() {
            for &(_, k) in &self.adjacency[i] {
                if !seen[k] {
                    seen[k] = true;
                    reached += 1;
                    queue.push_back(k);
                }
            }
        }
        reached == self.matchings.len()
    }
}

pub fn twist_graph(g: &SnakeGraph) -> TwistGraph {
    let matchings = enumerate_matchings(g);
    let index: HashMap<PerfectMatching, usize> = matchings.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut adjacency = vec![Vec::new(); matchings.len()];
    let mut edges = Vec::new();
    for (i, p) in matchings.iter().enumerate() {
        for j in 0..g.d() {
            if let Ok(q) = g.twist(p, j) {
                let k = index[&q];
                adjacency[i].push((j, k));
                if i < k {
                    edges.push((i, k, j));
                }
            }
        }
    }
    TwistGraph {
        matchings,
        edges,
        index,
        adjacency,
    }
}
