//! Snake graphs built from crossing sequences.
//!
//! A tile is stored with four edge slots in the order
//! `[prev clockwise, prev counterclockwise, next clockwise, next counterclockwise]`:
//! "prev" edges come from the triangle the curve leaves, "next" edges from the
//! triangle it enters, and "clockwise" edges follow the diagonal in the
//! clockwise order of their triangle. Slots 0 and 2 form the clockwise pair,
//! slots 1 and 3 the counterclockwise pair.

mod decompose;
mod dot;
mod equivalence;
mod matching;

pub use decompose::Decomposition;
pub use dot::to_dot;
pub use equivalence::{nu_signature, tau_equivalence, ClassType, TauClass};
pub use matching::{
    count_matchings, enumerate_matchings, is_perfect_matching, maximal_matching, minimal_matching, twist_graph,
    PerfectMatching, TwistGraph,
};

use crate::error::{Error, Result};
use crate::triangulation::{ArcId, Triangulation};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Slots of the clockwise pair.
pub const CW_PAIR: [usize; 2] = [0, 2];
/// Slots of the counterclockwise pair.
pub const CCW_PAIR: [usize; 2] = [1, 3];

/// The ordered arcs crossed by a curve, relative to a fixed triangulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingSequence {
    /// For a curve that is itself an arc of the triangulation (no crossings).
    pub target: Option<ArcId>,
    /// The curve ends at an orbifold point; the crossings are those of its loop.
    pub pending: bool,
    pub crossings: Vec<ArcId>,
    pub start_triangle: Option<usize>,
}

impl CrossingSequence {
    pub fn arc_in_triangulation(a: ArcId) -> Self {
        CrossingSequence {
            target: Some(a),
            pending: false,
            crossings: Vec::new(),
            start_triangle: None,
        }
    }

    pub fn new(crossings: Vec<ArcId>, start_triangle: Option<usize>) -> Self {
        CrossingSequence {
            target: None,
            pending: false,
            crossings,
            start_triangle,
        }
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnakeEdge {
    pub ends: [VertexId; 2],
    pub label: ArcId,
    /// Index of the first tile containing the edge (`None` only for d = 0).
    pub first_tile: Option<usize>,
    /// Shared by two consecutive tiles.
    pub gluing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tile {
    pub diagonal: ArcId,
    pub edges: [EdgeId; 4],
    pub diagonal_ends: [VertexId; 2],
    /// True for the 1st, 3rd, 5th, ... tile.
    pub agrees_with_orientation: bool,
}

impl Tile {
    pub fn cw_pair(&self) -> [EdgeId; 2] {
        [self.edges[0], self.edges[2]]
    }

    pub fn ccw_pair(&self) -> [EdgeId; 2] {
        [self.edges[1], self.edges[3]]
    }
}

/// Per-tile data before vertices are identified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct TileSpec {
    pub diagonal: ArcId,
    pub labels: [ArcId; 4],
    /// Slot (2 or 3) of the edge glued to the next tile.
    pub next_glue: Option<usize>,
    /// Slot (0 or 1) of the edge glued to the previous tile.
    pub prev_glue: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnakeGraph {
    tiles: Vec<Tile>,
    edges: Vec<SnakeEdge>,
    vertex_count: usize,
    gluing: Vec<EdgeId>,
    specs: Vec<TileSpec>,
}

impl SnakeGraph {
    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn tile(&self, j: usize) -> &Tile {
        &self.tiles[j]
    }

    pub fn edges(&self) -> &[SnakeEdge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &SnakeEdge {
        &self.edges[e]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of tiles d.
    pub fn d(&self) -> usize {
        self.tiles.len()
    }

    /// Gluing edge between tile j and tile j+1 at position j.
    pub fn gluing_edges(&self) -> &[EdgeId] {
        &self.gluing
    }

    pub fn is_boundary_edge(&self, e: EdgeId) -> bool {
        !self.edges[e].gluing
    }

    /// Tiles containing an edge (one or two).
    pub fn tiles_of_edge(&self, e: EdgeId) -> Vec<usize> {
        match self.edges[e].first_tile {
            None => Vec::new(),
            Some(t) if self.edges[e].gluing => vec![t, t + 1],
            Some(t) => vec![t],
        }
    }

    /// Diagonal labels in tile order.
    pub fn diagonals(&self) -> Vec<ArcId> {
        self.tiles.iter().map(|t| t.diagonal).collect()
    }

    /// Snake graph of a consecutive range of tiles, with the map from its
    /// edge ids to the edge ids of `self`.
    pub fn restrict(&self, range: std::ops::Range<usize>) -> Result<(SnakeGraph, Vec<EdgeId>)> {
        if range.start >= range.end || range.end > self.d() {
            return Err(Error::Precondition(format!(
                "tile range {}..{} is not inside 0..{}",
                range.start,
                range.end,
                self.d()
            )));
        }
        let mut specs: Vec<TileSpec> = self.specs[range.clone()].to_vec();
        specs[0].prev_glue = None;
        specs.last_mut().expect("non-empty").next_glue = None;
        let sub = assemble(specs);
        let mut map = vec![usize::MAX; sub.edges.len()];
        for (j, tile) in sub.tiles.iter().enumerate() {
            for (slot, &e) in tile.edges.iter().enumerate() {
                map[e] = self.tiles[range.start + j].edges[slot];
            }
        }
        Ok((sub, map))
    }
}

/// Walks the crossing sequence through the triangulation and returns, per
/// crossing, the half-edge (triangle, slot) it leaves through and the one it
/// enters through.
/// A side of a triangle as (triangle, slot).
type HalfEdge = (usize, usize);

fn walk(t: &Triangulation, crossings: &[ArcId], start: usize) -> Result<Vec<(HalfEdge, HalfEdge)>> {
    let mut out = Vec::with_capacity(crossings.len());
    let mut current = start;
    let mut entry: Option<usize> = None;
    for (j, &a) in crossings.iter().enumerate() {
        let tri = t.triangles()[current];
        let exits: Vec<usize> = (0..3).filter(|&s| tri[s] == a && Some(s) != entry).collect();
        let exit = match exits.as_slice() {
            [s] => *s,
            [] => {
                return Err(Error::crossing(
                    j + 1,
                    format!(
                        "arc '{}' is not a side of triangle {current} reached by the previous crossing",
                        t.arc(a).id
                    ),
                ))
            }
            _ => {
                return Err(Error::crossing(
                    j + 1,
                    format!("arc '{}' appears twice in triangle {current}", t.arc(a).id),
                ))
            }
        };
        let next = t.opposite(current, exit).ok_or_else(|| {
            Error::crossing(j + 1, format!("arc '{}' is a boundary arc", t.arc(a).id))
        })?;
        out.push(((current, exit), next));
        current = next.0;
        entry = Some(next.1);
    }
    Ok(out)
}

fn resolve_start(t: &Triangulation, c: &CrossingSequence) -> Result<usize> {
    let first = c.crossings[0];
    if let Some(s) = c.start_triangle {
        if s >= t.triangles().len() {
            return Err(Error::OutOfRange {
                what: "start triangle",
                index: s,
                valid: format!("0..{}", t.triangles().len()),
            });
        }
        return Ok(s);
    }
    let mut candidates: Vec<usize> = t.half_edges(first).into_iter().map(|(tri, _)| tri).collect();
    candidates.dedup();
    if candidates.len() == 2 && c.crossings.len() == 1 {
        return Err(Error::crossing(
            1,
            format!(
                "a single crossing of ordinary arc '{}' needs an explicit start triangle",
                t.arc(first).id
            ),
        ));
    }
    let valid: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&s| walk(t, &c.crossings, s).is_ok())
        .collect();
    match valid.as_slice() {
        [s] => Ok(*s),
        [] => {
            let first_try = candidates.first().copied().unwrap_or(0);
            Err(walk(t, &c.crossings, first_try)
                .err()
                .unwrap_or_else(|| Error::crossing(1, "no consistent start triangle")))
        }
        _ => Err(Error::crossing(1, "start triangle is ambiguous; give it explicitly")),
    }
}

/// Builds the snake graph of a curve.
pub fn build_snake_graph(t: &Triangulation, c: &CrossingSequence) -> Result<SnakeGraph> {
    for (j, &a) in c.crossings.iter().enumerate() {
        if a >= t.arcs().len() {
            return Err(Error::crossing(j + 1, format!("unknown arc index {a}")));
        }
        if t.arc(a).boundary {
            return Err(Error::crossing(j + 1, format!("arc '{}' is a boundary arc", t.arc(a).id)));
        }
    }
    if c.crossings.is_empty() {
        let target = c
            .target
            .ok_or_else(|| Error::Precondition("a curve without crossings must name its arc".into()))?;
        if target >= t.arcs().len() {
            return Err(Error::Precondition(format!("unknown target arc index {target}")));
        }
        return Ok(SnakeGraph {
            tiles: Vec::new(),
            edges: vec![SnakeEdge {
                ends: [0, 1],
                label: target,
                first_tile: None,
                gluing: false,
            }],
            vertex_count: 2,
            gluing: Vec::new(),
            specs: Vec::new(),
        });
    }
    let start = resolve_start(t, c)?;
    let steps = walk(t, &c.crossings, start)?;
    let d = steps.len();
    let mut specs = Vec::with_capacity(d);
    for (j, &((pt, ps), (nt, ns))) in steps.iter().enumerate() {
        let prev = t.triangles()[pt];
        let next = t.triangles()[nt];
        let labels = [prev[(ps + 1) % 3], prev[(ps + 2) % 3], next[(ns + 1) % 3], next[(ns + 2) % 3]];
        let next_glue = (j + 1 < d).then(|| {
            let (_, exit) = steps[j + 1].0;
            let zeta = 3 - ns - exit;
            if (ns + 1) % 3 == zeta {
                2
            } else {
                3
            }
        });
        let prev_glue = (j > 0).then(|| {
            let (_, entry) = steps[j - 1].1;
            let zeta = 3 - entry - ps;
            if (ps + 1) % 3 == zeta {
                0
            } else {
                1
            }
        });
        specs.push(TileSpec {
            diagonal: c.crossings[j],
            labels,
            next_glue,
            prev_glue,
        });
    }
    Ok(assemble(specs))
}

/// Identifies vertices along the gluings and assigns global ids.
pub(crate) fn assemble(specs: Vec<TileSpec>) -> SnakeGraph {
    // local corners per tile: 0 = c_prev, 1 = c_next, 2 = P, 3 = Q
    const ENDS: [[usize; 2]; 4] = [[0, 3], [0, 2], [1, 2], [1, 3]];
    let d = specs.len();
    let mut parent: Vec<usize> = (0..4 * d).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for j in 0..d.saturating_sub(1) {
        let out_slot = specs[j].next_glue.expect("glued tile");
        let in_slot = specs[j + 1].prev_glue.expect("glued tile");
        let x = 4 * j + ENDS[out_slot][1];
        let y = 4 * (j + 1) + ENDS[in_slot][1];
        let (a, b) = (find(&mut parent, x), find(&mut parent, 4 * (j + 1)));
        parent[a] = b;
        let (a, b) = (find(&mut parent, 4 * j + 1), find(&mut parent, y));
        parent[a] = b;
    }
    let mut ids = vec![usize::MAX; 4 * d];
    let mut root_id = std::collections::HashMap::new();
    for (v, id) in ids.iter_mut().enumerate() {
        let r = find(&mut parent, v);
        let next = root_id.len();
        *id = *root_id.entry(r).or_insert(next);
    }
    let mut tiles = Vec::with_capacity(d);
    let mut edges: Vec<SnakeEdge> = Vec::with_capacity(3 * d + 1);
    let mut gluing = Vec::with_capacity(d.saturating_sub(1));
    let mut carried: Option<EdgeId> = None;
    for (j, spec) in specs.iter().enumerate() {
        let mut slots = [0; 4];
        for slot in 0..4 {
            if Some(slot) == spec.prev_glue {
                slots[slot] = carried.take().expect("gluing edge from previous tile");
                continue;
            }
            let ends = ENDS[slot].map(|c| ids[4 * j + c]);
            let glued = Some(slot) == spec.next_glue;
            edges.push(SnakeEdge {
                ends,
                label: spec.labels[slot],
                first_tile: Some(j),
                gluing: glued,
            });
            slots[slot] = edges.len() - 1;
            if glued {
                carried = Some(edges.len() - 1);
                gluing.push(edges.len() - 1);
            }
        }
        tiles.push(Tile {
            diagonal: spec.diagonal,
            edges: slots,
            diagonal_ends: [ids[4 * j + 2], ids[4 * j + 3]],
            agrees_with_orientation: j % 2 == 0,
        });
    }
    SnakeGraph {
        tiles,
        edges,
        vertex_count: root_id.len(),
        gluing,
        specs,
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::triangulation::{ArcRecord, Triangulation};

    pub fn example() -> Triangulation {
        Triangulation::from_ids(
            vec![
                ArcRecord::pending("1"),
                ArcRecord::pending("2"),
                ArcRecord::ordinary("3"),
                ArcRecord::boundary("a"),
                ArcRecord::boundary("b"),
            ],
            &[["3", "b", "a"], ["3", "1", "2"]],
        )
        .unwrap()
    }

    /// Crossing sequence of the example arc gamma, as arc indices.
    pub const GAMMA: [usize; 7] = [2, 0, 1, 0, 1, 0, 2];
}
