use super::{EdgeId, PerfectMatching, SnakeGraph};
use crate::error::{Error, Result};
use crate::triangulation::ArcId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassType {
    /// Two edges that do not share a vertex.
    I,
    /// Two edges sharing a vertex.
    II,
    /// One edge, touching a τ-diagonal.
    III,
    /// One edge, touching no τ-diagonal.
    IV,
}

impl ClassType {
    /// Admissible values of the signature entry for this class type.
    pub fn nu_range(self) -> &'static [i64] {
        match self {
            ClassType::I => &[-1, 0, 1],
            ClassType::II | ClassType::III => &[-1, 0],
            ClassType::IV => &[0, 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauClass {
    pub edges: Vec<EdgeId>,
    pub kind: ClassType,
}

/// τ-labeled edges grouped by the τ-diagonals they touch, in tile order.
pub fn tau_equivalence(g: &SnakeGraph, tau: ArcId) -> Result<Vec<TauClass>> {
    let tau_edges: Vec<EdgeId> = (0..g.edges().len())
        .filter(|&e| g.edge(e).label == tau && g.d() > 0)
        .collect();
    let diagonals: Vec<[usize; 2]> = g
        .tiles()
        .iter()
        .filter(|t| t.diagonal == tau)
        .map(|t| t.diagonal_ends)
        .collect();
    let touches = |e: EdgeId, diag: &[usize; 2]| g.edge(e).ends.iter().any(|v| diag.contains(v));
    let mut parent: Vec<usize> = (0..tau_edges.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for diag in &diagonals {
        let members: Vec<usize> = (0..tau_edges.len()).filter(|&i| touches(tau_edges[i], diag)).collect();
        for w in members.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut groups: Vec<(usize, Vec<EdgeId>)> = Vec::new();
    for (i, &edge) in tau_edges.iter().enumerate() {
        let root = find(&mut parent, i);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, v)) => v.push(edge),
            None => groups.push((root, vec![edge])),
        }
    }
    let position = |e: EdgeId| g.edge(e).first_tile.unwrap_or(0);
    groups.sort_by_key(|(_, v)| v.iter().map(|&e| (position(e), e)).min());
    let mut out = Vec::with_capacity(groups.len());
    for (_, edges) in groups {
        let kind = match edges.as_slice() {
            [a, b] => {
                let shared = g.edge(*a).ends.iter().any(|v| g.edge(*b).ends.contains(v));
                if shared {
                    ClassType::II
                } else {
                    ClassType::I
                }
            }
            [a] => {
                if diagonals.iter().any(|d| touches(*a, d)) {
                    ClassType::III
                } else {
                    ClassType::IV
                }
            }
            _ => {
                return Err(Error::Integrity(format!(
                    "a class of arc index {tau} has {} edges",
                    edges.len()
                )))
            }
        };
        out.push(TauClass { edges, kind });
    }
    Ok(out)
}

/// ν with p ∈ 𝒫^τ_ν: matched class edges minus one for types I-III, matched
/// class edges for type IV.
pub fn nu_signature(classes: &[TauClass], p: &PerfectMatching) -> Vec<i64> {
    classes
        .iter()
        .map(|c| {
            let held = c.edges.iter().filter(|&&e| p.contains(e)).count() as i64;
            if c.kind == ClassType::IV {
                held
            } else {
                held - 1
            }
        })
        .collect()
}
