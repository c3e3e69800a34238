use super::{EdgeId, PerfectMatching, SnakeGraph};
use crate::error::{Error, Result};

/// Splitting of a snake graph at a list of gluing edges.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub pieces: Vec<SnakeGraph>,
    /// Per piece: piece edge id ↦ edge id of the whole graph.
    pub edge_maps: Vec<Vec<EdgeId>>,
    pub cuts: Vec<EdgeId>,
}

impl Decomposition {
    /// Cuts `g` at the given gluing edges, which must appear in increasing
    /// position along the snake.
    pub fn new(g: &SnakeGraph, cuts: &[EdgeId]) -> Result<Self> {
        let mut positions = Vec::with_capacity(cuts.len());
        for &u in cuts {
            let pos = g
                .gluing_edges()
                .iter()
                .position(|&e| e == u)
                .ok_or_else(|| Error::Precondition(format!("edge {u} is not a gluing edge")))?;
            if positions.last().is_some_and(|&p| p >= pos) {
                return Err(Error::Precondition("cut edges must be in increasing position".into()));
            }
            positions.push(pos);
        }
        if g.d() == 0 {
            return Ok(Decomposition {
                pieces: vec![g.clone()],
                edge_maps: vec![vec![0]],
                cuts: Vec::new(),
            });
        }
        let mut bounds = vec![0];
        bounds.extend(positions.iter().map(|p| p + 1));
        bounds.push(g.d());
        let mut pieces = Vec::new();
        let mut edge_maps = Vec::new();
        for w in bounds.windows(2) {
            let (piece, map) = g.restrict(w[0]..w[1])?;
            pieces.push(piece);
            edge_maps.push(map);
        }
        Ok(Decomposition {
            pieces,
            edge_maps,
            cuts: cuts.to_vec(),
        })
    }

    /// Sends a matching of the whole graph to one matching per piece: keep
    /// its edges in each piece, and add a cut edge to a piece whenever both of
    /// its endpoints are still uncovered there. Two cuts bounding a one-tile
    /// piece may share a vertex, so coverage is updated as cuts are added.
    pub fn decompose_matching(&self, p: &PerfectMatching) -> Result<Vec<PerfectMatching>> {
        let mut out = Vec::with_capacity(self.pieces.len());
        for (piece, map) in self.pieces.iter().zip(&self.edge_maps) {
            let mut chosen: Vec<EdgeId> = Vec::new();
            let mut pending_cuts = Vec::new();
            for (e, &pe) in map.iter().enumerate() {
                if self.cuts.contains(&pe) {
                    pending_cuts.push(e);
                } else if p.contains(pe) {
                    chosen.push(e);
                }
            }
            let mut covered = vec![false; piece.vertex_count()];
            for &e in &chosen {
                for v in piece.edge(e).ends {
                    covered[v] = true;
                }
            }
            for e in pending_cuts {
                let [a, b] = piece.edge(e).ends;
                if !covered[a] && !covered[b] {
                    covered[a] = true;
                    covered[b] = true;
                    chosen.push(e);
                }
            }
            let q = PerfectMatching::from_edges(chosen);
            if !super::is_perfect_matching(piece, q.edges()) {
                return Err(Error::Integrity("restriction is not a perfect matching of the piece".into()));
            }
            out.push(q);
        }
        Ok(out)
    }

    /// Every cut edge lies in at least one of the two adjacent parts.
    pub fn is_compatible(&self, parts: &[PerfectMatching]) -> bool {
        parts.len() == self.pieces.len()
            && self.cuts.iter().enumerate().all(|(i, &u)| {
                self.holds(i, &parts[i], u) || self.holds(i + 1, &parts[i + 1], u)
            })
    }

    fn holds(&self, piece: usize, part: &PerfectMatching, parent_edge: EdgeId) -> bool {
        part.edges().iter().any(|&e| self.edge_maps[piece][e] == parent_edge)
    }

    /// Inverse of [`Self::decompose_matching`] on compatible tuples: a cut
    /// edge is kept iff both adjacent parts contain it.
    pub fn recombine(&self, parts: &[PerfectMatching]) -> Result<PerfectMatching> {
        if !self.is_compatible(parts) {
            return Err(Error::Precondition("parts are not compatible along the cuts".into()));
        }
        let mut edges = Vec::new();
        for (i, part) in parts.iter().enumerate() {
            for &e in part.edges() {
                let pe = self.edge_maps[i][e];
                if let Some(c) = self.cuts.iter().position(|&u| u == pe) {
                    // count the shared edge once, from its left piece
                    if c == i && self.holds(i + 1, &parts[i + 1], pe) {
                        edges.push(pe);
                    }
                } else {
                    edges.push(pe);
                }
            }
        }
        Ok(PerfectMatching::from_edges(edges))
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{build_snake_graph, enumerate_matchings, CrossingSequence};
    use super::*;

    #[test]
    fn empty_cut_is_identity() {
        let g = build_snake_graph(&example(), &CrossingSequence::new(GAMMA.to_vec(), Some(0))).unwrap();
        let dec = Decomposition::new(&g, &[]).unwrap();
        assert_eq!(dec.pieces.len(), 1);
        for p in enumerate_matchings(&g) {
            let parts = dec.decompose_matching(&p).unwrap();
            assert_eq!(parts, vec![p.clone()]);
            assert_eq!(dec.recombine(&parts).unwrap(), p);
        }
    }

    #[test]
    fn rejects_non_gluing_cut() {
        let g = build_snake_graph(&example(), &CrossingSequence::new(GAMMA.to_vec(), Some(0))).unwrap();
        let boundary = (0..g.edges().len()).find(|&e| g.is_boundary_edge(e)).unwrap();
        assert!(Decomposition::new(&g, &[boundary]).is_err());
        let glue = g.gluing_edges();
        assert!(Decomposition::new(&g, &[glue[3], glue[1]]).is_err());
    }
}
