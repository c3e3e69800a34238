//! Matching statistics and the Laurent expansions of an arc.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::seed::{ExtendedExchangeMatrix, QuantumSeed};
use crate::snake::{
    build_snake_graph, minimal_matching, maximal_matching, twist_graph, CrossingSequence, PerfectMatching,
    SnakeGraph, TwistGraph,
};
use crate::torus::{ExponentVector, QHalfLaurent, TorusElement};
use crate::triangulation::Triangulation;

/// Number of crossings with each mutable arc.
pub fn crossing_vector(t: &Triangulation, c: &CrossingSequence) -> Vec<i64> {
    let mut v = vec![0; t.n()];
    for &a in &c.crossings {
        if let Some(i) = t.mutable_index(a) {
            v[i] += 1;
        }
    }
    v
}

/// Number of matching edges labeled by each mutable arc.
pub fn weight_vector(t: &Triangulation, g: &SnakeGraph, p: &PerfectMatching) -> Vec<i64> {
    let mut v = vec![0; t.n()];
    for &e in p.edges() {
        if let Some(i) = t.mutable_index(g.edge(e).label) {
            v[i] += 1;
        }
    }
    v
}

/// Counts, per diagonal label, the tiles enclosed by the cycles of P Δ P_-.
pub fn height_vector(t: &Triangulation, g: &SnakeGraph, p: &PerfectMatching) -> Result<Vec<i64>> {
    let mut h = vec![0; t.n()];
    if g.d() == 0 {
        return Ok(h);
    }
    let sd = p.symmetric_difference(&minimal_matching(g));
    let mut degree = vec![0u8; g.vertex_count()];
    for &e in &sd {
        for v in g.edge(e).ends {
            degree[v] += 1;
        }
    }
    if degree.iter().any(|&x| x != 0 && x != 2) {
        return Err(Error::Precondition("not a perfect matching of the snake graph".into()));
    }
    let in_sd = |e: usize| sd.binary_search(&e).is_ok();
    let first = g.tile(0);
    let outer = first
        .edges
        .iter()
        .copied()
        .find(|&e| g.is_boundary_edge(e))
        .expect("first tile has a boundary edge");
    let mut inside = in_sd(outer);
    for (j, tile) in g.tiles().iter().enumerate() {
        if j > 0 && in_sd(g.gluing_edges()[j - 1]) {
            inside = !inside;
        }
        if inside {
            h[tile.diagonal] += 1;
        }
    }
    Ok(h)
}

/// Heights of every matching obtained by integrating ±e_a along twists from
/// P_-, aligned with `tg.matchings`. Fails if two paths disagree.
pub fn heights_by_twists(t: &Triangulation, g: &SnakeGraph, tg: &TwistGraph) -> Result<Vec<Vec<i64>>> {
    let start = tg
        .index_of(&minimal_matching(g))
        .ok_or_else(|| Error::Integrity("minimal matching missing from enumeration".into()))?;
    let mut heights: Vec<Option<Vec<i64>>> = vec![None; tg.matchings.len()];
    heights[start] = Some(vec![0; t.n()]);
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        let hi = heights[i].clone().expect("visited");
        for &(tile, k) in tg.neighbours(i) {
            let up = g.twist_pair(&tg.matchings[i], tile) == Some(false);
            let mut hk = hi.clone();
            hk[g.tile(tile).diagonal] += if up { 1 } else { -1 };
            match &heights[k] {
                None => {
                    heights[k] = Some(hk);
                    queue.push_back(k);
                }
                Some(existing) if *existing != hk => {
                    return Err(Error::Integrity(format!(
                        "height along twists is path dependent at matching {k}"
                    )))
                }
                Some(_) => {}
            }
        }
    }
    heights
        .into_iter()
        .map(|h| h.ok_or_else(|| Error::Integrity("twist graph is disconnected".into())))
        .collect()
}

/// Height of a single matching via twists from P_-.
pub fn height_vector_by_twists(t: &Triangulation, g: &SnakeGraph, p: &PerfectMatching) -> Result<Vec<i64>> {
    let tg = twist_graph(g);
    let i = tg
        .index_of(p)
        .ok_or_else(|| Error::Precondition("not a perfect matching of the snake graph".into()))?;
    Ok(heights_by_twists(t, g, &tg)?.swap_remove(i))
}

/// Frozen-row image Σ_k h_k b̃_{·k} of a height vector.
fn frozen_image(btilde: &ExtendedExchangeMatrix, h: &[i64]) -> Vec<i64> {
    (btilde.n()..btilde.m())
        .map(|i| h.iter().enumerate().map(|(k, &hk)| hk * btilde.get(i, k)).sum())
        .collect()
}

/// Componentwise minimum of the frozen-row images over all heights.
pub fn tropical_shift(btilde: &ExtendedExchangeMatrix, heights: &[Vec<i64>]) -> Vec<i64> {
    let mut shift: Option<Vec<i64>> = None;
    for h in heights {
        let img = frozen_image(btilde, h);
        shift = Some(match shift {
            None => img,
            Some(s) => s.iter().zip(&img).map(|(a, b)| *a.min(b)).collect(),
        });
    }
    shift.unwrap_or_else(|| vec![0; btilde.m() - btilde.n()])
}

/// a(P): weight minus crossing exponents on mutable rows, shifted frozen
/// image of the height on frozen rows.
pub fn exponent_vector(
    t: &Triangulation,
    c: &CrossingSequence,
    g: &SnakeGraph,
    p: &PerfectMatching,
    btilde: &ExtendedExchangeMatrix,
    shift: &[i64],
) -> Result<ExponentVector> {
    check_dims(t, btilde)?;
    if shift.len() != btilde.m() - btilde.n() {
        return Err(Error::Dimension {
            expected: format!("shift of length {}", btilde.m() - btilde.n()),
            found: shift.len().to_string(),
        });
    }
    let w = weight_vector(t, g, p);
    let x = crossing_vector(t, c);
    let h = height_vector(t, g, p)?;
    let mut a: Vec<i64> = w.iter().zip(&x).map(|(a, b)| a - b).collect();
    a.extend(frozen_image(btilde, &h).iter().zip(shift).map(|(v, s)| v - s));
    Ok(a)
}

fn check_dims(t: &Triangulation, btilde: &ExtendedExchangeMatrix) -> Result<()> {
    if btilde.n() != t.n() {
        return Err(Error::Dimension {
            expected: format!("{} mutable directions", t.n()),
            found: btilde.n().to_string(),
        });
    }
    Ok(())
}

/// Ω(p_s, P): the q-exponent change when twisting P on tile s.
pub fn omega(g: &SnakeGraph, p: &PerfectMatching, s: usize, seed: &QuantumSeed) -> Result<i64> {
    let ccw = g
        .twist_pair(p, s)
        .ok_or_else(|| Error::Precondition(format!("matching cannot twist on tile {}", s + 1)))?;
    let tau = g.tile(s).diagonal;
    let diagonals = g.diagonals();
    let m_plus = diagonals[s + 1..].iter().filter(|&&a| a == tau).count() as i64;
    let m_minus = diagonals[..s].iter().filter(|&&a| a == tau).count() as i64;
    let own = g.tile(s).edges;
    let (mut n_plus, mut n_minus) = (0i64, 0i64);
    for &e in p.edges() {
        if own.contains(&e) || g.edge(e).label != tau {
            continue;
        }
        match g.edge(e).first_tile {
            Some(pos) if pos > s => n_plus += 1,
            Some(pos) if pos < s => n_minus += 1,
            _ => {}
        }
    }
    let d = *seed
        .symmetrizer()
        .get(tau)
        .ok_or_else(|| Error::Dimension {
            expected: format!("symmetrizer entry for direction {}", tau + 1),
            found: format!("{} entries", seed.symmetrizer().len()),
        })?;
    let val = (n_plus - m_plus - n_minus + m_minus) * d;
    Ok(if ccw { val } else { -val })
}

/// v(P) for every matching, aligned with `matchings`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationTable {
    pub matchings: Vec<PerfectMatching>,
    pub values: Vec<i64>,
}

impl ValuationTable {
    pub fn get(&self, p: &PerfectMatching) -> Option<i64> {
        self.matchings.iter().position(|q| q == p).map(|i| self.values[i])
    }
}

fn integrate(g: &SnakeGraph, tg: &TwistGraph, seed: &QuantumSeed, start: usize) -> Result<Vec<i64>> {
    let mut values: Vec<Option<i64>> = vec![None; tg.matchings.len()];
    values[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        let vi = values[i].expect("visited");
        for &(tile, k) in tg.neighbours(i) {
            let vk = vi - omega(g, &tg.matchings[i], tile, seed)?;
            match values[k] {
                None => {
                    values[k] = Some(vk);
                    queue.push_back(k);
                }
                Some(existing) if existing != vk => {
                    return Err(Error::Integrity(format!(
                        "valuation cycle through matchings {i} and {k} (tile {}) is inconsistent: {existing} vs {vk}",
                        tile + 1
                    )))
                }
                Some(_) => {}
            }
        }
    }
    values
        .into_iter()
        .map(|v| v.ok_or_else(|| Error::Integrity("twist graph is disconnected".into())))
        .collect()
}

/// Integrates v(P) - v(μ_p P) = Ω(p, P) over the twist graph from both
/// P_- and P_+ and checks that the two integrations agree.
pub fn valuation_on(g: &SnakeGraph, tg: &TwistGraph, seed: &QuantumSeed) -> Result<ValuationTable> {
    let lo = tg
        .index_of(&minimal_matching(g))
        .ok_or_else(|| Error::Integrity("minimal matching missing from enumeration".into()))?;
    let hi = tg
        .index_of(&maximal_matching(g))
        .ok_or_else(|| Error::Integrity("maximal matching missing from enumeration".into()))?;
    let v_minus = integrate(g, tg, seed, lo)?;
    if v_minus[hi] != 0 {
        return Err(Error::Integrity(format!(
            "valuation of the maximal matching is {} instead of 0",
            v_minus[hi]
        )));
    }
    let v_plus = integrate(g, tg, seed, hi)?;
    if let Some(i) = (0..v_plus.len()).find(|&i| v_plus[i] != v_minus[i]) {
        return Err(Error::Integrity(format!(
            "valuations anchored at the two extremal matchings differ at matching {i}"
        )));
    }
    Ok(ValuationTable {
        matchings: tg.matchings.clone(),
        values: v_minus,
    })
}

pub fn valuation(t: &Triangulation, c: &CrossingSequence, seed: &QuantumSeed) -> Result<ValuationTable> {
    check_dims(t, seed.btilde())?;
    let g = build_snake_graph(t, c)?;
    valuation_on(&g, &twist_graph(&g), seed)
}

/// Everything computed for one arc: its snake graph, matchings and the
/// exponent vector of each matching.
#[derive(Debug, Clone)]
pub struct ArcExpansion {
    pub graph: SnakeGraph,
    pub twists: TwistGraph,
    pub heights: Vec<Vec<i64>>,
    pub exponents: Vec<ExponentVector>,
}

impl ArcExpansion {
    pub fn compute(t: &Triangulation, c: &CrossingSequence, btilde: &ExtendedExchangeMatrix) -> Result<Self> {
        check_dims(t, btilde)?;
        let graph = build_snake_graph(t, c)?;
        let twists = twist_graph(&graph);
        let heights = twists
            .matchings
            .iter()
            .map(|p| height_vector(t, &graph, p))
            .collect::<Result<Vec<_>>>()?;
        let shift = tropical_shift(btilde, &heights);
        let exponents = twists
            .matchings
            .iter()
            .map(|p| exponent_vector(t, c, &graph, p, btilde, &shift))
            .collect::<Result<Vec<_>>>()?;
        Ok(ArcExpansion {
            graph,
            twists,
            heights,
            exponents,
        })
    }

    pub fn matchings(&self) -> &[PerfectMatching] {
        &self.twists.matchings
    }

    pub fn commutative(&self) -> BTreeMap<ExponentVector, i64> {
        let mut out = BTreeMap::new();
        for a in &self.exponents {
            *out.entry(a.clone()).or_insert(0) += 1;
        }
        out
    }

    pub fn valuation(&self, seed: &QuantumSeed) -> Result<ValuationTable> {
        valuation_on(&self.graph, &self.twists, seed)
    }

    /// Σ_P q^{v(P)/2} X^{a(P)}.
    pub fn quantum(&self, seed: &QuantumSeed) -> Result<TorusElement> {
        let v = self.valuation(seed)?;
        let mut x = TorusElement::zero(seed.m());
        for (a, &val) in self.exponents.iter().zip(&v.values) {
            x.add_term(a.clone(), &QHalfLaurent::q_half_pow(val))?;
        }
        Ok(x)
    }
}

/// x_γ = Σ_P x^T(P), as exponent vector ↦ multiplicity.
pub fn commutative_expansion(
    t: &Triangulation,
    c: &CrossingSequence,
    seed: &QuantumSeed,
) -> Result<BTreeMap<ExponentVector, i64>> {
    Ok(ArcExpansion::compute(t, c, seed.btilde())?.commutative())
}

/// X_γ = Σ_P q^{v(P)/2} X^T(P).
pub fn quantum_expansion(t: &Triangulation, c: &CrossingSequence, seed: &QuantumSeed) -> Result<TorusElement> {
    ArcExpansion::compute(t, c, seed.btilde())?.quantum(seed)
}
