//! Test-only oracles and fixtures shared by the integration targets.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use qorbifold::scenario::Scenario;
use qorbifold::snake::{CrossingSequence, SnakeGraph};
use qorbifold::torus::{QHalfLaurent, TorusElement};
use qorbifold::triangulation::{ArcRecord, Triangulation};

pub fn scenario_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

/// Every bundled scenario, sorted by file name.
pub fn bundled() -> Vec<(String, Scenario)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(scenario_dir())
        .expect("scenario directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            let s = Scenario::load(&p).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, s)
        })
        .collect()
}

/// Perfect matchings by include/exclude search over edges, pruning when an
/// edge would cover a vertex twice.
pub fn brute_force_matchings(g: &SnakeGraph) -> BTreeSet<Vec<usize>> {
    fn go(g: &SnakeGraph, e: usize, used: &mut Vec<bool>, chosen: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
        if e == g.edges().len() {
            if used.iter().all(|&u| u) {
                out.insert(chosen.clone());
            }
            return;
        }
        let [a, b] = g.edge(e).ends;
        if !used[a] && !used[b] {
            used[a] = true;
            used[b] = true;
            chosen.push(e);
            go(g, e + 1, used, chosen, out);
            chosen.pop();
            used[a] = false;
            used[b] = false;
        }
        go(g, e + 1, used, chosen, out);
    }
    let mut out = BTreeSet::new();
    go(g, 0, &mut vec![false; g.vertex_count()], &mut Vec::new(), &mut out);
    out
}

/// The printed expansion of gamma in the bundled example: exponent vector and (q^{1/2}-power,
/// coefficient) pairs.
pub fn printed_example_expansion() -> TorusElement {
    type Row = ([i64; 6], &'static [(i64, i64)]);
    let rows: [Row; 13] = [
        ([1, -2, 0, 3, 2, 2], &[(0, 1)]),
        ([-1, -2, 2, 3, 1, 2], &[(2, 1), (-2, 1)]),
        ([-1, 0, 0, 2, 1, 2], &[(2, 1), (-2, 1)]),
        ([-3, -2, 4, 3, 0, 2], &[(0, 1)]),
        ([0, -1, 0, 2, 1, 1], &[(1, 1), (-1, 1)]),
        ([-3, 0, 2, 2, 0, 2], &[(4, 1), (0, 1), (-4, 1)]),
        ([-2, -1, 2, 2, 0, 1], &[(1, 1), (-1, 1)]),
        ([-3, 2, 0, 1, 0, 2], &[(4, 1), (0, 1), (-4, 1)]),
        ([-2, 1, 0, 1, 0, 1], &[(3, 1), (1, 1), (-1, 1), (-3, 1)]),
        ([-3, 4, -2, 0, 0, 2], &[(0, 1)]),
        ([-2, 3, -2, 0, 0, 1], &[(1, 1), (-1, 1)]),
        ([-1, 0, 0, 1, 0, 0], &[(0, 1)]),
        ([-1, 2, -2, 0, 0, 0], &[(0, 1)]),
    ];
    let mut x = TorusElement::zero(6);
    for (a, c) in rows {
        x.add_term(a.to_vec(), &QHalfLaurent::from_pairs(c.iter().copied())).unwrap();
    }
    x
}

/// A triangulated convex polygon built from its chords, with every
/// triangle's sides listed clockwise.
#[derive(Debug, Clone)]
pub struct Polygon {
    pub n: usize,
    pub chords: Vec<(usize, usize)>,
    pub triangles: Vec<[usize; 3]>,
    pub triangulation: Triangulation,
}

fn norm(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn crosses(c: (usize, usize), d: (usize, usize)) -> bool {
    let (p, q) = norm(d.0, d.1);
    let (a, b) = c;
    if a == p || a == q || b == p || b == q {
        return false;
    }
    let inside = |x: usize| p < x && x < q;
    inside(a) != inside(b)
}

impl Polygon {
    pub fn new(n: usize, chords: &[(usize, usize)]) -> Polygon {
        let chords: Vec<(usize, usize)> = chords.iter().map(|&(a, b)| norm(a, b)).collect();
        let side = |a: usize, b: usize| {
            let (a, b) = norm(a, b);
            b - a == 1 || (a == 0 && b == n - 1) || chords.contains(&(a, b))
        };
        let mut triangles = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if side(a, b) && side(b, c) && side(a, c) {
                        triangles.push([a, b, c]);
                    }
                }
            }
        }
        assert_eq!(triangles.len(), n - 2, "chords do not triangulate the polygon");
        let name = |a: usize, b: usize| {
            let (a, b) = norm(a, b);
            if b - a == 1 {
                format!("b{a}_{b}")
            } else if a == 0 && b == n - 1 {
                format!("b{b}_0")
            } else {
                format!("d{a}_{b}")
            }
        };
        let mut arcs: Vec<ArcRecord> = chords.iter().map(|&(a, b)| ArcRecord::ordinary(&name(a, b))).collect();
        arcs.extend((0..n).map(|i| ArcRecord::boundary(&name(i, (i + 1) % n))));
        let sides: Vec<[String; 3]> = triangles
            .iter()
            .map(|&[u, v, w]| [name(u, v), name(u, w), name(v, w)])
            .collect();
        let refs: Vec<[&str; 3]> = sides.iter().map(|s| [s[0].as_str(), s[1].as_str(), s[2].as_str()]).collect();
        let triangulation = Triangulation::from_ids(arcs, &refs).expect("polygon triangulation");
        Polygon {
            n,
            chords,
            triangles,
            triangulation,
        }
    }

    /// Crossing data of the diagonal (p, q) found by walking through the
    /// triangles from p, or `None` if it is an edge of the triangulation.
    pub fn crossing(&self, p: usize, q: usize) -> Option<CrossingSequence> {
        let d = (p, q);
        let crossing_side = |tri: &[usize; 3], skip: Option<(usize, usize)>| {
            let [a, b, c] = *tri;
            [(a, b), (a, c), (b, c)]
                .into_iter()
                .find(|&s| Some(s) != skip && self.chords.contains(&s) && crosses(s, d))
        };
        let start = self
            .triangles
            .iter()
            .position(|t| t.contains(&p) && crossing_side(t, None).is_some())?;
        let mut seq = Vec::new();
        let mut tri = start;
        let mut side = crossing_side(&self.triangles[tri], None).unwrap();
        loop {
            seq.push(self.chords.iter().position(|&c| c == side).unwrap());
            tri = (0..self.triangles.len())
                .find(|&k| k != tri && self.triangles[k].contains(&side.0) && self.triangles[k].contains(&side.1))
                .unwrap();
            match crossing_side(&self.triangles[tri], Some(side)) {
                Some(s) => side = s,
                None => break,
            }
        }
        Some(CrossingSequence::new(seq, Some(start)))
    }
}

/// Triangulation whose chords alternate sides, so that a diagonal from
/// vertex 0 crosses every chord and gives a straight snake graph.
pub fn zigzag(d: usize) -> (Polygon, CrossingSequence) {
    let n = d + 3;
    let (mut lo, mut hi) = (1, n - 1);
    let mut chords = Vec::new();
    for k in 0..d {
        chords.push((lo, hi));
        if k % 2 == 0 {
            hi -= 1;
        } else {
            lo += 1;
        }
    }
    let poly = Polygon::new(n, &chords);
    let far = (2..n - 1)
        .find(|&v| poly.crossing(0, v).is_some_and(|c| c.len() == d))
        .expect("a diagonal crosses every chord");
    let c = poly.crossing(0, far).unwrap();
    (poly, c)
}

/// Triangulation produced by cutting ears at the given ring positions.
pub fn ear_cut(n: usize, picks: &[usize]) -> Polygon {
    let mut ring: Vec<usize> = (0..n).collect();
    let mut chords = Vec::new();
    let mut picks = picks.iter().cycle();
    while ring.len() > 3 {
        let i = picks.next().copied().unwrap_or(0) % ring.len();
        let a = ring[(i + ring.len() - 1) % ring.len()];
        let b = ring[(i + 1) % ring.len()];
        chords.push(norm(a, b));
        ring.remove(i);
    }
    Polygon::new(n, &chords)
}

pub fn fibonacci(k: usize) -> u128 {
    let (mut a, mut b) = (0u128, 1u128);
    for _ in 0..k {
        (a, b) = (b, a + b);
    }
    a
}
