//! Triangulations of unpunctured orbifolds and their signed adjacency matrix.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::seed::IntMatrix;

/// Index of an arc inside a [`Triangulation`].
pub type ArcId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArcRecord {
    pub id: String,
    pub label: String,
    /// 2 for pending arcs, 1 otherwise.
    pub weight: u8,
    pub boundary: bool,
    pub pending: bool,
}

impl ArcRecord {
    pub fn ordinary(id: &str) -> Self {
        ArcRecord {
            id: id.into(),
            label: id.into(),
            weight: 1,
            boundary: false,
            pending: false,
        }
    }

    pub fn pending(id: &str) -> Self {
        ArcRecord {
            weight: 2,
            pending: true,
            ..Self::ordinary(id)
        }
    }

    pub fn boundary(id: &str) -> Self {
        ArcRecord {
            boundary: true,
            ..Self::ordinary(id)
        }
    }
}

/// A triangulation given by its arcs and clockwise side triples.
///
/// Non-boundary arcs come first; their positions `0..n` are the mutable
/// directions of the associated seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    arcs: Vec<ArcRecord>,
    triangles: Vec<[ArcId; 3]>,
    n: usize,
    index: HashMap<String, ArcId>,
}

impl Triangulation {
    pub fn new(arcs: Vec<ArcRecord>, triangles: Vec<[ArcId; 3]>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, a) in arcs.iter().enumerate() {
            if index.insert(a.id.clone(), i).is_some() {
                return Err(Error::structure(format!("arc '{}'", a.id), "duplicate arc id"));
            }
        }
        let n = arcs.iter().take_while(|a| !a.boundary).count();
        if let Some(a) = arcs[n..].iter().find(|a| !a.boundary) {
            return Err(Error::structure(
                format!("arc '{}'", a.id),
                "non-boundary arcs must precede boundary arcs",
            ));
        }
        if n == 0 {
            return Err(Error::structure("triangulation", "no non-boundary arcs"));
        }
        if triangles.is_empty() {
            return Err(Error::structure("triangulation", "empty triangle list"));
        }
        for a in &arcs {
            let name = || format!("arc '{}'", a.id);
            if a.boundary && a.pending {
                return Err(Error::structure(name(), "a boundary arc cannot be pending"));
            }
            let expected = if a.pending { 2 } else { 1 };
            if a.weight != expected {
                return Err(Error::structure(
                    name(),
                    format!("weight {} but expected {expected}", a.weight),
                ));
            }
        }
        let mut sides = vec![0usize; arcs.len()];
        for (t, tri) in triangles.iter().enumerate() {
            for &a in tri {
                if a >= arcs.len() {
                    return Err(Error::structure(format!("triangle {t}"), format!("unknown arc index {a}")));
                }
                sides[a] += 1;
            }
        }
        for (a, rec) in arcs.iter().enumerate() {
            let expected = if rec.boundary || rec.pending { 1 } else { 2 };
            if sides[a] != expected {
                return Err(Error::structure(
                    format!("arc '{}'", rec.id),
                    format!("is a side of {} triangles, expected {expected}", sides[a]),
                ));
            }
        }
        Ok(Triangulation {
            arcs,
            triangles,
            n,
            index,
        })
    }

    /// Convenience constructor naming triangle sides by arc id.
    pub fn from_ids(arcs: Vec<ArcRecord>, triangles: &[[&str; 3]]) -> Result<Self> {
        let lookup: HashMap<&str, usize> = arcs.iter().enumerate().map(|(i, a)| (a.id.as_str(), i)).collect();
        let mut tris = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            let mut ids = [0; 3];
            for (slot, name) in tri.iter().enumerate() {
                ids[slot] = *lookup
                    .get(name)
                    .ok_or_else(|| Error::structure(format!("triangle {t}"), format!("unknown arc '{name}'")))?;
            }
            tris.push(ids);
        }
        Self::new(arcs, tris)
    }

    pub fn arcs(&self) -> &[ArcRecord] {
        &self.arcs
    }

    pub fn arc(&self, a: ArcId) -> &ArcRecord {
        &self.arcs[a]
    }

    pub fn triangles(&self) -> &[[ArcId; 3]] {
        &self.triangles
    }

    /// Number of mutable (non-boundary) arcs.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_index(&self, id: &str) -> Option<ArcId> {
        self.index.get(id).copied()
    }

    /// Mutable direction of an arc, `None` for boundary arcs.
    pub fn mutable_index(&self, a: ArcId) -> Option<usize> {
        (a < self.n).then_some(a)
    }

    pub fn weight(&self, a: ArcId) -> i64 {
        i64::from(self.arcs[a].weight)
    }

    /// All (triangle, slot) positions at which arc `a` is a side.
    pub fn half_edges(&self, a: ArcId) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for (s, &x) in tri.iter().enumerate() {
                if x == a {
                    out.push((t, s));
                }
            }
        }
        out
    }

    /// The half-edge reached by crossing arc side `(t, s)`: the other side of
    /// an ordinary arc, or the same side for a pending arc.
    pub fn opposite(&self, t: usize, s: usize) -> Option<(usize, usize)> {
        let a = self.triangles[t][s];
        if self.arcs[a].boundary {
            return None;
        }
        if self.arcs[a].pending {
            return Some((t, s));
        }
        self.half_edges(a).into_iter().find(|&h| h != (t, s))
    }
}

/// Signed adjacency matrix B^T over the mutable arcs.
pub fn signed_adjacency(t: &Triangulation) -> IntMatrix {
    let n = t.n();
    let mut b = IntMatrix::zeros(n, n);
    for tri in t.triangles() {
        for s in 0..3 {
            let (x, y) = (tri[s], tri[(s + 1) % 3]);
            if x < n && y < n {
                // y follows x clockwise
                b.add_at(x, y, t.weight(y));
                b.add_at(y, x, -t.weight(x));
            }
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> Triangulation {
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

    fn symmetrized_is_skew(t: &Triangulation) -> bool {
        let b = signed_adjacency(t);
        let mut db = b.clone();
        for i in 0..t.n() {
            for j in 0..t.n() {
                db.set(i, j, t.weight(i) * b.get(i, j));
            }
        }
        db.is_skew_symmetric()
    }

    #[test]
    fn pentagon_fan() {
        let t = Triangulation::from_ids(
            vec![
                ArcRecord::ordinary("t1"),
                ArcRecord::ordinary("t2"),
                ArcRecord::boundary("b01"),
                ArcRecord::boundary("b12"),
                ArcRecord::boundary("b23"),
                ArcRecord::boundary("b34"),
                ArcRecord::boundary("b40"),
            ],
            &[["b01", "t1", "b12"], ["t1", "t2", "b23"], ["t2", "b40", "b34"]],
        )
        .unwrap();
        assert_eq!(signed_adjacency(&t).to_rows(), vec![vec![0, 1], vec![-1, 0]]);
    }

    #[test]
    fn pending_arc_in_one_triangle() {
        let t = Triangulation::from_ids(
            vec![
                ArcRecord::ordinary("a"),
                ArcRecord::pending("p"),
                ArcRecord::boundary("x"),
                ArcRecord::boundary("y"),
                ArcRecord::boundary("z"),
            ],
            &[["a", "p", "x"], ["a", "y", "z"]],
        )
        .unwrap();
        let b = signed_adjacency(&t);
        assert_eq!(b.get(0, 1), 2);
        assert_eq!(b.get(1, 0), -1);
        assert!(symmetrized_is_skew(&t));
    }

    #[test]
    fn example_matrix() {
        let t = example();
        assert_eq!(
            signed_adjacency(&t).to_rows(),
            vec![vec![0, 2, -1], vec![-2, 0, 1], vec![2, -2, 0]]
        );
        assert!(symmetrized_is_skew(&t));
    }

    #[test]
    fn side_count_violation_names_arc() {
        let err = Triangulation::from_ids(
            vec![ArcRecord::ordinary("c"), ArcRecord::boundary("x"), ArcRecord::boundary("y")],
            &[["c", "x", "y"]],
        )
        .unwrap_err();
        assert!(err.to_string().contains("arc 'c'"), "{err}");
    }

    #[test]
    fn rejects_bad_weights_and_order() {
        let mut heavy = ArcRecord::ordinary("c");
        heavy.weight = 2;
        assert!(Triangulation::from_ids(vec![heavy, ArcRecord::boundary("x")], &[["c", "c", "x"]]).is_err());
        assert!(Triangulation::from_ids(
            vec![ArcRecord::boundary("x"), ArcRecord::ordinary("c")],
            &[["c", "c", "x"]]
        )
        .is_err());
        assert!(Triangulation::from_ids(vec![ArcRecord::ordinary("c")], &[]).is_err());
    }

    #[test]
    fn opposite_half_edges() {
        let t = example();
        assert_eq!(t.opposite(0, 0), Some((1, 0)));
        assert_eq!(t.opposite(1, 1), Some((1, 1)));
        assert_eq!(t.opposite(0, 1), None);
    }
}
