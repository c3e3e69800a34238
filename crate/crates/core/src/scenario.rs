//! Scenario documents: a triangulation, its quantum seed, named curves given
//! by crossing sequences, and flip annotations naming the arcs reached by
//! mutation sequences.
//!
//! The on-disk form is JSON (`version: 1`). Flip paths in documents are
//! 1-based; everything in memory is 0-based.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::seed::{build_principal_quantization, ExtendedExchangeMatrix, IntMatrix, LambdaForm, QuantumSeed};
use crate::snake::{build_snake_graph, CrossingSequence};
use crate::triangulation::{signed_adjacency, ArcRecord, Triangulation};

pub const FORMAT_VERSION: u32 = 1;

/// A curve of the scenario with its crossing data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub name: String,
    pub crossing: CrossingSequence,
}

/// The arc sitting at position `path.last()` of the seed reached from the
/// base seed by mutating along `path`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipAnnotation {
    pub path: Vec<usize>,
    pub curve: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedSpec {
    Principal { d: Vec<i64> },
    Explicit,
}

/// A cluster variable of some seed, named relative to the scenario.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClusterVariable {
    /// Initial variable at this row of the base seed (mutable or frozen).
    Initial(usize),
    Curve(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub triangulation: Triangulation,
    pub seed: QuantumSeed,
    pub seed_spec: SeedSpec,
    pub curves: Vec<Curve>,
    pub flips: Vec<FlipAnnotation>,
}

impl Scenario {
    pub fn curve(&self, name: &str) -> Option<&Curve> {
        self.curves.iter().find(|c| c.name == name)
    }

    /// Crossing data for a curve name or the id of a non-boundary arc of the
    /// triangulation.
    pub fn target(&self, name: &str) -> Result<CrossingSequence> {
        if let Some(c) = self.curve(name) {
            return Ok(c.crossing.clone());
        }
        let t = &self.triangulation;
        match t.arc_index(name) {
            Some(a) if t.mutable_index(a).is_some() => Ok(CrossingSequence::arc_in_triangulation(a)),
            Some(_) => Err(Error::Precondition(format!(
                "'{name}' is a boundary arc and has no cluster variable"
            ))),
            None => Err(Error::NotFound(format!("curve or arc '{name}'"))),
        }
    }

    pub fn flip(&self, path: &[usize]) -> Option<&FlipAnnotation> {
        self.flips.iter().find(|f| f.path == path)
    }

    /// Cluster of the seed reached along `path`.
    pub fn cluster_at(&self, path: &[usize]) -> Result<Vec<ClusterVariable>> {
        let mut cluster: Vec<ClusterVariable> = (0..self.seed.m()).map(ClusterVariable::Initial).collect();
        for l in 0..path.len() {
            let f = self.flip(&path[..=l]).ok_or_else(|| {
                Error::NotFound(format!("flip annotation for path {}", format_path(&path[..=l])))
            })?;
            cluster[path[l]] = ClusterVariable::Curve(f.curve.clone());
        }
        Ok(cluster)
    }

    /// Every seed the annotations describe: the base seed and each flip path.
    pub fn seed_paths(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        out.extend(self.flips.iter().map(|f| f.path.clone()));
        out
    }

    pub fn parse(text: &str) -> Result<Scenario> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| Error::Scenario {
            line: Some(e.line()),
            message: e.to_string(),
        })?;
        file.into_scenario().map_err(|(anchor, e)| Error::Scenario {
            line: anchor.and_then(|a| locate(text, &a)),
            message: e.to_string(),
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Canonical document text.
    pub fn serialize(&self) -> String {
        let value = serde_json::to_value(self.to_file()).expect("scenario documents are plain data");
        let mut out = String::new();
        write_value(&value, 0, &mut out);
        out.push('\n');
        out
    }

    fn to_file(&self) -> ScenarioFile {
        let t = &self.triangulation;
        let id = |a: usize| t.arc(a).id.clone();
        ScenarioFile {
            version: FORMAT_VERSION,
            name: self.name.clone(),
            arcs: t
                .arcs()
                .iter()
                .map(|a| ArcEntry {
                    id: a.id.clone(),
                    label: (a.label != a.id).then(|| a.label.clone()),
                    weight: a.weight,
                    boundary: a.boundary,
                    pending: a.pending,
                })
                .collect(),
            triangles: t.triangles().iter().map(|tri| tri.map(id)).collect(),
            seed: match &self.seed_spec {
                SeedSpec::Principal { d } => SeedEntry::Principal { d: d.clone() },
                SeedSpec::Explicit => SeedEntry::Explicit {
                    btilde: self.seed.btilde().entries().to_rows(),
                    lambda: self.seed.lambda().entries().to_rows(),
                },
            },
            curves: self
                .curves
                .iter()
                .map(|c| CurveEntry {
                    name: c.name.clone(),
                    arc: c.crossing.target.map(id),
                    pending: c.crossing.pending,
                    crossings: c.crossing.crossings.iter().map(|&a| id(a)).collect(),
                    start_triangle: c.crossing.start_triangle,
                })
                .collect(),
            flips: self
                .flips
                .iter()
                .map(|f| FlipEntry {
                    path: f.path.iter().map(|k| k + 1).collect(),
                    curve: f.curve.clone(),
                })
                .collect(),
        }
    }

    /// Assembles and validates a scenario from in-memory parts.
    pub fn new(
        name: &str,
        triangulation: Triangulation,
        seed_spec: SeedSpec,
        explicit_seed: Option<QuantumSeed>,
        curves: Vec<Curve>,
        flips: Vec<FlipAnnotation>,
    ) -> Result<Scenario> {
        let b = signed_adjacency(&triangulation);
        let seed = match (&seed_spec, explicit_seed) {
            (SeedSpec::Principal { d }, _) => build_principal_quantization(&b, d)?,
            (SeedSpec::Explicit, Some(seed)) => seed,
            (SeedSpec::Explicit, None) => return Err(Error::Precondition("explicit seed missing".into())),
        };
        if seed.n() != triangulation.n() || seed.btilde().principal_part() != b {
            return Err(Error::Precondition(
                "exchange matrix does not match the signed adjacency matrix of the triangulation".into(),
            ));
        }
        let s = Scenario {
            name: name.into(),
            triangulation,
            seed,
            seed_spec,
            curves,
            flips,
        };
        s.validate().map_err(|(_, e)| e)?;
        Ok(s)
    }

    /// Checks curves and flips; on failure also returns a text anchor
    /// locating the offending object in a document.
    fn validate(&self) -> std::result::Result<(), (Option<String>, Error)> {
        let t = &self.triangulation;
        let mut names = BTreeSet::new();
        for c in &self.curves {
            let anchor = || Some(format!("\"name\": \"{}\"", c.name));
            if !names.insert(c.name.as_str()) {
                return Err((anchor(), Error::structure(format!("curve '{}'", c.name), "duplicate name")));
            }
            build_snake_graph(t, &c.crossing)
                .map_err(|e| (anchor(), Error::structure(format!("curve '{}'", c.name), e.to_string())))?;
        }
        let mut seen = BTreeSet::new();
        for f in &self.flips {
            let anchor = || Some(format!("\"curve\": \"{}\"", f.curve));
            let object = || format!("flip {}", format_path(&f.path));
            if f.path.is_empty() || f.path.iter().any(|&k| k >= t.n()) {
                return Err((anchor(), Error::structure(object(), format!("directions must lie in 1..={}", t.n()))));
            }
            if !seen.insert(f.path.clone()) {
                return Err((anchor(), Error::structure(object(), "duplicate path")));
            }
            let curve = self
                .curve(&f.curve)
                .ok_or_else(|| (anchor(), Error::structure(object(), format!("unknown curve '{}'", f.curve))))?;
            let k = *f.path.last().expect("non-empty");
            if curve.crossing.pending != t.arc(k).pending {
                return Err((
                    anchor(),
                    Error::structure(
                        object(),
                        format!("curve '{}' must be pending exactly when arc '{}' is", f.curve, t.arc(k).id),
                    ),
                ));
            }
        }
        for f in &self.flips {
            for l in 1..f.path.len() {
                if !seen.contains(&f.path[..l]) {
                    return Err((
                        Some(format!("\"curve\": \"{}\"", f.curve)),
                        Error::structure(
                            format!("flip {}", format_path(&f.path)),
                            format!("missing annotation for prefix {}", format_path(&f.path[..l])),
                        ),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// `[1,2,3]` rendering of a 0-based path in 1-based form.
pub fn format_path(path: &[usize]) -> String {
    let parts: Vec<String> = path.iter().map(|k| (k + 1).to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn locate(text: &str, needle: &str) -> Option<usize> {
    text.lines().position(|l| l.contains(needle)).map(|i| i + 1)
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    version: u32,
    name: String,
    arcs: Vec<ArcEntry>,
    triangles: Vec<[String; 3]>,
    seed: SeedEntry,
    curves: Vec<CurveEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    flips: Vec<FlipEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArcEntry {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    weight: u8,
    #[serde(default, skip_serializing_if = "is_false")]
    boundary: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pending: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum SeedEntry {
    Principal { d: Vec<i64> },
    Explicit { btilde: Vec<Vec<i64>>, lambda: Vec<Vec<i64>> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveEntry {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arc: Option<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    pending: bool,
    crossings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    start_triangle: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlipEntry {
    path: Vec<usize>,
    curve: String,
}

type Anchored<T> = std::result::Result<T, (Option<String>, Error)>;

fn anchor_arc(e: Error) -> (Option<String>, Error) {
    let anchor = match &e {
        Error::Structure { object, .. } => object
            .strip_prefix("arc '")
            .and_then(|s| s.strip_suffix('\''))
            .map(|id| format!("\"id\": \"{id}\"")),
        _ => None,
    };
    (anchor, e)
}

impl ScenarioFile {
    fn into_scenario(self) -> Anchored<Scenario> {
        if self.version != FORMAT_VERSION {
            return Err((
                Some("\"version\"".into()),
                Error::Precondition(format!("unsupported version {} (expected {FORMAT_VERSION})", self.version)),
            ));
        }
        let arcs: Vec<ArcRecord> = self
            .arcs
            .iter()
            .map(|a| ArcRecord {
                id: a.id.clone(),
                label: a.label.clone().unwrap_or_else(|| a.id.clone()),
                weight: a.weight,
                boundary: a.boundary,
                pending: a.pending,
            })
            .collect();
        let lookup: HashMap<&str, usize> = self.arcs.iter().enumerate().map(|(i, a)| (a.id.as_str(), i)).collect();
        let arc_ref = |name: &str, anchor: String| -> Anchored<usize> {
            lookup
                .get(name)
                .copied()
                .ok_or_else(|| (Some(anchor), Error::NotFound(format!("arc '{name}'"))))
        };
        if self.triangles.is_empty() {
            return Err((
                Some("\"triangles\"".into()),
                Error::structure("triangulation", "empty triangle list"),
            ));
        }
        let mut triangles = Vec::with_capacity(self.triangles.len());
        for tri in &self.triangles {
            let anchor = serde_json::to_string(tri).expect("strings serialize").replace(",", ", ");
            let mut ids = [0; 3];
            for (slot, name) in tri.iter().enumerate() {
                ids[slot] = arc_ref(name, anchor.clone())?;
            }
            triangles.push(ids);
        }
        let triangulation = Triangulation::new(arcs, triangles).map_err(anchor_arc)?;
        let seed_anchor = || Some("\"seed\"".to_string());
        let (seed_spec, explicit) = match self.seed {
            SeedEntry::Principal { d } => (SeedSpec::Principal { d }, None),
            SeedEntry::Explicit { btilde, lambda } => {
                let b = IntMatrix::from_rows(&btilde)
                    .and_then(ExtendedExchangeMatrix::new)
                    .map_err(|e| (seed_anchor(), e))?;
                let l = IntMatrix::from_rows(&lambda)
                    .and_then(LambdaForm::new)
                    .map_err(|e| (seed_anchor(), e))?;
                let seed = QuantumSeed::new(b, l).map_err(|e| (seed_anchor(), e))?;
                (SeedSpec::Explicit, Some(seed))
            }
        };
        let mut curves = Vec::with_capacity(self.curves.len());
        for c in &self.curves {
            let anchor = format!("\"name\": \"{}\"", c.name);
            let crossings = c
                .crossings
                .iter()
                .map(|a| arc_ref(a, anchor.clone()))
                .collect::<Anchored<Vec<_>>>()?;
            let target = c.arc.as_deref().map(|a| arc_ref(a, anchor.clone())).transpose()?;
            curves.push(Curve {
                name: c.name.clone(),
                crossing: CrossingSequence {
                    target,
                    pending: c.pending,
                    crossings,
                    start_triangle: c.start_triangle,
                },
            });
        }
        let mut flips = Vec::with_capacity(self.flips.len());
        for f in &self.flips {
            if f.path.contains(&0) {
                return Err((
                    Some(format!("\"curve\": \"{}\"", f.curve)),
                    Error::Precondition("flip directions are 1-based".into()),
                ));
            }
            flips.push(FlipAnnotation {
                path: f.path.iter().map(|k| k - 1).collect(),
                curve: f.curve.clone(),
            });
        }
        let b = signed_adjacency(&triangulation);
        let seed = match (&seed_spec, explicit) {
            (SeedSpec::Principal { d }, _) => build_principal_quantization(&b, d).map_err(|e| (seed_anchor(), e))?,
            (_, Some(seed)) => seed,
            (SeedSpec::Explicit, None) => unreachable!("explicit seeds are parsed above"),
        };
        if seed.n() != triangulation.n() || seed.btilde().principal_part() != b {
            return Err((
                seed_anchor(),
                Error::Precondition(
                    "exchange matrix does not match the signed adjacency matrix of the triangulation".into(),
                ),
            ));
        }
        let s = Scenario {
            name: self.name,
            triangulation,
            seed,
            seed_spec,
            curves,
            flips,
        };
        s.validate()?;
        Ok(s)
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(is_scalar),
        Value::Object(map) => map.values().all(|x| is_scalar(x) || matches!(x, Value::Array(a) if a.iter().all(is_scalar))),
        _ => true,
    }
}

fn write_inline(v: &Value, out: &mut String) {
    match v {
        Value::Array(items) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_inline(x, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, x)) in map.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&serde_json::to_string(k).expect("string key"));
                out.push_str(": ");
                write_inline(x, out);
            }
            out.push('}');
        }
        scalar => out.push_str(&serde_json::to_string(scalar).expect("scalar")),
    }
}

/// Pretty printer keeping flat arrays and flat objects on one line.
fn write_value(v: &Value, indent: usize, out: &mut String) {
    if is_flat(v) {
        write_inline(v, out);
        return;
    }
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad);
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&serde_json::to_string(k).expect("string key"));
                out.push_str(": ");
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        _ => unreachable!("scalars are flat"),
    }
}

/// The orbifold with two weight-2 orbifold points used as the worked example:
/// pending arcs 1 and 2, ordinary arc 3, boundary arcs alpha and beta.
pub fn example6_1() -> Scenario {
    let t = Triangulation::from_ids(
        vec![
            ArcRecord::pending("1"),
            ArcRecord::pending("2"),
            ArcRecord::ordinary("3"),
            ArcRecord::boundary("alpha"),
            ArcRecord::boundary("beta"),
        ],
        &[["3", "beta", "alpha"], ["3", "1", "2"]],
    )
    .expect("valid triangulation");
    let curve = |name: &str, pending: bool, crossings: &[usize], start: Option<usize>| Curve {
        name: name.into(),
        crossing: CrossingSequence {
            target: None,
            pending,
            crossings: crossings.to_vec(),
            start_triangle: start,
        },
    };
    let curves = vec![
        curve("gamma", true, &[2, 0, 1, 0, 1, 0, 2], Some(0)),
        curve("mu1", true, &[0], Some(1)),
        curve("mu2", true, &[1], Some(1)),
        curve("mu3", false, &[2], Some(0)),
        curve("mu1mu2", true, &[0, 1, 0], Some(1)),
        curve("mu1mu2mu3", false, &[2, 0, 1, 0], Some(0)),
    ];
    let flip = |path: &[usize], curve: &str| FlipAnnotation {
        path: path.to_vec(),
        curve: curve.into(),
    };
    let flips = vec![
        flip(&[0], "mu1"),
        flip(&[1], "mu2"),
        flip(&[2], "mu3"),
        flip(&[0, 1], "mu1mu2"),
        flip(&[0, 1, 2], "mu1mu2mu3"),
        flip(&[0, 1, 2, 0], "gamma"),
    ];
    Scenario::new(
        "example6_1",
        t,
        SeedSpec::Principal { d: vec![2, 2, 1] },
        None,
        curves,
        flips,
    )
    .expect("bundled scenario is valid")
}

/// Which flip annotations a generated polygon scenario carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipPlan {
    /// Every mutation sequence up to this length without immediate repeats.
    Depth(usize),
    /// Shortest sequences (with their prefixes) reaching every diagonal.
    CoverAllDiagonals,
}

/// Fan triangulation of a convex n-gon (vertices 0..n counterclockwise) from
/// `apex`, with principal quantization D = I and every diagonal as a curve.
pub fn generate_polygon(n: usize, apex: usize, plan: FlipPlan) -> Result<Scenario> {
    if n < 4 {
        return Err(Error::Precondition(format!("a polygon needs at least 4 vertices, got {n}")));
    }
    if apex >= n {
        return Err(Error::OutOfRange {
            what: "fan apex",
            index: apex,
            valid: format!("0..{n}"),
        });
    }
    let r = |v: usize| (v + n - apex) % n;
    let at = |k: usize| (apex + k) % n;
    let chord_name = |u: usize, v: usize| {
        let (a, b) = (u.min(v), u.max(v));
        if (b - a) == 1 || (a == 0 && b == n - 1) {
            format!("b{u}_{v}", u = if b - a == 1 { a } else { b }, v = if b - a == 1 { b } else { a })
        } else {
            format!("d{a}_{b}")
        }
    };
    let mut arcs: Vec<ArcRecord> = (2..n - 1).map(|k| ArcRecord::ordinary(&chord_name(apex, at(k)))).collect();
    arcs.extend((0..n).map(|i| ArcRecord::boundary(&chord_name(i, (i + 1) % n))));
    let triangle_names: Vec<[String; 3]> = (0..n - 2)
        .map(|t| {
            let (u, v, w) = (apex, at(t + 1), at(t + 2));
            [chord_name(u, v), chord_name(u, w), chord_name(v, w)]
        })
        .collect();
    let tri_refs: Vec<[&str; 3]> = triangle_names
        .iter()
        .map(|t| [t[0].as_str(), t[1].as_str(), t[2].as_str()])
        .collect();
    let triangulation = Triangulation::from_ids(arcs, &tri_refs)?;
    let mut curves = Vec::new();
    for a in 0..n {
        for b in a + 2..n {
            if a == 0 && b == n - 1 {
                continue;
            }
            let name = chord_name(a, b);
            let (lo, hi) = if r(a) < r(b) { (a, b) } else { (b, a) };
            let crossing = if r(lo) == 0 {
                CrossingSequence::arc_in_triangulation(triangulation.arc_index(&name).expect("fan arc"))
            } else {
                let crossings = (r(lo) + 1..r(hi)).map(|k| k - 2).collect();
                CrossingSequence::new(crossings, Some(r(lo) - 1))
            };
            curves.push(Curve { name, crossing });
        }
    }
    let fan: Vec<(usize, usize)> = (2..n - 1).map(|k| (apex, at(k))).collect();
    let flips = polygon_flips(n, &fan, plan)
        .into_iter()
        .map(|(path, (a, b))| FlipAnnotation {
            path,
            curve: chord_name(a, b),
        })
        .collect();
    let name = if apex == 0 {
        format!("polygon{n}")
    } else {
        format!("polygon{n}_apex{apex}")
    };
    Scenario::new(
        &name,
        triangulation,
        SeedSpec::Principal { d: vec![1; n - 3] },
        None,
        curves,
        flips,
    )
}

fn flip_chord(n: usize, chords: &[(usize, usize)], k: usize) -> (usize, usize) {
    let adjacent = |u: usize, v: usize| (u + 1) % n == v || (v + 1) % n == u;
    let present = |u: usize, v: usize| adjacent(u, v) || chords.iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u));
    let (p, q) = chords[k];
    let apexes: Vec<usize> = (0..n).filter(|&x| x != p && x != q && present(p, x) && present(q, x)).collect();
    debug_assert_eq!(apexes.len(), 2, "a diagonal borders exactly two triangles");
    (apexes[0], apexes[1])
}

/// A flip path paired with the diagonal it produces last.
type PlannedFlip = (Vec<usize>, (usize, usize));

/// Diagonals of a polygon triangulation as vertex pairs.
type Triangulated = Vec<(usize, usize)>;

fn polygon_flips(n: usize, fan: &[(usize, usize)], plan: FlipPlan) -> Vec<PlannedFlip> {
    let dirs = fan.len();
    let mut out: Vec<PlannedFlip> = Vec::new();
    let mut frontier: Vec<(Vec<usize>, Triangulated)> = vec![(Vec::new(), fan.to_vec())];
    let total = n * (n - 3) / 2;
    let mut seen: BTreeSet<(usize, usize)> = fan.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let mut wanted: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut depth = 0;
    loop {
        match plan {
            FlipPlan::Depth(max) if depth >= max => break,
            FlipPlan::CoverAllDiagonals if seen.len() == total => break,
            _ => {}
        }
        let mut next = Vec::new();
        for (path, chords) in &frontier {
            for k in 0..dirs {
                if path.last() == Some(&k) {
                    continue;
                }
                let new = flip_chord(n, chords, k);
                let mut p = path.clone();
                p.push(k);
                let mut c = chords.clone();
                c[k] = new;
                if plan == FlipPlan::CoverAllDiagonals && seen.insert((new.0.min(new.1), new.0.max(new.1))) {
                    for l in 1..=p.len() {
                        wanted.insert(p[..l].to_vec());
                    }
                }
                out.push((p.clone(), new));
                next.push((p, c));
            }
        }
        frontier = next;
        depth += 1;
    }
    if plan == FlipPlan::CoverAllDiagonals {
        out.retain(|(p, _)| wanted.contains(p));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_round_trip() {
        let s = example6_1();
        let text = s.serialize();
        let back = Scenario::parse(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.serialize(), text);
        assert_eq!(s.seed.symmetrizer(), &[2, 2, 1]);
    }

    #[test]
    fn square_and_pentagon() {
        let sq = generate_polygon(4, 0, FlipPlan::Depth(1)).unwrap();
        assert_eq!(sq.triangulation.n(), 1);
        assert_eq!(sq.triangulation.triangles().len(), 2);
        let pent = generate_polygon(5, 0, FlipPlan::Depth(1)).unwrap();
        assert_eq!(pent.triangulation.n(), 2);
        for c in &pent.curves {
            assert!(c.crossing.len() <= 2);
        }
        assert!(generate_polygon(3, 0, FlipPlan::Depth(1)).is_err());
    }

    #[test]
    fn hexagon_long_diagonal_has_three_tiles() {
        let hex = generate_polygon(6, 0, FlipPlan::Depth(3)).unwrap();
        let c = hex.curve("d1_5").unwrap();
        assert_eq!(c.crossing.crossings, vec![0, 1, 2]);
        assert_eq!(hex.flips.len(), 3 + 3 * 2 + 3 * 2 * 2);
    }

    #[test]
    fn covering_plan_reaches_every_diagonal() {
        for n in 4..=8 {
            for apex in [0, n / 2] {
                let s = generate_polygon(n, apex, FlipPlan::CoverAllDiagonals).unwrap();
                let reached: BTreeSet<&str> = s.flips.iter().map(|f| f.curve.as_str()).collect();
                let fan = s.triangulation.n();
                assert!(reached.len() + fan >= s.curves.len(), "n = {n}");
            }
        }
    }

    #[test]
    fn diagnostics_carry_lines() {
        let text = example6_1().serialize().replace("\"weight\": 1", "\"weight\": 3");
        match Scenario::parse(&text) {
            Err(Error::Scenario { line: Some(l), .. }) => assert!(l > 1),
            other => panic!("unexpected {other:?}"),
        }
        let broken = "{\n  \"version\": 1,\n  \"name\": ,\n}";
        assert!(matches!(Scenario::parse(broken), Err(Error::Scenario { line: Some(3), .. })));
    }

    #[test]
    fn empty_triangle_list_is_rejected() {
        let text = example6_1().serialize();
        let start = text.find("\"triangles\"").unwrap();
        let end = start + text[start..].find("],\n  \"seed\"").unwrap();
        let edited = format!("{}\"triangles\": [{}", &text[..start], &text[end..]);
        let err = Scenario::parse(&edited).unwrap_err();
        assert!(err.to_string().contains("empty triangle list"), "{err}");
    }
}
