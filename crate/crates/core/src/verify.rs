//! Consistency checks tying matching-formula expansions to mutation dynamics.
//!
//! Quantum checks never divide: exchange relations are verified in product
//! form in the base quantum torus. The commutative oracle iterates the
//! exchange relation with exact Laurent division.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::expansion::{height_vector, height_vector_by_twists, ArcExpansion};
use crate::laurent::LaurentPolynomial;
use crate::scenario::{format_path, ClusterVariable, Scenario};
use crate::seed::{check_compatibility, mutate_matrix, ExtendedExchangeMatrix, QuantumSeed};
use crate::snake::{count_matchings, maximal_matching, minimal_matching};
use crate::torus::{format_exponent, TorusElement};

/// Checks run by [`Verifier::run`], in report order.
pub const CHECKS: [&str; 8] = [
    "compatibility",
    "valuation",
    "height_methods",
    "q1_coherence",
    "positivity_bar",
    "commutative_oracle",
    "exchange_relation",
    "quasi_commutation",
];

/// Matching-count limit for the checks that walk every matching twice.
pub const MATCHING_LIMIT: u128 = 10_000;

/// What happens when a mutated seed fails its compatibility re-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeedCheckMode {
    /// Abort with the integrity error.
    #[default]
    Strict,
    /// Keep going with the mutated pair and record a warning.
    Warn,
}

impl SeedCheckMode {
    /// Reads `QCL_SEED_CHECKS` (`strict` or `warn`; unset means strict).
    pub fn from_env() -> Result<Self> {
        match std::env::var("QCL_SEED_CHECKS") {
            Err(std::env::VarError::NotPresent) => Ok(Self::Strict),
            Ok(v) if v == "strict" => Ok(Self::Strict),
            Ok(v) if v == "warn" => Ok(Self::Warn),
            Ok(v) => Err(Error::Precondition(format!(
                "QCL_SEED_CHECKS must be 'strict' or 'warn', got '{v}'"
            ))),
            Err(e) => Err(Error::Precondition(format!("QCL_SEED_CHECKS: {e}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    Skip(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub check: &'static str,
    pub scenario: String,
    pub subject: String,
    pub outcome: Outcome,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        !matches!(self.outcome, Outcome::Fail(_))
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = |f: &mut fmt::Formatter<'_>, tag: &str| {
            write!(f, "{tag} {} {} {}", self.check, self.scenario, self.subject)
        };
        match &self.outcome {
            Outcome::Pass => head(f, "PASS"),
            Outcome::Fail(detail) => {
                head(f, "FAIL")?;
                write!(f, ": {detail}")
            }
            Outcome::Skip(reason) => {
                head(f, "SKIP")?;
                write!(f, ": {reason}")
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub results: Vec<CheckResult>,
    /// Seed re-verification failures tolerated under [`SeedCheckMode::Warn`].
    pub warnings: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.results.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| !r.passed())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// First term of `a - b` in canonical form, if the two differ.
pub fn first_difference(a: &TorusElement, b: &TorusElement) -> Result<Option<String>> {
    let diff = a.sub(b)?;
    let first = diff
        .terms()
        .next()
        .map(|(e, c)| format!("first differing term ({c}) {}", format_exponent(e)));
    Ok(first)
}

/// Every coefficient lies in ℕ[q^{±1/2}] and the element is bar-fixed.
pub fn check_positivity_and_bar(x: &TorusElement) -> Result<Outcome> {
    if let Some((e, c)) = x.terms().find(|(_, c)| !c.is_nonnegative()) {
        return Ok(Outcome::Fail(format!(
            "coefficient ({c}) of {} is not in N[q^(+-1/2)]",
            format_exponent(e)
        )));
    }
    Ok(match first_difference(x, &x.bar())? {
        Some(d) => Outcome::Fail(format!("not bar-invariant, {d}")),
        None => Outcome::Pass,
    })
}

/// Expansions, in initial variables, of the cluster reached along `path`,
/// computed by iterating the exchange relation with exact division.
pub fn commutative_oracle(btilde: &ExtendedExchangeMatrix, path: &[usize]) -> Result<Vec<LaurentPolynomial>> {
    let m = btilde.m();
    let mut xs: Vec<LaurentPolynomial> = (0..m).map(|i| LaurentPolynomial::variable(m, i)).collect();
    let mut b = btilde.clone();
    for &k in path {
        let mut pos = LaurentPolynomial::one(m);
        let mut neg = LaurentPolynomial::one(m);
        for (i, x) in xs.iter().enumerate() {
            let e = b.get(i, k);
            if e > 0 {
                pos = pos.mul(&x.pow(e as u32));
            } else if e < 0 {
                neg = neg.mul(&x.pow((-e) as u32));
            }
        }
        xs[k] = pos.add(&neg).div_exact(&xs[k]).map_err(|e| match e {
            Error::Integrity(msg) => Error::Integrity(format!("mutation in direction {}: {msg}", k + 1)),
            other => other,
        })?;
        b = mutate_matrix(&b, k)?;
    }
    Ok(xs)
}

/// Normalized monomial X(t)^b = q^{-Σ_{i<j} Λ(t)_ij b_i b_j / 2} X_1(t)^{b_1}⋯X_m(t)^{b_m}
/// for a nonnegative `b`, multiplied out in the base torus.
pub fn normalized_monomial(
    cluster: &[TorusElement],
    b: &[i64],
    seed_t: &QuantumSeed,
    base: &QuantumSeed,
) -> Result<TorusElement> {
    let mut out = TorusElement::one(base.m());
    for (x, &e) in cluster.iter().zip(b) {
        if e < 0 {
            return Err(Error::Precondition("normalized monomials need nonnegative exponents".into()));
        }
        for _ in 0..e {
            out = out.multiply(x, base.lambda())?;
        }
    }
    let mut twist = 0;
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            twist += seed_t.lambda().get(i, j) * b[i] * b[j];
        }
    }
    Ok(out.shift_q(-twist))
}

/// Runs the checks on one scenario, caching base-torus expansions.
pub struct Verifier<'a> {
    scenario: &'a Scenario,
    mode: SeedCheckMode,
    expansions: HashMap<String, ArcExpansion>,
    quantum: HashMap<ClusterVariable, TorusElement>,
    warnings: Vec<String>,
}

impl<'a> Verifier<'a> {
    pub fn new(scenario: &'a Scenario, mode: SeedCheckMode) -> Self {
        Verifier {
            scenario,
            mode,
            expansions: HashMap::new(),
            quantum: HashMap::new(),
            warnings: Vec::new(),
        }
    }

    /// Runs every check, or only the named one.
    pub fn run(mut self, only: Option<&str>) -> Result<Report> {
        if let Some(name) = only {
            if !CHECKS.contains(&name) {
                return Err(Error::NotFound(format!(
                    "check '{name}' (available: {})",
                    CHECKS.join(", ")
                )));
            }
        }
        let mut results = Vec::new();
        for check in CHECKS {
            if only.is_none_or(|n| n == check) {
                results.extend(self.run_check(check)?);
            }
        }
        Ok(Report {
            results,
            warnings: self.warnings,
        })
    }

    fn run_check(&mut self, check: &'static str) -> Result<Vec<CheckResult>> {
        let s = self.scenario;
        let mut out = Vec::new();
        match check {
            "compatibility" => {
                for path in s.seed_paths() {
                    let outcome = self.compatibility(&path)?;
                    out.push(self.result(check, format_path(&path), outcome));
                }
            }
            "commutative_oracle" | "exchange_relation" => {
                for f in &s.flips {
                    let outcome = if check == "commutative_oracle" {
                        self.oracle(&f.path)?
                    } else {
                        self.exchange(&f.path)?
                    };
                    out.push(self.result(check, format!("{} {}", f.curve, format_path(&f.path)), outcome));
                }
            }
            "quasi_commutation" => {
                for path in s.seed_paths() {
                    let outcome = self.quasi_commutation(&path)?;
                    out.push(self.result(check, format_path(&path), outcome));
                }
            }
            _ => {
                for c in &s.curves {
                    let outcome = self.curve_check(check, &c.name)?;
                    out.push(self.result(check, c.name.clone(), outcome));
                }
            }
        }
        Ok(out)
    }

    fn result(&self, check: &'static str, subject: String, outcome: Outcome) -> CheckResult {
        CheckResult {
            check,
            scenario: self.scenario.name.clone(),
            subject,
            outcome,
        }
    }

    /// Seed reached along `path` under the configured re-check mode.
    pub fn seed_at(&mut self, path: &[usize]) -> Result<QuantumSeed> {
        let mut seed = self.scenario.seed.clone();
        for (l, &k) in path.iter().enumerate() {
            seed = match self.mode {
                SeedCheckMode::Strict => seed.mutate(k)?,
                SeedCheckMode::Warn => {
                    let (next, problem) = seed.mutate_lenient(k)?;
                    if let Some(e) = problem {
                        let w = format!("{} {}: {e}", self.scenario.name, format_path(&path[..=l]));
                        if !self.warnings.contains(&w) {
                            self.warnings.push(w);
                        }
                    }
                    next
                }
            };
        }
        Ok(seed)
    }

    fn expansion(&mut self, name: &str) -> Result<&ArcExpansion> {
        if !self.expansions.contains_key(name) {
            let s = self.scenario;
            let curve = s
                .curve(name)
                .ok_or_else(|| Error::NotFound(format!("curve '{name}'")))?;
            let e = ArcExpansion::compute(&s.triangulation, &curve.crossing, s.seed.btilde())?;
            self.expansions.insert(name.to_string(), e);
        }
        Ok(&self.expansions[name])
    }

    /// Base-torus expansion of a cluster variable.
    pub fn quantum(&mut self, v: &ClusterVariable) -> Result<TorusElement> {
        if let Some(x) = self.quantum.get(v) {
            return Ok(x.clone());
        }
        let x = match v {
            ClusterVariable::Initial(i) => {
                let mut e = vec![0; self.scenario.seed.m()];
                e[*i] = 1;
                TorusElement::monomial(e)
            }
            ClusterVariable::Curve(name) => {
                let seed = self.scenario.seed.clone();
                self.expansion(name)?.quantum(&seed)?
            }
        };
        self.quantum.insert(v.clone(), x.clone());
        Ok(x)
    }

    fn compatibility(&mut self, path: &[usize]) -> Result<Outcome> {
        let mut seed = self.scenario.seed.clone();
        for &k in path {
            let (next, problem) = seed.mutate_lenient(k)?;
            if let Some(e) = problem {
                return Ok(Outcome::Fail(e.to_string()));
            }
            seed = next;
        }
        Ok(match check_compatibility(seed.btilde(), seed.lambda()) {
            Ok(d) if d == self.scenario.seed.symmetrizer() => Outcome::Pass,
            Ok(d) => Outcome::Fail(format!("symmetrizer {d:?} differs from the base seed")),
            Err(e) => Outcome::Fail(e.to_string()),
        })
    }

    fn curve_check(&mut self, check: &'static str, name: &str) -> Result<Outcome> {
        let seed = self.scenario.seed.clone();
        let t = &self.scenario.triangulation;
        let e = match self.expansion(name) {
            Ok(e) => e.clone(),
            Err(err) => return Ok(Outcome::Fail(err.to_string())),
        };
        let count = count_matchings(&e.graph);
        let big = count > MATCHING_LIMIT;
        Ok(match check {
            "valuation" if big => Outcome::Skip(format!("{count} matchings")),
            "valuation" => match e.valuation(&seed) {
                Ok(v) => {
                    let lo = v.get(&minimal_matching(&e.graph));
                    let hi = v.get(&maximal_matching(&e.graph));
                    if lo == Some(0) && hi == Some(0) {
                        Outcome::Pass
                    } else {
                        Outcome::Fail(format!("extremal valuations {lo:?} and {hi:?}"))
                    }
                }
                Err(err) => Outcome::Fail(err.to_string()),
            },
            "height_methods" if big => Outcome::Skip(format!("{count} matchings")),
            "height_methods" => {
                let mut outcome = Outcome::Pass;
                for p in e.matchings() {
                    let a = height_vector(t, &e.graph, p)?;
                    let b = height_vector_by_twists(t, &e.graph, p);
                    if b.as_ref() != Ok(&a) {
                        outcome = Outcome::Fail(format!(
                            "matching {:?}: enclosed tiles give {a:?}, twists give {b:?}",
                            p.edges()
                        ));
                        break;
                    }
                }
                outcome
            }
            "q1_coherence" => match e.quantum(&seed) {
                Ok(x) => {
                    let commutative = e.commutative();
                    let specialized = x.specialize_q1();
                    match commutative.iter().find(|(a, c)| specialized.get(*a) != Some(*c)) {
                        None if specialized.len() == commutative.len() => Outcome::Pass,
                        Some((a, c)) => Outcome::Fail(format!(
                            "coefficient of {} is {c} commutatively, {:?} at q = 1",
                            format_exponent(a),
                            specialized.get(a)
                        )),
                        None => Outcome::Fail("specialization has extra terms".into()),
                    }
                }
                Err(err) => Outcome::Fail(err.to_string()),
            },
            "positivity_bar" => match self.quantum(&ClusterVariable::Curve(name.to_string())) {
                Ok(x) => check_positivity_and_bar(&x)?,
                Err(err) => Outcome::Fail(err.to_string()),
            },
            _ => unreachable!("unknown curve check {check}"),
        })
    }

    fn oracle(&mut self, path: &[usize]) -> Result<Outcome> {
        let s = self.scenario;
        let name = &s.flip(path).expect("annotated path").curve;
        let xs = match commutative_oracle(s.seed.btilde(), path) {
            Ok(xs) => xs,
            Err(e) => return Ok(Outcome::Fail(e.to_string())),
        };
        let k = *path.last().expect("non-empty path");
        let m = s.seed.m();
        let expected = match self.expansion(name) {
            Ok(e) => LaurentPolynomial::from_terms(m, e.commutative()),
            Err(e) => return Ok(Outcome::Fail(e.to_string())),
        };
        if xs[k] == expected {
            return Ok(Outcome::Pass);
        }
        let diff = xs[k].sub(&expected);
        let (a, c) = diff.terms().iter().next().expect("nonzero difference");
        Ok(Outcome::Fail(format!(
            "oracle minus matching formula has term {c} {}",
            format_exponent(a)
        )))
    }

    fn cluster(&mut self, path: &[usize]) -> Result<Vec<TorusElement>> {
        self.scenario
            .cluster_at(path)?
            .iter()
            .map(|v| self.quantum(v))
            .collect()
    }

    /// X_k(t')·X_k(t) = Σ_± q^{Λ(t)(-e_k + b_±, e_k)/2} X(t)^{b_±}, where t is
    /// the seed before the last mutation of `path`.
    fn exchange(&mut self, path: &[usize]) -> Result<Outcome> {
        let (k, prefix) = path.split_last().expect("non-empty path");
        let k = *k;
        let base = self.scenario.seed.clone();
        let seed_t = self.seed_at(prefix)?;
        let cluster = match self.cluster(prefix) {
            Ok(c) => c,
            Err(e) => return Ok(Outcome::Fail(e.to_string())),
        };
        let new_var = ClusterVariable::Curve(self.scenario.flip(path).expect("annotated").curve.clone());
        let x_new = match self.quantum(&new_var) {
            Ok(x) => x,
            Err(e) => return Ok(Outcome::Fail(e.to_string())),
        };
        let lhs = x_new.multiply(&cluster[k], base.lambda())?;
        let mut e_k = vec![0; base.m()];
        e_k[k] = 1;
        let mut rhs = TorusElement::zero(base.m());
        for b in [seed_t.btilde().column_positive(k), seed_t.btilde().column_negative(k)] {
            let mut v = b.clone();
            v[k] -= 1;
            let prefactor = seed_t.lambda().pair(&v, &e_k);
            let mono = normalized_monomial(&cluster, &b, &seed_t, &base)?;
            rhs = rhs.add(&mono.shift_q(prefactor))?;
        }
        Ok(match first_difference(&lhs, &rhs)? {
            None => Outcome::Pass,
            Some(d) => Outcome::Fail(d),
        })
    }

    /// X_i(t) X_j(t) = q^{Λ(t)_ij} X_j(t) X_i(t) for every pair of the cluster.
    fn quasi_commutation(&mut self, path: &[usize]) -> Result<Outcome> {
        let base = self.scenario.seed.clone();
        let seed_t = self.seed_at(path)?;
        let cluster = match self.cluster(path) {
            Ok(c) => c,
            Err(e) => return Ok(Outcome::Fail(e.to_string())),
        };
        for i in 0..cluster.len() {
            for j in i + 1..cluster.len() {
                let ij = cluster[i].multiply(&cluster[j], base.lambda())?;
                let ji = cluster[j].multiply(&cluster[i], base.lambda())?;
                if let Some(d) = first_difference(&ij, &ji.shift_q(2 * seed_t.lambda().get(i, j)))? {
                    return Ok(Outcome::Fail(format!("variables {} and {}: {d}", i + 1, j + 1)));
                }
            }
        }
        Ok(Outcome::Pass)
    }
}

/// Full suite on one scenario.
pub fn verify(s: &Scenario, only: Option<&str>, mode: SeedCheckMode) -> Result<Report> {
    Verifier::new(s, mode).run(only)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{example6_1, generate_polygon, FlipPlan};
    use crate::torus::QHalfLaurent;

    #[test]
    fn example_suite_passes() {
        let report = verify(&example6_1(), None, SeedCheckMode::Strict).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.warnings.is_empty());
        assert!(report.results.iter().any(|r| r.check == "exchange_relation" && r.subject.starts_with("gamma")));
    }

    #[test]
    fn pentagon_suite_passes() {
        let s = generate_polygon(5, 0, FlipPlan::CoverAllDiagonals).unwrap();
        let report = verify(&s, None, SeedCheckMode::Strict).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn single_mutation_is_binomial() {
        let s = example6_1();
        let xs = commutative_oracle(s.seed.btilde(), &[2]).unwrap();
        // column 3 of B̃: (-1, 1, 0, 0, 0, 1)
        let expected = LaurentPolynomial::from_terms(6, [(vec![0, 1, -1, 0, 0, 1], 1), (vec![1, 0, -1, 0, 0, 0], 1)]);
        assert_eq!(xs[2], expected);
    }

    #[test]
    fn negated_term_is_reported() {
        let mut x = TorusElement::monomial(vec![1, 0]);
        assert_eq!(check_positivity_and_bar(&x).unwrap(), Outcome::Pass);
        x.add_term(vec![0, 1], &QHalfLaurent::q_half_pow(0).neg()).unwrap();
        match check_positivity_and_bar(&x).unwrap() {
            Outcome::Fail(msg) => assert!(msg.contains("x^{(0,1)}"), "{msg}"),
            other => panic!("{other:?}"),
        }
        let mut y = TorusElement::monomial(vec![1, 0]);
        y.add_term(vec![0, 1], &QHalfLaurent::q_half_pow(1)).unwrap();
        assert!(matches!(check_positivity_and_bar(&y).unwrap(), Outcome::Fail(_)));
    }

    #[test]
    fn unknown_check_is_rejected() {
        assert!(matches!(
            verify(&example6_1(), Some("nope"), SeedCheckMode::Strict),
            Err(Error::NotFound(_))
        ));
        let only = verify(&example6_1(), Some("quasi_commutation"), SeedCheckMode::Strict).unwrap();
        assert!(only.results.iter().all(|r| r.check == "quasi_commutation"));
        assert_eq!(only.results.len(), 7);
    }

    #[test]
    fn wrong_annotation_fails_exchange() {
        let mut s = example6_1();
        for f in &mut s.flips {
            if f.curve == "mu1mu2mu3" {
                f.curve = "mu3".into();
            }
        }
        let report = verify(&s, Some("exchange_relation"), SeedCheckMode::Strict).unwrap();
        assert!(!report.passed());
        let line = report.failures().next().unwrap().to_string();
        assert!(line.starts_with("FAIL exchange_relation example6_1"), "{line}");
        assert!(line.contains("first differing term"), "{line}");
    }
}
