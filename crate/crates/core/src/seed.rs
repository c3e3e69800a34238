//! Exchange matrices, compatible quantization pairs and their mutation.
//!
//! Directions are 0-based throughout the library: the mutable rows of an
//! m×n extended exchange matrix are `0..n`, the frozen rows `n..m`.

use std::fmt;

use crate::error::{Error, Result};

/// Dense integer matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from nested rows; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension {
                    expected: format!("{cols} columns"),
                    found: format!("{} in row {}", row.len(), i + 1),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", other.rows),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.add_at(i, j, a * other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..=i).all(|j| self.get(i, j) == -self.get(j, i)))
    }

    /// `aᵀ M b`.
    pub fn bilinear(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                s += ai * self.get(i, j) * bj;
            }
        }
        s
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(i64::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// An m×n matrix whose top n×n block is the exchange matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtendedExchangeMatrix {
    entries: IntMatrix,
}

impl ExtendedExchangeMatrix {
    pub fn new(entries: IntMatrix) -> Result<Self> {
        let (m, n) = (entries.rows(), entries.cols());
        if n == 0 || m < n {
            return Err(Error::Dimension {
                expected: "m >= n >= 1".into(),
                found: format!("m = {m}, n = {n}"),
            });
        }
        Ok(ExtendedExchangeMatrix { entries })
    }

    pub fn m(&self) -> usize {
        self.entries.rows()
    }

    pub fn n(&self) -> usize {
        self.entries.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries.get(i, j)
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    /// Top n×n block.
    pub fn principal_part(&self) -> IntMatrix {
        let n = self.n();
        let mut b = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                b.set(i, j, self.get(i, j));
            }
        }
        b
    }

    pub fn column(&self, k: usize) -> Vec<i64> {
        self.entries.column(k)
    }

    /// `(b_k)_+`: entrywise positive part of column k.
    pub fn column_positive(&self, k: usize) -> Vec<i64> {
        self.column(k).into_iter().map(|v| v.max(0)).collect()
    }

    /// `(b_k)_-`: entrywise positive part of the negated column k.
    pub fn column_negative(&self, k: usize) -> Vec<i64> {
        self.column(k).into_iter().map(|v| (-v).max(0)).collect()
    }

    fn check_direction(&self, k: usize) -> Result<()> {
        if k >= self.n() {
            return Err(Error::OutOfRange {
                what: "mutation direction",
                index: k,
                valid: format!("0..{}", self.n()),
            });
        }
        Ok(())
    }
}

/// Skew-symmetric m×m integer form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LambdaForm {
    entries: IntMatrix,
}

impl LambdaForm {
    pub fn new(entries: IntMatrix) -> Result<Self> {
        if entries.rows() != entries.cols() {
            return Err(Error::Dimension {
                expected: "square matrix".into(),
                found: format!("{}x{}", entries.rows(), entries.cols()),
            });
        }
        for i in 0..entries.rows() {
            for j in 0..=i {
                if entries.get(i, j) != -entries.get(j, i) {
                    return Err(Error::Precondition(format!(
                        "lambda is not skew-symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(LambdaForm { entries })
    }

    pub fn size(&self) -> usize {
        self.entries.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries.get(i, j)
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    /// Λ(a, b) = aᵀΛb.
    pub fn pair(&self, a: &[i64], b: &[i64]) -> i64 {
        self.entries.bilinear(a, b)
    }
}

/// Checks `B̃ᵀΛ = (D 0)` with D positive diagonal and returns `(d_1..d_n)`.
pub fn check_compatibility(btilde: &ExtendedExchangeMatrix, lambda: &LambdaForm) -> Result<Vec<i64>> {
    if lambda.size() != btilde.m() {
        return Err(Error::Dimension {
            expected: format!("{0}x{0} lambda", btilde.m()),
            found: format!("{0}x{0}", lambda.size()),
        });
    }
    let product = btilde.entries().transpose().mul(lambda.entries())?;
    let mut d = Vec::with_capacity(btilde.n());
    for i in 0..btilde.n() {
        for j in 0..btilde.m() {
            let v = product.get(i, j);
            let ok = if i == j { v > 0 } else { v == 0 };
            if !ok {
                let want = if i == j { "a positive entry" } else { "0" };
                return Err(Error::Incompatible(format!(
                    "entry ({}, {}) of B^T Lambda is {v}, expected {want}",
                    i + 1,
                    j + 1
                )));
            }
        }
        d.push(product.get(i, i));
    }
    Ok(d)
}

/// Standard matrix mutation in direction k.
pub fn mutate_matrix(btilde: &ExtendedExchangeMatrix, k: usize) -> Result<ExtendedExchangeMatrix> {
    btilde.check_direction(k)?;
    let (m, n) = (btilde.m(), btilde.n());
    let mut out = IntMatrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            let b = btilde.get(i, j);
            let v = if i == k || j == k {
                -b
            } else {
                let (bik, bkj) = (btilde.get(i, k), btilde.get(k, j));
                b + bik.max(0) * bkj.max(0) - (-bik).max(0) * (-bkj).max(0)
            };
            out.set(i, j, v);
        }
    }
    Ok(ExtendedExchangeMatrix { entries: out })
}

/// Mutated Λ: column k becomes Λ(e_i, -e_k + Σ_l [b_lk]_+ e_l).
pub fn mutate_lambda(seed: &QuantumSeed, k: usize) -> Result<LambdaForm> {
    seed.btilde.check_direction(k)?;
    let m = seed.m();
    let mut target = seed.btilde.column_positive(k);
    target[k] -= 1;
    let mut out = seed.lambda.entries().clone();
    for i in 0..m {
        if i == k {
            continue;
        }
        let mut e = vec![0; m];
        e[i] = 1;
        let v = seed.lambda.pair(&e, &target);
        out.set(i, k, v);
        out.set(k, i, -v);
    }
    out.set(k, k, 0);
    LambdaForm::new(out)
}

/// A compatible pair (B̃, Λ) together with its symmetrizer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuantumSeed {
    btilde: ExtendedExchangeMatrix,
    lambda: LambdaForm,
    symmetrizer: Vec<i64>,
}

impl QuantumSeed {
    pub fn new(btilde: ExtendedExchangeMatrix, lambda: LambdaForm) -> Result<Self> {
        let symmetrizer = check_compatibility(&btilde, &lambda)?;
        Ok(QuantumSeed {
            btilde,
            lambda,
            symmetrizer,
        })
    }

    pub fn btilde(&self) -> &ExtendedExchangeMatrix {
        &self.btilde
    }

    pub fn lambda(&self) -> &LambdaForm {
        &self.lambda
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    pub fn m(&self) -> usize {
        self.btilde.m()
    }

    pub fn n(&self) -> usize {
        self.btilde.n()
    }

    /// Simultaneous mutation of B̃ and Λ; the symmetrizer must be preserved.
    pub fn mutate(&self, k: usize) -> Result<QuantumSeed> {
        let btilde = mutate_matrix(&self.btilde, k)?;
        let lambda = mutate_lambda(self, k)?;
        let next = QuantumSeed::new(btilde, lambda)
            .map_err(|e| Error::Integrity(format!("mutation in direction {}: {e}", k + 1)))?;
        if next.symmetrizer != self.symmetrizer {
            return Err(Error::Integrity(format!(
                "mutation in direction {} changed the symmetrizer",
                k + 1
            )));
        }
        Ok(next)
    }

    /// Like [`Self::mutate`], but a failed compatibility re-check is returned
    /// alongside the mutated pair (which keeps the old symmetrizer) instead of
    /// aborting.
    pub fn mutate_lenient(&self, k: usize) -> Result<(QuantumSeed, Option<Error>)> {
        match self.mutate(k) {
            Ok(next) => Ok((next, None)),
            Err(Error::Integrity(msg)) => {
                let next = QuantumSeed {
                    btilde: mutate_matrix(&self.btilde, k)?,
                    lambda: mutate_lambda(self, k)?,
                    symmetrizer: self.symmetrizer.clone(),
                };
                Ok((next, Some(Error::Integrity(msg))))
            }
            Err(e) => Err(e),
        }
    }

    /// Mutates along a sequence of directions, left to right.
    pub fn mutate_along(&self, path: &[usize]) -> Result<QuantumSeed> {
        let mut seed = self.clone();
        for &k in path {
            seed = seed.mutate(k)?;
        }
        Ok(seed)
    }
}

/// Principal quantization: B̃ = (B; I_n) and Λ = [[0, -D], [D, -DB]].
pub fn build_principal_quantization(b: &IntMatrix, d: &[i64]) -> Result<QuantumSeed> {
    let n = b.rows();
    if b.cols() != n || d.len() != n {
        return Err(Error::Dimension {
            expected: format!("square B and {n} symmetrizer entries"),
            found: format!("{}x{} and {}", b.rows(), b.cols(), d.len()),
        });
    }
    if let Some(i) = d.iter().position(|&x| x <= 0) {
        return Err(Error::Precondition(format!("d_{} is not positive", i + 1)));
    }
    let mut db = IntMatrix::zeros(n, n);
    for (i, &di) in d.iter().enumerate() {
        for j in 0..n {
            db.set(i, j, di * b.get(i, j));
        }
    }
    if !db.is_skew_symmetric() {
        return Err(Error::Precondition("D*B is not skew-symmetric".into()));
    }
    let mut bt = IntMatrix::zeros(2 * n, n);
    let mut lam = IntMatrix::zeros(2 * n, 2 * n);
    for (i, &di) in d.iter().enumerate() {
        for j in 0..n {
            bt.set(i, j, b.get(i, j));
            lam.set(n + i, n + j, -db.get(i, j));
        }
        bt.set(n + i, i, 1);
        lam.set(i, n + i, -di);
        lam.set(n + i, i, di);
    }
    let seed = QuantumSeed::new(ExtendedExchangeMatrix::new(bt)?, LambdaForm::new(lam)?)?;
    if seed.symmetrizer != d {
        return Err(Error::Integrity("principal quantization lost its symmetrizer".into()));
    }
    Ok(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_b() -> IntMatrix {
        IntMatrix::from_rows(&[vec![0, 2, -1], vec![-2, 0, 1], vec![2, -2, 0]]).unwrap()
    }

    #[test]
    fn rank_one_principal() {
        let seed = build_principal_quantization(&IntMatrix::from_rows(&[vec![0]]).unwrap(), &[2]).unwrap();
        assert_eq!(seed.btilde().entries().to_rows(), vec![vec![0], vec![1]]);
        assert_eq!(seed.lambda().entries().to_rows(), vec![vec![0, -2], vec![2, 0]]);
        assert_eq!(seed.symmetrizer(), &[2]);
    }

    #[test]
    fn example_seed_lambda_blocks() {
        let seed = build_principal_quantization(&example_b(), &[2, 2, 1]).unwrap();
        let lam = seed.lambda().entries();
        assert_eq!(lam.row(0), &[0, 0, 0, -2, 0, 0]);
        assert_eq!(lam.row(3), &[2, 0, 0, 0, -4, 2]);
        assert_eq!(lam.row(5), &[0, 0, 1, -2, 2, 0]);
        assert_eq!(seed.symmetrizer(), &[2, 2, 1]);
    }

    #[test]
    fn zero_lambda_is_incompatible() {
        let seed = build_principal_quantization(&example_b(), &[2, 2, 1]).unwrap();
        let zero = LambdaForm::new(IntMatrix::zeros(6, 6)).unwrap();
        assert!(matches!(check_compatibility(seed.btilde(), &zero), Err(Error::Incompatible(_))));
    }

    #[test]
    fn perturbed_entry_is_located() {
        let seed = build_principal_quantization(&example_b(), &[2, 2, 1]).unwrap();
        let mut lam = seed.lambda().entries().clone();
        lam.add_at(1, 4, 1);
        lam.add_at(4, 1, -1);
        let err = check_compatibility(seed.btilde(), &LambdaForm::new(lam).unwrap()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains(", 5)") || msg.contains(", 2)"), "{msg}");
    }

    #[test]
    fn shape_mismatch() {
        let seed = build_principal_quantization(&example_b(), &[2, 2, 1]).unwrap();
        let lam = LambdaForm::new(IntMatrix::zeros(4, 4)).unwrap();
        assert!(matches!(check_compatibility(seed.btilde(), &lam), Err(Error::Dimension { .. })));
    }

    #[test]
    fn simple_mutation() {
        let b = ExtendedExchangeMatrix::new(IntMatrix::from_rows(&[vec![0, 1], vec![-1, 0]]).unwrap()).unwrap();
        let mb = mutate_matrix(&b, 0).unwrap();
        assert_eq!(mb.entries().to_rows(), vec![vec![0, -1], vec![1, 0]]);
        assert!(mutate_matrix(&b, 2).is_err());
    }

    #[test]
    fn example_seed_mutations_stay_compatible() {
        let seed = build_principal_quantization(&example_b(), &[2, 2, 1]).unwrap();
        for k in 0..3 {
            let next = seed.mutate(k).unwrap();
            assert_eq!(next.symmetrizer(), &[2, 2, 1]);
            assert_eq!(next.mutate(k).unwrap(), seed);
        }
    }

    #[test]
    fn non_symmetrizable_input_rejected() {
        let b = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(matches!(build_principal_quantization(&b, &[1, 1]), Err(Error::Precondition(_))));
    }
}
