//! Observation model: probability matrices, ground truth, responses.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{self, stream};

/// Default tolerance for exact constructions.
pub const DEFAULT_CLASS_TOL: f64 = 1e-9;

/// An `n x d` matrix of correctness probabilities, stored row-major.
///
/// Entries are in `[0.5, 1]` unless the matrix was built with
/// [`ProbabilityMatrix::adversarial`], which admits the full `[0, 1]` range.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMatrix {
    n: usize,
    d: usize,
    entries: Vec<f64>,
    allows_adversarial: bool,
}

impl ProbabilityMatrix {
    pub fn new(n: usize, d: usize, entries: Vec<f64>) -> Result<Self> {
        Self::build(n, d, entries, false)
    }

    /// Like [`new`](Self::new) but permits entries below one half.
    pub fn adversarial(n: usize, d: usize, entries: Vec<f64>) -> Result<Self> {
        Self::build(n, d, entries, true)
    }

    /// Dawid-Skene matrix `abilities · 1ᵀ`.
    pub fn from_abilities(abilities: &[f64], d: usize) -> Result<Self> {
        let entries = broadcast(abilities, d);
        Self::new(abilities.len(), d, entries)
    }

    pub fn from_abilities_adversarial(abilities: &[f64], d: usize) -> Result<Self> {
        let entries = broadcast(abilities, d);
        Self::adversarial(abilities.len(), d, entries)
    }

    pub fn from_fn(n: usize, d: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let entries = (0..n)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        Self::new(n, d, entries)
    }

    fn build(n: usize, d: usize, entries: Vec<f64>, allows_adversarial: bool) -> Result<Self> {
        check_dims(n, d, entries.len())?;
        let lo = if allows_adversarial { 0.0 } else { 0.5 };
        for (k, &v) in entries.iter().enumerate() {
            if !(lo..=1.0).contains(&v) {
                return Err(Error::EntryOutOfRange {
                    row: k / d,
                    col: k % d,
                    value: v,
                    lo,
                    hi: 1.0,
                });
            }
        }
        Ok(Self {
            n,
            d,
            entries,
            allows_adversarial,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn allows_adversarial(&self) -> bool {
        self.allows_adversarial
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.d + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.d..(i + 1) * self.d]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Mean correctness probability of each worker.
    pub fn row_means(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().sum::<f64>() / self.d as f64)
            .collect()
    }
}

fn broadcast(abilities: &[f64], d: usize) -> Vec<f64> {
    abilities
        .iter()
        .flat_map(|&w| std::iter::repeat_n(w, d))
        .collect()
}

fn check_dims(n: usize, d: usize, len: usize) -> Result<()> {
    if n == 0 || d == 0 {
        return Err(Error::Dimension(format!("{n}x{d} matrix has no cells")));
    }
    if n.checked_mul(d) != Some(len) {
        return Err(Error::Mismatch {
            expected: format!("{} entries for {n}x{d}", n.saturating_mul(d)),
            actual: format!("{len} entries"),
        });
    }
    Ok(())
}

/// A vector of binary answers, each exactly `-1` or `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Answers(Vec<i8>);

impl Answers {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        validate_answers(&values)?;
        Ok(Self(values))
    }

    pub fn all(value: i8, d: usize) -> Result<Self> {
        Self::new(vec![value; d])
    }

    pub(crate) fn from_signs_unchecked(values: Vec<i8>) -> Self {
        debug_assert!(validate_answers(&values).is_ok());
        Self(values)
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<i8> {
        self.0
    }
}

impl std::ops::Deref for Answers {
    type Target = [i8];
    fn deref(&self) -> &[i8] {
        &self.0
    }
}

pub(crate) fn validate_answers(values: &[i8]) -> Result<()> {
    match values.iter().position(|&v| v != 1 && v != -1) {
        Some(index) => Err(Error::InvalidAnswer {
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}

/// Ground truth: probability matrix, true answers and observation rate.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthInstance {
    q: ProbabilityMatrix,
    truth: Answers,
    p_obs: f64,
}

impl TruthInstance {
    pub fn new(q: ProbabilityMatrix, truth: Answers, p_obs: f64) -> Result<Self> {
        if truth.len() != q.d() {
            return Err(Error::Mismatch {
                expected: format!("{} answers", q.d()),
                actual: format!("{} answers", truth.len()),
            });
        }
        check_pobs(p_obs)?;
        Ok(Self { q, truth, p_obs })
    }

    pub fn q(&self) -> &ProbabilityMatrix {
        &self.q
    }

    pub fn truth(&self) -> &Answers {
        &self.truth
    }

    pub fn p_obs(&self) -> f64 {
        self.p_obs
    }
}

pub(crate) fn check_pobs(p_obs: f64) -> Result<()> {
    if p_obs > 0.0 && p_obs <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "p_obs must lie in (0, 1], got {p_obs}"
        )))
    }
}

/// Observed responses, entries in `{-1, 0, +1}` with `0` meaning "not asked".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseMatrix {
    n: usize,
    d: usize,
    entries: Vec<i8>,
}

impl ResponseMatrix {
    pub fn new(n: usize, d: usize, entries: Vec<i8>) -> Result<Self> {
        check_dims(n, d, entries.len())?;
        if let Some(k) = entries.iter().position(|v| !(-1..=1).contains(v)) {
            return Err(Error::InvalidResponse {
                row: k / d,
                col: k % d,
                value: entries[k],
            });
        }
        Ok(Self { n, d, entries })
    }

    pub fn zeros(n: usize, d: usize) -> Result<Self> {
        Self::new(n, d, vec![0; n * d])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.d + j]
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.entries[i * self.d..(i + 1) * self.d]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    /// Submatrix made of the given columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Result<Self> {
        if let Some(&bad) = columns.iter().find(|&&c| c >= self.d) {
            return Err(Error::Dimension(format!(
                "column {bad} out of range for d = {}",
                self.d
            )));
        }
        let entries = (0..self.n)
            .flat_map(|i| columns.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        Self::new(self.n, columns.len(), entries)
    }

    /// Matrix whose row `k` is row `order[k]` of `self`.
    pub fn reorder_rows(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n {
            return Err(Error::Mismatch {
                expected: format!("{} rows", self.n),
                actual: format!("{} rows", order.len()),
            });
        }
        let entries = order
            .iter()
            .flat_map(|&i| self.row(i).iter().copied())
            .collect();
        Self::new(self.n, self.d, entries)
    }
}

/// Draws `Y` from the observation model.
///
/// Each cell equals `x*_j` with probability `p_obs · Q*_ij`, `-x*_j` with
/// probability `p_obs · (1 - Q*_ij)` and `0` otherwise.
pub fn sample_responses(instance: &TruthInstance, seed: u64) -> ResponseMatrix {
    sample_cells(instance.q(), instance.truth(), instance.p_obs(), seed)
}

/// Same as [`sample_responses`] without the `TruthInstance` wrapper; accepts
/// `p_obs = 0`, which yields an all-zero matrix.
pub fn sample_responses_with(
    q: &ProbabilityMatrix,
    truth: &Answers,
    p_obs: f64,
    seed: u64,
) -> Result<ResponseMatrix> {
    if truth.len() != q.d() {
        return Err(Error::Mismatch {
            expected: format!("{} answers", q.d()),
            actual: format!("{} answers", truth.len()),
        });
    }
    if !(0.0..=1.0).contains(&p_obs) {
        return Err(Error::InvalidParameter(format!(
            "p_obs must lie in [0, 1], got {p_obs}"
        )));
    }
    Ok(sample_cells(q, truth, p_obs, seed))
}

fn sample_cells(q: &ProbabilityMatrix, truth: &Answers, p_obs: f64, seed: u64) -> ResponseMatrix {
    let mut rng = rng::generator(seed, stream::RESPONSES);
    let (n, d) = (q.n(), q.d());
    let mut entries = Vec::with_capacity(n * d);
    for i in 0..n {
        for (j, &x) in truth.iter().enumerate() {
            // One uniform per cell: [0, p·Q) correct, [p·Q, p) wrong, [p, 1) unasked.
            let u: f64 = rng.gen();
            let v = if u >= p_obs {
                0
            } else if u < p_obs * q.get(i, j) {
                x
            } else {
                -x
            };
            entries.push(v);
        }
    }
    ResponseMatrix { n, d, entries }
}

/// Fraction of observed cells.
pub fn estimate_pobs(y: &ResponseMatrix) -> f64 {
    let observed = y.entries().iter().filter(|&&v| v != 0).count();
    observed as f64 / (y.n() * y.d()) as f64
}

/// Membership of a probability matrix in the nested model classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelClassReport {
    pub in_ds: bool,
    pub in_int: bool,
    pub in_perm: bool,
    pub tolerance: f64,
}

/// Tests membership in the Dawid-Skene, intermediate and permutation classes.
///
/// All three classes require entries in `[1/2, 1]` (within `tol`).
/// * permutation: after sorting rows by descending row sum and columns by
///   descending column sum (stable), rows and columns are non-increasing.
/// * intermediate: `Q - 1/2` is a nonnegative rank-one matrix `r cᵀ` with
///   `r ∈ [0, 1/2]ⁿ`, `c ∈ [0, 1]ᵈ`. The factorization is anchored at the
///   largest entry, which is equivalent to all 2x2 minors through that
///   entry vanishing.
/// * Dawid-Skene: all columns are equal.
pub fn classify_matrix(q: &ProbabilityMatrix, tol: f64) -> Result<ModelClassReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tol must be positive, got {tol}"
        )));
    }
    if q.n() == 0 || q.d() == 0 {
        return Err(Error::Dimension("empty probability matrix".into()));
    }
    let in_range = q.entries().iter().all(|&v| v >= 0.5 - tol);
    let in_perm = in_range && is_sorted_bimonotone(q, tol);
    let in_int = in_perm && is_rank_one_centered(q, tol);
    let in_ds = in_int && columns_equal(q, tol);
    Ok(ModelClassReport {
        in_ds,
        in_int,
        in_perm,
        tolerance: tol,
    })
}

/// Indices sorted by descending key, ties by ascending index.
pub(crate) fn argsort_desc(keys: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&a, &b| keys[b].total_cmp(&keys[a]).then(a.cmp(&b)));
    idx
}

fn is_sorted_bimonotone(q: &ProbabilityMatrix, tol: f64) -> bool {
    let (n, d) = (q.n(), q.d());
    let row_sums: Vec<f64> = (0..n).map(|i| q.row(i).iter().sum()).collect();
    let col_sums: Vec<f64> = (0..d).map(|j| (0..n).map(|i| q.get(i, j)).sum()).collect();
    let rows = argsort_desc(&row_sums);
    let cols = argsort_desc(&col_sums);
    let at = |a: usize, b: usize| q.get(rows[a], cols[b]);
    for a in 0..n {
        for b in 0..d {
            if b + 1 < d && at(a, b + 1) > at(a, b) + tol {
                return false;
            }
            if a + 1 < n && at(a + 1, b) > at(a, b) + tol {
                return false;
            }
        }
    }
    true
}

fn is_rank_one_centered(q: &ProbabilityMatrix, tol: f64) -> bool {
    let (n, d) = (q.n(), q.d());
    let centered = |i: usize, j: usize| q.get(i, j) - 0.5;
    let (mut pi, mut pj, mut peak) = (0, 0, f64::NEG_INFINITY);
    for i in 0..n {
        for j in 0..d {
            if centered(i, j) > peak {
                (pi, pj, peak) = (i, j, centered(i, j));
            }
        }
    }
    if peak <= tol {
        // Q = 1/2 everywhere (within tol): r = 0.
        return true;
    }
    // r_i = A[i][pj] ∈ [0, 1/2], c_j = A[pi][j] / A[pi][pj] ∈ [0, 1].
    let r: Vec<f64> = (0..n).map(|i| centered(i, pj).max(0.0)).collect();
    let c: Vec<f64> = (0..d)
        .map(|j| (centered(pi, j) / peak).clamp(0.0, 1.0))
        .collect();
    (0..n).all(|i| (0..d).all(|j| (centered(i, j) - r[i] * c[j]).abs() <= tol))
}

fn columns_equal(q: &ProbabilityMatrix, tol: f64) -> bool {
    (0..q.n()).all(|i| {
        let row = q.row(i);
        row.iter().all(|&v| (v - row[0]).abs() <= tol)
    })
}
