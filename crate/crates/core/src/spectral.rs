//! Worker ordering from the top eigenvector of `Y Yᵀ`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{argsort_desc, ResponseMatrix};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 1000;

/// Rows above this count use the parallel Gram build and matrix-vector product.
const PARALLEL_ROWS: usize = 256;

/// A permutation of workers, best first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkerOrdering {
    order: Vec<usize>,
}

impl WorkerOrdering {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &w in &order {
            if w >= order.len() || std::mem::replace(&mut seen[w], true) {
                return Err(Error::InvalidParameter(format!(
                    "{order:?} is not a permutation of 0..{}",
                    order.len()
                )));
            }
        }
        Ok(Self { order })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            order: (0..n).collect(),
        }
    }

    /// Workers sorted by descending score, ties by ascending index.
    pub fn by_descending(scores: &[f64]) -> Self {
        Self {
            order: argsort_desc(scores),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Worker at rank `k` (rank 0 is the best worker).
    pub fn worker(&self, k: usize) -> usize {
        self.order[k]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopEigenvector {
    /// Unit vector, sign resolved so positive entries carry at least half
    /// of the squared mass.
    pub vector: Vec<f64>,
    /// Rayleigh quotient `uᵀ Y Yᵀ u`.
    pub eigenvalue: f64,
    pub iterations: usize,
    /// `Y` was identically zero and the vector is the fixed fallback.
    pub degenerate: bool,
}

/// `G = Y Yᵀ`, computed with exact integer sums.
pub fn gram(y: &ResponseMatrix) -> Vec<f64> {
    let n = y.n();
    let upper = |a: usize| -> Vec<i64> {
        let ra = y.row(a);
        (a..n)
            .map(|b| {
                ra.iter()
                    .zip(y.row(b))
                    .map(|(&p, &q)| (p as i32) * (q as i32))
                    .sum::<i32>() as i64
            })
            .collect()
    };
    let rows: Vec<Vec<i64>> = if n >= PARALLEL_ROWS {
        (0..n).into_par_iter().map(upper).collect()
    } else {
        (0..n).map(upper).collect()
    };
    let mut g = vec![0.0; n * n];
    for (a, row) in rows.iter().enumerate() {
        for (off, &v) in row.iter().enumerate() {
            let b = a + off;
            g[a * n + b] = v as f64;
            g[b * n + a] = v as f64;
        }
    }
    g
}

fn matvec(g: &[f64], v: &[f64], out: &mut [f64]) {
    let n = v.len();
    let row_dot = |(a, o): (usize, &mut f64)| {
        *o = g[a * n..(a + 1) * n]
            .iter()
            .zip(v)
            .map(|(x, y)| x * y)
            .sum();
    };
    if n >= PARALLEL_ROWS {
        out.par_iter_mut().enumerate().for_each(row_dot);
    } else {
        out.iter_mut().enumerate().for_each(row_dot);
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Flips `u` when its negative entries carry strictly more squared mass.
pub fn resolve_sign(u: &mut [f64]) {
    let (pos, neg) = u.iter().fold((0.0, 0.0), |(p, q), &x| {
        if x > 0.0 {
            (p + x * x, q)
        } else if x < 0.0 {
            (p, q + x * x)
        } else {
            (p, q)
        }
    });
    if neg > pos {
        u.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Top eigenvector of `Y Yᵀ` by power iteration on the Gram matrix.
///
/// Starts from `(1, …, 1)/√n`. Stops once successive iterates differ by at
/// most `tol` and the eigen-residual `‖G u - λ u‖` is at most
/// `tol · max(λ, 1)`. When `Y = 0` the start vector is returned with
/// `degenerate` set.
pub fn top_eigenvector(y: &ResponseMatrix, tol: f64, max_iter: usize) -> Result<TopEigenvector> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tol must be positive, got {tol}"
        )));
    }
    let n = y.n();
    let g = gram(y);
    let start = vec![1.0 / (n as f64).sqrt(); n];
    if g.iter().all(|&v| v == 0.0) {
        return Ok(TopEigenvector {
            vector: start,
            eigenvalue: 0.0,
            iterations: 0,
            degenerate: true,
        });
    }

    let mut v = start;
    let mut w = vec![0.0; n];
    matvec(&g, &v, &mut w);
    if norm(&w) == 0.0 {
        // Start vector is orthogonal to the range of G; restart from the
        // column with the largest diagonal, which lies in the range.
        let a = (0..n)
            .max_by(|&a, &b| g[a * n + a].total_cmp(&g[b * n + b]).then(b.cmp(&a)))
            .unwrap_or(0);
        let col = &g[a * n..(a + 1) * n];
        let c = norm(col);
        v = col.iter().map(|x| x / c).collect();
        matvec(&g, &v, &mut w);
    }

    let mut last_change = f64::INFINITY;
    for iter in 1..=max_iter {
        // w = G v on entry.
        let wn = norm(&w);
        let next: Vec<f64> = w.iter().map(|x| x / wn).collect();
        last_change = next
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        v = next;
        matvec(&g, &v, &mut w);
        if last_change <= tol {
            let lambda: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
            let residual = w
                .iter()
                .zip(&v)
                .map(|(gw, u)| (gw - lambda * u).powi(2))
                .sum::<f64>()
                .sqrt();
            if residual <= tol * lambda.max(1.0) {
                resolve_sign(&mut v);
                return Ok(TopEigenvector {
                    vector: v,
                    eigenvalue: lambda,
                    iterations: iter,
                    degenerate: false,
                });
            }
        }
    }
    resolve_sign(&mut v);
    Err(Error::EigenNotConverged {
        iterations: max_iter,
        last_change,
        last_vector: v,
    })
}

/// Workers sorted by `u` descending, ties by ascending index.
pub fn ordering_from_vector(u: &[f64]) -> WorkerOrdering {
    WorkerOrdering::by_descending(u)
}
