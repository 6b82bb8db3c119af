//! Exhaustive least squares over the permutation-based class.
//!
//! For every answer vector `x` and every pair of row/column permutations
//! the inner problem is a Euclidean projection onto bimonotone matrices with
//! entries in `[1/2, 1]`, solved with Dykstra's algorithm. Exponential in
//! both dimensions, so sizes are capped.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::isotonic::pava_non_increasing;
use crate::model::{check_pobs, Answers, ProbabilityMatrix, ResponseMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionOptions {
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        Self {
            lo: 0.5,
            hi: 1.0,
            tol: 1e-8,
            max_sweeps: 10_000,
        }
    }
}

fn project_rows(m: &mut [f64], d: usize) {
    m.chunks_mut(d).for_each(pava_non_increasing);
}

fn project_columns(m: &mut [f64], n: usize, d: usize, col: &mut Vec<f64>) {
    for j in 0..d {
        col.clear();
        col.extend((0..n).map(|i| m[i * d + j]));
        pava_non_increasing(col);
        for (i, &v) in col.iter().enumerate() {
            m[i * d + j] = v;
        }
    }
}

/// Largest amount by which `m` breaks row/column monotonicity.
pub fn monotonicity_violation(m: &[f64], n: usize, d: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..d {
            let v = m[i * d + j];
            if j + 1 < d {
                worst = worst.max(m[i * d + j + 1] - v);
            }
            if i + 1 < n {
                worst = worst.max(m[(i + 1) * d + j] - v);
            }
        }
    }
    worst
}

/// Euclidean projection of the row-major `n x d` matrix `m` onto matrices
/// with non-increasing rows and columns and entries in `[lo, hi]`.
///
/// Dykstra's algorithm over three sets: row-monotone (PAVA per row),
/// column-monotone (PAVA per column) and the box. Stops once a full sweep
/// moves the iterate by at most `tol` in Frobenius norm and the iterate's
/// monotonicity violation is at most `tol`.
pub fn project_bimonotone(
    m: &[f64],
    n: usize,
    d: usize,
    opts: &ProjectionOptions,
) -> Result<Vec<f64>> {
    if n == 0 || d == 0 || m.len() != n * d {
        return Err(Error::Mismatch {
            expected: format!("{} entries for {n}x{d}", n * d),
            actual: format!("{} entries", m.len()),
        });
    }
    if opts.lo.is_nan() || opts.hi.is_nan() || opts.lo >= opts.hi {
        return Err(Error::InvalidParameter(format!(
            "lo ({}) must be below hi ({})",
            opts.lo, opts.hi
        )));
    }
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tol must be positive, got {}",
            opts.tol
        )));
    }

    let len = n * d;
    let mut x = m.to_vec();
    let mut corr = [vec![0.0; len], vec![0.0; len], vec![0.0; len]];
    let mut buf = vec![0.0; len];
    let mut prev = vec![0.0; len];
    let mut col = Vec::with_capacity(n);
    let mut last_change = f64::INFINITY;

    for _ in 0..opts.max_sweeps {
        prev.copy_from_slice(&x);
        for (set, p) in corr.iter_mut().enumerate() {
            for k in 0..len {
                buf[k] = x[k] + p[k];
            }
            match set {
                0 => project_rows(&mut buf, d),
                1 => project_columns(&mut buf, n, d, &mut col),
                _ => buf.iter_mut().for_each(|v| *v = v.clamp(opts.lo, opts.hi)),
            }
            for k in 0..len {
                p[k] = x[k] + p[k] - buf[k];
                x[k] = buf[k];
            }
        }
        last_change = x
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        if last_change <= opts.tol && monotonicity_violation(&x, n, d) <= opts.tol {
            return Ok(x);
        }
    }
    Err(Error::ProjectionNotConverged {
        sweeps: opts.max_sweeps,
        last_change,
    })
}

/// Enumeration guard for [`least_squares`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LsLimits {
    pub max_n: usize,
    pub max_d: usize,
}

impl Default for LsLimits {
    fn default() -> Self {
        Self { max_n: 5, max_d: 5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LsSolution {
    pub answers: Answers,
    pub q_hat: ProbabilityMatrix,
    /// `‖Y/p_obs - (2 Q̂ - 1 1ᵀ) diag(x̂)‖²_F`.
    pub objective: f64,
    /// Worker at each rank, best first.
    pub pi: Vec<usize>,
    /// Question at each rank, easiest first.
    pub sigma: Vec<usize>,
}

/// Costs within this gap are treated as ties and resolved lexicographically.
const TIE_EPS: f64 = 1e-7;

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..k).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..k)
            .rev()
            .find(|&j| cur[j] > cur[i - 1])
            .expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Answer vector number `mask` in lexicographic order (`-1` before `+1`).
fn answers_for_mask(mask: usize, d: usize) -> Vec<i8> {
    (0..d)
        .map(|j| if mask >> (d - 1 - j) & 1 == 1 { 1 } else { -1 })
        .collect()
}

struct Candidate {
    objective: f64,
    mask: usize,
    pi: usize,
    sigma: usize,
    q: Vec<f64>,
}

/// Least-squares estimate of `(x*, Q*)` by exhaustive enumeration of
/// answer vectors and permutation pairs.
///
/// Minimizes `‖Y/p_obs - (2Q - 1 1ᵀ) diag(x)‖²_F` over `x ∈ {-1, 1}^d` and
/// `Q` bimonotone under some `(π, σ)` with entries in `[1/2, 1]`. Near-ties
/// go to the lexicographically smallest `(x, π, σ)`.
pub fn least_squares(y: &ResponseMatrix, p_obs: f64, limits: LsLimits) -> Result<LsSolution> {
    check_pobs(p_obs)?;
    let (n, d) = (y.n(), y.d());
    if n > limits.max_n || d > limits.max_d {
        return Err(Error::SizeCapExceeded {
            n,
            d,
            max_n: limits.max_n,
            max_d: limits.max_d,
        });
    }
    let row_perms = permutations(n);
    let col_perms = permutations(d);
    let opts = ProjectionOptions::default();

    let best_for_mask = |mask: usize| -> Result<Candidate> {
        let x = answers_for_mask(mask, d);
        // Q-space target: M = (Y x / p_obs + 1) / 2, cost = 4 ‖M - Q‖².
        let target: Vec<f64> = (0..n * d)
            .map(|k| 0.5 * (y.entries()[k] as f64 * x[k % d] as f64 / p_obs) + 0.5)
            .collect();
        let mut best: Option<Candidate> = None;
        let mut permuted = vec![0.0; n * d];
        for (pi_idx, pi) in row_perms.iter().enumerate() {
            for (sigma_idx, sigma) in col_perms.iter().enumerate() {
                for a in 0..n {
                    for b in 0..d {
                        permuted[a * d + b] = target[pi[a] * d + sigma[b]];
                    }
                }
                let proj = project_bimonotone(&permuted, n, d, &opts)?;
                let objective = 4.0
                    * proj
                        .iter()
                        .zip(&permuted)
                        .map(|(p, t)| (p - t).powi(2))
                        .sum::<f64>();
                if best
                    .as_ref()
                    .is_none_or(|b| objective < b.objective - TIE_EPS)
                {
                    let mut q = vec![0.0; n * d];
                    for a in 0..n {
                        for b in 0..d {
                            q[pi[a] * d + sigma[b]] = proj[a * d + b];
                        }
                    }
                    best = Some(Candidate {
                        objective,
                        mask,
                        pi: pi_idx,
                        sigma: sigma_idx,
                        q,
                    });
                }
            }
        }
        Ok(best.expect("at least one permutation pair"))
    };

    let per_mask: Vec<Candidate> = (0..1usize << d)
        .into_par_iter()
        .map(best_for_mask)
        .collect::<Result<_>>()?;
    // Masks arrive in lexicographic order, so a strict improvement test keeps
    // the smallest (x, π, σ) among near-ties.
    let mut iter = per_mask.into_iter();
    let mut best = iter.next().expect("2^d >= 1 masks");
    for c in iter {
        if c.objective < best.objective - TIE_EPS {
            best = c;
        }
    }

    Ok(LsSolution {
        answers: Answers::new(answers_for_mask(best.mask, d))?,
        q_hat: ProbabilityMatrix::new(n, d, best.q)?,
        objective: best.objective,
        pi: row_perms[best.pi].clone(),
        sigma: col_perms[best.sigma].clone(),
    })
}
