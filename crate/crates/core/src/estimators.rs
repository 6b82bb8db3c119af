//! Answer estimators: majority vote, WAN and OBI-WAN.

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{check_pobs, Answers, ProbabilityMatrix, ResponseMatrix};
use crate::rng::{self, stream};
use crate::spectral::{self, ordering_from_vector, WorkerOrdering};

/// `(ln(d n))^1.5`, the log factor shared by the window floor and threshold.
fn log_factor(n: usize, d: usize) -> f64 {
    ((d as f64) * (n as f64)).ln().powf(1.5)
}

/// Smallest admissible window, `⌈(ln(d n))^1.5 / p_obs⌉`, at least 1.
pub fn window_floor(n: usize, d: usize, p_obs: f64) -> usize {
    let raw = (log_factor(n, d) / p_obs).ceil();
    if raw >= usize::MAX as f64 {
        usize::MAX
    } else {
        (raw as usize).max(1)
    }
}

fn sign_or_plus(sum: i64) -> i8 {
    if sum >= 0 {
        1
    } else {
        -1
    }
}

/// Per-question sign of the column sum; zero sums give `+1`.
pub fn majority_vote(y: &ResponseMatrix) -> Answers {
    let mut sums = vec![0i64; y.d()];
    for i in 0..y.n() {
        for (s, &v) in sums.iter_mut().zip(y.row(i)) {
            *s += v as i64;
        }
    }
    Answers::from_signs_unchecked(sums.into_iter().map(sign_or_plus).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WanOutput {
    pub answers: Answers,
    /// Number of top-ranked workers aggregated.
    pub k_wan: usize,
    /// Window floor `L`; when `L > n` the search is skipped and `k_wan = n`.
    pub window_floor: usize,
}

/// Windowing and naive aggregation under a given worker ordering.
///
/// Picks the smallest `k ∈ {L, …, n}` maximizing the number of questions
/// whose top-`k` response sum satisfies `|S_j| ≥ √(k p_obs (ln(d n))^1.5)`,
/// then majority-votes the top `k` workers. Runs in `O(n d)`.
pub fn wan(y: &ResponseMatrix, ordering: &WorkerOrdering, p_obs: f64) -> Result<WanOutput> {
    check_pobs(p_obs)?;
    let (n, d) = (y.n(), y.d());
    if ordering.len() != n {
        return Err(Error::Mismatch {
            expected: format!("ordering of {n} workers"),
            actual: format!("ordering of {} workers", ordering.len()),
        });
    }
    let lf = log_factor(n, d);
    let floor = window_floor(n, d, p_obs);

    let mut sums = vec![0i64; d];
    let k_wan = if floor > n {
        n
    } else {
        let (mut best_k, mut best_count) = (floor, None);
        for k in 1..=n {
            for (s, &v) in sums.iter_mut().zip(y.row(ordering.worker(k - 1))) {
                *s += v as i64;
            }
            if k < floor {
                continue;
            }
            let threshold_sq = k as f64 * p_obs * lf;
            let count = sums
                .iter()
                .filter(|&&s| (s * s) as f64 >= threshold_sq)
                .count();
            if best_count.is_none_or(|b| count > b) {
                best_k = k;
                best_count = Some(count);
            }
        }
        sums.iter_mut().for_each(|s| *s = 0);
        best_k
    };

    for k in 0..k_wan {
        for (s, &v) in sums.iter_mut().zip(y.row(ordering.worker(k))) {
            *s += v as i64;
        }
    }
    Ok(WanOutput {
        answers: Answers::from_signs_unchecked(sums.into_iter().map(sign_or_plus).collect()),
        k_wan,
        window_floor: floor,
    })
}

/// Everything OBI-WAN computed on the way to its answers.
#[derive(Debug, Clone, PartialEq)]
pub struct ObiWanTrace {
    pub answers: Answers,
    /// Question indices of the two halves, ascending.
    pub halves: [Vec<usize>; 2],
    /// Worker ordering estimated from each half.
    pub orderings: [WorkerOrdering; 2],
    /// WAN output on half `ℓ`, computed with the ordering from the other half.
    pub wan: [WanOutput; 2],
    /// Whether power iteration converged on each half.
    pub converged: [bool; 2],
    /// Number of coin-flip rounds needed to get two nonempty halves.
    pub split_attempts: u64,
}

/// OBI-WAN with default eigen-solver settings.
pub fn obi_wan(y: &ResponseMatrix, p_obs: f64, seed: u64) -> Result<Answers> {
    obi_wan_trace(y, p_obs, seed).map(|t| t.answers)
}

/// Random question split by fair coin (redrawn if a side is empty).
pub fn split_questions(d: usize, seed: u64) -> Result<([Vec<usize>; 2], u64)> {
    if d < 2 {
        return Err(Error::Dimension(format!(
            "need at least 2 questions to split, got {d}"
        )));
    }
    for attempt in 0u64.. {
        let mut g = rng::generator(seed, stream::SPLIT + (attempt << 32));
        let mut halves: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for j in 0..d {
            halves[g.gen::<bool>() as usize].push(j);
        }
        if !halves[0].is_empty() && !halves[1].is_empty() {
            return Ok((halves, attempt + 1));
        }
    }
    unreachable!("split attempts exhausted")
}

pub fn obi_wan_trace(y: &ResponseMatrix, p_obs: f64, seed: u64) -> Result<ObiWanTrace> {
    check_pobs(p_obs)?;
    let (halves, split_attempts) = split_questions(y.d(), seed)?;
    let sub = [y.select_columns(&halves[0])?, y.select_columns(&halves[1])?];

    let mut converged = [true; 2];
    let mut order_half = |l: usize| -> Result<WorkerOrdering> {
        let u = match spectral::top_eigenvector(
            &sub[l],
            spectral::DEFAULT_TOL,
            spectral::DEFAULT_MAX_ITER,
        ) {
            Ok(top) => top.vector,
            // Weak-signal halves can have a tiny eigengap; the last iterate
            // still orders workers.
            Err(Error::EigenNotConverged { last_vector, .. }) => {
                converged[l] = false;
                last_vector
            }
            Err(e) => return Err(e),
        };
        Ok(ordering_from_vector(&u))
    };
    let orderings = [order_half(0)?, order_half(1)?];

    let wan0 = wan(&sub[0], &orderings[1], p_obs)?;
    let wan1 = wan(&sub[1], &orderings[0], p_obs)?;
    let mut answers = vec![0i8; y.d()];
    for (half, out) in halves.iter().zip([&wan0, &wan1]) {
        for (&j, &a) in half.iter().zip(out.answers.iter()) {
            answers[j] = a;
        }
    }
    Ok(ObiWanTrace {
        answers: Answers::from_signs_unchecked(answers),
        halves,
        orderings,
        wan: [wan0, wan1],
        converged,
        split_attempts,
    })
}

/// Questions whose centered prefix ability sums clear the windowing bound.
///
/// Question `j` is included when some `k ≥ (ln(d n))^1.5 / p_obs` has
/// `Σ_{i≤k} (Q_{π(i) j} - 1/2) ≥ (3/4) √((k / p_obs)(ln(d n))^1.5)`.
/// Empty when the window floor exceeds `n`.
pub fn easy_question_set(
    q: &ProbabilityMatrix,
    ordering: &WorkerOrdering,
    p_obs: f64,
) -> Result<Vec<usize>> {
    check_pobs(p_obs)?;
    let (n, d) = (q.n(), q.d());
    if ordering.len() != n {
        return Err(Error::Mismatch {
            expected: format!("ordering of {n} workers"),
            actual: format!("ordering of {} workers", ordering.len()),
        });
    }
    let lf = log_factor(n, d);
    let floor = window_floor(n, d, p_obs);
    if floor > n {
        return Ok(Vec::new());
    }
    let easy = (0..d)
        .filter(|&j| {
            let mut prefix = 0.0;
            (1..=n).any(|k| {
                prefix += q.get(ordering.worker(k - 1), j) - 0.5;
                k >= floor && prefix >= 0.75 * (k as f64 / p_obs * lf).sqrt()
            })
        })
        .collect();
    Ok(easy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ym(n: usize, d: usize, v: Vec<i8>) -> ResponseMatrix {
        ResponseMatrix::new(n, d, v).unwrap()
    }

    #[test]
    fn majority_examples() {
        // Columns: (+1,+1,-1) and (+1,-1,0).
        let y = ym(3, 2, vec![1, 1, 1, -1, -1, 0]);
        assert_eq!(majority_vote(&y).as_slice(), &[1, 1]);
        let y = ym(2, 1, vec![-1, -1]);
        assert_eq!(majority_vote(&y).as_slice(), &[-1]);
    }

    #[test]
    fn window_floor_values() {
        assert_eq!(window_floor(1, 1, 1.0), 1);
        assert_eq!(window_floor(1000, 1000, 1.0), 52);
        assert_eq!(window_floor(4, 4, 1.0), 5);
        assert_eq!(window_floor(1000, 1000, 0.5), 103);
    }

    #[test]
    fn wan_single_worker() {
        let out = wan(&ym(1, 1, vec![1]), &WorkerOrdering::identity(1), 1.0).unwrap();
        assert_eq!(out.k_wan, 1);
        assert_eq!(out.window_floor, 1);
        assert_eq!(out.answers.as_slice(), &[1]);
    }

    #[test]
    fn wan_falls_back_to_full_vote() {
        let y = ym(3, 2, vec![1, -1, 1, -1, -1, 1]);
        let out = wan(&y, &WorkerOrdering::identity(3), 0.5).unwrap();
        assert_eq!(out.window_floor, 5);
        assert_eq!(out.k_wan, 3);
        assert_eq!(out.answers, majority_vote(&y));
    }

    #[test]
    fn wan_rejects_bad_inputs() {
        let y = ym(2, 2, vec![1; 4]);
        assert!(wan(&y, &WorkerOrdering::identity(3), 1.0).is_err());
        assert!(wan(&y, &WorkerOrdering::identity(2), 0.0).is_err());
    }

    #[test]
    fn obi_wan_needs_two_questions() {
        assert!(obi_wan(&ym(2, 1, vec![1, 1]), 1.0, 0).is_err());
    }

    #[test]
    fn split_is_a_partition() {
        let (halves, _) = split_questions(50, 9).unwrap();
        let mut all: Vec<usize> = halves.concat();
        all.sort_unstable();
        assert_eq!(all, (0..50).collect::<Vec<_>>());
    }

    #[test]
    fn easy_set_examples() {
        let half = ProbabilityMatrix::new(20, 20, vec![0.5; 400]).unwrap();
        assert!(easy_question_set(&half, &WorkerOrdering::identity(20), 1.0)
            .unwrap()
            .is_empty());
        let small = ProbabilityMatrix::new(4, 4, vec![1.0; 16]).unwrap();
        assert!(easy_question_set(&small, &WorkerOrdering::identity(4), 1.0)
            .unwrap()
            .is_empty());
    }
}
