//! Error metrics for answer vectors and probability-matrix estimates.

use crate::error::{Error, Result};
use crate::model::{validate_answers, ProbabilityMatrix};

/// A loss in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LossValue(f64);

impl LossValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<LossValue> for f64 {
    fn from(l: LossValue) -> f64 {
        l.0
    }
}

fn check_pair(xhat: &[i8], xstar: &[i8]) -> Result<()> {
    if xhat.len() != xstar.len() {
        return Err(Error::Mismatch {
            expected: format!("{} answers", xstar.len()),
            actual: format!("{} answers", xhat.len()),
        });
    }
    if xhat.is_empty() {
        return Err(Error::Dimension("answer vectors are empty".into()));
    }
    validate_answers(xhat)?;
    validate_answers(xstar)
}

/// Fraction of questions answered differently.
pub fn hamming(xhat: &[i8], xstar: &[i8]) -> Result<LossValue> {
    check_pair(xhat, xstar)?;
    let wrong = xhat.iter().zip(xstar).filter(|(a, b)| a != b).count();
    Ok(LossValue(wrong as f64 / xhat.len() as f64))
}

/// `(1/n) Σ_i (2 w_i - 1)²`.
pub fn collective_intelligence(abilities: &[f64]) -> Result<f64> {
    if abilities.is_empty() {
        return Err(Error::Dimension("ability vector is empty".into()));
    }
    if let Some(&w) = abilities.iter().find(|w| !(0.0..=1.0).contains(*w)) {
        return Err(Error::InvalidParameter(format!(
            "ability {w} outside [0, 1]"
        )));
    }
    let total: f64 = abilities.iter().map(|&w| (2.0 * w - 1.0).powi(2)).sum();
    Ok(total / abilities.len() as f64)
}

/// Hamming error in which question `j` is weighted by `(1/n) Σ_i (2 Q_ij - 1)²`.
pub fn qstar_loss(q: &ProbabilityMatrix, xhat: &[i8], xstar: &[i8]) -> Result<LossValue> {
    check_pair(xhat, xstar)?;
    if xhat.len() != q.d() {
        return Err(Error::Mismatch {
            expected: format!("{} answers", q.d()),
            actual: format!("{} answers", xhat.len()),
        });
    }
    let (n, d) = (q.n(), q.d());
    let mut total = 0.0;
    for j in (0..d).filter(|&j| xhat[j] != xstar[j]) {
        total += (0..n)
            .map(|i| (2.0 * q.get(i, j) - 1.0).powi(2))
            .sum::<f64>();
    }
    Ok(LossValue(total / (n * d) as f64))
}

/// Mean squared entrywise difference, `‖qhat - qstar‖²_F / (n d)`.
pub fn frobenius_error(qhat: &ProbabilityMatrix, qstar: &ProbabilityMatrix) -> Result<f64> {
    if (qhat.n(), qhat.d()) != (qstar.n(), qstar.d()) {
        return Err(Error::Mismatch {
            expected: format!("{}x{}", qstar.n(), qstar.d()),
            actual: format!("{}x{}", qhat.n(), qhat.d()),
        });
    }
    let sq: f64 = qhat
        .entries()
        .iter()
        .zip(qstar.entries())
        .map(|(a, b)| (a - b).powi(2))
        .sum();
    Ok(sq / (qhat.n() * qhat.d()) as f64)
}
