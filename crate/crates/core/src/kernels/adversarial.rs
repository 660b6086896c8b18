//! Gumbel-softmax relaxation, discriminator targets and the generator and
//! discriminator losses.

use super::Matrix;
use crate::error::{Error, Result};

const LOG_EPS: f64 = 1e-10;
const PROB_CLAMP: f64 = 1e-12;

/// `softmax((ln(p + eps) + g) / tau)`.
pub fn gumbel_softmax(probs: &[f64], tau: f64, gumbel: &[f64]) -> Result<Vec<f64>> {
    if tau <= 0.0 || tau.is_nan() {
        return Err(Error::InvalidArgument(format!(
            "temperature must be positive, got {tau}"
        )));
    }
    if probs.len() != gumbel.len() {
        return Err(Error::Shape {
            left: (1, probs.len()),
            right: (1, gumbel.len()),
        });
    }
    let logits: Vec<f64> = probs
        .iter()
        .zip(gumbel)
        .map(|(p, g)| ((p + LOG_EPS).ln() + g) / tau)
        .collect();
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    Ok(exps.into_iter().map(|e| e / sum).collect())
}

/// Index of the largest entry, the lowest one on ties.
pub fn argmax(row: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in row.iter().enumerate() {
        if v > row[best] {
            best = i;
        }
    }
    best
}

/// 1 where the prediction's argmax equals the gold id, else 0.
pub fn disc_target(pred: &Matrix, gold: &[usize]) -> Result<Vec<f64>> {
    if pred.rows() != gold.len() {
        return Err(Error::Shape {
            left: pred.shape(),
            right: (gold.len(), pred.cols()),
        });
    }
    Ok(gold
        .iter()
        .enumerate()
        .map(|(i, &g)| if argmax(pred.row(i)) == g { 1.0 } else { 0.0 })
        .collect())
}

/// Mean binary cross-entropy of scores against targets.
pub fn binary_cross_entropy(scores: &[f64], targets: &[f64]) -> Result<f64> {
    if scores.len() != targets.len() {
        return Err(Error::Shape {
            left: (scores.len(), 1),
            right: (targets.len(), 1),
        });
    }
    if let Some(bad) = scores.iter().find(|s| !(0.0..=1.0).contains(*s)) {
        return Err(Error::InvalidArgument(format!("score {bad} outside [0, 1]")));
    }
    if scores.is_empty() {
        return Ok(0.0);
    }
    let sum: f64 = scores
        .iter()
        .zip(targets)
        .map(|(&p, &y)| {
            let p = p.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
            -(y * p.ln() + (1.0 - y) * (1.0 - p).ln())
        })
        .sum();
    Ok(sum / scores.len() as f64)
}

/// Mean categorical cross-entropy of probability rows against gold ids.
pub fn categorical_cross_entropy(pred: &Matrix, gold: &[usize]) -> Result<f64> {
    if pred.rows() != gold.len() {
        return Err(Error::Shape {
            left: pred.shape(),
            right: (gold.len(), pred.cols()),
        });
    }
    if let Some(&g) = gold.iter().find(|&&g| g >= pred.cols()) {
        return Err(Error::InvalidArgument(format!(
            "gold id {g} outside [0, {})",
            pred.cols()
        )));
    }
    if gold.is_empty() {
        return Ok(0.0);
    }
    let sum: f64 = gold
        .iter()
        .enumerate()
        .map(|(i, &g)| -pred.get(i, g).max(PROB_CLAMP).ln())
        .sum();
    Ok(sum / gold.len() as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdversarialBatch {
    /// Generator output, one distribution per token.
    pub pred: Matrix,
    pub gold: Vec<usize>,
    /// Relaxed one-hot gold rows fed to the discriminator as real input.
    pub gold_relaxed: Matrix,
    pub d_real: Vec<f64>,
    pub d_fake: Vec<f64>,
    pub lambda: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdversarialLosses {
    pub generator: f64,
    pub discriminator: f64,
    pub adversarial: f64,
    pub tagging: f64,
    pub disc_real: f64,
    pub disc_generated: f64,
}

fn check_distributions(m: &Matrix, what: &str) -> Result<()> {
    for r in 0..m.rows() {
        let sum: f64 = m.row(r).iter().sum();
        if (sum - 1.0).abs() > 1e-9 || m.row(r).iter().any(|p| *p < 0.0) {
            return Err(Error::InvalidArgument(format!("{what} row {r} is not a distribution")));
        }
    }
    Ok(())
}

pub fn adversarial_losses(batch: &AdversarialBatch) -> Result<AdversarialLosses> {
    check_distributions(&batch.pred, "prediction")?;
    check_distributions(&batch.gold_relaxed, "relaxed gold")?;
    batch.pred.check_shape(&batch.gold_relaxed)?;
    if batch.lambda < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "lambda must be non-negative, got {}",
            batch.lambda
        )));
    }
    let n = batch.gold.len();
    let ones = vec![1.0; n];
    let s = disc_target(&batch.pred, &batch.gold)?;
    let tagging = categorical_cross_entropy(&batch.pred, &batch.gold)?;
    let disc_real = binary_cross_entropy(&batch.d_real, &ones)?;
    let disc_generated = binary_cross_entropy(&batch.d_fake, &s)?;
    let adversarial = binary_cross_entropy(&batch.d_fake, &ones)?;
    Ok(AdversarialLosses {
        generator: tagging + batch.lambda * adversarial,
        discriminator: disc_real + disc_generated,
        adversarial,
        tagging,
        disc_real,
        disc_generated,
    })
}
