//! Forward noising, the skip-step denoising update and its sampling loop.

use super::schedule::NoiseSchedule;
use super::Matrix;
use crate::error::{Error, Result};

fn check_step(t: usize, sched: &NoiseSchedule) -> Result<()> {
    if t > sched.steps() {
        return Err(Error::InvalidArgument(format!(
            "timestep {t} beyond schedule length {}",
            sched.steps()
        )));
    }
    Ok(())
}

/// `x_t = sqrt(ab_t) x0 + sqrt(1 - ab_t) e`.
pub fn forward_latent(x0: &Matrix, t: usize, e: &Matrix, sched: &NoiseSchedule) -> Result<Matrix> {
    check_step(t, sched)?;
    let ab = sched.alpha_bar(t);
    x0.combine(ab.sqrt(), e, (1.0 - ab).sqrt())
}

/// One update from step `t` down to `k`:
/// `sqrt(ab_k / ab_t) (x_t - sqrt(1 - ab_t) e_hat) + sqrt(1 - ab_k) z`.
pub fn ddim_step(
    x_t: &Matrix,
    t: usize,
    k: usize,
    e_hat: &Matrix,
    z: &Matrix,
    sched: &NoiseSchedule,
) -> Result<Matrix> {
    check_step(t, sched)?;
    if k >= t {
        return Err(Error::InvalidArgument(format!("target step {k} not below {t}")));
    }
    let (ab_t, ab_k) = (sched.alpha_bar(t), sched.alpha_bar(k));
    let scale = (ab_k / ab_t).sqrt();
    let clean = x_t.combine(scale, e_hat, -scale * (1.0 - ab_t).sqrt())?;
    clean.combine(1.0, z, (1.0 - ab_k).sqrt())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Denoised {
    pub x0: Matrix,
    /// Timesteps at which the predictor was called, in order.
    pub steps: Vec<usize>,
}

/// Runs the denoiser from `x_T` down to step 0 in strides of `skip`.
/// `predict(x_t, t)` estimates the noise; `z()` supplies the fresh noise of
/// each update.
pub fn denoise_loop(
    x_big_t: Matrix,
    mut predict: impl FnMut(&Matrix, usize) -> Matrix,
    sched: &NoiseSchedule,
    skip: usize,
    mut z: impl FnMut() -> Matrix,
) -> Result<Denoised> {
    if skip == 0 {
        return Err(Error::InvalidArgument("skip must be at least 1".into()));
    }
    let mut x = x_big_t;
    let mut t = sched.steps();
    let mut steps = Vec::new();
    while t > 0 {
        let e_hat = predict(&x, t);
        x.check_shape(&e_hat)?;
        let k = t.saturating_sub(skip);
        x = ddim_step(&x, t, k, &e_hat, &z(), sched)?;
        steps.push(t);
        t = k;
    }
    Ok(Denoised { x0: x, steps })
}

/// Mean over entries of the squared difference.
pub fn mse_noise_loss(e: &Matrix, e_hat: &Matrix) -> Result<f64> {
    e.check_shape(e_hat)?;
    let n = e.as_slice().len();
    if n == 0 {
        return Ok(0.0);
    }
    let sum: f64 = e
        .as_slice()
        .iter()
        .zip(e_hat.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sum / n as f64)
}
