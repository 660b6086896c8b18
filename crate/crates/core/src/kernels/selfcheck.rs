//! Invariant suite for the kernels, reporting a measured residual per check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Gumbel;

use super::adversarial::{adversarial_losses, argmax, disc_target, gumbel_softmax, AdversarialBatch};
use super::bits::{bit2tag, tag2bit};
use super::diffusion::{ddim_step, denoise_loop, forward_latent, mse_noise_loss};
use super::schedule::{self, NoiseSchedule};
use super::Matrix;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct SelfCheckConfig {
    pub steps: usize,
    pub skip: usize,
    pub beta_start: f64,
    pub beta_end: f64,
    pub seed: u64,
    /// Monte-Carlo draws per timestep for the forward-process statistics.
    pub samples: usize,
    /// Planted signals for the denoising check.
    pub instances: usize,
    /// Random rows for the discriminator-target and Gumbel checks.
    pub rows: usize,
    pub tau: f64,
}

impl Default for SelfCheckConfig {
    fn default() -> Self {
        SelfCheckConfig {
            steps: schedule::DEFAULT_STEPS,
            skip: schedule::DEFAULT_SKIP,
            beta_start: schedule::DEFAULT_BETA_START,
            beta_end: schedule::DEFAULT_BETA_END,
            seed: 0,
            samples: 100_000,
            instances: 1000,
            rows: 10_000,
            tau: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn within(name: &'static str, residual: f64, tolerance: f64) -> Self {
        Check {
            name,
            residual,
            tolerance,
            passed: residual <= tolerance,
        }
    }
}

fn random_distribution(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / sum).collect()
}

pub fn run(cfg: &SelfCheckConfig) -> Result<Vec<Check>> {
    let sched = NoiseSchedule::linear(cfg.steps, cfg.beta_start, cfg.beta_end)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let big_t = sched.steps();
    let mut checks = Vec::new();

    let rise = (1..=big_t)
        .map(|t| sched.alpha_bar(t) - sched.alpha_bar(t - 1))
        .fold(f64::NEG_INFINITY, f64::max);
    checks.push(Check {
        name: "alpha_bar_decreasing",
        residual: rise,
        tolerance: 0.0,
        passed: rise < 0.0 && sched.alpha_bar(big_t) > 0.0,
    });

    let product: f64 = sched.betas().iter().map(|b| 1.0 - b).product();
    checks.push(Check::within(
        "alpha_bar_product",
        (product - sched.alpha_bar(big_t)).abs(),
        1e-12,
    ));

    let (mut mean_res, mut var_res) = (0.0f64, 0.0f64);
    let mut ts = vec![1, big_t.div_ceil(2), big_t];
    ts.dedup();
    for t in ts {
        let x0 = Matrix::new(cfg.samples, 1, vec![1.0; cfg.samples])?;
        let e = Matrix::gaussian(cfg.samples, 1, &mut rng);
        let x = forward_latent(&x0, t, &e, &sched)?;
        let n = cfg.samples as f64;
        let mean = x.as_slice().iter().sum::<f64>() / n;
        let var = x.as_slice().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let ab = sched.alpha_bar(t);
        let sigma2 = 1.0 - ab;
        mean_res = mean_res.max((mean - ab.sqrt()).abs() / (sigma2 / n).sqrt());
        var_res = var_res.max((var / sigma2 - 1.0).abs());
    }
    checks.push(Check::within("forward_mean_sigmas", mean_res, 3.0));
    checks.push(Check::within("forward_variance_rel", var_res, 0.02));

    let mut inv = 0.0f64;
    for _ in 0..100 {
        let (n, m) = (rng.gen_range(1..=16), rng.gen_range(1..=8));
        let t = rng.gen_range(1..=big_t);
        let x0 = Matrix::gaussian(n, m, &mut rng);
        let e = Matrix::gaussian(n, m, &mut rng);
        let z = Matrix::gaussian(n, m, &mut rng);
        let back = ddim_step(&forward_latent(&x0, t, &e, &sched)?, t, 0, &e, &z, &sched)?;
        for (a, b) in back.as_slice().iter().zip(x0.as_slice()) {
            inv = inv.max((a - b).abs());
        }
    }
    checks.push(Check::within("ddim_step_inverse", inv, 1e-9));

    let expected_calls = big_t.div_ceil(cfg.skip.max(1));
    let mut errors = 0usize;
    for _ in 0..cfg.instances {
        let (n, m) = (rng.gen_range(1..=16), rng.gen_range(1..=8));
        let labels = 1usize << m;
        let ids: Vec<usize> = (0..n).map(|_| rng.gen_range(0..labels)).collect();
        let x0 = tag2bit(&ids, labels)?;
        let oracle = |x: &Matrix, t: usize| {
            let ab = sched.alpha_bar(t);
            x.combine(1.0 / (1.0 - ab).sqrt(), &x0, -(ab / (1.0 - ab)).sqrt())
                .expect("same shape")
        };
        let start = Matrix::gaussian(n, m, &mut rng);
        let out = denoise_loop(start, oracle, &sched, cfg.skip, || Matrix::zeros(n, m))?;
        if out.steps.len() != expected_calls {
            errors += 1;
        }
        errors += bit2tag(&out.x0, labels, 0)?
            .iter()
            .zip(&ids)
            .filter(|(a, b)| a != b)
            .count();
    }
    checks.push(Check::within("oracle_denoise_errors", errors as f64, 0.0));

    let mut bad = 0usize;
    for labels in 2..=1024usize {
        let ids: Vec<usize> = (0..labels).collect();
        if bit2tag(&tag2bit(&ids, labels)?, labels, 0)? != ids {
            bad += 1;
        }
        if !labels.is_power_of_two() && labels <= 64 {
            let m = super::bits::bit_width(labels);
            let fallback = labels - 1;
            for code in labels..(1 << m) {
                let signal = Matrix::from_fn(1, m, |_, c| if (code >> (m - 1 - c)) & 1 == 1 { 1.0 } else { -1.0 });
                if bit2tag(&signal, labels, fallback)? != [fallback] {
                    bad += 1;
                }
            }
        }
    }
    checks.push(Check::within("bit_tag_inverse_failures", bad as f64, 0.0));

    let mut mse_res = 0.0f64;
    for _ in 0..100 {
        let (n, m) = (rng.gen_range(1..=16), rng.gen_range(1..=8));
        let e = Matrix::gaussian(n, m, &mut rng);
        let f = Matrix::gaussian(n, m, &mut rng);
        let mut naive = 0.0;
        for r in 0..n {
            for c in 0..m {
                naive += (e.get(r, c) - f.get(r, c)).powi(2);
            }
        }
        mse_res = mse_res.max((mse_noise_loss(&e, &f)? - naive / (n * m) as f64).abs());
    }
    checks.push(Check::within("mse_vs_naive", mse_res, 1e-12));

    let gumbel = Gumbel::new(0.0, 1.0).expect("valid Gumbel parameters");
    let (mut sum_res, mut argmax_bad, mut target_bad) = (0.0f64, 0usize, 0usize);
    for _ in 0..cfg.rows {
        let width = rng.gen_range(2..=32);
        let p = random_distribution(&mut rng, width);
        let g: Vec<f64> = (0..width).map(|_| rng.sample(gumbel)).collect();
        let relaxed = gumbel_softmax(&p, cfg.tau, &g)?;
        sum_res = sum_res.max((relaxed.iter().sum::<f64>() - 1.0).abs());
        if argmax(&gumbel_softmax(&p, cfg.tau, &vec![0.0; width])?) != argmax(&p) {
            argmax_bad += 1;
        }
        let gold = rng.gen_range(0..width);
        let mut best = 0;
        for (i, v) in p.iter().enumerate() {
            if *v > p[best] {
                best = i;
            }
        }
        let pred = Matrix::new(1, width, p)?;
        if disc_target(&pred, &[gold])?[0] != f64::from(u8::from(best == gold)) {
            target_bad += 1;
        }
    }
    checks.push(Check::within("gumbel_row_sum", sum_res, 1e-9));
    checks.push(Check::within("gumbel_argmax_changes", argmax_bad as f64, 0.0));
    checks.push(Check::within("disc_target_mismatches", target_bad as f64, 0.0));

    let (mut lambda_res, mut real_res, mut negative) = (0.0f64, 0.0f64, 0usize);
    for _ in 0..100 {
        let (n, width) = (rng.gen_range(1..=16), rng.gen_range(2..=16));
        let rows: Vec<Vec<f64>> = (0..n).map(|_| random_distribution(&mut rng, width)).collect();
        let relaxed: Vec<Vec<f64>> = (0..n).map(|_| random_distribution(&mut rng, width)).collect();
        let mut batch = AdversarialBatch {
            pred: Matrix::from_rows(&rows)?,
            gold: (0..n).map(|_| rng.gen_range(0..width)).collect(),
            gold_relaxed: Matrix::from_rows(&relaxed)?,
            d_real: (0..n).map(|_| rng.gen()).collect(),
            d_fake: (0..n).map(|_| rng.gen()).collect(),
            lambda: 0.0,
        };
        let base = adversarial_losses(&batch)?;
        lambda_res = lambda_res.max((base.generator - base.tagging).abs());
        for lambda in [1.0, 2.0] {
            batch.lambda = lambda;
            let l = adversarial_losses(&batch)?;
            lambda_res = lambda_res.max((l.generator - (base.tagging + lambda * l.adversarial)).abs());
            let all = [
                l.generator,
                l.discriminator,
                l.adversarial,
                l.tagging,
                l.disc_real,
                l.disc_generated,
            ];
            negative += all.iter().filter(|v| **v < 0.0).count();
        }
        batch.d_real = vec![1.0; n];
        real_res = real_res.max(adversarial_losses(&batch)?.disc_real);
    }
    checks.push(Check::within("generator_loss_affine", lambda_res, 1e-12));
    checks.push(Check::within("perfect_real_loss", real_res, 1e-11));
    checks.push(Check::within("negative_losses", negative as f64, 0.0));

    Ok(checks)
}
