//! Seeded samplers for the Hua-Pickrell, Laguerre and inverse-Laguerre eigenvalue laws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;

use crate::error::{Error, Result};
use crate::specfun::symmetric_tridiagonal_eigenvalues;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum EnsembleKind {
    HuaPickrell { s: f64, n: usize },
    Lue { nu: f64, n: usize },
    InverseLaguerre { nu: f64, n: usize },
}

impl EnsembleKind {
    pub fn size(&self) -> usize {
        match *self {
            EnsembleKind::HuaPickrell { n, .. } | EnsembleKind::Lue { n, .. } | EnsembleKind::InverseLaguerre { n, .. } => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McmcParams {
    /// initial random-walk scale in the angle coordinates
    pub proposal_scale: f64,
    /// sweeps discarded per chain; the scale is tuned during this phase
    pub burn_in: usize,
    /// sweeps between retained samples
    pub thinning: usize,
    pub chains: usize,
    /// largest acceptable Gelman-Rubin statistic
    pub max_r_hat: f64,
}

impl Default for McmcParams {
    fn default() -> Self {
        McmcParams {
            proposal_scale: 0.5,
            burn_in: 2000,
            thinning: 5,
            chains: 4,
            max_r_hat: 1.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub seed: u64,
    pub n_samples: usize,
    #[serde(default)]
    pub mcmc: McmcParams,
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        match self.kind {
            EnsembleKind::HuaPickrell { s, n } => {
                if !(s > -0.5) {
                    return Err(Error::domain("EnsembleSpec", format!("s = {s} must exceed -1/2")));
                }
                if n == 0 || n > 32 {
                    return Err(Error::domain("EnsembleSpec", format!("N = {n} outside 1..=32")));
                }
            }
            EnsembleKind::Lue { nu, n } | EnsembleKind::InverseLaguerre { nu, n } => {
                if !(nu > -1.0) {
                    return Err(Error::domain("EnsembleSpec", format!("nu = {nu} must exceed -1")));
                }
                if n == 0 {
                    return Err(Error::domain("EnsembleSpec", "N must be positive"));
                }
            }
        }
        if self.n_samples < 100 {
            return Err(Error::domain("EnsembleSpec", "n_samples must be at least 100"));
        }
        let m = &self.mcmc;
        if !(m.proposal_scale > 0.0) || m.thinning == 0 || m.chains < 2 || !(m.max_r_hat > 1.0) {
            return Err(Error::domain("EnsembleSpec", "invalid MCMC parameters"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McmcDiagnostics {
    pub acceptance: f64,
    pub proposal_scale: f64,
    pub r_hat: f64,
    pub chains: usize,
}

/// Eigenvalue samples, one row of length `n` per sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Batches {
    pub n: usize,
    pub data: Vec<f64>,
    /// number of consecutive blocks produced by separate Markov chains; 0 for exact samples
    pub chains: usize,
    pub diagnostics: Option<McmcDiagnostics>,
}

impl Batches {
    pub fn len(&self) -> usize {
        self.data.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.n)
    }

    /// One CSV row per sample, columns x1..xN.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let io = |e: csv::Error| Error::range("write_csv", e.to_string());
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record((1..=self.n).map(|j| format!("x{j}"))).map_err(io)?;
        for row in self.rows() {
            wr.write_record(row.iter().map(|v| format!("{v:.17e}"))).map_err(io)?;
        }
        wr.flush().map_err(|e| Error::range("write_csv", e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub n: usize,
}

const SHARD: usize = 4096;

fn shard_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs `fill(rng, count, out)` over fixed-size shards with per-shard streams, in order.
fn sharded<F>(seed: u64, n_samples: usize, width: usize, fill: F) -> Result<Vec<f64>>
where
    F: Fn(&mut ChaCha8Rng, usize, &mut Vec<f64>) -> Result<()> + Sync,
{
    let shards = n_samples.div_ceil(SHARD);
    let parts = (0..shards)
        .into_par_iter()
        .map(|i| {
            let count = SHARD.min(n_samples - i * SHARD);
            let mut out = Vec::with_capacity(count * width);
            fill(&mut shard_rng(seed, i as u64), count, &mut out)?;
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.concat())
}

fn lue_fill(nu: f64, n: usize, rng: &mut ChaCha8Rng, count: usize, out: &mut Vec<f64>) -> Result<()> {
    let gam = |shape: f64| Gamma::new(shape, 1.0).map_err(|e| Error::domain("sample_lue", e.to_string()));
    let diag_law = (0..n).map(|i| gam(nu + (n - i) as f64)).collect::<Result<Vec<_>>>()?;
    let off_law = (0..n.saturating_sub(1)).map(|i| gam((n - 1 - i) as f64)).collect::<Result<Vec<_>>>()?;
    let mut d2 = vec![0.0; n];
    let mut c2 = vec![0.0; n.saturating_sub(1)];
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    for _ in 0..count {
        for i in 0..n {
            d2[i] = diag_law[i].sample(rng);
        }
        for i in 0..n - 1 {
            c2[i] = off_law[i].sample(rng);
        }
        // T = B B^T with B lower bidiagonal: diag d_i, subdiag c_i
        for i in 0..n {
            diag[i] = d2[i] + if i > 0 { c2[i - 1] } else { 0.0 };
        }
        for i in 0..n - 1 {
            off[i] = (d2[i] * c2[i]).sqrt();
        }
        let ev = symmetric_tridiagonal_eigenvalues(&diag, &off)?;
        // rounding can push the smallest eigenvalue of a near-singular draw below 0
        out.extend(ev.into_iter().map(|x| x.max(f64::MIN_POSITIVE)));
    }
    Ok(())
}

/// Exact samples from the Laguerre ensemble Delta^2 prod x^nu e^{-x}, via the bidiagonal model.
pub fn sample_lue(nu: f64, n: usize, seed: u64, n_samples: usize) -> Result<Batches> {
    EnsembleSpec {
        kind: EnsembleKind::Lue { nu, n },
        seed,
        n_samples,
        mcmc: McmcParams::default(),
    }
    .validate()?;
    let data = sharded(seed, n_samples, n, |rng, count, out| lue_fill(nu, n, rng, count, out))?;
    Ok(Batches { n, data, chains: 0, diagnostics: None })
}

/// Samples of 2/x for x from the Laguerre ensemble.
pub fn sample_inverse_laguerre(nu: f64, n: usize, seed: u64, n_samples: usize) -> Result<Batches> {
    let mut b = sample_lue(nu, n, seed, n_samples)?;
    for v in b.data.iter_mut() {
        *v = 2.0 / *v;
    }
    Ok(b)
}

// ---------------------------------------------------------------------------
// Hua-Pickrell

/// ln target in angle coordinates x = tan(theta): sum_{i<j} ln sin^2(th_i - th_j) + 2s sum ln|cos th|.
fn log_target_component(th: &[f64], j: usize, v: f64, s: f64) -> f64 {
    let mut acc = 2.0 * s * v.cos().abs().ln();
    for (i, &u) in th.iter().enumerate() {
        if i != j {
            acc += 2.0 * (v - u).sin().abs().ln();
        }
    }
    acc
}

fn wrap(theta: f64) -> f64 {
    // the target is pi-periodic in every angle
    let mut t = (theta + FRAC_PI_2).rem_euclid(PI) - FRAC_PI_2;
    if t <= -FRAC_PI_2 {
        t += PI;
    }
    t
}

struct ChainOut {
    samples: Vec<f64>,
    stats: Vec<[f64; 2]>,
    accepted: usize,
    proposed: usize,
    scale: f64,
}

fn run_chain(s: f64, n: usize, count: usize, p: &McmcParams, rng: &mut ChaCha8Rng) -> ChainOut {
    let mut th: Vec<f64> = (0..n)
        .map(|j| -FRAC_PI_2 + PI * (j as f64 + 0.5) / n as f64 + 0.1 * (rng.random::<f64>() - 0.5) / n as f64)
        .collect();
    let mut scale = p.proposal_scale.min(PI);
    let sweep = |th: &mut Vec<f64>, scale: f64, rng: &mut ChaCha8Rng| -> usize {
        let mut acc = 0;
        for j in 0..n {
            let z: f64 = rng.sample(StandardNormal);
            let prop = wrap(th[j] + scale * z);
            let d = log_target_component(th, j, prop, s) - log_target_component(th, j, th[j], s);
            if d >= 0.0 || rng.random::<f64>() < d.exp() {
                th[j] = prop;
                acc += 1;
            }
        }
        acc
    };
    // burn-in with scale adaptation every 50 sweeps
    let mut window = 0;
    for b in 0..p.burn_in {
        window += sweep(&mut th, scale, rng);
        if (b + 1) % 50 == 0 {
            let rate = window as f64 / (50 * n) as f64;
            scale = (scale * (rate / 0.3).clamp(0.5, 2.0)).clamp(1e-4, PI);
            window = 0;
        }
    }
    let mut samples = Vec::with_capacity(count * n);
    let mut stats = Vec::with_capacity(count);
    let mut accepted = 0;
    for _ in 0..count {
        for _ in 0..p.thinning {
            accepted += sweep(&mut th, scale, rng);
        }
        samples.extend(th.iter().map(|t| t.tan()));
        let nf = n as f64;
        stats.push([
            th.iter().sum::<f64>() / nf,
            th.iter().map(|t| (2.0 * t).cos()).sum::<f64>() / nf,
        ]);
    }
    ChainOut {
        samples,
        stats,
        accepted,
        proposed: count * p.thinning * n,
        scale,
    }
}

/// Gelman-Rubin potential scale reduction for equal-length chains.
pub fn gelman_rubin(chains: &[Vec<f64>]) -> f64 {
    let m = chains.len() as f64;
    let len = chains.iter().map(Vec::len).min().unwrap_or(0);
    if len < 2 || chains.len() < 2 {
        return f64::NAN;
    }
    let l = len as f64;
    let means: Vec<f64> = chains.iter().map(|c| c[..len].iter().sum::<f64>() / l).collect();
    let grand = means.iter().sum::<f64>() / m;
    let b = l / (m - 1.0) * means.iter().map(|x| (x - grand).powi(2)).sum::<f64>();
    let w = chains
        .iter()
        .zip(&means)
        .map(|(c, mu)| c[..len].iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (l - 1.0))
        .sum::<f64>()
        / m;
    if w == 0.0 {
        return 1.0;
    }
    (((l - 1.0) / l * w + b / l) / w).sqrt()
}

/// Samples from Delta(x)^2 prod (1+x_j^2)^{-s-N}: exact for N = 1, random-walk Metropolis otherwise.
pub fn sample_hua_pickrell(spec: &EnsembleSpec) -> Result<Batches> {
    spec.validate()?;
    let EnsembleKind::HuaPickrell { s, n } = spec.kind else {
        return Err(Error::domain("sample_hua_pickrell", "spec is not a Hua-Pickrell ensemble"));
    };
    if n == 1 {
        // sin^2(theta) ~ Beta(1/2, s + 1/2)
        let beta = Beta::new(0.5, s + 0.5).map_err(|e| Error::domain("sample_hua_pickrell", e.to_string()))?;
        let data = sharded(spec.seed, spec.n_samples, 1, |rng, count, out| {
            for _ in 0..count {
                let u: f64 = beta.sample(rng);
                let x = (u / (1.0 - u)).sqrt();
                out.push(if rng.random::<bool>() { x } else { -x });
            }
            Ok(())
        })?;
        return Ok(Batches { n, data, chains: 0, diagnostics: None });
    }
    let p = spec.mcmc;
    let per = spec.n_samples.div_ceil(p.chains);
    let outs: Vec<ChainOut> = (0..p.chains)
        .into_par_iter()
        .map(|c| run_chain(s, n, per, &p, &mut shard_rng(spec.seed, c as u64)))
        .collect();
    let acceptance = outs.iter().map(|o| o.accepted).sum::<usize>() as f64 / outs.iter().map(|o| o.proposed).sum::<usize>() as f64;
    let r_hat = (0..2)
        .map(|k| gelman_rubin(&outs.iter().map(|o| o.stats.iter().map(|v| v[k]).collect()).collect::<Vec<_>>()))
        .fold(1.0, f64::max);
    let diagnostics = McmcDiagnostics {
        acceptance,
        proposal_scale: outs.iter().map(|o| o.scale).sum::<f64>() / p.chains as f64,
        r_hat,
        chains: p.chains,
    };
    if !(0.1..=0.6).contains(&acceptance) {
        return Err(Error::Diagnostics {
            op: "sample_hua_pickrell",
            msg: format!("acceptance rate {acceptance:.3} outside [0.1, 0.6] after tuning"),
        });
    }
    if !(r_hat < p.max_r_hat) {
        return Err(Error::Diagnostics {
            op: "sample_hua_pickrell",
            msg: format!("Gelman-Rubin statistic {r_hat:.4} not below {}", p.max_r_hat),
        });
    }
    let data = outs.into_iter().flat_map(|o| o.samples).collect();
    Ok(Batches { n, data, chains: p.chains, diagnostics: Some(diagnostics) })
}

/// Dispatches on the ensemble kind.
pub fn sample(spec: &EnsembleSpec) -> Result<Batches> {
    spec.validate()?;
    match spec.kind {
        EnsembleKind::HuaPickrell { .. } => sample_hua_pickrell(spec),
        EnsembleKind::Lue { nu, n } => sample_lue(nu, n, spec.seed, spec.n_samples),
        EnsembleKind::InverseLaguerre { nu, n } => sample_inverse_laguerre(nu, n, spec.seed, spec.n_samples),
    }
}

// ---------------------------------------------------------------------------
// estimators

/// trace / N of one sample.
pub fn trace_statistic(row: &[f64]) -> f64 {
    row.iter().sum::<f64>() / row.len() as f64
}

/// Mean of f over samples. Chains are split into batches whose means give the
/// standard error; exact samples use the plain sample deviation.
pub fn estimate_mean<F: Fn(&[f64]) -> f64>(b: &Batches, f: F) -> Estimate {
    let vals: Vec<f64> = b.rows().map(f).collect();
    let n = vals.len();
    let mean = vals.iter().sum::<f64>() / n as f64;
    let stderr = if b.chains == 0 {
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0).max(1.0);
        (var / n as f64).sqrt()
    } else {
        // 25 batches per chain
        let per = n / b.chains;
        let bsz = (per / 25).max(1);
        let means: Vec<f64> = (0..b.chains)
            .flat_map(|c| {
                let chain = &vals[c * per..(c + 1) * per];
                chain.chunks_exact(bsz).map(|ch| ch.iter().sum::<f64>() / bsz as f64).collect::<Vec<_>>()
            })
            .collect();
        let k = means.len() as f64;
        let mm = means.iter().sum::<f64>() / k;
        let var = means.iter().map(|v| (v - mm).powi(2)).sum::<f64>() / (k - 1.0).max(1.0);
        (var / k).sqrt()
    };
    Estimate { value: mean, stderr, n }
}

/// Mean of cos(t S / 2) with S = trace / N.
pub fn empirical_charfn(b: &Batches, t: f64) -> Estimate {
    estimate_mean(b, |r| (0.5 * t * trace_statistic(r)).cos())
}

/// Mean of sin(t S / 2), which vanishes for a symmetric law.
pub fn empirical_charfn_imag(b: &Batches, t: f64) -> Estimate {
    estimate_mean(b, |r| (0.5 * t * trace_statistic(r)).sin())
}

/// Mean of exp(-t S / 2) with S = trace / N. For inverse-Laguerre samples this is psi_N(t).
pub fn empirical_laplace(b: &Batches, t: f64) -> Estimate {
    estimate_mean(b, |r| (-0.5 * t * trace_statistic(r)).exp())
}

/// Mean of |S|^{2h}; the flag is raised when the estimator has infinite variance (2h >= s + 0.4 guard).
pub fn empirical_abs_moment(b: &Batches, h: f64, s: f64) -> (Estimate, bool) {
    let e = estimate_mean(b, |r| trace_statistic(r).abs().powf(2.0 * h));
    (e, 2.0 * h >= s + 0.4)
}

/// Kolmogorov-Smirnov distance between the sample and a continuous CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic 1% critical value of the one-sample KS statistic.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.627_6 / (n as f64).sqrt()
}
