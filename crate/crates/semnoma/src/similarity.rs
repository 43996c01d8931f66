//! Generalized-logistic approximation of the semantic similarity curve.
//!
//! The similarity between a transmitted and a reconstructed message is a
//! sigmoid-shaped function of the received SNR. For a fixed number of
//! semantic symbols per word `K` it is approximated by
//!
//! ```text
//! eps(snr) = a_low + (a_high - a_low) / (1 + exp(-(growth * snr + shift)))
//! ```
//!
//! This module evaluates the curve, inverts it in closed form (logit), and
//! fits its four constants to empirical `(snr, eps)` samples by least
//! squares (Gauss-Newton with a deterministic start and a coarse grid
//! fallback).

use thiserror::Error;

/// Errors from similarity-curve operations.
#[derive(Debug, Error)]
pub enum SimilarityError {
    /// Requested similarity is at or outside the asymptotes and is not
    /// reachable at any SNR.
    #[error("similarity target {target} not in open interval ({a_low}, {a_high})")]
    TargetOutOfRange {
        target: f64,
        a_low: f64,
        a_high: f64,
    },
    /// Sample set cannot identify the curve.
    #[error("degenerate samples: {0}")]
    DegenerateSamples(String),
    /// Neither Gauss-Newton nor the grid fallback produced valid parameters.
    #[error("fit did not converge: {0}")]
    NoConvergence(String),
    /// Parameter set violates its invariants.
    #[error("invalid logistic parameters: {0}")]
    InvalidParams(String),
    /// Malformed sample CSV.
    #[error("sample file: {0}")]
    SampleParse(String),
}

/// The four constants of the generalized logistic for one `K`, plus `K`
/// itself (average semantic symbols per word).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticParams {
    /// Lower asymptote, similarity floor as SNR goes to zero/negative.
    pub a_low: f64,
    /// Upper asymptote, similarity ceiling at high SNR.
    pub a_high: f64,
    /// Slope coefficient per unit SNR; positive so similarity never
    /// decreases with SNR.
    pub growth: f64,
    /// Horizontal offset of the sigmoid midpoint.
    pub shift: f64,
    /// Average number of semantic symbols per word.
    pub k_symbols: f64,
}

impl LogisticParams {
    pub fn new(
        a_low: f64,
        a_high: f64,
        growth: f64,
        shift: f64,
        k_symbols: f64,
    ) -> Result<Self, SimilarityError> {
        let p = LogisticParams {
            a_low,
            a_high,
            growth,
            shift,
            k_symbols,
        };
        p.validate()?;
        Ok(p)
    }

    /// Fitted constants for DeepSC text transmission at K = 5 symbols/word.
    pub fn deepsc_k5() -> Self {
        LogisticParams {
            a_low: 0.37,
            a_high: 0.98,
            growth: 0.2525,
            shift: -0.7895,
            k_symbols: 5.0,
        }
    }

    pub fn validate(&self) -> Result<(), SimilarityError> {
        if !(self.a_low.is_finite() && self.a_high.is_finite()) || self.a_low < 0.0 {
            return Err(SimilarityError::InvalidParams(format!(
                "a_low must be finite and >= 0, got {}",
                self.a_low
            )));
        }
        if self.a_low >= self.a_high || self.a_high > 1.0 {
            return Err(SimilarityError::InvalidParams(format!(
                "need 0 <= a_low < a_high <= 1, got a_low={} a_high={}",
                self.a_low, self.a_high
            )));
        }
        if !(self.growth > 0.0) || !self.growth.is_finite() {
            return Err(SimilarityError::InvalidParams(format!(
                "growth must be positive and finite, got {}",
                self.growth
            )));
        }
        if !self.shift.is_finite() {
            return Err(SimilarityError::InvalidParams(
                "shift must be finite".into(),
            ));
        }
        if !(self.k_symbols >= 1.0) {
            return Err(SimilarityError::InvalidParams(format!(
                "k_symbols must be >= 1, got {}",
                self.k_symbols
            )));
        }
        Ok(())
    }
}

/// One empirical similarity measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilaritySample {
    /// Linear SNR ratio at which the similarity was measured.
    pub snr: f64,
    /// Measured similarity in `[0, 1]`.
    pub epsilon: f64,
}

/// Numerically stable standard logistic `1 / (1 + exp(-x))`.
fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Evaluate the similarity curve at a given SNR.
///
/// Total on valid parameters; the result lies in `[a_low, a_high]` and is
/// strictly increasing in `snr`.
pub fn eval_epsilon(params: &LogisticParams, snr: f64) -> f64 {
    params.a_low + (params.a_high - params.a_low) * sigmoid(params.growth * snr + params.shift)
}

/// Closed-form inverse: the SNR at which the curve reaches `target`.
///
/// Fails with [`SimilarityError::TargetOutOfRange`] when the target sits at
/// or beyond an asymptote, where no finite SNR reaches it.
pub fn invert_epsilon(params: &LogisticParams, target: f64) -> Result<f64, SimilarityError> {
    if !(target > params.a_low && target < params.a_high) {
        return Err(SimilarityError::TargetOutOfRange {
            target,
            a_low: params.a_low,
            a_high: params.a_high,
        });
    }
    let u = (target - params.a_low) / (params.a_high - params.a_low);
    let logit = (u / (1.0 - u)).ln();
    Ok((logit - params.shift) / params.growth)
}

/// Outcome of a least-squares fit.
#[derive(Debug, Clone, Copy)]
pub struct FitResult {
    pub params: LogisticParams,
    /// Mean squared residual of the fitted curve over the input samples.
    pub mse: f64,
    /// Gauss-Newton iterations spent (0 when the grid fallback won outright).
    pub iterations: usize,
}

const MIN_SAMPLES: usize = 8;
const GN_MAX_ITER: usize = 100;

/// Fit the four logistic constants to `(snr, eps)` samples by minimum mean
/// squared error.
///
/// Gauss-Newton from a deterministic start (asymptotes from the sample
/// extremes, slope/offset from a logit-linear regression), with step
/// halving; a coarse grid search over (growth, shift) takes over when
/// Gauss-Newton diverges or lands on invalid parameters.
pub fn fit_logistic(
    samples: &[SimilaritySample],
    k_symbols: f64,
) -> Result<FitResult, SimilarityError> {
    if samples.len() < MIN_SAMPLES {
        return Err(SimilarityError::DegenerateSamples(format!(
            "need at least {MIN_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    for s in samples {
        if !(s.snr >= 0.0) || !s.snr.is_finite() {
            return Err(SimilarityError::DegenerateSamples(format!(
                "sample snr must be finite and >= 0, got {}",
                s.snr
            )));
        }
        if !(0.0..=1.0).contains(&s.epsilon) {
            return Err(SimilarityError::DegenerateSamples(format!(
                "sample epsilon must be in [0, 1], got {}",
                s.epsilon
            )));
        }
    }
    let eps_min = samples
        .iter()
        .map(|s| s.epsilon)
        .fold(f64::INFINITY, f64::min);
    let eps_max = samples
        .iter()
        .map(|s| s.epsilon)
        .fold(f64::NEG_INFINITY, f64::max);
    if eps_max - eps_min < 1e-12 {
        return Err(SimilarityError::DegenerateSamples(
            "all epsilon values equal".into(),
        ));
    }
    let snr_max = samples
        .iter()
        .map(|s| s.snr)
        .fold(f64::NEG_INFINITY, f64::max);
    let snr_pos_min = samples
        .iter()
        .map(|s| s.snr)
        .filter(|&g| g > 0.0)
        .fold(f64::INFINITY, f64::min);
    if !(snr_max / snr_pos_min >= 10.0) {
        return Err(SimilarityError::DegenerateSamples(
            "samples must span at least one decade of SNR".into(),
        ));
    }

    // Deterministic start: asymptotes at the sample extremes, slope and
    // offset from a linear regression on the clamped logit of the data.
    let start = logit_linear_start(samples, eps_min, eps_max);
    let gn = gauss_newton(samples, start);

    let mut best: Option<[f64; 4]> = None;
    let mut iterations = 0;
    if let Some((theta, iters)) = gn {
        if param_vec_valid(&theta) {
            best = Some(theta);
            iterations = iters;
        }
    }
    if best.is_none() {
        // Coarse grid over (growth, shift); asymptotes solved linearly per
        // grid point, then one more Gauss-Newton polish from the winner.
        let seed = grid_search(samples);
        if let Some((theta, iters)) = gauss_newton(samples, seed) {
            if param_vec_valid(&theta) {
                best = Some(theta);
                iterations = iters;
            }
        }
        if best.is_none() && param_vec_valid(&seed) {
            best = Some(seed);
        }
    }

    let theta = best.ok_or_else(|| {
        SimilarityError::NoConvergence(
            "Gauss-Newton and grid fallback both failed to produce valid parameters".into(),
        )
    })?;
    let params = LogisticParams::new(theta[0], theta[1], theta[2], theta[3], k_symbols)
        .map_err(|e| SimilarityError::NoConvergence(format!("fit landed on {e}")))?;
    let mse = sse(samples, &theta) / samples.len() as f64;
    Ok(FitResult {
        params,
        mse,
        iterations,
    })
}

fn model(theta: &[f64; 4], snr: f64) -> f64 {
    theta[0] + (theta[1] - theta[0]) * sigmoid(theta[2] * snr + theta[3])
}

fn sse(samples: &[SimilaritySample], theta: &[f64; 4]) -> f64 {
    samples
        .iter()
        .map(|s| {
            let r = model(theta, s.snr) - s.epsilon;
            r * r
        })
        .sum()
}

fn param_vec_valid(theta: &[f64; 4]) -> bool {
    LogisticParams::new(theta[0], theta[1], theta[2], theta[3], 1.0).is_ok()
}

fn logit_linear_start(samples: &[SimilaritySample], eps_min: f64, eps_max: f64) -> [f64; 4] {
    let span = eps_max - eps_min;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    let n = samples.len() as f64;
    for s in samples {
        let u = ((s.epsilon - eps_min) / span).clamp(1e-6, 1.0 - 1e-6);
        let z = (u / (1.0 - u)).ln();
        sx += s.snr;
        sy += z;
        sxx += s.snr * s.snr;
        sxy += s.snr * z;
    }
    let denom = n * sxx - sx * sx;
    let (growth, shift) = if denom.abs() > 1e-12 {
        let slope = (n * sxy - sx * sy) / denom;
        let intercept = (sy - slope * sx) / n;
        (slope, intercept)
    } else {
        (1.0, 0.0)
    };
    [eps_min, eps_max, growth, shift]
}

/// Gauss-Newton with step halving. Returns the refined parameter vector and
/// iteration count, or `None` when the normal equations break down or the
/// search stalls without reaching a minimum.
fn gauss_newton(samples: &[SimilaritySample], start: [f64; 4]) -> Option<([f64; 4], usize)> {
    let mut theta = start;
    let mut current = sse(samples, &theta);
    if !current.is_finite() {
        return None;
    }
    for iter in 0..GN_MAX_ITER {
        // Normal equations J^T J delta = -J^T r for the 4-parameter model.
        let mut jtj = [[0.0f64; 4]; 4];
        let mut jtr = [0.0f64; 4];
        for s in samples {
            let x = theta[2] * s.snr + theta[3];
            let sig = sigmoid(x);
            let dsig = sig * (1.0 - sig);
            let amp = theta[1] - theta[0];
            let j = [1.0 - sig, sig, amp * dsig * s.snr, amp * dsig];
            let r = theta[0] + amp * sig - s.epsilon;
            for a in 0..4 {
                jtr[a] += j[a] * r;
                for b in 0..4 {
                    jtj[a][b] += j[a] * j[b];
                }
            }
        }
        let delta = solve4(jtj, [-jtr[0], -jtr[1], -jtr[2], -jtr[3]])?;

        // Step halving until the residual improves.
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let trial = [
                theta[0] + step * delta[0],
                theta[1] + step * delta[1],
                theta[2] + step * delta[2],
                theta[3] + step * delta[3],
            ];
            let trial_sse = sse(samples, &trial);
            if trial_sse.is_finite() && trial_sse <= current {
                accepted = Some((trial, trial_sse));
                break;
            }
            step *= 0.5;
        }
        let (next, next_sse) = accepted?;
        let improvement = current - next_sse;
        theta = next;
        current = next_sse;
        let step_norm = delta.iter().map(|d| (step * d).abs()).fold(0.0, f64::max);
        if improvement <= 1e-16 * current.max(1e-300) || step_norm <= 1e-13 {
            return Some((theta, iter + 1));
        }
    }
    Some((theta, GN_MAX_ITER))
}

/// Coarse deterministic search: for each (growth, shift) candidate the
/// asymptotes are the exact linear least-squares solution, so only two
/// dimensions are scanned.
fn grid_search(samples: &[SimilaritySample]) -> [f64; 4] {
    let mut best = [0.0, 1.0, 1.0, 0.0];
    let mut best_sse = f64::INFINITY;
    for gi in 0..60 {
        // growth log-spaced over [1e-3, 1e2]
        let growth = 1e-3 * (1e5f64).powf(gi as f64 / 59.0);
        for si in 0..81 {
            let shift = -20.0 + 40.0 * si as f64 / 80.0;
            let (mut s00, mut s01, mut s11, mut b0, mut b1) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for s in samples {
                let sig = sigmoid(growth * s.snr + shift);
                let w0 = 1.0 - sig;
                s00 += w0 * w0;
                s01 += w0 * sig;
                s11 += sig * sig;
                b0 += w0 * s.epsilon;
                b1 += sig * s.epsilon;
            }
            let det = s00 * s11 - s01 * s01;
            if det.abs() < 1e-12 {
                continue;
            }
            let a_low = (b0 * s11 - b1 * s01) / det;
            let a_high = (s00 * b1 - s01 * b0) / det;
            let theta = [a_low, a_high, growth, shift];
            let v = sse(samples, &theta);
            if v < best_sse {
                best_sse = v;
                best = theta;
            }
        }
    }
    best
}

/// Gaussian elimination with partial pivoting for the 4x4 normal equations.
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let pivot =
            (col..4).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let pivot_row = a[col];
        for row in col + 1..4 {
            let f = a[row][col] / pivot_row[col];
            for (dst, src) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *dst -= f * src;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0f64; 4];
    for col in (0..4).rev() {
        let mut acc = b[col];
        for k in col + 1..4 {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
        if !x[col].is_finite() {
            return None;
        }
    }
    Some(x)
}

/// Parse the similarity-sample CSV format: header `snr_linear,epsilon`,
/// one sample per row, `.` decimal separator.
pub fn parse_samples(text: &str) -> Result<Vec<SimilaritySample>, SimilarityError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "snr_linear,epsilon" => {}
        Some((_, header)) => {
            return Err(SimilarityError::SampleParse(format!(
                "expected header 'snr_linear,epsilon', got '{}'",
                header.trim()
            )))
        }
        None => return Err(SimilarityError::SampleParse("empty file".into())),
    }
    let mut samples = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let snr = fields
            .next()
            .and_then(|f| f.trim().parse::<f64>().ok())
            .ok_or_else(|| SimilarityError::SampleParse(format!("line {}: bad snr", idx + 1)))?;
        let epsilon = fields
            .next()
            .and_then(|f| f.trim().parse::<f64>().ok())
            .ok_or_else(|| {
                SimilarityError::SampleParse(format!("line {}: bad epsilon", idx + 1))
            })?;
        if fields.next().is_some() {
            return Err(SimilarityError::SampleParse(format!(
                "line {}: expected exactly two fields",
                idx + 1
            )));
        }
        if !(snr >= 0.0) {
            return Err(SimilarityError::SampleParse(format!(
                "line {}: snr must be >= 0",
                idx + 1
            )));
        }
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(SimilarityError::SampleParse(format!(
                "line {}: epsilon must be in [0, 1]",
                idx + 1
            )));
        }
        samples.push(SimilaritySample { snr, epsilon });
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Substream;
    use proptest::prelude::*;

    fn k5() -> LogisticParams {
        LogisticParams::deepsc_k5()
    }

    // Frozen from direct high-precision evaluation of the logistic.
    #[test]
    fn eval_at_known_points() {
        let p = k5();
        assert!((eval_epsilon(&p, 0.0) - 0.560488383908494).abs() < 1e-6);
        assert!((eval_epsilon(&p, 10.0) - 0.888569893421873).abs() < 1e-4);
        assert!((eval_epsilon(&p, 5.0) - 0.745817077652573).abs() < 1e-9);
    }

    #[test]
    fn eval_saturates_at_upper_asymptote() {
        let p = k5();
        assert!((eval_epsilon(&p, 1e9) - 0.98).abs() < 1e-9);
    }

    #[test]
    fn invert_known_threshold() {
        let p = k5();
        let g = invert_epsilon(&p, 0.9).unwrap();
        assert!((g - 10.615).abs() < 0.001, "got {g}");
        assert!((g - 10.615248997514).abs() < 1e-9);
    }

    #[test]
    fn invert_rejects_asymptotes() {
        let p = k5();
        assert!(matches!(
            invert_epsilon(&p, 0.98),
            Err(SimilarityError::TargetOutOfRange { .. })
        ));
        assert!(matches!(
            invert_epsilon(&p, 0.37),
            Err(SimilarityError::TargetOutOfRange { .. })
        ));
        assert!(matches!(
            invert_epsilon(&p, 1.2),
            Err(SimilarityError::TargetOutOfRange { .. })
        ));
    }

    #[test]
    fn invert_is_inverse_of_eval() {
        let p = k5();
        let g = invert_epsilon(&p, eval_epsilon(&p, 7.3)).unwrap();
        assert!((g - 7.3).abs() < 1e-6);
    }

    #[test]
    fn second_difference_changes_sign_once() {
        // Sigmoid shape: slope first increases then decreases. Inflection
        // for the K=5 constants sits at -shift/growth ~ 3.13.
        let p = k5();
        let h = 0.5;
        let values: Vec<f64> = (0..61).map(|j| eval_epsilon(&p, j as f64 * h)).collect();
        let mut sign_changes = 0;
        let mut prev_sign = 0i8;
        for w in values.windows(3) {
            let d2 = w[2] - 2.0 * w[1] + w[0];
            let sign = if d2 > 0.0 { 1 } else { -1 };
            if prev_sign != 0 && sign != prev_sign {
                sign_changes += 1;
            }
            prev_sign = sign;
        }
        assert_eq!(sign_changes, 1);
    }

    #[test]
    fn params_invariants_enforced() {
        assert!(LogisticParams::new(0.5, 0.4, 1.0, 0.0, 5.0).is_err());
        assert!(LogisticParams::new(0.3, 1.2, 1.0, 0.0, 5.0).is_err());
        assert!(LogisticParams::new(0.3, 0.9, -1.0, 0.0, 5.0).is_err());
        assert!(LogisticParams::new(0.3, 0.9, 1.0, 0.0, 0.5).is_err());
        assert!(LogisticParams::new(0.3, 0.9, 1.0, 0.0, 5.0).is_ok());
    }

    fn grid_samples(params: &LogisticParams, n: usize, snr_max: f64) -> Vec<SimilaritySample> {
        (0..n)
            .map(|i| {
                let snr = snr_max * i as f64 / (n - 1) as f64;
                SimilaritySample {
                    snr,
                    epsilon: eval_epsilon(params, snr),
                }
            })
            .collect()
    }

    #[test]
    fn fit_recovers_noiseless_parameters() {
        let truth = k5();
        let samples = grid_samples(&truth, 30, 29.0);
        let fit = fit_logistic(&samples, 5.0).unwrap();
        assert!(
            (fit.params.a_low - truth.a_low).abs() < 1e-5,
            "a_low {}",
            fit.params.a_low
        );
        assert!(
            (fit.params.a_high - truth.a_high).abs() < 1e-5,
            "a_high {}",
            fit.params.a_high
        );
        assert!(
            (fit.params.growth - truth.growth).abs() < 1e-5,
            "growth {}",
            fit.params.growth
        );
        assert!(
            (fit.params.shift - truth.shift).abs() < 1e-5,
            "shift {}",
            fit.params.shift
        );
        assert!(fit.mse < 1e-12);
    }

    #[test]
    fn fit_tolerates_noise() {
        // Uniform noise of amplitude 0.005: variance amp^2/3. The fitted
        // curve's MSE must stay within 2x of it for every seeded trial.
        let truth = k5();
        let amp = 0.005;
        let noise_var = amp * amp / 3.0;
        for seed in 0..50u64 {
            let mut stream = Substream::derive(0xF17, seed);
            let samples: Vec<SimilaritySample> = grid_samples(&truth, 30, 29.0)
                .into_iter()
                .map(|mut s| {
                    s.epsilon = (s.epsilon + amp * (2.0 * stream.next_f64() - 1.0)).clamp(0.0, 1.0);
                    s
                })
                .collect();
            let fit = fit_logistic(&samples, 5.0).unwrap();
            assert!(
                fit.mse <= 2.0 * noise_var,
                "seed {seed}: mse {} vs noise var {noise_var}",
                fit.mse
            );
        }
    }

    #[test]
    fn fit_rejects_too_few_samples() {
        let truth = k5();
        let samples = grid_samples(&truth, 5, 29.0);
        assert!(matches!(
            fit_logistic(&samples, 5.0),
            Err(SimilarityError::DegenerateSamples(_))
        ));
    }

    #[test]
    fn fit_rejects_constant_epsilons() {
        let samples: Vec<SimilaritySample> = (0..10)
            .map(|i| SimilaritySample {
                snr: i as f64 * 3.0,
                epsilon: 0.5,
            })
            .collect();
        assert!(matches!(
            fit_logistic(&samples, 5.0),
            Err(SimilarityError::DegenerateSamples(_))
        ));
    }

    #[test]
    fn fit_rejects_narrow_snr_span() {
        let truth = k5();
        let samples: Vec<SimilaritySample> = (0..10)
            .map(|i| {
                let snr = 5.0 + i as f64 * 0.1;
                SimilaritySample {
                    snr,
                    epsilon: eval_epsilon(&truth, snr),
                }
            })
            .collect();
        assert!(matches!(
            fit_logistic(&samples, 5.0),
            Err(SimilarityError::DegenerateSamples(_))
        ));
    }

    #[test]
    fn parse_samples_round_trip() {
        let text = "snr_linear,epsilon\n0.0,0.56\n10.0,0.8885\n";
        let samples = parse_samples(text).unwrap();
        assert_eq!(samples.len(), 2);
        assert_eq!(samples[1].snr, 10.0);
        assert_eq!(samples[1].epsilon, 0.8885);
    }

    #[test]
    fn parse_samples_rejects_bad_input() {
        assert!(parse_samples("wrong,header\n1,0.5\n").is_err());
        assert!(parse_samples("snr_linear,epsilon\n1,2\n").is_err());
        assert!(parse_samples("snr_linear,epsilon\n-1,0.5\n").is_err());
        assert!(parse_samples("snr_linear,epsilon\n1,0.5,9\n").is_err());
    }

    proptest! {
        #[test]
        fn eval_monotone_and_bounded(
            a_low in 0.0..0.5f64,
            span in 0.05..0.5f64,
            growth in 0.01..5.0f64,
            shift in -10.0..10.0f64,
            g1 in 0.0..500.0f64,
            dg in 1e-6..500.0f64,
        ) {
            let a_high = (a_low + span).min(1.0);
            let p = LogisticParams::new(a_low, a_high, growth, shift, 5.0).unwrap();
            let lo = eval_epsilon(&p, g1);
            let hi = eval_epsilon(&p, g1 + dg);
            prop_assert!(hi >= lo);
            prop_assert!(lo >= p.a_low && lo <= p.a_high);
            prop_assert!(hi >= p.a_low && hi <= p.a_high);
        }

        #[test]
        fn invert_round_trip(target_frac in 0.01..0.99f64) {
            let p = LogisticParams::deepsc_k5();
            let target = p.a_low + target_frac * (p.a_high - p.a_low);
            let g = invert_epsilon(&p, target).unwrap();
            let back = eval_epsilon(&p, g);
            prop_assert!((back - target).abs() < 1e-9);
        }
    }
}
