//! Monte Carlo logical error rates, closed-form oracles, the distance scaling
//! law and log-log threshold fits.
//!
//! Pauli failures are decided algebraically: the residual `error * correction`
//! fails iff it anticommutes with a logical representative. Rotation errors
//! are replayed on the reference codeword `|0_L>` and scored by
//! [`detect_rotations`] after the (optional) correction step, so the standard
//! pipeline fails whenever a rotation leaves residue above the threshold.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::{
    apply_event, correct_rotation, detect_rotations, estimate_angle, sample_error, undo_rotations, ErrorEvent,
    NoiseModel, RotationSlots, DEFAULT_DETECTION_THRESHOLD,
};
use crate::register::QRegister;
use crate::stabilizer::{CodeId, Decoder, Decoding, Pauli, PauliString, Sign, StabilizerCode, Syndrome};

/// Exponent and threshold quoted for the standard and quaternionic codes.
/// Written into figure data as annotations only.
pub const TARGET_EXPONENT_STANDARD: f64 = 2.0;
pub const TARGET_EXPONENT_QUATERNIONIC: f64 = 2.2;
pub const TARGET_P_TH_STANDARD: f64 = 0.01;
pub const TARGET_P_TH_QUATERNIONIC: f64 = 0.015;

/// Header of sweep CSV files.
pub const SWEEP_CSV_HEADER: [&str; 7] = ["code_id", "p", "trials", "failures", "p_L", "stderr", "seed"];

const STREAM_BITS: u32 = 40;

/// How flagged rotations are undone in the quaternionic pipeline.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrectionMode {
    /// Exact sampled angles.
    #[default]
    Oracle,
    /// Angle estimated from the flagged slot, rounded to a multiple of
    /// `resolution`.
    Estimated { resolution: f64 },
}

/// Symplectic form of a Pauli string: bit `q - 1` of `x`/`z` set when qubit
/// `q` carries X/Z (both for Y). Phases are dropped.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Mask {
    x: u64,
    z: u64,
}

impl Mask {
    fn of(p: &PauliString) -> Mask {
        let mut m = Mask::default();
        for (q, l) in p.letters().iter().enumerate() {
            let bit = 1u64 << q;
            if matches!(l, Pauli::X | Pauli::Y) {
                m.x |= bit;
            }
            if matches!(l, Pauli::Z | Pauli::Y) {
                m.z |= bit;
            }
        }
        m
    }

    fn anticommutes(self, o: Mask) -> bool {
        ((self.x & o.z).count_ones() + (self.z & o.x).count_ones()) % 2 == 1
    }

    fn mul(self, o: Mask) -> Mask {
        Mask { x: self.x ^ o.x, z: self.z ^ o.z }
    }
}

/// Failure breakdown of one trial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TrialOutcome {
    /// Residual Pauli acts as a logical operator, or the syndrome was not
    /// decodable.
    pub pauli_failure: bool,
    pub unknown_syndrome: bool,
    /// Rotation residue above threshold on the reference codeword.
    pub rotation_failure: bool,
}

impl TrialOutcome {
    pub fn failed(&self) -> bool {
        self.pauli_failure || self.rotation_failure
    }
}

/// Precomputed decoder and reference state for repeated trials on one code.
#[derive(Clone, Debug)]
pub struct TrialRunner {
    code: StabilizerCode,
    generators: Vec<Mask>,
    logical_x: Mask,
    logical_z: Mask,
    /// Indexed by syndrome bits (bit `g` set when generator `g` reports -1).
    table: Vec<Option<Mask>>,
    reference: QRegister,
    threshold: f64,
    correction: CorrectionMode,
}

impl TrialRunner {
    pub fn new(code: &StabilizerCode, threshold: f64, correction: CorrectionMode) -> Self {
        let decoder = Decoder::new(code);
        let m = code.generators().len();
        let table = (0..1usize << m)
            .map(|bits| {
                let syndrome =
                    Syndrome((0..m).map(|g| if bits >> g & 1 == 1 { Sign::Minus } else { Sign::Plus }).collect());
                match decoder.decode(&syndrome).expect("syndrome length matches") {
                    Decoding::Trivial => Some(Mask::default()),
                    Decoding::Correction { correction, .. } => Some(Mask::of(&correction)),
                    Decoding::Unknown => None,
                }
            })
            .collect();
        TrialRunner {
            code: code.clone(),
            generators: code.generators().iter().map(Mask::of).collect(),
            logical_x: Mask::of(code.logical_x()),
            logical_z: Mask::of(code.logical_z()),
            table,
            reference: code.codewords()[0].clone(),
            threshold,
            correction,
        }
    }

    pub fn code(&self) -> &StabilizerCode {
        &self.code
    }

    /// Samples the event for `(seed, trial)` and scores it.
    pub fn run(&self, noise: &NoiseModel, seed: u64, trial: u64, quaternionic: bool) -> Result<TrialOutcome> {
        let e = sample_error(noise, self.code.n(), seed, trial);
        self.score(&e, quaternionic)
    }

    /// Decodes, corrects and scores a given event.
    pub fn score(&self, e: &ErrorEvent, quaternionic: bool) -> Result<TrialOutcome> {
        if e.n() != self.code.n() {
            return Err(Error::LengthMismatch { left: self.code.n(), right: e.n() });
        }
        let mut out = TrialOutcome::default();
        let err = Mask::of(&e.pauli);
        let bits = self
            .generators
            .iter()
            .enumerate()
            .filter(|(_, g)| err.anticommutes(**g))
            .fold(0usize, |acc, (i, _)| acc | 1 << i);
        match self.table[bits] {
            Some(correction) => {
                let residual = err.mul(correction);
                out.pauli_failure = residual.anticommutes(self.logical_x) || residual.anticommutes(self.logical_z);
            }
            None => {
                out.unknown_syndrome = true;
                out.pauli_failure = true;
            }
        }
        if !e.rotations.is_empty() {
            out.rotation_failure = self.rotation_residue(e, quaternionic)?;
        }
        Ok(out)
    }

    /// Replays the rotations of `e` on `|0_L>`, corrects them when
    /// `quaternionic`, and reports whether residue stays above threshold.
    fn rotation_residue(&self, e: &ErrorEvent, quaternionic: bool) -> Result<bool> {
        let mut state = apply_event(&self.reference, &e.rotations_only())?;
        if quaternionic {
            let flags = detect_rotations(&state, &self.reference, self.threshold)?;
            if !flags.is_empty() {
                state = match self.correction {
                    CorrectionMode::Oracle => {
                        let mut flagged = e.rotations_only();
                        flagged.rotations.retain(|r| flags.iter().any(|f| f.qubit == r.qubit));
                        undo_rotations(&state, &flagged)?
                    }
                    CorrectionMode::Estimated { resolution } => self.estimated_correction(state, e, resolution)?,
                };
            }
        }
        Ok(!detect_rotations(&state, &self.reference, self.threshold)?.is_empty())
    }

    /// Greedy: estimate and undo the flagged slot with the largest excess
    /// (the one holding every amplitude a single rotation touched) until
    /// nothing is flagged, the estimate rounds to zero, or `2n` rounds pass.
    fn estimated_correction(&self, mut state: QRegister, e: &ErrorEvent, resolution: f64) -> Result<QRegister> {
        let Some(axis) = e.rotations.first().map(|r| r.axis) else {
            return Ok(state);
        };
        for _ in 0..2 * self.code.n() {
            let flags = detect_rotations(&state, &self.reference, self.threshold)?;
            let Some(f) = flags.iter().reduce(|a, b| if b.excess() > a.excess() { b } else { a }) else {
                break;
            };
            let raw = estimate_angle(&state, &self.reference, f.qubit, f.slot, axis)?;
            let angle = (raw / resolution).round() * resolution;
            if angle == 0.0 {
                break;
            }
            let slots = if e.slots == RotationSlots::All { RotationSlots::from_bit(f.slot) } else { e.slots };
            state = correct_rotation(&state, f.qubit, slots, axis, angle)?;
        }
        Ok(state)
    }
}

/// One trial with the default detection threshold and oracle correction;
/// `true` means logical failure.
pub fn run_trial(code: &StabilizerCode, noise: &NoiseModel, seed: u64, trial: u64, quaternionic: bool) -> Result<bool> {
    TrialRunner::new(code, DEFAULT_DETECTION_THRESHOLD, CorrectionMode::Oracle)
        .run(noise, seed, trial, quaternionic)
        .map(|o| o.failed())
}

/// Probability of two or more flips among three: `3p²(1-p) + p³`.
pub fn closed_form_three_qubit(p: f64) -> f64 {
    3.0 * p * p * (1.0 - p) + p.powi(3)
}

/// `(p / p_th)^floor((d+1)/2)`.
pub fn scaling_model(p: f64, p_th: f64, d: u32) -> f64 {
    (p / p_th).powi(d.div_ceil(2) as i32)
}

/// `p_L(d) / p_L(d+2)`.
pub fn suppression_factor(p_l_d: f64, p_l_d2: f64) -> Result<f64> {
    if p_l_d > 0.0 && p_l_d2 > 0.0 {
        Ok(p_l_d / p_l_d2)
    } else {
        Err(Error::NonPositive(p_l_d, p_l_d2))
    }
}

/// `count` points from `start` to `stop` inclusive, equally spaced in log.
pub fn log_space(start: f64, stop: f64, count: usize) -> Vec<f64> {
    spaced(start.ln(), stop.ln(), count).into_iter().map(f64::exp).enumerate().map(|(i, v)| pin(i, v, count, start, stop)).collect()
}

pub fn lin_space(start: f64, stop: f64, count: usize) -> Vec<f64> {
    spaced(start, stop, count).into_iter().enumerate().map(|(i, v)| pin(i, v, count, start, stop)).collect()
}

fn spaced(a: f64, b: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..count).map(|i| a + (b - a) * i as f64 / (count - 1) as f64).collect(),
    }
}

// endpoints exactly as given
fn pin(i: usize, v: f64, count: usize, start: f64, stop: f64) -> f64 {
    if i == 0 {
        start
    } else if i + 1 == count {
        stop
    } else {
        v
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub code: CodeId,
    /// Template; `p` is replaced by each swept value.
    #[serde(default = "default_noise")]
    pub noise: NoiseModel,
    pub p_values: Vec<f64>,
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub quaternionic_detection: bool,
    #[serde(default = "default_threshold")]
    pub detection_threshold: f64,
    #[serde(default)]
    pub correction: CorrectionMode,
}

fn default_noise() -> NoiseModel {
    NoiseModel::depolarizing(0.0).expect("0 is a valid rate")
}

fn default_threshold() -> f64 {
    DEFAULT_DETECTION_THRESHOLD
}

impl SweepConfig {
    pub fn new(code: CodeId, noise: NoiseModel, p_values: Vec<f64>, trials: u64, seed: u64) -> Self {
        SweepConfig {
            code,
            noise,
            p_values,
            trials,
            seed,
            quaternionic_detection: false,
            detection_threshold: DEFAULT_DETECTION_THRESHOLD,
            correction: CorrectionMode::Oracle,
        }
    }

    /// Checks every invariant; the message names the offending key.
    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, why: String| Err(Error::InvalidSweep(format!("{key}: {why}")));
        if self.p_values.is_empty() {
            return bad("p_values", "empty".into());
        }
        if let Some(p) = self.p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return bad("p_values", format!("{p} is outside [0, 1]"));
        }
        if let Some(w) = self.p_values.windows(2).find(|w| w[0] >= w[1]) {
            return bad("p_values", format!("not strictly increasing ({} then {})", w[0], w[1]));
        }
        if self.trials == 0 || self.trials >= 1 << STREAM_BITS {
            return bad("trials", format!("{} is outside 1..2^{STREAM_BITS}", self.trials));
        }
        if !(self.detection_threshold.is_finite() && self.detection_threshold >= 0.0) {
            return bad("detection_threshold", format!("{} must be finite and >= 0", self.detection_threshold));
        }
        if let CorrectionMode::Estimated { resolution } = self.correction {
            if !(resolution.is_finite() && resolution > 0.0) {
                return bad("correction.estimated.resolution", format!("{resolution} must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    pub failures: u64,
    pub trials: u64,
    pub p_l: f64,
    pub stderr: f64,
}

impl SweepRow {
    pub fn new(p: f64, failures: u64, trials: u64) -> Self {
        let p_l = failures as f64 / trials as f64;
        SweepRow { p, failures, trials, p_l, stderr: (p_l * (1.0 - p_l) / trials as f64).sqrt() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub code: CodeId,
    pub seed: u64,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Records under [`SWEEP_CSV_HEADER`], floats with 12 significant digits.
    pub fn csv_records(&self) -> Vec<[String; 7]> {
        self.rows
            .iter()
            .map(|r| {
                [
                    self.code.as_str().to_string(),
                    format_g(r.p),
                    r.trials.to_string(),
                    r.failures.to_string(),
                    format_g(r.p_l),
                    format_g(r.stderr),
                    self.seed.to_string(),
                ]
            })
            .collect()
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        self.rows.iter().map(|r| (r.p, r.p_l)).collect()
    }

    pub fn fit(&self) -> Result<FitResult> {
        fit_threshold(&self.points())
    }
}

fn stream_id(p_index: usize, trial: u64) -> u64 {
    (p_index as u64) << STREAM_BITS | trial
}

/// Runs every `(p, trial)` pair; trial `t` at point `i` uses stream
/// `i << 40 | t` of `seed`. Failures are integer counts, so the result does
/// not depend on how rayon schedules the work.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let runner = TrialRunner::new(&config.code.build(), config.detection_threshold, config.correction);
    let rows = config
        .p_values
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let noise = config.noise.with_p(p)?;
            let failures = (0..config.trials)
                .into_par_iter()
                .map(|t| {
                    runner.run(&noise, config.seed, stream_id(i, t), config.quaternionic_detection).map(|o| u64::from(o.failed()))
                })
                .try_reduce(|| 0, |a, b| Ok(a + b))?;
            Ok(SweepRow::new(p, failures, config.trials))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { code: config.code, seed: config.seed, rows })
}

/// Runs `f` on a dedicated pool of `threads` workers (0 = rayon default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidSweep(format!("threads: {e}")))?;
    Ok(pool.install(f))
}

/// Least-squares line through `(ln p, ln p_L)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// `p_th` with the fitted line written as `(p / p_th)^slope`.
    pub p_th_intercept: f64,
    /// `p` where the fitted line meets `p_L = p`; absent when the slope is 1.
    pub p_th_crossing: Option<f64>,
    /// RMS of the log-space residuals.
    pub residual: f64,
    pub used: usize,
    /// Rows dropped because `p_L` or `p` was not positive.
    pub excluded: usize,
}

impl FitResult {
    pub fn exponent(&self) -> f64 {
        self.slope
    }

    /// Suppression factor `p_th / p` predicted by the fit.
    pub fn lambda_at(&self, p: f64) -> f64 {
        self.p_th_intercept / p
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "slope": self.slope,
            "p_th_intercept": self.p_th_intercept,
            "p_th_crossing": self.p_th_crossing,
            "residual": self.residual,
        })
    }
}

/// Fits `ln p_L = slope ln p + intercept` over rows with `p, p_L > 0`.
pub fn fit_threshold(points: &[(f64, f64)]) -> Result<FitResult> {
    let usable: Vec<(f64, f64)> =
        points.iter().filter(|(p, pl)| *p > 0.0 && *pl > 0.0).map(|(p, pl)| (p.ln(), pl.ln())).collect();
    let n = usable.len();
    if n < 3 {
        return Err(Error::TooFewRows(n));
    }
    let nf = n as f64;
    let mx = usable.iter().map(|(x, _)| x).sum::<f64>() / nf;
    let my = usable.iter().map(|(_, y)| y).sum::<f64>() / nf;
    let sxx: f64 = usable.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx <= f64::EPSILON * nf * mx.abs().max(1.0) {
        return Err(Error::DegenerateFit);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let p_th_intercept = (-intercept / slope).exp();
    if slope == 0.0 || !p_th_intercept.is_finite() || p_th_intercept <= 0.0 {
        return Err(Error::DegenerateFit);
    }
    let p_th_crossing = Some(slope - 1.0)
        .filter(|d| d.abs() > 1e-12)
        .map(|d| (-intercept / d).exp())
        .filter(|v| v.is_finite());
    let residual = (usable.iter().map(|(x, y)| (y - (slope * x + intercept)).powi(2)).sum::<f64>() / nf).sqrt();
    Ok(FitResult { slope, intercept, p_th_intercept, p_th_crossing, residual, used: n, excluded: points.len() - n })
}

/// `%.12g`-style rendering: 12 significant digits, trailing zeros dropped,
/// exponent form below 1e-4 and from 1e12.
pub fn format_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (11 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Two sweeps sharing code, grid, trials and seed, plus their fits.
#[derive(Clone, Debug)]
pub struct Figure1 {
    pub standard: SweepResult,
    pub quaternionic: SweepResult,
    pub standard_fit: Result<FitResult>,
    pub quaternionic_fit: Result<FitResult>,
}

pub const FIGURE1_CSV_HEADER: [&str; 16] = [
    "code_id",
    "p",
    "trials",
    "seed",
    "failures_standard",
    "p_L_standard",
    "stderr_standard",
    "failures_quaternionic",
    "p_L_quaternionic",
    "stderr_quaternionic",
    "model_standard",
    "model_quaternionic",
    "target_exponent_standard",
    "target_exponent_quaternionic",
    "target_p_th_standard",
    "target_p_th_quaternionic",
];

impl Figure1 {
    /// Simulated columns next to model curves: `model_standard` is
    /// `scaling_model(p, 0.01, 3)`, `model_quaternionic` is `(p/0.015)^2.2`.
    pub fn csv_records(&self) -> Vec<Vec<String>> {
        self.standard
            .rows
            .iter()
            .zip(&self.quaternionic.rows)
            .map(|(s, q)| {
                vec![
                    self.standard.code.as_str().to_string(),
                    format_g(s.p),
                    s.trials.to_string(),
                    self.standard.seed.to_string(),
                    s.failures.to_string(),
                    format_g(s.p_l),
                    format_g(s.stderr),
                    q.failures.to_string(),
                    format_g(q.p_l),
                    format_g(q.stderr),
                    format_g(scaling_model(s.p, TARGET_P_TH_STANDARD, 3)),
                    format_g((s.p / TARGET_P_TH_QUATERNIONIC).powf(TARGET_EXPONENT_QUATERNIONIC)),
                    format_g(TARGET_EXPONENT_STANDARD),
                    format_g(TARGET_EXPONENT_QUATERNIONIC),
                    format_g(TARGET_P_TH_STANDARD),
                    format_g(TARGET_P_TH_QUATERNIONIC),
                ]
            })
            .collect()
    }
}

/// Default pair: the perfect code over 8 log-spaced rates in
/// `[1e-3, 3e-2]`, depolarizing noise plus k-axis rotations with rate 0.05
/// and angles uniform in `[0, pi/2)`; only detection differs.
pub fn figure1_configs(trials: u64, seed: u64) -> (SweepConfig, SweepConfig) {
    let noise = NoiseModel::depolarizing(0.0)
        .and_then(|m| {
            m.with_rotations(0.05, crate::ImaginaryAxis::K, crate::noise::AngleDist::UniformMax(std::f64::consts::FRAC_PI_2))
        })
        .expect("valid defaults");
    let standard = SweepConfig::new(CodeId::Perfect5, noise, log_space(1e-3, 3e-2, 8), trials, seed);
    let quaternionic = SweepConfig { quaternionic_detection: true, ..standard.clone() };
    (standard, quaternionic)
}

/// Runs both sweeps. The configs must agree on code, grid, trials, seed and
/// Pauli noise, and only `quaternionic` may enable detection.
pub fn figure1_data(standard: &SweepConfig, quaternionic: &SweepConfig) -> Result<Figure1> {
    let same_pauli = standard.noise.weights() == quaternionic.noise.weights()
        && standard.noise.phase_mode() == quaternionic.noise.phase_mode();
    if standard.code != quaternionic.code
        || standard.p_values != quaternionic.p_values
        || standard.trials != quaternionic.trials
        || standard.seed != quaternionic.seed
        || !same_pauli
    {
        return Err(Error::InvalidSweep("figure1: configs differ beyond detection and rotation parameters".into()));
    }
    if standard.quaternionic_detection || !quaternionic.quaternionic_detection {
        return Err(Error::InvalidSweep("figure1: quaternionic_detection must be off then on".into()));
    }
    let standard = run_sweep(standard)?;
    let quaternionic = run_sweep(quaternionic)?;
    Ok(Figure1 { standard_fit: standard.fit(), quaternionic_fit: quaternionic.fit(), standard, quaternionic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{AngleDist, Rotation};
    use crate::stabilizer::{standard_perfect_code, three_qubit_code};
    use crate::ImaginaryAxis;

    fn event(word: &str) -> ErrorEvent {
        let pauli: PauliString = word.parse().unwrap();
        ErrorEvent { pauli, rotations: vec![], slots: RotationSlots::Zero }
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(closed_form_three_qubit(0.0), 0.0);
        assert_eq!(closed_form_three_qubit(1.0), 1.0);
        // flip patterns with >= 2 flips: 3 * 0.01 * 0.9 + 0.001
        assert!((closed_form_three_qubit(0.1) - 0.028).abs() < 1e-15);
    }

    #[test]
    fn scaling_model_values() {
        for d in 1..8 {
            assert_eq!(scaling_model(0.015, 0.015, d), 1.0);
        }
        assert!((scaling_model(0.001, 0.01, 3) - 1e-2).abs() < 1e-15);
        assert!((scaling_model(0.005, 0.015, 7) - 0.012345679).abs() < 1e-8);
    }

    #[test]
    fn suppression_examples() {
        assert_eq!(suppression_factor(0.3, 0.3).unwrap(), 1.0);
        let p_th = 0.01;
        let p = p_th / 2.0;
        let lambda = suppression_factor(scaling_model(p, p_th, 3), scaling_model(p, p_th, 5)).unwrap();
        assert!((lambda - 2.0).abs() < 1e-12);
        let p = p_th / 2.14;
        let lambda = suppression_factor(scaling_model(p, p_th, 3), scaling_model(p, p_th, 5)).unwrap();
        assert!((lambda - 2.14).abs() < 1e-12);
        assert_eq!(suppression_factor(0.0, 1.0), Err(Error::NonPositive(0.0, 1.0)));
    }

    #[test]
    fn deterministic_injections() {
        let perfect = TrialRunner::new(&standard_perfect_code(), 0.01, CorrectionMode::Oracle);
        for e in standard_perfect_code().single_qubit_errors() {
            let ev = ErrorEvent { pauli: e, rotations: vec![], slots: RotationSlots::Zero };
            assert!(!perfect.score(&ev, false).unwrap().failed());
        }
        let three = TrialRunner::new(&three_qubit_code(), 0.01, CorrectionMode::Oracle);
        assert!(three.score(&event("XXI"), false).unwrap().pauli_failure);
        assert!(!three.score(&event("IXI"), false).unwrap().failed());
        assert!(!three.score(&event("III"), true).unwrap().failed());
    }

    #[test]
    fn masks_agree_with_pauli_strings() {
        let code = standard_perfect_code();
        let words = ["XZZXI", "YIIZX", "IIYYI", "ZZZZZ", "XYZIX"];
        for a in words {
            for b in words {
                let (pa, pb): (PauliString, PauliString) = (a.parse().unwrap(), b.parse().unwrap());
                let slow = pa.commute_sign(&pb).unwrap() == Sign::Minus;
                assert_eq!(Mask::of(&pa).anticommutes(Mask::of(&pb)), slow);
                assert_eq!(Mask::of(&pa).mul(Mask::of(&pb)), Mask::of(&pa.mul_letters(&pb).unwrap()));
            }
            let pa: PauliString = a.parse().unwrap();
            assert_eq!(
                TrialRunner::new(&code, 0.01, CorrectionMode::Oracle).score(&event(a), false).unwrap().pauli_failure,
                {
                    let c = crate::stabilizer::decode(&code.syndrome_of(&pa).unwrap(), &code).unwrap();
                    match c.correction(5) {
                        Some(c) => code.is_logical_error(&pa.mul_letters(&c).unwrap()).unwrap(),
                        None => true,
                    }
                }
            );
        }
    }

    #[test]
    fn rotation_scoring() {
        let runner = TrialRunner::new(&standard_perfect_code(), 0.01, CorrectionMode::Oracle);
        let ev = ErrorEvent {
            pauli: PauliString::identity(5),
            rotations: vec![Rotation { qubit: 2, axis: ImaginaryAxis::K, angle: 0.9 }],
            slots: RotationSlots::Zero,
        };
        assert!(runner.score(&ev, false).unwrap().rotation_failure);
        assert!(!runner.score(&ev, true).unwrap().failed());

        let est = TrialRunner::new(&standard_perfect_code(), 0.01, CorrectionMode::Estimated { resolution: 1e-3 });
        assert!(!est.score(&ev, true).unwrap().failed());

        let tiny = ErrorEvent { rotations: vec![Rotation { angle: 0.01, ..ev.rotations[0] }], ..ev };
        assert!(!runner.score(&tiny, false).unwrap().failed());
    }

    #[test]
    fn fit_recovers_synthetic_model() {
        for p_th in [0.015, 0.01] {
            let pts: Vec<_> = log_space(1e-3, 1e-2, 8).into_iter().map(|p| (p, scaling_model(p, p_th, 3))).collect();
            let fit = fit_threshold(&pts).unwrap();
            assert!((fit.slope - 2.0).abs() < 1e-3);
            assert!((fit.p_th_intercept - p_th).abs() < 0.05 * p_th);
            assert!(fit.residual < 1e-12);
            // (p/p_th)^2 = p at p = p_th^2
            assert!((fit.p_th_crossing.unwrap() - p_th * p_th).abs() < 1e-9);
            assert!((fit.lambda_at(p_th / 2.0) - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn fit_errors() {
        assert_eq!(fit_threshold(&[(0.1, 0.1); 5]), Err(Error::DegenerateFit));
        assert_eq!(fit_threshold(&[(0.1, 0.1), (0.2, 0.0), (0.3, 0.2)]), Err(Error::TooFewRows(2)));
        let fit = fit_threshold(&[(0.01, 0.0), (0.02, 0.001), (0.03, 0.003), (0.05, 0.01)]).unwrap();
        assert_eq!((fit.used, fit.excluded), (3, 1));
    }

    #[test]
    fn sweep_validation_names_keys() {
        let noise = NoiseModel::depolarizing(0.0).unwrap();
        let mut cfg = SweepConfig::new(CodeId::Three, noise, vec![0.5, 0.1], 10, 0);
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("p_values"), "{msg}");
        cfg.p_values = vec![0.1];
        cfg.trials = 0;
        assert!(cfg.validate().unwrap_err().to_string().contains("trials"));
    }

    #[test]
    fn small_sweeps() {
        let noise = NoiseModel::depolarizing(0.0).unwrap();
        let zero = run_sweep(&SweepConfig::new(CodeId::Three, noise, vec![0.0], 1, 0)).unwrap();
        assert_eq!(zero.rows[0].p_l, 0.0);

        let bf = NoiseModel::bit_flip(0.0).unwrap();
        let cfg = SweepConfig::new(CodeId::Three, bf, vec![0.1, 0.2], 2000, 5);
        let a = run_sweep(&cfg).unwrap();
        let b = with_threads(1, || run_sweep(&cfg)).unwrap().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.csv_records()[0][0], "three");
    }

    #[test]
    fn rotation_free_figure_curves_coincide() {
        let noise = NoiseModel::depolarizing(0.0).unwrap();
        let s = SweepConfig::new(CodeId::Perfect5, noise, vec![0.02, 0.05, 0.1], 2000, 3);
        let q = SweepConfig { quaternionic_detection: true, ..s.clone() };
        let fig = figure1_data(&s, &q).unwrap();
        assert_eq!(fig.standard.rows, fig.quaternionic.rows);
        assert_eq!(fig.csv_records()[0][12..], ["2", "2.2", "0.01", "0.015"]);
        assert!(figure1_data(&q, &s).is_err());
    }

    #[test]
    fn rotations_only_help_the_quaternionic_pipeline() {
        let noise = NoiseModel::depolarizing(0.0)
            .unwrap()
            .with_rotations(0.1, ImaginaryAxis::K, AngleDist::UniformMax(1.5))
            .unwrap();
        let (s, q) = (
            SweepConfig::new(CodeId::Perfect5, noise, vec![0.01, 0.05], 3000, 11),
            SweepConfig { quaternionic_detection: true, ..SweepConfig::new(CodeId::Perfect5, noise, vec![0.01, 0.05], 3000, 11) },
        );
        let fig = figure1_data(&s, &q).unwrap();
        for (a, b) in fig.standard.rows.iter().zip(&fig.quaternionic.rows) {
            assert!(b.failures < a.failures);
        }
    }

    #[test]
    fn format_g_matches_printf() {
        assert_eq!(format_g(0.028), "0.028");
        assert_eq!(format_g(1.0), "1");
        assert_eq!(format_g(1e-5), "1e-05");
        assert_eq!(format_g(0.00012345678901234), "0.000123456789012");
        assert_eq!(format_g(123456789012345.0), "1.23456789012e+14");
        assert_eq!(format_g(-2.5), "-2.5");
        assert_eq!(format_g(1.0 / 3.0), "0.333333333333");
    }
}
