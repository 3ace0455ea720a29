//! Sweep configuration assembly and CSV/JSON output for `mc`, `fit` and
//! `figure1`.

use std::fs;
use std::io::Write;
use std::path::Path;

use hqec::experiments::{
    figure1_configs, figure1_data, lin_space, log_space, with_threads, CorrectionMode, SweepConfig,
    SweepResult, FIGURE1_CSV_HEADER, SWEEP_CSV_HEADER,
};
use hqec::noise::{AngleDist, NoiseModel, PhaseMode, RotationSlots};
use hqec::ImaginaryAxis;

use crate::{Failure, Outcome, PhaseArg, SlotsArg, SweepFlags};

const DEFAULT_TRIALS: u64 = 10_000;
const DEFAULT_FIGURE1_TRIALS: u64 = 20_000;

#[derive(Clone, Debug, PartialEq)]
pub enum PRange {
    Range { start: f64, stop: f64, log: bool, count: usize },
    List(Vec<f64>),
}

impl PRange {
    /// Expands the range; ordering and positivity problems name `p range`.
    pub fn values(&self) -> Result<Vec<f64>, String> {
        match *self {
            PRange::List(ref v) => Ok(v.clone()),
            PRange::Range { start, stop, log, count } => {
                if count == 0 {
                    return Err("p range: count must be at least 1".into());
                }
                if count > 1 && start >= stop {
                    return Err(format!("p range: start {start} must be below stop {stop}"));
                }
                if log && start <= 0.0 {
                    return Err(format!("p range: log spacing needs start > 0, got {start}"));
                }
                Ok(if log { log_space(start, stop, count) } else { lin_space(start, stop, count) })
            }
        }
    }
}

pub fn parse_p_range(s: &str) -> Result<PRange, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [start, stop, scale, count] => {
            let log = match *scale {
                "log" => true,
                "lin" => false,
                other => return Err(format!("spacing `{other}` must be `log` or `lin`")),
            };
            let count = count.trim().parse().map_err(|_| format!("`{count}` is not a point count"))?;
            Ok(PRange::Range { start: num(start)?, stop: num(stop)?, log, count })
        }
        [_] => s.split(',').map(num).collect::<Result<_, _>>().map(PRange::List),
        _ => Err("expected start:stop:log|lin:count or a comma-separated list".into()),
    }
}

pub fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "expected three comma-separated numbers".to_string())
}

fn config_err(key: &str) -> impl Fn(hqec::Error) -> Failure + '_ {
    move |e| Failure::Config(format!("{key}: {e}"))
}

fn flags_touch_rotations(f: &SweepFlags) -> bool {
    f.p_rot.is_some() || f.rot_axis.is_some() || f.rot_angle.is_some() || f.rot_angle_max.is_some()
}

/// `--config` file (or `base`) with every given flag applied on top.
fn assemble(flags: &SweepFlags, base: Option<SweepConfig>) -> Outcome<SweepConfig> {
    let mut cfg = match (&flags.config, base) {
        (Some(path), _) => {
            let text =
                fs::read_to_string(path).map_err(|e| Failure::Config(format!("config {}: {e}", path.display())))?;
            serde_json::from_str::<SweepConfig>(&text)
                .map_err(|e| Failure::Config(format!("config {}: {e}", path.display())))?
        }
        (None, Some(base)) => base,
        (None, None) => {
            let code = flags.code.ok_or_else(|| Failure::Config("code: missing (use --code or --config)".into()))?;
            if flags.p.is_none() {
                return Err(Failure::Config("p_values: missing (use --p or --config)".into()));
            }
            let noise = NoiseModel::depolarizing(0.0)?;
            SweepConfig::new(code.into(), noise, Vec::new(), DEFAULT_TRIALS, 0)
        }
    };
    if let Some(code) = flags.code {
        cfg.code = code.into();
    }
    if let Some(p) = &flags.p {
        cfg.p_values = p.values().map_err(Failure::Config)?;
    }
    if let Some(t) = flags.trials {
        cfg.trials = t;
    }
    if let Some(s) = flags.seed {
        cfg.seed = s;
    }
    if flags.quaternionic {
        cfg.quaternionic_detection = true;
    }
    if let Some(t) = flags.detection_threshold {
        cfg.detection_threshold = t;
    }
    if let Some(r) = flags.estimate_resolution {
        cfg.correction = CorrectionMode::Estimated { resolution: r };
    }

    let mut noise = cfg.noise;
    if let Some(w) = flags.weights {
        noise = noise.with_weights(w).map_err(config_err("weights"))?;
    }
    if let Some(m) = flags.phase_mode {
        noise = noise.with_phase_mode(match m {
            PhaseArg::None => PhaseMode::None,
            PhaseArg::Table1 => PhaseMode::Table1,
        });
    }
    if flags_touch_rotations(flags) {
        let axis = match flags.rot_axis {
            Some([x, y, z]) => ImaginaryAxis::new(x, y, z).map_err(|e| config_err("rot_axis")(e.into()))?,
            None => noise.axis(),
        };
        let angle = match (flags.rot_angle, flags.rot_angle_max) {
            (Some(t), _) => AngleDist::Fixed(t),
            (None, Some(t)) => AngleDist::UniformMax(t),
            (None, None) => noise.angle(),
        };
        noise = noise
            .with_rotations(flags.p_rot.unwrap_or(noise.p_rot()), axis, angle)
            .map_err(config_err("noise"))?;
    }
    if let Some(s) = flags.rot_slots {
        noise = noise.with_rotation_slots(match s {
            SlotsArg::Zero => RotationSlots::Zero,
            SlotsArg::One => RotationSlots::One,
            SlotsArg::All => RotationSlots::All,
        });
    }
    cfg.noise = noise;
    cfg.validate().map_err(|e| Failure::Config(e.to_string()))?;
    Ok(cfg)
}

pub fn build_config(flags: &SweepFlags) -> Outcome<SweepConfig> {
    assemble(flags, None)
}

pub fn write_sweep_csv(w: impl Write, result: &SweepResult) -> Outcome {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SWEEP_CSV_HEADER)?;
    for rec in result.csv_records() {
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

/// `(p, column)` pairs from a CSV with a header row.
pub fn read_points(path: &Path, column: &str) -> Outcome<Vec<(f64, f64)>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Failure::Config(format!("in {}: {e}", path.display())))?;
    let headers = rdr.headers()?.clone();
    let index = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Failure::Config(format!("column `{name}` not found in {}", path.display())))
    };
    let (ip, iv) = (index("p")?, index(column)?);
    let mut points = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let num = |i: usize| {
            rec[i].parse::<f64>().map_err(|_| Failure::Config(format!("`{}` in column {} is not a number", &rec[i], &headers[i])))
        };
        points.push((num(ip)?, num(iv)?));
    }
    Ok(points)
}

fn fit_json(fit: &hqec::Result<hqec::experiments::FitResult>) -> serde_json::Value {
    match fit {
        Ok(f) => f.to_json(),
        Err(e) => serde_json::json!({ "error": e.to_string() }),
    }
}

pub fn figure1(flags: &SweepFlags, prefix: &str, threads: usize) -> Outcome {
    let (default, _) = figure1_configs(DEFAULT_FIGURE1_TRIALS, 0);
    let base = assemble(flags, Some(default))?;
    let standard = SweepConfig { quaternionic_detection: false, ..base.clone() };
    let quaternionic = SweepConfig { quaternionic_detection: true, ..base };
    let fig = with_threads(threads, || figure1_data(&standard, &quaternionic))??;

    let mut combined = csv::Writer::from_path(format!("{prefix}.csv"))?;
    combined.write_record(FIGURE1_CSV_HEADER)?;
    for rec in fig.csv_records() {
        combined.write_record(&rec)?;
    }
    combined.flush()?;
    write_sweep_csv(fs::File::create(format!("{prefix}_standard.csv"))?, &fig.standard)?;
    write_sweep_csv(fs::File::create(format!("{prefix}_quaternionic.csv"))?, &fig.quaternionic)?;
    let fits = serde_json::json!({
        "standard": fit_json(&fig.standard_fit),
        "quaternionic": fit_json(&fig.quaternionic_fit),
    });
    fs::write(format!("{prefix}_fit.json"), format!("{fits}\n"))?;
    Ok(())
}
