//! Stochastic error channels: phased Pauli errors and quaternionic rotation
//! errors, plus rotation detection against a known reference and inverse
//! rotation correction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::{Basis, ImaginaryAxis, Quaternion};
use crate::register::QRegister;
use crate::stabilizer::{Pauli, PauliString, UnitPhase};

/// Tolerance on `wx + wy + wz = 1`.
pub const WEIGHT_TOL: f64 = 1e-12;

/// Default threshold on excess j/k strength used by detection and scoring.
pub const DEFAULT_DETECTION_THRESHOLD: f64 = 0.01;

/// Which amplitudes of a qubit a rotation multiplies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationSlots {
    /// Amplitudes whose bit at the qubit is 0.
    #[default]
    Zero,
    /// Amplitudes whose bit at the qubit is 1.
    One,
    /// Every amplitude.
    All,
}

impl RotationSlots {
    fn contains(self, bit: usize) -> bool {
        match self {
            RotationSlots::Zero => bit == 0,
            RotationSlots::One => bit == 1,
            RotationSlots::All => true,
        }
    }

    pub fn from_bit(bit: u8) -> Self {
        if bit == 0 {
            RotationSlots::Zero
        } else {
            RotationSlots::One
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleDist {
    Fixed(f64),
    /// Uniform on `[0, max)`.
    UniformMax(f64),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseMode {
    #[default]
    None,
    /// X, Y, Z carry the phases i, j, k.
    Table1,
}

/// Validated noise parameters. Deserializes from
/// `{"p", "weights", "phase_mode", "p_rot", "axis", "angle", "rotation_slots"}`;
/// every key but `p` is optional.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNoiseModel", into = "RawNoiseModel")]
pub struct NoiseModel {
    p: f64,
    weights: [f64; 3],
    phase_mode: PhaseMode,
    p_rot: f64,
    axis: ImaginaryAxis,
    angle: AngleDist,
    rotation_slots: RotationSlots,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNoiseModel {
    p: f64,
    #[serde(default = "default_weights")]
    weights: [f64; 3],
    #[serde(default)]
    phase_mode: PhaseMode,
    #[serde(default)]
    p_rot: f64,
    #[serde(default = "default_axis")]
    axis: ImaginaryAxis,
    #[serde(default = "default_angle")]
    angle: AngleDist,
    #[serde(default)]
    rotation_slots: RotationSlots,
}

fn default_weights() -> [f64; 3] {
    [1.0 / 3.0; 3]
}

fn default_axis() -> ImaginaryAxis {
    ImaginaryAxis::K
}

fn default_angle() -> AngleDist {
    AngleDist::Fixed(0.0)
}

impl TryFrom<RawNoiseModel> for NoiseModel {
    type Error = Error;
    fn try_from(r: RawNoiseModel) -> Result<Self> {
        NoiseModel::depolarizing(r.p)?
            .with_weights(r.weights)?
            .with_phase_mode(r.phase_mode)
            .with_rotations(r.p_rot, r.axis, r.angle)
            .map(|m| m.with_rotation_slots(r.rotation_slots))
    }
}

impl From<NoiseModel> for RawNoiseModel {
    fn from(m: NoiseModel) -> Self {
        RawNoiseModel {
            p: m.p,
            weights: m.weights,
            phase_mode: m.phase_mode,
            p_rot: m.p_rot,
            axis: m.axis,
            angle: m.angle,
            rotation_slots: m.rotation_slots,
        }
    }
}

fn check_rate(key: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidNoise(format!("{key} = {v} is outside [0, 1]")))
    }
}

impl NoiseModel {
    /// Pauli rate `p` with equal X/Y/Z shares, no phases, no rotations.
    pub fn depolarizing(p: f64) -> Result<Self> {
        check_rate("p", p)?;
        Ok(NoiseModel {
            p,
            weights: default_weights(),
            phase_mode: PhaseMode::None,
            p_rot: 0.0,
            axis: default_axis(),
            angle: default_angle(),
            rotation_slots: RotationSlots::Zero,
        })
    }

    /// X errors only.
    pub fn bit_flip(p: f64) -> Result<Self> {
        NoiseModel::depolarizing(p)?.with_weights([1.0, 0.0, 0.0])
    }

    pub fn with_p(mut self, p: f64) -> Result<Self> {
        check_rate("p", p)?;
        self.p = p;
        Ok(self)
    }

    pub fn with_weights(mut self, weights: [f64; 3]) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidNoise(format!("weights {weights:?} must be nonnegative")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidNoise(format!("weights sum to {sum}, not 1")));
        }
        self.weights = weights;
        Ok(self)
    }

    pub fn with_phase_mode(mut self, mode: PhaseMode) -> Self {
        self.phase_mode = mode;
        self
    }

    pub fn with_rotations(mut self, p_rot: f64, axis: ImaginaryAxis, angle: AngleDist) -> Result<Self> {
        check_rate("p_rot", p_rot)?;
        match angle {
            AngleDist::Fixed(t) if !t.is_finite() => {
                return Err(Error::InvalidNoise(format!("angle.fixed = {t} is not finite")));
            }
            AngleDist::UniformMax(t) if !t.is_finite() || t < 0.0 => {
                return Err(Error::InvalidNoise(format!("angle.uniform_max = {t} must be finite and >= 0")));
            }
            _ => {}
        }
        self.p_rot = p_rot;
        self.axis = axis;
        self.angle = angle;
        Ok(self)
    }

    pub fn with_rotation_slots(mut self, slots: RotationSlots) -> Self {
        self.rotation_slots = slots;
        self
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn weights(&self) -> [f64; 3] {
        self.weights
    }

    pub fn phase_mode(&self) -> PhaseMode {
        self.phase_mode
    }

    pub fn p_rot(&self) -> f64 {
        self.p_rot
    }

    pub fn axis(&self) -> ImaginaryAxis {
        self.axis
    }

    pub fn angle(&self) -> AngleDist {
        self.angle
    }

    pub fn rotation_slots(&self) -> RotationSlots {
        self.rotation_slots
    }

    pub fn has_rotations(&self) -> bool {
        self.p_rot > 0.0
    }
}

/// `exp_axis(axis, angle)` applied as a left scalar to one qubit's slots.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    pub qubit: usize,
    pub axis: ImaginaryAxis,
    pub angle: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorEvent {
    pub pauli: PauliString,
    pub rotations: Vec<Rotation>,
    pub slots: RotationSlots,
}

impl ErrorEvent {
    pub fn identity(n: usize) -> Self {
        ErrorEvent { pauli: PauliString::identity(n), rotations: Vec::new(), slots: RotationSlots::Zero }
    }

    pub fn n(&self) -> usize {
        self.pauli.n()
    }

    pub fn is_identity(&self) -> bool {
        self.pauli.is_identity() && self.rotations.is_empty()
    }

    /// The same event with the Pauli part removed.
    pub fn rotations_only(&self) -> ErrorEvent {
        ErrorEvent { pauli: PauliString::identity(self.n()), rotations: self.rotations.clone(), slots: self.slots }
    }
}

/// The generator for trial `trial` of run `seed`: ChaCha8 seeded from `seed`,
/// stream `trial`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Draws one event. Each qubit consumes exactly four uniforms (error?,
/// letter, rotation?, angle) whatever the outcome, so events for different
/// rates under the same `(seed, trial)` are coupled.
pub fn sample_error(model: &NoiseModel, n: usize, seed: u64, trial: u64) -> ErrorEvent {
    let mut rng = trial_rng(seed, trial);
    let mut pauli = PauliString::identity(n);
    let mut phase = UnitPhase::ONE;
    let mut rotations = Vec::new();
    let [wx, wy, _] = model.weights;
    for qubit in 1..=n {
        let [u_err, u_letter, u_rot, u_angle]: [f64; 4] = std::array::from_fn(|_| rng.random());
        if u_err < model.p {
            let letter = if u_letter < wx {
                Pauli::X
            } else if u_letter < wx + wy {
                Pauli::Y
            } else {
                Pauli::Z
            };
            pauli.set_letter(qubit, letter);
            if model.phase_mode == PhaseMode::Table1 {
                phase = phase * letter.table1_phase();
            }
        }
        if u_rot < model.p_rot {
            let angle = match model.angle {
                AngleDist::Fixed(t) => t,
                AngleDist::UniformMax(t) => u_angle * t,
            };
            rotations.push(Rotation { qubit, axis: model.axis, angle });
        }
    }
    ErrorEvent { pauli: pauli.with_phase(phase), rotations, slots: model.rotation_slots }
}

/// Left-multiplies the amplitudes of `qubit` selected by `slots` by `q`.
fn rotate_slots(reg: &QRegister, qubit: usize, slots: RotationSlots, q: Quaternion) -> Result<QRegister> {
    reg.check_qubit(qubit)?;
    let mut out = reg.clone();
    let n = reg.n();
    for (index, a) in out.amps_mut().iter_mut().enumerate() {
        if slots.contains((index >> (n - qubit)) & 1) {
            *a = q * *a;
        }
    }
    Ok(out)
}

/// Pauli string (letters, then phase as a left scalar), then each rotation
/// in order.
pub fn apply_event(reg: &QRegister, e: &ErrorEvent) -> Result<QRegister> {
    let mut out = e.pauli.apply(reg)?;
    for r in &e.rotations {
        out = rotate_slots(&out, r.qubit, e.slots, Quaternion::exp_axis(r.axis, r.angle))?;
    }
    Ok(out)
}

/// Left-multiplies the selected slots by `exp_axis(axis, -angle)`.
pub fn correct_rotation(
    reg: &QRegister,
    qubit: usize,
    slots: RotationSlots,
    axis: ImaginaryAxis,
    angle: f64,
) -> Result<QRegister> {
    rotate_slots(reg, qubit, slots, Quaternion::exp_axis(axis, -angle))
}

/// Undoes every rotation of `e` in reverse order.
pub fn undo_rotations(reg: &QRegister, e: &ErrorEvent) -> Result<QRegister> {
    e.rotations.iter().rev().try_fold(reg.clone(), |acc, r| correct_rotation(&acc, r.qubit, e.slots, r.axis, r.angle))
}

/// A qubit slot whose j or k strength exceeds the reference by more than the
/// threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationFlag {
    pub qubit: usize,
    pub slot: u8,
    /// `Basis::J` or `Basis::K`.
    pub axis: Basis,
    /// Summed squared component over the slot in the inspected state.
    pub strength: f64,
    pub reference: f64,
}

impl RotationFlag {
    pub fn excess(&self) -> f64 {
        self.strength - self.reference
    }
}

/// Squared `axis` component summed over amplitudes with `bit` at `qubit`.
pub fn slot_strength(reg: &QRegister, qubit: usize, bit: u8, axis: Basis) -> Result<f64> {
    reg.check_qubit(qubit)?;
    Ok(reg
        .amps()
        .amps()
        .iter()
        .enumerate()
        .filter(|(index, _)| reg.bit(*index, qubit) == usize::from(bit))
        .map(|(_, a)| a.component(axis).powi(2))
        .sum())
}

/// Flags every `(qubit, slot, axis)` with `axis` in `{j, k}` whose strength
/// in `reg` exceeds the same quantity in `reference` by more than
/// `threshold`. Flags are ordered by qubit, slot, then j before k.
pub fn detect_rotations(reg: &QRegister, reference: &QRegister, threshold: f64) -> Result<Vec<RotationFlag>> {
    if reg.n() != reference.n() {
        return Err(Error::LengthMismatch { left: reference.n(), right: reg.n() });
    }
    let mut flags = Vec::new();
    for qubit in 1..=reg.n() {
        for slot in 0..2u8 {
            for axis in [Basis::J, Basis::K] {
                let strength = slot_strength(reg, qubit, slot, axis)?;
                let reference = slot_strength(reference, qubit, slot, axis)?;
                if strength - reference > threshold {
                    flags.push(RotationFlag { qubit, slot, axis, strength, reference });
                }
            }
        }
    }
    Ok(flags)
}

/// Estimates the rotation angle about `axis` that maps the reference slot
/// onto the current one: with `cur = r ref`, `sum cur conj(ref)` is
/// proportional to `r`.
pub fn estimate_angle(
    reg: &QRegister,
    reference: &QRegister,
    qubit: usize,
    slot: u8,
    axis: ImaginaryAxis,
) -> Result<f64> {
    reg.check_qubit(qubit)?;
    let overlap: Quaternion = reg
        .amps()
        .amps()
        .iter()
        .zip(reference.amps().amps())
        .enumerate()
        .filter(|(index, _)| reg.bit(*index, qubit) == usize::from(slot))
        .map(|(_, (c, r))| *c * r.conj())
        .sum();
    Ok(axis.project(&overlap).atan2(overlap.w))
}
