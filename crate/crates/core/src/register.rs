//! n-q-qubit state vectors.
//!
//! Basis states are ordered big-endian: qubit 1 is the leftmost label and the
//! most significant bit of the basis index, so `|10000>` is index 16 for
//! n = 5. Qubit indices in this module are 1-based.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result, ShapeError};
use crate::gates::{self, Gate};
use crate::hspace::{MulSide, QVector};
use crate::quaternion::{Basis, Quaternion};

/// Tolerance on `|norm - 1|` for registers built as normalized.
pub const NORM_TOL: f64 = 1e-10;

/// Threshold below which a real part counts as zero in [`QRegister::conditional_flip`].
pub const FLIP_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct QRegister {
    n: usize,
    amps: QVector,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementOutcome {
    pub bit: u8,
    pub probability: f64,
    pub post_state: QRegister,
}

impl QRegister {
    /// Wraps `amps` without checking the norm.
    pub fn new(n: usize, amps: QVector) -> Result<Self> {
        if n == 0 {
            return Err(ShapeError::Empty.into());
        }
        let dim = 1usize << n;
        if amps.dim() != dim {
            return Err(ShapeError::DimensionMismatch { expected: dim, found: amps.dim() }.into());
        }
        Ok(QRegister { n, amps })
    }

    /// Wraps `amps`, requiring `|real_norm_sq - 1| <= 1e-10`.
    pub fn normalized(n: usize, amps: QVector) -> Result<Self> {
        let reg = QRegister::new(n, amps)?;
        let norm = reg.norm_sq();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(reg)
    }

    /// Rescales `amps` by a real factor to unit norm.
    pub fn normalize(n: usize, amps: QVector) -> Result<Self> {
        let norm = amps.real_norm_sq();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        QRegister::new(n, amps.scale(1.0 / norm.sqrt()))
    }

    /// Computational basis state `|index>`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n == 0 {
            return Err(ShapeError::Empty.into());
        }
        QRegister::new(n, QVector::basis(1 << n, index)?)
    }

    /// Basis state from a bit string such as `"10110"`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let n = bits.len();
        let index = usize::from_str_radix(bits, 2).map_err(|_| Error::InvalidLabel(bits.to_string()))?;
        QRegister::basis(n, index)
    }

    /// Single q-qubit state `alpha|0> + beta|1>`.
    pub fn qubit(alpha: Quaternion, beta: Quaternion) -> Result<Self> {
        QRegister::new(1, QVector::new(vec![alpha, beta])?)
    }

    /// Tensor product of registers, first factor on the left.
    pub fn tensor(&self, other: &QRegister) -> QRegister {
        QRegister { n: self.n + other.n, amps: self.amps.tensor(&other.amps) }
    }

    /// Two-q-qubit logical state `a|00> + b i|01> + c j|10> + d k|11>` with
    /// real coefficients, normalized by a real factor.
    pub fn two_qubit_logical(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let amps = vec![Quaternion::real(a), Quaternion::I * b, Quaternion::J * c, Quaternion::K * d];
        QRegister::normalize(2, QVector::new(amps)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.dim()
    }

    pub fn amps(&self) -> &QVector {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> Quaternion {
        self.amps.amps()[index]
    }

    pub fn amps_mut(&mut self) -> &mut [Quaternion] {
        self.amps.amps_mut()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.real_norm_sq()
    }

    pub fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit == 0 || qubit > self.n {
            Err(Error::InvalidQubit { index: qubit, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Bit of basis `index` at 1-based `qubit`.
    pub fn bit(&self, index: usize, qubit: usize) -> usize {
        (index >> (self.n - qubit)) & 1
    }

    fn mask(&self, qubit: usize) -> usize {
        1 << (self.n - qubit)
    }

    /// Applies `gate` to `targets`; the first target is the most significant
    /// qubit of the gate's own basis. Equivalent to embedding the gate with
    /// identities (and a qubit permutation) and calling `matvec` with the
    /// gate's side.
    pub fn apply_gate(&self, gate: &Gate, targets: &[usize]) -> Result<QRegister> {
        if targets.len() != gate.arity() {
            return Err(Error::ArityMismatch {
                gate: gate.name().to_string(),
                arity: gate.arity(),
                given: targets.len(),
            });
        }
        for (i, t) in targets.iter().enumerate() {
            self.check_qubit(*t)?;
            if targets[..i].contains(t) {
                return Err(Error::DuplicateTarget);
            }
        }
        let masks: Vec<usize> = targets.iter().map(|t| self.mask(*t)).collect();
        let all_mask: usize = masks.iter().sum();
        let sub_dim = 1usize << targets.len();
        let spread = |sub: usize| -> usize {
            masks
                .iter()
                .enumerate()
                .filter(|(pos, _)| (sub >> (targets.len() - 1 - pos)) & 1 == 1)
                .map(|(_, m)| *m)
                .sum()
        };
        let gather = |index: usize| -> usize {
            masks.iter().fold(0, |acc, m| (acc << 1) | usize::from(index & m != 0))
        };
        let matrix = gate.matrix();
        let src = self.amps.amps();
        let mut out = vec![Quaternion::ZERO; self.dim()];
        for (r, slot) in out.iter_mut().enumerate() {
            let row = gather(r);
            let rest = r & !all_mask;
            let mut acc = Quaternion::ZERO;
            for col in 0..sub_dim {
                let entry = matrix.get(row, col);
                let amp = src[rest | spread(col)];
                acc += match gate.side() {
                    MulSide::Left => entry * amp,
                    MulSide::Right => amp * entry,
                };
            }
            *slot = acc;
        }
        QRegister::new(self.n, QVector::new(out)?)
    }

    /// Every amplitude multiplied by `q` from the left.
    pub fn left_scalar_mul(&self, q: Quaternion) -> QRegister {
        QRegister { n: self.n, amps: self.amps.left_scalar_mul(q) }
    }

    /// `[P(0), P(1)]` for `qubit`, each the summed `norm_sq` of the matching
    /// amplitudes divided by the register norm.
    pub fn probabilities(&self, qubit: usize) -> Result<[f64; 2]> {
        self.check_qubit(qubit)?;
        let total = self.norm_sq();
        if total == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let mut p = [0.0; 2];
        for (index, a) in self.amps.amps().iter().enumerate() {
            p[self.bit(index, qubit)] += a.norm_sq();
        }
        Ok([p[0] / total, p[1] / total])
    }

    /// Projective measurement of one qubit. The outcome is drawn from a
    /// ChaCha8 stream seeded with `seed`; the surviving branch is rescaled by
    /// the real factor `1/sqrt(P)`.
    pub fn measure_qubit(&self, qubit: usize, seed: u64) -> Result<MeasurementOutcome> {
        let probs = self.probabilities(qubit)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u: f64 = rng.random();
        let bit = if u < probs[0] { 0 } else { 1 };
        let probability = probs[bit];
        let scale = 1.0 / (probability * self.norm_sq()).sqrt();
        let amps: Vec<Quaternion> = self
            .amps
            .amps()
            .iter()
            .enumerate()
            .map(|(index, a)| if self.bit(index, qubit) == bit { a.scale(scale) } else { Quaternion::ZERO })
            .collect();
        Ok(MeasurementOutcome {
            bit: bit as u8,
            probability,
            post_state: QRegister::new(self.n, QVector::new(amps)?)?,
        })
    }

    /// Sum over all basis states of the squared `axis` component of the
    /// amplitude. For one q-qubit with j-component `c` along `J` this is `c²`.
    /// The sum is global; `qubit` is validated but does not restrict it.
    pub fn component_strength(&self, qubit: usize, axis: Basis) -> Result<f64> {
        self.check_qubit(qubit)?;
        if axis == Basis::One {
            return Err(Error::InvalidLabel("1".into()));
        }
        Ok(self.amps.amps().iter().map(|a| a.component(axis).powi(2)).sum())
    }

    /// Conditional flip: if any amplitude with `control = 1` has a real part
    /// of magnitude above 1e-12, apply X to `target`; otherwise return the
    /// state unchanged. This map is not linear.
    pub fn conditional_flip(&self, control: usize, target: usize) -> Result<QRegister> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::DuplicateTarget);
        }
        let fires = self
            .amps
            .amps()
            .iter()
            .enumerate()
            .any(|(index, a)| self.bit(index, control) == 1 && a.w.abs() > FLIP_TOL);
        if fires {
            self.apply_gate(&gates::pauli_x(), &[target])
        } else {
            Ok(self.clone())
        }
    }

    /// Renders non-zero amplitudes as `(a)|bits> + (b)|bits>`.
    pub fn ket_string(&self) -> String {
        let terms: Vec<String> = self
            .amps
            .amps()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sq() > 0.0)
            .map(|(index, a)| format!("({a})|{:0width$b}>", index, width = self.n))
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

/// `CNOT_H (H_H ⊗ I)|00>`.
pub fn bell_prepare() -> QRegister {
    bell_prepare_with(&gates::cnot_h())
}

/// The Bell circuit with an arbitrary entangling gate in place of `CNOT_H`.
pub fn bell_prepare_with(cnot: &Gate) -> QRegister {
    let start = QRegister::basis(2, 0).expect("2 qubits");
    start
        .apply_gate(&gates::hadamard_h(), &[1])
        .and_then(|r| r.apply_gate(cnot, &[1, 2]))
        .expect("valid targets")
}
