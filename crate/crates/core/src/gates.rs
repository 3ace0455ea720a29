//! The gate library: quaternionic Hadamard-like and CNOT-like gates, the T
//! gate, the Pauli matrices and their quaternion-phased extensions.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use crate::error::{Error, Result};
use crate::hspace::{MulSide, QMatrix, UnitarityReport};
use crate::quaternion::{ImaginaryAxis, Quaternion, DEFAULT_TOL};

const O: Quaternion = Quaternion::ZERO;
const ONE: Quaternion = Quaternion::ONE;
const I: Quaternion = Quaternion::I;
const J: Quaternion = Quaternion::J;
const K: Quaternion = Quaternion::K;

/// A 1- or 2-qubit gate together with the side its entries act from.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    name: String,
    matrix: QMatrix,
    side: MulSide,
    arity: usize,
}

impl Gate {
    pub fn new(name: impl Into<String>, matrix: QMatrix, side: MulSide) -> Result<Self> {
        let arity = match (matrix.rows(), matrix.cols()) {
            (2, 2) => 1,
            (4, 4) => 2,
            (rows, cols) => {
                return Err(crate::error::ShapeError::NotSquare { rows, cols }.into());
            }
        };
        Ok(Gate { name: name.into(), matrix, side, arity })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn side(&self) -> MulSide {
        self.side
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_unitary(&self, tol: f64) -> UnitarityReport {
        self.matrix.is_unitary(tol).expect("gate matrices are square")
    }

    /// Re-expresses every entry `w + x i + y j + z k` as
    /// `w + x map(i) + y map(j) + z map(k)`; unmapped units stay put.
    pub fn substitute_units(&self, map: &UnitSubstitution) -> Result<Gate> {
        map.validate()?;
        let si = map.i.unwrap_or(I);
        let sj = map.j.unwrap_or(J);
        let sk = map.k.unwrap_or(K);
        let matrix = self.matrix.map(|e| Quaternion::real(e.w) + si * e.x + sj * e.y + sk * e.z);
        Ok(Gate { name: format!("{}[{}]", self.name, map), matrix, side: self.side, arity: self.arity })
    }
}

fn gate(name: &str, rows: Vec<Vec<Quaternion>>, side: MulSide) -> Gate {
    let matrix = QMatrix::from_rows(rows).expect("library matrices are rectangular");
    Gate::new(name, matrix, side).expect("library gates are 2x2 or 4x4")
}

/// Partial assignment `{i, j, k} -> unit quaternion`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct UnitSubstitution {
    pub i: Option<Quaternion>,
    pub j: Option<Quaternion>,
    pub k: Option<Quaternion>,
}

impl UnitSubstitution {
    /// `j = k = -i`, which turns the quaternionic Bell circuit into the
    /// standard one.
    pub fn j_k_to_minus_i() -> Self {
        UnitSubstitution { i: None, j: Some(-I), k: Some(-I) }
    }

    fn validate(&self) -> Result<()> {
        for (unit, target) in [('i', self.i), ('j', self.j), ('k', self.k)] {
            if let Some(q) = target {
                if !q.is_finite() || (q.norm_sq() - 1.0).abs() > DEFAULT_TOL {
                    return Err(Error::NonUnitSubstitution { unit });
                }
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for UnitSubstitution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = [('i', self.i), ('j', self.j), ('k', self.k)]
            .iter()
            .filter_map(|(u, t)| t.map(|q| format!("{u}={q}")))
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// `(1/sqrt2) [[1, i], [i, -1]]`, applied with left entry multiplication.
/// Not unitary under `U U† = I`; see [`gate_audit`].
pub fn hadamard_h() -> Gate {
    let s = Quaternion::real(FRAC_1_SQRT_2);
    gate("H_H", vec![vec![s, s * I], vec![s * I, -s]], MulSide::Left)
}

/// The real Hadamard matrix.
pub fn hadamard() -> Gate {
    let s = Quaternion::real(FRAC_1_SQRT_2);
    gate("H", vec![vec![s, s], vec![s, -s]], MulSide::Left)
}

/// `[[1,0,0,0],[0,i,0,0],[0,0,0,j],[0,0,k,0]]`, applied with right entry
/// multiplication.
pub fn cnot_h() -> Gate {
    gate(
        "CNOT_H",
        vec![vec![ONE, O, O, O], vec![O, I, O, O], vec![O, O, O, J], vec![O, O, K, O]],
        MulSide::Right,
    )
}

pub fn cnot() -> Gate {
    gate(
        "CNOT",
        vec![vec![ONE, O, O, O], vec![O, ONE, O, O], vec![O, O, O, ONE], vec![O, O, ONE, O]],
        MulSide::Left,
    )
}

/// `diag(1, e^{i pi/4})`.
pub fn t_gate() -> Gate {
    gate("T", vec![vec![ONE, O], vec![O, Quaternion::exp_axis(ImaginaryAxis::I, FRAC_PI_4)]], MulSide::Left)
}

pub fn identity() -> Gate {
    gate("I", vec![vec![ONE, O], vec![O, ONE]], MulSide::Left)
}

pub fn pauli_x() -> Gate {
    gate("X", vec![vec![O, ONE], vec![ONE, O]], MulSide::Left)
}

pub fn pauli_y() -> Gate {
    gate("Y", vec![vec![O, -I], vec![I, O]], MulSide::Left)
}

pub fn pauli_z() -> Gate {
    gate("Z", vec![vec![ONE, O], vec![O, -ONE]], MulSide::Left)
}

fn phased(name: &str, unit: Quaternion, base: Gate) -> Gate {
    Gate::new(name, base.matrix.left_scalar_mul(unit), MulSide::Left).expect("2x2")
}

/// `Q_X = i X`
pub fn q_x() -> Gate {
    phased("Q_X", I, pauli_x())
}

/// `Q_Y = j Y`
pub fn q_y() -> Gate {
    phased("Q_Y", J, pauli_y())
}

/// `Q_Z = k Z`
pub fn q_z() -> Gate {
    phased("Q_Z", K, pauli_z())
}

/// `Q_I = I`
pub fn q_i() -> Gate {
    Gate { name: "Q_I".into(), ..identity() }
}

/// Unitarity and phase-alignment verdict for one library gate.
#[derive(Clone, Debug, PartialEq)]
pub struct GateAudit {
    pub name: String,
    pub side: MulSide,
    pub unitarity: UnitarityReport,
    pub phase_aligned: bool,
}

/// Audits every library gate in a fixed order.
pub fn gate_audit(tol: f64) -> Vec<GateAudit> {
    [hadamard_h(), cnot_h(), t_gate(), pauli_x(), pauli_y(), pauli_z(), q_x(), q_y(), q_z(), q_i()]
        .into_iter()
        .map(|g| GateAudit {
            name: g.name.clone(),
            side: g.side,
            unitarity: g.is_unitary(tol),
            phase_aligned: g.matrix.phase_alignment_check(tol).expect("square"),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_from_shape() {
        assert_eq!(hadamard_h().arity(), 1);
        assert_eq!(cnot_h().arity(), 2);
        let bad = QMatrix::identity(3).unwrap();
        assert!(Gate::new("bad", bad, MulSide::Left).is_err());
    }

    #[test]
    fn audit_verdicts() {
        for a in gate_audit(1e-12) {
            let expect_pass = a.name != "H_H";
            assert_eq!(a.unitarity.pass, expect_pass, "{}", a.name);
        }
        let audit = gate_audit(1e-12);
        assert_eq!(audit, gate_audit(1e-12));
        let aligned: Vec<_> = audit.iter().filter(|a| a.phase_aligned).map(|a| a.name.as_str()).collect();
        assert_eq!(aligned, ["H_H", "T", "X", "Y", "Z", "Q_X", "Q_I"]);
    }

    #[test]
    fn phased_paulis() {
        assert_eq!(q_y().matrix().get(0, 1), K);
        assert_eq!(q_y().matrix().get(1, 0), -K);
        assert_eq!(q_z().matrix().get(1, 1), -K);
    }

    #[test]
    fn substitution() {
        let g = cnot_h();
        assert_eq!(g.substitute_units(&UnitSubstitution::default()).unwrap().matrix(), g.matrix());
        let s = g.substitute_units(&UnitSubstitution::j_k_to_minus_i()).unwrap();
        assert_eq!(s.matrix().get(3, 2), -I);
        assert_eq!(s.matrix().get(2, 3), -I);
        assert_eq!(s.matrix().get(1, 1), I);
        let bad = UnitSubstitution { k: Some(Quaternion::real(2.0)), ..Default::default() };
        assert_eq!(g.substitute_units(&bad), Err(Error::NonUnitSubstitution { unit: 'k' }));
    }
}
