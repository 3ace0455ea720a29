//! Dense linear algebra on quaternionic Hilbert spaces.
//!
//! Vectors are right modules over the quaternions: scalars multiply state
//! vectors from the right, and the inner product is conjugate-linear in its
//! first slot and right-linear in its second. Because matrix entries and
//! amplitudes do not commute, every matrix-vector product names the side on
//! which the entry multiplies the amplitude ([`MulSide`]).

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ShapeError;
use crate::quaternion::Quaternion;

/// Which side a matrix entry multiplies an amplitude from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MulSide {
    /// `out_r = sum_c A[r][c] * psi_c`
    Left,
    /// `out_r = sum_c psi_c * A[r][c]`
    Right,
}

/// A state vector with quaternion amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct QVector {
    amps: Vec<Quaternion>,
}

impl QVector {
    pub fn new(amps: Vec<Quaternion>) -> Result<Self, ShapeError> {
        if amps.is_empty() {
            return Err(ShapeError::Empty);
        }
        Ok(QVector { amps })
    }

    pub fn zeros(dim: usize) -> Result<Self, ShapeError> {
        QVector::new(vec![Quaternion::ZERO; dim])
    }

    /// The `index`-th standard basis vector of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self, ShapeError> {
        let mut v = QVector::zeros(dim)?;
        if index >= dim {
            return Err(ShapeError::DimensionMismatch { expected: dim, found: index + 1 });
        }
        v.amps[index] = Quaternion::ONE;
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Quaternion] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [Quaternion] {
        &mut self.amps
    }

    pub fn into_amps(self) -> Vec<Quaternion> {
        self.amps
    }

    /// `<phi|psi> = sum_n conj(phi_n) psi_n`.
    pub fn inner_product(&self, psi: &QVector) -> Result<Quaternion, ShapeError> {
        check_dim(self.dim(), psi.dim())?;
        Ok(self.amps.iter().zip(&psi.amps).map(|(a, b)| a.conj() * *b).sum())
    }

    /// `Re <psi|psi>`, the sum of squared components of every amplitude.
    pub fn real_norm_sq(&self) -> f64 {
        self.amps.iter().map(Quaternion::norm_sq).sum()
    }

    /// `psi * q`: every amplitude multiplied by `q` on the right.
    pub fn right_scalar_mul(&self, q: Quaternion) -> QVector {
        QVector { amps: self.amps.iter().map(|a| *a * q).collect() }
    }

    /// `q psi`: every amplitude multiplied by `q` on the left. Not a module
    /// operation, but it is how the quaternionic Pauli-like operators and the
    /// rotation errors act.
    pub fn left_scalar_mul(&self, q: Quaternion) -> QVector {
        QVector { amps: self.amps.iter().map(|a| q * *a).collect() }
    }

    pub fn scale(&self, s: f64) -> QVector {
        QVector { amps: self.amps.iter().map(|a| a.scale(s)).collect() }
    }

    /// Kronecker product, `self` index major.
    pub fn tensor(&self, other: &QVector) -> QVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(*a * *b);
            }
        }
        QVector { amps }
    }

    /// Largest per-amplitude distance to `other`.
    pub fn max_dist(&self, other: &QVector) -> Result<f64, ShapeError> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.dist(b)).fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &QVector, tol: f64) -> bool {
        self.max_dist(other).map(|d| d <= tol).unwrap_or(false)
    }
}

/// A dense row-major quaternion matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Quaternion>,
}

/// Outcome of checking `U U† = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitarityReport {
    pub pass: bool,
    /// Largest quaternion-norm deviation of `U U†` from the identity.
    pub max_deviation: f64,
    /// `(row, col)` of the worst entry.
    pub worst_entry: (usize, usize),
    /// Value of `U U†` at `worst_entry`.
    pub worst_value: Quaternion,
    pub tol: f64,
}

/// Truncated power series `sum_{m=0}^{terms} A^m / m!` and a bound on the
/// neglected tail.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixExp {
    pub value: QMatrix,
    pub residual_bound: f64,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Quaternion>) -> Result<Self, ShapeError> {
        if rows == 0 || cols == 0 {
            return Err(ShapeError::Empty);
        }
        if entries.len() != rows * cols {
            return Err(ShapeError::EntryCount { rows, cols, found: entries.len() });
        }
        Ok(QMatrix { rows, cols, entries })
    }

    /// Builds a matrix from nested rows; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Result<Self, ShapeError> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(ShapeError::DimensionMismatch { expected: c, found: bad.len() });
        }
        QMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self, ShapeError> {
        QMatrix::new(rows, cols, vec![Quaternion::ZERO; rows * cols])
    }

    pub fn identity(dim: usize) -> Result<Self, ShapeError> {
        let mut m = QMatrix::zeros(dim, dim)?;
        for d in 0..dim {
            m.entries[d * dim + d] = Quaternion::ONE;
        }
        Ok(m)
    }

    pub fn diag(values: &[Quaternion]) -> Result<Self, ShapeError> {
        let n = values.len();
        let mut m = QMatrix::zeros(n, n)?;
        for (d, v) in values.iter().enumerate() {
            m.entries[d * n + d] = *v;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Quaternion {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, q: Quaternion) {
        self.entries[r * self.cols + c] = q;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn require_square(&self) -> Result<(), ShapeError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(ShapeError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Applies `f` to every entry.
    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|q| f(*q)).collect() }
    }

    /// Every entry left-multiplied by `q`.
    pub fn left_scalar_mul(&self, q: Quaternion) -> QMatrix {
        self.map(|e| q * e)
    }

    pub fn scale(&self, s: f64) -> QMatrix {
        self.map(|e| e.scale(s))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> QMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for r in 0..self.cols {
            for c in 0..self.rows {
                entries.push(self.get(c, r).conj());
            }
        }
        QMatrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn add(&self, other: &QMatrix) -> Result<QMatrix, ShapeError> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        Ok(QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| *a + *b).collect(),
        })
    }

    /// Matrix product with `(AB)[r][c] = sum_m A[r][m] * B[m][c]`.
    pub fn matmul(&self, other: &QMatrix) -> Result<QMatrix, ShapeError> {
        check_dim(self.cols, other.rows)?;
        let mut out = QMatrix::zeros(self.rows, other.cols)?;
        for r in 0..self.rows {
            for c in 0..other.cols {
                let v = (0..self.cols).map(|m| self.get(r, m) * other.get(m, c)).sum();
                out.set(r, c, v);
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, psi: &QVector, side: MulSide) -> Result<QVector, ShapeError> {
        check_dim(self.cols, psi.dim())?;
        let amps = (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| match side {
                        MulSide::Left => self.get(r, c) * psi.amps[c],
                        MulSide::Right => psi.amps[c] * self.get(r, c),
                    })
                    .sum()
            })
            .collect();
        Ok(QVector { amps })
    }

    /// Kronecker product with `self` index major.
    pub fn tensor(&self, other: &QMatrix) -> QMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut entries = vec![Quaternion::ZERO; rows * cols];
        for ar in 0..self.rows {
            for ac in 0..self.cols {
                let a = self.get(ar, ac);
                for br in 0..other.rows {
                    for bc in 0..other.cols {
                        let r = ar * other.rows + br;
                        let c = ac * other.cols + bc;
                        entries[r * cols + c] = a * other.get(br, bc);
                    }
                }
            }
        }
        QMatrix { rows, cols, entries }
    }

    /// Checks `U U† = I`, reporting the worst entry.
    pub fn is_unitary(&self, tol: f64) -> Result<UnitarityReport, ShapeError> {
        self.require_square()?;
        let product = self.matmul(&self.adjoint())?;
        let mut worst = (0, 0);
        let mut max_dev = -1.0;
        for r in 0..self.rows {
            for c in 0..self.cols {
                let target = if r == c { Quaternion::ONE } else { Quaternion::ZERO };
                let dev = product.get(r, c).dist(&target);
                if dev > max_dev {
                    max_dev = dev;
                    worst = (r, c);
                }
            }
        }
        Ok(UnitarityReport {
            pass: max_dev <= tol,
            max_deviation: max_dev,
            worst_entry: worst,
            worst_value: product.get(worst.0, worst.1),
            tol,
        })
    }

    /// True iff every entry commutes with `i` within `tol`.
    pub fn phase_alignment_check(&self, tol: f64) -> Result<bool, ShapeError> {
        self.require_square()?;
        Ok(self.entries.iter().all(|q| q.commutes_with_i(tol)))
    }

    /// Frobenius norm; submultiplicative for quaternion matrices.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(Quaternion::norm_sq).sum::<f64>().sqrt()
    }

    /// Truncated Taylor series of the matrix exponential. `terms` is the
    /// highest power kept; the reported residual bounds the Frobenius norm of
    /// the discarded tail by `a^(terms+1)/(terms+1)! * e^a` with `a = |A|_F`.
    pub fn matrix_exp(&self, terms: usize) -> Result<MatrixExp, ShapeError> {
        self.require_square()?;
        let n = self.rows;
        let mut sum = QMatrix::identity(n)?;
        let mut power_term = QMatrix::identity(n)?;
        for m in 1..=terms.max(1) {
            power_term = power_term.matmul(self)?.scale(1.0 / m as f64);
            sum = sum.add(&power_term)?;
        }
        let a = self.frobenius_norm();
        let next = terms.max(1) + 1;
        let mut tail = a.exp();
        for m in 1..=next {
            tail *= a / m as f64;
        }
        Ok(MatrixExp { value: sum, residual_bound: tail })
    }

    pub fn max_dist(&self, other: &QMatrix) -> Result<f64, ShapeError> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| a.dist(b)).fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &QMatrix, tol: f64) -> bool {
        self.max_dist(other).map(|d| d <= tol).unwrap_or(false)
    }
}

fn check_dim(expected: usize, found: usize) -> Result<(), ShapeError> {
    if expected == found {
        Ok(())
    } else {
        Err(ShapeError::DimensionMismatch { expected, found })
    }
}

/// Wire form shared by matrices and (column) vectors:
/// `{"rows": r, "cols": c, "entries": [[w,x,y,z], ...]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 4]>,
}

fn decode_entries<E: serde::de::Error>(raw: Vec<[f64; 4]>) -> Result<Vec<Quaternion>, E> {
    raw.into_iter()
        .map(|c| Quaternion::try_new(c[0], c[1], c[2], c[3]).map_err(E::custom))
        .collect()
}

impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|q| (*q).into()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        let entries = decode_entries(raw.entries)?;
        QMatrix::new(raw.rows, raw.cols, entries).map_err(D::Error::custom)
    }
}

/// Vectors serialize as single-column matrices.
impl Serialize for QVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson { rows: self.dim(), cols: 1, entries: self.amps.iter().map(|q| (*q).into()).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        if raw.cols != 1 || raw.entries.len() != raw.rows {
            return Err(D::Error::custom("a vector must be a single column with rows entries"));
        }
        QVector::new(decode_entries(raw.entries)?).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::ImaginaryAxis;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;
    const ONE: Quaternion = Quaternion::ONE;
    const O: Quaternion = Quaternion::ZERO;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    fn v(amps: &[Quaternion]) -> QVector {
        QVector::new(amps.to_vec()).unwrap()
    }

    fn cnot_h() -> QMatrix {
        QMatrix::from_rows(vec![
            vec![ONE, O, O, O],
            vec![O, I, O, O],
            vec![O, O, O, J],
            vec![O, O, K, O],
        ])
        .unwrap()
    }

    fn hadamard_h() -> QMatrix {
        QMatrix::from_rows(vec![vec![ONE, I], vec![I, -ONE]]).unwrap().scale(FRAC_1_SQRT_2)
    }

    #[test]
    fn inner_products() {
        let e0 = QVector::basis(2, 0).unwrap();
        let e1 = QVector::basis(2, 1).unwrap();
        assert_eq!(e0.inner_product(&e0).unwrap(), ONE);
        assert_eq!(e0.inner_product(&e1).unwrap(), O);
        // conj(1) j + conj(i) 1 = j - i
        let phi = v(&[ONE, I]);
        let psi = v(&[J, ONE]);
        assert_eq!(phi.inner_product(&psi).unwrap(), q(0.0, -1.0, 1.0, 0.0));
        assert_eq!(psi.inner_product(&phi).unwrap(), phi.inner_product(&psi).unwrap().conj());
        assert!(matches!(
            e0.inner_product(&QVector::basis(4, 0).unwrap()),
            Err(ShapeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn norms() {
        let psi = v(&[ONE.scale(FRAC_1_SQRT_2), I.scale(FRAC_1_SQRT_2)]);
        assert!((psi.real_norm_sq() - 1.0).abs() < 1e-15);
        assert_eq!(QVector::zeros(3).unwrap().real_norm_sq(), 0.0);
        assert_eq!(v(&[q(1.0, 1.0, 0.0, 0.0), q(0.0, 0.0, 1.0, 1.0)]).real_norm_sq(), 4.0);
    }

    #[test]
    fn right_scalars() {
        let e0 = QVector::basis(2, 0).unwrap();
        assert_eq!(e0.right_scalar_mul(J).amps()[0], J);
        assert_eq!(e0.right_scalar_mul(ONE), e0);
        assert_eq!(v(&[I, O]).right_scalar_mul(J).amps()[0], K);
    }

    #[test]
    fn adjoints() {
        let d = QMatrix::diag(&[ONE, I]).unwrap();
        assert_eq!(d.adjoint(), QMatrix::diag(&[ONE, -I]).unwrap());
        let c = cnot_h();
        assert_eq!(c.adjoint().adjoint(), c);
        let expected = QMatrix::from_rows(vec![
            vec![ONE, O, O, O],
            vec![O, -I, O, O],
            vec![O, O, O, -K],
            vec![O, O, -J, O],
        ])
        .unwrap();
        assert_eq!(c.adjoint(), expected);
    }

    #[test]
    fn hadamard_worked_example_left() {
        let (w, x, y, z) = (0.3, -0.7, 1.1, 0.4);
        let psi = v(&[Quaternion::real(w), q(0.0, x, y, z)]);
        let out = hadamard_h().matvec(&psi, MulSide::Left).unwrap();
        // alpha = (w - x + y k - z j)/sqrt2, beta = ((w - x) i - y j - z k)/sqrt2
        let alpha = q(w - x, 0.0, -z, y).scale(FRAC_1_SQRT_2);
        let beta = q(0.0, w - x, -y, -z).scale(FRAC_1_SQRT_2);
        assert!(out.amps()[0].approx_eq(&alpha, 1e-12));
        assert!(out.amps()[1].approx_eq(&beta, 1e-12));
    }

    #[test]
    fn identity_either_side() {
        let psi = v(&[q(1.0, 2.0, 3.0, 4.0), q(-1.0, 0.5, 0.0, 2.0)]);
        let id = QMatrix::identity(2).unwrap();
        assert_eq!(id.matvec(&psi, MulSide::Left).unwrap(), psi);
        assert_eq!(id.matvec(&psi, MulSide::Right).unwrap(), psi);
    }

    #[test]
    fn cnot_worked_example_right() {
        let (w, x, y, z) = (0.2, 0.5, -0.3, 0.8);
        let psi = v(&[Quaternion::real(w), O, q(0.0, x, y, z), O]);
        let out = cnot_h().matvec(&psi, MulSide::Right).unwrap();
        assert_eq!(out.amps()[0], Quaternion::real(w));
        assert!(out.amps()[3].approx_eq(&q(-z, y, -x, 0.0), 1e-15));
        assert_eq!(out.amps()[1], O);
        assert_eq!(out.amps()[2], O);
    }

    #[test]
    fn sides_differ() {
        let m = QMatrix::diag(&[K]).unwrap();
        let psi = v(&[I]);
        assert_eq!(m.matvec(&psi, MulSide::Left).unwrap().amps()[0], J);
        assert_eq!(m.matvec(&psi, MulSide::Right).unwrap().amps()[0], -J);
    }

    #[test]
    fn unitarity_audit() {
        let rep = cnot_h().is_unitary(1e-12).unwrap();
        assert!(rep.pass);
        assert!(rep.max_deviation <= 1e-12);
        assert!(QMatrix::identity(3).unwrap().is_unitary(1e-12).unwrap().pass);

        let rep = hadamard_h().is_unitary(1e-12).unwrap();
        assert!(!rep.pass);
        assert!((rep.max_deviation - 1.0).abs() < 1e-12);
        assert_eq!(rep.worst_entry, (0, 1));
        assert!(rep.worst_value.approx_eq(&-I, 1e-12));

        let rect = QMatrix::zeros(2, 3).unwrap();
        assert!(matches!(rect.is_unitary(1e-12), Err(ShapeError::NotSquare { .. })));
    }

    #[test]
    fn phase_alignment() {
        let t = QMatrix::diag(&[ONE, Quaternion::exp_axis(ImaginaryAxis::I, std::f64::consts::FRAC_PI_4)]).unwrap();
        assert!(t.phase_alignment_check(1e-12).unwrap());
        assert!(!cnot_h().phase_alignment_check(1e-12).unwrap());
        assert!(QMatrix::identity(2).unwrap().phase_alignment_check(1e-12).unwrap());
    }

    #[test]
    fn exponentials() {
        let zero = QMatrix::zeros(2, 2).unwrap();
        assert_eq!(zero.matrix_exp(10).unwrap().value, QMatrix::identity(2).unwrap());

        let a = QMatrix::diag(&[J.scale(FRAC_PI_2), O]).unwrap();
        let e = a.matrix_exp(20).unwrap();
        assert!(e.value.approx_eq(&QMatrix::diag(&[J, ONE]).unwrap(), 1e-10));
        assert!(e.residual_bound < 1e-10);

        let theta = 0.9;
        let a = QMatrix::diag(&[I.scale(-theta), I.scale(-theta)]).unwrap();
        let e = a.matrix_exp(20).unwrap();
        let c = q(theta.cos(), -theta.sin(), 0.0, 0.0);
        assert!(e.value.approx_eq(&QMatrix::diag(&[c, c]).unwrap(), 1e-10));
        assert!(QMatrix::zeros(1, 2).unwrap().matrix_exp(3).is_err());
    }

    #[test]
    fn tensors() {
        let id2 = QMatrix::identity(2).unwrap();
        assert_eq!(id2.tensor(&id2), QMatrix::identity(4).unwrap());
        let out = hadamard_h().tensor(&id2).matvec(&QVector::basis(4, 0).unwrap(), MulSide::Left).unwrap();
        let expected = v(&[ONE, O, I, O]).scale(FRAC_1_SQRT_2);
        assert!(out.approx_eq(&expected, 1e-15));
        let d = QMatrix::diag(&[ONE, I]).unwrap().tensor(&QMatrix::diag(&[ONE, J]).unwrap());
        assert_eq!(d, QMatrix::diag(&[ONE, J, I, K]).unwrap());
    }

    #[test]
    fn json_shape() {
        let m = QMatrix::diag(&[ONE, I]).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(
            text,
            r#"{"rows":2,"cols":2,"entries":[[1.0,0.0,0.0,0.0],[0.0,0.0,0.0,0.0],[0.0,0.0,0.0,0.0],[0.0,1.0,0.0,0.0]]}"#
        );
        let back: QMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<QMatrix>(r#"{"rows":2,"cols":2,"entries":[[1,0,0,0]]}"#).is_err());
        let psi = v(&[ONE, J]);
        let back: QVector = serde_json::from_str(&serde_json::to_string(&psi).unwrap()).unwrap();
        assert_eq!(back, psi);
    }
}
