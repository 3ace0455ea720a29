//! Hamilton quaternions over `f64`.
//!
//! Every amplitude, matrix entry and phase in the crate is a [`Quaternion`].
//! Multiplication is non-commutative (`i*j = k` but `j*i = -k`), so the order
//! of operands is always significant.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::QuatError;

/// Library-wide absolute tolerance for unit-scale comparisons.
pub const DEFAULT_TOL: f64 = 1e-12;

/// A quaternion `w + x i + y j + z k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// One of the four quaternion basis elements `1, i, j, k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    #[serde(rename = "1")]
    One,
    I,
    J,
    K,
}

impl Basis {
    pub const ALL: [Basis; 4] = [Basis::One, Basis::I, Basis::J, Basis::K];

    pub fn unit(self) -> Quaternion {
        match self {
            Basis::One => Quaternion::ONE,
            Basis::I => Quaternion::I,
            Basis::J => Quaternion::J,
            Basis::K => Quaternion::K,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Basis::One => "1",
            Basis::I => "i",
            Basis::J => "j",
            Basis::K => "k",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Basis {
    type Err = QuatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "1" => Ok(Basis::One),
            "i" => Ok(Basis::I),
            "j" => Ok(Basis::J),
            "k" => Ok(Basis::K),
            other => Err(QuatError::Parse(format!("unknown quaternion unit `{other}`"))),
        }
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    /// Unchecked constructor for literal values. Use [`Quaternion::try_new`]
    /// for data from outside the crate.
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    /// Constructor that rejects NaN and infinite components.
    pub fn try_new(w: f64, x: f64, y: f64, z: f64) -> Result<Self, QuatError> {
        let q = Quaternion { w, x, y, z };
        if q.is_finite() {
            Ok(q)
        } else {
            Err(QuatError::NonFinite)
        }
    }

    pub const fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    /// `w² + x² + y² + z²`, the real value of `q * conj(q)`.
    pub fn norm_sq(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn inverse(&self) -> Result<Self, QuatError> {
        let n = self.norm_sq();
        if n == 0.0 {
            return Err(QuatError::ZeroInverse);
        }
        Ok(self.conj().scale(1.0 / n))
    }

    pub fn normalized(&self) -> Result<Self, QuatError> {
        let n = self.norm();
        if n == 0.0 {
            return Err(QuatError::ZeroInverse);
        }
        Ok(self.scale(1.0 / n))
    }

    pub fn scale(&self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Reads the coefficient of one basis element.
    pub fn component(&self, axis: Basis) -> f64 {
        match axis {
            Basis::One => self.w,
            Basis::I => self.x,
            Basis::J => self.y,
            Basis::K => self.z,
        }
    }

    /// Pure-imaginary part `x i + y j + z k`.
    pub fn vector(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// `exp(theta * u) = cos(theta) + u sin(theta)` for a unit imaginary axis `u`.
    pub fn exp_axis(axis: ImaginaryAxis, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Quaternion::new(c, axis.x * s, axis.y * s, axis.z * s)
    }

    /// True when `q` commutes with `i`, i.e. its j and k parts vanish.
    pub fn commutes_with_i(&self, tol: f64) -> bool {
        self.y.abs() <= tol && self.z.abs() <= tol
    }

    pub fn approx_eq(&self, other: &Quaternion, tol: f64) -> bool {
        (self.w - other.w).abs() <= tol
            && (self.x - other.x).abs() <= tol
            && (self.y - other.y).abs() <= tol
            && (self.z - other.z).abs() <= tol
    }

    /// Distance in the Euclidean quaternion norm.
    pub fn dist(&self, other: &Quaternion) -> f64 {
        (*self - *other).norm()
    }
}

impl From<[f64; 4]> for Quaternion {
    fn from(c: [f64; 4]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Quaternion::real(w)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, b: Quaternion) -> Quaternion {
        Quaternion::new(self.w + b.w, self.x + b.x, self.y + b.y, self.z + b.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, b: Quaternion) {
        *self = *self + b;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, b: Quaternion) -> Quaternion {
        Quaternion::new(self.w - b.w, self.x - b.x, self.y - b.y, self.z - b.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, b: Quaternion) -> Quaternion {
        let a = self;
        Quaternion::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl MulAssign for Quaternion {
    fn mul_assign(&mut self, b: Quaternion) {
        *self = *self * b;
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        self.scale(s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q.scale(self)
    }
}

impl std::iter::Sum for Quaternion {
    fn sum<I: Iterator<Item = Quaternion>>(iter: I) -> Quaternion {
        iter.fold(Quaternion::ZERO, |acc, q| acc + q)
    }
}

fn fmt_real(v: f64) -> String {
    // -0 prints as "-0"; fold it into 0 so signs stay explicit and stable.
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v}")
}

/// Renders as `w+xi+yj+zk` with explicit signs, e.g. `1-2i+0j+3k`.
impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_real(self.w))?;
        for (v, unit) in [(self.x, 'i'), (self.y, 'j'), (self.z, 'k')] {
            let s = fmt_real(v);
            if s.starts_with('-') {
                write!(f, "{s}{unit}")?;
            } else {
                write!(f, "+{s}{unit}")?;
            }
        }
        Ok(())
    }
}

/// Parses a sum of signed terms such as `1-2i+0j+3k`, `-j`, `0.5+1e-3k`.
/// Terms may appear in any order; repeated units accumulate.
impl FromStr for Quaternion {
    type Err = QuatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(QuatError::Parse("empty quaternion literal".into()));
        }
        let bytes = text.as_bytes();
        let mut terms = Vec::new();
        let mut start = 0;
        for idx in 1..bytes.len() {
            let c = bytes[idx];
            let prev = bytes[idx - 1];
            if (c == b'+' || c == b'-') && prev != b'e' && prev != b'E' {
                terms.push(&text[start..idx]);
                start = idx;
            }
        }
        terms.push(&text[start..]);

        let mut q = Quaternion::ZERO;
        for term in terms {
            let (body, unit) = match term.chars().last() {
                Some('i') => (&term[..term.len() - 1], Basis::I),
                Some('j') => (&term[..term.len() - 1], Basis::J),
                Some('k') => (&term[..term.len() - 1], Basis::K),
                _ => (term, Basis::One),
            };
            let coeff = match body {
                "" | "+" if unit != Basis::One => 1.0,
                "-" if unit != Basis::One => -1.0,
                _ => body
                    .parse::<f64>()
                    .map_err(|_| QuatError::Parse(format!("bad term `{term}` in `{s}`")))?,
            };
            q += unit.unit().scale(coeff);
        }
        if !q.is_finite() {
            return Err(QuatError::NonFinite);
        }
        Ok(q)
    }
}

/// Unit pure-imaginary direction `x i + y j + z k`, used as a rotation axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct ImaginaryAxis {
    x: f64,
    y: f64,
    z: f64,
}

impl ImaginaryAxis {
    pub const I: ImaginaryAxis = ImaginaryAxis { x: 1.0, y: 0.0, z: 0.0 };
    pub const J: ImaginaryAxis = ImaginaryAxis { x: 0.0, y: 1.0, z: 0.0 };
    pub const K: ImaginaryAxis = ImaginaryAxis { x: 0.0, y: 0.0, z: 1.0 };

    /// Accepts only directions with `|x² + y² + z² - 1| <= 1e-12`.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, QuatError> {
        let n = x * x + y * y + z * z;
        if !n.is_finite() || (n - 1.0).abs() > DEFAULT_TOL {
            return Err(QuatError::NonUnitAxis(n.sqrt()));
        }
        Ok(ImaginaryAxis { x, y, z })
    }

    /// Scales an arbitrary nonzero direction onto the unit sphere.
    pub fn normalize(x: f64, y: f64, z: f64) -> Result<Self, QuatError> {
        let n = (x * x + y * y + z * z).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(QuatError::NonUnitAxis(n));
        }
        Ok(ImaginaryAxis { x: x / n, y: y / n, z: z / n })
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn as_quaternion(&self) -> Quaternion {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    /// Projection of the imaginary part of `q` onto this axis.
    pub fn project(&self, q: &Quaternion) -> f64 {
        self.x * q.x + self.y * q.y + self.z * q.z
    }
}

impl TryFrom<[f64; 3]> for ImaginaryAxis {
    type Error = QuatError;
    fn try_from(v: [f64; 3]) -> Result<Self, Self::Error> {
        ImaginaryAxis::new(v[0], v[1], v[2])
    }
}

impl From<ImaginaryAxis> for [f64; 3] {
    fn from(a: ImaginaryAxis) -> Self {
        a.components()
    }
}
