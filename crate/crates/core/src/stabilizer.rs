//! Pauli strings with quaternionic phases and small stabilizer codes.
//!
//! Syndromes are defined by commutation: bit `i` is `+1` when the error
//! commutes with generator `i` and `-1` when it anticommutes. Quaternionic
//! phases are left scalars and never change a syndrome.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates;
use crate::hspace::{QMatrix, QVector};
use crate::quaternion::{Basis, Quaternion};
use crate::register::QRegister;

/// Tolerance for the state-based eigenvalue checks.
pub const EIGEN_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ERRORS: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// `(x, z)` bits of the symplectic representation.
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// Product up to phase.
    pub fn mul_letter(self, other: Pauli) -> Pauli {
        let (ax, az) = self.bits();
        let (bx, bz) = other.bits();
        Pauli::from_bits(ax ^ bx, az ^ bz)
    }

    pub fn anticommutes(self, other: Pauli) -> bool {
        self != Pauli::I && other != Pauli::I && self != other
    }

    pub fn gate(self) -> gates::Gate {
        match self {
            Pauli::I => gates::identity(),
            Pauli::X => gates::pauli_x(),
            Pauli::Y => gates::pauli_y(),
            Pauli::Z => gates::pauli_z(),
        }
    }

    /// Table 1 pairing of a Pauli letter with a quaternion unit
    /// (`X -> i`, `Y -> j`, `Z -> k`, `I -> 1`).
    pub fn table1_phase(self) -> UnitPhase {
        match self {
            Pauli::I => UnitPhase::ONE,
            Pauli::X => UnitPhase::new(false, Basis::I),
            Pauli::Y => UnitPhase::new(false, Basis::J),
            Pauli::Z => UnitPhase::new(false, Basis::K),
        }
    }
}

impl TryFrom<char> for Pauli {
    type Error = Error;
    fn try_from(c: char) -> Result<Self> {
        match c {
            'I' | 'i' | '_' => Ok(Pauli::I),
            'X' | 'x' => Ok(Pauli::X),
            'Y' | 'y' => Ok(Pauli::Y),
            'Z' | 'z' => Ok(Pauli::Z),
            other => Err(Error::InvalidPauli(other.to_string())),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// One of the eight quaternion units `±1, ±i, ±j, ±k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitPhase {
    negative: bool,
    unit: Basis,
}

impl UnitPhase {
    pub const ONE: UnitPhase = UnitPhase { negative: false, unit: Basis::One };

    pub const fn new(negative: bool, unit: Basis) -> Self {
        UnitPhase { negative, unit }
    }

    pub fn all() -> [UnitPhase; 8] {
        let mut out = [UnitPhase::ONE; 8];
        for (i, b) in Basis::ALL.iter().enumerate() {
            out[2 * i] = UnitPhase::new(false, *b);
            out[2 * i + 1] = UnitPhase::new(true, *b);
        }
        out
    }

    pub fn unit(self) -> Basis {
        self.unit
    }

    pub fn is_negative(self) -> bool {
        self.negative
    }

    pub fn to_quaternion(self) -> Quaternion {
        let q = self.unit.unit();
        if self.negative {
            -q
        } else {
            q
        }
    }

    /// Exact inverse of [`UnitPhase::to_quaternion`].
    pub fn from_quaternion(q: Quaternion) -> Result<Self> {
        UnitPhase::all()
            .into_iter()
            .find(|p| p.to_quaternion() == q)
            .ok_or_else(|| Error::InvalidPhase(q.to_string()))
    }
}

impl std::ops::Mul for UnitPhase {
    type Output = UnitPhase;
    fn mul(self, rhs: UnitPhase) -> UnitPhase {
        UnitPhase::from_quaternion(self.to_quaternion() * rhs.to_quaternion())
            .expect("the unit group is closed under multiplication")
    }
}

impl fmt::Display for UnitPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.negative { '-' } else { '+' };
        write!(f, "{sign}{}", self.unit)
    }
}

impl FromStr for UnitPhase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (negative, rest) = match t.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let unit = rest.parse::<Basis>().map_err(|_| Error::InvalidPhase(s.to_string()))?;
        Ok(UnitPhase::new(negative, unit))
    }
}

/// `±1`, one syndrome bit or a commutation sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i8) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// A tensor word of Pauli letters with a unit-quaternion phase acting as a
/// left scalar. Qubits are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
    phase: UnitPhase,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>, phase: UnitPhase) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidPauli(String::new()));
        }
        Ok(PauliString { letters, phase })
    }

    pub fn identity(n: usize) -> Self {
        PauliString { letters: vec![Pauli::I; n.max(1)], phase: UnitPhase::ONE }
    }

    /// `letter` on `qubit`, identity elsewhere.
    pub fn single(n: usize, qubit: usize, letter: Pauli) -> Result<Self> {
        if qubit == 0 || qubit > n {
            return Err(Error::InvalidQubit { index: qubit, n });
        }
        let mut s = PauliString::identity(n);
        s.letters[qubit - 1] = letter;
        Ok(s)
    }

    pub fn with_phase(mut self, phase: UnitPhase) -> Self {
        self.phase = phase;
        self
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn letter(&self, qubit: usize) -> Pauli {
        self.letters[qubit - 1]
    }

    pub fn set_letter(&mut self, qubit: usize, letter: Pauli) {
        self.letters[qubit - 1] = letter;
    }

    pub fn phase(&self) -> UnitPhase {
        self.phase
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|l| **l != Pauli::I).count()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    /// The letter word only, e.g. `XZZXI`.
    pub fn word(&self) -> String {
        self.letters.iter().map(|l| l.symbol()).collect()
    }

    /// Short label: `iX1` for a phased single-qubit error, `I` for identity,
    /// otherwise the phase-prefixed word.
    pub fn label(&self) -> String {
        let phase = match (self.phase.negative, self.phase.unit) {
            (false, Basis::One) => String::new(),
            (true, Basis::One) => "-".to_string(),
            (neg, u) => format!("{}{}", if neg { "-" } else { "" }, u),
        };
        match self.weight() {
            0 => format!("{phase}I"),
            1 => {
                let (q, l) = self.letters.iter().enumerate().find(|(_, l)| **l != Pauli::I).unwrap();
                format!("{phase}{l}{}", q + 1)
            }
            _ => format!("{phase}{}", self.word()),
        }
    }

    /// `+1` if the strings commute, `-1` if they anticommute; phases are
    /// ignored.
    pub fn commute_sign(&self, other: &PauliString) -> Result<Sign> {
        if self.n() != other.n() {
            return Err(Error::LengthMismatch { left: self.n(), right: other.n() });
        }
        let clashes = self.letters.iter().zip(&other.letters).filter(|(a, b)| a.anticommutes(**b)).count();
        Ok(if clashes % 2 == 0 { Sign::Plus } else { Sign::Minus })
    }

    /// Letter-wise product with the phase dropped.
    pub fn mul_letters(&self, other: &PauliString) -> Result<PauliString> {
        if self.n() != other.n() {
            return Err(Error::LengthMismatch { left: self.n(), right: other.n() });
        }
        let letters = self.letters.iter().zip(&other.letters).map(|(a, b)| a.mul_letter(*b)).collect();
        Ok(PauliString { letters, phase: UnitPhase::ONE })
    }

    /// Dense `2^n x 2^n` matrix: the phase times the Kronecker product of
    /// the letters, qubit 1 major.
    pub fn matrix(&self) -> QMatrix {
        let mut m = QMatrix::identity(1).expect("1x1");
        for l in &self.letters {
            m = m.tensor(l.gate().matrix());
        }
        m.left_scalar_mul(self.phase.to_quaternion())
    }

    /// Applies the string to a register letter by letter, then the phase as a
    /// left scalar.
    pub fn apply(&self, reg: &QRegister) -> Result<QRegister> {
        if reg.n() != self.n() {
            return Err(Error::LengthMismatch { left: self.n(), right: reg.n() });
        }
        let mut out = reg.clone();
        for (q, l) in self.letters.iter().enumerate() {
            if *l != Pauli::I {
                out = out.apply_gate(&l.gate(), &[q + 1])?;
            }
        }
        Ok(out.left_scalar_mul(self.phase.to_quaternion()))
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses `XZZXI`, optionally prefixed by a unit phase such as `-jXIZ`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let split = t.find(['I', 'X', 'Y', 'Z']).ok_or_else(|| Error::InvalidPauli(s.into()))?;
        let (prefix, word) = t.split_at(split);
        let phase = match prefix {
            "" | "+" => UnitPhase::ONE,
            "-" => UnitPhase::new(true, Basis::One),
            p => p.parse()?,
        };
        let letters = word
            .chars()
            .map(|c| match c {
                'I' | 'X' | 'Y' | 'Z' => Pauli::try_from(c),
                _ => Err(Error::InvalidPauli(s.into())),
            })
            .collect::<Result<Vec<_>>>()?;
        PauliString::new(letters, phase)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.phase, self.word())
    }
}

/// Ordered syndrome bits, one per generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syndrome(pub Vec<Sign>);

impl Syndrome {
    pub fn trivial(len: usize) -> Self {
        Syndrome(vec![Sign::Plus; len])
    }

    pub fn from_values(values: &[i8]) -> Result<Self> {
        values
            .iter()
            .map(|v| Sign::from_value(*v).ok_or_else(|| Error::InvalidPauli(format!("syndrome bit {v}"))))
            .collect::<Result<Vec<_>>>()
            .map(Syndrome)
    }

    pub fn bits(&self) -> &[Sign] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|s| *s == Sign::Plus)
    }

    pub fn values(&self) -> Vec<i8> {
        self.0.iter().map(|s| s.value()).collect()
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The shipped codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeId {
    /// 3-q-qubit bit-flip code, generators `ZZI`, `IZZ`.
    Three,
    /// Five-qubit code with the generators `XXXXI`, `ZZIII`, `IZZII`, `IIZZZ`
    /// and codewords `|00000>`, `|11111>`.
    Paper5,
    /// Textbook [[5,1,3]] code with cyclic `XZZXI` generators.
    Perfect5,
}

impl CodeId {
    pub const ALL: [CodeId; 3] = [CodeId::Three, CodeId::Paper5, CodeId::Perfect5];

    pub fn as_str(self) -> &'static str {
        match self {
            CodeId::Three => "three",
            CodeId::Paper5 => "paper5",
            CodeId::Perfect5 => "perfect5",
        }
    }

    pub fn build(self) -> StabilizerCode {
        match self {
            CodeId::Three => three_qubit_code(),
            CodeId::Paper5 => paper_five_qubit_code(),
            CodeId::Perfect5 => standard_perfect_code(),
        }
    }
}

impl fmt::Display for CodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CodeId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "three" => Ok(CodeId::Three),
            "paper5" => Ok(CodeId::Paper5),
            "perfect5" => Ok(CodeId::Perfect5),
            other => Err(Error::InvalidLabel(format!("unknown code `{other}` (three|paper5|perfect5)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerCode {
    name: String,
    n: usize,
    k: usize,
    d: usize,
    generators: Vec<PauliString>,
    logical_x: PauliString,
    logical_z: PauliString,
    codewords: [QRegister; 2],
}

impl StabilizerCode {
    /// Checks string lengths and that every generator pair commutes.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        n: usize,
        k: usize,
        d: usize,
        generators: Vec<PauliString>,
        logical_x: PauliString,
        logical_z: PauliString,
        codewords: [QRegister; 2],
    ) -> Result<Self> {
        for s in generators.iter().chain([&logical_x, &logical_z]) {
            if s.n() != n {
                return Err(Error::LengthMismatch { left: n, right: s.n() });
            }
        }
        for c in &codewords {
            if c.n() != n {
                return Err(Error::LengthMismatch { left: n, right: c.n() });
            }
        }
        for a in 0..generators.len() {
            for b in a + 1..generators.len() {
                if generators[a].commute_sign(&generators[b])? == Sign::Minus {
                    return Err(Error::NonCommutingGenerators(a + 1, b + 1));
                }
            }
        }
        Ok(StabilizerCode { name: name.into(), n, k, d, generators, logical_x, logical_z, codewords })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `floor((d - 1) / 2)`
    pub fn correctable_t(&self) -> usize {
        self.d.saturating_sub(1) / 2
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn logical_x(&self) -> &PauliString {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &PauliString {
        &self.logical_z
    }

    pub fn codewords(&self) -> &[QRegister; 2] {
        &self.codewords
    }

    /// Commutation syndrome of `e`.
    pub fn syndrome_of(&self, e: &PauliString) -> Result<Syndrome> {
        self.generators.iter().map(|g| e.commute_sign(g)).collect::<Result<Vec<_>>>().map(Syndrome)
    }

    /// Every single-qubit X/Y/Z error, qubit-major, letters in X < Y < Z order.
    pub fn single_qubit_errors(&self) -> Vec<PauliString> {
        (1..=self.n)
            .flat_map(|q| Pauli::ERRORS.into_iter().map(move |l| (q, l)))
            .map(|(q, l)| PauliString::single(self.n, q, l).expect("valid qubit"))
            .collect()
    }

    /// True iff `e` (a residual after correction) acts as a non-trivial
    /// logical operator, i.e. anticommutes with the logical X or Z.
    pub fn is_logical_error(&self, e: &PauliString) -> Result<bool> {
        Ok(e.commute_sign(&self.logical_x)? == Sign::Minus || e.commute_sign(&self.logical_z)? == Sign::Minus)
    }
}

fn strings(words: &[&str]) -> Vec<PauliString> {
    words.iter().map(|w| w.parse().expect("literal Pauli word")).collect()
}

/// Logical basis `|0_L> = |000>`, `|1_L> = |111>`, generators `Z1Z2`, `Z2Z3`.
pub fn three_qubit_code() -> StabilizerCode {
    StabilizerCode::new(
        "three",
        3,
        1,
        3,
        strings(&["ZZI", "IZZ"]),
        "XXX".parse().unwrap(),
        "ZZZ".parse().unwrap(),
        [QRegister::from_bits("000").unwrap(), QRegister::from_bits("111").unwrap()],
    )
    .expect("generators commute")
}

/// Five-qubit code exactly as printed: generators `X1X2X3X4I5`, `Z1Z2`,
/// `Z2Z3`, `Z3Z4Z5`, codewords `|00000>`, `|11111>`. The generators commute
/// pairwise but do not stabilize the codewords; [`verify_codewords`] records
/// this.
pub fn paper_five_qubit_code() -> StabilizerCode {
    StabilizerCode::new(
        "paper5",
        5,
        1,
        3,
        strings(&["XXXXI", "ZZIII", "IZZII", "IIZZZ"]),
        "XXXXX".parse().unwrap(),
        "ZZZZZ".parse().unwrap(),
        [QRegister::from_bits("00000").unwrap(), QRegister::from_bits("11111").unwrap()],
    )
    .expect("generators commute")
}

/// The [[5,1,3]] perfect code with generators `XZZXI`, `IXZZX`, `XIXZZ`,
/// `ZXIXZ`, logicals `XXXXX` and `ZZZZZ`. `|0_L>` is the normalized
/// projection of `|00000>` onto the code space, `|1_L> = X_L |0_L>`.
pub fn standard_perfect_code() -> StabilizerCode {
    let generators = strings(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]);
    let logical_x: PauliString = "XXXXX".parse().unwrap();
    let mut state = QVector::basis(32, 0).unwrap();
    for g in &generators {
        // (I + S)/2 |psi>
        let s_psi = g.matrix().matvec(&state, crate::hspace::MulSide::Left).unwrap();
        let amps = state.amps().iter().zip(s_psi.amps()).map(|(a, b)| (*a + *b).scale(0.5)).collect();
        state = QVector::new(amps).unwrap();
    }
    let zero = QRegister::normalize(5, state).expect("projection of |00000> is non-zero");
    let one = logical_x.apply(&zero).unwrap();
    StabilizerCode::new("perfect5", 5, 1, 3, generators, logical_x, "ZZZZZ".parse().unwrap(), [zero, one])
        .expect("generators commute")
}

/// Eigenvalue of `op` on `state` if the state is an exact `±1` eigenvector
/// within [`EIGEN_TOL`], else `None`.
pub fn eigen_sign(op: &PauliString, state: &QRegister) -> Result<Option<Sign>> {
    let image = op.apply(state)?;
    let plus = image.amps().max_dist(state.amps())?;
    let minus = image.amps().max_dist(&state.amps().scale(-1.0))?;
    Ok(if plus <= EIGEN_TOL {
        Some(Sign::Plus)
    } else if minus <= EIGEN_TOL {
        Some(Sign::Minus)
    } else {
        None
    })
}

/// One letter-level row of a syndrome table with its phased variants.
#[derive(Clone, Debug, PartialEq)]
pub struct SyndromeRow {
    pub qubit: usize,
    pub letter: Pauli,
    pub syndrome: Syndrome,
    /// `(phase, syndrome of phase * error)` for each requested phase.
    pub variants: Vec<(UnitPhase, Syndrome)>,
}

impl SyndromeRow {
    pub fn error(&self, n: usize) -> PauliString {
        PauliString::single(n, self.qubit, self.letter).expect("row qubit is valid")
    }

    /// `X1`, `Y3`, ...
    pub fn label(&self) -> String {
        format!("{}{}", self.letter, self.qubit)
    }

    /// Table 1 companion such as `iX1`.
    pub fn quaternionic_label(&self) -> String {
        format!("{}{}{}", self.letter.table1_phase().unit(), self.letter, self.qubit)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyndromeTable {
    pub code: String,
    pub n: usize,
    pub rows: Vec<SyndromeRow>,
}

/// Syndromes of every single-qubit X/Y/Z error and of each phased variant.
pub fn build_syndrome_table(code: &StabilizerCode, phases: &[UnitPhase]) -> SyndromeTable {
    let rows = code
        .single_qubit_errors()
        .into_iter()
        .map(|e| {
            let (qubit, letter) = e
                .letters()
                .iter()
                .enumerate()
                .find(|(_, l)| **l != Pauli::I)
                .map(|(q, l)| (q + 1, *l))
                .expect("single-qubit error");
            let syndrome = code.syndrome_of(&e).expect("lengths match");
            let variants = phases
                .iter()
                .map(|p| (*p, code.syndrome_of(&e.clone().with_phase(*p)).expect("lengths match")))
                .collect();
            SyndromeRow { qubit, letter, syndrome, variants }
        })
        .collect();
    SyndromeTable { code: code.name().to_string(), n: code.n(), rows }
}

/// Result of decoding one syndrome.
#[derive(Clone, Debug, PartialEq)]
pub enum Decoding {
    /// All-`+1` syndrome.
    Trivial,
    /// A minimum-weight single-qubit correction. `candidates` lists every
    /// single-qubit error with this syndrome in tie-break order; more than
    /// one entry means the syndrome collides.
    Correction { correction: PauliString, candidates: Vec<PauliString> },
    /// No single-qubit error produces this syndrome.
    Unknown,
}

impl Decoding {
    pub fn is_collision(&self) -> bool {
        matches!(self, Decoding::Correction { candidates, .. } if candidates.len() > 1)
    }

    /// Correction operator to apply; identity for a trivial syndrome.
    pub fn correction(&self, n: usize) -> Option<PauliString> {
        match self {
            Decoding::Trivial => Some(PauliString::identity(n)),
            Decoding::Correction { correction, .. } => Some(correction.clone()),
            Decoding::Unknown => None,
        }
    }
}

/// Lookup-table decoder over single-qubit errors. Ties break by lowest
/// qubit, then `X < Y < Z`.
#[derive(Clone, Debug)]
pub struct Decoder {
    n: usize,
    generators: usize,
    table: HashMap<Syndrome, Vec<PauliString>>,
}

impl Decoder {
    pub fn new(code: &StabilizerCode) -> Self {
        let mut table: HashMap<Syndrome, Vec<PauliString>> = HashMap::new();
        // single_qubit_errors is already in tie-break order
        for e in code.single_qubit_errors() {
            let s = code.syndrome_of(&e).expect("lengths match");
            if !s.is_trivial() {
                table.entry(s).or_default().push(e);
            }
        }
        Decoder { n: code.n(), generators: code.generators().len(), table }
    }

    pub fn decode(&self, syndrome: &Syndrome) -> Result<Decoding> {
        if syndrome.len() != self.generators {
            return Err(Error::LengthMismatch { left: self.generators, right: syndrome.len() });
        }
        if syndrome.is_trivial() {
            return Ok(Decoding::Trivial);
        }
        Ok(match self.table.get(syndrome) {
            Some(candidates) => Decoding::Correction { correction: candidates[0].clone(), candidates: candidates.clone() },
            None => Decoding::Unknown,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Syndromes reached by more than one single-qubit error, sorted.
    pub fn collisions(&self) -> Vec<(Syndrome, Vec<PauliString>)> {
        let mut out: Vec<_> =
            self.table.iter().filter(|(_, v)| v.len() > 1).map(|(s, v)| (s.clone(), v.clone())).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

/// Builds a [`Decoder`] for `code` and decodes one syndrome.
pub fn decode(syndrome: &Syndrome, code: &StabilizerCode) -> Result<Decoding> {
    Decoder::new(code).decode(syndrome)
}

/// Published syndrome table of the five-qubit code, kept verbatim as audit
/// reference data.
pub const PAPER_TABLE2: [(&str, [i8; 4]); 15] = [
    ("X1", [-1, -1, 1, 1]),
    ("Y1", [-1, -1, 1, 1]),
    ("Z1", [1, -1, 1, 1]),
    ("X2", [-1, -1, -1, 1]),
    ("Y2", [-1, -1, -1, 1]),
    ("Z2", [1, -1, -1, 1]),
    ("X3", [-1, 1, -1, -1]),
    ("Y3", [-1, 1, -1, -1]),
    ("Z3", [1, 1, -1, -1]),
    ("X4", [-1, 1, 1, -1]),
    ("Y4", [-1, 1, 1, -1]),
    ("Z4", [1, 1, 1, -1]),
    ("X5", [1, 1, 1, -1]),
    ("Y5", [1, 1, 1, -1]),
    ("Z5", [1, 1, 1, -1]),
];

#[derive(Clone, Debug, PartialEq)]
pub struct AuditRow {
    pub label: String,
    pub quaternionic_label: String,
    pub computed: Syndrome,
    pub paper: Syndrome,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub rows: Vec<AuditRow>,
    pub mismatches: usize,
    /// Computed syndromes shared by more than one error.
    pub computed_collisions: Vec<(Syndrome, Vec<String>)>,
    /// Published syndromes shared by more than one error.
    pub paper_collisions: Vec<(Syndrome, Vec<String>)>,
}

impl AuditReport {
    pub fn mismatched_labels(&self) -> Vec<&str> {
        self.rows.iter().filter(|r| !r.matches).map(|r| r.label.as_str()).collect()
    }
}

fn collisions(rows: impl Iterator<Item = (Syndrome, String)>) -> Vec<(Syndrome, Vec<String>)> {
    let mut groups: Vec<(Syndrome, Vec<String>)> = Vec::new();
    for (s, label) in rows {
        match groups.iter_mut().find(|(g, _)| *g == s) {
            Some((_, v)) => v.push(label),
            None => groups.push((s, vec![label])),
        }
    }
    groups.retain(|(_, v)| v.len() > 1);
    groups
}

/// Row-by-row comparison of a computed five-qubit table with
/// [`PAPER_TABLE2`].
pub fn audit_against_paper(table: &SyndromeTable) -> Result<AuditReport> {
    if table.rows.len() != PAPER_TABLE2.len() {
        return Err(Error::LengthMismatch { left: PAPER_TABLE2.len(), right: table.rows.len() });
    }
    let mut rows = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        let label = row.label();
        let (_, bits) = PAPER_TABLE2
            .iter()
            .find(|(l, _)| *l == label)
            .ok_or_else(|| Error::InvalidLabel(label.clone()))?;
        let paper = Syndrome::from_values(bits)?;
        rows.push(AuditRow {
            quaternionic_label: row.quaternionic_label(),
            matches: paper == row.syndrome,
            computed: row.syndrome.clone(),
            paper,
            label,
        });
    }
    let mismatches = rows.iter().filter(|r| !r.matches).count();
    let computed_collisions = collisions(rows.iter().map(|r| (r.computed.clone(), r.label.clone())));
    let paper_collisions = collisions(rows.iter().map(|r| (r.paper.clone(), r.label.clone())));
    Ok(AuditReport { rows, mismatches, computed_collisions, paper_collisions })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorCheck {
    pub generator: String,
    /// Eigenvalue on `|0_L>` and `|1_L>`, `None` when not an eigenvector.
    pub on_zero: Option<Sign>,
    pub on_one: Option<Sign>,
}

impl GeneratorCheck {
    pub fn pass(&self) -> bool {
        self.on_zero == Some(Sign::Plus) && self.on_one == Some(Sign::Plus)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CodewordReport {
    pub code: String,
    pub generators: Vec<GeneratorCheck>,
    /// `Z_L|0_L> = |0_L>`
    pub logical_z_zero: bool,
    /// `Z_L|1_L> = -|1_L>`
    pub logical_z_one: bool,
    /// `X_L|0_L> = |1_L>` and `X_L|1_L> = |0_L>`
    pub logical_x_swap: bool,
}

impl CodewordReport {
    pub fn pass(&self) -> bool {
        self.generators.iter().all(GeneratorCheck::pass) && self.logical_z_zero && self.logical_z_one && self.logical_x_swap
    }

    /// 1-based indices of generators that fail to fix both codewords.
    pub fn failing_generators(&self) -> Vec<usize> {
        self.generators.iter().enumerate().filter(|(_, g)| !g.pass()).map(|(i, _)| i + 1).collect()
    }
}

/// Applies every generator and logical operator to the codewords.
pub fn verify_codewords(code: &StabilizerCode) -> CodewordReport {
    let [zero, one] = code.codewords();
    let generators = code
        .generators()
        .iter()
        .map(|g| GeneratorCheck {
            generator: g.word(),
            on_zero: eigen_sign(g, zero).expect("sizes match"),
            on_one: eigen_sign(g, one).expect("sizes match"),
        })
        .collect();
    let close = |a: &QRegister, b: &QRegister| a.amps().approx_eq(b.amps(), EIGEN_TOL);
    let xl = |s: &QRegister| code.logical_x().apply(s).expect("sizes match");
    CodewordReport {
        code: code.name().to_string(),
        generators,
        logical_z_zero: eigen_sign(code.logical_z(), zero).expect("sizes match") == Some(Sign::Plus),
        logical_z_one: eigen_sign(code.logical_z(), one).expect("sizes match") == Some(Sign::Minus),
        logical_x_swap: close(&xl(zero), one) && close(&xl(one), zero),
    }
}

/// Two-qubit label `|a_b>` of an expanded H-qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TwoBitLabel {
    pub major: u8,
    pub minor: u8,
}

impl fmt::Display for TwoBitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}_{}>", self.major, self.minor)
    }
}

/// `1 -> |0_0>`, `i -> |0_1>`, `j -> |1_0>`, `k -> |1_1>`.
pub fn hqubit_expand(unit: Basis) -> TwoBitLabel {
    let (major, minor) = match unit {
        Basis::One => (0, 0),
        Basis::I => (0, 1),
        Basis::J => (1, 0),
        Basis::K => (1, 1),
    };
    TwoBitLabel { major, minor }
}

pub fn hqubit_contract(label: TwoBitLabel) -> Result<Basis> {
    match (label.major, label.minor) {
        (0, 0) => Ok(Basis::One),
        (0, 1) => Ok(Basis::I),
        (1, 0) => Ok(Basis::J),
        (1, 1) => Ok(Basis::K),
        _ => Err(Error::InvalidLabel(label.to_string())),
    }
}

/// Parses a unit symbol (`1`, `i`, `j`, `k`) and expands it.
pub fn hqubit_expand_str(unit: &str) -> Result<TwoBitLabel> {
    unit.parse::<Basis>().map(hqubit_expand).map_err(|_| Error::InvalidLabel(unit.to_string()))
}

/// Which printed codeword table a mapping is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Notation {
    /// Single-symbol labels `0`, `1`, `0̇`, `1̇`.
    Symbol,
    /// Two-qubit labels `0_0`, `0_1`, `1_0`, `1_1`.
    Expanded,
}

const DOT0: &str = "0\u{307}";
const DOT1: &str = "1\u{307}";

/// Injective assignment of basis labels to the units `1, i, j, k`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisMapping {
    name: String,
    labels: [String; 4],
    zero_label: String,
    one_label: String,
    notation: Notation,
}

impl BasisMapping {
    /// `labels` are given for `1, i, j, k` in that order. `zero_label` and
    /// `one_label` name the labels that make up `|00000>` and `|11111>`.
    pub fn new(
        name: impl Into<String>,
        labels: [&str; 4],
        zero_label: &str,
        one_label: &str,
        notation: Notation,
    ) -> Result<Self> {
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::NonInjectiveMapping(l.to_string()));
            }
        }
        for needed in [zero_label, one_label] {
            if !labels.contains(&needed) {
                return Err(Error::InvalidLabel(needed.to_string()));
            }
        }
        Ok(BasisMapping {
            name: name.into(),
            labels: labels.map(str::to_string),
            zero_label: zero_label.into(),
            one_label: one_label.into(),
            notation,
        })
    }

    /// Mapping stated in the prose below the symbol table:
    /// `1 -> 0, i -> 0̇, j -> 1, k -> 1̇`.
    pub fn symbol_text() -> Self {
        BasisMapping::new("symbol-text", ["0", DOT0, "1", DOT1], "0", "1", Notation::Symbol).unwrap()
    }

    /// Mapping implied by the first row of the symbol table:
    /// `1 -> 0, i -> 1, j -> 0̇, k -> 1̇`.
    pub fn symbol_table() -> Self {
        BasisMapping::new("symbol-table", ["0", "1", DOT0, DOT1], "0", "1", Notation::Symbol).unwrap()
    }

    /// Stated two-qubit expansion `1 -> 0_0, i -> 0_1, j -> 1_0, k -> 1_1`.
    pub fn expanded_text() -> Self {
        BasisMapping::new("expanded-text", ["0_0", "0_1", "1_0", "1_1"], "0_0", "1_0", Notation::Expanded).unwrap()
    }

    /// Expansion implied by the first row of the expanded table:
    /// `1 -> 0_0, i -> 1_0, j -> 0_1, k -> 1_1`.
    pub fn expanded_table() -> Self {
        BasisMapping::new("expanded-table", ["0_0", "1_0", "0_1", "1_1"], "0_0", "1_0", Notation::Expanded).unwrap()
    }

    pub fn presets() -> [BasisMapping; 4] {
        [Self::symbol_text(), Self::symbol_table(), Self::expanded_text(), Self::expanded_table()]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn notation(&self) -> Notation {
        self.notation
    }

    pub fn label(&self, unit: Basis) -> &str {
        &self.labels[unit as usize]
    }

    fn unit_of(&self, label: &str) -> Basis {
        Basis::ALL[self.labels.iter().position(|l| l == label).expect("validated label")]
    }
}

/// Published right-multiplication tables: for each codeword (`|0..0>`,
/// `|1..1>`) and each unit (`i`, `j`, `k`), the printed sign and first-slot
/// label.
pub const PAPER_SYMBOL_TABLE: [[(bool, &str); 3]; 2] =
    [[(false, "1"), (false, DOT0), (false, DOT1)], [(true, "0"), (true, DOT1), (false, DOT0)]];
pub const PAPER_EXPANDED_TABLE: [[(bool, &str); 3]; 2] =
    [[(false, "1_0"), (false, "0_1"), (false, "1_1")], [(true, "0_0"), (true, "1_1"), (false, "0_1")]];

#[derive(Clone, Debug, PartialEq)]
pub struct ActionRow {
    pub codeword: String,
    pub unit: Basis,
    pub negative: bool,
    pub first_label: String,
    pub rendered: String,
    pub paper: String,
    pub matches: bool,
}

fn render_ket(negative: bool, first: &str, rest: &str) -> String {
    let sign = if negative { "-" } else { "" };
    let body: String = std::iter::once(first).chain(std::iter::repeat_n(rest, 4)).collect();
    format!("{sign}|{body}>")
}

/// Right-multiplies the first H-qubit of `|00000>` and `|11111>` by `unit`
/// and re-expresses the product as a signed label under `mapping`, with the
/// printed entry for comparison.
pub fn codeword_action_table(unit: Basis, mapping: &BasisMapping) -> Result<Vec<ActionRow>> {
    let col = match unit {
        Basis::I => 0,
        Basis::J => 1,
        Basis::K => 2,
        Basis::One => return Err(Error::InvalidLabel("1".into())),
    };
    let printed = match mapping.notation {
        Notation::Symbol => &PAPER_SYMBOL_TABLE,
        Notation::Expanded => &PAPER_EXPANDED_TABLE,
    };
    let mut rows = Vec::with_capacity(2);
    for (row, slot_label) in [&mapping.zero_label, &mapping.one_label].into_iter().enumerate() {
        let value = mapping.unit_of(slot_label).unit();
        let product = UnitPhase::from_quaternion(value * unit.unit())?;
        let first = mapping.label(product.unit()).to_string();
        let rendered = render_ket(product.is_negative(), &first, slot_label);
        let (pneg, plabel) = printed[row][col];
        let paper = render_ket(pneg, plabel, slot_label_for_print(row, mapping.notation));
        rows.push(ActionRow {
            codeword: render_ket(false, slot_label, slot_label),
            unit,
            negative: product.is_negative(),
            matches: rendered == paper,
            first_label: first,
            rendered,
            paper,
        });
    }
    Ok(rows)
}

fn slot_label_for_print(row: usize, notation: Notation) -> &'static str {
    match (notation, row) {
        (Notation::Symbol, 0) => "0",
        (Notation::Symbol, _) => "1",
        (Notation::Expanded, 0) => "0_0",
        (Notation::Expanded, _) => "1_0",
    }
}

/// [`codeword_action_table`] for `i`, `j` and `k`.
pub fn full_action_table(mapping: &BasisMapping) -> Vec<ActionRow> {
    [Basis::I, Basis::J, Basis::K]
        .into_iter()
        .flat_map(|u| codeword_action_table(u, mapping).expect("imaginary unit"))
        .collect()
}
