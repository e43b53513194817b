//! n-qubit Pauli operators in symplectic form.
//!
//! An operator is stored as `i^phase · ⊗_j X^{x_j} Z^{z_j}`, with qubit `j`
//! living in bit `j` of the `x`/`z` masks. In this convention `Y = i·XZ`, so
//! the Hermitian ("bare") Pauli with letters drawn from `{I, X, Y, Z}` has
//! `phase = popcount(x & z) mod 4`.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 32;

/// Single-qubit Pauli letter, indexed in the `(I, X, Y, Z) = (0, 1, 2, 3)` basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLetter {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (true, true) => PauliLetter::Y,
            (false, true) => PauliLetter::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            PauliLetter::I => (false, false),
            PauliLetter::X => (true, false),
            PauliLetter::Y => (true, true),
            PauliLetter::Z => (false, true),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'I' | '_' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: u64,
    z: u64,
    phase: u8,
}

impl PauliOperator {
    pub fn new(n: usize, x: u64, z: u64, phase: u8) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::InvalidPauli(format!("{n} qubits exceeds the supported {MAX_QUBITS}")));
        }
        let mask = qubit_mask(n);
        if x & !mask != 0 || z & !mask != 0 {
            return Err(Error::InvalidPauli(format!("bit strings wider than {n} qubits")));
        }
        Ok(Self { n, x, z, phase: phase & 3 })
    }

    pub fn identity(n: usize) -> Self {
        Self { n, x: 0, z: 0, phase: 0 }
    }

    /// Hermitian Pauli with the given support, no global phase.
    pub fn bare(n: usize, x: u64, z: u64) -> Result<Self> {
        Self::new(n, x, z, ((x & z).count_ones() & 3) as u8)
    }

    pub fn single(n: usize, qubit: usize, letter: PauliLetter) -> Result<Self> {
        if qubit >= n {
            return Err(Error::InvalidPauli(format!("qubit {qubit} out of range for n = {n}")));
        }
        let (x, z) = letter.bits();
        Self::bare(n, (x as u64) << qubit, (z as u64) << qubit)
    }

    /// Parses a bare Pauli string such as `"XIZZY"`; character `j` acts on qubit `j`.
    pub fn from_letters(s: &str) -> Result<Self> {
        let (mut x, mut z) = (0u64, 0u64);
        let mut n = 0;
        for (j, c) in s.chars().enumerate() {
            let letter = PauliLetter::from_char(c)
                .ok_or_else(|| Error::InvalidPauli(format!("unexpected character {c:?} in {s:?}")))?;
            let (xb, zb) = letter.bits();
            x |= (xb as u64) << j;
            z |= (zb as u64) << j;
            n = j + 1;
        }
        Self::bare(n, x, z)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    /// Exponent `k` in `i^k · X^x Z^z`.
    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    /// Exponent `k` such that `self = i^k · |self|`.
    pub fn phase_relative_to_bare(&self) -> u8 {
        (self.phase + 4 - ((self.x & self.z).count_ones() & 3) as u8) & 3
    }

    pub fn to_bare(&self) -> Self {
        Self { phase: ((self.x & self.z).count_ones() & 3) as u8, ..*self }
    }

    pub fn is_bare(&self) -> bool {
        self.phase_relative_to_bare() == 0
    }

    pub fn with_phase(&self, phase: u8) -> Self {
        Self { phase: phase & 3, ..*self }
    }

    /// Multiplies by `i^k`.
    pub fn times_i_pow(&self, k: u8) -> Self {
        Self { phase: (self.phase + k) & 3, ..*self }
    }

    pub fn letter(&self, qubit: usize) -> PauliLetter {
        PauliLetter::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    pub fn letters(&self) -> impl Iterator<Item = PauliLetter> + '_ {
        (0..self.n).map(|q| self.letter(q))
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn same_bare(&self, other: &Self) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }

    /// Symplectic product: `true` when the two operators anticommute.
    pub fn anticommutes_with(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) & 1 == 1
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        !self.anticommutes_with(other)
    }

    /// Operator product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(self.mul_unchecked(other))
    }

    /// `X^a Z^b · X^c Z^d = (-1)^{b·c} X^{a⊕c} Z^{b⊕d}` per qubit.
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let sign = ((self.z & other.x).count_ones() & 1) as u8;
        Self {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + 2 * sign) & 3,
        }
    }

    /// Ordering key used for deterministic enumeration: the integer `(z << n) | x`.
    pub fn canonical_key(&self) -> u64 {
        (self.z << self.n) | self.x
    }

    /// Letter string without phase, e.g. `"IZIIIII"`.
    pub fn letter_string(&self) -> String {
        self.letters().map(PauliLetter::as_char).collect()
    }

    /// All `4^n` bare Paulis, ordered by weight and then by `canonical_key`.
    pub fn enumerate_by_weight(n: usize) -> Vec<Self> {
        assert!(2 * n < 64, "enumeration over 4^{n} Paulis is not supported");
        let mut all: Vec<Self> = (0u64..1 << (2 * n))
            .map(|key| {
                let x = key & qubit_mask(n);
                let z = key >> n;
                Self { n, x, z, phase: ((x & z).count_ones() & 3) as u8 }
            })
            .collect();
        all.sort_by_key(|p| (p.weight(), p.canonical_key()));
        all
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.phase_relative_to_bare() as usize];
        write!(f, "{prefix}{}", self.letter_string())
    }
}

pub(crate) fn qubit_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliOperator {
        PauliOperator::from_letters(s).unwrap()
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let xz = p("X").multiply(&p("Z")).unwrap();
        assert!(xz.same_bare(&p("Y")));
        assert_eq!(xz.phase_relative_to_bare(), 3);
        // raw storage: X^1 Z^1 with no extra phase
        assert_eq!(xz.phase_exp(), 0);
    }

    #[test]
    fn identity_is_a_unit() {
        let q = p("XYZIZ");
        let id = PauliOperator::identity(5);
        assert_eq!(q.multiply(&id).unwrap(), q);
        assert_eq!(id.multiply(&q).unwrap(), q);
    }

    #[test]
    fn commuting_z_product() {
        let r = p("ZZI").multiply(&p("IZZ")).unwrap();
        assert_eq!(r, p("ZIZ"));
        assert_eq!(r.phase_exp(), 0);
    }

    #[test]
    fn y_squared_is_identity() {
        let y = p("Y");
        let yy = y.multiply(&y).unwrap();
        assert!(yy.is_identity_up_to_phase());
        assert_eq!(yy.phase_exp(), 0);
    }

    #[test]
    fn weights() {
        assert_eq!(PauliOperator::identity(7).weight(), 0);
        assert_eq!(PauliOperator::single(7, 2, PauliLetter::Z).unwrap().weight(), 1);
        assert_eq!(p("XYZIIII").weight(), 3);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(p("XX").multiply(&p("XXX")), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(PauliOperator::from_letters("XQ").is_err());
        assert!(PauliOperator::new(3, 0b1000, 0, 0).is_err());
        assert!(PauliOperator::single(3, 3, PauliLetter::X).is_err());
    }

    #[test]
    fn enumeration_order() {
        let all = PauliOperator::enumerate_by_weight(2);
        assert_eq!(all.len(), 16);
        assert_eq!(all[0].weight(), 0);
        let w1: Vec<String> = all[1..7].iter().map(|q| q.letter_string()).collect();
        assert_eq!(w1, ["XI", "IX", "ZI", "YI", "IZ", "IY"]);
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
        (0u64..1 << n, 0u64..1 << n, 0u8..4).prop_map(move |(x, z, k)| PauliOperator::new(n, x, z, k).unwrap())
    }

    proptest! {
        #[test]
        fn double_multiplication_recovers_bare_part(a in arb_pauli(7), b in arb_pauli(7)) {
            let r = a.multiply(&a.multiply(&b).unwrap()).unwrap();
            prop_assert!(r.same_bare(&b));
        }

        #[test]
        fn weight_counts_support(a in arb_pauli(7)) {
            let support = a.letters().filter(|l| *l != PauliLetter::I).count() as u32;
            prop_assert_eq!(a.weight(), support);
        }

        #[test]
        fn commutation_matches_products(a in arb_pauli(5), b in arb_pauli(5)) {
            let ab = a.multiply(&b).unwrap();
            let ba = b.multiply(&a).unwrap();
            prop_assert!(ab.same_bare(&ba));
            let diff = (ab.phase_exp() + 4 - ba.phase_exp()) & 3;
            prop_assert_eq!(diff == 2, a.anticommutes_with(&b));
        }

        #[test]
        fn multiplication_is_associative(a in arb_pauli(4), b in arb_pauli(4), c in arb_pauli(4)) {
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
