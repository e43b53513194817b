//! The Steane [[7,1,3]] code, syndrome extraction, minimum-weight lookup
//! decoding and the coset/phase decomposition of corrected errors.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::PauliOperator;

pub const STEANE_GENERATORS: [&str; 6] = ["ZZZZIII", "ZZIIZZI", "ZIZIZIZ", "XXXXIII", "XXIIXXI", "XIXIXIX"];

/// Syndrome bits; bit `g` is set when the error anticommutes with generator `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syndrome(pub u8);

impl Syndrome {
    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_trivial(self) -> bool {
        self.0 == 0
    }

    /// Renders as a string where character `g` is the outcome of generator `g`.
    pub fn to_bit_string(self, len: usize) -> String {
        (0..len).map(|g| if self.0 >> g & 1 == 1 { '1' } else { '0' }).collect()
    }
}

/// Logical Pauli index in the `(I, X, Y, Z) = (0, 1, 2, 3)` order.
pub type LogicalIndex = u8;

#[derive(Clone, Debug)]
pub struct StabilizerCode {
    n: usize,
    k: usize,
    generators: Vec<PauliOperator>,
    logicals: [PauliOperator; 4],
    /// Group element for every subset of generators, indexed by the subset mask.
    stabilizers: Vec<PauliOperator>,
    lookup: HashMap<(u64, u64), usize>,
}

impl StabilizerCode {
    /// Steane code with transversal logicals `X̄ = X⊗7`, `Z̄ = Z⊗7` and
    /// `Ȳ = i·X̄·Z̄`, which equals `-Y⊗7` as an operator.
    pub fn steane() -> Self {
        let generators: Vec<PauliOperator> = STEANE_GENERATORS
            .iter()
            .map(|s| PauliOperator::from_letters(s).expect("static generator"))
            .collect();
        let x_bar = PauliOperator::from_letters("XXXXXXX").expect("static logical");
        let z_bar = PauliOperator::from_letters("ZZZZZZZ").expect("static logical");
        Self::new(generators, x_bar, z_bar).expect("the Steane code is a valid stabilizer code")
    }

    pub fn new(generators: Vec<PauliOperator>, logical_x: PauliOperator, logical_z: PauliOperator) -> Result<Self> {
        let n = logical_x.num_qubits();
        if generators.len() >= 16 || generators.iter().any(|g| g.num_qubits() != n) || logical_z.num_qubits() != n {
            return Err(Error::InvalidPauli("generators and logicals must share one qubit count".into()));
        }
        for (a, ga) in generators.iter().enumerate() {
            if generators[a + 1..].iter().any(|gb| ga.anticommutes_with(gb)) {
                return Err(Error::InvalidPauli(format!("generator {ga} does not commute with the others")));
            }
            if ga.anticommutes_with(&logical_x) || ga.anticommutes_with(&logical_z) {
                return Err(Error::InvalidPauli(format!("generator {ga} anticommutes with a logical")));
            }
        }
        if logical_x.commutes_with(&logical_z) {
            return Err(Error::InvalidPauli("logical X and Z must anticommute".into()));
        }
        let logical_y = logical_x.mul_unchecked(&logical_z).times_i_pow(1);
        let logicals = [PauliOperator::identity(n), logical_x, logical_y, logical_z];

        let count = 1usize << generators.len();
        let mut stabilizers = Vec::with_capacity(count);
        let mut lookup = HashMap::with_capacity(count);
        for mask in 0..count {
            let mut s = PauliOperator::identity(n);
            for (g, gen) in generators.iter().enumerate() {
                if mask >> g & 1 == 1 {
                    s = s.mul_unchecked(gen);
                }
            }
            if lookup.insert((s.x_bits(), s.z_bits()), mask).is_some() {
                return Err(Error::InvalidPauli("generators are not independent".into()));
            }
            stabilizers.push(s);
        }
        Ok(Self { n, k: n - generators.len(), generators, logicals, stabilizers, lookup })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_logical(&self) -> usize {
        self.k
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn logical_x(&self) -> &PauliOperator {
        &self.logicals[1]
    }

    pub fn logical_z(&self) -> &PauliOperator {
        &self.logicals[3]
    }

    /// Logical representative `P̄_l` with its phase (`Ȳ = i·X̄·Z̄`).
    pub fn logical(&self, l: LogicalIndex) -> &PauliOperator {
        &self.logicals[l as usize]
    }

    /// All `2^{n-k}` stabilizer group elements with their signs.
    pub fn stabilizer_group(&self) -> &[PauliOperator] {
        &self.stabilizers
    }

    /// The group element whose bare part matches `p`, if any.
    pub fn stabilizer_matching(&self, p: &PauliOperator) -> Option<&PauliOperator> {
        self.lookup.get(&(p.x_bits(), p.z_bits())).map(|&i| &self.stabilizers[i])
    }

    pub fn num_syndromes(&self) -> usize {
        1 << self.generators.len()
    }

    pub fn syndrome(&self, e: &PauliOperator) -> Result<Syndrome> {
        if e.num_qubits() != self.n {
            return Err(Error::DimensionMismatch { left: e.num_qubits(), right: self.n });
        }
        Ok(self.syndrome_unchecked(e))
    }

    pub(crate) fn syndrome_unchecked(&self, e: &PauliOperator) -> Syndrome {
        let bits = self
            .generators
            .iter()
            .enumerate()
            .fold(0u8, |acc, (g, gen)| acc | ((e.anticommutes_with(gen) as u8) << g));
        Syndrome(bits)
    }

    /// Writes a trivial-syndrome operator as `c · S · P̄_l`, returning
    /// `(l, c, S)` with `c` the exponent of `i`. `None` if `p` has a nontrivial syndrome.
    pub fn decompose_normalizer(&self, p: &PauliOperator) -> Option<(LogicalIndex, u8, PauliOperator)> {
        if !self.syndrome_unchecked(p).is_trivial() {
            return None;
        }
        for (l, logical) in self.logicals.iter().enumerate() {
            // p · P̄_l⁻¹ must then be a stabilizer up to phase; P̄_l⁻¹ = P̄_l† has the conjugate phase.
            let inverse = logical.with_phase((4 - logical.phase_exp()) & 3).times_i_pow(
                2 * ((logical.x_bits() & logical.z_bits()).count_ones() & 1) as u8,
            );
            let rest = p.mul_unchecked(&inverse);
            if let Some(s) = self.stabilizer_matching(&rest) {
                let c = (rest.phase_exp() + 4 - s.phase_exp()) & 3;
                return Some((l as LogicalIndex, c, *s));
            }
        }
        None
    }
}

/// Decomposition `R_{s(E)} · |E · P̄_l| = i^phase · S · P̄_l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CosetPhase {
    /// Exponent of `i`; `φ(E, l) = i^phase`.
    pub phase: u8,
    pub stabilizer: PauliOperator,
}

impl CosetPhase {
    pub fn value(&self) -> num_complex::Complex64 {
        crate::I_POW[self.phase as usize]
    }
}

#[derive(Clone, Debug)]
pub struct DecoderTable {
    recoveries: Vec<PauliOperator>,
    correctable: Vec<PauliOperator>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecoderEntry {
    pub syndrome: String,
    pub recovery: String,
    pub weight: u32,
}

impl DecoderTable {
    /// Minimum-weight lookup table. Paulis are visited by weight and then by
    /// `(z_bits, x_bits)` key, and the first hit per syndrome wins.
    pub fn build_min_weight(code: &StabilizerCode) -> Self {
        let n = code.num_qubits();
        let mut recoveries: Vec<Option<PauliOperator>> = vec![None; code.num_syndromes()];
        let mut remaining = recoveries.len();
        for p in PauliOperator::enumerate_by_weight(n) {
            let slot = &mut recoveries[code.syndrome_unchecked(&p).index()];
            if slot.is_none() {
                *slot = Some(p);
                remaining -= 1;
                if remaining == 0 {
                    break;
                }
            }
        }
        let recoveries = recoveries.into_iter().map(|r| r.expect("every syndrome is reachable")).collect();
        Self::from_recoveries(code, recoveries).expect("enumeration produced one recovery per syndrome")
    }

    /// Builds a table from arbitrary recoveries indexed by syndrome. Only the
    /// count is checked; [`DecoderTable::validate`] checks the contents.
    pub fn from_recoveries(code: &StabilizerCode, recoveries: Vec<PauliOperator>) -> Result<Self> {
        if recoveries.len() != code.num_syndromes() {
            return Err(Error::Decoder(format!(
                "expected {} recoveries, got {}",
                code.num_syndromes(),
                recoveries.len()
            )));
        }
        if recoveries.iter().any(|r| r.num_qubits() != code.num_qubits()) {
            return Err(Error::Decoder("recovery has the wrong qubit count".into()));
        }
        let recoveries: Vec<PauliOperator> = recoveries.iter().map(PauliOperator::to_bare).collect();
        let mut correctable: Vec<PauliOperator> = recoveries
            .iter()
            .flat_map(|r| code.stabilizer_group().iter().map(move |s| r.mul_unchecked(s).to_bare()))
            .collect();
        correctable.sort_by_key(|p| (p.weight(), p.canonical_key()));
        correctable.dedup();
        Ok(Self { recoveries, correctable })
    }

    pub fn recovery(&self, s: Syndrome) -> &PauliOperator {
        &self.recoveries[s.index()]
    }

    pub fn recoveries(&self) -> &[PauliOperator] {
        &self.recoveries
    }

    /// Paulis `E` with `R_{s(E)} · E` in the stabilizer group, in weight order.
    pub fn correctable_set(&self) -> &[PauliOperator] {
        &self.correctable
    }

    pub fn recovery_for(&self, code: &StabilizerCode, e: &PauliOperator) -> Result<&PauliOperator> {
        Ok(self.recovery(code.syndrome(e)?))
    }

    /// Checks that every recovery carries its own syndrome.
    pub fn validate(&self, code: &StabilizerCode) -> Result<()> {
        for (s, r) in self.recoveries.iter().enumerate() {
            let got = code.syndrome(r)?;
            if got.index() != s {
                return Err(Error::Decoder(format!(
                    "recovery {} for syndrome {} has syndrome {}",
                    r.letter_string(),
                    Syndrome(s as u8).to_bit_string(code.generators().len()),
                    got.to_bit_string(code.generators().len())
                )));
            }
        }
        Ok(())
    }

    /// `l` such that `R_{s(E)} · E ∝ S · P̄_l`.
    pub fn logical_class(&self, code: &StabilizerCode, e: &PauliOperator) -> Result<LogicalIndex> {
        let r = self.recovery_for(code, e)?;
        code.decompose_normalizer(&r.mul_unchecked(e))
            .map(|(l, _, _)| l)
            .ok_or_else(|| Error::Decoder(format!("recovery {} does not clear the syndrome of {e}", r.letter_string())))
    }

    /// `φ(E, l)` and the witnessing stabilizer in `R_{s(E)} · |E·P̄_l| = φ · S · P̄_l`.
    /// `E` is treated as bare. Errors with [`Error::NotCorrectable`] outside the correctable set.
    pub fn coset_phase(&self, code: &StabilizerCode, e: &PauliOperator, l: LogicalIndex) -> Result<CosetPhase> {
        if l > 3 {
            return Err(Error::OutOfRange { name: "logical index", value: l as f64, expected: "0..=3" });
        }
        let e = e.to_bare();
        let shifted = e.multiply(code.logical(l))?.to_bare();
        let r = self.recovery(code.syndrome(&shifted)?);
        let corrected = r.mul_unchecked(&shifted);
        match code.decompose_normalizer(&corrected) {
            Some((class, phase, stabilizer)) if class == l => Ok(CosetPhase { phase, stabilizer }),
            Some((class, _, _)) => Err(Error::NotCorrectable {
                pauli: e.letter_string(),
                class: (class ^ l) & 3,
            }),
            None => Err(Error::Decoder(format!(
                "recovery {} does not clear the syndrome of {}",
                r.letter_string(),
                shifted.letter_string()
            ))),
        }
    }

    pub fn entries(&self, code: &StabilizerCode) -> Vec<DecoderEntry> {
        let width = code.generators().len();
        self.recoveries
            .iter()
            .enumerate()
            .map(|(s, r)| DecoderEntry {
                syndrome: Syndrome(s as u8).to_bit_string(width),
                recovery: r.letter_string(),
                weight: r.weight(),
            })
            .collect()
    }

    pub fn to_json(&self, code: &StabilizerCode) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.entries(code))?)
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string(6))
    }
}
