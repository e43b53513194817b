use num_complex::Complex64;

use crate::channels::{twirl, ChiMatrix};
use crate::code::{DecoderTable, StabilizerCode};
use crate::error::{Error, Result};
use crate::par::{self, ExecMode};
use crate::I_POW;

/// Tolerance for the invariant check on every computed logical χ.
pub const LOGICAL_TOL: f64 = 1e-9;

const N: usize = 7;
const LO_QUBITS: usize = 3;
const LO_DIM: usize = 1 << (2 * LO_QUBITS);
const HI_DIM: usize = 1 << (2 * (N - LO_QUBITS));

/// Seven per-qubit channels, qubit 0 first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseAssignment {
    per_qubit: [ChiMatrix; N],
}

impl NoiseAssignment {
    pub fn new(channels: Vec<ChiMatrix>) -> Result<Self> {
        let got = channels.len();
        let per_qubit = channels.try_into().map_err(|_| Error::NoiseShape { expected: N, got })?;
        Ok(Self { per_qubit })
    }

    pub fn from_array(per_qubit: [ChiMatrix; N]) -> Self {
        Self { per_qubit }
    }

    pub fn uniform(chi: ChiMatrix) -> Self {
        Self { per_qubit: [chi; N] }
    }

    pub fn per_qubit(&self) -> &[ChiMatrix; N] {
        &self.per_qubit
    }

    pub fn twirled(&self) -> Self {
        Self { per_qubit: self.per_qubit.map(|c| twirl(&c)) }
    }

    pub fn is_diagonal(&self) -> bool {
        self.per_qubit.iter().all(ChiMatrix::is_diagonal)
    }

    /// Mean per-qubit process infidelity.
    pub fn mean_infidelity(&self) -> f64 {
        self.per_qubit.iter().map(ChiMatrix::process_infidelity).sum::<f64>() / N as f64
    }
}

/// One bare Pauli `A` in the class `C(s, l)`: its letters split into the low
/// three and high four qubits (two bits per qubit), and `c` with `R_s A = i^c S P̄_l`.
#[derive(Clone, Copy, Debug)]
struct Term {
    lo: u8,
    hi: u8,
    phase: u8,
}

/// Neumaier-compensated complex sum.
#[derive(Clone, Copy, Default)]
struct Neumaier {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

impl Neumaier {
    #[inline]
    fn add_part(sum: &mut f64, comp: &mut f64, x: f64) {
        let t = *sum + x;
        if sum.abs() >= x.abs() {
            *comp += (*sum - t) + x;
        } else {
            *comp += (x - t) + *sum;
        }
        *sum = t;
    }

    #[inline]
    fn add(&mut self, z: Complex64) {
        Self::add_part(&mut self.re, &mut self.re_c, z.re);
        Self::add_part(&mut self.im, &mut self.im_c, z.im);
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }
}

/// The map from seven physical χ-matrices to the syndrome-averaged logical χ
/// of a minimum-weight-decoded Steane block:
///
/// `χ̄_lm = Σ_s Σ_{A ∈ C(s,l)} Σ_{B ∈ C(s,m)} i^{c_A} (i^{c_B})* Π_q χ_q[A_q][B_q]`
///
/// where `C(s, l)` holds the bare Paulis `|E·P̄_l|` for correctable `E` of syndrome `s`.
#[derive(Clone, Debug)]
pub struct LogicalMap {
    code: StabilizerCode,
    decoder: DecoderTable,
    /// `classes[4 * s + l]`, 64 terms each.
    classes: Vec<Vec<Term>>,
}

impl LogicalMap {
    pub fn steane() -> Self {
        let code = StabilizerCode::steane();
        let decoder = DecoderTable::build_min_weight(&code);
        Self::new(code, decoder).expect("the minimum-weight Steane decoder is consistent")
    }

    /// Precomputes the classes from `coset_phase` over the correctable set.
    /// Fails if the decoder does not split the Pauli group into
    /// `syndromes × 4 × stabilizers` classes.
    pub fn new(code: StabilizerCode, decoder: DecoderTable) -> Result<Self> {
        if code.num_qubits() != N || code.num_logical() != 1 {
            return Err(Error::DimensionMismatch { left: code.num_qubits(), right: N });
        }
        decoder.validate(&code)?;
        let num_s = code.num_syndromes();
        let class_size = code.stabilizer_group().len();
        if decoder.correctable_set().len() != num_s * class_size {
            return Err(Error::Decoder(format!(
                "correctable set has {} elements, expected {}",
                decoder.correctable_set().len(),
                num_s * class_size
            )));
        }
        let mut classes = vec![Vec::with_capacity(class_size); 4 * num_s];
        for e in decoder.correctable_set() {
            for l in 0..4u8 {
                let cp = decoder.coset_phase(&code, e, l)?;
                let a = e.mul_unchecked(code.logical(l)).to_bare();
                let s = code.syndrome_unchecked(&a).index();
                let (mut lo, mut hi) = (0u8, 0u8);
                for (q, letter) in a.letters().enumerate() {
                    if q < LO_QUBITS {
                        lo |= (letter.index() as u8) << (2 * q);
                    } else {
                        hi |= (letter.index() as u8) << (2 * (q - LO_QUBITS));
                    }
                }
                classes[4 * s + l as usize].push(Term { lo, hi, phase: cp.phase });
            }
        }
        for c in &mut classes {
            c.sort_by_key(|t| t.phase);
        }
        if let Some(bad) = classes.iter().position(|c| c.len() != class_size) {
            return Err(Error::Decoder(format!(
                "class (syndrome {}, logical {}) has {} members, expected {class_size}",
                bad / 4,
                bad % 4,
                classes[bad].len()
            )));
        }
        Ok(Self { code, decoder, classes })
    }

    pub fn code(&self) -> &StabilizerCode {
        &self.code
    }

    pub fn decoder(&self) -> &DecoderTable {
        &self.decoder
    }

    /// Logical χ of one block; checked against the χ invariants at [`LOGICAL_TOL`].
    pub fn logical_chi(&self, noise: &NoiseAssignment, mode: ExecMode) -> Result<ChiMatrix> {
        let m = if noise.is_diagonal() { self.diagonal_sum(noise, mode) } else { self.full_sum(noise, mode) };
        ChiMatrix::with_tolerance(m, LOGICAL_TOL)
    }

    /// `1 - χ̄₀₀`, evaluated without cancellation.
    pub fn logical_infidelity(&self, noise: &NoiseAssignment, mode: ExecMode) -> Result<f64> {
        Ok(self.logical_chi(noise, mode)?.process_infidelity())
    }

    fn num_syndromes(&self) -> usize {
        self.classes.len() / 4
    }

    fn full_sum(&self, noise: &NoiseAssignment, mode: ExecMode) -> [[Complex64; 4]; 4] {
        let chis = noise.per_qubit();
        let lo = product_table(&chis[..LO_QUBITS]);
        let hi = product_table(&chis[LO_QUBITS..]);

        let partials: Vec<[[Complex64; 4]; 4]> = par::map_range(mode, self.num_syndromes(), |s| {
            let mut out = [[Complex64::default(); 4]; 4];
            for l in 0..4 {
                let ca = &self.classes[4 * s + l];
                for m in l..4 {
                    let cb = &self.classes[4 * s + m];
                    let mut acc = Neumaier::default();
                    for a in ca {
                        let lo_row: &[Complex64; LO_DIM] = lo[a.lo as usize * LO_DIM..][..LO_DIM].try_into().unwrap();
                        let hi_row: &[Complex64; HI_DIM] = hi[a.hi as usize * HI_DIM..][..HI_DIM].try_into().unwrap();
                        // classes are sorted by phase; compensation starts at the A level
                        let mut inner = Complex64::default();
                        for run in cb.chunk_by(|x, y| x.phase == y.phase) {
                            let mut sum = Complex64::default();
                            for b in run {
                                sum += lo_row[(b.lo & 63) as usize] * hi_row[b.hi as usize];
                            }
                            inner += sum * I_POW[((4 - run[0].phase) & 3) as usize];
                        }
                        acc.add(inner * I_POW[a.phase as usize]);
                    }
                    out[l][m] = acc.value();
                }
            }
            out
        });
        reduce(&partials)
    }

    /// Diagonal inputs only couple `A` with itself, so the result is diagonal.
    fn diagonal_sum(&self, noise: &NoiseAssignment, mode: ExecMode) -> [[Complex64; 4]; 4] {
        let diags: Vec<[f64; 4]> = noise.per_qubit().iter().map(ChiMatrix::diagonal).collect();
        let lo = diagonal_product_table(&diags[..LO_QUBITS]);
        let hi = diagonal_product_table(&diags[LO_QUBITS..]);
        let partials: Vec<[[Complex64; 4]; 4]> = par::map_range(mode, self.num_syndromes(), |s| {
            let mut out = [[Complex64::default(); 4]; 4];
            for (l, row) in out.iter_mut().enumerate() {
                let mut acc = Neumaier::default();
                for a in &self.classes[4 * s + l] {
                    acc.add(Complex64::new(lo[a.lo as usize] * hi[a.hi as usize], 0.0));
                }
                row[l] = acc.value();
            }
            out
        });
        reduce(&partials)
    }
}

/// Fixed-order compensated reduction over syndromes, then Hermitian fill.
fn reduce(partials: &[[[Complex64; 4]; 4]]) -> [[Complex64; 4]; 4] {
    let mut m = [[Complex64::default(); 4]; 4];
    for l in 0..4 {
        for k in l..4 {
            let mut acc = Neumaier::default();
            for p in partials {
                acc.add(p[l][k]);
            }
            m[l][k] = acc.value();
        }
        for k in 0..l {
            m[l][k] = m[k][l].conj();
        }
    }
    m
}

/// `T[a][b] = Π_q χ_q[a_q][b_q]` with letters packed two bits per qubit, row-major.
fn product_table(chis: &[ChiMatrix]) -> Vec<Complex64> {
    let mut table = vec![Complex64::new(1.0, 0.0)];
    let mut dim = 1usize;
    for (q, chi) in chis.iter().enumerate() {
        let next_dim = dim * 4;
        let mut next = vec![Complex64::default(); next_dim * next_dim];
        for a in 0..next_dim {
            for b in 0..next_dim {
                let (ra, rb) = (a & (dim - 1), b & (dim - 1));
                let (la, lb) = (a >> (2 * q), b >> (2 * q));
                next[a * next_dim + b] = table[ra * dim + rb] * chi.entry(la, lb);
            }
        }
        table = next;
        dim = next_dim;
    }
    table
}

fn diagonal_product_table(diags: &[[f64; 4]]) -> Vec<f64> {
    let mut table = vec![1.0];
    for d in diags {
        table = d.iter().flat_map(|&x| table.iter().map(move |&t| t * x)).collect::<Vec<_>>();
    }
    // flat_map above puts the newest qubit in the high bits
    table
}
