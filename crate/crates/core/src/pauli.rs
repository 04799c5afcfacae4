//! Signed Pauli strings with exact phase tracking and GF(2) row algebra.

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Register / rotation axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    Z,
    X,
    Y,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Z, Axis::X, Axis::Y];

    pub fn as_char(self) -> char {
        match self {
            Axis::Z => 'Z',
            Axis::X => 'X',
            Axis::Y => 'Y',
        }
    }
}

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn axis(self) -> Option<Axis> {
        match self {
            Letter::I => None,
            Letter::X => Some(Axis::X),
            Letter::Y => Some(Axis::Y),
            Letter::Z => Some(Axis::Z),
        }
    }
}

impl From<Axis> for Letter {
    fn from(a: Axis) -> Letter {
        match a {
            Axis::X => Letter::X,
            Axis::Y => Letter::Y,
            Axis::Z => Letter::Z,
        }
    }
}

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

/// Signed Pauli operator over `n` qubits, stored as packed X and Z bit rows
/// plus a phase exponent mod 4.
///
/// The operator equals `i^phase` times the Hermitian letter product (each Y
/// letter carries its own factor of i internally), so `phase ∈ {0, 2}` means
/// the operator is ±(Hermitian Pauli). Odd phases occur only transiently in
/// products; everything crossing a module boundary is kept Hermitian.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x_bits: Vec<u64>,
    z_bits: Vec<u64>,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliString {
            n,
            x_bits: vec![0; w],
            z_bits: vec![0; w],
            phase: 0,
        }
    }

    pub fn single(n: usize, qubit: usize, letter: Letter) -> Result<Self> {
        if qubit >= n {
            return Err(Error::QubitOutOfRange { index: qubit, n });
        }
        let mut p = PauliString::identity(n);
        p.set_letter(qubit, letter);
        Ok(p)
    }

    pub fn from_axis(n: usize, qubit: usize, axis: Axis) -> Result<Self> {
        PauliString::single(n, qubit, axis.into())
    }

    pub fn from_letters(letters: &[Letter], negative: bool) -> Self {
        let mut p = PauliString::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            p.set_letter(q, l);
        }
        if negative {
            p.negate();
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Phase exponent: the operator is `i^phase` times the Hermitian letter
    /// product.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase == 0 || self.phase == 2
    }

    /// Sign of a Hermitian (±1) Pauli.
    pub fn sign(&self) -> Result<i8> {
        match self.phase {
            0 => Ok(1),
            2 => Ok(-1),
            p => Err(Error::NonHermitian { phase: p }),
        }
    }

    pub fn negate(&mut self) {
        self.phase = (self.phase + 2) % 4;
    }

    pub fn negated(&self) -> Self {
        let mut p = self.clone();
        p.negate();
        p
    }

    /// Multiply by `i^k`.
    pub fn mul_i_power(&mut self, k: u8) {
        self.phase = (self.phase + k) % 4;
    }

    pub fn x_bit(&self, q: usize) -> bool {
        self.x_bits[q / WORD] >> (q % WORD) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        self.z_bits[q / WORD] >> (q % WORD) & 1 == 1
    }

    pub fn letter(&self, q: usize) -> Letter {
        match (self.x_bit(q), self.z_bit(q)) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn set_letter(&mut self, q: usize, letter: Letter) {
        let (x, z) = letter.bits();
        let (w, b) = (q / WORD, q % WORD);
        self.x_bits[w] = self.x_bits[w] & !(1 << b) | (u64::from(x) << b);
        self.z_bits[w] = self.z_bits[w] & !(1 << b) | (u64::from(z) << b);
    }

    /// Number of qubits acted on nontrivially.
    pub fn weight(&self) -> usize {
        self.x_bits
            .iter()
            .zip(&self.z_bits)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn is_identity_letters(&self) -> bool {
        self.weight() == 0
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.letter(q) != Letter::I).collect()
    }

    fn y_count(&self) -> u32 {
        self.x_bits
            .iter()
            .zip(&self.z_bits)
            .map(|(x, z)| (x & z).count_ones())
            .sum()
    }

    /// Exact operator product with phase tracked mod 4.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let x_bits: Vec<u64> = self.x_bits.iter().zip(&other.x_bits).map(|(a, b)| a ^ b).collect();
        let z_bits: Vec<u64> = self.z_bits.iter().zip(&other.z_bits).map(|(a, b)| a ^ b).collect();
        // In the raw i^r · X^x Z^z convention the product phase picks up
        // (-1)^(z_a · x_b) from commuting Z past X.
        let cross: u32 = self
            .z_bits
            .iter()
            .zip(&other.x_bits)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        let raw = u32::from(self.phase) + self.y_count() + u32::from(other.phase) + other.y_count() + 2 * cross;
        let y_new: u32 = x_bits.iter().zip(&z_bits).map(|(x, z)| (x & z).count_ones()).sum();
        let phase = ((raw + 4 * y_new - y_new) % 4) as u8;
        Ok(PauliString {
            n: self.n,
            x_bits,
            z_bits,
            phase,
        })
    }

    /// Symplectic inner product parity; 0 means the operators commute.
    pub fn symplectic(&self, other: &PauliString) -> Result<u8> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let s: u32 = self
            .x_bits
            .iter()
            .zip(&other.z_bits)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            + self
                .z_bits
                .iter()
                .zip(&other.x_bits)
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>();
        Ok((s % 2) as u8)
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        Ok(self.symplectic(other)? == 0)
    }

    /// True when the letter patterns coincide, ignoring the sign.
    pub fn same_letters(&self, other: &PauliString) -> bool {
        self.n == other.n && self.x_bits == other.x_bits && self.z_bits == other.z_bits
    }

    /// True when this letter pattern equals the bitwise product pattern of
    /// `a` and `b`, without materializing the product.
    pub fn same_letters_as_product(&self, a: &PauliString, b: &PauliString) -> bool {
        self.n == a.n
            && a.n == b.n
            && self
                .x_bits
                .iter()
                .zip(a.x_bits.iter().zip(&b.x_bits))
                .all(|(s, (x, y))| *s == x ^ y)
            && self
                .z_bits
                .iter()
                .zip(a.z_bits.iter().zip(&b.z_bits))
                .all(|(s, (x, y))| *s == x ^ y)
    }

    /// Concatenated (x|z) row used for GF(2) rank computations.
    pub fn symplectic_row(&self) -> Vec<u64> {
        let mut row = self.x_bits.clone();
        row.extend_from_slice(&self.z_bits);
        row
    }

    /// Restrict to a subset of qubits, keeping the sign and dropping letters
    /// outside `positions`. `positions[i]` becomes qubit `i` of the result.
    pub fn restrict(&self, positions: &[usize]) -> Result<PauliString> {
        let mut p = PauliString::identity(positions.len());
        for (i, &q) in positions.iter().enumerate() {
            if q >= self.n {
                return Err(Error::QubitOutOfRange { index: q, n: self.n });
            }
            p.set_letter(i, self.letter(q));
        }
        if self.phase == 2 {
            p.negate();
        }
        Ok(p)
    }

    /// Embed into `n` qubits, placing qubit `i` at `positions[i]`.
    pub fn embed(&self, n: usize, positions: &[usize]) -> Result<PauliString> {
        let mut p = PauliString::identity(n);
        for (i, &q) in positions.iter().enumerate() {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
            p.set_letter(q, self.letter(i));
        }
        p.phase = self.phase;
        Ok(p)
    }

    /// Relabel qubits: letter at `q` moves to `perm[q]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<PauliString> {
        let mut p = PauliString::identity(self.n);
        for q in 0..self.n {
            let to = perm[q];
            if to >= self.n {
                return Err(Error::QubitOutOfRange { index: to, n: self.n });
            }
            p.set_letter(to, self.letter(q));
        }
        p.phase = self.phase;
        Ok(p)
    }

    /// Letter pattern with the sign stripped, as text.
    pub fn pattern_text(&self) -> String {
        (0..self.n).map(|q| self.letter(q).as_char()).collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.phase {
            0 => {}
            1 => write!(f, "i")?,
            2 => write!(f, "-")?,
            _ => write!(f, "-i")?,
        }
        for q in 0..self.n {
            write!(f, "{}", self.letter(q).as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parse the text form: optional `+`/`-`/`i`/`+i`/`-i` prefix followed by
    /// letters from {I, X, Y, Z}, qubit 0 leftmost.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidPauliText {
            text: s.to_string(),
            reason: reason.to_string(),
        };
        let mut rest = s.trim();
        let mut phase = 0u8;
        if let Some(r) = rest.strip_prefix("+i") {
            phase = 1;
            rest = r;
        } else if let Some(r) = rest.strip_prefix("-i") {
            phase = 3;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('i') {
            phase = 1;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            phase = 2;
            rest = r;
        }
        if rest.is_empty() {
            return Err(bad("no letters"));
        }
        let mut letters = Vec::with_capacity(rest.len());
        for c in rest.chars() {
            letters.push(match c {
                'I' => Letter::I,
                'X' => Letter::X,
                'Y' => Letter::Y,
                'Z' => Letter::Z,
                _ => return Err(bad("letters must be I, X, Y or Z")),
            });
        }
        let mut p = PauliString::from_letters(&letters, false);
        p.mul_i_power(phase);
        Ok(p)
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Rank over GF(2) of the concatenated (x|z) rows; signs are ignored.
pub fn gf2_rank(paulis: &[PauliString]) -> usize {
    let mut rows: Vec<Vec<u64>> = paulis.iter().map(PauliString::symplectic_row).collect();
    let mut rank = 0;
    if rows.is_empty() {
        return 0;
    }
    let width = rows[0].len() * WORD;
    for col in 0..width {
        let (w, b) = (col / WORD, col % WORD);
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] >> b & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] >> b & 1 == 1 {
                for (a, p) in row.iter_mut().zip(&pivot_row) {
                    *a ^= p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Indices of a maximal independent subset: the first occurrence of each
/// independent row, scanning in order.
pub fn gf2_generators(paulis: &[PauliString]) -> Vec<usize> {
    // One basis row per leading bit; reduction strictly increases the leading
    // bit, so the loop terminates with either a zero row or a fresh pivot.
    let mut basis: std::collections::BTreeMap<usize, Vec<u64>> = std::collections::BTreeMap::new();
    let mut picked = Vec::new();
    for (i, p) in paulis.iter().enumerate() {
        let mut row = p.symplectic_row();
        while let Some(lead) = leading_bit(&row) {
            match basis.get(&lead) {
                Some(b) => {
                    for (a, x) in row.iter_mut().zip(b) {
                        *a ^= x;
                    }
                }
                None => {
                    basis.insert(lead, row);
                    picked.push(i);
                    break;
                }
            }
        }
    }
    picked
}

fn leading_bit(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * WORD + w.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::dense;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn identity_times_anything_is_anything() {
        let a = PauliString::identity(2);
        let b = p("-ZX");
        assert_eq!(a.multiply(&b).unwrap(), b);
        assert_eq!(b.multiply(&a).unwrap(), b);
    }

    #[test]
    fn z_times_x_is_plus_i_y() {
        let r = p("Z").multiply(&p("X")).unwrap();
        assert_eq!(r.phase(), 1);
        assert!(r.same_letters(&p("Y")));
    }

    #[test]
    fn zx_times_xx_is_i_y_i() {
        let r = p("ZX").multiply(&p("XX")).unwrap();
        assert_eq!(r.phase(), 1);
        assert!(r.same_letters(&p("YI")));
    }

    #[test]
    fn hermitian_paulis_square_to_identity() {
        for s in ["X", "Y", "Z", "-Y", "XYZ", "-ZZYX"] {
            let a = p(s);
            let sq = a.multiply(&a).unwrap();
            assert_eq!(sq, PauliString::identity(a.n()), "{s}");
        }
    }

    #[test]
    fn multiply_matches_dense_product() {
        // Exhaustive over 1-qubit signed pairs, then a 2-qubit spot sweep.
        let one: Vec<PauliString> = ["I", "X", "Y", "Z", "-I", "-X", "-Y", "-Z"]
            .iter()
            .map(|s| p(s))
            .collect();
        for a in &one {
            for b in &one {
                let r = a.multiply(b).unwrap();
                let m = dense::mat_mul(&dense::pauli_matrix(a), &dense::pauli_matrix(b));
                assert!(dense::mat_close(&m, &dense::pauli_matrix(&r), 1e-12), "{a} * {b} = {r}");
            }
        }
        let two = ["XZ", "-YY", "ZI", "IX", "YZ", "-XY"];
        for a in two {
            for b in two {
                let (a, b) = (p(a), p(b));
                let r = a.multiply(&b).unwrap();
                let m = dense::mat_mul(&dense::pauli_matrix(&a), &dense::pauli_matrix(&b));
                assert!(dense::mat_close(&m, &dense::pauli_matrix(&r), 1e-12));
            }
        }
    }

    #[test]
    fn commutation_cases() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        for s in ["X", "ZZ", "-XYZ"] {
            assert!(p(s).commutes(&p(s)).unwrap());
        }
    }

    #[test]
    fn commutes_matches_dense_commutator() {
        let strings = ["II", "XI", "IZ", "XX", "YZ", "ZY", "-YY", "XY", "ZZ"];
        for a in strings {
            for b in strings {
                let (a, b) = (p(a), p(b));
                let ab = dense::mat_mul(&dense::pauli_matrix(&a), &dense::pauli_matrix(&b));
                let ba = dense::mat_mul(&dense::pauli_matrix(&b), &dense::pauli_matrix(&a));
                assert_eq!(a.commutes(&b).unwrap(), dense::mat_close(&ab, &ba, 1e-12));
            }
        }
    }

    #[test]
    fn rank_ignores_signs_and_duplicates() {
        let z0 = p("ZI");
        assert_eq!(gf2_rank(&[z0.clone(), z0.clone(), z0.negated()]), 1);
        assert_eq!(gf2_rank(&[p("ZI"), p("XI"), p("YI")]), 2);
        assert_eq!(gf2_rank(&[]), 0);
    }

    #[test]
    fn generators_pick_first_independent_rows() {
        let list = vec![p("ZI"), p("-ZI"), p("XI"), p("YI"), p("IZ")];
        assert_eq!(gf2_generators(&list), vec![0, 2, 4]);
    }

    #[test]
    fn text_round_trip() {
        for s in ["XXYIZ", "-XXYIZ", "I", "-Z", "YYYXZ"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("+XY").to_string(), "XY");
        assert_eq!(p("iZ").to_string(), "iZ");
        assert_eq!(p("-iZ").to_string(), "-iZ");
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
    }

    #[test]
    fn restrict_and_embed_round_trip() {
        let a = p("-XIYZI");
        let r = a.restrict(&[0, 2, 3]).unwrap();
        assert_eq!(r.to_string(), "-XYZ");
        let back = r.embed(5, &[0, 2, 3]).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn multiply_associative_on_random_triples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=5);
            let rand_pauli = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut q = PauliString::identity(n);
                for i in 0..n {
                    q.set_letter(
                        i,
                        [Letter::I, Letter::X, Letter::Y, Letter::Z][rng.gen_range(0..4)],
                    );
                }
                if rng.gen_bool(0.5) {
                    q.negate();
                }
                q
            };
            let (a, b, c) = (rand_pauli(&mut rng), rand_pauli(&mut rng), rand_pauli(&mut rng));
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }
}
