//! Fermion-to-qubit mappings producing Majorana-product Pauli operators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{gf2_rank, Letter, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MappingKind {
    JordanWigner,
    BravyiKitaev,
}

/// Mapping from `n_modes` fermionic modes onto `n_modes` qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FermionMapping {
    pub kind: MappingKind,
    pub n_modes: usize,
}

impl FermionMapping {
    pub fn jordan_wigner(n_modes: usize) -> Self {
        FermionMapping {
            kind: MappingKind::JordanWigner,
            n_modes,
        }
    }

    pub fn bravyi_kitaev(n_modes: usize) -> Self {
        FermionMapping {
            kind: MappingKind::BravyiKitaev,
            n_modes,
        }
    }

    /// Hermitian Majorana operator with a plus sign. Index 2j is
    /// a_j^dag + a_j and index 2j+1 is i(a_j^dag - a_j).
    pub fn majorana(&self, index: usize) -> Result<PauliString> {
        if index >= 2 * self.n_modes {
            return Err(Error::MajoranaOutOfRange {
                index,
                n_modes: self.n_modes,
            });
        }
        let j = index / 2;
        let barred = index % 2 == 1;
        let n = self.n_modes;
        let mut p = PauliString::identity(n);
        match self.kind {
            MappingKind::JordanWigner => {
                for q in 0..j {
                    p.set_letter(q, Letter::Z);
                }
                p.set_letter(j, if barred { Letter::Y } else { Letter::X });
            }
            MappingKind::BravyiKitaev => {
                let tree = FenwickTree::new(n);
                for q in tree.update_set(j) {
                    p.set_letter(q, Letter::X);
                }
                let z_set = if barred { tree.remainder_set(j) } else { tree.parity_set(j) };
                for q in z_set {
                    p.set_letter(q, Letter::Z);
                }
                p.set_letter(j, if barred { Letter::Y } else { Letter::X });
            }
        }
        Ok(p)
    }

    /// Left-to-right product of Majorana operators, normalized to a Hermitian
    /// ±Pauli by multiplying with i^w; returns the applied power w alongside.
    pub fn majorana_product(&self, indices: &[usize]) -> Result<(PauliString, u8)> {
        if indices.is_empty() {
            return Err(Error::InvalidInput("empty majorana index list".into()));
        }
        let mut acc = PauliString::identity(self.n_modes);
        for &i in indices {
            acc = acc.multiply(&self.majorana(i)?)?;
        }
        let w = match acc.phase() {
            0 | 2 => 0,
            _ => 1,
        };
        acc.mul_i_power(w);
        Ok((acc, w))
    }

    /// The eight Majorana monomials generating the double excitation
    /// a_i†a_j†a_k a_l − a_k†a_l†a_i a_j, paired with the ±1 coefficients of
    /// its −(i/8)·(...) expansion. Monomials are Hermitian ±Paulis; the list
    /// is mutually commuting with GF(2) rank 4, spanned by the first four.
    pub fn double_excitation_terms(
        &self,
        modes: (usize, usize, usize, usize),
    ) -> Result<Vec<(PauliString, i8)>> {
        let (i, j, k, l) = modes;
        let m = [i, j, k, l];
        for a in 0..4 {
            for b in a + 1..4 {
                if m[a] == m[b] {
                    return Err(Error::RepeatedExcitationIndex);
                }
            }
        }
        // Bar mask over (i, j, k, l) and expansion sign for each monomial,
        // verified against the dense fermionic-operator oracle.
        const TERMS: [([bool; 4], i8); 8] = [
            ([false, false, false, true], -1),
            ([false, false, true, false], -1),
            ([false, true, false, false], 1),
            ([true, false, false, false], 1),
            ([true, true, true, false], 1),
            ([true, true, false, true], 1),
            ([true, false, true, true], -1),
            ([false, true, true, true], -1),
        ];
        let mut out = Vec::with_capacity(8);
        for (bars, coeff) in TERMS {
            let indices: Vec<usize> = m
                .iter()
                .zip(bars)
                .map(|(&mode, bar)| 2 * mode + usize::from(bar))
                .collect();
            let (p, w) = self.majorana_product(&indices)?;
            debug_assert_eq!(w, 0, "4-products of distinct majoranas are Hermitian");
            out.push((p, coeff));
        }
        debug_assert_eq!(gf2_rank(&out.iter().map(|(p, _)| p.clone()).collect::<Vec<_>>()), 4);
        Ok(out)
    }
}

/// Interval tree over mode indices in the style of a Fenwick prefix-sum
/// structure; node q covers the contiguous interval [lo(q), q]. Truncation to
/// arbitrary sizes falls out of the recursive construction.
struct FenwickTree {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    lo: Vec<usize>,
}

impl FenwickTree {
    fn new(n: usize) -> Self {
        let mut t = FenwickTree {
            parent: vec![None; n],
            children: vec![Vec::new(); n],
            lo: (0..n).collect(),
        };
        if n > 0 {
            t.build(0, n - 1, n - 1);
            t.fill_lo(n - 1);
        }
        t
    }

    fn build(&mut self, left: usize, right: usize, parent: usize) {
        if left >= right {
            return;
        }
        let pivot = (left + right) >> 1;
        self.parent[pivot] = Some(parent);
        self.children[parent].push(pivot);
        self.build(left, pivot, pivot);
        if pivot + 1 < right {
            self.build(pivot + 1, right, parent);
        }
    }

    fn fill_lo(&mut self, node: usize) -> usize {
        let mut lo = node;
        for c in self.children[node].clone() {
            lo = lo.min(self.fill_lo(c));
        }
        self.lo[node] = lo;
        lo
    }

    /// Qubits other than j that flip when mode j's occupation flips.
    fn update_set(&self, j: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = j;
        while let Some(p) = self.parent[cur] {
            out.push(p);
            cur = p;
        }
        out
    }

    /// Qubits storing the occupation parity of modes 0..j.
    fn parity_set(&self, j: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut i = j as isize - 1;
        while i >= 0 {
            out.push(i as usize);
            i = self.lo[i as usize] as isize - 1;
        }
        out
    }

    /// Parity set minus the direct children of j.
    fn remainder_set(&self, j: usize) -> Vec<usize> {
        self.parity_set(j)
            .into_iter()
            .filter(|q| !self.children[j].contains(q))
            .collect()
    }
}
