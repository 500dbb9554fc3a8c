//! N-spin computational basis: bit encoding, ket strings, per-spin labels.
//!
//! A basis state is an index into the 2^N configuration space with the
//! convention bit = 1 for an excited spin. Spin `i` (1-based, leftmost in a
//! ket string) sits at bit position `N - i`, so kets read left to right as
//! spins 1..N: for N = 3, `|egg>` is `100` binary, index 4.

use std::fmt;

use crate::error::{Error, Result};

/// Number of spins in the system. Valid range is 2..=24; pair-enumeration
/// paths impose tighter caps per operation (2^N(2^N+1)/2 pairs blows up fast).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SystemSize(u8);

impl SystemSize {
    pub const MIN: usize = 2;
    pub const MAX: usize = 24;
    /// Cap for anything that walks all basis pairs.
    pub const MAX_PAIR_ENUM: usize = 12;

    pub fn new(n: usize) -> Result<Self> {
        if !(Self::MIN..=Self::MAX).contains(&n) {
            return Err(Error::SizeOutOfRange {
                n,
                min: Self::MIN,
                max: Self::MAX,
                context: "system size",
            });
        }
        Ok(SystemSize(n as u8))
    }

    #[inline]
    pub fn n(self) -> usize {
        self.0 as usize
    }

    /// Hilbert-space dimension 2^N.
    #[inline]
    pub fn dim(self) -> usize {
        1usize << self.0
    }

    /// Bit position of spin `i` (1-based): leftmost ket character is spin 1.
    #[inline]
    pub fn bit_of_spin(self, spin: usize) -> Result<u32> {
        if spin == 0 || spin > self.n() {
            return Err(Error::SpinIndexError {
                index: spin,
                n: self.n(),
            });
        }
        Ok((self.n() - spin) as u32)
    }

    /// 1-based spin indices.
    pub fn spins(self) -> impl Iterator<Item = usize> {
        1..=self.n()
    }
}

impl fmt::Display for SystemSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One computational basis configuration of an N-spin system.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisState {
    n: SystemSize,
    index: u64,
}

impl BasisState {
    pub fn new(n: SystemSize, index: u64) -> Result<Self> {
        if index >= n.dim() as u64 {
            return Err(Error::SizeOutOfRange {
                n: index as usize,
                min: 0,
                max: n.dim() - 1,
                context: "basis index",
            });
        }
        Ok(BasisState { n, index })
    }

    #[inline]
    pub fn index(self) -> u64 {
        self.index
    }

    #[inline]
    pub fn size(self) -> SystemSize {
        self.n
    }

    #[inline]
    pub fn is_excited(self, spin: usize) -> Result<bool> {
        Ok(self.index >> self.n.bit_of_spin(spin)? & 1 == 1)
    }

    /// Number of excited spins.
    #[inline]
    pub fn excited_count(self) -> u32 {
        self.index.count_ones()
    }

    /// Global spin flip (e <-> g on every spin).
    #[inline]
    pub fn complement(self) -> BasisState {
        BasisState {
            n: self.n,
            index: !self.index & (self.n.dim() as u64 - 1),
        }
    }

    /// Parses a ket string of `e`/`g` characters, e.g. `"egg"` -> index 4.
    /// Case-sensitive, one character per spin.
    pub fn parse_ket(s: &str) -> Result<Self> {
        let n = SystemSize::new(s.chars().count())?;
        let mut index = 0u64;
        for c in s.chars() {
            index <<= 1;
            match c {
                'e' => index |= 1,
                'g' => {}
                other => {
                    return Err(Error::InvalidKet {
                        ket: s.to_string(),
                        reason: format!("unexpected character {other:?}, want 'e' or 'g'"),
                    })
                }
            }
        }
        Ok(BasisState { n, index })
    }

    pub fn ket(self) -> String {
        self.n
            .spins()
            .map(|i| if self.is_excited(i).unwrap() { 'e' } else { 'g' })
            .collect()
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}>", self.ket())
    }
}

/// Per-spin role in a binary superposition: excited, ground, or the
/// equal-weight single-qubit cat state `(|e> + |g>)/sqrt(2)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpinLabel {
    Excited,
    Ground,
    Cat,
}

impl SpinLabel {
    pub fn as_char(self) -> char {
        match self {
            SpinLabel::Excited => 'e',
            SpinLabel::Ground => 'g',
            SpinLabel::Cat => 'C',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'e' => Some(SpinLabel::Excited),
            'g' => Some(SpinLabel::Ground),
            'C' => Some(SpinLabel::Cat),
            _ => None,
        }
    }
}

/// Ordered trinary labels for all N spins, e.g. `egC`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinLabelVector {
    labels: Vec<SpinLabel>,
}

impl SpinLabelVector {
    pub fn new(labels: Vec<SpinLabel>) -> Result<Self> {
        SystemSize::new(labels.len())?;
        Ok(SpinLabelVector { labels })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let labels = s
            .chars()
            .map(|c| {
                SpinLabel::from_char(c).ok_or_else(|| Error::InvalidKet {
                    ket: s.to_string(),
                    reason: format!("unexpected character {c:?}, want 'e', 'g' or 'C'"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(labels)
    }

    #[inline]
    pub fn labels(&self) -> &[SpinLabel] {
        &self.labels
    }

    #[inline]
    pub fn size(&self) -> SystemSize {
        SystemSize(self.labels.len() as u8)
    }

    /// Number of C-labelled (cat) spins.
    pub fn n_c(&self) -> usize {
        self.labels
            .iter()
            .filter(|&&l| l == SpinLabel::Cat)
            .count()
    }

    pub fn count(&self, label: SpinLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }
}

impl fmt::Display for SpinLabelVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.labels {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

fn check_same_size(a: BasisState, b: BasisState) -> Result<SystemSize> {
    if a.n != b.n {
        return Err(Error::SizeMismatch(a.n.n(), b.n.n()));
    }
    Ok(a.n)
}

/// Labels each spin by comparing the two branches: `C` where they differ,
/// `e` where both are excited, `g` where both are ground.
pub fn label_pair(a: BasisState, b: BasisState) -> Result<SpinLabelVector> {
    let n = check_same_size(a, b)?;
    let diff = a.index ^ b.index;
    let labels = n
        .spins()
        .map(|i| {
            let bit = n.bit_of_spin(i).unwrap();
            if diff >> bit & 1 == 1 {
                SpinLabel::Cat
            } else if a.index >> bit & 1 == 1 {
                SpinLabel::Excited
            } else {
                SpinLabel::Ground
            }
        })
        .collect();
    Ok(SpinLabelVector { labels })
}

/// Number of spins excited in both branches (rule (i) input).
pub fn co_excited_count(a: BasisState, b: BasisState) -> Result<u32> {
    check_same_size(a, b)?;
    Ok((a.index & b.index).count_ones())
}

/// All 2^N basis states in ascending index order.
pub fn enumerate_basis(n: SystemSize) -> impl Iterator<Item = BasisState> {
    (0..n.dim() as u64).map(move |index| BasisState { n, index })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(n: usize, index: u64) -> BasisState {
        BasisState::new(SystemSize::new(n).unwrap(), index).unwrap()
    }

    #[test]
    fn size_range_enforced() {
        assert!(SystemSize::new(1).is_err());
        assert!(SystemSize::new(25).is_err());
        assert!(SystemSize::new(2).is_ok());
        assert!(SystemSize::new(24).is_ok());
    }

    #[test]
    fn ket_encoding_reads_left_to_right() {
        assert_eq!(BasisState::parse_ket("egg").unwrap().index(), 4);
        assert_eq!(BasisState::parse_ket("ege").unwrap().index(), 5);
        assert_eq!(state(3, 4).ket(), "egg");
        assert_eq!(state(4, 10).ket(), "egeg");
        assert!(BasisState::parse_ket("exg").is_err());
        assert!(BasisState::parse_ket("EGG").is_err());
    }

    #[test]
    fn label_pair_examples() {
        // |egg> vs |ege>: differ only at spin 3.
        let v = label_pair(state(3, 4), state(3, 5)).unwrap();
        assert_eq!(v.to_string(), "egC");
        assert_eq!(v.n_c(), 1);

        // Full complement.
        let v = label_pair(state(3, 7), state(3, 0)).unwrap();
        assert_eq!(v.to_string(), "CCC");
        assert_eq!(v.n_c(), 3);

        // Diagonal pair: labels are just the state itself.
        let v = label_pair(state(4, 10), state(4, 10)).unwrap();
        assert_eq!(v.to_string(), "egeg");
        assert_eq!(v.n_c(), 0);
    }

    #[test]
    fn label_pair_rejects_size_mismatch() {
        assert!(matches!(
            label_pair(state(3, 4), state(4, 4)),
            Err(Error::SizeMismatch(3, 4))
        ));
        assert!(matches!(
            co_excited_count(state(3, 4), state(4, 4)),
            Err(Error::SizeMismatch(3, 4))
        ));
    }

    #[test]
    fn co_excited_examples() {
        assert_eq!(co_excited_count(state(3, 4), state(3, 5)).unwrap(), 1);
        assert_eq!(co_excited_count(state(3, 7), state(3, 0)).unwrap(), 0);
        assert_eq!(co_excited_count(state(4, 10), state(4, 10)).unwrap(), 2);
    }

    #[test]
    fn enumeration_is_complete_and_ordered() {
        let n = SystemSize::new(2).unwrap();
        let idx: Vec<u64> = enumerate_basis(n).map(|s| s.index()).collect();
        assert_eq!(idx, vec![0, 1, 2, 3]);
        assert_eq!(enumerate_basis(SystemSize::new(3).unwrap()).count(), 8);
        assert_eq!(enumerate_basis(SystemSize::new(5).unwrap()).count(), 32);
    }

    #[test]
    fn label_counts_partition_the_system() {
        let n = SystemSize::new(5).unwrap();
        for a in enumerate_basis(n) {
            for b in enumerate_basis(n) {
                let v = label_pair(a, b).unwrap();
                let w = label_pair(b, a).unwrap();
                assert_eq!(v, w, "label_pair must be symmetric");
                assert_eq!(
                    v.n_c() + v.count(SpinLabel::Excited) + v.count(SpinLabel::Ground),
                    5
                );
                assert_eq!(v.n_c() == 0, a == b);
            }
        }
    }

    #[test]
    fn complement_flips_every_spin() {
        let s = state(4, 10);
        assert_eq!(s.complement().index(), 5);
        assert_eq!(s.complement().complement(), s);
    }
}
