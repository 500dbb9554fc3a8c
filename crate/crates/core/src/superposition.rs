//! Construction of normalized superposition states over the N-spin basis:
//! binary superpositions of two basis configurations, random states, label
//! product states, GHZ states, and the cluster decomposition of a binary
//! superposition into a GHZ-like part on its C-spins tensor a fixed product
//! on the rest.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::basis::{label_pair, BasisState, SpinLabel, SpinLabelVector, SystemSize};
use crate::error::{Error, Result};

/// Norm below which a superposition counts as collapsed to zero.
const DEGENERATE_NORM_SQR: f64 = 1e-24;

/// RNG used by every seeded constructor in the crate. Reproducibility
/// contract: the key is `seed_from_u64(seed)` and independent substreams are
/// selected by the ChaCha stream parameter, one per sample index.
pub const RNG_ALGORITHM: &str = "ChaCha8 (key = seed_from_u64(seed), stream = sample index)";

pub(crate) fn substream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Complex weights of a binary superposition, |alpha|^2 + |beta|^2 = 1.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct BinaryWeights {
    alpha: Complex64,
    beta: Complex64,
}

impl BinaryWeights {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
        if (norm_sqr - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "binary weights not normalized: |alpha|^2 + |beta|^2 = {norm_sqr}"
            )));
        }
        Ok(BinaryWeights { alpha, beta })
    }

    /// alpha = beta = 1/sqrt(2).
    pub fn equal() -> Self {
        let w = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        BinaryWeights { alpha: w, beta: w }
    }

    /// alpha = e^{-i gamma}/sqrt(2), beta = 1/sqrt(2): equal magnitudes with
    /// a relative phase between the branches.
    pub fn equal_with_phase(gamma: f64) -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        BinaryWeights {
            alpha: Complex64::from_polar(r, -gamma),
            beta: Complex64::new(r, 0.0),
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }
}

/// How a state vector was produced; carried through to output metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    BinaryPair {
        a: u64,
        b: u64,
        #[serde(with = "complex_pair")]
        alpha: Complex64,
        #[serde(with = "complex_pair")]
        beta: Complex64,
    },
    Random {
        seed: u64,
        stream: u64,
    },
    Constructed,
}

/// A normalized complex amplitude vector over the 2^N computational basis.
#[derive(Clone, Debug)]
pub struct SuperpositionState {
    n: SystemSize,
    amplitudes: Vec<Complex64>,
    provenance: Provenance,
}

impl SuperpositionState {
    /// Wraps and normalizes an arbitrary amplitude vector (provenance
    /// `Constructed`). The vector length must be 2^N for a valid N.
    pub fn from_amplitudes(n: SystemSize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != n.dim() {
            return Err(Error::InvalidConfig(format!(
                "amplitude vector has length {}, want 2^{} = {}",
                amplitudes.len(),
                n.n(),
                n.dim()
            )));
        }
        let mut state = SuperpositionState {
            n,
            amplitudes,
            provenance: Provenance::Constructed,
        };
        state.normalize()?;
        Ok(state)
    }

    fn normalize(&mut self) -> Result<()> {
        let norm_sqr = self.norm_sqr();
        if norm_sqr < DEGENERATE_NORM_SQR {
            return Err(Error::DegenerateState);
        }
        let norm = norm_sqr.sqrt();
        for amp in &mut self.amplitudes {
            *amp /= norm;
        }
        Ok(())
    }

    #[inline]
    pub fn size(&self) -> SystemSize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// |<self|other>|^2.
    pub fn fidelity(&self, other: &SuperpositionState) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n.n(), other.n.n()));
        }
        let overlap: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(overlap.norm_sqr())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// alpha|a> + beta|b>, renormalized. The diagonal case a = b collapses to
/// the bare basis state unless the weights cancel exactly.
pub fn binary_ss(a: BasisState, b: BasisState, w: BinaryWeights) -> Result<SuperpositionState> {
    if a.size() != b.size() {
        return Err(Error::SizeMismatch(a.size().n(), b.size().n()));
    }
    let n = a.size();
    let mut amplitudes = vec![Complex64::ZERO; n.dim()];
    amplitudes[a.index() as usize] += w.alpha;
    amplitudes[b.index() as usize] += w.beta;
    let mut state = SuperpositionState {
        n,
        amplitudes,
        provenance: Provenance::BinaryPair {
            a: a.index(),
            b: b.index(),
            alpha: w.alpha,
            beta: w.beta,
        },
    };
    state.normalize()?;
    Ok(state)
}

/// Equal-weight binary superposition (|a> + |b>)/sqrt(2).
pub fn equal_binary_ss(a: BasisState, b: BasisState) -> Result<SuperpositionState> {
    binary_ss(a, b, BinaryWeights::equal())
}

/// A full random superposition: every amplitude drawn with independent
/// standard-normal real and imaginary parts, then globally normalized.
/// Deterministic per seed.
pub fn random_ss(n: SystemSize, seed: u64) -> Result<SuperpositionState> {
    random_ss_indexed(n, seed, 0)
}

/// Substream variant used by sweeps: sample `stream` of the given seed, so
/// samples can be generated independently and in parallel.
pub fn random_ss_indexed(n: SystemSize, seed: u64, stream: u64) -> Result<SuperpositionState> {
    if n.n() > SystemSize::MAX_PAIR_ENUM {
        return Err(Error::SizeOutOfRange {
            n: n.n(),
            min: SystemSize::MIN,
            max: SystemSize::MAX_PAIR_ENUM,
            context: "random state construction",
        });
    }
    let mut rng = substream_rng(seed, stream);
    let amplitudes: Vec<Complex64> = (0..n.dim())
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    let mut state = SuperpositionState {
        n,
        amplitudes,
        provenance: Provenance::Random { seed, stream },
    };
    state.normalize()?;
    Ok(state)
}

/// Tensor product over the labels: |e>, |g>, or (|e> + |g>)/sqrt(2) per spin.
pub fn product_state(labels: &SpinLabelVector) -> SuperpositionState {
    let n = labels.size();
    let mut amplitudes = vec![Complex64::new(1.0, 0.0)];
    let half = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    for &label in labels.labels() {
        let mut next = vec![Complex64::ZERO; amplitudes.len() * 2];
        for (i, &amp) in amplitudes.iter().enumerate() {
            match label {
                SpinLabel::Excited => next[2 * i + 1] = amp,
                SpinLabel::Ground => next[2 * i] = amp,
                SpinLabel::Cat => {
                    next[2 * i] = amp * half;
                    next[2 * i + 1] = amp * half;
                }
            }
        }
        amplitudes = next;
    }
    SuperpositionState {
        n,
        amplitudes,
        provenance: Provenance::Constructed,
    }
}

/// (|g...g> + |e...e>)/sqrt(2).
pub fn ghz(n: SystemSize) -> SuperpositionState {
    let bottom = BasisState::new(n, 0).unwrap();
    let top = BasisState::new(n, n.dim() as u64 - 1).unwrap();
    equal_binary_ss(top, bottom).expect("distinct branches cannot cancel")
}

/// An equal-weight binary superposition split into its entangled cluster
/// (the C-spins, which form a GHZ-like pair of branch patterns) and the
/// product part fixed to e/g on the remaining spins.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterDecomposition {
    n: SystemSize,
    /// Ascending 1-based indices of the C-spins.
    cluster: Vec<usize>,
    /// Branch `a` restricted to the cluster; branch `b` is its spin flip.
    branch_pattern: Vec<SpinLabel>,
    /// Shared e/g value for every spin outside the cluster.
    fixed: Vec<(usize, SpinLabel)>,
}

impl ClusterDecomposition {
    pub fn size(&self) -> SystemSize {
        self.n
    }

    pub fn cluster(&self) -> &[usize] {
        &self.cluster
    }

    pub fn cluster_size(&self) -> usize {
        self.cluster.len()
    }

    pub fn branch_pattern(&self) -> &[SpinLabel] {
        &self.branch_pattern
    }

    pub fn fixed(&self) -> &[(usize, SpinLabel)] {
        &self.fixed
    }

    /// Rebuilds the full state vector as (product on fixed spins) tensor
    /// (equal superposition of the two branch patterns on the cluster).
    /// Walks every basis index and multiplies indicator factors, so it is an
    /// independent route from `binary_ss`.
    pub fn reconstruct(&self) -> SuperpositionState {
        let dim = self.n.dim();
        let half = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut amplitudes = vec![Complex64::ZERO; dim];
        'outer: for (k, amp) in amplitudes.iter_mut().enumerate() {
            for &(spin, label) in &self.fixed {
                let bit = self.n.bit_of_spin(spin).unwrap();
                let excited = k >> bit & 1 == 1;
                if excited != (label == SpinLabel::Excited) {
                    continue 'outer;
                }
            }
            // Within the cluster the index must match the branch pattern or
            // its flip on every spin at once.
            let mut matches_a = true;
            let mut matches_b = true;
            for (&spin, &label) in self.cluster.iter().zip(&self.branch_pattern) {
                let bit = self.n.bit_of_spin(spin).unwrap();
                let excited = k >> bit & 1 == 1;
                if excited != (label == SpinLabel::Excited) {
                    matches_a = false;
                } else {
                    matches_b = false;
                }
            }
            if matches_a || matches_b {
                *amp = half;
            }
        }
        SuperpositionState {
            n: self.n,
            amplitudes,
            provenance: Provenance::Constructed,
        }
    }
}

/// Splits the pair (a, b) into its C-spin cluster, the branch pattern of `a`
/// on that cluster, and the shared e/g labels elsewhere.
pub fn cluster_decompose(a: BasisState, b: BasisState) -> Result<ClusterDecomposition> {
    if a.size() != b.size() {
        return Err(Error::SizeMismatch(a.size().n(), b.size().n()));
    }
    if a == b {
        return Err(Error::NoCluster);
    }
    let n = a.size();
    let labels = label_pair(a, b)?;
    let mut cluster = Vec::new();
    let mut branch_pattern = Vec::new();
    let mut fixed = Vec::new();
    for (spin, &label) in n.spins().zip(labels.labels()) {
        match label {
            SpinLabel::Cat => {
                cluster.push(spin);
                branch_pattern.push(if a.is_excited(spin)? {
                    SpinLabel::Excited
                } else {
                    SpinLabel::Ground
                });
            }
            shared => fixed.push((spin, shared)),
        }
    }
    Ok(ClusterDecomposition {
        n,
        cluster,
        branch_pattern,
        fixed,
    })
}

mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// Wire format: amplitudes as [re, im] pairs plus size and provenance.
#[derive(Serialize, Deserialize)]
struct StateRepr {
    n: usize,
    provenance: Provenance,
    amplitudes: Vec<[f64; 2]>,
}

impl Serialize for SuperpositionState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateRepr {
            n: self.n.n(),
            provenance: self.provenance.clone(),
            amplitudes: self.amplitudes.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SuperpositionState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = StateRepr::deserialize(d)?;
        let n = SystemSize::new(repr.n).map_err(D::Error::custom)?;
        if repr.amplitudes.len() != n.dim() {
            return Err(D::Error::custom(format!(
                "amplitude vector has length {}, want {}",
                repr.amplitudes.len(),
                n.dim()
            )));
        }
        let amplitudes: Vec<Complex64> = repr
            .amplitudes
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        let state = SuperpositionState {
            n,
            amplitudes,
            provenance: repr.provenance,
        };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > 1e-9 {
            return Err(D::Error::custom(format!(
                "state vector not normalized: |psi|^2 = {norm_sqr}"
            )));
        }
        Ok(state)
    }
}
