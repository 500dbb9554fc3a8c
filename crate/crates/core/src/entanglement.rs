//! Bipartite negativity of pure states, two routes: dense partial transpose
//! of the full density matrix (the validation oracle) and the Schmidt route
//! through reduced-density eigenvalues (the fast path used in sweeps).
//!
//! Raw negativity follows (||rho^T||_1 - 1)/2, which caps single-spin
//! bipartitions at 1/2; the normalized value 2*raw maps them onto [0, 1]
//! and is the scale used by the negativity-vs-q law.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis::{BasisState, SystemSize};
use crate::error::{Error, Result};
use crate::observables::Q_MAX;
use crate::superposition::SuperpositionState;

/// Eigenvalues closer to zero than this are treated as exact zeros.
pub const EIGENVALUE_FLOOR: f64 = 1e-10;

/// Size cap for building a full 2^N x 2^N density matrix.
pub const MAX_DENSE_CONSTRUCTION: usize = 12;
/// Size cap for eigensolving the full partial transpose.
pub const MAX_DENSE_EIGENSOLVE: usize = 8;

/// Full density matrix |psi><psi| of a pure state.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    n: SystemSize,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn from_state(state: &SuperpositionState) -> Result<Self> {
        let n = state.size();
        if n.n() > MAX_DENSE_CONSTRUCTION {
            return Err(Error::SizeOutOfRange {
                n: n.n(),
                min: SystemSize::MIN,
                max: MAX_DENSE_CONSTRUCTION,
                context: "dense density matrix",
            });
        }
        let amps = state.amplitudes();
        let dim = n.dim();
        let entries = DMatrix::from_fn(dim, dim, |r, c| amps[r] * amps[c].conj());
        Ok(DensityMatrix { n, entries })
    }

    pub fn size(&self) -> SystemSize {
        self.n
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.entries.nrows())
            .map(|i| self.entries[(i, i)].re)
            .sum()
    }

    /// Checks Hermiticity, unit trace, and positive semidefiniteness.
    pub fn validate(&self) -> Result<()> {
        let m = &self.entries;
        for r in 0..m.nrows() {
            for c in r..m.ncols() {
                let diff = (m[(r, c)] - m[(c, r)].conj()).norm();
                if diff > 1e-12 {
                    return Err(Error::ValidationFailure(format!(
                        "density matrix not Hermitian at ({r}, {c}): diff {diff}"
                    )));
                }
            }
        }
        if (self.trace() - 1.0).abs() > 1e-12 {
            return Err(Error::ValidationFailure(format!(
                "density matrix trace {} != 1",
                self.trace()
            )));
        }
        let min = hermitian_eigenvalues(m.clone())
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < -1e-10 {
            return Err(Error::ValidationFailure(format!(
                "density matrix has negative eigenvalue {min}"
            )));
        }
        Ok(())
    }
}

/// Negativity of one bipartition, in both scales.
#[derive(Clone, Debug, PartialEq)]
pub struct NegativityResult {
    /// (||rho^T||_1 - 1)/2; at most 1/2 for a single spin against the rest.
    pub raw: f64,
    /// 2 * raw, in [0, 1] for single-spin bipartitions.
    pub normalized: f64,
    /// The transposed subsystem, ascending 1-based spin indices.
    pub partition: Vec<usize>,
}

impl NegativityResult {
    fn from_trace_norm(trace_norm: f64, partition: Vec<usize>) -> Self {
        let raw = 0.5 * (trace_norm - 1.0);
        NegativityResult {
            raw,
            normalized: 2.0 * raw,
            partition,
        }
    }
}

/// Validates a bipartition and returns the bit positions of its spins.
fn partition_bits(n: SystemSize, partition: &[usize]) -> Result<Vec<u32>> {
    if partition.is_empty() {
        return Err(Error::PartitionError("empty partition".into()));
    }
    if partition.len() >= n.n() {
        return Err(Error::PartitionError(format!(
            "partition of {} spins is not a proper subset of {} spins",
            partition.len(),
            n.n()
        )));
    }
    let mut spins: Vec<usize> = partition.to_vec();
    spins.sort_unstable();
    spins.dedup();
    if spins.len() != partition.len() {
        return Err(Error::PartitionError("duplicate spin index".into()));
    }
    spins.iter().map(|&s| n.bit_of_spin(s)).collect()
}

/// Eigenvalues of a Hermitian matrix (unsorted).
pub fn hermitian_eigenvalues(m: DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 1 {
        return vec![m[(0, 0)].re];
    }
    let eig = nalgebra::SymmetricEigen::new(m);
    eig.eigenvalues.iter().copied().collect()
}

fn zero_clamped(values: impl IntoIterator<Item = f64>) -> impl Iterator<Item = f64> {
    values
        .into_iter()
        .map(|v| if v.abs() < EIGENVALUE_FLOOR { 0.0 } else { v })
}

/// Transposes the tensor indices of the chosen spins. Hermiticity is
/// preserved; positivity generally is not, which is the whole point.
pub fn partial_transpose(rho: &DensityMatrix, partition: &[usize]) -> Result<DMatrix<Complex64>> {
    let bits = partition_bits(rho.n, partition)?;
    let mask: usize = bits.iter().map(|&b| 1usize << b).sum();
    let dim = rho.n.dim();
    let src = &rho.entries;
    Ok(DMatrix::from_fn(dim, dim, |r, c| {
        let tr = (r & !mask) | (c & mask);
        let tc = (c & !mask) | (r & mask);
        src[(tr, tc)]
    }))
}

/// Negativity via the eigenvalues of the dense partial transpose.
pub fn negativity_dense(
    state: &SuperpositionState,
    partition: &[usize],
) -> Result<NegativityResult> {
    let n = state.size();
    if n.n() > MAX_DENSE_EIGENSOLVE {
        return Err(Error::SizeOutOfRange {
            n: n.n(),
            min: SystemSize::MIN,
            max: MAX_DENSE_EIGENSOLVE,
            context: "dense negativity eigensolve",
        });
    }
    let rho = DensityMatrix::from_state(state)?;
    let transposed = partial_transpose(&rho, partition)?;
    let trace_norm: f64 = zero_clamped(hermitian_eigenvalues(transposed))
        .map(f64::abs)
        .sum();
    Ok(NegativityResult::from_trace_norm(
        trace_norm,
        sorted(partition),
    ))
}

fn sorted(partition: &[usize]) -> Vec<usize> {
    let mut v = partition.to_vec();
    v.sort_unstable();
    v
}

/// Scatters a compact bit pattern onto the given bit positions.
#[inline]
fn scatter(pattern: usize, positions: &[u32]) -> usize {
    positions
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &p)| acc | ((pattern >> j & 1) << p))
}

/// Reduced density matrix over the given bit positions.
fn reduced_density(state: &SuperpositionState, bits: &[u32]) -> DMatrix<Complex64> {
    let n = state.size().n();
    let amps = state.amplitudes();
    let sub_dim = 1usize << bits.len();
    let comp: Vec<u32> = (0..n as u32).filter(|b| !bits.contains(b)).collect();
    let mut rho = DMatrix::<Complex64>::zeros(sub_dim, sub_dim);
    for z in 0..1usize << comp.len() {
        let base = scatter(z, &comp);
        for x in 0..sub_dim {
            let ax = amps[base | scatter(x, bits)];
            if ax == Complex64::ZERO {
                continue;
            }
            for y in 0..sub_dim {
                rho[(x, y)] += ax * amps[base | scatter(y, bits)].conj();
            }
        }
    }
    rho
}

/// Eigenvalues of a 2x2 Hermitian matrix, closed form.
fn eigenvalues_2x2(rho: &DMatrix<Complex64>) -> [f64; 2] {
    let t = rho[(0, 0)].re + rho[(1, 1)].re;
    let det = rho[(0, 0)].re * rho[(1, 1)].re - rho[(0, 1)].norm_sqr();
    let disc = (t * t - 4.0 * det).max(0.0).sqrt();
    [0.5 * (t + disc), 0.5 * (t - disc)]
}

/// Negativity via the pure-state Schmidt route: for a pure state
/// ||rho^{T_A}||_1 = (sum_k sqrt(mu_k))^2 with mu_k the reduced-density
/// eigenvalues. A single-spin partition costs one closed-form 2x2
/// eigenproblem; larger partitions eigensolve the smaller subsystem.
pub fn negativity_schmidt(
    state: &SuperpositionState,
    partition: &[usize],
) -> Result<NegativityResult> {
    let n = state.size();
    let bits = partition_bits(n, partition)?;
    // Both reduced matrices share their nonzero spectrum; use the cheaper one.
    let bits = if bits.len() * 2 > n.n() {
        (0..n.n() as u32).filter(|b| !bits.contains(b)).collect()
    } else {
        bits
    };
    let rho = reduced_density(state, &bits);
    let eigenvalues: Vec<f64> = if rho.nrows() == 2 {
        eigenvalues_2x2(&rho).to_vec()
    } else {
        hermitian_eigenvalues(rho)
    };
    let root_sum: f64 = zero_clamped(eigenvalues).map(|mu| mu.max(0.0).sqrt()).sum();
    Ok(NegativityResult::from_trace_norm(
        root_sum * root_sum,
        sorted(partition),
    ))
}

/// Mean normalized single-spin negativity, ascending spin order.
pub fn avg_negativity(state: &SuperpositionState) -> f64 {
    let n = state.size();
    let total: f64 = n
        .spins()
        .map(|i| {
            negativity_schmidt(state, &[i])
                .expect("single-spin partition is always valid")
                .normalized
        })
        .sum();
    total / n.n() as f64
}

/// The linear law: predicted normalized negativity 1 - q/q_max.
pub fn predicted_negativity(q: f64) -> f64 {
    1.0 - q / Q_MAX
}

/// Entangled-cluster size of an equal-weight binary superposition: the
/// number of C-spins when that forms a genuine GHZ-like cluster (n_C >= 2),
/// else 0 (the state is a product state).
pub fn entangled_cluster_size(a: BasisState, b: BasisState) -> Result<usize> {
    if a.size() != b.size() {
        return Err(Error::SizeMismatch(a.size().n(), b.size().n()));
    }
    let n_c = (a.index() ^ b.index()).count_ones() as usize;
    Ok(if n_c >= 2 { n_c } else { 0 })
}

/// Averaged eigenvector-free dense check used by the validation harness:
/// mean normalized single-spin negativity through the dense oracle.
pub fn avg_negativity_dense(state: &SuperpositionState) -> Result<f64> {
    let n = state.size();
    let mut total = 0.0;
    for i in n.spins() {
        total += negativity_dense(state, &[i])?.normalized;
    }
    Ok(total / n.n() as f64)
}

/// Spectrum of the reduced state of one bipartition; exposed for tests.
pub fn reduced_eigenvalues(state: &SuperpositionState, partition: &[usize]) -> Result<DVector<f64>> {
    let bits = partition_bits(state.size(), partition)?;
    let rho = reduced_density(state, &bits);
    Ok(DVector::from_vec(hermitian_eigenvalues(rho)))
}
