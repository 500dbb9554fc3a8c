//! Gaussian exchange couplings, classical Ising energies of basis
//! configurations, and exhaustive frustration reports.
//!
//! This sits beside the state-analysis modules rather than underneath them:
//! phase tags never consult the couplings, but users relating a
//! superposition's branches to the classical landscape need the energies
//! and the bond-satisfaction picture of the same configurations.

use rand::Rng;
use rand_distr::Normal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{BasisState, SystemSize};
use crate::error::{Error, Result};
use crate::superposition::substream_rng;

/// Exhaustive frustration scans visit 2^N configurations; cap the blast radius.
pub const MAX_FRUSTRATION_SCAN: usize = 20;

/// Symmetric exchange matrix with zero diagonal, J[i][k] = J[k][i].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(try_from = "CouplingMatrixRepr")]
pub struct CouplingMatrix {
    n: usize,
    /// Variance parameter: entries are drawn with variance j_squared / n.
    j_squared: f64,
    /// Seed used by `sample_couplings`, None for explicitly built matrices.
    seed: Option<u64>,
    values: Vec<f64>,
}

#[derive(Deserialize, Serialize)]
struct CouplingMatrixRepr {
    n: usize,
    j_squared: f64,
    seed: Option<u64>,
    values: Vec<f64>,
}

impl TryFrom<CouplingMatrixRepr> for CouplingMatrix {
    type Error = Error;

    fn try_from(repr: CouplingMatrixRepr) -> Result<Self> {
        let size = SystemSize::new(repr.n)?;
        CouplingMatrix::from_values_impl(size, repr.values, repr.j_squared, repr.seed)
    }
}

impl CouplingMatrix {
    /// Builds from an explicit row-major n*n value vector.
    pub fn from_values(n: SystemSize, values: Vec<f64>, j_squared: f64) -> Result<Self> {
        Self::from_values_impl(n, values, j_squared, None)
    }

    fn from_values_impl(
        n: SystemSize,
        values: Vec<f64>,
        j_squared: f64,
        seed: Option<u64>,
    ) -> Result<Self> {
        let len = n.n() * n.n();
        if values.len() != len {
            return Err(Error::InvalidConfig(format!(
                "coupling matrix for {} spins needs {} entries, got {}",
                n.n(),
                len,
                values.len()
            )));
        }
        if !(j_squared.is_finite() && j_squared > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "j_squared must be a positive finite number, got {j_squared}"
            )));
        }
        for i in 0..n.n() {
            if values[i * n.n() + i] != 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "nonzero diagonal entry at spin {}",
                    i + 1
                )));
            }
            for k in 0..i {
                if values[i * n.n() + k] != values[k * n.n() + i]
                    || !values[i * n.n() + k].is_finite()
                {
                    return Err(Error::InvalidConfig(format!(
                        "coupling matrix not symmetric/finite at ({}, {})",
                        i + 1,
                        k + 1
                    )));
                }
            }
        }
        Ok(CouplingMatrix {
            n: n.n(),
            j_squared,
            seed,
            values,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> SystemSize {
        SystemSize::new(self.n).expect("validated on construction")
    }

    pub fn j_squared(&self) -> f64 {
        self.j_squared
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Exchange constant between two (1-based) spins.
    pub fn coupling(&self, i: usize, k: usize) -> Result<f64> {
        for spin in [i, k] {
            if spin == 0 || spin > self.n {
                return Err(Error::SpinIndexError { index: spin, n: self.n });
            }
        }
        Ok(self.values[(i - 1) * self.n + (k - 1)])
    }

    #[inline]
    fn get(&self, i0: usize, k0: usize) -> f64 {
        self.values[i0 * self.n + k0]
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Draws a symmetric coupling matrix with zero-mean Gaussian entries of
/// variance j^2/n on the off-diagonal (upper triangle filled row-major,
/// then mirrored). Deterministic in (n, j, seed).
pub fn sample_couplings(n: SystemSize, j: f64, seed: u64) -> Result<CouplingMatrix> {
    if !(j.is_finite() && j > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "coupling scale j must be positive and finite, got {j}"
        )));
    }
    let sigma = (j * j / n.n() as f64).sqrt();
    let normal = Normal::new(0.0, sigma)
        .map_err(|e| Error::InvalidConfig(format!("bad Gaussian parameters: {e}")))?;
    let mut rng = substream_rng(seed, 0);
    let mut values = vec![0.0; n.n() * n.n()];
    for i in 0..n.n() {
        for k in (i + 1)..n.n() {
            let draw: f64 = rng.sample(normal);
            values[i * n.n() + k] = draw;
            values[k * n.n() + i] = draw;
        }
    }
    let mut m = CouplingMatrix::from_values(n, values, j * j)?;
    m.seed = Some(seed);
    Ok(m)
}

#[inline]
fn sign_of(state: BasisState, spin: usize) -> f64 {
    if state.is_excited(spin).expect("spin index in range") {
        1.0
    } else {
        -1.0
    }
}

/// Classical energy -sum_{i<k} J_ik s_i s_k with s = +1 for e, -1 for g.
pub fn energy(state: BasisState, c: &CouplingMatrix) -> Result<f64> {
    if state.size().n() != c.n {
        return Err(Error::SizeMismatch(state.size().n(), c.n));
    }
    let mut acc = 0.0;
    for i in 1..=c.n {
        let si = sign_of(state, i);
        for k in (i + 1)..=c.n {
            acc += c.get(i - 1, k - 1) * si * sign_of(state, k);
        }
    }
    Ok(-acc)
}

/// Number of bonds with J_ik s_i s_k < 0. Zero couplings count as satisfied.
pub fn unsatisfied_bonds(state: BasisState, c: &CouplingMatrix) -> Result<usize> {
    if state.size().n() != c.n {
        return Err(Error::SizeMismatch(state.size().n(), c.n));
    }
    let mut count = 0;
    for i in 1..=c.n {
        let si = sign_of(state, i);
        for k in (i + 1)..=c.n {
            if c.get(i - 1, k - 1) * si * sign_of(state, k) < 0.0 {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Energy and bond-satisfaction summary of one configuration.
#[derive(Clone, Debug, Serialize)]
pub struct EnergyRecord {
    /// Basis index of the configuration.
    pub state: u64,
    pub energy: f64,
    pub unsatisfied_bonds: usize,
}

pub fn energy_record(state: BasisState, c: &CouplingMatrix) -> Result<EnergyRecord> {
    Ok(EnergyRecord {
        state: state.index(),
        energy: energy(state, c)?,
        unsatisfied_bonds: unsatisfied_bonds(state, c)?,
    })
}

/// Exhaustive landscape summary over all 2^N configurations.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct FrustrationReport {
    pub n: usize,
    pub min_energy: f64,
    /// Basis indices of all configurations at the minimum energy, ascending.
    pub ground_states: Vec<u64>,
    pub ground_degeneracy: usize,
    /// Minimum over configurations of the unsatisfied-bond count.
    pub min_unsatisfied_bonds: usize,
    /// True iff even the best configuration leaves a bond unsatisfied.
    pub frustrated: bool,
}

/// Scans every configuration for the ground set and the frustration flag.
pub fn frustration_report(c: &CouplingMatrix) -> Result<FrustrationReport> {
    if c.n > MAX_FRUSTRATION_SCAN {
        return Err(Error::SizeOutOfRange {
            n: c.n,
            min: SystemSize::MIN,
            max: MAX_FRUSTRATION_SCAN,
            context: "exhaustive frustration scan",
        });
    }
    let size = c.size();
    let dim = 1u64 << c.n;
    let eval = |x: u64| -> (f64, usize) {
        let s = BasisState::new(size, x).expect("index below 2^n");
        (
            energy(s, c).expect("sizes match"),
            unsatisfied_bonds(s, c).expect("sizes match"),
        )
    };
    let (min_energy, min_unsat) = (0..dim)
        .into_par_iter()
        .map(eval)
        .reduce(
            || (f64::INFINITY, usize::MAX),
            |a, b| (a.0.min(b.0), a.1.min(b.1)),
        );
    let mut ground_states: Vec<u64> = (0..dim)
        .into_par_iter()
        .filter(|&x| eval(x).0 == min_energy)
        .collect();
    ground_states.sort_unstable();
    Ok(FrustrationReport {
        n: c.n,
        min_energy,
        ground_degeneracy: ground_states.len(),
        ground_states,
        min_unsatisfied_bonds: min_unsat,
        frustrated: min_unsat > 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn size(n: usize) -> SystemSize {
        SystemSize::new(n).unwrap()
    }

    fn basis(n: usize, index: u64) -> BasisState {
        BasisState::new(size(n), index).unwrap()
    }

    fn afm_triangle() -> CouplingMatrix {
        let v = vec![0.0, -1.0, -1.0, -1.0, 0.0, -1.0, -1.0, -1.0, 0.0];
        CouplingMatrix::from_values(size(3), v, 1.0).unwrap()
    }

    fn ferro(n: usize) -> CouplingMatrix {
        let mut v = vec![1.0; n * n];
        for i in 0..n {
            v[i * n + i] = 0.0;
        }
        CouplingMatrix::from_values(size(n), v, 1.0).unwrap()
    }

    #[test]
    fn sampling_shape_and_determinism() {
        let a = sample_couplings(size(5), 1.0, 42).unwrap();
        assert_eq!(a.n(), 5);
        assert_eq!(a.seed(), Some(42));
        assert_abs_diff_eq!(a.j_squared(), 1.0, epsilon = 0.0);
        for i in 1..=5 {
            assert_eq!(a.coupling(i, i).unwrap(), 0.0);
            for k in 1..=5 {
                assert_eq!(a.coupling(i, k).unwrap(), a.coupling(k, i).unwrap());
            }
        }
        let b = sample_couplings(size(5), 1.0, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_couplings(size(5), 1.0, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sampling_statistics() {
        // 20_000 matrices at n=4 give 120_000 upper-triangle draws.
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        let mut count = 0usize;
        for seed in 0..20_000u64 {
            let m = sample_couplings(size(4), 1.0, seed).unwrap();
            for i in 1..=4 {
                for k in (i + 1)..=4 {
                    let v = m.coupling(i, k).unwrap();
                    sum += v;
                    sum_sq += v * v;
                    count += 1;
                }
            }
        }
        let mean = sum / count as f64;
        let var = sum_sq / count as f64 - mean * mean;
        // Target variance j^2/n = 0.25; mean 0 within 3 standard errors.
        let stderr = (0.25f64 / count as f64).sqrt();
        assert!(mean.abs() < 3.0 * stderr, "mean {mean}, stderr {stderr}");
        assert!((var - 0.25).abs() < 0.05 * 0.25, "variance {var}");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(sample_couplings(size(4), 0.0, 1).is_err());
        assert!(sample_couplings(size(4), -1.0, 1).is_err());
        assert!(sample_couplings(size(4), f64::NAN, 1).is_err());
        // Wrong length, asymmetric, nonzero diagonal.
        assert!(CouplingMatrix::from_values(size(3), vec![0.0; 8], 1.0).is_err());
        let mut v = vec![0.0; 9];
        v[1] = 1.0;
        assert!(CouplingMatrix::from_values(size(3), v, 1.0).is_err());
        let mut v = vec![0.0; 9];
        v[4] = 2.0;
        assert!(CouplingMatrix::from_values(size(3), v, 1.0).is_err());
    }

    #[test]
    fn ferromagnetic_ground_state() {
        let c = ferro(4);
        let e_all = energy(basis(4, 0b1111), &c).unwrap();
        assert_abs_diff_eq!(e_all, -6.0, epsilon = 0.0);
        for x in 0..16u64 {
            assert!(energy(basis(4, x), &c).unwrap() >= e_all);
        }
        assert_eq!(unsatisfied_bonds(basis(4, 0b1111), &c).unwrap(), 0);
    }

    #[test]
    fn z2_symmetry_is_exact() {
        let c = sample_couplings(size(6), 1.3, 7).unwrap();
        for x in 0..64u64 {
            let s = basis(6, x);
            let e1 = energy(s, &c).unwrap();
            let e2 = energy(s.complement(), &c).unwrap();
            assert_eq!(e1, e2, "x={x}");
            assert_eq!(
                unsatisfied_bonds(s, &c).unwrap(),
                unsatisfied_bonds(s.complement(), &c).unwrap()
            );
        }
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let c = afm_triangle();
        assert!(energy(basis(4, 0), &c).is_err());
        assert!(unsatisfied_bonds(basis(2, 0), &c).is_err());
    }

    #[test]
    fn afm_triangle_is_frustrated() {
        let c = afm_triangle();
        for x in 0..8u64 {
            assert!(unsatisfied_bonds(basis(3, x), &c).unwrap() >= 1, "x={x}");
        }
        let r = frustration_report(&c).unwrap();
        assert!(r.frustrated);
        assert_eq!(r.min_unsatisfied_bonds, 1);
        assert_abs_diff_eq!(r.min_energy, -1.0, epsilon = 0.0);
        assert_eq!(r.ground_degeneracy, 6);
        assert_eq!(r.ground_states, vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn ferro_report_is_unfrustrated() {
        let r = frustration_report(&ferro(5)).unwrap();
        assert!(!r.frustrated);
        assert_eq!(r.min_unsatisfied_bonds, 0);
        assert_eq!(r.ground_states, vec![0, 0b11111]);
    }

    #[test]
    fn ground_sets_pair_under_spin_flip() {
        for seed in [1u64, 2, 3, 11] {
            let c = sample_couplings(size(6), 1.0, seed).unwrap();
            let r = frustration_report(&c).unwrap();
            assert_eq!(r.ground_degeneracy % 2, 0, "seed {seed}");
            let mask = 63u64;
            for &g in &r.ground_states {
                assert!(
                    r.ground_states.contains(&(g ^ mask)),
                    "seed {seed}: complement of {g} missing"
                );
            }
            // Scan agrees with a direct sequential minimum.
            let direct = (0..64u64)
                .map(|x| energy(basis(6, x), &c).unwrap())
                .fold(f64::INFINITY, f64::min);
            assert_eq!(r.min_energy, direct);
        }
    }

    #[test]
    fn report_is_reproducible_per_seed() {
        let c = sample_couplings(size(6), 1.0, 2024).unwrap();
        let first = frustration_report(&c).unwrap();
        let second = frustration_report(&sample_couplings(size(6), 1.0, 2024).unwrap()).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn scan_size_cap() {
        let values = vec![0.0; 21 * 21];
        // Build by hand to skip SystemSize limits on the sampling path.
        let c = CouplingMatrix {
            n: 21,
            j_squared: 1.0,
            seed: None,
            values,
        };
        assert!(matches!(
            frustration_report(&c),
            Err(Error::SizeOutOfRange { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let c = sample_couplings(size(4), 2.0, 9).unwrap();
        let text = c.to_json().unwrap();
        let back = CouplingMatrix::from_json(&text).unwrap();
        assert_eq!(c, back);
        assert_eq!(back.seed(), Some(9));
        assert_abs_diff_eq!(back.j_squared(), 4.0, epsilon = 0.0);
        // Tampered payloads are rejected on deserialization.
        let bad = text.replace("\"n\": 4", "\"n\": 3");
        assert!(CouplingMatrix::from_json(&bad).is_err());
    }
}
