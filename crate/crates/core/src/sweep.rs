//! Enumeration engine: full pair sweeps, random-state scatters, the figure
//! aggregations (q histogram, negativity line, susceptibility curve), and a
//! validation harness that re-derives every oracle equivalence.
//!
//! Determinism contract: every parallel map runs over an indexed collection
//! and collects in index order, so identical config and seed produce
//! identical record sequences for any worker count.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{enumerate_basis, BasisState, SystemSize};
use crate::entanglement::{
    avg_negativity, entangled_cluster_size, negativity_dense, negativity_schmidt,
    predicted_negativity,
};
use crate::error::{Error, Result};
use crate::observables::{
    chi_from_negativity, chi_ss_finite, chi_ss_thermo, chi_zfc, order_parameters, q_ea_analytic,
    InverseTemperature,
};
use crate::output::{csv_float, CsvRecord};
use crate::phase::{classify, classify_lenient, ClassifierConfig, PhaseTag};
use crate::superposition::{
    binary_ss, equal_binary_ss, random_ss_indexed, substream_rng, BinaryWeights,
    SuperpositionState,
};

/// Pair sweeps and scatters enumerate 2^N-sized objects; cap the size.
pub const MAX_SWEEP: usize = 10;

/// Everything the CLI needs to reproduce a run; serialized into the
/// metadata sidecar next to each output file.
#[derive(Clone, Debug, Serialize)]
pub struct SweepConfig {
    pub n_range: Vec<usize>,
    pub weighting: WeightingMode,
    /// Number of random states (random-full mode only).
    pub samples: usize,
    pub seed: u64,
    pub beta_tilde: f64,
    /// None picks the per-mode classifier default.
    pub zero_tol: Option<f64>,
}

impl SweepConfig {
    pub fn new(n_range: Vec<usize>) -> Self {
        SweepConfig {
            n_range,
            weighting: WeightingMode::Equal,
            samples: 100_000,
            seed: 0,
            beta_tilde: 1.0,
            zero_tol: None,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.n_range.is_empty() {
            return Err(Error::InvalidConfig("empty size range".into()));
        }
        for &n in &self.n_range {
            checked_size(n, "sweep configuration")?;
        }
        if self.weighting != WeightingMode::Equal && self.samples == 0 {
            return Err(Error::InvalidConfig(
                "random modes need samples >= 1".into(),
            ));
        }
        if !(self.beta_tilde.is_finite() && self.beta_tilde > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "beta_tilde must be positive and finite, got {}",
                self.beta_tilde
            )));
        }
        if let Some(tol) = self.zero_tol {
            ClassifierConfig::new(tol)?;
        }
        Ok(())
    }

    /// Classifier for this run: explicit tolerance, or the mode default.
    pub fn classifier(&self) -> Result<ClassifierConfig> {
        match self.zero_tol {
            Some(tol) => ClassifierConfig::new(tol),
            None => Ok(match self.weighting {
                WeightingMode::Equal => ClassifierConfig::binary_default(),
                _ => ClassifierConfig::random_default(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightingMode {
    Equal,
    RandomBinary,
    RandomFull,
}

impl WeightingMode {
    pub fn as_str(self) -> &'static str {
        match self {
            WeightingMode::Equal => "equal",
            WeightingMode::RandomBinary => "random-binary",
            WeightingMode::RandomFull => "random-full",
        }
    }
}

impl std::str::FromStr for WeightingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equal" => Ok(WeightingMode::Equal),
            "random-binary" => Ok(WeightingMode::RandomBinary),
            "random-full" => Ok(WeightingMode::RandomFull),
            other => Err(Error::InvalidConfig(format!(
                "unknown weighting {other:?}; expected equal, random-binary or random-full"
            ))),
        }
    }
}

impl std::fmt::Display for WeightingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One analyzed pair: identification, order parameters, negativity
/// (measured and predicted by the linear law), and the phase tag.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct PhaseRecord {
    pub n: usize,
    pub a: u64,
    pub b: u64,
    pub n_c: usize,
    pub p_c: f64,
    pub m: f64,
    pub q_ea: f64,
    pub neg_avg: f64,
    #[serde(rename = "neg_pred")]
    pub neg_predicted: f64,
    pub phase: PhaseTag,
    pub cluster_size: usize,
}

impl CsvRecord for PhaseRecord {
    fn header() -> &'static str {
        "n,a,b,n_c,p_c,m,q_ea,neg_avg,neg_pred,phase,cluster_size"
    }

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.a,
            self.b,
            self.n_c,
            csv_float(self.p_c),
            csv_float(self.m),
            csv_float(self.q_ea),
            csv_float(self.neg_avg),
            csv_float(self.neg_predicted),
            self.phase.as_str(),
            self.cluster_size
        )
    }
}

fn checked_size(n: usize, context: &'static str) -> Result<SystemSize> {
    let size = SystemSize::new(n)?;
    if n > MAX_SWEEP {
        return Err(Error::SizeOutOfRange {
            n,
            min: SystemSize::MIN,
            max: MAX_SWEEP,
            context,
        });
    }
    Ok(size)
}

/// Unordered pairs including the diagonal: 2^{N-1} (2^N + 1).
pub fn pair_count(n: usize) -> u64 {
    let d = 1u64 << n;
    (d / 2) * (d + 1)
}

/// All unordered pairs (a <= b), ascending in (a, b).
fn all_pairs(size: SystemSize) -> Vec<(BasisState, BasisState)> {
    enumerate_basis(size)
        .flat_map(|a| {
            enumerate_basis(size)
                .filter(move |&b| b >= a)
                .map(move |b| (a, b))
        })
        .collect()
}

fn phase_record(
    a: BasisState,
    b: BasisState,
    state: &SuperpositionState,
    cfg: &ClassifierConfig,
    strict: bool,
) -> Result<PhaseRecord> {
    let n = state.size().n();
    let p = order_parameters(state);
    let n_c = (a.index() ^ b.index()).count_ones() as usize;
    let phase = if strict {
        classify(p.m, p.q_ea, cfg)?
    } else {
        classify_lenient(p.m, p.q_ea, cfg)
    };
    Ok(PhaseRecord {
        n,
        a: a.index(),
        b: b.index(),
        n_c,
        p_c: n_c as f64 / n as f64,
        m: p.m,
        q_ea: p.q_ea,
        neg_avg: avg_negativity(state),
        neg_predicted: predicted_negativity(p.q_ea),
        phase,
        cluster_size: entangled_cluster_size(a, b)?,
    })
}

/// One record per unordered pair of equal-weight branches, ascending (a, b).
pub fn sweep_equal_binary(n: usize) -> Result<Vec<PhaseRecord>> {
    sweep_equal_binary_with(n, &ClassifierConfig::binary_default())
}

pub fn sweep_equal_binary_with(n: usize, cfg: &ClassifierConfig) -> Result<Vec<PhaseRecord>> {
    let size = checked_size(n, "equal-weight pair sweep")?;
    all_pairs(size)
        .par_iter()
        .map(|&(a, b)| phase_record(a, b, &equal_binary_ss(a, b)?, cfg, true))
        .collect()
}

/// Draws a normalized complex weight pair from four standard normals.
fn random_weights<R: Rng>(rng: &mut R) -> BinaryWeights {
    loop {
        let draw = |rng: &mut R| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        let (za, zb) = (draw(rng), draw(rng));
        let norm_sqr = za.norm_sqr() + zb.norm_sqr();
        if norm_sqr > 1e-12 {
            let scale = norm_sqr.sqrt();
            return BinaryWeights::new(za / scale, zb / scale)
                .expect("normalized by construction");
        }
    }
}

/// Like the equal sweep, but each pair gets weights drawn from its own RNG
/// substream (stream = pair rank), so records are reproducible per seed and
/// independent of worker count. Classification is lenient: random weights
/// can land in the q < tol <= |m| wedge that strict classification rejects,
/// and there |m| <= sqrt(q) makes PM the faithful reading.
pub fn sweep_random_binary(n: usize, seed: u64) -> Result<Vec<PhaseRecord>> {
    sweep_random_binary_with(n, seed, &ClassifierConfig::random_default())
}

pub fn sweep_random_binary_with(
    n: usize,
    seed: u64,
    cfg: &ClassifierConfig,
) -> Result<Vec<PhaseRecord>> {
    let size = checked_size(n, "random-weight pair sweep")?;
    all_pairs(size)
        .par_iter()
        .enumerate()
        .map(|(rank, &(a, b))| {
            let state = if a == b {
                // Any weight pair collapses to the same physical basis state;
                // equal weights avoid the alpha + beta = 0 degeneracy.
                equal_binary_ss(a, b)?
            } else {
                let mut rng = substream_rng(seed, rank as u64);
                binary_ss(a, b, random_weights(&mut rng))?
            };
            phase_record(a, b, &state, cfg, false)
        })
        .collect()
}

/// One random-state sample: order parameters only.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ScatterRecord {
    pub sample: u64,
    pub m: f64,
    pub q_ea: f64,
}

impl CsvRecord for ScatterRecord {
    fn header() -> &'static str {
        "sample,m,q_ea"
    }

    fn csv_row(&self) -> String {
        format!("{},{},{}", self.sample, csv_float(self.m), csv_float(self.q_ea))
    }
}

/// (m, q_EA) for `samples` Haar-like random states; sample i comes from RNG
/// substream i, so any prefix is independent of the total count.
pub fn scatter_random(n: usize, samples: usize, seed: u64) -> Result<Vec<ScatterRecord>> {
    let size = checked_size(n, "random scatter")?;
    if samples == 0 {
        return Err(Error::InvalidConfig("samples must be >= 1".into()));
    }
    (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let state = random_ss_indexed(size, seed, i)?;
            let p = order_parameters(&state);
            Ok(ScatterRecord {
                sample: i,
                m: p.m,
                q_ea: p.q_ea,
            })
        })
        .collect()
}

/// Count of SG-classified equal-weight states at one exact q value.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct HistogramRecord {
    pub n: usize,
    pub q_ea: f64,
    pub count: usize,
}

impl CsvRecord for HistogramRecord {
    fn header() -> &'static str {
        "n,q_ea,count"
    }

    fn csv_row(&self) -> String {
        format!("{},{},{}", self.n, csv_float(self.q_ea), self.count)
    }
}

struct ClassifiedPair {
    a: BasisState,
    b: BasisState,
    n_c: usize,
    q_ea: f64,
    phase: PhaseTag,
}

fn classified_pairs(size: SystemSize, cfg: &ClassifierConfig) -> Result<Vec<ClassifiedPair>> {
    all_pairs(size)
        .par_iter()
        .map(|&(a, b)| {
            let state = equal_binary_ss(a, b)?;
            let p = order_parameters(&state);
            Ok(ClassifiedPair {
                a,
                b,
                n_c: (a.index() ^ b.index()).count_ones() as usize,
                q_ea: p.q_ea,
                phase: classify(p.m, p.q_ea, cfg)?,
            })
        })
        .collect()
}

/// Per-size histogram of q values over SG-classified equal-weight states,
/// ascending in (n, q).
pub fn q_histogram(n_range: &[usize]) -> Result<Vec<HistogramRecord>> {
    let cfg = ClassifierConfig::binary_default();
    let mut out = Vec::new();
    for &n in n_range {
        let size = checked_size(n, "q histogram")?;
        let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
        for pair in classified_pairs(size, &cfg)? {
            if pair.phase == PhaseTag::Sg {
                // Exact rationals: equal q values share a bit pattern, and
                // bit order on positive floats is numeric order.
                *counts.entry(pair.q_ea.to_bits()).or_insert(0) += 1;
            }
        }
        out.extend(counts.into_iter().map(|(bits, count)| HistogramRecord {
            n,
            q_ea: f64::from_bits(bits),
            count,
        }));
    }
    Ok(out)
}

/// One aggregated point of the negativity-vs-q line.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct NegativityLinePoint {
    pub n: usize,
    pub q_ea: f64,
    pub neg_measured: f64,
    pub neg_predicted: f64,
    /// Common entangled-cluster size of the aggregated states (0 for the
    /// product-state exception).
    pub cluster_size: usize,
    pub states: usize,
    /// True where measurement and linear law part ways (the n_C = 1 set).
    pub flagged: bool,
}

impl CsvRecord for NegativityLinePoint {
    fn header() -> &'static str {
        "n,q_ea,neg_measured,neg_predicted,cluster_size,states,flagged"
    }

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            csv_float(self.q_ea),
            csv_float(self.neg_measured),
            csv_float(self.neg_predicted),
            self.cluster_size,
            self.states,
            self.flagged
        )
    }
}

/// Aggregates measured average negativity per distinct (n, q_EA) over the
/// m = 0 states (SG and PM), the population the linear law is stated for.
/// Measurement always runs through the Schmidt route.
pub fn negativity_line(n_range: &[usize]) -> Result<Vec<NegativityLinePoint>> {
    let cfg = ClassifierConfig::binary_default();
    let mut out = Vec::new();
    for &n in n_range {
        let size = checked_size(n, "negativity line")?;
        let kept: Vec<ClassifiedPair> = classified_pairs(size, &cfg)?
            .into_iter()
            .filter(|p| matches!(p.phase, PhaseTag::Sg | PhaseTag::Pm))
            .collect();
        let measured: Vec<f64> = kept
            .par_iter()
            .map(|p| -> Result<f64> { Ok(avg_negativity(&equal_binary_ss(p.a, p.b)?)) })
            .collect::<Result<_>>()?;
        let mut groups: BTreeMap<u64, (f64, usize, usize)> = BTreeMap::new();
        for (pair, neg) in kept.iter().zip(&measured) {
            let entry = groups.entry(pair.q_ea.to_bits()).or_insert((0.0, 0, pair.n_c));
            entry.0 += *neg;
            entry.1 += 1;
            debug_assert_eq!(entry.2, pair.n_c, "q groups mix cluster sizes");
        }
        for (bits, (sum, count, n_c)) in groups {
            let q_ea = f64::from_bits(bits);
            let neg_measured = sum / count as f64;
            let neg_predicted = predicted_negativity(q_ea);
            out.push(NegativityLinePoint {
                n,
                q_ea,
                neg_measured,
                neg_predicted,
                cluster_size: if n_c >= 2 { n_c } else { 0 },
                states: count,
                flagged: (neg_measured - neg_predicted).abs() > 1e-9,
            });
        }
    }
    Ok(out)
}

/// Susceptibilities averaged per exact p_C value.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ChiRecord {
    pub p_c: f64,
    pub chi_finite: f64,
    pub chi_thermo: f64,
    pub chi_zfc: f64,
    pub states: usize,
}

impl CsvRecord for ChiRecord {
    fn header() -> &'static str {
        "p_c,chi_finite,chi_thermo,chi_zfc,states"
    }

    fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            csv_float(self.p_c),
            csv_float(self.chi_finite),
            csv_float(self.chi_thermo),
            csv_float(self.chi_zfc),
            self.states
        )
    }
}

/// Grouped susceptibility means over all equal-weight binary states,
/// bucketed by exact p_C (IEEE division is correctly rounded, so equal
/// rationals n_C/N produce identical floats even across sizes).
pub fn susceptibility_curve(
    n_range: &[usize],
    beta: InverseTemperature,
) -> Result<Vec<ChiRecord>> {
    let cfg = ClassifierConfig::binary_default();
    let mut buckets: BTreeMap<u64, (f64, f64, f64, usize)> = BTreeMap::new();
    for &n in n_range {
        let size = checked_size(n, "susceptibility curve")?;
        for pair in classified_pairs(size, &cfg)? {
            let p_c = pair.n_c as f64 / n as f64;
            let entry = buckets.entry(p_c.to_bits()).or_insert((0.0, 0.0, 0.0, 0));
            entry.0 += chi_ss_finite(p_c, pair.q_ea, beta);
            entry.1 += chi_ss_thermo(p_c, beta);
            entry.2 += chi_zfc(pair.q_ea, beta);
            entry.3 += 1;
        }
    }
    Ok(buckets
        .into_iter()
        .map(|(bits, (finite, thermo, zfc, count))| ChiRecord {
            p_c: f64::from_bits(bits),
            chi_finite: finite / count as f64,
            chi_thermo: thermo / count as f64,
            chi_zfc: zfc / count as f64,
            states: count,
        })
        .collect())
}

/// Validation harness configuration. `q_max` exists for fault injection:
/// the negativity-law leg predicts with it, so anything but the true 0.25
/// must make validation fail (negative control).
#[derive(Clone, Debug, Serialize)]
pub struct ValidateConfig {
    pub n_range: Vec<usize>,
    pub beta_tilde: f64,
    pub q_max: f64,
    /// Tolerance for exact-arithmetic comparisons.
    pub tol_exact: f64,
    /// Tolerance for eigenvalue-based comparisons.
    pub tol_eigen: f64,
    /// Dense partial-transpose legs run only up to this size.
    pub dense_max_n: usize,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        ValidateConfig {
            n_range: (3..=6).collect(),
            beta_tilde: 1.0,
            q_max: crate::observables::Q_MAX,
            tol_exact: 1e-12,
            tol_eigen: 1e-9,
            dense_max_n: 6,
        }
    }
}

/// Outcome of one validation leg.
#[derive(Clone, Debug, Serialize)]
pub struct LegReport {
    pub name: &'static str,
    pub checks: usize,
    pub max_abs_diff: f64,
    pub tolerance: f64,
    pub failure_count: usize,
    /// First few offending cases, human-readable.
    pub failures: Vec<String>,
    pub passed: bool,
}

const MAX_REPORTED_FAILURES: usize = 20;

impl LegReport {
    fn from_diffs(name: &'static str, tolerance: f64, diffs: Vec<(f64, String)>) -> Self {
        let checks = diffs.len();
        let max_abs_diff = diffs.iter().map(|d| d.0).fold(0.0, f64::max);
        let offending: Vec<&(f64, String)> =
            diffs.iter().filter(|d| !(d.0 <= tolerance)).collect();
        let failure_count = offending.len();
        let failures = offending
            .iter()
            .take(MAX_REPORTED_FAILURES)
            .map(|d| format!("{} (diff {:.3e})", d.1, d.0))
            .collect();
        LegReport {
            name,
            checks,
            max_abs_diff,
            tolerance,
            failure_count,
            failures,
            passed: failure_count == 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub legs: Vec<LegReport>,
    pub passed: bool,
}

/// Runs every oracle-equivalence leg and reports per-leg outcomes without
/// judging them fatal. `validate` is the fail-fast wrapper.
pub fn run_validation(cfg: &ValidateConfig) -> Result<ValidationReport> {
    if cfg.n_range.is_empty() {
        return Err(Error::InvalidConfig("empty size range".into()));
    }
    let beta = InverseTemperature::new(cfg.beta_tilde)?;
    let mut legs = Vec::new();

    // Leg 1: Schmidt route against the dense partial-transpose oracle,
    // every pair and every single-spin bipartition, small sizes.
    let mut diffs = Vec::new();
    for &n in &cfg.n_range {
        let size = checked_size(n, "validation")?;
        if n > cfg.dense_max_n {
            continue;
        }
        let pair_diffs: Vec<(f64, String)> = all_pairs(size)
            .par_iter()
            .map(|&(a, b)| -> Result<Vec<(f64, String)>> {
                let state = equal_binary_ss(a, b)?;
                let mut local = Vec::with_capacity(n);
                for spin in 1..=n {
                    let fast = negativity_schmidt(&state, &[spin])?.normalized;
                    let oracle = negativity_dense(&state, &[spin])?.normalized;
                    local.push((
                        (fast - oracle).abs(),
                        format!("n={n} a={} b={} spin={spin}", a.index(), b.index()),
                    ));
                }
                Ok(local)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        diffs.extend(pair_diffs);
    }
    legs.push(LegReport::from_diffs("schmidt_vs_dense", cfg.tol_eigen, diffs));

    // Leg 2: numeric q_EA against the closed form q_max (1 - n_C/N).
    let mut diffs = Vec::new();
    for &n in &cfg.n_range {
        let size = checked_size(n, "validation")?;
        let pair_diffs: Vec<(f64, String)> = all_pairs(size)
            .par_iter()
            .map(|&(a, b)| -> Result<(f64, String)> {
                let state = equal_binary_ss(a, b)?;
                let q = order_parameters(&state).q_ea;
                let n_c = (a.index() ^ b.index()).count_ones() as usize;
                Ok((
                    (q - q_ea_analytic(n_c, size)).abs(),
                    format!("n={n} a={} b={}", a.index(), b.index()),
                ))
            })
            .collect::<Result<_>>()?;
        diffs.extend(pair_diffs);
    }
    legs.push(LegReport::from_diffs("analytic_vs_numeric_q", cfg.tol_exact, diffs));

    // Leg 3: the linear negativity law on every n_C >= 2 state, with the
    // prediction built from cfg.q_max (the fault-injection knob).
    let mut diffs = Vec::new();
    for &n in &cfg.n_range {
        let size = checked_size(n, "validation")?;
        let pair_diffs: Vec<(f64, String)> = all_pairs(size)
            .par_iter()
            .filter(|&&(a, b)| (a.index() ^ b.index()).count_ones() >= 2)
            .map(|&(a, b)| -> Result<(f64, String)> {
                let state = equal_binary_ss(a, b)?;
                let q = order_parameters(&state).q_ea;
                let measured = avg_negativity(&state);
                let predicted = 1.0 - q / cfg.q_max;
                Ok((
                    (measured - predicted).abs(),
                    format!("n={n} a={} b={}", a.index(), b.index()),
                ))
            })
            .collect::<Result<_>>()?;
        diffs.extend(pair_diffs);
    }
    legs.push(LegReport::from_diffs("negativity_law", cfg.tol_eigen, diffs));

    // Leg 4: the n_C <= 1 exception set must measure as product states.
    let mut diffs = Vec::new();
    for &n in &cfg.n_range {
        let size = checked_size(n, "validation")?;
        let pair_diffs: Vec<(f64, String)> = all_pairs(size)
            .par_iter()
            .filter(|&&(a, b)| (a.index() ^ b.index()).count_ones() <= 1)
            .map(|&(a, b)| -> Result<(f64, String)> {
                let state = equal_binary_ss(a, b)?;
                Ok((
                    avg_negativity(&state).abs(),
                    format!("n={n} a={} b={}", a.index(), b.index()),
                ))
            })
            .collect::<Result<_>>()?;
        diffs.extend(pair_diffs);
    }
    legs.push(LegReport::from_diffs(
        "product_state_exception",
        cfg.tol_eigen,
        diffs,
    ));

    // Leg 5: the susceptibility identity chi_from_negativity(1 - q/q_max)
    // = chi_zfc(q) on a 1000-point grid at machine precision.
    let grid_tol = 1e-15 * cfg.beta_tilde.max(1.0);
    let diffs: Vec<(f64, String)> = (0..1000)
        .map(|i| {
            let q = crate::observables::Q_MAX * i as f64 / 999.0;
            let lhs = chi_from_negativity(1.0 - q / cfg.q_max, beta);
            let rhs = chi_zfc(q, beta);
            ((lhs - rhs).abs(), format!("q={q}"))
        })
        .collect();
    legs.push(LegReport::from_diffs("chi_identity", grid_tol, diffs));

    let passed = legs.iter().all(|l| l.passed);
    Ok(ValidationReport { legs, passed })
}

/// Fail-fast validation: any oracle mismatch becomes a ValidationFailure
/// naming the first offending cases.
pub fn validate(cfg: &ValidateConfig) -> Result<ValidationReport> {
    let report = run_validation(cfg)?;
    if report.passed {
        return Ok(report);
    }
    let mut msg = String::from("oracle mismatch:");
    for leg in report.legs.iter().filter(|l| !l.passed) {
        msg.push_str(&format!(
            " [{}] {} of {} checks beyond {:.1e}, worst {:.3e}, first: {}",
            leg.name,
            leg.failure_count,
            leg.checks,
            leg.tolerance,
            leg.max_abs_diff,
            leg.failures.first().map(String::as_str).unwrap_or("-")
        ));
    }
    Err(Error::ValidationFailure(msg))
}
