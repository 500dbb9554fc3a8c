//! Phase tags from (m, q_EA), plus the rule-based spin-glass pre-filter and
//! a cross-validation harness comparing the two over full pair enumerations.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{co_excited_count, enumerate_basis, BasisState, SystemSize};
use crate::error::{Error, Result};
use crate::observables::{order_parameters, Q_MAX};
use crate::superposition::equal_binary_ss;

/// Largest size for which cross_validate will enumerate every pair.
pub const MAX_CROSS_VALIDATE: usize = 10;

/// Magnetic phase of a superposition state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PhaseTag {
    #[serde(rename = "SG")]
    Sg,
    #[serde(rename = "FM+")]
    FmPlus,
    #[serde(rename = "FM-")]
    FmMinus,
    #[serde(rename = "PM")]
    Pm,
}

impl PhaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseTag::Sg => "SG",
            PhaseTag::FmPlus => "FM+",
            PhaseTag::FmMinus => "FM-",
            PhaseTag::Pm => "PM",
        }
    }
}

impl fmt::Display for PhaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Threshold configuration: below `zero_tol`, m or q counts as zero.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ClassifierConfig {
    zero_tol: f64,
}

impl ClassifierConfig {
    pub fn new(zero_tol: f64) -> Result<Self> {
        if !(zero_tol > 0.0 && zero_tol < 0.01) {
            return Err(Error::InvalidConfig(format!(
                "zero_tol must lie in (0, 0.01), got {zero_tol}"
            )));
        }
        Ok(ClassifierConfig { zero_tol })
    }

    /// For equal-weight binary states every moment is an exact rational,
    /// so the threshold only has to absorb float noise.
    pub fn binary_default() -> Self {
        ClassifierConfig { zero_tol: 1e-9 }
    }

    /// Random states never produce exact zeros; use a coarser threshold.
    pub fn random_default() -> Self {
        ClassifierConfig { zero_tol: 1e-3 }
    }

    pub fn zero_tol(self) -> f64 {
        self.zero_tol
    }
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig::binary_default()
    }
}

/// Phase tag from the order parameters.
///
/// Requires 0 <= q <= q_max and m^2 <= q + tol (the mean square always
/// bounds the squared mean); inputs outside that region, including the
/// wedge q < tol <= |m| that no honest moment computation paired with an
/// adequate tolerance can reach, are rejected as `InconsistentInputs`.
pub fn classify(m: f64, q: f64, cfg: &ClassifierConfig) -> Result<PhaseTag> {
    let tol = cfg.zero_tol;
    if !(0.0..=Q_MAX + tol).contains(&q) || m * m > q + tol {
        return Err(Error::InconsistentInputs { m_abs: m.abs(), q });
    }
    if q < tol {
        if m.abs() < tol {
            Ok(PhaseTag::Pm)
        } else {
            Err(Error::InconsistentInputs { m_abs: m.abs(), q })
        }
    } else if m >= tol {
        Ok(PhaseTag::FmPlus)
    } else if m <= -tol {
        Ok(PhaseTag::FmMinus)
    } else {
        Ok(PhaseTag::Sg)
    }
}

/// Like `classify`, but q < tol always reads as PM: |m| <= sqrt(q) there,
/// so the state is paramagnetic to within sqrt(tol) no matter what m says.
/// Random-weight sweeps use this to avoid aborting on the tolerance wedge.
pub fn classify_lenient(m: f64, q: f64, cfg: &ClassifierConfig) -> PhaseTag {
    if q < cfg.zero_tol {
        PhaseTag::Pm
    } else if m >= cfg.zero_tol {
        PhaseTag::FmPlus
    } else if m <= -cfg.zero_tol {
        PhaseTag::FmMinus
    } else {
        PhaseTag::Sg
    }
}

/// The rule-based SG pre-filter on a pair of configurations: at least one
/// co-excited spin, and the two excitation counts together must not exceed
/// the number of spins. A heuristic, kept verbatim; the (m, q) route is the
/// ground truth it is validated against.
pub fn sg_rule_filter(a: BasisState, b: BasisState) -> Result<bool> {
    let co = co_excited_count(a, b)?;
    let total = a.excited_count() + b.excited_count();
    Ok(co >= 1 && total as usize <= a.size().n())
}

/// One pair where the rule filter and the (m, q) classifier disagree.
#[derive(Clone, Debug, Serialize)]
pub struct Disagreement {
    pub a: u64,
    pub b: u64,
    pub m: f64,
    pub q_ea: f64,
    pub phase: PhaseTag,
    pub rule_says_sg: bool,
}

/// Count of SG-classified states at one exact q value.
#[derive(Clone, Debug, Serialize)]
pub struct QCount {
    pub q_ea: f64,
    pub count: usize,
}

/// Full-enumeration comparison of the classifier against the rule filter.
#[derive(Clone, Debug, Serialize)]
pub struct CrossValidationReport {
    pub n: usize,
    pub pairs: usize,
    pub tag_counts: BTreeMap<String, usize>,
    /// Histogram of exact q values over SG-classified states, ascending.
    pub sg_q_histogram: Vec<QCount>,
    pub agreements: usize,
    pub disagreements: Vec<Disagreement>,
}

struct PairVerdict {
    a: u64,
    b: u64,
    m: f64,
    q_ea: f64,
    phase: PhaseTag,
    rule: bool,
}

/// Classifies every unordered pair (a <= b) at size n through the honest
/// moment route (state construction + local moments) and compares the SG
/// verdict with `sg_rule_filter`. Every disagreement is listed; the known
/// pattern is rule=true vs FM- (the rule cannot see the sign of m).
pub fn cross_validate(n: usize, cfg: &ClassifierConfig) -> Result<CrossValidationReport> {
    let size = SystemSize::new(n)?;
    if n > MAX_CROSS_VALIDATE {
        return Err(Error::SizeOutOfRange {
            n,
            min: SystemSize::MIN,
            max: MAX_CROSS_VALIDATE,
            context: "classifier cross-validation",
        });
    }
    let pairs: Vec<(BasisState, BasisState)> = enumerate_basis(size)
        .flat_map(|a| {
            enumerate_basis(size)
                .filter(move |&b| b >= a)
                .map(move |b| (a, b))
        })
        .collect();
    let verdicts: Vec<PairVerdict> = pairs
        .par_iter()
        .map(|&(a, b)| -> Result<PairVerdict> {
            let state = equal_binary_ss(a, b)?;
            let params = order_parameters(&state);
            let phase = classify(params.m, params.q_ea, cfg)?;
            Ok(PairVerdict {
                a: a.index(),
                b: b.index(),
                m: params.m,
                q_ea: params.q_ea,
                phase,
                rule: sg_rule_filter(a, b)?,
            })
        })
        .collect::<Result<_>>()?;

    let mut tag_counts = BTreeMap::new();
    let mut q_counts: BTreeMap<u64, usize> = BTreeMap::new();
    let mut agreements = 0;
    let mut disagreements = Vec::new();
    for v in &verdicts {
        *tag_counts.entry(v.phase.as_str().to_string()).or_insert(0) += 1;
        if v.phase == PhaseTag::Sg {
            // Exact rationals: identical q values share their bit pattern.
            *q_counts.entry(v.q_ea.to_bits()).or_insert(0) += 1;
        }
        if (v.phase == PhaseTag::Sg) == v.rule {
            agreements += 1;
        } else {
            disagreements.push(Disagreement {
                a: v.a,
                b: v.b,
                m: v.m,
                q_ea: v.q_ea,
                phase: v.phase,
                rule_says_sg: v.rule,
            });
        }
    }
    let sg_q_histogram = q_counts
        .into_iter()
        .map(|(bits, count)| QCount {
            q_ea: f64::from_bits(bits),
            count,
        })
        .collect::<Vec<_>>();
    // BTreeMap ordered by bit pattern; for positive finite floats that is
    // already numeric order.
    Ok(CrossValidationReport {
        n,
        pairs: pairs.len(),
        tag_counts,
        sg_q_histogram,
        agreements,
        disagreements,
    })
}

/// The q values an SG-classified equal-weight binary state can take at
/// size n: q = q_max * k / n for fixed-spin counts k = n - n_C, where the
/// fixed spins split evenly between e and g (k even, k >= 2), plus the
/// diagonal k = n case when n is even. Ascending order.
pub fn admissible_sg_q_values(n: usize) -> Vec<f64> {
    let mut ks: Vec<usize> = (1..n).map(|k| n - k).filter(|k| k % 2 == 0).collect();
    if n % 2 == 0 {
        ks.push(n);
    }
    ks.sort_unstable();
    ks.into_iter()
        .map(|k| Q_MAX * (k as f64 / n as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn basis(n: usize, index: u64) -> BasisState {
        BasisState::new(SystemSize::new(n).unwrap(), index).unwrap()
    }

    #[test]
    fn classify_examples() {
        let cfg = ClassifierConfig::binary_default();
        assert_eq!(classify(0.0, 0.0, &cfg).unwrap(), PhaseTag::Pm);
        assert_eq!(classify(0.0, 1.0 / 6.0, &cfg).unwrap(), PhaseTag::Sg);
        assert_eq!(
            classify(-1.0 / 6.0, 1.0 / 12.0, &cfg).unwrap(),
            PhaseTag::FmMinus
        );
        assert_eq!(
            classify(1.0 / 6.0, 1.0 / 12.0, &cfg).unwrap(),
            PhaseTag::FmPlus
        );
    }

    #[test]
    fn classify_rejects_inconsistent_inputs() {
        let cfg = ClassifierConfig::binary_default();
        // q reads as zero but m does not: no adequate tolerance can produce this.
        assert!(matches!(
            classify(1e-3, 1e-12, &cfg),
            Err(Error::InconsistentInputs { .. })
        ));
        // Jensen violation: squared mean above mean square.
        assert!(matches!(
            classify(0.4, 0.1, &cfg),
            Err(Error::InconsistentInputs { .. })
        ));
        // q outside [0, q_max].
        assert!(matches!(
            classify(0.0, 0.3, &cfg),
            Err(Error::InconsistentInputs { .. })
        ));
        assert!(matches!(
            classify(0.0, -0.1, &cfg),
            Err(Error::InconsistentInputs { .. })
        ));
    }

    #[test]
    fn lenient_maps_small_q_to_pm() {
        let cfg = ClassifierConfig::binary_default();
        assert_eq!(classify_lenient(1e-3, 1e-12, &cfg), PhaseTag::Pm);
        assert_eq!(classify_lenient(0.0, 1.0 / 6.0, &cfg), PhaseTag::Sg);
        assert_eq!(classify_lenient(-0.1, 0.1, &cfg), PhaseTag::FmMinus);
    }

    #[test]
    fn config_bounds() {
        assert!(ClassifierConfig::new(1e-9).is_ok());
        assert!(ClassifierConfig::new(0.009).is_ok());
        assert!(ClassifierConfig::new(0.0).is_err());
        assert!(ClassifierConfig::new(-1e-9).is_err());
        assert!(ClassifierConfig::new(0.01).is_err());
        assert!(ClassifierConfig::new(f64::NAN).is_err());
    }

    #[test]
    fn rule_filter_examples() {
        assert!(sg_rule_filter(basis(3, 4), basis(3, 5)).unwrap());
        assert!(!sg_rule_filter(basis(3, 7), basis(3, 0)).unwrap());
        assert!(!sg_rule_filter(basis(3, 7), basis(3, 7)).unwrap());
        assert!(sg_rule_filter(basis(4, 0b1100), basis(4, 0b1100)).unwrap());
        assert!(sg_rule_filter(basis(3, 4), basis(2, 1)).is_err());
    }

    #[test]
    fn cross_validate_small_sizes() {
        let cfg = ClassifierConfig::binary_default();
        let r3 = cross_validate(3, &cfg).unwrap();
        assert_eq!(r3.pairs, 36);
        assert_eq!(r3.tag_counts["SG"], 6);
        assert_eq!(r3.sg_q_histogram.len(), 1);
        assert_abs_diff_eq!(r3.sg_q_histogram[0].q_ea, 1.0 / 6.0, epsilon = 1e-12);
        assert_eq!(r3.sg_q_histogram[0].count, 6);

        let r4 = cross_validate(4, &cfg).unwrap();
        assert_eq!(r4.sg_q_histogram.len(), 2);
        assert_abs_diff_eq!(r4.sg_q_histogram[0].q_ea, 0.125, epsilon = 1e-12);
        assert_eq!(r4.sg_q_histogram[0].count, 24);
        assert_abs_diff_eq!(r4.sg_q_histogram[1].q_ea, 0.25, epsilon = 1e-12);
        assert_eq!(r4.sg_q_histogram[1].count, 6);

        let r5 = cross_validate(5, &cfg).unwrap();
        let qs: Vec<f64> = r5.sg_q_histogram.iter().map(|e| e.q_ea).collect();
        assert_eq!(qs.len(), 2);
        assert_abs_diff_eq!(qs[0], 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(qs[1], 0.2, epsilon = 1e-12);
    }

    #[test]
    fn disagreements_are_always_fm_minus() {
        let cfg = ClassifierConfig::binary_default();
        for n in 2..=6 {
            let r = cross_validate(n, &cfg).unwrap();
            assert_eq!(r.agreements + r.disagreements.len(), r.pairs);
            for d in &r.disagreements {
                assert!(d.rule_says_sg, "rule missed an SG pair at n={n}: {d:?}");
                assert_eq!(d.phase, PhaseTag::FmMinus, "unexpected tag at n={n}: {d:?}");
            }
            // The rule does catch real SG states too, so agreement dominates.
            assert!(r.agreements > r.disagreements.len());
        }
    }

    #[test]
    fn sg_q_values_follow_the_admissible_set() {
        let cfg = ClassifierConfig::binary_default();
        for n in 3..=8 {
            let r = cross_validate(n, &cfg).unwrap();
            let got: Vec<f64> = r.sg_q_histogram.iter().map(|e| e.q_ea).collect();
            let want = admissible_sg_q_values(n);
            assert_eq!(got.len(), want.len(), "n={n}");
            assert_eq!(got.len(), n / 2, "n={n}");
            for (g, w) in got.iter().zip(&want) {
                assert_abs_diff_eq!(*g, *w, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn fm_sets_mirror_under_global_complement() {
        let cfg = ClassifierConfig::binary_default();
        for n in 2..=6 {
            let size = SystemSize::new(n).unwrap();
            let mut fm_plus = Vec::new();
            let mut fm_minus = Vec::new();
            for a in enumerate_basis(size) {
                for b in enumerate_basis(size).filter(|&b| b >= a) {
                    let state = equal_binary_ss(a, b).unwrap();
                    let p = order_parameters(&state);
                    match classify(p.m, p.q_ea, &cfg).unwrap() {
                        PhaseTag::FmPlus => fm_plus.push((a.index(), b.index())),
                        PhaseTag::FmMinus => fm_minus.push((a.index(), b.index())),
                        _ => {}
                    }
                }
            }
            let mut mirrored: Vec<(u64, u64)> = fm_plus
                .iter()
                .map(|&(a, b)| {
                    let (ca, cb) = (
                        basis(n, a).complement().index(),
                        basis(n, b).complement().index(),
                    );
                    (ca.min(cb), ca.max(cb))
                })
                .collect();
            mirrored.sort_unstable();
            fm_minus.sort_unstable();
            assert_eq!(mirrored, fm_minus, "n={n}");
        }
    }

    #[test]
    fn classifier_depends_only_on_thresholded_signs() {
        let cfg = ClassifierConfig::new(1e-6).unwrap();
        // Sample the (m, q) plane on a grid obeying the Jensen bound and check
        // the decision is a pure function of the three threshold predicates.
        let qs: [f64; 6] = [0.0, 1e-9, 1e-6, 1e-3, 0.1, 0.25];
        for &q in &qs {
            let cap = q.sqrt();
            for &frac in &[-1.0, -0.5, -1e-3, 0.0, 1e-3, 0.5, 1.0] {
                let m = cap * frac;
                let Ok(tag) = classify(m, q, &cfg) else {
                    continue;
                };
                let expect = match (q < 1e-6, m.abs() < 1e-6, m > 0.0) {
                    (true, true, _) => PhaseTag::Pm,
                    (false, true, _) => PhaseTag::Sg,
                    (false, false, true) => PhaseTag::FmPlus,
                    (false, false, false) => PhaseTag::FmMinus,
                    (true, false, _) => unreachable!("classify returned Ok"),
                };
                assert_eq!(tag, expect, "m={m}, q={q}");
            }
        }
    }
}
