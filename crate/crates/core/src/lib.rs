//! Exact desk-scale toolkit for quantum superpositions of Ising spin
//! configurations: construct the states, compute magnetization and the
//! Edwards-Anderson order parameter, quantify entanglement through the
//! negativity, classify phases, and check the linear law tying average
//! negativity to the order parameter.
//!
//! Everything here is exact enumeration on small systems (N up to 24 for
//! pure bit arithmetic, far less wherever a 2^N-dimensional state vector
//! or 2^N x 2^N matrix is materialized). No Monte Carlo estimates stand in
//! for computable quantities; randomness only ever picks *which* state to
//! analyze, never *how* it is analyzed.

pub mod basis;
pub mod couplings;
pub mod entanglement;
pub mod error;
pub mod observables;
pub mod output;
pub mod phase;
pub mod superposition;
pub mod sweep;

pub use basis::{
    co_excited_count, enumerate_basis, label_pair, BasisState, SpinLabel, SpinLabelVector,
    SystemSize,
};
pub use couplings::{
    energy, energy_record, frustration_report, sample_couplings, unsatisfied_bonds,
    CouplingMatrix, EnergyRecord, FrustrationReport,
};
pub use entanglement::{
    avg_negativity, entangled_cluster_size, negativity_dense, negativity_schmidt,
    partial_transpose, predicted_negativity, DensityMatrix, NegativityResult,
};
pub use error::{Error, Result};
pub use observables::{
    chi_from_negativity, chi_ss_finite, chi_ss_thermo, chi_zfc, local_moments, magnetization,
    order_parameters, q_ea, q_ea_analytic, InverseTemperature, MomentConvention, OrderParameters,
    Q_MAX,
};
pub use output::{
    metadata_path, render_csv, write_csv, write_jsonl, write_records, CsvRecord, OutputFormat,
    RunMetadata,
};
pub use phase::{
    classify, classify_lenient, cross_validate, sg_rule_filter, ClassifierConfig,
    CrossValidationReport, PhaseTag,
};
pub use superposition::{
    binary_ss, cluster_decompose, equal_binary_ss, ghz, product_state, random_ss,
    random_ss_indexed, BinaryWeights, ClusterDecomposition, Provenance, SuperpositionState,
    RNG_ALGORITHM,
};
pub use sweep::{
    negativity_line, pair_count, q_histogram, run_validation, scatter_random,
    susceptibility_curve, sweep_equal_binary, sweep_random_binary, validate, ChiRecord,
    HistogramRecord, NegativityLinePoint, PhaseRecord, ScatterRecord, SweepConfig, ValidateConfig,
    ValidationReport, WeightingMode,
};
