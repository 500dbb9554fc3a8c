//! Local moments, magnetization, the Edwards-Anderson order parameter
//! (numeric and analytic), and the susceptibility formulas.
//!
//! Moment convention: `m_i = <sigma_i^z>/2` in [-1/2, 1/2], which puts the
//! order-parameter ceiling at `q_max = 1/4`. `MomentConvention::BarePauli`
//! rescales outputs to the bare +-1 Pauli expectation for comparison.

use serde::{Deserialize, Serialize};

use crate::basis::SystemSize;
use crate::error::{Error, Result};
use crate::superposition::SuperpositionState;

/// Largest attainable Edwards-Anderson order parameter under the +-1/2
/// moment convention.
pub const Q_MAX: f64 = 0.25;

/// Dimensionless inverse temperature; a free scale factor in every
/// susceptibility formula.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InverseTemperature(f64);

impl InverseTemperature {
    pub fn new(beta_tilde: f64) -> Result<Self> {
        if !beta_tilde.is_finite() || beta_tilde <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "inverse temperature must be finite and positive, got {beta_tilde}"
            )));
        }
        Ok(InverseTemperature(beta_tilde))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for InverseTemperature {
    fn default() -> Self {
        InverseTemperature(1.0)
    }
}

/// Output scale for moments: spin-1/2 (+-1/2, the crate default) or bare
/// Pauli expectations (+-1).
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum MomentConvention {
    #[default]
    HalfSpin,
    BarePauli,
}

impl MomentConvention {
    #[inline]
    pub fn moment_scale(self) -> f64 {
        match self {
            MomentConvention::HalfSpin => 1.0,
            MomentConvention::BarePauli => 2.0,
        }
    }
}

/// (m, q_EA) of one state, plus the C-spin fraction when the state is a
/// binary superposition.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct OrderParameters {
    pub m: f64,
    pub q_ea: f64,
    pub p_c: Option<f64>,
}

impl OrderParameters {
    pub fn scaled(self, convention: MomentConvention) -> OrderParameters {
        let s = convention.moment_scale();
        OrderParameters {
            m: self.m * s,
            q_ea: self.q_ea * s * s,
            p_c: self.p_c,
        }
    }
}

/// All per-spin moments in one pass over the amplitude vector.
pub fn local_moments(state: &SuperpositionState) -> Vec<f64> {
    let n = state.size().n();
    let mut signed = vec![0.0f64; n];
    for (k, amp) in state.amplitudes().iter().enumerate() {
        let w = amp.norm_sqr();
        if w == 0.0 {
            continue;
        }
        for (bit, s) in signed.iter_mut().enumerate() {
            // signed[bit] accumulates spin N-bit; reversed below.
            if k >> bit & 1 == 1 {
                *s += w;
            } else {
                *s -= w;
            }
        }
    }
    // signed is indexed by bit position; spin i lives at bit N-i.
    (1..=n).map(|i| 0.5 * signed[n - i]).collect()
}

/// m_i of one spin (1-based index).
pub fn local_moment(state: &SuperpositionState, spin: usize) -> Result<f64> {
    let bit = state.size().bit_of_spin(spin)?;
    let mut signed = 0.0f64;
    for (k, amp) in state.amplitudes().iter().enumerate() {
        let w = amp.norm_sqr();
        if k >> bit & 1 == 1 {
            signed += w;
        } else {
            signed -= w;
        }
    }
    Ok(0.5 * signed)
}

/// Mean local moment.
pub fn magnetization(state: &SuperpositionState) -> f64 {
    let moments = local_moments(state);
    moments.iter().sum::<f64>() / moments.len() as f64
}

/// Edwards-Anderson order parameter: mean squared local moment.
pub fn q_ea(state: &SuperpositionState) -> f64 {
    let moments = local_moments(state);
    moments.iter().map(|m| m * m).sum::<f64>() / moments.len() as f64
}

/// m and q_EA together (one moment pass); p_c filled in for binary states.
pub fn order_parameters(state: &SuperpositionState) -> OrderParameters {
    let moments = local_moments(state);
    let n = moments.len() as f64;
    let m = moments.iter().sum::<f64>() / n;
    let q = moments.iter().map(|m| m * m).sum::<f64>() / n;
    let p_c = match state.provenance() {
        crate::superposition::Provenance::BinaryPair { a, b, .. } => {
            Some((a ^ b).count_ones() as f64 / n)
        }
        _ => None,
    };
    OrderParameters { m, q_ea: q, p_c }
}

/// Closed form for equal-weight binary superpositions: q = (N - n_C)/(4N).
pub fn q_ea_analytic(n_c: usize, n: SystemSize) -> f64 {
    assert!(n_c <= n.n(), "n_c = {n_c} exceeds system size {n}");
    Q_MAX * (1.0 - n_c as f64 / n.n() as f64)
}

/// Linear-response (zero-field-cooled) susceptibility, beta * (1 - q).
pub fn chi_zfc(q: f64, beta: InverseTemperature) -> f64 {
    beta.value() * (1.0 - q)
}

/// Superposition-state susceptibility in the thermodynamic form,
/// beta * (1 - (1 - p_C)/4).
pub fn chi_ss_thermo(p_c: f64, beta: InverseTemperature) -> f64 {
    beta.value() * (1.0 - 0.25 * (1.0 - p_c))
}

/// Finite-size superposition susceptibility, beta * ((1 - p_C) - q).
pub fn chi_ss_finite(p_c: f64, q: f64, beta: InverseTemperature) -> f64 {
    beta.value() * ((1.0 - p_c) - q)
}

/// Susceptibility from the averaged normalized negativity,
/// (beta/4) * (3 + N).
pub fn chi_from_negativity(neg: f64, beta: InverseTemperature) -> f64 {
    beta.value() / 4.0 * (3.0 + neg)
}
