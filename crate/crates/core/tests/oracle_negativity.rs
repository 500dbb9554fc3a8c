//! Dual-route negativity checks: the Schmidt fast path must agree with the
//! dense partial-transpose eigensolve on every state class we can afford to
//! enumerate, and both must agree with closed-form values where those exist.

use approx::assert_abs_diff_eq;
use rayon::prelude::*;
use spinglass_core::entanglement::hermitian_eigenvalues;
use spinglass_core::{
    enumerate_basis, equal_binary_ss, ghz, negativity_dense, negativity_schmidt, partial_transpose,
    product_state, random_ss_indexed, BasisState, DensityMatrix, SpinLabelVector,
    SuperpositionState, SystemSize,
};

fn size(n: usize) -> SystemSize {
    SystemSize::new(n).unwrap()
}

fn pair(n: usize, a: u64, b: u64) -> SuperpositionState {
    let s = size(n);
    equal_binary_ss(
        BasisState::new(s, a).unwrap(),
        BasisState::new(s, b).unwrap(),
    )
    .unwrap()
}

/// Every nonempty proper subset of the spins 1..=n.
fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1..((1u32 << n) - 1) {
        out.push((1..=n).filter(|&i| mask >> (i - 1) & 1 == 1).collect());
    }
    out
}

#[test]
fn bell_partial_transpose_has_the_textbook_spectrum() {
    let rho = DensityMatrix::from_state(&ghz(size(2))).unwrap();
    let pt = partial_transpose(&rho, &[2]).unwrap();
    let mut eigs = hermitian_eigenvalues(pt);
    eigs.sort_by(f64::total_cmp);
    for (got, want) in eigs.iter().zip([-0.5, 0.5, 0.5, 0.5]) {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
    }
}

#[test]
fn equal_pairs_all_single_spin_cuts_match_dense_and_closed_form() {
    for n in 2..=6usize {
        let s = size(n);
        let pairs: Vec<(BasisState, BasisState)> = enumerate_basis(s)
            .flat_map(|a| {
                enumerate_basis(s)
                    .filter(move |&b| b >= a)
                    .map(move |b| (a, b))
            })
            .collect();
        let worst = pairs
            .par_iter()
            .map(|&(a, b)| {
                let state = equal_binary_ss(a, b).unwrap();
                let n_c = (a.index() ^ b.index()).count_ones();
                let mut worst = 0.0f64;
                for spin in 1..=n {
                    let fast = negativity_schmidt(&state, &[spin]).unwrap().normalized;
                    let dense = negativity_dense(&state, &[spin]).unwrap().normalized;
                    worst = worst.max((fast - dense).abs());
                    // Closed form: a differing spin in a cluster of >= 2 is
                    // maximally entangled with the rest; everything else is
                    // separable.
                    let in_cluster = (a.index() ^ b.index()) >> (n as u32 - spin as u32) & 1 == 1;
                    let expect = if in_cluster && n_c >= 2 { 1.0 } else { 0.0 };
                    worst = worst.max((fast - expect).abs());
                }
                worst
            })
            .reduce(|| 0.0, f64::max);
        assert!(worst <= 1e-9, "n={n}: worst deviation {worst}");
    }
}

#[test]
fn random_states_match_on_every_bipartition() {
    for n in 2..=5usize {
        let parts = all_partitions(n);
        let worst = (0..8u64)
            .into_par_iter()
            .map(|stream| {
                let state = random_ss_indexed(size(n), 0xC0FFEE, stream).unwrap();
                let mut worst = 0.0f64;
                for part in &parts {
                    let fast = negativity_schmidt(&state, part).unwrap();
                    let dense = negativity_dense(&state, part).unwrap();
                    worst = worst.max((fast.raw - dense.raw).abs());
                    assert!(fast.raw >= -1e-12, "negative raw negativity");
                }
                worst
            })
            .reduce(|| 0.0, f64::max);
        assert!(worst <= 1e-9, "n={n}: worst route disagreement {worst}");
    }
}

#[test]
fn random_states_match_on_sampled_cuts_at_n6() {
    let cuts: [&[usize]; 5] = [&[1], &[4], &[6], &[2, 5], &[1, 3, 6]];
    for stream in 0..4u64 {
        let state = random_ss_indexed(size(6), 7, stream).unwrap();
        for part in cuts {
            let fast = negativity_schmidt(&state, part).unwrap().normalized;
            let dense = negativity_dense(&state, part).unwrap().normalized;
            assert_abs_diff_eq!(fast, dense, epsilon = 1e-9);
        }
    }
}

#[test]
fn ghz_is_maximal_across_every_cut() {
    for n in 2..=6usize {
        let g = ghz(size(n));
        for part in all_partitions(n) {
            let fast = negativity_schmidt(&g, &part).unwrap().normalized;
            assert_abs_diff_eq!(fast, 1.0, epsilon = 1e-9);
            if n <= 5 {
                let dense = negativity_dense(&g, &part).unwrap().normalized;
                assert_abs_diff_eq!(dense, 1.0, epsilon = 1e-9);
            }
        }
    }
}

#[test]
fn product_states_are_separable_across_every_cut() {
    for labels in ["eg", "egC", "CCg", "eCge", "CgCeC"] {
        let state = product_state(&SpinLabelVector::parse(labels).unwrap());
        for part in all_partitions(labels.len()) {
            let fast = negativity_schmidt(&state, &part).unwrap().normalized;
            assert_abs_diff_eq!(fast, 0.0, epsilon = 1e-9);
            let dense = negativity_dense(&state, &part).unwrap().normalized;
            assert_abs_diff_eq!(dense, 0.0, epsilon = 1e-9);
        }
    }
}

#[test]
fn normalized_scale_is_twice_raw_on_both_routes() {
    let state = pair(4, 0b1010, 0b0110);
    for spin in 1..=4usize {
        let fast = negativity_schmidt(&state, &[spin]).unwrap();
        let dense = negativity_dense(&state, &[spin]).unwrap();
        assert_abs_diff_eq!(fast.normalized, 2.0 * fast.raw, epsilon = 0.0);
        assert_abs_diff_eq!(dense.normalized, 2.0 * dense.raw, epsilon = 0.0);
        assert_eq!(fast.partition, vec![spin]);
        assert_eq!(dense.partition, vec![spin]);
    }
}
