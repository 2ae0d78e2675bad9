//! Small benchmark networks shared by the unit tests. All column indices
//! are frozen ground truth: they were derived by hand from the node-level
//! update rules and cross-checked against independent dense-matrix
//! computations before being committed here.

use crate::dynamics::Bcn;

/// 3-node observable BN used throughout the identification tests.
/// F = δ_8[2 3 4 5 6 3 8 7], H = δ_2[2 1 1 2 2 2 1 2].
pub(crate) fn bn8() -> Bcn {
    Bcn::new(3, 0, 1, vec![2, 3, 4, 5, 6, 3, 8, 7], vec![2, 1, 1, 2, 2, 2, 1, 2]).unwrap()
}

/// The same behavior as [`bn8`] under the relabeling 7↦1, 8↦2, 1↦3, …, 6↦8:
/// F = δ_8[2 1 4 5 6 7 8 5], H = δ_2[1 2 2 1 1 2 2 2].
pub(crate) fn bn8_relabeled() -> Bcn {
    Bcn::new(3, 0, 1, vec![2, 1, 4, 5, 6, 7, 8, 5], vec![1, 2, 2, 1, 1, 2, 2, 2]).unwrap()
}

/// Output trajectories of [`bn8`] long enough to expose every state:
/// one from state 1 (15 outputs) and one from state 7 (13 outputs).
pub(crate) fn bn8_runs() -> Vec<Vec<usize>> {
    vec![
        vec![2, 1, 1, 2, 2, 2, 1, 2, 2, 2, 1, 2, 2, 2, 1],
        vec![1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1],
    ]
}

/// 2-state, 1-input, 1-output control network:
/// F = δ_4[2 4 1 1 | 2 3 2 2], H = δ_2[2 1 1 2].
pub(crate) fn bcn4() -> Bcn {
    Bcn::new(2, 1, 1, vec![2, 4, 1, 1, 2, 3, 2, 2], vec![2, 1, 1, 2]).unwrap()
}

/// The network recovered from [`bcn4`] data by the short-test pipeline;
/// equivalent to [`bcn4`] but not equal to it.
/// F = δ_4[2 3 1 1 | 2 4 2 2], H = δ_2[2 1 2 1].
pub(crate) fn bcn4_identified() -> Bcn {
    Bcn::new(2, 1, 1, vec![2, 3, 1, 1, 2, 4, 2, 2], vec![2, 1, 2, 1]).unwrap()
}

/// 2-node BN that is *not* observable: states 1 and 2 produce identical
/// output sequences forever. F = δ_4[3 3 4 4], H = δ_2[1 1 2 1].
pub(crate) fn bn4_unobservable() -> Bcn {
    Bcn::new(2, 0, 1, vec![3, 3, 4, 4], vec![1, 1, 2, 1]).unwrap()
}

/// Output trajectory of [`bn4_unobservable`] from state 1, 9 outputs long.
pub(crate) fn bn4_run() -> Vec<usize> {
    vec![1, 2, 1, 1, 1, 1, 1, 1, 1]
}

/// Reduced lac operon model (3 inputs, 3 states, 3 outputs).
/// F blocks by input value u = 1..8, H = δ_8[8 6 3 6 5 6 7 6].
pub(crate) fn lac() -> Bcn {
    #[rustfmt::skip]
    let f = vec![
        8, 8, 8, 8, 8, 8, 8, 8, // u = 1
        8, 8, 8, 8, 8, 8, 8, 8, // u = 2
        8, 8, 8, 8, 8, 8, 8, 8, // u = 3
        8, 8, 8, 8, 8, 8, 8, 8, // u = 4
        1, 1, 1, 5, 3, 3, 3, 7, // u = 5
        1, 1, 1, 5, 3, 3, 3, 7, // u = 6
        3, 3, 3, 7, 4, 4, 4, 8, // u = 7
        4, 4, 4, 8, 4, 4, 4, 8, // u = 8
    ];
    Bcn::new(3, 3, 3, f, vec![8, 6, 3, 6, 5, 6, 7, 6]).unwrap()
}

/// The lac operon model as recovered by the multi-experiment pipeline when
/// states are labeled in discovery order; equivalent to [`lac`] under the
/// relabeling 1↦1, 8↦2, 3↦3, 4↦4, 2↦5, 7↦6, 5↦7, 6↦8 of true states to
/// discovery labels.
pub(crate) fn lac_relabeled() -> Bcn {
    #[rustfmt::skip]
    let f = vec![
        2, 2, 2, 2, 2, 2, 2, 2, // u = 1
        2, 2, 2, 2, 2, 2, 2, 2, // u = 2
        2, 2, 2, 2, 2, 2, 2, 2, // u = 3
        2, 2, 2, 2, 2, 2, 2, 2, // u = 4
        1, 6, 1, 7, 1, 3, 3, 3, // u = 5
        1, 6, 1, 7, 1, 3, 3, 3, // u = 6
        3, 2, 3, 6, 3, 4, 4, 4, // u = 7
        4, 2, 4, 2, 4, 4, 4, 4, // u = 8
    ];
    Bcn::new(3, 3, 3, f, vec![8, 6, 3, 6, 6, 7, 5, 6]).unwrap()
}

/// Slots (1-based pair indices) whose test sequence is δ_8^5 in the known
/// single-step pairwise test for [`lac`]; every other slot uses δ_8^1.
pub(crate) const LAC_TEST_SLOTS_5: [usize; 9] = [9, 10, 11, 12, 13, 20, 21, 22, 27];

/// The known single-step pairwise test for [`lac`] as slot-ordered input
/// sequences.
pub(crate) fn lac_o1_tests() -> Vec<Vec<usize>> {
    (1..=28)
        .map(|s| {
            if LAC_TEST_SLOTS_5.contains(&s) {
                vec![5]
            } else {
                vec![1]
            }
        })
        .collect()
}
