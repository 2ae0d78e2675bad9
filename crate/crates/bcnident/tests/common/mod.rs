//! Frozen reference networks and measurements shared by the integration
//! tests. These deliberately duplicate the unit-test fixtures rather
//! than importing them: the integration suite carries its own copy of
//! the ground truth, so tampering with either copy surfaces as a
//! failure instead of silently moving the goalposts.

#![allow(dead_code)]

use bcnident::dynamics::Bcn;

/// Path of the compilable network program fixture.
pub const LAC_SOURCE_PATH: &str = concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/tests/fixtures/lac_operon.bnl"
);

/// The exact serialized form the compiled fixture must produce.
pub const LAC_GOLDEN_JSON: &str = concat!(
    r#"{"n":3,"m":3,"l":3,"F":["#,
    "8,8,8,8,8,8,8,8,8,8,8,8,8,8,8,8,8,8,8,8,8,8,8,8,8,8,8,8,8,8,8,8,",
    "1,1,1,5,3,3,3,7,1,1,1,5,3,3,3,7,3,3,3,7,4,4,4,8,4,4,4,8,4,4,4,8",
    r#"],"H":[8,6,3,6,5,6,7,6]}"#
);

/// 3-node observable BN: F = δ_8[2 3 4 5 6 3 8 7], H = δ_2[2 1 1 2 2 2 1 2].
pub fn bn8() -> Bcn {
    Bcn::new(3, 0, 1, vec![2, 3, 4, 5, 6, 3, 8, 7], vec![2, 1, 1, 2, 2, 2, 1, 2]).unwrap()
}

/// The same behavior as [`bn8`] under the relabeling 7↦1, 8↦2, 1↦3, …, 6↦8.
pub fn bn8_relabeled() -> Bcn {
    Bcn::new(3, 0, 1, vec![2, 1, 4, 5, 6, 7, 8, 5], vec![1, 2, 2, 1, 1, 2, 2, 2]).unwrap()
}

/// The relabeling taking [`bn8`] to [`bn8_relabeled`].
pub fn bn8_relabeling() -> Vec<usize> {
    vec![3, 4, 5, 6, 7, 8, 1, 2]
}

/// Output trajectories of [`bn8`] from states 1 and 7.
pub fn bn8_runs() -> Vec<Vec<usize>> {
    vec![
        vec![2, 1, 1, 2, 2, 2, 1, 2, 2, 2, 1, 2, 2, 2, 1],
        vec![1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1],
    ]
}

/// The eight length-8 output windows of [`bn8`], one per state, in the
/// order the runs above reveal them.
pub fn bn8_signatures() -> Vec<Vec<usize>> {
    vec![
        vec![2, 1, 1, 2, 2, 2, 1, 2],
        vec![1, 1, 2, 2, 2, 1, 2, 2],
        vec![1, 2, 2, 2, 1, 2, 2, 2],
        vec![2, 2, 2, 1, 2, 2, 2, 1],
        vec![2, 2, 1, 2, 2, 2, 1, 2],
        vec![2, 1, 2, 2, 2, 1, 2, 2],
        vec![1, 2, 1, 2, 1, 2, 1, 2],
        vec![2, 1, 2, 1, 2, 1, 2, 1],
    ]
}

/// 2-state, 1-input, 1-output control network:
/// F = δ_4[2 4 1 1 | 2 3 2 2], H = δ_2[2 1 1 2].
pub fn bcn4() -> Bcn {
    Bcn::new(2, 1, 1, vec![2, 4, 1, 1, 2, 3, 2, 2], vec![2, 1, 1, 2]).unwrap()
}

/// The network the short-test pipeline recovers from [`bcn4`] data:
/// F = δ_4[2 3 1 1 | 2 4 2 2], H = δ_2[2 1 2 1].
pub fn bcn4_identified() -> Bcn {
    Bcn::new(2, 1, 1, vec![2, 3, 1, 1, 2, 4, 2, 2], vec![2, 1, 2, 1]).unwrap()
}

/// The cover walk used in the [`bcn4`] experiments (from state 1).
pub fn bcn4_cover() -> Vec<usize> {
    vec![1, 1, 1, 2, 2, 1, 1, 1, 2, 2, 2]
}

/// The twelve output sequences measured when [`bcn4`] replays the cover
/// walk to position t = 0..=11 and appends the test (1, 1).
pub fn bcn4_case3_outputs() -> Vec<Vec<usize>> {
    vec![
        vec![2, 1, 2],
        vec![2, 1, 2, 2],
        vec![2, 1, 2, 2, 1],
        vec![2, 1, 2, 2, 1, 2],
        vec![2, 1, 2, 2, 1, 2, 2],
        vec![2, 1, 2, 2, 1, 1, 2, 1],
        vec![2, 1, 2, 2, 1, 1, 2, 1, 2],
        vec![2, 1, 2, 2, 1, 1, 2, 1, 2, 2],
        vec![2, 1, 2, 2, 1, 1, 2, 1, 2, 2, 1],
        vec![2, 1, 2, 2, 1, 1, 2, 1, 2, 1, 2, 2],
        vec![2, 1, 2, 2, 1, 1, 2, 1, 2, 1, 1, 2, 1],
        vec![2, 1, 2, 2, 1, 1, 2, 1, 2, 1, 1, 1, 2, 2],
    ]
}

/// The label sequence decoding the cover walk of [`bcn4_cover`].
pub fn bcn4_decoded() -> Vec<usize> {
    vec![1, 2, 3, 1, 2, 4, 1, 2, 3, 2, 4, 2]
}

/// 2-node BN that is identifiable but not observable.
pub fn bn4_unobservable() -> Bcn {
    Bcn::new(2, 0, 1, vec![3, 3, 4, 4], vec![1, 1, 2, 1]).unwrap()
}

/// Output trajectory of [`bn4_unobservable`] from state 1, 9 outputs long.
pub fn bn4_run() -> Vec<usize> {
    vec![1, 2, 1, 1, 1, 1, 1, 1, 1]
}

/// Reduced lac operon model (3 inputs, 3 states, 3 outputs).
pub fn lac() -> Bcn {
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

/// The lac operon as recovered by the multi-experiment pipeline with
/// states in its published discovery order (true states 1, 8, 3, 4, 2,
/// 7, 5, 6 at labels 1..8).
pub fn lac_relabeled() -> Bcn {
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

/// Slots (1-based pair indices) probed with input value 5 in the
/// hand-picked single-step pairwise test for [`lac`].
pub const LAC_TEST_SLOTS_5: [usize; 9] = [9, 10, 11, 12, 13, 20, 21, 22, 27];

/// The hand-picked single-step pairwise test for [`lac`].
pub fn lac_o1_tests() -> Vec<Vec<usize>> {
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
