//! Acceptance gate for the identification pipeline.
//!
//! Each test below locks one end-to-end behaviour of the crate against
//! frozen reference values carried in `tests/common`: the compiler, the
//! four experiment regimes, the decoding and partial-knowledge paths, a
//! randomized property sweep, and the pair-index bijection.  Every test
//! prints a single `PASS criterion N` line (visible with `--nocapture`)
//! and asserts its own wall-clock budget so regressions in speed fail
//! the gate too.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bcnident::analysis::{
    build_cover_sequence, build_o1_test, data_arrays, find_o3_test, is_observable_bn,
    observability_matrix_bcn, pair_count, pair_index, validate_o1_test, O1Test,
};
use bcnident::dynamics::{equivalent, Bcn, PermutationMap};
use bcnident::harness::{
    random_bcn, random_controllable_o1_bcn, random_observable_bn, random_permutation, Plant,
};
use bcnident::ident::{
    identify_bcn_o1_multi, identify_bcn_o1_single, identify_bcn_o3, identify_bn,
    identify_from_p0, retrieve_effective_sequences, CaseTag, Group, Member, SampleSet, Signature,
};
use bcnident::logic::compile_source;
use bcnident::stp::{stp, stp_logical, LogicalMatrix, Matrix};

fn within(start: Instant, budget: Duration, label: &str) -> Duration {
    let took = start.elapsed();
    assert!(
        took <= budget,
        "{label} exceeded its {budget:?} budget: took {took:?}"
    );
    took
}

/// Wraps purely-observed output runs as a Case-1 sample set.
fn autonomous_runs(n: usize, l: usize, runs: &[Vec<usize>]) -> SampleSet {
    let groups = runs
        .iter()
        .enumerate()
        .map(|(i, outputs)| Group {
            id: format!("r{}", i + 1),
            members: vec![Member {
                inputs: Vec::new(),
                outputs: outputs.clone(),
            }],
        })
        .collect();
    SampleSet::new(CaseTag::Case1, Some(n), 0, l, groups).expect("runs form a valid sample set")
}

/// Asserts `a` and `b` are equivalent and that the returned witness
/// really maps one onto the other.
fn assert_equivalent(a: &Bcn, b: &Bcn) -> PermutationMap {
    let w = equivalent(a, b)
        .expect("equivalence search runs")
        .expect("expected an equivalence witness");
    assert_eq!(&a.transform(&w).unwrap(), b, "witness must map a onto b");
    w
}

#[test]
fn criterion_1_compiler_reproduces_reference_network() {
    let start = Instant::now();

    let src = std::fs::read_to_string(common::LAC_SOURCE_PATH).expect("fixture source exists");
    let sys = compile_source(&src).expect("fixture compiles");

    assert_eq!(sys.to_json(), common::LAC_GOLDEN_JSON, "serialized form is frozen");
    assert_eq!(sys, common::lac(), "compiled matrices match the frozen network");

    let took = within(start, Duration::from_secs(1), "criterion 1");
    println!("PASS criterion 1: compiler output is byte-identical to the frozen network ({took:?})");
}

#[test]
fn criterion_2_autonomous_identification_and_relabeling() {
    let start = Instant::now();

    let data = autonomous_runs(3, 1, &common::bn8_runs());

    // The labeling pass must discover the eight window signatures in
    // first-appearance order.
    let table = retrieve_effective_sequences(&data, 8).unwrap();
    assert_eq!(table.len(), 8);
    for (k, sig) in common::bn8_signatures().into_iter().enumerate() {
        assert_eq!(
            table.get(k + 1),
            Some(&Signature::Seq(sig)),
            "signature {} out of order",
            k + 1
        );
    }

    // Full identification recovers the generating network exactly.
    let res = identify_bn(&data, 8).unwrap();
    assert!(res.complete);
    assert_eq!(res.to_bcn().unwrap(), common::bn8());

    // Relabeling is exact, and the equivalence search finds a witness.
    let g = PermutationMap::new(common::bn8_relabeling()).unwrap();
    assert_eq!(common::bn8().transform(&g).unwrap(), common::bn8_relabeled());
    assert_equivalent(&common::bn8(), &common::bn8_relabeled());

    let took = within(start, Duration::from_secs(1), "criterion 2");
    println!("PASS criterion 2: autonomous runs identify the 8-state network exactly ({took:?})");
}

#[test]
fn criterion_3_single_test_sequence_pipeline() {
    let start = Instant::now();

    let sys = common::bcn4();
    let cover = common::bcn4_cover();

    // The shortest single test sequence distinguishing all states.
    assert_eq!(find_o3_test(&sys, 2).unwrap(), Some(vec![1, 1]));

    // The identified copy's observability matrix under that test.
    let obs = observability_matrix_bcn(&common::bcn4_identified(), &[1, 1]).unwrap();
    assert_eq!(
        obs,
        vec![vec![2, 1, 2, 1], vec![1, 2, 2, 2], vec![2, 2, 1, 1]]
    );

    // The generated experiment replays the cover walk bit-exactly.
    let mut plant = Plant::new(sys.clone());
    let log = plant.gen_case3_o3(1, &cover, &[1, 1]).unwrap();
    let members: Vec<&Member> = log.data.members().collect();
    let frozen = common::bcn4_case3_outputs();
    assert_eq!(members.len(), 12);
    assert_eq!(members.len(), frozen.len());
    for (t, member) in members.iter().enumerate() {
        let mut inputs = cover[..t].to_vec();
        inputs.extend_from_slice(&[1, 1]);
        assert_eq!(member.inputs, inputs, "member {t} replays the walk prefix");
        assert_eq!(member.outputs, frozen[t], "member {t} outputs are frozen");
    }

    // Identification returns the expected labeled copy, equivalent to
    // the plant, with the walk decoded state by state.
    let res = identify_bcn_o3(&log.data, &cover, 2).unwrap();
    assert!(res.complete);
    let hat = res.to_bcn().unwrap();
    assert_eq!(hat, common::bcn4_identified());
    assert_equivalent(&hat, &sys);
    assert_eq!(res.decoded, Some(common::bcn4_decoded()));

    let took = within(start, Duration::from_secs(1), "criterion 3");
    println!("PASS criterion 3: single-sequence experiment identifies the controlled network ({took:?})");
}

#[test]
fn criterion_4_unobservable_network_still_identified_up_to_relabeling() {
    let start = Instant::now();

    let orig = common::bn4_unobservable();
    assert!(!is_observable_bn(&orig).unwrap());

    let data = autonomous_runs(2, 1, &[common::bn4_run()]);
    let res = identify_bn(&data, 4).unwrap();
    assert!(res.complete);
    let hat = res.to_bcn().unwrap();
    assert_eq!(hat.f().col_indices(), &[2, 3, 3, 2]);
    assert_eq!(hat.h().col_indices(), &[1, 2, 1, 1]);

    // The reconstruction differs from the plant only by a relabeling.
    assert_equivalent(&hat, &orig);

    let took = within(start, Duration::from_secs(1), "criterion 4");
    println!("PASS criterion 4: an unobservable plant is still recovered up to relabeling ({took:?})");
}

#[test]
fn criterion_5_pairwise_bank_population_experiment() {
    let start = Instant::now();

    let lac = common::lac();
    let test = O1Test::new(3, 3, common::lac_o1_tests()).unwrap();
    assert!(
        validate_o1_test(&lac, &test).unwrap(),
        "the published bank distinguishes every pair"
    );

    let mut plant = Plant::new(lac.clone());
    let log = plant.gen_case4(&(1..=8).collect::<Vec<_>>(), &test).unwrap();
    assert_eq!(log.data.groups.len(), 8);
    for group in &log.data.groups {
        assert_eq!(group.members.len(), 9 * 28, "bare block plus one per input");
    }

    // Frozen data lines.  Slot s uses probe sequence [5] on the nine
    // listed slots and [1] everywhere else; each family below fixes a
    // subject and a prefix input and sweeps all 28 slots.
    let five: [usize; 9] = [9, 10, 11, 12, 13, 20, 21, 22, 27];
    // (subject, prefix j with 0 = bare, outputs on [1]-slots, outputs on [5]-slots)
    let families: [(usize, usize, &[usize], &[usize]); 17] = [
        (1, 0, &[8, 6], &[8, 8]),
        (1, 1, &[8, 6, 6], &[8, 6, 7]),
        (1, 2, &[8, 6, 6], &[8, 6, 7]),
        (1, 3, &[8, 6, 6], &[8, 6, 7]),
        (1, 4, &[8, 6, 6], &[8, 6, 7]),
        (1, 5, &[8, 8, 6], &[8, 8, 8]),
        (1, 6, &[8, 8, 6], &[8, 8, 8]),
        (1, 7, &[8, 3, 6], &[8, 3, 8]),
        (1, 8, &[8, 6, 6], &[8, 6, 5]),
        (2, 0, &[6, 6], &[6, 8]),
        (4, 7, &[6, 7, 6], &[6, 7, 3]),
        (5, 0, &[5, 6], &[5, 3]),
        (6, 0, &[6, 6], &[6, 3]),
        (8, 0, &[6, 6], &[6, 7]),
        (8, 5, &[6, 7, 6], &[6, 7, 3]),
        (3, 0, &[3, 6], &[3, 8]),
        (7, 0, &[7, 6], &[7, 3]),
    ];
    for &(subject, j, on_one, on_five) in &families {
        let group = &log.data.groups[subject - 1];
        assert_eq!(group.id, format!("g{subject}"));
        for s in 1..=28 {
            let member = &group.members[j * 28 + s - 1];
            let mut inputs = if j == 0 { Vec::new() } else { vec![j] };
            inputs.extend_from_slice(&test.tests[s - 1]);
            assert_eq!(member.inputs, inputs, "subject {subject}, prefix {j}, slot {s}");
            let expect = if five.contains(&s) { on_five } else { on_one };
            assert_eq!(
                member.outputs, expect,
                "subject {subject}, prefix {j}, slot {s}"
            );
        }
    }

    // Identification is equivalent to the plant, and under the swap of
    // labels 6 and 7 equals the published relabeled form exactly.
    let res = identify_bcn_o1_multi(&log.data, &test).unwrap();
    assert!(res.complete);
    let hat = res.to_bcn().unwrap();
    assert_equivalent(&hat, &lac);
    let swap67 = PermutationMap::new(vec![1, 2, 3, 4, 5, 7, 6, 8]).unwrap();
    assert_eq!(hat.transform(&swap67).unwrap(), common::lac_relabeled());

    let took = within(start, Duration::from_secs(5), "criterion 5");
    println!("PASS criterion 5: population experiment reproduces the frozen data bank and network ({took:?})");
}

#[test]
fn criterion_6_partial_population_identifies_reachable_part() {
    let start = Instant::now();

    let lac = common::lac();
    let test = O1Test::new(3, 3, common::lac_o1_tests()).unwrap();

    let mut plant = Plant::new(lac.clone());
    let log = plant.gen_case4_p0(&[8], &test).unwrap();
    let res = identify_from_p0(&log.data, &test, &[]).unwrap();

    // Independent reachability oracle: breadth-first sweep over the raw
    // transition table from initial state 8 under every input value.
    let f = lac.f().col_indices();
    let mut seen = [false; 8];
    seen[7] = true;
    let mut queue = vec![8usize];
    while let Some(x) = queue.pop() {
        for u in 1..=8 {
            let t = f[(u - 1) * 8 + (x - 1)];
            if !seen[t - 1] {
                seen[t - 1] = true;
                queue.push(t);
            }
        }
    }
    let reach: Vec<usize> = (1..=8).filter(|&x| seen[x - 1]).collect();
    assert_eq!(reach, vec![1, 3, 4, 5, 7, 8]);

    // Exactly the reachable states earn labels; decode each label back
    // to its plant state by matching the stored fingerprint against the
    // plant's own data arrays.
    assert_eq!(res.table.len(), reach.len());
    let arrays = data_arrays(&lac, &test).unwrap();
    let mut state_of = vec![0usize; res.table.len() + 1];
    for label in 1..=res.table.len() {
        let rows = match res.table.get(label) {
            Some(Signature::Array(rows)) => rows,
            other => panic!("label {label} has a non-array fingerprint: {other:?}"),
        };
        let matches: Vec<usize> = (1..=8).filter(|&i| &arrays[i - 1] == rows).collect();
        assert_eq!(matches.len(), 1, "label {label} decodes to a unique state");
        state_of[label] = matches[0];
    }
    let mut decoded: Vec<usize> = state_of[1..].to_vec();
    decoded.sort_unstable();
    assert_eq!(decoded, reach, "labels cover exactly the reachable set");

    // The unknown transition columns are exactly those whose state
    // coordinate never appeared, i.e. the two labels beyond the table.
    assert!(!res.complete);
    let mut unknown = res.unknown_f_columns();
    unknown.sort_unstable();
    let mut expected: Vec<(usize, usize)> = Vec::new();
    for u in 1..=8 {
        for x in (res.table.len() + 1)..=8 {
            expected.push((u, x));
        }
    }
    expected.sort_unstable();
    assert_eq!(unknown, expected, "16 columns for the two unreached states");

    // Every known entry agrees with the plant under the decode map.
    let h = lac.h().col_indices();
    for (u, x, t) in res.known_transitions() {
        assert_eq!(
            f[(u - 1) * 8 + (state_of[x] - 1)],
            state_of[t],
            "transition ({u}, {x}) decodes onto the plant"
        );
    }
    let known_h = res.known_outputs();
    assert_eq!(known_h.len(), res.table.len());
    for (x, y) in known_h {
        assert_eq!(h[state_of[x] - 1], y, "output of label {x} decodes onto the plant");
    }

    let took = within(start, Duration::from_secs(2), "criterion 6");
    println!("PASS criterion 6: partial population leaves exactly the unreachable columns unknown ({took:?})");
}

#[test]
fn criterion_7_randomized_property_sweep() {
    let start = Instant::now();

    // (a) Autonomous round trips: observable plants are recovered up to
    // relabeling from all-state output runs.
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
    for i in 0..100 {
        let n = [2, 3, 4][i % 3];
        let sys = random_observable_bn(&mut rng, n, 1).unwrap();
        let sc = sys.state_count();
        let mut plant = Plant::new(sys.clone());
        let x0s: Vec<usize> = (1..=sc).collect();
        let log = plant.gen_case1(&x0s, 4 * sc).unwrap();
        let res = identify_bn(&log.data, sc).unwrap();
        assert!(res.complete, "draw {i}: observable runs identify fully");
        let hat = res.to_bcn().unwrap();
        assert_equivalent(&hat, &sys);
    }

    // (b) Controlled round trips: both the walk-plus-bank protocol and
    // the population protocol recover pairwise-testable plants.
    let combos = [(2usize, 1usize), (2, 2), (3, 1), (3, 2)];
    for i in 0..50 {
        let (n, m) = combos[i % 4];
        let sys = random_controllable_o1_bcn(&mut rng, n, m, 1).unwrap();
        let test = build_o1_test(&sys).unwrap();
        let sc = sys.state_count();

        let cover = build_cover_sequence(&sys, 1).unwrap();
        let mut plant = Plant::new(sys.clone());
        let log = plant.gen_case3_o1(1, &cover.inputs, &test).unwrap();
        let res = identify_bcn_o1_single(&log.data, &cover.inputs, &test).unwrap();
        assert!(res.complete, "draw {i}: walk protocol identifies fully");
        assert_equivalent(&res.to_bcn().unwrap(), &sys);

        let mut plant = Plant::new(sys.clone());
        let x0s: Vec<usize> = (1..=sc).collect();
        let log = plant.gen_case4(&x0s, &test).unwrap();
        let res = identify_bcn_o1_multi(&log.data, &test).unwrap();
        assert!(res.complete, "draw {i}: population protocol identifies fully");
        assert_equivalent(&res.to_bcn().unwrap(), &sys);
    }

    // (c) Whenever a single test sequence exists, a pairwise bank must
    // exist too.
    let mut single_hits = 0;
    for i in 0..100 {
        let n = [2, 3][i % 2];
        let m = [1, 2][(i / 2) % 2];
        let sys = random_bcn(&mut rng, n, m, 1).unwrap();
        if find_o3_test(&sys, sys.state_count()).unwrap().is_some() {
            single_hits += 1;
            assert!(
                build_o1_test(&sys).is_ok(),
                "draw {i}: a single-sequence-testable plant must be pairwise testable"
            );
        }
    }
    assert!(single_hits > 0, "the sweep never exercised the implication");

    // (d) Relabeling: the equivalence search always finds a witness for
    // a transformed copy, and observability matrices of the two copies
    // differ by the same column permutation.
    for i in 0..100 {
        let n = [2, 3][i % 2];
        let m = [0, 1, 2][i % 3];
        let sys = random_bcn(&mut rng, n, m, 1).unwrap();
        let g = random_permutation(&mut rng, sys.state_count()).unwrap();
        let hat = sys.transform(&g).unwrap();
        let w = equivalent(&sys, &hat)
            .unwrap()
            .expect("a relabeled copy is equivalent");
        assert_eq!(sys.transform(&w).unwrap(), hat, "draw {i}: witness maps onto the copy");

        let seq: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=sys.input_count())).collect();
        let obs_sys = observability_matrix_bcn(&sys, &seq).unwrap();
        let obs_hat = observability_matrix_bcn(&hat, &seq).unwrap();
        for (row_s, row_h) in obs_sys.iter().zip(&obs_hat) {
            for j in 1..=sys.state_count() {
                assert_eq!(
                    row_s[j - 1],
                    row_h[g.image(j) - 1],
                    "draw {i}: observability columns permute with the relabeling"
                );
            }
        }
    }

    // (e) Product algebra: associativity on random logical operands and
    // agreement with the dense integer oracle, including the ordinary
    // matrix product as the dimension-matched special case.
    let rand_logical = |rng: &mut ChaCha8Rng, rows: usize, cols: usize| {
        let idx = (0..cols).map(|_| rng.gen_range(1..=rows)).collect();
        LogicalMatrix::new(rows, idx).unwrap()
    };
    for i in 0..500 {
        let mut rng2 = ChaCha8Rng::seed_from_u64(0xE + i as u64);
        let dims = [1usize, 2, 3, 4];
        let mut d = || dims[rng2.gen_range(0..dims.len())];
        let (ra, ca, rb, cb, rc, cc) = (d(), d(), d(), d(), d(), d());
        let a = rand_logical(&mut rng2, ra, ca);
        let b = rand_logical(&mut rng2, rb, cb);
        let c = rand_logical(&mut rng2, rc, cc);

        let ab = stp_logical(&a, &b).unwrap();
        let bc = stp_logical(&b, &c).unwrap();
        let left = stp_logical(&ab, &c).unwrap();
        let right = stp_logical(&a, &bc).unwrap();
        assert_eq!(left, right, "draw {i}: product is associative");

        let dense = stp(&Matrix::Dense(a.to_dense()), &Matrix::Dense(b.to_dense()))
            .unwrap()
            .to_dense();
        assert_eq!(ab.to_dense(), dense, "draw {i}: logical route matches dense route");

        let b2 = rand_logical(&mut rng2, a.cols(), cb);
        let plain = a.to_dense().mul(&b2.to_dense()).unwrap();
        assert_eq!(
            stp_logical(&a, &b2).unwrap().to_dense(),
            plain,
            "draw {i}: matched dimensions degenerate to the plain product"
        );
    }

    let took = within(start, Duration::from_secs(90), "criterion 7");
    println!("PASS criterion 7: randomized property sweep held on every draw ({took:?})");
}

#[test]
fn criterion_8_pair_index_is_a_bijection() {
    let start = Instant::now();

    for n in 1..=5usize {
        let size = 1usize << n;
        let slots = pair_count(size);
        assert_eq!(
            slots,
            (1usize << (2 * n - 1)) - (1usize << (n - 1)),
            "slot count closed form at n = {n}"
        );
        let mut hit = vec![false; slots + 1];
        let mut total = 0usize;
        for i in 1..=size {
            for i2 in (i + 1)..=size {
                let s = pair_index(i, i2, size).unwrap();
                assert!((1..=slots).contains(&s), "index range at n = {n}");
                assert!(!hit[s], "duplicate slot {s} at n = {n}");
                hit[s] = true;
                total += 1;
            }
        }
        assert_eq!(total, slots, "every slot hit exactly once at n = {n}");
    }

    let took = within(start, Duration::from_secs(1), "criterion 8");
    println!("PASS criterion 8: pair indexing is a bijection onto the slot range ({took:?})");
}
