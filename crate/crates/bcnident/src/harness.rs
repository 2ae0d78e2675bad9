//! Simulated experiment harness: a [`Plant`] wraps a known network and
//! plays the role of the physical system under test — experiment
//! subjects are registered with (hidden) initial states, queried with
//! input sequences, and answer with output sequences only. The
//! generation methods script the four sampling regimes end to end and
//! return both the measured [`SampleSet`] and the protocol bookkeeping
//! (tests applied, cover walk used) as an [`ExperimentLog`], ready to
//! feed the identification passes.
//!
//! The module also provides seeded random generators for networks with
//! prescribed analysis properties, used to exercise the identification
//! pipeline on systems other than the worked examples.

use std::collections::{BTreeMap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    build_cover_sequence_with, build_o1_test, find_o3_test, is_controllable, is_observable_bn,
    reachable_set, CoverWalk, O1Test,
};
use crate::dynamics::{pow2, Bcn, PermutationMap};
use crate::error::{Error, Result};
use crate::ident::{CaseTag, Group, Member, SampleSet};

/// A generated data set together with the protocol that produced it:
/// which regime ran, which test sequences were applied, and which cover
/// walk was replayed (where applicable).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentLog {
    pub protocol: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub o1_test: Option<O1Test>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub o3_test: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<Vec<usize>>,
    pub data: SampleSet,
}

impl ExperimentLog {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("log serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let mut log: ExperimentLog = serde_json::from_str(s)?;
        log.data.validate()?;
        if let Some(t) = log.o1_test.take() {
            log.o1_test = Some(O1Test::new(t.n, t.m, t.tests)?);
        }
        Ok(log)
    }
}

/// How thoroughly a data set exercised the plant: which (input value,
/// state) pairs its members actually applied, and which were never
/// touched. A data set identifies the full transition matrix only if it
/// is sufficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SufficiencyReport {
    pub sufficient: bool,
    pub covered: Vec<(usize, usize)>,
    pub missing: Vec<(usize, usize)>,
}

/// A known network posing as the system under test. Experiment subjects
/// are registered by id with their true initial state; queries replay an
/// input sequence on a fresh copy of a subject (restart semantics) and
/// return only the measured outputs, which is all a real experimenter
/// would see.
#[derive(Debug, Clone)]
pub struct Plant {
    sys: Bcn,
    registry: BTreeMap<String, usize>,
}

impl Plant {
    pub fn new(sys: Bcn) -> Self {
        Self {
            sys,
            registry: BTreeMap::new(),
        }
    }

    pub fn system(&self) -> &Bcn {
        &self.sys
    }

    /// The registered subjects as (id, initial state) pairs.
    pub fn registry(&self) -> impl Iterator<Item = (&str, usize)> {
        self.registry.iter().map(|(id, &x0)| (id.as_str(), x0))
    }

    /// Registers an experiment subject with its (hidden) initial state.
    pub fn register(&mut self, id: &str, x0: usize) -> Result<()> {
        let sc = self.sys.state_count();
        if x0 == 0 || x0 > sc {
            return Err(Error::IndexOutOfRange {
                context: "subject initial state",
                index: x0,
                bound: sc,
            });
        }
        if self.registry.contains_key(id) {
            return Err(Error::DuplicateExperiment { id: id.to_string() });
        }
        self.registry.insert(id.to_string(), x0);
        Ok(())
    }

    /// Restarts subject `id` and applies `inputs`, returning the
    /// `|inputs| + 1` measured outputs.
    pub fn query(&self, id: &str, inputs: &[usize]) -> Result<Vec<usize>> {
        let &x0 = self
            .registry
            .get(id)
            .ok_or_else(|| Error::UnknownExperiment { id: id.to_string() })?;
        let (_, outputs) = self.sys.simulate_idx(x0, inputs)?;
        Ok(outputs)
    }

    fn next_id(&self) -> String {
        format!("g{}", self.registry.len() + 1)
    }

    fn require_bn(&self) -> Result<()> {
        if !self.sys.is_bn() {
            return Err(Error::DimensionMismatch {
                context: "autonomous generation input count",
                expected: 0,
                found: self.sys.m(),
            });
        }
        Ok(())
    }

    /// Case 1 sampling: one free-running subject per initial state, each
    /// measured for `len` output samples.
    pub fn gen_case1(&mut self, x0s: &[usize], len: usize) -> Result<ExperimentLog> {
        self.require_bn()?;
        if len == 0 {
            return Err(Error::EmptyData {
                context: "requested run length".into(),
            });
        }
        let mut groups = Vec::with_capacity(x0s.len());
        for &x0 in x0s {
            let id = self.next_id();
            self.register(&id, x0)?;
            let outputs = self.query(&id, &vec![1; len - 1])?;
            groups.push(Group {
                id,
                members: vec![Member {
                    inputs: vec![],
                    outputs,
                }],
            });
        }
        let data = SampleSet::new(CaseTag::Case1, Some(self.sys.n()), 0, self.sys.l(), groups)?;
        Ok(ExperimentLog {
            protocol: "case1".into(),
            o1_test: None,
            o3_test: None,
            cover: None,
            data,
        })
    }

    /// Case 2 sampling: like Case 1 but the state itself is measured, so
    /// the recorded "outputs" are state indices (`l = n`).
    pub fn gen_case2(&mut self, x0s: &[usize], len: usize) -> Result<ExperimentLog> {
        self.require_bn()?;
        if len == 0 {
            return Err(Error::EmptyData {
                context: "requested run length".into(),
            });
        }
        let mut groups = Vec::with_capacity(x0s.len());
        for &x0 in x0s {
            let id = self.next_id();
            self.register(&id, x0)?;
            let (states, _) = self.sys.simulate_idx(x0, &vec![1; len - 1])?;
            groups.push(Group {
                id,
                members: vec![Member {
                    inputs: vec![],
                    outputs: states,
                }],
            });
        }
        let data = SampleSet::new(CaseTag::Case2, Some(self.sys.n()), 0, self.sys.n(), groups)?;
        Ok(ExperimentLog {
            protocol: "case2".into(),
            o1_test: None,
            o3_test: None,
            cover: None,
            data,
        })
    }

    /// Case 3 sampling with a single test sequence: one subject,
    /// restarted once per cover-walk position `t = 0..=T`, driven along
    /// the first `t` cover inputs and then the test.
    pub fn gen_case3_o3(
        &mut self,
        x0: usize,
        cover: &[usize],
        o3_test: &[usize],
    ) -> Result<ExperimentLog> {
        if o3_test.is_empty() {
            return Err(Error::EmptyData {
                context: "single test sequence".into(),
            });
        }
        let id = self.next_id();
        self.register(&id, x0)?;
        let mut members = Vec::with_capacity(cover.len() + 1);
        for t in 0..=cover.len() {
            let inputs: Vec<usize> = cover[..t].iter().chain(o3_test).copied().collect();
            let outputs = self.query(&id, &inputs)?;
            members.push(Member { inputs, outputs });
        }
        let data = SampleSet::new(
            CaseTag::Case3,
            Some(self.sys.n()),
            self.sys.m(),
            self.sys.l(),
            vec![Group { id, members }],
        )?;
        Ok(ExperimentLog {
            protocol: "case3-o3".into(),
            o1_test: None,
            o3_test: Some(o3_test.to_vec()),
            cover: Some(cover.to_vec()),
            data,
        })
    }

    /// Case 3 sampling with a pairwise test bank: one subject, restarted
    /// once per (cover position, test slot) combination.
    pub fn gen_case3_o1(
        &mut self,
        x0: usize,
        cover: &[usize],
        test: &O1Test,
    ) -> Result<ExperimentLog> {
        test.matches(&self.sys)?;
        let id = self.next_id();
        self.register(&id, x0)?;
        let mut members = Vec::with_capacity((cover.len() + 1) * test.tests.len());
        for t in 0..=cover.len() {
            for seq in &test.tests {
                let inputs: Vec<usize> = cover[..t].iter().chain(seq).copied().collect();
                let outputs = self.query(&id, &inputs)?;
                members.push(Member { inputs, outputs });
            }
        }
        let data = SampleSet::new(
            CaseTag::Case3,
            Some(self.sys.n()),
            self.sys.m(),
            self.sys.l(),
            vec![Group { id, members }],
        )?;
        Ok(ExperimentLog {
            protocol: "case3-o1".into(),
            o1_test: Some(test.clone()),
            o3_test: None,
            cover: Some(cover.to_vec()),
            data,
        })
    }

    /// Case 4 sampling: one subject per initial state; each answers the
    /// whole bank bare (slot sequences as-is) and then once per probing
    /// input value `j` (the probe prepended to every slot sequence).
    pub fn gen_case4(&mut self, x0s: &[usize], test: &O1Test) -> Result<ExperimentLog> {
        test.matches(&self.sys)?;
        let mut groups = Vec::with_capacity(x0s.len());
        for &x0 in x0s {
            let id = self.next_id();
            self.register(&id, x0)?;
            groups.push(Group {
                members: self.bank_members(&id, &[], test)?,
                id,
            });
        }
        let data = SampleSet::new(
            CaseTag::Case4,
            Some(self.sys.n()),
            self.sys.m(),
            self.sys.l(),
            groups,
        )?;
        Ok(ExperimentLog {
            protocol: "case4".into(),
            o1_test: Some(test.clone()),
            o3_test: None,
            cover: None,
            data,
        })
    }

    /// Case 4 sampling from a known start set: subjects start in `p0`
    /// states only, and each state reachable from `p0` gets one group
    /// whose members carry a shortest input walk to it as a prefix
    /// before the bank (bare and probed). States outside the reachable
    /// set are never fingerprinted, so identification from this data is
    /// complete exactly when `p0` reaches everything.
    pub fn gen_case4_p0(&mut self, p0: &[usize], test: &O1Test) -> Result<ExperimentLog> {
        test.matches(&self.sys)?;
        let targets = reachable_set(&self.sys, p0)?;
        let sc = self.sys.state_count();
        let ic = self.sys.input_count();
        // Multi-source breadth-first search for shortest input walks;
        // parent input 0 marks a start state.
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; sc];
        let mut queue = VecDeque::new();
        for &s in p0 {
            if parent[s - 1].is_none() {
                parent[s - 1] = Some((s, 0));
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            for u in 1..=ic {
                let y = self.sys.f_at(u, x);
                if parent[y - 1].is_none() {
                    parent[y - 1] = Some((x, u));
                    queue.push_back(y);
                }
            }
        }
        let mut groups = Vec::with_capacity(targets.len());
        for &target in &targets {
            let mut walk = Vec::new();
            let mut at = target;
            let source = loop {
                let (px, pu) = parent[at - 1].expect("target is reachable");
                if pu == 0 {
                    break at;
                }
                walk.push(pu);
                at = px;
            };
            walk.reverse();
            let id = self.next_id();
            self.register(&id, source)?;
            groups.push(Group {
                members: self.bank_members(&id, &walk, test)?,
                id,
            });
        }
        let data = SampleSet::new(
            CaseTag::Case4,
            Some(self.sys.n()),
            self.sys.m(),
            self.sys.l(),
            groups,
        )?;
        Ok(ExperimentLog {
            protocol: "case4-p0".into(),
            o1_test: Some(test.clone()),
            o3_test: None,
            cover: None,
            data,
        })
    }

    /// One subject's bank answers: `N` bare members (prefix ++ slot
    /// sequence) then, per input value `j`, `N` probed members
    /// (prefix ++ [j] ++ slot sequence).
    fn bank_members(&self, id: &str, prefix: &[usize], test: &O1Test) -> Result<Vec<Member>> {
        let ic = pow2(test.m)?;
        let mut members = Vec::with_capacity(test.tests.len() * (ic + 1));
        for seq in &test.tests {
            let inputs: Vec<usize> = prefix.iter().chain(seq).copied().collect();
            let outputs = self.query(id, &inputs)?;
            members.push(Member { inputs, outputs });
        }
        for j in 1..=ic {
            for seq in &test.tests {
                let inputs: Vec<usize> = prefix
                    .iter()
                    .chain(std::iter::once(&j))
                    .chain(seq)
                    .copied()
                    .collect();
                let outputs = self.query(id, &inputs)?;
                members.push(Member { inputs, outputs });
            }
        }
        Ok(members)
    }

    /// Replays a data set against the true network and reports which
    /// (input value, state) pairs it exercised. Every group id must be
    /// registered; measured outputs must match the true ones (Case 2
    /// members are checked against the state trajectory instead).
    pub fn check_sufficiency(&self, data: &SampleSet) -> Result<SufficiencyReport> {
        let sc = self.sys.state_count();
        let ic = self.sys.input_count();
        let mut used = vec![false; ic * sc];
        for group in &data.groups {
            let &x0 = self
                .registry
                .get(&group.id)
                .ok_or_else(|| Error::UnknownExperiment {
                    id: group.id.clone(),
                })?;
            for member in &group.members {
                let inputs = if member.inputs.is_empty() && member.outputs.len() > 1 {
                    vec![1; member.outputs.len() - 1]
                } else {
                    member.inputs.clone()
                };
                let (states, outputs) = self.sys.simulate_idx(x0, &inputs)?;
                let truth = match data.case_tag {
                    CaseTag::Case2 => &states,
                    _ => &outputs,
                };
                if &member.outputs != truth {
                    return Err(Error::DataInconsistency {
                        context: format!(
                            "subject '{}' measurements disagree with the plant",
                            group.id
                        ),
                    });
                }
                for (t, &u) in inputs.iter().enumerate() {
                    used[(u - 1) * sc + states[t] - 1] = true;
                }
            }
        }
        let mut covered = Vec::new();
        let mut missing = Vec::new();
        for u in 1..=ic {
            for x in 1..=sc {
                if used[(u - 1) * sc + x - 1] {
                    covered.push((u, x));
                } else {
                    missing.push((u, x));
                }
            }
        }
        Ok(SufficiencyReport {
            sufficient: missing.is_empty(),
            covered,
            missing,
        })
    }
}

/// A uniformly random network of the given shape: every transition
/// column and output column drawn independently.
pub fn random_bcn(rng: &mut impl Rng, n: usize, m: usize, l: usize) -> Result<Bcn> {
    let sc = pow2(n)?;
    let ic = pow2(m)?;
    let oc = pow2(l)?;
    let f = (0..ic * sc).map(|_| rng.gen_range(1..=sc)).collect();
    let h = (0..sc).map(|_| rng.gen_range(1..=oc)).collect();
    Bcn::new(n, m, l, f, h)
}

/// A uniformly random relabeling of `size` states.
pub fn random_permutation(rng: &mut impl Rng, size: usize) -> Result<PermutationMap> {
    let mut perm: Vec<usize> = (1..=size).collect();
    perm.shuffle(rng);
    PermutationMap::new(perm)
}

/// Rejection-samples a BN whose effective output sequences separate all
/// states.
pub fn random_observable_bn(rng: &mut impl Rng, n: usize, l: usize) -> Result<Bcn> {
    loop {
        let sys = random_bcn(rng, n, 0, l)?;
        if is_observable_bn(&sys)? {
            return Ok(sys);
        }
    }
}

/// Rejection-samples a controllable network that admits a single test
/// sequence (of length at most `2^n`) distinguishing all states.
pub fn random_controllable_o3_bcn(rng: &mut impl Rng, n: usize, m: usize, l: usize) -> Result<Bcn> {
    let sc = pow2(n)?;
    loop {
        let sys = random_bcn(rng, n, m, l)?;
        if is_controllable(&sys)? && find_o3_test(&sys, sc)?.is_some() {
            return Ok(sys);
        }
    }
}

/// Rejection-samples a controllable network whose states are pairwise
/// distinguishable (so a pairwise test bank exists).
pub fn random_controllable_o1_bcn(rng: &mut impl Rng, n: usize, m: usize, l: usize) -> Result<Bcn> {
    loop {
        let sys = random_bcn(rng, n, m, l)?;
        if is_controllable(&sys)? && build_o1_test(&sys).is_ok() {
            return Ok(sys);
        }
    }
}

/// A cover walk like [`build_cover_sequence`](crate::analysis::build_cover_sequence),
/// but picking uniformly among the unused input values at each step
/// instead of the smallest; detours to the nearest unfinished state are
/// unchanged.
pub fn random_cover_sequence(sys: &Bcn, x0: usize, rng: &mut impl Rng) -> Result<CoverWalk> {
    build_cover_sequence_with(sys, x0, &mut |avail| avail[rng.gen_range(0..avail.len())])
}
