//! Identification of Boolean (control) networks from measured output
//! data, for the four experiment regimes the crate supports:
//!
//! 1. **Case 1** — an autonomous BN observed through its output matrix;
//!    trajectories long enough are cut into sliding windows of length
//!    `2^n` (the effective horizon), each distinct window becomes a state
//!    label, and transitions between consecutive windows recover `F`.
//! 2. **Case 2** — an autonomous BN whose state is observed directly;
//!    transitions are read off pairs of consecutive samples.
//! 3. **Case 3** — a control network probed by restarting one experiment
//!    subject repeatedly: a cover sequence is replayed to time `t` and a
//!    fixed test is appended, so the window measured at position `t`
//!    fingerprints the state reached there.
//! 4. **Case 4** — a population of experiment subjects with unknown
//!    initial states, each answering a bank of pairwise tests, bare and
//!    after one probing input; arrays of answers fingerprint states and
//!    the probed arrays recover transitions.
//!
//! States are labeled by **first appearance** of their fingerprint
//! (window or array). Results are [`IdentResult`]s that keep their full
//! declared dimensions and mark never-witnessed columns as unknown
//! instead of shrinking; a complete result converts to a
//! [`Bcn`](crate::dynamics::Bcn), which is correct up to a renaming of
//! states — the best any output data can determine.

use serde::{Deserialize, Serialize};

use crate::analysis::{pair_count, O1Test};
use crate::dynamics::{pow2, Bcn};
use crate::error::{Error, Result};
use crate::stp::DEFAULT_DIM_CAP;

/// Which experiment regime produced a data set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    Case1,
    Case2,
    Case3,
    Case4,
}

/// One experiment portion: the inputs applied and the outputs measured,
/// with `|outputs| = |inputs| + 1` whenever inputs are recorded (an
/// autonomous run records no inputs).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

/// All portions measured on one experiment subject (one initial state,
/// restarted for every member).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub id: String,
    pub members: Vec<Member>,
}

/// A measured data set: the experiment regime, the declared node counts,
/// and the per-subject groups in measurement order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSet {
    #[serde(rename = "case")]
    pub case_tag: CaseTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub m: usize,
    pub l: usize,
    pub groups: Vec<Group>,
}

impl SampleSet {
    pub fn new(
        case_tag: CaseTag,
        n: Option<usize>,
        m: usize,
        l: usize,
        groups: Vec<Group>,
    ) -> Result<Self> {
        let set = Self {
            case_tag,
            n,
            m,
            l,
            groups,
        };
        set.validate()?;
        Ok(set)
    }

    /// Checks group ids are unique, index ranges fit the declared node
    /// counts, and member shapes fit the regime: autonomous cases carry
    /// no inputs, controlled cases have one more output than inputs.
    pub fn validate(&self) -> Result<()> {
        let ic = pow2(self.m)?;
        let oc = pow2(self.l)?;
        if let Some(n) = self.n {
            pow2(n)?;
        }
        let mut ids: Vec<&str> = self.groups.iter().map(|g| g.id.as_str()).collect();
        ids.sort_unstable();
        for pair in ids.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateExperiment {
                    id: pair[0].to_string(),
                });
            }
        }
        for group in &self.groups {
            for member in &group.members {
                if member.outputs.is_empty() {
                    return Err(Error::EmptyData {
                        context: "member outputs".into(),
                    });
                }
                match self.case_tag {
                    CaseTag::Case1 | CaseTag::Case2 => {
                        if !member.inputs.is_empty() {
                            return Err(Error::DimensionMismatch {
                                context: "autonomous member input count",
                                expected: 0,
                                found: member.inputs.len(),
                            });
                        }
                    }
                    CaseTag::Case3 | CaseTag::Case4 => {
                        if member.outputs.len() != member.inputs.len() + 1 {
                            return Err(Error::DimensionMismatch {
                                context: "member output count",
                                expected: member.inputs.len() + 1,
                                found: member.outputs.len(),
                            });
                        }
                    }
                }
                for &u in &member.inputs {
                    if u == 0 || u > ic {
                        return Err(Error::IndexOutOfRange {
                            context: "member input value",
                            index: u,
                            bound: ic,
                        });
                    }
                }
                for &y in &member.outputs {
                    if y == 0 || y > oc {
                        return Err(Error::IndexOutOfRange {
                            context: "member output value",
                            index: y,
                            bound: oc,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// All members, in group order then member order.
    pub fn members(&self) -> impl Iterator<Item = &Member> {
        self.groups.iter().flat_map(|g| g.members.iter())
    }

    pub fn member_count(&self) -> usize {
        self.groups.iter().map(|g| g.members.len()).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("data serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let set: SampleSet = serde_json::from_str(s)?;
        set.validate()?;
        Ok(set)
    }
}

/// A state fingerprint: an output window (one sequence) or a data array
/// (one answer sequence per test slot).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Signature {
    Seq(Vec<usize>),
    Array(Vec<Vec<usize>>),
}

impl Signature {
    /// The output measured at the fingerprinted state itself (time 0).
    pub fn head(&self) -> usize {
        match self {
            Signature::Seq(seq) => seq[0],
            Signature::Array(rows) => rows[0][0],
        }
    }
}

/// First-appearance label table: label `i` names the `i`-th distinct
/// fingerprint encountered (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignatureTable {
    sigs: Vec<Signature>,
}

impl SignatureTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.sigs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigs.is_empty()
    }

    /// The fingerprint behind a 1-based label.
    pub fn get(&self, label: usize) -> Option<&Signature> {
        self.sigs.get(label.checked_sub(1)?)
    }

    /// The label of a fingerprint already in the table.
    pub fn find(&self, sig: &Signature) -> Option<usize> {
        self.sigs.iter().position(|s| s == sig).map(|p| p + 1)
    }

    /// The label of `sig`, inserting it as a fresh label if unseen.
    pub fn find_or_insert(&mut self, sig: Signature) -> usize {
        match self.find(&sig) {
            Some(label) => label,
            None => {
                self.sigs.push(sig);
                self.sigs.len()
            }
        }
    }

    pub fn push(&mut self, sig: Signature) {
        self.sigs.push(sig);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Signature> {
        self.sigs.iter()
    }
}

#[derive(Serialize, Deserialize)]
struct IdentJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    states: usize,
    m: usize,
    l: usize,
    #[serde(rename = "F")]
    f: Vec<usize>,
    #[serde(rename = "H")]
    h: Vec<usize>,
    complete: bool,
    labeling: SignatureTable,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    decoded: Option<Vec<usize>>,
}

/// The outcome of an identification pass. Dimensions are the declared
/// ones — `size` state labels, `2^m` input values — and columns never
/// witnessed by the data stay `None` rather than being dropped, so a
/// partial result still says *which* part is missing. `complete` is true
/// when every column is known; [`IdentResult::to_bcn`] then yields the
/// identified network. In serialized form unknown columns are `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentResult {
    /// Number of state labels (matrix side; `2^n` when `n` is known).
    pub size: usize,
    /// Input node count (0 for a BN).
    pub m: usize,
    /// Output node count.
    pub l: usize,
    /// Transition targets, column `(u−1)·size + (x−1)`; `2^m · size` long.
    pub f: Vec<Option<usize>>,
    /// Output indices per label; `size` long.
    pub h: Vec<Option<usize>>,
    /// The fingerprints behind the labels, in label order.
    pub table: SignatureTable,
    /// True when every `f` and `h` column is known.
    pub complete: bool,
    /// For walk-decoding passes: the state label at each walk position.
    pub decoded: Option<Vec<usize>>,
}

impl IdentResult {
    /// An all-unknown result with `size` labels, `2^m` input values.
    pub fn new(size: usize, m: usize, l: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyData {
                context: "identification state count".into(),
            });
        }
        if size > DEFAULT_DIM_CAP {
            return Err(Error::DimensionCap {
                rows: size,
                cols: size,
                cap: DEFAULT_DIM_CAP,
            });
        }
        let ic = pow2(m)?;
        pow2(l)?;
        let cols = ic.checked_mul(size).ok_or(Error::Overflow)?;
        Ok(Self {
            size,
            m,
            l,
            f: vec![None; cols],
            h: vec![None; size],
            table: SignatureTable::new(),
            complete: false,
            decoded: None,
        })
    }

    pub fn input_count(&self) -> usize {
        self.f.len() / self.size
    }

    fn check_label(&self, x: usize, context: &'static str) -> Result<()> {
        if x == 0 || x > self.size {
            return Err(Error::IndexOutOfRange {
                context,
                index: x,
                bound: self.size,
            });
        }
        Ok(())
    }

    /// Transition target for input value `u` at label `x`, if known.
    pub fn f_col(&self, u: usize, x: usize) -> Option<usize> {
        self.f[(u - 1) * self.size + (x - 1)]
    }

    pub fn h_col(&self, x: usize) -> Option<usize> {
        self.h[x - 1]
    }

    /// Records a witnessed transition; a second witness must agree.
    pub fn set_f(&mut self, u: usize, x: usize, target: usize) -> Result<()> {
        self.check_label(x, "transition source label")?;
        self.check_label(target, "transition target label")?;
        if u == 0 || u > self.input_count() {
            return Err(Error::IndexOutOfRange {
                context: "transition input value",
                index: u,
                bound: self.input_count(),
            });
        }
        let slot = &mut self.f[(u - 1) * self.size + (x - 1)];
        match *slot {
            None => {
                *slot = Some(target);
                Ok(())
            }
            Some(prev) if prev == target => Ok(()),
            Some(prev) => Err(Error::DataInconsistency {
                context: format!(
                    "transition under input {u} at label {x} witnessed as both {prev} and {target}"
                ),
            }),
        }
    }

    /// Records a witnessed output; a second witness must agree.
    pub fn set_h(&mut self, x: usize, y: usize) -> Result<()> {
        self.check_label(x, "output source label")?;
        let oc = pow2(self.l)?;
        if y == 0 || y > oc {
            return Err(Error::IndexOutOfRange {
                context: "output value",
                index: y,
                bound: oc,
            });
        }
        let slot = &mut self.h[x - 1];
        match *slot {
            None => {
                *slot = Some(y);
                Ok(())
            }
            Some(prev) if prev == y => Ok(()),
            Some(prev) => Err(Error::DataInconsistency {
                context: format!("output at label {x} witnessed as both {prev} and {y}"),
            }),
        }
    }

    /// Recomputes the `complete` flag from the column fill.
    pub fn refresh_complete(&mut self) {
        self.complete =
            self.f.iter().all(Option::is_some) && self.h.iter().all(Option::is_some);
    }

    /// Known transitions as `(input value, source, target)` triples — the
    /// low-dimension reading that drops unknown columns.
    pub fn known_transitions(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for u in 1..=self.input_count() {
            for x in 1..=self.size {
                if let Some(t) = self.f_col(u, x) {
                    out.push((u, x, t));
                }
            }
        }
        out
    }

    /// Known outputs as `(label, output)` pairs.
    pub fn known_outputs(&self) -> Vec<(usize, usize)> {
        (1..=self.size)
            .filter_map(|x| self.h_col(x).map(|y| (x, y)))
            .collect()
    }

    /// Columns of `f` still unknown, as `(input value, label)` pairs.
    pub fn unknown_f_columns(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 1..=self.input_count() {
            for x in 1..=self.size {
                if self.f_col(u, x).is_none() {
                    out.push((u, x));
                }
            }
        }
        out
    }

    /// Converts a complete result into a network; requires the label
    /// count to be a power of two so node counts exist.
    pub fn to_bcn(&self) -> Result<Bcn> {
        if !self.complete {
            return Err(Error::Incomplete {
                unknown_f: self.f.iter().filter(|c| c.is_none()).count(),
                unknown_h: self.h.iter().filter(|c| c.is_none()).count(),
            });
        }
        if !self.size.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { size: self.size });
        }
        let n = self.size.trailing_zeros() as usize;
        let f = self.f.iter().map(|c| c.expect("complete")).collect();
        let h = self.h.iter().map(|c| c.expect("complete")).collect();
        Bcn::new(n, self.m, self.l, f, h)
    }

    /// Compact JSON with unknown columns as `0`; `n` is included only
    /// when the label count is a power of two.
    pub fn to_json(&self) -> String {
        let to_raw = |v: &[Option<usize>]| v.iter().map(|c| c.unwrap_or(0)).collect();
        let json = IdentJson {
            n: self
                .size
                .is_power_of_two()
                .then(|| self.size.trailing_zeros() as usize),
            states: self.size,
            m: self.m,
            l: self.l,
            f: to_raw(&self.f),
            h: to_raw(&self.h),
            complete: self.complete,
            labeling: self.table.clone(),
            decoded: self.decoded.clone(),
        };
        serde_json::to_string(&json).expect("result serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: IdentJson = serde_json::from_str(s)?;
        let mut res = IdentResult::new(raw.states, raw.m, raw.l)?;
        if raw.f.len() != res.f.len() || raw.h.len() != res.h.len() {
            return Err(Error::DimensionMismatch {
                context: "serialized result column count",
                expected: res.f.len(),
                found: raw.f.len(),
            });
        }
        let from_raw = |v: Vec<usize>| v.into_iter().map(|c| (c != 0).then_some(c)).collect();
        res.f = from_raw(raw.f);
        res.h = from_raw(raw.h);
        res.table = raw.labeling;
        res.decoded = raw.decoded;
        res.refresh_complete();
        if res.complete != raw.complete {
            return Err(Error::DataInconsistency {
                context: "serialized completeness flag disagrees with the columns".into(),
            });
        }
        Ok(res)
    }
}

/// First pass for Case 1: slides a length-`window` window over every
/// member's output sequence (groups in order, time in order) and labels
/// each distinct window by first appearance.
pub fn retrieve_effective_sequences(data: &SampleSet, window: usize) -> Result<SignatureTable> {
    if window == 0 {
        return Err(Error::BadWindow { window, len: 0 });
    }
    let mut table = SignatureTable::new();
    let mut saw_member = false;
    for member in data.members() {
        saw_member = true;
        if member.outputs.len() < window {
            return Err(Error::BadWindow {
                window,
                len: member.outputs.len(),
            });
        }
        for pos in 0..=member.outputs.len() - window {
            table.find_or_insert(Signature::Seq(member.outputs[pos..pos + window].to_vec()));
        }
    }
    if !saw_member {
        return Err(Error::EmptyData {
            context: "effective sequence retrieval".into(),
        });
    }
    Ok(table)
}

/// Case 1 identification: windows of length `window` are state labels,
/// consecutive windows witness transitions, and window heads give the
/// output matrix. The declared state count is `window` itself; when
/// exactly `window − 1` distinct windows appear, the one unseen state is
/// reconstructed by duplicating label 1's fingerprint and columns (the
/// run that entered the attractor one step before its window shows).
pub fn identify_bn(data: &SampleSet, window: usize) -> Result<IdentResult> {
    let mut table = retrieve_effective_sequences(data, window)?;
    if table.len() > window {
        return Err(Error::DataInconsistency {
            context: format!(
                "found {} distinct windows but only {window} states were declared",
                table.len()
            ),
        });
    }
    let mut res = IdentResult::new(window, 0, data.l)?;
    for member in data.members() {
        let labels: Vec<usize> = (0..=member.outputs.len() - window)
            .map(|pos| {
                table
                    .find(&Signature::Seq(member.outputs[pos..pos + window].to_vec()))
                    .expect("window labeled during retrieval")
            })
            .collect();
        for pair in labels.windows(2) {
            res.set_f(1, pair[0], pair[1])?;
        }
    }
    for label in 1..=table.len() {
        let head = table.get(label).expect("labeled").head();
        res.set_h(label, head)?;
    }
    if table.len() + 1 == window {
        let dup = table.get(1).expect("at least one window").clone();
        table.push(dup);
        res.f[window - 1] = res.f[0];
        res.h[window - 1] = res.h[0];
    }
    res.table = table;
    res.refresh_complete();
    Ok(res)
}

/// Case 2 identification: outputs are the states themselves, so
/// consecutive samples witness transitions directly and the output
/// matrix is the identity. The state count is `2^n` when the data
/// declares `n`, else the largest state observed.
pub fn identify_bn_state_observed(data: &SampleSet) -> Result<IdentResult> {
    let size = match data.n {
        Some(n) => pow2(n)?,
        None => data
            .members()
            .flat_map(|m| m.outputs.iter().copied())
            .max()
            .ok_or(Error::EmptyData {
                context: "state-observed identification".into(),
            })?,
    };
    let mut res = IdentResult::new(size, 0, data.l)?;
    for member in data.members() {
        for pair in member.outputs.windows(2) {
            res.set_f(1, pair[0], pair[1])?;
        }
        for &x in &member.outputs {
            res.check_label(x, "observed state")?;
        }
    }
    for x in 1..=size {
        res.set_h(x, x)?;
        res.table.push(Signature::Seq(vec![x]));
    }
    res.refresh_complete();
    Ok(res)
}

/// Case 1 identification from a full label table alone: with one
/// length-`w` window per state, label `i`'s successor is the unique
/// label whose window starts with the last `w − 1` outputs of window
/// `i`. Fails when a successor is missing or ambiguous.
pub fn identify_bn_overlap(table: &SignatureTable) -> Result<IdentResult> {
    let size = table.len();
    if size == 0 {
        return Err(Error::EmptyData {
            context: "overlap identification".into(),
        });
    }
    let seqs: Vec<&[usize]> = table
        .iter()
        .map(|sig| match sig {
            Signature::Seq(seq) => Ok(seq.as_slice()),
            Signature::Array(_) => Err(Error::TestMismatch {
                context: "overlap identification needs window fingerprints, not arrays".into(),
            }),
        })
        .collect::<Result<_>>()?;
    let w = seqs[0].len();
    if w < 2 {
        return Err(Error::BadWindow { window: w, len: w });
    }
    if seqs.iter().any(|s| s.len() != w) {
        return Err(Error::TestMismatch {
            context: "overlap identification needs windows of one common length".into(),
        });
    }
    let max_y = seqs.iter().flat_map(|s| s.iter()).max().expect("nonempty");
    let l = (0..).find(|&k| (1usize << k) >= *max_y).expect("small");
    let mut res = IdentResult::new(size, 0, l)?;
    for (i, seq) in seqs.iter().enumerate() {
        let tail = &seq[1..];
        let mut matches = seqs
            .iter()
            .enumerate()
            .filter(|(_, other)| &other[..w - 1] == tail)
            .map(|(j, _)| j + 1);
        let target = matches.next().ok_or_else(|| Error::DataInconsistency {
            context: format!("no label overlaps the tail of label {}", i + 1),
        })?;
        if let Some(second) = matches.next() {
            return Err(Error::DataInconsistency {
                context: format!(
                    "labels {target} and {second} both overlap the tail of label {}",
                    i + 1
                ),
            });
        }
        res.set_f(1, i + 1, target)?;
        res.set_h(i + 1, seq[0])?;
    }
    res.table = table.clone();
    res.refresh_complete();
    Ok(res)
}

/// First pass for Case 3 with a single test sequence: member `j` (flat,
/// 0-based, groups in order) contributes the window
/// `outputs[j .. j + test_len + 1]` — the response of the state reached
/// at walk position `j` to the test — labeled by first appearance.
pub fn retrieve_o3_signatures(data: &SampleSet, test_len: usize) -> Result<SignatureTable> {
    if test_len == 0 {
        return Err(Error::BadWindow {
            window: 0,
            len: test_len,
        });
    }
    let mut table = SignatureTable::new();
    let mut any = false;
    for (j, member) in data.members().enumerate() {
        any = true;
        let need = j + test_len + 1;
        if member.outputs.len() < need {
            return Err(Error::DimensionMismatch {
                context: "member output length",
                expected: need,
                found: member.outputs.len(),
            });
        }
        table.find_or_insert(Signature::Seq(member.outputs[j..need].to_vec()));
    }
    if !any {
        return Err(Error::EmptyData {
            context: "single-test signature retrieval".into(),
        });
    }
    Ok(table)
}

/// Case 3 identification with a single test sequence: member `j` replays
/// the cover walk to position `j` and appends the test, so its window at
/// position `j` fingerprints the walk state `x(j)`; cover inputs then
/// witness the transition `x(j) → x(j+1)`.
pub fn identify_bcn_o3(
    data: &SampleSet,
    cover_inputs: &[usize],
    test_len: usize,
) -> Result<IdentResult> {
    let table = retrieve_o3_signatures(data, test_len)?;
    let members: Vec<&Member> = data.members().collect();
    if members.len() != cover_inputs.len() + 1 {
        return Err(Error::DimensionMismatch {
            context: "member count for the cover walk",
            expected: cover_inputs.len() + 1,
            found: members.len(),
        });
    }
    let test = members[0].inputs.clone();
    if test.len() != test_len {
        return Err(Error::TestMismatch {
            context: format!(
                "first member applies {} inputs but the test length is {test_len}",
                test.len()
            ),
        });
    }
    for (j, member) in members.iter().enumerate() {
        let want: Vec<usize> = cover_inputs[..j].iter().chain(&test).copied().collect();
        if member.inputs != want {
            return Err(Error::TestMismatch {
                context: format!(
                    "member {j} does not replay the cover walk to position {j} plus the test"
                ),
            });
        }
    }
    let size = match data.n {
        Some(n) => pow2(n)?,
        None => table.len(),
    };
    if table.len() > size {
        return Err(Error::DataInconsistency {
            context: format!(
                "found {} distinct windows but only {size} states are possible",
                table.len()
            ),
        });
    }
    let mut res = IdentResult::new(size, data.m, data.l)?;
    let labels: Vec<usize> = members
        .iter()
        .enumerate()
        .map(|(j, member)| {
            table
                .find(&Signature::Seq(
                    member.outputs[j..j + test_len + 1].to_vec(),
                ))
                .expect("window labeled during retrieval")
        })
        .collect();
    for (t, &u) in cover_inputs.iter().enumerate() {
        res.set_f(u, labels[t], labels[t + 1])?;
    }
    for label in 1..=table.len() {
        let head = table.get(label).expect("labeled").head();
        res.set_h(label, head)?;
    }
    res.table = table;
    res.decoded = Some(labels);
    res.refresh_complete();
    Ok(res)
}

/// First pass for Case 3 with a pairwise test bank: members form a
/// `(T+2) × N` grid, member `(j, s)` at flat index `j·N + (s−1)` replays
/// the cover walk to position `j` and appends the slot-`s` sequence. The
/// array of windows at position `j` across all slots fingerprints the
/// state `x(j)`; arrays are labeled by first appearance in `j` order.
pub fn retrieve_o1_arrays(data: &SampleSet, test: &O1Test) -> Result<SignatureTable> {
    let sc = pow2(test.n)?;
    let slots = pair_count(sc);
    let members: Vec<&Member> = data.members().collect();
    if members.is_empty() || members.len() % slots != 0 {
        return Err(Error::TestMismatch {
            context: format!(
                "member count {} is not a positive multiple of the {slots} test slots",
                members.len()
            ),
        });
    }
    let rows = members.len() / slots;
    let mut table = SignatureTable::new();
    for j in 0..rows {
        let mut windows = Vec::with_capacity(slots);
        for s in 0..slots {
            let member = members[j * slots + s];
            let need = j + test.p + 2;
            if member.outputs.len() < need {
                return Err(Error::DimensionMismatch {
                    context: "member output length",
                    expected: need,
                    found: member.outputs.len(),
                });
            }
            if member.inputs.len() != j + test.p + 1 || member.inputs[j..] != test.tests[s] {
                return Err(Error::TestMismatch {
                    context: format!(
                        "member ({j}, {}) does not end with the slot-{} test sequence",
                        s + 1,
                        s + 1
                    ),
                });
            }
            windows.push(member.outputs[j..need].to_vec());
        }
        table.find_or_insert(Signature::Array(windows));
    }
    Ok(table)
}

/// Case 3 identification with a pairwise test bank: the array measured
/// at walk position `j` fingerprints `x(j)`, cover inputs witness
/// transitions, and the one full-walk member (row `T+1`, slot 1) reads
/// the output matrix off its own trajectory.
pub fn identify_bcn_o1_single(
    data: &SampleSet,
    cover_inputs: &[usize],
    test: &O1Test,
) -> Result<IdentResult> {
    check_test_shape(data, test)?;
    let table = retrieve_o1_arrays(data, test)?;
    let sc = pow2(test.n)?;
    let slots = pair_count(sc);
    let members: Vec<&Member> = data.members().collect();
    let rows = members.len() / slots;
    if rows != cover_inputs.len() + 1 {
        return Err(Error::DimensionMismatch {
            context: "array rows for the cover walk",
            expected: cover_inputs.len() + 1,
            found: rows,
        });
    }
    if table.len() > sc {
        return Err(Error::DataInconsistency {
            context: format!(
                "found {} distinct arrays but only {sc} states are possible",
                table.len()
            ),
        });
    }
    let mut res = IdentResult::new(sc, data.m, data.l)?;
    let labels: Vec<usize> = (0..rows)
        .map(|j| {
            let windows = (0..slots)
                .map(|s| members[j * slots + s].outputs[j..j + test.p + 2].to_vec())
                .collect();
            table
                .find(&Signature::Array(windows))
                .expect("array labeled during retrieval")
        })
        .collect();
    for (t, &u) in cover_inputs.iter().enumerate() {
        res.set_f(u, labels[t], labels[t + 1])?;
    }
    // The longest member walks the whole cover; its outputs read H along
    // the walk states.
    let long = members[(rows - 1) * slots];
    for (t, &label) in labels.iter().enumerate() {
        res.set_h(label, long.outputs[t])?;
    }
    res.table = table;
    res.decoded = Some(labels);
    res.refresh_complete();
    Ok(res)
}

fn check_test_shape(data: &SampleSet, test: &O1Test) -> Result<()> {
    if data.m != test.m {
        return Err(Error::TestMismatch {
            context: format!(
                "data declares m = {} but the test was built for m = {}",
                data.m, test.m
            ),
        });
    }
    if let Some(n) = data.n {
        if n != test.n {
            return Err(Error::TestMismatch {
                context: format!(
                    "data declares n = {n} but the test was built for n = {}",
                    test.n
                ),
            });
        }
    }
    Ok(())
}

/// Per-group array retrieval for Case 4. Each group holds `N` bare
/// members (prefix ++ slot sequence) and `2^m · N` probed members
/// (prefix ++ [j] ++ slot sequence); the shared prefix length is read
/// off the first member. Returns the group's prefix length, bare array,
/// and probed arrays by input value.
fn group_arrays(
    group: &Group,
    test: &O1Test,
) -> Result<(usize, Signature, Vec<Signature>)> {
    let sc = pow2(test.n)?;
    let slots = pair_count(sc);
    let ic = pow2(test.m)?;
    let expected = slots * (ic + 1);
    if group.members.len() != expected {
        return Err(Error::DimensionMismatch {
            context: "group member count",
            expected,
            found: group.members.len(),
        });
    }
    let prefix_len = group.members[0]
        .inputs
        .len()
        .checked_sub(test.p + 1)
        .ok_or_else(|| Error::TestMismatch {
            context: format!(
                "group '{}' members apply fewer inputs than one test sequence",
                group.id
            ),
        })?;
    let prefix = group.members[0].inputs[..prefix_len].to_vec();
    let window = |member: &Member, at: usize| member.outputs[at..].to_vec();
    let mut bare = Vec::with_capacity(slots);
    for s in 0..slots {
        let member = &group.members[s];
        let want: Vec<usize> = prefix.iter().chain(&test.tests[s]).copied().collect();
        if member.inputs != want {
            return Err(Error::TestMismatch {
                context: format!(
                    "group '{}' bare member at slot {} does not apply its test sequence",
                    group.id,
                    s + 1
                ),
            });
        }
        bare.push(window(member, prefix_len));
    }
    let mut probed = Vec::with_capacity(ic);
    for j in 1..=ic {
        let mut windows = Vec::with_capacity(slots);
        for s in 0..slots {
            let member = &group.members[j * slots + s];
            let want: Vec<usize> = prefix
                .iter()
                .chain(std::iter::once(&j))
                .chain(&test.tests[s])
                .copied()
                .collect();
            if member.inputs != want {
                return Err(Error::TestMismatch {
                    context: format!(
                        "group '{}' probed member (input {j}, slot {}) does not apply \
                         prefix, probe, test",
                        group.id,
                        s + 1
                    ),
                });
            }
            windows.push(window(member, prefix_len + 1));
        }
        probed.push(Signature::Array(windows));
    }
    Ok((prefix_len, Signature::Array(bare), probed))
}

fn identify_o1_groups(data: &SampleSet, test: &O1Test, groups: &[&Group]) -> Result<IdentResult> {
    check_test_shape(data, test)?;
    data.validate()?;
    let sc = pow2(test.n)?;
    let mut res = IdentResult::new(sc, test.m, data.l)?;
    let mut table = SignatureTable::new();
    for group in groups {
        let (_, bare, probed) = group_arrays(group, test)?;
        let bare_label = table.find_or_insert(bare);
        for (j, arr) in probed.into_iter().enumerate() {
            let target = table.find_or_insert(arr);
            res.set_f(j + 1, bare_label, target)?;
        }
    }
    if table.len() > sc {
        return Err(Error::DataInconsistency {
            context: format!(
                "found {} distinct arrays but only {sc} states are possible",
                table.len()
            ),
        });
    }
    for label in 1..=table.len() {
        let head = table.get(label).expect("labeled").head();
        res.set_h(label, head)?;
    }
    res.table = table;
    res.refresh_complete();
    Ok(res)
}

/// Case 4 identification: every group (experiment subject) answers the
/// full bank bare and after each probing input. Bare arrays fingerprint
/// the subjects' unknown initial states, probed arrays fingerprint their
/// one-step successors, and matching arrays across groups stitches the
/// transition matrix together. Transition columns are known exactly for
/// the labels some group started at; everything else stays unknown.
pub fn identify_bcn_o1_multi(data: &SampleSet, test: &O1Test) -> Result<IdentResult> {
    let groups: Vec<&Group> = data.groups.iter().collect();
    if groups.is_empty() {
        return Err(Error::EmptyData {
            context: "multi-subject identification".into(),
        });
    }
    identify_o1_groups(data, test, &groups)
}

/// Case 4 identification restricted to chosen subjects: groups are
/// driven along walks from a known start set before testing (their
/// members carry the walk as an input prefix), so only states reachable
/// from that set are ever fingerprinted. `p0_groups` selects the group
/// ids to use; empty means all. The result is complete exactly when the
/// walks witnessed every (input, state) pair.
pub fn identify_from_p0(
    data: &SampleSet,
    test: &O1Test,
    p0_groups: &[String],
) -> Result<IdentResult> {
    if p0_groups.is_empty() {
        return identify_bcn_o1_multi(data, test);
    }
    let mut groups = Vec::with_capacity(p0_groups.len());
    for id in p0_groups {
        let group = data
            .groups
            .iter()
            .find(|g| &g.id == id)
            .ok_or_else(|| Error::UnknownExperiment { id: id.clone() })?;
        groups.push(group);
    }
    identify_o1_groups(data, test, &groups)
}
