//! Observability and controllability analysis, and the design of the
//! input experiments that make identification from data possible.
//!
//! Two kinds of test are built here, named after the observability notions
//! they certify:
//!
//! * an **O3 test** is a single input sequence that, applied to every
//!   initial state, produces pairwise-distinct output sequences — one
//!   experiment re-used for all states;
//! * an **O1 test** is a bank of `C(2^n, 2)` input sequences, one per
//!   unordered state pair, where the sequence at a pair's slot
//!   distinguishes that pair.
//!
//! Pair slots are ordered `(1,2), (1,3), …, (1,2^n), (2,3), …` and
//! addressed by [`pair_index`]. A cover sequence ([`build_cover_sequence`])
//! drives a single trajectory through every (input value, state) pair so
//! that one long experiment witnesses every transition.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::dynamics::Bcn;
use crate::error::{Error, Result};

/// Number of unordered pairs over `size` elements: `size·(size−1)/2`.
pub fn pair_count(size: usize) -> usize {
    size * (size - 1) / 2
}

/// 1-based slot of the unordered pair `(i, i2)`, `i < i2`, in the ordering
/// `(1,2), (1,3), …, (1,size), (2,3), …, (size−1, size)`.
pub fn pair_index(i: usize, i2: usize, size: usize) -> Result<usize> {
    if i == 0 || i >= i2 || i2 > size {
        return Err(Error::InvalidPair { i, i2, size });
    }
    Ok((i - 1) * size - i * (i - 1) / 2 + (i2 - i))
}

fn require_bn(sys: &Bcn) -> Result<()> {
    if !sys.is_bn() {
        return Err(Error::DimensionMismatch {
            context: "autonomous analysis input count",
            expected: 1,
            found: sys.input_count(),
        });
    }
    Ok(())
}

/// Observability matrix of a BN: row `t` (from 0), column `i` holds the
/// output index of state `i` after `t` autonomous steps. Accepted window
/// heights are `2^n` (the full effective horizon) and `2^n − 1` (the
/// shortest height that already decides observability).
pub fn observability_matrix_bn(sys: &Bcn, window: usize) -> Result<Vec<Vec<usize>>> {
    require_bn(sys)?;
    let sc = sys.state_count();
    if window != sc && window != sc - 1 {
        return Err(Error::BadWindow { window, len: sc });
    }
    let mut cur: Vec<usize> = (1..=sc).collect();
    let mut rows = Vec::with_capacity(window);
    for _ in 0..window {
        rows.push(cur.iter().map(|&x| sys.h_at(x)).collect());
        for x in cur.iter_mut() {
            *x = sys.f_at(1, *x);
        }
    }
    Ok(rows)
}

/// The first `2^n` outputs of the autonomous run from state `i`; two
/// states of a BN produce equal output sequences forever iff their
/// sequences agree this far.
pub fn effective_output_sequence(sys: &Bcn, i: usize) -> Result<Vec<usize>> {
    require_bn(sys)?;
    let (_, outputs) = sys.simulate_idx(i, &vec![1; sys.state_count() - 1])?;
    Ok(outputs)
}

/// Whether every pair of states of a BN is distinguished by output
/// sequences of length `2^n − 1`.
pub fn is_observable_bn(sys: &Bcn) -> Result<bool> {
    let rows = observability_matrix_bn(sys, sys.state_count() - 1)?;
    let sc = sys.state_count();
    let mut cols: Vec<Vec<usize>> = (0..sc).map(|c| rows.iter().map(|r| r[c]).collect()).collect();
    cols.sort();
    cols.dedup();
    Ok(cols.len() == sc)
}

/// Whether the state transition graph (edges `x → F(u, x)` over all input
/// values) is strongly connected, i.e. any state can be driven to any
/// other.
pub fn is_controllable(sys: &Bcn) -> Result<bool> {
    let sc = sys.state_count();
    let ic = sys.input_count();
    let mut fwd = vec![Vec::new(); sc];
    let mut bwd = vec![Vec::new(); sc];
    for x in 1..=sc {
        for u in 1..=ic {
            let y = sys.f_at(u, x);
            fwd[x - 1].push(y);
            bwd[y - 1].push(x);
        }
    }
    let full = |adj: &[Vec<usize>]| {
        let mut seen = vec![false; sc];
        let mut stack = vec![1usize];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x - 1] {
                if !seen[y - 1] {
                    seen[y - 1] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter().all(|&s| s)
    };
    Ok(full(&fwd) && full(&bwd))
}

/// All states reachable from the set `p0` — the states of `p0` themselves
/// plus everything reachable in one or more transitions under some input —
/// in ascending order.
pub fn reachable_set(sys: &Bcn, p0: &[usize]) -> Result<Vec<usize>> {
    if p0.is_empty() {
        return Err(Error::EmptyData {
            context: "reachable_set".into(),
        });
    }
    let sc = sys.state_count();
    let mut seen = vec![false; sc];
    let mut stack = Vec::new();
    for &x in p0 {
        if x == 0 || x > sc {
            return Err(Error::IndexOutOfRange {
                context: "initial state",
                index: x,
                bound: sc,
            });
        }
        if !seen[x - 1] {
            seen[x - 1] = true;
            stack.push(x);
        }
    }
    while let Some(x) = stack.pop() {
        for u in 1..=sys.input_count() {
            let y = sys.f_at(u, x);
            if !seen[y - 1] {
                seen[y - 1] = true;
                stack.push(y);
            }
        }
    }
    Ok((1..=sc).filter(|&x| seen[x - 1]).collect())
}

/// Shortest input sequence whose application makes the output runs of
/// states `i` and `i2` differ somewhere (the empty sequence when their
/// instantaneous outputs already differ), or `None` when no sequence of
/// length at most `max_len` works. Breadth-first over unordered state
/// pairs, trying input values in ascending order, so the result is also
/// lexicographically least among the shortest.
pub fn distinguishing_sequence(
    sys: &Bcn,
    i: usize,
    i2: usize,
    max_len: usize,
) -> Result<Option<Vec<usize>>> {
    let sc = sys.state_count();
    if i == 0 || i2 == 0 || i == i2 || i > sc || i2 > sc {
        return Err(Error::InvalidPair { i, i2, size: sc });
    }
    if sys.h_at(i) != sys.h_at(i2) {
        return Ok(Some(Vec::new()));
    }
    let key = |a: usize, b: usize| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        (a - 1) * sc + (b - 1)
    };
    let mut seen = vec![false; sc * sc];
    seen[key(i, i2)] = true;
    let mut queue = VecDeque::new();
    queue.push_back((i, i2, Vec::new()));
    while let Some((a, b, path)) = queue.pop_front() {
        if path.len() >= max_len {
            continue;
        }
        for u in 1..=sys.input_count() {
            let (na, nb) = (sys.f_at(u, a), sys.f_at(u, b));
            if na == nb {
                // Merged trajectories can never be told apart later.
                continue;
            }
            let mut next = path.clone();
            next.push(u);
            if sys.h_at(na) != sys.h_at(nb) {
                return Ok(Some(next));
            }
            if !seen[key(na, nb)] {
                seen[key(na, nb)] = true;
                queue.push_back((na, nb, next));
            }
        }
    }
    Ok(None)
}

/// A pairwise test bank: one input sequence per unordered state pair, all
/// of the common length `p + 1`, slot-ordered by [`pair_index`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct O1Test {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub tests: Vec<Vec<usize>>,
}

impl O1Test {
    /// Validates slot count `C(2^n, 2)`, a uniform sequence length of at
    /// least one, and input values within `1..=2^m`.
    pub fn new(n: usize, m: usize, tests: Vec<Vec<usize>>) -> Result<Self> {
        let sc = crate::dynamics::pow2(n)?;
        let ic = crate::dynamics::pow2(m)?;
        if tests.len() != pair_count(sc) {
            return Err(Error::DimensionMismatch {
                context: "pairwise test slot count",
                expected: pair_count(sc),
                found: tests.len(),
            });
        }
        let len = tests.first().map(|t| t.len()).unwrap_or(1);
        if len == 0 {
            return Err(Error::TestMismatch {
                context: "test sequences must have length at least 1".into(),
            });
        }
        for (s, t) in tests.iter().enumerate() {
            if t.len() != len {
                return Err(Error::TestMismatch {
                    context: format!(
                        "test sequence at slot {} has length {}, expected {len}",
                        s + 1,
                        t.len()
                    ),
                });
            }
            for &u in t {
                if u == 0 || u > ic {
                    return Err(Error::IndexOutOfRange {
                        context: "test input value",
                        index: u,
                        bound: ic,
                    });
                }
            }
        }
        Ok(Self {
            n,
            m,
            p: len - 1,
            tests,
        })
    }

    /// Checks the test addresses networks of exactly this shape.
    pub fn matches(&self, sys: &Bcn) -> Result<()> {
        if self.n != sys.n() || self.m != sys.m() {
            return Err(Error::TestMismatch {
                context: format!(
                    "test built for n = {}, m = {} but the network has n = {}, m = {}",
                    self.n,
                    self.m,
                    sys.n(),
                    sys.m()
                ),
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("test serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: O1Test = serde_json::from_str(s)?;
        O1Test::new(raw.n, raw.m, raw.tests)
    }
}

/// Builds a pairwise test bank for `sys`: each slot gets the shortest
/// (then lexicographically least) sequence distinguishing its pair, and
/// all slots are right-padded with input value 1 to the common length
/// (at least 1). Fails with the offending pair when some pair cannot be
/// distinguished at all.
pub fn build_o1_test(sys: &Bcn) -> Result<O1Test> {
    let sc = sys.state_count();
    let bound = pair_count(sc);
    let mut tests = Vec::with_capacity(bound);
    for i in 1..sc {
        for i2 in (i + 1)..=sc {
            match distinguishing_sequence(sys, i, i2, bound)? {
                Some(seq) => tests.push(seq),
                None => {
                    return Err(Error::NotDistinguishable {
                        i,
                        i2,
                        max_len: bound,
                    })
                }
            }
        }
    }
    let len = tests.iter().map(|t| t.len()).max().unwrap_or(0).max(1);
    for t in tests.iter_mut() {
        t.resize(len, 1);
    }
    O1Test::new(sys.n(), sys.m(), tests)
}

/// The data array of every state under a pairwise test: entry `[i−1][s−1]`
/// is the output-index sequence (length `p + 2`) of state `i` driven by
/// the slot-`s` sequence.
pub fn data_arrays(sys: &Bcn, test: &O1Test) -> Result<Vec<Vec<Vec<usize>>>> {
    test.matches(sys)?;
    let sc = sys.state_count();
    let mut arrays = Vec::with_capacity(sc);
    for i in 1..=sc {
        let mut row = Vec::with_capacity(test.tests.len());
        for seq in &test.tests {
            let (_, outputs) = sys.simulate_idx(i, seq)?;
            row.push(outputs);
        }
        arrays.push(row);
    }
    Ok(arrays)
}

/// Whether the pairwise test yields pairwise-distinct data arrays on
/// `sys` — the property that lets the identification pipeline recognize a
/// state from its array alone.
pub fn validate_o1_test(sys: &Bcn, test: &O1Test) -> Result<bool> {
    let mut arrays = data_arrays(sys, test)?;
    let sc = arrays.len();
    arrays.sort();
    arrays.dedup();
    Ok(arrays.len() == sc)
}

/// Canonical block labels (first occurrence ⇒ smallest label) for a row of
/// hashable values.
fn canonical_labels<T: Eq + std::hash::Hash>(vals: &[T]) -> Vec<usize> {
    let mut ids = HashMap::new();
    vals.iter()
        .map(|v| {
            let next = ids.len();
            *ids.entry(v).or_insert(next)
        })
        .collect()
}

/// Searches for a single input sequence of length `1..=max_len` under
/// which all `2^n` initial states produce pairwise-distinct output
/// sequences; returns the first such sequence in length-then-lexicographic
/// order, or `None`. Breadth-first over (state tuple, output-history
/// partition) pairs, so repeated partition situations are explored once.
pub fn find_o3_test(sys: &Bcn, max_len: usize) -> Result<Option<Vec<usize>>> {
    let sc = sys.state_count();
    let ic = sys.input_count();
    let root_states: Vec<usize> = (1..=sc).collect();
    let h_row: Vec<usize> = root_states.iter().map(|&x| sys.h_at(x)).collect();
    let root_part = canonical_labels(&h_row);
    let mut seen = std::collections::HashSet::new();
    seen.insert((root_states.clone(), root_part.clone()));
    let mut queue = VecDeque::new();
    queue.push_back((root_states, root_part, Vec::new()));
    while let Some((states, part, path)) = queue.pop_front() {
        if path.len() >= max_len {
            continue;
        }
        for u in 1..=ic {
            let next_states: Vec<usize> = states.iter().map(|&x| sys.f_at(u, x)).collect();
            let pairs: Vec<(usize, usize)> = next_states
                .iter()
                .zip(&part)
                .map(|(&x, &b)| (b, sys.h_at(x)))
                .collect();
            let next_part = canonical_labels(&pairs);
            let mut seq = path.clone();
            seq.push(u);
            if next_part.iter().max() == Some(&(sc - 1)) {
                return Ok(Some(seq));
            }
            if seq.len() < max_len && seen.insert((next_states.clone(), next_part.clone())) {
                queue.push_back((next_states, next_part, seq));
            }
        }
    }
    Ok(None)
}

/// Observability matrix of a control network under one input sequence:
/// row `t`, column `i` holds the output index of state `i` at time `t`
/// when the sequence drives the network; `|test| + 1` rows.
pub fn observability_matrix_bcn(sys: &Bcn, test: &[usize]) -> Result<Vec<Vec<usize>>> {
    let sc = sys.state_count();
    let mut rows = vec![Vec::with_capacity(sc); test.len() + 1];
    for i in 1..=sc {
        let (_, outputs) = sys.simulate_idx(i, test)?;
        for (t, &y) in outputs.iter().enumerate() {
            rows[t].push(y);
        }
    }
    Ok(rows)
}

/// A single trajectory that witnesses transitions: `states[t]` is visited
/// at time `t` and `inputs[t]` is applied there, so the pair
/// `(inputs[t], states[t])` is covered; `|states| = |inputs| + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverWalk {
    pub inputs: Vec<usize>,
    pub states: Vec<usize>,
}

impl CoverWalk {
    /// The (input value, state) pairs this walk covers, in visit order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.inputs
            .iter()
            .zip(&self.states)
            .map(|(&u, &x)| (u, x))
            .collect()
    }
}

/// Greedy cover construction from `x0`: apply the smallest input value not
/// yet used at the current state; when none is left, walk (breadth-first,
/// smallest input first) to the nearest state that still has an unused
/// input value. Fails — reporting the walk built so far and the
/// unreachable (input, state) pairs — when the remainder cannot be
/// reached from the current state.
pub fn build_cover_sequence(sys: &Bcn, x0: usize) -> Result<CoverWalk> {
    build_cover_sequence_with(sys, x0, &mut |avail| avail[0])
}

/// Cover construction with a pluggable choice of which unused input value
/// to apply next; `choose` receives the unused values at the current
/// state in ascending order and returns one of them.
pub(crate) fn build_cover_sequence_with(
    sys: &Bcn,
    x0: usize,
    choose: &mut dyn FnMut(&[usize]) -> usize,
) -> Result<CoverWalk> {
    let sc = sys.state_count();
    let ic = sys.input_count();
    if x0 == 0 || x0 > sc {
        return Err(Error::IndexOutOfRange {
            context: "initial state",
            index: x0,
            bound: sc,
        });
    }
    let mut used = vec![false; ic * sc];
    let mut remaining = ic * sc;
    let mut cur = x0;
    let mut inputs = Vec::new();
    let mut states = vec![x0];
    while remaining > 0 {
        let avail: Vec<usize> = (1..=ic).filter(|&u| !used[(u - 1) * sc + cur - 1]).collect();
        if !avail.is_empty() {
            let u = choose(&avail);
            used[(u - 1) * sc + cur - 1] = true;
            remaining -= 1;
            inputs.push(u);
            cur = sys.f_at(u, cur);
            states.push(cur);
            continue;
        }
        // Breadth-first detour to the nearest state with an unused input.
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; sc];
        let mut queue = VecDeque::new();
        queue.push_back(cur);
        parent[cur - 1] = Some((cur, 0));
        let mut target = None;
        'bfs: while let Some(x) = queue.pop_front() {
            for u in 1..=ic {
                let y = sys.f_at(u, x);
                if parent[y - 1].is_none() {
                    parent[y - 1] = Some((x, u));
                    if (1..=ic).any(|v| !used[(v - 1) * sc + y - 1]) {
                        target = Some(y);
                        break 'bfs;
                    }
                    queue.push_back(y);
                }
            }
        }
        let target = match target {
            Some(t) => t,
            None => break,
        };
        let mut detour = Vec::new();
        let mut at = target;
        while at != cur {
            let (px, pu) = parent[at - 1].expect("path back to start");
            detour.push(pu);
            at = px;
        }
        detour.reverse();
        for u in detour {
            inputs.push(u);
            cur = sys.f_at(u, cur);
            states.push(cur);
        }
    }
    if remaining > 0 {
        let mut uncovered = Vec::new();
        for u in 1..=ic {
            for x in 1..=sc {
                if !used[(u - 1) * sc + x - 1] {
                    uncovered.push((u, x));
                }
            }
        }
        return Err(Error::Uncovered { inputs, uncovered });
    }
    Ok(CoverWalk { inputs, states })
}

/// Whether applying `inputs` from `x0` visits every (input value, state)
/// pair — i.e. whether the walk would let an identification pass witness
/// every transition.
pub fn walk_covers(sys: &Bcn, x0: usize, inputs: &[usize]) -> Result<bool> {
    let (states, _) = sys.simulate_idx(x0, inputs)?;
    let sc = sys.state_count();
    let ic = sys.input_count();
    let mut used = vec![false; ic * sc];
    for (t, &u) in inputs.iter().enumerate() {
        used[(u - 1) * sc + states[t] - 1] = true;
    }
    Ok(used.iter().all(|&b| b))
}
