//! Boolean (control) networks in algebraic form: simulation, coordinate
//! transformation, and equivalence testing.
//!
//! A network with `n` state nodes, `m` input nodes and `l` output nodes is a
//! pair of logical matrices `F ∈ L_{2^n × 2^{m+n}}`, `H ∈ L_{2^l × 2^n}`
//! evolving as `x(t+1) = F ⋉ u(t) ⋉ x(t)`, `y(t) = H ⋉ x(t)`. A Boolean
//! network (no inputs) is the `m = 0` case. Two networks are *equivalent*
//! when a permutation `G` of the state space (a coordinate transformation
//! `ω = G x`) maps one onto the other; identification from output data can
//! only ever pin a network down to its equivalence class.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stp::{DeltaVector, LogicalMatrix, DEFAULT_DIM_CAP};

/// Computes `2^k`, refusing exponents whose power exceeds the dimension cap.
pub(crate) fn pow2(k: usize) -> Result<usize> {
    if k >= usize::BITS as usize {
        return Err(Error::Overflow);
    }
    let v = 1usize << k;
    if v > DEFAULT_DIM_CAP {
        return Err(Error::DimensionCap {
            rows: v,
            cols: v,
            cap: DEFAULT_DIM_CAP,
        });
    }
    Ok(v)
}

/// A Boolean control network in algebraic form (a BN when `m = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bcn {
    n: usize,
    m: usize,
    l: usize,
    f: LogicalMatrix,
    h: LogicalMatrix,
}

#[derive(Serialize, Deserialize)]
struct NetworkJson {
    n: usize,
    m: usize,
    l: usize,
    #[serde(rename = "F")]
    f: Vec<usize>,
    #[serde(rename = "H")]
    h: Vec<usize>,
}

impl Bcn {
    /// Builds a network from split-form column indices: `f` must hold
    /// `2^{m+n}` indices in `1..=2^n` and `h` must hold `2^n` indices in
    /// `1..=2^l`.
    pub fn new(n: usize, m: usize, l: usize, f: Vec<usize>, h: Vec<usize>) -> Result<Self> {
        if n == 0 && f.is_empty() {
            // A zero-state network is meaningless; catch it early.
            return Err(Error::DimensionMismatch {
                context: "state node count",
                expected: 1,
                found: 0,
            });
        }
        let sc = pow2(n)?;
        let fc = pow2(m + n)?;
        let oc = pow2(l)?;
        if f.len() != fc {
            return Err(Error::DimensionMismatch {
                context: "F column count",
                expected: fc,
                found: f.len(),
            });
        }
        if h.len() != sc {
            return Err(Error::DimensionMismatch {
                context: "H column count",
                expected: sc,
                found: h.len(),
            });
        }
        Ok(Self {
            n,
            m,
            l,
            f: LogicalMatrix::new(sc, f)?,
            h: LogicalMatrix::new(oc, h)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// `2^n`.
    pub fn state_count(&self) -> usize {
        self.f.rows()
    }

    /// `2^m` (1 for a BN: the single trivial input).
    pub fn input_count(&self) -> usize {
        self.f.cols() / self.f.rows()
    }

    /// `2^l`.
    pub fn output_count(&self) -> usize {
        self.h.rows()
    }

    pub fn f(&self) -> &LogicalMatrix {
        &self.f
    }

    pub fn h(&self) -> &LogicalMatrix {
        &self.h
    }

    /// True when the network has no inputs.
    pub fn is_bn(&self) -> bool {
        self.m == 0
    }

    fn check_state(&self, x: usize) -> Result<()> {
        if x == 0 || x > self.state_count() {
            return Err(Error::IndexOutOfRange {
                context: "state index",
                index: x,
                bound: self.state_count(),
            });
        }
        Ok(())
    }

    fn check_input(&self, u: usize) -> Result<()> {
        if u == 0 || u > self.input_count() {
            return Err(Error::IndexOutOfRange {
                context: "input index",
                index: u,
                bound: self.input_count(),
            });
        }
        Ok(())
    }

    /// Unchecked transition read: the successor of state `x` under input `u`
    /// is the F column at position `(u−1)·2^n + x`.
    pub(crate) fn f_at(&self, u: usize, x: usize) -> usize {
        self.f.col_indices()[(u - 1) * self.state_count() + x - 1]
    }

    /// Unchecked output read: `H` column `x`.
    pub(crate) fn h_at(&self, x: usize) -> usize {
        self.h.col_indices()[x - 1]
    }

    /// Successor state index under input `u` (both 1-based).
    pub fn step_idx(&self, u: usize, x: usize) -> Result<usize> {
        self.check_input(u)?;
        self.check_state(x)?;
        Ok(self.f_at(u, x))
    }

    /// Output index of state `x`.
    pub fn output_idx(&self, x: usize) -> Result<usize> {
        self.check_state(x)?;
        Ok(self.h_at(x))
    }

    /// One transition `x(t+1) = F ⋉ u ⋉ x` on basis vectors.
    pub fn step(&self, u: &DeltaVector, x: &DeltaVector) -> Result<DeltaVector> {
        if u.dim() != self.input_count() {
            return Err(Error::DimensionMismatch {
                context: "input vector dimension",
                expected: self.input_count(),
                found: u.dim(),
            });
        }
        if x.dim() != self.state_count() {
            return Err(Error::DimensionMismatch {
                context: "state vector dimension",
                expected: self.state_count(),
                found: x.dim(),
            });
        }
        DeltaVector::new(self.state_count(), self.f_at(u.index(), x.index()))
    }

    /// One transition of a BN (`m = 0`).
    pub fn step_bn(&self, x: &DeltaVector) -> Result<DeltaVector> {
        if !self.is_bn() {
            return Err(Error::DimensionMismatch {
                context: "autonomous step input count",
                expected: 1,
                found: self.input_count(),
            });
        }
        self.step(&DeltaVector::new(1, 1)?, x)
    }

    /// Index-level simulation: returns `(states, outputs)` with
    /// `states[0] = x0`, `|states| = |outputs| = |inputs| + 1` and
    /// `outputs[t] = H x(t)`.
    pub fn simulate_idx(&self, x0: usize, inputs: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
        self.check_state(x0)?;
        let mut states = Vec::with_capacity(inputs.len() + 1);
        let mut outputs = Vec::with_capacity(inputs.len() + 1);
        let mut cur = x0;
        states.push(cur);
        outputs.push(self.h_at(cur));
        for &u in inputs {
            self.check_input(u)?;
            cur = self.f_at(u, cur);
            states.push(cur);
            outputs.push(self.h_at(cur));
        }
        Ok((states, outputs))
    }

    /// Simulation on basis vectors; one input per transition, so a BN takes
    /// `|inputs|` copies of the trivial `δ_1^1`.
    pub fn simulate(&self, x0: &DeltaVector, inputs: &[DeltaVector]) -> Result<Trajectory> {
        if x0.dim() != self.state_count() {
            return Err(Error::DimensionMismatch {
                context: "initial state dimension",
                expected: self.state_count(),
                found: x0.dim(),
            });
        }
        for u in inputs {
            if u.dim() != self.input_count() {
                return Err(Error::DimensionMismatch {
                    context: "input vector dimension",
                    expected: self.input_count(),
                    found: u.dim(),
                });
            }
        }
        let idx: Vec<usize> = inputs.iter().map(|u| u.index()).collect();
        let (states, outputs) = self.simulate_idx(x0.index(), &idx)?;
        Ok(Trajectory {
            states: states
                .into_iter()
                .map(|i| DeltaVector::new(self.state_count(), i))
                .collect::<Result<_>>()?,
            inputs: inputs.to_vec(),
            outputs: outputs
                .into_iter()
                .map(|i| DeltaVector::new(self.output_count(), i))
                .collect::<Result<_>>()?,
        })
    }

    /// Applies the coordinate transformation `ω = G x`:
    /// `F̂ = G·F·(I_{2^m} ⊗ G^T)`, `Ĥ = H·G^T`, computed in index
    /// arithmetic (`F̂` column `(u−1)2^n + j` is `g(F[(u−1)2^n + g⁻¹(j)])`).
    pub fn transform(&self, g: &PermutationMap) -> Result<Bcn> {
        let sc = self.state_count();
        if g.size() != sc {
            return Err(Error::DimensionMismatch {
                context: "coordinate transformation size",
                expected: sc,
                found: g.size(),
            });
        }
        let g_inv = g.inverse();
        let mut f_hat = Vec::with_capacity(self.f.cols());
        for u in 1..=self.input_count() {
            for j in 1..=sc {
                f_hat.push(g.image(self.f_at(u, g_inv.image(j))));
            }
        }
        let h_hat = (1..=sc).map(|j| self.h_at(g_inv.image(j))).collect();
        Bcn::new(self.n, self.m, self.l, f_hat, h_hat)
    }

    /// Compact single-line JSON: `{"n":…,"m":…,"l":…,"F":[…],"H":[…]}` with
    /// 1-based indices.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&NetworkJson {
            n: self.n,
            m: self.m,
            l: self.l,
            f: self.f.col_indices().to_vec(),
            h: self.h.col_indices().to_vec(),
        })
        .expect("network serialization cannot fail")
    }

    /// Parses and validates the JSON form produced by [`Bcn::to_json`].
    pub fn from_json(s: &str) -> Result<Bcn> {
        let raw: NetworkJson = serde_json::from_str(s)?;
        Bcn::new(raw.n, raw.m, raw.l, raw.f, raw.h)
    }
}

/// A simulated run: `|states| = |outputs| = |inputs| + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub states: Vec<DeltaVector>,
    pub inputs: Vec<DeltaVector>,
    pub outputs: Vec<DeltaVector>,
}

impl Trajectory {
    pub fn state_indices(&self) -> Vec<usize> {
        self.states.iter().map(|v| v.index()).collect()
    }

    pub fn output_indices(&self) -> Vec<usize> {
        self.outputs.iter().map(|v| v.index()).collect()
    }
}

/// A bijection on `[1, size]`: the coordinate transformation `G` in split
/// form (`perm[i−1]` is the image of state `i`, i.e. `G δ^i = δ^{g(i)}`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationMap {
    perm: Vec<usize>,
}

impl PermutationMap {
    /// Validates that `perm` is a bijection on `1..=perm.len()`.
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let size = perm.len();
        if size == 0 {
            return Err(Error::InvalidPermutation {
                reason: "empty map".into(),
            });
        }
        let mut seen = vec![false; size];
        for &v in &perm {
            if v == 0 || v > size {
                return Err(Error::InvalidPermutation {
                    reason: format!("image {v} out of range 1..={size}"),
                });
            }
            if seen[v - 1] {
                return Err(Error::InvalidPermutation {
                    reason: format!("image {v} repeated"),
                });
            }
            seen[v - 1] = true;
        }
        Ok(Self { perm })
    }

    pub fn identity(size: usize) -> Self {
        Self {
            perm: (1..=size).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.perm.len()
    }

    /// Image `g(i)` of a 1-based index.
    ///
    /// # Panics
    /// Panics if `i` is outside `1..=size`.
    pub fn image(&self, i: usize) -> usize {
        self.perm[i - 1]
    }

    /// The inverse bijection.
    pub fn inverse(&self) -> PermutationMap {
        let mut inv = vec![0; self.perm.len()];
        for (i, &v) in self.perm.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Self { perm: inv }
    }

    /// 1-based images in order (`[g(1), g(2), …]`).
    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    /// The permutation as the logical matrix `G = δ_size[g(1) … g(size)]`.
    pub fn to_logical(&self) -> LogicalMatrix {
        LogicalMatrix::new(self.perm.len(), self.perm.clone())
            .expect("validated permutation is a logical matrix")
    }
}

/// Backtracking state-bijection search shared by [`equivalent`].
struct EquivSearch<'a> {
    a: &'a Bcn,
    b: &'a Bcn,
    /// sigma[i] = j (1-based) when state i of `a` is mapped to state j of `b`.
    sigma: Vec<usize>,
    /// tau[j] = i: reverse of sigma, for injectivity.
    tau: Vec<usize>,
    trail: Vec<(usize, usize)>,
}

impl<'a> EquivSearch<'a> {
    /// Forces `sigma(i0) = j0` and everything it implies: images must share
    /// the output column, and `sigma(F_a(u, i)) = F_b(u, sigma(i))` for
    /// every input. Returns false on contradiction (caller must roll back).
    fn propagate(&mut self, i0: usize, j0: usize) -> bool {
        let size = self.a.state_count();
        let mut queue = vec![(i0, j0)];
        while let Some((i, j)) = queue.pop() {
            if self.sigma[i - 1] == j {
                continue;
            }
            if self.sigma[i - 1] != 0 || self.tau[j - 1] != 0 {
                return false;
            }
            if self.a.h_at(i) != self.b.h_at(j) {
                return false;
            }
            self.sigma[i - 1] = j;
            self.tau[j - 1] = i;
            self.trail.push((i, j));
            for u in 1..=self.a.input_count() {
                queue.push((self.a.f_at(u, i), self.b.f_at(u, j)));
            }
            debug_assert!(queue.len() <= size * size);
        }
        true
    }

    fn rollback(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (i, j) = self.trail.pop().expect("trail entries above mark");
            self.sigma[i - 1] = 0;
            self.tau[j - 1] = 0;
        }
    }

    fn dfs(&mut self) -> bool {
        let size = self.a.state_count();
        let next = (1..=size).find(|&i| self.sigma[i - 1] == 0);
        let i = match next {
            None => return true,
            Some(i) => i,
        };
        for j in 1..=size {
            if self.tau[j - 1] != 0 || self.a.h_at(i) != self.b.h_at(j) {
                continue;
            }
            let mark = self.trail.len();
            if self.propagate(i, j) && self.dfs() {
                return true;
            }
            self.rollback(mark);
        }
        false
    }
}

/// Searches for a coordinate transformation `G` with
/// `transform(a, G) = b`; returns `None` when the two systems are not
/// equivalent. Backtracking over state bijections, seeded by the
/// output-column partition (a state may only map to a state with the same
/// `H` column) and pruned by transition consistency under every input.
pub fn equivalent(a: &Bcn, b: &Bcn) -> Result<Option<PermutationMap>> {
    if a.n() != b.n() || a.m() != b.m() || a.l() != b.l() {
        return Err(Error::DimensionMismatch {
            context: "equivalence dimensions",
            expected: a.state_count(),
            found: b.state_count(),
        });
    }
    let size = a.state_count();
    let mut search = EquivSearch {
        a,
        b,
        sigma: vec![0; size],
        tau: vec![0; size],
        trail: Vec::new(),
    };
    if search.dfs() {
        Ok(Some(PermutationMap::new(search.sigma)?))
    } else {
        Ok(None)
    }
}
