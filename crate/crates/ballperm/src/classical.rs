//! Classical ball-permuting oracles and reachability decisions.
//!
//! A swap program is an ordered list of position pairs applied to the
//! identity word; a randomized program applies each swap independently with
//! its own probability. The decision problem — can some subset of the
//! optional swaps produce a target permutation — is solved two ways:
//!
//! - brute force over subsets (the defining semantics, exponential), and
//! - for adjacent swaps with strictly interior probabilities, a polynomial
//!   decision: the reachable set of subword products of adjacent
//!   transpositions is exactly the Bruhat interval below the Demazure
//!   product of the swap word, so feasibility is one dominance test. The
//!   same family, drawn as a wiring diagram, is the planar edge-disjoint
//!   paths instance with all terminals on the outer face; the instance
//!   builder and an exhaustive path-system counter witness that bijection.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::par;
use crate::perm::Permutation;
use crate::{Error, Result};

/// An ordered list of position swaps on `n` balls, optionally probabilistic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwapProgram {
    pub n: usize,
    pub swaps: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<f64>>,
}

impl SwapProgram {
    pub fn deterministic(n: usize, swaps: Vec<(usize, usize)>) -> Result<Self> {
        let p = SwapProgram {
            n,
            swaps,
            probs: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn randomized(n: usize, swaps: Vec<(usize, usize)>, probs: Vec<f64>) -> Result<Self> {
        let p = SwapProgram {
            n,
            swaps,
            probs: Some(probs),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > crate::perm::MAX_N {
            return Err(Error::SizeBound {
                what: "program n",
                n: self.n,
                max: crate::perm::MAX_N,
            });
        }
        for &(i, j) in &self.swaps {
            if i < 1 || j <= i || j > self.n {
                return Err(Error::PositionOutOfRange {
                    pos: j.max(i),
                    n: self.n,
                });
            }
        }
        if let Some(ps) = &self.probs {
            if ps.len() != self.swaps.len() {
                return Err(Error::SizeMismatch {
                    left: ps.len(),
                    right: self.swaps.len(),
                });
            }
            for &p in ps {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::ProbOutOfRange(p));
                }
            }
        }
        Ok(())
    }

    pub fn is_adjacent(&self) -> bool {
        self.swaps.iter().all(|&(i, j)| j == i + 1)
    }

    /// Deterministic run: applies every swap in order to `1,2,…,n`.
    pub fn dball_run(&self) -> Result<Permutation> {
        self.validate()?;
        if self.probs.is_some() {
            return Err(Error::ProbsPresent);
        }
        let mut w = Permutation::identity(self.n);
        for &(i, j) in &self.swaps {
            w = w.swap_positions(i, j);
        }
        Ok(w)
    }

    /// Rewrites every swap `(i,j)` as the adjacent ladder
    /// `(i,i+1) … (j-1,j) … (i,i+1)`; in the randomized case the ladder
    /// swaps carry probability 1 around the single probabilistic rung.
    pub fn expand_adjacent(&self) -> SwapProgram {
        let mut swaps = Vec::new();
        let mut probs = Vec::new();
        for (idx, &(i, j)) in self.swaps.iter().enumerate() {
            let p = self.probs.as_ref().map(|ps| ps[idx]).unwrap_or(1.0);
            for a in i..j - 1 {
                swaps.push((a, a + 1));
                probs.push(1.0);
            }
            swaps.push((j - 1, j));
            probs.push(p);
            for a in (i..j - 1).rev() {
                swaps.push((a, a + 1));
                probs.push(1.0);
            }
        }
        SwapProgram {
            n: self.n,
            swaps,
            probs: self.probs.as_ref().map(|_| probs),
        }
    }

    /// One randomized run.
    pub fn rball_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Permutation> {
        self.validate()?;
        let probs = self.probs.as_ref().ok_or(Error::ProbsMissing)?;
        let mut w = Permutation::identity(self.n);
        for (&(i, j), &p) in self.swaps.iter().zip(probs) {
            if rng.gen::<f64>() < p {
                w = w.swap_positions(i, j);
            }
        }
        Ok(w)
    }

    /// Exact output distribution by propagation over S_n (so `n ≤ 8`).
    pub fn rball_exact_dist(&self) -> Result<BTreeMap<Permutation, f64>> {
        self.validate()?;
        let probs = self.probs.as_ref().ok_or(Error::ProbsMissing)?;
        if self.n > 8 {
            return Err(Error::SizeBound {
                what: "exact distribution n",
                n: self.n,
                max: 8,
            });
        }
        let mut dist: BTreeMap<Permutation, f64> = BTreeMap::new();
        dist.insert(Permutation::identity(self.n), 1.0);
        for (&(i, j), &p) in self.swaps.iter().zip(probs) {
            let mut next: BTreeMap<Permutation, f64> = BTreeMap::new();
            for (w, q) in &dist {
                if p < 1.0 {
                    *next.entry(w.clone()).or_insert(0.0) += q * (1.0 - p);
                }
                if p > 0.0 {
                    *next.entry(w.swap_positions(i, j)).or_insert(0.0) += q * p;
                }
            }
            dist = next;
        }
        Ok(dist)
    }
}

/// Outcome of a reachability decision, with a witness subset (1-based
/// indices of applied optional swaps) when feasible.
#[derive(Clone, Debug, PartialEq)]
pub struct BallDecision {
    pub feasible: bool,
    pub witness: Option<Vec<usize>>,
}

/// Splits a randomized program into mandatory (p = 1) and optional
/// (0 < p < 1) swaps; p = 0 swaps are discarded. Items are `(index, i, j,
/// optional)` in program order.
fn resolved_swaps(p: &SwapProgram) -> Result<Vec<(usize, usize, usize, bool)>> {
    let probs = p.probs.as_ref().ok_or(Error::ProbsMissing)?;
    let mut out = Vec::new();
    for (idx, (&(i, j), &q)) in p.swaps.iter().zip(probs).enumerate() {
        if q == 0.0 {
            continue;
        }
        out.push((idx + 1, i, j, q < 1.0));
    }
    Ok(out)
}

/// Decides reachability by enumerating subsets of the optional swaps
/// (capped at 25). Deterministic: the reported witness is the first
/// feasible subset in mask order.
pub fn ball_decide_bruteforce(p: &SwapProgram, target: &Permutation) -> Result<BallDecision> {
    ball_decide_impl(p, target, false)
}

/// Sequential variant of [`ball_decide_bruteforce`] for benchmarking.
pub fn ball_decide_bruteforce_seq(
    p: &SwapProgram,
    target: &Permutation,
) -> Result<BallDecision> {
    ball_decide_impl(p, target, true)
}

fn ball_decide_impl(
    p: &SwapProgram,
    target: &Permutation,
    force_seq: bool,
) -> Result<BallDecision> {
    p.validate()?;
    if target.n() != p.n {
        return Err(Error::SizeMismatch {
            left: target.n(),
            right: p.n,
        });
    }
    let swaps = resolved_swaps(p)?;
    let optional_count = swaps.iter().filter(|s| s.3).count();
    if optional_count > 25 {
        return Err(Error::SizeBound {
            what: "optional swaps",
            n: optional_count,
            max: 25,
        });
    }
    let tryout = |mask: u64| -> bool {
        let mut w = Permutation::identity(p.n);
        let mut bit = 0;
        for &(_, i, j, optional) in &swaps {
            let apply = if optional {
                let chosen = mask >> bit & 1 == 1;
                bit += 1;
                chosen
            } else {
                true
            };
            if apply {
                w = w.swap_positions(i, j);
            }
        }
        w == *target
    };
    let total = 1u64 << optional_count;
    let hit = if force_seq {
        par::find_first_seq(total, tryout)
    } else {
        par::find_first(total, tryout)
    };
    Ok(match hit {
        Some(mask) => {
            let mut witness = Vec::new();
            let mut bit = 0;
            for &(idx, _, _, optional) in &swaps {
                if optional {
                    if mask >> bit & 1 == 1 {
                        witness.push(idx);
                    }
                    bit += 1;
                }
            }
            BallDecision {
                feasible: true,
                witness: Some(witness),
            }
        }
        None => BallDecision {
            feasible: false,
            witness: None,
        },
    })
}

/// Demazure (0-Hecke) product of the adjacent-swap word: multiply each swap
/// in only when it increases length.
pub fn demazure_product(p: &SwapProgram) -> Result<Permutation> {
    p.validate()?;
    if !p.is_adjacent() {
        let &(i, j) = p
            .swaps
            .iter()
            .find(|&&(i, j)| j != i + 1)
            .expect("nonadjacent swap present");
        return Err(Error::NonAdjacentSwap { i, j });
    }
    let mut word: Vec<u8> = Permutation::identity(p.n).word().to_vec();
    for &(i, _) in &p.swaps {
        if word[i - 1] < word[i] {
            word.swap(i - 1, i);
        }
    }
    Ok(Permutation::from_word(word).unwrap())
}

/// Bruhat dominance test `u ≤ w` by sorted-prefix comparison.
pub fn bruhat_leq(u: &Permutation, w: &Permutation) -> bool {
    debug_assert_eq!(u.n(), w.n());
    let n = u.n();
    let mut pu: Vec<u8> = Vec::with_capacity(n);
    let mut pw: Vec<u8> = Vec::with_capacity(n);
    for i in 0..n {
        pu.push(u.word()[i]);
        pw.push(w.word()[i]);
        pu.sort_unstable();
        pw.sort_unstable();
        if pu.iter().zip(&pw).any(|(a, b)| a > b) {
            return false;
        }
    }
    true
}

/// Polynomial decision for adjacent programs with strictly interior
/// probabilities: the set of subword products of the swap word is the
/// Bruhat interval below its Demazure product, so reachability is
/// `target ≤ demazure` — a complete method for the outer-face planar
/// edge-disjoint-paths family this program class draws.
pub fn ball_adj_star_decide(p: &SwapProgram, target: &Permutation) -> Result<bool> {
    p.validate()?;
    if target.n() != p.n {
        return Err(Error::SizeMismatch {
            left: target.n(),
            right: p.n,
        });
    }
    require_adjacent_strict(p)?;
    let delta = demazure_product(p)?;
    Ok(bruhat_leq(target, &delta))
}

fn require_adjacent_strict(p: &SwapProgram) -> Result<()> {
    if let Some(&(i, j)) = p.swaps.iter().find(|&&(i, j)| j != i + 1) {
        return Err(Error::NonAdjacentSwap { i, j });
    }
    let probs = p.probs.as_ref().ok_or(Error::ProbsMissing)?;
    for &q in probs {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::ProbOutOfRange(q));
        }
    }
    Ok(())
}

/// The planar edge-disjoint-paths instance of an adjacent swap program: one
/// internal 2-in/2-out vertex per swap, sources on one side, sinks numbered
/// by the target permutation on the other.
#[derive(Clone, Debug)]
pub struct EdpInstance {
    pub n: usize,
    /// Directed edges `(from, to)` between node ids.
    pub edges: Vec<(usize, usize)>,
    /// Node ids: sources `0..n`, internal `n..n+m`, sinks `n+m..n+m+n`.
    pub internal_count: usize,
    /// Terminal pairs `(source node, sink node)` per label `1..=n`.
    pub pairs: Vec<(usize, usize)>,
}

pub fn build_edp_instance(p: &SwapProgram, target: &Permutation) -> Result<EdpInstance> {
    p.validate()?;
    require_adjacent_strict(p)?;
    if target.n() != p.n {
        return Err(Error::SizeMismatch {
            left: target.n(),
            right: p.n,
        });
    }
    let n = p.n;
    let m = p.swaps.len();
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(2 * m + n);
    // wire[pos] = index into `edges` of the dangling edge at that position.
    let mut wire: Vec<usize> = Vec::with_capacity(n);
    for s in 0..n {
        edges.push((s, usize::MAX));
        wire.push(s);
    }
    for (v_idx, &(i, _)) in p.swaps.iter().enumerate() {
        let v = n + v_idx;
        edges[wire[i - 1]].1 = v;
        edges[wire[i]].1 = v;
        edges.push((v, usize::MAX));
        wire[i - 1] = edges.len() - 1;
        edges.push((v, usize::MAX));
        wire[i] = edges.len() - 1;
    }
    for pos in 0..n {
        let sink = n + m + pos;
        edges[wire[pos]].1 = sink;
    }
    // Sink at final position pos expects label target(pos).
    let mut pairs = vec![(0usize, 0usize); n];
    for pos in 1..=n {
        let label = target.label_at(pos) as usize;
        pairs[label - 1] = (label - 1, n + m + pos - 1);
    }
    Ok(EdpInstance {
        n,
        edges,
        internal_count: m,
        pairs,
    })
}

impl EdpInstance {
    /// Counts systems of pairwise edge-disjoint directed paths connecting
    /// every terminal pair, by exhaustive routing. Small instances only.
    pub fn count_path_systems(&self) -> u64 {
        let mut out_edges: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (e_idx, &(from, _)) in self.edges.iter().enumerate() {
            out_edges.entry(from).or_default().push(e_idx);
        }
        let mut used = vec![false; self.edges.len()];
        fn route(
            inst: &EdpInstance,
            out_edges: &BTreeMap<usize, Vec<usize>>,
            used: &mut Vec<bool>,
            pair: usize,
            node: usize,
        ) -> u64 {
            let (_, sink) = inst.pairs[pair];
            if node == sink {
                return if pair + 1 == inst.pairs.len() {
                    1
                } else {
                    let (next_src, _) = inst.pairs[pair + 1];
                    route(inst, out_edges, used, pair + 1, next_src)
                };
            }
            let mut total = 0;
            if let Some(es) = out_edges.get(&node) {
                for &e in es {
                    if used[e] {
                        continue;
                    }
                    used[e] = true;
                    total += route(inst, out_edges, used, pair, inst.edges[e].1);
                    used[e] = false;
                }
            }
            total
        }
        let (src, _) = self.pairs[0];
        route(self, &out_edges, &mut used, 0, src)
    }
}

/// Counts accepting subsets of an all-optional program (brute force).
pub fn count_accepting_subsets(p: &SwapProgram, target: &Permutation) -> Result<u64> {
    p.validate()?;
    let m = p.swaps.len();
    if m > 25 {
        return Err(Error::SizeBound {
            what: "subset enumeration swaps",
            n: m,
            max: 25,
        });
    }
    let mut count = 0;
    for mask in 0..1u64 << m {
        let mut w = Permutation::identity(p.n);
        for (idx, &(i, j)) in p.swaps.iter().enumerate() {
            if mask >> idx & 1 == 1 {
                w = w.swap_positions(i, j);
            }
        }
        if w == *target {
            count += 1;
        }
    }
    Ok(count)
}

/// Classical Yang-Baxter check: with `p₁ = x/(1+x)`, `p₂ = (x+y)/(1+x+y)`,
/// `p₃ = y/(1+y)` the stochastic triple products
/// `R₁(p₁)R₂(p₂)R₁(p₃)` and `R₂(p₃)R₁(p₂)R₂(p₁)` agree; returns the
/// max-norm difference of the two 6×6 doubly stochastic matrices.
pub fn classical_yb_check(x: f64, y: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 {
        return Err(Error::ProbOutOfRange(x.min(y)));
    }
    let p1 = x / (1.0 + x);
    let p2 = (x + y) / (1.0 + x + y);
    let p3 = y / (1.0 + y);
    let lhs = stoch(1, p1, stoch_mat_id())
        .pipe(|m| stoch(2, p2, m))
        .pipe(|m| stoch(1, p3, m));
    let rhs = stoch(2, p3, stoch_mat_id())
        .pipe(|m| stoch(1, p2, m))
        .pipe(|m| stoch(2, p1, m));
    let mut worst = 0.0_f64;
    for r in 0..6 {
        for c in 0..6 {
            worst = worst.max((lhs[r][c] - rhs[r][c]).abs());
        }
    }
    Ok(worst)
}

type Stoch = [[f64; 6]; 6];

fn stoch_mat_id() -> Stoch {
    let mut m = [[0.0; 6]; 6];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

/// Left-multiplies the running product by `R_k(p) = (1-p)I + p·P_k`, where
/// `P_k` permutes S_3 basis vectors by the position swap `(k, k+1)`.
fn stoch(k: usize, p: f64, m: Stoch) -> Stoch {
    let perms: Vec<Permutation> = Permutation::all(3).collect();
    let mut out = [[0.0; 6]; 6];
    for row in 0..6 {
        for col in 0..6 {
            out[row][col] += (1.0 - p) * m[row][col];
        }
    }
    // Swap part: out += p · P_k · m, i.e. rows of m routed through the swap.
    for (idx, w) in perms.iter().enumerate() {
        let target = w.swap_positions(k, k + 1).rank() as usize;
        for col in 0..6 {
            out[target][col] += p * m[idx][col];
        }
    }
    out
}

trait Pipe: Sized {
    fn pipe<F: FnOnce(Self) -> Self>(self, f: F) -> Self {
        f(self)
    }
}
impl Pipe for Stoch {}

/// A word-problem instance: ordered subsets of `[n]` whose supported
/// permutations must compose to the target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WpppInstance {
    pub n: usize,
    pub sets: Vec<Vec<usize>>,
}

impl WpppInstance {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > crate::perm::MAX_N {
            return Err(Error::SizeBound {
                what: "wppp n",
                n: self.n,
                max: crate::perm::MAX_N,
            });
        }
        for s in &self.sets {
            let mut sorted = s.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != s.len() || s.iter().any(|&x| x < 1 || x > self.n) {
                return Err(Error::InvalidPartition(format!("bad subset {s:?}")));
            }
        }
        Ok(())
    }
}

/// Reduces a word-problem instance to a randomized swap program: each set
/// contributes a staircase of its adjacent pairs, which reaches the full
/// symmetric group on the set by subset choices.
pub fn wppp_reduce(inst: &WpppInstance) -> Result<SwapProgram> {
    inst.validate()?;
    let mut swaps = Vec::new();
    for s in &inst.sets {
        let mut sorted = s.clone();
        sorted.sort_unstable();
        let m = sorted.len();
        for pass in 0..m.saturating_sub(1) {
            for a in 0..m - 1 - pass {
                swaps.push((sorted[a], sorted[a + 1]));
            }
        }
    }
    let probs = vec![0.5; swaps.len()];
    SwapProgram::randomized(inst.n, swaps, probs)
}

/// Feasibility by breadth-first product-set sweep: reachable permutations
/// after each block `Sym(S_j)`.
pub fn wppp_brute(inst: &WpppInstance, target: &Permutation) -> Result<bool> {
    inst.validate()?;
    if target.n() != inst.n {
        return Err(Error::SizeMismatch {
            left: target.n(),
            right: inst.n,
        });
    }
    for s in &inst.sets {
        if s.len() > 6 {
            return Err(Error::SizeBound {
                what: "wppp subset size",
                n: s.len(),
                max: 6,
            });
        }
    }
    let mut reach: std::collections::BTreeSet<Permutation> = std::collections::BTreeSet::new();
    reach.insert(Permutation::identity(inst.n));
    for s in &inst.sets {
        let mut sorted = s.clone();
        sorted.sort_unstable();
        let members = sym_on_positions(inst.n, &sorted);
        let mut next = std::collections::BTreeSet::new();
        for u in &reach {
            for g in &members {
                next.insert(u.compose(g).unwrap());
            }
        }
        reach = next;
    }
    Ok(reach.contains(target))
}

/// All permutations of `[n]` supported on the given sorted position set.
fn sym_on_positions(n: usize, sorted: &[usize]) -> Vec<Permutation> {
    let m = sorted.len();
    if m == 0 {
        return vec![Permutation::identity(n)];
    }
    Permutation::all(m)
        .map(|arr| {
            let mut word: Vec<u8> = (1..=n as u8).collect();
            for (idx, &pos) in sorted.iter().enumerate() {
                word[pos - 1] = sorted[arr.word()[idx] as usize - 1] as u8;
            }
            Permutation::from_word(word).unwrap()
        })
        .collect()
}
