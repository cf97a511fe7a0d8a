//! Sparse exact simulation over the permutation Hilbert space ℂS_n.
//!
//! States map one-line words to complex amplitudes. Gates:
//!
//! - `X(θ, i, j, side)`: partial swap `cos θ·I + i sin θ·T`, where `T` is
//!   either the left action of the label transposition `(i j)` (labels `i`
//!   and `j` trade places wherever they sit) or, with `side = right`, the
//!   exchange of the contents of positions `i` and `j`.
//! - `Z(θ̃, k)`: label-dependent swap of positions `k, k+1`; the angle is
//!   read from the unordered pair of labels currently at those positions
//!   (angle 0 for unlisted pairs).
//! - `R(z, k)`: rapidity gate `X(tan⁻¹ z, k, k+1)` acting on position
//!   contents; this is the collision gate of the scattering model.
//! - `Demolition(pos, postselect)`: measures the label at `pos`, removes
//!   that register, and renames the surviving labels to `1..n-1` preserving
//!   order.
//!
//! All evolution paths are exact; parallel evaluation is restricted to
//! order-preserving maps, so results are bit-identical to sequential runs.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::mat::CMat;
use crate::par;
use crate::perm::{Permutation, FACTORIALS};
use crate::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Outcome probabilities below this squared-amplitude threshold count as zero
/// for demolition branching and postselection.
const PROB_FLOOR: f64 = 1e-24;

/// Which regular action a partial swap uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    #[default]
    Left,
    Right,
}

/// One entry of a label-dependent angle table; the pair is unordered.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairAngle {
    pub a: u8,
    pub b: u8,
    #[serde(deserialize_with = "angle::deserialize")]
    pub theta: f64,
}

/// A gate on ℂS_n.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Gate {
    X {
        #[serde(deserialize_with = "angle::deserialize")]
        theta: f64,
        i: usize,
        j: usize,
        #[serde(default)]
        side: Side,
    },
    Z {
        pos: usize,
        thetas: Vec<PairAngle>,
    },
    R {
        z: f64,
        pos: usize,
    },
    Demolition {
        pos: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        postselect: Option<u8>,
    },
}

impl Gate {
    pub fn x(theta: f64, i: usize, j: usize) -> Gate {
        Gate::X {
            theta,
            i,
            j,
            side: Side::Left,
        }
    }

    pub fn x_right(theta: f64, i: usize, j: usize) -> Gate {
        Gate::X {
            theta,
            i,
            j,
            side: Side::Right,
        }
    }

    pub fn z(pos: usize, thetas: Vec<PairAngle>) -> Gate {
        Gate::Z { pos, thetas }
    }

    pub fn r(z: f64, pos: usize) -> Gate {
        Gate::R { z, pos }
    }

    pub fn demolition(pos: usize) -> Gate {
        Gate::Demolition {
            pos,
            postselect: None,
        }
    }

    pub fn demolition_postselect(pos: usize, label: u8) -> Gate {
        Gate::Demolition {
            pos,
            postselect: Some(label),
        }
    }

    pub fn is_demolition(&self) -> bool {
        matches!(self, Gate::Demolition { .. })
    }
}

fn pair_theta(thetas: &[PairAngle], a: u8, b: u8) -> f64 {
    for e in thetas {
        if (e.a == a && e.b == b) || (e.a == b && e.b == a) {
            return e.theta;
        }
    }
    0.0
}

/// An ordered sequence of gates on an initial register of `n` balls.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self> {
        let c = Circuit { n, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn empty(n: usize) -> Self {
        Circuit { n, gates: vec![] }
    }

    /// Checks every gate against the register size current at its step
    /// (demolitions shrink the register).
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > crate::perm::MAX_N {
            return Err(Error::SizeBound {
                what: "circuit n",
                n: self.n,
                max: crate::perm::MAX_N,
            });
        }
        let mut cur = self.n;
        for g in &self.gates {
            match *g {
                Gate::X { i, j, .. } => {
                    if i < 1 || i > cur {
                        return Err(Error::PositionOutOfRange { pos: i, n: cur });
                    }
                    if j < 1 || j > cur || i == j {
                        return Err(Error::PositionOutOfRange { pos: j, n: cur });
                    }
                }
                Gate::Z { pos, ref thetas } => {
                    if pos < 1 || pos >= cur {
                        return Err(Error::PositionOutOfRange { pos, n: cur });
                    }
                    for e in thetas {
                        if e.a == 0 || e.a as usize > cur {
                            return Err(Error::LabelOutOfRange { label: e.a, n: cur });
                        }
                        if e.b == 0 || e.b as usize > cur || e.a == e.b {
                            return Err(Error::LabelOutOfRange { label: e.b, n: cur });
                        }
                    }
                }
                Gate::R { pos, .. } => {
                    if pos < 1 || pos >= cur {
                        return Err(Error::PositionOutOfRange { pos, n: cur });
                    }
                }
                Gate::Demolition { pos, postselect } => {
                    if pos < 1 || pos > cur {
                        return Err(Error::PositionOutOfRange { pos, n: cur });
                    }
                    if cur < 2 {
                        return Err(Error::SizeBound {
                            what: "register at demolition",
                            n: cur,
                            max: 2,
                        });
                    }
                    if let Some(l) = postselect {
                        if l == 0 || l as usize > cur {
                            return Err(Error::LabelOutOfRange { label: l, n: cur });
                        }
                    }
                    cur -= 1;
                }
            }
        }
        Ok(())
    }

    /// Register size after all demolitions.
    pub fn final_n(&self) -> usize {
        self.n - self.gates.iter().filter(|g| g.is_demolition()).count()
    }

    pub fn has_demolition(&self) -> bool {
        self.gates.iter().any(Gate::is_demolition)
    }

    /// True when every gate is label-insensitive and acts through a single
    /// regular action (all left, or all positional), which is what the
    /// `n!·⟨id|C|id⟩` trace shortcut requires.
    pub fn uniform_action_side(&self) -> bool {
        let mut left = false;
        let mut right = false;
        for g in &self.gates {
            match g {
                Gate::X {
                    side: Side::Left, ..
                } => left = true,
                Gate::X {
                    side: Side::Right, ..
                }
                | Gate::R { .. } => right = true,
                Gate::Z { .. } | Gate::Demolition { .. } => return false,
            }
        }
        !(left && right)
    }

    /// Random circuit of adjacent left-action partial swaps.
    pub fn random_left<R: Rng + ?Sized>(n: usize, len: usize, rng: &mut R) -> Circuit {
        let gates = (0..len)
            .map(|_| {
                let i = rng.gen_range(1..n);
                let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                Gate::x(theta, i, i + 1)
            })
            .collect();
        Circuit { n, gates }
    }

    /// Random demolition-free circuit mixing partial swaps (both sides),
    /// label-dependent swaps, and rapidity gates.
    pub fn random_unitary_mixed<R: Rng + ?Sized>(n: usize, len: usize, rng: &mut R) -> Circuit {
        let gates = (0..len)
            .map(|_| {
                let pos = rng.gen_range(1..n);
                match rng.gen_range(0..4) {
                    0 => Gate::x(rng.gen_range(0.0..std::f64::consts::TAU), pos, pos + 1),
                    1 => Gate::x_right(rng.gen_range(0.0..std::f64::consts::TAU), pos, pos + 1),
                    2 => Gate::r(rng.gen_range(-4.0..4.0), pos),
                    _ => {
                        let mut thetas = Vec::new();
                        for a in 1..=n as u8 {
                            for b in a + 1..=n as u8 {
                                if rng.gen_bool(0.5) {
                                    thetas.push(PairAngle {
                                        a,
                                        b,
                                        theta: rng.gen_range(0.0..std::f64::consts::TAU),
                                    });
                                }
                            }
                        }
                        Gate::z(pos, thetas)
                    }
                }
            })
            .collect();
        Circuit { n, gates }
    }
}

/// Sparse unit vector in ℂS_n.
#[derive(Clone, Debug, PartialEq)]
pub struct BallState {
    n: usize,
    amps: BTreeMap<Permutation, C64>,
}

impl BallState {
    /// Basis state `|σ⟩`.
    pub fn basis(p: Permutation) -> Self {
        let n = p.n();
        let mut amps = BTreeMap::new();
        amps.insert(p, C64::new(1.0, 0.0));
        BallState { n, amps }
    }

    /// Normalized superposition from weighted kets; errors on an empty or
    /// zero-norm specification.
    pub fn superposition(n: usize, parts: &[(Permutation, C64)]) -> Result<Self> {
        let mut amps: BTreeMap<Permutation, C64> = BTreeMap::new();
        for (p, w) in parts {
            if p.n() != n {
                return Err(Error::SizeMismatch {
                    left: p.n(),
                    right: n,
                });
            }
            *amps.entry(p.clone()).or_insert(ZERO) += w;
        }
        let norm2: f64 = amps.values().map(|a| a.norm_sqr()).sum();
        if amps.is_empty() || norm2 < PROB_FLOOR {
            return Err(Error::ZeroStateVector);
        }
        let scale = 1.0 / norm2.sqrt();
        for a in amps.values_mut() {
            *a *= scale;
        }
        Ok(BallState { n, amps })
    }

    fn from_map(n: usize, amps: BTreeMap<Permutation, C64>) -> Self {
        BallState { n, amps }
    }

    /// Builds a state directly from amplitudes without normalizing; meant for
    /// projections and other sub-normalized intermediates.
    pub fn from_amplitudes(n: usize, amps: BTreeMap<Permutation, C64>) -> Result<Self> {
        for p in amps.keys() {
            if p.n() != n {
                return Err(Error::SizeMismatch {
                    left: p.n(),
                    right: n,
                });
            }
        }
        Ok(BallState { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &BTreeMap<Permutation, C64> {
        &self.amps
    }

    pub fn amp(&self, p: &Permutation) -> C64 {
        self.amps.get(p).copied().unwrap_or(ZERO)
    }

    pub fn norm(&self) -> f64 {
        self.amps
            .values()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm();
        if n2 < 1e-150 {
            return Err(Error::ZeroStateVector);
        }
        let mut s = self.clone();
        for a in s.amps.values_mut() {
            *a /= n2;
        }
        Ok(s)
    }

    /// Probability of each label outcome at 1-based position `pos`.
    pub fn outcome_weights(&self, pos: usize) -> BTreeMap<u8, f64> {
        let mut w = BTreeMap::new();
        for (p, a) in &self.amps {
            *w.entry(p.label_at(pos)).or_insert(0.0) += a.norm_sqr();
        }
        w
    }

    /// Projects onto `label` at `pos`, removes that register, and renames the
    /// surviving labels to `1..n-1` order-preservingly. The result keeps the
    /// unnormalized amplitudes; the returned weight is the outcome
    /// probability relative to `self`'s norm.
    pub fn project_remove(&self, pos: usize, label: u8) -> (BallState, f64) {
        let mut amps = BTreeMap::new();
        let mut weight = 0.0;
        for (p, a) in &self.amps {
            if p.label_at(pos) != label {
                continue;
            }
            weight += a.norm_sqr();
            let mut word: Vec<u8> = p.word().to_vec();
            word.remove(pos - 1);
            for l in &mut word {
                if *l > label {
                    *l -= 1;
                }
            }
            amps.insert(Permutation::from_word(word).unwrap(), *a);
        }
        (BallState::from_map(self.n - 1, amps), weight)
    }

    pub fn approx_eq(&self, other: &BallState, tol: f64) -> bool {
        if self.n != other.n {
            return false;
        }
        let keys: std::collections::BTreeSet<_> =
            self.amps.keys().chain(other.amps.keys()).collect();
        keys.into_iter()
            .all(|k| (self.amp(k) - other.amp(k)).norm() <= tol)
    }

    /// Samples a word from the Born distribution of the (normalized) state.
    pub fn born_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let u: f64 = rng.gen::<f64>() * self.amps.values().map(|a| a.norm_sqr()).sum::<f64>();
        let mut acc = 0.0;
        let mut last = None;
        for (p, a) in &self.amps {
            acc += a.norm_sqr();
            last = Some(p);
            if u < acc {
                return p.clone();
            }
        }
        last.expect("non-empty state").clone()
    }
}

type TargetMap = Box<dyn Fn(&Permutation) -> Permutation + Sync>;

/// Applies a unitary (non-demolition) gate to a state.
pub fn apply_unitary_gate(state: &BallState, gate: &Gate) -> Result<BallState> {
    let n = state.n();
    let (stay, flip, target): (f64, f64, TargetMap) =
        match gate {
            Gate::X { theta, i, j, side } => {
                check_pos(*i, n, *i <= n)?;
                check_pos(*j, n, *j <= n && i != j)?;
                let (i, j) = (*i, *j);
                let f: TargetMap = match side {
                    Side::Left => Box::new(move |p| p.swap_values(i as u8, j as u8)),
                    Side::Right => Box::new(move |p| p.swap_positions(i, j)),
                };
                (theta.cos(), theta.sin(), f)
            }
            Gate::R { z, pos } => {
                check_pos(*pos, n, *pos < n)?;
                let pos = *pos;
                let norm = (1.0 + z * z).sqrt();
                (
                    1.0 / norm,
                    z / norm,
                    Box::new(move |p| p.swap_positions(pos, pos + 1)),
                )
            }
            Gate::Z { pos, thetas } => {
                check_pos(*pos, n, *pos < n)?;
                let pos = *pos;
                // Angle depends on the basis word, handled below.
                let thetas = thetas.clone();
                let entries: Vec<(Permutation, C64)> =
                    state.amps.iter().map(|(p, a)| (p.clone(), *a)).collect();
                let contribs = par::map_collect(&entries, |(p, a)| {
                    let th = pair_theta(&thetas, p.label_at(pos), p.label_at(pos + 1));
                    let stay = *a * th.cos();
                    let flip = *a * I * th.sin();
                    (p.clone(), stay, p.swap_positions(pos, pos + 1), flip)
                });
                return Ok(accumulate(n, contribs));
            }
            Gate::Demolition { .. } => return Err(Error::DemolitionPresent),
        };
    let entries: Vec<(Permutation, C64)> =
        state.amps.iter().map(|(p, a)| (p.clone(), *a)).collect();
    let contribs = par::map_collect(&entries, |(p, a)| {
        (p.clone(), *a * stay, target(p), *a * I * flip)
    });
    Ok(accumulate(n, contribs))
}

fn check_pos(pos: usize, n: usize, ok: bool) -> Result<()> {
    if pos < 1 || !ok {
        return Err(Error::PositionOutOfRange { pos, n });
    }
    Ok(())
}

fn accumulate(n: usize, contribs: Vec<(Permutation, C64, Permutation, C64)>) -> BallState {
    let mut amps: BTreeMap<Permutation, C64> = BTreeMap::new();
    for (k1, a1, k2, a2) in contribs {
        if a1 != ZERO {
            *amps.entry(k1).or_insert(ZERO) += a1;
        }
        if a2 != ZERO {
            *amps.entry(k2).or_insert(ZERO) += a2;
        }
    }
    BallState::from_map(n, amps)
}

/// Applies a demolition-free circuit to a state.
pub fn apply_circuit_unitary(circuit: &Circuit, state: &BallState) -> Result<BallState> {
    circuit.validate()?;
    if circuit.has_demolition() {
        return Err(Error::DemolitionPresent);
    }
    if state.n() != circuit.n {
        return Err(Error::SizeMismatch {
            left: state.n(),
            right: circuit.n,
        });
    }
    let mut s = state.clone();
    for g in &circuit.gates {
        s = apply_unitary_gate(&s, g)?;
    }
    Ok(s)
}

/// Exact amplitude `⟨bra|C|ket⟩` for a demolition-free circuit.
pub fn amplitude(circuit: &Circuit, bra: &Permutation, ket: &Permutation) -> Result<C64> {
    if bra.n() != circuit.n || ket.n() != circuit.n {
        return Err(Error::SizeMismatch {
            left: bra.n().max(ket.n()),
            right: circuit.n,
        });
    }
    let out = apply_circuit_unitary(circuit, &BallState::basis(ket.clone()))?;
    Ok(out.amp(bra))
}

/// `Tr(C) = n!·⟨id|C|id⟩`, valid because one-sided label-insensitive circuits
/// have a constant diagonal. Rejects circuits that mix left and positional
/// actions or contain label-dependent gates.
pub fn trace(circuit: &Circuit) -> Result<C64> {
    if circuit.has_demolition() {
        return Err(Error::DemolitionPresent);
    }
    if !circuit.uniform_action_side() {
        return Err(Error::UnsupportedGate(
            "trace shortcut requires a one-sided, label-insensitive circuit",
        ));
    }
    let id = Permutation::identity(circuit.n);
    let a = amplitude(circuit, &id, &id)?;
    Ok(a * FACTORIALS[circuit.n] as f64)
}

/// Debug path: the diagonal sum `Σ_σ ⟨σ|C|σ⟩`, exact for any demolition-free
/// circuit, feasible for `n ≤ 7`.
pub fn trace_diagonal_sum(circuit: &Circuit) -> Result<C64> {
    trace_diagonal_impl(circuit, false)
}

/// Sequential variant of [`trace_diagonal_sum`] for benchmarking.
pub fn trace_diagonal_sum_seq(circuit: &Circuit) -> Result<C64> {
    trace_diagonal_impl(circuit, true)
}

fn trace_diagonal_impl(circuit: &Circuit, force_seq: bool) -> Result<C64> {
    if circuit.has_demolition() {
        return Err(Error::DemolitionPresent);
    }
    if circuit.n > 7 {
        return Err(Error::SizeBound {
            what: "diagonal trace n",
            n: circuit.n,
            max: 7,
        });
    }
    circuit.validate()?;
    let n = circuit.n;
    let f = |r: u64| -> C64 {
        let p = crate::perm::FactorialCode::from_rank(n, r).unwrap().decode();
        let out = apply_circuit_unitary(circuit, &BallState::basis(p.clone())).unwrap();
        out.amp(&p)
    };
    let terms = if force_seq {
        par::map_range_seq(FACTORIALS[n], f)
    } else {
        par::map_range(FACTORIALS[n], f)
    };
    Ok(terms.into_iter().sum())
}

/// Full `n!×n!` matrix of a demolition-free circuit, columns indexed by rank.
pub fn circuit_unitary(circuit: &Circuit) -> Result<CMat> {
    if circuit.has_demolition() {
        return Err(Error::DemolitionPresent);
    }
    circuit.validate()?;
    let n = circuit.n;
    let dim = FACTORIALS[n] as usize;
    let cols = par::map_range(dim as u64, |r| {
        let p = crate::perm::FactorialCode::from_rank(n, r).unwrap().decode();
        let out = apply_circuit_unitary(circuit, &BallState::basis(p)).unwrap();
        let mut col = vec![ZERO; dim];
        for (q, a) in out.amps() {
            col[q.rank() as usize] = *a;
        }
        col
    });
    let mut m = CMat::zeros(dim);
    for (c, col) in cols.iter().enumerate() {
        for (r, a) in col.iter().enumerate() {
            m[(r, c)] = *a;
        }
    }
    Ok(m)
}

/// Runs the circuit once, sampling (or postselecting) every demolition.
/// Returns the measured labels in gate order and the final normalized state.
pub fn run_once<R: Rng + ?Sized>(
    circuit: &Circuit,
    s0: &BallState,
    rng: &mut R,
) -> Result<(Vec<u8>, BallState)> {
    circuit.validate()?;
    if s0.n() != circuit.n {
        return Err(Error::SizeMismatch {
            left: s0.n(),
            right: circuit.n,
        });
    }
    let mut s = s0.clone();
    let mut records = Vec::new();
    for g in &circuit.gates {
        match g {
            Gate::Demolition { pos, postselect } => {
                let label = match postselect {
                    Some(l) => *l,
                    None => {
                        let weights = s.outcome_weights(*pos);
                        let total: f64 = weights.values().sum();
                        let u = rng.gen::<f64>() * total;
                        let mut acc = 0.0;
                        let mut chosen = *weights.keys().next_back().unwrap();
                        for (&l, &w) in &weights {
                            acc += w;
                            if u < acc {
                                chosen = l;
                                break;
                            }
                        }
                        chosen
                    }
                };
                let (proj, p) = s.project_remove(*pos, label);
                if p < PROB_FLOOR {
                    return Err(Error::ZeroProbabilityPostselect {
                        label,
                        pos: *pos,
                    });
                }
                records.push(label);
                s = proj.normalized()?;
            }
            _ => s = apply_unitary_gate(&s, g)?,
        }
    }
    Ok((records, s))
}

/// Draws `shots` independent samples of (demolition records, final word).
pub fn run_and_sample<R: Rng + ?Sized>(
    circuit: &Circuit,
    s0: &BallState,
    shots: usize,
    rng: &mut R,
) -> Result<Vec<(Vec<u8>, Permutation)>> {
    assert!(shots >= 1, "shots must be positive");
    let mut out = Vec::with_capacity(shots);
    for _ in 0..shots {
        let (records, s) = run_once(circuit, s0, rng)?;
        let w = s.born_sample(rng);
        out.push((records, w));
    }
    Ok(out)
}

/// Exact Born distribution of the final word. Demolitions without a
/// postselection are marginalized over; postselected demolitions condition
/// the distribution. Also returns the total success probability of all
/// postselections (1 when there are none).
pub fn distribution_with_success(
    circuit: &Circuit,
    s0: &BallState,
) -> Result<(BTreeMap<Permutation, f64>, f64)> {
    circuit.validate()?;
    if s0.n() != circuit.n {
        return Err(Error::SizeMismatch {
            left: s0.n(),
            right: circuit.n,
        });
    }
    // Branches carry unnormalized amplitudes; a branch's squared norm is the
    // joint probability of its demolition record. Branches never recombine
    // because their records differ.
    let mut branches = vec![s0.clone()];
    for g in &circuit.gates {
        match g {
            Gate::Demolition { pos, postselect } => {
                let mut next = Vec::new();
                for b in &branches {
                    match postselect {
                        Some(l) => {
                            let (proj, p) = b.project_remove(*pos, *l);
                            if p >= PROB_FLOOR {
                                next.push(proj);
                            }
                        }
                        None => {
                            for (&l, &w) in &b.outcome_weights(*pos) {
                                if w >= PROB_FLOOR {
                                    next.push(b.project_remove(*pos, l).0);
                                }
                            }
                        }
                    }
                }
                branches = next;
            }
            _ => {
                let mut next = Vec::with_capacity(branches.len());
                for b in &branches {
                    next.push(apply_unitary_gate(b, g)?);
                }
                branches = next;
            }
        }
    }
    let mut dist: BTreeMap<Permutation, f64> = BTreeMap::new();
    let mut total = 0.0;
    for b in &branches {
        for (p, a) in b.amps() {
            let w = a.norm_sqr();
            total += w;
            *dist.entry(p.clone()).or_insert(0.0) += w;
        }
    }
    if total < PROB_FLOOR {
        return Err(Error::ZeroStateVector);
    }
    for v in dist.values_mut() {
        *v /= total;
    }
    Ok((dist, total))
}

/// Exact output distribution; see [`distribution_with_success`].
pub fn distribution(circuit: &Circuit, s0: &BallState) -> Result<BTreeMap<Permutation, f64>> {
    Ok(distribution_with_success(circuit, s0)?.0)
}

/// [`distribution`] guarded by a register-size cap (used by front ends to
/// honor an exactness budget).
pub fn distribution_capped(
    circuit: &Circuit,
    s0: &BallState,
    max_n: usize,
) -> Result<BTreeMap<Permutation, f64>> {
    if circuit.n > max_n {
        return Err(Error::SizeBound {
            what: "distribution n",
            n: circuit.n,
            max: max_n,
        });
    }
    distribution(circuit, s0)
}

/// Total variation distance between two distributions over words.
pub fn tvd(a: &BTreeMap<Permutation, f64>, b: &BTreeMap<Permutation, f64>) -> f64 {
    let keys: std::collections::BTreeSet<_> = a.keys().chain(b.keys()).collect();
    0.5 * keys
        .into_iter()
        .map(|k| (a.get(k).unwrap_or(&0.0) - b.get(k).unwrap_or(&0.0)).abs())
        .sum::<f64>()
}

/// Monte-Carlo estimate of the normalized trace `Tr(C)/n!`.
///
/// Each sample draws a uniformly random word σ, evaluates `⟨σ|C|σ⟩` exactly
/// (constant over σ for the supported one-sided circuits), and converts the
/// real and imaginary parts into ±1 coin flips with matching bias, modeling
/// the statistical interface of a one-clean-qubit trace estimator. Standard
/// error is at most `1/√samples` per component.
pub fn dqc1_estimate<R: Rng + ?Sized>(
    circuit: &Circuit,
    samples: usize,
    rng: &mut R,
) -> Result<C64> {
    assert!(samples >= 1, "samples must be positive");
    if circuit.has_demolition() {
        return Err(Error::DemolitionPresent);
    }
    if !circuit.uniform_action_side() {
        return Err(Error::UnsupportedGate(
            "normalized-trace estimation requires a one-sided, label-insensitive circuit",
        ));
    }
    let mut re_sum = 0.0;
    let mut im_sum = 0.0;
    for _ in 0..samples {
        let sigma = Permutation::random(circuit.n, rng);
        let out = apply_circuit_unitary(circuit, &BallState::basis(sigma.clone()))?;
        let a = out.amp(&sigma);
        let p_re = ((1.0 + a.re) / 2.0).clamp(0.0, 1.0);
        re_sum += if rng.gen::<f64>() < p_re { 1.0 } else { -1.0 };
        let p_im = ((1.0 + a.im) / 2.0).clamp(0.0, 1.0);
        im_sum += if rng.gen::<f64>() < p_im { 1.0 } else { -1.0 };
    }
    Ok(C64::new(
        re_sum / samples as f64,
        im_sum / samples as f64,
    ))
}

/// Angle parsing: plain radians or rational multiples of π such as `pi/4`,
/// `-3pi/8`, `2pi`.
pub mod angle {
    use serde::{Deserialize, Deserializer};

    pub fn parse(s: &str) -> Option<f64> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = t.to_ascii_lowercase();
        if let Ok(v) = lower.parse::<f64>() {
            return Some(v);
        }
        let (sign, rest) = match lower.strip_prefix('-') {
            Some(r) => (-1.0, r),
            None => (1.0, lower.as_str()),
        };
        let (num, den) = match rest.split_once('/') {
            Some((a, b)) => (a, b.parse::<f64>().ok()?),
            None => (rest, 1.0),
        };
        let coeff = match num.strip_suffix("pi") {
            Some("") => 1.0,
            Some(c) => c.parse::<f64>().ok()?,
            None => return None,
        };
        if den == 0.0 {
            return None;
        }
        Some(sign * coeff * std::f64::consts::PI / den)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Str(s) => {
                parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad angle: {s:?}")))
            }
        }
    }
}
