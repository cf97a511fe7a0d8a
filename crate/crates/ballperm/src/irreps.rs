//! Symmetric-group representation machinery over the Young-Yamanouchi basis.
//!
//! Irreducible representations of S_n are indexed by partitions λ ⊢ n; the
//! orthonormal basis of the block V_λ is indexed by standard Young tableaux
//! of shape λ, ordered lexicographically by row-index word. An adjacent
//! transposition `(k, k+1)` acts on a tableau `t` through the axial distance
//! `d` between the cells holding `k+1` and `k`:
//!
//! ```text
//! L_(k,k+1) |t⟩ = (1/d)|t⟩ + √(1 − 1/d²) |(k,k+1)·t⟩
//! ```
//!
//! which is `+1` on a shared row, `−1` on a shared column, and a real
//! rotation into the swapped tableau otherwise. Everything else here —
//! branching, characters, projectors, Lie-closure ranks, the two-row bit
//! encodings — is built on top of those matrices.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::mat::CMat;
use crate::perm::{Permutation, FACTORIALS};
use crate::state::{BallState, Circuit, Gate, Side, C64};
use crate::{Error, Result};

/// A partition of `n`: non-ascending positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Vec<usize> {
        p.parts
    }
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty()
            || parts.contains(&0)
            || parts.windows(2).any(|w| w[0] < w[1])
        {
            return Err(Error::InvalidPartition(format!("{parts:?}")));
        }
        Ok(Partition { parts })
    }

    /// Parses `"3,1"`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPartition(s.to_string()))
            })
            .collect::<Result<_>>()?;
        Partition::new(parts)
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    /// Transposed diagram.
    pub fn conjugate(&self) -> Partition {
        let cols = self.parts[0];
        let parts = (0..cols)
            .map(|c| self.parts.iter().filter(|&&p| p > c).count())
            .collect();
        Partition { parts }
    }

    pub fn is_two_row_or_two_column(&self) -> bool {
        self.rows() <= 2 || self.parts[0] <= 2
    }

    /// All partitions of `n` in descending lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for first in (1..=n.min(max)).rev() {
                cur.push(first);
                rec(n - first, first, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Irrep dimension `f^λ = n!/∏ hooks`.
    pub fn hook_dim(&self) -> u64 {
        let n = self.n();
        let conj = self.conjugate();
        let mut hooks: u64 = 1;
        for (r, &len) in self.parts.iter().enumerate() {
            for c in 0..len {
                let arm = len - c - 1;
                let leg = conj.parts[c] - r - 1;
                hooks *= (arm + leg + 1) as u64;
            }
        }
        FACTORIALS[n] / hooks
    }

    /// Rows holding a removable (corner) cell, ascending.
    pub fn removable_rows(&self) -> Vec<usize> {
        (0..self.rows())
            .filter(|&r| r + 1 == self.rows() || self.parts[r] > self.parts[r + 1])
            .collect()
    }

    fn remove_cell(&self, row: usize) -> Option<Partition> {
        let mut parts = self.parts.clone();
        parts[row] -= 1;
        if parts[row] == 0 {
            parts.remove(row);
        }
        if parts.is_empty() {
            None
        } else {
            Some(Partition { parts })
        }
    }
}

/// A standard Young tableau: rows and columns strictly increasing, labels
/// `1..=n` each used once.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct StandardTableau {
    rows: Vec<Vec<usize>>,
}

impl fmt::Debug for StandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SYT{:?}", self.rows)
    }
}

impl TryFrom<Vec<Vec<usize>>> for StandardTableau {
    type Error = Error;
    fn try_from(rows: Vec<Vec<usize>>) -> Result<Self> {
        StandardTableau::new(rows)
    }
}

impl From<StandardTableau> for Vec<Vec<usize>> {
    fn from(t: StandardTableau) -> Vec<Vec<usize>> {
        t.rows
    }
}

impl StandardTableau {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let t = StandardTableau { rows };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let n: usize = self.rows.iter().map(Vec::len).sum();
        if n == 0 {
            return Err(Error::InvalidTableau("empty".into()));
        }
        Partition::new(self.rows.iter().map(Vec::len).collect())
            .map_err(|_| Error::InvalidTableau("row lengths are not a partition".into()))?;
        let mut seen = vec![false; n + 1];
        for row in &self.rows {
            for &x in row {
                if x == 0 || x > n || seen[x] {
                    return Err(Error::InvalidTableau(format!("bad label {x}")));
                }
                seen[x] = true;
            }
        }
        for row in &self.rows {
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidTableau("row not increasing".into()));
            }
        }
        for r in 1..self.rows.len() {
            for c in 0..self.rows[r].len() {
                if self.rows[r - 1][c] >= self.rows[r][c] {
                    return Err(Error::InvalidTableau("column not increasing".into()));
                }
            }
        }
        Ok(())
    }

    pub fn shape(&self) -> Partition {
        Partition {
            parts: self.rows.iter().map(Vec::len).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// 0-based `(row, col)` of a label.
    pub fn position_of(&self, label: usize) -> (usize, usize) {
        for (r, row) in self.rows.iter().enumerate() {
            if let Some(c) = row.iter().position(|&x| x == label) {
                return (r, c);
            }
        }
        panic!("label {label} not in tableau");
    }

    /// `y_1 y_2 … y_n` with `y_j` the 1-based row of label `j`.
    pub fn row_word(&self) -> Vec<usize> {
        let n = self.n();
        let mut w = vec![0; n];
        for (r, row) in self.rows.iter().enumerate() {
            for &x in row {
                w[x - 1] = r + 1;
            }
        }
        w
    }

    /// Exchanges labels `k` and `k+1`; the result is standard exactly when
    /// the two labels share neither row nor column.
    pub fn swap_labels(&self, k: usize) -> Result<StandardTableau> {
        let mut rows = self.rows.clone();
        for row in &mut rows {
            for x in row.iter_mut() {
                if *x == k {
                    *x = k + 1;
                } else if *x == k + 1 {
                    *x = k;
                }
            }
        }
        StandardTableau::new(rows)
    }
}

/// All standard tableaux of a shape, in lexicographic row-word order.
pub fn syt_enumerate(shape: &Partition) -> Vec<StandardTableau> {
    let n = shape.n();
    let mut rows: Vec<Vec<usize>> = shape.parts.iter().map(|&len| Vec::with_capacity(len)).collect();
    let mut out = Vec::new();
    fn rec(
        shape: &[usize],
        rows: &mut Vec<Vec<usize>>,
        label: usize,
        n: usize,
        out: &mut Vec<StandardTableau>,
    ) {
        if label > n {
            out.push(StandardTableau { rows: rows.clone() });
            return;
        }
        for r in 0..shape.len() {
            let filled = rows[r].len();
            if filled < shape[r] && (r == 0 || rows[r - 1].len() > filled) {
                rows[r].push(label);
                rec(shape, rows, label + 1, n, out);
                rows[r].pop();
            }
        }
    }
    rec(&shape.parts, &mut rows, 1, n, &mut out);
    out
}

/// Signed axial distance `d_{k+1,k}`: the walk from the cell of `k+1` to the
/// cell of `k`, counting left/down steps `+1` and right/up steps `−1`. Equals
/// `+1` on a shared row and `−1` on a shared column.
pub fn axial_distance(t: &StandardTableau, k: usize) -> i64 {
    let (r_k, c_k) = t.position_of(k);
    let (r_k1, c_k1) = t.position_of(k + 1);
    (r_k as i64 - r_k1 as i64) - (c_k as i64 - c_k1 as i64)
}

/// The Young-Yamanouchi basis of one irrep block, with tableau lookup.
pub struct YYBasis {
    pub shape: Partition,
    pub tableaux: Vec<StandardTableau>,
    index: BTreeMap<Vec<Vec<usize>>, usize>,
}

impl YYBasis {
    pub fn new(shape: &Partition) -> Self {
        let tableaux = syt_enumerate(shape);
        let index = tableaux
            .iter()
            .enumerate()
            .map(|(i, t)| (t.rows.clone(), i))
            .collect();
        YYBasis {
            shape: shape.clone(),
            tableaux,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.tableaux.len()
    }

    pub fn index_of(&self, t: &StandardTableau) -> usize {
        self.index[&t.rows]
    }

    /// Matrix of the adjacent transposition `(k, k+1)` on this block:
    /// real, symmetric, and an involution.
    pub fn transposition(&self, k: usize) -> CMat {
        let dim = self.dim();
        let mut m = CMat::zeros(dim);
        for (i, t) in self.tableaux.iter().enumerate() {
            let d = axial_distance(t, k) as f64;
            m[(i, i)] = Complex64::new(1.0 / d, 0.0);
            if d.abs() > 1.5 {
                let swapped = t.swap_labels(k).expect("swapped tableau is standard");
                let j = self.index_of(&swapped);
                m[(j, i)] = Complex64::new((1.0 - 1.0 / (d * d)).sqrt(), 0.0);
            }
        }
        m
    }

    /// Image of an arbitrary permutation, as a product of adjacent
    /// transposition matrices along a bubble-sort decomposition.
    pub fn permutation(&self, sigma: &Permutation) -> CMat {
        let mut word: Vec<u8> = sigma.word().to_vec();
        let mut acc = CMat::identity(self.dim());
        // Sorting the word by adjacent content swaps s_{k_1}, …, s_{k_L}
        // gives σ = s_{k_L} ∘ … ∘ s_{k_1}.
        let n = word.len();
        loop {
            let mut swapped = false;
            for k in 0..n - 1 {
                if word[k] > word[k + 1] {
                    word.swap(k, k + 1);
                    acc = self.transposition(k + 1).mul(&acc);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        acc
    }
}

/// `yy_transposition(λ, k)`: the block image of `(k, k+1)`.
pub fn yy_transposition(shape: &Partition, k: usize) -> CMat {
    YYBasis::new(shape).transposition(k)
}

/// Image of a demolition-free circuit of left-action partial swaps on the
/// block V_λ. Positional and label-dependent gates have no single-block
/// image and are rejected.
pub fn irrep_unitary(circuit: &Circuit, shape: &Partition) -> Result<CMat> {
    if shape.n() != circuit.n {
        return Err(Error::SizeMismatch {
            left: shape.n(),
            right: circuit.n,
        });
    }
    circuit.validate()?;
    let basis = YYBasis::new(shape);
    let dim = basis.dim();
    let mut acc = CMat::identity(dim);
    for g in &circuit.gates {
        let gate_mat = match *g {
            Gate::X {
                theta,
                i,
                j,
                side: Side::Left,
            } => {
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                // (a b) = s_a s_{a+1} … s_{b-1} … s_{a+1} s_a.
                let mut t = basis.transposition(a);
                for k in a + 1..b {
                    let s = basis.transposition(k);
                    t = s.mul(&t).mul(&s);
                }
                CMat::identity(dim)
                    .scale(Complex64::new(theta.cos(), 0.0))
                    .add(&t.scale(Complex64::new(0.0, theta.sin())))
            }
            _ => {
                return Err(Error::UnsupportedGate(
                    "irrep image is defined for left-action partial swaps only",
                ))
            }
        };
        acc = gate_mat.mul(&acc);
    }
    Ok(acc)
}

/// Branching: groups the YY basis by the row of the cell holding `n`; each
/// group carries the sub-shape obtained by removing that cell and is stable
/// under the first `n-2` adjacent transpositions.
pub fn branch(shape: &Partition) -> Result<Vec<(Partition, Vec<usize>)>> {
    if shape.n() < 2 {
        return Err(Error::SizeBound {
            what: "branching n",
            n: shape.n(),
            max: 2,
        });
    }
    let basis = YYBasis::new(shape);
    let n = shape.n();
    let mut out = Vec::new();
    for row in shape.removable_rows() {
        let sub = shape.remove_cell(row).expect("n ≥ 2 leaves a shape");
        let indices: Vec<usize> = basis
            .tableaux
            .iter()
            .enumerate()
            .filter(|(_, t)| t.position_of(n).0 == row)
            .map(|(i, _)| i)
            .collect();
        out.push((sub, indices));
    }
    Ok(out)
}

/// Character `χ_λ(σ)`, a class function computed as the trace of the YY
/// image of one representative of the cycle type.
pub struct CharacterTable {
    shape: Partition,
    by_class: BTreeMap<Vec<usize>, f64>,
}

impl CharacterTable {
    pub fn new(shape: &Partition) -> Self {
        let basis = YYBasis::new(shape);
        let n = shape.n();
        let mut by_class = BTreeMap::new();
        for class in Partition::all(n) {
            let rep = class_representative(&class);
            let chi = basis.permutation(&rep).trace().re;
            by_class.insert(class.parts.clone(), chi);
        }
        CharacterTable {
            shape: shape.clone(),
            by_class,
        }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn value(&self, sigma: &Permutation) -> f64 {
        self.by_class[&sigma.cycle_type()]
    }
}

fn class_representative(class: &Partition) -> Permutation {
    let mut word = Vec::new();
    let mut base = 0u8;
    for &len in class.parts() {
        for k in 0..len as u8 {
            word.push(base + (k + 1) % len as u8 + 1);
        }
        base += len as u8;
    }
    Permutation::from_word(word).unwrap()
}

pub fn character(shape: &Partition, sigma: &Permutation) -> f64 {
    CharacterTable::new(shape).value(sigma)
}

/// Applies the central projector `P_λ = (f^λ/n!) Σ_σ χ_λ(σ) L_σ` to a state.
/// The sum is over all of S_n, so this is bounded to `n ≤ 7`.
pub fn project_state(state: &BallState, shape: &Partition) -> Result<BallState> {
    let n = state.n();
    if shape.n() != n {
        return Err(Error::SizeMismatch {
            left: shape.n(),
            right: n,
        });
    }
    if n > 7 {
        return Err(Error::SizeBound {
            what: "projector n",
            n,
            max: 7,
        });
    }
    let table = CharacterTable::new(shape);
    let f = shape.hook_dim() as f64;
    let scale = f / FACTORIALS[n] as f64;
    let mut amps: BTreeMap<Permutation, C64> = BTreeMap::new();
    for sigma in Permutation::all(n) {
        let chi = table.value(&sigma);
        if chi == 0.0 {
            continue;
        }
        for (w, a) in state.amps() {
            let target = sigma.compose(w).unwrap();
            *amps.entry(target).or_insert(C64::new(0.0, 0.0)) += a * (scale * chi);
        }
    }
    BallState::from_amplitudes(n, amps)
}

/// `‖P_λ|123…n⟩‖²`, which equals `(f^λ)²/n!`.
pub fn project_identity_norm(shape: &Partition) -> Result<f64> {
    let id = BallState::basis(Permutation::identity(shape.n()));
    Ok(project_state(&id, shape)?.norm().powi(2))
}

/// Dimension of the real Lie algebra generated by the traceless
/// anti-Hermitian images `i(L_(k,k+1) − tr/f)` under commutators, by
/// breadth-first commutator generation with Gram-Schmidt rank tracking.
/// For two-row or two-column shapes this reaches `f² − 1`.
pub fn lie_closure_dim(shape: &Partition) -> Result<usize> {
    let basis = YYBasis::new(shape);
    let f = basis.dim();
    if f > 12 {
        return Err(Error::SizeBound {
            what: "lie closure dim",
            n: f,
            max: 12,
        });
    }
    let n = shape.n();
    let gens: Vec<CMat> = (1..n)
        .map(|k| {
            let m = basis.transposition(k);
            let t = m.trace() / f as f64;
            m.sub(&CMat::identity(f).scale(t))
                .scale(Complex64::new(0.0, 1.0))
        })
        .collect();

    let tol = 1e-8;
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    let mut mats: Vec<CMat> = Vec::new();
    let add = |m: &CMat, ortho: &mut Vec<Vec<f64>>, mats: &mut Vec<CMat>| -> bool {
        let mut v = flatten(m);
        let norm0 = vec_norm(&v);
        if norm0 < tol {
            return false;
        }
        for b in ortho.iter() {
            let d = dot(&v, b);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= d * y;
            }
        }
        let norm = vec_norm(&v);
        if norm < tol * norm0.max(1.0) {
            return false;
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
        ortho.push(v.clone());
        mats.push(unflatten(f, &v));
        true
    };

    for g in &gens {
        add(g, &mut ortho, &mut mats);
    }
    let mut lo = 0;
    let mut candidates = 0;
    while lo < mats.len() && candidates < 2000 {
        let hi = mats.len();
        for i in 0..hi {
            for j in lo.max(i + 1)..hi {
                if candidates >= 2000 {
                    break;
                }
                candidates += 1;
                let c = mats[i].commutator(&mats[j]);
                add(&c, &mut ortho, &mut mats);
            }
        }
        if mats.len() == hi {
            break;
        }
        lo = hi;
    }
    Ok(ortho.len())
}

fn flatten(m: &CMat) -> Vec<f64> {
    let f = m.dim();
    let mut v = Vec::with_capacity(2 * f * f);
    for i in 0..f {
        for j in 0..f {
            v.push(m[(i, j)].re);
            v.push(m[(i, j)].im);
        }
    }
    v
}

fn unflatten(f: usize, v: &[f64]) -> CMat {
    let mut m = CMat::zeros(f);
    for i in 0..f {
        for j in 0..f {
            let idx = 2 * (i * f + j);
            m[(i, j)] = Complex64::new(v[idx], v[idx + 1]);
        }
    }
    m
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn vec_norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// The commutator `[L_(2,3), L_(3,4)]` on the block of shape `(3,1)`,
/// together with its deviation from the expected bridge matrix
/// (antisymmetric, entries `±√2`, `∓√(2/3)`, `±√(1/3)`).
pub fn bridge_matrix() -> (CMat, f64) {
    let shape = Partition::new(vec![3, 1]).unwrap();
    let basis = YYBasis::new(&shape);
    let m23 = basis.transposition(2);
    let m34 = basis.transposition(3);
    let c = m23.commutator(&m34);
    let s2 = 2.0_f64.sqrt();
    let s23 = (2.0 / 3.0_f64).sqrt();
    let s13 = (1.0 / 3.0_f64).sqrt();
    let expected = CMat::from_real(
        3,
        &[0.0, s2, -s23, -s2, 0.0, s13, s23, -s13, 0.0],
    );
    let dev = c.sub(&expected).max_abs();
    (c, dev)
}

/// Entrywise check of the bridge commutator against its expected matrix,
/// including tracelessness and Hermiticity of `i[·,·]`.
pub fn bridge_matrix_check() -> bool {
    let (c, dev) = bridge_matrix();
    let traceless = c.trace().norm() < 1e-12;
    let hermitian = c.scale(Complex64::new(0.0, 1.0)).is_hermitian(1e-12);
    dev < 1e-12 && traceless && hermitian
}

/// Encodes a tableau on two equal rows as a bit string: bit `i` is `0` when
/// label `i` sits in the top row. Valid strings satisfy the ballot
/// condition (every prefix has at least as many 0s as 1s) and balance.
pub fn two_row_encode(t: &StandardTableau) -> Result<String> {
    let shape = t.shape();
    if shape.rows() != 2 || shape.parts()[0] != shape.parts()[1] {
        return Err(Error::InvalidTableau(
            "two-row encoding needs two equal rows".into(),
        ));
    }
    Ok(t.row_word()
        .iter()
        .map(|&r| if r == 1 { '0' } else { '1' })
        .collect())
}

/// Inverse of [`two_row_encode`].
pub fn two_row_decode(bits: &str) -> Result<StandardTableau> {
    let n = bits.len();
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::InvalidBitstring(bits.into()));
    }
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(), Vec::new()];
    let mut zeros = 0usize;
    let mut ones = 0usize;
    for (i, ch) in bits.chars().enumerate() {
        match ch {
            '0' => {
                zeros += 1;
                rows[0].push(i + 1);
            }
            '1' => {
                ones += 1;
                rows[1].push(i + 1);
            }
            _ => return Err(Error::InvalidBitstring(bits.into())),
        }
        if ones > zeros {
            return Err(Error::InvalidBitstring(bits.into()));
        }
    }
    if zeros != ones {
        return Err(Error::InvalidBitstring(bits.into()));
    }
    StandardTableau::new(rows)
}

/// Path encoding of a two-row tableau: `u` per top-row label, `d` per
/// bottom-row label; prefixes never dip below the axis.
pub fn path_encode(t: &StandardTableau) -> Result<String> {
    if t.shape().rows() > 2 {
        return Err(Error::InvalidTableau("path encoding needs ≤ 2 rows".into()));
    }
    Ok(t.row_word()
        .iter()
        .map(|&r| if r == 1 { 'u' } else { 'd' })
        .collect())
}

/// Inverse of [`path_encode`].
pub fn path_decode(word: &str) -> Result<StandardTableau> {
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(), Vec::new()];
    let mut height = 0i64;
    for (i, ch) in word.chars().enumerate() {
        match ch {
            'u' => {
                height += 1;
                rows[0].push(i + 1);
            }
            'd' => {
                height -= 1;
                rows[1].push(i + 1);
            }
            _ => return Err(Error::InvalidBitstring(word.into())),
        }
        if height < 0 {
            return Err(Error::InvalidBitstring(word.into()));
        }
    }
    if rows[1].is_empty() {
        rows.pop();
    }
    StandardTableau::new(rows)
}
