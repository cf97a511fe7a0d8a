//! Permutations in one-line notation and the factorial-number-system codec.
//!
//! A permutation of size `n` is a word of the labels `1..=n`; position `p`
//! holds label `word[p-1]`. Ranks run over `[0, n!)` in lexicographic order
//! of the one-line word. The mixed-radix code `d_1..d_{n-1}` (digit `d_j`
//! bounded by `n-j`, weight `(n-j)!`) has the property that exchanging the
//! contents of two adjacent positions rewrites only the two digits at those
//! positions, so swaps stay local at the code level.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Hard cap on register size; 20! is the largest factorial fitting in `u64`.
pub const MAX_N: usize = 20;

/// Factorials `0!..=20!`.
pub const FACTORIALS: [u64; 21] = factorial_table();

const fn factorial_table() -> [u64; 21] {
    let mut t = [1u64; 21];
    let mut i = 1;
    while i <= 20 {
        t[i] = t[i - 1] * i as u64;
        i += 1;
    }
    t
}

/// A permutation of `{1..n}` in one-line notation.
///
/// The derived ordering is lexicographic on the word, which coincides with
/// rank order under [`FactorialCode`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Permutation {
    word: Vec<u8>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm({self})")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.word.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl TryFrom<Vec<u8>> for Permutation {
    type Error = Error;
    fn try_from(word: Vec<u8>) -> Result<Self> {
        Permutation::from_word(word)
    }
}

impl From<Permutation> for Vec<u8> {
    fn from(p: Permutation) -> Vec<u8> {
        p.word
    }
}

impl Permutation {
    /// Validates that `word` is a bijection on `{1..n}` with `1 <= n <= 20`.
    pub fn from_word(word: Vec<u8>) -> Result<Self> {
        let n = word.len();
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidPermutation(format!(
                "length {n} outside 1..={MAX_N}"
            )));
        }
        let mut seen = [false; MAX_N + 1];
        for &l in &word {
            if l == 0 || l as usize > n || seen[l as usize] {
                return Err(Error::InvalidPermutation(format!("{word:?}")));
            }
            seen[l as usize] = true;
        }
        Ok(Self { word })
    }

    /// The identity word `1,2,...,n`.
    pub fn identity(n: usize) -> Self {
        assert!((1..=MAX_N).contains(&n));
        Self {
            word: (1..=n as u8).collect(),
        }
    }

    /// Parses a comma-separated one-line word such as `"2,1,3"`.
    pub fn parse(s: &str) -> Result<Self> {
        let word: Vec<u8> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u8>()
                    .map_err(|_| Error::InvalidPermutation(s.to_string()))
            })
            .collect::<Result<_>>()?;
        Self::from_word(word)
    }

    pub fn n(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    /// Label at 1-based position `pos`.
    pub fn label_at(&self, pos: usize) -> u8 {
        self.word[pos - 1]
    }

    /// 1-based position currently holding `label`.
    pub fn position_of(&self, label: u8) -> usize {
        self.word.iter().position(|&l| l == label).unwrap() + 1
    }

    pub fn is_identity(&self) -> bool {
        self.word.iter().enumerate().all(|(i, &l)| l as usize == i + 1)
    }

    /// Functional composition: `(p ∘ q)(i) = p(q(i))`.
    pub fn compose(&self, q: &Permutation) -> Result<Permutation> {
        if self.n() != q.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: q.n(),
            });
        }
        let word = q
            .word
            .iter()
            .map(|&l| self.word[l as usize - 1])
            .collect();
        Ok(Permutation { word })
    }

    /// The inverse permutation.
    pub fn inverse(&self) -> Permutation {
        let mut word = vec![0u8; self.n()];
        for (i, &l) in self.word.iter().enumerate() {
            word[l as usize - 1] = i as u8 + 1;
        }
        Permutation { word }
    }

    /// Exchanges the contents of 1-based positions `i` and `j`.
    pub fn swap_positions(&self, i: usize, j: usize) -> Permutation {
        let mut word = self.word.clone();
        word.swap(i - 1, j - 1);
        Permutation { word }
    }

    /// Exchanges the labels `a` and `b` wherever they sit (left action of the
    /// transposition `(a b)`).
    pub fn swap_values(&self, a: u8, b: u8) -> Permutation {
        let word = self
            .word
            .iter()
            .map(|&l| {
                if l == a {
                    b
                } else if l == b {
                    a
                } else {
                    l
                }
            })
            .collect();
        Permutation { word }
    }

    /// Cycle type as a partition of `n` (non-ascending cycle lengths).
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.n();
        let mut seen = vec![false; n + 1];
        let mut cycles = Vec::new();
        for start in 1..=n as u8 {
            if seen[start as usize] {
                continue;
            }
            let mut len = 0;
            let mut cur = start;
            while !seen[cur as usize] {
                seen[cur as usize] = true;
                len += 1;
                cur = self.word[cur as usize - 1];
            }
            cycles.push(len);
        }
        cycles.sort_unstable_by(|a, b| b.cmp(a));
        cycles
    }

    /// All permutations of size `n` in rank (lexicographic) order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        assert!((1..=MAX_N).contains(&n));
        (0..FACTORIALS[n]).map(move |r| FactorialCode::from_rank(n, r).unwrap().decode())
    }

    /// Uniformly random permutation by Fisher-Yates.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
        let mut word: Vec<u8> = (1..=n as u8).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            word.swap(i, j);
        }
        Permutation { word }
    }

    /// Lexicographic rank in `[0, n!)`.
    pub fn rank(&self) -> u64 {
        FactorialCode::encode(self).rank()
    }
}

/// Mixed-radix code for a permutation: digits `d_1..d_{n-1}` with
/// `0 <= d_j <= n-j` and rank `Σ_j d_j (n-j)!`.
///
/// Digit `d_j` selects the j-th output among the labels not yet used, in
/// increasing order, so rank order equals lexicographic order of the word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorialCode {
    n: usize,
    digits: Vec<u8>,
}

impl FactorialCode {
    /// Builds a code from digits, checking the per-digit bounds.
    pub fn from_digits(n: usize, digits: Vec<u8>) -> Result<Self> {
        if n == 0 || n > MAX_N || digits.len() + 1 != n {
            return Err(Error::InvalidPermutation(format!(
                "digit count {} does not match n = {n}",
                digits.len()
            )));
        }
        for (idx, &d) in digits.iter().enumerate() {
            let max = (n - idx - 1) as u8;
            if d > max {
                return Err(Error::DigitOutOfBounds {
                    digit: d,
                    index: idx + 1,
                    max,
                });
            }
        }
        Ok(Self { n, digits })
    }

    /// Unranks: digit `d_j` is the quotient of the running remainder by `(n-j)!`.
    pub fn from_rank(n: usize, rank: u64) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidPermutation(format!("n = {n}")));
        }
        if rank >= FACTORIALS[n] {
            return Err(Error::RankOutOfRange { rank, n });
        }
        let mut digits = Vec::with_capacity(n - 1);
        let mut rem = rank;
        for j in 1..n {
            let w = FACTORIALS[n - j];
            digits.push((rem / w) as u8);
            rem %= w;
        }
        Ok(Self { n, digits })
    }

    /// Lehmer-encodes a permutation.
    pub fn encode(p: &Permutation) -> Self {
        let n = p.n();
        let mut used = [false; MAX_N + 1];
        let mut digits = Vec::with_capacity(n - 1);
        for j in 0..n - 1 {
            let l = p.word()[j];
            let smaller = (1..l).filter(|&x| !used[x as usize]).count();
            digits.push(smaller as u8);
            used[l as usize] = true;
        }
        Self { n, digits }
    }

    /// Decodes back to the one-line word.
    pub fn decode(&self) -> Permutation {
        let n = self.n;
        let mut remaining: Vec<u8> = (1..=n as u8).collect();
        let mut word = Vec::with_capacity(n);
        for &d in &self.digits {
            word.push(remaining.remove(d as usize));
        }
        word.push(remaining[0]);
        Permutation { word }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Digits `d_1..d_{n-1}`.
    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// Digit `d_j` for `1 <= j <= n`, treating the implicit `d_n` as 0.
    pub fn digit(&self, j: usize) -> u8 {
        if j == self.n {
            0
        } else {
            self.digits[j - 1]
        }
    }

    /// Rank `Σ_j d_j (n-j)!`.
    pub fn rank(&self) -> u64 {
        self.digits
            .iter()
            .enumerate()
            .map(|(idx, &d)| d as u64 * FACTORIALS[self.n - idx - 1])
            .sum()
    }

    /// Exchanges the contents of positions `k, k+1` of the decoded word by
    /// rewriting only digits `d_k` and `d_{k+1}`.
    ///
    /// With `a = d_k` and `b = d_{k+1}`: if `b < a` the pair becomes
    /// `(b, a-1)`, otherwise `(b+1, a)`. The first digit selects what used to
    /// be the second output; the shift accounts for the first output either
    /// still preceding it in the remaining pool or not.
    pub fn adjacent_swap(&self, k: usize) -> Result<Self> {
        if k < 1 || k >= self.n {
            return Err(Error::PositionOutOfRange { pos: k, n: self.n });
        }
        let a = self.digit(k);
        let b = self.digit(k + 1);
        let (na, nb) = if b < a { (b, a - 1) } else { (b + 1, a) };
        let mut digits = self.digits.clone();
        digits[k - 1] = na;
        if k + 1 < self.n {
            digits[k] = nb;
        } else {
            debug_assert_eq!(nb, 0);
        }
        Ok(Self { n: self.n, digits })
    }
}

/// Extracts the digit pair `(d_k, d_{k+1})` of `rank` by repeated
/// quotient/remainder against fixed factorials, using a constant number of
/// word-sized registers.
pub fn extract_digit_pair(rank: u64, n: usize, k: usize) -> Result<(u8, u8)> {
    if n == 0 || n > MAX_N {
        return Err(Error::InvalidPermutation(format!("n = {n}")));
    }
    if rank >= FACTORIALS[n] {
        return Err(Error::RankOutOfRange { rank, n });
    }
    if k < 1 || k >= n {
        return Err(Error::PositionOutOfRange { pos: k, n });
    }
    let rem = rank % FACTORIALS[n - k + 1];
    let d_k = (rem / FACTORIALS[n - k]) as u8;
    let rem = rem % FACTORIALS[n - k];
    // d_{k+1} has weight (n-k-1)!; for k = n-1 the remainder is already 0.
    let d_k1 = if k + 1 < n {
        (rem / FACTORIALS[n - k - 1]) as u8
    } else {
        0
    };
    Ok((d_k, d_k1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(word: &[u8]) -> Permutation {
        Permutation::from_word(word.to_vec()).unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(p(&[2, 1, 3]).compose(&p(&[1, 3, 2])).unwrap(), p(&[2, 3, 1]));
        let q = p(&[3, 1, 4, 2]);
        assert_eq!(q.compose(&Permutation::identity(4)).unwrap(), q);
        assert_eq!(Permutation::identity(4).compose(&q).unwrap(), q);
    }

    #[test]
    fn compose_size_mismatch() {
        assert!(matches!(
            p(&[1, 2]).compose(&p(&[1, 2, 3])),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn compose_inverse_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(1..=8);
            let q = Permutation::random(n, &mut rng);
            assert!(q.compose(&q.inverse()).unwrap().is_identity());
            assert!(q.inverse().compose(&q).unwrap().is_identity());
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(p(&[1, 2, 3]).inverse(), p(&[1, 2, 3]));
        assert_eq!(p(&[2, 3, 1]).inverse(), p(&[3, 1, 2]));
        for q in Permutation::all(5) {
            assert_eq!(q.inverse().inverse(), q);
        }
    }

    #[test]
    fn lehmer_examples() {
        let c = FactorialCode::encode(&p(&[1, 2, 3]));
        assert_eq!(c.digits(), &[0, 0]);
        assert_eq!(c.rank(), 0);

        let c = FactorialCode::encode(&p(&[2, 1, 3]));
        assert_eq!(c.digits(), &[1, 0]);
        assert_eq!(c.rank(), 2);

        assert_eq!(FactorialCode::encode(&p(&[3, 2, 1])).rank(), 5);
    }

    #[test]
    fn lehmer_bijection_and_lex_order() {
        for n in 1..=8 {
            let mut seen = vec![false; FACTORIALS[n] as usize];
            let mut prev: Option<Permutation> = None;
            for r in 0..FACTORIALS[n] {
                let q = FactorialCode::from_rank(n, r).unwrap().decode();
                assert_eq!(q.rank(), r);
                assert!(!seen[r as usize]);
                seen[r as usize] = true;
                if let Some(pr) = prev {
                    assert!(pr < q, "rank order must be lexicographic");
                }
                prev = Some(q);
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn digit_bounds_rejected() {
        assert!(matches!(
            FactorialCode::from_digits(3, vec![3, 0]),
            Err(Error::DigitOutOfBounds { .. })
        ));
        assert!(FactorialCode::from_digits(3, vec![2, 1]).is_ok());
        assert!(matches!(
            FactorialCode::from_rank(3, 6),
            Err(Error::RankOutOfRange { .. })
        ));
    }

    #[test]
    fn adjacent_swap_examples() {
        let c = FactorialCode::from_rank(3, 0).unwrap();
        let s = c.adjacent_swap(1).unwrap();
        assert_eq!(s.rank(), 2);
        assert_eq!(s.decode(), p(&[2, 1, 3]));
        assert_eq!(s.digit(2), c.digit(2));

        let c = FactorialCode::from_rank(3, 1).unwrap();
        assert_eq!(c.decode(), p(&[1, 3, 2]));
        let s = c.adjacent_swap(2).unwrap();
        assert_eq!(s.rank(), 0);
        assert_eq!(s.digit(1), c.digit(1));

        assert!(c.adjacent_swap(3).is_err());
        assert!(c.adjacent_swap(0).is_err());
    }

    #[test]
    fn adjacent_swap_matches_position_swap_exhaustively() {
        // Code-level swap must commute with decode, touch only digits k, k+1,
        // and be an involution. Exhaustive over S_5 here; S_6 in acceptance.
        for n in 2..=5 {
            for r in 0..FACTORIALS[n] {
                let c = FactorialCode::from_rank(n, r).unwrap();
                for k in 1..n {
                    let s = c.adjacent_swap(k).unwrap();
                    assert_eq!(s.decode(), c.decode().swap_positions(k, k + 1));
                    for j in 1..n {
                        if j != k && j != k + 1 {
                            assert_eq!(s.digit(j), c.digit(j), "digit {j} moved");
                        }
                    }
                    assert_eq!(s.adjacent_swap(k).unwrap(), c);
                }
            }
        }
    }

    #[test]
    fn extract_digit_pair_examples() {
        assert_eq!(extract_digit_pair(2, 3, 1).unwrap(), (1, 0));
        for n in 2..=6 {
            for k in 1..n {
                assert_eq!(extract_digit_pair(0, n, k).unwrap(), (0, 0));
            }
        }
        assert!(extract_digit_pair(6, 3, 1).is_err());
        assert!(extract_digit_pair(0, 3, 3).is_err());
    }

    #[test]
    fn extract_digit_pair_matches_encode() {
        for n in 2..=6 {
            for r in 0..FACTORIALS[n] {
                let c = FactorialCode::from_rank(n, r).unwrap();
                for k in 1..n {
                    assert_eq!(
                        extract_digit_pair(r, n, k).unwrap(),
                        (c.digit(k), c.digit(k + 1))
                    );
                }
            }
        }
    }

    #[test]
    fn serde_one_based_arrays() {
        let q = p(&[2, 1, 3]);
        assert_eq!(serde_json::to_string(&q).unwrap(), "[2,1,3]");
        let back: Permutation = serde_json::from_str("[2,1,3]").unwrap();
        assert_eq!(back, q);
        assert!(serde_json::from_str::<Permutation>("[2,2,3]").is_err());
        assert!(serde_json::from_str::<Permutation>("[0,1]").is_err());
    }

    #[test]
    fn cycle_types() {
        assert_eq!(p(&[1, 2, 3]).cycle_type(), vec![1, 1, 1]);
        assert_eq!(p(&[2, 1, 3]).cycle_type(), vec![2, 1]);
        assert_eq!(p(&[2, 3, 1]).cycle_type(), vec![3]);
    }
}
