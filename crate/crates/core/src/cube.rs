//! Bit-level primitives on the n-cube.
//!
//! Coordinate `i` (1-based) of a vertex is bit `i - 1` of its mask, so
//! coordinate 1 is the least significant bit. The textual form written by
//! [`crate::codefile`] puts coordinate 1 leftmost.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported dimension. Every mask and every binomial fits in a u64.
pub const MAX_DIM: u32 = 62;

/// Largest dimension for operations that keep one flag per vertex.
pub const SWEEP_MAX_DIM: u32 = 30;

/// One vertex of `Q_n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Codeword(pub u64);

impl Codeword {
    pub const ZERO: Codeword = Codeword(0);

    /// The all-ones vertex of `Q_n`.
    pub fn top(n: u32) -> Codeword {
        Codeword(full_mask(n))
    }

    #[inline]
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    /// `self ⪯ other` in the boolean lattice.
    #[inline]
    pub fn is_below(self, other: Codeword) -> bool {
        self.0 & other.0 == self.0
    }

    #[inline]
    pub fn bit(self, coordinate: u32) -> bool {
        self.0 >> (coordinate - 1) & 1 == 1
    }
}

impl From<u64> for Codeword {
    fn from(v: u64) -> Self {
        Codeword(v)
    }
}

/// Mask with the low `n` bits set.
#[inline]
pub fn full_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
pub fn weight(v: Codeword) -> u32 {
    v.weight()
}

/// `x ⪯ c`.
#[inline]
pub fn dominated(x: Codeword, c: Codeword) -> bool {
    x.is_below(c)
}

pub fn check_dim(n: u32) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::Dimension { n, max: MAX_DIM });
    }
    Ok(())
}

pub(crate) fn check_sweep_dim(n: u32) -> Result<()> {
    check_dim(n)?;
    if n > SWEEP_MAX_DIM {
        return Err(Error::CapExceeded {
            what: "sweep dimension",
            value: n as u64,
            cap: SWEEP_MAX_DIM as u64,
        });
    }
    Ok(())
}

/// Exact binomial coefficient, 0 outside `0 <= k <= n`. Valid for `n <= 62`.
pub fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    assert!(n <= MAX_DIM as i64, "binomial({n}, {k}) outside supported range");
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc as u64
}

/// Size of the upward ball of radius `r` around a weight-`l` vertex of `Q_n`.
pub fn ball_size_up(n: u32, l: u32, r: u32) -> u64 {
    debug_assert!(l <= n);
    ball_size_down(n, n - l, r)
}

/// Size of the downward ball of radius `r` around a weight-`l` vertex.
pub fn ball_size_down(_n: u32, l: u32, r: u32) -> u64 {
    (0..=r.min(l)).map(|j| binomial(l as i64, j as i64)).sum()
}

/// Calls `f` for every vertex obtained from `c` by clearing at most `r` of its
/// set bits (the downward ball, `c` included).
pub fn for_each_below(c: u64, r: u32, mut f: impl FnMut(u64)) {
    let bits: Vec<u32> = BitIter(c).collect();
    f(c);
    walk_subsets(&bits, 0, r, c, &mut |v| f(v));
}

/// Calls `f` for every vertex of `Q_n` obtained from `y` by setting at most `r`
/// of its clear bits (the upward ball, `y` included).
pub fn for_each_above(y: u64, r: u32, n: u32, mut f: impl FnMut(u64)) {
    let bits: Vec<u32> = BitIter(!y & full_mask(n)).collect();
    f(y);
    walk_subsets(&bits, 0, r, y, &mut |v| f(v));
}

// Flips every non-empty subset of bits[start..] of size <= budget, in
// lexicographic order, reporting each result.
fn walk_subsets(bits: &[u32], start: usize, budget: u32, base: u64, f: &mut dyn FnMut(u64)) {
    if budget == 0 {
        return;
    }
    for idx in start..bits.len() {
        let v = base ^ (1u64 << bits[idx]);
        f(v);
        walk_subsets(bits, idx + 1, budget - 1, v, f);
    }
}

pub(crate) struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = u32;
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// The downward ball `{y ⪯ c : w(c) - w(y) <= r}`, ascending.
pub fn ball_down(c: Codeword, r: u32, n: u32) -> Result<Vec<Codeword>> {
    check_dim(n)?;
    if c.0 & !full_mask(n) != 0 {
        return Err(Error::WordOutOfRange { word: c.0, n });
    }
    let mut out = Vec::with_capacity(ball_size_down(n, c.weight(), r) as usize);
    for_each_below(c.0, r, |v| out.push(Codeword(v)));
    out.sort_unstable();
    Ok(out)
}

/// Per-level codeword counts `a_0, ..., a_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct LevelProfile {
    pub counts: Vec<u64>,
}

impl LevelProfile {
    pub fn zeros(n: u32) -> Self {
        LevelProfile {
            counts: vec![0; n as usize + 1],
        }
    }

    pub fn n(&self) -> u32 {
        self.counts.len() as u32 - 1
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Total number of zero coordinates over all codewords, `Σ (n - l) a_l`.
    pub fn zeros_total(&self) -> u64 {
        let n = self.n() as u64;
        self.counts
            .iter()
            .enumerate()
            .map(|(l, &a)| (n - l as u64) * a)
            .sum()
    }

    pub fn ones_total(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(l, &a)| l as u64 * a)
            .sum()
    }
}

/// A duplicate-free set of codewords in a fixed dimension, kept in ascending
/// numeric order, with an optional covering-radius annotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Code {
    n: u32,
    radius: Option<u32>,
    words: Vec<Codeword>,
}

impl Code {
    /// Builds a code, deduplicating the input. Fails if a word does not fit.
    pub fn new<I, W>(n: u32, words: I) -> Result<Code>
    where
        I: IntoIterator<Item = W>,
        W: Into<Codeword>,
    {
        check_dim(n)?;
        let mask = full_mask(n);
        let mut words: Vec<Codeword> = words.into_iter().map(Into::into).collect();
        if let Some(bad) = words.iter().find(|w| w.0 & !mask != 0) {
            return Err(Error::WordOutOfRange { word: bad.0, n });
        }
        words.sort_unstable();
        words.dedup();
        Ok(Code {
            n,
            radius: None,
            words,
        })
    }

    pub fn empty(n: u32) -> Result<Code> {
        Code::new(n, std::iter::empty::<u64>())
    }

    /// All of `Q_n`.
    pub fn whole_cube(n: u32) -> Result<Code> {
        check_sweep_dim(n)?;
        Ok(Code {
            n,
            radius: Some(0),
            words: (0..1u64 << n).map(Codeword).collect(),
        })
    }

    pub(crate) fn from_sorted(n: u32, words: Vec<Codeword>) -> Code {
        debug_assert!(words.windows(2).all(|w| w[0] < w[1]));
        Code {
            n,
            radius: None,
            words,
        }
    }

    pub fn with_radius(mut self, r: u32) -> Code {
        self.radius = Some(r);
        self
    }

    pub fn without_radius(mut self) -> Code {
        self.radius = None;
        self
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn radius(&self) -> Option<u32> {
        self.radius
    }

    pub fn words(&self) -> &[Codeword] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: Codeword) -> bool {
        self.words.binary_search(&w).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Codeword> + '_ {
        self.words.iter().copied()
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", crate::codefile::to_bitstring(*w, self.n))?;
        }
        write!(f, "}}")
    }
}

/// One flag per vertex of `Q_n`.
pub(crate) struct VertexSet {
    bits: Vec<u64>,
    n: u32,
}

impl VertexSet {
    pub(crate) fn new(n: u32) -> Self {
        let len = ((1u64 << n) as usize).div_ceil(64);
        VertexSet {
            bits: vec![0; len],
            n,
        }
    }

    #[inline]
    pub(crate) fn insert(&mut self, v: u64) {
        self.bits[(v >> 6) as usize] |= 1 << (v & 63);
    }

    #[inline]
    pub(crate) fn contains(&self, v: u64) -> bool {
        self.bits[(v >> 6) as usize] >> (v & 63) & 1 == 1
    }

    pub(crate) fn missing(&self) -> impl Iterator<Item = u64> + '_ {
        (0..1u64 << self.n).filter(move |&v| !self.contains(v))
    }

    pub(crate) fn is_full(&self) -> bool {
        let total = 1u64 << self.n;
        let full_words = (total / 64) as usize;
        if self.bits[..full_words].iter().any(|&w| w != u64::MAX) {
            return false;
        }
        let rest = total % 64;
        rest == 0 || self.bits[full_words] == (1u64 << rest) - 1
    }
}

pub(crate) fn coverage(code: &Code, r: u32) -> Result<VertexSet> {
    check_sweep_dim(code.n)?;
    let mut marked = VertexSet::new(code.n);
    for c in code.iter() {
        for_each_below(c.0, r, |v| marked.insert(v));
    }
    Ok(marked)
}

/// Whether `code` downward `r`-covers `Q_n`. Marks every downward ball on a
/// per-vertex bitmap, so the cost is the total ball volume.
pub fn covers(code: &Code, r: u32) -> Result<bool> {
    Ok(coverage(code, r)?.is_full())
}

/// Vertices of `Q_n` not downward `r`-covered by `code`, ascending.
pub fn uncovered(code: &Code, r: u32) -> Result<Vec<Codeword>> {
    Ok(coverage(code, r)?.missing().map(Codeword).collect())
}

/// Smallest `R` such that `code` downward `R`-covers `Q_n`, or `None` when no
/// radius works (the all-ones vertex is missing from the code).
pub fn covering_radius(code: &Code) -> Result<Option<u32>> {
    let n = code.n;
    check_sweep_dim(n)?;
    if n > 26 {
        return Err(Error::CapExceeded {
            what: "covering-radius dimension",
            value: n as u64,
            cap: 26,
        });
    }
    const UNREACHABLE: u8 = u8::MAX;
    let size = 1usize << n;
    let mut dist = vec![UNREACHABLE; size];
    for c in code.iter() {
        dist[c.0 as usize] = 0;
    }
    // dist[y] = min over codewords c ⪰ y of w(c) - w(y); supersets are
    // numerically larger, so a descending sweep sees them first.
    let mut worst = 0u8;
    for y in (0..size).rev() {
        if dist[y] != 0 {
            let mut best = UNREACHABLE;
            let mut free = !(y as u64) & full_mask(n);
            while free != 0 {
                let b = free.trailing_zeros();
                free &= free - 1;
                let d = dist[y | 1 << b];
                if d != UNREACHABLE && d + 1 < best {
                    best = d + 1;
                }
            }
            dist[y] = best;
        }
        if dist[y] == UNREACHABLE {
            return Ok(None);
        }
        worst = worst.max(dist[y]);
    }
    Ok(Some(worst as u32))
}

fn delete_coordinate(x: u64, i: u32) -> u64 {
    let low = (1u64 << (i - 1)) - 1;
    (x & low) | ((x >> 1) & !low)
}

fn check_coordinate(code: &Code, i: u32) -> Result<()> {
    if code.n < 2 || i == 0 || i > code.n {
        return Err(Error::InvalidCoordinate { i, n: code.n });
    }
    Ok(())
}

/// Codewords with a 1 at coordinate `i`, with that coordinate deleted.
pub fn contraction(code: &Code, i: u32) -> Result<Code> {
    check_coordinate(code, i)?;
    let words = code
        .iter()
        .filter(|w| w.bit(i))
        .map(|w| delete_coordinate(w.0, i));
    Code::new(code.n - 1, words)
}

/// Codewords with a 0 at coordinate `i`, with that coordinate deleted.
pub fn shortening(code: &Code, i: u32) -> Result<Code> {
    check_coordinate(code, i)?;
    let words = code
        .iter()
        .filter(|w| !w.bit(i))
        .map(|w| delete_coordinate(w.0, i));
    Code::new(code.n - 1, words)
}

/// `{1̂ - x : x ∈ code}`.
pub fn complement_ones(code: &Code) -> Code {
    let mask = full_mask(code.n);
    let mut words: Vec<Codeword> = code.iter().map(|w| Codeword(w.0 ^ mask)).collect();
    words.sort_unstable();
    let mut out = Code::from_sorted(code.n, words);
    out.radius = code.radius;
    out
}

pub fn level_profile(code: &Code) -> LevelProfile {
    let mut p = LevelProfile::zeros(code.n);
    for w in code.iter() {
        p.counts[w.weight() as usize] += 1;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(n: u32, words: &[u64]) -> Code {
        Code::new(n, words.iter().copied()).unwrap()
    }

    // The three-word (3,1) code written "111, 011, 100" with coordinate 1 leftmost.
    fn diag3() -> Code {
        crate::codefile::parse_words(3, &["111", "011", "100"]).unwrap()
    }

    #[test]
    fn weights() {
        assert_eq!(weight(Codeword::ZERO), 0);
        assert_eq!(weight(Codeword::top(5)), 5);
        assert_eq!(weight(Codeword(0b01101)), 3);
    }

    #[test]
    fn domination() {
        assert!(dominated(Codeword(0b010), Codeword(0b011)));
        assert!(!dominated(Codeword(0b100), Codeword(0b011)));
        for x in 0..64 {
            assert!(dominated(Codeword(x), Codeword(x)));
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(7, 0), 1);
        assert_eq!(binomial(5, -1), 0);
        assert_eq!(binomial(5, 6), 0);
        // Pascal's triangle in u128 as the independent oracle.
        let mut row: Vec<u128> = vec![1];
        for _ in 0..62 {
            let mut next = vec![1u128; row.len() + 1];
            for k in 1..row.len() {
                next[k] = row[k - 1] + row[k];
            }
            row = next;
        }
        assert_eq!(row[31], 465428353255261088);
        for (k, &v) in row.iter().enumerate() {
            assert_eq!(binomial(62, k as i64) as u128, v);
        }
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(ball_size_up(4, 4, 1), 1);
        assert_eq!(ball_size_up(4, 2, 1), 3);
        assert_eq!(ball_size_up(7, 3, 4), 16);
        assert_eq!(ball_size_up(7, 3, 9), 16);
        assert_eq!(ball_size_down(6, 3, 2), 7);
        for n in 1..8 {
            assert_eq!(ball_size_down(n, 0, 3), 1);
        }
    }

    #[test]
    fn balls() {
        let b = ball_down(Codeword(0b011), 1, 3).unwrap();
        assert_eq!(b, vec![Codeword(0b001), Codeword(0b010), Codeword(0b011)]);
        assert_eq!(ball_down(Codeword(0b101), 0, 3).unwrap(), vec![Codeword(0b101)]);
        assert_eq!(ball_down(Codeword::top(4), 4, 4).unwrap().len(), 16);
        assert!(ball_down(Codeword(0b1000), 1, 3).is_err());
        let mut up = Vec::new();
        for_each_above(0b001, 1, 3, |v| up.push(v));
        up.sort();
        assert_eq!(up, vec![0b001, 0b011, 0b101]);
    }

    #[test]
    fn covering_examples() {
        assert!(covers(&diag3(), 1).unwrap());
        for n in 1..10 {
            assert!(covers(&code(n, &[full_mask(n)]), n).unwrap());
        }
        assert!(!covers(&code(2, &[0b11]), 1).unwrap());
        assert_eq!(uncovered(&code(2, &[0b11]), 1).unwrap(), vec![Codeword(0)]);
        assert!(uncovered(&diag3(), 1).unwrap().is_empty());
        assert_eq!(uncovered(&Code::empty(2).unwrap(), 1).unwrap().len(), 4);
        assert!(covers(&code(31, &[full_mask(31)]), 31).is_err());
    }

    #[test]
    fn radius_examples() {
        assert_eq!(covering_radius(&diag3()).unwrap(), Some(1));
        assert_eq!(covering_radius(&code(3, &[0, 7])).unwrap(), Some(2));
        assert_eq!(covering_radius(&Code::whole_cube(4).unwrap()).unwrap(), Some(0));
        assert_eq!(covering_radius(&code(3, &[0, 3])).unwrap(), None);
    }

    #[test]
    fn contraction_and_shortening() {
        let c = diag3();
        let con = contraction(&c, 1).unwrap();
        assert_eq!(con, crate::codefile::parse_words(2, &["11", "00"]).unwrap());
        let sh = shortening(&c, 3).unwrap();
        assert_eq!(sh, crate::codefile::parse_words(2, &["10"]).unwrap());
        for n in 2..8 {
            for i in 1..=n {
                let top = code(n, &[full_mask(n)]);
                assert_eq!(contraction(&top, i).unwrap(), code(n - 1, &[full_mask(n - 1)]));
                assert_eq!(shortening(&code(n, &[0]), i).unwrap(), code(n - 1, &[0]));
            }
        }
        assert!(contraction(&c, 0).is_err());
        assert!(contraction(&c, 4).is_err());
        assert!(shortening(&code(1, &[1]), 1).is_err());
    }

    #[test]
    fn complements_and_profiles() {
        assert_eq!(complement_ones(&code(3, &[0b011])), code(3, &[0b100]));
        let pair = code(4, &[0, 15]);
        assert_eq!(complement_ones(&pair), pair);
        assert_eq!(level_profile(&diag3()).counts, vec![0, 1, 1, 1]);
        assert_eq!(level_profile(&Code::empty(3).unwrap()).counts, vec![0; 4]);
        assert_eq!(level_profile(&diag3()).zeros_total(), 3);
    }

    #[test]
    fn code_rejects_wide_words_and_dedups() {
        assert!(Code::new(3, [8u64]).is_err());
        assert!(Code::new(0, [0u64]).is_err());
        assert!(Code::new(63, [0u64]).is_err());
        assert_eq!(Code::new(3, [5u64, 5, 1]).unwrap().len(), 2);
    }
}
