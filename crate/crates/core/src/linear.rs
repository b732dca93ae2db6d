//! Linear (GF(2) subspace) asymmetric covering codes.
//!
//! A linear code is downward covering only if it contains the all-ones vector,
//! which for a subspace is the same as being closed under complementation. The
//! minimum dimension of a linear `(n, R)` downward code is `max(1, n - R)`,
//! attained by `a_code`.

use serde::Serialize;

use crate::cube::{check_dim, covering_radius, covers, full_mask, Code, Codeword};
use crate::error::{Error, Result};

/// Largest dimension whose span is enumerated.
pub const SPAN_MAX_DIM: u32 = 20;
/// Largest `n` for the exhaustive subspace search.
pub const EXHAUSTIVE_MAX_N: u32 = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    n: u32,
    basis: Vec<Codeword>,
    span: Code,
}

/// Reduced row echelon form keyed on the lowest set bit of each row.
fn reduce(n: u32, generators: &[Codeword]) -> Result<Vec<Codeword>> {
    let mask = full_mask(n);
    let mut rows: Vec<u64> = Vec::new();
    for g in generators {
        if g.0 & !mask != 0 {
            return Err(Error::WordOutOfRange { word: g.0, n });
        }
        let mut v = g.0;
        for &r in &rows {
            if v >> r.trailing_zeros() & 1 == 1 {
                v ^= r;
            }
        }
        if v != 0 {
            let p = v.trailing_zeros();
            for r in rows.iter_mut() {
                if *r >> p & 1 == 1 {
                    *r ^= v;
                }
            }
            rows.push(v);
        }
    }
    rows.sort_unstable_by_key(|r| r.trailing_zeros());
    Ok(rows.into_iter().map(Codeword).collect())
}

fn enumerate_span(n: u32, basis: &[Codeword]) -> Result<Code> {
    let mut words = vec![0u64];
    for b in basis {
        let len = words.len();
        for i in 0..len {
            words.push(words[i] ^ b.0);
        }
    }
    Code::new(n, words)
}

impl LinearCode {
    /// The subspace spanned by `generators`.
    pub fn span(n: u32, generators: &[Codeword]) -> Result<LinearCode> {
        check_dim(n)?;
        let basis = reduce(n, generators)?;
        if basis.len() as u32 > SPAN_MAX_DIM {
            return Err(Error::CapExceeded {
                what: "linear code dimension",
                value: basis.len() as u64,
                cap: SPAN_MAX_DIM as u64,
            });
        }
        let span = enumerate_span(n, &basis)?;
        Ok(LinearCode { n, basis, span })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> u32 {
        self.basis.len() as u32
    }

    /// Reduced basis; the span is independent of the generators given.
    pub fn basis(&self) -> &[Codeword] {
        &self.basis
    }

    pub fn code(&self) -> &Code {
        &self.span
    }

    pub fn contains(&self, w: Codeword) -> bool {
        self.span.contains(w)
    }

    /// Equal to its 1's complement; for a subspace, iff it contains `1̂`.
    pub fn is_self_complementary(&self) -> bool {
        self.contains(Codeword::top(self.n))
    }

    /// Smallest `R` with which the span downward covers `Q_n`; `None` when the
    /// all-ones vector is missing and no radius works.
    pub fn asym_covering_radius(&self) -> Result<Option<u32>> {
        if self.n > SPAN_MAX_DIM {
            return Err(Error::CapExceeded {
                what: "covering-radius dimension",
                value: self.n as u64,
                cap: SPAN_MAX_DIM as u64,
            });
        }
        covering_radius(&self.span)
    }
}

/// `{0̂, 1̂}` for `n <= R + 1`, otherwise `a_code(n - 1, R) ⊕ {0, 1}`; the
/// recursion unrolls to `1̂` plus the unit vectors of the last `n - R - 1`
/// coordinates.
pub fn a_code(n: u32, r: u32) -> Result<LinearCode> {
    check_dim(n)?;
    if n == 0 || r == 0 {
        return Err(Error::InvalidArgument(format!(
            "a_code needs n >= 1 and R >= 1, got n={n}, R={r}"
        )));
    }
    let mut gens = vec![Codeword(full_mask(n))];
    for coord in (r + 2)..=n {
        gens.push(Codeword(1 << (coord - 1)));
    }
    LinearCode::span(n, &gens)
}

/// `max(1, n - R)`.
pub fn k_plus(n: u32, r: u32) -> u32 {
    n.saturating_sub(r).max(1)
}

/// Calls `f` with the reduced basis of every `k`-dimensional subspace of
/// `F_2^n`, each subspace exactly once.
pub fn for_each_subspace(n: u32, k: u32, mut f: impl FnMut(&[Codeword])) {
    fn free_bits(n: u32, pivots: &[u32], p: u32) -> Vec<u32> {
        (p + 1..n).filter(|b| !pivots.contains(b)).collect()
    }
    fn rec_pivots(n: u32, k: u32, start: u32, pivots: &mut Vec<u32>, f: &mut dyn FnMut(&[Codeword])) {
        if pivots.len() as u32 == k {
            let frees: Vec<Vec<u32>> = pivots.iter().map(|&p| free_bits(n, pivots, p)).collect();
            let total: u32 = frees.iter().map(|v| v.len() as u32).sum();
            let mut rows = vec![0u64; pivots.len()];
            for assign in 0u64..1 << total {
                let mut shift = 0;
                for (i, &p) in pivots.iter().enumerate() {
                    let mut row = 1u64 << p;
                    for (j, &b) in frees[i].iter().enumerate() {
                        row |= (assign >> (shift + j) & 1) << b;
                    }
                    shift += frees[i].len();
                    rows[i] = row;
                }
                let basis: Vec<Codeword> = rows.iter().map(|&r| Codeword(r)).collect();
                f(&basis);
            }
            return;
        }
        for p in start..n {
            pivots.push(p);
            rec_pivots(n, k, p + 1, pivots, f);
            pivots.pop();
        }
    }
    rec_pivots(n, k, 0, &mut Vec::new(), &mut f);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DimSource {
    Exhaustive,
    Theorem,
}

/// Minimum dimension of a linear `(n, R)` downward code. The exhaustive
/// branch searches all subspaces (n <= 6); otherwise the closed form.
pub fn min_linear_dim(n: u32, r: u32, exhaustive: bool) -> Result<(u32, DimSource)> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if !exhaustive {
        if n > SPAN_MAX_DIM {
            return Err(Error::CapExceeded {
                what: "linear code dimension",
                value: n as u64,
                cap: SPAN_MAX_DIM as u64,
            });
        }
        return Ok((k_plus(n, r), DimSource::Theorem));
    }
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::CapExceeded {
            what: "exhaustive subspace search dimension",
            value: n as u64,
            cap: EXHAUSTIVE_MAX_N as u64,
        });
    }
    for k in 0..=n {
        let mut found = false;
        for_each_subspace(n, k, |basis| {
            if !found {
                let span = enumerate_span(n, basis).expect("basis inside the cube");
                found = covers(&span, r).expect("small dimension");
            }
        });
        if found {
            return Ok((k, DimSource::Exhaustive));
        }
    }
    unreachable!("the whole space covers at every radius")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codefile::{parse_bitstring, parse_words};
    use crate::cube::shortening;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> Codeword {
        parse_bitstring(s, s.len() as u32).unwrap()
    }

    #[test]
    fn span_examples() {
        let c = LinearCode::span(3, &[w("011"), w("110")]).unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.code(), &parse_words(3, &["000", "011", "110", "101"]).unwrap());
        let e = LinearCode::span(5, &[]).unwrap();
        assert_eq!(e.dim(), 0);
        assert_eq!(e.code().words(), &[Codeword::ZERO]);
        assert_eq!(LinearCode::span(3, &[w("011"), w("011")]).unwrap().dim(), 1);
        assert!(LinearCode::span(2, &[Codeword(4)]).is_err());
    }

    #[test]
    fn span_cap() {
        let gens: Vec<Codeword> = (0..21).map(|i| Codeword(1 << i)).collect();
        assert!(matches!(
            LinearCode::span(30, &gens),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn self_complementary_examples() {
        assert!(LinearCode::span(3, &[w("111")]).unwrap().is_self_complementary());
        assert!(!LinearCode::span(3, &[w("011")]).unwrap().is_self_complementary());
        for n in 1..10 {
            for r in 1..=n + 1 {
                assert!(a_code(n, r).unwrap().is_self_complementary());
            }
        }
    }

    #[test]
    fn radius_examples() {
        let c = LinearCode::span(3, &[w("111")]).unwrap();
        assert_eq!(c.asym_covering_radius().unwrap(), Some(2));
        let all = LinearCode::span(3, &[w("100"), w("010"), w("001")]).unwrap();
        assert_eq!(all.asym_covering_radius().unwrap(), Some(0));
        let c = LinearCode::span(3, &[w("011")]).unwrap();
        assert_eq!(c.asym_covering_radius().unwrap(), None);
    }

    #[test]
    fn a_code_examples() {
        assert_eq!(a_code(5, 2).unwrap().dim(), 3);
        let c = a_code(3, 5).unwrap();
        assert_eq!(c.dim(), 1);
        assert_eq!(c.code(), &parse_words(3, &["000", "111"]).unwrap());
        for n in 2..12 {
            assert_eq!(a_code(n, 1).unwrap().dim(), n - 1);
        }
        assert!(a_code(3, 0).is_err());
    }

    #[test]
    fn subspace_counts_are_gaussian_binomials() {
        // [4 choose k]_2 = 1, 15, 35, 15, 1
        let expected = [1, 15, 35, 15, 1];
        for (k, &e) in expected.iter().enumerate() {
            let mut count = 0;
            let mut seen = std::collections::BTreeSet::new();
            for_each_subspace(4, k as u32, |b| {
                count += 1;
                seen.insert(enumerate_span(4, b).unwrap().words().to_vec());
            });
            assert_eq!(count, e);
            assert_eq!(seen.len(), e);
        }
    }

    #[test]
    fn exhaustive_examples() {
        assert_eq!(min_linear_dim(4, 2, true).unwrap(), (2, DimSource::Exhaustive));
        assert_eq!(min_linear_dim(3, 3, true).unwrap().0, 1);
        assert_eq!(min_linear_dim(5, 1, true).unwrap().0, 4);
        assert_eq!(min_linear_dim(9, 3, false).unwrap(), (6, DimSource::Theorem));
        assert!(min_linear_dim(7, 1, true).is_err());
    }

    #[test]
    fn covering_subspaces_contain_top() {
        for n in 1..=5 {
            for k in 0..=n {
                for_each_subspace(n, k, |b| {
                    let span = enumerate_span(n, b).unwrap();
                    for r in 0..=n {
                        if covers(&span, r).unwrap() {
                            assert!(span.contains(Codeword::top(n)));
                        }
                    }
                });
            }
        }
    }

    #[test]
    fn shortening_drops_one_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(2..=10u32);
            let k = rng.gen_range(0..n);
            let mut gens = vec![Codeword::top(n)];
            for _ in 0..k {
                gens.push(Codeword(rng.gen::<u64>() & full_mask(n)));
            }
            let c = LinearCode::span(n, &gens).unwrap();
            for i in 1..=n {
                let used = c.code().iter().any(|x| x.bit(i));
                if used {
                    let s = shortening(c.code(), i).unwrap();
                    assert_eq!(s.len() * 2, c.code().len());
                    let ls = LinearCode::span(n - 1, s.words()).unwrap();
                    assert_eq!(ls.dim(), c.dim() - 1);
                }
            }
        }
    }
}
