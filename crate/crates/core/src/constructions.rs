//! Upper-bound constructions.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cube::{
    self, ball_size_down, ball_size_up, binomial, check_dim, covers, for_each_above,
    for_each_below, full_mask, uncovered, Code, Codeword, VertexSet, MAX_DIM,
};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Largest dimension for constructions that visit every vertex.
pub const SAMPLE_MAX_DIM: u32 = 26;

fn check_sample_dim(n: u32, what: &'static str) -> Result<()> {
    check_dim(n)?;
    if n > SAMPLE_MAX_DIM {
        return Err(Error::CapExceeded {
            what,
            value: n as u64,
            cap: SAMPLE_MAX_DIM as u64,
        });
    }
    Ok(())
}

/// Least `n` for which the diagonal code of the given coradius exists.
pub fn diagonal_threshold(coradius: u32) -> u32 {
    coradius * (coradius + 1) / 2
}

/// Code of size `coradius + 1` that downward `(n - coradius)`-covers `Q_n`.
///
/// Word `i + 1` has `i` zeros at consecutive coordinates starting at
/// `(i - 1) i / 2 + 1`; the zero blocks of different words are disjoint.
pub fn diagonal_code(n: u32, coradius: u32) -> Result<Code> {
    check_dim(n)?;
    let needed = diagonal_threshold(coradius);
    if n < needed || coradius > n {
        return Err(Error::DimensionTooSmall {
            n,
            coradius,
            needed,
        });
    }
    let top = full_mask(n);
    let words = (0..=coradius).map(|i| {
        let start = i.saturating_sub(1) * i / 2;
        let zeros = ((1u64 << i) - 1) << start;
        top & !zeros
    });
    Ok(Code::new(n, words)?.with_radius(n - coradius))
}

/// `{(x|y)}`: `c1` occupies coordinates `1..=n1`, `c2` the rest. Radius
/// annotations add.
pub fn direct_sum(c1: &Code, c2: &Code) -> Result<Code> {
    let n = c1.n() + c2.n();
    if n > MAX_DIM {
        return Err(Error::CapExceeded {
            what: "direct-sum dimension",
            value: n as u64,
            cap: MAX_DIM as u64,
        });
    }
    let shift = c1.n();
    let words = c2
        .iter()
        .flat_map(|y| c1.iter().map(move |x| x.0 | y.0 << shift));
    let code = Code::new(n, words)?;
    Ok(match (c1.radius(), c2.radius()) {
        (Some(a), Some(b)) => code.with_radius(a + b),
        _ => code,
    })
}

/// Keeps the first `target_n` coordinates of every word. Covering radius is
/// preserved.
pub fn project_code(code: &Code, target_n: u32) -> Result<Code> {
    if target_n == 0 || target_n > code.n() {
        return Err(Error::InvalidArgument(format!(
            "cannot project dimension {} to {target_n}",
            code.n()
        )));
    }
    let mask = full_mask(target_n);
    let out = Code::new(target_n, code.iter().map(|w| w.0 & mask))?;
    Ok(match code.radius() {
        Some(r) => out.with_radius(r),
        None => out,
    })
}

/// A pair `(S, T)`: every vertex is downward `r`-covered by `S` or lies in `T`.
#[derive(Clone, Debug)]
pub struct PatchedCode {
    pub n: u32,
    pub r: u32,
    pub s: Code,
    pub t: Code,
    pub delta: Rational,
}

impl PatchedCode {
    /// Builds the patch as everything `s` leaves uncovered.
    pub fn patch(s: Code, r: u32, delta: Rational) -> Result<PatchedCode> {
        let t = Code::new(s.n(), uncovered(&s, r)?)?;
        Ok(PatchedCode {
            n: s.n(),
            r,
            s,
            t,
            delta,
        })
    }

    /// `|S| + δ|T|`.
    pub fn delta_weight(&self) -> Rational {
        rational::from_u64(self.s.len() as u64) + &self.delta * rational::from_u64(self.t.len() as u64)
    }

    pub fn is_valid(&self) -> Result<bool> {
        let mut marked = cube::coverage(&self.s, self.r)?;
        for w in self.t.iter() {
            marked.insert(w.0);
        }
        Ok(marked.is_full())
    }
}

/// `(S ⊕ Q_k) ∪ (T ⊕ C)` for an `(k, R)`-code `C`; an `(n + k, R)`-code.
pub fn semi_direct_sum(p: &PatchedCode, c: &Code) -> Result<Code> {
    if c.radius() != Some(p.r) {
        return Err(Error::RadiusMismatch {
            expected: p.r,
            found: c.radius(),
        });
    }
    let k = c.n();
    let n = p.n + k;
    if n > MAX_DIM || k > cube::SWEEP_MAX_DIM {
        return Err(Error::CapExceeded {
            what: "semi-direct-sum dimension",
            value: n as u64,
            cap: MAX_DIM as u64,
        });
    }
    let shift = p.n;
    let full = p
        .s
        .iter()
        .flat_map(|x| (0..1u64 << k).map(move |y| x.0 | y << shift));
    let patched = p
        .t
        .iter()
        .flat_map(|x| c.iter().map(move |y| x.0 | y.0 << shift));
    Ok(Code::new(n, full.chain(patched))?.with_radius(p.r))
}

/// Independent per-level inclusion probabilities with a fixed seed.
#[derive(Clone, Debug)]
pub struct RandomModel {
    pub seed: u64,
    pub level_probs: Vec<f64>,
}

impl RandomModel {
    /// Visits vertices in ascending order, drawing one uniform per vertex from
    /// ChaCha8 seeded with `seed`.
    pub fn sample(&self) -> Result<Code> {
        let n = self.level_probs.len() as u32 - 1;
        check_sample_dim(n, "sampling dimension")?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let words: Vec<Codeword> = (0..1u64 << n)
            .filter(|&v| {
                let u: f64 = rng.gen();
                u < self.level_probs[v.count_ones() as usize]
            })
            .map(Codeword)
            .collect();
        Ok(Code::from_sorted(n, words))
    }
}

/// `ν(n, R) = Σ_j C(n, j) / b+_n(j, R)`.
pub fn nu(n: u32, r: u32) -> Rational {
    rational::sum(
        (0..=n).map(|j| rational::frac(binomial(n as i64, j as i64), ball_size_up(n, j, r))),
    )
}

/// Largest `ν(n, R) n^R / 2^n` over `1 <= n <= n_cap`, a finite stand-in for
/// the constant `α_R` of the patched-code sampler.
pub fn estimate_alpha(r: u32, n_cap: u32) -> Rational {
    assert!(r >= 1 && (1..=40).contains(&n_cap));
    (1..=n_cap)
        .map(|n| {
            let nr = Rational::from_integer(num_bigint::BigInt::from(n).pow(r));
            nu(n, r) * nr / rational::pow2(n)
        })
        .max()
        .expect("non-empty range")
}

fn patched_probabilities(n: u32, r: u32, delta: &Rational, alpha: &Rational) -> Vec<f64> {
    // log(δ n^R / α), clamped at zero; natural log throughout.
    let scale = rational::to_f64(delta).ln() + r as f64 * (n as f64).ln() - rational::to_f64(alpha).ln();
    let scale = scale.max(0.0);
    let mut probs: Vec<f64> = (0..=n)
        .map(|j| (scale / ball_size_up(n, j, r) as f64).min(1.0))
        .collect();
    probs[n as usize] = 1.0;
    probs
}

/// Samples `S` level by level and patches whatever it misses.
pub fn random_patched(n: u32, r: u32, delta: &Rational, seed: u64) -> Result<PatchedCode> {
    check_sample_dim(n, "patched-code dimension")?;
    if r == 0 {
        return Err(Error::InvalidArgument("patched codes need R >= 1".into()));
    }
    let alpha = estimate_alpha(r, 40);
    let model = RandomModel {
        seed,
        level_probs: patched_probabilities(n, r, delta, &alpha),
    };
    let s = model.sample()?.with_radius(r);
    PatchedCode::patch(s, r, delta.clone())
}

pub const POWER2_MAX_DIM: u32 = 26;

/// A `(2^m, R)`-code from repeated semi-direct sums. Step `j` builds the best
/// of `trials` patched codes of dimension `2^j` (ranked by the size of the
/// resulting sum, ties to the earlier trial) and sums it with the current code.
/// Trial `t` of step `j` uses seed `seed + j * trials + t`.
pub fn inductive_power2(m: u32, r: u32, seed: u64, trials: u32) -> Result<Code> {
    if r == 0 {
        return Err(Error::InvalidArgument("power-of-two construction needs R >= 1".into()));
    }
    if m >= 6 || (1u32 << m) > POWER2_MAX_DIM {
        return Err(Error::CapExceeded {
            what: "power-of-two dimension",
            value: 1u64 << m.min(63),
            cap: POWER2_MAX_DIM as u64,
        });
    }
    let trials = trials.max(1);
    let mut code = Code::new(1, [1u64])?.with_radius(r);
    for j in 0..m {
        let dim = 1u32 << j;
        let delta = rational::frac(code.len() as u64, 1u64 << dim);
        let best = (0..trials)
            .into_par_iter()
            .map(|t| {
                let s = seed
                    .wrapping_add(j as u64 * trials as u64)
                    .wrapping_add(t as u64);
                let p = random_patched(dim, r, &delta, s)?;
                let size = p.s.len() as u64 * (1u64 << dim) + p.t.len() as u64 * code.len() as u64;
                Ok((size, t, p))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min_by_key(|(size, t, _)| (*size, *t))
            .expect("at least one trial");
        code = semi_direct_sum(&best.2, &code)?;
    }
    if !covers(&code, r)? {
        return Err(Error::Verification(format!(
            "power-of-two construction failed to cover Q_{}",
            code.n()
        )));
    }
    Ok(code)
}

/// Greedy set cover by downward balls: repeatedly takes the vertex whose
/// ball holds the most uncovered vertices, smallest mask on ties.
pub fn greedy_code(n: u32, r: u32) -> Result<Code> {
    check_sample_dim(n, "greedy dimension")?;
    let size = 1u64 << n;
    let mut gain: Vec<u64> = (0..size)
        .map(|c| ball_size_down(n, c.count_ones(), r))
        .collect();
    let mut heap: BinaryHeap<(u64, Reverse<u64>)> =
        (0..size).map(|c| (gain[c as usize], Reverse(c))).collect();
    let mut covered = VertexSet::new(n);
    let mut remaining = size;
    let mut words = Vec::new();
    let mut newly = Vec::new();
    while remaining > 0 {
        let (g, Reverse(c)) = heap.pop().expect("uncovered vertices have candidates");
        let current = gain[c as usize];
        if g != current {
            if current > 0 {
                heap.push((current, Reverse(c)));
            }
            continue;
        }
        words.push(Codeword(c));
        newly.clear();
        for_each_below(c, r, |v| {
            if !covered.contains(v) {
                covered.insert(v);
                newly.push(v);
            }
        });
        remaining -= newly.len() as u64;
        for &v in &newly {
            for_each_above(v, r, n, |u| gain[u as usize] -= 1);
        }
    }
    words.sort_unstable();
    Ok(Code::from_sorted(n, words).with_radius(r))
}

/// Samples `x` with probability `min{1, ln(2^n / ν) / b+_n(w(x), R)}` and then
/// adds every vertex left uncovered.
pub fn random_code_nu(n: u32, r: u32, seed: u64) -> Result<Code> {
    check_sample_dim(n, "random-code dimension")?;
    if r == 0 {
        return Code::whole_cube(n);
    }
    let scale = (rational::pow2(n) / nu(n, r)).ln_f64();
    let model = RandomModel {
        seed,
        level_probs: (0..=n)
            .map(|j| (scale / ball_size_up(n, j, r) as f64).min(1.0))
            .collect(),
    };
    let s = model.sample()?;
    let patch = uncovered(&s, r)?;
    Ok(Code::new(n, s.iter().chain(patch))?.with_radius(r))
}

/// Largest dimension for [`local_search_code`].
pub const LOCAL_MAX_DIM: u32 = 16;

/// Looks for an `(n, R)`-code of exactly `size` words by local search: the
/// all-ones word is fixed, the others start random and move one bit at a time,
/// keeping moves that do not increase the number of uncovered vertices (and a
/// small share of worse ones). Restarts every `steps / 8` moves. `None` means
/// nothing was found, not that no such code exists.
pub fn local_search_code(n: u32, r: u32, size: usize, seed: u64, steps: u64) -> Result<Option<Code>> {
    check_dim(n)?;
    if n > LOCAL_MAX_DIM {
        return Err(Error::CapExceeded {
            what: "local-search dimension",
            value: n as u64,
            cap: LOCAL_MAX_DIM as u64,
        });
    }
    if size == 0 {
        return Ok(None);
    }
    let mask = full_mask(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = vec![0u16; 1usize << n];
    let restart_every = (steps / 8).max(1);
    let mut words: Vec<u64> = Vec::new();
    let mut missing = 0usize;
    for step in 0..steps {
        if step % restart_every == 0 {
            hits.iter_mut().for_each(|h| *h = 0);
            words = std::iter::once(mask)
                .chain((1..size).map(|_| rng.gen::<u64>() & mask))
                .collect();
            for &w in &words {
                for_each_below(w, r, |v| hits[v as usize] += 1);
            }
            missing = hits.iter().filter(|&&h| h == 0).count();
        }
        if missing == 0 {
            break;
        }
        if size == 1 {
            return Ok(None);
        }
        let i = rng.gen_range(1..size);
        let old = words[i];
        let new = old ^ 1 << rng.gen_range(0..n);
        let mut delta = 0i64;
        for_each_below(old, r, |v| {
            hits[v as usize] -= 1;
            if hits[v as usize] == 0 {
                delta += 1;
            }
        });
        for_each_below(new, r, |v| {
            if hits[v as usize] == 0 {
                delta -= 1;
            }
            hits[v as usize] += 1;
        });
        if delta <= 0 || rng.gen::<f64>() < 0.05 {
            words[i] = new;
            missing = (missing as i64 + delta) as usize;
        } else {
            for_each_below(new, r, |v| hits[v as usize] -= 1);
            for_each_below(old, r, |v| hits[v as usize] += 1);
        }
    }
    if missing != 0 {
        return Ok(None);
    }
    let code = Code::new(n, words)?.with_radius(r);
    // Duplicates collapse; a smaller cover still pads back to `size` words.
    let mut all = code.words().to_vec();
    let mut v = 0u64;
    while all.len() < size {
        if !code.contains(Codeword(v)) {
            all.push(Codeword(v));
        }
        v += 1;
    }
    let code = Code::new(n, all)?.with_radius(r);
    if !covers(&code, r)? {
        return Err(Error::Verification(format!("local search lost coverage of Q_{n}")));
    }
    Ok(Some(code))
}

trait LnF64 {
    fn ln_f64(&self) -> f64;
}

impl LnF64 for Rational {
    fn ln_f64(&self) -> f64 {
        rational::to_f64(self).ln()
    }
}

/// Coradii of diagonal blocks whose direct sum gives the smallest code of
/// dimension at most `n` and total coradius `coradius`: minimizes
/// `Π (r_i + 1)` subject to `Σ r_i = coradius`, `Σ r_i (r_i + 1) / 2 <= n`.
/// Blocks are listed largest first.
pub fn diagonal_blocks(n: u32, coradius: u32) -> Vec<u32> {
    assert!(coradius <= n);
    let (rb, nb) = (coradius as usize, n as usize);
    // best[rho][d]: (size, first block) for coradius rho within d coordinates.
    let mut best = vec![vec![(u128::MAX, 0u32); nb + 1]; rb + 1];
    best[0].fill((1, 0));
    for rho in 1..=rb {
        for d in 0..=nb {
            let mut cur = (u128::MAX, 0u32);
            for r in (1..=rho).rev() {
                let need = r * (r + 1) / 2;
                if need > d {
                    continue;
                }
                let (rest, _) = best[rho - r][d - need];
                if rest == u128::MAX {
                    continue;
                }
                let size = rest.saturating_mul(r as u128 + 1);
                if size < cur.0 {
                    cur = (size, r as u32);
                }
            }
            best[rho][d] = cur;
        }
    }
    let mut blocks = Vec::new();
    let (mut rho, mut d) = (rb, nb);
    while rho > 0 {
        let r = best[rho][d].1 as usize;
        debug_assert!(r > 0, "coradius <= n is always feasible with unit blocks");
        blocks.push(r as u32);
        rho -= r;
        d -= r * (r + 1) / 2;
    }
    blocks.sort_unstable_by(|a, b| b.cmp(a));
    blocks
}

/// Size of [`general_upper_code`]: `Π (r_i + 1)` over [`diagonal_blocks`].
pub fn general_upper_size(n: u32, coradius: u32) -> u128 {
    diagonal_blocks(n, coradius)
        .iter()
        .map(|&r| r as u128 + 1)
        .product()
}

/// `(n, n - coradius)`-code built as a direct sum of diagonal codes, one block
/// per entry of [`diagonal_blocks`], with any leftover coordinates fixed to 1.
pub fn general_upper_code(n: u32, coradius: u32) -> Result<Code> {
    check_dim(n)?;
    if coradius > n {
        return Err(Error::InvalidArgument(format!(
            "coradius {coradius} exceeds dimension {n}"
        )));
    }
    let size = general_upper_size(n, coradius);
    if size > 1 << 24 {
        return Err(Error::CapExceeded {
            what: "general construction size",
            value: size.min(u64::MAX as u128) as u64,
            cap: 1 << 24,
        });
    }
    let blocks = diagonal_blocks(n, coradius);
    let used: u32 = blocks.iter().map(|&r| diagonal_threshold(r)).sum();
    let mut code: Option<Code> = None;
    for &r in &blocks {
        let block = diagonal_code(diagonal_threshold(r), r)?;
        code = Some(match code {
            None => block,
            Some(acc) => direct_sum(&acc, &block)?,
        });
    }
    if used < n {
        let tail = diagonal_code(n - used, 0)?;
        code = Some(match code {
            None => tail,
            Some(acc) => direct_sum(&acc, &tail)?,
        });
    }
    let code = code.expect("n >= 1 gives at least one block");
    debug_assert_eq!(code.radius(), Some(n - coradius));
    Ok(code)
}

/// `(2n / R̄)^⌈R̄² / (2n - R̄)⌉`, the closed-form ceiling on [`general_upper_size`].
pub fn general_upper_formula(n: u32, coradius: u32) -> Rational {
    if coradius == 0 {
        return rational::from_u64(1);
    }
    let m = (coradius as u64 * coradius as u64).div_ceil(2 * n as u64 - coradius as u64);
    rational::frac(2 * n as u64, coradius as u64).pow(m as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codefile::parse_words;

    #[test]
    fn diagonal_examples() {
        let d = diagonal_code(3, 2).unwrap();
        assert_eq!(d, parse_words(3, &["111", "011", "100"]).unwrap().with_radius(1));
        assert_eq!(diagonal_code(5, 0).unwrap().words(), &[Codeword::top(5)]);
        assert!(matches!(
            diagonal_code(5, 3),
            Err(Error::DimensionTooSmall { needed: 6, .. })
        ));
        let d6 = diagonal_code(6, 3).unwrap();
        assert_eq!(d6.len(), 4);
        assert!(covers(&d6, 3).unwrap());
    }

    #[test]
    fn diagonal_covers_from_threshold() {
        for coradius in 0..=5 {
            for n in diagonal_threshold(coradius).max(1)..=20 {
                let d = diagonal_code(n, coradius).unwrap();
                assert_eq!(d.len() as u32, coradius + 1);
                let zeros: u32 = d.iter().map(|w| n - w.weight()).sum();
                assert_eq!(zeros, coradius * (coradius + 1) / 2);
                assert!(covers(&d, n - coradius).unwrap(), "n={n} coradius={coradius}");
            }
        }
    }

    #[test]
    fn direct_sum_examples() {
        let one = Code::new(1, [1u64]).unwrap();
        assert_eq!(direct_sum(&one, &one).unwrap().words(), &[Codeword(0b11)]);
        let d = diagonal_code(3, 2).unwrap();
        let dd = direct_sum(&d, &d).unwrap();
        assert_eq!(dd.len(), 9);
        assert_eq!(dd.radius(), Some(2));
        assert!(covers(&dd, 2).unwrap());
    }

    #[test]
    fn projection_examples() {
        let d = parse_words(3, &["111", "011", "100"]).unwrap();
        assert_eq!(project_code(&d, 2).unwrap(), parse_words(2, &["11", "01", "10"]).unwrap());
        assert_eq!(project_code(&d, 3).unwrap(), d);
        assert!(project_code(&d, 0).is_err());
    }

    #[test]
    fn semi_direct_examples() {
        let s = Code::new(1, [1u64]).unwrap().with_radius(1);
        let p = PatchedCode::patch(s.clone(), 1, rational::frac(1, 2)).unwrap();
        assert!(p.t.is_empty());
        let c = Code::new(1, [1u64]).unwrap().with_radius(1);
        let sum = semi_direct_sum(&p, &c).unwrap();
        assert_eq!(sum, Code::new(2, [0b01u64, 0b11]).unwrap().with_radius(1));
        assert!(covers(&sum, 1).unwrap());
        // Empty S, everything patched.
        let q = PatchedCode {
            n: 2,
            r: 1,
            s: Code::empty(2).unwrap(),
            t: Code::whole_cube(2).unwrap(),
            delta: rational::frac(1, 1),
        };
        assert!(q.is_valid().unwrap());
        let sum = semi_direct_sum(&q, &c).unwrap();
        assert_eq!(sum, direct_sum(&Code::whole_cube(2).unwrap(), &c).unwrap());
        assert!(matches!(
            semi_direct_sum(&q, &c.clone().with_radius(2)),
            Err(Error::RadiusMismatch { .. })
        ));
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu(4, 1), rational::frac(31, 5));
        for n in 1..10 {
            assert_eq!(nu(n, 0), rational::pow2(n));
            assert!(nu(n, n) < rational::pow2(n));
        }
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(estimate_alpha(1, 1), rational::frac(3, 4));
        let mut prev = estimate_alpha(2, 1);
        for cap in 2..=20 {
            let cur = estimate_alpha(2, cap);
            assert!(cur >= prev);
            prev = cur;
        }
        assert!(estimate_alpha(3, 40) > rational::from_u64(0));
    }

    #[test]
    fn greedy_examples() {
        let g = greedy_code(3, 1).unwrap();
        assert_eq!(g.len(), 3);
        assert!(covers(&g, 1).unwrap());
        for n in 1..8 {
            assert_eq!(greedy_code(n, n).unwrap().words(), &[Codeword::top(n)]);
        }
        assert!(greedy_code(4, 1).unwrap().len() >= 6);
        assert_eq!(greedy_code(6, 2).unwrap(), greedy_code(6, 2).unwrap());
    }

    #[test]
    fn random_constructions_cover() {
        for seed in 0..5 {
            let c = random_code_nu(8, 2, seed).unwrap();
            assert!(covers(&c, 2).unwrap());
            assert_eq!(c, random_code_nu(8, 2, seed).unwrap());
        }
        let p = random_patched(6, 1, &rational::frac(1, 4), 3).unwrap();
        assert!(p.is_valid().unwrap());
        assert!(p.s.contains(Codeword::top(6)));
    }

    #[test]
    fn local_search_examples() {
        let c = local_search_code(12, 7, 7, 1, 200_000).unwrap().expect("a 7-word (12, 7) code");
        assert_eq!(c.len(), 7);
        assert!(covers(&c, 7).unwrap());
        // Below the coradius bound nothing can be found.
        assert!(local_search_code(12, 7, 6, 1, 20_000).unwrap().is_none());
        assert!(local_search_code(17, 1, 4, 0, 10).is_err());
        let a = local_search_code(6, 2, 8, 5, 100_000).unwrap();
        let b = local_search_code(6, 2, 8, 5, 100_000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn power2_examples() {
        let base = inductive_power2(0, 1, 0, 4).unwrap();
        assert_eq!(base.words(), &[Codeword(1)]);
        let c = inductive_power2(2, 1, 7, 32).unwrap();
        assert_eq!(c.n(), 4);
        assert!(c.len() >= 6);
        assert!(covers(&c, 1).unwrap());
        let c3 = inductive_power2(3, 1, 11, 32).unwrap();
        assert!(covers(&c3, 1).unwrap());
        assert!((52..=128).contains(&c3.len()), "size {}", c3.len());
        assert!(inductive_power2(5, 1, 0, 1).is_err());
    }

    #[test]
    fn general_examples() {
        let g = general_upper_code(6, 3).unwrap();
        assert_eq!(g.len(), 4);
        for n in 1..12 {
            assert_eq!(general_upper_code(n, 1).unwrap().len(), 2);
        }
        let g = general_upper_code(12, 6).unwrap();
        assert!(g.len() <= 16);
        assert!(covers(&g, 6).unwrap());
        // The (5, 2) cell needs 5 words, so a 4-word projection cannot work.
        let g = general_upper_code(5, 3).unwrap();
        assert!(covers(&g, 2).unwrap());
        assert!(g.len() >= 5);
    }

    #[test]
    fn general_respects_closed_form() {
        for n in 1..=14 {
            for coradius in 1..=n {
                let code = general_upper_code(n, coradius).unwrap();
                assert!(covers(&code, n - coradius).unwrap());
                assert_eq!(code.len() as u128, general_upper_size(n, coradius));
                let size = rational::from_u64(code.len() as u64);
                if n <= 13 {
                    assert!(size <= general_upper_formula(n, coradius), "n={n} coradius={coradius}");
                }
            }
        }
        // Diagonal blocks alone miss the closed form once R is small against n.
        assert_eq!(general_upper_size(14, 12), 2304);
        assert!(rational::from_u64(2304) > general_upper_formula(14, 12));
        // λ = 1/2.
        assert!(general_upper_size(6, 3) <= 4);
        assert!(general_upper_size(12, 6) <= 16);
    }
}
