//! Lower and upper bounds on `K+(n, R)` and their propagation over a grid.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{
    diagonal_threshold, general_upper_size, greedy_code, local_search_code, random_code_nu,
    LOCAL_MAX_DIM, SAMPLE_MAX_DIM,
};
use crate::cube::{ball_size_down, binomial, check_dim};
use crate::error::{Error, Result};
use crate::exact::{exact_kplus, ExactLimits, ExactStatus, EXACT_MAX_DIM};
use crate::ip::{self, IP_MAX_DIM};
use crate::rational::{self, Rational};

/// Where a bound came from. The single letters follow the usual table legend;
/// the longer names mark the analytic sources.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    /// Diagonal code (upper).
    D,
    /// Covering integer program (lower).
    I,
    /// Exhaustive search.
    E,
    /// Zero-counting program with an extra constraint. Never produced here.
    M,
    /// Direct sum of smaller codes (upper).
    S,
    /// Greedy cover (upper).
    G,
    /// Asymmetric sphere-covering bound (lower).
    Sphere,
    /// Strict monotonicity in `n` or `R` (lower).
    Mono,
    /// Difference bound with the zero-counting program (lower).
    Diff,
    /// Coradius theorem (lower).
    Superdiag,
    /// Direct sum of diagonal codes (upper).
    General,
    /// Randomized construction (upper).
    Nu,
    /// Local search for a smaller code (upper).
    Local,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::D => "d",
            Tag::I => "i",
            Tag::E => "e",
            Tag::M => "m",
            Tag::S => "s",
            Tag::G => "g",
            Tag::Sphere => "sphere",
            Tag::Mono => "mono",
            Tag::Diff => "diff",
            Tag::Superdiag => "superdiag",
            Tag::General => "general",
            Tag::Nu => "nu",
            Tag::Local => "local",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub n: u32,
    pub r: u32,
    pub lower: u64,
    pub upper: u64,
    pub lower_tag: Tag,
    pub upper_tag: Tag,
    pub exact: bool,
}

impl BoundRecord {
    pub fn new(n: u32, r: u32, lower: (u64, Tag), upper: (u64, Tag)) -> BoundRecord {
        BoundRecord {
            n,
            r,
            lower: lower.0,
            upper: upper.0,
            lower_tag: lower.1,
            upper_tag: upper.1,
            exact: lower.0 == upper.0,
        }
    }

    /// `K+(n, R) = 1` for `R >= n`.
    pub fn trivial(n: u32, r: u32) -> BoundRecord {
        BoundRecord::new(n, r, (1, Tag::Superdiag), (1, Tag::D))
    }

    fn check(&self) -> Result<()> {
        if self.lower > self.upper {
            return Err(Error::InconsistentGrid {
                n: self.n,
                r: self.r,
                lower: self.lower,
                upper: self.upper,
            });
        }
        Ok(())
    }

    fn raise_lower(&mut self, v: u64, tag: Tag) -> bool {
        if v > self.lower {
            self.lower = v;
            self.lower_tag = tag;
            self.exact = self.lower == self.upper;
            true
        } else {
            false
        }
    }

    fn lower_upper(&mut self, v: u64, tag: Tag) -> bool {
        if v < self.upper {
            self.upper = v;
            self.upper_tag = tag;
            self.exact = self.lower == self.upper;
            true
        } else {
            false
        }
    }

    /// `"v"` when exact, else `"lower-upper"`.
    pub fn value_text(&self) -> String {
        if self.exact {
            self.lower.to_string()
        } else {
            format!("{}-{}", self.lower, self.upper)
        }
    }

    /// `"v[lt/ut]"` or `"a-b[lt/ut]"`.
    pub fn cell_text(&self) -> String {
        format!("{}[{}/{}]", self.value_text(), self.lower_tag, self.upper_tag)
    }
}

/// `⌈2^n / Σ_{j<=R} C(n, j)⌉`, the sphere-covering bound for ordinary
/// (undirected) covering codes.
pub fn sphere_bound_symmetric(n: u32, r: u32) -> u64 {
    let ball: u64 = (0..=r.min(n)).map(|j| binomial(n as i64, j as i64)).sum();
    (1u64 << n).div_ceil(ball)
}

/// `⌈Σ_l C(n, l) / Σ_{j<=R} C(min(n, l + R), j)⌉`, summed exactly.
pub fn asym_sphere_bound(n: u32, r: u32) -> u64 {
    rational::ceil_u64(&asym_sphere_sum(n, r))
}

pub fn asym_sphere_sum(n: u32, r: u32) -> Rational {
    rational::sum((0..=n).map(|l| {
        let top = n.min(l + r);
        rational::frac(binomial(n as i64, l as i64), ball_size_down(n, top, r))
    }))
}

/// Lower bound from the coradius theorem: `R̄ + 1` when `n >= R̄(R̄+1)/2`
/// (where it is exact), `R̄ + 2` below that threshold.
pub fn superdiag_lower(n: u32, r: u32) -> u64 {
    let coradius = n.saturating_sub(r);
    if n >= diagonal_threshold(coradius) {
        coradius as u64 + 1
    } else {
        coradius as u64 + 2
    }
}

/// Size of the best direct sum of diagonal codes with the given coradius.
pub fn general_upper_value(n: u32, coradius: u32) -> u64 {
    general_upper_size(n, coradius).min(u64::MAX as u128) as u64
}

/// `lower_prev + ⌈phi_lb / n⌉`: contracting a minimal code at the coordinate
/// holding the most zeros leaves a code for `n - 1`.
pub fn diff_lower(n: u32, _r: u32, lower_prev: u64, phi_lb: u64) -> u64 {
    lower_prev + phi_lb.div_ceil(n as u64)
}

/// Bound records keyed by `(n, R)` with `R <= n`, plus the best known lower
/// bound on the zero count of a minimal code for each cell.
#[derive(Clone, Debug, Default)]
pub struct Grid {
    pub cells: BTreeMap<(u32, u32), BoundRecord>,
    pub phi: BTreeMap<(u32, u32), u64>,
}

impl Grid {
    pub fn get(&self, n: u32, r: u32) -> Option<&BoundRecord> {
        self.cells.get(&(n, r))
    }

    /// Record for any `(n, R)`, synthesizing the trivial `R >= n` cells.
    pub fn lookup(&self, n: u32, r: u32) -> Option<BoundRecord> {
        if r >= n {
            Some(BoundRecord::trivial(n, r))
        } else {
            self.get(n, r).cloned()
        }
    }

    pub fn insert(&mut self, rec: BoundRecord) {
        self.cells.insert((rec.n, rec.r), rec);
    }

    fn upper_of(&self, n: u32, r: u32) -> Option<u64> {
        if r >= n {
            Some(1)
        } else if r == 0 && n < 64 {
            Some(self.get(n, r).map_or(1u64 << n, |c| c.upper.min(1u64 << n)))
        } else {
            self.get(n, r).map(|c| c.upper)
        }
    }

    /// Merges `other`, keeping the strictly better side of every bound.
    pub fn merge(&mut self, other: &Grid) {
        for (key, rec) in &other.cells {
            match self.cells.get_mut(key) {
                None => {
                    self.cells.insert(*key, rec.clone());
                }
                Some(cur) => {
                    cur.raise_lower(rec.lower, rec.lower_tag);
                    cur.lower_upper(rec.upper, rec.upper_tag);
                }
            }
        }
        for (key, &v) in &other.phi {
            let e = self.phi.entry(*key).or_insert(v);
            *e = (*e).max(v);
        }
    }
}

/// Tightens the grid to a fixed point of:
/// `lower(n, R) >= lower(n-1, R) + max(1, ⌈φ(n, R) / n⌉)` for `R < n`,
/// `lower(n, R) >= lower(n, R+1) + 1` for `R < n`,
/// `upper(n, R) <= upper(n1, R1) * upper(n - n1, R - R1)` over all splits.
/// Bounds only ever tighten; a cell with `lower > upper` is an error.
pub fn propagate(grid: &mut Grid) -> Result<()> {
    let keys: Vec<(u32, u32)> = {
        let mut k: Vec<_> = grid.cells.keys().copied().collect();
        k.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        k
    };
    loop {
        let mut changed = false;
        for &(n, r) in &keys {
            let mut rec = grid.cells[&(n, r)].clone();
            if r < n {
                if let Some(prev) = grid.lookup(n - 1, r) {
                    let phi = grid.phi.get(&(n, r)).copied().unwrap_or(0);
                    let step = phi.div_ceil(n as u64).max(1);
                    let tag = if step > 1 { Tag::Diff } else { Tag::Mono };
                    changed |= rec.raise_lower(prev.lower + step, tag);
                }
                if let Some(next) = grid.lookup(n, r + 1) {
                    changed |= rec.raise_lower(next.lower + 1, Tag::Mono);
                }
            }
            for n1 in 1..n {
                for r1 in 0..=r {
                    if let (Some(a), Some(b)) = (grid.upper_of(n1, r1), grid.upper_of(n - n1, r - r1)) {
                        changed |= rec.lower_upper(a.saturating_mul(b), Tag::S);
                    }
                }
            }
            rec.check()?;
            grid.cells.insert((n, r), rec);
        }
        if !changed {
            return Ok(());
        }
    }
}

/// Which bound sources to run, and how hard.
#[derive(Clone, Debug)]
pub struct Budget {
    pub ip: bool,
    pub ip_node_limit: u64,
    pub greedy: bool,
    pub greedy_max_n: u32,
    /// Seeds of the randomized construction per cell; 0 disables it.
    pub nu_trials: u32,
    pub nu_max_n: u32,
    /// Moves per local-search attempt; 0 disables it.
    pub local_steps: u64,
    /// Largest code size local search tries to reach.
    pub local_max_size: u64,
    pub exact: bool,
    pub exact_max_n: u32,
    pub exact_limits: ExactLimits,
    pub seed: u64,
}

impl Budget {
    /// Closed-form sources only.
    pub fn analytic() -> Budget {
        Budget {
            ip: false,
            ip_node_limit: ip::DEFAULT_NODE_LIMIT,
            greedy: false,
            greedy_max_n: 14,
            nu_trials: 0,
            nu_max_n: 12,
            local_steps: 0,
            local_max_size: 32,
            exact: false,
            exact_max_n: 6,
            exact_limits: ExactLimits::time(std::time::Duration::from_secs(600)),
            seed: 0,
        }
    }

    pub fn full() -> Budget {
        Budget {
            ip: true,
            greedy: true,
            nu_trials: 8,
            local_steps: 100_000,
            exact: true,
            ..Budget::analytic()
        }
    }
}

fn pick_max(cands: &[(u64, Tag)]) -> (u64, Tag) {
    let mut best = cands[0];
    for &c in &cands[1..] {
        if c.0 > best.0 {
            best = c;
        }
    }
    best
}

fn pick_min(cands: &[(u64, Tag)]) -> (u64, Tag) {
    let mut best = cands[0];
    for &c in &cands[1..] {
        if c.0 < best.0 {
            best = c;
        }
    }
    best
}

/// Bounds for one cell from its own sources, before any propagation.
/// Returns the record and a lower bound on the zero count of minimal codes.
pub fn local_bounds(n: u32, r: u32, budget: &Budget) -> Result<(BoundRecord, u64)> {
    check_dim(n)?;
    if r >= n {
        return Ok((BoundRecord::trivial(n, r), 0));
    }
    let coradius = n - r;
    // Ties keep the earlier source.
    let mut lowers = vec![(superdiag_lower(n, r), Tag::Superdiag)];
    let mut uppers = Vec::new();
    if n >= diagonal_threshold(coradius) {
        uppers.push((coradius as u64 + 1, Tag::D));
    }
    let mut phi = 1u64;
    if budget.ip && n <= IP_MAX_DIM {
        match ip::ip_plus_limited(n, r, budget.ip_node_limit) {
            Ok(sol) => lowers.push((sol.value, Tag::I)),
            Err(Error::BudgetExceeded { .. }) => log::warn!("IP+({n},{r}) over node budget"),
            Err(e) => return Err(e),
        }
        if r >= 1 {
            match ip::ip_phi_limited(n, r, budget.ip_node_limit) {
                Ok(sol) => phi = phi.max(sol.value),
                Err(Error::BudgetExceeded { .. }) => log::warn!("IP_phi({n},{r}) over node budget"),
                Err(e) => return Err(e),
            }
        }
    }
    if budget.exact && n <= budget.exact_max_n.min(EXACT_MAX_DIM) {
        let res = exact_kplus(n, r, budget.exact_limits)?;
        lowers.push((res.lower, Tag::E));
        uppers.push((res.upper, Tag::E));
        if res.status == ExactStatus::Bracket {
            log::warn!("exact search for ({n},{r}) stopped at bracket {}-{}", res.lower, res.upper);
        }
    }
    lowers.push((asym_sphere_bound(n, r), Tag::Sphere));
    if budget.greedy && n <= budget.greedy_max_n.min(SAMPLE_MAX_DIM) {
        uppers.push((greedy_code(n, r)?.len() as u64, Tag::G));
    }
    if budget.nu_trials > 0 && r >= 1 && n <= budget.nu_max_n.min(SAMPLE_MAX_DIM) {
        let mut best = u64::MAX;
        for t in 0..budget.nu_trials {
            let seed = budget.seed.wrapping_add(t as u64);
            best = best.min(random_code_nu(n, r, seed)?.len() as u64);
        }
        uppers.push((best, Tag::Nu));
    }
    uppers.push((general_upper_value(n, coradius), Tag::General));
    if budget.local_steps > 0 && n <= LOCAL_MAX_DIM {
        let lower = pick_max(&lowers).0;
        let mut upper = pick_min(&uppers).0;
        let seed = budget.seed.wrapping_add(((n as u64) << 8) | r as u64);
        while upper > lower && upper - 1 <= budget.local_max_size {
            match local_search_code(n, r, (upper - 1) as usize, seed, budget.local_steps)? {
                Some(code) => {
                    upper = code.len() as u64;
                    uppers.push((upper, Tag::Local));
                }
                None => break,
            }
        }
    }
    let rec = BoundRecord::new(n, r, pick_max(&lowers), pick_min(&uppers));
    rec.check()?;
    Ok((rec, phi))
}

/// Every cell `(n', R')` with `1 <= n' <= max_n`, `R' <= n'`, filled from
/// local sources (in parallel), merged with `seed` and propagated. Cells that
/// `seed` already marks exact are not recomputed.
pub fn fill_grid(max_n: u32, budget: &Budget, seed: Option<&Grid>) -> Result<Grid> {
    check_dim(max_n)?;
    let keys: Vec<(u32, u32)> = (1..=max_n).flat_map(|n| (0..=n).map(move |r| (n, r))).collect();
    let computed: Vec<Option<(BoundRecord, u64)>> = keys
        .par_iter()
        .map(|&(n, r)| {
            if let Some(rec) = seed.and_then(|g| g.get(n, r)) {
                if rec.exact {
                    return Ok(None);
                }
            }
            local_bounds(n, r, budget).map(Some)
        })
        .collect::<Result<_>>()?;
    let mut grid = Grid::default();
    for (key, item) in keys.iter().zip(computed) {
        if let Some((rec, phi)) = item {
            grid.cells.insert(*key, rec);
            grid.phi.insert(*key, phi);
        }
    }
    if let Some(seed) = seed {
        let mut restricted = seed.clone();
        restricted.cells.retain(|k, _| k.0 <= max_n && k.1 <= k.0);
        grid.merge(&restricted);
    }
    propagate(&mut grid)?;
    Ok(grid)
}

/// Best bracket for one cell: fills the grid of all smaller cells with the
/// budgeted sources and propagates.
pub fn best_bounds(n: u32, r: u32, budget: &Budget) -> Result<BoundRecord> {
    check_dim(n)?;
    if r >= n {
        return Ok(BoundRecord::trivial(n, r));
    }
    let grid = fill_grid(n, budget, None)?;
    Ok(grid.get(n, r).expect("cell inside grid").clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_examples() {
        assert_eq!(sphere_bound_symmetric(4, 1), 4);
        for n in 1..20 {
            assert_eq!(sphere_bound_symmetric(n, 0), 1 << n);
            assert_eq!(sphere_bound_symmetric(n, n), 1);
        }
    }

    #[test]
    fn asym_sphere_examples() {
        // 1/2 + 4/3 + 3/2 + 4/5 + 1/5
        assert_eq!(asym_sphere_sum(4, 1), rational::frac(13, 3));
        assert_eq!(asym_sphere_bound(4, 1), 5);
        for n in 1..16 {
            assert_eq!(asym_sphere_bound(n, 0), 1 << n);
        }
        assert_eq!(asym_sphere_bound(6, 2), 5);
        for n in 1..=14 {
            for r in 0..=n {
                let ball_top = ball_size_down(n, n, r);
                assert!(asym_sphere_bound(n, r) >= (1u64 << n).div_ceil(ball_top));
            }
        }
    }

    #[test]
    fn superdiag_examples() {
        assert_eq!(superdiag_lower(6, 3), 4);
        assert_eq!(superdiag_lower(5, 2), 5);
        for n in 1..20 {
            assert_eq!(superdiag_lower(n, n), 1);
        }
    }

    #[test]
    fn general_examples() {
        assert_eq!(general_upper_value(6, 3), 4);
        assert_eq!(general_upper_value(12, 6), 16);
        for n in 1..30 {
            assert_eq!(general_upper_value(n, 1), 2);
        }
    }

    #[test]
    fn diff_examples() {
        assert_eq!(diff_lower(2, 1, 1, 1), 2);
        assert_eq!(diff_lower(7, 1, 18, 0), 18);
        for phi in 1..50 {
            assert!(diff_lower(7, 2, 10, phi) >= 11);
        }
    }

    fn seeded_grid(max_n: u32) -> Grid {
        let mut g = Grid::default();
        for n in 1..=max_n {
            for r in 0..=n {
                let lower = superdiag_lower(n, r);
                let coradius = n - r;
                let upper = if n >= diagonal_threshold(coradius) {
                    coradius as u64 + 1
                } else {
                    general_upper_value(n, coradius)
                };
                g.insert(BoundRecord::new(n, r, (lower, Tag::Superdiag), (upper, Tag::General)));
            }
        }
        g
    }

    #[test]
    fn propagation_examples() {
        let mut g = seeded_grid(13);
        propagate(&mut g).unwrap();
        assert!(g.get(13, 8).unwrap().lower >= 7);
        let u12 = g.get(12, 1).unwrap().upper;
        assert!(g.get(13, 1).unwrap().upper <= 2 * u12);
        let snapshot = g.cells.clone();
        propagate(&mut g).unwrap();
        assert_eq!(g.cells, snapshot);
    }

    #[test]
    fn propagation_detects_conflicts() {
        let mut g = Grid::default();
        g.insert(BoundRecord::new(3, 1, (3, Tag::I), (3, Tag::D)));
        g.insert(BoundRecord::new(4, 1, (2, Tag::I), (2, Tag::G)));
        assert!(matches!(propagate(&mut g), Err(Error::InconsistentGrid { .. })));
    }

    #[test]
    fn best_bounds_examples() {
        let rec = best_bounds(6, 3, &Budget::analytic()).unwrap();
        assert_eq!((rec.lower, rec.upper), (4, 4));
        assert_eq!((rec.lower_tag, rec.upper_tag), (Tag::Superdiag, Tag::D));
        let budget = Budget {
            ip: true,
            exact: true,
            ..Budget::analytic()
        };
        let rec = best_bounds(4, 1, &budget).unwrap();
        assert!(rec.exact);
        assert_eq!(rec.lower, 6);
        assert_eq!((rec.lower_tag, rec.upper_tag), (Tag::I, Tag::E));
        let rec = best_bounds(8, 2, &Budget::analytic()).unwrap();
        assert!(rec.lower >= asym_sphere_bound(8, 2));
        assert!(rec.upper <= general_upper_value(8, 6));
        assert!(rec.lower <= 20 && rec.upper >= 25);
        assert_eq!(best_bounds(1, 1, &Budget::analytic()).unwrap().value_text(), "1");
    }
}
