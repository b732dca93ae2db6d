//! Exact `K+(n, R)` for small `n` by branch and bound over downward balls.
//!
//! Vertex sets are `u128` masks, which is what caps the dimension at 7. The
//! search runs iterative deepening on the code size: each round asks whether
//! a cover with at most `k` balls exists, starting from the best available
//! lower bound and stopping at the greedy upper bound. A refuted round raises
//! the proven lower bound, so an interrupted run still returns a valid
//! bracket.
//!
//! Within a round the search branches on the uncovered vertex with the fewest
//! remaining candidate centers, discards candidates whose remaining coverage
//! is contained in another candidate's, and excludes each tried candidate from
//! its later siblings. Two bounds prune a node: the fractional bound
//! `Σ_v 1 / max gain over v's candidates` and a packing of uncovered vertices
//! with pairwise disjoint candidate sets.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bounds::asym_sphere_bound;
use crate::constructions::greedy_code;
use crate::cube::{covers, for_each_below, Code, Codeword};
use crate::error::{Error, Result};
use crate::ip;

pub const EXACT_MAX_DIM: u32 = 7;

#[derive(Clone, Copy, Debug, Default)]
pub struct ExactLimits {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
}

impl ExactLimits {
    pub fn unlimited() -> Self {
        ExactLimits::default()
    }

    pub fn time(limit: Duration) -> Self {
        ExactLimits {
            time_limit: Some(limit),
            node_limit: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExactStatus {
    Exact,
    Bracket,
}

#[derive(Clone, Debug)]
pub struct ExactResult {
    pub n: u32,
    pub r: u32,
    pub status: ExactStatus,
    /// Proven lower bound; equals `upper` when exact.
    pub lower: u64,
    /// Size of `witness`.
    pub upper: u64,
    pub witness: Code,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl ExactResult {
    pub fn value(&self) -> Option<u64> {
        (self.status == ExactStatus::Exact).then_some(self.upper)
    }
}

enum Outcome {
    Found,
    Refuted,
    Aborted,
}

struct Searcher {
    size: usize,
    ball: Vec<u128>,
    cands: Vec<u128>,
    chosen: Vec<u8>,
    nodes: u64,
    start: Instant,
    limits: ExactLimits,
    aborted: bool,
}

#[inline]
fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

impl Searcher {
    fn new(n: u32, r: u32, limits: ExactLimits) -> Searcher {
        let size = 1usize << n;
        let mut ball = vec![0u128; size];
        let mut cands = vec![0u128; size];
        for (c, slot) in ball.iter_mut().enumerate() {
            for_each_below(c as u64, r, |v| {
                *slot |= 1u128 << v;
                cands[v as usize] |= 1u128 << c;
            });
        }
        Searcher {
            size,
            ball,
            cands,
            chosen: Vec::new(),
            nodes: 0,
            start: Instant::now(),
            limits,
            aborted: false,
        }
    }

    fn over_budget(&mut self) -> bool {
        if let Some(max) = self.limits.node_limit {
            if self.nodes >= max {
                return true;
            }
        }
        if let Some(t) = self.limits.time_limit {
            if self.nodes.is_multiple_of(4096) && self.start.elapsed() >= t {
                return true;
            }
        }
        false
    }

    fn universe(&self) -> u128 {
        if self.size == 128 {
            u128::MAX
        } else {
            (1u128 << self.size) - 1
        }
    }

    // Lower bound on the number of balls needed to cover `unc` using centers
    // outside `excl`; None when some vertex has no candidate left.
    fn lower_bound(&self, unc: u128, excl: u128) -> Option<u32> {
        let mut gain = [0u32; 128];
        let live = !excl & self.universe();
        for c in bits(live) {
            gain[c] = (self.ball[c] & unc).count_ones();
        }
        let mut frac = 0.0f64;
        for v in bits(unc) {
            let best = bits(self.cands[v] & live).map(|c| gain[c]).max()?;
            frac += 1.0 / best as f64;
        }
        let frac_bound = (frac - 1e-9).ceil().max(0.0) as u32;

        let mut order: Vec<(u32, usize)> = bits(unc)
            .map(|v| ((self.cands[v] & live).count_ones(), v))
            .collect();
        order.sort_unstable();
        let mut used = 0u128;
        let mut packing = 0u32;
        for &(_, v) in &order {
            let a = self.cands[v] & live;
            if a & used == 0 {
                used |= a;
                packing += 1;
            }
        }
        Some(frac_bound.max(packing))
    }

    fn dfs(&mut self, unc: u128, excl: u128, budget: u32) -> Outcome {
        if unc == 0 {
            return Outcome::Found;
        }
        self.nodes += 1;
        if self.over_budget() {
            self.aborted = true;
            return Outcome::Aborted;
        }
        if budget == 0 {
            return Outcome::Refuted;
        }
        let live = !excl & self.universe();
        // Fail-first: uncovered vertex with fewest live candidates.
        let mut pick = usize::MAX;
        let mut pick_count = u32::MAX;
        for v in bits(unc) {
            let cnt = (self.cands[v] & live).count_ones();
            if cnt < pick_count {
                pick_count = cnt;
                pick = v;
            }
        }
        if pick_count == 0 {
            return Outcome::Refuted;
        }
        match self.lower_bound(unc, excl) {
            Some(lb) if lb <= budget => {}
            _ => return Outcome::Refuted,
        }
        let options: Vec<usize> = bits(self.cands[pick] & live).collect();
        let cover: Vec<u128> = options.iter().map(|&c| self.ball[c] & unc).collect();
        let mut kept: Vec<(u32, usize, u128)> = Vec::with_capacity(options.len());
        for (i, &c) in options.iter().enumerate() {
            let dominated = options.iter().enumerate().any(|(j, &d)| {
                j != i && cover[i] & !cover[j] == 0 && (cover[i] != cover[j] || d < c)
            });
            if !dominated {
                kept.push((cover[i].count_ones(), c, cover[i]));
            }
        }
        kept.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut excl = excl;
        for &(_, c, cov) in &kept {
            self.chosen.push(c as u8);
            match self.dfs(unc & !cov, excl, budget - 1) {
                Outcome::Found => return Outcome::Found,
                Outcome::Aborted => {
                    self.chosen.pop();
                    return Outcome::Aborted;
                }
                Outcome::Refuted => {}
            }
            self.chosen.pop();
            excl |= 1u128 << c;
        }
        Outcome::Refuted
    }
}

/// Exact `K+(n, R)` for `1 <= n <= 7`. A budget hit returns a bracket whose
/// lower end is the largest size refuted so far plus one; an exact status is
/// only reported after every smaller size was refuted.
pub fn exact_kplus(n: u32, r: u32, limits: ExactLimits) -> Result<ExactResult> {
    if n == 0 || n > EXACT_MAX_DIM {
        return Err(Error::CapExceeded {
            what: "exact-search dimension",
            value: n as u64,
            cap: EXACT_MAX_DIM as u64,
        });
    }
    let start = Instant::now();
    let greedy = greedy_code(n, r.min(n))?.with_radius(r);
    let mut upper = greedy.len() as u64;
    let mut witness = greedy;

    let ip_lb = ip::ip_plus_limited(n, r.min(n), 10_000_000)
        .map(|s| s.value)
        .unwrap_or(0);
    let mut searcher = Searcher::new(n, r.min(n), limits);
    let root_lb = searcher
        .lower_bound(searcher.universe(), 0)
        .expect("every vertex covers itself") as u64;
    let mut lower = ip_lb.max(asym_sphere_bound(n, r.min(n))).max(root_lb).max(1);

    let mut status = ExactStatus::Exact;
    while lower < upper {
        let k = lower as u32;
        log::info!("exact n={n} R={r}: trying size {k} (upper {upper})");
        searcher.chosen.clear();
        match searcher.dfs(searcher.universe(), 0, k) {
            Outcome::Found => {
                let words: Vec<Codeword> =
                    searcher.chosen.iter().map(|&c| Codeword(c as u64)).collect();
                witness = Code::new(n, words)?.with_radius(r);
                upper = witness.len() as u64;
                log::info!(
                    "exact n={n} R={r}: found size {upper} after {} nodes",
                    searcher.nodes
                );
            }
            Outcome::Refuted => {
                lower += 1;
                log::info!(
                    "exact n={n} R={r}: size {k} refuted after {} nodes",
                    searcher.nodes
                );
            }
            Outcome::Aborted => {
                status = ExactStatus::Bracket;
                break;
            }
        }
    }
    if status == ExactStatus::Exact {
        lower = upper;
    }
    Ok(ExactResult {
        n,
        r,
        status,
        lower,
        upper,
        witness,
        nodes: searcher.nodes,
        elapsed: start.elapsed(),
    })
}

/// Re-checks an exact result without repeating the search: the witness
/// covers, has the claimed size, and the size is at least `IP+(n, R)`.
pub fn verify_optimal(result: &ExactResult) -> bool {
    if result.status != ExactStatus::Exact || result.lower != result.upper {
        return false;
    }
    if result.witness.len() as u64 != result.upper {
        return false;
    }
    if !covers(&result.witness, result.r).unwrap_or(false) {
        return false;
    }
    match ip::ip_plus(result.n, result.r.min(result.n)) {
        Ok(sol) => sol.value <= result.upper,
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(n: u32, r: u32) -> u64 {
        let res = exact_kplus(n, r, ExactLimits::unlimited()).unwrap();
        assert_eq!(res.status, ExactStatus::Exact);
        assert!(verify_optimal(&res));
        res.upper
    }

    #[test]
    fn small_values() {
        assert_eq!(value(1, 1), 1);
        assert_eq!(value(2, 1), 2);
        assert_eq!(value(3, 1), 3);
        assert_eq!(value(4, 1), 6);
        assert_eq!(value(5, 2), 5);
        assert_eq!(value(4, 0), 16);
    }

    #[test]
    fn tampered_witness_fails() {
        let mut res = exact_kplus(3, 1, ExactLimits::unlimited()).unwrap();
        assert!(verify_optimal(&res));
        let words: Vec<Codeword> = res.witness.iter().skip(1).collect();
        res.witness = Code::new(3, words).unwrap().with_radius(1);
        assert!(!verify_optimal(&res));
    }

    #[test]
    fn deterministic_witness() {
        let a = exact_kplus(5, 2, ExactLimits::unlimited()).unwrap();
        let b = exact_kplus(5, 2, ExactLimits::unlimited()).unwrap();
        assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn node_budget_gives_valid_bracket() {
        let res = exact_kplus(
            6,
            1,
            ExactLimits {
                node_limit: Some(50),
                time_limit: None,
            },
        )
        .unwrap();
        assert_eq!(res.status, ExactStatus::Bracket);
        assert!(res.lower <= 18 && 18 <= res.upper);
        assert!(covers(&res.witness, 1).unwrap());
    }

    #[test]
    fn rejects_large_dimension() {
        assert!(exact_kplus(8, 2, ExactLimits::unlimited()).is_err());
        assert!(exact_kplus(0, 0, ExactLimits::unlimited()).is_err());
    }
}
