//! Exact solver for the level-profile covering integer programs.
//!
//! Variables `a_0..a_n` count codewords per weight. Row `l` requires
//! `Σ_{j=0..R} C(l+j, j) a_{l+j} >= C(n, l)`: the weight-`l` vertices are
//! covered either by themselves or by codewords up to `R` levels higher.
//! Every code's level profile is feasible, so the optimum of `Σ a_l` is a
//! lower bound on `K+(n, R)` and the optimum of `Σ (n - l) a_l` is a lower
//! bound on the number of zeros in any code.
//!
//! The search fixes `a_n, a_{n-1}, ...` in that order. Once `a_l` is being
//! chosen every other variable in row `l` is fixed, so row `l` gives a hard
//! minimum for `a_l`. Pruning uses a dual-feasible fractional bound on the
//! rows that are still open.

use std::fmt::Write as _;

use crate::cube::{ball_size_down, binomial, check_dim, LevelProfile};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub const IP_MAX_DIM: u32 = 40;
pub const DEFAULT_NODE_LIMIT: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    /// `Σ a_l`, the code size.
    Size,
    /// `Σ (n - l) a_l`, the total number of zeros.
    Zeros,
}

#[derive(Clone, Debug)]
pub struct CoveringIP {
    pub n: u32,
    pub r: u32,
    pub objective: Vec<u64>,
    /// `upper[l] = C(n, l)`: a code has at most that many weight-`l` words.
    pub upper: Vec<u64>,
    rhs: Vec<u64>,
    // ball_down[k] = Σ_{j<=R} C(k, j), the column sum of variable k.
    ball_down: Vec<u64>,
}

impl CoveringIP {
    pub fn new(n: u32, r: u32, objective: Objective) -> Result<CoveringIP> {
        check_dim(n)?;
        if n > IP_MAX_DIM {
            return Err(Error::CapExceeded {
                what: "IP dimension",
                value: n as u64,
                cap: IP_MAX_DIM as u64,
            });
        }
        let objective = (0..=n)
            .map(|l| match objective {
                Objective::Size => 1,
                Objective::Zeros => (n - l) as u64,
            })
            .collect();
        let rhs: Vec<u64> = (0..=n).map(|l| binomial(n as i64, l as i64)).collect();
        Ok(CoveringIP {
            n,
            r,
            objective,
            upper: rhs.clone(),
            rhs,
            ball_down: (0..=n).map(|k| ball_size_down(n, k, r)).collect(),
        })
    }

    /// Coefficient of `a_var` in row `row`.
    pub fn coefficient(&self, row: u32, var: u32) -> u64 {
        if var < row || var - row > self.r || var > self.n {
            0
        } else {
            binomial(var as i64, (var - row) as i64)
        }
    }

    pub fn rhs(&self, row: u32) -> u64 {
        self.rhs[row as usize]
    }

    pub fn objective_value(&self, a: &[u64]) -> u64 {
        a.iter().zip(&self.objective).map(|(x, c)| x * c).sum()
    }

    /// Checks every row and the variable upper bounds.
    pub fn is_feasible(&self, a: &[u64]) -> bool {
        if a.len() != self.n as usize + 1 {
            return false;
        }
        if a.iter().zip(&self.upper).any(|(x, u)| x > u) {
            return false;
        }
        (0..=self.n).all(|l| {
            let lhs: u128 = (l..=self.n.min(l + self.r))
                .map(|i| self.coefficient(l, i) as u128 * a[i as usize] as u128)
                .sum();
            lhs >= self.rhs[l as usize] as u128
        })
    }

    /// The constraint matrix as CSV: one line per row, coefficients of
    /// `a_0..a_n`, then the right-hand side.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (0..=self.n).map(|i| format!("a{i}")).collect();
        let _ = writeln!(out, "row,{},rhs", header.join(","));
        for l in 0..=self.n {
            let coeffs: Vec<String> = (0..=self.n)
                .map(|i| self.coefficient(l, i).to_string())
                .collect();
            let _ = writeln!(out, "{l},{},{}", coeffs.join(","), self.rhs[l as usize]);
        }
        out
    }

    // Dual weight of row l when the free variables are a_0..a_{free_top}.
    fn dual_weight(&self, l: u32, free_top: u32) -> Rational {
        (l..=free_top.min(l + self.r))
            .map(|k| rational::frac(self.objective[k as usize], self.ball_down[k as usize]))
            .min()
            .expect("row has at least one free variable")
    }

    fn dual_weight_f64(&self, l: u32, free_top: u32) -> f64 {
        (l..=free_top.min(l + self.r))
            .map(|k| self.objective[k as usize] as f64 / self.ball_down[k as usize] as f64)
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IPSolution {
    pub value: u64,
    pub profile: LevelProfile,
    pub node_count: u64,
}

/// Lower bound on the optimum over completions of a partial assignment.
///
/// `fixed` holds values for `a_n, a_{n-1}, ...` in that order. Returns `None`
/// when a row whose variables are all fixed is violated (no completion
/// exists). The bound is the fixed cost plus a dual-feasible weighting of the
/// residual open rows, so it never exceeds the true optimum.
pub fn lp_relax_lower(ip: &CoveringIP, fixed: &[u64]) -> Option<Rational> {
    let n = ip.n;
    assert!(fixed.len() <= n as usize + 1);
    let mut a = vec![0u64; n as usize + 1];
    for (t, &v) in fixed.iter().enumerate() {
        a[n as usize - t] = v;
    }
    let first_fixed = n + 1 - fixed.len() as u32;
    let residual = |l: u32| -> i128 {
        let covered: i128 = (l.max(first_fixed)..=n.min(l + ip.r))
            .map(|i| ip.coefficient(l, i) as i128 * a[i as usize] as i128)
            .sum();
        ip.rhs[l as usize] as i128 - covered
    };
    if (first_fixed..=n).any(|l| residual(l) > 0) {
        return None;
    }
    let cost = rational::from_u64(ip.objective_value(&a));
    if first_fixed == 0 {
        return Some(cost);
    }
    let free_top = first_fixed - 1;
    let bound = rational::sum((0..first_fixed).filter_map(|l| {
        let res = residual(l);
        (res > 0).then(|| rational::from_u64(res as u64) * ip.dual_weight(l, free_top))
    }));
    Some(cost + bound)
}

struct Search<'a> {
    ip: &'a CoveringIP,
    a: Vec<u64>,
    // residual[l] = rhs[l] minus contributions of fixed variables.
    residual: Vec<i128>,
    best: u64,
    best_a: Vec<u64>,
    nodes: u64,
    node_limit: u64,
}

impl Search<'_> {
    // Whether completing the current state below `level` must cost at least
    // `target` more. `level` is the highest free variable.
    fn bound_reaches(&self, level: u32, target: u64) -> bool {
        let ip = self.ip;
        let approx: f64 = (0..=level)
            .filter(|&l| self.residual[l as usize] > 0)
            .map(|l| self.residual[l as usize] as f64 * ip.dual_weight_f64(l, level))
            .sum();
        // Remaining cost is an integer >= ceil(bound), so it reaches `target`
        // iff bound > target - 1.
        let threshold = target as f64 - 1.0;
        let slack = 1e-7 * threshold.abs().max(1.0);
        if approx > threshold + slack {
            return true;
        }
        if approx < threshold - slack {
            return false;
        }
        let exact = rational::sum((0..=level).filter_map(|l| {
            let res = self.residual[l as usize];
            (res > 0).then(|| rational::from_u64(res as u64) * ip.dual_weight(l, level))
        }));
        exact > Rational::from_integer((target as i64 - 1).into())
    }

    fn dfs(&mut self, level: i64, cost: u64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            return Err(Error::BudgetExceeded { nodes: self.nodes });
        }
        if level < 0 {
            if cost < self.best {
                self.best = cost;
                self.best_a = self.a.clone();
            }
            return Ok(());
        }
        let i = level as u32;
        let ip = self.ip;
        let c = ip.objective[i as usize];
        let need = self.residual[i as usize].max(0) as u64;
        // Beyond this value a_i no longer helps any open row.
        let mut useful = need;
        for l in i.saturating_sub(ip.r)..i {
            let res = self.residual[l as usize];
            if res > 0 {
                let coef = ip.coefficient(l, i);
                useful = useful.max((res as u64).div_ceil(coef));
            }
        }
        let hi = useful.min(ip.upper[i as usize]);
        if need > hi {
            return Ok(());
        }
        let lo_rows = i.saturating_sub(ip.r);
        let coefs: Vec<i128> = (lo_rows..i).map(|l| ip.coefficient(l, i) as i128).collect();
        for (k, l) in (lo_rows..i).enumerate() {
            self.residual[l as usize] -= coefs[k] * need as i128;
        }
        let mut v = need;
        loop {
            let spent = cost + c * v;
            if spent >= self.best {
                break;
            }
            let prune = i > 0 && self.bound_reaches(i - 1, self.best - spent);
            if !prune {
                self.a[i as usize] = v;
                let r = self.dfs(level - 1, spent);
                self.a[i as usize] = 0;
                if let Err(e) = r {
                    for (k, l) in (lo_rows..i).enumerate() {
                        self.residual[l as usize] += coefs[k] * v as i128;
                    }
                    return Err(e);
                }
            }
            if v == hi {
                break;
            }
            v += 1;
            for (k, l) in (lo_rows..i).enumerate() {
                self.residual[l as usize] -= coefs[k];
            }
        }
        for (k, l) in (lo_rows..i).enumerate() {
            self.residual[l as usize] += coefs[k] * v as i128;
        }
        Ok(())
    }
}

/// Top-down assignment taking the minimum each row forces. Always feasible.
fn lazy_solution(ip: &CoveringIP) -> Vec<u64> {
    let n = ip.n;
    let mut a = vec![0u64; n as usize + 1];
    for l in (0..=n).rev() {
        let covered: u64 = (l + 1..=n.min(l + ip.r))
            .map(|i| ip.coefficient(l, i) * a[i as usize])
            .sum();
        a[l as usize] = ip.rhs[l as usize].saturating_sub(covered);
    }
    a
}

pub fn solve(ip: &CoveringIP, node_limit: u64) -> Result<IPSolution> {
    let start = lazy_solution(ip);
    let mut search = Search {
        ip,
        a: vec![0; ip.n as usize + 1],
        residual: ip.rhs.iter().map(|&b| b as i128).collect(),
        best: ip.objective_value(&start) + 1,
        best_a: start.clone(),
        nodes: 0,
        node_limit,
    };
    search.dfs(ip.n as i64, 0)?;
    let (value, a) = if search.best <= ip.objective_value(&start) {
        (search.best, search.best_a)
    } else {
        (ip.objective_value(&start), start)
    };
    debug_assert!(ip.is_feasible(&a));
    Ok(IPSolution {
        value,
        profile: LevelProfile { counts: a },
        node_count: search.nodes,
    })
}

/// `IP+(n, R)`: minimum code size allowed by the level constraints.
pub fn ip_plus(n: u32, r: u32) -> Result<IPSolution> {
    ip_plus_limited(n, r, DEFAULT_NODE_LIMIT)
}

pub fn ip_plus_limited(n: u32, r: u32, node_limit: u64) -> Result<IPSolution> {
    solve(&CoveringIP::new(n, r, Objective::Size)?, node_limit)
}

/// `IP_φ+(n, R)`: minimum total number of zeros allowed by the level constraints.
pub fn ip_phi(n: u32, r: u32) -> Result<IPSolution> {
    ip_phi_limited(n, r, DEFAULT_NODE_LIMIT)
}

pub fn ip_phi_limited(n: u32, r: u32, node_limit: u64) -> Result<IPSolution> {
    solve(&CoveringIP::new(n, r, Objective::Zeros)?, node_limit)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Exhaustive minimum over 0 <= a_l <= C(n, l).
    fn brute_force(ip: &CoveringIP) -> u64 {
        let n = ip.n as usize;
        let mut a = vec![0u64; n + 1];
        let mut best = u64::MAX;
        loop {
            if ip.is_feasible(&a) {
                best = best.min(ip.objective_value(&a));
            }
            let mut k = 0;
            loop {
                if k > n {
                    return best;
                }
                if a[k] < ip.upper[k] {
                    a[k] += 1;
                    break;
                }
                a[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn brute_force_agrees_small() {
        for n in 1..=5 {
            for r in 0..=n {
                for obj in [Objective::Size, Objective::Zeros] {
                    let ip = CoveringIP::new(n, r, obj).unwrap();
                    let sol = solve(&ip, DEFAULT_NODE_LIMIT).unwrap();
                    assert_eq!(sol.value, brute_force(&ip), "n={n} r={r} {obj:?}");
                    assert!(ip.is_feasible(&sol.profile.counts));
                    assert_eq!(ip.objective_value(&sol.profile.counts), sol.value);
                }
            }
        }
    }

    #[test]
    fn known_values() {
        let s = ip_plus(4, 1).unwrap();
        assert_eq!(s.value, 6);
        let ip = CoveringIP::new(4, 1, Objective::Size).unwrap();
        assert!(ip.is_feasible(&[1, 0, 3, 1, 1]));
        assert_eq!(ip_plus(7, 3).unwrap().value, 6);
        assert_eq!(ip_plus(8, 3).unwrap().value, 9);
        assert_eq!(ip_phi(2, 1).unwrap().value, 1);
        assert!(ip_phi(4, 1).unwrap().value >= 1);
        for n in 1..10 {
            assert_eq!(ip_phi(n, n).unwrap().value, 0);
            assert_eq!(ip_plus(n, n).unwrap().value, 1);
        }
    }

    #[test]
    fn relaxation_is_admissible_and_monotone() {
        let ip = CoveringIP::new(4, 1, Objective::Size).unwrap();
        let root = lp_relax_lower(&ip, &[]).unwrap();
        assert!(root <= rational::from_u64(6));
        // a = (1,0,3,1,1) fixed top-down.
        let full = [1u64, 1, 3, 0, 1];
        assert_eq!(lp_relax_lower(&ip, &full), Some(rational::from_u64(6)));
        let mut prev = root;
        for k in 1..=full.len() {
            let b = lp_relax_lower(&ip, &full[..k]).unwrap();
            assert!(b >= prev);
            prev = b;
        }
        assert_eq!(lp_relax_lower(&ip, &[0]), None);
    }

    #[test]
    fn node_limit_is_reported() {
        assert!(matches!(
            ip_plus_limited(12, 2, 3),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn csv_dump_shape() {
        let csv = CoveringIP::new(3, 1, Objective::Size).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "row,a0,a1,a2,a3,rhs");
        assert_eq!(lines[1], "0,1,1,0,0,1");
        assert_eq!(lines[3], "2,0,0,1,3,3");
    }
}
