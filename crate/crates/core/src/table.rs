//! The `K+(n, R)` bound table: filling, rendering and the on-disk cache.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bounds::{fill_grid, BoundRecord, Budget, Grid, Tag};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct TableSpec {
    pub n_range: RangeInclusive<u32>,
    pub r_range: RangeInclusive<u32>,
    pub budget: Budget,
    pub cache_path: Option<PathBuf>,
}

impl TableSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_range.is_empty() || self.r_range.is_empty() {
            return Err(Error::InvalidArgument("empty table range".into()));
        }
        if *self.n_range.start() == 0 {
            return Err(Error::InvalidArgument("table columns start at n = 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CacheEntry {
    lower: u64,
    upper: u64,
    lower_tag: Tag,
    upper_tag: Tag,
    exact: bool,
}

fn parse_key(key: &str) -> Result<(u32, u32)> {
    let bad = || Error::Parse(format!("bad cache key {key:?}"));
    let (n, r) = key.split_once(',').ok_or_else(bad)?;
    Ok((n.trim().parse().map_err(|_| bad())?, r.trim().parse().map_err(|_| bad())?))
}

/// Reads a bounds cache; a missing file is an empty grid.
pub fn load_cache(path: &Path) -> Result<Grid> {
    let mut grid = Grid::default();
    if !path.exists() {
        return Ok(grid);
    }
    let text = std::fs::read_to_string(path)?;
    let entries: BTreeMap<String, CacheEntry> = serde_json::from_str(&text)?;
    for (key, e) in entries {
        let (n, r) = parse_key(&key)?;
        if e.lower > e.upper || e.exact != (e.lower == e.upper) {
            return Err(Error::Parse(format!("inconsistent cache entry {key:?}")));
        }
        grid.insert(BoundRecord {
            n,
            r,
            lower: e.lower,
            upper: e.upper,
            lower_tag: e.lower_tag,
            upper_tag: e.upper_tag,
            exact: e.exact,
        });
    }
    Ok(grid)
}

/// Writes the cache next to its destination and renames it into place.
pub fn save_cache(path: &Path, grid: &Grid) -> Result<()> {
    let entries: BTreeMap<String, CacheEntry> = grid
        .cells
        .values()
        .map(|c| {
            (
                format!("{},{}", c.n, c.r),
                CacheEntry {
                    lower: c.lower,
                    upper: c.upper,
                    lower_tag: c.lower_tag,
                    upper_tag: c.upper_tag,
                    exact: c.exact,
                },
            )
        })
        .collect();
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, serde_json::to_string_pretty(&entries)? + "\n")?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Fills the grid up to the largest requested `n`, seeded from and written
/// back to the cache when one is configured.
pub fn build_table(spec: &TableSpec) -> Result<Grid> {
    spec.validate()?;
    let cached = match &spec.cache_path {
        Some(p) => Some(load_cache(p)?),
        None => None,
    };
    let grid = fill_grid(*spec.n_range.end(), &spec.budget, cached.as_ref())?;
    if let Some(p) = &spec.cache_path {
        save_cache(p, &grid)?;
    }
    Ok(grid)
}

/// Records of the requested cells, row by row (`R`, then `n`).
pub fn table_cells(spec: &TableSpec, grid: &Grid) -> Vec<BoundRecord> {
    let mut out = Vec::new();
    for r in spec.r_range.clone() {
        for n in spec.n_range.clone() {
            if let Some(rec) = grid.lookup(n, r) {
                out.push(rec);
            }
        }
    }
    out
}

fn cell_text(n: u32, r: u32, grid: &Grid) -> String {
    if r >= n {
        return "1".into();
    }
    grid.get(n, r).map_or_else(|| "?".into(), BoundRecord::cell_text)
}

/// Rows `R`, columns `n`, each cell `v[lt/ut]` or `a-b[lt/ut]`; cells with
/// `R >= n` are the trivial `1`.
pub fn render(spec: &TableSpec, grid: &Grid) -> String {
    let ns: Vec<u32> = spec.n_range.clone().collect();
    let rows: Vec<(String, Vec<String>)> = spec
        .r_range
        .clone()
        .map(|r| (r.to_string(), ns.iter().map(|&n| cell_text(n, r, grid)).collect()))
        .collect();
    let mut widths: Vec<usize> = ns.iter().map(|n| n.to_string().len()).collect();
    for (_, cells) in &rows {
        for (w, c) in widths.iter_mut().zip(cells) {
            *w = (*w).max(c.len());
        }
    }
    let label = rows.iter().map(|(r, _)| r.len()).max().unwrap_or(1).max(3);
    let mut out = format!("{:>label$}", "R\\n");
    for (n, w) in ns.iter().zip(&widths) {
        out.push_str(&format!("  {:>w$}", n));
    }
    out.push('\n');
    for (r, cells) in rows {
        out.push_str(&format!("{:>label$}", r));
        for (c, w) in cells.iter().zip(&widths) {
            out.push_str(&format!("  {:>w$}", c));
        }
        out.push('\n');
    }
    out
}
