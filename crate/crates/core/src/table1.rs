//! Published maxima of complete arcs and a driver that re-derives them.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::arcsearch::{classify, resume, Checkpoint, ClassificationResult, SearchError, SearchOptions, Status};
use crate::geometry::Geometry;
use crate::ring::{ring, RingName};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Small,
    All,
}

impl FromStr for Scope {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "small" => Ok(Scope::Small),
            "all" => Ok(Scope::All),
            _ => Err(format!("unknown scope `{s}`, expected small or all")),
        }
    }
}

/// A cell entry: `\mathbf{7}`, `10_8`, `6_{1(2)}` or `\geq 16`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub m: usize,
    pub nondegenerate: usize,
    pub total: usize,
    /// Only `m_u >= m` is known.
    pub lower_bound: bool,
}

impl FromStr for Expected {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let bad = || format!("cannot read table entry `{s}`");
        if let Some(rest) = s.strip_prefix("\\geq") {
            let m = rest.trim().parse().map_err(|_| bad())?;
            return Ok(Expected { m, nondegenerate: 0, total: 0, lower_bound: true });
        }
        if let Some(rest) = s.strip_prefix("\\mathbf{").and_then(|r| r.strip_suffix('}')) {
            let m = rest.parse().map_err(|_| bad())?;
            return Ok(Expected { m, nondegenerate: 1, total: 1, lower_bound: false });
        }
        let (m, sub) = s.split_once('_').ok_or_else(bad)?;
        let m = m.parse().map_err(|_| bad())?;
        let sub = sub.trim_start_matches('{').trim_end_matches('}');
        let (nd, total) = match sub.split_once('(') {
            Some((nd, t)) => (nd, t.trim_end_matches(')')),
            None => (sub, sub),
        };
        Ok(Expected {
            m,
            nondegenerate: nd.parse().map_err(|_| bad())?,
            total: total.parse().map_err(|_| bad())?,
            lower_bound: false,
        })
    }
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lower_bound {
            write!(f, ">= {}", self.m)
        } else if self.total == 1 && self.nondegenerate == 1 {
            write!(f, "{} (unique)", self.m)
        } else if self.total == self.nondegenerate {
            write!(f, "{} ({} classes)", self.m, self.total)
        } else {
            write!(f, "{} ({} nondegenerate, {} total)", self.m, self.nondegenerate, self.total)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    pub ring: RingName,
    pub k: usize,
    pub u: usize,
    pub entry: &'static str,
    pub expected: Expected,
    pub scope: Scope,
    /// Search only for maximal arcs instead of a full census.
    pub maximal_only: bool,
}

use RingName::*;

/// `(ring, k, u, entry, in the small scope, maximal-only)`
const RAW: &[(RingName, usize, usize, &str, bool, bool)] = &[
    (Z4, 2, 2, "\\mathbf{7}", true, false),
    (S22, 2, 2, "6_2", true, false),
    (Z8, 2, 2, "\\mathbf{10}", true, false),
    (H8, 2, 2, "10_5", true, false),
    (S23, 2, 2, "10_5", true, false),
    (Z9, 2, 2, "9_3", true, false),
    (S32, 2, 2, "9_4", true, false),
    (G42, 2, 2, "\\mathbf{21}", false, true),
    (S42, 2, 2, "18_6", false, true),
    (T4, 2, 2, "\\mathbf{18}", false, true),
    (Z16, 2, 2, "\\geq 16", false, true),
    (I16, 2, 2, "\\mathbf{22}", false, true),
    (J16, 2, 2, "\\mathbf{22}", false, true),
    (K16, 2, 2, "19_5", false, true),
    (S24, 2, 2, "\\mathbf{19}", false, true),
    (Z4, 2, 3, "10_8", true, false),
    (S22, 2, 3, "10_8", true, false),
    (Z8, 2, 3, "\\mathbf{21}", false, true),
    (H8, 2, 3, "18_{93}", false, true),
    (S23, 2, 3, "18_{93}", false, true),
    (Z9, 2, 3, "19_3", false, true),
    (S32, 2, 3, "18_{255}", false, true),
    (Z4, 2, 4, "16_3", true, false),
    (S22, 2, 4, "16_3", true, false),
    (Z4, 2, 5, "\\mathbf{22}", true, true),
    (S22, 2, 5, "\\mathbf{22}", true, true),
    (Z4, 2, 6, "\\mathbf{28}", true, true),
    (S22, 2, 6, "\\mathbf{28}", true, true),
    (Z4, 3, 3, "\\mathbf{8}", true, false),
    (S22, 3, 3, "6_{1(2)}", true, false),
    (Z8, 3, 3, "8_{57(68)}", false, true),
    (H8, 3, 3, "\\mathbf{9}", false, true),
    (S23, 3, 3, "\\mathbf{9}", false, true),
    (Z9, 3, 3, "\\mathbf{10}", true, false),
    (S32, 3, 3, "\\mathbf{10}", false, true),
    (Z4, 3, 4, "10_{25}", false, true),
    (S22, 3, 4, "\\mathbf{11}", false, true),
    (Z4, 3, 5, "16_2", false, true),
    (S22, 3, 5, "16_2", false, true),
    (Z4, 4, 4, "6_{5(17)}", false, true),
    (S22, 4, 4, "6_{5(17)}", false, true),
    (Z4, 4, 5, "11_4", false, true),
    (S22, 4, 5, "11_6", false, true),
];

pub fn cells() -> Vec<Cell> {
    RAW.iter()
        .map(|&(ring, k, u, entry, small, maximal_only)| Cell {
            ring,
            k,
            u,
            entry,
            expected: entry.parse().expect("table entries are well formed"),
            scope: if small { Scope::Small } else { Scope::All },
            maximal_only,
        })
        .collect()
}

pub fn selected(scope: Scope) -> Vec<Cell> {
    cells().into_iter().filter(|c| scope == Scope::All || c.scope == Scope::Small).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Match,
    Mismatch,
    BudgetExhausted,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellOutcome {
    pub ring: RingName,
    pub k: usize,
    pub u: usize,
    pub expected: Expected,
    pub m_u: Option<usize>,
    pub nondegenerate: usize,
    pub total: usize,
    pub status: Status,
    pub verdict: Verdict,
    pub nodes: u64,
    pub seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checkpoint: Option<PathBuf>,
}

impl CellOutcome {
    pub fn diff(&self) -> String {
        let found = match self.m_u {
            Some(m) => format!("{m} ({} nondegenerate, {} total)", self.nondegenerate, self.total),
            None => "no complete arc".to_string(),
        };
        format!("expected {}, found {}", self.expected, found)
    }
}

/// Compares a result with the table; lower-bound cells pass once the
/// bound is reached, complete or not.
pub fn judge(expected: &Expected, r: &ClassificationResult) -> Verdict {
    let m = r.m_u.unwrap_or(0);
    if expected.lower_bound {
        return match (m >= expected.m, r.status) {
            (true, _) => Verdict::Match,
            (false, Status::BudgetExhausted) => Verdict::BudgetExhausted,
            (false, Status::Final) => Verdict::Mismatch,
        };
    }
    let matches = m == expected.m && r.nondegenerate_at_max == expected.nondegenerate && r.total_at_max == expected.total;
    match r.status {
        Status::BudgetExhausted => Verdict::BudgetExhausted,
        Status::Final if matches => Verdict::Match,
        Status::Final => Verdict::Mismatch,
    }
}

pub struct RunConfig {
    pub jobs: usize,
    pub cell_budget: Option<Duration>,
    /// Checkpoints of budget-exhausted cells are written here, and
    /// existing ones are resumed.
    pub checkpoint_dir: Option<PathBuf>,
}

pub fn checkpoint_path(dir: &std::path::Path, cell: &Cell) -> PathBuf {
    dir.join(format!("{}_k{}_u{}.json", cell.ring.as_str().to_lowercase(), cell.k, cell.u))
}

pub fn run_cell(geom: &Geometry, cell: &Cell, cfg: &RunConfig) -> Result<CellOutcome, SearchError> {
    let opts = SearchOptions {
        maximal_only: cell.maximal_only,
        jobs: cfg.jobs,
        time_budget: cfg.cell_budget,
        ..SearchOptions::default()
    };
    let start = Instant::now();
    let cp_path = cfg.checkpoint_dir.as_ref().map(|d| checkpoint_path(d, cell));
    let result = match cp_path.as_ref().filter(|p| p.exists()) {
        Some(p) => resume(geom, &Checkpoint::load(p)?, &opts)?,
        None => classify(geom, cell.u, &opts)?,
    };
    let mut written = None;
    if let (Some(cp), Some(path)) = (&result.checkpoint, &cp_path) {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        cp.save(path)?;
        written = Some(path.clone());
    } else if let Some(path) = cp_path.filter(|p| p.exists()) {
        std::fs::remove_file(path)?;
    }
    Ok(CellOutcome {
        ring: cell.ring,
        k: cell.k,
        u: cell.u,
        expected: cell.expected,
        m_u: result.m_u,
        nondegenerate: result.nondegenerate_at_max,
        total: result.total_at_max,
        status: result.status,
        verdict: judge(&cell.expected, &result),
        nodes: result.nodes,
        seconds: start.elapsed().as_secs_f64(),
        checkpoint: written,
    })
}

/// Runs the cells in table order, building each geometry once.
pub fn run(cells: &[Cell], cfg: &RunConfig, mut progress: impl FnMut(&CellOutcome)) -> Result<Vec<CellOutcome>, SearchError> {
    let mut geoms: HashMap<(RingName, usize), Geometry> = HashMap::new();
    let mut out = vec![];
    for cell in cells {
        let geom = geoms
            .entry((cell.ring, cell.k))
            .or_insert_with(|| Geometry::build(ring(cell.ring), cell.k).expect("table geometries are in range"));
        let outcome = run_cell(geom, cell, cfg)?;
        progress(&outcome);
        out.push(outcome);
    }
    Ok(out)
}
