use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::arc::PointMult;
use super::classify::{CensusEntry, SearchOptions};
use super::SearchError;
use crate::geometry::Geometry;
use crate::ring::RingName;

/// Unfinished part of a search: the subtrees not yet explored plus
/// everything collected so far.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub ring: RingName,
    pub k: usize,
    pub u: usize,
    pub sets_only: bool,
    pub min_size: usize,
    pub maximal_only: bool,
    pub threshold: usize,
    pub nodes: u64,
    pub census: BTreeMap<usize, CensusEntry>,
    pub classes: Vec<Vec<PointMult>>,
    pub frontier: Vec<Vec<PointMult>>,
}

impl Checkpoint {
    pub const FORMAT: &'static str = "phg-checkpoint";
    pub const VERSION: u32 = 1;

    pub fn save(&self, path: &Path) -> Result<(), SearchError> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_vec_pretty(self)?)?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Checkpoint, SearchError> {
        let cp: Checkpoint = serde_json::from_slice(&std::fs::read(path)?)?;
        if cp.format != Self::FORMAT || cp.version != Self::VERSION {
            return Err(SearchError::CheckpointMismatch(format!(
                "unsupported format {} version {}",
                cp.format, cp.version
            )));
        }
        Ok(cp)
    }

    pub fn check_matches(&self, geom: &Geometry, opts: &SearchOptions) -> Result<(), SearchError> {
        let mismatch = |what: &str| Err(SearchError::CheckpointMismatch(what.to_string()));
        if self.ring != geom.ring.name || self.k != geom.k {
            return mismatch("geometry");
        }
        if self.sets_only != opts.sets_only || self.maximal_only != opts.maximal_only || self.min_size != opts.min_size {
            return mismatch("search options");
        }
        let n = geom.num_points();
        if self.frontier.iter().chain(&self.classes).flatten().any(|pm| pm.point >= n || pm.mult == 0) {
            return mismatch("point id out of range");
        }
        Ok(())
    }
}
