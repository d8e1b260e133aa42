use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use serde::Serialize;

use hjelmslev::ring::RingTable;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct RingInfo {
    pub name: String,
    pub presentation: String,
    pub order: usize,
    pub q: usize,
    pub m: usize,
    pub characteristic: usize,
}

impl RingInfo {
    pub fn of(r: &RingTable) -> RingInfo {
        RingInfo {
            name: r.name.to_string(),
            presentation: r.presentation.text.clone(),
            order: r.size,
            q: r.q,
            m: r.m,
            characteristic: r.characteristic(),
        }
    }
}

#[derive(Serialize)]
pub struct Conventions {
    pub points: &'static str,
    pub hyperplanes: &'static str,
    pub homogeneous_weight: &'static str,
    pub gray_map: &'static str,
    pub arc_equivalence: &'static str,
}

pub const CONVENTIONS: Conventions = Conventions {
    points: "right submodules xR, represented with the leftmost unit coordinate equal to 1",
    hyperplanes: "left coordinate vectors c with sum c_i x_i = 0, leftmost unit equal to 1",
    homogeneous_weight: "0 on zero, q on the nonzero socle, q-1 elsewhere",
    gray_map: "psi(x)_c = r(x_{m-1}) + sum_i c_i r(x_{i-1}) over theta-adic digits, c in F_q^{m-1} lexicographic",
    arc_equivalence: "isomorphism of the point-hyperplane incidence graph with points colored by multiplicity",
};

#[derive(Serialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Completeness {
    Final,
    BudgetExhausted,
}

/// Self-describing JSON envelope written by every command.
#[derive(Serialize)]
pub struct RunReport<T: Serialize> {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<usize>,
    pub conventions: Conventions,
    pub status: Completeness,
    pub wall_seconds: f64,
    pub result: T,
}

pub struct Envelope {
    pub started: Instant,
    pub command: Vec<String>,
}

impl Envelope {
    pub fn new() -> Envelope {
        Envelope { started: Instant::now(), command: std::env::args().collect() }
    }

    pub fn wrap<T: Serialize>(
        &self,
        ring: Option<&RingTable>,
        k: Option<usize>,
        u: Option<usize>,
        status: Completeness,
        result: T,
    ) -> RunReport<T> {
        RunReport {
            schema_version: SCHEMA_VERSION,
            tool: "phg",
            tool_version: env!("CARGO_PKG_VERSION"),
            command: self.command.clone(),
            ring: ring.map(RingInfo::of),
            k,
            u,
            conventions: CONVENTIONS,
            status,
            wall_seconds: self.started.elapsed().as_secs_f64(),
            result,
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
