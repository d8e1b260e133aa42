//! Text format for arcs:
//!
//! ```text
//! # comment
//! ring=Z4
//! dim=2
//! u=2
//! (1:0:0)
//! (1:2:3) mult=2
//! ```

use std::fmt;

use crate::arcsearch::{Arc, PointMult};
use crate::geometry::{normalize_right, Geometry};
use crate::ring::{Elem, RingName, RingTable};

#[derive(Debug, thiserror::Error)]
pub enum ArcFileError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("missing header `{0}=`")]
    MissingHeader(&'static str),
    #[error("geometry is PHG({k},{ring}) but the file is for PHG({fk},{fring})")]
    WrongGeometry { ring: RingName, k: usize, fring: RingName, fk: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcFile {
    pub ring: RingName,
    pub k: usize,
    pub u: Option<usize>,
    /// Coordinates as written, with multiplicities.
    pub points: Vec<(Vec<Elem>, u8)>,
}

fn syntax(line: usize, reason: impl fmt::Display) -> ArcFileError {
    ArcFileError::Syntax { line, reason: reason.to_string() }
}

pub fn parse_arc_file(text: &str) -> Result<ArcFile, ArcFileError> {
    let mut ring_name = None;
    let mut k = None;
    let mut u = None;
    let mut table: Option<RingTable> = None;
    let mut points = vec![];
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap().trim().trim_end_matches(',').trim();
        if line.is_empty() {
            continue;
        }
        if !line.starts_with('(') {
            let (key, value) = line.split_once('=').ok_or_else(|| syntax(lineno, "expected key=value or a point"))?;
            let value = value.trim();
            match key.trim() {
                "ring" => {
                    let name: RingName = value.parse().map_err(|e| syntax(lineno, e))?;
                    table = Some(crate::ring::ring(name));
                    ring_name = Some(name);
                }
                "dim" => k = Some(value.parse().map_err(|e| syntax(lineno, e))?),
                "u" => u = Some(value.parse().map_err(|e| syntax(lineno, e))?),
                other => return Err(syntax(lineno, format!("unknown key `{other}`"))),
            }
            continue;
        }
        let ring = table.as_ref().ok_or_else(|| syntax(lineno, "point before `ring=`"))?;
        let close = line.rfind(')').ok_or_else(|| syntax(lineno, "unclosed point"))?;
        let coords = line[1..close]
            .split(':')
            .map(|lit| ring.parse(lit.trim()).map_err(|e| syntax(lineno, e)))
            .collect::<Result<Vec<_>, _>>()?;
        let rest = line[close + 1..].trim();
        let mult = match rest {
            "" => 1,
            _ => rest
                .strip_prefix("mult=")
                .and_then(|m| m.trim().parse().ok())
                .filter(|&m: &u8| m > 0)
                .ok_or_else(|| syntax(lineno, format!("bad trailer `{rest}`")))?,
        };
        points.push((coords, mult));
    }
    let ring = ring_name.ok_or(ArcFileError::MissingHeader("ring"))?;
    let k = k.ok_or(ArcFileError::MissingHeader("dim"))?;
    if let Some((i, _)) = points.iter().enumerate().find(|(_, (c, _))| c.len() != k + 1) {
        return Err(syntax(0, format!("point {} has the wrong number of coordinates", i + 1)));
    }
    Ok(ArcFile { ring, k, u, points })
}

impl ArcFile {
    /// Point ids in `geom`; coordinates are normalized first.
    pub fn resolve(&self, geom: &Geometry) -> Result<Arc, ArcFileError> {
        if geom.ring.name != self.ring || geom.k != self.k {
            return Err(ArcFileError::WrongGeometry { ring: geom.ring.name, k: geom.k, fring: self.ring, fk: self.k });
        }
        let mut pts = vec![];
        for (i, (coords, mult)) in self.points.iter().enumerate() {
            let norm = normalize_right(&geom.ring, coords)
                .ok_or_else(|| syntax(0, format!("point {} has no unit coordinate", i + 1)))?;
            let id = geom.point_id(&norm).map_err(|e| syntax(0, e))?;
            pts.push(PointMult { point: id, mult: *mult });
        }
        Ok(Arc::from_points(geom, &pts))
    }

    pub fn to_text(geom: &Geometry, arc: &Arc, u: Option<usize>) -> String {
        let mut out = format!("ring={}\ndim={}\n", geom.ring.name, geom.k);
        if let Some(u) = u {
            out += &format!("u={u}\n");
        }
        for pm in arc.points() {
            out += &geom.format_point(pm.point);
            if pm.mult > 1 {
                out += &format!(" mult={}", pm.mult);
            }
            out.push('\n');
        }
        out
    }
}
