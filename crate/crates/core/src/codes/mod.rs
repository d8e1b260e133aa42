//! Linear codes of arcs, homogeneous weights and the generalized Gray map.

mod arcfile;

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

pub use arcfile::{parse_arc_file, ArcFile, ArcFileError};

use crate::arcsearch::{field_rank, is_degenerate, Arc};
use crate::geometry::Geometry;
use crate::ring::{Elem, RingTable};

/// Homogeneous weight: 0 on zero, q on the nonzero socle, q-1 elsewhere.
pub fn hom_weight(ring: &RingTable, x: Elem) -> u64 {
    if x == 0 {
        0
    } else if ring.in_socle(x) {
        ring.q as u64
    } else {
        ring.q as u64 - 1
    }
}

pub fn hom_distance(ring: &RingTable, a: &[Elem], b: &[Elem]) -> u64 {
    a.iter().zip(b).map(|(&x, &y)| hom_weight(ring, ring.sub(x, y))).sum()
}

pub fn gray_length(ring: &RingTable) -> usize {
    ring.q.pow(ring.m as u32 - 1)
}

/// `psi(x)` indexed by `c` in `F_q^{m-1}`, lexicographic with `c_1` most
/// significant: `x̄_{m-1} + Σ c_i x̄_{i-1}` over the residues of the
/// theta-adic digits of `x`.
pub fn gray_map(ring: &RingTable, x: Elem) -> Vec<u8> {
    let f = &ring.field;
    let digits: Vec<u8> = ring.theta_adic(x).iter().map(|&d| ring.residue(d)).collect();
    let m = ring.m;
    let q = ring.q;
    (0..gray_length(ring))
        .map(|idx| {
            let mut acc = digits[m - 1];
            let mut rest = idx;
            for i in (1..m).rev() {
                let c = (rest % q) as u8;
                rest /= q;
                acc = f.add(acc, f.mul(c, digits[i - 1]));
            }
            acc
        })
        .collect()
}

/// Columns are the point representatives, repeated per multiplicity, in point order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrix {
    pub rows: Vec<Vec<Elem>>,
}

impl GeneratorMatrix {
    pub fn of_arc(geom: &Geometry, arc: &Arc) -> GeneratorMatrix {
        let mut rows = vec![vec![]; geom.k + 1];
        for pm in arc.points() {
            for _ in 0..pm.mult {
                for (row, &x) in rows.iter_mut().zip(&geom.points[pm.point].coords) {
                    row.push(x);
                }
            }
        }
        GeneratorMatrix { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every column contains a unit.
    pub fn is_fat(&self, ring: &RingTable) -> bool {
        (0..self.len()).all(|j| self.rows.iter().any(|r| ring.is_unit(r[j])))
    }

    /// `x G` for every `x` in `R^{k+1}`, duplicates included.
    pub fn codewords(&self, ring: &RingTable) -> Vec<Vec<Elem>> {
        let n = self.len();
        let mut words = vec![vec![0; n]];
        for row in &self.rows {
            let mut next = Vec::with_capacity(words.len() * ring.size);
            for w in &words {
                for x in ring.elements() {
                    next.push(w.iter().zip(row).map(|(&c, &g)| ring.add(c, ring.mul(x, g))).collect());
                }
            }
            words = next;
        }
        words
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeReport {
    pub n: usize,
    pub size: usize,
    pub d_hom: u64,
    pub gray_q: usize,
    pub gray_length: usize,
    /// `log_q |C|` when integral.
    pub gray_dimension: Option<u32>,
    pub gray_min_hamming: u64,
    pub weight_enumerator: BTreeMap<u64, u64>,
    pub gray_linear: bool,
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl CodeReport {
    /// `1 + 42X^6 + ...`
    pub fn enumerator_string(&self) -> String {
        format_enumerator(&self.weight_enumerator)
    }

    /// `[n,k,d]` with the Gray parameters.
    pub fn parameters(&self) -> String {
        match self.gray_dimension {
            Some(k) => format!("[{},{},{}]", self.gray_length, k, self.gray_min_hamming),
            None => format!("({},{},{})", self.gray_length, self.size, self.gray_min_hamming),
        }
    }
}

pub fn format_enumerator(e: &BTreeMap<u64, u64>) -> String {
    e.iter()
        .map(|(&w, &c)| match w {
            0 => c.to_string(),
            _ => format!("{c}X^{w}"),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Parses `1 + 42X^6 + 7X^8`; a bare `X` means weight 1 and coefficient 1.
pub fn parse_enumerator(s: &str) -> Option<BTreeMap<u64, u64>> {
    let mut out = BTreeMap::new();
    for term in s.split('+').map(str::trim) {
        let (c, w) = match term.split_once('X') {
            None => (term, 0),
            Some((c, w)) => {
                let w = match w.strip_prefix('^') {
                    Some(e) => e.trim().parse().ok()?,
                    None if w.trim().is_empty() => 1,
                    None => return None,
                };
                (c.trim(), w)
            }
        };
        let c = if c.is_empty() { 1 } else { c.parse().ok()? };
        *out.entry(w).or_insert(0) += c;
    }
    Some(out)
}

pub fn code_report(geom: &Geometry, arc: &Arc) -> CodeReport {
    let ring = &geom.ring;
    let gm = GeneratorMatrix::of_arc(geom, arc);
    let degenerate = is_degenerate(geom, arc);
    let mut words = gm.codewords(ring);
    if degenerate {
        let mut seen = HashSet::new();
        words.retain(|w| seen.insert(w.clone()));
    }
    let gray: Vec<Vec<u8>> = ring.elements().map(|x| gray_map(ring, x)).collect();
    let gray_weight: Vec<u64> = gray.iter().map(|v| v.iter().filter(|&&c| c != 0).count() as u64).collect();

    let mut enumerator = BTreeMap::new();
    let mut d_hom = u64::MAX;
    for w in &words {
        let hw: u64 = w.iter().map(|&x| gray_weight[x as usize]).sum();
        *enumerator.entry(hw).or_insert(0) += 1;
        if w.iter().any(|&x| x != 0) {
            d_hom = d_hom.min(w.iter().map(|&x| hom_weight(ring, x)).sum());
        }
    }
    let gray_min = enumerator.keys().copied().find(|&w| w > 0).unwrap_or(0);

    let images: Vec<Vec<u8>> = words.iter().map(|w| w.iter().flat_map(|&x| gray[x as usize].iter().copied()).collect()).collect();
    let rank = field_rank(&ring.field, images);
    let size = words.len();
    let q = ring.q;
    let gray_dimension = (0..=64u32).find(|&d| (q as u128).pow(d) == size as u128);
    let gray_linear = gray_dimension == Some(rank as u32);

    CodeReport {
        n: gm.len(),
        size,
        d_hom: if d_hom == u64::MAX { 0 } else { d_hom },
        gray_q: q,
        gray_length: gm.len() * gray_length(ring),
        gray_dimension,
        gray_min_hamming: gray_min,
        weight_enumerator: enumerator,
        gray_linear,
        degenerate,
        warning: degenerate.then(|| "degenerate arc: codewords deduplicated, |C| < |R|^(k+1)".to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{ring, RingName};

    #[test]
    fn z4_gray_is_classical() {
        let r = ring(RingName::Z4);
        let images: Vec<_> = (0..4).map(|x| gray_map(&r, x)).collect();
        assert_eq!(images, vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 0]]);
    }

    #[test]
    fn z8_socle_maps_to_ones() {
        let r = ring(RingName::Z8);
        assert_eq!(gray_map(&r, r.from_int(4)), vec![1; 4]);
    }

    #[test]
    fn weights() {
        let z4 = ring(RingName::Z4);
        assert_eq!((hom_weight(&z4, 1), hom_weight(&z4, 2)), (1, 2));
        let z8 = ring(RingName::Z8);
        assert_eq!((hom_weight(&z8, 1), hom_weight(&z8, z8.from_int(4))), (1, 2));
        let z9 = ring(RingName::Z9);
        assert_eq!((hom_weight(&z9, 1), hom_weight(&z9, z9.from_int(3))), (2, 3));
    }

    #[test]
    fn enumerator_text() {
        let e = parse_enumerator("1 + 42X^6 + 7 X^8 + 14X^{10}".replace(['{', '}'], "").as_str()).unwrap();
        assert_eq!(e, BTreeMap::from([(0, 1), (6, 42), (8, 7), (10, 14)]));
        assert_eq!(format_enumerator(&e), "1 + 42X^6 + 7X^8 + 14X^10");
        assert!(parse_enumerator("1 + 4Y").is_none());
    }
}
