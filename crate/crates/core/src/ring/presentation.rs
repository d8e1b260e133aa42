//! Symbolic presentations of the chain rings in scope and the reduction
//! engine that turns them into normal-form element lists.
//!
//! Every ring is presented as `Z_N[a, X]` modulo a quadratic relation for
//! `a` (when the residue field is `F_4`), a reduction rule for the top power
//! of `X`, and per-`X`-power coefficient moduli (for relations such as
//! `2X = 0` in `H8`). `T4` additionally carries the skew rule `X b = σ(b) X`
//! with `σ(a) = a^2`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::RingError;

/// The fifteen chain rings handled by the toolkit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RingName {
    Z4,
    S22,
    Z8,
    H8,
    S23,
    Z9,
    S32,
    G42,
    S42,
    T4,
    Z16,
    I16,
    J16,
    K16,
    S24,
}

impl RingName {
    pub const ALL: [RingName; 15] = [
        RingName::Z4,
        RingName::S22,
        RingName::Z8,
        RingName::H8,
        RingName::S23,
        RingName::Z9,
        RingName::S32,
        RingName::G42,
        RingName::S42,
        RingName::T4,
        RingName::Z16,
        RingName::I16,
        RingName::J16,
        RingName::K16,
        RingName::S24,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RingName::Z4 => "Z4",
            RingName::S22 => "S22",
            RingName::Z8 => "Z8",
            RingName::H8 => "H8",
            RingName::S23 => "S23",
            RingName::Z9 => "Z9",
            RingName::S32 => "S32",
            RingName::G42 => "G42",
            RingName::S42 => "S42",
            RingName::T4 => "T4",
            RingName::Z16 => "Z16",
            RingName::I16 => "I16",
            RingName::J16 => "J16",
            RingName::K16 => "K16",
            RingName::S24 => "S24",
        }
    }
}

impl fmt::Display for RingName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RingName {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RingName::ALL
            .iter()
            .copied()
            .find(|r| r.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| RingError::UnknownRing(s.to_string()))
    }
}

/// Which element generates the radical.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RadicalGenerator {
    /// The integer `p` (Galois rings).
    Prime,
    /// The indeterminate `X`.
    X,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    /// Coefficients live in `Z_N`.
    pub base_modulus: i64,
    /// `a^2 = c0 + c1 a`; `None` when there is no `a`.
    pub a_relation: Option<[i64; 2]>,
    /// Number of normal-form powers of `X` (1 when `X` is absent).
    pub x_degree: usize,
    /// `X^x_degree = Σ_t rule[t] X^t`.
    pub x_rule: Vec<i64>,
    /// Coefficient modulus attached to each power of `X`.
    pub moduli: Vec<i64>,
    /// `X b = σ(b) X` with `σ(a) = a^2`.
    pub skew: bool,
    pub radical: RadicalGenerator,
    /// Human-readable presentation recorded in reports.
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    pub name: RingName,
    pub presentation: Presentation,
}

impl RingSpec {
    pub fn named(name: RingName) -> RingSpec {
        use RadicalGenerator::*;
        let f4 = Some([1, 1]); // a^2 = a + 1 over F_2
        let (n, a, dx, rule, moduli, skew, rad, text): (i64, _, usize, Vec<i64>, Vec<i64>, bool, _, &str) =
            match name {
                RingName::Z4 => (4, None, 1, vec![], vec![4], false, Prime, "Z/4Z"),
                RingName::Z8 => (8, None, 1, vec![], vec![8], false, Prime, "Z/8Z"),
                RingName::Z9 => (9, None, 1, vec![], vec![9], false, Prime, "Z/9Z"),
                RingName::Z16 => (16, None, 1, vec![], vec![16], false, Prime, "Z/16Z"),
                RingName::S22 => (2, None, 2, vec![0, 0], vec![2, 2], false, X, "F2[X]/(X^2)"),
                RingName::S23 => (2, None, 3, vec![0; 3], vec![2; 3], false, X, "F2[X]/(X^3)"),
                RingName::S24 => (2, None, 4, vec![0; 4], vec![2; 4], false, X, "F2[X]/(X^4)"),
                RingName::S32 => (3, None, 2, vec![0, 0], vec![3, 3], false, X, "F3[X]/(X^2)"),
                RingName::S42 => (
                    2,
                    f4,
                    2,
                    vec![0, 0],
                    vec![2, 2],
                    false,
                    X,
                    "F4[X]/(X^2), F4 = F2[a]/(a^2+a+1)",
                ),
                RingName::T4 => (
                    2,
                    f4,
                    2,
                    vec![0, 0],
                    vec![2, 2],
                    true,
                    X,
                    "F4[X;sigma]/(X^2), sigma(a) = a^2, Xb = sigma(b)X, F4 = F2[a]/(a^2+a+1)",
                ),
                // a^2 = a + 1; the other lifts of a^2+a+1 give isomorphic rings but
                // different coordinates, and only this one matches the reference arc
                RingName::G42 => (4, Some([1, 1]), 1, vec![], vec![4], false, Prime, "Z4[a]/(a^2+3a+3)"),
                // X^2 = -2 = 2, and X^3 = 0 forces 2X = 0
                RingName::H8 => (4, None, 2, vec![2, 0], vec![4, 2], false, X, "Z4[X]/(X^2+2, X^3)"),
                RingName::I16 => (4, None, 2, vec![2, 0], vec![4, 4], false, X, "Z4[X]/(X^2+2)"),
                // X^2 = -2X - 2 = 2X + 2
                RingName::J16 => (4, None, 2, vec![2, 2], vec![4, 4], false, X, "Z4[X]/(X^2+2X+2)"),
                // X^3 = -2 = 2, and X^4 = 0 forces 2X = 0
                RingName::K16 => (4, None, 3, vec![2, 0, 0], vec![4, 2, 2], false, X, "Z4[X]/(X^3+2, X^4)"),
            };
        RingSpec {
            name,
            presentation: Presentation {
                base_modulus: n,
                a_relation: a,
                x_degree: dx,
                x_rule: rule,
                moduli,
                skew,
                radical: rad,
                text: text.to_string(),
            },
        }
    }

    /// Residue field `F_p` or `F_4 = F_2[a]/(a^2+a+1)` as a presentation.
    pub(crate) fn field(p: i64, with_a: bool) -> Presentation {
        Presentation {
            base_modulus: p,
            a_relation: if with_a { Some([1, 1]) } else { None },
            x_degree: 1,
            x_rule: vec![],
            moduli: vec![p],
            skew: false,
            radical: RadicalGenerator::Prime,
            text: if with_a { "F2[a]/(a^2+a+1)".into() } else { format!("F{p}") },
        }
    }
}

/// Normal-form arithmetic on coefficient vectors. Position `j * a_degree + i`
/// holds the coefficient of `a^i X^j`.
pub(crate) struct Engine<'p> {
    pres: &'p Presentation,
    pub(crate) a_degree: usize,
}

impl<'p> Engine<'p> {
    pub(crate) fn new(pres: &'p Presentation) -> Self {
        let a_degree = if pres.a_relation.is_some() { 2 } else { 1 };
        Engine { pres, a_degree }
    }

    pub(crate) fn positions(&self) -> usize {
        self.a_degree * self.pres.x_degree
    }

    pub(crate) fn radix(&self, pos: usize) -> i64 {
        self.pres.moduli[pos / self.a_degree]
    }

    /// All normal forms in index order (position 0 least significant).
    pub(crate) fn elements(&self) -> Vec<Vec<i64>> {
        let npos = self.positions();
        let size: i64 = (0..npos).map(|p| self.radix(p)).product();
        (0..size)
            .map(|mut idx| {
                (0..npos)
                    .map(|p| {
                        let r = self.radix(p);
                        let c = idx % r;
                        idx /= r;
                        c
                    })
                    .collect()
            })
            .collect()
    }

    pub(crate) fn index_of(&self, coeffs: &[i64]) -> usize {
        let mut idx = 0i64;
        for p in (0..self.positions()).rev() {
            idx = idx * self.radix(p) + coeffs[p];
        }
        idx as usize
    }

    fn normalize(&self, coeffs: &mut [i64]) {
        for (p, c) in coeffs.iter_mut().enumerate() {
            *c = c.rem_euclid(self.radix(p));
        }
    }

    pub(crate) fn add(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let mut out: Vec<i64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.normalize(&mut out);
        out
    }

    pub(crate) fn mul(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let da = self.a_degree;
        let dx = self.pres.x_degree;
        let n = self.pres.base_modulus;
        // wide[j][e]: coefficient of a^e X^j before reduction
        let mut wide = vec![[0i64; 4]; 2 * dx];
        for j1 in 0..dx {
            for i1 in 0..da {
                let c1 = x[j1 * da + i1];
                if c1 == 0 {
                    continue;
                }
                for j2 in 0..dx {
                    for i2 in 0..da {
                        let c2 = y[j2 * da + i2];
                        if c2 == 0 {
                            continue;
                        }
                        // X^j1 a^i2 = σ^j1(a^i2) X^j1, σ(a) = a^2
                        let twist = if self.pres.skew && j1 % 2 == 1 { 2 } else { 1 };
                        let e = i1 + i2 * twist;
                        wide[j1 + j2][e] = (wide[j1 + j2][e] + c1 * c2).rem_euclid(n);
                    }
                }
            }
        }
        if let Some([r0, r1]) = self.pres.a_relation {
            for row in wide.iter_mut() {
                for e in (2..4).rev() {
                    let c = row[e];
                    if c != 0 {
                        row[e] = 0;
                        row[e - 2] = (row[e - 2] + c * r0).rem_euclid(n);
                        row[e - 1] = (row[e - 1] + c * r1).rem_euclid(n);
                    }
                }
            }
        }
        for j in (dx..2 * dx).rev() {
            let row = wide[j];
            if row.iter().all(|&c| c == 0) {
                continue;
            }
            wide[j] = [0; 4];
            for (t, &r) in self.pres.x_rule.iter().enumerate() {
                if r == 0 {
                    continue;
                }
                let target = j - dx + t;
                for e in 0..da {
                    wide[target][e] = (wide[target][e] + row[e] * r).rem_euclid(n);
                }
            }
        }
        let mut out = vec![0i64; self.positions()];
        for j in 0..dx {
            for i in 0..da {
                out[j * da + i] = wide[j][i];
            }
        }
        self.normalize(&mut out);
        out
    }
}
