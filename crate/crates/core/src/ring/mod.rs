//! Finite chain rings as dense operation tables.
//!
//! Elements are indices `0..size` with `0` the zero and `1` the one. Every
//! ring is built from a symbolic [`Presentation`] and then validated
//! exhaustively against the chain-ring axioms; a failed validation is a
//! construction bug, not an input error.

mod field;
mod literal;
mod presentation;

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

pub use field::FieldTable;
pub use presentation::{Presentation, RadicalGenerator, RingName, RingSpec};

use presentation::Engine;

/// A ring element, as a dense index into the operation tables.
pub type Elem = u8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("unknown ring `{0}`")]
    UnknownRing(String),
    #[error("ring {ring} failed chain-ring validation: {reason}")]
    Validation { ring: String, reason: String },
    #[error("cannot parse element literal `{literal}`: {reason}")]
    Literal { literal: String, reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct RingTable {
    pub name: RingName,
    pub presentation: Presentation,
    pub size: usize,
    pub q: usize,
    pub m: usize,
    pub p: usize,
    pub r: usize,
    pub lambda: usize,
    #[serde(skip)]
    add: Vec<Elem>,
    #[serde(skip)]
    mul: Vec<Elem>,
    #[serde(skip)]
    neg: Vec<Elem>,
    #[serde(skip)]
    unit: Vec<bool>,
    #[serde(skip)]
    inv: Vec<Option<Elem>>,
    /// Fixed generator of the radical.
    pub theta: Elem,
    /// Transversal of the radical, indexed by residue (so `gamma[0] = 0`).
    pub gamma: Vec<Elem>,
    #[serde(skip)]
    residue: Vec<u8>,
    #[serde(skip)]
    valuation: Vec<u8>,
    #[serde(skip)]
    digits: Vec<Vec<Elem>>,
    #[serde(skip)]
    coeffs: Vec<Vec<i64>>,
    #[serde(skip)]
    a_degree: usize,
    #[serde(skip)]
    pub field: FieldTable,
    /// Field generator `a` (rings with residue field `F_4`).
    pub gen_a: Option<Elem>,
    /// Radical generator `X` (rings presented over an indeterminate).
    pub gen_x: Option<Elem>,
    /// For `T4`: the automorphism `a ↦ a^2` used by the skew rule.
    pub sigma_note: Option<String>,
}

fn integer_log(base: usize, mut x: usize) -> Option<usize> {
    let mut k = 0;
    while x > 1 {
        if x % base != 0 {
            return None;
        }
        x /= base;
        k += 1;
    }
    Some(k)
}

/// Materialize one of the named rings.
pub fn build_ring(spec: &RingSpec) -> Result<RingTable, RingError> {
    let fail = |reason: String| RingError::Validation { ring: spec.name.to_string(), reason };
    let pres = &spec.presentation;
    let engine = Engine::new(pres);
    let coeffs = engine.elements();
    let size = coeffs.len();
    if size > 256 {
        return Err(fail(format!("{size} elements do not fit the table representation")));
    }
    let mut add = vec![0; size * size];
    let mut mul = vec![0; size * size];
    for (x, cx) in coeffs.iter().enumerate() {
        for (y, cy) in coeffs.iter().enumerate() {
            add[x * size + y] = engine.index_of(&engine.add(cx, cy)) as Elem;
            mul[x * size + y] = engine.index_of(&engine.mul(cx, cy)) as Elem;
        }
    }
    let neg: Vec<Elem> = (0..size)
        .map(|x| (0..size).find(|&y| add[x * size + y] == 0).map(|y| y as Elem))
        .collect::<Option<_>>()
        .ok_or_else(|| fail("additive inverse missing".into()))?;
    let inv: Vec<Option<Elem>> = (0..size)
        .map(|x| {
            (0..size)
                .find(|&y| mul[x * size + y] == 1 && mul[y * size + x] == 1)
                .map(|y| y as Elem)
        })
        .collect();
    let unit: Vec<bool> = inv.iter().map(Option::is_some).collect();
    let nonunits = unit.iter().filter(|u| !**u).count();
    if nonunits == 0 || size % nonunits != 0 {
        return Err(fail(format!("{nonunits} non-units in a ring of {size} elements")));
    }
    let q = size / nonunits;
    let p = (2..=q).find(|d| q % d == 0).unwrap_or(q);
    let r = integer_log(p, q).ok_or_else(|| fail(format!("residue order {q} is not a prime power")))?;
    let m = integer_log(q, size).ok_or_else(|| fail(format!("|R| = {size} is not a power of q = {q}")))?;

    let one_multiple = |k: usize| -> Elem {
        let mut acc = 0usize;
        for _ in 0..k {
            acc = add[acc * size + 1] as usize;
        }
        acc as Elem
    };
    let char_order = (1..=size).find(|&k| one_multiple(k) == 0).unwrap_or(size);
    let lambda = integer_log(p, char_order).ok_or_else(|| fail("characteristic is not a power of p".into()))?;

    let a_degree = engine.a_degree;
    let gen_a = (a_degree == 2).then(|| engine.radix(0) as Elem);
    let gen_x = (pres.x_degree > 1).then(|| (0..a_degree).map(|pos| engine.radix(pos)).product::<i64>() as Elem);
    let theta = match pres.radical {
        RadicalGenerator::Prime => one_multiple(p),
        RadicalGenerator::X => gen_x.ok_or_else(|| fail("radical generator X absent".into()))?,
    };

    let residue: Vec<u8> = coeffs
        .iter()
        .map(|c| {
            let mut idx = 0i64;
            for i in (0..a_degree).rev() {
                idx = idx * p as i64 + c[i].rem_euclid(p as i64);
            }
            idx as u8
        })
        .collect();

    let field = FieldTable::build(p, r);
    let gamma_set: Vec<Elem> = if lambda == 1 {
        // characteristic p: the embedded copy of F_q
        (0..q as Elem).collect()
    } else {
        // Teichmüller set {x : x^q = x}
        (0..size as Elem)
            .filter(|&x| {
                let mut y = x;
                for _ in 1..q {
                    y = mul[y as usize * size + x as usize];
                }
                y == x
            })
            .collect()
    };
    if gamma_set.len() != q {
        return Err(fail(format!("transversal has {} elements, expected {q}", gamma_set.len())));
    }
    let mut gamma = vec![Elem::MAX; q];
    for &g in &gamma_set {
        let res = residue[g as usize] as usize;
        if gamma[res] != Elem::MAX {
            return Err(fail("transversal hits a residue class twice".into()));
        }
        gamma[res] = g;
    }

    let mut table = RingTable {
        name: spec.name,
        presentation: pres.clone(),
        size,
        q,
        m,
        p,
        r,
        lambda,
        add,
        mul,
        neg,
        unit,
        inv,
        theta,
        gamma,
        residue,
        valuation: vec![],
        digits: vec![],
        coeffs,
        a_degree,
        field,
        gen_a,
        gen_x,
        sigma_note: pres.skew.then(|| "sigma: a -> a^2, X b = sigma(b) X".to_string()),
    };

    // radical filtration via powers of theta
    let mut theta_pow = vec![1 as Elem];
    for i in 1..=m {
        let prev = theta_pow[i - 1];
        theta_pow.push(table.mul(prev, theta));
    }
    table.valuation = (0..size as Elem)
        .map(|x| {
            (0..=m)
                .rev()
                .find(|&i| (0..size as Elem).any(|y| table.mul(theta_pow[i], y) == x))
                .unwrap_or(0) as u8
        })
        .collect();

    let mut digits = vec![Vec::new(); size];
    for code in 0..size {
        let mut c = code;
        let mut ds = Vec::with_capacity(m);
        let mut x = 0 as Elem;
        for &tp in theta_pow.iter().take(m) {
            let g = table.gamma[c % q];
            c /= q;
            ds.push(g);
            x = table.add(x, table.mul(g, tp));
        }
        if !digits[x as usize].is_empty() {
            return Err(fail("theta-adic expansion is not unique".into()));
        }
        digits[x as usize] = ds;
    }
    table.digits = digits;
    table.validate().map_err(fail)?;
    Ok(table)
}

/// Shorthand for `build_ring(&RingSpec::named(name))`.
pub fn ring(name: RingName) -> RingTable {
    build_ring(&RingSpec::named(name)).expect("built-in ring presentations are valid")
}

impl RingTable {
    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        self.add[x as usize * self.size + y as usize]
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.mul[x as usize * self.size + y as usize]
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        self.neg[x as usize]
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn is_unit(&self, x: Elem) -> bool {
        self.unit[x as usize]
    }

    pub fn inv(&self, x: Elem) -> Option<Elem> {
        self.inv[x as usize]
    }

    /// Image in the residue field `F_q`.
    #[inline]
    pub fn residue(&self, x: Elem) -> u8 {
        self.residue[x as usize]
    }

    /// Largest `i` with `x ∈ rad^i`; `valuation(0) = m`.
    #[inline]
    pub fn valuation(&self, x: Elem) -> usize {
        self.valuation[x as usize] as usize
    }

    pub fn in_socle(&self, x: Elem) -> bool {
        self.valuation(x) + 1 >= self.m
    }

    /// Digits `(γ_0, …, γ_{m-1})` over the transversal with `x = Σ γ_i θ^i`.
    pub fn theta_adic(&self, x: Elem) -> &[Elem] {
        &self.digits[x as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size as Elem
    }

    pub fn units(&self) -> impl Iterator<Item = Elem> + '_ {
        self.elements().filter(|&x| self.is_unit(x))
    }

    pub fn is_commutative(&self) -> bool {
        self.elements().all(|x| self.elements().all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// `n · 1`.
    pub fn from_int(&self, n: i64) -> Elem {
        let c = self.characteristic() as i64;
        let mut acc = 0;
        for _ in 0..n.rem_euclid(c) {
            acc = self.add(acc, 1);
        }
        acc
    }

    pub fn characteristic(&self) -> usize {
        self.p.pow(self.lambda as u32)
    }

    /// `rad^i = θ^i R` as a sorted element list.
    pub fn radical_power(&self, i: usize) -> Vec<Elem> {
        self.elements().filter(|&x| self.valuation(x) >= i).collect()
    }

    fn validate(&self) -> Result<(), String> {
        let s = self.size as Elem;
        let all = || 0..s;
        for x in all() {
            if self.add(x, 0) != x || self.mul(x, 1) != x || self.mul(1, x) != x {
                return Err(format!("identity laws fail at {x}"));
            }
            if self.add(x, self.neg(x)) != 0 {
                return Err(format!("negation fails at {x}"));
            }
            for y in all() {
                if self.add(x, y) != self.add(y, x) {
                    return Err(format!("addition not commutative at ({x},{y})"));
                }
                for z in all() {
                    if self.add(self.add(x, y), z) != self.add(x, self.add(y, z)) {
                        return Err(format!("addition not associative at ({x},{y},{z})"));
                    }
                    if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                        return Err(format!("multiplication not associative at ({x},{y},{z})"));
                    }
                    if self.mul(x, self.add(y, z)) != self.add(self.mul(x, y), self.mul(x, z))
                        || self.mul(self.add(x, y), z) != self.add(self.mul(x, z), self.mul(y, z))
                    {
                        return Err(format!("distributivity fails at ({x},{y},{z})"));
                    }
                }
            }
        }
        // non-units form the two-sided ideal θR = Rθ
        let right: Vec<Elem> = {
            let mut v: Vec<Elem> = all().map(|y| self.mul(self.theta, y)).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let left: Vec<Elem> = {
            let mut v: Vec<Elem> = all().map(|y| self.mul(y, self.theta)).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let nonunits: Vec<Elem> = all().filter(|&x| !self.is_unit(x)).collect();
        if right != nonunits || left != nonunits {
            return Err("theta does not generate the radical on both sides".into());
        }
        let units = self.units().count();
        let expect_units = self.q.pow(self.m as u32) - self.q.pow(self.m as u32 - 1);
        if units != expect_units {
            return Err(format!("{units} units, expected {expect_units}"));
        }
        for i in 0..=self.m {
            let n = self.radical_power(i).len();
            if n != self.q.pow((self.m - i) as u32) {
                return Err(format!("|rad^{i}| = {n}"));
            }
        }
        // chain condition: x = ε θ^i with ε a unit and i = valuation(x)
        let mut theta_pow = 1;
        let mut pows = vec![];
        for _ in 0..self.m {
            pows.push(theta_pow);
            theta_pow = self.mul(theta_pow, self.theta);
        }
        if theta_pow != 0 || pows[self.m - 1] == 0 {
            return Err("radical is not nilpotent of index m".into());
        }
        for x in 1..s {
            let i = self.valuation(x);
            if !self.units().any(|e| self.mul(e, pows[i]) == x) {
                return Err(format!("{x} is not a unit times theta^{i}"));
            }
        }
        // residue map: surjective ring map, x unit iff residue nonzero
        let f = &self.field;
        for x in all() {
            if self.is_unit(x) != (self.residue(x) != 0) {
                return Err(format!("unit/residue mismatch at {x}"));
            }
            for y in all() {
                if self.residue(self.add(x, y)) != f.add(self.residue(x), self.residue(y))
                    || self.residue(self.mul(x, y)) != f.mul(self.residue(x), self.residue(y))
                {
                    return Err(format!("residue map not a homomorphism at ({x},{y})"));
                }
            }
        }
        if self.gamma[0] != 0 || self.gamma.iter().enumerate().any(|(r, &g)| self.residue(g) as usize != r) {
            return Err("transversal does not meet every residue class once".into());
        }
        f.check_axioms()
    }

    /// Stable text dump: metadata, element literals, then row-major tables.
    pub fn show(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "ring {}", self.name);
        let _ = writeln!(out, "presentation {}", self.presentation.text);
        let _ = writeln!(
            out,
            "size {} q {} m {} p {} r {} lambda {} theta {} ({})",
            self.size,
            self.q,
            self.m,
            self.p,
            self.r,
            self.lambda,
            self.theta,
            self.format(self.theta)
        );
        if let Some(note) = &self.sigma_note {
            let _ = writeln!(out, "{note}");
        }
        let lits: Vec<String> = self.elements().map(|x| format!("{x}={}", self.format(x))).collect();
        let _ = writeln!(out, "elements {}", lits.join(" "));
        let units: Vec<String> = self.units().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "units {}", units.join(" "));
        let gamma: Vec<String> = self.gamma.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "gamma {}", gamma.join(" "));
        for (label, f) in [("add", RingTable::add as fn(&RingTable, Elem, Elem) -> Elem), ("mul", RingTable::mul)] {
            let _ = writeln!(out, "{label}");
            for x in self.elements() {
                let row: Vec<String> = self.elements().map(|y| f(self, x, y).to_string()).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
        out
    }
}
