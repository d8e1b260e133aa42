use serde::Serialize;

use super::presentation::{Engine, RingSpec};

/// A finite field of order `q ∈ {2, 3, 4}`: the residue field of a chain ring
/// and the Gray-image alphabet.
#[derive(Clone, Debug, Serialize)]
pub struct FieldTable {
    pub order: usize,
    pub p: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    /// Generator of the multiplicative group.
    pub generator: u8,
}

impl FieldTable {
    pub(crate) fn build(p: usize, r: usize) -> FieldTable {
        let pres = RingSpec::field(p as i64, r == 2);
        let engine = Engine::new(&pres);
        let elems = engine.elements();
        let q = elems.len();
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for (x, ex) in elems.iter().enumerate() {
            for (y, ey) in elems.iter().enumerate() {
                add[x * q + y] = engine.index_of(&engine.add(ex, ey)) as u8;
                mul[x * q + y] = engine.index_of(&engine.mul(ex, ey)) as u8;
            }
        }
        let neg = (0..q)
            .map(|x| (0..q).find(|&y| add[x * q + y] == 0).unwrap() as u8)
            .collect();
        let inv = (0..q)
            .map(|x| if x == 0 { 0 } else { (1..q).find(|&y| mul[x * q + y] == 1).unwrap_or(0) as u8 })
            .collect();
        let mut field = FieldTable { order: q, p, add, mul, neg, inv, generator: 1 };
        field.generator = (1..q as u8)
            .find(|&g| field.multiplicative_order(g) == q - 1)
            .unwrap_or(1);
        field
    }

    #[inline]
    pub fn add(&self, x: u8, y: u8) -> u8 {
        self.add[x as usize * self.order + y as usize]
    }

    #[inline]
    pub fn mul(&self, x: u8, y: u8) -> u8 {
        self.mul[x as usize * self.order + y as usize]
    }

    #[inline]
    pub fn neg(&self, x: u8) -> u8 {
        self.neg[x as usize]
    }

    #[inline]
    pub fn sub(&self, x: u8, y: u8) -> u8 {
        self.add(x, self.neg(y))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, x: u8) -> Option<u8> {
        (x != 0).then(|| self.inv[x as usize])
    }

    pub fn multiplicative_order(&self, x: u8) -> usize {
        if x == 0 {
            return 0;
        }
        let mut y = x;
        let mut k = 1;
        while y != 1 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// Exhaustive check of the field axioms.
    pub fn check_axioms(&self) -> Result<(), String> {
        let q = self.order as u8;
        for x in 0..q {
            if self.add(x, 0) != x || self.mul(x, 1) != x {
                return Err(format!("identity fails at {x}"));
            }
            if x != 0 && self.inv(x).map(|i| self.mul(x, i)) != Some(1) {
                return Err(format!("{x} has no inverse"));
            }
            for y in 0..q {
                if self.add(x, y) != self.add(y, x) || self.mul(x, y) != self.mul(y, x) {
                    return Err(format!("commutativity fails at ({x},{y})"));
                }
                for z in 0..q {
                    if self.add(self.add(x, y), z) != self.add(x, self.add(y, z))
                        || self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z))
                        || self.mul(x, self.add(y, z)) != self.add(self.mul(x, y), self.mul(x, z))
                    {
                        return Err(format!("axiom fails at ({x},{y},{z})"));
                    }
                }
            }
        }
        if self.multiplicative_order(self.generator) != self.order - 1 {
            return Err("generator does not generate".into());
        }
        Ok(())
    }
}
