//! Explicit element arithmetic in `∏ Z/p^{λ_i}`, used by the enumeration
//! routines (surjection counts, automorphism counts).

use crate::arith::Prime;
use crate::partitions::Partition;

/// Elements are encoded as mixed-radix integers in `0..order()`.
#[derive(Debug, Clone)]
pub struct AbelianGroup {
    moduli: Vec<usize>,
    order: usize,
}

/// A subgroup as a membership bitset plus its element list.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub bits: Vec<u64>,
    pub elements: Vec<usize>,
}

impl Subgroup {
    pub fn contains(&self, x: usize) -> bool {
        self.bits[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

impl AbelianGroup {
    /// Returns `None` when the group has more than `max_order` elements.
    pub fn new(lambda: &Partition, p: Prime, max_order: usize) -> Option<Self> {
        let mut order = 1usize;
        let mut moduli = Vec::with_capacity(lambda.len());
        for &e in lambda.parts() {
            let m = (p.get() as usize).checked_pow(e)?;
            order = order.checked_mul(m)?;
            moduli.push(m);
        }
        (order <= max_order).then_some(AbelianGroup { moduli, order })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    /// The `i`-th standard generator.
    pub fn generator(&self, i: usize) -> usize {
        self.moduli[i + 1..].iter().product()
    }

    pub fn modulus(&self, i: usize) -> usize {
        self.moduli[i]
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        let mut out = 0usize;
        let mut place = 1usize;
        for &m in self.moduli.iter().rev() {
            let digit = (a % m + b % m) % m;
            out += digit * place;
            place *= m;
            a /= m;
            b /= m;
        }
        out
    }

    pub fn scale(&self, a: usize, k: usize) -> usize {
        let mut rest = a;
        let mut out = 0usize;
        let mut place = 1usize;
        for &m in self.moduli.iter().rev() {
            let digit = (rest % m) * (k % m) % m;
            out += digit * place;
            place *= m;
            rest /= m;
        }
        out
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        let mut bits = vec![0u64; self.order.div_ceil(64)];
        bits[0] = 1;
        Subgroup { bits, elements: vec![0] }
    }

    /// `⟨h, x⟩` as the union of the cosets `h + kx`.
    pub fn extend(&self, h: &Subgroup, x: usize) -> Subgroup {
        if h.contains(x) {
            return h.clone();
        }
        let mut out = h.clone();
        let mut step = x;
        while !h.contains(step) {
            for &e in &h.elements {
                let y = self.add(e, step);
                out.bits[y / 64] |= 1 << (y % 64);
                out.elements.push(y);
            }
            step = self.add(step, x);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_in_z4_z2() {
        let g = AbelianGroup::new(&Partition::new(vec![2, 1]).unwrap(), Prime::new(2).unwrap(), 64)
            .unwrap();
        assert_eq!(g.order(), 8);
        let a = g.generator(0);
        let b = g.generator(1);
        assert_eq!(g.scale(a, 4), 0);
        assert_eq!(g.scale(b, 2), 0);
        let h = g.extend(&g.trivial_subgroup(), a);
        assert_eq!(h.len(), 4);
        let full = g.extend(&h, b);
        assert_eq!(full.len(), 8);
        let twice_a = g.scale(a, 2);
        assert_eq!(g.extend(&g.trivial_subgroup(), twice_a).len(), 2);
    }

    #[test]
    fn respects_order_cap() {
        let lam = Partition::new(vec![5, 5]).unwrap();
        assert!(AbelianGroup::new(&lam, Prime::new(2).unwrap(), 512).is_none());
    }
}
