//! Concrete finite groups.
//!
//! Every group handle, whatever its origin (abelian type, power-commutator
//! presentation, finite presentation, subgroup of a holomorph, multiplicative
//! group of a brace), can be materialized as a [`FiniteGroup`]: a Cayley table
//! over `0..n` with `0` the identity. Isomorphism testing and automorphism
//! counting work on that table.

pub mod catalog;
mod iso;
pub mod pc;
pub mod presentation;

pub use iso::{automorphism_count, find_isomorphism, Isomorphism};

use crate::abelian::AbelianType;
use crate::arith;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Map `p^k -> number of elements of order p^k` (keyed by the order itself).
pub type OrderStatistics = BTreeMap<u64, u64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
}

/// Cheap isomorphism invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: u64,
    pub abelian: bool,
    pub exponent: u64,
    pub center_order: u64,
    pub derived_order: u64,
    pub order_statistics: BTreeMap<String, u64>,
}

impl FiniteGroup {
    /// Tabulates `mul` over `0..n`. Element `0` must be the identity; the
    /// result is checked to be a Latin square with that identity.
    pub fn from_fn(n: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        if n == 0 || n > u32::MAX as usize {
            return Err(Error::InvalidInput("group order out of range".into()));
        }
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let c = mul(a, b);
                if c >= n {
                    return Err(Error::InvalidInput(format!("product {a}*{b} out of range")));
                }
                table[a * n + b] = c as u32;
            }
        }
        let mut inverse = vec![u32::MAX; n];
        for a in 0..n {
            if table[a] as usize != a || table[a * n] as usize != a {
                return Err(Error::InvalidInput("element 0 is not the identity".into()));
            }
            let mut seen = vec![false; n];
            for b in 0..n {
                let c = table[a * n + b] as usize;
                if seen[c] {
                    return Err(Error::InvalidInput("multiplication table is not a Latin square".into()));
                }
                seen[c] = true;
                if c == 0 {
                    inverse[a] = b as u32;
                }
            }
        }
        Ok(Self { n, table, inverse })
    }

    pub fn from_abelian(t: &AbelianType) -> Self {
        Self::from_fn(t.order() as usize, |a, b| {
            t.index(&t.add(&t.from_index(a), &t.from_index(b)))
        })
        .expect("abelian addition is a group law")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        let mut result = 0;
        let mut base = a;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        result
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<u64> {
        (0..self.n).map(|a| self.element_order(a)).collect()
    }

    pub fn order_statistics(&self) -> OrderStatistics {
        let mut stats = BTreeMap::new();
        for o in self.element_orders() {
            *stats.entry(o).or_insert(0) += 1;
        }
        stats
    }

    pub fn exponent(&self) -> u64 {
        self.element_orders().into_iter().max().unwrap_or(1)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (a + 1..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Exhaustive associativity check, `O(n^3)`.
    pub fn is_associative(&self) -> bool {
        (0..self.n).all(|a| {
            (0..self.n).all(|b| {
                let ab = self.mul(a, b);
                (0..self.n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
            })
        })
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.n).filter(|&a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a))).collect()
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.n];
        member[0] = true;
        let mut elements = vec![0];
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head];
            head += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    elements.push(y);
                }
            }
        }
        elements.sort_unstable();
        elements
    }

    pub fn derived_subgroup(&self) -> Vec<usize> {
        let mut comms: Vec<usize> = Vec::new();
        let mut seen = vec![false; self.n];
        for a in 0..self.n {
            for b in 0..self.n {
                let c = self.commutator(a, b);
                if !seen[c] {
                    seen[c] = true;
                    comms.push(c);
                }
            }
        }
        self.closure(&comms)
    }

    /// `G^p [G, G]`, the Frattini subgroup of a p-group.
    pub fn frattini(&self, p: u64) -> Vec<usize> {
        let mut gens = self.derived_subgroup();
        gens.extend((0..self.n).map(|a| self.pow(a, p)));
        gens.sort_unstable();
        gens.dedup();
        self.closure(&gens)
    }

    /// The prime `p` when the order is a power of `p`.
    pub fn prime(&self) -> Option<u64> {
        if self.n == 1 {
            return None;
        }
        let p = (2..=self.n as u64).find(|d| self.n as u64 % d == 0)?;
        arith::log_p(self.n as u64, p).map(|_| p)
    }

    /// A generating set chosen by decreasing element order, then index. For
    /// p-groups every chosen element lies outside the Frattini subgroup
    /// extended by the previous choices, so the set is minimal.
    pub fn generators(&self) -> Vec<usize> {
        let orders = self.element_orders();
        let mut candidates: Vec<usize> = (1..self.n).collect();
        candidates.sort_by_key(|&a| (std::cmp::Reverse(orders[a]), a));
        let base = match self.prime() {
            Some(p) => self.frattini(p),
            None => vec![0],
        };
        let mut gens = Vec::new();
        let mut span = self.closure(&base);
        for a in candidates {
            if span.len() == self.n {
                break;
            }
            if span.binary_search(&a).is_err() {
                gens.push(a);
                let mut all = base.clone();
                all.extend(&gens);
                span = self.closure(&all);
            }
        }
        gens
    }

    pub fn fingerprint(&self) -> Fingerprint {
        Fingerprint {
            order: self.n as u64,
            abelian: self.is_abelian(),
            exponent: self.exponent(),
            center_order: self.center().len() as u64,
            derived_order: self.derived_subgroup().len() as u64,
            order_statistics: self.order_statistics().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        }
    }

    /// The abelian type when the group is an abelian p-group.
    pub fn abelian_type(&self) -> Option<AbelianType> {
        let p = self.prime()? as u32;
        if !self.is_abelian() {
            return None;
        }
        AbelianType::from_order_statistics(p, &self.order_statistics()).ok()
    }

    /// The subgroup on a sorted element list, re-indexed to `0..len`.
    pub fn subgroup(&self, elements: &[usize]) -> Result<FiniteGroup> {
        let pos = |x: usize| elements.binary_search(&x).map_err(|_| Error::InvalidInput("not closed".into()));
        if elements.first() != Some(&0) {
            return Err(Error::InvalidInput("subgroup must contain the identity".into()));
        }
        let mut table = vec![0u32; elements.len() * elements.len()];
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate() {
                table[i * elements.len() + j] = pos(self.mul(a, b))? as u32;
            }
        }
        let n = elements.len();
        FiniteGroup::from_fn(n, |a, b| table[a * n + b] as usize)
    }
}
