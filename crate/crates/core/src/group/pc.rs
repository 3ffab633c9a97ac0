//! Class-two p-groups with commutator subgroup of order `p`, given by a
//! power-commutator presentation.
//!
//! Generators are a central `c` of order `p` and `β_1 … β_s`. Relations:
//!
//! * `β_i^{g_i} = c^{t_i}` where `g_i = p^{r_i}` is the order of the image of
//!   `β_i` in `N / [N, N]`;
//! * `β_i β_j β_i^{-1} = c^{k_ij} β_j`, with `k_ji = -k_ij`.
//!
//! Elements have the unique normal form `c^t β_1^{a_1} … β_s^{a_s}` with
//! `0 <= t < p` and `0 <= a_i < g_i`, so `|N| = p^{1 + Σ r_i}`.

use super::{FiniteGroup, OrderStatistics};
use crate::arith;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PcPresentation {
    pub p: u32,
    pub gen_orders: Vec<u64>,
    pub power_tails: Vec<u32>,
    /// `comm[i][j] = k_ij`.
    pub comm: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PcElement {
    pub t: u32,
    pub a: Vec<u64>,
}

impl PcPresentation {
    pub fn new(p: u32, gen_orders: Vec<u64>, power_tails: Vec<u32>, comm: Vec<Vec<u32>>) -> Result<Self> {
        let pres = Self { p, gen_orders, power_tails, comm };
        pres.validate()?;
        Ok(pres)
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.p;
        let bad = |m: &str| Err(Error::InvalidInput(m.to_string()));
        if p == 2 || !arith::is_prime(p as u64) {
            return bad("p must be an odd prime");
        }
        let s = self.gen_orders.len();
        if s == 0 || self.power_tails.len() != s || self.comm.len() != s || self.comm.iter().any(|r| r.len() != s) {
            return bad("dimensions of gen_orders, power_tails and comm disagree");
        }
        for &g in &self.gen_orders {
            if g < p as u64 || arith::log_p(g, p as u64).is_none() {
                return bad("generator orders must be positive powers of p");
            }
        }
        if self.power_tails.iter().any(|&t| t >= p) {
            return bad("power tails must lie in [0, p)");
        }
        for i in 0..s {
            if self.comm[i][i] != 0 {
                return bad("comm must vanish on the diagonal");
            }
            for j in 0..s {
                if self.comm[i][j] >= p || (self.comm[i][j] + self.comm[j][i]) % p != 0 {
                    return bad("comm must be antisymmetric modulo p with entries in [0, p)");
                }
            }
        }
        if self.comm.iter().flatten().all(|&k| k == 0) {
            return bad("presentation is abelian (all commutators trivial)");
        }
        if (self.order() as f64) > u32::MAX as f64 {
            return bad("group too large");
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.gen_orders.len()
    }

    pub fn order(&self) -> u64 {
        self.p as u64 * self.gen_orders.iter().product::<u64>()
    }

    pub fn identity(&self) -> PcElement {
        PcElement { t: 0, a: vec![0; self.rank()] }
    }

    /// The central generator `c`.
    pub fn central(&self) -> PcElement {
        PcElement { t: 1, a: vec![0; self.rank()] }
    }

    /// `β_i`.
    pub fn beta(&self, i: usize) -> PcElement {
        let mut x = self.identity();
        x.a[i] = 1;
        x
    }

    pub fn index(&self, x: &PcElement) -> usize {
        let mut idx = 0u64;
        for i in (0..self.rank()).rev() {
            idx = idx * self.gen_orders[i] + x.a[i];
        }
        (idx * self.p as u64 + x.t as u64) as usize
    }

    pub fn from_index(&self, idx: usize) -> PcElement {
        let mut rest = idx as u64;
        let t = (rest % self.p as u64) as u32;
        rest /= self.p as u64;
        let a = self
            .gen_orders
            .iter()
            .map(|&g| {
                let v = rest % g;
                rest /= g;
                v
            })
            .collect();
        PcElement { t, a }
    }

    pub fn elements(&self) -> impl Iterator<Item = PcElement> + '_ {
        (0..self.order() as usize).map(|i| self.from_index(i))
    }

    /// Collection: `β_j^{x} β_i^{y} = c^{x y k_ji} β_i^{y} β_j^{x}` for `j > i`,
    /// then overflowing exponents are reduced with the power relations.
    pub fn mul(&self, x: &PcElement, y: &PcElement) -> PcElement {
        let p = self.p as u64;
        let s = self.rank();
        let mut t = (x.t + y.t) as u64;
        for i in 0..s {
            if y.a[i] == 0 {
                continue;
            }
            for j in i + 1..s {
                t += x.a[j] % p * (y.a[i] % p) * self.comm[j][i] as u64;
            }
        }
        let mut a = vec![0; s];
        for i in 0..s {
            let sum = x.a[i] + y.a[i];
            if sum >= self.gen_orders[i] {
                a[i] = sum - self.gen_orders[i];
                t += self.power_tails[i] as u64;
            } else {
                a[i] = sum;
            }
        }
        PcElement { t: (t % p) as u32, a }
    }

    pub fn pow(&self, x: &PcElement, k: u64) -> PcElement {
        let mut result = self.identity();
        let mut base = x.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        result
    }

    pub fn element_order(&self, x: &PcElement) -> u64 {
        let id = self.identity();
        let mut o = 1;
        let mut cur = x.clone();
        while cur != id {
            cur = self.pow(&cur, self.p as u64);
            o *= self.p as u64;
        }
        o
    }

    pub fn inv(&self, x: &PcElement) -> PcElement {
        self.pow(x, self.element_order(x) - 1)
    }

    pub fn order_statistics(&self) -> OrderStatistics {
        let mut stats = OrderStatistics::new();
        for x in self.elements() {
            *stats.entry(self.element_order(&x)).or_insert(0) += 1;
        }
        stats
    }

    /// Cayley table on normal-form indices.
    pub fn to_group(&self) -> FiniteGroup {
        let els: Vec<PcElement> = self.elements().collect();
        FiniteGroup::from_fn(els.len(), |a, b| self.index(&self.mul(&els[a], &els[b])))
            .expect("collection defines a group law")
    }

    /// `[N, N]` as a list of elements (sorted by normal-form index).
    pub fn derived_subgroup(&self) -> Vec<PcElement> {
        self.to_group().derived_subgroup().into_iter().map(|i| self.from_index(i)).collect()
    }

    /// `|Aut(N)|` by backtracking over generator images.
    pub fn aut_count(&self, budget: u64) -> Result<u64> {
        super::automorphism_count(&self.to_group(), budget)
    }
}
