//! Brute-force enumeration of `Aut(N)` for abelian p-groups.

use super::{AbelianType, EndoMatrix, MAX_RANK};
use crate::error::{Error, Result};
use std::sync::OnceLock;

/// Default cap on the number of candidate matrices visited.
pub const DEFAULT_CANDIDATE_BUDGET: u64 = 100_000_000;

/// Number of well-defined endomorphisms, `p^{sum_{i,j} min(e_i, e_j)}`.
pub fn endo_count(t: &AbelianType) -> u64 {
    let s = t.rank();
    let mut exp = 0u32;
    for i in 0..s {
        for j in 0..s {
            exp += t.exponents[i].min(t.exponents[j]);
        }
    }
    (t.p as u64).saturating_pow(exp)
}

/// Odometer over every well-defined endomorphism: entry `(i, j)` runs over the
/// multiples of `p^{max(0, e_i - e_j)}` modulo `p^{e_i}`.
pub(crate) struct EndoIter<'a> {
    ty: &'a AbelianType,
    starts: [[u32; MAX_RANK]; MAX_RANK],
    steps: [[u32; MAX_RANK]; MAX_RANK],
    current: Option<EndoMatrix>,
}

impl<'a> EndoIter<'a> {
    pub(crate) fn new(ty: &'a AbelianType) -> Self {
        let mut steps = [[1; MAX_RANK]; MAX_RANK];
        for i in 0..ty.rank() {
            for j in 0..ty.rank() {
                if ty.exponents[i] > ty.exponents[j] {
                    steps[i][j] = ty.p.pow(ty.exponents[i] - ty.exponents[j]);
                }
            }
        }
        Self { ty, starts: [[0; MAX_RANK]; MAX_RANK], steps, current: Some(ty.zero_endo()) }
    }

    /// Odometer over the preimage of the lower unitriangular matrices under
    /// reduction modulo `p`: diagonal entries `≡ 1`, entries above the
    /// diagonal `≡ 0 (mod p)`.
    pub(crate) fn lower_unitriangular(ty: &'a AbelianType) -> Self {
        let mut it = Self::new(ty);
        let mut start = ty.zero_endo();
        for i in 0..ty.rank() {
            for j in i..ty.rank() {
                it.steps[i][j] = it.steps[i][j].max(ty.p);
            }
            it.starts[i][i] = 1 % ty.moduli[i];
            start.m[i][i] = it.starts[i][i];
        }
        it.current = Some(start);
        it
    }
}

impl Iterator for EndoIter<'_> {
    type Item = EndoMatrix;

    fn next(&mut self) -> Option<EndoMatrix> {
        let out = self.current?;
        let s = self.ty.rank();
        let mut next = out;
        let mut carried = true;
        'outer: for i in 0..s {
            for j in 0..s {
                let v = next.m[i][j] + self.steps[i][j];
                if v < self.ty.moduli[i] {
                    next.m[i][j] = v;
                    carried = false;
                    break 'outer;
                }
                next.m[i][j] = self.starts[i][j];
            }
        }
        self.current = if carried { None } else { Some(next) };
        Some(out)
    }
}

#[cfg(test)]
pub(crate) fn all_endos(ty: &AbelianType) -> Vec<EndoMatrix> {
    EndoIter::new(ty).collect()
}

/// Streams every automorphism in odometer order.
pub(crate) fn automorphisms(ty: &AbelianType) -> impl Iterator<Item = EndoMatrix> + '_ {
    EndoIter::new(ty).filter(move |m| ty.is_automorphism(m))
}

/// `|Aut(N)|` in closed form: for exponents `e_1 <= … <= e_s`, with
/// `d_k = max{l : e_l = e_k}` and `c_k = min{l : e_l = e_k}`,
/// `∏_k (p^{d_k} - p^{k-1}) · ∏_j p^{e_j (s - d_j)} · ∏_i p^{(e_i - 1)(s - c_i + 1)}`.
pub fn aut_order_formula(t: &AbelianType) -> Option<u128> {
    let mut e: Vec<u32> = t.exponents.clone();
    e.sort_unstable();
    let s = e.len() as u32;
    let p = t.p as u128;
    let d = |k: usize| e.iter().rposition(|&x| x == e[k]).unwrap() as u32 + 1;
    let c = |k: usize| e.iter().position(|&x| x == e[k]).unwrap() as u32 + 1;
    let mut total: u128 = 1;
    for k in 0..e.len() {
        total = total.checked_mul(p.checked_pow(d(k))? - p.checked_pow(k as u32)?)?;
        total = total.checked_mul(p.checked_pow(e[k] * (s - d(k)))?)?;
        total = total.checked_mul(p.checked_pow((e[k] - 1) * (s - c(k) + 1))?)?;
    }
    Some(total)
}

/// Elements of the Sylow p-subgroup of `Aut(N)` that reduces modulo `p` to
/// lower unitriangular matrices, in odometer order.
pub(crate) fn lower_unitriangular_sylow(ty: &AbelianType) -> impl Iterator<Item = EndoMatrix> + '_ {
    EndoIter::lower_unitriangular(ty)
}

/// Streams every automorphism of p-power order in odometer order.
pub(crate) fn p_automorphisms(ty: &AbelianType) -> impl Iterator<Item = EndoMatrix> + '_ {
    EndoIter::new(ty).filter(move |m| ty.is_p_element(m))
}

pub(crate) fn check_budget(t: &AbelianType, budget: u64) -> Result<()> {
    let candidates = endo_count(t);
    if candidates > budget {
        return Err(Error::Budget(format!(
            "{candidates} candidate matrices for Aut({t}) exceed the budget of {budget}"
        )));
    }
    Ok(())
}

/// Counts `|Aut(N)|` without storing elements.
pub fn aut_order(t: &AbelianType, budget: u64) -> Result<u64> {
    check_budget(t, budget)?;
    Ok(automorphisms(t).count() as u64)
}

/// The full automorphism group, stored as sorted packed matrix codes.
#[derive(Debug)]
pub struct AutGroup {
    ty: AbelianType,
    codes: Vec<u64>,
    generators: OnceLock<Vec<EndoMatrix>>,
}

impl AutGroup {
    /// Enumerates `Aut(N)`; `budget` bounds the number of candidate matrices.
    pub fn enumerate(t: &AbelianType, budget: u64) -> Result<Self> {
        check_budget(t, budget)?;
        let mut codes: Vec<u64> = automorphisms(t).map(|m| t.code(&m)).collect();
        codes.sort_unstable();
        Ok(Self { ty: t.clone(), codes, generators: OnceLock::new() })
    }

    pub fn ambient(&self) -> &AbelianType {
        &self.ty
    }

    pub fn order(&self) -> u64 {
        self.codes.len() as u64
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn element(&self, i: usize) -> EndoMatrix {
        self.ty.decode(self.codes[i])
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = EndoMatrix> + '_ {
        self.codes.iter().map(|&c| self.ty.decode(c))
    }

    pub fn position(&self, m: &EndoMatrix) -> Option<usize> {
        self.codes.binary_search(&self.ty.code(m)).ok()
    }

    /// A generating set, collected greedily in code order until the closure
    /// of the collected matrices reaches the counted order.
    pub fn generators(&self) -> &[EndoMatrix] {
        self.generators.get_or_init(|| {
            let t = &self.ty;
            let n = self.codes.len();
            let mut in_closure = vec![false; n];
            let id = self.position(&t.identity_endo()).expect("identity is an automorphism");
            in_closure[id] = true;
            let mut members = vec![id];
            let mut gens: Vec<EndoMatrix> = Vec::new();
            for cand in 0..n {
                if members.len() == n {
                    break;
                }
                if in_closure[cand] {
                    continue;
                }
                gens.push(self.element(cand));
                // Re-close: every member times every generator.
                let mut head = 0;
                let mut queue = members.clone();
                while head < queue.len() {
                    let x = self.element(queue[head]);
                    head += 1;
                    for g in &gens {
                        let y = self.position(&t.compose(&x, g)).expect("closed under composition");
                        if !in_closure[y] {
                            in_closure[y] = true;
                            members.push(y);
                            queue.push(y);
                        }
                    }
                }
            }
            gens
        })
    }
}
