//! Finite abelian p-groups `C_{p^e1} x ... x C_{p^es}` and their endomorphisms.
//!
//! Elements are residue vectors; every element also has a packed mixed-radix
//! index in `[0, p^n)` with the first (largest) cyclic factor least
//! significant, so index 1 is always the generator of the largest factor.
//! Endomorphisms are `s x s` matrices whose column `j` is the image of the
//! `j`-th generator.

pub mod aut;

pub use aut::{aut_order, aut_order_formula, AutGroup};

use crate::arith;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest supported rank.
pub const MAX_RANK: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianType {
    p: u32,
    exponents: Vec<u32>,
    moduli: Vec<u32>,
    strides: Vec<u32>,
    order: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AbelianElement {
    coords: [u32; MAX_RANK],
}

impl fmt::Debug for AbelianElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

impl AbelianElement {
    pub fn coords(&self, t: &AbelianType) -> Vec<u32> {
        self.coords[..t.rank()].to_vec()
    }

    pub fn coord(&self, i: usize) -> u32 {
        self.coords[i]
    }
}

/// Endomorphism of an abelian group; entry `(i, j)` is reduced modulo `p^{e_i}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct EndoMatrix {
    m: [[u32; MAX_RANK]; MAX_RANK],
}

impl fmt::Debug for EndoMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = 0;
        for i in 0..MAX_RANK {
            for j in 0..MAX_RANK {
                if self.m[i][j] != 0 {
                    s = s.max(i.max(j) + 1);
                }
            }
        }
        let view: Vec<&[u32]> = self.m[..s].iter().map(|r| &r[..s]).collect();
        write!(f, "{view:?}")
    }
}

impl EndoMatrix {
    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.m[i][j]
    }

    pub fn rows(&self, t: &AbelianType) -> Vec<Vec<u32>> {
        let s = t.rank();
        self.m[..s].iter().map(|r| r[..s].to_vec()).collect()
    }
}

/// JSON form of an abelian group spec.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AbelianSpec {
    pub p: u32,
    pub exponents: Vec<u32>,
}

impl AbelianType {
    /// Builds the type `p; exponents`, normalizing the exponents to
    /// non-increasing order.
    pub fn new(p: u32, exponents: &[u32]) -> Result<Self> {
        if p == 2 || !arith::is_prime(p as u64) {
            return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
        }
        if exponents.is_empty() || exponents.iter().any(|&e| e == 0) {
            return Err(Error::InvalidInput("exponents must be positive and non-empty".into()));
        }
        if exponents.len() > MAX_RANK {
            return Err(Error::InvalidInput(format!("rank above {MAX_RANK} unsupported")));
        }
        let mut exps = exponents.to_vec();
        exps.sort_unstable_by(|a, b| b.cmp(a));
        let n: u32 = exps.iter().sum();
        let s = exps.len() as u32;
        // Packed matrix codes need p^(n*s) < 2^64.
        if (n * s) as f64 * (p as f64).log2() >= 63.0 || (p as f64).powi(n as i32) > u32::MAX as f64 {
            return Err(Error::InvalidInput("group too large for the word size".into()));
        }
        let moduli: Vec<u32> = exps.iter().map(|&e| p.pow(e)).collect();
        let mut strides = Vec::with_capacity(exps.len());
        let mut acc = 1u32;
        for &m in &moduli {
            strides.push(acc);
            acc *= m;
        }
        Ok(Self { p, exponents: exps, moduli, strides, order: (p as u64).pow(n) })
    }

    /// Every abelian type of order `p^n` with rank at most the supported
    /// maximum, in reverse lexicographic order of exponents: `[n]` first.
    pub fn all_of_order(p: u32, n: u32) -> Result<Vec<Self>> {
        fn partitions(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if n == 0 {
                out.push(prefix.clone());
                return;
            }
            for part in (1..=max.min(n)).rev() {
                prefix.push(part);
                partitions(n - part, part, prefix, out);
                prefix.pop();
            }
        }
        if n == 0 {
            return Err(Error::InvalidInput("n must be positive".into()));
        }
        let mut out = Vec::new();
        partitions(n, n, &mut Vec::new(), &mut out);
        out.iter().filter(|e| e.len() <= MAX_RANK).map(|e| Self::new(p, e)).collect()
    }

    pub fn from_spec(spec: &AbelianSpec) -> Result<Self> {
        Self::new(spec.p, &spec.exponents)
    }

    pub fn spec(&self) -> AbelianSpec {
        AbelianSpec { p: self.p, exponents: self.exponents.clone() }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn modulus(&self, i: usize) -> u32 {
        self.moduli[i]
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `n` with `|N| = p^n`.
    pub fn log_order(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// Exponent of the group, `p^{e_1}`.
    pub fn exponent(&self) -> u64 {
        self.moduli[0] as u64
    }

    pub fn is_homocyclic(&self) -> bool {
        self.exponents.iter().all(|&e| e == self.exponents[0])
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.exponents.iter().map(|e| e.to_string()).collect();
        format!("abelian [{}]", parts.join(","))
    }

    // ---- elements ----

    pub fn identity(&self) -> AbelianElement {
        AbelianElement::default()
    }

    /// Element from integer coordinates, reduced modulo each factor.
    pub fn element(&self, coords: &[i64]) -> Result<AbelianElement> {
        if coords.len() != self.rank() {
            return Err(Error::InvalidInput(format!(
                "element has {} coordinates, type has rank {}",
                coords.len(),
                self.rank()
            )));
        }
        let mut x = AbelianElement::default();
        for (i, &c) in coords.iter().enumerate() {
            x.coords[i] = c.rem_euclid(self.moduli[i] as i64) as u32;
        }
        Ok(x)
    }

    /// Basis vector `e_i`.
    pub fn generator(&self, i: usize) -> AbelianElement {
        let mut x = AbelianElement::default();
        x.coords[i] = 1;
        x
    }

    #[inline]
    pub fn index(&self, x: &AbelianElement) -> usize {
        let mut idx = 0u32;
        for i in 0..self.rank() {
            idx += x.coords[i] * self.strides[i];
        }
        idx as usize
    }

    #[inline]
    pub fn from_index(&self, idx: usize) -> AbelianElement {
        let mut x = AbelianElement::default();
        let mut rest = idx as u32;
        for i in 0..self.rank() {
            x.coords[i] = rest % self.moduli[i];
            rest /= self.moduli[i];
        }
        x
    }

    pub fn elements(&self) -> impl Iterator<Item = AbelianElement> + '_ {
        (0..self.order as usize).map(move |i| self.from_index(i))
    }

    #[inline]
    pub fn add(&self, x: &AbelianElement, y: &AbelianElement) -> AbelianElement {
        let mut z = AbelianElement::default();
        for i in 0..self.rank() {
            let s = x.coords[i] + y.coords[i];
            z.coords[i] = if s >= self.moduli[i] { s - self.moduli[i] } else { s };
        }
        z
    }

    #[inline]
    pub fn neg(&self, x: &AbelianElement) -> AbelianElement {
        let mut z = AbelianElement::default();
        for i in 0..self.rank() {
            z.coords[i] = if x.coords[i] == 0 { 0 } else { self.moduli[i] - x.coords[i] };
        }
        z
    }

    #[inline]
    pub fn sub(&self, x: &AbelianElement, y: &AbelianElement) -> AbelianElement {
        self.add(x, &self.neg(y))
    }

    /// `k`-fold sum `k * x`.
    pub fn scale(&self, x: &AbelianElement, k: u64) -> AbelianElement {
        let mut z = AbelianElement::default();
        for i in 0..self.rank() {
            let m = self.moduli[i] as u64;
            z.coords[i] = ((x.coords[i] as u64 * (k % m)) % m) as u32;
        }
        z
    }

    /// Least `p^k` with `p^k * x = 0`.
    pub fn element_order(&self, x: &AbelianElement) -> u64 {
        (0..self.rank())
            .map(|i| {
                let c = x.coords[i] as u64;
                if c == 0 {
                    1
                } else {
                    self.moduli[i] as u64 / arith::p_part(c, self.p as u64).min(self.moduli[i] as u64)
                }
            })
            .max()
            .unwrap_or(1)
    }

    /// Map `p^k -> #elements of order p^k`, computed by enumeration.
    pub fn order_statistics(&self) -> std::collections::BTreeMap<u64, u64> {
        let mut stats = std::collections::BTreeMap::new();
        for x in self.elements() {
            *stats.entry(self.element_order(&x)).or_insert(0) += 1;
        }
        stats
    }

    /// Reads an abelian type off its order statistics: the number of
    /// exponents `>= k` equals `log_p |Omega_k| - log_p |Omega_{k-1}|`.
    pub fn from_order_statistics(p: u32, stats: &std::collections::BTreeMap<u64, u64>) -> Result<Self> {
        let max_order = *stats.keys().max().unwrap_or(&1);
        let kmax = arith::log_p(max_order, p as u64)
            .ok_or_else(|| Error::InvalidInput("element orders are not powers of p".into()))?;
        let mut omega_logs = vec![0u32];
        for k in 1..=kmax {
            let cumulative: u64 = stats
                .iter()
                .filter(|(&o, _)| o <= (p as u64).pow(k))
                .map(|(_, &c)| c)
                .sum();
            omega_logs.push(
                arith::log_p(cumulative, p as u64)
                    .ok_or_else(|| Error::InvalidInput("statistics are not those of an abelian p-group".into()))?,
            );
        }
        let mut exps = Vec::new();
        for k in 1..=kmax as usize {
            let at_least_k = omega_logs[k] - omega_logs[k - 1];
            let at_least_next = if k < kmax as usize { omega_logs[k + 1] - omega_logs[k] } else { 0 };
            for _ in 0..at_least_k.saturating_sub(at_least_next) {
                exps.push(k as u32);
            }
        }
        if exps.is_empty() {
            return Err(Error::InvalidInput("trivial group has no abelian type".into()));
        }
        Self::new(p, &exps)
    }

    // ---- endomorphisms ----

    pub fn identity_endo(&self) -> EndoMatrix {
        let mut m = EndoMatrix { m: [[0; MAX_RANK]; MAX_RANK] };
        for i in 0..self.rank() {
            m.m[i][i] = 1 % self.moduli[i];
        }
        m
    }

    pub fn zero_endo(&self) -> EndoMatrix {
        EndoMatrix { m: [[0; MAX_RANK]; MAX_RANK] }
    }

    /// Multiplication by the integer `k`.
    pub fn scalar_endo(&self, k: i64) -> EndoMatrix {
        let mut m = self.zero_endo();
        for i in 0..self.rank() {
            m.m[i][i] = k.rem_euclid(self.moduli[i] as i64) as u32;
        }
        m
    }

    /// Validates a raw matrix: column `j` must send a generator of order
    /// `p^{e_j}` to an element of order dividing `p^{e_j}`, i.e.
    /// `p^{e_i - e_j} | m[i][j]` whenever `e_i > e_j`.
    pub fn endo(&self, raw: &[Vec<i64>]) -> Result<EndoMatrix> {
        let s = self.rank();
        if raw.len() != s || raw.iter().any(|r| r.len() != s) {
            return Err(Error::InvalidInput(format!("matrix must be {s}x{s}")));
        }
        let mut m = self.zero_endo();
        for i in 0..s {
            for j in 0..s {
                let v = raw[i][j].rem_euclid(self.moduli[i] as i64) as u32;
                if self.exponents[i] > self.exponents[j] {
                    let step = self.p.pow(self.exponents[i] - self.exponents[j]);
                    if v % step != 0 {
                        return Err(Error::IllDefinedEndo { row: i, col: j });
                    }
                }
                m.m[i][j] = v;
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn apply(&self, m: &EndoMatrix, x: &AbelianElement) -> AbelianElement {
        let s = self.rank();
        let mut y = AbelianElement::default();
        for i in 0..s {
            let mut acc = 0u32;
            for j in 0..s {
                acc += m.m[i][j] * x.coords[j];
            }
            y.coords[i] = acc % self.moduli[i];
        }
        y
    }

    /// `a ∘ b`, i.e. apply `b` first.
    #[inline]
    pub fn compose(&self, a: &EndoMatrix, b: &EndoMatrix) -> EndoMatrix {
        let s = self.rank();
        let mut c = self.zero_endo();
        for i in 0..s {
            let md = self.moduli[i];
            for j in 0..s {
                let mut acc = 0u32;
                for k in 0..s {
                    acc += a.m[i][k] * b.m[k][j];
                }
                c.m[i][j] = acc % md;
            }
        }
        c
    }

    pub fn endo_add(&self, a: &EndoMatrix, b: &EndoMatrix) -> EndoMatrix {
        let s = self.rank();
        let mut c = self.zero_endo();
        for i in 0..s {
            for j in 0..s {
                c.m[i][j] = (a.m[i][j] + b.m[i][j]) % self.moduli[i];
            }
        }
        c
    }

    pub fn endo_neg(&self, a: &EndoMatrix) -> EndoMatrix {
        let s = self.rank();
        let mut c = self.zero_endo();
        for i in 0..s {
            for j in 0..s {
                c.m[i][j] = (self.moduli[i] - a.m[i][j]) % self.moduli[i];
            }
        }
        c
    }

    pub fn endo_sub(&self, a: &EndoMatrix, b: &EndoMatrix) -> EndoMatrix {
        self.endo_add(a, &self.endo_neg(b))
    }

    /// `k * a` in the endomorphism ring.
    pub fn endo_scale(&self, a: &EndoMatrix, k: u64) -> EndoMatrix {
        let s = self.rank();
        let mut c = self.zero_endo();
        for i in 0..s {
            let md = self.moduli[i] as u64;
            for j in 0..s {
                c.m[i][j] = ((a.m[i][j] as u64 * (k % md)) % md) as u32;
            }
        }
        c
    }

    pub fn endo_pow(&self, a: &EndoMatrix, k: u64) -> EndoMatrix {
        let mut result = self.identity_endo();
        let mut base = *a;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = self.compose(&result, &base);
            }
            base = self.compose(&base, &base);
            k >>= 1;
        }
        result
    }

    pub fn is_zero_endo(&self, a: &EndoMatrix) -> bool {
        *a == self.zero_endo()
    }

    /// Determinant test on the reduction modulo `p`: an endomorphism is an
    /// automorphism iff it induces a bijection on `N / pN`.
    pub fn is_automorphism(&self, m: &EndoMatrix) -> bool {
        let s = self.rank();
        let p = self.p;
        let mut a = [[0u32; MAX_RANK]; MAX_RANK];
        for i in 0..s {
            for j in 0..s {
                a[i][j] = m.m[i][j] % p;
            }
        }
        for col in 0..s {
            let Some(piv) = (col..s).find(|&r| a[r][col] != 0) else {
                return false;
            };
            a.swap(col, piv);
            let inv = arith::inv_mod(a[col][col] as u64, p as u64).unwrap() as u32;
            for r in col + 1..s {
                if a[r][col] != 0 {
                    let f = a[r][col] * inv % p;
                    for c in col..s {
                        a[r][c] = (a[r][c] + (p - f) * a[col][c]) % p;
                    }
                }
            }
        }
        true
    }

    /// Whether `m` is an automorphism of p-power order. The kernel of the
    /// reduction `Aut(N) -> GL(N/pN)` is a p-group, so this holds iff the
    /// reduction `M mod p` is unipotent, i.e. `(M - I)^s = 0` modulo `p`.
    pub fn is_p_element(&self, m: &EndoMatrix) -> bool {
        let s = self.rank();
        let p = self.p;
        let mut d = [[0u32; MAX_RANK]; MAX_RANK];
        for i in 0..s {
            for j in 0..s {
                d[i][j] = (m.m[i][j] + if i == j { p - 1 } else { 0 }) % p;
            }
        }
        let mut power = d;
        for _ in 1..s {
            let mut next = [[0u32; MAX_RANK]; MAX_RANK];
            for i in 0..s {
                for j in 0..s {
                    next[i][j] = ((0..s).map(|k| power[i][k] as u64 * d[k][j] as u64).sum::<u64>() % p as u64) as u32;
                }
            }
            power = next;
        }
        (0..s).all(|i| (0..s).all(|j| power[i][j] == 0))
    }

    /// Ground-truth invertibility: the induced map on all elements is injective.
    pub fn is_bijective(&self, m: &EndoMatrix) -> bool {
        let mut seen = vec![false; self.order as usize];
        for x in self.elements() {
            let y = self.index(&self.apply(m, &x));
            if seen[y] {
                return false;
            }
            seen[y] = true;
        }
        true
    }

    /// Inverse of an automorphism: `m^{o-1}` for the multiplicative order `o`.
    pub fn endo_inverse(&self, m: &EndoMatrix) -> EndoMatrix {
        let id = self.identity_endo();
        let mut prev = id;
        let mut cur = *m;
        while cur != id {
            prev = cur;
            cur = self.compose(&cur, m);
        }
        prev
    }

    /// Multiplicative order of an automorphism.
    pub fn endo_order(&self, m: &EndoMatrix) -> u64 {
        let id = self.identity_endo();
        let mut cur = *m;
        let mut k = 1;
        while cur != id {
            cur = self.compose(&cur, m);
            k += 1;
        }
        k
    }

    /// Packed code of a matrix, mixed radix over entries with radix `p^{e_i}`.
    #[inline]
    pub fn code(&self, m: &EndoMatrix) -> u64 {
        let s = self.rank();
        let mut code = 0u64;
        for i in (0..s).rev() {
            let md = self.moduli[i] as u64;
            for j in (0..s).rev() {
                code = code * md + m.m[i][j] as u64;
            }
        }
        code
    }

    #[inline]
    pub fn decode(&self, code: u64) -> EndoMatrix {
        let s = self.rank();
        let mut m = self.zero_endo();
        let mut rest = code;
        for i in 0..s {
            let md = self.moduli[i] as u64;
            for j in 0..s {
                m.m[i][j] = (rest % md) as u32;
                rest /= md;
            }
        }
        m
    }

    /// `Omega_1(N) = {x : p x = 0}`.
    pub fn omega1(&self) -> Omega1 {
        let generators = (0..self.rank())
            .map(|i| self.scale(&self.generator(i), (self.moduli[i] / self.p) as u64))
            .collect();
        Omega1 { ty: self.clone(), generators }
    }
}

impl fmt::Display for AbelianType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.moduli.iter().map(|m| format!("C{m}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// The socle `Omega_1` of an abelian p-group.
#[derive(Clone, Debug)]
pub struct Omega1 {
    ty: AbelianType,
    pub generators: Vec<AbelianElement>,
}

impl Omega1 {
    pub fn contains(&self, x: &AbelianElement) -> bool {
        self.ty.scale(x, self.ty.p as u64) == self.ty.identity()
    }

    pub fn order(&self) -> u64 {
        (self.ty.p as u64).pow(self.ty.rank() as u32)
    }

    pub fn elements(&self) -> Vec<AbelianElement> {
        self.ty.elements().filter(|x| self.contains(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(p: u32, e: &[u32]) -> AbelianType {
        AbelianType::new(p, e).unwrap()
    }

    #[test]
    fn types_of_order_are_partitions() {
        let types = AbelianType::all_of_order(3, 4).unwrap();
        let exps: Vec<Vec<u32>> = types.iter().map(|t| t.exponents().to_vec()).collect();
        assert_eq!(exps, vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
    }

    #[test]
    fn ab_op_examples() {
        let t11 = t(3, &[1, 1]);
        let x = t11.element(&[1, 2]).unwrap();
        let y = t11.element(&[2, 2]).unwrap();
        assert_eq!(t11.add(&x, &y), t11.element(&[0, 1]).unwrap());

        let t21 = t(3, &[2, 1]);
        let y = t21.element(&[5, 2]).unwrap();
        assert_eq!(t21.add(&t21.identity(), &y), y);

        let c125 = t(5, &[3]);
        let g = c125.element(&[1]).unwrap();
        assert_eq!(c125.scale(&g, 125), c125.identity());
        assert!(t21.element(&[1, 2, 3]).is_err());
    }

    #[test]
    fn normalizes_and_rejects() {
        assert_eq!(t(3, &[1, 2]).exponents(), &[2, 1]);
        assert!(AbelianType::new(2, &[1]).is_err());
        assert!(AbelianType::new(9, &[1]).is_err());
        assert!(AbelianType::new(3, &[0]).is_err());
    }

    #[test]
    fn element_orders() {
        let t21 = t(3, &[2, 1]);
        assert_eq!(t21.element_order(&t21.element(&[1, 0]).unwrap()), 9);
        assert_eq!(t21.element_order(&t21.element(&[3, 1]).unwrap()), 3);
        let t1111 = t(3, &[1, 1, 1, 1]);
        assert_eq!(t1111.element_order(&t1111.identity()), 1);
    }

    #[test]
    fn index_round_trip() {
        let ty = t(3, &[2, 1, 1]);
        for i in 0..ty.order() as usize {
            assert_eq!(ty.index(&ty.from_index(i)), i);
        }
        assert_eq!(ty.from_index(1), ty.generator(0));
    }

    #[test]
    fn endo_validation() {
        let t21 = t(3, &[2, 1]);
        assert_eq!(
            t21.endo(&[vec![1, 1], vec![0, 1]]),
            Err(Error::IllDefinedEndo { row: 0, col: 1 })
        );
        assert!(t21.endo(&[vec![1, 3], vec![0, 1]]).is_ok());
        let t11 = t(3, &[1, 1]);
        let m = t11.endo(&[vec![7, -1], vec![4, 5]]).unwrap();
        assert_eq!(m.rows(&t11), vec![vec![1, 2], vec![1, 2]]);
    }

    #[test]
    fn endo_apply_examples() {
        let t11 = t(3, &[1, 1]);
        let m = t11.endo(&[vec![1, 0], vec![1, 1]]).unwrap();
        assert_eq!(t11.apply(&m, &t11.element(&[1, 0]).unwrap()), t11.element(&[1, 1]).unwrap());
        let x = t11.element(&[2, 1]).unwrap();
        assert_eq!(t11.apply(&t11.identity_endo(), &x), x);
        let t21 = t(3, &[2, 1]);
        let m = t21.endo(&[vec![1, 3], vec![0, 1]]).unwrap();
        assert_eq!(t21.apply(&m, &t21.element(&[0, 1]).unwrap()), t21.element(&[3, 1]).unwrap());
    }

    #[test]
    fn endo_ring_examples() {
        let t11 = t(3, &[1, 1]);
        let id = t11.identity_endo();
        assert_eq!(t11.endo_add(&id, &t11.endo_neg(&id)), t11.zero_endo());
        let m = t11.endo(&[vec![1, 0], vec![1, 1]]).unwrap();
        assert_eq!(t11.compose(&id, &m), m);
        let m2 = t11.compose(&m, &m);
        let sum = t11.endo_add(&t11.endo_add(&id, &m), &m2);
        // Id + m + m^2 = [[3,0],[3,3]] = 0 mod 3
        assert_eq!(sum, t11.zero_endo());
    }

    #[test]
    fn code_round_trip() {
        let ty = t(5, &[2, 1, 1]);
        let m = ty.endo(&[vec![7, 5, 10], vec![3, 2, 1], vec![4, 0, 3]]).unwrap();
        assert_eq!(ty.decode(ty.code(&m)), m);
    }

    #[test]
    fn determinant_agrees_with_bijectivity() {
        for ty in [t(3, &[2, 1]), t(3, &[1, 1]), t(5, &[1, 1]), t(3, &[2])] {
            for m in aut::all_endos(&ty) {
                assert_eq!(ty.is_automorphism(&m), ty.is_bijective(&m), "{m:?}");
            }
        }
    }

    #[test]
    fn omega1_examples() {
        let t21 = t(3, &[2, 1]);
        let om = t21.omega1();
        assert_eq!(om.order(), 9);
        assert!(om.elements().iter().all(|x| x.coords[0] % 3 == 0));
        assert_eq!(om.elements().len(), 9);
        let t111 = t(5, &[1, 1, 1]);
        assert_eq!(t111.omega1().elements().len(), 125);
        let c27 = t(3, &[3]);
        let els: Vec<u32> = c27.omega1().elements().iter().map(|x| x.coords[0]).collect();
        assert_eq!(els, vec![0, 9, 18]);
    }

    #[test]
    fn order_statistics_recover_type() {
        for ty in [t(3, &[2, 1, 1]), t(5, &[3]), t(3, &[1, 1, 1, 1]), t(3, &[2, 2])] {
            let back = AbelianType::from_order_statistics(ty.p(), &ty.order_statistics()).unwrap();
            assert_eq!(back, ty);
        }
    }
}
