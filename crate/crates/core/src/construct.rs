//! From a nonabelian p-group `N` with `|[N, N]| = p`, the abelian group `A`
//! with the same order statistics and a regular subgroup `N' ≅ N` of `Hol(A)`
//! whose normalizer has order `|Hol(N)|`.
//!
//! With a basis `b_i` of `N/[N, N]` lifted to `β_i` and `c` generating
//! `[N, N]`, put `β_i β_j β_i^{-1} = c^{k_ij} β_j`. Then
//! `φ_i(d) = d`, `φ_i(α_j) = d^{k_ij/2} α_j` and
//! `N' = ⟨(α_i, φ_i), (d, Id)⟩`.

use crate::abelian::{aut_order_formula, AbelianElement, AbelianType, AutGroup, EndoMatrix};
use crate::abelian::aut::DEFAULT_CANDIDATE_BUDGET;
use crate::arith;
use crate::error::{Error, Result};
use crate::group::{automorphism_count, find_isomorphism, FiniteGroup};
use crate::holomorph::{normalizer_order, HolElement, HolSubgroup, Holomorph, ScanStrategy};
use serde::Serialize;

pub const DEFAULT_SCAN_BUDGET: u64 = 2_000_000_000;
/// Scan budget for jobs gated behind `--long-running`.
pub const LONG_SCAN_BUDGET: u64 = 20_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    /// `β_{i0}` has order `p · ord(b_{i0})` and `d = α_{i0}^{ord(b_{i0})}`.
    Split,
    /// Every `β_i` has the order of `b_i`; `d` is an extra generator.
    ExtraD,
}

/// Everything derived from `N` before building automorphisms.
#[derive(Clone, Debug)]
pub struct ConstructionPlan {
    pub source: FiniteGroup,
    pub p: u32,
    /// Element indices of the lifts `β_i` in `source`.
    pub lifts: Vec<usize>,
    /// `ord(b_i)` in `N/[N, N]`.
    pub basis_orders: Vec<u64>,
    /// Element index of `c`.
    pub central: usize,
    pub case: Case,
    /// `i0` in the split case.
    pub split_index: Option<usize>,
    /// `k[i][j]` with `β_i β_j β_i^{-1} = c^{k_ij} β_j`, `0 <= k < p`.
    pub k: Vec<Vec<u32>>,
    pub target: AbelianType,
    /// Coordinates of `α_i` in `target`.
    pub alphas: Vec<AbelianElement>,
    pub d: AbelianElement,
}

/// `N/[N, N]` through coset representatives (least element index).
struct Quotient<'a> {
    g: &'a FiniteGroup,
    rep: Vec<usize>,
}

impl<'a> Quotient<'a> {
    fn new(g: &'a FiniteGroup, normal: &[usize]) -> Self {
        let rep = (0..g.order()).map(|x| normal.iter().map(|&d| g.mul(x, d)).min().unwrap()).collect();
        Self { g, rep }
    }

    /// Order of `x` modulo the subgroup `span` (a set of representatives).
    fn order_mod(&self, x: usize, span: &[bool]) -> u64 {
        let mut cur = x;
        let mut k = 1;
        while !span[self.rep[cur]] {
            cur = self.g.mul(cur, x);
            k += 1;
        }
        k
    }

    /// Representatives in the subgroup generated by `gens` and `[N, N]`.
    fn span(&self, gens: &[usize]) -> Vec<bool> {
        let mut member = vec![false; self.g.order()];
        let mut all = gens.to_vec();
        all.push(0);
        for x in self.g.closure(&all) {
            member[self.rep[x]] = true;
        }
        member
    }
}

/// Exponent `k` with `x = c^k`, for `x ∈ ⟨c⟩`.
fn discrete_log(g: &FiniteGroup, c: usize, x: usize, p: u32) -> Result<u32> {
    let mut cur = 0;
    for k in 0..p {
        if cur == x {
            return Ok(k);
        }
        cur = g.mul(cur, c);
    }
    Err(Error::Violation("commutator outside ⟨c⟩".into()))
}

/// Builds the plan for `n`; fails with `DerivedOrder` unless `|[N, N]| = p`.
pub fn derive_abelian_target(n: &FiniteGroup) -> Result<ConstructionPlan> {
    let Some(p) = n.prime() else {
        return Err(Error::InvalidInput("group order is not a prime power".into()));
    };
    if p == 2 {
        return Err(Error::InvalidInput("p must be odd".into()));
    }
    let p32 = p as u32;
    let derived = n.derived_subgroup();
    if derived.len() as u64 != p {
        return Err(Error::DerivedOrder(derived.len() as u64));
    }
    let q = Quotient::new(n, &derived);
    let q_order = (n.order() / derived.len()) as u64;

    // Basis of the abelianization: repeatedly take the coset of largest order
    // modulo the current span among those whose cyclic subgroup meets the span
    // trivially, least representative first.
    let mut lifts: Vec<usize> = Vec::new();
    let mut basis_orders: Vec<u64> = Vec::new();
    let mut span = q.span(&[]);
    while basis_orders.iter().product::<u64>() < q_order {
        let mut best: Option<(u64, usize)> = None;
        for x in 0..n.order() {
            if q.rep[x] != x || span[x] {
                continue;
            }
            let o = q.order_mod(x, &span);
            let free = q.order_mod(x, &q.span(&[])) == o;
            if free && best.is_none_or(|(bo, _)| o > bo) {
                best = Some((o, x));
            }
        }
        let (o, x) = best.ok_or_else(|| Error::Violation("abelianization basis not found".into()))?;
        lifts.push(x);
        basis_orders.push(o);
        span = q.span(&lifts);
    }
    if span.iter().filter(|&&s| s).count() as u64 != q_order {
        return Err(Error::Violation("abelianization basis does not span".into()));
    }

    // Lifts with order p·ord(b_i); keep one (largest b-order, least index) and
    // correct the others by a power of it so that they have order ord(b_i).
    let extra: Vec<usize> = (0..lifts.len()).filter(|&i| n.element_order(lifts[i]) > basis_orders[i]).collect();
    let split_index = extra.iter().copied().max_by_key(|&i| (basis_orders[i], std::cmp::Reverse(i)));
    let central = match split_index {
        Some(i0) => {
            let c = n.pow(lifts[i0], basis_orders[i0]);
            for &i in &extra {
                if i == i0 {
                    continue;
                }
                let u = discrete_log(n, c, n.pow(lifts[i], basis_orders[i]), p32)?;
                let m = basis_orders[i0] / basis_orders[i] * u as u64;
                lifts[i] = n.mul(lifts[i], n.pow(n.inv(lifts[i0]), m));
                if n.element_order(lifts[i]) != basis_orders[i] {
                    return Err(Error::Violation("lift correction failed".into()));
                }
            }
            c
        }
        None => *derived.iter().find(|&&x| x != 0).unwrap(),
    };
    let s = lifts.len();
    let mut k = vec![vec![0u32; s]; s];
    for i in 0..s {
        for j in 0..s {
            k[i][j] = discrete_log(n, central, n.commutator(lifts[i], lifts[j]), p32)?;
        }
    }

    // A with generators α_1..α_s (and d), sorted into canonical order.
    let mut orders: Vec<u64> = (0..s).map(|i| n.element_order(lifts[i])).collect();
    let case = if split_index.is_some() { Case::Split } else { Case::ExtraD };
    if case == Case::ExtraD {
        orders.push(p);
    }
    let mut slots: Vec<usize> = (0..orders.len()).collect();
    slots.sort_by_key(|&i| (std::cmp::Reverse(orders[i]), i));
    let exponents: Vec<u32> = slots.iter().map(|&i| arith::log_p(orders[i], p).unwrap()).collect();
    let target = AbelianType::new(p32, &exponents)?;
    let position = |slot: usize| slots.iter().position(|&x| x == slot).unwrap();
    let unit = |slot: usize| target.generator(position(slot));
    let alphas: Vec<AbelianElement> = (0..s).map(unit).collect();
    let d = match split_index {
        Some(i0) => target.scale(&alphas[i0], basis_orders[i0]),
        None => unit(s),
    };
    if target.order_statistics() != n.order_statistics() {
        return Err(Error::Violation("A and N have different order statistics".into()));
    }
    Ok(ConstructionPlan {
        source: n.clone(),
        p: p32,
        lifts,
        basis_orders,
        central,
        case,
        split_index,
        k,
        target,
        alphas,
        d,
    })
}

/// `φ_i` as matrices over `A`; checks `φ_i(d) = d`, `φ_i^p = Id` and that the
/// `φ_i` commute.
pub fn build_phi(plan: &ConstructionPlan) -> Result<Vec<EndoMatrix>> {
    let t = &plan.target;
    let p = plan.p as u64;
    let half = arith::inv_mod(2, p).unwrap();
    let s = plan.alphas.len();
    let mut phis = Vec::with_capacity(s);
    for i in 0..s {
        // Images of the canonical generators of A.
        let mut images: Vec<AbelianElement> = (0..t.rank()).map(|g| t.generator(g)).collect();
        for j in 0..s {
            let g = (0..t.rank()).find(|&g| t.generator(g) == plan.alphas[j]).unwrap();
            let shift = plan.k[i][j] as u64 * half % p;
            images[g] = t.add(&plan.alphas[j], &t.scale(&plan.d, shift));
        }
        let raw: Vec<Vec<i64>> =
            (0..t.rank()).map(|r| (0..t.rank()).map(|c| images[c].coord(r) as i64).collect()).collect();
        let phi = t.endo(&raw).map_err(|e| Error::Violation(format!("φ_{i} is not well defined: {e}")))?;
        if t.apply(&phi, &plan.d) != plan.d {
            return Err(Error::Violation(format!("φ_{i} moves d")));
        }
        if t.endo_pow(&phi, p) != t.identity_endo() {
            return Err(Error::Violation(format!("φ_{i}^p is not the identity")));
        }
        for a in &plan.alphas {
            let ap = t.scale(a, p);
            if t.apply(&phi, &ap) != ap {
                return Err(Error::Violation(format!("φ_{i} moves a p-th power")));
            }
        }
        phis.push(phi);
    }
    for a in &phis {
        for b in &phis {
            if t.compose(a, b) != t.compose(b, a) {
                return Err(Error::Violation("the φ_i do not commute".into()));
            }
        }
    }
    Ok(phis)
}

/// `N' = ⟨(α_i, φ_i), (d, Id)⟩`, checked against the claimed relations.
pub fn build_regular_nprime(plan: &ConstructionPlan, phis: &[EndoMatrix]) -> Result<HolSubgroup> {
    let t = &plan.target;
    let hol = Holomorph::new(t);
    let gens: Vec<HolElement> = plan.alphas.iter().zip(phis).map(|(a, phi)| HolElement { point: *a, auto: *phi }).collect();
    let dd = hol.translation(&plan.d);
    let mut all = gens.clone();
    all.push(dd);
    let sub = HolSubgroup::closure(t, all, t.order())
        .map_err(|_| Error::Violation("N' is larger than N".into()))?;
    if sub.order() != t.order() || !sub.classify_action().regular {
        return Err(Error::Violation("N' is not regular".into()));
    }
    for (i, gi) in gens.iter().enumerate() {
        for (j, gj) in gens.iter().enumerate() {
            let lhs = hol.mul(&hol.mul(gi, gj), &hol.inv(gi));
            let rhs = hol.mul(&hol.pow(&dd, plan.k[i][j] as u64), gj);
            if lhs != rhs {
                return Err(Error::Violation(format!("conjugation law fails for ({i}, {j})")));
            }
        }
        if hol.mul(gi, &dd) != hol.mul(&dd, gi) {
            return Err(Error::Violation(format!("d does not commute with generator {i}")));
        }
        let order = plan.source.element_order(plan.lifts[i]);
        if hol.element_order(gi) != order {
            return Err(Error::Violation(format!("generator {i} has the wrong order")));
        }
        for m in 0..order {
            let expected = HolElement { point: t.scale(&gi.point, m), auto: t.endo_pow(&gi.auto, m) };
            if hol.pow(gi, m) != expected {
                return Err(Error::Violation(format!("power {m} of generator {i} is not (mα, φ^m)")));
            }
        }
    }
    if hol.element_order(&dd) != plan.p as u64 {
        return Err(Error::Violation("d does not have order p".into()));
    }
    Ok(sub)
}

/// Whether every translation `(x, Id)` normalizes `sub`.
pub fn translations_normalize(sub: &HolSubgroup) -> bool {
    let t = sub.ambient();
    let hol = sub.holomorph();
    t.elements().all(|x| {
        let h = hol.translation(&x);
        let h_inv = hol.translation(&t.neg(&x));
        sub.generators().iter().all(|g| sub.contains(&hol.mul(&hol.mul(&h, g), &h_inv)))
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Checks {
    pub regular: bool,
    pub isomorphic_to_n: bool,
    pub order_stats_match: bool,
    pub translations_normalize: bool,
    pub aut_a_matches_formula: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonabReport {
    #[serde(rename = "A")]
    pub a: crate::spec::GroupSpec,
    pub case: Case,
    pub k: Vec<Vec<u32>>,
    pub phi: Vec<Vec<Vec<u32>>>,
    pub checks: Checks,
    #[serde(serialize_with = "as_string")]
    pub aut_n_order: u64,
    #[serde(serialize_with = "as_string")]
    pub aut_a_order: u64,
    #[serde(serialize_with = "as_string")]
    pub normalizer_order: u64,
    #[serde(serialize_with = "as_string")]
    pub hol_order: u64,
    pub theorem_holds: bool,
}

fn as_string<S: serde::Serializer>(v: &u64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Runs the construction and compares `|Nor_{Hol(A)}(N')|` with
/// `|Hol(N)| = |N| · |Aut(N)|`.
pub fn verify_nonab_theorem(n: &FiniteGroup, strategy: ScanStrategy, budget: u64) -> Result<NonabReport> {
    let plan = derive_abelian_target(n)?;
    let phis = build_phi(&plan)?;
    let nprime = build_regular_nprime(&plan, &phis)?;
    let t = &plan.target;
    let isomorphic = find_isomorphism(&nprime.to_group(), n)?.is_some();
    let aut_a = AutGroup::enumerate(t, DEFAULT_CANDIDATE_BUDGET)?;
    let aut_n = automorphism_count(n, budget)?;
    let normalizer = normalizer_order(&nprime, &aut_a, strategy, budget)?;
    let hol_order = n.order() as u64 * aut_n;
    let checks = Checks {
        regular: nprime.classify_action().regular,
        isomorphic_to_n: isomorphic,
        order_stats_match: t.order_statistics() == n.order_statistics(),
        translations_normalize: translations_normalize(&nprime),
        aut_a_matches_formula: aut_order_formula(t) == Some(aut_a.order() as u128),
    };
    let all = checks.regular
        && checks.isomorphic_to_n
        && checks.order_stats_match
        && checks.translations_normalize
        && checks.aut_a_matches_formula;
    Ok(NonabReport {
        a: crate::spec::GroupSpec::Abelian { p: t.p(), exponents: t.exponents().to_vec() },
        case: plan.case,
        k: plan.k.clone(),
        phi: phis.iter().map(|m| m.rows(t)).collect(),
        checks,
        aut_n_order: aut_n,
        aut_a_order: aut_a.order(),
        normalizer_order: normalizer,
        hol_order,
        theorem_holds: all && normalizer == hol_order,
    })
}
