//! Regular subgroups of `Hol(N)`: search for one isomorphic to a target,
//! exhaustive enumeration, and classification up to `Aut(N)`-conjugacy.
//!
//! A semiregular subgroup `S` is stored as a partial gamma table: at most one
//! element `(x, γ(x))` over each point. The search extends `S` point by point:
//! the least uncovered point `x` must carry exactly one element `(x, φ)` of any
//! regular subgroup containing `S`, so branching on `φ` visits every regular
//! subgroup exactly once. `φ` ranges over a pool of automorphisms: a Sylow
//! p-subgroup of `Aut(N)`, or every p-element of `Aut(N)`.

use crate::abelian::aut::{check_budget, lower_unitriangular_sylow, p_automorphisms};
use crate::abelian::{aut_order_formula, AbelianType, AutGroup, EndoMatrix};
use crate::arith;
use crate::brace::{delta, gamma_from_regular, nilpotency_index};
use crate::error::{Error, Result};
use crate::group::catalog::{identify, GroupType};
use crate::group::{find_isomorphism, FiniteGroup, OrderStatistics};
use crate::holomorph::{HolElement, HolSubgroup, Holomorph};
use crate::spec::GroupSpec;
use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

pub const DEFAULT_MAX_NODES: u64 = 200_000_000;
/// Largest Sylow subgroup of `Aut(N)` built by [`sylow_p_of_aut`].
pub const MAX_SYLOW_ORDER: u64 = 1_000_000;

/// Automorphisms allowed as gamma values, identity first then by code.
#[derive(Clone, Debug)]
pub struct AutPool {
    ty: AbelianType,
    elements: Vec<EndoMatrix>,
    restricted: bool,
    aut_order: u64,
}

impl AutPool {
    pub fn new(t: &AbelianType, restrict: bool, budget: u64) -> Result<Self> {
        if restrict {
            sylow_p_of_aut(t, budget)
        } else {
            p_elements_of_aut(t, budget)
        }
    }

    pub fn ambient(&self) -> &AbelianType {
        &self.ty
    }

    pub fn elements(&self) -> &[EndoMatrix] {
        &self.elements
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn restricted(&self) -> bool {
        self.restricted
    }

    /// `|Aut(N)|` from the closed-form count.
    pub fn aut_order(&self) -> u64 {
        self.aut_order
    }

    fn sorted(ty: &AbelianType, mut elements: Vec<EndoMatrix>, restricted: bool, aut_order: u64) -> Self {
        let id = ty.identity_endo();
        elements.sort_by_key(|m| (*m != id, ty.code(m)));
        Self { ty: ty.clone(), elements, restricted, aut_order }
    }
}

fn formula_order(t: &AbelianType) -> Result<u64> {
    aut_order_formula(t)
        .and_then(|o| u64::try_from(o).ok())
        .ok_or_else(|| Error::Budget(format!("|Aut({t})| does not fit in 64 bits")))
}

/// Every automorphism of p-power order. A regular subgroup has order `p^n`,
/// so its gamma values are p-elements and this pool loses nothing.
pub fn p_elements_of_aut(t: &AbelianType, budget: u64) -> Result<AutPool> {
    check_budget(t, budget)?;
    Ok(AutPool::sorted(t, p_automorphisms(t).collect(), false, formula_order(t)?))
}

/// The Sylow p-subgroup of `Aut(N)` of automorphisms that are lower
/// unitriangular modulo `p`. Reduction modulo `p` maps `Aut(N)` onto a block
/// lower triangular subgroup of `GL_s(F_p)` with p-group kernel, and the lower
/// unitriangular matrices are a Sylow p-subgroup of that image.
pub fn sylow_p_of_aut(t: &AbelianType, budget: u64) -> Result<AutPool> {
    let aut_order = formula_order(t)?;
    let target = arith::p_part(aut_order, t.p() as u64);
    if target > MAX_SYLOW_ORDER.min(budget) {
        return Err(Error::Budget(format!("Sylow subgroup of order {target} exceeds the budget")));
    }
    let elements: Vec<EndoMatrix> = lower_unitriangular_sylow(t).collect();
    if elements.len() as u64 != target {
        return Err(Error::Violation(format!("Sylow subgroup has {} elements, expected {target}", elements.len())));
    }
    Ok(AutPool::sorted(t, elements, true, aut_order))
}

/// A target group for [`search_regular`].
#[derive(Clone, Debug)]
pub struct Target {
    pub group: FiniteGroup,
    pub kind: GroupType,
    stats: OrderStatistics,
    abelian: bool,
    center_order: usize,
    derived_order: usize,
}

impl Target {
    pub fn new(group: FiniteGroup) -> Result<Self> {
        let kind = identify(&group)?;
        let stats = group.order_statistics();
        let abelian = group.is_abelian();
        let (center_order, derived_order) =
            if abelian { (group.order(), 1) } else { (group.center().len(), group.derived_subgroup().len()) };
        Ok(Self { group, kind, stats, abelian, center_order, derived_order })
    }

    pub fn abelian(t: &AbelianType) -> Result<Self> {
        Self::new(FiniteGroup::from_abelian(t))
    }

    pub fn order(&self) -> u64 {
        self.group.order() as u64
    }

    fn filter(&self, p: u32) -> Filter {
        let mut max_count = [0u64; 64];
        for (&o, &c) in &self.stats {
            max_count[arith::log_p(o, p as u64).unwrap_or(0) as usize] = c;
        }
        Filter { abelian: self.abelian, max_count }
    }

    /// Whether the regular subgroup `sub` is isomorphic to the target.
    pub fn matches(&self, sub: &HolSubgroup) -> Result<bool> {
        self.matches_group(&sub.to_group())
    }

    fn matches_group(&self, g: &FiniteGroup) -> Result<bool> {
        if g.order_statistics() != self.stats || g.is_abelian() != self.abelian {
            return Ok(false);
        }
        if self.abelian {
            return Ok(true);
        }
        if g.center().len() != self.center_order || g.derived_subgroup().len() != self.derived_order {
            return Ok(false);
        }
        Ok(find_isomorphism(g, &self.group)?.is_some())
    }
}

/// Necessary conditions on every subgroup of the target.
#[derive(Clone, Debug)]
struct Filter {
    abelian: bool,
    /// Number of target elements of order `p^k`, by `k`.
    max_count: [u64; 64],
}

const UNCOVERED: u32 = u32::MAX;

/// Depth-first search state: a semiregular subgroup as a partial gamma table.
struct Search<'a> {
    ty: &'a AbelianType,
    hol: Holomorph,
    pool: &'a [EndoMatrix],
    filter: Option<Filter>,
    max_nodes: u64,
    /// Pool index of `γ(x)` per point, or `UNCOVERED`.
    gamma: Vec<u32>,
    members: Vec<u32>,
    log_orders: Vec<u8>,
    counts: [u64; 64],
    gens: Vec<HolElement>,
    gen_pool: Vec<u32>,
    codes: Vec<u64>,
    code_to_pool: rustc_hash::FxHashMap<u64, u32>,
    /// Pool index of each inverse; set when only existence matters and the
    /// pool is a group, enabling the reduction in [`Search::choices`].
    inverses: Option<&'a [u32]>,
    nodes: u64,
}

enum Flow {
    Continue,
    Stop,
}

impl<'a> Search<'a> {
    fn new(
        ty: &'a AbelianType,
        pool: &'a [EndoMatrix],
        inverses: Option<&'a [u32]>,
        filter: Option<Filter>,
        max_nodes: u64,
    ) -> Self {
        let codes: Vec<u64> = pool.iter().map(|m| ty.code(m)).collect();
        let code_to_pool = codes.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
        let mut gamma = vec![UNCOVERED; ty.order() as usize];
        gamma[0] = 0;
        let mut counts = [0u64; 64];
        counts[0] = 1;
        Self {
            ty,
            hol: Holomorph::new(ty),
            pool,
            filter,
            max_nodes,
            gamma,
            members: vec![0],
            log_orders: vec![0],
            counts,
            gens: Vec::new(),
            gen_pool: Vec::new(),
            codes,
            code_to_pool,
            inverses,
            nodes: 0,
        }
    }

    fn element(&self, point: u32) -> HolElement {
        HolElement { point: self.ty.from_index(point as usize), auto: self.pool[self.gamma[point as usize] as usize] }
    }

    fn rollback(&mut self, len: usize) {
        for i in len..self.members.len() {
            self.gamma[self.members[i] as usize] = UNCOVERED;
            self.counts[self.log_orders[i] as usize] -= 1;
        }
        self.members.truncate(len);
        self.log_orders.truncate(len);
    }

    /// Log-order of `h` in a semiregular group: `h^k = 1` iff `h^k` fixes `e_N`.
    fn log_order(&self, h: &HolElement) -> u8 {
        let p = self.ty.p() as u64;
        let zero = self.ty.identity();
        let mut cur = *h;
        let mut k = 0;
        while cur.point != zero {
            cur = self.hol.pow(&cur, p);
            k += 1;
        }
        k
    }

    fn insert(&mut self, y: &HolElement) -> bool {
        let idx = self.ty.index(&y.point);
        let code = self.ty.code(&y.auto);
        let g = self.gamma[idx];
        if g != UNCOVERED {
            return self.codes[g as usize] == code;
        }
        let Some(&pi) = self.code_to_pool.get(&code) else {
            return false;
        };
        let lo = if self.filter.is_some() { self.log_order(y) } else { 0 };
        if let Some(f) = &self.filter {
            if self.counts[lo as usize] + 1 > f.max_count[lo as usize] {
                return false;
            }
        }
        self.gamma[idx] = pi;
        self.members.push(idx as u32);
        self.log_orders.push(lo);
        self.counts[lo as usize] += 1;
        true
    }

    /// Closes `S ∪ {g}`; on failure the state is left unchanged.
    fn extend(&mut self, g: HolElement, pool_index: u32) -> bool {
        if let Some(f) = &self.filter {
            if f.abelian && self.gens.iter().any(|h| self.hol.mul(h, &g) != self.hol.mul(&g, h)) {
                return false;
            }
        }
        let old = self.members.len();
        self.gens.push(g);
        self.gen_pool.push(pool_index);
        let mut ok = true;
        'close: {
            for i in 0..old {
                let y = self.hol.mul(&self.element(self.members[i]), &g);
                if !self.insert(&y) {
                    ok = false;
                    break 'close;
                }
            }
            let mut head = old;
            while head < self.members.len() {
                let e = self.element(self.members[head]);
                head += 1;
                for k in 0..self.gens.len() {
                    let y = self.hol.mul(&e, &self.gens[k]);
                    if !self.insert(&y) {
                        ok = false;
                        break 'close;
                    }
                }
            }
        }
        if !ok {
            self.rollback(old);
            self.gens.pop();
            self.gen_pool.pop();
        }
        ok
    }

    fn first_uncovered(&self) -> Option<usize> {
        self.gamma.iter().position(|&g| g == UNCOVERED)
    }

    fn retract(&mut self, old: usize) {
        self.rollback(old);
        self.gens.pop();
        self.gen_pool.pop();
    }

    /// Tries `φ = pool[choice]` at the least uncovered point, then recurses.
    fn branch(&mut self, x: usize, choice: usize, leaf: &mut dyn FnMut(&Self) -> Result<Flow>) -> Result<Flow> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::Budget(format!("search exceeded {} nodes", self.max_nodes)));
        }
        let old = self.members.len();
        let g = HolElement { point: self.ty.from_index(x), auto: self.pool[choice] };
        if old as u64 * self.ty.p() as u64 == self.ty.order() && !self.normalizes(&g) {
            return Ok(Flow::Continue);
        }
        if !self.extend(g, choice as u32) {
            return Ok(Flow::Continue);
        }
        let flow = self.descend(leaf)?;
        self.retract(old);
        Ok(flow)
    }

    fn conjugate(&self, chi: u32, phi: u32) -> Option<u32> {
        let t = self.ty;
        let inv = self.inverses?[chi as usize] as usize;
        let m = t.compose(&t.compose(&self.pool[chi as usize], &self.pool[phi as usize]), &self.pool[inv]);
        self.code_to_pool.get(&t.code(&m)).copied()
    }

    /// Pool indices to try at the uncovered point `x`. With inverses set, one
    /// per orbit of `H = {χ : χ(x) = x, χ S χ^{-1} = S}` acting by
    /// conjugation: conjugating by `(e_N, χ)` fixes `S` and sends regular
    /// subgroups through `(x, φ)` to isomorphic ones through `(x, χφχ^{-1})`.
    fn choices(&self, x: usize) -> Vec<usize> {
        let n = self.pool.len();
        if self.inverses.is_none() {
            return (0..n).collect();
        }
        let t = self.ty;
        let point = t.from_index(x);
        let h: Vec<u32> = (1..n as u32)
            .filter(|&chi| {
                let c = &self.pool[chi as usize];
                t.apply(c, &point) == point
                    && self.gen_pool.iter().zip(&self.gens).all(|(&gp, g)| {
                        let y = t.index(&t.apply(c, &g.point));
                        let over = self.gamma[y];
                        over != UNCOVERED && self.conjugate(chi, gp) == Some(over)
                    })
            })
            .collect();
        if h.is_empty() {
            return (0..n).collect();
        }
        let mut seen = vec![false; n];
        let mut reps = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            reps.push(i);
            for &chi in &h {
                if let Some(k) = self.conjugate(chi, i as u32) {
                    seen[k as usize] = true;
                }
            }
        }
        reps
    }

    fn descend(&mut self, leaf: &mut dyn FnMut(&Self) -> Result<Flow>) -> Result<Flow> {
        let Some(x) = self.first_uncovered() else {
            return leaf(self);
        };
        for choice in self.choices(x) {
            if let Flow::Stop = self.branch(x, choice, leaf)? {
                return Ok(Flow::Stop);
            }
        }
        Ok(Flow::Continue)
    }

    /// Whether `g` normalizes the current subgroup, which is necessary when
    /// the subgroup has index `p`.
    fn normalizes(&self, g: &HolElement) -> bool {
        let g_inv = self.hol.inv(g);
        self.gens.iter().all(|s| {
            let c = self.hol.mul(&self.hol.mul(g, s), &g_inv);
            let over = self.gamma[self.ty.index(&c.point)];
            over != UNCOVERED && self.codes[over as usize] == self.ty.code(&c.auto)
        })
    }

    /// Order of the centre of the current subgroup.
    fn center_order(&self) -> usize {
        self.members
            .iter()
            .filter(|&&x| {
                let e = self.element(x);
                self.gens.iter().all(|g| self.hol.mul(&e, g) == self.hol.mul(g, &e))
            })
            .count()
    }

    /// The current (complete) gamma table as an abstract group on points,
    /// `x ∘ y = x + γ(x) y`.
    fn circ_group(&self) -> FiniteGroup {
        let t = self.ty;
        let points: Vec<_> = (0..self.gamma.len()).map(|x| t.from_index(x)).collect();
        FiniteGroup::from_fn(points.len(), |a, b| {
            let phi = &self.pool[self.gamma[a] as usize];
            t.index(&t.add(&points[a], &t.apply(phi, &points[b])))
        })
        .expect("a regular subgroup is a group")
    }

    /// The current (complete) gamma table as a subgroup.
    fn subgroup(&self) -> HolSubgroup {
        let elements = (0..self.gamma.len() as u32).map(|x| self.element(x)).collect();
        HolSubgroup::from_parts(self.ty, self.gens.clone(), elements)
    }
}

fn pool_inverses(pool: &AutPool) -> Result<Vec<u32>> {
    let t = &pool.ty;
    let index: rustc_hash::FxHashMap<u64, u32> =
        pool.elements.iter().enumerate().map(|(i, m)| (t.code(m), i as u32)).collect();
    pool.elements
        .iter()
        .map(|m| {
            index
                .get(&t.code(&t.endo_inverse(m)))
                .copied()
                .ok_or_else(|| Error::Violation("automorphism pool is not closed under inverses".into()))
        })
        .collect()
}

/// First-level branches run in parallel in batches of this size, so that a
/// spent budget stops the search early.
const BRANCH_CHUNK: usize = 64;

/// Result of one first-level branch.
struct BranchResult<T> {
    nodes: u64,
    found: Vec<T>,
    budget_hit: bool,
}

/// Runs every first-level branch (choice of `γ` at the generator `e_0`) and
/// combines them in branch order. When `stop_at_first` is set, choices are
/// reduced up to conjugacy, and branches after the first successful one are
/// skipped and do not count.
fn run_branches<T: Send>(
    ty: &AbelianType,
    pool: &AutPool,
    filter: Option<Filter>,
    max_nodes: u64,
    stop_at_first: bool,
    leaf: &(dyn Fn(&Search) -> Result<Option<T>> + Sync),
) -> Result<(Vec<T>, u64)> {
    if ty.order() == 1 {
        let s = Search::new(ty, &pool.elements, None, filter, max_nodes);
        return Ok((leaf(&s)?.into_iter().collect(), 0));
    }
    let inverses = (stop_at_first && pool.restricted).then(|| pool_inverses(pool)).transpose()?;
    let inverses = inverses.as_deref();
    let roots = Search::new(ty, &pool.elements, inverses, None, max_nodes).choices(1);
    let mut all = Vec::new();
    let mut nodes = 0u64;
    for chunk in roots.chunks(BRANCH_CHUNK) {
        let cap = max_nodes - nodes;
        let best = AtomicUsize::new(usize::MAX);
        let results: Vec<Result<Option<BranchResult<T>>>> = chunk
            .par_iter()
            .enumerate()
            .map(|(pos, &choice)| {
                if stop_at_first && pos > best.load(Ordering::Relaxed) {
                    return Ok(None);
                }
                let mut s = Search::new(ty, &pool.elements, inverses, filter.clone(), cap);
                let mut found = Vec::new();
                let mut leaf_err = None;
                let outcome = s.branch(1, choice, &mut |st| match leaf(st) {
                    Ok(Some(t)) => {
                        found.push(t);
                        Ok(if stop_at_first { Flow::Stop } else { Flow::Continue })
                    }
                    Ok(None) => Ok(Flow::Continue),
                    Err(e) => {
                        leaf_err = Some(e.clone());
                        Err(e)
                    }
                });
                if let Some(e) = leaf_err {
                    return Err(e);
                }
                let budget_hit = matches!(outcome, Err(Error::Budget(_)));
                if let Err(e) = outcome {
                    if !budget_hit {
                        return Err(e);
                    }
                }
                if stop_at_first && !found.is_empty() {
                    best.fetch_min(pos, Ordering::Relaxed);
                }
                Ok(Some(BranchResult { nodes: s.nodes, found, budget_hit }))
            })
            .collect();
        for r in results {
            let Some(r) = r? else { break };
            nodes += r.nodes;
            if r.budget_hit || nodes > max_nodes {
                return Err(Error::Budget(format!("search exceeded {max_nodes} nodes")));
            }
            let done = stop_at_first && !r.found.is_empty();
            all.extend(r.found);
            if done {
                return Ok((all, nodes));
            }
        }
    }
    Ok((all, nodes))
}

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub ambient: AbelianType,
    pub target: Target,
    pub restrict: bool,
    pub max_nodes: u64,
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(HolSubgroup),
    Exhausted,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub nodes: u64,
    pub pool_size: u64,
    pub restricted: bool,
    pub aut_order: u64,
}

/// Searches for a regular subgroup of `Hol(N)` isomorphic to the target.
/// `Exhausted` means the whole space was traversed: with the Sylow pool this
/// proves non-existence among regular subgroups whose gamma image lies in the
/// chosen Sylow subgroup, which covers every class up to `Aut(N)`-conjugacy.
pub fn search_regular(spec: &SearchSpec) -> Result<SearchResult> {
    let pool = AutPool::new(&spec.ambient, spec.restrict, arith::pow(10, 9))?;
    search_regular_in(spec, &pool)
}

pub fn search_regular_in(spec: &SearchSpec, pool: &AutPool) -> Result<SearchResult> {
    let t = &spec.ambient;
    if spec.target.order() != t.order() {
        return Err(Error::InvalidInput(format!(
            "target has order {} but the ambient group has order {}",
            spec.target.order(),
            t.order()
        )));
    }
    let target = &spec.target;
    let leaf = |s: &Search| -> Result<Option<HolSubgroup>> {
        if !target.abelian && s.center_order() != target.center_order {
            return Ok(None);
        }
        Ok(target.matches_group(&s.circ_group())?.then(|| s.subgroup()))
    };
    let (mut found, nodes) = run_branches(t, pool, Some(target.filter(t.p())), spec.max_nodes, true, &leaf)?;
    let outcome = match found.pop() {
        Some(sub) => {
            verify_witness(&sub, target)?;
            SearchOutcome::Found(sub)
        }
        None => SearchOutcome::Exhausted,
    };
    Ok(SearchResult { outcome, nodes, pool_size: pool.order(), restricted: pool.restricted, aut_order: pool.aut_order })
}

/// Regularity, isomorphism to the target and the gamma round trip.
pub fn verify_witness(sub: &HolSubgroup, target: &Target) -> Result<()> {
    if !sub.classify_action().regular {
        return Err(Error::Violation("witness is not regular".into()));
    }
    if !target.matches(sub)? {
        return Err(Error::Violation("witness is not isomorphic to the target".into()));
    }
    let g = gamma_from_regular(sub)?;
    let back = crate::brace::regular_from_gamma(&g)?;
    if back.canonical_keys() != sub.canonical_keys() {
        return Err(Error::Violation("gamma round trip changed the subgroup".into()));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub subgroups: Vec<HolSubgroup>,
    pub nodes: u64,
    pub pool_size: u64,
    pub restricted: bool,
    pub aut_order: u64,
}

/// Every regular subgroup whose gamma values lie in the pool, each once.
pub fn enumerate_regular(ambient: &AbelianType, restrict: bool, max_nodes: u64) -> Result<Enumeration> {
    let pool = AutPool::new(ambient, restrict, arith::pow(10, 9))?;
    enumerate_regular_in(&pool, max_nodes)
}

pub fn enumerate_regular_in(pool: &AutPool, max_nodes: u64) -> Result<Enumeration> {
    let leaf = |s: &Search| -> Result<Option<HolSubgroup>> { Ok(Some(s.subgroup())) };
    let (subgroups, nodes) = run_branches(&pool.ty, pool, None, max_nodes, false, &leaf)?;
    let mut seen = FxHashSet::default();
    for s in &subgroups {
        if !seen.insert(s.canonical_keys()) {
            return Err(Error::Violation("a regular subgroup was enumerated twice".into()));
        }
    }
    Ok(Enumeration { subgroups, nodes, pool_size: pool.order(), restricted: pool.restricted, aut_order: pool.aut_order })
}

/// Invariants of a regular subgroup under conjugation by `(e_N, χ)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct ConjugacyInvariant {
    circ: String,
    points: Vec<(u64, u64, u32, u64)>,
}

fn conjugacy_invariant(sub: &HolSubgroup) -> Result<ConjugacyInvariant> {
    let t = sub.ambient();
    let circ = serde_json::to_string(&sub.to_group().fingerprint()).expect("fingerprint serializes");
    let mut points: Vec<(u64, u64, u32, u64)> = sub
        .elements()
        .iter()
        .map(|h| {
            let d = delta(t, &h.auto);
            let kernel = t.elements().filter(|y| t.apply(&d, y) == t.identity()).count() as u64;
            (t.element_order(&h.point), t.endo_order(&h.auto), nilpotency_index(t, &d).unwrap_or(0), kernel)
        })
        .collect();
    points.sort_unstable();
    Ok(ConjugacyInvariant { circ, points })
}

/// Whether some `χ ∈ Aut(N)` conjugates `a` onto `b`: `χ (x, φ) χ^{-1} =
/// (χx, χφχ^{-1})`, tested on generators of `a` as `γ_b(χx) χ = χ φ`.
pub fn are_conjugate(a: &HolSubgroup, b: &HolSubgroup, aut: &AutGroup) -> Result<bool> {
    let t = a.ambient();
    let gb = gamma_from_regular(b)?;
    Ok(aut.codes().par_iter().any(|&code| {
        let chi = t.decode(code);
        a.generators().iter().all(|g| {
            let x = t.apply(&chi, &g.point);
            t.compose(gb.at(&x), &chi) == t.compose(&chi, &g.auto)
        })
    }))
}

/// Partitions regular subgroups into `Aut(N)`-conjugacy classes, listed by
/// first member; members keep input order.
pub fn classify_conjugacy(subs: &[HolSubgroup], aut: &AutGroup) -> Result<Vec<Vec<usize>>> {
    let mut buckets: BTreeMap<ConjugacyInvariant, Vec<usize>> = BTreeMap::new();
    for (i, s) in subs.iter().enumerate() {
        if !s.classify_action().regular {
            return Err(Error::NotRegular);
        }
        buckets.entry(conjugacy_invariant(s)?).or_default().push(i);
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for members in buckets.values() {
        let mut local: Vec<Vec<usize>> = Vec::new();
        for &i in members {
            let mut placed = false;
            for class in local.iter_mut() {
                if are_conjugate(&subs[class[0]], &subs[i], aut)? {
                    class.push(i);
                    placed = true;
                    break;
                }
            }
            if !placed {
                local.push(vec![i]);
            }
        }
        classes.extend(local);
    }
    classes.sort_by_key(|c| c[0]);
    Ok(classes)
}

/// Subgroup witness: the ambient spec, generators as `(point, matrix)` and
/// the action data.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub ambient: GroupSpec,
    pub generators: Vec<GeneratorReport>,
    pub order: u64,
    pub transitive: bool,
    pub regular: bool,
    pub stabilizer_order: u64,
    pub multiplicative_type: GroupType,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorReport {
    pub point: Vec<u32>,
    pub matrix: Vec<Vec<u32>>,
}

impl WitnessReport {
    pub fn new(sub: &HolSubgroup) -> Result<Self> {
        let t = sub.ambient();
        let action = sub.classify_action();
        Ok(Self {
            ambient: GroupSpec::Abelian { p: t.p(), exponents: t.exponents().to_vec() },
            generators: sub
                .generators()
                .iter()
                .map(|g| GeneratorReport { point: g.point.coords(t), matrix: g.auto.rows(t) })
                .collect(),
            order: sub.order(),
            transitive: action.transitive,
            regular: action.regular,
            stabilizer_order: sub.order() / action.orbit_of_identity.len() as u64,
            multiplicative_type: identify(&sub.to_group())?,
        })
    }
}

/// JSON report `{"pair", "realizable", "witness", "certificate"}`.
pub fn realizability_report(spec: &SearchSpec) -> Result<serde_json::Value> {
    let result = search_regular(spec)?;
    report_json(spec, &result)
}

pub fn report_json(spec: &SearchSpec, result: &SearchResult) -> Result<serde_json::Value> {
    let t = &spec.ambient;
    let (realizable, witness) = match &result.outcome {
        SearchOutcome::Found(sub) => (true, serde_json::to_value(WitnessReport::new(sub)?).expect("serializable")),
        SearchOutcome::Exhausted => (false, serde_json::Value::Null),
    };
    let space = if result.restricted {
        format!(
            "regular subgroups of {t} ⋊ P with P a Sylow {}-subgroup of Aut({t}) of order {}; every regular p-subgroup of Hol({t}) is Aut-conjugate into this space",
            t.p(),
            result.pool_size
        )
    } else {
        format!("regular subgroups of Hol({t}) with gamma values among the {} p-elements of Aut({t})", result.pool_size)
    };
    Ok(serde_json::json!({
        "pair": {
            "G": spec.target.kind,
            "N": GroupSpec::Abelian { p: t.p(), exponents: t.exponents().to_vec() },
        },
        "realizable": realizable,
        "witness": witness,
        "certificate": {
            "space": space,
            "nodes": result.nodes,
            "restricted": result.restricted,
            "pool_size": result.pool_size,
            "aut_order": result.aut_order.to_string(),
        },
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::aut::DEFAULT_CANDIDATE_BUDGET;
    use crate::brace::{brace_from_gamma, GammaFunction};

    fn ty(p: u32, e: &[u32]) -> AbelianType {
        AbelianType::new(p, e).unwrap()
    }

    /// Greedy Sylow construction: adjoin the first p-element `g ∉ H` with
    /// `g^p ∈ H` normalizing `H` until the order is right.
    fn greedy_sylow(t: &AbelianType) -> Vec<u64> {
        let all = p_elements_of_aut(t, u64::MAX).unwrap();
        let target = arith::p_part(all.aut_order(), t.p() as u64);
        let p = t.p() as u64;
        let mut gens: Vec<EndoMatrix> = Vec::new();
        let mut members = vec![t.identity_endo()];
        let mut codes: FxHashSet<u64> = [t.code(&t.identity_endo())].into_iter().collect();
        while (members.len() as u64) < target {
            let g = *all
                .elements()
                .iter()
                .find(|g| {
                    if codes.contains(&t.code(g)) || !codes.contains(&t.code(&t.endo_pow(g, p))) {
                        return false;
                    }
                    let g_inv = t.endo_inverse(g);
                    gens.iter().all(|h| codes.contains(&t.code(&t.compose(&t.compose(g, h), &g_inv))))
                })
                .unwrap();
            gens.push(g);
            let mut head = 0;
            while head < members.len() {
                let x = members[head];
                head += 1;
                for g in &gens {
                    let y = t.compose(&x, g);
                    if codes.insert(t.code(&y)) {
                        members.push(y);
                    }
                }
            }
        }
        let mut codes: Vec<u64> = codes.into_iter().collect();
        codes.sort_unstable();
        codes
    }

    #[test]
    fn sylow_agrees_with_greedy_construction_in_order() {
        for (p, e) in [(3, vec![2, 1]), (3, vec![1, 1, 1]), (5, vec![2, 1]), (3, vec![2, 2])] {
            let t = ty(p, &e);
            let direct = sylow_p_of_aut(&t, u64::MAX).unwrap();
            assert_eq!(greedy_sylow(&t).len() as u64, direct.order());
        }
    }

    #[test]
    fn sylow_orders() {
        assert_eq!(sylow_p_of_aut(&ty(3, &[2]), u64::MAX).unwrap().order(), 3);
        assert_eq!(sylow_p_of_aut(&ty(3, &[1, 1]), u64::MAX).unwrap().order(), 3);
        assert_eq!(sylow_p_of_aut(&ty(3, &[2, 1]), u64::MAX).unwrap().order(), 27);
        let s = sylow_p_of_aut(&ty(5, &[1, 1, 1]), u64::MAX).unwrap();
        assert_eq!(s.order(), 125);
        assert_eq!(s.aut_order(), 1_488_000);
        assert_eq!(s.elements()[0], ty(5, &[1, 1, 1]).identity_endo());
    }

    #[test]
    fn c3_has_only_translations() {
        let e = enumerate_regular(&ty(3, &[1]), false, u64::MAX).unwrap();
        assert_eq!(e.subgroups.len(), 1);
        assert!(e.subgroups[0].elements().iter().all(|h| h.auto == ty(3, &[1]).identity_endo()));
    }

    /// Brute force over all gamma tables of `C_9` with values in `Aut(C_9)`.
    #[test]
    fn c9_census_matches_brute_force() {
        let t = ty(3, &[2]);
        let aut = AutGroup::enumerate(&t, DEFAULT_CANDIDATE_BUDGET).unwrap();
        let autos: Vec<EndoMatrix> = aut.iter().collect();
        let mut brute = FxHashSet::default();
        let mut table = vec![0usize; 9];
        loop {
            if table[0] == aut.position(&t.identity_endo()).unwrap() {
                let g = GammaFunction::new(&t, table.iter().map(|&i| autos[i]).collect()).unwrap();
                if g.check_closed().is_ok() {
                    brute.insert(table.clone());
                }
            }
            let mut i = 0;
            while i < 9 {
                table[i] += 1;
                if table[i] < autos.len() {
                    break;
                }
                table[i] = 0;
                i += 1;
            }
            if i == 9 {
                break;
            }
        }
        let e = enumerate_regular(&t, false, u64::MAX).unwrap();
        let found: FxHashSet<Vec<usize>> = e
            .subgroups
            .iter()
            .map(|s| gamma_from_regular(s).unwrap().aut_indices(&aut).unwrap())
            .collect();
        assert_eq!(found.len(), e.subgroups.len());
        assert_eq!(found, brute);
        for s in &e.subgroups {
            brace_from_gamma(gamma_from_regular(s).unwrap()).unwrap();
        }
        let classes = classify_conjugacy(&e.subgroups, &aut).unwrap();
        let total: usize = classes.iter().map(|c| c.len()).sum();
        assert_eq!(total, e.subgroups.len());
        assert!(classes.len() >= 2);
    }

    #[test]
    fn search_trivial_and_exhausted() {
        let t = ty(3, &[2, 1]);
        let spec = SearchSpec { ambient: t.clone(), target: Target::abelian(&t).unwrap(), restrict: true, max_nodes: 1000 };
        let r = search_regular(&spec).unwrap();
        let SearchOutcome::Found(sub) = &r.outcome else { panic!("λ expected") };
        assert!(sub.elements().iter().all(|h| h.auto == t.identity_endo()));

        let m27 = Target::new(crate::group::catalog::m27().to_group()).unwrap();
        let spec = SearchSpec { ambient: t.clone(), target: m27, restrict: true, max_nodes: 100_000 };
        assert!(matches!(search_regular(&spec).unwrap().outcome, SearchOutcome::Found(_)));

        let spec = SearchSpec { ambient: ty(3, &[1, 1, 1]), target: Target::abelian(&ty(3, &[3])).unwrap(), restrict: true, max_nodes: 1_000_000 };
        assert!(matches!(search_regular(&spec).unwrap().outcome, SearchOutcome::Exhausted));
    }

    #[test]
    fn budget_is_reported() {
        let spec = SearchSpec {
            ambient: ty(3, &[1, 1, 1]),
            target: Target::abelian(&ty(3, &[3])).unwrap(),
            restrict: true,
            max_nodes: 5,
        };
        assert!(matches!(search_regular(&spec), Err(Error::Budget(_))));
    }
}
