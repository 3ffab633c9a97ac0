//! Gamma functions of regular subgroups, the skew braces they define, and the
//! nilpotency diagnostics of `δ(x) = γ(x) - Id`.

use crate::abelian::{AbelianElement, AbelianType, AutGroup, EndoMatrix};
use crate::arith;
use crate::error::{Error, Result};
use crate::group::catalog::{identify, GroupType};
use crate::group::FiniteGroup;
use crate::holomorph::{HolElement, HolSubgroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Largest order for which brace axioms are checked on every triple.
pub const EXHAUSTIVE_TRIPLES_MAX_ORDER: u64 = 125;
/// Largest order for which the `∘` table is stored.
pub const TABLE_MAX_ORDER: u64 = 625;
pub const SAMPLED_TRIPLES: usize = 1_000_000;

/// `γ: N -> Aut(N)`, indexed by packed element index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaFunction {
    ty: AbelianType,
    table: Vec<EndoMatrix>,
}

impl GammaFunction {
    /// Wraps a table without checking closure; see [`GammaFunction::check_closed`].
    pub fn new(ty: &AbelianType, table: Vec<EndoMatrix>) -> Result<Self> {
        if table.len() as u64 != ty.order() {
            return Err(Error::InvalidInput(format!("gamma table has {} entries, expected {}", table.len(), ty.order())));
        }
        if let Some(i) = table.iter().position(|m| !ty.is_automorphism(m)) {
            return Err(Error::InvalidInput(format!("gamma value at element {i} is not an automorphism")));
        }
        Ok(Self { ty: ty.clone(), table })
    }

    /// The constant `Id` table, whose graph is `λ_N(N)`.
    pub fn trivial(ty: &AbelianType) -> Self {
        Self { ty: ty.clone(), table: vec![ty.identity_endo(); ty.order() as usize] }
    }

    pub fn ambient(&self) -> &AbelianType {
        &self.ty
    }

    pub fn table(&self) -> &[EndoMatrix] {
        &self.table
    }

    #[inline]
    pub fn at(&self, x: &AbelianElement) -> &EndoMatrix {
        &self.table[self.ty.index(x)]
    }

    pub fn element(&self, idx: usize) -> HolElement {
        HolElement { point: self.ty.from_index(idx), auto: self.table[idx] }
    }

    /// Checks `γ(e) = Id` and `γ(x + γ(x)y) = γ(x)γ(y)` for every pair.
    pub fn check_closed(&self) -> Result<()> {
        let t = &self.ty;
        if self.table[0] != t.identity_endo() {
            return Err(Error::NotClosed { x: 0, y: 0 });
        }
        let elements: Vec<AbelianElement> = t.elements().collect();
        for (xi, x) in elements.iter().enumerate() {
            let gx = &self.table[xi];
            for (yi, y) in elements.iter().enumerate() {
                let z = t.add(x, &t.apply(gx, y));
                if self.table[t.index(&z)] != t.compose(gx, &self.table[yi]) {
                    return Err(Error::NotClosed { x: xi, y: yi });
                }
            }
        }
        Ok(())
    }

    /// Positions of the table entries in `aut`'s sorted element list.
    pub fn aut_indices(&self, aut: &AutGroup) -> Result<Vec<usize>> {
        self.table
            .iter()
            .map(|m| aut.position(m).ok_or_else(|| Error::InvalidInput("gamma value outside Aut".into())))
            .collect()
    }
}

pub fn gamma_from_regular(sub: &HolSubgroup) -> Result<GammaFunction> {
    let t = sub.ambient();
    if !sub.classify_action().regular {
        return Err(Error::NotRegular);
    }
    let mut table = vec![t.identity_endo(); t.order() as usize];
    for h in sub.elements() {
        table[t.index(&h.point)] = h.auto;
    }
    Ok(GammaFunction { ty: t.clone(), table })
}

/// The graph of `g` as a subgroup, after checking closure on all pairs.
pub fn regular_from_gamma(g: &GammaFunction) -> Result<HolSubgroup> {
    g.check_closed()?;
    let elements: Vec<HolElement> = (0..g.table.len()).map(|i| g.element(i)).collect();
    let circ = circ_group(g)?;
    let generators = circ.generators().into_iter().map(|i| elements[i]).collect();
    Ok(HolSubgroup::from_parts(&g.ty, generators, elements))
}

/// `(N, ∘)` on packed indices.
fn circ_group(g: &GammaFunction) -> Result<FiniteGroup> {
    let t = &g.ty;
    let elements: Vec<AbelianElement> = t.elements().collect();
    FiniteGroup::from_fn(elements.len(), |a, b| t.index(&t.add(&elements[a], &t.apply(&g.table[a], &elements[b]))))
}

/// A skew brace with abelian additive group: `x ∘ y = x + γ(x)(y)`.
#[derive(Clone, Debug)]
pub struct Brace {
    gamma: GammaFunction,
    circ: Option<Vec<u32>>,
}

impl Brace {
    pub fn gamma(&self) -> &GammaFunction {
        &self.gamma
    }

    pub fn ambient(&self) -> &AbelianType {
        &self.gamma.ty
    }

    pub fn order(&self) -> u64 {
        self.gamma.ty.order()
    }

    #[inline]
    pub fn circ(&self, x: usize, y: usize) -> usize {
        match &self.circ {
            Some(table) => table[x * self.order() as usize + y] as usize,
            None => {
                let t = &self.gamma.ty;
                t.index(&t.add(&t.from_index(x), &t.apply(&self.gamma.table[x], &t.from_index(y))))
            }
        }
    }

    /// `∘` equals `+`.
    pub fn is_trivial(&self) -> bool {
        self.gamma.table.iter().all(|m| *m == self.gamma.ty.identity_endo())
    }

    pub fn additive_group(&self) -> FiniteGroup {
        FiniteGroup::from_abelian(&self.gamma.ty)
    }

    pub fn multiplicative_group(&self) -> Result<FiniteGroup> {
        circ_group(&self.gamma)
    }

    /// Group axioms for `∘` and `a∘(b+c) = a∘b - a + a∘c`, on every triple up
    /// to order 125 and on sampled triples above.
    pub fn verify(&self) -> Result<()> {
        let t = &self.gamma.ty;
        let n = t.order() as usize;
        let elements: Vec<AbelianElement> = t.elements().collect();
        let add_table: Option<Vec<u32>> = (n as u64 <= TABLE_MAX_ORDER).then(|| {
            (0..n * n).map(|i| t.index(&t.add(&elements[i / n], &elements[i % n])) as u32).collect()
        });
        let neg: Vec<usize> = elements.iter().map(|x| t.index(&t.neg(x))).collect();
        let add = |a: usize, b: usize| match &add_table {
            Some(table) => table[a * n + b] as usize,
            None => t.index(&t.add(&elements[a], &elements[b])),
        };
        let sub = |a: usize, b: usize| add(a, neg[b]);
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if self.circ(self.circ(a, b), c) != self.circ(a, self.circ(b, c)) {
                return Err(Error::Violation(format!("∘ is not associative at ({a}, {b}, {c})")));
            }
            if self.circ(a, add(b, c)) != add(sub(self.circ(a, b), a), self.circ(a, c)) {
                return Err(Error::Violation(format!("brace property fails at ({a}, {b}, {c})")));
            }
            Ok(())
        };
        for a in 0..n {
            if self.circ(0, a) != a || self.circ(a, 0) != a {
                return Err(Error::Violation(format!("0 is not a ∘-identity at {a}")));
            }
        }
        if n as u64 <= TABLE_MAX_ORDER {
            for a in 0..n {
                let mut row = vec![false; n];
                let mut col = vec![false; n];
                for b in 0..n {
                    row[self.circ(a, b)] = true;
                    col[self.circ(b, a)] = true;
                }
                if row.iter().chain(&col).any(|&s| !s) {
                    return Err(Error::Violation(format!("∘ has no inverses at {a}")));
                }
            }
        }
        if n as u64 <= EXHAUSTIVE_TRIPLES_MAX_ORDER {
            match (&self.circ, &add_table) {
                (Some(circ), Some(add_t)) => {
                    let row = |x: usize| x * n..x * n + n;
                    for a in 0..n {
                        let ra = &circ[row(a)];
                        for b in 0..n {
                            let ab = ra[b] as usize;
                            let (rab, rb) = (&circ[row(ab)], &circ[row(b)]);
                            let add_b = &add_t[row(b)];
                            let add_s = &add_t[row(sub(ab, a))];
                            for c in 0..n {
                                let assoc = rab[c] == ra[rb[c] as usize];
                                let brace = ra[add_b[c] as usize] == add_s[ra[c] as usize];
                                if !(assoc && brace) {
                                    check(a, b, c)?;
                                }
                            }
                        }
                    }
                }
                _ => {
                    for a in 0..n {
                        for b in 0..n {
                            for c in 0..n {
                                check(a, b, c)?;
                            }
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..SAMPLED_TRIPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    /// Export: `{"additive", "gamma", "multiplicative_type"}` with `gamma[i]`
    /// the position of `γ(i)` in the listed automorphisms `aut`.
    pub fn export(&self, aut: &AutGroup) -> Result<BraceExport> {
        let indices = self.gamma.aut_indices(aut)?;
        let mut used: Vec<usize> = indices.clone();
        used.sort_unstable();
        used.dedup();
        let gamma = indices.iter().map(|i| used.binary_search(i).unwrap()).collect();
        let aut = used.iter().map(|&i| aut.element(i).rows(self.ambient())).collect();
        Ok(BraceExport {
            additive: serde_json::json!({"kind": "abelian", "p": self.ambient().p(), "exponents": self.ambient().exponents()}),
            gamma,
            aut,
            multiplicative_type: multiplicative_type(self)?,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BraceExport {
    pub additive: serde_json::Value,
    pub gamma: Vec<usize>,
    /// Automorphism matrices referenced by `gamma`.
    pub aut: Vec<Vec<Vec<u32>>>,
    pub multiplicative_type: GroupType,
}

pub fn brace_from_gamma(gamma: GammaFunction) -> Result<Brace> {
    let n = gamma.ty.order();
    let mut brace = Brace { gamma, circ: None };
    if n <= TABLE_MAX_ORDER {
        let n = n as usize;
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = brace.circ(a, b) as u32;
            }
        }
        brace.circ = Some(table);
    }
    match brace.verify() {
        Ok(()) => Ok(brace),
        Err(Error::Violation(m)) => Err(Error::Violation(format!("extracted brace is invalid: {m}"))),
        Err(e) => Err(e),
    }
}

pub fn brace_from_regular(sub: &HolSubgroup) -> Result<Brace> {
    brace_from_gamma(gamma_from_regular(sub)?)
}

/// `(N, ∘)` up to isomorphism.
pub fn multiplicative_type(b: &Brace) -> Result<GroupType> {
    identify(&b.multiplicative_group()?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaProfile {
    /// Least `m` with `δ(x)^m = 0`, per element; `None` if `δ(x)` is not nilpotent.
    pub indices: Vec<Option<u32>>,
    pub max: Option<u32>,
}

/// `δ(x) = γ(x) - Id`.
pub fn delta(ty: &AbelianType, phi: &EndoMatrix) -> EndoMatrix {
    ty.endo_sub(phi, &ty.identity_endo())
}

/// A nilpotent endomorphism of a group of order `p^n` satisfies `δ^n = 0`
/// (each power has strictly smaller image), so the search stops at `n`.
pub fn nilpotency_index(ty: &AbelianType, d: &EndoMatrix) -> Option<u32> {
    let mut power = *d;
    for m in 1..=ty.log_order().max(1) {
        if ty.is_zero_endo(&power) {
            return Some(m);
        }
        power = ty.compose(&power, d);
    }
    None
}

pub fn delta_profile(g: &GammaFunction) -> DeltaProfile {
    let indices: Vec<Option<u32>> = g.table.iter().map(|phi| nilpotency_index(&g.ty, &delta(&g.ty, phi))).collect();
    let max = indices.iter().try_fold(0, |acc, i| i.map(|i| acc.max(i)));
    DeltaProfile { indices, max }
}

/// `(x, γ)^m = ((Σ_{k≥1} C(m, k) δ^{k-1})(x), γ^m)`, the binomial expansion of
/// `Σ_{i<m} (Id + δ)^i`; coefficients are reduced modulo the exponent of `N`.
pub fn pow_via_delta(ty: &AbelianType, h: &HolElement, m: u64) -> HolElement {
    let d = delta(ty, &h.auto);
    let modulus = ty.exponent();
    let mut sum = ty.zero_endo();
    let mut power = ty.identity_endo();
    for k in 1..=m {
        if ty.is_zero_endo(&power) {
            break;
        }
        sum = ty.endo_add(&sum, &ty.endo_scale(&power, arith::binomial_mod(m, k, modulus)));
        power = ty.compose(&power, &d);
    }
    HolElement { point: ty.apply(&sum, &h.point), auto: ty.endo_pow(&h.auto, m) }
}

/// Compares `h^p` computed in `Hol(N)` with [`pow_via_delta`] for every
/// element; returns the first mismatching element index.
pub fn check_power_formula(sub: &HolSubgroup) -> Option<usize> {
    let p = sub.ambient().p() as u64;
    let hol = sub.holomorph();
    sub.elements().iter().position(|h| hol.pow(h, p) != pow_via_delta(sub.ambient(), h, p))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaFailure {
    pub element: usize,
    pub k: u32,
    pub point_power_trivial: bool,
    pub power_in_stabilizer: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub p: u32,
    pub n: u32,
    /// `p > n`, the hypothesis under which the equivalence is claimed.
    pub hypothesis: bool,
    pub checked: u64,
    pub failures: u64,
    pub first_failure: Option<LemmaFailure>,
    pub passed: bool,
}

/// For every `h = (a, φ)` and `k`: `p^k a = 0 ⟺ h^{p^k}` fixes `e_N`.
pub fn lemma_order_check(sub: &HolSubgroup) -> Result<LemmaReport> {
    let t = sub.ambient();
    let p = t.p();
    let log = arith::log_p(sub.order(), p as u64)
        .ok_or_else(|| Error::InvalidInput("subgroup order is not a power of p".into()))?;
    if !sub.classify_action().transitive {
        return Err(Error::InvalidInput("subgroup is not transitive".into()));
    }
    let hol = sub.holomorph();
    let zero = t.identity();
    let mut checked = 0;
    let mut failures = 0;
    let mut first_failure = None;
    for (i, h) in sub.elements().iter().enumerate() {
        let mut point = h.point;
        let mut power = *h;
        for k in 0..=log {
            checked += 1;
            let lhs = point == zero;
            let rhs = power.point == zero;
            if lhs != rhs {
                failures += 1;
                first_failure.get_or_insert(LemmaFailure {
                    element: i,
                    k,
                    point_power_trivial: lhs,
                    power_in_stabilizer: rhs,
                });
            }
            point = t.scale(&point, p as u64);
            power = hol.pow(&power, p as u64);
        }
    }
    let n = t.log_order();
    Ok(LemmaReport { p, n, hypothesis: p > n, checked, failures, first_failure, passed: failures == 0 })
}

/// Whether `sub` has the same number of elements of each order as `N`.
pub fn order_statistics_transfer(sub: &HolSubgroup) -> bool {
    let hol = sub.holomorph();
    let mut stats = std::collections::BTreeMap::new();
    for h in sub.elements() {
        *stats.entry(hol.element_order(h)).or_insert(0u64) += 1;
    }
    stats == sub.ambient().order_statistics()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::aut::DEFAULT_CANDIDATE_BUDGET;
    use crate::holomorph::Holomorph;

    fn ty(p: u32, e: &[u32]) -> AbelianType {
        AbelianType::new(p, e).unwrap()
    }

    fn c9_with_mult4() -> HolSubgroup {
        let c9 = ty(3, &[2]);
        let h = HolElement { point: c9.generator(0), auto: c9.scalar_endo(4) };
        HolSubgroup::closure(&c9, vec![h], 100).unwrap()
    }

    #[test]
    fn gamma_of_translations_is_trivial() {
        let t = ty(3, &[2, 1]);
        let lam = Holomorph::new(&t).translations().unwrap();
        let g = gamma_from_regular(&lam).unwrap();
        assert_eq!(g, GammaFunction::trivial(&t));
        let back = regular_from_gamma(&g).unwrap();
        assert_eq!(back.canonical_keys(), lam.canonical_keys());
    }

    #[test]
    fn gamma_of_mult4_subgroup() {
        let sub = c9_with_mult4();
        assert_eq!(sub.order(), 9);
        let hol = sub.holomorph();
        let h = sub.generators()[0];
        assert_eq!(hol.pow_closed_form(&h, 9), hol.identity());
        let g = gamma_from_regular(&sub).unwrap();
        let t = sub.ambient();
        for k in 0..9 {
            assert_eq!(g.table()[k], t.endo_pow(&t.scalar_endo(4), k as u64));
        }
        assert_eq!(regular_from_gamma(&g).unwrap().canonical_keys(), sub.canonical_keys());
        let profile = delta_profile(&g);
        assert_eq!(profile.indices[1], Some(2));
        assert_eq!(profile.max, Some(2));
    }

    #[test]
    fn non_regular_rejected() {
        let c9 = ty(3, &[2]);
        let hol = Holomorph::new(&c9);
        let sub = HolSubgroup::closure(&c9, vec![hol.automorphism(&c9.scalar_endo(4))], 10).unwrap();
        assert_eq!(gamma_from_regular(&sub).unwrap_err(), Error::NotRegular);
    }

    #[test]
    fn random_tables_rejected() {
        let t = ty(3, &[1, 1]);
        let aut = AutGroup::enumerate(&t, DEFAULT_CANDIDATE_BUDGET).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut rejected = 0;
        for _ in 0..50 {
            let mut table: Vec<EndoMatrix> =
                (0..9).map(|_| aut.element(rng.gen_range(0..aut.order() as usize))).collect();
            table[0] = t.identity_endo();
            let g = GammaFunction::new(&t, table).unwrap();
            if let Err(Error::NotClosed { x, y }) = regular_from_gamma(&g) {
                rejected += 1;
                let (x, y) = (t.from_index(x), t.from_index(y));
                let z = t.add(&x, &t.apply(g.at(&x), &y));
                assert_ne!(*g.at(&z), t.compose(g.at(&x), g.at(&y)));
            }
        }
        assert!(rejected >= 45);
    }

    #[test]
    fn trivial_brace() {
        for t in [ty(3, &[2, 1]), ty(3, &[1, 1, 1]), ty(5, &[1, 1])] {
            let b = brace_from_gamma(GammaFunction::trivial(&t)).unwrap();
            assert!(b.is_trivial());
            for x in 0..t.order() as usize {
                for y in 0..t.order() as usize {
                    assert_eq!(b.circ(x, y), t.index(&t.add(&t.from_index(x), &t.from_index(y))));
                }
            }
            assert_eq!(multiplicative_type(&b).unwrap().label, Some(t.label()));
        }
    }

    #[test]
    fn mult4_brace_is_cyclic() {
        let b = brace_from_regular(&c9_with_mult4()).unwrap();
        assert!(!b.is_trivial());
        assert_eq!(multiplicative_type(&b).unwrap().label.as_deref(), Some("abelian [2]"));
        let aut = AutGroup::enumerate(b.ambient(), DEFAULT_CANDIDATE_BUDGET).unwrap();
        let export = b.export(&aut).unwrap();
        assert_eq!(export.gamma.len(), 9);
        assert_eq!(export.aut.len(), 3);
    }

    #[test]
    fn power_formula_and_lemma() {
        let sub = c9_with_mult4();
        assert_eq!(check_power_formula(&sub), None);
        let report = lemma_order_check(&sub).unwrap();
        assert!(report.passed);
        assert!(report.hypothesis);
        assert!(order_statistics_transfer(&sub));

        let t = ty(5, &[1, 1]);
        let lam = Holomorph::new(&t).translations().unwrap();
        let report = lemma_order_check(&lam).unwrap();
        assert!(report.passed && report.hypothesis);
        assert_eq!(report.checked, 25 * 3);
    }

    #[test]
    fn pow_via_delta_matches_on_full_holomorph() {
        let t = ty(3, &[2, 1]);
        let aut = AutGroup::enumerate(&t, DEFAULT_CANDIDATE_BUDGET).unwrap();
        let hol = Holomorph::new(&t);
        for phi in aut.iter() {
            if nilpotency_index(&t, &delta(&t, &phi)).is_none() {
                continue;
            }
            for x in t.elements() {
                let h = HolElement { point: x, auto: phi };
                for m in [2, 3, 9, 27] {
                    assert_eq!(hol.pow(&h, m), pow_via_delta(&t, &h, m));
                }
            }
        }
    }
}
