//! Verification runs behind the command line: random lemma corpora, censuses
//! of regular subgroups, the abelian mixing census, the construction report
//! and the order-`p^4` counterexample check.

use crate::abelian::aut::DEFAULT_CANDIDATE_BUDGET;
use crate::abelian::{aut_order_formula, AbelianType, AutGroup};
use crate::brace::{brace_from_regular, check_power_formula, gamma_from_regular, lemma_order_check, regular_from_gamma};
use crate::construct::{build_phi, build_regular_nprime, derive_abelian_target, Case};
use crate::error::{Error, Result};
use crate::group::catalog::{family, identify, GroupType, REMARK_FAMILY};
use crate::group::{automorphism_count, find_isomorphism, FiniteGroup};
use crate::holomorph::{normalizer_order, HolElement, HolSubgroup, ScanStrategy};
use crate::realize::{
    classify_conjugacy, enumerate_regular, search_regular, SearchOutcome, SearchSpec, Target, WitnessReport,
};
use crate::spec::GroupSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Largest `|Aut(N)|` classified by default.
pub const MAX_CLASSIFY_AUT: u64 = 1_000_000;

fn abelian_spec(t: &AbelianType) -> GroupSpec {
    GroupSpec::Abelian { p: t.p(), exponents: t.exponents().to_vec() }
}

fn as_string<S: serde::Serializer>(v: &u64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

// ---- lemma suite ----

#[derive(Clone, Debug, Serialize)]
pub struct LemmaAmbientReport {
    pub ambient: GroupSpec,
    pub subgroups: u64,
    pub transitive: u64,
    pub regular: u64,
    /// Subgroups where transitivity and transitivity of a Sylow p-subgroup differ.
    pub sylow_disagreements: u64,
    /// Transitive Sylow p-subgroups run through `lemma_order_check`.
    pub order_checks: u64,
    pub order_check_failures: u64,
    /// `p > n`.
    pub hypothesis: bool,
    pub power_formula_failures: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaSuiteReport {
    pub seed: u64,
    pub samples_per_ambient: usize,
    pub ambients: Vec<LemmaAmbientReport>,
    pub passed: bool,
}

/// Subgroups of `Hol(N)` generated by one to three random elements.
pub fn random_subgroups(t: &AbelianType, aut: &AutGroup, count: usize, seed: u64) -> Result<Vec<HolSubgroup>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = t.order() * aut.order();
    let mut gen_sets = Vec::with_capacity(count);
    for _ in 0..count {
        let k = rng.gen_range(1..=3);
        let gens: Vec<HolElement> = (0..k)
            .map(|_| HolElement {
                point: t.from_index(rng.gen_range(0..t.order() as usize)),
                auto: aut.element(rng.gen_range(0..aut.order() as usize)),
            })
            .collect();
        gen_sets.push(gens);
    }
    gen_sets.into_par_iter().map(|gens| HolSubgroup::closure(t, gens, cap)).collect()
}

fn lemma_ambient(t: &AbelianType, count: usize, seed: u64) -> Result<LemmaAmbientReport> {
    let aut = AutGroup::enumerate(t, DEFAULT_CANDIDATE_BUDGET)?;
    let subs = random_subgroups(t, &aut, count, seed)?;
    let rows: Vec<(bool, bool, bool, Option<(u64, bool)>)> = subs
        .par_iter()
        .map(|sub| -> Result<_> {
            let action = sub.classify_action();
            let sylow = sub.sylow_p_subgroup()?;
            let sylow_transitive = sylow.classify_action().transitive;
            let order = if sylow_transitive {
                let report = lemma_order_check(&sylow)?;
                Some((report.failures, check_power_formula(&sylow).is_none()))
            } else {
                None
            };
            Ok((action.transitive, action.regular, action.transitive != sylow_transitive, order))
        })
        .collect::<Result<_>>()?;
    let mut r = LemmaAmbientReport {
        ambient: abelian_spec(t),
        subgroups: subs.len() as u64,
        transitive: 0,
        regular: 0,
        sylow_disagreements: 0,
        order_checks: 0,
        order_check_failures: 0,
        hypothesis: t.p() > t.log_order(),
        power_formula_failures: 0,
    };
    for (transitive, regular, disagree, order) in rows {
        r.transitive += transitive as u64;
        r.regular += regular as u64;
        r.sylow_disagreements += disagree as u64;
        if let Some((failures, power_ok)) = order {
            r.order_checks += 1;
            r.order_check_failures += (failures > 0) as u64;
            r.power_formula_failures += (!power_ok) as u64;
        }
    }
    Ok(r)
}

/// Transitivity versus Sylow transitivity, the order equivalence and the
/// binomial power formula on random subgroups of each `Hol(N)`.
pub fn lemma_suite(ambients: &[AbelianType], samples: usize, seed: u64) -> Result<LemmaSuiteReport> {
    let reports: Vec<LemmaAmbientReport> = ambients
        .iter()
        .enumerate()
        .map(|(i, t)| lemma_ambient(t, samples, seed.wrapping_add(i as u64)))
        .collect::<Result<_>>()?;
    let passed = reports.iter().all(|r| {
        r.sylow_disagreements == 0 && r.power_formula_failures == 0 && (!r.hypothesis || r.order_check_failures == 0)
    });
    Ok(LemmaSuiteReport { seed, samples_per_ambient: samples, ambients: reports, passed })
}

// ---- census ----

#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub restrict: bool,
    pub max_nodes: u64,
    /// Classify up to `Aut(N)`-conjugacy when `|Aut(N)|` is at most this.
    pub classify_limit: u64,
}

impl Default for CensusOptions {
    fn default() -> Self {
        Self { restrict: true, max_nodes: crate::realize::DEFAULT_MAX_NODES, classify_limit: MAX_CLASSIFY_AUT }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TypeCount {
    pub multiplicative_type: GroupType,
    pub count: u64,
    /// Number of `Aut(N)`-conjugacy classes, when classified.
    pub classes: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub size: u64,
    pub multiplicative_type: GroupType,
    pub representative: WitnessReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaSummary {
    pub hypothesis: bool,
    pub members_checked: u64,
    pub failures: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub ambient: GroupSpec,
    pub restricted: bool,
    pub pool_size: u64,
    #[serde(serialize_with = "as_string")]
    pub aut_order: u64,
    pub nodes: u64,
    pub count: u64,
    pub types: Vec<TypeCount>,
    /// Abelian multiplicative types other than `N` that occur.
    pub abelian_types_other_than_ambient: Vec<GroupSpec>,
    pub lemma_order_check: LemmaSummary,
    pub braces_verified: u64,
    pub gamma_round_trips: u64,
    pub classes: Option<Vec<ClassReport>>,
    pub passed: bool,
}

struct Member {
    group: FiniteGroup,
    lemma_failed: bool,
}

fn examine(sub: &HolSubgroup) -> Result<Member> {
    brace_from_regular(sub)?;
    let back = regular_from_gamma(&gamma_from_regular(sub)?)?;
    if back.canonical_keys() != sub.canonical_keys() {
        return Err(Error::Violation("gamma round trip changed a regular subgroup".into()));
    }
    let lemma = lemma_order_check(sub)?;
    Ok(Member { group: sub.to_group(), lemma_failed: !lemma.passed })
}

/// Groups members by isomorphism type, in order of first occurrence.
fn type_partition(groups: &[&FiniteGroup]) -> Result<Vec<(usize, Vec<usize>)>> {
    let mut reps: Vec<(usize, Vec<usize>)> = Vec::new();
    let fingerprints: Vec<_> = groups.par_iter().map(|g| g.fingerprint()).collect();
    for (i, g) in groups.iter().enumerate() {
        let mut placed = false;
        for (rep, members) in reps.iter_mut() {
            if fingerprints[*rep] == fingerprints[i] && find_isomorphism(g, groups[*rep])?.is_some() {
                members.push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            reps.push((i, vec![i]));
        }
    }
    Ok(reps)
}

/// Enumerates the regular subgroups of `Hol(N)` (Sylow-restricted by
/// default), verifies a brace and the order equivalence for each, groups them
/// by multiplicative type and, when affordable, by conjugacy class.
pub fn census(t: &AbelianType, opts: &CensusOptions) -> Result<CensusReport> {
    let en = enumerate_regular(t, opts.restrict, opts.max_nodes)?;
    let members: Vec<Member> = en.subgroups.par_iter().map(examine).collect::<Result<_>>()?;
    let groups: Vec<&FiniteGroup> = members.iter().map(|m| &m.group).collect();
    let partition = type_partition(&groups)?;
    let kinds: Vec<GroupType> = partition.iter().map(|(rep, _)| identify(groups[*rep])).collect::<Result<_>>()?;
    let mut type_of = vec![0usize; groups.len()];
    for (k, (_, ms)) in partition.iter().enumerate() {
        for &m in ms {
            type_of[m] = k;
        }
    }
    let class_lists = if en.aut_order <= opts.classify_limit {
        let aut = AutGroup::enumerate(t, DEFAULT_CANDIDATE_BUDGET.max(opts.classify_limit))?;
        Some(classify_conjugacy(&en.subgroups, &aut)?)
    } else {
        None
    };
    let types = partition
        .iter()
        .zip(&kinds)
        .enumerate()
        .map(|(k, ((_, ms), kind))| TypeCount {
            multiplicative_type: kind.clone(),
            count: ms.len() as u64,
            classes: class_lists.as_ref().map(|cs| cs.iter().filter(|c| type_of[c[0]] == k).count() as u64),
        })
        .collect();
    let classes = match &class_lists {
        Some(cs) => Some(
            cs.iter()
                .map(|c| {
                    Ok(ClassReport {
                        size: c.len() as u64,
                        multiplicative_type: kinds[type_of[c[0]]].clone(),
                        representative: WitnessReport::new(&en.subgroups[c[0]])?,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let mut other_abelian = Vec::new();
    for (rep, _) in &partition {
        if let Some(a) = groups[*rep].abelian_type() {
            if &a != t {
                other_abelian.push(abelian_spec(&a));
            }
        }
    }
    let hypothesis = t.p() > t.log_order();
    let failures = members.iter().filter(|m| m.lemma_failed).count() as u64;
    let passed = !hypothesis || (failures == 0 && other_abelian.is_empty());
    Ok(CensusReport {
        ambient: abelian_spec(t),
        restricted: en.restricted,
        pool_size: en.pool_size,
        aut_order: en.aut_order,
        nodes: en.nodes,
        count: members.len() as u64,
        types,
        abelian_types_other_than_ambient: other_abelian,
        lemma_order_check: LemmaSummary { hypothesis, members_checked: members.len() as u64, failures },
        braces_verified: members.len() as u64,
        gamma_round_trips: members.len() as u64,
        classes,
        passed,
    })
}

// ---- abelian mixing census ----

#[derive(Clone, Debug, Serialize)]
pub struct MixingRow {
    pub ambient: GroupSpec,
    pub count: u64,
    pub nodes: u64,
    /// Abelian types realized as regular subgroups of `Hol(N)`.
    pub abelian_types: Vec<GroupSpec>,
    pub types: Vec<TypeCount>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MixingCensus {
    pub p: u32,
    pub n: u32,
    /// `p > n`, under which abelian types never mix.
    pub hypothesis: bool,
    pub rows: Vec<MixingRow>,
    /// Pairs `(G, N)` of distinct abelian types with `G` regular in `Hol(N)`.
    pub mixing_pairs: Vec<(GroupSpec, GroupSpec)>,
    pub passed: bool,
}

/// Censuses every abelian `N` of order `p^n` and records which abelian types
/// occur as regular subgroups of `Hol(N)`.
pub fn mixing_census(p: u32, n: u32, opts: &CensusOptions) -> Result<MixingCensus> {
    let mut rows = Vec::new();
    let mut pairs = Vec::new();
    for t in AbelianType::all_of_order(p, n)? {
        let c = census(&t, &CensusOptions { classify_limit: 0, ..opts.clone() })?;
        let mut abelian_types = vec![abelian_spec(&t)];
        for g in &c.abelian_types_other_than_ambient {
            pairs.push((g.clone(), abelian_spec(&t)));
            abelian_types.push(g.clone());
        }
        rows.push(MixingRow { ambient: c.ambient, count: c.count, nodes: c.nodes, abelian_types, types: c.types });
    }
    let hypothesis = p > n;
    let passed = !hypothesis || pairs.is_empty();
    Ok(MixingCensus { p, n, hypothesis, rows, mixing_pairs: pairs, passed })
}

// ---- construction ----

#[derive(Clone, Debug, Serialize)]
pub struct ConstructionReport {
    #[serde(rename = "A")]
    pub a: GroupSpec,
    pub case: Case,
    pub basis_orders: Vec<u64>,
    pub k: Vec<Vec<u32>>,
    pub d: Vec<u32>,
    pub phi: Vec<Vec<Vec<u32>>>,
    pub witness: WitnessReport,
    pub isomorphic_to_n: bool,
}

/// Builds the regular subgroup `N' ≅ N` of `Hol(A)`.
pub fn construction_report(n: &FiniteGroup) -> Result<ConstructionReport> {
    let plan = derive_abelian_target(n)?;
    let phis = build_phi(&plan)?;
    let sub = build_regular_nprime(&plan, &phis)?;
    let t = &plan.target;
    Ok(ConstructionReport {
        a: abelian_spec(t),
        case: plan.case,
        basis_orders: plan.basis_orders.clone(),
        k: plan.k.clone(),
        d: plan.d.coords(t),
        phi: phis.iter().map(|m| m.rows(t)).collect(),
        witness: WitnessReport::new(&sub)?,
        isomorphic_to_n: find_isomorphism(&sub.to_group(), n)?.is_some(),
    })
}

// ---- order p^4 counterexample ----

#[derive(Clone, Debug, Serialize)]
pub struct RemarkReport {
    pub p: u32,
    pub order: u64,
    pub derived_order: u64,
    #[serde(rename = "A")]
    pub a: GroupSpec,
    pub realizable: bool,
    pub nodes: u64,
    pub pool_size: u64,
    pub witness: Option<WitnessReport>,
    #[serde(serialize_with = "as_string")]
    pub aut_a_order: u64,
    #[serde(serialize_with = "as_string")]
    pub aut_n_order: u64,
    /// `|Nor_{Hol(A)}(N')|` for the witness `N'`, or 0 without one.
    #[serde(serialize_with = "as_string")]
    pub normalizer_order: u64,
    #[serde(serialize_with = "as_string")]
    pub hol_order: u64,
    /// The two orders differ, so the equality of the construction fails here.
    pub orders_differ: bool,
    pub passed: bool,
}

/// For the order-`p^4` group with `|[N, N]| = p^2`: the construction is
/// inapplicable, yet a regular `N' ≅ N` exists in `Hol(A)` and its normalizer
/// is not of order `|Hol(N)|`.
pub fn remark_check(p: u32, max_nodes: u64, scan_budget: u64) -> Result<RemarkReport> {
    let fixture = family(REMARK_FAMILY, p, 4)?;
    let n = fixture.group()?;
    let derived_order = match derive_abelian_target(&n) {
        Err(Error::DerivedOrder(d)) => d,
        Err(e) => return Err(e),
        Ok(_) => return Err(Error::Violation("construction unexpectedly applies".into())),
    };
    let t = fixture.partner.clone();
    let spec = SearchSpec { ambient: t.clone(), target: Target::new(n.clone())?, restrict: true, max_nodes };
    let result = search_regular(&spec)?;
    let aut_a = AutGroup::enumerate(&t, u64::MAX)?;
    if aut_order_formula(&t) != Some(aut_a.order() as u128) {
        return Err(Error::Violation("automorphism count disagrees with the closed form".into()));
    }
    let aut_n = automorphism_count(&n, scan_budget)?;
    let hol_order = n.order() as u64 * aut_n;
    let (witness, normalizer) = match &result.outcome {
        SearchOutcome::Found(sub) => (
            Some(WitnessReport::new(sub)?),
            normalizer_order(sub, &aut_a, ScanStrategy::ScanParallel, scan_budget)?,
        ),
        SearchOutcome::Exhausted => (None, 0),
    };
    let realizable = witness.is_some();
    let orders_differ = realizable && normalizer != hol_order;
    Ok(RemarkReport {
        p,
        order: n.order() as u64,
        derived_order,
        a: abelian_spec(&t),
        realizable,
        nodes: result.nodes,
        pool_size: result.pool_size,
        witness,
        aut_a_order: aut_a.order(),
        aut_n_order: aut_n,
        normalizer_order: normalizer,
        hol_order,
        orders_differ,
        passed: derived_order > p as u64 && orders_differ,
    })
}

// ---- info ----

/// Basic invariants of a group spec.
pub fn info(spec: &GroupSpec) -> Result<serde_json::Value> {
    if let GroupSpec::Abelian { .. } = spec {
        let t = spec.abelian()?;
        let aut = aut_order_formula(&t).map(|o| o.to_string());
        let sylow = aut_order_formula(&t)
            .and_then(|o| u64::try_from(o).ok())
            .map(|o| crate::arith::p_part(o, t.p() as u64).to_string());
        let hol = aut_order_formula(&t).and_then(|o| o.checked_mul(t.order() as u128)).map(|o| o.to_string());
        return Ok(serde_json::json!({
            "group": spec,
            "label": t.label(),
            "order": t.order(),
            "exponent": t.exponent(),
            "order_statistics": t.order_statistics().into_iter().map(|(k, v)| (k.to_string(), v)).collect::<std::collections::BTreeMap<_, _>>(),
            "aut_order": aut,
            "aut_sylow_order": sylow,
            "hol_order": hol,
        }));
    }
    let g = spec.to_group()?;
    let kind = identify(&g)?;
    let derived = g.derived_subgroup().len() as u64;
    let construction = match derive_abelian_target(&g) {
        Ok(plan) => serde_json::json!({"applicable": true, "A": abelian_spec(&plan.target), "case": plan.case}),
        Err(Error::DerivedOrder(d)) => serde_json::json!({"applicable": false, "derived_order": d}),
        Err(e) => return Err(e),
    };
    Ok(serde_json::json!({
        "group": spec,
        "type": kind,
        "order": g.order(),
        "center_order": g.center().len(),
        "derived_order": derived,
        "generators": g.generators().len(),
        "construction": construction,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_suite_on_small_ambients() {
        let ambients = [AbelianType::new(3, &[2]).unwrap(), AbelianType::new(3, &[1, 1]).unwrap()];
        let r = lemma_suite(&ambients, 20, 1).unwrap();
        assert!(r.passed);
        assert_eq!(r.ambients.iter().map(|a| a.subgroups).sum::<u64>(), 40);
        assert!(r.ambients.iter().all(|a| a.order_checks > 0));
    }

    #[test]
    fn census_of_c9() {
        let t = AbelianType::new(3, &[2]).unwrap();
        let c = census(&t, &CensusOptions { restrict: false, ..Default::default() }).unwrap();
        assert!(c.passed);
        assert_eq!(c.types.iter().map(|k| k.count).sum::<u64>(), c.count);
        let classes = c.classes.unwrap();
        assert_eq!(classes.iter().map(|k| k.size).sum::<u64>(), c.count);
        assert!(c.abelian_types_other_than_ambient.is_empty());
    }

    #[test]
    fn construction_of_m27() {
        let n = family(1, 3, 3).unwrap().group().unwrap();
        let r = construction_report(&n).unwrap();
        assert!(r.isomorphic_to_n && r.witness.regular);
        assert_eq!(r.a, GroupSpec::Abelian { p: 3, exponents: vec![2, 1] });
    }

    #[test]
    fn info_reports_large_orders_as_strings() {
        let v = info(&GroupSpec::Abelian { p: 5, exponents: vec![2, 1, 1] }).unwrap();
        assert_eq!(v["aut_order"], "6000000");
        assert_eq!(v["hol_order"], "3750000000");
    }
}
