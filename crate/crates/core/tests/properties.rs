use holo::abelian::aut::DEFAULT_CANDIDATE_BUDGET;
use holo::abelian::{AbelianType, AutGroup};
use holo::brace::{brace_from_regular, gamma_from_regular, regular_from_gamma};
use holo::holomorph::{HolElement, HolSubgroup, Holomorph};
use holo::realize::enumerate_regular;
use proptest::prelude::*;
use std::sync::OnceLock;

struct Fixture {
    ty: AbelianType,
    hol: Holomorph,
    aut: AutGroup,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let ty = AbelianType::new(3, &[3, 1]).unwrap();
        let aut = AutGroup::enumerate(&ty, DEFAULT_CANDIDATE_BUDGET).unwrap();
        Fixture { hol: Holomorph::new(&ty), ty, aut }
    })
}

fn regular_c9xc3() -> &'static Vec<HolSubgroup> {
    static R: OnceLock<Vec<HolSubgroup>> = OnceLock::new();
    R.get_or_init(|| enumerate_regular(&AbelianType::new(3, &[2, 1]).unwrap(), false, 10_000_000).unwrap().subgroups)
}

fn element(f: &Fixture, x: usize, a: usize) -> HolElement {
    HolElement { point: f.ty.from_index(x % f.ty.order() as usize), auto: f.aut.element(a % f.aut.order() as usize) }
}

fn partition() -> impl Strategy<Value = (u32, Vec<u32>)> {
    (prop::sample::select(vec![3u32, 5, 7]), prop::collection::vec(1u32..4, 1..4)).prop_map(|(p, mut e)| {
        e.sort_unstable_by(|a, b| b.cmp(a));
        (p, e)
    })
    .prop_filter("at most 6 factors of p", |(_, e)| e.iter().sum::<u32>() <= 6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn holomorph_laws(x in any::<usize>(), a in any::<usize>(), y in any::<usize>(), b in any::<usize>(),
                      z in any::<usize>(), c in any::<usize>(), pt in any::<usize>()) {
        let f = fixture();
        let (g, h, k) = (element(f, x, a), element(f, y, b), element(f, z, c));
        let hol = &f.hol;
        prop_assert_eq!(hol.mul(&hol.mul(&g, &h), &k), hol.mul(&g, &hol.mul(&h, &k)));
        prop_assert_eq!(hol.mul(&g, &hol.inv(&g)), hol.identity());
        let q = f.ty.from_index(pt % f.ty.order() as usize);
        prop_assert_eq!(hol.act(&hol.mul(&g, &h), &q), hol.act(&g, &hol.act(&h, &q)));
    }

    #[test]
    fn closed_form_power(x in any::<usize>(), a in any::<usize>(), k in 0u64..300) {
        let f = fixture();
        let g = element(f, x, a);
        let mut iterated = f.hol.identity();
        for _ in 0..k {
            iterated = f.hol.mul(&iterated, &g);
        }
        prop_assert_eq!(f.hol.pow_closed_form(&g, k), iterated);
        prop_assert_eq!(f.hol.pow(&g, k), iterated);
    }

    #[test]
    fn order_statistics_determine_type((p, e) in partition()) {
        let t = AbelianType::new(p, &e).unwrap();
        prop_assert_eq!(AbelianType::from_order_statistics(p, &t.order_statistics()).unwrap(), t);
    }

    #[test]
    fn sylow_transitivity_agrees(gens in prop::collection::vec((any::<usize>(), any::<usize>()), 1..4)) {
        let f = fixture();
        let gens = gens.into_iter().map(|(x, a)| element(f, x, a)).collect();
        let sub = HolSubgroup::closure(&f.ty, gens, u64::MAX).unwrap();
        prop_assert_eq!(sub.classify_action().transitive, sub.transitive_via_sylow().unwrap());
    }

    #[test]
    fn brace_round_trip(i in any::<usize>()) {
        let all = regular_c9xc3();
        let sub = &all[i % all.len()];
        brace_from_regular(sub).unwrap();
        let back = regular_from_gamma(&gamma_from_regular(sub).unwrap()).unwrap();
        prop_assert_eq!(back.canonical_keys(), sub.canonical_keys());
    }
}
