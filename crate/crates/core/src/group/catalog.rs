//! Named fixture groups keyed by `(family, p, n)`.
//!
//! Families 1–5 are nonabelian groups with `|[N, N]| = p` together with their
//! abelian partner `A`; each is stored both as a power-commutator presentation
//! and as the raw finite presentation, so the two can be checked against each
//! other. Family 2 has order `p^{2n}`; family 1 has order `p^n`; families 3–5
//! have order `p^{n+2}`.
//!
//! The `remark` entry (id 6) is the order-`p^4` group whose commutator
//! subgroup has order `p^2`; it has no power-commutator form here.

use super::pc::PcPresentation;
use super::presentation::Presentation;
use super::{FiniteGroup, Fingerprint};
use serde::{Deserialize, Serialize};
use crate::abelian::AbelianType;
use crate::error::{Error, Result};

pub const REMARK_FAMILY: u32 = 6;

#[derive(Clone, Debug)]
pub struct Fixture {
    pub family: u32,
    pub p: u32,
    pub n: u32,
    pub name: String,
    pub pc: Option<PcPresentation>,
    pub presentation: Presentation,
    pub partner: AbelianType,
}

impl Fixture {
    pub fn order(&self) -> u64 {
        self.partner.order()
    }

    pub fn label(&self) -> String {
        format!("family {} fixture, p={}, n={}", self.family, self.p, self.n)
    }

    /// Cayley table, from the power-commutator form when available.
    pub fn group(&self) -> Result<FiniteGroup> {
        match &self.pc {
            Some(pc) => Ok(pc.to_group()),
            None => Ok(self.presentation.enumerate(4 * self.order() as usize + 1024)?.group),
        }
    }
}

/// `M_27 = <a, b | a^9, b^3, b a b^-1 = a^4>`.
pub fn m27() -> PcPresentation {
    family(1, 3, 3).unwrap().pc.unwrap()
}

fn pc(p: u32, gen_orders: Vec<u64>, tails: Vec<u32>, pairs: &[(usize, usize, u32)]) -> Result<PcPresentation> {
    let s = gen_orders.len();
    let mut comm = vec![vec![0; s]; s];
    for &(i, j, k) in pairs {
        comm[i][j] = k % p;
        comm[j][i] = (p - k % p) % p;
    }
    PcPresentation::new(p, gen_orders, tails, comm)
}

pub fn family(id: u32, p: u32, n: u32) -> Result<Fixture> {
    if p == 2 || !crate::arith::is_prime(p as u64) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    let pp = |k: u32| (p as u64).pow(k);
    let min_n = if id == 1 { 3 } else { 2 };
    if n < min_n && id != REMARK_FAMILY {
        return Err(Error::InvalidInput(format!("family {id} needs n >= {min_n}")));
    }
    let log_order = match id {
        1 => n,
        2 => 2 * n,
        REMARK_FAMILY => 4,
        _ => n + 2,
    };
    if (p as u64).checked_pow(log_order).is_none_or(|o| o > u32::MAX as u64) {
        return Err(Error::InvalidInput(format!("family {id} at p={p}, n={n} is too large")));
    }
    let fixture = match id {
        // C_{p^{n-1}} ⋊ C_p; c = a^{p^{n-2}}, b a b^-1 = c a so a b a^-1 = c^-1 b.
        1 => Fixture {
            family: 1,
            p,
            n,
            name: format!("C{} ⋊ C{p}", pp(n - 1)),
            pc: Some(pc(p, vec![pp(n - 2), p as u64], vec![1, 0], &[(0, 1, p - 1)])?),
            presentation: Presentation::new(
                "ab",
                &[&format!("a^{}", pp(n - 1)), &format!("b^{p}"), &format!("bab^-1 = a^{}", 1 + pp(n - 2))],
            ),
            partner: AbelianType::new(p, &[n - 1, 1])?,
        },
        // β_1 = b, β_2 = a, c = a^{p^{n-1}}: b a b^-1 = c a.
        2 => Fixture {
            family: 2,
            p,
            n,
            name: format!("<a,b | a^{0}, b^{0}, bab^-1 = a^{1}>", pp(n), 1 + pp(n - 1)),
            pc: Some(pc(p, vec![pp(n), pp(n - 1)], vec![0, 1], &[(0, 1, 1)])?),
            presentation: Presentation::new(
                "ab",
                &[&format!("a^{}", pp(n)), &format!("b^{}", pp(n)), &format!("bab^-1 = a^{}", 1 + pp(n - 1))],
            ),
            partner: AbelianType::new(p, &[n, n])?,
        },
        // c = a^{p^{n-1}}; c b c^-1 = b a^{p^{n-1}} = z b.
        3 => Fixture {
            family: 3,
            p,
            n,
            name: format!("family 3 (p={p}, n={n})"),
            pc: Some(pc(p, vec![pp(n - 1), p as u64, p as u64], vec![1, 0, 0], &[(2, 1, 1)])?),
            presentation: Presentation::new(
                "abc",
                &[
                    &format!("a^{}", pp(n)),
                    &format!("b^{p}"),
                    &format!("c^{p}"),
                    "bab^-1 = a",
                    "cac^-1 = a",
                    &format!("cbc^-1 = ba^{}", pp(n - 1)),
                ],
            ),
            partner: AbelianType::new(p, &[n, 1, 1])?,
        },
        // c a c^-1 = a^{1+p^{n-1}} = z a.
        4 => Fixture {
            family: 4,
            p,
            n,
            name: format!("family 4 (p={p}, n={n})"),
            pc: Some(pc(p, vec![pp(n - 1), p as u64, p as u64], vec![1, 0, 0], &[(2, 0, 1)])?),
            presentation: Presentation::new(
                "abc",
                &[
                    &format!("a^{}", pp(n)),
                    &format!("b^{p}"),
                    &format!("c^{p}"),
                    "bab^-1 = a",
                    &format!("cac^-1 = a^{}", 1 + pp(n - 1)),
                    "cbc^-1 = b",
                ],
            ),
            partner: AbelianType::new(p, &[n, 1, 1])?,
        },
        // Central generator is b; β_1 = a, β_2 = c with c a c^-1 = b a.
        5 => Fixture {
            family: 5,
            p,
            n,
            name: format!("family 5 (p={p}, n={n})"),
            pc: Some(pc(p, vec![pp(n), p as u64], vec![0, 0], &[(1, 0, 1)])?),
            presentation: Presentation::new(
                "abc",
                &[
                    &format!("a^{}", pp(n)),
                    &format!("b^{p}"),
                    &format!("c^{p}"),
                    "bab^-1 = a",
                    "cac^-1 = ab",
                    "cbc^-1 = b",
                ],
            ),
            partner: AbelianType::new(p, &[n, 1, 1])?,
        },
        REMARK_FAMILY => Fixture {
            family: REMARK_FAMILY,
            p,
            n: 4,
            name: format!("remark group (p={p})"),
            pc: None,
            presentation: Presentation::new(
                "abc",
                &[
                    &format!("a^{}", pp(2)),
                    &format!("b^{p}"),
                    &format!("c^{p}"),
                    &format!("bab^-1 = a^{}", 1 + p),
                    "cac^-1 = ab",
                    "cbc^-1 = b",
                ],
            ),
            partner: AbelianType::new(p, &[2, 1, 1])?,
        },
        _ => return Err(Error::InvalidInput(format!("unknown family {id}"))),
    };
    Ok(fixture)
}

/// Every catalog entry of the given order, for type recognition.
pub fn fixtures_of_order(p: u32, order: u64) -> Vec<Fixture> {
    let mut out = Vec::new();
    for id in 1..=REMARK_FAMILY {
        for n in 2..=8 {
            if let Ok(f) = family(id, p, n) {
                if f.order() == order && !out.iter().any(|g: &Fixture| g.family == id && g.n == f.n) {
                    out.push(f);
                }
            }
        }
    }
    out
}

/// Isomorphism class of a finite p-group as far as it can be named.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupType {
    /// `"abelian [e1,…]"` or `"family K fixture, p=P, n=N"`; absent when the
    /// group matches neither an abelian type nor a catalog entry.
    pub label: Option<String>,
    pub fingerprint: Fingerprint,
}

/// Names `g`: abelian groups by their order statistics, nonabelian ones by an
/// explicit isomorphism to a catalog fixture of the same order.
pub fn identify(g: &FiniteGroup) -> Result<GroupType> {
    let fingerprint = g.fingerprint();
    if let Some(t) = g.abelian_type() {
        return Ok(GroupType { label: Some(t.label()), fingerprint });
    }
    let label = match g.prime() {
        Some(p) if !g.is_abelian() => {
            let mut found = None;
            for f in fixtures_of_order(p as u32, g.order() as u64) {
                let h = f.group()?;
                if h.fingerprint() == fingerprint && super::find_isomorphism(g, &h)?.is_some() {
                    found = Some(f.label());
                    break;
                }
            }
            found
        }
        _ => None,
    };
    Ok(GroupType { label, fingerprint })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::find_isomorphism;

    /// The power-commutator form and the raw presentation define the same group.
    #[test]
    fn pc_forms_match_presentations() {
        for (id, p, n) in [(1, 3, 3), (1, 3, 4), (1, 5, 3), (2, 3, 2), (3, 3, 2), (4, 3, 2), (5, 3, 2)] {
            let f = family(id, p, n).unwrap();
            let from_pc = f.pc.as_ref().unwrap().to_group();
            let from_tc = f.presentation.enumerate(100_000).unwrap().group;
            assert_eq!(from_pc.order() as u64, f.order(), "family {id}");
            assert!(find_isomorphism(&from_pc, &from_tc).unwrap().is_some(), "family {id} p={p} n={n}");
        }
    }

    #[test]
    fn remark_group_shape() {
        let f = family(REMARK_FAMILY, 5, 4).unwrap();
        let g = f.group().unwrap();
        assert_eq!(g.order(), 625);
        assert_eq!(g.derived_subgroup().len(), 25);
        assert_eq!(g.order_statistics()[&25], 500);
    }

    #[test]
    fn identify_examples() {
        let m = m27().to_group();
        assert_eq!(identify(&m).unwrap().label.as_deref(), Some("family 1 fixture, p=3, n=3"));
        let a = FiniteGroup::from_abelian(&AbelianType::new(3, &[2, 1]).unwrap());
        assert_eq!(identify(&a).unwrap().label.as_deref(), Some("abelian [2,1]"));
        let f3 = family(3, 3, 2).unwrap().group().unwrap();
        let id = identify(&f3).unwrap();
        assert_eq!(id.label.as_deref(), Some("family 3 fixture, p=3, n=2"));
        // Heisenberg group of order 27 has exponent 3 and is not in the catalog.
        let heis = PcPresentation::new(3, vec![3, 3], vec![0, 0], vec![vec![0, 1], vec![2, 0]]).unwrap();
        let id = identify(&heis.to_group()).unwrap();
        assert_eq!(id.label, None);
        assert_eq!(id.fingerprint.exponent, 3);
    }

    #[test]
    fn order_statistics_match_partner() {
        for (id, p, n) in [(1, 3, 3), (2, 3, 2), (3, 3, 2), (4, 3, 2), (5, 3, 2), (1, 5, 3)] {
            let f = family(id, p, n).unwrap();
            assert_eq!(f.pc.as_ref().unwrap().order_statistics(), f.partner.order_statistics());
        }
    }
}
