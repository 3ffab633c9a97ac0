//! Isomorphism search and automorphism counting by backtracking over images
//! of a generating set.

use super::FiniteGroup;
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

/// Witness of `G ≅ H`: images of `G`'s generators and the full element map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub generators: Vec<usize>,
    pub images: Vec<usize>,
    pub map: Vec<usize>,
}

/// Extends `gens[i] -> imgs[i]` to the subgroup they generate. Returns `false`
/// when the assignment is not a well-defined injective homomorphism there.
fn extend(g: &FiniteGroup, h: &FiniteGroup, gens: &[usize], imgs: &[usize], map: &mut [u32], used: &mut [bool]) -> bool {
    map.fill(NONE);
    used.fill(false);
    map[0] = 0;
    used[0] = true;
    let mut queue = vec![0usize];
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        let mu = map[u] as usize;
        for (&x, &y) in gens.iter().zip(imgs) {
            let v = g.mul(u, x);
            let w = h.mul(mu, y);
            if map[v] == NONE {
                if used[w] {
                    return false;
                }
                used[w] = true;
                map[v] = w as u32;
                queue.push(v);
            } else if map[v] as usize != w {
                return false;
            }
        }
    }
    true
}

/// Per-element invariants preserved by isomorphisms: order, centralizer
/// order, number of p-th roots and membership in the derived subgroup.
type ElementInvariant = (u64, u32, u32, bool);

fn element_invariants(g: &FiniteGroup) -> Vec<ElementInvariant> {
    let n = g.order();
    let orders = g.element_orders();
    let mut roots = vec![0u32; n];
    if let Some(p) = g.prime() {
        for y in 0..n {
            roots[g.pow(y, p)] += 1;
        }
    }
    let mut derived = vec![false; n];
    for d in g.derived_subgroup() {
        derived[d] = true;
    }
    (0..n)
        .map(|x| {
            let centralizer = (0..n).filter(|&y| g.mul(x, y) == g.mul(y, x)).count() as u32;
            (orders[x], centralizer, roots[x], derived[x])
        })
        .collect()
}

struct Backtrack<'a> {
    g: &'a FiniteGroup,
    h: &'a FiniteGroup,
    gens: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    images: Vec<usize>,
    map: Vec<u32>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
}

impl Backtrack<'_> {
    fn new<'a>(g: &'a FiniteGroup, h: &'a FiniteGroup, budget: u64) -> Backtrack<'a> {
        let inv_g = element_invariants(g);
        let inv_h = if std::ptr::eq(g, h) { inv_g.clone() } else { element_invariants(h) };
        Self::with_invariants(g, h, &inv_g, &inv_h, budget)
    }

    fn with_invariants<'a>(
        g: &'a FiniteGroup,
        h: &'a FiniteGroup,
        inv_g: &[ElementInvariant],
        inv_h: &[ElementInvariant],
        budget: u64,
    ) -> Backtrack<'a> {
        let gens = g.generators();
        let candidates =
            gens.iter().map(|&x| (0..h.order()).filter(|&y| inv_h[y] == inv_g[x]).collect()).collect();
        Backtrack {
            g,
            h,
            gens,
            candidates,
            images: Vec::new(),
            map: vec![NONE; g.order()],
            used: vec![false; h.order()],
            nodes: 0,
            budget,
        }
    }

    /// Visits every bijective extension; `visit` returns `true` to stop.
    fn run(&mut self, visit: &mut dyn FnMut(&[usize], &[u32]) -> bool) -> Result<bool> {
        let level = self.images.len();
        if level == self.gens.len() {
            let k = self.gens.len();
            let ok = extend(self.g, self.h, &self.gens[..k], &self.images, &mut self.map, &mut self.used);
            if ok && self.map.iter().all(|&v| v != NONE) {
                return Ok(visit(&self.images, &self.map));
            }
            return Ok(false);
        }
        for ci in 0..self.candidates[level].len() {
            let y = self.candidates[level][ci];
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Budget(format!("isomorphism search exceeded {} nodes", self.budget)));
            }
            self.images.push(y);
            let ok = extend(
                self.g,
                self.h,
                &self.gens[..=level],
                &self.images,
                &mut self.map,
                &mut self.used,
            );
            if ok && self.run(visit)? {
                return Ok(true);
            }
            self.images.pop();
        }
        Ok(false)
    }
}

pub const DEFAULT_ISO_BUDGET: u64 = 50_000_000;

/// Searches for an isomorphism `g -> h`, rejecting early on invariants.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Result<Option<Isomorphism>> {
    if g.order() != h.order() || g.order_statistics() != h.order_statistics() {
        return Ok(None);
    }
    if g.is_abelian() != h.is_abelian()
        || g.center().len() != h.center().len()
        || g.derived_subgroup().len() != h.derived_subgroup().len()
    {
        return Ok(None);
    }
    let inv_g = element_invariants(g);
    let inv_h = element_invariants(h);
    let (mut sorted_g, mut sorted_h) = (inv_g.clone(), inv_h.clone());
    sorted_g.sort_unstable();
    sorted_h.sort_unstable();
    if sorted_g != sorted_h {
        return Ok(None);
    }
    let mut bt = Backtrack::with_invariants(g, h, &inv_g, &inv_h, DEFAULT_ISO_BUDGET);
    let mut found = None;
    let gens = bt.gens.clone();
    bt.run(&mut |imgs, map| {
        found = Some(Isomorphism {
            generators: gens.clone(),
            images: imgs.to_vec(),
            map: map.iter().map(|&v| v as usize).collect(),
        });
        true
    })?;
    Ok(found)
}

/// `|Aut(G)|` by counting generator images that extend to automorphisms.
pub fn automorphism_count(g: &FiniteGroup, budget: u64) -> Result<u64> {
    let mut bt = Backtrack::new(g, g, budget);
    let mut count = 0u64;
    bt.run(&mut |_, _| {
        count += 1;
        false
    })?;
    Ok(count)
}
