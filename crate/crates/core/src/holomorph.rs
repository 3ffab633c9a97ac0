//! The holomorph `Hol(N) = N ⋊ Aut(N)` of an abelian p-group, acting on `N` by
//! `(a, φ)·y = a + φ(y)`.

use crate::abelian::{AbelianElement, AbelianType, AutGroup, EndoMatrix};
use crate::arith;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct HolElement {
    pub point: AbelianElement,
    pub auto: EndoMatrix,
}

/// Hashable key of a holomorph element: packed point index and matrix code.
pub type HolKey = (u32, u64);

/// Arithmetic in `Hol(N)` for a fixed abelian ambient `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Holomorph {
    ty: AbelianType,
}

impl Holomorph {
    pub fn new(ty: &AbelianType) -> Self {
        Self { ty: ty.clone() }
    }

    pub fn ambient(&self) -> &AbelianType {
        &self.ty
    }

    pub fn identity(&self) -> HolElement {
        HolElement { point: self.ty.identity(), auto: self.ty.identity_endo() }
    }

    pub fn translation(&self, x: &AbelianElement) -> HolElement {
        HolElement { point: *x, auto: self.ty.identity_endo() }
    }

    pub fn automorphism(&self, phi: &EndoMatrix) -> HolElement {
        HolElement { point: self.ty.identity(), auto: *phi }
    }

    #[inline]
    pub fn key(&self, h: &HolElement) -> HolKey {
        (self.ty.index(&h.point) as u32, self.ty.code(&h.auto))
    }

    /// `(x, φ)(y, ψ) = (x + φ(y), φψ)`.
    #[inline]
    pub fn mul(&self, a: &HolElement, b: &HolElement) -> HolElement {
        let t = &self.ty;
        HolElement { point: t.add(&a.point, &t.apply(&a.auto, &b.point)), auto: t.compose(&a.auto, &b.auto) }
    }

    /// `(x, φ)^{-1} = (φ^{-1}(-x), φ^{-1})`.
    pub fn inv(&self, h: &HolElement) -> HolElement {
        let t = &self.ty;
        let phi_inv = t.endo_inverse(&h.auto);
        HolElement { point: t.apply(&phi_inv, &t.neg(&h.point)), auto: phi_inv }
    }

    /// `h^k` by repeated squaring.
    pub fn pow(&self, h: &HolElement, k: u64) -> HolElement {
        let mut result = self.identity();
        let mut base = *h;
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

    /// `(a, φ)^k = ((Id + φ + … + φ^{k-1})(a), φ^k)`, summed in `End(N)`.
    pub fn pow_closed_form(&self, h: &HolElement, k: u64) -> HolElement {
        let t = &self.ty;
        let mut sum = t.zero_endo();
        let mut term = t.identity_endo();
        for _ in 0..k {
            sum = t.endo_add(&sum, &term);
            term = t.compose(&term, &h.auto);
        }
        HolElement { point: t.apply(&sum, &h.point), auto: term }
    }

    #[inline]
    pub fn act(&self, h: &HolElement, y: &AbelianElement) -> AbelianElement {
        self.ty.add(&h.point, &self.ty.apply(&h.auto, y))
    }

    pub fn element_order(&self, h: &HolElement) -> u64 {
        let id = self.identity();
        let mut cur = *h;
        let mut k = 1;
        while cur != id {
            cur = self.mul(&cur, h);
            k += 1;
        }
        k
    }

    /// Generators of the whole holomorph: translations by basis vectors and
    /// generators of `Aut(N)`.
    pub fn full_generators(&self, aut: &AutGroup) -> Vec<HolElement> {
        let mut gens: Vec<HolElement> = (0..self.ty.rank()).map(|i| self.translation(&self.ty.generator(i))).collect();
        gens.extend(aut.generators().iter().map(|m| self.automorphism(m)));
        gens
    }

    /// `λ_N(N)`, the left translations.
    pub fn translations(&self) -> Result<HolSubgroup> {
        let gens = (0..self.ty.rank()).map(|i| self.translation(&self.ty.generator(i))).collect();
        HolSubgroup::closure(&self.ty, gens, self.ty.order())
    }
}

/// An enumerated subgroup of `Hol(N)`.
#[derive(Clone, Debug)]
pub struct HolSubgroup {
    hol: Holomorph,
    generators: Vec<HolElement>,
    elements: Vec<HolElement>,
    index: FxHashMap<HolKey, u32>,
}

/// Outcome of [`HolSubgroup::classify_action`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionClass {
    pub transitive: bool,
    pub regular: bool,
    /// Packed indices of the orbit of `e_N`, sorted.
    pub orbit_of_identity: Vec<usize>,
}

impl HolSubgroup {
    /// Breadth-first closure of `generators`; fails once more than `cap`
    /// elements appear.
    pub fn closure(ty: &AbelianType, generators: Vec<HolElement>, cap: u64) -> Result<Self> {
        let hol = Holomorph::new(ty);
        let id = hol.identity();
        let mut elements = vec![id];
        let mut index = FxHashMap::default();
        index.insert(hol.key(&id), 0);
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head];
            head += 1;
            for g in &generators {
                let y = hol.mul(&x, g);
                let k = hol.key(&y);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(k) {
                    if elements.len() as u64 >= cap {
                        return Err(Error::Budget(format!("subgroup closure exceeded cap {cap}")));
                    }
                    e.insert(elements.len() as u32);
                    elements.push(y);
                }
            }
        }
        Ok(Self { hol, generators, elements, index })
    }

    /// Assembles a subgroup from an element list already known to be closed.
    pub(crate) fn from_parts(ty: &AbelianType, generators: Vec<HolElement>, elements: Vec<HolElement>) -> Self {
        let hol = Holomorph::new(ty);
        let index = elements.iter().enumerate().map(|(i, h)| (hol.key(h), i as u32)).collect();
        Self { hol, generators, elements, index }
    }

    pub fn holomorph(&self) -> &Holomorph {
        &self.hol
    }

    pub fn ambient(&self) -> &AbelianType {
        &self.hol.ty
    }

    pub fn generators(&self) -> &[HolElement] {
        &self.generators
    }

    pub fn elements(&self) -> &[HolElement] {
        &self.elements
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, h: &HolElement) -> bool {
        self.index.contains_key(&self.hol.key(h))
    }

    pub fn position(&self, h: &HolElement) -> Option<usize> {
        self.index.get(&self.hol.key(h)).map(|&i| i as usize)
    }

    /// Sorted element keys: identity of the subgroup as a set.
    pub fn canonical_keys(&self) -> Vec<HolKey> {
        let mut keys: Vec<HolKey> = self.index.keys().copied().collect();
        keys.sort_unstable();
        keys
    }

    pub fn classify_action(&self) -> ActionClass {
        let t = self.ambient();
        let mut seen = vec![false; t.order() as usize];
        for h in &self.elements {
            seen[t.index(&h.point)] = true;
        }
        let orbit: Vec<usize> = (0..seen.len()).filter(|&i| seen[i]).collect();
        let transitive = orbit.len() as u64 == t.order();
        ActionClass { transitive, regular: transitive && self.order() == t.order(), orbit_of_identity: orbit }
    }

    /// Cayley table on the element list order (identity first).
    pub fn to_group(&self) -> FiniteGroup {
        FiniteGroup::from_fn(self.elements.len(), |a, b| {
            self.position(&self.hol.mul(&self.elements[a], &self.elements[b])).expect("closed")
        })
        .expect("subgroup multiplication is a group law")
    }

    /// One Sylow p-subgroup: starting from the trivial group, repeatedly
    /// adjoin a p-element `g` that normalizes the current subgroup `H` with
    /// `g^p ∈ H`, rescanning until the order reaches the p-part of `|sub|`.
    pub fn sylow_p_subgroup(&self) -> Result<HolSubgroup> {
        let p = self.ambient().p() as u64;
        let target = arith::p_part(self.order(), p);
        let hol = &self.hol;
        let mut current = HolSubgroup::closure(self.ambient(), Vec::new(), 1)?;
        while current.order() < target {
            let mut extended = false;
            for g in &self.elements {
                if current.contains(g) || !current.contains(&hol.pow(g, p)) {
                    continue;
                }
                let g_inv = hol.inv(g);
                let normalizes = current
                    .generators
                    .iter()
                    .all(|x| current.contains(&hol.mul(&hol.mul(g, x), &g_inv)));
                if normalizes {
                    let mut gens = current.generators.clone();
                    gens.push(*g);
                    current = HolSubgroup::closure(self.ambient(), gens, target)?;
                    extended = true;
                    break;
                }
            }
            if !extended {
                return Err(Error::Violation("no normalizing p-element extends the p-subgroup".into()));
            }
        }
        Ok(current)
    }

    /// Transitivity decided on a Sylow p-subgroup only.
    pub fn transitive_via_sylow(&self) -> Result<bool> {
        Ok(self.sylow_p_subgroup()?.classify_action().transitive)
    }

    /// `{h ∈ sub : h·e_N = e_N}`, i.e. the elements with trivial point.
    pub fn stabilizer_of_identity(&self) -> Result<HolSubgroup> {
        let e = self.ambient().identity();
        let gens: Vec<HolElement> = self.elements.iter().filter(|h| h.point == e).copied().collect();
        let n = gens.len() as u64;
        HolSubgroup::closure(self.ambient(), gens, n.max(1))
    }

    /// Set of automorphism codes occurring in the subgroup.
    fn auto_codes(&self) -> FxHashSet<u64> {
        self.elements.iter().map(|h| self.ambient().code(&h.auto)).collect()
    }
}

/// How the normalizer scan is executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanStrategy {
    Scan,
    ScanParallel,
}

/// `|Nor_{Hol(N)}(sub)|` by streaming every `(x, χ)` of `Hol(N)` and testing
/// whether conjugation maps each generator of `sub` into `sub`. Conjugation is
/// an injective homomorphism, so this decides `h sub h^{-1} = sub`.
pub fn normalizer_order(sub: &HolSubgroup, aut: &AutGroup, strategy: ScanStrategy, budget: u64) -> Result<u64> {
    let t = sub.ambient();
    if aut.ambient() != t {
        return Err(Error::InvalidInput("automorphism group of a different ambient".into()));
    }
    let total = t.order().saturating_mul(aut.order());
    if total > budget {
        return Err(Error::Budget(format!("|Hol| = {total} exceeds the scan budget {budget}")));
    }
    let autos = sub.auto_codes();
    let gens: Vec<HolElement> = if sub.generators.is_empty() { vec![sub.hol.identity()] } else { sub.generators.clone() };
    let aut_order = aut.order();
    let count_for = |code: u64| -> u64 {
        let chi = t.decode(code);
        let chi_inv = t.endo_pow(&chi, aut_order - 1);
        // For h = (x, χ): h (a, φ) h^{-1} = (χa + (Id - χφχ^{-1}) x, χφχ^{-1}).
        let mut conj = Vec::with_capacity(gens.len());
        for g in &gens {
            let phi = t.compose(&t.compose(&chi, &g.auto), &chi_inv);
            let phi_code = t.code(&phi);
            if !autos.contains(&phi_code) {
                return 0;
            }
            conj.push((t.apply(&chi, &g.point), t.endo_sub(&t.identity_endo(), &phi), phi_code));
        }
        let mut count = 0;
        for xi in 0..t.order() as usize {
            let x = t.from_index(xi);
            let ok = conj.iter().all(|(a, m, code)| {
                let pt = t.add(a, &t.apply(m, &x));
                sub.index.contains_key(&(t.index(&pt) as u32, *code))
            });
            if ok {
                count += 1;
            }
        }
        count
    };
    let count = match strategy {
        ScanStrategy::Scan => aut.codes().iter().map(|&c| count_for(c)).sum(),
        ScanStrategy::ScanParallel => aut.codes().par_iter().map(|&c| count_for(c)).sum(),
    };
    Ok(count)
}

/// Reference normalizer count conjugating every element; small ambients only.
pub fn normalizer_order_full(sub: &HolSubgroup, aut: &AutGroup) -> u64 {
    let hol = sub.holomorph();
    let t = sub.ambient();
    let mut count = 0;
    for chi in aut.iter() {
        for x in t.elements() {
            let h = HolElement { point: x, auto: chi };
            let h_inv = hol.inv(&h);
            if sub.elements().iter().all(|g| sub.contains(&hol.mul(&hol.mul(&h, g), &h_inv))) {
                count += 1;
            }
        }
    }
    count
}
