//! Finite presentations and Todd–Coxeter coset enumeration over the trivial
//! subgroup, which yields the regular representation and hence a Cayley table.

use super::FiniteGroup;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A word is a list of `(generator, exponent)` syllables.
pub type Word = Vec<(usize, i64)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<char>,
    pub relations: Vec<String>,
}

/// A presented group materialized by coset enumeration.
#[derive(Clone, Debug)]
pub struct PresentedGroup {
    pub group: FiniteGroup,
    /// Element index of each generator.
    pub generators: Vec<usize>,
}

impl Presentation {
    pub fn new(generators: &str, relations: &[&str]) -> Self {
        Self {
            generators: generators.chars().filter(|c| c.is_alphabetic()).collect(),
            relations: relations.iter().map(|r| r.to_string()).collect(),
        }
    }

    fn parse_word(&self, text: &str) -> Result<Word> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut word = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c == '1' && word.is_empty() && chars.len() == 1 {
                return Ok(word);
            }
            let g = self
                .generators
                .iter()
                .position(|&x| x == c)
                .ok_or_else(|| Error::InvalidInput(format!("unknown generator '{c}' in '{text}'")))?;
            i += 1;
            let mut exp = 1i64;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let start = i;
                if i < chars.len() && chars[i] == '-' {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                exp = digits
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad exponent in '{text}'")))?;
            }
            word.push((g, exp));
        }
        Ok(word)
    }

    /// Relators: `lhs = rhs` becomes `lhs rhs^-1`.
    pub fn relators(&self) -> Result<Vec<Word>> {
        self.relations
            .iter()
            .map(|r| {
                let mut parts = r.split('=');
                let lhs = self.parse_word(parts.next().unwrap_or(""))?;
                let mut word = lhs;
                if let Some(rhs) = parts.next() {
                    let rhs = self.parse_word(rhs)?;
                    word.extend(rhs.iter().rev().map(|&(g, e)| (g, -e)));
                }
                if parts.next().is_some() {
                    return Err(Error::InvalidInput(format!("relation '{r}' has two '='")));
                }
                Ok(word)
            })
            .collect()
    }

    /// Enumerates the group; `max_cosets` bounds the coset table.
    pub fn enumerate(&self, max_cosets: usize) -> Result<PresentedGroup> {
        let relators: Vec<Vec<usize>> = self
            .relators()?
            .into_iter()
            .map(|w| {
                w.into_iter()
                    .flat_map(|(g, e)| {
                        let col = if e >= 0 { 2 * g } else { 2 * g + 1 };
                        std::iter::repeat_n(col, e.unsigned_abs() as usize)
                    })
                    .collect::<Vec<_>>()
            })
            .filter(|w: &Vec<usize>| !w.is_empty())
            .collect();
        let mut tc = CosetTable::new(2 * self.generators.len(), max_cosets);
        tc.hlt(&relators)?;
        tc.into_group(self.generators.len())
    }
}

const UNDEF: u32 = u32::MAX;

struct CosetTable {
    cols: usize,
    table: Vec<u32>,
    forward: Vec<u32>,
    live: usize,
    max_cosets: usize,
    queue: Vec<usize>,
}

impl CosetTable {
    fn new(cols: usize, max_cosets: usize) -> Self {
        Self {
            cols,
            table: vec![UNDEF; cols],
            forward: vec![0],
            live: 1,
            max_cosets,
            queue: Vec::new(),
        }
    }

    fn len(&self) -> usize {
        self.forward.len()
    }

    #[inline]
    fn get(&self, c: usize, x: usize) -> u32 {
        self.table[c * self.cols + x]
    }

    #[inline]
    fn set(&mut self, c: usize, x: usize, v: u32) {
        self.table[c * self.cols + x] = v;
    }

    fn is_live(&self, c: usize) -> bool {
        self.forward[c] as usize == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<()> {
        if self.live >= self.max_cosets {
            return Err(Error::Budget(format!("coset enumeration exceeded {} cosets", self.max_cosets)));
        }
        let d = self.len();
        self.forward.push(d as u32);
        self.table.extend(std::iter::repeat_n(UNDEF, self.cols));
        self.live += 1;
        self.set(c, x, d as u32);
        self.set(d, x ^ 1, c as u32);
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.forward[root] as usize != root {
            root = self.forward[root] as usize;
        }
        let mut cur = c;
        while self.forward[cur] as usize != root {
            let next = self.forward[cur] as usize;
            self.forward[cur] = root as u32;
            cur = next;
        }
        root
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra != rb {
            let (keep, kill) = (ra.min(rb), ra.max(rb));
            self.forward[kill] = keep as u32;
            self.live -= 1;
            self.queue.push(kill);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                let d = self.get(g, x);
                if d == UNDEF {
                    continue;
                }
                let d = d as usize;
                if self.get(d, x ^ 1) as usize == g {
                    self.set(d, x ^ 1, UNDEF);
                }
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mu_x = self.get(mu, x);
                if mu_x != UNDEF {
                    self.merge(nu, mu_x as usize);
                } else {
                    let nu_inv = self.get(nu, x ^ 1);
                    if nu_inv != UNDEF {
                        self.merge(mu, nu_inv as usize);
                    } else {
                        self.set(mu, x, nu as u32);
                        self.set(nu, x ^ 1, mu as u32);
                    }
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<()> {
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = w.len() as isize - 1;
        loop {
            while (i as isize) <= j && self.get(f, w[i]) != UNDEF {
                f = self.get(f, w[i]) as usize;
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.get(b, w[j as usize] ^ 1) != UNDEF {
                b = self.get(b, w[j as usize] ^ 1) as usize;
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            } else if j == i as isize {
                self.set(f, w[i], b as u32);
                self.set(b, w[i] ^ 1, f as u32);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    fn hlt(&mut self, relators: &[Vec<usize>]) -> Result<()> {
        let mut c = 0;
        while c < self.len() {
            if self.is_live(c) {
                for r in relators {
                    self.scan_and_fill(c, r)?;
                    if !self.is_live(c) {
                        break;
                    }
                }
                if self.is_live(c) {
                    for x in 0..self.cols {
                        if self.get(c, x) == UNDEF {
                            self.define(c, x)?;
                        }
                    }
                }
            }
            c += 1;
        }
        Ok(())
    }

    /// Renumbers live cosets in breadth-first order from the identity coset
    /// and tabulates the regular representation.
    fn into_group(mut self, ngens: usize) -> Result<PresentedGroup> {
        let mut number = vec![UNDEF; self.len()];
        let mut order = vec![0usize];
        number[0] = 0;
        // Words (as column sequences) reaching each coset.
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            for x in 0..self.cols {
                let d = self.get(c, x);
                if d == UNDEF {
                    return Err(Error::Violation("incomplete coset table".into()));
                }
                let d = self.rep(d as usize);
                if number[d] == UNDEF {
                    number[d] = order.len() as u32;
                    order.push(d);
                    let mut w = words[head].clone();
                    w.push(x);
                    words.push(w);
                }
            }
            head += 1;
        }
        let n = order.len();
        let act = |this: &mut Self, c: usize, word: &[usize]| {
            let mut cur = c;
            for &x in word {
                cur = this.rep(this.get(cur, x) as usize);
            }
            cur
        };
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let c = act(&mut self, order[a], &words[b]);
                table[a * n + b] = number[c];
            }
        }
        let group = FiniteGroup::from_fn(n, |a, b| table[a * n + b] as usize)?;
        let generators = (0..ngens)
            .map(|g| {
                let d = self.get(0, 2 * g);
                number[self.rep(d as usize)] as usize
            })
            .collect();
        Ok(PresentedGroup { group, generators })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_and_dihedral_like() {
        let c9 = Presentation::new("a", &["a^9"]).enumerate(1000).unwrap();
        assert_eq!(c9.group.order(), 9);
        assert_eq!(c9.group.element_order(c9.generators[0]), 9);

        let m27 = Presentation::new("ab", &["a^9", "b^3", "bab^-1 = a^4"]).enumerate(10_000).unwrap();
        assert_eq!(m27.group.order(), 27);
        assert!(!m27.group.is_abelian());
        assert!(m27.group.is_associative());
    }

    #[test]
    fn collapsing_presentation() {
        // a^5 = 1 and a^3 = 1 force a = 1.
        let g = Presentation::new("a", &["a^5", "a^3"]).enumerate(100).unwrap();
        assert_eq!(g.group.order(), 1);
    }

    #[test]
    fn rejects_unknown_generator() {
        assert!(Presentation::new("a", &["b^2"]).enumerate(10).is_err());
    }
}
