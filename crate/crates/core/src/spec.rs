//! JSON group specifications accepted by the command line.
//!
//! ```json
//! {"kind": "abelian", "p": 3, "exponents": [2, 1]}
//! {"kind": "pc", "p": 3, "gen_orders": [3, 3], "power_tails": [1, 0], "comm": [[0, 2], [1, 0]]}
//! {"kind": "family", "family": 1, "p": 3, "n": 3}
//! {"kind": "presentation", "generators": "ab", "relations": ["a^9", "b^3", "bab^-1 = a^4"]}
//! ```

use crate::abelian::AbelianType;
use crate::error::{Error, Result};
use crate::group::catalog::family;
use crate::group::pc::PcPresentation;
use crate::group::presentation::Presentation;
use crate::group::FiniteGroup;
use serde::{Deserialize, Serialize};

/// Largest group materialized as a Cayley table.
pub const MAX_TABLE_ORDER: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Abelian { p: u32, exponents: Vec<u32> },
    Pc { p: u32, gen_orders: Vec<u64>, power_tails: Vec<u32>, comm: Vec<Vec<u32>> },
    Family { family: u32, p: u32, n: u32 },
    Presentation { generators: String, relations: Vec<String> },
}

impl GroupSpec {
    /// Inline JSON, or the path of a file holding it.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let json = if trimmed.starts_with('{') {
            trimmed.to_string()
        } else {
            std::fs::read_to_string(trimmed)
                .map_err(|e| Error::InvalidInput(format!("cannot read group spec '{trimmed}': {e}")))?
        };
        let spec: GroupSpec =
            serde_json::from_str(&json).map_err(|e| Error::InvalidInput(format!("bad group spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GroupSpec::Abelian { .. } => self.abelian().map(|_| ()),
            GroupSpec::Pc { .. } => self.pc().map(|_| ()),
            GroupSpec::Family { family: id, p, n } => family(*id, *p, *n).map(|_| ()),
            GroupSpec::Presentation { generators, relations } => {
                Presentation { generators: generators.chars().collect(), relations: relations.clone() }
                    .relators()
                    .map(|_| ())
            }
        }
    }

    /// The abelian type, when the spec is of kind `abelian`.
    pub fn abelian(&self) -> Result<AbelianType> {
        match self {
            GroupSpec::Abelian { p, exponents } => AbelianType::new(*p, exponents),
            _ => Err(Error::InvalidInput("expected an abelian group spec".into())),
        }
    }

    pub fn pc(&self) -> Result<PcPresentation> {
        match self {
            GroupSpec::Pc { p, gen_orders, power_tails, comm } => {
                PcPresentation::new(*p, gen_orders.clone(), power_tails.clone(), comm.clone())
            }
            GroupSpec::Family { family: id, p, n } => family(*id, *p, *n)?
                .pc
                .ok_or_else(|| Error::InvalidInput(format!("family {id} has no power-commutator form"))),
            _ => Err(Error::InvalidInput("expected a pc or family group spec".into())),
        }
    }

    pub fn to_group(&self) -> Result<FiniteGroup> {
        let too_large = |o: u64| Error::InvalidInput(format!("group of order {o} exceeds {MAX_TABLE_ORDER}"));
        match self {
            GroupSpec::Abelian { .. } => {
                let t = self.abelian()?;
                if t.order() > MAX_TABLE_ORDER {
                    return Err(too_large(t.order()));
                }
                Ok(FiniteGroup::from_abelian(&t))
            }
            GroupSpec::Pc { .. } => {
                let pc = self.pc()?;
                if pc.order() > MAX_TABLE_ORDER {
                    return Err(too_large(pc.order()));
                }
                Ok(pc.to_group())
            }
            GroupSpec::Family { family: id, p, n } => {
                let f = family(*id, *p, *n)?;
                if f.order() > MAX_TABLE_ORDER {
                    return Err(too_large(f.order()));
                }
                f.group()
            }
            GroupSpec::Presentation { generators, relations } => {
                let pres = Presentation { generators: generators.chars().collect(), relations: relations.clone() };
                Ok(pres.enumerate(4 * MAX_TABLE_ORDER as usize)?.group)
            }
        }
    }
}
