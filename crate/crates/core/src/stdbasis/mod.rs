//! Standard bases for global and local monomial orders.
//!
//! Under [`MonomialOrder::GlobalDegRevLex`] this is Buchberger's algorithm
//! with ordinary division. Under [`MonomialOrder::LocalNegDegRevLex`] the
//! same completion loop runs on top of Mora's ecart-driven normal form, which
//! computes in the localization of the polynomial ring at the origin. The
//! number of monomials outside the leading ideal is then the local colength.

mod engine;
mod reduce;
mod staircase;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::polyring::{Monomial, MonomialOrder, Polynomial};

pub use engine::{is_standard_basis, s_polynomial, standard_basis, standard_basis_with};
pub use reduce::{normal_form, reduced_normal_form};
pub use staircase::{colength, standard_monomials};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BasisError {
    #[error("standard basis computation exceeded {limit} pair reductions")]
    PairLimit { limit: usize },
    #[error("normal form computation exceeded {limit} reduction steps")]
    ReductionLimit { limit: usize },
    #[error("standard basis of an empty ideal")]
    EmptyIdeal,
}

/// Resource bounds for a standard basis computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    /// Maximum number of S-pair reductions before giving up.
    pub pair_limit: usize,
    /// Maximum number of single reduction steps inside one normal form.
    pub reduction_limit: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            pair_limit: 50_000,
            reduction_limit: 2_000_000,
        }
    }
}

/// An ideal given by generators; zero generators are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    nvars: usize,
    generators: Vec<Polynomial>,
}

impl Ideal {
    pub fn new(nvars: usize, generators: impl IntoIterator<Item = Polynomial>) -> Self {
        let generators: Vec<Polynomial> = generators
            .into_iter()
            .filter(|g| !g.is_zero())
            .inspect(|g| assert_eq!(g.nvars(), nvars, "generator variable count mismatch"))
            .collect();
        Ideal { nvars, generators }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn with_generator(&self, g: Polynomial) -> Ideal {
        Ideal::new(self.nvars, self.generators.iter().cloned().chain([g]))
    }
}

/// The output of a completion: interreduced elements with pairwise
/// incomparable leading monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardBasis {
    nvars: usize,
    elements: Vec<Polynomial>,
    order: MonomialOrder,
    complete: bool,
}

impl StandardBasis {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements
            .iter()
            .filter_map(|g| g.leading_monomial(self.order).cloned())
            .collect()
    }
}

/// Dimension of the quotient by an ideal, or infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Colength {
    Finite(u64),
    Infinite,
}

impl Colength {
    pub fn is_finite(self) -> bool {
        matches!(self, Colength::Finite(_))
    }

    pub fn value(self) -> Option<u64> {
        match self {
            Colength::Finite(v) => Some(v),
            Colength::Infinite => None,
        }
    }
}

/// Serialized as a bare integer, or the string `"infinite"`.
impl Serialize for Colength {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Colength::Finite(v) => s.serialize_u64(*v),
            Colength::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Colength {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Finite(u64),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Finite(v) => Ok(Colength::Finite(v)),
            Raw::Word(w) if w == "infinite" => Ok(Colength::Infinite),
            Raw::Word(w) => Err(serde::de::Error::custom(format!("bad colength `{w}`"))),
        }
    }
}

impl fmt::Display for Colength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Colength::Finite(v) => write!(f, "{v}"),
            Colength::Infinite => write!(f, "infinite"),
        }
    }
}

/// Whether `ideal` defines a scheme supported at (at most) the origin with
/// finite length, i.e. its local colength is finite.
pub fn is_zero_dimensional_local(ideal: &Ideal) -> Result<bool, BasisError> {
    if ideal.is_empty() {
        return Ok(ideal.nvars() == 0);
    }
    let sb = standard_basis(ideal, MonomialOrder::LocalNegDegRevLex)?;
    Ok(colength(&sb).is_finite())
}

/// Local colength of `ideal` at the origin.
pub fn local_colength(ideal: &Ideal, config: &EngineConfig) -> Result<Colength, BasisError> {
    if ideal.is_empty() {
        return Ok(if ideal.nvars() == 0 {
            Colength::Finite(1)
        } else {
            Colength::Infinite
        });
    }
    let sb = standard_basis_with(ideal, MonomialOrder::LocalNegDegRevLex, config)?;
    Ok(colength(&sb))
}
