use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A monomial `x_0^e_0 ... x_{N-1}^e_{N-1}` with its total degree cached.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    exponents: Box<[u32]>,
    degree: u32,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        let degree = exponents.iter().sum();
        Monomial {
            exponents: exponents.into_boxed_slice(),
            degree,
        }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial::new(vec![0; nvars])
    }

    /// The monomial `x_index`.
    pub fn variable(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial::new(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.exponents[index]
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial::new(
            self.exponents
                .iter()
                .zip(other.exponents.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree
            && self
                .exponents
                .iter()
                .zip(other.exponents.iter())
                .all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial::new(
            other
                .exponents
                .iter()
                .zip(self.exponents.iter())
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::new(
            self.exponents
                .iter()
                .zip(other.exponents.iter())
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exponents
            .iter()
            .zip(other.exponents.iter())
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// If this is a pure power `x_i^e` with `e > 0`, returns `(i, e)`.
    pub fn pure_power(&self) -> Option<(usize, u32)> {
        let mut found = None;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, e));
            }
        }
        found
    }

    /// Derivative with respect to `x_index`: the exponent it contributes and
    /// the lowered monomial, or `None` when the exponent is zero.
    pub fn derivative(&self, index: usize) -> Option<(u32, Monomial)> {
        let e = self.exponents[index];
        if e == 0 {
            return None;
        }
        let mut lowered = self.exponents.to_vec();
        lowered[index] -= 1;
        Some((e, Monomial::new(lowered)))
    }

    /// Renders the monomial with the given variable names, `1` for the
    /// constant monomial.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.exponents.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{}", names[i], e)),
            }
        }
        parts.join("*")
    }
}

/// The canonical storage order is degree reverse lexicographic.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        degrevlex(self, other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exponents)
    }
}

/// Graded reverse lexicographic comparison with `x_0 > x_1 > ...`.
pub(crate) fn degrevlex(u: &Monomial, v: &Monomial) -> Ordering {
    match u.degree.cmp(&v.degree) {
        Ordering::Equal => {}
        o => return o,
    }
    revlex_tiebreak(u, v)
}

/// Among equal-degree monomials, the one with the smaller exponent in the
/// last differing variable is larger.
pub(crate) fn revlex_tiebreak(u: &Monomial, v: &Monomial) -> Ordering {
    for (a, b) in u.exponents.iter().zip(v.exponents.iter()).rev() {
        if a != b {
            return b.cmp(a);
        }
    }
    Ordering::Equal
}

/// A monomial order, applied as a comparison view over canonically stored
/// polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    /// Degree reverse lexicographic; `1` is the minimum.
    GlobalDegRevLex,
    /// Negative degree reverse lexicographic; `1` is the maximum. Standard
    /// bases under this order compute in the local ring at the origin.
    LocalNegDegRevLex,
}

impl MonomialOrder {
    pub fn compare(self, u: &Monomial, v: &Monomial) -> Ordering {
        match self {
            MonomialOrder::GlobalDegRevLex => degrevlex(u, v),
            MonomialOrder::LocalNegDegRevLex => match v.degree.cmp(&u.degree) {
                Ordering::Equal => revlex_tiebreak(u, v),
                o => o,
            },
        }
    }

    pub fn is_local(self) -> bool {
        matches!(self, MonomialOrder::LocalNegDegRevLex)
    }
}
