use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monomial::{Monomial, MonomialOrder};
use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: Rational,
    pub monomial: Monomial,
}

/// A multivariate polynomial with exact rational coefficients.
///
/// Terms are kept free of zero coefficients and sorted strictly decreasing
/// under degree reverse lexicographic order, so structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Polynomial::from_term(c, Monomial::one(nvars))
    }

    pub fn from_integer(nvars: usize, c: i64) -> Self {
        Polynomial::constant(nvars, Rational::from_integer(BigInt::from(c)))
    }

    pub fn variable(nvars: usize, index: usize) -> Self {
        Polynomial::from_term(Rational::one(), Monomial::variable(nvars, index))
    }

    pub fn from_term(coeff: Rational, monomial: Monomial) -> Self {
        let nvars = monomial.nvars();
        if coeff.is_zero() {
            return Polynomial::zero(nvars);
        }
        Polynomial {
            nvars,
            terms: vec![Term { coeff, monomial }],
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero)
    /// terms.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Rational, Monomial)>) -> Self {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (c, m) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Polynomial::from_sorted_map(nvars, acc)
    }

    fn from_sorted_map(nvars: usize, acc: BTreeMap<Monomial, Rational>) -> Self {
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(monomial, coeff)| Term { coeff, monomial })
            .collect();
        Polynomial { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.monomial.is_one())
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Rational {
        match self.terms.last() {
            Some(t) if t.monomial.is_one() => t.coeff.clone(),
            _ => Rational::zero(),
        }
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.constant_term().is_zero()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.monomial.degree())
    }

    /// Lowest total degree among the terms (order of vanishing at 0).
    pub fn low_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.monomial.degree()).min()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        match self
            .terms
            .binary_search_by(|t| m.cmp(&t.monomial))
        {
            Ok(i) => self.terms[i].coeff.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// Index of the leading term under `order`.
    fn leading_index(&self, order: MonomialOrder) -> Option<usize> {
        match order {
            MonomialOrder::GlobalDegRevLex => {
                if self.terms.is_empty() {
                    None
                } else {
                    Some(0)
                }
            }
            MonomialOrder::LocalNegDegRevLex => {
                let mut best: Option<usize> = None;
                for (i, t) in self.terms.iter().enumerate() {
                    match best {
                        None => best = Some(i),
                        Some(b) => {
                            if order.compare(&t.monomial, &self.terms[b].monomial)
                                == Ordering::Greater
                            {
                                best = Some(i)
                            }
                        }
                    }
                }
                best
            }
        }
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<&Term> {
        self.leading_index(order).map(|i| &self.terms[i])
    }

    pub fn leading_monomial(&self, order: MonomialOrder) -> Option<&Monomial> {
        self.leading_term(order).map(|t| &t.monomial)
    }

    /// Ecart: total degree minus the degree of the leading monomial.
    pub fn ecart(&self, order: MonomialOrder) -> u32 {
        match self.leading_monomial(order) {
            Some(lm) => self.total_degree().unwrap_or(0) - lm.degree(),
            None => 0,
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: &t.coeff * c,
                    monomial: t.monomial.clone(),
                })
                .collect(),
        }
    }

    /// Multiplies every coefficient so the leading coefficient under `order`
    /// becomes one.
    pub fn monic(&self, order: MonomialOrder) -> Polynomial {
        match self.leading_term(order) {
            Some(t) => self.scale(&t.coeff.recip()),
            None => self.clone(),
        }
    }

    /// `self * c * m`.
    pub fn mul_term(&self, c: &Rational, m: &Monomial) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        // Multiplication by a monomial preserves the canonical order.
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: &t.coeff * c,
                    monomial: t.monomial.mul(m),
                })
                .collect(),
        }
    }

    /// `self - c * m * other`, computed as one ordered merge.
    pub fn sub_mul_term(&self, c: &Rational, m: &Monomial, other: &Polynomial) -> Polynomial {
        if c.is_zero() {
            return self.clone();
        }
        self.merge(other.terms.iter().map(|t| Term {
            coeff: -(&t.coeff * c),
            monomial: t.monomial.mul(m),
        }))
    }

    fn merge(&self, rhs: impl Iterator<Item = Term>) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len());
        let mut lhs = self.terms.iter().peekable();
        let mut rhs = rhs.peekable();
        loop {
            match (lhs.peek(), rhs.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(lhs.next().unwrap().clone()),
                (None, Some(_)) => out.push(rhs.next().unwrap()),
                (Some(a), Some(b)) => match a.monomial.cmp(&b.monomial) {
                    Ordering::Greater => out.push(lhs.next().unwrap().clone()),
                    Ordering::Less => out.push(rhs.next().unwrap()),
                    Ordering::Equal => {
                        let a = lhs.next().unwrap();
                        let b = rhs.next().unwrap();
                        let c = &a.coeff + b.coeff;
                        if !c.is_zero() {
                            out.push(Term {
                                coeff: c,
                                monomial: b.monomial,
                            });
                        }
                    }
                },
            }
        }
        Polynomial {
            nvars: self.nvars,
            terms: out,
        }
    }

    /// Partial derivative with respect to `x_index`.
    pub fn differentiate(&self, index: usize) -> Polynomial {
        assert!(index < self.nvars, "variable index out of range");
        Polynomial::from_terms(
            self.nvars,
            self.terms.iter().filter_map(|t| {
                t.monomial
                    .derivative(index)
                    .map(|(e, m)| (&t.coeff * Rational::from_integer(BigInt::from(e)), m))
            }),
        )
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `x_i -> images[i]` for every variable.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut acc = Polynomial::zero(target);
        for t in &self.terms {
            let mut prod = Polynomial::constant(target, t.coeff.clone());
            for (i, &e) in t.monomial.exponents().iter().enumerate() {
                if e > 0 {
                    prod = &prod * &images[i].pow(e);
                }
            }
            acc = &acc + &prod;
        }
        acc
    }

    /// Drops every term of total degree above `degree`.
    pub fn truncate_above(&self, degree: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|t| t.monomial.degree() <= degree)
                .cloned()
                .collect(),
        }
    }

    /// Complex floating evaluation via Horner's scheme in the first
    /// variable, recursing on the remaining ones.
    pub fn evaluate_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let terms: Vec<(f64, &[u32])> = self
            .terms
            .iter()
            .map(|t| (rational_to_f64(&t.coeff), t.monomial.exponents()))
            .collect();
        horner(&terms, point, 0)
    }

    pub fn render(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            let negative = t.coeff.is_negative();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let abs = t.coeff.abs();
            if t.monomial.is_one() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&t.monomial.render(names));
            } else {
                out.push_str(&format!("{}*{}", abs, t.monomial.render(names)));
            }
        }
        out
    }
}

fn horner(terms: &[(f64, &[u32])], point: &[Complex64], var: usize) -> Complex64 {
    if terms.is_empty() {
        return Complex64::zero();
    }
    if var == point.len() {
        return terms.iter().map(|(c, _)| Complex64::new(*c, 0.0)).sum();
    }
    let mut by_power: BTreeMap<u32, Vec<(f64, &[u32])>> = BTreeMap::new();
    for &(c, e) in terms {
        by_power.entry(e[var]).or_default().push((c, e));
    }
    let top = *by_power.keys().next_back().unwrap();
    let mut acc = Complex64::zero();
    for p in (0..=top).rev() {
        acc *= point[var];
        if let Some(group) = by_power.get(&p) {
            acc += horner(group, point, var + 1);
        }
    }
    acc
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back for magnitudes beyond f64 range in either part.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        self.merge(rhs.terms.iter().cloned())
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        self.merge(rhs.terms.iter().map(|t| Term {
            coeff: -t.coeff.clone(),
            monomial: t.monomial.clone(),
        }))
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for a in &self.terms {
            for b in &rhs.terms {
                *acc.entry(a.monomial.mul(&b.monomial))
                    .or_insert_with(Rational::zero) += &a.coeff * &b.coeff;
            }
        }
        Polynomial::from_sorted_map(self.nvars, acc)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        (&self).neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::variable(n, i)
    }

    #[test]
    fn derivative_examples() {
        let p = &x(2, 0).pow(3) + &x(2, 1).pow(3);
        assert_eq!(p.differentiate(0), x(2, 0).pow(2).scale(&q(3, 1)));
        assert!(Polynomial::from_integer(2, 7).differentiate(1).is_zero());
        let cone = &(&x(3, 0).pow(2) + &x(3, 1).pow(2)) + &x(3, 2).pow(2);
        assert_eq!(cone.differentiate(1), x(3, 1).scale(&q(2, 1)));
    }

    #[test]
    fn evaluation_examples() {
        let cone = &(&x(3, 0).pow(2) + &x(3, 1).pow(2)) + &x(3, 2).pow(2);
        let v = cone.evaluate_complex(&[
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::zero(),
        ]);
        assert_eq!(v, Complex64::zero());
        let pt = [Complex64::new(2.0, 0.0), Complex64::new(3.0, 0.0)];
        assert_eq!(Polynomial::zero(2).evaluate_complex(&pt), Complex64::zero());
        assert_eq!((&x(2, 0) * &x(2, 1)).evaluate_complex(&pt), Complex64::new(6.0, 0.0));
    }

    #[test]
    fn local_leading_term_is_lowest_degree() {
        let p = &x(1, 0) - &x(1, 0).pow(2);
        assert_eq!(
            p.leading_monomial(MonomialOrder::LocalNegDegRevLex),
            Some(&Monomial::new(vec![1]))
        );
        assert_eq!(
            p.leading_monomial(MonomialOrder::GlobalDegRevLex),
            Some(&Monomial::new(vec![2]))
        );
        assert_eq!(p.ecart(MonomialOrder::LocalNegDegRevLex), 1);
    }

    #[test]
    fn render_is_canonical() {
        let p = &x(2, 0).pow(2).scale(&q(3, 1)) - &(&x(2, 0) * &x(2, 1)).scale(&q(1, 2));
        let names = vec!["x".to_string(), "y".to_string()];
        assert_eq!(p.render(&names), "3*x^2 - 1/2*x*y");
        assert_eq!((-&p).render(&names), "-3*x^2 + 1/2*x*y");
        assert_eq!(Polynomial::zero(2).render(&names), "0");
    }

    pub(crate) fn arb_poly(nvars: usize) -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec(
            (-9i64..10, 1i64..4, proptest::collection::vec(0u32..3, nvars)),
            0..8,
        )
        .prop_map(move |ts| {
            Polynomial::from_terms(
                nvars,
                ts.into_iter().map(|(n, d, e)| (q(n, d), Monomial::new(e))),
            )
        })
    }

    fn arb_point(nvars: usize) -> impl Strategy<Value = Vec<Complex64>> {
        proptest::collection::vec((0.0f64..1.0, 0.0f64..std::f64::consts::TAU), nvars)
            .prop_map(|v| v.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect())
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(3), b in arb_poly(3), c in arb_poly(3)) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a + &(-&a)).is_zero());
            prop_assert_eq!(&a - &b, &a + &(-&b));
        }

        #[test]
        fn ring_axioms_five_vars(a in arb_poly(5), b in arb_poly(5)) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) - &b, a);
        }

        #[test]
        fn leibniz_rule(a in arb_poly(3), b in arb_poly(3), i in 0usize..3) {
            let lhs = (&a * &b).differentiate(i);
            let rhs = &(&a.differentiate(i) * &b) + &(&a * &b.differentiate(i));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn sub_mul_term_matches_arithmetic(a in arb_poly(3), b in arb_poly(3),
                                           e in proptest::collection::vec(0u32..3, 3),
                                           n in -5i64..6) {
            let m = Monomial::new(e);
            let c = q(n, 1);
            let expected = &a - &b.mul_term(&c, &m);
            prop_assert_eq!(a.sub_mul_term(&c, &m, &b), expected);
        }

        #[test]
        fn evaluation_respects_ring_operations(a in arb_poly(3), b in arb_poly(3), p in arb_point(3)) {
            let (va, vb) = (a.evaluate_complex(&p), b.evaluate_complex(&p));
            let scale = 1.0 + va.norm() + vb.norm() + va.norm() * vb.norm();
            let sum = (&a + &b).evaluate_complex(&p);
            let prod = (&a * &b).evaluate_complex(&p);
            prop_assert!((sum - (va + vb)).norm() <= 1e-12 * scale);
            prop_assert!((prod - va * vb).norm() <= 1e-12 * scale);
        }
    }
}
