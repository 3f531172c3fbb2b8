use std::cmp::Ordering;

use crate::polyring::{Monomial, MonomialOrder, Polynomial};

use super::{staircase, BasisError, StandardBasis};

/// A reducer with its leading data cached.
#[derive(Clone)]
pub(crate) struct Reducer {
    pub poly: Polynomial,
    pub lm: Monomial,
    pub ecart: u32,
}

impl Reducer {
    pub fn new(poly: Polynomial, order: MonomialOrder) -> Option<Self> {
        let lm = poly.leading_monomial(order)?.clone();
        let ecart = poly.ecart(order);
        Some(Reducer { poly, lm, ecart })
    }
}

/// One step `h - (LT(h)/LT(g)) * g`, cancelling the leading term of `h`.
fn cancel_leading(h: &Polynomial, g: &Reducer, order: MonomialOrder) -> Polynomial {
    let lt = h.leading_term(order).expect("nonzero");
    let gc = &g.poly.leading_term(order).expect("nonzero").coeff;
    let q = g.lm.quotient_of(&lt.monomial).expect("divisible");
    h.sub_mul_term(&(&lt.coeff / gc), &q, &g.poly)
}

/// Mora's normal form: only the leading monomial of the result is
/// guaranteed to be standard. The result equals `u * p` modulo the ideal for
/// some unit `u` of the local ring, and is zero iff `p` lies in the
/// localized ideal whenever the reducers form a standard basis.
///
/// With a `cutoff`, the caller guarantees that every monomial above that
/// degree lies in the ideal, and terms above it are dropped as they appear.
pub(crate) fn mora_weak(
    p: &Polynomial,
    reducers: &[Reducer],
    order: MonomialOrder,
    limit: usize,
    cutoff: Option<u32>,
) -> Result<Polynomial, BasisError> {
    let cut = |h: Polynomial| match cutoff {
        Some(d) => h.truncate_above(d),
        None => h,
    };
    let mut h = cut(p.clone());
    let mut extra: Vec<Reducer> = Vec::new();
    let mut steps = 0usize;
    while let Some(lm) = h.leading_monomial(order).cloned() {
        let best = reducers
            .iter()
            .chain(extra.iter())
            .filter(|g| g.lm.divides(&lm))
            .min_by_key(|g| g.ecart);
        let Some(g) = best else { break };
        steps += 1;
        if steps > limit {
            return Err(BasisError::ReductionLimit { limit });
        }
        let g = g.clone();
        let h_ecart = h.ecart(order);
        if g.ecart > h_ecart {
            extra.push(Reducer {
                poly: h.clone(),
                lm: lm.clone(),
                ecart: h_ecart,
            });
        }
        h = cut(cancel_leading(&h, &g, order));
    }
    Ok(h)
}

/// Full division for a global order: no monomial of the result is divisible
/// by any reducer's leading monomial.
pub(crate) fn global_full(
    p: &Polynomial,
    reducers: &[Reducer],
    order: MonomialOrder,
    limit: usize,
) -> Result<Polynomial, BasisError> {
    debug_assert!(!order.is_local());
    let mut h = p.clone();
    let mut steps = 0usize;
    // Terms are stored in the global order, so scanning left to right visits
    // them from the largest down.
    let mut floor: Option<Monomial> = None;
    loop {
        let next = h.terms().iter().find_map(|t| {
            if let Some(f) = &floor {
                if order.compare(&t.monomial, f) != Ordering::Less {
                    return None;
                }
            }
            reducers
                .iter()
                .find(|g| g.lm.divides(&t.monomial))
                .map(|g| (t.monomial.clone(), t.coeff.clone(), g))
        });
        let Some((m, c, g)) = next else { break };
        steps += 1;
        if steps > limit {
            return Err(BasisError::ReductionLimit { limit });
        }
        let gc = &g.poly.leading_term(order).expect("nonzero").coeff;
        let q = g.lm.quotient_of(&m).expect("divisible");
        h = h.sub_mul_term(&(&c / gc), &q, &g.poly);
        floor = Some(m);
    }
    Ok(h)
}

pub(crate) fn reducers_of(basis: &[Polynomial], order: MonomialOrder) -> Vec<Reducer> {
    basis
        .iter()
        .filter_map(|g| Reducer::new(g.clone(), order))
        .collect()
}

/// Normal form of `p` with respect to `basis`.
///
/// Under the global order this is complete division. Under the local order
/// it is Mora's normal form, whose leading monomial is standard; tails are
/// not reduced because local tails may only terminate as power series (see
/// [`reduced_normal_form`] for complete zero-dimensional bases).
pub fn normal_form(p: &Polynomial, basis: &[Polynomial], order: MonomialOrder) -> Polynomial {
    let reducers = reducers_of(basis, order);
    let limit = super::EngineConfig::default().reduction_limit;
    let r = if order.is_local() {
        mora_weak(p, &reducers, order, limit, None)
    } else {
        global_full(p, &reducers, order, limit)
    };
    r.expect("normal form reduction limit")
}

/// Normal form with every monomial standard.
///
/// For a local order this needs a complete basis with a finite staircase:
/// every monomial above the highest standard degree lies in the ideal, so the
/// tail is truncated there and reduced term by term. Returns `None` for an
/// infinite staircase under a local order.
pub fn reduced_normal_form(p: &Polynomial, sb: &StandardBasis) -> Option<Polynomial> {
    let order = sb.order();
    let reducers = reducers_of(sb.elements(), order);
    let limit = super::EngineConfig::default().reduction_limit;
    if !order.is_local() {
        return global_full(p, &reducers, order, limit).ok();
    }
    let top = staircase::max_standard_degree(&sb.leading_monomials(), sb.nvars())?;
    let Some(top) = top else {
        // Unit ideal: everything reduces to zero.
        return Some(Polynomial::zero(p.nvars()));
    };
    let mut h = mora_weak(p, &reducers, order, limit, Some(top)).ok()?;
    loop {
        // Largest non-standard term under the local order.
        let target = h
            .terms()
            .iter()
            .filter(|t| reducers.iter().any(|g| g.lm.divides(&t.monomial)))
            .max_by(|a, b| order.compare(&a.monomial, &b.monomial))
            .cloned();
        let Some(t) = target else { break };
        let g = reducers
            .iter()
            .filter(|g| g.lm.divides(&t.monomial))
            .min_by_key(|g| g.ecart)
            .expect("some reducer divides");
        let gc = &g.poly.leading_term(order).expect("nonzero").coeff;
        let q = g.lm.quotient_of(&t.monomial).expect("divisible");
        h = h.sub_mul_term(&(&t.coeff / gc), &q, &g.poly).truncate_above(top);
    }
    Some(h)
}
