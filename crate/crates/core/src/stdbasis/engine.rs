use std::collections::BTreeSet;

use crate::polyring::{Monomial, MonomialOrder, Polynomial};

use super::reduce::{global_full, mora_weak, reducers_of, Reducer};
use super::{staircase, BasisError, EngineConfig, Ideal, StandardBasis};

/// S-polynomial of `f` and `g`, cancelling their leading terms over the
/// least common multiple of the leading monomials.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: MonomialOrder) -> Polynomial {
    let (Some(a), Some(b)) = (f.leading_term(order), g.leading_term(order)) else {
        return Polynomial::zero(f.nvars());
    };
    let lcm = a.monomial.lcm(&b.monomial);
    let fa = a.monomial.quotient_of(&lcm).expect("lcm");
    let gb = b.monomial.quotient_of(&lcm).expect("lcm");
    let lhs = f.mul_term(&b.coeff, &fa);
    lhs.sub_mul_term(&a.coeff, &gb, g)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct PairKey {
    lcm_degree: u32,
    sugar: u32,
    second: usize,
    first: usize,
}

struct Element {
    reducer: Reducer,
    sugar: u32,
}

fn reduce(
    p: &Polynomial,
    reducers: &[Reducer],
    order: MonomialOrder,
    limit: usize,
    cutoff: Option<u32>,
) -> Result<Polynomial, BasisError> {
    if order.is_local() {
        mora_weak(p, reducers, order, limit, cutoff)
    } else {
        global_full(p, reducers, order, limit)
    }
}

/// Completes `ideal` to a standard basis with the default resource bounds.
pub fn standard_basis(ideal: &Ideal, order: MonomialOrder) -> Result<StandardBasis, BasisError> {
    standard_basis_with(ideal, order, &EngineConfig::default())
}

/// Completes `ideal` to a standard basis under `order`.
///
/// Pairs are processed by the normal strategy (smallest lcm degree first,
/// ties broken by sugar degree). The chain criterion is applied under both
/// orders, the product criterion only under the global one.
///
/// Under the local order, once the leading monomials found so far leave a
/// finite staircase of top degree `D`, every monomial of degree above `D`
/// lies in the localized ideal. From then on terms above `D` are dropped and
/// pairs with an lcm above `D` are skipped.
pub fn standard_basis_with(
    ideal: &Ideal,
    order: MonomialOrder,
    config: &EngineConfig,
) -> Result<StandardBasis, BasisError> {
    if ideal.is_empty() {
        return Err(BasisError::EmptyIdeal);
    }
    let nvars = ideal.nvars();
    let mut elements: Vec<Element> = Vec::new();
    for g in ideal.generators() {
        let g = g.monic(order);
        if elements.iter().any(|e| e.reducer.poly == g) {
            continue;
        }
        let sugar = g.total_degree().unwrap_or(0);
        elements.push(Element {
            reducer: Reducer::new(g, order).expect("nonzero generator"),
            sugar,
        });
    }
    if elements.iter().any(|e| e.reducer.lm.is_one()) {
        return Ok(unit_basis(nvars, order));
    }

    let mut corner: Option<u32> = None;
    if order.is_local() && lower_corner(&mut elements, &mut corner, order) {
        return Ok(unit_basis(nvars, order));
    }

    let mut queue: BTreeSet<PairKey> = BTreeSet::new();
    for j in 0..elements.len() {
        for i in 0..j {
            queue.insert(pair_key(&elements, i, j));
        }
    }

    let mut reductions = 0usize;
    while let Some(key) = queue.pop_first() {
        let (i, j) = (key.first, key.second);
        let (fi, fj) = (&elements[i].reducer, &elements[j].reducer);
        if !order.is_local() && fi.lm.is_coprime(&fj.lm) {
            continue;
        }
        let lcm = fi.lm.lcm(&fj.lm);
        if corner.is_some_and(|d| lcm.degree() > d) {
            continue;
        }
        if chain_criterion(&elements, &queue, i, j, &lcm) {
            continue;
        }
        reductions += 1;
        if reductions > config.pair_limit {
            return Err(BasisError::PairLimit {
                limit: config.pair_limit,
            });
        }
        let s = s_polynomial(&fi.poly, &fj.poly, order);
        let reducers: Vec<Reducer> = elements.iter().map(|e| e.reducer.clone()).collect();
        let h = reduce(&s, &reducers, order, config.reduction_limit, corner)?;
        if h.is_zero() {
            continue;
        }
        let h = h.monic(order);
        let reducer = Reducer::new(h, order).expect("nonzero");
        if reducer.lm.is_one() {
            return Ok(unit_basis(nvars, order));
        }
        let sugar = key.sugar.max(reducer.poly.total_degree().unwrap_or(0));
        elements.push(Element { reducer, sugar });
        if order.is_local() && lower_corner(&mut elements, &mut corner, order) {
            return Ok(unit_basis(nvars, order));
        }
        let k = elements.len() - 1;
        for i in 0..k {
            queue.insert(pair_key(&elements, i, k));
        }
    }

    let polys: Vec<Polynomial> = elements.into_iter().map(|e| e.reducer.poly).collect();
    Ok(StandardBasis {
        nvars,
        elements: interreduce(polys, order, config)?,
        order,
        complete: true,
    })
}

/// Recomputes the highest corner from the current leading monomials and,
/// when it drops, truncates the elements whose leading term survives the
/// cut. Returns true when the staircase is empty.
fn lower_corner(elements: &mut [Element], corner: &mut Option<u32>, order: MonomialOrder) -> bool {
    let nvars = elements[0].reducer.poly.nvars();
    let lms: Vec<Monomial> = elements.iter().map(|e| e.reducer.lm.clone()).collect();
    let top = match staircase::max_standard_degree(&lms, nvars) {
        None => return false,
        Some(None) => return true,
        Some(Some(d)) => d,
    };
    if corner.is_some_and(|c| c <= top) {
        return false;
    }
    *corner = Some(top);
    for e in elements.iter_mut().filter(|e| e.reducer.lm.degree() <= top) {
        let cut = e.reducer.poly.truncate_above(top);
        if cut.len() < e.reducer.poly.len() {
            e.reducer = Reducer::new(cut, order).expect("leading term kept");
        }
    }
    false
}

fn unit_basis(nvars: usize, order: MonomialOrder) -> StandardBasis {
    StandardBasis {
        nvars,
        elements: vec![Polynomial::one(nvars)],
        order,
        complete: true,
    }
}

fn pair_key(elements: &[Element], i: usize, j: usize) -> PairKey {
    let (a, b) = (&elements[i], &elements[j]);
    let lcm = a.reducer.lm.lcm(&b.reducer.lm);
    let sa = a.sugar + lcm.degree() - a.reducer.lm.degree();
    let sb = b.sugar + lcm.degree() - b.reducer.lm.degree();
    PairKey {
        lcm_degree: lcm.degree(),
        sugar: sa.max(sb),
        second: j,
        first: i,
    }
}

fn pending(queue: &BTreeSet<PairKey>, elements: &[Element], a: usize, b: usize) -> bool {
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    queue.contains(&pair_key(elements, i, j))
}

/// Buchberger's chain criterion: the pair is redundant when some third
/// element's leading monomial divides the lcm and both connecting pairs
/// have already been treated.
fn chain_criterion(
    elements: &[Element],
    queue: &BTreeSet<PairKey>,
    i: usize,
    j: usize,
    lcm: &Monomial,
) -> bool {
    (0..elements.len()).any(|k| {
        k != i
            && k != j
            && elements[k].reducer.lm.divides(lcm)
            && !pending(queue, elements, i, k)
            && !pending(queue, elements, j, k)
    })
}

/// Keeps one element per minimal leading monomial. Under the global order
/// the survivors are tail-reduced against each other as well.
fn interreduce(
    polys: Vec<Polynomial>,
    order: MonomialOrder,
    config: &EngineConfig,
) -> Result<Vec<Polynomial>, BasisError> {
    let lms: Vec<Monomial> = polys
        .iter()
        .map(|p| p.leading_monomial(order).expect("nonzero").clone())
        .collect();
    let mut keep: Vec<usize> = Vec::new();
    for (i, lm) in lms.iter().enumerate() {
        let dominated = lms.iter().enumerate().any(|(j, other)| {
            j != i && other.divides(lm) && (other != lm || j < i)
        });
        if !dominated {
            keep.push(i);
        }
    }
    let minimal: Vec<Polynomial> = keep.into_iter().map(|i| polys[i].clone()).collect();
    if order.is_local() {
        return Ok(minimal);
    }
    let mut out = Vec::with_capacity(minimal.len());
    for (i, g) in minimal.iter().enumerate() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let lt = g.leading_term(order).expect("nonzero").clone();
        let tail = &g.clone() - &Polynomial::from_term(lt.coeff.clone(), lt.monomial.clone());
        let reduced_tail = global_full(&tail, &reducers_of(&others, order), order, config.reduction_limit)?;
        let full = &Polynomial::from_term(lt.coeff, lt.monomial) + &reduced_tail;
        out.push(full.monic(order));
    }
    Ok(out)
}

/// Buchberger's criterion, checked on every pair: each S-polynomial reduces
/// to zero under the order's normal form.
pub fn is_standard_basis(elements: &[Polynomial], order: MonomialOrder) -> bool {
    let reducers = reducers_of(elements, order);
    let limit = EngineConfig::default().reduction_limit;
    for j in 0..elements.len() {
        for i in 0..j {
            let s = s_polynomial(&elements[i], &elements[j], order);
            match reduce(&s, &reducers, order, limit, None) {
                Ok(r) if r.is_zero() => {}
                _ => return false,
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_polynomial;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn ideal(gens: &[&str], v: &[String]) -> Ideal {
        Ideal::new(v.len(), gens.iter().map(|g| parse_polynomial(g, v).unwrap()))
    }

    fn lms(sb: &StandardBasis, v: &[String]) -> Vec<String> {
        let mut out: Vec<String> = sb.leading_monomials().iter().map(|m| m.render(v)).collect();
        out.sort();
        out
    }

    #[test]
    fn squares_are_already_complete() {
        let v = vars(&["x", "y"]);
        for o in [MonomialOrder::GlobalDegRevLex, MonomialOrder::LocalNegDegRevLex] {
            let sb = standard_basis(&ideal(&["x^2", "y^2"], &v), o).unwrap();
            assert_eq!(lms(&sb, &v), vec!["x^2", "y^2"]);
            assert!(sb.is_complete());
        }
    }

    #[test]
    fn cone_with_linear_sections() {
        let v = vars(&["x", "y", "z"]);
        let sb = standard_basis(
            &ideal(&["x^2+y^2+z^2", "y", "z"], &v),
            MonomialOrder::LocalNegDegRevLex,
        )
        .unwrap();
        assert_eq!(lms(&sb, &v), vec!["x^2", "y", "z"]);
    }

    #[test]
    fn local_and_global_leading_terms_differ() {
        let v = vars(&["x"]);
        let i = ideal(&["x - x^2"], &v);
        let local = standard_basis(&i, MonomialOrder::LocalNegDegRevLex).unwrap();
        assert_eq!(lms(&local, &v), vec!["x"]);
        let global = standard_basis(&i, MonomialOrder::GlobalDegRevLex).unwrap();
        assert_eq!(lms(&global, &v), vec!["x^2"]);
    }

    #[test]
    fn unit_ideal_collapses() {
        let v = vars(&["x", "y"]);
        let sb = standard_basis(&ideal(&["x", "x - 1"], &v), MonomialOrder::GlobalDegRevLex).unwrap();
        assert_eq!(sb.elements(), &[Polynomial::one(2)]);
        // 1 + x is a unit in the local ring.
        let sb = standard_basis(&ideal(&["y*(1+x)", "x + x*y + 1"], &v), MonomialOrder::LocalNegDegRevLex)
            .unwrap();
        assert_eq!(sb.elements(), &[Polynomial::one(2)]);
    }

    #[test]
    fn pair_limit_is_reported() {
        let v = vars(&["x", "y", "z"]);
        let cfg = EngineConfig {
            pair_limit: 1,
            ..EngineConfig::default()
        };
        let r = standard_basis_with(
            &ideal(&["x^2 - y*z", "y^2 - x*z", "z^2 - x*y"], &v),
            MonomialOrder::GlobalDegRevLex,
            &cfg,
        );
        assert_eq!(r, Err(BasisError::PairLimit { limit: 1 }));
    }

    #[test]
    fn empty_ideal_is_an_error() {
        let r = standard_basis(&Ideal::new(2, []), MonomialOrder::GlobalDegRevLex);
        assert_eq!(r, Err(BasisError::EmptyIdeal));
    }

    #[test]
    fn completed_bases_satisfy_buchberger_criterion() {
        let v = vars(&["x", "y", "z"]);
        let fixtures: &[&[&str]] = &[
            &["x^2 - y*z", "y^2 - x*z", "z^2 - x*y"],
            &["x^3 + y^3 + z^3", "x*y*z", "x + y + z - x*y"],
            &["x^2 + y^2 + z^2", "x*y - z^3", "y - x^2"],
            &["x*y - z", "y*z - x", "x*z - y"],
        ];
        for gens in fixtures {
            for o in [MonomialOrder::GlobalDegRevLex, MonomialOrder::LocalNegDegRevLex] {
                let sb = standard_basis(&ideal(gens, &v), o).unwrap();
                assert!(is_standard_basis(sb.elements(), o), "{gens:?} {o:?}");
            }
        }
    }

    #[test]
    fn highest_corner_cut_keeps_the_basis_exact() {
        // Long tails above the corner are dropped; the result must still be
        // a standard basis with the right staircase.
        let v = vars(&["x", "y"]);
        let gens = ["x^2 + y^7 + x*y^9 + x^5*y^4", "y^3 + x^8 - x^3*y^6"];
        let sb = standard_basis(&ideal(&gens, &v), MonomialOrder::LocalNegDegRevLex).unwrap();
        assert_eq!(lms(&sb, &v), vec!["x^2", "y^3"]);
        assert!(sb.elements().iter().all(|g| g.len() == 1));
        assert!(is_standard_basis(sb.elements(), MonomialOrder::LocalNegDegRevLex));
    }
}
