use std::collections::{HashSet, VecDeque};

use crate::polyring::Monomial;

use super::{Colength, StandardBasis};

fn has_all_pure_powers(leading: &[Monomial], nvars: usize) -> bool {
    let mut seen = vec![false; nvars];
    for m in leading {
        if let Some((i, _)) = m.pure_power() {
            seen[i] = true;
        }
    }
    seen.into_iter().all(|s| s)
}

/// Monomials outside the ideal generated by `leading`, in breadth-first
/// order from `1`, or `None` when there are infinitely many.
pub fn standard_monomials(leading: &[Monomial], nvars: usize) -> Option<Vec<Monomial>> {
    if leading.iter().any(Monomial::is_one) {
        return Some(Vec::new());
    }
    if !has_all_pure_powers(leading, nvars) {
        return None;
    }
    let mut seen: HashSet<Monomial> = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    let one = Monomial::one(nvars);
    seen.insert(one.clone());
    queue.push_back(one);
    while let Some(m) = queue.pop_front() {
        if leading.iter().any(|l| l.divides(&m)) {
            continue;
        }
        for i in 0..nvars {
            let next = m.mul(&Monomial::variable(nvars, i));
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
        out.push(m);
    }
    Some(out)
}

/// Number of standard monomials of a completed basis.
pub fn colength(sb: &StandardBasis) -> Colength {
    assert!(sb.is_complete(), "colength needs a completed standard basis");
    match standard_monomials(&sb.leading_monomials(), sb.nvars()) {
        Some(ms) => Colength::Finite(ms.len() as u64),
        None => Colength::Infinite,
    }
}

/// Highest degree of a standard monomial: `Some(None)` for the unit ideal,
/// `None` for an infinite staircase.
pub(crate) fn max_standard_degree(leading: &[Monomial], nvars: usize) -> Option<Option<u32>> {
    standard_monomials(leading, nvars).map(|ms| ms.iter().map(Monomial::degree).max())
}
