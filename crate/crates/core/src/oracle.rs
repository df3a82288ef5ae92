//! Brute-force ground unifiers: an oracle for completeness checks that only
//! relies on normalization and canonical equality.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::rewrite::Rewriter;
use crate::subst::Subst;
use crate::term::{OpRef, Term, Var};
use crate::theory::var_set;

/// Normal forms of the ground terms built from `constants` with at most
/// `depth` nested applications of `ops`, without duplicates.
pub fn ground_terms(rw: &Rewriter, constants: &[Term], ops: &[OpRef], depth: usize, limit: u128) -> Result<Vec<Term>> {
    let sig = &rw.theory().sig;
    let mut terms: Vec<Term> = Vec::new();
    let mut seen = BTreeSet::new();
    for c in constants {
        let t = rw.normalize(c)?;
        if seen.insert(t.clone()) {
            terms.push(t);
        }
    }
    for _ in 0..depth {
        let mut next = Vec::new();
        for op in ops.iter().filter(|op| op.arity() > 0) {
            let choices: Vec<Vec<&Term>> = op
                .args
                .iter()
                .map(|s| terms.iter().filter(|t| sig.sorts.leq(&sig.least_sort(t), s)).collect())
                .collect();
            let count = choices.iter().map(|c| c.len() as u128).product::<u128>();
            if count > limit {
                return Err(Error::OracleBudget { candidates: count, limit });
            }
            for args in product(&choices) {
                let t = rw.normalize(&Term::app(op, args.into_iter().cloned().collect()))?;
                if seen.insert(t.clone()) {
                    next.push(t);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        terms.extend(next);
    }
    Ok(terms)
}

/// Every ground substitution over `values` (respecting variable sorts)
/// that makes both sides of each equation normalize to the same term.
/// Fails instead of truncating when there are more than `limit` candidates.
pub fn ground_oracle(rw: &Rewriter, eqs: &[(Term, Term)], values: &[Term], limit: u128) -> Result<Vec<Subst>> {
    let sig = &rw.theory().sig;
    let vars: Vec<Var> = var_set(eqs.iter().flat_map(|(l, r)| [l, r])).into_iter().collect();
    let choices: Vec<Vec<&Term>> = vars
        .iter()
        .map(|x| values.iter().filter(|t| sig.sorts.leq(&sig.least_sort(t), &x.sort)).collect())
        .collect();
    let count = choices.iter().map(|c| c.len() as u128).product::<u128>();
    if count > limit {
        return Err(Error::OracleBudget { candidates: count, limit });
    }
    let mut out = Vec::new();
    for pick in product(&choices) {
        let gamma = Subst::from_pairs(vars.iter().cloned().zip(pick.into_iter().cloned()));
        let mut ok = true;
        for (l, r) in eqs {
            if rw.normalize(&gamma.apply(l))? != rw.normalize(&gamma.apply(r))? {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(gamma);
        }
    }
    Ok(out)
}

fn product<'a>(choices: &[Vec<&'a Term>]) -> Vec<Vec<&'a Term>> {
    let mut out: Vec<Vec<&Term>> = vec![Vec::new()];
    for c in choices {
        out = out.iter().flat_map(|prefix| c.iter().map(move |t| [prefix.as_slice(), &[*t]].concat())).collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;

    fn constants(th: &crate::Theory, names: &[&str]) -> Vec<Term> {
        names.iter().map(|n| parse(th, n)).collect()
    }

    fn star(th: &crate::Theory) -> Vec<OpRef> {
        th.sig.ops_named("_*_", 2).to_vec()
    }

    #[test]
    fn single_constant_solution() {
        let th = xor_theory();
        let rw = Rewriter::new(&th);
        let values = ground_terms(&rw, &constants(&th, &["a", "b", "mt"]), &star(&th), 1, 1000).unwrap();
        let eqs = [(parse(&th, "X"), parse(&th, "a"))];
        let sols = ground_oracle(&rw, &eqs, &values, 1000).unwrap();
        assert_eq!(sols, vec![subst(&th, &[("X", "a")])]);
    }

    #[test]
    fn idempotence_accepts_everything() {
        let th = xor_theory();
        let rw = Rewriter::new(&th);
        let values = ground_terms(&rw, &constants(&th, &["a", "b", "c", "mt"]), &star(&th), 2, 10_000).unwrap();
        assert_eq!(values.len(), 8);
        let eqs = [(parse(&th, "X * X"), parse(&th, "mt"))];
        assert_eq!(ground_oracle(&rw, &eqs, &values, 1000).unwrap().len(), values.len());
    }

    #[test]
    fn parity_of_two_variables() {
        let th = xor_theory();
        let rw = Rewriter::new(&th);
        let values = ground_terms(&rw, &constants(&th, &["a", "b", "c", "mt"]), &star(&th), 1, 10_000).unwrap();
        let eqs = [(parse(&th, "X * Y"), parse(&th, "a * b"))];
        let sols = ground_oracle(&rw, &eqs, &values, 10_000).unwrap();
        assert_eq!(values.len(), 7);
        // Y = X * a * b must stay within depth 1, which rules out X = c
        assert_eq!(sols.len(), 6);
    }

    #[test]
    fn budget_is_explicit() {
        let th = xor_theory();
        let rw = Rewriter::new(&th);
        let values = ground_terms(&rw, &constants(&th, &["a", "b", "c", "mt"]), &star(&th), 1, 10_000).unwrap();
        let eqs = [(parse(&th, "X * Y * Z"), parse(&th, "U"))];
        assert!(matches!(ground_oracle(&rw, &eqs, &values, 100), Err(Error::OracleBudget { .. })));
    }
}
