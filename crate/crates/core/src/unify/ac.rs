//! One AC decomposition step: `f(s1..sm) =? f(t1..tn)` becomes a set of
//! alternative equation systems over fresh variables.
//!
//! Common arguments are cancelled, the remaining distinct arguments become
//! columns of a linear Diophantine equation weighted by multiplicity, and
//! every subset of the minimal solution basis that covers all columns (and
//! assigns each non-variable argument exactly once) yields one branch.

use crate::subst::{FreshCounter, FreshKind};
use crate::term::{OpRef, Term};
use crate::theory::Signature;

use super::dioph::minimal_solutions;

type Column = (Term, u32);

fn multiset(args: &[Term]) -> Vec<Column> {
    let mut out: Vec<Column> = Vec::new();
    for a in args {
        match out.last_mut() {
            Some((t, n)) if t == a => *n += 1,
            _ => out.push((a.clone(), 1)),
        }
    }
    out
}

fn cancel(left: &mut Vec<Column>, right: &mut Vec<Column>) {
    for (t, n) in left.iter_mut() {
        if let Some((_, m)) = right.iter_mut().find(|(u, _)| u == t) {
            let k = (*n).min(*m);
            *n -= k;
            *m -= k;
        }
    }
    left.retain(|(_, n)| *n > 0);
    right.retain(|(_, n)| *n > 0);
}

fn expand(op: &OpRef, cols: &[Column]) -> Term {
    Term::app(
        op,
        cols.iter().flat_map(|(t, n)| std::iter::repeat(t.clone()).take(*n as usize)).collect(),
    )
}

/// Alternative equation systems equivalent (over the fresh variables) to
/// the AC equation. An empty result means no unifier.
pub fn ac_branches(
    op: &OpRef,
    largs: &[Term],
    rargs: &[Term],
    sig: &Signature,
    fresh: &mut FreshCounter,
) -> Vec<Vec<(Term, Term)>> {
    let (mut left, mut right) = (multiset(largs), multiset(rargs));
    cancel(&mut left, &mut right);
    match (left.is_empty(), right.is_empty()) {
        (true, true) => return vec![Vec::new()],
        (true, false) | (false, true) => return Vec::new(),
        _ => {}
    }
    if left.len() == 1 && left[0].1 == 1 && left[0].0.is_var() {
        return vec![vec![(left[0].0.clone(), expand(op, &right))]];
    }
    if right.len() == 1 && right[0].1 == 1 && right[0].0.is_var() {
        return vec![vec![(right[0].0.clone(), expand(op, &left))]];
    }

    let cols: Vec<&Column> = left.iter().chain(right.iter()).collect();
    let alien: Vec<bool> = cols.iter().map(|(t, _)| !t.is_var()).collect();
    let cap = |c: &[Column]| -> Vec<Option<u32>> {
        c.iter().map(|(t, _)| if t.is_var() { None } else { Some(1) }).collect()
    };
    let lcoef: Vec<u32> = left.iter().map(|(_, n)| *n).collect();
    let rcoef: Vec<u32> = right.iter().map(|(_, n)| *n).collect();
    let basis: Vec<Vec<u32>> = minimal_solutions(&lcoef, &rcoef, &cap(&left), &cap(&right))
        .into_iter()
        .filter(|v| {
            // aliens sharing one fresh variable must have the same top operator
            let roots: Vec<_> = v
                .iter()
                .enumerate()
                .filter(|&(c, &k)| k > 0 && alien[c])
                .map(|(c, _)| cols[c].0.op().cloned())
                .collect();
            roots.windows(2).all(|w| w[0] == w[1])
        })
        .collect();

    let ncols = cols.len();
    // coverage[i][c]: some basis vector at index >= i touches column c
    let mut coverage = vec![vec![false; ncols]; basis.len() + 1];
    for i in (0..basis.len()).rev() {
        for c in 0..ncols {
            coverage[i][c] = coverage[i + 1][c] || basis[i][c] > 0;
        }
    }

    let mut subsets = Vec::new();
    let mut sums = vec![0u32; ncols];
    let mut chosen = Vec::new();
    select(&basis, &alien, &coverage, 0, &mut sums, &mut chosen, &mut subsets);

    let kind = sig.sorts.kind_or_self(&op.result);
    let mut branches = Vec::with_capacity(subsets.len());
    for subset in subsets {
        let zs: Vec<Term> =
            subset.iter().map(|_| Term::Var(fresh.next(FreshKind::Unify, kind.clone()))).collect();
        let mut eqs = Vec::with_capacity(ncols);
        for (c, (t, _)) in cols.iter().enumerate() {
            if alien[c] {
                let k = subset.iter().position(|&b| basis[b][c] == 1).unwrap();
                eqs.push((zs[k].clone(), t.clone()));
            } else {
                let parts: Vec<Term> = subset
                    .iter()
                    .enumerate()
                    .flat_map(|(k, &b)| std::iter::repeat(zs[k].clone()).take(basis[b][c] as usize))
                    .collect();
                eqs.push((t.clone(), Term::app(op, parts)));
            }
        }
        branches.push(eqs);
    }
    branches
}

fn select(
    basis: &[Vec<u32>],
    alien: &[bool],
    coverage: &[Vec<bool>],
    i: usize,
    sums: &mut Vec<u32>,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    for c in 0..sums.len() {
        if sums[c] == 0 && !coverage[i][c] {
            return;
        }
    }
    if i == basis.len() {
        out.push(chosen.clone());
        return;
    }
    let v = &basis[i];
    let fits = (0..sums.len()).all(|c| !alien[c] || sums[c] + v[c] <= 1);
    if fits {
        for c in 0..sums.len() {
            sums[c] += v[c];
        }
        chosen.push(i);
        select(basis, alien, coverage, i + 1, sums, chosen, out);
        chosen.pop();
        for c in 0..sums.len() {
            sums[c] -= v[c];
        }
    }
    select(basis, alien, coverage, i + 1, sums, chosen, out);
}
