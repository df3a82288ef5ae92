//! Unification and matching modulo B, where each operator is free,
//! commutative, or associative-commutative.

mod ac;
pub mod dioph;
pub mod matching;

use std::collections::BTreeSet;

use crate::subst::{FreshCounter, FreshKind, Subst};
use crate::term::{Axioms, Term, Var};
use crate::theory::{var_set, Signature};

pub use matching::{first_match, match_all, subsumes_b};

#[derive(Clone, Debug, Default)]
pub struct UnifyOptions {
    /// In variable-variable equations of comparable sorts, bind the
    /// variable outside this set when possible.
    pub keep: BTreeSet<Var>,
    /// Skip the pairwise subsumption pass over the result.
    pub no_minimize: bool,
}

struct Solver<'a> {
    sig: &'a Signature,
    fresh: &'a mut FreshCounter,
    keep: &'a BTreeSet<Var>,
}

impl Solver<'_> {
    fn bind(&self, sub: &Subst, x: &Var, t: Term) -> Option<Subst> {
        if t.occurs(x) {
            return None;
        }
        if !self.sig.sorts.leq(&self.sig.least_sort(&t), &x.sort) {
            return None;
        }
        Some(sub.compose(&Subst::single(x.clone(), t)))
    }

    fn solve(&mut self, mut eqs: Vec<(Term, Term)>, mut sub: Subst, out: &mut Vec<Subst>) {
        loop {
            let Some((l, r)) = eqs.pop() else {
                out.push(sub);
                return;
            };
            let (l, r) = (sub.apply(&l), sub.apply(&r));
            if l == r {
                continue;
            }
            match (l, r) {
                (Term::Var(x), Term::Var(y)) => {
                    let sorts = &self.sig.sorts;
                    let y_below = sorts.leq(&y.sort, &x.sort);
                    let x_below = sorts.leq(&x.sort, &y.sort);
                    if y_below || x_below {
                        let bind_x = if y_below && x_below {
                            !(self.keep.contains(&x) && !self.keep.contains(&y))
                        } else {
                            y_below
                        };
                        let next = if bind_x {
                            self.bind(&sub, &x, Term::Var(y))
                        } else {
                            self.bind(&sub, &y, Term::Var(x))
                        };
                        match next {
                            Some(s) => sub = s,
                            None => return,
                        }
                    } else {
                        for g in sorts.glbs(&x.sort, &y.sort) {
                            let z = Term::Var(self.fresh.next(FreshKind::Unify, g));
                            let s = Subst::from_pairs([(x.clone(), z.clone()), (y.clone(), z)]);
                            let next = sub.compose(&s);
                            self.solve(eqs.clone(), next, out);
                        }
                        return;
                    }
                }
                (Term::Var(x), t) | (t, Term::Var(x)) => match self.bind(&sub, &x, t) {
                    Some(s) => sub = s,
                    None => return,
                },
                (Term::App(f, fs), Term::App(g, gs)) => {
                    if f != g {
                        return;
                    }
                    match f.axioms {
                        Axioms::Free => eqs.extend(fs.into_iter().zip(gs)),
                        Axioms::Comm => {
                            let mut swapped = eqs.clone();
                            swapped.push((fs[0].clone(), gs[1].clone()));
                            swapped.push((fs[1].clone(), gs[0].clone()));
                            let mut straight = eqs;
                            straight.extend(fs.into_iter().zip(gs));
                            self.solve(straight, sub.clone(), out);
                            self.solve(swapped, sub, out);
                            return;
                        }
                        Axioms::AssocComm => {
                            let branches = ac::ac_branches(&f, &fs, &gs, self.sig, self.fresh);
                            for b in branches {
                                let mut next = eqs.clone();
                                next.extend(b);
                                self.solve(next, sub.clone(), out);
                            }
                            return;
                        }
                    }
                }
            }
        }
    }
}

/// Complete set of B-unifiers of the conjunction, restricted to the
/// variables of the equations. New variables are fresh `#n` variables.
pub fn unify_b(eqs: &[(Term, Term)], sig: &Signature, fresh: &mut FreshCounter) -> Vec<Subst> {
    unify_b_with(eqs, sig, fresh, &UnifyOptions::default())
}

pub fn unify_b_with(
    eqs: &[(Term, Term)],
    sig: &Signature,
    fresh: &mut FreshCounter,
    opts: &UnifyOptions,
) -> Vec<Subst> {
    let vars = var_set(eqs.iter().flat_map(|(l, r)| [l, r]));
    fresh.bump_past(&vars);
    let mut raw = Vec::new();
    let mut solver = Solver { sig, fresh, keep: &opts.keep };
    let work: Vec<(Term, Term)> = eqs.iter().rev().cloned().collect();
    solver.solve(work, Subst::id(), &mut raw);

    let mut out: Vec<Subst> = Vec::new();
    for s in raw {
        let s = s.restrict(&vars);
        if !out.contains(&s) {
            out.push(s);
        }
    }
    if opts.no_minimize || out.len() < 2 {
        return out;
    }
    minimize_b(out, &vars, sig)
}

/// Drops every substitution strictly B-subsumed by another one in the set,
/// and all but the first of any mutually subsuming group.
pub fn minimize_b(set: Vec<Subst>, vars: &BTreeSet<Var>, sig: &Signature) -> Vec<Subst> {
    let n = set.len();
    let mut dropped = vec![false; n];
    for i in 0..n {
        if dropped[i] {
            continue;
        }
        for j in 0..n {
            if i == j || dropped[j] {
                continue;
            }
            if subsumes_b(&set[j], &set[i], vars, sig) {
                let back = subsumes_b(&set[i], &set[j], vars, sig);
                if !back || j < i {
                    dropped[i] = true;
                    break;
                }
            }
        }
    }
    set.into_iter().zip(dropped).filter(|(_, d)| !d).map(|(s, _)| s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;

    fn check_sound(l: &Term, r: &Term, us: &[Subst]) {
        for u in us {
            assert_eq!(u.apply(l), u.apply(r), "unsound {u}");
        }
    }

    #[test]
    fn ac_two_vars_two_constants() {
        let th = xor_theory();
        let (l, r) = (parse(&th, "X * Y"), parse(&th, "a * b"));
        let mut fresh = FreshCounter::new();
        let us = unify_b(&[(l.clone(), r.clone())], &th.sig, &mut fresh);
        check_sound(&l, &r, &us);
        let shown: BTreeSet<String> = us.iter().map(|u| u.to_string()).collect();
        let want: BTreeSet<String> =
            ["{X |-> a, Y |-> b}", "{X |-> b, Y |-> a}"].iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, want);
    }

    #[test]
    fn trivial_unifiers() {
        let th = xor_theory();
        let mut fresh = FreshCounter::new();
        let us = unify_b(&[(parse(&th, "X"), parse(&th, "a"))], &th.sig, &mut fresh);
        assert_eq!(us, vec![subst(&th, &[("X", "a")])]);
        assert!(unify_b(&[(parse(&th, "a"), parse(&th, "b"))], &th.sig, &mut fresh).is_empty());
    }

    #[test]
    fn ac_four_variables_gives_seven() {
        let th = xor_theory();
        let (l, r) = (parse(&th, "X * Y"), parse(&th, "U * V"));
        let mut fresh = FreshCounter::new();
        let us = unify_b(&[(l.clone(), r.clone())], &th.sig, &mut fresh);
        check_sound(&l, &r, &us);
        assert_eq!(us.len(), 7);
    }

    #[test]
    fn occurs_check_and_no_identity() {
        let th = xor_theory();
        let mut fresh = FreshCounter::new();
        assert!(unify_b(&[(parse(&th, "X"), parse(&th, "X * Y"))], &th.sig, &mut fresh).is_empty());
        assert!(unify_b(&[(parse(&th, "a"), parse(&th, "X * Y"))], &th.sig, &mut fresh).is_empty());
        let us = unify_b(&[(parse(&th, "X * Y"), parse(&th, "X * a"))], &th.sig, &mut fresh);
        assert_eq!(us, vec![subst(&th, &[("Y", "a")])]);
    }

    #[test]
    fn nested_aliens() {
        let th = xor_theory();
        let (l, r) = (parse(&th, "f1(X) * Y"), parse(&th, "f1(a) * f1(b)"));
        let mut fresh = FreshCounter::new();
        let us = unify_b(&[(l.clone(), r.clone())], &th.sig, &mut fresh);
        check_sound(&l, &r, &us);
        assert_eq!(us.len(), 2);
        let (l, r) = (parse(&th, "X * X"), parse(&th, "Y * Z"));
        let us = unify_b(&[(l.clone(), r.clone())], &th.sig, &mut fresh);
        check_sound(&l, &r, &us);
        assert!(!us.is_empty());
    }

    #[test]
    fn domain_and_range_discipline() {
        let th = xor_theory();
        let (l, r) = (parse(&th, "X * Y"), parse(&th, "U * V"));
        let mut fresh = FreshCounter::new();
        for u in unify_b(&[(l.clone(), r.clone())], &th.sig, &mut fresh) {
            assert!(u.domain().is_subset(&var_set([&l, &r])));
            assert!(u.is_idempotent());
        }
    }

    #[test]
    fn deterministic() {
        let th = xor_theory();
        let eqs = [(parse(&th, "X * Y * a"), parse(&th, "U * V"))];
        let a = unify_b(&eqs, &th.sig, &mut FreshCounter::new());
        let b = unify_b(&eqs, &th.sig, &mut FreshCounter::new());
        assert_eq!(a, b);
    }
}
