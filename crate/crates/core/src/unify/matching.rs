//! Matching modulo free, commutative, and AC operators.
//!
//! Variables of the subject are never bound; they behave as constants.

use std::collections::BTreeMap;

use crate::subst::Subst;
use crate::term::{Axioms, OpRef, Term, Var};
use crate::theory::Signature;

/// Unlike `Subst`, keeps `X -> X`, which matters when a pattern variable
/// also occurs in the subject.
type Bindings = BTreeMap<Var, Term>;

enum Goal {
    Eq(Term, Term),
    Ac { op: OpRef, pats: Vec<Term>, subj: Vec<(Term, u32)> },
}

fn multiset(args: &[Term]) -> Vec<(Term, u32)> {
    let mut out: Vec<(Term, u32)> = Vec::new();
    for a in args {
        match out.last_mut() {
            Some((t, n)) if t == a => *n += 1,
            _ => out.push((a.clone(), 1)),
        }
    }
    out
}

fn remove_one(subj: &mut Vec<(Term, u32)>, t: &Term) -> bool {
    match subj.iter().position(|(s, _)| s == t) {
        Some(i) => {
            subj[i].1 -= 1;
            if subj[i].1 == 0 {
                subj.remove(i);
            }
            true
        }
        None => false,
    }
}

fn build(op: &OpRef, parts: &[(Term, u32)]) -> Term {
    let args: Vec<Term> =
        parts.iter().flat_map(|(t, n)| std::iter::repeat(t.clone()).take(*n as usize)).collect();
    Term::app(op, args)
}

struct Matcher<'a, F: FnMut(Subst) -> bool> {
    sig: &'a Signature,
    emit: F,
}

impl<'a, F: FnMut(Subst) -> bool> Matcher<'a, F> {
    fn bind_ok(&self, x: &Var, t: &Term) -> bool {
        self.sig.sorts.leq(&self.sig.least_sort(t), &x.sort)
    }

    /// Returns true when the consumer asked to stop.
    fn solve(&mut self, mut goals: Vec<Goal>, mut sub: Bindings) -> bool {
        loop {
            let Some(goal) = goals.pop() else {
                return !(self.emit)(Subst::from_pairs(sub));
            };
            match goal {
                Goal::Eq(p, s) => match p {
                    Term::Var(x) => match sub.get(&x) {
                        Some(v) => {
                            if *v != s {
                                return false;
                            }
                        }
                        None => {
                            if !self.bind_ok(&x, &s) {
                                return false;
                            }
                            sub.insert(x, s);
                        }
                    },
                    Term::App(f, ps) => {
                        let Term::App(g, ss) = s else { return false };
                        if f != g {
                            return false;
                        }
                        match f.axioms {
                            Axioms::Free => {
                                goals.extend(ps.into_iter().zip(ss).rev().map(|(p, s)| Goal::Eq(p, s)));
                            }
                            Axioms::Comm => {
                                let mut alt = Vec::with_capacity(goals.len() + 2);
                                alt.extend(goals.iter().map(clone_goal));
                                alt.push(Goal::Eq(ps[1].clone(), ss[0].clone()));
                                alt.push(Goal::Eq(ps[0].clone(), ss[1].clone()));
                                if ps[0] != ps[1] && ss[0] != ss[1] && self.solve(alt, sub.clone()) {
                                    return true;
                                }
                                goals.push(Goal::Eq(ps[1].clone(), ss[1].clone()));
                                goals.push(Goal::Eq(ps[0].clone(), ss[0].clone()));
                            }
                            Axioms::AssocComm => {
                                if ps.len() > ss.len() {
                                    return false;
                                }
                                goals.push(Goal::Ac { op: f, pats: ps, subj: multiset(&ss) });
                            }
                        }
                    }
                },
                Goal::Ac { op, pats, subj } => {
                    // AC goals wait until plain goals have bound what they can
                    if goals.iter().any(|g| matches!(g, Goal::Eq(..))) {
                        goals.insert(0, Goal::Ac { op, pats, subj });
                        continue;
                    }
                    // then the most constrained AC goal goes first
                    let free = |pats: &[Term]| {
                        pats.iter().filter(|p| p.as_var().is_some_and(|x| sub.get(x).is_none())).count()
                    };
                    let mine = free(&pats);
                    let best = goals
                        .iter()
                        .enumerate()
                        .filter_map(|(i, g)| match g {
                            Goal::Ac { pats, .. } => Some((free(pats), i)),
                            Goal::Eq(..) => None,
                        })
                        .min();
                    if let Some((n, i)) = best {
                        if n < mine {
                            let Goal::Ac { op: bop, pats: bpats, subj: bsubj } =
                                std::mem::replace(&mut goals[i], Goal::Ac { op, pats, subj })
                            else {
                                unreachable!()
                            };
                            return self.solve_ac(goals, sub, bop, bpats, bsubj);
                        }
                    }
                    return self.solve_ac(goals, sub, op, pats, subj);
                }
            }
        }
    }

    fn solve_ac(
        &mut self,
        goals: Vec<Goal>,
        sub: Bindings,
        op: OpRef,
        pats: Vec<Term>,
        mut subj: Vec<(Term, u32)>,
    ) -> bool {
        // bound variables consume their value
        let mut rest = Vec::with_capacity(pats.len());
        for p in pats {
            if let Term::Var(x) = &p {
                if let Some(v) = sub.get(x) {
                    let parts: Vec<Term> = match v {
                        Term::App(g, inner) if *g == op => inner.clone(),
                        other => vec![other.clone()],
                    };
                    for part in &parts {
                        if !remove_one(&mut subj, part) {
                            return false;
                        }
                    }
                    continue;
                }
            }
            rest.push(p);
        }
        let pats = rest;
        let total: u32 = subj.iter().map(|(_, n)| n).sum();
        if pats.is_empty() {
            return if total == 0 { self.solve(goals, sub) } else { false };
        }
        if (pats.len() as u32) > total {
            return false;
        }

        if let Some(i) = pats.iter().position(|p| !p.is_var()) {
            let p = &pats[i];
            let mut others = pats.clone();
            others.remove(i);
            for k in 0..subj.len() {
                let s = &subj[k].0;
                if s.op() != p.op() {
                    continue;
                }
                let mut remaining = subj.clone();
                remove_one(&mut remaining, &s.clone());
                let mut next: Vec<Goal> = goals.iter().map(clone_goal).collect();
                next.push(Goal::Ac { op: op.clone(), pats: others.clone(), subj: remaining });
                next.push(Goal::Eq(p.clone(), s.clone()));
                if self.solve(next, sub.clone()) {
                    return true;
                }
            }
            return false;
        }

        // only unbound variables remain
        let mut vars: Vec<(Var, u32)> = Vec::new();
        for p in &pats {
            let x = p.as_var().unwrap();
            match vars.iter_mut().find(|(v, _)| v == x) {
                Some((_, m)) => *m += 1,
                None => vars.push((x.clone(), 1)),
            }
        }
        // enumerate the variable shared with the most other goals first
        let occurrences = |x: &Var| -> usize {
            goals
                .iter()
                .filter(|g| matches!(g, Goal::Ac { op: gop, pats, .. } if *gop == op && pats.iter().any(|p| p.as_var() == Some(x))))
                .count()
        };
        let pick = (0..vars.len()).max_by_key(|&i| (occurrences(&vars[i].0), std::cmp::Reverse(i))).unwrap();
        let (x, m) = vars.remove(pick);
        vars.insert(0, (x.clone(), m));
        if vars.len() == 1 {
            if subj.iter().any(|(_, n)| n % m != 0) {
                return false;
            }
            let share: Vec<(Term, u32)> = subj.iter().map(|(t, n)| (t.clone(), n / m)).collect();
            let value = build(&op, &share);
            if !self.bind_ok(&x, &value) {
                return false;
            }
            let mut sub = sub;
            sub.insert(x, value);
            return self.solve(goals, sub);
        }
        let need_others: u32 = vars[1..].iter().map(|(_, m)| m).sum();
        let others: Vec<Term> = pats.iter().filter(|p| p.as_var() != Some(&x)).cloned().collect();
        // every other goal of this operator that mentions x bounds its share
        let caps: Vec<u32> = subj
            .iter()
            .map(|(t, n)| {
                let mut cap = n / m;
                for g in &goals {
                    if let Goal::Ac { op: gop, pats: gpats, subj: gsubj } = g {
                        let mg = gpats.iter().filter(|p| p.as_var() == Some(&x)).count() as u32;
                        if *gop == op && mg > 0 {
                            let have = gsubj.iter().find(|(s, _)| s == t).map_or(0, |(_, k)| *k);
                            cap = cap.min(have / mg);
                        }
                    }
                }
                cap
            })
            .collect();
        if caps.iter().all(|&c| c == 0) {
            return false;
        }
        let mut choice = vec![0u32; subj.len()];
        let share = Share { op: &op, x: &x, m, subj: &subj, caps: &caps, others: &others, need_others };
        self.enumerate_share(&goals, &sub, &share, 0, &mut choice)
    }

    fn enumerate_share(&mut self, goals: &[Goal], sub: &Bindings, sh: &Share, i: usize, choice: &mut Vec<u32>) -> bool {
        if i == sh.subj.len() {
            let taken: u32 = choice.iter().sum();
            let total: u32 = sh.subj.iter().map(|(_, n)| n).sum();
            if taken == 0 || total - taken * sh.m < sh.need_others {
                return false;
            }
            let share: Vec<(Term, u32)> = sh
                .subj
                .iter()
                .zip(choice.iter())
                .filter(|(_, &k)| k > 0)
                .map(|((t, _), &k)| (t.clone(), k))
                .collect();
            let value = build(sh.op, &share);
            if !self.bind_ok(sh.x, &value) {
                return false;
            }
            let remaining: Vec<(Term, u32)> = sh
                .subj
                .iter()
                .zip(choice.iter())
                .map(|((t, n), &k)| (t.clone(), n - k * sh.m))
                .filter(|(_, n)| *n > 0)
                .collect();
            let mut next: Vec<Goal> = goals.iter().map(clone_goal).collect();
            next.push(Goal::Ac { op: sh.op.clone(), pats: sh.others.to_vec(), subj: remaining });
            let mut sub = sub.clone();
            sub.insert(sh.x.clone(), value);
            return self.solve(next, sub);
        }
        for k in 0..=sh.caps[i] {
            choice[i] = k;
            if self.enumerate_share(goals, sub, sh, i + 1, choice) {
                choice[i] = 0;
                return true;
            }
        }
        choice[i] = 0;
        false
    }
}

/// One variable's share of an AC subject: `x` (occurring `m` times) takes
/// up to `caps[i]` copies of each subject element.
struct Share<'s> {
    op: &'s OpRef,
    x: &'s Var,
    m: u32,
    subj: &'s [(Term, u32)],
    caps: &'s [u32],
    others: &'s [Term],
    need_others: u32,
}

fn clone_goal(g: &Goal) -> Goal {
    match g {
        Goal::Eq(p, s) => Goal::Eq(p.clone(), s.clone()),
        Goal::Ac { op, pats, subj } => Goal::Ac { op: op.clone(), pats: pats.clone(), subj: subj.clone() },
    }
}

/// Cheap necessary condition for `p` to match `s`: heads agree, and every
/// non-variable argument of an AC pattern layer has a subject argument with
/// the same head.
fn may_match(p: &Term, s: &Term) -> bool {
    let Term::App(f, ps) = p else { return true };
    let Term::App(g, ss) = s else { return false };
    if f != g {
        return false;
    }
    match f.axioms {
        Axioms::Free => ps.len() == ss.len() && ps.iter().zip(ss).all(|(p, s)| may_match(p, s)),
        Axioms::Comm => true,
        Axioms::AssocComm => {
            if ps.len() > ss.len() {
                return false;
            }
            let mut used = vec![false; ss.len()];
            for q in ps.iter().filter(|q| !q.is_var()) {
                let Some(i) = (0..ss.len()).find(|&i| !used[i] && same_head(q, &ss[i])) else { return false };
                used[i] = true;
            }
            true
        }
    }
}

fn same_head(p: &Term, s: &Term) -> bool {
    match (p, s) {
        (Term::App(f, ps), Term::App(g, ss)) => f == g && (f.axioms == Axioms::AssocComm || ps.len() == ss.len()),
        _ => false,
    }
}

fn run(pats: &[Term], subjects: &[Term], sig: &Signature, init: Bindings, emit: impl FnMut(Subst) -> bool) {
    assert_eq!(pats.len(), subjects.len());
    if !pats.iter().zip(subjects).all(|(p, s)| may_match(p, s)) {
        return;
    }
    // instantiation modulo AC never shrinks a term
    if pats.iter().zip(subjects).any(|(p, s)| p.size() > s.size()) {
        return;
    }
    let goals: Vec<Goal> =
        pats.iter().zip(subjects).rev().map(|(p, s)| Goal::Eq(p.clone(), s.clone())).collect();
    let mut m = Matcher { sig, emit };
    m.solve(goals, init);
}

/// All matchers of the pattern tuple against the subject tuple, without
/// duplicates, in search order.
pub fn match_all(pats: &[Term], subjects: &[Term], sig: &Signature) -> Vec<Subst> {
    let mut out: Vec<Subst> = Vec::new();
    run(pats, subjects, sig, Bindings::new(), |s| {
        if !out.contains(&s) {
            out.push(s);
        }
        true
    });
    out
}

pub fn first_match(pats: &[Term], subjects: &[Term], sig: &Signature) -> Option<Subst> {
    let mut found = None;
    run(pats, subjects, sig, Bindings::new(), |s| {
        found = Some(s);
        false
    });
    found
}

/// `general ⊒_B specific` on `vars`: some η makes `general;η` agree with
/// `specific` on `vars` modulo the axioms.
pub fn subsumes_b<'a>(
    general: &Subst,
    specific: &Subst,
    vars: impl IntoIterator<Item = &'a Var> + Clone,
    sig: &Signature,
) -> bool {
    let pats = general.images(vars.clone());
    let subjects = specific.images(vars);
    first_match(&pats, &subjects, sig).is_some()
}


#[cfg(test)]
mod shared_variable_tests {
    use super::*;
    use crate::testutil::*;

    #[test]
    fn pattern_variable_occurring_in_subject() {
        let th = xor_theory();
        let p = parse(&th, "f2(X, X)");
        assert!(first_match(&[p.clone()], &[parse(&th, "f2(X, Y)")], &th.sig).is_none());
        assert!(first_match(&[p], &[parse(&th, "f2(X, X)")], &th.sig).is_some());
    }
}
