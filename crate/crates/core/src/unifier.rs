//! Variant-based unification modulo E ∪ B.
//!
//! Both sides of the problem are unfolded into their variants; every pair
//! of variants whose normal forms B-unify (consistently on the shared
//! variables) yields an E∪B-unifier. On top of this plain procedure sit the
//! fast intersection, which skips pairs already covered by a narrowing
//! ancestor, and the post-filter and quotient passes, which use
//! E∪B-subsumption decided by variant matching against frozen constants.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::rewrite::Rewriter;
use crate::sort::Sort;
use crate::subst::{FreshCounter, FreshKind, Subst};
use crate::term::{Axioms, Op, OpRef, Term, Var};
use crate::theory::{eq_extend, var_set, vars_in_order, EqNames, Signature, Theory};
use crate::unify::{first_match, match_all, minimize_b, subsumes_b, unify_b_with, UnifyOptions};
use crate::variant::{canonical_renaming, generate_variants, Variant, VariantTree};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Mode {
    pub fast: bool,
    pub post: bool,
    pub quotient: bool,
}

impl Mode {
    pub const PLAIN: Mode = Mode { fast: false, post: false, quotient: false };
    pub const FAST: Mode = Mode { fast: true, post: false, quotient: false };
    pub const POST: Mode = Mode { fast: false, post: true, quotient: true };
    pub const FAST_POST: Mode = Mode { fast: true, post: true, quotient: true };
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flags: Vec<&str> = [(self.fast, "fast"), (self.post, "post"), (self.quotient, "quotient")]
            .into_iter()
            .filter_map(|(on, name)| on.then_some(name))
            .collect();
        if flags.is_empty() {
            f.write_str("plain")
        } else {
            f.write_str(&flags.join(" "))
        }
    }
}

#[derive(Clone, Debug)]
pub struct UnificationProblem {
    pub equations: Vec<(Term, Term)>,
    pub bound: Option<usize>,
}

impl UnificationProblem {
    pub fn new(equations: Vec<(Term, Term)>) -> Result<Self> {
        if equations.is_empty() {
            return Err(Error::Input("a unification problem needs at least one equation".into()));
        }
        Ok(UnificationProblem { equations, bound: None })
    }

    pub fn with_bound(mut self, bound: Option<usize>) -> Self {
        self.bound = bound;
        self
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        var_set(self.equations.iter().flat_map(|(l, r)| [l, r]))
    }
}

#[derive(Clone, Debug)]
pub struct UnifierSet {
    /// Each unifier binds every problem variable, to terms over fresh
    /// variables only.
    pub unifiers: Vec<Subst>,
    pub vars: BTreeSet<Var>,
    pub mode: Mode,
    pub truncated: bool,
}

impl UnifierSet {
    pub fn len(&self) -> usize {
        self.unifiers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unifiers.is_empty()
    }
}

const TUPLE_SORT: &str = "<Tuple>";

fn tuple_op(kinds: Vec<Sort>) -> OpRef {
    Op::new(&format!("<tuple{}>", kinds.len()), kinds, Sort::new(TUPLE_SORT), Axioms::Free)
}

fn tuple(terms: Vec<Term>, sig: &Signature) -> Term {
    if terms.len() == 1 {
        return terms.into_iter().next().unwrap();
    }
    let kinds = terms.iter().map(|t| sig.kind_of_term(t)).collect();
    Term::app(&tuple_op(kinds), terms)
}

/// A single equation equivalent to the conjunction: sides are wrapped in a
/// free tupling symbol when there is more than one equation.
pub fn tuple_encode(eqs: &[(Term, Term)], sig: &Signature) -> Result<(Term, Term)> {
    for (l, r) in eqs {
        let (kl, kr) = (sig.kind_of_term(l), sig.kind_of_term(r));
        if kl != kr {
            return Err(Error::Sort(format!("`{l}` has kind {kl} but `{r}` has kind {kr}")));
        }
    }
    match eqs {
        [] => Err(Error::Input("empty conjunction".into())),
        [(l, r)] => Ok((l.clone(), r.clone())),
        _ => {
            let op = tuple_op(eqs.iter().map(|(l, _)| sig.kind_of_term(l)).collect());
            Ok((
                Term::app(&op, eqs.iter().map(|(l, _)| l.clone()).collect()),
                Term::app(&op, eqs.iter().map(|(_, r)| r.clone()).collect()),
            ))
        }
    }
}

const FROZEN_PREFIX: &str = "$frozen:";

fn frozen_constant(name: &str, sort: &Sort) -> Term {
    Term::constant(&Op::new(&format!("{FROZEN_PREFIX}{name}:{sort}"), vec![], sort.clone(), Axioms::Free))
}

fn is_frozen(t: &Term) -> bool {
    matches!(t, Term::App(op, args) if args.is_empty() && op.name.starts_with(FROZEN_PREFIX))
}

fn freeze(t: &Term) -> Term {
    t.map_bottom_up(&mut |s| s.as_var().map(|v| frozen_constant(&v.name, &v.sort)))
}

/// Cache key for the variants of `t`: variables and frozen constants are
/// renamed in order of first occurrence. Returns the key, the inverse
/// variable renaming, and the inverse constant renaming.
fn canonical_key(t: &Term) -> (Term, Subst, HashMap<Term, Term>) {
    fn frozen_in_order(t: &Term, out: &mut Vec<Term>) {
        if is_frozen(t) {
            if !out.contains(t) {
                out.push(t.clone());
            }
        } else {
            t.args().iter().for_each(|a| frozen_in_order(a, out));
        }
    }
    let mut consts = Vec::new();
    frozen_in_order(t, &mut consts);
    let mut fwd = HashMap::new();
    let mut inv = HashMap::new();
    for (i, c) in consts.into_iter().enumerate() {
        let sort = c.op().expect("a constant").result.clone();
        let canon = frozen_constant(&format!("?{}", i + 1), &sort);
        fwd.insert(c.clone(), canon.clone());
        inv.insert(canon, c);
    }
    let relabeled = if fwd.is_empty() { t.clone() } else { t.map_bottom_up(&mut |s| fwd.get(s).cloned()) };
    let (key, back) = canonical_renaming(&relabeled);
    (key, back, inv)
}

fn unfreeze(t: &Term) -> Term {
    t.map_bottom_up(&mut |s| match s {
        Term::App(op, args) if args.is_empty() => {
            let rest = op.name.strip_prefix(FROZEN_PREFIX)?;
            let (name, _) = rest.split_once(':')?;
            Some(Term::Var(Var::new(name, op.result.clone())))
        }
        _ => None,
    })
}

#[derive(Clone, Debug, Default)]
pub struct Stats {
    pub variant_pairs: usize,
    pub fast_discarded: usize,
    pub eb_checks: usize,
}

pub struct Engine {
    base: Theory,
    /// Rewriter of the theory extended with `eq(X, X) -> tt`.
    rw: Rewriter,
    eq: EqNames,
    fresh: FreshCounter,
    /// Variant generation deeper than this many levels is an error.
    pub depth_cap: Option<usize>,
    deadline: Option<Instant>,
    variants: HashMap<Term, Rc<VariantTree>>,
    eb_memo: HashMap<(Vec<Term>, Vec<Term>), bool>,
    /// Constants that are identities of some AC operator.
    units: Vec<Term>,
    pub stats: Stats,
}

impl Engine {
    pub fn new(th: &Theory) -> Result<Self> {
        let (ext, eq) = eq_extend(th)?;
        let rw = Rewriter::shared(Rc::new(ext));
        let units = identity_constants(&rw)?;
        Ok(Engine {
            base: th.clone(),
            rw,
            eq,
            fresh: FreshCounter::new(),
            depth_cap: None,
            deadline: None,
            variants: HashMap::new(),
            eb_memo: HashMap::new(),
            units,
            stats: Stats::default(),
        })
    }

    pub fn theory(&self) -> &Theory {
        &self.base
    }

    pub fn rewriter(&self) -> &Rewriter {
        &self.rw
    }

    fn sig(&self) -> &Signature {
        &self.rw.theory().sig
    }

    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
        self.rw.deadline.set(deadline);
    }

    fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::Timeout),
            _ => Ok(()),
        }
    }

    pub fn normalize(&self, t: &Term) -> Result<Term> {
        self.rw.normalize(t)
    }

    /// The closed variant tree of `t`, cached up to renaming; every call
    /// returns a copy over new fresh variables.
    pub fn variants(&mut self, t: &Term) -> Result<Rc<VariantTree>> {
        let (key, back, consts) = canonical_key(t);
        let tree = match self.variants.get(&key) {
            Some(tree) => tree.clone(),
            None => {
                let tree = generate_variants(&key, &self.rw, &mut self.fresh, None, self.depth_cap)?;
                if !tree.closed {
                    return Err(Error::NotClosed { term: t.to_string(), depth: self.depth_cap.unwrap_or(0) });
                }
                let tree = Rc::new(tree);
                self.variants.insert(key, tree.clone());
                tree
            }
        };
        let mut tree = tree.instantiate(&back, &mut self.fresh);
        if !consts.is_empty() {
            let relabel = |t: &Term| t.map_bottom_up(&mut |s| consts.get(s).cloned());
            tree.root_term = relabel(&tree.root_term);
            for n in &mut tree.nodes {
                n.term = relabel(&n.term);
                n.subst = n.subst.map_terms(relabel);
                n.edge = n.edge.map_terms(relabel);
            }
        }
        Ok(Rc::new(tree))
    }

    /// B-unifiers of `a.term =? b.term` that agree on the shared root
    /// variables, i.e. also solve `a.subst(x) =? b.subst(x)` for x in `shared`.
    fn pair_unifiers(&mut self, a: &Variant, b: &Variant, shared: &BTreeSet<Var>, keep: BTreeSet<Var>) -> Vec<Subst> {
        let mut eqs = vec![(a.term.clone(), b.term.clone())];
        eqs.extend(shared.iter().map(|x| (a.subst.image(x), b.subst.image(x))));
        self.stats.variant_pairs += 1;
        unify_b_with(&eqs, &self.rw.theory().sig, &mut self.fresh, &UnifyOptions { keep, no_minimize: false })
    }

    /// Whether some proper ancestor of `i` in `v1` already unifies with node
    /// `j` of `v2` through a unifier whose domain avoids the accumulated
    /// narrowing substitution from that ancestor down to `i`.
    fn covered_by_ancestor(
        &mut self,
        v1: &VariantTree,
        i: usize,
        v2: &VariantTree,
        j: usize,
        shared: &BTreeSet<Var>,
        swap: bool,
    ) -> Result<bool> {
        for anc in v1.ancestors(i) {
            self.check_deadline()?;
            let rho = v1.path_subst(anc, i);
            let dom = rho.domain();
            let (a, b) = (&v1.nodes[anc], &v2.nodes[j]);
            let sigmas = if swap {
                self.pair_unifiers(b, a, shared, dom.clone())
            } else {
                self.pair_unifiers(a, b, shared, dom.clone())
            };
            if sigmas.iter().any(|s| s.domain().is_disjoint(&dom)) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Unifiers of `t1 =? t2` from the intersection of their variants.
    pub fn intersect(&mut self, t1: &Term, t2: &Term, fast: bool) -> Result<Vec<Subst>> {
        let (w1, w2) = (t1.vars(), t2.vars());
        let shared: BTreeSet<Var> = w1.intersection(&w2).cloned().collect();
        let all: BTreeSet<Var> = w1.union(&w2).cloned().collect();
        self.fresh.bump_past(&all);
        let v1 = self.variants(t1)?;
        let v2 = self.variants(t2)?;
        let mut out = Vec::new();
        for (i, a) in v1.kept() {
            for (j, b) in v2.kept() {
                self.check_deadline()?;
                if fast
                    && (self.covered_by_ancestor(&v1, i, &v2, j, &shared, false)?
                        || self.covered_by_ancestor(&v2, j, &v1, i, &shared, true)?)
                {
                    self.stats.fast_discarded += 1;
                    continue;
                }
                for sigma in self.pair_unifiers(a, b, &shared, BTreeSet::new()) {
                    let theta = Subst::from_pairs(all.iter().map(|x| {
                        let img = if w1.contains(x) { a.subst.image(x) } else { b.subst.image(x) };
                        (x.clone(), sigma.apply(&img))
                    }));
                    out.push(self.rw.normalize_subst(&theta)?);
                }
            }
        }
        let out = self.dedup_b(out, &all)?;
        Ok(out.into_iter().map(|u| self.away(&u, &all)).collect())
    }

    /// Unifiers of the conjunction read off the variants of
    /// `<eq(l1, r1), ..., eq(lk, rk)>` whose term is `<tt, ..., tt>`.
    pub fn eq_unifiers(&mut self, eqs: &[(Term, Term)]) -> Result<Vec<Subst>> {
        let sig = self.sig();
        let tt = Term::constant(&sig.ops_named(&self.eq.tt, 0)[0]);
        let mut goals = Vec::new();
        for (l, r) in eqs {
            let kind = sig.kind_of_term(l);
            let op = sig
                .ops_named(&self.eq.eq, 2)
                .iter()
                .find(|op| op.args[0] == kind)
                .ok_or_else(|| Error::Sort(format!("no equality predicate for kind {kind}")))?;
            goals.push(Term::app(op, vec![l.clone(), r.clone()]));
        }
        let target = tuple(vec![tt; eqs.len()], sig);
        let goal = tuple(goals, sig);
        let all = goal.vars();
        self.fresh.bump_past(&all);
        let tree = self.variants(&goal)?;
        let mut out = Vec::new();
        for (_, v) in tree.kept() {
            if v.term == target {
                out.push(v.subst.restrict(&all));
            }
        }
        let out = self.dedup_b(out, &all)?;
        Ok(out.into_iter().map(|u| self.away(&u, &all)).collect())
    }

    /// Drops later unifiers that are B-renamings of earlier ones.
    fn dedup_b(&self, set: Vec<Subst>, vars: &BTreeSet<Var>) -> Result<Vec<Subst>> {
        let mut kept: Vec<Subst> = Vec::new();
        for s in set {
            self.check_deadline()?;
            let dup = kept.iter().any(|k| subsumes_b(k, &s, vars, self.sig()) && subsumes_b(&s, k, vars, self.sig()));
            if !dup {
                kept.push(s);
            }
        }
        Ok(kept)
    }

    /// Binds every variable of `vars`, renaming the range to fresh variables.
    fn away(&mut self, u: &Subst, vars: &BTreeSet<Var>) -> Subst {
        let mut range = Vec::new();
        for x in vars {
            u.image(x).vars_in_order(&mut range);
        }
        let mut ren = Subst::id();
        for v in range {
            if ren.get(&v).is_none() {
                let sort = v.sort.clone();
                ren.insert(v, Term::Var(self.fresh.next(FreshKind::Unify, sort)));
            }
        }
        Subst::from_pairs(vars.iter().map(|x| (x.clone(), ren.apply(&u.image(x)))))
    }

    /// Complete set of E∪B-matchers of `t` onto `t2`: the variables of `t2`
    /// are frozen into constants and `t` is variant-unified against it.
    pub fn match_eb(&mut self, t: &Term, t2: &Term) -> Result<Vec<Subst>> {
        let subject = self.normalize(&freeze(t2))?;
        let vars = t.vars();
        let tree = self.variants(t)?;
        let mut out: Vec<Subst> = Vec::new();
        for (_, v) in tree.kept() {
            for m in match_all(std::slice::from_ref(&v.term), std::slice::from_ref(&subject), self.sig()) {
                let s = Subst::from_pairs(vars.iter().map(|x| (x.clone(), m.apply(&v.subst.image(x)))));
                let s = self.rw.normalize_subst(&s)?.map_terms(unfreeze);
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        Ok(out)
    }

    /// `general ⊒ specific` modulo E∪B on `vars`.
    pub fn subsumes_eb(&mut self, general: &Subst, specific: &Subst, vars: &BTreeSet<Var>) -> Result<bool> {
        let pats = general.images(vars);
        let subjects = specific.images(vars);
        if first_match(&pats, &subjects, self.sig()).is_some() {
            return Ok(true);
        }
        let key = (pats, subjects);
        if let Some(&hit) = self.eb_memo.get(&key) {
            return Ok(hit);
        }
        self.check_deadline()?;
        self.stats.eb_checks += 1;
        let subjects = key.1.iter().map(|t| self.normalize(&freeze(t))).collect::<Result<Vec<_>>>()?;
        let found = self.eb_match_reduced(&key.0, &subjects)? || self.eb_match_exists(key.0.clone(), &subjects)?;
        self.eb_memo.insert(key, found);
        Ok(found)
    }

    /// Tries the E∪B-matching problem on instances of the patterns where some
    /// variables are set to identity constants or merged with others. These
    /// have fewer variables, hence far fewer variants; a solution of an
    /// instance is a solution of the original problem.
    fn eb_match_reduced(&mut self, pats: &[Term], subjects: &[Term]) -> Result<bool> {
        let vars = vars_in_order(pats);
        let merge = vars.len() <= MAX_REDUCED_VARS;
        if vars.len() < 2 || vars.len() > MAX_ZEROED_VARS {
            return Ok(false);
        }
        // variables that are a whole component are matched directly
        let bare: Vec<&Var> = pats.iter().filter_map(Term::as_var).collect();
        let sig = self.rw.theory().sig.clone();
        let options: Vec<Vec<Option<Term>>> = vars
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let mut opts = vec![None];
                opts.extend(self.units.iter().filter(|u| sig.sorts.leq(&sig.least_sort(u), &x.sort)).cloned().map(Some));
                if merge {
                    opts.extend(vars[..i].iter().filter(|y| sig.sorts.leq(&y.sort, &x.sort)).map(|y| Some(Term::Var(y.clone()))));
                }
                opts
            })
            .collect();
        let mut candidates: Vec<(usize, Vec<Term>)> = Vec::new();
        let mut choice = vec![0usize; vars.len()];
        loop {
            // merging into a variable that is itself replaced is redundant
            let consistent = choice.iter().enumerate().all(|(i, &c)| match &options[i][c] {
                Some(Term::Var(y)) => vars.iter().position(|v| v == y).is_some_and(|j| choice[j] == 0),
                _ => true,
            });
            let kept = choice.iter().filter(|&&c| c == 0).count();
            if consistent && kept < vars.len() {
                let cost = (0..vars.len()).filter(|&i| choice[i] == 0 && !bare.contains(&&vars[i])).count();
                self.check_deadline()?;
                let rho = Subst::from_pairs(
                    vars.iter().enumerate().filter_map(|(i, x)| options[i][choice[i]].clone().map(|t| (x.clone(), t))),
                );
                let reduced = pats.iter().map(|p| self.normalize(&rho.apply(p))).collect::<Result<Vec<_>>>()?;
                if first_match(&reduced, subjects, self.sig()).is_some() {
                    return Ok(true);
                }
                candidates.push((cost, reduced));
            }
            let Some(i) = (0..vars.len()).find(|&i| choice[i] + 1 < options[i].len()) else { break };
            choice[i] += 1;
            for c in &mut choice[..i] {
                *c = 0;
            }
        }
        candidates.sort_by_key(|(cost, _)| *cost);
        let limit = if merge { vars.len() } else { MAX_ZEROED_KEPT };
        for (_, reduced) in candidates.into_iter().take_while(|(cost, _)| *cost <= limit) {
            let key = (reduced, subjects.to_vec());
            let found = match self.eb_memo.get(&key) {
                Some(&hit) => hit,
                None => {
                    let found = self.eb_match_exists(key.0.clone(), subjects)?;
                    self.eb_memo.insert(key, found);
                    found
                }
            };
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Whether some γ makes every `pats[i]γ` E∪B-equal to the ground
    /// `subjects[i]`. Components are solved one at a time, most constrained
    /// first, each through the variants of its current instance.
    fn eb_match_exists(&mut self, pats: Vec<Term>, subjects: &[Term]) -> Result<bool> {
        let Some(i) = (0..pats.len()).min_by_key(|&i| {
            let p = &pats[i];
            (!p.is_var(), !p.is_ground(), p.vars().len(), p.size())
        }) else {
            return Ok(true);
        };
        let p = self.normalize(&pats[i])?;
        let s = &subjects[i];
        let rest = |pats: &[Term], m: &Subst| -> Vec<Term> {
            pats.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, t)| m.apply(t)).collect()
        };
        let rest_subjects: Vec<Term> =
            subjects.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, t)| t.clone()).collect();
        if p.is_ground() {
            return if p == *s { self.eb_match_exists(rest(&pats, &Subst::id()), &rest_subjects) } else { Ok(false) };
        }
        if let Term::Var(x) = &p {
            let m = Subst::single(x.clone(), s.clone());
            return self.eb_match_exists(rest(&pats, &m), &rest_subjects);
        }
        let vars = p.vars();
        let tree = self.variants(&p)?;
        let mut gammas = Vec::new();
        for (_, v) in tree.kept() {
            for m in match_all(std::slice::from_ref(&v.term), std::slice::from_ref(s), self.sig()) {
                self.check_deadline()?;
                let gamma = Subst::from_pairs(vars.iter().map(|x| (x.clone(), m.apply(&v.subst.image(x)))));
                let gamma = self.rw.normalize_subst(&gamma)?;
                if !gammas.contains(&gamma) {
                    gammas.push(gamma);
                }
            }
        }
        // a branch below a B-instance of another matcher is covered by that matcher
        let mut gammas = minimize_b(gammas, &vars, self.sig());
        gammas.sort_by_cached_key(|g| vars.iter().map(|x| g.image(x).size()).sum::<usize>());
        for gamma in gammas {
            if self.eb_match_exists(rest(&pats, &gamma), &rest_subjects)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Removes every unifier strictly subsumed by another one.
    pub fn post_filter(&mut self, us: Vec<Subst>, vars: &BTreeSet<Var>) -> Result<Vec<Subst>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        'next: for i in 0..us.len() {
            let mut dominated = Vec::new();
            for (c, class) in classes.iter_mut().enumerate() {
                let rep = class[0];
                if self.subsumes_eb(&us[rep], &us[i], vars)? {
                    if self.subsumes_eb(&us[i], &us[rep], vars)? {
                        class.push(i);
                    }
                    continue 'next;
                }
                if self.subsumes_eb(&us[i], &us[rep], vars)? {
                    dominated.push(c);
                }
            }
            for c in dominated.into_iter().rev() {
                classes.remove(c);
            }
            classes.push(vec![i]);
        }
        let mut keep: Vec<usize> = classes.into_iter().flatten().collect();
        keep.sort_unstable();
        let mut us: Vec<Option<Subst>> = us.into_iter().map(Some).collect();
        Ok(keep.into_iter().filter_map(|i| us[i].take()).collect())
    }

    /// Keeps the earliest unifier of each class of mutually subsuming ones.
    pub fn quotient(&mut self, us: Vec<Subst>, vars: &BTreeSet<Var>) -> Result<Vec<Subst>> {
        let mut kept: Vec<Subst> = Vec::new();
        for u in us {
            let mut equivalent = false;
            for k in &kept {
                if self.subsumes_eb(k, &u, vars)? && self.subsumes_eb(&u, k, vars)? {
                    equivalent = true;
                    break;
                }
            }
            if !equivalent {
                kept.push(u);
            }
        }
        Ok(kept)
    }

    pub fn unify(&mut self, p: &UnificationProblem, mode: Mode) -> Result<UnifierSet> {
        let (t1, t2) = tuple_encode(&p.equations, self.sig())?;
        let vars = p.vars();
        let mut us = if mode.fast { self.intersect(&t1, &t2, true)? } else { self.eq_unifiers(&p.equations)? };
        if mode.post {
            us = self.post_filter(us, &vars)?;
        }
        if mode.quotient {
            us = self.quotient(us, &vars)?;
        }
        let truncated = p.bound.is_some_and(|b| us.len() > b);
        if let Some(b) = p.bound {
            us.truncate(b);
        }
        Ok(UnifierSet { unifiers: us, vars, mode, truncated })
    }

    /// Whether `u` equalizes both sides of every equation modulo E∪B.
    pub fn is_unifier(&self, p: &UnificationProblem, u: &Subst) -> Result<bool> {
        for (l, r) in &p.equations {
            if self.normalize(&u.apply(l))? != self.normalize(&u.apply(r))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

const MAX_REDUCED_VARS: usize = 4;
const MAX_ZEROED_VARS: usize = 12;
const MAX_ZEROED_KEPT: usize = 2;

/// Constants `c` with `f(X, c) = X` for an AC operator `f`.
fn identity_constants(rw: &Rewriter) -> Result<Vec<Term>> {
    let sig = &rw.theory().sig;
    let mut out = Vec::new();
    for f in sig.ops().filter(|f| f.is_ac()) {
        let kind = sig.sorts.kind_or_self(&f.result);
        let x = Term::Var(Var::new("$unit", kind.clone()));
        for c in sig.ops().filter(|c| c.arity() == 0 && sig.sorts.kind_or_self(&c.result) == kind) {
            let u = Term::constant(c);
            if rw.normalize(&Term::app(f, vec![x.clone(), u.clone()]))? == x && !out.contains(&u) {
                out.push(u);
            }
        }
    }
    Ok(out)
}

/// Renames the fresh variables of each binding to `#1`, `#2`, ... in order
/// of first occurrence, for display.
pub fn renumber(u: &Subst, vars: &BTreeSet<Var>) -> Subst {
    let mut range = Vec::new();
    for x in vars {
        u.image(x).vars_in_order(&mut range);
    }
    let mut ren = Subst::id();
    let mut n = 0;
    for v in range {
        if ren.get(&v).is_none() && !vars.contains(&v) {
            n += 1;
            let sort = v.sort.clone();
            ren.insert(v, Term::Var(Var::new(&format!("#{n}"), sort)));
        }
    }
    Subst::from_pairs(vars.iter().map(|x| (x.clone(), ren.apply(&u.image(x)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;

    fn problem(th: &Theory, l: &str, r: &str) -> UnificationProblem {
        UnificationProblem::new(vec![(parse(th, l), parse(th, r))]).unwrap()
    }

    fn run(th: &Theory, l: &str, r: &str, mode: Mode) -> UnifierSet {
        let mut e = Engine::new(th).unwrap();
        let p = problem(th, l, r);
        let us = e.unify(&p, mode).unwrap();
        for u in &us.unifiers {
            assert!(e.is_unifier(&p, u).unwrap(), "unsound {u}");
        }
        us
    }

    #[test]
    fn x_against_product() {
        let th = xor_theory();
        assert_eq!(run(&th, "X", "U * V", Mode::PLAIN).len(), 7);
        let fast = run(&th, "X", "U * V", Mode::FAST);
        assert_eq!(fast.len(), 1);
        let shown = renumber(&fast.unifiers[0], &fast.vars).to_string();
        assert_eq!(shown, "{U |-> #1:[ElemXor], V |-> #2:[ElemXor], X |-> #1:[ElemXor] * #2:[ElemXor]}");
    }

    #[test]
    fn trivial_problems() {
        let th = xor_theory();
        assert!(run(&th, "a", "b", Mode::PLAIN).is_empty());
        let us = run(&th, "X", "a", Mode::PLAIN);
        assert_eq!(us.len(), 1);
        assert_eq!(us.unifiers[0].image(&var(&th, "X")), parse(&th, "a"));
    }

    #[test]
    fn conjunctions_are_tupled() {
        let th = xor_theory();
        let mut e = Engine::new(&th).unwrap();
        let p = UnificationProblem::new(vec![
            (parse(&th, "X"), parse(&th, "a")),
            (parse(&th, "Y"), parse(&th, "b")),
        ])
        .unwrap();
        let us = e.unify(&p, Mode::PLAIN).unwrap();
        assert_eq!(us.len(), 1);
        assert_eq!(us.unifiers[0], subst(&th, &[("X", "a"), ("Y", "b")]));
    }

    #[test]
    fn eb_matching() {
        let th = xor_theory();
        let mut e = Engine::new(&th).unwrap();
        let ms = e.match_eb(&parse(&th, "X * Y"), &parse(&th, "a * b")).unwrap();
        assert!(ms.contains(&subst(&th, &[("X", "a"), ("Y", "b")])));
        for m in &ms {
            assert_eq!(e.normalize(&m.apply(&parse(&th, "X * Y"))).unwrap(), parse(&th, "a * b"));
        }
        assert!(e.match_eb(&parse(&th, "a"), &parse(&th, "b")).unwrap().is_empty());
        let t = parse(&th, "f1(Y * a)");
        assert!(e.match_eb(&parse(&th, "X"), &t).unwrap().contains(&Subst::from_pairs([(var(&th, "X"), t.clone())])));
    }

    #[test]
    fn eb_subsumption() {
        let th = xor_theory();
        let mut e = Engine::new(&th).unwrap();
        let w: BTreeSet<Var> = ["X", "Y", "U", "V"].iter().map(|v| var(&th, v)).collect();
        let general = subst(&th, &[("X", "Y1 * U1 * V1"), ("Y", "Y1"), ("U", "U1"), ("V", "V1")]);
        let specific = subst(&th, &[("X", "Z1"), ("Y", "Z2"), ("U", "Z1"), ("V", "Z2")]);
        assert!(e.subsumes_eb(&general, &specific, &w).unwrap());
        assert!(e.subsumes_eb(&specific, &specific, &w).unwrap());
        let x: BTreeSet<Var> = [var(&th, "X")].into();
        assert!(!e.subsumes_eb(&subst(&th, &[("X", "a")]), &subst(&th, &[("X", "b")]), &x).unwrap());
    }
}
