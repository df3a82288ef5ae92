//! Rewriting with the oriented equations modulo the axioms, and one-step
//! narrowing.

use std::cell::{Cell, RefCell};
use std::rc::Rc;
use std::time::Instant;
use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::subst::{rename_apart, FreshCounter, FreshKind, Subst};
use crate::term::{OpRef, Term, Var};
use crate::theory::{Rule, Theory};
use crate::unify::{first_match, unify_b_with, UnifyOptions};

const RAW: UnifyOptions = UnifyOptions { keep: BTreeSet::new(), no_minimize: true };

pub const DEFAULT_MAX_STEPS: usize = 10_000;

/// Where a narrowing step applied: a path of argument indices, and for a
/// sub-multiset of an AC layer, the indices of the selected arguments.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub path: Vec<usize>,
    pub subset: Option<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct NarrowStep {
    pub term: Term,
    /// Narrowing substitution restricted to the variables of the narrowed
    /// term, in normal form.
    pub subst: Subst,
    pub position: Position,
    pub rule: String,
}

pub struct Rewriter {
    th: Rc<Theory>,
    /// Labels of AC-rooted rules that must also be tried on sub-multisets.
    incoherent: BTreeSet<String>,
    by_root: HashMap<(String, usize), Vec<usize>>,
    pub max_steps: usize,
    /// Narrowing fails with `Error::Timeout` once this instant has passed.
    pub deadline: Cell<Option<Instant>>,
    cache: RefCell<HashMap<Term, Term>>,
}

const CACHE_LIMIT: usize = 200_000;

impl Rewriter {
    pub fn new(th: &Theory) -> Self {
        Self::shared(Rc::new(th.clone()))
    }

    pub fn shared(th: Rc<Theory>) -> Self {
        let mut by_root: HashMap<(String, usize), Vec<usize>> = HashMap::new();
        for (i, r) in th.rules.iter().enumerate() {
            if let Term::App(op, _) = &r.lhs {
                by_root.entry((op.name.to_string(), op.arity())).or_default().push(i);
            }
        }
        let incoherent = th.rules.iter().filter(|r| !th.is_coherent(r)).map(|r| r.label.clone()).collect();
        Rewriter { th, incoherent, by_root, max_steps: DEFAULT_MAX_STEPS, deadline: Cell::new(None), cache: RefCell::new(HashMap::new()) }
    }

    pub fn theory(&self) -> &Theory {
        &self.th
    }

    fn rules_for(&self, op: &OpRef) -> impl Iterator<Item = &Rule> {
        let idx = self.by_root.get(&(op.name.to_string(), op.arity())).map(Vec::as_slice).unwrap_or(&[]);
        idx.iter().map(|&i| &self.th.rules[i])
    }

    pub fn check_deadline(&self) -> Result<()> {
        match self.deadline.get() {
            Some(d) if Instant::now() >= d => Err(Error::Timeout),
            _ => Ok(()),
        }
    }

    /// Innermost normal form modulo the axioms.
    pub fn normalize(&self, t: &Term) -> Result<Term> {
        let mut steps = 0;
        let mut last = String::new();
        self.norm(t, &mut steps, &mut last)
    }

    pub fn normalize_subst(&self, s: &Subst) -> Result<Subst> {
        let mut out = Subst::id();
        for (v, t) in s.iter() {
            out.insert(v.clone(), self.normalize(t)?);
        }
        Ok(out)
    }

    pub fn is_normal(&self, t: &Term) -> Result<bool> {
        Ok(&self.normalize(t)? == t)
    }

    fn norm(&self, t: &Term, steps: &mut usize, last: &mut String) -> Result<Term> {
        let Term::App(op, args) = t else { return Ok(t.clone()) };
        if let Some(hit) = self.cache.borrow().get(t) {
            return Ok(hit.clone());
        }
        let nargs = args.iter().map(|a| self.norm(a, steps, last)).collect::<Result<Vec<_>>>()?;
        let cur = Term::app(op, nargs);
        let out = match self.rewrite_root(&cur) {
            Some((rule, next)) => {
                *steps += 1;
                *last = rule.to_string();
                if *steps > self.max_steps {
                    return Err(Error::NonTermination { steps: self.max_steps, rule: last.clone() });
                }
                self.norm(&next, steps, last)?
            }
            None => cur,
        };
        let mut cache = self.cache.borrow_mut();
        if cache.len() > CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(t.clone(), out.clone());
        Ok(out)
    }

    /// One rewrite at the root, with AC extension matching.
    fn rewrite_root(&self, t: &Term) -> Option<(&str, Term)> {
        let Term::App(op, args) = t else { return None };
        let sig = &self.th.sig;
        for rule in self.rules_for(op) {
            let lhs_len = rule.lhs.args().len();
            if args.len() == lhs_len || !op.is_ac() {
                if let Some(m) = first_match(std::slice::from_ref(&rule.lhs), std::slice::from_ref(t), sig) {
                    return Some((&rule.label, m.apply(&rule.rhs)));
                }
            }
            if op.is_ac() && args.len() > lhs_len {
                let ext = Var::new("$ext", sig.sorts.kind_or_self(&op.result));
                let mut pargs = rule.lhs.args().to_vec();
                pargs.push(Term::Var(ext.clone()));
                let pattern = Term::app(op, pargs);
                if let Some(m) = first_match(&[pattern], std::slice::from_ref(t), sig) {
                    let rhs = m.apply(&rule.rhs);
                    return Some((&rule.label, Term::app(op, vec![rhs, m.image(&ext)])));
                }
            }
        }
        None
    }

    /// All one-step narrowings of `t` at non-variable positions, with every
    /// rule renamed apart. Rules without an extension are also tried on
    /// sub-multisets (size at least 2) of AC layers. Results are normalized and
    /// deduplicated up to renaming.
    pub fn narrow_steps(&self, t: &Term, fresh: &mut FreshCounter) -> Result<Vec<NarrowStep>> {
        self.check_deadline()?;
        let tvars = t.vars();
        fresh.bump_past(&tvars);
        let mut positions = Vec::new();
        collect_positions(t, &mut Vec::new(), &mut positions);
        let mut out: Vec<NarrowStep> = Vec::new();
        let mut seen: BTreeSet<(Term, Subst)> = BTreeSet::new();
        for pos in positions {
            let sub = subterm_at(t, &pos);
            let Some(op) = sub.op() else { continue };
            for rule in self.rules_for(op) {
                if pos.subset.is_some() && !self.incoherent.contains(&rule.label) {
                    continue;
                }
                let (renamed, _) =
                    rename_apart(&[rule.lhs.clone(), rule.rhs.clone()], fresh, FreshKind::Narrow);
                let (lhs, rhs) = (&renamed[0], &renamed[1]);
                for sigma in unify_b_with(&[(sub.clone(), lhs.clone())], &self.th.sig, fresh, &RAW) {
                    let replaced = replace_at(t, &pos, rhs);
                    let term = self.normalize(&sigma.apply(&replaced))?;
                    let subst = self.normalize_subst(&sigma.restrict(&tvars))?;
                    if seen.insert((term.clone(), subst.clone())) {
                        out.push(NarrowStep { term, subst, position: pos.clone(), rule: rule.label.clone() });
                    }
                }
            }
        }
        Ok(dedup_steps(out, &tvars, &self.th.sig))
    }
}

fn dedup_steps(steps: Vec<NarrowStep>, vars: &BTreeSet<Var>, sig: &crate::theory::Signature) -> Vec<NarrowStep> {
    let key = |s: &NarrowStep| {
        let mut v = vec![s.term.clone()];
        v.extend(s.subst.images(vars));
        v
    };
    let mut kept: Vec<(Vec<Term>, NarrowStep)> = Vec::new();
    for s in steps {
        let k = key(&s);
        let dup = kept.iter().any(|(j, _)| {
            first_match(j, &k, sig).is_some() && first_match(&k, j, sig).is_some()
        });
        if !dup {
            kept.push((k, s));
        }
    }
    kept.into_iter().map(|(_, s)| s).collect()
}

fn collect_positions(t: &Term, path: &mut Vec<usize>, out: &mut Vec<Position>) {
    let Term::App(op, args) = t else { return };
    out.push(Position { path: path.clone(), subset: None });
    if op.is_ac() && args.len() > 2 {
        let n = args.len();
        let mut seen: BTreeSet<Vec<&Term>> = BTreeSet::new();
        for mask in 1u64..(1u64 << n) - 1 {
            if mask.count_ones() < 2 {
                continue;
            }
            let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let key: Vec<&Term> = idx.iter().map(|&i| &args[i]).collect();
            if seen.insert(key) {
                out.push(Position { path: path.clone(), subset: Some(idx) });
            }
        }
    }
    for (i, a) in args.iter().enumerate() {
        path.push(i);
        collect_positions(a, path, out);
        path.pop();
    }
}

pub fn subterm_at(t: &Term, pos: &Position) -> Term {
    let mut cur = t;
    for &i in &pos.path {
        cur = &cur.args()[i];
    }
    match (&pos.subset, cur) {
        (Some(idx), Term::App(op, args)) => Term::app(op, idx.iter().map(|&i| args[i].clone()).collect()),
        _ => cur.clone(),
    }
}

pub fn replace_at(t: &Term, pos: &Position, with: &Term) -> Term {
    fn go(t: &Term, path: &[usize], subset: &Option<Vec<usize>>, with: &Term) -> Term {
        match (path.split_first(), t) {
            (None, Term::App(op, args)) if subset.is_some() => {
                let idx = subset.as_ref().unwrap();
                let mut rest: Vec<Term> =
                    args.iter().enumerate().filter(|(i, _)| !idx.contains(i)).map(|(_, a)| a.clone()).collect();
                rest.push(with.clone());
                Term::app(op, rest)
            }
            (None, _) => with.clone(),
            (Some((&i, tail)), Term::App(op, args)) => {
                let mut args = args.clone();
                args[i] = go(&args[i], tail, subset, with);
                Term::app(op, args)
            }
            (Some(_), Term::Var(_)) => unreachable!("positions address applications"),
        }
    }
    go(t, &pos.path, &pos.subset, with)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;

    /// Exclusive-or semantics of a ground term: the set of constants that
    /// occur an odd number of times.
    fn parity(t: &Term) -> BTreeSet<String> {
        fn walk(t: &Term, acc: &mut std::collections::BTreeMap<String, usize>) {
            match t {
                Term::App(op, args) if op.name.as_ref() == "_*_" => args.iter().for_each(|a| walk(a, acc)),
                Term::App(op, _) if op.name.as_ref() == "mt" => {}
                other => *acc.entry(other.to_string()).or_default() += 1,
            }
        }
        let mut acc = Default::default();
        walk(t, &mut acc);
        acc.into_iter().filter(|(_, n)| n % 2 == 1).map(|(k, _)| k).collect()
    }

    #[test]
    fn xor_examples() {
        let th = xor_theory();
        let rw = Rewriter::new(&th);
        assert_eq!(rw.normalize(&parse(&th, "a * a")).unwrap(), parse(&th, "mt"));
        assert_eq!(rw.normalize(&parse(&th, "a * b * a")).unwrap(), parse(&th, "b"));
        assert_eq!(rw.normalize(&parse(&th, "a * b")).unwrap(), parse(&th, "a * b"));
        assert_eq!(rw.normalize(&parse(&th, "X * X")).unwrap(), parse(&th, "mt"));
    }

    #[test]
    fn xor_normal_forms_follow_parity() {
        let th = xor_theory();
        let rw = Rewriter::new(&th);
        let consts = ["a", "b", "c", "mt"];
        // every word of length up to 5 over the constants
        let mut words: Vec<Vec<&str>> = vec![vec![]];
        for _ in 0..5 {
            let mut next = Vec::new();
            for w in &words {
                for c in consts {
                    let mut w = w.clone();
                    w.push(c);
                    next.push(w);
                }
            }
            words.extend(next.clone());
            words.dedup();
            if words.len() > 2000 {
                break;
            }
        }
        for w in words.iter().filter(|w| !w.is_empty()) {
            let t = parse(&th, &w.join(" * "));
            let n = rw.normalize(&t).unwrap();
            let want = parity(&t);
            let expect = if want.is_empty() {
                parse(&th, "mt")
            } else {
                parse(&th, &want.iter().cloned().collect::<Vec<_>>().join(" * "))
            };
            assert_eq!(n, expect, "{t}");
        }
    }

    #[test]
    fn normalize_is_idempotent() {
        let th = xor_theory();
        let rw = Rewriter::new(&th);
        for s in ["f1(a * a) * b * f1(mt)", "X * Y * X * mt", "f2(X * X, a * mt)"] {
            let n = rw.normalize(&parse(&th, s)).unwrap();
            assert_eq!(rw.normalize(&n).unwrap(), n);
        }
    }

    #[test]
    fn step_bound_reports_rule() {
        let src = "fmod LOOP is sort S . ops a b : -> S . eq [ab] : a = b [variant] . eq [ba] : b = a [variant] . endfm";
        let th = crate::parse::parse_theory(src).unwrap();
        let mut rw = Rewriter::new(&th);
        rw.max_steps = 50;
        match rw.normalize(&parse_in(&th, "a")) {
            Err(Error::NonTermination { rule, .. }) => assert!(rule == "ab" || rule == "ba"),
            other => panic!("{other:?}"),
        }
    }

    fn parse_in(th: &Theory, s: &str) -> Term {
        crate::parse::TermContext::new(th).parse(s).unwrap()
    }

    #[test]
    fn narrowing_xy() {
        let th = xor_theory();
        let rw = Rewriter::new(&th);
        let t = parse(&th, "X * Y");
        let mut fresh = FreshCounter::new();
        let steps = rw.narrow_steps(&t, &mut fresh).unwrap();
        assert!(!steps.is_empty());
        let mt = parse(&th, "mt");
        let collapse = steps.iter().find(|s| s.term == mt && s.rule == "idem").expect("X * Y ~> mt");
        let x = var(&th, "X");
        let y = var(&th, "Y");
        assert_eq!(collapse.subst.image(&x), collapse.subst.image(&y));
        for s in &steps {
            // one rewrite from the instance reaches the same normal form
            assert_eq!(rw.normalize(&s.subst.apply(&t)).unwrap(), s.term);
        }
    }

    #[test]
    fn narrowing_ground_irreducible_is_empty() {
        let th = xor_theory();
        let rw = Rewriter::new(&th);
        let mut fresh = FreshCounter::new();
        assert!(rw.narrow_steps(&parse(&th, "a"), &mut fresh).unwrap().is_empty());
        assert!(rw.narrow_steps(&parse(&th, "a * b"), &mut fresh).unwrap().is_empty());
    }

    #[test]
    fn narrowing_xx_reaches_mt() {
        let th = xor_theory();
        let rw = Rewriter::new(&th);
        let mut fresh = FreshCounter::new();
        let steps = rw.narrow_steps(&parse(&th, "X * X"), &mut fresh).unwrap();
        assert!(steps.iter().any(|s| s.term == parse(&th, "mt") && s.rule == "idem"));
    }

    #[test]
    fn ac_subset_positions() {
        let th = xor_theory();
        let t = parse(&th, "a * b * X");
        let mut ps = Vec::new();
        collect_positions(&t, &mut Vec::new(), &mut ps);
        // root, three pairs
        assert_eq!(ps.len(), 1 + 3 + 2);
        let pos = ps.iter().find(|p| p.subset.as_ref().is_some_and(|s| s.len() == 2)).unwrap();
        let replaced = replace_at(&t, pos, &parse(&th, "mt"));
        assert_eq!(replaced.args().len(), 2);
    }
}

#[cfg(test)]
mod group_tests {
    use super::*;
    use crate::testutil::*;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    #[derive(Clone, Debug)]
    enum G {
        Atom(&'static str),
        Zero,
        Neg(Box<G>),
        Sum(Box<G>, Box<G>),
    }

    fn show(g: &G) -> String {
        match g {
            G::Atom(a) => a.to_string(),
            G::Zero => "0".into(),
            G::Neg(x) => format!("- ({})", show(x)),
            G::Sum(x, y) => format!("({}) + ({})", show(x), show(y)),
        }
    }

    fn eval(g: &G, acc: &mut BTreeMap<&'static str, i64>, sign: i64) {
        match g {
            G::Atom(a) => *acc.entry(a).or_default() += sign,
            G::Zero => {}
            G::Neg(x) => eval(x, acc, -sign),
            G::Sum(x, y) => {
                eval(x, acc, sign);
                eval(y, acc, sign);
            }
        }
    }

    /// The expected normal form: positive atoms, plus one negated sum of
    /// the atoms with negative weight.
    fn canonical(acc: &BTreeMap<&'static str, i64>) -> String {
        let rep = |sel: &dyn Fn(i64) -> usize| -> Vec<&str> {
            acc.iter().flat_map(|(a, &n)| std::iter::repeat(*a).take(sel(n))).collect()
        };
        let pos = rep(&|n| n.max(0) as usize);
        let neg = rep(&|n| (-n).max(0) as usize);
        let mut parts: Vec<String> = pos.iter().map(|s| s.to_string()).collect();
        if !neg.is_empty() {
            parts.push(format!("- ({})", neg.join(" + ")));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    fn arb_group() -> impl Strategy<Value = G> {
        let leaf = prop_oneof![
            Just(G::Atom("a")),
            Just(G::Atom("b")),
            Just(G::Atom("c")),
            Just(G::Zero),
        ];
        leaf.prop_recursive(5, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|x| G::Neg(Box::new(x))),
                (inner.clone(), inner).prop_map(|(x, y)| G::Sum(Box::new(x), Box::new(y))),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn ground_group_terms_normalize_canonically(g in arb_group()) {
            let th = ag_theory();
            let rw = Rewriter::new(&th);
            let mut acc = BTreeMap::new();
            eval(&g, &mut acc, 1);
            let got = rw.normalize(&parse(&th, &show(&g))).unwrap();
            let want = parse(&th, &canonical(&acc));
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn group_examples() {
        let th = ag_theory();
        let rw = Rewriter::new(&th);
        for (s, want) in [
            ("a + - a", "0"),
            ("- - a + 0", "a"),
            ("- (a + b) + b", "- a"),
            ("- a + - b + c", "c + - (a + b)"),
            ("- (- a + b)", "a + - b"),
        ] {
            assert_eq!(rw.normalize(&parse(&th, s)).unwrap(), parse(&th, want), "{s}");
        }
    }
}
