use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::sort::Sort;
use crate::term::{Term, Var};

/// An idempotent substitution. Identity bindings are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subst {
    map: BTreeMap<Var, Term>,
}

impl Subst {
    pub fn id() -> Self {
        Subst::default()
    }

    pub fn single(v: Var, t: Term) -> Self {
        let mut s = Subst::id();
        s.insert(v, t);
        s
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Term)>) -> Self {
        let mut s = Subst::id();
        for (v, t) in pairs {
            s.insert(v, t);
        }
        s
    }

    /// Raw insertion; the caller keeps the substitution idempotent.
    pub fn insert(&mut self, v: Var, t: Term) {
        if t.as_var() == Some(&v) {
            self.map.remove(&v);
        } else {
            self.map.insert(v, t);
        }
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.map.get(v)
    }

    /// The image of `v`, which is `v` itself outside the domain.
    pub fn image(&self, v: &Var) -> Term {
        self.map.get(v).cloned().unwrap_or_else(|| Term::Var(v.clone()))
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.map.iter()
    }

    pub fn domain(&self) -> BTreeSet<Var> {
        self.map.keys().cloned().collect()
    }

    pub fn range_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for t in self.map.values() {
            t.collect_vars(&mut out);
        }
        out
    }

    pub fn is_idempotent(&self) -> bool {
        let range = self.range_vars();
        self.map.keys().all(|v| !range.contains(v))
    }

    /// Homomorphic application followed by canonicalization.
    pub fn apply(&self, t: &Term) -> Term {
        if self.map.is_empty() {
            return t.clone();
        }
        match t {
            Term::Var(v) => self.image(v),
            Term::App(op, args) => Term::app(op, args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    /// `compose(s1, s2)(x) = s2(s1(x))`.
    pub fn compose(&self, other: &Subst) -> Subst {
        let mut out = Subst::id();
        for (v, t) in &self.map {
            out.insert(v.clone(), other.apply(t));
        }
        for (v, t) in &other.map {
            if !self.map.contains_key(v) {
                out.insert(v.clone(), t.clone());
            }
        }
        out.idempotize();
        out
    }

    /// Applies the substitution to its own range until no domain variable
    /// is left there (bounded by the domain size; cyclic inputs stop early).
    pub fn idempotize(&mut self) {
        for _ in 0..=self.map.len() {
            if self.is_idempotent() {
                return;
            }
            let snapshot = self.clone();
            let keys: Vec<Var> = self.map.keys().cloned().collect();
            for v in keys {
                let t = snapshot.apply(&self.map[&v]);
                self.insert(v, t);
            }
        }
    }

    pub fn restrict<'a>(&self, vars: impl IntoIterator<Item = &'a Var>) -> Subst {
        let mut out = Subst::id();
        for v in vars {
            if let Some(t) = self.map.get(v) {
                out.insert(v.clone(), t.clone());
            }
        }
        out
    }

    /// Union of substitutions with disjoint domains; on overlap `self` wins.
    pub fn union(&self, other: &Subst) -> Subst {
        let mut out = other.clone();
        for (v, t) in &self.map {
            out.insert(v.clone(), t.clone());
        }
        out
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Subst {
        let mut out = Subst::id();
        for (v, t) in &self.map {
            out.insert(v.clone(), f(t));
        }
        out
    }

    /// Images of `vars` in order, as terms.
    pub fn images<'a>(&self, vars: impl IntoIterator<Item = &'a Var>) -> Vec<Term> {
        vars.into_iter().map(|v| self.image(v)).collect()
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{} |-> {t}", v.name)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreshKind {
    /// `#n` variables from unification modulo axioms.
    Unify,
    /// `%n` variables from narrowing with the equations.
    Narrow,
}

/// Source of fresh variable names; the two forms have separate counters.
#[derive(Clone, Debug, Default)]
pub struct FreshCounter {
    unify: u64,
    narrow: u64,
}

impl FreshCounter {
    pub fn new() -> Self {
        FreshCounter::default()
    }

    pub fn next(&mut self, kind: FreshKind, sort: Sort) -> Var {
        match kind {
            FreshKind::Unify => {
                self.unify += 1;
                Var::new(&format!("#{}", self.unify), sort)
            }
            FreshKind::Narrow => {
                self.narrow += 1;
                Var::new(&format!("%{}", self.narrow), sort)
            }
        }
    }

    /// Moves both counters past any generated-looking name in `vars`.
    pub fn bump_past<'a>(&mut self, vars: impl IntoIterator<Item = &'a Var>) {
        for v in vars {
            let (counter, rest) = match v.name.chars().next() {
                Some('#') => (&mut self.unify, &v.name[1..]),
                Some('%') => (&mut self.narrow, &v.name[1..]),
                _ => continue,
            };
            if let Ok(n) = rest.parse::<u64>() {
                *counter = (*counter).max(n);
            }
        }
    }

    pub fn counts(&self) -> (u64, u64) {
        (self.unify, self.narrow)
    }
}

/// Renames every variable of `terms` to a fresh one of the same sort,
/// in order of first occurrence. Returns the renamed terms and the renaming.
pub fn rename_apart(terms: &[Term], fresh: &mut FreshCounter, kind: FreshKind) -> (Vec<Term>, Subst) {
    let mut order = Vec::new();
    for t in terms {
        t.vars_in_order(&mut order);
    }
    let renaming = Subst::from_pairs(
        order.into_iter().map(|v| {
            let w = fresh.next(kind, v.sort.clone());
            (v, Term::Var(w))
        }),
    );
    (terms.iter().map(|t| renaming.apply(t)).collect(), renaming)
}

/// Inverse of a variable renaming.
pub fn invert_renaming(r: &Subst) -> Subst {
    Subst::from_pairs(r.iter().filter_map(|(v, t)| t.as_var().map(|w| (w.clone(), Term::Var(v.clone())))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{Axioms, Op};

    fn kind() -> Sort {
        Sort::new("[ElemXor]")
    }

    fn var(n: &str) -> Term {
        Term::Var(Var::new(n, kind()))
    }

    fn star(a: Term, b: Term) -> Term {
        let op = Op::new("_*_", vec![kind(), kind()], kind(), Axioms::AssocComm);
        Term::app(&op, vec![a, b])
    }

    fn a() -> Term {
        Term::constant(&Op::new("a", vec![], Sort::new("Elem"), Axioms::Free))
    }

    #[test]
    fn apply_flattens() {
        let s = Subst::single(Var::new("X", kind()), star(var("U"), var("V")));
        let t = s.apply(&star(var("X"), var("U")));
        assert_eq!(t.to_string(), "U * U * V");
        assert_eq!(Subst::id().apply(&t), t);
        let s = Subst::single(Var::new("X", kind()), a());
        assert_eq!(s.apply(&star(var("X"), var("Y"))).to_string(), "Y * a");
    }

    #[test]
    fn compose_chains() {
        let x = Var::new("X", kind());
        let y = Var::new("Y", kind());
        let s1 = Subst::single(x.clone(), var("Y"));
        let s2 = Subst::single(y.clone(), a());
        let c = s1.compose(&s2);
        assert_eq!(c.get(&x), Some(&a()));
        assert_eq!(c.get(&y), Some(&a()));
        assert_eq!(Subst::id().compose(&s2), s2);
    }

    #[test]
    fn restrict_cases() {
        let x = Var::new("X", kind());
        let y = Var::new("Y", kind());
        let s = Subst::from_pairs([(x.clone(), a()), (y.clone(), var("Z"))]);
        assert_eq!(s.restrict([&x]), Subst::single(x.clone(), a()));
        assert_eq!(Subst::id().restrict([&x]), Subst::id());
        assert_eq!(s.restrict([]), Subst::id());
    }

    #[test]
    fn rename_apart_is_a_function() {
        let mut fresh = FreshCounter::new();
        let (ts, r) = rename_apart(&[star(var("X"), var("Y"))], &mut fresh, FreshKind::Unify);
        assert_eq!(ts[0].to_string(), "#1:[ElemXor] * #2:[ElemXor]");
        assert_eq!(r.len(), 2);
        let (ts, _) = rename_apart(&[star(var("X"), var("X"))], &mut fresh, FreshKind::Unify);
        assert_eq!(ts[0].vars().len(), 1);
        let (ts, r) = rename_apart(&[a()], &mut fresh, FreshKind::Narrow);
        assert_eq!(ts[0], a());
        assert!(r.is_empty());
    }

    #[test]
    fn bump_past_avoids_collisions() {
        let mut fresh = FreshCounter::new();
        fresh.bump_past([&Var::new("#7", kind()), &Var::new("%3", kind())]);
        assert_eq!(fresh.next(FreshKind::Unify, kind()).name.as_ref(), "#8");
        assert_eq!(fresh.next(FreshKind::Narrow, kind()).name.as_ref(), "%4");
    }
}
