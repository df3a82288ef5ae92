//! Order-sorted terms kept in canonical form modulo the structural axioms.
//!
//! Arguments of an associative-commutative operator are flattened into a
//! single layer and sorted under the total term order; arguments of a
//! commutative operator are sorted. Two terms are equal modulo the axioms
//! iff their canonical forms are identical.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::sort::Sort;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axioms {
    Free,
    Comm,
    AssocComm,
}

impl Axioms {
    pub fn is_comm(self) -> bool {
        !matches!(self, Axioms::Free)
    }
}

/// An operator declaration. Identity is its name and arity.
#[derive(Clone, Debug)]
pub struct Op {
    pub name: Arc<str>,
    pub args: Vec<Sort>,
    pub result: Sort,
    pub axioms: Axioms,
}

pub type OpRef = Arc<Op>;

impl Op {
    pub fn new(name: &str, args: Vec<Sort>, result: Sort, axioms: Axioms) -> OpRef {
        Arc::new(Op { name: Arc::from(name), args, result, axioms })
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ac(&self) -> bool {
        self.axioms == Axioms::AssocComm
    }

    fn mixfix_parts(&self) -> Option<Vec<&str>> {
        if !self.name.contains('_') {
            return None;
        }
        let parts: Vec<&str> = self.name.split('_').collect();
        (parts.len() == self.arity() + 1).then_some(parts)
    }

    fn is_infix(&self) -> bool {
        self.arity() == 2
            && self.name.starts_with('_')
            && self.name.ends_with('_')
            && self.name.len() > 2
            && self.name[1..self.name.len() - 1].chars().all(|c| c != '_')
    }
}

impl PartialEq for Op {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.arity() == other.arity()
    }
}

impl Eq for Op {}

impl Hash for Op {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.name.hash(state);
        self.arity().hash(state);
    }
}

impl PartialOrd for Op {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Op {
    fn cmp(&self, other: &Self) -> Ordering {
        self.name.cmp(&other.name).then(self.arity().cmp(&other.arity()))
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: Arc<str>,
    pub sort: Sort,
}

impl Var {
    pub fn new(name: &str, sort: Sort) -> Self {
        Var { name: Arc::from(name), sort }
    }

    /// Generated by unification (`#n`) or narrowing (`%n`).
    pub fn is_fresh(&self) -> bool {
        self.name.starts_with('#') || self.name.starts_with('%')
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_fresh() {
            write!(f, "{}:{}", self.name, self.sort)
        } else {
            f.write_str(&self.name)
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.sort)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    App(OpRef, Vec<Term>),
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Term::Var(a), Term::Var(b)) => a.cmp(b),
            (Term::Var(_), Term::App(..)) => Ordering::Less,
            (Term::App(..), Term::Var(_)) => Ordering::Greater,
            (Term::App(f, xs), Term::App(g, ys)) => f.cmp(g).then_with(|| xs.cmp(ys)),
        }
    }
}

impl From<Var> for Term {
    fn from(v: Var) -> Self {
        Term::Var(v)
    }
}

impl Term {
    pub fn var(v: &Var) -> Term {
        Term::Var(v.clone())
    }

    pub fn constant(op: &OpRef) -> Term {
        Term::App(op.clone(), Vec::new())
    }

    /// Builds `op(args)` in canonical form, assuming `args` are canonical.
    pub fn app(op: &OpRef, args: Vec<Term>) -> Term {
        match op.axioms {
            Axioms::Free => Term::App(op.clone(), args),
            Axioms::Comm => {
                let mut args = args;
                args.sort();
                Term::App(op.clone(), args)
            }
            Axioms::AssocComm => {
                let mut flat = Vec::with_capacity(args.len());
                for a in args {
                    match a {
                        Term::App(g, inner) if g.as_ref() == op.as_ref() => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                flat.sort();
                if flat.len() == 1 {
                    return flat.pop().unwrap();
                }
                Term::App(op.clone(), flat)
            }
        }
    }

    /// Canonical form of a term whose AC layers may be nested or unsorted.
    pub fn canonicalize(&self) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::App(op, args) => Term::app(op, args.iter().map(Term::canonicalize).collect()),
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn op(&self) -> Option<&OpRef> {
        match self {
            Term::App(op, _) => Some(op),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::App(_, a) => a,
            Term::Var(_) => &[],
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// Variables in order of first occurrence (left to right, depth first).
    pub fn vars_in_order(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.vars_in_order(out)),
        }
    }

    pub fn occurs(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::App(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Replaces every subterm for which `f` returns `Some`, then
    /// re-canonicalizes the enclosing layers.
    pub fn map_bottom_up(&self, f: &mut impl FnMut(&Term) -> Option<Term>) -> Term {
        if let Some(t) = f(self) {
            return t;
        }
        match self {
            Term::Var(_) => self.clone(),
            Term::App(op, args) => {
                Term::app(op, args.iter().map(|a| a.map_bottom_up(f)).collect())
            }
        }
    }
}

fn is_infix_app(t: &Term) -> bool {
    matches!(t, Term::App(op, args) if op.is_infix() && !args.is_empty())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(op, args) if args.is_empty() => f.write_str(&op.name),
            Term::App(op, args) => {
                if op.is_infix() {
                    let sym = &op.name[1..op.name.len() - 1];
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, " {sym} ")?;
                        }
                        if is_infix_app(a) {
                            write!(f, "({a})")?;
                        } else {
                            write!(f, "{a}")?;
                        }
                    }
                    Ok(())
                } else if let Some(parts) = op.mixfix_parts() {
                    for (i, part) in parts.iter().enumerate() {
                        f.write_str(part)?;
                        if let Some(a) = args.get(i) {
                            if !part.is_empty() && !part.ends_with('(') {
                                f.write_str(" ")?;
                            }
                            if is_infix_app(a) {
                                write!(f, "({a})")?;
                            } else {
                                write!(f, "{a}")?;
                            }
                        }
                    }
                    Ok(())
                } else {
                    write!(f, "{}(", op.name)?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")
                }
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ops() -> (OpRef, OpRef, OpRef, OpRef, OpRef) {
        let e = Sort::new("ElemXor");
        let el = Sort::new("Elem");
        let star = Op::new("_*_", vec![e.clone(), e.clone()], e.clone(), Axioms::AssocComm);
        let a = Op::new("a", vec![], el.clone(), Axioms::Free);
        let b = Op::new("b", vec![], el.clone(), Axioms::Free);
        let c = Op::new("c", vec![], el.clone(), Axioms::Free);
        let f1 = Op::new("f1", vec![e.clone()], el, Axioms::Free);
        (star, a, b, c, f1)
    }

    #[test]
    fn ac_layers_flatten_and_sort() {
        let (star, a, b, c, _) = ops();
        let ab = Term::App(star.clone(), vec![Term::constant(&a), Term::constant(&b)]);
        let nested = Term::App(star.clone(), vec![ab, Term::constant(&c)]);
        let canon = nested.canonicalize();
        assert_eq!(canon.args().len(), 3);
        assert_eq!(canon.to_string(), "a * b * c");
        let ba = Term::App(star.clone(), vec![Term::constant(&b), Term::constant(&a)]);
        assert_eq!(ba.canonicalize().to_string(), "a * b");
    }

    #[test]
    fn free_terms_are_unchanged() {
        let (_, a, _, _, f1) = ops();
        let t = Term::App(f1, vec![Term::constant(&a)]);
        assert_eq!(t.canonicalize(), t);
        assert_eq!(t.to_string(), "f1(a)");
    }

    #[test]
    fn variables_precede_applications() {
        let (_, a, _, _, _) = ops();
        let x = Term::Var(Var::new("X", Sort::new("[ElemXor]")));
        assert!(x < Term::constant(&a));
    }
}
