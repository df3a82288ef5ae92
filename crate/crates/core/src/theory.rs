//! Signatures and decompositions: structural axioms on operators plus
//! oriented variant equations.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::sort::{Sort, SortGraph};
use crate::term::{Axioms, Op, OpRef, Term, Var};

#[derive(Clone, Debug, PartialEq)]
pub struct Signature {
    pub sorts: SortGraph,
    ops: BTreeMap<(String, usize), Vec<OpRef>>,
}

impl Signature {
    pub fn new(sorts: SortGraph) -> Self {
        Signature { sorts, ops: BTreeMap::new() }
    }

    pub fn add_op(&mut self, op: OpRef) -> Result<()> {
        for s in op.args.iter().chain(std::iter::once(&op.result)) {
            if !self.sorts.contains(s) {
                return Err(Error::Sort(format!("operator `{}` uses unknown sort `{s}`", op.name)));
            }
        }
        match op.axioms {
            Axioms::Free => {}
            Axioms::Comm => {
                if op.arity() != 2 || op.args[0] != op.args[1] {
                    return Err(Error::Theory(format!(
                        "comm operator `{}` needs two arguments of equal sort",
                        op.name
                    )));
                }
            }
            Axioms::AssocComm => {
                if op.arity() != 2
                    || op.args[0] != op.args[1]
                    || !self.sorts.same_component(&op.args[0], &op.result)
                {
                    return Err(Error::Theory(format!(
                        "assoc operator `{}` needs arity 2 with argument and result sorts in one component",
                        op.name
                    )));
                }
            }
        }
        let slot = self.ops.entry((op.name.to_string(), op.arity())).or_default();
        if slot.iter().any(|o| {
            o.args.iter().zip(&op.args).all(|(a, b)| self.sorts.same_component(a, b))
        }) {
            return Err(Error::Theory(format!("operator `{}` declared twice", op.name)));
        }
        slot.push(op);
        Ok(())
    }

    pub fn ops(&self) -> impl Iterator<Item = &OpRef> {
        self.ops.values().flatten()
    }

    pub fn ops_named(&self, name: &str, arity: usize) -> &[OpRef] {
        self.ops.get(&(name.to_string(), arity)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn has_op_name(&self, name: &str) -> bool {
        self.ops.keys().any(|(n, _)| n == name)
    }

    /// The unique operator with this name and arity whose argument
    /// components accept `arg_sorts`.
    pub fn resolve_op(&self, name: &str, arg_sorts: &[Sort]) -> Option<&OpRef> {
        self.ops_named(name, arg_sorts.len()).iter().find(|op| {
            op.args.iter().zip(arg_sorts).all(|(d, a)| self.sorts.same_component(d, a))
        })
    }

    pub fn least_sort(&self, t: &Term) -> Sort {
        match t {
            Term::Var(v) => v.sort.clone(),
            Term::App(op, args) => {
                let declared = |i: usize| &op.args[if op.is_ac() { 0 } else { i }];
                let fits = if op.is_ac() {
                    args.iter().all(|a| self.sorts.leq(&self.least_sort(a), declared(0)))
                } else {
                    args.iter().enumerate().all(|(i, a)| self.sorts.leq(&self.least_sort(a), declared(i)))
                };
                if fits {
                    op.result.clone()
                } else {
                    self.sorts.kind_or_self(&op.result)
                }
            }
        }
    }

    /// Every argument must lie in the component of the declared argument sort.
    pub fn check_sorted(&self, t: &Term) -> Result<()> {
        if let Term::App(op, args) = t {
            for (i, a) in args.iter().enumerate() {
                self.check_sorted(a)?;
                let want = &op.args[if op.is_ac() { 0 } else { i }];
                let got = self.least_sort(a);
                if !self.sorts.same_component(&got, want) {
                    return Err(Error::Sort(format!(
                        "argument `{a}` of sort `{got}` does not fit `{want}` in `{}`",
                        op.name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn kind_of_term(&self, t: &Term) -> Sort {
        self.sorts.kind_or_self(&self.least_sort(t))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub label: String,
    pub lhs: Term,
    pub rhs: Term,
}

/// A decomposition: signature with per-operator axioms and oriented rules.
///
/// Convergence modulo the axioms is a precondition supplied by the author
/// of the theory; it is not checked.
#[derive(Clone, Debug, PartialEq)]
pub struct Theory {
    pub name: String,
    pub sig: Signature,
    pub rules: Vec<Rule>,
    /// Variables declared with `vars`, kept for printing.
    pub vars: Vec<Var>,
    pub warnings: Vec<String>,
}

impl Theory {
    pub fn new(name: &str, sig: Signature, vars: Vec<Var>, rules: Vec<Rule>) -> Result<Theory> {
        let mut th = Theory { name: name.to_string(), sig, rules: Vec::new(), vars, warnings: Vec::new() };
        for r in rules {
            th.add_rule(r)?;
        }
        Ok(th)
    }

    pub fn add_rule(&mut self, rule: Rule) -> Result<()> {
        if rule.lhs.is_var() {
            return Err(Error::Theory(format!(
                "equation [{}] has a variable left-hand side",
                rule.label
            )));
        }
        self.sig.check_sorted(&rule.lhs)?;
        self.sig.check_sorted(&rule.rhs)?;
        if !rule.rhs.vars().is_subset(&rule.lhs.vars()) {
            return Err(Error::Theory(format!(
                "equation [{}] has right-hand side variables not in its left-hand side",
                rule.label
            )));
        }
        let (ls, rs) = (self.sig.least_sort(&rule.lhs), self.sig.least_sort(&rule.rhs));
        if !self.sig.sorts.leq(&rs, &ls) {
            return Err(Error::Theory(format!(
                "equation [{}] is not sort-decreasing: `{rs}` is not below `{ls}`",
                rule.label
            )));
        }
        let rule = Rule { label: rule.label, lhs: rule.lhs.canonicalize(), rhs: rule.rhs.canonicalize() };
        self.rules.push(rule);
        self.refresh_warnings();
        Ok(())
    }

    fn refresh_warnings(&mut self) {
        self.warnings = self
            .rules
            .iter()
            .filter(|r| !self.is_coherent(r))
            .map(|r| {
                format!(
                    "equation [{}] has an AC-rooted left-hand side without an extension equation; the theory may not be coherent",
                    r.label
                )
            })
            .collect();
    }

    /// Whether rewriting with `r` at a position is enough modulo AC: the
    /// left-hand side is not AC-rooted, already carries a linear variable
    /// argument, or has an extension sibling with one more variable argument.
    pub fn is_coherent(&self, r: &Rule) -> bool {
        let Term::App(op, args) = &r.lhs else { return true };
        if !op.is_ac() {
            return true;
        }
        let mut counts: BTreeMap<&Var, usize> = BTreeMap::new();
        for v in args.iter().filter_map(Term::as_var) {
            *counts.entry(v).or_default() += 1;
        }
        let linear_var_arg = args.iter().filter_map(Term::as_var).any(|v| {
            counts[v] == 1 && args.iter().filter(|a| !a.is_var()).all(|a| !a.occurs(v))
        });
        linear_var_arg
            || self.rules.iter().any(|s| match &s.lhs {
                Term::App(g, sargs) => g == op && sargs.len() == args.len() + 1 && sargs.iter().any(Term::is_var),
                _ => false,
            })
    }

    pub fn rules_for(&self, op: &OpRef) -> impl Iterator<Item = &Rule> {
        let op = op.clone();
        self.rules.iter().filter(move |r| r.lhs.op() == Some(&op))
    }
}

/// Names chosen by [`eq_extend`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqNames {
    pub truth: Sort,
    pub tt: String,
    pub eq: String,
}

fn existing_eq_extension(th: &Theory) -> Option<EqNames> {
    let truth = Sort::new("Truth");
    if !th.sig.sorts.contains(&truth) {
        return None;
    }
    let tt = th.sig.ops_named("tt", 0);
    if tt.len() != 1 || tt[0].result != truth {
        return None;
    }
    let kinds: Vec<Sort> = th
        .sig
        .sorts
        .kinds()
        .iter()
        .filter(|k| !th.sig.sorts.same_component(k, &truth))
        .cloned()
        .collect();
    let eqs = th.sig.ops_named("eq", 2);
    let complete = kinds.iter().all(|k| {
        eqs.iter().any(|op| &op.args[0] == k && &op.args[1] == k && op.result == truth)
    }) && eqs.len() == kinds.len();
    complete.then(|| EqNames { truth, tt: "tt".into(), eq: "eq".into() })
}

fn fresh_name(mut taken: impl FnMut(&str) -> bool, base: &str) -> String {
    if !taken(base) {
        return base.to_string();
    }
    (1..).map(|i| format!("{base}{i}")).find(|n| !taken(n)).unwrap()
}

/// Adds sort `Truth`, constant `tt`, and for each kind `[s]` an operator
/// `eq : [s] [s] -> Truth` with the rule `eq(X, X) -> tt`. Clashing names
/// get a numeric suffix; an already extended theory is returned unchanged.
pub fn eq_extend(th: &Theory) -> Result<(Theory, EqNames)> {
    if let Some(names) = existing_eq_extension(th) {
        return Ok((th.clone(), names));
    }
    let sorts = &th.sig.sorts;
    let truth = Sort::new(&fresh_name(|n| sorts.contains(&Sort::new(n)), "Truth"));
    let tt = fresh_name(|n| th.sig.has_op_name(n), "tt");
    let eq = fresh_name(|n| th.sig.has_op_name(n), "eq");

    let graph = SortGraph::build(
        sorts.declared().cloned().chain(std::iter::once(truth.clone())),
        sorts.subsort_edges().cloned(),
    )?;
    let mut sig = Signature::new(graph);
    for op in th.sig.ops() {
        sig.add_op(op.clone())?;
    }
    sig.add_op(Op::new(&tt, vec![], truth.clone(), Axioms::Free))?;
    let tt_op = sig.ops_named(&tt, 0)[0].clone();
    let mut rules = th.rules.clone();
    let kinds: Vec<Sort> = th.sig.sorts.kinds().to_vec();
    for kind in &kinds {
        let op = Op::new(&eq, vec![kind.clone(), kind.clone()], truth.clone(), Axioms::Free);
        sig.add_op(op.clone())?;
        let x = Term::Var(Var::new("X", kind.clone()));
        rules.push(Rule {
            label: format!("{eq}-{}", kind.name().trim_matches(|c| c == '[' || c == ']')),
            lhs: Term::app(&op, vec![x.clone(), x]),
            rhs: Term::constant(&tt_op),
        });
    }
    let mut vars = th.vars.clone();
    for kind in &kinds {
        let v = Var::new("X", kind.clone());
        if !vars.contains(&v) && !vars.iter().any(|w| w.name == v.name) {
            vars.push(v);
        }
    }
    let ext = Theory::new(&th.name, sig, vars, rules)?;
    Ok((ext, EqNames { truth, tt, eq }))
}

/// All variables of a list of terms, in order of first occurrence.
pub fn vars_in_order<'a>(terms: impl IntoIterator<Item = &'a Term>) -> Vec<Var> {
    let mut out = Vec::new();
    for t in terms {
        t.vars_in_order(&mut out);
    }
    out
}

pub fn var_set<'a>(terms: impl IntoIterator<Item = &'a Term>) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    for t in terms {
        t.collect_vars(&mut out);
    }
    out
}
