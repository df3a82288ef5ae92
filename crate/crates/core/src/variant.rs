//! Folding variant narrowing.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::rewrite::Rewriter;
use crate::subst::{FreshCounter, FreshKind, Subst};
use crate::term::{Term, Var};
use crate::theory::Signature;
use crate::unify::first_match;

#[derive(Clone, Debug)]
pub struct Variant {
    pub term: Term,
    /// Accumulated substitution on the root variables, in normal form.
    pub subst: Subst,
    pub parent: Option<usize>,
    /// Substitution of the narrowing step from the parent, on the parent's
    /// term variables.
    pub edge: Subst,
    pub rule: Option<String>,
    pub depth: usize,
}

#[derive(Clone, Debug)]
pub struct VariantTree {
    pub root_term: Term,
    pub root_vars: BTreeSet<Var>,
    pub nodes: Vec<Variant>,
    /// Nodes evicted by a later, strictly more general variant.
    pub folded: BTreeSet<usize>,
    /// The frontier was exhausted.
    pub closed: bool,
    /// Candidates dropped on arrival because a kept variant subsumed them.
    pub discarded: usize,
}

impl VariantTree {
    pub fn kept(&self) -> impl Iterator<Item = (usize, &Variant)> {
        self.nodes.iter().enumerate().filter(|(i, _)| !self.folded.contains(i))
    }

    pub fn kept_count(&self) -> usize {
        self.nodes.len() - self.folded.len()
    }

    /// Proper ancestors of node `i`, nearest first.
    pub fn ancestors(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.nodes[i].parent;
        while let Some(p) = cur {
            out.push(p);
            cur = self.nodes[p].parent;
        }
        out
    }

    /// Composition of the edge substitutions on the path from ancestor `anc`
    /// down to node `i`, restricted to the variables of the ancestor's term.
    pub fn path_subst(&self, anc: usize, i: usize) -> Subst {
        let mut edges = Vec::new();
        let mut cur = i;
        while cur != anc {
            edges.push(&self.nodes[cur].edge);
            cur = self.nodes[cur].parent.expect("anc is an ancestor of i");
        }
        let mut acc = Subst::id();
        for e in edges.into_iter().rev() {
            acc = acc.compose(e);
        }
        acc.restrict(&self.nodes[anc].term.vars())
    }

    /// Copy of the tree with the root variables renamed by `root` (a
    /// variable renaming) and every other variable renamed to a fresh one.
    pub fn instantiate(&self, root: &Subst, fresh: &mut FreshCounter) -> VariantTree {
        let mut seen = BTreeSet::new();
        for v in &self.nodes {
            v.term.collect_vars(&mut seen);
            seen.extend(v.subst.range_vars());
            seen.extend(v.edge.domain());
            seen.extend(v.edge.range_vars());
        }
        let mut ren = root.clone();
        for v in seen.into_iter().filter(|v| !self.root_vars.contains(v)) {
            let sort = v.sort.clone();
            ren.insert(v, Term::Var(fresh.next(FreshKind::Narrow, sort)));
        }
        let var = |v: &Var| ren.apply(&Term::Var(v.clone())).as_var().cloned().expect("a renaming");
        let nodes = self
            .nodes
            .iter()
            .map(|n| Variant {
                term: ren.apply(&n.term),
                subst: Subst::from_pairs(n.subst.iter().map(|(k, t)| (var(k), ren.apply(t)))),
                edge: Subst::from_pairs(n.edge.iter().map(|(k, t)| (var(k), ren.apply(t)))),
                ..n.clone()
            })
            .collect();
        VariantTree {
            root_term: ren.apply(&self.root_term),
            root_vars: self.root_vars.iter().map(var).collect(),
            nodes,
            ..self.clone()
        }
    }
}

/// Renames the variables of `t` to `?1`, `?2`, ... in order of first
/// occurrence, so that many renamings of one term share a cache key.
/// Returns the renamed term and the inverse renaming.
pub fn canonical_renaming(t: &Term) -> (Term, Subst) {
    let mut order = Vec::new();
    t.vars_in_order(&mut order);
    let mut there = Subst::id();
    let mut back = Subst::id();
    for v in order {
        if there.get(&v).is_none() {
            let c = Var::new(&format!("?{}", there.len() + 1), v.sort.clone());
            there.insert(v.clone(), Term::Var(c.clone()));
            back.insert(c, Term::Var(v));
        }
    }
    (there.apply(t), back)
}

fn tuple(v: &Variant, root_vars: &BTreeSet<Var>) -> Vec<Term> {
    let mut out = Vec::with_capacity(root_vars.len() + 1);
    out.push(v.term.clone());
    out.extend(v.subst.images(root_vars));
    out
}

/// `general ⊒ specific`: some ρ matches the general term onto the specific
/// one and agrees with the specific substitution on the root variables.
pub fn variant_subsumes(general: &Variant, specific: &Variant, root_vars: &BTreeSet<Var>, sig: &Signature) -> bool {
    first_match(&tuple(general, root_vars), &tuple(specific, root_vars), sig).is_some()
}

/// Breadth-first folding variant narrowing from `t`. Stops when the
/// frontier is empty, when `bound` variants are kept, or after `depth_cap`
/// levels.
pub fn generate_variants(
    t: &Term,
    rw: &Rewriter,
    fresh: &mut FreshCounter,
    bound: Option<usize>,
    depth_cap: Option<usize>,
) -> Result<VariantTree> {
    let sig = &rw.theory().sig;
    let root_vars = t.vars();
    fresh.bump_past(&root_vars);
    let root = Variant {
        term: rw.normalize(t)?,
        subst: Subst::id(),
        parent: None,
        edge: Subst::id(),
        rule: None,
        depth: 0,
    };
    let mut tree = VariantTree {
        root_term: t.clone(),
        root_vars,
        nodes: vec![root],
        folded: BTreeSet::new(),
        closed: false,
        discarded: 0,
    };
    if bound.is_some_and(|b| b <= 1) {
        return Ok(tree);
    }
    let mut frontier = vec![0usize];
    let mut depth = 0;
    while !frontier.is_empty() {
        if depth_cap.is_some_and(|cap| depth >= cap) {
            return Ok(tree);
        }
        depth += 1;
        let mut next = Vec::new();
        for &n in &frontier {
            if tree.folded.contains(&n) {
                continue;
            }
            let parent = tree.nodes[n].clone();
            for step in rw.narrow_steps(&parent.term, fresh)? {
                let subst = rw.normalize_subst(&parent.subst.compose(&step.subst).restrict(&tree.root_vars))?;
                let cand = Variant {
                    term: step.term,
                    subst,
                    parent: Some(n),
                    edge: step.subst,
                    rule: Some(step.rule),
                    depth,
                };
                if tree.kept().any(|(_, k)| variant_subsumes(k, &cand, &tree.root_vars, sig)) {
                    tree.discarded += 1;
                    continue;
                }
                let evicted: Vec<usize> = tree
                    .kept()
                    .filter(|(_, k)| variant_subsumes(&cand, k, &tree.root_vars, sig))
                    .map(|(i, _)| i)
                    .collect();
                tree.folded.extend(evicted);
                next.push(tree.nodes.len());
                tree.nodes.push(cand);
                if bound.is_some_and(|b| tree.kept_count() >= b) {
                    return Ok(tree);
                }
            }
        }
        frontier = next;
    }
    tree.closed = true;
    Ok(tree)
}
