//! Sort posets with connected components and synthesized kinds.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A sort name. Kinds are written `[Top]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sort(Arc<str>);

impl Sort {
    pub fn new(name: &str) -> Self {
        Sort(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_kind(&self) -> bool {
        self.0.starts_with('[')
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The subsort relation, closed reflexively and transitively.
///
/// Every connected component gets a kind `[T]` placed above all of its
/// sorts, where `T` is the least (by name) maximal declared sort of the
/// component. Sorts that are not registered are treated as isolated.
#[derive(Clone, Debug, Default)]
pub struct SortGraph {
    declared: BTreeSet<Sort>,
    edges: BTreeSet<(Sort, Sort)>,
    index: BTreeMap<Sort, usize>,
    sorts: Vec<Sort>,
    leq: Vec<Vec<bool>>,
    component: Vec<usize>,
    kinds: Vec<Sort>,
}

impl PartialEq for SortGraph {
    fn eq(&self, other: &Self) -> bool {
        self.declared == other.declared && self.edges == other.edges
    }
}

impl SortGraph {
    pub fn build(
        declared: impl IntoIterator<Item = Sort>,
        subsorts: impl IntoIterator<Item = (Sort, Sort)>,
    ) -> Result<Self> {
        let declared: BTreeSet<Sort> = declared.into_iter().filter(|s| !s.is_kind()).collect();
        let edges: BTreeSet<(Sort, Sort)> = subsorts.into_iter().collect();
        for (lo, hi) in &edges {
            for s in [lo, hi] {
                if !declared.contains(s) {
                    return Err(Error::Sort(format!("undeclared sort `{s}` in subsort declaration")));
                }
            }
        }
        let base: Vec<Sort> = declared.iter().cloned().collect();
        let n = base.len();
        let idx: BTreeMap<&Sort, usize> = base.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (lo, hi) in &edges {
            leq[idx[lo]][idx[hi]] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Sort(format!(
                        "cyclic subsort relation between `{}` and `{}`",
                        base[i], base[j]
                    )));
                }
            }
        }

        // components by union-find over the undirected relation
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for i in 0..n {
            for j in 0..n {
                if leq[i][j] {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut comp_of_root: BTreeMap<usize, usize> = BTreeMap::new();
        let mut component = vec![0; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            let next = comp_of_root.len();
            component[i] = *comp_of_root.entry(r).or_insert(next);
        }
        let ncomp = comp_of_root.len();
        let mut kinds = Vec::with_capacity(ncomp);
        for c in 0..ncomp {
            let top = (0..n)
                .filter(|&i| component[i] == c)
                .find(|&i| (0..n).all(|j| component[j] != c || !leq[i][j] || i == j))
                .expect("nonempty component has a maximal sort");
            kinds.push(Sort::new(&format!("[{}]", base[top])));
        }

        let mut sorts = base.clone();
        sorts.extend(kinds.iter().cloned());
        let total = sorts.len();
        let mut full = vec![vec![false; total]; total];
        let mut full_comp = component.clone();
        for i in 0..n {
            for j in 0..n {
                full[i][j] = leq[i][j];
            }
            full[i][n + component[i]] = true;
        }
        for c in 0..ncomp {
            full[n + c][n + c] = true;
            full_comp.push(c);
        }
        let index = sorts.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(SortGraph { declared, edges, index, sorts, leq: full, component: full_comp, kinds })
    }

    pub fn declared(&self) -> impl Iterator<Item = &Sort> {
        self.declared.iter()
    }

    pub fn subsort_edges(&self) -> impl Iterator<Item = &(Sort, Sort)> {
        self.edges.iter()
    }

    pub fn contains(&self, s: &Sort) -> bool {
        self.index.contains_key(s)
    }

    /// Resolves a sort name as written in source, accepting `[S]` for the
    /// kind of `S`'s component.
    pub fn resolve(&self, name: &str) -> Option<Sort> {
        if let Some(inner) = name.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let first = inner.split(',').next()?.trim();
            return self.kind_of(&Sort::new(first));
        }
        let s = Sort::new(name);
        self.contains(&s).then_some(s)
    }

    pub fn leq(&self, a: &Sort, b: &Sort) -> bool {
        match (self.index.get(a), self.index.get(b)) {
            (Some(&i), Some(&j)) => self.leq[i][j],
            _ => a == b,
        }
    }

    pub fn same_component(&self, a: &Sort, b: &Sort) -> bool {
        match (self.index.get(a), self.index.get(b)) {
            (Some(&i), Some(&j)) => self.component[i] == self.component[j],
            _ => a == b,
        }
    }

    pub fn kind_of(&self, s: &Sort) -> Option<Sort> {
        self.index.get(s).map(|&i| self.kinds[self.component[i]].clone())
    }

    /// Kind of `s`, or `s` itself when unregistered.
    pub fn kind_or_self(&self, s: &Sort) -> Sort {
        self.kind_of(s).unwrap_or_else(|| s.clone())
    }

    pub fn kinds(&self) -> &[Sort] {
        &self.kinds
    }

    /// Maximal common lower bounds of `a` and `b`.
    pub fn glbs(&self, a: &Sort, b: &Sort) -> Vec<Sort> {
        if self.leq(a, b) {
            return vec![a.clone()];
        }
        if self.leq(b, a) {
            return vec![b.clone()];
        }
        let lower: Vec<&Sort> =
            self.sorts.iter().filter(|s| self.leq(s, a) && self.leq(s, b)).collect();
        lower
            .iter()
            .filter(|s| !lower.iter().any(|t| t != *s && self.leq(s, t)))
            .map(|s| (*s).clone())
            .collect()
    }
}
