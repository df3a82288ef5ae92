use crate::parse::TermContext;
use crate::subst::Subst;
use crate::term::{Term, Var};
use crate::theory::Theory;

pub fn xor_theory() -> Theory {
    crate::theories::xor()
}

pub fn ag_theory() -> Theory {
    crate::theories::abelian_group()
}

/// Parses with implicit variables at the component kind of the first
/// infix operator's sort.
pub fn parse(th: &Theory, text: &str) -> Term {
    let ctx = TermContext::new(th);
    let anchor = if th.sig.has_op_name("_*_") { "mt" } else { "0" };
    ctx.parse_pair(anchor, text).map(|(_, t)| t).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn var(th: &Theory, name: &str) -> Var {
    parse(th, name).as_var().cloned().expect("a variable")
}

pub fn subst(th: &Theory, pairs: &[(&str, &str)]) -> Subst {
    Subst::from_pairs(pairs.iter().map(|(v, t)| (var(th, v), parse(th, t))))
}
