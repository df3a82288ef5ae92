//! Reader and printer for the `fmod ... endfm` theory subset, and the term
//! and equation syntax used on the command line.
//!
//! Supported statements: `sort(s)`, `subsort(s)`, `op`/`ops` with
//! `[assoc comm]` / `[comm]`, `var(s)`, and `eq [label] : l = r [variant] .`
//! Comments start with `***` or `---`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::sort::{Sort, SortGraph};
use crate::term::{Axioms, Op, Term, Var};
use crate::theory::{Rule, Signature, Theory};

#[derive(Clone, Debug)]
struct Tok {
    text: String,
    line: usize,
    col: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column, message: message.into() }
}

fn words(src: &str) -> Vec<Tok> {
    let mut out = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        let line = match (line.find("***"), line.find("---")) {
            (Some(a), Some(b)) => &line[..a.min(b)],
            (Some(a), None) | (None, Some(a)) => &line[..a],
            (None, None) => line,
        };
        let mut start = None;
        for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    out.push(Tok { text: line[s..i].to_string(), line: ln + 1, col: s + 1 });
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
    }
    out
}

/// Splits the module body into `.`-terminated statements.
fn statements(toks: Vec<Tok>) -> Result<(String, Vec<Vec<Tok>>)> {
    let mut it = toks.into_iter();
    let head = it.next().ok_or_else(|| syntax(1, 1, "empty input"))?;
    if head.text != "fmod" {
        return Err(syntax(head.line, head.col, "expected `fmod`"));
    }
    let name = it.next().ok_or_else(|| syntax(head.line, head.col, "missing module name"))?;
    let is = it.next().ok_or_else(|| syntax(name.line, name.col, "expected `is`"))?;
    if is.text != "is" {
        return Err(syntax(is.line, is.col, "expected `is`"));
    }
    let mut stmts = Vec::new();
    let mut cur: Vec<Tok> = Vec::new();
    let mut ended = false;
    for t in it {
        if ended {
            return Err(syntax(t.line, t.col, "text after `endfm`"));
        }
        if t.text == "endfm" && cur.is_empty() {
            ended = true;
            continue;
        }
        if t.text == "." {
            if cur.is_empty() {
                return Err(syntax(t.line, t.col, "empty statement"));
            }
            stmts.push(std::mem::take(&mut cur));
        } else if t.text.len() > 1 && t.text.ends_with('.') && !t.text.ends_with("..") {
            let mut t = t;
            t.text.pop();
            cur.push(t);
            stmts.push(std::mem::take(&mut cur));
        } else {
            cur.push(t);
        }
    }
    if let Some(t) = cur.first() {
        return Err(syntax(t.line, t.col, "unterminated statement (missing ` .`)"));
    }
    if !ended {
        return Err(syntax(0, 0, "missing `endfm`"));
    }
    Ok((name.text, stmts))
}

fn attrs_of(toks: &[Tok]) -> Result<(usize, Vec<String>)> {
    let Some(start) = toks.iter().rposition(|t| t.text.starts_with('[')) else {
        return Ok((toks.len(), Vec::new()));
    };
    let last = toks.last().unwrap();
    if !last.text.ends_with(']') {
        return Ok((toks.len(), Vec::new()));
    }
    let joined: Vec<&str> = toks[start..].iter().map(|t| t.text.as_str()).collect();
    let inner = joined.join(" ");
    let inner = inner.trim_start_matches('[').trim_end_matches(']');
    let attrs: Vec<String> = inner.split_whitespace().map(str::to_string).collect();
    for a in &attrs {
        if !matches!(a.as_str(), "assoc" | "comm" | "variant") {
            return Err(syntax(toks[start].line, toks[start].col, format!("unsupported attribute `{a}`")));
        }
    }
    Ok((start, attrs))
}

/// Parses a theory module.
pub fn parse_theory(src: &str) -> Result<Theory> {
    let (name, stmts) = statements(words(src))?;

    let mut sorts = Vec::new();
    let mut edges = Vec::new();
    for st in &stmts {
        match st[0].text.as_str() {
            "sort" | "sorts" => sorts.extend(st[1..].iter().map(|t| Sort::new(&t.text))),
            "subsort" | "subsorts" => {
                let groups: Vec<Vec<&Tok>> =
                    st[1..].split(|t| t.text == "<").map(|g| g.iter().collect()).collect();
                if groups.len() < 2 || groups.iter().any(Vec::is_empty) {
                    return Err(syntax(st[0].line, st[0].col, "malformed subsort declaration"));
                }
                for w in groups.windows(2) {
                    for lo in &w[0] {
                        for hi in &w[1] {
                            edges.push((Sort::new(&lo.text), Sort::new(&hi.text)));
                        }
                    }
                }
            }
            _ => {}
        }
    }
    let graph = SortGraph::build(sorts, edges)?;
    let resolve = |t: &Tok| {
        graph.resolve(&t.text).ok_or_else(|| syntax(t.line, t.col, format!("unknown sort `{}`", t.text)))
    };

    let mut sig = Signature::new(graph.clone());
    let mut vars: Vec<Var> = Vec::new();
    let mut eqs = Vec::new();
    for st in &stmts {
        let kw = &st[0];
        match kw.text.as_str() {
            "sort" | "sorts" | "subsort" | "subsorts" => {}
            "op" | "ops" => {
                let colon = st
                    .iter()
                    .position(|t| t.text == ":")
                    .ok_or_else(|| syntax(kw.line, kw.col, "expected `:` in operator declaration"))?;
                let arrow = st
                    .iter()
                    .position(|t| t.text == "->")
                    .ok_or_else(|| syntax(kw.line, kw.col, "expected `->` in operator declaration"))?;
                let names = &st[1..colon];
                if names.is_empty() || (kw.text == "op" && names.len() != 1) {
                    return Err(syntax(kw.line, kw.col, "bad operator name list"));
                }
                let args = st[colon + 1..arrow].iter().map(&resolve).collect::<Result<Vec<_>>>()?;
                let res_tok =
                    st.get(arrow + 1).ok_or_else(|| syntax(kw.line, kw.col, "missing result sort"))?;
                let result = resolve(res_tok)?;
                let (_, attrs) = attrs_of(&st[arrow + 2..])?;
                if attrs.iter().any(|a| a == "variant") {
                    return Err(syntax(kw.line, kw.col, "`variant` is an equation attribute"));
                }
                let assoc = attrs.iter().any(|a| a == "assoc");
                let comm = attrs.iter().any(|a| a == "comm");
                let axioms = match (assoc, comm) {
                    (false, false) => Axioms::Free,
                    (false, true) => Axioms::Comm,
                    (true, true) => Axioms::AssocComm,
                    (true, false) => {
                        return Err(Error::Theory(
                            "associativity without commutativity is not supported".into(),
                        ))
                    }
                };
                for n in names {
                    sig.add_op(Op::new(&n.text, args.clone(), result.clone(), axioms))?;
                }
            }
            "var" | "vars" => {
                let colon = st
                    .iter()
                    .position(|t| t.text == ":")
                    .ok_or_else(|| syntax(kw.line, kw.col, "expected `:` in variable declaration"))?;
                let sort_tok =
                    st.get(colon + 1).ok_or_else(|| syntax(kw.line, kw.col, "missing variable sort"))?;
                let sort = resolve(sort_tok)?;
                for n in &st[1..colon] {
                    if n.text.starts_with('#') || n.text.starts_with('%') {
                        return Err(syntax(n.line, n.col, "variable names may not start with `#` or `%`"));
                    }
                    vars.retain(|v| *v.name != *n.text);
                    vars.push(Var::new(&n.text, sort.clone()));
                }
            }
            "eq" => eqs.push(st),
            other => {
                return Err(syntax(kw.line, kw.col, format!("unsupported statement `{other}`")));
            }
        }
    }

    let mut rules = Vec::new();
    for st in eqs {
        let kw = &st[0];
        let mut body = &st[1..];
        let mut label = None;
        if let Some(first) = body.first() {
            if first.text.starts_with('[') {
                let close = body
                    .iter()
                    .position(|t| t.text.ends_with(']'))
                    .ok_or_else(|| syntax(first.line, first.col, "unterminated label"))?;
                let text: Vec<&str> = body[..=close].iter().map(|t| t.text.as_str()).collect();
                label = Some(text.join(" ").trim_matches(|c| c == '[' || c == ']').trim().to_string());
                body = &body[close + 1..];
                match body.first() {
                    Some(t) if t.text == ":" => body = &body[1..],
                    _ => return Err(syntax(kw.line, kw.col, "expected `:` after equation label")),
                }
            }
        }
        let eq_pos = body
            .iter()
            .position(|t| t.text == "=")
            .ok_or_else(|| syntax(kw.line, kw.col, "expected `=` in equation"))?;
        let (attr_start, attrs) = attrs_of(&body[eq_pos + 1..])?;
        let lhs_text = join(&body[..eq_pos]);
        let rhs_text = join(&body[eq_pos + 1..eq_pos + 1 + attr_start]);
        let label = label.unwrap_or_else(|| format!("eq{}", rules.len() + 1));
        if !attrs.iter().any(|a| a == "variant") {
            return Err(syntax(kw.line, kw.col, format!("equation [{label}] lacks the `variant` attribute")));
        }
        let ctx = TermContext::with_vars(&sig, &vars, false);
        let (lhs, rhs) = ctx
            .parse_pair(&lhs_text, &rhs_text)
            .map_err(|e| relocate(e, kw))?;
        rules.push(Rule { label, lhs, rhs });
    }
    Theory::new(&name, sig, vars, rules)
}

fn relocate(e: Error, at: &Tok) -> Error {
    match e {
        Error::Syntax { message, .. } => Error::Syntax { line: at.line, column: at.col, message },
        other => other,
    }
}

fn join(toks: &[Tok]) -> String {
    toks.iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug, PartialEq)]
enum Ast {
    Ident(String, Option<String>),
    Call(String, Vec<Ast>),
}

#[derive(Clone, Debug, PartialEq)]
enum TTok {
    Ident(String),
    Sym(String),
    LParen,
    RParen,
    Comma,
}

const SYMBOL_CHARS: &str = "*+-~^&|/<>!@=?";

fn lex(s: &str) -> Result<Vec<TTok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '(' {
            out.push(TTok::LParen);
            i += 1;
        } else if c == ')' {
            out.push(TTok::RParen);
            i += 1;
        } else if c == ',' {
            out.push(TTok::Comma);
            i += 1;
        } else if SYMBOL_CHARS.contains(c) {
            let st = i;
            while i < chars.len() && SYMBOL_CHARS.contains(chars[i]) {
                i += 1;
            }
            out.push(TTok::Sym(chars[st..i].iter().collect()));
        } else if c.is_alphanumeric() || "_'$#%".contains(c) {
            let st = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || "_'$#%.".contains(chars[i])) {
                i += 1;
            }
            if i < chars.len() && chars[i] == ':' {
                i += 1;
                if i < chars.len() && chars[i] == '[' {
                    while i < chars.len() && chars[i] != ']' {
                        i += 1;
                    }
                    i += 1;
                } else {
                    while i < chars.len() && (chars[i].is_alphanumeric() || "_'".contains(chars[i])) {
                        i += 1;
                    }
                }
            }
            out.push(TTok::Ident(chars[st..i.min(chars.len())].iter().collect()));
        } else {
            return Err(syntax(0, i + 1, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct AstParser<'s> {
    toks: Vec<TTok>,
    pos: usize,
    sig: &'s Signature,
}

impl AstParser<'_> {
    fn peek(&self) -> Option<&TTok> {
        self.toks.get(self.pos)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        syntax(0, self.pos + 1, msg)
    }

    fn infix_name(&self, sym: &str) -> Option<String> {
        let name = format!("_{sym}_");
        (!self.sig.ops_named(&name, 2).is_empty()).then_some(name)
    }

    fn prefix_name(&self, sym: &str) -> Option<String> {
        let name = format!("{sym}_");
        (!self.sig.ops_named(&name, 1).is_empty()).then_some(name)
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        while let Some(TTok::Sym(s)) = self.peek() {
            let Some(name) = self.infix_name(s) else { break };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Ast::Call(name, vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ast> {
        if let Some(TTok::Sym(s)) = self.peek() {
            let s = s.clone();
            let name = self.prefix_name(&s).ok_or_else(|| self.err(format!("unknown prefix operator `{s}`")))?;
            self.pos += 1;
            let arg = self.unary()?;
            return Ok(Ast::Call(name, vec![arg]));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Ast> {
        match self.toks.get(self.pos).cloned() {
            Some(TTok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&TTok::RParen) {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(TTok::Ident(id)) => {
                self.pos += 1;
                if self.peek() == Some(&TTok::LParen) {
                    self.pos += 1;
                    let mut args = vec![self.expr()?];
                    loop {
                        match self.peek() {
                            Some(TTok::Comma) => {
                                self.pos += 1;
                                args.push(self.expr()?);
                            }
                            Some(TTok::RParen) => {
                                self.pos += 1;
                                break;
                            }
                            _ => return Err(self.err("expected `,` or `)`")),
                        }
                    }
                    return Ok(Ast::Call(id, args));
                }
                match id.split_once(':') {
                    Some((n, s)) => Ok(Ast::Ident(n.to_string(), Some(s.to_string()))),
                    None => Ok(Ast::Ident(id, None)),
                }
            }
            Some(t) => Err(self.err(format!("unexpected token {t:?}"))),
            None => Err(self.err("unexpected end of term")),
        }
    }
}

/// Resolves identifiers to operators and variables. Undeclared
/// capitalized identifiers become variables of the kind expected at their
/// position when `implicit_vars` is set; the same name always denotes the
/// same variable within one context.
pub struct TermContext<'s> {
    sig: &'s Signature,
    declared: BTreeMap<String, Var>,
    implicit: std::cell::RefCell<BTreeMap<String, Var>>,
    implicit_vars: bool,
}

impl<'s> TermContext<'s> {
    pub fn new(th: &'s Theory) -> Self {
        TermContext::with_vars(&th.sig, &th.vars, true)
    }

    pub fn with_vars(sig: &'s Signature, vars: &[Var], implicit_vars: bool) -> Self {
        TermContext {
            sig,
            declared: vars.iter().map(|v| (v.name.to_string(), v.clone())).collect(),
            implicit: Default::default(),
            implicit_vars,
        }
    }

    fn ast(&self, text: &str) -> Result<Ast> {
        let mut p = AstParser { toks: lex(text)?, pos: 0, sig: self.sig };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input after term"));
        }
        Ok(e)
    }

    pub fn parse(&self, text: &str) -> Result<Term> {
        let t = self.elaborate(&self.ast(text)?, None)?;
        self.sig.check_sorted(&t)?;
        Ok(t.canonicalize())
    }

    /// Parses two sides that must live in one component; a bare implicit
    /// variable takes the kind of the other side.
    pub fn parse_pair(&self, l: &str, r: &str) -> Result<(Term, Term)> {
        let (la, ra) = (self.ast(l)?, self.ast(r)?);
        let (lt, rt) = match self.elaborate(&la, None) {
            Ok(lt) => {
                let k = self.sig.kind_of_term(&lt);
                (lt, self.elaborate(&ra, Some(&k))?)
            }
            Err(first) => {
                let rt = self.elaborate(&ra, None).map_err(|_| first)?;
                let k = self.sig.kind_of_term(&rt);
                (self.elaborate(&la, Some(&k))?, rt)
            }
        };
        self.sig.check_sorted(&lt)?;
        self.sig.check_sorted(&rt)?;
        let (lk, rk) = (self.sig.least_sort(&lt), self.sig.least_sort(&rt));
        if !self.sig.sorts.same_component(&lk, &rk) {
            return Err(Error::Sort(format!("sides `{lt}` and `{rt}` are in different components")));
        }
        Ok((lt.canonicalize(), rt.canonicalize()))
    }

    fn elaborate(&self, ast: &Ast, expected: Option<&Sort>) -> Result<Term> {
        match ast {
            Ast::Ident(name, Some(sort)) => {
                let s = self
                    .sig
                    .sorts
                    .resolve(sort)
                    .ok_or_else(|| Error::Sort(format!("unknown sort `{sort}`")))?;
                Ok(Term::Var(Var::new(name, s)))
            }
            Ast::Ident(name, None) => {
                if let Some(v) = self.declared.get(name) {
                    return Ok(Term::Var(v.clone()));
                }
                if let [op] = self.sig.ops_named(name, 0) {
                    return Ok(Term::constant(op));
                }
                if let Some(v) = self.implicit.borrow().get(name) {
                    return Ok(Term::Var(v.clone()));
                }
                let capital = name.chars().next().is_some_and(|c| c.is_uppercase());
                if !self.implicit_vars || !capital {
                    return Err(syntax(0, 0, format!("unknown identifier `{name}`")));
                }
                let Some(exp) = expected else {
                    return Err(syntax(0, 0, format!("cannot infer the sort of variable `{name}`")));
                };
                let v = Var::new(name, self.sig.sorts.kind_or_self(exp));
                self.implicit.borrow_mut().insert(name.clone(), v.clone());
                Ok(Term::Var(v))
            }
            Ast::Call(name, args) => {
                let cands = self.sig.ops_named(name, args.len());
                let op = match cands {
                    [] => return Err(syntax(0, 0, format!("unknown operator `{name}/{}`", args.len()))),
                    [op] => op.clone(),
                    _ => {
                        let sorts = args
                            .iter()
                            .map(|a| self.elaborate(a, None).map(|t| self.sig.least_sort(&t)))
                            .collect::<Result<Vec<_>>>()?;
                        self.sig
                            .resolve_op(name, &sorts)
                            .cloned()
                            .ok_or_else(|| Error::Sort(format!("no overload of `{name}` fits")))?
                    }
                };
                let targs = args
                    .iter()
                    .enumerate()
                    .map(|(i, a)| self.elaborate(a, Some(&op.args[i])))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Term::App(op, targs))
            }
        }
    }

    /// Parses `t1 =? t1' /\ t2 =? t2' ...`.
    pub fn parse_equations(&self, text: &str) -> Result<Vec<(Term, Term)>> {
        let mut out = Vec::new();
        for part in text.split("/\\") {
            let (l, r) = part
                .split_once("=?")
                .ok_or_else(|| syntax(0, 0, format!("expected `=?` in `{}`", part.trim())))?;
            out.push(self.parse_pair(l.trim(), r.trim())?);
        }
        Ok(out)
    }

    /// Variables introduced implicitly so far.
    pub fn implicit_vars(&self) -> Vec<Var> {
        self.implicit.borrow().values().cloned().collect()
    }
}

/// Prints a theory back in the accepted module syntax.
pub fn print_theory(th: &Theory) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "fmod {} is", th.name);
    let sorts: Vec<&str> = th.sig.sorts.declared().map(Sort::name).collect();
    if !sorts.is_empty() {
        let _ = writeln!(s, "  sorts {} .", sorts.join(" "));
    }
    for (lo, hi) in th.sig.sorts.subsort_edges() {
        let _ = writeln!(s, "  subsort {lo} < {hi} .");
    }
    for op in th.sig.ops() {
        let args: Vec<&str> = op.args.iter().map(Sort::name).collect();
        let attrs = match op.axioms {
            Axioms::Free => "",
            Axioms::Comm => " [comm]",
            Axioms::AssocComm => " [assoc comm]",
        };
        let _ = writeln!(s, "  op {} : {} -> {}{} .", op.name, args.join(" "), op.result, attrs).map(|_| ());
    }
    let mut by_sort: BTreeMap<&Sort, Vec<&str>> = BTreeMap::new();
    for v in &th.vars {
        by_sort.entry(&v.sort).or_default().push(&v.name);
    }
    for (sort, names) in by_sort {
        let _ = writeln!(s, "  vars {} : {sort} .", names.join(" "));
    }
    for r in &th.rules {
        let _ = writeln!(s, "  eq [{}] : {} = {} [variant] .", r.label, source(&r.lhs, th), source(&r.rhs, th));
    }
    s.push_str("endfm\n");
    s
}

/// Term text where undeclared variables carry their sort inline.
fn source(t: &Term, th: &Theory) -> String {
    let undeclared = |v: &Var| !th.vars.contains(v);
    let renamed = t.map_bottom_up(&mut |u| match u {
        Term::Var(v) if undeclared(v) => {
            Some(Term::Var(Var::new(&format!("{}:{}", v.name, v.sort), v.sort.clone())))
        }
        _ => None,
    });
    renamed.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theories::XOR_SOURCE;

    #[test]
    fn exclusive_or_module_parses() {
        let th = parse_theory(XOR_SOURCE).unwrap();
        assert_eq!(th.rules.len(), 3);
        let star = &th.sig.ops_named("_*_", 2)[0];
        assert!(star.is_ac());
        assert!(th.warnings.is_empty(), "{:?}", th.warnings);
        let t = TermContext::new(&th).parse("a").unwrap();
        assert_eq!(th.sig.least_sort(&t).name(), "Elem");
        let t = TermContext::new(&th).parse("a * b").unwrap();
        assert_eq!(th.sig.least_sort(&t).name(), "ElemXor");
        let t = TermContext::new(&th).parse("X").unwrap();
        assert_eq!(th.sig.least_sort(&t).name(), "[ElemXor]");
    }

    #[test]
    fn variable_lhs_is_rejected() {
        let src = "fmod T is sort S . op a : -> S . vars X Y : S . eq X = Y [variant] . endfm";
        assert!(matches!(parse_theory(src), Err(Error::Theory(_))));
    }

    #[test]
    fn empty_module() {
        let th = parse_theory("fmod EMPTY is endfm").unwrap();
        assert!(th.rules.is_empty());
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = parse_theory("fmod T is\n  sort S\nendfm").unwrap_err();
        assert!(matches!(err, Error::Syntax { .. }), "{err}");
        let err = parse_theory("fmod T is\n  sort S .\n  op a : -> Q .\nendfm").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }), "{err}");
    }

    #[test]
    fn coherence_warning_without_extension() {
        let src = "fmod T is sort S . op _+_ : S S -> S [assoc comm] . op 0 : -> S . \
                   vars X : S . eq X + X = 0 [variant] . endfm";
        let th = parse_theory(src).unwrap();
        assert_eq!(th.warnings.len(), 1);
    }

    #[test]
    fn print_round_trip() {
        let th = parse_theory(XOR_SOURCE).unwrap();
        let again = parse_theory(&print_theory(&th)).unwrap();
        assert_eq!(th, again);
        let (ext, _) = crate::theory::eq_extend(&th).unwrap();
        assert_eq!(parse_theory(&print_theory(&ext)).unwrap(), ext);
    }

    #[test]
    fn equations_and_implicit_variables() {
        let th = parse_theory(XOR_SOURCE).unwrap();
        let ctx = TermContext::new(&th);
        let eqs = ctx.parse_equations("V1 =? V2 * V3 /\\ V1 =? a").unwrap();
        assert_eq!(eqs.len(), 2);
        assert_eq!(eqs[0].0, eqs[1].0);
        assert_eq!(ctx.implicit_vars().len(), 3);
    }
}
