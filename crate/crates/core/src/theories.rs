//! Bundled theories.

use crate::error::Result;
use crate::parse::parse_theory;
use crate::theory::Theory;

pub const XOR_SOURCE: &str = include_str!("../theories/xor.vt");
pub const AG_SOURCE: &str = include_str!("../theories/ag.vt");

pub fn xor() -> Theory {
    parse_theory(XOR_SOURCE).expect("bundled exclusive-or theory parses")
}

pub fn abelian_group() -> Theory {
    parse_theory(AG_SOURCE).expect("bundled abelian group theory parses")
}

/// Looks up a bundled theory by short name or module name.
pub fn bundled(name: &str) -> Option<Result<Theory>> {
    match name {
        "xor" | "EXCLUSIVE-OR" => Some(parse_theory(XOR_SOURCE)),
        "ag" | "ABELIAN-GROUP" => Some(parse_theory(AG_SOURCE)),
        _ => None,
    }
}
