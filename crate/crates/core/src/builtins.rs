//! The built-in example corpus.  The fixed programs are embedded from
//! `programs/*.pbp`; the `chained(k)` and `sum(r)` families are generated
//! from their schemata.

use crate::ast::Program;
use crate::desugar::desugar;
use crate::parser::parse_program;
use std::fmt::Write;
use thiserror::Error;

pub const PAIRS_SRC: &str = include_str!("../../../programs/pairs.pbp");
pub const QFT_SRC: &str = include_str!("../../../programs/qft.pbp");
pub const REC_SRC: &str = include_str!("../../../programs/rec.pbp");
pub const ADD_SRC: &str = include_str!("../../../programs/add.pbp");
pub const ROUTE_SRC: &str = include_str!("../../../programs/route.pbp");
pub const CASCADE_SRC: &str = include_str!("../../../programs/cascade.pbp");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuiltinError {
    #[error("unknown builtin `{0}`; try pairs, qft, rec, add, route, cascade, chained(k), sum(r)")]
    Unknown(String),
    #[error("`{0}` needs a positive parameter")]
    BadParameter(String),
}

/// Source text of the substring-chain program with `k` chained automata.
pub fn chained_source(k: usize) -> String {
    let mut out = String::new();
    for i in 1..=k {
        let next = if i == k {
            "xor".to_string()
        } else {
            format!("a{}", i + 1)
        };
        let _ = write!(
            out,
            "decl a{i}(qs) {{ qcase qs[1] of {{ 0 -> call b{i}(qs - [1]); 1 -> call a{i}(qs - [1]); }} }},\n\
             decl b{i}(qs) {{ qcase qs[1] of {{ 0 -> call c{i}(qs - [1]); 1 -> call b{i}(qs - [1]); }} }},\n\
             decl c{i}(qs) {{ qcase qs[1] of {{ 0 -> call c{i}(qs - [1]); 1 -> call d{i}(qs - [1]); }} }},\n\
             decl d{i}(qs) {{ qcase qs[1] of {{ 0 -> call d{i}(qs - [1]); 1 -> call {next}(qs - [1]); }} }},\n"
        );
    }
    out.push_str("decl xor(qs) { qs[-1] *= NOT; }\n::\ncall a1(qs);\n");
    out
}

/// Source text of the program deciding whether the scanned bits sum to
/// exactly `r`, flipping the last qubit when they do.
pub fn sum_source(r: usize) -> String {
    let mut out = String::new();
    for i in 0..r {
        let _ = write!(
            out,
            "decl s{i}(qs) {{ qcase qs[1] of {{ 0 -> call s{i}(qs - [1]); 1 -> call s{}(qs - [1]); }} }},\n",
            i + 1
        );
    }
    let _ = write!(
        out,
        "decl s{r}(qs) {{\n  if |qs| == 1 then\n    call xor(qs);\n  else\n    qcase qs[1] of {{ 0 -> call s{r}(qs - [1]); 1 -> skip; }}\n}},\n"
    );
    out.push_str("decl xor(qs) { qs[-1] *= NOT; }\n::\ncall s0(qs);\n");
    out
}

fn parse_family(id: &str, prefix: &str) -> Option<Result<usize, BuiltinError>> {
    let rest = id.strip_prefix(prefix)?;
    let digits = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .unwrap_or(rest);
    match digits.parse::<usize>() {
        Ok(v) if v >= 1 => Some(Ok(v)),
        _ => Some(Err(BuiltinError::BadParameter(prefix.to_string()))),
    }
}

/// Look up a built-in example by id and return its desugared AST.
/// Ids: `pairs`, `qft`, `rec`, `add`, `route`, `cascade`, `chained(k)`
/// and `sum(r)` (parens optional).
pub fn builtin_example(id: &str) -> Result<Program, BuiltinError> {
    let src = match id {
        "pairs" => PAIRS_SRC.to_string(),
        "qft" => QFT_SRC.to_string(),
        "rec" => REC_SRC.to_string(),
        "add" => ADD_SRC.to_string(),
        "route" => ROUTE_SRC.to_string(),
        "cascade" => CASCADE_SRC.to_string(),
        other => {
            if let Some(k) = parse_family(other, "chained") {
                chained_source(k?)
            } else if let Some(r) = parse_family(other, "sum") {
                sum_source(r?)
            } else {
                return Err(BuiltinError::Unknown(other.to_string()));
            }
        }
    };
    let surface = parse_program(&src).expect("builtin sources parse");
    Ok(desugar(&surface).expect("builtin sources desugar"))
}

/// All builtin ids used by the verification and scaling harnesses.
pub fn standard_ids() -> Vec<String> {
    vec![
        "pairs".into(),
        "qft".into(),
        "rec".into(),
        "add".into(),
        "sum(2)".into(),
        "sum(3)".into(),
        "chained(1)".into(),
        "chained(2)".into(),
    ]
}

/// Input sizes a builtin accepts; `add` needs sizes of the shape 3m + 1.
pub fn valid_sizes(id: &str, range: impl Iterator<Item = usize>) -> Vec<usize> {
    range
        .filter(|n| if id == "add" { n % 3 == 1 } else { true })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::classify_program;

    #[test]
    fn all_builtins_load() {
        for id in [
            "pairs",
            "qft",
            "rec",
            "add",
            "route",
            "cascade",
            "chained(1)",
            "chained(3)",
            "sum(1)",
            "sum(4)",
        ] {
            let p = builtin_example(id).unwrap();
            assert!(p.is_desugared(), "{id} not desugared");
        }
        assert!(builtin_example("nope").is_err());
        assert!(builtin_example("sum(0)").is_err());
    }

    #[test]
    fn shipped_family_files_match_the_generators() {
        let from_file = crate::load_program(include_str!("../../../programs/chained1.pbp")).unwrap();
        assert_eq!(from_file, builtin_example("chained(1)").unwrap());
        let from_file = crate::load_program(include_str!("../../../programs/sum3.pbp")).unwrap();
        assert_eq!(from_file, builtin_example("sum(3)").unwrap());
    }

    #[test]
    fn sum_one_is_pbp() {
        let r = classify_program(&builtin_example("sum(1)").unwrap());
        assert!(r.pbp);
    }
}
