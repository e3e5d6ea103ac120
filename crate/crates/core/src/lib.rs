//! Toolkit for a first-order quantum programming language with quantum
//! control flow (`qcase`): parsing, a reference interpreter, static
//! classification, circuit compilation with anchoring and merging, and
//! verification plus scaling harnesses.

pub use num_complex;

pub mod analysis;
pub mod ast;
pub mod bench;
pub mod builtins;
pub mod circuit;
pub mod compiler;
pub mod desugar;
pub mod eval;
pub mod parser;
pub mod permutation;
pub mod pretty;
pub mod sim;
pub mod verify;

pub use analysis::{
    brute_force_time, build_call_graph, classify_program, rank, time_complexity, width,
    ClassificationReport, ProgramAnalysis,
};
pub use ast::{Program, Statement};
pub use circuit::{deserialize, serialize, Circuit, ControlStructure, Gate};
pub use compiler::{
    baseline_count, compile, CompileError, CompileOutput, CompileStats, Strategy,
};
pub use desugar::desugar;
pub use eval::{run_program, RunResult, StateVector};
pub use parser::parse_program;
pub use permutation::controlled_permutation;
pub use pretty::pretty_print;
pub use sim::{apply_circuit, simulate_with_ancillas};
pub use verify::verify_equivalence;

/// Parse, name-check and desugar a source file in one step.
pub fn load_program(source: &str) -> Result<Program, LoadError> {
    let surface = parser::parse_program(source)?;
    Ok(desugar::desugar(&surface)?)
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error(transparent)]
    Parse(#[from] parser::ParseError),
    #[error(transparent)]
    Desugar(#[from] desugar::DesugarError),
}
