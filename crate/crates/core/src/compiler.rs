//! Circuit compilation.
//!
//! `compile` lowers a statement to controlled gates by structural
//! recursion: conditionals are decided statically (all branching data is
//! classical given the pointer list), a quantum case compiles both
//! branches in sequence under opposite control polarities, non-recursive
//! calls inline their body, and recursive calls enter `optimize`.
//!
//! `optimize` processes a worklist of controlled statements for one
//! recursion family.  The first call of a `(procedure, size)` pair
//! *anchors*: a fresh ancilla receives flanking controlled-NOTs and the
//! body is queued controlled on that ancilla.  Later compatible calls
//! *merge*: only the flanking NOTs are added, folding the new control
//! structure into the existing ancilla, so one body instance per input
//! size serves every branch.  Non-recursive branches are deferred to a
//! contextual list, decomposed into atoms, sliced by time index and
//! split per recursion family for further merging.
//!
//! The sequential baseline instead inlines every call and never
//! allocates ancillas, which sequentializes quantum branches.  The swap
//! strategy extends merging to calls whose pointer lists differ by
//! routing the caller's register onto the anchored one with a controlled
//! permutation.

use crate::analysis::{classify_program, symbolic_run, ProgramAnalysis, StaticRunError};
use crate::ast::*;
use crate::circuit::{AnchorInfo, Circuit, ControlStructure, Gate};
use crate::eval::{eval_bool, eval_int, eval_qubit, eval_set, PointerList, WireSet};
use crate::permutation::emit_controlled_permutation;
use num_bigint::BigUint;
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Merge,
    Sequential,
    Swap,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Merge => "merge",
            Strategy::Sequential => "sequential",
            Strategy::Swap => "swap",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "merge" => Ok(Strategy::Merge),
            "sequential" | "naive" => Ok(Strategy::Sequential),
            "swap" => Ok(Strategy::Swap),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("program must be desugared before compilation")]
    NotDesugared,
    #[error("strategy `{strategy}` requires {requirement}")]
    Classification {
        strategy: &'static str,
        requirement: String,
    },
    #[error("the program is erroneous at size {n}")]
    Erroneous { n: usize },
    #[error("the program does not terminate at size {n}")]
    Diverging { n: usize },
    #[error(
        "calls to `{proc}` at size {size} use different registers; \
         merging needs uniform pointer lists, use the swap strategy"
    )]
    MergeListMismatch { proc: String, size: usize },
    #[error("materialized circuit exceeds the gate budget of {budget}")]
    GateBudget { budget: usize },
    #[error("orthogonality invariant violated while optimizing `{proc}`")]
    Orthogonality { proc: String },
    #[error("internal compiler error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompileStats {
    pub ancilla_count: usize,
    pub anchor_events: usize,
    pub merge_events: usize,
    pub size: usize,
    pub depth: usize,
}

#[derive(Debug, Clone)]
pub struct CompileOutput {
    pub circuit: Circuit,
    pub stats: CompileStats,
    pub strategy: Strategy,
}

/// A statement awaiting compilation under a control structure, together
/// with the pointer list and accessible set it will be evaluated in.
#[derive(Debug, Clone)]
pub struct ControlledStatement<'a> {
    pub controls: ControlStructure,
    pub stmt: &'a Statement,
    pub pointers: PointerList,
    pub accessible: WireSet,
}

/// Exact gate and wire counts of the sequential baseline, computed
/// without materializing the gate list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeCount {
    pub gates: BigUint,
    pub wires: usize,
    pub size: BigUint,
}

pub const DEFAULT_GATE_BUDGET: usize = 10_000_000;

/// Compile a desugared program for `n` input qubits.
pub fn compile(p: &Program, n: usize, strategy: Strategy) -> Result<CompileOutput, CompileError> {
    compile_with_budget(p, n, strategy, DEFAULT_GATE_BUDGET)
}

pub fn compile_with_budget(
    p: &Program,
    n: usize,
    strategy: Strategy,
    budget: usize,
) -> Result<CompileOutput, CompileError> {
    if !p.is_desugared() {
        return Err(CompileError::NotDesugared);
    }
    let report = classify_program(p);
    match strategy {
        Strategy::Merge | Strategy::Swap => {
            if !report.wf_and_width() {
                return Err(CompileError::Classification {
                    strategy: strategy.as_str(),
                    requirement: "a well-founded program of width at most 1".into(),
                });
            }
        }
        Strategy::Sequential => {
            if !report.wf {
                return Err(CompileError::Classification {
                    strategy: strategy.as_str(),
                    requirement: "a well-founded program".into(),
                });
            }
        }
    }
    match symbolic_run(p, n) {
        Ok(_) => {}
        Err(StaticRunError::Erroneous) => return Err(CompileError::Erroneous { n }),
        Err(StaticRunError::Diverged) => return Err(CompileError::Diverging { n }),
    }

    let l: PointerList = (1..=n as u32).collect();
    let acc: WireSet = (1..=n as u32).collect();
    match strategy {
        Strategy::Sequential => {
            let mut b = Baseline {
                prog: p,
                budget,
                gates: Vec::new(),
            };
            b.stmt(&p.body, &l, &acc, &ControlStructure::empty())?;
            let mut circuit = Circuit::new(n);
            for g in b.gates {
                circuit.push(g);
            }
            Ok(finish(circuit, strategy, 0, 0))
        }
        Strategy::Merge | Strategy::Swap => {
            let analysis = ProgramAnalysis::new(p);
            let mut c = Compiler {
                prog: p,
                analysis,
                strategy,
                next_wire: n as u32,
                anchors: Vec::new(),
                terms: HashMap::new(),
                anchor_events: 0,
                merge_events: 0,
            };
            let gates = c.compile_stmt(&p.body, &l, &acc, &ControlStructure::empty())?;
            let mut circuit = Circuit::new(n);
            circuit.ancillas = c.next_wire as usize - n;
            circuit.anchors = c.anchors;
            for g in gates {
                circuit.push(g);
            }
            Ok(finish(circuit, strategy, c.anchor_events, c.merge_events))
        }
    }
}

fn finish(circuit: Circuit, strategy: Strategy, anchors: usize, merges: usize) -> CompileOutput {
    let stats = CompileStats {
        ancilla_count: circuit.ancillas,
        anchor_events: anchors,
        merge_events: merges,
        size: circuit.size(),
        depth: circuit.depth(),
    };
    CompileOutput {
        circuit,
        stats,
        strategy,
    }
}

// --- merge / swap compilation ----------------------------------------------

struct Compiler<'a> {
    prog: &'a Program,
    analysis: ProgramAnalysis,
    strategy: Strategy,
    next_wire: u32,
    anchors: Vec<AnchorInfo>,
    /// Activation terms per ancilla wire: the control structures folded
    /// into it by anchoring and merging, used by the orthogonality check.
    terms: HashMap<u32, Vec<ControlStructure>>,
    anchor_events: usize,
    merge_events: usize,
}

struct AnchorEntry {
    wire: u32,
    list: PointerList,
}

impl<'a> Compiler<'a> {
    fn alloc_wire(&mut self) -> u32 {
        self.next_wire += 1;
        self.next_wire
    }

    fn width(&self, family: usize, s: &Statement) -> u64 {
        self.analysis.stmt_width(self.prog, family, s)
    }

    fn compile_stmt(
        &mut self,
        s: &'a Statement,
        l: &[u32],
        acc: &WireSet,
        cs: &ControlStructure,
    ) -> Result<Vec<Gate>, CompileError> {
        match s {
            Statement::Skip => Ok(Vec::new()),
            Statement::Unitary {
                target,
                gate,
                phase,
                arg,
            } => {
                let w = eval_qubit(target, l);
                if !acc.contains(&w) {
                    return Err(CompileError::Internal(
                        "statically erroneous gate survived the pre-check".into(),
                    ));
                }
                let k = arg.as_ref().map(|a| eval_int(a, l));
                let theta = phase.map(|p| p.eval(k));
                Ok(vec![Gate::new(*gate, theta, w, cs.clone())])
            }
            Statement::Seq(a, b) => {
                let mut out = self.compile_stmt(a, l, acc, cs)?;
                out.extend(self.compile_stmt(b, l, acc, cs)?);
                Ok(out)
            }
            Statement::If {
                cond,
                then_branch,
                else_branch,
            } => {
                let branch = if eval_bool(cond, l) {
                    then_branch
                } else {
                    else_branch
                };
                self.compile_stmt(branch, l, acc, cs)
            }
            Statement::QCase { control, zero, one } => {
                let w = eval_qubit(control, l);
                if !acc.contains(&w) {
                    return Err(CompileError::Internal(
                        "statically erroneous qcase survived the pre-check".into(),
                    ));
                }
                let mut inner = acc.clone();
                inner.remove(&w);
                let mut out = self.compile_stmt(zero, l, &inner, &cs.with(w, false))?;
                out.extend(self.compile_stmt(one, l, &inner, &cs.with(w, true))?);
                Ok(out)
            }
            Statement::Call { proc, arg } => {
                let l2 = eval_set(arg, l);
                if l2.is_empty() {
                    return Ok(Vec::new());
                }
                let prog = self.prog;
                let idx = prog.decl_index(proc).expect("name-checked");
                let body: &'a Statement = &prog.decls[idx].body;
                if self.analysis.widths[idx] == 0 {
                    self.compile_stmt(body, &l2, acc, cs)
                } else {
                    let family = self
                        .analysis
                        .graph
                        .family(idx)
                        .expect("positive width implies recursion");
                    let entry = ControlledStatement {
                        controls: cs.clone(),
                        stmt: body,
                        pointers: l2,
                        accessible: acc.clone(),
                    };
                    self.optimize(VecDeque::from([entry]), family)
                }
            }
            Statement::MultiQCase { .. } | Statement::MacroCall { .. } => {
                Err(CompileError::NotDesugared)
            }
        }
    }

    /// Build the circuit for one recursion family from a worklist of
    /// controlled statements, all of width 1 with respect to `family`.
    fn optimize(
        &mut self,
        mut worklist: VecDeque<ControlledStatement<'a>>,
        family: usize,
    ) -> Result<Vec<Gate>, CompileError> {
        let mut c_l: Vec<Gate> = Vec::new();
        let mut c_m: Vec<Gate> = Vec::new();
        let mut c_r: VecDeque<Gate> = VecDeque::new();
        let mut contextual: Vec<ControlledStatement<'a>> = Vec::new();
        let mut anc: HashMap<(usize, usize), AnchorEntry> = HashMap::new();

        // entries of the initial worklist must already be orthogonal
        for i in 1..worklist.len() {
            self.check_orthogonal_against(&worklist[i], worklist.iter().take(i), family)?;
        }

        while let Some(e) = worklist.pop_front() {
            let push = |this: &mut Self,
                            worklist: &mut VecDeque<ControlledStatement<'a>>,
                            contextual: &mut Vec<ControlledStatement<'a>>,
                            entry: ControlledStatement<'a>,
                            to_worklist: bool|
             -> Result<(), CompileError> {
                this.check_orthogonal_against(
                    &entry,
                    worklist.iter().chain(contextual.iter()),
                    family,
                )?;
                if to_worklist {
                    worklist.push_back(entry);
                } else {
                    contextual.push(entry);
                }
                Ok(())
            };
            match e.stmt {
                Statement::Seq(s1, s2) => {
                    if self.width(family, s1) == 1 {
                        // the recursive half runs first; its sibling is
                        // compiled to the right of the optimized region
                        let frag = self.compile_stmt(s2, &e.pointers, &e.accessible, &e.controls)?;
                        for g in frag.into_iter().rev() {
                            c_r.push_front(g);
                        }
                        push(self, &mut worklist, &mut contextual, sub_entry(&e, s1), true)?;
                    } else {
                        let frag = self.compile_stmt(s1, &e.pointers, &e.accessible, &e.controls)?;
                        c_l.extend(frag);
                        push(self, &mut worklist, &mut contextual, sub_entry(&e, s2), true)?;
                    }
                }
                Statement::If {
                    cond,
                    then_branch,
                    else_branch,
                } => {
                    let branch: &'a Statement = if eval_bool(cond, &e.pointers) {
                        then_branch
                    } else {
                        else_branch
                    };
                    let recursive = self.width(family, branch) == 1;
                    push(self, &mut worklist, &mut contextual, sub_entry(&e, branch), recursive)?;
                }
                Statement::QCase { control, zero, one } => {
                    let w = eval_qubit(control, &e.pointers);
                    if !e.accessible.contains(&w) {
                        return Err(CompileError::Internal(
                            "statically erroneous qcase survived the pre-check".into(),
                        ));
                    }
                    let mut inner = e.accessible.clone();
                    inner.remove(&w);
                    let mk = |branch: &'a Statement, pol: bool| ControlledStatement {
                        controls: e.controls.with(w, pol),
                        stmt: branch,
                        pointers: e.pointers.clone(),
                        accessible: inner.clone(),
                    };
                    let w0 = self.width(family, zero);
                    let w1 = self.width(family, one);
                    match (w0, w1) {
                        (1, 1) => {
                            push(self, &mut worklist, &mut contextual, mk(zero, false), true)?;
                            push(self, &mut worklist, &mut contextual, mk(one, true), true)?;
                        }
                        (1, 0) => {
                            push(self, &mut worklist, &mut contextual, mk(zero, false), true)?;
                            push(self, &mut worklist, &mut contextual, mk(one, true), false)?;
                        }
                        (0, 1) => {
                            push(self, &mut worklist, &mut contextual, mk(one, true), true)?;
                            push(self, &mut worklist, &mut contextual, mk(zero, false), false)?;
                        }
                        _ => {
                            return Err(CompileError::Internal(format!(
                                "worklist qcase with branch widths ({w0}, {w1})"
                            )))
                        }
                    }
                }
                Statement::Call { proc, arg } => {
                    let l2 = eval_set(arg, &e.pointers);
                    if l2.is_empty() {
                        continue; // nil call vanishes
                    }
                    let prog = self.prog;
                    let idx = prog.decl_index(proc).expect("name-checked");
                    let key = (idx, l2.len());
                    if let Some(anchor) = anc.get(&key) {
                        let anchor_wire = anchor.wire;
                        let anchor_list = anchor.list.clone();
                        if anchor_list != l2 {
                            if self.strategy != Strategy::Swap {
                                return Err(CompileError::MergeListMismatch {
                                    proc: proc.clone(),
                                    size: l2.len(),
                                });
                            }
                            self.routed_merge(
                                &mut c_l,
                                &mut c_r,
                                &e.controls,
                                anchor_wire,
                                &l2,
                                &anchor_list,
                            );
                        } else {
                            c_l.push(Gate::not(anchor_wire, e.controls.clone()));
                            c_r.push_front(Gate::not(anchor_wire, e.controls.clone()));
                        }
                        self.terms
                            .get_mut(&anchor_wire)
                            .expect("anchored ancilla has terms")
                            .push(e.controls.clone());
                        self.merge_events += 1;
                    } else {
                        let wire = self.alloc_wire();
                        self.anchors.push(AnchorInfo {
                            wire,
                            proc: proc.clone(),
                            size: l2.len(),
                        });
                        self.terms.insert(wire, vec![e.controls.clone()]);
                        self.anchor_events += 1;
                        c_l.push(Gate::not(wire, e.controls.clone()));
                        c_r.push_front(Gate::not(wire, e.controls.clone()));
                        let body_entry = ControlledStatement {
                            controls: ControlStructure::single(wire, true),
                            stmt: &prog.decls[idx].body,
                            pointers: l2.clone(),
                            accessible: e.accessible.clone(),
                        };
                        anc.insert(key, AnchorEntry { wire, list: l2 });
                        push(self, &mut worklist, &mut contextual, body_entry, true)?;
                    }
                }
                other => {
                    return Err(CompileError::Internal(format!(
                        "zero-width statement {other:?} reached the worklist"
                    )))
                }
            }
        }

        // contextual phase: decompose into atoms, slice by time index,
        // split per family, and recurse
        let decomposed: Vec<Vec<ControlledStatement<'a>>> = contextual
            .iter()
            .map(|e| seq_decompose(&e.controls, e.stmt, &e.pointers, &e.accessible))
            .collect::<Result<_, _>>()?;
        let t_max = decomposed.iter().map(Vec::len).max().unwrap_or(0);
        for t in 0..t_max {
            let slice: Vec<ControlledStatement<'a>> = decomposed
                .iter()
                .filter_map(|d| d.get(t).cloned())
                .collect();
            let (plain, families) = procedure_split(self.prog, &self.analysis, slice)?;
            for e in plain {
                let frag = self.compile_stmt(e.stmt, &e.pointers, &e.accessible, &e.controls)?;
                c_m.extend(frag);
            }
            for (fam, entries) in families {
                let frag = self.optimize(VecDeque::from(entries), fam)?;
                c_m.extend(frag);
            }
        }

        c_l.extend(c_m);
        c_l.extend(c_r);
        Ok(c_l)
    }

    /// Merge a call whose register differs from the anchored one: fold
    /// the controls into the anchor ancilla and conjugate the region with
    /// a controlled permutation routing the caller's wires onto the
    /// anchored register position by position.
    fn routed_merge(
        &mut self,
        c_l: &mut Vec<Gate>,
        c_r: &mut VecDeque<Gate>,
        cs: &ControlStructure,
        anchor_wire: u32,
        from: &[u32],
        to: &[u32],
    ) {
        let route = self.alloc_wire();
        self.terms.insert(route, vec![cs.clone()]);
        c_l.push(Gate::not(anchor_wire, cs.clone()));
        c_l.push(Gate::not(route, cs.clone()));
        c_r.push_front(Gate::not(anchor_wire, cs.clone()));
        c_r.push_front(Gate::not(route, cs.clone()));

        let moves = position_map(from, to);
        let mut block = Vec::new();
        let next = &mut self.next_wire;
        emit_controlled_permutation(&mut block, &moves, (route, true), || {
            *next += 1;
            *next
        });
        for g in &block {
            // the block is self-inverse when reversed
            c_r.push_front(g.clone());
        }
        c_l.extend(block);
    }

    /// Pairwise-orthogonality invariant: a new pending entry must be
    /// orthogonal to every other pending entry.  Ancilla controls are
    /// expanded through their recorded activation terms; expansion is
    /// budgeted, and a pair that exceeds the budget is skipped rather
    /// than reported, so only definite violations surface.
    fn check_orthogonal_against<'b>(
        &self,
        entry: &ControlledStatement<'a>,
        others: impl Iterator<Item = &'b ControlledStatement<'a>>,
        family: usize,
    ) -> Result<(), CompileError>
    where
        'a: 'b,
    {
        for o in others {
            if let Some(false) = self.orthogonal(&entry.controls, &o.controls) {
                return Err(CompileError::Orthogonality {
                    proc: self.analysis.graph.procs[family].clone(),
                });
            }
        }
        Ok(())
    }

    fn orthogonal(&self, a: &ControlStructure, b: &ControlStructure) -> Option<bool> {
        if a.orthogonal(b) {
            return Some(true);
        }
        const CAP: usize = 512;
        let ta = self.expand(a, CAP)?;
        let tb = self.expand(b, CAP)?;
        Some(
            ta.iter()
                .all(|x| tb.iter().all(|y| x.orthogonal(y))),
        )
    }

    /// Expand ancilla controls into the disjunction of input-wire terms
    /// they stand for; `None` when the term count exceeds `cap`.
    fn expand(&self, cs: &ControlStructure, cap: usize) -> Option<Vec<ControlStructure>> {
        let anc = cs
            .iter()
            .find(|(w, p)| *p && self.terms.contains_key(w))
            .map(|(w, _)| w);
        match anc {
            None => Some(vec![cs.clone()]),
            Some(a) => {
                let rest = cs.remove(a);
                let mut out = Vec::new();
                for t in &self.terms[&a] {
                    if let Some(u) = rest.union(t) {
                        let sub = self.expand(&u, cap)?;
                        out.extend(sub);
                        if out.len() > cap {
                            return None;
                        }
                    }
                }
                Some(out)
            }
        }
    }
}

fn sub_entry<'a>(e: &ControlledStatement<'a>, s: &'a Statement) -> ControlledStatement<'a> {
    ControlledStatement {
        controls: e.controls.clone(),
        stmt: s,
        pointers: e.pointers.clone(),
        accessible: e.accessible.clone(),
    }
}

/// Complete the position-wise map `from[i] -> to[i]` into a bijection on
/// the union of both wire sets, pairing the leftovers in ascending order.
fn position_map(from: &[u32], to: &[u32]) -> BTreeMap<u32, u32> {
    debug_assert_eq!(from.len(), to.len());
    let mut map: BTreeMap<u32, u32> = from.iter().copied().zip(to.iter().copied()).collect();
    let sources: std::collections::BTreeSet<u32> = from.iter().copied().collect();
    let dests: std::collections::BTreeSet<u32> = to.iter().copied().collect();
    let extra_src: Vec<u32> = dests.difference(&sources).copied().collect();
    let extra_dst: Vec<u32> = sources.difference(&dests).copied().collect();
    debug_assert_eq!(extra_src.len(), extra_dst.len());
    for (s, d) in extra_src.into_iter().zip(extra_dst) {
        map.insert(s, d);
    }
    map.retain(|k, v| k != v);
    map
}

/// Rewrite a controlled statement into the list of its atomic elements
/// (unitary applications and procedure calls), resolving conditionals
/// and extending controls through quantum cases.
pub fn seq_decompose<'a>(
    cs: &ControlStructure,
    stmt: &'a Statement,
    l: &[u32],
    acc: &WireSet,
) -> Result<Vec<ControlledStatement<'a>>, CompileError> {
    Ok(match stmt {
        Statement::Skip => Vec::new(),
        Statement::Unitary { .. } | Statement::Call { .. } => vec![ControlledStatement {
            controls: cs.clone(),
            stmt,
            pointers: l.to_vec(),
            accessible: acc.clone(),
        }],
        Statement::Seq(a, b) => {
            let mut out = seq_decompose(cs, a, l, acc)?;
            out.extend(seq_decompose(cs, b, l, acc)?);
            out
        }
        Statement::If {
            cond,
            then_branch,
            else_branch,
        } => {
            let branch: &'a Statement = if eval_bool(cond, l) {
                then_branch
            } else {
                else_branch
            };
            seq_decompose(cs, branch, l, acc)?
        }
        Statement::QCase { control, zero, one } => {
            let w = eval_qubit(control, l);
            if !acc.contains(&w) {
                return Err(CompileError::Internal(
                    "statically erroneous qcase in seq decomposition".into(),
                ));
            }
            let mut inner = acc.clone();
            inner.remove(&w);
            let mut out = seq_decompose(&cs.with(w, false), zero, l, &inner)?;
            out.extend(seq_decompose(&cs.with(w, true), one, l, &inner)?);
            out
        }
        Statement::MultiQCase { .. } | Statement::MacroCall { .. } => {
            return Err(CompileError::NotDesugared)
        }
    })
}

/// Partition atomic controlled statements into those free of recursive
/// calls and one bucket per recursion family, in declaration order.
#[allow(clippy::type_complexity)]
pub fn procedure_split<'a>(
    prog: &Program,
    analysis: &ProgramAnalysis,
    entries: Vec<ControlledStatement<'a>>,
) -> Result<
    (
        Vec<ControlledStatement<'a>>,
        Vec<(usize, Vec<ControlledStatement<'a>>)>,
    ),
    CompileError,
> {
    let mut plain = Vec::new();
    let mut buckets: BTreeMap<usize, Vec<ControlledStatement<'a>>> = BTreeMap::new();
    for e in entries {
        match e.stmt {
            Statement::Unitary { .. } => plain.push(e),
            Statement::Call { proc, .. } => {
                let idx = prog.decl_index(proc).expect("name-checked");
                match analysis.graph.family(idx) {
                    Some(f) => buckets.entry(f).or_default().push(e),
                    None => plain.push(e),
                }
            }
            other => {
                return Err(CompileError::Internal(format!(
                    "non-atomic statement {other:?} in procedure split"
                )))
            }
        }
    }
    Ok((plain, buckets.into_iter().collect()))
}

// --- sequential baseline ----------------------------------------------------

struct Baseline<'a> {
    prog: &'a Program,
    budget: usize,
    gates: Vec<Gate>,
}

impl<'a> Baseline<'a> {
    fn stmt(
        &mut self,
        s: &Statement,
        l: &[u32],
        acc: &WireSet,
        cs: &ControlStructure,
    ) -> Result<(), CompileError> {
        if self.gates.len() > self.budget {
            return Err(CompileError::GateBudget {
                budget: self.budget,
            });
        }
        match s {
            Statement::Skip => Ok(()),
            Statement::Unitary {
                target,
                gate,
                phase,
                arg,
            } => {
                let w = eval_qubit(target, l);
                if !acc.contains(&w) {
                    return Err(CompileError::Internal(
                        "statically erroneous gate survived the pre-check".into(),
                    ));
                }
                let k = arg.as_ref().map(|a| eval_int(a, l));
                let theta = phase.map(|p| p.eval(k));
                self.gates.push(Gate::new(*gate, theta, w, cs.clone()));
                Ok(())
            }
            Statement::Seq(a, b) => {
                self.stmt(a, l, acc, cs)?;
                self.stmt(b, l, acc, cs)
            }
            Statement::If {
                cond,
                then_branch,
                else_branch,
            } => {
                let branch = if eval_bool(cond, l) {
                    then_branch
                } else {
                    else_branch
                };
                self.stmt(branch, l, acc, cs)
            }
            Statement::QCase { control, zero, one } => {
                let w = eval_qubit(control, l);
                if !acc.contains(&w) {
                    return Err(CompileError::Internal(
                        "statically erroneous qcase survived the pre-check".into(),
                    ));
                }
                let mut inner = acc.clone();
                inner.remove(&w);
                self.stmt(zero, l, &inner, &cs.with(w, false))?;
                self.stmt(one, l, &inner, &cs.with(w, true))
            }
            Statement::Call { proc, arg } => {
                let l2 = eval_set(arg, l);
                if l2.is_empty() {
                    return Ok(());
                }
                let idx = self.prog.decl_index(proc).expect("name-checked");
                let body = &self.prog.decls[idx].body;
                self.stmt(body, &l2, acc, cs)
            }
            Statement::MultiQCase { .. } | Statement::MacroCall { .. } => {
                Err(CompileError::NotDesugared)
            }
        }
    }
}

/// Exact gate count of the sequential baseline, computed by the same
/// structural recursion as materialization but sharing identical
/// `(procedure, pointers, accessible)` subtrees, in arbitrary precision.
pub fn baseline_count(p: &Program, n: usize) -> Result<SizeCount, CompileError> {
    if !p.is_desugared() {
        return Err(CompileError::NotDesugared);
    }
    let report = classify_program(p);
    if !report.wf {
        return Err(CompileError::Classification {
            strategy: "sequential",
            requirement: "a well-founded program".into(),
        });
    }
    match symbolic_run(p, n) {
        Ok(_) => {}
        Err(StaticRunError::Erroneous) => return Err(CompileError::Erroneous { n }),
        Err(StaticRunError::Diverged) => return Err(CompileError::Diverging { n }),
    }
    let mut memo: HashMap<(usize, PointerList, Vec<u32>), BigUint> = HashMap::new();
    let l: PointerList = (1..=n as u32).collect();
    let acc: WireSet = (1..=n as u32).collect();
    let gates = count_stmt(p, &p.body, &l, &acc, &mut memo);
    Ok(SizeCount {
        size: &gates + BigUint::from(n),
        gates,
        wires: n,
    })
}

fn count_stmt(
    p: &Program,
    s: &Statement,
    l: &[u32],
    acc: &WireSet,
    memo: &mut HashMap<(usize, PointerList, Vec<u32>), BigUint>,
) -> BigUint {
    match s {
        Statement::Skip => BigUint::zero(),
        Statement::Unitary { .. } => BigUint::from(1u32),
        Statement::Seq(a, b) => count_stmt(p, a, l, acc, memo) + count_stmt(p, b, l, acc, memo),
        Statement::If {
            cond,
            then_branch,
            else_branch,
        } => {
            let branch = if eval_bool(cond, l) {
                then_branch
            } else {
                else_branch
            };
            count_stmt(p, branch, l, acc, memo)
        }
        Statement::QCase { control, zero, one } => {
            let w = eval_qubit(control, l);
            let mut inner = acc.clone();
            inner.remove(&w);
            count_stmt(p, zero, l, &inner, memo) + count_stmt(p, one, l, &inner, memo)
        }
        Statement::Call { proc, arg } => {
            let l2 = eval_set(arg, l);
            if l2.is_empty() {
                return BigUint::zero();
            }
            let idx = p.decl_index(proc).expect("name-checked");
            let key = (idx, l2.clone(), acc.iter().copied().collect::<Vec<_>>());
            if let Some(c) = memo.get(&key) {
                return c.clone();
            }
            let c = count_stmt(p, &p.decls[idx].body, &l2, acc, memo);
            memo.insert(key, c.clone());
            c
        }
        Statement::MultiQCase { .. } | Statement::MacroCall { .. } => {
            unreachable!("count runs on desugared programs")
        }
    }
}
