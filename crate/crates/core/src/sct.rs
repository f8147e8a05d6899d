//! Transitive closure of the call graph and the size-change termination
//! verdict.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::callgraph::CallGraph;
use crate::matrix::CallMatrix;
use crate::term::Path;

/// Which self-loops must exhibit a strict decrease.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SctMode {
    /// Test idempotent self-loop matrices only (M·M = M). The classical
    /// criterion; accepts argument-permuting functions.
    #[default]
    Idempotent,
    /// Test every self-loop matrix. Stricter than necessary but kept as
    /// the literal reading of the criterion.
    AllLoops,
}

impl fmt::Display for SctMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SctMode::Idempotent => write!(f, "idempotent"),
            SctMode::AllLoops => write!(f, "all-loops"),
        }
    }
}

/// One step of a witness path: a concrete call site.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CallRef {
    pub caller: String,
    pub callee: String,
    pub matrix: String,
    pub rule: usize,
    pub position: Path,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SctFailure {
    pub symbol: String,
    pub matrix: CallMatrix,
    /// Base calls whose ordered product is the offending matrix.
    pub witness: Vec<CallRef>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SctStatus {
    SctHolds,
    SctFails,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: SctStatus,
    pub failures: Vec<SctFailure>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.status == SctStatus::SctHolds
    }
}

/// Least edge-set superset of the graph closed under composition.
/// Worklist over right-extension by base edges; each (f, h) slot holds
/// at most 3^(arity(f)·arity(h)) matrices, so the fixpoint terminates.
pub fn closure(graph: &CallGraph) -> CallGraph {
    let mut closed = graph.clone();
    let mut worklist: VecDeque<(String, String, CallMatrix)> = closed
        .edges
        .iter()
        .flat_map(|((f, g), ms)| {
            ms.iter().map(move |m| (f.clone(), g.clone(), m.clone()))
        })
        .collect();

    while let Some((f, g, a)) = worklist.pop_front() {
        let extensions: Vec<(String, CallMatrix)> = closed
            .base
            .range((g.clone(), String::new())..)
            .take_while(|((src, _), _)| *src == g)
            .flat_map(|((_, h), ms)| ms.iter().map(move |b| (h.clone(), b.clone())))
            .collect();
        for (h, b) in extensions {
            let c = a.mul(&b).expect("edge dimensions agree by construction");
            if closed
                .edges
                .entry((f.clone(), h.clone()))
                .or_default()
                .insert(c.clone())
            {
                worklist.push_back((f.clone(), h.clone(), c));
            }
        }
    }
    closed
}

/// Decide the size-change termination criterion on a closed graph.
/// Failures carry the shortest witness composition, found by
/// breadth-first search over the base edges.
pub fn sct_check(closed: &CallGraph, mode: SctMode) -> Verdict {
    let mut failures = Vec::new();
    for node in &closed.nodes {
        let Some(loops) = closed.edges.get(&(node.clone(), node.clone())) else {
            continue;
        };
        for m in loops {
            let tested = match mode {
                SctMode::AllLoops => true,
                SctMode::Idempotent => m.is_idempotent(),
            };
            if tested && !m.has_decreasing_diagonal() {
                failures.push(SctFailure {
                    symbol: node.clone(),
                    matrix: m.clone(),
                    witness: witness_path(closed, node, m),
                });
            }
        }
    }
    Verdict {
        status: if failures.is_empty() {
            SctStatus::SctHolds
        } else {
            SctStatus::SctFails
        },
        failures,
    }
}

/// Shortest sequence of base calls from `symbol` back to itself whose
/// product is `target`. Expansion order is deterministic, so ties break
/// the same way on every run.
fn witness_path(closed: &CallGraph, symbol: &str, target: &CallMatrix) -> Vec<CallRef> {
    type State = (String, CallMatrix);
    type Steps = Vec<(String, String, CallMatrix)>;
    let mut queue: VecDeque<(State, Steps)> = VecDeque::new();
    let mut visited: BTreeSet<State> = BTreeSet::new();
    // a self-loop matrix is square with the symbol's arity on both sides
    queue.push_back((
        (symbol.to_string(), CallMatrix::identity(target.rows())),
        Vec::new(),
    ));

    while let Some(((node, acc), steps)) = queue.pop_front() {
        for ((src, dst), ms) in closed.base.range((node.clone(), String::new())..) {
            if *src != node {
                break;
            }
            for m in ms {
                let next = acc.mul(m).expect("edge dimensions agree");
                let mut path = steps.clone();
                path.push((src.clone(), dst.clone(), m.clone()));
                if dst == symbol && next == *target {
                    return path
                        .into_iter()
                        .map(|(f, g, m)| {
                            let origin = closed
                                .origins
                                .get(&(f.clone(), g.clone(), m.clone()))
                                .cloned()
                                .unwrap_or((usize::MAX, Vec::new()));
                            CallRef {
                                caller: f,
                                callee: g,
                                matrix: m.to_string(),
                                rule: origin.0,
                                position: origin.1,
                            }
                        })
                        .collect();
                }
                let state = (dst.clone(), next.clone());
                if visited.insert(state.clone()) {
                    queue.push_back((state, path));
                }
            }
        }
    }
    Vec::new()
}

/// Graphviz rendering: nodes and edges in sorted order, matrices as
/// labels.
pub fn to_dot(graph: &CallGraph) -> String {
    if graph.nodes.is_empty() && graph.edges.is_empty() {
        return "digraph calls { }\n".to_string();
    }
    let mut out = String::from("digraph calls {\n");
    for node in &graph.nodes {
        out.push_str(&format!("  \"{}\";\n", escape(node)));
    }
    for ((f, g), ms) in &graph.edges {
        for m in ms {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                escape(f),
                escape(g),
                m
            ));
        }
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
