//! From validated rules to the call graph: the constructor subterm
//! relation, per-call matrices, and call extraction from right-hand
//! sides.

use std::collections::{BTreeMap, BTreeSet};

use crate::diag::Warning;
use crate::matrix::{CallMatrix, SizeEntry};
use crate::rules::Rule;
use crate::signature::Signature;
use crate::term::{Path, Term};

/// Strict constructor subterm: `t` sits strictly below `p` through
/// constructor applications only.
pub fn strict_subterm(t: &Term, p: &Term, sig: &Signature) -> bool {
    let (head, args) = p.spine();
    let Term::Symbol(name) = head else {
        return false;
    };
    let Some(info) = sig.get(name) else {
        return false;
    };
    if !info.is_constructor || args.len() != info.arity {
        return false;
    }
    args.iter()
        .any(|q| t.alpha_eq(q) || strict_subterm(t, q, sig))
}

/// Size relation of a call argument `t` to a caller parameter `p`.
pub fn compare(t: &Term, p: &Term, sig: &Signature) -> SizeEntry {
    if strict_subterm(t, p, sig) {
        SizeEntry::Less
    } else if t.alpha_eq(p) {
        SizeEntry::Equal
    } else {
        SizeEntry::Unknown
    }
}

/// Entry (i, j) relates call argument j to caller parameter i.
pub fn call_matrix(lhs_args: &[Term], call_args: &[&Term], sig: &Signature) -> CallMatrix {
    CallMatrix::from_fn(lhs_args.len(), call_args.len(), |i, j| {
        compare(call_args[j], &lhs_args[i], sig)
    })
}

/// One call site: a function symbol fully applied inside a right-hand
/// side. The callee is always an object-level or definable type-level
/// function symbol; type constants are never callees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Call {
    pub caller: String,
    pub callee: String,
    pub matrix: CallMatrix,
    pub rule: usize,
    /// Path of the saturated spine node inside the right-hand side.
    pub position: Path,
}

/// Collect every call of a rule's right-hand side. The traversal enters
/// arguments, lambda annotations and bodies, and both sides of products.
/// Binders clashing with rule variables are renamed apart first, so
/// locally bound variables never compare equal to pattern variables.
pub fn extract_calls(rule: &Rule, sig: &Signature) -> (Vec<Call>, Vec<Warning>) {
    let rhs = rule.rhs.rename_binders_apart(&rule.vars);
    let mut calls = Vec::new();
    let mut warnings = Vec::new();
    walk(rule, &rhs, Vec::new(), sig, &mut calls, &mut warnings);
    calls.sort_by(|a, b| (a.rule, &a.position).cmp(&(b.rule, &b.position)));
    warnings.sort_by_key(|w| w.sort_key());
    (calls, warnings)
}

fn walk(
    rule: &Rule,
    t: &Term,
    path: Path,
    sig: &Signature,
    calls: &mut Vec<Call>,
    warnings: &mut Vec<Warning>,
) {
    match t {
        Term::Var(_) | Term::Sort => {}
        Term::Symbol(_) | Term::App(_, _) => {
            let (head, args) = t.spine();
            let n = args.len();
            if let Term::Symbol(name) = head {
                // symbols are declared after validation; type constants
                // are not function symbols and yield no calls
                if let Some(info) = sig.get(name).filter(|i| i.is_function()) {
                    if n >= info.arity {
                        let mut site = path.clone();
                        site.extend(std::iter::repeat_n(0, n - info.arity));
                        calls.push(Call {
                            caller: rule.head.clone(),
                            callee: name.clone(),
                            matrix: call_matrix(&rule.lhs_args, &args[..info.arity], sig),
                            rule: rule.index,
                            position: site,
                        });
                    } else if n > 0 {
                        warnings.push(Warning::PartialApplication {
                            rule: rule.index,
                            position: path.clone(),
                            symbol: name.clone(),
                            given: n,
                            arity: info.arity,
                        });
                    }
                }
            } else if !matches!(head, Term::Var(_)) {
                // ill-formed head (validation rejects these); search it
                let mut p = path.clone();
                p.extend(std::iter::repeat_n(0, n));
                walk(rule, head, p, sig, calls, warnings);
            }
            for (i, arg) in args.iter().enumerate() {
                let mut p = path.clone();
                p.extend(Term::spine_arg_path(n, i));
                walk(rule, arg, p, sig, calls, warnings);
            }
        }
        Term::Lambda {
            annotation, body, ..
        } => {
            let mut p0 = path.clone();
            p0.push(0);
            walk(rule, annotation, p0, sig, calls, warnings);
            let mut p1 = path;
            p1.push(1);
            walk(rule, body, p1, sig, calls, warnings);
        }
        Term::Product {
            domain, codomain, ..
        } => {
            let mut p0 = path.clone();
            p0.push(0);
            walk(rule, domain, p0, sig, calls, warnings);
            let mut p1 = path;
            p1.push(1);
            walk(rule, codomain, p1, sig, calls, warnings);
        }
    }
}

/// The call graph: nodes are the definable symbols plus every call
/// endpoint; each (caller, callee) edge carries the set of distinct
/// matrices seen for it. Base edges remember their least origin for
/// witness reconstruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallGraph {
    pub(crate) nodes: BTreeSet<String>,
    pub(crate) edges: BTreeMap<(String, String), BTreeSet<CallMatrix>>,
    pub(crate) base: BTreeMap<(String, String), BTreeSet<CallMatrix>>,
    pub(crate) origins: BTreeMap<(String, String, CallMatrix), (usize, Path)>,
}

impl CallGraph {
    pub fn build(calls: &[Call], sig: &Signature) -> CallGraph {
        let mut nodes: BTreeSet<String> = sig
            .iter()
            .filter(|i| i.definable)
            .map(|i| i.name.clone())
            .collect();
        let mut edges: BTreeMap<(String, String), BTreeSet<CallMatrix>> = BTreeMap::new();
        let mut origins: BTreeMap<(String, String, CallMatrix), (usize, Path)> =
            BTreeMap::new();
        for call in calls {
            nodes.insert(call.caller.clone());
            nodes.insert(call.callee.clone());
            edges
                .entry((call.caller.clone(), call.callee.clone()))
                .or_default()
                .insert(call.matrix.clone());
            let key = (
                call.caller.clone(),
                call.callee.clone(),
                call.matrix.clone(),
            );
            let origin = (call.rule, call.position.clone());
            origins
                .entry(key)
                .and_modify(|o| {
                    if origin < *o {
                        *o = origin.clone();
                    }
                })
                .or_insert(origin);
        }
        CallGraph {
            nodes,
            base: edges.clone(),
            edges,
            origins,
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(|s| s.as_str())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Total number of (caller, callee, matrix) triples.
    pub fn edge_count(&self) -> usize {
        self.edges.values().map(|s| s.len()).sum()
    }

    pub fn matrices(&self, caller: &str, callee: &str) -> Option<&BTreeSet<CallMatrix>> {
        self.edges
            .get(&(caller.to_string(), callee.to_string()))
    }

    pub fn edges(
        &self,
    ) -> impl Iterator<Item = (&str, &str, &CallMatrix)> {
        self.edges.iter().flat_map(|((f, g), ms)| {
            ms.iter().map(move |m| (f.as_str(), g.as_str(), m))
        })
    }
}
