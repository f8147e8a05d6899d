//! Membership of right-hand sides in the closure of terms that are
//! computable whenever the left-hand side's arguments are. The closure
//! is structural: pattern variables and their accessible subterms seed
//! it, and it is closed under saturated function calls, application,
//! abstraction and products.

use std::collections::BTreeSet;
use std::fmt;

use crate::callgraph::strict_subterm;
use crate::rules::Rule;
use crate::signature::Signature;
use crate::term::{Path, Term};

/// Clause that admitted a node, recorded per position for diagnostics.
/// `Call` is tried before `Cons` so that every saturated function spine
/// is tagged as a call, in step with call extraction; constructors are
/// function symbols, which leaves `Cons` as a fallback shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Clause {
    Var,
    Acc,
    Call,
    Cons,
    App,
    Lam,
    Prod,
    Sort,
    Sym,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Clause::Var => "var",
            Clause::Acc => "acc",
            Clause::Call => "call",
            Clause::Cons => "cons",
            Clause::App => "app",
            Clause::Lam => "lam",
            Clause::Prod => "prod",
            Clause::Sort => "sort",
            Clause::Sym => "sym",
        };
        write!(f, "{s}")
    }
}

/// Per-rule context: the pattern variables seed the closure; binders in
/// the right-hand side enter scoped and renamed apart from them.
pub struct ClosureContext<'a> {
    pub rule: &'a Rule,
    base: &'a BTreeSet<String>,
    locally_bound: Vec<String>,
}

impl<'a> ClosureContext<'a> {
    pub fn new(rule: &'a Rule) -> ClosureContext<'a> {
        ClosureContext {
            rule,
            base: &rule.vars,
            locally_bound: Vec::new(),
        }
    }

    fn in_scope(&self, name: &str) -> bool {
        self.base.contains(name) || self.locally_bound.iter().any(|s| s == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CcFailure {
    pub position: Path,
    pub term: String,
}

/// Derivability result with the clause applied at each node, or the
/// first failing subterm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CcOutcome {
    pub ok: bool,
    pub trace: Vec<(Path, Clause)>,
    pub failure: Option<CcFailure>,
}

impl CcOutcome {
    pub fn call_positions(&self) -> BTreeSet<Path> {
        self.trace
            .iter()
            .filter(|(_, c)| *c == Clause::Call)
            .map(|(p, _)| p.clone())
            .collect()
    }
}

/// Check `t` for membership, tracing the clause used at every node.
/// Binders of `t` are assumed renamed apart from the rule variables
/// (see `derive` below for the entry point that guarantees it).
pub fn cc_member(t: &Term, ctx: &mut ClosureContext, sig: &Signature) -> CcOutcome {
    let mut trace = Vec::new();
    match derive(t, Vec::new(), ctx, sig, &mut trace) {
        Ok(()) => {
            trace.sort();
            CcOutcome {
                ok: true,
                trace,
                failure: None,
            }
        }
        Err(failure) => CcOutcome {
            ok: false,
            trace: Vec::new(),
            failure: Some(failure),
        },
    }
}

/// Convenience entry point: rename the right-hand side's binders apart
/// and check it.
pub fn check_rhs(rule: &Rule, sig: &Signature) -> CcOutcome {
    let rhs = rule.rhs.rename_binders_apart(&rule.vars);
    let mut ctx = ClosureContext::new(rule);
    cc_member(&rhs, &mut ctx, sig)
}

fn derive(
    t: &Term,
    path: Path,
    ctx: &mut ClosureContext,
    sig: &Signature,
    trace: &mut Vec<(Path, Clause)>,
) -> Result<(), CcFailure> {
    // remembers the first premise failure among inapplicable clauses
    let mut first_failure: Option<CcFailure> = None;

    // (var): pattern variable or locally bound binder
    if let Term::Var(name) = t {
        if ctx.in_scope(name) {
            trace.push((path, Clause::Var));
            return Ok(());
        }
        return Err(CcFailure {
            position: path,
            term: t.to_string(),
        });
    }

    // (acc): accessible subterm of some pattern argument
    if ctx
        .rule
        .lhs_args
        .iter()
        .any(|p| strict_subterm(t, p, sig))
    {
        trace.push((path, Clause::Acc));
        return Ok(());
    }

    let (head, args) = t.spine();

    // (call): function symbol applied to exactly its arity, arguments in
    // the closure; covers bare arity-0 function symbols
    if let Term::Symbol(name) = head {
        if let Some(info) = sig.get(name) {
            if info.is_function() && args.len() == info.arity {
                match derive_args(&args, &path, ctx, sig) {
                    Ok(checked) => {
                        trace.extend(checked);
                        trace.push((path, Clause::Call));
                        return Ok(());
                    }
                    Err(f) => {
                        first_failure.get_or_insert(f);
                    }
                }
            }
            // (cons): constructor fully applied; constructors are
            // object-level function symbols, so (call) normally
            // subsumes this clause
            if info.is_constructor && args.len() == info.arity {
                match derive_args(&args, &path, ctx, sig) {
                    Ok(checked) => {
                        trace.extend(checked);
                        trace.push((path, Clause::Cons));
                        return Ok(());
                    }
                    Err(f) => {
                        first_failure.get_or_insert(f);
                    }
                }
            }
        }
    }

    // (app): plain application of two members (variable-headed spines,
    // over-application steps)
    if let Term::App(h, a) = t {
        let mut sub = Vec::new();
        let mut ph = path.clone();
        ph.push(0);
        let mut pa = path.clone();
        pa.push(1);
        let attempt = derive(h, ph, ctx, sig, &mut sub)
            .and_then(|()| derive(a, pa, ctx, sig, &mut sub));
        match attempt {
            Ok(()) => {
                trace.extend(sub);
                trace.push((path, Clause::App));
                return Ok(());
            }
            Err(f) => {
                first_failure.get_or_insert(f);
            }
        }
    }

    // (lam) / (prod): annotation and body, binder locally bound
    match t {
        Term::Lambda {
            bound,
            annotation,
            body,
        } => {
            let mut sub = Vec::new();
            let mut p0 = path.clone();
            p0.push(0);
            let mut p1 = path.clone();
            p1.push(1);
            let attempt = derive(annotation, p0, ctx, sig, &mut sub).and_then(|()| {
                ctx.locally_bound.push(bound.clone());
                let r = derive(body, p1, ctx, sig, &mut sub);
                ctx.locally_bound.pop();
                r
            });
            match attempt {
                Ok(()) => {
                    trace.extend(sub);
                    trace.push((path, Clause::Lam));
                    return Ok(());
                }
                Err(f) => {
                    first_failure.get_or_insert(f);
                }
            }
        }
        Term::Product {
            bound,
            domain,
            codomain,
        } => {
            let mut sub = Vec::new();
            let mut p0 = path.clone();
            p0.push(0);
            let mut p1 = path.clone();
            p1.push(1);
            let attempt = derive(domain, p0, ctx, sig, &mut sub).and_then(|()| {
                ctx.locally_bound.push(bound.clone());
                let r = derive(codomain, p1, ctx, sig, &mut sub);
                ctx.locally_bound.pop();
                r
            });
            match attempt {
                Ok(()) => {
                    trace.extend(sub);
                    trace.push((path, Clause::Prod));
                    return Ok(());
                }
                Err(f) => {
                    first_failure.get_or_insert(f);
                }
            }
        }
        _ => {}
    }

    // (sort)
    if matches!(t, Term::Sort) {
        trace.push((path, Clause::Sort));
        return Ok(());
    }

    // (sym): any declared arity-0 symbol, e.g. a type constant used as
    // an annotation
    if let Term::Symbol(name) = t {
        if sig.get(name).map(|i| i.arity == 0).unwrap_or(false) {
            trace.push((path, Clause::Sym));
            return Ok(());
        }
    }

    Err(first_failure.unwrap_or(CcFailure {
        position: path,
        term: t.to_string(),
    }))
}

fn derive_args(
    args: &[&Term],
    path: &Path,
    ctx: &mut ClosureContext,
    sig: &Signature,
) -> Result<Vec<(Path, Clause)>, CcFailure> {
    let mut sub = Vec::new();
    let n = args.len();
    for (i, arg) in args.iter().enumerate() {
        let mut p = path.clone();
        p.extend(Term::spine_arg_path(n, i));
        derive(arg, p, ctx, sig, &mut sub)?;
    }
    Ok(sub)
}

/// Outcome of checking one rule's right-hand side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CcRuleReport {
    pub rule: usize,
    pub outcome: CcOutcome,
}

/// Check every rule; the system passes when every right-hand side is
/// derivable.
pub fn check_all(rules: &[Rule], sig: &Signature) -> Vec<CcRuleReport> {
    rules
        .iter()
        .map(|rule| CcRuleReport {
            rule: rule.index,
            outcome: check_rhs(rule, sig),
        })
        .collect()
}
