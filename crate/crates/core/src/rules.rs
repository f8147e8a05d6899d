//! Rule validation and the orthogonality lint.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use thiserror::Error;

use crate::diag::Warning;
use crate::parser::RawRule;
use crate::signature::Signature;
use crate::term::{Path, Term};

/// A validated rewrite rule: head fully applied to patterns, β-normal
/// right-hand side, every right-hand-side variable bound on the left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub head: String,
    pub lhs_args: Vec<Term>,
    pub rhs: Term,
    /// Free variables of the pattern arguments (wildcard freshes
    /// included).
    pub vars: BTreeSet<String>,
    /// Index among the file's rules, in source order.
    pub index: usize,
    pub line: usize,
}

impl Rule {
    pub fn lhs(&self) -> Term {
        Term::apply(Term::symbol(&self.head), self.lhs_args.iter().cloned())
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("head of the left-hand side is not a definable function symbol")]
    HeadNotFunction,
    #[error("head `{head}` expects {expected} argument(s), found {found}")]
    UnsaturatedHead {
        head: String,
        expected: usize,
        found: usize,
    },
    #[error("argument {index} of the left-hand side is not a pattern")]
    NonPatternArgument { index: usize },
    #[error("right-hand side contains a beta-redex")]
    RhsNotBetaNormal,
    #[error("right-hand side variable `{name}` is not bound on the left")]
    UnboundRhsVariable { name: String },
    #[error("rule variable `{name}` does not occur in the left-hand side")]
    UnusedBinder { name: String },
}

/// True iff no subterm is an applied lambda.
pub fn beta_normal(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Symbol(_) | Term::Sort => true,
        Term::App(h, a) => {
            !matches!(h.as_ref(), Term::Lambda { .. }) && beta_normal(h) && beta_normal(a)
        }
        Term::Lambda {
            annotation, body, ..
        } => beta_normal(annotation) && beta_normal(body),
        Term::Product {
            domain, codomain, ..
        } => beta_normal(domain) && beta_normal(codomain),
    }
}

/// Check a raw rule against the signature and produce a `Rule`, or the
/// first violated constraint in a fixed order.
pub fn validate_rule(raw: &RawRule, index: usize, sig: &Signature) -> Result<Rule, RuleError> {
    let (head, args) = raw.lhs.spine();
    let Term::Symbol(head_name) = head else {
        return Err(RuleError::HeadNotFunction);
    };
    let info = sig.get(head_name).ok_or(RuleError::HeadNotFunction)?;
    if !info.is_function() {
        return Err(RuleError::HeadNotFunction);
    }
    if args.len() != info.arity {
        return Err(RuleError::UnsaturatedHead {
            head: head_name.clone(),
            expected: info.arity,
            found: args.len(),
        });
    }
    for (i, arg) in args.iter().enumerate() {
        if !sig.is_pattern(arg) {
            return Err(RuleError::NonPatternArgument { index: i + 1 });
        }
    }
    if !beta_normal(&raw.rhs) {
        return Err(RuleError::RhsNotBetaNormal);
    }
    let mut vars: BTreeSet<String> = BTreeSet::new();
    for arg in &args {
        vars.extend(arg.free_vars());
    }
    if let Some(name) = raw.rhs.free_vars().iter().find(|v| !vars.contains(*v)) {
        return Err(RuleError::UnboundRhsVariable { name: name.clone() });
    }
    if let Some(name) = raw.bound_vars.iter().find(|v| !vars.contains(*v)) {
        return Err(RuleError::UnusedBinder { name: name.clone() });
    }
    Ok(Rule {
        head: head_name.clone(),
        lhs_args: args.into_iter().cloned().collect(),
        rhs: raw.rhs.clone(),
        vars,
        index,
        line: raw.line,
    })
}

/// Warn about pattern heads that have rules of their own; pattern
/// matching on them is allowed but worth surfacing.
pub fn definable_pattern_heads(rule: &Rule, sig: &Signature) -> Vec<Warning> {
    fn heads(t: &Term, out: &mut BTreeSet<String>) {
        if let Term::Var(_) = t {
            return;
        }
        let (head, args) = t.spine();
        if let Term::Symbol(name) = head {
            out.insert(name.clone());
        }
        for a in args {
            heads(a, out);
        }
    }
    let mut names = BTreeSet::new();
    for arg in &rule.lhs_args {
        heads(arg, &mut names);
    }
    names
        .into_iter()
        .filter(|n| sig.get(n).map(|i| i.definable).unwrap_or(false))
        .map(|symbol| Warning::DefinablePatternHead {
            rule: rule.index,
            symbol,
        })
        .collect()
}

// --- first-order unification on binder-free patterns ---

type Subst = BTreeMap<String, Term>;

fn apply_subst(t: &Term, s: &Subst) -> Term {
    match t {
        Term::Var(x) => s.get(x).cloned().unwrap_or_else(|| t.clone()),
        Term::Symbol(_) | Term::Sort => t.clone(),
        Term::App(h, a) => Term::App(
            Box::new(apply_subst(h, s)),
            Box::new(apply_subst(a, s)),
        ),
        // patterns are binder-free; anything else is rigid for this lint
        _ => t.clone(),
    }
}

fn occurs(x: &str, t: &Term) -> bool {
    match t {
        Term::Var(y) => x == y,
        Term::Symbol(_) | Term::Sort => false,
        Term::App(h, a) => occurs(x, h) || occurs(x, a),
        _ => true,
    }
}

/// Syntactic unification of two binder-free terms.
fn unify(a: &Term, b: &Term) -> Option<Subst> {
    let mut subst = Subst::new();
    let mut worklist = vec![(a.clone(), b.clone())];
    while let Some((a, b)) = worklist.pop() {
        let a = apply_subst(&a, &subst);
        let b = apply_subst(&b, &subst);
        match (a, b) {
            (a, b) if a == b => {}
            (Term::Var(x), t) | (t, Term::Var(x)) => {
                if occurs(&x, &t) {
                    return None;
                }
                let binding: Subst = [(x, t)].into();
                for v in subst.values_mut() {
                    *v = apply_subst(v, &binding);
                }
                subst.extend(binding);
            }
            (Term::App(h1, a1), Term::App(h2, a2)) => {
                worklist.push((*h1, *h2));
                worklist.push((*a1, *a2));
            }
            _ => return None,
        }
    }
    Some(subst)
}

fn rename_vars(t: &Term, suffix: &str) -> Term {
    match t {
        Term::Var(x) => Term::Var(format!("{x}{suffix}")),
        Term::Symbol(_) | Term::Sort => t.clone(),
        Term::App(h, a) => Term::App(
            Box::new(rename_vars(h, suffix)),
            Box::new(rename_vars(a, suffix)),
        ),
        _ => t.clone(),
    }
}

/// Non-variable positions of a pattern term in the first-order sense:
/// whole spines only, heads and partial spines are not positions.
fn non_var_positions(t: &Term) -> Vec<(Path, &Term)> {
    fn walk<'a>(t: &'a Term, path: Path, out: &mut Vec<(Path, &'a Term)>) {
        if matches!(t, Term::Var(_)) {
            return;
        }
        out.push((path.clone(), t));
        let (_, args) = t.spine();
        let n = args.len();
        for (i, a) in args.into_iter().enumerate() {
            let mut p = path.clone();
            p.extend(Term::spine_arg_path(n, i));
            walk(a, p, out);
        }
    }
    let mut out = Vec::new();
    walk(t, Vec::new(), &mut out);
    out
}

/// Left-linearity and overlap warnings. Two distinct rules count as
/// overlapping when each left-hand side unifies with a non-variable
/// subterm of the other; each unordered pair is reported once, at the
/// smallest witnessing position, independent of input order.
pub fn orthogonality_lint(rules: &[Rule], _sig: &Signature) -> Vec<Warning> {
    let mut warnings = Vec::new();

    for rule in rules {
        let mut seen = BTreeSet::new();
        let mut dups = Vec::new();
        for arg in &rule.lhs_args {
            for v in var_occurrences(arg) {
                if !seen.insert(v.clone()) && !dups.contains(&v) {
                    dups.push(v);
                }
            }
        }
        if !dups.is_empty() {
            warnings.push(Warning::NonLeftLinear {
                rule: rule.index,
                names: dups,
            });
        }
    }

    // facts (outer, inner, position): inner's whole lhs unifies with the
    // subterm of outer's lhs at position; root positions only between
    // distinct rules. Two distinct rules are reported only when they
    // overlap each other in both directions; a rule overlaps itself at
    // any proper position.
    let mut facts: BTreeSet<(usize, usize, Path)> = BTreeSet::new();
    for outer in rules {
        let outer_lhs = outer.lhs();
        for inner in rules {
            let inner_lhs = rename_vars(&inner.lhs(), "#r");
            for (pos, sub) in non_var_positions(&outer_lhs) {
                if pos.is_empty() && outer.index == inner.index {
                    continue;
                }
                if unify(sub, &inner_lhs).is_some() {
                    facts.insert((outer.index, inner.index, pos));
                }
            }
        }
    }
    let mut reported: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (outer, inner, pos) in &facts {
        let mutual = outer == inner
            || facts.iter().any(|(o, i, _)| (o, i) == (inner, outer));
        if mutual && reported.insert((*outer.min(inner), *outer.max(inner))) {
            warnings.push(Warning::Overlap {
                rule: *outer,
                other_rule: *inner,
                position: pos.clone(),
            });
        }
    }

    warnings.sort_by_key(|w| w.sort_key());
    warnings
}

/// Every variable occurrence of a binder-free pattern, duplicates
/// preserved.
fn var_occurrences(t: &Term) -> Vec<String> {
    match t {
        Term::Var(x) => vec![x.clone()],
        Term::Symbol(_) | Term::Sort => Vec::new(),
        Term::App(h, a) => {
            let mut out = var_occurrences(h);
            out.extend(var_occurrences(a));
            out
        }
        Term::Lambda {
            annotation, body, ..
        } => {
            let mut out = var_occurrences(annotation);
            out.extend(var_occurrences(body));
            out
        }
        Term::Product {
            domain, codomain, ..
        } => {
            let mut out = var_occurrences(domain);
            out.extend(var_occurrences(codomain));
            out
        }
    }
}
