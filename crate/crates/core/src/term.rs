//! Terms of the rewrite language: a single AST shared by the kind, type and
//! object levels, with binders carried by name.

use std::collections::BTreeSet;
use std::fmt;

/// Position of a subterm: child indices from the root. `App` numbers its
/// head 0 and argument 1, `Lambda` its annotation 0 and body 1, `Product`
/// its domain 0 and codomain 1.
pub type Path = Vec<usize>;

/// Render a path as a dotted index list, `(root)` for the empty path.
pub fn fmt_path(path: &[usize]) -> String {
    if path.is_empty() {
        "(root)".to_string()
    } else {
        path.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// A bound occurrence: rule variable or lambda/product binder.
    Var(String),
    /// A reference to a declared symbol.
    Symbol(String),
    /// Binary application; n-ary application is a left-nested spine.
    App(Box<Term>, Box<Term>),
    Lambda {
        bound: String,
        annotation: Box<Term>,
        body: Box<Term>,
    },
    Product {
        bound: String,
        domain: Box<Term>,
        codomain: Box<Term>,
    },
    /// The sort `Type`.
    Sort,
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn symbol(name: impl Into<String>) -> Term {
        Term::Symbol(name.into())
    }

    pub fn lambda(bound: impl Into<String>, annotation: Term, body: Term) -> Term {
        Term::Lambda {
            bound: bound.into(),
            annotation: Box::new(annotation),
            body: Box::new(body),
        }
    }

    pub fn product(bound: impl Into<String>, domain: Term, codomain: Term) -> Term {
        Term::Product {
            bound: bound.into(),
            domain: Box::new(domain),
            codomain: Box::new(codomain),
        }
    }

    /// `A -> B` sugar: a product whose binder cannot be referenced.
    pub fn arrow(domain: Term, codomain: Term) -> Term {
        Term::product("", domain, codomain)
    }

    /// Left-fold `head u1 ... un` into a binary spine.
    pub fn apply(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter()
            .fold(head, |h, a| Term::App(Box::new(h), Box::new(a)))
    }

    /// Unfold an application spine into its head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut head = self;
        let mut args = Vec::new();
        while let Term::App(h, a) = head {
            args.push(a.as_ref());
            head = h;
        }
        args.reverse();
        (head, args)
    }

    /// Path of the `i`-th spine argument (0-based) relative to the spine
    /// root, given the total argument count.
    pub fn spine_arg_path(total: usize, index: usize) -> Path {
        let mut p = vec![0; total - 1 - index];
        p.push(1);
        p
    }

    /// Variables occurring free in the term, in first-occurrence order.
    pub fn free_vars(&self) -> Vec<String> {
        fn walk(t: &Term, scope: &mut Vec<String>, out: &mut Vec<String>) {
            match t {
                Term::Var(x) => {
                    if !scope.iter().any(|s| s == x) && !out.iter().any(|s| s == x) {
                        out.push(x.clone());
                    }
                }
                Term::Symbol(_) | Term::Sort => {}
                Term::App(h, a) => {
                    walk(h, scope, out);
                    walk(a, scope, out);
                }
                Term::Lambda {
                    bound,
                    annotation,
                    body,
                } => {
                    walk(annotation, scope, out);
                    scope.push(bound.clone());
                    walk(body, scope, out);
                    scope.pop();
                }
                Term::Product {
                    bound,
                    domain,
                    codomain,
                } => {
                    walk(domain, scope, out);
                    scope.push(bound.clone());
                    walk(codomain, scope, out);
                    scope.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn free_var_set(&self) -> BTreeSet<String> {
        self.free_vars().into_iter().collect()
    }

    /// Number of AST nodes; strict subterms are strictly smaller.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Symbol(_) | Term::Sort => 1,
            Term::App(h, a) => 1 + h.size() + a.size(),
            Term::Lambda {
                annotation, body, ..
            } => 1 + annotation.size() + body.size(),
            Term::Product {
                domain, codomain, ..
            } => 1 + domain.size() + codomain.size(),
        }
    }

    /// Subterm at `path`, if the path exists.
    pub fn at_path(&self, path: &[usize]) -> Option<&Term> {
        let mut t = self;
        for &i in path {
            t = match (t, i) {
                (Term::App(h, _), 0) => h,
                (Term::App(_, a), 1) => a,
                (Term::Lambda { annotation, .. }, 0) => annotation,
                (Term::Lambda { body, .. }, 1) => body,
                (Term::Product { domain, .. }, 0) => domain,
                (Term::Product { codomain, .. }, 1) => codomain,
                _ => return None,
            };
        }
        Some(t)
    }

    /// Structural equality up to renaming of bound variables. Free
    /// variables and symbols are compared by name; `Var` and `Symbol`
    /// never coincide.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        fn go(a: &Term, b: &Term, sa: &mut Vec<String>, sb: &mut Vec<String>) -> bool {
            match (a, b) {
                (Term::Var(x), Term::Var(y)) => {
                    let ia = sa.iter().rposition(|s| s == x);
                    let ib = sb.iter().rposition(|s| s == y);
                    match (ia, ib) {
                        (Some(i), Some(j)) => i == j,
                        (None, None) => x == y,
                        _ => false,
                    }
                }
                (Term::Symbol(x), Term::Symbol(y)) => x == y,
                (Term::Sort, Term::Sort) => true,
                (Term::App(h1, a1), Term::App(h2, a2)) => {
                    go(h1, h2, sa, sb) && go(a1, a2, sa, sb)
                }
                (
                    Term::Lambda {
                        bound: x,
                        annotation: t1,
                        body: b1,
                    },
                    Term::Lambda {
                        bound: y,
                        annotation: t2,
                        body: b2,
                    },
                ) => {
                    if !go(t1, t2, sa, sb) {
                        return false;
                    }
                    sa.push(x.clone());
                    sb.push(y.clone());
                    let r = go(b1, b2, sa, sb);
                    sa.pop();
                    sb.pop();
                    r
                }
                (
                    Term::Product {
                        bound: x,
                        domain: t1,
                        codomain: b1,
                    },
                    Term::Product {
                        bound: y,
                        domain: t2,
                        codomain: b2,
                    },
                ) => {
                    if !go(t1, t2, sa, sb) {
                        return false;
                    }
                    sa.push(x.clone());
                    sb.push(y.clone());
                    let r = go(b1, b2, sa, sb);
                    sa.pop();
                    sb.pop();
                    r
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new(), &mut Vec::new())
    }

    /// Rename every binder whose name clashes with `avoid` (or with an
    /// enclosing renamed binder) to a fresh `name#k`. `#` cannot occur in
    /// source identifiers, so renamed binders never collide with rule
    /// variables. Structure and positions are preserved.
    pub fn rename_binders_apart(&self, avoid: &BTreeSet<String>) -> Term {
        fn fresh(base: &str, taken: &BTreeSet<String>) -> String {
            (1..)
                .map(|k| format!("{base}#{k}"))
                .find(|c| !taken.contains(c))
                .expect("unbounded candidate stream")
        }
        fn go(t: &Term, avoid: &BTreeSet<String>, scope: &mut Vec<(String, String)>) -> Term {
            match t {
                Term::Var(x) => {
                    let name = scope
                        .iter()
                        .rev()
                        .find(|(orig, _)| orig == x)
                        .map(|(_, renamed)| renamed.clone())
                        .unwrap_or_else(|| x.clone());
                    Term::Var(name)
                }
                Term::Symbol(_) | Term::Sort => t.clone(),
                Term::App(h, a) => Term::App(
                    Box::new(go(h, avoid, scope)),
                    Box::new(go(a, avoid, scope)),
                ),
                Term::Lambda {
                    bound,
                    annotation,
                    body,
                } => {
                    let annotation = go(annotation, avoid, scope);
                    let taken: BTreeSet<String> = avoid
                        .iter()
                        .cloned()
                        .chain(scope.iter().map(|(_, r)| r.clone()))
                        .collect();
                    let renamed = if taken.contains(bound) {
                        fresh(bound, &taken)
                    } else {
                        bound.clone()
                    };
                    scope.push((bound.clone(), renamed.clone()));
                    let body = go(body, avoid, scope);
                    scope.pop();
                    Term::lambda(renamed, annotation, body)
                }
                Term::Product {
                    bound,
                    domain,
                    codomain,
                } => {
                    let domain = go(domain, avoid, scope);
                    let taken: BTreeSet<String> = avoid
                        .iter()
                        .cloned()
                        .chain(scope.iter().map(|(_, r)| r.clone()))
                        .collect();
                    let renamed = if taken.contains(bound) {
                        fresh(bound, &taken)
                    } else {
                        bound.clone()
                    };
                    scope.push((bound.clone(), renamed.clone()));
                    let codomain = go(codomain, avoid, scope);
                    scope.pop();
                    Term::product(renamed, domain, codomain)
                }
            }
        }
        go(self, avoid, &mut Vec::new())
    }
}

// Printing follows the surface grammar: products at the outermost level,
// then application, then atoms; anything lower is parenthesized.
enum Prec {
    Term,
    App,
    Atom,
}

fn fmt_term(t: &Term, prec: Prec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Var(x) => write!(f, "{x}"),
        Term::Symbol(s) => write!(f, "{s}"),
        Term::Sort => write!(f, "Type"),
        Term::App(_, _) => {
            let parens = matches!(prec, Prec::Atom);
            if parens {
                write!(f, "(")?;
            }
            let (head, args) = t.spine();
            fmt_term(head, Prec::Atom, f)?;
            for a in args {
                write!(f, " ")?;
                fmt_term(a, Prec::Atom, f)?;
            }
            if parens {
                write!(f, ")")?;
            }
            Ok(())
        }
        Term::Lambda {
            bound,
            annotation,
            body,
        } => {
            let parens = !matches!(prec, Prec::Term);
            if parens {
                write!(f, "(")?;
            }
            write!(f, "{bound} : ")?;
            fmt_term(annotation, Prec::Atom, f)?;
            write!(f, " => ")?;
            fmt_term(body, Prec::Term, f)?;
            if parens {
                write!(f, ")")?;
            }
            Ok(())
        }
        Term::Product {
            bound,
            domain,
            codomain,
        } => {
            let parens = !matches!(prec, Prec::Term);
            if parens {
                write!(f, "(")?;
            }
            if !bound.is_empty() && codomain.free_vars().iter().any(|v| v == bound) {
                write!(f, "({bound} : ")?;
                fmt_term(domain, Prec::Term, f)?;
                write!(f, ") -> ")?;
            } else {
                fmt_term(domain, Prec::App, f)?;
                write!(f, " -> ")?;
            }
            fmt_term(codomain, Prec::Term, f)?;
            if parens {
                write!(f, ")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self, Prec::Term, f)
    }
}
