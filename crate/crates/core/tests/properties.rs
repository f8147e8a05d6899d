//! Property tests for the structural invariants: equality up to
//! renaming, printer/parser round-trips, the subterm order and mode
//! monotonicity.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng as _, SeedableRng as _};
use rand_chacha::ChaCha8Rng;

use sct_core::analysis::{analyze, AnalysisOptions};
use sct_core::callgraph::{strict_subterm, Call, CallGraph};
use sct_core::matrix::{CallMatrix, SizeEntry};
use sct_core::parser::{build_signature, parse, parse_term, Item};
use sct_core::rules::beta_normal;
use sct_core::sct::{closure, sct_check, SctMode};
use sct_core::signature::{arity_of, Signature};
use sct_core::term::Term;

fn term_strategy() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop_oneof![Just("x"), Just("y"), Just("z")].prop_map(Term::var),
        prop_oneof![Just("A"), Just("c"), Just("f")].prop_map(Term::symbol),
        Just(Term::Sort),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Term::App(Box::new(a), Box::new(b))),
            (prop_oneof![Just("a"), Just("b"), Just("w")], inner.clone(), inner.clone())
                .prop_map(|(n, t, b)| Term::lambda(n, t, b)),
            (prop_oneof![Just("a"), Just("b"), Just("w")], inner.clone(), inner.clone())
                .prop_map(|(n, d, c)| Term::product(n, d, c)),
            (inner.clone(), inner.clone()).prop_map(|(d, c)| Term::arrow(d, c)),
        ]
    })
}

/// Consistently rename every binder to a fresh name; the result is
/// alpha-equivalent by construction.
fn rename_binders(t: &Term, counter: &mut usize, scope: &mut Vec<(String, String)>) -> Term {
    match t {
        Term::Var(x) => {
            let name = scope
                .iter()
                .rev()
                .find(|(orig, _)| orig == x)
                .map(|(_, fresh)| fresh.clone())
                .unwrap_or_else(|| x.clone());
            Term::Var(name)
        }
        Term::Symbol(_) | Term::Sort => t.clone(),
        Term::App(h, a) => Term::App(
            Box::new(rename_binders(h, counter, scope)),
            Box::new(rename_binders(a, counter, scope)),
        ),
        Term::Lambda {
            bound,
            annotation,
            body,
        } => {
            let annotation = rename_binders(annotation, counter, scope);
            *counter += 1;
            let fresh = format!("r{counter}");
            scope.push((bound.clone(), fresh.clone()));
            let body = rename_binders(body, counter, scope);
            scope.pop();
            Term::lambda(fresh, annotation, body)
        }
        Term::Product {
            bound,
            domain,
            codomain,
        } => {
            let domain = rename_binders(domain, counter, scope);
            *counter += 1;
            let fresh = format!("r{counter}");
            scope.push((bound.clone(), fresh.clone()));
            let codomain = rename_binders(codomain, counter, scope);
            scope.pop();
            Term::product(fresh, domain, codomain)
        }
    }
}

fn renamed(t: &Term) -> Term {
    rename_binders(t, &mut 0, &mut Vec::new())
}

proptest! {
    #[test]
    fn alpha_eq_is_reflexive(t in term_strategy()) {
        prop_assert!(t.alpha_eq(&t));
    }

    #[test]
    fn alpha_eq_is_symmetric(a in term_strategy(), b in term_strategy()) {
        prop_assert_eq!(a.alpha_eq(&b), b.alpha_eq(&a));
        let r = renamed(&a);
        prop_assert!(a.alpha_eq(&r) && r.alpha_eq(&a));
    }

    #[test]
    fn alpha_eq_is_transitive_on_renamings(t in term_strategy()) {
        let once = renamed(&t);
        let twice = renamed(&once);
        prop_assert!(t.alpha_eq(&once));
        prop_assert!(once.alpha_eq(&twice));
        prop_assert!(t.alpha_eq(&twice));
    }

    #[test]
    fn printed_terms_reparse_alpha_equal(t in term_strategy()) {
        let printed = t.to_string();
        let free: Vec<String> = t.free_vars();
        let scope: Vec<&str> = free.iter().map(|s| s.as_str()).collect();
        let reparsed = parse_term(&printed, &scope)
            .unwrap_or_else(|e| panic!("`{printed}` does not reparse: {e}"));
        prop_assert!(
            t.alpha_eq(&reparsed),
            "`{}` reparsed to `{}`",
            printed,
            reparsed
        );
    }
}

fn pattern_signature() -> Signature {
    build_signature(
        &parse("N : Type.\n0 : N.\nS : N -> N.\npair : N -> N -> N.\n").unwrap(),
    )
    .unwrap()
}

fn pattern_strategy() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop_oneof![Just("x"), Just("y")].prop_map(Term::var),
        Just(Term::symbol("0")),
    ];
    leaf.prop_recursive(4, 20, 2, |inner| {
        prop_oneof![
            inner
                .clone()
                .prop_map(|p| Term::apply(Term::symbol("S"), [p])),
            (inner.clone(), inner.clone())
                .prop_map(|(p, q)| Term::apply(Term::symbol("pair"), [p, q])),
        ]
    })
}

/// Independent enumeration of the strict constructor subterms: the
/// arguments of a constructor application and, recursively, theirs.
fn enumerate_subterms(p: &Term, out: &mut Vec<Term>) {
    let (_, args) = p.spine();
    for arg in args {
        out.push(arg.clone());
        enumerate_subterms(arg, out);
    }
}

proptest! {
    #[test]
    fn subterm_order_matches_enumeration(p in pattern_strategy()) {
        let sig = pattern_signature();
        prop_assert!(!strict_subterm(&p, &p, &sig), "irreflexive");
        let mut subterms = Vec::new();
        enumerate_subterms(&p, &mut subterms);
        for t in &subterms {
            prop_assert!(strict_subterm(t, &p, &sig), "{t} must sit below {p}");
            prop_assert!(t.size() < p.size(), "size must shrink");
        }
        // soundness: nothing outside the enumeration is accepted
        for probe in subterms.iter().chain(std::iter::once(&p)) {
            let listed = subterms.iter().any(|t| t.alpha_eq(probe));
            prop_assert_eq!(strict_subterm(probe, &p, &sig), listed);
        }
    }

    #[test]
    fn subterm_order_is_transitive(p in pattern_strategy()) {
        let sig = pattern_signature();
        let mut middle = Vec::new();
        enumerate_subterms(&p, &mut middle);
        for m in &middle {
            let mut inner = Vec::new();
            enumerate_subterms(m, &mut inner);
            for t in &inner {
                prop_assert!(
                    strict_subterm(t, &p, &sig),
                    "{t} below {m} below {p} must be below {p}"
                );
            }
        }
    }
}

const CORPUS: [&str; 7] = [
    "int.dk",
    "typelevel.dk",
    "peano.dk",
    "loop_self.dk",
    "loop_swap.dk",
    "loop_mutual.dk",
    "perm_decrease.dk",
];

fn read_corpus(name: &str) -> String {
    let path = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn corpus_roundtrips_through_the_printer() {
    for name in CORPUS {
        let file = parse(&read_corpus(name)).unwrap();
        let reparsed = parse(&file.to_string()).unwrap();
        assert_eq!(file.items.len(), reparsed.items.len(), "{name}");
        for (a, b) in file.items.iter().zip(reparsed.items.iter()) {
            match (a, b) {
                (Item::Declaration(x), Item::Declaration(y)) => {
                    assert_eq!(x.name, y.name, "{name}");
                    assert_eq!(x.def_flag, y.def_flag, "{name}");
                    assert!(x.type_expr.alpha_eq(&y.type_expr), "{name}: {}", x.name);
                }
                (Item::Rule(x), Item::Rule(y)) => {
                    assert!(x.lhs.alpha_eq(&y.lhs), "{name}: {} vs {}", x.lhs, y.lhs);
                    assert!(x.rhs.alpha_eq(&y.rhs), "{name}: {} vs {}", x.rhs, y.rhs);
                }
                _ => panic!("{name}: item kinds diverged"),
            }
        }
    }
}

#[test]
fn validated_rules_satisfy_their_invariants() {
    for name in CORPUS {
        let analysis = analyze(name, &read_corpus(name), AnalysisOptions::default()).unwrap();
        for rule in &analysis.rules {
            let info = analysis.signature.get(&rule.head).unwrap();
            assert_eq!(rule.lhs_args.len(), info.arity, "{name}");
            assert_eq!(info.arity, arity_of(&info.declared_type), "{name}");
            for arg in &rule.lhs_args {
                assert!(analysis.signature.is_pattern(arg), "{name}");
            }
            assert!(beta_normal(&rule.rhs), "{name}");
            let free: BTreeSet<String> = rule.rhs.free_var_set();
            assert!(free.is_subset(&rule.vars), "{name}");
        }
    }
}

#[test]
fn extraction_is_stable_across_runs() {
    for name in CORPUS {
        let a = analyze(name, &read_corpus(name), AnalysisOptions::default()).unwrap();
        let b = analyze(name, &read_corpus(name), AnalysisOptions::default()).unwrap();
        assert_eq!(a.calls, b.calls, "{name}");
        assert_eq!(a.warnings, b.warnings, "{name}");
    }
}

/// Heavier version of the closure oracle from the acceptance suite;
/// run on demand with `cargo test -p sct-core --test properties -- --ignored`.
#[test]
#[ignore]
fn closure_oracle_stress() {
    use std::collections::{BTreeMap, BTreeSet};

    fn pairwise_fixpoint(
        base: &BTreeMap<(String, String), BTreeSet<CallMatrix>>,
    ) -> BTreeMap<(String, String), BTreeSet<CallMatrix>> {
        let mut closed = base.clone();
        loop {
            let mut additions: Vec<((String, String), CallMatrix)> = Vec::new();
            for ((f, g), ms) in &closed {
                for ((g2, h), ns) in &closed {
                    if g != g2 {
                        continue;
                    }
                    for a in ms {
                        for b in ns {
                            let c = a.mul(b).unwrap();
                            let known = closed
                                .get(&(f.clone(), h.clone()))
                                .map(|s| s.contains(&c))
                                .unwrap_or(false);
                            if !known {
                                additions.push(((f.clone(), h.clone()), c));
                            }
                        }
                    }
                }
            }
            if additions.is_empty() {
                return closed;
            }
            for (key, m) in additions {
                closed.entry(key).or_default().insert(m);
            }
        }
    }

    for seed in 0..2000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let node_count = rng.gen_range(1..=5usize);
        let arities: Vec<usize> = (0..node_count).map(|_| rng.gen_range(0..=3)).collect();
        let calls: Vec<Call> = (0..rng.gen_range(0..=8usize))
            .map(|rule| {
                let src = rng.gen_range(0..node_count);
                let dst = rng.gen_range(0..node_count);
                Call {
                    caller: format!("f{src}"),
                    callee: format!("f{dst}"),
                    matrix: CallMatrix::from_fn(arities[src], arities[dst], |_, _| {
                        match rng.gen_range(0..3) {
                            0 => SizeEntry::Less,
                            1 => SizeEntry::Equal,
                            _ => SizeEntry::Unknown,
                        }
                    }),
                    rule,
                    position: Vec::new(),
                }
            })
            .collect();
        let graph = CallGraph::build(&calls, &Signature::new());
        let closed = closure(&graph);
        let collect = |g: &CallGraph| -> BTreeMap<(String, String), BTreeSet<CallMatrix>> {
            g.edges().fold(BTreeMap::new(), |mut acc, (f, h, m)| {
                acc.entry((f.to_string(), h.to_string()))
                    .or_default()
                    .insert(m.clone());
                acc
            })
        };
        assert_eq!(
            collect(&closed),
            pairwise_fixpoint(&collect(&graph)),
            "seed {seed}"
        );
    }
}

#[test]
fn idempotent_mode_is_at_least_as_permissive() {
    // corpus files
    for name in CORPUS {
        let source = read_corpus(name);
        let all = analyze(
            name,
            &source,
            AnalysisOptions {
                mode: SctMode::AllLoops,
                ..AnalysisOptions::default()
            },
        )
        .unwrap();
        let idem = analyze(name, &source, AnalysisOptions::default()).unwrap();
        if all.sct.holds() {
            assert!(idem.sct.holds(), "{name}: idempotent rejected what all-loops accepts");
        }
    }
    // and random graphs
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..50 {
        let node_count = rng.gen_range(1..=4usize);
        let arities: Vec<usize> = (0..node_count).map(|_| rng.gen_range(0..=2)).collect();
        let calls: Vec<Call> = (0..rng.gen_range(0..=6usize))
            .map(|rule| {
                let src = rng.gen_range(0..node_count);
                let dst = rng.gen_range(0..node_count);
                Call {
                    caller: format!("f{src}"),
                    callee: format!("f{dst}"),
                    matrix: CallMatrix::from_fn(arities[src], arities[dst], |_, _| {
                        match rng.gen_range(0..3) {
                            0 => SizeEntry::Less,
                            1 => SizeEntry::Equal,
                            _ => SizeEntry::Unknown,
                        }
                    }),
                    rule,
                    position: Vec::new(),
                }
            })
            .collect();
        let closed = closure(&CallGraph::build(&calls, &Signature::new()));
        if sct_check(&closed, SctMode::AllLoops).holds() {
            assert!(sct_check(&closed, SctMode::Idempotent).holds());
        }
    }
}
