//! End-to-end pipeline: parse, build the signature, validate rules,
//! extract calls, close the graph and decide both criteria.

use thiserror::Error;

use crate::callgraph::{extract_calls, Call, CallGraph};
use crate::cc::{check_all, CcRuleReport};
use crate::diag::Warning;
use crate::parser::{build_signature, parse, ParseError, RawRule, SignatureError};
use crate::rules::{definable_pattern_heads, orthogonality_lint, validate_rule, Rule, RuleError};
use crate::sct::{closure, sct_check, SctMode, Verdict};
use crate::signature::Signature;

/// Errors that prevent any analysis: the file does not parse or the
/// signature cannot be built.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FrontendError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

#[derive(Debug, Clone, Copy)]
pub struct AnalysisOptions {
    pub mode: SctMode,
    /// Check right-hand sides for closure membership (on by default).
    pub check_cc: bool,
    /// Run the orthogonality lint.
    pub lint: bool,
    /// Treat partial-application warnings as rejections.
    pub strict_partial: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            mode: SctMode::Idempotent,
            check_cc: true,
            lint: false,
            strict_partial: false,
        }
    }
}

/// The verdict is Accept only from a fully clean run; Reject means the
/// criterion could not establish termination, never that the system
/// loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Overall {
    Accept,
    Reject,
    Error,
}

impl Overall {
    pub fn exit_code(self) -> i32 {
        match self {
            Overall::Accept => 0,
            Overall::Reject => 1,
            Overall::Error => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RuleStatus {
    pub raw: RawRule,
    pub result: Result<Rule, RuleError>,
}

#[derive(Debug)]
pub struct Analysis {
    pub file: String,
    pub options: AnalysisOptions,
    pub signature: Signature,
    pub rule_statuses: Vec<RuleStatus>,
    pub rules: Vec<Rule>,
    pub calls: Vec<Call>,
    pub graph: CallGraph,
    pub closed: CallGraph,
    pub sct: Verdict,
    /// None when the closure check was skipped.
    pub cc: Option<Vec<CcRuleReport>>,
    pub warnings: Vec<Warning>,
    pub overall: Overall,
}

impl Analysis {
    pub fn has_validation_errors(&self) -> bool {
        self.rule_statuses.iter().any(|s| s.result.is_err())
    }
}

/// Compute the overall verdict from the sub-verdicts; `Analysis` keeps
/// this the single source of truth.
fn overall_of(
    has_errors: bool,
    sct: &Verdict,
    cc: &Option<Vec<CcRuleReport>>,
    warnings: &[Warning],
    strict_partial: bool,
) -> Overall {
    if has_errors {
        return Overall::Error;
    }
    let cc_ok = cc
        .as_ref()
        .map(|rs| rs.iter().all(|r| r.outcome.ok))
        .unwrap_or(true);
    let partial_hit = strict_partial
        && warnings
            .iter()
            .any(|w| matches!(w, Warning::PartialApplication { .. }));
    if sct.holds() && cc_ok && !partial_hit {
        Overall::Accept
    } else {
        Overall::Reject
    }
}

pub fn analyze(
    file: &str,
    source: &str,
    options: AnalysisOptions,
) -> Result<Analysis, FrontendError> {
    let parsed = parse(source)?;
    let signature = build_signature(&parsed)?;

    let mut rule_statuses = Vec::new();
    let mut rules = Vec::new();
    for (index, raw) in parsed.rules().enumerate() {
        let result = validate_rule(raw, index, &signature);
        if let Ok(rule) = &result {
            rules.push(rule.clone());
        }
        rule_statuses.push(RuleStatus {
            raw: raw.clone(),
            result,
        });
    }

    let mut calls = Vec::new();
    let mut warnings = Vec::new();
    for rule in &rules {
        let (mut rule_calls, mut rule_warnings) = extract_calls(rule, &signature);
        calls.append(&mut rule_calls);
        warnings.append(&mut rule_warnings);
        warnings.extend(definable_pattern_heads(rule, &signature));
    }
    if options.lint {
        warnings.extend(orthogonality_lint(&rules, &signature));
    }
    warnings.sort_by_key(|w| w.sort_key());

    let graph = CallGraph::build(&calls, &signature);
    let closed = closure(&graph);
    let sct = sct_check(&closed, options.mode);
    let cc = options.check_cc.then(|| check_all(&rules, &signature));

    let has_errors = rule_statuses.iter().any(|s| s.result.is_err());
    let overall = overall_of(has_errors, &sct, &cc, &warnings, options.strict_partial);

    Ok(Analysis {
        file: file.to_string(),
        options,
        signature,
        rule_statuses,
        rules,
        calls,
        graph,
        closed,
        sct,
        cc,
        warnings,
        overall,
    })
}

/// Recheck the overall invariant; used when emitting reports.
pub fn overall_consistent(analysis: &Analysis) -> bool {
    analysis.overall
        == overall_of(
            analysis.has_validation_errors(),
            &analysis.sct,
            &analysis.cc,
            &analysis.warnings,
            analysis.options.strict_partial,
        )
}
