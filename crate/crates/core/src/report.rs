//! The JSON report. Field names are a stable interface; maps and lists
//! are emitted in deterministic order so identical inputs produce
//! byte-identical output.

use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{overall_consistent, Analysis, Overall};
use crate::sct::{CallRef, SctStatus};
use crate::term::Path;

#[derive(Debug, Clone, Serialize)]
pub struct SymbolReport {
    pub name: String,
    pub level: String,
    pub arity: usize,
    pub constructor: bool,
    pub definable: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RuleReport {
    pub head: String,
    pub lhs: String,
    pub rhs: String,
    pub status: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CallReport {
    pub caller: String,
    pub callee: String,
    pub matrix: String,
    pub rule: usize,
    pub position: Path,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosureReport {
    pub edge_count: usize,
    pub nodes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SctFailureReport {
    pub symbol: String,
    pub matrix: String,
    pub witness: Vec<CallRef>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SctReport {
    pub mode: String,
    pub status: String,
    pub failures: Vec<SctFailureReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CcReport {
    pub rule: usize,
    pub status: String,
    pub trace_or_failure: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct WarningReport {
    pub kind: String,
    pub rule: usize,
    pub position: Option<Path>,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub file: String,
    pub symbols: Vec<SymbolReport>,
    pub rules: Vec<RuleReport>,
    pub calls: Vec<CallReport>,
    pub closure: ClosureReport,
    pub sct: SctReport,
    /// `null` when the closure check was skipped.
    pub cc: Option<Vec<CcReport>>,
    pub warnings: Vec<WarningReport>,
    pub overall: String,
}

fn overall_str(overall: Overall) -> &'static str {
    match overall {
        Overall::Accept => "accept",
        Overall::Reject => "reject",
        Overall::Error => "error",
    }
}

impl Report {
    pub fn build(analysis: &Analysis) -> Report {
        assert!(
            overall_consistent(analysis),
            "overall verdict must follow from the sub-verdicts"
        );
        let symbols = analysis
            .signature
            .iter()
            .map(|info| SymbolReport {
                name: info.name.clone(),
                level: info.level.to_string(),
                arity: info.arity,
                constructor: info.is_constructor,
                definable: info.definable,
            })
            .collect();
        let rules = analysis
            .rule_statuses
            .iter()
            .map(|status| {
                let (head, _) = status.raw.lhs.spine();
                RuleReport {
                    head: match head {
                        crate::term::Term::Symbol(s) => s.clone(),
                        other => other.to_string(),
                    },
                    lhs: status.raw.lhs.to_string(),
                    rhs: status.raw.rhs.to_string(),
                    status: match &status.result {
                        Ok(_) => "ok".to_string(),
                        Err(e) => format!("error: {e}"),
                    },
                }
            })
            .collect();
        let calls = analysis
            .calls
            .iter()
            .map(|call| CallReport {
                caller: call.caller.clone(),
                callee: call.callee.clone(),
                matrix: call.matrix.to_string(),
                rule: call.rule,
                position: call.position.clone(),
            })
            .collect();
        let closure = ClosureReport {
            edge_count: analysis.closed.edge_count(),
            nodes: analysis.closed.node_count(),
        };
        let sct = SctReport {
            mode: analysis.options.mode.to_string(),
            status: match analysis.sct.status {
                SctStatus::SctHolds => "holds".to_string(),
                SctStatus::SctFails => "fails".to_string(),
            },
            failures: analysis
                .sct
                .failures
                .iter()
                .map(|f| SctFailureReport {
                    symbol: f.symbol.clone(),
                    matrix: f.matrix.to_string(),
                    witness: f.witness.clone(),
                })
                .collect(),
        };
        let cc = analysis.cc.as_ref().map(|reports| {
            reports
                .iter()
                .map(|r| CcReport {
                    rule: r.rule,
                    status: if r.outcome.ok { "pass" } else { "fail" }.to_string(),
                    trace_or_failure: if r.outcome.ok {
                        Value::Array(
                            r.outcome
                                .trace
                                .iter()
                                .map(|(p, c)| {
                                    json!({ "position": p, "clause": c.to_string() })
                                })
                                .collect(),
                        )
                    } else {
                        let failure = r.outcome.failure.as_ref().expect("failed outcomes carry one");
                        json!({ "position": failure.position, "term": failure.term })
                    },
                })
                .collect()
        });
        let warnings = analysis
            .warnings
            .iter()
            .map(|w| WarningReport {
                kind: w.kind().to_string(),
                rule: w.rule(),
                position: w.position().cloned(),
                message: w.to_string(),
            })
            .collect();
        Report {
            file: analysis.file.clone(),
            symbols,
            rules,
            calls,
            closure,
            sct,
            cc,
            warnings,
            overall: overall_str(analysis.overall).to_string(),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}
