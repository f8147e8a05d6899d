//! Warnings surfaced in reports. Warnings never change a verdict on
//! their own; `--strict-partial` escalates partial applications.

use std::fmt;

use crate::term::{fmt_path, Path};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    /// A rule variable occurs more than once in one left-hand side.
    NonLeftLinear { rule: usize, names: Vec<String> },
    /// A non-variable subterm of `rule`'s left-hand side (at `position`)
    /// unifies with the left-hand side of `other_rule`.
    Overlap {
        rule: usize,
        other_rule: usize,
        position: Path,
    },
    /// A function symbol applied to fewer arguments than its arity in a
    /// right-hand side; no call edge is produced for it.
    PartialApplication {
        rule: usize,
        position: Path,
        symbol: String,
        given: usize,
        arity: usize,
    },
    /// A definable symbol used as a constructor inside a pattern.
    DefinablePatternHead { rule: usize, symbol: String },
}

impl Warning {
    pub fn kind(&self) -> &'static str {
        match self {
            Warning::NonLeftLinear { .. } => "non-left-linear",
            Warning::Overlap { .. } => "overlap",
            Warning::PartialApplication { .. } => "partial-application",
            Warning::DefinablePatternHead { .. } => "definable-pattern-head",
        }
    }

    pub fn rule(&self) -> usize {
        match self {
            Warning::NonLeftLinear { rule, .. }
            | Warning::Overlap { rule, .. }
            | Warning::PartialApplication { rule, .. }
            | Warning::DefinablePatternHead { rule, .. } => *rule,
        }
    }

    /// Term position the warning points at, when it has one: inside the
    /// rule's left-hand side for overlaps, inside the right-hand side
    /// for partial applications.
    pub fn position(&self) -> Option<&Path> {
        match self {
            Warning::Overlap { position, .. }
            | Warning::PartialApplication { position, .. } => Some(position),
            _ => None,
        }
    }

    /// Source-order sort key used to normalize warning lists.
    pub fn sort_key(&self) -> (usize, usize, Path, String) {
        let order = match self {
            Warning::NonLeftLinear { .. } => 0,
            Warning::Overlap { .. } => 1,
            Warning::PartialApplication { .. } => 2,
            Warning::DefinablePatternHead { .. } => 3,
        };
        let position = match self {
            Warning::Overlap { position, .. }
            | Warning::PartialApplication { position, .. } => position.clone(),
            _ => Vec::new(),
        };
        (self.rule(), order, position, format!("{self}"))
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NonLeftLinear { rule, names } => write!(
                f,
                "rule {}: left-hand side repeats variable(s) {}",
                rule,
                names.join(", ")
            ),
            Warning::Overlap {
                rule,
                other_rule,
                position,
            } => write!(
                f,
                "rules {} and {} overlap at position {} of rule {}'s left-hand side",
                rule,
                other_rule,
                fmt_path(position),
                rule
            ),
            Warning::PartialApplication {
                rule,
                position,
                symbol,
                given,
                arity,
            } => write!(
                f,
                "rule {}: `{}` applied to {} of {} arguments at {}; no call edge recorded",
                rule,
                symbol,
                given,
                arity,
                fmt_path(position)
            ),
            Warning::DefinablePatternHead { rule, symbol } => write!(
                f,
                "rule {}: pattern head `{}` has rewrite rules of its own",
                rule, symbol
            ),
        }
    }
}
