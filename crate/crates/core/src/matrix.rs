//! Size-comparison entries and call matrices over {-1, 0, ∞}.
//!
//! Entries compose along a call path (∞ annihilates, a single -1 makes
//! the whole path strictly decreasing) and alternative paths combine by
//! taking the best entry. This is the tropical min/saturated-plus
//! structure; with the max reading ∞ would absorb every product and the
//! diagonal test would never see a decrease.

use std::fmt;

use thiserror::Error;

/// Relation of one call argument to one caller parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SizeEntry {
    /// Strict constructor subterm (-1).
    Less,
    /// Syntactically equal argument (0).
    Equal,
    /// No size relation established (∞).
    Unknown,
}

impl SizeEntry {
    /// Composition along a path: ∞ annihilates, decreases saturate
    /// at -1.
    pub fn compose(self, other: SizeEntry) -> SizeEntry {
        use SizeEntry::*;
        match (self, other) {
            (Unknown, _) | (_, Unknown) => Unknown,
            (Less, _) | (_, Less) => Less,
            (Equal, Equal) => Equal,
        }
    }

    /// Choice between alternative paths: keep the better relation.
    pub fn choice(self, other: SizeEntry) -> SizeEntry {
        self.min(other)
    }
}

impl fmt::Display for SizeEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SizeEntry::Less => write!(f, "-1"),
            SizeEntry::Equal => write!(f, "0"),
            SizeEntry::Unknown => write!(f, "?"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("matrix dimensions do not compose: {lhs_rows}x{lhs_cols} * {rhs_rows}x{rhs_cols}")]
pub struct DimensionMismatch {
    pub lhs_rows: usize,
    pub lhs_cols: usize,
    pub rhs_rows: usize,
    pub rhs_cols: usize,
}

/// Dense rows×cols grid; row i, column j relate caller parameter i to
/// call argument j. 0×n and m×0 matrices are legal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CallMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<SizeEntry>,
}

impl CallMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<SizeEntry>) -> CallMatrix {
        assert_eq!(entries.len(), rows * cols, "entry count must match shape");
        CallMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> SizeEntry,
    ) -> CallMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        CallMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Equal on the diagonal, Unknown elsewhere: the identity of
    /// composition.
    pub fn identity(n: usize) -> CallMatrix {
        CallMatrix::from_fn(n, n, |i, j| {
            if i == j {
                SizeEntry::Equal
            } else {
                SizeEntry::Unknown
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> SizeEntry {
        self.entries[i * self.cols + j]
    }

    /// Matrix product in the tropical structure: best composition over
    /// the middle index.
    pub fn mul(&self, other: &CallMatrix) -> Result<CallMatrix, DimensionMismatch> {
        if self.cols != other.rows {
            return Err(DimensionMismatch {
                lhs_rows: self.rows,
                lhs_cols: self.cols,
                rhs_rows: other.rows,
                rhs_cols: other.cols,
            });
        }
        Ok(CallMatrix::from_fn(self.rows, other.cols, |i, k| {
            (0..self.cols)
                .map(|j| self.get(i, j).compose(other.get(j, k)))
                .fold(SizeEntry::Unknown, SizeEntry::choice)
        }))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_idempotent(&self) -> bool {
        self.is_square()
            && self
                .mul(self)
                .map(|sq| sq == *self)
                .unwrap_or(false)
    }

    pub fn has_decreasing_diagonal(&self) -> bool {
        (0..self.rows.min(self.cols)).any(|i| self.get(i, i) == SizeEntry::Less)
    }
}

/// Textual form used in reports and DOT labels: rows separated by `;`,
/// entries `-1|0|?`, e.g. `[-1 ?; ? 0]`.
impl fmt::Display for CallMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}
