//! Relations between words, and the report produced when checking them.

use std::fmt;

use crate::scalar::Scalar;

/// A formal identity `Σ lhs = Σ rhs` between linear combinations of words.
#[derive(Clone, Debug)]
pub struct Relation<L> {
    pub name: String,
    pub lhs: Vec<(Scalar, Vec<L>)>,
    pub rhs: Vec<(Scalar, Vec<L>)>,
}

impl<L: Clone> Relation<L> {
    /// `lhs_word = rhs_word`, both with coefficient one.
    pub fn words(name: impl Into<String>, lhs: Vec<L>, rhs: Vec<L>) -> Self {
        Relation {
            name: name.into(),
            lhs: vec![(Scalar::one(), lhs)],
            rhs: vec![(Scalar::one(), rhs)],
        }
    }

    /// `lhs_word = c * rhs_word`.
    pub fn scaled(name: impl Into<String>, lhs: Vec<L>, c: Scalar, rhs: Vec<L>) -> Self {
        Relation {
            name: name.into(),
            lhs: vec![(Scalar::one(), lhs)],
            rhs: if c.is_zero() { Vec::new() } else { vec![(c, rhs)] },
        }
    }
}

/// Outcome of checking a family of relations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationReport {
    /// Number of distinct relations.
    pub relations: usize,
    /// Number of individual comparisons performed.
    pub checks: usize,
    /// Human-readable description of every failed comparison.
    pub failures: Vec<String>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(&mut self, other: RelationReport) {
        self.relations += other.relations;
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }

    pub(crate) fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} relations, {} checks, {} failures",
            self.relations,
            self.checks,
            self.failures.len()
        )?;
        for fail in self.failures.iter().take(10) {
            write!(f, "\n  {fail}")?;
        }
        if self.failures.len() > 10 {
            write!(f, "\n  ... {} more", self.failures.len() - 10)?;
        }
        Ok(())
    }
}
