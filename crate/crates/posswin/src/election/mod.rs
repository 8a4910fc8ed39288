//! Shared election vocabulary: candidates, scoring vectors and rule
//! families, linear and partial orders, profiles, and score accounting.

mod order;
mod profile;
mod scoring;

pub use order::{LinearOrder, PartialOrder, Region};
pub use profile::{total_scores, winners, wins, Mode, PWInstance, PartialProfile, Scores};
pub use scoring::{is_pure_step, ScoringRuleFamily, ScoringVector};

use std::fmt;
use thiserror::Error;

/// Index of a candidate within one election instance.
///
/// Ids are dense indices into the instance's [`Candidates`] registry;
/// all orders, profiles, and solvers identify candidates by id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidateId(pub u32);

impl CandidateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for CandidateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Candidate registry: labels are unique, ids are assigned in insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidates {
    labels: Vec<String>,
}

impl Candidates {
    pub fn new() -> Self {
        Candidates { labels: Vec::new() }
    }

    pub fn from_labels<I, S>(labels: I) -> Result<Self, ElectionError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut c = Candidates::new();
        for l in labels {
            c.add(l)?;
        }
        Ok(c)
    }

    pub fn add(&mut self, label: impl Into<String>) -> Result<CandidateId, ElectionError> {
        let label = label.into();
        if self.labels.iter().any(|l| *l == label) {
            return Err(ElectionError::DuplicateCandidate(label));
        }
        let id = CandidateId(self.labels.len() as u32);
        self.labels.push(label);
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, id: CandidateId) -> &str {
        &self.labels[id.index()]
    }

    pub fn lookup(&self, label: &str) -> Option<CandidateId> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| CandidateId(i as u32))
    }

    pub fn ids(&self) -> impl Iterator<Item = CandidateId> {
        (0..self.labels.len() as u32).map(CandidateId)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

impl Default for Candidates {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ElectionError {
    #[error("duplicate candidate label `{0}`")]
    DuplicateCandidate(String),
    #[error("adding {0} > {1} would create a cycle")]
    Cycle(CandidateId, CandidateId),
    #[error("constraint relates a candidate to itself: {0}")]
    SelfRelation(CandidateId),
    #[error("candidate sets differ (expected {expected} candidates, got {got})")]
    CandidateMismatch { expected: usize, got: usize },
    #[error("vote is not a total order")]
    NotTotal,
    #[error("scoring vector must be non-increasing and non-negative")]
    BadScoringVector,
    #[error("scoring vector length {got} does not match candidate count {expected}")]
    RuleLengthMismatch { expected: usize, got: usize },
    #[error("family does not define a vector for {0} candidates")]
    UndefinedSize(usize),
    #[error("region size {size} does not match |A| = {set}")]
    RegionSizeMismatch { size: usize, set: usize },
    #[error("more than {0} linear extensions exist")]
    CapExceeded(u64),
}
