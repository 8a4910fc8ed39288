//! Hardness-gadget instance generators: each construction turns an
//! exact-cover or multicolored-clique instance into a possible-winner
//! instance for a matching class of scoring vectors, together with a
//! witness builder that maps source solutions to winning extensions.

mod classify;
mod different_values;
mod mc;
mod mc_gadget;
mod ratio3;
mod two_values;
mod veto_plurality;
mod x210;
mod x3c;

pub use classify::{classify_scoring_vector, CaseTag};
pub use different_values::reduce_x3c_different_values;
pub use mc::{pad_mc, triangle, MCInstance, Vertex};
pub use mc_gadget::{reduce_mc_plateau, reduce_mc_reversed};
pub use ratio3::reduce_x3c_ratio3;
pub use two_values::reduce_x3c_two_values;
pub use veto_plurality::{reduce_x3c_veto_plurality_large, reduce_x3c_veto_plurality_small};
pub use x210::reduce_x3c_210;
pub use x3c::X3CInstance;

use crate::election::{
    CandidateId, Candidates, ElectionError, LinearOrder, PWInstance, PartialOrder,
    PartialProfile, ScoringVector,
};
use crate::realize::{realize, MaxPartialScoreSpec, RealizeError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("source instance unusable: {0}")]
    InvalidSource(String),
    #[error("scoring vector does not fit this construction: {0}")]
    ShapeViolated(String),
    #[error("scoring vector offers {got} distinct score values but the construction needs {needed}")]
    InsufficientDistinctValues { needed: usize, got: usize },
    #[error("multicolored-clique instance is not uniform; pad it first")]
    NonUniformInstance,
    #[error("witness requested for an invalid source solution: {0}")]
    BadSolution(String),
    #[error(transparent)]
    Realize(#[from] RealizeError),
    #[error(transparent)]
    Election(#[from] ElectionError),
}

/// A solution of the source instance, fed to the witness builder.
#[derive(Debug, Clone)]
pub enum SourceSolution {
    /// Indices into the subset family forming an exact cover.
    Cover(Vec<usize>),
    /// One vertex per color class forming a multicolored clique.
    Clique(Vec<Vertex>),
}

/// An exact integer identity the construction must satisfy.
#[derive(Debug, Clone)]
pub struct TightnessCheck {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
}

impl TightnessCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub struct ReductionMeta {
    pub construction: &'static str,
    /// The construction's instance-size function: the vector length (or
    /// distinct-value / plateau-length requirement) this source needs.
    pub f_value: usize,
    /// The first `n_partial` votes of the instance are the partial votes;
    /// the rest are the realized linear votes.
    pub n_partial: usize,
    pub roles: Vec<(CandidateId, String)>,
    pub spec: MaxPartialScoreSpec,
    pub tightness: Vec<TightnessCheck>,
}

type WitnessFn = Box<dyn Fn(&SourceSolution) -> Result<Vec<LinearOrder>, ReductionError> + Send + Sync>;

/// Maps a source solution to a full winning extension profile.
pub struct WitnessBuilder {
    partial_witness: WitnessFn,
    linear_tail: Vec<LinearOrder>,
}

impl WitnessBuilder {
    /// Extensions for every vote of the generated instance: the partial
    /// votes extended per the construction, followed by the linear votes.
    pub fn build(&self, solution: &SourceSolution) -> Result<Vec<LinearOrder>, ReductionError> {
        let mut out = (self.partial_witness)(solution)?;
        out.extend(self.linear_tail.iter().cloned());
        Ok(out)
    }
}

pub struct ReductionOutput {
    pub instance: PWInstance,
    pub witness_builder: WitnessBuilder,
    pub meta: ReductionMeta,
}

/// Shared assembly: realizes the score targets, appends the linear votes
/// to the profile, and packages the witness builder.
#[allow(clippy::too_many_arguments)]
pub(crate) fn assemble(
    candidates: Candidates,
    partial_votes: Vec<PartialOrder>,
    distinguished: CandidateId,
    spec: MaxPartialScoreSpec,
    rule: ScoringVector,
    construction: &'static str,
    f_value: usize,
    roles: Vec<(CandidateId, String)>,
    tightness: Vec<TightnessCheck>,
    partial_witness: WitnessFn,
) -> Result<ReductionOutput, ReductionError> {
    let linear = realize(&partial_votes, distinguished, &spec, &rule)?;
    let n_partial = partial_votes.len();
    let mut profile = PartialProfile::new(candidates);
    for v in partial_votes {
        profile.push(v)?;
    }
    for l in &linear {
        profile.push(l.as_partial())?;
    }
    let mode = spec.mode;
    let instance = PWInstance::new(profile, distinguished, rule, mode)?;
    Ok(ReductionOutput {
        instance,
        witness_builder: WitnessBuilder {
            partial_witness,
            linear_tail: linear,
        },
        meta: ReductionMeta {
            construction,
            f_value,
            n_partial,
            roles,
            spec,
            tightness,
        },
    })
}

/// Completes a vote to a linear order with the given candidates pinned to
/// the leading positions, every remaining candidate following in
/// topological order with ascending-id tie-break.
pub(crate) fn complete_with_prefix(
    vote: &PartialOrder,
    prefix: &[CandidateId],
) -> Result<LinearOrder, ReductionError> {
    complete_prefix_suffix(vote, prefix, &[])
}

/// As `complete_with_prefix`, but also pins trailing positions.
pub(crate) fn complete_prefix_suffix(
    vote: &PartialOrder,
    prefix: &[CandidateId],
    suffix: &[CandidateId],
) -> Result<LinearOrder, ReductionError> {
    let n = vote.len();
    let mut placed = vec![false; n];
    let mut ranking: Vec<CandidateId> = Vec::with_capacity(n);
    for &p in prefix {
        placed[p.index()] = true;
        ranking.push(p);
    }
    let reserved: Vec<CandidateId> = suffix.to_vec();
    for &s in &reserved {
        placed[s.index()] = true;
    }
    while ranking.len() + reserved.len() < n {
        let next = (0..n)
            .find(|&x| {
                !placed[x] && (0..n).all(|a| placed[a] || !vote.above_idx(a, x))
            })
            .ok_or_else(|| {
                ReductionError::BadSolution("witness placement violates the vote".into())
            })?;
        placed[next] = true;
        ranking.push(CandidateId(next as u32));
    }
    ranking.extend_from_slice(&reserved);
    let order = LinearOrder::new(ranking).map_err(ReductionError::Election)?;
    if !order.extends(vote).map_err(ReductionError::Election)? {
        return Err(ReductionError::BadSolution(
            "witness placement violates the vote".into(),
        ));
    }
    Ok(order)
}

/// Standard rule pick for constructions whose vector length must equal
/// the candidate count: callers may also pass their own conforming rule.
pub(crate) fn expect_rule_len(rule: &ScoringVector, m: usize) -> Result<(), ReductionError> {
    if rule.len() != m {
        return Err(ReductionError::ShapeViolated(format!(
            "vector length {} but the construction produces {m} candidates",
            rule.len()
        )));
    }
    Ok(())
}

pub(crate) fn require(cond: bool, msg: &str) -> Result<(), ReductionError> {
    if cond {
        Ok(())
    } else {
        Err(ReductionError::ShapeViolated(msg.to_string()))
    }
}

