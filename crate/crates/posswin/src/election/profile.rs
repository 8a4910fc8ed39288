use super::{CandidateId, Candidates, ElectionError, LinearOrder, PartialOrder, ScoringVector};

/// Whether ties with the distinguished candidate count as winning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    CoWinner,
    UniqueWinner,
}

impl Mode {
    /// Offset applied to score thresholds: a rival may reach the
    /// distinguished score in co-winner mode but must stay below in
    /// unique-winner mode.
    pub fn is_unique(self) -> bool {
        matches!(self, Mode::UniqueWinner)
    }
}

/// Votes over one shared candidate set; linear votes are partial orders
/// that happen to be total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialProfile {
    pub candidates: Candidates,
    pub votes: Vec<PartialOrder>,
}

impl PartialProfile {
    pub fn new(candidates: Candidates) -> Self {
        PartialProfile {
            candidates,
            votes: Vec::new(),
        }
    }

    pub fn push(&mut self, vote: PartialOrder) -> Result<(), ElectionError> {
        if vote.len() != self.candidates.len() {
            return Err(ElectionError::CandidateMismatch {
                expected: self.candidates.len(),
                got: vote.len(),
            });
        }
        self.votes.push(vote);
        Ok(())
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }
}

/// A possible-winner question: profile, distinguished candidate, rule,
/// and tie-handling mode.
#[derive(Debug, Clone)]
pub struct PWInstance {
    pub profile: PartialProfile,
    pub distinguished: CandidateId,
    pub rule: ScoringVector,
    pub mode: Mode,
}

impl PWInstance {
    pub fn new(
        profile: PartialProfile,
        distinguished: CandidateId,
        rule: ScoringVector,
        mode: Mode,
    ) -> Result<Self, ElectionError> {
        if rule.len() != profile.num_candidates() {
            return Err(ElectionError::RuleLengthMismatch {
                expected: profile.num_candidates(),
                got: rule.len(),
            });
        }
        if distinguished.index() >= profile.num_candidates() {
            return Err(ElectionError::CandidateMismatch {
                expected: profile.num_candidates(),
                got: distinguished.index(),
            });
        }
        Ok(PWInstance {
            profile,
            distinguished,
            rule,
            mode,
        })
    }

    pub fn num_candidates(&self) -> usize {
        self.profile.num_candidates()
    }
}

/// Total score per candidate, indexed by candidate id.
pub type Scores = Vec<i64>;

/// Exact integer scores of a profile of linear orders.
pub fn total_scores(votes: &[LinearOrder], rule: &ScoringVector) -> Result<Scores, ElectionError> {
    let m = rule.len();
    let mut scores = vec![0i64; m];
    for v in votes {
        if v.len() != m {
            return Err(ElectionError::RuleLengthMismatch {
                expected: m,
                got: v.len(),
            });
        }
        for (pos0, c) in v.ranking().iter().enumerate() {
            scores[c.index()] += rule.at(pos0 + 1);
        }
    }
    Ok(scores)
}

/// Argmax set of a score table.
pub fn winners(scores: &[i64]) -> Vec<CandidateId> {
    let max = scores.iter().copied().max().unwrap_or(0);
    scores
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == max)
        .map(|(i, _)| CandidateId(i as u32))
        .collect()
}

/// Does `who` win under `mode` given the score table?
pub fn wins(scores: &[i64], who: CandidateId, mode: Mode) -> bool {
    let w = winners(scores);
    match mode {
        Mode::CoWinner => w.contains(&who),
        Mode::UniqueWinner => w == [who],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::ScoringRuleFamily;

    fn c(i: u32) -> CandidateId {
        CandidateId(i)
    }

    #[test]
    fn borda_single_vote() {
        let rule = ScoringRuleFamily::Borda.vector_for(3).unwrap();
        let v = LinearOrder::new(vec![c(0), c(1), c(2)]).unwrap();
        let s = total_scores(&[v], &rule).unwrap();
        assert_eq!(s, vec![2, 1, 0]);
    }

    #[test]
    fn plurality_two_identical_votes() {
        let rule = ScoringRuleFamily::Plurality.vector_for(2).unwrap();
        let v = LinearOrder::new(vec![c(0), c(1)]).unwrap();
        let s = total_scores(&[v.clone(), v], &rule).unwrap();
        assert_eq!(s, vec![2, 0]);
        assert_eq!(winners(&s), vec![c(0)]);
    }

    #[test]
    fn mode_semantics() {
        let scores = vec![2, 2, 1];
        assert!(wins(&scores, c(0), Mode::CoWinner));
        assert!(!wins(&scores, c(0), Mode::UniqueWinner));
        assert!(!wins(&scores, c(2), Mode::CoWinner));
    }
}
