use super::{SolveError, SolveResult, SolveStats};
use crate::election::{wins, LinearOrder, PWInstance};

/// Per-vote extension lists for a joint enumeration, with fixed
/// single-extension votes split out so their scores are added once.
pub struct JointSpace {
    /// (vote index, extensions) for votes with at least two extensions.
    pub free: Vec<(usize, Vec<LinearOrder>)>,
    /// (vote index, the unique extension) for forced votes.
    pub fixed: Vec<(usize, LinearOrder)>,
    pub product: u64,
}

/// Materializes every vote's extensions, failing once the joint product
/// exceeds `cap`.
pub fn joint_extension_space(inst: &PWInstance, cap: u64) -> Result<JointSpace, SolveError> {
    let mut free = Vec::new();
    let mut fixed = Vec::new();
    let mut product: u64 = 1;
    for (i, vote) in inst.profile.votes.iter().enumerate() {
        let exts = vote.extensions(cap).map_err(|_| SolveError::CapExceeded(cap))?;
        if exts.len() == 1 {
            fixed.push((i, exts.into_iter().next().unwrap()));
        } else {
            product = product.saturating_mul(exts.len() as u64);
            if product > cap {
                return Err(SolveError::CapExceeded(cap));
            }
            free.push((i, exts));
        }
    }
    Ok(JointSpace {
        free,
        fixed,
        product,
    })
}

fn base_scores(space: &JointSpace, inst: &PWInstance) -> Vec<i64> {
    let m = inst.num_candidates();
    let mut scores = vec![0i64; m];
    for (_, ext) in &space.fixed {
        for (pos0, c) in ext.ranking().iter().enumerate() {
            scores[c.index()] += inst.rule.at(pos0 + 1);
        }
    }
    scores
}

/// Runs `f` on the scores of every joint extension; stops early when `f`
/// returns true and reports which choice did it.
fn for_each_joint<F>(space: &JointSpace, inst: &PWInstance, mut f: F) -> (Option<Vec<usize>>, u64)
where
    F: FnMut(&[i64]) -> bool,
{
    let k = space.free.len();
    let mut choice = vec![0usize; k];
    let mut scores = base_scores(space, inst);
    let mut nodes = 0u64;

    fn add(scores: &mut [i64], ext: &LinearOrder, rule: &crate::election::ScoringVector, sign: i64) {
        for (pos0, c) in ext.ranking().iter().enumerate() {
            scores[c.index()] += sign * rule.at(pos0 + 1);
        }
    }

    for (i, (_, exts)) in space.free.iter().enumerate() {
        add(&mut scores, &exts[0], &inst.rule, 1);
        let _ = i;
    }
    loop {
        nodes += 1;
        if f(&scores) {
            return (Some(choice), nodes);
        }
        // advance odometer
        let mut i = k;
        loop {
            if i == 0 {
                return (None, nodes);
            }
            i -= 1;
            let (_, exts) = &space.free[i];
            add(&mut scores, &exts[choice[i]], &inst.rule, -1);
            choice[i] += 1;
            if choice[i] < exts.len() {
                add(&mut scores, &exts[choice[i]], &inst.rule, 1);
                break;
            }
            choice[i] = 0;
            add(&mut scores, &exts[choice[i]], &inst.rule, 1);
        }
    }
}

fn assemble_witness(space: &JointSpace, inst: &PWInstance, choice: &[usize]) -> Vec<LinearOrder> {
    let n = inst.profile.votes.len();
    let mut out: Vec<Option<LinearOrder>> = vec![None; n];
    for (i, ext) in &space.fixed {
        out[*i] = Some(ext.clone());
    }
    for (slot, (i, exts)) in space.free.iter().enumerate() {
        out[*i] = Some(exts[choice[slot]].clone());
    }
    out.into_iter().map(Option::unwrap).collect()
}

/// Decides possible winner by enumerating every joint extension.
pub fn possible_winner_bruteforce(inst: &PWInstance, cap: u64) -> Result<SolveResult, SolveError> {
    let space = joint_extension_space(inst, cap)?;
    let (hit, nodes) = for_each_joint(&space, inst, |scores| {
        wins(scores, inst.distinguished, inst.mode)
    });
    Ok(SolveResult {
        answer: hit.is_some(),
        witness: hit.map(|c| assemble_witness(&space, inst, &c)),
        stats: SolveStats {
            nodes,
            flow: None,
        },
    })
}

/// Decides necessary winner (wins in every extension) by enumeration.
pub fn necessary_winner_bruteforce(inst: &PWInstance, cap: u64) -> Result<SolveResult, SolveError> {
    let space = joint_extension_space(inst, cap)?;
    let (counterexample, nodes) = for_each_joint(&space, inst, |scores| {
        !wins(scores, inst.distinguished, inst.mode)
    });
    Ok(SolveResult {
        answer: counterexample.is_none(),
        witness: None,
        stats: SolveStats {
            nodes,
            flow: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{
        CandidateId, Candidates, Mode, PWInstance, PartialOrder, PartialProfile, ScoringRuleFamily,
    };

    fn c(i: u32) -> CandidateId {
        CandidateId(i)
    }

    fn instance(
        labels: &[&str],
        votes: Vec<PartialOrder>,
        distinguished: u32,
        rule: ScoringRuleFamily,
        mode: Mode,
    ) -> PWInstance {
        let cands = Candidates::from_labels(labels.iter().copied()).unwrap();
        let m = cands.len();
        let mut profile = PartialProfile::new(cands);
        for v in votes {
            profile.push(v).unwrap();
        }
        PWInstance::new(profile, c(distinguished), rule.vector_for(m).unwrap(), mode).unwrap()
    }

    #[test]
    fn single_empty_vote_two_candidates() {
        let inst = instance(
            &["c", "a"],
            vec![PartialOrder::new(2)],
            0,
            ScoringRuleFamily::Plurality,
            Mode::CoWinner,
        );
        let r = possible_winner_bruteforce(&inst, 1000).unwrap();
        assert!(r.answer);
        let w = r.witness.unwrap();
        assert_eq!(w[0].ranking()[0], c(0));
    }

    #[test]
    fn necessary_single_vote_c_first() {
        let mut v = PartialOrder::new(2);
        v.add(c(0), c(1)).unwrap();
        let inst = instance(
            &["c", "a"],
            vec![v],
            0,
            ScoringRuleFamily::Plurality,
            Mode::CoWinner,
        );
        assert!(necessary_winner_bruteforce(&inst, 1000).unwrap().answer);
    }

    #[test]
    fn necessary_empty_profile_ties() {
        let inst = instance(
            &["c", "a"],
            vec![],
            0,
            ScoringRuleFamily::Plurality,
            Mode::CoWinner,
        );
        assert!(necessary_winner_bruteforce(&inst, 1000).unwrap().answer);
        let unique = instance(
            &["c", "a"],
            vec![],
            0,
            ScoringRuleFamily::Plurality,
            Mode::UniqueWinner,
        );
        assert!(!necessary_winner_bruteforce(&unique, 1000).unwrap().answer);
    }

    #[test]
    fn cap_exceeded_reported() {
        let votes = vec![PartialOrder::new(4), PartialOrder::new(4)];
        let inst = instance(
            &["a", "b", "c", "d"],
            votes,
            0,
            ScoringRuleFamily::Plurality,
            Mode::CoWinner,
        );
        assert!(matches!(
            possible_winner_bruteforce(&inst, 10),
            Err(SolveError::CapExceeded(10))
        ));
    }
}
