use super::{SolveError, SolveResult, SolveStats};
use crate::election::{CandidateId, LinearOrder, PWInstance, PartialOrder, ScoringVector};

/// Assignment of every candidate to one run of equal score values.
///
/// Runs are indexed top-down; an assignment is feasible for a vote when
/// some extension places exactly the assigned candidates in each run's
/// positions, which holds iff every constraint points from a lower run
/// index to a greater-or-equal one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockAssignment {
    pub block_of: Vec<u16>,
}

#[derive(Debug, Clone, Copy)]
struct Block {
    value: i64,
    len: usize,
}

fn blocks_of(rule: &ScoringVector) -> Vec<Block> {
    rule.runs()
        .into_iter()
        .map(|(s, e, value)| Block {
            value,
            len: e - s + 1,
        })
        .collect()
}

/// Enumerates the feasible block assignments of one vote, peeling the
/// smaller of the outermost remaining blocks each step. Fails once more
/// than `cap` assignments exist.
pub fn vote_assignments(
    vote: &PartialOrder,
    rule: &ScoringVector,
    cap: u64,
) -> Result<Vec<BlockAssignment>, SolveError> {
    let blocks = blocks_of(rule);
    let n = vote.len();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut assignment = vec![u16::MAX; n];
    let mut out = Vec::new();
    peel(
        vote,
        &blocks,
        0,
        blocks.len() - 1,
        &mut remaining,
        &mut assignment,
        &mut out,
        cap,
    )?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn peel(
    vote: &PartialOrder,
    blocks: &[Block],
    lo: usize,
    hi: usize,
    remaining: &mut Vec<usize>,
    assignment: &mut Vec<u16>,
    out: &mut Vec<BlockAssignment>,
    cap: u64,
) -> Result<(), SolveError> {
    if lo == hi {
        for &x in remaining.iter() {
            assignment[x] = lo as u16;
        }
        if out.len() as u64 >= cap {
            return Err(SolveError::AssignmentCapExceeded(cap));
        }
        out.push(BlockAssignment {
            block_of: assignment.clone(),
        });
        return Ok(());
    }
    // peel whichever outer block branches less
    let (idx, from_top) = if blocks[lo].len <= blocks[hi].len {
        (lo, true)
    } else {
        (hi, false)
    };
    let k = blocks[idx].len;
    let mut chosen = Vec::with_capacity(k);
    pick_closed(
        vote, blocks, lo, hi, idx, from_top, k, 0, &mut chosen, remaining, assignment, out, cap,
    )
}

/// Chooses a `k`-subset of `remaining` that is upward closed (peeling the
/// top block) or downward closed (peeling the bottom block), then recurses.
#[allow(clippy::too_many_arguments)]
fn pick_closed(
    vote: &PartialOrder,
    blocks: &[Block],
    lo: usize,
    hi: usize,
    idx: usize,
    from_top: bool,
    k: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    remaining: &mut Vec<usize>,
    assignment: &mut Vec<u16>,
    out: &mut Vec<BlockAssignment>,
    cap: u64,
) -> Result<(), SolveError> {
    if chosen.len() == k {
        if !closed_in(vote, chosen, remaining, from_top) {
            return Ok(());
        }
        for &x in chosen.iter() {
            assignment[x] = idx as u16;
        }
        let rest: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|x| !chosen.contains(x))
            .collect();
        let mut rest = rest;
        let (nlo, nhi) = if from_top { (lo + 1, hi) } else { (lo, hi - 1) };
        return peel(vote, blocks, nlo, nhi, &mut rest, assignment, out, cap);
    }
    let need = k - chosen.len();
    for i in start..remaining.len() {
        if remaining.len() - i < need {
            break;
        }
        chosen.push(remaining[i]);
        pick_closed(
            vote, blocks, lo, hi, idx, from_top, k, i + 1, chosen, remaining, assignment, out, cap,
        )?;
        chosen.pop();
    }
    Ok(())
}

fn closed_in(vote: &PartialOrder, set: &[usize], remaining: &[usize], top: bool) -> bool {
    set.iter().all(|&x| {
        remaining.iter().all(|&y| {
            let related = if top {
                vote.above_idx(y, x) // an ancestor of a top member must join it
            } else {
                vote.above_idx(x, y) // a descendant of a bottom member must join it
            };
            !related || set.contains(&y)
        })
    })
}

struct SearchVote {
    index: usize,
    assignments: Vec<BlockAssignment>,
    // per candidate: min and max achievable value in this vote
    min_val: Vec<i64>,
    max_val: Vec<i64>,
}

/// Exact possible-winner decision for arbitrary vectors.
///
/// Candidates are assigned to equal-value position runs per vote;
/// depth-first search over the votes with optimistic score pruning and,
/// when the distinguished candidate's score is fixed, an aggregate
/// capacity cut. `budget` bounds the number of search nodes; exceeding it
/// leaves the answer unknown.
pub fn possible_winner_plateau_search(
    inst: &PWInstance,
    budget: u64,
) -> Result<SolveResult, SolveError> {
    let m = inst.num_candidates();
    let c = inst.distinguished;
    let blocks = blocks_of(&inst.rule);
    let values: Vec<i64> = blocks.iter().map(|b| b.value).collect();
    let mass: i64 = inst.rule.values().iter().sum();

    // per-vote assignment budget keeps pathological votes from stalling setup
    let per_vote_cap = budget.clamp(1_000, 5_000_000);

    let mut base = vec![0i64; m];
    let mut free: Vec<SearchVote> = Vec::new();
    for (i, vote) in inst.profile.votes.iter().enumerate() {
        let assignments = vote_assignments(vote, &inst.rule, per_vote_cap)?;
        if assignments.len() == 1 {
            for (x, &b) in assignments[0].block_of.iter().enumerate() {
                base[x] += values[b as usize];
            }
            continue;
        }
        let mut min_val = vec![i64::MAX; m];
        let mut max_val = vec![i64::MIN; m];
        for a in &assignments {
            for (x, &b) in a.block_of.iter().enumerate() {
                let v = values[b as usize];
                min_val[x] = min_val[x].min(v);
                max_val[x] = max_val[x].max(v);
            }
        }
        free.push(SearchVote {
            index: i,
            assignments,
            min_val,
            max_val,
        });
    }
    free.sort_by_key(|v| (v.assignments.len(), v.index));

    let k = free.len();
    // suffix sums over the sorted free votes
    let mut suf_min = vec![vec![0i64; m]; k + 1];
    let mut suf_max = vec![vec![0i64; m]; k + 1];
    for d in (0..k).rev() {
        for x in 0..m {
            suf_min[d][x] = suf_min[d + 1][x] + free[d].min_val[x];
            suf_max[d][x] = suf_max[d + 1][x] + free[d].max_val[x];
        }
    }
    let c_fixed = (0..k).all(|d| free[d].min_val[c.index()] == free[d].max_val[c.index()]);
    let caps: Option<Vec<i64>> = c_fixed.then(|| {
        let total_c = base[c.index()] + suf_max[0][c.index()];
        let cap = total_c - if inst.mode.is_unique() { 1 } else { 0 };
        vec![cap; m]
    });
    // per remaining suffix: total shed capacity available (scores per vote
    // always sum to the full vote mass)
    let mut suf_avail = vec![0i64; k + 1];
    for d in (0..k).rev() {
        let maxsum: i64 = (0..m).map(|x| free[d].max_val[x]).sum();
        suf_avail[d] = suf_avail[d + 1] + (maxsum - mass);
    }

    struct Dfs<'a> {
        inst: &'a PWInstance,
        values: &'a [i64],
        free: &'a [SearchVote],
        suf_min: &'a [Vec<i64>],
        suf_max: &'a [Vec<i64>],
        suf_avail: &'a [i64],
        caps: Option<&'a [i64]>,
        budget: u64,
        nodes: u64,
        choice: Vec<usize>,
    }

    enum Found {
        Yes,
        No,
    }

    impl Dfs<'_> {
        fn run(&mut self, d: usize, scores: &mut [i64]) -> Result<Found, SolveError> {
            let m = self.inst.num_candidates();
            let c = self.inst.distinguished.index();
            if d == self.free.len() {
                let win = crate::election::wins(
                    &scores.to_vec(),
                    self.inst.distinguished,
                    self.inst.mode,
                );
                return Ok(if win { Found::Yes } else { Found::No });
            }
            // optimistic bound: best case for the distinguished candidate,
            // best case for each rival separately
            let c_best = scores[c] + self.suf_max[d][c];
            for x in 0..m {
                if x == c {
                    continue;
                }
                let x_least = scores[x] + self.suf_min[d][x];
                let dead = if self.inst.mode.is_unique() {
                    x_least >= c_best
                } else {
                    x_least > c_best
                };
                if dead {
                    return Ok(Found::No);
                }
            }
            if let Some(caps) = self.caps {
                let mut deficit = 0i64;
                for x in 0..m {
                    if x == c {
                        continue;
                    }
                    deficit += (scores[x] + self.suf_max[d][x] - caps[x]).max(0);
                }
                if deficit > self.suf_avail[d] {
                    return Ok(Found::No);
                }
            }
            for (ai, a) in self.free[d].assignments.iter().enumerate() {
                if self.nodes >= self.budget {
                    return Err(SolveError::BudgetExceeded {
                        budget: self.budget,
                        explored: self.nodes,
                    });
                }
                self.nodes += 1;
                for (x, &b) in a.block_of.iter().enumerate() {
                    scores[x] += self.values[b as usize];
                }
                let found = self.run(d + 1, scores)?;
                for (x, &b) in a.block_of.iter().enumerate() {
                    scores[x] -= self.values[b as usize];
                }
                if matches!(found, Found::Yes) {
                    self.choice[d] = ai;
                    return Ok(Found::Yes);
                }
            }
            Ok(Found::No)
        }
    }

    let mut dfs = Dfs {
        inst,
        values: &values,
        free: &free,
        suf_min: &suf_min,
        suf_max: &suf_max,
        suf_avail: &suf_avail,
        caps: caps.as_deref(),
        budget,
        nodes: 0,
        choice: vec![0; k],
    };
    let mut scores = base.clone();
    let found = dfs.run(0, &mut scores)?;
    let nodes = dfs.nodes;

    match found {
        Found::No => Ok(SolveResult {
            answer: false,
            witness: None,
            stats: SolveStats {
                nodes,
                flow: None,
            },
        }),
        Found::Yes => {
            let mut per_vote: Vec<Option<LinearOrder>> = vec![None; inst.profile.votes.len()];
            for (d, v) in free.iter().enumerate() {
                let a = &v.assignments[dfs.choice[d]];
                per_vote[v.index] = Some(order_from_assignment(
                    &inst.profile.votes[v.index],
                    a,
                    blocks.len(),
                ));
            }
            for (i, slot) in per_vote.iter_mut().enumerate() {
                if slot.is_none() {
                    let a = &vote_assignments(&inst.profile.votes[i], &inst.rule, per_vote_cap)?[0];
                    *slot = Some(order_from_assignment(
                        &inst.profile.votes[i],
                        a,
                        blocks.len(),
                    ));
                }
            }
            Ok(SolveResult {
                answer: true,
                witness: Some(per_vote.into_iter().map(Option::unwrap).collect()),
                stats: SolveStats {
                    nodes,
                    flow: None,
                },
            })
        }
    }
}

/// Linear order realizing a block assignment: blocks top-down, members of
/// each block in topological order with ascending-id tie-break.
fn order_from_assignment(
    vote: &PartialOrder,
    a: &BlockAssignment,
    num_blocks: usize,
) -> LinearOrder {
    let n = vote.len();
    let mut ranking: Vec<CandidateId> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for b in 0..num_blocks as u16 {
        let members: Vec<usize> = (0..n).filter(|&x| a.block_of[x] == b).collect();
        let mut left = members.len();
        while left > 0 {
            let next = members
                .iter()
                .copied()
                .find(|&x| {
                    !placed[x]
                        && members
                            .iter()
                            .all(|&y| y == x || placed[y] || !vote.above_idx(y, x))
                })
                .expect("assignment must respect constraints");
            placed[next] = true;
            ranking.push(CandidateId(next as u32));
            left -= 1;
        }
    }
    LinearOrder::new(ranking).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{
        Candidates, Mode, PartialProfile, ScoringRuleFamily,
    };
    use crate::solvers::possible_winner_bruteforce;

    fn c(i: u32) -> CandidateId {
        CandidateId(i)
    }

    #[test]
    fn assignments_match_extension_structure() {
        // 1 constraint over 3 candidates under 1-approval: block sizes 1,2
        let mut vote = PartialOrder::new(3);
        vote.add(c(0), c(1)).unwrap();
        let rule = ScoringRuleFamily::Plurality.vector_for(3).unwrap();
        let a = vote_assignments(&vote, &rule, 1000).unwrap();
        // top slot can host candidate 0 or 2, never 1
        assert_eq!(a.len(), 2);
        assert!(a.iter().all(|x| x.block_of[1] == 1));
    }

    #[test]
    fn plateau_agrees_with_bruteforce_borda_fixed_last() {
        // c fixed last everywhere under borda, others free
        let cands = Candidates::from_labels(["c", "a", "b"]).unwrap();
        let mut profile = PartialProfile::new(cands);
        for _ in 0..2 {
            let mut v = PartialOrder::new(3);
            v.add(c(1), c(0)).unwrap();
            v.add(c(2), c(0)).unwrap();
            profile.push(v).unwrap();
        }
        let inst = PWInstance::new(
            profile,
            c(0),
            ScoringRuleFamily::Borda.vector_for(3).unwrap(),
            Mode::CoWinner,
        )
        .unwrap();
        let p = possible_winner_plateau_search(&inst, 1_000_000).unwrap();
        let b = possible_winner_bruteforce(&inst, 1_000_000).unwrap();
        assert_eq!(p.answer, b.answer);
        assert!(!p.answer);
    }

    #[test]
    fn plateau_budget_error() {
        let cands = Candidates::from_labels(["a", "b", "c", "d", "e"]).unwrap();
        let mut profile = PartialProfile::new(cands);
        for _ in 0..4 {
            profile.push(PartialOrder::new(5)).unwrap();
        }
        let inst = PWInstance::new(
            profile,
            c(0),
            ScoringRuleFamily::Borda.vector_for(5).unwrap(),
            Mode::UniqueWinner,
        )
        .unwrap();
        assert!(matches!(
            possible_winner_plateau_search(&inst, 3),
            Err(SolveError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn plateau_witness_is_valid() {
        let cands = Candidates::from_labels(["c", "a", "b", "d"]).unwrap();
        let mut profile = PartialProfile::new(cands);
        let mut v1 = PartialOrder::new(4);
        v1.add(c(1), c(2)).unwrap();
        profile.push(v1).unwrap();
        profile.push(PartialOrder::new(4)).unwrap();
        let inst = PWInstance::new(
            profile,
            c(0),
            ScoringRuleFamily::KApproval(2).vector_for(4).unwrap(),
            Mode::UniqueWinner,
        )
        .unwrap();
        let p = possible_winner_plateau_search(&inst, 100_000).unwrap();
        assert!(p.answer);
        let w = p.witness.unwrap();
        for (vote, ext) in inst.profile.votes.iter().zip(&w) {
            assert!(ext.extends(vote).unwrap());
        }
        let scores = crate::election::total_scores(&w, &inst.rule).unwrap();
        assert!(crate::election::wins(&scores, c(0), Mode::UniqueWinner));
    }

    #[test]
    fn plateau_matches_bruteforce_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..120 {
            let m = rng.gen_range(2..=4usize);
            let n = rng.gen_range(1..=3usize);
            let cands =
                Candidates::from_labels((0..m).map(|i| format!("c{i}"))).unwrap();
            let mut profile = PartialProfile::new(cands);
            for _ in 0..n {
                let mut v = PartialOrder::new(m);
                for a in 0..m as u32 {
                    for b in 0..m as u32 {
                        if a != b && rng.gen_bool(0.3) {
                            let _ = v.add(c(a), c(b));
                        }
                    }
                }
                profile.push(v).unwrap();
            }
            let mut vals: Vec<i64> = (0..m).map(|_| rng.gen_range(0..4)).collect();
            vals.sort_by(|a, b| b.cmp(a));
            let rule = ScoringVector::new(vals).unwrap();
            let mode = if rng.gen_bool(0.5) {
                Mode::CoWinner
            } else {
                Mode::UniqueWinner
            };
            let inst = PWInstance::new(profile, c(0), rule, mode).unwrap();
            let p = possible_winner_plateau_search(&inst, 10_000_000).unwrap();
            let b = possible_winner_bruteforce(&inst, 10_000_000).unwrap();
            assert_eq!(p.answer, b.answer, "disagreement on {inst:?}");
        }
    }
}
