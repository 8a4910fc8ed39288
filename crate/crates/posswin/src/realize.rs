//! Construction of linear votes that realize prescribed maximum partial
//! scores.
//!
//! Given partial votes in which the distinguished candidate's score is
//! fixed, the construction emits circular vote blocks: all candidates tie
//! within a block, and exchanging the distinguished rival with a dummy in
//! exactly one rotation moves their relative score by one score value.
//! Stacking blocks realizes, for every rival, the exact score gap that
//! makes the rival beat the distinguished candidate precisely when it
//! exceeds its target in the partial votes. Rivals without an explicit
//! target get enough of a gap that they can never win.

use crate::election::{
    total_scores, CandidateId, ElectionError, LinearOrder, Mode, PartialOrder, ScoringVector,
};
use std::collections::BTreeMap;
use thiserror::Error;

/// Score targets for the partial votes: each listed rival may gain at
/// most its target without beating the distinguished candidate. The dummy
/// hosts the block exchanges and must stay un-targeted.
#[derive(Debug, Clone)]
pub struct MaxPartialScoreSpec {
    pub targets: BTreeMap<CandidateId, i64>,
    pub dummy: CandidateId,
    pub mode: Mode,
    /// Permit targets that are not plain sums of score values; realization
    /// then also uses blocks with the dummy and the rival exchanged in the
    /// opposite direction, subtracting score values from the gap.
    pub allow_subtraction: bool,
}

#[derive(Debug, Error)]
pub enum RealizeError {
    #[error("distinguished candidate's score is not fixed in vote {vote}")]
    DistinguishedNotFixed { vote: usize },
    #[error(
        "target {target} for candidate {candidate} is not a sum of at most {budget} score values"
    )]
    NotDecomposable {
        candidate: CandidateId,
        target: i64,
        budget: u64,
    },
    #[error("value {target} is not a sum of at most {budget} score values")]
    ValueNotDecomposable { target: i64, budget: u64 },
    #[error("spec infeasible: {0}")]
    SpecInfeasible(String),
    #[error("realization requires the last score value to be zero")]
    LastValueNonZero,
    #[error("unique-winner mode cannot separate scores under a trivial rule")]
    UniqueModeTrivialRule,
    #[error(transparent)]
    Election(#[from] ElectionError),
}

/// The `m` rotations of a candidate sequence; every candidate occupies
/// every position exactly once across the block, so all candidates tie.
pub fn circular_block(order: &[CandidateId]) -> Result<Vec<LinearOrder>, ElectionError> {
    let m = order.len();
    let mut votes = Vec::with_capacity(m);
    for r in 0..m {
        let mut ranking = Vec::with_capacity(m);
        ranking.extend_from_slice(&order[r..]);
        ranking.extend_from_slice(&order[..r]);
        votes.push(LinearOrder::new(ranking)?);
    }
    Ok(votes)
}

/// Multiplicities `n_j` per 1-based position with `sum n_j * value_j =
/// target` and `sum n_j <= budget`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub counts: BTreeMap<usize, u64>,
}

impl Decomposition {
    pub fn total_summands(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn value(&self, rule: &ScoringVector) -> i64 {
        self.counts
            .iter()
            .map(|(&pos, &n)| rule.at(pos) * n as i64)
            .sum()
    }
}

/// Writes `target` as a sum of at most `budget` score values, trying
/// larger values first and backtracking, so the result is deterministic.
pub fn decompose(
    target: i64,
    rule: &ScoringVector,
    budget: u64,
) -> Result<Decomposition, RealizeError> {
    if target < 0 {
        return Err(RealizeError::ValueNotDecomposable { target, budget });
    }
    // distinct nonzero values with their leftmost position
    let mut values: Vec<(i64, usize)> = Vec::new();
    for (pos0, &v) in rule.values().iter().enumerate() {
        if v > 0 && values.last().map(|&(lv, _)| lv != v).unwrap_or(true) {
            values.push((v, pos0 + 1));
        }
    }
    fn rec(
        values: &[(i64, usize)],
        target: i64,
        budget: u64,
        counts: &mut BTreeMap<usize, u64>,
    ) -> bool {
        if target == 0 {
            return true;
        }
        let Some(&(v, pos)) = values.first() else {
            return false;
        };
        if target > v * budget as i64 {
            return false;
        }
        let max_cnt = (target / v).min(budget as i64) as u64;
        for cnt in (0..=max_cnt).rev() {
            if cnt > 0 {
                counts.insert(pos, cnt);
            } else {
                counts.remove(&pos);
            }
            if rec(&values[1..], target - v * cnt as i64, budget - cnt, counts) {
                return true;
            }
        }
        counts.remove(&pos);
        false
    }
    let mut counts = BTreeMap::new();
    if rec(&values, target, budget, &mut counts) {
        Ok(Decomposition { counts })
    } else {
        Err(RealizeError::ValueNotDecomposable { target, budget })
    }
}

/// Multiset of 1-based positions whose values are exchanged toward the
/// rival (`forward`: the rival loses that value relative to everyone
/// else) or away from it (`reverse`: the rival gains it).
#[derive(Debug, Clone, Default)]
struct SwapPlan {
    forward: Vec<usize>,
    reverse: Vec<usize>,
}

impl SwapPlan {
    fn cancel(&mut self, rule: &ScoringVector) {
        let mut i = 0;
        while i < self.forward.len() {
            let v = rule.at(self.forward[i]);
            if let Some(j) = self.reverse.iter().position(|&p| rule.at(p) == v) {
                self.forward.swap_remove(i);
                self.reverse.swap_remove(j);
            } else {
                i += 1;
            }
        }
        self.forward.sort_unstable();
        self.reverse.sort_unstable();
    }

    fn net(&self, rule: &ScoringVector) -> i64 {
        let f: i64 = self.forward.iter().map(|&p| rule.at(p)).sum();
        let r: i64 = self.reverse.iter().map(|&p| rule.at(p)).sum();
        f - r
    }

    fn is_empty(&self) -> bool {
        self.forward.is_empty() && self.reverse.is_empty()
    }
}

/// Combination of positions realizing one gcd step of the score lattice,
/// via the extended euclidean algorithm over the distinct values.
fn step_combination(rule: &ScoringVector) -> Option<SwapPlan> {
    let mut values: Vec<(i64, usize)> = Vec::new();
    for (pos0, &v) in rule.values().iter().enumerate() {
        if v > 0 && !values.iter().any(|&(x, _)| x == v) {
            values.push((v, pos0 + 1));
        }
    }
    let (&(v0, p0), rest) = values.split_first()?;
    let mut coeff: BTreeMap<usize, i64> = BTreeMap::new();
    coeff.insert(p0, 1);
    let mut g = v0;
    for &(v, pos) in rest {
        if g % v == 0 {
            if v < g {
                coeff.clear();
                coeff.insert(pos, 1);
                g = v;
            }
            continue;
        }
        let (gg, s, t) = ext_gcd(g, v);
        for c in coeff.values_mut() {
            *c *= s;
        }
        *coeff.entry(pos).or_insert(0) += t;
        g = gg;
    }
    let mut plan = SwapPlan::default();
    for (pos, c) in coeff {
        let (side, n) = if c >= 0 {
            (&mut plan.forward, c)
        } else {
            (&mut plan.reverse, -c)
        };
        for _ in 0..n {
            side.push(pos);
        }
    }
    Some(plan)
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Facts about the partial votes shared by realization and its verifier.
pub struct PartialVoteSummary {
    /// Distinguished candidate's fixed score over the partial votes.
    pub fixed_score: i64,
    /// Per candidate, the maximum total it can gain in the partial votes.
    pub max_gain: Vec<i64>,
}

pub fn summarize_partial_votes(
    votes: &[PartialOrder],
    distinguished: CandidateId,
    rule: &ScoringVector,
) -> Result<PartialVoteSummary, RealizeError> {
    let m = rule.len();
    let mut fixed_score = 0i64;
    let mut max_gain = vec![0i64; m];
    for (i, v) in votes.iter().enumerate() {
        if v.len() != m {
            return Err(ElectionError::RuleLengthMismatch {
                expected: m,
                got: v.len(),
            }
            .into());
        }
        let (lo, hi) = v.position_range(distinguished);
        if rule.at(lo) != rule.at(hi) {
            return Err(RealizeError::DistinguishedNotFixed { vote: i });
        }
        fixed_score += rule.at(lo);
        for x in 0..m {
            let (xlo, _) = v.position_range(CandidateId(x as u32));
            max_gain[x] += rule.at(xlo);
        }
    }
    Ok(PartialVoteSummary {
        fixed_score,
        max_gain,
    })
}

/// Builds linear votes realizing the spec's targets.
///
/// After realization, for every targeted rival `x`, the distinguished
/// candidate's lead over `x` in the linear votes equals
/// `target(x) - fixed_score(distinguished)`, plus one score-lattice step
/// in unique-winner mode; un-targeted rivals trail far enough that they
/// lose in every extension.
pub fn realize(
    partial_votes: &[PartialOrder],
    distinguished: CandidateId,
    spec: &MaxPartialScoreSpec,
    rule: &ScoringVector,
) -> Result<Vec<LinearOrder>, RealizeError> {
    let m = rule.len();
    if *rule.values().last().unwrap() != 0 {
        return Err(RealizeError::LastValueNonZero);
    }
    if spec.dummy == distinguished {
        return Err(RealizeError::SpecInfeasible(
            "dummy equals the distinguished candidate".into(),
        ));
    }
    if spec.targets.contains_key(&spec.dummy) {
        return Err(RealizeError::SpecInfeasible(
            "dummy carries an explicit target".into(),
        ));
    }
    if spec.targets.contains_key(&distinguished) {
        return Err(RealizeError::SpecInfeasible(
            "distinguished candidate carries a target".into(),
        ));
    }

    let summary = summarize_partial_votes(partial_votes, distinguished, rule)?;
    let s_p_c = summary.fixed_score;
    let n_votes = partial_votes.len() as u64;

    let step = match (spec.mode, rule.score_step()) {
        (Mode::UniqueWinner, None) => return Err(RealizeError::UniqueModeTrivialRule),
        (Mode::UniqueWinner, Some(s)) => s,
        (Mode::CoWinner, _) => 0,
    };

    let mut plans: BTreeMap<CandidateId, SwapPlan> = BTreeMap::new();
    for (&cand, &target) in &spec.targets {
        if !spec.allow_subtraction {
            // targets must satisfy the summand form up front
            decompose(target, rule, n_votes).map_err(|_| RealizeError::NotDecomposable {
                candidate: cand,
                target,
                budget: n_votes,
            })?;
        }
        let needed = target - s_p_c + step;
        let mut plan = SwapPlan::default();
        let direct = if needed >= 0 {
            decompose(needed, rule, n_votes + u64::from(step > 0)).ok()
        } else {
            None
        };
        match direct {
            Some(d) => {
                for (&pos, &cnt) in &d.counts {
                    for _ in 0..cnt {
                        plan.forward.push(pos);
                    }
                }
            }
            None => {
                // a negative target (the rival may never stay within it)
                // goes entirely onto the reversed side
                let base = decompose(target.abs(), rule, n_votes).map_err(|_| {
                    RealizeError::NotDecomposable {
                        candidate: cand,
                        target,
                        budget: n_votes,
                    }
                })?;
                let side = if target >= 0 {
                    &mut plan.forward
                } else {
                    &mut plan.reverse
                };
                for (&pos, &cnt) in &base.counts {
                    for _ in 0..cnt {
                        side.push(pos);
                    }
                }
                // the distinguished candidate's own fixed per-vote values
                // come off the gap through reversed blocks
                for v in partial_votes {
                    let (lo, _) = v.position_range(distinguished);
                    if rule.at(lo) != 0 {
                        plan.reverse.push(lo);
                    }
                }
                if step > 0 {
                    let extra =
                        step_combination(rule).ok_or(RealizeError::UniqueModeTrivialRule)?;
                    plan.forward.extend(extra.forward);
                    plan.reverse.extend(extra.reverse);
                }
                plan.cancel(rule);
            }
        }
        if plan.net(rule) != needed {
            return Err(RealizeError::SpecInfeasible(format!(
                "gap {needed} for candidate {cand} is not realizable"
            )));
        }
        plans.insert(cand, plan);
    }

    // rivals without targets only need a gap big enough to never win
    let alpha1 = rule.at(1);
    for x in (0..m as u32).map(CandidateId) {
        if x == distinguished || x == spec.dummy || spec.targets.contains_key(&x) {
            continue;
        }
        let needed = summary.max_gain[x.index()] - s_p_c + step;
        if needed <= 0 {
            continue;
        }
        if alpha1 == 0 {
            return Err(RealizeError::SpecInfeasible(format!(
                "candidate {x} cannot be kept behind under a trivial rule"
            )));
        }
        let k = (needed + alpha1 - 1) / alpha1;
        let mut plan = SwapPlan::default();
        plan.forward = vec![1; k as usize];
        plans.insert(x, plan);
    }

    // every forward exchange also lifts the dummy toward the
    // distinguished candidate; padding blocks push it back down
    let burn: i64 = plans.values().map(|p| p.net(rule)).sum();
    let dummy_needed = summary.max_gain[spec.dummy.index()] - s_p_c + step;
    let deficit = dummy_needed + burn;
    let rotation_mass: i64 = (1..m).map(|j| rule.at(j)).sum();
    let pad_blocks = if deficit <= 0 {
        0
    } else if rotation_mass == 0 || m < 2 {
        return Err(RealizeError::SpecInfeasible(
            "dummy allowance cannot be restored under this rule".into(),
        ));
    } else {
        (deficit + rotation_mass - 1) / rotation_mass
    };
    if plans.values().all(|p| p.is_empty()) && pad_blocks == 0 {
        return Ok(Vec::new());
    }

    let mut out = Vec::new();
    for (&cand, plan) in &plans {
        for &pos in &plan.forward {
            out.extend(swap_block(m, cand, spec.dummy, pos, true)?);
        }
        for &pos in &plan.reverse {
            out.extend(swap_block(m, cand, spec.dummy, pos, false)?);
        }
    }
    let others: Vec<CandidateId> = (0..m as u32)
        .map(CandidateId)
        .filter(|&x| x != spec.dummy)
        .collect();
    for _ in 0..pad_blocks {
        for r in 0..others.len() {
            let mut ranking: Vec<CandidateId> = Vec::with_capacity(m);
            ranking.extend_from_slice(&others[r..]);
            ranking.extend_from_slice(&others[..r]);
            ranking.push(spec.dummy);
            out.push(LinearOrder::new(ranking)?);
        }
    }
    Ok(out)
}

/// One circular block over all candidates where, in the first rotation
/// only, `cand` and `dummy` trade places. `forward` puts `cand` at the
/// last position of that rotation (it loses the value at `pos` relative
/// to everyone else); reversed, `cand` takes `pos` from the dummy.
fn swap_block(
    m: usize,
    cand: CandidateId,
    dummy: CandidateId,
    pos: usize,
    forward: bool,
) -> Result<Vec<LinearOrder>, ElectionError> {
    let (at_pos, at_last) = if forward { (cand, dummy) } else { (dummy, cand) };
    let mut base: Vec<CandidateId> = Vec::with_capacity(m);
    let mut rest = (0..m as u32)
        .map(CandidateId)
        .filter(|&x| x != cand && x != dummy);
    for p in 1..=m {
        if p == pos {
            base.push(at_pos);
        } else if p == m {
            base.push(at_last);
        } else {
            base.push(rest.next().expect("enough candidates"));
        }
    }
    let mut votes = circular_block(&base)?;
    // exchange the two protagonists in the base rotation
    let mut swapped = votes[0].ranking().to_vec();
    let i = swapped.iter().position(|&x| x == at_pos).unwrap();
    let j = swapped.iter().position(|&x| x == at_last).unwrap();
    swapped.swap(i, j);
    votes[0] = LinearOrder::new(swapped)?;
    Ok(votes)
}

/// Checks by full enumeration that the distinguished candidate wins
/// exactly in those joint extensions where every targeted rival stays
/// within its target.
pub fn verify_realization(
    partial_votes: &[PartialOrder],
    linear_votes: &[LinearOrder],
    distinguished: CandidateId,
    spec: &MaxPartialScoreSpec,
    rule: &ScoringVector,
    cap: u64,
) -> Result<bool, RealizeError> {
    let base = total_scores(linear_votes, rule)?;
    let mut ext_lists = Vec::new();
    let mut product: u64 = 1;
    for v in partial_votes {
        let exts = v.extensions(cap)?;
        product = product.saturating_mul(exts.len() as u64);
        if product > cap {
            return Err(ElectionError::CapExceeded(cap).into());
        }
        ext_lists.push(exts);
    }
    let m = rule.len();
    let mut choice = vec![0usize; ext_lists.len()];
    loop {
        let mut scores = base.clone();
        let mut gains = vec![0i64; m];
        for (vi, &ci) in choice.iter().enumerate() {
            for (pos0, c) in ext_lists[vi][ci].ranking().iter().enumerate() {
                scores[c.index()] += rule.at(pos0 + 1);
                gains[c.index()] += rule.at(pos0 + 1);
            }
        }
        let wins = crate::election::wins(&scores, distinguished, spec.mode);
        let within = spec
            .targets
            .iter()
            .all(|(&cand, &t)| gains[cand.index()] <= t);
        if wins != within {
            return Ok(false);
        }
        // odometer
        let mut i = choice.len();
        loop {
            if i == 0 {
                return Ok(true);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < ext_lists[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::ScoringRuleFamily;

    fn c(i: u32) -> CandidateId {
        CandidateId(i)
    }

    fn sv(v: &[i64]) -> ScoringVector {
        ScoringVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn circular_block_rotations() {
        let block = circular_block(&[c(0), c(1), c(2)]).unwrap();
        assert_eq!(block.len(), 3);
        assert_eq!(block[0].ranking(), &[c(0), c(1), c(2)]);
        assert_eq!(block[1].ranking(), &[c(1), c(2), c(0)]);
        assert_eq!(block[2].ranking(), &[c(2), c(0), c(1)]);
    }

    #[test]
    fn circular_block_scores_equal() {
        for rule in [sv(&[2, 1, 0]), sv(&[5, 5, 0]), sv(&[7, 3, 1])] {
            let block = circular_block(&[c(0), c(1), c(2)]).unwrap();
            let scores = total_scores(&block, &rule).unwrap();
            let sum: i64 = rule.values().iter().sum();
            assert!(scores.iter().all(|&s| s == sum));
        }
    }

    #[test]
    fn circular_block_single_candidate() {
        let block = circular_block(&[c(0)]).unwrap();
        assert_eq!(block.len(), 1);
        assert_eq!(block[0].ranking(), &[c(0)]);
    }

    #[test]
    fn decompose_examples() {
        let rule = sv(&[3, 2, 1, 0]);
        let d = decompose(6, &rule, 3).unwrap();
        assert_eq!(d.counts, BTreeMap::from([(1, 2)]));
        let d = decompose(3, &rule, 2).unwrap();
        assert_eq!(d.value(&rule), 3);
        assert!(d.total_summands() <= 2);
        // only multiples of 2 reachable under (2, 0)
        assert!(decompose(1, &sv(&[2, 0]), 5).is_err());
    }

    #[test]
    fn decompose_budget_respected() {
        let rule = sv(&[2, 1, 0]);
        assert!(decompose(5, &rule, 2).is_err());
        let d = decompose(5, &rule, 3).unwrap();
        assert_eq!(d.value(&rule), 5);
        assert!(d.total_summands() <= 3);
    }

    #[test]
    fn step_combination_reaches_gcd() {
        for rule in [
            sv(&[2, 1, 0]),
            sv(&[7, 3, 0]),
            sv(&[6, 4, 0]),
            sv(&[5, 2, 2, 0]),
        ] {
            let plan = step_combination(&rule).unwrap();
            assert_eq!(plan.net(&rule), rule.score_step().unwrap());
        }
    }

    /// Borda over {c, a, d}: one partial vote with c on top, a capped at
    /// one middle placement.
    fn tiny_case(mode: Mode) -> (Vec<PartialOrder>, MaxPartialScoreSpec, ScoringVector) {
        let mut v = PartialOrder::new(3);
        v.add(c(0), c(1)).unwrap();
        v.add(c(0), c(2)).unwrap();
        let spec = MaxPartialScoreSpec {
            targets: BTreeMap::from([(c(1), 1)]),
            dummy: c(2),
            mode,
            allow_subtraction: false,
        };
        (vec![v], spec, sv(&[2, 1, 0]))
    }

    #[test]
    fn realize_ledger_gap() {
        for mode in [Mode::CoWinner, Mode::UniqueWinner] {
            let (votes, spec, rule) = tiny_case(mode);
            let linear = realize(&votes, c(0), &spec, &rule).unwrap();
            let scores = total_scores(&linear, &rule).unwrap();
            let gap = scores[0] - scores[1];
            let s_p_c = 2; // c fixed on top of the single partial vote
            let step = if mode.is_unique() { 1 } else { 0 };
            assert_eq!(gap, 1 - s_p_c + step);
            assert!(verify_realization(&votes, &linear, c(0), &spec, &rule, 10_000).unwrap());
        }
    }

    #[test]
    fn verify_rejects_shifted_targets() {
        let (votes, spec, rule) = tiny_case(Mode::CoWinner);
        let linear = realize(&votes, c(0), &spec, &rule).unwrap();
        let mut off = spec.clone();
        off.targets.insert(c(1), 0);
        assert!(!verify_realization(&votes, &linear, c(0), &off, &rule, 10_000).unwrap());
    }

    #[test]
    fn verify_empty_partials_vacuous() {
        let spec = MaxPartialScoreSpec {
            targets: BTreeMap::new(),
            dummy: c(2),
            mode: Mode::CoWinner,
            allow_subtraction: false,
        };
        let rule = sv(&[2, 1, 0]);
        assert!(verify_realization(&[], &[], c(0), &spec, &rule, 10).unwrap());
    }

    #[test]
    fn realize_output_size_is_polynomial() {
        let (votes, spec, rule) = tiny_case(Mode::CoWinner);
        let linear = realize(&votes, c(0), &spec, &rule).unwrap();
        let m = rule.len() as i64;
        let vp = votes.len() as i64;
        // twice the nominal circular-block budget, plus dummy padding
        let bound = 2 * (m * m * (vp + 1) + m * (m * (vp + 1) + vp));
        assert!((linear.len() as i64) <= bound);
    }

    #[test]
    fn realize_trivial_cap_never_binds() {
        // free rival under plurality with cap high enough that c always wins
        let rule = ScoringRuleFamily::Plurality.vector_for(3).unwrap();
        let mut v = PartialOrder::new(3);
        v.add(c(0), c(1)).unwrap();
        v.add(c(0), c(2)).unwrap();
        let spec = MaxPartialScoreSpec {
            targets: BTreeMap::from([(c(1), 0)]),
            dummy: c(2),
            mode: Mode::CoWinner,
            allow_subtraction: false,
        };
        let linear = realize(&[v.clone()], c(0), &spec, &rule).unwrap();
        assert!(verify_realization(&[v], &linear, c(0), &spec, &rule, 10_000).unwrap());
    }

    #[test]
    fn realize_rejects_unfixed_distinguished() {
        let v = PartialOrder::new(2);
        let spec = MaxPartialScoreSpec {
            targets: BTreeMap::new(),
            dummy: c(1),
            mode: Mode::CoWinner,
            allow_subtraction: false,
        };
        assert!(matches!(
            realize(&[v], c(0), &spec, &sv(&[1, 0])),
            Err(RealizeError::DistinguishedNotFixed { vote: 0 })
        ));
    }
}
