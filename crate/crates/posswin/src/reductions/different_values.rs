use super::{
    assemble, ReductionError, ReductionOutput, SourceSolution, TightnessCheck, X3CInstance,
};
use crate::election::{
    CandidateId, Candidates, LinearOrder, Mode, PartialOrder, ScoringVector,
};
use crate::realize::MaxPartialScoreSpec;
use std::collections::BTreeMap;

/// Cover instance -> possible-winner instance for vectors with enough
/// pairwise-distinct score values.
///
/// Three permuted partial votes per subset carry a chain of element and
/// synchronization candidates behind a floating candidate `w`; score
/// targets force `w` to take either the top slot or the last chain slot,
/// and the synchronization candidates tie the three votes of a subset
/// together, so the votes where `w` drops to the back select an exact
/// cover. When the vector is longer than the needed `f(I)` distinct
/// values, the gadget occupies the positions where the value strictly
/// drops and fixed filler candidates absorb the repeats.
pub fn reduce_x3c_different_values(
    x: &X3CInstance,
    rule: &ScoringVector,
    mode: Mode,
) -> Result<ReductionOutput, ReductionError> {
    x.check_reducible()?;
    let q = x.universe_size();
    let t = x.num_subsets();
    let f = 3 + q + 5 * t;
    let distinct = rule.distinct_values().len();
    if distinct < f {
        return Err(ReductionError::InsufficientDistinctValues {
            needed: f,
            got: distinct,
        });
    }
    let m = rule.len();

    // physical anchor of virtual slot k (1-based): the k-th strict drop,
    // and one past the last used drop for the final slot
    let drops = rule.drop_positions();
    let mut anchor = vec![0usize; f + 1];
    for k in 1..f {
        anchor[k] = drops[k - 1];
    }
    anchor[f] = drops[f - 2] + 1;
    let beta = |k: usize| rule.at(anchor[k]);

    // candidate registry in a fixed creation order
    let mut cands = Candidates::new();
    let c = cands.add("c")?;
    let xc = cands.add("x")?;
    let w = cands.add("w")?;
    let elems: Vec<CandidateId> = (1..=q)
        .map(|e| cands.add(format!("e{e}")))
        .collect::<Result<_, _>>()?;
    let d: Vec<CandidateId> = (1..=t)
        .map(|i| cands.add(format!("d{i}")))
        .collect::<Result<_, _>>()?;
    let h: Vec<CandidateId> = (1..=t)
        .map(|i| cands.add(format!("h{i}")))
        .collect::<Result<_, _>>()?;
    let dp: Vec<CandidateId> = (1..=t)
        .map(|i| cands.add(format!("dp{i}")))
        .collect::<Result<_, _>>()?;
    let hp: Vec<CandidateId> = (1..=t)
        .map(|i| cands.add(format!("hp{i}")))
        .collect::<Result<_, _>>()?;
    let l: Vec<CandidateId> = (1..=t)
        .map(|i| cands.add(format!("l{i}")))
        .collect::<Result<_, _>>()?;
    let pads: Vec<CandidateId> = (0..m - f)
        .map(|i| cands.add(format!("pad{}", i + 1)))
        .collect::<Result<_, _>>()?;

    // per vote: the chain occupying virtual slots 1..=4+2t (baseline, with
    // w at slot 5+2t), and the tail at slots 6+2t..=f
    let chain_len = 4 + 2 * t;
    let e_idx = |e: usize| elems[e - 1];
    let mut votes = Vec::with_capacity(3 * t);
    let mut chains: Vec<Vec<CandidateId>> = Vec::with_capacity(3 * t);
    let mut tails: Vec<Vec<CandidateId>> = Vec::with_capacity(3 * t);
    for i in 1..=t {
        let [e1, e2, e3] = x.triples()[i - 1];
        for kind in 0..3 {
            let mut chain = vec![xc];
            match kind {
                0 => chain.extend([e_idx(e1), e_idx(e2), e_idx(e3)]),
                1 => chain.extend([e_idx(e2), e_idx(e3), e_idx(e1)]),
                _ => chain.extend([e_idx(e3), e_idx(e1), e_idx(e2)]),
            }
            match kind {
                0 => {
                    chain.extend(d[..i].iter());
                    chain.extend(h[i..].iter());
                    chain.extend(dp[..i].iter());
                    chain.extend(hp[i..].iter());
                }
                1 => {
                    chain.extend(h[..i].iter());
                    chain.extend(d[i..].iter());
                    chain.extend(l.iter());
                }
                _ => {
                    chain.extend(l.iter());
                    chain.extend(hp[..i].iter());
                    chain.extend(dp[i..].iter());
                }
            }
            debug_assert_eq!(chain.len(), chain_len);
            let mut in_chain = vec![false; cands.len()];
            for &cc in &chain {
                in_chain[cc.index()] = true;
            }
            let tail: Vec<CandidateId> = cands
                .ids()
                .filter(|&id| !in_chain[id.index()] && id != w && !pads.contains(&id))
                .collect();
            debug_assert_eq!(tail.len(), f - chain_len - 1);

            // fixed sequence: everything except w, ordered by baseline
            // physical position
            let mut sequence: Vec<CandidateId> = Vec::with_capacity(m - 1);
            let mut pad_iter = pads.iter().copied();
            let mut slot = 0usize; // virtual slot consumed so far
            for p in 1..=m {
                let is_anchor = slot < f && anchor[slot + 1] == p;
                if is_anchor {
                    slot += 1;
                    if slot <= chain_len {
                        sequence.push(chain[slot - 1]);
                    } else if slot == chain_len + 1 {
                        // w's baseline slot stays open
                        continue;
                    } else {
                        sequence.push(tail[slot - chain_len - 2]);
                    }
                } else {
                    sequence.push(pad_iter.next().expect("pad count matches"));
                }
            }
            let mut vote = PartialOrder::new(cands.len());
            for pair in sequence.windows(2) {
                vote.add(pair[0], pair[1])?;
            }
            // w floats over the chain region: behind the leading pads,
            // ahead of the whole tail
            for &tc in &tail {
                vote.add(w, tc)?;
            }
            for p in 1..anchor[1] {
                // pads at positions before the first drop stay on top
                let idx = p - 1; // sequence index of that pad
                vote.add(sequence[idx], w)?;
            }
            votes.push(vote);
            chains.push(sequence);
            tails.push(tail);
        }
    }

    // fixed points: value of a candidate wherever its position cannot move
    let tail_value = |j: usize| beta(chain_len + 2 + j); // j-th tail member, 0-based
    let mut fixed = vec![0i64; cands.len()];
    for tail in &tails {
        for (j, &tc) in tail.iter().enumerate() {
            fixed[tc.index()] += tail_value(j);
        }
    }

    let q3 = (q / 3) as i64;
    let ti = t as i64;
    let qi = q as i64;
    let mut targets: BTreeMap<CandidateId, i64> = BTreeMap::new();
    targets.insert(w, (3 * ti - qi) * beta(1) + qi * beta(5 + 2 * t));
    targets.insert(xc, qi * beta(1) + (3 * ti - qi) * beta(2));
    for (e, &id) in (1..=q).zip(&elems) {
        let n_e = x.occurrences(e) as i64;
        if n_e == 0 {
            continue; // never leaves the tails; allowance suffices
        }
        let shifted_once = beta(2) + beta(3) + beta(4);
        let shifted_rest = beta(3) + beta(4) + beta(5);
        targets.insert(
            id,
            shifted_once + (n_e - 1) * shifted_rest + fixed[id.index()],
        );
    }
    for z in 1..=t {
        let tv = q3 * beta(4 + z) + (ti - q3) * beta(5 + z);
        targets.insert(d[z - 1], tv + fixed[d[z - 1].index()]);
        targets.insert(h[z - 1], tv + fixed[h[z - 1].index()]);
        let tv2 = q3 * beta(4 + z + t) + (ti - q3) * beta(5 + z + t);
        targets.insert(dp[z - 1], tv2 + fixed[dp[z - 1].index()]);
        targets.insert(hp[z - 1], tv2 + fixed[hp[z - 1].index()]);
    }
    for (z, &id) in l.iter().enumerate() {
        if z == 0 {
            continue; // l1 doubles as the exchange dummy
        }
        targets.insert(id, 2 * ti * beta(1) + fixed[id.index()]);
    }
    let dummy = l[0];

    let spec = MaxPartialScoreSpec {
        targets,
        dummy,
        mode,
        allow_subtraction: false,
    };

    let mut roles = vec![
        (c, "distinguished".to_string()),
        (xc, "first-position guard".to_string()),
        (w, "floater".to_string()),
    ];
    roles.extend(elems.iter().map(|&id| (id, "element".to_string())));
    roles.extend(d.iter().chain(&h).map(|&id| (id, "sync-12".to_string())));
    roles.extend(dp.iter().chain(&hp).map(|&id| (id, "sync-13".to_string())));
    roles.extend(l.iter().map(|&id| (id, "spacer".to_string())));
    roles.extend(pads.iter().map(|&id| (id, "filler".to_string())));

    let tightness = vec![TightnessCheck {
        name: "three votes per subset".into(),
        lhs: votes.len() as i64,
        rhs: 3 * ti,
    }];

    // witness: w drops to the last chain slot in the three votes of every
    // cover subset and takes the first gadget position elsewhere
    let witness_chains = chains.clone();
    let w_front_index = anchor[1] - 1;
    let x_ref = x.clone();
    let witness = move |sol: &SourceSolution| -> Result<Vec<LinearOrder>, ReductionError> {
        let SourceSolution::Cover(chosen) = sol else {
            return Err(ReductionError::BadSolution("expected a cover".into()));
        };
        if !x_ref.is_exact_cover(chosen) {
            return Err(ReductionError::BadSolution(
                "chosen subsets are not an exact cover".into(),
            ));
        }
        let mut out = Vec::new();
        for i in 0..x_ref.num_subsets() {
            let in_cover = chosen.contains(&i);
            for kind in 0..3 {
                let seq = &witness_chains[3 * i + kind];
                let mut ranking = seq.clone();
                if in_cover {
                    // w lands right after the chain: index of the slot
                    // anchored at chain_len + 1
                    let wi = anchor[chain_len + 1] - 1;
                    ranking.insert(wi, w);
                } else {
                    ranking.insert(w_front_index, w);
                }
                out.push(LinearOrder::new(ranking)?);
            }
        }
        Ok(out)
    };

    assemble(
        cands,
        votes,
        c,
        spec,
        rule.clone(),
        "x3c-different-values",
        f,
        roles,
        tightness,
        Box::new(witness),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{total_scores, wins, ScoringRuleFamily};
    use crate::oracles::{solve_x3c_bruteforce, verify_reduction, CheckStatus, SourceOracle};
    use crate::solvers::possible_winner_plateau_search;

    fn yes3() -> X3CInstance {
        X3CInstance::new(3, vec![[1, 2, 3]]).unwrap()
    }

    fn no6() -> X3CInstance {
        X3CInstance::new(6, vec![[1, 2, 3], [1, 2, 4]]).unwrap()
    }

    #[test]
    fn sizes_q3_t1() {
        let x = yes3();
        let rule = ScoringRuleFamily::Borda.vector_for(11).unwrap();
        let out = reduce_x3c_different_values(&x, &rule, Mode::CoWinner).unwrap();
        assert_eq!(out.meta.f_value, 11);
        assert_eq!(out.meta.n_partial, 3);
        assert_eq!(out.instance.num_candidates(), 11);
    }

    #[test]
    fn insufficient_values_rejected() {
        let x = yes3();
        let rule = ScoringRuleFamily::KApproval(2).vector_for(11).unwrap();
        assert!(matches!(
            reduce_x3c_different_values(&x, &rule, Mode::CoWinner),
            Err(ReductionError::InsufficientDistinctValues { needed: 11, .. })
        ));
    }

    #[test]
    fn witness_wins_on_yes_instance() {
        let x = yes3();
        for mode in [Mode::CoWinner, Mode::UniqueWinner] {
            let rule = ScoringRuleFamily::Borda.vector_for(11).unwrap();
            let out = reduce_x3c_different_values(&x, &rule, mode).unwrap();
            let cover = solve_x3c_bruteforce(&x, 1000).unwrap().unwrap();
            let ext = out
                .witness_builder
                .build(&SourceSolution::Cover(cover))
                .unwrap();
            for (e, v) in ext.iter().zip(&out.instance.profile.votes) {
                assert!(e.extends(v).unwrap());
            }
            let scores = total_scores(&ext, &out.instance.rule).unwrap();
            assert!(wins(&scores, out.instance.distinguished, mode));
        }
    }

    #[test]
    fn equivalence_on_tiny_instances() {
        let rule_yes = ScoringRuleFamily::Borda.vector_for(11).unwrap();
        let out = reduce_x3c_different_values(&yes3(), &rule_yes, Mode::CoWinner).unwrap();
        let r = possible_winner_plateau_search(&out.instance, 50_000_000).unwrap();
        assert!(r.answer);

        let rule_no = ScoringRuleFamily::Borda.vector_for(19).unwrap();
        let out = reduce_x3c_different_values(&no6(), &rule_no, Mode::CoWinner).unwrap();
        let r = possible_winner_plateau_search(&out.instance, 50_000_000).unwrap();
        assert!(!r.answer);
    }

    #[test]
    fn padded_vector_with_repeats() {
        // 12 distinct values spread over 14 positions
        let rule = ScoringVector::new(vec![12, 12, 11, 10, 9, 8, 7, 6, 5, 4, 3, 2, 2, 0]).unwrap();
        let out = reduce_x3c_different_values(&yes3(), &rule, Mode::CoWinner).unwrap();
        assert_eq!(out.instance.num_candidates(), 14);
        let report = verify_reduction(&out, SourceOracle::X3C(&yes3()), 10_000, 50_000_000);
        assert_eq!(report.status(), CheckStatus::Pass, "\n{}", report.render());
    }
}
