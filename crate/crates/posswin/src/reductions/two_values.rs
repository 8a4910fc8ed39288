use super::{
    assemble, complete_with_prefix, ReductionError, ReductionOutput, SourceSolution,
    TightnessCheck, X3CInstance,
};
use crate::election::{CandidateId, Candidates, LinearOrder, Mode, PartialOrder, ScoringVector};
use crate::realize::MaxPartialScoreSpec;
use std::collections::BTreeMap;

/// Cover instance -> possible-winner instance for two-value vectors
/// `(a1, a2, 0, ..., 0)` with `3 a2 > a1 > 2 a2`.
///
/// A subset candidate either burns its single top allowance in a
/// selection vote or keeps it for its own subset vote, where taking the
/// top pushes a helper to the runner-up slot; the ratio window makes the
/// helper's allowance of `3 a2` reachable only that way, freeing the
/// subset's three element candidates from the scored slots.
pub fn reduce_x3c_two_values(
    x: &X3CInstance,
    rule: &ScoringVector,
    mode: Mode,
) -> Result<ReductionOutput, ReductionError> {
    x.check_reducible()?;
    let q = x.universe_size();
    let t = x.num_subsets();
    let total = 2 + 3 * t + q;
    super::expect_rule_len(rule, total)?;
    let a1 = rule.at(1);
    let a2 = rule.at(2);
    super::require(
        rule.len() >= 3 && rule.at(3) == 0,
        "vector must be zero from position 3 on",
    )?;
    super::require(
        a2 >= 1 && 3 * a2 > a1 && a1 > 2 * a2,
        "need 3 a2 > a1 > 2 a2 > 0",
    )?;

    let mut cands = Candidates::new();
    let c = cands.add("c")?;
    let xc = cands.add("x")?;
    let subsets: Vec<CandidateId> = (1..=t)
        .map(|z| cands.add(format!("s{z}")))
        .collect::<Result<_, _>>()?;
    let helpers: Vec<CandidateId> = (1..=t)
        .map(|z| cands.add(format!("d{z}")))
        .collect::<Result<_, _>>()?;
    let elems: Vec<CandidateId> = (1..=q)
        .map(|e| cands.add(format!("e{e}")))
        .collect::<Result<_, _>>()?;
    let chains: Vec<CandidateId> = (1..=t)
        .map(|z| cands.add(format!("h{z}")))
        .collect::<Result<_, _>>()?;
    let n = cands.len();
    debug_assert_eq!(n, total);

    let mut roles = vec![(c, "distinguished".into()), (xc, "top-blocker".into())];
    roles.extend(subsets.iter().map(|&id| (id, "subset".to_string())));
    roles.extend(helpers.iter().map(|&id| (id, "subset-helper".to_string())));
    roles.extend(elems.iter().map(|&id| (id, "element".to_string())));
    roles.extend(chains.iter().map(|&id| (id, "spacer".to_string())));

    let in_sh: Vec<bool> = {
        let mut v = vec![false; n];
        for &sc in subsets.iter().chain(&chains) {
            v[sc.index()] = true;
        }
        v
    };

    let mut votes = Vec::new();
    // selection votes: s_z > h_z > everything outside S and H
    let selection = {
        let mut vote = PartialOrder::new(n);
        for z in 0..t {
            vote.add(subsets[z], chains[z])?;
            for u in (0..n as u32).map(CandidateId) {
                if !in_sh[u.index()] {
                    vote.add(chains[z], u)?;
                }
            }
        }
        vote
    };
    for _ in 0..t - q / 3 {
        votes.push(selection.clone());
    }
    // three votes per subset
    for z in 0..t {
        let [e1, e2, e3] = x.triples()[z];
        // helper > first element > rest, subset floats above the rest
        let mut v1 = PartialOrder::new(n);
        v1.add(helpers[z], elems[e1 - 1])?;
        for u in (0..n as u32).map(CandidateId) {
            if u != helpers[z] && u != elems[e1 - 1] && u != subsets[z] {
                v1.add(elems[e1 - 1], u)?;
                v1.add(subsets[z], u)?;
            }
        }
        votes.push(v1);
        for &e in &[e2, e3] {
            // blocker on top, helper and element compete for the runner-up
            let mut v = PartialOrder::new(n);
            v.add(xc, helpers[z])?;
            v.add(xc, elems[e - 1])?;
            for u in (0..n as u32).map(CandidateId) {
                if u != xc && u != helpers[z] && u != elems[e - 1] {
                    v.add(helpers[z], u)?;
                    v.add(elems[e - 1], u)?;
                }
            }
            votes.push(v);
        }
    }

    let mut targets = BTreeMap::new();
    for &sc in &subsets {
        targets.insert(sc, a1);
    }
    for &hc in &helpers {
        targets.insert(hc, 3 * a2);
    }
    for (e, &id) in (1..=q).zip(&elems) {
        let n_e = x.occurrences(e) as i64;
        if n_e == 0 {
            continue; // stuck on zero positions; allowance suffices
        }
        targets.insert(id, (n_e - 1) * a2);
    }
    let dummy = chains[0];
    let spec = MaxPartialScoreSpec {
        targets,
        dummy,
        mode,
        allow_subtraction: false,
    };

    let tightness = vec![TightnessCheck {
        name: "vote count".into(),
        lhs: votes.len() as i64,
        rhs: (t - q / 3) as i64 + 3 * t as i64,
    }];

    let votes_for_witness = votes.clone();
    let x_ref = x.clone();
    let subs = subsets.clone();
    let helps = helpers.clone();
    let el = elems.clone();
    let chn = chains.clone();
    let witness = move |sol: &SourceSolution| -> Result<Vec<LinearOrder>, ReductionError> {
        let SourceSolution::Cover(chosen) = sol else {
            return Err(ReductionError::BadSolution("expected a cover".into()));
        };
        if !x_ref.is_exact_cover(chosen) {
            return Err(ReductionError::BadSolution(
                "chosen subsets are not an exact cover".into(),
            ));
        }
        let non_cover: Vec<usize> =
            (0..x_ref.num_subsets()).filter(|z| !chosen.contains(z)).collect();
        let mut out = Vec::new();
        for &z in &non_cover {
            out.push(complete_with_prefix(
                &votes_for_witness[out.len()],
                &[subs[z], chn[z]],
            )?);
        }
        for z in 0..x_ref.num_subsets() {
            let [e1, e2, e3] = x_ref.triples()[z];
            if chosen.contains(&z) {
                out.push(complete_with_prefix(
                    &votes_for_witness[out.len()],
                    &[subs[z], helps[z]],
                )?);
                let _ = e1;
                for _ in [e2, e3] {
                    out.push(complete_with_prefix(
                        &votes_for_witness[out.len()],
                        &[xc, helps[z]],
                    )?);
                }
            } else {
                out.push(complete_with_prefix(
                    &votes_for_witness[out.len()],
                    &[helps[z], el[e1 - 1]],
                )?);
                for &e in &[e2, e3] {
                    out.push(complete_with_prefix(
                        &votes_for_witness[out.len()],
                        &[xc, el[e - 1]],
                    )?);
                }
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
        "x3c-two-values",
        total - 2,
        roles,
        tightness,
        Box::new(witness),
    )
}
