use super::{
    assemble, complete_prefix_suffix, ReductionError, ReductionOutput, SourceSolution,
    TightnessCheck, X3CInstance,
};
use crate::election::{CandidateId, Candidates, LinearOrder, Mode, PartialOrder, ScoringVector};
use crate::realize::MaxPartialScoreSpec;
use std::collections::BTreeMap;

fn shape_top_mid_zero(rule: &ScoringVector) -> Result<(i64, i64), ReductionError> {
    let m = rule.len();
    super::require(m >= 4, "vector too short")?;
    let a1 = rule.at(1);
    let a2 = rule.at(2);
    super::require(
        rule.at(m) == 0 && rule.at(m - 1) == a2 && a2 >= 1 && a1 > a2,
        "vector must be (a1, a2, ..., a2, 0) with a1 > a2 > 0",
    )?;
    Ok((a1, a2))
}

/// Cover instance -> possible-winner instance for vectors
/// `(a1, a2, ..., a2, 0)` with `a2 < a1 < 2 a2`.
///
/// Each subset candidate must take the last position once; the `q/3` slots
/// of the head votes go to the cover, and a chain of forced shed
/// positions lets exactly the cover subsets hand their element candidates
/// a top steal or a zero.
pub fn reduce_x3c_veto_plurality_small(
    x: &X3CInstance,
    rule: &ScoringVector,
    mode: Mode,
) -> Result<ReductionOutput, ReductionError> {
    x.check_reducible()?;
    let q = x.universe_size();
    let t = x.num_subsets();
    let total = 2 + 3 * t + q;
    super::expect_rule_len(rule, total)?;
    let (a1, a2) = shape_top_mid_zero(rule)?;
    super::require(a1 < 2 * a2, "need a1 < 2 a2")?;

    let mut cands = Candidates::new();
    let c = cands.add("c")?;
    let h = cands.add("h")?;
    let subsets: Vec<CandidateId> = (1..=t)
        .map(|z| cands.add(format!("s{z}")))
        .collect::<Result<_, _>>()?;
    let helpers: Vec<CandidateId> = (1..=t)
        .map(|z| cands.add(format!("d{z}")))
        .collect::<Result<_, _>>()?;
    let tees: Vec<CandidateId> = (1..=t)
        .map(|z| cands.add(format!("t{z}")))
        .collect::<Result<_, _>>()?;
    let elems: Vec<CandidateId> = (1..=q)
        .map(|e| cands.add(format!("e{e}")))
        .collect::<Result<_, _>>()?;
    let n = cands.len();

    let mut roles = vec![(c, "distinguished".into()), (h, "head".into())];
    roles.extend(subsets.iter().map(|&id| (id, "subset".to_string())));
    roles.extend(helpers.iter().map(|&id| (id, "subset-helper".to_string())));
    roles.extend(tees.iter().map(|&id| (id, "subset-tee".to_string())));
    roles.extend(elems.iter().map(|&id| (id, "element".to_string())));

    let mut votes = Vec::new();
    // head votes: h > middle > all subset candidates
    let head_vote = {
        let mut vote = PartialOrder::new(n);
        let mut is_sub = vec![false; n];
        for &sc in &subsets {
            is_sub[sc.index()] = true;
        }
        for u in (0..n as u32).map(CandidateId) {
            if u == h {
                continue;
            }
            if !is_sub[u.index()] {
                vote.add(h, u)?;
                for &sc in &subsets {
                    vote.add(u, sc)?;
                }
            }
        }
        vote
    };
    for _ in 0..q / 3 {
        votes.push(head_vote.clone());
    }
    // three votes per subset
    for z in 0..t {
        let [e1, e2, e3] = x.triples()[z];
        // h on top, subset and helper at the bottom pair
        let mut v1 = PartialOrder::new(n);
        for u in (0..n as u32).map(CandidateId) {
            if u == h || u == subsets[z] || u == helpers[z] {
                continue;
            }
            v1.add(h, u)?;
            v1.add(u, subsets[z])?;
            v1.add(u, helpers[z])?;
        }
        votes.push(v1);
        // first element on top unless the helper steals it; tee sheds
        let mut v2 = PartialOrder::new(n);
        for u in (0..n as u32).map(CandidateId) {
            if u == elems[e1 - 1] || u == tees[z] || u == helpers[z] {
                continue;
            }
            v2.add(elems[e1 - 1], u)?;
            v2.add(u, tees[z])?;
        }
        votes.push(v2);
        // second element on top unless the tee steals it; third sheds
        let mut v3 = PartialOrder::new(n);
        for u in (0..n as u32).map(CandidateId) {
            if u == elems[e2 - 1] || u == elems[e3 - 1] || u == tees[z] {
                continue;
            }
            v3.add(elems[e2 - 1], u)?;
            v3.add(u, elems[e3 - 1])?;
        }
        votes.push(v3);
    }

    let vp = votes.len() as i64;
    let mut targets = BTreeMap::new();
    for &sc in &subsets {
        targets.insert(sc, (vp - 1) * a2);
    }
    for &dc in helpers.iter().chain(&tees) {
        targets.insert(dc, a1 + (vp - 2) * a2);
    }
    for (e, &id) in (1..=q).zip(&elems) {
        let lead = x.leading_occurrences(e) as i64;
        targets.insert(id, (vp - lead + 1) * a2 + (lead - 1) * a1);
    }
    let dummy = h;
    let spec = MaxPartialScoreSpec {
        targets,
        dummy,
        mode,
        allow_subtraction: false,
    };

    let tightness = vec![TightnessCheck {
        name: "vote count".into(),
        lhs: vp,
        rhs: q as i64 / 3 + 3 * t as i64,
    }];

    let votes_for_witness = votes.clone();
    let x_ref = x.clone();
    let subs = subsets.clone();
    let helps = helpers.clone();
    let ts = tees.clone();
    let el = elems.clone();
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
        // head votes: the z-th cover subset takes the last slot
        for &z in chosen {
            out.push(complete_prefix_suffix(
                &votes_for_witness[out.len()],
                &[],
                &[subs[z]],
            )?);
        }
        for z in 0..x_ref.num_subsets() {
            if chosen.contains(&z) {
                out.push(complete_prefix_suffix(
                    &votes_for_witness[out.len()],
                    &[h],
                    &[subs[z], helps[z]],
                )?);
                out.push(complete_prefix_suffix(
                    &votes_for_witness[out.len()],
                    &[helps[z]],
                    &[ts[z]],
                )?);
                out.push(complete_prefix_suffix(
                    &votes_for_witness[out.len()],
                    &[ts[z]],
                    &[el[x_ref.triples()[z][2] - 1]],
                )?);
            } else {
                out.push(complete_prefix_suffix(
                    &votes_for_witness[out.len()],
                    &[h],
                    &[helps[z], subs[z]],
                )?);
                out.push(complete_prefix_suffix(
                    &votes_for_witness[out.len()],
                    &[],
                    &[ts[z], helps[z]],
                )?);
                out.push(complete_prefix_suffix(
                    &votes_for_witness[out.len()],
                    &[],
                    &[el[x_ref.triples()[z][2] - 1], ts[z]],
                )?);
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
        "x3c-veto-plurality-small",
        total - 2,
        roles,
        tightness,
        Box::new(witness),
    )
}

/// Cover instance -> possible-winner instance for vectors
/// `(a1, a2, ..., a2, 0)` with `a1 > 2 a2`.
///
/// Top votes hand out `t - q/3` first positions, bottom votes `q/3` last
/// positions; a helper's shaved allowance (`a1 - z` with
/// `z = a1 mod a2` below `3 a2` and `z = a2` above) makes the cascade
/// work only for subsets that took a last position, and those shed all
/// three of their element candidates.
pub fn reduce_x3c_veto_plurality_large(
    x: &X3CInstance,
    rule: &ScoringVector,
    mode: Mode,
) -> Result<ReductionOutput, ReductionError> {
    x.check_reducible()?;
    let q = x.universe_size();
    let t = x.num_subsets();
    let k = q / 3;
    let total = 2 + 2 * t + q;
    super::expect_rule_len(rule, total)?;
    let (a1, a2) = shape_top_mid_zero(rule)?;
    super::require(a1 > 2 * a2, "need a1 > 2 a2")?;
    let z_val = if a1 < 3 * a2 { a1 % a2 } else { a2 };

    let mut cands = Candidates::new();
    let c = cands.add("c")?;
    let h = cands.add("h")?;
    let subsets: Vec<CandidateId> = (1..=t)
        .map(|z| cands.add(format!("s{z}")))
        .collect::<Result<_, _>>()?;
    let helpers: Vec<CandidateId> = (1..=t)
        .map(|z| cands.add(format!("d{z}")))
        .collect::<Result<_, _>>()?;
    let elems: Vec<CandidateId> = (1..=q)
        .map(|e| cands.add(format!("e{e}")))
        .collect::<Result<_, _>>()?;
    let n = cands.len();

    let mut roles = vec![(c, "distinguished".into()), (h, "head".into())];
    roles.extend(subsets.iter().map(|&id| (id, "subset".to_string())));
    roles.extend(helpers.iter().map(|&id| (id, "subset-helper".to_string())));
    roles.extend(elems.iter().map(|&id| (id, "element".to_string())));

    let is_sub = {
        let mut v = vec![false; n];
        for &sc in &subsets {
            v[sc.index()] = true;
        }
        v
    };

    let mut votes = Vec::new();
    // top votes: subsets above the middle, h last
    let top_vote = {
        let mut vote = PartialOrder::new(n);
        for u in (0..n as u32).map(CandidateId) {
            if u == h || is_sub[u.index()] {
                continue;
            }
            for &sc in &subsets {
                vote.add(sc, u)?;
            }
            vote.add(u, h)?;
        }
        vote
    };
    for _ in 0..t - k {
        votes.push(top_vote.clone());
    }
    // bottom votes: h first, subsets below the middle
    let bottom_vote = {
        let mut vote = PartialOrder::new(n);
        for u in (0..n as u32).map(CandidateId) {
            if u == h || is_sub[u.index()] {
                continue;
            }
            vote.add(h, u)?;
            for &sc in &subsets {
                vote.add(u, sc)?;
            }
        }
        vote
    };
    for _ in 0..k {
        votes.push(bottom_vote.clone());
    }
    // three votes per subset
    for z in 0..t {
        let [e1, e2, e3] = x.triples()[z];
        // helper on top unless the subset steals it; first element sheds
        let mut w1 = PartialOrder::new(n);
        for u in (0..n as u32).map(CandidateId) {
            if u == helpers[z] || u == elems[e1 - 1] || u == subsets[z] {
                continue;
            }
            w1.add(helpers[z], u)?;
            w1.add(u, elems[e1 - 1])?;
        }
        votes.push(w1);
        for &e in &[e2, e3] {
            let mut w = PartialOrder::new(n);
            for u in (0..n as u32).map(CandidateId) {
                if u == h || u == helpers[z] || u == elems[e - 1] {
                    continue;
                }
                w.add(h, u)?;
                w.add(u, helpers[z])?;
                w.add(u, elems[e - 1])?;
            }
            w.add(h, helpers[z])?;
            w.add(h, elems[e - 1])?;
            votes.push(w);
        }
    }

    let vp = votes.len() as i64;
    let mut targets = BTreeMap::new();
    for &sc in &subsets {
        targets.insert(sc, (vp - 2) * a2 + a1);
    }
    for &dc in &helpers {
        targets.insert(dc, (vp - 2) * a2 + a1 - z_val);
    }
    for &id in &elems {
        targets.insert(id, (vp - 1) * a2);
    }
    let dummy = h;
    let spec = MaxPartialScoreSpec {
        targets,
        dummy,
        mode,
        allow_subtraction: z_val != a2,
    };

    let tightness = vec![TightnessCheck {
        name: "vote count".into(),
        lhs: vp,
        rhs: (t - k) as i64 + k as i64 + 3 * t as i64,
    }];

    let votes_for_witness = votes.clone();
    let x_ref = x.clone();
    let subs = subsets.clone();
    let helps = helpers.clone();
    let el = elems.clone();
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
            out.push(complete_prefix_suffix(
                &votes_for_witness[out.len()],
                &[subs[z]],
                &[h],
            )?);
        }
        for &z in chosen {
            out.push(complete_prefix_suffix(
                &votes_for_witness[out.len()],
                &[h],
                &[subs[z]],
            )?);
        }
        for z in 0..x_ref.num_subsets() {
            let [e1, e2, e3] = x_ref.triples()[z];
            if chosen.contains(&z) {
                out.push(complete_prefix_suffix(
                    &votes_for_witness[out.len()],
                    &[subs[z]],
                    &[el[e1 - 1]],
                )?);
                for &e in &[e2, e3] {
                    out.push(complete_prefix_suffix(
                        &votes_for_witness[out.len()],
                        &[h],
                        &[el[e - 1]],
                    )?);
                }
            } else {
                out.push(complete_prefix_suffix(
                    &votes_for_witness[out.len()],
                    &[helps[z]],
                    &[subs[z]],
                )?);
                for &e in &[e2, e3] {
                    let _ = e;
                    out.push(complete_prefix_suffix(
                        &votes_for_witness[out.len()],
                        &[h],
                        &[helps[z]],
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
        "x3c-veto-plurality-large",
        total - 2,
        roles,
        tightness,
        Box::new(witness),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{total_scores, wins};
    use crate::oracles::solve_x3c_bruteforce;

    fn vec_with(m: usize, a1: i64, a2: i64) -> ScoringVector {
        let mut v = vec![a2; m];
        v[0] = a1;
        v[m - 1] = 0;
        ScoringVector::new(v).unwrap()
    }

    #[test]
    fn small_accepts_and_sizes() {
        let x = X3CInstance::new(3, vec![[1, 2, 3]]).unwrap();
        // (3, 2, ..., 2, 0): 3 < 4
        let out =
            reduce_x3c_veto_plurality_small(&x, &vec_with(8, 3, 2), Mode::CoWinner).unwrap();
        assert_eq!(out.instance.num_candidates(), 8);
        assert_eq!(out.meta.n_partial, 4);
    }

    #[test]
    fn small_rejects_large_ratio() {
        let x = X3CInstance::new(3, vec![[1, 2, 3]]).unwrap();
        assert!(reduce_x3c_veto_plurality_small(&x, &vec_with(8, 5, 2), Mode::CoWinner).is_err());
    }

    #[test]
    fn small_witness_wins() {
        let x = X3CInstance::new(3, vec![[1, 2, 3]]).unwrap();
        for mode in [Mode::CoWinner, Mode::UniqueWinner] {
            let out = reduce_x3c_veto_plurality_small(&x, &vec_with(8, 3, 2), mode).unwrap();
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
    fn large_z_values() {
        let x = X3CInstance::new(3, vec![[1, 2, 3]]).unwrap();
        // 5 mod 2 = 1 below 3 a2; a2 = 2 above
        let out =
            reduce_x3c_veto_plurality_large(&x, &vec_with(7, 5, 2), Mode::CoWinner).unwrap();
        assert!(out.meta.spec.allow_subtraction);
        let d1 = out.meta.roles.iter().find(|(_, r)| r == "subset-helper").unwrap().0;
        assert_eq!(out.meta.spec.targets[&d1], (4 - 2) * 2 + 5 - 1);

        let out7 =
            reduce_x3c_veto_plurality_large(&x, &vec_with(7, 7, 2), Mode::CoWinner).unwrap();
        assert!(!out7.meta.spec.allow_subtraction);
        assert_eq!(out7.meta.spec.targets[&d1], (4 - 2) * 2 + 7 - 2);
    }

    #[test]
    fn large_sizes_q3_t1() {
        let x = X3CInstance::new(3, vec![[1, 2, 3]]).unwrap();
        let out =
            reduce_x3c_veto_plurality_large(&x, &vec_with(7, 5, 2), Mode::CoWinner).unwrap();
        assert_eq!(out.instance.num_candidates(), 7);
        assert_eq!(out.meta.n_partial, 4);
    }

    #[test]
    fn large_witness_wins() {
        let x = X3CInstance::new(3, vec![[1, 2, 3]]).unwrap();
        for (a1, a2) in [(5, 2), (7, 2)] {
            for mode in [Mode::CoWinner, Mode::UniqueWinner] {
                let out =
                    reduce_x3c_veto_plurality_large(&x, &vec_with(7, a1, a2), mode).unwrap();
                let cover = solve_x3c_bruteforce(&x, 1000).unwrap().unwrap();
                let ext = out
                    .witness_builder
                    .build(&SourceSolution::Cover(cover))
                    .unwrap();
                for (e, v) in ext.iter().zip(&out.instance.profile.votes) {
                    assert!(e.extends(v).unwrap());
                }
                let scores = total_scores(&ext, &out.instance.rule).unwrap();
                assert!(wins(&scores, out.instance.distinguished, mode), "a1={a1} {mode:?}");
            }
        }
    }
}
