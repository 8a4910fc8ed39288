use super::{
    assemble, complete_prefix_suffix, ReductionError, ReductionOutput, SourceSolution,
    TightnessCheck, X3CInstance,
};
use crate::election::{CandidateId, Candidates, LinearOrder, Mode, PartialOrder, ScoringVector};
use crate::realize::MaxPartialScoreSpec;
use std::collections::BTreeMap;

/// Cover instance -> possible-winner instance for vectors with a long
/// plateau after a drop at `i` and a position `j < i` worth at least
/// three times position `i`.
///
/// Subset candidates not in the cover burn their allowance on position
/// `j` in the copied selection votes; cover candidates keep it and spend
/// it on position `i` across their three subset votes, each time pushing
/// one element candidate down to the plateau.
pub fn reduce_x3c_ratio3(
    x: &X3CInstance,
    rule: &ScoringVector,
    i: usize,
    j: usize,
    mode: Mode,
) -> Result<ReductionOutput, ReductionError> {
    x.check_reducible()?;
    let q = x.universe_size();
    let t = x.num_subsets();
    let m = rule.len();
    super::require(j >= 1 && j < i && i + 1 <= m, "need 1 <= j < i <= m-1")?;
    super::require(rule.at(i) > rule.at(i + 1), "no strict drop after position i")?;
    super::require(rule.at(j) >= 3 * rule.at(i), "need alpha_j >= 3 alpha_i")?;

    let span = i - j; // filler set size per subset
    let core = 1 + t + q + t * span; // candidates outside the padding
    let f = core - span;

    // gadget occupies positions j ..= j-1+core
    super::require(
        j - 1 + core <= m,
        "vector too short for the gadget window",
    )?;
    super::require(
        rule.at(i + 1) == rule.at(j - 1 + core),
        "plateau after position i is too short",
    )?;

    let mut cands = Candidates::new();
    let c = cands.add("c")?;
    let subsets: Vec<CandidateId> = (1..=t)
        .map(|z| cands.add(format!("s{z}")))
        .collect::<Result<_, _>>()?;
    let elems: Vec<CandidateId> = (1..=q)
        .map(|e| cands.add(format!("e{e}")))
        .collect::<Result<_, _>>()?;
    let mut h_sets: Vec<Vec<CandidateId>> = Vec::with_capacity(t);
    for z in 1..=t {
        let hs: Vec<CandidateId> = (1..=span)
            .map(|x| cands.add(format!("h{z}_{x}")))
            .collect::<Result<_, _>>()?;
        h_sets.push(hs);
    }
    let mut roles: Vec<(CandidateId, String)> = vec![(c, "distinguished".into())];
    roles.extend(subsets.iter().map(|&id| (id, "subset".into())));
    roles.extend(elems.iter().map(|&id| (id, "element".into())));
    for hs in &h_sets {
        roles.extend(hs.iter().map(|&id| (id, "window-filler".into())));
    }
    let n_pre = j - 1;
    let n_post = m - core - n_pre;
    let mut prepads = Vec::new();
    let mut postpads = Vec::new();
    for p in 0..n_pre {
        let id = cands.add(format!("top{}", p + 1))?;
        roles.push((id, "filler".into()));
        prepads.push(id);
    }
    for p in 0..n_post {
        let id = cands.add(format!("pad{}", p + 1))?;
        roles.push((id, "filler".into()));
        postpads.push(id);
    }

    let n = cands.len();
    let in_sh: Vec<bool> = {
        let mut v = vec![false; n];
        for &sc in &subsets {
            v[sc.index()] = true;
        }
        for hs in &h_sets {
            for &hc in hs {
                v[hc.index()] = true;
            }
        }
        v
    };
    let is_pad: Vec<bool> = {
        let mut v = vec![false; n];
        for &p in prepads.iter().chain(&postpads) {
            v[p.index()] = true;
        }
        v
    };

    let pin_pads = |vote: &mut PartialOrder| -> Result<(), ReductionError> {
        for w in prepads.windows(2) {
            vote.add(w[0], w[1])?;
        }
        for w in postpads.windows(2) {
            vote.add(w[0], w[1])?;
        }
        for xx in (0..n as u32).map(CandidateId) {
            if is_pad[xx.index()] {
                continue;
            }
            if let Some(&lp) = prepads.last() {
                vote.add(lp, xx)?;
            }
            if let Some(&fp) = postpads.first() {
                vote.add(xx, fp)?;
            }
        }
        Ok(())
    };

    let mut votes = Vec::new();
    // selection votes: every subset chain s_z > H_z > common mass
    let selection_vote = {
        let mut vote = PartialOrder::new(n);
        for z in 0..t {
            vote.add(subsets[z], h_sets[z][0])?;
            for w in h_sets[z].windows(2) {
                vote.add(w[0], w[1])?;
            }
            for u in (0..n as u32).map(CandidateId) {
                if !in_sh[u.index()] && !is_pad[u.index()] {
                    vote.add(*h_sets[z].last().unwrap(), u)?;
                }
            }
        }
        pin_pads(&mut vote)?;
        vote
    };
    let copies = t - q / 3;
    for _ in 0..copies {
        votes.push(selection_vote.clone());
    }
    // three votes per subset: the first filler set on top, then the
    // subset candidate next to one of its elements
    for z in 0..t {
        let triple = x.triples()[z];
        for &e in &triple {
            let mut vote = PartialOrder::new(n);
            let pair = [subsets[z], elems[e - 1]];
            for w in h_sets[0].windows(2) {
                vote.add(w[0], w[1])?;
            }
            for &p in &pair {
                vote.add(*h_sets[0].last().unwrap(), p)?;
            }
            for u in (0..n as u32).map(CandidateId) {
                if u == pair[0] || u == pair[1] || is_pad[u.index()] {
                    continue;
                }
                if h_sets[0].contains(&u) {
                    continue;
                }
                for &p in &pair {
                    vote.add(p, u)?;
                }
            }
            pin_pads(&mut vote)?;
            votes.push(vote);
        }
    }

    let vp = votes.len() as i64;
    let alpha_j = rule.at(j);
    let alpha_i = rule.at(i);
    let plateau = rule.at(i + 1);
    let mut targets = BTreeMap::new();
    for &sc in &subsets {
        targets.insert(sc, alpha_j + (vp - 1) * plateau);
    }
    for (e, &id) in (1..=q).zip(&elems) {
        let n_e = x.occurrences(e) as i64;
        if n_e == 0 {
            continue; // can never leave the plateau; allowance suffices
        }
        targets.insert(id, (n_e - 1) * alpha_i + (vp - n_e + 1) * plateau);
    }
    let dummy = postpads
        .first()
        .or(prepads.first())
        .copied()
        .unwrap_or_else(|| *h_sets[t - 1].last().unwrap());
    let spec = MaxPartialScoreSpec {
        targets,
        dummy,
        mode,
        allow_subtraction: false,
    };

    let tightness = vec![TightnessCheck {
        name: "vote count".into(),
        lhs: vp,
        rhs: (t - q / 3) as i64 + 3 * t as i64,
    }];

    let votes_for_witness = votes.clone();
    let x_ref = x.clone();
    let h_ref = h_sets.clone();
    let subs = subsets.clone();
    let el = elems.clone();
    let wit_pre = prepads.clone();
    let wit_post = postpads.clone();
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
        // selection copies: z-th copy selects the z-th non-cover subset
        for (copy, &z) in non_cover.iter().enumerate() {
            let _ = copy;
            let mut prefix = wit_pre.clone();
            prefix.push(subs[z]);
            prefix.extend(h_ref[z].iter().copied());
            out.push(complete_prefix_suffix(
                &votes_for_witness[out.len()],
                &prefix,
                &wit_post,
            )?);
        }
        // subset triples: cover subsets sit at position i and shift their
        // element to the plateau; others take the slot below
        for z in 0..x_ref.num_subsets() {
            let triple = x_ref.triples()[z];
            for &e in &triple {
                let mut prefix = wit_pre.clone();
                prefix.extend(h_ref[0].iter().copied());
                if chosen.contains(&z) {
                    prefix.push(subs[z]);
                    prefix.push(el[e - 1]);
                } else {
                    prefix.push(el[e - 1]);
                    prefix.push(subs[z]);
                }
                out.push(complete_prefix_suffix(
                    &votes_for_witness[out.len()],
                    &prefix,
                    &wit_post,
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
        "x3c-ratio3",
        f,
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

    fn rule_for(core: usize, j_extra: usize) -> ScoringVector {
        // (3, 1, 0, ..., 0): i = 2, j = 1
        let m = core + j_extra;
        let mut v = vec![0i64; m];
        v[0] = 3;
        v[1] = 1;
        ScoringVector::new(v).unwrap()
    }

    #[test]
    fn accepts_ratio_three() {
        let x = X3CInstance::new(3, vec![[1, 2, 3]]).unwrap();
        // core = 1 + 1 + 3 + 1 = 6
        let rule = rule_for(6, 1);
        let out = reduce_x3c_ratio3(&x, &rule, 2, 1, Mode::CoWinner).unwrap();
        assert_eq!(out.meta.n_partial, 3);
        assert_eq!(out.meta.f_value, 5);
    }

    #[test]
    fn vote_count_q3_t2() {
        let x = X3CInstance::new(3, vec![[1, 2, 3], [2, 3, 1]]).unwrap();
        // core = 1 + 2 + 3 + 2 = 8
        let rule = rule_for(8, 1);
        let out = reduce_x3c_ratio3(&x, &rule, 2, 1, Mode::CoWinner).unwrap();
        assert_eq!(out.meta.n_partial, 7);
    }

    #[test]
    fn rejects_small_ratio() {
        let x = X3CInstance::new(3, vec![[1, 2, 3]]).unwrap();
        let mut v = vec![0i64; 7];
        v[0] = 2;
        v[1] = 1;
        let rule = ScoringVector::new(v).unwrap();
        assert!(matches!(
            reduce_x3c_ratio3(&x, &rule, 2, 1, Mode::CoWinner),
            Err(ReductionError::ShapeViolated(_))
        ));
    }

    #[test]
    fn witness_wins() {
        let x = X3CInstance::new(3, vec![[1, 2, 3]]).unwrap();
        let rule = rule_for(6, 1);
        for mode in [Mode::CoWinner, Mode::UniqueWinner] {
            let out = reduce_x3c_ratio3(&x, &rule, 2, 1, mode).unwrap();
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
}
