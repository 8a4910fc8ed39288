use super::{
    assemble, complete_with_prefix, ReductionError, ReductionOutput, SourceSolution,
    TightnessCheck, X3CInstance,
};
use crate::election::{CandidateId, Candidates, LinearOrder, Mode, PartialOrder, ScoringVector};
use crate::realize::MaxPartialScoreSpec;
use std::collections::BTreeMap;

/// Cover instance -> possible-winner instance for the vector
/// `(2, 1, 0, ..., 0)`.
///
/// Ordered triples matter here: the third element of each subset plays a
/// different role than the first two, and the element targets count
/// third-position occurrences at double weight.
pub fn reduce_x3c_210(
    x: &X3CInstance,
    rule: &ScoringVector,
    mode: Mode,
) -> Result<ReductionOutput, ReductionError> {
    x.check_reducible()?;
    let q = x.universe_size();
    let t = x.num_subsets();
    super::require(t >= q / 3, "fewer subsets than spare-slot candidates need")?;
    let n_x = t - q / 3;
    let total = 2 + 3 * t + q + n_x;
    super::expect_rule_len(rule, total)?;
    super::require(
        rule.at(1) == 2 && rule.at(2) == 1 && rule.at(3) == 0,
        "vector must be (2, 1, 0, ..., 0)",
    )?;

    let mut cands = Candidates::new();
    let c = cands.add("c")?;
    let y = cands.add("y")?;
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
    let spares: Vec<CandidateId> = (1..=n_x)
        .map(|z| cands.add(format!("x{z}")))
        .collect::<Result<_, _>>()?;
    let n = cands.len();
    debug_assert_eq!(n, total);

    let mut roles = vec![(c, "distinguished".into()), (y, "top-blocker".into())];
    roles.extend(subsets.iter().map(|&id| (id, "subset".to_string())));
    roles.extend(helpers.iter().map(|&id| (id, "subset-helper".to_string())));
    roles.extend(tees.iter().map(|&id| (id, "subset-tee".to_string())));
    roles.extend(elems.iter().map(|&id| (id, "element".to_string())));
    roles.extend(spares.iter().map(|&id| (id, "spare-slot".to_string())));

    let mut votes = Vec::new();
    // first selection block: s_z > t_z > common mass
    let sel1 = {
        let mut vote = PartialOrder::new(n);
        let mut in_st = vec![false; n];
        for &cc in subsets.iter().chain(&tees) {
            in_st[cc.index()] = true;
        }
        for z in 0..t {
            vote.add(subsets[z], tees[z])?;
            for u in (0..n as u32).map(CandidateId) {
                if !in_st[u.index()] {
                    vote.add(tees[z], u)?;
                }
            }
        }
        vote
    };
    // second selection block: y > every tee > common mass
    let sel2 = {
        let mut vote = PartialOrder::new(n);
        for z in 0..t {
            vote.add(y, tees[z])?;
            for u in (0..n as u32).map(CandidateId) {
                if u != y && !tees.contains(&u) {
                    vote.add(tees[z], u)?;
                }
            }
        }
        vote
    };
    for _ in 0..n_x {
        votes.push(sel1.clone());
    }
    for _ in 0..n_x {
        votes.push(sel2.clone());
    }
    // three votes per subset
    for z in 0..t {
        let [e1, e2, e3] = x.triples()[z];
        let mut v1 = PartialOrder::new(n);
        v1.add(helpers[z], elems[e1 - 1])?;
        for u in (0..n as u32).map(CandidateId) {
            if u != helpers[z] && u != elems[e1 - 1] && u != subsets[z] {
                v1.add(elems[e1 - 1], u)?;
                v1.add(subsets[z], u)?;
            }
        }
        votes.push(v1);
        let mut v2 = PartialOrder::new(n);
        v2.add(y, helpers[z])?;
        v2.add(y, elems[e2 - 1])?;
        for u in (0..n as u32).map(CandidateId) {
            if u != y && u != helpers[z] && u != elems[e2 - 1] {
                v2.add(helpers[z], u)?;
                v2.add(elems[e2 - 1], u)?;
            }
        }
        votes.push(v2);
        // the spare-slot candidates float freely here
        let mut v3 = PartialOrder::new(n);
        for u in (0..n as u32).map(CandidateId) {
            if u == tees[z] || u == elems[e3 - 1] || spares.contains(&u) {
                continue;
            }
            v3.add(tees[z], u)?;
            v3.add(elems[e3 - 1], u)?;
        }
        votes.push(v3);
    }

    let vp = votes.len() as i64;
    let mut targets = BTreeMap::new();
    for &sc in subsets.iter().chain(&helpers).chain(&tees) {
        targets.insert(sc, 2);
    }
    for &sp in &spares {
        targets.insert(sp, 1);
    }
    let mut formula_target_sum = 6 * t as i64 + n_x as i64;
    for (e, &id) in (1..=q).zip(&elems) {
        let n_e = x.occurrences(e) as i64;
        let n_e3 = x.third_occurrences(e) as i64;
        formula_target_sum += 2 * n_e3 + (n_e - n_e3) - 1;
        if n_e == 0 {
            continue; // never reaches a scored slot; allowance suffices
        }
        targets.insert(id, 2 * n_e3 + (n_e - n_e3) - 1);
    }
    let dummy = y;
    let spec = MaxPartialScoreSpec {
        targets,
        dummy,
        mode,
        allow_subtraction: false,
    };

    // y sits first in the sel2 copies and the middle subset votes; the
    // other votes hand out 3 points each
    let fixed_y_votes = n_x as i64 + t as i64;
    let remaining = 3 * vp - 2 * fixed_y_votes;
    let tightness = vec![
        TightnessCheck {
            name: "remaining point mass".into(),
            lhs: remaining,
            rhs: 11 * t as i64 - 4 * q as i64 / 3,
        },
        TightnessCheck {
            name: "targets absorb the mass".into(),
            lhs: formula_target_sum,
            rhs: 11 * t as i64 - 4 * q as i64 / 3,
        },
    ];

    let votes_for_witness = votes.clone();
    let x_ref = x.clone();
    let subs = subsets.clone();
    let helps = helpers.clone();
    let ts = tees.clone();
    let el = elems.clone();
    let sp = spares.clone();
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
                &[subs[z], ts[z]],
            )?);
        }
        for &z in &non_cover {
            out.push(complete_with_prefix(
                &votes_for_witness[out.len()],
                &[y, ts[z]],
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
                out.push(complete_with_prefix(
                    &votes_for_witness[out.len()],
                    &[y, helps[z]],
                )?);
                out.push(complete_with_prefix(
                    &votes_for_witness[out.len()],
                    &[ts[z], el[e3 - 1]],
                )?);
            } else {
                let slot = non_cover.iter().position(|&w| w == z).unwrap();
                out.push(complete_with_prefix(
                    &votes_for_witness[out.len()],
                    &[helps[z], el[e1 - 1]],
                )?);
                out.push(complete_with_prefix(
                    &votes_for_witness[out.len()],
                    &[y, el[e2 - 1]],
                )?);
                out.push(complete_with_prefix(
                    &votes_for_witness[out.len()],
                    &[el[e3 - 1], sp[slot]],
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
        "x3c-210",
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

    fn rule(m: usize) -> ScoringVector {
        let mut v = vec![0i64; m];
        v[0] = 2;
        v[1] = 1;
        ScoringVector::new(v).unwrap()
    }

    #[test]
    fn q3_t1_sizes() {
        let x = X3CInstance::new(3, vec![[1, 2, 3]]).unwrap();
        let out = reduce_x3c_210(&x, &rule(8), Mode::CoWinner).unwrap();
        assert_eq!(out.instance.num_candidates(), 8);
        assert_eq!(out.meta.n_partial, 3);
        for t in &out.meta.tightness {
            assert!(t.holds(), "{t:?}");
        }
        // 11t - 4q/3 at t=1, q=3
        assert_eq!(out.meta.tightness[0].rhs, 7);
    }

    #[test]
    fn witness_wins() {
        let x = X3CInstance::new(3, vec![[1, 2, 3]]).unwrap();
        for mode in [Mode::CoWinner, Mode::UniqueWinner] {
            let out = reduce_x3c_210(&x, &rule(8), mode).unwrap();
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
    fn witness_wins_with_spares() {
        // t = 2 over q = 3 leaves one spare-slot candidate
        let x = X3CInstance::new(3, vec![[1, 2, 3], [2, 3, 1]]).unwrap();
        let m = 2 + 6 + 3 + 1;
        let out = reduce_x3c_210(&x, &rule(m), Mode::CoWinner).unwrap();
        let cover = solve_x3c_bruteforce(&x, 1000).unwrap().unwrap();
        let ext = out
            .witness_builder
            .build(&SourceSolution::Cover(cover))
            .unwrap();
        for (e, v) in ext.iter().zip(&out.instance.profile.votes) {
            assert!(e.extends(v).unwrap());
        }
        let scores = total_scores(&ext, &out.instance.rule).unwrap();
        assert!(wins(&scores, out.instance.distinguished, Mode::CoWinner));
    }

    #[test]
    fn rejects_wrong_vector() {
        let x = X3CInstance::new(3, vec![[1, 2, 3]]).unwrap();
        let mut v = vec![0i64; 8];
        v[0] = 3;
        v[1] = 1;
        let bad = ScoringVector::new(v).unwrap();
        assert!(reduce_x3c_210(&x, &bad, Mode::CoWinner).is_err());
    }
}
