use super::{
    assemble, complete_prefix_suffix, MCInstance, ReductionError, ReductionOutput, SourceSolution,
    TightnessCheck, Vertex,
};
use crate::election::{CandidateId, Candidates, LinearOrder, Mode, PartialOrder, ScoringVector};
use crate::realize::MaxPartialScoreSpec;
use std::collections::BTreeMap;

/// Which gadget a partial vote realizes; drives witness extension.
#[derive(Debug, Clone, Copy)]
enum VoteTag {
    /// Ordered color pair (i, j), copy index within the t-1 copies.
    EdgeSel { i: usize, j: usize, copy: usize },
    /// Color, copy index within the s-1 copies.
    VertexSelA { color: usize, copy: usize },
    /// Cascade vote for vertex `v` of `color` at stage `z`.
    VertexSelB { color: usize, v: usize, z: usize },
    /// Ordered color pair (i, j).
    VertexEdge { i: usize, j: usize },
    /// Unordered color pair i < j.
    EdgeEdge { i: usize, j: usize },
}

/// Candidate ids of the clique gadget, separated from the registry so the
/// witness closure can own them.
#[derive(Clone)]
struct GadgetIds {
    c: CandidateId,
    /// vertex copies r_1..r_{k-1} per (color, vertex index)
    vertex: BTreeMap<(usize, usize), Vec<CandidateId>>,
    /// ordered edge candidates rg and rg'
    edge: BTreeMap<(Vertex, Vertex), CandidateId>,
    edge_p: BTreeMap<(Vertex, Vertex), CandidateId>,
    /// c_z^r dummies per (color, vertex index)
    dx: BTreeMap<(usize, usize), Vec<CandidateId>>,
    /// d_z^i dummies per color
    d1: Vec<Vec<CandidateId>>,
    /// d^i demand dummies per color
    d2: Vec<CandidateId>,
    k: usize,
    s: usize,
    t: usize,
}

struct Gadget {
    cands: Candidates,
    ids: GadgetIds,
    votes: Vec<(VoteTag, Vec<(CandidateId, CandidateId)>)>,
}

fn build_gadget(g: &MCInstance) -> Result<Gadget, ReductionError> {
    let (s, t) = g.uniformity().ok_or(ReductionError::NonUniformInstance)?;
    let k = g.num_colors();
    if k < 3 {
        return Err(ReductionError::InvalidSource(
            "need at least three color classes".into(),
        ));
    }

    let mut cands = Candidates::new();
    let c = cands.add("c")?;
    let mut vertex = BTreeMap::new();
    let mut dx = BTreeMap::new();
    for color in 0..k {
        for v in 0..s {
            let name = g.vertex_name(Vertex { color, index: v }).to_string();
            let copies: Vec<CandidateId> = (1..k)
                .map(|p| cands.add(format!("{name}_{p}")))
                .collect::<Result<_, _>>()?;
            vertex.insert((color, v), copies);
            let dummies: Vec<CandidateId> = (1..=k - 2)
                .map(|z| cands.add(format!("cx_{name}_{z}")))
                .collect::<Result<_, _>>()?;
            dx.insert((color, v), dummies);
        }
    }
    let mut edge = BTreeMap::new();
    let mut edge_p = BTreeMap::new();
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            for (r, gv) in ordered_edges(g, i, j) {
                let rn = g.vertex_name(r).to_string();
                let gn = g.vertex_name(gv).to_string();
                edge.insert((r, gv), cands.add(format!("x_{rn}_{gn}"))?);
                edge_p.insert((r, gv), cands.add(format!("xp_{rn}_{gn}"))?);
            }
        }
    }
    let mut d1 = Vec::new();
    let mut d2 = Vec::new();
    for color in 0..k {
        let row: Vec<CandidateId> = (1..=k - 2)
            .map(|z| cands.add(format!("d1_{color}_{z}")))
            .collect::<Result<_, _>>()?;
        d1.push(row);
        d2.push(cands.add(format!("d2_{color}"))?);
    }
    let ids = GadgetIds {
        c,
        vertex,
        edge,
        edge_p,
        dx,
        d1,
        d2,
        k,
        s,
        t,
    };

    // partial votes as explicit constraint pairs
    let mut votes: Vec<(VoteTag, Vec<(CandidateId, CandidateId)>)> = Vec::new();
    // edge selection: t-1 copies per ordered color pair
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let pairs: Vec<(CandidateId, CandidateId)> = ordered_edges(g, i, j)
                .into_iter()
                .map(|(r, gv)| (ids.edge[&(r, gv)], ids.edge_p[&(r, gv)]))
                .collect();
            for copy in 0..t.saturating_sub(1) {
                votes.push((VoteTag::EdgeSel { i, j, copy }, pairs.clone()));
            }
        }
    }
    // vertex selection stage A: s-1 copies per color
    for color in 0..k {
        let pairs: Vec<(CandidateId, CandidateId)> = (0..s)
            .map(|v| (ids.vertex[&(color, v)][0], ids.dx[&(color, v)][0]))
            .collect();
        for copy in 0..s.saturating_sub(1) {
            votes.push((VoteTag::VertexSelA { color, copy }, pairs.clone()));
        }
    }
    // vertex selection stage B: the cascade
    for color in 0..k {
        for v in 0..s {
            let cop = &ids.vertex[&(color, v)];
            let dxr = &ids.dx[&(color, v)];
            for z in 1..=k - 2 {
                let pairs = if z == k - 2 {
                    vec![(dxr[k - 3], ids.d1[color][k - 3]), (cop[k - 2], ids.d2[color])]
                } else if z % 2 == 1 {
                    vec![(dxr[z - 1], dxr[z]), (cop[z], cop[z + 1])]
                } else {
                    vec![(dxr[z - 1], dxr[z]), (ids.d1[color][z - 2], ids.d1[color][z - 1])]
                };
                votes.push((VoteTag::VertexSelB { color, v, z }, pairs));
            }
        }
    }
    // vertex-edge match per ordered pair
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let copy_index = if j < i { j } else { j - 1 }; // r_j resp. r_{j-1}, 0-based
            let pairs: Vec<(CandidateId, CandidateId)> = ordered_edges(g, i, j)
                .into_iter()
                .map(|(r, gv)| (ids.edge[&(r, gv)], ids.vertex[&(r.color, r.index)][copy_index]))
                .collect();
            votes.push((VoteTag::VertexEdge { i, j }, pairs));
        }
    }
    // edge-edge match per unordered pair
    for i in 0..k {
        for j in i + 1..k {
            let pairs: Vec<(CandidateId, CandidateId)> = g
                .edges_between(i, j)
                .into_iter()
                .map(|(r, gv)| (ids.edge_p[&(r, gv)], ids.edge_p[&(gv, r)]))
                .collect();
            votes.push((VoteTag::EdgeEdge { i, j }, pairs));
        }
    }

    Ok(Gadget { cands, ids, votes })
}

/// Edges of the ordered color pair (i, j) as (vertex-in-i, vertex-in-j).
fn ordered_edges(g: &MCInstance, i: usize, j: usize) -> Vec<(Vertex, Vertex)> {
    let (lo, hi) = (i.min(j), i.max(j));
    g.edges_between(lo, hi)
        .into_iter()
        .map(|(a, b)| if a.color == i { (a, b) } else { (b, a) })
        .collect()
}

/// The pair of candidates the winning extension sends to the scored slots
/// of one vote, given the clique solution (one vertex per color).
fn selected_pair(
    ids: &GadgetIds,
    g: &MCInstance,
    clique: &[Vertex],
    tag: VoteTag,
) -> Result<(CandidateId, CandidateId), ReductionError> {
    let pick = |color: usize| {
        clique
            .iter()
            .copied()
            .find(|v| v.color == color)
            .expect("one vertex per color")
    };
    Ok(match tag {
        VoteTag::EdgeSel { i, j, copy } => {
            let sol = (pick(i), pick(j));
            let rest: Vec<(Vertex, Vertex)> = ordered_edges(g, i, j)
                .into_iter()
                .filter(|&e| e != sol)
                .collect();
            let e = rest.get(copy).ok_or_else(|| {
                ReductionError::BadSolution(
                    "edge-selection copies exceed non-solution edges".into(),
                )
            })?;
            (ids.edge[e], ids.edge_p[e])
        }
        VoteTag::VertexSelA { color, copy } => {
            let rest: Vec<usize> = (0..ids.s).filter(|&v| v != pick(color).index).collect();
            let v = rest[copy];
            (ids.vertex[&(color, v)][0], ids.dx[&(color, v)][0])
        }
        VoteTag::VertexSelB { color, v, z } => {
            let solution = pick(color).index == v;
            let cop = &ids.vertex[&(color, v)];
            let dxr = &ids.dx[&(color, v)];
            let k = ids.k;
            if z == k - 2 {
                if solution {
                    (dxr[k - 3], ids.d1[color][k - 3])
                } else {
                    (cop[k - 2], ids.d2[color])
                }
            } else if z % 2 == 1 {
                if solution {
                    (dxr[z - 1], dxr[z])
                } else {
                    (cop[z], cop[z + 1])
                }
            } else if solution {
                (ids.d1[color][z - 2], ids.d1[color][z - 1])
            } else {
                (dxr[z - 1], dxr[z])
            }
        }
        VoteTag::VertexEdge { i, j } => {
            let sol = (pick(i), pick(j));
            let copy_index = if j < i { j } else { j - 1 };
            (
                ids.edge[&sol],
                ids.vertex[&(sol.0.color, sol.0.index)][copy_index],
            )
        }
        VoteTag::EdgeEdge { i, j } => {
            let sol = (pick(i), pick(j));
            (ids.edge_p[&sol], ids.edge_p[&(sol.1, sol.0)])
        }
    })
}

/// Twice the closed-form vote count: 2(t+s)(k^2-k) + k^2 - 3k.
fn double_vote_count_formula(k: i64, s: i64, t: i64) -> i64 {
    2 * t * (k * k - k) + 2 * s * (k * k - k) + k * k - 3 * k
}

fn role_table(ids: &GadgetIds) -> Vec<(CandidateId, String)> {
    let mut roles: Vec<(CandidateId, String)> = vec![(ids.c, "distinguished".into())];
    for cs in ids.vertex.values() {
        roles.extend(cs.iter().map(|&id| (id, "vertex".into())));
    }
    for &id in ids.edge.values() {
        roles.push((id, "edge".into()));
    }
    for &id in ids.edge_p.values() {
        roles.push((id, "edge-check".into()));
    }
    for cs in ids.dx.values() {
        roles.extend(cs.iter().map(|&id| (id, "vertex-dummy".into())));
    }
    for row in &ids.d1 {
        roles.extend(row.iter().map(|&id| (id, "stage-dummy".into())));
    }
    roles.extend(ids.d2.iter().map(|&id| (id, "demand-dummy".into())));
    roles
}

fn add_pads(
    cands: &mut Candidates,
    roles: &mut Vec<(CandidateId, String)>,
    n_pre: usize,
    n_post: usize,
) -> Result<(Vec<CandidateId>, Vec<CandidateId>), ReductionError> {
    let mut prepads = Vec::with_capacity(n_pre);
    let mut postpads = Vec::with_capacity(n_post);
    for i in 0..n_pre {
        let id = cands.add(format!("top{}", i + 1))?;
        prepads.push(id);
        roles.push((id, "filler".into()));
    }
    for i in 0..n_post {
        let id = cands.add(format!("pad{}", i + 1))?;
        postpads.push(id);
        roles.push((id, "filler".into()));
    }
    Ok((prepads, postpads))
}

/// Pins the pad chains: prepads totally ordered above everything,
/// postpads totally ordered below everything.
fn fix_pads(
    vote: &mut PartialOrder,
    prepads: &[CandidateId],
    postpads: &[CandidateId],
) -> Result<(), ReductionError> {
    let n = vote.len();
    let mut is_pad = vec![false; n];
    for &p in prepads.iter().chain(postpads) {
        is_pad[p.index()] = true;
    }
    for w in prepads.windows(2) {
        vote.add(w[0], w[1])?;
    }
    for w in postpads.windows(2) {
        vote.add(w[0], w[1])?;
    }
    for x in (0..n as u32).map(CandidateId) {
        if is_pad[x.index()] {
            continue;
        }
        if let Some(&last_pre) = prepads.last() {
            vote.add(last_pre, x)?;
        }
        if let Some(&first_post) = postpads.first() {
            vote.add(x, first_post)?;
        }
    }
    Ok(())
}

/// Clique instance -> possible-winner instance for vectors with a long
/// plateau ending just before position `i` (`alpha_{i-1} > alpha_i`,
/// `i <= m-1`).
///
/// Every gadget candidate must fall to one of the two trailing scored
/// slots at least once (the per-color demand dummies `s-1` times); the
/// slot supply exactly matches those demands, so the placements encode a
/// multicolored clique.
pub fn reduce_mc_plateau(
    g: &MCInstance,
    rule: &ScoringVector,
    i: usize,
    mode: Mode,
) -> Result<ReductionOutput, ReductionError> {
    let gadget = build_gadget(g)?;
    let Gadget {
        mut cands,
        ids,
        votes: raw_votes,
    } = gadget;
    let m = rule.len();
    let n_c = cands.len();
    super::require(i >= 2 && i + 1 <= m, "need 2 <= i <= m-1")?;
    super::require(rule.at(i - 1) > rule.at(i), "no strict drop enters position i")?;
    let window = n_c - 2;
    super::require(i > window, "plateau before position i is too short")?;
    let ws = i - window;
    super::require(
        rule.at(ws) == rule.at(i - 1),
        "plateau before position i is too short",
    )?;
    super::require(
        m > n_c,
        "vector leaves no filler position beyond the gadget candidates",
    )?;

    let mut roles = role_table(&ids);
    let (prepads, postpads) = add_pads(&mut cands, &mut roles, ws - 1, m - (i + 1))?;

    let n = cands.len();
    let mut votes = Vec::with_capacity(raw_votes.len());
    for (_, pairs) in &raw_votes {
        let mut vote = PartialOrder::new(n);
        let mut listed = vec![false; n];
        for &(a, b) in pairs {
            vote.add(a, b)?;
            listed[a.index()] = true;
            listed[b.index()] = true;
        }
        let mut is_pad = vec![false; n];
        for &p in prepads.iter().chain(&postpads) {
            is_pad[p.index()] = true;
        }
        // unnamed candidates stay ahead of the named ones
        for u in (0..n as u32).map(CandidateId) {
            if listed[u.index()] || is_pad[u.index()] {
                continue;
            }
            for l in (0..n as u32).map(CandidateId) {
                if listed[l.index()] {
                    vote.add(u, l)?;
                }
            }
        }
        fix_pads(&mut vote, &prepads, &postpads)?;
        votes.push(vote);
    }

    let vp = votes.len() as i64;
    let (k, s, t) = (ids.k as i64, ids.s as i64, ids.t as i64);
    let hi = rule.at(i - 1);
    let slot_a = rule.at(i);
    let slot_b = rule.at(i + 1);
    let mut targets = BTreeMap::new();
    for id in (0..n_c as u32).map(CandidateId) {
        if id == ids.c {
            continue;
        }
        if ids.d2.contains(&id) {
            // equal slot values collapse the two cases
            let low = if slot_a == slot_b { slot_a } else { slot_b };
            targets.insert(id, (s - 1) * low + (vp - s + 1) * hi);
        } else {
            targets.insert(id, slot_a + (vp - 1) * hi);
        }
    }
    let dummy = postpads
        .first()
        .or(prepads.first())
        .copied()
        .expect("at least one filler");
    let spec = MaxPartialScoreSpec {
        targets,
        dummy,
        mode,
        allow_subtraction: false,
    };

    let demand = (n_c as i64 - 1 - k) + k * (s - 1);
    let tightness = vec![
        TightnessCheck {
            name: "vote count closed form".into(),
            lhs: 2 * vp,
            rhs: double_vote_count_formula(k, s, t),
        },
        TightnessCheck {
            name: "slot supply equals demand".into(),
            lhs: 2 * vp,
            rhs: demand,
        },
    ];

    let tags: Vec<VoteTag> = raw_votes.iter().map(|(t, _)| *t).collect();
    let votes_for_witness = votes.clone();
    let g_ref = g.clone();
    let c = ids.c;
    let wit_pre = prepads.clone();
    let wit_post = postpads.clone();
    let witness = move |sol: &SourceSolution| -> Result<Vec<LinearOrder>, ReductionError> {
        let SourceSolution::Clique(clique) = sol else {
            return Err(ReductionError::BadSolution("expected a clique".into()));
        };
        if !g_ref.is_clique(clique) {
            return Err(ReductionError::BadSolution(
                "chosen vertices are not a multicolored clique".into(),
            ));
        }
        let mut out = Vec::new();
        for (idx, tag) in tags.iter().enumerate() {
            let (a, b) = selected_pair(&ids, &g_ref, clique, *tag)?;
            let mut suffix = vec![a, b];
            suffix.extend(wit_post.iter().copied());
            out.push(complete_prefix_suffix(
                &votes_for_witness[idx],
                &wit_pre,
                &suffix,
            )?);
        }
        Ok(out)
    };

    assemble(
        cands,
        votes,
        c,
        spec,
        rule.clone(),
        "mc-plateau",
        window,
        roles,
        tightness,
        Box::new(witness),
    )
}

/// Clique instance -> possible-winner instance for vectors with a long
/// plateau after a drop at position `i >= 2` and some `j < i` with
/// `alpha_j < 2 alpha_{j+1}`.
///
/// Same gadget with every pair constraint flipped: named candidates sit
/// below unnamed ones, the scored slots move to positions `j` and `j+1`
/// (with per-pair filler sets absorbing positions up to `i` when
/// `j < i-1`), and the tightness argument runs in reverse.
pub fn reduce_mc_reversed(
    g: &MCInstance,
    rule: &ScoringVector,
    i: usize,
    j: usize,
    mode: Mode,
) -> Result<ReductionOutput, ReductionError> {
    let gadget = build_gadget(g)?;
    let Gadget {
        mut cands,
        ids,
        votes: raw_votes,
    } = gadget;
    let m = rule.len();
    super::require(i >= 2 && i < m, "need 2 <= i <= m-1")?;
    super::require(j >= 1 && j < i, "need 1 <= j < i")?;
    super::require(rule.at(i) > rule.at(i + 1), "no strict drop after position i")?;
    super::require(
        rule.at(j) < 2 * rule.at(j + 1),
        "need alpha_j < 2 alpha_{j+1}",
    )?;
    let n_c_base = cands.len();

    // one filler set per distinct flipped pair when j < i-1
    let h_size = i - j - 1;
    let mut roles = role_table(&ids);
    let mut h_sets: BTreeMap<(CandidateId, CandidateId), Vec<CandidateId>> = BTreeMap::new();
    if h_size > 0 {
        let mut counter = 0usize;
        for (_, pairs) in &raw_votes {
            for &(a, b) in pairs {
                if h_sets.contains_key(&(b, a)) {
                    continue;
                }
                counter += 1;
                let mut hs = Vec::with_capacity(h_size);
                for x in 0..h_size {
                    let id = cands.add(format!("hf_{counter}_{}", x + 1))?;
                    roles.push((id, "pair-filler".into()));
                    hs.push(id);
                }
                h_sets.insert((b, a), hs);
            }
        }
    }

    let n_c = cands.len();
    let window = n_c - 2;
    super::require(
        i + window <= m && rule.at(i + 1) == rule.at(i + window),
        "plateau after position i is too short",
    )?;
    super::require(
        m > n_c + (j - 1),
        "vector leaves no filler position beyond the gadget candidates",
    )?;
    let (prepads, postpads) = add_pads(&mut cands, &mut roles, j - 1, m - n_c - (j - 1))?;

    let n = cands.len();
    let mut votes = Vec::with_capacity(raw_votes.len());
    for (_, pairs) in &raw_votes {
        let mut vote = PartialOrder::new(n);
        let mut listed = vec![false; n];
        for &(a, b) in pairs {
            // flipped orientation
            vote.add(b, a)?;
            listed[a.index()] = true;
            listed[b.index()] = true;
            for &hc in h_sets.get(&(b, a)).map(|v| v.as_slice()).unwrap_or(&[]) {
                vote.add(a, hc)?;
                listed[hc.index()] = true;
            }
        }
        let mut is_pad = vec![false; n];
        for &p in prepads.iter().chain(&postpads) {
            is_pad[p.index()] = true;
        }
        // named candidates sit below the unnamed ones
        for u in (0..n as u32).map(CandidateId) {
            if listed[u.index()] || is_pad[u.index()] {
                continue;
            }
            for l in (0..n as u32).map(CandidateId) {
                if listed[l.index()] {
                    vote.add(l, u)?;
                }
            }
        }
        fix_pads(&mut vote, &prepads, &postpads)?;
        votes.push(vote);
    }

    let vp = votes.len() as i64;
    let (k, s, t) = (ids.k as i64, ids.s as i64, ids.t as i64);
    let top = rule.at(j);
    let rest = rule.at(i + 1);
    let mut targets = BTreeMap::new();
    for id in (0..n_c_base as u32).map(CandidateId) {
        if id == ids.c {
            continue;
        }
        if ids.d2.contains(&id) {
            targets.insert(id, (s - 1) * top + (vp - s + 1) * rest);
        } else {
            targets.insert(id, top + (vp - 1) * rest);
        }
    }
    let dummy = postpads
        .first()
        .or(prepads.first())
        .copied()
        .expect("at least one filler");
    let spec = MaxPartialScoreSpec {
        targets,
        dummy,
        mode,
        allow_subtraction: false,
    };

    let demand = (n_c_base as i64 - 1 - k) + k * (s - 1);
    let tightness = vec![
        TightnessCheck {
            name: "vote count closed form".into(),
            lhs: 2 * vp,
            rhs: double_vote_count_formula(k, s, t),
        },
        TightnessCheck {
            name: "slot supply equals demand".into(),
            lhs: 2 * vp,
            rhs: demand,
        },
    ];

    let tags: Vec<VoteTag> = raw_votes.iter().map(|(t, _)| *t).collect();
    let votes_for_witness = votes.clone();
    let g_ref = g.clone();
    let c = ids.c;
    let wit_pre = prepads.clone();
    let wit_post = postpads.clone();
    let witness = move |sol: &SourceSolution| -> Result<Vec<LinearOrder>, ReductionError> {
        let SourceSolution::Clique(clique) = sol else {
            return Err(ReductionError::BadSolution("expected a clique".into()));
        };
        if !g_ref.is_clique(clique) {
            return Err(ReductionError::BadSolution(
                "chosen vertices are not a multicolored clique".into(),
            ));
        }
        let mut out = Vec::new();
        for (idx, tag) in tags.iter().enumerate() {
            let (a, b) = selected_pair(&ids, &g_ref, clique, *tag)?;
            // flipped: the pair tops the vote, its fillers right below
            let mut prefix = wit_pre.clone();
            prefix.push(b);
            prefix.push(a);
            if let Some(hs) = h_sets.get(&(b, a)) {
                prefix.extend(hs.iter().copied());
            }
            out.push(complete_prefix_suffix(
                &votes_for_witness[idx],
                &prefix,
                &wit_post,
            )?);
        }
        Ok(out)
    };

    assemble(
        cands,
        votes,
        c,
        spec,
        rule.clone(),
        "mc-reversed",
        window,
        roles,
        tightness,
        Box::new(witness),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{total_scores, wins, ScoringRuleFamily};
    use crate::oracles::solve_mc_bruteforce;
    use crate::reductions::mc::triangle;

    #[test]
    fn triangle_plateau_sizes_and_tightness() {
        let g = triangle();
        // 28 gadget candidates, one filler: (m-2)-approval at m = 29
        let m = 29;
        let rule = ScoringRuleFamily::KApproval(m - 2).vector_for(m).unwrap();
        let out = reduce_mc_plateau(&g, &rule, m - 1, Mode::CoWinner).unwrap();
        assert_eq!(out.meta.n_partial, 12);
        assert_eq!(out.meta.f_value, 26);
        for t in &out.meta.tightness {
            assert!(t.holds(), "{t:?}");
            assert_eq!(t.lhs, 24);
        }
    }

    #[test]
    fn triangle_plateau_witness_wins() {
        let g = triangle();
        let m = 29;
        let rule = ScoringRuleFamily::KApproval(m - 2).vector_for(m).unwrap();
        for mode in [Mode::CoWinner, Mode::UniqueWinner] {
            let out = reduce_mc_plateau(&g, &rule, m - 1, mode).unwrap();
            let clique = solve_mc_bruteforce(&g, 1000).unwrap().unwrap();
            let ext = out
                .witness_builder
                .build(&SourceSolution::Clique(clique))
                .unwrap();
            for (e, v) in ext.iter().zip(&out.instance.profile.votes) {
                assert!(e.extends(v).unwrap());
            }
            let scores = total_scores(&ext, &out.instance.rule).unwrap();
            assert!(wins(&scores, out.instance.distinguished, mode));
        }
    }

    #[test]
    fn triangle_reversed_witness_wins() {
        let g = triangle();
        // vector (3,2,0,...,0) with a spare filler position: m = 29
        let mut values = vec![0i64; 29];
        values[0] = 3;
        values[1] = 2;
        let rule = ScoringVector::new(values).unwrap();
        for mode in [Mode::CoWinner, Mode::UniqueWinner] {
            let out = reduce_mc_reversed(&g, &rule, 2, 1, mode).unwrap();
            assert_eq!(out.meta.n_partial, 12);
            for t in &out.meta.tightness {
                assert!(t.holds(), "{t:?}");
            }
            let clique = solve_mc_bruteforce(&g, 1000).unwrap().unwrap();
            let ext = out
                .witness_builder
                .build(&SourceSolution::Clique(clique))
                .unwrap();
            for (e, v) in ext.iter().zip(&out.instance.profile.votes) {
                assert!(e.extends(v).unwrap());
            }
            let scores = total_scores(&ext, &out.instance.rule).unwrap();
            assert!(wins(&scores, out.instance.distinguished, mode));
        }
    }

    #[test]
    fn reversed_rejects_wide_ratio() {
        let g = triangle();
        let mut values = vec![0i64; 29];
        values[0] = 4;
        values[1] = 2;
        let rule = ScoringVector::new(values).unwrap();
        // no j with alpha_j < 2 alpha_{j+1}
        assert!(matches!(
            reduce_mc_reversed(&g, &rule, 2, 1, Mode::CoWinner),
            Err(ReductionError::ShapeViolated(_))
        ));
    }

    #[test]
    fn plateau_rejects_nonuniform() {
        let g = MCInstance::new(
            vec![vec!["a".into(), "a2".into()], vec!["b".into()], vec!["c".into()]],
            vec![("a".into(), "b".into())],
        )
        .unwrap();
        let rule = ScoringRuleFamily::KApproval(10).vector_for(12).unwrap();
        assert!(matches!(
            reduce_mc_plateau(&g, &rule, 11, Mode::CoWinner),
            Err(ReductionError::NonUniformInstance)
        ));
    }
}
