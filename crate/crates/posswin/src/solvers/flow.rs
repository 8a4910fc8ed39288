use super::{SolveError, SolveResult, SolveStats};
use crate::election::{CandidateId, PWInstance};

/// Integral max-flow on a small dense network (Edmonds-Karp).
struct FlowNetwork {
    n: usize,
    // to, residual cap, rev-index, is-forward
    adj: Vec<Vec<(usize, i64, usize, bool)>>,
}

impl FlowNetwork {
    fn new(n: usize) -> Self {
        FlowNetwork {
            n,
            adj: vec![Vec::new(); n],
        }
    }

    fn link(&mut self, u: usize, v: usize, cap: i64) {
        debug_assert!(cap >= 0);
        let ru = self.adj[v].len();
        let rv = self.adj[u].len();
        self.adj[u].push((v, cap, ru, true));
        self.adj[v].push((u, 0, rv, false));
    }

    fn run(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.n];
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for (e, &(v, cap, _, _)) in self.adj[u].iter().enumerate() {
                    if cap > 0 && parent[v].is_none() && v != s {
                        parent[v] = Some((u, e));
                        queue.push_back(v);
                    }
                }
            }
            if parent[t].is_none() {
                return total;
            }
            let mut push = i64::MAX;
            let mut v = t;
            while v != s {
                let (u, e) = parent[v].unwrap();
                push = push.min(self.adj[u][e].1);
                v = u;
            }
            let mut v = t;
            while v != s {
                let (u, e) = parent[v].unwrap();
                let rev = self.adj[u][e].2;
                self.adj[u][e].1 -= push;
                self.adj[v][rev].1 += push;
                v = u;
            }
            total += push;
        }
    }

    /// Forward edges out of `u` carrying positive flow.
    fn used_edges(&self, u: usize) -> Vec<(usize, i64)> {
        self.adj[u]
            .iter()
            .filter_map(|&(v, _, rev, forward)| {
                if !forward {
                    return None;
                }
                let used = self.adj[v][rev].1; // pushed flow = reverse residual
                (used > 0).then_some((v, used))
            })
            .collect()
    }
}

fn is_plurality(inst: &PWInstance) -> bool {
    let norm = inst.rule.normalized();
    let v = norm.values();
    v[0] == 1 && v[1..].iter().all(|&x| x == 0)
}

fn is_veto(inst: &PWInstance) -> bool {
    let norm = inst.rule.normalized();
    let v = norm.values();
    v.len() >= 2 && *v.last().unwrap() == 0 && v[..v.len() - 1].iter().all(|&x| x == 1)
}

/// Plurality: fix the distinguished candidate first wherever possible,
/// then ask a bipartite flow whether the remaining first positions can be
/// distributed without any rival passing the threshold.
pub fn possible_winner_plurality_flow(inst: &PWInstance) -> Result<SolveResult, SolveError> {
    if !is_plurality(inst) {
        return Err(SolveError::WrongRule {
            expected: "plurality",
        });
    }
    let m = inst.num_candidates();
    let c = inst.distinguished;
    let votes = &inst.profile.votes;

    // c takes the first position wherever it has no ancestor
    let mut p1 = Vec::new();
    let mut s_c: i64 = 0;
    for (i, v) in votes.iter().enumerate() {
        if v.ancestor_count(c) == 0 {
            s_c += 1;
        } else {
            p1.push(i);
        }
    }
    let threshold = s_c - if inst.mode.is_unique() { 1 } else { 0 };
    if threshold < 0 && m > 1 {
        return Ok(SolveResult {
            answer: false,
            witness: None,
            stats: SolveStats {
                nodes: 0,
                flow: Some(0),
            },
        });
    }

    // nodes: source, votes of P1, candidates != c, sink
    let nv = p1.len();
    let n = 2 + nv + (m - 1);
    let (source, sink) = (0, n - 1);
    let vote_node = |i: usize| 1 + i;
    let mut cand_nodes = Vec::new();
    let mut net = FlowNetwork::new(n);
    for i in 0..nv {
        net.link(source, vote_node(i), 1);
    }
    let mut cand_node_of = vec![usize::MAX; m];
    for x in 0..m {
        if x == c.index() {
            continue;
        }
        let node = 1 + nv + cand_nodes.len();
        cand_node_of[x] = node;
        cand_nodes.push(x);
        net.link(node, sink, threshold.max(0));
    }
    for (i, &vi) in p1.iter().enumerate() {
        let v = &votes[vi];
        for x in 0..m {
            if x == c.index() {
                continue;
            }
            if v.ancestor_count(CandidateId(x as u32)) == 0 {
                net.link(vote_node(i), cand_node_of[x], 1);
            }
        }
    }
    let flow = net.run(source, sink);
    let answer = flow == nv as i64;

    let witness = if answer {
        let mut orders = Vec::with_capacity(votes.len());
        let mut p1_first = vec![None; votes.len()];
        for (i, &vi) in p1.iter().enumerate() {
            let took: Vec<(usize, i64)> = net.used_edges(vote_node(i));
            let (node, _) = took[0];
            let cand = cand_nodes[node - 1 - nv];
            p1_first[vi] = Some(CandidateId(cand as u32));
        }
        for (i, v) in votes.iter().enumerate() {
            let front = p1_first[i].or(Some(c));
            orders.push(v.first_extension(front, None).expect("front must be placeable"));
        }
        Some(orders)
    } else {
        None
    };

    Ok(SolveResult {
        answer,
        witness,
        stats: SolveStats {
            nodes: 0,
            flow: Some(flow),
        },
    })
}

/// Veto: fix the distinguished candidate at its leftmost possible
/// position, compute each rival's required number of last positions, and
/// check the demands embed into the votes where the last position is
/// still open.
pub fn possible_winner_veto_flow(inst: &PWInstance) -> Result<SolveResult, SolveError> {
    if !is_veto(inst) {
        return Err(SolveError::WrongRule { expected: "veto" });
    }
    let m = inst.num_candidates();
    let c = inst.distinguished;
    let votes = &inst.profile.votes;
    let n_votes = votes.len() as i64;

    // c is last only where every other candidate is constrained above it
    let forced_last =
        |v: &crate::election::PartialOrder, x: CandidateId| v.ancestor_count(x) == m - 1;
    let mut p1 = Vec::new();
    let mut s_c: i64 = 0;
    for (i, v) in votes.iter().enumerate() {
        if forced_last(v, c) {
            // c occupies the last position here; no rival demand can use it
        } else {
            s_c += 1;
            p1.push(i);
        }
    }
    let threshold = s_c - if inst.mode.is_unique() { 1 } else { 0 };
    let demand = |_: usize| (n_votes - threshold).max(0);

    let nv = p1.len();
    let n = 2 + nv + (m - 1);
    let (source, sink) = (0, n - 1);
    let mut net = FlowNetwork::new(n);
    let mut cand_nodes = Vec::new();
    let mut cand_node_of = vec![usize::MAX; m];
    let mut total_demand: i64 = 0;
    for x in 0..m {
        if x == c.index() {
            continue;
        }
        let node = 1 + cand_nodes.len();
        cand_node_of[x] = node;
        cand_nodes.push(x);
        let z = demand(x);
        total_demand += z;
        net.link(source, node, z);
    }
    let vote_node = |i: usize| 1 + (m - 1) + i;
    for (i, &vi) in p1.iter().enumerate() {
        net.link(vote_node(i), sink, 1);
        let v = &votes[vi];
        for x in 0..m {
            if x == c.index() {
                continue;
            }
            // x can be last iff nothing is constrained below it
            if v.descendant_count(CandidateId(x as u32)) == 0 {
                net.link(cand_node_of[x], vote_node(i), 1);
            }
        }
    }
    let flow = net.run(source, sink);
    let answer = flow == total_demand;

    let witness = if answer {
        let mut last_of = vec![None; votes.len()];
        for x in 0..m {
            if x == c.index() {
                continue;
            }
            for (node, _) in net.used_edges(cand_node_of[x]) {
                if node != source {
                    let vi = p1[node - 1 - (m - 1)];
                    last_of[vi] = Some(CandidateId(x as u32));
                }
            }
        }
        let mut orders = Vec::with_capacity(votes.len());
        for (i, v) in votes.iter().enumerate() {
            let back = match last_of[i] {
                Some(x) => Some(x),
                None if forced_last(v, c) => Some(c),
                None => {
                    // leftover vote: any candidate free to be last, but not c
                    (0..m as u32)
                        .map(CandidateId)
                        .find(|&x| x != c && v.descendant_count(x) == 0)
                }
            };
            orders.push(
                v.first_extension(None, back)
                    .expect("chosen last candidate must be placeable"),
            );
        }
        Some(orders)
    } else {
        None
    };

    Ok(SolveResult {
        answer,
        witness,
        stats: SolveStats {
            nodes: 0,
            flow: Some(flow),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{
        total_scores, wins, Candidates, Mode, PartialOrder, PartialProfile, ScoringRuleFamily,
    };
    use crate::solvers::possible_winner_bruteforce;

    fn c(i: u32) -> CandidateId {
        CandidateId(i)
    }

    /// Fig-style plurality example: candidates a, b, c, d with five
    /// partial votes; the distinguished candidate is c.
    pub(crate) fn plurality_example(mode: Mode) -> PWInstance {
        let cands = Candidates::from_labels(["a", "b", "c", "d"]).unwrap();
        let (a, b, cc, d) = (c(0), c(1), c(2), c(3));
        let mut profile = PartialProfile::new(cands);
        // v1: a > c > d, b > c
        let mut v1 = PartialOrder::new(4);
        v1.add(a, cc).unwrap();
        v1.add(cc, d).unwrap();
        v1.add(b, cc).unwrap();
        // v2: c > a > b
        let mut v2 = PartialOrder::new(4);
        v2.add(cc, a).unwrap();
        v2.add(a, b).unwrap();
        // v3: a > d > b
        let mut v3 = PartialOrder::new(4);
        v3.add(a, d).unwrap();
        v3.add(d, b).unwrap();
        // v4: a > b > c
        let mut v4 = PartialOrder::new(4);
        v4.add(a, b).unwrap();
        v4.add(b, cc).unwrap();
        // v5: a > c, b > d
        let mut v5 = PartialOrder::new(4);
        v5.add(a, cc).unwrap();
        v5.add(b, d).unwrap();
        for v in [v1, v2, v3, v4, v5] {
            profile.push(v).unwrap();
        }
        PWInstance::new(
            profile,
            cc,
            ScoringRuleFamily::Plurality.vector_for(4).unwrap(),
            mode,
        )
        .unwrap()
    }

    #[test]
    fn plurality_example_flow_value_three() {
        let inst = plurality_example(Mode::CoWinner);
        let r = possible_winner_plurality_flow(&inst).unwrap();
        assert!(r.answer);
        assert_eq!(r.stats.flow, Some(3));
        let w = r.witness.unwrap();
        for (vote, ext) in inst.profile.votes.iter().zip(&w) {
            assert!(ext.extends(vote).unwrap());
        }
        let scores = total_scores(&w, &inst.rule).unwrap();
        assert_eq!(scores[inst.distinguished.index()], 2);
        assert!(wins(&scores, inst.distinguished, Mode::CoWinner));
    }

    #[test]
    fn plurality_example_unique_agrees_with_bruteforce() {
        let inst = plurality_example(Mode::UniqueWinner);
        let r = possible_winner_plurality_flow(&inst).unwrap();
        let b = possible_winner_bruteforce(&inst, 1_000_000).unwrap();
        assert_eq!(r.answer, b.answer);
        let w = r.witness.unwrap();
        let scores = total_scores(&w, &inst.rule).unwrap();
        assert!(wins(&scores, inst.distinguished, Mode::UniqueWinner));
    }

    #[test]
    fn plurality_c_first_everywhere() {
        let cands = Candidates::from_labels(["c", "a"]).unwrap();
        let mut profile = PartialProfile::new(cands);
        let mut v = PartialOrder::new(2);
        v.add(c(0), c(1)).unwrap();
        profile.push(v).unwrap();
        let inst = PWInstance::new(
            profile,
            c(0),
            ScoringRuleFamily::Plurality.vector_for(2).unwrap(),
            Mode::CoWinner,
        )
        .unwrap();
        let r = possible_winner_plurality_flow(&inst).unwrap();
        assert!(r.answer);
        assert_eq!(r.stats.flow, Some(0)); // empty P1
    }

    #[test]
    fn plurality_wrong_rule() {
        let cands = Candidates::from_labels(["c", "a", "b"]).unwrap();
        let profile = PartialProfile::new(cands);
        let inst = PWInstance::new(
            profile,
            c(0),
            ScoringRuleFamily::Borda.vector_for(3).unwrap(),
            Mode::CoWinner,
        )
        .unwrap();
        assert!(matches!(
            possible_winner_plurality_flow(&inst),
            Err(SolveError::WrongRule { .. })
        ));
    }

    #[test]
    fn veto_single_empty_vote() {
        let cands = Candidates::from_labels(["c", "a", "b"]).unwrap();
        let mut profile = PartialProfile::new(cands);
        profile.push(PartialOrder::new(3)).unwrap();
        let inst = PWInstance::new(
            profile,
            c(0),
            ScoringRuleFamily::Veto.vector_for(3).unwrap(),
            Mode::CoWinner,
        )
        .unwrap();
        let r = possible_winner_veto_flow(&inst).unwrap();
        assert!(r.answer);
        // T = s(c) = 1 = N, so z(a) = z(b) = 0
        assert_eq!(r.stats.flow, Some(0));
        let w = r.witness.unwrap();
        let scores = total_scores(&w, &inst.rule).unwrap();
        assert!(wins(&scores, c(0), Mode::CoWinner));
    }

    #[test]
    fn veto_forced_last_twice() {
        let cands = Candidates::from_labels(["c", "a"]).unwrap();
        let mut profile = PartialProfile::new(cands);
        for _ in 0..2 {
            let mut v = PartialOrder::new(2);
            v.add(c(1), c(0)).unwrap();
            profile.push(v).unwrap();
        }
        let inst = PWInstance::new(
            profile,
            c(0),
            ScoringRuleFamily::Veto.vector_for(2).unwrap(),
            Mode::CoWinner,
        )
        .unwrap();
        let r = possible_winner_veto_flow(&inst).unwrap();
        assert!(!r.answer);
        let b = possible_winner_bruteforce(&inst, 1000).unwrap();
        assert!(!b.answer);
    }
}
