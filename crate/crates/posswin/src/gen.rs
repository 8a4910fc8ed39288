//! Seeded random instance generation for the CLI and the test harness.
//! Same seed, same instance, byte for byte.

use crate::election::{
    Candidates, Mode, PWInstance, PartialOrder, PartialProfile, ScoringVector,
};
use crate::reductions::{MCInstance, X3CInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random partial-vote instance: `m` candidates, `n` votes, each vote an
/// edge sample of the given density with cycle-creating pairs skipped.
pub fn random_instance(
    m: usize,
    n: usize,
    density: f64,
    rule: ScoringVector,
    mode: Mode,
    rng: &mut ChaCha8Rng,
) -> PWInstance {
    let labels: Vec<String> = (0..m).map(|i| format!("c{i}")).collect();
    let cands = Candidates::from_labels(labels).unwrap();
    let mut profile = PartialProfile::new(cands);
    for _ in 0..n {
        profile.push(random_vote(m, density, rng)).unwrap();
    }
    let distinguished = crate::election::CandidateId(rng.gen_range(0..m as u32));
    PWInstance::new(profile, distinguished, rule, mode).unwrap()
}

pub fn random_vote(m: usize, density: f64, rng: &mut ChaCha8Rng) -> PartialOrder {
    let mut vote = PartialOrder::new(m);
    for a in 0..m as u32 {
        for b in 0..m as u32 {
            if a != b && rng.gen_bool(density) {
                let _ = vote.add(
                    crate::election::CandidateId(a),
                    crate::election::CandidateId(b),
                );
            }
        }
    }
    vote
}

/// Random non-increasing vector with entries up to `max_value`,
/// normalized and guaranteed non-trivial.
pub fn random_vector(m: usize, max_value: i64, rng: &mut ChaCha8Rng) -> ScoringVector {
    loop {
        let mut values: Vec<i64> = (0..m).map(|_| rng.gen_range(0..=max_value)).collect();
        values.sort_unstable_by(|a, b| b.cmp(a));
        let v = ScoringVector::new(values).unwrap().normalized();
        if v.is_non_trivial() {
            return v;
        }
    }
}

/// Random cover instance with `t` ordered triples over `1..=q`.
pub fn random_x3c(q: usize, t: usize, rng: &mut ChaCha8Rng) -> X3CInstance {
    assert!(q >= 3);
    let mut triples = Vec::with_capacity(t);
    for _ in 0..t {
        let mut triple = [0usize; 3];
        let mut used = Vec::new();
        for slot in &mut triple {
            loop {
                let e = rng.gen_range(1..=q);
                if !used.contains(&e) {
                    used.push(e);
                    *slot = e;
                    break;
                }
            }
        }
        triples.push(triple);
    }
    X3CInstance::new(q, triples).unwrap()
}

/// Random clique instance: `k` classes of up to `max_class` vertices,
/// cross-class edges at the given density.
pub fn random_mc(k: usize, max_class: usize, density: f64, rng: &mut ChaCha8Rng) -> MCInstance {
    let classes: Vec<Vec<String>> = (0..k)
        .map(|i| {
            let size = rng.gen_range(1..=max_class);
            (0..size).map(|j| format!("v{i}_{j}")).collect()
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            for a in &classes[i] {
                for b in &classes[j] {
                    if rng.gen_bool(density) {
                        edges.push((a.clone(), b.clone()));
                    }
                }
            }
        }
    }
    MCInstance::new(classes, edges).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generation_is_deterministic() {
        let a = crate::io::serialize_x3c(&random_x3c(6, 3, &mut rng(42)));
        let b = crate::io::serialize_x3c(&random_x3c(6, 3, &mut rng(42)));
        assert_eq!(a, b);
        let c = crate::io::serialize_mc(&random_mc(3, 3, 0.5, &mut rng(7)));
        let d = crate::io::serialize_mc(&random_mc(3, 3, 0.5, &mut rng(7)));
        assert_eq!(c, d);
    }
}
