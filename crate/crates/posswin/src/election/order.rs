use super::{CandidateId, ElectionError};

/// Total ranking of all candidates, best first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOrder {
    ranking: Vec<CandidateId>,
}

impl LinearOrder {
    pub fn new(ranking: Vec<CandidateId>) -> Result<Self, ElectionError> {
        let n = ranking.len();
        let mut seen = vec![false; n];
        for c in &ranking {
            match seen.get_mut(c.index()) {
                Some(s) if !*s => *s = true,
                _ => return Err(ElectionError::NotTotal),
            }
        }
        Ok(LinearOrder { ranking })
    }

    pub fn len(&self) -> usize {
        self.ranking.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranking.is_empty()
    }

    pub fn ranking(&self) -> &[CandidateId] {
        &self.ranking
    }

    /// 1-based position of `c`.
    pub fn position_of(&self, c: CandidateId) -> usize {
        self.ranking.iter().position(|&x| x == c).unwrap() + 1
    }

    /// True iff every constraint of `p` holds in this order.
    pub fn extends(&self, p: &PartialOrder) -> Result<bool, ElectionError> {
        if p.len() != self.ranking.len() {
            return Err(ElectionError::CandidateMismatch {
                expected: p.len(),
                got: self.ranking.len(),
            });
        }
        let mut pos = vec![0usize; self.ranking.len()];
        for (i, c) in self.ranking.iter().enumerate() {
            pos[c.index()] = i;
        }
        for a in 0..p.len() {
            for b in 0..p.len() {
                if p.above_idx(a, b) && pos[a] > pos[b] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn as_partial(&self) -> PartialOrder {
        let mut p = PartialOrder::new(self.ranking.len());
        for w in self.ranking.windows(2) {
            p.add(w[0], w[1]).unwrap();
        }
        p
    }
}

/// Top or bottom region of a linear order, used for placement queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Top,
    Bottom,
}

/// Transitive antisymmetric constraints over `n` candidates.
///
/// The transitive closure is maintained on every insertion and insertions
/// that would create a cycle are rejected, so the relation is a strict
/// partial order at all times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialOrder {
    n: usize,
    // closure[a * n + b] is true iff a is constrained above b
    closure: Vec<bool>,
}

impl PartialOrder {
    pub fn new(n: usize) -> Self {
        PartialOrder {
            n,
            closure: vec![false; n * n],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub(crate) fn above_idx(&self, a: usize, b: usize) -> bool {
        self.closure[a * self.n + b]
    }

    /// True iff `a` is constrained above `b` (transitively).
    #[inline]
    pub fn above(&self, a: CandidateId, b: CandidateId) -> bool {
        self.above_idx(a.index(), b.index())
    }

    /// Adds the constraint `a` above `b` and updates the closure.
    pub fn add(&mut self, a: CandidateId, b: CandidateId) -> Result<(), ElectionError> {
        let (ai, bi) = (a.index(), b.index());
        if ai == bi {
            return Err(ElectionError::SelfRelation(a));
        }
        if self.above_idx(bi, ai) {
            return Err(ElectionError::Cycle(a, b));
        }
        if self.above_idx(ai, bi) {
            return Ok(());
        }
        let n = self.n;
        let ups: Vec<usize> = (0..n).filter(|&x| x == ai || self.above_idx(x, ai)).collect();
        let downs: Vec<usize> = (0..n).filter(|&y| y == bi || self.above_idx(bi, y)).collect();
        for &x in &ups {
            for &y in &downs {
                self.closure[x * n + y] = true;
            }
        }
        Ok(())
    }

    /// Adds `a` above every candidate in `below`.
    pub fn add_above_all<I: IntoIterator<Item = CandidateId>>(
        &mut self,
        a: CandidateId,
        below: I,
    ) -> Result<(), ElectionError> {
        for b in below {
            self.add(a, b)?;
        }
        Ok(())
    }

    /// Candidates constrained above `c`.
    pub fn ancestors(&self, c: CandidateId) -> Vec<CandidateId> {
        (0..self.n as u32)
            .map(CandidateId)
            .filter(|&x| self.above(x, c))
            .collect()
    }

    /// Candidates constrained below `c`.
    pub fn descendants(&self, c: CandidateId) -> Vec<CandidateId> {
        (0..self.n as u32)
            .map(CandidateId)
            .filter(|&x| self.above(c, x))
            .collect()
    }

    pub fn ancestor_count(&self, c: CandidateId) -> usize {
        (0..self.n).filter(|&x| self.above_idx(x, c.index())).count()
    }

    pub fn descendant_count(&self, c: CandidateId) -> usize {
        (0..self.n).filter(|&y| self.above_idx(c.index(), y)).count()
    }

    /// Range of 1-based positions `c` can occupy over all extensions.
    pub fn position_range(&self, c: CandidateId) -> (usize, usize) {
        (
            self.ancestor_count(c) + 1,
            self.n - self.descendant_count(c),
        )
    }

    pub fn is_total(&self) -> bool {
        (0..self.n).all(|a| {
            (0..self.n).all(|b| a == b || self.above_idx(a, b) || self.above_idx(b, a))
        })
    }

    /// Constraint pairs with every transitively implied pair removed,
    /// the canonical minimal form used for serialization.
    pub fn reduction(&self) -> Vec<(CandidateId, CandidateId)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if !self.above_idx(a, b) {
                    continue;
                }
                let implied = (0..self.n)
                    .any(|k| k != a && k != b && self.above_idx(a, k) && self.above_idx(k, b));
                if !implied {
                    out.push((CandidateId(a as u32), CandidateId(b as u32)));
                }
            }
        }
        out
    }

    /// All linear extensions in lexicographic order by candidate id,
    /// failing once more than `cap` exist.
    pub fn extensions(&self, cap: u64) -> Result<Vec<LinearOrder>, ElectionError> {
        assert!(cap >= 1, "cap must be at least 1");
        let n = self.n;
        let mut out = Vec::new();
        let mut placed = vec![false; n];
        let mut prefix: Vec<CandidateId> = Vec::with_capacity(n);
        self.extend_rec(&mut placed, &mut prefix, &mut out, cap)?;
        Ok(out)
    }

    fn extend_rec(
        &self,
        placed: &mut Vec<bool>,
        prefix: &mut Vec<CandidateId>,
        out: &mut Vec<LinearOrder>,
        cap: u64,
    ) -> Result<(), ElectionError> {
        let n = self.n;
        if prefix.len() == n {
            if out.len() as u64 >= cap {
                return Err(ElectionError::CapExceeded(cap));
            }
            out.push(LinearOrder {
                ranking: prefix.clone(),
            });
            return Ok(());
        }
        for c in 0..n {
            if placed[c] {
                continue;
            }
            // c is placeable when all its ancestors are already placed
            let ready = (0..n).all(|a| !self.above_idx(a, c) || placed[a]);
            if !ready {
                continue;
            }
            placed[c] = true;
            prefix.push(CandidateId(c as u32));
            self.extend_rec(placed, prefix, out, cap)?;
            prefix.pop();
            placed[c] = false;
        }
        Ok(())
    }

    /// Number of linear extensions, counted up to `cap`.
    pub fn extension_count(&self, cap: u64) -> Result<u64, ElectionError> {
        self.extensions(cap).map(|v| v.len() as u64)
    }

    /// First extension in lexicographic order, optionally forcing one
    /// candidate to the front or the back.
    pub fn first_extension(
        &self,
        front: Option<CandidateId>,
        back: Option<CandidateId>,
    ) -> Option<LinearOrder> {
        let n = self.n;
        let mut placed = vec![false; n];
        let mut ranking = Vec::with_capacity(n);
        if let Some(f) = front {
            if self.ancestor_count(f) > 0 {
                return None;
            }
            placed[f.index()] = true;
            ranking.push(f);
        }
        if let Some(b) = back {
            if self.descendant_count(b) > 0 || Some(b) == front {
                return None;
            }
        }
        while ranking.len() < n {
            let next = (0..n).find(|&c| {
                !placed[c]
                    && Some(CandidateId(c as u32)) != back
                    && (0..n).all(|a| !self.above_idx(a, c) || placed[a])
            });
            match next {
                Some(c) => {
                    placed[c] = true;
                    ranking.push(CandidateId(c as u32));
                }
                None => {
                    // only the reserved back candidate remains placeable
                    let b = back?;
                    if ranking.len() == n - 1 && !placed[b.index()] {
                        ranking.push(b);
                        placed[b.index()] = true;
                    } else {
                        return None;
                    }
                }
            }
        }
        Some(LinearOrder { ranking })
    }

    /// Whether the candidate set `a` can occupy exactly the top or bottom
    /// `a.len()` positions in some extension: a bottom region must be
    /// closed downward (members' descendants stay inside), a top region
    /// closed upward.
    pub fn region_feasible(
        &self,
        a: &[CandidateId],
        region: Region,
        r: usize,
    ) -> Result<bool, ElectionError> {
        if a.len() != r {
            return Err(ElectionError::RegionSizeMismatch {
                size: r,
                set: a.len(),
            });
        }
        let mut inside = vec![false; self.n];
        for c in a {
            inside[c.index()] = true;
        }
        let ok = a.iter().all(|&c| {
            (0..self.n).all(|other| {
                let related = match region {
                    Region::Bottom => self.above_idx(c.index(), other),
                    Region::Top => self.above_idx(other, c.index()),
                };
                !related || inside[other]
            })
        });
        Ok(ok)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(i: u32) -> CandidateId {
        CandidateId(i)
    }

    #[test]
    fn cycle_rejected() {
        let mut p = PartialOrder::new(3);
        p.add(c(0), c(1)).unwrap();
        p.add(c(1), c(2)).unwrap();
        assert_eq!(p.add(c(2), c(0)), Err(ElectionError::Cycle(c(2), c(0))));
        assert!(p.above(c(0), c(2)));
    }

    #[test]
    fn extension_checks() {
        let mut p = PartialOrder::new(2);
        p.add(c(0), c(1)).unwrap();
        let ba = LinearOrder::new(vec![c(1), c(0)]).unwrap();
        let ab = LinearOrder::new(vec![c(0), c(1)]).unwrap();
        assert!(!ba.extends(&p).unwrap());
        assert!(ab.extends(&p).unwrap());
        let empty = PartialOrder::new(2);
        assert!(ba.extends(&empty).unwrap());
    }

    #[test]
    fn extends_rejects_mismatched_sets() {
        let p = PartialOrder::new(3);
        let l = LinearOrder::new(vec![c(0), c(1)]).unwrap();
        assert!(l.extends(&p).is_err());
    }

    #[test]
    fn enumerate_empty_order() {
        let p = PartialOrder::new(3);
        assert_eq!(p.extensions(10).unwrap().len(), 6);
        assert!(p.extensions(5).is_err());
    }

    #[test]
    fn enumerate_total_order() {
        let mut p = PartialOrder::new(3);
        p.add(c(2), c(0)).unwrap();
        p.add(c(0), c(1)).unwrap();
        let exts = p.extensions(10).unwrap();
        assert_eq!(exts.len(), 1);
        assert_eq!(exts[0].ranking(), &[c(2), c(0), c(1)]);
        assert!(p.is_total());
    }

    #[test]
    fn enumerate_chain_plus_isolated() {
        // chain 0 > 1 with 2 free: brute force over 3! permutations
        // filtering 0-before-1 gives 3 extensions
        let mut p = PartialOrder::new(3);
        p.add(c(0), c(1)).unwrap();
        let exts = p.extensions(10).unwrap();
        assert_eq!(exts.len(), 3);
        for e in &exts {
            assert!(e.extends(&p).unwrap());
        }
    }

    #[test]
    fn extensions_are_lexicographic() {
        let p = PartialOrder::new(3);
        let exts = p.extensions(10).unwrap();
        let rankings: Vec<Vec<u32>> = exts
            .iter()
            .map(|e| e.ranking().iter().map(|c| c.0).collect())
            .collect();
        let mut sorted = rankings.clone();
        sorted.sort();
        assert_eq!(rankings, sorted);
    }

    #[test]
    fn region_feasibility() {
        let mut p = PartialOrder::new(2);
        p.add(c(0), c(1)).unwrap();
        assert!(p.region_feasible(&[c(1)], Region::Bottom, 1).unwrap());
        assert!(!p.region_feasible(&[c(0)], Region::Bottom, 1).unwrap());

        let mut q = PartialOrder::new(3);
        q.add(c(0), c(1)).unwrap();
        q.add(c(1), c(2)).unwrap();
        assert!(q.region_feasible(&[c(1), c(2)], Region::Bottom, 2).unwrap());
        assert!(q
            .region_feasible(&[c(0)], Region::Bottom, 2)
            .is_err());
    }

    #[test]
    fn region_matches_enumeration() {
        // exhaustive cross-check on all partial orders from random edge sets
        let edge_sets: Vec<Vec<(u32, u32)>> = vec![
            vec![],
            vec![(0, 1)],
            vec![(0, 1), (1, 2)],
            vec![(0, 1), (2, 3)],
            vec![(1, 0), (2, 0), (3, 0)],
            vec![(0, 2), (1, 2), (2, 3)],
        ];
        for edges in edge_sets {
            let n = 4;
            let mut p = PartialOrder::new(n);
            for (a, b) in edges {
                p.add(c(a), c(b)).unwrap();
            }
            let exts = p.extensions(100).unwrap();
            for r in 1..n {
                // every r-subset
                for mask in 0u32..(1 << n) {
                    if mask.count_ones() as usize != r {
                        continue;
                    }
                    let set: Vec<CandidateId> =
                        (0..n as u32).filter(|i| mask & (1 << i) != 0).map(c).collect();
                    for (region, take_back) in [(Region::Bottom, true), (Region::Top, false)] {
                        let feasible = p.region_feasible(&set, region, r).unwrap();
                        let witnessed = exts.iter().any(|e| {
                            let slice: Vec<CandidateId> = if take_back {
                                e.ranking()[n - r..].to_vec()
                            } else {
                                e.ranking()[..r].to_vec()
                            };
                            let mut s = slice.clone();
                            s.sort();
                            let mut t = set.clone();
                            t.sort();
                            s == t
                        });
                        assert_eq!(feasible, witnessed, "edges mismatch for {set:?} {region:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn first_extension_with_back() {
        let mut p = PartialOrder::new(3);
        p.add(c(0), c(1)).unwrap();
        let e = p.first_extension(None, Some(c(2))).unwrap();
        assert_eq!(e.ranking()[2], c(2));
        assert!(e.extends(&p).unwrap());
        assert!(p.first_extension(None, Some(c(0))).is_none());
    }
}
