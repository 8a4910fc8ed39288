use super::ElectionError;

/// Score values of a positional rule, one per position, best first.
///
/// Values are non-negative and non-increasing. `normalized` form has a
/// zero last entry and gcd one over the nonzero values; argmax sets are
/// unchanged by normalization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScoringVector {
    values: Vec<i64>,
}

impl ScoringVector {
    pub fn new(values: Vec<i64>) -> Result<Self, ElectionError> {
        if values.is_empty()
            || values.windows(2).any(|w| w[0] < w[1])
            || values.iter().any(|&v| v < 0)
        {
            return Err(ElectionError::BadScoringVector);
        }
        Ok(ScoringVector { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Score of 1-based position `pos`.
    pub fn at(&self, pos: usize) -> i64 {
        self.values[pos - 1]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Subtracts the last value from every entry, then divides by the gcd
    /// of the nonzero entries (treating the all-zero vector as fixed).
    pub fn normalized(&self) -> ScoringVector {
        let last = *self.values.last().unwrap();
        let shifted: Vec<i64> = self.values.iter().map(|v| v - last).collect();
        let g = shifted.iter().fold(0i64, |acc, &v| gcd(acc, v));
        let g = if g == 0 { 1 } else { g };
        ScoringVector {
            values: shifted.into_iter().map(|v| v / g).collect(),
        }
    }

    /// A rule is trivial when every candidate always ties.
    pub fn is_non_trivial(&self) -> bool {
        self.normalized().values[0] > 0
    }

    /// Gcd of the nonzero values; the lattice step between any two
    /// achievable score sums. `None` for the trivial rule.
    pub fn score_step(&self) -> Option<i64> {
        let g = self.values.iter().fold(0i64, |acc, &v| gcd(acc, v));
        (g != 0).then_some(g)
    }

    /// Distinct score values, descending.
    pub fn distinct_values(&self) -> Vec<i64> {
        let mut vals = self.values.clone();
        vals.dedup();
        vals
    }

    /// Maximal runs of equal values as `(start, end, value)` with 1-based
    /// inclusive positions.
    pub fn runs(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        let mut start = 1;
        for i in 1..=self.values.len() {
            if i == self.values.len() || self.values[i] != self.values[i - 1] {
                out.push((start, i, self.values[i - 1]));
                start = i + 1;
            }
        }
        out
    }

    /// 1-based positions `p` with a strict drop `values[p] > values[p+1]`.
    pub fn drop_positions(&self) -> Vec<usize> {
        (1..self.values.len())
            .filter(|&p| self.values[p - 1] > self.values[p])
            .collect()
    }
}

/// True iff `big` arises from `small` by inserting one score value at
/// some position while keeping the vector non-increasing.
pub fn is_pure_step(small: &ScoringVector, big: &ScoringVector) -> Result<bool, ElectionError> {
    if big.len() != small.len() + 1 {
        return Err(ElectionError::CandidateMismatch {
            expected: small.len() + 1,
            got: big.len(),
        });
    }
    // `big` is already monotone, so deleting any entry keeps monotonicity;
    // insertion validity reduces to a deletion check.
    for skip in 0..big.len() {
        let matches = big
            .values
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, v)| v)
            .eq(small.values.iter());
        if matches {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Generators of scoring vectors per candidate count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScoringRuleFamily {
    Plurality,
    Veto,
    KApproval(usize),
    Borda,
    Formula1_2009,
    Formula1_2010,
    /// Explicit table keyed by candidate count.
    Explicit(std::collections::BTreeMap<usize, ScoringVector>),
}

const F1_2009: [i64; 8] = [10, 8, 6, 5, 4, 3, 2, 1];
const F1_2010: [i64; 10] = [25, 18, 15, 12, 10, 8, 6, 4, 2, 1];

impl ScoringRuleFamily {
    pub fn vector_for(&self, m: usize) -> Result<ScoringVector, ElectionError> {
        if m == 0 {
            return Err(ElectionError::UndefinedSize(0));
        }
        let values = match self {
            ScoringRuleFamily::Plurality => prefix_ones(1, m),
            ScoringRuleFamily::Veto => prefix_ones(m.saturating_sub(1), m),
            ScoringRuleFamily::KApproval(k) => prefix_ones(*k, m),
            ScoringRuleFamily::Borda => (0..m).rev().map(|v| v as i64).collect(),
            ScoringRuleFamily::Formula1_2009 => padded(&F1_2009, m),
            ScoringRuleFamily::Formula1_2010 => padded(&F1_2010, m),
            ScoringRuleFamily::Explicit(table) => {
                return table
                    .get(&m)
                    .cloned()
                    .ok_or(ElectionError::UndefinedSize(m));
            }
        };
        ScoringVector::new(values)
    }
}

fn prefix_ones(k: usize, m: usize) -> Vec<i64> {
    (0..m).map(|i| if i < k { 1 } else { 0 }).collect()
}

fn padded(seq: &[i64], m: usize) -> Vec<i64> {
    (0..m).map(|i| seq.get(i).copied().unwrap_or(0)).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: &[i64]) -> ScoringVector {
        ScoringVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn normalize_divides_gcd() {
        assert_eq!(sv(&[4, 2, 0]).normalized(), sv(&[2, 1, 0]));
    }

    #[test]
    fn normalize_shifts_last_to_zero() {
        assert_eq!(sv(&[3, 2, 1]).normalized(), sv(&[2, 1, 0]));
    }

    #[test]
    fn normalize_fixes_trivial_rule() {
        assert_eq!(sv(&[0, 0, 0]).normalized(), sv(&[0, 0, 0]));
        assert!(!sv(&[0, 0, 0]).is_non_trivial());
        assert!(!sv(&[5, 5, 5]).is_non_trivial());
    }

    #[test]
    fn normalize_is_idempotent() {
        for v in [
            sv(&[4, 2, 0]),
            sv(&[3, 2, 1]),
            sv(&[10, 8, 6, 0]),
            sv(&[7, 7, 7]),
        ] {
            let n = v.normalized();
            assert_eq!(n.normalized(), n);
        }
    }

    #[test]
    fn vector_for_families() {
        assert_eq!(
            ScoringRuleFamily::KApproval(2).vector_for(4).unwrap(),
            sv(&[1, 1, 0, 0])
        );
        assert_eq!(ScoringRuleFamily::Borda.vector_for(3).unwrap(), sv(&[2, 1, 0]));
        assert_eq!(
            ScoringRuleFamily::Formula1_2009.vector_for(12).unwrap(),
            sv(&[10, 8, 6, 5, 4, 3, 2, 1, 0, 0, 0, 0])
        );
        assert_eq!(
            ScoringRuleFamily::Plurality.vector_for(4).unwrap(),
            sv(&[1, 0, 0, 0])
        );
        assert_eq!(ScoringRuleFamily::Veto.vector_for(4).unwrap(), sv(&[1, 1, 1, 0]));
    }

    #[test]
    fn explicit_table_missing_size() {
        let table = ScoringRuleFamily::Explicit(std::collections::BTreeMap::new());
        assert_eq!(table.vector_for(3), Err(ElectionError::UndefinedSize(3)));
    }

    #[test]
    fn pure_step_examples() {
        assert!(is_pure_step(&sv(&[1, 0]), &sv(&[1, 1, 0])).unwrap());
        assert!(is_pure_step(&sv(&[1, 0]), &sv(&[2, 1, 0])).unwrap());
        assert!(!is_pure_step(&sv(&[2, 0]), &sv(&[1, 1, 0])).unwrap());
        assert!(is_pure_step(&sv(&[1, 0]), &sv(&[1, 0, 0])).unwrap());
    }

    #[test]
    fn pure_step_length_mismatch() {
        assert!(is_pure_step(&sv(&[1, 0]), &sv(&[1, 1, 1, 0])).is_err());
    }

    #[test]
    fn families_are_pure() {
        let fams = [
            ScoringRuleFamily::Plurality,
            ScoringRuleFamily::Veto,
            ScoringRuleFamily::KApproval(2),
            ScoringRuleFamily::KApproval(5),
            ScoringRuleFamily::Borda,
            ScoringRuleFamily::Formula1_2009,
            ScoringRuleFamily::Formula1_2010,
        ];
        for fam in &fams {
            for m in 2..=12 {
                let small = fam.vector_for(m - 1).unwrap();
                let big = fam.vector_for(m).unwrap();
                assert!(
                    is_pure_step(&small, &big).unwrap(),
                    "{fam:?} fails pure step at m={m}"
                );
            }
        }
    }

    #[test]
    fn runs_and_drops() {
        let v = sv(&[5, 5, 3, 3, 3, 0]);
        assert_eq!(v.runs(), vec![(1, 2, 5), (3, 5, 3), (6, 6, 0)]);
        assert_eq!(v.drop_positions(), vec![2, 5]);
        assert_eq!(v.distinct_values(), vec![5, 3, 0]);
    }
}
