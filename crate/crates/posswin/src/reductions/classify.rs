use crate::election::ScoringVector;
use std::fmt;

/// Which construction family a scoring vector falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    EasyPlurality,
    EasyVeto,
    EasyTrivial,
    /// The one open shape: (2, 1, ..., 1, 0).
    Open2110,
    /// Enough pairwise-distinct score values for the distinct-value
    /// construction.
    DifferentType,
    /// Long plateau ending in a drop before the last position.
    CaseI,
    /// Drop into a long plateau with some j < i where alpha_j < 2 alpha_{j+1}.
    CaseIIa,
    /// Drop into a long plateau with some j < i where alpha_j >= 3 alpha_i.
    CaseIIb,
    /// (a1, a2, 0, ..., 0) with 3 a2 > a1 > 2 a2.
    CaseIIc,
    /// (2, 1, 0, ..., 0).
    CaseIId,
    /// (a1, a2, ..., a2, 0) with a1 != 2 a2.
    CaseIII,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::EasyPlurality => "easy-plurality",
            CaseTag::EasyVeto => "easy-veto",
            CaseTag::EasyTrivial => "easy-trivial",
            CaseTag::Open2110 => "open-21...10",
            CaseTag::DifferentType => "different-type",
            CaseTag::CaseI => "case-I",
            CaseTag::CaseIIa => "case-IIa",
            CaseTag::CaseIIb => "case-IIb",
            CaseTag::CaseIIc => "case-IIc",
            CaseTag::CaseIId => "case-IId",
            CaseTag::CaseIII => "case-III",
        };
        write!(f, "{s}")
    }
}

/// Assigns every vector exactly one tag, testing in order: the four
/// excluded shapes, the distinct-value count against `x_threshold`, the
/// plateau cases anchored at the longest run (leftmost on ties), the
/// two-value subcases by the leading ratio, and the head-tail shape.
pub fn classify_scoring_vector(rule: &ScoringVector, x_threshold: usize) -> CaseTag {
    let v = rule.normalized();
    let m = v.len();
    let vals = v.values();

    if vals.iter().all(|&x| x == 0) {
        return CaseTag::EasyTrivial;
    }
    if vals[0] == 1 && vals[1..].iter().all(|&x| x == 0) {
        return CaseTag::EasyPlurality;
    }
    if m >= 2 && *vals.last().unwrap() == 0 && vals[..m - 1].iter().all(|&x| x == 1) {
        return CaseTag::EasyVeto;
    }
    if m >= 3
        && vals[0] == 2
        && *vals.last().unwrap() == 0
        && vals[1..m - 1].iter().all(|&x| x == 1)
    {
        return CaseTag::Open2110;
    }

    if v.distinct_values().len() >= x_threshold {
        return CaseTag::DifferentType;
    }

    // anchor the analysis at the longest run of equal values, leftmost on ties
    let runs = v.runs();
    let mut anchor = runs[0];
    for r in &runs[1..] {
        if r.1 - r.0 > anchor.1 - anchor.0 {
            anchor = *r;
        }
    }
    let (anchor_start, anchor_end, _) = anchor;

    // a drop right after the anchor, not at the very end
    if anchor_end <= m - 2 {
        return CaseTag::CaseI;
    }
    // a drop right before the anchor at position i >= 2
    if anchor_start >= 3 {
        let i = anchor_start - 1;
        if (1..i).any(|j| v.at(j) < 2 * v.at(j + 1)) {
            return CaseTag::CaseIIa;
        }
        if (1..i).any(|j| v.at(j) >= 3 * v.at(i)) {
            return CaseTag::CaseIIb;
        }
    }
    // two leading values then zeros
    if m >= 3 && vals[1] > 0 && vals[2..].iter().all(|&x| x == 0) {
        let (a1, a2) = (vals[0], vals[1]);
        if a1 == 2 * a2 {
            return CaseTag::CaseIId;
        }
        if 2 * a2 < a1 && a1 < 3 * a2 {
            return CaseTag::CaseIIc;
        }
        if a1 >= 3 * a2 {
            return CaseTag::CaseIIb;
        }
        // a1 < 2 a2 drops into the zero plateau
        return CaseTag::CaseIIa;
    }
    // one leading value, equal middle, zero tail
    if m >= 3 && vals[0] > vals[1] && vals[1] == vals[m - 2] && vals[1] > 0 {
        return CaseTag::CaseIII;
    }
    // leftover shapes still carry several distinct values
    CaseTag::DifferentType
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::ScoringRuleFamily;

    fn sv(v: &[i64]) -> ScoringVector {
        ScoringVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn named_examples() {
        assert_eq!(classify_scoring_vector(&sv(&[1, 1, 0, 0]), 4), CaseTag::CaseI);
        assert_eq!(
            classify_scoring_vector(&sv(&[2, 1, 1, 1, 0]), 4),
            CaseTag::Open2110
        );
        let borda12 = ScoringRuleFamily::Borda.vector_for(12).unwrap();
        assert_eq!(classify_scoring_vector(&borda12, 10), CaseTag::DifferentType);
    }

    #[test]
    fn excluded_shapes() {
        assert_eq!(classify_scoring_vector(&sv(&[0, 0, 0]), 4), CaseTag::EasyTrivial);
        assert_eq!(
            classify_scoring_vector(&sv(&[1, 0, 0]), 4),
            CaseTag::EasyPlurality
        );
        assert_eq!(classify_scoring_vector(&sv(&[1, 1, 0]), 4), CaseTag::EasyVeto);
        // normalization first: (4, 2, 2, 0) is (2, 1, 1, 0)
        assert_eq!(classify_scoring_vector(&sv(&[4, 2, 2, 0]), 4), CaseTag::Open2110);
    }

    #[test]
    fn two_value_subcases() {
        assert_eq!(
            classify_scoring_vector(&sv(&[5, 2, 0, 0, 0, 0]), 4),
            CaseTag::CaseIIc
        );
        assert_eq!(
            classify_scoring_vector(&sv(&[2, 1, 0, 0, 0, 0]), 4),
            CaseTag::CaseIId
        );
        assert_eq!(
            classify_scoring_vector(&sv(&[3, 1, 0, 0, 0, 0]), 4),
            CaseTag::CaseIIb
        );
        assert_eq!(
            classify_scoring_vector(&sv(&[3, 2, 0, 0, 0, 0]), 4),
            CaseTag::CaseIIa
        );
    }

    #[test]
    fn plurality_veto_mix_cases() {
        // 2-approval and longer zero tails ride the flipped-pair case
        assert_eq!(
            classify_scoring_vector(&sv(&[1, 1, 0, 0, 0]), 4),
            CaseTag::CaseIIa
        );
        // head-tail combination shapes
        assert_eq!(
            classify_scoring_vector(&sv(&[3, 2, 2, 2, 0]), 4),
            CaseTag::CaseIII
        );
        assert_eq!(
            classify_scoring_vector(&sv(&[5, 2, 2, 2, 0]), 4),
            CaseTag::CaseIII
        );
    }

    #[test]
    fn totality_over_small_vectors() {
        // exhaustively: all non-increasing vectors with values <= 4, m <= 6
        fn rec(prefix: &mut Vec<i64>, m: usize, out: &mut Vec<Vec<i64>>) {
            if prefix.len() == m {
                out.push(prefix.clone());
                return;
            }
            let max = prefix.last().copied().unwrap_or(4);
            for v in (0..=max).rev() {
                prefix.push(v);
                rec(prefix, m, out);
                prefix.pop();
            }
        }
        for m in 1..=6 {
            let mut all = Vec::new();
            rec(&mut Vec::new(), m, &mut all);
            for vals in all {
                let rule = ScoringVector::new(vals).unwrap();
                // must not panic, must return some tag
                let _ = classify_scoring_vector(&rule, 4);
            }
        }
    }
}
