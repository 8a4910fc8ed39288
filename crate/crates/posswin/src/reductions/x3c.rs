use super::ReductionError;

/// Exact-cover-by-3-sets instance: a universe of `q` elements numbered
/// `1..=q` and a family of ordered triples over it. The triple order is
/// meaningful: one construction distinguishes the third component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct X3CInstance {
    q: usize,
    triples: Vec<[usize; 3]>,
}

impl X3CInstance {
    pub fn new(q: usize, triples: Vec<[usize; 3]>) -> Result<Self, ReductionError> {
        for (i, t) in triples.iter().enumerate() {
            for &e in t {
                if e == 0 || e > q {
                    return Err(ReductionError::InvalidSource(format!(
                        "subset {} references element {e} outside 1..={q}",
                        i + 1
                    )));
                }
            }
            if t[0] == t[1] || t[0] == t[2] || t[1] == t[2] {
                return Err(ReductionError::InvalidSource(format!(
                    "subset {} is not a set of three distinct elements",
                    i + 1
                )));
            }
        }
        Ok(X3CInstance { q, triples })
    }

    pub fn universe_size(&self) -> usize {
        self.q
    }

    pub fn num_subsets(&self) -> usize {
        self.triples.len()
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    /// Number of subsets containing element `e`.
    pub fn occurrences(&self, e: usize) -> usize {
        self.triples.iter().filter(|t| t.contains(&e)).count()
    }

    /// Number of subsets whose third component is `e`.
    pub fn third_occurrences(&self, e: usize) -> usize {
        self.triples.iter().filter(|t| t[2] == e).count()
    }

    /// Number of subsets where `e` is the first or second component.
    pub fn leading_occurrences(&self, e: usize) -> usize {
        self.triples
            .iter()
            .filter(|t| t[0] == e || t[1] == e)
            .count()
    }

    /// Is the given family of subset indices an exact cover?
    pub fn is_exact_cover(&self, chosen: &[usize]) -> bool {
        let mut covered = vec![false; self.q + 1];
        for &i in chosen {
            let Some(t) = self.triples.get(i) else {
                return false;
            };
            for &e in t {
                if covered[e] {
                    return false;
                }
                covered[e] = true;
            }
        }
        covered[1..].iter().all(|&c| c)
    }

    /// Checks divisibility and cover-size bounds required by the
    /// gadget constructions.
    pub(crate) fn check_reducible(&self) -> Result<(), ReductionError> {
        if self.q == 0 || self.triples.is_empty() {
            return Err(ReductionError::InvalidSource(
                "empty universe or subset family".into(),
            ));
        }
        if self.q % 3 != 0 {
            return Err(ReductionError::InvalidSource(
                "universe size is not divisible by 3".into(),
            ));
        }
        if self.q / 3 > self.triples.len() {
            return Err(ReductionError::InvalidSource(
                "fewer subsets than the cover would need".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_triples() {
        assert!(X3CInstance::new(3, vec![[1, 2, 4]]).is_err());
        assert!(X3CInstance::new(3, vec![[1, 1, 2]]).is_err());
        assert!(X3CInstance::new(3, vec![[0, 1, 2]]).is_err());
    }

    #[test]
    fn occurrence_counts() {
        let x = X3CInstance::new(6, vec![[1, 2, 3], [1, 2, 4], [4, 5, 1]]).unwrap();
        assert_eq!(x.occurrences(1), 3);
        assert_eq!(x.occurrences(6), 0);
        assert_eq!(x.third_occurrences(1), 1);
        assert_eq!(x.leading_occurrences(1), 2);
    }

    #[test]
    fn cover_check() {
        let x = X3CInstance::new(6, vec![[1, 2, 3], [4, 5, 6], [1, 2, 4]]).unwrap();
        assert!(x.is_exact_cover(&[0, 1]));
        assert!(!x.is_exact_cover(&[0, 2]));
        assert!(!x.is_exact_cover(&[0]));
    }
}
