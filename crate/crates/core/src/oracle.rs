//! Independent reference answers used to check the solvers.

use thiserror::Error;

use crate::model::{Direction, Instance, Solution};
use crate::scalar::Scalar;

/// Largest instance the exhaustive search accepts.
pub const BRUTE_FORCE_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("exhaustive search is limited to {limit} intervals, got {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("intervals do not all have the same length")]
    UnequalLengths,
}

struct Search<'a> {
    inst: &'a Instance,
    used: Vec<bool>,
    prefix: Vec<usize>,
    best: Option<(Scalar, Vec<usize>)>,
}

impl Search<'_> {
    // Depth-first over orders in lexicographic order; the partial placement
    // is shared by every order with the same prefix.
    fn descend(&mut self, end: Option<&Scalar>, delta: &Scalar) {
        let n = self.inst.len();
        if self.prefix.len() == n {
            if self.best.as_ref().is_none_or(|(b, _)| delta < b) {
                self.best = Some((delta.clone(), self.prefix.clone()));
            }
            return;
        }
        for r in 0..n {
            if self.used[r] {
                continue;
            }
            let iv = &self.inst[r];
            let pos = match end {
                Some(e) if e > iv.left() => e.clone(),
                _ => iv.left().clone(),
            };
            let d = (&pos - iv.left()).max(delta.clone());
            let new_end = &pos + iv.length();
            self.used[r] = true;
            self.prefix.push(r);
            self.descend(Some(&new_end), &d);
            self.prefix.pop();
            self.used[r] = false;
        }
    }
}

/// Tries every order and keeps the best, ties to the lexicographically
/// smallest order of ranks.
pub fn brute_force(inst: &Instance) -> Result<Solution, OracleError> {
    let n = inst.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(OracleError::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut search = Search {
        inst,
        used: vec![false; n],
        prefix: Vec::with_capacity(n),
        best: None,
    };
    search.descend(None, &Scalar::ZERO);
    let (_, order) = search.best.expect("at least one order exists");
    Ok(Solution::from_order(inst, order).expect("search yields a permutation"))
}

/// For equal-length intervals the input order is optimal.
pub fn greedy_equal_length(inst: &Instance) -> Result<Solution, OracleError> {
    if !inst.all_equal_length() {
        return Err(OracleError::UnequalLengths);
    }
    let sol =
        Solution::from_order(inst, (0..inst.len()).collect()).expect("identity is a permutation");
    debug_assert_eq!(sol.direction, Direction::One);
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(pairs: &[(i64, i64)]) -> Instance {
        Instance::from_pairs(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn brute_examples() {
        let s = brute_force(&inst(&[(0, 2), (1, 3)])).unwrap();
        assert_eq!((s.delta, s.order), (Scalar::from(1), vec![0, 1]));
        let a = inst(&[(0, 8), (2, 4), (3, 5)]);
        let s = brute_force(&a).unwrap();
        assert_eq!(s.delta, Scalar::from(6));
        // Ranks: [0,8]=0, [2,4]=1, [3,5]=2.
        assert_eq!(s.order, vec![1, 2, 0]);
        assert_eq!(
            brute_force(&inst(&[(4, 9)])).unwrap().delta,
            Scalar::from(0)
        );
        let d = inst(&[(0, 10), (1, 3)]);
        assert_eq!(brute_force(&d).unwrap().delta, Scalar::from(3));
    }

    #[test]
    fn brute_guard() {
        let big = Instance::from_pairs((0..11).map(|k| (k, k + 1))).unwrap();
        assert_eq!(
            brute_force(&big),
            Err(OracleError::TooLarge { n: 11, limit: 10 })
        );
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(
            greedy_equal_length(&inst(&[(0, 2), (1, 3)])).unwrap().delta,
            Scalar::from(1)
        );
        assert_eq!(
            greedy_equal_length(&inst(&[(0, 1), (5, 6)])).unwrap().delta,
            Scalar::from(0)
        );
        let dup = inst(&[(0, 2), (0, 2), (0, 2)]);
        let s = greedy_equal_length(&dup).unwrap();
        assert_eq!(s.delta, Scalar::from(4));
        let pos: Vec<Scalar> = (0..3)
            .map(|r| s.config.position(r).unwrap().clone())
            .collect();
        assert_eq!(pos, vec![Scalar::from(0), Scalar::from(2), Scalar::from(4)]);
        assert_eq!(brute_force(&dup).unwrap().delta, Scalar::from(4));
        assert_eq!(
            greedy_equal_length(&inst(&[(0, 2), (0, 3)])),
            Err(OracleError::UnequalLengths)
        );
    }
}
