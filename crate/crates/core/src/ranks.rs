//! Ranking of real sequences with an explicit tie policy.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

/// What to do when two values compare equal.
///
/// Equality is exact: no epsilon is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum TiePolicy {
    /// Refuse tied input.
    Error,
    /// Order tied values uniformly at random from the given seed.
    RandomBreak { seed: u64 },
}

impl TiePolicy {
    /// A policy for a sub-computation, with an independent stream when random.
    pub fn child(self, tag: u64) -> TiePolicy {
        match self {
            TiePolicy::Error => TiePolicy::Error,
            TiePolicy::RandomBreak { seed } => TiePolicy::RandomBreak {
                seed: seed::derive(seed, &[tag]),
            },
        }
    }

    pub fn is_random(self) -> bool {
        matches!(self, TiePolicy::RandomBreak { .. })
    }
}

/// 1-based ranks forming a permutation of `1..=len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankVector(Vec<u32>);

impl RankVector {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Sorting permutation and ranks of one sequence, consistent with each other:
/// `ranks[order[r]] == r + 1`.
#[derive(Debug, Clone)]
pub struct Ranking {
    pub order: Vec<u32>,
    pub ranks: Vec<u32>,
}

pub(crate) fn check_finite(values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteInput)
    }
}

/// Ascending sort permutation with ties resolved per `policy`.
pub fn sort_index_by(values: &[f64], policy: TiePolicy) -> Result<Vec<usize>> {
    Ok(ranking(values, policy)?
        .order
        .into_iter()
        .map(|i| i as usize)
        .collect())
}

/// Ranks `1..=L` such that `ranks[i] = 1 + #{j : values[j] < values[i]}`,
/// with ties resolved per `policy`.
pub fn rank_all(values: &[f64], policy: TiePolicy) -> Result<RankVector> {
    Ok(RankVector(ranking(values, policy)?.ranks))
}

/// Compute order and ranks together, breaking ties once.
pub fn ranking(values: &[f64], policy: TiePolicy) -> Result<Ranking> {
    check_finite(values)?;
    assert!(
        values.len() <= u32::MAX as usize,
        "sequence too long to rank"
    );

    let mut order: Vec<u32> = (0..values.len() as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        values[a as usize]
            .total_cmp(&values[b as usize])
            .then(a.cmp(&b))
    });

    let mut rng = match policy {
        TiePolicy::Error => None,
        TiePolicy::RandomBreak { seed } => Some(seed::rng(seed)),
    };

    // Walk runs of equal values. `==` also merges -0.0 with +0.0.
    let mut start = 0;
    while start < order.len() {
        let v = values[order[start] as usize];
        let mut end = start + 1;
        while end < order.len() && values[order[end] as usize] == v {
            end += 1;
        }
        if end - start > 1 {
            match rng.as_mut() {
                None => return Err(Error::TiesDetected { value: v }),
                Some(rng) => order[start..end].shuffle(rng),
            }
        }
        start = end;
    }

    let mut ranks = vec![0u32; values.len()];
    for (r, &i) in order.iter().enumerate() {
        ranks[i as usize] = r as u32 + 1;
    }
    Ok(Ranking { order, ranks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ranks_simple() {
        let r = rank_all(&[3.0, 1.0, 2.0], TiePolicy::Error).unwrap();
        assert_eq!(r.as_slice(), &[3, 1, 2]);
        let r = rank_all(&[5.0], TiePolicy::Error).unwrap();
        assert_eq!(r.as_slice(), &[1]);
    }

    #[test]
    fn ties_rejected_in_error_mode() {
        let err = rank_all(&[1.0, 1.0, 2.0], TiePolicy::Error).unwrap_err();
        assert!(matches!(err, Error::TiesDetected { .. }));
        assert!(matches!(
            sort_index_by(&[0.0, -0.0], TiePolicy::Error),
            Err(Error::TiesDetected { .. })
        ));
    }

    #[test]
    fn non_finite_rejected() {
        assert!(matches!(
            rank_all(&[1.0, f64::NAN], TiePolicy::Error),
            Err(Error::NonFiniteInput)
        ));
        assert!(matches!(
            sort_index_by(&[f64::INFINITY], TiePolicy::RandomBreak { seed: 1 }),
            Err(Error::NonFiniteInput)
        ));
    }

    #[test]
    fn sort_index_examples() {
        assert_eq!(
            sort_index_by(&[0.2, -1.0, 0.1], TiePolicy::Error).unwrap(),
            vec![1, 2, 0]
        );
        assert_eq!(
            sort_index_by(&[-3.0, 0.0, 4.5, 9.0], TiePolicy::Error).unwrap(),
            vec![0, 1, 2, 3]
        );
    }

    #[test]
    fn random_break_is_reproducible() {
        let p = TiePolicy::RandomBreak { seed: 42 };
        let a = sort_index_by(&[1.0, 1.0], p).unwrap();
        let b = sort_index_by(&[1.0, 1.0], p).unwrap();
        assert_eq!(a, b);
        let mut s = a.clone();
        s.sort();
        assert_eq!(s, vec![0, 1]);
    }

    #[test]
    fn random_break_uses_both_orders() {
        let seen: std::collections::HashSet<Vec<usize>> = (0..64)
            .map(|s| sort_index_by(&[2.0, 2.0, 2.0], TiePolicy::RandomBreak { seed: s }).unwrap())
            .collect();
        assert!(seen.len() > 1);
    }

    #[test]
    fn ranks_with_random_break_are_a_permutation() {
        let v = [1.0, 0.0, 1.0, 1.0, -2.0];
        let r = rank_all(&v, TiePolicy::RandomBreak { seed: 9 }).unwrap();
        let mut s = r.into_inner();
        assert_eq!(s[4], 1);
        assert_eq!(s[1], 2);
        s.sort();
        assert_eq!(s, vec![1, 2, 3, 4, 5]);
    }

    proptest! {
        #[test]
        fn ranks_follow_permutation(
            v in proptest::collection::hash_set(-1_000_000i64..1_000_000, 1..40),
            seed in any::<u64>(),
        ) {
            let vals: Vec<f64> = v.into_iter().map(|x| x as f64 / 7.0).collect();
            let base = rank_all(&vals, TiePolicy::Error).unwrap();
            // Count-based definition.
            for (i, &r) in base.as_slice().iter().enumerate() {
                let below = vals.iter().filter(|&&w| w < vals[i]).count();
                prop_assert_eq!(r as usize, below + 1);
            }
            let mut perm: Vec<usize> = (0..vals.len()).collect();
            perm.shuffle(&mut seed::rng(seed));
            let permuted: Vec<f64> = perm.iter().map(|&i| vals[i]).collect();
            let pr = rank_all(&permuted, TiePolicy::Error).unwrap();
            for (k, &i) in perm.iter().enumerate() {
                prop_assert_eq!(pr.as_slice()[k], base.as_slice()[i]);
            }
        }

        #[test]
        fn sorted_then_ranked_is_identity(
            v in proptest::collection::vec(-1e6f64..1e6, 1..60),
            seed in any::<u64>(),
        ) {
            let p = TiePolicy::RandomBreak { seed };
            let order = sort_index_by(&v, p).unwrap();
            let sorted: Vec<f64> = order.iter().map(|&i| v[i]).collect();
            prop_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
            let dedup_free = {
                let mut s = sorted.clone();
                s.dedup();
                s.len() == sorted.len()
            };
            if dedup_free {
                let r = rank_all(&sorted, TiePolicy::Error).unwrap();
                let expect: Vec<u32> = (1..=v.len() as u32).collect();
                prop_assert_eq!(r.into_inner(), expect);
            }
        }
    }
}
