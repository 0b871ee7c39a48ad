//! Chatterjee's rank correlation for real scalar pairs.
//!
//! `xi(y | x) = 1 - 3 * sum_k |r_{k+1} - r_k| / (L^2 - 1)` where `r` are the
//! ranks of `y` after the pairs are sorted by `x`. The statistic is
//! asymmetric: it measures how well `y` is predicted by `x`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ranks::{ranking, TiePolicy};

const TIES_X: u64 = 1;
const TIES_Y: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiStatistic {
    pub value: f64,
    pub n_pairs: usize,
}

impl XiStatistic {
    /// Largest attainable value for `n` pairs, reached by monotone data.
    pub fn upper_bound(n: usize) -> f64 {
        1.0 - 3.0 / (n as f64 + 1.0)
    }
}

/// Turn an integer rank-gap sum into the statistic. Division happens once.
#[inline]
pub fn xi_from_gap_sum(gap_sum: u64, len: usize) -> f64 {
    let l = len as u64;
    1.0 - (3 * gap_sum) as f64 / (l * l - 1) as f64
}

/// `sum_t |ranks[order[t+1]] - ranks[order[t]]|` in exact integer arithmetic.
#[inline]
pub fn rank_gap_sum(order: &[u32], ranks: &[u32]) -> u64 {
    let mut sum = 0u64;
    let mut prev = match order.first() {
        Some(&i) => ranks[i as usize],
        None => return 0,
    };
    for &i in &order[1..] {
        let r = ranks[i as usize];
        sum += r.abs_diff(prev) as u64;
        prev = r;
    }
    sum
}

/// Chatterjee correlation of `y` as a function of `x`.
pub fn chatterjee_xi(x: &[f64], y: &[f64], policy: TiePolicy) -> Result<XiStatistic> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooFewValues {
            min: 2,
            got: x.len(),
        });
    }
    let by_x = ranking(x, policy.child(TIES_X))?;
    let of_y = ranking(y, policy.child(TIES_Y))?;
    Ok(XiStatistic {
        value: xi_from_gap_sum(rank_gap_sum(&by_x.order, &of_y.ranks), x.len()),
        n_pairs: x.len(),
    })
}
