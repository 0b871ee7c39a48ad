//! Synchronized random-permutation tests.
//!
//! One random permutation `pi_k` per null draw is used twice: it reorders
//! the Y samples for `dch(Y | X)` and the X samples for `dch(X | Y)`. The
//! causal deltas of a draw are formed from those two permuted statistics.
//! The distance-correlation null and, for bivariate real data, the raw-data
//! Chatterjee nulls use the same `pi_k`.
//!
//! Distance matrices are centered once. A permutation relabels samples, and
//! `(i, j) -> (pi(i), pi(j))` is a bijection of the upper triangle, so a
//! permuted distance vector is a rearrangement of the original. Ranks are
//! therefore computed once and each null draw only remaps indices: O(M) per
//! draw with no sorting and no distance recomputation.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{check_permutation, SampleSet};
use crate::dcor::{dcor_from_moments, dcov_squared};
use crate::directed::{reci_verdict, CausalVerdict, DchResult};
use crate::error::{Error, Result};
use crate::ranks::{ranking, Ranking, TiePolicy};
use crate::seed::{self, tag};
use crate::transform::{
    centered_distances, flat_len, flatten_upper, row_start, CenteredDistanceMatrix,
};
use crate::xi::xi_from_gap_sum;

/// The tested hypotheses, named by their power labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    /// H0: dCh[Y = F(X)] = 0.
    #[serde(rename = "dch-PowYfX")]
    DchYfX,
    /// H0: dCh[X = G(Y)] = 0.
    #[serde(rename = "dch-PowXfY")]
    DchXfY,
    /// H0: Ch[y = f(x)] = 0 on the raw data.
    #[serde(rename = "ch-PowYfX")]
    ChYfX,
    /// H0: Ch[x = g(y)] = 0 on the raw data.
    #[serde(rename = "ch-PowXfY")]
    ChXfY,
    /// Distance-correlation independence test.
    #[serde(rename = "sz-PowYfX")]
    SzYfX,
    /// H0: delta(x -> y) = 0.
    #[serde(rename = "dch-PowXcY")]
    DchXcY,
    /// H0: delta(y -> x) = 0.
    #[serde(rename = "dch-PowYcX")]
    DchYcX,
    #[serde(rename = "ch-PowXcY")]
    ChXcY,
    #[serde(rename = "ch-PowYcX")]
    ChYcX,
}

impl Hypothesis {
    pub const ALL: [Hypothesis; 9] = [
        Hypothesis::DchYfX,
        Hypothesis::DchXfY,
        Hypothesis::ChYfX,
        Hypothesis::ChXfY,
        Hypothesis::SzYfX,
        Hypothesis::DchXcY,
        Hypothesis::DchYcX,
        Hypothesis::ChXcY,
        Hypothesis::ChYcX,
    ];

    /// Column label used in power tables.
    pub fn label(self) -> &'static str {
        match self {
            Hypothesis::DchYfX => "dch-PowYfX",
            Hypothesis::DchXfY => "dch-PowXfY",
            Hypothesis::ChYfX => "ch-PowYfX",
            Hypothesis::ChXfY => "ch-PowXfY",
            Hypothesis::SzYfX => "sz-PowYfX",
            Hypothesis::DchXcY => "dch-PowXcY",
            Hypothesis::DchYcX => "dch-PowYcX",
            Hypothesis::ChXcY => "ch-PowXcY",
            Hypothesis::ChYcX => "ch-PowYcX",
        }
    }

    /// Key of the observed statistic in reports.
    pub fn key(self) -> &'static str {
        match self {
            Hypothesis::DchYfX => "dch_yx",
            Hypothesis::DchXfY => "dch_xy",
            Hypothesis::ChYfX => "ch_yx",
            Hypothesis::ChXfY => "ch_xy",
            Hypothesis::SzYfX => "dcor",
            Hypothesis::DchXcY => "delta_xy",
            Hypothesis::DchYcX => "delta_yx",
            Hypothesis::ChXcY => "ch_delta_xy",
            Hypothesis::ChYcX => "ch_delta_yx",
        }
    }

    pub fn is_raw_chatterjee(self) -> bool {
        matches!(
            self,
            Hypothesis::ChYfX | Hypothesis::ChXfY | Hypothesis::ChXcY | Hypothesis::ChYcX
        )
    }

    pub fn from_label(s: &str) -> Option<Hypothesis> {
        Hypothesis::ALL.into_iter().find(|h| h.label() == s)
    }
}

/// All statistics of one (observed or permuted) dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Statistics {
    pub dch_yx: f64,
    pub dch_xy: f64,
    pub delta_xy: f64,
    pub delta_yx: f64,
    pub dcor: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ch_yx: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ch_xy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ch_delta_xy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ch_delta_yx: Option<f64>,
}

impl Statistics {
    fn new(dch_yx: f64, dch_xy: f64, dcor: f64, ch: Option<(f64, f64)>) -> Self {
        Statistics {
            dch_yx,
            dch_xy,
            delta_xy: dch_yx - dch_xy,
            delta_yx: dch_xy - dch_yx,
            dcor,
            ch_yx: ch.map(|c| c.0),
            ch_xy: ch.map(|c| c.1),
            ch_delta_xy: ch.map(|c| c.0 - c.1),
            ch_delta_yx: ch.map(|c| c.1 - c.0),
        }
    }

    pub fn get(&self, h: Hypothesis) -> Option<f64> {
        match h {
            Hypothesis::DchYfX => Some(self.dch_yx),
            Hypothesis::DchXfY => Some(self.dch_xy),
            Hypothesis::SzYfX => Some(self.dcor),
            Hypothesis::DchXcY => Some(self.delta_xy),
            Hypothesis::DchYcX => Some(self.delta_yx),
            Hypothesis::ChYfX => self.ch_yx,
            Hypothesis::ChXfY => self.ch_xy,
            Hypothesis::ChXcY => self.ch_delta_xy,
            Hypothesis::ChYcX => self.ch_delta_yx,
        }
    }

    pub fn dch(&self) -> DchResult {
        DchResult {
            dch_y_given_x: self.dch_yx,
            dch_x_given_y: self.dch_xy,
            delta_x_to_y: self.delta_xy,
            delta_y_to_x: self.delta_yx,
        }
    }
}

/// How a p-value is formed from the exceedance count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PValueRule {
    /// `count / K`; can be exactly zero.
    #[default]
    Exact,
    /// `(count + 1) / (K + 1)`; strictly positive.
    PlusOne,
}

impl PValueRule {
    pub fn apply(self, count: usize, k: usize) -> f64 {
        match self {
            PValueRule::Exact => count as f64 / k as f64,
            PValueRule::PlusOne => (count + 1) as f64 / (k + 1) as f64,
        }
    }
}

/// `(1/K) * #{k : s0 <= s_k}`.
pub fn pvalue(s0: f64, null_samples: &[f64]) -> Result<f64> {
    if null_samples.is_empty() {
        return Err(Error::EmptyNull);
    }
    Ok(PValueRule::Exact.apply(exceedances(s0, null_samples), null_samples.len()))
}

fn exceedances(s0: f64, null_samples: &[f64]) -> usize {
    null_samples.iter().filter(|&&s| s0 <= s).count()
}

/// Relabel a centered distance matrix: entry `(i, j)` is `B[pi(i), pi(j)]`.
pub fn permuted_centered(
    b: &CenteredDistanceMatrix,
    perm: &[usize],
) -> Result<CenteredDistanceMatrix> {
    b.permuted(perm)
}

/// The `k`-th synchronized permutation for a test seeded with `seed`.
/// Depends only on `(seed, k, n)`.
pub fn synchronized_permutation(seed: u64, k: usize, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut seed::rng_at(seed, &[tag::PERMUTATION, k as u64]));
    perm
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestConfig {
    pub permutations: usize,
    pub seed: u64,
    pub ties: TiePolicy,
    #[serde(default)]
    pub pvalue_rule: PValueRule,
}

impl TestConfig {
    pub fn new(permutations: usize, seed: u64, ties: TiePolicy) -> Self {
        TestConfig {
            permutations,
            seed,
            ties,
            pvalue_rule: PValueRule::Exact,
        }
    }
}

/// p-values per hypothesis; raw-Chatterjee entries only for bivariate real data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PValues {
    pub p_dch_yx: f64,
    pub p_dch_xy: f64,
    pub p_delta_xy: f64,
    pub p_delta_yx: f64,
    pub p_dcor: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p_ch_yx: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p_ch_xy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p_ch_delta_xy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p_ch_delta_yx: Option<f64>,
}

impl PValues {
    pub fn get(&self, h: Hypothesis) -> Option<f64> {
        match h {
            Hypothesis::DchYfX => Some(self.p_dch_yx),
            Hypothesis::DchXfY => Some(self.p_dch_xy),
            Hypothesis::SzYfX => Some(self.p_dcor),
            Hypothesis::DchXcY => Some(self.p_delta_xy),
            Hypothesis::DchYcX => Some(self.p_delta_yx),
            Hypothesis::ChYfX => self.p_ch_yx,
            Hypothesis::ChXfY => self.p_ch_xy,
            Hypothesis::ChXcY => self.p_ch_delta_xy,
            Hypothesis::ChYcX => self.p_ch_delta_yx,
        }
    }
}

/// Observed statistics, permutation p-values and the RECI verdicts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociationReport {
    pub n: usize,
    #[serde(flatten)]
    pub observed: Statistics,
    #[serde(flatten)]
    pub p_values: PValues,
    #[serde(rename = "K")]
    pub permutations: usize,
    pub seed: u64,
    pub ties: TiePolicy,
    pub pvalue_rule: PValueRule,
    pub verdict: CausalVerdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ch_verdict: Option<CausalVerdict>,
}

struct RawRanks {
    x: Ranking,
    y: Ranking,
}

/// Data prepared once for repeated synchronized-permutation draws.
pub struct SynchronizedTest {
    n: usize,
    a: CenteredDistanceMatrix,
    b: CenteredDistanceMatrix,
    dvar2_x: f64,
    dvar2_y: f64,
    /// Ranks of the X / Y distance vectors.
    ranks_x: Vec<u32>,
    ranks_y: Vec<u32>,
    /// Matrix coordinates of the distance-vector entries in ascending X / Y order.
    pairs_by_x: Vec<[u32; 2]>,
    pairs_by_y: Vec<[u32; 2]>,
    row_starts: Vec<u32>,
    raw: Option<RawRanks>,
}

fn coordinates(n: usize) -> Vec<[u32; 2]> {
    let mut out = Vec::with_capacity(flat_len(n));
    for i in 0..n as u32 {
        for j in i..n as u32 {
            out.push([i, j]);
        }
    }
    out
}

impl SynchronizedTest {
    pub fn new(x: &SampleSet, y: &SampleSet, ties: TiePolicy) -> Result<Self> {
        if x.n() != y.n() {
            return Err(Error::ShapeMismatch(format!(
                "X has {} samples, Y has {}",
                x.n(),
                y.n()
            )));
        }
        let n = x.n();
        if n < 3 {
            return Err(Error::TooFewValues { min: 3, got: n });
        }
        let a = centered_distances(x)?;
        let b = centered_distances(y)?;
        let rx = ranking(flatten_upper(&a).as_slice(), ties.child(tag::TIES_X))?;
        let ry = ranking(flatten_upper(&b).as_slice(), ties.child(tag::TIES_Y))?;
        let coords = coordinates(n);
        let pairs_by_x = rx.order.iter().map(|&k| coords[k as usize]).collect();
        let pairs_by_y = ry.order.iter().map(|&k| coords[k as usize]).collect();

        let raw = match (x.scalars(), y.scalars()) {
            (Some(xs), Some(ys)) => Some(RawRanks {
                x: ranking(&xs, ties.child(tag::TIES_RAW_X))?,
                y: ranking(&ys, ties.child(tag::TIES_RAW_Y))?,
            }),
            _ => None,
        };

        Ok(SynchronizedTest {
            n,
            dvar2_x: dcov_squared(&a, &a),
            dvar2_y: dcov_squared(&b, &b),
            a,
            b,
            ranks_x: rx.ranks,
            ranks_y: ry.ranks,
            pairs_by_x,
            pairs_by_y,
            row_starts: (0..n).map(|i| row_start(n, i) as u32).collect(),
            raw,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_raw_chatterjee(&self) -> bool {
        self.raw.is_some()
    }

    /// Rank-gap sum over `pairs` (fixed predictor order) with response ranks
    /// read at the relabeled coordinates `(perm[i], perm[j])`.
    #[inline]
    fn remapped_gap_sum(&self, pairs: &[[u32; 2]], ranks: &[u32], perm: &[u32]) -> u64 {
        let rank_at = |&[i, j]: &[u32; 2]| {
            let (p, q) = (perm[i as usize], perm[j as usize]);
            let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
            ranks[(self.row_starts[lo as usize] + (hi - lo)) as usize]
        };
        let mut iter = pairs.iter();
        let mut prev = match iter.next() {
            Some(c) => rank_at(c),
            None => return 0,
        };
        let mut sum = 0u64;
        for c in iter {
            let r = rank_at(c);
            sum += r.abs_diff(prev) as u64;
            prev = r;
        }
        sum
    }

    fn remapped_raw_gap_sum(order: &[u32], ranks: &[u32], perm: &[u32]) -> u64 {
        let mut prev = ranks[perm[order[0] as usize] as usize];
        let mut sum = 0u64;
        for &i in &order[1..] {
            let r = ranks[perm[i as usize] as usize];
            sum += r.abs_diff(prev) as u64;
            prev = r;
        }
        sum
    }

    fn permuted_dcor(&self, perm: &[u32]) -> f64 {
        let n = self.n as f64;
        let mut s = 0.0;
        for (i, &pi) in perm.iter().enumerate() {
            let arow = self.a.row(i);
            let brow = self.b.row(pi as usize);
            s += arow
                .iter()
                .zip(perm)
                .map(|(&av, &pj)| av * brow[pj as usize])
                .sum::<f64>();
        }
        dcor_from_moments(s / (n * n), self.dvar2_x, self.dvar2_y)
    }

    /// Statistics after reordering Y by `perm` for the Y-given-X direction
    /// and X by `perm` for the X-given-Y direction.
    fn statistics_for(&self, perm: &[u32]) -> Statistics {
        let m = self.ranks_x.len();
        let dch_yx = xi_from_gap_sum(
            self.remapped_gap_sum(&self.pairs_by_x, &self.ranks_y, perm),
            m,
        );
        let dch_xy = xi_from_gap_sum(
            self.remapped_gap_sum(&self.pairs_by_y, &self.ranks_x, perm),
            m,
        );
        let dcor = self.permuted_dcor(perm);
        let ch = self.raw.as_ref().map(|raw| {
            (
                xi_from_gap_sum(
                    Self::remapped_raw_gap_sum(&raw.x.order, &raw.y.ranks, perm),
                    self.n,
                ),
                xi_from_gap_sum(
                    Self::remapped_raw_gap_sum(&raw.y.order, &raw.x.ranks, perm),
                    self.n,
                ),
            )
        });
        Statistics::new(dch_yx, dch_xy, dcor, ch)
    }

    pub fn observed(&self) -> Statistics {
        let identity: Vec<u32> = (0..self.n as u32).collect();
        self.statistics_for(&identity)
    }

    /// Statistics of one synchronized null draw under permutation `perm`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Statistics> {
        check_permutation(perm, self.n)?;
        let p: Vec<u32> = perm.iter().map(|&i| i as u32).collect();
        Ok(self.statistics_for(&p))
    }

    /// `K` synchronized null draws, in draw order. Independent of the number
    /// of worker threads.
    pub fn null_distribution(&self, permutations: usize, seed: u64) -> Vec<Statistics> {
        (0..permutations)
            .into_par_iter()
            .map(|k| {
                let perm: Vec<u32> = synchronized_permutation(seed, k, self.n)
                    .into_iter()
                    .map(|i| i as u32)
                    .collect();
                self.statistics_for(&perm)
            })
            .collect()
    }

    pub fn run(&self, config: &TestConfig) -> Result<AssociationReport> {
        let k = config.permutations;
        if k == 0 {
            return Err(Error::InvalidK);
        }
        let observed = self.observed();
        let nulls = self.null_distribution(k, config.seed);
        let p = |h: Hypothesis| -> Option<f64> {
            let s0 = observed.get(h)?;
            let count = nulls
                .iter()
                .filter(|s| s0 <= s.get(h).expect("null draws carry the same statistics"))
                .count();
            Some(config.pvalue_rule.apply(count, k))
        };
        let p_values = PValues {
            p_dch_yx: p(Hypothesis::DchYfX).unwrap(),
            p_dch_xy: p(Hypothesis::DchXfY).unwrap(),
            p_delta_xy: p(Hypothesis::DchXcY).unwrap(),
            p_delta_yx: p(Hypothesis::DchYcX).unwrap(),
            p_dcor: p(Hypothesis::SzYfX).unwrap(),
            p_ch_yx: p(Hypothesis::ChYfX),
            p_ch_xy: p(Hypothesis::ChXfY),
            p_ch_delta_xy: p(Hypothesis::ChXcY),
            p_ch_delta_yx: p(Hypothesis::ChYcX),
        };
        let ch_verdict = observed
            .ch_yx
            .zip(observed.ch_xy)
            .map(|(yx, xy)| reci_verdict(&DchResult::from_directed(yx, xy)));
        Ok(AssociationReport {
            n: self.n,
            observed,
            p_values,
            permutations: k,
            seed: config.seed,
            ties: config.ties,
            pvalue_rule: config.pvalue_rule,
            verdict: reci_verdict(&observed.dch()),
            ch_verdict,
        })
    }
}

/// Observed statistics and synchronized-permutation p-values for all
/// hypotheses that apply to the data.
pub fn synchronized_test(
    x: &SampleSet,
    y: &SampleSet,
    config: &TestConfig,
) -> Result<AssociationReport> {
    if config.permutations == 0 {
        return Err(Error::InvalidK);
    }
    SynchronizedTest::new(x, y, config.ties)?.run(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::directed::causal_deltas;
    use crate::transform::centered_distances;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn gaussian(seed: u64, n: usize, d: usize) -> SampleSet {
        let mut rng = seed::rng(seed);
        let v: Vec<f64> = (0..n * d).map(|_| rng.sample(StandardNormal)).collect();
        SampleSet::from_real(n, d, &v).unwrap()
    }

    #[test]
    fn pvalue_examples() {
        assert_eq!(pvalue(0.9, &[0.6, 0.4, 0.5, 0.7]).unwrap(), 0.0);
        assert_eq!(pvalue(0.5, &[0.6, 0.4, 0.5, 0.7]).unwrap(), 0.75);
        assert_eq!(pvalue(-1.0, &[0.6, 0.4, 0.5, 0.7]).unwrap(), 1.0);
        let mut null = vec![0.0; 9];
        null.push(0.3);
        assert_eq!(pvalue(0.3, &null).unwrap(), 0.1);
        assert!(matches!(pvalue(0.1, &[]), Err(Error::EmptyNull)));
        assert_eq!(PValueRule::PlusOne.apply(0, 99), 0.01);
    }

    #[test]
    fn observed_matches_direct_computation() {
        let x = gaussian(1, 30, 2);
        let y = gaussian(2, 30, 3);
        let t = SynchronizedTest::new(&x, &y, TiePolicy::Error).unwrap();
        let obs = t.observed();
        let direct = causal_deltas(&x, &y, TiePolicy::Error).unwrap();
        assert_eq!(obs.dch(), direct);
        let dcor = crate::dcor::distance_correlation(&x, &y).unwrap().value;
        assert!((obs.dcor - dcor).abs() < 1e-12);
        assert!(obs.ch_yx.is_none());
    }

    #[test]
    fn permuted_matches_recompute_from_samples() {
        let x = gaussian(3, 25, 1);
        let y = gaussian(4, 25, 1);
        let t = SynchronizedTest::new(&x, &y, TiePolicy::Error).unwrap();
        for k in 0..20 {
            let perm = synchronized_permutation(99, k, 25);
            let fast = t.permuted(&perm).unwrap();
            let yx = causal_deltas(&x, &y.permuted(&perm).unwrap(), TiePolicy::Error).unwrap();
            let xy = causal_deltas(&x.permuted(&perm).unwrap(), &y, TiePolicy::Error).unwrap();
            assert_eq!(fast.dch_yx, yx.dch_y_given_x);
            assert_eq!(fast.dch_xy, xy.dch_x_given_y);
            assert_eq!(fast.delta_yx, -fast.delta_xy);

            let xs = x.scalars().unwrap();
            let ys: Vec<f64> = perm.iter().map(|&i| y.scalars().unwrap()[i]).collect();
            let ch = crate::xi::chatterjee_xi(&xs, &ys, TiePolicy::Error)
                .unwrap()
                .value;
            assert_eq!(fast.ch_yx.unwrap(), ch);

            let dcor = crate::dcor::distance_correlation(&x, &y.permuted(&perm).unwrap())
                .unwrap()
                .value;
            assert!((fast.dcor - dcor).abs() < 1e-12);
        }
    }

    #[test]
    fn permuted_centered_group_action() {
        let s = gaussian(5, 10, 2);
        let b = centered_distances(&s).unwrap();
        let id: Vec<usize> = (0..10).collect();
        assert_eq!(permuted_centered(&b, &id).unwrap(), b);
        let perm = synchronized_permutation(1, 0, 10);
        let mut inv = vec![0; 10];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let there = permuted_centered(&b, &perm).unwrap();
        assert_eq!(permuted_centered(&there, &inv).unwrap(), b);
        assert!(matches!(
            permuted_centered(&b, &[0, 1, 2]),
            Err(Error::BadPermutation(10))
        ));
    }

    #[test]
    fn identical_data_has_zero_p() {
        // Odd N: with even N the two median points tie on the diagonal.
        let x = gaussian(6, 21, 1);
        let r = synchronized_test(&x, &x, &TestConfig::new(50, 3, TiePolicy::Error)).unwrap();
        assert_eq!(r.p_values.p_dch_yx, 0.0);
        assert_eq!(r.p_values.p_dch_xy, 0.0);
        assert_eq!(r.p_values.p_ch_yx, Some(0.0));
    }

    #[test]
    fn invalid_inputs() {
        let x = gaussian(6, 20, 1);
        assert!(matches!(
            synchronized_test(&x, &x, &TestConfig::new(0, 3, TiePolicy::Error)),
            Err(Error::InvalidK)
        ));
        let small = gaussian(1, 2, 1);
        assert!(
            synchronized_test(&small, &small, &TestConfig::new(5, 3, TiePolicy::Error)).is_err()
        );
    }

    #[test]
    fn p_values_are_multiples_of_one_over_k() {
        let x = gaussian(7, 31, 1);
        let y = gaussian(8, 31, 1);
        let k = 37;
        let r = synchronized_test(&x, &y, &TestConfig::new(k, 5, TiePolicy::Error)).unwrap();
        for h in Hypothesis::ALL {
            let p = r.p_values.get(h).unwrap();
            assert!((0.0..=1.0).contains(&p));
            let scaled = p * k as f64;
            assert!((scaled - scaled.round()).abs() < 1e-9, "{h:?} {p}");
        }
    }

    #[test]
    fn null_deltas_are_negations() {
        let x = gaussian(9, 20, 2);
        let y = gaussian(10, 20, 1);
        let t = SynchronizedTest::new(&x, &y, TiePolicy::Error).unwrap();
        for s in t.null_distribution(50, 1) {
            assert_eq!(s.delta_yx, -s.delta_xy);
        }
    }

    #[test]
    fn labels_roundtrip() {
        for h in Hypothesis::ALL {
            assert_eq!(Hypothesis::from_label(h.label()), Some(h));
        }
    }

    #[test]
    fn report_json_keys() {
        let x = gaussian(11, 12, 1);
        let y = gaussian(12, 12, 1);
        let r = synchronized_test(&x, &y, &TestConfig::new(10, 5, TiePolicy::Error)).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "dch_yx",
            "dch_xy",
            "delta_xy",
            "dcor",
            "ch_yx",
            "ch_xy",
            "p_dch_yx",
            "p_dch_xy",
            "p_delta_xy",
            "p_delta_yx",
            "p_dcor",
            "p_ch_yx",
            "p_ch_xy",
            "K",
            "seed",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        let back: AssociationReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
