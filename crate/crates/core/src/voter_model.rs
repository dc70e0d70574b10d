//! The stochastic voter circle model and the optimal contiguous gerrymander.
//!
//! `k * n` voters sit at distinct positions on a circle and cast independent
//! uniform ±1 votes. A permissible districting plan splits the circle into
//! `k` contiguous arcs of exactly `n` voters each; contiguity plus the exact
//! size constraint force the cut points to be equally spaced, so a plan is
//! fully described by a rotation offset `r` in `[0, n)`. The optimal
//! partisan gerrymander picks the offset maximizing the number of districts
//! with a strictly positive vote sum.

use num::{BigInt, BigRational, One};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest `k * n` accepted by [`generate_votes`].
pub const MAX_VOTERS: u64 = 1 << 26;

/// Largest `k * n` accepted by [`enumerate_d_distribution`]; the scan visits
/// `2^(k*n)` vote patterns, so this keeps the oracle in the seconds range.
pub const MAX_ENUMERATION_VOTERS: usize = 24;

/// A full election outcome: `k * n` votes of ±1 around the circle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteSequence {
    votes: Vec<i8>,
    k: usize,
    n: usize,
}

impl VoteSequence {
    /// Validates that `votes` has length `k * n` and contains only ±1.
    pub fn new(votes: Vec<i8>, k: usize, n: usize) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(Error::InvalidParameter {
                name: "k,n",
                reason: format!("district count and size must be positive, got k={k}, n={n}"),
            });
        }
        let expected = k
            .checked_mul(n)
            .ok_or(Error::TooManyVoters { requested: k as u128 * n as u128, max: MAX_VOTERS })?;
        if votes.len() != expected {
            return Err(Error::InvalidParameter {
                name: "votes",
                reason: format!("length {} does not equal k*n = {}", votes.len(), expected),
            });
        }
        if let Some(bad) = votes.iter().find(|&&v| v != 1 && v != -1) {
            return Err(Error::InvalidParameter {
                name: "votes",
                reason: format!("entries must be +1 or -1, found {bad}"),
            });
        }
        Ok(Self { votes, k, n })
    }

    /// Builds a sequence from the low `k * n` bits of a pattern word
    /// (bit set → +1). Used by the exhaustive enumeration oracle.
    pub fn from_bits(pattern: u64, k: usize, n: usize) -> Result<Self> {
        let mut votes = vec![0i8; k * n];
        fill_votes_from_bits(pattern, &mut votes);
        Self::new(votes, k, n)
    }

    pub fn votes(&self) -> &[i8] {
        &self.votes
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.votes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.votes.is_empty()
    }

    /// The same election with every index shifted by `t` around the circle.
    pub fn rotated(&self, t: usize) -> Self {
        let len = self.votes.len();
        let votes = (0..len).map(|i| self.votes[(i + t) % len]).collect();
        Self { votes, k: self.k, n: self.n }
    }

    /// The same election traversed in the opposite circular order.
    pub fn reflected(&self) -> Self {
        let mut votes = self.votes.clone();
        votes.reverse();
        Self { votes, k: self.k, n: self.n }
    }

    /// Prefix-sum accelerator for district sums over this sequence.
    pub fn prefix_sums(&self) -> PrefixSums {
        PrefixSums::new(self)
    }
}

fn fill_votes_from_bits(pattern: u64, votes: &mut [i8]) {
    for (i, v) in votes.iter_mut().enumerate() {
        *v = if (pattern >> i) & 1 == 1 { 1 } else { -1 };
    }
}

/// Draws a `k * n` vote sequence with one uniform bit per voter.
///
/// The generator is ChaCha8 seeded with the 64-bit seed; votes consume the
/// output stream one `u64` word at a time, least-significant bit first, so
/// the mapping from seed to sequence is fixed by this crate rather than by
/// the `rand` crate's bool sampling.
pub fn generate_votes(k: usize, n: usize, seed: u64) -> Result<VoteSequence> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidParameter {
            name: "k,n",
            reason: format!("district count and size must be positive, got k={k}, n={n}"),
        });
    }
    let requested = k as u128 * n as u128;
    if requested > MAX_VOTERS as u128 {
        return Err(Error::TooManyVoters { requested, max: MAX_VOTERS });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut votes = vec![0i8; (requested) as usize];
    fill_votes_with_rng(&mut rng, &mut votes);
    Ok(VoteSequence { votes, k, n })
}

/// Fills `votes` with ±1 entries from `rng`, one bit per entry.
pub(crate) fn fill_votes_with_rng(rng: &mut impl RngCore, votes: &mut [i8]) {
    let mut word = 0u64;
    let mut bits_left = 0u32;
    for v in votes.iter_mut() {
        if bits_left == 0 {
            word = rng.next_u64();
            bits_left = 64;
        }
        *v = if word & 1 == 1 { 1 } else { -1 };
        word >>= 1;
        bits_left -= 1;
    }
}

/// Circular prefix sums supporting O(1) district-sum queries.
#[derive(Debug, Clone)]
pub struct PrefixSums {
    /// `prefix[i]` is the sum of the first `i` votes; length `k*n + 1`.
    prefix: Vec<i32>,
    len: usize,
}

impl PrefixSums {
    pub fn new(v: &VoteSequence) -> Self {
        Self::from_votes(v.votes())
    }

    pub(crate) fn from_votes(votes: &[i8]) -> Self {
        let mut prefix = Vec::with_capacity(votes.len() + 1);
        let mut acc = 0i32;
        prefix.push(0);
        for &v in votes {
            acc += i32::from(v);
            prefix.push(acc);
        }
        Self { prefix, len: votes.len() }
    }

    /// Sum of the `length` votes starting at `start`, wrapping around the
    /// circle when necessary.
    pub fn district_sum(&self, start: usize, length: usize) -> Result<i32> {
        if start >= self.len {
            return Err(Error::InvalidParameter {
                name: "start",
                reason: format!("start {start} out of range for {} voters", self.len),
            });
        }
        if length == 0 || length > self.len {
            return Err(Error::InvalidParameter {
                name: "length",
                reason: format!("length {length} out of range for {} voters", self.len),
            });
        }
        Ok(self.sum_cyclic(start, length))
    }

    /// Total vote sum around the whole circle.
    pub fn total(&self) -> i32 {
        self.prefix[self.len]
    }

    #[inline]
    pub(crate) fn sum_cyclic(&self, start: usize, length: usize) -> i32 {
        let end = start + length;
        if end <= self.len {
            self.prefix[end] - self.prefix[start]
        } else {
            (self.prefix[self.len] - self.prefix[start]) + self.prefix[end - self.len]
        }
    }
}

/// A permissible partition: `k` contiguous districts of `n` voters, rotated
/// by `offset` positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircularPartition {
    offset: usize,
    k: usize,
    n: usize,
}

impl CircularPartition {
    pub fn new(offset: usize, k: usize, n: usize) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(Error::InvalidParameter {
                name: "k,n",
                reason: format!("district count and size must be positive, got k={k}, n={n}"),
            });
        }
        if offset >= n {
            return Err(Error::InvalidParameter {
                name: "offset",
                reason: format!("offset {offset} must lie in [0, {n})"),
            });
        }
        Ok(Self { offset, k, n })
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    /// First voter index of district `j`.
    pub fn district_start(&self, j: usize) -> usize {
        (self.offset + j * self.n) % (self.k * self.n)
    }

    /// Voter indices of district `j`, in circular order.
    pub fn district_indices(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        let kn = self.k * self.n;
        let start = self.district_start(j);
        (0..self.n).map(move |i| (start + i) % kn)
    }
}

/// Outcome of the optimal gerrymander search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GerrymanderResult {
    /// Maximum number of majority-positive districts over all offsets.
    pub d: u32,
    /// Smallest offset attaining the maximum.
    pub best_offset: usize,
    /// Majority-positive district count for every offset `r` in `[0, n)`.
    pub per_offset_counts: Vec<u32>,
}

/// Scans all `n` rotation offsets and returns the maximizing count, the
/// smallest maximizing offset and the full per-offset profile.
///
/// A district is majority-positive iff its vote sum is strictly positive;
/// a tied district (sum zero) is not carried.
pub fn optimal_gerrymander(v: &VoteSequence) -> GerrymanderResult {
    let sums = PrefixSums::new(v);
    let (k, n) = (v.k(), v.n());
    let mut per_offset_counts = Vec::with_capacity(n);
    for r in 0..n {
        let mut count = 0u32;
        for j in 0..k {
            if sums.sum_cyclic(r + j * n, n) > 0 {
                count += 1;
            }
        }
        per_offset_counts.push(count);
    }
    let d = *per_offset_counts.iter().max().expect("n >= 1");
    let best_offset = per_offset_counts.iter().position(|&c| c == d).expect("max exists");
    GerrymanderResult { d, best_offset, per_offset_counts }
}

/// Allocation-free variant of [`optimal_gerrymander`] returning only the
/// count; `prefix` is reused scratch space. Hot path for simulation.
pub(crate) fn optimal_district_count(votes: &[i8], k: usize, n: usize, prefix: &mut Vec<i32>) -> u32 {
    prefix.clear();
    prefix.reserve(votes.len() + 1);
    prefix.push(0);
    let mut acc = 0i32;
    for &v in votes {
        acc += i32::from(v);
        prefix.push(acc);
    }
    let len = votes.len();
    let total = prefix[len];
    let mut best = 0u32;
    for r in 0..n {
        let mut count = 0u32;
        for j in 0..k {
            let start = r + j * n;
            let end = start + n;
            let sum = if end <= len {
                prefix[end] - prefix[start]
            } else {
                (total - prefix[start]) + prefix[end - len]
            };
            if sum > 0 {
                count += 1;
            }
        }
        if count > best {
            best = count;
            if best as usize == k {
                break;
            }
        }
    }
    best
}

/// Exact distribution of the optimal gerrymander count `D` over all
/// `2^(k*n)` equally likely vote patterns.
#[derive(Debug, Clone, PartialEq)]
pub struct DDistribution {
    pub k: usize,
    pub n: usize,
    /// `probabilities[d]` is the exact `Pr(D = d)` for `d` in `0..=k`.
    pub probabilities: Vec<BigRational>,
    /// Raw pattern counts behind the probabilities.
    pub counts: Vec<u64>,
}

impl DDistribution {
    /// Sum of all probabilities; exactly one for a correct enumeration.
    pub fn total(&self) -> BigRational {
        self.probabilities.iter().sum()
    }
}

/// Brute-force oracle: enumerates every vote pattern and tallies the
/// optimal gerrymander count. Guarded to `k * n <=` [`MAX_ENUMERATION_VOTERS`].
pub fn enumerate_d_distribution(k: usize, n: usize) -> Result<DDistribution> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidParameter {
            name: "k,n",
            reason: format!("district count and size must be positive, got k={k}, n={n}"),
        });
    }
    let kn = k * n;
    if kn > MAX_ENUMERATION_VOTERS {
        return Err(Error::EnumerationTooLarge { kn, max: MAX_ENUMERATION_VOTERS });
    }
    let mut counts = vec![0u64; k + 1];
    let mut votes = vec![0i8; kn];
    let mut prefix: Vec<i32> = Vec::with_capacity(kn + 1);
    for pattern in 0u64..(1u64 << kn) {
        fill_votes_from_bits(pattern, &mut votes);
        let d = optimal_district_count(&votes, k, n, &mut prefix);
        counts[d as usize] += 1;
    }
    let denom = BigInt::one() << kn;
    let probabilities = counts
        .iter()
        .map(|&c| BigRational::new(BigInt::from(c), denom.clone()))
        .collect();
    Ok(DDistribution { k, n, probabilities, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::{ToPrimitive, Zero};
    use proptest::prelude::*;

    fn seq(votes: &[i8], k: usize, n: usize) -> VoteSequence {
        VoteSequence::new(votes.to_vec(), k, n).unwrap()
    }

    /// Recomputes every district sum with a bare loop; oracle for the
    /// prefix-sum implementation.
    fn naive_gerrymander(v: &VoteSequence) -> u32 {
        let (k, n) = (v.k(), v.n());
        let kn = k * n;
        let mut best = 0;
        for r in 0..n {
            let mut count = 0;
            for j in 0..k {
                let mut sum = 0i32;
                for i in 0..n {
                    sum += i32::from(v.votes()[(r + j * n + i) % kn]);
                }
                if sum > 0 {
                    count += 1;
                }
            }
            best = best.max(count);
        }
        best
    }

    #[test]
    fn generate_votes_is_reproducible() {
        let a = generate_votes(2, 3, 42).unwrap();
        let b = generate_votes(2, 3, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 6);
        assert!(a.votes().iter().all(|&v| v == 1 || v == -1));
    }

    #[test]
    fn generate_votes_differs_across_seeds() {
        let a = generate_votes(4, 8, 1).unwrap();
        let b = generate_votes(4, 8, 2).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn generate_votes_rejects_oversized_circles() {
        let err = generate_votes(1 << 20, 1 << 20, 0).unwrap_err();
        assert!(matches!(err, Error::TooManyVoters { .. }));
        assert!(generate_votes(0, 3, 0).is_err());
    }

    #[test]
    fn empirical_vote_mean_is_centered() {
        // 10^6 total entries; the 4-sigma CLT band for the mean is 4e-3.
        let kn = 16;
        let sequences = 1_000_000 / kn;
        let mut sum = 0i64;
        for s in 0..sequences {
            let v = generate_votes(2, 8, 0x5EED_0000 + s as u64).unwrap();
            sum += v.votes().iter().map(|&x| i64::from(x)).sum::<i64>();
        }
        let mean = sum as f64 / (sequences * kn) as f64;
        assert!(mean.abs() < 4e-3, "empirical mean {mean} outside CLT band");
    }

    #[test]
    fn district_sum_examples() {
        let v = seq(&[1, -1, 1, -1], 2, 2);
        let sums = v.prefix_sums();
        assert_eq!(sums.district_sum(0, 2).unwrap(), 0);

        let v = seq(&[1, 1, -1, -1], 2, 2);
        let sums = v.prefix_sums();
        assert_eq!(sums.district_sum(3, 2).unwrap(), 0); // wraps: -1 + 1
        assert_eq!(sums.district_sum(0, 2).unwrap(), 2);
        assert_eq!(sums.district_sum(2, 2).unwrap(), -2);
    }

    #[test]
    fn district_sum_rejects_out_of_range() {
        let v = seq(&[1, 1, -1, -1], 2, 2);
        let sums = v.prefix_sums();
        assert!(sums.district_sum(4, 1).is_err());
        assert!(sums.district_sum(0, 0).is_err());
        assert!(sums.district_sum(0, 5).is_err());
    }

    #[test]
    fn gerrymander_hand_examples() {
        // r=0 gives (+2, -2) -> 1 carried; r=1 gives (0, 0) -> 0 carried.
        let r = optimal_gerrymander(&seq(&[1, 1, -1, -1], 2, 2));
        assert_eq!(r.d, 1);
        assert_eq!(r.best_offset, 0);
        assert_eq!(r.per_offset_counts, vec![1, 0]);

        let r = optimal_gerrymander(&seq(&[1, 1, 1, 1, 1, 1], 3, 2));
        assert_eq!(r.d, 3);

        // Alternating votes: every district sums to zero at every offset.
        let r = optimal_gerrymander(&seq(&[1, -1, 1, -1], 2, 2));
        assert_eq!(r.d, 0);
        assert_eq!(r.per_offset_counts, vec![0, 0]);
    }

    #[test]
    fn enumerate_two_districts_of_one() {
        let dist = enumerate_d_distribution(2, 1).unwrap();
        let q = |num: i64, den: i64| BigRational::new(BigInt::from(num), BigInt::from(den));
        assert_eq!(dist.probabilities, vec![q(1, 4), q(1, 2), q(1, 4)]);
        assert!(dist.total().is_one());
    }

    #[test]
    fn enumerate_two_districts_of_two() {
        let dist = enumerate_d_distribution(2, 2).unwrap();
        let q = |num: i64, den: i64| BigRational::new(BigInt::from(num), BigInt::from(den));
        // D=2 requires all four votes positive.
        assert_eq!(dist.probabilities[2], q(1, 16));
        assert!(dist.total().is_one());
    }

    #[test]
    fn enumerate_distribution_sums_to_one() {
        for (k, n) in [(2, 3), (3, 2), (4, 2), (2, 5)] {
            let dist = enumerate_d_distribution(k, n).unwrap();
            assert!(dist.total().is_one(), "k={k}, n={n}");
        }
    }

    #[test]
    fn enumerate_rejects_large_circles() {
        let err = enumerate_d_distribution(5, 5).unwrap_err();
        assert!(matches!(err, Error::EnumerationTooLarge { .. }));
    }

    #[test]
    fn majority_threshold_matches_sum_sign() {
        // A district is carried iff its positive-vote count reaches
        // floor(n/2 + 1), equivalently iff its vote sum is positive.
        for n in 1..=20usize {
            let threshold = n / 2 + 1;
            for pos in 0..=n {
                let sum = 2 * pos as i32 - n as i32;
                assert_eq!(pos >= threshold, sum > 0, "n={n}, pos={pos}");
            }
        }
    }

    #[test]
    fn equal_spacing_is_forced() {
        // For every way of cutting the circle into k contiguous arcs, arcs of
        // exactly n voters each exist only at equally spaced cut points, so
        // the offset parameterization is exhaustive.
        for (k, n) in [(2usize, 2usize), (2, 4), (2, 8), (3, 4), (4, 4), (4, 2), (8, 2), (2, 6)] {
            let kn = k * n;
            assert!(kn <= 16);
            for mask in 0u32..(1 << kn) {
                if mask.count_ones() as usize != k {
                    continue;
                }
                let cuts: Vec<usize> = (0..kn).filter(|i| mask >> i & 1 == 1).collect();
                let all_arcs_n = cuts
                    .iter()
                    .zip(cuts.iter().cycle().skip(1))
                    .all(|(&a, &b)| (b + kn - a) % kn == n || (k == 1 && a == b));
                let equally_spaced = cuts.iter().all(|&c| c % n == cuts[0] % n);
                assert_eq!(all_arcs_n, equally_spaced, "k={k} n={n} cuts={cuts:?}");
            }
        }
    }

    #[test]
    fn from_bits_round_trip() {
        let v = VoteSequence::from_bits(0b0110, 2, 2).unwrap();
        assert_eq!(v.votes(), &[-1, 1, 1, -1]);
    }

    #[test]
    fn enumeration_agrees_with_exact_mean() {
        // Sanity on the k=2, n=1 distribution: E[D] = 1.
        let dist = enumerate_d_distribution(2, 1).unwrap();
        let mean: f64 = dist
            .probabilities
            .iter()
            .enumerate()
            .map(|(d, p)| d as f64 * p.to_f64().unwrap())
            .sum();
        assert!((mean - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn district_sum_matches_naive_loop(bits in any::<u64>(), k in 1usize..5, n in 1usize..6) {
            let v = VoteSequence::from_bits(bits & ((1u64 << (k * n)) - 1), k, n).unwrap();
            let sums = v.prefix_sums();
            let kn = k * n;
            for start in 0..kn {
                for length in 1..=kn {
                    let naive: i32 = (0..length)
                        .map(|i| i32::from(v.votes()[(start + i) % kn]))
                        .sum();
                    prop_assert_eq!(sums.district_sum(start, length).unwrap(), naive);
                }
            }
        }

        #[test]
        fn gerrymander_matches_naive(bits in any::<u64>(), k in 1usize..5, n in 1usize..8) {
            let v = VoteSequence::from_bits(bits & ((1u64 << (k * n)) - 1), k, n).unwrap();
            prop_assert_eq!(optimal_gerrymander(&v).d, naive_gerrymander(&v));
        }

        #[test]
        fn rotation_and_reflection_preserve_d(bits in any::<u64>(), k in 1usize..5, n in 1usize..8, t in 0usize..32) {
            let v = VoteSequence::from_bits(bits & ((1u64 << (k * n)) - 1), k, n).unwrap();
            let d = optimal_gerrymander(&v).d;
            prop_assert_eq!(optimal_gerrymander(&v.rotated(t % (k * n))).d, d);
            prop_assert_eq!(optimal_gerrymander(&v.reflected()).d, d);
        }
    }

    #[test]
    fn rotation_invariance_zero_total_edge() {
        let v = seq(&[1, -1, -1, 1, 1, -1], 3, 2);
        let d = optimal_gerrymander(&v).d;
        for t in 0..6 {
            assert_eq!(optimal_gerrymander(&v.rotated(t)).d, d);
        }
    }

    #[test]
    fn distribution_counts_are_not_all_zero() {
        let dist = enumerate_d_distribution(3, 2).unwrap();
        assert_eq!(dist.counts.iter().sum::<u64>(), 1 << 6);
        assert!(!dist.probabilities[0].is_zero());
    }
}
