//! Exact finite-`n` analysis of the two-district model.
//!
//! With two districts, `D = 2` happens precisely when the total number of
//! positive votes `P` reaches `2 * floor(n/2 + 1)`: one direction is
//! counting, the other is a discrete intermediate-value argument on the
//! window differences `s_i = P_i - P_{i+n}`, which move in steps of
//! {-2, 0, +2} and satisfy `s_n = -s_0`. That yields a closed binomial
//! formula for `Pr(D_n = 2)`, evaluated here in exact rational arithmetic.

use num::{BigInt, BigRational, BigUint, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::voter_model::{optimal_gerrymander, PrefixSums, VoteSequence};

/// Binomial coefficient `C(n, k)` by the multiplicative recurrence.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut c = BigInt::one();
    for j in 0..k {
        c = c * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    c
}

/// Minimum total positive votes for `D = 2`, namely `2 * floor(n/2 + 1)`.
pub fn majority_threshold_two_districts(n: usize) -> usize {
    2 * (n / 2 + 1)
}

/// Exact `Pr(D_n = 2)` for the two-district model:
/// `1/2 - C(2n,n)/2^(2n+1)` for odd `n`, with an extra
/// `-C(2n,n+1)/2^(2n)` term for even `n`.
pub fn prob_d2_exact(n: u64) -> BigRational {
    assert!(n >= 1, "n must be positive");
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let pow = |e: u64| BigInt::one() << usize::try_from(e).expect("exponent fits");
    let mut p = half - BigRational::new(binomial(2 * n, n), pow(2 * n + 1));
    if n % 2 == 0 {
        p -= BigRational::new(binomial(2 * n, n + 1), pow(2 * n));
    }
    p
}

/// `C(2n, n) / 4^n`, computed by the stable multiplicative recurrence
/// `t_{m+1} = t_m (2m+1)/(2m+2)`. Floating-point companion to the exact
/// binomials, used for large-`n` asymptotics.
pub fn central_binomial_ratio(n: u64) -> f64 {
    assert!(n >= 1);
    let mut t = 0.5; // C(2,1)/4
    for m in 1..n {
        let m = m as f64;
        t *= (2.0 * m + 1.0) / (2.0 * m + 2.0);
    }
    t
}

/// Floating-point route for `Pr(D_n = 2)`, independent of the big-integer
/// path: relies only on [`central_binomial_ratio`].
pub fn prob_d2_f64(n: u64) -> f64 {
    let t = central_binomial_ratio(n);
    let mut p = 0.5 - t / 2.0;
    if n % 2 == 0 {
        // C(2n, n+1)/4^n = t * n/(n+1)
        p -= t * n as f64 / (n as f64 + 1.0);
    }
    p
}

/// Converts an arbitrary-precision rational to `f64` by aligning both parts
/// to 64-bit mantissas; safe for rationals whose parts overflow `f64`.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.numer().is_zero() {
        return 0.0;
    }
    let sign = if r.numer().sign() == num::bigint::Sign::Minus { -1.0 } else { 1.0 };
    let numer = r.numer().magnitude();
    let denom = r.denom().magnitude();
    let scale = |m: &BigUint| -> (f64, i64) {
        let bits = m.bits();
        if bits <= 64 {
            (m.to_f64().expect("fits"), 0)
        } else {
            let shift = bits - 64;
            ((m >> shift).to_f64().expect("shifted fits"), shift as i64)
        }
    };
    let (nm, ne) = scale(numer);
    let (dm, de) = scale(denom);
    let exp = ne - de;
    sign * (nm / dm) * 2f64.powi(exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

/// Window and walk statistics of a two-district vote sequence.
///
/// `window_positive[i]` counts positive votes in the half-circle `[i, i+n)`;
/// `window_diff[i] = P_i - P_{i+n}` for `i` in `0..=n`; `walk_a`/`walk_b`
/// are the partial-sum walks of the first and second half of the votes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowStatistics {
    pub n: usize,
    /// Total positive votes among all `2n`.
    pub total_positive: u32,
    /// `P_i` for every start `i` in `0..2n`.
    pub window_positive: Vec<u32>,
    /// `s_i = P_i - P_{i+n}` for `i` in `0..=n`.
    pub window_diff: Vec<i32>,
    /// `A_i = x_0 + ... + x_{i-1}` for `i` in `0..=n`.
    pub walk_a: Vec<i32>,
    /// `B_i = x_n + ... + x_{n+i-1}` for `i` in `0..=n`.
    pub walk_b: Vec<i32>,
}

impl WindowStatistics {
    /// Direct scan: is the vote sum of every length-`n` window nonpositive?
    /// This is exactly the event `D_n = 0`.
    pub fn all_windows_nonpositive_direct(&self, v: &VoteSequence) -> bool {
        let sums = PrefixSums::new(v);
        (0..2 * self.n).all(|i| sums.sum_cyclic(i, self.n) <= 0)
    }

    /// Walk-side reformulation of the same event:
    /// `A_n <= A_i - B_i <= -B_n` for every `i` in `0..=n`.
    pub fn all_windows_nonpositive_via_walks(&self) -> bool {
        let a_n = self.walk_a[self.n];
        let b_n = self.walk_b[self.n];
        self.walk_a
            .iter()
            .zip(&self.walk_b)
            .all(|(&a, &b)| a_n <= a - b && a - b <= -b_n)
    }
}

/// Populates [`WindowStatistics`] for a two-district sequence.
pub fn walk_arrays(v: &VoteSequence) -> Result<WindowStatistics> {
    if v.k() != 2 {
        return Err(Error::RequiresTwoDistricts { k: v.k() });
    }
    let n = v.n();
    let votes = v.votes();
    let len = 2 * n;

    let positive_prefix: Vec<u32> = std::iter::once(0)
        .chain(votes.iter().scan(0u32, |acc, &x| {
            *acc += u32::from(x > 0);
            Some(*acc)
        }))
        .collect();
    let total_positive = positive_prefix[len];
    let window_positive: Vec<u32> = (0..len)
        .map(|i| {
            let end = i + n;
            if end <= len {
                positive_prefix[end] - positive_prefix[i]
            } else {
                (total_positive - positive_prefix[i]) + positive_prefix[end - len]
            }
        })
        .collect();
    let window_diff: Vec<i32> = (0..=n)
        .map(|i| window_positive[i % len] as i32 - window_positive[(i + n) % len] as i32)
        .collect();

    let walk = |offset: usize| -> Vec<i32> {
        std::iter::once(0)
            .chain(votes[offset..offset + n].iter().scan(0i32, |acc, &x| {
                *acc += i32::from(x);
                Some(*acc)
            }))
            .collect()
    };
    Ok(WindowStatistics {
        n,
        total_positive,
        window_positive,
        window_diff,
        walk_a: walk(0),
        walk_b: walk(n),
    })
}

/// Result of checking the intermediate-value characterization of `D = 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IvtWitness {
    /// `P >= 2*floor(n/2 + 1)`: the counting side of the biconditional.
    pub predicted_d2: bool,
    /// `optimal_gerrymander(v).d == 2`: the search side.
    pub actual_d2: bool,
    /// Smallest balanced window start `j` with `|s_j| <= 1`, present when
    /// the threshold is met and located by the discrete IVT walk.
    pub witness: Option<usize>,
}

impl IvtWitness {
    /// The biconditional itself.
    pub fn holds(&self) -> bool {
        self.predicted_d2 == self.actual_d2
    }
}

/// Checks `[P >= 2*floor(n/2+1)] <=> [D = 2]` on a concrete sequence and,
/// when the threshold is met, locates the balanced window index guaranteed
/// by the discrete intermediate value theorem.
pub fn verify_ivt_characterization(v: &VoteSequence) -> Result<IvtWitness> {
    let stats = walk_arrays(v)?;
    let n = v.n();
    let threshold = majority_threshold_two_districts(n) as u32;
    let predicted_d2 = stats.total_positive >= threshold;
    let actual_d2 = optimal_gerrymander(v).d == 2;

    let witness = if predicted_d2 {
        let s = &stats.window_diff;
        if s[0].abs() <= 1 {
            Some(0)
        } else if s[0] >= 2 {
            (0..=n).find(|&j| s[j] < 2)
        } else {
            (0..=n).find(|&j| s[j] > -2)
        }
    } else {
        None
    };
    Ok(IvtWitness { predicted_d2, actual_d2, witness })
}
