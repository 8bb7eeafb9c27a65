//! Arithmetic of the construction schedule: how the tuple of per-colour
//! round parameters evolves under the doubling step, and how fast its
//! minimum grows.
//!
//! One doubling step maps a signature `(r_1, ..., r_k)` to
//! `(r_1 + 2, r_2, ..., r_k, 2*r_1 - 1)`. Iterating from `(5, 5)` and
//! resorting after each step gives the sequence `r_j` analysed here. The
//! sequence length explodes while the number of distinct values stays
//! tiny, so the iterated form is kept as a sorted run-length multiset.

use std::fmt;

use thiserror::Error;

/// Largest `t` accepted by [`check_min_growth`]; the walk to index p(7)
/// is still instant, the next one is a hundred times longer.
pub const MAX_GROWTH_T: u32 = 7;
/// Largest decimal precision served by [`growth_constant`]; beyond this
/// the f64 error bars would no longer be honest.
pub const MAX_PRECISION: u32 = 10;
/// Cap on multiset walk length, to keep mistyped queries from hanging.
pub const MAX_WALK_STEPS: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("signature must be nonempty")]
    EmptySignature,
    #[error("signature entries must be odd and at least 3 (got {value})")]
    BadEntry { value: u64 },
    #[error("sequence index j starts at 2 (got {j})")]
    IndexTooSmall { j: u64 },
    #[error("sequence walk of {steps} steps exceeds the limit of {max}")]
    WalkTooLong { steps: u128, max: u64 },
    #[error("t must be at least 2 (got {t})")]
    TTooSmall { t: u32 },
    #[error("t = {t} exceeds the supported maximum {max}")]
    TTooLarge { t: u32, max: u32 },
    #[error("arithmetic overflow computing {what}")]
    Overflow { what: &'static str },
    #[error("precision must lie in 1..={max} (got {p})")]
    PrecisionOutOfRange { p: u32, max: u32 },
    #[error("colour count k must be at least 2 (got {k})")]
    KTooSmall { k: u64 },
}

/// A sorted multiset of odd round parameters, run-length encoded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    /// `(value, count)` pairs with strictly increasing values.
    runs: Vec<(u64, u64)>,
}

impl Signature {
    pub fn from_entries(entries: &[u64]) -> Result<Self, ScheduleError> {
        if entries.is_empty() {
            return Err(ScheduleError::EmptySignature);
        }
        let mut sorted = entries.to_vec();
        sorted.sort_unstable();
        let mut runs: Vec<(u64, u64)> = Vec::new();
        for v in sorted {
            if v < 3 || v % 2 == 0 {
                return Err(ScheduleError::BadEntry { value: v });
            }
            match runs.last_mut() {
                Some((value, count)) if *value == v => *count += 1,
                _ => runs.push((v, 1)),
            }
        }
        Ok(Signature { runs })
    }

    pub fn min(&self) -> u64 {
        self.runs[0].0
    }

    pub fn max(&self) -> u64 {
        self.runs[self.runs.len() - 1].0
    }

    /// Total entry count.
    pub fn len(&self) -> u64 {
        self.runs.iter().map(|&(_, c)| c).sum()
    }

    pub fn is_empty(&self) -> bool {
        false // a signature always has at least one entry
    }

    pub fn runs(&self) -> &[(u64, u64)] {
        &self.runs
    }

    /// Expands to an explicit nondecreasing vector.
    pub fn to_vec(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.len() as usize);
        for &(v, c) in &self.runs {
            out.extend(std::iter::repeat_n(v, c as usize));
        }
        out
    }

    fn remove_min(&mut self) -> u64 {
        let v = self.runs[0].0;
        self.runs[0].1 -= 1;
        if self.runs[0].1 == 0 {
            self.runs.remove(0);
        }
        v
    }

    fn insert(&mut self, v: u64) {
        match self.runs.binary_search_by_key(&v, |&(value, _)| value) {
            Ok(i) => self.runs[i].1 += 1,
            Err(i) => self.runs.insert(i, (v, 1)),
        }
    }

    /// One doubling step on the sorted view: the minimum entry m is
    /// replaced by m + 2 and 2m - 1 is appended.
    pub fn step(&mut self) {
        let m = self.remove_min();
        self.insert(m + 2);
        self.insert(2 * m - 1);
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(v, c) in &self.runs {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if c == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}x{c}")?;
            }
        }
        Ok(())
    }
}

/// The signature transformation of one doubling step, on the ordered
/// tuple: `(r_1, ..., r_k) -> (r_1 + 2, r_2, ..., r_k, 2*r_1 - 1)`.
pub fn signature_step(sig: &[u64]) -> Result<Vec<u64>, ScheduleError> {
    let (&first, rest) = sig.split_first().ok_or(ScheduleError::EmptySignature)?;
    for &v in sig {
        if v < 3 || v % 2 == 0 {
            return Err(ScheduleError::BadEntry { value: v });
        }
    }
    let mut out = Vec::with_capacity(sig.len() + 1);
    out.push(first + 2);
    out.extend_from_slice(rest);
    out.push(2 * first - 1);
    Ok(out)
}

/// The sorted signature with `j` entries: start from `(5, 5)` at j = 2 and
/// apply one doubling step per extra entry, resorting as a multiset.
pub fn signature_at(j: u64) -> Result<Signature, ScheduleError> {
    if j < 2 {
        return Err(ScheduleError::IndexTooSmall { j });
    }
    let steps = j - 2;
    if steps > MAX_WALK_STEPS {
        return Err(ScheduleError::WalkTooLong {
            steps: steps as u128,
            max: MAX_WALK_STEPS,
        });
    }
    let mut sig = Signature {
        runs: vec![(5, 2)],
    };
    for _ in 0..steps {
        sig.step();
    }
    Ok(sig)
}

/// Least colour count j whose sorted signature has minimum above `girth`.
pub fn colours_to_exceed(girth: u64) -> Result<u64, ScheduleError> {
    let mut sig = Signature {
        runs: vec![(5, 2)],
    };
    let mut j = 2u64;
    while sig.min() <= girth {
        if j - 2 >= MAX_WALK_STEPS {
            return Err(ScheduleError::WalkTooLong {
                steps: (j - 2) as u128,
                max: MAX_WALK_STEPS,
            });
        }
        sig.step();
        j += 1;
    }
    Ok(j)
}

/// The index `p(t) = prod_{i=0}^{t-2} (2^i + 1)` at which the sequence
/// minimum provably reaches `2^t + 1`.
pub fn growth_index(t: u32) -> Result<u128, ScheduleError> {
    if t < 2 {
        return Err(ScheduleError::TTooSmall { t });
    }
    if t > 120 {
        return Err(ScheduleError::TTooLarge { t, max: 120 });
    }
    let mut p: u128 = 1;
    for i in 0..=(t - 2) {
        let factor = (1u128 << i) + 1;
        p = p
            .checked_mul(factor)
            .ok_or(ScheduleError::Overflow { what: "growth index" })?;
    }
    Ok(p)
}

/// Result of checking `min(r_{p(t)}) >= 2^t + 1` by explicit iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinGrowthCheck {
    pub t: u32,
    pub index: u64,
    pub min: u64,
    pub bound: u64,
    pub pass: bool,
}

/// Walks the sequence to index p(t) and compares its minimum with
/// `2^t + 1`. Supported for `2 <= t <=` [`MAX_GROWTH_T`].
pub fn check_min_growth(t: u32) -> Result<MinGrowthCheck, ScheduleError> {
    if t < 2 {
        return Err(ScheduleError::TTooSmall { t });
    }
    if t > MAX_GROWTH_T {
        return Err(ScheduleError::TTooLarge {
            t,
            max: MAX_GROWTH_T,
        });
    }
    let index = growth_index(t)? as u64;
    let sig = signature_at(index)?;
    let bound = (1u64 << t) + 1;
    let min = sig.min();
    Ok(MinGrowthCheck {
        t,
        index,
        min,
        bound,
        pass: min >= bound,
    })
}

/// The growth constant `c = prod_{i>=0} (1 + 1/2^i)` with certified
/// brackets: `lower <= c <= upper`.
///
/// The tail beyond N factors is bounded via `ln(1+x) <= x`, so
/// `c <= P_N * exp(2^-N)`. Factors are added until both brackets round to
/// the same value at the requested precision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthConstant {
    pub lower: f64,
    pub upper: f64,
    pub precision: u32,
    pub factors: u32,
}

impl GrowthConstant {
    /// The constant rounded to the requested precision; lower and upper
    /// brackets agree on this value.
    pub fn value(&self) -> f64 {
        let scale = 10f64.powi(self.precision as i32);
        (self.lower * scale).round() / scale
    }
}

impl fmt::Display for GrowthConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:.*} (brackets [{:.12}, {:.12}], {} factors)",
            self.precision as usize,
            self.value(),
            self.lower,
            self.upper,
            self.factors
        )
    }
}

pub fn growth_constant(precision: u32) -> Result<GrowthConstant, ScheduleError> {
    if precision == 0 || precision > MAX_PRECISION {
        return Err(ScheduleError::PrecisionOutOfRange {
            p: precision,
            max: MAX_PRECISION,
        });
    }
    let scale = 10f64.powi(precision as i32);
    let mut partial = 1.0f64;
    for i in 0..64u32 {
        partial *= 1.0 + 2f64.powi(-(i as i32));
        let tail = 2f64.powi(-(i as i32)); // sum of the remaining exponents
        // small inflation keeps the brackets honest against f64 rounding
        let lower = partial * (1.0 - 1e-14);
        let upper = partial * tail.exp() * (1.0 + 1e-14);
        if (lower * scale).round() == (upper * scale).round() {
            return Ok(GrowthConstant {
                lower,
                upper,
                precision,
                factors: i + 1,
            });
        }
    }
    // 64 factors bound the tail by exp(2^-63); unreachable for the
    // precisions admitted above
    Err(ScheduleError::Overflow {
        what: "growth constant brackets",
    })
}

/// The elementary guarantee `2*floor(log2 k) + 1` on the odd girth
/// achievable with k colours.
pub fn log_girth_bound(k: u64) -> Result<u64, ScheduleError> {
    if k < 2 {
        return Err(ScheduleError::KTooSmall { k });
    }
    Ok(2 * (k.ilog2() as u64) + 1)
}

/// The colour count at which odd girth above `2^t` is guaranteed:
/// `ceil(c * sqrt(2)^(t^2 - 3t + 2))`, evaluated with the upper bracket
/// of the growth constant so the guarantee survives rounding.
pub fn threshold_for_girth(t: u32) -> Result<u128, ScheduleError> {
    if t < 2 {
        return Err(ScheduleError::TTooSmall { t });
    }
    // (t-1)(t-2) is even, so sqrt(2)^((t-1)(t-2)) is a power of two
    let half_exp = (t as u64 - 1) * (t as u64 - 2) / 2;
    if half_exp > 119 {
        return Err(ScheduleError::TTooLarge { t, max: 17 });
    }
    let c = growth_constant(MAX_PRECISION)?;
    let value = c.upper * (half_exp as f64).exp2();
    Ok(value.ceil() as u128)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_step_matches_the_formula() {
        assert_eq!(signature_step(&[5, 5]).unwrap(), vec![7, 5, 9]);
        assert_eq!(signature_step(&[5, 7, 9]).unwrap(), vec![7, 7, 9, 9]);
        assert_eq!(signature_step(&[3]).unwrap(), vec![5, 5]);
        assert!(matches!(
            signature_step(&[]),
            Err(ScheduleError::EmptySignature)
        ));
        assert!(matches!(
            signature_step(&[4]),
            Err(ScheduleError::BadEntry { value: 4 })
        ));
    }

    #[test]
    fn sequence_prefix_is_frozen() {
        assert_eq!(signature_at(2).unwrap().to_vec(), vec![5, 5]);
        assert_eq!(signature_at(3).unwrap().to_vec(), vec![5, 7, 9]);
        assert_eq!(signature_at(4).unwrap().to_vec(), vec![7, 7, 9, 9]);
        assert_eq!(signature_at(5).unwrap().to_vec(), vec![7, 9, 9, 9, 13]);
        assert_eq!(signature_at(6).unwrap().to_vec(), vec![9, 9, 9, 9, 13, 13]);
        assert_eq!(signature_at(6).unwrap().min(), 9);
        assert!(matches!(
            signature_at(1),
            Err(ScheduleError::IndexTooSmall { j: 1 })
        ));
    }

    #[test]
    fn sequence_lengths_and_parity() {
        for j in 2..=40u64 {
            let sig = signature_at(j).unwrap();
            assert_eq!(sig.len(), j);
            assert!(sig.to_vec().iter().all(|v| v % 2 == 1));
            // run-length view is sorted with no duplicate values
            assert!(sig.runs().windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn minimum_never_decreases() {
        let mut last = 0;
        for j in 2..=200u64 {
            let m = signature_at(j).unwrap().min();
            assert!(m >= last);
            last = m;
        }
    }

    #[test]
    fn growth_index_values() {
        assert_eq!(growth_index(2).unwrap(), 2);
        assert_eq!(growth_index(3).unwrap(), 6);
        assert_eq!(growth_index(4).unwrap(), 30);
        assert_eq!(growth_index(5).unwrap(), 270);
        assert_eq!(growth_index(6).unwrap(), 4590);
        assert_eq!(growth_index(7).unwrap(), 151470);
        assert!(matches!(
            growth_index(1),
            Err(ScheduleError::TTooSmall { t: 1 })
        ));
    }

    #[test]
    fn min_growth_holds_for_small_t() {
        for t in 2..=4 {
            let check = check_min_growth(t).unwrap();
            assert!(check.pass, "t = {t}: min {} < {}", check.min, check.bound);
        }
        let base = check_min_growth(2).unwrap();
        assert_eq!((base.index, base.min, base.bound), (2, 5, 5));
        assert!(check_min_growth(8).is_err());
        assert!(check_min_growth(1).is_err());
    }

    #[test]
    fn growth_constant_brackets() {
        let c4 = growth_constant(4).unwrap();
        assert_eq!(c4.value(), 4.7685);
        assert!(c4.lower > 4.7684 && c4.upper < 4.7686);
        assert!(c4.lower <= c4.upper);
        let c1 = growth_constant(1).unwrap();
        assert_eq!(c1.value(), 4.8);
        // partial products increase towards the constant from below
        assert!(2.0 * 1.5 * 1.25 <= c4.lower);
        assert!(growth_constant(0).is_err());
        assert!(growth_constant(MAX_PRECISION + 1).is_err());
    }

    #[test]
    fn log_bound_values_and_contract() {
        assert_eq!(log_girth_bound(2).unwrap(), 3);
        assert_eq!(log_girth_bound(4).unwrap(), 5);
        assert_eq!(log_girth_bound(16).unwrap(), 9);
        assert!(log_girth_bound(1).is_err());
        for k in 2..=64u64 {
            let bound = log_girth_bound(k).unwrap();
            let min = signature_at(k).unwrap().min();
            assert!(min >= bound, "k = {k}: min {min} below bound {bound}");
        }
    }

    #[test]
    fn threshold_values_and_growth_index_stay_below() {
        assert_eq!(threshold_for_girth(2).unwrap(), 5);
        assert_eq!(threshold_for_girth(3).unwrap(), 10);
        for t in 2..=7 {
            let p = growth_index(t).unwrap();
            let bound = threshold_for_girth(t).unwrap();
            assert!(p <= bound, "t = {t}: p = {p} above threshold {bound}");
        }
    }

    #[test]
    fn colours_to_exceed_small_cases() {
        assert_eq!(colours_to_exceed(3).unwrap(), 2);
        assert_eq!(colours_to_exceed(5).unwrap(), 4);
        assert_eq!(colours_to_exceed(7).unwrap(), 6);
    }

    #[test]
    fn signature_display_uses_run_lengths() {
        let sig = signature_at(6).unwrap();
        assert_eq!(sig.to_string(), "9x4 13x2");
        let base = signature_at(3).unwrap();
        assert_eq!(base.to_string(), "5 7 9");
    }
}
