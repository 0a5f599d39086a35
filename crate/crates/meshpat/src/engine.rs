//! High-throughput avoidance counting for all 1024 length-2 mesh patterns at
//! once, plus descent-distribution counting and the unified `count_avoiders`
//! entry point.
//!
//! The sweep visits each host permutation once. For every index pair `i < j`
//! it records the pair's shape (ascent/descent) and a 9-bit [`RegionMask`]
//! telling which of the nine regions around the pair contain a host point. A
//! subset-OR (sum-over-subsets) transform then answers, for every possible
//! shading `R`, whether some observed mask is disjoint from `R` — i.e. whether
//! the pattern `(shape, R)` occurs. One transform per permutation replaces
//! 1024 individual pattern tests.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::pattern::naive_count_avoiders;
use crate::perm::factorial_usize;
use crate::{Error, MeshPattern, Permutation, Result};

/// Engine/cache format version; cache files with another version are ignored.
pub const ENGINE_VERSION: &str = "1";

/// Number of 9-bit shading masks for a length-2 pattern.
pub const MASKS: usize = 512;

/// 9-bit occupancy mask of the regions around one index pair: bit `a·3 + b`
/// is set iff region (column-gap `a`, row-gap `b`) holds at least one point.
pub type RegionMask = u16;

/// Avoider counts for every length-2 pattern and every `n` up to the sweep
/// bound. Shape index 0 is `τ = 12`, shape index 1 is `τ = 21`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SweepResult {
    max_n: usize,
    /// `counts[n-1][shape][mask]`
    counts: Vec<[Box<[u64; MASKS]>; 2]>,
}

impl SweepResult {
    pub fn max_n(&self) -> usize {
        self.max_n
    }

    /// Shape/mask coordinates of a length-2 pattern.
    fn coords(p: &MeshPattern) -> Option<(usize, RegionMask)> {
        if p.len() != 2 {
            return None;
        }
        let shape = usize::from(p.tau().at(1) == 2);
        Some((shape, p.mask() as RegionMask))
    }

    /// `|S_n(p)|` for a length-2 pattern, if covered by this sweep.
    pub fn count(&self, p: &MeshPattern, n: usize) -> Option<u64> {
        let (shape, mask) = Self::coords(p)?;
        if n == 0 || n > self.max_n {
            return None;
        }
        Some(self.counts[n - 1][shape][mask as usize])
    }

    /// The counting sequence `|S_1(p)|, …, |S_N(p)|`.
    pub fn sequence(&self, p: &MeshPattern) -> Option<Vec<u64>> {
        Self::coords(p)?;
        Some((1..=self.max_n).map(|n| self.count(p, n).unwrap()).collect())
    }

    /// Iterates all 1024 patterns in canonical (shape, mask) order.
    pub fn patterns() -> impl Iterator<Item = MeshPattern> {
        ["12", "21"].into_iter().flat_map(|tau| {
            (0..MASKS as u128).map(move |mask| {
                MeshPattern::from_mask(tau.parse().unwrap(), mask).unwrap()
            })
        })
    }
}

/// Cache-file representation of a sweep: one entry per pattern in canonical
/// text form.
#[derive(Serialize, Deserialize)]
struct SweepFile {
    engine_version: String,
    max_n: usize,
    patterns: Vec<SweepFileEntry>,
}

#[derive(Serialize, Deserialize)]
struct SweepFileEntry {
    pattern: String,
    counts: Vec<u64>,
}

impl SweepResult {
    pub fn to_json(&self) -> Result<String> {
        let patterns = Self::patterns()
            .map(|p| SweepFileEntry {
                pattern: p.to_string(),
                counts: self.sequence(&p).unwrap(),
            })
            .collect();
        Ok(serde_json::to_string_pretty(&SweepFile {
            engine_version: ENGINE_VERSION.to_string(),
            max_n: self.max_n,
            patterns,
        })?)
    }

    /// Parses a cache file; `None` if the engine version does not match or
    /// the sweep covers less than `min_n`.
    pub fn from_json(text: &str, min_n: usize) -> Result<Option<Self>> {
        let file: SweepFile = serde_json::from_str(text)?;
        if file.engine_version != ENGINE_VERSION || file.max_n < min_n {
            return Ok(None);
        }
        let mut result = SweepResult {
            max_n: file.max_n,
            counts: (0..file.max_n)
                .map(|_| [Box::new([0u64; MASKS]), Box::new([0u64; MASKS])])
                .collect(),
        };
        for entry in &file.patterns {
            let p: MeshPattern = entry.pattern.parse()?;
            let (shape, mask) = Self::coords(&p).ok_or_else(|| {
                Error::Classify(format!("cache entry {} is not a length-2 pattern", entry.pattern))
            })?;
            if entry.counts.len() != file.max_n {
                return Err(Error::Classify(format!(
                    "cache entry {} has {} counts, expected {}",
                    entry.pattern,
                    entry.counts.len(),
                    file.max_n
                )));
            }
            for (n0, &c) in entry.counts.iter().enumerate() {
                result.counts[n0][shape][mask as usize] = c;
            }
        }
        Ok(Some(result))
    }
}

/// Counts avoiders of all 1024 length-2 patterns for every `n ≤ N` (`N ≤ 9`).
/// Deterministic for any thread count: work is split into blocks of
/// lexicographic ranks and per-block counters are merged by addition.
pub fn sweep_all_length2(max_n: usize) -> Result<SweepResult> {
    if max_n == 0 || max_n > 9 {
        return Err(Error::NOutOfRange {
            what: "sweep_all_length2",
            n: max_n,
            min: 1,
            max: 9,
        });
    }
    let counts = (1..=max_n).map(sweep_single_n).collect();
    Ok(SweepResult { max_n, counts })
}

/// Avoider counts `[shape][mask]` over all of `S_n`.
fn sweep_single_n(n: usize) -> [Box<[u64; MASKS]>; 2] {
    let total = factorial_usize(n);
    let threads = rayon::current_num_threads().max(1);
    let block = total.div_ceil(4 * threads).max(1);
    let starts: Vec<usize> = (0..total).step_by(block).collect();
    starts
        .into_par_iter()
        .map(|start| {
            let len = block.min(total - start);
            let mut avoid = [Box::new([0u64; MASKS]), Box::new([0u64; MASKS])];
            let mut pi = Permutation::from_rank(n, start);
            let mut occurs = [[false; MASKS]; 2];
            for step in 0..len {
                if step > 0 {
                    pi.lex_successor();
                }
                scan_permutation(&pi, &mut occurs, &mut avoid);
            }
            avoid
        })
        .reduce(
            || [Box::new([0u64; MASKS]), Box::new([0u64; MASKS])],
            |mut acc, part| {
                for shape in 0..2 {
                    for m in 0..MASKS {
                        acc[shape][m] += part[shape][m];
                    }
                }
                acc
            },
        )
}

/// Records, for one host permutation, which (shape, shading) patterns occur
/// and increments the avoidance counters of all others.
fn scan_permutation(
    pi: &Permutation,
    occurs: &mut [[bool; MASKS]; 2],
    avoid: &mut [Box<[u64; MASKS]>; 2],
) {
    let host = pi.letters();
    let n = host.len();
    occurs[0].fill(false);
    occurs[1].fill(false);
    for i in 0..n {
        for j in i + 1..n {
            let (vi, vj) = (host[i], host[j]);
            let shape = usize::from(vi > vj);
            let (lo, hi) = if vi < vj { (vi, vj) } else { (vj, vi) };
            let mut mask: RegionMask = 0;
            for (t, &v) in host.iter().enumerate() {
                if t == i || t == j {
                    continue;
                }
                let a = if t < i {
                    0
                } else if t < j {
                    1
                } else {
                    2
                };
                let b = if v < lo {
                    0
                } else if v < hi {
                    1
                } else {
                    2
                };
                mask |= 1 << (a * 3 + b);
            }
            occurs[shape][mask as usize] = true;
        }
    }
    for shape in 0..2 {
        let f = &mut occurs[shape];
        // subset-OR: f[s] answers "is some observed mask a subset of s"
        for bit in 0..9 {
            let step = 1usize << bit;
            for s in 0..MASKS {
                if s & step != 0 {
                    f[s] |= f[s ^ step];
                }
            }
        }
        let counters = &mut avoid[shape];
        for r in 0..MASKS {
            // (12/21, R) occurs iff an observed mask avoids every shaded
            // region, i.e. is a subset of the complement of R
            if !f[r ^ (MASKS - 1)] {
                counters[r] += 1;
            }
        }
    }
}

/// `|S_n(p)|` through the fastest applicable path: the mask engine for
/// length-2 patterns (`n ≤ 9`), naive enumeration otherwise (`n ≤ 8` for
/// general length, `n ≤ 10` for length ≤ 1). Exact; widened to `BigInt` for
/// uniformity with the formula evaluators.
pub fn count_avoiders(p: &MeshPattern, n: usize) -> Result<BigInt> {
    let count = if p.len() == 2 {
        if n > 9 {
            return Err(Error::NOutOfRange {
                what: "count_avoiders (length-2 fast path)",
                n,
                min: 0,
                max: 9,
            });
        }
        if n == 0 {
            1
        } else {
            let counts = sweep_single_n(n);
            let (shape, mask) = SweepResult::coords(p).expect("length-2 pattern");
            counts[shape][mask as usize]
        }
    } else {
        let max = if p.len() <= 1 { 10 } else { 8 };
        if n > max {
            return Err(Error::NOutOfRange {
                what: "count_avoiders (naive fallback)",
                n,
                min: 0,
                max,
            });
        }
        naive_count_avoiders(p, n)?
    };
    Ok(BigInt::from(count))
}

/// Coefficient list over `x^d`: entry `d` counts avoiders of `p` in `S_n`
/// with exactly `d` descents. Brute force, guarded at `n ≤ 8`.
pub fn descent_distribution_avoiders(p: &MeshPattern, n: usize) -> Result<Vec<u64>> {
    if n == 0 || n > 8 {
        return Err(Error::NOutOfRange {
            what: "descent_distribution_avoiders",
            n,
            min: 1,
            max: 8,
        });
    }
    let mut dist = vec![0u64; n];
    let mut pi = Permutation::identity(n);
    for _ in 0..factorial_usize(n) {
        if p.avoids(&pi) {
            dist[pi.descents()] += 1;
        }
        pi.lex_successor();
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> MeshPattern {
        s.parse().unwrap()
    }

    #[test]
    fn sweep_spot_values() {
        let sweep = sweep_all_length2(5).unwrap();
        assert_eq!(sweep.count(&pat("12:0/1,1/2"), 5), Some(1));
        assert_eq!(
            sweep.count(&pat("12:0/0,0/1,0/2,1/0,1/1,1/2,2/0,2/1,2/2"), 3),
            Some(6)
        );
        assert_eq!(
            sweep.sequence(&pat("12:0/1,1/0")),
            Some(vec![1, 1, 2, 5, 17])
        );
        assert_eq!(sweep.count(&pat("12:"), 5), Some(1));
        assert_eq!(sweep.count(&pat("21:"), 5), Some(1));
    }

    #[test]
    fn count_avoiders_examples() {
        assert_eq!(count_avoiders(&pat("12:0/0,0/1,0/2"), 6).unwrap(), 120.into());
        assert_eq!(
            count_avoiders(&pat("12:0/0,0/1,0/2,1/0,2/0"), 4).unwrap(),
            18.into()
        );
        assert_eq!(count_avoiders(&pat("21:"), 2).unwrap(), 1.into());
        assert_eq!(count_avoiders(&pat("1:0/0,0/1,1/0,1/1"), 10).unwrap(), 3628800.into());
        assert!(count_avoiders(&pat("123:"), 9).is_err());
        assert!(count_avoiders(&pat("12:"), 10).is_err());
    }

    #[test]
    fn engine_matches_oracle_spot() {
        let sweep = sweep_all_length2(5).unwrap();
        for text in [
            "12:0/0,1/1,2/2",
            "21:0/2,1/1,2/0",
            "12:0/1,1/2,2/0",
            "21:0/0,0/1,0/2,1/0,1/1,1/2,2/0,2/1,2/2",
            "12:",
        ] {
            let p = pat(text);
            for n in 1..=5 {
                assert_eq!(
                    sweep.count(&p, n).unwrap(),
                    naive_count_avoiders(&p, n).unwrap(),
                    "{text} at n={n}"
                );
            }
        }
    }

    #[test]
    fn descent_distribution_examples() {
        assert_eq!(
            descent_distribution_avoiders(&pat("12:0/0,0/1,1/0,1/1"), 3).unwrap(),
            vec![0, 1, 1]
        );
        assert_eq!(
            descent_distribution_avoiders(&pat("12:0/1,1/1,1/2,2/1"), 4).unwrap(),
            vec![0, 1, 4, 1]
        );
        assert_eq!(
            descent_distribution_avoiders(&pat("21:"), 1).unwrap(),
            vec![1]
        );
    }

    #[test]
    fn json_roundtrip() {
        let sweep = sweep_all_length2(3).unwrap();
        let json = sweep.to_json().unwrap();
        let back = SweepResult::from_json(&json, 3).unwrap().unwrap();
        assert_eq!(back, sweep);
        assert!(SweepResult::from_json(&json, 4).unwrap().is_none());
    }

    #[test]
    fn determinism_across_thread_counts() {
        let a = sweep_all_length2(5).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| sweep_all_length2(5).unwrap());
        assert_eq!(a, b);
    }
}
