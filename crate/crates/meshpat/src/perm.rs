//! Permutations in one-line notation and the statistics used by the
//! enumeration results.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A permutation of `{1..n}` in one-line notation. The empty permutation is
/// legal and acts as the identity of the theory.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Permutation(Vec<u8>);

/// Statistics of a permutation referenced by the enumeration propositions.
/// Positions are 1-based.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Statistics {
    /// Number of positions `i` with `π_i > π_{i+1}`.
    pub descents: usize,
    /// Number of positions `i` with `π_i < π_{i+1}`.
    pub ascents: usize,
    /// Positions whose letter exceeds every letter before it.
    pub left_to_right_maxima: Vec<usize>,
    /// Positions `i` with `π_i = i` and every earlier letter smaller.
    pub strong_fixed_points: Vec<usize>,
    /// True iff no proper prefix `{1..j}` maps onto `{1..j}`.
    pub is_connected: bool,
}

impl Permutation {
    /// Builds a permutation, validating that `letters` is a bijection on
    /// `{1..n}`.
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        let n = letters.len();
        let mut seen = vec![false; n + 1];
        for &v in &letters {
            if v == 0 || v as usize > n || seen[v as usize] {
                return Err(Error::NotAPermutation(format!(
                    "letters {letters:?} are not a bijection on 1..={n}"
                )));
            }
            seen[v as usize] = true;
        }
        Ok(Permutation(letters))
    }

    /// The identity permutation `12…n`.
    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// One-line notation, values in `1..=n`.
    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    /// Letter at 1-based position `i`.
    pub fn at(&self, i: usize) -> u8 {
        self.0[i - 1]
    }

    /// 1-based position of `value`.
    pub fn position_of(&self, value: u8) -> usize {
        self.0.iter().position(|&v| v == value).expect("value present") + 1
    }

    /// Reverse: `π_1…π_n ↦ π_n…π_1`.
    pub fn reverse(&self) -> Self {
        Permutation(self.0.iter().rev().copied().collect())
    }

    /// Complement: `π_i ↦ n + 1 − π_i`.
    pub fn complement(&self) -> Self {
        let n = self.0.len() as u8;
        Permutation(self.0.iter().map(|&v| n + 1 - v).collect())
    }

    /// Group-theoretic inverse.
    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize - 1] = i as u8 + 1;
        }
        Permutation(inv)
    }

    /// Up-shift: every letter is increased by one, cyclically
    /// (`π↑_i = (π_i mod n) + 1`).
    pub fn up_shift(&self) -> Self {
        let n = self.0.len() as u8;
        if n == 0 {
            return self.clone();
        }
        Permutation(self.0.iter().map(|&v| (v % n) + 1).collect())
    }

    /// Toric shift: prepend `0`, add one to every letter modulo `n+1`, then
    /// rotate the part left of the (unique) `0` to the end and drop the `0`.
    pub fn toric_shift(&self) -> Result<Self> {
        let n = self.0.len();
        if n == 0 {
            return Err(Error::EmptyPattern("toric shift"));
        }
        let modulus = (n + 1) as u8;
        let mut ext: Vec<u8> = Vec::with_capacity(n + 1);
        ext.push(1 % modulus);
        ext.extend(self.0.iter().map(|&v| (v + 1) % modulus));
        let z = ext.iter().position(|&v| v == 0).expect("0 present");
        let mut out = Vec::with_capacity(n);
        out.extend_from_slice(&ext[z + 1..]);
        out.extend_from_slice(&ext[..z]);
        Ok(Permutation(out))
    }

    /// All permutations of length `n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        let count = factorial_usize(n);
        let mut out = Vec::with_capacity(count);
        let mut cur = Self::identity(n);
        loop {
            out.push(cur.clone());
            if !cur.lex_successor() {
                break;
            }
        }
        out
    }

    /// Advances to the next permutation in lexicographic order in place.
    /// Returns false (leaving the value unchanged) at the lexicographic
    /// maximum.
    pub fn lex_successor(&mut self) -> bool {
        let v = &mut self.0;
        let n = v.len();
        if n < 2 {
            return false;
        }
        let Some(i) = (0..n - 1).rev().find(|&i| v[i] < v[i + 1]) else {
            return false;
        };
        let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).expect("ascent found");
        v.swap(i, j);
        v[i + 1..].reverse();
        true
    }

    /// Permutation of length `n` with the given lexicographic rank
    /// (factorial number system unranking).
    pub fn from_rank(n: usize, mut rank: usize) -> Self {
        let mut avail: Vec<u8> = (1..=n as u8).collect();
        let mut out = Vec::with_capacity(n);
        for i in (0..n).rev() {
            let f = factorial_usize(i);
            let idx = rank / f;
            rank %= f;
            out.push(avail.remove(idx));
        }
        Permutation(out)
    }

    /// All statistics in one pass.
    pub fn statistics(&self) -> Statistics {
        let v = &self.0;
        let n = v.len();
        let descents = (0..n.saturating_sub(1)).filter(|&i| v[i] > v[i + 1]).count();
        let ascents = n.saturating_sub(1) - descents;
        let mut left_to_right_maxima = Vec::new();
        let mut strong_fixed_points = Vec::new();
        let mut max_so_far = 0u8;
        for (i, &x) in v.iter().enumerate() {
            if x > max_so_far {
                left_to_right_maxima.push(i + 1);
                if x as usize == i + 1 {
                    // a left-to-right maximum at its own position has all
                    // earlier letters smaller
                    strong_fixed_points.push(i + 1);
                }
                max_so_far = x;
            }
        }
        let mut is_connected = true;
        let mut prefix_max = 0u8;
        for (i, &x) in v.iter().enumerate() {
            prefix_max = prefix_max.max(x);
            if i + 1 < n && prefix_max as usize == i + 1 {
                is_connected = false;
                break;
            }
        }
        Statistics {
            descents,
            ascents,
            left_to_right_maxima,
            strong_fixed_points,
            is_connected,
        }
    }

    /// Number of descents.
    pub fn descents(&self) -> usize {
        let v = &self.0;
        (0..v.len().saturating_sub(1)).filter(|&i| v[i] > v[i + 1]).count()
    }
}

pub(crate) fn factorial_usize(n: usize) -> usize {
    (1..=n).product()
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.0 {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses one-line notation as a digit string (lengths up to 9).
    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::with_capacity(s.len());
        for (pos, ch) in s.char_indices() {
            match ch.to_digit(10) {
                Some(d) if d >= 1 => letters.push(d as u8),
                _ => {
                    return Err(Error::Parse {
                        pos,
                        msg: format!("expected digit 1-9, found {ch:?}"),
                    })
                }
            }
        }
        Permutation::new(letters)
    }
}

impl TryFrom<String> for Permutation {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Permutation> for String {
    fn from(p: Permutation) -> String {
        p.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn validation() {
        assert!(Permutation::new(vec![2, 1, 3]).is_ok());
        assert!(Permutation::new(vec![]).is_ok());
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![2, 3]).is_err());
        assert!("120".parse::<Permutation>().is_err());
        assert!("1x2".parse::<Permutation>().is_err());
    }

    #[test]
    fn symmetry_helpers() {
        assert_eq!(p("312").reverse(), p("213"));
        assert_eq!(p("312").complement(), p("132"));
        assert_eq!(p("312").inverse(), p("231"));
        assert_eq!(p("12").up_shift(), p("21"));
    }

    #[test]
    fn toric_shift_examples() {
        assert_eq!(p("1").toric_shift().unwrap(), p("1"));
        // iterating n+1 times returns to the start
        for tau in Permutation::all(3) {
            let mut q = tau.clone();
            for _ in 0..4 {
                q = q.toric_shift().unwrap();
            }
            assert_eq!(q, tau);
        }
        assert!(p("").toric_shift().is_err());
    }

    #[test]
    fn lex_order_and_ranks() {
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        for (rank, q) in all.iter().enumerate() {
            assert_eq!(&Permutation::from_rank(4, rank), q);
        }
    }

    #[test]
    fn statistics_examples() {
        assert_eq!(p("132").statistics().strong_fixed_points, vec![1]);
        assert!(!p("1234").statistics().is_connected);
        assert!(p("2413").statistics().is_connected);
        assert_eq!(p("21").statistics().descents, 1);
        assert_eq!(p("25134").statistics().left_to_right_maxima, vec![1, 2]);
        assert_eq!(p("").statistics().descents, 0);
    }
}
