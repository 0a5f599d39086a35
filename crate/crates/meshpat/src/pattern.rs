//! Mesh patterns and the occurrence/avoidance semantics.

use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::perm::factorial_usize;
use crate::{Error, Permutation, Result};

/// A unit box `⟦x,y⟧` of the `(k+1) × (k+1)` grid around a length-`k` pattern.
/// `x` is the column gap (0 = left of the first point), `y` the row gap.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct GridBox {
    pub x: u8,
    pub y: u8,
}

impl GridBox {
    pub fn new(x: u8, y: u8) -> Self {
        GridBox { x, y }
    }
}

impl fmt::Display for GridBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.x, self.y)
    }
}

/// A mesh pattern `(τ, R)`: a permutation `τ` of length `k` together with a
/// set `R` of shaded grid boxes. The shading is stored as a `(k+1)²`-bit mask
/// with bit index `x·(k+1) + y`, which is also the portable serialization
/// layout shared by the counting engine and its cache files.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MeshPattern {
    tau: Permutation,
    mask: u128,
}

/// Positions (1-based, strictly increasing) of one occurrence of a pattern in
/// a host permutation.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct OccurrenceWitness {
    pub indices: Vec<usize>,
}

impl MeshPattern {
    /// Builds a pattern from a permutation and a list of boxes. Duplicate or
    /// out-of-range boxes are errors.
    pub fn new(tau: Permutation, boxes: impl IntoIterator<Item = GridBox>) -> Result<Self> {
        let k = tau.len();
        let mut mask = 0u128;
        for b in boxes {
            if b.x as usize > k || b.y as usize > k {
                return Err(Error::BoxOutOfRange { x: b.x, y: b.y, k });
            }
            let bit = 1u128 << (b.x as usize * (k + 1) + b.y as usize);
            if mask & bit != 0 {
                return Err(Error::DuplicateBox { x: b.x, y: b.y });
            }
            mask |= bit;
        }
        Ok(MeshPattern { tau, mask })
    }

    /// Builds a pattern directly from a shading bit mask.
    pub fn from_mask(tau: Permutation, mask: u128) -> Result<Self> {
        let k = tau.len();
        let cells = (k + 1) * (k + 1);
        if cells < 128 && mask >> cells != 0 {
            return Err(Error::Classify(format!(
                "mask {mask:#x} has bits outside the {cells}-cell grid"
            )));
        }
        Ok(MeshPattern { tau, mask })
    }

    /// Classical pattern: no shading.
    pub fn classical(tau: Permutation) -> Self {
        MeshPattern { tau, mask: 0 }
    }

    pub fn tau(&self) -> &Permutation {
        &self.tau
    }

    /// Pattern length `k`.
    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    /// The shading as a bit mask (bit `x·(k+1)+y`).
    pub fn mask(&self) -> u128 {
        self.mask
    }

    pub fn contains_box(&self, b: GridBox) -> bool {
        let k = self.len();
        b.x as usize <= k
            && b.y as usize <= k
            && self.mask & (1u128 << (b.x as usize * (k + 1) + b.y as usize)) != 0
    }

    /// Shaded boxes sorted by `x`, then `y` (the canonical order).
    pub fn shading(&self) -> Vec<GridBox> {
        let k = self.len();
        let mut out = Vec::new();
        for x in 0..=k as u8 {
            for y in 0..=k as u8 {
                let b = GridBox::new(x, y);
                if self.contains_box(b) {
                    out.push(b);
                }
            }
        }
        out
    }

    /// A copy with one more shaded box.
    pub fn with_box(&self, b: GridBox) -> Result<Self> {
        let k = self.len();
        if b.x as usize > k || b.y as usize > k {
            return Err(Error::BoxOutOfRange { x: b.x, y: b.y, k });
        }
        Ok(MeshPattern {
            tau: self.tau.clone(),
            mask: self.mask | (1u128 << (b.x as usize * (k + 1) + b.y as usize)),
        })
    }

    /// All occurrences of `self` in `pi`, in lexicographic index order.
    pub fn occurrences(&self, pi: &Permutation) -> Vec<OccurrenceWitness> {
        let mut out = Vec::new();
        self.scan(pi, &mut |idx| {
            out.push(OccurrenceWitness {
                indices: idx.iter().map(|&i| i + 1).collect(),
            });
            true
        });
        out
    }

    /// True iff `pi` contains no occurrence of `self`.
    pub fn avoids(&self, pi: &Permutation) -> bool {
        !self.contains(pi)
    }

    /// True iff `pi` contains at least one occurrence of `self`.
    pub fn contains(&self, pi: &Permutation) -> bool {
        let mut found = false;
        self.scan(pi, &mut |_| {
            found = true;
            false
        });
        found
    }

    /// Enumerates witnesses in lexicographic order, passing 0-based index
    /// slices to `visit`; stops early when `visit` returns false.
    fn scan(&self, pi: &Permutation, visit: &mut dyn FnMut(&[usize]) -> bool) {
        let k = self.len();
        let n = pi.len();
        let host = pi.letters();
        if k == 0 {
            // The single box ⟦0,0⟧ covers the whole host.
            if self.mask & 1 == 0 || n == 0 {
                visit(&[]);
            }
            return;
        }
        if k > n {
            return;
        }
        let tau = self.tau.letters();
        let mut idx = vec![0usize; k];
        let mut vals = vec![0u8; k];
        let mut sorted_vals = vec![0u8; k];
        // lexicographic enumeration of k-combinations of 0..n
        for i in 0..k {
            idx[i] = i;
        }
        loop {
            let mut iso = true;
            for a in 0..k {
                vals[a] = host[idx[a]];
            }
            'pairs: for a in 0..k {
                for b in a + 1..k {
                    if (vals[a] < vals[b]) != (tau[a] < tau[b]) {
                        iso = false;
                        break 'pairs;
                    }
                }
            }
            if iso && self.regions_empty(host, &idx, &vals, &mut sorted_vals) && !visit(&idx) {
                return;
            }
            // next combination
            let mut i = k;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if idx[i] != i + n - k {
                    break;
                }
                if i == 0 {
                    return;
                }
            }
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    /// Checks the region-emptiness condition of every shaded box for the
    /// chosen indices/values.
    fn regions_empty(&self, host: &[u8], idx: &[usize], vals: &[u8], sorted_vals: &mut [u8]) -> bool {
        let k = self.len();
        let n = host.len();
        sorted_vals.copy_from_slice(vals);
        sorted_vals.sort_unstable();
        for b in 0..=k {
            let row_bits = self.mask >> b;
            let vlo = if b > 0 { sorted_vals[b - 1] } else { 0 };
            let vhi = if b < k { sorted_vals[b] } else { n as u8 + 1 };
            for a in 0..=k {
                if row_bits & (1u128 << (a * (k + 1))) == 0 {
                    continue;
                }
                let lo = if a > 0 { idx[a - 1] + 1 } else { 0 };
                let hi = if a < k { idx[a] } else { n };
                if host[lo..hi].iter().any(|&v| vlo < v && v < vhi) {
                    return false;
                }
            }
        }
        true
    }
}

/// `|S_n(p)|` by exhaustive generation; the authoritative oracle for every
/// derived value in the crate. Guarded at `n ≤ 10`.
pub fn naive_count_avoiders(p: &MeshPattern, n: usize) -> Result<u64> {
    if n > 10 {
        return Err(Error::NOutOfRange {
            what: "naive_count_avoiders",
            n,
            min: 0,
            max: 10,
        });
    }
    let mut count = 0u64;
    let mut pi = Permutation::identity(n);
    let total = factorial_usize(n);
    for _ in 0..total {
        if p.avoids(&pi) {
            count += 1;
        }
        pi.lex_successor();
    }
    Ok(count)
}

impl fmt::Display for MeshPattern {
    /// Canonical text form: `<perm>:<x>/<y>,…` with boxes sorted by `x`,
    /// then `y`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.tau)?;
        for (i, b) in self.shading().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for MeshPattern {
    type Err = Error;

    /// Parses the `<perm>:<x>/<y>[,<x>/<y>…]` grammar; the box list may be
    /// empty but the `:` is required.
    fn from_str(s: &str) -> Result<Self> {
        let colon = s.find(':').ok_or(Error::Parse {
            pos: s.len(),
            msg: "missing ':' separating permutation from box list".into(),
        })?;
        let tau: Permutation = s[..colon].parse()?;
        let rest = &s[colon + 1..];
        let mut boxes = Vec::new();
        if !rest.is_empty() {
            let mut offset = colon + 1;
            for item in rest.split(',') {
                let slash = item.find('/').ok_or(Error::Parse {
                    pos: offset,
                    msg: format!("box {item:?} is missing '/'"),
                })?;
                let x = parse_coord(&item[..slash], offset)?;
                let y = parse_coord(&item[slash + 1..], offset + slash + 1)?;
                boxes.push(GridBox::new(x, y));
                offset += item.len() + 1;
            }
        }
        MeshPattern::new(tau, boxes)
    }
}

fn parse_coord(s: &str, pos: usize) -> Result<u8> {
    s.parse::<u8>().map_err(|_| Error::Parse {
        pos,
        msg: format!("expected box coordinate, found {s:?}"),
    })
}

/// Convenience: parse a pattern from its text form.
pub fn parse_pattern(text: &str) -> Result<MeshPattern> {
    text.parse()
}

/// Canonical text form of a pattern.
pub fn format_pattern(p: &MeshPattern) -> String {
    p.to_string()
}

impl Serialize for MeshPattern {
    /// JSON rendering `{"perm": "12", "boxes": [[0,1],[1,2]]}`.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("MeshPattern", 2)?;
        st.serialize_field("perm", &self.tau.to_string())?;
        let boxes: Vec<[u8; 2]> = self.shading().iter().map(|b| [b.x, b.y]).collect();
        st.serialize_field("boxes", &boxes)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for MeshPattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            perm: String,
            boxes: Vec<[u8; 2]>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let tau: Permutation = raw.perm.parse().map_err(serde::de::Error::custom)?;
        MeshPattern::new(tau, raw.boxes.into_iter().map(|[x, y]| GridBox::new(x, y)))
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> MeshPattern {
        s.parse().unwrap()
    }

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_format() {
        let p = pat("12:0/1,1/2");
        assert_eq!(p.shading(), vec![GridBox::new(0, 1), GridBox::new(1, 2)]);
        assert_eq!(p.to_string(), "12:0/1,1/2");
        assert_eq!(pat("1:").to_string(), "1:");
        assert_eq!(pat("12:1/2,0/1").to_string(), "12:0/1,1/2");
        assert!(matches!(
            "12:3/0".parse::<MeshPattern>(),
            Err(Error::BoxOutOfRange { x: 3, y: 0, k: 2 })
        ));
        assert!(matches!(
            "12:0/1,0/1".parse::<MeshPattern>(),
            Err(Error::DuplicateBox { .. })
        ));
        assert!("12".parse::<MeshPattern>().is_err());
        assert!("12:0".parse::<MeshPattern>().is_err());
    }

    #[test]
    fn parse_format_roundtrip_exhaustive_len_le_3() {
        for k in 0..=3usize {
            let mut tau = Permutation::identity(k);
            loop {
                let cells = (k + 1) * (k + 1);
                for mask in 0..(1u128 << cells) {
                    let p = MeshPattern::from_mask(tau.clone(), mask).unwrap();
                    let text = p.to_string();
                    assert_eq!(text.parse::<MeshPattern>().unwrap(), p);
                }
                if !tau.lex_successor() {
                    break;
                }
            }
        }
    }

    #[test]
    fn json_rendering() {
        let p = pat("12:0/1,1/2");
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"perm":"12","boxes":[[0,1],[1,2]]}"#);
        assert_eq!(serde_json::from_str::<MeshPattern>(&json).unwrap(), p);
    }

    #[test]
    fn classical_occurrence_examples() {
        let w = pat("312:").occurrences(&perm("25134"));
        assert!(w.iter().any(|o| o.indices == vec![2, 4, 5]));
        assert!(pat("231:").avoids(&perm("51423")));
        assert!(pat("12:").occurrences(&perm("21")).is_empty());
    }

    #[test]
    fn mesh_occurrence_examples() {
        let w = pat("312:1/2,2/1").occurrences(&perm("521643"));
        assert!(w.iter().any(|o| o.indices == vec![1, 3, 5]));
        assert!(pat("123:0/1,1/0,2/2").occurrences(&perm("32145")).is_empty());
        // vincular 213 with last column shaded occurs as 324
        assert!(pat("213:2/0,2/1,2/2,2/3").contains(&perm("53124")));
    }

    #[test]
    fn bivincular_example_has_an_occurrence() {
        // The subsequence 254 (positions 2,3,4) is order-isomorphic to 132,
        // adjacent in position and in value, so 12543 contains this pattern.
        let p = pat("132:0/2,1/0,1/1,1/2,1/3,2/2,3/2");
        let w = p.occurrences(&perm("12543"));
        assert!(w.iter().any(|o| o.indices == vec![2, 3, 4]));
    }

    #[test]
    fn witness_order_is_lexicographic() {
        let w = pat("12:").occurrences(&perm("1234"));
        let got: Vec<Vec<usize>> = w.into_iter().map(|o| o.indices).collect();
        let mut sorted = got.clone();
        sorted.sort();
        assert_eq!(got, sorted);
        assert_eq!(got.len(), 6);
    }

    #[test]
    fn length_zero_pattern() {
        let empty = pat(":");
        assert!(empty.contains(&perm("21")));
        assert!(empty.contains(&perm("")));
        let shaded = MeshPattern::from_mask(perm(""), 1).unwrap();
        assert!(shaded.avoids(&perm("1")));
        assert!(shaded.contains(&perm("")));
    }

    #[test]
    fn naive_counts() {
        assert_eq!(naive_count_avoiders(&pat("12:"), 5).unwrap(), 1);
        assert_eq!(naive_count_avoiders(&pat("12:0/1,2/0,1/0,0/2"), 5).unwrap(), 91);
        assert_eq!(naive_count_avoiders(&pat("1:"), 3).unwrap(), 0);
        assert_eq!(naive_count_avoiders(&pat("1:"), 0).unwrap(), 1);
        assert!(naive_count_avoiders(&pat("1:"), 11).is_err());
    }

    #[test]
    fn monotonicity_in_shading_small() {
        // removing a box from the shading can only lose avoiders
        for text in ["12:0/0,1/1", "21:0/2,1/0,2/1", "12:0/1,1/0,2/2"] {
            let p = pat(text);
            let boxes = p.shading();
            for b in &boxes {
                let smaller = MeshPattern::new(
                    p.tau().clone(),
                    boxes.iter().copied().filter(|x| x != b),
                )
                .unwrap();
                for n in 0..=6 {
                    assert!(
                        naive_count_avoiders(&smaller, n).unwrap()
                            <= naive_count_avoiders(&p, n).unwrap()
                    );
                }
            }
        }
    }
}
