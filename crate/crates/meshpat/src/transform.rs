//! Equivalence- and coincidence-preserving transformations: the D8 symmetries,
//! up-shift, toric-shift, switch operations, and the shading lemma.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::{Error, GridBox, MeshPattern, Permutation, Result};

/// One of the three generating symmetries of the square.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SymmetryLetter {
    /// Reverse: reflection around the vertical center line.
    R,
    /// Complement: reflection around the horizontal center line.
    C,
    /// Inverse: reflection around the main diagonal.
    I,
}

/// A word over `{r, c, i}`, applied left to right. Words equal in the
/// dihedral group D8 produce equal patterns.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SymmetryWord(pub Vec<SymmetryLetter>);

/// The eight canonical words covering all of D8.
pub const D8_WORDS: [&str; 8] = ["", "r", "c", "i", "rc", "ri", "ci", "rci"];

impl FromStr for SymmetryWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut word = Vec::with_capacity(s.len());
        for (pos, ch) in s.char_indices() {
            word.push(match ch {
                'r' => SymmetryLetter::R,
                'c' => SymmetryLetter::C,
                'i' => SymmetryLetter::I,
                _ => {
                    return Err(Error::Parse {
                        pos,
                        msg: format!("expected symmetry letter r, c or i, found {ch:?}"),
                    })
                }
            });
        }
        Ok(SymmetryWord(word))
    }
}

impl fmt::Display for SymmetryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                SymmetryLetter::R => "r",
                SymmetryLetter::C => "c",
                SymmetryLetter::I => "i",
            })?;
        }
        Ok(())
    }
}

/// Applies a symmetry word to a mesh pattern: `r` maps `⟦x,y⟧ → ⟦k−x,y⟧` and
/// reverses `τ`; `c` maps `⟦x,y⟧ → ⟦x,k−y⟧` and complements; `i` maps
/// `⟦x,y⟧ → ⟦y,x⟧` and inverts.
pub fn symmetry(p: &MeshPattern, w: &SymmetryWord) -> MeshPattern {
    let k = p.len() as u8;
    let mut tau = p.tau().clone();
    let mut boxes = p.shading();
    for letter in &w.0 {
        match letter {
            SymmetryLetter::R => {
                tau = tau.reverse();
                for b in &mut boxes {
                    b.x = k - b.x;
                }
            }
            SymmetryLetter::C => {
                tau = tau.complement();
                for b in &mut boxes {
                    b.y = k - b.y;
                }
            }
            SymmetryLetter::I => {
                tau = tau.inverse();
                for b in &mut boxes {
                    std::mem::swap(&mut b.x, &mut b.y);
                }
            }
        }
    }
    MeshPattern::new(tau, boxes).expect("symmetry preserves validity")
}

/// Applies a symmetry word to a bare permutation.
pub fn perm_symmetry(pi: &Permutation, w: &SymmetryWord) -> Permutation {
    let mut out = pi.clone();
    for letter in &w.0 {
        out = match letter {
            SymmetryLetter::R => out.reverse(),
            SymmetryLetter::C => out.complement(),
            SymmetryLetter::I => out.inverse(),
        };
    }
    out
}

/// The ≤ 8 distinct images of `p` under the dihedral group.
pub fn d8_orbit(p: &MeshPattern) -> BTreeSet<MeshPattern> {
    D8_WORDS
        .iter()
        .map(|w| symmetry(p, &w.parse().unwrap()))
        .collect()
}

/// Up-shift of a pattern: `π↑_i = (π_i mod n) + 1` and
/// `R↑ = { ⟦a, (b+1) mod (n+1)⟧ }`. Total; Wilf-preservation requires the top
/// row to be shaded (gated in the classifier).
pub fn up_shift(p: &MeshPattern) -> MeshPattern {
    let k = p.len() as u8;
    let boxes = p
        .shading()
        .into_iter()
        .map(|b| GridBox::new(b.x, (b.y + 1) % (k + 1)));
    MeshPattern::new(p.tau().up_shift(), boxes).expect("up-shift preserves validity")
}

/// Toric shift of a pattern: the permutation part rotates on the torus (see
/// [`Permutation::toric_shift`]); a box `⟦a,b⟧` moves to
/// `⟦(a + (k+1−ℓ)) mod (k+1), (b+1) mod (k+1)⟧` where `ℓ` is the position of
/// the largest letter in `τ`.
pub fn toric_shift(p: &MeshPattern) -> Result<MeshPattern> {
    let k = p.len();
    if k == 0 {
        return Err(Error::EmptyPattern("toric shift"));
    }
    let ell = p.tau().position_of(k as u8);
    let m = (k + 1) as u8;
    let shift = (k + 1 - ell) as u8;
    let boxes = p
        .shading()
        .into_iter()
        .map(|b| GridBox::new((b.x + shift) % m, (b.y + 1) % m));
    Ok(MeshPattern::new(p.tau().toric_shift()?, boxes).expect("toric shift preserves validity"))
}

/// Part operation of a switch: identity or reverse.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PartOp {
    Id,
    Rev,
}

impl FromStr for PartOp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "id" => Ok(PartOp::Id),
            "r" => Ok(PartOp::Rev),
            _ => Err(Error::Parse {
                pos: 0,
                msg: format!("expected part operation 'id' or 'r', found {s:?}"),
            }),
        }
    }
}

/// Switch operation `S_{a,b,d}`: split at the column of the largest letter,
/// optionally exchange the two parts (`d = true`), and apply `a` to the part
/// that ends up before the maximum and `b` to the part after it. Columns of
/// the shading move with their parts; rows are unchanged.
pub fn switch_op(p: &MeshPattern, a: PartOp, b: PartOp, d: bool) -> Result<MeshPattern> {
    let k = p.len();
    if k == 0 {
        return Err(Error::EmptyPattern("switch operation"));
    }
    let m = p.tau().position_of(k as u8); // 1-based position of the maximum
    let tau = p.tau().letters();
    let mut part_one: Vec<u8> = tau[..m - 1].to_vec();
    let mut part_two: Vec<u8> = tau[m..].to_vec();
    if d {
        std::mem::swap(&mut part_one, &mut part_two);
    }
    if a == PartOp::Rev {
        part_one.reverse();
    }
    if b == PartOp::Rev {
        part_two.reverse();
    }
    let mut letters = part_one;
    letters.push(k as u8);
    letters.extend_from_slice(&part_two);
    let tau_out = Permutation::new(letters).expect("switch preserves the letter set");

    // Column-gap relabeling. Gaps 0..m-1 straddle the original part one,
    // gaps m..k the original part two; reversing a part reverses its local
    // gaps, exchanging the parts moves a part's gap block wholesale.
    let len_one = m - 1; // points in the original part one
    let len_two = k - m;
    let mut colmap = vec![0u8; k + 1];
    if !d {
        for (g, slot) in colmap.iter_mut().enumerate() {
            *slot = if g < m {
                match a {
                    PartOp::Rev => (m - 1 - g) as u8,
                    PartOp::Id => g as u8,
                }
            } else {
                match b {
                    PartOp::Rev => (m + k - g) as u8,
                    PartOp::Id => g as u8,
                }
            };
        }
    } else {
        // original part two lands in new gaps 0..len_two, original part one
        // in new gaps len_two+1..k
        for (g, slot) in colmap.iter_mut().enumerate() {
            *slot = if g >= m {
                let t = g - m;
                (match a {
                    PartOp::Rev => len_two - t,
                    PartOp::Id => t,
                }) as u8
            } else {
                let t = match b {
                    PartOp::Rev => len_one - g,
                    PartOp::Id => g,
                };
                (t + len_two + 1) as u8
            };
        }
    }
    let boxes = p
        .shading()
        .into_iter()
        .map(|bx| GridBox::new(colmap[bx.x as usize], bx.y));
    Ok(MeshPattern::new(tau_out, boxes).expect("switch preserves validity"))
}

/// Switch operation on a bare permutation.
pub fn switch_perm(pi: &Permutation, a: PartOp, b: PartOp, d: bool) -> Result<Permutation> {
    Ok(switch_op(&MeshPattern::classical(pi.clone()), a, b, d)?
        .tau()
        .clone())
}

/// True iff all `k+1` boxes of the top row are shaded — the hypothesis of the
/// shift and switch Wilf-preservation statements.
pub fn top_row_shaded(p: &MeshPattern) -> bool {
    let k = p.len() as u8;
    (0..=k).all(|x| p.contains_box(GridBox::new(x, k)))
}

/// Direction of a shading-lemma step relative to its pattern point.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub enum Direction {
    NE,
    NW,
    SE,
    SW,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::NE, Direction::NW, Direction::SE, Direction::SW];

    /// The symmetry word conjugating this direction to NE. Each word is an
    /// involution, so it also maps the NE answer back.
    fn conjugating_word(self) -> &'static str {
        match self {
            Direction::NE => "",
            Direction::NW => "r",
            Direction::SE => "c",
            Direction::SW => "rc",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::NE => "NE",
            Direction::NW => "NW",
            Direction::SE => "SE",
            Direction::SW => "SW",
        })
    }
}

/// A licensed single-box shading step: the box neighboring point
/// `(i, τ(i))` in `direction` may be added while preserving coincidence.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct ShadingStep {
    /// 1-based index of the witnessing pattern point.
    pub point_index: usize,
    pub direction: Direction,
    #[serde(rename = "box")]
    pub boxed: GridBox,
}

/// The NE conditions of the shading lemma, checked directly: for a point with
/// `τ(i) = j` and `⟦i,j⟧ ∉ R`, the box `⟦i,j⟧` may be shaded if
/// (1) `⟦i−1,j−1⟧ ∉ R`; (2) at most one of `⟦i,j−1⟧`, `⟦i−1,j⟧` is in `R`;
/// (3) `⟦ℓ,j−1⟧ ∈ R` for `ℓ ∉ {i−1,i}` implies `⟦ℓ,j⟧ ∈ R`; and
/// (4) `⟦i−1,ℓ⟧ ∈ R` for `ℓ ∉ {j−1,j}` implies `⟦i,ℓ⟧ ∈ R`.
fn ne_candidates(p: &MeshPattern) -> Vec<(usize, GridBox)> {
    let k = p.len();
    let mut out = Vec::new();
    for i in 1..=k {
        let j = p.tau().at(i) as usize;
        let boxed = GridBox::new(i as u8, j as u8);
        if p.contains_box(boxed)
            || p.contains_box(GridBox::new(i as u8 - 1, j as u8 - 1))
            || (p.contains_box(GridBox::new(i as u8, j as u8 - 1))
                && p.contains_box(GridBox::new(i as u8 - 1, j as u8)))
        {
            continue;
        }
        let cols_ok = (0..=k).filter(|l| *l != i - 1 && *l != i).all(|l| {
            !p.contains_box(GridBox::new(l as u8, j as u8 - 1))
                || p.contains_box(GridBox::new(l as u8, j as u8))
        });
        let rows_ok = (0..=k).filter(|l| *l != j - 1 && *l != j).all(|l| {
            !p.contains_box(GridBox::new(i as u8 - 1, l as u8))
                || p.contains_box(GridBox::new(i as u8, l as u8))
        });
        if cols_ok && rows_ok {
            out.push((i, boxed));
        }
    }
    out
}

/// All (point, direction, box) triples licensed by the shading lemma. The
/// NW/SE/SW variants are obtained by conjugating with the symmetry that maps
/// the direction to NE and mapping the box (and point) back.
pub fn shading_candidates(p: &MeshPattern) -> Vec<ShadingStep> {
    let k = p.len() as u8;
    let mut out = BTreeSet::new();
    for dir in Direction::ALL {
        let word: SymmetryWord = dir.conjugating_word().parse().unwrap();
        let image = symmetry(p, &word);
        for (iq, boxed) in ne_candidates(&image) {
            let uses_r = word.0.contains(&SymmetryLetter::R);
            let uses_c = word.0.contains(&SymmetryLetter::C);
            let x = if uses_r { k - boxed.x } else { boxed.x };
            let y = if uses_c { k - boxed.y } else { boxed.y };
            let point_index = if uses_r { k as usize + 1 - iq } else { iq };
            out.insert(ShadingStep {
                point_index,
                direction: dir,
                boxed: GridBox::new(x, y),
            });
        }
    }
    out.into_iter().collect()
}

/// Patterns obtained from `p` by one licensed shading step; each is coincident
/// with `p` (avoided by exactly the same permutations).
pub fn coincidence_neighbors(p: &MeshPattern) -> BTreeSet<MeshPattern> {
    shading_candidates(p)
        .into_iter()
        .map(|s| p.with_box(s.boxed).expect("candidate box is in range"))
        .collect()
}
