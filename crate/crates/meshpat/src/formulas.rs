//! The registry of closed forms, recurrences and generating functions for the
//! enumerated subclasses, and the formula-versus-engine verification report.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::engine::count_avoiders;
use crate::series::Series;
use crate::{Error, MeshPattern, Result};

/// One evaluator per enumeration result, each bound to the canonical
/// pattern(s) whose avoider counts it claims.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[allow(non_camel_case_types)]
pub enum FormulaId {
    /// Classical class: constantly 1.
    CONST_ONE,
    /// Avoiders start with `n`: `(n−1)!`.
    FACT_SHIFT1,
    /// First letter smaller than the last: `n!/2` for `n ≥ 2`.
    HALF_FACT,
    /// Only `12` contains the fully shaded pattern: `n!` for `n ≥ 3`.
    FACT_FROM3,
    /// `n! − (n−1)!` for `n ≥ 2`.
    A094258,
    /// `n! − (n−2)!` for `n ≥ 2`.
    A213167,
    /// `a_n = (n−1)a_{n−1} + (n−2)a_{n−2}`, `a_0 = a_1 = 1`.
    A000255,
    /// `n·[xⁿ] log(1 + Σ_{m≥1}(m−1)! xᵐ)`.
    LOG_GF,
    /// `n! − (n−1)! + [x^{n−1}] F/(1+xF)`.
    SFP_TAIL,
    /// `n! − Σ_{i=1}^{n−1} (n−1)!/i`.
    HARMONIC,
    /// `n! − Σ_{i=0}^{n−2} i!(n−1−i)!`.
    POSMAX,
    /// `n! − Σ_{k=1}^{n−1} (k−1)!(n−k−1)!`.
    STARTK,
    /// `n! − Σ_{i=1}^{n−1} Σ_{ℓ=1}^{i} (i−ℓ)!(n−i−ℓ)!ℓ!`, dropping summands
    /// with a negative-argument factorial. Known not to match the engine (the
    /// engine is authoritative); kept as a documented discrepancy.
    DSUM16,
    /// `n! − Σ_{k=0}^{n−2} Σ_{j=0}^{k} j!(k−j)!(n−2−k)!`.
    DSUM17,
    /// `a_n = n·a_{n−1} − a_{n−2}`, `a_{−1} = 0`, `a_0 = 1`.
    RECUR89,
    /// Connected permutations: `[xⁿ](1 − 1/F)`.
    CONNECTED,
    /// Conjectural: `|T(n,0)|` of the A101900 triangular recurrence.
    CONJ_A101900,
    /// Length 1, left-to-right-maximum pattern. Every nonempty permutation
    /// has a left-to-right maximum (its first letter), so this is 0 for
    /// `n ≥ 1`.
    K1_LTR,
    /// Length 1, strong-fixed-point pattern: coefficients of `F/(1+xF)`.
    K1_SFP,
    /// Length 1, begins-with-`n` pattern: `n! − (n−1)!`.
    K1_STARTN,
    /// Length 1, fully shaded: `n! − [n = 1]`.
    K1_ALLSHADED,
}

impl FormulaId {
    pub const ALL: [FormulaId; 21] = [
        FormulaId::CONST_ONE,
        FormulaId::FACT_SHIFT1,
        FormulaId::HALF_FACT,
        FormulaId::FACT_FROM3,
        FormulaId::A094258,
        FormulaId::A213167,
        FormulaId::A000255,
        FormulaId::LOG_GF,
        FormulaId::SFP_TAIL,
        FormulaId::HARMONIC,
        FormulaId::POSMAX,
        FormulaId::STARTK,
        FormulaId::DSUM16,
        FormulaId::DSUM17,
        FormulaId::RECUR89,
        FormulaId::CONNECTED,
        FormulaId::CONJ_A101900,
        FormulaId::K1_LTR,
        FormulaId::K1_SFP,
        FormulaId::K1_STARTN,
        FormulaId::K1_ALLSHADED,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormulaId::CONST_ONE => "CONST_ONE",
            FormulaId::FACT_SHIFT1 => "FACT_SHIFT1",
            FormulaId::HALF_FACT => "HALF_FACT",
            FormulaId::FACT_FROM3 => "FACT_FROM3",
            FormulaId::A094258 => "A094258",
            FormulaId::A213167 => "A213167",
            FormulaId::A000255 => "A000255",
            FormulaId::LOG_GF => "LOG_GF",
            FormulaId::SFP_TAIL => "SFP_TAIL",
            FormulaId::HARMONIC => "HARMONIC",
            FormulaId::POSMAX => "POSMAX",
            FormulaId::STARTK => "STARTK",
            FormulaId::DSUM16 => "DSUM16",
            FormulaId::DSUM17 => "DSUM17",
            FormulaId::RECUR89 => "RECUR89",
            FormulaId::CONNECTED => "CONNECTED",
            FormulaId::CONJ_A101900 => "CONJ_A101900",
            FormulaId::K1_LTR => "K1_LTR",
            FormulaId::K1_SFP => "K1_SFP",
            FormulaId::K1_STARTN => "K1_STARTN",
            FormulaId::K1_ALLSHADED => "K1_ALLSHADED",
        }
    }

    /// Smallest `n` the formula is stated for; below-floor queries are errors.
    pub fn floor(self) -> usize {
        match self {
            FormulaId::HALF_FACT | FormulaId::A094258 | FormulaId::A213167 => 2,
            FormulaId::FACT_FROM3 => 3,
            _ => 1,
        }
    }

    /// Canonical pattern(s) this formula enumerates, in canonical text form.
    pub fn canonical_patterns(self) -> &'static [&'static str] {
        match self {
            FormulaId::CONST_ONE => &["12:"],
            FormulaId::FACT_SHIFT1 => &["12:0/0,0/1,0/2"],
            FormulaId::HALF_FACT => &["12:0/0,0/1,0/2,2/0,2/1,2/2"],
            FormulaId::FACT_FROM3 => &["12:0/0,0/1,0/2,1/0,1/1,1/2,2/0,2/1,2/2"],
            FormulaId::A094258 => &["12:0/0,0/1,0/2,1/0,2/0"],
            FormulaId::A213167 => &["12:0/0,0/1,0/2,1/0,1/2,2/0,2/1,2/2"],
            FormulaId::A000255 => &["12:0/1,1/0,1/1,1/2,2/1", "12:0/1,0/2,1/0,1/1,1/2"],
            FormulaId::LOG_GF => &["12:0/1,0/2,1/0,2/0"],
            FormulaId::SFP_TAIL => &["12:0/0,0/1,0/2,1/0,1/2,2/0,2/1"],
            FormulaId::HARMONIC => &["12:0/0,0/1,0/2,1/2,2/0,2/2"],
            FormulaId::POSMAX => &["12:0/1,0/2,1/1,1/2,2/0,2/2"],
            FormulaId::STARTK => &["12:0/0,0/1,0/2,1/1,1/2,2/0,2/1"],
            FormulaId::DSUM16 => &["12:0/0,0/1,1/2,2/0,2/2"],
            FormulaId::DSUM17 => &["12:0/0,0/1,1/1,1/2,2/0,2/2"],
            FormulaId::RECUR89 => &["12:0/0,0/2,1/0,1/1,1/2", "12:0/0,0/1,1/0,1/1,1/2"],
            FormulaId::CONNECTED => &["12:0/1,0/2,1/1,1/2,2/0"],
            FormulaId::CONJ_A101900 => &["12:0/1,1/0"],
            FormulaId::K1_LTR => &["1:0/1"],
            FormulaId::K1_SFP => &["1:0/1,1/0"],
            FormulaId::K1_STARTN => &["1:0/0,0/1,1/1"],
            FormulaId::K1_ALLSHADED => &["1:0/0,0/1,1/0,1/1"],
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormulaId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let upper = s.to_ascii_uppercase();
        FormulaId::ALL
            .into_iter()
            .find(|id| id.name() == upper)
            .ok_or_else(|| Error::UnknownFormula(s.to_string()))
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// `[x^m] F/(1+xF)`: permutations of length `m` without strong fixed points.
fn sfp_free(m: usize) -> BigInt {
    let order = m.max(1);
    let f = Series::factorials(order);
    let x = Series::from_fn(order, |i| {
        if i == 1 {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    });
    let one = Series::from_fn(order, |i| {
        if i == 0 {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    });
    let g = f.div(&one.add(&x.mul(&f))).expect("nonzero constant term");
    g.coeff_integer(m).expect("integral coefficient")
}

/// Signed A101900 triangle value `T(n, 0)`.
fn a101900_t_n0(n: usize) -> BigInt {
    // T(0,0) = 1; T(n,k) = Σ_{j=0}^{n−k} T(n−k,j)·T(j+k−1,k−1) for n ≥ k > 0;
    // T(n,0) = −Σ_{j=1}^{n} T(n,j) for n > 0.
    let mut t: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for m in 1..=n {
        let mut row = vec![BigInt::zero(); m + 1];
        for k in 1..=m {
            let mut acc = BigInt::zero();
            for j in 0..=m - k {
                let left = &t[m - k][j];
                let (rn, rk) = (j + k - 1, k - 1);
                if rk <= rn {
                    acc += left * &t[rn][rk];
                }
            }
            row[k] = acc;
        }
        row[0] = -row[1..].iter().sum::<BigInt>();
        t.push(row);
    }
    t[n][0].clone()
}

/// Exact value of `formula_eval(id, n)`; errors below the formula's floor.
pub fn formula_eval(id: FormulaId, n: usize) -> Result<BigInt> {
    if n < id.floor() {
        return Err(Error::BelowFloor {
            id: id.to_string(),
            floor: id.floor(),
            n,
        });
    }
    let value = match id {
        FormulaId::CONST_ONE => BigInt::one(),
        FormulaId::FACT_SHIFT1 => factorial(n - 1),
        FormulaId::HALF_FACT => factorial(n) / 2,
        FormulaId::FACT_FROM3 => factorial(n),
        FormulaId::A094258 | FormulaId::K1_STARTN => factorial(n) - factorial(n - 1),
        FormulaId::A213167 => factorial(n) - factorial(n - 2),
        FormulaId::A000255 => {
            // a_m = (m−1)a_{m−1} + (m−2)a_{m−2}, a_0 = a_1 = 1
            let (mut prev, mut cur) = (BigInt::one(), BigInt::one());
            for m in 2..=n {
                let next = BigInt::from(m - 1) * &cur + BigInt::from(m - 2) * &prev;
                prev = std::mem::replace(&mut cur, next);
            }
            cur
        }
        FormulaId::LOG_GF => {
            let inner = Series::from_fn(n, |m| {
                if m == 0 {
                    BigRational::one()
                } else {
                    BigRational::from_integer(factorial(m - 1))
                }
            });
            let log = inner.log()?;
            let coeff = log.coeff(n)?;
            let scaled = coeff * BigRational::from_integer(n.into());
            if !scaled.is_integer() {
                return Err(Error::Series(format!("LOG_GF value at n={n} is not integral")));
            }
            scaled.to_integer()
        }
        FormulaId::SFP_TAIL => factorial(n) - factorial(n - 1) + sfp_free(n - 1),
        FormulaId::HARMONIC => {
            let mut acc = factorial(n);
            for i in 1..n {
                acc -= factorial(n - 1) / BigInt::from(i);
            }
            acc
        }
        FormulaId::POSMAX => {
            let mut acc = factorial(n);
            for i in 0..n.saturating_sub(1) {
                acc -= factorial(i) * factorial(n - 1 - i);
            }
            acc
        }
        FormulaId::STARTK => {
            let mut acc = factorial(n);
            for k in 1..n {
                acc -= factorial(k - 1) * factorial(n - k - 1);
            }
            acc
        }
        FormulaId::DSUM16 => {
            let mut acc = factorial(n);
            for i in 1..n {
                for l in 1..=i {
                    if n >= i + l {
                        acc -= factorial(i - l) * factorial(n - i - l) * factorial(l);
                    }
                }
            }
            acc
        }
        FormulaId::DSUM17 => {
            let mut acc = factorial(n);
            for k in 0..n.saturating_sub(1) {
                for j in 0..=k {
                    acc -= factorial(j) * factorial(k - j) * factorial(n - 2 - k);
                }
            }
            acc
        }
        FormulaId::RECUR89 => {
            // a_m = m·a_{m−1} − a_{m−2}, a_{−1} = 0, a_0 = 1
            let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
            for m in 1..=n {
                let next = BigInt::from(m) * &cur - &prev;
                prev = std::mem::replace(&mut cur, next);
            }
            cur
        }
        FormulaId::CONNECTED => {
            let f = Series::factorials(n);
            let one = Series::from_fn(n, |i| {
                if i == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            });
            one.sub(&one.div(&f)?).coeff_integer(n)?
        }
        FormulaId::CONJ_A101900 => a101900_t_n0(n).abs(),
        FormulaId::K1_LTR => BigInt::zero(),
        FormulaId::K1_SFP => sfp_free(n),
        FormulaId::K1_ALLSHADED => factorial(n) - BigInt::from(u8::from(n == 1)),
    };
    Ok(value)
}

/// One formula-versus-engine comparison row.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyRow {
    pub n: usize,
    pub formula: BigInt,
    pub engine: BigInt,
    pub matches: bool,
}

/// Comparison of one canonical pattern against the formula.
#[derive(Clone, Debug, Serialize)]
pub struct PatternVerification {
    pub pattern: String,
    pub rows: Vec<VerifyRow>,
}

/// Full report of `verify_formula`. Never asserts: a mismatch is data (see
/// [`FormulaId::DSUM16`]).
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub id: String,
    pub floor: usize,
    pub patterns: Vec<PatternVerification>,
    pub all_match: bool,
}

/// Compares `formula_eval` against engine counts for every canonical pattern
/// of `id`, for all `floor ≤ n ≤ max_n`.
pub fn verify_formula(id: FormulaId, max_n: usize) -> Result<VerifyReport> {
    if max_n > 9 {
        return Err(Error::NOutOfRange {
            what: "verify_formula",
            n: max_n,
            min: 1,
            max: 9,
        });
    }
    let mut patterns = Vec::new();
    let mut all_match = true;
    for text in id.canonical_patterns() {
        let p: MeshPattern = text.parse()?;
        let mut rows = Vec::new();
        for n in id.floor()..=max_n {
            let formula = formula_eval(id, n)?;
            let engine = count_avoiders(&p, n)?;
            let matches = formula == engine;
            all_match &= matches;
            rows.push(VerifyRow {
                n,
                formula,
                engine,
                matches,
            });
        }
        patterns.push(PatternVerification {
            pattern: text.to_string(),
            rows,
        });
    }
    Ok(VerifyReport {
        id: id.to_string(),
        floor: id.floor(),
        patterns,
        all_match,
    })
}

impl VerifyReport {
    /// Human-readable rendering of the report.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(out, "formula {} (floor n >= {})", self.id, self.floor).unwrap();
        for pv in &self.patterns {
            writeln!(out, "  pattern {}", pv.pattern).unwrap();
            for row in &pv.rows {
                writeln!(
                    out,
                    "    n={}: formula={} engine={} {}",
                    row.n,
                    row.formula,
                    row.engine,
                    if row.matches { "ok" } else { "MISMATCH" }
                )
                .unwrap();
            }
        }
        writeln!(out, "  result: {}", if self.all_match { "all match" } else { "mismatches present" })
            .unwrap();
        out
    }
}
