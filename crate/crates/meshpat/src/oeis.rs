//! OEIS lookup: parsing the `stripped` dump format, offline matching with
//! bounded leading-term shifts, and an optional online search.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One OEIS sequence: an `A`-number and its listed terms.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct OeisEntry {
    /// `A` followed by six digits, e.g. `A000142`.
    pub id: String,
    pub terms: Vec<BigInt>,
}

impl OeisEntry {
    /// Renders the entry back into a `stripped`-format line.
    pub fn to_stripped_line(&self) -> String {
        let terms: String = self.terms.iter().map(|t| format!("{t},")).collect();
        format!("{} ,{terms}", self.id)
    }
}

impl FromStr for OeisEntry {
    type Err = Error;

    /// Parses one `stripped`-format line: `A000142 ,1,1,2,6,...,`.
    fn from_str(line: &str) -> Result<Self> {
        let err = |msg: &str| Error::MalformedLine {
            line: 0,
            msg: msg.to_string(),
        };
        let (id, rest) = line
            .split_once(' ')
            .ok_or_else(|| err("expected an A-number followed by a space"))?;
        if id.len() != 7 || !id.starts_with('A') || !id[1..].bytes().all(|b| b.is_ascii_digit()) {
            return Err(err(&format!("bad A-number {id:?}")));
        }
        let rest = rest.trim();
        let body = rest
            .strip_prefix(',')
            .ok_or_else(|| err("expected a leading comma before the terms"))?;
        let mut terms = Vec::new();
        for piece in body.split(',') {
            if piece.is_empty() {
                continue; // trailing comma
            }
            let term = piece
                .parse::<BigInt>()
                .map_err(|_| err(&format!("bad term {piece:?}")))?;
            terms.push(term);
        }
        if terms.is_empty() {
            return Err(err("no terms"));
        }
        Ok(OeisEntry {
            id: id.to_string(),
            terms,
        })
    }
}

/// A skipped line from a lenient [`load_stripped`] run.
#[derive(Clone, Debug)]
pub struct LineIssue {
    /// 1-based line number.
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for LineIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

/// Parses `stripped`-format text. Comment lines (`#`) and blank lines are
/// ignored. In strict mode the first malformed line is an error; otherwise
/// malformed lines are collected as issues and skipped.
pub fn parse_stripped(text: &str, strict: bool) -> Result<(Vec<OeisEntry>, Vec<LineIssue>)> {
    let mut entries = Vec::new();
    let mut issues = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.parse::<OeisEntry>() {
            Ok(entry) => entries.push(entry),
            Err(Error::MalformedLine { msg, .. }) => {
                if strict {
                    return Err(Error::MalformedLine { line: line_no, msg });
                }
                issues.push(LineIssue { line: line_no, msg });
            }
            Err(e) => return Err(e),
        }
    }
    Ok((entries, issues))
}

/// Loads a `stripped`-format file from disk; see [`parse_stripped`].
pub fn load_stripped(path: &Path, strict: bool) -> Result<(Vec<OeisEntry>, Vec<LineIssue>)> {
    let text = std::fs::read_to_string(path)?;
    parse_stripped(&text, strict)
}

/// The bundled snapshot covering the sequences cited in the length-2 tables.
pub fn bundled_snapshot() -> Vec<OeisEntry> {
    let (entries, issues) =
        parse_stripped(include_str!("../data/oeis_snapshot.txt"), true).expect("snapshot parses");
    debug_assert!(issues.is_empty());
    entries
}

/// A match of a query sequence against a database entry: the query matched
/// with its first `seq_shift` terms dropped against the entry with its first
/// `entry_shift` terms dropped.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SeqMatch {
    pub id: String,
    pub seq_shift: usize,
    pub entry_shift: usize,
}

/// Minimum number of overlapping equal terms for a match to count.
pub const MIN_OVERLAP: usize = 6;

/// Matches `seq` against the database. Leading terms may be dropped
/// independently on both sides, each by at most `max_shift`; the remaining
/// overlap must be at least [`MIN_OVERLAP`] terms and agree exactly. Matches
/// are ranked by total shift then id, one per entry (its best shift pair).
pub fn match_sequence(seq: &[u64], db: &[OeisEntry], max_shift: usize) -> Vec<SeqMatch> {
    let seq: Vec<BigInt> = seq.iter().map(|&t| BigInt::from(t)).collect();
    let mut out: Vec<SeqMatch> = Vec::new();
    for entry in db {
        let mut best: Option<(usize, usize)> = None;
        for a in 0..=max_shift.min(seq.len()) {
            for b in 0..=max_shift.min(entry.terms.len()) {
                let s = &seq[a..];
                let e = &entry.terms[b..];
                let overlap = s.len().min(e.len());
                if overlap < MIN_OVERLAP {
                    continue;
                }
                if s[..overlap] == e[..overlap]
                    && best.map_or(true, |(ba, bb)| a + b < ba + bb)
                {
                    best = Some((a, b));
                }
            }
        }
        if let Some((seq_shift, entry_shift)) = best {
            out.push(SeqMatch {
                id: entry.id.clone(),
                seq_shift,
                entry_shift,
            });
        }
    }
    out.sort_by(|x, y| {
        (x.seq_shift + x.entry_shift, &x.id).cmp(&(y.seq_shift + y.entry_shift, &y.id))
    });
    out
}

#[cfg(feature = "online")]
mod online {
    use super::*;

    #[derive(Deserialize)]
    struct SearchResult {
        number: u64,
    }

    /// The search endpoint has returned both a bare array and an object with
    /// a `results` field over time; accept either.
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum SearchResponse {
        Bare(Vec<SearchResult>),
        Wrapped { results: Option<Vec<SearchResult>> },
    }

    /// Queries the OEIS search endpoint for the given terms and returns the
    /// matching A-numbers. Retries once on a 429 response.
    pub fn fetch_remote(seq: &[u64]) -> Result<Vec<String>> {
        let terms: Vec<String> = seq.iter().map(|t| t.to_string()).collect();
        let url = format!("https://oeis.org/search?q={}&fmt=json", terms.join(","));
        let client = reqwest::blocking::Client::builder()
            .timeout(std::time::Duration::from_secs(30))
            .build()
            .map_err(|e| Error::Online(e.to_string()))?;
        let mut response = client
            .get(&url)
            .send()
            .map_err(|e| Error::Online(e.to_string()))?;
        if response.status().as_u16() == 429 {
            std::thread::sleep(std::time::Duration::from_secs(2));
            response = client
                .get(&url)
                .send()
                .map_err(|e| Error::Online(e.to_string()))?;
        }
        if !response.status().is_success() {
            return Err(Error::Online(format!("search returned {}", response.status())));
        }
        let response: SearchResponse = response
            .json()
            .map_err(|e| Error::Online(e.to_string()))?;
        let results = match response {
            SearchResponse::Bare(results) => results,
            SearchResponse::Wrapped { results } => results.unwrap_or_default(),
        };
        Ok(results
            .into_iter()
            .map(|r| format!("A{:06}", r.number))
            .collect())
    }
}

#[cfg(feature = "online")]
pub use online::fetch_remote;

/// Online search is unavailable in this build; enable the `online` feature.
#[cfg(not(feature = "online"))]
pub fn fetch_remote(_seq: &[u64]) -> Result<Vec<String>> {
    Err(Error::Online(
        "this build has no online support (enable the 'online' feature)".into(),
    ))
}
