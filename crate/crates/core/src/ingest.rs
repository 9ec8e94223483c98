//! Interaction ingestion and preprocessing.
//!
//! Three line formats are understood: a plain edge list, the tab-separated
//! MovieLens 100k layout (`u.data`) and the `::`-separated layout used by the
//! larger MovieLens releases (`ratings.dat`). Ratings are carried as weights;
//! the graph builder binarizes them.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::BufRead;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct InteractionRecord {
    pub user_key: String,
    pub item_key: String,
    /// Non-negative. A zero weight declares both endpoints without creating an edge.
    pub weight: f64,
    pub timestamp: Option<i64>,
}

impl InteractionRecord {
    pub fn new(user_key: impl Into<String>, item_key: impl Into<String>) -> Self {
        InteractionRecord {
            user_key: user_key.into(),
            item_key: item_key.into(),
            weight: 1.0,
            timestamp: None,
        }
    }

    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }

    pub fn is_edge(&self) -> bool {
        self.weight > 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    /// `user<TAB>item[<TAB>weight]`, `#` comment lines ignored.
    EdgeTsv,
    /// `user<TAB>item<TAB>rating<TAB>timestamp`
    MovielensTab,
    /// `user::item::rating::timestamp`
    MovielensDoubleColon,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge_tsv" => Ok(InputFormat::EdgeTsv),
            "movielens_tab" => Ok(InputFormat::MovielensTab),
            "movielens_double_colon" => Ok(InputFormat::MovielensDoubleColon),
            other => Err(Error::InvalidParameter(format!("unknown input format '{other}'"))),
        }
    }
}

/// Parses every data line of `source` into a record. Blank lines are skipped in
/// all formats; `#` comments only in `edge_tsv`.
pub fn ingest_interactions<R: BufRead>(source: R, format: InputFormat) -> Result<Vec<InteractionRecord>> {
    let mut records = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() {
            continue;
        }
        let record = match format {
            InputFormat::EdgeTsv => {
                if line.starts_with('#') {
                    continue;
                }
                parse_edge_line(line, line_no)?
            }
            InputFormat::MovielensTab => parse_rating_line(line.split('\t').collect(), line_no)?,
            InputFormat::MovielensDoubleColon => parse_rating_line(line.split("::").collect(), line_no)?,
        };
        records.push(record);
    }
    Ok(records)
}

fn parse_edge_line(line: &str, line_no: usize) -> Result<InteractionRecord> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 2 && fields.len() != 3 {
        return Err(Error::parse(
            line_no,
            format!("expected 2 or 3 tab-separated fields, found {}", fields.len()),
        ));
    }
    let (user_key, item_key) = keys(fields[0], fields[1], line_no)?;
    let weight = match fields.get(2) {
        Some(w) => parse_weight(w, line_no)?,
        None => 1.0,
    };
    Ok(InteractionRecord {
        user_key,
        item_key,
        weight,
        timestamp: None,
    })
}

fn parse_rating_line(fields: Vec<&str>, line_no: usize) -> Result<InteractionRecord> {
    if fields.len() != 4 {
        return Err(Error::parse(
            line_no,
            format!(
                "expected 4 fields (user, item, rating, timestamp), found {}",
                fields.len()
            ),
        ));
    }
    let (user_key, item_key) = keys(fields[0], fields[1], line_no)?;
    let weight = parse_weight(fields[2], line_no)?;
    let timestamp = fields[3]
        .trim()
        .parse::<i64>()
        .map_err(|e| Error::parse(line_no, format!("bad timestamp '{}': {e}", fields[3])))?;
    Ok(InteractionRecord {
        user_key,
        item_key,
        weight,
        timestamp: Some(timestamp),
    })
}

fn keys(user: &str, item: &str, line_no: usize) -> Result<(String, String)> {
    let (user, item) = (user.trim(), item.trim());
    if user.is_empty() || item.is_empty() {
        return Err(Error::parse(line_no, "empty user or item key"));
    }
    Ok((user.to_owned(), item.to_owned()))
}

fn parse_weight(raw: &str, line_no: usize) -> Result<f64> {
    let w: f64 = raw
        .trim()
        .parse()
        .map_err(|e| Error::parse(line_no, format!("bad weight '{raw}': {e}")))?;
    if !w.is_finite() || w < 0.0 {
        return Err(Error::parse(
            line_no,
            format!("weight must be finite and non-negative, got {w}"),
        ));
    }
    Ok(w)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreprocessRules {
    pub item_blocklist: BTreeSet<String>,
    /// Items connected to more than this fraction of users are dropped. In (0, 1].
    pub max_item_degree_fraction: f64,
    pub min_user_degree: usize,
    pub drop_isolated: bool,
}

impl Default for PreprocessRules {
    fn default() -> Self {
        PreprocessRules {
            item_blocklist: BTreeSet::new(),
            max_item_degree_fraction: 1.0,
            min_user_degree: 0,
            drop_isolated: true,
        }
    }
}

impl PreprocessRules {
    pub fn validate(&self) -> Result<()> {
        let f = self.max_item_degree_fraction;
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "max_item_degree_fraction must lie in (0, 1], got {f}"
            )));
        }
        Ok(())
    }
}

/// Applies the filtering rules in a fixed order: duplicate collapse, item
/// blocklist, popularity cap, minimum user degree, then isolated-vertex removal.
///
/// Each rule runs once; removing users in the last step does not re-trigger the
/// popularity check.
pub fn apply_preprocess(records: Vec<InteractionRecord>, rules: &PreprocessRules) -> Result<Vec<InteractionRecord>> {
    rules.validate()?;

    let mut records = dedup(records);

    records.retain(|r| !rules.item_blocklist.contains(&r.item_key));

    let distinct_users = records
        .iter()
        .filter(|r| r.is_edge())
        .map(|r| r.user_key.as_str())
        .collect::<HashSet<_>>()
        .len();
    let cap = rules.max_item_degree_fraction * distinct_users as f64;
    let item_degree = count_by(&records, |r| r.item_key.as_str());
    let popular: HashSet<String> = item_degree
        .into_iter()
        .filter(|&(_, deg)| deg as f64 > cap)
        .map(|(k, _)| k.to_owned())
        .collect();
    records.retain(|r| !popular.contains(&r.item_key));

    if rules.min_user_degree > 0 {
        let user_degree = count_by(&records, |r| r.user_key.as_str());
        let sparse: HashSet<String> = records
            .iter()
            .map(|r| r.user_key.as_str())
            .filter(|u| user_degree.get(u).copied().unwrap_or(0) < rules.min_user_degree)
            .map(str::to_owned)
            .collect();
        records.retain(|r| !sparse.contains(&r.user_key));
    }

    if rules.drop_isolated {
        records.retain(InteractionRecord::is_edge);
    }
    Ok(records)
}

/// Keeps the first occurrence of each (user, item) pair, preferring a record
/// that carries an edge over a zero-weight declaration.
fn dedup(records: Vec<InteractionRecord>) -> Vec<InteractionRecord> {
    let mut slot: HashMap<(String, String), usize> = HashMap::with_capacity(records.len());
    let mut out: Vec<InteractionRecord> = Vec::with_capacity(records.len());
    for r in records {
        let key = (r.user_key.clone(), r.item_key.clone());
        match slot.get(&key) {
            Some(&i) => {
                if !out[i].is_edge() && r.is_edge() {
                    out[i] = r;
                }
            }
            None => {
                slot.insert(key, out.len());
                out.push(r);
            }
        }
    }
    out
}

fn count_by<'a>(
    records: &'a [InteractionRecord],
    key: impl Fn(&'a InteractionRecord) -> &'a str,
) -> HashMap<&'a str, usize> {
    let mut counts = HashMap::new();
    for r in records.iter().filter(|r| r.is_edge()) {
        *counts.entry(key(r)).or_insert(0) += 1;
    }
    counts
}
