use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, VertexId};
use crate::scores::ScoreVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankedUser {
    pub user: VertexId,
    pub score: f64,
}

/// Users in descending score order, ties broken by ascending vertex ID.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub entries: Vec<RankedUser>,
    pub filtered_out: usize,
}

impl Ranking {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn users(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.entries.iter().map(|e| e.user)
    }
}

pub(crate) fn rank_order(a: &RankedUser, b: &RankedUser) -> Ordering {
    b.score.total_cmp(&a.score).then(a.user.cmp(&b.user))
}

/// Per-user flags and the subset of flags that disqualify a user.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FilterRules {
    pub excluded_flags: BTreeSet<String>,
    pub attributes: HashMap<String, BTreeSet<String>>,
}

impl FilterRules {
    pub fn new<I, S>(excluded_flags: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        FilterRules {
            excluded_flags: excluded_flags.into_iter().map(Into::into).collect(),
            attributes: HashMap::new(),
        }
    }

    pub fn flag(&mut self, user_key: impl Into<String>, flag: impl Into<String>) -> &mut Self {
        self.attributes.entry(user_key.into()).or_default().insert(flag.into());
        self
    }

    pub fn excludes(&self, user_key: &str) -> bool {
        self.attributes
            .get(user_key)
            .is_some_and(|flags| flags.iter().any(|f| self.excluded_flags.contains(f)))
    }

    /// Reads `user_key<TAB>flag1,flag2,...` lines; `#` lines are comments.
    pub fn read_attributes<R: BufRead>(&mut self, source: R) -> Result<()> {
        for (idx, line) in source.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, flags) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(idx + 1, "expected `user_key<TAB>flags`"))?;
            if key.is_empty() {
                return Err(Error::parse(idx + 1, "empty user key"));
            }
            for flag in flags.split(',').map(str::trim).filter(|f| !f.is_empty()) {
                self.flag(key, flag);
            }
        }
        Ok(())
    }
}

/// Orders user vertices by score. Item vertices never appear.
pub fn rank_users(g: &BipartiteGraph, scores: &ScoreVector, rules: &FilterRules) -> Result<Ranking> {
    if scores.len() != g.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: g.num_vertices(),
            actual: scores.len(),
        });
    }
    let mut filtered_out = 0;
    let mut entries = Vec::with_capacity(g.num_users());
    for user in g.users() {
        if rules.excludes(g.key(user)) {
            filtered_out += 1;
            continue;
        }
        entries.push(RankedUser {
            user,
            score: scores.get(user),
        });
    }
    entries.sort_by(rank_order);
    Ok(Ranking { entries, filtered_out })
}
