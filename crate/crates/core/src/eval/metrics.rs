use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Event {
    Received,
    Clicked,
    Downloaded,
}

impl Event {
    pub fn as_str(self) -> &'static str {
        match self {
            Event::Received => "received",
            Event::Clicked => "clicked",
            Event::Downloaded => "downloaded",
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Event {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "received" => Ok(Event::Received),
            "clicked" => Ok(Event::Clicked),
            "downloaded" => Ok(Event::Downloaded),
            other => Err(Error::InvalidParameter(format!("unknown event '{other}'"))),
        }
    }
}

/// The positive outcome a rate or AUC is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Outcome {
    #[default]
    Click,
    Download,
}

impl Outcome {
    pub fn event(self) -> Event {
        match self {
            Outcome::Click => Event::Clicked,
            Outcome::Download => Event::Downloaded,
        }
    }
}

/// Push feedback events keyed by external user key. Every user with a click
/// or download also has a `received` event.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeedbackLog {
    events: Vec<(String, Event)>,
}

impl FeedbackLog {
    pub fn new(events: Vec<(String, Event)>) -> Result<Self> {
        let received: HashSet<&str> = events
            .iter()
            .filter(|(_, e)| *e == Event::Received)
            .map(|(k, _)| k.as_str())
            .collect();
        if let Some((key, event)) = events
            .iter()
            .find(|(k, e)| *e != Event::Received && !received.contains(k.as_str()))
        {
            return Err(Error::InvalidFeedback(format!(
                "user '{key}' {event} without a received event"
            )));
        }
        Ok(FeedbackLog { events })
    }

    pub fn events(&self) -> &[(String, Event)] {
        &self.events
    }

    /// Distinct users with at least one `event`.
    pub fn users_with(&self, event: Event) -> impl Iterator<Item = &str> {
        let mut seen = HashSet::new();
        self.events
            .iter()
            .filter(move |(k, e)| *e == event && seen.insert(k.as_str()))
            .map(|(k, _)| k.as_str())
    }

    fn distinct(&self, event: Event) -> usize {
        self.users_with(event).count()
    }

    /// Reads `user_key<TAB>event` lines; `#` lines are comments.
    pub fn read_tsv<R: BufRead>(source: R) -> Result<Self> {
        let mut events = Vec::new();
        for (idx, line) in source.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, event) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(idx + 1, "expected `user_key<TAB>event`"))?;
            let event = event
                .trim()
                .parse()
                .map_err(|e: Error| Error::parse(idx + 1, e.to_string()))?;
            events.push((key.to_owned(), event));
        }
        FeedbackLog::new(events)
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        for (key, event) in &self.events {
            writeln!(out, "{key}\t{event}")?;
        }
        out.flush()?;
        Ok(())
    }
}

fn rate(log: &FeedbackLog, event: Event) -> Result<f64> {
    let received = log.distinct(Event::Received);
    if received == 0 {
        return Err(Error::NoReceivedUsers);
    }
    Ok(log.distinct(event) as f64 / received as f64)
}

/// Users who ever clicked over users who ever received.
pub fn ctr(log: &FeedbackLog) -> Result<f64> {
    rate(log, Event::Clicked)
}

/// Users who ever downloaded over users who ever received.
pub fn dtr(log: &FeedbackLog) -> Result<f64> {
    rate(log, Event::Downloaded)
}

/// Probability that a random positive outscores a random negative, ties
/// counting one half. Computed from midranks in `O(n log n)`.
pub fn auc(samples: &[(f64, bool)]) -> Result<f64> {
    let positives = samples.iter().filter(|(_, l)| *l).count();
    let negatives = samples.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::UndefinedAuc);
    }
    if samples.iter().any(|(s, _)| s.is_nan()) {
        return Err(Error::InvalidParameter("AUC scores must not be NaN".into()));
    }
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&a, &b| samples[a].0.total_cmp(&samples[b].0));

    // Sum of 1-based midranks of the positives.
    let mut rank_sum = 0.0;
    let mut start = 0;
    while start < order.len() {
        let score = samples[order[start]].0;
        let mut end = start;
        while end < order.len() && samples[order[end]].0 == score {
            end += 1;
        }
        let midrank = (start + 1 + end) as f64 / 2.0;
        let tied_pos = order[start..end].iter().filter(|&&i| samples[i].1).count();
        rank_sum += midrank * tied_pos as f64;
        start = end;
    }
    let p = positives as f64;
    let n = negatives as f64;
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * n))
}
