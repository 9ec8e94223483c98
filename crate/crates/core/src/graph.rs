//! Immutable bipartite user-item graph.
//!
//! Vertices are numbered users first: `1..=|U|` are users and
//! `|U|+1..=|U|+|A|` are items. Adjacency is stored in compressed sparse row
//! form with each row sorted, so `neighbors(i)` is a contiguous slice and the
//! degree of `i` is its length.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::ingest::InteractionRecord;

/// 1-based vertex identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(u32);

impl VertexId {
    /// Panics on 0; IDs start at 1.
    pub fn new(id: u32) -> Self {
        assert!(id > 0, "vertex IDs start at 1");
        VertexId(id)
    }

    pub fn from_index(index: usize) -> Self {
        VertexId(u32::try_from(index + 1).expect("vertex index overflows u32"))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Zero-based position in per-vertex vectors.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    User,
    Item,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    num_users: usize,
    num_items: usize,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    user_keys: Vec<String>,
    item_keys: Vec<String>,
    user_lookup: HashMap<String, VertexId>,
    item_lookup: HashMap<String, VertexId>,
}

impl BipartiteGraph {
    /// Builds a graph from zero-based `(user, item)` pairs, each side indexed
    /// from 0. Duplicate pairs collapse. External keys are synthesized as
    /// `u<k>` and `i<k>` with `k` 1-based within the side.
    pub fn from_edges<I>(num_users: usize, num_items: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let user_keys = (1..=num_users).map(|k| format!("u{k}")).collect();
        let item_keys = (1..=num_items).map(|k| format!("i{k}")).collect();
        Self::from_parts(user_keys, item_keys, edges)
    }

    fn from_parts<I>(user_keys: Vec<String>, item_keys: Vec<String>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let num_users = user_keys.len();
        let num_items = item_keys.len();
        let n = num_users + num_items;
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for (u, i) in edges {
            if u >= num_users {
                return Err(Error::VertexOutOfBounds {
                    id: u as u64 + 1,
                    num_vertices: n,
                });
            }
            if i >= num_items {
                return Err(Error::VertexOutOfBounds {
                    id: (num_users + i) as u64 + 1,
                    num_vertices: n,
                });
            }
            pairs.push((u, num_users + i));
        }
        pairs.sort_unstable();
        pairs.dedup();

        let mut degree = vec![0usize; n];
        for &(u, i) in &pairs {
            degree[u] += 1;
            degree[i] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0u32; offsets[n]];
        // Pairs are sorted by user then item, so user rows fill in ascending
        // order; item rows receive users in ascending order too.
        for &(u, i) in &pairs {
            targets[cursor[u]] = i as u32;
            cursor[u] += 1;
            targets[cursor[i]] = u as u32;
            cursor[i] += 1;
        }

        let user_lookup = user_keys
            .iter()
            .enumerate()
            .map(|(k, key)| (key.clone(), VertexId::from_index(k)))
            .collect();
        let item_lookup = item_keys
            .iter()
            .enumerate()
            .map(|(k, key)| (key.clone(), VertexId::from_index(num_users + k)))
            .collect();

        Ok(BipartiteGraph {
            num_users,
            num_items,
            offsets,
            targets,
            user_keys,
            item_keys,
            user_lookup,
            item_lookup,
        })
    }

    pub fn num_users(&self) -> usize {
        self.num_users
    }

    pub fn num_items(&self) -> usize {
        self.num_items
    }

    pub fn num_vertices(&self) -> usize {
        self.num_users + self.num_items
    }

    pub fn num_edges(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn check(&self, v: VertexId) -> Result<()> {
        if v.index() < self.num_vertices() {
            Ok(())
        } else {
            Err(Error::VertexOutOfBounds {
                id: v.get() as u64,
                num_vertices: self.num_vertices(),
            })
        }
    }

    pub fn side(&self, v: VertexId) -> Side {
        if v.index() < self.num_users {
            Side::User
        } else {
            Side::Item
        }
    }

    pub fn is_user(&self, v: VertexId) -> bool {
        self.side(v) == Side::User
    }

    pub fn users(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.num_users).map(VertexId::from_index)
    }

    pub fn items(&self) -> impl Iterator<Item = VertexId> + '_ {
        (self.num_users..self.num_vertices()).map(VertexId::from_index)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.num_vertices()).map(VertexId::from_index)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.degree_at(v.index())
    }

    /// Degree by zero-based index.
    #[inline]
    pub fn degree_at(&self, index: usize) -> usize {
        self.offsets[index + 1] - self.offsets[index]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.num_vertices()).map(|i| self.degree_at(i)).collect()
    }

    /// Sorted zero-based neighbor indices of the vertex at `index`.
    #[inline]
    pub fn neighbor_indices(&self, index: usize) -> &[u32] {
        &self.targets[self.offsets[index]..self.offsets[index + 1]]
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.neighbor_indices(v.index())
            .iter()
            .map(|&t| VertexId::from_index(t as usize))
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.neighbor_indices(a.index())
            .binary_search(&(b.index() as u32))
            .is_ok()
    }

    /// Random-walk transition probability: `1/d_i` along an edge, else 0.
    pub fn transition_prob(&self, i: VertexId, j: VertexId) -> Result<f64> {
        self.check(i)?;
        self.check(j)?;
        if self.has_edge(i, j) {
            Ok(1.0 / self.degree(i) as f64)
        } else {
            Ok(0.0)
        }
    }

    pub fn key(&self, v: VertexId) -> &str {
        let idx = v.index();
        if idx < self.num_users {
            &self.user_keys[idx]
        } else {
            &self.item_keys[idx - self.num_users]
        }
    }

    pub fn user_by_key(&self, key: &str) -> Option<VertexId> {
        self.user_lookup.get(key).copied()
    }

    pub fn item_by_key(&self, key: &str) -> Option<VertexId> {
        self.item_lookup.get(key).copied()
    }

    /// Edges as `(user, item)` pairs in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.users().flat_map(move |u| self.neighbors(u).map(move |i| (u, i)))
    }

    /// Writes the `#parw-graph v1` text form: a header, one `#user`/`#item`
    /// line per vertex mapping its ID to its external key, then the edge list
    /// as `user_id<TAB>item_id` in ascending order.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "#parw-graph v1 users={} items={} edges={}",
            self.num_users,
            self.num_items,
            self.num_edges()
        )?;
        for v in self.vertices() {
            let key = self.key(v);
            if key.contains(['\t', '\n', '\r']) {
                return Err(Error::InvalidParameter(format!("key {key:?} cannot be serialized")));
            }
            let tag = if self.is_user(v) { "user" } else { "item" };
            writeln!(out, "#{tag}\t{}\t{key}", v.get())?;
        }
        for (u, i) in self.edges() {
            writeln!(out, "{}\t{}", u.get(), i.get())?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_tsv<R: BufRead>(source: R) -> Result<Self> {
        let mut lines = source.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::EmptyGraph)?;
        let header = header?;
        let (users, items, edges) = parse_header(&header)?;

        let mut user_keys = Vec::with_capacity(users);
        let mut item_keys = Vec::with_capacity(items);
        let mut pairs = Vec::with_capacity(edges);
        for (idx, line) in lines {
            let line_no = idx + 1;
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            match fields.as_slice() {
                ["#user", id, key] | ["#item", id, key] => {
                    let id: usize = id.parse().map_err(|_| Error::parse(line_no, "bad vertex id"))?;
                    let is_user = fields[0] == "#user";
                    let expected = if is_user {
                        user_keys.len() + 1
                    } else {
                        users + item_keys.len() + 1
                    };
                    if id != expected {
                        return Err(Error::parse(line_no, format!("expected vertex {expected}, found {id}")));
                    }
                    if is_user {
                        user_keys.push((*key).to_owned());
                    } else {
                        item_keys.push((*key).to_owned());
                    }
                }
                [comment, ..] if comment.starts_with('#') => {}
                [u, i] => {
                    let u: usize = u.parse().map_err(|_| Error::parse(line_no, "bad user id"))?;
                    let i: usize = i.parse().map_err(|_| Error::parse(line_no, "bad item id"))?;
                    if u == 0 || u > users || i <= users || i > users + items {
                        return Err(Error::parse(line_no, format!("edge ({u}, {i}) is not user-item")));
                    }
                    pairs.push((u - 1, i - users - 1));
                }
                _ => return Err(Error::parse(line_no, "expected `user_id<TAB>item_id`")),
            }
        }
        if user_keys.len() != users || item_keys.len() != items {
            return Err(Error::parse(1, "vertex key lines do not match header counts"));
        }
        let graph = Self::from_parts(user_keys, item_keys, pairs)?;
        if graph.num_edges() != edges {
            return Err(Error::parse(
                1,
                format!("header declares {edges} edges, file has {}", graph.num_edges()),
            ));
        }
        Ok(graph)
    }
}

fn parse_header(line: &str) -> Result<(usize, usize, usize)> {
    let rest = line
        .strip_prefix("#parw-graph v1 ")
        .ok_or_else(|| Error::parse(1, "missing `#parw-graph v1` header"))?;
    let mut values = [None; 3];
    for part in rest.split_whitespace() {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::parse(1, format!("bad header field '{part}'")))?;
        let slot = match k {
            "users" => 0,
            "items" => 1,
            "edges" => 2,
            _ => return Err(Error::parse(1, format!("unknown header field '{k}'"))),
        };
        values[slot] = Some(
            v.parse::<usize>()
                .map_err(|_| Error::parse(1, format!("bad count '{v}'")))?,
        );
    }
    match values {
        [Some(u), Some(i), Some(e)] => Ok((u, i, e)),
        _ => Err(Error::parse(1, "header needs users, items and edges")),
    }
}

/// Builds the graph from preprocessed records.
///
/// Each side is numbered by sorting its external keys lexicographically.
/// Every key that appears in a record becomes a vertex; only records with
/// positive weight become edges, and duplicates collapse to one edge.
pub fn build_graph(records: &[InteractionRecord]) -> Result<BipartiteGraph> {
    if records.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut user_keys: Vec<String> = records.iter().map(|r| r.user_key.clone()).collect();
    let mut item_keys: Vec<String> = records.iter().map(|r| r.item_key.clone()).collect();
    user_keys.sort_unstable();
    user_keys.dedup();
    item_keys.sort_unstable();
    item_keys.dedup();

    let pairs: Vec<(usize, usize)> = records
        .iter()
        .filter(|r| r.is_edge())
        .map(|r| {
            let u = user_keys.binary_search(&r.user_key).expect("user key collected");
            let i = item_keys.binary_search(&r.item_key).expect("item key collected");
            (u, i)
        })
        .collect();
    BipartiteGraph::from_parts(user_keys, item_keys, pairs)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// U1-{A1,A2,A3}, U2-{A2}, U3-{A2,A3,A4,A5}.
    pub(crate) fn toy_graph() -> BipartiteGraph {
        let records: Vec<_> = [
            ("U1", "A1"),
            ("U1", "A2"),
            ("U1", "A3"),
            ("U2", "A2"),
            ("U3", "A2"),
            ("U3", "A3"),
            ("U3", "A4"),
            ("U3", "A5"),
        ]
        .into_iter()
        .map(|(u, i)| InteractionRecord::new(u, i))
        .collect();
        build_graph(&records).unwrap()
    }

    fn v(id: u32) -> VertexId {
        VertexId::new(id)
    }

    #[test]
    fn toy_degrees() {
        let g = toy_graph();
        assert_eq!(g.num_vertices(), 8);
        assert_eq!(g.degrees(), vec![3, 1, 4, 1, 3, 2, 1, 1]);
        assert_eq!(g.user_by_key("U2"), Some(v(2)));
        assert_eq!(g.item_by_key("A2"), Some(v(5)));
    }

    #[test]
    fn toy_transition_rows() {
        let g = toy_graph();
        let row = |i: u32| -> Vec<f64> { (1..=8).map(|j| g.transition_prob(v(i), v(j)).unwrap()).collect() };
        let third = 1.0 / 3.0;
        assert_eq!(row(1), vec![0.0, 0.0, 0.0, third, third, third, 0.0, 0.0]);
        assert_eq!(row(2), vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(row(3), vec![0.0, 0.0, 0.0, 0.0, 0.25, 0.25, 0.25, 0.25]);
        assert_eq!(row(4), vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(row(5), vec![third, third, third, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(row(6), vec![0.5, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(row(7), vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        // The eighth row (A5) is only adjacent to U3.
        assert_eq!(row(8), vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(g.transition_prob(v(1), v(2)).unwrap(), 0.0);
        assert!(matches!(
            g.transition_prob(v(9), v(1)),
            Err(Error::VertexOutOfBounds { id: 9, .. })
        ));
    }

    #[test]
    fn single_record() {
        let g = build_graph(&[InteractionRecord::new("u", "i")]).unwrap();
        assert_eq!(g.num_vertices(), 2);
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.degrees(), vec![1, 1]);
    }

    #[test]
    fn complete_bipartite_degrees() {
        let mut records = Vec::new();
        for u in ["a", "b", "c"] {
            for i in ["x", "y", "z"] {
                records.push(InteractionRecord::new(u, i));
            }
        }
        let g = build_graph(&records).unwrap();
        // recount from the raw records
        for vtx in g.vertices() {
            let key = g.key(vtx);
            let count = records
                .iter()
                .filter(|r| {
                    if g.is_user(vtx) {
                        r.user_key == key
                    } else {
                        r.item_key == key
                    }
                })
                .count();
            assert_eq!(g.degree(vtx), count);
            assert_eq!(count, 3);
        }
    }

    #[test]
    fn duplicate_records_one_edge() {
        let records = vec![
            InteractionRecord::new("u", "i"),
            InteractionRecord::new("u", "i"),
            InteractionRecord::new("u", "j"),
        ];
        let g = build_graph(&records).unwrap();
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.degree(g.user_by_key("u").unwrap()), 2);
    }

    #[test]
    fn empty_records() {
        let err = build_graph(&[]).unwrap_err();
        assert_eq!(err.to_string(), "empty graph");
    }

    #[test]
    fn zero_weight_declares_isolated_vertex() {
        let records = vec![
            InteractionRecord::new("u1", "a"),
            InteractionRecord::new("u2", "a").with_weight(0.0),
        ];
        let g = build_graph(&records).unwrap();
        assert_eq!(g.num_users(), 2);
        assert_eq!(g.degree(g.user_by_key("u2").unwrap()), 0);
    }

    #[test]
    fn keys_numbered_lexicographically() {
        let records = vec![InteractionRecord::new("b", "z"), InteractionRecord::new("a", "y")];
        let g = build_graph(&records).unwrap();
        assert_eq!(g.key(v(1)), "a");
        assert_eq!(g.key(v(2)), "b");
        assert_eq!(g.key(v(3)), "y");
        assert_eq!(g.key(v(4)), "z");
    }

    #[test]
    fn serialization_round_trip() {
        let g = toy_graph();
        let mut buf = Vec::new();
        g.write_tsv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("#parw-graph v1 users=3 items=5 edges=8\n"));
        assert!(text.ends_with("3\t8\n"));
        let back = BipartiteGraph::read_tsv(buf.as_slice()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn read_rejects_non_bipartite_edge() {
        let text = "#parw-graph v1 users=2 items=1 edges=1\n#user\t1\ta\n#user\t2\tb\n#item\t3\tx\n1\t2\n";
        assert!(BipartiteGraph::read_tsv(text.as_bytes()).is_err());
    }
}
