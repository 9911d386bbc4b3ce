//! Weighted undirected mention graph, activity/popularity filtering,
//! modularity scoring and fast greedy (CNM) community detection.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::corpus::Corpus;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph is empty")]
    EmptyGraph,
    #[error("vertex {0:?} has no community assignment")]
    UncoveredVertex(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VertexStats {
    pub tweets_sent: u64,
    pub times_mentioned: u64,
}

/// Undirected graph of users; edge weights count mention pairs. Self-loops
/// are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MentionGraph {
    vertices: BTreeMap<String, VertexStats>,
    // key is the ordered pair (min, max)
    edges: BTreeMap<(String, String), u64>,
}

impl MentionGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, handle: &str) -> &mut VertexStats {
        self.vertices.entry(handle.to_string()).or_default()
    }

    pub fn add_mention(&mut self, from: &str, to: &str, weight: u64) {
        if from == to || weight == 0 {
            return;
        }
        self.add_vertex(from);
        self.add_vertex(to);
        let key = if from < to {
            (from.to_string(), to.to_string())
        } else {
            (to.to_string(), from.to_string())
        };
        *self.edges.entry(key).or_insert(0) += weight;
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.values().sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (&str, &VertexStats)> {
        self.vertices.iter().map(|(h, s)| (h.as_str(), s))
    }

    pub fn contains_vertex(&self, handle: &str) -> bool {
        self.vertices.contains_key(handle)
    }

    pub fn stats(&self, handle: &str) -> Option<&VertexStats> {
        self.vertices.get(handle)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, u64)> {
        self.edges
            .iter()
            .map(|((a, b), w)| (a.as_str(), b.as_str(), *w))
    }

    pub fn weight(&self, a: &str, b: &str) -> u64 {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges
            .get(&(key.0.to_string(), key.1.to_string()))
            .copied()
            .unwrap_or(0)
    }

    /// Induced subgraph on the vertices accepted by `keep`; per-vertex stats
    /// carry over unchanged.
    pub fn induced<F: Fn(&str, &VertexStats) -> bool>(&self, keep: F) -> MentionGraph {
        let vertices: BTreeMap<String, VertexStats> = self
            .vertices
            .iter()
            .filter(|(h, s)| keep(h, s))
            .map(|(h, s)| (h.clone(), *s))
            .collect();
        let edges = self
            .edges
            .iter()
            .filter(|((a, b), _)| vertices.contains_key(a) && vertices.contains_key(b))
            .map(|(k, w)| (k.clone(), *w))
            .collect();
        MentionGraph { vertices, edges }
    }
}

/// Vertices are authors and mentioned users; each mention occurrence of
/// another user adds one to the edge weight. Self-mentions count in the
/// stats but produce no edge.
pub fn build_mention_graph(corpus: &Corpus) -> MentionGraph {
    let mut g = MentionGraph::new();
    for msg in corpus.messages() {
        g.add_vertex(&msg.author).tweets_sent += 1;
        for mention in &msg.mentions {
            g.add_vertex(mention).times_mentioned += 1;
            g.add_mention(&msg.author, mention, 1);
        }
    }
    g
}

/// Keep vertices that sent at least `min_tweets` tweets OR were mentioned
/// at least `min_mentions` times.
pub fn filter_active(g: &MentionGraph, min_tweets: u64, min_mentions: u64) -> MentionGraph {
    g.induced(|_, s| s.tweets_sent >= min_tweets || s.times_mentioned >= min_mentions)
}

/// Drop vertices mentioned `min_mentions` times or more.
pub fn remove_popular(g: &MentionGraph, min_mentions: u64) -> MentionGraph {
    g.induced(|_, s| s.times_mentioned < min_mentions)
}

/// Vertex-to-community assignment with its modularity.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub assignment: BTreeMap<String, usize>,
    pub modularity: f64,
}

impl Partition {
    pub fn community_count(&self) -> usize {
        self.assignment.values().max().map_or(0, |m| m + 1)
    }
}

/// Weighted modularity Q = Σ_c [intra_c / W − (deg_c / 2W)²] with W the
/// total edge weight. An edgeless graph scores 0.
pub fn modularity_score(
    g: &MentionGraph,
    assignment: &BTreeMap<String, usize>,
) -> Result<f64, GraphError> {
    for (v, _) in g.vertices() {
        if !assignment.contains_key(v) {
            return Err(GraphError::UncoveredVertex(v.to_string()));
        }
    }
    let w_total = g.total_weight() as f64;
    if w_total == 0.0 {
        return Ok(0.0);
    }
    let n_comms = assignment.values().max().map_or(0, |m| m + 1);
    let mut intra = vec![0.0f64; n_comms];
    let mut degree = vec![0.0f64; n_comms];
    for (a, b, w) in g.edges() {
        let (ca, cb) = (assignment[a], assignment[b]);
        degree[ca] += w as f64;
        degree[cb] += w as f64;
        if ca == cb {
            intra[ca] += w as f64;
        }
    }
    let mut q = 0.0;
    for c in 0..n_comms {
        q += intra[c] / w_total - (degree[c] / (2.0 * w_total)).powi(2);
    }
    Ok(q)
}

/// Modularity after each merge of the greedy agglomeration, for replay
/// checks.
#[derive(Debug, Clone, Default)]
pub struct MergeTrace {
    pub initial_q: f64,
    pub q_after_merge: Vec<f64>,
}

/// Fast greedy modularity optimization: start from singletons, repeatedly
/// merge the connected pair with the largest modularity gain (ties: smallest
/// `(min label, max label)`), and return the best partition seen. Merges
/// never cross components, so isolated vertices stay singletons.
pub fn detect_communities(g: &MentionGraph) -> Result<Partition, GraphError> {
    detect_communities_traced(g).map(|(p, _)| p)
}

pub fn detect_communities_traced(
    g: &MentionGraph,
) -> Result<(Partition, MergeTrace), GraphError> {
    if g.is_empty() {
        return Err(GraphError::EmptyGraph);
    }
    let handles: Vec<String> = g.vertices().map(|(h, _)| h.to_string()).collect();
    let index: HashMap<&str, usize> = handles
        .iter()
        .enumerate()
        .map(|(i, h)| (h.as_str(), i))
        .collect();
    let n = handles.len();
    let w_total = g.total_weight() as f64;

    // community state; labels start as vertex indices
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut degree: Vec<f64> = vec![0.0; n];
    let mut neighbors: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n];
    for (a, b, w) in g.edges() {
        let (ia, ib) = (index[a], index[b]);
        degree[ia] += w as f64;
        degree[ib] += w as f64;
        *neighbors[ia].entry(ib).or_insert(0.0) += w as f64;
        *neighbors[ib].entry(ia).or_insert(0.0) += w as f64;
    }
    let mut alive: Vec<bool> = vec![true; n];

    let mut membership: Vec<usize> = (0..n).collect();
    let initial_q = if w_total == 0.0 {
        0.0
    } else {
        -degree
            .iter()
            .map(|d| (d / (2.0 * w_total)).powi(2))
            .sum::<f64>()
    };
    let mut q = initial_q;
    let mut best_q = q;
    let mut best_membership = membership.clone();
    let mut trace = MergeTrace {
        initial_q,
        q_after_merge: Vec::new(),
    };

    if w_total > 0.0 {
        loop {
            // best connected pair by modularity gain
            let mut best: Option<(f64, usize, usize)> = None;
            for a in 0..n {
                if !alive[a] {
                    continue;
                }
                for (&b, &w_ab) in &neighbors[a] {
                    if b <= a {
                        continue;
                    }
                    let dq = w_ab / w_total - degree[a] * degree[b] / (2.0 * w_total * w_total);
                    let better = match best {
                        None => true,
                        Some((bq, ba, bb)) => {
                            dq > bq || (dq == bq && (a, b) < (ba, bb))
                        }
                    };
                    if better {
                        best = Some((dq, a, b));
                    }
                }
            }
            let Some((dq, a, b)) = best else { break };

            // merge b into a (a < b keeps the smaller label)
            let moved = std::mem::take(&mut members[b]);
            for &v in &moved {
                membership[v] = a;
            }
            members[a].extend(moved);
            degree[a] += degree[b];
            let b_neighbors = std::mem::take(&mut neighbors[b]);
            for (c, w) in b_neighbors {
                if c == a {
                    continue;
                }
                *neighbors[a].entry(c).or_insert(0.0) += w;
                let entry = neighbors[c].entry(a).or_insert(0.0);
                *entry += w;
                neighbors[c].remove(&b);
            }
            neighbors[a].remove(&b);
            alive[b] = false;

            q += dq;
            trace.q_after_merge.push(q);
            if q > best_q {
                best_q = q;
                best_membership = membership.clone();
            }
        }
    }

    // renumber communities densely in vertex order
    let mut dense: HashMap<usize, usize> = HashMap::new();
    let mut assignment = BTreeMap::new();
    for (v, handle) in handles.iter().enumerate() {
        let label = best_membership[v];
        let next = dense.len();
        let id = *dense.entry(label).or_insert(next);
        assignment.insert(handle.clone(), id);
    }
    let modularity = modularity_score(g, &assignment)?;
    Ok((
        Partition {
            assignment,
            modularity,
        },
        trace,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tests_support::corpus_from_texts;
    use crate::synth::{generate_synthetic, scenarios};

    fn unit_graph(edges: &[(&str, &str)]) -> MentionGraph {
        let mut g = MentionGraph::new();
        for (a, b) in edges {
            g.add_mention(a, b, 1);
        }
        g
    }

    #[test]
    fn empty_corpus_empty_graph() {
        assert!(build_mention_graph(&corpus_from_texts(&[])).is_empty());
    }

    #[test]
    fn double_mention_in_one_message_weighs_two() {
        let corpus = corpus_from_texts(&["hello @bob and again @bob"]);
        let g = build_mention_graph(&corpus);
        assert_eq!(g.weight("user0", "bob"), 2);
        assert_eq!(g.stats("bob").unwrap().times_mentioned, 2);
        assert_eq!(g.stats("user0").unwrap().tweets_sent, 1);
    }

    #[test]
    fn six_message_fixture_graph() {
        // authors user0..user5; mentions hand-enumerated
        let corpus = corpus_from_texts(&[
            "hi @bob",
            "hi @bob @carol",
            "hi @carol",
            "nothing",
            "hi @user0",
            "self @user5",
        ]);
        let g = build_mention_graph(&corpus);
        // user5's self-mention adds no edge but counts in stats
        assert_eq!(g.weight("user5", "user5"), 0);
        assert_eq!(g.stats("user5").unwrap().times_mentioned, 1);
        assert_eq!(g.weight("user0", "bob"), 1);
        assert_eq!(g.weight("user1", "bob"), 1);
        assert_eq!(g.weight("user1", "carol"), 1);
        assert_eq!(g.weight("user2", "carol"), 1);
        assert_eq!(g.weight("user4", "user0"), 1);
        assert_eq!(g.total_weight(), 5);
        assert_eq!(g.vertex_count(), 8);
    }

    #[test]
    fn zero_thresholds_keep_everything() {
        let corpus = corpus_from_texts(&["hi @bob"]);
        let g = build_mention_graph(&corpus);
        assert_eq!(filter_active(&g, 0, 0), g);
    }

    #[test]
    fn active_filter_keeps_busy_or_mentioned() {
        let mut g = MentionGraph::new();
        g.add_vertex("quiet").tweets_sent = 1;
        g.add_vertex("busy").tweets_sent = 3;
        g.add_vertex("famous").times_mentioned = 5;
        g.add_mention("quiet", "famous", 1);
        g.add_mention("busy", "famous", 1);
        let f = filter_active(&g, 2, 2);
        assert!(!f.contains_vertex("quiet"));
        assert!(f.contains_vertex("busy"));
        assert!(f.contains_vertex("famous"));
        // induced subgraph: the quiet-famous edge is gone
        assert_eq!(f.total_weight(), 1);
    }

    #[test]
    fn all_inactive_graph_empties() {
        let corpus = corpus_from_texts(&["hi @bob"]);
        let g = build_mention_graph(&corpus);
        assert!(filter_active(&g, 5, 5).is_empty());
    }

    #[test]
    fn remove_popular_thresholds() {
        let corpus = generate_synthetic(&scenarios::mention_hubs(), 0).unwrap();
        let g = build_mention_graph(&corpus);
        let after_100 = remove_popular(&g, 100);
        assert_eq!(g.vertex_count() - after_100.vertex_count(), 6);
        let after_50 = remove_popular(&g, 50);
        assert_eq!(g.vertex_count() - after_50.vertex_count(), 16);
        // threshold above every mention count is the identity
        assert_eq!(remove_popular(&g, 1000), g);
    }

    #[test]
    fn one_community_scores_zero() {
        let g = unit_graph(&[("a", "b"), ("b", "c"), ("a", "c"), ("c", "d")]);
        let assignment: BTreeMap<String, usize> =
            g.vertices().map(|(h, _)| (h.to_string(), 0)).collect();
        assert_eq!(modularity_score(&g, &assignment).unwrap(), 0.0);
    }

    #[test]
    fn two_triangles_natural_split_scores_half() {
        let g = unit_graph(&[
            ("a", "b"),
            ("b", "c"),
            ("a", "c"),
            ("x", "y"),
            ("y", "z"),
            ("x", "z"),
        ]);
        let assignment: BTreeMap<String, usize> = g
            .vertices()
            .map(|(h, _)| (h.to_string(), usize::from(h >= "x")))
            .collect();
        let q = modularity_score(&g, &assignment).unwrap();
        assert!((q - 0.5).abs() < 1e-12);
    }

    #[test]
    fn singletons_score_negative_on_any_edged_graph() {
        let g = unit_graph(&[("a", "b"), ("b", "c")]);
        let assignment: BTreeMap<String, usize> = g
            .vertices()
            .enumerate()
            .map(|(i, (h, _))| (h.to_string(), i))
            .collect();
        assert!(modularity_score(&g, &assignment).unwrap() < 0.0);
    }

    #[test]
    fn uncovered_vertex_errors() {
        let g = unit_graph(&[("a", "b")]);
        let assignment: BTreeMap<String, usize> = [("a".to_string(), 0)].into();
        assert!(matches!(
            modularity_score(&g, &assignment),
            Err(GraphError::UncoveredVertex(_))
        ));
    }

    #[test]
    fn single_edge_merges_into_one_community() {
        let g = unit_graph(&[("a", "b")]);
        let p = detect_communities(&g).unwrap();
        assert_eq!(p.community_count(), 1);
        assert_eq!(p.modularity, 0.0);
    }

    #[test]
    fn two_cliques_with_bridge_split_at_the_bridge() {
        let mut g = MentionGraph::new();
        let left = ["a1", "a2", "a3", "a4"];
        let right = ["b1", "b2", "b3", "b4"];
        for side in [&left, &right] {
            for i in 0..side.len() {
                for j in (i + 1)..side.len() {
                    g.add_mention(side[i], side[j], 1);
                }
            }
        }
        g.add_mention("a1", "b1", 1);
        let p = detect_communities(&g).unwrap();
        assert_eq!(p.community_count(), 2);
        let a_comm = p.assignment["a1"];
        for v in left {
            assert_eq!(p.assignment[v], a_comm);
        }
        let b_comm = p.assignment["b1"];
        assert_ne!(a_comm, b_comm);
        for v in right {
            assert_eq!(p.assignment[v], b_comm);
        }
    }

    #[test]
    fn stored_modularity_matches_recomputation() {
        let corpus = generate_synthetic(&scenarios::mention_hubs(), 0).unwrap();
        let g = build_mention_graph(&corpus);
        let p = detect_communities(&g).unwrap();
        let q = modularity_score(&g, &p.assignment).unwrap();
        assert!((p.modularity - q).abs() < 1e-12);
    }

    #[test]
    fn returned_q_is_the_trace_maximum() {
        let g = unit_graph(&[
            ("a", "b"),
            ("b", "c"),
            ("a", "c"),
            ("c", "d"),
            ("d", "e"),
            ("e", "f"),
            ("d", "f"),
        ]);
        let (p, trace) = detect_communities_traced(&g).unwrap();
        let max_q = trace
            .q_after_merge
            .iter()
            .fold(trace.initial_q, |m, &q| m.max(q));
        assert!((p.modularity - max_q).abs() < 1e-9);
    }

    #[test]
    fn isolated_vertices_stay_singletons() {
        let mut g = unit_graph(&[("a", "b")]);
        g.add_vertex("loner");
        let p = detect_communities(&g).unwrap();
        assert_eq!(p.community_count(), 2);
        assert_ne!(p.assignment["loner"], p.assignment["a"]);
    }

    #[test]
    fn empty_graph_errors() {
        assert!(matches!(
            detect_communities(&MentionGraph::new()),
            Err(GraphError::EmptyGraph)
        ));
    }
}
