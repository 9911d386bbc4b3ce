//! Transactions, support counting and level-wise Apriori mining of
//! frequent itemsets, plus the itemset-formation graph.
//!
//! A set is frequent when its support is strictly greater than the minimum
//! support. Candidate generation joins prefix-sharing frequent sets and
//! prunes by the anti-monotone rule: a set's support never exceeds the
//! support of any of its subsets.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::corpus::Corpus;
use crate::text::{tokenize, NameLexicon};

#[derive(Debug, Error)]
pub enum ItemsetError {
    #[error("transaction set is empty")]
    EmptyTransactionSet,
    #[error("item {0:?} is not in the universe")]
    UnknownItem(String),
    #[error("query items must be nonempty")]
    EmptyQuery,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Deduplicated lexicon tokens of one message; items are indices into the
/// owning set's universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub items: Vec<u32>,
    pub source_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransactionSet {
    universe: Vec<String>,
    transactions: Vec<Transaction>,
}

impl TransactionSet {
    pub fn new(universe: Vec<String>, transactions: Vec<Transaction>) -> Self {
        debug_assert!(universe.windows(2).all(|w| w[0] < w[1]));
        TransactionSet {
            universe,
            transactions,
        }
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn item_index(&self, item: &str) -> Option<u32> {
        self.universe
            .binary_search_by(|u| u.as_str().cmp(item))
            .ok()
            .map(|i| i as u32)
    }

    fn item_names(&self, items: &[u32]) -> Vec<String> {
        items
            .iter()
            .map(|&i| self.universe[i as usize].clone())
            .collect()
    }
}

/// An itemset with its exact support over a transaction base.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequentItemset {
    /// Item names in lexicographic order.
    pub items: Vec<String>,
    pub support: f64,
    pub count: u64,
}

/// One transaction per message whose token stream intersects the lexicon;
/// items are the intersection, deduplicated. Messages without any lexicon
/// hit contribute no transaction.
pub fn build_transactions(corpus: &Corpus, lexicon: &NameLexicon) -> TransactionSet {
    let universe: Vec<String> = lexicon.names().map(str::to_string).collect();
    let mut transactions = Vec::new();
    for msg in corpus.messages() {
        let ts = tokenize(&msg.text);
        let mut items: BTreeSet<u32> = BTreeSet::new();
        for token in &ts.tokens {
            if let Ok(idx) = universe.binary_search_by(|u| u.as_str().cmp(token)) {
                items.insert(idx as u32);
            }
        }
        if !items.is_empty() {
            transactions.push(Transaction {
                items: items.into_iter().collect(),
                source_id: msg.id.clone(),
            });
        }
    }
    TransactionSet::new(universe, transactions)
}

/// Is `needle` (sorted) a subset of `haystack` (sorted)?
fn is_subset(needle: &[u32], haystack: &[u32]) -> bool {
    let mut it = haystack.iter();
    'outer: for n in needle {
        for h in it.by_ref() {
            if h == n {
                continue 'outer;
            }
            if h > n {
                return false;
            }
        }
        return false;
    }
    true
}

fn count_containing(ts: &TransactionSet, items: &[u32]) -> u64 {
    ts.transactions
        .iter()
        .filter(|t| is_subset(items, &t.items))
        .count() as u64
}

/// Exact support of an itemset: containing transactions over all
/// transactions.
pub fn support(ts: &TransactionSet, items: &BTreeSet<String>) -> Result<(f64, u64), ItemsetError> {
    if ts.is_empty() {
        return Err(ItemsetError::EmptyTransactionSet);
    }
    if items.is_empty() {
        return Err(ItemsetError::EmptyQuery);
    }
    let mut indices = Vec::with_capacity(items.len());
    for item in items {
        let idx = ts
            .item_index(item)
            .ok_or_else(|| ItemsetError::UnknownItem(item.clone()))?;
        indices.push(idx);
    }
    indices.sort_unstable();
    let count = count_containing(ts, &indices);
    Ok((count as f64 / ts.len() as f64, count))
}

/// Level-wise Apriori over the size band `[min_size, max_size]`, keeping
/// itemsets with support strictly above `supp_min`. Output is sorted by
/// support descending, then lexicographically by item names.
pub fn mine_frequent_itemsets(
    ts: &TransactionSet,
    supp_min: f64,
    min_size: usize,
    max_size: usize,
) -> Result<Vec<FrequentItemset>, ItemsetError> {
    if ts.is_empty() {
        return Err(ItemsetError::EmptyTransactionSet);
    }
    if !(0.0..1.0).contains(&supp_min) {
        return Err(ItemsetError::InvalidParams(format!(
            "supp_min {supp_min} outside [0, 1)"
        )));
    }
    if min_size < 1 || min_size > max_size || max_size > ts.universe.len() {
        return Err(ItemsetError::InvalidParams(format!(
            "size band [{min_size}, {max_size}] invalid for a universe of {}",
            ts.universe.len()
        )));
    }
    let n = ts.len() as f64;
    let mut output: Vec<(Vec<u32>, u64)> = Vec::new();
    // frequent itemsets of the previous level, sorted lexicographically
    let mut prev: Vec<Vec<u32>> = Vec::new();
    for level in 1..=max_size {
        let candidates: Vec<Vec<u32>> = if level == 1 {
            (0..ts.universe.len() as u32).map(|i| vec![i]).collect()
        } else {
            generate_candidates(&prev, level)
        };
        let mut frequent = Vec::new();
        for cand in candidates {
            let count = count_containing(ts, &cand);
            // strict inequality: frequent means support > supp_min
            if count as f64 > supp_min * n {
                if level >= min_size {
                    output.push((cand.clone(), count));
                }
                frequent.push(cand);
            }
        }
        if frequent.is_empty() {
            break;
        }
        prev = frequent;
    }

    let mut result: Vec<FrequentItemset> = output
        .into_iter()
        .map(|(items, count)| FrequentItemset {
            items: ts.item_names(&items),
            support: count as f64 / n,
            count,
        })
        .collect();
    result.sort_by(|a, b| {
        b.count
            .cmp(&a.count)
            .then_with(|| a.items.cmp(&b.items))
    });
    Ok(result)
}

/// Join (k−1)-prefix-sharing sorted frequent sets, then prune candidates
/// with an infrequent (k−1)-subset.
fn generate_candidates(prev: &[Vec<u32>], level: usize) -> Vec<Vec<u32>> {
    let prev_set: HashSet<&[u32]> = prev.iter().map(Vec::as_slice).collect();
    let mut candidates = Vec::new();
    for i in 0..prev.len() {
        for j in (i + 1)..prev.len() {
            let (a, b) = (&prev[i], &prev[j]);
            if a[..level - 2] != b[..level - 2] {
                continue;
            }
            let mut cand = a.clone();
            let last = *b.last().expect("nonempty itemset");
            debug_assert!(last != *a.last().unwrap());
            if last < *a.last().unwrap() {
                continue;
            }
            cand.push(last);
            // anti-monotone prune: every (k-1)-subset must be frequent
            let mut ok = true;
            let mut sub = Vec::with_capacity(level - 1);
            for skip in 0..cand.len() {
                sub.clear();
                sub.extend(cand.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, v)| *v));
                if !prev_set.contains(sub.as_slice()) {
                    ok = false;
                    break;
                }
            }
            if ok {
                candidates.push(cand);
            }
        }
    }
    candidates
}

/// First `min(k, len)` entries of an already-sorted mining result.
pub fn top_itemsets(result: &[FrequentItemset], k: usize) -> Vec<FrequentItemset> {
    result.iter().take(k).cloned().collect()
}

/// Bipartite graph linking the top-k itemsets to their member items.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemsetGraph {
    /// `(label, support)` per itemset node; labels are `|`-joined item names.
    pub itemset_nodes: Vec<(String, f64)>,
    /// Union of member items, sorted.
    pub item_nodes: Vec<String>,
    /// `(itemset index, item name)` incidence pairs.
    pub edges: Vec<(usize, String)>,
}

pub fn itemset_graph(result: &[FrequentItemset], k: usize) -> ItemsetGraph {
    let top = top_itemsets(result, k);
    let mut item_nodes: BTreeSet<String> = BTreeSet::new();
    let mut itemset_nodes = Vec::new();
    let mut edges = Vec::new();
    for (idx, fi) in top.iter().enumerate() {
        itemset_nodes.push((fi.items.join("|"), fi.support));
        for item in &fi.items {
            item_nodes.insert(item.clone());
            edges.push((idx, item.clone()));
        }
    }
    ItemsetGraph {
        itemset_nodes,
        item_nodes: item_nodes.into_iter().collect(),
        edges,
    }
}

/// CSV report matching the published table shape:
/// `rank,items,support,count` with nine-decimal supports.
pub fn report_to_csv(result: &[FrequentItemset]) -> String {
    let mut out = String::from("rank,items,support,count\n");
    for (i, fi) in result.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{:.9},{}\n",
            i + 1,
            fi.items.join("|"),
            fi.support,
            fi.count
        ));
    }
    out
}
