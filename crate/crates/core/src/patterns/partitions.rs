//! Set partitions of edge sets, enumerated as restricted-growth strings.
//!
//! A colouring matters for canonical-pattern questions only through which
//! edges share a colour, so colourings are enumerated up to renaming as
//! partitions of `E(G)`. The restricted-growth normal form (`labels[0]=0`,
//! `labels[i] ≤ 1 + max(labels[..i])`) picks one representative per
//! partition; there are Bell(m) of them.

use crate::{Colour, Error, Result};
use serde::{Deserialize, Serialize};

/// Hard cap on edges for exhaustive partition enumeration. Bell(14) ≈ 1.9e8
/// is the most a patient caller can want; beyond that the enumeration is a
/// programming error, not a long wait.
pub const MAX_PARTITION_EDGES: usize = 14;

/// A partition of `m` edges in restricted-growth normal form. `labels[i]`
/// is the block of edge `i`; reading labels as colours gives the canonical
/// colouring representative of the partition's renaming class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgePartition {
    labels: Vec<u32>,
}

impl EdgePartition {
    pub fn from_labels(labels: Vec<u32>) -> Result<Self> {
        let mut max_seen: Option<u32> = None;
        for (i, &l) in labels.iter().enumerate() {
            let bound = max_seen.map_or(0, |m| m + 1);
            if l > bound {
                return Err(Error::invalid(format!(
                    "labels not in restricted-growth form at position {i}: {l} > {bound}"
                )));
            }
            max_seen = Some(max_seen.map_or(l, |m| m.max(l)));
        }
        Ok(EdgePartition { labels })
    }

    /// The all-in-one-block partition (monochromatic colouring class).
    pub fn monochromatic(m: usize) -> Self {
        EdgePartition {
            labels: vec![0; m],
        }
    }

    /// The all-singletons partition (rainbow colouring class).
    pub fn discrete(m: usize) -> Self {
        EdgePartition {
            labels: (0..m as u32).collect(),
        }
    }

    pub fn m(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Labels reinterpreted as a concrete colour vector.
    pub fn as_colours(&self) -> Vec<Colour> {
        self.labels.clone()
    }

    pub fn block_count(&self) -> usize {
        self.labels.iter().map(|&l| l + 1).max().unwrap_or(0) as usize
    }

    /// Blocks as sorted edge-index lists, ordered by label.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (e, &l) in self.labels.iter().enumerate() {
            blocks[l as usize].push(e);
        }
        blocks
    }
}

/// Iterates every partition of `m` edges in restricted-growth (hence
/// lexicographic-labels) order. Errors beyond [`MAX_PARTITION_EDGES`].
pub fn enumerate_edge_partitions(m: usize) -> Result<EdgePartitionIter> {
    if m > MAX_PARTITION_EDGES {
        return Err(Error::cap(format!(
            "partition enumeration capped at {MAX_PARTITION_EDGES} edges, got {m} \
             (Bell numbers grow superexponentially)"
        )));
    }
    Ok(EdgePartitionIter {
        next: Some(vec![0; m]),
    })
}

pub struct EdgePartitionIter {
    next: Option<Vec<u32>>,
}

impl Iterator for EdgePartitionIter {
    type Item = EdgePartition;

    fn next(&mut self) -> Option<EdgePartition> {
        let current = self.next.take()?;
        self.next = successor(&current);
        Some(EdgePartition {
            labels: current,
        })
    }
}

/// Restricted-growth successor: find the rightmost position that can be
/// incremented (label < 1 + max of prefix), increment it, zero the suffix.
fn successor(labels: &[u32]) -> Option<Vec<u32>> {
    let m = labels.len();
    if m == 0 {
        return None;
    }
    let mut prefix_max = vec![0u32; m];
    for i in 1..m {
        prefix_max[i] = prefix_max[i - 1].max(labels[i - 1]);
    }
    for i in (1..m).rev() {
        if labels[i] <= prefix_max[i] {
            let mut next = labels[..i].to_vec();
            next.push(labels[i] + 1);
            next.resize(m, 0);
            return Some(next);
        }
    }
    None
}

/// Bell(m) via the Bell triangle; exact in u128 for every m this crate can
/// enumerate (and far beyond).
pub fn bell_number(m: usize) -> u128 {
    if m == 0 {
        return 1;
    }
    let mut row = vec![1u128];
    for _ in 1..m {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap() + x);
        }
        row = next;
    }
    *row.last().unwrap()
}
