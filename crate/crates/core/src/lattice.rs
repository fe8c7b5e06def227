//! Formal concepts, concept lattices and lattice statistics.

use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::antichain;
use crate::context::{Axis, FormalContext, LabelSet};

/// Largest attribute count the brute-force oracle accepts.
pub const ORACLE_MAX_ATTRIBUTES: usize = 20;

/// Largest lattice for which the exact (Dilworth) width is computed.
pub const EXACT_WIDTH_LIMIT: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("brute-force enumeration supports at most {limit} attributes, context has {found}")]
    OracleSizeExceeded { limit: usize, found: usize },
}

/// A pair (extent, intent) closed under both derivations. The bit sets index
/// the objects and attributes of the context the concept was computed from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormalConcept {
    pub extent: FixedBitSet,
    pub intent: FixedBitSet,
}

impl FormalConcept {
    pub fn extent_labels(&self, ctx: &FormalContext) -> LabelSet {
        ctx.label_set(Axis::Object, &self.extent)
    }

    pub fn intent_labels(&self, ctx: &FormalContext) -> LabelSet {
        ctx.label_set(Axis::Attribute, &self.intent)
    }
}

fn sorted_labels(labels: &[String], bits: &FixedBitSet) -> Vec<String> {
    let mut out: Vec<String> = bits.ones().map(|i| labels[i].clone()).collect();
    out.sort();
    out
}

/// Puts concepts in canonical order: larger extents first, then by the
/// lexicographic order of the sorted extent labels.
fn canonical_sort(ctx: &FormalContext, concepts: &mut [FormalConcept]) {
    concepts.sort_by_cached_key(|c| {
        (
            Reverse(c.extent.count_ones(..)),
            sorted_labels(ctx.objects(), &c.extent),
        )
    });
}

/// The lectically next closed attribute set after `current`, if any.
fn next_closure(ctx: &FormalContext, current: &FixedBitSet) -> Option<FixedBitSet> {
    let mut prefix = current.clone();
    for i in (0..ctx.attribute_count()).rev() {
        if prefix.contains(i) {
            prefix.set(i, false);
            continue;
        }
        let mut candidate = prefix.clone();
        candidate.insert(i);
        let closed = ctx.close_attribute_bits(&candidate);
        // Accept only if closing added nothing below i.
        if closed.difference(&prefix).all(|k| k >= i) {
            return Some(closed);
        }
    }
    None
}

/// Every formal concept of `ctx`, each once, in canonical order.
///
/// Intents are generated in lectic order by NextClosure, then sorted.
pub fn enumerate_concepts(ctx: &FormalContext) -> Vec<FormalConcept> {
    let mut concepts = Vec::new();
    let mut intent = ctx.close_attribute_bits(&FixedBitSet::with_capacity(ctx.attribute_count()));
    loop {
        let extent = ctx.extent_bits(&intent);
        let next = next_closure(ctx, &intent);
        concepts.push(FormalConcept { extent, intent });
        match next {
            Some(n) => intent = n,
            None => break,
        }
    }
    canonical_sort(ctx, &mut concepts);
    concepts
}

/// Closes every attribute subset with plain boolean scans and keeps the
/// distinct results. Exponential; meant as a reference for small contexts.
pub fn brute_force_concepts(ctx: &FormalContext) -> Result<Vec<FormalConcept>, LatticeError> {
    let n = ctx.object_count();
    let m = ctx.attribute_count();
    if m > ORACLE_MAX_ATTRIBUTES {
        return Err(LatticeError::OracleSizeExceeded {
            limit: ORACLE_MAX_ATTRIBUTES,
            found: m,
        });
    }
    let mut seen: BTreeSet<Vec<bool>> = BTreeSet::new();
    let mut concepts = Vec::new();
    for mask in 0u32..(1u32 << m) {
        let extent: Vec<bool> = (0..n)
            .map(|g| (0..m).all(|a| mask >> a & 1 == 0 || ctx.incident(g, a)))
            .collect();
        if !seen.insert(extent.clone()) {
            continue;
        }
        let intent: Vec<bool> = (0..m)
            .map(|a| (0..n).all(|g| !extent[g] || ctx.incident(g, a)))
            .collect();
        let to_bits = |flags: &[bool]| {
            let mut bits = FixedBitSet::with_capacity(flags.len());
            for (i, &f) in flags.iter().enumerate() {
                bits.set(i, f);
            }
            bits
        };
        concepts.push(FormalConcept {
            extent: to_bits(&extent),
            intent: to_bits(&intent),
        });
    }
    canonical_sort(ctx, &mut concepts);
    Ok(concepts)
}

/// All concepts of a context together with their covering relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptLattice {
    objects: Vec<String>,
    attributes: Vec<String>,
    concepts: Vec<FormalConcept>,
    /// `(lower, upper)` index pairs with lower ⋖ upper.
    covers: Vec<(usize, usize)>,
}

impl ConceptLattice {
    pub fn concepts(&self) -> &[FormalConcept] {
        &self.concepts
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    /// Never true: every context has at least the top concept.
    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    /// The concept whose extent is every object. Always first.
    pub fn top_index(&self) -> usize {
        0
    }

    /// The concept whose intent is every attribute. Always last.
    pub fn bottom_index(&self) -> usize {
        self.concepts.len() - 1
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn extent_labels(&self, index: usize) -> Vec<&str> {
        self.concepts[index]
            .extent
            .ones()
            .map(|i| self.objects[i].as_str())
            .collect()
    }

    pub fn intent_labels(&self, index: usize) -> Vec<&str> {
        self.concepts[index]
            .intent
            .ones()
            .map(|i| self.attributes[i].as_str())
            .collect()
    }

    /// Strict order: `lower` < `upper` iff the extent of `lower` is a proper
    /// subset of the extent of `upper`.
    pub fn less_than(&self, lower: usize, upper: usize) -> bool {
        let (a, b) = (&self.concepts[lower].extent, &self.concepts[upper].extent);
        lower != upper && a.is_subset(b) && a != b
    }

    /// Upper covers of each concept, as adjacency lists.
    pub fn upper_covers(&self) -> Vec<Vec<usize>> {
        let mut up = vec![Vec::new(); self.concepts.len()];
        for &(lo, hi) in &self.covers {
            up[lo].push(hi);
        }
        up
    }

    /// Lower covers of each concept, as adjacency lists.
    pub fn lower_covers(&self) -> Vec<Vec<usize>> {
        let mut down = vec![Vec::new(); self.concepts.len()];
        for &(lo, hi) in &self.covers {
            down[hi].push(lo);
        }
        down
    }
}

/// Upper neighbours of the concept with extent `extent` (Lindig's method).
fn upper_neighbours(ctx: &FormalContext, extent: &FixedBitSet) -> Vec<FixedBitSet> {
    let mut outside = FixedBitSet::with_capacity(ctx.object_count());
    outside.insert_range(..);
    outside.difference_with(extent);
    let mut minimal = outside.clone();
    let mut found: Vec<FixedBitSet> = Vec::new();
    for g in outside.ones() {
        let mut grown = extent.clone();
        grown.insert(g);
        let closed = ctx.close_object_bits(&grown);
        let mut added = closed.clone();
        added.difference_with(extent);
        added.set(g, false);
        if added.is_disjoint(&minimal) {
            if !found.contains(&closed) {
                found.push(closed);
            }
        } else {
            minimal.set(g, false);
        }
    }
    found
}

/// Builds the concept lattice: canonical concepts plus the Hasse diagram.
pub fn build_lattice(ctx: &FormalContext) -> ConceptLattice {
    let concepts = enumerate_concepts(ctx);
    let by_extent: HashMap<&FixedBitSet, usize> = concepts
        .iter()
        .enumerate()
        .map(|(i, c)| (&c.extent, i))
        .collect();
    let mut covers = Vec::new();
    for (lower, concept) in concepts.iter().enumerate() {
        for extent in upper_neighbours(ctx, &concept.extent) {
            let upper = by_extent[&extent];
            covers.push((lower, upper));
        }
    }
    covers.sort_unstable();
    ConceptLattice {
        objects: ctx.objects().to_vec(),
        attributes: ctx.attributes().to_vec(),
        concepts,
        covers,
    }
}

/// Size and shape figures of a concept lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeStats {
    pub concept_count: usize,
    pub edge_count: usize,
    /// Edges on a longest chain from top to bottom.
    pub height: usize,
    /// Lower and upper bound on the size of a largest antichain.
    pub width: (usize, usize),
    /// Whether the upper width bound is the exact maximum antichain size.
    pub width_exact: bool,
}

impl LatticeStats {
    pub const CSV_HEADER: &'static str = "concepts,edges,height,width_lo,width_hi";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.concept_count, self.edge_count, self.height, self.width.0, self.width.1
        )
    }
}

/// Longest distance (in cover edges) of every concept from `start`, walking
/// along `adjacency` in a topological `order`.
fn longest_distances(
    n: usize,
    adjacency: &[Vec<usize>],
    order: impl Iterator<Item = usize>,
) -> Vec<usize> {
    let mut dist = vec![0usize; n];
    for v in order {
        for &w in &adjacency[v] {
            dist[w] = dist[w].max(dist[v] + 1);
        }
    }
    dist
}

fn widest_level(dist: &[usize]) -> usize {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for &d in dist {
        *counts.entry(d).or_default() += 1;
    }
    counts.into_values().max().unwrap_or(0)
}

/// Concept and edge counts, height, and width bounds.
///
/// The lower width bound is the largest level when concepts are grouped by
/// longest distance from the top, or from the bottom, whichever is larger;
/// each grouping is a partition into antichains. The upper bound is the
/// exact maximum antichain (minimum chain cover via bipartite matching) up to
/// [`EXACT_WIDTH_LIMIT`] concepts, and `concepts - height` beyond that.
pub fn lattice_stats(lattice: &ConceptLattice) -> LatticeStats {
    let n = lattice.len();
    let down = lattice.lower_covers();
    let up = lattice.upper_covers();
    // Canonical order lists larger extents first, so it is topological from the top.
    let from_top = longest_distances(n, &down, 0..n);
    let from_bottom = longest_distances(n, &up, (0..n).rev());
    let height = from_top[lattice.bottom_index()];
    let lower = widest_level(&from_top).max(widest_level(&from_bottom));
    let (upper, exact) = if n <= EXACT_WIDTH_LIMIT {
        let comparable: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).filter(|&j| lattice.less_than(i, j)).collect())
            .collect();
        (antichain::dilworth_width(n, &comparable), true)
    } else {
        (n - height, false)
    };
    LatticeStats {
        concept_count: n,
        edge_count: lattice.covers().len(),
        height,
        width: (lower, upper),
        width_exact: exact,
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering: one node per concept labelled `{extent} | {intent}`,
/// one edge per cover pointing from the upper concept to the lower one.
pub fn export_dot(lattice: &ConceptLattice) -> String {
    let mut out = String::from("digraph lattice {\n  rankdir=TB;\n  node [shape=box];\n");
    for i in 0..lattice.len() {
        let label = format!(
            "{{{}}} | {{{}}}",
            lattice.extent_labels(i).join(", "),
            lattice.intent_labels(i).join(", ")
        );
        let _ = writeln!(out, "  c{i} [label=\"{}\"];", dot_escape(&label));
    }
    let mut edges: Vec<(usize, usize)> =
        lattice.covers().iter().map(|&(lo, hi)| (hi, lo)).collect();
    edges.sort_unstable();
    for (hi, lo) in edges {
        let _ = writeln!(out, "  c{hi} -> c{lo};");
    }
    out.push_str("}\n");
    out
}
