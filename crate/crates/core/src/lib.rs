//! Concept hierarchies from dependency-parsed text.
//!
//! Verb–noun pairs become a binary formal context, the context is optionally
//! reduced by merging WordNet-related labels and by dropping infrequent ones,
//! and the concept lattice of the result is enumerated and measured.

pub mod antichain;
pub mod cex;
pub mod context;
pub mod ingest;
pub mod lattice;
pub mod pipeline;
pub mod reduce;
pub mod stats;
pub mod wordnet;

pub use cex::{read_cex, write_cex, CexDocument, CexError};
pub use context::{Axis, ContextError, FormalContext, LabelSet};
pub use ingest::{
    context_from_pairs, extract_pairs, filter_triples, parse_dependencies, prune_pairs,
    read_pairs_tsv, split_sentences, tokenize, write_pairs_tsv, DependencyTriple, IngestError,
    IngestOptions, Sentence, Token, TokenKind, WordPair,
};
pub use lattice::{
    brute_force_concepts, build_lattice, enumerate_concepts, export_dot, lattice_stats,
    ConceptLattice, FormalConcept, LatticeError, LatticeStats,
};
pub use pipeline::{
    eval_corpus, load_context, run_pipeline, EvalOutcome, InputKind, LoadOptions, PipelineError,
    Resources, RunConfig, RunSummary,
};
pub use reduce::{
    apply_order, frequencies, frequency_reduce, merge, reports_to_csv, wordnet_reduce, Frequencies,
    MergedGroup, Percent, ReduceError, ReductionReport, Removal, Technique, TechniqueConfig,
    TechniqueOrder,
};
pub use stats::{aggregate, format_number, stats_csv, Aggregate, EvalRow, StatsError, TableFormat};
pub use wordnet::{
    Lemmatizer, NoRelations, Pos, RelatednessLexicon, StaticLexicon, Synset, SynsetId, WordNetDb,
    WordNetError,
};
