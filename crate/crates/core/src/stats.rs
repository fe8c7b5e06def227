//! Aggregating lattice statistics across corpora.

use std::fmt;

use thiserror::Error;

use crate::lattice::LatticeStats;
use crate::reduce::TechniqueOrder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("cannot aggregate an empty list")]
    EmptyInput,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub mean: f64,
    pub median: f64,
    pub sum: f64,
    pub max: f64,
    pub min: f64,
    /// Population standard deviation.
    pub stdv_p: f64,
    /// Sample standard deviation; `None` for a single value.
    pub stdv_s: Option<f64>,
    /// Same as `stdv_s`: with only numbers in the input the two agree.
    pub stdeva: Option<f64>,
}

impl Aggregate {
    pub const FUNCTIONS: [&'static str; 8] = [
        "mean", "median", "sum", "max", "min", "stdv_p", "stdv_s", "stdeva",
    ];

    /// Values in the order of [`Aggregate::FUNCTIONS`].
    pub fn values(&self) -> [Option<f64>; 8] {
        [
            Some(self.mean),
            Some(self.median),
            Some(self.sum),
            Some(self.max),
            Some(self.min),
            Some(self.stdv_p),
            self.stdv_s,
            self.stdeva,
        ]
    }
}

pub fn aggregate(values: &[f64]) -> Result<Aggregate, StatsError> {
    if values.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    let n = values.len() as f64;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let sum: f64 = sorted.iter().sum();
    let mean = sum / n;
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    };
    let squares: f64 = sorted.iter().map(|x| (x - mean).powi(2)).sum();
    let stdv_s = (values.len() > 1).then(|| (squares / (n - 1.0)).sqrt());
    Ok(Aggregate {
        mean,
        median,
        sum,
        max: sorted[sorted.len() - 1],
        min: sorted[0],
        stdv_p: (squares / n).sqrt(),
        stdv_s,
        stdeva: stdv_s,
    })
}

/// Fixed-point with at most six fractional digits, trailing zeros trimmed.
pub fn format_number(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        &s
    };
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Statistics of one corpus under one configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalRow {
    pub corpus: String,
    pub config: TechniqueOrder,
    pub stats: LatticeStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableFormat {
    #[default]
    Csv,
    Tsv,
}

impl TableFormat {
    pub fn delimiter(self) -> u8 {
        match self {
            TableFormat::Csv => b',',
            TableFormat::Tsv => b'\t',
        }
    }
}

impl fmt::Display for TableFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableFormat::Csv => "csv",
            TableFormat::Tsv => "tsv",
        })
    }
}

pub const STATS_HEADER: [&str; 7] = [
    "corpus", "config", "concepts", "edges", "height", "width_lo", "width_hi",
];

fn columns(stats: &LatticeStats) -> [f64; 5] {
    [
        stats.concept_count as f64,
        stats.edge_count as f64,
        stats.height as f64,
        stats.width.0 as f64,
        stats.width.1 as f64,
    ]
}

/// Data rows sorted by (corpus, config), then eight aggregate rows per
/// configuration present, named in the corpus column.
pub fn stats_csv(rows: &[EvalRow], format: TableFormat) -> String {
    let mut sorted: Vec<&EvalRow> = rows.iter().collect();
    sorted.sort_by(|a, b| (&a.corpus, a.config).cmp(&(&b.corpus, b.config)));
    let mut writer = csv::WriterBuilder::new()
        .delimiter(format.delimiter())
        .from_writer(Vec::new());
    writer.write_record(STATS_HEADER).expect("in-memory write");
    for row in &sorted {
        let mut record = vec![row.corpus.clone(), row.config.to_string()];
        record.extend(columns(&row.stats).iter().map(|&v| format_number(v)));
        writer.write_record(&record).expect("in-memory write");
    }
    for config in TechniqueOrder::ALL {
        let group: Vec<[f64; 5]> = sorted
            .iter()
            .filter(|r| r.config == config)
            .map(|r| columns(&r.stats))
            .collect();
        if group.is_empty() {
            continue;
        }
        let per_column: Vec<Aggregate> = (0..5)
            .map(|c| {
                aggregate(&group.iter().map(|g| g[c]).collect::<Vec<_>>()).expect("non-empty group")
            })
            .collect();
        for (f, name) in Aggregate::FUNCTIONS.iter().enumerate() {
            let mut record = vec![name.to_string(), config.to_string()];
            record.extend(
                per_column
                    .iter()
                    .map(|a| a.values()[f].map(format_number).unwrap_or_default()),
            );
            writer.write_record(&record).expect("in-memory write");
        }
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 output")
}
