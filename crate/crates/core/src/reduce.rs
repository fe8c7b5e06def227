//! Formal-context reduction: merging lexically related labels and removing
//! infrequent ones, alone or in sequence.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::context::{Axis, ContextError, FormalContext};
use crate::wordnet::{Pos, RelatednessLexicon};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error(transparent)]
    Context(#[from] ContextError),
    #[error("cannot compute frequencies: the context has no {0}s")]
    EmptyAxis(Axis),
    #[error("a merge group needs at least two labels, got {0}")]
    GroupTooSmall(usize),
    #[error("threshold {0}% is outside 0..=100")]
    ThresholdOutOfRange(Percent),
    #[error("technique order `{0}` needs a lexicon")]
    MissingLexicon(TechniqueOrder),
}

/// An exact percentage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Percent(pub Ratio<u64>);

impl Percent {
    pub fn from_integer(value: u64) -> Self {
        Percent(Ratio::from_integer(value))
    }

    /// `100 * part / whole`.
    pub fn of(part: usize, whole: usize) -> Self {
        Percent(Ratio::new(100 * part as u64, whole as u64))
    }

    pub fn to_f64(self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Percent {
    /// Decimal form rounded to at most six fractional digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scale = 1_000_000u128;
        let (n, d) = (*self.0.numer() as u128, *self.0.denom() as u128);
        let scaled = (n * scale * 2 + d) / (2 * d);
        let (whole, frac) = (scaled / scale, scaled % scale);
        if frac == 0 {
            write!(f, "{whole}")
        } else {
            let digits = format!("{frac:06}");
            write!(f, "{whole}.{}", digits.trim_end_matches('0'))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{0}` is not a percentage")]
pub struct PercentParseError(String);

impl FromStr for Percent {
    type Err = PercentParseError;

    /// Accepts plain decimals such as `2`, `20`, `12.5`, with an optional `%`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || PercentParseError(s.to_string());
        let body = s.trim().trim_end_matches('%');
        let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
        if whole.is_empty() && frac.is_empty()
            || !whole.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
            || frac.len() > 9
        {
            return Err(err());
        }
        let denom = 10u64.pow(frac.len() as u32);
        let whole: u64 = if whole.is_empty() {
            0
        } else {
            whole.parse().map_err(|_| err())?
        };
        let frac: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| err())?
        };
        let numer = whole
            .checked_mul(denom)
            .and_then(|w| w.checked_add(frac))
            .ok_or_else(err)?;
        Ok(Percent(Ratio::new(numer, denom)))
    }
}

/// Which techniques run, and in which order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TechniqueOrder {
    None,
    WordNetOnly,
    FrequencyOnly,
    WordNetThenFrequency,
    FrequencyThenWordNet,
}

impl TechniqueOrder {
    /// The five lattice configurations of the evaluation, in lattice-id order.
    pub const ALL: [TechniqueOrder; 5] = [
        TechniqueOrder::None,
        TechniqueOrder::WordNetOnly,
        TechniqueOrder::FrequencyOnly,
        TechniqueOrder::WordNetThenFrequency,
        TechniqueOrder::FrequencyThenWordNet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TechniqueOrder::None => "none",
            TechniqueOrder::WordNetOnly => "wn",
            TechniqueOrder::FrequencyOnly => "freq",
            TechniqueOrder::WordNetThenFrequency => "wn-freq",
            TechniqueOrder::FrequencyThenWordNet => "freq-wn",
        }
    }

    /// 1-based lattice number used in the evaluation tables.
    pub fn lattice_id(self) -> usize {
        Self::ALL.iter().position(|&o| o == self).unwrap() + 1
    }

    pub fn steps(self) -> &'static [Technique] {
        match self {
            TechniqueOrder::None => &[],
            TechniqueOrder::WordNetOnly => &[Technique::WordNet],
            TechniqueOrder::FrequencyOnly => &[Technique::Frequency],
            TechniqueOrder::WordNetThenFrequency => &[Technique::WordNet, Technique::Frequency],
            TechniqueOrder::FrequencyThenWordNet => &[Technique::Frequency, Technique::WordNet],
        }
    }

    pub fn uses_wordnet(self) -> bool {
        self.steps().contains(&Technique::WordNet)
    }
}

impl fmt::Display for TechniqueOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TechniqueOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| {
                format!("unknown order `{s}` (expected none, wn, freq, wn-freq or freq-wn)")
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Technique {
    WordNet,
    Frequency,
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Technique::WordNet => "wordnet",
            Technique::Frequency => "frequency",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TechniqueConfig {
    pub hypernym_depth: u32,
    pub threshold: Percent,
    pub order: TechniqueOrder,
}

impl Default for TechniqueConfig {
    fn default() -> Self {
        Self {
            hypernym_depth: 4,
            threshold: Percent::from_integer(2),
            order: TechniqueOrder::None,
        }
    }
}

impl TechniqueConfig {
    pub fn with_order(self, order: TechniqueOrder) -> Self {
        Self { order, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergedGroup {
    pub survivor: String,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Removal {
    pub label: String,
    pub frequency: Percent,
}

/// What one technique did to a context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub technique: Technique,
    pub hypernym_depth: Option<u32>,
    pub threshold: Option<Percent>,
    pub merged_objects: Vec<MergedGroup>,
    pub merged_attributes: Vec<MergedGroup>,
    pub removed_objects: Vec<Removal>,
    pub removed_attributes: Vec<Removal>,
}

impl ReductionReport {
    fn new(technique: Technique) -> Self {
        Self {
            technique,
            hypernym_depth: None,
            threshold: None,
            merged_objects: Vec::new(),
            merged_attributes: Vec::new(),
            removed_objects: Vec::new(),
            removed_attributes: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.merged_objects.is_empty()
            && self.merged_attributes.is_empty()
            && self.removed_objects.is_empty()
            && self.removed_attributes.is_empty()
    }

    pub const CSV_HEADER: [&'static str; 5] =
        ["action", "axis", "survivor", "members", "frequency"];

    /// Rows of `action,axis,survivor,members,frequency`; merged members are
    /// joined with `;`.
    pub fn csv_records(&self) -> Vec<[String; 5]> {
        let mut out = Vec::new();
        for (axis, groups) in [
            (Axis::Object, &self.merged_objects),
            (Axis::Attribute, &self.merged_attributes),
        ] {
            for g in groups {
                out.push([
                    "merge".into(),
                    axis.to_string(),
                    g.survivor.clone(),
                    g.members.join(";"),
                    String::new(),
                ]);
            }
        }
        for (axis, removed) in [
            (Axis::Object, &self.removed_objects),
            (Axis::Attribute, &self.removed_attributes),
        ] {
            for r in removed {
                out.push([
                    "remove".into(),
                    axis.to_string(),
                    String::new(),
                    r.label.clone(),
                    r.frequency.to_string(),
                ]);
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        reports_to_csv(std::slice::from_ref(self))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{} technique", self.technique);
        if let Some(d) = self.hypernym_depth {
            let _ = write!(out, " (hypernym depth {d})");
        }
        if let Some(t) = self.threshold {
            let _ = write!(out, " (threshold {t}%)");
        }
        out.push('\n');
        if self.is_empty() {
            out.push_str("  no changes\n");
        }
        for (axis, groups) in [
            ("object", &self.merged_objects),
            ("attribute", &self.merged_attributes),
        ] {
            for g in groups {
                let _ = writeln!(
                    out,
                    "  merged {axis}s {} into {}",
                    g.members.join(", "),
                    g.survivor
                );
            }
        }
        for (axis, removed) in [
            ("object", &self.removed_objects),
            ("attribute", &self.removed_attributes),
        ] {
            for r in removed {
                let _ = writeln!(out, "  removed {axis} {} ({}%)", r.label, r.frequency);
            }
        }
        out
    }
}

/// CSV for several reports, one header.
pub fn reports_to_csv(reports: &[ReductionReport]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(ReductionReport::CSV_HEADER)
        .expect("in-memory write");
    for report in reports {
        for record in report.csv_records() {
            writer.write_record(&record).expect("in-memory write");
        }
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Replaces the rows (or columns) named in `group` with one row at the
/// position of `group[0]`, labelled `new_label`, whose cells are the OR of
/// the merged rows.
pub fn merge(
    ctx: &FormalContext,
    axis: Axis,
    group: &[impl AsRef<str>],
    new_label: &str,
) -> Result<FormalContext, ReduceError> {
    if axis == Axis::Attribute {
        let merged = merge(&ctx.transpose(), Axis::Object, group, new_label)?;
        return Ok(merged.transpose());
    }
    if group.len() < 2 {
        return Err(ReduceError::GroupTooSmall(group.len()));
    }
    let mut members = FixedBitSet::with_capacity(ctx.object_count());
    let mut first = None;
    for label in group {
        let label = label.as_ref();
        let i = ctx
            .position(Axis::Object, label)
            .ok_or_else(|| ContextError::UnknownLabel {
                axis,
                label: label.to_string(),
            })?;
        if members.put(i) {
            return Err(ContextError::DuplicateLabel {
                axis,
                label: label.to_string(),
            }
            .into());
        }
        first.get_or_insert(i);
    }
    let first = first.unwrap();
    if let Some(clash) = ctx.position(Axis::Object, new_label) {
        if !members.contains(clash) {
            return Err(ContextError::DuplicateLabel {
                axis,
                label: new_label.to_string(),
            }
            .into());
        }
    }
    let mut merged_row = FixedBitSet::with_capacity(ctx.attribute_count());
    for i in members.ones() {
        merged_row.union_with(ctx.row(i));
    }
    let mut objects = Vec::new();
    let mut rows = Vec::new();
    for (i, label) in ctx.objects().iter().enumerate() {
        if i == first {
            objects.push(new_label.to_string());
            rows.push(merged_row.clone());
        } else if !members.contains(i) {
            objects.push(label.clone());
            rows.push(ctx.row(i).clone());
        }
    }
    Ok(FormalContext::from_bit_rows(
        objects,
        ctx.attributes().to_vec(),
        rows,
    )?)
}

/// Row and column densities as exact percentages, in context order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frequencies {
    pub objects: Vec<Percent>,
    pub attributes: Vec<Percent>,
}

/// Object frequency is the share of attributes an object has; attribute
/// frequency is the share of objects having the attribute.
pub fn frequencies(ctx: &FormalContext) -> Result<Frequencies, ReduceError> {
    let (n, m) = (ctx.object_count(), ctx.attribute_count());
    if n == 0 {
        return Err(ReduceError::EmptyAxis(Axis::Object));
    }
    if m == 0 {
        return Err(ReduceError::EmptyAxis(Axis::Attribute));
    }
    Ok(Frequencies {
        objects: ctx
            .rows()
            .iter()
            .map(|r| Percent::of(r.count_ones(..), m))
            .collect(),
        attributes: ctx
            .columns()
            .iter()
            .map(|c| Percent::of(c.count_ones(..), n))
            .collect(),
    })
}

fn check_threshold(threshold: Percent) -> Result<(), ReduceError> {
    if threshold > Percent::from_integer(100) {
        return Err(ReduceError::ThresholdOutOfRange(threshold));
    }
    Ok(())
}

/// Removes, in one pass, every object and attribute whose frequency on the
/// input context is at most `threshold`.
pub fn frequency_reduce(
    ctx: &FormalContext,
    threshold: Percent,
) -> Result<(FormalContext, ReductionReport), ReduceError> {
    check_threshold(threshold)?;
    let freq = frequencies(ctx)?;
    let mut report = ReductionReport::new(Technique::Frequency);
    report.threshold = Some(threshold);
    let mut keep_objects = FixedBitSet::with_capacity(ctx.object_count());
    for (i, &f) in freq.objects.iter().enumerate() {
        if f <= threshold {
            report.removed_objects.push(Removal {
                label: ctx.objects()[i].clone(),
                frequency: f,
            });
        } else {
            keep_objects.insert(i);
        }
    }
    let mut keep_attributes = FixedBitSet::with_capacity(ctx.attribute_count());
    for (j, &f) in freq.attributes.iter().enumerate() {
        if f <= threshold {
            report.removed_attributes.push(Removal {
                label: ctx.attributes()[j].clone(),
                frequency: f,
            });
        } else {
            keep_attributes.insert(j);
        }
    }
    Ok((ctx.restrict(&keep_objects, &keep_attributes), report))
}

fn merge_axis(
    mut ctx: FormalContext,
    axis: Axis,
    lexicon: &dyn RelatednessLexicon,
    depth: u32,
    groups: &mut Vec<MergedGroup>,
) -> Result<FormalContext, ReduceError> {
    let pos = match axis {
        Axis::Object => Pos::Noun,
        Axis::Attribute => Pos::Verb,
    };
    let mut i = 0;
    while i < ctx.labels(axis).len() {
        let labels = ctx.labels(axis);
        let current = &labels[i];
        let mut group = vec![current.clone()];
        group.extend(
            labels[i + 1..]
                .iter()
                .filter(|other| lexicon.related(current, other, pos, depth))
                .cloned(),
        );
        if group.len() > 1 {
            let mut survivor = group[0].clone();
            for member in &group[1..] {
                if let Some(winner) = lexicon.most_general_within(&survivor, member, pos, depth) {
                    survivor = winner;
                }
            }
            ctx = merge(&ctx, axis, &group, &survivor)?;
            groups.push(MergedGroup {
                survivor,
                members: group,
            });
        }
        i += 1;
    }
    Ok(ctx)
}

/// Merges objects (as nouns) and then attributes (as verbs) that are
/// synonyms or hypernyms of one another within `depth`.
///
/// Labels are scanned in context order; each not-yet-merged label absorbs
/// every later related label in one step, and the group is renamed to the
/// most general member.
pub fn wordnet_reduce(
    ctx: &FormalContext,
    lexicon: &dyn RelatednessLexicon,
    depth: u32,
) -> Result<(FormalContext, ReductionReport), ReduceError> {
    let mut report = ReductionReport::new(Technique::WordNet);
    report.hypernym_depth = Some(depth);
    let ctx = merge_axis(
        ctx.clone(),
        Axis::Object,
        lexicon,
        depth,
        &mut report.merged_objects,
    )?;
    let ctx = merge_axis(
        ctx,
        Axis::Attribute,
        lexicon,
        depth,
        &mut report.merged_attributes,
    )?;
    Ok((ctx, report))
}

/// Applies the configured techniques in order, threading the context.
pub fn apply_order(
    ctx: &FormalContext,
    config: &TechniqueConfig,
    lexicon: Option<&dyn RelatednessLexicon>,
) -> Result<(FormalContext, Vec<ReductionReport>), ReduceError> {
    check_threshold(config.threshold)?;
    let mut current = ctx.clone();
    let mut reports = Vec::new();
    for step in config.order.steps() {
        let (next, report) = match step {
            Technique::WordNet => {
                let lexicon = lexicon.ok_or(ReduceError::MissingLexicon(config.order))?;
                wordnet_reduce(&current, lexicon, config.hypernym_depth)?
            }
            Technique::Frequency => frequency_reduce(&current, config.threshold)?,
        };
        current = next;
        reports.push(report);
    }
    Ok((current, reports))
}
