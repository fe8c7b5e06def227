//! Binary formal contexts and the two derivation operators.
//!
//! A [`FormalContext`] is a table of object labels (rows), attribute labels
//! (columns) and a boolean incidence relation between them. Rows and columns
//! are both stored as packed bit sets, so deriving the attributes shared by a
//! set of objects (or the objects sharing a set of attributes) is a chain of
//! bitwise intersections.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// Which side of a context a label lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    Object,
    Attribute,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Object => f.write_str("object"),
            Axis::Attribute => f.write_str("attribute"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("duplicate {axis} label `{label}`")]
    DuplicateLabel { axis: Axis, label: String },
    #[error("unknown {axis} label `{label}`")]
    UnknownLabel { axis: Axis, label: String },
    #[error("incidence has {found} {what}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("expected a label set on the {expected} axis, got {found}")]
    AxisMismatch { expected: Axis, found: Axis },
    #[error("{axis} label `{label}` contains a comma and cannot be written as CSV")]
    CommaInLabel { axis: Axis, label: String },
    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },
}

/// A set of labels drawn from one axis of a context, kept in context order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelSet {
    axis: Axis,
    members: Vec<String>,
}

impl LabelSet {
    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.members.iter().any(|m| m == label)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.members.iter().map(String::as_str)
    }

    pub fn labels(&self) -> &[String] {
        &self.members
    }

    /// True when every member of `self` is also a member of `other`.
    pub fn is_subset(&self, other: &LabelSet) -> bool {
        self.axis == other.axis && self.iter().all(|m| other.contains(m))
    }
}

/// The triple (objects, attributes, incidence).
///
/// Equality is positional: two contexts are equal iff their label lists and
/// incidence matrices agree entry by entry.
#[derive(Clone)]
pub struct FormalContext {
    objects: Vec<String>,
    attributes: Vec<String>,
    rows: Vec<FixedBitSet>,
    columns: Vec<FixedBitSet>,
    object_index: HashMap<String, usize>,
    attribute_index: HashMap<String, usize>,
}

impl PartialEq for FormalContext {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.attributes == other.attributes
            && self.rows == other.rows
    }
}

impl Eq for FormalContext {}

impl fmt::Debug for FormalContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "FormalContext {}x{}",
            self.objects.len(),
            self.attributes.len()
        )?;
        for (label, row) in self.objects.iter().zip(&self.rows) {
            let cells: String = (0..self.attributes.len())
                .map(|j| if row.contains(j) { 'X' } else { '.' })
                .collect();
            writeln!(f, "  {cells} {label}")?;
        }
        Ok(())
    }
}

fn index_labels(axis: Axis, labels: &[String]) -> Result<HashMap<String, usize>, ContextError> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, label) in labels.iter().enumerate() {
        if index.insert(label.clone(), i).is_some() {
            return Err(ContextError::DuplicateLabel {
                axis,
                label: label.clone(),
            });
        }
    }
    Ok(index)
}

impl FormalContext {
    /// Builds a context from label lists and the set of incident
    /// (object, attribute) pairs. Label order is preserved.
    pub fn from_incidence<O, A, I, S, T>(
        objects: O,
        attributes: A,
        cells: I,
    ) -> Result<Self, ContextError>
    where
        O: IntoIterator,
        O::Item: Into<String>,
        A: IntoIterator,
        A::Item: Into<String>,
        I: IntoIterator<Item = (S, T)>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let objects: Vec<String> = objects.into_iter().map(Into::into).collect();
        let attributes: Vec<String> = attributes.into_iter().map(Into::into).collect();
        let object_index = index_labels(Axis::Object, &objects)?;
        let attribute_index = index_labels(Axis::Attribute, &attributes)?;
        let mut rows = vec![FixedBitSet::with_capacity(attributes.len()); objects.len()];
        for (o, a) in cells {
            let (o, a) = (o.as_ref(), a.as_ref());
            let i = *object_index
                .get(o)
                .ok_or_else(|| ContextError::UnknownLabel {
                    axis: Axis::Object,
                    label: o.to_string(),
                })?;
            let j = *attribute_index
                .get(a)
                .ok_or_else(|| ContextError::UnknownLabel {
                    axis: Axis::Attribute,
                    label: a.to_string(),
                })?;
            rows[i].insert(j);
        }
        Ok(Self::assemble(
            objects,
            attributes,
            rows,
            object_index,
            attribute_index,
        ))
    }

    /// Builds a context from a dense row-major boolean table.
    pub fn from_rows<O, A>(
        objects: O,
        attributes: A,
        table: &[Vec<bool>],
    ) -> Result<Self, ContextError>
    where
        O: IntoIterator,
        O::Item: Into<String>,
        A: IntoIterator,
        A::Item: Into<String>,
    {
        let objects: Vec<String> = objects.into_iter().map(Into::into).collect();
        let attributes: Vec<String> = attributes.into_iter().map(Into::into).collect();
        if table.len() != objects.len() {
            return Err(ContextError::DimensionMismatch {
                what: "rows",
                expected: objects.len(),
                found: table.len(),
            });
        }
        let mut rows = Vec::with_capacity(objects.len());
        for row in table {
            if row.len() != attributes.len() {
                return Err(ContextError::DimensionMismatch {
                    what: "columns",
                    expected: attributes.len(),
                    found: row.len(),
                });
            }
            let mut bits = FixedBitSet::with_capacity(attributes.len());
            for (j, &cell) in row.iter().enumerate() {
                bits.set(j, cell);
            }
            rows.push(bits);
        }
        Self::from_bit_rows(objects, attributes, rows)
    }

    /// Builds a context whose rows are already packed bit sets, each
    /// exactly `attributes.len()` bits long.
    pub fn from_bit_rows(
        objects: Vec<String>,
        attributes: Vec<String>,
        rows: Vec<FixedBitSet>,
    ) -> Result<Self, ContextError> {
        let object_index = index_labels(Axis::Object, &objects)?;
        let attribute_index = index_labels(Axis::Attribute, &attributes)?;
        if rows.len() != objects.len() {
            return Err(ContextError::DimensionMismatch {
                what: "rows",
                expected: objects.len(),
                found: rows.len(),
            });
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != attributes.len()) {
            return Err(ContextError::DimensionMismatch {
                what: "columns",
                expected: attributes.len(),
                found: bad.len(),
            });
        }
        Ok(Self::assemble(
            objects,
            attributes,
            rows,
            object_index,
            attribute_index,
        ))
    }

    fn assemble(
        objects: Vec<String>,
        attributes: Vec<String>,
        rows: Vec<FixedBitSet>,
        object_index: HashMap<String, usize>,
        attribute_index: HashMap<String, usize>,
    ) -> Self {
        let mut columns = vec![FixedBitSet::with_capacity(objects.len()); attributes.len()];
        for (i, row) in rows.iter().enumerate() {
            for j in row.ones() {
                columns[j].insert(i);
            }
        }
        Self {
            objects,
            attributes,
            rows,
            columns,
            object_index,
            attribute_index,
        }
    }

    /// The 0x0 context.
    pub fn empty() -> Self {
        Self::assemble(
            Vec::new(),
            Vec::new(),
            Vec::new(),
            HashMap::new(),
            HashMap::new(),
        )
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn labels(&self, axis: Axis) -> &[String] {
        match axis {
            Axis::Object => &self.objects,
            Axis::Attribute => &self.attributes,
        }
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn attribute_count(&self) -> usize {
        self.attributes.len()
    }

    /// Number of incident (object, attribute) pairs.
    pub fn cell_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn position(&self, axis: Axis, label: &str) -> Option<usize> {
        match axis {
            Axis::Object => self.object_index.get(label).copied(),
            Axis::Attribute => self.attribute_index.get(label).copied(),
        }
    }

    fn require(&self, axis: Axis, label: &str) -> Result<usize, ContextError> {
        self.position(axis, label)
            .ok_or_else(|| ContextError::UnknownLabel {
                axis,
                label: label.to_string(),
            })
    }

    /// Incidence by position.
    pub fn incident(&self, object: usize, attribute: usize) -> bool {
        self.rows[object].contains(attribute)
    }

    /// Incidence by label; unknown labels are reported as errors.
    pub fn has(&self, object: &str, attribute: &str) -> Result<bool, ContextError> {
        let i = self.require(Axis::Object, object)?;
        let j = self.require(Axis::Attribute, attribute)?;
        Ok(self.incident(i, j))
    }

    /// Attributes of one object, as a bit set over attribute positions.
    pub fn row(&self, object: usize) -> &FixedBitSet {
        &self.rows[object]
    }

    /// Objects having one attribute, as a bit set over object positions.
    pub fn column(&self, attribute: usize) -> &FixedBitSet {
        &self.columns[attribute]
    }

    pub fn rows(&self) -> &[FixedBitSet] {
        &self.rows
    }

    pub fn columns(&self) -> &[FixedBitSet] {
        &self.columns
    }

    /// Attributes shared by every object in `objects` (all attributes when
    /// `objects` is empty).
    pub fn intent_bits(&self, objects: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.attributes.len());
        out.insert_range(..);
        for i in objects.ones() {
            out.intersect_with(&self.rows[i]);
        }
        out
    }

    /// Objects having every attribute in `attributes` (all objects when
    /// `attributes` is empty).
    pub fn extent_bits(&self, attributes: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.objects.len());
        out.insert_range(..);
        for j in attributes.ones() {
            out.intersect_with(&self.columns[j]);
        }
        out
    }

    /// Attribute closure B'' on bit sets.
    pub fn close_attribute_bits(&self, attributes: &FixedBitSet) -> FixedBitSet {
        self.intent_bits(&self.extent_bits(attributes))
    }

    /// Object closure A'' on bit sets.
    pub fn close_object_bits(&self, objects: &FixedBitSet) -> FixedBitSet {
        self.extent_bits(&self.intent_bits(objects))
    }

    /// Converts labels on one axis to a bit set over positions.
    pub fn bits_of<S: AsRef<str>>(
        &self,
        axis: Axis,
        labels: &[S],
    ) -> Result<FixedBitSet, ContextError> {
        let mut bits = FixedBitSet::with_capacity(self.labels(axis).len());
        for label in labels {
            bits.insert(self.require(axis, label.as_ref())?);
        }
        Ok(bits)
    }

    /// Converts a bit set over positions of `axis` to a label set.
    pub fn label_set(&self, axis: Axis, bits: &FixedBitSet) -> LabelSet {
        let labels = self.labels(axis);
        LabelSet {
            axis,
            members: bits.ones().map(|i| labels[i].clone()).collect(),
        }
    }

    /// Validates labels and returns them as a canonical label set.
    pub fn set_of<S: AsRef<str>>(
        &self,
        axis: Axis,
        labels: &[S],
    ) -> Result<LabelSet, ContextError> {
        let bits = self.bits_of(axis, labels)?;
        Ok(self.label_set(axis, &bits))
    }

    /// A′: the attributes held by every listed object.
    pub fn intent_of<S: AsRef<str>>(&self, objects: &[S]) -> Result<LabelSet, ContextError> {
        let bits = self.bits_of(Axis::Object, objects)?;
        Ok(self.label_set(Axis::Attribute, &self.intent_bits(&bits)))
    }

    /// B′: the objects holding every listed attribute.
    pub fn extent_of<S: AsRef<str>>(&self, attributes: &[S]) -> Result<LabelSet, ContextError> {
        let bits = self.bits_of(Axis::Attribute, attributes)?;
        Ok(self.label_set(Axis::Object, &self.extent_bits(&bits)))
    }

    /// B″: the smallest intent containing the listed attributes.
    pub fn close_attributes<S: AsRef<str>>(
        &self,
        attributes: &[S],
    ) -> Result<LabelSet, ContextError> {
        let bits = self.bits_of(Axis::Attribute, attributes)?;
        Ok(self.label_set(Axis::Attribute, &self.close_attribute_bits(&bits)))
    }

    /// Derivation applied to a label set from either axis; the result lives
    /// on the opposite axis.
    pub fn derive(&self, set: &LabelSet) -> Result<LabelSet, ContextError> {
        match set.axis {
            Axis::Object => self.intent_of(set.labels()),
            Axis::Attribute => self.extent_of(set.labels()),
        }
    }

    /// Swaps objects and attributes.
    pub fn transpose(&self) -> FormalContext {
        Self::assemble(
            self.attributes.clone(),
            self.objects.clone(),
            self.columns.clone(),
            self.attribute_index.clone(),
            self.object_index.clone(),
        )
    }

    /// Keeps only the listed row and column positions, in their current order.
    pub fn restrict(
        &self,
        keep_objects: &FixedBitSet,
        keep_attributes: &FixedBitSet,
    ) -> FormalContext {
        let attribute_positions: Vec<usize> = keep_attributes.ones().collect();
        let attributes: Vec<String> = attribute_positions
            .iter()
            .map(|&j| self.attributes[j].clone())
            .collect();
        let mut objects = Vec::new();
        let mut rows = Vec::new();
        for i in keep_objects.ones() {
            objects.push(self.objects[i].clone());
            let mut bits = FixedBitSet::with_capacity(attributes.len());
            for (k, &j) in attribute_positions.iter().enumerate() {
                bits.set(k, self.rows[i].contains(j));
            }
            rows.push(bits);
        }
        Self::from_bit_rows(objects, attributes, rows).expect("restriction of a valid context")
    }

    /// Renders the debugging CSV form: a header of attribute labels after an
    /// empty cell, then one `label,1,0,...` line per object.
    pub fn to_csv(&self) -> Result<String, ContextError> {
        for (axis, labels) in [
            (Axis::Object, &self.objects),
            (Axis::Attribute, &self.attributes),
        ] {
            if let Some(label) = labels.iter().find(|l| l.contains(',')) {
                return Err(ContextError::CommaInLabel {
                    axis,
                    label: label.clone(),
                });
            }
        }
        let mut out = String::new();
        for attribute in &self.attributes {
            out.push(',');
            out.push_str(attribute);
        }
        out.push('\n');
        for (label, row) in self.objects.iter().zip(&self.rows) {
            out.push_str(label);
            for j in 0..self.attributes.len() {
                out.push_str(if row.contains(j) { ",1" } else { ",0" });
            }
            out.push('\n');
        }
        Ok(out)
    }

    /// Parses the debugging CSV form written by [`FormalContext::to_csv`].
    pub fn from_csv(text: &str) -> Result<FormalContext, ContextError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.strip_suffix('\r').unwrap_or(l)))
            .filter(|(_, l)| !l.is_empty());
        let Some((_, header)) = lines.next() else {
            return Ok(FormalContext::empty());
        };
        let mut head = header.split(',');
        if head.next() != Some("") {
            return Err(ContextError::Csv {
                line: 1,
                message: "header must start with an empty cell".into(),
            });
        }
        let attributes: Vec<String> = head.map(str::to_string).collect();
        let mut objects = Vec::new();
        let mut table = Vec::new();
        for (line, text) in lines {
            let mut cells = text.split(',');
            let label = cells.next().unwrap_or_default().to_string();
            let row = cells
                .map(|c| match c.trim() {
                    "1" => Ok(true),
                    "0" => Ok(false),
                    other => Err(ContextError::Csv {
                        line,
                        message: format!("cell `{other}` is neither 1 nor 0"),
                    }),
                })
                .collect::<Result<Vec<bool>, _>>()?;
            if row.len() != attributes.len() {
                return Err(ContextError::Csv {
                    line,
                    message: format!("expected {} cells, found {}", attributes.len(), row.len()),
                });
            }
            objects.push(label);
            table.push(row);
        }
        FormalContext::from_rows(objects, attributes, &table)
    }
}
