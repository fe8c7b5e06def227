//! Concept Explorer `.cex` documents, plain and frequency-annotated.

use std::collections::HashMap;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use quick_xml::escape::escape;
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;
use thiserror::Error;

use crate::context::{Axis, ContextError, FormalContext};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CexError {
    #[error("malformed XML at byte {position}: {message}")]
    Xml { position: usize, message: String },
    #[error("unsupported CEX document: {0}")]
    UnsupportedDocument(String),
    #[error("object `{object}` refers to unknown attribute identifier `{identifier}`")]
    DanglingReference { object: String, identifier: String },
    #[error("{axis} `{label}` declares frequency {declared} but has {actual} incidences")]
    FrequencyMismatch {
        axis: Axis,
        label: String,
        declared: u64,
        actual: u64,
    },
    #[error(transparent)]
    Context(#[from] ContextError),
}

/// A parsed document. Frequencies are the declared `Frequency` values, in
/// context order, `None` where the element carried none.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CexDocument {
    pub context: FormalContext,
    pub extended: bool,
    pub object_frequencies: Vec<Option<u64>>,
    pub attribute_frequencies: Vec<Option<u64>>,
}

impl CexDocument {
    /// Wraps a context, with recomputed frequencies when `extended`.
    pub fn new(context: FormalContext, extended: bool) -> Self {
        let mut doc = Self {
            object_frequencies: vec![None; context.object_count()],
            attribute_frequencies: vec![None; context.attribute_count()],
            context,
            extended,
        };
        if extended {
            doc.recompute_frequencies();
        }
        doc
    }

    /// Checks every declared frequency against the incidence count.
    pub fn validate(&self) -> Result<(), CexError> {
        let ctx = &self.context;
        let checks = [
            (
                Axis::Object,
                &self.object_frequencies,
                incidence_counts(ctx, Axis::Object),
            ),
            (
                Axis::Attribute,
                &self.attribute_frequencies,
                incidence_counts(ctx, Axis::Attribute),
            ),
        ];
        for (axis, declared, actual) in checks {
            for (i, (d, &a)) in declared.iter().zip(&actual).enumerate() {
                if let Some(d) = *d {
                    if d != a {
                        return Err(CexError::FrequencyMismatch {
                            axis,
                            label: ctx.labels(axis)[i].clone(),
                            declared: d,
                            actual: a,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Replaces declared frequencies with the incidence counts.
    pub fn recompute_frequencies(&mut self) {
        self.object_frequencies = incidence_counts(&self.context, Axis::Object)
            .into_iter()
            .map(Some)
            .collect();
        self.attribute_frequencies = incidence_counts(&self.context, Axis::Attribute)
            .into_iter()
            .map(Some)
            .collect();
    }
}

fn incidence_counts(ctx: &FormalContext, axis: Axis) -> Vec<u64> {
    let bits = match axis {
        Axis::Object => ctx.rows(),
        Axis::Attribute => ctx.columns(),
    };
    bits.iter().map(|b| b.count_ones(..) as u64).collect()
}

/// Serializes `ctx`. With `extended`, every attribute and object carries its
/// incidence count as `Frequency`.
pub fn write_cex(ctx: &FormalContext, extended: bool) -> String {
    let frequency = |count: usize| {
        if extended {
            format!(" Frequency=\"{count}\"")
        } else {
            String::new()
        }
    };
    let mut out = String::new();
    out.push_str(
        "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?><ConceptualSystem><Version MajorNumber=\"1\" MinorNumber=\"0\"/>\n",
    );
    out.push_str("<Contexts><Context Identifier=\"0\" Type=\"Binary\">\n<Attributes>\n");
    for (j, label) in ctx.attributes().iter().enumerate() {
        let _ = writeln!(
            out,
            "<Attribute{} Identifier=\"{j}\"><Name Identifier=\"{j}\">{}</Name></Attribute>",
            frequency(ctx.column(j).count_ones(..)),
            escape(label.as_str())
        );
    }
    out.push_str("</Attributes>\n<Objects>\n");
    for (i, label) in ctx.objects().iter().enumerate() {
        let row = ctx.row(i);
        let _ = write!(
            out,
            "<Object{}><Name>{}</Name>",
            frequency(row.count_ones(..)),
            escape(label.as_str())
        );
        if row.count_ones(..) == 0 {
            out.push_str("<Intent/>");
        } else {
            out.push_str("<Intent>");
            for j in row.ones() {
                let _ = write!(out, "<HasAttribute AttributeIdentifier=\"{j}\"/>");
            }
            out.push_str("</Intent>");
        }
        out.push_str("</Object>\n");
    }
    out.push_str("</Objects>\n</Context></Contexts><RecalculationPolicy Value=\"Clear\"/><Lattices/></ConceptualSystem>\n");
    out
}

#[derive(Default)]
struct RawAttribute {
    identifier: String,
    frequency: Option<u64>,
    name: String,
}

#[derive(Default)]
struct RawObject {
    frequency: Option<u64>,
    name: String,
    intent: Vec<String>,
}

fn xml_error(reader: &Reader<&[u8]>, message: impl ToString) -> CexError {
    CexError::Xml {
        position: reader.buffer_position(),
        message: message.to_string(),
    }
}

fn attribute(
    reader: &Reader<&[u8]>,
    e: &BytesStart,
    name: &str,
) -> Result<Option<String>, CexError> {
    match e
        .try_get_attribute(name)
        .map_err(|err| xml_error(reader, err))?
    {
        Some(a) => Ok(Some(
            a.unescape_value()
                .map_err(|err| xml_error(reader, err))?
                .into_owned(),
        )),
        None => Ok(None),
    }
}

fn frequency(reader: &Reader<&[u8]>, e: &BytesStart) -> Result<Option<u64>, CexError> {
    attribute(reader, e, "Frequency")?
        .map(|f| {
            f.trim().parse::<u64>().map_err(|_| {
                CexError::UnsupportedDocument(format!("Frequency `{f}` is not a count"))
            })
        })
        .transpose()
}

/// Parses the first binary context of a document. Lattice sections and
/// recalculation policies are skipped.
pub fn read_cex(bytes: &[u8]) -> Result<CexDocument, CexError> {
    let text = std::str::from_utf8(bytes).map_err(|e| CexError::Xml {
        position: e.valid_up_to(),
        message: "input is not UTF-8".into(),
    })?;
    let mut reader = Reader::from_str(text);
    reader.check_end_names(true);

    let mut stack: Vec<String> = Vec::new();
    let mut saw_root = false;
    // Depth of the binary context being read, once found.
    let mut active: Option<usize> = None;
    let mut finished = false;
    let mut other_types: Vec<String> = Vec::new();
    let mut attributes: Vec<RawAttribute> = Vec::new();
    let mut objects: Vec<RawObject> = Vec::new();
    let mut name_text: Option<String> = None;

    loop {
        let event = reader.read_event().map_err(|e| xml_error(&reader, e))?;
        let (e, empty) = match event {
            Event::Start(e) => (e, false),
            Event::Empty(e) => (e, true),
            Event::End(_) => {
                let closed = stack.pop();
                if let (Some("Name"), Some(text)) = (closed.as_deref(), name_text.take()) {
                    if stack.last().map(String::as_str) == Some("Attribute") {
                        if let Some(a) = attributes.last_mut() {
                            a.name = text;
                        }
                    } else if let Some(o) = objects.last_mut() {
                        o.name = text;
                    }
                }
                if active == Some(stack.len()) {
                    active = None;
                    finished = true;
                }
                continue;
            }
            Event::Text(t) => {
                let t = t.unescape().map_err(|e| xml_error(&reader, e))?;
                if stack.is_empty() && !t.trim().is_empty() {
                    return Err(xml_error(&reader, "text outside the root element"));
                }
                if let Some(buf) = name_text.as_mut() {
                    buf.push_str(&t);
                }
                continue;
            }
            Event::CData(t) => {
                if let Some(buf) = name_text.as_mut() {
                    buf.push_str(&String::from_utf8_lossy(&t));
                }
                continue;
            }
            Event::Eof => break,
            _ => continue,
        };
        let tag = String::from_utf8_lossy(e.name().as_ref()).into_owned();
        if stack.is_empty() {
            if saw_root {
                return Err(xml_error(&reader, "more than one root element"));
            }
            saw_root = true;
            if tag != "ConceptualSystem" {
                return Err(CexError::UnsupportedDocument(format!(
                    "root element is <{tag}>, not <ConceptualSystem>"
                )));
            }
        }
        let parent = stack.last().map(String::as_str);
        let in_context = active.is_some();
        match (tag.as_str(), parent) {
            ("Context", Some("Contexts")) if !finished && !in_context => {
                let kind = attribute(&reader, &e, "Type")?.unwrap_or_default();
                if kind == "Binary" {
                    active = Some(stack.len());
                } else {
                    other_types.push(kind);
                }
            }
            ("Attribute", Some("Attributes")) if in_context => {
                let identifier = attribute(&reader, &e, "Identifier")?.ok_or_else(|| {
                    CexError::UnsupportedDocument("Attribute without Identifier".into())
                })?;
                attributes.push(RawAttribute {
                    identifier,
                    frequency: frequency(&reader, &e)?,
                    name: String::new(),
                });
            }
            ("Object", Some("Objects")) if in_context => objects.push(RawObject {
                frequency: frequency(&reader, &e)?,
                ..RawObject::default()
            }),
            ("Name", Some("Attribute" | "Object")) if in_context && !empty => {
                name_text = Some(String::new())
            }
            ("HasAttribute", Some("Intent")) if in_context => {
                let id = attribute(&reader, &e, "AttributeIdentifier")?.ok_or_else(|| {
                    CexError::UnsupportedDocument("HasAttribute without AttributeIdentifier".into())
                })?;
                if let Some(o) = objects.last_mut() {
                    o.intent.push(id);
                }
            }
            _ => {}
        }
        if !empty {
            stack.push(tag);
        } else if active == Some(stack.len()) {
            // <Context .../> with nothing inside.
            active = None;
            finished = true;
        }
    }
    if !stack.is_empty() {
        return Err(xml_error(
            &reader,
            format!("unclosed element <{}>", stack.last().unwrap()),
        ));
    }
    if !saw_root {
        return Err(xml_error(&reader, "no root element"));
    }
    if !finished {
        return Err(CexError::UnsupportedDocument(if other_types.is_empty() {
            "no context".into()
        } else {
            format!("no Binary context (found {})", other_types.join(", "))
        }));
    }
    assemble(attributes, objects)
}

fn assemble(
    mut attributes: Vec<RawAttribute>,
    objects: Vec<RawObject>,
) -> Result<CexDocument, CexError> {
    let mut keyed = Vec::with_capacity(attributes.len());
    for a in attributes.drain(..) {
        let key: u64 = a.identifier.trim().parse().map_err(|_| {
            CexError::UnsupportedDocument(format!(
                "attribute Identifier `{}` is not a number",
                a.identifier
            ))
        })?;
        keyed.push((key, a));
    }
    keyed.sort_by_key(|(k, _)| *k);
    let mut column_of: HashMap<&str, usize> = HashMap::new();
    for (j, (_, a)) in keyed.iter().enumerate() {
        if column_of.insert(a.identifier.as_str(), j).is_some() {
            return Err(CexError::UnsupportedDocument(format!(
                "duplicate attribute Identifier `{}`",
                a.identifier
            )));
        }
    }
    let m = keyed.len();
    let mut rows = Vec::with_capacity(objects.len());
    for o in &objects {
        let mut row = FixedBitSet::with_capacity(m);
        for id in &o.intent {
            let j = column_of
                .get(id.as_str())
                .ok_or_else(|| CexError::DanglingReference {
                    object: o.name.clone(),
                    identifier: id.clone(),
                })?;
            row.insert(*j);
        }
        rows.push(row);
    }
    let attribute_frequencies: Vec<Option<u64>> = keyed.iter().map(|(_, a)| a.frequency).collect();
    let object_frequencies: Vec<Option<u64>> = objects.iter().map(|o| o.frequency).collect();
    let extended = attribute_frequencies
        .iter()
        .chain(&object_frequencies)
        .any(Option::is_some);
    let context = FormalContext::from_bit_rows(
        objects.into_iter().map(|o| o.name).collect(),
        keyed.into_iter().map(|(_, a)| a.name).collect(),
        rows,
    )?;
    Ok(CexDocument {
        context,
        extended,
        object_frequencies,
        attribute_frequencies,
    })
}
