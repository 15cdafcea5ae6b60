//! ARFF reader for MULAN-style multilabel corpora.
//!
//! Supported: `@relation`, `@attribute` of type `numeric`/`real`/`integer` or a
//! nominal `{...}` list, and `@data` rows in dense or sparse (`{idx val, ...}`)
//! form. String, date and relational attributes are rejected. Label attributes
//! are found by name (from the MULAN XML label list) or taken as the trailing
//! attributes when only a label count is known.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mldata::{Labelset, MultilabelDataset};

/// How label attributes are located among the ARFF attributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelLayout {
    /// Label attribute names, in label-index order.
    Names(Vec<String>),
    /// The last `n` attributes are labels.
    Trailing(usize),
}

#[derive(Debug, Clone)]
enum AttrKind {
    Numeric,
    Nominal(Vec<String>),
}

#[derive(Debug, Clone)]
struct Attribute {
    name: String,
    kind: AttrKind,
}

/// Reads the `<label name="..."/>` entries of a MULAN label file, flattening any
/// hierarchy, in document order.
pub fn read_label_xml(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_label_xml(&text, &path.display().to_string())
}

pub fn parse_label_xml(text: &str, origin: &str) -> Result<Vec<String>> {
    let mut names = Vec::new();
    let mut rest = text;
    let mut offset = 0;
    while let Some(pos) = rest.find("<label") {
        let after = &rest[pos + "<label".len()..];
        // skip `<labels` and similar longer tags
        if !after.starts_with(|c: char| c.is_whitespace() || c == '/' || c == '>') {
            offset += pos + 1;
            rest = &rest[pos + 1..];
            continue;
        }
        let tag_end = after.find('>').ok_or_else(|| {
            Error::parse(origin, line_of(text, offset + pos), "unterminated <label> tag")
        })?;
        let tag = &after[..tag_end];
        let name = attribute_value(tag, "name").ok_or_else(|| {
            Error::parse(origin, line_of(text, offset + pos), "<label> without a name attribute")
        })?;
        names.push(decode_entities(&name));
        let consumed = pos + "<label".len() + tag_end;
        offset += consumed;
        rest = &rest[consumed..];
    }
    if names.is_empty() {
        return Err(Error::parse(origin, 1, "no <label> entries found"));
    }
    Ok(names)
}

fn line_of(text: &str, byte: usize) -> usize {
    text[..byte.min(text.len())].matches('\n').count() + 1
}

fn attribute_value(tag: &str, attr: &str) -> Option<String> {
    let mut search = tag;
    while let Some(pos) = search.find(attr) {
        let before_ok = pos == 0 || search[..pos].ends_with(char::is_whitespace);
        let after = search[pos + attr.len()..].trim_start();
        if before_ok {
            if let Some(after_eq) = after.strip_prefix('=') {
                let after_eq = after_eq.trim_start();
                let quote = after_eq.chars().next()?;
                if quote == '"' || quote == '\'' {
                    let body = &after_eq[1..];
                    let end = body.find(quote)?;
                    return Some(body[..end].to_string());
                }
            }
        }
        search = &search[pos + attr.len()..];
    }
    None
}

fn decode_entities(s: &str) -> String {
    s.replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&apos;", "'")
        .replace("&amp;", "&")
}

/// Reads an ARFF file from disk.
pub fn read_arff(path: &Path, layout: &LabelLayout) -> Result<MultilabelDataset> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_arff(&text, layout, &path.display().to_string())
}

/// Parses ARFF text. `origin` names the source in error messages.
pub fn parse_arff(text: &str, layout: &LabelLayout, origin: &str) -> Result<MultilabelDataset> {
    let mut attributes: Vec<Attribute> = Vec::new();
    let mut lines = text.lines().enumerate();
    let mut in_data = false;

    for (no, raw) in lines.by_ref() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let lower = line.to_ascii_lowercase();
        if lower.starts_with("@relation") {
            continue;
        } else if lower.starts_with("@attribute") {
            attributes.push(parse_attribute(&line["@attribute".len()..], origin, no + 1)?);
        } else if lower.starts_with("@data") {
            in_data = true;
            break;
        } else {
            return Err(Error::parse(origin, no + 1, format!("unexpected header line {line:?}")));
        }
    }
    if !in_data {
        return Err(Error::parse(origin, text.lines().count(), "missing @data section"));
    }

    let (label_attrs, label_names) = locate_labels(&attributes, layout, origin)?;
    let label_count = label_attrs.len();
    // attribute index -> Some(label index) for label columns
    let mut label_of = vec![None; attributes.len()];
    for (l, &a) in label_attrs.iter().enumerate() {
        label_of[a] = Some(l);
    }
    // attribute index -> feature column
    let mut feature_of = vec![None; attributes.len()];
    let mut n_features = 0;
    for (a, slot) in feature_of.iter_mut().enumerate() {
        if label_of[a].is_none() {
            *slot = Some(n_features);
            n_features += 1;
        }
    }

    let mut features = Vec::new();
    let mut labelsets = Vec::new();
    let mut row = vec![0.0; n_features];
    let mut labels: Vec<usize> = Vec::new();
    for (no, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let line_no = no + 1;
        row.iter_mut().for_each(|v| *v = 0.0);
        labels.clear();
        let mut assign = |attr: usize, token: &str| -> Result<()> {
            let a = attributes.get(attr).ok_or_else(|| {
                Error::parse(origin, line_no, format!("attribute index {attr} out of range"))
            })?;
            let value = parse_value(a, token).map_err(|msg| Error::parse(origin, line_no, msg))?;
            match label_of[attr] {
                Some(l) => {
                    if value == 1.0 {
                        labels.push(l);
                    } else if value != 0.0 {
                        return Err(Error::parse(
                            origin,
                            line_no,
                            format!("label attribute {:?} has non-binary value {token:?}", a.name),
                        ));
                    }
                }
                None => row[feature_of[attr].expect("non-label attribute")] = value,
            }
            Ok(())
        };
        if let Some(body) = line.strip_prefix('{') {
            let body = body.strip_suffix('}').ok_or_else(|| {
                Error::parse(origin, line_no, "unterminated sparse row")
            })?;
            for entry in split_values(body) {
                if entry.is_empty() {
                    continue;
                }
                let (idx, val) = entry.split_once(char::is_whitespace).ok_or_else(|| {
                    Error::parse(origin, line_no, format!("bad sparse entry {entry:?}"))
                })?;
                let idx: usize = idx.trim().parse().map_err(|_| {
                    Error::parse(origin, line_no, format!("bad sparse index {idx:?}"))
                })?;
                assign(idx, val.trim())?;
            }
        } else {
            let values = split_values(line);
            if values.len() != attributes.len() {
                return Err(Error::parse(
                    origin,
                    line_no,
                    format!("expected {} values, found {}", attributes.len(), values.len()),
                ));
            }
            for (attr, token) in values.iter().enumerate() {
                assign(attr, token)?;
            }
        }
        features.extend_from_slice(&row);
        labelsets.push(Labelset::new(labels.iter().copied()));
    }

    let ds = MultilabelDataset::from_flat(n_features, features, labelsets, label_count)?;
    ds.with_label_names(label_names)
}

fn locate_labels(
    attributes: &[Attribute],
    layout: &LabelLayout,
    origin: &str,
) -> Result<(Vec<usize>, Vec<String>)> {
    match layout {
        LabelLayout::Names(names) => {
            let mut idx = Vec::with_capacity(names.len());
            for name in names {
                let a = attributes.iter().position(|a| &a.name == name).ok_or_else(|| {
                    Error::parse(origin, 0, format!("label {name:?} not found among attributes"))
                })?;
                idx.push(a);
            }
            Ok((idx, names.clone()))
        }
        LabelLayout::Trailing(count) => {
            if *count == 0 || *count > attributes.len() {
                return Err(Error::parse(
                    origin,
                    0,
                    format!("cannot take {count} label attributes from {}", attributes.len()),
                ));
            }
            let start = attributes.len() - count;
            Ok((
                (start..attributes.len()).collect(),
                attributes[start..].iter().map(|a| a.name.clone()).collect(),
            ))
        }
    }
}

fn parse_attribute(rest: &str, origin: &str, line: usize) -> Result<Attribute> {
    let rest = rest.trim_start();
    let (name, type_part) = take_name(rest)
        .ok_or_else(|| Error::parse(origin, line, "malformed @attribute declaration"))?;
    let type_part = type_part.trim();
    let lower = type_part.to_ascii_lowercase();
    let kind = if lower == "numeric" || lower == "real" || lower == "integer" {
        AttrKind::Numeric
    } else if let Some(body) = type_part.strip_prefix('{') {
        let body = body
            .strip_suffix('}')
            .ok_or_else(|| Error::parse(origin, line, "unterminated nominal value list"))?;
        AttrKind::Nominal(split_values(body).into_iter().map(unquote).collect())
    } else {
        return Err(Error::parse(
            origin,
            line,
            format!("unsupported attribute type {type_part:?}"),
        ));
    };
    Ok(Attribute { name, kind })
}

/// Splits an attribute name (bare or quoted) from the remainder of the line.
fn take_name(s: &str) -> Option<(String, &str)> {
    let first = s.chars().next()?;
    if first == '\'' || first == '"' {
        let mut name = String::new();
        let mut escaped = false;
        for (i, c) in s[1..].char_indices() {
            if escaped {
                name.push(c);
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == first {
                return Some((name, &s[1 + i + 1..]));
            } else {
                name.push(c);
            }
        }
        None
    } else {
        let end = s.find(char::is_whitespace)?;
        Some((s[..end].to_string(), &s[end..]))
    }
}

/// Comma-separated tokens, respecting single and double quotes.
fn split_values(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quote: Option<char> = None;
    for c in s.chars() {
        match quote {
            Some(q) if c == q => {
                quote = None;
                cur.push(c);
            }
            Some(_) => cur.push(c),
            None if c == '\'' || c == '"' => {
                quote = Some(c);
                cur.push(c);
            }
            None if c == ',' => out.push(std::mem::take(&mut cur).trim().to_string()),
            None => cur.push(c),
        }
    }
    out.push(cur.trim().to_string());
    out
}

fn unquote(s: String) -> String {
    let t = s.trim();
    for q in ['\'', '"'] {
        if t.len() >= 2 && t.starts_with(q) && t.ends_with(q) {
            return t[1..t.len() - 1].to_string();
        }
    }
    t.to_string()
}

/// Numeric value of a token. Nominal values that parse as numbers keep that value;
/// other nominal values map to their position in the declared list.
fn parse_value(attr: &Attribute, token: &str) -> std::result::Result<f64, String> {
    let token = unquote(token.to_string());
    if token == "?" {
        return Err(format!("missing value for attribute {:?}", attr.name));
    }
    match &attr.kind {
        AttrKind::Numeric => token
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("bad numeric value {token:?} for {:?}", attr.name)),
        AttrKind::Nominal(values) => {
            if !values.contains(&token) {
                return Err(format!("value {token:?} not declared for {:?}", attr.name));
            }
            match token.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Ok(values.iter().position(|v| *v == token).unwrap() as f64),
            }
        }
    }
}
