//! Canonical CSV interchange format.
//!
//! Header: `f0,f1,...,f{f-1},labels:<L>`; each row holds the feature values
//! followed by the semicolon-joined label indices (empty for an empty labelset).
//! A bare `labels` header column is also accepted, in which case `L` is one more
//! than the largest label index seen. Floats are written in Rust's shortest
//! round-trip decimal form, so a save/load cycle is bit-exact.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mldata::{Labelset, MultilabelDataset};

pub fn to_csv_string(ds: &MultilabelDataset) -> String {
    let mut out = String::new();
    for c in 0..ds.n_features() {
        let _ = write!(out, "f{c},");
    }
    let _ = writeln!(out, "labels:{}", ds.label_count());
    for (x, y) in ds.rows().zip(ds.labelsets()) {
        for v in x {
            let _ = write!(out, "{v},");
        }
        let mut first = true;
        for l in y.iter() {
            if !first {
                out.push(';');
            }
            let _ = write!(out, "{l}");
            first = false;
        }
        out.push('\n');
    }
    out
}

pub fn save_csv(ds: &MultilabelDataset, path: &Path) -> Result<()> {
    fs::write(path, to_csv_string(ds)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_csv(path: &Path) -> Result<MultilabelDataset> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(&text, &path.display().to_string())
}

pub fn parse_csv(text: &str, origin: &str) -> Result<MultilabelDataset> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(origin, 1, "missing header"))?;
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    let (last, feature_cols) = columns.split_last().expect("split yields at least one field");
    for (c, name) in feature_cols.iter().enumerate() {
        if *name != format!("f{c}") {
            return Err(Error::parse(origin, 1, format!("expected column f{c}, found {name:?}")));
        }
    }
    let declared_labels = match last.split_once(':') {
        Some(("labels", count)) => Some(count.parse::<usize>().map_err(|_| {
            Error::parse(origin, 1, format!("bad label count {count:?}"))
        })?),
        None if *last == "labels" => None,
        _ => return Err(Error::parse(origin, 1, format!("expected labels column, found {last:?}"))),
    };

    let f = feature_cols.len();
    let mut features = Vec::new();
    let mut labelsets = Vec::new();
    for (no, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != f + 1 {
            return Err(Error::parse(
                origin,
                no + 1,
                format!("expected {} fields, found {}", f + 1, fields.len()),
            ));
        }
        for v in &fields[..f] {
            let parsed = v.trim().parse::<f64>().map_err(|_| {
                Error::parse(origin, no + 1, format!("bad feature value {v:?}"))
            })?;
            features.push(parsed);
        }
        let labels = fields[f].trim();
        let mut set = Vec::new();
        if !labels.is_empty() {
            for l in labels.split(';') {
                set.push(l.trim().parse::<usize>().map_err(|_| {
                    Error::parse(origin, no + 1, format!("bad label index {l:?}"))
                })?);
            }
        }
        labelsets.push(Labelset::new(set));
    }
    let label_count = declared_labels.unwrap_or_else(|| {
        labelsets
            .iter()
            .filter_map(Labelset::max_label)
            .max()
            .map_or(1, |m| m + 1)
    });
    MultilabelDataset::from_flat(f, features, labelsets, label_count)
}
