//! Corpus loading: MULAN ARFF + XML, the canonical CSV format, and synthetic blobs.

pub mod arff;
pub mod csv;
pub mod synthetic;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mldata::MultilabelDataset;

pub use self::arff::{parse_arff, read_arff, read_label_xml, LabelLayout};
pub use self::csv::{load_csv, parse_csv, save_csv};
pub use self::synthetic::{gen_synthetic, gen_synthetic_split, SyntheticSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    Arff,
    Csv,
}

/// A corpus file on disk.
///
/// ARFF sources need exactly one of `xml` (MULAN label list) or `label_count`
/// (the trailing attributes are labels).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSource {
    pub path: PathBuf,
    #[serde(default)]
    pub xml: Option<PathBuf>,
    #[serde(default)]
    pub label_count: Option<usize>,
    pub format: CorpusFormat,
}

impl CorpusSource {
    pub fn arff_with_xml(path: impl Into<PathBuf>, xml: impl Into<PathBuf>) -> Self {
        CorpusSource {
            path: path.into(),
            xml: Some(xml.into()),
            label_count: None,
            format: CorpusFormat::Arff,
        }
    }

    pub fn arff_with_label_count(path: impl Into<PathBuf>, label_count: usize) -> Self {
        CorpusSource {
            path: path.into(),
            xml: None,
            label_count: Some(label_count),
            format: CorpusFormat::Arff,
        }
    }

    pub fn csv(path: impl Into<PathBuf>) -> Self {
        CorpusSource {
            path: path.into(),
            xml: None,
            label_count: None,
            format: CorpusFormat::Csv,
        }
    }

    /// Infers the format from the file extension (`.csv` or ARFF otherwise).
    pub fn infer(path: &Path, xml: Option<PathBuf>, label_count: Option<usize>) -> Self {
        let is_csv = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        CorpusSource {
            path: path.to_path_buf(),
            xml,
            label_count,
            format: if is_csv { CorpusFormat::Csv } else { CorpusFormat::Arff },
        }
    }

    /// Resolves paths relative to `base`.
    pub fn relative_to(mut self, base: &Path) -> Self {
        if self.path.is_relative() {
            self.path = base.join(&self.path);
        }
        if let Some(xml) = &self.xml {
            if xml.is_relative() {
                self.xml = Some(base.join(xml));
            }
        }
        self
    }

    pub fn load(&self) -> Result<MultilabelDataset> {
        match self.format {
            CorpusFormat::Csv => load_csv(&self.path),
            CorpusFormat::Arff => load_arff(self),
        }
    }
}

pub fn load_arff(src: &CorpusSource) -> Result<MultilabelDataset> {
    let layout = match (&src.xml, src.label_count) {
        (Some(xml), None) => LabelLayout::Names(read_label_xml(xml)?),
        (None, Some(n)) => LabelLayout::Trailing(n),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "{}: ARFF sources need exactly one of an XML label file or a label count",
                src.path.display()
            )))
        }
    };
    read_arff(&src.path, &layout)
}
