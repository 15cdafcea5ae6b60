use std::fs;

use mlpg_core::corpus::{save_csv, CorpusFormat, CorpusSource};
use mlpg_core::{describe, Error, Labelset, MultilabelDataset};

const ARFF: &str = "\
% toy corpus
@relation toy
@attribute x1 numeric
@attribute x2 numeric
@attribute amazed {0,1}
@attribute calm {0,1}
@data
0.5,1.5,1,0
{0 2,3 1}
1,1,1,1
";

const XML: &str = r#"<?xml version="1.0" encoding="utf-8"?>
<labels xmlns="http://mulan.sourceforge.net/labels">
<label name="amazed"></label>
<label name="calm"></label>
</labels>
"#;

#[test]
fn arff_with_xml_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("toy.arff"), ARFF).unwrap();
    fs::write(dir.path().join("toy.xml"), XML).unwrap();
    let src = CorpusSource::arff_with_xml("toy.arff", "toy.xml").relative_to(dir.path());
    let ds = src.load().unwrap();
    assert_eq!(ds.len(), 3);
    assert_eq!(ds.row(1), &[2.0, 0.0]);
    assert_eq!(ds.labelsets(), &[Labelset::new([0]), Labelset::new([1]), Labelset::new([0, 1])]);
    let d = describe(&ds).unwrap();
    assert_eq!((d.n, d.f, d.labels), (3, 2, 2));
    assert!((d.cardinality - 4.0 / 3.0).abs() < 1e-12);

    let by_count = CorpusSource::arff_with_label_count(dir.path().join("toy.arff"), 2);
    assert_eq!(by_count.load().unwrap().labelsets(), ds.labelsets());
}

#[test]
fn csv_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let ds = MultilabelDataset::from_rows(
        vec![vec![0.1, -3.25e-7], vec![1e300, 2.0]],
        vec![Labelset::new([2]), Labelset::empty()],
        4,
    )
    .unwrap();
    let path = dir.path().join("out.csv");
    save_csv(&ds, &path).unwrap();
    let src = CorpusSource::infer(&path, None, None);
    assert_eq!(src.format, CorpusFormat::Csv);
    assert_eq!(src.load().unwrap(), ds);
}

#[test]
fn missing_file_is_an_io_error() {
    let src = CorpusSource::csv("/nonexistent/corpus.csv");
    assert!(matches!(src.load(), Err(Error::Io { .. })));
}
