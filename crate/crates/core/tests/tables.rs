use std::time::Instant;

use exceedance::ingest::ColumnData;
use exceedance::{parse_edge_list, read_table, write_table, ExperimentTable};

#[test]
fn million_row_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.csv");
    let n = 1_000_000;
    let mut t = ExperimentTable::new();
    t.push_int_column("j", (1..=n as i64).collect()).unwrap();
    t.push_real_column("p", (0..n).map(|i| 1.0 / (i as f64 + 3.0)).collect()).unwrap();
    t.metadata.insert("seed".into(), "7".into());

    let start = Instant::now();
    write_table(&path, &t).unwrap();
    let back = read_table(&path).unwrap();
    let elapsed = start.elapsed();

    assert_eq!(back, t);
    assert!(elapsed.as_secs_f64() < 5.0, "round trip took {elapsed:?}");
}

#[test]
fn pmf_table_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pmf.csv");
    let probs = vec![0.5, 0.14644660940672624, f64::MIN_POSITIVE, 1e-300, 0.1 + 0.2];
    let mut t = ExperimentTable::new();
    t.push_int_column("j", vec![1, 2, 3, 4, 5]).unwrap();
    t.push_real_column("prob", probs.clone()).unwrap();
    write_table(&path, &t).unwrap();
    let back = read_table(&path).unwrap();
    let ColumnData::Real(got) = back.column("prob").unwrap() else {
        panic!("prob column read back as integers")
    };
    assert_eq!(got.iter().map(|x| x.to_bits()).collect::<Vec<_>>(), probs.iter().map(|x| x.to_bits()).collect::<Vec<_>>());
    assert!(back.metadata.is_empty());
}

#[test]
fn nan_table_is_not_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nan.csv");
    let mut t = ExperimentTable::new();
    t.push_real_column("x", vec![1.0, f64::NAN]).unwrap();
    assert!(write_table(&path, &t).is_err());
    assert!(!path.exists());
}

#[test]
fn missing_file_reports_path() {
    let err = read_table(std::path::Path::new("/nonexistent/t.csv")).unwrap_err();
    assert!(err.to_string().contains("/nonexistent/t.csv"));
}

#[test]
fn degree_table_carries_symmetrization_note() {
    let seq = parse_edge_list("1 2\n2 3\n".as_bytes(), "toy").unwrap();
    let t = seq.to_table();
    assert_eq!(t.column("degree"), Some(&ColumnData::Int(vec![1, 2, 1])));
    assert!(t.metadata["degree"].contains("undirected"));
}
