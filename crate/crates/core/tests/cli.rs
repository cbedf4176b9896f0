use std::fs;
use std::path::Path;

use chunklz::cli::{self, CSV_HEADER, EXIT_CORRUPT, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use chunklz::corpus::{generate, GeneratorSpec};

fn run(args: &[&str]) -> i32 {
    cli::run(std::iter::once("chunklz").chain(args.iter().copied()))
}

fn s(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

#[test]
fn compress_then_decompress_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.bin");
    let packed = dir.path().join("in.plz");
    let output = dir.path().join("out.bin");
    let csv = dir.path().join("runs.csv");
    let data = generate(&GeneratorSpec::quantlike(300_001, 3, 0.9, 2)).unwrap();
    fs::write(&input, &data).unwrap();

    for flags in [
        vec!["-S", "2", "-W", "128", "-C", "2048"],
        vec!["-S", "4", "--level", "1", "-C", "4096", "-I", "4"],
        vec!["-S", "1", "-W", "255", "--block-bytes", "65536"],
    ] {
        let mut args = vec!["compress", "--csv", s(&csv)];
        args.extend(flags);
        args.extend([s(&input), s(&packed)]);
        assert_eq!(run(&args), EXIT_OK, "{args:?}");
        assert_eq!(
            run(&["decompress", "--threads", "2", s(&packed), s(&output)]),
            EXIT_OK
        );
        assert_eq!(fs::read(&output).unwrap(), data);
    }

    let rows = fs::read_to_string(&csv).unwrap();
    let mut lines = rows.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    assert_eq!(lines.count(), 3);
}

#[test]
fn empty_file_roundtrips() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty");
    let packed = dir.path().join("empty.plz");
    let output = dir.path().join("empty.out");
    fs::write(&input, b"").unwrap();
    assert_eq!(run(&["compress", s(&input), s(&packed)]), EXIT_OK);
    assert_eq!(run(&["decompress", s(&packed), s(&output)]), EXIT_OK);
    assert!(fs::read(&output).unwrap().is_empty());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.bin");
    let packed = dir.path().join("in.plz");
    let output = dir.path().join("out.bin");
    fs::write(&input, vec![7u8; 10_000]).unwrap();

    assert_eq!(
        run(&["compress", "-S", "3", s(&input), s(&packed)]),
        EXIT_USAGE
    );
    assert_eq!(
        run(&["compress", "-C", "100", s(&input), s(&packed)]),
        EXIT_USAGE
    );
    let missing = dir.path().join("missing");
    assert_eq!(run(&["compress", s(&missing), s(&packed)]), EXIT_FAILURE);

    assert_eq!(run(&["compress", s(&input), s(&packed)]), EXIT_OK);
    let mut bytes = fs::read(&packed).unwrap();
    bytes[0] = b'X';
    fs::write(&packed, &bytes).unwrap();
    assert_eq!(run(&["decompress", s(&packed), s(&output)]), EXIT_CORRUPT);

    fs::write(&packed, &bytes[..20]).unwrap();
    assert_eq!(run(&["decompress", s(&packed), s(&output)]), EXIT_CORRUPT);
}

#[test]
fn tune_stats_and_bench() {
    let dir = tempfile::tempdir().unwrap();
    let field = dir.path().join("field.bin");
    fs::write(
        &field,
        generate(&GeneratorSpec::quantlike(200_000, 5, 0.9, 2)).unwrap(),
    )
    .unwrap();

    let report = dir.path().join("tune.txt");
    assert_eq!(
        run(&[
            "tune",
            "--declared-width",
            "2",
            "--out",
            s(&report),
            s(&field)
        ]),
        EXIT_OK
    );
    let text = fs::read_to_string(&report).unwrap();
    assert!(text.contains("symbol_width: 2\n"), "{text}");
    assert!(text.contains("window: 255\n"), "{text}");

    let hist = dir.path().join("hist.csv");
    assert_eq!(
        run(&["stats", "-S", "2", "--out", s(&hist), s(&field)]),
        EXIT_OK
    );
    assert!(fs::read_to_string(&hist)
        .unwrap()
        .starts_with("length,count,"));

    let bench = dir.path().join("bench.csv");
    let code = run(&[
        "bench",
        "--corpus",
        "runlen",
        "--size",
        "100000",
        "-W",
        "32,255",
        "-I",
        "1,4",
        "--csv",
        s(&bench),
    ]);
    assert_eq!(code, EXIT_OK);
    let rows = fs::read_to_string(&bench).unwrap();
    assert_eq!(rows.lines().count(), 1 + 4);
    assert!(rows.lines().skip(1).all(|r| r.starts_with("runlen,")));
}
