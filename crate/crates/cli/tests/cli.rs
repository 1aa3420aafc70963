use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use quasisep::generators::{random_qs, RepKind};
use quasisep::orders::lower_left_triangular;
use quasisep::{DenseMatrix, PrimeField};
use quasisep_cli::bench::CSV_HEADER;
use quasisep_cli::format;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasisep")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn generate_is_deterministic_and_matches_the_library() {
    let a = run(&["generate", "--n", "20", "--rl", "2", "--ru", "3", "--seed", "42"]);
    let b = run(&["generate", "--n", "20", "--rl", "2", "--ru", "3", "--seed", "42"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let f = PrimeField::new(65521).unwrap();
    let want = random_qs(20, 2, 3, 42, f).unwrap();
    assert_eq!(format::parse_matrix(&stdout(&a)).unwrap(), want);
    let c = run(&["generate", "--n", "20", "--rl", "2", "--ru", "3", "--seed", "43"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn zero_targets_give_a_diagonal_matrix() {
    let o = run(&["generate", "--n", "6", "--prime", "7", "--seed", "1"]);
    let m = format::parse_matrix(&stdout(&o)).unwrap();
    assert_eq!(m, DenseMatrix::from_diagonal(m.field(), &m.diagonal()));
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("d.txt");
    fs::write(&file, stdout(&o)).unwrap();
    let report = stdout(&run(&["analyze", p(&file)]));
    assert!(report.contains("orders 0 0\n"), "{report}");
}

#[test]
fn analyze_reports_orders() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("m.txt");
    assert!(run(&["generate", "--n", "24", "--rl", "3", "--ru", "1", "--seed", "5", "--out", p(&file)]).status.success());
    let report = stdout(&run(&["analyze", p(&file)]));
    assert!(report.starts_with("n 24\np 65521\norders 3 1\n"), "{report}");
    assert_eq!(report.lines().count(), 5);
}

#[test]
fn analyze_embedded_example() {
    // row reversal of the strictly lower part is [[1,1,0],[1,0,0],[0,0,0]]
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("m.txt");
    fs::write(&file, "3 3 7\n2 0 0\n1 2 0\n1 1 2\n").unwrap();
    let report = stdout(&run(&["analyze", p(&file)]));
    assert!(report.contains("orders 1 0\n"), "{report}");
}

#[test]
fn parse_errors_exit_two_with_a_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.txt");
    fs::write(&file, "2 2 7\n1 2\n3 x\n").unwrap();
    let o = run(&["analyze", p(&file)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(run(&["analyze", "/nonexistent/file"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["generate", "--n", "4", "--prime", "8"]).status.code(), Some(2));
}

#[test]
fn compress_decompress_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.txt");
    run(&["generate", "--n", "40", "--rl", "4", "--ru", "2", "--seed", "9", "--out", p(&m)]);
    for kind in ["tree", "bruhat", "compact"] {
        let g = dir.path().join(format!("{kind}.qs"));
        let o = run(&["compress", p(&m), "--kind", kind, "--out", p(&g)]);
        assert!(o.status.success());
        let back = stdout(&run(&["decompress", p(&g)]));
        assert_eq!(back, fs::read_to_string(&m).unwrap(), "{kind}");
        assert_eq!(run(&["verify", "--gen", p(&g), "--input", p(&m)]).status.code(), Some(0));
    }
}

#[test]
fn compress_zero_matrix_gives_empty_generators() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("z.txt");
    fs::write(&m, "3 3 5\n0 0 0\n0 0 0\n0 0 0\n").unwrap();
    let o = run(&["compress", p(&m), "--kind", "bruhat"]);
    assert_eq!(stdout(&o), "QS 3 5 bruhat\n0 0 0\nBRUHAT 3 5 0\nBRUHAT 3 5 0\n");
    assert!(String::from_utf8_lossy(&o.stderr).contains("total stored=3"));
}

#[test]
fn order_five_n80_compress_reports_at_most_750() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.txt");
    run(&["generate", "--n", "80", "--rl", "5", "--ru", "5", "--seed", "1", "--out", p(&m)]);
    let o = run(&["compress", p(&m), "--kind", "bruhat", "--out", p(&dir.path().join("g"))]);
    let report = String::from_utf8(o.stderr).unwrap();
    for line in report.lines().take(2) {
        assert!(line.contains("order=5"), "{line}");
        let stored: usize = field(line, "stored").parse().unwrap();
        assert!(stored <= 750 && field(line, "2s(n-s)") == "750", "{line}");
    }
}

fn field<'a>(line: &'a str, key: &str) -> &'a str {
    line.split(' ').find_map(|kv| kv.strip_prefix(key).and_then(|v| v.strip_prefix('='))).unwrap()
}

#[test]
fn bench_stored_elems_match_compress_report() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.txt");
    run(&["generate", "--n", "48", "--rl", "3", "--ru", "3", "--seed", "11", "--out", p(&m)]);
    let o = run(&["compress", p(&m), "--kind", "bruhat", "--out", p(&dir.path().join("g"))]);
    let report = String::from_utf8(o.stderr).unwrap();
    let stored = field(report.lines().next().unwrap(), "stored").to_string();
    let csv = stdout(&run(&["bench", "--algo", "lt_bruhat", "--n", "48", "--s", "3", "--seed", "11"]));
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[10], stored);
    assert_eq!(row[3], "3");
}

#[test]
fn bench_csv_shape() {
    let empty = run(&["bench"]);
    assert_eq!(stdout(&empty), format!("{CSV_HEADER}\n"));
    let args = ["bench", "--algo", "lt_rpm,tree", "--n", "16,32", "--s", "1,2", "--seed", "3", "--no-wall"];
    let a = stdout(&run(&args));
    assert_eq!(a, stdout(&run(&args)));
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 1 + 8);
    assert!(lines[1].starts_with("lt_rpm,16,1,"));
    assert!(lines[8].starts_with("tree,32,2,"));
    assert!(lines[1..].iter().all(|l| l.split(',').nth(9) == Some("0")));
    assert_eq!(run(&["bench", "--n", "4", "--s", "4"]).status.code(), Some(2));
    assert_eq!(run(&["bench", "--algo", "nope", "--n", "8"]).status.code(), Some(2));
}

#[test]
fn verify_scopes_and_trials() {
    let o = run(&["verify", "all", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 10);
    for scope in ["pluq", "orders", "generators", "ops"] {
        let o = run(&["verify", scope, "--trials", "3", "--seed", "8"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).all(|l| l.contains(&format!(" {scope}."))));
    }
    assert_eq!(run(&["verify", "everything"]).status.code(), Some(2));
}

#[test]
fn corrupted_generator_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.txt");
    run(&["generate", "--n", "16", "--rl", "2", "--ru", "2", "--seed", "4", "--out", p(&m)]);
    for kind in ["tree", "bruhat", "compact"] {
        let g = dir.path().join(kind);
        run(&["compress", p(&m), "--kind", kind, "--out", p(&g)]);
        let text = fs::read_to_string(&g).unwrap();
        // bump the first diagonal value
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let mut vals: Vec<u64> = lines[1].split(' ').map(|v| v.parse().unwrap()).collect();
        vals[0] = (vals[0] + 1) % 65521;
        lines[1] = vals.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        fs::write(&g, lines.join("\n") + "\n").unwrap();
        let o = run(&["verify", "--gen", p(&g), "--input", p(&m)]);
        assert_eq!(o.status.code(), Some(1), "{kind}");
        assert!(stdout(&o).starts_with("FAIL reconstruction"));
        // structural damage is a check failure too
        fs::write(&g, text.replacen("QS 16", "QS 15", 1)).unwrap();
        assert_eq!(run(&["verify", "--gen", p(&g), "--input", p(&m)]).status.code(), Some(1));
    }
}

#[test]
fn apply_and_multiply_match_dense() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, v) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("v"));
    run(&["generate", "--n", "20", "--rl", "2", "--ru", "1", "--seed", "1", "--out", p(&a)]);
    run(&["generate", "--n", "20", "--rl", "1", "--ru", "2", "--seed", "2", "--out", p(&b)]);
    let f = PrimeField::new(65521).unwrap();
    let x: Vec<u64> = (1..=20).collect();
    fs::write(&v, format::write_matrix(&DenseMatrix::from_row_major(f, 20, 1, x.clone()).unwrap())).unwrap();
    let ma = format::parse_matrix(&fs::read_to_string(&a).unwrap()).unwrap();
    let mb = format::parse_matrix(&fs::read_to_string(&b).unwrap()).unwrap();
    let dense = stdout(&run(&["multiply", p(&a), p(&b)]));
    let mut c = quasisep::OpCounter::new();
    assert_eq!(format::parse_matrix(&dense).unwrap(), quasisep::matrix::mat_mul(&ma, &mb, &mut c).unwrap());
    let want_y = ma.matvec(&x, &mut c).unwrap();
    for kind in [RepKind::Tree, RepKind::Bruhat, RepKind::Compact] {
        let (qa, qb) = (dir.path().join("qa"), dir.path().join("qb"));
        run(&["compress", p(&a), "--kind", kind.name(), "--out", p(&qa)]);
        run(&["compress", p(&b), "--kind", kind.name(), "--out", p(&qb)]);
        assert_eq!(stdout(&run(&["multiply", p(&qa), p(&qb)])), dense);
        let y = format::parse_matrix(&stdout(&run(&["apply", p(&qa), "--vec", p(&v)]))).unwrap();
        assert_eq!(y.column(0), want_y);
    }
    // a single generator file applies its left triangular matrix
    let lower = lower_left_triangular(&ma);
    let g = dir.path().join("g");
    fs::write(&g, "QS").unwrap();
    let rep = quasisep::generators::LtRep::build(&lower, RepKind::Bruhat, Default::default(), &mut c).unwrap();
    fs::write(&g, format::write_lt_file(&rep)).unwrap();
    let y = format::parse_matrix(&stdout(&run(&["apply", p(&g), "--vec", p(&v)]))).unwrap();
    assert_eq!(y.column(0), lower.matvec(&x, &mut c).unwrap());
}
