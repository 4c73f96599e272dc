use std::process::{Command, Output};

use liealg::audit::CSV_HEADER;
use liealg::linalg::DenseMatrix;

fn liealg(args: &[&str], seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_liealg"));
    cmd.args(args).env_remove("LIEALG_SEED");
    if let Some(s) = seed {
        cmd.env("LIEALG_SEED", s);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn diffmat_dumps_three_node_matrix() {
    let o = liealg(&["diffmat", "--nodes", "0,1,2"], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let z = DenseMatrix::from_text(&stdout(&o)).unwrap();
    let want = DenseMatrix::from_rows(&[&[-1.5, 2.0, -0.5], &[-0.5, 0.0, 0.5], &[0.5, -2.0, 1.5]])
        .unwrap();
    assert!(z.sub(&want).unwrap().max_abs() < 1e-15);
}

#[test]
fn diffmat_reads_node_file_and_writes_out() {
    let dir = tempfile::tempdir().unwrap();
    let nodes = dir.path().join("nodes.txt");
    std::fs::write(&nodes, "# nodes\n-1\n0\n\n1\n").unwrap();
    let out = dir.path().join("z.txt");
    let o = liealg(
        &[
            "diffmat",
            "--nodes-file",
            nodes.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        None,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let z = DenseMatrix::from_text(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(z.rows(), 3);
    assert!((z[(1, 2)] - 0.5).abs() < 1e-15);
}

#[test]
fn config_file_supplies_command_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "command = table1\nn = 8\n").unwrap();
    let o = liealg(&["--config", cfg.to_str().unwrap(), "--n", "4"], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("lie-algebraic,4,"));
}

#[test]
fn table1_has_header_and_eight_rows() {
    let o = liealg(&["table1"], None);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "method,n,E,Emax,Eavg,rcond");
    assert_eq!(lines.len(), 9);
    for (i, n) in ["4", "8", "12", "16"].iter().enumerate() {
        assert!(lines[1 + i].starts_with(&format!("lie-algebraic,{n},")));
        assert!(lines[5 + i].starts_with(&format!("shooting,{n},")));
    }
}

#[test]
fn plot_data_has_blank_line_between_rows() {
    let o = liealg(&["plot-figure1", "--n1", "4", "--n2", "5"], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let blocks: Vec<&str> = text
        .split("\n\n")
        .filter(|b| !b.trim().is_empty())
        .collect();
    assert_eq!(blocks.len(), 6);
    for block in blocks {
        let rows: Vec<Vec<f64>> = block
            .lines()
            .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows.len(), 5);
        assert!(rows.iter().all(|r| r.len() == 3 && r[1] == rows[0][1]));
    }
}

#[test]
fn rank_audit_passes_and_is_csv() {
    let o = liealg(&["rank-audit"], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some(CSV_HEADER));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn same_seed_gives_identical_output() {
    for args in [&["table1"][..], &["rank-audit"][..]] {
        let a = liealg(args, Some("7"));
        let b = liealg(args, Some("7"));
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn errors_exit_nonzero_with_one_line() {
    for args in [
        &["table2"][..],
        &["diffmat", "--nodes", "0,1,1"][..],
        &["table1", "--n", "50"][..],
        &["diffmat"][..],
        &["--config", "/nonexistent/liealg.cfg"][..],
    ] {
        let o = liealg(args, None);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(
            stderr(&o).trim_end().lines().count(),
            1,
            "{args:?}: {}",
            stderr(&o)
        );
    }
    let o = liealg(&["rank-audit"], Some("not-a-number"));
    assert_eq!(o.status.code(), Some(2));
}
