use std::process::{Command, Output};

use rlwfem::experiments::CsvTable;

fn rlwfem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rlwfem"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn csv(out: &Output) -> CsvTable {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    CsvTable::parse(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

#[test]
fn dichotomy_rates_for_linears() {
    let t = csv(&rlwfem(&[
        "dichotomy-rates",
        "--k",
        "1",
        "--N",
        "10,20,50,100,200",
    ]));
    assert_eq!(t.columns, ["k", "N", "h", "error", "rate", "theory"]);
    assert!(t
        .comments
        .contains(&"N[k=1] = 10,20,50,100,200".to_string()));
    let rates: Vec<f64> = t.column("rate").unwrap().into_iter().flatten().collect();
    let published = [4.051, 4.011, 4.002, 4.001];
    assert_eq!(rates.len(), published.len());
    for (r, p) in rates.iter().zip(published) {
        assert!((r - p).abs() < 5e-3, "{r} vs {p}");
    }
    let theory: Vec<f64> = t.column("theory").unwrap().into_iter().flatten().collect();
    assert_eq!(theory, [4.0]);
}

#[test]
fn output_file_round_trips() {
    let dir = std::env::temp_dir().join(format!("rlwfem-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("d.csv");
    let p = path.to_str().unwrap();
    let out = rlwfem(&["dichotomy-rates", "--k", "3,2", "--N", "8,16", "--out", p]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let t = CsvTable::parse(&text).unwrap();
    assert_eq!(t.render(), text);
    // ordered by k as given, then N
    let ks: Vec<f64> = t.column("k").unwrap().into_iter().flatten().collect();
    assert_eq!(ks, [3.0, 3.0, 3.0, 2.0, 2.0, 2.0]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn conserve_echoes_config_and_holds_invariants() {
    let out = rlwfem(&[
        "conserve",
        "--domain",
        "-10,10",
        "--N",
        "200",
        "--t-end",
        "1",
        "--record-every",
        "25",
    ]);
    let t = csv(&out);
    for line in [
        "domain = -10,10",
        "t_end = 1",
        "record_every = 25",
        "relaxation = true",
    ] {
        assert!(t.comments.iter().any(|c| c == line), "missing `{line}`");
    }
    assert_eq!(t.rows.len(), 5);
    for row in &t.rows {
        assert!(row[1].unwrap() < 1e-12);
        assert!(row[3].unwrap() < 1e-12);
        assert!(row[4].unwrap().abs() < 1e-8);
    }
    let again = rlwfem(&[
        "conserve",
        "--domain",
        "-10,10",
        "--N",
        "200",
        "--t-end",
        "1",
        "--record-every",
        "25",
    ]);
    assert_eq!(out.stdout, again.stdout, "runs are deterministic");
}

#[test]
fn no_relax_flag_is_echoed() {
    let t = csv(&rlwfem(&[
        "conserve",
        "--domain",
        "-10,10",
        "--N",
        "100",
        "--t-end",
        "0.1",
        "--no-relax",
    ]));
    assert!(t.comments.iter().any(|c| c == "relaxation = false"));
    let gamma: Vec<f64> = t
        .column("gamma_minus_1")
        .unwrap()
        .into_iter()
        .flatten()
        .collect();
    assert!(gamma.iter().all(|g| *g == 0.0));
}

#[test]
fn config_errors_exit_with_two() {
    for args in [
        vec!["conserve", "--k", "1,2"],
        vec!["conserve", "--domain", "1,0"],
        vec!["rlw-converge", "--k", "1", "--N", "16", "--dt", "0.5"],
        vec!["rlw-converge", "--t-end", "2"],
        vec!["dichotomy-rates", "--k", "0"],
        vec!["impulse-rates", "--no-relax"],
        vec!["bogus"],
        vec!["conserve", "--dt", "abc"],
    ] {
        let out = rlwfem(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn rejected_relaxation_root_exits_with_three() {
    let out = rlwfem(&["conserve", "--N", "100", "--dt", "20", "--t-end", "40"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gamma"));
}
