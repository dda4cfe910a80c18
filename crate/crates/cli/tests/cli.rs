use std::io::Write;
use std::path::PathBuf;

use schur_eq_cli::{run, Outcome, EXIT_COMPUTATION, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION};
use schur_equilibrium::io::load_distribution;
use schur_equilibrium::{build_model, DiscreteDistribution};

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("schur-eq").chain(args.iter().copied()))
}

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    path.to_string_lossy().into_owned()
}

#[test]
fn coefficient_table_rows() {
    let out = cli(&["tables", "coeffs", "--n-max", "3", "--format", "csv"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.stdout, "r,2,3\n1,-1/2,1/6\n2,1/2,-1/2\n3,,1/3\n");
    let table = cli(&["tables", "coeffs", "--n-max", "3"]).stdout;
    assert!(table.lines().nth(1).unwrap().contains("-1/2"));
    assert!(table.lines().nth(3).unwrap().contains("1/3"));
    let json: serde_json::Value = serde_json::from_str(
        &cli(&["tables", "coeffs", "--n-max", "10", "--format", "json"]).stdout,
    )
    .unwrap();
    assert_eq!(json["a"]["10"][1], "-3/20");
}

#[test]
fn poisson_rho_single_cell() {
    let out = cli(&["tables", "poisson-rho", "--lambdas", "1", "--ns", "2"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(
        out.stdout.lines().nth(1).unwrap().split_whitespace().last(),
        Some("-0.14286")
    );
}

#[test]
fn geometric_rho_is_zero() {
    let out = cli(&[
        "model",
        "rho",
        "--family",
        "geometric",
        "--q",
        "0.5",
        "--n",
        "2",
    ]);
    assert_eq!(out.code, EXIT_OK);
    assert!(
        out.stdout.lines().nth(1).unwrap().ends_with("0.00000"),
        "{}",
        out.stdout
    );
}

#[test]
fn verify_exit_status() {
    let ok = cli(&["verify", "--family", "poisson", "--lambda", "1", "--n", "3"]);
    assert_eq!(ok.code, EXIT_OK, "{}{}", ok.stdout, ok.stderr);
    let from_json = cli(&[
        "verify",
        "--model",
        &fixture("poisson_n2.json"),
        "--format",
        "json",
    ]);
    assert_eq!(from_json.code, EXIT_OK);
    let report: serde_json::Value = serde_json::from_str(&from_json.stdout).unwrap();
    assert!(report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"] == true));
    let bad = cli(&["verify", "--model", &fixture("fault_injected.json")]);
    assert_eq!(bad.code, EXIT_VERIFICATION);
    assert!(bad.stdout.contains("FAIL"));
}

#[test]
fn computation_errors_exit_three() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "0.5\n0.5").unwrap();
    let path = file.path().to_str().unwrap();
    let out = cli(&["model", "marginal", "--pmf-file", path, "--n", "3"]);
    assert_eq!(out.code, EXIT_COMPUTATION);
    assert!(out.stderr.contains("mean"), "{}", out.stderr);
    assert_eq!(
        cli(&["eqdist", "--pmf-file", path, "--order", "2"]).code,
        EXIT_COMPUTATION
    );
    assert_eq!(
        cli(&["eqdist", "--pmf-file", path, "--order", "1"]).code,
        EXIT_OK
    );
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cli(&["model", "rho"]).code, EXIT_USAGE);
    assert_eq!(cli(&["bogus"]).code, EXIT_USAGE);
    assert_eq!(
        cli(&["model", "rho", "--family", "poisson", "--n", "2"]).code,
        EXIT_USAGE
    );
    assert_eq!(
        cli(&["model", "rho", "--family", "poisson", "--lambda", "-1", "--n", "2"]).code,
        EXIT_USAGE
    );
    assert_eq!(
        cli(&["model", "rho", "--family", "poisson", "--lambda", "1", "--n", "11"]).code,
        EXIT_USAGE
    );
    assert_eq!(
        cli(&[
            "model",
            "sum",
            "--pmf-file",
            "/nonexistent/pmf.txt",
            "--n",
            "2"
        ])
        .code,
        EXIT_USAGE
    );
    let both = cli(&["verify", "--model", &fixture("poisson_n2.json"), "--n", "2"]);
    assert_eq!(both.code, EXIT_USAGE);
}

#[test]
fn marginal_csv_round_trips() {
    for args in [
        vec!["--family", "poisson", "--lambda", "2.5", "--n", "3"],
        vec!["--family", "geometric", "--q", "0.7", "--n", "2"],
    ] {
        let mut argv = vec!["model", "marginal", "--format", "csv"];
        argv.extend(&args);
        let out = cli(&argv);
        assert_eq!(out.code, EXIT_OK);
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(out.stdout.as_bytes()).unwrap();
        let reloaded = load_distribution(file.path()).unwrap();

        let base = if args[1] == "poisson" {
            DiscreteDistribution::poisson(2.5).unwrap()
        } else {
            DiscreteDistribution::geometric(0.7).unwrap()
        };
        let n = args[args.len() - 1].parse().unwrap();
        let model = build_model(&base, n).unwrap();
        for x in 0..200 {
            let a = model.marginal().survival(x);
            assert!((reloaded.survival(x) - a).abs() < 1e-12, "x={x}");
        }
    }
}

#[test]
fn output_is_deterministic() {
    let argv = [
        "sample", "--family", "poisson", "--lambda", "1", "--n", "3", "--seed", "11", "--count",
        "500",
    ];
    let a = cli(&argv);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.stdout, cli(&argv).stdout);
    assert_eq!(a.stdout.lines().count(), 501);
    assert_eq!(a.stdout.lines().next(), Some("x1,x2,x3"));
    let other = cli(&[
        "sample", "--family", "poisson", "--lambda", "1", "--n", "3", "--seed", "12", "--count",
        "500",
    ]);
    assert_ne!(a.stdout, other.stdout);

    let table = ["tables", "poisson-rho"];
    assert_eq!(cli(&table).stdout, cli(&table).stdout);
}

#[test]
fn json_and_csv_keep_full_precision() {
    let out = cli(&[
        "model", "sum", "--family", "poisson", "--lambda", "1", "--n", "2", "--format", "json",
    ]);
    let json: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let p0 = json["pmf"][0].as_f64().unwrap();
    assert_eq!(p0, DiscreteDistribution::poisson(1.0).unwrap().pmf(0));

    let out = cli(&[
        "model", "joint", "--family", "poisson", "--lambda", "1", "--n", "2", "--point", "0,0",
        "--format", "csv",
    ]);
    let row = out.stdout.lines().nth(1).unwrap().to_string();
    let pmf: f64 = row.rsplit(',').nth(1).unwrap().parse().unwrap();
    assert!((pmf - (-1.0f64).exp()).abs() < 1e-15, "{row}");
}

#[test]
fn moments_and_eqdist() {
    let out = cli(&[
        "model",
        "moments",
        "--family",
        "geometric",
        "--q",
        "0.5",
        "--n",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(out.code, EXIT_OK);
    let rows: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 9);
    for r in rows.iter().filter(|r| r["j"] == 1) {
        assert!((r["moment"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }

    let out = cli(&[
        "eqdist",
        "--family",
        "geometric",
        "--q",
        "0.5",
        "--order",
        "4",
        "--x-max",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(out.stdout, "x,pmf\n0,0.5\n1,0.25\n2,0.125\n3,0.0625\n");
}
