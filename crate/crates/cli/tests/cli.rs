use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use treasury_core::simulator::{Advice, CashFlowStream, SimulationReport};
use treasury_core::{
    CashBudget, MillerOrrLevels, ReserveLevel, RolledBudget, SpeculativeVerdict, ValueImpact,
};

const CASE_ONE: &[&str] = &[
    "--rate",
    "0.18",
    "--basis",
    "360",
    "--avg-transfer",
    "27250",
    "--flow-sum",
    "817477",
    "--stddev",
    "35466",
    "--shortage-cost",
    "5000",
];

fn treasury() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_treasury"));
    c.env_remove("TREASURY_CONFIG");
    c
}

fn run(args: &[&str]) -> Output {
    treasury().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = treasury()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok_json<T: serde::de::DeserializeOwned>(args: &[&str]) -> T {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)))
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn with<'a>(base: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
    base.iter().chain(extra).copied().collect()
}

#[test]
fn lcl_reproduces_case_one() {
    let level: ReserveLevel = ok_json(&with(&["lcl"], &with(CASE_ONE, &["--format", "json"])));
    assert!(
        (level.value - 142_961.42).abs() <= 142_961.42 * 1e-3,
        "{}",
        level.value
    );
    assert!(!level.degenerate);

    let o = run(&with(&["lcl"], CASE_ONE));
    assert!(stdout(&o).contains("142959.19"), "{}", stdout(&o));
}

#[test]
fn lcl_impact_reproduces_case_one() {
    let impact: ValueImpact = ok_json(&with(
        &["lcl-impact", "--tax-rate", "0.2", "--format", "json"],
        CASE_ONE,
    ));
    assert!((impact.nwc_growth - 142_961.42).abs() <= 142_961.42 * 1e-3);
    assert!((impact.yearly_alt_cost - 25_733.0).abs() <= 1.0);
    assert!((impact.value_change - -257_330.0).abs() <= 5.0);

    let given: ValueImpact = ok_json(&[
        "lcl-impact",
        "--new",
        "142961.42",
        "--rate",
        "0.18",
        "--tax-rate",
        "0.2",
        "--format",
        "json",
    ]);
    assert_eq!(given.nwc_growth, 142_961.42);
}

#[test]
fn speculate_reproduces_case_two() {
    let o = run(&[
        "speculate",
        "--units",
        "10000",
        "--price",
        "1.00",
        "--sigma",
        "0.04",
        "--rate",
        "0.18",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "field,value\nexpected_benefit,199.90\ndaily_cost,5.00\nverdict,HOLD\n"
    );

    let v: SpeculativeVerdict = ok_json(&[
        "speculate",
        "--units",
        "10000",
        "--price",
        "1",
        "--sigma",
        "0.04",
        "--rate",
        "0.18",
        "--format",
        "json",
    ]);
    assert_eq!(
        (v.expected_benefit, v.daily_cost, v.hold),
        (199.9, 5.0, true)
    );
}

#[test]
fn zero_stream_has_no_transfers() {
    let dir = tempfile::tempdir().unwrap();
    let flows = write(dir.path(), "zero.csv", "day,net_flow\n1,0\n2,0\n3,0\n4,0\n");
    let traj = dir.path().join("traj.csv");
    for policy in ["miller-orr", "stone", "passive"] {
        let report: SimulationReport = ok_json(&[
            "simulate",
            "--flows",
            &flows,
            "--policy",
            policy,
            "--rate",
            "0.18",
            "--transfer-cost",
            "10",
            "--trajectory",
            traj.to_str().unwrap(),
            "--format",
            "json",
        ]);
        assert_eq!(report.transfer_count, 0, "{policy}");
        assert!(report.actions.is_empty());
    }
    let csv = std::fs::read_to_string(&traj).unwrap();
    assert!(
        csv.starts_with("day,flow,balance,action,amount\n1,0.00,"),
        "{csv}"
    );
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn flows_from_stdin() {
    let flows = "day,net_flow\n1,100\n2,-50\n3,25\n";
    let o = run_stdin(
        &[
            "simulate",
            "--flows",
            "-",
            "--policy",
            "passive",
            "--opening",
            "10",
            "--format",
            "json",
        ],
        flows,
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: SimulationReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report.final_balance(), 85.0);
}

#[test]
fn json_reports_round_trip() {
    let dir = tempfile::tempdir().unwrap();

    let levels: MillerOrrLevels = ok_json(&[
        "policy",
        "miller-orr",
        "--lower",
        "5000",
        "--transfer-cost",
        "10",
        "--daily-rate",
        "0.0004",
        "--variance",
        "1000000",
        "--format",
        "json",
    ]);
    assert_eq!((levels.target, levels.upper), (7656.65, 12969.94));

    let stream: CashFlowStream = ok_json(&[
        "generate", "--kind", "gaussian", "--stddev", "500", "--days", "30", "--seed", "7",
        "--format", "json",
    ]);
    assert_eq!(stream.len(), 30);
    let again: CashFlowStream = ok_json(&[
        "generate", "--kind", "gaussian", "--stddev", "500", "--days", "30", "--seed", "7",
        "--format", "json",
    ]);
    assert_eq!(stream, again);

    let flows = dir.path().join("g.csv");
    let o = run(&[
        "generate",
        "--kind",
        "mean-reverting",
        "--stddev",
        "1000",
        "--days",
        "100",
        "--seed",
        "1",
        "--out",
        flows.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let flows = flows.to_str().unwrap();

    let advice: Advice = ok_json(&[
        "advise",
        "--flows",
        flows,
        "--forecastable",
        "none",
        "--format",
        "json",
    ]);
    assert_eq!(advice.situation, Some(4));

    let configs = write(
        dir.path(),
        "configs.json",
        r#"[
          {"label": "band", "policy": {"model": "miller-orr", "band": {"lower_limit": 0, "transfer_cost": 10, "daily_rate": 0.0004, "daily_variance": 1000000}},
           "opening_balance": 2656.65, "holding_rate": 0.0004, "transfer_cost": 10, "shortage_cost": 100},
          {"label": "idle", "policy": {"model": "passive"}, "opening_balance": 0, "holding_rate": 0.0004, "transfer_cost": 10, "shortage_cost": 100}
        ]"#,
    );
    let ranked: Vec<SimulationReport> = ok_json(&[
        "compare",
        "--flows",
        flows,
        "--configs",
        &configs,
        "--format",
        "json",
    ]);
    assert_eq!(ranked.len(), 2);
    assert!(ranked[0].costs.total <= ranked[1].costs.total);
    let text = serde_json::to_string(&ranked).unwrap();
    assert_eq!(
        serde_json::from_str::<Vec<SimulationReport>>(&text).unwrap(),
        ranked
    );
}

#[test]
fn budget_build_and_roll() {
    let dir = tempfile::tempdir().unwrap();
    let rows = write(
        dir.path(),
        "b.csv",
        "period,granularity,sales,purchases,tax,interest,other\nm1,month,100,60,,,\nm2,month,120,70,10,,\nm3,month,90,50,,5,\n",
    );
    let b: CashBudget = ok_json(&[
        "budget",
        "build",
        "--input",
        &rows,
        "--opening",
        "50",
        "--profile",
        "0.2,0.5,0.2",
        "--format",
        "json",
    ]);
    let closing: Vec<f64> = b.rows.iter().map(|r| r.closing_balance).collect();
    assert_eq!(closing, vec![10.0, 4.0, 47.0]);
    assert_eq!(b.final_balance(), b.opening_balance + b.total_net_flow());

    let next = write(
        dir.path(),
        "n.csv",
        "period,granularity,sales,purchases\nm4,month,80,40\n",
    );
    let rolled: RolledBudget = ok_json(&[
        "budget",
        "roll",
        "--input",
        &rows,
        "--opening",
        "50",
        "--profile",
        "0.2,0.5,0.2",
        "--next",
        &next,
        "--format",
        "json",
    ]);
    assert_eq!(rolled.budget.rows.len(), 3);
    assert_eq!(rolled.budget.rows[0].label, "m2");
    assert_eq!(rolled.budget.opening_balance, 10.0);

    // The rolled assumptions feed the next roll; identical to building m2..m4 directly.
    let doc = write(
        dir.path(),
        "rolled.json",
        &serde_json::to_string(&rolled.assumptions).unwrap(),
    );
    let rebuilt: CashBudget = ok_json(&["budget", "build", "--input", &doc, "--format", "json"]);
    assert_eq!(rebuilt, rolled.budget);
}

#[test]
fn exit_codes() {
    let o = run(&["lcl", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Usage"), "{}", stderr(&o));

    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["lcl", "--rate", "0.18"]).status.code(), Some(1));
    assert_eq!(
        run(&[
            "speculate",
            "--units",
            "1",
            "--price",
            "1",
            "--sigma",
            "0.1"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        run(&["value", "--deltas", "100", "--rate", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "lcl-impact",
            "--new",
            "100",
            "--rate",
            "-0.1",
            "--tax-rate",
            "0.2"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "--day-count",
            "364",
            "speculate",
            "--units",
            "1",
            "--price",
            "1",
            "--sigma",
            "0.1",
            "--rate",
            "0.1"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        run(&[
            "simulate",
            "--flows",
            "/no/such/file.csv",
            "--policy",
            "passive"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    // Degenerate radicand: reported with its flag, exit 0, warning on stderr.
    let o = run(&[
        "lcl",
        "--rate",
        "0.18",
        "--avg-transfer",
        "1e9",
        "--flow-sum",
        "100",
        "--stddev",
        "100",
        "--shortage-cost",
        "5",
        "--flow-basis",
        "day",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));
    let level: ReserveLevel = serde_json::from_slice(&o.stdout).unwrap();
    assert!(level.degenerate);
    assert_eq!(level.value, 0.0);
}

#[test]
fn config_file_sits_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        r#"{"format": "csv", "rates": {"annual_rate": 0.18, "tax_rate": 0.2}}"#,
    );
    let spec = [
        "speculate",
        "--units",
        "10000",
        "--price",
        "1",
        "--sigma",
        "0.04",
    ];

    let o = treasury()
        .args(spec)
        .env("TREASURY_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("daily_cost,5.00"));

    // Flags win: a different rate and format.
    let o = run(&with(
        &spec,
        &["--config", &cfg, "--rate", "0.36", "--format", "json"],
    ));
    let v: SpeculativeVerdict = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.daily_cost, 10.0);

    let bad = write(dir.path(), "bad.json", r#"{"day_count_convention": 100}"#);
    assert_eq!(
        run(&with(&spec, &["--config", &bad, "--rate", "0.1"]))
            .status
            .code(),
        Some(1)
    );
}

/// Every flag in every subcommand's help carries a bracketed unit or value list.
#[test]
fn help_lists_units_for_every_flag() {
    let commands: &[&[&str]] = &[
        &["nwc"],
        &["fcff"],
        &["value"],
        &["policy", "baumol"],
        &["policy", "beranek"],
        &["policy", "miller-orr"],
        &["policy", "stone"],
        &["lcl"],
        &["safety-stock"],
        &["lcl-impact"],
        &["speculate"],
        &["budget", "build"],
        &["budget", "roll"],
        &["simulate"],
        &["generate"],
        &["advise"],
        &["compare"],
    ];
    for cmd in commands {
        let o = run(&with(cmd, &["--help"]));
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        let mut entries: Vec<String> = Vec::new();
        for line in text
            .lines()
            .skip_while(|l| !l.starts_with("Options:"))
            .skip(1)
        {
            let t = line.trim_start();
            if t.starts_with('-') {
                entries.push(t.to_string());
            } else if let Some(last) = entries.last_mut() {
                last.push(' ');
                last.push_str(t);
            }
        }
        assert!(!entries.is_empty(), "{cmd:?}");
        for e in entries.iter().filter(|e| !e.starts_with("-h, --help")) {
            assert!(e.contains('['), "{cmd:?}: {e}");
        }
    }
}
