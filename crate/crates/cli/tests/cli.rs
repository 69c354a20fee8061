use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::path::Path;
use std::process::Command;
use std::thread;

const BIN: &str = env!("CARGO_BIN_EXE_spidermoment");

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_with(base_url: &str, args: &[&str]) -> Run {
    let out = Command::new(BIN)
        .args(args)
        .env("SPIDERMOMENT_OEIS_URL", base_url)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Offline, with a base URL nothing listens on.
fn run(args: &[&str]) -> Run {
    let mut all = args.to_vec();
    all.push("--offline");
    run_with("http://127.0.0.1:9", &all)
}

fn stdout(args: &[&str]) -> String {
    let r = run(args);
    assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
    r.stdout.trim_end().to_string()
}

/// Serves `body` for `/A123456/b123456.txt`, a malformed file for A222222
/// and 404 for anything else. Returns the base URL.
fn stub_server(body: &'static str) -> String {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { continue };
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut request = String::new();
            reader.read_line(&mut request).unwrap();
            loop {
                let mut header = String::new();
                if reader.read_line(&mut header).unwrap() == 0 || header == "\r\n" {
                    break;
                }
            }
            let path = request.split_whitespace().nth(1).unwrap_or("");
            let (status, text) = match path {
                "/A123456/b123456.txt" => ("200 OK", body),
                "/A222222/b222222.txt" => ("200 OK", "0 1\n1 two\n"),
                _ => ("404 Not Found", "no such file"),
            };
            let _ = write!(
                stream,
                "HTTP/1.1 {status}\r\nContent-Type: text/plain\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{text}",
                text.len()
            );
        }
    });
    format!("http://{addr}")
}

fn lookup(base: &str, cache: &Path, id: &str, offline: bool) -> Run {
    let cache = cache.to_str().unwrap();
    let mut args = vec!["lookup", id, "--cache-dir", cache];
    if offline {
        args.push("--offline");
    }
    run_with(base, &args)
}

#[test]
fn expand_examples() {
    assert_eq!(
        stdout(&["expand", "spidernet(4,6,3)", "--order", "8"]),
        "1 0 4 8 44 168 776 3472 16204"
    );
    assert_eq!(stdout(&["expand", "gab(0,0)", "--order", "4"]), "1 0 0 0 0");
    assert_eq!(
        stdout(&["expand", "meixner(4,3,2)", "--order", "12"]),
        stdout(&[
            "transform",
            "invert(-2) . minvert(1)",
            "gab(2,3)",
            "--order",
            "12"
        ])
    );
    assert_eq!(
        stdout(&["expand", "catalan", "--order", "3", "--output", "json"]),
        r#"["1","1","2","5"]"#
    );
    assert_eq!(
        stdout(&["expand", "gab(1/2,1)", "--order", "2", "--output", "csv"]),
        "n,value\n0,1\n1,1/2\n2,5/4"
    );
}

#[test]
fn transform_examples() {
    assert_eq!(
        stdout(&["transform", "minvert(1)", "catalan"]),
        "1 1 3 8 24 75 243 808 2742 9458 33062"
    );
    assert_eq!(
        stdout(&["transform", "hankel", "spidernet(4,6,3)"]),
        "1 4 48 1728 186624 60466176"
    );
    assert_eq!(
        stdout(&["transform", "rev . rev", "motzkin"]),
        stdout(&["expand", "motzkin"])
    );
    let bad = run(&["transform", "minvert(1) . hankel", "catalan"]);
    assert_eq!(bad.code, 2);
    assert!(bad.stderr.contains("position 14"), "{}", bad.stderr);
}

#[test]
fn jcf_examples() {
    assert_eq!(
        stdout(&[
            "jcf",
            "extract",
            "1,3,13,63,321,1683,8989,48639",
            "--depth",
            "3"
        ]),
        "alpha: 3 3 3\nbeta: 4 2 2"
    );
    assert_eq!(
        stdout(&["jcf", "expand", "jcf(0|1; 2|1)", "--order", "6"]),
        "1 0 2 2 8 16 46"
    );
    let json = r#"{"alpha_head":["0"],"alpha_tail":"1","beta_head":["2"],"beta_tail":"1"}"#;
    assert_eq!(
        stdout(&["jcf", "expand", json, "--order", "6"]),
        "1 0 2 2 8 16 46"
    );
    let terminated = run(&["jcf", "extract", "1,0,0,0", "--depth", "1"]);
    assert_eq!(terminated.code, 2);
    assert!(
        terminated.stderr.contains("beta_1 = 0"),
        "{}",
        terminated.stderr
    );
    assert_eq!(run(&["jcf", "extract", "2,1,1", "--depth", "1"]).code, 2);
}

#[test]
fn verify_examples() {
    let s = stdout(&["verify", "spidernet(4,6,3)"]);
    assert!(s.contains("atom at -1.656854249 weight 0.414213562"), "{s}");
    assert!(s.contains("explicit graph walk counts match"), "{s}");
    assert!(s.ends_with("PASS"));
    let m = stdout(&["verify", "meixner(1,1,2)"]);
    assert!(m.contains("atom at -0.500000000 weight 0.750000000"), "{m}");
    let g = stdout(&["verify", "gab(2,3)"]);
    assert!(g.contains("atoms: none"), "{g}");
    let riordan = stdout(&["verify", "spidernet(1,3,1)"]);
    assert!(riordan.contains("explicit graph skipped"), "{riordan}");

    // an impossible tolerance turns the same run into a verification failure
    let strict = run(&["verify", "spidernet(4,6,3)", "--tol", "1e-300"]);
    assert_eq!(strict.code, 1);
    assert!(strict.stdout.contains("failing n:"), "{}", strict.stdout);

    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["verify", "meixner(1,1,2)", "--output", "json"])).unwrap();
    assert_eq!(json["passed"], true);
    assert_eq!(json["atoms"].as_array().unwrap().len(), 1);

    assert_eq!(run(&["verify", "catalan"]).code, 2);
    assert_eq!(run(&["verify", "gab(1,0)"]).code, 2);
}

#[test]
fn check_examples() {
    let r = run(&["check", "gab(3,2)", "A001003", "--order", "8"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("offset 1"), "{}", r.stdout);
    assert_eq!(
        run(&[
            "check",
            "motzkin",
            "A109190",
            "--pipeline",
            "invert(-1) . minvert(1)"
        ])
        .code,
        0
    );
    let fail = run(&["check", "catalan", "A000957"]);
    assert_eq!(fail.code, 1);
    assert!(fail.stdout.contains("index 1"), "{}", fail.stdout);
    // the wrong offset is caught too
    assert_eq!(
        run(&["check", "gab(3,2)", "A001003", "--offset", "0"]).code,
        1
    );
    assert_eq!(run(&["check", "catalan", "B000108"]).code, 2);
}

#[test]
fn graph_output() {
    assert_eq!(
        stdout(&["graph", "spidernet(4,6,3)", "--order", "4"]),
        "1 0 4 8 44"
    );
    assert_eq!(
        stdout(&["graph", "spidernet(4,6,3)", "--order", "4", "--explicit"]),
        "1 0 4 8 44"
    );
    let edges = stdout(&["graph", "spidernet(4,6,2)", "--edges", "--depth", "2"]);
    let pairs: Vec<(usize, usize)> = edges
        .lines()
        .map(|l| {
            let mut it = l.split(' ').map(|x| x.parse().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect();
    // origin has degree a = 4
    assert_eq!(pairs.iter().filter(|(u, _)| *u == 0).count(), 4);
    assert!(pairs.iter().all(|(u, v)| u < v));
    assert_eq!(
        run(&["graph", "spidernet(1,3,1)", "--edges", "--depth", "2"]).code,
        2
    );
    assert_eq!(run(&["graph", "gab(1,2)"]).code, 2);
}

#[test]
fn density_output() {
    let dir = tempfile::tempdir().unwrap();
    let atoms = dir.path().join("atoms.json");
    let csv = stdout(&[
        "density",
        "spidernet(4,6,3)",
        "--points",
        "50",
        "--atoms",
        atoms.to_str().unwrap(),
    ]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,density"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (x, d) = l.split_once(',').unwrap();
            (x.parse().unwrap(), d.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 50);
    assert!(rows
        .iter()
        .all(|&(x, d)| x > -2.0 - 2.0 * 3f64.sqrt() && d >= 0.0));
    let atoms: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&atoms).unwrap()).unwrap();
    let w = atoms[0]["weight"].as_f64().unwrap();
    assert!((w - (2f64.sqrt() - 1.0)).abs() < 1e-9);
}

#[test]
fn lookup_embedded_and_missing() {
    let r = stdout(&["lookup", "A000958"]);
    assert!(
        r.starts_with("A000958 offset 1 (embedded)\n1 1 3 8 24 75 243 808 2742 9458 33062 "),
        "{r}"
    );
    let catalan = stdout(&["lookup", "A000108", "--output", "json"]);
    assert!(
        catalan.contains(r#""terms":["1","1","2","5","14","42""#),
        "{catalan}"
    );
    let missing = run(&["lookup", "A999999"]);
    assert_eq!(missing.code, 2);
    assert!(missing.stderr.contains("not found"), "{}", missing.stderr);
    assert_eq!(run(&["lookup", "A12"]).code, 2);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["expand", "gab(1 2)"][..],
        &["expand", "spidernet(1,1,1)"],
        &["expand", "nosuchthing"],
        &["expand", "catalan", "--order", "0"],
        &["verify", "gab(2,3)", "--tol", "-1"],
        &["frobnicate"],
        &[],
    ] {
        let r = run(args);
        assert_eq!(r.code, 2, "{args:?}: {}", r.stderr);
    }
    let r = run(&["expand", "gab(1 2)"]);
    assert!(r.stderr.contains("position 7"), "{}", r.stderr);
}

#[test]
fn offline_output_is_deterministic() {
    let commands: [&[&str]; 6] = [
        &["expand", "meixner(1/2,3,-1)", "--order", "12"],
        &["transform", "hankel . minvert(2)", "gab(3,2)"],
        &["verify", "spidernet(2,3,1)"],
        &["density", "meixner(1,1,2)", "--points", "30"],
        &["check", "motzkin", "A005043", "--pipeline", "invert(-1)"],
        &["lookup", "A111961", "--output", "csv"],
    ];
    for args in commands {
        let first = run(args);
        let second = run(args);
        assert_eq!(first.code, 0, "{args:?}: {}", first.stderr);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}

#[test]
fn network_lookup_is_cached() {
    let base = stub_server("# test\n5 7\n6 -8\n7 900000000000000000000000000001\n");
    let cache = tempfile::tempdir().unwrap();

    let fetched = lookup(&base, cache.path(), "A123456", false);
    assert_eq!(fetched.code, 0, "{}", fetched.stderr);
    assert!(
        fetched.stdout.starts_with("A123456 offset 5 (network)"),
        "{}",
        fetched.stdout
    );
    assert!(cache.path().join("A123456.bfile").exists());
    // only the final entry is left behind
    assert_eq!(std::fs::read_dir(cache.path()).unwrap().count(), 1);

    let cached = lookup("http://127.0.0.1:9", cache.path(), "A123456", true);
    assert_eq!(cached.code, 0, "{}", cached.stderr);
    assert!(cached.stdout.starts_with("A123456 offset 5 (cache)"));
    let terms = |s: &str| s.lines().nth(1).unwrap().to_string();
    assert_eq!(terms(&fetched.stdout), terms(&cached.stdout));
    assert_eq!(terms(&cached.stdout), "7 -8 900000000000000000000000000001");
}

#[test]
fn network_errors_are_distinguished() {
    let base = stub_server("0 1\n");
    let cache = tempfile::tempdir().unwrap();

    let missing = lookup(&base, cache.path(), "A654321", false);
    assert_eq!(missing.code, 2);
    assert!(missing.stderr.contains("not found"), "{}", missing.stderr);

    let malformed = lookup(&base, cache.path(), "A222222", false);
    assert_eq!(malformed.code, 2);
    assert!(
        malformed.stderr.contains("malformed b-file"),
        "{}",
        malformed.stderr
    );
    assert!(!cache.path().join("A222222.bfile").exists());

    let unreachable = lookup("http://127.0.0.1:9", cache.path(), "A123456", false);
    assert_eq!(unreachable.code, 2);
    assert!(
        unreachable.stderr.contains("fetching"),
        "{}",
        unreachable.stderr
    );
    assert!(!unreachable.stderr.contains("not found"));

    let offline = lookup(&base, cache.path(), "A123456", true);
    assert!(offline.stderr.contains("offline"), "{}", offline.stderr);
}
