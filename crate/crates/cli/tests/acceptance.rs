//! The acceptance gate: every grid criterion at its runtime limit, then two
//! `verify-all --seed 7` runs compared byte for byte. Prints one line per
//! criterion and exits non-zero if any fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rigidlab_cli::grid;

const SEED: u64 = 7;

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .expect("artifact directory")
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

fn verify_all(out: &Path) -> bool {
    Command::new(env!("CARGO_BIN_EXE_rigidlab"))
        .args(["verify-all", "--seed", &SEED.to_string(), "--out"])
        .arg(out)
        .output()
        .expect("spawn rigidlab")
        .status
        .success()
}

fn main() -> ExitCode {
    grid::configure_threads();
    let mut failures = 0;
    for spec in grid::CRITERIA.iter() {
        let t = grid::run(spec, SEED);
        let ok = t.criterion.passed && t.within_limit();
        failures += usize::from(!ok);
        let limit = t.limit.map_or_else(|| "no limit".to_string(), |l| format!("limit {}s", l.as_secs()));
        println!(
            "{} criterion {}: {}: {} ({:.2}s, {limit})",
            if ok { "PASS" } else { "FAIL" },
            spec.id,
            spec.name,
            t.criterion.summary,
            t.elapsed.as_secs_f64()
        );
    }

    let start = Instant::now();
    let tmp = tempfile::tempdir().expect("temp dir");
    let (a, b) = (tmp.path().join("run-a"), tmp.path().join("run-b"));
    let runs_ok = verify_all(&a) && verify_all(&b);
    let (sa, sb) = (snapshot(&a), snapshot(&b));
    let differing: Vec<&String> = sa.keys().chain(sb.keys()).filter(|k| sa.get(*k) != sb.get(*k)).collect();
    let ok = runs_ok && !sa.is_empty() && differing.is_empty();
    failures += usize::from(!ok);
    println!(
        "{} criterion 9: verify-all --seed {SEED} is byte-identical across runs: {} files, {} differing, both runs {} ({:.2}s)",
        if ok { "PASS" } else { "FAIL" },
        sa.len(),
        differing.len(),
        if runs_ok { "succeeded" } else { "did not both succeed" },
        start.elapsed().as_secs_f64()
    );

    if failures == 0 {
        println!("acceptance: all 9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
