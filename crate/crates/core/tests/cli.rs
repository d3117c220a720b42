use std::path::Path;
use std::process::{Command, Output};

use qchain::emit::{read_csv, read_jsonl};
use qchain::sweep::from_table;

fn qchain(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qchain"))
        .args(args)
        .current_dir(dir)
        .env_remove("QCHAIN_OUTPUT_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SWEEP: &str = "# weak A-coupling ensemble
L = 6
coupling = A
random = true
seed = 4
axis = J
values = 0.01, 0.1
ensemble = 3
observables = bands, spacing, npc, census
";

#[test]
fn sweep_output_is_byte_identical_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.cfg"), SWEEP).unwrap();
    let a = qchain(&["sweep", "--config", "run.cfg", "--set", "execution=sequential"], dir.path());
    let b = qchain(&["sweep", "--config", "run.cfg", "--set", "workers=2"], dir.path());
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    // the header echoes the differing execution keys; the data must not differ
    let body = |o: &Output| stdout(o).split_once('\n').unwrap().1.to_string();
    assert!(body(&a) == body(&b));
    let c = qchain(&["sweep", "--config", "run.cfg", "--set", "workers=2"], dir.path());
    assert!(c.stdout == b.stdout);
    let t = read_csv(&stdout(&a)).unwrap();
    assert!(t.header.iter().any(|(k, v)| k == "ensemble" && v == "3"));
    let rows = from_table(&t).unwrap();
    assert!(rows.iter().any(|r| r.observable == "spacing_pooled"));
    assert!(rows.iter().all(|r| r.error.is_none()));
}

#[test]
fn output_file_refuses_then_replaces() {
    let dir = tempfile::tempdir().unwrap();
    let first = qchain(&["theory", "-L", "8", "-o", "t.csv"], dir.path());
    assert!(first.status.success());
    let again = qchain(&["theory", "-L", "10", "-o", "t.csv"], dir.path());
    assert_eq!(again.status.code(), Some(3));
    assert!(std::fs::read_to_string(dir.path().join("t.csv")).unwrap().contains("l=8"));
    let forced = qchain(&["theory", "-L", "10", "-o", "t.csv", "--overwrite"], dir.path());
    assert!(forced.status.success());
    assert!(std::fs::read_to_string(dir.path().join("t.csv")).unwrap().contains("l=10"));
}

#[test]
fn relative_output_lands_in_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qchain"))
        .args(["census", "-L", "6", "-J", "1", "-o", "c.jsonl", "--format", "jsonl"])
        .current_dir(dir.path())
        .env("QCHAIN_OUTPUT_DIR", out.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    let t = read_jsonl(&std::fs::read_to_string(out.path().join("c.jsonl")).unwrap()).unwrap();
    let rec = t.record(0);
    assert_eq!(rec[0].0, "band_states");
    assert_eq!(rec[0].1.as_u64(), Some(20));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qchain(&["bands", "--set", "colour=red"], dir.path()).status.code(), Some(1));
    assert_eq!(qchain(&["spectrum", "-L", "20"], dir.path()).status.code(), Some(1));
    assert_eq!(qchain(&["nonsense"], dir.path()).status.code(), Some(1));
    assert_eq!(qchain(&["--help"], dir.path()).status.code(), Some(0));
    assert_eq!(qchain(&["spectrum", "--config", "missing.cfg"], dir.path()).status.code(), Some(3));
    assert_eq!(qchain(&["matrix", "--basis", "quasi-integrable", "--coupling", "A"], dir.path()).status.code(), Some(1));
}

#[test]
fn verbs_produce_their_tables() {
    let dir = tempfile::tempdir().unwrap();
    let spectrum = read_csv(&stdout(&qchain(&["spectrum", "-L", "4", "-J", "1"], dir.path()))).unwrap();
    assert_eq!(spectrum.rows.len(), 16);
    let scan = read_csv(&stdout(&qchain(&["bands", "-L", "6", "--set", "values=0,1,5"], dir.path()))).unwrap();
    assert_eq!(scan.columns, ["grid_value", "band_width", "e_min", "e_max", "band_count", "error"]);
    assert_eq!(scan.rows.len(), 3);
    let states = read_csv(&stdout(&qchain(&["states", "-L", "6", "-J", "1"], dir.path()))).unwrap();
    assert_eq!(states.rows.len(), 20);
    let all = read_csv(&stdout(&qchain(&["states", "-L", "6", "-J", "1", "--all", "--basis", "z"], dir.path()))).unwrap();
    assert_eq!(all.rows.len(), 64);
    let spacing = read_csv(&stdout(&qchain(&["spacing", "-L", "8", "-J", "1"], dir.path()))).unwrap();
    assert_eq!(spacing.rows.len(), 40);
    let mass: f64 = (0..40)
        .map(|i| {
            let r = &spacing.rows[i];
            r[3].as_f64().unwrap() * (r[2].as_f64().unwrap() - r[1].as_f64().unwrap())
        })
        .sum();
    assert!((mass - 1.0).abs() < 1e-12);
    let dump = stdout(&qchain(&["matrix", "-L", "3"], dir.path()));
    // 8 diagonal entries (the gradient makes them nonzero) + 2 * 12 single flips
    assert_eq!(dump.lines().count(), 8 + 24);
    assert!(dump.lines().all(|l| l.split(' ').count() == 4));
}
