use std::path::Path;
use std::process::{Command, Output};

use rigidlab::bq::CertReport;
use rigidlab::numeric::Biquad;
use rigidlab::plane::lattice_ball;
use rigidlab::relations::RelStruct;
use rigidlab_cli::io::{self, AnyOrientation, AnyPoints};

fn rigidlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigidlab")).current_dir(dir).args(args).output().expect("spawn rigidlab")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_cycle3(dir: &Path) {
    let doc = io::to_document(io::RELATION, &RelStruct::directed_cycle(3)).unwrap();
    std::fs::write(dir.join("cycle3.json"), doc).unwrap();
}

#[test]
fn lattice_ball_file_has_seven_points() {
    let dir = tempfile::tempdir().unwrap();
    let o = rigidlab(dir.path(), &["lattice", "--radius", "1", "--out", "ball1.json"]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(dir.path().join("ball1.json")).unwrap();
    assert_eq!(io::read_pointset(&text).unwrap(), AnyPoints::Exact(lattice_ball::<Biquad>(1, true)));
}

#[test]
fn three_cycle_is_not_rigid() {
    let dir = tempfile::tempdir().unwrap();
    write_cycle3(dir.path());
    let o = rigidlab(dir.path(), &["rigid", "--input", "cycle3.json"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("3 endomorphisms"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("3 endomorphisms"));
}

#[test]
fn spindle_certifies_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let o = rigidlab(dir.path(), &["certify", "--gadget", "moser-spindle", "--x", "A", "--y", "D", "--epsilon", "0"]);
    assert_eq!(code(&o), 0);
    let body: serde_json::Value = io::from_document(io::CERTIFICATE, &stdout(&o)).unwrap();
    let report: CertReport<Biquad> = serde_json::from_value(body["report"].clone()).unwrap();
    assert!(report.certified && report.exact);
    assert_eq!(report.max_deviation, rigidlab::numeric::Scalar::zero_exact());
    assert_eq!(report.maps, 4);
}

#[test]
fn rhombus_fold_overlay() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["certify", "--gadget", "rhombus", "--x", "A", "--y", "D", "--epsilon", "1", "--format", "svg"];
    let a = rigidlab(dir.path(), &args);
    let b = rigidlab(dir.path(), &args);
    assert_eq!(code(&a), 2);
    assert!(stdout(&a).contains("stroke-dasharray"));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&rigidlab(dir.path(), &["--help"])), 0);
    assert_eq!(code(&rigidlab(dir.path(), &["frobnicate"])), 4);
    assert_eq!(code(&rigidlab(dir.path(), &["lattice", "--tolerance", "1e-6"])), 4);
    assert_eq!(code(&rigidlab(dir.path(), &["witness", "case1", "--x", "1,0", "--y", "nonsense"])), 4);
    let budget = rigidlab(dir.path(), &["certify", "--gadget", "moser-spindle", "--x", "A", "--y", "D", "--branch-limit", "3"]);
    assert_eq!(code(&budget), 3);
    assert_eq!(code(&rigidlab(dir.path(), &["orient", "--radius", "2", "--mode", "all"])), 3);
    let chain = rigidlab(dir.path(), &["certify", "--gadget", "chain", "--hops", "2", "--x", "P0", "--y", "P2"]);
    assert_eq!(code(&chain), 2);
}

#[test]
fn triangle_orientation_dot() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("t.json"), io::pointset_document(&rigidlab::plane::triangle_set::<Biquad>()).unwrap()).unwrap();
    let o = rigidlab(dir.path(), &["orient", "--input", "t.json", "--mode", "all", "--format", "dot"]);
    assert_eq!(code(&o), 0);
    let dot = stdout(&o);
    assert_eq!(dot.matches("[pos=").count(), 3);
    assert_eq!(dot.matches("color=blue").count(), 4);
    assert_eq!(dot.matches(" -> ").count(), 5);
}

#[test]
fn artifacts_reload() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&rigidlab(d, &["orient", "--mode", "sample", "--k", "3", "--seed", "5", "--out", "phi.json"])), 0);
    let phi: serde_json::Value = io::from_document(io::PHI, &std::fs::read_to_string(d.join("phi.json")).unwrap()).unwrap();
    assert_eq!(phi["members"].as_array().unwrap().len(), 3);
    assert_eq!(phi["count"], "512");

    assert_eq!(code(&rigidlab(d, &["product", "--members", "2", "--out", "p.json"])), 0);
    let p: serde_json::Value = io::from_document(io::PRODUCT, &std::fs::read_to_string(d.join("p.json")).unwrap()).unwrap();
    let s: RelStruct = serde_json::from_value(p["structure"].clone()).unwrap();
    assert_eq!(s.n(), 14);
    assert_eq!(serde_json::to_value(&s).unwrap(), p["structure"]);

    for case in [vec!["witness", "case1", "--x", "2,0", "--y", "1/2,1/2*sqrt3"], vec!["witness", "case2", "--x", "0,0", "--seed", "3"]] {
        let o = rigidlab(d, &case);
        assert_eq!(code(&o), 0, "{case:?}");
        let w: serde_json::Value = io::from_document(io::WITNESS, &stdout(&o)).unwrap();
        assert_eq!(w["outcome"], "valid");
        assert!(w["elements"].as_array().unwrap().contains(&w["src"]));
    }

    write_cycle3(d);
    let o = rigidlab(d, &["hom", "--src", "cycle3.json", "--dst", "cycle3.json"]);
    let h: serde_json::Value = io::from_document(io::HOMS, &stdout(&o)).unwrap();
    assert_eq!(h["homs"], serde_json::json!([[0, 1, 2], [1, 2, 0], [2, 0, 1]]));
}

#[test]
fn orientation_documents_feed_hom() {
    let dir = tempfile::tempdir().unwrap();
    let b = lattice_ball::<Biquad>(1, true);
    let o = rigidlab::phi::orientation_from_bits(&b, |k| k % 2 == 0).unwrap();
    let doc = io::orientation_document(&o).unwrap();
    assert_eq!(io::read_orientation(&doc).unwrap(), AnyOrientation::Exact(o));
    std::fs::write(dir.path().join("s.json"), doc).unwrap();
    let out = rigidlab(dir.path(), &["hom", "--src", "s.json", "--dst", "s.json"]);
    assert_eq!(code(&out), 0);
    let h: serde_json::Value = io::from_document(io::HOMS, &stdout(&out)).unwrap();
    assert_eq!(h["homs"], serde_json::json!([[0, 1, 2, 3, 4, 5, 6]]));
}
