use levelnerve::cli::dispatch;
use levelnerve::complexes::FinSimpSet;
use levelnerve::io::{decode, encode, read_artifact, RunManifest};

fn run(args: &[&str]) -> (i32, Vec<u8>, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = dispatch(args.iter().copied(), &mut out, &mut err);
    (code, out, String::from_utf8(err).unwrap())
}

#[test]
fn nerve_then_pi1() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.json");
    let c = c.to_str().unwrap();
    let (code, out, _) = run(&["nerve", "--g", "2", "--n", "0", "--m", "2", "--out", c]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let x: FinSimpSet = read_artifact(c).unwrap();
    assert_eq!(x.count(0), 25);
    let (code, out, _) = run(&["pi1", c, "--expect", "trivial"]);
    assert_eq!(code, 0);
    assert!(String::from_utf8(out).unwrap().contains("\"verdict\": \"trivial\""));
    let (code, _, _) = run(&["pi1", c, "--expect", "nontrivial"]);
    assert_eq!(code, 1);
    let (code, out, _) = run(&["homology", c, "--degree", "0"]);
    assert_eq!(code, 0);
    assert!(String::from_utf8(out).unwrap().contains("\"free_rank\": 1"));
}

#[test]
fn exit_codes() {
    let (code, _, err) = run(&["nerve", "--g", "2", "--m", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("modulus"));
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["nerve", "--g", "2", "--m", "2", "--max-orbit", "5"]).0, 3);
    assert_eq!(run(&["cover", "--kind", "derived", "--g", "2", "--max-degree", "8"]).0, 3);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"schema\": \"levelnerve\", \"ver").unwrap();
    let (code, _, err) = run(&["pi1", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("schema"));
    assert_eq!(run(&["pi1", "/nonexistent/x.json"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn outputs_are_canonical_and_deterministic() {
    let a = run(&["nerve", "--g", "2", "--m", "3"]).1;
    let b = run(&["nerve", "--g", "2", "--m", "3", "--workers", "4"]).1;
    assert_eq!(a, b);
    assert_eq!(*a.last().unwrap(), b'\n');
    let x: FinSimpSet = decode(&a).unwrap();
    assert_eq!(encode(&x).unwrap(), a);
}

#[test]
fn manifest_replays() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("k.json");
    let spec = spec.to_str().unwrap();
    assert_eq!(run(&["cover", "--kind", "homology", "--g", "1", "--n", "1", "--m", "3", "--out", spec]).0, 0);
    let img = dir.path().join("img.json");
    let img = img.to_str().unwrap();
    let mpath = dir.path().join("m.json");
    let mpath = mpath.to_str().unwrap();
    assert_eq!(run(&["image", spec, "--m", "3", "--out", img, "--manifest", mpath]).0, 0);
    let m: RunManifest = read_artifact(mpath).unwrap();
    assert_eq!(m.command, "image");
    assert_eq!(m.inputs.len(), 1);
    assert_eq!(m.outputs[0].sha256, levelnerve::io::sha256_hex(&std::fs::read(img).unwrap()));
    let (code, out, _) = run(&["validate", mpath]);
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&out));
    let mut tampered = std::fs::read_to_string(spec).unwrap();
    tampered.push('\n');
    std::fs::write(spec, tampered).unwrap();
    assert_eq!(run(&["validate", mpath]).0, 1);
}

#[test]
fn kernel_report_types_lift() {
    let (code, out, _) = run(&["kernel", "--g", "2", "--rank", "0", "--index", "0", "--m", "2"]);
    assert_eq!(code, 0);
    assert!(String::from_utf8(out).unwrap().contains("kernel_lattice"));
    let (code, out, _) = run(&["report", "--g", "2", "--rank", "0", "--index", "1", "--m", "3"]);
    assert_eq!(code, 0);
    assert!(String::from_utf8(out).unwrap().contains("\"stratum\""));
    let (code, out, _) = run(&["types", "--g", "2", "--n", "0"]);
    assert_eq!(code, 0);
    let s = String::from_utf8(out).unwrap();
    assert!(s.contains("\"by_edges\""));
    assert_eq!(run(&["kernel", "--g", "2", "--rank", "0", "--index", "9", "--m", "2"]).0, 2);
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("id.json");
    let spec = spec.to_str().unwrap();
    assert_eq!(run(&["cover", "--g", "2", "--n", "1", "--out", spec]).0, 0);
    let (code, out, _) = run(&["lift", spec, "--rank", "1", "--index", "0"]);
    assert_eq!(code, 0);
    assert!(String::from_utf8(out).unwrap().contains("\"cut_graph\""));
    assert_eq!(run(&["report", "--cover", spec]).0, 0);
    assert_eq!(run(&["report"]).0, 2);
}

#[test]
fn validate_complexes_and_decompositions() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.json");
    let c = c.to_str().unwrap();
    assert_eq!(run(&["nerve", "--g", "2", "--m", "2", "--out", c]).0, 0);
    let (code, out, _) = run(&["validate", c]);
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&out));
    let mut x: FinSimpSet = read_artifact(c).unwrap();
    x.ranks[1].faces[0].swap(0, 1);
    x.ranks[1].faces[0][0] = (x.ranks[1].faces[0][0] + 1) % x.count(0);
    std::fs::write(c, encode(&x).unwrap()).unwrap();
    assert_eq!(run(&["validate", c]).0, 1);
}
