use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use smallcover::coloring::{encode_hex, published_vector};

fn smallcover(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smallcover"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().map(str::to_string).collect()
}

#[test]
fn build_summaries() {
    let dir = tempfile::tempdir().unwrap();
    let o = smallcover(&["build", "cube:4"], dir.path());
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("facets 8\n") && s.contains("vertices 16\n"), "{s}");
    let o = smallcover(&["build", "lobell:6", "--out", "l6.txt"], dir.path());
    assert!(stdout(&o).contains("facets 14\n"));
    let o = smallcover(&["build", "120cell"], dir.path());
    let s = stdout(&o);
    assert!(s.contains("cliques 720,1200,600\n") && s.contains("layers 1,12,20,12,30,12,20,12,1\n"), "{s}");
    // a saved polytope is accepted wherever a builtin name is
    let o = smallcover(&["enumerate", "--polytope", "l6.txt", "--set", "all", "--out-dir", "r"], dir.path());
    assert!(o.status.success());
    let file = fs::read_dir(dir.path().join("r")).unwrap().filter_map(|e| e.ok()).find(|e| e.path().extension().is_some_and(|x| x == "txt")).unwrap();
    assert_eq!(lines(&file.path()).len(), 18073);
}

#[test]
fn enumerate_writes_results_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let o = smallcover(&["enumerate", "--polytope", "cube:3", "--workers", "1"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let res = dir.path().join("results/cube-3_all.txt");
    assert_eq!(lines(&res).len(), 25);
    let meta = fs::read_to_string(dir.path().join("results/cube-3_all.txt.meta")).unwrap();
    assert!(meta.contains("count=25\n") && meta.contains("workers=1\n") && meta.contains("polytope_sha256="));
}

#[test]
fn five_colorings_both_engines_then_classify() {
    let dir = tempfile::tempdir().unwrap();
    let o = smallcover(&["enumerate", "--set", "15", "--engine", "both"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let a = lines(&dir.path().join("results/15.recursion.txt"));
    let b = lines(&dir.path().join("results/15.blockpaste.txt"));
    assert_eq!(a.len(), 10);
    assert_eq!(a, b);
    assert!(a.contains(&encode_hex(&published_vector(59))));
    let o = smallcover(&["classify", "results/15.recursion.txt", "--map", "map.txt"], dir.path());
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("classes 1\n") && s.contains("size 10 orientable no"), "{s}");
    assert_eq!(lines(&dir.path().join("map.txt")).len(), 10);
}

#[test]
fn prefix_search_from_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("l59.txt"), encode_hex(&published_vector(59)) + "\n").unwrap();
    let o = smallcover(&["enumerate", "--prefix-from", "l59.txt", "--fix", "119"], dir.path());
    assert!(o.status.success());
    assert_eq!(lines(&dir.path().join("results/all_prefix119.txt")), vec![encode_hex(&published_vector(59))]);
}

#[test]
fn topology_reports() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("l1.txt"), encode_hex(&published_vector(1)) + "\n").unwrap();
    fs::write(dir.path().join("l59.txt"), encode_hex(&published_vector(59)) + "\n").unwrap();
    let o = smallcover(&["topology", "l1.txt", "--mod2"], dir.path());
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("rational betti 1,0,134,0,1\n"), "{s}");
    assert!(s.contains("euler characteristic 136\n") && s.contains("⊕67 H"));
    assert!(s.contains("mod2 betti 1,116,366,116,1\n"));
    let o = smallcover(&["topology", "l59.txt", "--double-cover", "--verbose"], dir.path());
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("rational betti 1,115,500,115,1\n") && s.contains("⊕250 H"), "{s}");
    assert!(s.contains("omega rows"));
}

#[test]
fn audit_detects_corruption() {
    let dir = tempfile::tempdir().unwrap();
    assert!(smallcover(&["enumerate", "--polytope", "cube:3"], dir.path()).status.success());
    let o = smallcover(&["verify", "--results", "results"], dir.path());
    assert!(o.status.success(), "{}", stdout(&o));
    let res = dir.path().join("results/cube-3_all.txt");
    let mut text = fs::read_to_string(&res).unwrap();
    text.replace_range(0..1, "2");
    fs::write(&res, text).unwrap();
    let o = smallcover(&["verify", "--results", "results"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(s.contains("FAIL") && s.contains("first failing file"), "{s}");
}

#[test]
fn rejects_bad_arguments() {
    let dir = tempfile::tempdir().unwrap();
    assert!(!smallcover(&["enumerate", "--set", "4"], dir.path()).status.success());
    assert!(!smallcover(&["build", "nothing"], dir.path()).status.success());
    assert!(!smallcover(&["enumerate", "--fix", "3"], dir.path()).status.success());
}
