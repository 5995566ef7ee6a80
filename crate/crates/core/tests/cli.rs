use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use simplicial_score::complex::SimplicialComplex;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_simplicial-score"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, contents).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Equilateral triangle with unit sides.
const TRIANGLE: &str = "x,y\n0,0\n1,0\n0.5,0.8660254037844386\n";

#[test]
fn build_toy_triangle() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "pts.csv", TRIANGLE);
    let out = dir.path().join("k.json");
    let o = run(&["build", "--input", s(&input), "--epsilon", "1.1", "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("simplices per dimension: 3 3 1"));
    let k = SimplicialComplex::from_json_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(k.counts(), vec![3, 3, 1]);
    assert_eq!(k.epsilon(), Some(1.1));
    assert!(k.has_weights());

    let o = run(&["build", "--input", s(&input), "--epsilon", "1.1", "--max-dim", "1"]);
    let k = SimplicialComplex::from_json_str(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(k.counts(), vec![3, 3]);
}

#[test]
fn asymmetric_distances_name_the_cell() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.tsv", "0\t1\t2\n1\t0\t1\n2.5\t1\t0\n");
    let o = run(&["build", "--input", s(&input), "--metric", "precomputed", "--epsilon", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("d.tsv:3:"), "{err}");
    assert!(err.contains("(0, 2)"), "{err}");
}

#[test]
fn score_triangle_features() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "pts.csv", TRIANGLE);
    let feats = write(&dir, "f.tsv", "name\ta\tb\tc\ne0\t1\t0\t0\nflat\t2\t2\t2\ne2\t0\t0\t1\n");
    let o = run(&[
        "score", "--input", s(&input), "--epsilon", "1.1", "--max-dim", "1", "--features", s(&feats),
        "--weights", "unit", "--permutations", "0",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("warning: feature flat"));
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 3);
    let score: f64 = rows[0][2].parse().unwrap();
    assert!((score - 3.0).abs() < 1e-12);
    assert_eq!(rows[1][2], "NA");

    let o = run(&[
        "score", "--input", s(&input), "--epsilon", "1.1", "--max-dim", "1", "--features", s(&feats),
        "--permutations", "0",
    ]);
    let text = String::from_utf8(o.stdout).unwrap();
    let line = text.lines().find(|l| l.starts_with("e2\t")).unwrap();
    let score: f64 = line.split('\t').nth(2).unwrap().parse().unwrap();
    assert!((score - 1.5).abs() < 1e-12);
}

#[test]
fn score_without_edges_fails_at_q1() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "pts.csv", TRIANGLE);
    let feats = write(&dir, "f.tsv", "e0\t1\t0\t0\n");
    let o = run(&["score", "--input", s(&input), "--epsilon", "0.5", "--features", s(&feats), "--q", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no simplices at dimension 1"), "{}", stderr(&o));
}

#[test]
fn score_requires_a_complex_source() {
    let dir = TempDir::new().unwrap();
    let feats = write(&dir, "f.tsv", "e0\t1\t0\t0\n");
    let o = run(&["score", "--features", s(&feats)]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["score", "--epsilon", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

fn ring_fixture(dir: &TempDir) -> (PathBuf, PathBuf) {
    let n = 24;
    let mut pts = String::new();
    for i in 0..n {
        let t = i as f64 / n as f64 * std::f64::consts::TAU;
        pts.push_str(&format!("{},{}\n", t.cos(), t.sin()));
    }
    let mut feats = String::new();
    for r in 0..6 {
        let vals: Vec<String> = (0..n).map(|i| format!("{}", ((i * (r + 3) + r) % 7) as f64 + (i as f64 / 4.0).sin())).collect();
        feats.push_str(&format!("f{r}\t{}\n", vals.join("\t")));
    }
    (write(dir, "ring.csv", &pts), write(dir, "ring.tsv", &feats))
}

#[test]
fn score_is_reproducible_and_composes_with_build() {
    let dir = TempDir::new().unwrap();
    let (input, feats) = ring_fixture(&dir);
    let common = ["--features", s(&feats), "--permutations", "99", "--seed", "4"];
    let one = dir.path().join("one.tsv");
    let two = dir.path().join("two.tsv");
    for out in [&one, &two] {
        let mut args = vec!["score", "--input", s(&input), "--epsilon", "0.6", "--out", s(out)];
        args.extend(common);
        assert!(run(&args).status.success());
    }
    assert_eq!(fs::read(&one).unwrap(), fs::read(&two).unwrap());

    let k = dir.path().join("k.json");
    assert!(run(&["build", "--input", s(&input), "--epsilon", "0.6", "--out", s(&k)]).status.success());
    let three = dir.path().join("three.tsv");
    let mut args = vec!["score", "--complex", s(&k), "--out", s(&three)];
    args.extend(common);
    assert!(run(&args).status.success());
    // Only the weights label in the metadata differs.
    let strip = |p: &Path| -> Vec<String> {
        fs::read_to_string(p).unwrap().lines().filter(|l| !l.starts_with("# epsilon")).map(String::from).collect()
    };
    assert_eq!(strip(&one), strip(&three));
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = TempDir::new().unwrap();
    let (input, feats) = ring_fixture(&dir);
    let outs: Vec<Vec<u8>> = ["1", "8"]
        .iter()
        .map(|t| {
            let o = run(&[
                "score", "--input", s(&input), "--epsilon", "0.6", "--features", s(&feats), "--permutations", "99",
                "--threads", t,
            ]);
            assert!(o.status.success());
            o.stdout
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn pair_features_score_at_q1() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "sq.csv", "0,0\n1,0\n1,1\n0,1\n");
    let pairs = write(&dir, "pairs.tsv", "i\tj\tvalue\n0\t1\t1\n0\t3\t0\n1\t2\t0\n2\t3\t0\n");
    let o = run(&[
        "score", "--input", s(&input), "--epsilon", "1.1", "--pair-features", s(&pairs), "--q", "1", "--weights",
        "unit", "--permutations", "0",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let row = text.lines().last().unwrap();
    assert!(row.starts_with("pairs\t1\t2\t"), "{row}");
}

#[test]
fn sweep_rows_and_argmax() {
    let dir = TempDir::new().unwrap();
    let mut pts = String::new();
    let mut labels = Vec::new();
    for c in 0..2 {
        for i in 0..15 {
            let t = i as f64 * 2.399;
            pts.push_str(&format!("{},{}\n", c as f64 * 10.0 + 0.3 * t.cos() * (i as f64).sqrt() / 4.0, 0.3 * t.sin() * (i as f64).sqrt() / 4.0));
            labels.push(c);
        }
    }
    let input = write(&dir, "two.csv", &pts);
    let mut feats = String::new();
    for r in 0..8 {
        let vals: Vec<String> = labels
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let noise = (((i * 37 + r * 101) % 17) as f64 - 8.0) / 8.0;
                let shift = if r < 4 { 3.0 * c as f64 } else { 0.0 };
                format!("{}", shift + noise)
            })
            .collect();
        feats.push_str(&format!("g{r}\t{}\n", vals.join("\t")));
    }
    let feats = write(&dir, "g.tsv", &feats);

    let o = run(&["sweep", "--input", s(&input), "--features", s(&feats), "--grid", "0.3", "--permutations", "49"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 2);

    let o = run(&[
        "sweep", "--input", s(&input), "--features", s(&feats), "--grid", "0.001,0.5,1,100", "--permutations", "199",
        "--max-dim", "1",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout.clone()).unwrap();
    let counts: Vec<usize> = text.lines().skip(1).map(|l| l.split('\t').nth(2).unwrap().parse().unwrap()).collect();
    let best = counts.iter().copied().max().unwrap();
    let first_best = counts.iter().position(|&c| c == best).unwrap();
    assert!(first_best > 0 && first_best < counts.len() - 1, "{counts:?}");
    assert!(stderr(&o).contains("best epsilon: "));

    let o = run(&["sweep", "--input", s(&input), "--features", s(&feats), "--grid", ""]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eigenmap_outputs() {
    let dir = TempDir::new().unwrap();
    let p3 = write(&dir, "p3.csv", "0,1,2\n1,0,1\n2,1,0\n");
    let o = run(&[
        "eigenmap", "--input", s(&p3), "--metric", "precomputed", "--epsilon", "1", "--weights", "unit", "--m", "2",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "simplex\ty1\ty2");
    let col: Vec<f64> = lines[1..].iter().map(|l| l.split('\t').nth(2).unwrap().parse().unwrap()).collect();
    assert!(col[1].abs() < 1e-10 && (col[0] + col[2]).abs() < 1e-10 && col[0].abs() > 0.1);

    let o = run(&["eigenmap", "--input", s(&p3), "--metric", "precomputed", "--epsilon", "1", "--m", "4"]);
    assert_eq!(o.status.code(), Some(2));

    let sq = write(&dir, "sq.csv", "0,0\n1,0\n1,1\n0,1\n");
    let o = run(&["eigenmap", "--input", s(&sq), "--epsilon", "1.1", "--q", "1", "--m", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().nth(1).unwrap().starts_with("0-1\t"));
}

#[test]
fn export_formats() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "pts.csv", TRIANGLE);
    let o = run(&["export", "--input", s(&input), "--epsilon", "1.1", "--format", "dot"]);
    assert!(o.status.success());
    let dot = String::from_utf8(o.stdout).unwrap();
    assert_eq!(dot.matches(" -- ").count(), 3);
    let o = run(&["export", "--input", s(&input), "--epsilon", "1.1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["edges"].as_array().unwrap().len(), 3);
    let o = run(&["export", "--input", s(&input), "--epsilon", "1.1", "--format", "svg"]);
    assert_eq!(o.status.code(), Some(2));
}
