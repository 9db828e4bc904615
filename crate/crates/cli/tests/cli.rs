use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use twoslit::harness::format::to_json_string;
use twoslit::harness::{fixtures, generate_scene, SceneConfig};
use twoslit::{tensor_from_cameras, EpipolarTensor};

fn twoslit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twoslit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

fn json(p: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(Path::new(p)).unwrap()).unwrap()
}

#[test]
fn synth_csv_feeds_tensor_estimation() {
    let dir = TempDir::new().unwrap();
    let csv = path(&dir, "corr.csv");
    let out = path(&dir, "tensor.json");
    assert_eq!(
        code(&twoslit(&[
            "synth", "--seed", "4", "--points", "40", "--format", "csv", "--out", &csv
        ])),
        0
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("u1,u2,u3,v1,v2,v3"));
    assert_eq!(text.lines().count(), 41);
    assert_eq!(code(&twoslit(&["tensor", "--in", &csv, "--out", &out])), 0);
    let v = json(&out);
    assert_eq!(v["source"], "correspondences");
    let est: EpipolarTensor<f64> = serde_json::from_value(v["tensor"].clone()).unwrap();
    let [a, b] = fixtures::reference_cameras();
    assert!(est.distance(&tensor_from_cameras(&a, &b)) < 1e-3);
}

#[test]
fn reference_tensor_is_integral() {
    let out = twoslit(&["tensor", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let values: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(values, fixtures::REFERENCE_TENSOR.to_vec());
}

#[test]
fn sfm_report_reruns_identically() {
    let dir = TempDir::new().unwrap();
    let (first, second) = (path(&dir, "a.json"), path(&dir, "b.json"));
    assert_eq!(code(&twoslit(&["sfm", "--seed", "2", "--out", &first])), 0);
    assert_eq!(
        code(&twoslit(&["sfm", "--in", &first, "--out", &second])),
        0
    );
    let a = std::fs::read_to_string(&first).unwrap();
    assert_eq!(a, std::fs::read_to_string(&second).unwrap());
    let v = json(&first);
    assert_eq!(v["rng"], "ChaCha8");
    assert_eq!(v["outcome"]["status"], "ok");
}

#[test]
fn coplanar_scene_is_a_degeneracy() {
    let dir = TempDir::new().unwrap();
    let scene = generate_scene(&SceneConfig {
        coplanar: true,
        sigma: 0.0,
        ..SceneConfig::default()
    })
    .unwrap();
    let p = path(&dir, "flat.json");
    std::fs::write(&p, to_json_string(&scene).unwrap()).unwrap();
    let out = twoslit(&["sfm", "--in", &p]);
    assert_eq!(code(&out), 3);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["outcome"]["kind"], "degeneracy");
}

#[test]
fn too_few_cameras_is_a_validation_error() {
    assert_eq!(code(&twoslit(&["selfcal", "--cameras", "3"])), 2);
}

#[test]
fn invalid_arguments_and_inputs_exit_with_two() {
    assert_eq!(code(&twoslit(&["synth", "--sigma", "-1"])), 2);
    assert_eq!(
        code(&twoslit(&["sfm", "--in", "/nonexistent/scene.json"])),
        2
    );
    assert_eq!(code(&twoslit(&["synth", "--format", "xml"])), 2);
    assert_eq!(
        code(&twoslit(&[
            "tensor",
            "--points",
            "3",
            "--in",
            "/nonexistent.csv"
        ])),
        2
    );
}

#[test]
fn selfcal_input_round_trips() {
    let dir = TempDir::new().unwrap();
    let (first, second) = (path(&dir, "a.json"), path(&dir, "b.json"));
    assert_eq!(
        code(&twoslit(&[
            "selfcal", "--seed", "5", "--sigma", "1e-5", "--out", &first
        ])),
        0
    );
    assert_eq!(
        code(&twoslit(&["selfcal", "--in", &first, "--out", &second])),
        0
    );
    assert_eq!(json(&first), json(&second));
    let mags = json(&first)["outcome"]["recovered_magnifications"]
        .as_array()
        .unwrap()
        .len();
    assert_eq!(mags, 10);
}

#[test]
fn projection_of_given_points() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "job.json");
    let [a, _] = fixtures::reference_cameras();
    let job =
        serde_json::json!({ "camera": a, "points": [[1.0, 2.0, 3.0, 1.0], [0.0, 1.0, 0.0, 1.0]] });
    std::fs::write(&p, job.to_string()).unwrap();
    let out = twoslit(&["project", "--in", &p]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let images = v["images"].as_array().unwrap();
    assert_eq!(images.len(), 2);
    let x = twoslit::Point::from_array([1.0, 2.0, 3.0, 1.0]).unwrap();
    let u = a.project(&x).unwrap();
    for k in 0..3 {
        assert_eq!(images[0][k].as_f64().unwrap(), u[k]);
    }
}

#[test]
fn verification_passes() {
    let out = twoslit(&["verify-paper", "--format", "csv"]);
    let log = String::from_utf8_lossy(&out.stderr).into_owned();
    assert_eq!(code(&out), 0, "{log}");
    assert_eq!(log.lines().filter(|l| l.contains(": PASS")).count(), 6);
}
