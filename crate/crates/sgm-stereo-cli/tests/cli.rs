//! End-to-end tests driving the compiled binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sgm_stereo::imgio::{write_disparity, write_gray, DisparityEncoding};
use sgm_stereo::{DisparityMap, GrayImage};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sgm-stereo"))
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary must run")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

/// A deterministic noise pair with ground-truth disparity `shift`.
fn write_pair(dir: &Path, name: &str, shift: usize) -> (PathBuf, PathBuf) {
    let (w, h) = (48, 36);
    let mut state = 0x1234_5678_9ABC_DEFFu64 ^ (shift as u64) << 7;
    let wide = GrayImage::from_fn(w + shift, h, |_, _| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 24) as u8
    });
    let left_path = dir.join(format!("{name}_L.pgm"));
    let right_path = dir.join(format!("{name}_R.pgm"));
    let left = GrayImage::from_fn(w, h, |x, y| wide.pixel(x, y));
    let right = GrayImage::from_fn(w, h, |x, y| wide.pixel(x + shift, y));
    write_gray(&left, &left_path).unwrap();
    write_gray(&right, &right_path).unwrap();
    (left_path, right_path)
}

#[test]
fn estimate_happy_path_writes_map_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let (left, right) = write_pair(dir.path(), "a", 4);
    let out = dir.path().join("a.pgm16");
    let output = run(&[
        "estimate",
        "--left",
        left.to_str().unwrap(),
        "--right",
        right.to_str().unwrap(),
        "--max-disp",
        "15",
        "--cost",
        "census9x7",
        "--paths",
        "8",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    assert!(out.is_file());
    let text = stdout(&output);
    for field in [
        "mde_per_s=",
        "fps=",
        "time_total_s=",
        "time_cost_s=",
        "time_aggregate_s=",
        "time_post_s=",
        "density=",
    ] {
        assert!(text.contains(field), "missing {field} in:\n{text}");
    }
    // The written map carries the synthetic shift.
    let map = sgm_stereo::imgio::load_disparity(&out).unwrap();
    let v = map.get(24, 18).unwrap();
    assert!((v - 4.0).abs() <= 0.5, "disparity {v}");
}

#[test]
fn missing_required_flag_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let (left, _) = write_pair(dir.path(), "m", 2);
    let output = run(&[
        "estimate",
        "--left",
        left.to_str().unwrap(),
        "--max-disp",
        "15",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("--right"));
}

#[test]
fn inverted_penalties_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let (left, right) = write_pair(dir.path(), "p", 2);
    let output = run(&[
        "estimate",
        "--left",
        left.to_str().unwrap(),
        "--right",
        right.to_str().unwrap(),
        "--max-disp",
        "15",
        "--p1",
        "90",
        "--p2",
        "86",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("p1"));
}

#[test]
fn unreadable_input_exits_1() {
    let output = run(&[
        "estimate",
        "--left",
        "/nonexistent_L.pgm",
        "--right",
        "/nonexistent_R.pgm",
        "--max-disp",
        "15",
    ]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn evaluate_perfect_match_golden_output() {
    let dir = tempfile::tempdir().unwrap();
    let map = DisparityMap::from_fn(4, 2, |x, y| Some(4.0 + x as f32 + y as f32));
    let est = dir.path().join("est.pgm");
    let gt = dir.path().join("gt.pgm");
    write_disparity(&map, &est, DisparityEncoding::Fixed256).unwrap();
    write_disparity(&map, &gt, DisparityEncoding::Fixed256).unwrap();
    let output = run(&[
        "evaluate",
        "--est",
        est.to_str().unwrap(),
        "--gt",
        gt.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    assert_eq!(
        stdout(&output),
        "d1_all_est=0.000000\n\
         d1_all_all=0.000000\n\
         bad_0_5=0.000000\n\
         bad_1=0.000000\n\
         bad_2=0.000000\n\
         bad_4=0.000000\n\
         density=1.000000\n\
         count_gt_valid=8\n\
         count_est_valid=8\n\
         count_evaluated_est=8\n\
         count_total_pixels=8\n"
    );
}

#[test]
fn evaluate_four_pixel_case() {
    // gt = [5,5,5,5], est = [5,8,5,6]: one error of 3 px -> D1 = 0.25.
    let dir = tempfile::tempdir().unwrap();
    let gt_map = DisparityMap::from_fn(4, 1, |_, _| Some(5.0));
    let est_map = DisparityMap::from_fn(4, 1, |x, _| Some([5.0f32, 8.0, 5.0, 6.0][x]));
    let est = dir.path().join("est.pgm");
    let gt = dir.path().join("gt.pgm");
    write_disparity(&est_map, &est, DisparityEncoding::Fixed256).unwrap();
    write_disparity(&gt_map, &gt, DisparityEncoding::Fixed256).unwrap();
    let output = run(&[
        "evaluate",
        "--est",
        est.to_str().unwrap(),
        "--gt",
        gt.to_str().unwrap(),
        "--report",
        "json-like",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("\"d1_all_est\": 0.250000"), "{text}");
    assert!(text.contains("\"bad_1\": 0.250000"), "{text}");
    assert!(text.contains("\"bad_4\": 0.000000"), "{text}");
    // The document is parseable JSON.
    assert!(text.trim_start().starts_with('{') && text.trim_end().ends_with('}'));
}

#[test]
fn evaluate_scale_aligns_resolutions() {
    let dir = tempfile::tempdir().unwrap();
    // Quarter-resolution estimate of a full-resolution ground truth.
    let est_map = DisparityMap::from_fn(4, 3, |_, _| Some(2.5));
    let gt_map = DisparityMap::from_fn(16, 12, |_, _| Some(10.0));
    let est = dir.path().join("q.pgm");
    let gt = dir.path().join("f.pgm");
    write_disparity(&est_map, &est, DisparityEncoding::Fixed256).unwrap();
    write_disparity(&gt_map, &gt, DisparityEncoding::Fixed256).unwrap();
    // Without scaling the dimensions mismatch.
    let bad = run(&[
        "evaluate",
        "--est",
        est.to_str().unwrap(),
        "--gt",
        gt.to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(1));
    // With --scale 4 the upsampled estimate (2.5 * 4 = 10) matches exactly.
    let good = run(&[
        "evaluate",
        "--est",
        est.to_str().unwrap(),
        "--gt",
        gt.to_str().unwrap(),
        "--scale",
        "4",
    ]);
    assert_eq!(good.status.code(), Some(0), "{}", stderr(&good));
    assert!(stdout(&good).contains("d1_all_est=0.000000"));
    assert!(stdout(&good).contains("bad_0_5=0.000000"));
}

#[test]
fn bench_reports_median_and_efficiency() {
    let dir = tempfile::tempdir().unwrap();
    let (left, right) = write_pair(dir.path(), "b", 3);
    let output = run(&[
        "bench",
        "--left",
        left.to_str().unwrap(),
        "--right",
        right.to_str().unwrap(),
        "--max-disp",
        "15",
        "--repeat",
        "5",
        "--watts",
        "20.1",
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let text = stdout(&output);
    for field in ["run_1_s=", "run_5_s=", "median_total_s=", "mde_per_s=", "fps=", "fps_per_w="] {
        assert!(text.contains(field), "missing {field} in:\n{text}");
    }
}

#[test]
fn bench_zero_repeat_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let (left, right) = write_pair(dir.path(), "z", 1);
    let output = run(&[
        "bench",
        "--left",
        left.to_str().unwrap(),
        "--right",
        right.to_str().unwrap(),
        "--max-disp",
        "15",
        "--repeat",
        "0",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn dataset_two_pairs_with_and_without_gt() {
    let dir = tempfile::tempdir().unwrap();
    write_pair(dir.path(), "a", 3);
    write_pair(dir.path(), "b", 5);
    // Ground truth for pair a only: the true constant disparity.
    let gt = DisparityMap::from_fn(48, 36, |_, _| Some(3.0));
    write_disparity(&gt, dir.path().join("a_gt.pgm"), DisparityEncoding::Fixed256).unwrap();
    let output = run(&[
        "dataset",
        "--root",
        dir.path().to_str().unwrap(),
        "--layout",
        "pairs",
        "--max-disp",
        "15",
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4, "header + 2 pairs + mean:\n{text}");
    assert!(lines[1].starts_with('a'));
    assert!(lines[2].starts_with('b'));
    assert!(lines[2].contains("n/a"), "gt-less pair must be n/a:\n{text}");
    assert!(lines[3].starts_with("mean"));
}

#[test]
fn dataset_empty_folder_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&[
        "dataset",
        "--root",
        dir.path().to_str().unwrap(),
        "--layout",
        "pairs",
        "--max-disp",
        "15",
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("no pairs found"));
}

#[test]
fn arbitrary_argv_never_panics() {
    let cases: &[&[&str]] = &[
        &[],
        &["estimate"],
        &["evaluate"],
        &["bench"],
        &["dataset"],
        &["frobnicate"],
        &["estimate", "--left"],
        &["estimate", "--max-disp", "banana"],
        &["estimate", "--max-disp", "-3"],
        &["estimate", "--max-disp", "999999"],
        &["evaluate", "--est", "", "--gt", ""],
        &["bench", "--repeat", "-1"],
        &["dataset", "--root"],
        &["--max-disp", "15"],
        &["estimate", "--cost", "sad3x3", "--max-disp", "1"],
        &["estimate", "--paths", "7", "--max-disp", "1", "--left", "x", "--right", "y"],
        &["estimate", "--unknown-flag"],
        &["evaluate", "--est", "\u{1F600}", "--gt", "x"],
    ];
    for args in cases {
        let output = binary().args(*args).output().expect("binary must run");
        let code = output.status.code().expect("no signal/panic expected");
        assert!(
            (0..=2).contains(&code),
            "args {args:?} gave unexpected exit {code}: {}",
            stderr(&output)
        );
        assert!(
            !stderr(&output).contains("panicked"),
            "args {args:?} panicked: {}",
            stderr(&output)
        );
    }
}
