mod common;

use std::path::{Path, PathBuf};

use common::*;
use ms2pso_harness::{
    load_config, parse_config, summarize, write_config, Algorithm, ExperimentConfig, HistoryFile,
    RunSummary,
};

fn read(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn two_seeds_give_two_histories_and_one_summary() {
    let dir = tempfile::tempdir().unwrap();
    run_config(dir.path(), "c.toml", MS2PSO_SMALL);
    let mut names: Vec<String> = std::fs::read_dir(dir.path().join("ms2pso"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        [
            "config.toml",
            "convergence.csv",
            "history-seed-1.jsonl",
            "history-seed-2.jsonl",
            "summary.json"
        ]
    );
}

#[test]
fn outputs_match_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    run_config(dir.path(), "m.toml", MS2PSO_SMALL);
    run_config(dir.path(), "c.toml", CANONICAL_SMALL);
    let m = dir.path().join("ms2pso");
    check_golden(
        "ms2pso_history_seed1.jsonl",
        &read(m.join("history-seed-1.jsonl")),
    )
    .unwrap();
    check_golden("ms2pso_convergence.csv", &read(m.join("convergence.csv"))).unwrap();

    let out = ms2pso(
        dir.path(),
        &[
            "plot-data",
            "canonical/history-seed-1.jsonl",
            "ms2pso/history-seed-1.jsonl",
            "-o",
            "mixed.csv",
        ],
    );
    assert_eq!(code(&out), 0);
    check_golden("mixed_plot.csv", &read(dir.path().join("mixed.csv"))).unwrap();

    let out = ms2pso(dir.path(), &["presets"]);
    assert_eq!(code(&out), 0);
    check_golden("presets.txt", &String::from_utf8(out.stdout).unwrap()).unwrap();
}

#[test]
fn plot_layout_follows_swarm_count() {
    let dir = tempfile::tempdir().unwrap();
    run_config(dir.path(), "m.toml", MS2PSO_SMALL);
    let csv = read(dir.path().join("ms2pso/convergence.csv"));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 11);
    let header: Vec<&str> = lines[0].split(',').collect();
    assert_eq!(&header[..3], ["iteration", "run0_best", "run1_best"]);
    assert_eq!(header.len(), 3 + 2 * 8);

    // stages [(8,2),(4,2),(2,2),(1,4)]
    let expected_swarms = [8, 8, 4, 4, 2, 2, 1, 1, 1, 1];
    for (row, &n) in lines[1..].iter().zip(&expected_swarms) {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), header.len());
        for run in 0..2 {
            let swarm_cells = &cells[3 + 8 * run..3 + 8 * (run + 1)];
            assert!(swarm_cells[..n].iter().all(|c| !c.is_empty()), "{row}");
            assert!(swarm_cells[n..].iter().all(|c| c.is_empty()), "{row}");
        }
    }
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_config(a.path(), "m.toml", MS2PSO_SMALL);
    run_config(b.path(), "m.toml", MS2PSO_SMALL);
    for seed in [1, 2] {
        let name = format!("ms2pso/history-seed-{seed}.jsonl");
        assert_eq!(read(a.path().join(&name)), read(b.path().join(&name)));
    }
}

#[test]
fn summary_is_recomputable_from_histories() {
    let dir = tempfile::tempdir().unwrap();
    run_config(dir.path(), "m.toml", MS2PSO_SMALL);
    let out_dir = dir.path().join("ms2pso");
    let stored: RunSummary = serde_json::from_str(&read(out_dir.join("summary.json"))).unwrap();
    let paths: Vec<PathBuf> = [1, 2]
        .iter()
        .map(|s| out_dir.join(format!("history-seed-{s}.jsonl")))
        .collect();
    let recomputed = summarize(&paths).unwrap();
    assert_eq!(stored.without_timing(), recomputed.without_timing());

    let finals: Vec<f64> = paths
        .iter()
        .map(|p| HistoryFile::read(p).unwrap().final_value().unwrap())
        .collect();
    let stats = recomputed.final_best.unwrap();
    assert_eq!(stats.median, (finals[0] + finals[1]) / 2.0);
    assert_eq!(recomputed.total_evaluations, 2 * 8 * 11);
}

#[test]
fn config_round_trips_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut configs: Vec<ExperimentConfig> = Algorithm::ALL
        .into_iter()
        .map(ExperimentConfig::preset)
        .collect();
    configs.push(parse_config(MS2PSO_SMALL, Path::new("m.toml")).unwrap());
    let mut custom = ExperimentConfig::preset(Algorithm::TwoStage).with_budget(20, 60);
    custom.seeds = vec![u64::from(u32::MAX) + 7, 0];
    custom.record_particles = true;
    configs.push(custom);
    for (i, config) in configs.into_iter().enumerate() {
        let path = dir.path().join(format!("c{i}.toml"));
        write_config(&config, &path).unwrap();
        assert_eq!(load_config(&path).unwrap(), config);
    }
}

#[test]
fn exit_code_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let write = |name: &str, text: &str| std::fs::write(d.join(name), text).unwrap();

    write("ok.toml", CANONICAL_SMALL);
    assert_eq!(code(&ms2pso(d, &["run", "ok.toml"])), 0);
    // output directory is now populated
    assert_eq!(code(&ms2pso(d, &["run", "ok.toml"])), 2);
    assert_eq!(code(&ms2pso(d, &["run", "ok.toml", "--force"])), 0);
    assert_eq!(
        code(&ms2pso(
            d,
            &[
                "run",
                "ok.toml",
                "--output",
                "elsewhere",
                "--parallelism",
                "2"
            ]
        )),
        0
    );

    write("fail.toml", OVERFLOWING);
    let out = ms2pso(d, &["run", "fail.toml"]);
    assert_eq!(code(&out), 1);
    let summary: RunSummary = serde_json::from_str(&read(d.join("overflow/summary.json"))).unwrap();
    assert_eq!(summary.failed_runs(), 2);

    write(
        "syntax.toml",
        "algorithm = \"canonical\"\npopulation_size = = 4\n",
    );
    let out = ms2pso(d, &["run", "syntax.toml"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    write(
        "mismatch.toml",
        "algorithm = \"2spso\"\nt_max = 30\nstage_plan = [\n  { swarm_count = 4, iterations = 10 },\n  \
         { swarm_count = 2, iterations = 10 },\n  { swarm_count = 1, iterations = 10 },\n]\n",
    );
    let out = ms2pso(d, &["run", "mismatch.toml"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("algorithm/stage_plan mismatch"));

    write(
        "unknown.toml",
        "algorithm = \"canonical\"\npopulation = 4\n",
    );
    assert_eq!(code(&ms2pso(d, &["run", "unknown.toml"])), 2);

    // histories from different objectives
    write(
        "other.toml",
        &CANONICAL_SMALL
            .replace("sphere", "rastrigin")
            .replace("output_dir = \"canonical\"", "output_dir = \"other\""),
    );
    assert_eq!(code(&ms2pso(d, &["run", "other.toml"])), 0);
    let out = ms2pso(
        d,
        &[
            "summarize",
            "canonical/history-seed-1.jsonl",
            "other/history-seed-1.jsonl",
        ],
    );
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("objective"));

    let out = ms2pso(d, &["summarize", "canonical/history-seed-1.jsonl"]);
    assert_eq!(code(&out), 0);
    let single: RunSummary = serde_json::from_slice(&out.stdout).unwrap();
    let s = single.final_best.unwrap();
    assert!(s.median == s.min && s.min == s.max);

    assert_eq!(code(&ms2pso(d, &["summarize"])), 2);
    assert_eq!(code(&ms2pso(d, &["summarize", "missing.jsonl"])), 1);
}
