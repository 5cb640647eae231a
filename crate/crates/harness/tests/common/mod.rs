#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const MS2PSO_SMALL: &str = r#"
algorithm = "ms2pso"
population_size = 8
t_max = 10
seeds = [1, 2]
output_dir = "ms2pso"
parallelism = 1
objective = { name = "sphere", dimension = 2 }
"#;

pub const CANONICAL_SMALL: &str = r#"
algorithm = "canonical"
population_size = 8
t_max = 10
seeds = [1]
output_dir = "canonical"
parallelism = 1
objective = { name = "sphere", dimension = 2 }
"#;

/// Every position overflows, so each run fails on its initial pass.
pub const OVERFLOWING: &str = r#"
algorithm = "canonical"
population_size = 4
t_max = 3
seeds = [1, 2]
output_dir = "overflow"
objective = { name = "rosenbrock", dimension = 2, bounds = [1e154, 1e155] }
"#;

pub fn ms2pso(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ms2pso"))
        .args(args)
        .current_dir(dir)
        .env("RUST_LOG", "off")
        .output()
        .expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

/// Writes `text` to `dir/name` and runs it, asserting success.
pub fn run_config(dir: &Path, name: &str, text: &str) -> Output {
    std::fs::write(dir.join(name), text).unwrap();
    let out = ms2pso(dir, &["run", name]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    out
}

pub fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Compares `actual` with the stored golden file. `UPDATE_GOLDEN=1`
/// rewrites it instead.
pub fn check_golden(name: &str, actual: &str) -> Result<(), String> {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path)
        .map_err(|e| format!("{}: {e} (set UPDATE_GOLDEN=1 to create it)", path.display()))?;
    if expected == actual {
        return Ok(());
    }
    let line = expected
        .lines()
        .zip(actual.lines())
        .position(|(a, b)| a != b)
        .map_or_else(|| "length".to_string(), |i| format!("line {}", i + 1));
    Err(format!("{name} differs from golden file at {line}"))
}
