//! Output plumbing: the run manifest with its config hash, CSV/JSON file
//! writing, and generated gnuplot scripts so every emitted table can be
//! plotted without further tooling.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Provenance block attached to every machine-readable output. The
/// timestamp is the only field allowed to differ between identical runs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config_path: String,
    /// SHA-256 of the effective (post-override) config document.
    pub config_sha256: String,
    pub overrides: Vec<String>,
    pub timestamp_unix: u64,
}

impl RunManifest {
    pub fn new(command: &str, config_path: &Path, doc: &Value, overrides: &[String]) -> Self {
        let canonical = serde_json::to_string(doc).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        RunManifest {
            command: command.to_string(),
            config_path: config_path.display().to_string(),
            config_sha256: format!("{:x}", hasher.finalize()),
            overrides: overrides.to_vec(),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

/// Destination directory for generated files; created on first write.
pub struct OutDir {
    dir: PathBuf,
}

impl OutDir {
    pub fn new(dir: &Path) -> Self {
        OutDir { dir: dir.to_path_buf() }
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.dir)
            .with_context(|| format!("creating {}", self.dir.display()))?;
        let path = self.dir.join(name);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, &text)
    }
}

/// Line-plot script: one curve per y-column of a CSV with a shared x-column.
pub fn gnuplot_lines(
    csv: &str,
    title: &str,
    xlabel: &str,
    ylabel: &str,
    columns: &[(usize, &str)],
    logscale_y: bool,
) -> String {
    let mut s = String::new();
    s.push_str("# gnuplot script (generated)\n");
    s.push_str("set datafile separator ','\n");
    s.push_str(&format!("set title '{title}'\n"));
    s.push_str(&format!("set xlabel '{xlabel}'\n"));
    s.push_str(&format!("set ylabel '{ylabel}'\n"));
    if logscale_y {
        s.push_str("set logscale y\n");
    }
    s.push_str("set key outside\nset grid\n");
    let plots: Vec<String> = columns
        .iter()
        .map(|(col, name)| format!("'{csv}' using 1:{col} with lines title '{name}'"))
        .collect();
    s.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    s.push_str("pause -1 'press enter to close'\n");
    s
}

/// Heat-map script for a grid CSV in (x, y, z) long form.
pub fn gnuplot_map(
    csv: &str,
    title: &str,
    xlabel: &str,
    ylabel: &str,
    x_col: usize,
    y_col: usize,
    z_col: usize,
    zlabel: &str,
) -> String {
    let mut s = String::new();
    s.push_str("# gnuplot script (generated)\n");
    s.push_str("set datafile separator ','\n");
    s.push_str(&format!("set title '{title}'\n"));
    s.push_str(&format!("set xlabel '{xlabel}'\n"));
    s.push_str(&format!("set ylabel '{ylabel}'\n"));
    s.push_str(&format!("set cblabel '{zlabel}'\n"));
    s.push_str("set view map\nset pm3d at b corners2color c1\n");
    s.push_str(&format!(
        "splot '{csv}' using {x_col}:{y_col}:{z_col} with points pt 5 ps 1.5 palette notitle\n"
    ));
    s.push_str("pause -1 'press enter to close'\n");
    s
}
