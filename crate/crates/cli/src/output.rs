use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use exchange_budget::montecarlo::SweepRow;

use crate::CliError;

pub const CSV_HEADER: &str = "axis_value,mean_infidelity,stderr,analytic_prediction,n_samples,seed";

/// Provenance record written next to every data file.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: &'static str,
    pub parameters: Value,
    pub defaults: Value,
    pub seed: Option<u64>,
    pub outputs: Vec<PathBuf>,
    pub wall_clock_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Value>,
}

impl RunManifest {
    pub fn new(command: &str, parameters: Value, defaults: Value, seed: Option<u64>) -> Self {
        Self {
            command: command.into(),
            tool_version: env!("CARGO_PKG_VERSION"),
            parameters,
            defaults,
            seed,
            outputs: Vec::new(),
            wall_clock_seconds: 0.0,
            diagnostics: None,
        }
    }

    pub fn finish(
        mut self,
        outputs: Vec<PathBuf>,
        elapsed: Duration,
        path: &Path,
    ) -> Result<(), CliError> {
        self.outputs = outputs;
        self.wall_clock_seconds = elapsed.as_secs_f64();
        let body = serde_json::to_string_pretty(&self).map_err(CliError::internal)?;
        write_file(path, &(body + "\n"))
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)
            .map_err(|e| CliError::Internal(format!("{}: {e}", parent.display())))?;
    }
    fs::write(path, contents).map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))
}

/// `<file>.manifest.json`.
pub fn manifest_path_for(data: &Path) -> PathBuf {
    let mut name = data
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".manifest.json");
    data.with_file_name(name)
}

pub fn sweep_csv(rows: &[SweepRow], seed: u64) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{:e},{:e},{:e},{:e},{},{}\n",
            row.value,
            row.result.mean_infidelity,
            row.result.stderr,
            row.analytic_prediction,
            row.result.n_samples,
            seed
        ));
    }
    out
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

pub fn sci3(x: f64) -> String {
    format!("{x:.3e}")
}
