//! CSV and manifest emission. Numbers are rendered with six significant
//! digits so outputs are stable across platforms.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

/// Render with six significant digits, plain decimal notation.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // Trim a trailing "-0.000000"-style artifact back to zero.
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0".into()
    } else {
        s
    }
}

pub fn opt_sig6(x: Option<f64>) -> String {
    x.map(sig6).unwrap_or_else(|| "not_reached".into())
}

pub struct OutputDir {
    dir: PathBuf,
    files: Vec<String>,
}

impl OutputDir {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::validation(format!("cannot create output dir {dir:?}: {e}")))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn write_file(&mut self, name: &str, content: &str) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        let mut f = fs::File::create(&path)
            .map_err(|e| CliError::validation(format!("cannot write {path:?}: {e}")))?;
        f.write_all(content.as_bytes())
            .map_err(|e| CliError::validation(format!("cannot write {path:?}: {e}")))?;
        self.files.push(name.to_string());
        Ok(path)
    }

    pub fn write_csv(
        &mut self,
        name: &str,
        header: &str,
        rows: impl IntoIterator<Item = String>,
    ) -> Result<PathBuf, CliError> {
        let mut text = String::from(header);
        text.push('\n');
        for row in rows {
            text.push_str(&row);
            text.push('\n');
        }
        self.write_file(name, &text)
    }

    /// Emit the JSON run manifest: tool identity, command, resolved config,
    /// seed, wall clock, and the files this run produced.
    pub fn write_manifest<C: Serialize>(
        &mut self,
        command: &str,
        config: &C,
        base_seed: u64,
        wall_clock_seconds: f64,
    ) -> Result<PathBuf, CliError> {
        let manifest = serde_json::json!({
            "tool": "sector-music",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "config": config,
            "base_seed": base_seed,
            "wall_clock_seconds": wall_clock_seconds,
            "outputs": self.files,
        });
        let text = serde_json::to_string_pretty(&manifest)
            .map_err(|e| CliError::validation(format!("manifest serialization: {e}")))?;
        self.write_file("manifest.json", &text)
    }
}
