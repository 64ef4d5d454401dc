//! Gathering stored run summaries.

use std::path::Path;

use super::run::{RunSummary, SUMMARY_FILE};
use crate::error::{config, Result};

/// Reads `dir/summary.json` and `dir/*/summary.json`, sorted by `N` and
/// then by config digest.
pub fn collect_summaries(dir: &Path) -> Result<Vec<RunSummary>> {
    let mut paths = Vec::new();
    let own = dir.join(SUMMARY_FILE);
    if own.is_file() {
        paths.push(own);
    }
    let mut entries: Vec<_> = std::fs::read_dir(dir)?.collect::<std::io::Result<_>>()?;
    entries.sort_by_key(|e| e.file_name());
    for entry in entries {
        let candidate = entry.path().join(SUMMARY_FILE);
        if candidate.is_file() {
            paths.push(candidate);
        }
    }
    let mut out = Vec::with_capacity(paths.len());
    for path in paths {
        let text = std::fs::read_to_string(&path)?;
        let summary: RunSummary = serde_json::from_str(&text)
            .map_err(|e| config(format!("{}: {e}", path.display())))?;
        out.push(summary);
    }
    out.sort_by(|a, b| a.n.total_cmp(&b.n).then_with(|| a.config_digest.cmp(&b.config_digest)));
    Ok(out)
}
