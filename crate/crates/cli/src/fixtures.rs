//! Fixtures bundled into the binary.

use std::fs;
use std::path::Path;

use crate::error::CliError;
use crate::input::{parse_json, read_text, FixtureFile};

pub const BUNDLED: &[(&str, &str)] = &[
    ("RP1", include_str!("../fixtures/RP1.json")),
    ("RP2", include_str!("../fixtures/RP2.json")),
    ("RP3", include_str!("../fixtures/RP3.json")),
    ("RP4", include_str!("../fixtures/RP4.json")),
    ("RP5", include_str!("../fixtures/RP5.json")),
    ("RP6", include_str!("../fixtures/RP6.json")),
    ("T2", include_str!("../fixtures/T2.json")),
    ("T3", include_str!("../fixtures/T3.json")),
    ("T4", include_str!("../fixtures/T4.json")),
    ("M2-hexagon", include_str!("../fixtures/M2-hexagon.json")),
    ("pentagon-3coloring", include_str!("../fixtures/pentagon-3coloring.json")),
    ("hexagon-3coloring", include_str!("../fixtures/hexagon-3coloring.json")),
];

pub fn bundled() -> Vec<FixtureFile> {
    BUNDLED
        .iter()
        .map(|(name, text)| parse_json(text, name).expect("bundled fixtures are valid"))
        .collect()
}

pub fn bundled_by_name(name: &str) -> Result<FixtureFile, CliError> {
    bundled()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| {
            let names: Vec<&str> = BUNDLED.iter().map(|(n, _)| *n).collect();
            CliError::Schema(format!("no bundled fixture {name:?}; available: {}", names.join(", ")))
        })
}

/// Every `*.json` file in `dir`, in file-name order.
pub fn load_dir(dir: &Path) -> Result<Vec<FixtureFile>, CliError> {
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| parse_json(&read_text(p)?, &p.display().to_string()))
        .collect()
}

/// Writes the bundled fixtures whose names contain `filter`; returns the
/// paths written.
pub fn export(dir: &Path, filter: Option<&str>) -> Result<Vec<String>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();
    for (name, text) in BUNDLED {
        if filter.is_some_and(|f| !name.contains(f)) {
            continue;
        }
        let path = dir.join(format!("{name}.json"));
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        written.push(path.display().to_string());
    }
    Ok(written)
}
