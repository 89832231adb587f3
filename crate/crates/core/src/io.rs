//! Game files: `{"A": [[..],[..]], "B": [[..],[..]], "Lambda": [[..],[..]]}`.
//!
//! Doubles are written in shortest round-trip form, so re-reading a written
//! file reproduces it byte for byte.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{EmpathyMatrix, Game2x2};
use crate::matrix::Matrix2;

/// Environment variable overriding the bundled fixture directory.
pub const FIXTURES_ENV: &str = "EMPATHICA_FIXTURES";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameFile {
    #[serde(rename = "A")]
    pub a: Matrix2,
    #[serde(rename = "B")]
    pub b: Matrix2,
    #[serde(rename = "Lambda", default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<EmpathyMatrix>,
}

impl GameFile {
    pub fn new(game: Game2x2, lambda: Option<EmpathyMatrix>) -> Self {
        GameFile {
            a: game.a,
            b: game.b,
            lambda,
        }
    }

    pub fn game(&self) -> Result<Game2x2> {
        Game2x2::new(self.a, self.b)
    }

    /// The file's empathy matrix, identity when absent.
    pub fn empathy(&self) -> Result<EmpathyMatrix> {
        let lam = self.lambda.unwrap_or_default();
        EmpathyMatrix::new(lam.l11, lam.l12, lam.l21, lam.l22)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: GameFile = serde_json::from_str(text)?;
        file.game().map_err(|e| Error::Parse(e.to_string()))?;
        file.empathy().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        GameFile::parse(&text).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("game files always serialize");
        s.push('\n');
        s
    }
}

pub fn fixture_dir() -> PathBuf {
    std::env::var_os(FIXTURES_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures")))
}

/// Names of the available fixtures, sorted.
pub fn fixture_names() -> Result<Vec<String>> {
    let mut names: Vec<String> = fs::read_dir(fixture_dir())?
        .filter_map(|entry| {
            let path = entry.ok()?.path();
            (path.extension()? == "json").then(|| path.file_stem()?.to_str().map(str::to_owned))?
        })
        .collect();
    names.sort();
    Ok(names)
}

pub fn load_fixture(name: &str) -> Result<GameFile> {
    GameFile::read(&fixture_dir().join(format!("{name}.json")))
}

/// An existing path is read directly, anything else is looked up as a fixture name.
pub fn resolve_input(name: &str) -> Result<GameFile> {
    let path = Path::new(name);
    if path.exists() {
        GameFile::read(path)
    } else {
        load_fixture(name.trim_end_matches(".json"))
    }
}
