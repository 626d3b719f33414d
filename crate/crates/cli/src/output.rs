//! CSV writing with `#` metadata lines.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use evograph::format::canonical_json;
use evograph::TimeEvolvingGraph;
use sha2::{Digest, Sha256};

pub fn graph_hash(g: &TimeEvolvingGraph) -> String {
    hex::encode(Sha256::digest(canonical_json(g).as_bytes()))
}

/// Accumulates a CSV document: metadata comments, a header, rows, and
/// optional trailing comments.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(meta: &[(&str, String)]) -> Self {
        let mut text = format!("# evograph {}\n", env!("CARGO_PKG_VERSION"));
        for (k, v) in meta {
            text.push_str(&format!("# {k}: {v}\n"));
        }
        Self { text }
    }

    pub fn row<S: AsRef<str>>(&mut self, cells: &[S]) {
        let line: Vec<&str> = cells.iter().map(|c| c.as_ref()).collect();
        self.text.push_str(&line.join(","));
        self.text.push('\n');
    }

    pub fn comment(&mut self, s: &str) {
        self.text.push_str("# ");
        self.text.push_str(s);
        self.text.push('\n');
    }

    pub fn write(&self, out: Option<&Path>) -> io::Result<()> {
        match out {
            Some(p) => fs::write(p, &self.text),
            None => io::stdout().lock().write_all(self.text.as_bytes()),
        }
    }
}

/// Shortest decimal that reads back as `x`.
pub fn num(x: f64) -> String {
    format!("{x}")
}
