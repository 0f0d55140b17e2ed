//! Self-describing text artifacts: a `#` header block, then data lines.

use std::io::Write;
use std::path::Path;

use crate::error::CliError;

/// Header block lines: `# key=value`.
#[derive(Debug, Clone, Default)]
pub struct Header {
    title: String,
    entries: Vec<(String, String)>,
}

impl Header {
    pub fn new(title: &str) -> Self {
        Self {
            title: title.into(),
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn render(&self) -> String {
        let mut s = format!("# {}\n", self.title);
        for (k, v) in &self.entries {
            s.push_str(&format!("# {k}={v}\n"));
        }
        s
    }
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Header plus one sample per line, in shortest round-trip form.
pub fn render_samples(header: &Header, samples: &[f64]) -> String {
    let mut s = header.render();
    s.reserve(samples.len() * 20);
    for x in samples {
        s.push_str(&format!("{x}\n"));
    }
    s
}

/// Reads a sample file, skipping `#` lines and blank lines.
pub fn read_samples(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read samples {}: {e}", path.display())))?;
    parse_samples(&text)
}

pub fn parse_samples(text: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(line.parse().map_err(|_| {
            CliError::Usage(format!(
                "sample line {}: `{line}` is not a number",
                lineno + 1
            ))
        })?);
    }
    if out.is_empty() {
        return Err(CliError::Usage("sample file has no data lines".into()));
    }
    Ok(out)
}

/// Optional value as a table cell; empty when absent.
pub fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
