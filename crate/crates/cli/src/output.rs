use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Latex,
    Ascii,
}

/// A command result in every supported rendering.
pub struct Output {
    pub json: Value,
    pub ascii: String,
    pub latex: String,
}

impl Output {
    pub fn new(json: Value, ascii: String, latex: String) -> Self {
        Output { json, ascii, latex }
    }

    /// JSON and plain text only; LaTeX falls back to the text rendering.
    pub fn plain(json: Value, ascii: String) -> Self {
        Output {
            json,
            latex: ascii.clone(),
            ascii,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("json value"),
            Format::Ascii => self.ascii.trim_end().to_string(),
            Format::Latex => self.latex.trim_end().to_string(),
        }
    }
}

/// `\begin{pmatrix} ... \end{pmatrix}` from pre-rendered cells.
pub fn latex_matrix(rows: &[Vec<String>]) -> String {
    let body: Vec<String> = rows.iter().map(|r| r.join(" & ")).collect();
    format!("\\begin{{pmatrix}}\n{}\n\\end{{pmatrix}}", body.join(" \\\\\n"))
}

/// Right-aligned text table.
pub fn text_table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(c, s)| format!("{:>w$}", s, w = widths[c]))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}
