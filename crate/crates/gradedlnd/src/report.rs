//! Key/value reports with a deterministic rendering: keys sorted, values
//! exact, identical input producing byte-identical output.

use std::collections::BTreeMap;
use std::fmt::{self, Display};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "text" => Some(Format::Text),
            "structured" => Some(Format::Structured),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    entries: BTreeMap<String, String>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl Display) {
        self.entries.insert(key.into(), value.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|s| s.as_str())
    }

    /// Numbered list entries: `prefix.00`, `prefix.01`, ... Indices are
    /// zero-padded so lexicographic and numeric order agree.
    pub fn set_list<I, T>(&mut self, prefix: &str, items: I)
    where
        I: IntoIterator<Item = T>,
        T: Display,
    {
        let items: Vec<T> = items.into_iter().collect();
        let width = std::cmp::max(2, items.len().saturating_sub(1).to_string().len());
        for (i, item) in items.into_iter().enumerate() {
            self.set(format!("{prefix}.{i:0width$}"), item);
        }
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            match format {
                Format::Text => {
                    out.push_str(k);
                    out.push_str(" = ");
                }
                Format::Structured => {
                    out.push_str(k);
                    out.push('=');
                }
            }
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(Format::Text))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_render_sorted() {
        let mut r = Report::new();
        r.set("zeta", 1);
        r.set("alpha", "x + y");
        assert_eq!(r.render(Format::Text), "alpha = x + y\nzeta = 1\n");
        assert_eq!(r.render(Format::Structured), "alpha=x + y\nzeta=1\n");
    }

    #[test]
    fn list_entries_keep_order() {
        let mut r = Report::new();
        r.set_list("gen", ["y^2", "x*y", "x^2"]);
        assert_eq!(
            r.render(Format::Structured),
            "gen.00=y^2\ngen.01=x*y\ngen.02=x^2\n"
        );
    }

    #[test]
    fn rendering_is_reproducible() {
        let mut r = Report::new();
        r.set("pi", "{2, 3, 5}");
        r.set("saturated", false);
        assert_eq!(r.render(Format::Text), r.render(Format::Text));
    }
}
