use std::fmt::Write as _;

/// Provenance header embedded in every output.
///
/// The timestamp comes from `SOURCE_DATE_EPOCH` when set and is otherwise left
/// out, so identical inputs produce identical bytes.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub config_digest: Option<String>,
    pub seed: Option<u64>,
    pub timestamp: Option<String>,
    /// Echoed key/value pairs (measurement settings, options).
    pub metadata: Vec<(String, String)>,
}

impl RunManifest {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config_digest: None,
            seed: None,
            timestamp: std::env::var("SOURCE_DATE_EPOCH").ok(),
            metadata: Vec::new(),
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    pub fn render_comments(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# command: {}", self.command);
        let _ = writeln!(out, "# tool_version: tripletcv {}", self.tool_version);
        if let Some(d) = &self.config_digest {
            let _ = writeln!(out, "# config_sha256: {d}");
        }
        if let Some(s) = self.seed {
            let _ = writeln!(out, "# seed: {s}");
        }
        let _ = writeln!(
            out,
            "# timestamp: {}",
            self.timestamp.as_deref().unwrap_or("unset")
        );
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        out
    }
}
