//! Output plumbing: stdout-or-file writing and the 6-significant-digit
//! float format used in human-readable documents. JSON documents keep full
//! precision.

use super::CliError;

/// Format with 6 significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return String::from("0.00000");
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exponent) {
        let decimals = (5 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

pub struct Output {
    target: Option<std::path::PathBuf>,
}

impl Output {
    pub fn new(target: Option<std::path::PathBuf>) -> Self {
        Output { target }
    }

    pub fn write(&self, doc: &str) -> Result<(), CliError> {
        match &self.target {
            Some(path) => std::fs::write(path, doc)
                .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{doc}");
                Ok(())
            }
        }
    }

    pub fn write_json(&self, doc: &serde_json::Value) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(doc)
            .map_err(|e| CliError::Runtime(format!("cannot serialize report: {e}")))?;
        text.push('\n');
        self.write(&text)
    }
}
