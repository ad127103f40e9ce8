//! Reading and writing attention alignment files.
//!
//! Two formats are supported: a tab-separated line-record format (one record
//! per line, see [`canonical`]) and a human-editable block format (see
//! [`block`]). Framework-specific dumps are expected to be converted into one
//! of these before ingestion.

pub mod block;
pub mod canonical;

use std::str::FromStr;

pub use block::{parse_block_text, serialize_block_text};
pub use canonical::{parse_canonical, serialize_canonical};

use crate::alignment::Dataset;
use crate::error::{Error, Result};

/// System name given to freshly parsed datasets.
pub const DEFAULT_SYSTEM_NAME: &str = "system";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputFormat {
    #[default]
    Canonical,
    Block,
}

impl InputFormat {
    pub fn parse(self, input: &[u8]) -> Result<Dataset> {
        match self {
            InputFormat::Canonical => parse_canonical(input),
            InputFormat::Block => parse_block_text(input),
        }
    }
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "canonical" => Ok(InputFormat::Canonical),
            "block" => Ok(InputFormat::Block),
            other => Err(format!(
                "unknown input format {other:?} (expected canonical or block)"
            )),
        }
    }
}

/// Shortest decimal text that parses back to exactly `value`.
pub fn format_float(value: f64) -> String {
    let plain = format!("{value}");
    let sci = format!("{value:?}");
    if sci.len() < plain.len() {
        sci
    } else {
        plain
    }
}

pub(crate) fn parse_weight(text: &str) -> std::result::Result<f64, String> {
    let text = text.trim();
    let value: f64 = text
        .parse()
        .map_err(|_| format!("{text:?} is not a decimal number"))?;
    if !value.is_finite() || value < 0.0 {
        return Err(format!("weight {text} must be finite and non-negative"));
    }
    Ok(value)
}

/// Decodes UTF-8, reporting the 1-based line of the first invalid byte.
pub(crate) fn decode_utf8(input: &[u8]) -> Result<&str> {
    std::str::from_utf8(input).map_err(|e| {
        let line = input[..e.valid_up_to()]
            .iter()
            .filter(|b| **b == b'\n')
            .count()
            + 1;
        Error::malformed(line, "input is not valid UTF-8")
    })
}
