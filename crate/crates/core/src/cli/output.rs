use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::Failure;

/// Serialized form of one command result.
pub(super) struct Document {
    bytes: Vec<u8>,
}

impl Document {
    /// Header row plus data rows, LF terminated. Floats are written through
    /// `Debug`, the shortest decimal that parses back to the same value.
    pub(super) fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Self, Failure> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(header).map_err(Failure::io)?;
        for row in rows {
            w.write_record(&row).map_err(Failure::io)?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::io(e.into_error()))?;
        Ok(Self { bytes })
    }

    /// One JSON object followed by a newline.
    pub(super) fn json<S: Serialize>(value: &S) -> Result<Self, Failure> {
        let mut bytes = serde_json::to_vec(value).map_err(Failure::io)?;
        bytes.push(b'\n');
        Ok(Self { bytes })
    }

    pub(super) fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    pub(super) fn emit(self, path: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
        match path {
            Some(p) => fs::write(p, &self.bytes)
                .map_err(|e| Failure::usage(format!("cannot write --output {}: {e}", p.display()))),
            None => stdout.write_all(&self.bytes).map_err(Failure::io),
        }
    }
}

pub(super) fn float(x: f64) -> String {
    format!("{x:?}")
}

pub(super) fn float_list(xs: &[f64]) -> String {
    xs.iter().map(|&x| float(x)).collect::<Vec<_>>().join(";")
}
