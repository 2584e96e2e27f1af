//! Canonical JSON: floats with 17 significant digits in exponent form, NaN and
//! infinities as `null`. Key order is fixed by struct declaration order and
//! `BTreeMap`.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default)]
pub struct CanonicalFormatter;

impl Formatter for CanonicalFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_writer<W: Write, T: Serialize + ?Sized>(writer: W, value: &T) -> Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(writer, CanonicalFormatter);
    value.serialize(&mut ser).map_err(|e| Error::Io(e.to_string()))
}

pub fn to_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    to_writer(&mut buf, value)?;
    String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
}
