//! CSV and JSON emission. Reals are written with 17 significant digits and a
//! '.' decimal point regardless of locale.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

pub fn open(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_real(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

/// Two columns, `re,im`.
pub fn complex(z: Option<Complex64>) -> String {
    match z {
        Some(z) => format!("{},{}", real(z.re), real(z.im)),
        None => ",".to_string(),
    }
}

/// Quotes a free-text field when it contains separators or quotes.
pub fn text(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A single value as an object, several as an array.
pub fn json_one_or_many<T: Serialize>(w: &mut dyn Write, items: &[T]) -> serde_json::Result<()> {
    match items {
        [one] => serde_json::to_writer_pretty(&mut *w, one)?,
        many => serde_json::to_writer_pretty(&mut *w, many)?,
    }
    writeln!(w).map_err(serde_json::Error::io)
}
