//! Canonical JSON: keys sorted, floats as `{:.16e}` (17 significant digits),
//! one line plus a trailing newline. Identical values give identical bytes.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

struct Scientific;

impl Formatter for Scientific {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

/// Non-finite floats become `null`.
pub fn to_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    // Going through `Value` sorts every object by key.
    let tree = serde_json::to_value(value)?;
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Scientific);
    tree.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}
