//! JSON output with every float written as 17 significant digits.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};

/// Pretty-printing formatter that writes floats with `{:.16e}` so each value
/// round-trips exactly.
struct ExactFloats<'a> {
    inner: PrettyFormatter<'a>,
}

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.inner.$name(w $(, $arg)*)
            }
        )*
    };
}

impl Formatter for ExactFloats<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{}", format_f64(value))
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        write!(w, "{}", format_f64(value as f64))
    }

    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }
}

/// 17 significant digits in scientific notation.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn to_string<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(
        &mut buf,
        ExactFloats {
            inner: PrettyFormatter::with_indent(b"  "),
        },
    );
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}
