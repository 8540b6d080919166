//! CSV and JSON output with fixed 17-significant-digit floats.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::{Grid, ScalarField, Unit, VectorField};

/// `{:.16e}` for finite values, `nan`/`inf`/`-inf` otherwise.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}").to_lowercase()
    }
}

/// Pretty JSON formatter that writes every float as `{:.16e}`.
/// serde_json itself turns non-finite floats into `null`.
pub struct Float17Formatter<'a> {
    inner: PrettyFormatter<'a>,
}

impl Default for Float17Formatter<'_> {
    fn default() -> Self {
        Float17Formatter { inner: PrettyFormatter::new() }
    }
}

impl Formatter for Float17Formatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

/// Serialize `value` as pretty JSON with 17-digit floats.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Float17Formatter::default());
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

fn coord_header(grid: &Grid) -> &'static str {
    if grid.dim() == 1 {
        "x"
    } else {
        "x,y"
    }
}

fn coords(grid: &Grid, p: usize) -> String {
    grid.point(p).into_iter().map(fmt_f64).collect::<Vec<_>>().join(",")
}

/// One row per grid point: coordinates, then the value.
pub fn scalar_csv(f: &ScalarField) -> String {
    let mut out = format!("{},value\n", coord_header(f.grid()));
    for (p, v) in f.values().iter().enumerate() {
        out.push_str(&format!("{},{}\n", coords(f.grid(), p), fmt_f64(*v)));
    }
    out
}

/// Several named fields on one grid, one column each.
pub fn table_csv(grid: &Grid, columns: &[(&str, &[f64])]) -> String {
    let names: Vec<&str> = columns.iter().map(|c| c.0).collect();
    let mut out = format!("{},{}\n", coord_header(grid), names.join(","));
    for p in 0..grid.len() {
        let vals: Vec<String> = columns.iter().map(|c| fmt_f64(c.1[p])).collect();
        out.push_str(&format!("{},{}\n", coords(grid, p), vals.join(",")));
    }
    out
}

pub fn vector_csv(v: &VectorField) -> String {
    let names = ["vx", "vy"];
    let cols: Vec<(&str, &[f64])> = v.components().iter().zip(names).map(|(c, n)| (n, c.as_slice())).collect();
    table_csv(v.grid(), &cols)
}

#[derive(Serialize)]
struct GridMeta<'a> {
    axes: &'a [crate::Axis],
    spacing: Vec<f64>,
    boundary: &'static str,
    layout: &'static str,
}

impl<'a> GridMeta<'a> {
    fn of(g: &'a Grid) -> Self {
        GridMeta {
            axes: g.axes(),
            spacing: g.axes().iter().map(crate::Axis::spacing).collect(),
            boundary: "periodic",
            layout: "row-major",
        }
    }
}

#[derive(Serialize)]
struct FieldJson<'a> {
    grid: GridMeta<'a>,
    unit: Unit,
    values: &'a [f64],
}

/// Grid metadata plus the flat row-major value array.
pub fn scalar_json(f: &ScalarField) -> String {
    to_json(&FieldJson { grid: GridMeta::of(f.grid()), unit: f.unit(), values: f.values() }).expect("field serializes")
}

#[derive(Serialize)]
struct VectorJson<'a> {
    grid: GridMeta<'a>,
    unit: Unit,
    components: &'a [Vec<f64>],
}

pub fn vector_json(v: &VectorField) -> String {
    to_json(&VectorJson { grid: GridMeta::of(v.grid()), unit: v.unit(), components: v.components() })
        .expect("field serializes")
}
