use std::io::{self, Write};

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schema {
    RateCurve,
    Convergence,
    McVsExact,
    LaplaceCheck,
}

impl Schema {
    pub fn name(self) -> &'static str {
        match self {
            Schema::RateCurve => "rate_curve",
            Schema::Convergence => "convergence",
            Schema::McVsExact => "mc_vs_exact",
            Schema::LaplaceCheck => "laplace_check",
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Schema::RateCurve => &["p", "q", "C", "I", "I_prime", "I_second", "asymptote"],
            Schema::Convergence => &["n", "log_prob", "a_n", "I", "a_n_minus_I"],
            Schema::McVsExact => &[
                "p", "q", "n", "samples", "hits", "estimate", "ci_low", "ci_high", "exact", "seed",
                "streams",
            ],
            Schema::LaplaceCheck => &[
                "x_star",
                "sigma",
                "delta",
                "log_laplace",
                "log_series",
                "ratio",
            ],
        }
    }
}

/// A single cell. Counts stay integral so seeds and sample sizes print exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub schema: Schema,
    pub rows: Vec<Vec<Cell>>,
}

impl OutputRecord {
    pub fn new(schema: Schema) -> Self {
        OutputRecord {
            schema,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.schema.columns().len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "{}", self.schema.columns().join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| format_cell(*c)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    fn write_json(&self, out: &mut impl Write) -> io::Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in self.schema.columns().iter().zip(row) {
                    obj.insert((*name).to_string(), json_cell(*cell));
                }
                Value::Object(obj)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("schema".into(), Value::String(self.schema.name().into()));
        doc.insert("rows".into(), Value::Array(rows));
        serde_json::to_writer_pretty(&mut *out, &Value::Object(doc))?;
        writeln!(out)
    }
}

/// Shortest decimal that parses back to the same binary64; exponent form
/// outside [1e-4, 1e16) to keep lines short.
pub fn format_real(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else if v == 0.0 || (1e-4..1e16).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn format_cell(c: Cell) -> String {
    match c {
        Cell::Int(i) => i.to_string(),
        Cell::Real(v) => format_real(v),
    }
}

fn json_cell(c: Cell) -> Value {
    match c {
        Cell::Int(i) => Value::from(i),
        Cell::Real(v) if v.is_finite() => Value::from(v),
        Cell::Real(v) => Value::String(format_real(v)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for v in [
            0.0,
            1.0,
            -0.1,
            std::f64::consts::PI,
            1.0986122886681098,
            1e-5,
            -3.3e-300,
            5e-324,
            1e16,
            123456789.123,
            f64::MAX,
        ] {
            let s = format_real(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(format_real(f64::INFINITY), "inf");
        assert_eq!(format_real(1e-5), "1e-5");
        assert_eq!(format_real(0.25), "0.25");
    }

    #[test]
    fn csv_layout() {
        let mut rec = OutputRecord::new(Schema::Convergence);
        rec.push(vec![
            3u64.into(),
            (-1.5).into(),
            0.5.into(),
            f64::INFINITY.into(),
            0.0.into(),
        ]);
        let mut buf = Vec::new();
        rec.write(Format::Csv, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n,log_prob,a_n,I,a_n_minus_I\n3,-1.5,0.5,inf,0\n"
        );
    }

    #[test]
    fn json_keeps_column_order() {
        let mut rec = OutputRecord::new(Schema::LaplaceCheck);
        rec.push(vec![
            1.0.into(),
            2.0.into(),
            3.0.into(),
            4.0.into(),
            5.0.into(),
            f64::INFINITY.into(),
        ]);
        let mut buf = Vec::new();
        rec.write(Format::Json, &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["schema"], "laplace_check");
        let keys: Vec<&String> = v["rows"][0].as_object().unwrap().keys().collect();
        assert_eq!(keys, Schema::LaplaceCheck.columns());
        assert_eq!(v["rows"][0]["ratio"], "inf");
    }
}
