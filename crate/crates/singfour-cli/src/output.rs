use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

/// Values are written with 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub struct Csv {
    inner: csv::Writer<BufWriter<File>>,
    width: usize,
}

impl Csv {
    pub fn create(path: &Path, header: &[&str]) -> io::Result<Self> {
        let mut inner = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(BufWriter::new(File::create(path)?));
        inner.write_record(header)?;
        Ok(Csv { inner, width: header.len() })
    }

    pub fn row(&mut self, fields: &[String]) -> io::Result<()> {
        debug_assert_eq!(fields.len(), self.width);
        self.inner.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

/// Grey level of a sample in `[−1, 1]`; `None` maps to mid-grey.
pub fn grey(v: Option<f64>) -> u8 {
    match v {
        Some(v) if v.is_finite() => ((v + 1.0) / 2.0 * 255.0).round().clamp(0.0, 255.0) as u8,
        _ => 127,
    }
}

/// ASCII PGM of a `width × height` image; `sample(i, j)` is column `i`,
/// row `j` counted from the top.
pub fn write_pgm(path: &Path, width: usize, height: usize, sample: impl Fn(usize, usize) -> Option<f64>) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "P2")?;
    writeln!(w, "{width} {height}")?;
    writeln!(w, "255")?;
    for j in 0..height {
        // at most 17 four-character fields per line keeps lines under 70 chars
        for chunk in (0..width).collect::<Vec<_>>().chunks(17) {
            let line: Vec<String> = chunk.iter().map(|&i| grey(sample(i, j)).to_string()).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
    }
    w.flush()
}
