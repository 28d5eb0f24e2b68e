//! RFC 4180 tables: CRLF line ends, shortest round-trip floats.

use csv::{Terminator, WriterBuilder};
use rosette_core::Complex64;

/// A table with a header row; cells are written verbatim.
pub fn table<R, I>(header: &[&str], rows: R) -> Result<String, csv::Error>
where
    R: IntoIterator<Item = I>,
    I: IntoIterator<Item = String>,
{
    let mut writer = WriterBuilder::new()
        .terminator(Terminator::CRLF)
        .from_writer(Vec::new());
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row)?;
    }
    let bytes = writer.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// `t,re,im` rows for sampled curve points.
pub fn export_csv(samples: &[(f64, Complex64)]) -> Result<String, csv::Error> {
    table(
        &["t", "re", "im"],
        samples
            .iter()
            .map(|(t, z)| [t.to_string(), z.re.to_string(), z.im.to_string()]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_of_identity() {
        let samples: Vec<(f64, Complex64)> = (0..4)
            .map(|k| {
                let t = k as f64 / 4.0;
                (t, rosette_core::cis_turns(t))
            })
            .collect();
        let text = export_csv(&samples).unwrap();
        let lines: Vec<&str> = text.split("\r\n").collect();
        assert_eq!(lines[0], "t,re,im");
        assert_eq!(lines[1], "0,1,0");
        assert_eq!(lines[2], "0.25,0,1");
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[5], "");
    }

    #[test]
    fn round_trip_precision() {
        let x = 0.1f64 + 0.2;
        let text = export_csv(&[(x, Complex64::new(x, -x))]).unwrap();
        let row = text.split("\r\n").nth(1).unwrap();
        let back: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(back, [x, x, -x]);
    }
}
