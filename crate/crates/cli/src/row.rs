//! One benchmark result and its CSV encoding.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub const CSV_HEADER: &str =
    "example,m,method,alpha,omega,iterations,converged,final_residual,predicted_rho,observed_rho";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BenchMethod {
    Gsor,
    Pgsor,
    /// PGSOR with the data-independent preset `(0.828, 1)`.
    PgsorApprox,
    Mhss,
}

impl BenchMethod {
    pub const ALL: [BenchMethod; 4] = [
        BenchMethod::Gsor,
        BenchMethod::Pgsor,
        BenchMethod::PgsorApprox,
        BenchMethod::Mhss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchMethod::Gsor => "gsor",
            BenchMethod::Pgsor => "pgsor",
            BenchMethod::PgsorApprox => "pgsor-approx",
            BenchMethod::Mhss => "mhss",
        }
    }
}

impl fmt::Display for BenchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        BenchMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method {s:?}; expected gsor, pgsor, pgsor-approx or mhss"))
    }
}

/// Empty `alpha`, `final_residual` and rho cells mean the value is unknown,
/// e.g. for a run that failed before iterating.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub example: u8,
    pub m: usize,
    pub method: BenchMethod,
    pub alpha: Option<f64>,
    pub omega: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub final_residual: Option<f64>,
    pub predicted_rho: Option<f64>,
    pub observed_rho: Option<f64>,
}

pub fn write_rows<W: Write>(rows: &[BenchRow], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<R: Read>(input: R) -> csv::Result<Vec<BenchRow>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> BenchRow {
        BenchRow {
            example: 3,
            m: 16,
            method: BenchMethod::PgsorApprox,
            alpha: Some(0.828),
            omega: Some(1.0),
            iterations: 9,
            converged: true,
            final_residual: Some(1.234_567_890_123e-7),
            predicted_rho: Some(0.172),
            observed_rho: None,
        }
    }

    #[test]
    fn header_and_round_trip() {
        let rows = vec![sample(), BenchRow { omega: None, method: BenchMethod::Gsor, ..sample() }];
        let mut buf = Vec::new();
        write_rows(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next(), Some(CSV_HEADER));
        assert!(text.contains(",pgsor-approx,"));
        assert_eq!(read_rows(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn method_names() {
        for m in BenchMethod::ALL {
            assert_eq!(m.name().parse::<BenchMethod>().unwrap(), m);
        }
        assert!("sor".parse::<BenchMethod>().is_err());
    }
}
