//! `dpack-packing/1` documents and the equivalent CSV table.
//!
//! Reals are written with the shortest representation that round-trips exactly.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

use super::{Ball, Packing};

pub const PACKING_FORMAT: &str = "dpack-packing/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PackingDocument {
    pub format: String,
    pub dimension: usize,
    pub tol_rel: f64,
    pub balls: Vec<Ball>,
}

impl From<&Packing> for PackingDocument {
    fn from(p: &Packing) -> Self {
        Self {
            format: PACKING_FORMAT.to_string(),
            dimension: p.dimension,
            tol_rel: p.tol_rel,
            balls: p.balls.clone(),
        }
    }
}

impl PackingDocument {
    pub fn into_packing(self) -> Result<Packing> {
        if self.format != PACKING_FORMAT {
            return Err(invalid(format!("format: expected \"{PACKING_FORMAT}\", found \"{}\"", self.format)));
        }
        Packing::new(self.dimension, self.balls, self.tol_rel)
    }
}

pub fn packing_from_json(text: &str) -> Result<Packing> {
    let doc: PackingDocument = serde_json::from_str(text)?;
    doc.into_packing()
}

pub fn packing_to_json(p: &Packing) -> String {
    serde_json::to_string_pretty(&PackingDocument::from(p)).expect("packing serializes")
}

/// Writes `id,x1,…,xd,r` rows.
pub fn packing_to_csv(p: &Packing) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id".to_string()];
    header.extend((1..=p.dimension).map(|i| format!("x{i}")));
    header.push("r".to_string());
    w.write_record(&header).expect("in-memory write");
    for b in &p.balls {
        let mut row = vec![b.id.to_string()];
        row.extend(b.center.iter().map(|x| format!("{x:?}")));
        row.push(format!("{:?}", b.radius));
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

/// Reads the CSV form; the dimension comes from the header and `tol_rel` from the caller.
pub fn packing_from_csv(text: &str, tol_rel: f64) -> Result<Packing> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = r
        .headers()
        .map_err(|e| csv_error(&e, 1))?
        .iter()
        .map(str::to_string)
        .collect::<Vec<_>>();
    let d = header.len().checked_sub(2).filter(|&d| d >= 1).ok_or_else(|| Error::Parse {
        line: 1,
        column: 1,
        message: "header must be id,x1,...,xd,r".into(),
    })?;
    let expected: Vec<String> = std::iter::once("id".to_string())
        .chain((1..=d).map(|i| format!("x{i}")))
        .chain(std::iter::once("r".to_string()))
        .collect();
    if header != expected {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("header must be {}", expected.join(",")),
        });
    }
    let mut balls = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_error(&e, 0))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| -> Result<&str> {
            rec.get(i).ok_or_else(|| Error::Parse {
                line,
                column: i + 1,
                message: "missing field".into(),
            })
        };
        let real = |i: usize| -> Result<f64> {
            field(i)?.parse::<f64>().map_err(|e| Error::Parse {
                line,
                column: i + 1,
                message: format!("field {}: {e}", expected[i]),
            })
        };
        let id = field(0)?.parse::<u64>().map_err(|e| Error::Parse {
            line,
            column: 1,
            message: format!("field id: {e}"),
        })?;
        let center = (1..=d).map(real).collect::<Result<Vec<_>>>()?;
        balls.push(Ball {
            id,
            center,
            radius: real(d + 1)?,
        });
    }
    Packing::new(d, balls, tol_rel)
}

fn csv_error(e: &csv::Error, fallback_line: usize) -> Error {
    let line = e.position().map_or(fallback_line, |p| p.line() as usize);
    Error::Parse {
        line,
        column: 1,
        message: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{apollonian_gasket, hexagonal_packing};

    #[test]
    fn json_round_trip_is_exact() {
        let p = apollonian_gasket(3).unwrap().packing();
        assert_eq!(packing_from_json(&packing_to_json(&p)).unwrap(), p);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let p = hexagonal_packing(3, 4).unwrap();
        let text = packing_to_csv(&p);
        assert!(text.starts_with("id,x1,x2,r\n"));
        assert_eq!(packing_from_csv(&text, p.tol_rel).unwrap(), p);
    }

    #[test]
    fn csv_errors_name_the_line() {
        let bad = "id,x1,r\n0,0.0,1.0\n1,abc,1.0\n";
        match packing_from_csv(bad, 1e-9) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 2)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(packing_from_csv("a,b\n", 1e-9).is_err());
    }

    #[test]
    fn document_checks_format_and_dimension() {
        let doc = r#"{"format":"dpack-packing/1","dimension":2,"tol_rel":1e-9,"balls":[{"id":0,"center":[0,0,0],"radius":1}]}"#;
        assert!(packing_from_json(doc).unwrap_err().to_string().contains("balls[0]"));
        let other = doc.replace("dpack-packing/1", "other/1");
        assert!(packing_from_json(&other).is_err());
    }
}
