//! `cell_id,value` CSV files of cochains.

use csv::{ReaderBuilder, Writer};

use crate::cochain::Cochain;
use crate::complex::CellRef;
use crate::error::{Error, Result};

/// Header line followed by one row per cell; values keep 17 significant digits.
pub fn signal_to_csv(s: &Cochain) -> String {
    let mut w = Writer::from_writer(Vec::new());
    w.write_record(["cell_id", "value"])
        .expect("in-memory write");
    for (id, v) in s.ids().iter().zip(s.values()) {
        w.write_record([id.to_string(), format!("{v:.16e}")])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

/// Parses a signal CSV, keeping the row order of the file.
pub fn signal_from_csv(text: &str) -> Result<Cochain> {
    let mut r = ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = r.headers()?.clone();
    if header.len() != 2 || &header[0] != "cell_id" || &header[1] != "value" {
        return Err(Error::SignalFormat(format!(
            "expected header `cell_id,value`, found `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut ids = Vec::new();
    let mut values = Vec::new();
    for row in r.records() {
        let row = row?;
        let id: CellRef = row[0].parse()?;
        let v: f64 = row[1]
            .parse()
            .map_err(|_| Error::SignalFormat(format!("{id}: `{}` is not a number", &row[1])))?;
        ids.push(id);
        values.push(v);
    }
    Cochain::new(ids, values)
}

/// Reorders a parsed signal onto `ids`, failing on missing or extra cells.
pub fn align_signal(s: &Cochain, ids: &[CellRef]) -> Result<Cochain> {
    if s.len() != ids.len() {
        return Err(Error::IndexMismatch(format!(
            "signal has {} cells, the operator domain has {}",
            s.len(),
            ids.len()
        )));
    }
    let values = ids
        .iter()
        .map(|id| {
            s.get(id)
                .ok_or_else(|| Error::IndexMismatch(format!("no value for {id}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Cochain::new(ids.to_vec(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{CellClass, LayerPair};

    fn edge(index: usize) -> CellRef {
        CellRef::Cross {
            pair: LayerPair::new(1, 2).unwrap(),
            class: CellClass::CROSS_EDGE,
            index,
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let s = Cochain::new(vec![edge(0), edge(1)], vec![0.1, -1.0 / 3.0]).unwrap();
        let text = signal_to_csv(&s);
        assert!(text.starts_with("cell_id,value\n\"X1-2/c0,0/0\","));
        assert_eq!(signal_from_csv(&text).unwrap(), s);
    }

    #[test]
    fn alignment() {
        let s = Cochain::new(vec![edge(1), edge(0)], vec![2.0, 1.0]).unwrap();
        let a = align_signal(&s, &[edge(0), edge(1)]).unwrap();
        assert_eq!(a.values(), &[1.0, 2.0]);
        assert!(align_signal(&s, &[edge(0), edge(2)]).is_err());
        assert!(align_signal(&s, &[edge(0)]).is_err());
    }

    #[test]
    fn malformed_files() {
        assert!(signal_from_csv("id,v\n").is_err());
        assert!(signal_from_csv("cell_id,value\nL1/k0/0,abc\n").is_err());
        assert!(matches!(
            signal_from_csv("cell_id,value\nQ1,1.0\n"),
            Err(Error::InvalidCellId(_))
        ));
    }
}
