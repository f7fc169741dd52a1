use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::numfmt::sig17;

/// Row-major `n × d` matrix of finite observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    n: usize,
    d: usize,
    values: Vec<f64>,
    column_names: Vec<String>,
}

impl Dataset {
    /// Columns get the default names `U1..Ud`.
    pub fn from_rows(n: usize, d: usize, values: Vec<f64>) -> Result<Self> {
        let names = (1..=d).map(|i| format!("U{i}")).collect();
        Self::with_names(n, d, values, names)
    }

    pub fn with_names(n: usize, d: usize, values: Vec<f64>, column_names: Vec<String>) -> Result<Self> {
        if n < 1 {
            return Err(Error::Data("dataset needs at least one row".into()));
        }
        if d < 2 {
            return Err(Error::Data(format!("dataset needs at least two columns, got {d}")));
        }
        if values.len() != n * d {
            return Err(Error::Data(format!(
                "{} values do not fill a {n} x {d} matrix",
                values.len()
            )));
        }
        if column_names.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: column_names.len(),
            });
        }
        if let Some(k) = values.iter().position(|x| !x.is_finite()) {
            return Err(Error::Parse {
                row: k / d + 1,
                column: k % d + 1,
                message: format!("non-finite value {}", values[k]),
            });
        }
        Ok(Dataset {
            n,
            d,
            values,
            column_names,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.d + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.d..(row + 1) * self.d]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.d)
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().skip(col).step_by(self.d).copied()
    }

    /// New dataset made of the listed columns, in that order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        if let Some(&bad) = cols.iter().find(|&&c| c >= self.d) {
            return Err(Error::Data(format!("column {} out of range 1..={}", bad + 1, self.d)));
        }
        let values = self.rows().flat_map(|r| cols.iter().map(move |&c| r[c])).collect();
        let names = cols.iter().map(|&c| self.column_names[c].clone()).collect();
        Self::with_names(self.n, cols.len(), values, names)
    }

    /// Applies `f` to every entry of one column.
    pub fn map_column(&self, col: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut values = self.values.clone();
        for v in values.iter_mut().skip(col).step_by(self.d) {
            *v = f(*v);
        }
        Self::with_names(self.n, self.d, values, self.column_names.clone())
    }

    /// Header of column names, then one line per row, 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.column_names)?;
        for row in self.rows() {
            w.write_record(row.iter().map(|x| sig17(*x)))?;
        }
        w.flush().map_err(|e| Error::Data(format!("flushing CSV output: {e}")))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    /// Reads a CSV with a header row. A first line made only of numbers is
    /// taken as data and the columns get default names.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(input);
        let mut records = reader.records();
        let first = match records.next() {
            Some(r) => r?,
            None => return Err(Error::Data("empty CSV input".into())),
        };
        let d = first.len();
        let header_is_data = first.iter().all(|f| f.parse::<f64>().is_ok());
        let mut values = Vec::new();
        let mut line = 1;
        let mut names = None;
        let push = |record: &csv::StringRecord, line: usize, values: &mut Vec<f64>| -> Result<()> {
            if record.len() != d {
                return Err(Error::Parse {
                    row: line,
                    column: record.len().min(d) + 1,
                    message: format!("expected {d} fields, found {}", record.len()),
                });
            }
            for (c, field) in record.iter().enumerate() {
                let x: f64 = field.parse().map_err(|_| Error::Parse {
                    row: line,
                    column: c + 1,
                    message: format!("non-numeric value {field:?}"),
                })?;
                values.push(x);
            }
            Ok(())
        };
        if header_is_data {
            push(&first, line, &mut values)?;
        } else {
            names = Some(first.iter().map(str::to_string).collect::<Vec<_>>());
        }
        for record in records {
            line += 1;
            push(&record?, line, &mut values)?;
        }
        if d == 0 || values.is_empty() {
            return Err(Error::Data("CSV holds no data rows".into()));
        }
        let n = values.len() / d;
        match names {
            Some(names) => Self::with_names(n, d, values, names),
            None => Self::from_rows(n, d, values),
        }
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv(std::io::BufReader::new(file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn csv_layout() {
        let d = Dataset::from_rows(2, 2, vec![0.1, 0.5, 1.0, 0.25]).unwrap();
        assert_eq!(d.to_csv_string(), "U1,U2\n0.10000000000000001,0.5\n1,0.25\n");
        assert_eq!(d.column(1).collect::<Vec<_>>(), vec![0.5, 0.25]);
        assert_eq!(d.row(1), &[1.0, 0.25]);
    }

    #[test]
    fn reads_headerless_and_reports_bad_cell() {
        let d = Dataset::read_csv("1,2\n3,4\n".as_bytes()).unwrap();
        assert_eq!((d.n(), d.d()), (2, 2));
        assert_eq!(d.column_names(), &["U1".to_string(), "U2".to_string()]);
        let err = Dataset::read_csv("a,b,c\n1,2,3\n4,x,6\n".as_bytes()).unwrap_err();
        match err {
            Error::Parse { row, column, .. } => assert_eq!((row, column), (3, 2)),
            other => panic!("{other:?}"),
        }
        let err = Dataset::read_csv("a,b\n1,2\n3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 3, .. }));
        assert!(Dataset::read_csv("".as_bytes()).is_err());
        assert!(Dataset::read_csv("a,b\n".as_bytes()).is_err());
        assert!(Dataset::read_csv("a\n1\n".as_bytes()).is_err());
        assert!(Dataset::read_csv("a,b\n1,inf\n".as_bytes()).is_err());
    }

    #[test]
    fn shape_checks() {
        assert!(Dataset::from_rows(0, 2, vec![]).is_err());
        assert!(Dataset::from_rows(1, 1, vec![0.3]).is_err());
        assert!(Dataset::from_rows(2, 2, vec![0.3; 3]).is_err());
        assert!(Dataset::with_names(1, 2, vec![0.3; 2], vec!["a".into()]).is_err());
    }

    proptest! {
        #[test]
        fn csv_round_trip(n in 1usize..20, d in 2usize..5, seed in any::<u64>()) {
            let mut rng = crate::sampling::RngStream::new(seed, 0);
            let values: Vec<f64> = (0..n * d).map(|_| rng.uniform() * 1e3 - 500.0).collect();
            let data = Dataset::from_rows(n, d, values).unwrap();
            let back = Dataset::read_csv(data.to_csv_string().as_bytes()).unwrap();
            prop_assert_eq!(back, data);
        }
    }
}
