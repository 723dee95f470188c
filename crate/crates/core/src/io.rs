//! Text formats: matrix JSON, distribution and energy CSV, `ε`-grid specs.
//!
//! Matrices are `{"dim": n, "re": [[…]], "im": [[…]]}` in row-major order;
//! `im` may be omitted for real matrices. Distributions are CSV with header
//! `atom,weight[,density]`: without a density column the weights are the
//! probabilities of each atom against counting measure, with one they are
//! the reference weights `λ_a` and the density column is `dμ/dλ`. Energies
//! are CSV `atom,energy[,weight]`, weights defaulting to 1.

use serde::{Deserialize, Serialize};

use crate::classical::{DiscreteDensity, DiscreteMeasure};
use crate::error::{Error, Result};
use crate::orlicz::EpsGrid;
use crate::spectral::{CMatrix, HermitianMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let rows = |f: fn(&num_complex::Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        let im = rows(|z| z.im);
        Self {
            dim: m.nrows(),
            re: rows(|z| z.re),
            im: im.iter().flatten().any(|&x| x != 0.0).then_some(im),
        }
    }

    fn check_shape(&self, rows: &[Vec<f64>], part: &str) -> Result<()> {
        if rows.len() != self.dim {
            return Err(Error::Parse(format!(
                "`{part}` has {} rows, expected dim = {}",
                rows.len(),
                self.dim
            )));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != self.dim) {
            return Err(Error::Parse(format!(
                "`{part}` row {i} has {} entries, expected {}",
                r.len(),
                self.dim
            )));
        }
        Ok(())
    }

    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        if self.dim == 0 {
            return Err(Error::Empty);
        }
        self.check_shape(&self.re, "re")?;
        if let Some(im) = &self.im {
            self.check_shape(im, "im")?;
        }
        HermitianMatrix::from_parts(&self.re, self.im.as_deref())
    }
}

pub fn parse_matrix_json(text: &str) -> Result<HermitianMatrix> {
    let file: MatrixFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
    file.to_hermitian()
}

pub fn matrix_to_json(m: &CMatrix) -> String {
    serde_json::to_string_pretty(&MatrixFile::from_matrix(m)).expect("matrices serialize")
}

fn parse_number(field: &str, column: &str, line: u64) -> Result<f64> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: `{column}` is not a number: {field:?}")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("line {line}: `{column}` must be finite")));
    }
    Ok(v)
}

/// Rows of a CSV whose header is `first,second[,third]`.
fn read_table(text: &str, columns: [&str; 3]) -> Result<(Vec<String>, Vec<f64>, Option<Vec<f64>>)> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::Parse(format!("CSV header: {e}")))?
        .clone();
    let names: Vec<&str> = header.iter().collect();
    let third = match names.as_slice() {
        [a, b] if *a == columns[0] && *b == columns[1] => false,
        [a, b, c] if *a == columns[0] && *b == columns[1] && *c == columns[2] => true,
        _ => {
            return Err(Error::Parse(format!(
                "CSV header must be `{},{}[,{}]`, got `{}`",
                columns[0],
                columns[1],
                columns[2],
                names.join(",")
            )))
        }
    };
    let (mut atoms, mut seconds, mut thirds) = (Vec::new(), Vec::new(), Vec::new());
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse(format!("CSV: {e}")))?;
        let line = record.position().map_or(0, |p| p.line());
        atoms.push(record[0].to_string());
        seconds.push(parse_number(&record[1], columns[1], line)?);
        if third {
            thirds.push(parse_number(&record[2], columns[2], line)?);
        }
    }
    if atoms.is_empty() {
        return Err(Error::Parse("CSV has no rows".into()));
    }
    Ok((atoms, seconds, third.then_some(thirds)))
}

pub fn parse_distribution_csv(text: &str) -> Result<DiscreteDensity> {
    let (atoms, weights, density) = read_table(text, ["atom", "weight", "density"])?;
    match density {
        None => {
            let n = atoms.len();
            DiscreteDensity::new(DiscreteMeasure::new(atoms, vec![1.0; n])?, weights)
        }
        Some(values) => DiscreteDensity::new(DiscreteMeasure::new(atoms, weights)?, values),
    }
}

/// Energies per atom and the reference measure they live on.
pub fn parse_energies_csv(text: &str) -> Result<(Vec<f64>, DiscreteMeasure)> {
    let (atoms, energies, weights) = read_table(text, ["atom", "energy", "weight"])?;
    let n = atoms.len();
    let lambda = DiscreteMeasure::new(atoms, weights.unwrap_or_else(|| vec![1.0; n]))?;
    Ok((energies, lambda))
}

/// `lo:hi:n`, log-spaced.
pub fn parse_eps_grid(spec: &str) -> Result<EpsGrid> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(Error::Parse(format!("ε-grid must look like lo:hi:n, got {spec:?}")));
    };
    let num = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("ε-grid bound {s:?} is not a number")))
    };
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("ε-grid count {n:?} is not a positive integer")))?;
    EpsGrid::log_spaced(num(lo)?, num(hi)?, n)
}
