//! Polynomial extrapolation of sampled limits to step zero.

/// Result of an extrapolation tableau.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    pub value: f64,
    /// `|T[n][n] − T[n−1][n−1]|`, the gap between the last two diagonal
    /// extrapolants.
    pub error_estimate: f64,
    /// Diagonal of the tableau, one entry per sample.
    pub diagonal: Vec<f64>,
}

/// Richardson extrapolation to `h = 0` in the variable `x = h^order`.
///
/// Uses Neville's recursion, so the steps need not be geometric; for a
/// geometric schedule it reduces to the classical Richardson table.
/// Symmetric difference quotients use `order = 2`.
pub fn richardson(steps: &[f64], values: &[f64], order: i32) -> Extrapolation {
    assert_eq!(steps.len(), values.len(), "one value per step");
    assert!(!values.is_empty(), "richardson needs at least one sample");
    let x: Vec<f64> = steps.iter().map(|h| h.powi(order)).collect();
    let n = values.len();
    let mut prev: Vec<f64> = Vec::with_capacity(n);
    let mut diagonal = Vec::with_capacity(n);
    for k in 0..n {
        let mut row = Vec::with_capacity(k + 1);
        row.push(values[k]);
        for j in 1..=k {
            let (xa, xb) = (x[k - j], x[k]);
            row.push((xa * row[j - 1] - xb * prev[j - 1]) / (xa - xb));
        }
        diagonal.push(row[k]);
        prev = row;
    }
    let value = diagonal[n - 1];
    let error_estimate = if n >= 2 {
        (diagonal[n - 1] - diagonal[n - 2]).abs()
    } else {
        f64::INFINITY
    };
    Extrapolation {
        value,
        error_estimate,
        diagonal,
    }
}
